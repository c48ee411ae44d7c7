use std::fmt;

use thiserror::Error;

/// Failures raised by a [`RandomSource`](crate::rng::RandomSource).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RngError {
    #[error("random script exhausted after {consumed} draws")]
    ScriptExhausted { consumed: usize },
    #[error("random script entry {index} is {found}, but a {wanted} draw was requested")]
    ScriptTypeMismatch {
        index: usize,
        wanted: &'static str,
        found: &'static str,
    },
    #[error("random script entry {index} holds {value}, outside the requested range [{lo}, {hi}]")]
    ScriptOutOfRange {
        index: usize,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("invalid integer range: lo {lo} > hi {hi}")]
    InvalidRange { lo: i64, hi: i64 },
    #[error("random script entry {index} holds float {value}, outside [0, 1)")]
    FloatOutOfRange { index: usize, value: f64 },
}

impl RngError {
    pub fn is_exhausted(&self) -> bool {
        matches!(self, RngError::ScriptExhausted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// The stage of a generation that requested a random draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Initialization,
    Selection,
    CrossoverGating,
    CutPoints,
    MutationPositions,
    MutationValues,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Phase::Initialization => "initialization",
            Phase::Selection => "selection",
            Phase::CrossoverGating => "crossover gating",
            Phase::CutPoints => "cut-point selection",
            Phase::MutationPositions => "mutation position selection",
            Phase::MutationValues => "mutation value selection",
        };
        f.write_str(name)
    }
}

/// Where a draw failure happened. Generation 0 is population initialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DrawSite {
    pub phase: Phase,
    pub generation: Option<usize>,
}

impl fmt::Display for DrawSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        match self.generation {
            Some(0) | None => Ok(()),
            Some(g) => write!(f, ", generation {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("{}", describe_draw(.site, .source))]
    Draw {
        site: DrawSite,
        #[source]
        source: RngError,
    },
    #[error("chromosome has {actual} genes, objective expects {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid cut point {cut}: must lie in [1, {max}]")]
    InvalidCutPoint { cut: usize, max: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("objective value overflows a 64-bit cost")]
    CostOverflow,
    #[error(
        "search domain has {cells} cells, above the limit of {limit}; pass a cap to scan anyway"
    )]
    DomainTooLarge { cells: u128, limit: u128 },
}

fn describe_draw(site: &DrawSite, source: &RngError) -> String {
    if source.is_exhausted() {
        format!("random script exhausted during {site}")
    } else {
        format!("random draw failed during {site}: {source}")
    }
}

impl GaError {
    pub(crate) fn draw(phase: Phase) -> impl FnOnce(RngError) -> GaError {
        move |source| GaError::Draw {
            site: DrawSite {
                phase,
                generation: None,
            },
            source,
        }
    }

    /// Stamps the generation number onto a draw failure that lacks one.
    pub fn at_generation(self, generation: usize) -> GaError {
        match self {
            GaError::Draw { site, source } if site.generation.is_none() => GaError::Draw {
                site: DrawSite {
                    generation: Some(generation),
                    ..site
                },
                source,
            },
            other => other,
        }
    }
}

pub type Result<T, E = GaError> = std::result::Result<T, E>;
