//! Randomness for the engine.
//!
//! Every random decision the engine makes goes through a [`RandomSource`].
//! Real runs use [`SeededSource`]; replaying a known trace uses
//! [`ScriptedSource`], which hands out a fixed list of draws in order and
//! refuses anything that does not line up with the script.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ParseError, RngError};

pub trait RandomSource {
    /// Uniform real in `[0, 1)`.
    fn next_float01(&mut self) -> Result<f64, RngError>;

    /// Uniform integer in `[lo, hi]`. Fails with [`RngError::InvalidRange`] when `lo > hi`.
    fn next_int_inclusive(&mut self, lo: i64, hi: i64) -> Result<i64, RngError>;
}

impl<S: RandomSource + ?Sized> RandomSource for &mut S {
    fn next_float01(&mut self) -> Result<f64, RngError> {
        (**self).next_float01()
    }

    fn next_int_inclusive(&mut self, lo: i64, hi: i64) -> Result<i64, RngError> {
        (**self).next_int_inclusive(lo, hi)
    }
}

impl<S: RandomSource + ?Sized> RandomSource for Box<S> {
    fn next_float01(&mut self) -> Result<f64, RngError> {
        (**self).next_float01()
    }

    fn next_int_inclusive(&mut self, lo: i64, hi: i64) -> Result<i64, RngError> {
        (**self).next_int_inclusive(lo, hi)
    }
}

/// ChaCha8 stream seeded from a `u64`.
///
/// Floats take the top 53 bits of one `u64` word; integers use rejection
/// sampling on whole words, so the mapping from seed to draws depends only on
/// the ChaCha8 keystream.
#[derive(Debug, Clone)]
pub struct SeededSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RandomSource for SeededSource {
    fn next_float01(&mut self) -> Result<f64, RngError> {
        Ok((self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
    }

    fn next_int_inclusive(&mut self, lo: i64, hi: i64) -> Result<i64, RngError> {
        if lo > hi {
            return Err(RngError::InvalidRange { lo, hi });
        }
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return Ok(self.rng.next_u64() as i64);
        }
        let span = span as u64;
        // Largest accepted word; (limit + 1) is a multiple of span.
        let limit = u64::MAX - (u64::MAX - span + 1) % span;
        loop {
            let word = self.rng.next_u64();
            if word <= limit {
                return Ok((lo as i128 + (word % span) as i128) as i64);
            }
        }
    }
}

/// One entry of a random script.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Draw {
    Float(f64),
    Int(i64),
}

impl Draw {
    fn kind(&self) -> &'static str {
        match self {
            Draw::Float(_) => "float",
            Draw::Int(_) => "int",
        }
    }
}

impl fmt::Display for Draw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Draw::Float(v) => write!(f, "f {v}"),
            Draw::Int(v) => write!(f, "i {v}"),
        }
    }
}

/// Replays a fixed sequence of draws. Each entry is consumed exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct ScriptedSource {
    draws: Vec<Draw>,
    cursor: usize,
}

impl ScriptedSource {
    pub fn new(draws: Vec<Draw>) -> Result<Self, RngError> {
        for (index, draw) in draws.iter().enumerate() {
            if let Draw::Float(value) = *draw {
                if !(0.0..1.0).contains(&value) {
                    return Err(RngError::FloatOutOfRange { index, value });
                }
            }
        }
        Ok(Self { draws, cursor: 0 })
    }

    pub fn draws(&self) -> &[Draw] {
        &self.draws
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.draws.len() - self.cursor
    }

    /// Canonical text form: one `f <value>` or `i <value>` line per draw.
    pub fn to_script(&self) -> String {
        self.draws.iter().map(|d| format!("{d}\n")).collect()
    }

    fn peek(&self, wanted: &'static str) -> Result<Draw, RngError> {
        let draw = self
            .draws
            .get(self.cursor)
            .copied()
            .ok_or(RngError::ScriptExhausted {
                consumed: self.cursor,
            })?;
        if draw.kind() != wanted {
            return Err(RngError::ScriptTypeMismatch {
                index: self.cursor,
                wanted,
                found: draw.kind(),
            });
        }
        Ok(draw)
    }
}

impl RandomSource for ScriptedSource {
    fn next_float01(&mut self) -> Result<f64, RngError> {
        match self.peek("float")? {
            Draw::Float(v) => {
                self.cursor += 1;
                Ok(v)
            }
            Draw::Int(_) => unreachable!(),
        }
    }

    fn next_int_inclusive(&mut self, lo: i64, hi: i64) -> Result<i64, RngError> {
        if lo > hi {
            return Err(RngError::InvalidRange { lo, hi });
        }
        match self.peek("int")? {
            Draw::Int(value) if (lo..=hi).contains(&value) => {
                self.cursor += 1;
                Ok(value)
            }
            Draw::Int(value) => Err(RngError::ScriptOutOfRange {
                index: self.cursor,
                value,
                lo,
                hi,
            }),
            Draw::Float(_) => unreachable!(),
        }
    }
}

/// Parses the line-oriented script format.
///
/// ```text
/// # selection draws
/// f 0.201
/// i 3
/// ```
pub fn parse_script(text: &str) -> Result<ScriptedSource, ParseError> {
    let mut draws = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| ParseError {
            line: line_no,
            message,
        };
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap_or_default();
        let value = parts
            .next()
            .ok_or_else(|| err(format!("missing value after `{tag}`")))?;
        if let Some(extra) = parts.next() {
            return Err(err(format!("unexpected trailing token `{extra}`")));
        }
        let draw = match tag {
            "f" => {
                let v =
                    f64::from_str(value).map_err(|e| err(format!("bad float `{value}`: {e}")))?;
                if !(0.0..1.0).contains(&v) {
                    return Err(err(format!("float {value} outside [0, 1)")));
                }
                Draw::Float(v)
            }
            "i" => Draw::Int(
                i64::from_str(value).map_err(|e| err(format!("bad integer `{value}`: {e}")))?,
            ),
            other => {
                return Err(err(format!(
                    "unknown draw tag `{other}`, expected `f` or `i`"
                )))
            }
        };
        draws.push(draw);
    }
    Ok(ScriptedSource { draws, cursor: 0 })
}

/// Wraps a source and counts the draws that pass through it.
#[derive(Debug, Clone)]
pub struct CountingSource<S> {
    inner: S,
    floats: usize,
    ints: usize,
}

impl<S> CountingSource<S> {
    pub fn new(inner: S) -> Self {
        Self {
            inner,
            floats: 0,
            ints: 0,
        }
    }

    pub fn floats(&self) -> usize {
        self.floats
    }

    pub fn ints(&self) -> usize {
        self.ints
    }

    pub fn reset(&mut self) {
        self.floats = 0;
        self.ints = 0;
    }

    pub fn into_inner(self) -> S {
        self.inner
    }
}

impl<S: RandomSource> RandomSource for CountingSource<S> {
    fn next_float01(&mut self) -> Result<f64, RngError> {
        let v = self.inner.next_float01()?;
        self.floats += 1;
        Ok(v)
    }

    fn next_int_inclusive(&mut self, lo: i64, hi: i64) -> Result<i64, RngError> {
        let v = self.inner.next_int_inclusive(lo, hi)?;
        self.ints += 1;
        Ok(v)
    }
}

/// Records every draw made by the wrapped source, so a seeded run can be
/// turned into a script.
#[derive(Debug, Clone)]
pub struct RecordingSource<S> {
    inner: S,
    log: Vec<Draw>,
}

impl<S> RecordingSource<S> {
    pub fn new(inner: S) -> Self {
        Self {
            inner,
            log: Vec::new(),
        }
    }

    pub fn draws(&self) -> &[Draw] {
        &self.log
    }

    pub fn into_script(self) -> ScriptedSource {
        ScriptedSource {
            draws: self.log,
            cursor: 0,
        }
    }
}

impl<S: RandomSource> RandomSource for RecordingSource<S> {
    fn next_float01(&mut self) -> Result<f64, RngError> {
        let v = self.inner.next_float01()?;
        self.log.push(Draw::Float(v));
        Ok(v)
    }

    fn next_int_inclusive(&mut self, lo: i64, hi: i64) -> Result<i64, RngError> {
        let v = self.inner.next_int_inclusive(lo, hi)?;
        self.log.push(Draw::Int(v));
        Ok(v)
    }
}
