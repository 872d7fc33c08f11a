//! Exact growth diagnostics for the coefficients of a formal change.
//!
//! A line of coefficients `c_n` is tested through the exact ratios
//! `q_n = c_{n+1} c_{n-1} / c_n^2`. If `|q_n| >= sqrt 2` on a whole window,
//! `log |c_n|` is convex with second difference at least `log 2 / 2` there,
//! which is the signature of `|c_n|^{1/n} -> infinity`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::series::BiSeries;

/// Consecutive ratios needed before a verdict is given.
const WINDOW: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    /// Ratios `|c_{n+1} / c_n|` are non-increasing on the window.
    Bounded,
    /// `|q_n| >= sqrt 2` on the window.
    GrowthDetected,
    Insufficient,
}

impl fmt::Display for GrowthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthVerdict::Bounded => "Bounded",
            GrowthVerdict::GrowthDetected => "GrowthDetected",
            GrowthVerdict::Insufficient => "Insufficient",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Line {
    /// Coefficients of `z^n w^m` for fixed `m`.
    Row(u32),
    /// Coefficients of `z^m w^n` for fixed `m`.
    Column(u32),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(m) => write!(f, "w^{m}"),
            Line::Column(m) => write!(f, "z^{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineGrowth {
    pub line: Line,
    /// `(n, c_n)` over the nonzero coefficients.
    pub samples: Vec<(u32, Scalar)>,
    /// `|c_n|^2`, exactly.
    pub norms_sq: Vec<(u32, Scalar)>,
    pub verdict: GrowthVerdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceReport {
    pub lines: Vec<LineGrowth>,
    pub verdict: GrowthVerdict,
}

impl DivergenceReport {
    pub fn line(&self, line: Line) -> Option<&LineGrowth> {
        self.lines.iter().find(|l| l.line == line)
    }
}

fn ge(x: &Scalar) -> Option<bool> {
    x.modulus_compare().ok().map(|o| o != Ordering::Less)
}

fn le(x: &Scalar) -> Option<bool> {
    x.modulus_compare().ok().map(|o| o != Ordering::Greater)
}

/// Growth verdict for one line of a series.
pub fn series_growth(s: &BiSeries, line: Line) -> Result<LineGrowth> {
    let n_max = s.trunc();
    let coeff = |n: u32| match line {
        Line::Row(m) => s.coeff(n, m),
        Line::Column(m) => s.coeff(m, n),
    };
    let all: Vec<(u32, Scalar)> = (0..=n_max).map(|n| (n, coeff(n))).collect();
    let samples: Vec<(u32, Scalar)> = all.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
    let norms_sq = samples.iter().map(|(n, c)| (*n, c.norm_sq())).collect();

    // the longest run of consecutive nonzero terms ending at the top
    let mut run: Vec<&Scalar> = Vec::new();
    for (_, c) in all.iter().rev() {
        if c.is_zero() {
            if run.is_empty() {
                continue;
            }
            break;
        }
        run.push(c);
    }
    run.reverse();
    let mut verdict = GrowthVerdict::Insufficient;
    if run.len() >= WINDOW + 2 {
        let tail = &run[run.len() - WINDOW - 2..];
        let half = Scalar::ratio(1, 2);
        let mut grows = Some(true);
        let mut bounded = Some(true);
        for k in 1..=WINDOW {
            let q = (tail[k + 1] * tail[k - 1]).checked_div(&tail[k].pow(2))?;
            grows = grows.zip(ge(&(&q.pow(2) * &half))).map(|(a, b)| a && b);
            bounded = bounded.zip(le(&q)).map(|(a, b)| a && b);
        }
        verdict = match (grows, bounded) {
            (Some(true), _) => GrowthVerdict::GrowthDetected,
            (_, Some(true)) => GrowthVerdict::Bounded,
            _ => GrowthVerdict::Insufficient,
        };
    }
    Ok(LineGrowth { line, samples, norms_sq, verdict })
}

/// Tests rows `w^1..w^lines` and columns `z^1..z^lines`.
///
/// The overall verdict is `GrowthDetected` if any line shows growth, and
/// `Bounded` only if every line with enough data is bounded.
pub fn divergence_report(s: &BiSeries, lines: u32) -> Result<DivergenceReport> {
    let mut out = Vec::new();
    for m in 1..=lines {
        out.push(series_growth(s, Line::Row(m))?);
        out.push(series_growth(s, Line::Column(m))?);
    }
    let verdict = if out.iter().any(|l| l.verdict == GrowthVerdict::GrowthDetected) {
        GrowthVerdict::GrowthDetected
    } else if out.iter().any(|l| l.verdict == GrowthVerdict::Bounded)
        && out.iter().all(|l| l.verdict != GrowthVerdict::Insufficient || l.samples.len() < WINDOW + 2)
    {
        GrowthVerdict::Bounded
    } else {
        GrowthVerdict::Insufficient
    };
    Ok(DivergenceReport { lines: out, verdict })
}
