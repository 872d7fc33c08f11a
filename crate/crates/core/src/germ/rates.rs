//! Attraction rates `c(f^n)` and the two-sided bound against an exact `c_inf`.

use serde::Serialize;

use super::Germ;
use crate::error::{Error, Result};
use crate::series::Order;
use crate::valuations::QuadraticSurd;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub c_inf: QuadraticSurd,
    /// `c(f^n) <= c_inf^n` for every computed n.
    pub upper_holds: bool,
    /// The largest constant with `delta * c_inf^n <= c(f^n)` on the computed range.
    pub delta: QuadraticSurd,
    pub delta_attained_at: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatesReport {
    /// `rates[k] = c(f^{k+1})`.
    pub rates: Vec<u32>,
    /// `c(f^{n+m}) >= c(f^n) c(f^m)` on the computed range.
    pub supermultiplicative: bool,
    pub bound: Option<BoundCheck>,
}

impl RatesReport {
    /// Checks the two-sided bound against an exact asymptotic rate.
    pub fn check_against(&mut self, c_inf: &QuadraticSurd) {
        let mut upper = true;
        let mut best: Option<(QuadraticSurd, u32)> = None;
        for (k, &c) in self.rates.iter().enumerate() {
            let n = k as u32 + 1;
            let cn = QuadraticSurd::from_int(c as i64);
            let pow = c_inf.pow(n);
            if cn > pow {
                upper = false;
            }
            let ratio = &cn / &pow;
            let better = match &best {
                None => true,
                Some((b, _)) => ratio < *b,
            };
            if better {
                best = Some((ratio, n));
            }
        }
        if let Some((delta, at)) = best {
            self.bound = Some(BoundCheck { c_inf: c_inf.clone(), upper_holds: upper, delta, delta_attained_at: at });
        }
    }
}

/// `c(f^n)` for n = 1..=n_max, as the least multiplicity of the components.
pub fn attraction_rates(f: &Germ, n_max: u32) -> Result<RatesReport> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let mut rates = Vec::with_capacity(n_max as usize);
    let mut g = f.clone();
    for n in 1..=n_max {
        if n > 1 {
            g = f.compose(&g)?;
        }
        let c = match (g.f1.order(), g.f2.order()) {
            (Order::Finite(a), Order::Finite(b)) => a.min(b),
            _ => {
                return Err(Error::TruncationExhausted(format!(
                    "a component of f^{n} vanishes up to order {}; raise the truncation",
                    g.trunc()
                )))
            }
        };
        rates.push(c);
    }
    let mut sup = true;
    for n in 1..=rates.len() {
        for m in 1..=rates.len() {
            if n + m <= rates.len() && (rates[n + m - 1] as u64) < rates[n - 1] as u64 * rates[m - 1] as u64 {
                sup = false;
            }
        }
    }
    Ok(RatesReport { rates, supermultiplicative: sup, bound: None })
}
