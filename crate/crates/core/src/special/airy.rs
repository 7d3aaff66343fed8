//! Airy functions on a bounded interval via their Maclaurin series.
//!
//! Both `Ai` and `Bi` solve `f'' = x f`, so their Maclaurin coefficients obey
//! `a[m + 3] = a[m] / ((m + 3)(m + 2))` with `a[2] = 0`; only the initial
//! values differ. Partial sums are accumulated with Neumaier compensation.
//! Cancellation grows like `exp(2/3 |x|^1.5)` on the negative axis, which
//! leaves about 1e-12 absolute accuracy at `x = -6`.

use crate::error::{GpwError, Result};

/// Largest `|x|` accepted.
pub const AIRY_RANGE: f64 = 8.0;

/// Highest derivative order served by [`airy_derivatives`].
pub const AIRY_MAX_DERIVATIVE: usize = 20;

/// `Ai(0) = 3^(-2/3) / Gamma(2/3)`.
pub const AI_0: f64 = 0.355_028_053_887_817_2;
/// `Ai'(0) = -3^(-1/3) / Gamma(1/3)`.
pub const AI_PRIME_0: f64 = -0.258_819_403_792_806_8;
/// `Bi(0) = 3^(-1/6) / Gamma(2/3)`.
pub const BI_0: f64 = 0.614_926_627_446_000_7;
/// `Bi'(0) = 3^(1/6) / Gamma(1/3)`.
pub const BI_PRIME_0: f64 = 0.448_288_357_353_826_4;

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_range(x: f64) -> Result<()> {
    if x.is_finite() && x.abs() <= AIRY_RANGE {
        Ok(())
    } else {
        Err(GpwError::OutOfValidatedRange { x, limit: AIRY_RANGE })
    }
}

/// Solution of `f'' = x f` with `f(0) = f0`, `f'(0) = f1`, and its derivative.
fn series(x: f64, f0: f64, f1: f64) -> (f64, f64) {
    // three interleaved coefficient chains: a[m] for m = 0, 1, 2 mod 3
    let mut a = [f0, f1, 0.0];
    let mut value = Neumaier::default();
    let mut slope = Neumaier::default();
    let mut xm = 1.0; // x^m
    let mut xm1 = 0.0; // x^(m-1)
    let mut peak: f64 = 0.0;
    // one chain in three can be identically zero, so stop on a quiet window
    let mut window = [f64::INFINITY; 3];
    for m in 0..600usize {
        let coeff = a[m % 3];
        let term = coeff * xm;
        let dterm = m as f64 * coeff * xm1;
        value.add(term);
        slope.add(dterm);
        peak = peak.max(term.abs()).max(dterm.abs());
        window[m % 3] = term.abs() + dterm.abs();
        a[m % 3] = coeff / (((m + 3) * (m + 2)) as f64);
        xm1 = xm;
        xm *= x;
        if m > 6 && m as f64 > x.abs().powf(1.5) && window.iter().sum::<f64>() <= 1e-18 * peak.max(1e-300) {
            break;
        }
    }
    (value.total(), slope.total())
}

/// `(Ai(x), Ai'(x))` for `|x| <= 8`.
pub fn airy_ai(x: f64) -> Result<(f64, f64)> {
    check_range(x)?;
    Ok(series(x, AI_0, AI_PRIME_0))
}

/// `(Bi(x), Bi'(x))` for `|x| <= 8`.
pub fn airy_bi(x: f64) -> Result<(f64, f64)> {
    check_range(x)?;
    Ok(series(x, BI_0, BI_PRIME_0))
}

/// `Ai^(k)(x)` for `k = 0..=m`, from `Ai^(k+2) = x Ai^(k) + k Ai^(k-1)`.
pub fn airy_derivatives(x: f64, m: usize) -> Result<Vec<f64>> {
    if m > AIRY_MAX_DERIVATIVE {
        return Err(GpwError::UnsupportedDerivativeOrder {
            requested: m,
            supported: AIRY_MAX_DERIVATIVE,
        });
    }
    let (ai, aip) = airy_ai(x)?;
    let mut d = Vec::with_capacity(m + 2);
    d.push(ai);
    d.push(aip);
    for k in 0..m.saturating_sub(1) {
        let prev = if k == 0 { 0.0 } else { k as f64 * d[k - 1] };
        d.push(x * d[k] + prev);
    }
    d.truncate(m + 1);
    Ok(d)
}
