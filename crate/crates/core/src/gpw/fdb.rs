//! Bivariate Faa di Bruno formula by explicit partition enumeration.
//!
//! Multi-indices are ordered by `u < v` iff `|u| < |v|`, or `|u| = |v|` and
//! `u.0 < v.0`. A partition of `(i, j)` is a strictly increasing sequence of
//! nonzero multi-indices `v_1 < ... < v_s` with multiplicities `k_l > 0` such
//! that `sum k_l v_l = (i, j)`; its length is `mu = sum k_l`. Then
//!
//! ```text
//! d^i d^j f(g) / (i! j!) = sum_mu f^(mu)(g) sum_{partitions of length mu}
//!                          prod_l (g_{v_l})^{k_l} / k_l!
//! ```
//!
//! with `g_v` the scaled derivatives of `g`. The number of partitions grows
//! quickly, which is why [`FDB_MAX_ORDER`] caps the order.

use num_complex::Complex64;
use std::cmp::Ordering;

use crate::factorial;
use crate::poly2::TruncatedPoly2;

pub const FDB_MAX_ORDER: usize = 8;

/// One partition: `(multiplicity, multi-index)` pairs in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub parts: Vec<(usize, (usize, usize))>,
}

impl Partition {
    /// `mu`, the number of parts counted with multiplicity.
    pub fn length(&self) -> usize {
        self.parts.iter().map(|(k, _)| k).sum()
    }

    /// `s`, the number of distinct parts.
    pub fn distinct(&self) -> usize {
        self.parts.len()
    }
}

fn precedes(u: (usize, usize), v: (usize, usize)) -> Ordering {
    (u.0 + u.1).cmp(&(v.0 + v.1)).then(u.0.cmp(&v.0))
}

/// All partitions of `(i, j)`.
pub fn partitions(i: usize, j: usize) -> Vec<Partition> {
    let mut candidates: Vec<(usize, usize)> = (0..=i)
        .flat_map(|a| (0..=j).map(move |b| (a, b)))
        .filter(|&v| v != (0, 0))
        .collect();
    candidates.sort_by(|&u, &v| precedes(u, v));

    let mut out = Vec::new();
    let mut current = Vec::new();
    collect(&candidates, 0, (i, j), &mut current, &mut out);
    out
}

fn collect(
    candidates: &[(usize, usize)],
    start: usize,
    remaining: (usize, usize),
    current: &mut Vec<(usize, (usize, usize))>,
    out: &mut Vec<Partition>,
) {
    if remaining == (0, 0) {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for (idx, &v) in candidates.iter().enumerate().skip(start) {
        let mut k = 1;
        while k * v.0 <= remaining.0 && k * v.1 <= remaining.1 {
            current.push((k, v));
            collect(
                candidates,
                idx + 1,
                (remaining.0 - k * v.0, remaining.1 - k * v.1),
                current,
                out,
            );
            current.pop();
            k += 1;
        }
    }
}

/// Taylor coefficient `(i, j)` of `f(g(x, y))`.
///
/// `outer[mu]` holds `f^(mu)` evaluated at `g(anchor)` for `mu <= i + j`;
/// `inner` holds the scaled derivatives of `g` at the anchor.
pub fn bivariate_faa_di_bruno(outer: &[Complex64], inner: &TruncatedPoly2, i: usize, j: usize) -> Complex64 {
    if i + j == 0 {
        return outer[0];
    }
    let mut by_length = vec![Complex64::new(0.0, 0.0); i + j + 1];
    for part in partitions(i, j) {
        let mut term = Complex64::new(1.0, 0.0);
        for &(k, (a, b)) in &part.parts {
            term *= inner.get(a, b).powu(k as u32) / factorial(k);
        }
        by_length[part.length()] += term;
    }
    by_length
        .iter()
        .enumerate()
        .skip(1)
        .map(|(mu, s)| outer[mu] * s)
        .sum()
}
