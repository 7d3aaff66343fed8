//! Plain-text record of a wave.
//!
//! ```text
//! gpw
//! anchor <x> <y>
//! n <re> <im>
//! theta <radians>
//! q <order>
//! lambda <i> <j> <re> <im>     (one line per coefficient, slot order)
//! end
//! ```
//!
//! Floats are written in shortest round-trip form, so parsing a record
//! reproduces the wave bit for bit.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::str::FromStr;

use super::Gpw;
use crate::error::{GpwError, Result};
use crate::geom::Point;
use crate::poly2::{multi_indices, TruncatedPoly2};

impl Gpw {
    pub fn to_record(&self) -> String {
        let mut s = String::new();
        let a = self.anchor();
        let _ = writeln!(s, "gpw");
        let _ = writeln!(s, "anchor {} {}", a.x, a.y);
        let _ = writeln!(s, "n {} {}", self.n().re, self.n().im);
        let _ = writeln!(s, "theta {}", self.theta());
        let _ = writeln!(s, "q {}", self.q());
        for (i, j) in multi_indices(self.phase().cap()) {
            let c = self.lambda(i, j);
            let _ = writeln!(s, "lambda {i} {j} {} {}", c.re, c.im);
        }
        s.push_str("end\n");
        s
    }

    /// Parses one record; `#` comment lines are skipped and text after `end`
    /// is ignored.
    pub fn from_record(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("gpw") {
            return Err(GpwError::Parse("expected 'gpw' header".into()));
        }
        let mut anchor = None;
        let mut n = None;
        let mut theta = None;
        let mut q = None;
        let mut terms = Vec::new();
        let mut closed = false;
        for line in lines.by_ref() {
            let mut it = line.split_whitespace();
            let key = it.next().unwrap_or_default();
            let rest: Vec<&str> = it.collect();
            match (key, rest.as_slice()) {
                ("anchor", [x, y]) => anchor = Some(Point::new(num(x)?, num(y)?)),
                ("n", [re, im]) => n = Some(Complex64::new(num(re)?, num(im)?)),
                ("theta", [t]) => theta = Some(num(t)?),
                ("q", [v]) => q = Some(num::<usize>(v)?),
                ("lambda", [i, j, re, im]) => {
                    terms.push((num::<usize>(i)?, num::<usize>(j)?, Complex64::new(num(re)?, num(im)?)))
                }
                ("end", []) => {
                    closed = true;
                    break;
                }
                _ => return Err(GpwError::Parse(format!("unexpected line '{line}'"))),
            }
        }
        if !closed {
            return Err(GpwError::Parse("missing 'end'".into()));
        }
        let missing = |what: &str| GpwError::Parse(format!("missing '{what}'"));
        let q = q.ok_or_else(|| missing("q"))?;
        let mut phase = TruncatedPoly2::zero(q + 1);
        for (i, j, c) in terms {
            if i + j > q + 1 {
                return Err(GpwError::Parse(format!("lambda ({i}, {j}) above degree {}", q + 1)));
            }
            phase.set(i, j, c);
        }
        Ok(Gpw::from_phase(
            anchor.ok_or_else(|| missing("anchor"))?,
            n.ok_or_else(|| missing("n"))?,
            theta.ok_or_else(|| missing("theta"))?,
            q,
            phase,
        ))
    }
}

fn num<T: FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| GpwError::Parse(format!("bad number '{s}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpw::{design_gpw, Normalization};
    use crate::special::field_affine;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn record_round_trips(
            x in -6.0..3.0f64, y in -1.0..1.0f64, theta in 0.0..6.3f64,
            q in 1usize..7, constant in any::<bool>()
        ) {
            let norm = if constant { Normalization::ConstantI } else { Normalization::Custom(Complex64::new(0.3, 1.7)) };
            let g = design_gpw(&field_affine(), Point::new(x, y), q, theta, norm).unwrap();
            let back = Gpw::from_record(&g.to_record()).unwrap();
            prop_assert_eq!(back, g);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(Gpw::from_record("nope").is_err());
        assert!(Gpw::from_record("gpw\nanchor 0 0\nn 0 1\ntheta 0\nq 1\n").is_err());
        assert!(Gpw::from_record("gpw\nanchor 0 0\nn 0 1\ntheta 0\nq 1\nlambda 5 0 1 0\nend\n").is_err());
        assert!(Gpw::from_record("gpw\nq 1\nend\n").is_err());
    }
}
