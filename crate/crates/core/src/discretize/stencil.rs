// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StencilKind {
    Backward,
    Forward,
    Central,
}

impl fmt::Display for StencilKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StencilKind::Backward => "backward",
            StencilKind::Forward => "forward",
            StencilKind::Central => "central",
        })
    }
}

impl FromStr for StencilKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "backward" => Ok(StencilKind::Backward),
            "forward" => Ok(StencilKind::Forward),
            "central" => Ok(StencilKind::Central),
            other => Err(format!("unknown stencil kind `{other}`")),
        }
    }
}

/// Stencil family and accuracy order for one term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StencilChoice {
    pub kind: StencilKind,
    pub accuracy: usize,
}

impl StencilChoice {
    pub const fn new(kind: StencilKind, accuracy: usize) -> Self {
        Self { kind, accuracy }
    }
}

impl Default for StencilChoice {
    fn default() -> Self {
        Self::new(StencilKind::Central, 2)
    }
}

/// `∂^p u(x_i) ≈ Δx^{-p} Σ_m γ_m u_{i+m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilSpec {
    pub kind: StencilKind,
    pub order: usize,
    pub accuracy: usize,
    pub offsets: Vec<i64>,
    pub coeffs: Vec<Ratio<i64>>,
}

impl StencilSpec {
    pub fn coeff_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn width(&self) -> usize {
        self.offsets.len()
    }

    /// `Σ γ_m m^q / q!` evaluated exactly.
    pub fn moment(&self, q: u32) -> Ratio<i128> {
        let mut fact: i128 = 1;
        for k in 2..=q as i128 {
            fact *= k;
        }
        self.offsets.iter().zip(&self.coeffs).fold(Ratio::zero(), |acc, (&m, c)| {
            acc + Ratio::new(*c.numer() as i128 * (m as i128).pow(q), *c.denom() as i128 * fact)
        })
    }
}

/// Solve the moment conditions for the requested stencil in exact arithmetic.
pub fn build_stencil(kind: StencilKind, p: usize, g: usize) -> Result<StencilSpec> {
    if g == 0 {
        return Err(Error::Config("accuracy order must be at least 1".into()));
    }
    if p == 0 {
        return Ok(StencilSpec { kind, order: 0, accuracy: g, offsets: vec![0], coeffs: vec![Ratio::from_integer(1)] });
    }
    let offsets: Vec<i64> = match kind {
        StencilKind::Central => {
            if g % 2 == 1 {
                return Err(Error::Config(format!("central stencils need even accuracy, got {g}")));
            }
            let r = (p.div_ceil(2) + g / 2 - 1) as i64;
            (-r..=r).collect()
        }
        StencilKind::Backward => (-((p + g - 1) as i64)..=0).collect(),
        StencilKind::Forward => (0..=(p + g - 1) as i64).collect(),
    };
    let w = offsets.len();
    if w < p + g && kind != StencilKind::Central {
        return Err(Error::Config(format!("too few offsets for order {p} accuracy {g}")));
    }
    // Square system on q = 0..w-1.
    let mut m: Vec<Vec<BigRational>> = (0..w)
        .map(|q| {
            let fact: BigInt = (1..=q as i64).map(BigInt::from).product();
            let mut row: Vec<BigRational> =
                offsets.iter().map(|&o| BigRational::new(BigInt::from(o).pow(q as u32), fact.clone())).collect();
            row.push(if q == p { BigRational::one() } else { BigRational::zero() });
            row
        })
        .collect();
    gauss_solve(&mut m).ok_or_else(|| Error::Config(format!("singular moment system for {kind} p={p} g={g}")))?;
    let coeffs = (0..w)
        .map(|k| {
            let c = &m[k][w];
            let num = c.numer().to_i64().ok_or_else(|| Error::Numerical("stencil numerator overflow".into()))?;
            let den = c.denom().to_i64().ok_or_else(|| Error::Numerical("stencil denominator overflow".into()))?;
            Ok(Ratio::new(num, den))
        })
        .collect::<Result<Vec<_>>>()?;
    let spec = StencilSpec { kind, order: p, accuracy: g, offsets, coeffs };
    for q in 0..(p + g) as u32 {
        let want = if q as usize == p { Ratio::one() } else { Ratio::zero() };
        if spec.moment(q) != want {
            return Err(Error::Config(format!("stencil {kind} p={p} g={g} violates moment {q}")));
        }
    }
    Ok(spec)
}

/// Gauss-Jordan elimination on an augmented matrix; solution ends in the last column.
fn gauss_solve(m: &mut [Vec<BigRational>]) -> Option<()> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &factor * y;
                }
            }
        }
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Ratio<i64> {
        Ratio::new(p, q)
    }

    #[test]
    fn table_entries() {
        let s = build_stencil(StencilKind::Central, 2, 2).unwrap();
        assert_eq!(s.offsets, vec![-1, 0, 1]);
        assert_eq!(s.coeffs, vec![r(1, 1), r(-2, 1), r(1, 1)]);

        let s = build_stencil(StencilKind::Backward, 1, 1).unwrap();
        assert_eq!(s.offsets, vec![-1, 0]);
        assert_eq!(s.coeffs, vec![r(-1, 1), r(1, 1)]);

        let s = build_stencil(StencilKind::Central, 2, 4).unwrap();
        assert_eq!(s.offsets, vec![-2, -1, 0, 1, 2]);
        assert_eq!(s.coeffs, vec![r(-1, 12), r(4, 3), r(-5, 2), r(4, 3), r(-1, 12)]);

        let s = build_stencil(StencilKind::Central, 1, 2).unwrap();
        assert_eq!(s.coeffs, vec![r(-1, 2), r(0, 1), r(1, 2)]);

        let s = build_stencil(StencilKind::Forward, 1, 2).unwrap();
        assert_eq!(s.coeffs, vec![r(-3, 2), r(2, 1), r(-1, 2)]);
    }

    #[test]
    fn catalogue_satisfies_moments_exactly() {
        for kind in [StencilKind::Backward, StencilKind::Forward, StencilKind::Central] {
            for p in 1..=4 {
                for g in 1..=4 {
                    if kind == StencilKind::Central && g % 2 == 1 {
                        assert!(build_stencil(kind, p, g).is_err());
                        continue;
                    }
                    let s = build_stencil(kind, p, g).unwrap();
                    for q in 0..(p + g) as u32 {
                        let want = if q as usize == p { 1 } else { 0 };
                        assert_eq!(s.moment(q), Ratio::from_integer(want), "{kind} p={p} g={g} q={q}");
                    }
                }
            }
        }
    }
}
