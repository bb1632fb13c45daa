// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! 2×2 unitaries.

use crate::C64;

/// Row-major 2×2 complex matrix `[u00, u01, u10, u11]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct U2(pub [C64; 4]);

const Z0: C64 = C64 { re: 0.0, im: 0.0 };
const O1: C64 = C64 { re: 1.0, im: 0.0 };

impl U2 {
    pub fn new(u00: C64, u01: C64, u10: C64, u11: C64) -> Self {
        Self([u00, u01, u10, u11])
    }

    pub fn identity() -> Self {
        Self([O1, Z0, Z0, O1])
    }

    pub fn x() -> Self {
        Self([Z0, O1, O1, Z0])
    }

    pub fn y() -> Self {
        Self([Z0, C64::new(0.0, -1.0), C64::new(0.0, 1.0), Z0])
    }

    pub fn z() -> Self {
        Self::diag(O1, -O1)
    }

    pub fn h() -> Self {
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self([r, r, r, -r])
    }

    pub fn s() -> Self {
        Self::phase(std::f64::consts::FRAC_PI_2)
    }

    pub fn t() -> Self {
        Self::phase(std::f64::consts::FRAC_PI_4)
    }

    pub fn diag(a: C64, b: C64) -> Self {
        Self([a, Z0, Z0, b])
    }

    /// `diag(1, e^{iθ})`.
    pub fn phase(theta: f64) -> Self {
        Self::diag(O1, C64::from_polar(1.0, theta))
    }

    /// `e^{iθ}·I`.
    pub fn global(theta: f64) -> Self {
        let p = C64::from_polar(1.0, theta);
        Self::diag(p, p)
    }

    pub fn rx(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self([C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0)])
    }

    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self([C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)])
    }

    pub fn rz(theta: f64) -> Self {
        Self::diag(C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0))
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Self([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        p.max_diff(&Self::identity())
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_diff(&Self::identity()) <= tol
    }

    pub fn is_diagonal(&self) -> bool {
        self.0[1] == Z0 && self.0[2] == Z0
    }

    /// `(α, β, γ, δ)` with `U = e^{iα} Rz(β) Ry(γ) Rz(δ)`.
    pub fn zyz(&self) -> (f64, f64, f64, f64) {
        let [u00, u01, u10, u11] = self.0;
        let det = u00 * u11 - u01 * u10;
        let alpha = det.arg() / 2.0;
        let ph = C64::from_polar(1.0, -alpha);
        let (a, b) = (u00 * ph, u10 * ph);
        let gamma = 2.0 * b.norm().atan2(a.norm());
        let sum = if a.norm() > 1e-14 { -2.0 * a.arg() } else { 0.0 };
        let diff = if b.norm() > 1e-14 { 2.0 * b.arg() } else { 0.0 };
        let (beta, delta) = ((sum + diff) / 2.0, (sum - diff) / 2.0);
        (alpha, beta, gamma, delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_u2(r: &mut impl Rng) -> U2 {
        let a = r.gen_range(-3.0..3.0);
        U2::global(r.gen_range(-3.0..3.0))
            .mul(&U2::rz(a))
            .mul(&U2::ry(r.gen_range(-3.0..3.0)))
            .mul(&U2::rz(r.gen_range(-3.0..3.0)))
    }

    #[test]
    fn zyz_reconstructs() {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut cases: Vec<U2> = (0..200).map(|_| random_u2(&mut r)).collect();
        cases.extend([U2::x(), U2::y(), U2::z(), U2::h(), U2::identity(), U2::phase(0.3), U2::global(1.0)]);
        for u in cases {
            let (al, b, g, d) = u.zyz();
            let back = U2::global(al).mul(&U2::rz(b)).mul(&U2::ry(g)).mul(&U2::rz(d));
            assert!(back.max_diff(&u) < 1e-12, "{u:?}");
        }
    }

    #[test]
    fn standard_gates_are_unitary() {
        for u in [U2::x(), U2::y(), U2::z(), U2::h(), U2::s(), U2::t(), U2::rx(0.4), U2::ry(1.1), U2::rz(-2.0)] {
            assert!(u.unitarity_defect() < 1e-15);
            assert_eq!(u.adjoint().adjoint(), u);
        }
    }
}
