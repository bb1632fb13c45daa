// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Chebyshev-basis polynomials on `[-1, 1]`.

/// `Σ c_k T_k(x)` by Clenshaw recurrence.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(0.0) + x * b1 - b2
}

/// Convert `Σ m_k x^k` to Chebyshev coefficients.
pub fn from_monomial(mono: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; mono.len().max(1)];
    // Chebyshev expansion of x^k, updated by x·T_j = (T_{j+1} + T_{|j-1|})/2.
    let mut power = vec![1.0];
    for (k, &m) in mono.iter().enumerate() {
        if k > 0 {
            let mut next = vec![0.0; power.len() + 1];
            for (j, &p) in power.iter().enumerate() {
                next[j + 1] += 0.5 * p;
                if j == 0 {
                    // x·T_0 = T_1
                    next[1] += 0.5 * p;
                } else {
                    next[j - 1] += 0.5 * p;
                }
            }
            power = next;
        }
        for (j, &p) in power.iter().enumerate() {
            out[j] += m * p;
        }
    }
    trim(out)
}

pub fn trim(mut c: Vec<f64>) -> Vec<f64> {
    while c.len() > 1 && c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    c
}

pub fn degree(c: &[f64]) -> usize {
    c.iter().rposition(|v| *v != 0.0).unwrap_or(0)
}

/// `(even part, odd part)`.
pub fn split_parity(c: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let even = c.iter().enumerate().map(|(k, &v)| if k % 2 == 0 { v } else { 0.0 }).collect();
    let odd = c.iter().enumerate().map(|(k, &v)| if k % 2 == 1 { v } else { 0.0 }).collect();
    (trim(even), trim(odd))
}

/// `Some(0)` for even, `Some(1)` for odd, `None` for mixed parity.
pub fn parity(c: &[f64]) -> Option<usize> {
    let even = c.iter().step_by(2).any(|v| *v != 0.0);
    let odd = c.iter().skip(1).step_by(2).any(|v| *v != 0.0);
    match (even, odd) {
        (_, false) => Some(0),
        (false, true) => Some(1),
        _ => None,
    }
}

/// `max_{x∈[-1,1]} |p(x)|` sampled on a dense Chebyshev–Lobatto grid.
pub fn sup_norm(c: &[f64]) -> f64 {
    let m = (64 * (degree(c) + 1)).max(4096);
    (0..=m)
        .map(|j| eval(c, (std::f64::consts::PI * j as f64 / m as f64).cos()).abs())
        .fold(0.0, f64::max)
}

pub fn scale(c: &[f64], s: f64) -> Vec<f64> {
    c.iter().map(|v| v * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_convert() {
        // x^3 = (3T1 + T3)/4
        let c = from_monomial(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(c, vec![0.0, 0.75, 0.0, 0.25]);
        // 1 + x
        assert_eq!(from_monomial(&[1.0, 1.0]), vec![1.0, 1.0]);
        assert_eq!(from_monomial(&[0.0, 0.0, 1.0]), vec![0.5, 0.0, 0.5]);
        for x in [-0.9, -0.2, 0.3, 1.0] {
            let mono = [0.3, -1.0, 0.7, 2.0, -0.4];
            let direct: f64 = mono.iter().enumerate().map(|(k, m)| m * f64::powi(x, k as i32)).sum();
            assert!((eval(&from_monomial(&mono), x) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn clenshaw_matches_cosine_definition() {
        let c = [0.1, -0.4, 0.25, 0.0, 0.8];
        for x in [-1.0, -0.3, 0.5, 0.99] {
            let t: f64 = x;
            let th = t.acos();
            let want: f64 = c.iter().enumerate().map(|(k, v)| v * (k as f64 * th).cos()).sum();
            assert!((eval(&c, x) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn parity_and_sup() {
        assert_eq!(parity(&[0.0, 1.0, 0.0, 2.0]), Some(1));
        assert_eq!(parity(&[1.0, 0.0, 2.0]), Some(0));
        assert_eq!(parity(&[1.0, 1.0]), None);
        assert!((sup_norm(&[0.0, 0.0, 1.0]) - 1.0).abs() < 1e-12);
    }
}
