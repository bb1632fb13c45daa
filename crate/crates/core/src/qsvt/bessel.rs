// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Bessel functions `J_k(x)` and Jacobi–Anger expansions.

/// `J_0(x), …, J_nmax(x)` by Miller's downward recurrence.
pub fn bessel_j(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let start = 2 * ((nmax.max(ax as usize) + 30 + (ax.sqrt() * 10.0) as usize) / 2);
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / ax * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx <= nmax {
            out[idx] = j;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
            jp1 *= 1e-250;
            j *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j;
    for v in out.iter_mut() {
        *v /= norm;
    }
    if x < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// Chebyshev coefficients of `cos(τx)` through degree `deg` (even terms only).
pub fn cos_expansion(tau: f64, deg: usize) -> Vec<f64> {
    let j = bessel_j(deg, tau);
    (0..=deg)
        .map(|k| match k {
            0 => j[0],
            k if k % 2 == 0 => 2.0 * if (k / 2) % 2 == 0 { 1.0 } else { -1.0 } * j[k],
            _ => 0.0,
        })
        .collect()
}

/// Chebyshev coefficients of `sin(τx)` through degree `deg` (odd terms only).
pub fn sin_expansion(tau: f64, deg: usize) -> Vec<f64> {
    let j = bessel_j(deg, tau);
    (0..=deg)
        .map(|k| if k % 2 == 1 { 2.0 * if (k / 2) % 2 == 0 { 1.0 } else { -1.0 } * j[k] } else { 0.0 })
        .collect()
}
