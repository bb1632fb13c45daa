// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Uniformly controlled rotations, real-amplitude state preparation and
//! diagonal phase layers.

use crate::circuit::{Control, GateOp, U2};
use crate::{Error, Result};

const ANGLE_EPS: f64 = 1e-15;

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Rotation `make(angles[s])` on `target` for each basis value `s` of
/// `controls` (LSB first). Only the rotations carry `enable`.
fn uniformly_controlled(
    angles: &[f64],
    controls: &[usize],
    target: usize,
    enable: &[Control],
    make: fn(f64) -> U2,
) -> Vec<GateOp> {
    let k = controls.len();
    let m = 1usize << k;
    assert_eq!(angles.len(), m, "uniformly controlled rotation needs 2^k angles");
    let rot = |theta: f64| -> GateOp {
        if enable.is_empty() {
            GateOp::OneQubit { target, u: make(theta) }
        } else {
            GateOp::MultiControlled { controls: enable.to_vec(), target, u: make(theta) }
        }
    };
    // θ' = Mᵀθ / 2^k, M_{s,i} = (-1)^{popcount(s & gray(i))}.
    let transformed: Vec<f64> = (0..m)
        .map(|i| {
            let g = gray(i);
            angles
                .iter()
                .enumerate()
                .map(|(s, a)| if (s & g).count_ones().is_multiple_of(2) { *a } else { -*a })
                .sum::<f64>()
                / m as f64
        })
        .collect();
    let mut ops = Vec::new();
    if transformed[1..].iter().all(|t| t.abs() < ANGLE_EPS) {
        if transformed[0].abs() >= ANGLE_EPS {
            ops.push(rot(transformed[0]));
        }
        return ops;
    }
    for i in 0..m {
        if transformed[i].abs() >= ANGLE_EPS {
            ops.push(rot(transformed[i]));
        }
        let changed = (gray(i) ^ gray((i + 1) % m)).trailing_zeros() as usize;
        ops.push(GateOp::CNot { control: controls[changed], target });
    }
    ops
}

/// Uniformly controlled `R_y`.
pub fn uc_ry(angles: &[f64], controls: &[usize], target: usize, enable: &[Control]) -> Vec<GateOp> {
    uniformly_controlled(angles, controls, target, enable, U2::ry)
}

/// Uniformly controlled `R_z`.
pub fn uc_rz(angles: &[f64], controls: &[usize], target: usize, enable: &[Control]) -> Vec<GateOp> {
    uniformly_controlled(angles, controls, target, enable, U2::rz)
}

/// Prepare `Σ a_x |x⟩` from `|0⟩` for real `a` of length `2^qubits.len()`.
pub fn prepare_real(amps: &[f64], qubits: &[usize]) -> Result<Vec<GateOp>> {
    let m = qubits.len();
    if amps.len() != 1usize << m {
        return Err(Error::Dimension(format!("{} amplitudes for {m} qubits", amps.len())));
    }
    let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::Domain("cannot prepare the zero vector".into()));
    }
    let amps: Vec<f64> = amps.iter().map(|a| a / norm).collect();
    let mut ops = Vec::new();
    for level in (0..m).rev() {
        let prefixes = 1usize << (m - 1 - level);
        let half = 1usize << level;
        let angles: Vec<f64> = (0..prefixes)
            .map(|s| {
                let base = s << (level + 1);
                if level == 0 {
                    2.0 * amps[base + 1].atan2(amps[base])
                } else {
                    let nl = amps[base..base + half].iter().map(|a| a * a).sum::<f64>().sqrt();
                    let nr = amps[base + half..base + 2 * half].iter().map(|a| a * a).sum::<f64>().sqrt();
                    2.0 * nr.atan2(nl)
                }
            })
            .collect();
        ops.extend(uc_ry(&angles, &qubits[level + 1..], qubits[level], &[]));
    }
    Ok(ops)
}

/// Uniform superposition over the first `count` basis states.
pub fn prepare_uniform(count: usize, qubits: &[usize]) -> Result<Vec<GateOp>> {
    let size = 1usize << qubits.len();
    if count == 0 || count > size {
        return Err(Error::Domain(format!("uniform state over {count} of {size} basis states")));
    }
    if count == size {
        return Ok(qubits.iter().map(|&q| GateOp::OneQubit { target: q, u: U2::h() }).collect());
    }
    let amps: Vec<f64> = (0..size).map(|i| if i < count { 1.0 } else { 0.0 }).collect();
    prepare_real(&amps, qubits)
}

/// `Σ_x e^{i φ_x} |x⟩⟨x|` on `qubits`, as recursive uniformly controlled
/// `R_z` layers and one global-phase gate.
pub fn diagonal_phases(phases: &[f64], qubits: &[usize]) -> Result<Vec<GateOp>> {
    let m = qubits.len();
    if phases.len() != 1usize << m || m == 0 {
        return Err(Error::Dimension(format!("{} phases for {m} qubits", phases.len())));
    }
    let mut ops = Vec::new();
    let mut current = phases.to_vec();
    for level in 0..m {
        let pairs = current.len() / 2;
        let diff: Vec<f64> = (0..pairs).map(|s| current[2 * s + 1] - current[2 * s]).collect();
        let mean: Vec<f64> = (0..pairs).map(|s| 0.5 * (current[2 * s + 1] + current[2 * s])).collect();
        ops.extend(uc_rz(&diff, &qubits[level + 1..], qubits[level], &[]));
        current = mean;
    }
    if current[0].abs() >= ANGLE_EPS {
        ops.push(GateOp::OneQubit { target: qubits[0], u: U2::global(current[0]) });
    }
    Ok(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::sim::{circuit_unitary, StateVector};
    use crate::C64;
    use rand::{Rng, SeedableRng};

    fn run(n: usize, ops: Vec<GateOp>) -> StateVector {
        let mut c = Circuit::with_data(n);
        c.extend_ops(ops);
        let mut s = StateVector::new(n).unwrap();
        s.apply(&c).unwrap();
        s
    }

    #[test]
    fn uc_ry_matches_blockwise_rotations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in 0..4 {
            let angles: Vec<f64> = (0..1 << k).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let controls: Vec<usize> = (1..=k).collect();
            let mut c = Circuit::with_data(k + 1);
            c.extend_ops(uc_ry(&angles, &controls, 0, &[]));
            let u = circuit_unitary(&c).unwrap();
            for s in 0..1usize << k {
                let r = U2::ry(angles[s]);
                for a in 0..2 {
                    for b in 0..2 {
                        let got = u[((s << 1) | a, (s << 1) | b)];
                        assert!((got - r.0[2 * a + b]).norm() < 1e-12, "k={k} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn disabled_uc_rotation_is_identity() {
        let angles = [0.3, -1.1, 2.0, 0.7];
        let mut c = Circuit::with_data(4);
        c.extend_ops(uc_ry(&angles, &[1, 2], 0, &[Control::on(3)]));
        let u = circuit_unitary(&c).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((u[(i, j)] - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn prepare_real_signed_amplitudes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for m in 1..5 {
            let amps: Vec<f64> = (0..1 << m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
            let s = run(m, prepare_real(&amps, &(0..m).collect::<Vec<_>>()).unwrap());
            for (x, a) in amps.iter().enumerate() {
                assert!((s.amplitudes()[x] - C64::new(a / norm, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn uniform_over_three() {
        let s = run(2, prepare_uniform(3, &[0, 1]).unwrap());
        for x in 0..3 {
            assert!((s.amplitudes()[x].re - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
        assert!(s.amplitudes()[3].norm() < 1e-12);
    }

    #[test]
    fn diagonal_phases_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for m in 1..5 {
            let phases: Vec<f64> = (0..1 << m).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let mut c = Circuit::with_data(m);
            c.extend_ops(diagonal_phases(&phases, &(0..m).collect::<Vec<_>>()).unwrap());
            let u = circuit_unitary(&c).unwrap();
            for (x, p) in phases.iter().enumerate() {
                assert!((u[(x, x)] - C64::from_polar(1.0, *p)).norm() < 1e-12);
            }
        }
    }
}
