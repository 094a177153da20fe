//! Exact synthesis of a diagonal unitary as MCZR gates.
//!
//! The angle of the gate on mask `v` is the signed subset sum
//!
//! ```text
//! θ_v = (-1)^{|v|} Σ_{x ⊆ v} (-1)^{|x|} α_x
//! ```
//!
//! which inverts the system `Σ_{v ⊆ x} θ_v = α_x`. The inverse is unique, so
//! the non-identity gates form the minimum gate set for `diag(e^{iα})`.
//! [`solve_angles_naive`] evaluates the sum term by term; [`solve_angles_fast`]
//! runs the same inversion as an in-place Möbius transform.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gate::{
    check_dense_qubits, full_bits, normalize_angle, GateMask, Layering, MczrGate, PhaseVector,
};
use crate::phasepoly::PhasePolynomial;

pub const MAX_NAIVE_QUBITS: u32 = 16;
pub const MAX_MATRIX_QUBITS: u32 = 6;

/// Coefficient matrix `J` of the angle system and its inverse `K`, indexed by
/// mask bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveMatrices {
    pub n: u32,
    /// `j[x][v] = 1` iff `v ⊆ x`.
    pub j: Vec<Vec<i64>>,
    /// `k[v][x] = (-1)^{|v|+|x|}` iff `x ⊆ v`.
    pub k: Vec<Vec<i64>>,
}

impl SolveMatrices {
    /// Integer product `K·J`.
    pub fn product(&self) -> Vec<Vec<i64>> {
        let size = self.j.len();
        (0..size)
            .map(|r| {
                (0..size)
                    .map(|c| (0..size).map(|t| self.k[r][t] * self.j[t][c]).sum())
                    .collect()
            })
            .collect()
    }
}

pub fn build_solve_matrices(n: u32) -> Result<SolveMatrices> {
    if n == 0 || n > MAX_MATRIX_QUBITS {
        return Err(Error::QubitCount {
            n,
            max: MAX_MATRIX_QUBITS,
        });
    }
    let size = 1usize << n;
    let sign = |a: usize, b: usize| {
        if (a.count_ones() + b.count_ones()) % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let j = (0..size)
        .map(|x| (0..size).map(|v| i64::from(v & !x == 0)).collect())
        .collect();
    let k = (0..size)
        .map(|v| {
            (0..size)
                .map(|x| if x & !v == 0 { sign(v, x) } else { 0 })
                .collect()
        })
        .collect();
    Ok(SolveMatrices { n, j, k })
}

/// Term-by-term angle solve, `O(3^n)`. Every coefficient is kept (zeros
/// included); the zero mask holds `α_0` as the global phase.
pub fn solve_angles_naive(alpha: &PhaseVector) -> Result<PhasePolynomial> {
    let n = alpha.n();
    if n > MAX_NAIVE_QUBITS {
        return Err(Error::QubitCount {
            n,
            max: MAX_NAIVE_QUBITS,
        });
    }
    let size = 1usize << n;
    let coeffs = (0..size)
        .map(|v| {
            let mut sum = 0.0;
            // descending walk over all submasks of v, ending with 0
            let mut x = v;
            loop {
                let term = alpha.phase_at(x);
                if x.count_ones() % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
                if x == 0 {
                    break;
                }
                x = (x - 1) & v;
            }
            if v.count_ones() % 2 == 1 {
                sum = -sum;
            }
            normalize_angle(sum)
        })
        .collect();
    Ok(PhasePolynomial::from_dense(n, coeffs))
}

/// Same result as [`solve_angles_naive`] in `n·2^(n-1)` subtractions.
pub fn solve_angles_fast(alpha: &PhaseVector) -> Result<PhasePolynomial> {
    let n = alpha.n();
    check_dense_qubits(n)?;
    let mut coeffs: Vec<f64> = (0..alpha.len()).map(|q| alpha.phase_at(q)).collect();
    mobius_in_place(&mut coeffs);
    coeffs.iter_mut().for_each(|c| *c = normalize_angle(*c));
    Ok(PhasePolynomial::from_dense(n, coeffs))
}

/// `c[i] <- Σ_{x ⊆ i} (-1)^{|i|-|x|} c[x]`. Length must be a power of two.
pub fn mobius_in_place(coeffs: &mut [f64]) {
    debug_assert!(coeffs.len().is_power_of_two());
    let mut step = 1;
    while step < coeffs.len() {
        for block in coeffs.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h -= *l;
            }
        }
        step <<= 1;
    }
}

/// Number of non-identity gates with a nonzero mask.
pub fn optimal_gate_count(poly: &PhasePolynomial) -> usize {
    poly.terms().count()
}

/// Key that a mask shares with its complement: the smaller of the two.
pub(crate) fn pair_key(bits: u64, n: u32) -> u64 {
    bits.min(!bits & full_bits(n))
}

/// Lays out every non-identity gate in complementary pairs: one layer per
/// pair `(v, !v)` in increasing order of the smaller mask, then the all-ones
/// mask alone. Missing partners leave single-gate layers.
pub fn pairwise_layout(poly: &PhasePolynomial) -> Layering {
    let n = poly.n();
    let full = full_bits(n);
    let mut slots: BTreeMap<u64, Vec<MczrGate>> = BTreeMap::new();
    let mut last = None;
    for (mask, theta) in poly.terms() {
        let gate = MczrGate::new(mask, theta);
        if mask.bits() == full {
            last = Some(gate);
        } else {
            slots.entry(pair_key(mask.bits(), n)).or_default().push(gate);
        }
    }
    // terms() yields increasing masks, so the lighter-valued mask comes first
    let mut layers: Vec<Vec<MczrGate>> = slots.into_values().collect();
    layers.extend(last.map(|g| vec![g]));
    Layering::from_layers_unchecked(n, layers)
}

/// Builds the polynomial of explicit `(mask, θ)` pairs on `n` qubits.
pub fn polynomial_from_angles(n: u32, angles: &[(u64, f64)]) -> Result<PhasePolynomial> {
    let terms = angles
        .iter()
        .map(|&(bits, t)| Ok((GateMask::new(bits, n)?, t)))
        .collect::<Result<Vec<_>>>()?;
    PhasePolynomial::from_terms(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::circular_distance;
    use crate::phasepoly::{equal_up_to_global_phase, simulate_diagonal};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn pv(alpha: &[f64]) -> PhaseVector {
        let n = alpha.len().trailing_zeros();
        PhaseVector::new(n, alpha.to_vec()).unwrap()
    }

    fn random_alpha(rng: &mut ChaCha8Rng, n: u32) -> PhaseVector {
        PhaseVector::new(n, (0..1 << n).map(|_| rng.gen_range(0.0..TAU)).collect()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        circular_distance(a, b) < 1e-12
    }

    /// Gaussian elimination on the dense system `Σ_{v ⊆ x} θ_v = α_x`.
    fn dense_linear_solve(alpha: &[f64]) -> Vec<f64> {
        let size = alpha.len();
        let mut a: Vec<Vec<f64>> = (0..size)
            .map(|x| {
                let mut row: Vec<f64> = (0..size).map(|v| f64::from(u8::from(v & !x == 0))).collect();
                row.push(alpha[x]);
                row
            })
            .collect();
        for col in 0..size {
            let piv = (col..size)
                .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
                .unwrap();
            a.swap(col, piv);
            for r in 0..size {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
        (0..size).map(|r| a[r][size] / a[r][r]).collect()
    }

    #[test]
    fn naive_one_qubit() {
        let poly = solve_angles_naive(&pv(&[0.4, 1.5])).unwrap();
        assert!(close(poly.global_phase(), 0.4));
        assert!(close(poly.coeff(1), 1.1));
    }

    #[test]
    fn zeros_solve_to_zeros() {
        for solve in [solve_angles_naive, solve_angles_fast] {
            let poly = solve(&PhaseVector::zeros(4).unwrap()).unwrap();
            assert_eq!(poly.len(), 16);
            assert!(poly.entries().all(|(_, t)| t == 0.0));
            assert_eq!(optimal_gate_count(&poly), 0);
        }
    }

    #[test]
    fn three_qubit_diagonal_inverts() {
        let (a, b, c) = (0.3, 1.2, 2.2);
        let alpha = pv(&[0.0, 0.0, 0.0, c, b, b, b, a + b + c]);
        for solve in [solve_angles_naive, solve_angles_fast] {
            let poly = solve(&alpha).unwrap();
            for v in 0..8u64 {
                let want = match v {
                    0b100 => b,
                    0b011 => c,
                    0b111 => a,
                    _ => 0.0,
                };
                assert!(close(poly.coeff(v), want), "mask {v:03b}");
            }
            assert_eq!(optimal_gate_count(&poly), 3);
        }
    }

    #[test]
    fn three_qubit_top_coefficient_matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let alpha = random_alpha(&mut rng, 3);
            let a = alpha.alpha();
            let by_formula = -a[0] + a[1] + a[2] - a[3] + a[4] - a[5] - a[6] + a[7];
            let dense = dense_linear_solve(a);
            let poly = solve_angles_naive(&alpha).unwrap();
            assert!(close(poly.coeff(0b111), by_formula));
            for v in 0..8u64 {
                assert!(close(poly.coeff(v), dense[v as usize]), "mask {v:03b}");
            }
        }
    }

    #[test]
    fn two_qubit_top_coefficient() {
        let a = [0.1, 0.5, 1.7, 2.9];
        let poly = solve_angles_fast(&pv(&a)).unwrap();
        assert!(close(poly.coeff(0b11), a[0] - a[1] - a[2] + a[3]));
    }

    #[test]
    fn indicator_pi_roundtrips() {
        for n in 1..=6 {
            let mut alpha = vec![0.0; 1 << n];
            alpha[(1 << n) - 1] = PI;
            let target = pv(&alpha);
            let poly = solve_angles_fast(&target).unwrap();
            // only the all-ones mask gets a gate
            assert_eq!(optimal_gate_count(&poly), 1);
            let seq = pairwise_layout(&poly).flatten();
            let back = simulate_diagonal(&seq).unwrap();
            assert!(equal_up_to_global_phase(&back, &target, 1e-9).unwrap());
        }
    }

    #[test]
    fn size_limits() {
        assert!(solve_angles_naive(&PhaseVector::zeros(17).unwrap()).is_err());
        assert!(build_solve_matrices(7).is_err());
        assert!(build_solve_matrices(0).is_err());
    }

    #[test]
    fn one_qubit_matrices() {
        let m = build_solve_matrices(1).unwrap();
        assert_eq!(m.j, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(m.k, vec![vec![1, 0], vec![-1, 1]]);
    }

    #[test]
    fn matrices_invert_exactly() {
        for n in 1..=MAX_MATRIX_QUBITS {
            let m = build_solve_matrices(n).unwrap();
            let size = 1usize << n;
            assert!(m.j[size - 1].iter().all(|&e| e == 1));
            let q = m.product();
            for (r, row) in q.iter().enumerate() {
                for (c, &e) in row.iter().enumerate() {
                    assert_eq!(e, i64::from(r == c));
                }
            }
        }
    }

    #[test]
    fn gate_count_worst_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let poly = solve_angles_fast(&random_alpha(&mut rng, 3)).unwrap();
        assert_eq!(optimal_gate_count(&poly), 7);
    }

    fn layer_bits(l: &Layering) -> Vec<Vec<u64>> {
        l.layers()
            .iter()
            .map(|layer| layer.iter().map(|g| g.mask().bits()).collect())
            .collect()
    }

    #[test]
    fn pairwise_full_support() {
        let angles: Vec<_> = (1..8).map(|v| (v, 0.1 * v as f64)).collect();
        let l = pairwise_layout(&polynomial_from_angles(3, &angles).unwrap());
        assert_eq!(
            layer_bits(&l),
            vec![vec![0b001, 0b110], vec![0b010, 0b101], vec![0b011, 0b100], vec![0b111]]
        );
    }

    #[test]
    fn pairwise_single_pair() {
        let l = pairwise_layout(&polynomial_from_angles(3, &[(0b001, 1.0), (0b110, 2.0)]).unwrap());
        assert_eq!(l.depth(), 1);
    }

    #[test]
    fn pairwise_without_partners() {
        let poly = polynomial_from_angles(3, &[(0b001, 1.0), (0b010, 2.0), (0b011, 0.5)]).unwrap();
        let l = pairwise_layout(&poly);
        assert_eq!(layer_bits(&l), vec![vec![0b001], vec![0b010], vec![0b011]]);
    }

    #[test]
    fn pairwise_skips_identity_angles() {
        let poly = polynomial_from_angles(3, &[(0b001, 0.0), (0b110, 2.0), (0b111, TAU)]).unwrap();
        assert_eq!(layer_bits(&pairwise_layout(&poly)), vec![vec![0b110]]);
    }

    #[test]
    fn perturbing_any_angle_breaks_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=6 {
            let alpha = random_alpha(&mut rng, n);
            let poly = solve_angles_fast(&alpha).unwrap();
            for v in 1..1u64 << n {
                let mut angles: Vec<(u64, f64)> = poly.terms().map(|(m, t)| (m.bits(), t)).collect();
                let slot = angles.iter_mut().find(|(b, _)| *b == v).unwrap();
                slot.1 += 1e-3;
                let seq = pairwise_layout(&polynomial_from_angles(n, &angles).unwrap()).flatten();
                let back = simulate_diagonal(&seq).unwrap();
                assert!(!equal_up_to_global_phase(&back, &alpha, 1e-9).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn fast_matches_naive(seed in any::<u64>(), n in 1u32..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alpha = random_alpha(&mut rng, n);
            let a = solve_angles_naive(&alpha).unwrap();
            let b = solve_angles_fast(&alpha).unwrap();
            for v in 0..1u64 << n {
                prop_assert!(circular_distance(a.coeff(v), b.coeff(v)) < 1e-10);
            }
        }

        #[test]
        fn pairwise_roundtrip(seed in any::<u64>(), n in 1u32..=8, sparsity in 0.0f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // sparse alphas produce missing partners
            let alpha: Vec<f64> = (0..1 << n)
                .map(|_| if rng.gen_bool(sparsity) { rng.gen_range(0.0..TAU) } else { 0.0 })
                .collect();
            let alpha = PhaseVector::new(n, alpha).unwrap();
            let layout = pairwise_layout(&solve_angles_fast(&alpha).unwrap());
            prop_assert!(layout.is_valid());
            let back = simulate_diagonal(&layout.flatten()).unwrap();
            prop_assert!(equal_up_to_global_phase(&back, &alpha, 1e-9).unwrap());
        }
    }
}
