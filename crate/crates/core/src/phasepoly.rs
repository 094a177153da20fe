//! Circuit ↔ phase polynomial ↔ diagonal unitary.
//!
//! A circuit of commuting MCZR gates maps every basis state `|x>` to
//! `e^{i p(x)} |x>` where `p` is the multilinear polynomial whose monomial
//! for mask `v` carries the summed angle of all gates acting on `v`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gate::{
    check_dense_qubits, circular_distance, is_zero_angle, normalize_angle, GateMask, GateSeq,
    PhaseVector,
};

/// Default tolerance for phase comparisons, in radians.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
enum Coeffs {
    /// Only the listed masks are present; absent masks are zero.
    Sparse(BTreeMap<u64, f64>),
    /// One entry per mask, indexed by mask bits.
    Dense(Vec<f64>),
}

/// Multilinear phase polynomial. The zero-mask coefficient is the global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePolynomial {
    n: u32,
    coeffs: Coeffs,
}

impl PhasePolynomial {
    /// Builds from explicit `(mask, θ)` terms. Repeated masks are summed.
    pub fn from_terms(n: u32, terms: impl IntoIterator<Item = (GateMask, f64)>) -> Result<Self> {
        GateMask::zero(n)?;
        let mut map = BTreeMap::new();
        for (mask, theta) in terms {
            if mask.n() != n {
                return Err(Error::QubitMismatch {
                    left: n,
                    right: mask.n(),
                });
            }
            *map.entry(mask.bits()).or_insert(0.0) += theta;
        }
        Ok(Self {
            n,
            coeffs: Coeffs::Sparse(map),
        })
    }

    pub(crate) fn from_dense(n: u32, coeffs: Vec<f64>) -> Self {
        debug_assert_eq!(coeffs.len(), 1usize << n);
        Self {
            n,
            coeffs: Coeffs::Dense(coeffs),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Coefficient of the monomial for `bits` (0 when absent).
    pub fn coeff(&self, bits: u64) -> f64 {
        match &self.coeffs {
            Coeffs::Sparse(map) => map.get(&bits).copied().unwrap_or(0.0),
            Coeffs::Dense(v) => v.get(bits as usize).copied().unwrap_or(0.0),
        }
    }

    pub fn global_phase(&self) -> f64 {
        self.coeff(0)
    }

    /// Stored `(mask bits, θ)` entries in increasing mask order, zero mask included.
    pub fn entries(&self) -> Box<dyn Iterator<Item = (u64, f64)> + '_> {
        match &self.coeffs {
            Coeffs::Sparse(map) => Box::new(map.iter().map(|(&k, &v)| (k, v))),
            Coeffs::Dense(v) => Box::new(v.iter().enumerate().map(|(k, &t)| (k as u64, t))),
        }
    }

    /// Monomials with a nonzero mask and a non-identity angle, increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (GateMask, f64)> + '_ {
        let n = self.n;
        self.entries()
            .filter(|&(k, t)| k != 0 && !is_zero_angle(t))
            .map(move |(k, t)| (GateMask::new(k, n).expect("stored mask fits"), t))
    }

    /// Number of stored entries (dense polynomials store all `2^n`).
    pub fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Sparse(map) => map.len(),
            Coeffs::Dense(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest monomial weight among non-identity terms.
    pub fn degree(&self) -> u32 {
        self.terms().map(|(m, _)| m.weight()).max().unwrap_or(0)
    }
}

/// Merges same-mask gates (angles add mod 2π) and drops identities.
pub fn circuit_to_polynomial(seq: &GateSeq) -> PhasePolynomial {
    let mut map: BTreeMap<u64, f64> = BTreeMap::new();
    for g in seq.gates() {
        *map.entry(g.mask().bits()).or_insert(0.0) += g.theta();
    }
    map.retain(|_, t| {
        *t = normalize_angle(*t);
        !is_zero_angle(*t)
    });
    PhasePolynomial {
        n: seq.n(),
        coeffs: Coeffs::Sparse(map),
    }
}

/// `p(x)` plus the global phase at basis state `basis_index`, reduced mod 2π.
pub fn evaluate_polynomial(poly: &PhasePolynomial, basis_index: u64) -> Result<f64> {
    let size = if poly.n >= 64 { u64::MAX } else { 1u64 << poly.n };
    if poly.n < 64 && basis_index >= size {
        return Err(Error::BasisIndex {
            index: basis_index,
            size,
        });
    }
    let mut acc = poly.global_phase();
    for (bits, theta) in poly.entries() {
        if bits != 0 && bits & !basis_index == 0 {
            acc += theta;
        }
    }
    Ok(normalize_angle(acc))
}

/// Diagonal of the polynomial's unitary: each monomial is added to every
/// basis index whose bits cover its mask.
pub fn simulate_polynomial(poly: &PhasePolynomial) -> Result<PhaseVector> {
    check_dense_qubits(poly.n)?;
    let size = 1u64 << poly.n;
    let mut alpha = vec![poly.global_phase(); size as usize];
    for (bits, theta) in poly.entries() {
        if bits == 0 {
            continue;
        }
        let mut s = bits;
        while s < size {
            alpha[s as usize] += theta;
            s = (s + 1) | bits;
        }
    }
    alpha.iter_mut().for_each(|a| *a = normalize_angle(*a));
    PhaseVector::new(poly.n, alpha)
}

/// Diagonal phases implemented by a gate sequence, with zero global phase.
pub fn simulate_diagonal(seq: &GateSeq) -> Result<PhaseVector> {
    check_dense_qubits(seq.n())?;
    simulate_polynomial(&circuit_to_polynomial(seq))
}

/// True iff `a` and `b` differ by a constant phase, within `tol` per entry
/// (circular distance). The constant is fixed from entry 0.
pub fn equal_up_to_global_phase(a: &PhaseVector, b: &PhaseVector, tol: f64) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::QubitMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let shift = a.phase_at(0) - b.phase_at(0);
    Ok((0..a.len()).all(|q| circular_distance(a.phase_at(q) - shift, b.phase_at(q)) <= tol))
}

/// Largest per-entry deviation after removing the entry-0 phase offset.
pub fn max_phase_deviation(a: &PhaseVector, b: &PhaseVector) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::QubitMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let shift = a.phase_at(0) - b.phase_at(0);
    Ok((0..a.len())
        .map(|q| circular_distance(a.phase_at(q) - shift, b.phase_at(q)))
        .fold(0.0, f64::max))
}
