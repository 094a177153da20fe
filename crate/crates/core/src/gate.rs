//! Shared domain types: qubit masks, MCZR gates, gate sequences, layerings
//! and diagonal phase vectors.
//!
//! Qubit `j` (1-indexed, `x_j`) lives at bit position `n - j` of a mask, so a
//! mask read as a binary string `v_1 v_2 .. v_n` is also the index of the
//! basis state `|v_1 v_2 .. v_n>`.

use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};

/// Angles whose circular distance to zero is at most this are identity gates.
pub const EPS_ZERO: f64 = 1e-12;

/// Largest qubit count for anything that allocates `2^n` entries.
pub const MAX_DENSE_QUBITS: u32 = 24;

/// Largest qubit count for scheduling-only paths.
pub const MAX_QUBITS: u32 = 64;

/// Reduce an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Circular distance between two angles, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d).max(0.0)
}

/// True when `theta` is within [`EPS_ZERO`] of `0 (mod 2π)`.
pub fn is_zero_angle(theta: f64) -> bool {
    circular_distance(theta, 0.0) <= EPS_ZERO
}

fn check_qubits(n: u32, max: u32) -> Result<()> {
    if n == 0 || n > max {
        Err(Error::QubitCount { n, max })
    } else {
        Ok(())
    }
}

/// Checks `1 <= n <= 24`, the bound for paths that allocate `2^n` entries.
pub fn check_dense_qubits(n: u32) -> Result<()> {
    check_qubits(n, MAX_DENSE_QUBITS)
}

/// All-ones mask over the low `n` bits.
pub(crate) fn full_bits(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An `n`-bit subset of qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateMask {
    bits: u64,
    n: u32,
}

impl GateMask {
    pub fn new(bits: u64, n: u32) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        if bits & !full_bits(n) != 0 {
            return Err(Error::MaskOutOfRange { bits, n });
        }
        Ok(Self { bits, n })
    }

    /// The empty mask, which stands for the global phase and is never a gate.
    pub fn zero(n: u32) -> Result<Self> {
        Self::new(0, n)
    }

    /// Mask from 1-indexed qubit numbers. Duplicates are rejected.
    pub fn from_qubits(qubits: &[usize], n: u32) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let mut bits = 0u64;
        for &q in qubits {
            if q == 0 || q > n as usize {
                return Err(Error::QubitIndex { qubit: q, n });
            }
            let bit = 1u64 << (n as usize - q);
            if bits & bit != 0 {
                return Err(Error::DuplicateQubit { qubit: q });
            }
            bits |= bit;
        }
        Ok(Self { bits, n })
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// Sorted 1-indexed qubits in the mask.
    pub fn qubits(self) -> Vec<usize> {
        (1..=self.n as usize)
            .filter(|&j| self.contains_qubit(j))
            .collect()
    }

    pub fn contains_qubit(self, j: usize) -> bool {
        j >= 1 && j <= self.n as usize && self.bits >> (self.n as usize - j) & 1 == 1
    }

    /// Hamming weight `||v||`.
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Bitwise complement within `n` bits.
    pub fn complement(self) -> Self {
        Self {
            bits: !self.bits & full_bits(self.n),
            n: self.n,
        }
    }

    pub fn is_disjoint(self, other: Self) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.bits & other.bits == 0)
    }

    /// `P_self ⊆ P_other`.
    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }
}

impl fmt::Display for GateMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.n as usize {
            f.write_str(if self.contains_qubit(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `||v||`.
pub fn popcount_weight(mask: GateMask) -> u32 {
    mask.weight()
}

/// True iff the two masks share no qubit.
pub fn masks_disjoint(a: GateMask, b: GateMask) -> Result<bool> {
    a.is_disjoint(b)
}

pub fn mask_complement(a: GateMask) -> GateMask {
    a.complement()
}

/// A multiple-control Z-rotation: phase `e^{iθ}` on basis states where every
/// qubit of `mask` is 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MczrGate {
    mask: GateMask,
    theta: f64,
}

impl MczrGate {
    /// The angle is stored reduced into `[0, 2π)`.
    pub fn new(mask: GateMask, theta: f64) -> Self {
        Self {
            mask,
            theta: normalize_angle(theta),
        }
    }

    pub fn mask(&self) -> GateMask {
        self.mask
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_identity(&self) -> bool {
        is_zero_angle(self.theta)
    }

    pub(crate) fn bits(&self) -> u64 {
        self.mask.bits
    }

    /// Exact equality including angle bits; used for multiset comparisons.
    pub(crate) fn key(&self) -> (u64, u64) {
        (self.mask.bits, self.theta.to_bits())
    }
}

/// An ordered gate list on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSeq {
    n: u32,
    gates: Vec<MczrGate>,
}

impl GateSeq {
    pub fn new(n: u32) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        Ok(Self {
            n,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n: u32, gates: Vec<MczrGate>) -> Result<Self> {
        let mut seq = Self::new(n)?;
        for g in gates {
            seq.push(g)?;
        }
        Ok(seq)
    }

    /// Convenience constructor from `(1-indexed qubits, θ)` pairs.
    pub fn from_qubit_sets(n: u32, sets: &[(&[usize], f64)]) -> Result<Self> {
        let gates = sets
            .iter()
            .map(|(qs, theta)| Ok(MczrGate::new(GateMask::from_qubits(qs, n)?, *theta)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_gates(n, gates)
    }

    /// Appends a gate; the zero mask is rejected.
    pub fn push(&mut self, gate: MczrGate) -> Result<()> {
        if gate.mask.n != self.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: gate.mask.n,
            });
        }
        if gate.mask.is_zero() {
            return Err(Error::ZeroMaskGate);
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn gates(&self) -> &[MczrGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<MczrGate> {
        self.gates
    }

    /// Gates as `(mask bits, angle bits)` pairs, sorted; equal for equal multisets.
    pub fn multiset(&self) -> Vec<(u64, u64)> {
        multiset_of(self.gates.iter())
    }

    /// One gate per layer, in sequence order.
    pub fn serialized(&self) -> Layering {
        Layering {
            n: self.n,
            layers: self.gates.iter().map(|g| vec![*g]).collect(),
        }
    }

    /// Depth of the circuit as written: each gate goes one layer past the
    /// latest earlier gate sharing a qubit with it.
    pub fn asap_depth(&self) -> usize {
        let mut level = vec![0usize; self.n as usize];
        let mut depth = 0;
        for g in &self.gates {
            let bits = g.bits();
            let at = (0..self.n as usize)
                .filter(|&b| bits >> b & 1 == 1)
                .map(|b| level[b])
                .max()
                .unwrap_or(0)
                + 1;
            for (b, l) in level.iter_mut().enumerate() {
                if bits >> b & 1 == 1 {
                    *l = at;
                }
            }
            depth = depth.max(at);
        }
        depth
    }
}

pub(crate) fn multiset_of<'a>(gates: impl Iterator<Item = &'a MczrGate>) -> Vec<(u64, u64)> {
    let mut keys: Vec<_> = gates.map(MczrGate::key).collect();
    keys.sort_unstable();
    keys
}

/// Ordered layers of pairwise-disjoint gates. Depth is the layer count.
#[derive(Clone, Debug, PartialEq)]
pub struct Layering {
    n: u32,
    layers: Vec<Vec<MczrGate>>,
}

impl Layering {
    pub fn empty(n: u32) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        Ok(Self {
            n,
            layers: Vec::new(),
        })
    }

    /// Validates disjointness inside each layer and drops empty layers.
    pub fn new(n: u32, layers: Vec<Vec<MczrGate>>) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let mut out = Vec::with_capacity(layers.len());
        for (li, layer) in layers.into_iter().enumerate() {
            let mut used = 0u64;
            for g in &layer {
                if g.mask.n != n {
                    return Err(Error::QubitMismatch {
                        left: n,
                        right: g.mask.n,
                    });
                }
                if g.mask.is_zero() {
                    return Err(Error::ZeroMaskGate);
                }
                if used & g.bits() != 0 {
                    return Err(Error::LayerConflict { layer: li });
                }
                used |= g.bits();
            }
            if !layer.is_empty() {
                out.push(layer);
            }
        }
        Ok(Self { n, layers: out })
    }

    /// Caller guarantees the layer invariants.
    pub(crate) fn from_layers_unchecked(n: u32, layers: Vec<Vec<MczrGate>>) -> Self {
        debug_assert!(layers.iter().all(|l| !l.is_empty()));
        Self { n, layers }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn layers(&self) -> &[Vec<MczrGate>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Layer-major gate order.
    pub fn flatten(&self) -> GateSeq {
        GateSeq {
            n: self.n,
            gates: self.layers.iter().flatten().copied().collect(),
        }
    }

    /// Appends the layers of `other` after those of `self`.
    pub fn concat(mut self, other: Layering) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        self.layers.extend(other.layers);
        Ok(self)
    }

    pub fn multiset(&self) -> Vec<(u64, u64)> {
        multiset_of(self.layers.iter().flatten())
    }

    /// Re-checks every layer for disjointness.
    pub fn is_valid(&self) -> bool {
        self.layers.iter().all(|layer| {
            let mut used = 0u64;
            !layer.is_empty()
                && layer.iter().all(|g| {
                    let ok = used & g.bits() == 0 && !g.mask.is_zero() && g.mask.n == self.n;
                    used |= g.bits();
                    ok
                })
        })
    }
}

/// Diagonal unitary `diag(e^{iα_0}, .., e^{iα_{N-1}})` times `e^{i·global_phase}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseVector {
    n: u32,
    alpha: Vec<f64>,
    global_phase: f64,
}

impl PhaseVector {
    pub fn new(n: u32, alpha: Vec<f64>) -> Result<Self> {
        Self::with_global_phase(n, alpha, 0.0)
    }

    pub fn with_global_phase(n: u32, alpha: Vec<f64>, global_phase: f64) -> Result<Self> {
        check_dense_qubits(n)?;
        let expected = 1usize << n;
        if alpha.len() != expected {
            return Err(Error::PhaseLength {
                expected,
                got: alpha.len(),
            });
        }
        Ok(Self {
            n,
            alpha,
            global_phase,
        })
    }

    pub fn zeros(n: u32) -> Result<Self> {
        check_dense_qubits(n)?;
        Self::new(n, vec![0.0; 1 << n])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    /// Total phase applied to basis state `q`.
    pub fn phase_at(&self, q: usize) -> f64 {
        self.alpha[q] + self.global_phase
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}
