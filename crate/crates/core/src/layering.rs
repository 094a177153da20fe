//! Depth optimization for sets of commuting MCZR gates.
//!
//! Since every gate commutes with every other, minimizing depth means packing
//! the gates into as few layers of pairwise-disjoint masks as possible. The
//! tools here are:
//!
//! * [`depth_lower_bound`]: the busiest qubit's gate count.
//! * [`greedy_layer_formation`] / [`generate_new_gateseq`]: one greedy pass
//!   and the column-major reordering that feeds the next pass.
//! * [`iterative_depth_opt`]: alternates the two for up to `iter` passes and
//!   keeps the shallowest result.
//! * [`extract_complementary_pairs`] / [`gate_exchange_optimize`]: gates whose
//!   masks are complements fill a whole layer together, so pairing them first
//!   never costs depth.
//! * [`exhaustive_optimal_depth`]: the true optimum for tiny inputs, by trying
//!   every input order.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::gate::{GateSeq, Layering, MczrGate};
use crate::synth::pair_key;

/// Gate count limit for [`exhaustive_optimal_depth`].
pub const MAX_EXHAUSTIVE_GATES: usize = 9;

/// Result of [`iterative_depth_opt`].
#[derive(Clone, Debug, PartialEq)]
pub struct OptReport {
    pub layering: Layering,
    pub depth: usize,
    pub lower_bound: usize,
    pub iterations_run: usize,
    pub per_iteration_depths: Vec<usize>,
}

/// Largest number of gates touching any single qubit.
pub fn depth_lower_bound(seq: &GateSeq) -> usize {
    let mut counts = vec![0usize; seq.n() as usize];
    for g in seq.gates() {
        let mut bits = g.mask().bits();
        while bits != 0 {
            counts[bits.trailing_zeros() as usize] += 1;
            bits &= bits - 1;
        }
    }
    counts.into_iter().max().unwrap_or(0)
}

/// Fills one layer at a time by scanning the remaining gates left to right
/// and taking every gate disjoint from what the layer already holds.
pub fn greedy_layer_formation(seq: &GateSeq) -> Layering {
    Layering::from_layers_unchecked(seq.n(), greedy_layers(seq.gates().to_vec()))
}

fn greedy_layers(mut remaining: Vec<MczrGate>) -> Vec<Vec<MczrGate>> {
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let mut used = 0u64;
        let mut layer = Vec::new();
        remaining.retain(|g| {
            let bits = g.mask().bits();
            if used & bits == 0 {
                used |= bits;
                layer.push(*g);
                false
            } else {
                true
            }
        });
        layers.push(layer);
    }
    layers
}

/// Column-major read-out: the first gate of every layer, then the second
/// gate of every layer that has one, and so on.
pub fn generate_new_gateseq(layering: &Layering) -> GateSeq {
    let layers = layering.layers();
    let width = layers.iter().map(Vec::len).max().unwrap_or(0);
    let gates = (0..width)
        .flat_map(|c| layers.iter().filter_map(move |l| l.get(c)))
        .copied()
        .collect();
    GateSeq::from_gates(layering.n(), gates).expect("gates come from a valid layering")
}

/// Greedy layering refined by up to `iter - 1` rounds of column-major
/// regeneration. Each round starts from the previous round's layering; the
/// shallowest layering seen is returned (earliest on ties). Stops early once
/// the lower bound is met or the regenerated order stops changing.
pub fn iterative_depth_opt(seq: &GateSeq, iter: usize) -> Result<OptReport> {
    if iter == 0 {
        return Err(Error::Config("iteration count must be at least 1".into()));
    }
    let lower_bound = depth_lower_bound(seq);
    let mut current = greedy_layer_formation(seq);
    let mut depths = vec![current.depth()];
    let mut best = current.clone();

    if current.depth() > lower_bound {
        let mut previous_input = seq.gates().to_vec();
        for _ in 2..=iter {
            let next_seq = generate_new_gateseq(&current);
            if next_seq.gates() == previous_input.as_slice() {
                break;
            }
            current = greedy_layer_formation(&next_seq);
            depths.push(current.depth());
            if current.depth() < best.depth() {
                best = current.clone();
            }
            if current.depth() == lower_bound {
                break;
            }
            previous_input = next_seq.into_gates();
        }
    }

    Ok(OptReport {
        depth: best.depth(),
        layering: best,
        lower_bound,
        iterations_run: depths.len(),
        per_iteration_depths: depths,
    })
}

/// Matches each gate with an earlier unmatched gate on the complementary
/// mask. Returns the pairs (lighter-valued mask first, pairs sorted by that
/// mask) and the unmatched gates in their original order.
fn split_pairs(gates: &[MczrGate], n: u32) -> (Vec<[MczrGate; 2]>, Vec<MczrGate>) {
    let mut waiting: HashMap<u64, VecDeque<usize>> = HashMap::new();
    let mut matched = vec![false; gates.len()];
    let mut pairs = Vec::new();
    for (i, g) in gates.iter().enumerate() {
        let comp = g.mask().complement().bits();
        let partner = waiting.get_mut(&comp).and_then(VecDeque::pop_front);
        match partner {
            Some(j) => {
                matched[i] = true;
                matched[j] = true;
                let (a, b) = (gates[j], *g);
                pairs.push(if a.mask().bits() < b.mask().bits() {
                    [a, b]
                } else {
                    [b, a]
                });
            }
            None => waiting.entry(g.mask().bits()).or_default().push_back(i),
        }
    }
    pairs.sort_by_key(|p| pair_key(p[0].mask().bits(), n));
    let remainder = gates
        .iter()
        .zip(matched)
        .filter(|(_, m)| !m)
        .map(|(g, _)| *g)
        .collect();
    (pairs, remainder)
}

/// Puts every complementary pair in its own layer. Errors on repeated masks.
pub fn extract_complementary_pairs(seq: &GateSeq) -> Result<(Layering, GateSeq)> {
    let mut seen = HashSet::with_capacity(seq.len());
    for g in seq.gates() {
        if !seen.insert(g.mask().bits()) {
            return Err(Error::DuplicateMask {
                bits: g.mask().bits(),
            });
        }
    }
    Ok(complementary_split(seq))
}

/// Like [`extract_complementary_pairs`], but a repeated mask is just another
/// candidate partner, matched in order of appearance.
pub fn complementary_split(seq: &GateSeq) -> (Layering, GateSeq) {
    let (pairs, remainder) = split_pairs(seq.gates(), seq.n());
    let layers = pairs.into_iter().map(Vec::from).collect();
    (
        Layering::from_layers_unchecked(seq.n(), layers),
        GateSeq::from_gates(seq.n(), remainder).expect("gates come from a valid sequence"),
    )
}

/// Moves split complementary partners into shared layers and recompacts the
/// rest greedily. Never returns a deeper layering than it was given.
pub fn gate_exchange_optimize(layering: &Layering) -> Layering {
    let n = layering.n();
    let flat = layering.flatten();
    let (pairs, remainder) = split_pairs(flat.gates(), n);

    let mut exchanged: Vec<Vec<MczrGate>> = pairs.into_iter().map(Vec::from).collect();
    exchanged.extend(greedy_layers(remainder));
    let recompacted = greedy_layers(flat.into_gates());

    let layers = if exchanged.len() <= recompacted.len() {
        exchanged
    } else {
        recompacted
    };
    if layers.len() <= layering.depth() {
        Layering::from_layers_unchecked(n, layers)
    } else {
        layering.clone()
    }
}

/// Depth of a greedy pass over `bits` taken in `order`, without building layers.
fn greedy_depth(bits: &[u64], order: &[usize]) -> usize {
    let mut placed = 0u32;
    let all = (1u32 << bits.len()) - 1;
    let mut depth = 0;
    while placed != all {
        let mut used = 0u64;
        for &i in order {
            if placed >> i & 1 == 0 && used & bits[i] == 0 {
                used |= bits[i];
                placed |= 1 << i;
            }
        }
        depth += 1;
    }
    depth
}

/// Minimum depth over every input order fed to the greedy pass, which is the
/// true optimum: any layering is reproduced by listing its layers in order.
pub fn exhaustive_optimal_depth(seq: &GateSeq) -> Result<(usize, Layering)> {
    let m = seq.len();
    if m > MAX_EXHAUSTIVE_GATES {
        return Err(Error::TooLarge {
            what: "gates for exhaustive search",
            got: m,
            limit: MAX_EXHAUSTIVE_GATES,
        });
    }
    let bits: Vec<u64> = seq.gates().iter().map(|g| g.mask().bits()).collect();
    let lower_bound = depth_lower_bound(seq);

    let mut order: Vec<usize> = (0..m).collect();
    let mut best_depth = greedy_depth(&bits, &order);
    let mut best_order = order.clone();

    // Heap's algorithm, iterative form
    let mut c = vec![0usize; m];
    let mut i = 1;
    while i < m && best_depth > lower_bound {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            let d = greedy_depth(&bits, &order);
            if d < best_depth {
                best_depth = d;
                best_order.clone_from(&order);
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let reordered = best_order.iter().map(|&k| seq.gates()[k]).collect();
    let layering = greedy_layer_formation(&GateSeq::from_gates(seq.n(), reordered)?);
    debug_assert_eq!(layering.depth(), best_depth);
    Ok((best_depth, layering))
}
