//! Correlation expansion of a process tensor around its Markov product.
//!
//! For a set `S` of time slots let `M_S` be the marginal of the unit-trace
//! Choi state on the legs of `S`. The correlation operators are defined by
//! the cumulant recursion
//!
//! ```text
//! χ_{j}  = M_{j}
//! χ_S    = M_S − Σ_{π ≠ {S}} ⊗_{B ∈ π} χ_B
//! ```
//!
//! where `π` runs over the set partitions of `S`. Every `χ_S` with `|S| ≥ 2`
//! vanishes under the partial trace of any one of its slots, and summing
//! `⊗_{B ∈ π} χ_B` over all partitions of the full slot set recovers the
//! Choi state.

use std::collections::HashMap;

use super::{slot_legs, ProcessTensor};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, permute_subsystems, tensor_product, ComplexMatrix};

/// One correlation operator.
#[derive(Clone, Debug)]
pub struct ChiTerm {
    /// Time slots of the term, latest first (the canonical leg order).
    pub slots: Vec<usize>,
    /// `χ_S` on the legs of `S`, computed from the unit-trace Choi state.
    pub local: ComplexMatrix,
    /// `tr Υ · χ_S ⊗ (single-slot marginals of the remaining slots)` on all
    /// legs in canonical order.
    pub embedded: ComplexMatrix,
}

impl ChiTerm {
    pub fn order(&self) -> usize {
        self.slots.len()
    }
}

/// Slot subsets are bit masks over slot positions `p = 0..=k`, where position
/// `p` is slot `k − p`; positions increase with leg index.
struct ChiTable<'a> {
    pt: &'a ProcessTensor,
    normalized: ComplexMatrix,
    chi: HashMap<u32, ComplexMatrix>,
}

impl<'a> ChiTable<'a> {
    fn new(pt: &'a ProcessTensor) -> Self {
        ChiTable {
            pt,
            normalized: pt.normalized_choi(),
            chi: HashMap::new(),
        }
    }

    fn positions(mask: u32) -> Vec<usize> {
        (0..32).filter(|p| mask & (1 << p) != 0).collect()
    }

    fn legs_of(&self, mask: u32) -> Vec<usize> {
        let k = self.pt.k();
        Self::positions(mask)
            .into_iter()
            .flat_map(|p| slot_legs(k, k - p))
            .collect()
    }

    fn marginal(&self, mask: u32) -> ComplexMatrix {
        partial_trace(&self.normalized, &self.pt.leg_dims(), &self.legs_of(mask))
            .expect("legs in range")
    }

    /// Tensor product of the given blocks, listed in any order,
    /// with the legs rearranged into ascending order.
    fn arranged(&self, blocks: &[(u32, &ComplexMatrix)]) -> ComplexMatrix {
        let mut concat = Vec::new();
        let mut acc = ComplexMatrix::identity(1);
        for (mask, m) in blocks {
            concat.extend(self.legs_of(*mask));
            acc = tensor_product(&acc, m);
        }
        let mut sorted = concat.clone();
        sorted.sort_unstable();
        if sorted == concat {
            return acc;
        }
        let perm: Vec<usize> = sorted
            .iter()
            .map(|l| concat.iter().position(|x| x == l).unwrap())
            .collect();
        permute_subsystems(&acc, &vec![self.pt.d_s(); concat.len()], &perm)
            .expect("valid permutation")
    }

    fn get(&mut self, mask: u32) -> ComplexMatrix {
        if let Some(c) = self.chi.get(&mask) {
            return c.clone();
        }
        let mut value = self.marginal(mask);
        if mask.count_ones() > 1 {
            for partition in partitions(mask) {
                if partition.len() == 1 {
                    continue;
                }
                let blocks: Vec<(u32, ComplexMatrix)> =
                    partition.iter().map(|&b| (b, self.get(b))).collect();
                let refs: Vec<(u32, &ComplexMatrix)> =
                    blocks.iter().map(|(b, m)| (*b, m)).collect();
                value = &value - &self.arranged(&refs);
            }
        }
        self.chi.insert(mask, value.clone());
        value
    }
}

/// All set partitions of the bits of `mask`, each as a list of block masks.
fn partitions(mask: u32) -> Vec<Vec<u32>> {
    if mask == 0 {
        return vec![vec![]];
    }
    let lowest = mask & mask.wrapping_neg();
    let rest = mask & !lowest;
    let mut out = Vec::new();
    // Enumerate every subset of `rest` to join the lowest element's block.
    let mut sub = rest;
    loop {
        let block = lowest | sub;
        for mut tail in partitions(rest & !sub) {
            tail.insert(0, block);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// Correlation operators of every slot subset with `1 ≤ |S| ≤ order`.
/// Order-1 terms are the single-slot marginals.
pub fn chi_decomposition(pt: &ProcessTensor, order: usize) -> Result<Vec<ChiTerm>> {
    let slots = pt.k() + 1;
    if order == 0 || order > slots {
        return Err(Error::param(format!(
            "order must lie in 1..={slots}, got {order}"
        )));
    }
    let mut table = ChiTable::new(pt);
    let full: u32 = (1 << slots) - 1;
    let trace = pt.choi().trace().re;
    let mut masks: Vec<u32> = (1..=full)
        .filter(|m| m.count_ones() as usize <= order)
        .collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut out = Vec::with_capacity(masks.len());
    for mask in masks {
        let local = table.get(mask);
        let mut blocks = vec![(mask, local.clone())];
        for p in ChiTable::positions(full & !mask) {
            blocks.push((1 << p, table.get(1 << p)));
        }
        let refs: Vec<(u32, &ComplexMatrix)> = blocks.iter().map(|(b, m)| (*b, m)).collect();
        let embedded = table.arranged(&refs).scale_real(trace);
        let k = pt.k();
        out.push(ChiTerm {
            slots: ChiTable::positions(mask)
                .into_iter()
                .map(|p| k - p)
                .collect(),
            local,
            embedded,
        });
    }
    Ok(out)
}

/// `tr Υ · Σ_π ⊗_{B ∈ π} χ_B` over all set partitions of the slots, which
/// equals the Choi state.
pub fn reconstruct_from_chi(pt: &ProcessTensor) -> ComplexMatrix {
    let mut table = ChiTable::new(pt);
    let full: u32 = (1 << (pt.k() + 1)) - 1;
    let n = pt.choi().rows();
    let mut acc = ComplexMatrix::zeros(n, n);
    for partition in partitions(full) {
        let blocks: Vec<(u32, ComplexMatrix)> =
            partition.iter().map(|&b| (b, table.get(b))).collect();
        let refs: Vec<(u32, &ComplexMatrix)> = blocks.iter().map(|(b, m)| (*b, m)).collect();
        acc += &table.arranged(&refs);
    }
    acc.scale_real(pt.choi().trace().re)
}
