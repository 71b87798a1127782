//! Output accumulation schedule shared by execution and operation counting.
//!
//! Every factored matrix contributes `width` intermediate values ("slots").
//! Each output component is a signed sum of slots. Components whose sums are
//! identical up to sign (for a real input `V_{N-k} = conj(V_k)` makes many of
//! them coincide) point at one shared accumulation row and differ only by a
//! free sign flip.

use std::collections::HashMap;

use super::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Real,
    Imag,
}

/// Reference from an output component to an accumulation row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowRef {
    pub row: usize,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSchedule {
    offsets: Vec<[usize; 2]>,
    slot_count: usize,
    rows: Vec<Vec<(usize, i64)>>,
    real: Vec<Option<RowRef>>,
    imag: Vec<Option<RowRef>>,
    unshared_additions: usize,
}

impl OutputSchedule {
    pub(crate) fn new(order: usize, terms: &[Term]) -> Self {
        let mut offsets = Vec::with_capacity(terms.len());
        let mut slot_count = 0;
        for term in terms {
            let re = slot_count;
            slot_count += term.real.factored.width();
            let im = slot_count;
            slot_count += term.imag.factored.width();
            offsets.push([re, im]);
        }

        let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
        let mut index: HashMap<Vec<(usize, i64)>, usize> = HashMap::new();
        let mut unshared_additions = 0;
        let mut outputs = [vec![None; order], vec![None; order]];

        for (side_idx, side) in [Side::Real, Side::Imag].into_iter().enumerate() {
            for (k, slot) in outputs[side_idx].iter_mut().enumerate() {
                let mut contributions: Vec<(usize, i64)> = Vec::new();
                for (t, term) in terms.iter().enumerate() {
                    let combiner = term.side(side).factored.combiner();
                    let base = offsets[t][side_idx];
                    contributions.extend(
                        combiner
                            .row(k)
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| c != 0)
                            .map(|(i, &c)| (base + i, c)),
                    );
                }
                if contributions.is_empty() {
                    continue;
                }
                unshared_additions += contributions.len() - 1;
                let sign = contributions[0].1.signum();
                let canonical: Vec<(usize, i64)> =
                    contributions.iter().map(|&(s, c)| (s, c * sign)).collect();
                let row = *index.entry(canonical.clone()).or_insert_with(|| {
                    rows.push(canonical);
                    rows.len() - 1
                });
                *slot = Some(RowRef { row, sign });
            }
        }
        let [real, imag] = outputs;
        Self {
            offsets,
            slot_count,
            rows,
            real,
            imag,
            unshared_additions,
        }
    }

    /// First slot index of a term's intermediates on one side.
    pub fn offset(&self, term: usize, side: Side) -> usize {
        self.offsets[term][side as usize]
    }

    pub fn slot_count(&self) -> usize {
        self.slot_count
    }

    /// Distinct accumulation rows as `(slot, ±1)` lists.
    pub fn rows(&self) -> &[Vec<(usize, i64)>] {
        &self.rows
    }

    /// Row feeding each output component; `None` for structural zeros.
    pub fn outputs(&self, side: Side) -> &[Option<RowRef>] {
        match side {
            Side::Real => &self.real,
            Side::Imag => &self.imag,
        }
    }

    /// Additions spent in the accumulation stage.
    pub fn additions(&self) -> usize {
        self.rows.iter().map(|r| r.len() - 1).sum()
    }

    /// Accumulation additions if every component were summed on its own.
    pub fn unshared_additions(&self) -> usize {
        self.unshared_additions
    }
}
