use std::collections::BTreeMap;

use crate::error::Result;
use crate::exactla::{Fp, Matrix};
use crate::graded::{Basis, Homog};

/// Unknown: a coordinate of the value on a tuple.
pub(crate) type Key = (Vec<Basis>, usize);

/// One block of scalar equations `sum_k column_k * u_k = rhs`.
pub(crate) struct Block {
    pub rhs: Vec<u32>,
    pub terms: Vec<(Key, Vec<u32>)>,
}

pub(crate) struct Outcome {
    pub equations: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub augmented_rank: usize,
    pub solution: Option<BTreeMap<Vec<Basis>, Homog>>,
}

/// Solves the stacked blocks; unknown tuples are indexed in sorted order
/// and their value degrees come from `value_deg`.
pub(crate) fn solve_blocks(f: Fp, blocks: &[Block], value_deg: impl Fn(&[Basis]) -> i64, dims: &BTreeMap<Vec<Basis>, usize>) -> Result<Outcome> {
    let mut index: BTreeMap<&Key, usize> = BTreeMap::new();
    for b in blocks {
        for (k, _) in &b.terms {
            index.entry(k).or_insert(0);
        }
    }
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let cols = index.len();
    let rows: usize = blocks.iter().map(|b| b.rhs.len()).sum();
    let mut m = Matrix::zeros(f, rows, cols + 1);
    let mut r0 = 0;
    for b in blocks {
        for (k, col) in &b.terms {
            let j = index[k];
            for (i, &c) in col.iter().enumerate() {
                if c != 0 {
                    let cur = *m.get(r0 + i, j);
                    m.set(r0 + i, j, f.addm(cur, c));
                }
            }
        }
        for (i, &c) in b.rhs.iter().enumerate() {
            m.set(r0 + i, cols, c);
        }
        r0 += b.rhs.len();
    }
    let pivots = m.rref_in_place(cols);
    let rank = pivots.len();
    let consistent = (rank..rows).all(|i| *m.get(i, cols) == 0);
    let solution = if consistent {
        let keys: Vec<&Key> = index.keys().copied().collect();
        let mut out: BTreeMap<Vec<Basis>, Homog> = BTreeMap::new();
        for (r, &p) in pivots.iter().enumerate() {
            let c = *m.get(r, cols);
            if c == 0 {
                continue;
            }
            let (t, k) = keys[p];
            let e = out
                .entry(t.clone())
                .or_insert_with(|| Homog::zero(value_deg(t), dims[t]));
            e.coeffs[*k] = c;
        }
        Some(out)
    } else {
        None
    };
    Ok(Outcome {
        equations: rows,
        unknowns: cols,
        rank,
        augmented_rank: if consistent { rank } else { rank + 1 },
        solution,
    })
}
