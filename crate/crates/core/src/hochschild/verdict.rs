use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cochain::{cocycle_defects, delta_at, Cochain, HochschildCochain, TupleWindow};
use super::system::{solve_blocks, Block, Key};
use crate::error::{Error, Result};
use crate::graded::{Basis, GradedAlgebra, GradedBimodule, Homog};

/// Amount by which the window grows for the stability re-check.
pub const STABILITY_MARGIN: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "NONTRIVIAL")]
    Nontrivial,
    #[serde(rename = "TRIVIAL_UP_TO_WINDOW")]
    TrivialUpToWindow,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Nontrivial => "NONTRIVIAL",
            Verdict::TrivialUpToWindow => "TRIVIAL_UP_TO_WINDOW",
        })
    }
}

/// Size and ranks of one windowed coboundary system. Inconsistency shows
/// as `augmented_rank = rank + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub window: TupleWindow,
    pub equations: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub augmented_rank: usize,
    pub skipped_cocycle_checks: usize,
}

/// A solution `g` of `delta g = phi` on a window, keyed by tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub arity: usize,
    pub degree: i64,
    pub values: BTreeMap<Vec<Basis>, Homog>,
}

impl Witness {
    pub fn zero(arity: usize, degree: i64) -> Self {
        Witness {
            arity,
            degree,
            values: BTreeMap::new(),
        }
    }

    /// As a table cochain on the bounding box of its tuples.
    pub fn to_cochain(&self, window: TupleWindow, coeff: Arc<dyn GradedBimodule>) -> HochschildCochain {
        let mut c = HochschildCochain::new(self.arity, self.degree, window, coeff);
        c.values = self.values.clone();
        c
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionVerdict {
    pub verdict: Verdict,
    pub certificates: Vec<RankCertificate>,
    pub witness: Option<Witness>,
}

impl ObstructionVerdict {
    pub fn is_trivial(&self) -> bool {
        self.verdict == Verdict::TrivialUpToWindow
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    /// Check `delta phi = 0` on the window before solving.
    pub check_cocycle: bool,
    /// Re-solve on the window widened by [`STABILITY_MARGIN`].
    pub stability: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            check_cocycle: true,
            stability: true,
        }
    }
}

/// Window covering every tuple of a witness, for tabulated evaluation.
pub fn witness_window(base: &TupleWindow, w: &Witness) -> TupleWindow {
    let mut lo = base.entry_lo;
    let mut hi = base.entry_hi;
    let (mut tlo, mut thi) = (base.total_lo, base.total_hi);
    for t in w.values.keys() {
        let total: i64 = t.iter().map(|b| b.deg).sum();
        for b in t {
            lo = lo.min(b.deg);
            hi = hi.max(b.deg);
        }
        tlo = tlo.map(|x| x.min(total));
        thi = thi.map(|x| x.max(total));
    }
    TupleWindow::bounds(lo, hi, tlo, thi)
}

/// Decides whether a Hochschild cocycle is a coboundary on one window,
/// among normalised cochains.
pub fn coboundary_on_window(
    phi: &dyn Cochain,
    alg: &dyn GradedAlgebra,
    coeff: &dyn GradedBimodule,
    window: &TupleWindow,
    check_cocycle: bool,
) -> Result<(RankCertificate, Option<Witness>)> {
    let f = alg.field();
    let n = phi.arity();
    let m = phi.degree();
    let mut skipped = 0;
    if check_cocycle {
        let (bad, s) = cocycle_defects(phi, alg, coeff, window)?;
        if let Some(t) = bad.first() {
            return Err(Error::NotACocycle(format!(
                "delta is nonzero on {}",
                t.iter().map(|b| alg.label(*b)).collect::<Vec<_>>().join(" | ")
            )));
        }
        skipped = s;
    }
    if n == 0 {
        let v = phi.eval(&[])?;
        let cert = RankCertificate {
            window: *window,
            equations: v.dim(),
            unknowns: 0,
            rank: 0,
            augmented_rank: usize::from(!v.is_zero()),
            skipped_cocycle_checks: skipped,
        };
        return Ok((cert, v.is_zero().then(|| Witness::zero(0, m))));
    }
    let mut blocks = Vec::new();
    let mut dims: BTreeMap<Vec<Basis>, usize> = BTreeMap::new();
    for t in window.tuples(alg, n, true)? {
        let rhs = phi.eval(&t)?;
        let out_deg = rhs.deg;
        let out_dim = rhs.dim();
        if out_dim == 0 {
            continue;
        }
        let mut terms: BTreeMap<Key, Vec<u32>> = BTreeMap::new();
        let mut add = |key: Key, col: &Homog, c: u32| {
            let e = terms.entry(key).or_insert_with(|| vec![0; out_dim]);
            crate::exactla::axpy(f, e, c, &col.coeffs);
        };
        // lambda_1 . g(lambda_2, ...)
        let u: Vec<Basis> = t[1..].to_vec();
        let ud = u.iter().map(|b| b.deg).sum::<i64>() + m;
        let dim_u = coeff.dim(ud)?;
        dims.insert(u.clone(), dim_u);
        for k in 0..dim_u {
            let v = coeff.act_left(t[0], Basis::new(ud, k))?;
            add((u.clone(), k), &v, f.sign(m * t[0].deg));
        }
        // (-1)^i g(..., lambda_i lambda_{i+1}, ...)
        for i in 1..n {
            let prod = alg.mul_basis(t[i - 1], t[i])?;
            for (b, c) in prod.support() {
                if b == alg.unit() {
                    continue;
                }
                let mut u = t[..i - 1].to_vec();
                u.push(b);
                u.extend_from_slice(&t[i + 1..]);
                let dim_u = out_dim;
                dims.insert(u.clone(), dim_u);
                for k in 0..dim_u {
                    add((u.clone(), k), &Homog::basis(Basis::new(out_deg, k), out_dim), f.mulm(c, f.sign(i as i64)));
                }
            }
        }
        // (-1)^n g(lambda_1, ..., lambda_{n-1}) . lambda_n
        let u: Vec<Basis> = t[..n - 1].to_vec();
        let ud = u.iter().map(|b| b.deg).sum::<i64>() + m;
        let dim_u = coeff.dim(ud)?;
        dims.insert(u.clone(), dim_u);
        for k in 0..dim_u {
            let v = coeff.act_right(Basis::new(ud, k), t[n - 1])?;
            add((u.clone(), k), &v, f.sign(n as i64));
        }
        blocks.push(Block {
            rhs: rhs.coeffs,
            terms: terms.into_iter().filter(|(_, v)| v.iter().any(|&c| c != 0)).collect(),
        });
    }
    let out = solve_blocks(f, &blocks, |u| u.iter().map(|b| b.deg).sum::<i64>() + m, &dims)?;
    let cert = RankCertificate {
        window: *window,
        equations: out.equations,
        unknowns: out.unknowns,
        rank: out.rank,
        augmented_rank: out.augmented_rank,
        skipped_cocycle_checks: skipped,
    };
    let witness = out.solution.map(|values| Witness {
        arity: n - 1,
        degree: m,
        values,
    });
    Ok((cert, witness))
}

/// Verifies `delta g = phi` on every normalised tuple of the window.
pub fn check_witness(
    phi: &dyn Cochain,
    witness: &Witness,
    alg: &dyn GradedAlgebra,
    coeff: Arc<dyn GradedBimodule>,
    window: &TupleWindow,
) -> Result<bool> {
    let g = witness.to_cochain(witness_window(window, witness), coeff.clone());
    for t in window.tuples(alg, phi.arity(), true)? {
        if delta_at(&g, alg, coeff.as_ref(), &t)? != phi.eval(&t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides triviality of a Hochschild cocycle: NONTRIVIAL is exact
/// whenever the windowed system is inconsistent; triviality is reported
/// only when both the window and its widening are solvable.
pub fn coboundary_decide(
    phi: &dyn Cochain,
    alg: &dyn GradedAlgebra,
    coeff: &dyn GradedBimodule,
    window: &TupleWindow,
    opts: DecideOptions,
) -> Result<ObstructionVerdict> {
    let (c1, w1) = coboundary_on_window(phi, alg, coeff, window, opts.check_cocycle)?;
    let Some(w1) = w1 else {
        return Ok(ObstructionVerdict {
            verdict: Verdict::Nontrivial,
            certificates: vec![c1],
            witness: None,
        });
    };
    let mut certificates = vec![c1];
    if opts.stability {
        let wide = window.widened(STABILITY_MARGIN);
        let (c2, w2) = coboundary_on_window(phi, alg, coeff, &wide, opts.check_cocycle)?;
        certificates.push(c2);
        if w2.is_none() {
            return Ok(ObstructionVerdict {
                verdict: Verdict::Nontrivial,
                certificates,
                witness: None,
            });
        }
    }
    Ok(ObstructionVerdict {
        verdict: Verdict::TrivialUpToWindow,
        certificates,
        witness: Some(w1),
    })
}
