use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cochain::{Cochain, TupleWindow};
use super::system::{solve_blocks, Block, Key};
use super::verdict::{DecideOptions, ObstructionVerdict, RankCertificate, Verdict, Witness, STABILITY_MARGIN};
use crate::error::{Error, Result};
use crate::graded::{
    act_right_elem, apply_map, AlgebraMap, Basis, GradedAlgebra, GradedRightModule, Homog, ModuleGenerator,
    ModulePresentation, ModuleWindow,
};

/// A cochain `X (x) A^{(x)s} -> Y` computing `Ext_A(X, Y)` through the
/// bar resolution `X (x) B(A)`.
pub trait ModuleCochain: Send + Sync {
    fn arity(&self) -> usize;
    fn degree(&self) -> i64;
    fn eval(&self, x: Basis, args: &[Basis]) -> Result<Homog>;
}

/// Equation tuples `(x, l_1, ..., l_s)`: `x` within `[x_lo, x_hi]`, the
/// `l_i` in a tuple window, and optionally `|x| + sum |l_i| <= total_hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingWindow {
    pub x_lo: i64,
    pub x_hi: i64,
    pub lambdas: TupleWindow,
    pub total_hi: Option<i64>,
}

impl PairingWindow {
    /// Everything of total degree at most `size`, module degrees from `x_lo`.
    pub fn total(x_lo: i64, size: i64) -> Self {
        PairingWindow {
            x_lo,
            x_hi: size,
            lambdas: TupleWindow::total(size),
            total_hi: Some(size),
        }
    }

    /// Module degrees in `[-size, size]`, algebra tuples of total at most `size`.
    pub fn symmetric(size: i64) -> Self {
        PairingWindow {
            x_lo: -size,
            x_hi: size,
            lambdas: TupleWindow::total(size),
            total_hi: None,
        }
    }

    pub fn widened(&self, by: i64) -> Self {
        PairingWindow {
            x_lo: if self.total_hi.is_some() { self.x_lo } else { self.x_lo - by },
            x_hi: self.x_hi + by,
            lambdas: self.lambdas.widened(by),
            total_hi: self.total_hi.map(|t| t + by),
        }
    }

    fn equations(
        &self,
        module: &dyn GradedRightModule,
        alg: &dyn GradedAlgebra,
        s: usize,
    ) -> Result<Vec<(Basis, Vec<Basis>)>> {
        let lam = self.lambdas.tuples(alg, s, true)?;
        let mut out = Vec::new();
        for d in self.x_lo..=self.x_hi {
            for i in 0..module.dim(d)? {
                let x = Basis::new(d, i);
                for t in &lam {
                    let total = d + t.iter().map(|b| b.deg).sum::<i64>();
                    if self.total_hi.is_none_or(|h| total <= h) {
                        out.push((x, t.clone()));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `(f (x) phi)(x, l_1..l_s) = (-1)^{t|x|} f(x) . phi(l_1..l_s)` for a
/// module map `f` (identity when absent) and a Hochschild cocycle `phi`
/// of internal degree `t`; `phi` may take values in a second algebra
/// reached through `coeff_map`.
pub struct PairingCochain {
    pub module: Arc<dyn GradedRightModule>,
    pub map: Option<Arc<dyn Fn(Basis) -> Result<Homog> + Send + Sync>>,
    pub phi: Arc<dyn Cochain>,
    pub coeff_map: Option<(Arc<dyn AlgebraMap>, Arc<dyn GradedAlgebra>)>,
}

impl ModuleCochain for PairingCochain {
    fn arity(&self) -> usize {
        self.phi.arity()
    }
    fn degree(&self) -> i64 {
        self.phi.degree()
    }
    fn eval(&self, x: Basis, args: &[Basis]) -> Result<Homog> {
        let f = self.module.field();
        let fx = match &self.map {
            Some(m) => m(x)?,
            None => Homog::basis(x, self.module.dim(x.deg)?),
        };
        let mut v = self.phi.eval(args)?;
        if let Some((can, target)) = &self.coeff_map {
            v = apply_map(can.as_ref(), &v, target.dim(v.deg)?, f)?;
        }
        let deg = fx.deg + v.deg;
        if fx.is_zero() || v.is_zero() {
            return Ok(Homog::zero(deg, self.module.dim(deg)?));
        }
        Ok(act_right_elem(self.module.as_ref(), &fx, &v)?.scaled(f, f.sign(self.degree() * x.deg)))
    }
}

/// `(delta c)(x, l_1..l_{s+1}) = c(x l_1, l_2, ...) + sum_i (-1)^i c(x, ..., l_i l_{i+1}, ...)
/// + (-1)^{s+1} c(x, l_1..l_s) l_{s+1}`.
pub fn module_delta_at(
    c: &dyn ModuleCochain,
    module: &dyn GradedRightModule,
    alg: &dyn GradedAlgebra,
    x: Basis,
    args: &[Basis],
) -> Result<Homog> {
    let f = alg.field();
    let s = c.arity();
    if args.len() != s + 1 {
        return Err(Error::dims("coboundary arity"));
    }
    let deg = x.deg + args.iter().map(|b| b.deg).sum::<i64>() + c.degree();
    let mut out = Homog::zero(deg, module.dim(deg)?);
    for (b, cb) in module.act_right(x, args[0])?.support() {
        out.add_scaled(f, cb, &c.eval(b, &args[1..])?)?;
    }
    for i in 1..=s {
        let p = alg.mul_basis(args[i - 1], args[i])?;
        for (b, cb) in p.support() {
            let mut t = args[..i - 1].to_vec();
            t.push(b);
            t.extend_from_slice(&args[i + 1..]);
            out.add_scaled(f, f.mulm(cb, f.sign(i as i64)), &c.eval(x, &t)?)?;
        }
    }
    let last = c.eval(x, &args[..s])?;
    if !last.is_zero() {
        let r = Homog::basis(args[s], alg.dim(args[s].deg)?);
        out.add_scaled(f, f.sign(s as i64 + 1), &act_right_elem(module, &last, &r)?)?;
    }
    Ok(out)
}

/// Table form of a module cochain; keys are `[x, l_1, ..., l_s]`.
pub struct ModuleTable<'a> {
    pub witness: &'a Witness,
    pub module: &'a dyn GradedRightModule,
}

impl ModuleCochain for ModuleTable<'_> {
    fn arity(&self) -> usize {
        self.witness.arity
    }
    fn degree(&self) -> i64 {
        self.witness.degree
    }
    fn eval(&self, x: Basis, args: &[Basis]) -> Result<Homog> {
        let mut key = vec![x];
        key.extend_from_slice(args);
        match self.witness.values.get(&key) {
            Some(v) => Ok(v.clone()),
            None => {
                let d = key.iter().map(|b| b.deg).sum::<i64>() + self.witness.degree;
                Ok(Homog::zero(d, self.module.dim(d)?))
            }
        }
    }
}

/// Decides on one window whether a module cocycle is a coboundary of a
/// normalised cochain.
pub fn module_coboundary_on_window(
    c: &dyn ModuleCochain,
    module: &dyn GradedRightModule,
    alg: &dyn GradedAlgebra,
    window: &PairingWindow,
    check_cocycle: bool,
) -> Result<(RankCertificate, Option<Witness>)> {
    let f = alg.field();
    let s = c.arity();
    let m = c.degree();
    let mut skipped = 0;
    if check_cocycle {
        for (x, t) in window.equations(module, alg, s + 1)? {
            match module_delta_at(c, module, alg, x, &t) {
                Ok(v) if v.is_zero() => {}
                Ok(_) => {
                    return Err(Error::NotACocycle(format!(
                        "module cochain has nonzero coboundary at {}",
                        module.label(x)
                    )))
                }
                Err(e) if e.is_overflow() => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    if s == 0 {
        return Err(Error::invalid("module cochains of arity zero are not supported"));
    }
    let mut blocks = Vec::new();
    let mut dims: BTreeMap<Vec<Basis>, usize> = BTreeMap::new();
    for (x, t) in window.equations(module, alg, s)? {
        let rhs = c.eval(x, &t)?;
        let out_deg = rhs.deg;
        let out_dim = rhs.dim();
        if out_dim == 0 {
            continue;
        }
        let mut terms: BTreeMap<Key, Vec<u32>> = BTreeMap::new();
        let mut add = |key: Key, col: &Homog, coef: u32| {
            let e = terms.entry(key).or_insert_with(|| vec![0; out_dim]);
            crate::exactla::axpy(f, e, coef, &col.coeffs);
        };
        let unit_col = |k: usize| Homog::basis(Basis::new(out_deg, k), out_dim);
        // g(x l_1, l_2, ...)
        for (b, cb) in module.act_right(x, t[0])?.support() {
            let mut u = vec![b];
            u.extend_from_slice(&t[1..]);
            dims.insert(u.clone(), out_dim);
            for k in 0..out_dim {
                add((u.clone(), k), &unit_col(k), cb);
            }
        }
        // (-1)^i g(x, ..., l_i l_{i+1}, ...)
        for i in 1..s {
            for (b, cb) in alg.mul_basis(t[i - 1], t[i])?.support() {
                if b == alg.unit() {
                    continue;
                }
                let mut u = vec![x];
                u.extend_from_slice(&t[..i - 1]);
                u.push(b);
                u.extend_from_slice(&t[i + 1..]);
                dims.insert(u.clone(), out_dim);
                for k in 0..out_dim {
                    add((u.clone(), k), &unit_col(k), f.mulm(cb, f.sign(i as i64)));
                }
            }
        }
        // (-1)^s g(x, l_1..l_{s-1}) l_s
        let mut u = vec![x];
        u.extend_from_slice(&t[..s - 1]);
        let ud = u.iter().map(|b| b.deg).sum::<i64>() + m;
        let dim_u = module.dim(ud)?;
        dims.insert(u.clone(), dim_u);
        for k in 0..dim_u {
            let v = module.act_right(Basis::new(ud, k), t[s - 1])?;
            add((u.clone(), k), &v, f.sign(s as i64));
        }
        blocks.push(Block {
            rhs: rhs.coeffs,
            terms: terms.into_iter().filter(|(_, v)| v.iter().any(|&c| c != 0)).collect(),
        });
    }
    let out = solve_blocks(f, &blocks, |u| u.iter().map(|b| b.deg).sum::<i64>() + m, &dims)?;
    let cert = RankCertificate {
        window: window.lambdas,
        equations: out.equations,
        unknowns: out.unknowns,
        rank: out.rank,
        augmented_rank: out.augmented_rank,
        skipped_cocycle_checks: skipped,
    };
    Ok((
        cert,
        out.solution.map(|values| Witness {
            arity: s - 1,
            degree: m,
            values,
        }),
    ))
}

/// Verifies `delta g = c` on the window for a module witness.
pub fn check_module_witness(
    c: &dyn ModuleCochain,
    witness: &Witness,
    module: &dyn GradedRightModule,
    alg: &dyn GradedAlgebra,
    window: &PairingWindow,
) -> Result<bool> {
    let g = ModuleTable { witness, module };
    for (x, t) in window.equations(module, alg, c.arity())? {
        if module_delta_at(&g, module, alg, x, &t)? != c.eval(x, &t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn module_coboundary_decide(
    c: &dyn ModuleCochain,
    module: &dyn GradedRightModule,
    alg: &dyn GradedAlgebra,
    window: &PairingWindow,
    opts: DecideOptions,
) -> Result<ObstructionVerdict> {
    let (c1, w1) = module_coboundary_on_window(c, module, alg, window, opts.check_cocycle)?;
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
        let (c2, w2) = module_coboundary_on_window(c, module, alg, &wide, opts.check_cocycle)?;
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

/// The class `kappa(X) = id (x) mu` of a module and its verdict, after
/// splitting off free summands (which carry no obstruction).
#[derive(Clone, Debug)]
pub struct RealisabilityReport {
    pub verdict: ObstructionVerdict,
    pub free_summands: Vec<ModuleGenerator>,
    pub reduced: ModulePresentation,
}

/// `kappa(X)` for a presented module over `alg` and a Hochschild cocycle
/// `mu` of bidegree `(3, -1)`, decided on `PairingWindow::total` of the
/// given size (and its widening).
pub fn realisability(
    alg: Arc<dyn GradedAlgebra>,
    presentation: &ModulePresentation,
    mu: Arc<dyn Cochain>,
    size: i64,
    opts: DecideOptions,
) -> Result<RealisabilityReport> {
    let (reduced, free) = presentation.split_free();
    if reduced.generators.is_empty() {
        let cert = RankCertificate {
            window: TupleWindow::total(size),
            equations: 0,
            unknowns: 0,
            rank: 0,
            augmented_rank: 0,
            skipped_cocycle_checks: 0,
        };
        return Ok(RealisabilityReport {
            verdict: ObstructionVerdict {
                verdict: Verdict::TrivialUpToWindow,
                certificates: vec![cert],
                witness: Some(Witness::zero(mu.arity().saturating_sub(1), mu.degree())),
            },
            free_summands: free,
            reduced,
        });
    }
    let verdict = kappa_verdict(alg, &reduced, mu, size, opts)?;
    Ok(RealisabilityReport {
        verdict,
        free_summands: free,
        reduced,
    })
}

/// `kappa(X)` without splitting off free summands.
pub fn kappa_verdict(
    alg: Arc<dyn GradedAlgebra>,
    presentation: &ModulePresentation,
    mu: Arc<dyn Cochain>,
    size: i64,
    opts: DecideOptions,
) -> Result<ObstructionVerdict> {
    let module: Arc<ModuleWindow> = Arc::new(ModuleWindow::new(alg.clone(), presentation.clone()));
    let x_lo = presentation.generators.iter().map(|g| g.degree).min().unwrap_or(0);
    let c = PairingCochain {
        module: module.clone(),
        map: None,
        phi: mu,
        coeff_map: None,
    };
    module_coboundary_decide(&c, module.as_ref(), alg.as_ref(), &PairingWindow::total(x_lo, size), opts)
}
