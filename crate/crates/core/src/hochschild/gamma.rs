use std::sync::Arc;

use super::cochain::Cochain;
use super::verdict::{coboundary_decide, DecideOptions, ObstructionVerdict};
use super::TupleWindow;
use crate::error::{Error, Result};
use crate::graded::{apply_map, Basis, GradedAlgebra, Homog, RestrictedBimodule};
use crate::graded::AlgebraMap;

/// `Gamma(zeta) = can o zeta`, a cochain of the source with values in the
/// target viewed as a bimodule along `can`.
pub struct Pushforward<'a> {
    pub inner: &'a dyn Cochain,
    pub can: &'a dyn AlgebraMap,
    pub target: &'a dyn GradedAlgebra,
}

impl Cochain for Pushforward<'_> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }
    fn degree(&self) -> i64 {
        self.inner.degree()
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        let v = self.inner.eval(args)?;
        apply_map(self.can, &v, self.target.dim(v.deg)?, self.target.field())
    }
}

/// `psi o can^{(x)n}` for a cochain `psi` of the target: a cochain of the
/// source with values in the target.
pub struct Pullback<'a> {
    pub inner: &'a dyn Cochain,
    pub can: &'a dyn AlgebraMap,
    pub target: &'a dyn GradedAlgebra,
}

impl Pullback<'_> {
    fn expand(&self, args: &[Basis], i: usize, cur: &mut Vec<Basis>, c: u32, out: &mut Homog) -> Result<()> {
        let f = self.target.field();
        if i == args.len() {
            let v = self.inner.eval(cur)?;
            return out.add_scaled(f, c, &v);
        }
        let img = self.can.apply_basis(args[i])?;
        for (b, cb) in img.support() {
            cur.push(b);
            self.expand(args, i + 1, cur, f.mulm(c, cb), out)?;
            cur.pop();
        }
        Ok(())
    }
}

impl Cochain for Pullback<'_> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }
    fn degree(&self) -> i64 {
        self.inner.degree()
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        let deg = args.iter().map(|b| b.deg).sum::<i64>() + self.inner.degree();
        let mut out = Homog::zero(deg, self.target.dim(deg)?);
        self.expand(args, 0, &mut Vec::with_capacity(args.len()), 1, &mut out)?;
        Ok(out)
    }
}

/// The triple product `m(X Y^i, X Y^j, X Y^l) = Y^{i+j+l+1}`, zero unless
/// all three arguments are odd, on an algebra with a single basis
/// monomial `X^e Y^i` in each degree.
pub struct OddTripleCochain {
    pub algebra: Arc<dyn GradedAlgebra>,
}

impl Cochain for OddTripleCochain {
    fn arity(&self) -> usize {
        3
    }
    fn degree(&self) -> i64 {
        -1
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        let total: i64 = args.iter().map(|b| b.deg).sum();
        let deg = total - 1;
        let dim = self.algebra.dim(deg)?;
        if args.iter().all(|b| b.deg.rem_euclid(2) == 1) {
            if dim != 1 {
                return Err(Error::invalid("triple product needs one basis monomial per degree"));
            }
            return Ok(Homog::basis(Basis::new(deg, 0), 1));
        }
        Ok(Homog::zero(deg, dim))
    }
}

/// Verdict for `Gamma(zeta)` in the cochains of the source with values in
/// the target.
pub fn gamma_verdict(
    zeta: &dyn Cochain,
    source: &dyn GradedAlgebra,
    target: Arc<dyn GradedAlgebra>,
    can: Arc<dyn AlgebraMap>,
    window: &TupleWindow,
    opts: DecideOptions,
) -> Result<ObstructionVerdict> {
    let coeff = RestrictedBimodule {
        target: target.clone(),
        map: can.clone(),
    };
    let g = Pushforward {
        inner: zeta,
        can: can.as_ref(),
        target: target.as_ref(),
    };
    coboundary_decide(&g, source, &coeff, window, opts)
}

/// Verdict for `Gamma(zeta) - psi o can` with `psi` a cochain of the target.
pub fn compare_with_target(
    zeta: &dyn Cochain,
    psi: &dyn Cochain,
    source: &dyn GradedAlgebra,
    target: Arc<dyn GradedAlgebra>,
    can: Arc<dyn AlgebraMap>,
    window: &TupleWindow,
    opts: DecideOptions,
) -> Result<ObstructionVerdict> {
    let coeff = RestrictedBimodule {
        target: target.clone(),
        map: can.clone(),
    };
    let g = Pushforward {
        inner: zeta,
        can: can.as_ref(),
        target: target.as_ref(),
    };
    let p = Pullback {
        inner: psi,
        can: can.as_ref(),
        target: target.as_ref(),
    };
    let diff = super::cochain::Difference {
        a: &g,
        b: &p,
        field: source.field(),
    };
    coboundary_decide(&diff, source, &coeff, window, opts)
}
