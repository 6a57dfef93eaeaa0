use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Basis, GradedAlgebra, Homog, TensorWindow};
use crate::hochschild::Cochain;

/// Sign convention for the right-hand term of the product formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KunnethSigns {
    /// `x_1..x_n (x) psi(y_1..y_n)` with no sign.
    Literal,
    /// The Koszul sign `eps_n (-1)^{t sum |x_i|}`, `t` the internal degree.
    Koszul,
}

/// `eps_n = (-1)^{sum_{i<j} |y_i||x_j|}` for pairs `(x_i, y_i)`.
fn shuffle_sign(pairs: &[(Basis, Basis)]) -> i64 {
    let mut e = 0;
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            e += pairs[i].1.deg * pairs[j].0.deg;
        }
    }
    e
}

/// `Phi(phi) + Psi(psi)` on `A (x) B`, where
/// `Phi(phi)(x_i (x) y_i) = eps_n phi(x_1..x_n) (x) y_1..y_n` and
/// `Psi(psi)(x_i (x) y_i) = eta_n x_1..x_n (x) psi(y_1..y_n)`.
/// Either side may be absent.
pub struct KunnethCochain {
    pub tensor: Arc<TensorWindow>,
    pub a: Arc<dyn GradedAlgebra>,
    pub b: Arc<dyn GradedAlgebra>,
    pub left: Option<Arc<dyn Cochain>>,
    pub right: Option<Arc<dyn Cochain>>,
    pub signs: KunnethSigns,
    arity: usize,
    degree: i64,
}

impl KunnethCochain {
    pub fn new(
        tensor: Arc<TensorWindow>,
        a: Arc<dyn GradedAlgebra>,
        b: Arc<dyn GradedAlgebra>,
        left: Option<Arc<dyn Cochain>>,
        right: Option<Arc<dyn Cochain>>,
        signs: KunnethSigns,
    ) -> Result<Self> {
        let (arity, degree) = match (&left, &right) {
            (Some(l), Some(r)) => {
                if l.arity() != r.arity() || l.degree() != r.degree() {
                    return Err(Error::dims("factor cochains of different shape"));
                }
                (l.arity(), l.degree())
            }
            (Some(c), None) | (None, Some(c)) => (c.arity(), c.degree()),
            (None, None) => return Err(Error::invalid("no factor cochain")),
        };
        Ok(KunnethCochain {
            tensor,
            a,
            b,
            left,
            right,
            signs,
            arity,
            degree,
        })
    }

    fn product(alg: &dyn GradedAlgebra, xs: impl Iterator<Item = Basis>) -> Result<Homog> {
        let mut acc = crate::graded::unit_element(alg)?;
        for x in xs {
            let xh = Homog::basis(x, alg.dim(x.deg)?);
            acc = crate::graded::mul(alg, &acc, &xh)?;
        }
        Ok(acc)
    }

    fn tensor_elem(&self, u: &Homog, v: &Homog, c: u32, out: &mut Homog) -> Result<()> {
        let f = self.a.field();
        for (x, cx) in u.support() {
            for (y, cy) in v.support() {
                let t = self
                    .tensor
                    .basis_of(x, y)
                    .ok_or_else(|| Error::overflow(x.deg + y.deg, self.tensor.algebra.lo(), self.tensor.algebra.hi()))?;
                out.coeffs[t.idx] = f.addm(out.coeffs[t.idx], f.mulm(c, f.mulm(cx, cy)));
            }
        }
        Ok(())
    }
}

impl Cochain for KunnethCochain {
    fn arity(&self) -> usize {
        self.arity
    }
    fn degree(&self) -> i64 {
        self.degree
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        let f = self.a.field();
        let pairs: Vec<(Basis, Basis)> = args
            .iter()
            .map(|&t| self.tensor.pair(t).ok_or_else(|| Error::dims("tensor basis element")))
            .collect::<Result<_>>()?;
        let deg = args.iter().map(|b| b.deg).sum::<i64>() + self.degree;
        let mut out = Homog::zero(deg, self.tensor.algebra.dim(deg)?);
        let eps = shuffle_sign(&pairs);
        if let Some(l) = &self.left {
            let xs: Vec<Basis> = pairs.iter().map(|p| p.0).collect();
            let v = l.eval(&xs)?;
            if !v.is_zero() {
                let w = Self::product(self.b.as_ref(), pairs.iter().map(|p| p.1))?;
                self.tensor_elem(&v, &w, f.sign(eps), &mut out)?;
            }
        }
        if let Some(r) = &self.right {
            let ys: Vec<Basis> = pairs.iter().map(|p| p.1).collect();
            let v = r.eval(&ys)?;
            if !v.is_zero() {
                let w = Self::product(self.a.as_ref(), pairs.iter().map(|p| p.0))?;
                let sx: i64 = pairs.iter().map(|p| p.0.deg).sum();
                let s = match self.signs {
                    KunnethSigns::Literal => 1,
                    KunnethSigns::Koszul => f.sign(eps + self.degree * sx),
                };
                self.tensor_elem(&w, &v, s, &mut out)?;
            }
        }
        Ok(out)
    }
}
