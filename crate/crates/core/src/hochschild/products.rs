use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cochain::Cochain;
use crate::error::{Error, Result};
use crate::exactla::Fp;
use crate::graded::{mul, Basis, GradedAlgebra, Homog};

/// Cup product `(zeta u eta)(l_1..l_{m+n}) =
/// (-1)^{|l_1 .. l_m| j} zeta(l_1..l_m) eta(l_{m+1}..l_{m+n})` for
/// algebra-valued cochains, `j` the internal degree of `eta`.
pub struct Cup<'a> {
    pub left: &'a dyn Cochain,
    pub right: &'a dyn Cochain,
    pub alg: &'a dyn GradedAlgebra,
}

impl Cochain for Cup<'_> {
    fn arity(&self) -> usize {
        self.left.arity() + self.right.arity()
    }
    fn degree(&self) -> i64 {
        self.left.degree() + self.right.degree()
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        let f = self.alg.field();
        let m = self.left.arity();
        let s: i64 = args[..m].iter().map(|b| b.deg).sum();
        let a = self.left.eval(&args[..m])?;
        let b = self.right.eval(&args[m..])?;
        Ok(mul(self.alg, &a, &b)?.scaled(f, f.sign(s * self.right.degree())))
    }
}

/// Linear combination of bar basis tuples `(l_0, ..., l_{n+1})`.
pub type BarElement = Vec<(Vec<Basis>, u32)>;

fn push_expanded(out: &mut BarElement, f: Fp, prefix: &[Basis], h: &Homog, suffix: &[Basis], c: u32) {
    for (b, cb) in h.support() {
        let mut t = prefix.to_vec();
        t.push(b);
        t.extend_from_slice(suffix);
        out.push((t, f.mulm(c, cb)));
    }
}

/// Sums coefficients of equal tuples and drops zeros.
pub fn collect(f: Fp, x: BarElement) -> BarElement {
    let mut m: BTreeMap<Vec<Basis>, u32> = BTreeMap::new();
    for (t, c) in x {
        let e = m.entry(t).or_insert(0);
        *e = f.addm(*e, c);
    }
    m.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Bar differential `sum_{i=0}^{n} (-1)^i (..., l_i l_{i+1}, ...)` on
/// `B_n = A (x) A^{(x)n} (x) A`.
pub fn bar_differential(alg: &dyn GradedAlgebra, t: &[Basis]) -> Result<BarElement> {
    let f = alg.field();
    if t.len() < 3 {
        return Err(Error::dims("bar differential needs n >= 1"));
    }
    let mut out = Vec::new();
    for i in 0..t.len() - 1 {
        let p = alg.mul_basis(t[i], t[i + 1])?;
        push_expanded(&mut out, f, &t[..i], &p, &t[i + 2..], f.sign(i as i64));
    }
    Ok(out)
}

pub fn bar_differential_elem(alg: &dyn GradedAlgebra, x: &BarElement) -> Result<BarElement> {
    let f = alg.field();
    let mut out = Vec::new();
    for (t, c) in x {
        for (u, cu) in bar_differential(alg, t)? {
            out.push((u, f.mulm(*c, cu)));
        }
    }
    Ok(collect(f, out))
}

/// Bar basis tuples of length `n + 2` with total degree at most `max`.
pub fn bar_basis(alg: &dyn GradedAlgebra, n: usize, max: i64) -> Result<Vec<Vec<Basis>>> {
    super::TupleWindow::total(max).tuples(alg, n + 2, false)
}

/// `f~(l_0, ..., l_{s+1}) = (-1)^{t|l_0|} l_0 f(l_1, ..., l_s) l_{s+1}`,
/// the bimodule map on the bar resolution attached to a cochain.
pub fn tilde_eval(c: &dyn Cochain, alg: &dyn GradedAlgebra, t: &[Basis]) -> Result<Homog> {
    let f = alg.field();
    let s = c.arity();
    if t.len() != s + 2 {
        return Err(Error::dims("bar tuple length"));
    }
    let l0 = Homog::basis(t[0], alg.dim(t[0].deg)?);
    let ls = Homog::basis(t[s + 1], alg.dim(t[s + 1].deg)?);
    let v = c.eval(&t[1..=s])?;
    let inner = mul(alg, &mul(alg, &l0, &v)?, &ls)?;
    Ok(inner.scaled(f, f.sign(c.degree() * t[0].deg)))
}

pub fn tilde_elem(c: &dyn Cochain, alg: &dyn GradedAlgebra, x: &BarElement, deg: i64) -> Result<Homog> {
    let f = alg.field();
    let mut out = Homog::zero(deg, alg.dim(deg)?);
    for (t, k) in x {
        out.add_scaled(f, *k, &tilde_eval(c, alg, t)?)?;
    }
    Ok(out)
}

/// Choice of comparison map used to lift a cochain along the bar
/// resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lifting {
    /// Through the diagonal `B -> B (x)_A B`.
    Diagonal,
    /// By applying the cochain to the leftmost slots.
    Solberg,
}

/// Lift of `eta` (arity `n`, degree `j`) to `B_{p+n} -> B_p` through the
/// diagonal: `(l_0..l_{p+n+1}) -> (-1)^{j |l_0 .. l_p|} (l_0, ..., l_p,
/// eta(l_{p+1}..l_{p+n}) l_{p+n+1})`.
pub fn diagonal_lift(eta: &dyn Cochain, alg: &dyn GradedAlgebra, p: usize, t: &[Basis]) -> Result<BarElement> {
    let f = alg.field();
    let n = eta.arity();
    if t.len() != p + n + 2 {
        return Err(Error::dims("bar tuple length"));
    }
    let s: i64 = t[..=p].iter().map(|b| b.deg).sum();
    let v = eta.eval(&t[p + 1..=p + n])?;
    let last = Homog::basis(t[p + n + 1], alg.dim(t[p + n + 1].deg)?);
    let tail = mul(alg, &v, &last)?;
    let mut out = Vec::new();
    push_expanded(&mut out, f, &t[..=p], &tail, &[], f.sign(s * eta.degree()));
    Ok(out)
}

/// Lift of `zeta` (arity `m`) to `B_{p+m} -> B_p` on the left:
/// `(l_0..l_{p+m+1}) -> (-1)^{mp} (zeta~(l_0..l_m, 1), l_{m+1}, ..., l_{p+m+1})`.
pub fn solberg_lift(zeta: &dyn Cochain, alg: &dyn GradedAlgebra, p: usize, t: &[Basis]) -> Result<BarElement> {
    let f = alg.field();
    let m = zeta.arity();
    if t.len() != p + m + 2 {
        return Err(Error::dims("bar tuple length"));
    }
    let mut head = t[..=m].to_vec();
    head.push(alg.unit());
    let v = tilde_eval(zeta, alg, &head)?;
    let mut out = Vec::new();
    push_expanded(&mut out, f, &[], &v, &t[m + 1..], f.sign((m * p) as i64));
    Ok(out)
}

/// Yoneda composite `first * second`: `first~` applied to the lift of
/// `second` to `B_{m+n} -> B_m`, `m` the arity of `first`.
pub struct Yoneda<'a> {
    pub first: &'a dyn Cochain,
    pub second: &'a dyn Cochain,
    pub alg: &'a dyn GradedAlgebra,
    pub lifting: Lifting,
}

impl Cochain for Yoneda<'_> {
    fn arity(&self) -> usize {
        self.first.arity() + self.second.arity()
    }
    fn degree(&self) -> i64 {
        self.first.degree() + self.second.degree()
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        let u = self.alg.unit();
        let mut t = Vec::with_capacity(args.len() + 2);
        t.push(u);
        t.extend_from_slice(args);
        t.push(u);
        let m = self.first.arity();
        let lifted = match self.lifting {
            Lifting::Diagonal => diagonal_lift(self.second, self.alg, m, &t)?,
            Lifting::Solberg => solberg_lift(self.second, self.alg, m, &t)?,
        };
        let deg = args.iter().map(|b| b.deg).sum::<i64>() + self.degree();
        tilde_elem(self.first, self.alg, &lifted, deg)
    }
}

/// Basis of the degree `t` part of the graded centre, i.e. the 0-cocycles
/// `z` with `(-1)^{t|l|} l z = z l` for all `l` of degree at most `max`.
pub fn graded_centre(alg: &dyn GradedAlgebra, t: i64, max: i64) -> Result<Vec<Homog>> {
    let f = alg.field();
    let n = alg.dim(t)?;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for d in 0..=max - t.max(0) {
        for l in crate::graded::basis_in(alg, d)? {
            let od = d + t;
            let dim = alg.dim(od)?;
            let mut block = vec![vec![0u32; n]; dim];
            for k in 0..n {
                let z = Basis::new(t, k);
                let a = alg.mul_basis(l, z)?.scaled(f, f.sign(t * d));
                let b = alg.mul_basis(z, l)?;
                for r in 0..dim {
                    block[r][k] = f.subm(a.coeffs[r], b.coeffs[r]);
                }
            }
            rows.extend(block);
        }
    }
    if rows.is_empty() {
        return Ok((0..n).map(|k| Homog::basis(Basis::new(t, k), n)).collect());
    }
    let m = crate::exactla::Matrix::from_rows(f, rows)?;
    Ok(m.kernel().into_iter().map(|c| Homog { deg: t, coeffs: c }).collect())
}
