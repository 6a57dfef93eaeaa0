use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{act_left_elem, Basis, GradedAlgebra, GradedBimodule, Homog};

/// A Hochschild cochain `A^{(x)n} -> M` of internal degree `degree`,
/// evaluated on basis tuples.
pub trait Cochain: Send + Sync {
    fn arity(&self) -> usize;
    fn degree(&self) -> i64;
    fn eval(&self, args: &[Basis]) -> Result<Homog>;
}

/// Shape of a finite family of basis tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    /// Entries in `[0, size]` with total degree at most `size`.
    Total,
    /// Entries in `[-size, size]`, no bound on the total.
    Laurent,
    /// Explicit bounds.
    Box,
}

/// Finite set of tuples on which cochains are known and equations posed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TupleWindow {
    pub kind: WindowKind,
    pub size: i64,
    pub entry_lo: i64,
    pub entry_hi: i64,
    pub total_lo: Option<i64>,
    pub total_hi: Option<i64>,
}

impl TupleWindow {
    pub fn total(size: i64) -> Self {
        TupleWindow {
            kind: WindowKind::Total,
            size,
            entry_lo: 0,
            entry_hi: size,
            total_lo: None,
            total_hi: Some(size),
        }
    }

    pub fn laurent(size: i64) -> Self {
        TupleWindow {
            kind: WindowKind::Laurent,
            size,
            entry_lo: -size,
            entry_hi: size,
            total_lo: None,
            total_hi: None,
        }
    }

    pub fn bounds(entry_lo: i64, entry_hi: i64, total_lo: Option<i64>, total_hi: Option<i64>) -> Self {
        TupleWindow {
            kind: WindowKind::Box,
            size: entry_hi.max(-entry_lo),
            entry_lo,
            entry_hi,
            total_lo,
            total_hi,
        }
    }

    /// The same shape with `size` increased by `by`.
    pub fn widened(&self, by: i64) -> Self {
        match self.kind {
            WindowKind::Total => Self::total(self.size + by),
            WindowKind::Laurent => Self::laurent(self.size + by),
            WindowKind::Box => Self::bounds(
                self.entry_lo - by,
                self.entry_hi + by,
                self.total_lo.map(|t| t - by),
                self.total_hi.map(|t| t + by),
            ),
        }
    }

    pub fn contains(&self, args: &[Basis]) -> bool {
        let mut total = 0;
        for a in args {
            if a.deg < self.entry_lo || a.deg > self.entry_hi {
                return false;
            }
            total += a.deg;
        }
        self.total_lo.is_none_or(|t| total >= t) && self.total_hi.is_none_or(|t| total <= t)
    }

    /// All tuples of length `n` in the window, skipping the unit when
    /// `normalized`, in lexicographic order.
    pub fn tuples(&self, alg: &dyn GradedAlgebra, n: usize, normalized: bool) -> Result<Vec<Vec<Basis>>> {
        let mut per_degree = Vec::new();
        for d in self.entry_lo..=self.entry_hi {
            for i in 0..alg.dim(d)? {
                let b = Basis::new(d, i);
                if normalized && b == alg.unit() {
                    continue;
                }
                per_degree.push(b);
            }
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.extend(&per_degree, n, 0, &mut cur, &mut out);
        Ok(out)
    }

    fn extend(&self, elems: &[Basis], n: usize, total: i64, cur: &mut Vec<Basis>, out: &mut Vec<Vec<Basis>>) {
        let left = (n - cur.len()) as i64;
        if left == 0 {
            if self.total_lo.is_none_or(|t| total >= t) && self.total_hi.is_none_or(|t| total <= t) {
                out.push(cur.clone());
            }
            return;
        }
        for &b in elems {
            let t = total + b.deg;
            if let Some(hi) = self.total_hi {
                if t + (left - 1) * self.entry_lo.max(min_deg(elems)) > hi {
                    continue;
                }
            }
            if let Some(lo) = self.total_lo {
                if t + (left - 1) * self.entry_hi < lo {
                    continue;
                }
            }
            cur.push(b);
            self.extend(elems, n, t, cur, out);
            cur.pop();
        }
    }
}

fn min_deg(elems: &[Basis]) -> i64 {
    elems.first().map_or(0, |b| b.deg)
}

/// A cochain given by a table on a window; tuples inside the window
/// missing from the table are zero, tuples outside overflow.
#[derive(Clone)]
pub struct HochschildCochain {
    pub arity: usize,
    pub degree: i64,
    pub window: TupleWindow,
    pub values: BTreeMap<Vec<Basis>, Homog>,
    pub coeff: Arc<dyn GradedBimodule>,
}

impl std::fmt::Debug for HochschildCochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HochschildCochain")
            .field("arity", &self.arity)
            .field("degree", &self.degree)
            .field("window", &self.window)
            .field("values", &self.values)
            .finish()
    }
}

impl HochschildCochain {
    pub fn new(arity: usize, degree: i64, window: TupleWindow, coeff: Arc<dyn GradedBimodule>) -> Self {
        HochschildCochain {
            arity,
            degree,
            window,
            values: BTreeMap::new(),
            coeff,
        }
    }

    /// Records a value, dropping zeros.
    pub fn set(&mut self, args: Vec<Basis>, value: Homog) -> Result<()> {
        if args.len() != self.arity {
            return Err(Error::dims("cochain arity"));
        }
        let total: i64 = args.iter().map(|b| b.deg).sum();
        if value.deg != total + self.degree {
            return Err(Error::dims(format!(
                "value of degree {} on a tuple of total degree {total}",
                value.deg
            )));
        }
        if value.is_zero() {
            self.values.remove(&args);
        } else {
            self.values.insert(args, value);
        }
        Ok(())
    }

    /// Tabulates another cochain on a window.
    pub fn tabulate(
        c: &dyn Cochain,
        alg: &dyn GradedAlgebra,
        coeff: Arc<dyn GradedBimodule>,
        window: TupleWindow,
        normalized: bool,
    ) -> Result<Self> {
        let mut out = HochschildCochain::new(c.arity(), c.degree(), window, coeff);
        for t in window.tuples(alg, c.arity(), normalized)? {
            let v = c.eval(&t)?;
            out.set(t, v)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

impl Cochain for HochschildCochain {
    fn arity(&self) -> usize {
        self.arity
    }
    fn degree(&self) -> i64 {
        self.degree
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        if args.len() != self.arity {
            return Err(Error::dims("cochain arity"));
        }
        let total: i64 = args.iter().map(|b| b.deg).sum();
        if !self.window.contains(args) {
            let d = args
                .iter()
                .map(|b| b.deg)
                .find(|&d| d < self.window.entry_lo || d > self.window.entry_hi)
                .unwrap_or(total);
            return Err(Error::overflow(d, self.window.entry_lo, self.window.entry_hi));
        }
        match self.values.get(args) {
            Some(v) => Ok(v.clone()),
            None => Ok(Homog::zero(total + self.degree, self.coeff.dim(total + self.degree)?)),
        }
    }
}

impl<C: Cochain + ?Sized> Cochain for Arc<C> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn degree(&self) -> i64 {
        (**self).degree()
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        (**self).eval(args)
    }
}

/// `a - b` for cochains of the same shape.
pub struct Difference<'a> {
    pub a: &'a dyn Cochain,
    pub b: &'a dyn Cochain,
    pub field: crate::exactla::Fp,
}

impl Cochain for Difference<'_> {
    fn arity(&self) -> usize {
        self.a.arity()
    }
    fn degree(&self) -> i64 {
        self.a.degree()
    }
    fn eval(&self, args: &[Basis]) -> Result<Homog> {
        let mut v = self.a.eval(args)?;
        let w = self.b.eval(args)?;
        if v.dim() == 0 {
            return Ok(w.neg(self.field));
        }
        v.add_scaled(self.field, self.field.negm(1), &w)?;
        Ok(v)
    }
}

/// `phi(..., a, ...)` extended linearly in one slot.
pub(crate) fn eval_slot(phi: &dyn Cochain, args: &[Basis], slot: usize, a: &Homog, out: &mut Homog, c: u32, f: crate::exactla::Fp) -> Result<()> {
    let mut t = args.to_vec();
    for (b, cb) in a.support() {
        t[slot] = b;
        let v = phi.eval(&t)?;
        out.add_scaled(f, f.mulm(c, cb), &v)?;
    }
    Ok(())
}

/// `(delta phi)(l_1, ..., l_{n+1})` with
/// `(-1)^{m|l_1|} l_1 phi(l_2, ...) + sum_i (-1)^i phi(..., l_i l_{i+1}, ...)
/// + (-1)^{n+1} phi(l_1, ..., l_n) l_{n+1}`.
pub fn delta_at(phi: &dyn Cochain, alg: &dyn GradedAlgebra, coeff: &dyn GradedBimodule, args: &[Basis]) -> Result<Homog> {
    let f = alg.field();
    let n = phi.arity();
    if args.len() != n + 1 {
        return Err(Error::dims("coboundary arity"));
    }
    let m = phi.degree();
    let total: i64 = args.iter().map(|b| b.deg).sum();
    let deg = total + m;
    let mut out = Homog::zero(deg, coeff.dim(deg)?);
    let first = phi.eval(&args[1..])?;
    if !first.is_zero() {
        let l = Homog::basis(args[0], alg.dim(args[0].deg)?);
        out.add_scaled(f, f.sign(m * args[0].deg), &act_left_elem(coeff, &l, &first)?)?;
    }
    for i in 1..=n {
        let prod = alg.mul_basis(args[i - 1], args[i])?;
        if prod.is_zero() {
            continue;
        }
        let mut t: Vec<Basis> = Vec::with_capacity(n);
        t.extend_from_slice(&args[..i - 1]);
        t.push(args[i - 1]);
        t.extend_from_slice(&args[i + 1..]);
        eval_slot(phi, &t, i - 1, &prod, &mut out, f.sign(i as i64), f)?;
    }
    let last = phi.eval(&args[..n])?;
    if !last.is_zero() {
        let r = Homog::basis(args[n], alg.dim(args[n].deg)?);
        out.add_scaled(f, f.sign(n as i64 + 1), &crate::graded::act_right_elem(coeff, &last, &r)?)?;
    }
    Ok(out)
}

/// `delta phi` tabulated on a window.
pub fn delta(
    phi: &dyn Cochain,
    alg: &dyn GradedAlgebra,
    coeff: Arc<dyn GradedBimodule>,
    window: TupleWindow,
    normalized: bool,
) -> Result<HochschildCochain> {
    let mut out = HochschildCochain::new(phi.arity() + 1, phi.degree(), window, coeff.clone());
    for t in window.tuples(alg, phi.arity() + 1, normalized)? {
        let v = delta_at(phi, alg, coeff.as_ref(), &t)?;
        out.set(t, v)?;
    }
    Ok(out)
}

/// Tuples of the window where `delta phi` is nonzero, and the number of
/// tuples skipped because an evaluation left the known range.
pub fn cocycle_defects(
    phi: &dyn Cochain,
    alg: &dyn GradedAlgebra,
    coeff: &dyn GradedBimodule,
    window: &TupleWindow,
) -> Result<(Vec<Vec<Basis>>, usize)> {
    let mut bad = Vec::new();
    let mut skipped = 0;
    for t in window.tuples(alg, phi.arity() + 1, true)? {
        match delta_at(phi, alg, coeff, &t) {
            Ok(v) if v.is_zero() => {}
            Ok(_) => bad.push(t),
            Err(e) if e.is_overflow() => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((bad, skipped))
}
