//! Graded algebras, bimodules and modules over F_p.

mod expr;
mod module;
mod presentation;
mod tensor;
mod window;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::Fp;

pub use expr::{parse_expr, Monomial, Term};
pub use module::{
    act_left_elem, act_right_elem, apply_map, AlgebraMap, GradedBimodule, GradedRightModule, ModuleGenerator, ModuleMap, ModulePresentation, ModuleSpec,
    ModuleWindow, Regular, RestrictedBimodule, RestrictedModule, ShiftedBimodule,
};
pub use presentation::{
    Generator, GeneratorSpec, GradedAlgebraPresentation, PresentationSpec, Rule, DEFAULT_WINDOW,
};
pub use tensor::{
    enveloping, opposite, tensor_map, tensor_window, GradedMap, GradedVectorSpace, Tensor2, TensorWindow,
};
pub use window::AlgebraWindow;

/// A basis element: degree and index within that degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Basis {
    pub deg: i64,
    pub idx: usize,
}

impl Basis {
    pub fn new(deg: i64, idx: usize) -> Self {
        Basis { deg, idx }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}_{}", self.deg, self.idx)
    }
}

/// Homogeneous element with dense coordinates in its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homog {
    pub deg: i64,
    pub coeffs: Vec<u32>,
}

impl Homog {
    pub fn zero(deg: i64, dim: usize) -> Self {
        Homog {
            deg,
            coeffs: vec![0; dim],
        }
    }

    pub fn basis(b: Basis, dim: usize) -> Self {
        let mut h = Self::zero(b.deg, dim);
        h.coeffs[b.idx] = 1;
        h
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Nonzero coordinates as basis elements.
    pub fn support(&self) -> impl Iterator<Item = (Basis, u32)> + '_ {
        let deg = self.deg;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (Basis::new(deg, i), c))
    }

    /// `self += c * other`; degrees must agree.
    pub fn add_scaled(&mut self, f: Fp, c: u32, other: &Homog) -> Result<()> {
        if other.is_zero() || c == 0 {
            return Ok(());
        }
        if self.deg != other.deg {
            return Err(Error::dims(format!(
                "adding degree {} to degree {}",
                other.deg, self.deg
            )));
        }
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0);
        }
        crate::exactla::axpy(f, &mut self.coeffs, c, &other.coeffs);
        Ok(())
    }

    pub fn scaled(&self, f: Fp, c: u32) -> Homog {
        Homog {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|&x| f.mulm(x, c)).collect(),
        }
    }

    pub fn neg(&self, f: Fp) -> Homog {
        self.scaled(f, f.p() - 1)
    }
}

/// A graded algebra over F_p with a chosen homogeneous basis.
pub trait GradedAlgebra: Send + Sync {
    fn field(&self) -> Fp;
    /// Dimension in a degree; overflow outside the known window.
    fn dim(&self, deg: i64) -> Result<usize>;
    fn mul_basis(&self, a: Basis, b: Basis) -> Result<Homog>;
    fn unit(&self) -> Basis;
    fn label(&self, b: Basis) -> String;
    /// Degrees in which the algebra is materialised; `None` for unbounded.
    fn bounds(&self) -> (Option<i64>, Option<i64>);
}

pub fn mul(alg: &dyn GradedAlgebra, a: &Homog, b: &Homog) -> Result<Homog> {
    let f = alg.field();
    let deg = a.deg + b.deg;
    let mut out = Homog::zero(deg, alg.dim(deg)?);
    for (x, cx) in a.support() {
        for (y, cy) in b.support() {
            let p = alg.mul_basis(x, y)?;
            out.add_scaled(f, f.mulm(cx, cy), &p)?;
        }
    }
    Ok(out)
}

pub fn unit_element(alg: &dyn GradedAlgebra) -> Result<Homog> {
    let u = alg.unit();
    Ok(Homog::basis(u, alg.dim(u.deg)?))
}

pub fn basis_in(alg: &dyn GradedAlgebra, deg: i64) -> Result<Vec<Basis>> {
    Ok((0..alg.dim(deg)?).map(|i| Basis::new(deg, i)).collect())
}

pub fn is_unit(alg: &dyn GradedAlgebra, b: Basis) -> bool {
    alg.unit() == b
}

/// Human readable form such as `2*X*Y + Y^3`.
pub fn format_element(f: Fp, labels: impl Fn(Basis) -> String, h: &Homog) -> String {
    let mut parts = Vec::new();
    for (b, c) in h.support() {
        let c = f.centered(c);
        let l = labels(b);
        let s = match c {
            1 => l,
            -1 => format!("-{l}"),
            _ if l == "1" => c.to_string(),
            _ => format!("{c}*{l}"),
        };
        parts.push(s);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

/// Graded commutativity on basis pairs with total degree at most `max`.
pub fn check_graded_commutative(alg: &dyn GradedAlgebra, lo: i64, max: i64) -> Result<Vec<(Basis, Basis)>> {
    let f = alg.field();
    let mut bad = Vec::new();
    for da in lo..=max {
        for db in lo..=max - da {
            for a in basis_in(alg, da)? {
                for b in basis_in(alg, db)? {
                    let ab = alg.mul_basis(a, b)?;
                    let ba = alg.mul_basis(b, a)?.scaled(f, f.sign(da * db));
                    if ab != ba {
                        bad.push((a, b));
                    }
                }
            }
        }
    }
    Ok(bad)
}

/// Associativity on basis triples with total degree at most `max`.
pub fn check_associative(alg: &dyn GradedAlgebra, lo: i64, max: i64) -> Result<Vec<(Basis, Basis, Basis)>> {
    let mut bad = Vec::new();
    for da in lo..=max {
        for db in lo..=max - da {
            for dc in lo..=max - da - db {
                for a in basis_in(alg, da)? {
                    for b in basis_in(alg, db)? {
                        let ab = alg.mul_basis(a, b)?;
                        for c in basis_in(alg, dc)? {
                            let c_h = Homog::basis(c, alg.dim(dc)?);
                            let left = mul(alg, &ab, &c_h)?;
                            let bc = alg.mul_basis(b, c)?;
                            let a_h = Homog::basis(a, alg.dim(da)?);
                            let right = mul(alg, &a_h, &bc)?;
                            if left != right {
                                bad.push((a, b, c));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(bad)
}
