use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Basis, GradedAlgebra, Homog};
use crate::error::{Error, Result};
use crate::exactla::Fp;

/// A graded algebra materialised in degrees `[lo, hi]` by structure
/// constants. Products whose degree leaves the window overflow.
#[derive(Clone, Debug)]
pub struct AlgebraWindow {
    field: Fp,
    lo: i64,
    hi: i64,
    labels: Vec<Vec<String>>,
    unit: Basis,
    products: HashMap<(Basis, Basis), Homog>,
}

#[derive(Serialize, Deserialize)]
struct WindowDto {
    #[serde(rename = "char")]
    characteristic: u32,
    lo: i64,
    hi: i64,
    labels: Vec<Vec<String>>,
    unit: Basis,
    products: Vec<(Basis, Basis, Vec<(usize, u32)>)>,
}

impl AlgebraWindow {
    pub fn new(field: Fp, lo: i64, hi: i64, labels: Vec<Vec<String>>, unit: Basis) -> Result<Self> {
        if hi < lo || labels.len() as i64 != hi - lo + 1 {
            return Err(Error::dims("labels must cover the window"));
        }
        let w = AlgebraWindow {
            field,
            lo,
            hi,
            labels,
            unit,
            products: HashMap::new(),
        };
        if unit.deg != 0 || unit.idx >= w.dim(0)? {
            return Err(Error::invalid("unit must be a degree zero basis element"));
        }
        Ok(w)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn set_product(&mut self, a: Basis, b: Basis, value: Homog) -> Result<()> {
        let d = a.deg + b.deg;
        if value.deg != d || value.dim() != self.dim(d)? {
            return Err(Error::dims("product has the wrong shape"));
        }
        if value.is_zero() {
            self.products.remove(&(a, b));
        } else {
            self.products.insert((a, b), value);
        }
        Ok(())
    }

    /// Materialises any algebra on `[lo, hi]`.
    pub fn from_algebra(alg: &dyn GradedAlgebra, lo: i64, hi: i64) -> Result<Self> {
        let labels = (lo..=hi)
            .map(|d| {
                Ok((0..alg.dim(d)?)
                    .map(|i| alg.label(Basis::new(d, i)))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut w = AlgebraWindow::new(alg.field(), lo, hi, labels, alg.unit())?;
        for da in lo..=hi {
            for db in lo..=hi {
                if da + db < lo || da + db > hi {
                    continue;
                }
                for i in 0..w.dim(da)? {
                    for j in 0..w.dim(db)? {
                        let (a, b) = (Basis::new(da, i), Basis::new(db, j));
                        w.set_product(a, b, alg.mul_basis(a, b)?)?;
                    }
                }
            }
        }
        Ok(w)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut products: Vec<_> = self
            .products
            .iter()
            .map(|(&(a, b), v)| {
                let sparse = v.support().map(|(x, c)| (x.idx, c)).collect();
                (a, b, sparse)
            })
            .collect();
        products.sort_by_key(|x| (x.0, x.1));
        serde_json::to_value(WindowDto {
            characteristic: self.field.p(),
            lo: self.lo,
            hi: self.hi,
            labels: self.labels.clone(),
            unit: self.unit,
            products,
        })
        .expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let dto: WindowDto = serde_json::from_value(v.clone())?;
        let mut w = AlgebraWindow::new(Fp::new(dto.characteristic)?, dto.lo, dto.hi, dto.labels, dto.unit)?;
        for (a, b, sparse) in dto.products {
            let d = a.deg + b.deg;
            let mut h = Homog::zero(d, w.dim(d)?);
            for (i, c) in sparse {
                if i >= h.dim() {
                    return Err(Error::dims("product coordinate out of range"));
                }
                h.coeffs[i] = c % w.field.p();
            }
            w.set_product(a, b, h)?;
        }
        Ok(w)
    }
}

impl GradedAlgebra for AlgebraWindow {
    fn field(&self) -> Fp {
        self.field
    }

    /// Connective windows (`lo >= 0`) are zero below `lo`.
    fn dim(&self, deg: i64) -> Result<usize> {
        if deg < self.lo && self.lo >= 0 {
            return Ok(0);
        }
        if deg < self.lo || deg > self.hi {
            return Err(Error::overflow(deg, self.lo, self.hi));
        }
        Ok(self.labels[(deg - self.lo) as usize].len())
    }

    fn mul_basis(&self, a: Basis, b: Basis) -> Result<Homog> {
        let d = a.deg + b.deg;
        let dim = self.dim(d)?;
        self.dim(a.deg)?;
        self.dim(b.deg)?;
        Ok(self
            .products
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| Homog::zero(d, dim)))
    }

    fn unit(&self) -> Basis {
        self.unit
    }

    fn label(&self, b: Basis) -> String {
        self.labels
            .get((b.deg - self.lo) as usize)
            .and_then(|l| l.get(b.idx))
            .cloned()
            .unwrap_or_else(|| b.to_string())
    }

    fn bounds(&self) -> (Option<i64>, Option<i64>) {
        (Some(self.lo), Some(self.hi))
    }
}
