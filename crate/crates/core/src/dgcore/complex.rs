use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix, Solver};
use crate::graded::Homog;

/// Cochain complex on degrees `[lo, hi]`; `d(n)` maps degree `n` to
/// `n + 1` for `n < hi`. `trusted` bounds the degrees whose cohomology
/// agrees with the untruncated complex.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainComplex {
    field: Fp,
    lo: i64,
    dims: Vec<usize>,
    d: Vec<Matrix<Fp>>,
    trusted: (i64, i64),
}

impl CochainComplex {
    pub fn new(field: Fp, lo: i64, dims: Vec<usize>, d: Vec<Matrix<Fp>>, trusted: (i64, i64)) -> Result<Self> {
        if dims.is_empty() || d.len() + 1 != dims.len() {
            return Err(Error::dims("need one differential between consecutive degrees"));
        }
        for (k, m) in d.iter().enumerate() {
            if m.rows() != dims[k + 1] || m.cols() != dims[k] {
                return Err(Error::dims(format!("differential out of degree {}", lo + k as i64)));
            }
        }
        for k in 1..d.len() {
            if !d[k].mul(&d[k - 1])?.is_zero() {
                return Err(Error::invalid(format!(
                    "d o d is nonzero out of degree {}",
                    lo + k as i64 - 1
                )));
            }
        }
        let hi = lo + dims.len() as i64 - 1;
        if trusted.0 < lo || trusted.1 > hi {
            return Err(Error::invalid("trusted range exceeds the window"));
        }
        Ok(CochainComplex {
            field,
            lo,
            dims,
            d,
            trusted,
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }
    pub fn trusted(&self) -> (i64, i64) {
        self.trusted
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn check_degree(&self, n: i64) -> Result<()> {
        if n < self.lo || n > self.hi() {
            Err(Error::overflow(n, self.lo, self.hi()))
        } else {
            Ok(())
        }
    }

    /// The differential out of degree `n`, if materialised.
    pub fn differential(&self, n: i64) -> Option<&Matrix<Fp>> {
        if n < self.lo || n >= self.hi() {
            None
        } else {
            Some(&self.d[(n - self.lo) as usize])
        }
    }

    pub fn apply_d(&self, x: &Homog) -> Result<Homog> {
        let m = self
            .differential(x.deg)
            .ok_or_else(|| Error::overflow(x.deg + 1, self.lo, self.hi()))?;
        Ok(Homog {
            deg: x.deg + 1,
            coeffs: m.mul_vec(&x.coeffs)?,
        })
    }

    pub fn cohomology(&self) -> Result<Cohomology> {
        self.cohomology_with(&BTreeMap::new())
    }

    /// Cohomology with a canonical splitting. In each degree the chosen
    /// representatives are the `preferred` cycles first, then kernel
    /// basis vectors, each kept when independent modulo boundaries and
    /// the earlier choices.
    pub fn cohomology_with(&self, preferred: &BTreeMap<i64, Vec<Vec<u32>>>) -> Result<Cohomology> {
        let f = self.field;
        let mut degrees = BTreeMap::new();
        for n in self.lo..=self.hi() {
            let dim = self.dim(n);
            let cycles = match self.differential(n) {
                Some(m) => m.kernel(),
                None => (0..dim)
                    .map(|i| {
                        let mut v = vec![0; dim];
                        v[i] = 1;
                        v
                    })
                    .collect(),
            };
            let boundaries = match self.differential(n - 1) {
                Some(m) if m.cols() > 0 => m.column_space(),
                _ => Vec::new(),
            };
            let mut ech = Echelon::new(f);
            for b in &boundaries {
                ech.insert(b.clone());
            }
            let mut reps = Vec::new();
            let pref = preferred.get(&n).cloned().unwrap_or_default();
            for v in &pref {
                if v.len() != dim {
                    return Err(Error::dims("preferred cycle length"));
                }
                if let Some(m) = self.differential(n) {
                    if !crate::exactla::is_zero_vec(&m.mul_vec(v)?) {
                        return Err(Error::NotACocycle(format!("preferred representative in degree {n}")));
                    }
                }
            }
            for v in pref.iter().chain(cycles.iter()) {
                if ech.insert(v.clone()) {
                    reps.push(v.clone());
                }
            }
            let cols: Vec<Vec<u32>> = reps.iter().chain(boundaries.iter()).cloned().collect();
            let solver = Solver::new(&Matrix::from_columns(f, dim, &cols)?);
            degrees.insert(
                n,
                CohomologyDegree {
                    reps,
                    boundaries,
                    solver,
                },
            );
        }
        Ok(Cohomology {
            field: f,
            trusted: self.trusted,
            degrees,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut d = Vec::new();
        for (k, m) in self.d.iter().enumerate() {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let c = *m.get(i, j);
                    if c != 0 {
                        d.push((self.lo + k as i64, j, i, c));
                    }
                }
            }
        }
        serde_json::to_value(ComplexDto {
            characteristic: self.field.p(),
            lo: self.lo,
            dims: self.dims.clone(),
            differential: d,
            trusted: self.trusted,
        })
        .expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let dto: ComplexDto = serde_json::from_value(v.clone())?;
        let f = Fp::new(dto.characteristic)?;
        let mut d: Vec<Matrix<Fp>> = (0..dto.dims.len().saturating_sub(1))
            .map(|k| Matrix::zeros(f, dto.dims[k + 1], dto.dims[k]))
            .collect();
        for (n, src, tgt, c) in dto.differential {
            let k = n - dto.lo;
            if k < 0 || k as usize >= d.len() {
                return Err(Error::invalid(format!("differential entry in degree {n}")));
            }
            let m = &mut d[k as usize];
            if src >= m.cols() || tgt >= m.rows() {
                return Err(Error::dims("differential entry out of range"));
            }
            m.set(tgt, src, c % f.p());
        }
        CochainComplex::new(f, dto.lo, dto.dims, d, dto.trusted)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexDto {
    #[serde(rename = "char")]
    characteristic: u32,
    lo: i64,
    dims: Vec<usize>,
    /// `(degree, source index, target index, coefficient)`.
    differential: Vec<(i64, usize, usize, u32)>,
    trusted: (i64, i64),
}

/// Incremental semi-echelon basis for membership tests.
pub(crate) struct Echelon {
    f: Fp,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub(crate) fn new(f: Fp) -> Self {
        Echelon { f, rows: Vec::new() }
    }

    pub(crate) fn reduce(&self, mut v: Vec<u32>) -> Vec<u32> {
        for (p, r) in &self.rows {
            let c = v[*p];
            if c != 0 {
                crate::exactla::axpy(self.f, &mut v, self.f.negm(c), r);
            }
        }
        v
    }

    /// Returns whether `v` was independent of the rows so far.
    pub(crate) fn insert(&mut self, v: Vec<u32>) -> bool {
        let v = self.reduce(v);
        match v.iter().position(|&c| c != 0) {
            None => false,
            Some(p) => {
                let inv = self.f.invm(v[p]).expect("nonzero");
                let v = v.iter().map(|&c| self.f.mulm(c, inv)).collect();
                self.rows.push((p, v));
                true
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyDegree {
    /// Chosen cycle representatives, one per cohomology basis class.
    pub reps: Vec<Vec<u32>>,
    pub boundaries: Vec<Vec<u32>>,
    solver: Solver<Fp>,
}

/// Cohomology with chosen representatives and the projection from cycles.
#[derive(Clone, Debug)]
pub struct Cohomology {
    field: Fp,
    trusted: (i64, i64),
    degrees: BTreeMap<i64, CohomologyDegree>,
}

impl Cohomology {
    pub fn trusted(&self) -> (i64, i64) {
        self.trusted
    }

    pub fn dim(&self, n: i64) -> usize {
        self.degrees.get(&n).map_or(0, |d| d.reps.len())
    }

    pub fn degree(&self, n: i64) -> Option<&CohomologyDegree> {
        self.degrees.get(&n)
    }

    pub fn rep(&self, n: i64, i: usize) -> Result<Homog> {
        let d = self.degrees.get(&n).ok_or_else(|| Error::overflow(n, self.trusted.0, self.trusted.1))?;
        Ok(Homog {
            deg: n,
            coeffs: d.reps.get(i).ok_or_else(|| Error::dims("class index"))?.clone(),
        })
    }

    /// Class of a cycle in the chosen basis.
    pub fn project(&self, z: &Homog) -> Result<Homog> {
        let d = self
            .degrees
            .get(&z.deg)
            .ok_or_else(|| Error::overflow(z.deg, self.trusted.0, self.trusted.1))?;
        let x = d
            .solver
            .solve(&z.coeffs)?
            .ok_or_else(|| Error::NotACocycle(format!("element of degree {} is not a cycle", z.deg)))?;
        Ok(Homog {
            deg: z.deg,
            coeffs: x[..d.reps.len()].to_vec(),
        })
    }

    /// Writes a cycle as `sum c_i rep_i + boundary`; returns the boundary part.
    pub fn boundary_part(&self, z: &Homog) -> Result<Vec<u32>> {
        let class = self.project(z)?;
        let d = &self.degrees[&z.deg];
        let mut v = z.coeffs.clone();
        for (r, &c) in d.reps.iter().zip(&class.coeffs) {
            crate::exactla::axpy(self.field, &mut v, self.field.negm(c), r);
        }
        Ok(v)
    }

    pub fn is_boundary(&self, z: &Homog) -> Result<bool> {
        Ok(self.project(z)?.is_zero())
    }
}

/// Degree zero map of complexes, one block per source degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub blocks: BTreeMap<i64, Matrix<Fp>>,
}

impl ChainMap {
    pub fn apply(&self, x: &Homog) -> Result<Homog> {
        let m = self
            .blocks
            .get(&x.deg)
            .ok_or_else(|| Error::invalid(format!("chain map undefined in degree {}", x.deg)))?;
        Ok(Homog {
            deg: x.deg,
            coeffs: m.mul_vec(&x.coeffs)?,
        })
    }

    /// Verifies `d f = f d` wherever both sides are materialised.
    pub fn check(&self, source: &CochainComplex, target: &CochainComplex) -> Result<()> {
        for (&n, m) in &self.blocks {
            if m.cols() != source.dim(n) || m.rows() != target.dim(n) {
                return Err(Error::dims(format!("chain map block in degree {n}")));
            }
            let (Some(ds), Some(dt), Some(next)) =
                (source.differential(n), target.differential(n), self.blocks.get(&(n + 1)))
            else {
                continue;
            };
            if dt.mul(m)? != next.mul(ds)? {
                return Err(Error::NotAChainMap(format!("fails in degree {n}")));
            }
        }
        Ok(())
    }
}

/// Per-degree outcome of a quasi-isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    pub degrees: Vec<(i64, usize, usize, usize)>,
    pub is_quasi_iso: bool,
}

/// Checks that `f` induces isomorphisms on cohomology in `[lo, hi]`.
pub fn quasi_iso_check(
    f: &ChainMap,
    source: &CochainComplex,
    target: &CochainComplex,
    lo: i64,
    hi: i64,
) -> Result<QuasiIsoReport> {
    f.check(source, target)?;
    let hs = source.cohomology()?;
    let ht = target.cohomology()?;
    let field = source.field();
    let mut degrees = Vec::new();
    let mut ok = true;
    for n in lo..=hi {
        let (a, b) = (hs.dim(n), ht.dim(n));
        let cols = (0..a)
            .map(|i| Ok(ht.project(&f.apply(&hs.rep(n, i)?)?)?.coeffs))
            .collect::<Result<Vec<_>>>()?;
        let rank = if a == 0 || b == 0 {
            0
        } else {
            Matrix::from_columns(field, b, &cols)?.rank()
        };
        ok &= a == b && rank == a;
        degrees.push((n, a, b, rank));
    }
    Ok(QuasiIsoReport {
        degrees,
        is_quasi_iso: ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn cohomology_of_small_complex() {
        // k --(1)--> k --(0)--> k^2
        let d0 = Matrix::from_rows(f3(), vec![vec![1]]).unwrap();
        let d1 = Matrix::zeros(f3(), 2, 1);
        let c = CochainComplex::new(f3(), 0, vec![1, 1, 2], vec![d0, d1], (0, 2)).unwrap();
        let h = c.cohomology().unwrap();
        assert_eq!((h.dim(0), h.dim(1), h.dim(2)), (0, 0, 2));
        let z = Homog { deg: 2, coeffs: vec![1, 2] };
        assert_eq!(h.project(&z).unwrap().coeffs, vec![1, 2]);
        assert!(h.is_boundary(&Homog { deg: 1, coeffs: vec![2] }).unwrap());
    }

    #[test]
    fn rejects_non_complex() {
        let d0 = Matrix::from_rows(f3(), vec![vec![1]]).unwrap();
        let d1 = Matrix::from_rows(f3(), vec![vec![1]]).unwrap();
        assert!(CochainComplex::new(f3(), 0, vec![1, 1, 1], vec![d0, d1], (0, 2)).is_err());
    }

    #[test]
    fn preferred_representatives_come_first() {
        let c = CochainComplex::new(f3(), 0, vec![2], vec![], (0, 0)).unwrap();
        let pref = BTreeMap::from([(0, vec![vec![1, 1]])]);
        let h = c.cohomology_with(&pref).unwrap();
        assert_eq!(h.rep(0, 0).unwrap().coeffs, vec![1, 1]);
        assert_eq!(h.dim(0), 2);
    }

    #[test]
    fn json_round_trip() {
        let d0 = Matrix::from_rows(f3(), vec![vec![1, 2]]).unwrap();
        let c = CochainComplex::new(f3(), -1, vec![2, 1], vec![d0], (-1, 0)).unwrap();
        assert_eq!(CochainComplex::from_json(&c.to_json()).unwrap(), c);
    }
}
