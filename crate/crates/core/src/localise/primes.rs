use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix};
use crate::graded::{basis_in, check_graded_commutative, mul, GradedAlgebra, GradedAlgebraPresentation, Homog};

/// A homogeneous prime given by generating elements, with the elements
/// whose inversion localises at it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPrime {
    pub generators: Vec<String>,
    #[serde(default)]
    pub maximal: bool,
    /// Complement generators to invert; derived from the ring when empty.
    #[serde(default)]
    pub invert: Vec<String>,
}

impl GradedPrime {
    pub fn label(&self) -> String {
        if self.generators.is_empty() {
            "(0)".into()
        } else {
            format!("({})", self.generators.join(", "))
        }
    }

    /// Generators of the ring outside the prime; odd ones are squared
    /// later by the localisation.
    pub fn complement(&self, r: &GradedAlgebraPresentation) -> Vec<String> {
        if !self.invert.is_empty() {
            return self.invert.clone();
        }
        r.generators()
            .iter()
            .filter(|g| !self.generators.contains(&g.name))
            .map(|g| g.name.clone())
            .collect()
    }
}

fn is_nilpotent(r: &GradedAlgebraPresentation, g: &Homog) -> Result<Option<bool>> {
    if g.is_zero() {
        return Ok(Some(true));
    }
    if g.deg <= 0 {
        return Ok(None);
    }
    let mut p = g.clone();
    while p.deg + g.deg <= r.window() {
        p = mul(r, &p, g)?;
        if p.is_zero() {
            return Ok(Some(true));
        }
    }
    Ok(Some(false))
}

/// Homogeneous primes of `R` when `R` modulo its nilpotent generators is
/// `k` or a polynomial ring on one generator `z`: `n` and `n + (z)`.
pub fn supported_primes(r: &GradedAlgebraPresentation) -> Result<Vec<GradedPrime>> {
    let w = r.window();
    if r.dim(0)? != 1 {
        return Err(Error::UnsupportedRing("degree zero part is not the ground field".into()));
    }
    if !check_graded_commutative(r, 0, w)?.is_empty() {
        return Err(Error::UnsupportedRing("not graded-commutative".into()));
    }
    let mut nil = Vec::new();
    let mut other = Vec::new();
    for (i, g) in r.generators().iter().enumerate() {
        match is_nilpotent(r, &r.generator_element(i)?)? {
            Some(true) => nil.push(g.name.clone()),
            Some(false) => other.push((i, g.clone())),
            None => return Err(Error::UnsupportedRing(format!("generator {} of degree {}", g.name, g.degree))),
        }
    }
    if other.len() > 1 {
        return Err(Error::UnsupportedRing(
            "more than one generator survives modulo nilpotents; supply the primes explicitly".into(),
        ));
    }
    let ideal = IdealWindow::new(r, &nil)?;
    let z = other.first().map(|(_, g)| g.degree);
    for d in 1..=w {
        let q = r.dim(d)? - ideal.rank(d)?;
        let expected = match z {
            Some(e) if d % e == 0 => 1,
            _ => 0,
        };
        if q != expected {
            return Err(Error::UnsupportedRing(format!(
                "quotient by nilpotent generators has dimension {q} in degree {d}"
            )));
        }
    }
    let Some((_, zg)) = other.first() else {
        return Ok(vec![GradedPrime {
            generators: nil,
            maximal: true,
            invert: vec![],
        }]);
    };
    let mut max = nil.clone();
    max.push(zg.name.clone());
    Ok(vec![
        GradedPrime {
            generators: nil,
            maximal: false,
            invert: vec![zg.name.clone()],
        },
        GradedPrime {
            generators: max,
            maximal: true,
            invert: vec![],
        },
    ])
}

/// The homogeneous ideal generated by some elements, degree by degree.
pub(crate) struct IdealWindow<'a> {
    r: &'a GradedAlgebraPresentation,
    gens: Vec<Homog>,
}

impl<'a> IdealWindow<'a> {
    pub(crate) fn new(r: &'a GradedAlgebraPresentation, exprs: &[String]) -> Result<Self> {
        let gens = exprs.iter().map(|e| r.element(e)).collect::<Result<_>>()?;
        Ok(IdealWindow { r, gens })
    }

    fn spanning(&self, d: i64) -> Result<Vec<Vec<u32>>> {
        let mut rows = Vec::new();
        for g in &self.gens {
            if g.deg > d {
                continue;
            }
            for b in basis_in(self.r, d - g.deg)? {
                let bh = Homog::basis(b, self.r.dim(b.deg)?);
                let v = mul(self.r, &bh, g)?;
                if !v.is_zero() {
                    rows.push(v.coeffs);
                }
            }
        }
        Ok(rows)
    }

    pub(crate) fn rank(&self, d: i64) -> Result<usize> {
        let rows = self.spanning(d)?;
        if rows.is_empty() {
            return Ok(0);
        }
        Ok(Matrix::from_rows(self.r.field(), rows)?.rank())
    }

    pub(crate) fn contains(&self, v: &Homog) -> Result<bool> {
        if v.is_zero() {
            return Ok(true);
        }
        let mut rows = self.spanning(v.deg)?;
        let before = if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(self.r.field(), rows.clone())?.rank()
        };
        rows.push(v.coeffs.clone());
        Ok(Matrix::from_rows(self.r.field(), rows)?.rank() == before)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeProbe {
    pub proper: bool,
    pub pairs_checked: usize,
    /// Degree pairs where a product of non-members lies in the ideal.
    pub failures: Vec<(i64, i64)>,
}

impl PrimeProbe {
    pub fn is_prime(&self) -> bool {
        self.proper && self.failures.is_empty()
    }
}

const EXHAUSTIVE_LIMIT: u64 = 729;

/// All nonzero elements of `R_d` up to scalars, or the basis when there
/// are too many.
fn elements(f: Fp, dim: usize) -> Vec<Vec<u32>> {
    let p = f.p() as u64;
    let total = p.checked_pow(dim as u32).unwrap_or(u64::MAX);
    if total > EXHAUSTIVE_LIMIT {
        return (0..dim)
            .map(|i| {
                let mut v = vec![0; dim];
                v[i] = 1;
                v
            })
            .collect();
    }
    let mut out = Vec::new();
    for n in 1..total {
        let mut v = vec![0u32; dim];
        let mut m = n;
        for c in v.iter_mut() {
            *c = (m % p) as u32;
            m /= p;
        }
        // leading coefficient one
        if v.iter().rev().find(|&&c| c != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

/// Checks `ab in p => a in p or b in p` on homogeneous elements with
/// `|a| + |b| <= max_deg`, exhaustively where the degree is small.
pub fn probe_prime(r: &GradedAlgebraPresentation, prime: &GradedPrime, max_deg: i64) -> Result<PrimeProbe> {
    let f = r.field();
    let ideal = IdealWindow::new(r, &prime.generators)?;
    let proper = !ideal.contains(&Homog::basis(r.unit(), 1))?;
    let max_deg = max_deg.min(r.window());
    let mut outside = Vec::new();
    for d in 0..=max_deg {
        let dim = r.dim(d)?;
        let mut keep = Vec::new();
        for v in elements(f, dim) {
            let h = Homog { deg: d, coeffs: v };
            if !ideal.contains(&h)? {
                keep.push(h);
            }
        }
        outside.push(keep);
    }
    let mut pairs = 0;
    let mut failures = Vec::new();
    for da in 0..=max_deg {
        for db in da..=max_deg - da {
            let mut bad = false;
            for a in &outside[da as usize] {
                for b in &outside[db as usize] {
                    pairs += 1;
                    if ideal.contains(&mul(r, a, b)?)? {
                        bad = true;
                    }
                }
            }
            if bad {
                failures.push((da, db));
            }
        }
    }
    Ok(PrimeProbe {
        proper,
        pairs_checked: pairs,
        failures,
    })
}
