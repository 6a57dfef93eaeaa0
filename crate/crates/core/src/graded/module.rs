use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{mul, Basis, GradedAlgebra, GradedAlgebraPresentation, Homog};
use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix};

/// Graded right module with a homogeneous basis.
pub trait GradedRightModule: Send + Sync {
    fn field(&self) -> Fp;
    fn dim(&self, deg: i64) -> Result<usize>;
    /// `x . r` for basis elements.
    fn act_right(&self, x: Basis, r: Basis) -> Result<Homog>;
    fn label(&self, x: Basis) -> String;
}

/// Graded bimodule: both actions, commuting.
pub trait GradedBimodule: GradedRightModule {
    fn act_left(&self, r: Basis, x: Basis) -> Result<Homog>;
}

/// Degree preserving algebra map given on basis elements.
pub trait AlgebraMap: Send + Sync {
    fn apply_basis(&self, b: Basis) -> Result<Homog>;
}

pub fn apply_map(map: &dyn AlgebraMap, h: &Homog, target_dim: usize, f: Fp) -> Result<Homog> {
    let mut out = Homog::zero(h.deg, target_dim);
    for (b, c) in h.support() {
        out.add_scaled(f, c, &map.apply_basis(b)?)?;
    }
    Ok(out)
}

pub fn act_right_elem(m: &dyn GradedRightModule, x: &Homog, r: &Homog) -> Result<Homog> {
    let f = m.field();
    let d = x.deg + r.deg;
    let mut out = Homog::zero(d, m.dim(d)?);
    for (a, ca) in x.support() {
        for (b, cb) in r.support() {
            out.add_scaled(f, f.mulm(ca, cb), &m.act_right(a, b)?)?;
        }
    }
    Ok(out)
}

pub fn act_left_elem(m: &dyn GradedBimodule, r: &Homog, x: &Homog) -> Result<Homog> {
    let f = m.field();
    let d = x.deg + r.deg;
    let mut out = Homog::zero(d, m.dim(d)?);
    for (b, cb) in r.support() {
        for (a, ca) in x.support() {
            out.add_scaled(f, f.mulm(ca, cb), &m.act_left(b, a)?)?;
        }
    }
    Ok(out)
}

/// An algebra as a bimodule over itself.
#[derive(Clone)]
pub struct Regular(pub Arc<dyn GradedAlgebra>);

impl GradedRightModule for Regular {
    fn field(&self) -> Fp {
        self.0.field()
    }
    fn dim(&self, deg: i64) -> Result<usize> {
        self.0.dim(deg)
    }
    fn act_right(&self, x: Basis, r: Basis) -> Result<Homog> {
        self.0.mul_basis(x, r)
    }
    fn label(&self, x: Basis) -> String {
        self.0.label(x)
    }
}

impl GradedBimodule for Regular {
    fn act_left(&self, r: Basis, x: Basis) -> Result<Homog> {
        self.0.mul_basis(r, x)
    }
}

/// `M[t]` with `(M[t])_d = M_{d+t}` and `r . Σm . s = (-1)^{t|r|} Σ(rms)`.
#[derive(Clone)]
pub struct ShiftedBimodule {
    pub inner: Arc<dyn GradedBimodule>,
    pub shift: i64,
}

impl ShiftedBimodule {
    fn down(&self, x: Basis) -> Basis {
        Basis::new(x.deg + self.shift, x.idx)
    }
    fn up(&self, h: Homog) -> Homog {
        Homog {
            deg: h.deg - self.shift,
            coeffs: h.coeffs,
        }
    }
}

impl GradedRightModule for ShiftedBimodule {
    fn field(&self) -> Fp {
        self.inner.field()
    }
    fn dim(&self, deg: i64) -> Result<usize> {
        self.inner.dim(deg + self.shift)
    }
    fn act_right(&self, x: Basis, r: Basis) -> Result<Homog> {
        Ok(self.up(self.inner.act_right(self.down(x), r)?))
    }
    fn label(&self, x: Basis) -> String {
        format!("Σ{}", self.inner.label(self.down(x)))
    }
}

impl GradedBimodule for ShiftedBimodule {
    fn act_left(&self, r: Basis, x: Basis) -> Result<Homog> {
        let f = self.field();
        let v = self.up(self.inner.act_left(r, self.down(x))?);
        Ok(v.scaled(f, f.sign(self.shift * r.deg)))
    }
}

/// A target algebra viewed as a bimodule over a source through a map.
#[derive(Clone)]
pub struct RestrictedBimodule {
    pub target: Arc<dyn GradedAlgebra>,
    pub map: Arc<dyn AlgebraMap>,
}

impl GradedRightModule for RestrictedBimodule {
    fn field(&self) -> Fp {
        self.target.field()
    }
    fn dim(&self, deg: i64) -> Result<usize> {
        self.target.dim(deg)
    }
    fn act_right(&self, x: Basis, r: Basis) -> Result<Homog> {
        let xr = Homog::basis(x, self.target.dim(x.deg)?);
        mul(self.target.as_ref(), &xr, &self.map.apply_basis(r)?)
    }
    fn label(&self, x: Basis) -> String {
        self.target.label(x)
    }
}

impl GradedBimodule for RestrictedBimodule {
    fn act_left(&self, r: Basis, x: Basis) -> Result<Homog> {
        let xr = Homog::basis(x, self.target.dim(x.deg)?);
        mul(self.target.as_ref(), &self.map.apply_basis(r)?, &xr)
    }
}

/// A right module over a target restricted along a map.
#[derive(Clone)]
pub struct RestrictedModule {
    pub module: Arc<dyn GradedRightModule>,
    pub map: Arc<dyn AlgebraMap>,
}

impl GradedRightModule for RestrictedModule {
    fn field(&self) -> Fp {
        self.module.field()
    }
    fn dim(&self, deg: i64) -> Result<usize> {
        self.module.dim(deg)
    }
    fn act_right(&self, x: Basis, r: Basis) -> Result<Homog> {
        let xh = Homog::basis(x, self.module.dim(x.deg)?);
        act_right_elem(self.module.as_ref(), &xh, &self.map.apply_basis(r)?)
    }
    fn label(&self, x: Basis) -> String {
        self.module.label(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleGenerator {
    pub name: String,
    pub degree: i64,
}

/// JSON form: each relation maps generator names to algebra expressions
/// and stands for `sum_g g * expr_g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub generators: Vec<ModuleGenerator>,
    #[serde(default)]
    pub relations: Vec<BTreeMap<String, String>>,
}

/// Finitely presented graded right module: free on generators modulo the
/// submodule generated by homogeneous relations.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulePresentation {
    pub generators: Vec<ModuleGenerator>,
    /// Each relation lists `(generator, coefficient)` pairs.
    pub relations: Vec<Vec<(usize, Homog)>>,
}

impl ModulePresentation {
    pub fn from_spec(spec: &ModuleSpec, alg: &GradedAlgebraPresentation) -> Result<Self> {
        let mut relations = Vec::new();
        for rel in &spec.relations {
            let mut parts = Vec::new();
            let mut total: Option<i64> = None;
            for (name, expr) in rel {
                let g = spec
                    .generators
                    .iter()
                    .position(|x| &x.name == name)
                    .ok_or_else(|| Error::invalid(format!("unknown module generator {name}")))?;
                let h = alg.element(expr)?;
                let d = spec.generators[g].degree + h.deg;
                if total.is_some_and(|t| t != d) {
                    return Err(Error::invalid("module relation is not homogeneous"));
                }
                total = Some(d);
                parts.push((g, h));
            }
            relations.push(parts);
        }
        Ok(ModulePresentation {
            generators: spec.generators.clone(),
            relations,
        })
    }

    pub fn free(generators: Vec<ModuleGenerator>) -> Self {
        ModulePresentation {
            generators,
            relations: Vec::new(),
        }
    }

    /// Transports the relations along an algebra map.
    pub fn map_relations(&self, map: &dyn AlgebraMap, target: &dyn GradedAlgebra) -> Result<Self> {
        let f = target.field();
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|(g, h)| Ok((*g, super::module::apply_map(map, h, target.dim(h.deg)?, f)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModulePresentation {
            generators: self.generators.clone(),
            relations,
        })
    }

    /// Splits off generators that occur in no relation; these span a free
    /// direct summand.
    pub fn split_free(&self) -> (ModulePresentation, Vec<ModuleGenerator>) {
        let used: Vec<bool> = (0..self.generators.len())
            .map(|g| {
                self.relations
                    .iter()
                    .any(|r| r.iter().any(|(x, h)| *x == g && !h.is_zero()))
            })
            .collect();
        let mut renum = HashMap::new();
        let mut kept = Vec::new();
        let mut free = Vec::new();
        for (g, gen) in self.generators.iter().enumerate() {
            if used[g] {
                renum.insert(g, kept.len());
                kept.push(gen.clone());
            } else {
                free.push(gen.clone());
            }
        }
        let relations = self
            .relations
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(_, h)| !h.is_zero())
                    .map(|(g, h)| (renum[g], h.clone()))
                    .collect()
            })
            .collect();
        (
            ModulePresentation {
                generators: kept,
                relations,
            },
            free,
        )
    }
}

#[derive(Debug)]
struct DegreeData {
    free: Vec<(usize, Basis)>,
    free_index: HashMap<(usize, Basis), usize>,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    quotient: Vec<usize>,
}

/// Degreewise materialisation of a presented module over an algebra.
pub struct ModuleWindow {
    field: Fp,
    algebra: Arc<dyn GradedAlgebra>,
    presentation: ModulePresentation,
    cache: Mutex<HashMap<i64, Arc<DegreeData>>>,
}

fn dim_or_zero(alg: &dyn GradedAlgebra, d: i64) -> Result<usize> {
    match alg.bounds() {
        (Some(lo), _) if d < lo => Ok(0),
        _ => alg.dim(d),
    }
}

impl ModuleWindow {
    pub fn new(algebra: Arc<dyn GradedAlgebra>, presentation: ModulePresentation) -> Self {
        ModuleWindow {
            field: algebra.field(),
            algebra,
            presentation,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &ModulePresentation {
        &self.presentation
    }

    pub fn algebra(&self) -> &Arc<dyn GradedAlgebra> {
        &self.algebra
    }

    fn data(&self, d: i64) -> Result<Arc<DegreeData>> {
        if let Some(x) = self.cache.lock().expect("cache lock").get(&d) {
            return Ok(x.clone());
        }
        let f = self.field;
        let alg = self.algebra.as_ref();
        let mut free = Vec::new();
        for (g, gen) in self.presentation.generators.iter().enumerate() {
            for i in 0..dim_or_zero(alg, d - gen.degree)? {
                free.push((g, Basis::new(d - gen.degree, i)));
            }
        }
        let free_index: HashMap<_, _> = free.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut span = Vec::new();
        for rel in &self.presentation.relations {
            let Some((g0, h0)) = rel.first() else { continue };
            let e = self.presentation.generators[*g0].degree + h0.deg;
            for t in 0..dim_or_zero(alg, d - e)? {
                let tb = Homog::basis(Basis::new(d - e, t), alg.dim(d - e)?);
                let mut v = vec![0u32; free.len()];
                for (g, h) in rel {
                    let prod = mul(alg, h, &tb)?;
                    for (b, c) in prod.support() {
                        let k = free_index[&(*g, b)];
                        v[k] = f.addm(v[k], c);
                    }
                }
                span.push(v);
            }
        }
        let (rows, pivots) = if span.is_empty() || free.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let r = Matrix::from_rows(f, span)?.rref();
            let rows = (0..r.pivots.len()).map(|i| r.reduced.row(i).to_vec()).collect();
            (rows, r.pivots)
        };
        let quotient = (0..free.len()).filter(|c| !pivots.contains(c)).collect();
        let data = Arc::new(DegreeData {
            free,
            free_index,
            rows,
            pivots,
            quotient,
        });
        self.cache.lock().expect("cache lock").insert(d, data.clone());
        Ok(data)
    }

    fn reduce(&self, data: &DegreeData, mut v: Vec<u32>, d: i64) -> Homog {
        let f = self.field;
        for (row, &p) in data.rows.iter().zip(&data.pivots) {
            let c = v[p];
            if c != 0 {
                crate::exactla::axpy(f, &mut v, f.negm(c), row);
            }
        }
        Homog {
            deg: d,
            coeffs: data.quotient.iter().map(|&c| v[c]).collect(),
        }
    }

    /// The class of generator `g`.
    pub fn generator_class(&self, g: usize) -> Result<Homog> {
        let d = self.presentation.generators[g].degree;
        let data = self.data(d)?;
        let mut v = vec![0; data.free.len()];
        v[data.free_index[&(g, self.algebra.unit())]] = 1;
        Ok(self.reduce(&data, v, d))
    }

    /// The class of `g * a` for an algebra element `a`.
    pub fn class_of(&self, g: usize, a: &Homog) -> Result<Homog> {
        let d = self.presentation.generators[g].degree + a.deg;
        let data = self.data(d)?;
        let mut v = vec![0; data.free.len()];
        for (b, c) in a.support() {
            v[data.free_index[&(g, b)]] = c;
        }
        Ok(self.reduce(&data, v, d))
    }
}

impl GradedRightModule for ModuleWindow {
    fn field(&self) -> Fp {
        self.field
    }

    fn dim(&self, deg: i64) -> Result<usize> {
        Ok(self.data(deg)?.quotient.len())
    }

    fn act_right(&self, x: Basis, r: Basis) -> Result<Homog> {
        let data = self.data(x.deg)?;
        let col = *data
            .quotient
            .get(x.idx)
            .ok_or_else(|| Error::dims("module basis index"))?;
        let (g, a) = data.free[col];
        let ar = self.algebra.mul_basis(a, r)?;
        self.class_of(g, &ar)
    }

    fn label(&self, x: Basis) -> String {
        match self.data(x.deg) {
            Ok(data) => match data.quotient.get(x.idx) {
                Some(&col) => {
                    let (g, a) = data.free[col];
                    let name = &self.presentation.generators[g].name;
                    if a == self.algebra.unit() {
                        name.clone()
                    } else {
                        format!("{name}·{}", self.algebra.label(a))
                    }
                }
                None => x.to_string(),
            },
            Err(_) => x.to_string(),
        }
    }
}

/// Degree zero module map given by images of generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    pub images: Vec<Homog>,
}

impl ModuleMap {
    pub fn identity(m: &ModuleWindow) -> Result<Self> {
        Ok(ModuleMap {
            images: (0..m.presentation.generators.len())
                .map(|g| m.generator_class(g))
                .collect::<Result<_>>()?,
        })
    }

    /// Image of a basis element of the source window.
    pub fn apply_basis(&self, source: &ModuleWindow, target: &dyn GradedRightModule, x: Basis) -> Result<Homog> {
        let data = source.data(x.deg)?;
        let (g, a) = data.free[data.quotient[x.idx]];
        let ah = Homog::basis(a, source.algebra.dim(a.deg)?);
        act_right_elem(target, &self.images[g], &ah)
    }
}
