use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::Value;

use crate::dgcore::DgAlgebra;
use crate::error::{Error, Result};
use crate::graded::{
    format_element, GradedAlgebra, GradedAlgebraPresentation, Homog, ModulePresentation, ModuleSpec, PresentationSpec,
    DEFAULT_WINDOW,
};
use crate::graded::Basis;
use crate::groupcohom::{cohomology_ring, CyclicGroup, GroupRef};
use crate::localise::LocalisedAlgebra;

/// What an algebra argument on the command line names.
#[derive(Clone, Debug)]
pub enum AlgebraRef {
    Group(GroupRef),
    Tate(CyclicGroup),
    Presentation(PresentationSpec),
    Dga(Value),
}

/// Inline JSON (starting with `{`) or a path to a JSON file.
pub fn load_json(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(serde_json::from_str(t)?);
    }
    let path = PathBuf::from(arg);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

impl AlgebraRef {
    pub fn parse(arg: &str) -> Result<Self> {
        if let Some(rest) = arg.strip_prefix("tate:") {
            return match rest.parse::<GroupRef>()? {
                GroupRef::Cyclic(g) => Ok(AlgebraRef::Tate(g)),
                GroupRef::Product(_) => Err(Error::invalid("Tate rings are available for cyclic groups")),
            };
        }
        if arg.starts_with("cyclic:") || arg.starts_with("product:") {
            return Ok(AlgebraRef::Group(arg.parse()?));
        }
        if !arg.trim_start().starts_with('{') && !Path::new(arg).exists() {
            return Err(Error::invalid(format!("`{arg}` is neither a known factory nor a file")));
        }
        let v = load_json(arg)?;
        if v.get("complex").is_some() {
            return Ok(AlgebraRef::Dga(v));
        }
        if v.get("generators").is_some() {
            return Ok(AlgebraRef::Presentation(serde_json::from_value(v)?));
        }
        Err(Error::invalid("JSON is neither an algebra presentation nor a dg algebra"))
    }

    /// Canonical form for cache keys.
    pub fn canonical(&self) -> Value {
        match self {
            AlgebraRef::Group(g) => Value::String(g.to_string()),
            AlgebraRef::Tate(g) => Value::String(format!("tate:cyclic:{}", g.order)),
            AlgebraRef::Presentation(p) => serde_json::to_value(p).unwrap_or(Value::Null),
            AlgebraRef::Dga(v) => v.clone(),
        }
    }

    pub fn dga(&self) -> Result<Option<DgAlgebra>> {
        match self {
            AlgebraRef::Dga(v) => Ok(Some(DgAlgebra::from_json(v)?)),
            _ => Ok(None),
        }
    }

    /// The presented ring named here, materialised up to `window`.
    pub fn presentation(&self, window: i64) -> Result<Arc<GradedAlgebraPresentation>> {
        match self {
            AlgebraRef::Group(GroupRef::Cyclic(g)) | AlgebraRef::Tate(g) => Ok(Arc::new(cohomology_ring(*g, window)?)),
            AlgebraRef::Presentation(spec) => {
                let mut spec = spec.clone();
                spec.window = Some(spec.window.unwrap_or(DEFAULT_WINDOW).max(window));
                Ok(Arc::new(GradedAlgebraPresentation::from_spec(&spec)?))
            }
            AlgebraRef::Group(GroupRef::Product(_)) => {
                Err(Error::invalid("products of groups have no presentation here; use cyclic factors"))
            }
            AlgebraRef::Dga(_) => Err(Error::invalid("a dg algebra is not a graded algebra presentation")),
        }
    }

    /// Default elements to invert for `tate:` references.
    pub fn periodicity(g: CyclicGroup) -> &'static str {
        if g.order == 2 {
            "X"
        } else {
            "Y"
        }
    }
}

/// A graded algebra with label-based parsing of basis elements and
/// element expressions.
#[derive(Clone)]
pub struct Ring {
    pub alg: Arc<dyn GradedAlgebra>,
    pub presentation: Option<Arc<GradedAlgebraPresentation>>,
    /// Degrees searched for labels.
    pub lo: i64,
    pub hi: i64,
}

impl Ring {
    pub fn presented(p: Arc<GradedAlgebraPresentation>) -> Self {
        let hi = p.window();
        Ring {
            alg: p.clone(),
            presentation: Some(p),
            lo: 0,
            hi,
        }
    }

    pub fn localised(t: Arc<LocalisedAlgebra>, size: i64) -> Self {
        Ring {
            alg: t,
            presentation: None,
            lo: -size,
            hi: size,
        }
    }

    pub fn label(&self, b: Basis) -> String {
        self.alg.label(b)
    }

    pub fn labels(&self, t: &[Basis]) -> Vec<String> {
        t.iter().map(|&b| self.alg.label(b)).collect()
    }

    pub fn element_string(&self, h: &Homog) -> String {
        format_element(self.alg.field(), |b| self.alg.label(b), h)
    }

    pub fn basis(&self, label: &str) -> Result<Basis> {
        let label = label.trim();
        for d in self.lo..=self.hi {
            for i in 0..self.alg.dim(d)? {
                let b = Basis::new(d, i);
                if self.alg.label(b) == label {
                    return Ok(b);
                }
            }
        }
        Err(Error::invalid(format!("`{label}` is not a basis label in degrees [{}, {}]", self.lo, self.hi)))
    }

    /// Parses an element; `deg` resolves the degree of `0`.
    pub fn element(&self, expr: &str, deg: Option<i64>) -> Result<Homog> {
        if let Some(p) = &self.presentation {
            return p.element_in_degree(expr, deg);
        }
        let f = self.alg.field();
        let expr = expr.trim();
        if expr == "0" {
            let d = deg.ok_or_else(|| Error::invalid("the degree of 0 is ambiguous here"))?;
            return Ok(Homog::zero(d, self.alg.dim(d)?));
        }
        // terms joined by " + " / " - ", each `[c*]label`
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut rest = expr;
        let mut neg = false;
        if let Some(r) = rest.strip_prefix('-') {
            neg = true;
            rest = r.trim_start();
        }
        loop {
            let plus = rest.find(" + ");
            let minus = rest.find(" - ");
            let next = match (plus, minus) {
                (Some(a), Some(b)) => Some(if a < b { (a, false) } else { (b, true) }),
                (Some(a), None) => Some((a, false)),
                (None, Some(b)) => Some((b, true)),
                (None, None) => None,
            };
            match next {
                Some((i, n)) => {
                    terms.push((neg, &rest[..i]));
                    neg = n;
                    rest = &rest[i + 3..];
                }
                None => {
                    terms.push((neg, rest));
                    break;
                }
            }
        }
        let mut out: Option<Homog> = None;
        for (neg, t) in terms {
            let (c, label) = match t.split_once('*') {
                Some((c, l)) if c.trim().parse::<i64>().is_ok() => (c.trim().parse::<i64>().expect("integer"), l),
                _ => (1, t),
            };
            let b = self.basis(label)?;
            let c = f.reduce_i64(if neg { -c } else { c });
            let o = out.get_or_insert_with(|| Homog::zero(b.deg, self.alg.dim(b.deg).unwrap_or(0)));
            if o.deg != b.deg {
                return Err(Error::invalid(format!("`{expr}` is not homogeneous")));
            }
            o.coeffs[b.idx] = f.addm(o.coeffs[b.idx], c);
        }
        let out = out.ok_or_else(|| Error::invalid("empty expression"))?;
        if let Some(d) = deg {
            if d != out.deg {
                return Err(Error::invalid(format!("`{expr}` has degree {}, expected {d}", out.deg)));
            }
        }
        Ok(out)
    }

    /// Module presentation from its JSON form, relations parsed here.
    pub fn module(&self, spec: &ModuleSpec) -> Result<ModulePresentation> {
        if let Some(p) = &self.presentation {
            return ModulePresentation::from_spec(spec, p);
        }
        let mut relations = Vec::new();
        for rel in &spec.relations {
            let mut parts = Vec::new();
            for (name, expr) in rel {
                let g = spec
                    .generators
                    .iter()
                    .position(|x| &x.name == name)
                    .ok_or_else(|| Error::invalid(format!("unknown module generator {name}")))?;
                parts.push((g, self.element(expr, None)?));
            }
            relations.push(parts);
        }
        Ok(ModulePresentation {
            generators: spec.generators.clone(),
            relations,
        })
    }
}

/// A cochain given in JSON as `{"arity", "degree", "values": [{"args", "value"}]}`.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct CochainSpec {
    pub arity: usize,
    pub degree: i64,
    #[serde(default)]
    pub values: Vec<CochainEntry>,
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct CochainEntry {
    pub args: Vec<String>,
    pub value: String,
}

impl CochainSpec {
    pub fn table(&self, ring: &Ring) -> Result<BTreeMap<Vec<Basis>, Homog>> {
        let mut out = BTreeMap::new();
        for e in &self.values {
            if e.args.len() != self.arity {
                return Err(Error::invalid(format!("entry with {} arguments for arity {}", e.args.len(), self.arity)));
            }
            let args: Vec<Basis> = e.args.iter().map(|l| ring.basis(l)).collect::<Result<_>>()?;
            let deg = args.iter().map(|b| b.deg).sum::<i64>() + self.degree;
            let v = ring.element(&e.value, Some(deg))?;
            if !v.is_zero() {
                out.insert(args, v);
            }
        }
        Ok(out)
    }
}
