use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix, Solver};
use crate::graded::{mul, unit_element, AlgebraMap, Basis, GradedAlgebra, GradedAlgebraPresentation, Homog};

/// `R_sigma / tors_sigma` where `tors` is killed by a power of `s`.
struct Torsion {
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Torsion {
    fn reduce(&self, f: Fp, mut v: Vec<u32>) -> Vec<u32> {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                crate::exactla::axpy(f, &mut v, f.negm(c), r);
            }
        }
        v
    }
}

struct Fractions {
    s: Homog,
    s_label: String,
    period: i64,
    stable: i64,
    /// Basis lifts of `T_d` in `R_rho`, for `rho` in `[stable, stable + period)`.
    lifts: HashMap<i64, Vec<Homog>>,
    torsion: Mutex<HashMap<i64, Arc<Torsion>>>,
    solvers: Mutex<HashMap<i64, Arc<Solver<Fp>>>>,
}

enum Kind {
    Identity,
    Zero,
    Fractions(Box<Fractions>),
}

/// `S^{-1} R` for a finitely presented graded-commutative `R` and a set
/// `S` of homogeneous elements, reduced to a single even element `s`.
/// For `d` of any sign, `T_d` is identified with `R_rho / tors` for the
/// representative `rho = c + ((d - c) mod e)`, `e = |s|`, `c` the degree
/// from which multiplication by `s` is bijective modulo torsion.
pub struct LocalisedAlgebra {
    base: Arc<GradedAlgebraPresentation>,
    kind: Kind,
    inverted: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalisationSummary {
    pub inverted: Vec<String>,
    pub zero_ring: bool,
    pub identity: bool,
    pub period: i64,
    pub stable_degree: i64,
    pub element: Option<String>,
}

impl LocalisedAlgebra {
    /// Inverts the given elements (expressions in the generators).
    pub fn new(base: Arc<GradedAlgebraPresentation>, invert: &[String]) -> Result<Self> {
        let f = base.field();
        let mut s = unit_element(base.as_ref())?;
        let mut labels = Vec::new();
        for e in invert {
            let h = base.element(e)?;
            labels.push(e.clone());
            let h = if h.deg % 2 != 0 {
                if h.deg * 2 > base.window() {
                    return Err(Error::overflow(h.deg * 2, 0, base.window()));
                }
                mul(base.as_ref(), &h, &h)?
            } else {
                h
            };
            if h.deg < 0 {
                return Err(Error::UnsupportedLocalisation("negative degree elements".into()));
            }
            if h.deg + s.deg > base.window() {
                return Err(Error::overflow(h.deg + s.deg, 0, base.window()));
            }
            s = mul(base.as_ref(), &s, &h)?;
        }
        if s.is_zero() {
            return Ok(LocalisedAlgebra {
                base,
                kind: Kind::Zero,
                inverted: labels,
            });
        }
        if s.deg == 0 {
            if base.dim(0)? != 1 {
                return Err(Error::UnsupportedLocalisation(
                    "inverting degree zero elements needs R_0 = k".into(),
                ));
            }
            return Ok(LocalisedAlgebra {
                base,
                kind: Kind::Identity,
                inverted: labels,
            });
        }
        let e = s.deg;
        let w = base.window();
        // nilpotent s: the ring of fractions is zero
        let mut p = s.clone();
        while p.deg + e <= w {
            p = mul(base.as_ref(), &p, &s)?;
            if p.is_zero() {
                return Ok(LocalisedAlgebra {
                    base,
                    kind: Kind::Zero,
                    inverted: labels,
                });
            }
        }
        let s_label = s_power_label(&base, &s);
        let mut fr = Fractions {
            s,
            s_label,
            period: e,
            stable: 0,
            lifts: HashMap::new(),
            torsion: Mutex::new(HashMap::new()),
            solvers: Mutex::new(HashMap::new()),
        };
        // smallest c with s: Q_rho -> Q_{rho+e} bijective for rho in [c, w - 2e]
        let top = w - 2 * e;
        if top < e - 1 {
            return Err(Error::overflow(3 * e, 0, w));
        }
        let mut c = top + 1;
        for rho in (0..=top).rev() {
            if fr.bijective(&base, rho)? {
                c = rho;
            } else {
                break;
            }
        }
        if c + e - 1 > top || 2 * (c + e - 1) > w - e {
            return Err(Error::UnsupportedLocalisation(format!(
                "multiplication by the inverted element is not yet stable within the window {w}"
            )));
        }
        fr.stable = c;
        let r0 = c + (-c).rem_euclid(e);
        for rho in c..c + e {
            let tors = fr.torsion(&base, rho)?;
            let dim = base.dim(rho)?;
            let mut lifts: Vec<Homog> = Vec::new();
            let mut ech = Span::new(f);
            for r in &tors.rows {
                ech.insert(r.clone());
            }
            if rho == r0 {
                let mut u = unit_element(base.as_ref())?;
                for _ in 0..rho / e {
                    u = mul(base.as_ref(), &u, &fr.s)?;
                }
                if ech.insert(u.coeffs.clone()) {
                    lifts.push(u);
                }
            }
            for k in 0..dim {
                let b = Homog::basis(Basis::new(rho, k), dim);
                if ech.insert(b.coeffs.clone()) {
                    lifts.push(b);
                }
            }
            fr.lifts.insert(rho, lifts);
        }
        if fr.lifts.values().all(|l| l.is_empty()) {
            return Ok(LocalisedAlgebra {
                base,
                kind: Kind::Zero,
                inverted: labels,
            });
        }
        Ok(LocalisedAlgebra {
            base,
            kind: Kind::Fractions(Box::new(fr)),
            inverted: labels,
        })
    }

    pub fn base(&self) -> &Arc<GradedAlgebraPresentation> {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero)
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, Kind::Identity)
    }

    pub fn summary(&self) -> LocalisationSummary {
        let (period, stable, element) = match &self.kind {
            Kind::Fractions(fr) => (
                fr.period,
                fr.stable,
                Some(fr.s_label.strip_suffix("^1").unwrap_or(&fr.s_label).to_string()),
            ),
            _ => (0, 0, None),
        };
        LocalisationSummary {
            inverted: self.inverted.clone(),
            zero_ring: self.is_zero(),
            identity: self.is_identity(),
            period,
            stable_degree: stable,
            element,
        }
    }

    /// The map `R -> S^{-1} R`.
    pub fn can(self: &Arc<Self>) -> Arc<dyn AlgebraMap> {
        Arc::new(Can(self.clone()))
    }

    /// Largest degree of `R` on which `can` is defined.
    pub fn can_limit(&self) -> i64 {
        match &self.kind {
            Kind::Fractions(fr) => self.base.window() - fr.period,
            _ => self.base.window(),
        }
    }

    fn fractions(&self) -> Option<&Fractions> {
        match &self.kind {
            Kind::Fractions(fr) => Some(fr),
            _ => None,
        }
    }

    /// `r / 1` for `r` in `R`.
    pub fn image(&self, r: &Homog) -> Result<Homog> {
        match &self.kind {
            Kind::Identity => Ok(r.clone()),
            Kind::Zero => Ok(Homog::zero(r.deg, 0)),
            Kind::Fractions(fr) => {
                let rho = fr.rep(r.deg);
                let mut v = r.clone();
                let mut sigma = r.deg;
                while sigma < rho {
                    v = mul(self.base.as_ref(), &v, &fr.s)?;
                    sigma += fr.period;
                }
                fr.coords(&self.base, &v)
            }
        }
    }
}

fn s_power_label(base: &GradedAlgebraPresentation, s: &Homog) -> String {
    let mut sup = s.support();
    if let (Some((b, 1)), None) = (sup.next(), sup.next()) {
        if let Some(w) = base.word(b) {
            if !w.is_empty() && w.iter().all(|&g| g == w[0]) {
                return format!("{}^{}", base.generators()[w[0]].name, w.len());
            }
        }
    }
    format!("({})", crate::graded::format_element(base.field(), |b| base.label(b), s))
}

/// Incrementally reduced row space.
struct Span {
    f: Fp,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Span {
    fn new(f: Fp) -> Self {
        Span { f, rows: Vec::new() }
    }

    /// Adds `v`; false when it already lies in the span.
    fn insert(&mut self, mut v: Vec<u32>) -> bool {
        let f = self.f;
        for (p, r) in &self.rows {
            let c = v[*p];
            if c != 0 {
                crate::exactla::axpy(f, &mut v, f.negm(c), r);
            }
        }
        let Some(p) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.invm(v[p]).expect("nonzero");
        for c in v.iter_mut() {
            *c = f.mulm(*c, inv);
        }
        for (_, r) in self.rows.iter_mut() {
            let c = r[p];
            if c != 0 {
                crate::exactla::axpy(f, r, f.negm(c), &v);
            }
        }
        self.rows.push((p, v));
        true
    }
}

impl Fractions {
    fn rep(&self, d: i64) -> i64 {
        self.stable + (d - self.stable).rem_euclid(self.period)
    }

    fn torsion(&self, base: &GradedAlgebraPresentation, sigma: i64) -> Result<Arc<Torsion>> {
        if let Some(t) = self.torsion.lock().expect("lock").get(&sigma) {
            return Ok(t.clone());
        }
        let f = base.field();
        let w = base.window();
        let e = self.period;
        if sigma + e > w {
            return Err(Error::overflow(sigma + e, 0, w));
        }
        let j = (w - sigma) / e;
        let mut sj = unit_element(base)?;
        for _ in 0..j {
            sj = mul(base, &sj, &self.s)?;
        }
        let dim = base.dim(sigma)?;
        let cols: Vec<Vec<u32>> = (0..dim)
            .map(|k| Ok(mul(base, &Homog::basis(Basis::new(sigma, k), dim), &sj)?.coeffs))
            .collect::<Result<_>>()?;
        let tdim = base.dim(sigma + j * e)?;
        let m = Matrix::from_columns(f, tdim, &cols)?;
        let ker = m.kernel();
        let (rows, pivots) = if ker.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let r = Matrix::from_rows(f, ker)?.rref();
            ((0..r.pivots.len()).map(|i| r.reduced.row(i).to_vec()).collect(), r.pivots)
        };
        let t = Arc::new(Torsion { rows, pivots });
        self.torsion.lock().expect("lock").insert(sigma, t.clone());
        Ok(t)
    }

    fn bijective(&self, base: &GradedAlgebraPresentation, rho: i64) -> Result<bool> {
        let f = base.field();
        let e = self.period;
        let t0 = self.torsion(base, rho)?;
        let t1 = self.torsion(base, rho + e)?;
        let d0 = base.dim(rho)? - t0.rows.len();
        let d1 = base.dim(rho + e)? - t1.rows.len();
        if d0 != d1 {
            return Ok(false);
        }
        let mut img = Vec::new();
        let dim = base.dim(rho)?;
        for k in 0..dim {
            let v = mul(base, &Homog::basis(Basis::new(rho, k), dim), &self.s)?;
            img.push(t1.reduce(f, v.coeffs));
        }
        let rank = if img.is_empty() {
            0
        } else {
            Matrix::from_rows(f, img)?.rank()
        };
        Ok(rank == d1)
    }

    /// Coordinates in `T_{sigma}` of `v` in `R_sigma`, `sigma >= rep(sigma)`.
    fn coords(&self, base: &GradedAlgebraPresentation, v: &Homog) -> Result<Homog> {
        let f = base.field();
        let sigma = v.deg;
        let rho = self.rep(sigma);
        let lifts = &self.lifts[&rho];
        let solver = {
            let cached = self.solvers.lock().expect("lock").get(&sigma).cloned();
            match cached {
                Some(s) => s,
                None => {
                    let tors = self.torsion(base, sigma)?;
                    let k = (sigma - rho) / self.period;
                    let mut cols = Vec::new();
                    for l in lifts {
                        let mut u = l.clone();
                        for _ in 0..k {
                            u = mul(base, &u, &self.s)?;
                        }
                        cols.push(tors.reduce(f, u.coeffs));
                    }
                    let mut m = Matrix::from_columns(f, base.dim(sigma)?, &cols)?;
                    for r in &tors.rows {
                        let extra = Matrix::from_columns(f, r.len(), std::slice::from_ref(r))?;
                        m = m.hstack(&extra)?;
                    }
                    let s = Arc::new(Solver::new(&m));
                    self.solvers.lock().expect("lock").insert(sigma, s.clone());
                    s
                }
            }
        };
        let x = solver
            .solve(&v.coeffs)?
            .ok_or_else(|| Error::UnsupportedLocalisation(format!("degree {sigma} is outside the stable range")))?;
        Ok(Homog {
            deg: sigma,
            coeffs: x[..lifts.len()].to_vec(),
        })
    }
}

impl GradedAlgebra for LocalisedAlgebra {
    fn field(&self) -> Fp {
        self.base.field()
    }

    fn dim(&self, deg: i64) -> Result<usize> {
        match &self.kind {
            Kind::Identity => {
                if deg < 0 {
                    Ok(0)
                } else {
                    self.base.dim(deg)
                }
            }
            Kind::Zero => Ok(0),
            Kind::Fractions(fr) => Ok(fr.lifts[&fr.rep(deg)].len()),
        }
    }

    fn mul_basis(&self, a: Basis, b: Basis) -> Result<Homog> {
        match &self.kind {
            Kind::Identity => self.base.mul_basis(a, b),
            Kind::Zero => Ok(Homog::zero(a.deg + b.deg, 0)),
            Kind::Fractions(fr) => {
                let la = &fr.lifts[&fr.rep(a.deg)][a.idx];
                let lb = &fr.lifts[&fr.rep(b.deg)][b.idx];
                let p = mul(self.base.as_ref(), la, lb)?;
                let mut c = fr.coords(&self.base, &p)?;
                c.deg = a.deg + b.deg;
                Ok(c)
            }
        }
    }

    fn unit(&self) -> Basis {
        Basis::new(0, 0)
    }

    fn label(&self, b: Basis) -> String {
        let Some(fr) = self.fractions() else {
            return self.base.label(b);
        };
        let rho = fr.rep(b.deg);
        let lift = &fr.lifts[&rho][b.idx];
        let lift_label = crate::graded::format_element(self.base.field(), |x| self.base.label(x), lift);
        let level = (b.deg - rho) / fr.period;
        if level == 0 {
            return lift_label;
        }
        // s^level with s a generator power g^k reads g^{k level}
        if let Some((g, k)) = fr.s_label.split_once('^') {
            if let Ok(k) = k.parse::<i64>() {
                let power = k * level;
                let mut parts: Vec<String> = Vec::new();
                let mut own = 0;
                for part in lift_label.split('*') {
                    if part == g {
                        own += 1;
                    } else if let Some(x) = part.strip_prefix(&format!("{g}^")) {
                        own += x.parse::<i64>().unwrap_or(0);
                    } else if part != "1" {
                        parts.push(part.to_string());
                    }
                }
                let total = own + power;
                if total == 1 {
                    parts.push(g.to_string());
                } else if total != 0 {
                    parts.push(format!("{g}^{total}"));
                }
                if parts.is_empty() {
                    return "1".into();
                }
                return parts.join("*");
            }
        }
        format!("{lift_label}*{}^{level}", fr.s_label)
    }

    fn bounds(&self) -> (Option<i64>, Option<i64>) {
        match &self.kind {
            Kind::Identity => (Some(0), Some(self.base.window())),
            Kind::Zero => (None, None),
            Kind::Fractions(_) => (None, None),
        }
    }
}

struct Can(Arc<LocalisedAlgebra>);

impl AlgebraMap for Can {
    fn apply_basis(&self, b: Basis) -> Result<Homog> {
        let dim = self.0.base.dim(b.deg)?;
        if b.deg > self.0.can_limit() {
            return Err(Error::overflow(b.deg, 0, self.0.can_limit()));
        }
        self.0.image(&Homog::basis(b, dim))
    }
}
