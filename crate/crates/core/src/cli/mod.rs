//! Command-line front end: subcommands with JSON output, a content
//! addressed result cache and the acceptance demo.

pub mod cache;
pub mod demo;
pub mod refs;
pub mod render;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graded::{GradedAlgebra, GradedBimodule, ModuleSpec, Regular};
use crate::groupcohom::{cyclic_m3, group_m3, GroupRef};
use crate::hochschild::{
    cocycle_defects, coboundary_decide, compare_with_target, delta, gamma_verdict, realisability, Cochain, Cup,
    DecideOptions, HochschildCochain, OddTripleCochain, TupleWindow, STABILITY_MARGIN,
};
use crate::kadeishvili::{KunnethSigns, Transfer, TransferOptions};
use crate::localise::{local_global_check, GradedPrime, LocalisedAlgebra};
use refs::{load_json, AlgebraRef, CochainSpec, Ring};

pub const DEFAULT_SIZE: i64 = 8;
/// Largest accepted `--window`.
pub const MAX_SIZE: i64 = 128;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_OVERFLOW: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::WindowOverflow { .. } => EXIT_OVERFLOW,
        Error::InvalidInput(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::CharacteristicMismatch(..)
        | Error::NotConfluent(_)
        | Error::NonTerminating(_)
        | Error::NotACocycle(_)
        | Error::UnsupportedLocalisation(_)
        | Error::UnsupportedRing(_) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

#[derive(Parser, Debug)]
#[command(name = "obstruct", version, about = "Secondary multiplications and realisability obstructions over prime fields")]
pub struct Cli {
    /// Degree window for tables and coboundary systems.
    #[arg(long, global = true, env = "OBSTRUCT_WINDOW")]
    pub window: Option<i64>,
    /// Directory for content-addressed results.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Signs {
    Koszul,
    Literal,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Triple product of a group or dg algebra, with its class verdict.
    M3 {
        /// `cyclic:N`, `product:N,M,...` or a dg algebra JSON file.
        algebra: String,
        #[arg(long, value_enum, default_value = "koszul")]
        signs: Signs,
    },
    /// Hochschild coboundary of a cochain.
    HochschildDelta {
        /// Cochain JSON (file or inline).
        cochain: String,
        #[arg(long)]
        algebra: String,
    },
    /// Cup product of two cochains.
    Cup {
        left: String,
        right: String,
        #[arg(long)]
        algebra: String,
    },
    /// Realisability obstruction of a module over a group cohomology ring.
    Realisable {
        /// Module presentation JSON (file or inline).
        module: String,
        /// `cyclic:N`.
        algebra: String,
    },
    /// Ring of fractions.
    Localize {
        algebra: String,
        /// Element to invert; may be repeated.
        #[arg(long)]
        invert: Vec<String>,
        /// Multiplicative set as `{"invert": [...]}` (file or inline).
        #[arg(long)]
        set: Option<String>,
        /// Localise at the prime generated by these comma separated elements.
        #[arg(long, value_delimiter = ',')]
        at_prime: Option<Vec<String>>,
    },
    /// Realisability obstruction globally and at every homogeneous prime.
    LocalGlobal {
        module: String,
        algebra: String,
        /// Prime list JSON `[{"generators": [...]}, ...]` (file or inline).
        #[arg(long)]
        primes: Option<String>,
    },
    /// Image of the triple product class under localisation.
    Gamma {
        /// `cyclic:N` or `tate:cyclic:N`.
        algebra: String,
        #[arg(long)]
        invert: Vec<String>,
        /// Compare with the odd triple product table on the localised ring.
        #[arg(long)]
        compare_odd_triple: bool,
    },
    /// Runs the acceptance suite and prints a pass/fail table.
    Demo {
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Emit JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
}

/// Result of a subcommand: JSON, or plain text for the demo table.
pub enum Output {
    Json(Value),
    Text { text: String, success: bool },
}

impl Cli {
    fn size(&self) -> Result<i64> {
        let w = self.window.unwrap_or(DEFAULT_SIZE);
        if w < 1 {
            return Err(Error::invalid("window must be positive"));
        }
        if w > MAX_SIZE {
            return Err(Error::overflow(w, 1, MAX_SIZE));
        }
        Ok(w)
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Output> {
    let size = cli.size()?;
    if let Command::Demo { jobs, only, json } = &cli.command {
        let outcomes = demo::run_all(only, *jobs);
        let success = outcomes.iter().all(|o| o.passed);
        if *json {
            return Ok(Output::Json(json!({"criteria": outcomes, "all_passed": success})));
        }
        let mut text: Vec<String> = outcomes.iter().map(demo::format_line).collect();
        text.push(format!(
            "{}/{} criteria passed",
            outcomes.iter().filter(|o| o.passed).count(),
            outcomes.len()
        ));
        return Ok(Output::Text {
            text: text.join("\n"),
            success,
        });
    }
    let job = job_description(cli, size)?;
    let store = cli.cache.as_deref().map(cache::Cache::new).transpose()?;
    if let Some(c) = &store {
        if let Some(v) = c.get(&job)? {
            return Ok(Output::Json(v));
        }
    }
    let out = execute(&cli.command, size)?;
    if let Some(c) = &store {
        c.put(&job, &out)?;
    }
    Ok(Output::Json(out))
}

fn arg_json(a: &str) -> Result<Value> {
    load_json(a)
}

fn algebra_json(a: &str) -> Result<Value> {
    Ok(AlgebraRef::parse(a)?.canonical())
}

/// Canonical description of the work, with referenced files inlined.
pub fn job_description(cli: &Cli, size: i64) -> Result<Value> {
    let body = match &cli.command {
        Command::M3 { algebra, signs } => json!({"m3": {"algebra": algebra_json(algebra)?, "signs": format!("{signs:?}")}}),
        Command::HochschildDelta { cochain, algebra } => {
            json!({"hochschild-delta": {"cochain": arg_json(cochain)?, "algebra": algebra_json(algebra)?}})
        }
        Command::Cup { left, right, algebra } => {
            json!({"cup": {"left": arg_json(left)?, "right": arg_json(right)?, "algebra": algebra_json(algebra)?}})
        }
        Command::Realisable { module, algebra } => {
            json!({"realisable": {"module": arg_json(module)?, "algebra": algebra_json(algebra)?}})
        }
        Command::Localize {
            algebra,
            invert,
            set,
            at_prime,
        } => json!({"localize": {
            "algebra": algebra_json(algebra)?,
            "invert": invert,
            "set": set.as_deref().map(arg_json).transpose()?,
            "at_prime": at_prime,
        }}),
        Command::LocalGlobal { module, algebra, primes } => json!({"local-global": {
            "module": arg_json(module)?,
            "algebra": algebra_json(algebra)?,
            "primes": primes.as_deref().map(arg_json).transpose()?,
        }}),
        Command::Gamma {
            algebra,
            invert,
            compare_odd_triple,
        } => json!({"gamma": {"algebra": algebra_json(algebra)?, "invert": invert, "compare": compare_odd_triple}}),
        Command::Demo { .. } => json!("demo"),
    };
    Ok(json!({"job": body, "window": size, "version": env!("CARGO_PKG_VERSION")}))
}

/// Ring window needed for coboundary systems of size `size` and their
/// widening.
fn ring_window(size: i64) -> i64 {
    size + 2 * STABILITY_MARGIN
}

fn cyclic_only(r: &AlgebraRef) -> Result<crate::groupcohom::CyclicGroup> {
    match r {
        AlgebraRef::Group(GroupRef::Cyclic(g)) | AlgebraRef::Tate(g) => Ok(*g),
        _ => Err(Error::invalid("this command needs a cyclic group `cyclic:N`")),
    }
}

/// Ring named by `arg` for cochain commands, with its tuple window.
fn cochain_ring(arg: &str, size: i64) -> Result<(Ring, TupleWindow)> {
    let r = AlgebraRef::parse(arg)?;
    match &r {
        AlgebraRef::Tate(g) => {
            let base = r.presentation(ring_window(2 * size))?;
            let t = Arc::new(LocalisedAlgebra::new(base, &[AlgebraRef::periodicity(*g).to_string()])?);
            Ok((Ring::localised(t, 3 * size), TupleWindow::laurent(size)))
        }
        AlgebraRef::Group(GroupRef::Product(_)) => {
            let m = group_m3(&r.parse_group()?, size + STABILITY_MARGIN, KunnethSigns::Koszul)?;
            let ring = Ring {
                alg: m.ring.clone(),
                presentation: None,
                lo: 0,
                hi: size + STABILITY_MARGIN,
            };
            Ok((ring, TupleWindow::total(size)))
        }
        _ => Ok((Ring::presented(r.presentation(ring_window(size))?), TupleWindow::total(size))),
    }
}

impl AlgebraRef {
    fn parse_group(&self) -> Result<GroupRef> {
        match self {
            AlgebraRef::Group(g) => Ok(g.clone()),
            _ => Err(Error::invalid("not a group")),
        }
    }
}

fn load_cochain(arg: &str, ring: &Ring, window: TupleWindow) -> Result<HochschildCochain> {
    let spec: CochainSpec = serde_json::from_value(load_json(arg)?)?;
    let coeff: Arc<dyn GradedBimodule> = Arc::new(Regular(ring.alg.clone()));
    let mut c = HochschildCochain::new(spec.arity, spec.degree, window, coeff);
    for (k, v) in spec.table(ring)? {
        if !window.contains(&k) {
            return Err(Error::invalid(format!("entry {:?} lies outside the window", ring.labels(&k))));
        }
        c.set(k, v)?;
    }
    Ok(c)
}

fn execute(cmd: &Command, size: i64) -> Result<Value> {
    let opts = DecideOptions::default();
    match cmd {
        Command::M3 { algebra, signs } => {
            let r = AlgebraRef::parse(algebra)?;
            if let Some(a) = r.dga()? {
                return m3_of_dga(&a, size);
            }
            let g = match r {
                AlgebraRef::Group(g) => g,
                _ => return Err(Error::invalid("m3 needs a group (`cyclic:N`, `product:...`) or a dg algebra")),
            };
            let signs = match signs {
                Signs::Koszul => KunnethSigns::Koszul,
                Signs::Literal => KunnethSigns::Literal,
            };
            let m = group_m3(&g, size + STABILITY_MARGIN, signs)?;
            let ring = Ring {
                alg: m.ring.clone(),
                presentation: None,
                lo: 0,
                hi: m.window,
            };
            let w = TupleWindow::total(size);
            let (defects, skipped) = cocycle_defects(m.m3.as_ref(), m.ring.as_ref(), &Regular(m.ring.clone()), &w)?;
            let v = m.verdict(size, opts)?;
            Ok(json!({
                "algebra": g.to_string(),
                "window": size,
                "m3": render::cochain_table(&ring, &ring, m.m3.as_ref(), &w, true)?,
                "cocycle": {"defects": defects.len(), "skipped": skipped},
                "class": render::hochschild_verdict(&v, &ring, &ring),
            }))
        }
        Command::HochschildDelta { cochain, algebra } => {
            let (ring, w) = cochain_ring(algebra, size)?;
            let c = load_cochain(cochain, &ring, w)?;
            let coeff: Arc<dyn GradedBimodule> = Arc::new(Regular(ring.alg.clone()));
            let d = delta(&c, ring.alg.as_ref(), coeff, w, false)?;
            Ok(json!({
                "arity": d.arity,
                "degree": d.degree,
                "window": w,
                "delta": render::cochain_table(&ring, &ring, &d, &w, false)?,
                "is_cocycle": d.is_zero(),
            }))
        }
        Command::Cup { left, right, algebra } => {
            let (ring, w) = cochain_ring(algebra, size)?;
            let a = load_cochain(left, &ring, w)?;
            let b = load_cochain(right, &ring, w)?;
            let cup = Cup {
                left: &a,
                right: &b,
                alg: ring.alg.as_ref(),
            };
            Ok(json!({
                "arity": cup.arity(),
                "degree": cup.degree(),
                "window": w,
                "cup": render::cochain_table(&ring, &ring, &cup, &w, false)?,
            }))
        }
        Command::Realisable { module, algebra } => {
            let g = cyclic_only(&AlgebraRef::parse(algebra)?)?;
            let c = cyclic_m3(g, ring_window(size), None)?;
            let ring = Ring::presented(c.ring.clone());
            let spec: ModuleSpec = serde_json::from_value(load_json(module)?)?;
            let x = ring.module(&spec)?;
            let rep = realisability(c.ring.clone(), &x, Arc::new(c.m3.clone()), size, opts)?;
            let m = crate::graded::ModuleWindow::new(c.ring.clone(), rep.reduced.clone());
            Ok(json!({
                "algebra": algebra,
                "window": size,
                "free_summands": rep.free_summands.iter().map(|g| &g.name).collect::<Vec<_>>(),
                "reduced_generators": rep.reduced.generators.iter().map(|g| &g.name).collect::<Vec<_>>(),
                "kappa": render::module_verdict(&rep.verdict, &ring, &m),
            }))
        }
        Command::Localize {
            algebra,
            invert,
            set,
            at_prime,
        } => localize(algebra, invert, set.as_deref(), at_prime.as_deref(), size),
        Command::LocalGlobal { module, algebra, primes } => {
            let g = cyclic_only(&AlgebraRef::parse(algebra)?)?;
            let c = cyclic_m3(g, ring_window(size), None)?;
            let ring = Ring::presented(c.ring.clone());
            let spec: ModuleSpec = serde_json::from_value(load_json(module)?)?;
            let x = ring.module(&spec)?;
            let primes: Option<Vec<GradedPrime>> = primes
                .as_deref()
                .map(|p| serde_json::from_value(load_json(p)?).map_err(Error::from))
                .transpose()?;
            let rep = local_global_check(c.ring.clone(), &x, Arc::new(c.m3.clone()), primes, size, opts)?;
            let (reduced, _) = x.split_free();
            let m = crate::graded::ModuleWindow::new(c.ring.clone(), reduced);
            let local: Vec<Value> = rep
                .local
                .iter()
                .map(|l| {
                    json!({
                        "prime": l.prime.label(),
                        "generators": l.prime.generators,
                        "maximal": l.prime.maximal,
                        "inverted": l.inverted,
                        "identity": l.identity,
                        "zero_ring": l.zero_ring,
                        "zero_module": l.zero_module,
                        "verdict": l.verdict.verdict.to_string(),
                        "certificates": serde_json::to_value(&l.verdict.certificates).unwrap_or(Value::Null),
                    })
                })
                .collect();
            Ok(json!({
                "algebra": algebra,
                "window": size,
                "global": render::module_verdict(&rep.global, &ring, &m),
                "free_summands": rep.free_summands,
                "local": local,
                "consistent": rep.consistent,
            }))
        }
        Command::Gamma {
            algebra,
            invert,
            compare_odd_triple,
        } => {
            let g = cyclic_only(&AlgebraRef::parse(algebra)?)?;
            let c = cyclic_m3(g, ring_window(size), None)?;
            let inv = if invert.is_empty() {
                vec![AlgebraRef::periodicity(g).to_string()]
            } else {
                invert.clone()
            };
            let t = Arc::new(LocalisedAlgebra::new(c.ring.clone(), &inv)?);
            let ta: Arc<dyn GradedAlgebra> = t.clone();
            let source = Ring::presented(c.ring.clone());
            let target = Ring::localised(t.clone(), 3 * size);
            let w = TupleWindow::total(size);
            let v = gamma_verdict(&c.m3, c.ring.as_ref(), ta.clone(), t.can(), &w, opts)?;
            let mut out = json!({
                "algebra": algebra,
                "window": size,
                "target": serde_json::to_value(t.summary())?,
                "gamma": render::hochschild_verdict(&v, &source, &target),
            });
            if *compare_odd_triple {
                let hat = OddTripleCochain { algebra: ta.clone() };
                let own = coboundary_decide(&hat, ta.as_ref(), &Regular(ta.clone()), &TupleWindow::laurent(size), opts)?;
                let cmp = compare_with_target(&c.m3, &hat, c.ring.as_ref(), ta.clone(), t.can(), &w, opts)?;
                out["odd_triple"] = render::hochschild_verdict(&own, &target, &target);
                out["difference"] = render::hochschild_verdict(&cmp, &source, &target);
            }
            Ok(out)
        }
        Command::Demo { .. } => Err(Error::invalid("demo is handled separately")),
    }
}

fn m3_of_dga(a: &crate::dgcore::DgAlgebra, size: i64) -> Result<Value> {
    let top = a.complex().trusted().1.min(a.hi() - 1);
    let window = size.min(top);
    if window < 1 {
        return Err(Error::overflow(size, 0, top));
    }
    let t = Transfer::compute(a, window, &TransferOptions::default())?;
    let h = t.algebra();
    let ring = Ring {
        alg: h.clone(),
        presentation: None,
        lo: 0,
        hi: window,
    };
    let coeff = Regular(h.clone());
    let w = TupleWindow::total(window);
    let (defects, skipped) = cocycle_defects(t.m3(), h.as_ref(), &coeff, &w)?;
    let stable = window - STABILITY_MARGIN >= 1;
    let decide = if stable { window - STABILITY_MARGIN } else { window };
    let v = coboundary_decide(
        t.m3(),
        h.as_ref(),
        &coeff,
        &TupleWindow::total(decide),
        DecideOptions {
            check_cocycle: true,
            stability: stable,
        },
    )?;
    Ok(json!({
        "algebra": "dga",
        "window": window,
        "cohomology_dims": (0..=window).map(|n| h.dim(n)).collect::<Result<Vec<_>>>()?,
        "m3": render::cochain_table(&ring, &ring, t.m3(), &w, true)?,
        "cocycle": {"defects": defects.len(), "skipped": skipped},
        "class": render::hochschild_verdict(&v, &ring, &ring),
        "class_window": decide,
        "stability_checked": stable,
    }))
}

#[derive(serde::Deserialize)]
struct SetSpec {
    invert: Vec<String>,
}

fn localize(algebra: &str, invert: &[String], set: Option<&str>, at_prime: Option<&[String]>, size: i64) -> Result<Value> {
    let r = AlgebraRef::parse(algebra)?;
    let base = r.presentation(ring_window(2 * size))?;
    let mut inv: Vec<String> = invert.to_vec();
    if let Some(s) = set {
        let s: SetSpec = serde_json::from_value(load_json(s)?)?;
        inv.extend(s.invert);
    }
    let mut prime = None;
    if let Some(gens) = at_prime {
        let p = GradedPrime {
            generators: gens.to_vec(),
            maximal: false,
            invert: vec![],
        };
        inv.extend(p.complement(&base));
        prime = Some(p.label());
    }
    if let AlgebraRef::Tate(g) = &r {
        if inv.is_empty() {
            inv.push(AlgebraRef::periodicity(*g).to_string());
        }
    }
    let t = Arc::new(LocalisedAlgebra::new(base.clone(), &inv)?);
    let ring = Ring::localised(t.clone(), size);
    let mut degrees = Vec::new();
    for d in -size..=size {
        let n = t.dim(d)?;
        let labels: Vec<String> = (0..n).map(|i| t.label(crate::graded::Basis::new(d, i))).collect();
        degrees.push(json!({"degree": d, "basis": labels}));
    }
    // presentation: the generators of R, an inverse for each inverted
    // element, and the relations of R with `s * s^-1 = 1`
    let mut generators: Vec<Value> = base
        .generators()
        .iter()
        .map(|g| json!({"name": g.name, "degree": g.degree}))
        .collect();
    let mut relations: Vec<Value> = base.spec().relations.iter().map(|(l, r)| json!([l, r])).collect();
    if !t.is_identity() && !t.is_zero() {
        for e in &inv {
            let h = base.element(e)?;
            let name = if base.generator_index(e).is_some() {
                format!("{e}^-1")
            } else {
                format!("({e})^-1")
            };
            generators.push(json!({"name": name, "degree": -h.deg}));
            relations.push(json!([format!("{e}*{name}"), "1"]));
        }
    }
    let mut injective = true;
    for d in 0..=size.min(t.can_limit()) {
        for i in 0..base.dim(d)? {
            let b = crate::graded::Basis::new(d, i);
            let img = crate::graded::AlgebraMap::apply_basis(t.can().as_ref(), b)?;
            if img.is_zero() {
                injective = false;
            }
        }
        let cols: Vec<Vec<u32>> = (0..base.dim(d)?)
            .map(|i| Ok(t.image(&crate::graded::Homog::basis(crate::graded::Basis::new(d, i), base.dim(d)?))?.coeffs))
            .collect::<Result<_>>()?;
        if !cols.is_empty() && t.dim(d)? > 0 {
            injective &= crate::exactla::Matrix::from_columns(base.field(), t.dim(d)?, &cols)?.rank() == cols.len();
        } else if !cols.is_empty() {
            injective = false;
        }
    }
    let _ = ring;
    Ok(json!({
        "algebra": algebra,
        "window": size,
        "prime": prime,
        "summary": serde_json::to_value(t.summary())?,
        "presentation": {"generators": generators, "relations": relations},
        "degrees": degrees,
        "can_injective": injective,
    }))
}
