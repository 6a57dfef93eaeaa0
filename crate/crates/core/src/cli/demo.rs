//! The acceptance suite: twelve checks, each with a time budget.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dgcore::{check_dg_map, end_dga, post_compose, pre_compose, pullback, quasi_iso_check, HomComplex, ModuleChainMap};
use crate::error::Result;
use crate::exactla::{Fp, Matrix};
use crate::graded::{
    basis_in, mul, GradedAlgebra, GradedAlgebraPresentation, GradedBimodule, Homog, ModuleGenerator,
    ModulePresentation, Regular,
};
use crate::groupcohom::{cohomology_ring, coresolution, cyclic_m3, cyclic_m3_from, group_m3, CyclicEnd, CyclicGroup, GroupRef};
use crate::hochschild::{
    check_witness, cocycle_defects, coboundary_decide, coboundary_on_window, compare_with_target, delta, gamma_verdict,
    graded_centre, realisability, kappa_verdict, Cochain, Cup, DecideOptions, Difference, HochschildCochain, Lifting,
    OddTripleCochain, TupleWindow, Verdict, Yoneda,
};
use crate::kadeishvili::{perturbed_selection, KunnethSigns, TransferOptions};
use crate::localise::{local_global_check, LocalisedAlgebra};

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub budget: Duration,
}

type Check = fn() -> Result<(bool, String)>;

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub budget: Duration,
    pub check: Check,
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, check| Criterion {
        id,
        name,
        budget: Duration::from_secs(secs),
        check,
    };
    vec![
        c(1, "delta squared vanishes on random cochains", 5, delta_squared as Check),
        c(2, "Leibniz rule and associativity of End algebras", 10, end_algebras),
        c(3, "cohomology ring of Z/3", 30, cohomology_z3),
        c(4, "m3 of Z/3 is a cocycle matching the odd triple table", 30, m3_table_z3),
        c(5, "class verdicts for cyclic groups", 60, cyclic_verdicts),
        c(6, "product formula for elementary abelian 2-groups", 60, kunneth_two_groups),
        c(7, "Tate cohomology via the localisation map", 60, tate_gamma),
        c(8, "realisability of modules over H*(Z/3)", 30, realisability_z3),
        c(9, "local-global comparison", 60, local_global),
        c(10, "cup and Yoneda products agree", 30, cup_yoneda),
        c(11, "m3 is independent of the cycle selection", 60, choice_robustness),
        c(12, "pullback of dg algebras", 5, pullback_check),
    ]
}

pub fn run(c: &Criterion) -> Outcome {
    let t = Instant::now();
    let (ok, detail) = match (c.check)() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = t.elapsed();
    let within = elapsed <= c.budget;
    let detail = if within {
        detail
    } else {
        format!("{detail}; over budget: {:.1}s > {}s", elapsed.as_secs_f64(), c.budget.as_secs())
    };
    Outcome {
        id: c.id,
        name: c.name,
        passed: ok && within,
        detail,
        elapsed,
        budget: c.budget,
    }
}

/// Runs the selected criteria (all when `only` is empty) on up to `jobs`
/// threads, in id order.
pub fn run_all(only: &[usize], jobs: usize) -> Vec<Outcome> {
    let selected: Vec<Criterion> = criteria()
        .into_iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .collect();
    let jobs = jobs.max(1);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..jobs.min(selected.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                let Some(c) = selected.get(i) else { break };
                let o = run(c);
                results.lock().expect("lock").push(o);
            });
        }
    });
    let mut out = results.into_inner().expect("lock");
    out.sort_by_key(|o| o.id);
    out
}

pub fn format_line(o: &Outcome) -> String {
    format!(
        "[{}] {:>2}. {} ({:.2}s): {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.id,
        o.name,
        o.elapsed.as_secs_f64(),
        o.detail
    )
}

fn lambda(window: i64) -> Result<Arc<GradedAlgebraPresentation>> {
    Ok(Arc::new(cohomology_ring(CyclicGroup::new(3)?, window)?))
}

fn random_vec(rng: &mut ChaCha8Rng, f: Fp, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..f.p())).collect()
}

/// A cochain with uniformly random values on every tuple of the window.
pub fn random_cochain(
    rng: &mut ChaCha8Rng,
    alg: &Arc<dyn GradedAlgebra>,
    arity: usize,
    degree: i64,
    window: TupleWindow,
    normalized: bool,
) -> Result<HochschildCochain> {
    let f = alg.field();
    let coeff: Arc<dyn GradedBimodule> = Arc::new(Regular(alg.clone()));
    let mut c = HochschildCochain::new(arity, degree, window, coeff);
    for t in window.tuples(alg.as_ref(), arity, normalized)? {
        let d = t.iter().map(|b| b.deg).sum::<i64>() + degree;
        let n = if d < 0 { 0 } else { alg.dim(d)? };
        let v = Homog {
            deg: d,
            coeffs: random_vec(rng, f, n),
        };
        c.set(t, v)?;
    }
    Ok(c)
}

fn delta_squared() -> Result<(bool, String)> {
    let ring = lambda(12)?;
    let alg: Arc<dyn GradedAlgebra> = ring;
    let coeff: Arc<dyn GradedBimodule> = Arc::new(Regular(alg.clone()));
    let w = TupleWindow::total(8);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut bad = 0;
    let mut nonzero_first = 0;
    for _ in 0..500 {
        let n = rng.gen_range(0..=3);
        let t = rng.gen_range(-3..=3);
        let phi = random_cochain(&mut rng, &alg, n, t, w, false)?;
        let d1 = delta(&phi, alg.as_ref(), coeff.clone(), w, false)?;
        if !d1.is_zero() {
            nonzero_first += 1;
        }
        let d2 = delta(&d1, alg.as_ref(), coeff.clone(), w, false)?;
        if !d2.is_zero() {
            bad += 1;
        }
    }
    Ok((
        bad == 0,
        format!("500 cochains, {nonzero_first} with nonzero coboundary, {bad} with nonzero second coboundary"),
    ))
}

fn end_algebras() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for r in [2, 4, 3, 9, 5] {
        let end = CyclicEnd::new(CyclicGroup::new(r)?, 8)?;
        let l = end.dga.check_leibniz().len();
        let a = end.dga.check_associativity().len();
        ok &= l == 0 && a == 0 && end.dga.check_unit()?;
        parts.push(format!("Z/{r}: {l} Leibniz, {a} associativity failures"));
    }
    Ok((ok, parts.join("; ")))
}

fn cohomology_z3() -> Result<(bool, String)> {
    let g = CyclicGroup::new(3)?;
    let c = cyclic_m3(g, 8, None)?;
    let h = c.transfer.algebra();
    let mut ok = true;
    let dims: Vec<usize> = (0..=8).map(|n| h.dim(n)).collect::<Result<_>>()?;
    ok &= dims.iter().all(|&d| d == 1);
    // every product of basis classes agrees with the presentation
    let mut products = 0;
    for da in 0..=8 {
        for db in 0..=8 - da {
            for a in basis_in(h.as_ref(), da)? {
                for b in basis_in(h.as_ref(), db)? {
                    let lhs = c.change.to_target(&h.mul_basis(a, b)?)?;
                    let ia = c.change.to_target(&Homog::basis(a, h.dim(da)?))?;
                    let ib = c.change.to_target(&Homog::basis(b, h.dim(db)?))?;
                    ok &= lhs == mul(c.ring.as_ref(), &ia, &ib)?;
                    products += 1;
                }
            }
        }
    }
    let x = c.transfer.cohomology().project(&c.end.x()?)?;
    let y = c.transfer.cohomology().project(&c.end.y()?)?;
    let xx = mul(h.as_ref(), &x, &x)?;
    let xy = mul(h.as_ref(), &x, &y)?;
    let yx = mul(h.as_ref(), &y, &x)?;
    ok &= xx.is_zero() && xy == yx && !x.is_zero() && !y.is_zero();
    Ok((
        ok,
        format!("dims {dims:?}, {products} products match, x^2 = 0: {}, xy = yx: {}", xx.is_zero(), xy == yx),
    ))
}

fn m3_table_z3() -> Result<(bool, String)> {
    let c = cyclic_m3(CyclicGroup::new(3)?, 16, None)?;
    let ring: Arc<dyn GradedAlgebra> = c.ring.clone();
    let coeff: Arc<dyn GradedBimodule> = Arc::new(Regular(ring.clone()));
    let (defects, _) = cocycle_defects(&c.m3, ring.as_ref(), coeff.as_ref(), &TupleWindow::total(12))?;
    let table = OddTripleCochain { algebra: ring.clone() };
    let diff = Difference {
        a: &c.m3,
        b: &table,
        field: ring.field(),
    };
    let mut ok = defects.is_empty();
    let mut parts = vec![format!("{} cocycle defects", defects.len())];
    for d in [8, 12] {
        let w = TupleWindow::total(d);
        let (cert, wit) = coboundary_on_window(&diff, ring.as_ref(), coeff.as_ref(), &w, true)?;
        match wit {
            Some(wit) => {
                let checked = check_witness(&diff, &wit, ring.as_ref(), coeff.clone(), &w)?;
                ok &= checked;
                parts.push(format!(
                    "window {d}: witness with {} nonzero values, {} unknowns, verified {checked}",
                    wit.values.len(),
                    cert.unknowns
                ));
            }
            None => {
                ok = false;
                parts.push(format!("window {d}: no witness (rank {} < {})", cert.rank, cert.augmented_rank));
            }
        }
    }
    Ok((ok, parts.join("; ")))
}

fn cyclic_verdicts() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [3, 2, 4, 9, 5, 7] {
        let c = cyclic_m3(CyclicGroup::new(r)?, 16, None)?;
        let coeff = Regular(c.ring.clone());
        let expected = if r == 3 { Verdict::Nontrivial } else { Verdict::TrivialUpToWindow };
        let mut got = Vec::new();
        for d in [8, 12] {
            let v = coboundary_decide(&c.m3, c.ring.as_ref(), &coeff, &TupleWindow::total(d), DecideOptions::default())?;
            ok &= v.verdict == expected;
            got.push(v.verdict.to_string());
        }
        parts.push(format!("Z/{r}: {}", got.join("/")));
    }
    Ok((ok, parts.join("; ")))
}

fn kunneth_two_groups() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, d) in [("product:2,2", 8), ("product:2,2,2", 6)] {
        let g: GroupRef = g.parse()?;
        let m = group_m3(&g, d + 4, KunnethSigns::Koszul)?;
        let v = m.verdict(d, DecideOptions::default())?;
        ok &= v.verdict == Verdict::TrivialUpToWindow;
        parts.push(format!("{g} window {d}: {}", v.verdict));
    }
    Ok((ok, parts.join("; ")))
}

fn tate_gamma() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [3, 9] {
        let c = cyclic_m3(CyclicGroup::new(r)?, 16, None)?;
        let t = Arc::new(LocalisedAlgebra::new(c.ring.clone(), &["Y".to_string()])?);
        let ta: Arc<dyn GradedAlgebra> = t.clone();
        let v = gamma_verdict(&c.m3, c.ring.as_ref(), ta.clone(), t.can(), &TupleWindow::total(8), DecideOptions::default())?;
        let expected = if r == 3 { Verdict::Nontrivial } else { Verdict::TrivialUpToWindow };
        ok &= v.verdict == expected;
        parts.push(format!("Gamma(mu) for Z/{r}: {}", v.verdict));
        if r == 3 {
            let hat = OddTripleCochain { algebra: ta.clone() };
            let lv = coboundary_decide(&hat, ta.as_ref(), &Regular(ta.clone()), &TupleWindow::laurent(8), DecideOptions::default())?;
            ok &= lv.verdict == Verdict::Nontrivial;
            parts.push(format!("Tate m3 on [-8, 8]: {}", lv.verdict));
            let cmp = compare_with_target(&c.m3, &hat, c.ring.as_ref(), ta.clone(), t.can(), &TupleWindow::total(8), DecideOptions::default())?;
            ok &= cmp.is_trivial();
            parts.push(format!("Gamma(mu) - Tate m3: {}", cmp.verdict));
        }
    }
    Ok((ok, parts.join("; ")))
}

fn module(gens: &[(&str, i64)], rels: Vec<Vec<(usize, Homog)>>) -> ModulePresentation {
    ModulePresentation {
        generators: gens
            .iter()
            .map(|(n, d)| ModuleGenerator {
                name: n.to_string(),
                degree: *d,
            })
            .collect(),
        relations: rels,
    }
}

fn realisability_z3() -> Result<(bool, String)> {
    let c = cyclic_m3(CyclicGroup::new(3)?, 16, None)?;
    let ring: Arc<dyn GradedAlgebra> = c.ring.clone();
    let mu: Arc<dyn Cochain> = Arc::new(c.m3.clone());
    let x = c.ring.element("X")?;
    let opts = DecideOptions::default();
    let free = module(&[("e", 0)], vec![]);
    let rf = realisability(ring.clone(), &free, mu.clone(), 8, opts)?;
    let free_zero = rf.verdict.is_trivial() && rf.verdict.witness.as_ref().is_some_and(|w| w.values.is_empty());
    let free_direct = kappa_verdict(ring.clone(), &free, mu.clone(), 6, opts)?;
    let quotient = module(&[("e", 0)], vec![vec![(0, x.clone())]]);
    let rq = realisability(ring.clone(), &quotient, mu.clone(), 8, opts)?;
    let sum = module(&[("e", 0), ("f", 0)], vec![vec![(0, x)]]);
    let rs = realisability(ring.clone(), &sum, mu.clone(), 8, opts)?;
    let rs_direct = kappa_verdict(ring.clone(), &sum, mu, 6, opts)?;
    let ok = free_zero
        && free_direct.is_trivial()
        && rq.verdict.verdict == Verdict::Nontrivial
        && rs.verdict.verdict == rq.verdict.verdict
        && rs_direct.verdict == rq.verdict.verdict;
    Ok((
        ok,
        format!(
            "free: {} (zero witness {free_zero}, unsplit {}); quotient by X: {}; with a free summand: {} (unsplit {})",
            rf.verdict.verdict, free_direct.verdict, rq.verdict.verdict, rs.verdict.verdict, rs_direct.verdict
        ),
    ))
}

/// A random finitely presented module over `ring`: one or two generators
/// in degrees 0..=2 and up to two homogeneous relations.
pub fn random_module(rng: &mut ChaCha8Rng, ring: &GradedAlgebraPresentation) -> Result<ModulePresentation> {
    let f = ring.field();
    let ngens = rng.gen_range(1..=2);
    let gens: Vec<(String, i64)> = (0..ngens).map(|i| (format!("g{i}"), rng.gen_range(0..=2))).collect();
    let top = gens.iter().map(|g| g.1).max().unwrap_or(0);
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let td = top + rng.gen_range(0..=3);
        let mut rel = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let d = td - g.1;
            let dim = ring.dim(d)?;
            let v = Homog {
                deg: d,
                coeffs: random_vec(rng, f, dim),
            };
            if !v.is_zero() {
                rel.push((i, v));
            }
        }
        if !rel.is_empty() {
            rels.push(rel);
        }
    }
    let named: Vec<(&str, i64)> = gens.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    Ok(module(&named, rels))
}

fn local_global() -> Result<(bool, String)> {
    let c = cyclic_m3(CyclicGroup::new(3)?, 16, None)?;
    let mu: Arc<dyn Cochain> = Arc::new(c.m3.clone());
    let opts = DecideOptions::default();
    let quotient = module(&[("e", 0)], vec![vec![(0, c.ring.element("X")?)]]);
    let rep = local_global_check(c.ring.clone(), &quotient, mu.clone(), None, 8, opts)?;
    let mut ok = rep.local.len() == 2 && rep.local.iter().all(|l| l.verdict.verdict == Verdict::Nontrivial);
    let table: Vec<String> = rep
        .local
        .iter()
        .map(|l| format!("{} {}", l.prime.label(), l.verdict.verdict))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let (mut global_trivial, mut consistent) = (0, 0);
    for _ in 0..20 {
        let m = random_module(&mut rng, &c.ring)?;
        let r = local_global_check(c.ring.clone(), &m, mu.clone(), None, 6, opts)?;
        if r.global.is_trivial() {
            global_trivial += 1;
        }
        if r.consistent {
            consistent += 1;
        }
    }
    ok &= consistent == 20;
    Ok((
        ok,
        format!(
            "quotient by X: {}; random modules: {consistent}/20 consistent, {global_trivial} globally trivial",
            table.join(", ")
        ),
    ))
}

/// A random Hochschild cocycle over `alg`: a random coboundary plus a
/// random multiple of a fixed cocycle of the same arity.
fn random_cocycle(
    rng: &mut ChaCha8Rng,
    alg: &Arc<dyn GradedAlgebra>,
    basics: &[HochschildCochain],
    window: TupleWindow,
) -> Result<HochschildCochain> {
    let f = alg.field();
    let coeff: Arc<dyn GradedBimodule> = Arc::new(Regular(alg.clone()));
    let pick = &basics[rng.gen_range(0..basics.len())];
    let n = pick.arity;
    let t = pick.degree;
    let mut out = HochschildCochain::new(n, t, window, coeff.clone());
    if n > 0 {
        let g = random_cochain(rng, alg, n - 1, t, window, false)?;
        out = delta(&g, alg.as_ref(), coeff.clone(), window, false)?;
    }
    let c = rng.gen_range(0..f.p());
    for (k, v) in &pick.values {
        let prev = out.eval(k)?;
        let mut s = prev.clone();
        s.add_scaled(f, c, v)?;
        out.set(k.clone(), s)?;
    }
    Ok(out)
}

/// Cocycles of small arity: central elements, the two weight derivations,
/// their cup product and the triple product table.
fn basic_cocycles(alg: &Arc<dyn GradedAlgebra>, ring: &GradedAlgebraPresentation, window: TupleWindow) -> Result<Vec<HochschildCochain>> {
    let coeff: Arc<dyn GradedBimodule> = Arc::new(Regular(alg.clone()));
    let f = alg.field();
    let mut out = Vec::new();
    for t in 0..=2 {
        for z in graded_centre(alg.as_ref(), t, window.size)? {
            let mut c = HochschildCochain::new(0, t, window, coeff.clone());
            c.set(vec![], z)?;
            out.push(c);
        }
    }
    let mut weights = Vec::new();
    for g in 0..ring.generators().len() {
        let mut c = HochschildCochain::new(1, 0, window, coeff.clone());
        for b in window.tuples(alg.as_ref(), 1, false)? {
            let w = ring.word(b[0]).map(|w| w.iter().filter(|&&x| x == g).count()).unwrap_or(0);
            let v = Homog::basis(b[0], alg.dim(b[0].deg)?).scaled(f, f.reduce_i64(w as i64));
            c.set(b, v)?;
        }
        weights.push(c);
    }
    if weights.len() == 2 {
        let cup = Cup {
            left: &weights[0],
            right: &weights[1],
            alg: alg.as_ref(),
        };
        out.push(HochschildCochain::tabulate(&cup, alg.as_ref(), coeff.clone(), window, false)?);
    }
    out.extend(weights);
    let table = OddTripleCochain { algebra: alg.clone() };
    out.push(HochschildCochain::tabulate(&table, alg.as_ref(), coeff, window, false)?);
    Ok(out)
}

fn cup_yoneda() -> Result<(bool, String)> {
    let ring = lambda(12)?;
    let alg: Arc<dyn GradedAlgebra> = ring.clone();
    let f = alg.field();
    let w = TupleWindow::total(6);
    let basics: Vec<HochschildCochain> = basic_cocycles(&alg, &ring, w)?.into_iter().filter(|c| c.arity <= 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let (mut tuples, mut bad, mut nonzero) = (0, 0, 0);
    for _ in 0..100 {
        let zeta = random_cocycle(&mut rng, &alg, &basics, w)?;
        let eta = random_cocycle(&mut rng, &alg, &basics, w)?;
        let (m, i, n, j) = (zeta.arity as i64, zeta.degree, eta.arity as i64, eta.degree);
        let sign = f.sign(m * n + i * j);
        let cup = Cup {
            left: &zeta,
            right: &eta,
            alg: alg.as_ref(),
        };
        let y1 = Yoneda {
            first: &zeta,
            second: &eta,
            alg: alg.as_ref(),
            lifting: Lifting::Diagonal,
        };
        let y2 = Yoneda {
            first: &eta,
            second: &zeta,
            alg: alg.as_ref(),
            lifting: Lifting::Solberg,
        };
        for t in w.tuples(alg.as_ref(), (m + n) as usize, false)? {
            let c = cup.eval(&t)?;
            if !c.is_zero() {
                nonzero += 1;
            }
            if y1.eval(&t)? != c || y2.eval(&t)? != c.scaled(f, sign) {
                bad += 1;
            }
            tuples += 1;
        }
    }
    Ok((
        bad == 0,
        format!("100 pairs, {tuples} tuples ({nonzero} with nonzero cup), {bad} mismatches"),
    ))
}

fn choice_robustness() -> Result<(bool, String)> {
    let base = cyclic_m3(CyclicGroup::new(3)?, 12, None)?;
    let ring: Arc<dyn GradedAlgebra> = base.ring.clone();
    let coeff: Arc<dyn GradedBimodule> = Arc::new(Regular(ring.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
    let mut ok = true;
    let mut changed = 0;
    for _ in 0..5 {
        let preferred = perturbed_selection(&base.transfer, &base.end.dga, &mut rng)?;
        let opts = TransferOptions {
            preferred,
            ..Default::default()
        };
        let other = cyclic_m3_from(base.end.clone(), Some(&opts))?;
        if other.m3.values != base.m3.values {
            changed += 1;
        }
        let diff = Difference {
            a: &other.m3,
            b: &base.m3,
            field: ring.field(),
        };
        let v = coboundary_decide(&diff, ring.as_ref(), coeff.as_ref(), &TupleWindow::total(8), DecideOptions::default())?;
        ok &= v.is_trivial();
        if let Some(wit) = &v.witness {
            ok &= check_witness(&diff, wit, ring.as_ref(), coeff.clone(), &TupleWindow::total(8))?;
        }
    }
    Ok((ok, format!("5 re-selections, {changed} changed the table, all differences coboundaries: {ok}")))
}

fn inclusion(y: &crate::dgcore::DgModule, z: &crate::dgcore::DgModule) -> ModuleChainMap {
    let f = y.field;
    let mut blocks = std::collections::BTreeMap::new();
    for p in y.lo..=y.hi() {
        let (dy, dz) = (y.term(p).map_or(0, |t| t.dim), z.term(p).map_or(0, |t| t.dim));
        let mut m = Matrix::zeros(f, dz, dy);
        for i in 0..dy {
            m.set(i, i, 1);
        }
        blocks.insert(p, m);
    }
    ModuleChainMap { blocks }
}

fn pullback_check() -> Result<(bool, String)> {
    let g = CyclicGroup::new(3)?;
    let y = coresolution(g, 3)?;
    let z = y.direct_sum(&y.cone_of_identity()?)?;
    let iota = inclusion(&y, &z);
    let (lo, hi) = (-4, 4);
    let (a, ha) = end_dga(&y, lo, hi, None, (lo, hi))?;
    let (b, hb) = end_dga(&z, lo, hi, None, (lo, hi))?;
    let hc = HomComplex::new(&y, &z, lo, hi, None, (lo, hi))?;
    let alpha = post_compose(&iota, &ha, &hc)?;
    let beta = pre_compose(&iota, &hb, &hc)?;
    let c = &hc.complex;
    alpha.check(a.complex(), c)?;
    beta.check(b.complex(), c)?;
    let surjective = (lo..=hi).all(|n| beta.blocks[&n].rank() == c.dim(n));
    let beta_qi = quasi_iso_check(&beta, b.complex(), c, lo, hi)?.is_quasi_iso;
    let pb = pullback(&a, &b, &alpha, &beta, c)?;
    let x = &pb.dga;
    let p1_dg = check_dg_map(&pb.p1.blocks, x, &a)?;
    let p2_dg = check_dg_map(&pb.p2.blocks, x, &b)?;
    let p1_qi = quasi_iso_check(&pb.p1, x.complex(), a.complex(), lo, hi)?.is_quasi_iso;
    // H*(X) against the pullback of H*(A) -> H*(C) <- H*(B)
    let (hx, hac, hbc, hcc) = (x.complex().cohomology()?, a.complex().cohomology()?, b.complex().cohomology()?, c.cohomology()?);
    let f = a.field();
    let mut pb_ok = true;
    let mut dims = Vec::new();
    for n in lo..=hi {
        let (na, nb, nc) = (hac.dim(n), hbc.dim(n), hcc.dim(n));
        let mut cols = Vec::new();
        for i in 0..na {
            cols.push(hcc.project(&alpha.apply(&hac.rep(n, i)?)?)?.coeffs);
        }
        for i in 0..nb {
            let v = hcc.project(&beta.apply(&hbc.rep(n, i)?)?)?;
            cols.push(v.neg(f).coeffs);
        }
        let kernel = if na + nb == 0 {
            0
        } else if nc == 0 {
            na + nb
        } else {
            na + nb - Matrix::from_columns(f, nc, &cols)?.rank()
        };
        // image of H(X) in H(A) (+) H(B)
        let mut img = Vec::new();
        for i in 0..hx.dim(n) {
            let r = hx.rep(n, i)?;
            let mut v = hac.project(&pb.p1.apply(&r)?)?.coeffs;
            v.extend(hbc.project(&pb.p2.apply(&r)?)?.coeffs);
            img.push(v);
        }
        let rank = if img.is_empty() || na + nb == 0 {
            0
        } else {
            Matrix::from_columns(f, na + nb, &img)?.rank()
        };
        pb_ok &= hx.dim(n) == kernel && rank == kernel;
        dims.push(hx.dim(n));
    }
    let ok = surjective && beta_qi && p1_dg && p2_dg && p1_qi && pb_ok;
    Ok((
        ok,
        format!(
            "beta surjective {surjective}, quasi-iso {beta_qi}; projections dg maps {p1_dg}/{p2_dg}; p1 quasi-iso {p1_qi}; H*(X) dims {dims:?} match the cohomology pullback {pb_ok}"
        ),
    ))
}

