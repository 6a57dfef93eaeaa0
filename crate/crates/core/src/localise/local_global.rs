use std::sync::Arc;

use super::fractions::LocalisedAlgebra;
use super::primes::{supported_primes, GradedPrime};
use crate::error::Result;
use crate::graded::{GradedAlgebra, GradedAlgebraPresentation, GradedRightModule, ModulePresentation, ModuleWindow, RestrictedModule};
use crate::hochschild::{
    module_coboundary_decide, realisability, Cochain, DecideOptions, ObstructionVerdict, PairingCochain, PairingWindow,
    RankCertificate, TupleWindow, Verdict, Witness,
};

#[derive(Clone, Debug)]
pub struct LocalVerdict {
    pub prime: GradedPrime,
    pub inverted: Vec<String>,
    pub identity: bool,
    pub zero_ring: bool,
    pub zero_module: bool,
    pub verdict: ObstructionVerdict,
}

#[derive(Clone, Debug)]
pub struct LocalGlobalReport {
    pub global: ObstructionVerdict,
    pub free_summands: usize,
    pub local: Vec<LocalVerdict>,
    /// Global triviality implies triviality at every prime.
    pub consistent: bool,
}

fn zero_verdict(mu: &dyn Cochain, size: i64) -> ObstructionVerdict {
    ObstructionVerdict {
        verdict: Verdict::TrivialUpToWindow,
        certificates: vec![RankCertificate {
            window: TupleWindow::total(size),
            equations: 0,
            unknowns: 0,
            rank: 0,
            augmented_rank: 0,
            skipped_cocycle_checks: 0,
        }],
        witness: Some(Witness::zero(mu.arity().saturating_sub(1), mu.degree())),
    }
}

/// `kappa(X_p)` for the localisation `T` of `R` at a prime: the cocycle
/// `id (x) can(mu)` over `R` with values in `X_p`, module degrees
/// in `[-size, size]`.
pub fn local_verdict(
    r: Arc<GradedAlgebraPresentation>,
    presentation: &ModulePresentation,
    mu: Arc<dyn Cochain>,
    prime: &GradedPrime,
    size: i64,
    opts: DecideOptions,
    global: &ObstructionVerdict,
) -> Result<LocalVerdict> {
    let inverted = prime.complement(&r);
    let t = Arc::new(LocalisedAlgebra::new(r.clone(), &inverted)?);
    let mut out = LocalVerdict {
        prime: prime.clone(),
        inverted,
        identity: t.is_identity(),
        zero_ring: t.is_zero(),
        zero_module: false,
        verdict: global.clone(),
    };
    if out.identity {
        return Ok(out);
    }
    if out.zero_ring {
        out.zero_module = true;
        out.verdict = zero_verdict(mu.as_ref(), size);
        return Ok(out);
    }
    let (reduced, _) = presentation.split_free();
    let can = t.can();
    let ta: Arc<dyn GradedAlgebra> = t.clone();
    let local = reduced.map_relations(can.as_ref(), ta.as_ref())?;
    let xp = Arc::new(ModuleWindow::new(ta.clone(), local));
    let wide = size + crate::hochschild::STABILITY_MARGIN;
    let mut zero = true;
    for d in -wide..=wide {
        if xp.dim(d)? > 0 {
            zero = false;
            break;
        }
    }
    if zero {
        out.zero_module = true;
        out.verdict = zero_verdict(mu.as_ref(), size);
        return Ok(out);
    }
    let c = PairingCochain {
        module: xp.clone(),
        map: None,
        phi: mu,
        coeff_map: Some((can.clone(), ta)),
    };
    let acting = RestrictedModule {
        module: xp,
        map: can,
    };
    out.verdict = module_coboundary_decide(&c, &acting, r.as_ref(), &PairingWindow::symmetric(size), opts)?;
    Ok(out)
}

/// Global and per-prime realisability obstructions of `X` over `R`.
/// Primes default to those of the supported family.
pub fn local_global_check(
    r: Arc<GradedAlgebraPresentation>,
    presentation: &ModulePresentation,
    mu: Arc<dyn Cochain>,
    primes: Option<Vec<GradedPrime>>,
    size: i64,
    opts: DecideOptions,
) -> Result<LocalGlobalReport> {
    let primes = match primes {
        Some(p) => p,
        None => supported_primes(&r)?,
    };
    let global = realisability(r.clone(), presentation, mu.clone(), size, opts)?;
    let mut local = Vec::new();
    for p in &primes {
        local.push(local_verdict(r.clone(), presentation, mu.clone(), p, size, opts, &global.verdict)?);
    }
    let consistent = !global.verdict.is_trivial() || local.iter().all(|l| l.verdict.is_trivial());
    Ok(LocalGlobalReport {
        global: global.verdict,
        free_summands: global.free_summands.len(),
        local,
        consistent,
    })
}
