use serde_json::{json, Value};

use super::refs::Ring;
use crate::error::Result;
use crate::graded::{Basis, GradedRightModule, Homog};
use crate::hochschild::{Cochain, ObstructionVerdict, TupleWindow};

/// Nonzero values of a cochain on a window, in tuple order.
pub fn cochain_table(ring: &Ring, values: &Ring, c: &dyn Cochain, window: &TupleWindow, normalized: bool) -> Result<Value> {
    let mut rows = Vec::new();
    for t in window.tuples(ring.alg.as_ref(), c.arity(), normalized)? {
        let v = c.eval(&t)?;
        if !v.is_zero() {
            rows.push(json!({"args": ring.labels(&t), "value": values.element_string(&v)}));
        }
    }
    Ok(Value::Array(rows))
}

pub fn verdict(v: &ObstructionVerdict, key: impl Fn(&[Basis]) -> Vec<String>, value: impl Fn(&Homog) -> String) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        let rows: Vec<Value> = w
            .values
            .iter()
            .filter(|(_, h)| !h.is_zero())
            .map(|(t, h)| json!({"args": key(t), "value": value(h)}))
            .collect();
        json!({"arity": w.arity, "degree": w.degree, "values": rows})
    });
    json!({
        "verdict": v.verdict.to_string(),
        "certificates": serde_json::to_value(&v.certificates).unwrap_or(Value::Null),
        "witness": witness,
    })
}

/// Verdict of a Hochschild system: keys in `ring`, values in `values`.
pub fn hochschild_verdict(v: &ObstructionVerdict, ring: &Ring, values: &Ring) -> Value {
    verdict(v, |t| ring.labels(t), |h| values.element_string(h))
}

/// Verdict of a module system: keys `[x, l_1, ...]`, values in the module.
pub fn module_verdict(v: &ObstructionVerdict, ring: &Ring, module: &dyn GradedRightModule) -> Value {
    let f = module.field();
    verdict(
        v,
        |t| {
            let mut out = vec![module.label(t[0])];
            out.extend(ring.labels(&t[1..]));
            out
        },
        |h| crate::graded::format_element(f, |b| module.label(b), h),
    )
}
