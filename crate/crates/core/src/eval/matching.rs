use crate::model::*;

/// Matches `v` against `p`, extending `bindings`. A variable that is
/// already bound must be matched by an equal value. Returns `Ok(false)` on
/// mismatch; `bindings` may then hold partial results and should be
/// discarded.
pub fn match_pattern(p: &Pattern, v: &Value, bindings: &mut Bindings) -> Result<bool, RuntimeError> {
    match (&p.kind, v) {
        (PatternKind::Wildcard, _) => Ok(true),
        (PatternKind::Var(name), _) => match bindings.get(name) {
            Some(bound) => value_equals(bound, v),
            None => {
                bindings.insert(name.clone(), v.clone());
                Ok(true)
            }
        },
        (PatternKind::Int(n), Value::Int(m)) => Ok(n == m),
        (PatternKind::Str(s), Value::Str(t)) => Ok(s == t),
        (PatternKind::Bool(b), Value::Bool(c)) => Ok(b == c),
        (PatternKind::Symbol(s), Value::Symbol(t)) => Ok(s == t),
        (PatternKind::Pair(pa, pb), Value::Pair(va, vb)) => {
            Ok(match_pattern(pa, va, bindings)? && match_pattern(pb, vb, bindings)?)
        }
        (PatternKind::Ctor { name, args }, Value::Ctor { name: vname, payload }) => {
            if name != vname || args.len() != payload.len() {
                return Ok(false);
            }
            for (a, pv) in args.iter().zip(payload) {
                if !match_pattern(a, pv, bindings)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (PatternKind::Syntax { parts, shape }, Value::Syntax { shape: vshape, children }) => {
            if shape != vshape {
                return Ok(false);
            }
            for (sub, child) in sub_terms(parts).zip(children) {
                if !match_pattern(sub, child, bindings)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(false),
    }
}
