use std::cmp::Ordering;
use std::sync::Arc;

use crate::model::*;

const RED_ZONE: usize = 64 * 1024;
const STACK_CHUNK: usize = 2 * 1024 * 1024;

/// Call-by-value, left-to-right evaluation of a checked expression.
pub fn eval_expr(env: &Env, e: &Expr) -> Result<Value, RuntimeError> {
    stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || eval_inner(env, e))
}

fn eval_inner(env: &Env, e: &Expr) -> Result<Value, RuntimeError> {
    Ok(match &e.kind {
        ExprKind::Int(n) => Value::Int(n.clone()),
        ExprKind::Str(s) => Value::Str(s.clone()),
        ExprKind::Bool(b) => Value::Bool(*b),
        ExprKind::Symbol(s) => Value::Symbol(s.clone()),
        ExprKind::Var(name) => env
            .lookup(name)
            .cloned()
            .ok_or_else(|| RuntimeError::UnboundVariable(name.clone()))?,
        ExprKind::Lambda {
            param,
            param_type,
            body,
        } => Value::Closure(Arc::new(Closure {
            param: param.clone(),
            param_type: param_type.clone(),
            body: body.clone(),
            env: env.clone(),
        })),
        ExprKind::Apply(func, arg) => {
            let f = eval_expr(env, func)?;
            let a = eval_expr(env, arg)?;
            apply(&f, &a)?
        }
        ExprKind::Bottom(ty) => {
            return Err(RuntimeError::BottomEvaluated {
                ty: ty.clone(),
                span: e.span.clone(),
            })
        }
        ExprKind::Update { func, key, value } => {
            let base = eval_expr(env, func)?;
            let key = eval_expr(env, key)?;
            let value = eval_expr(env, value)?;
            if !base.is_function() {
                return Err(RuntimeError::IllTyped(format!("cannot update {base}")));
            }
            Value::Updated(Arc::new(Updated { base, key, value }))
        }
        ExprKind::Pair(a, b) => Value::pair(eval_expr(env, a)?, eval_expr(env, b)?),
        ExprKind::BinOp(op, a, b) => {
            let x = eval_expr(env, a)?;
            let y = eval_expr(env, b)?;
            binop(*op, &x, &y)?
        }
        ExprKind::Ctor { name, args } => Value::Ctor {
            name: name.clone(),
            payload: args
                .iter()
                .map(|a| eval_expr(env, a))
                .collect::<Result<_, _>>()?,
        },
        ExprKind::Syntax { parts, shape } => Value::Syntax {
            shape: shape.clone(),
            children: sub_terms(parts)
                .map(|s| eval_expr(env, s))
                .collect::<Result<_, _>>()?,
        },
    })
}

/// Applies a function value. Update chains are searched from the most
/// recent update outwards before falling through to the base closure.
pub fn apply(func: &Value, arg: &Value) -> Result<Value, RuntimeError> {
    let mut cur = func;
    loop {
        match cur {
            Value::Updated(u) => {
                if value_equals(arg, &u.key)? {
                    return Ok(u.value.clone());
                }
                cur = &u.base;
            }
            Value::Closure(c) => {
                let env = c.env.extend(c.param.clone(), arg.clone());
                return eval_expr(&env, &c.body);
            }
            other => return Err(RuntimeError::IllTyped(format!("{other} is not a function"))),
        }
    }
}

fn binop(op: BinOp, x: &Value, y: &Value) -> Result<Value, RuntimeError> {
    if op.is_arithmetic() {
        let (Some(a), Some(b)) = (x.as_int(), y.as_int()) else {
            return Err(RuntimeError::IllTyped(format!(
                "arithmetic on {x} and {y}"
            )));
        };
        return Ok(Value::Int(match op {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            _ => unreachable!(),
        }));
    }
    let result = match op {
        BinOp::Eq => value_equals(x, y)?,
        BinOp::Ne => !value_equals(x, y)?,
        BinOp::Lt => compare(x, y)? == Ordering::Less,
        BinOp::Le => compare(x, y)? != Ordering::Greater,
        _ => unreachable!(),
    };
    Ok(Value::Bool(result))
}

fn compare(x: &Value, y: &Value) -> Result<Ordering, RuntimeError> {
    match (x, y) {
        (Value::Int(a), Value::Int(b)) => Ok(a.cmp(b)),
        (Value::Str(a), Value::Str(b)) | (Value::Symbol(a), Value::Symbol(b)) => Ok(a.cmp(b)),
        (Value::Bool(a), Value::Bool(b)) => Ok(a.cmp(b)),
        _ => Err(RuntimeError::IllTyped(format!("cannot order {x} and {y}"))),
    }
}
