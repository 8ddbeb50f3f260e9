//! Guard evaluation over live bindings.
//!
//! Guards are already typed by the linker, so evaluation is mostly
//! mechanical. Anything that can only go wrong at runtime (an unbound
//! param, a deleted object, an absent value) fails with MW504.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::activity::{CompareOp, GuardExpr, Operand};
use crate::diag::codes;

use super::store::ObjectStore;
use super::value::{ObjectId, Value};
use super::RuntimeError;

/// Evaluates a resolved guard. `&&` and `||` short-circuit left to
/// right, so an erroring right-hand side is never reached when the left
/// side already decides.
pub fn eval_guard(
    guard: &GuardExpr,
    bindings: &BTreeMap<String, ObjectId>,
    store: &ObjectStore,
) -> Result<bool, RuntimeError> {
    match guard {
        GuardExpr::Or(l, r) => {
            if eval_guard(l, bindings, store)? {
                Ok(true)
            } else {
                eval_guard(r, bindings, store)
            }
        }
        GuardExpr::And(l, r) => {
            if eval_guard(l, bindings, store)? {
                eval_guard(r, bindings, store)
            } else {
                Ok(false)
            }
        }
        GuardExpr::Compare { op, lhs, rhs } => {
            let left = operand_value(lhs, bindings, store)?;
            let right = operand_value(rhs, bindings, store)?;
            compare(*op, &left, &right)
        }
    }
}

fn operand_value(
    operand: &Operand,
    bindings: &BTreeMap<String, ObjectId>,
    store: &ObjectStore,
) -> Result<Value, RuntimeError> {
    match operand {
        Operand::Int(v, _) => Ok(Value::Num(*v)),
        Operand::Str(s, _) => Ok(Value::Str(s.clone())),
        Operand::EnumLiteral { enum_name, literal, .. } => Ok(Value::EnumVal {
            enum_name: enum_name.clone(),
            literal: literal.clone(),
        }),
        Operand::ParamAttribute { param, attribute, .. } => {
            let Some(id) = bindings.get(param) else {
                return Err(fail(format!("param `{param}` is not bound")));
            };
            let Some(record) = store.object(*id) else {
                return Err(fail(format!(
                    "object {id} bound to `{param}` no longer exists"
                )));
            };
            match record.fields.get(attribute) {
                Some(Value::Absent) | None => Err(fail(format!(
                    "`{param}.{attribute}` has no value"
                ))),
                Some(Value::Ref(_)) | Some(Value::RefList(_)) => Err(fail(format!(
                    "`{param}.{attribute}` is an object reference, not a comparable value"
                ))),
                Some(value) => Ok(value.clone()),
            }
        }
    }
}

fn compare(op: CompareOp, left: &Value, right: &Value) -> Result<bool, RuntimeError> {
    match (left, right) {
        (Value::Num(a), Value::Num(b)) => Ok(ordered(op, a, b)),
        (Value::Date(a), Value::Date(b)) => Ok(ordered(op, a, b)),
        (Value::Date(a), Value::Str(s)) => Ok(ordered(op, a, &literal_date(s)?)),
        (Value::Str(s), Value::Date(b)) => Ok(ordered(op, &literal_date(s)?, b)),
        (Value::Str(a), Value::Str(b)) => equality(op, a == b, "strings"),
        (
            Value::EnumVal { enum_name: ea, literal: la },
            Value::EnumVal { enum_name: eb, literal: lb },
        ) => equality(op, ea == eb && la == lb, "enum values"),
        (a, b) => Err(fail(format!(
            "cannot compare {} with {}",
            kind(a),
            kind(b)
        ))),
    }
}

fn ordered<T: PartialOrd>(op: CompareOp, a: &T, b: &T) -> bool {
    match op {
        CompareOp::Ge => a >= b,
        CompareOp::Le => a <= b,
        CompareOp::Gt => a > b,
        CompareOp::Lt => a < b,
        CompareOp::Eq => a == b,
        CompareOp::Ne => a != b,
    }
}

fn equality(op: CompareOp, equal: bool, what: &str) -> Result<bool, RuntimeError> {
    match op {
        CompareOp::Eq => Ok(equal),
        CompareOp::Ne => Ok(!equal),
        other => Err(fail(format!(
            "ordering comparison `{}` is not defined for {what}",
            other.symbol()
        ))),
    }
}

fn literal_date(s: &str) -> Result<NaiveDate, RuntimeError> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|_| fail(format!("`{s}` is not a date literal")))
}

fn kind(value: &Value) -> &'static str {
    match value {
        Value::Str(_) => "a string",
        Value::Num(_) => "a number",
        Value::Date(_) => "a date",
        Value::EnumVal { .. } => "an enum value",
        Value::Ref(_) => "an object reference",
        Value::RefList(_) => "an object list",
        Value::Absent => "an absent value",
    }
}

fn fail(message: String) -> RuntimeError {
    RuntimeError::new(codes::GUARD_EVAL, message)
}
