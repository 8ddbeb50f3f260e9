//! Annotation-driven field validation.
//!
//! Raw text goes in, a typed [`Value`] or a list of violations comes out.
//! Rules only constrain: annotations can reject more inputs, never accept
//! more. An empty input is `Absent` unless `@Required` forbids it.

use chrono::NaiveDate;

use crate::annotation::Annotation;
use crate::linker::{AttrType, BaseType, SymbolTable};

use super::value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationRule {
    Required,
    Length { min: Option<i64>, max: Option<i64> },
    EmailFormat,
    NumberFormat,
    DateFormat,
    EnumFormat { enum_name: String },
    Cardinality { min: u32, max: Option<u32>, count: usize },
    Captcha,
}

impl ValidationRule {
    pub fn name(&self) -> &'static str {
        match self {
            ValidationRule::Required => "Required",
            ValidationRule::Length { .. } => "Length",
            ValidationRule::EmailFormat => "EmailFormat",
            ValidationRule::NumberFormat => "NumberFormat",
            ValidationRule::DateFormat => "DateFormat",
            ValidationRule::EnumFormat { .. } => "EnumFormat",
            ValidationRule::Cardinality { .. } => "Cardinality",
            ValidationRule::Captcha => "Captcha",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationViolation {
    /// Attribute or role the input belonged to.
    pub attribute: String,
    pub rule: ValidationRule,
    pub message: String,
    /// The raw input that was rejected.
    pub input: String,
}

impl ValidationViolation {
    pub fn new(
        attribute: impl Into<String>,
        rule: ValidationRule,
        message: impl Into<String>,
        input: impl Into<String>,
    ) -> Self {
        ValidationViolation {
            attribute: attribute.into(),
            rule,
            message: message.into(),
            input: input.into(),
        }
    }

    /// Canonical JSON shape: rule parameters are flattened next to the
    /// rule name so golden traces stay easy to read.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("attribute".into(), self.attribute.clone().into());
        map.insert("rule".into(), self.rule.name().into());
        map.insert("message".into(), self.message.clone().into());
        map.insert("input".into(), self.input.clone().into());
        match &self.rule {
            ValidationRule::Length { min, max } => {
                map.insert("min".into(), opt_int(*min));
                map.insert("max".into(), opt_int(*max));
            }
            ValidationRule::EnumFormat { enum_name } => {
                map.insert("enum".into(), enum_name.clone().into());
            }
            ValidationRule::Cardinality { min, max, count } => {
                map.insert("min".into(), (*min).into());
                map.insert(
                    "max".into(),
                    max.map_or(serde_json::Value::Null, |m| m.into()),
                );
                map.insert("count".into(), (*count).into());
            }
            _ => {}
        }
        serde_json::Value::Object(map)
    }
}

fn opt_int(v: Option<i64>) -> serde_json::Value {
    v.map_or(serde_json::Value::Null, serde_json::Value::from)
}

/// Validates one raw input against an attribute type and its effective
/// annotations. When several annotations of the same kind survive the
/// view merge, the last one wins.
pub fn validate_field(
    table: &SymbolTable,
    attribute: &str,
    ty: &AttrType,
    annotations: &[Annotation],
    raw: &str,
) -> Result<Value, Vec<ValidationViolation>> {
    let required = annotations.iter().any(|a| a.name == "Required");
    if raw.trim().is_empty() {
        if required {
            return Err(vec![ValidationViolation::new(
                attribute,
                ValidationRule::Required,
                format!("`{attribute}` is required"),
                raw,
            )]);
        }
        return Ok(Value::Absent);
    }

    let mut violations = Vec::new();
    let value = match ty {
        AttrType::Base(BaseType::MWString) => Some(Value::Str(raw.to_string())),
        AttrType::Base(BaseType::Email) => {
            if is_email(raw) {
                Some(Value::Str(raw.to_string()))
            } else {
                violations.push(ValidationViolation::new(
                    attribute,
                    ValidationRule::EmailFormat,
                    format!("`{attribute}` is not an email address (local@domain.tld)"),
                    raw,
                ));
                None
            }
        }
        AttrType::Base(BaseType::Number) => match parse_number(raw) {
            Ok(n) => Some(Value::Num(n)),
            Err(why) => {
                violations.push(ValidationViolation::new(
                    attribute,
                    ValidationRule::NumberFormat,
                    format!("`{attribute}` {why}"),
                    raw,
                ));
                None
            }
        },
        AttrType::Base(BaseType::MWDate) => match parse_date(raw) {
            Ok(d) => Some(Value::Date(d)),
            Err(why) => {
                violations.push(ValidationViolation::new(
                    attribute,
                    ValidationRule::DateFormat,
                    format!("`{attribute}` {why}"),
                    raw,
                ));
                None
            }
        },
        AttrType::Enum(enum_name) => {
            let known = table
                .enums
                .get(enum_name)
                .is_some_and(|e| e.has_literal(raw));
            if known {
                Some(Value::EnumVal {
                    enum_name: enum_name.clone(),
                    literal: raw.to_string(),
                })
            } else {
                let expected = table
                    .enums
                    .get(enum_name)
                    .map(|e| e.literals.join(", "))
                    .unwrap_or_default();
                violations.push(ValidationViolation::new(
                    attribute,
                    ValidationRule::EnumFormat {
                        enum_name: enum_name.clone(),
                    },
                    format!("`{attribute}` must be one of {expected}"),
                    raw,
                ));
                None
            }
        }
    };

    if let Some(length) = annotations.iter().rev().find(|a| a.name == "Length") {
        let min = length.int_arg("min");
        let max = length.int_arg("max");
        let count = raw.chars().count() as i64;
        let ok = min.is_none_or(|m| count >= m) && max.is_none_or(|m| count <= m);
        if !ok {
            violations.push(ValidationViolation::new(
                attribute,
                ValidationRule::Length { min, max },
                length_message(attribute, min, max, count),
                raw,
            ));
        }
    }

    match (value, violations.is_empty()) {
        (Some(value), true) => Ok(value),
        (_, _) => Err(violations),
    }
}

fn length_message(attribute: &str, min: Option<i64>, max: Option<i64>, count: i64) -> String {
    let bounds = match (min, max) {
        (Some(min), Some(max)) => format!("between {min} and {max} characters"),
        (Some(min), None) => format!("at least {min} characters"),
        (None, Some(max)) => format!("at most {max} characters"),
        (None, None) => unreachable!("bare @Length is rejected at link time"),
    };
    format!("`{attribute}` must be {bounds}, got {count}")
}

/// Deliberately simple address shape: one `@`, a nonempty local part, a
/// dotted domain with nonempty labels, and no whitespace anywhere.
fn is_email(raw: &str) -> bool {
    if raw.chars().any(char::is_whitespace) {
        return false;
    }
    let mut parts = raw.splitn(2, '@');
    let (Some(local), Some(domain)) = (parts.next(), parts.next()) else {
        return false;
    };
    !local.is_empty()
        && !domain.contains('@')
        && domain.contains('.')
        && domain.split('.').all(|label| !label.is_empty())
}

fn parse_number(raw: &str) -> Result<i64, &'static str> {
    let digits = raw.strip_prefix(['+', '-']).unwrap_or(raw);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err("is not a number (optional sign, then digits)");
    }
    raw.parse::<i64>()
        .map_err(|_| "does not fit a 64-bit integer")
}

fn parse_date(raw: &str) -> Result<NaiveDate, &'static str> {
    let shaped = raw.len() == 10
        && raw.bytes().enumerate().all(|(i, b)| match i {
            4 | 7 => b == b'-',
            _ => b.is_ascii_digit(),
        });
    if !shaped {
        return Err("is not a date (YYYY-MM-DD)");
    }
    NaiveDate::parse_from_str(raw, "%Y-%m-%d").map_err(|_| "is not a valid calendar date")
}
