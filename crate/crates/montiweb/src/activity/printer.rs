//! Canonical pretty-printer for activity diagrams.
//!
//! Transition alternatives print one per line with the `|` aligned
//! under the arrow; guards print with minimal parentheses yet re-parse
//! to the same tree.

use std::fmt::Write;

use super::ast::*;

pub fn print_activity(activity: &ActivityDef) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "activity {} {{", activity.name);
    for action in &activity.actions {
        let _ = writeln!(out, "  action {} {{", action.name);
        if !action.inputs.is_empty() {
            let _ = writeln!(out, "    in: {};", params(&action.inputs));
        }
        if !action.outputs.is_empty() {
            let _ = writeln!(out, "    out: {};", params(&action.outputs));
        }
        match &action.content {
            ActionContent::ViewCall(call) => {
                out.push_str("    view: ");
                if let Some(assign) = &call.assign_to {
                    out.push_str(assign);
                    out.push_str(" = ");
                }
                out.push_str(&call.class_name);
                out.push('.');
                out.push_str(&call.view_name);
                out.push('(');
                if let Some(arg) = &call.argument {
                    out.push_str(arg);
                }
                out.push_str(");\n");
            }
            ActionContent::OpaqueCode(code) => {
                let _ = writeln!(out, "    code {{{}}}", code.text);
            }
        }
        out.push_str("  }\n");
    }
    for transition in &activity.transitions {
        let sources = transition
            .sources
            .iter()
            .map(Endpoint::describe)
            .collect::<Vec<_>>()
            .join(" | ");
        let _ = write!(out, "  {sources} ->");
        // Continuation lines park the `|` directly under the arrow.
        let hang = " ".repeat(2 + sources.chars().count() + 1);
        for (idx, alternative) in transition.alternatives.iter().enumerate() {
            if idx > 0 {
                let _ = write!(out, "\n{hang}|");
            }
            if let Some(guard) = &alternative.guard {
                let _ = write!(out, " [{}]", print_guard(guard));
            }
            let _ = write!(out, " {}", alternative.target.describe());
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

fn params(list: &[ParamDecl]) -> String {
    list.iter()
        .map(|p| format!("{} {}", p.type_name, p.name))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical guard text, parenthesis-minimal.
pub fn print_guard(guard: &GuardExpr) -> String {
    let mut out = String::new();
    print_guard_prec(&mut out, guard, 1);
    out
}

fn precedence(guard: &GuardExpr) -> u8 {
    match guard {
        GuardExpr::Or(..) => 1,
        GuardExpr::And(..) => 2,
        GuardExpr::Compare { .. } => 3,
    }
}

fn print_guard_prec(out: &mut String, guard: &GuardExpr, min: u8) {
    let prec = precedence(guard);
    let wrap = prec < min;
    if wrap {
        out.push('(');
    }
    match guard {
        GuardExpr::Or(lhs, rhs) => {
            print_guard_prec(out, lhs, prec);
            out.push_str(" || ");
            print_guard_prec(out, rhs, prec + 1);
        }
        GuardExpr::And(lhs, rhs) => {
            print_guard_prec(out, lhs, prec);
            out.push_str(" && ");
            print_guard_prec(out, rhs, prec + 1);
        }
        GuardExpr::Compare { op, lhs, rhs } => {
            print_operand(out, lhs);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            print_operand(out, rhs);
        }
    }
    if wrap {
        out.push(')');
    }
}

fn print_operand(out: &mut String, operand: &Operand) {
    match operand {
        Operand::ParamAttribute { param, attribute, .. } => {
            out.push_str(param);
            out.push('.');
            out.push_str(attribute);
        }
        Operand::Int(v, _) => {
            let _ = write!(out, "{v}");
        }
        Operand::Str(v, _) => {
            let _ = write!(out, "\"{v}\"");
        }
        Operand::EnumLiteral { enum_name, literal, .. } => {
            out.push_str(enum_name);
            out.push('.');
            out.push_str(literal);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_activity, parse_guard};
    use super::*;

    const FIG_AD: &str = include_str!("../../fixtures/carsharing/UserRegistration.ad");

    #[test]
    fn carsharing_prints_canonically() {
        let activity = parse_activity(FIG_AD, "UserRegistration.ad").unwrap();
        let expected = "\
activity UserRegistration {
  action Registration {
    out: Person p;
    view: p = Person.registration();
  }
  action Welcome {
    in: Person p;
    view: Person.welcome(p);
  }
  action Error {
    in: Person p;
    view: Person.registrationError(p);
  }
  initial -> Registration;
  Registration.p -> [p.age >= 18] Welcome.p
                 | [p.age < 18] Error.p;
  Welcome | Error -> final;
}
";
        assert_eq!(print_activity(&activity), expected);
    }

    #[test]
    fn round_trip_is_structural_identity() {
        let mut first = parse_activity(FIG_AD, "a.ad").unwrap();
        let printed = print_activity(&first);
        let mut second = parse_activity(&printed, "b.ad").unwrap();
        first.strip_spans();
        second.strip_spans();
        assert_eq!(first, second);
    }

    #[test]
    fn code_round_trip() {
        let src = "activity A { action B { code {x.go();} } initial -> B; B -> final; }";
        let mut first = parse_activity(src, "a.ad").unwrap();
        let printed = print_activity(&first);
        let mut second = parse_activity(&printed, "b.ad").unwrap();
        first.strip_spans();
        second.strip_spans();
        assert_eq!(first, second);
    }

    #[test]
    fn guard_free_transition_prints_without_brackets() {
        let activity = parse_activity("activity A { initial -> final; }", "t.ad").unwrap();
        assert_eq!(
            print_activity(&activity),
            "activity A {\n  initial -> final;\n}\n"
        );
    }

    #[test]
    fn guard_printing_is_parenthesis_minimal() {
        let cases = [
            "p.a == 1 && p.b == 2 || p.c == 3",
            "(p.a == 1 || p.b == 2) && p.c == 3",
            "p.a == 1 && (p.b == 2 || p.c == 3)",
            "p.a == 1 || (p.b == 2 || p.c == 3)",
            "p.name == \"Ann\" && p.age >= -1",
        ];
        for case in cases {
            let guard = parse_guard(case).unwrap();
            let printed = print_guard(&guard);
            assert_eq!(printed, case, "canonical text for {case}");
            let mut reparsed = parse_guard(&printed).unwrap();
            let mut original = guard;
            reparsed.strip_spans();
            original.strip_spans();
            assert_eq!(reparsed, original);
        }
    }

    #[test]
    fn redundant_parens_normalize_away() {
        let guard = parse_guard("((p.a == 1)) && ((p.b == 2) || (p.c == 3))").unwrap();
        assert_eq!(print_guard(&guard), "p.a == 1 && (p.b == 2 || p.c == 3)");
    }
}
