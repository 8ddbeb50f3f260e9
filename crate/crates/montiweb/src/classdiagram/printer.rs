//! Canonical pretty-printer for class diagrams.
//!
//! Output is normalized: classes first, then enums, then relations,
//! 2-space indentation, one declaration per line. Printed text
//! re-parses to a structurally equal AST.

use std::fmt::Write;

use super::ast::*;

pub fn print_classdiagram(diagram: &ClassDiagram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "classdiagram {} {{", diagram.name);
    for class in &diagram.classes {
        let _ = writeln!(out, "  class {} {{", class.name);
        for attr in &class.attributes {
            let _ = writeln!(out, "    {} {};", attr.type_name, attr.name);
        }
        out.push_str("  }\n");
    }
    for en in &diagram.enums {
        let lits: Vec<&str> = en.literals.iter().map(|l| l.name.as_str()).collect();
        let _ = writeln!(out, "  enum {} {{{};}}", en.name, lits.join(", "));
    }
    for rel in &diagram.relations {
        out.push_str("  ");
        out.push_str(rel.kind.keyword());
        out.push(' ');
        out.push_str(&rel.source_class);
        if let Some(role) = &rel.source_role {
            let _ = write!(out, " ({role})");
        }
        out.push_str(if rel.directed { " ->" } else { " --" });
        if let Some(role) = &rel.target_role {
            let _ = write!(out, " ({role})");
        }
        out.push(' ');
        out.push_str(&rel.target_class);
        out.push_str(&cardinality_suffix(&rel.target_cardinality));
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

/// The bracket part of a relation, empty for the implicit [1,1].
pub fn cardinality_suffix(card: &Cardinality) -> String {
    match (card.min, card.max) {
        (1, CardinalityMax::Bounded(1)) => String::new(),
        (0, CardinalityMax::Unbounded) => " [*]".to_string(),
        (n, CardinalityMax::Bounded(m)) if n == m => format!(" [{n}]"),
        (n, CardinalityMax::Bounded(m)) => format!(" [{n}..{m}]"),
        (n, CardinalityMax::Unbounded) => format!(" [{n}..*]"),
    }
}
