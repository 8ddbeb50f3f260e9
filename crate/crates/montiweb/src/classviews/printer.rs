//! Canonical pretty-printer for classviews files.
//!
//! Annotations print one per line above their target; the attributes
//! block comes first, then the views in declaration order. Static text
//! interiors are reproduced byte-exactly.

use std::fmt::Write;

use crate::annotation::Annotation;

use super::ast::*;

pub fn print_classviews(file: &ClassviewsFile) -> String {
    let mut out = String::new();
    print_annotations(&mut out, &file.annotations, "");
    let _ = writeln!(out, "{} {{", file.class_name);
    if let Some(block) = &file.attributes_block {
        out.push_str("  attributes {\n");
        for entry in &block.entries {
            print_annotations(&mut out, &entry.annotations, "    ");
            let _ = writeln!(out, "    {};", entry.attribute_name);
        }
        out.push_str("  }\n");
    }
    for view in &file.views {
        print_annotations(&mut out, &view.annotations, "  ");
        out.push_str("  ");
        out.push_str(view.modifier.keyword());
        if let Some(name) = &view.name {
            out.push(' ');
            out.push_str(name);
        }
        out.push_str(" {\n");
        for element in &view.elements {
            print_element(&mut out, element);
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn print_element(out: &mut String, element: &ViewElement) {
    match element {
        ViewElement::AttributeRef(el) => {
            print_annotations(out, &el.annotations, "    ");
            out.push_str("    ");
            if let Some(modifier) = el.modifier_override {
                out.push_str(modifier.keyword());
                out.push(' ');
            }
            out.push_str(&el.name);
            out.push_str(";\n");
        }
        ViewElement::StaticText(el) => {
            print_annotations(out, &el.annotations, "    ");
            let _ = writeln!(out, "    text {{{}}}", el.text);
        }
        ViewElement::Include(el) => {
            let _ = writeln!(out, "    include {};", el.view_name);
        }
    }
}

fn print_annotations(out: &mut String, annotations: &[Annotation], indent: &str) {
    for ann in annotations {
        let _ = writeln!(out, "{indent}{ann}");
    }
}
