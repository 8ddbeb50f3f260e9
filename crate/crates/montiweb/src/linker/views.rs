//! Resolution of classviews against the symbol table.
//!
//! Each file binds to its class, every element binds to an attribute or
//! relation role, includes are expanded inline, and annotation placement
//! is checked. Registered view symbols carry fully expanded elements so
//! that runtime and codegen never look at raw classviews ASTs.

use std::collections::BTreeMap;

use crate::annotation::{Annotation, AnnotationValue};
use crate::classviews::{ClassviewsFile, ViewDef, ViewElement, ViewModifier};
use crate::diag::{codes, Diagnostic};
use crate::span::SourceSpan;

use super::symbols::{
    AttrType, BaseType, ClassSymbol, FieldBinding, ResolvedElement, ResolvedField, ResolvedText,
    SymbolTable, ViewSymbol,
};

/// Binds every classviews file to its class and registers the named views.
/// The class and enum entries of the table are never modified.
pub fn resolve_classviews(files: &[ClassviewsFile], table: &mut SymbolTable) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut seen: BTreeMap<&str, &SourceSpan> = BTreeMap::new();

    let SymbolTable {
        classes,
        enums: _,
        views,
    } = table;

    for file in files {
        if let Some(first) = seen.get(file.class_name.as_str()) {
            diags.push(
                Diagnostic::error(
                    codes::DUPLICATE_CLASSVIEWS_FILE,
                    format!(
                        "a classviews file for `{}` was already given",
                        file.class_name
                    ),
                    file.span.clone(),
                )
                .with_related((*first).clone(), "first file here"),
            );
            continue;
        }
        seen.insert(&file.class_name, &file.span);

        let Some(class) = classes.get(&file.class_name) else {
            diags.push(Diagnostic::error(
                codes::UNKNOWN_CLASS_FOR_VIEWS,
                format!("unknown class `{}` for classviews", file.class_name),
                file.span.clone(),
            ));
            continue;
        };

        check_annotations(&file.annotations, AnnTarget::File, &mut diags);

        let mut block_annotations: BTreeMap<String, Vec<Annotation>> = BTreeMap::new();
        if let Some(block) = &file.attributes_block {
            for entry in &block.entries {
                let Some(binding) =
                    lookup_binding(class, &entry.attribute_name, &entry.span, &mut diags)
                else {
                    continue;
                };
                check_annotations(&entry.annotations, AnnTarget::Field(&binding), &mut diags);
                block_annotations
                    .entry(entry.attribute_name.clone())
                    .or_default()
                    .extend(entry.annotations.iter().cloned());
            }
        }

        let ctx = FileCtx {
            class,
            views_by_name: file
                .views
                .iter()
                .filter_map(|v| v.name.as_deref().map(|n| (n, v)))
                .collect(),
            block_annotations,
        };

        for view in &file.views {
            check_annotations(&view.annotations, AnnTarget::View, &mut diags);
            let captcha = view.annotations.iter().any(|a| a.name == "Captcha");

            let context = if view.modifier == ViewModifier::Field {
                // A field view renders in the mode of whichever view
                // includes it; standalone it stays read-only.
                ViewModifier::Display
            } else {
                view.modifier
            };
            let mut stack = vec![(view.name.clone().unwrap_or_default(), view.span.clone())];
            let mut elements = Vec::new();
            ctx.expand(view, context, &mut stack, &mut elements, &mut diags);

            match &view.name {
                Some(name) => {
                    views.insert(
                        (file.class_name.clone(), name.clone()),
                        ViewSymbol {
                            class_name: file.class_name.clone(),
                            name: name.clone(),
                            modifier: view.modifier,
                            captcha,
                            elements,
                            span: view.span.clone(),
                        },
                    );
                }
                None => diags.push(Diagnostic::warning(
                    codes::ANONYMOUS_VIEW,
                    "anonymous view cannot be referenced; give it a name",
                    view.span.clone(),
                )),
            }
        }
    }

    diags
}

/// Annotation placement site, used to check applicability.
enum AnnTarget<'a> {
    File,
    View,
    Field(&'a FieldBinding),
    Text,
}

/// Immutable per-file context for include expansion.
struct FileCtx<'a> {
    class: &'a ClassSymbol,
    views_by_name: BTreeMap<&'a str, &'a ViewDef>,
    /// Attribute name to its attributes-block annotations.
    block_annotations: BTreeMap<String, Vec<Annotation>>,
}

impl FileCtx<'_> {
    fn expand(
        &self,
        view: &ViewDef,
        context: ViewModifier,
        stack: &mut Vec<(String, SourceSpan)>,
        out: &mut Vec<ResolvedElement>,
        diags: &mut Vec<Diagnostic>,
    ) {
        for element in &view.elements {
            match element {
                ViewElement::AttributeRef(attr) => {
                    let Some(binding) = lookup_binding(self.class, &attr.name, &attr.span, diags)
                    else {
                        continue;
                    };
                    check_annotations(&attr.annotations, AnnTarget::Field(&binding), diags);
                    let mode = match attr.modifier_override {
                        // `field` as an override means "inherit".
                        Some(ViewModifier::Field) | None => context,
                        Some(other) => other,
                    };
                    let mut annotations = self
                        .block_annotations
                        .get(&attr.name)
                        .cloned()
                        .unwrap_or_default();
                    annotations.extend(attr.annotations.iter().cloned());
                    out.push(ResolvedElement::Field(ResolvedField {
                        name: attr.name.clone(),
                        binding,
                        mode,
                        annotations,
                        span: attr.span.clone(),
                    }));
                }
                ViewElement::StaticText(text) => {
                    check_annotations(&text.annotations, AnnTarget::Text, diags);
                    out.push(ResolvedElement::Text(ResolvedText {
                        text: text.text.clone(),
                        warning: text.annotations.iter().any(|a| a.name == "Warning"),
                        span: text.span.clone(),
                    }));
                }
                ViewElement::Include(include) => {
                    let Some(target) = self.views_by_name.get(include.view_name.as_str()).copied()
                    else {
                        diags.push(Diagnostic::error(
                            codes::UNKNOWN_INCLUDE,
                            format!("unknown include target `{}`", include.view_name),
                            include.span.clone(),
                        ));
                        continue;
                    };
                    if let Some(pos) = stack.iter().position(|(n, _)| n == &include.view_name) {
                        let chain: Vec<&str> = stack[pos..]
                            .iter()
                            .map(|(n, _)| n.as_str())
                            .chain([include.view_name.as_str()])
                            .collect();
                        let entered_at = stack
                            .get(pos + 1)
                            .map(|(_, s)| s.clone())
                            .unwrap_or_else(|| target.span.clone());
                        diags.push(
                            Diagnostic::error(
                                codes::INCLUDE_CYCLE,
                                format!("include cycle: {}", chain.join(" -> ")),
                                include.span.clone(),
                            )
                            .with_related(entered_at, "cycle entered here"),
                        );
                        continue;
                    }
                    let inner_context = if target.modifier == ViewModifier::Field {
                        context
                    } else {
                        target.modifier
                    };
                    stack.push((include.view_name.clone(), include.span.clone()));
                    self.expand(target, inner_context, stack, out, diags);
                    stack.pop();
                }
            }
        }
    }
}

fn lookup_binding(
    class: &ClassSymbol,
    name: &str,
    span: &SourceSpan,
    diags: &mut Vec<Diagnostic>,
) -> Option<FieldBinding> {
    if let Some(attr_type) = class.attributes.get(name) {
        return Some(FieldBinding::Attribute(attr_type.clone()));
    }
    if let Some(relation) = class.relation(name) {
        return Some(FieldBinding::Role(relation.clone()));
    }
    diags.push(Diagnostic::error(
        codes::UNKNOWN_ATTRIBUTE,
        format!("class `{}` has no attribute or role `{}`", class.name, name),
        span.clone(),
    ));
    None
}

fn check_annotations(annotations: &[Annotation], target: AnnTarget, diags: &mut Vec<Diagnostic>) {
    for ann in annotations {
        match ann.name.as_str() {
            "Required" => {
                expect_no_args(ann, diags);
                if !matches!(target, AnnTarget::Field(_)) {
                    misuse(ann, "applies only to attributes", diags);
                }
            }
            "Length" => match &target {
                AnnTarget::Field(binding) if is_text_binding(binding) => {
                    check_length_args(ann, diags);
                }
                AnnTarget::Field(_) => misuse(
                    ann,
                    "applies only to MWString and Email attributes",
                    diags,
                ),
                _ => misuse(ann, "applies only to attributes", diags),
            },
            "AsImage" => match &target {
                AnnTarget::Field(binding) if is_text_binding(binding) => {
                    check_as_image_args(ann, diags);
                }
                AnnTarget::Field(_) => misuse(
                    ann,
                    "applies only to MWString and Email attributes",
                    diags,
                ),
                _ => misuse(ann, "applies only to attributes", diags),
            },
            "Captcha" => {
                expect_no_args(ann, diags);
                if !matches!(target, AnnTarget::View) {
                    misuse(ann, "applies only to views", diags);
                }
            }
            "Warning" => {
                expect_no_args(ann, diags);
                if !matches!(target, AnnTarget::Text) {
                    misuse(ann, "applies only to static text", diags);
                }
            }
            _ => diags.push(Diagnostic::warning(
                codes::UNKNOWN_ANNOTATION,
                format!("unknown annotation `@{}`", ann.name),
                ann.span.clone(),
            )),
        }
    }
}

fn check_length_args(ann: &Annotation, diags: &mut Vec<Diagnostic>) {
    for (key, value) in &ann.args {
        match (key.as_str(), value) {
            ("min" | "max", AnnotationValue::Int(n)) if *n >= 0 => {}
            ("min" | "max", _) => {
                misuse(ann, "`min` and `max` must be non-negative integers", diags);
                return;
            }
            _ => {
                misuse(ann, "takes only `min` and `max`", diags);
                return;
            }
        }
    }
    match (ann.int_arg("min"), ann.int_arg("max")) {
        (Some(min), Some(max)) if min > max => misuse(ann, "`min` exceeds `max`", diags),
        (None, None) => misuse(ann, "needs `min` or `max`", diags),
        _ => {}
    }
}

fn check_as_image_args(ann: &Annotation, diags: &mut Vec<Diagnostic>) {
    for (key, value) in &ann.args {
        if key != "alt" || !matches!(value, AnnotationValue::Bool(_)) {
            misuse(ann, "takes only `alt` (true or false)", diags);
            return;
        }
    }
}

fn expect_no_args(ann: &Annotation, diags: &mut Vec<Diagnostic>) {
    if !ann.args.is_empty() {
        misuse(ann, "takes no arguments", diags);
    }
}

fn misuse(ann: &Annotation, why: &str, diags: &mut Vec<Diagnostic>) {
    diags.push(Diagnostic::error(
        codes::ANNOTATION_MISUSE,
        format!("@{} {}", ann.name, why),
        ann.span.clone(),
    ));
}

fn is_text_binding(binding: &FieldBinding) -> bool {
    matches!(
        binding,
        FieldBinding::Attribute(AttrType::Base(BaseType::MWString | BaseType::Email))
    )
}
