//! HTML rendering for views. Pages are self-contained scaffolds: one file
//! per named editor or display view, styled by a shared stylesheet, with
//! every constraint mirrored as machine-readable markup.

use serde_json::json;

use crate::classdiagram::{CardinalityMax, RelationKind};
use crate::classviews::ViewModifier;
use crate::linker::{
    AttrType, BaseType, FieldBinding, RelationSymbol, ResolvedElement, ResolvedField,
    ResolvedText, SymbolTable, ViewSymbol,
};
use crate::runtime::{ObjectId, ObjectStore, Value};

/// Widget chosen for a rendered view element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidgetKind {
    TextInput,
    NumberInput,
    DateInput,
    EnumSelect,
    SubForm,
    RefPicker,
    EmailImage,
    ReadOnlyText,
    StaticTextBlock,
    CaptchaBox,
}

impl WidgetKind {
    pub fn name(self) -> &'static str {
        match self {
            WidgetKind::TextInput => "TextInput",
            WidgetKind::NumberInput => "NumberInput",
            WidgetKind::DateInput => "DateInput",
            WidgetKind::EnumSelect => "EnumSelect",
            WidgetKind::SubForm => "SubForm",
            WidgetKind::RefPicker => "RefPicker",
            WidgetKind::EmailImage => "EmailImage",
            WidgetKind::ReadOnlyText => "ReadOnlyText",
            WidgetKind::StaticTextBlock => "StaticTextBlock",
            WidgetKind::CaptchaBox => "CaptchaBox",
        }
    }
}

/// Summary of one rendered field: which widget it became and which
/// validation constraints were attached client-side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldWidget {
    pub attribute: String,
    pub kind: WidgetKind,
    pub required: bool,
    pub min_length: Option<i64>,
    pub max_length: Option<i64>,
}

/// An object to render values from: the store plus the subject's id.
pub type Subject<'a> = (&'a ObjectStore, ObjectId);

pub(crate) fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            other => out.push(other),
        }
    }
    out
}

/// Placeholder shown on display pages generated without object data.
fn sample_value(table: &SymbolTable, attribute: &str, ty: &AttrType) -> String {
    match ty {
        AttrType::Base(BaseType::MWString) => format!("Sample {attribute}"),
        AttrType::Base(BaseType::Email) => format!("{attribute}@example.org"),
        AttrType::Base(BaseType::Number) => "42".to_string(),
        AttrType::Base(BaseType::MWDate) => "2009-06-15".to_string(),
        AttrType::Enum(name) => table
            .enums
            .get(name)
            .and_then(|e| e.literals.first())
            .cloned()
            .unwrap_or_default(),
    }
}

/// Label used when an object is listed by reference: its first MWString
/// attribute value, or the object id when none is set.
fn object_label(table: &SymbolTable, store: &ObjectStore, id: ObjectId) -> String {
    if let Some(record) = store.object(id) {
        if let Some(class) = table.classes.get(&record.class) {
            for (name, ty) in &class.attributes {
                if *ty == AttrType::Base(BaseType::MWString) {
                    if let Some(Value::Str(s)) = record.fields.get(name) {
                        return s.clone();
                    }
                    break;
                }
            }
        }
    }
    format!("#{}", id.as_u64())
}

fn value_text(table: &SymbolTable, store: &ObjectStore, value: &Value) -> String {
    match value {
        Value::Str(s) => s.clone(),
        Value::Num(n) => n.to_string(),
        Value::Date(d) => d.format("%Y-%m-%d").to_string(),
        Value::EnumVal { literal, .. } => literal.clone(),
        Value::Ref(id) => object_label(table, store, *id),
        Value::RefList(ids) if ids.is_empty() => "(none)".to_string(),
        Value::RefList(ids) => ids
            .iter()
            .map(|id| object_label(table, store, *id))
            .collect::<Vec<_>>()
            .join(", "),
        Value::Absent => "(none)".to_string(),
    }
}

fn subject_value<'a>(subject: Option<Subject<'a>>, attribute: &str) -> Option<&'a Value> {
    let (store, id) = subject?;
    store.object(id)?.fields.get(attribute)
}

/// Compact JSON mirror of the constraints a field enforces, attached as a
/// data attribute so client code and server validation agree rule by rule.
fn constraint_annotation(
    required: bool,
    length: Option<(Option<i64>, Option<i64>)>,
    captcha: bool,
) -> Option<String> {
    let mut doc = serde_json::Map::new();
    if captcha {
        doc.insert("captcha".into(), json!(true));
    }
    if let Some((min, max)) = length {
        let mut bounds = serde_json::Map::new();
        if let Some(min) = min {
            bounds.insert("min".into(), json!(min));
        }
        if let Some(max) = max {
            bounds.insert("max".into(), json!(max));
        }
        doc.insert("length".into(), json!(bounds));
    }
    if required {
        doc.insert("required".into(), json!(true));
    }
    if doc.is_empty() {
        None
    } else {
        Some(serde_json::to_string(&doc).expect("constraint JSON"))
    }
}

/// Input attributes shared by every editor widget: name, constraint
/// attributes, and the constraint annotation.
fn input_attrs(
    name: &str,
    required: bool,
    length: Option<(Option<i64>, Option<i64>)>,
    captcha: bool,
) -> String {
    let mut attrs = format!(" id=\"f-{name}\" name=\"{name}\"", name = escape_html(name));
    if required {
        attrs.push_str(" required");
    }
    if let Some((min, max)) = length {
        if let Some(min) = min {
            attrs.push_str(&format!(" minlength=\"{min}\""));
        }
        if let Some(max) = max {
            attrs.push_str(&format!(" maxlength=\"{max}\""));
        }
    }
    if let Some(doc) = constraint_annotation(required, length, captcha) {
        attrs.push_str(&format!(" data-mw-constraints='{doc}'"));
    }
    attrs
}

fn labelled(name: &str, control: &str) -> String {
    format!(
        "<div class=\"mw-field\" data-field=\"{n}\">\n<label for=\"f-{n}\">{n}</label>\n{control}\n</div>\n",
        n = escape_html(name),
    )
}

fn read_only(name: &str, shown: &str) -> String {
    format!(
        "<div class=\"mw-field mw-readonly\" data-field=\"{n}\">\n<span class=\"mw-label\">{n}</span>\n{shown}\n</div>\n",
        n = escape_html(name),
    )
}

/// Renders a value as an inline SVG text image. Every character is
/// numeric-entity encoded, so the raw value never appears as a substring
/// of the page source.
fn svg_text_image(value: &str, aria_label: Option<&str>) -> String {
    let chars: usize = value.chars().count();
    let width = 4 + 8 * chars.max(1);
    let mut text = String::new();
    for ch in value.chars() {
        text.push_str(&format!("&#{};", ch as u32));
    }
    let aria = match aria_label {
        Some(label) => format!(" aria-label=\"{}\"", escape_html(label)),
        None => String::new(),
    };
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" class=\"mw-asimage\" role=\"img\"{aria} width=\"{width}\" height=\"20\"><text x=\"2\" y=\"15\">{text}</text></svg>"
    )
}

fn attribute_editor(
    table: &SymbolTable,
    name: &str,
    ty: &AttrType,
    attrs: &str,
    current: Option<&Value>,
) -> (WidgetKind, String) {
    let value_attr = |v: Option<&Value>| -> String {
        match v {
            Some(Value::Str(s)) => format!(" value=\"{}\"", escape_html(s)),
            Some(Value::Num(n)) => format!(" value=\"{n}\""),
            Some(Value::Date(d)) => format!(" value=\"{}\"", d.format("%Y-%m-%d")),
            _ => String::new(),
        }
    };
    match ty {
        AttrType::Base(base) => {
            let (kind, input_type) = match base {
                BaseType::MWString => (WidgetKind::TextInput, "text"),
                BaseType::Email => (WidgetKind::TextInput, "email"),
                BaseType::Number => (WidgetKind::NumberInput, "number"),
                BaseType::MWDate => (WidgetKind::DateInput, "date"),
            };
            let control = format!(
                "<input type=\"{input_type}\"{attrs}{value}>",
                value = value_attr(current),
            );
            (kind, labelled(name, &control))
        }
        AttrType::Enum(enum_name) => {
            let selected = match current {
                Some(Value::EnumVal { literal, .. }) => Some(literal.as_str()),
                _ => None,
            };
            let mut options = String::from("<option value=\"\"></option>");
            if let Some(en) = table.enums.get(enum_name) {
                for literal in &en.literals {
                    let mark = if Some(literal.as_str()) == selected {
                        " selected"
                    } else {
                        ""
                    };
                    options.push_str(&format!(
                        "<option value=\"{l}\"{mark}>{l}</option>",
                        l = escape_html(literal),
                    ));
                }
            }
            let control = format!("<select{attrs}>{options}</select>");
            (WidgetKind::EnumSelect, labelled(name, &control))
        }
    }
}

fn role_editor(table: &SymbolTable, relation: &RelationSymbol) -> (WidgetKind, String) {
    let max_text = match relation.cardinality.max {
        CardinalityMax::Bounded(m) => m.to_string(),
        CardinalityMax::Unbounded => "unbounded".to_string(),
    };
    if relation.kind == RelationKind::Composition {
        let role = escape_html(&relation.role);
        let mut item = String::new();
        if let Some(target) = table.classes.get(&relation.target_class) {
            for (attr, ty) in &target.attributes {
                let attrs = format!(
                    " name=\"{role}[].{attr}\"",
                    attr = escape_html(attr),
                );
                let control = match ty {
                    AttrType::Base(BaseType::MWString) => {
                        format!("<input type=\"text\"{attrs}>")
                    }
                    AttrType::Base(BaseType::Email) => {
                        format!("<input type=\"email\"{attrs}>")
                    }
                    AttrType::Base(BaseType::Number) => {
                        format!("<input type=\"number\"{attrs}>")
                    }
                    AttrType::Base(BaseType::MWDate) => {
                        format!("<input type=\"date\"{attrs}>")
                    }
                    AttrType::Enum(enum_name) => {
                        let mut options = String::from("<option value=\"\"></option>");
                        if let Some(en) = table.enums.get(enum_name) {
                            for literal in &en.literals {
                                options.push_str(&format!(
                                    "<option value=\"{l}\">{l}</option>",
                                    l = escape_html(literal),
                                ));
                            }
                        }
                        format!("<select{attrs}>{options}</select>")
                    }
                };
                item.push_str(&format!(
                    "<span class=\"mw-subfield\"><label>{attr}</label>{control}</span>",
                    attr = escape_html(attr),
                ));
            }
        }
        let fragment = format!(
            "<fieldset class=\"mw-field mw-subform\" data-field=\"{role}\" data-target=\"{target}\" data-min=\"{min}\" data-max=\"{max}\">\n\
             <legend>{role}</legend>\n\
             <div class=\"mw-items\"></div>\n\
             <template class=\"mw-item-template\"><div class=\"mw-item\">{item}<button type=\"button\" class=\"mw-remove\">Remove</button></div></template>\n\
             <button type=\"button\" class=\"mw-add\">Add {target}</button>\n\
             </fieldset>\n",
            target = escape_html(&relation.target_class),
            min = relation.cardinality.min,
            max = max_text,
        );
        (WidgetKind::SubForm, fragment)
    } else {
        let label_attr = table
            .classes
            .get(&relation.target_class)
            .and_then(|c| {
                c.attributes
                    .iter()
                    .find(|(_, ty)| **ty == AttrType::Base(BaseType::MWString))
            })
            .map(|(name, _)| name.as_str())
            .unwrap_or("id");
        let multiple = if relation.cardinality.max == CardinalityMax::Bounded(1) {
            ""
        } else {
            " multiple"
        };
        let control = format!(
            "<select class=\"mw-refpicker\" id=\"f-{role}\" name=\"{role}\" data-target=\"{target}\" data-label=\"{label}\" data-min=\"{min}\" data-max=\"{max}\"{multiple}></select>",
            role = escape_html(&relation.role),
            target = escape_html(&relation.target_class),
            label = escape_html(label_attr),
            min = relation.cardinality.min,
            max = max_text,
        );
        let fragment = format!(
            "<div class=\"mw-field\" data-field=\"{role}\">\n<label for=\"f-{role}\">{role}</label>\n{control}\n</div>\n",
            role = escape_html(&relation.role),
        );
        (WidgetKind::RefPicker, fragment)
    }
}

/// Renders one resolved field in its effective mode and reports which
/// widget was chosen. `subject` supplies live values; without it, display
/// fields show deterministic sample values and editors start blank.
pub fn render_field_fragment(
    table: &SymbolTable,
    field: &ResolvedField,
    subject: Option<Subject<'_>>,
) -> (FieldWidget, String) {
    let required = field.annotations.iter().any(|a| a.name == "Required");
    let length = field
        .annotations
        .iter()
        .rev()
        .find(|a| a.name == "Length")
        .map(|a| (a.int_arg("min"), a.int_arg("max")));
    let as_image = field
        .annotations
        .iter()
        .rev()
        .find(|a| a.name == "AsImage")
        .map(|a| a.bool_arg("alt").unwrap_or(true));

    let mut widget = FieldWidget {
        attribute: field.name.clone(),
        kind: WidgetKind::ReadOnlyText,
        required,
        min_length: length.and_then(|(min, _)| min),
        max_length: length.and_then(|(_, max)| max),
    };

    let fragment = match (&field.binding, field.mode) {
        (FieldBinding::Attribute(ty), ViewModifier::Editor) => {
            let attrs = input_attrs(&field.name, required, length, false);
            let current = subject_value(subject, &field.name);
            let (kind, fragment) = attribute_editor(table, &field.name, ty, &attrs, current);
            widget.kind = kind;
            fragment
        }
        (FieldBinding::Attribute(ty), _) => {
            let shown = match subject_value(subject, &field.name) {
                Some(value) if !value.is_absent() =>

                    value_text(table, subject.expect("subject present").0, value),
                Some(_) => "(none)".to_string(),
                None => sample_value(table, &field.name, ty),
            };
            if let Some(alt) = as_image {
                widget.kind = WidgetKind::EmailImage;
                let aria = alt.then_some(field.name.as_str());
                read_only(&field.name, &svg_text_image(&shown, aria))
            } else {
                widget.kind = WidgetKind::ReadOnlyText;
                read_only(
                    &field.name,
                    &format!("<span class=\"mw-value\">{}</span>", escape_html(&shown)),
                )
            }
        }
        (FieldBinding::Role(relation), ViewModifier::Editor) => {
            let (kind, fragment) = role_editor(table, relation);
            widget.kind = kind;
            fragment
        }
        (FieldBinding::Role(_), _) => {
            let shown = match subject_value(subject, &field.name) {
                Some(value) => value_text(table, subject.expect("subject present").0, value),
                None => "(none)".to_string(),
            };
            widget.kind = WidgetKind::ReadOnlyText;
            read_only(
                &field.name,
                &format!("<span class=\"mw-value\">{}</span>", escape_html(&shown)),
            )
        }
    };
    (widget, fragment)
}

fn render_text_fragment(text: &ResolvedText) -> String {
    let class = if text.warning {
        "mw-text mw-warning"
    } else {
        "mw-text"
    };
    format!(
        "<p class=\"{class}\">{}</p>\n",
        escape_html(text.text.trim()),
    )
}

fn render_captcha_fragment() -> String {
    let attrs = input_attrs("captcha", true, None, true);
    format!(
        "<div class=\"mw-field mw-captcha\" data-field=\"captcha\">\n<label for=\"f-captcha\">captcha</label>\n<input type=\"text\"{attrs}>\n</div>\n"
    )
}

/// Renders a full page for one named view. Editor views become a single
/// form with a submit control; display views a read-only article. Element
/// modes are honored individually, so an override stays an override.
pub fn render_view_page(
    table: &SymbolTable,
    view: &ViewSymbol,
    subject: Option<Subject<'_>>,
) -> String {
    let qname = view.qualified_name();
    let mode_class = match view.modifier {
        ViewModifier::Editor => "mw-editor",
        _ => "mw-display",
    };

    let mut body = String::new();
    for element in &view.elements {
        match element {
            ResolvedElement::Field(field) => {
                let (_, fragment) = render_field_fragment(table, field, subject);
                body.push_str(&fragment);
            }
            ResolvedElement::Text(text) => body.push_str(&render_text_fragment(text)),
        }
    }

    let content = if view.modifier == ViewModifier::Editor {
        let mut form = String::from("<form class=\"mw-form\" method=\"post\" action=\"#\">\n");
        form.push_str(&body);
        if view.captcha {
            form.push_str(&render_captcha_fragment());
        }
        form.push_str("<button type=\"submit\" class=\"mw-submit\">Submit</button>\n</form>\n");
        form
    } else {
        body
    };

    format!(
        "<!doctype html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n<title>{qname}</title>\n<link rel=\"stylesheet\" href=\"../static/mw.css\">\n</head>\n<body>\n<main class=\"mw-view {mode_class}\" data-view=\"{qname}\">\n<h1>{qname}</h1>\n{content}</main>\n</body>\n</html>\n",
        qname = escape_html(&qname),
    )
}

/// Shared stylesheet emitted once per site.
pub const STYLESHEET: &str = "\
:root { color-scheme: light dark; }
body { font-family: system-ui, sans-serif; line-height: 1.5; margin: 2rem auto; max-width: 42rem; padding: 0 1rem; }
.mw-view h1 { border-bottom: 1px solid #8885; font-size: 1.3rem; padding-bottom: 0.5rem; }
.mw-field { align-items: baseline; display: flex; flex-wrap: wrap; gap: 0.75rem; margin: 0.9rem 0; }
.mw-field > label, .mw-label { font-weight: 600; min-width: 8rem; }
.mw-field input, .mw-field select { font: inherit; padding: 0.25rem 0.4rem; }
.mw-readonly .mw-value { padding: 0.25rem 0; }
.mw-asimage { vertical-align: middle; }
.mw-asimage text { fill: currentColor; font: 13px monospace; }
.mw-text { margin: 1rem 0; }
.mw-warning { background: #fbe9e7; border-left: 4px solid #c62828; color: #7f1d1d; padding: 0.6rem 0.8rem; }
.mw-captcha { background: #8881; border: 1px dashed #888; padding: 0.6rem; }
.mw-subform { border: 1px solid #8886; padding: 0.6rem 0.8rem; }
.mw-subform legend { font-weight: 600; padding: 0 0.3rem; }
.mw-subfield { display: inline-flex; flex-direction: column; gap: 0.15rem; margin-right: 0.6rem; }
.mw-item { border-bottom: 1px dotted #8886; margin: 0.4rem 0; padding-bottom: 0.4rem; }
.mw-add, .mw-remove { font: inherit; margin-top: 0.3rem; }
.mw-submit { font: inherit; margin-top: 1.2rem; padding: 0.4rem 1.4rem; }
";

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::activity::parse_activity;
    use crate::classdiagram::parse_classdiagram;
    use crate::classviews::parse_classviews;
    use crate::linker::{check_project, LinkedModel, ProjectAsts};
    use crate::runtime::{ObjectSpec, ObjectStore};

    fn carsharing() -> LinkedModel {
        let model = check_project(ProjectAsts {
            classdiagrams: vec![parse_classdiagram(
                include_str!("../../fixtures/carsharing/Carsharing.cd"),
                "Carsharing.cd",
            )
            .unwrap()],
            classviews: vec![parse_classviews(
                include_str!("../../fixtures/carsharing/Person.cv"),
                "Person.cv",
            )
            .unwrap()],
            activities: vec![parse_activity(
                include_str!("../../fixtures/carsharing_fixed/UserRegistration.ad"),
                "UserRegistration.ad",
            )
            .unwrap()],
        });
        assert!(!model.has_errors());
        model
    }

    fn field<'m>(model: &'m LinkedModel, view: &str, name: &str) -> &'m ResolvedField {
        let view = model.table.view("Person", view).unwrap();
        view.elements
            .iter()
            .find_map(|e| match e {
                ResolvedElement::Field(f) if f.name == name => Some(f),
                _ => None,
            })
            .unwrap()
    }

    #[test]
    fn editor_widgets_match_attribute_types() {
        let model = carsharing();
        let (name, frag) =
            render_field_fragment(&model.table, field(&model, "registration", "name"), None);
        assert_eq!(name.kind, WidgetKind::TextInput);
        assert!(name.required);
        assert_eq!((name.min_length, name.max_length), (Some(3), Some(30)));
        assert!(frag.contains("type=\"text\""));
        assert!(frag.contains(" required"));
        assert!(frag.contains("minlength=\"3\""));
        assert!(frag.contains("maxlength=\"30\""));
        assert!(frag.contains(
            "data-mw-constraints='{\"length\":{\"max\":30,\"min\":3},\"required\":true}'"
        ));

        let (email, frag) =
            render_field_fragment(&model.table, field(&model, "registration", "email"), None);
        assert_eq!(email.kind, WidgetKind::TextInput);
        assert!(!email.required);
        assert!(frag.contains("type=\"email\""));
        assert!(!frag.contains("data-mw-constraints"));

        let (age, frag) =
            render_field_fragment(&model.table, field(&model, "registration", "age"), None);
        assert_eq!(age.kind, WidgetKind::NumberInput);
        assert!(frag.contains("type=\"number\""));
        assert!(frag.contains("data-mw-constraints='{\"required\":true}'"));
    }

    #[test]
    fn composition_role_becomes_a_subform() {
        let model = carsharing();
        let (cars, frag) =
            render_field_fragment(&model.table, field(&model, "registration", "cars"), None);
        assert_eq!(cars.kind, WidgetKind::SubForm);
        assert!(frag.contains("data-field=\"cars\""));
        assert!(frag.contains("data-target=\"Car\""));
        assert!(frag.contains("data-min=\"0\""));
        assert!(frag.contains("data-max=\"unbounded\""));
        assert!(frag.contains("class=\"mw-add\""));
        assert!(frag.contains("class=\"mw-remove\""));
        let brand = frag.find("name=\"cars[].brand\"").unwrap();
        let seats = frag.find("name=\"cars[].numSeats\"").unwrap();
        let year = frag.find("name=\"cars[].constYear\"").unwrap();
        assert!(brand < seats && seats < year);
        assert!(frag.contains(
            "<option value=\"AUDI\">AUDI</option><option value=\"BMW\">BMW</option><option value=\"VW\">VW</option>"
        ));
    }

    #[test]
    fn enum_editor_renders_literals_in_declaration_order() {
        let cd = parse_classdiagram(
            "classdiagram M { enum Color {RED, GREEN, BLUE;} class Shirt { Color color; } }",
            "m.cd",
        )
        .unwrap();
        let cv = parse_classviews("Shirt { editor pick { color; } }", "m.cv").unwrap();
        let model = check_project(ProjectAsts {
            classdiagrams: vec![cd],
            classviews: vec![cv],
            ..ProjectAsts::default()
        });
        let (widget, frag) =
            render_field_fragment(&model.table, field_of(&model, "Shirt", "pick", "color"), None);
        assert_eq!(widget.kind, WidgetKind::EnumSelect);
        let red = frag.find(">RED<").unwrap();
        let green = frag.find(">GREEN<").unwrap();
        let blue = frag.find(">BLUE<").unwrap();
        assert!(red < green && green < blue);
    }

    fn field_of<'m>(
        model: &'m LinkedModel,
        class: &str,
        view: &str,
        name: &str,
    ) -> &'m ResolvedField {
        model
            .table
            .view(class, view)
            .unwrap()
            .elements
            .iter()
            .find_map(|e| match e {
                ResolvedElement::Field(f) if f.name == name => Some(f),
                _ => None,
            })
            .unwrap()
    }

    #[test]
    fn association_role_becomes_a_refpicker() {
        let cd = parse_classdiagram(
            "classdiagram M {
               class Person { MWString name; }
               class Car { MWString plate; }
               association Person -> (likes) Car [0..3];
             }",
            "m.cd",
        )
        .unwrap();
        let cv = parse_classviews("Person { editor prefs { likes; } }", "m.cv").unwrap();
        let model = check_project(ProjectAsts {
            classdiagrams: vec![cd],
            classviews: vec![cv],
            ..ProjectAsts::default()
        });
        let (widget, frag) =
            render_field_fragment(&model.table, field_of(&model, "Person", "prefs", "likes"), None);
        assert_eq!(widget.kind, WidgetKind::RefPicker);
        assert!(frag.contains("class=\"mw-refpicker\""));
        assert!(frag.contains("data-target=\"Car\""));
        assert!(frag.contains("data-label=\"plate\""));
        assert!(frag.contains("data-max=\"3\""));
        assert!(frag.contains(" multiple"));
    }

    #[test]
    fn as_image_encodes_the_value_and_omits_alt_when_disabled() {
        let model = carsharing();
        let (widget, frag) = render_field_fragment(
            &model.table,
            field(&model, "protectedMail", "email"),
            None,
        );
        assert_eq!(widget.kind, WidgetKind::EmailImage);
        assert!(frag.contains("mw-asimage"));
        assert!(!frag.contains("email@example.org"));
        assert!(!frag.contains("aria-label"));
        assert!(frag.contains("&#101;&#109;&#97;&#105;&#108;&#64;"));
    }

    #[test]
    fn as_image_with_alt_keeps_the_attribute_name_only() {
        let cd = parse_classdiagram(
            "classdiagram M { class A { Email mail; } }",
            "m.cd",
        )
        .unwrap();
        let cv = parse_classviews(
            "A { display card { @AsImage mail; } }",
            "m.cv",
        )
        .unwrap();
        let model = check_project(ProjectAsts {
            classdiagrams: vec![cd],
            classviews: vec![cv],
            ..ProjectAsts::default()
        });
        let (_, frag) =
            render_field_fragment(&model.table, field_of(&model, "A", "card", "mail"), None);
        assert!(frag.contains("aria-label=\"mail\""));
        assert!(!frag.contains("mail@example.org"));
    }

    #[test]
    fn display_fields_render_subject_values() {
        let model = carsharing();
        let mut store = ObjectStore::new();
        let car = ObjectSpec::with_values(BTreeMap::from([
            (
                "brand".to_string(),
                Value::EnumVal {
                    enum_name: "Brand".into(),
                    literal: "VW".into(),
                },
            ),
            ("numSeats".to_string(), Value::Num(5)),
        ]));
        let mut spec = ObjectSpec::with_values(BTreeMap::from([
            ("name".to_string(), Value::Str("Ann".into())),
            ("email".to_string(), Value::Str("ann@example.com".into())),
            ("age".to_string(), Value::Num(30)),
        ]));
        spec.children.insert("cars".into(), vec![car]);
        let id = store.create_object(&model.table, "Person", &spec).unwrap();

        let page = render_view_page(
            &model.table,
            model.table.view("Person", "welcome").unwrap(),
            Some((&store, id)),
        );
        assert!(page.contains("Welcome to Carsharing Service"));
        assert!(page.contains(">Ann<"));
        assert!(page.contains(">30<"));
        assert!(!page.contains("ann@example.com"));
        assert!(page.contains(&svg_text_image("ann@example.com", None)));
    }

    #[test]
    fn registration_page_is_one_form_with_captcha_and_submit() {
        let model = carsharing();
        let page = render_view_page(
            &model.table,
            model.table.view("Person", "registration").unwrap(),
            None,
        );
        assert_eq!(page.matches("<form").count(), 1);
        assert!(page.contains("mw-editor"));
        assert!(page.contains("data-view=\"Person.registration\""));
        let name = page.find("name=\"name\"").unwrap();
        let email = page.find("name=\"email\"").unwrap();
        let age = page.find("name=\"age\"").unwrap();
        let cars = page.find("data-field=\"cars\"").unwrap();
        let captcha = page.find("mw-captcha").unwrap();
        let submit = page.find("type=\"submit\"").unwrap();
        assert!(name < email && email < age && age < cars && cars < captcha && captcha < submit);
    }

    #[test]
    fn welcome_page_expands_the_include_in_order() {
        let model = carsharing();
        let page = render_view_page(
            &model.table,
            model.table.view("Person", "welcome").unwrap(),
            None,
        );
        assert!(page.contains("mw-display"));
        assert!(!page.contains("<form"));
        let text = page.find("Welcome to Carsharing Service").unwrap();
        let name = page.find("data-field=\"name\"").unwrap();
        let email = page.find("data-field=\"email\"").unwrap();
        let cars = page.find("data-field=\"cars\"").unwrap();
        let age = page.find("data-field=\"age\"").unwrap();
        assert!(text < name && name < email && email < cars && cars < age);
        assert!(page.contains("Sample name"));
        assert!(!page.contains("email@example.org"));
    }

    #[test]
    fn error_page_is_a_single_warning_block() {
        let model = carsharing();
        let page = render_view_page(
            &model.table,
            model.table.view("Person", "error").unwrap(),
            None,
        );
        assert!(page.contains("<p class=\"mw-text mw-warning\">You are not old enough!</p>"));
        assert!(!page.contains("mw-field"));
    }

    #[test]
    fn html_in_model_text_is_escaped() {
        let cd = parse_classdiagram("classdiagram M { class A { MWString s; } }", "m.cd").unwrap();
        let cv = parse_classviews(
            "A { display d { text {a <b> & \"c\"} } }",
            "m.cv",
        )
        .unwrap();
        let model = check_project(ProjectAsts {
            classdiagrams: vec![cd],
            classviews: vec![cv],
            ..ProjectAsts::default()
        });
        let page = render_view_page(&model.table, model.table.view("A", "d").unwrap(), None);
        assert!(page.contains("a &lt;b&gt; &amp; &quot;c&quot;"));
        assert!(!page.contains("<b>"));
    }

    #[test]
    fn element_mode_override_survives_inside_an_editor_form() {
        let cd = parse_classdiagram(
            "classdiagram M { class A { MWString s; Number n; } }",
            "m.cd",
        )
        .unwrap();
        let cv = parse_classviews("A { editor e { s; display n; } }", "m.cv").unwrap();
        let model = check_project(ProjectAsts {
            classdiagrams: vec![cd],
            classviews: vec![cv],
            ..ProjectAsts::default()
        });
        let page = render_view_page(&model.table, model.table.view("A", "e").unwrap(), None);
        assert!(page.contains("name=\"s\""));
        assert!(page.contains("mw-readonly"));
        assert!(!page.contains("name=\"n\""));
    }
}
