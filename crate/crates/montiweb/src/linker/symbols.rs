//! Symbol table built from class diagrams.
//!
//! The table anchors the linking pipeline: classviews and activities
//! resolve against it, but its class and enum entries are a function of
//! the class diagrams alone. The dependency arrows point one way.

use std::collections::BTreeMap;

use indexmap::IndexMap;

use crate::annotation::Annotation;
use crate::classdiagram::{Cardinality, ClassDiagram, RelationKind};
use crate::classviews::ViewModifier;
use crate::diag::{codes, Diagnostic};
use crate::span::SourceSpan;

/// Built-in attribute types. Everything else must name a class or enum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseType {
    MWString,
    Email,
    Number,
    MWDate,
}

impl BaseType {
    pub const ALL: [BaseType; 4] = [
        BaseType::MWString,
        BaseType::Email,
        BaseType::Number,
        BaseType::MWDate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseType::MWString => "MWString",
            BaseType::Email => "Email",
            BaseType::Number => "Number",
            BaseType::MWDate => "MWDate",
        }
    }

    pub fn from_name(name: &str) -> Option<BaseType> {
        Self::ALL.iter().copied().find(|b| b.name() == name)
    }
}

/// Resolved type of a class attribute. Attributes whose declared type is
/// another class do not appear here: they are desugared into synthetic
/// compositions so that object ownership has a single mechanism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttrType {
    Base(BaseType),
    Enum(String),
}

impl AttrType {
    pub fn describe(&self) -> String {
        match self {
            AttrType::Base(b) => b.name().to_string(),
            AttrType::Enum(name) => format!("enum {name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSymbol {
    pub kind: RelationKind,
    pub source_class: String,
    pub source_role: Option<String>,
    pub target_class: String,
    /// Field name on the source side. Defaults to the target class name
    /// with its first letter lowercased when no role is written.
    pub role: String,
    pub cardinality: Cardinality,
    /// True for compositions produced by desugaring a class-typed attribute.
    pub synthetic: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSymbol {
    pub name: String,
    /// Attribute name to resolved type, in declaration order.
    pub attributes: IndexMap<String, AttrType>,
    /// Relations with this class as source, synthetic ones first.
    pub relations: Vec<RelationSymbol>,
    pub span: SourceSpan,
}

impl ClassSymbol {
    pub fn relation(&self, role: &str) -> Option<&RelationSymbol> {
        self.relations.iter().find(|r| r.role == role)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumSymbol {
    pub name: String,
    pub literals: Vec<String>,
    pub span: SourceSpan,
}

impl EnumSymbol {
    pub fn has_literal(&self, literal: &str) -> bool {
        self.literals.iter().any(|l| l == literal)
    }
}

/// What a view element's name resolved to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldBinding {
    Attribute(AttrType),
    Role(RelationSymbol),
}

/// A view element after include expansion, with its effective mode and
/// merged annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolvedElement {
    Field(ResolvedField),
    Text(ResolvedText),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedField {
    pub name: String,
    pub binding: FieldBinding,
    /// Effective rendering mode: element override, else the mode imposed
    /// by the innermost non-field view on the include chain.
    pub mode: ViewModifier,
    /// Attributes-block annotations first, then element-local ones.
    pub annotations: Vec<Annotation>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedText {
    pub text: String,
    pub warning: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewSymbol {
    pub class_name: String,
    pub name: String,
    pub modifier: ViewModifier,
    /// True when the view carries @Captcha.
    pub captcha: bool,
    /// Elements with includes expanded inline.
    pub elements: Vec<ResolvedElement>,
    pub span: SourceSpan,
}

impl ViewSymbol {
    pub fn qualified_name(&self) -> String {
        format!("{}.{}", self.class_name, self.name)
    }

    /// Whether any element binds to an attribute or role. A view without
    /// bound fields can be shown without an object argument.
    pub fn has_bound_fields(&self) -> bool {
        self.elements
            .iter()
            .any(|e| matches!(e, ResolvedElement::Field(_)))
    }

    pub fn editable_fields(&self) -> impl Iterator<Item = &ResolvedField> {
        self.elements.iter().filter_map(|e| match e {
            ResolvedElement::Field(f) if f.mode == ViewModifier::Editor => Some(f),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    pub classes: BTreeMap<String, ClassSymbol>,
    pub enums: BTreeMap<String, EnumSymbol>,
    pub views: BTreeMap<(String, String), ViewSymbol>,
}

impl SymbolTable {
    pub fn view(&self, class: &str, view: &str) -> Option<&ViewSymbol> {
        self.views.get(&(class.to_string(), view.to_string()))
    }
}

fn default_role(target_class: &str) -> String {
    let mut chars = target_class.chars();
    match chars.next() {
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Merges all diagrams into one table, resolving attribute types against
/// the base-type registry, enums, and classes. Class-typed attributes are
/// desugared into synthetic compositions with cardinality [1,1] and the
/// attribute name as role.
pub fn build_symbol_table(diagrams: &[ClassDiagram]) -> (SymbolTable, Vec<Diagnostic>) {
    let mut table = SymbolTable::default();
    let mut diags = Vec::new();

    // Pass 1: register names so forward and cross-diagram references work.
    let mut defined: BTreeMap<String, SourceSpan> = BTreeMap::new();
    for diagram in diagrams {
        for class in &diagram.classes {
            if let Some(first) = defined.get(&class.name) {
                diags.push(duplicate_definition(&class.name, &class.span, first));
                continue;
            }
            defined.insert(class.name.clone(), class.span.clone());
            table.classes.insert(
                class.name.clone(),
                ClassSymbol {
                    name: class.name.clone(),
                    attributes: IndexMap::new(),
                    relations: Vec::new(),
                    span: class.span.clone(),
                },
            );
        }
        for en in &diagram.enums {
            if let Some(first) = defined.get(&en.name) {
                diags.push(duplicate_definition(&en.name, &en.span, first));
                continue;
            }
            defined.insert(en.name.clone(), en.span.clone());
            table.enums.insert(
                en.name.clone(),
                EnumSymbol {
                    name: en.name.clone(),
                    literals: en.literals.iter().map(|l| l.name.clone()).collect(),
                    span: en.span.clone(),
                },
            );
        }
    }

    // Pass 2: resolve attribute types; class-typed attributes become
    // synthetic compositions.
    let mut attr_spans: BTreeMap<(String, String), SourceSpan> = BTreeMap::new();
    for diagram in diagrams {
        for class in &diagram.classes {
            if table.classes.get(&class.name).map(|c| &c.span) != Some(&class.span) {
                continue; // duplicate definition, first one wins
            }
            let mut attributes = IndexMap::new();
            let mut relations = Vec::new();
            for attr in &class.attributes {
                attr_spans.insert(
                    (class.name.clone(), attr.name.clone()),
                    attr.span.clone(),
                );
                if let Some(base) = BaseType::from_name(&attr.type_name) {
                    attributes.insert(attr.name.clone(), AttrType::Base(base));
                } else if table.enums.contains_key(&attr.type_name) {
                    attributes.insert(
                        attr.name.clone(),
                        AttrType::Enum(attr.type_name.clone()),
                    );
                } else if table.classes.contains_key(&attr.type_name) {
                    relations.push(RelationSymbol {
                        kind: RelationKind::Composition,
                        source_class: class.name.clone(),
                        source_role: None,
                        target_class: attr.type_name.clone(),
                        role: attr.name.clone(),
                        cardinality: Cardinality::exactly_one(),
                        synthetic: true,
                        span: attr.span.clone(),
                    });
                } else {
                    diags.push(Diagnostic::error(
                        codes::UNKNOWN_ATTRIBUTE_TYPE,
                        format!("unknown attribute type `{}`", attr.type_name),
                        attr.span.clone(),
                    ));
                }
            }
            let symbol = table.classes.get_mut(&class.name).unwrap();
            symbol.attributes = attributes;
            symbol.relations = relations;
        }
    }

    // Pass 3: declared relations.
    for diagram in diagrams {
        for relation in &diagram.relations {
            let mut endpoints_ok = true;
            for class_name in [&relation.source_class, &relation.target_class] {
                if table.classes.contains_key(class_name) {
                    continue;
                }
                endpoints_ok = false;
                let message = if table.enums.contains_key(class_name) {
                    format!(
                        "{} `{}` is an enum, but relations connect classes",
                        relation.kind.keyword(),
                        class_name
                    )
                } else {
                    format!("relation references unknown class `{class_name}`")
                };
                diags.push(Diagnostic::error(
                    codes::UNKNOWN_ATTRIBUTE_TYPE,
                    message,
                    relation.span.clone(),
                ));
            }
            if !endpoints_ok {
                continue;
            }
            if relation.kind == RelationKind::Composition && !relation.directed {
                diags.push(Diagnostic::error(
                    codes::UNDIRECTED_COMPOSITION,
                    "composition must be directed (`->`): the target side is owned",
                    relation.span.clone(),
                ));
                continue;
            }
            let role = relation
                .target_role
                .clone()
                .unwrap_or_else(|| default_role(&relation.target_class));
            let symbol = table.classes.get_mut(&relation.source_class).unwrap();
            symbol.relations.push(RelationSymbol {
                kind: relation.kind,
                source_class: relation.source_class.clone(),
                source_role: relation.source_role.clone(),
                target_class: relation.target_class.clone(),
                role,
                cardinality: relation.target_cardinality.clone(),
                synthetic: false,
                span: relation.span.clone(),
            });
        }
    }

    // Pass 4: role names must not collide with attributes or each other.
    for class in table.classes.values() {
        let mut seen_roles: BTreeMap<&str, &SourceSpan> = BTreeMap::new();
        for relation in &class.relations {
            if relation.synthetic {
                // Roles of synthetic relations are former attribute names,
                // already unique within the class.
                seen_roles.insert(&relation.role, &relation.span);
                continue;
            }
            if class.attributes.contains_key(&relation.role) {
                let mut diag = Diagnostic::error(
                    codes::DUPLICATE_ROLE,
                    format!(
                        "role `{}` collides with an attribute of class `{}`",
                        relation.role, class.name
                    ),
                    relation.span.clone(),
                );
                if let Some(span) = attr_spans.get(&(class.name.clone(), relation.role.clone())) {
                    diag = diag.with_related(span.clone(), "attribute defined here");
                }
                diags.push(diag);
                continue;
            }
            if let Some(first) = seen_roles.get(relation.role.as_str()) {
                diags.push(
                    Diagnostic::error(
                        codes::DUPLICATE_ROLE,
                        format!(
                            "class `{}` already has a relation with role `{}`",
                            class.name, relation.role
                        ),
                        relation.span.clone(),
                    )
                    .with_related((*first).clone(), "first relation here"),
                );
                continue;
            }
            seen_roles.insert(&relation.role, &relation.span);
        }
    }

    (table, diags)
}

fn duplicate_definition(name: &str, span: &SourceSpan, first: &SourceSpan) -> Diagnostic {
    Diagnostic::error(
        codes::DUPLICATE_ACROSS_DIAGRAMS,
        format!("the name `{name}` is already defined"),
        span.clone(),
    )
    .with_related(first.clone(), "first defined here")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classdiagram::{parse_classdiagram, CardinalityMax};

    fn diagram(src: &str) -> ClassDiagram {
        parse_classdiagram(src, "test.cd").expect("diagram parses")
    }

    fn build(srcs: &[&str]) -> (SymbolTable, Vec<Diagnostic>) {
        let diagrams: Vec<ClassDiagram> = srcs
            .iter()
            .enumerate()
            .map(|(i, s)| parse_classdiagram(s, &format!("d{i}.cd")).expect("parses"))
            .collect();
        build_symbol_table(&diagrams)
    }

    const CARSHARING: &str = include_str!("../../fixtures/carsharing/Carsharing.cd");

    #[test]
    fn carsharing_table() {
        let (table, diags) = build_symbol_table(&[diagram(CARSHARING)]);
        assert!(diags.is_empty(), "unexpected diagnostics: {diags:?}");

        let person = &table.classes["Person"];
        let attrs: Vec<(&str, &AttrType)> = person
            .attributes
            .iter()
            .map(|(n, t)| (n.as_str(), t))
            .collect();
        assert_eq!(
            attrs,
            vec![
                ("name", &AttrType::Base(BaseType::MWString)),
                ("email", &AttrType::Base(BaseType::Email)),
                ("age", &AttrType::Base(BaseType::Number)),
            ]
        );
        assert_eq!(person.relations.len(), 1);
        let cars = &person.relations[0];
        assert_eq!(cars.kind, RelationKind::Composition);
        assert_eq!(cars.role, "cars");
        assert_eq!(cars.source_role.as_deref(), Some("keeper"));
        assert_eq!(cars.target_class, "Car");
        assert_eq!(cars.cardinality.min, 0);
        assert_eq!(cars.cardinality.max, CardinalityMax::Unbounded);
        assert!(!cars.synthetic);

        let car = &table.classes["Car"];
        assert_eq!(
            car.attributes.get("brand"),
            Some(&AttrType::Enum("Brand".to_string()))
        );
        assert_eq!(
            car.attributes.get("numSeats"),
            Some(&AttrType::Base(BaseType::Number))
        );
        assert_eq!(
            car.attributes.get("constYear"),
            Some(&AttrType::Base(BaseType::MWDate))
        );
        assert!(car.relations.is_empty());

        assert_eq!(table.enums["Brand"].literals, vec!["AUDI", "BMW", "VW"]);
    }

    #[test]
    fn duplicate_class_across_diagrams() {
        let (_, diags) = build(&[
            "classdiagram A { class Person {} }",
            "classdiagram B { class Person {} }",
        ]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::DUPLICATE_ACROSS_DIAGRAMS);
        assert_eq!(diags[0].span.file, "d1.cd");
        assert_eq!(diags[0].related[0].0.file, "d0.cd");
    }

    #[test]
    fn class_and_enum_share_namespace() {
        let (_, diags) = build(&[
            "classdiagram A { class Color {} }",
            "classdiagram B { enum Color {RED;} }",
        ]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::DUPLICATE_ACROSS_DIAGRAMS);
    }

    #[test]
    fn unknown_attribute_type() {
        let (table, diags) = build(&["classdiagram A { class P { Foo bar; MWString s; } }"]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::UNKNOWN_ATTRIBUTE_TYPE);
        assert!(diags[0].message.contains("Foo"));
        let p = &table.classes["P"];
        assert!(!p.attributes.contains_key("bar"));
        assert!(p.attributes.contains_key("s"));
    }

    #[test]
    fn class_typed_attribute_desugars_to_composition() {
        let (table, diags) = build(&[
            "classdiagram A { class Person { Address home; MWString name; } class Address { MWString street; } }",
        ]);
        assert!(diags.is_empty(), "{diags:?}");
        let person = &table.classes["Person"];
        assert!(!person.attributes.contains_key("home"));
        assert_eq!(
            person.attributes.keys().collect::<Vec<_>>(),
            vec!["name"]
        );
        assert_eq!(person.relations.len(), 1);
        let home = &person.relations[0];
        assert_eq!(home.kind, RelationKind::Composition);
        assert_eq!(home.role, "home");
        assert_eq!(home.target_class, "Address");
        assert!(home.cardinality.is_exactly_one());
        assert!(home.synthetic);
    }

    #[test]
    fn undirected_composition_rejected() {
        let (table, diags) =
            build(&["classdiagram A { class P {} class Q {} composition P -- Q; }"]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::UNDIRECTED_COMPOSITION);
        assert!(table.classes["P"].relations.is_empty());
    }

    #[test]
    fn undirected_association_allowed() {
        let (table, diags) =
            build(&["classdiagram A { class P {} class Q {} association P -- Q; }"]);
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(table.classes["P"].relations.len(), 1);
        assert_eq!(table.classes["P"].relations[0].kind, RelationKind::Association);
    }

    #[test]
    fn role_defaults_to_lowercased_target() {
        let (table, diags) = build(&[
            "classdiagram A { class P {} class CarPool {} composition P -> CarPool; }",
        ]);
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(table.classes["P"].relations[0].role, "carPool");
    }

    #[test]
    fn role_collides_with_attribute() {
        let (_, diags) = build(&[
            "classdiagram A { class P { MWString cars; } class Car {} composition P -> (cars) Car [*]; }",
        ]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::DUPLICATE_ROLE);
        assert!(!diags[0].related.is_empty());
    }

    #[test]
    fn role_collides_with_other_relation() {
        let (_, diags) = build(&[
            "classdiagram A { class P {} class Car {} composition P -> (fleet) Car [*]; association P -> (fleet) Car; }",
        ]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::DUPLICATE_ROLE);
    }

    #[test]
    fn declared_role_collides_with_synthetic() {
        let (_, diags) = build(&[
            "classdiagram A { class P { Car car; } class Car {} composition P -> Car; }",
        ]);
        // The declared relation's defaulted role `car` hits the synthetic
        // composition from the class-typed attribute.
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::DUPLICATE_ROLE);
    }

    #[test]
    fn relation_to_enum_rejected() {
        let (_, diags) = build(&[
            "classdiagram A { class P {} enum E {X;} composition P -> E; }",
        ]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::UNKNOWN_ATTRIBUTE_TYPE);
        assert!(diags[0].message.contains("enum"));
    }

    #[test]
    fn relation_to_unknown_class_rejected() {
        let (_, diags) = build(&["classdiagram A { class P {} composition P -> Ghost; }"]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::UNKNOWN_ATTRIBUTE_TYPE);
        assert!(diags[0].message.contains("Ghost"));
    }

    #[test]
    fn table_is_pure_function_of_diagrams() {
        let (a, _) = build_symbol_table(&[diagram(CARSHARING)]);
        let (b, _) = build_symbol_table(&[diagram(CARSHARING)]);
        assert_eq!(a, b);
    }
}
