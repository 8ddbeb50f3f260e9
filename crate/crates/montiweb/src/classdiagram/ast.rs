//! AST for the class-diagram language.

use crate::span::SourceSpan;

/// One `.cd` file: `classdiagram Name { ... }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDiagram {
    pub name: String,
    pub classes: Vec<ClassDef>,
    pub enums: Vec<EnumDef>,
    pub relations: Vec<RelationDef>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    pub attributes: Vec<AttributeDef>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeDef {
    /// Unresolved at parse time; the linker binds it to a base type,
    /// enum, or class.
    pub type_name: String,
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumDef {
    pub name: String,
    pub literals: Vec<EnumLiteral>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumLiteral {
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    Association,
    Composition,
}

impl RelationKind {
    pub fn keyword(self) -> &'static str {
        match self {
            RelationKind::Association => "association",
            RelationKind::Composition => "composition",
        }
    }
}

/// `composition Person (keeper) -> (cars) Car [*];`
///
/// The cardinality applies to the target side only; the source side
/// implies exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDef {
    pub kind: RelationKind,
    pub source_class: String,
    pub source_role: Option<String>,
    pub target_class: String,
    pub target_role: Option<String>,
    pub target_cardinality: Cardinality,
    pub directed: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardinalityMax {
    Bounded(u32),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cardinality {
    pub min: u32,
    pub max: CardinalityMax,
    pub span: SourceSpan,
}

impl Cardinality {
    pub fn new(min: u32, max: CardinalityMax, span: SourceSpan) -> Self {
        debug_assert!(match max {
            CardinalityMax::Bounded(m) => min <= m,
            CardinalityMax::Unbounded => true,
        });
        Cardinality { min, max, span }
    }

    /// The implicit cardinality when no bracket is written.
    pub fn exactly_one() -> Self {
        Cardinality::new(1, CardinalityMax::Bounded(1), SourceSpan::synthetic())
    }

    pub fn unbounded() -> Self {
        Cardinality::new(0, CardinalityMax::Unbounded, SourceSpan::synthetic())
    }

    pub fn is_exactly_one(&self) -> bool {
        self.min == 1 && self.max == CardinalityMax::Bounded(1)
    }

    pub fn admits(&self, count: usize) -> bool {
        let count = count as u64;
        if count < self.min as u64 {
            return false;
        }
        match self.max {
            CardinalityMax::Bounded(m) => count <= m as u64,
            CardinalityMax::Unbounded => true,
        }
    }
}

impl ClassDiagram {
    /// Replaces every span with the synthetic span, for structural
    /// comparison in round-trip tests.
    pub fn strip_spans(&mut self) {
        self.span = SourceSpan::synthetic();
        for class in &mut self.classes {
            class.span = SourceSpan::synthetic();
            for attr in &mut class.attributes {
                attr.span = SourceSpan::synthetic();
            }
        }
        for en in &mut self.enums {
            en.span = SourceSpan::synthetic();
            for lit in &mut en.literals {
                lit.span = SourceSpan::synthetic();
            }
        }
        for rel in &mut self.relations {
            rel.span = SourceSpan::synthetic();
            rel.target_cardinality.span = SourceSpan::synthetic();
        }
    }
}
