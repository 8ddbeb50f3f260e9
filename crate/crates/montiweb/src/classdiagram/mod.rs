//! Frontend for the class-diagram language (`.cd` files): the data
//! structure of a modeled web system as classes, enums, and relations.

pub mod ast;
pub mod parser;
pub mod printer;

pub use ast::{
    AttributeDef, Cardinality, CardinalityMax, ClassDef, ClassDiagram, EnumDef, EnumLiteral,
    RelationDef, RelationKind,
};
pub use parser::{parse_cardinality, parse_classdiagram, KEYWORDS};
pub use printer::print_classdiagram;
