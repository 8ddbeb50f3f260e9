//! Frontend for the classviews language (`.cv` files): named editor,
//! display, and field views on one class, with annotation rules,
//! static text, and includes.

pub mod ast;
pub mod parser;
pub mod printer;

pub use ast::{
    AttributeRef, AttributesBlock, AttributesEntry, ClassviewsFile, Include, StaticText, ViewDef,
    ViewElement, ViewModifier,
};
pub use parser::{parse_classviews, KEYWORDS};
pub use printer::print_classviews;
