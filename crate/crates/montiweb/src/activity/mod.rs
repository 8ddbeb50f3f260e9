//! Frontend for the activity-diagram language (`.ad` files): actions
//! with typed in/out parameters, view-call content, and guarded
//! transitions with object flow.

pub mod ast;
pub mod parser;
pub mod printer;

pub use ast::{
    ActionContent, ActionDef, ActivityDef, Alternative, CompareOp, Endpoint, GuardExpr,
    OpaqueCode, Operand, ParamDecl, TransitionStmt, ViewCall,
};
pub use parser::{parse_activity, parse_guard, KEYWORDS};
pub use printer::{print_activity, print_guard};
