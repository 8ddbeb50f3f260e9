//! Parse one file of each language and walk the ASTs.
//!
//! Run with: cargo run --example parse_models

use std::fs;
use std::path::Path;

use montiweb::activity::{parse_activity, ActionContent};
use montiweb::classdiagram::parse_classdiagram;
use montiweb::classviews::parse_classviews;

fn fixture(rel: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel);
    fs::read_to_string(path).expect("fixture exists")
}

fn main() {
    let cd = parse_classdiagram(&fixture("carsharing/Carsharing.cd"), "Carsharing.cd")
        .expect("well-formed class diagram");
    println!("classdiagram {}", cd.name);
    for class in &cd.classes {
        println!("  class {} with {} attributes", class.name, class.attributes.len());
    }
    for en in &cd.enums {
        let literals: Vec<&str> = en.literals.iter().map(|l| l.name.as_str()).collect();
        println!("  enum {} {{ {} }}", en.name, literals.join(", "));
    }
    for relation in &cd.relations {
        let max = match relation.target_cardinality.max {
            montiweb::classdiagram::CardinalityMax::Bounded(m) => m.to_string(),
            montiweb::classdiagram::CardinalityMax::Unbounded => "*".to_string(),
        };
        println!(
            "  {} {} -> ({}) {} [{}..{max}]",
            relation.kind.keyword(),
            relation.source_class,
            relation.target_role.as_deref().unwrap_or("?"),
            relation.target_class,
            relation.target_cardinality.min,
        );
    }

    let cv = parse_classviews(&fixture("carsharing/Person.cv"), "Person.cv")
        .expect("well-formed classviews");
    println!("\nclassviews for {}", cv.class_name);
    for view in &cv.views {
        let name = view.name.as_deref().unwrap_or("(anonymous)");
        println!("  {:?} view {} with {} elements", view.modifier, name, view.elements.len());
    }

    let ad = parse_activity(&fixture("carsharing/UserRegistration.ad"), "UserRegistration.ad")
        .expect("well-formed activity");
    println!("\nactivity {}", ad.name);
    for action in &ad.actions {
        let content = match &action.content {
            ActionContent::ViewCall(call) => format!("view {}.{}", call.class_name, call.view_name),
            ActionContent::OpaqueCode(_) => "code".to_string(),
        };
        println!("  action {} ({content})", action.name);
    }
    println!("  {} transition statements", ad.transitions.len());
}
