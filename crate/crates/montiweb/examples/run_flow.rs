//! Interpret the registration flow twice: an adult lands on the welcome
//! view, a minor on the error view. Both runs print their canonical
//! trace.
//!
//! Run with: cargo run --example run_flow

use std::fs;
use std::path::Path;

use montiweb::linker::check_project;
use montiweb::project::load_project;
use montiweb::runtime::{parse_script, render_trace, run_script, SessionStatus};

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let project = load_project(&fixtures.join("carsharing_fixed")).expect("project loads");
    let (asts, _) = project.parse_sources();
    let model = check_project(asts);
    assert!(!model.has_errors());

    for name in ["age18", "age17"] {
        let text = fs::read_to_string(fixtures.join(format!("scripts/{name}.json"))).unwrap();
        let script = parse_script(&text).expect("script parses");
        let run = run_script(&model, "UserRegistration", &script, 0);
        assert_eq!(run.status, SessionStatus::Completed);

        println!("--- {name} ---");
        print!("{}", render_trace(&run.trace));
        println!();
    }
}
