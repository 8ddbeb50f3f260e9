//! Load and check a whole project, printing its diagnostics.
//!
//! The bundled example project reproduces a real modeling mistake: the
//! activity calls `Person.registrationError`, but the classviews define
//! the view as `error`. Checking surfaces that as MW402.
//!
//! Run with: cargo run --example check_project

use std::path::Path;

use montiweb::diag::{render_diagnostics, RenderStyle};
use montiweb::linker::check_project;
use montiweb::project::load_project;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/carsharing");
    let project = load_project(&root).expect("project loads");
    println!(
        "loaded `{}`: {} cd, {} cv, {} ad",
        project.manifest.name,
        project.classdiagrams.len(),
        project.classviews.len(),
        project.activities.len(),
    );

    let (asts, parse_diags) = project.parse_sources();
    assert!(parse_diags.is_empty(), "fixtures parse cleanly");

    let model = check_project(asts);
    println!(
        "linked {} classes, {} enums, {} views, {} activities\n",
        model.table.classes.len(),
        model.table.enums.len(),
        model.table.views.len(),
        model.activities.len(),
    );

    print!(
        "{}",
        render_diagnostics(&model.diagnostics, &project.sources, RenderStyle::Plain)
    );
    let errors = model.diagnostics.iter().filter(|d| d.is_error()).count();
    println!("\n{} error(s): the flow references a view that does not exist", errors);
}
