//! Generate the web scaffold for the corrected example project.
//!
//! Run with: cargo run --example generate_site [OUT_DIR]

use std::env;
use std::path::{Path, PathBuf};

use montiweb::codegen::generate_site;
use montiweb::linker::check_project;
use montiweb::project::load_project;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/carsharing_fixed");
    let project = load_project(&root).expect("project loads");
    let (asts, parse_diags) = project.parse_sources();
    assert!(parse_diags.is_empty());
    let model = check_project(asts);
    assert!(!model.has_errors(), "the corrected project checks clean");

    let out = env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| env::temp_dir().join("montiweb-example-site"));
    let site = generate_site(&model, &out).expect("generation succeeds");

    println!("wrote {} files to {}", site.files.len(), out.display());
    for path in site.files.keys() {
        println!("  {path}");
    }

    let registration = &site.files["pages/Person.registration.html"];
    println!("\nregistration page: {} bytes, captcha box: {}", registration.len(), registration.contains("mw-captcha"));
    let protected = &site.files["pages/Person.protectedMail.html"];
    println!(
        "protectedMail page renders the email as an SVG image: {}",
        protected.contains("mw-asimage"),
    );
}
