//! Field validation against the model's annotations, one raw input at a
//! time, exactly as an editor view submission would run it.
//!
//! Run with: cargo run --example validate_fields

use std::path::Path;

use montiweb::annotation::{Annotation, AnnotationValue};
use montiweb::linker::{check_project, AttrType, BaseType};
use montiweb::project::load_project;
use montiweb::runtime::validate_field;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/carsharing_fixed");
    let project = load_project(&root).expect("project loads");
    let (asts, _) = project.parse_sources();
    let model = check_project(asts);

    // Annotations as the registration view carries them: @Required and
    // @Length(min=3, max=30) on `name`, @Required on `age`.
    let name_annotations = [
        Annotation::new("Required"),
        Annotation::new("Length")
            .with_arg("min", AnnotationValue::Int(3))
            .with_arg("max", AnnotationValue::Int(30)),
    ];
    let age_annotations = [Annotation::new("Required")];

    let cases: &[(&str, AttrType, &[Annotation], &str)] = &[
        ("name", AttrType::Base(BaseType::MWString), &name_annotations, ""),
        ("name", AttrType::Base(BaseType::MWString), &name_annotations, "ab"),
        ("name", AttrType::Base(BaseType::MWString), &name_annotations, "Ann"),
        ("age", AttrType::Base(BaseType::Number), &age_annotations, "x"),
        ("age", AttrType::Base(BaseType::Number), &age_annotations, "18"),
        ("email", AttrType::Base(BaseType::Email), &[], "not-an-address"),
        ("email", AttrType::Base(BaseType::Email), &[], "ann@example.com"),
        ("brand", AttrType::Enum("Brand".into()), &[], "PORSCHE"),
        ("brand", AttrType::Enum("Brand".into()), &[], "VW"),
    ];

    for (attribute, ty, annotations, raw) in cases {
        let result = validate_field(&model.table, attribute, ty, annotations, raw);
        match result {
            Ok(value) => println!("{attribute} = {raw:?} -> ok, stored as {:?}", value),
            Err(violations) => {
                for violation in &violations {
                    println!("{attribute} = {raw:?} -> rejected: {}", violation.message);
                }
            }
        }
    }
}
