//! Drive the typed object store directly: create an object tree, link
//! across an association, and watch a cascade delete scrub references.
//!
//! Run with: cargo run --example object_store

use std::collections::BTreeMap;

use montiweb::classdiagram::parse_classdiagram;
use montiweb::linker::build_symbol_table;
use montiweb::runtime::{ObjectSpec, ObjectStore, Value};

fn main() {
    let cd = parse_classdiagram(
        "classdiagram Fleet {
           class Person { MWString name; }
           class Car { Number numSeats; }
           composition Person (keeper) -> (cars) Car [*];
           association Person -> (favorite) Car [0..1];
         }",
        "fleet.cd",
    )
    .expect("well-formed");
    let (table, diags) = build_symbol_table(&[cd]);
    assert!(diags.is_empty());

    let mut store = ObjectStore::new();

    let mut spec = ObjectSpec::with_values(BTreeMap::from([(
        "name".to_string(),
        Value::Str("Ann".into()),
    )]));
    spec.children.insert(
        "cars".into(),
        vec![
            ObjectSpec::with_values(BTreeMap::from([("numSeats".to_string(), Value::Num(2))])),
            ObjectSpec::with_values(BTreeMap::from([("numSeats".to_string(), Value::Num(5))])),
        ],
    );
    let ann = store.create_object(&table, "Person", &spec).unwrap();
    println!("created Person {ann} plus children; store holds {} objects", store.len());

    let cars: Vec<_> = store
        .objects()
        .filter(|(_, record)| record.class == "Car")
        .map(|(id, _)| id)
        .collect();
    store.link_objects(&table, ann, "favorite", cars[0]).unwrap();
    println!("favorite after linking: {:?}", store.object(ann).unwrap().fields["favorite"]);

    // A [0..1] slot replaces on re-assign instead of overflowing.
    store.link_objects(&table, ann, "favorite", cars[1]).unwrap();
    println!("favorite after re-linking: {:?}", store.object(ann).unwrap().fields["favorite"]);

    // Deleting the favorite car scrubs the dangling reference.
    let removed = store.delete_object(cars[1]).unwrap();
    println!(
        "deleted {} object(s); favorite is now {:?}",
        removed.len(),
        store.object(ann).unwrap().fields["favorite"],
    );

    // Deleting the person cascades over the remaining composition child.
    let removed = store.delete_object(ann).unwrap();
    println!("cascade removed {} objects; store empty: {}", removed.len(), store.is_empty());
}
