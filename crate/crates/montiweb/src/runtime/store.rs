//! The typed object store.
//!
//! Composition children live and die with their parent: they are created
//! in the same `create_object` call and removed transitively on delete.
//! After every mutation the store is closed, meaning no `Ref`/`RefList`
//! points at a missing object.

use std::collections::{BTreeMap, BTreeSet};

use crate::classdiagram::{CardinalityMax, RelationKind};
use crate::diag::codes;
use crate::linker::{ClassSymbol, SymbolTable};

use super::value::{ObjectId, Value};
use super::RuntimeError;

/// One stored object: its class plus one value per declared attribute
/// and relation role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectRecord {
    pub class: String,
    pub fields: BTreeMap<String, Value>,
}

/// Input to `create_object`: validated attribute values plus composition
/// children, grouped by role and nested recursively.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ObjectSpec {
    pub values: BTreeMap<String, Value>,
    pub children: BTreeMap<String, Vec<ObjectSpec>>,
}

impl ObjectSpec {
    pub fn with_values(values: BTreeMap<String, Value>) -> Self {
        ObjectSpec {
            values,
            children: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ObjectStore {
    next_id: u64,
    objects: BTreeMap<ObjectId, ObjectRecord>,
    /// child id → (parent id, composition role). A child has at most one
    /// composition parent by construction.
    owners: BTreeMap<ObjectId, (ObjectId, String)>,
}

impl ObjectStore {
    pub fn new() -> Self {
        ObjectStore::default()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object(&self, id: ObjectId) -> Option<&ObjectRecord> {
        self.objects.get(&id)
    }

    pub fn objects(&self) -> impl Iterator<Item = (ObjectId, &ObjectRecord)> {
        self.objects.iter().map(|(id, rec)| (*id, rec))
    }

    pub fn owner(&self, child: ObjectId) -> Option<(ObjectId, &str)> {
        self.owners
            .get(&child)
            .map(|(parent, role)| (*parent, role.as_str()))
    }

    pub fn snapshot(&self, id: ObjectId) -> Option<BTreeMap<String, Value>> {
        self.objects.get(&id).map(|rec| rec.fields.clone())
    }

    /// Creates an object together with its composition children. The call
    /// is atomic: if any part of the spec is rejected, the store is left
    /// untouched.
    pub fn create_object(
        &mut self,
        table: &SymbolTable,
        class_name: &str,
        spec: &ObjectSpec,
    ) -> Result<ObjectId, RuntimeError> {
        check_spec(table, class_name, spec)?;
        let id = self.insert_spec(table, class_name, spec);
        self.debug_check_closure();
        Ok(id)
    }

    fn alloc(&mut self) -> ObjectId {
        self.next_id += 1;
        ObjectId::new(self.next_id)
    }

    fn insert_spec(&mut self, table: &SymbolTable, class_name: &str, spec: &ObjectSpec) -> ObjectId {
        let class = &table.classes[class_name];
        let id = self.alloc();

        let mut fields = BTreeMap::new();
        for (name, _) in &class.attributes {
            let value = spec.values.get(name).cloned().unwrap_or(Value::Absent);
            fields.insert(name.clone(), value);
        }
        for relation in &class.relations {
            let empty = match relation.cardinality.max {
                CardinalityMax::Bounded(1) => Value::Absent,
                _ => Value::RefList(Vec::new()),
            };
            fields.insert(relation.role.clone(), empty);
        }
        self.objects.insert(id, ObjectRecord {
            class: class_name.to_string(),
            fields,
        });

        let relations: Vec<_> = class
            .relations
            .iter()
            .filter(|r| r.kind == RelationKind::Composition)
            .map(|r| (r.role.clone(), r.target_class.clone(), r.cardinality.max))
            .collect();
        for (role, target_class, max) in relations {
            let Some(kids) = spec.children.get(&role) else {
                continue;
            };
            let mut child_ids = Vec::new();
            for kid in kids {
                let child = self.insert_spec(table, &target_class, kid);
                self.owners.insert(child, (id, role.clone()));
                child_ids.push(child);
            }
            let value = match (max, child_ids.as_slice()) {
                (CardinalityMax::Bounded(1), []) => Value::Absent,
                (CardinalityMax::Bounded(1), [only]) => Value::Ref(*only),
                _ => Value::RefList(child_ids),
            };
            self.objects.get_mut(&id).unwrap().fields.insert(role, value);
        }
        id
    }

    /// Deletes an object and, transitively, every composition child it
    /// owns. Surviving references to deleted objects are cleared so the
    /// store stays closed. Returns the full set of removed ids.
    pub fn delete_object(&mut self, id: ObjectId) -> Result<BTreeSet<ObjectId>, RuntimeError> {
        if !self.objects.contains_key(&id) {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!("cannot delete unknown object {id}"),
            ));
        }

        let mut doomed = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(current) = stack.pop() {
            if !doomed.insert(current) {
                continue;
            }
            for (child, (parent, _)) in &self.owners {
                if *parent == current && !doomed.contains(child) {
                    stack.push(*child);
                }
            }
        }

        for gone in &doomed {
            self.objects.remove(gone);
            self.owners.remove(gone);
        }
        for record in self.objects.values_mut() {
            for value in record.fields.values_mut() {
                match value {
                    Value::Ref(target) if doomed.contains(target) => *value = Value::Absent,
                    Value::RefList(ids) => ids.retain(|t| !doomed.contains(t)),
                    _ => {}
                }
            }
        }
        self.debug_check_closure();
        Ok(doomed)
    }

    /// Links two existing objects over an association role. A single
    /// slot (max 1) is replaced; lists use set semantics and reject
    /// additions beyond their bound.
    pub fn link_objects(
        &mut self,
        table: &SymbolTable,
        source: ObjectId,
        role: &str,
        target: ObjectId,
    ) -> Result<(), RuntimeError> {
        let source_class = match self.objects.get(&source) {
            Some(record) => record.class.clone(),
            None => {
                return Err(RuntimeError::new(
                    codes::UNKNOWN_ENTITY,
                    format!("cannot link from unknown object {source}"),
                ))
            }
        };
        let target_class = match self.objects.get(&target) {
            Some(record) => record.class.clone(),
            None => {
                return Err(RuntimeError::new(
                    codes::UNKNOWN_ENTITY,
                    format!("cannot link to unknown object {target}"),
                ))
            }
        };

        let class = &table.classes[&source_class];
        let Some(relation) = class.relation(role) else {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!("class `{source_class}` has no relation role `{role}`"),
            ));
        };
        if relation.kind != RelationKind::Association {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!(
                    "role `{role}` of class `{source_class}` is a composition; children are created with their parent"
                ),
            ));
        }
        if relation.target_class != target_class {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!(
                    "role `{role}` links `{source_class}` to `{}`, but {target} is a `{target_class}`",
                    relation.target_class
                ),
            ));
        }

        let max = relation.cardinality.max;
        let field = self
            .objects
            .get_mut(&source)
            .unwrap()
            .fields
            .get_mut(role)
            .unwrap();
        match (max, field) {
            (CardinalityMax::Bounded(1), slot) => *slot = Value::Ref(target),
            (max, Value::RefList(ids)) => {
                if !ids.contains(&target) {
                    if let CardinalityMax::Bounded(bound) = max {
                        if ids.len() as u64 >= bound as u64 {
                            return Err(RuntimeError::new(
                                codes::CARDINALITY_VIOLATION,
                                format!(
                                    "role `{role}` of class `{source_class}` admits at most {bound} links"
                                ),
                            ));
                        }
                    }
                    ids.push(target);
                }
            }
            _ => unreachable!("non-list field for list-capable role"),
        }
        self.debug_check_closure();
        Ok(())
    }

    /// Overwrites attribute values on an existing object, for editor
    /// views that commit in place.
    pub fn update_fields(
        &mut self,
        id: ObjectId,
        values: BTreeMap<String, Value>,
    ) -> Result<(), RuntimeError> {
        let Some(record) = self.objects.get_mut(&id) else {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!("cannot update unknown object {id}"),
            ));
        };
        for (name, value) in values {
            debug_assert!(record.fields.contains_key(&name));
            record.fields.insert(name, value);
        }
        Ok(())
    }

    /// Panics if the store lost closure. Cheap enough to run after every
    /// mutation in debug builds; tests call it directly.
    pub fn check_closure(&self) {
        for (id, record) in &self.objects {
            for (field, value) in &record.fields {
                match value {
                    Value::Ref(target) => assert!(
                        self.objects.contains_key(target),
                        "{id}.{field} dangles to {target}"
                    ),
                    Value::RefList(ids) => {
                        let mut seen = BTreeSet::new();
                        for target in ids {
                            assert!(
                                self.objects.contains_key(target),
                                "{id}.{field} dangles to {target}"
                            );
                            assert!(seen.insert(*target), "{id}.{field} lists {target} twice");
                        }
                    }
                    _ => {}
                }
            }
        }
        for (child, (parent, role)) in &self.owners {
            assert!(self.objects.contains_key(child), "owned {child} is gone");
            let record = self
                .objects
                .get(parent)
                .unwrap_or_else(|| panic!("owner {parent} of {child} is gone"));
            let holds = match record.fields.get(role) {
                Some(Value::Ref(target)) => target == child,
                Some(Value::RefList(ids)) => ids.contains(child),
                _ => false,
            };
            assert!(holds, "{parent}.{role} does not hold child {child}");
        }
    }

    fn debug_check_closure(&self) {
        if cfg!(debug_assertions) {
            self.check_closure();
        }
    }
}

fn class_of<'t>(
    table: &'t SymbolTable,
    class_name: &str,
) -> Result<&'t ClassSymbol, RuntimeError> {
    table.classes.get(class_name).ok_or_else(|| {
        RuntimeError::new(codes::UNKNOWN_ENTITY, format!("unknown class `{class_name}`"))
    })
}

fn check_spec(table: &SymbolTable, class_name: &str, spec: &ObjectSpec) -> Result<(), RuntimeError> {
    let class = class_of(table, class_name)?;

    for name in spec.values.keys() {
        if !class.attributes.contains_key(name) {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!("class `{class_name}` has no attribute `{name}`"),
            ));
        }
    }
    for (role, kids) in &spec.children {
        let Some(relation) = class.relation(role) else {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!("class `{class_name}` has no composition role `{role}`"),
            ));
        };
        if relation.kind != RelationKind::Composition {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!(
                    "role `{role}` of class `{class_name}` is an association; link objects instead"
                ),
            ));
        }
        for kid in kids {
            check_spec(table, &relation.target_class, kid)?;
        }
    }
    for relation in &class.relations {
        if relation.kind != RelationKind::Composition {
            continue;
        }
        let count = spec.children.get(&relation.role).map_or(0, Vec::len);
        if !relation.cardinality.admits(count) {
            return Err(RuntimeError::new(
                codes::CARDINALITY_VIOLATION,
                format!(
                    "composition role `{}` of class `{class_name}` requires {} children, got {count}",
                    relation.role,
                    describe_bounds(relation.cardinality.min, relation.cardinality.max),
                ),
            ));
        }
    }
    Ok(())
}

fn describe_bounds(min: u32, max: CardinalityMax) -> String {
    match max {
        CardinalityMax::Bounded(m) if m == min => format!("exactly {min}"),
        CardinalityMax::Bounded(m) => format!("{min} to {m}"),
        CardinalityMax::Unbounded => format!("at least {min}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classdiagram::parse_classdiagram;
    use crate::linker::build_symbol_table;

    fn table(src: &str) -> SymbolTable {
        let cd = parse_classdiagram(src, "t.cd").unwrap();
        let (table, diags) = build_symbol_table(&[cd]);
        assert!(diags.is_empty(), "{diags:?}");
        table
    }

    fn carsharing() -> SymbolTable {
        table(include_str!("../../fixtures/carsharing/Carsharing.cd"))
    }

    fn person_spec(name: &str, age: i64, cars: usize) -> ObjectSpec {
        let mut spec = ObjectSpec::default();
        spec.values.insert("name".into(), Value::Str(name.into()));
        spec.values.insert("age".into(), Value::Num(age));
        if cars > 0 {
            let car = ObjectSpec::with_values(BTreeMap::from([(
                "numSeats".into(),
                Value::Num(4),
            )]));
            spec.children.insert("cars".into(), vec![car; cars]);
        }
        spec
    }

    #[test]
    fn creates_parent_with_children() {
        let table = carsharing();
        let mut store = ObjectStore::new();
        let person = store
            .create_object(&table, "Person", &person_spec("Ann", 18, 2))
            .unwrap();

        assert_eq!(store.len(), 3);
        let record = store.object(person).unwrap();
        assert_eq!(record.class, "Person");
        assert_eq!(record.fields["name"], Value::Str("Ann".into()));
        assert_eq!(record.fields["email"], Value::Absent);
        let Value::RefList(cars) = &record.fields["cars"] else {
            panic!("cars should be a list");
        };
        assert_eq!(cars.len(), 2);
        for car in cars {
            assert_eq!(store.object(*car).unwrap().class, "Car");
            assert_eq!(store.owner(*car), Some((person, "cars")));
        }
        store.check_closure();
    }

    #[test]
    fn zero_children_are_legal_for_star() {
        let table = carsharing();
        let mut store = ObjectStore::new();
        let person = store
            .create_object(&table, "Person", &person_spec("Ann", 18, 0))
            .unwrap();
        assert_eq!(store.object(person).unwrap().fields["cars"], Value::RefList(vec![]));
    }

    #[test]
    fn implicit_one_composition_needs_a_child() {
        let table = table("classdiagram T { class A { MWString x; } class B {} composition B -> (a) A; }");
        let mut store = ObjectStore::new();
        let err = store
            .create_object(&table, "B", &ObjectSpec::default())
            .unwrap_err();
        assert_eq!(err.code, codes::CARDINALITY_VIOLATION);
        assert!(err.message.contains("exactly 1"), "{}", err.message);
        assert!(store.is_empty(), "failed create must not leak objects");
    }

    #[test]
    fn unknown_class_and_attribute_are_rejected() {
        let table = carsharing();
        let mut store = ObjectStore::new();
        let err = store
            .create_object(&table, "Ghost", &ObjectSpec::default())
            .unwrap_err();
        assert_eq!(err.code, codes::UNKNOWN_ENTITY);

        let spec = ObjectSpec::with_values(BTreeMap::from([("ghost".into(), Value::Num(1))]));
        let err = store.create_object(&table, "Person", &spec).unwrap_err();
        assert_eq!(err.code, codes::UNKNOWN_ENTITY);
        assert!(err.message.contains("no attribute `ghost`"));
    }

    #[test]
    fn children_under_association_roles_are_rejected() {
        let table = table(
            "classdiagram T { class A {} class B {} association A (x) -> (bs) B [*]; }",
        );
        let mut store = ObjectStore::new();
        let mut spec = ObjectSpec::default();
        spec.children.insert("bs".into(), vec![ObjectSpec::default()]);
        let err = store.create_object(&table, "A", &spec).unwrap_err();
        assert_eq!(err.code, codes::UNKNOWN_ENTITY);
        assert!(err.message.contains("association"), "{}", err.message);
    }

    #[test]
    fn delete_cascades_to_children() {
        let table = carsharing();
        let mut store = ObjectStore::new();
        let person = store
            .create_object(&table, "Person", &person_spec("Ann", 18, 2))
            .unwrap();

        let deleted = store.delete_object(person).unwrap();
        assert_eq!(deleted.len(), 3);
        assert!(deleted.contains(&person));
        assert!(store.is_empty());
    }

    #[test]
    fn deleting_a_child_spares_the_parent() {
        let table = carsharing();
        let mut store = ObjectStore::new();
        let person = store
            .create_object(&table, "Person", &person_spec("Ann", 18, 2))
            .unwrap();
        let Some(Value::RefList(cars)) = store.snapshot(person).map(|f| f["cars"].clone()) else {
            panic!();
        };

        let deleted = store.delete_object(cars[0]).unwrap();
        assert_eq!(deleted.into_iter().collect::<Vec<_>>(), vec![cars[0]]);
        assert_eq!(
            store.object(person).unwrap().fields["cars"],
            Value::RefList(vec![cars[1]]),
            "surviving list keeps only the live child"
        );
        store.check_closure();
    }

    #[test]
    fn delete_scrubs_association_refs() {
        let table = table(
            "classdiagram T { class A { MWString x; } class B {} association B (src) -> (favourite) A; }",
        );
        let mut store = ObjectStore::new();
        let a = store.create_object(&table, "A", &ObjectSpec::default()).unwrap();
        let b = store.create_object(&table, "B", &ObjectSpec::default()).unwrap();
        store.link_objects(&table, b, "favourite", a).unwrap();
        assert_eq!(store.object(b).unwrap().fields["favourite"], Value::Ref(a));

        store.delete_object(a).unwrap();
        assert_eq!(store.object(b).unwrap().fields["favourite"], Value::Absent);
    }

    #[test]
    fn delete_unknown_id_errors() {
        let mut store = ObjectStore::new();
        let err = store.delete_object(ObjectId::new(9)).unwrap_err();
        assert_eq!(err.code, codes::UNKNOWN_ENTITY);
    }

    #[test]
    fn ids_are_never_reused() {
        let table = carsharing();
        let mut store = ObjectStore::new();
        let first = store
            .create_object(&table, "Person", &person_spec("Ann", 18, 0))
            .unwrap();
        store.delete_object(first).unwrap();
        let second = store
            .create_object(&table, "Person", &person_spec("Bob", 20, 0))
            .unwrap();
        assert!(second.as_u64() > first.as_u64());
    }

    #[test]
    fn single_slot_link_replaces() {
        let table = table(
            "classdiagram T { class A {} class B {} association B (src) -> (pick) A [1]; }",
        );
        let mut store = ObjectStore::new();
        let a1 = store.create_object(&table, "A", &ObjectSpec::default()).unwrap();
        let a2 = store.create_object(&table, "A", &ObjectSpec::default()).unwrap();
        let b = store.create_object(&table, "B", &ObjectSpec::default()).unwrap();

        store.link_objects(&table, b, "pick", a1).unwrap();
        store.link_objects(&table, b, "pick", a2).unwrap();
        assert_eq!(store.object(b).unwrap().fields["pick"], Value::Ref(a2));
    }

    #[test]
    fn list_links_are_a_set() {
        let table = table(
            "classdiagram T { class A {} class B {} association B (src) -> (picks) A [*]; }",
        );
        let mut store = ObjectStore::new();
        let a = store.create_object(&table, "A", &ObjectSpec::default()).unwrap();
        let b = store.create_object(&table, "B", &ObjectSpec::default()).unwrap();

        store.link_objects(&table, b, "picks", a).unwrap();
        store.link_objects(&table, b, "picks", a).unwrap();
        assert_eq!(store.object(b).unwrap().fields["picks"], Value::RefList(vec![a]));
    }

    #[test]
    fn bounded_list_rejects_overflow() {
        let table = table(
            "classdiagram T { class A {} class B {} association B (src) -> (picks) A [0..2]; }",
        );
        let mut store = ObjectStore::new();
        let a1 = store.create_object(&table, "A", &ObjectSpec::default()).unwrap();
        let a2 = store.create_object(&table, "A", &ObjectSpec::default()).unwrap();
        let a3 = store.create_object(&table, "A", &ObjectSpec::default()).unwrap();
        let b = store.create_object(&table, "B", &ObjectSpec::default()).unwrap();

        store.link_objects(&table, b, "picks", a1).unwrap();
        store.link_objects(&table, b, "picks", a2).unwrap();
        let err = store.link_objects(&table, b, "picks", a3).unwrap_err();
        assert_eq!(err.code, codes::CARDINALITY_VIOLATION);
        store.link_objects(&table, b, "picks", a1).unwrap();
    }

    #[test]
    fn link_class_mismatch_errors() {
        let table = table(
            "classdiagram T { class A {} class B {} association B (src) -> (pick) A; }",
        );
        let mut store = ObjectStore::new();
        let b1 = store.create_object(&table, "B", &ObjectSpec::default()).unwrap();
        let b2 = store.create_object(&table, "B", &ObjectSpec::default()).unwrap();
        let err = store.link_objects(&table, b1, "pick", b2).unwrap_err();
        assert_eq!(err.code, codes::UNKNOWN_ENTITY);
        assert!(err.message.contains("is a `B`"), "{}", err.message);
    }

    #[test]
    fn linking_through_compositions_is_rejected() {
        let table = carsharing();
        let mut store = ObjectStore::new();
        let person = store
            .create_object(&table, "Person", &person_spec("Ann", 18, 0))
            .unwrap();
        let lone_car = ObjectSpec::with_values(BTreeMap::from([("numSeats".into(), Value::Num(2))]));
        let mut holder = person_spec("Bob", 30, 1);
        holder.children.get_mut("cars").unwrap()[0] = lone_car;
        let bob = store.create_object(&table, "Person", &holder).unwrap();
        let Value::RefList(cars) = store.object(bob).unwrap().fields["cars"].clone() else {
            panic!();
        };

        let err = store.link_objects(&table, person, "cars", cars[0]).unwrap_err();
        assert_eq!(err.code, codes::UNKNOWN_ENTITY);
        assert!(err.message.contains("composition"), "{}", err.message);
    }

    #[test]
    fn nested_children_cascade_too() {
        let table = table(
            "classdiagram T { class Wheel {} class Car {} class Garage {}
               composition Car -> (wheels) Wheel [*];
               composition Garage -> (cars) Car [*]; }",
        );
        let mut store = ObjectStore::new();
        let mut car = ObjectSpec::default();
        car.children
            .insert("wheels".into(), vec![ObjectSpec::default(); 4]);
        let mut garage = ObjectSpec::default();
        garage.children.insert("cars".into(), vec![car]);

        let id = store.create_object(&table, "Garage", &garage).unwrap();
        assert_eq!(store.len(), 6);
        let deleted = store.delete_object(id).unwrap();
        assert_eq!(deleted.len(), 6);
        assert!(store.is_empty());
    }
}
