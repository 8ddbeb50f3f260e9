//! Cross-model linking.
//!
//! Stages run in a fixed order: class diagrams build the symbol table,
//! classviews resolve against it, activities resolve against both. Later
//! stages never mutate earlier symbols, and diagnostics accumulate across
//! all stages instead of stopping at the first problem.

mod activities;
mod symbols;
mod views;

use std::collections::BTreeMap;

use crate::activity::ActivityDef;
use crate::classdiagram::ClassDiagram;
use crate::classviews::ClassviewsFile;
use crate::diag::{codes, Diagnostic};
use crate::span::SourceSpan;

pub use activities::resolve_activities;
pub use symbols::{
    build_symbol_table, AttrType, BaseType, ClassSymbol, EnumSymbol, FieldBinding,
    RelationSymbol, ResolvedElement, ResolvedField, ResolvedText, SymbolTable, ViewSymbol,
};
pub use views::resolve_classviews;

/// All parsed files of one project.
#[derive(Debug, Clone, Default)]
pub struct ProjectAsts {
    pub classdiagrams: Vec<ClassDiagram>,
    pub classviews: Vec<ClassviewsFile>,
    pub activities: Vec<ActivityDef>,
}

/// The fully linked project: symbol table, rebound activities, and the
/// accumulated diagnostics of every stage. Without errors among the
/// diagnostics, every cross-model reference is bound.
#[derive(Debug, Clone)]
pub struct LinkedModel {
    pub table: SymbolTable,
    pub activities: BTreeMap<String, ActivityDef>,
    pub diagnostics: Vec<Diagnostic>,
}

impl LinkedModel {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.is_error())
    }

    pub fn activity(&self, name: &str) -> Option<&ActivityDef> {
        self.activities.get(name)
    }
}

/// Links a whole project. Inputs are sorted by file path first so that
/// identical file sets produce identical diagnostics in any arrival order.
pub fn check_project(mut asts: ProjectAsts) -> LinkedModel {
    asts.classdiagrams
        .sort_by(|a, b| a.span.file.cmp(&b.span.file));
    asts.classviews.sort_by(|a, b| a.span.file.cmp(&b.span.file));
    asts.activities.sort_by(|a, b| a.span.file.cmp(&b.span.file));

    let (mut table, mut diagnostics) = build_symbol_table(&asts.classdiagrams);
    diagnostics.extend(resolve_classviews(&asts.classviews, &mut table));
    let (activities, activity_diags) = resolve_activities(&asts.activities, &table);
    diagnostics.extend(activity_diags);

    if asts.activities.is_empty() {
        diagnostics.push(Diagnostic::warning(
            codes::NO_ACTIVITIES,
            "the project defines no activities",
            SourceSpan::synthetic(),
        ));
    }

    LinkedModel {
        table,
        activities,
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::parse_activity;
    use crate::classdiagram::parse_classdiagram;
    use crate::classviews::parse_classviews;
    use crate::diag::Severity;

    const CARSHARING_CD: &str = include_str!("../../fixtures/carsharing/Carsharing.cd");
    const PERSON_CV: &str = include_str!("../../fixtures/carsharing/Person.cv");
    const REGISTRATION_AD: &str = include_str!("../../fixtures/carsharing/UserRegistration.ad");
    const FIXED_AD: &str = include_str!("../../fixtures/carsharing_fixed/UserRegistration.ad");

    fn carsharing_project(activity_src: &str) -> ProjectAsts {
        ProjectAsts {
            classdiagrams: vec![parse_classdiagram(CARSHARING_CD, "Carsharing.cd").unwrap()],
            classviews: vec![parse_classviews(PERSON_CV, "Person.cv").unwrap()],
            activities: vec![parse_activity(activity_src, "UserRegistration.ad").unwrap()],
        }
    }

    #[test]
    fn verbatim_project_has_one_error_and_nothing_else() {
        let linked = check_project(carsharing_project(REGISTRATION_AD));
        assert!(linked.has_errors());
        assert_eq!(linked.diagnostics.len(), 1, "{:?}", linked.diagnostics);
        assert_eq!(linked.diagnostics[0].code, codes::UNKNOWN_VIEW);
        assert!(linked.diagnostics[0]
            .message
            .contains("Person.registrationError"));
    }

    #[test]
    fn corrected_project_is_clean() {
        let linked = check_project(carsharing_project(FIXED_AD));
        assert!(linked.diagnostics.is_empty(), "{:?}", linked.diagnostics);
        assert!(linked.activity("UserRegistration").is_some());
        assert_eq!(linked.table.views.len(), 4);
    }

    #[test]
    fn empty_project_warns_about_missing_activities() {
        let linked = check_project(ProjectAsts::default());
        assert!(!linked.has_errors());
        assert_eq!(linked.diagnostics.len(), 1);
        assert_eq!(linked.diagnostics[0].code, codes::NO_ACTIVITIES);
        assert_eq!(linked.diagnostics[0].severity, Severity::Warning);
    }

    #[test]
    fn diagnostics_are_independent_of_arrival_order() {
        let make = |reverse: bool| {
            let mut diagrams = vec![
                parse_classdiagram("classdiagram A { class Dup {} }", "a.cd").unwrap(),
                parse_classdiagram("classdiagram B { class Dup {} }", "b.cd").unwrap(),
            ];
            if reverse {
                diagrams.reverse();
            }
            check_project(ProjectAsts {
                classdiagrams: diagrams,
                ..Default::default()
            })
        };
        let forward = make(false);
        let backward = make(true);
        assert_eq!(forward.diagnostics, backward.diagnostics);
        // The lexically first file always wins.
        assert_eq!(forward.diagnostics[0].span.file, "b.cd");
        assert_eq!(forward.diagnostics[0].related[0].0.file, "a.cd");
    }

    #[test]
    fn later_stages_leave_class_symbols_untouched() {
        let with_views = check_project(carsharing_project(FIXED_AD));
        let bare = check_project(ProjectAsts {
            classdiagrams: vec![parse_classdiagram(CARSHARING_CD, "Carsharing.cd").unwrap()],
            ..Default::default()
        });
        assert_eq!(with_views.table.classes, bare.table.classes);
        assert_eq!(with_views.table.enums, bare.table.enums);
    }
}
