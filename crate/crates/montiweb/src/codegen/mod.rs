//! Web scaffold generation.
//!
//! A linked model becomes a self-contained directory: one HTML page per
//! named editor or display view, two JSON descriptors, a stylesheet, and
//! a manifest hashing all of it. Generation is a pure function of the
//! model, so regenerating an unchanged project rewrites identical bytes.

mod descriptors;
mod pages;

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::classviews::ViewModifier;
use crate::diag::codes;
use crate::linker::LinkedModel;
use crate::runtime::RuntimeError;

pub use descriptors::{emit_flow_descriptor, emit_schema_descriptor};
pub use pages::{
    render_field_fragment, render_view_page, FieldWidget, Subject, WidgetKind, STYLESHEET,
};

/// All artifacts of one generation run, keyed by their path relative to
/// the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSite {
    pub files: BTreeMap<String, String>,
}

impl GeneratedSite {
    /// Paths of the generated page files, in manifest order.
    pub fn page_paths(&self) -> Vec<&str> {
        self.files
            .keys()
            .filter(|p| p.starts_with("pages/"))
            .map(String::as_str)
            .collect()
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Builds the whole site in memory. Refuses with MW601 when the model has
/// errors: generated code must never disagree with a broken model.
pub fn build_site(model: &LinkedModel) -> Result<GeneratedSite, RuntimeError> {
    if model.has_errors() {
        let count = model.diagnostics.iter().filter(|d| d.is_error()).count();
        return Err(RuntimeError::new(
            codes::GENERATION_REFUSED,
            format!("the project has {count} error(s); fix them before generating"),
        ));
    }

    let mut files = BTreeMap::new();
    for view in model.table.views.values() {
        if view.modifier == ViewModifier::Field {
            continue;
        }
        files.insert(
            format!("pages/{}.html", view.qualified_name()),
            pages::render_view_page(&model.table, view, None),
        );
    }
    files.insert(
        "schema.json".to_string(),
        descriptors::emit_schema_descriptor(&model.table),
    );
    files.insert(
        "flow.json".to_string(),
        descriptors::emit_flow_descriptor(&model.activities),
    );
    files.insert("static/mw.css".to_string(), pages::STYLESHEET.to_string());

    let entries: Vec<serde_json::Value> = files
        .iter()
        .map(|(path, content)| json!({ "path": path, "sha256": sha256_hex(content.as_bytes()) }))
        .collect();
    let mut manifest =
        serde_json::to_string_pretty(&json!({ "files": entries })).expect("manifest JSON");
    manifest.push('\n');
    files.insert("manifest.json".to_string(), manifest);

    Ok(GeneratedSite { files })
}

fn io_error(action: &str, path: &Path, err: io::Error) -> RuntimeError {
    RuntimeError::new(
        codes::GENERATION_IO,
        format!("cannot {action} `{}`: {err}", path.display()),
    )
}

/// Builds and writes the site below `out_dir`. Nothing is written when
/// the model has errors; IO failures surface as MW602.
pub fn generate_site(model: &LinkedModel, out_dir: &Path) -> Result<GeneratedSite, RuntimeError> {
    let site = build_site(model)?;
    for (rel, content) in &site.files {
        let path = out_dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| io_error("create directory", parent, e))?;
        }
        fs::write(&path, content).map_err(|e| io_error("write", &path, e))?;
    }
    Ok(site)
}
