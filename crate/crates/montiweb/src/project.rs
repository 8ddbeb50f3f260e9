//! Project loading.
//!
//! A project is a directory with a `montiweb.json` manifest, or a bare
//! directory whose `.cd`/`.cv`/`.ad` files are taken as-is. Discovery is
//! deterministic: lists are sorted, globs expand in path order, and file
//! names in diagnostics are relative to the project root.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::activity::parse_activity;
use crate::classdiagram::parse_classdiagram;
use crate::classviews::parse_classviews;
use crate::diag::Diagnostic;
use crate::linker::ProjectAsts;

/// A configuration or invocation problem: the command cannot even reach
/// model analysis. These exit with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn default_out() -> String {
    "out".to_string()
}

/// The `montiweb.json` manifest. Source entries are paths relative to the
/// manifest, or simple `*` glob patterns over the project directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectManifest {
    pub name: String,
    #[serde(default)]
    pub classdiagrams: Vec<String>,
    #[serde(default)]
    pub classviews: Vec<String>,
    #[serde(default)]
    pub activities: Vec<String>,
    #[serde(default = "default_out")]
    pub out: String,
    #[serde(default)]
    pub default_activity: Option<String>,
}

/// A loaded project: resolved manifest, root directory, and the text of
/// every source file keyed by its root-relative path.
#[derive(Debug, Clone)]
pub struct LoadedProject {
    pub manifest: ProjectManifest,
    pub root: PathBuf,
    pub classdiagrams: Vec<String>,
    pub classviews: Vec<String>,
    pub activities: Vec<String>,
    pub sources: BTreeMap<String, String>,
}

/// Matches `name` against a pattern where `*` stands for any run of
/// characters. Everything else is literal.
fn glob_match(pattern: &str, name: &str) -> bool {
    match pattern.split_once('*') {
        None => pattern == name,
        Some((prefix, rest)) => {
            let Some(tail) = name.strip_prefix(prefix) else {
                return false;
            };
            // Try every split point for the `*`.
            (0..=tail.len())
                .filter(|i| tail.is_char_boundary(*i))
                .any(|i| glob_match(rest, &tail[i..]))
        }
    }
}

fn list_dir_sorted(root: &Path) -> Result<Vec<String>, UsageError> {
    let entries = fs::read_dir(root)
        .map_err(|e| UsageError(format!("cannot read directory `{}`: {e}", root.display())))?;
    let mut names = Vec::new();
    for entry in entries {
        let entry =
            entry.map_err(|e| UsageError(format!("cannot read directory `{}`: {e}", root.display())))?;
        if entry.path().is_file() {
            if let Some(name) = entry.file_name().to_str() {
                names.push(name.to_string());
            }
        }
    }
    names.sort();
    Ok(names)
}

fn resolve_entries(
    root: &Path,
    listing: &[String],
    entries: &[String],
) -> Result<Vec<String>, UsageError> {
    let mut resolved = Vec::new();
    for entry in entries {
        if entry.contains('*') {
            resolved.extend(
                listing
                    .iter()
                    .filter(|name| glob_match(entry, name))
                    .cloned(),
            );
        } else {
            if !root.join(entry).is_file() {
                return Err(UsageError(format!(
                    "the manifest lists `{entry}`, but `{}` does not exist",
                    root.join(entry).display(),
                )));
            }
            resolved.push(entry.clone());
        }
    }
    resolved.sort();
    resolved.dedup();
    Ok(resolved)
}

/// Loads a project from a directory or a manifest file path. A directory
/// without `montiweb.json` is scanned for source files directly.
pub fn load_project(path: &Path) -> Result<LoadedProject, UsageError> {
    let (root, manifest_path) = if path.is_dir() {
        let candidate = path.join("montiweb.json");
        (path.to_path_buf(), candidate.is_file().then_some(candidate))
    } else if path.is_file() {
        let root = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        (root, Some(path.to_path_buf()))
    } else {
        return Err(UsageError(format!("`{}` does not exist", path.display())));
    };

    let listing = list_dir_sorted(&root)?;
    let (manifest, classdiagrams, classviews, activities) = match manifest_path {
        Some(manifest_path) => {
            let text = fs::read_to_string(&manifest_path).map_err(|e| {
                UsageError(format!("cannot read `{}`: {e}", manifest_path.display()))
            })?;
            let manifest: ProjectManifest = serde_json::from_str(&text).map_err(|e| {
                UsageError(format!("cannot parse `{}`: {e}", manifest_path.display()))
            })?;
            let cds = resolve_entries(&root, &listing, &manifest.classdiagrams)?;
            let cvs = resolve_entries(&root, &listing, &manifest.classviews)?;
            let ads = resolve_entries(&root, &listing, &manifest.activities)?;
            (manifest, cds, cvs, ads)
        }
        None => {
            let by_ext = |ext: &str| -> Vec<String> {
                listing
                    .iter()
                    .filter(|name| Path::new(name).extension().is_some_and(|e| e == ext))
                    .cloned()
                    .collect()
            };
            let name = root
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or("project")
                .to_string();
            let manifest = ProjectManifest {
                name,
                classdiagrams: Vec::new(),
                classviews: Vec::new(),
                activities: Vec::new(),
                out: default_out(),
                default_activity: None,
            };
            (manifest, by_ext("cd"), by_ext("cv"), by_ext("ad"))
        }
    };

    if classdiagrams.is_empty() {
        return Err(UsageError(format!(
            "no class-diagram (`.cd`) files found in `{}`; a project needs at least one",
            root.display(),
        )));
    }

    let mut sources = BTreeMap::new();
    for rel in classdiagrams.iter().chain(&classviews).chain(&activities) {
        let path = root.join(rel);
        let text = fs::read_to_string(&path)
            .map_err(|e| UsageError(format!("cannot read `{}`: {e}", path.display())))?;
        sources.insert(rel.clone(), text);
    }

    Ok(LoadedProject {
        manifest,
        root,
        classdiagrams,
        classviews,
        activities,
        sources,
    })
}

impl LoadedProject {
    /// Parses every loaded source file. Files that fail to parse
    /// contribute diagnostics instead of an AST.
    pub fn parse_sources(&self) -> (ProjectAsts, Vec<Diagnostic>) {
        let mut asts = ProjectAsts::default();
        let mut diags = Vec::new();
        for rel in &self.classdiagrams {
            match parse_classdiagram(&self.sources[rel], rel) {
                Ok(ast) => asts.classdiagrams.push(ast),
                Err(errs) => diags.extend(errs),
            }
        }
        for rel in &self.classviews {
            match parse_classviews(&self.sources[rel], rel) {
                Ok(ast) => asts.classviews.push(ast),
                Err(errs) => diags.extend(errs),
            }
        }
        for rel in &self.activities {
            match parse_activity(&self.sources[rel], rel) {
                Ok(ast) => asts.activities.push(ast),
                Err(errs) => diags.extend(errs),
            }
        }
        (asts, diags)
    }

    /// Output directory resolved against the project root.
    pub fn out_dir(&self) -> PathBuf {
        self.root.join(&self.manifest.out)
    }
}
