//! Command-line interface: `check`, `generate`, `run`.
//!
//! Exit codes are part of the contract: 0 success, 1 model errors,
//! 2 usage or configuration errors, 3 runtime flow failure.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};

use crate::classviews::ViewModifier;
use crate::codegen::generate_site;
use crate::diag::{codes, render_diagnostics, Diagnostic, RenderStyle, Severity};
use crate::linker::{
    check_project, FieldBinding, LinkedModel, ResolvedElement, ResolvedField, SymbolTable,
    ViewSymbol,
};
use crate::project::{load_project, LoadedProject, UsageError};
use crate::runtime::{
    parse_script, render_trace, run_script, start_session, ActionInput, FlowSession,
    SessionStatus, TraceEvent,
};

#[derive(Debug, Parser)]
#[command(
    name = "montiweb",
    version,
    about = "Compiler and interpreter for the MontiWeb modeling languages"
)]
pub struct Cli {
    /// Project directory or manifest file (defaults to the working directory).
    #[arg(long, global = true, default_value = ".")]
    project: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and link the project, printing every diagnostic.
    Check {
        /// Fail (exit 1) on warnings too, not only on errors.
        #[arg(long)]
        deny_warnings: bool,
    },
    /// Check the project, then emit the web scaffold.
    Generate {
        /// Output directory (defaults to the manifest's, else `out/`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interpret an activity flow, scripted or interactively.
    #[command(group(ArgGroup::new("mode").required(true).args(["script", "interactive"])))]
    Run {
        /// Activity to run (defaults to the project's default activity).
        activity: Option<String>,
        /// JSON script supplying one input object per visited action.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Write the trace to a file instead of stdout.
        #[arg(long, requires = "script", conflicts_with = "interactive")]
        trace_out: Option<PathBuf>,
        /// Prompt for editor fields on the terminal.
        #[arg(long)]
        interactive: bool,
        /// Captcha session seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn style() -> RenderStyle {
    if std::env::var_os("MW_NO_COLOR").is_some() {
        return RenderStyle::Plain;
    }
    if io::stderr().is_terminal() {
        RenderStyle::Ansi
    } else {
        RenderStyle::Plain
    }
}

/// Parses and links the whole project. The returned list also contains
/// the parse diagnostics, which the linked model cannot know about.
fn analyze(project: &LoadedProject) -> (LinkedModel, Vec<Diagnostic>) {
    let (asts, parse_diags) = project.parse_sources();
    let model = check_project(asts);
    let mut all = parse_diags;
    all.extend(model.diagnostics.iter().cloned());
    (model, all)
}

fn print_diagnostics(project: &LoadedProject, diags: &[Diagnostic]) {
    if !diags.is_empty() {
        eprint!("{}", render_diagnostics(diags, &project.sources, style()));
    }
}

fn counts(diags: &[Diagnostic]) -> (usize, usize) {
    let errors = diags.iter().filter(|d| d.is_error()).count();
    let warnings = diags
        .iter()
        .filter(|d| d.severity == Severity::Warning)
        .count();
    (errors, warnings)
}

fn cmd_check(project: &LoadedProject, deny_warnings: bool) -> i32 {
    let (_, diags) = analyze(project);
    print_diagnostics(project, &diags);
    let (errors, warnings) = counts(&diags);
    eprintln!("{errors} error(s), {warnings} warning(s)");
    if errors > 0 || (deny_warnings && warnings > 0) {
        1
    } else {
        0
    }
}

fn cmd_generate(project: &LoadedProject, out: Option<&Path>) -> i32 {
    let (model, diags) = analyze(project);
    print_diagnostics(project, &diags);
    let (errors, _) = counts(&diags);
    if errors > 0 {
        return 1;
    }
    let out_dir = out.map(Path::to_path_buf).unwrap_or_else(|| project.out_dir());
    match generate_site(&model, &out_dir) {
        Ok(site) => {
            print!("{}", site.files["manifest.json"]);
            0
        }
        Err(err) => {
            eprintln!("{err}");
            if err.code == codes::GENERATION_IO {
                2
            } else {
                1
            }
        }
    }
}

fn resolve_activity(
    project: &LoadedProject,
    model: &LinkedModel,
    requested: Option<&str>,
) -> Result<String, UsageError> {
    let name = match requested {
        Some(name) => name.to_string(),
        None => match &project.manifest.default_activity {
            Some(name) => name.clone(),
            None if model.activities.len() == 1 => {
                model.activities.keys().next().unwrap().clone()
            }
            None => {
                return Err(UsageError(format!(
                    "the project defines {} activities and no default; name one",
                    model.activities.len(),
                )))
            }
        },
    };
    if !model.activities.contains_key(&name) {
        let available: Vec<&str> = model.activities.keys().map(String::as_str).collect();
        return Err(UsageError(format!(
            "unknown activity `{name}`; the project defines: {}",
            if available.is_empty() {
                "none".to_string()
            } else {
                available.join(", ")
            },
        )));
    }
    Ok(name)
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    project: &LoadedProject,
    activity: Option<&str>,
    script: Option<&Path>,
    trace_out: Option<&Path>,
    interactive: bool,
    seed: u64,
) -> Result<i32, UsageError> {
    let (model, diags) = analyze(project);
    print_diagnostics(project, &diags);
    let (errors, _) = counts(&diags);
    if errors > 0 {
        return Ok(1);
    }
    let activity = resolve_activity(project, &model, activity)?;

    if let Some(script_path) = script {
        let text = fs::read_to_string(script_path)
            .map_err(|e| UsageError(format!("cannot read `{}`: {e}", script_path.display())))?;
        let entries = parse_script(&text)
            .map_err(|e| UsageError(format!("cannot parse `{}`: {e}", script_path.display())))?;
        let run = run_script(&model, &activity, &entries, seed);
        let trace = render_trace(&run.trace);
        match trace_out {
            Some(path) => fs::write(path, &trace)
                .map_err(|e| UsageError(format!("cannot write `{}`: {e}", path.display())))?,
            None => print!("{trace}"),
        }
        match run.status {
            SessionStatus::Completed => Ok(0),
            _ => {
                if let Some(err) = &run.error {
                    eprintln!("{err}");
                }
                Ok(3)
            }
        }
    } else {
        debug_assert!(interactive);
        let session = match start_session(&model, &activity, seed) {
            Ok(session) => session,
            Err(err) => {
                eprintln!("{err}");
                return Ok(3);
            }
        };
        interactive_loop(session, &model.table)
    }
}

fn prompt(
    label: &str,
    lines: &mut impl Iterator<Item = io::Result<String>>,
) -> Result<String, UsageError> {
    print!("{label}: ");
    io::stdout().flush().ok();
    match lines.next() {
        Some(Ok(line)) => Ok(line),
        Some(Err(e)) => Err(UsageError(format!("cannot read input: {e}"))),
        None => Err(UsageError(
            "input ended before the flow completed".to_string(),
        )),
    }
}

fn prompt_editor_input(
    table: &SymbolTable,
    view: &ViewSymbol,
    challenge: Option<String>,
    lines: &mut impl Iterator<Item = io::Result<String>>,
) -> Result<ActionInput, UsageError> {
    let mut input = ActionInput::default();
    for element in &view.elements {
        let ResolvedElement::Field(field) = element else {
            continue;
        };
        if field.mode != ViewModifier::Editor {
            continue;
        }
        prompt_field(table, field, &mut input, lines)?;
    }
    if let Some(challenge) = challenge {
        println!("captcha challenge: {challenge}");
        input
            .fields
            .insert("captcha".to_string(), prompt("captcha", lines)?);
    }
    Ok(input)
}

fn prompt_field(
    table: &SymbolTable,
    field: &ResolvedField,
    input: &mut ActionInput,
    lines: &mut impl Iterator<Item = io::Result<String>>,
) -> Result<(), UsageError> {
    match &field.binding {
        FieldBinding::Attribute(_) => {
            let raw = prompt(&field.name, lines)?;
            input.fields.insert(field.name.clone(), raw);
        }
        FieldBinding::Role(relation) if relation.kind == crate::classdiagram::RelationKind::Composition => {
            let count = loop {
                let raw = prompt(&format!("{} (count)", field.name), lines)?;
                match raw.trim().parse::<usize>() {
                    Ok(count) => break count,
                    Err(_) => println!("enter a number"),
                }
            };
            let mut items = Vec::with_capacity(count);
            for i in 0..count {
                let mut item = BTreeMap::new();
                if let Some(target) = table.classes.get(&relation.target_class) {
                    for (attr, _) in &target.attributes {
                        let raw = prompt(&format!("{}[{i}].{attr}", field.name), lines)?;
                        item.insert(attr.clone(), raw);
                    }
                }
                items.push(item);
            }
            input.children.insert(field.name.clone(), items);
        }
        FieldBinding::Role(_) => {
            let raw = prompt(&format!("{} (object ids, space-separated)", field.name), lines)?;
            let ids: Vec<String> = raw.split_whitespace().map(str::to_string).collect();
            input.links.insert(field.name.clone(), ids);
        }
    }
    Ok(())
}

fn show_value(value: &crate::runtime::Value) -> String {
    match value.to_json() {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

/// Echoes a display view the way its elements are declared: text blocks
/// verbatim, fields as `name = value` lines.
fn echo_display(view: &ViewSymbol, snapshot: Option<&BTreeMap<String, crate::runtime::Value>>) {
    for element in &view.elements {
        match element {
            ResolvedElement::Text(text) => println!("{}", text.text.trim()),
            ResolvedElement::Field(field) => {
                let shown = snapshot
                    .and_then(|s| s.get(&field.name))
                    .map(show_value)
                    .unwrap_or_else(|| "(none)".to_string());
                println!("{} = {shown}", field.name);
            }
        }
    }
}

fn interactive_loop(mut session: FlowSession<'_>, table: &SymbolTable) -> Result<i32, UsageError> {
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();

    while session.status() == SessionStatus::Running {
        let Some(view) = session.current_view() else {
            // A code action cannot be executed; stepping reports that.
            let err = session.step(&ActionInput::default()).unwrap_err();
            eprintln!("{err}");
            return Ok(3);
        };
        println!("== {}", view.qualified_name());

        let input = if view.modifier == ViewModifier::Editor {
            prompt_editor_input(table, view, session.captcha_challenge(), &mut lines)?
        } else {
            ActionInput::default()
        };

        let before = session.trace().len();
        if let Err(err) = session.step(&input) {
            eprintln!("{err}");
            return Ok(3);
        }

        for event in &session.trace()[before..] {
            match event {
                TraceEvent::ValidationRejected { violations, .. } => {
                    for violation in violations {
                        println!("rejected: {}", violation.message);
                    }
                }
                TraceEvent::ViewShown { object, .. } => {
                    echo_display(view, object.as_ref());
                }
                _ => {}
            }
        }
    }

    match session.status() {
        SessionStatus::Completed => {
            println!("flow completed");
            Ok(0)
        }
        _ => Ok(3),
    }
}

fn execute(cli: Cli) -> Result<i32, UsageError> {
    let project = load_project(&cli.project)?;
    match &cli.command {
        Command::Check { deny_warnings } => Ok(cmd_check(&project, *deny_warnings)),
        Command::Generate { out } => Ok(cmd_generate(&project, out.as_deref())),
        Command::Run {
            activity,
            script,
            trace_out,
            interactive,
            seed,
        } => cmd_run(
            &project,
            activity.as_deref(),
            script.as_deref(),
            trace_out.as_deref(),
            *interactive,
            *seed,
        ),
    }
}

/// Entry point for the binary. Returns the process exit code.
pub fn run_cli() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}
