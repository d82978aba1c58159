//! `cnc`: check, bind, instantiate and print architecture models.

use std::ffi::OsStr;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cnc_core::pipeline::{self, binding_scope, check_all, check_libraries};
use cnc_core::{
    codes, detect_clashes, emit_adl, emit_structured, instantiate, parse_appcfg,
    parse_architecture, parse_library, pretty_print, validate_bindings, ApplicationConfig,
    Architecture, BindMode, Diagnostic, Library,
};
use tempfile::NamedTempFile;

#[derive(Parser)]
#[command(
    name = "cnc",
    version,
    about = "Component & connector architecture toolchain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print diagnostics as JSON lines on standard output.
    #[arg(long, global = true)]
    machine: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check architectures and libraries.
    Check {
        #[command(flatten)]
        inputs: Inputs,
        /// Also validate this application configuration.
        #[arg(long)]
        app: Option<PathBuf>,
    },
    /// Apply an application configuration and write the bound architecture.
    Bind {
        #[command(flatten)]
        bind: BindArgs,
        /// Directory for `<App>.arc` and `<App>.bound.json`.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Treat binding clashes as errors.
        #[arg(long)]
        fail_on_clash: bool,
    },
    /// Print the instance tree of the bound architecture.
    Instantiate {
        #[command(flatten)]
        bind: BindArgs,
    },
    /// Print inputs in canonical form.
    Print {
        #[command(flatten)]
        inputs: Inputs,
    },
}

#[derive(Args)]
struct Inputs {
    /// Model files: `.arc`, `.lib`, `.app`.
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct BindArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Application configuration to apply.
    #[arg(long)]
    app: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    mode: Mode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Permissive,
}

impl From<Mode> for BindMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => BindMode::Strict,
            Mode::Permissive => BindMode::Permissive,
        }
    }
}

/// Failure outside the diagnostics of the models themselves.
struct Fatal(String);

type Outcome = Result<Vec<Diagnostic>, Fatal>;

struct Reporter {
    machine: bool,
    color: bool,
}

impl Reporter {
    fn new(machine: bool) -> Self {
        let color = match std::env::var("CNC_COLOR").as_deref() {
            Ok("1") => true,
            Ok("0") => false,
            _ => std::io::stderr().is_terminal(),
        };
        Self { machine, color }
    }

    fn report(&self, diags: &[Diagnostic]) {
        for d in diags {
            if self.machine {
                println!("{}", d.to_json_line());
            } else {
                eprintln!("{}", d.render(self.color));
            }
        }
    }
}

#[derive(Default)]
struct Models {
    archs: Vec<Architecture>,
    libs: Vec<Library>,
    apps: Vec<ApplicationConfig>,
}

fn read(path: &Path) -> Result<String, Fatal> {
    std::fs::read_to_string(path).map_err(|e| Fatal(format!("cannot read {}: {e}", path.display())))
}

/// Parses every file by extension. Parse diagnostics are returned alongside
/// whatever parsed cleanly.
fn load(files: &[PathBuf]) -> Result<(Models, Vec<Diagnostic>), Fatal> {
    let mut models = Models::default();
    let mut diags = Vec::new();
    for path in files {
        let text = read(path)?;
        let name = path.display().to_string();
        match path.extension().and_then(OsStr::to_str) {
            Some("arc") => {
                let r = parse_architecture(&name, &text);
                diags.extend(r.diagnostics);
                models.archs.extend(r.model);
            }
            Some("lib") => {
                let r = parse_library(&name, &text);
                diags.extend(r.diagnostics);
                models.libs.extend(r.model);
            }
            Some("app") => {
                let r = parse_appcfg(&name, &text);
                diags.extend(r.diagnostics);
                models.apps.extend(r.model);
            }
            _ => {
                return Err(Fatal(format!(
                    "{name}: unknown file kind (expected .arc, .lib or .app)"
                )))
            }
        }
    }
    Ok((models, diags))
}

fn load_with_app(files: &[PathBuf], app: &Path) -> Result<(Models, Vec<Diagnostic>), Fatal> {
    let mut all = files.to_vec();
    all.push(app.to_path_buf());
    if all
        .iter()
        .filter(|p| p.extension() == Some(OsStr::new("app")))
        .count()
        != 1
    {
        return Err(Fatal(
            "exactly one application configuration is expected".into(),
        ));
    }
    load(&all)
}

fn single_arch(models: &Models) -> Result<&Architecture, Fatal> {
    match models.archs.as_slice() {
        [a] => Ok(a),
        _ => Err(Fatal(format!(
            "exactly one architecture is expected, {} given",
            models.archs.len()
        ))),
    }
}

fn run_check(files: &[PathBuf], app: Option<&Path>) -> Outcome {
    let (models, mut diags) = match app {
        Some(app) => load_with_app(files, app)?,
        None => load(files)?,
    };
    if cnc_core::diagnostic::has_errors(&diags) {
        return Ok(diags);
    }
    if models.archs.is_empty() {
        diags.extend(check_libraries(&models.libs));
    }
    for arch in &models.archs {
        diags.extend(check_all(arch, &models.libs));
    }
    if let Some(cfg) = models.apps.first() {
        let arch = single_arch(&models)?;
        if !cnc_core::diagnostic::has_errors(&diags) {
            match binding_scope(arch, cfg, &models.libs) {
                Err(d) => diags.extend(d),
                Ok(scope) => match validate_bindings(arch, &scope, cfg) {
                    Err(d) => diags.extend(d),
                    Ok(done) => diags.extend(
                        detect_clashes(&done, arch, &scope)
                            .iter()
                            .map(|c| c.to_diagnostic(false)),
                    ),
                },
            }
        }
    }
    cnc_core::diagnostic::sort_diagnostics(&mut diags);
    Ok(diags)
}

/// Loads the inputs and runs the bind pipeline. The inner error carries the
/// diagnostics that stopped it.
fn bind(args: &BindArgs) -> Result<Result<pipeline::BindOutcome, Vec<Diagnostic>>, Fatal> {
    let (models, diags) = load_with_app(&args.inputs.files, &args.app)?;
    if cnc_core::diagnostic::has_errors(&diags) {
        return Ok(Err(diags));
    }
    let arch = single_arch(&models)?;
    let cfg = &models.apps[0];
    Ok(pipeline::bind(arch, cfg, &models.libs, args.mode.into()))
}

/// Writes all files or none: every temporary is complete before the first
/// rename.
fn write_atomically(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>, Fatal> {
    let io = |e: std::io::Error| Fatal(format!("cannot write to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut staged = Vec::new();
    for (name, content) in files {
        let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(content.as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        staged.push((tmp, dir.join(name)));
    }
    let mut written = Vec::new();
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| io(e.error))?;
        written.push(target);
    }
    Ok(written)
}

fn run_bind(args: &BindArgs, out_dir: &Path, fail_on_clash: bool, machine: bool) -> Outcome {
    let out = match bind(args)? {
        Ok(out) => out,
        Err(diags) => return Ok(diags),
    };
    let mut diags = out.warnings.clone();
    if fail_on_clash && !out.clashes.is_empty() {
        diags.retain(|d| d.code != codes::CLASH);
        diags.extend(out.clashes.iter().map(|c| c.to_diagnostic(true)));
        cnc_core::diagnostic::sort_diagnostics(&mut diags);
        return Ok(diags);
    }
    let name = out.result.name.to_string();
    let written = write_atomically(
        out_dir,
        &[
            (format!("{name}.arc"), emit_adl(&out.result)),
            (format!("{name}.bound.json"), emit_structured(&out.result)),
        ],
    )?;
    if !machine {
        for path in written {
            println!("wrote {}", path.display());
        }
    }
    Ok(diags)
}

fn run_instantiate(args: &BindArgs, machine: bool) -> Outcome {
    let out = match bind(args)? {
        Ok(out) => out,
        Err(diags) => return Ok(diags),
    };
    let mut diags = out.warnings.clone();
    match instantiate(&out.result) {
        Ok(tree) if !machine => {
            for line in tree.render_lines() {
                println!("{line}");
            }
        }
        Ok(_) => {}
        Err(d) => diags.push(d),
    }
    Ok(diags)
}

fn run_print(files: &[PathBuf]) -> Outcome {
    let (models, diags) = load(files)?;
    if cnc_core::diagnostic::has_errors(&diags) {
        return Ok(diags);
    }
    let mut texts: Vec<String> = Vec::new();
    texts.extend(models.archs.iter().map(pretty_print));
    texts.extend(models.libs.iter().map(pretty_print));
    texts.extend(models.apps.iter().map(pretty_print));
    print!("{}", texts.join("\n"));
    Ok(diags)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let reporter = Reporter::new(cli.machine);
    let outcome = match &cli.command {
        Command::Check { inputs, app } => run_check(&inputs.files, app.as_deref()),
        Command::Bind {
            bind,
            out,
            fail_on_clash,
        } => run_bind(bind, out, *fail_on_clash, cli.machine),
        Command::Instantiate { bind } => run_instantiate(bind, cli.machine),
        Command::Print { inputs } => run_print(&inputs.files),
    };
    match outcome {
        Ok(diags) => {
            reporter.report(&diags);
            if cnc_core::diagnostic::has_errors(&diags) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Fatal(msg)) => {
            eprintln!("cnc: {msg}");
            ExitCode::from(2)
        }
    }
}
