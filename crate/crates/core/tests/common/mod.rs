#![allow(dead_code)]

use std::path::PathBuf;

use cnc_core::{
    build_scope, parse_appcfg, parse_architecture, parse_library, validate_bindings,
    ApplicationConfig, Architecture, CompletedBinding, Library, Scope,
};

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn arch(rel: &str) -> Architecture {
    parse_architecture(rel, &read(rel))
        .into_result()
        .unwrap_or_else(|d| panic!("{rel}: {d:#?}"))
}

pub fn lib(rel: &str) -> Library {
    parse_library(rel, &read(rel))
        .into_result()
        .unwrap_or_else(|d| panic!("{rel}: {d:#?}"))
}

pub fn app(rel: &str) -> ApplicationConfig {
    parse_appcfg(rel, &read(rel))
        .into_result()
        .unwrap_or_else(|d| panic!("{rel}: {d:#?}"))
}

pub fn arch_src(text: &str) -> Architecture {
    parse_architecture("test.arc", text)
        .into_result()
        .unwrap_or_else(|d| panic!("{d:#?}"))
}

pub fn lib_src(text: &str) -> Library {
    parse_library("test.lib", text)
        .into_result()
        .unwrap_or_else(|d| panic!("{d:#?}"))
}

pub fn app_src(text: &str) -> ApplicationConfig {
    parse_appcfg("test.app", text)
        .into_result()
        .unwrap_or_else(|d| panic!("{d:#?}"))
}

/// SenseActModels, NXTLejos and ROSMotors.
pub fn explorer_libs() -> Vec<Library> {
    vec![
        lib("explorer/senseact.lib"),
        lib("explorer/nxtlejos.lib"),
        lib("explorer/rosmotors.lib"),
    ]
}

pub fn explorer() -> Architecture {
    arch("explorer/explorer.arc")
}

/// Scope of `arch` extended by the application's imports.
pub fn binding_scope<'a>(
    arch: &'a Architecture,
    cfg: &'a ApplicationConfig,
    libs: &'a [Library],
) -> Scope<'a> {
    Scope::build(
        &arch.decls,
        arch.imports.iter().chain(&cfg.imports),
        libs,
        None,
    )
    .unwrap_or_else(|d| panic!("{d:#?}"))
}

pub fn scope<'a>(arch: &'a Architecture, libs: &'a [Library]) -> Scope<'a> {
    build_scope(arch, libs).unwrap_or_else(|d| panic!("{d:#?}"))
}

pub fn completed(
    arch: &Architecture,
    cfg: &ApplicationConfig,
    libs: &[Library],
) -> Vec<CompletedBinding> {
    let scope = binding_scope(arch, cfg, libs);
    validate_bindings(arch, &scope, cfg).unwrap_or_else(|d| panic!("{d:#?}"))
}

/// One directory of the fixture suite: an architecture, its application and
/// any extra libraries, on top of the explorer libraries.
pub struct Case {
    pub name: String,
    pub arch: Architecture,
    pub app: ApplicationConfig,
    pub libs: Vec<Library>,
}

pub fn suite_case(dir: &str) -> Case {
    let mut libs = explorer_libs();
    let mut arch_file = None;
    let mut app_file = None;
    let mut entries: Vec<_> = std::fs::read_dir(fixture_path(&format!("suite/{dir}")))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    entries.sort();
    for f in entries {
        let rel = format!("suite/{dir}/{f}");
        match f.rsplit('.').next() {
            Some("lib") => libs.push(lib(&rel)),
            Some("arc") => arch_file = Some(rel),
            Some("app") => app_file = Some(rel),
            _ => {}
        }
    }
    Case {
        name: dir.to_string(),
        arch: arch(&arch_file.expect("architecture file")),
        app: app(&app_file.expect("application file")),
        libs,
    }
}

/// Every suite directory, in name order.
pub fn suite() -> Vec<Case> {
    let mut dirs: Vec<_> = std::fs::read_dir(fixture_path("suite"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    dirs.sort();
    dirs.iter().map(|d| suite_case(d)).collect()
}

/// Expected outcome written on the first line of a negative fixture:
/// `// expect: CODE [file:]line:col`.
pub struct Expectation {
    pub code: String,
    pub file: Option<String>,
    pub line: u32,
    pub col: u32,
}

pub fn expectation(text: &str) -> Expectation {
    let spec = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("// expect: "))
        .expect("expectation header");
    let (code, loc) = spec.split_once(' ').unwrap();
    let mut parts: Vec<&str> = loc.rsplitn(3, ':').collect();
    parts.reverse();
    let (file, line, col) = match parts.as_slice() {
        [f, l, c] => (Some(f.to_string()), l, c),
        [l, c] => (None, l, c),
        _ => panic!("bad location `{loc}`"),
    };
    Expectation {
        code: code.to_string(),
        file,
        line: line.parse().unwrap(),
        col: col.parse().unwrap(),
    }
}

/// Runs the stage a negative fixture targets and returns every diagnostic.
pub fn diagnose(rel: &str) -> Vec<cnc_core::Diagnostic> {
    use cnc_core::pipeline::{bind, check_all, check_libraries};
    let text = read(rel);
    let mut libs = explorer_libs();
    match rel.rsplit('.').next() {
        Some("arc") => match parse_architecture(rel, &text).into_result() {
            Ok(a) => check_all(&a, &libs),
            Err(d) => d,
        },
        Some("lib") => match parse_library(rel, &text).into_result() {
            Ok(l) => {
                libs.push(l);
                check_libraries(&libs)
            }
            Err(d) => d,
        },
        Some("app") => match parse_appcfg(rel, &text).into_result() {
            Ok(cfg) => match bind(&explorer(), &cfg, &libs, cnc_core::BindMode::Strict) {
                Ok(_) => Vec::new(),
                Err(d) => d,
            },
            Err(d) => d,
        },
        _ => panic!("unknown fixture kind {rel}"),
    }
}

pub fn negative_fixtures() -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(fixture_path("negative"))
        .unwrap()
        .map(|e| format!("negative/{}", e.unwrap().file_name().into_string().unwrap()))
        .collect();
    v.sort();
    v
}
