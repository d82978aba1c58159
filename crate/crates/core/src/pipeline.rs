//! The full check-and-bind sequence shared by the command line tool and the
//! test suites.

use crate::binding::{
    detect_clashes, validate_bindings, ApplicationConfig, Clash, CompletedBinding,
};
use crate::check::{check_architecture, check_architecture_with, check_library, PlatformRule};
use crate::diagnostic::{codes, has_errors, sort_diagnostics, Diagnostic};
use crate::model::{Architecture, Library};
use crate::scope::{build_library_scope, build_scope, Scope};
use crate::transform::{bind_architecture, BindMode, BoundArchitecture};

/// Checks every library in its own scope.
pub fn check_libraries(libs: &[Library]) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for lib in libs {
        match build_library_scope(lib, libs) {
            Ok(scope) => diags.extend(check_library(lib, &scope)),
            Err(d) => diags.extend(d),
        }
    }
    sort_diagnostics(&mut diags);
    diags
}

/// Checks the libraries and a platform-independent architecture.
pub fn check_all(arch: &Architecture, libs: &[Library]) -> Vec<Diagnostic> {
    let mut diags = check_libraries(libs);
    match build_scope(arch, libs) {
        Ok(scope) => diags.extend(check_architecture(arch, &scope)),
        Err(d) => diags.extend(d),
    }
    sort_diagnostics(&mut diags);
    diags
}

/// Scope for validating `cfg`: the architecture's scope widened by the
/// application's own imports.
pub fn binding_scope<'a>(
    arch: &'a Architecture,
    cfg: &'a ApplicationConfig,
    libs: &'a [Library],
) -> Result<Scope<'a>, Vec<Diagnostic>> {
    Scope::build(
        &arch.decls,
        arch.imports.iter().chain(&cfg.imports),
        libs,
        None,
    )
}

#[derive(Debug, Clone)]
pub struct BindOutcome {
    pub result: BoundArchitecture,
    pub bindings: Vec<CompletedBinding>,
    pub clashes: Vec<Clash>,
    /// Warnings from every stage, sorted.
    pub warnings: Vec<Diagnostic>,
}

/// Checks the inputs, validates and applies the bindings, then re-checks the
/// result as a platform-specific architecture. Any error stops the run.
/// Permissive mode tolerates the abstract instances it warned about.
pub fn bind(
    arch: &Architecture,
    cfg: &ApplicationConfig,
    libs: &[Library],
    mode: BindMode,
) -> Result<BindOutcome, Vec<Diagnostic>> {
    let mut diags = check_all(arch, libs);
    if has_errors(&diags) {
        return Err(diags);
    }
    let scope = binding_scope(arch, cfg, libs)?;
    if scope.contains(&cfg.name) {
        return Err(vec![Diagnostic::error(
            codes::APP_NAME_CLASH,
            cfg.span.clone(),
            format!(
                "application name `{}` is already a declaration in scope",
                cfg.name
            ),
        )]);
    }
    let bindings = validate_bindings(arch, &scope, cfg)?;
    let clashes = detect_clashes(&bindings, arch, &scope);
    diags.extend(clashes.iter().map(|c| c.to_diagnostic(false)));

    let result = bind_architecture(arch, &scope, &bindings, mode, &cfg.name)?;
    diags.extend(result.warnings.iter().cloned());

    let out = result.to_architecture();
    let out_scope = build_scope(&out, &[])?;
    let mut post = check_architecture_with(&out, &out_scope, PlatformRule::Specific);
    if mode == BindMode::Permissive {
        // already reported as unbound-abstract warnings
        post.retain(|d| d.code != codes::ABSTRACT_INSTANCE);
    }
    if has_errors(&post) {
        return Err(post);
    }

    sort_diagnostics(&mut diags);
    Ok(BindOutcome {
        result,
        bindings,
        clashes,
        warnings: diags,
    })
}
