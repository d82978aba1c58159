//! Application configurations: validation of bindings against an
//! architecture, argument completion, and clash detection.

use std::collections::HashMap;

use crate::check::{check_argument, ArgProblem};
use crate::diagnostic::{codes, sort_diagnostics, Diagnostic, SourceSpan};
use crate::model::{
    Architecture, ArgumentValue, ComponentKind, Identifier, Import, LibraryKind, QualifiedName,
    StripSpans,
};
use crate::scope::Scope;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApplicationConfig {
    pub name: Identifier,
    pub target_arch: Identifier,
    pub imports: Vec<Import>,
    pub bindings: Vec<RawBinding>,
    pub span: SourceSpan,
}

/// A binding as written: `bind <path> to <type>(<added args>);`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBinding {
    pub path: QualifiedName,
    pub target_type: Identifier,
    /// Arguments for the parameters the target type adds, only.
    pub added_args: Vec<ArgumentValue>,
    pub span: SourceSpan,
}

/// A validated binding whose argument list covers every parameter of the
/// target type: the bound declaration's own arguments first, then the added
/// ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletedBinding {
    pub path: QualifiedName,
    pub target_type: Identifier,
    pub full_args: Vec<ArgumentValue>,
    /// Number of leading `full_args` taken from the architecture.
    pub inherited_count: usize,
    pub span: SourceSpan,
}

impl CompletedBinding {
    pub fn added_args(&self) -> &[ArgumentValue] {
        &self.full_args[self.inherited_count..]
    }
}

/// Two bindings that would give one declaration of a shared parent type two
/// different types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clash {
    pub first: CompletedBinding,
    pub second: CompletedBinding,
    pub parent_type: Identifier,
    pub scd_name: Identifier,
}

impl Clash {
    /// `W-CLASH`, or `E-CLASH` when clashes are to fail the run.
    pub fn to_diagnostic(&self, severity_error: bool) -> Diagnostic {
        let message = format!(
            "bindings `{}` -> `{}` and `{}` -> `{}` clash on subcomponent `{}` of `{}`",
            self.first.path,
            self.first.target_type,
            self.second.path,
            self.second.target_type,
            self.scd_name,
            self.parent_type
        );
        let d = if severity_error {
            Diagnostic::error(codes::CLASH_ERROR, self.second.span.clone(), message)
        } else {
            Diagnostic::warning(codes::CLASH, self.second.span.clone(), message)
        };
        d.with_related(self.first.span.clone())
    }
}

impl StripSpans for RawBinding {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
    }
}

impl StripSpans for ApplicationConfig {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.imports.strip_spans();
        self.bindings.strip_spans();
    }
}

/// Validates one binding and completes its argument list.
pub fn complete_binding(
    arch: &Architecture,
    scope: &Scope<'_>,
    raw: &RawBinding,
) -> Result<CompletedBinding, Diagnostic> {
    let err = |code, msg: String| Diagnostic::error(code, raw.span.clone(), msg);

    let chain = scope.resolve_path(&arch.root, &raw.path).map_err(|e| {
        err(
            codes::BIND_PATH,
            format!(
                "cannot resolve `{}`: segment `{}` {}",
                raw.path,
                raw.path.segments()[e.index().min(raw.path.len() - 1)],
                match e.code() {
                    codes::PATH_THROUGH_ATOMIC => "lies below a non-composed component",
                    _ => "does not name a subcomponent",
                }
            ),
        )
    })?;
    let scd = *chain.last().expect("resolved paths are nonempty");
    let scd_type = scope.component(&scd.type_name).ok_or_else(|| {
        err(
            codes::BIND_PATH,
            format!("type `{}` of `{}` is unknown", scd.type_name, raw.path),
        )
    })?;
    if scd_type.kind() != Some(ComponentKind::Abstract) {
        return Err(err(
            codes::BIND_NOT_ABSTRACT,
            format!(
                "`{}` has type `{}`, which is not abstract",
                raw.path, scd.type_name
            ),
        ));
    }
    let target = scope.component(&raw.target_type).ok_or_else(|| {
        err(
            codes::TYPE_UNRESOLVED,
            format!("unknown component type `{}`", raw.target_type),
        )
    })?;
    if !scope.is_subtype(&target.name, &scd_type.name) {
        return Err(err(
            codes::BIND_NOT_SUBTYPE,
            format!(
                "`{}` does not extend `{}`, the type of `{}`",
                target.name, scd_type.name, raw.path
            ),
        ));
    }
    let platform_specific = !target.is_abstract
        && scope.origin(&target.name).and_then(|o| o.library_kind())
            == Some(LibraryKind::Implementation);
    if !platform_specific {
        return Err(err(
            codes::BIND_NOT_PLATFORM,
            format!(
                "`{}` is not a platform-specific component type of an implementation library",
                target.name
            ),
        ));
    }

    let inherited = scope.effective_params(&scd_type.name).len();
    let params = scope.effective_params(&target.name);
    let added = &params[inherited..];
    if added.len() != raw.added_args.len() {
        return Err(err(
            codes::BIND_ARITY,
            format!(
                "`{}` adds {} parameter(s) to `{}`, binding passes {} argument(s)",
                target.name,
                added.len(),
                scd_type.name,
                raw.added_args.len()
            ),
        ));
    }
    for (arg, param) in raw.added_args.iter().zip(added) {
        if let Err(problem) = check_argument(scope, arg, &param.ty) {
            let detail = match problem {
                ArgProblem::Mismatch => format!("expected a value of type `{}`", param.ty),
                ArgProblem::UnknownEnum => "unknown enumeration".to_string(),
                ArgProblem::UnknownLiteral => "unknown enumeration literal".to_string(),
            };
            return Err(err(
                codes::BIND_ARG_TYPE,
                format!(
                    "argument `{arg}` for parameter `{}` of `{}`: {detail}",
                    param.name, target.name
                ),
            ));
        }
    }

    let mut full_args = scd.arguments.clone();
    full_args.extend(raw.added_args.iter().cloned());
    Ok(CompletedBinding {
        path: raw.path.clone(),
        target_type: target.name.clone(),
        full_args,
        inherited_count: inherited,
        span: raw.span.clone(),
    })
}

/// Validates every binding of `cfg` against `arch`. On success returns one
/// completed binding per clause, in input order.
pub fn validate_bindings(
    arch: &Architecture,
    scope: &Scope<'_>,
    cfg: &ApplicationConfig,
) -> Result<Vec<CompletedBinding>, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    if cfg.target_arch != arch.name {
        diags.push(Diagnostic::error(
            codes::BIND_WRONG_ARCH,
            cfg.span.clone(),
            format!(
                "application `{}` targets `{}`, not `{}`",
                cfg.name, cfg.target_arch, arch.name
            ),
        ));
        return Err(diags);
    }

    let mut seen: HashMap<&QualifiedName, &RawBinding> = HashMap::new();
    let mut completed = Vec::with_capacity(cfg.bindings.len());
    for raw in &cfg.bindings {
        if let Some(first) = seen.insert(&raw.path, raw) {
            diags.push(
                Diagnostic::error(
                    codes::BIND_TWICE,
                    raw.span.clone(),
                    format!("`{}` is bound more than once", raw.path),
                )
                .with_related(first.span.clone()),
            );
            continue;
        }
        match complete_binding(arch, scope, raw) {
            Ok(b) => completed.push(b),
            Err(d) => diags.push(d),
        }
    }

    if diags.is_empty() {
        Ok(completed)
    } else {
        sort_diagnostics(&mut diags);
        Err(diags)
    }
}

/// Type of the component that declares the SCD at `path`: the root type for
/// single-segment paths.
fn parent_type(arch: &Architecture, scope: &Scope<'_>, path: &QualifiedName) -> Option<Identifier> {
    match path.parent() {
        None => Some(arch.root.clone()),
        Some(parent) => scope
            .resolve_path(&arch.root, &parent)
            .ok()
            .and_then(|chain| chain.last().map(|s| s.type_name.clone())),
    }
}

/// All pairs of bindings that target the same-named SCD of the same parent
/// type with different component types.
pub fn detect_clashes(
    bindings: &[CompletedBinding],
    arch: &Architecture,
    scope: &Scope<'_>,
) -> Vec<Clash> {
    let parents: Vec<Option<Identifier>> = bindings
        .iter()
        .map(|b| parent_type(arch, scope, &b.path))
        .collect();
    let mut clashes = Vec::new();
    for (i, a) in bindings.iter().enumerate() {
        for (j, b) in bindings.iter().enumerate().skip(i + 1) {
            let (Some(pa), Some(pb)) = (&parents[i], &parents[j]) else {
                continue;
            };
            if pa == pb && a.path.last() == b.path.last() && a.target_type != b.target_type {
                clashes.push(Clash {
                    first: a.clone(),
                    second: b.clone(),
                    parent_type: pa.clone(),
                    scd_name: a.path.last().clone(),
                });
            }
        }
    }
    clashes
}
