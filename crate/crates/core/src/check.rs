//! Well-formedness checks for architectures and libraries.
//!
//! Checks never stop at the first problem; every rule runs and contributes
//! diagnostics, which are returned sorted by (file, span, code).

use std::collections::{HashMap, HashSet};

use crate::diagnostic::{codes, sort_diagnostics, Diagnostic, SourceSpan};
use crate::model::{
    Architecture, ArgumentValue, ComponentKind, ComponentType, Connector, Direction, Endpoint,
    EnumDecl, Library, LibraryKind, Port, SubcomponentDecl,
};
use crate::scope::Scope;

/// How platform dependence is judged for an architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlatformRule {
    /// Nothing reachable from the root may be platform-specific.
    Independent,
    /// Nothing instantiated from the root may be abstract.
    Specific,
}

pub fn check_architecture(arch: &Architecture, scope: &Scope<'_>) -> Vec<Diagnostic> {
    check_architecture_with(arch, scope, PlatformRule::Independent)
}

pub fn check_architecture_with(
    arch: &Architecture,
    scope: &Scope<'_>,
    rule: PlatformRule,
) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for e in arch.enums() {
        check_enum(e, &mut diags);
    }
    for t in arch.component_types() {
        check_type(t, scope, &mut diags);
    }
    check_containment(arch.component_types(), scope, &mut diags);

    match arch.component_type(&arch.root) {
        None => diags.push(Diagnostic::error(
            codes::ROOT_UNRESOLVED,
            arch.root_span.clone(),
            format!(
                "root `{}` is not a component type of architecture `{}`",
                arch.root, arch.name
            ),
        )),
        Some(root) => match rule {
            PlatformRule::Independent => check_platform_independent(arch, root, scope, &mut diags),
            PlatformRule::Specific => check_platform_specific(arch, root, scope, &mut diags),
        },
    }

    sort_diagnostics(&mut diags);
    diags
}

pub fn check_library(lib: &Library, scope: &Scope<'_>) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for e in lib.enums() {
        check_enum(e, &mut diags);
    }
    for t in lib.component_types() {
        check_type(t, scope, &mut diags);
    }
    check_containment(lib.component_types(), scope, &mut diags);

    match lib.kind {
        LibraryKind::Model => {
            for import in &lib.imports {
                let imported = scope.libraries().iter().find(|l| l.name == import.name);
                if imported.is_some_and(|l| l.kind == LibraryKind::Implementation) {
                    diags.push(Diagnostic::error(
                        codes::MODELLIB_IMPURE,
                        import.span.clone(),
                        format!(
                            "model library `{}` imports implementation library `{}`",
                            lib.name, import.name
                        ),
                    ));
                }
            }
            for t in lib.component_types() {
                if t.is_platform_specific() {
                    diags.push(Diagnostic::error(
                        codes::MODELLIB_IMPURE,
                        t.span.clone(),
                        format!(
                            "model library `{}` contains platform-specific component `{}`",
                            lib.name, t.name
                        ),
                    ));
                }
            }
        }
        LibraryKind::Implementation => {
            for t in lib.component_types() {
                check_impl_type(lib, t, scope, &mut diags);
            }
        }
    }

    sort_diagnostics(&mut diags);
    diags
}

fn check_impl_type(
    lib: &Library,
    t: &ComponentType,
    scope: &Scope<'_>,
    diags: &mut Vec<Diagnostic>,
) {
    if t.is_abstract {
        diags.push(Diagnostic::error(
            codes::IMPLLIB_ABSTRACT,
            t.span.clone(),
            format!(
                "implementation library `{}` declares abstract component `{}`",
                lib.name, t.name
            ),
        ));
        return;
    }
    let extends_abstract = scope
        .ancestry(&t.name)
        .iter()
        .skip(1)
        .any(|a| a.is_abstract);
    if !extends_abstract {
        diags.push(Diagnostic::error(
            codes::IMPLLIB_NO_SUPER,
            t.span.clone(),
            format!("`{}` does not extend any abstract component type", t.name),
        ));
    }
    if t.kind() == Some(ComponentKind::AtomicImpl) && t.rts.is_none() {
        diags.push(Diagnostic::error(
            codes::IMPL_NO_RTS,
            t.span.clone(),
            format!("`{}` has an implementation but no `rts` tag", t.name),
        ));
    }
    for scd in &t.subcomponents {
        if scope
            .component(&scd.type_name)
            .is_some_and(|c| c.is_abstract)
        {
            diags.push(Diagnostic::error(
                codes::IMPLLIB_ABSTRACT_SCD,
                scd.span.clone(),
                format!(
                    "platform-specific `{}` instantiates abstract `{}` as `{}`",
                    t.name, scd.type_name, scd.name
                ),
            ));
        }
    }
}

fn check_enum(e: &EnumDecl, diags: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for l in &e.literals {
        if !seen.insert(l.as_str()) {
            diags.push(Diagnostic::error(
                codes::ENUM_LITERAL_DUP,
                e.span.clone(),
                format!("enumeration `{}` repeats literal `{l}`", e.name),
            ));
        }
    }
}

/// Rules that apply to every component type wherever it is declared.
fn check_type(t: &ComponentType, scope: &Scope<'_>, diags: &mut Vec<Diagnostic>) {
    check_kind(t, diags);

    let mut acyclic = true;
    if let Some(sup) = &t.super_type {
        if scope.component(sup).is_none() {
            diags.push(Diagnostic::error(
                codes::TYPE_UNRESOLVED,
                t.span.clone(),
                format!("`{}` extends unknown component type `{sup}`", t.name),
            ));
        } else if let Some(members) = extends_cycle(t, scope) {
            acyclic = false;
            // one report per cycle, on its first member in source order
            if members.iter().all(|m| t.span <= m.span) {
                let names: Vec<&str> = members.iter().map(|m| m.name.as_str()).collect();
                let mut d = Diagnostic::error(
                    codes::EXTENDS_CYCLE,
                    t.span.clone(),
                    format!(
                        "inheritance is cyclic: {} -> {}",
                        names.join(" -> "),
                        t.name
                    ),
                );
                for m in &members[1..] {
                    d = d.with_related(m.span.clone());
                }
                diags.push(d);
            }
        }
    }

    for p in &t.params {
        if !scope.is_data_type(&p.ty) {
            diags.push(Diagnostic::error(
                codes::TYPE_UNRESOLVED,
                p.span.clone(),
                format!("unknown data type `{}` of parameter `{}`", p.ty, p.name),
            ));
        }
    }
    for p in &t.ports {
        if !scope.is_data_type(&p.ty) {
            diags.push(Diagnostic::error(
                codes::TYPE_UNRESOLVED,
                p.span.clone(),
                format!("unknown data type `{}` of port `{}`", p.ty, p.name),
            ));
        }
    }

    if acyclic {
        check_redefinitions(t, scope, diags);
    }

    let mut scd_names: HashMap<&str, &SubcomponentDecl> = HashMap::new();
    for scd in &t.subcomponents {
        if let Some(first) = scd_names.insert(&scd.name, scd) {
            diags.push(
                Diagnostic::error(
                    codes::SCD_DUP,
                    scd.span.clone(),
                    format!(
                        "`{}` declares more than one subcomponent named `{}`",
                        t.name, scd.name
                    ),
                )
                .with_related(first.span.clone()),
            );
        }
        check_scd(scd, scope, diags);
    }

    for conn in &t.connectors {
        check_connector(t, conn, scope, diags);
    }
    if t.is_composed() {
        check_unused_ports(t, scope, diags);
    }
}

fn check_kind(t: &ComponentType, diags: &mut Vec<Diagnostic>) {
    if t.is_abstract {
        let mut parts = Vec::new();
        if !t.subcomponents.is_empty() {
            parts.push("subcomponents");
        }
        if !t.connectors.is_empty() {
            parts.push("connectors");
        }
        if t.behavior.is_some() {
            parts.push("a behavior");
        }
        if t.rts.is_some() {
            parts.push("an rts tag");
        }
        if !parts.is_empty() {
            diags.push(Diagnostic::error(
                codes::ABSTRACT_IMPURE,
                t.span.clone(),
                format!(
                    "abstract component `{}` must not have {}",
                    t.name,
                    parts.join(" or ")
                ),
            ));
        }
        return;
    }
    match t.kind() {
        Some(ComponentKind::Composed) if t.behavior.is_some() => {
            diags.push(Diagnostic::error(
                codes::COMPOSED_BEHAVIOR,
                t.span.clone(),
                format!(
                    "composed component `{}` must not declare a behavior",
                    t.name
                ),
            ));
        }
        Some(_) => {}
        None => {
            let empty = t.ports.is_empty()
                && t.params.is_empty()
                && t.connectors.is_empty()
                && t.super_type.is_none();
            if empty {
                diags.push(Diagnostic::error(
                    codes::KIND_UNDETERMINED,
                    t.span.clone(),
                    format!(
                        "`{}` is neither abstract, composed, nor has a behavior",
                        t.name
                    ),
                ));
            } else {
                diags.push(Diagnostic::error(
                    codes::NO_BEHAVIOR,
                    t.span.clone(),
                    format!("atomic component `{}` has no behavior", t.name),
                ));
            }
        }
    }
}

/// Members of the inheritance cycle through `t`, starting with `t`.
fn extends_cycle<'a>(t: &'a ComponentType, scope: &Scope<'a>) -> Option<Vec<&'a ComponentType>> {
    let mut members = vec![t];
    let mut next = t.super_type.as_deref();
    while let Some(name) = next {
        if name == t.name.as_str() {
            return Some(members);
        }
        if members.iter().any(|m| m.name == name) {
            // a cycle further up; reported on its own members
            return None;
        }
        let c = scope.component(name)?;
        members.push(c);
        next = c.super_type.as_deref();
    }
    None
}

fn check_redefinitions(t: &ComponentType, scope: &Scope<'_>, diags: &mut Vec<Diagnostic>) {
    let inherited: Vec<_> = scope.ancestry(&t.name).into_iter().skip(1).collect();
    let mut port_names: HashSet<&str> = inherited
        .iter()
        .flat_map(|a| a.ports.iter().map(|p| p.name.as_str()))
        .collect();
    for p in &t.ports {
        if !port_names.insert(&p.name) {
            diags.push(Diagnostic::error(
                codes::PORT_REDEF,
                p.span.clone(),
                format!("port `{}` of `{}` is already defined", p.name, t.name),
            ));
        }
    }
    let mut param_names: HashSet<&str> = inherited
        .iter()
        .flat_map(|a| a.params.iter().map(|p| p.name.as_str()))
        .collect();
    for p in &t.params {
        if !param_names.insert(&p.name) {
            diags.push(Diagnostic::error(
                codes::PARAM_REDEF,
                p.span.clone(),
                format!("parameter `{}` of `{}` is already defined", p.name, t.name),
            ));
        }
    }
}

/// Why an argument does not fit a parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ArgProblem {
    Mismatch,
    UnknownEnum,
    UnknownLiteral,
}

pub(crate) fn check_argument(
    scope: &Scope<'_>,
    arg: &ArgumentValue,
    param_ty: &str,
) -> Result<(), ArgProblem> {
    match arg {
        ArgumentValue::Int(_) if param_ty == "int" => Ok(()),
        ArgumentValue::Bool(_) if param_ty == "boolean" => Ok(()),
        ArgumentValue::Str(_) if param_ty == "string" => Ok(()),
        ArgumentValue::Enum { enum_name, literal } => {
            let e = scope.enum_decl(enum_name).ok_or(ArgProblem::UnknownEnum)?;
            if !e.literals.contains(literal) {
                Err(ArgProblem::UnknownLiteral)
            } else if enum_name.as_str() != param_ty {
                Err(ArgProblem::Mismatch)
            } else {
                Ok(())
            }
        }
        _ => Err(ArgProblem::Mismatch),
    }
}

fn check_scd(scd: &SubcomponentDecl, scope: &Scope<'_>, diags: &mut Vec<Diagnostic>) {
    if scope.component(&scd.type_name).is_none() {
        diags.push(Diagnostic::error(
            codes::TYPE_UNRESOLVED,
            scd.span.clone(),
            format!(
                "subcomponent `{}` has unknown component type `{}`",
                scd.name, scd.type_name
            ),
        ));
        return;
    }
    let params = scope.effective_params(&scd.type_name);
    if params.len() != scd.arguments.len() {
        diags.push(Diagnostic::error(
            codes::ARG_ARITY,
            scd.span.clone(),
            format!(
                "`{}` expects {} argument(s), subcomponent `{}` passes {}",
                scd.type_name,
                params.len(),
                scd.name,
                scd.arguments.len()
            ),
        ));
        return;
    }
    for (i, (arg, param)) in scd.arguments.iter().zip(&params).enumerate() {
        if let Err(problem) = check_argument(scope, arg, &param.ty) {
            let (code, message) = match problem {
                ArgProblem::Mismatch => (
                    codes::ARG_TYPE,
                    format!(
                        "argument {} of `{}` is `{arg}`, parameter `{}` has type `{}`",
                        i + 1,
                        scd.name,
                        param.name,
                        param.ty
                    ),
                ),
                ArgProblem::UnknownEnum => (
                    codes::TYPE_UNRESOLVED,
                    format!("unknown enumeration in argument `{arg}`"),
                ),
                ArgProblem::UnknownLiteral => (
                    codes::ENUM_LITERAL,
                    format!("unknown enumeration literal `{arg}`"),
                ),
            };
            diags.push(Diagnostic::error(code, scd.span.clone(), message));
        }
    }
}

enum EndpointIssue {
    Unresolved(String),
    Direction(String),
}

fn resolve_endpoint<'a>(
    owner: &ComponentType,
    ep: &Endpoint,
    is_source: bool,
    scope: &Scope<'a>,
) -> Result<&'a Port, EndpointIssue> {
    let (port, wanted) = match &ep.scd {
        None => (
            scope.effective_port(&owner.name, &ep.port),
            if is_source {
                Direction::In
            } else {
                Direction::Out
            },
        ),
        Some(scd_name) => {
            let scd = owner.subcomponent(scd_name).ok_or_else(|| {
                EndpointIssue::Unresolved(format!(
                    "`{}` has no subcomponent `{scd_name}`",
                    owner.name
                ))
            })?;
            (
                scope.effective_port(&scd.type_name, &ep.port),
                if is_source {
                    Direction::Out
                } else {
                    Direction::In
                },
            )
        }
    };
    let port = port.ok_or_else(|| EndpointIssue::Unresolved(format!("no port `{ep}`")))?;
    if port.direction != wanted {
        let role = if is_source { "source" } else { "target" };
        return Err(EndpointIssue::Direction(format!(
            "`{ep}` is an {} port and cannot be a connector {role}",
            port.direction
        )));
    }
    Ok(port)
}

fn check_connector(
    owner: &ComponentType,
    conn: &Connector,
    scope: &Scope<'_>,
    diags: &mut Vec<Diagnostic>,
) {
    let mut ends = Vec::with_capacity(2);
    for (ep, is_source) in [(&conn.source, true), (&conn.target, false)] {
        match resolve_endpoint(owner, ep, is_source, scope) {
            Ok(p) => ends.push(p),
            Err(EndpointIssue::Unresolved(msg)) => diags.push(Diagnostic::error(
                codes::CONN_UNRESOLVED,
                conn.span.clone(),
                msg,
            )),
            Err(EndpointIssue::Direction(msg)) => {
                diags.push(Diagnostic::error(codes::CONN_DIR, conn.span.clone(), msg))
            }
        }
    }
    if let [src, dst] = ends[..] {
        if src.ty != dst.ty {
            diags.push(Diagnostic::error(
                codes::CONN_TYPE,
                conn.span.clone(),
                format!(
                    "connector `{} -> {}` joins `{}` to `{}`",
                    conn.source, conn.target, src.ty, dst.ty
                ),
            ));
        }
    }
}

fn check_unused_ports(t: &ComponentType, scope: &Scope<'_>, diags: &mut Vec<Diagnostic>) {
    let used: HashSet<(Option<&str>, &str)> = t
        .connectors
        .iter()
        .flat_map(|c| [&c.source, &c.target])
        .map(|e| (e.scd.as_deref(), e.port.as_str()))
        .collect();
    for p in scope.effective_ports(&t.name) {
        if !used.contains(&(None, p.name.as_str())) {
            diags.push(Diagnostic::warning(
                codes::PORT_UNUSED,
                t.span.clone(),
                format!("port `{}` of `{}` is not connected", p.name, t.name),
            ));
        }
    }
    for scd in &t.subcomponents {
        for p in scope.effective_ports(&scd.type_name) {
            if !used.contains(&(Some(scd.name.as_str()), p.name.as_str())) {
                diags.push(Diagnostic::warning(
                    codes::PORT_UNUSED,
                    scd.span.clone(),
                    format!("port `{}.{}` is not connected", scd.name, p.name),
                ));
            }
        }
    }
}

/// Reports subcomponent declarations that (transitively) instantiate their
/// own enclosing type.
fn check_containment<'t>(
    types: impl Iterator<Item = &'t ComponentType>,
    scope: &Scope<'_>,
    diags: &mut Vec<Diagnostic>,
) {
    fn visit<'s>(
        t: &'s ComponentType,
        scope: &Scope<'s>,
        stack: &mut Vec<&'s str>,
        done: &mut HashSet<&'s str>,
        found: &mut Vec<(SourceSpan, String)>,
    ) {
        stack.push(&t.name);
        for scd in &t.subcomponents {
            let Some(child) = scope.component(&scd.type_name) else {
                continue;
            };
            if stack.contains(&child.name.as_str()) {
                found.push((
                    scd.span.clone(),
                    format!(
                        "subcomponent `{}` of `{}` makes `{}` contain itself",
                        scd.name, t.name, child.name
                    ),
                ));
            } else if !done.contains(child.name.as_str()) {
                visit(child, scope, stack, done, found);
            }
        }
        stack.pop();
        done.insert(&t.name);
    }

    let mut done = HashSet::new();
    let mut found = Vec::new();
    for t in types {
        if let Some(t) = scope.component(&t.name) {
            if !done.contains(t.name.as_str()) {
                visit(t, scope, &mut Vec::new(), &mut done, &mut found);
            }
        }
    }
    diags.extend(
        found
            .into_iter()
            .map(|(span, msg)| Diagnostic::error(codes::CONTAINMENT_CYCLE, span, msg)),
    );
}

/// Every (declaring SCD, type) pair instantiated below `root`, each type once.
fn instantiated<'a>(
    root: &'a ComponentType,
    scope: &Scope<'a>,
) -> Vec<(Option<&'a SubcomponentDecl>, &'a ComponentType)> {
    let mut out = vec![(None, root)];
    let mut seen: HashSet<&str> = HashSet::from([root.name.as_str()]);
    let mut i = 0;
    while i < out.len() {
        let t = out[i].1;
        for scd in &t.subcomponents {
            if let Some(child) = scope.component(&scd.type_name) {
                if seen.insert(child.name.as_str()) {
                    out.push((Some(scd), child));
                }
            }
        }
        i += 1;
    }
    out
}

fn check_platform_independent(
    arch: &Architecture,
    root: &ComponentType,
    scope: &Scope<'_>,
    diags: &mut Vec<Diagnostic>,
) {
    let own: HashSet<&str> = arch.component_types().map(|t| t.name.as_str()).collect();
    for t in arch.component_types() {
        if t.is_platform_specific() {
            diags.push(Diagnostic::error(
                codes::PLATFORM_LEAK,
                t.span.clone(),
                format!(
                    "`{}` is platform-specific; architectures must be platform-independent",
                    t.name
                ),
            ));
        }
    }
    let Some(root) = scope.component(&root.name) else {
        return;
    };
    for (scd, t) in instantiated(root, scope) {
        for ancestor in scope.ancestry(&t.name) {
            if own.contains(ancestor.name.as_str()) {
                continue;
            }
            let from_impl_lib = scope.origin(&ancestor.name).and_then(|o| o.library_kind())
                == Some(LibraryKind::Implementation);
            if from_impl_lib || ancestor.is_platform_specific() {
                let span = scd.map_or_else(|| arch.root_span.clone(), |s| s.span.clone());
                diags.push(Diagnostic::error(
                    codes::PLATFORM_LEAK,
                    span,
                    format!(
                        "`{}` uses platform-specific component type `{}`",
                        t.name, ancestor.name
                    ),
                ));
            }
        }
    }
}

fn check_platform_specific(
    arch: &Architecture,
    root: &ComponentType,
    scope: &Scope<'_>,
    diags: &mut Vec<Diagnostic>,
) {
    let Some(root) = scope.component(&root.name) else {
        return;
    };
    // every SCD, not only the first per type, may point at an abstract type
    for (_, t) in instantiated(root, scope) {
        for scd in &t.subcomponents {
            if scope
                .component(&scd.type_name)
                .is_some_and(|c| c.is_abstract)
            {
                diags.push(Diagnostic::error(
                    codes::ABSTRACT_INSTANCE,
                    scd.span.clone(),
                    format!(
                        "subcomponent `{}` of `{}` still has abstract type `{}`",
                        scd.name, t.name, scd.type_name
                    ),
                ));
            }
        }
    }
    if root.is_abstract {
        diags.push(Diagnostic::error(
            codes::ABSTRACT_INSTANCE,
            arch.root_span.clone(),
            format!("root `{}` is abstract", root.name),
        ));
    }
}
