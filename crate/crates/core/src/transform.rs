//! The binding transformation.
//!
//! Starting from a renamed copy of the root type, the component hierarchy is
//! walked breadth-first. Every subcomponent declaration either receives its
//! bound platform-specific type and completed arguments, or has its type
//! replaced by a fresh, uniquely named copy of the original, which is then
//! visited in turn. Because every enclosing type ends up instantiated along
//! exactly one path, differing bindings of same-named declarations can no
//! longer conflict.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::binding::CompletedBinding;
use crate::diagnostic::{codes, has_errors, sort_diagnostics, Diagnostic, SourceSpan};
use crate::model::{
    Architecture, ArgumentValue, ComponentType, Decl, Identifier, QualifiedName, BUILTIN_TYPES,
};
use crate::scope::{Entry, Scope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BindMode {
    /// Unbound abstract declarations are errors.
    #[default]
    Strict,
    /// Unbound abstract declarations are copied and reported as warnings.
    Permissive,
}

/// Issues `<base>_<k>` names that collide with nothing in scope nor with any
/// name issued before.
#[derive(Debug, Clone)]
pub struct FreshNameRegistry {
    counter: u64,
    issued: BTreeSet<String>,
}

impl FreshNameRegistry {
    pub fn new<I, S>(taken: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            counter: 1,
            issued: taken.into_iter().map(Into::into).collect(),
        }
    }

    /// The value the next issued suffix starts probing from.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn is_taken(&self, name: &str) -> bool {
        self.issued.contains(name)
    }

    pub fn reserve(&mut self, name: &str) -> bool {
        self.issued.insert(name.to_string())
    }

    pub fn fresh(&mut self, base: &str) -> Identifier {
        loop {
            let candidate = format!("{base}_{}", self.counter);
            self.counter += 1;
            if self.issued.insert(candidate.clone()) {
                return Identifier::new(candidate).expect("suffixing a valid identifier");
            }
        }
    }
}

/// Deep copy of `t` under a fresh name. Subcomponent types still name the
/// originals.
pub fn unique_copy(t: &ComponentType, reg: &mut FreshNameRegistry) -> ComponentType {
    ComponentType {
        name: reg.fresh(&t.name),
        ..t.clone()
    }
}

/// Records which original type a fresh type copies and where it is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceEntry {
    pub fresh: Identifier,
    pub original: Identifier,
    /// Instance path of the declaration now typed by `fresh`; `None` for the
    /// root copy.
    pub path: Option<QualifiedName>,
}

/// A declaration that was bound to a platform-specific type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReference {
    pub path: QualifiedName,
    pub type_name: Identifier,
    pub args: Vec<ArgumentValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundArchitecture {
    pub name: Identifier,
    /// Enumerations first, then fresh copies in creation order, then
    /// referenced library types by name.
    pub decls: Vec<Decl>,
    pub root: Identifier,
    /// Libraries contributing declarations to `decls`, in import order.
    pub libraries: Vec<Identifier>,
    pub provenance: Vec<ProvenanceEntry>,
    pub bound: Vec<BoundReference>,
    /// Non-fatal findings such as permissive-mode unbound declarations.
    pub warnings: Vec<Diagnostic>,
}

impl BoundArchitecture {
    /// Self-contained architecture view, suitable for printing and checking.
    pub fn to_architecture(&self) -> Architecture {
        Architecture {
            name: self.name.clone(),
            imports: Vec::new(),
            decls: self.decls.clone(),
            root: self.root.clone(),
            root_span: SourceSpan::default(),
            span: SourceSpan::default(),
        }
    }

    pub fn component_types(&self) -> impl Iterator<Item = &ComponentType> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Component(c) => Some(c),
            Decl::Enum(_) => None,
        })
    }

    pub fn component_type(&self, name: &str) -> Option<&ComponentType> {
        self.component_types().find(|c| c.name == name)
    }

    pub fn is_fresh(&self, name: &str) -> bool {
        self.provenance.iter().any(|p| p.fresh == name)
    }
}

/// Number of component types the transformation created.
pub fn count_new_types(result: &BoundArchitecture) -> usize {
    result.provenance.len()
}

/// Applies validated bindings to `arch`, producing a platform-specific
/// architecture whose root type is named `name`.
pub fn bind_architecture(
    arch: &Architecture,
    scope: &Scope<'_>,
    bindings: &[CompletedBinding],
    mode: BindMode,
    name: &Identifier,
) -> Result<BoundArchitecture, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let Some(root) = scope.component(&arch.root) else {
        return Err(vec![Diagnostic::error(
            codes::ROOT_UNRESOLVED,
            arch.root_span.clone(),
            format!("root `{}` is not a component type", arch.root),
        )]);
    };

    let mut reg = FreshNameRegistry::new(scope.names());
    if !reg.reserve(name) {
        return Err(vec![Diagnostic::error(
            codes::APP_NAME_CLASH,
            arch.root_span.clone(),
            format!("application name `{name}` is already a declaration in scope"),
        )]);
    }

    let by_path: HashMap<&QualifiedName, &CompletedBinding> =
        bindings.iter().map(|b| (&b.path, b)).collect();
    let depth_limit = scope.names().count() + 1;

    let mut fresh: Vec<ComponentType> = vec![ComponentType {
        name: name.clone(),
        ..root.clone()
    }];
    let mut provenance = vec![ProvenanceEntry {
        fresh: name.clone(),
        original: root.name.clone(),
        path: None,
    }];
    let mut bound = Vec::new();
    let mut queue: VecDeque<(Option<QualifiedName>, usize)> = VecDeque::from([(None, 0)]);

    while let Some((prefix, idx)) = queue.pop_front() {
        if prefix.as_ref().map_or(0, QualifiedName::len) > depth_limit {
            diags.push(Diagnostic::error(
                codes::CONTAINMENT_CYCLE,
                fresh[idx].span.clone(),
                format!(
                    "component hierarchy below `{}` does not terminate",
                    arch.root
                ),
            ));
            break;
        }
        for i in 0..fresh[idx].subcomponents.len() {
            let scd = &fresh[idx].subcomponents[i];
            let path = QualifiedName::join(prefix.as_ref(), &scd.name);

            if let Some(b) = by_path.get(&path) {
                let scd = &mut fresh[idx].subcomponents[i];
                scd.type_name = b.target_type.clone();
                scd.arguments = b.full_args.clone();
                bound.push(BoundReference {
                    path,
                    type_name: b.target_type.clone(),
                    args: b.full_args.clone(),
                });
                continue;
            }

            let Some(original) = scope.component(&scd.type_name) else {
                diags.push(Diagnostic::error(
                    codes::TYPE_UNRESOLVED,
                    scd.span.clone(),
                    format!("unknown component type `{}`", scd.type_name),
                ));
                continue;
            };
            if original.is_abstract {
                let message = format!(
                    "`{path}` has abstract type `{}` and is not bound",
                    original.name
                );
                match mode {
                    BindMode::Strict => {
                        diags.push(Diagnostic::error(
                            codes::UNBOUND_ABSTRACT,
                            scd.span.clone(),
                            message,
                        ));
                        continue;
                    }
                    BindMode::Permissive => diags.push(Diagnostic::warning(
                        codes::UNBOUND_ABSTRACT_WARN,
                        scd.span.clone(),
                        message,
                    )),
                }
            }

            let copy = unique_copy(original, &mut reg);
            provenance.push(ProvenanceEntry {
                fresh: copy.name.clone(),
                original: original.name.clone(),
                path: Some(path.clone()),
            });
            fresh[idx].subcomponents[i].type_name = copy.name.clone();
            fresh.push(copy);
            queue.push_back((Some(path), fresh.len() - 1));
        }
    }

    sort_diagnostics(&mut diags);
    if has_errors(&diags) {
        return Err(diags);
    }

    let (dep_enums, dep_components) = dependencies(&fresh, scope);
    let mut libraries = Vec::new();
    for lib in scope.libraries() {
        let contributes = dep_enums
            .iter()
            .map(|e| &e.name)
            .chain(dep_components.iter().map(|c| &c.name))
            .any(|n| {
                scope
                    .origin(n)
                    .and_then(|o| o.library_name().cloned())
                    .as_ref()
                    == Some(&lib.name)
            });
        if contributes {
            libraries.push(lib.name.clone());
        }
    }

    let decls = dep_enums
        .into_iter()
        .map(|e| Decl::Enum(e.clone()))
        .chain(fresh.into_iter().map(Decl::Component))
        .chain(
            dep_components
                .into_iter()
                .map(|c| Decl::Component(c.clone())),
        )
        .collect();

    Ok(BoundArchitecture {
        name: name.clone(),
        decls,
        root: name.clone(),
        libraries,
        provenance,
        bound,
        warnings: diags,
    })
}

/// Declarations the fresh types depend on, sorted by name: supertypes, data
/// types of ports and parameters, enumerations used by arguments, and the
/// bound types together with everything they need in turn.
fn dependencies<'a>(
    fresh: &[ComponentType],
    scope: &Scope<'a>,
) -> (Vec<&'a crate::model::EnumDecl>, Vec<&'a ComponentType>) {
    fn refs(t: &ComponentType) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        out.extend(t.super_type.as_deref());
        out.extend(t.params.iter().map(|p| p.ty.as_str()));
        out.extend(t.ports.iter().map(|p| p.ty.as_str()));
        for scd in &t.subcomponents {
            out.push(&scd.type_name);
            out.extend(scd.arguments.iter().filter_map(|a| match a {
                ArgumentValue::Enum { enum_name, .. } => Some(enum_name.as_str()),
                _ => None,
            }));
        }
        out
    }

    let fresh_names: BTreeSet<&str> = fresh.iter().map(|t| t.name.as_str()).collect();
    let mut enums: BTreeMap<&'a str, &'a crate::model::EnumDecl> = BTreeMap::new();
    let mut components: BTreeMap<&'a str, &'a ComponentType> = BTreeMap::new();
    let mut work: Vec<String> = fresh
        .iter()
        .flat_map(|t| refs(t).into_iter().map(str::to_string))
        .collect();

    while let Some(name) = work.pop() {
        if fresh_names.contains(name.as_str())
            || BUILTIN_TYPES.contains(&name.as_str())
            || enums.contains_key(name.as_str())
            || components.contains_key(name.as_str())
        {
            continue;
        }
        match scope.get(&name).map(|e| e.entry) {
            Some(Entry::Enum(e)) => {
                enums.insert(e.name.as_str(), e);
            }
            Some(Entry::Component(c)) => {
                components.insert(c.name.as_str(), c);
                work.extend(refs(c).into_iter().map(str::to_string));
            }
            None => {}
        }
    }
    (
        enums.into_values().collect(),
        components.into_values().collect(),
    )
}
