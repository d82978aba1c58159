//! Name resolution across an architecture (or library) and its imports, plus
//! the inheritance queries built on top of it.

use std::collections::{BTreeMap, HashSet, VecDeque};

use thiserror::Error;

use crate::diagnostic::{codes, Diagnostic};
use crate::model::{
    Architecture, ComponentType, ConfigParam, Decl, EnumDecl, Identifier, Import, Library,
    LibraryKind, Port, QualifiedName, SubcomponentDecl, BUILTIN_TYPES,
};

/// Where a declaration visible in a scope comes from.
#[derive(Debug, Clone, Copy)]
pub enum Origin<'a> {
    /// The compilation unit the scope was built for.
    Unit,
    Library(&'a Library),
}

impl Origin<'_> {
    pub fn library_kind(&self) -> Option<LibraryKind> {
        match self {
            Origin::Unit => None,
            Origin::Library(lib) => Some(lib.kind),
        }
    }

    pub fn library_name(&self) -> Option<&Identifier> {
        match self {
            Origin::Unit => None,
            Origin::Library(lib) => Some(&lib.name),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Entry<'a> {
    Component(&'a ComponentType),
    Enum(&'a EnumDecl),
}

#[derive(Debug, Clone, Copy)]
pub struct ScopeEntry<'a> {
    pub entry: Entry<'a>,
    pub origin: Origin<'a>,
}

#[derive(Debug, Clone)]
pub struct Scope<'a> {
    entries: BTreeMap<&'a str, ScopeEntry<'a>>,
    libraries: Vec<&'a Library>,
}

/// Builds the scope of an architecture: its own declarations plus everything
/// reachable through its imports.
pub fn build_scope<'a>(
    arch: &'a Architecture,
    libs: &'a [Library],
) -> Result<Scope<'a>, Vec<Diagnostic>> {
    Scope::build(&arch.decls, arch.imports.iter(), libs, None)
}

/// Builds the scope a library is checked in: itself plus its imports.
pub fn build_library_scope<'a>(
    lib: &'a Library,
    libs: &'a [Library],
) -> Result<Scope<'a>, Vec<Diagnostic>> {
    Scope::build(&lib.decls, lib.imports.iter(), libs, Some(&lib.name))
}

impl<'a> Scope<'a> {
    /// Assembles a scope from a unit's own declarations and the transitive
    /// closure of `imports` over `libs`. `unit_library` names the unit when
    /// it is itself a library, so import cycles back to it are ignored.
    pub fn build(
        own: &'a [Decl],
        imports: impl IntoIterator<Item = &'a Import>,
        libs: &'a [Library],
        unit_library: Option<&Identifier>,
    ) -> Result<Self, Vec<Diagnostic>> {
        let mut scope = Scope {
            entries: BTreeMap::new(),
            libraries: Vec::new(),
        };
        let mut diags = Vec::new();

        for decl in own {
            scope.insert(decl, Origin::Unit, &mut diags);
        }

        let mut visited: HashSet<&str> = HashSet::new();
        if let Some(name) = unit_library {
            visited.insert(name.as_str());
        }
        let mut queue: VecDeque<&'a Import> = imports.into_iter().collect();
        while let Some(import) = queue.pop_front() {
            if !visited.insert(import.name.as_str()) {
                continue;
            }
            let Some(lib) = libs.iter().find(|l| l.name == import.name) else {
                diags.push(Diagnostic::error(
                    codes::IMPORT_MISSING,
                    import.span.clone(),
                    format!("imported library `{}` was not provided", import.name),
                ));
                continue;
            };
            scope.libraries.push(lib);
            for decl in &lib.decls {
                scope.insert(decl, Origin::Library(lib), &mut diags);
            }
            queue.extend(lib.imports.iter());
        }

        if diags.is_empty() {
            Ok(scope)
        } else {
            Err(diags)
        }
    }

    fn insert(&mut self, decl: &'a Decl, origin: Origin<'a>, diags: &mut Vec<Diagnostic>) {
        let name = decl.name().as_str();
        if BUILTIN_TYPES.contains(&name) {
            diags.push(Diagnostic::error(
                codes::NAME_CLASH,
                decl.span().clone(),
                format!("`{name}` is a built-in data type"),
            ));
            return;
        }
        if let Some(existing) = self.entries.get(name) {
            let previous = match existing.entry {
                Entry::Component(c) => c.span.clone(),
                Entry::Enum(e) => e.span.clone(),
            };
            // point at the unit's own declaration when it is involved
            let (at, other) = match existing.origin {
                Origin::Unit => (previous, decl.span().clone()),
                Origin::Library(_) => (decl.span().clone(), previous),
            };
            diags.push(
                Diagnostic::error(
                    codes::NAME_CLASH,
                    at,
                    format!("`{name}` is declared more than once in scope"),
                )
                .with_related(other),
            );
            return;
        }
        let entry = match decl {
            Decl::Component(c) => Entry::Component(c),
            Decl::Enum(e) => Entry::Enum(e),
        };
        self.entries.insert(name, ScopeEntry { entry, origin });
    }

    pub fn get(&self, name: &str) -> Option<&ScopeEntry<'a>> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'a str> + '_ {
        self.entries.keys().copied()
    }

    /// Libraries pulled in by imports, in discovery order.
    pub fn libraries(&self) -> &[&'a Library] {
        &self.libraries
    }

    pub fn component(&self, name: &str) -> Option<&'a ComponentType> {
        match self.entries.get(name)?.entry {
            Entry::Component(c) => Some(c),
            Entry::Enum(_) => None,
        }
    }

    pub fn enum_decl(&self, name: &str) -> Option<&'a EnumDecl> {
        match self.entries.get(name)?.entry {
            Entry::Enum(e) => Some(e),
            Entry::Component(_) => None,
        }
    }

    pub fn origin(&self, name: &str) -> Option<Origin<'a>> {
        self.entries.get(name).map(|e| e.origin)
    }

    /// Whether `ty` names a built-in data type or a visible enumeration.
    pub fn is_data_type(&self, ty: &str) -> bool {
        BUILTIN_TYPES.contains(&ty) || self.enum_decl(ty).is_some()
    }

    /// The declaration and its resolvable supertypes, nearest first. Stops
    /// at an unresolved supertype or when the chain revisits a type.
    pub fn ancestry(&self, name: &str) -> Vec<&'a ComponentType> {
        let mut chain: Vec<&'a ComponentType> = Vec::new();
        let mut next = self.component(name);
        while let Some(t) = next {
            if chain.iter().any(|c| c.name == t.name) {
                break;
            }
            chain.push(t);
            next = t.super_type.as_deref().and_then(|s| self.component(s));
        }
        chain
    }

    /// True iff following `super_type` edges from `sub` reaches `sup`
    /// (reflexive, transitive).
    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        self.ancestry(sub).iter().any(|t| t.name == sup)
    }

    /// Inherited parameters root-first, then the type's own ones.
    pub fn effective_params(&self, name: &str) -> Vec<&'a ConfigParam> {
        self.ancestry(name)
            .iter()
            .rev()
            .flat_map(|t| t.params.iter())
            .collect()
    }

    /// Inherited ports root-first, then the type's own ones.
    pub fn effective_ports(&self, name: &str) -> Vec<&'a Port> {
        self.ancestry(name)
            .iter()
            .rev()
            .flat_map(|t| t.ports.iter())
            .collect()
    }

    pub fn effective_port(&self, type_name: &str, port: &str) -> Option<&'a Port> {
        self.effective_ports(type_name)
            .into_iter()
            .find(|p| p.name == port)
    }

    /// Resolves `path` segment by segment starting inside `root`.
    pub fn resolve_path(
        &self,
        root: &str,
        path: &QualifiedName,
    ) -> Result<Vec<&'a SubcomponentDecl>, PathError> {
        let mut chain = Vec::with_capacity(path.len());
        let mut current = self
            .component(root)
            .ok_or(PathError::Unresolved { index: 0 })?;
        for (index, segment) in path.segments().iter().enumerate() {
            if !current.is_composed() {
                return Err(PathError::ThroughAtomic { index });
            }
            let scd = current
                .subcomponent(segment)
                .ok_or(PathError::Unresolved { index })?;
            chain.push(scd);
            if index + 1 < path.len() {
                current = self
                    .component(&scd.type_name)
                    .ok_or(PathError::Unresolved { index: index + 1 })?;
            }
        }
        Ok(chain)
    }
}

/// Resolves a subcomponent path against an architecture's root type.
pub fn resolve_path<'a>(
    arch: &Architecture,
    scope: &Scope<'a>,
    path: &QualifiedName,
) -> Result<Vec<&'a SubcomponentDecl>, PathError> {
    scope.resolve_path(&arch.root, path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("segment {index} does not name a subcomponent")]
    Unresolved { index: usize },
    #[error("segment {index} descends into a non-composed component type")]
    ThroughAtomic { index: usize },
}

impl PathError {
    pub fn code(&self) -> &'static str {
        match self {
            PathError::Unresolved { .. } => codes::PATH_UNRESOLVED,
            PathError::ThroughAtomic { .. } => codes::PATH_THROUGH_ATOMIC,
        }
    }

    pub fn index(&self) -> usize {
        match *self {
            PathError::Unresolved { index } | PathError::ThroughAtomic { index } => index,
        }
    }
}
