//! Toolchain for a small component & connector architecture description
//! language.
//!
//! Platform-independent architectures use abstract component types from
//! model libraries as extension points. An application configuration binds
//! each abstract subcomponent declaration to a platform-specific type from an
//! implementation library, possibly adding arguments. [`bind_architecture`]
//! rewrites the hierarchy so that every declaration has either its bound type
//! or a fresh per-instance copy of its original type, which yields a valid,
//! fully platform-specific architecture.
//!
//! Pipeline: [`syntax`] → [`scope`] → [`check`] → [`binding`] →
//! [`transform`] → [`emit`].

pub mod binding;
pub mod check;
pub mod diagnostic;
pub mod emit;
pub mod model;
pub mod pipeline;
pub mod scope;
pub mod syntax;
pub mod transform;

pub use binding::{
    complete_binding, detect_clashes, validate_bindings, ApplicationConfig, Clash,
    CompletedBinding, RawBinding,
};
pub use check::{check_architecture, check_architecture_with, check_library, PlatformRule};
pub use diagnostic::{codes, Diagnostic, Severity, SourceSpan};
pub use emit::{emit_adl, emit_structured, instantiate, InstanceBehavior, InstanceNode};
pub use model::{
    structurally_equal, Architecture, ArgumentValue, ComponentKind, ComponentType, Identifier,
    Library, LibraryKind, QualifiedName, StripSpans,
};
pub use scope::{build_library_scope, build_scope, resolve_path, Scope};
pub use syntax::{parse_appcfg, parse_architecture, parse_library, pretty_print, ParseResult};
pub use transform::{
    bind_architecture, count_new_types, unique_copy, BindMode, BoundArchitecture, FreshNameRegistry,
};
