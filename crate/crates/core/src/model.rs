//! In-memory representation of architectures, libraries and their parts.
//!
//! Values are plain data: they are produced by the parser or the binding
//! transformation and never mutated in place once handed to a checker.

use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use thiserror::Error;

use crate::diagnostic::SourceSpan;

pub const BUILTIN_TYPES: [&str; 3] = ["int", "boolean", "string"];

/// Words reserved by the concrete syntax; never valid as identifiers.
pub const KEYWORDS: [&str; 23] = [
    "abstract",
    "application",
    "architecture",
    "behavior",
    "bind",
    "component",
    "connect",
    "enum",
    "extends",
    "false",
    "for",
    "impl",
    "implementation",
    "import",
    "in",
    "library",
    "model",
    "out",
    "port",
    "root",
    "rts",
    "to",
    "true",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("identifier must not be empty")]
    Empty,
    #[error("`{0}` is not a valid identifier")]
    Invalid(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
}

/// A single name token: `[A-Za-z][A-Za-z0-9_]*`, not a keyword.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identifier(String);

impl Identifier {
    pub fn new(text: impl Into<String>) -> Result<Self, NameError> {
        let text = text.into();
        let mut chars = text.chars();
        match chars.next() {
            None => return Err(NameError::Empty),
            Some(c) if !c.is_ascii_alphabetic() => return Err(NameError::Invalid(text)),
            _ => {}
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(NameError::Invalid(text));
        }
        if KEYWORDS.contains(&text.as_str()) {
            return Err(NameError::Reserved(text));
        }
        Ok(Self(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Deref for Identifier {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Identifier {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Identifier {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl PartialEq<str> for Identifier {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for Identifier {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

/// Dot-separated, nonempty sequence of identifiers naming a subcomponent
/// declaration relative to an architecture's root type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QualifiedName(Vec<Identifier>);

impl QualifiedName {
    pub fn new(segments: Vec<Identifier>) -> Result<Self, NameError> {
        if segments.is_empty() {
            return Err(NameError::Empty);
        }
        Ok(Self(segments))
    }

    pub fn single(segment: Identifier) -> Self {
        Self(vec![segment])
    }

    /// `self.segment`
    pub fn child(&self, segment: &Identifier) -> Self {
        let mut segments = self.0.clone();
        segments.push(segment.clone());
        Self(segments)
    }

    /// Extends an optional prefix: the empty prefix yields a one-segment name.
    pub fn join(prefix: Option<&QualifiedName>, segment: &Identifier) -> Self {
        match prefix {
            Some(p) => p.child(segment),
            None => Self::single(segment.clone()),
        }
    }

    pub fn segments(&self) -> &[Identifier] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> &Identifier {
        self.0.last().expect("qualified names are nonempty")
    }

    pub fn parent(&self) -> Option<QualifiedName> {
        (self.0.len() > 1).then(|| Self(self.0[..self.0.len() - 1].to_vec()))
    }
}

impl fmt::Display for QualifiedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(s)?;
        }
        Ok(())
    }
}

impl FromStr for QualifiedName {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let segments = s
            .split('.')
            .map(Identifier::new)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(segments)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumDecl {
    pub name: Identifier,
    pub literals: Vec<Identifier>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArgumentValue {
    Int(i64),
    Bool(bool),
    Str(String),
    Enum {
        enum_name: Identifier,
        literal: Identifier,
    },
}

impl fmt::Display for ArgumentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgumentValue::Int(v) => write!(f, "{v}"),
            ArgumentValue::Bool(v) => write!(f, "{v}"),
            ArgumentValue::Str(s) => write!(f, "{}", quote(s)),
            ArgumentValue::Enum { enum_name, literal } => write!(f, "{enum_name}.{literal}"),
        }
    }
}

/// Renders `s` as a string literal of the concrete syntax.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigParam {
    pub name: Identifier,
    pub ty: Identifier,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    In,
    Out,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::In => "in",
            Direction::Out => "out",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: Identifier,
    pub direction: Direction,
    pub ty: Identifier,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcomponentDecl {
    pub name: Identifier,
    pub type_name: Identifier,
    pub arguments: Vec<ArgumentValue>,
    pub span: SourceSpan,
}

/// A connector endpoint: an own port, or `scd.port`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub scd: Option<Identifier>,
    pub port: Identifier,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.scd {
            Some(scd) => write!(f, "{scd}.{}", self.port),
            None => write!(f, "{}", self.port),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connector {
    pub source: Endpoint,
    pub target: Endpoint,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Behavior {
    Model,
    Impl(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Abstract,
    AtomicModel,
    AtomicImpl,
    Composed,
}

impl ComponentKind {
    pub fn is_atomic(self) -> bool {
        !matches!(self, ComponentKind::Composed)
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentKind::Abstract => "abstract",
            ComponentKind::AtomicModel => "atomicModel",
            ComponentKind::AtomicImpl => "atomicImpl",
            ComponentKind::Composed => "composed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentType {
    pub name: Identifier,
    pub is_abstract: bool,
    pub params: Vec<ConfigParam>,
    pub ports: Vec<Port>,
    pub super_type: Option<Identifier>,
    pub rts: Option<String>,
    pub behavior: Option<Behavior>,
    pub subcomponents: Vec<SubcomponentDecl>,
    pub connectors: Vec<Connector>,
    pub span: SourceSpan,
}

impl ComponentType {
    /// Kind as determined by the declaration's members. `None` when the
    /// declaration is neither abstract, composed, nor carries a behavior.
    pub fn kind(&self) -> Option<ComponentKind> {
        if self.is_abstract {
            Some(ComponentKind::Abstract)
        } else if !self.subcomponents.is_empty() {
            Some(ComponentKind::Composed)
        } else {
            match self.behavior {
                Some(Behavior::Model) => Some(ComponentKind::AtomicModel),
                Some(Behavior::Impl(_)) => Some(ComponentKind::AtomicImpl),
                None => None,
            }
        }
    }

    pub fn is_composed(&self) -> bool {
        self.kind() == Some(ComponentKind::Composed)
    }

    pub fn subcomponent(&self, name: &str) -> Option<&SubcomponentDecl> {
        self.subcomponents.iter().find(|s| s.name == name)
    }

    /// True when the declaration carries platform-specific parts.
    pub fn is_platform_specific(&self) -> bool {
        self.rts.is_some() || matches!(self.behavior, Some(Behavior::Impl(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Component(ComponentType),
    Enum(EnumDecl),
}

impl Decl {
    pub fn name(&self) -> &Identifier {
        match self {
            Decl::Component(c) => &c.name,
            Decl::Enum(e) => &e.name,
        }
    }

    pub fn span(&self) -> &SourceSpan {
        match self {
            Decl::Component(c) => &c.span,
            Decl::Enum(e) => &e.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    pub name: Identifier,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LibraryKind {
    Model,
    Implementation,
}

impl fmt::Display for LibraryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LibraryKind::Model => "model",
            LibraryKind::Implementation => "implementation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    pub name: Identifier,
    pub kind: LibraryKind,
    pub imports: Vec<Import>,
    pub decls: Vec<Decl>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Architecture {
    pub name: Identifier,
    pub imports: Vec<Import>,
    pub decls: Vec<Decl>,
    pub root: Identifier,
    pub root_span: SourceSpan,
    pub span: SourceSpan,
}

macro_rules! decl_accessors {
    ($t:ty) => {
        impl $t {
            pub fn component_types(&self) -> impl Iterator<Item = &ComponentType> {
                self.decls.iter().filter_map(|d| match d {
                    Decl::Component(c) => Some(c),
                    Decl::Enum(_) => None,
                })
            }

            pub fn enums(&self) -> impl Iterator<Item = &EnumDecl> {
                self.decls.iter().filter_map(|d| match d {
                    Decl::Enum(e) => Some(e),
                    Decl::Component(_) => None,
                })
            }

            pub fn component_type(&self, name: &str) -> Option<&ComponentType> {
                self.component_types().find(|c| c.name == name)
            }
        }
    };
}

decl_accessors!(Library);
decl_accessors!(Architecture);

/// Clears every source span, leaving only structure. Two models are
/// structurally equal when they compare equal after stripping.
pub trait StripSpans {
    fn strip_spans(&mut self);

    fn stripped(&self) -> Self
    where
        Self: Clone,
    {
        let mut copy = self.clone();
        copy.strip_spans();
        copy
    }
}

pub fn structurally_equal<T: StripSpans + Clone + PartialEq>(a: &T, b: &T) -> bool {
    a.stripped() == b.stripped()
}

impl<T: StripSpans> StripSpans for Vec<T> {
    fn strip_spans(&mut self) {
        self.iter_mut().for_each(StripSpans::strip_spans);
    }
}

macro_rules! strip_span_field {
    ($t:ty) => {
        impl StripSpans for $t {
            fn strip_spans(&mut self) {
                self.span = SourceSpan::default();
            }
        }
    };
}

strip_span_field!(EnumDecl);
strip_span_field!(ConfigParam);
strip_span_field!(Port);
strip_span_field!(SubcomponentDecl);
strip_span_field!(Connector);
strip_span_field!(Import);

impl StripSpans for ComponentType {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.params.strip_spans();
        self.ports.strip_spans();
        self.subcomponents.strip_spans();
        self.connectors.strip_spans();
    }
}

impl StripSpans for Decl {
    fn strip_spans(&mut self) {
        match self {
            Decl::Component(c) => c.strip_spans(),
            Decl::Enum(e) => e.strip_spans(),
        }
    }
}

impl StripSpans for Library {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.imports.strip_spans();
        self.decls.strip_spans();
    }
}

impl StripSpans for Architecture {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.root_span = SourceSpan::default();
        self.imports.strip_spans();
        self.decls.strip_spans();
    }
}
