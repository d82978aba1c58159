//! Output of bound architectures: canonical ADL text, the `cnc-bound/1`
//! structured document, and the expanded instance tree.

use std::collections::HashMap;

use serde::Serialize;

use crate::diagnostic::{codes, Diagnostic, SourceSpan};
use crate::model::{
    ArgumentValue, Behavior, ComponentKind, ComponentType, ConfigParam, Decl, Identifier,
    QualifiedName,
};
use crate::syntax::PrettyPrint;
use crate::transform::BoundArchitecture;

pub const BOUND_SCHEMA: &str = "cnc-bound/1";

/// Canonical `.arc` text of a bound architecture.
pub fn emit_adl(result: &BoundArchitecture) -> String {
    result.to_architecture().pretty_print()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceBehavior {
    None,
    Model,
    Impl(String),
}

/// One component instance of a fully configured hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceNode {
    /// `None` for the root instance.
    pub path: Option<QualifiedName>,
    pub type_name: Identifier,
    pub resolved_args: Vec<ArgumentValue>,
    pub rts: Option<String>,
    pub behavior: InstanceBehavior,
    pub children: Vec<InstanceNode>,
}

impl InstanceNode {
    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(InstanceNode::node_count)
            .sum::<usize>()
    }

    /// Pre-order traversal.
    pub fn iter(&self) -> impl Iterator<Item = &InstanceNode> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }

    pub fn find(&self, path: &str) -> Option<&InstanceNode> {
        self.iter()
            .find(|n| n.path.as_ref().is_some_and(|p| p.to_string() == path))
    }

    /// `path : Type (args)` per node, pre-order; the root prints as `<root>`.
    pub fn render_lines(&self) -> Vec<String> {
        self.iter()
            .map(|n| {
                let path = n
                    .path
                    .as_ref()
                    .map_or_else(|| "<root>".to_string(), ToString::to_string);
                let args: Vec<String> = n.resolved_args.iter().map(ToString::to_string).collect();
                format!("{path} : {} ({})", n.type_name, args.join(", "))
            })
            .collect()
    }
}

/// Expands the instance tree of a bound architecture from its root.
pub fn instantiate(result: &BoundArchitecture) -> Result<InstanceNode, Diagnostic> {
    let types: HashMap<&str, &ComponentType> = result
        .component_types()
        .map(|t| (t.name.as_str(), t))
        .collect();
    let root = types.get(result.root.as_str()).ok_or_else(|| {
        Diagnostic::error(
            codes::ROOT_UNRESOLVED,
            SourceSpan::default(),
            format!(
                "root `{}` is missing from the bound architecture",
                result.root
            ),
        )
    })?;
    if !effective_params(root, &types).is_empty() {
        return Err(Diagnostic::error(
            codes::ROOT_PARAMS,
            root.span.clone(),
            format!(
                "root `{}` must not have configuration parameters",
                root.name
            ),
        ));
    }
    build_node(root, None, Vec::new(), &types, 0)
}

fn effective_params<'a>(
    t: &'a ComponentType,
    types: &HashMap<&str, &'a ComponentType>,
) -> Vec<&'a ConfigParam> {
    let mut chain = vec![t];
    let mut next = t.super_type.as_deref().and_then(|s| types.get(s).copied());
    while let Some(s) = next {
        if chain.iter().any(|c| c.name == s.name) {
            break;
        }
        chain.push(s);
        next = s.super_type.as_deref().and_then(|n| types.get(n).copied());
    }
    chain.iter().rev().flat_map(|c| c.params.iter()).collect()
}

fn build_node(
    t: &ComponentType,
    path: Option<QualifiedName>,
    args: Vec<ArgumentValue>,
    types: &HashMap<&str, &ComponentType>,
    depth: usize,
) -> Result<InstanceNode, Diagnostic> {
    if depth > types.len() {
        return Err(Diagnostic::error(
            codes::CONTAINMENT_CYCLE,
            t.span.clone(),
            format!("`{}` contains itself", t.name),
        ));
    }
    let mut children = Vec::with_capacity(t.subcomponents.len());
    for scd in &t.subcomponents {
        let child = types.get(scd.type_name.as_str()).ok_or_else(|| {
            Diagnostic::error(
                codes::TYPE_UNRESOLVED,
                scd.span.clone(),
                format!("unknown component type `{}`", scd.type_name),
            )
        })?;
        let child_path = QualifiedName::join(path.as_ref(), &scd.name);
        children.push(build_node(
            child,
            Some(child_path),
            scd.arguments.clone(),
            types,
            depth + 1,
        )?);
    }
    let behavior = match &t.behavior {
        _ if t.kind() == Some(ComponentKind::Composed) => InstanceBehavior::None,
        Some(Behavior::Model) => InstanceBehavior::Model,
        Some(Behavior::Impl(r)) => InstanceBehavior::Impl(r.clone()),
        None => InstanceBehavior::None,
    };
    Ok(InstanceNode {
        path,
        type_name: t.name.clone(),
        resolved_args: args,
        rts: t.rts.clone(),
        behavior,
        children,
    })
}

// ---- cnc-bound/1 ----

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ArgDoc<'a> {
    Int { value: i64 },
    Boolean { value: bool },
    String { value: &'a str },
    Enum { r#enum: &'a str, literal: &'a str },
}

impl<'a> From<&'a ArgumentValue> for ArgDoc<'a> {
    fn from(a: &'a ArgumentValue) -> Self {
        match a {
            ArgumentValue::Int(v) => ArgDoc::Int { value: *v },
            ArgumentValue::Bool(v) => ArgDoc::Boolean { value: *v },
            ArgumentValue::Str(s) => ArgDoc::String { value: s },
            ArgumentValue::Enum { enum_name, literal } => ArgDoc::Enum {
                r#enum: enum_name,
                literal,
            },
        }
    }
}

fn args_doc(args: &[ArgumentValue]) -> Vec<ArgDoc<'_>> {
    args.iter().map(ArgDoc::from).collect()
}

#[derive(Serialize)]
struct Document<'a> {
    schema: &'static str,
    name: &'a str,
    root: &'a str,
    libraries: Vec<&'a str>,
    enums: Vec<EnumDoc<'a>>,
    types: Vec<TypeDoc<'a>>,
    provenance: Vec<ProvenanceDoc<'a>>,
    bound: Vec<BoundDoc<'a>>,
    instances: Option<NodeDoc<'a>>,
}

#[derive(Serialize)]
struct EnumDoc<'a> {
    name: &'a str,
    literals: Vec<&'a str>,
}

#[derive(Serialize)]
struct TypeDoc<'a> {
    name: &'a str,
    kind: String,
    origin: &'static str,
    extends: Option<&'a str>,
    rts: Option<&'a str>,
    behavior: Option<BehaviorDoc<'a>>,
    params: Vec<NamedTypeDoc<'a>>,
    ports: Vec<PortDoc<'a>>,
    subcomponents: Vec<ScdDoc<'a>>,
    connectors: Vec<ConnectorDoc>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum BehaviorDoc<'a> {
    Model,
    Impl { reference: &'a str },
}

#[derive(Serialize)]
struct NamedTypeDoc<'a> {
    name: &'a str,
    r#type: &'a str,
}

#[derive(Serialize)]
struct PortDoc<'a> {
    name: &'a str,
    direction: String,
    r#type: &'a str,
}

#[derive(Serialize)]
struct ScdDoc<'a> {
    name: &'a str,
    r#type: &'a str,
    args: Vec<ArgDoc<'a>>,
}

#[derive(Serialize)]
struct ConnectorDoc {
    source: String,
    target: String,
}

#[derive(Serialize)]
struct ProvenanceDoc<'a> {
    r#type: &'a str,
    original: &'a str,
    path: String,
}

#[derive(Serialize)]
struct BoundDoc<'a> {
    path: String,
    r#type: &'a str,
    args: Vec<ArgDoc<'a>>,
}

#[derive(Serialize)]
struct NodeDoc<'a> {
    path: String,
    r#type: &'a str,
    args: Vec<ArgDoc<'a>>,
    rts: Option<&'a str>,
    behavior: Option<BehaviorDoc<'a>>,
    children: Vec<NodeDoc<'a>>,
}

fn node_doc(n: &InstanceNode) -> NodeDoc<'_> {
    NodeDoc {
        path: n.path.as_ref().map(ToString::to_string).unwrap_or_default(),
        r#type: &n.type_name,
        args: args_doc(&n.resolved_args),
        rts: n.rts.as_deref(),
        behavior: match &n.behavior {
            InstanceBehavior::None => None,
            InstanceBehavior::Model => Some(BehaviorDoc::Model),
            InstanceBehavior::Impl(r) => Some(BehaviorDoc::Impl { reference: r }),
        },
        children: n.children.iter().map(node_doc).collect(),
    }
}

/// The `cnc-bound/1` document: types, provenance, bound declarations and the
/// instance tree, with a fixed key order. Instance paths use the same dotted
/// notation as binding paths; the root's path is the empty string.
pub fn emit_structured(result: &BoundArchitecture) -> String {
    let tree = instantiate(result).ok();
    let types = result
        .component_types()
        .map(|t| TypeDoc {
            name: &t.name,
            kind: t
                .kind()
                .map_or_else(|| "undetermined".into(), |k| k.to_string()),
            origin: if result.is_fresh(&t.name) {
                "fresh"
            } else {
                "library"
            },
            extends: t.super_type.as_deref(),
            rts: t.rts.as_deref(),
            behavior: match &t.behavior {
                Some(Behavior::Model) => Some(BehaviorDoc::Model),
                Some(Behavior::Impl(r)) => Some(BehaviorDoc::Impl { reference: r }),
                None => None,
            },
            params: t
                .params
                .iter()
                .map(|p| NamedTypeDoc {
                    name: &p.name,
                    r#type: &p.ty,
                })
                .collect(),
            ports: t
                .ports
                .iter()
                .map(|p| PortDoc {
                    name: &p.name,
                    direction: p.direction.to_string(),
                    r#type: &p.ty,
                })
                .collect(),
            subcomponents: t
                .subcomponents
                .iter()
                .map(|s| ScdDoc {
                    name: &s.name,
                    r#type: &s.type_name,
                    args: args_doc(&s.arguments),
                })
                .collect(),
            connectors: t
                .connectors
                .iter()
                .map(|c| ConnectorDoc {
                    source: c.source.to_string(),
                    target: c.target.to_string(),
                })
                .collect(),
        })
        .collect();

    let doc = Document {
        schema: BOUND_SCHEMA,
        name: &result.name,
        root: &result.root,
        libraries: result.libraries.iter().map(|l| l.as_str()).collect(),
        enums: result
            .decls
            .iter()
            .filter_map(|d| match d {
                Decl::Enum(e) => Some(EnumDoc {
                    name: &e.name,
                    literals: e.literals.iter().map(|l| l.as_str()).collect(),
                }),
                Decl::Component(_) => None,
            })
            .collect(),
        types,
        provenance: result
            .provenance
            .iter()
            .map(|p| ProvenanceDoc {
                r#type: &p.fresh,
                original: &p.original,
                path: p.path.as_ref().map(ToString::to_string).unwrap_or_default(),
            })
            .collect(),
        bound: result
            .bound
            .iter()
            .map(|b| BoundDoc {
                path: b.path.to_string(),
                r#type: &b.type_name,
                args: args_doc(&b.args),
            })
            .collect(),
        instances: tree.as_ref().map(node_doc),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}
