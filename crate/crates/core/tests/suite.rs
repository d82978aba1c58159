//! Whole-pipeline properties over every fixture in `tests/fixtures/suite`.

mod common;

use std::collections::{BTreeMap, HashMap};

use cnc_core::pipeline::{bind, check_all};
use cnc_core::{
    build_scope, check_architecture_with, emit_adl, instantiate, parse_architecture, ArgumentValue,
    BindMode, ComponentType, InstanceBehavior, Library, PlatformRule,
};
use common::Case;

/// Type table built straight from the parsed declarations, without going
/// through scope resolution.
fn type_table(case: &Case) -> HashMap<&str, &ComponentType> {
    case.arch
        .component_types()
        .chain(case.libs.iter().flat_map(Library::component_types))
        .map(|t| (t.name.as_str(), t))
        .collect()
}

#[derive(Debug, PartialEq)]
struct Expected {
    type_name: String,
    args: Vec<ArgumentValue>,
    bound: bool,
}

/// Expected instance table: path -> (original or bound type, args). Bound
/// subtrees are expanded with the bound type's own subcomponents.
fn expected_instances(case: &Case) -> (BTreeMap<String, Expected>, usize) {
    let types = type_table(case);
    let bindings: HashMap<String, (&str, Vec<ArgumentValue>)> = case
        .app
        .bindings
        .iter()
        .map(|b| {
            (
                b.path.to_string(),
                (b.target_type.as_str(), b.added_args.clone()),
            )
        })
        .collect();
    let mut out = BTreeMap::new();
    let mut copies = 1;

    fn walk(
        t: &ComponentType,
        prefix: &str,
        under_bound: bool,
        types: &HashMap<&str, &ComponentType>,
        bindings: &HashMap<String, (&str, Vec<ArgumentValue>)>,
        out: &mut BTreeMap<String, Expected>,
        copies: &mut usize,
    ) {
        for scd in &t.subcomponents {
            let path = if prefix.is_empty() {
                scd.name.to_string()
            } else {
                format!("{prefix}.{}", scd.name)
            };
            let (ty, args, bound) = match bindings.get(&path).filter(|_| !under_bound) {
                Some((target, added)) => {
                    let mut args = scd.arguments.clone();
                    args.extend(added.iter().cloned());
                    (types[target], args, true)
                }
                None => {
                    if !under_bound {
                        *copies += 1;
                    }
                    (types[scd.type_name.as_str()], scd.arguments.clone(), false)
                }
            };
            out.insert(
                path.clone(),
                Expected {
                    type_name: ty.name.to_string(),
                    args,
                    bound,
                },
            );
            walk(
                ty,
                &path,
                under_bound || bound,
                types,
                bindings,
                out,
                copies,
            );
        }
    }

    let root = types[case.arch.root.as_str()];
    walk(root, "", false, &types, &bindings, &mut out, &mut copies);
    (out, copies)
}

#[test]
fn suite_has_required_coverage() {
    let cases = common::suite();
    assert!(cases.len() >= 10);
    let root_scds = |c: &Case| {
        c.arch
            .component_type(&c.arch.root)
            .unwrap()
            .subcomponents
            .len()
    };
    assert!(cases.iter().any(|c| root_scds(c) == 0));
    let depth = |c: &Case| {
        expected_instances(c)
            .0
            .keys()
            .map(|p| p.split('.').count())
            .max()
            .unwrap_or(0)
    };
    assert!(cases.iter().any(|c| depth(c) >= 3));
    assert!(cases.iter().any(|c| c.app.imports.len() >= 2));
}

#[test]
fn every_fixture_checks_clean() {
    for case in common::suite() {
        let diags = check_all(&case.arch, &case.libs);
        assert!(
            diags.iter().all(|d| !d.is_error()),
            "{}: {diags:#?}",
            case.name
        );
    }
}

#[test]
fn bound_results_are_valid_and_abstract_free() {
    for case in common::suite() {
        let out = bind(&case.arch, &case.app, &case.libs, BindMode::Strict)
            .unwrap_or_else(|d| panic!("{}: {d:#?}", case.name));
        let tree = instantiate(&out.result).unwrap();
        for node in tree.iter() {
            let t = out.result.component_type(&node.type_name).unwrap();
            assert!(!t.is_abstract, "{}: {} is abstract", case.name, t.name);
            if node.children.is_empty() {
                assert_ne!(node.behavior, InstanceBehavior::None, "{}", case.name);
            }
        }
    }
}

#[test]
fn fresh_type_count_matches_oracle() {
    for case in common::suite() {
        let out = bind(&case.arch, &case.app, &case.libs, BindMode::Strict).unwrap();
        let (_, copies) = expected_instances(&case);
        assert_eq!(
            cnc_core::count_new_types(&out.result),
            copies,
            "{}",
            case.name
        );
    }
}

#[test]
fn instances_match_oracle() {
    for case in common::suite() {
        let out = bind(&case.arch, &case.app, &case.libs, BindMode::Strict).unwrap();
        let tree = instantiate(&out.result).unwrap();
        let (expected, _) = expected_instances(&case);
        assert_eq!(tree.node_count(), expected.len() + 1, "{}", case.name);
        for (path, exp) in &expected {
            let node = tree
                .find(path)
                .unwrap_or_else(|| panic!("{}: missing {path}", case.name));
            assert_eq!(node.resolved_args, exp.args, "{}: {path}", case.name);
            if exp.bound {
                assert_eq!(
                    node.type_name.as_str(),
                    exp.type_name,
                    "{}: {path}",
                    case.name
                );
            } else {
                // unbound declarations keep the original type, copied or shared
                let original = out
                    .result
                    .provenance
                    .iter()
                    .find(|p| p.fresh == node.type_name)
                    .map_or(node.type_name.as_str(), |p| p.original.as_str());
                assert_eq!(original, exp.type_name, "{}: {path}", case.name);
            }
        }
    }
}

#[test]
fn no_instantiated_type_reuses_an_architecture_type_name() {
    for case in common::suite() {
        let out = bind(&case.arch, &case.app, &case.libs, BindMode::Strict).unwrap();
        let tree = instantiate(&out.result).unwrap();
        for node in tree.iter() {
            assert!(
                case.arch.component_type(&node.type_name).is_none(),
                "{}: {}",
                case.name,
                node.type_name
            );
        }
    }
}

#[test]
fn emitted_text_is_a_fixpoint() {
    for case in common::suite() {
        let out = bind(&case.arch, &case.app, &case.libs, BindMode::Strict).unwrap();
        let text = emit_adl(&out.result);
        let reparsed = parse_architecture("out.arc", &text)
            .into_result()
            .unwrap_or_else(|d| panic!("{}: {d:#?}", case.name));
        assert_eq!(cnc_core::pretty_print(&reparsed), text, "{}", case.name);
        let scope = build_scope(&reparsed, &[]).unwrap();
        let again = check_architecture_with(&reparsed, &scope, PlatformRule::Specific);
        assert!(
            again.iter().all(|d| !d.is_error()),
            "{}: {again:#?}",
            case.name
        );
    }
}

/// A random acyclic architecture: type `Ci` may contain `Cj` for `j > i` or
/// one of the abstract sensor and actuator types. The last type is atomic.
#[derive(Debug, Clone)]
struct RandomArch {
    /// Per type, its subcomponents: `Ok(j)` for `Cj`, `Err(k)` for abstract
    /// type `k`.
    types: Vec<Vec<Result<usize, usize>>>,
}

const ABSTRACT: [(&str, &str, &str); 3] = [
    ("Color", "", "NXTColor(Port.A)"),
    ("Motor", "(5)", "NXTMotor(Port.B)"),
    ("HRI", "", "NXTHRI"),
];

fn random_arch() -> impl proptest::strategy::Strategy<Value = RandomArch> {
    use proptest::prelude::*;
    (1usize..6).prop_flat_map(|n| {
        let per_type: Vec<_> = (0..n)
            .map(|i| {
                if i + 1 == n {
                    Just(Vec::new()).boxed()
                } else {
                    let later = (i + 1..n).collect::<Vec<_>>();
                    prop::collection::vec(
                        prop_oneof![
                            prop::sample::select(later).prop_map(Ok),
                            (0usize..3).prop_map(Err),
                        ],
                        0..4,
                    )
                    .boxed()
                }
            })
            .collect();
        per_type.prop_map(|types| RandomArch { types })
    })
}

impl RandomArch {
    fn source(&self) -> String {
        let mut s = String::from("architecture Gen {\n  import SenseActModels.*;\n");
        for (i, scds) in self.types.iter().enumerate() {
            s.push_str(&format!("  component C{i} {{\n"));
            for (k, scd) in scds.iter().enumerate() {
                match scd {
                    Ok(j) => s.push_str(&format!("    component C{j} s{k};\n")),
                    Err(a) => {
                        let (t, args, _) = ABSTRACT[*a];
                        s.push_str(&format!("    component {t}{args} s{k};\n"))
                    }
                }
            }
            if scds.is_empty() {
                s.push_str("    behavior model;\n");
            }
            s.push_str("  }\n");
        }
        s.push_str("  root C0;\n}\n");
        s
    }

    /// (instance path, abstract type index) for every instance below the root.
    fn instances(&self) -> Vec<(String, Option<usize>)> {
        fn walk(a: &RandomArch, t: usize, prefix: &str, out: &mut Vec<(String, Option<usize>)>) {
            for (k, scd) in a.types[t].iter().enumerate() {
                let path = if prefix.is_empty() {
                    format!("s{k}")
                } else {
                    format!("{prefix}.s{k}")
                };
                match scd {
                    Ok(j) => {
                        out.push((path.clone(), None));
                        walk(a, *j, &path, out);
                    }
                    Err(x) => out.push((path, Some(*x))),
                }
            }
        }
        let mut out = Vec::new();
        walk(self, 0, "", &mut out);
        out
    }

    fn app(&self) -> String {
        let mut s = String::from("import NXTLejos.*;\napplication GenApp for Gen {\n");
        for (path, abs) in self.instances() {
            if let Some(a) = abs {
                s.push_str(&format!("  bind {path} to {};\n", ABSTRACT[a].2));
            }
        }
        s.push_str("}\n");
        s
    }
}

proptest::proptest! {
    #[test]
    fn random_hierarchies_bind_to_valid_abstract_free_results(g in random_arch()) {
        let arch = common::arch_src(&g.source());
        let cfg = common::app_src(&g.app());
        let libs = common::explorer_libs();
        let out = bind(&arch, &cfg, &libs, BindMode::Strict);
        proptest::prop_assert!(out.is_ok(), "{}\n{}\n{:?}", g.source(), g.app(), out.err());
        let out = out.unwrap();
        let instances = g.instances();
        let composed_or_atomic = instances.iter().filter(|(_, a)| a.is_none()).count();
        proptest::prop_assert_eq!(cnc_core::count_new_types(&out.result), composed_or_atomic + 1);
        proptest::prop_assert_eq!(out.result.bound.len(), instances.len() - composed_or_atomic);
        let tree = instantiate(&out.result).unwrap();
        proptest::prop_assert_eq!(tree.node_count(), instances.len() + 1);
        for node in tree.iter() {
            proptest::prop_assert!(!out.result.component_type(&node.type_name).unwrap().is_abstract);
        }
        let text = emit_adl(&out.result);
        let reparsed = parse_architecture("gen.arc", &text).into_result().unwrap();
        proptest::prop_assert_eq!(cnc_core::pretty_print(&reparsed), text);
    }
}
