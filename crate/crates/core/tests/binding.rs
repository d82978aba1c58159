mod common;

use std::collections::BTreeSet;

use cnc_core::{
    codes, complete_binding, detect_clashes, validate_bindings, ArgumentValue, Clash,
    CompletedBinding,
};
use proptest::prelude::*;

fn port(l: &str) -> ArgumentValue {
    ArgumentValue::Enum {
        enum_name: "Port".parse().unwrap(),
        literal: l.parse().unwrap(),
    }
}

fn bind_error(app_text: &str) -> &'static str {
    let arch = common::explorer();
    let cfg = common::app_src(app_text);
    let libs = common::explorer_libs();
    let scope = common::binding_scope(&arch, &cfg, &libs);
    let diags = validate_bindings(&arch, &scope, &cfg).unwrap_err();
    assert_eq!(diags.len(), 1, "{diags:#?}");
    diags[0].code
}

fn one(bind: &str) -> String {
    format!("import NXTLejos.*;\napplication A for Explorer {{\n  {bind}\n}}\n")
}

#[test]
fn listing_completes_five_bindings() {
    let arch = common::explorer();
    let cfg = common::app("explorer/nxtexplorer.app");
    let libs = common::explorer_libs();
    let done = common::completed(&arch, &cfg, &libs);
    assert_eq!(done.len(), 5);

    let left = done
        .iter()
        .find(|b| b.path.to_string() == "left.motor")
        .unwrap();
    assert_eq!(left.target_type, "NXTMotor");
    assert_eq!(left.full_args, [ArgumentValue::Int(100), port("C")]);
    assert_eq!(left.inherited_count, 1);
    assert_eq!(left.added_args(), [port("C")]);

    let col = &done[0];
    assert_eq!(col.full_args, [port("A")]);
    assert_eq!(col.inherited_count, 0);
    let ui = done.iter().find(|b| b.path.to_string() == "ui").unwrap();
    assert!(ui.full_args.is_empty());
}

#[test]
fn invalid_bindings_are_rejected() {
    assert_eq!(
        bind_error(&one("bind ctrl to NXTColor;")),
        codes::BIND_NOT_ABSTRACT
    );
    assert_eq!(
        bind_error(&one("bind col to NXTMotor(Port.A);")),
        codes::BIND_NOT_SUBTYPE
    );
    assert_eq!(
        bind_error(&one("bind left.motor to NXTMotor(100, Port.C);")),
        codes::BIND_ARITY
    );
    assert_eq!(bind_error(&one("bind col to NXTColor;")), codes::BIND_ARITY);
    assert_eq!(
        bind_error(&one("bind col to NXTColor(Port.E);")),
        codes::BIND_ARG_TYPE
    );
    assert_eq!(
        bind_error(&one("bind col to NXTColor(1);")),
        codes::BIND_ARG_TYPE
    );
    assert_eq!(
        bind_error(&one("bind col to Color;")),
        codes::BIND_NOT_PLATFORM
    );
    assert_eq!(
        bind_error(&one("bind col to Nothing;")),
        codes::TYPE_UNRESOLVED
    );
    assert_eq!(
        bind_error(&one("bind ctrl.color to NXTColor(Port.A);")),
        codes::BIND_PATH
    );
    assert_eq!(
        bind_error(&one(
            "bind col to NXTColor(Port.A);\n  bind col to NXTColor(Port.B);"
        )),
        codes::BIND_TWICE
    );
    assert_eq!(
        bind_error("application A for Voyager {\n}\n"),
        codes::BIND_WRONG_ARCH
    );
}

#[test]
fn every_invalid_binding_is_reported() {
    let arch = common::explorer();
    let cfg = common::app_src(&one(
        "bind ctrl to NXTColor;\n  bind col to NXTMotor(Port.A);\n  bind dist to NXTUltraSonic;",
    ));
    let libs = common::explorer_libs();
    let scope = common::binding_scope(&arch, &cfg, &libs);
    let diags = validate_bindings(&arch, &scope, &cfg).unwrap_err();
    let found: Vec<_> = diags.iter().map(|d| d.code).collect();
    assert_eq!(
        found,
        [
            codes::BIND_NOT_ABSTRACT,
            codes::BIND_NOT_SUBTYPE,
            codes::BIND_ARITY
        ]
    );
}

#[test]
fn listing_has_no_clash() {
    let arch = common::explorer();
    let cfg = common::app("explorer/nxtexplorer.app");
    let libs = common::explorer_libs();
    let scope = common::binding_scope(&arch, &cfg, &libs);
    let done = validate_bindings(&arch, &scope, &cfg).unwrap();
    // same type with different arguments is not a clash
    assert!(detect_clashes(&done, &arch, &scope).is_empty());
}

#[test]
fn mixed_motors_clash_once() {
    let arch = common::explorer();
    let cfg = common::app("explorer/clash.app");
    let libs = common::explorer_libs();
    let scope = common::binding_scope(&arch, &cfg, &libs);
    let done = validate_bindings(&arch, &scope, &cfg).unwrap();
    let clashes = detect_clashes(&done, &arch, &scope);
    assert_eq!(clashes.len(), 1);
    let c = &clashes[0];
    assert_eq!(c.parent_type, "ValidatedMotor");
    assert_eq!(c.scd_name, "motor");
    let d = c.to_diagnostic(false);
    assert_eq!(d.code, codes::CLASH);
    assert!(d.message.contains("ValidatedMotor") && d.message.contains("motor"));
    assert_eq!(d.related.len(), 1);
}

#[test]
fn single_binding_never_clashes() {
    let arch = common::explorer();
    let cfg = common::app_src(&one("bind left.motor to NXTMotor(Port.A);"));
    let libs = common::explorer_libs();
    let scope = common::binding_scope(&arch, &cfg, &libs);
    let done = validate_bindings(&arch, &scope, &cfg).unwrap();
    assert!(detect_clashes(&done, &arch, &scope).is_empty());
}

#[test]
fn completion_is_deterministic_and_keeps_architecture_arguments() {
    let arch = common::explorer();
    let cfg = common::app("explorer/nxtexplorer.app");
    let libs = common::explorer_libs();
    let scope = common::binding_scope(&arch, &cfg, &libs);
    for raw in &cfg.bindings {
        let a = complete_binding(&arch, &scope, raw).unwrap();
        let b = complete_binding(&arch, &scope, raw).unwrap();
        assert_eq!(a, b);
        let scd = *cnc_core::resolve_path(&arch, &scope, &raw.path)
            .unwrap()
            .last()
            .unwrap();
        assert_eq!(a.full_args[..a.inherited_count], scd.arguments[..]);
        assert_eq!(a.added_args(), &raw.added_args[..]);
    }
}

fn clash_key(c: &Clash) -> BTreeSet<String> {
    [c.first.path.to_string(), c.second.path.to_string()].into()
}

const MOTORS: [&str; 3] = ["NXTMotor(Port.A)", "ROSMotor(Port.B)", "NXTTwinDrive"];

fn rotor_app(choice: &[usize]) -> String {
    let mut s = String::from(
        "import NXTLejos.*;\nimport ROSMotors.*;\nimport NXTDrives.*;\napplication T for Tricopter {\n",
    );
    for (i, c) in choice.iter().enumerate() {
        s.push_str(&format!("  bind r{}.motor to {};\n", i + 1, MOTORS[*c]));
    }
    s.push_str("}\n");
    s
}

proptest! {
    #[test]
    fn clash_count_matches_pairwise_oracle(choice in prop::collection::vec(0usize..3, 3)) {
        let case = common::suite_case("06_three_way");
        let cfg = common::app_src(&rotor_app(&choice));
        let scope = common::binding_scope(&case.arch, &cfg, &case.libs);
        let done = validate_bindings(&case.arch, &scope, &cfg).unwrap();
        let clashes = detect_clashes(&done, &case.arch, &scope);
        // every rotor shares parent type Rotor, so pairs clash iff types differ
        let mut expected = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                if choice[i] != choice[j] {
                    expected += 1;
                }
            }
        }
        prop_assert_eq!(clashes.len(), expected);
    }

    #[test]
    fn clash_set_is_order_invariant(
        order in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle()
    ) {
        let arch = common::explorer();
        let cfg = common::app("explorer/clash.app");
        let libs = common::explorer_libs();
        let scope = common::binding_scope(&arch, &cfg, &libs);
        let done = validate_bindings(&arch, &scope, &cfg).unwrap();
        let shuffled: Vec<CompletedBinding> = order.iter().map(|&i| done[i].clone()).collect();
        let a: BTreeSet<_> = detect_clashes(&done, &arch, &scope).iter().map(clash_key).collect();
        let b: BTreeSet<_> = detect_clashes(&shuffled, &arch, &scope).iter().map(clash_key).collect();
        prop_assert_eq!(a, b);
    }
}
