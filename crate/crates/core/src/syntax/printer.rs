//! Canonical text form: two-space indentation, one declaration per line,
//! declaration order preserved, no comments.

use std::fmt::Write;

use crate::binding::ApplicationConfig;
use crate::model::{
    quote, Architecture, ArgumentValue, Behavior, ComponentType, Decl, EnumDecl, Import, Library,
};

/// Anything with a canonical textual form.
pub trait PrettyPrint {
    fn pretty_print(&self) -> String;
}

pub fn pretty_print<T: PrettyPrint + ?Sized>(model: &T) -> String {
    model.pretty_print()
}

impl PrettyPrint for Architecture {
    fn pretty_print(&self) -> String {
        let mut out = format!("architecture {} {{\n", self.name);
        write_imports(&mut out, &self.imports, "  ");
        write_decls(&mut out, &self.decls);
        writeln!(out, "  root {};", self.root).unwrap();
        out.push_str("}\n");
        out
    }
}

impl PrettyPrint for Library {
    fn pretty_print(&self) -> String {
        let mut out = format!("library {} : {} {{\n", self.name, self.kind);
        write_imports(&mut out, &self.imports, "  ");
        write_decls(&mut out, &self.decls);
        out.push_str("}\n");
        out
    }
}

impl PrettyPrint for ApplicationConfig {
    fn pretty_print(&self) -> String {
        let mut out = String::new();
        write_imports(&mut out, &self.imports, "");
        writeln!(out, "application {} for {} {{", self.name, self.target_arch).unwrap();
        for b in &self.bindings {
            writeln!(
                out,
                "  bind {} to {}{};",
                b.path,
                b.target_type,
                args(&b.added_args)
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

impl PrettyPrint for ComponentType {
    fn pretty_print(&self) -> String {
        let mut out = String::new();
        write_component(&mut out, self);
        out
    }
}

fn write_imports(out: &mut String, imports: &[Import], indent: &str) {
    for i in imports {
        writeln!(out, "{indent}import {}.*;", i.name).unwrap();
    }
}

fn write_decls(out: &mut String, decls: &[Decl]) {
    for d in decls {
        match d {
            Decl::Component(c) => write_component(out, c),
            Decl::Enum(e) => write_enum(out, e),
        }
    }
}

fn write_enum(out: &mut String, e: &EnumDecl) {
    let literals: Vec<&str> = e.literals.iter().map(|l| l.as_str()).collect();
    writeln!(out, "  enum {} {{ {} }}", e.name, literals.join(", ")).unwrap();
}

fn write_component(out: &mut String, c: &ComponentType) {
    out.push_str("  ");
    if c.is_abstract {
        out.push_str("abstract ");
    }
    write!(out, "component {}", c.name).unwrap();
    if !c.params.is_empty() {
        let params: Vec<String> = c
            .params
            .iter()
            .map(|p| format!("{} {}", p.ty, p.name))
            .collect();
        write!(out, "({})", params.join(", ")).unwrap();
    }
    if let Some(s) = &c.super_type {
        write!(out, " extends {s}").unwrap();
    }
    if let Some(rts) = &c.rts {
        write!(out, " rts {}", quote(rts)).unwrap();
    }
    out.push_str(" {\n");
    for p in &c.ports {
        writeln!(out, "    port {} {} {};", p.direction, p.ty, p.name).unwrap();
    }
    for s in &c.subcomponents {
        writeln!(
            out,
            "    component {}{} {};",
            s.type_name,
            args(&s.arguments),
            s.name
        )
        .unwrap();
    }
    for k in &c.connectors {
        writeln!(out, "    connect {} -> {};", k.source, k.target).unwrap();
    }
    match &c.behavior {
        Some(Behavior::Model) => out.push_str("    behavior model;\n"),
        Some(Behavior::Impl(r)) => writeln!(out, "    behavior impl {};", quote(r)).unwrap(),
        None => {}
    }
    out.push_str("  }\n");
}

/// `(a, b)` or nothing for an empty list.
pub fn args(values: &[ArgumentValue]) -> String {
    if values.is_empty() {
        String::new()
    } else {
        let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_appcfg, parse_library};

    #[test]
    fn empty_model_library_canonical_text() {
        let lib = parse_library("l.lib", "library L : model { }")
            .model
            .unwrap();
        assert_eq!(lib.pretty_print(), "library L : model {\n}\n");
    }

    #[test]
    fn application_canonical_text() {
        let cfg = parse_appcfg(
            "a.app",
            "import X.*; application A for R { bind a.b to T (1, E.x); bind c to U; }",
        )
        .model
        .unwrap();
        assert_eq!(
            cfg.pretty_print(),
            "import X.*;\napplication A for R {\n  bind a.b to T(1, E.x);\n  bind c to U;\n}\n"
        );
    }
}
