//! Text format of systems and of basis files.
//!
//! ```text
//! # permspec v1
//! mode: disjoint
//! basis: 1 3 2
//! simples:
//! root: C<1 3 2>()
//! C<1 3 2>() = 1 | 12[C+<1 3 2>(), C<2 1>()] | 21[C-<1 3 2>(), C<1 3 2>()]
//! ...
//! ```
//!
//! Equations follow the canonical order of their left-hand sides; summands
//! list the atom first, then terms by root and components.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::builder::minimize_basis;
use crate::decomp::Root;
use crate::error::{Error, Result};
use crate::ir::{Equation, Flavor, Mode, Restriction, RestrictionTerm, System};
use crate::perm::Perm;
use crate::simples::parse_perm_list;

pub const HEADER: &str = "# permspec v1";

fn perm_list(v: &[Perm]) -> String {
    v.iter().map(Perm::to_string).collect::<Vec<_>>().join(";")
}

fn header_line(key: &str, value: &str) -> String {
    if value.is_empty() {
        format!("{key}:")
    } else {
        format!("{key}: {value}")
    }
}

pub fn serialize_system(sys: &System) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "mode: {}", sys.mode).unwrap();
    writeln!(out, "{}", header_line("basis", &perm_list(&sys.basis))).unwrap();
    writeln!(out, "{}", header_line("simples", &perm_list(&sys.simples))).unwrap();
    writeln!(out, "root: {}", sys.root).unwrap();
    for eq in sys.equations.values() {
        writeln!(out, "{eq}").unwrap();
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

fn parse_perms(s: &str) -> Result<Vec<Perm>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(|p| p.trim().parse::<Perm>()).collect()
}

/// Parses a restriction name such as `C+<1 2;2 1>(1 3 2)`.
pub fn parse_restriction(s: &str) -> Result<Restriction> {
    let s = s.trim();
    let bad = || Error::MalformedTerm(format!("bad restriction name `{s}`"));
    let (flavor, rest) = if let Some(r) = s.strip_prefix("C+") {
        (Flavor::Plus, r)
    } else if let Some(r) = s.strip_prefix("C-") {
        (Flavor::Minus, r)
    } else if let Some(r) = s.strip_prefix('C') {
        (Flavor::Any, r)
    } else {
        return Err(bad());
    };
    let rest = rest.strip_prefix('<').ok_or_else(bad)?;
    let (avoid, rest) = rest.split_once('>').ok_or_else(bad)?;
    let rest = rest.strip_prefix('(').ok_or_else(bad)?;
    let contain = rest.strip_suffix(')').ok_or_else(bad)?;
    Ok(Restriction::new(flavor, parse_perms(avoid)?, parse_perms(contain)?))
}

/// Parses a term such as `3 1 4 2[C<1 2>(), C<>(), C<>(), C<>()]`.
pub fn parse_term(s: &str) -> Result<RestrictionTerm> {
    let s = s.trim();
    let bad = || Error::MalformedTerm(format!("bad term `{s}`"));
    let (root, rest) = s.split_once('[').ok_or_else(bad)?;
    let inner = rest.strip_suffix(']').ok_or_else(bad)?;
    let root = match root.trim() {
        "12" => Root::Inc,
        "21" => Root::Dec,
        lit => Root::Simple(lit.parse()?),
    };
    let args = inner.split(", ").map(parse_restriction).collect::<Result<Vec<_>>>()?;
    RestrictionTerm::new(root, args)
}

fn parse_equation(line: &str, mode: Mode) -> Result<Equation> {
    let (lhs, rhs) = line
        .split_once(" = ")
        .ok_or_else(|| Error::MalformedTerm("missing ` = `".into()))?;
    let lhs = parse_restriction(lhs)?;
    let mut has_atom = false;
    let mut terms = Vec::new();
    let rhs = rhs.trim();
    if rhs != "0" {
        for summand in rhs.split(" | ") {
            if summand.trim() == "1" {
                has_atom = true;
            } else {
                terms.push(parse_term(summand)?);
            }
        }
    }
    let mut eq = Equation {
        lhs,
        has_atom,
        terms,
        mode,
    };
    eq.canonicalize();
    Ok(eq)
}

pub fn parse_system(text: &str) -> Result<System> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let mut next = |key: &str| -> Result<(usize, String)> {
        let (i, l) = lines.next().ok_or_else(|| err(0, format!("missing `{key}` line")))?;
        Ok((i, l.to_string()))
    };
    let (i, first) = next("header")?;
    if first != HEADER {
        return Err(err(i, format!("expected `{HEADER}`")));
    }
    let mut field = |key: &str| -> Result<(usize, String)> {
        let (i, l) = next(key)?;
        let v = l.strip_prefix(key).and_then(|r| r.strip_prefix(':'));
        v.map(|v| (i, v.trim().to_string()))
            .ok_or_else(|| err(i, format!("expected `{key}:`")))
    };
    let (i, mode) = field("mode")?;
    let mode = match mode.as_str() {
        "ambiguous" => Mode::Ambiguous,
        "disjoint" => Mode::Disjoint,
        other => return Err(err(i, format!("unknown mode `{other}`"))),
    };
    let (i, basis) = field("basis")?;
    let basis = parse_perms(&basis).map_err(|e| err(i, e.to_string()))?;
    let (i, simples) = field("simples")?;
    let simples = parse_perms(&simples).map_err(|e| err(i, e.to_string()))?;
    let (i, root) = field("root")?;
    let root = parse_restriction(&root).map_err(|e| err(i, e.to_string()))?;
    let mut equations = BTreeMap::new();
    for (i, line) in text.lines().enumerate().skip(5) {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let eq = parse_equation(line, mode).map_err(|e| err(i + 1, e.to_string()))?;
        if equations.contains_key(&eq.lhs) {
            return Err(err(i + 1, format!("{} is defined twice", eq.lhs)));
        }
        equations.insert(eq.lhs.clone(), eq);
    }
    Ok(System {
        root,
        equations,
        basis,
        simples,
        mode,
    })
}

/// Parses a basis file and reduces it to an antichain. The flag reports
/// whether the reduction removed anything.
pub fn parse_basis(text: &str) -> Result<(Vec<Perm>, bool)> {
    minimize_basis(parse_perm_list(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{ambiguous_system, closure_system, ClassInput};
    use crate::disambiguate::disambiguate_system;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn worked() -> ClassInput {
        ClassInput::new(vec![p("1243"), p("2413"), p("531642"), p("41352")], vec![p("3142")]).unwrap()
    }

    #[test]
    fn closure_text() {
        let text = serialize_system(&closure_system(&[]).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[..5],
            ["# permspec v1", "mode: disjoint", "basis:", "simples:", "root: C<>()"]
        );
        assert_eq!(lines[5], "C<>() = 1 | 12[C+<>(), C<>()] | 21[C-<>(), C<>()]");
        assert_eq!(lines.len(), 8);
    }

    #[test]
    fn worked_header_and_equation() {
        let sys = ambiguous_system(&worked()).unwrap();
        let text = serialize_system(&sys);
        assert!(text.contains("\nbasis: 1 2 4 3;2 4 1 3;4 1 3 5 2;5 3 1 6 4 2\n"));
        assert!(text.contains("\nsimples: 3 1 4 2\nroot: C<1 2 4 3>()\n"));
        assert!(text.contains("\nC<2 1>() = 1 | 12[C+<2 1>(), C<2 1>()]\n"));
    }

    #[test]
    fn round_trips() {
        let amb = ambiguous_system(&worked()).unwrap();
        let spec = disambiguate_system(&amb).unwrap();
        for sys in [closure_system(&[p("2413"), p("3142")]).unwrap(), amb, spec] {
            let text = serialize_system(&sys);
            assert_eq!(parse_system(&text).unwrap(), sys);
            assert_eq!(serialize_system(&parse_system(&text).unwrap()), text);
        }
    }

    #[test]
    fn names_and_terms() {
        let r = parse_restriction("C+<1 2;2 1>(1 3 2)").unwrap();
        assert_eq!(r.to_string(), "C+<1 2;2 1>(1 3 2)");
        assert_eq!(parse_restriction("C<>()").unwrap(), Restriction::full(Flavor::Any));
        assert!(parse_restriction("D<>()").is_err());
        let t = parse_term("12[C+<1 2>(), C<1 3 2>()]").unwrap();
        assert_eq!(t.to_string(), "12[C+<1 2>(), C<1 3 2>()]");
        assert!(parse_term("12[C<1 2>(), C<1 3 2>()]").is_err());
        assert!(parse_term("1 2 3 4[C<>(), C<>(), C<>(), C<>()]").is_err());
        assert!(parse_term("12[C+<>()]").is_err());
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(
            parse_system("mode: disjoint"),
            Err(Error::Format { line: 1, .. })
        ));
        let text = "# permspec v1\nmode: odd\nbasis:\nsimples:\nroot: C<>()\n";
        assert!(matches!(parse_system(text), Err(Error::Format { line: 2, .. })));
        let text = "# permspec v1\nmode: disjoint\nbasis:\nsimples:\nroot: C<>()\nC<>() = 1\nC<>() = 0\n";
        assert!(matches!(parse_system(text), Err(Error::Format { line: 7, .. })));
    }

    #[test]
    fn basis_files() {
        let (b, changed) = parse_basis("# class\n132\n\n1243\n321 # note\n").unwrap();
        assert_eq!(b, vec![p("132"), p("321")]);
        assert!(changed);
        assert!(parse_basis("# nothing\n").is_err());
    }
}
