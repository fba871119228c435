//! Line-oriented system files.
//!
//! ```text
//! # Davenport pair
//! field m=4
//! vars x
//! poly f1 = (x^2+2)^3
//! poly f2 = -(x^3+3*x)^2
//! poly f3 = -3*x^2 - 8
//! exp e1 = 3
//! theorems mason, radical-sum
//! ```

use std::fmt::Write as _;

use crate::cycfield::CycloField;
use crate::poly::Polynomial;

use super::{parse_expression_at, render, ParseError, ParseErrorKind, Scope};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub field: CycloField,
    pub vars: Vec<String>,
    pub polys: Vec<(String, Polynomial)>,
    /// Empty when no `exp` line is present; otherwise one entry per poly.
    pub exponents: Vec<u32>,
    pub theorems: Option<Vec<String>>,
}

impl SystemFile {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.polys.iter().map(|(_, p)| p.clone()).collect()
    }
}

const RESERVED: [&str; 2] = ["zeta", "I"];

fn directive_error(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        kind: ParseErrorKind::Directive(msg.into()),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Column (1-based) of `part` inside `line`, given `part` is a subslice of it.
fn col_of(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut field: Option<CycloField> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut polys: Vec<(String, Polynomial)> = Vec::new();
    let mut exps: Vec<(usize, usize, String, u32)> = Vec::new();
    let mut theorems: Option<Vec<String>> = None;
    let mut scope: Option<Scope> = None;

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let kw_col = col_of(raw, trimmed);
        let (kw, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (trimmed, ""),
        };
        let rest_col = if rest.is_empty() {
            kw_col + kw.len()
        } else {
            col_of(raw, rest)
        };
        match kw {
            "field" => {
                if field.is_some() {
                    return Err(directive_error(ln, kw_col, "duplicate `field` directive"));
                }
                if scope.is_some() {
                    return Err(directive_error(ln, kw_col, "`field` must precede `poly` lines"));
                }
                let value = rest
                    .split_once('=')
                    .filter(|(k, _)| k.trim() == "m")
                    .map(|(_, v)| v.trim())
                    .ok_or_else(|| directive_error(ln, rest_col, "expected `field m=<conductor>`"))?;
                let m: u32 = value
                    .parse()
                    .map_err(|_| directive_error(ln, rest_col, format!("invalid conductor `{value}`")))?;
                let f = CycloField::new(m).map_err(|_| directive_error(ln, rest_col, "conductor must be positive"))?;
                field = Some(f);
            }
            "vars" => {
                if vars.is_some() {
                    return Err(directive_error(ln, kw_col, "duplicate `vars` directive"));
                }
                if scope.is_some() {
                    return Err(directive_error(ln, kw_col, "`vars` must precede `poly` lines"));
                }
                let mut names = Vec::new();
                for part in rest.split(',') {
                    let name = part.trim();
                    if !is_identifier(name) || RESERVED.contains(&name) {
                        return Err(directive_error(
                            ln,
                            col_of(raw, part),
                            format!("invalid variable name `{name}`"),
                        ));
                    }
                    if names.iter().any(|n| n == name) {
                        return Err(directive_error(
                            ln,
                            col_of(raw, part),
                            format!("duplicate variable `{name}`"),
                        ));
                    }
                    names.push(name.to_string());
                }
                vars = Some(names);
            }
            "poly" => {
                let sc = scope.get_or_insert_with(|| {
                    let f = field.clone().unwrap_or_else(|| CycloField::new(4).expect("valid"));
                    let names: Vec<&str> = vars.as_deref().unwrap_or(&[]).iter().map(String::as_str).collect();
                    Scope::new(&f, &names)
                });
                let (name, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| directive_error(ln, rest_col, "expected `poly NAME = expression`"))?;
                let name = name.trim();
                if !is_identifier(name) || RESERVED.contains(&name) || sc.vars.iter().any(|v| v == name) {
                    return Err(directive_error(
                        ln,
                        rest_col,
                        format!("invalid polynomial name `{name}`"),
                    ));
                }
                if polys.iter().any(|(n, _)| n == name) {
                    return Err(directive_error(ln, rest_col, format!("duplicate polynomial `{name}`")));
                }
                let p = parse_expression_at(expr, sc, ln, col_of(raw, expr))?;
                sc.defs.push((name.to_string(), p.clone()));
                polys.push((name.to_string(), p));
            }
            "exp" => {
                let (key, value) = rest
                    .split_once('=')
                    .ok_or_else(|| directive_error(ln, rest_col, "expected `exp NAME = integer`"))?;
                let v: u32 =
                    value.trim().parse().ok().filter(|&v| v >= 1).ok_or_else(|| {
                        directive_error(ln, col_of(raw, value), "exponent must be a positive integer")
                    })?;
                exps.push((ln, rest_col, key.trim().to_string(), v));
            }
            "theorems" => {
                let list: Vec<String> = rest
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                theorems.get_or_insert_with(Vec::new).extend(list);
            }
            other => {
                return Err(directive_error(ln, kw_col, format!("unknown directive `{other}`")));
            }
        }
    }

    let field = field.unwrap_or_else(|| CycloField::new(4).expect("valid"));
    let mut exponents = Vec::new();
    if !exps.is_empty() {
        exponents = vec![1; polys.len()];
        for (ln, col, key, v) in exps {
            let slot = polys.iter().position(|(n, _)| *n == key).or_else(|| {
                key.strip_prefix('e')
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= exponents.len())
                    .map(|i| i - 1)
            });
            match slot {
                Some(i) => exponents[i] = v,
                None => return Err(directive_error(ln, col, format!("`{key}` names no polynomial"))),
            }
        }
    }
    Ok(SystemFile {
        field,
        vars: vars.unwrap_or_default(),
        polys,
        exponents,
        theorems,
    })
}

pub fn render_system(sys: &SystemFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field m={}", sys.field.conductor());
    if !sys.vars.is_empty() {
        let _ = writeln!(out, "vars {}", sys.vars.join(","));
    }
    for (name, p) in &sys.polys {
        let _ = writeln!(out, "poly {name} = {}", render(p, &sys.vars));
    }
    for (i, e) in sys.exponents.iter().enumerate() {
        let _ = writeln!(out, "exp e{} = {e}", i + 1);
    }
    if let Some(t) = &sys.theorems {
        let _ = writeln!(out, "theorems {}", t.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DAVENPORT: &str = "\
# Davenport pair
field m=4
vars x
poly f1 = (x^2+2)^3
poly f2 = -(x^3+3*x)^2   # negated square
poly f3 = -(f1 + f2)
exp e1 = 3
exp f2 = 2
theorems mason, radical-sum
";

    #[test]
    fn parses_davenport_file() {
        let sys = parse_system(DAVENPORT).unwrap();
        assert_eq!(sys.field.conductor(), 4);
        assert_eq!(sys.vars, vec!["x"]);
        assert_eq!(sys.polys.len(), 3);
        assert_eq!(render(&sys.polys[2].1, &sys.vars), "-3*x^2 - 8");
        assert_eq!(sys.exponents, vec![3, 2, 1]);
        assert_eq!(sys.theorems, Some(vec!["mason".into(), "radical-sum".into()]));
        let again = parse_system(&render_system(&sys)).unwrap();
        assert_eq!(again, sys);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = parse_system("vars x\npoly f = x +* 2\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 13));
        let e = parse_system("vars x\npoly f = y\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredIdentifier("y".into()));
        assert_eq!((e.line, e.col), (2, 10));
        let e = parse_system("field m=0\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_system("frobnicate 3\n").is_err());
        assert!(parse_system("vars x\npoly f = x\nexp e9 = 2\n").is_err());
        assert!(parse_system("poly f = 1\nvars x\n").is_err());
    }
}
