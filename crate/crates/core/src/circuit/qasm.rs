//! OpenQASM 2.0 export and import.
//!
//! Gates outside `qelib1.inc` are emitted with a `gate` definition in the
//! header whose body only uses standard gates:
//!
//! | IR gate                  | QASM name  |
//! |--------------------------|------------|
//! | Ry with one control      | `ctrl_ry`  |
//! | Ry with two controls     | `ctrl2_ry` |
//! | Margolus                 | `margolus` (3-CX body) |
//!
//! Angles are printed with the shortest decimal that parses back to the same
//! `f64`, so `to_qasm(from_qasm(s)) == s` for any `s` produced here.

use std::fmt::Write as _;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

const CTRL_RY_DEF: &str =
    "gate ctrl_ry(theta) a,b { ry(theta/2) b; cx a,b; ry(-theta/2) b; cx a,b; }";
const CTRL2_RY_DEF: &str =
    "gate ctrl2_ry(theta) a,b,c { ry(theta/2) c; ccx a,b,c; ry(-theta/2) c; ccx a,b,c; }";
const MARGOLUS_DEF: &str = "gate margolus a,b,c { u2(0,pi) c; u1(pi/4) c; cx b,c; u1(-pi/4) c; \
                            cx a,c; u1(pi/4) c; cx b,c; u1(-pi/4) c; u2(0,pi) c; }";

const CUSTOM_GATES: [(&str, &str); 3] = [
    ("ctrl_ry", CTRL_RY_DEF),
    ("ctrl2_ry", CTRL2_RY_DEF),
    ("margolus", MARGOLUS_DEF),
];

fn qasm_name(g: &Gate) -> Result<&'static str> {
    let name = match (g.kind, g.controls.len()) {
        (GateKind::X, 1) => "cx",
        (GateKind::X, 2) => "ccx",
        (GateKind::Ry(_), 1) => "ctrl_ry",
        (GateKind::Ry(_), 2) => "ctrl2_ry",
        (kind, 0) => kind.base_name(),
        _ => {
            return Err(Error::NoRule {
                gate: g.name(),
                basis: "qasm",
            })
        }
    };
    Ok(name)
}

pub fn to_qasm(c: &Circuit) -> Result<String> {
    let names = c
        .gates()
        .iter()
        .map(qasm_name)
        .collect::<Result<Vec<_>>>()?;

    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for (name, def) in CUSTOM_GATES {
        if names.contains(&name) {
            out.push_str(def);
            out.push('\n');
        }
    }
    writeln!(out, "qreg q[{}];", c.n_qubits()).unwrap();
    if !c.measured().is_empty() {
        writeln!(out, "creg c[{}];", c.measured().len()).unwrap();
    }
    for (g, name) in c.gates().iter().zip(names) {
        out.push_str(name);
        let params = g.kind.params();
        if !params.is_empty() {
            let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
            write!(out, "({})", ps.join(",")).unwrap();
        }
        let qs: Vec<String> = g.qubits().map(|q| format!("q[{q}]")).collect();
        writeln!(out, " {};", qs.join(",")).unwrap();
    }
    for (bit, q) in c.measured().iter().enumerate() {
        writeln!(out, "measure q[{q}] -> c[{bit}];").unwrap();
    }
    Ok(out)
}

pub fn from_qasm(src: &str) -> Result<Circuit> {
    Parser::new(src).parse()
}

struct Statement {
    line: usize,
    text: String,
}

/// Splits source into statements, dropping comments and `gate` bodies.
fn statements(src: &str) -> Result<Vec<Statement>> {
    let cleaned: String = src
        .lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let chars: Vec<char> = cleaned.chars().collect();
    let mut out = Vec::new();
    let mut line = 1;
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            if chars[i] == '\n' {
                line += 1;
            }
            i += 1;
            continue;
        }
        let start_line = line;
        let mut text = String::new();
        let mut depth = 0usize;
        loop {
            let Some(&ch) = chars.get(i) else {
                return Err(Error::Qasm {
                    line: start_line,
                    message: "unterminated statement".into(),
                });
            };
            i += 1;
            if ch == '\n' {
                line += 1;
            }
            match ch {
                '{' => depth += 1,
                '}' => {
                    depth = depth.checked_sub(1).ok_or(Error::Qasm {
                        line,
                        message: "unbalanced '}'".into(),
                    })?;
                    if depth == 0 {
                        text.push(ch);
                        break;
                    }
                }
                ';' if depth == 0 => break,
                _ => {}
            }
            text.push(ch);
        }
        out.push(Statement {
            line: start_line,
            text: text.trim().to_string(),
        });
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    qreg: Option<(String, usize)>,
    creg: Option<(String, usize)>,
    gates: Vec<Gate>,
    measurements: Vec<(usize, usize)>,
    defined: Vec<&'static str>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            qreg: None,
            creg: None,
            gates: Vec::new(),
            measurements: Vec::new(),
            defined: Vec::new(),
        }
    }

    fn parse(mut self) -> Result<Circuit> {
        let stmts = statements(self.src)?;
        let mut saw_header = false;
        for st in &stmts {
            let err = |message: String| Error::Qasm {
                line: st.line,
                message,
            };
            let (head, rest) = split_head(&st.text);
            match head {
                "OPENQASM" => {
                    if rest.trim() != "2.0" {
                        return Err(err(format!("unsupported version {:?}", rest.trim())));
                    }
                    saw_header = true;
                }
                "include" => {}
                "barrier" => {}
                "gate" => self.define(rest).map_err(err)?,
                "qreg" | "creg" => {
                    let (name, size) = parse_indexed(rest).map_err(err)?;
                    let slot = if head == "qreg" {
                        &mut self.qreg
                    } else {
                        &mut self.creg
                    };
                    if slot.is_some() {
                        return Err(err(format!("only one {head} is supported")));
                    }
                    *slot = Some((name, size));
                }
                "measure" => {
                    let (q, c) = rest
                        .split_once("->")
                        .ok_or_else(|| err("expected `->` in measure".into()))?;
                    let q = self.qubit(q).map_err(err)?;
                    let (cname, bit) = parse_indexed(c).map_err(err)?;
                    match &self.creg {
                        Some((name, size)) if *name == cname && bit < *size => {}
                        _ => return Err(err(format!("unknown classical bit {}", c.trim()))),
                    }
                    self.measurements.push((bit, q));
                }
                _ => {
                    let g = self.gate(&st.text).map_err(err)?;
                    self.gates.push(g);
                }
            }
        }
        if !saw_header {
            return Err(Error::Qasm {
                line: 1,
                message: "missing OPENQASM header".into(),
            });
        }
        let (_, n_qubits) = self.qreg.ok_or(Error::Qasm {
            line: 1,
            message: "no qreg declared".into(),
        })?;
        if n_qubits == 0 {
            return Err(Error::Qasm {
                line: 1,
                message: "empty qreg".into(),
            });
        }
        let mut c = Circuit::new(n_qubits);
        c.extend(self.gates)?;
        self.measurements.sort_unstable();
        for (expected, (bit, q)) in self.measurements.into_iter().enumerate() {
            if bit != expected {
                return Err(Error::Qasm {
                    line: 1,
                    message: format!("classical bit {expected} is never written"),
                });
            }
            c.measure(q)?;
        }
        Ok(c)
    }

    fn define(&mut self, rest: &str) -> std::result::Result<(), String> {
        let name: String = rest
            .trim_start()
            .chars()
            .take_while(|c| c.is_alphanumeric() || *c == '_')
            .collect();
        match CUSTOM_GATES.iter().find(|(n, _)| *n == name) {
            Some((n, _)) => {
                self.defined.push(n);
                Ok(())
            }
            None => Err(format!("unsupported gate definition `{name}`")),
        }
    }

    fn qubit(&self, s: &str) -> std::result::Result<usize, String> {
        let (name, idx) = parse_indexed(s)?;
        match &self.qreg {
            Some((qname, _)) if *qname == name => Ok(idx),
            Some(_) => Err(format!("unknown register `{name}`")),
            None => Err("qubit used before qreg".into()),
        }
    }

    fn gate(&self, text: &str) -> std::result::Result<Gate, String> {
        let name_end = text
            .find(|c: char| c == '(' || c.is_whitespace())
            .unwrap_or(text.len());
        let name = &text[..name_end];
        let mut rest = &text[name_end..];
        let mut params = Vec::new();
        if rest.starts_with('(') {
            let close = rest.find(')').ok_or("unclosed parameter list")?;
            params = split_params(&rest[1..close])
                .iter()
                .map(|p| eval_expr(p))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            rest = &rest[close + 1..];
        }
        let qubits = rest
            .split(',')
            .map(|a| self.qubit(a))
            .collect::<std::result::Result<Vec<_>, _>>()?;

        let want_params = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(format!(
                    "`{name}` takes {n} parameter(s), got {}",
                    params.len()
                ))
            }
        };
        let custom_used = |n: &str| {
            if self.defined.contains(&n) {
                Ok(())
            } else {
                Err(format!("gate `{n}` used without definition"))
            }
        };

        let (kind, n_controls) = match name {
            "h" => (GateKind::H, 0),
            "x" => (GateKind::X, 0),
            "sx" => (GateKind::SX, 0),
            "cx" => (GateKind::X, 1),
            "ccx" => (GateKind::X, 2),
            "rz" | "ry" | "u1" | "ctrl_ry" | "ctrl2_ry" => {
                want_params(1)?;
                let a = params[0];
                match name {
                    "rz" => (GateKind::Rz(a), 0),
                    "ry" => (GateKind::Ry(a), 0),
                    "u1" => (GateKind::U1(a), 0),
                    "ctrl_ry" => {
                        custom_used(name)?;
                        (GateKind::Ry(a), 1)
                    }
                    _ => {
                        custom_used(name)?;
                        (GateKind::Ry(a), 2)
                    }
                }
            }
            "u2" => {
                want_params(2)?;
                (GateKind::U2(params[0], params[1]), 0)
            }
            "u3" => {
                want_params(3)?;
                (GateKind::U3(params[0], params[1], params[2]), 0)
            }
            "margolus" => {
                custom_used(name)?;
                (GateKind::Margolus, 0)
            }
            other => return Err(format!("unsupported gate `{other}`")),
        };
        if !matches!(
            kind,
            GateKind::Rz(_)
                | GateKind::Ry(_)
                | GateKind::U1(_)
                | GateKind::U2(..)
                | GateKind::U3(..)
        ) {
            want_params(0)?;
        }
        let n_targets = kind.arity();
        if qubits.len() != n_controls + n_targets {
            return Err(format!(
                "`{name}` takes {} qubit(s), got {}",
                n_controls + n_targets,
                qubits.len()
            ));
        }
        let (controls, targets) = qubits.split_at(n_controls);
        Gate::new(kind, targets, controls).map_err(|e| e.to_string())
    }
}

fn split_head(text: &str) -> (&str, &str) {
    let end = text
        .find(|c: char| c.is_whitespace() || c == '(')
        .unwrap_or(text.len());
    (&text[..end], &text[end..])
}

/// `name[index]`.
fn parse_indexed(s: &str) -> std::result::Result<(String, usize), String> {
    let s = s.trim();
    let open = s
        .find('[')
        .ok_or_else(|| format!("expected `name[index]`, got `{s}`"))?;
    let close = s
        .strip_suffix(']')
        .ok_or_else(|| format!("expected `]` in `{s}`"))?;
    let idx = close[open + 1..]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("bad index in `{s}`: {e}"))?;
    Ok((s[..open].trim().to_string(), idx))
}

fn split_params(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Op(char),
}

fn tokenize(s: &str) -> std::result::Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(ch) {
            tokens.push(Token::Op(ch));
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_digit()
                    || chars[i] == '.'
                    || chars[i] == 'e'
                    || chars[i] == 'E'
                    || ((chars[i] == '+' || chars[i] == '-') && matches!(chars[i - 1], 'e' | 'E')))
            {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            let v = lit.parse().map_err(|_| format!("bad number `{lit}`"))?;
            tokens.push(Token::Num(v));
        } else if ch.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            if ident != "pi" {
                return Err(format!("unknown identifier `{ident}`"));
            }
            tokens.push(Token::Num(std::f64::consts::PI));
        } else {
            return Err(format!("unexpected character `{ch}`"));
        }
    }
    Ok(tokens)
}

/// Evaluates `+ - * /`, unary minus, parentheses, literals and `pi`.
fn eval_expr(s: &str) -> std::result::Result<f64, String> {
    let tokens = tokenize(s)?;
    let mut pos = 0;
    let v = expr(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(format!("trailing input in `{}`", s.trim()));
    }
    Ok(v)
}

fn expr(t: &[Token], pos: &mut usize) -> std::result::Result<f64, String> {
    let mut v = term(t, pos)?;
    while let Some(Token::Op(op @ ('+' | '-'))) = t.get(*pos) {
        *pos += 1;
        let rhs = term(t, pos)?;
        v = if *op == '+' { v + rhs } else { v - rhs };
    }
    Ok(v)
}

fn term(t: &[Token], pos: &mut usize) -> std::result::Result<f64, String> {
    let mut v = unary(t, pos)?;
    while let Some(Token::Op(op @ ('*' | '/'))) = t.get(*pos) {
        *pos += 1;
        let rhs = unary(t, pos)?;
        v = if *op == '*' { v * rhs } else { v / rhs };
    }
    Ok(v)
}

fn unary(t: &[Token], pos: &mut usize) -> std::result::Result<f64, String> {
    match t.get(*pos) {
        Some(Token::Op('-')) => {
            *pos += 1;
            Ok(-unary(t, pos)?)
        }
        Some(Token::Op('+')) => {
            *pos += 1;
            unary(t, pos)
        }
        Some(Token::Op('(')) => {
            *pos += 1;
            let v = expr(t, pos)?;
            if t.get(*pos) != Some(&Token::Op(')')) {
                return Err("expected `)`".into());
            }
            *pos += 1;
            Ok(v)
        }
        Some(Token::Num(v)) => {
            *pos += 1;
            Ok(*v)
        }
        _ => Err("expected a number".into()),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn expressions() {
        assert_eq!(eval_expr("pi/2").unwrap(), PI / 2.0);
        assert_eq!(eval_expr("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(eval_expr("2*(1+0.5)").unwrap(), 3.0);
        assert_eq!(eval_expr("1.5e-3").unwrap(), 1.5e-3);
        assert!(eval_expr("tau").is_err());
        assert!(eval_expr("1 2").is_err());
    }

    #[test]
    fn round_trip_small() {
        let mut c = Circuit::new(3);
        c.extend([
            Gate::h(2),
            Gate::ccry(0.25, 2, 1, 0),
            Gate::cry(-1.5, 1, 0),
            Gate::margolus(2, 1, 0),
            Gate::u3(0.1, 0.2, 0.3, 1),
            Gate::sx(0),
        ])
        .unwrap();
        c.measure_all();
        let text = to_qasm(&c).unwrap();
        assert!(text.contains("gate ctrl2_ry(theta)"));
        assert!(text.contains("gate margolus a,b,c"));
        let back = from_qasm(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_qasm(&back).unwrap(), text);
    }

    #[test]
    fn reads_standard_text() {
        let src = r#"
            OPENQASM 2.0;
            include "qelib1.inc";
            // a comment
            qreg r[2];
            creg m[2];
            h r[0];
            cx r[0],r[1];
            u2(0, pi) r[1];
            barrier r[0],r[1];
            measure r[1] -> m[0];
            measure r[0] -> m[1];
        "#;
        let c = from_qasm(src).unwrap();
        assert_eq!(c.n_qubits(), 2);
        assert_eq!(c.gates()[1], Gate::cx(0, 1));
        assert_eq!(c.gates()[2], Gate::u2(0.0, PI, 1));
        assert_eq!(c.measured(), [1, 0]);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let src = "OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n";
        match from_qasm(src).unwrap_err() {
            Error::Qasm { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("foo"));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(from_qasm("qreg q[1];").is_err());
        assert!(from_qasm("OPENQASM 2.0;\nqreg q[1];\nctrl_ry(1) q[0],q[0];").is_err());
        assert!(from_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[2];").is_err());
    }

    #[test]
    fn unsupported_controlled_gate() {
        let mut c = Circuit::new(2);
        c.push(Gate::new(GateKind::H, vec![1], vec![0]).unwrap())
            .unwrap();
        assert!(matches!(to_qasm(&c), Err(Error::NoRule { .. })));
    }
}
