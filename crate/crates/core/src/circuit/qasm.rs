// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! OpenQASM 2.0 output, and a reader for the same gate subset.

use std::f64::consts::PI;
use std::fmt::Write;

use super::gates::GateKind;
use super::Circuit;
use crate::{Error, Result};

/// Reduce `x` into `(−period/2, period/2]`.
fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r > period / 2.0 {
        r - period
    } else {
        r
    }
}

/// OpenQASM 2.0 text for `c` at `params`.
///
/// Angles are wrapped to their exact period (4π for rotation angles and the
/// U3 polar angle, 2π for the U3 phases) so the emitted circuit implements
/// exactly the same unitary, global phase included.
pub fn emit_qasm(c: &Circuit, params: &[f64]) -> Result<String> {
    c.check_params(params)?;
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", c.num_qubits()).unwrap();
    for g in c.gates() {
        let p = g.params(params);
        let angles: Vec<f64> = match g.kind {
            GateKind::U3 => vec![wrap(p[0], 4.0 * PI), wrap(p[1], 2.0 * PI), wrap(p[2], 2.0 * PI)],
            _ => p.iter().map(|&a| wrap(a, 4.0 * PI)).collect(),
        };
        out.push_str(g.kind.qasm_name());
        if !angles.is_empty() {
            let list: Vec<String> = angles.iter().map(|a| format!("{a:.16e}")).collect();
            write!(out, "({})", list.join(",")).unwrap();
        }
        let operands: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        writeln!(out, " {};", operands.join(",")).unwrap();
    }
    Ok(out)
}

/// Gate statement awaiting register resolution: line, kind, angles, and
/// `(register, index)` operands.
type PendingOp = (usize, GateKind, Vec<f64>, Vec<(String, usize)>);

/// Parse OpenQASM 2.0 restricted to `rx`, `ry`, `rz`, `u3` and `cx`.
///
/// Every gate angle becomes one entry of the returned parameter vector, so
/// the result can be fed straight back into the simulator. `creg`,
/// `barrier` and `include` statements are accepted and ignored.
pub fn parse_qasm(text: &str) -> Result<(Circuit, Vec<f64>)> {
    let mut registers: Vec<(String, usize, usize)> = Vec::new();
    let mut ops: Vec<PendingOp> = Vec::new();
    let mut saw_header = false;

    for (line, stmt) in statements(text) {
        let err = |message: String| Error::Qasm { line, message };
        let (head, rest) = split_head(&stmt);
        match head {
            "OPENQASM" => {
                if rest.trim() != "2.0" {
                    return Err(err(format!("unsupported version {}", rest.trim())));
                }
                saw_header = true;
            }
            "include" | "creg" | "barrier" => {}
            "qreg" => {
                let (name, size) = parse_operand(rest.trim()).map_err(err)?;
                let offset = registers.last().map_or(0, |(_, o, s)| o + s);
                registers.push((name, offset, size));
            }
            _ => {
                let (name, args, operands) = split_gate(&stmt).map_err(err)?;
                let kind = GateKind::from_qasm_name(name)
                    .ok_or_else(|| err(format!("unsupported gate '{name}'")))?;
                let angles = match args {
                    Some(a) => split_top_level(a)
                        .iter()
                        .map(|e| eval_expr(e))
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(err)?,
                    None => Vec::new(),
                };
                if angles.len() != kind.num_params() {
                    return Err(err(format!(
                        "{name} takes {} angles, got {}",
                        kind.num_params(),
                        angles.len()
                    )));
                }
                let qubits = operands
                    .split(',')
                    .map(|o| parse_operand(o.trim()))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(err)?;
                ops.push((line, kind, angles, qubits));
            }
        }
    }
    if !saw_header {
        return Err(Error::Qasm { line: 1, message: "missing OPENQASM 2.0 header".into() });
    }
    let total = registers.last().map_or(0, |(_, o, s)| o + s);
    let mut circuit = Circuit::new(total);
    let mut params = Vec::new();
    for (line, kind, angles, operands) in ops {
        let qubits = operands
            .iter()
            .map(|(name, idx)| {
                let (_, offset, size) = registers
                    .iter()
                    .find(|(n, _, _)| n == name)
                    .ok_or_else(|| Error::Qasm { line, message: format!("unknown register '{name}'") })?;
                if idx >= size {
                    return Err(Error::Qasm { line, message: format!("{name}[{idx}] out of range") });
                }
                Ok(offset + idx)
            })
            .collect::<Result<Vec<_>>>()?;
        circuit
            .push(kind, &qubits)
            .map_err(|e| Error::Qasm { line, message: e.to_string() })?;
        params.extend(angles);
    }
    Ok((circuit, params))
}

/// Split into `;`-terminated statements with comments removed, tagged with
/// the line each statement starts on.
fn statements(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 1;
    for (i, raw) in text.lines().enumerate() {
        let code = raw.split("//").next().unwrap_or("");
        for ch in code.chars() {
            if current.trim().is_empty() && !ch.is_whitespace() {
                start = i + 1;
            }
            if ch == ';' {
                out.push((start, current.trim().to_string()));
                current.clear();
            } else {
                current.push(ch);
            }
        }
        current.push(' ');
    }
    if !current.trim().is_empty() {
        out.push((start, current.trim().to_string()));
    }
    out
}

fn split_head(stmt: &str) -> (&str, &str) {
    let end = stmt
        .find(|c: char| c.is_whitespace() || c == '(')
        .unwrap_or(stmt.len());
    (&stmt[..end], &stmt[end..])
}

fn split_gate(stmt: &str) -> std::result::Result<(&str, Option<&str>, &str), String> {
    let stmt = stmt.trim();
    let name_end = stmt
        .find(|c: char| c.is_whitespace() || c == '(')
        .ok_or_else(|| format!("malformed statement '{stmt}'"))?;
    let name = &stmt[..name_end];
    let rest = stmt[name_end..].trim_start();
    if let Some(inner) = rest.strip_prefix('(') {
        let mut depth = 1;
        for (i, ch) in inner.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok((name, Some(&inner[..i]), inner[i + 1..].trim()));
                    }
                }
                _ => {}
            }
        }
        Err("unbalanced parentheses".into())
    } else {
        Ok((name, None, rest))
    }
}

fn split_top_level(args: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in args.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&args[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&args[start..]);
    out
}

fn parse_operand(s: &str) -> std::result::Result<(String, usize), String> {
    let open = s.find('[').ok_or_else(|| format!("expected register[index], got '{s}'"))?;
    let close = s.rfind(']').ok_or_else(|| format!("missing ']' in '{s}'"))?;
    let name = s[..open].trim();
    if name.is_empty() || close < open || !s[close + 1..].trim().is_empty() {
        return Err(format!("malformed operand '{s}'"));
    }
    let idx = s[open + 1..close]
        .trim()
        .parse()
        .map_err(|_| format!("bad index in '{s}'"))?;
    Ok((name.to_string(), idx))
}

/// Evaluate a real-valued QASM parameter expression.
fn eval_expr(src: &str) -> std::result::Result<f64, String> {
    let mut p = ExprParser { s: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(format!("trailing input in expression '{src}'"));
    }
    Ok(v)
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if op == b'+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn term(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            v = if op == b'*' { v * rhs } else { v / rhs };
        }
        Ok(v)
    }

    fn factor(&mut self) -> std::result::Result<f64, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.primary()?;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    Ok(base.powf(self.factor()?))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn primary(&mut self) -> std::result::Result<f64, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err("expected ')'".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if ident == "pi" {
                    return Ok(PI);
                }
                let f: fn(f64) -> f64 = match ident {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return Err(format!("unknown identifier '{ident}'")),
                };
                if self.peek() != Some(b'(') {
                    return Err(format!("expected '(' after {ident}"));
                }
                Ok(f(self.primary()?))
            }
            _ => Err("expected a number".into()),
        }
    }

    fn number(&mut self) -> std::result::Result<f64, String> {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < self.s.len() && matches!(self.s[self.pos], b'e' | b'E') {
            self.pos += 1;
            if self.pos < self.s.len() && matches!(self.s[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse().map_err(|_| format!("bad number '{text}'"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::unitary_of;
    use crate::linalg::max_abs;

    #[test]
    fn empty_circuit_text() {
        let text = emit_qasm(&Circuit::new(1), &[]).unwrap();
        assert_eq!(text, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\n");
    }

    #[test]
    fn cnot_syntax() {
        let mut c = Circuit::new(2);
        c.cnot(0, 1).unwrap();
        assert!(emit_qasm(&c, &[]).unwrap().contains("cx q[0],q[1];"));
    }

    #[test]
    fn angles_carry_seventeen_digits() {
        let mut c = Circuit::new(1);
        c.rz(0).unwrap();
        let text = emit_qasm(&c, &[0.1]).unwrap();
        assert!(text.contains("rz(1.0000000000000001e-1) q[0];"), "{text}");
    }

    #[test]
    fn wrapping_preserves_unitary() {
        let mut c = Circuit::new(2);
        c.rx(0).unwrap().u3(1).unwrap().cnot(1, 0).unwrap().ry(1).unwrap().rz(0).unwrap();
        let params = [9.0, 13.1, -7.7, 20.0, -15.2, -100.0];
        let (back, p2) = parse_qasm(&emit_qasm(&c, &params).unwrap()).unwrap();
        let diff = unitary_of(&c, &params).unwrap() - unitary_of(&back, &p2).unwrap();
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn expressions() {
        assert!((eval_expr("7*pi/4").unwrap() - 7.0 * PI / 4.0).abs() < 1e-15);
        assert!((eval_expr("-pi/2 + 1e-1").unwrap() - (-PI / 2.0 + 0.1)).abs() < 1e-15);
        assert!((eval_expr("2^3").unwrap() - 8.0).abs() < 1e-15);
        assert!((eval_expr("sqrt(4)*cos(0)").unwrap() - 2.0).abs() < 1e-15);
        assert!(eval_expr("foo").is_err());
        assert!(eval_expr("1 2").is_err());
    }

    #[test]
    fn reads_multiple_registers_and_comments() {
        let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n// two regs\nqreg a[1];\nqreg b[2];\ncreg c[3];\ncx a[0], b[1]; // tail\nbarrier a[0],b[0];\nry(pi) b[0];\n";
        let (c, p) = parse_qasm(text).unwrap();
        assert_eq!(c.num_qubits(), 3);
        assert_eq!(c.gates()[0].qubits, vec![0, 2]);
        assert_eq!(c.gates()[1].qubits, vec![1]);
        assert_eq!(p, vec![PI]);
    }

    #[test]
    fn rejects_unsupported_gate_with_line() {
        let text = "OPENQASM 2.0;\nqreg q[1];\nh q[0];\n";
        match parse_qasm(text) {
            Err(Error::Qasm { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("unsupported gate"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_missing_header_and_bad_operands() {
        assert!(parse_qasm("qreg q[1];\nrx(0) q[0];").is_err());
        assert!(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nrx(0) q[1];").is_err());
        assert!(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nrx(0,1) q[0];").is_err());
        assert!(parse_qasm("OPENQASM 3.0;\n").is_err());
    }
}
