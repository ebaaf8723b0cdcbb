//! OpenQASM 2.0 emission and parsing for the supported gate subset.
//!
//! Emission is canonical: one statement per line, registers named `q` and
//! `c`, 0-based wire indices (library qubit 1 maps to `q[0]`). The parser
//! accepts the same subset — version header, optional `qelib1.inc` include,
//! one quantum and one classical register, the gate set, `measure`, and
//! single-wire `barrier` — and reports syntax errors with line and column.

use crate::circuit::{GateInstance, GateKind, QuantumCircuit};
use crate::error::{Error, Result};

/// Render a circuit as canonical OpenQASM 2.0 text.
///
/// ```
/// use zsim_core::{emit_qasm, parse_qasm, zstate_circuit};
///
/// let circuit = zstate_circuit(2, 3)?;
/// let text = emit_qasm(&circuit)?;
/// assert!(text.starts_with("OPENQASM 2.0;"));
/// assert_eq!(parse_qasm(&text)?, circuit);
/// # Ok::<(), zsim_core::Error>(())
/// ```
pub fn emit_qasm(circuit: &QuantumCircuit) -> Result<String> {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str("// wire numbering: library qubit 1 (top wire) is q[0]\n");
    out.push_str(&format!("qreg q[{}];\n", circuit.n_qubits));
    if circuit.n_clbits > 0 {
        out.push_str(&format!("creg c[{}];\n", circuit.n_clbits));
    }
    for gate in &circuit.gates {
        match gate.kind {
            GateKind::H | GateKind::X | GateKind::Z | GateKind::S | GateKind::Sdg => {
                out.push_str(&format!("{} q[{}];\n", gate.kind.name(), gate.targets[0] - 1));
            }
            GateKind::Cnot | GateKind::Cz => {
                out.push_str(&format!(
                    "{} q[{}],q[{}];\n",
                    gate.kind.name(),
                    gate.targets[0] - 1,
                    gate.targets[1] - 1
                ));
            }
            GateKind::Barrier => {
                out.push_str(&format!("barrier q[{}];\n", gate.targets[0] - 1));
            }
            GateKind::Measure => {
                let clbit = gate
                    .classical_target
                    .ok_or_else(|| Error::UnsupportedQasmGate("measure without target".into()))?;
                out.push_str(&format!(
                    "measure q[{}] -> c[{}];\n",
                    gate.targets[0] - 1,
                    clbit - 1
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Ident,
    Number,
    Symbol,
    Str,
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    kind: TokKind,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::QasmSyntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '/' {
            // only '//' comments exist in the subset
            let start_col = col;
            chars.next();
            col += 1;
            if chars.peek() == Some(&'/') {
                while let Some(&d) = chars.peek() {
                    if d == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
                continue;
            }
            return Err(syntax(line, start_col, "unexpected '/'"));
        }
        if c == '"' {
            let (start_line, start_col) = (line, col);
            chars.next();
            col += 1;
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('"') => {
                        col += 1;
                        break;
                    }
                    Some('\n') | None => {
                        return Err(syntax(start_line, start_col, "unterminated string"));
                    }
                    Some(d) => {
                        col += 1;
                        s.push(d);
                    }
                }
            }
            tokens.push(Token {
                text: s,
                kind: TokKind::Str,
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let (start_line, start_col) = (line, col);
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            tokens.push(Token {
                text: s,
                kind: TokKind::Ident,
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let (start_line, start_col) = (line, col);
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() || d == '.' {
                    s.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            tokens.push(Token {
                text: s,
                kind: TokKind::Number,
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c == '-' {
            let (start_line, start_col) = (line, col);
            chars.next();
            col += 1;
            if chars.peek() == Some(&'>') {
                chars.next();
                col += 1;
                tokens.push(Token {
                    text: "->".into(),
                    kind: TokKind::Symbol,
                    line: start_line,
                    col: start_col,
                });
                continue;
            }
            return Err(syntax(start_line, start_col, "unexpected '-'"));
        }
        if matches!(c, '[' | ']' | ',' | ';') {
            tokens.push(Token {
                text: c.to_string(),
                kind: TokKind::Symbol,
                line,
                col,
            });
            chars.next();
            col += 1;
            continue;
        }
        return Err(syntax(line, col, format!("unexpected character {c:?}")));
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    qreg: Option<(String, usize)>,
    creg: Option<(String, usize)>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn expect_symbol(&mut self, sym: &str) -> Result<()> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if t.kind == TokKind::Symbol && t.text == sym => Ok(()),
            Some(t) => Err(syntax(
                t.line,
                t.col,
                format!("expected {sym:?}, found {:?}", t.text),
            )),
            None => Err(syntax(line, col, format!("expected {sym:?}, found end of input"))),
        }
    }

    fn expect_ident(&mut self) -> Result<Token> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if t.kind == TokKind::Ident => Ok(t),
            Some(t) => Err(syntax(t.line, t.col, format!("expected name, found {:?}", t.text))),
            None => Err(syntax(line, col, "expected name, found end of input")),
        }
    }

    fn expect_index(&mut self) -> Result<(usize, Token)> {
        self.expect_symbol("[")?;
        let (line, col) = self.here();
        let tok = match self.next() {
            Some(t) if t.kind == TokKind::Number => t,
            Some(t) => {
                return Err(syntax(t.line, t.col, format!("expected index, found {:?}", t.text)))
            }
            None => return Err(syntax(line, col, "expected index, found end of input")),
        };
        let idx: usize = tok
            .text
            .parse()
            .map_err(|_| syntax(tok.line, tok.col, format!("bad index {:?}", tok.text)))?;
        self.expect_symbol("]")?;
        Ok((idx, tok))
    }

    /// `name[idx]` referring to the quantum register; returns the 1-based wire.
    fn quantum_operand(&mut self) -> Result<usize> {
        let name = self.expect_ident()?;
        let (reg_name, size) = self
            .qreg
            .clone()
            .ok_or_else(|| syntax(name.line, name.col, "no qreg declared"))?;
        if name.text != reg_name {
            return Err(Error::UnknownRegister {
                name: name.text,
                line: name.line,
            });
        }
        let (idx, tok) = self.expect_index()?;
        if idx >= size {
            return Err(syntax(
                tok.line,
                tok.col,
                format!("qubit index {idx} out of range for {reg_name}[{size}]"),
            ));
        }
        Ok(idx + 1)
    }

    fn classical_operand(&mut self) -> Result<usize> {
        let name = self.expect_ident()?;
        let (reg_name, size) = self
            .creg
            .clone()
            .ok_or_else(|| syntax(name.line, name.col, "no creg declared"))?;
        if name.text != reg_name {
            return Err(Error::UnknownRegister {
                name: name.text,
                line: name.line,
            });
        }
        let (idx, tok) = self.expect_index()?;
        if idx >= size {
            return Err(syntax(
                tok.line,
                tok.col,
                format!("bit index {idx} out of range for {reg_name}[{size}]"),
            ));
        }
        Ok(idx + 1)
    }
}

/// Parse canonical OpenQASM 2.0 text back into a circuit.
pub fn parse_qasm(text: &str) -> Result<QuantumCircuit> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        qreg: None,
        creg: None,
    };

    // version header
    let head = p.expect_ident()?;
    if head.text != "OPENQASM" {
        return Err(syntax(head.line, head.col, "expected OPENQASM header"));
    }
    let version = p.next().ok_or_else(|| syntax(head.line, head.col, "missing version"))?;
    if version.kind != TokKind::Number || version.text != "2.0" {
        return Err(syntax(
            version.line,
            version.col,
            format!("unsupported version {:?}", version.text),
        ));
    }
    p.expect_symbol(";")?;

    let mut gates: Vec<GateInstance> = Vec::new();
    while let Some(tok) = p.peek().cloned() {
        if tok.kind != TokKind::Ident {
            return Err(syntax(tok.line, tok.col, format!("expected statement, found {:?}", tok.text)));
        }
        p.next();
        match tok.text.as_str() {
            "include" => {
                let (line, col) = p.here();
                let file = p
                    .next()
                    .ok_or_else(|| syntax(line, col, "missing include file"))?;
                if file.kind != TokKind::Str || file.text != "qelib1.inc" {
                    return Err(syntax(
                        file.line,
                        file.col,
                        format!("unsupported include {:?}", file.text),
                    ));
                }
                p.expect_symbol(";")?;
            }
            "qreg" | "creg" => {
                let name = p.expect_ident()?;
                let (size, _) = p.expect_index()?;
                p.expect_symbol(";")?;
                let slot = if tok.text == "qreg" {
                    &mut p.qreg
                } else {
                    &mut p.creg
                };
                if slot.is_some() {
                    return Err(syntax(
                        tok.line,
                        tok.col,
                        format!("multiple {} declarations", tok.text),
                    ));
                }
                *slot = Some((name.text, size));
            }
            "h" | "x" | "z" | "s" | "sdg" => {
                let kind = match tok.text.as_str() {
                    "h" => GateKind::H,
                    "x" => GateKind::X,
                    "z" => GateKind::Z,
                    "s" => GateKind::S,
                    _ => GateKind::Sdg,
                };
                let q = p.quantum_operand()?;
                p.expect_symbol(";")?;
                gates.push(GateInstance::new(kind, vec![q])?);
            }
            "cx" | "cz" => {
                let kind = if tok.text == "cx" {
                    GateKind::Cnot
                } else {
                    GateKind::Cz
                };
                let a = p.quantum_operand()?;
                p.expect_symbol(",")?;
                let b = p.quantum_operand()?;
                p.expect_symbol(";")?;
                gates.push(GateInstance::new(kind, vec![a, b])?);
            }
            "barrier" => {
                let q = p.quantum_operand()?;
                p.expect_symbol(";")?;
                gates.push(GateInstance::new(GateKind::Barrier, vec![q])?);
            }
            "measure" => {
                let q = p.quantum_operand()?;
                p.expect_symbol("->")?;
                let c = p.classical_operand()?;
                p.expect_symbol(";")?;
                gates.push(GateInstance::measure(q, c));
            }
            other => {
                return Err(syntax(
                    tok.line,
                    tok.col,
                    format!("unsupported statement {other:?}"),
                ));
            }
        }
    }

    let (_, n_qubits) = p
        .qreg
        .clone()
        .ok_or_else(|| syntax(1, 1, "no qreg declared"))?;
    let n_clbits = p.creg.as_ref().map(|(_, s)| *s).unwrap_or(0);
    let mut circuit = QuantumCircuit::new(n_qubits, n_clbits);
    for g in gates {
        circuit.push(g)?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminator::build_discrimination_circuit;
    use crate::zstates::zstate_circuit;

    #[test]
    fn single_hadamard_canonical_text() {
        let mut c = QuantumCircuit::new(1, 0);
        c.h(1).unwrap();
        let text = emit_qasm(&c).unwrap();
        assert_eq!(
            text,
            "OPENQASM 2.0;\n\
             include \"qelib1.inc\";\n\
             // wire numbering: library qubit 1 (top wire) is q[0]\n\
             qreg q[1];\n\
             h q[0];\n"
        );
    }

    #[test]
    fn discrimination_circuit_round_trips() {
        let disc = build_discrimination_circuit(2).unwrap();
        let text = emit_qasm(disc.circuit()).unwrap();
        let back = parse_qasm(&text).unwrap();
        assert_eq!(*disc.circuit(), back);
    }

    #[test]
    fn zstate_circuit_statement_structure() {
        let text = emit_qasm(&zstate_circuit(3, 3).unwrap()).unwrap();
        let z_lines = text.lines().filter(|l| l.starts_with("z q[")).count();
        assert_eq!(z_lines, 2); // pattern {1,3}
        assert!(text.contains("z q[0];"));
        assert!(text.contains("z q[2];"));
        let h_lines = text.lines().filter(|l| l.starts_with("h q[")).count();
        assert_eq!(h_lines, 3);
        let cz_lines = text.lines().filter(|l| l.starts_with("cz ")).count();
        assert_eq!(cz_lines, 2);
    }

    #[test]
    fn emission_is_deterministic() {
        let disc = build_discrimination_circuit(3).unwrap();
        assert_eq!(
            emit_qasm(disc.circuit()).unwrap(),
            emit_qasm(disc.circuit()).unwrap()
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[;\n").unwrap_err();
        match err {
            Error::QasmSyntax { line, col, .. } => {
                assert_eq!(line, 3);
                assert!(col > 1);
            }
            other => panic!("unexpected {other:?}"),
        }

        let err = parse_qasm("OPENQASM 3.0;\n").unwrap_err();
        assert!(matches!(err, Error::QasmSyntax { line: 1, .. }));

        let err = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n").unwrap_err();
        assert!(matches!(err, Error::QasmSyntax { line: 3, .. }));
    }

    #[test]
    fn unknown_register_reported_by_name() {
        let err = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh r[0];\n").unwrap_err();
        match err {
            Error::UnknownRegister { name, line } => {
                assert_eq!(name, "r");
                assert_eq!(line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_rejected() {
        let err = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[2];\n").unwrap_err();
        assert!(matches!(err, Error::QasmSyntax { line: 3, .. }));
    }

    #[test]
    fn measure_and_barrier_round_trip() {
        let mut c = QuantumCircuit::new(3, 2);
        c.h(1).unwrap();
        c.barrier(2).unwrap();
        c.measure(3, 1).unwrap();
        c.measure(1, 2).unwrap();
        let back = parse_qasm(&emit_qasm(&c).unwrap()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "OPENQASM 2.0;\n// a comment\n\nqreg q[1];\n// more\nx q[0];\n";
        let c = parse_qasm(text).unwrap();
        assert_eq!(c.gate_count(), 1);
    }
}
