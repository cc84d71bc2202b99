//! OpenQASM 2.0 output, and a reader for exactly the subset we emit.
//!
//! Angles are written in Rust's shortest round-trip decimal form, so a
//! parse of the emitted text reproduces every angle bit for bit. The
//! register split between working qubits and ancillas is kept in a
//! `// layout:` comment that the reader picks up when present.

use std::fmt::Write;

use super::{Circuit, Gate, GateKind, QubitLayout};
use crate::error::{Error, Result};

const REGISTER: &str = "q";

pub fn emit_qasm(circuit: &Circuit) -> String {
    let layout = circuit.layout();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "// layout: working={} ancillas={}", layout.working, layout.ancillas);
    let _ = writeln!(out, "qreg {REGISTER}[{}];", layout.total());
    for gate in circuit.gates() {
        out.push_str(gate.kind().qasm_name());
        let params = gate.params();
        if !params.is_empty() {
            let joined: Vec<String> = params.iter().map(|p| format!("{p}")).collect();
            let _ = write!(out, "({})", joined.join(","));
        }
        let args: Vec<String> = gate.qubits().map(|q| format!("{REGISTER}[{q}]")).collect();
        let _ = writeln!(out, " {};", args.join(","));
    }
    out
}

pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut layout: Option<QubitLayout> = None;
    let mut declared: Option<usize> = None;
    let mut gates = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::QasmParse { line: line_no, message };
        let line = raw_line.trim();
        if let Some(comment) = line.strip_prefix("//") {
            if let Some(spec) = comment.trim().strip_prefix("layout:") {
                layout = Some(parse_layout_comment(spec).ok_or_else(|| err("bad layout comment".into()))?);
            }
            continue;
        }
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err("missing ';'".into()))?
            .trim();
        if let Some(decl) = stmt.strip_prefix("qreg") {
            if declared.is_some() {
                return Err(err("only one qreg is supported".into()));
            }
            let size = parse_register_ref(decl.trim()).ok_or_else(|| err(format!("bad qreg {decl:?}")))?;
            declared = Some(size);
            continue;
        }
        let qubits = declared.ok_or_else(|| err("gate before qreg".into()))?;
        let gate = parse_gate(stmt).map_err(err)?;
        if let Some(bad) = gate.qubits().find(|&q| q >= qubits) {
            return Err(err(format!("qubit {bad} outside register of {qubits}")));
        }
        gates.push(gate);
    }
    let qubits = declared.ok_or_else(|| Error::QasmParse {
        line: text.lines().count(),
        message: "no qreg declaration".into(),
    })?;
    let layout = match layout {
        Some(l) if l.total() == qubits => l,
        Some(l) => {
            return Err(Error::QasmParse {
                line: 0,
                message: format!("layout comment covers {} qubits, qreg has {qubits}", l.total()),
            })
        }
        None => QubitLayout::custom(qubits, 0),
    };
    Circuit::from_gates(layout, gates)
}

fn parse_layout_comment(spec: &str) -> Option<QubitLayout> {
    let mut working = None;
    let mut ancillas = None;
    for field in spec.split_whitespace() {
        let (key, value) = field.split_once('=')?;
        let value: usize = value.parse().ok()?;
        match key {
            "working" => working = Some(value),
            "ancillas" => ancillas = Some(value),
            _ => return None,
        }
    }
    Some(QubitLayout::custom(working?, ancillas?))
}

/// `q[7]` → 7.
fn parse_register_ref(text: &str) -> Option<usize> {
    let inner = text.strip_prefix(REGISTER)?.trim().strip_prefix('[')?.strip_suffix(']')?;
    inner.trim().parse().ok()
}

fn parse_gate(stmt: &str) -> std::result::Result<Gate, String> {
    let (head, args) = match stmt.find(')') {
        Some(close) => (&stmt[..=close], stmt[close + 1..].trim()),
        None => stmt
            .split_once(char::is_whitespace)
            .map(|(h, a)| (h, a.trim()))
            .ok_or_else(|| format!("cannot parse {stmt:?}"))?,
    };
    let (name, params) = match head.split_once('(') {
        Some((name, rest)) => {
            let list = rest.strip_suffix(')').ok_or("unbalanced parentheses")?;
            let params = list
                .split(',')
                .map(|p| p.trim().parse::<f64>().map_err(|e| format!("angle {p:?}: {e}")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            (name.trim(), params)
        }
        None => (head.trim(), Vec::new()),
    };
    let qubits = args
        .split(',')
        .map(|a| parse_register_ref(a.trim()).ok_or_else(|| format!("bad qubit argument {a:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let kind = GateKind::ALL
        .into_iter()
        .find(|k| k.qasm_name() == name)
        .ok_or_else(|| format!("unsupported gate {name:?}"))?;
    let arity = |q: usize, p: usize| {
        if qubits.len() == q && params.len() == p {
            Ok(())
        } else {
            Err(format!("{name} expects {q} qubits and {p} angles"))
        }
    };
    let gate = match kind {
        GateKind::X => {
            arity(1, 0)?;
            Gate::X { target: qubits[0] }
        }
        GateKind::Cnot => {
            arity(2, 0)?;
            Gate::Cnot { control: qubits[0], target: qubits[1] }
        }
        GateKind::Ccx => {
            arity(3, 0)?;
            Gate::Ccx { controls: [qubits[0], qubits[1]], target: qubits[2] }
        }
        GateKind::U3 => {
            arity(1, 3)?;
            Gate::U3 { target: qubits[0], theta: params[0], phi: params[1], lambda: params[2] }
        }
        GateKind::Cu3 => {
            arity(2, 3)?;
            Gate::Cu3 {
                control: qubits[0],
                target: qubits[1],
                theta: params[0],
                phi: params[1],
                lambda: params[2],
            }
        }
        GateKind::Ry => {
            arity(1, 1)?;
            Gate::Ry { target: qubits[0], theta: params[0] }
        }
        GateKind::Rz => {
            arity(1, 1)?;
            Gate::Rz { target: qubits[0], theta: params[0] }
        }
        GateKind::Cry => {
            arity(2, 1)?;
            Gate::Cry { control: qubits[0], target: qubits[1], theta: params[0] }
        }
        GateKind::Crz => {
            arity(2, 1)?;
            Gate::Crz { control: qubits[0], target: qubits[1], theta: params[0] }
        }
    };
    Ok(gate)
}
