//! JSON file formats. Per-element validation runs during deserialization so
//! that malformed gates, ops and states are reported with their position in
//! the file; whole-document checks (line ranges, dimensions) run afterwards.

use matchgate_core::compiler::{CompiledCircuit, LogicalCircuit, LogicalOp};
use matchgate_core::intertwine::{CliffordCircuit, CliffordOp};
use matchgate_core::{
    Circuit, GeneratorRep, Mat2, MatchGate, PauliString, ProductState, QuadraticHamiltonian, Rotation, C64,
};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Complex number as `[re, im]`.
pub type ComplexJson = [f64; 2];
/// `2×2` complex matrix as rows of `[re, im]` pairs.
pub type Mat2Json = [[ComplexJson; 2]; 2];

fn mat2_from_json(m: &Mat2Json) -> Mat2 {
    let c = |z: ComplexJson| C64::new(z[0], z[1]);
    Mat2::new(c(m[0][0]), c(m[0][1]), c(m[1][0]), c(m[1][1]))
}

fn mat2_to_json(m: &Mat2) -> Mat2Json {
    m.0.map(|row| row.map(|z| [z.re, z.im]))
}

/// A document that reads from and writes to JSON text.
pub trait JsonFormat: Sized {
    fn from_json(text: &str) -> CliResult<Self>;
    fn to_json(&self) -> Value;

    fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
        s.push('\n');
        s
    }
}

fn parse_error(e: serde_json::Error, line_offset: usize, column_offset: usize) -> CliError {
    let column = if e.line() == 1 { e.column() + column_offset } else { e.column() };
    CliError::Parse {
        context: "input".into(),
        line: e.line() + line_offset,
        column,
        message: strip_position(&e.to_string()),
    }
}

fn parse_as<'a, T: Deserialize<'a>>(text: &'a str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| parse_error(e, 0, 0))
}

/// Deserializes the list elements of a document separately. An element
/// that is well-formed JSON but fails validation is reported at its first
/// character; syntax errors keep their exact position.
fn parse_elements<T: DeserializeOwned>(text: &str, raws: &[&RawValue]) -> CliResult<Vec<T>> {
    raws.iter()
        .map(|raw| {
            let start = raw.get().as_ptr() as usize - text.as_ptr() as usize;
            let before = &text[..start];
            let line_offset = before.matches('\n').count();
            let column_offset = before.len() - before.rfind('\n').map_or(0, |i| i + 1);
            serde_json::from_str(raw.get()).map_err(|e| {
                if e.classify() == serde_json::error::Category::Data {
                    CliError::Parse {
                        context: "input".into(),
                        line: line_offset + 1,
                        column: column_offset + 1,
                        message: strip_position(&e.to_string()),
                    }
                } else {
                    parse_error(e, line_offset, column_offset)
                }
            })
        })
        .collect()
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_owned(),
        None => msg.to_owned(),
    }
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError::Invalid { context: "input".into(), message: message.into() }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

// ---------------------------------------------------------------- circuits

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
enum NamedGate {
    Swap,
    Cz,
    Id,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum GateJson {
    G {
        lines: [usize; 2],
        #[serde(rename = "A")]
        a: Mat2Json,
        #[serde(rename = "B")]
        b: Mat2Json,
    },
    Gtilde {
        lines: [usize; 2],
        #[serde(rename = "A")]
        a: Mat2Json,
        #[serde(rename = "B")]
        b: Mat2Json,
    },
    #[serde(rename = "named")]
    Named { name: NamedGate, lines: [usize; 2] },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "GateJson")]
struct GateSpec(MatchGate);

impl TryFrom<GateJson> for GateSpec {
    type Error = String;

    fn try_from(g: GateJson) -> Result<Self, String> {
        let pair = |l: [usize; 2]| (l[0], l[1]);
        let gate = match g {
            GateJson::G { lines, a, b } => {
                let g = MatchGate::new(mat2_from_json(&a), mat2_from_json(&b), pair(lines)).map_err(|e| e.to_string())?;
                if !g.is_allowed() {
                    return Err("kind \"G\" needs det A = det B; use \"Gtilde\" otherwise".into());
                }
                g
            }
            GateJson::Gtilde { lines, a, b } => {
                MatchGate::new(mat2_from_json(&a), mat2_from_json(&b), pair(lines)).map_err(|e| e.to_string())?
            }
            GateJson::Named { name, lines } => match name {
                NamedGate::Swap => MatchGate::swap(pair(lines)),
                NamedGate::Cz => MatchGate::cz(pair(lines)),
                NamedGate::Id => MatchGate::identity(pair(lines)),
            }
            .map_err(|e| e.to_string())?,
        };
        Ok(GateSpec(gate))
    }
}

fn gate_to_json(g: &MatchGate) -> GateJson {
    let lines = [g.lines().0, g.lines().1];
    let (a, b) = (mat2_to_json(g.a()), mat2_to_json(g.b()));
    if g.is_allowed() {
        GateJson::G { lines, a, b }
    } else {
        GateJson::Gtilde { lines, a, b }
    }
}

/// Normalized single-line state `[re0, im0, re1, im1]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(try_from = "[f64; 4]")]
struct LineState([C64; 2]);

impl TryFrom<[f64; 4]> for LineState {
    type Error = String;

    fn try_from(v: [f64; 4]) -> Result<Self, String> {
        let f = [C64::new(v[0], v[1]), C64::new(v[2], v[3])];
        ProductState::new(vec![f]).map_err(|e| e.to_string())?;
        Ok(LineState(f))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitJsonIn<'a> {
    n: usize,
    #[serde(borrow)]
    gates: Vec<&'a RawValue>,
    #[serde(default, borrow)]
    input: Option<Vec<&'a RawValue>>,
    #[serde(default)]
    measure: Option<usize>,
    #[serde(default)]
    permutation: Option<Vec<usize>>,
    #[serde(default)]
    measure_map: Option<Vec<usize>>,
}

#[derive(Debug, Serialize)]
struct CircuitJsonOut {
    n: usize,
    gates: Vec<GateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<Vec<[f64; 4]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure_map: Option<Vec<usize>>,
}

/// A circuit file: gates, the input product state and an optional measured line.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitFile {
    pub circuit: Circuit,
    /// Explicit input, or `None` for all-`|0⟩`.
    pub input: Option<ProductState>,
    pub measure: Option<usize>,
}

impl CircuitFile {
    pub fn new(circuit: Circuit) -> CircuitFile {
        CircuitFile { circuit, input: None, measure: None }
    }

    pub fn input_state(&self) -> ProductState {
        self.input.clone().unwrap_or_else(|| ProductState::zeros(self.circuit.num_qubits()))
    }

    fn from_parsed(text: &str, doc: CircuitJsonIn) -> CliResult<CircuitFile> {
        let specs: Vec<GateSpec> = parse_elements(text, &doc.gates)?;
        let gates: Vec<MatchGate> = specs.into_iter().map(|g| g.0).collect();
        for (i, g) in gates.iter().enumerate() {
            if g.lines().1 >= doc.n {
                return Err(invalid(format!("gate {i}: line {} out of range for {} lines", g.lines().1, doc.n)));
            }
        }
        let circuit = Circuit::from_gates(doc.n, gates)?;
        let input = match doc.input {
            None => None,
            Some(raws) => Some(parse_elements::<LineState>(text, &raws)?),
        };
        let input = match input {
            None => None,
            Some(lines) if lines.len() != doc.n => {
                return Err(invalid(format!("input has {} lines, circuit has {}", lines.len(), doc.n)))
            }
            Some(lines) => Some(ProductState::new(lines.into_iter().map(|l| l.0).collect())?),
        };
        if let Some(k) = doc.measure {
            if k >= doc.n {
                return Err(invalid(format!("measure line {k} out of range for {} lines", doc.n)));
            }
        }
        Ok(CircuitFile { circuit, input, measure: doc.measure })
    }

    fn out(&self) -> CircuitJsonOut {
        CircuitJsonOut {
            n: self.circuit.num_qubits(),
            gates: self.circuit.gates().iter().map(gate_to_json).collect(),
            input: self
                .input
                .as_ref()
                .map(|s| s.factors().iter().map(|f| [f[0].re, f[0].im, f[1].re, f[1].im]).collect()),
            measure: self.measure,
            permutation: None,
            measure_map: None,
        }
    }
}

impl JsonFormat for CircuitFile {
    fn from_json(text: &str) -> CliResult<Self> {
        CircuitFile::from_parsed(text, parse_as(text)?)
    }

    fn to_json(&self) -> Value {
        to_value(&self.out())
    }
}

/// Output of the compiler: the physical circuit plus the line bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledFile {
    pub file: CircuitFile,
    pub permutation: Vec<usize>,
    pub measure_map: Vec<usize>,
}

impl CompiledFile {
    pub fn from_compiled(cc: CompiledCircuit, input: Option<ProductState>) -> CompiledFile {
        CompiledFile {
            file: CircuitFile { circuit: cc.physical, input, measure: None },
            permutation: cc.permutation,
            measure_map: cc.measure_map,
        }
    }

    pub fn compiled(&self) -> CompiledCircuit {
        CompiledCircuit {
            physical: self.file.circuit.clone(),
            permutation: self.permutation.clone(),
            measure_map: self.measure_map.clone(),
        }
    }
}

impl JsonFormat for CompiledFile {
    fn from_json(text: &str) -> CliResult<Self> {
        let mut doc: CircuitJsonIn<'_> = parse_as(text)?;
        let (permutation, measure_map) = match (doc.permutation.take(), doc.measure_map.take()) {
            (Some(p), Some(m)) => (p, m),
            _ => return Err(invalid("compiled circuit needs \"permutation\" and \"measure_map\"")),
        };
        let n = doc.n;
        let mut seen = vec![false; n];
        if permutation.len() != n || permutation.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(invalid(format!("permutation is not a permutation of {n} lines")));
        }
        if measure_map.iter().any(|&l| l >= n) {
            return Err(invalid("measure_map line out of range"));
        }
        Ok(CompiledFile { file: CircuitFile::from_parsed(text, doc)?, permutation, measure_map })
    }

    fn to_json(&self) -> Value {
        let mut out = self.file.out();
        out.permutation = Some(self.permutation.clone());
        out.measure_map = Some(self.measure_map.clone());
        to_value(&out)
    }
}

// ---------------------------------------------------------- logical circuits

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum LogicalOpJson {
    U1 { q: usize, matrix: Mat2Json },
    #[serde(rename = "CZ")]
    Cz { q: usize },
}

#[derive(Debug, Deserialize)]
#[serde(try_from = "LogicalOpJson")]
struct LogicalOpSpec(LogicalOp);

impl TryFrom<LogicalOpJson> for LogicalOpSpec {
    type Error = String;

    fn try_from(op: LogicalOpJson) -> Result<Self, String> {
        Ok(LogicalOpSpec(match op {
            LogicalOpJson::U1 { q, matrix } => {
                let m = mat2_from_json(&matrix);
                if !m.is_unitary(matchgate_core::gate::GATE_TOL) {
                    return Err("one-qubit matrix is not unitary".into());
                }
                LogicalOp::OneQubit { matrix: m, qubit: q }
            }
            LogicalOpJson::Cz { q } => LogicalOp::Cz { qubit: q },
        }))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogicalJsonIn<'a> {
    m: usize,
    #[serde(borrow)]
    ops: Vec<&'a RawValue>,
}

#[derive(Debug, Serialize)]
struct LogicalJsonOut {
    m: usize,
    ops: Vec<LogicalOpJson>,
}

impl JsonFormat for LogicalCircuit {
    fn from_json(text: &str) -> CliResult<Self> {
        let doc: LogicalJsonIn<'_> = parse_as(text)?;
        let ops: Vec<LogicalOpSpec> = parse_elements(text, &doc.ops)?;
        let mut lc = LogicalCircuit::new(doc.m);
        for (i, op) in ops.into_iter().enumerate() {
            lc.push(op.0).map_err(|e| invalid(format!("op {i}: {e}")))?;
        }
        Ok(lc)
    }

    fn to_json(&self) -> Value {
        let ops = self
            .ops()
            .iter()
            .map(|op| match *op {
                LogicalOp::OneQubit { matrix, qubit } => LogicalOpJson::U1 { q: qubit, matrix: mat2_to_json(&matrix) },
                LogicalOp::Cz { qubit } => LogicalOpJson::Cz { q: qubit },
            })
            .collect();
        to_value(&LogicalJsonOut { m: self.num_qubits(), ops })
    }
}

// ------------------------------------------------------ real square matrices

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HamiltonianJson {
    n: usize,
    h: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RotationJson {
    n: usize,
    r: Vec<Vec<f64>>,
}

fn square_matrix(n: usize, rows: &[Vec<f64>], what: &str) -> CliResult<DMatrix<f64>> {
    let dim = 2 * n;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(invalid(format!("{what} must be {dim}×{dim} for n = {n}")));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl JsonFormat for QuadraticHamiltonian {
    fn from_json(text: &str) -> CliResult<Self> {
        let doc: HamiltonianJson = parse_as(text)?;
        let h = square_matrix(doc.n, &doc.h, "h")?;
        Ok(QuadraticHamiltonian::new(doc.n, h)?)
    }

    fn to_json(&self) -> Value {
        to_value(&HamiltonianJson { n: self.num_qubits(), h: matrix_rows(self.coefficients()) })
    }
}

impl JsonFormat for Rotation {
    fn from_json(text: &str) -> CliResult<Self> {
        let doc: RotationJson = parse_as(text)?;
        let r = square_matrix(doc.n, &doc.r, "r")?;
        Ok(Rotation::new(r)?)
    }

    fn to_json(&self) -> Value {
        to_value(&RotationJson { n: self.num_qubits(), r: matrix_rows(self.matrix()) })
    }
}

// --------------------------------------------------------- Clifford circuits

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "g", deny_unknown_fields)]
enum CliffordOpJson {
    #[serde(rename = "CNOT")]
    Cnot { c: usize, t: usize },
    H { q: usize },
    P { q: usize },
    X { q: usize },
    Y { q: usize },
    Z { q: usize },
}

impl From<CliffordOpJson> for CliffordOp {
    fn from(op: CliffordOpJson) -> CliffordOp {
        match op {
            CliffordOpJson::Cnot { c, t } => CliffordOp::Cnot { control: c, target: t },
            CliffordOpJson::H { q } => CliffordOp::H(q),
            CliffordOpJson::P { q } => CliffordOp::P(q),
            CliffordOpJson::X { q } => CliffordOp::X(q),
            CliffordOpJson::Y { q } => CliffordOp::Y(q),
            CliffordOpJson::Z { q } => CliffordOp::Z(q),
        }
    }
}

impl From<CliffordOp> for CliffordOpJson {
    fn from(op: CliffordOp) -> CliffordOpJson {
        match op {
            CliffordOp::Cnot { control, target } => CliffordOpJson::Cnot { c: control, t: target },
            CliffordOp::H(q) => CliffordOpJson::H { q },
            CliffordOp::P(q) => CliffordOpJson::P { q },
            CliffordOp::X(q) => CliffordOpJson::X { q },
            CliffordOp::Y(q) => CliffordOpJson::Y { q },
            CliffordOp::Z(q) => CliffordOpJson::Z { q },
        }
    }
}

#[derive(Debug, Serialize)]
struct CliffordJson {
    n: usize,
    ops: Vec<CliffordOpJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CliffordJsonIn<'a> {
    n: usize,
    #[serde(borrow)]
    ops: Vec<&'a RawValue>,
}

impl JsonFormat for CliffordCircuit {
    fn from_json(text: &str) -> CliResult<Self> {
        let doc: CliffordJsonIn<'_> = parse_as(text)?;
        let ops: Vec<CliffordOpJson> = parse_elements(text, &doc.ops)?;
        let mut t = CliffordCircuit::new(doc.n);
        for (i, op) in ops.into_iter().enumerate() {
            t.push(op.into()).map_err(|e| invalid(format!("op {i}: {e}")))?;
        }
        Ok(t)
    }

    fn to_json(&self) -> Value {
        to_value(&CliffordJson { n: self.num_qubits(), ops: self.ops().iter().map(|&op| op.into()).collect() })
    }
}

// ------------------------------------------------------------ generator sets

#[derive(Debug, Deserialize)]
#[serde(try_from = "String")]
struct PauliText(PauliString);

impl TryFrom<String> for PauliText {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse().map(PauliText).map_err(|e: matchgate_core::Error| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJsonIn<'a> {
    n: usize,
    #[serde(borrow)]
    generators: Vec<&'a RawValue>,
}

#[derive(Debug, Serialize)]
struct RepJsonOut {
    n: usize,
    generators: Vec<String>,
}

impl JsonFormat for GeneratorRep {
    fn from_json(text: &str) -> CliResult<Self> {
        let doc: RepJsonIn<'_> = parse_as(text)?;
        let generators: Vec<PauliText> = parse_elements(text, &doc.generators)?;
        Ok(GeneratorRep::new(doc.n, generators.into_iter().map(|p| p.0).collect())?)
    }

    fn to_json(&self) -> Value {
        to_value(&RepJsonOut {
            n: self.num_qubits(),
            generators: self.generators().iter().map(ToString::to_string).collect(),
        })
    }
}
