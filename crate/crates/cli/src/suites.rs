//! Randomized verification suites. Each suite draws from its own ChaCha8
//! stream of the run seed, so a suite's report does not depend on which other
//! suites run, and the same seed always gives the same report bit for bit.

use std::f64::consts::FRAC_PI_4;

use matchgate_core::algebra::decompose_pauli;
use matchgate_core::compiler::{compile, verify_compilation, LogicalOp};
use matchgate_core::decompose::{check_decomposition, decompose, gate_count_cap, rotation_to_circuit};
use matchgate_core::dense::{circuit_unitary, embed, pauli_matrix, CMatrix, StateVector};
use matchgate_core::gate::ViolationKind;
use matchgate_core::gaussian::local_rotation;
use matchgate_core::intertwine::{clifford_unitary, example2_t, example3_t, simulate_intertwined, CliffordCircuit};
use matchgate_core::linalg::{expm, max_abs_diff};
use matchgate_core::{
    circuit_to_rotation, expectation_z, gate_to_rotation, jordan_wigner, random, validate_circuit, verify_rep,
    Circuit, Error, LinePolicy, MatchGate, Pauli, PauliString, Phase, ProductState, Rotation, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Suite names in run order.
pub const SUITES: [&str; 7] = ["fast-vs-dense", "rotation", "compiler", "decomposer", "intertwiner", "negative", "identities"];

/// Tolerance floors for checks whose accuracy is limited by longer numerical chains.
pub const ROUND_TRIP_TOL: f64 = 1e-8;
pub const DECOMPOSER_TOL: f64 = 1e-8;
pub const INTERTWINED_TOL: f64 = 1e-7;
pub const IDENTITY_TOL: f64 = 1e-12;

/// Degree cap for intertwined observables.
pub const INTERTWINED_DEGREE_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    /// Individual comparisons and structural checks performed.
    pub checks: usize,
    /// Largest error of the suite's main numerical comparison.
    pub max_error: f64,
    pub tolerance: f64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

struct Tally {
    instances: usize,
    checks: usize,
    max_error: f64,
    tolerance: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new(tolerance: f64) -> Tally {
        Tally { instances: 0, checks: 0, max_error: 0.0, tolerance, failures: Vec::new() }
    }

    /// Records one numerical comparison.
    fn error(&mut self, what: impl FnOnce() -> String, err: f64) {
        self.checks += 1;
        self.max_error = self.max_error.max(err);
        if err.is_nan() || err > self.tolerance {
            self.failures.push(format!("{}: error {err:.3e}", what()));
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, name: &str) -> SuiteReport {
        SuiteReport {
            name: name.to_owned(),
            passed: self.failures.is_empty(),
            instances: self.instances,
            checks: self.checks,
            max_error: self.max_error,
            tolerance: self.tolerance,
            failures: self.failures,
        }
    }
}

fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = SUITES.iter().position(|s| *s == name).expect("known suite");
    rng.set_stream(index as u64);
    rng
}

/// Runs one suite; `tolerance` is the oracle-agreement tolerance, raised to
/// each suite's floor where one applies.
pub fn run_suite(name: &str, seed: u64, tolerance: f64) -> CliResult<SuiteReport> {
    let report = match name {
        "fast-vs-dense" => fast_vs_dense(seed, tolerance),
        "rotation" => rotation(seed, tolerance),
        "compiler" => compiler(seed, tolerance),
        "decomposer" => decomposer(seed, tolerance.max(DECOMPOSER_TOL)),
        "intertwiner" => intertwiner(seed, tolerance.max(INTERTWINED_TOL)),
        "negative" => negative(seed),
        "identities" => identities(),
        _ => {
            return Err(CliError::Invalid {
                context: "--suite".into(),
                message: format!("unknown suite \"{name}\"; expected one of {} or all", SUITES.join(", ")),
            })
        }
    }?;
    Ok(report)
}

/// Runs `name` (or every suite for `"all"`).
pub fn run(name: &str, seed: u64, tolerance: f64) -> CliResult<VerifyReport> {
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    let suites = names.into_iter().map(|s| run_suite(s, seed, tolerance)).collect::<CliResult<Vec<_>>>()?;
    Ok(VerifyReport { seed, passed: suites.iter().all(|s| s.passed), suites })
}

/// Random nearest-neighbour instance: circuit, input state and measured line.
pub struct SimInstance {
    pub circuit: Circuit,
    pub input: ProductState,
    pub line: usize,
}

pub const SIM_INSTANCES: usize = 200;
pub const SIM_MAX_GATES: usize = 60;

/// The instances shared by the fast-vs-dense and rotation suites.
pub fn sim_instances(seed: u64) -> Vec<SimInstance> {
    let mut rng = stream(seed, "fast-vs-dense");
    (0..SIM_INSTANCES)
        .map(|_| {
            let n = rng.random_range(2..=8);
            let gates = rng.random_range(0..=SIM_MAX_GATES);
            let circuit = random::nn_circuit(&mut rng, n, gates);
            let input = random::product_state(&mut rng, n);
            let line = rng.random_range(0..n);
            SimInstance { circuit, input, line }
        })
        .collect()
}

/// Dense `⟨Z_k⟩` of `c` applied to `s`.
pub fn dense_z(c: &Circuit, s: &ProductState, k: usize) -> Result<f64, Error> {
    let v = StateVector::from_product(s)?.apply_circuit(c)?;
    Ok(v.expectation_complex(&PauliString::single(c.num_qubits(), k, Pauli::Z))?.re)
}

/// Dense `⟨target⟩` after `T† U T` on `s`.
pub fn dense_intertwined(t: &CliffordCircuit, base: &Circuit, s: &ProductState, target: &PauliString) -> Result<f64, Error> {
    let tu = clifford_unitary(t)?;
    let w: CMatrix = tu.adjoint() * circuit_unitary(base)? * &tu;
    let lines: Vec<usize> = (0..s.num_qubits()).collect();
    let v = StateVector::from_product(s)?.apply(&w, &lines)?;
    Ok(v.expectation_complex(target)?.re)
}

fn fast_vs_dense(seed: u64, tol: f64) -> CliResult<SuiteReport> {
    let mut t = Tally::new(tol);
    for (i, inst) in sim_instances(seed).iter().enumerate() {
        t.instances += 1;
        let fast = expectation_z(&inst.circuit, &inst.input, inst.line)?.value;
        let dense = dense_z(&inst.circuit, &inst.input, inst.line)?;
        t.error(|| format!("instance {i} (n = {}, line {})", inst.circuit.num_qubits(), inst.line), (fast - dense).abs());
    }
    Ok(t.finish("fast-vs-dense"))
}

fn rotation_sound(t: &mut Tally, r: &Rotation, what: &dyn Fn() -> String) {
    let orth = r.orthogonality_error();
    let det = r.determinant();
    t.check(orth <= 1e-9 && det > 0.0, || format!("{}: |RᵀR − I| = {orth:.3e}, det = {det}", what()));
}

fn round_trip(t: &mut Tally, r: &Rotation, what: &dyn Fn() -> String) -> CliResult<()> {
    let back = circuit_to_rotation(&rotation_to_circuit(r)?)?;
    t.error(what, back.distance(r));
    Ok(())
}

fn rotation(seed: u64, tol: f64) -> CliResult<SuiteReport> {
    let mut t = Tally::new(tol.max(ROUND_TRIP_TOL));
    for (i, inst) in sim_instances(seed).iter().enumerate() {
        t.instances += 1;
        let n = inst.circuit.num_qubits();
        for (j, g) in inst.circuit.gates().iter().enumerate() {
            let r = gate_to_rotation(g, n)?;
            let what = || format!("instance {i} gate {j}");
            rotation_sound(&mut t, &r, &what);
            round_trip(&mut t, &r, &what)?;
        }
        let r = circuit_to_rotation(&inst.circuit)?;
        let what = || format!("instance {i} circuit");
        rotation_sound(&mut t, &r, &what);
        round_trip(&mut t, &r, &what)?;
    }
    Ok(t.finish("rotation"))
}

pub const COMPILER_INSTANCES: usize = 20;
pub const COMPILER_MAX_OPS: usize = 10;
pub const COMPILER_RANDOM_INPUTS: usize = 8;

fn compiler(seed: u64, tol: f64) -> CliResult<SuiteReport> {
    let mut rng = stream(seed, "compiler");
    let mut t = Tally::new(tol);
    for i in 0..COMPILER_INSTANCES {
        t.instances += 1;
        let m = rng.random_range(1..=3);
        let len = rng.random_range(0..=COMPILER_MAX_OPS);
        let lc = random::logical_circuit(&mut rng, m, len);
        let cc = compile(&lc)?;
        let inputs: Vec<Vec<bool>> = if m <= 2 {
            (0..1usize << m).map(|b| (0..m).map(|j| (b >> j) & 1 == 1).collect()).collect()
        } else {
            (0..COMPILER_RANDOM_INPUTS).map(|_| random::bits(&mut rng, m)).collect()
        };
        for bits in &inputs {
            let report = verify_compilation(&lc, &cc, bits)?;
            t.error(|| format!("instance {i} input {bits:?}"), report.max_error);
        }
        let g2 = lc.ops().iter().filter(|op| matches!(op, LogicalOp::Cz { .. })).count();
        let g1 = lc.ops().len() - g2;
        let valid = validate_circuit(&cc.physical, LinePolicy::NextNearestNeighbour).passed();
        t.check(valid, || format!("instance {i}: compiled circuit fails distance-2 validation"));
        let gates = cc.physical.len();
        t.check(gates <= 5 * g1 + 4 * g2, || format!("instance {i}: {gates} gates > 5·{g1} + 4·{g2}"));
        let d = cc.max_displacement();
        t.check(d <= 1, || format!("instance {i}: line displacement {d}"));
    }
    Ok(t.finish("compiler"))
}

pub const DECOMPOSER_INSTANCES: usize = 20;

fn decomposer(seed: u64, tol: f64) -> CliResult<SuiteReport> {
    let mut rng = stream(seed, "decomposer");
    let mut t = Tally::new(tol);
    for i in 0..DECOMPOSER_INSTANCES {
        t.instances += 1;
        let n = rng.random_range(2..=5);
        let q = random::quadratic_hamiltonian(&mut rng, n, 1.0);
        let c = decompose(&q)?;
        let report = check_decomposition(&q, &c)?;
        t.error(|| format!("instance {i} (n = {n}) rotation"), report.rotation_error);
        t.error(|| format!("instance {i} (n = {n}) infidelity"), 1.0 - report.fidelity);
        let cap = gate_count_cap(n);
        t.check(c.len() <= cap, || format!("instance {i}: {} gates above cap {cap}", c.len()));
    }
    Ok(t.finish("decomposer"))
}

pub const INTERTWINED_INSTANCES: usize = 20;
pub const INTERTWINED_N: usize = 5;

fn intertwiner(seed: u64, tol: f64) -> CliResult<SuiteReport> {
    let mut rng = stream(seed, "intertwiner");
    let mut t = Tally::new(tol);
    let mut sets = Vec::new();
    for n in 4..=8 {
        sets.push((format!("example 2, n = {n}"), example2_t(n)?));
    }
    for n in [5, 7] {
        sets.push((format!("example 3, n = {n}"), example3_t(n)?));
    }
    for (name, tc) in &sets {
        let n = tc.num_qubits();
        let rep = matchgate_core::intertwine::conjugate_rep(tc, &jordan_wigner(n)?)?;
        t.check(verify_rep(&rep).passed(), || format!("{name}: conjugated generators break the algebra"));
    }
    let n = INTERTWINED_N;
    let candidates = [example2_t(n)?, example3_t(n)?];
    for i in 0..INTERTWINED_INSTANCES {
        t.instances += 1;
        let tc = &candidates[i % 2];
        let rep = matchgate_core::intertwine::conjugate_rep(tc, &jordan_wigner(n)?)?;
        let lines: Vec<usize> = (0..n)
            .filter(|&k| {
                decompose_pauli(&rep, &PauliString::single(n, k, Pauli::Z))
                    .is_ok_and(|d| d.degree() <= INTERTWINED_DEGREE_CAP)
            })
            .collect();
        let base = random::nn_circuit(&mut rng, n, 15);
        let s = random::product_state(&mut rng, n);
        let k = lines[rng.random_range(0..lines.len())];
        let z = PauliString::single(n, k, Pauli::Z);
        let fast = simulate_intertwined(tc, &base, &s, &z, INTERTWINED_DEGREE_CAP)?;
        let dense = dense_intertwined(tc, &base, &s, &z)?;
        t.error(|| format!("instance {i} (example {}, line {k})", 2 + i % 2), (fast - dense).abs());
    }
    Ok(t.finish("intertwiner"))
}

fn pauli_rotation(p: &str, theta: f64) -> CMatrix {
    let m = pauli_matrix(&p.parse().expect("valid Pauli text"));
    let id = CMatrix::identity(m.nrows(), m.ncols());
    id * C64::new(theta.cos(), 0.0) + m * C64::new(0.0, theta.sin())
}

fn negative(seed: u64) -> CliResult<SuiteReport> {
    let mut rng = stream(seed, "negative");
    let mut t = Tally::new(0.0);
    // SWAP, the XIY witness and the distance-2 gate
    t.instances = 3;

    let swap = Circuit::from_gates(2, vec![MatchGate::swap((0, 1))?])?;
    let report = validate_circuit(&swap, LinePolicy::NearestNeighbour);
    let det_mismatch = report.violations.iter().any(|v| v.kind == ViolationKind::DetMismatch);
    t.check(det_mismatch, || "SWAP not rejected as det mismatch".into());
    t.check(circuit_to_rotation(&swap).is_err(), || "SWAP accepted by the simulator".into());

    let theta = rng.random_range(0.1..1.4);
    let witness = local_rotation(&pauli_rotation("XIY", theta));
    t.check(matches!(witness, Err(Error::NonGaussianGate { .. })), || "exp(iθ XIY) not rejected".into());
    t.check(local_rotation(&pauli_rotation("XZY", theta)).is_ok(), || "exp(iθ XZY) rejected".into());

    let g = random::allowed_gate(&mut rng, (0, 2));
    let far = Circuit::from_gates(3, vec![g])?;
    t.check(!validate_circuit(&far, LinePolicy::NearestNeighbour).passed(), || "distance-2 gate passes NN validation".into());
    t.check(validate_circuit(&far, LinePolicy::NextNearestNeighbour).passed(), || "distance-2 gate fails NNN validation".into());
    t.check(circuit_to_rotation(&far).is_err(), || "distance-2 gate accepted by the simulator".into());
    let dense = embed(&g.matrix(), &[0, 2], 3)?;
    t.check(
        matches!(local_rotation(&dense), Err(Error::NonGaussianGate { .. })),
        || "random distance-2 gate is Gaussian".into(),
    );
    Ok(t.finish("negative"))
}

fn identities() -> CliResult<SuiteReport> {
    let mut t = Tally::new(IDENTITY_TOL);
    let jw2 = jordan_wigner(2)?;
    let c = |mu: usize| jw2.generator(mu).clone();
    let phased = |p: PauliString, k: Phase| {
        let ph = p.phase().mul(k);
        p.with_phase(ph)
    };

    let cz_swap = MatchGate::cz((0, 1))?.matrix() * MatchGate::swap((0, 1))?.matrix();
    t.error(|| "G(Z,X) = CZ·SWAP".into(), max_abs_diff(&MatchGate::modified_swap((0, 1))?.matrix(), &cz_swap));

    let table: [(usize, usize, Phase, &str); 6] = [
        (0, 1, Phase::MINUS_I, "ZI"),
        (1, 2, Phase::MINUS_I, "XX"),
        (0, 2, Phase::I, "YX"),
        (1, 3, Phase::MINUS_I, "XY"),
        (0, 3, Phase::I, "YY"),
        (2, 3, Phase::MINUS_I, "IZ"),
    ];
    for (a, b, k, expect) in table {
        t.instances += 1;
        let got = phased(c(a).mul(&c(b))?, k);
        t.check(got == expect.parse()?, || format!("c_{a} c_{b} gives {got}, expected {expect}"));
    }

    let jw3 = jordan_wigner(3)?;
    let distant = phased(jw3.generator(1).mul(jw3.generator(5))?, Phase::MINUS_I);
    t.check(distant == "XZY".parse()?, || format!("−i c_1 c_5 gives {distant}"));

    for n in 1..=6 {
        let jw = jordan_wigner(n)?;
        for k in 0..n {
            let z = phased(jw.generator(2 * k).mul(jw.generator(2 * k + 1))?, Phase::MINUS_I);
            t.check(z == PauliString::single(n, k, Pauli::Z), || format!("Z_{k} on {n} lines"));
        }
    }

    let m = |a: usize, b: usize| -> CliResult<CMatrix> { Ok(pauli_matrix(&c(a).mul(&c(b))?)) };
    let k: CMatrix = -m(0, 3)? + m(1, 2)? + m(0, 1)? + m(2, 3)?;
    let s = expm(&(k * C64::new(-FRAC_PI_4, 0.0)));
    for (from, to) in [(0, 2), (1, 3)] {
        let conj = s.adjoint() * pauli_matrix(&c(from)) * &s;
        t.error(|| format!("S† c_{from} S = c_{to}"), max_abs_diff(&conj, &pauli_matrix(&c(to))));
    }
    let g = MatchGate::modified_swap((0, 1))?.matrix();
    let overlap = (g.adjoint() * &s).trace() / C64::new(4.0, 0.0);
    t.error(|| "exponential form equals G(Z,X) up to phase".into(), max_abs_diff(&(g * overlap), &s));
    Ok(t.finish("identities"))
}
