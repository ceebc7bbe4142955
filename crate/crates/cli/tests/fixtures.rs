use std::fs;
use std::path::PathBuf;

use matchgate_cli::formats::{CircuitFile, JsonFormat};
use matchgate_core::compiler::LogicalCircuit;
use matchgate_core::intertwine::{example2_t, example3_t, CliffordCircuit};
use matchgate_core::{random, QuadraticHamiltonian};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load<T: JsonFormat>(name: &str) -> T {
    T::from_json(&fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn random_fixture() -> CircuitFile {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let circuit = random::nn_circuit(&mut rng, 6, 40);
    let input = random::product_state(&mut rng, 6);
    CircuitFile { circuit, input: Some(input), measure: Some(3) }
}

/// Regenerate with `MATCHGATE_BLESS=1 cargo test -p matchgate-cli --test fixtures`.
#[test]
fn random_fixture_is_reproducible() {
    let expected = random_fixture();
    let path = fixture("random_nn6.json");
    if std::env::var_os("MATCHGATE_BLESS").is_some() {
        fs::write(&path, expected.to_json_string()).unwrap();
    }
    assert_eq!(load::<CircuitFile>("random_nn6.json"), expected);
}

#[test]
fn clifford_fixtures_are_the_example_circuits() {
    assert_eq!(load::<CliffordCircuit>("example2_t5.json"), example2_t(5).unwrap());
    assert_eq!(load::<CliffordCircuit>("example3_t5.json"), example3_t(5).unwrap());
}

#[test]
fn remaining_fixtures_parse() {
    for name in ["empty.json", "gxx.json", "swap.json"] {
        load::<CircuitFile>(name);
    }
    for name in ["hadamard.json", "cz_pair.json"] {
        load::<LogicalCircuit>(name);
    }
    for name in ["zero_hamiltonian.json", "hamiltonian3.json"] {
        load::<QuadraticHamiltonian>(name);
    }
}
