// Building a model by hand: a fermion coupled to a four-level boson, with
// a complex hopping amplitude and a number-conserving but non-self-adjoint
// Hamiltonian. Shows the term syntax, compilation, conservation checks and
// CSV output.

use std::io;

use quflux::cli::write_csv;
use quflux::evolution::{run, EvolutionRequest, Strategy};
use quflux::hamiltonian::is_self_adjoint;
use quflux::{HamiltonianSpec, HamiltonianTerm, ModeKind, ModeSystem, C64};

pub fn main() {
    let system = ModeSystem::new(vec![ModeKind::Fermionic, ModeKind::TruncatedBoson(4)]).unwrap();
    let spec = HamiltonianSpec::new(
        system,
        vec![
            HamiltonianTerm::parse(C64::new(0.8, 0.0), "b2+ b1").unwrap(),
            HamiltonianTerm::parse(C64::new(0.0, 0.3), "b1+ b2").unwrap(),
            HamiltonianTerm::parse(C64::new(0.5, 0.0), "b2+ b2").unwrap(),
        ],
    )
    .unwrap();
    for w in spec.warnings() {
        println!("warning: {w}");
    }
    let h = spec.compile().unwrap();
    println!("H = {spec}");
    println!("dim = {}, self-adjoint: {}", h.rows(), is_self_adjoint(&h, 1e-12).unwrap());
    println!("conserves total number: {}", spec.conserves_total_number());

    let req = EvolutionRequest::new(spec, "12".parse().unwrap(), Strategy::Normalized)
        .with_grid(2.0, 5)
        .unwrap();
    let ts = run(&req).unwrap();
    write_csv(&ts, io::stdout().lock()).unwrap();
}
