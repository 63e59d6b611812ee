// Two fermions, one-way hop H = λ a₂†a₁, started from |10⟩.
//
// The Hamiltonian is nilpotent, so every strategy has an exact polynomial
// propagator and the three notions of "mean occupation" can be compared
// side by side.
//
//     cargo run --example model1_strategies

use quflux::catalog::{self, params};
use quflux::evolution::{run_all_strategies, EvolutionRequest, Strategy};

pub fn main() {
    let model = catalog::preset("model1", &params(&[("lambda", 1.0)])).unwrap();
    println!("H = {}", model.hamiltonian);

    let req = EvolutionRequest::new(model.hamiltonian, "10".parse().unwrap(), Strategy::Normalized)
        .with_grid(3.0, 7)
        .unwrap();
    let runs = run_all_strategies(&req).unwrap();

    print!("{:>5}", "t");
    for ts in &runs {
        print!("  {:>13} {:>7}", format!("{} n_1", ts.strategy), "n_2");
    }
    println!();
    for i in 0..runs[0].len() {
        print!("{:>5.2}", runs[0].times[i]);
        for ts in &runs {
            let row = ts.row(i);
            print!("  {:>13.4} {:>7.4}", row[0], row[1]);
        }
        println!();
    }
}
