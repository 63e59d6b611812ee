// Three fermions where mode 1 drains modes 2 and 3 (H₁), or where quanta
// cascade 3 → 2 → 1 (H₂). For the cascade, the middle occupation peaks
// at μ/(λ+μ) at time √(2/(λμ)); the engine finds the peak numerically.

use quflux::catalog::{self, params};
use quflux::evolution::{maximize_mean, number_observables, run, EvolutionRequest, Strategy};
use quflux::ladder::basis_vector;

pub fn main() {
    let p = params(&[("lambda", 1.0), ("mu", 2.0)]);

    let h1 = catalog::preset("model3-h1", &p).unwrap();
    let req = EvolutionRequest::new(h1.hamiltonian, "011".parse().unwrap(), Strategy::Normalized)
        .with_grid(4.0, 5)
        .unwrap();
    let ts = run(&req).unwrap();
    println!("H1 from 011 (total stays 2):");
    for i in 0..ts.len() {
        let row = ts.row(i);
        println!("  t={:.1}  n = {:.6?}  sum = {:.12}", ts.times[i], row, row.iter().sum::<f64>());
    }
    let limit = catalog::asymptote("model3-h1", &"011".parse().unwrap(), &p).unwrap();
    println!("  t -> inf: {:.6?}", limit.values);

    for (lambda, mu) in [(1.0, 1.0), (1.0, 10.0), (10.0, 1.0)] {
        let p = params(&[("lambda", lambda), ("mu", mu)]);
        let h2 = catalog::preset("model3-h2", &p).unwrap();
        let h = h2.hamiltonian.compile().unwrap();
        let psi0 = basis_vector(&h2.system, &"001".parse().unwrap()).unwrap();
        let n2 = &number_observables(&h2.hamiltonian).unwrap()[1].matrix;
        let (t, peak) = maximize_mean(Strategy::Normalized, &h, &psi0, n2, 0.0, 20.0, 401).unwrap();
        println!(
            "H2 lambda={lambda} mu={mu}: max n_2 = {peak:.9} at t = {t:.6} (expected {:.9} at {:.6})",
            mu / (lambda + mu),
            (2.0 / (lambda * mu)).sqrt()
        );
    }
}
