// Cyclic hopping 1 → 2 → 3 → 1 with equal rates. Whatever single-quantum
// state starts the evolution, the normalized occupations even out to 1/3;
// two-quantum states even out to 2/3. The unnormalized state grows like
// cosh(√3 t).

use quflux::catalog::{self, params};
use quflux::evolution::{run, EvolutionRequest, Strategy};

pub fn main() {
    let model = catalog::preset("info-ha", &params(&[])).unwrap();
    let req = EvolutionRequest::new(model.hamiltonian.clone(), "100".parse().unwrap(), Strategy::Normalized)
        .with_grid(8.0, 9)
        .unwrap();
    let ts = run(&req).unwrap();
    println!("{:>4} {:>9} {:>9} {:>9} {:>14}", "t", "n_1", "n_2", "n_3", "|psi|^2");
    for i in 0..ts.len() {
        let r = ts.row(i);
        println!(
            "{:>4} {:>9.5} {:>9.5} {:>9.5} {:>14.6e}",
            ts.times[i],
            r[0],
            r[1],
            r[2],
            ts.norms[i].powi(2)
        );
    }
    assert!((ts.norms[8].powi(2) - catalog::cycle_norm_sqr(8.0)).abs() < 1e-9 * catalog::cycle_norm_sqr(8.0));

    for init in ["110", "101", "011", "000", "111"] {
        let a = catalog::asymptote("info-ha", &init.parse().unwrap(), &params(&[])).unwrap();
        println!("from {init}: long-time means {:.6?} ({:?})", a.values, a.method);
    }
}
