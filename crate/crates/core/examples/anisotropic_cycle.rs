// Cyclic hopping with unequal rates (λ₁, λ₂, λ₃), started from |101⟩.
// With a large λ₃ the occupations of modes 2 and 3 swap order early on
// and stay swapped; every curve settles well before t = 10.

use quflux::catalog::{self, PlateauConfig, SCENARIOS};
use quflux::evolution::run;
use quflux::{EvolutionRequest, Strategy};

pub fn main() {
    for sc in SCENARIOS.iter().filter(|s| s.preset == "info-hb") {
        let model = sc.preset().unwrap();
        let req = EvolutionRequest::new(model.hamiltonian.clone(), sc.initial(), Strategy::Normalized)
            .with_grid(10.0, 401)
            .unwrap();
        let ts = run(&req).unwrap();
        let (n2, n3) = (&ts.values[1], &ts.values[2]);
        // First grid time after which n₂ > n₃ holds to the end.
        let crossing = (0..ts.len()).rev().take_while(|&i| n2[i] > n3[i]).last().map(|i| ts.times[i]);
        let cfg = PlateauConfig { horizons: vec![10.0], ..Default::default() };
        let plateau = catalog::plateau(&model, &sc.initial(), &cfg).unwrap();
        println!(
            "{} {:?}: n(10) = {:.6?}, n2 > n3 from t = {}, plateau by t=10: {}",
            sc.name,
            sc.params,
            ts.row(ts.len() - 1),
            crossing.map_or("never".into(), |t| format!("{t:.3}")),
            plateau.converged
        );
    }
}
