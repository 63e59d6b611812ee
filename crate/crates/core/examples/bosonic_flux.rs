// Two three-level bosons with one-way transfer H = λ A₂†A₁. Prints the normalized occupations from |11⟩ and |21⟩ next to their
// closed forms for a few couplings.

use quflux::catalog::{self, params};
use quflux::evolution::{run, EvolutionRequest, Strategy};
use quflux::OccupationState;

pub fn main() {
    for lambda in [0.5, 1.0, 2.0] {
        let p = params(&[("lambda", lambda)]);
        let model = catalog::preset("model2", &p).unwrap();
        for init in ["11", "21"] {
            let initial: OccupationState = init.parse().unwrap();
            let req = EvolutionRequest::new(model.hamiltonian.clone(), initial.clone(), Strategy::Normalized)
                .with_grid(2.0, 5)
                .unwrap();
            let ts = run(&req).unwrap();
            let mut worst = 0.0f64;
            for (i, &t) in ts.times.iter().enumerate() {
                let exact = catalog::closed_form("model2", &initial, &p, t).unwrap();
                for (a, b) in ts.row(i).iter().zip(&exact) {
                    worst = worst.max((a - b).abs());
                }
            }
            let last = ts.row(ts.len() - 1);
            println!(
                "lambda={lambda:<4} from {init}: n(2) = ({:.6}, {:.6})  max |engine - exact| = {worst:.1e}",
                last[0], last[1]
            );
        }
    }
}
