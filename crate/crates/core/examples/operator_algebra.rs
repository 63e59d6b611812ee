// The building blocks: ladder matrices on a mixed fermion/boson space,
// their (anti)commutators, and matrix exponentials of nilpotent and
// Hermitian generators.

use quflux::ladder::{annihilator, creator, number_operator};
use quflux::linalg::{adjoint, anticommutator, commutator, expm, matmul, nilpotency_index, DEFAULT_EXPM_TOL};
use quflux::{ComplexMatrix, ModeKind, ModeSystem, C64};

fn deviation(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.sub(b).unwrap().max_abs()
}

pub fn main() {
    let fermions = ModeSystem::fermions(3).unwrap();
    let a1 = annihilator(&fermions, 1).unwrap();
    let a3 = annihilator(&fermions, 3).unwrap();
    let id = ComplexMatrix::identity(fermions.total_dim());
    let car = anticommutator(&a1, &creator(&fermions, 1).unwrap()).unwrap();
    let cross = anticommutator(&a1, &adjoint(&a3)).unwrap();
    println!("{{a1, a1+}} - 1: {:.1e}", deviation(&car, &id));
    println!("{{a1, a3+}}:     {:.1e}", cross.max_abs());

    let mixed = ModeSystem::new(vec![ModeKind::TruncatedBoson(3), ModeKind::Fermionic]).unwrap();
    let b = annihilator(&mixed, 1).unwrap();
    let n = matmul(&adjoint(&b), &b).unwrap();
    println!("b+b - N1:        {:.1e}", deviation(&n, &number_operator(&mixed, 1).unwrap()));
    println!("[b, b+] diagonal: {:?}", commutator(&b, &adjoint(&b)).unwrap().diagonal().iter().map(|c| c.re).collect::<Vec<_>>());

    let hop = matmul(&creator(&fermions, 2).unwrap(), &a1).unwrap();
    println!("nilpotency index of a2+ a1: {:?}", nilpotency_index(&hop));
    let u = expm(&hop.scale(C64::new(0.0, -1.5)), DEFAULT_EXPM_TOL).unwrap();
    println!("exp(-1.5i a2+a1) entry (2,1): {}", u[(2, 1)]);

    let herm = hop.add(&adjoint(&hop)).unwrap();
    let u = expm(&herm.scale(C64::new(0.0, -0.7)), DEFAULT_EXPM_TOL).unwrap();
    let unitarity = deviation(&matmul(&adjoint(&u), &u).unwrap(), &id);
    println!("unitarity defect of exp(-0.7i(H+H+)): {unitarity:.1e}");
}
