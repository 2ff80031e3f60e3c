//! Multiplier algebras of small finite-dimensional algebras.

use std::sync::Arc;

use coprod::algebra::{AlgebraRef, FiniteAlgebra, MatrixUnits, Pattern};
use coprod::multiplier::finite_multiplier_algebra;
use coprod::scalar::Scalar;

fn main() {
    let algebras: Vec<AlgebraRef> = vec![
        Arc::new(MatrixUnits::finite(Pattern::Full, 2)),
        Arc::new(MatrixUnits::finite(Pattern::Diagonal, 3)),
        Arc::new(MatrixUnits::finite(Pattern::Upper, 2)),
    ];
    for a in &algebras {
        let m = finite_multiplier_algebra(a).unwrap();
        println!(
            "{}: dim A = {}, dim M(A) = {}, M(A) = A: {}, ideal: {}, dense: {}",
            a.name(),
            m.n,
            m.dim(),
            m.equals_embedding(),
            m.check_ideal(),
            m.check_density()
        );
    }
    let one = Scalar::one();
    let degenerate: AlgebraRef = Arc::new(
        FiniteAlgebra::new("span{e11,e12}", 2, &[(0, 0, 0, one.clone()), (0, 1, 1, one)])
            .and_then(|a| a.with_labels(vec!["e11".into(), "e12".into()]))
            .unwrap(),
    );
    match finite_multiplier_algebra(&degenerate) {
        Ok(_) => println!("span{{e11,e12}} accepted"),
        Err(e) => println!("span{{e11,e12}}: {e}"),
    }
}
