//! Extending `Δ` to multipliers: `Δ₁(1)` on a finite group and on a sandwich family.

use std::sync::Arc;

use coprod::algebra::{AlgebraRef, TensorAlgebra};
use coprod::coproduct::{extend_to_m, extension_matches};
use coprod::gallery::{build, Params};
use coprod::multiplier::Multiplier;

fn main() {
    let s3 = build("group:S3", &Params::default()).unwrap();
    let cp = &s3.coproduct;
    let square: AlgebraRef = Arc::new(TensorAlgebra::square(&cp.algebra()));
    let mut ext = extend_to_m(cp, Multiplier::identity(cp.algebra()), None);
    println!("S3: Δ₁(1) = 1⊗1: {}", extension_matches(&mut ext, &Multiplier::identity(square), 6).unwrap());

    let ex = build("sandwich:ex3_32", &Params::default()).unwrap();
    let cp = &ex.coproduct;
    let e = ex.idempotent.clone().unwrap();
    let mut ext = extend_to_m(cp, Multiplier::identity(cp.algebra()), Some(e.clone()));
    println!("ex3_32: Δ₁(1) = E: {}", extension_matches(&mut ext, &e.multiplier(cp), 3).unwrap());
}
