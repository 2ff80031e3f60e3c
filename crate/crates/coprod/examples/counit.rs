//! Checking a given counit and solving for one.

use coprod::coproduct::{check_counit, solve_counit, CounitSolution, CounitVariant};
use coprod::gallery::{build, Params};

fn main() {
    let depth = 5;
    for name in ["group:Z", "matrix", "trivial-right-unit", "sandwich:ex4_4"] {
        let entry = build(name, &Params::default()).unwrap();
        let cp = &entry.coproduct;
        println!("{name}");
        if let Some((eps, variant)) = &entry.counit {
            let r = check_counit(cp, eps, *variant, depth).unwrap();
            println!("    given ε ({}): laws {}, multiplicative {}", variant.key(), r.laws, r.homomorphism);
        }
        for variant in [CounitVariant::T1T2, CounitVariant::T3T4] {
            match solve_counit(cp, variant, depth).unwrap() {
                CounitSolution::Solution { eps, nullity, laws } => {
                    let values: Vec<String> = cp.algebra().enumerate(4).iter().map(|i| eps.at(i).to_string()).collect();
                    println!("    solved {}: from {laws:?}, free parameters {nullity}, first values [{}]", variant.key(), values.join(", "));
                }
                CounitSolution::NoSolution { certificate, .. } => println!("    solved {}: none, {certificate}", variant.key()),
            }
        }
    }
}
