//! Leg spans of `Δ` and non-degeneracy, including a family that is not full.

use coprod::coproduct::{check_fullness, check_nondegenerate_coproduct, check_weak_nondegeneracy};
use coprod::gallery::{build, Params};

fn main() {
    let depth = 4;
    for name in ["group:S3", "sandwich:ex3_24", "sandwich:ex4_3", "sandwich:ex3_32"] {
        let entry = build(name, &Params::default()).unwrap();
        let cp = &entry.coproduct;
        let f = check_fullness(cp, depth).unwrap();
        println!("{name}");
        println!("    first leg ({}): {}", f.left.method, f.left.verdict);
        println!("    second leg ({}): {}", f.right.method, f.right.verdict);
        match check_nondegenerate_coproduct(cp, depth) {
            Ok(v) => println!("    non-degenerate: {v}"),
            Err(e) => println!("    non-degenerate: not checked, {e}"),
        }
        if let Some(e) = &entry.idempotent {
            println!("    weakly non-degenerate: {}", check_weak_nondegeneracy(cp, e, depth).unwrap());
        }
    }
}
