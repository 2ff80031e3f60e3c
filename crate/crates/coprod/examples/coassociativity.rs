//! Coassociativity in each form that the regular maps allow.

use coprod::coproduct::{
    check_coassoc_extension, check_coassoc_mixed, check_coassoc_single_t1, check_coassoc_t1t2, check_coassoc_t3t4,
    Idempotent, Mixed,
};
use coprod::gallery::{build, Params};

fn main() {
    let depth = 4;
    for name in ["group:S3", "matrix", "trivial-right-unit", "sandwich:ex3_32"] {
        let entry = build(name, &Params::default()).unwrap();
        let cp = &entry.coproduct;
        println!("{name}");
        println!("    T1/T2:    {}", check_coassoc_t1t2(cp, depth).unwrap());
        println!("    T3/T4:    {}", check_coassoc_t3t4(cp, depth).unwrap());
        println!("    T1/T4:    {}", check_coassoc_mixed(cp, Mixed::T1T4, depth).unwrap());
        println!("    T1 alone: {}", check_coassoc_single_t1(cp, depth).unwrap());
        let e = entry.idempotent.clone().unwrap_or(Idempotent::One);
        match check_coassoc_extension(cp, &e, 3) {
            Ok(v) => println!("    extended: {v}"),
            Err(err) => println!("    extended: {err}"),
        }
    }
}
