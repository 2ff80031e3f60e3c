//! The dual algebras of the matrix coproduct: coordinate products, the counit
//! as a unit outside `B₀`, and the multiplier comparison.

use coprod::dual::{dual_multiplier_check, matrix_b_sample, Convention, DualElement, Duals, Space};
use coprod::gallery::{build, Params};
use coprod::index::Index;

fn main() {
    let entry = build("matrix", &Params::default()).unwrap();
    let d = Duals::new(&entry.coproduct, 5).unwrap();
    let alg = d.algebra();
    let f = |p, q| DualElement::coordinate(&alg, &Index::IntPair(p, q));

    let p = d.product(&f(1, 2), &f(2, 3), Convention::Left).unwrap();
    println!("(f12·f23)(e13) = {}", p.at(&Index::IntPair(1, 3)));
    let p = d.product(&f(1, 2), &f(3, 3), Convention::Left).unwrap();
    println!("(f12·f33)(e13) = {}", p.at(&Index::IntPair(1, 3)));

    let eps = DualElement::new(entry.counit.clone().unwrap().0);
    for space in Space::ALL {
        println!("ε in {space}: {}", d.membership(&eps, space));
    }
    let sample = matrix_b_sample(7, 6);
    for w in &sample {
        let left = d.product(&eps, w, Convention::Left).unwrap();
        println!("ε·{} = {}: {}", w.label(), w.label(), d.differ(&left, w).is_none());
    }
    let check = dual_multiplier_check(&d, &sample, Some(&eps.functional));
    println!("B multiplies B₀: {}", check.b_multiplies_b0);
    println!("B_ℓ multiplies f(·c): {}", check.bl_multiplies_b0r);
    println!("extraction f_pp·ω·f_qq: {}", check.extraction);
    println!("outside witnesses: {}", check.outside);
}
