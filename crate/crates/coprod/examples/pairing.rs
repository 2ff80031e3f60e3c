//! `A` and its dual acting on each other.

use coprod::dual::{Duals, PairingActions, Space};
use coprod::gallery::{build, Params};
use coprod::index::{Element, Index};

fn main() {
    let entry = build("matrix", &Params::default()).unwrap();
    let d = Duals::new(&entry.coproduct, 4).unwrap();
    let alg = d.algebra();
    let actions = PairingActions::new(&d);
    let sample = d.sample(11);

    let a = Element::basis(Index::IntPair(2, 3));
    let w = &sample[0];
    println!("{} ▷ e23 = {}", w.label(), coprod::algebra::show(&*alg, &actions.dual_on_element(w, &a).unwrap()));
    println!("e23 ◁ {} = {}", w.label(), coprod::algebra::show(&*alg, &actions.element_by_dual(&a, w).unwrap()));
    let b = actions.functional_by_element(&w.functional, &Element::basis(Index::IntPair(1, 1)));
    println!("{} at e11 = {}", b.label(), b.at(&Index::IntPair(1, 1)));

    println!("module laws: {}", actions.check_module_laws(&sample));
    println!("faithful: {}", actions.check_faithful(&sample));
    for space in [Space::B0, Space::B] {
        let (by, on) = actions.check_unital(&sample, space);
        println!("A◁{space} = A: {by}; {space}▷A = A: {on}");
    }
}
