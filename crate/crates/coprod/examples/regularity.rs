//! Which canonical maps land in `A⊗A`, for every gallery family.

use coprod::coproduct::{regularity_report, Map, MapStatus};
use coprod::gallery::{build, Params, FAMILIES};

fn main() {
    let depth = 4;
    for name in FAMILIES {
        let entry = build(name, &Params::default()).expect("gallery family");
        let report = regularity_report(&entry.coproduct, depth).expect("depth is positive");
        let cells: Vec<String> = Map::ALL
            .iter()
            .map(|m| match report.status(*m) {
                MapStatus::Regular => format!("{m} regular"),
                MapStatus::NonRegular { family, .. } => format!("{m} non-regular ({family})"),
                MapStatus::UnknownToDepth(r) => format!("{m} unknown ({r})"),
            })
            .collect();
        println!("{name}\n    {}", cells.join("\n    "));
    }
}
