//! Acceptance criteria. Runs as a plain binary so that every criterion prints
//! one PASS/FAIL line whether or not it passes.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::thread;
use std::time::Instant;

use clap::Parser;
use coprod::algebra::{
    check_idempotent_algebra, mul, AlgebraRef, FiniteAlgebra, Functional, MatrixUnits, Pattern, TensorAlgebra, Verdict,
};
use coprod::cli::{execute, Args};
use coprod::coproduct::{
    check_coassoc_extension, check_coassoc_single_t1, check_coassoc_t1t2, check_coassoc_t3t4, check_counit,
    check_fullness, check_homomorphism, check_involution, check_nondegenerate_coproduct, check_surjective,
    check_weak_nondegeneracy, extend_to_m, extension_matches, pair_basis, probe_for, regularity_report, solve_counit,
    Coproduct, CounitSolution, CounitVariant, Definition, Idempotent, Map, MapStatus, OneSided,
};
use coprod::dual::{
    check_products_agree, check_strong_coassociativity, dual_annihilators, dual_multiplier_check, matrix_b_sample,
    Convention, DualElement, Duals, PairingActions, Side, Space,
};
use coprod::error::Error;
use coprod::gallery::{build, triangular_q, GalleryEntry, Params, FAMILIES};
use coprod::index::{Element, Index};
use coprod::multiplier::{finite_multiplier_algebra, Multiplier};
use coprod::scalar::Scalar;

const DEPTH: usize = 6;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn family(name: &str) -> GalleryEntry {
    build(name, &Params::default()).expect("gallery family")
}

fn need(what: &str, v: Result<Verdict, Error>) -> Result<Verdict, String> {
    match v {
        Ok(v) if v.holds() => Ok(v),
        Ok(v) => Err(format!("{what}: {v}")),
        Err(e) => Err(format!("{what}: {e}")),
    }
}

fn exact(what: &str, v: Result<Verdict, Error>) -> Result<(), String> {
    match need(what, v)? {
        Verdict::Holds => Ok(()),
        other => Err(format!("{what}: expected an exact verdict, got {other}")),
    }
}

fn profile(cp: &Coproduct, regular: &[Map], irregular: &[Map]) -> Result<BTreeMap<Map, MapStatus>, String> {
    let r = regularity_report(cp, DEPTH).map_err(|e| e.to_string())?;
    for m in regular {
        if !r.regular(*m) {
            return Err(format!("{}: {m} expected regular, got {:?}", cp.name(), r.status(*m)));
        }
    }
    for m in irregular {
        if !matches!(r.status(*m), MapStatus::NonRegular { .. }) {
            return Err(format!("{}: {m} expected non-regular, got {:?}", cp.name(), r.status(*m)));
        }
    }
    Ok(r.maps)
}

fn e(p: i64, q: i64) -> Index {
    Index::IntPair(p, q)
}

fn criterion_1() -> Outcome {
    for name in ["group:S3", "group:Z", "group:F2"] {
        let entry = family(name);
        let cp = &entry.coproduct;
        profile(cp, &Map::ALL, &[])?;
        let t1t2 = need(&format!("{name} T1/T2 coassociativity"), check_coassoc_t1t2(cp, DEPTH))?;
        need(&format!("{name} T3/T4 coassociativity"), check_coassoc_t3t4(cp, DEPTH))?;
        need(&format!("{name} single-map coassociativity"), check_coassoc_single_t1(cp, DEPTH))?;
        let ext = need(&format!("{name} extension coassociativity"), check_coassoc_extension(cp, &Idempotent::One, 3))?;
        if t1t2.holds() != ext.holds() {
            return Err(format!("{name}: extension and T1/T2 coassociativity disagree"));
        }
        let (eps, variant) = entry.counit.clone().ok_or(format!("{name}: no counit"))?;
        let c = check_counit(cp, &eps, variant, DEPTH).map_err(|e| e.to_string())?;
        if !c.laws.holds() || !c.homomorphism.holds() {
            return Err(format!("{name}: counit laws {}, homomorphism {}", c.laws, c.homomorphism));
        }
        let f = check_fullness(cp, DEPTH).map_err(|e| e.to_string())?;
        if !f.full() {
            return Err(format!("{name}: fullness {} / {}", f.left.verdict, f.right.verdict));
        }
        need(&format!("{name} non-degeneracy"), check_nondegenerate_coproduct(cp, DEPTH))?;
        if name == "group:S3" {
            exact("S3 T1/T2 coassociativity", check_coassoc_t1t2(cp, DEPTH))?;
            exact("S3 non-degeneracy", check_nondegenerate_coproduct(cp, DEPTH))?;
            if f.left.verdict != Verdict::Holds || f.right.verdict != Verdict::Holds {
                return Err("S3 fullness is not exact".into());
            }
        } else if matches!(check_coassoc_t1t2(cp, DEPTH), Ok(Verdict::Holds)) {
            return Err(format!("{name}: countable case reported as exact"));
        }
    }
    Ok("S3, Z, F2: regular, coassociative in all forms, counit, full, non-degenerate".into())
}

fn criterion_2() -> Outcome {
    let entry = family("matrix");
    let cp = &entry.coproduct;
    let maps = profile(cp, &[Map::T3, Map::T4], &[Map::T1, Map::T2])?;
    match &maps[&Map::T1] {
        MapStatus::NonRegular { x, y, .. } => {
            let (Index::IntPair(_, q), Index::IntPair(r, _)) = (x, y) else {
                return Err("T1 witness is not a pair of matrix units".into());
            };
            if q != r {
                return Err(format!("T1 witness e_pq⊗e_rs has q = {q} ≠ r = {r}"));
            }
        }
        other => return Err(format!("T1: {other:?}")),
    }
    let (eps, variant) = entry.counit.clone().ok_or("no counit")?;
    if variant != CounitVariant::T3T4 {
        return Err("counit is not stated in the T3/T4 form".into());
    }
    let c = check_counit(cp, &eps, variant, DEPTH).map_err(|e| e.to_string())?;
    if !c.laws.holds() {
        return Err(format!("counit laws: {}", c.laws));
    }
    let alg = cp.algebra();
    let lhs = eps.eval(&alg.product(&e(1, 2), &e(2, 1)));
    let rhs = eps.at(&e(1, 2)) * eps.at(&e(2, 1));
    if lhs != Scalar::one() || rhs != Scalar::zero() {
        return Err(format!("ε(e12e21) = {lhs}, ε(e12)ε(e21) = {rhs}"));
    }
    let d = Duals::new(cp, DEPTH).map_err(|e| e.to_string())?;
    let sample = d.sample(SEED);
    let v = check_strong_coassociativity(&d, Definition::T3T4, &sample);
    if !v.holds() {
        return Err(format!("strong coassociativity: {v}"));
    }
    Ok(format!("profile T3,T4 regular / T1,T2 not; ε(e12e21) = 1 ≠ 0; strong coassociativity on {} samples", sample.len()))
}

fn criterion_3() -> Outcome {
    let entry = family("matrix");
    let cp = &entry.coproduct;
    let alg = cp.algebra();
    let d = Duals::new(cp, DEPTH).map_err(|e| e.to_string())?;
    let labels: Vec<Index> = (1..=6).flat_map(|p| (1..=6).map(move |q| e(p, q))).collect();
    let f = |p: i64, q: i64| DualElement::coordinate(&alg, &e(p, q));
    let check_at: Vec<Index> = (1..=8).flat_map(|p| (1..=8).map(move |q| e(p, q))).collect();
    let mut products = 0;
    for rs in &labels {
        let Index::IntPair(r, s) = *rs else { unreachable!() };
        for rs2 in &labels {
            let Index::IntPair(r2, s2) = *rs2 else { unreachable!() };
            for conv in [Convention::Left, Convention::Right] {
                let p = d.product(&f(r, s), &f(r2, s2), conv).map_err(|e| e.to_string())?;
                for i in &check_at {
                    let want = if s == r2 && *i == e(r, s2) { Scalar::one() } else { Scalar::zero() };
                    if p.at(i) != want {
                        return Err(format!("(f{r}{s}·f{r2}{s2})({i}) = {} in {conv:?}", p.at(i)));
                    }
                }
                products += 1;
            }
        }
    }
    let (eps, _) = entry.counit.clone().ok_or("no counit")?;
    let eps = DualElement::new(eps);
    if !d.membership(&eps, Space::B).holds() {
        return Err(format!("ε ∉ B: {}", d.membership(&eps, Space::B)));
    }
    if !d.membership(&eps, Space::B0).fails() {
        return Err(format!("ε ∈ B₀ was not refuted: {}", d.membership(&eps, Space::B0)));
    }
    let sample = matrix_b_sample(SEED, 50);
    for w in &sample {
        if !d.membership(w, Space::B).holds() {
            return Err(format!("sampled {} ∉ B", w.label()));
        }
        for (x, y) in [(&eps, w), (w, &eps)] {
            let p = d.product(x, y, Convention::Left).map_err(|e| e.to_string())?;
            if let Some(i) = d.differ(&p, w) {
                return Err(format!("ε is not a unit for {} at {i}", w.label()));
            }
        }
    }
    let agree = check_products_agree(&d, &sample);
    if !agree.holds() {
        return Err(format!("product agreement: {agree}"));
    }
    let d5 = Duals::new(cp, 5).map_err(|e| e.to_string())?;
    let mc = dual_multiplier_check(&d5, &matrix_b_sample(SEED, 12), entry.counit.as_ref().map(|c| &c.0)).verdict();
    if !mc.holds() {
        return Err(format!("dual multiplier check: {mc}"));
    }
    let (by, on) = PairingActions::new(&d).check_unital(&d.sample(SEED), Space::B0);
    if !by.holds() || !on.holds() {
        return Err(format!("A◁B₀: {by}; B₀▷A: {on}"));
    }
    Ok(format!("{products} coordinate products, ε ∈ B \\ B₀ unit on 50 samples, products agree, M(B₀) = B, B₀ acts unitally"))
}

fn criterion_4() -> Outcome {
    let entry = family("trivial-right-unit");
    let cp = &entry.coproduct;
    profile(cp, &[Map::T1, Map::T3], &[Map::T2, Map::T4])?;
    need("K(ℕ) single-map coassociativity", check_coassoc_single_t1(cp, DEPTH))?;
    for variant in [CounitVariant::T1T2, CounitVariant::T3T4] {
        if let CounitSolution::Solution { .. } = solve_counit(cp, variant, DEPTH).map_err(|e| e.to_string())? {
            return Err(format!("K(ℕ): a {} counit was found", variant.key()));
        }
    }
    let d = Duals::new(cp, DEPTH).map_err(|e| e.to_string())?;
    let ann = dual_annihilators(&d, Convention::Left).nondegenerate();
    let Some(w) = ann.witness() else { return Err(format!("K(ℕ) dual product not degenerate: {ann}")) };
    let kn_witness = w.text.clone();

    let unital = family("trivial-right-unit:unital");
    let ucp = &unital.coproduct;
    let du = Duals::new(ucp, DEPTH).map_err(|e| e.to_string())?;
    let alg = ucp.algebra();
    let one: Element = alg.enumerate(3).into_iter().map(|i| (i, Scalar::one())).collect();
    let sample = du.sample(SEED);
    for w1 in &sample {
        for w2 in &sample {
            let p = du.product(w1, w2, Convention::Left).map_err(|e| e.to_string())?;
            for i in alg.enumerate(3) {
                if p.at(&i) != w1.at(&i) * w2.eval(&one) {
                    return Err(format!("(ω₁ω₂)({i}) ≠ ω₁({i})ω₂(1) for {}, {}", w1.label(), w2.label()));
                }
            }
        }
    }
    let ann = dual_annihilators(&du, Convention::Left).nondegenerate();
    let Some(uw) = ann.witness() else { return Err(format!("unital dual product not degenerate: {ann}")) };

    let split = family("tensor-split");
    profile(&split.coproduct, &[], &Map::ALL)?;
    need("tensor-split extension coassociativity", check_coassoc_extension(&split.coproduct, &Idempotent::One, 3))?;
    Ok(format!("K(ℕ) witness [{kn_witness}]; unital witness [{}]; split: all non-regular, extension coassociative", uw.text))
}

fn criterion_5() -> Outcome {
    let ex43 = family("sandwich:ex4_3");
    let cp = &ex43.coproduct;
    profile(cp, &[Map::T3, Map::T4], &[])?;
    if check_fullness(cp, DEPTH).map_err(|e| e.to_string())?.full() {
        return Err("ex4_3 reported full".into());
    }
    let d = Duals::new(cp, DEPTH).map_err(|e| e.to_string())?;
    let degenerate = [Convention::Left, Convention::Right]
        .into_iter()
        .find_map(|c| dual_annihilators(&d, c).nondegenerate().witness().map(|w| w.text.clone()))
        .ok_or("ex4_3 dual product not degenerate")?;

    let ex332 = family("sandwich:ex3_32");
    let cp = &ex332.coproduct;
    profile(cp, &Map::ALL, &[])?;
    let e = ex332.idempotent.clone().ok_or("ex3_32 has no E")?;
    for t in pair_basis(&*cp.algebra(), DEPTH) {
        let te = Element::basis(t);
        let once = e.act_left(cp, &te);
        if e.act_left(cp, &once) != once || e.act_right(cp, &e.act_right(cp, &te)) != e.act_right(cp, &te) {
            return Err("E² ≠ E for ex3_32".into());
        }
    }
    need("ex3_32 weak non-degeneracy", check_weak_nondegeneracy(cp, &e, DEPTH))?;
    need("ex3_32 extension coassociativity", check_coassoc_extension(cp, &e, 3))?;

    let qn = family("sandwich:qn");
    let maps = profile(&qn.coproduct, &[Map::T1, Map::T2, Map::T3], &[Map::T4])?;
    let MapStatus::NonRegular { x, .. } = &maps[&Map::T4] else { unreachable!() };
    let (_, leg) = x.split().ok_or("qn witness is not a tensor label")?;
    if *leg != Index::IntPair(1, 1) {
        return Err(format!("qn T4 witness has matrix leg {leg}, not e11"));
    }

    for name in ["sandwich:ex3_24", "sandwich:ex3_25"] {
        let entry = family(name);
        let cp = &entry.coproduct;
        need(&format!("{name} homomorphism"), check_homomorphism(cp, DEPTH))?;
        let t = Scalar::t();
        let r = MatrixUnits::infinite(if name.ends_with("24") { Pattern::Upper } else { Pattern::Full });
        for j in 1..=6 {
            for i in 1..=6 {
                if name.ends_with("24") && i > j {
                    continue;
                }
                let q = triangular_q(i, j, &t);
                if mul(&r, &q, &q) != q {
                    return Err(format!("{name}: q_({i},{j}) is not idempotent"));
                }
            }
        }
        profile(cp, &[Map::T1, Map::T3], &[Map::T2, Map::T4])?;
        let f = check_fullness(cp, DEPTH).map_err(|e| e.to_string())?;
        if !f.full() {
            return Err(format!("{name}: fullness {} / {}", f.left.verdict, f.right.verdict));
        }
    }
    Ok(format!("ex4_3 degenerate [{degenerate}]; ex3_32, qn, ex3_24, ex3_25 profiles match"))
}

fn criterion_6() -> Outcome {
    let mut checked = Vec::new();
    for name in FAMILIES {
        let entry = family(name);
        let cp = &entry.coproduct;
        let r = regularity_report(cp, DEPTH).map_err(|e| e.to_string())?;
        if !Map::ALL.iter().any(|m| r.regular(*m)) {
            continue;
        }
        if !check_homomorphism(cp, DEPTH).map(|v| v.holds()).unwrap_or(false) {
            continue;
        }
        if !check_nondegenerate_coproduct(cp, DEPTH).map(|v| v.holds()).unwrap_or(false) {
            continue;
        }
        need(&format!("{name}: A = A²"), check_idempotent_algebra(&*cp.algebra(), DEPTH))?;
        checked.push(name);
    }
    let s3 = family("group:S3");
    let cp = &s3.coproduct;
    exact("S3 T1 surjective", check_surjective(cp, Map::T1, DEPTH))?;
    exact("S3 T2 surjective", check_surjective(cp, Map::T2, DEPTH))?;
    exact("S3 non-degeneracy", check_nondegenerate_coproduct(cp, DEPTH))?;
    let alg = cp.algebra();
    let square: AlgebraRef = Arc::new(TensorAlgebra::square(&alg));
    let mut ext = extend_to_m(cp, Multiplier::identity(alg.clone()), None);
    exact("S3 Δ₁(1) = 1⊗1", extension_matches(&mut ext, &Multiplier::identity(square), DEPTH))?;

    let ex332 = family("sandwich:ex3_32");
    let cp = &ex332.coproduct;
    let e = ex332.idempotent.clone().ok_or("ex3_32 has no E")?;
    let mut ext = extend_to_m(cp, Multiplier::identity(cp.algebra()), Some(e.clone()));
    need("ex3_32 Δ₁(1) = E", extension_matches(&mut ext, &e.multiplier(cp), 3))?;
    Ok(format!("A = A² for {}; S3 T1, T2 onto; Δ₁(1) = 1⊗1 on S3 and E on ex3_32", checked.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut dims = Vec::new();
    for (alg, dim) in [
        (MatrixUnits::finite(Pattern::Full, 2), 4),
        (MatrixUnits::finite(Pattern::Diagonal, 3), 3),
        (MatrixUnits::finite(Pattern::Upper, 2), 3),
    ] {
        let a: AlgebraRef = Arc::new(alg);
        let m = finite_multiplier_algebra(&a).map_err(|e| e.to_string())?;
        if m.dim() != dim || !m.equals_embedding() {
            return Err(format!("{}: dim M(A) = {}, embedding onto: {}", a.name(), m.dim(), m.equals_embedding()));
        }
        if m.identity.is_zero() {
            return Err(format!("{}: no identity multiplier", a.name()));
        }
        dims.push(format!("{} ({dim})", a.name()));
    }
    let one = Scalar::one();
    let degenerate: AlgebraRef = Arc::new(
        FiniteAlgebra::new("span{e11,e12}", 2, &[(0, 0, 0, one.clone()), (0, 1, 1, one)])
            .and_then(|a| a.with_labels(vec!["e11".into(), "e12".into()]))
            .map_err(|e| e.to_string())?,
    );
    match finite_multiplier_algebra(&degenerate) {
        Err(Error::DegenerateProduct(w)) if w.starts_with("e12") => {
            Ok(format!("{}; span{{e11,e12}} rejected: {w}", dims.join(", ")))
        }
        Err(other) => Err(format!("degenerate input: unexpected error {other}")),
        Ok(_) => Err("degenerate input accepted".into()),
    }
}

/// Dense model of `K(S₃)`, written independently of the library.
mod oracle {
    pub type Perm = [u8; 3];

    pub fn perms() -> Vec<Perm> {
        let mut out = Vec::new();
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    if a != b && b != c && a != c {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// `(σ·τ)(x) = σ(τ(x))`
    pub fn compose(s: Perm, t: Perm) -> Perm {
        [s[t[0] as usize], s[t[1] as usize], s[t[2] as usize]]
    }

    pub struct Dense {
        pub g: Vec<Perm>,
        /// `delta[pair][a]`: coefficient of `δ_x⊗δ_y` in `Δ(δ_a)`, pair = 6x + y.
        pub delta: Vec<Vec<i64>>,
    }

    impl Dense {
        pub fn new() -> Self {
            let g = perms();
            let n = g.len();
            let mut delta = vec![vec![0i64; n]; n * n];
            for (x, &px) in g.iter().enumerate() {
                for (y, &py) in g.iter().enumerate() {
                    let a = g.iter().position(|&p| p == compose(px, py)).unwrap();
                    delta[x * n + y][a] = 1;
                }
            }
            Dense { g, delta }
        }

        pub fn n(&self) -> usize {
            self.g.len()
        }

        /// Pointwise product of functions on `G×G`.
        fn times(u: &[i64], v: &[i64]) -> Vec<i64> {
            u.iter().zip(v).map(|(a, b)| a * b).collect()
        }

        pub fn delta_of(&self, a: usize) -> Vec<i64> {
            self.delta.iter().map(|row| row[a]).collect()
        }

        pub fn simple(&self, x: Option<usize>, y: Option<usize>) -> Vec<i64> {
            let n = self.n();
            let mut out = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let l = x.map_or(1, |x| (x == i) as i64);
                    let r = y.map_or(1, |y| (y == j) as i64);
                    out[i * n + j] = l * r;
                }
            }
            out
        }

        /// Matrix of a canonical map, column `6u + v` holding the image of `δ_u⊗δ_v`.
        pub fn t_matrix(&self, m: u8) -> Vec<Vec<i64>> {
            let n = self.n();
            let mut cols = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    let col = match m {
                        1 => Self::times(&self.delta_of(u), &self.simple(None, Some(v))),
                        2 => Self::times(&self.simple(Some(u), None), &self.delta_of(v)),
                        3 => Self::times(&self.simple(None, Some(v)), &self.delta_of(u)),
                        _ => Self::times(&self.delta_of(v), &self.simple(Some(u), None)),
                    };
                    cols.push(col);
                }
            }
            cols
        }

        /// `(ω₁ω₂)(a) = (ω₁⊗ω₂)Δ(a)`: the transpose of `Δ` applied to `ω₁⊗ω₂`.
        pub fn dual_product(&self, w1: &[i64], w2: &[i64]) -> Vec<i64> {
            let n = self.n();
            (0..n).map(|a| (0..n * n).map(|k| w1[k / n] * w2[k % n] * self.delta[k][a]).sum()).collect()
        }

        /// `(ω⊗ι)Δ(a)` or `(ι⊗ω)Δ(a)` as a vector over `G`.
        pub fn slice(&self, w: &[i64], a: usize, left: bool) -> Vec<i64> {
            let n = self.n();
            let mut out = vec![0; n];
            for k in 0..n * n {
                let (x, y) = (k / n, k % n);
                if left {
                    out[y] += w[x] * self.delta[k][a];
                } else {
                    out[x] += w[y] * self.delta[k][a];
                }
            }
            out
        }
    }
}

fn criterion_8() -> Outcome {
    use coprod::index::Index as I;
    let dense = oracle::Dense::new();
    let n = dense.n();
    let label = |k: usize| I::Word(dense.g[k].iter().map(|&x| x as i8).collect());
    let labels: Vec<I> = (0..n).map(label).collect();
    let pair = |k: usize| I::pair(&labels[k / n], &labels[k % n]);
    let vec_of = |v: &[i64]| -> Element {
        v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (pair(k), Scalar::from_int(*c))).collect()
    };
    let entry = family("group:S3");
    let cp = &entry.coproduct;
    let alg = cp.algebra();
    let probe = probe_for(DEPTH);
    let mut agreed = 0usize;
    for (m, t) in Map::ALL.iter().zip(1u8..) {
        let cols = dense.t_matrix(t);
        for (k, col) in cols.iter().enumerate() {
            let (u, v) = (&labels[k / n], &labels[k % n]);
            let got = cp.t(*m, u, v, probe);
            if got != OneSided::Finite(vec_of(col)) {
                return Err(format!("{m}({u}⊗{v}) differs from the dense oracle"));
            }
            agreed += 1;
        }
    }
    for a in 0..n {
        let mult = cp.delta_multiplier(&labels[a]);
        let d = dense.delta_of(a);
        for k in 0..n * n {
            let t = Element::basis(pair(k));
            let want = vec_of(&oracle_times(&d, k));
            if mult.left(&t) != want || mult.right(&t) != want {
                return Err(format!("Δ({}) acting on {} differs from the dense oracle", labels[a], pair(k)));
            }
            agreed += 1;
        }
    }
    let d = Duals::new(cp, DEPTH).map_err(|e| e.to_string())?;
    let mut funcs: Vec<Vec<i64>> = (0..n).map(|k| (0..n).map(|j| (j == k) as i64).collect()).collect();
    funcs.push(vec![1, -2, 0, 3, 1, -1]);
    funcs.push(vec![2, 2, -1, 0, 0, 5]);
    let as_dual = |w: &[i64]| {
        let values: Element =
            w.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (labels[k].clone(), Scalar::from_int(*c))).collect();
        DualElement::new(Functional::table("ω", values, |_| 0))
    };
    let as_elem = |v: &[i64]| -> Element {
        v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (labels[k].clone(), Scalar::from_int(*c))).collect()
    };
    for w in &funcs {
        let dw = as_dual(w);
        for a in 0..n {
            for (side, left) in [(Side::Left, true), (Side::Right, false)] {
                let got = d.slice(side, &dw, &labels[a]).map_err(|e| e.to_string())?;
                if got != OneSided::Finite(as_elem(&dense.slice(w, a, left))) {
                    return Err(format!("{side:?} slice of {w:?} at {} differs from the dense oracle", labels[a]));
                }
                agreed += 1;
            }
        }
    }
    for w1 in &funcs {
        for w2 in &funcs {
            let want = dense.dual_product(w1, w2);
            for conv in [Convention::Left, Convention::Right] {
                let p = d.product(&as_dual(w1), &as_dual(w2), conv).map_err(|e| e.to_string())?;
                for (a, l) in labels.iter().enumerate() {
                    if p.at(l) != Scalar::from_int(want[a]) {
                        return Err(format!("{conv:?} product {w1:?}·{w2:?} at {l}: {} vs {}", p.at(l), want[a]));
                    }
                    agreed += 1;
                }
            }
        }
    }
    let _ = alg;
    Ok(format!("{agreed} values agree with the dense S3 oracle"))
}

/// `Δ(a)` times the basis tensor `k` in the pointwise algebra of `G×G`.
fn oracle_times(delta: &[i64], k: usize) -> Vec<i64> {
    delta.iter().enumerate().map(|(j, c)| if j == k { *c } else { 0 }).collect()
}

fn report_json(name: &str) -> Result<String, String> {
    let args = Args::try_parse_from(["coprod", "--family", name, "--format", "json", "--seed", &SEED.to_string()])
        .map_err(|e| e.to_string())?;
    execute(&args).map(|(_, text)| text).map_err(|e| format!("{name}: {e}"))
}

fn criterion_9() -> Outcome {
    let suite = || FAMILIES.iter().map(|f| report_json(f)).collect::<Result<Vec<String>, String>>();
    let (a, b) = thread::scope(|s| {
        let first = s.spawn(suite);
        let second = s.spawn(suite);
        (first.join().expect("suite"), second.join().expect("suite"))
    });
    let (a, b) = (a?, b?);
    for ((f, x), y) in FAMILIES.iter().zip(&a).zip(&b) {
        if x != y {
            return Err(format!("{f}: reports differ"));
        }
    }
    let bytes: usize = a.iter().map(String::len).sum();
    Ok(format!("{} reports, {bytes} bytes, identical across two runs", a.len()))
}

/// Stated for ex3_25 in the family table and refuted by computation.
fn known_red() -> Outcome {
    let entry = family("sandwich:ex3_25");
    match check_involution(&entry.coproduct, 3) {
        Ok(Verdict::FailsWithWitness(w)) => Ok(w.text),
        Ok(v) => Err(format!("involution check now gives {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 group family", criterion_1),
        ("2 matrix coproduct", criterion_2),
        ("3 matrix dual tier", criterion_3),
        ("4 trivial and split examples", criterion_4),
        ("5 sandwich families", criterion_5),
        ("6 structural cross-checks", criterion_6),
        ("7 finite multiplier solver", criterion_7),
        ("8 dense oracle equivalence", criterion_8),
        ("9 determinism", criterion_9),
    ];
    let results: Vec<(Outcome, f64)> = thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let out = f();
                    (out, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (Err("panicked".into()), 0.0)))
            .collect()
    });
    let mut failed = 0;
    for ((name, _), (out, secs)) in criteria.iter().zip(results) {
        match out {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {why}");
            }
        }
    }
    match known_red() {
        Ok(w) => println!("NOTE ex3_25 involution compatibility is stated but refuted: {w}"),
        Err(why) => println!("NOTE ex3_25 involution check changed: {why}"),
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
