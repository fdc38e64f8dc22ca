#![allow(clippy::needless_range_loop)]

mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use linfty_core::homalg::{ch_product, homology, ChainComplex};
use linfty_core::linfty::{curvature, deform, LInftyAlgebra};
use linfty_core::nerve::PolyForm;
use linfty_core::pipeline::{
    cdga_block, linf_algebra, linf_block, parse, parse_cdga, presentation,
};
use linfty_core::scalar::{int, ratio};
use linfty_core::{Element, GradedSpace};

use common::*;

/// `(exponents, dt mask, numerator)` triples.
fn form_terms(n: usize) -> impl Strategy<Value = Vec<(Vec<u32>, u32, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0u32..3, n), 0u32..(1 << n), -3i64..=3),
        0..4,
    )
}

fn build_form(n: usize, terms: &[(Vec<u32>, u32, i64)]) -> PolyForm {
    let mut out = PolyForm::zero(n);
    for (exps, mask, c) in terms {
        let mut f = PolyForm::constant(n, int(*c));
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                f = f.wedge(&PolyForm::coordinate(n, i + 1).unwrap()).unwrap();
            }
        }
        for i in 0..n {
            if mask & (1 << i) != 0 {
                f = f.wedge(&PolyForm::dt(n, i + 1).unwrap()).unwrap();
            }
        }
        out = &out + &f;
    }
    out
}

/// Terms of a single form degree `k`.
fn homogeneous(n: usize, k: usize, terms: &[(Vec<u32>, u32, i64)]) -> PolyForm {
    build_form(n, terms)
        .homogeneous_parts()
        .remove(&k)
        .unwrap_or_else(|| PolyForm::zero(n))
}

fn sized_form() -> impl Strategy<Value = (usize, Vec<(Vec<u32>, u32, i64)>)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), form_terms(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn faces_commute((n, t) in sized_form(), i in 0usize..5, j in 0usize..5) {
        prop_assume!(i < j && j <= n);
        let x = build_form(n, &t);
        let lhs = x.face(j).unwrap().face(i).unwrap();
        let rhs = x.face(i).unwrap().face(j - 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degeneracies_commute((n, t) in sized_form(), i in 0usize..5, j in 0usize..5) {
        prop_assume!(i <= j && j <= n);
        let x = build_form(n, &t);
        let lhs = x.degeneracy(j).unwrap().degeneracy(i).unwrap();
        let rhs = x.degeneracy(i).unwrap().degeneracy(j + 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn face_of_degeneracy((n, t) in sized_form(), i in 0usize..6, j in 0usize..5) {
        prop_assume!(j <= n && i <= n + 1);
        let x = build_form(n, &t);
        let lhs = x.degeneracy(j).unwrap().face(i).unwrap();
        let rhs = if i < j {
            x.face(i).unwrap().degeneracy(j - 1).unwrap()
        } else if i == j || i == j + 1 {
            x.clone()
        } else {
            x.face(i - 1).unwrap().degeneracy(j).unwrap()
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn structure_maps_respect_d_and_wedge((n, t) in sized_form(), u in form_terms(4), i in 0usize..5) {
        prop_assume!(i <= n);
        let x = build_form(n, &t);
        let y = build_form(n, &u.iter().map(|(e, m, c)| (e[..n].to_vec(), m & ((1 << n) - 1), *c)).collect::<Vec<_>>());
        prop_assert_eq!(x.d().face(i).unwrap(), x.face(i).unwrap().d());
        prop_assert_eq!(x.d().degeneracy(i).unwrap(), x.degeneracy(i).unwrap().d());
        let xy = x.wedge(&y).unwrap();
        prop_assert_eq!(xy.face(i).unwrap(), x.face(i).unwrap().wedge(&y.face(i).unwrap()).unwrap());
        prop_assert_eq!(
            xy.degeneracy(i).unwrap(),
            x.degeneracy(i).unwrap().wedge(&y.degeneracy(i).unwrap()).unwrap()
        );
    }

    #[test]
    fn d_squares_to_zero_and_is_a_derivation((n, t) in sized_form(), u in form_terms(4), k in 0usize..3) {
        let x = homogeneous(n, k, &t);
        let y = build_form(n, &u.iter().map(|(e, m, c)| (e[..n].to_vec(), m & ((1 << n) - 1), *c)).collect::<Vec<_>>());
        prop_assert!(x.d().d().is_zero());
        let lhs = x.wedge(&y).unwrap().d();
        let sign = if k % 2 == 1 { int(-1) } else { int(1) };
        let rhs = &x.d().wedge(&y).unwrap() + &x.wedge(&y.d()).unwrap().scale(&sign);
        prop_assert_eq!(lhs, rhs);
    }
}

fn lie_element(coeffs: &[(i64, i64)]) -> Element {
    Element::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &(p, q))| (i, ratio(p, q))),
    )
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn campbell_hausdorff_is_a_group(a in coeffs(5), b in coeffs(5), c in coeffs(5)) {
        let g = free_class3();
        let (a, b, c) = (lie_element(&a), lie_element(&b), lie_element(&c));
        let ab_c = ch_product(&g, &ch_product(&g, &a, &b).unwrap(), &c).unwrap();
        let a_bc = ch_product(&g, &a, &ch_product(&g, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(ch_product(&g, &a, &Element::zero()).unwrap(), a.clone());
        prop_assert_eq!(ch_product(&g, &Element::zero(), &a).unwrap(), a.clone());
        prop_assert!(ch_product(&g, &a, &a.scale(&int(-1))).unwrap().is_zero());
    }

    #[test]
    fn campbell_hausdorff_matches_exp_log(a in coeffs(5), b in coeffs(5)) {
        let g = free_class3();
        let (a, b) = (lie_element(&a), lie_element(&b));
        prop_assert_eq!(ch_product(&g, &a, &b).unwrap(), ch_oracle(&a, &b));
    }
}

/// A complex built as a direct sum of `free` cycles and `pairs` acyclic
/// pairs `x -> y` per degree, then conjugated by a random unipotent
/// change of basis in each degree.
fn disguised_complex(seed: u64, shape: &[(usize, usize)]) -> (LInftyAlgebra, Vec<(i64, usize)>) {
    let mut rng = StdRng::seed_from_u64(seed);
    // degree k (from -2) holds shape[k].0 cycles and the sources of shape[k].1 pairs
    // whose targets sit in degree k-1
    let mut names: Vec<(String, i64)> = Vec::new();
    let mut std_d: Vec<(usize, usize)> = Vec::new();
    let mut expected = Vec::new();
    for (k, &(free, pairs)) in shape.iter().enumerate() {
        let deg = k as i64 - 2;
        expected.push((deg, free));
        for f in 0..free {
            names.push((format!("z{k}_{f}"), deg));
        }
        for p in 0..pairs {
            let src = names.len();
            names.push((format!("x{k}_{p}"), deg));
            names.push((format!("y{k}_{p}"), deg - 1));
            std_d.push((src, src + 1));
        }
    }
    let space = GradedSpace::from_basis(names.clone()).unwrap();
    let dim = space.dim();
    // change of basis g, block unipotent within each degree
    let mut g: Vec<Element> = (0..dim).map(Element::basis).collect();
    let mut g_inv = g.clone();
    for _ in 0..3 * dim {
        let i = rand::Rng::gen_range(&mut rng, 0..dim);
        let j = rand::Rng::gen_range(&mut rng, 0..dim);
        if i == j || names[i].1 != names[j].1 {
            continue;
        }
        let c = small_rational(&mut rng);
        // g <- g (1 + c E_ji): column i gains c times column j
        let gj = g[j].clone();
        g[i].add_scaled(&gj, &c);
        // g_inv <- (1 - c E_ji) g_inv: row j loses c times row i
        for col in g_inv.iter_mut() {
            let v = col.coeff(i);
            if !v.is_zero() {
                col.add_term(j, -(&c * v));
            }
        }
    }
    // d = g d_std g^{-1}
    let apply_std = |e: &Element| {
        let mut out = Element::zero();
        for (s, t) in &std_d {
            out.add_scaled(&Element::basis(*t), &e.coeff(*s));
        }
        out
    };
    let apply = |m: &[Element], e: &Element| {
        let mut out = Element::zero();
        for (i, c) in e.terms() {
            out.add_scaled(&m[i], c);
        }
        out
    };
    let mut l = LInftyAlgebra::new(space);
    for b in 0..dim {
        let v = apply(&g, &apply_std(&g_inv[b]));
        if !v.is_zero() {
            l.set_bracket(&[b], v).unwrap();
        }
    }
    (l, expected)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn homology_matches_dense_oracle(seed in any::<u64>(), shape in prop::collection::vec((0usize..3, 0usize..3), 1..5)) {
        let (l, expected) = disguised_complex(seed, &shape);
        let h = homology(&ChainComplex::from_linfty(&l).unwrap());
        let oracle = dense_homology(&l);
        prop_assert_eq!(h.dims(), oracle.clone());
        for (deg, free) in expected {
            prop_assert_eq!(oracle.get(&deg).copied().unwrap_or(0), free);
        }
        for (n, reps) in h.dims().keys().map(|&n| (n, h.representatives(n))) {
            for r in reps {
                prop_assert!(l.delta(r).is_zero(), "representative in degree {} is not a cycle", n);
            }
        }
    }

    #[test]
    fn deformation_translates_curvature(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (l, tau) = random_nilpotent(&mut rng, p, q);
        prop_assert!(curvature(&l, &tau).unwrap().is_zero());
        let sigma = random_element(&mut rng, &(0..p).collect::<Vec<_>>());
        let other = random_element(&mut rng, &(0..p).collect::<Vec<_>>());
        for t in [&tau, &other] {
            let mut sum = sigma.clone();
            sum.add_scaled(t, &int(1));
            // the deformed brackets carry no arity-zero term, so curv(t) is added back
            let mut lhs = curvature(&deform(&l, t).unwrap(), &sigma).unwrap();
            lhs.add_scaled(&curvature(&l, t).unwrap(), &int(1));
            prop_assert_eq!(lhs, curvature(&l, &sum).unwrap());
        }
    }

    #[test]
    fn linf_blocks_round_trip(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (l, _) = random_nilpotent(&mut rng, p, q);
        let text = linf_block("R", &l);
        let spec = parse(&text).unwrap();
        let back = linf_algebra(&spec.linf).unwrap();
        let nonzero = |g: &LInftyAlgebra| -> Vec<(Vec<usize>, Element)> {
            g.entries().filter(|(_, _, v)| !v.is_zero()).map(|(_, k, v)| (k.clone(), v.clone())).collect()
        };
        prop_assert_eq!(back.space(), l.space());
        prop_assert_eq!(nonzero(&back), nonzero(&l));
    }

    #[test]
    fn cdga_blocks_round_trip(degs in prop::collection::vec(1i64..4, 1..3), powers in prop::collection::vec(2u32..4, 1..3)) {
        let mut text = String::from("algebra cdga T {");
        for (i, d) in degs.iter().enumerate() {
            text.push_str(&format!(" gen g{i} : {};", 2 * d));
        }
        for (i, k) in powers.iter().enumerate().take(degs.len()) {
            text.push_str(&format!(" rel g{i}^{k};"));
        }
        text.push_str(" }");
        let p = presentation(&parse_cdga(&text).unwrap()).unwrap();
        let again = presentation(&parse_cdga(&cdga_block("T", &p)).unwrap()).unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn parser_never_panics(s in "\\PC{0,80}") {
        let _ = parse(&s);
        let _ = parse_cdga(&s);
    }

    #[test]
    fn parser_survives_token_soup(tokens in prop::collection::vec(
        prop::sample::select(vec![
            "algebra", "cdga", "linf", "gen", "rel", "bracket", "mc", "path", "cap", "d",
            "{", "}", "[", "]", "(", ")", ";", ":", ",", "=", "+", "-", "*", "^", "/",
            "x", "y", "1", "2", "-1", "1/2", "t0", "dt1", "#", "\n",
        ]),
        0..40,
    )) {
        let text = tokens.join(" ");
        if let Err(e) = parse(&text) {
            prop_assert!(e.pos.line >= 1 && e.pos.column >= 1, "{}", e);
        }
    }
}
