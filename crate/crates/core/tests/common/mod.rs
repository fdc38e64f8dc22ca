//! Independent oracles shared by the integration suites.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use linfty_core::cdga::{build_quotient, Presentation};
use linfty_core::linfty::LInftyAlgebra;
use linfty_core::scalar::{int, ratio};
use linfty_core::{Element, GradedSpace, Scalar};

/// Rank by Gauss-Jordan elimination on a dense copy.
pub fn dense_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let v = &m[rank][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology dimensions of `(L, l_1)` from the full matrix of `l_1`.
pub fn dense_homology(l: &LInftyAlgebra) -> BTreeMap<i64, usize> {
    let n = l.dim();
    let columns: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            let d = l.differential(j);
            (0..n).map(|i| d.coeff(i)).collect()
        })
        .collect();
    let rank_from = |deg: i64| -> usize {
        let rows: Vec<Vec<Scalar>> = (0..n)
            .filter(|&j| l.degree(j) == deg)
            .map(|j| columns[j].clone())
            .collect();
        dense_rank(&rows)
    };
    let mut degrees: Vec<i64> = (0..n).map(|i| l.degree(i)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = BTreeMap::new();
    for d in degrees {
        let dim = (0..n).filter(|&i| l.degree(i) == d).count();
        let h = dim - rank_from(d) - rank_from(d + 1);
        if h > 0 {
            out.insert(d, h);
        }
    }
    out
}

/// Words in two letters up to a fixed length, as a truncated free
/// associative algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Assoc {
    pub depth: usize,
    pub terms: BTreeMap<Vec<u8>, Scalar>,
}

impl Assoc {
    pub fn zero(depth: usize) -> Self {
        Self {
            depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(depth: usize, w: &[u8], c: Scalar) -> Self {
        let mut a = Self::zero(depth);
        a.add(w.to_vec(), c);
        a
    }

    fn add(&mut self, w: Vec<u8>, c: Scalar) {
        if w.len() > self.depth || c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn plus(&self, o: &Self, c: &Scalar) -> Self {
        let mut out = self.clone();
        for (w, v) in &o.terms {
            out.add(w.clone(), v * c);
        }
        out
    }

    pub fn times(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.depth);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = a.clone();
                w.extend(b);
                out.add(w, x * y);
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.times(o).plus(&o.times(self), &int(-1))
    }

    /// `exp(a)` for `a` without constant term.
    pub fn exp(&self) -> Self {
        let mut out = Self::word(self.depth, &[], Scalar::one());
        let mut power = out.clone();
        for k in 1..=self.depth {
            power = power.times(self);
            out = out.plus(&power, &(Scalar::one() / factorial(k)));
        }
        out
    }

    /// `log(a)` for `a` with constant term one.
    pub fn log(&self) -> Self {
        let z = self.plus(&Self::word(self.depth, &[], Scalar::one()), &int(-1));
        let mut out = Self::zero(self.depth);
        let mut power = Self::word(self.depth, &[], Scalar::one());
        for k in 1..=self.depth {
            power = power.times(&z);
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            out = out.plus(&power, &(sign / int(k as i64)));
        }
        out
    }
}

fn factorial(k: usize) -> Scalar {
    (1..=k as i64).map(int).product()
}

/// The free nilpotent Lie algebra of class 3 on `X, Y`, with basis
/// `X, Y, U = [X,Y], V = [X,U], W = [Y,U]`.
pub fn free_class3() -> LInftyAlgebra {
    let space =
        GradedSpace::from_basis([("X", 0), ("Y", 0), ("U", 0), ("V", 0), ("W", 0)]).unwrap();
    let mut l = LInftyAlgebra::new(space);
    l.set_bracket(&[0, 1], Element::basis(2)).unwrap();
    l.set_bracket(&[0, 2], Element::basis(3)).unwrap();
    l.set_bracket(&[1, 2], Element::basis(4)).unwrap();
    l
}

/// The embedding of `free_class3` into the truncated associative algebra.
pub fn class3_images() -> Vec<Assoc> {
    let x = Assoc::word(3, &[0], Scalar::one());
    let y = Assoc::word(3, &[1], Scalar::one());
    let u = x.commutator(&y);
    let v = x.commutator(&u);
    let w = y.commutator(&u);
    vec![x, y, u, v, w]
}

pub fn to_assoc(e: &Element) -> Assoc {
    let images = class3_images();
    let mut out = Assoc::zero(3);
    for (i, c) in e.terms() {
        out = out.plus(&images[i], c);
    }
    out
}

/// Reads Lie coordinates off the words `0`, `1`, `01`, `001`, `110`, then
/// confirms the reconstruction.
pub fn from_assoc(a: &Assoc) -> Option<Element> {
    let c = |w: &[u8]| a.terms.get(w).cloned().unwrap_or_else(Scalar::zero);
    let e = Element::from_terms([
        (0, c(&[0])),
        (1, c(&[1])),
        (2, c(&[0, 1])),
        (3, c(&[0, 0, 1])),
        (4, -c(&[1, 1, 0])),
    ]);
    (to_assoc(&e) == *a).then_some(e)
}

/// `log(exp(a) exp(b))` computed in the truncated free associative algebra.
pub fn ch_oracle(a: &Element, b: &Element) -> Element {
    let p = to_assoc(a).exp().times(&to_assoc(b).exp()).log();
    from_assoc(&p).expect("the product is a Lie element")
}

pub fn heisenberg() -> LInftyAlgebra {
    let space = GradedSpace::from_basis([("X", 0), ("Y", 0), ("Z", 0)]).unwrap();
    let mut l = LInftyAlgebra::new(space);
    l.set_bracket(&[0, 1], Element::basis(2)).unwrap();
    l
}

pub fn sl2() -> LInftyAlgebra {
    let space = GradedSpace::from_basis([("e", 0), ("f", 0), ("h", 0)]).unwrap();
    let mut l = LInftyAlgebra::new(space);
    l.set_bracket(&[2, 0], Element::term(0, int(2))).unwrap();
    l.set_bracket(&[2, 1], Element::term(1, int(-2))).unwrap();
    l.set_bracket(&[0, 1], Element::basis(2)).unwrap();
    l
}

pub fn small_rational(rng: &mut StdRng) -> Scalar {
    ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn random_element(rng: &mut StdRng, support: &[usize]) -> Element {
    Element::from_terms(support.iter().map(|&i| (i, small_rational(rng))))
}

/// A random L-infinity algebra on `a_1..a_p` in degree -1 and `b_1..b_q`
/// in degree -2 with random `l_1, l_2, l_3` from the `a`s to the `b`s, and
/// `l_1(a_1)` solved for so that the returned `tau` is Maurer-Cartan.
/// All higher identities vanish for degree reasons, and every bracket
/// lands in the `b`s, so the algebra is nilpotent.
pub fn random_nilpotent(rng: &mut StdRng, p: usize, q: usize) -> (LInftyAlgebra, Element) {
    let mut basis: Vec<(String, i64)> = (1..=p).map(|i| (format!("a{i}"), -1)).collect();
    basis.extend((1..=q).map(|k| (format!("b{k}"), -2)));
    let space = GradedSpace::from_basis(basis).unwrap();
    let bs: Vec<usize> = (p..p + q).collect();
    let mut tau = Element::zero();
    while tau.coeff(0).is_zero() {
        tau = random_element(rng, &(0..p).collect::<Vec<_>>());
    }
    let t: Vec<Scalar> = (0..p).map(|i| tau.coeff(i)).collect();
    // brackets of odd elements are symmetric, so summing over all ordered
    // tuples amounts to multinomial weights on the sorted keys
    let mut l = LInftyAlgebra::new(space);
    let mut rest = Element::zero();
    for i in 0..p {
        for j in i..p {
            let v = random_element(rng, &bs);
            let w = if i == j { int(1) } else { int(2) };
            rest.add_scaled(&v, &(ratio(1, 2) * w * &t[i] * &t[j]));
            l.set_bracket(&[i, j], v).unwrap();
            for k in j..p {
                let v = random_element(rng, &bs);
                let w = match (i == j, j == k) {
                    (true, true) => int(1),
                    (false, false) => int(6),
                    _ => int(3),
                };
                rest.add_scaled(&v, &(ratio(1, 6) * w * &t[i] * &t[j] * &t[k]));
                l.set_bracket(&[i, j, k], v).unwrap();
            }
        }
    }
    for i in 1..p {
        let v = random_element(rng, &bs);
        rest.add_scaled(&v, &t[i]);
        l.set_bracket(&[i], v).unwrap();
    }
    l.set_bracket(&[0], rest.scale(&(-Scalar::one() / &t[0])))
        .unwrap();
    (l, tau)
}

/// Derivations of cohomological degree `d` of the presented (even)
/// algebra, counted as linear endomorphisms `D` of the quotient satisfying
/// `D(ab) = D(a) b + a D(b)` on every pair of basis elements.
pub fn derivation_count(p: &Presentation, d: i64) -> usize {
    let a = build_quotient(p).unwrap();
    let n = a.dim();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|b| (0..n).map(move |c| (b, c)))
        .filter(|&(b, c)| a.cohdeg(c) == a.cohdeg(b) + d)
        .collect();
    if unknowns.is_empty() {
        return 0;
    }
    let col = |b: usize, c: usize| unknowns.iter().position(|&u| u == (b, c));
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let xy = a.product(x, y).unwrap();
            // D(xy) - D(x) y - x D(y), coefficient on each target basis vector
            let mut eqs = vec![vec![Scalar::zero(); unknowns.len()]; n];
            for (k, c) in xy.terms() {
                for t in 0..n {
                    if let Some(j) = col(k, t) {
                        eqs[t][j] += c;
                    }
                }
            }
            for s in 0..n {
                if let Some(j) = col(x, s) {
                    for (t, c) in a.product(s, y).unwrap().terms() {
                        eqs[t][j] -= c;
                    }
                }
                if let Some(j) = col(y, s) {
                    for (t, c) in a.product(x, s).unwrap().terms() {
                        eqs[t][j] -= c;
                    }
                }
            }
            rows.extend(eqs.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())));
        }
    }
    unknowns.len() - dense_rank(&rows)
}
