//! Free graded-commutative polynomial algebras on named generators.
//!
//! Generators carry cohomological degrees. A monomial is an exponent vector
//! in generator order; odd generators appear with exponent at most one and
//! are ordered by generator index, which fixes the sign of every monomial.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }
}

/// Word length of a monomial.
pub fn word_length(m: &Monomial) -> u32 {
    m.iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyRing {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut ring = Self::default();
        for (name, degree) in gens {
            let name = name.into();
            if ring.index.contains_key(&name) {
                return Err(Error::DuplicateName(name));
            }
            ring.index.insert(name.clone(), ring.gens.len());
            ring.gens.push(Generator { name, degree });
        }
        Ok(ring)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degree_of_gen(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    fn is_odd(&self, i: usize) -> bool {
        self.gens[i].degree.rem_euclid(2) == 1
    }

    pub fn one(&self) -> Poly {
        Poly::monomial(vec![0; self.len()], Scalar::one())
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        Poly::monomial(vec![0; self.len()], c)
    }

    pub fn gen(&self, i: usize) -> Poly {
        let mut m = vec![0; self.len()];
        m[i] = 1;
        Poly::monomial(m, Scalar::one())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.iter()
            .zip(&self.gens)
            .map(|(&e, g)| e as i64 * g.degree)
            .sum()
    }

    /// Degree of a homogeneous polynomial; `None` for zero.
    pub fn degree(&self, p: &Poly) -> Result<Option<i64>> {
        let mut deg = None;
        for m in p.terms.keys() {
            let d = self.monomial_degree(m);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::Inhomogeneous(self.render(p)));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Product of two monomials with its Koszul sign, or `None` if an odd
    /// generator would be squared.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut negative = false;
        let mut odd_after = 0u32;
        // walk generators from the top so `odd_after` counts odd factors of
        // `a` with larger index than the current one
        for i in (0..self.len()).rev() {
            if self.is_odd(i) {
                if a[i] + b[i] > 1 {
                    return None;
                }
                if b[i] == 1 && odd_after % 2 == 1 {
                    negative = !negative;
                }
                odd_after += a[i];
            }
        }
        let m = a.iter().zip(b).map(|(x, y)| x + y).collect();
        Some((m, negative))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((m, neg)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &Poly, k: u32) -> Poly {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a);
        }
        out
    }

    /// The generators of a monomial as an ordered word.
    pub fn word(&self, m: &Monomial) -> Vec<usize> {
        let mut w = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                w.push(i);
            }
        }
        w
    }

    /// Applies the derivation of cohomological degree `degree` determined by
    /// its values on generators.
    pub fn apply_derivation(&self, p: &Poly, images: &[Poly], degree: i64) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            let word = self.word(m);
            for k in 0..word.len() {
                let prefix_deg: i64 = word[..k].iter().map(|&g| self.degree_of_gen(g)).sum();
                let mut prefix = vec![0; self.len()];
                for &g in &word[..k] {
                    prefix[g] += 1;
                }
                let mut suffix = vec![0; self.len()];
                for &g in &word[k + 1..] {
                    suffix[g] += 1;
                }
                let term = self.mul(
                    &self.mul(&Poly::monomial(prefix, Scalar::one()), &images[word[k]]),
                    &Poly::monomial(suffix, Scalar::one()),
                );
                let sign = (degree * prefix_deg).rem_euclid(2) == 1;
                out.add_scaled(&term, &(scalar::sign(sign) * c));
            }
        }
        out
    }

    /// Partial derivative with respect to an even generator.
    pub fn partial(&self, p: &Poly, i: usize) -> Poly {
        assert!(!self.is_odd(i), "partial derivative in an odd variable");
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            if m[i] > 0 {
                let mut m2 = m.clone();
                m2[i] -= 1;
                out.add_term(m2, c * Scalar::from_integer(m[i].into()));
            }
        }
        out
    }

    /// Algebra map sending generator `i` to `images[i]`. The images must
    /// have the degrees of the generators they replace.
    pub fn substitute(&self, p: &Poly, target: &PolyRing, images: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            let mut acc = target.one();
            for g in self.word(m) {
                acc = target.mul(&acc, &images[g]);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// All monomials of the given degree. Requires every generator to have
    /// positive degree.
    pub fn monomials_in_degree(&self, degree: i64) -> Result<Vec<Monomial>> {
        if let Some(g) = self.gens.iter().find(|g| g.degree <= 0) {
            return Err(Error::Invalid(format!(
                "generator `{}` has non-positive degree {}",
                g.name, g.degree
            )));
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.len()];
        self.fill(0, degree, &mut cur, &mut out);
        out.sort();
        Ok(out)
    }

    fn fill(&self, i: usize, remaining: i64, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == self.len() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = self.gens[i].degree;
        let max = if self.is_odd(i) { 1 } else { u32::MAX };
        let mut e = 0u32;
        while e <= max && (e as i64) * d <= remaining {
            cur[i] = e;
            self.fill(i + 1, remaining - e as i64 * d, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.name(i).to_string()
                } else {
                    format!("{}^{}", self.name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn render(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms.iter().rev().enumerate() {
            let negative = scalar::is_negative(c);
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = self.render_monomial(m);
            if mono == "1" {
                out.push_str(&scalar::render(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", scalar::render(&abs), mono));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ring() -> PolyRing {
        PolyRing::new([("x", 2), ("y", 3), ("z", 5)]).unwrap()
    }

    #[test]
    fn odd_generators_anticommute() {
        let r = ring();
        let (y, z) = (r.gen(1), r.gen(2));
        assert_eq!(r.mul(&y, &z), r.mul(&z, &y).scale(&int(-1)));
        assert!(r.mul(&y, &y).is_zero());
        assert_eq!(r.mul(&r.gen(0), &y), r.mul(&y, &r.gen(0)));
    }

    #[test]
    fn associativity_with_signs() {
        let r = ring();
        let a = r.gen(2);
        let b = r.mul(&r.gen(0), &r.gen(1));
        let c = r.add_gen_power(0, 2);
        assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
    }

    impl PolyRing {
        fn add_gen_power(&self, i: usize, k: u32) -> Poly {
            self.pow(&self.gen(i), k)
        }
    }

    #[test]
    fn monomial_enumeration() {
        let r = ring();
        // degree 8: x^4, x*y... y odd so x^4, x^? ... x*y*? no; y*z = 8, x^4 = 8
        let ms = r.monomials_in_degree(8).unwrap();
        let rendered: Vec<String> = ms.iter().map(|m| r.render_monomial(m)).collect();
        assert_eq!(rendered, vec!["y*z", "x^4"]);
    }

    #[test]
    fn leibniz() {
        let r = PolyRing::new([("x", 2), ("y", 5)]).unwrap();
        // d y = x^3, d x = 0
        let images = vec![Poly::zero(), r.pow(&r.gen(0), 3)];
        let xy = r.mul(&r.gen(0), &r.gen(1));
        let d = r.apply_derivation(&xy, &images, 1);
        assert_eq!(d, r.pow(&r.gen(0), 4));
        assert_eq!(r.render(&d), "x^4");
    }

    #[test]
    fn partials() {
        let r = PolyRing::new([("a", 2), ("b", 2)]).unwrap();
        let f = r.mul(&r.pow(&r.gen(0), 2), &r.gen(1));
        assert_eq!(r.partial(&f, 0), r.mul(&r.gen(0), &r.gen(1)).scale(&int(2)));
    }
}
