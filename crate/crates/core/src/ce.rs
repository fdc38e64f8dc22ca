//! Chevalley-Eilenberg algebras and Sullivan presentations.
//!
//! For a finite non-negatively graded L-infinity algebra `L` with basis
//! `e_i`, `C*(L)` is the free graded-commutative algebra on generators
//! `s e_i` of cohomological degree `|e_i| + 1`. The differential is fixed by
//! requiring that `sum_i s e_i (x) e_i` be a Maurer-Cartan element of
//! `C*(L) (x) L`, which makes cdga maps `C*(L) -> A` the same thing as
//! Maurer-Cartan elements of `A (x) L`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{Element, GradedSpace};
use crate::linfty::LInftyAlgebra;
use crate::poly::{word_length, Monomial, Poly, PolyRing};
use crate::scalar::{self, Scalar};

/// A free graded-commutative algebra on positive-degree generators with a
/// differential.
#[derive(Debug, Clone, PartialEq)]
pub struct SullivanPresentation {
    ring: PolyRing,
    differential: Vec<Poly>,
}

impl SullivanPresentation {
    /// Checks generator degrees and the degree of every `d v`. Constant
    /// terms in a differential are rejected.
    pub fn new(ring: PolyRing, differential: Vec<Poly>) -> Result<Self> {
        if differential.len() != ring.len() {
            return Err(Error::LengthMismatch(format!(
                "{} generators but {} differentials",
                ring.len(),
                differential.len()
            )));
        }
        for (i, g) in ring.generators().iter().enumerate() {
            if g.degree < 1 {
                return Err(Error::MalformedSullivan(format!(
                    "generator `{}` has degree {}",
                    g.name, g.degree
                )));
            }
            let d = &differential[i];
            if d.terms().any(|(m, _)| word_length(m) == 0) {
                return Err(Error::MalformedSullivan(format!(
                    "d {} has a constant term",
                    g.name
                )));
            }
            match ring.degree(d)? {
                Some(k) if k != g.degree + 1 => {
                    return Err(Error::DegreeMismatch {
                        expected: g.degree + 1,
                        found: k,
                    })
                }
                _ => {}
            }
        }
        Ok(Self { ring, differential })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        self.ring.name(i)
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.ring.degree_of_gen(i)
    }

    pub fn d(&self, i: usize) -> &Poly {
        &self.differential[i]
    }

    pub fn differential(&self) -> &[Poly] {
        &self.differential
    }

    /// `d` extended to all polynomials.
    pub fn apply(&self, p: &Poly) -> Poly {
        self.ring.apply_derivation(p, &self.differential, 1)
    }

    /// Generators on which `d^2` does not vanish.
    pub fn d_squared_failures(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.apply(&self.differential[i]).is_zero())
            .collect()
    }

    /// Generators grouped into stages with `d V(k)` inside the subalgebra
    /// generated by earlier stages.
    pub fn stages(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut stages = Vec::new();
        while placed.iter().any(|p| !p) {
            let stage: Vec<usize> = (0..n)
                .filter(|&i| {
                    !placed[i]
                        && self.differential[i]
                            .terms()
                            .all(|(m, _)| m.iter().enumerate().all(|(g, &e)| e == 0 || placed[g]))
                })
                .collect();
            if stage.is_empty() {
                return Err(Error::MalformedSullivan(
                    "no nilpotence filtration exists".into(),
                ));
            }
            for &i in &stage {
                placed[i] = true;
            }
            stages.push(stage);
        }
        Ok(stages)
    }

    pub fn to_json(&self) -> SullivanJson {
        let generators = (0..self.len())
            .map(|i| GeneratorJson {
                name: self.name(i).to_string(),
                degree: self.degree(i),
            })
            .collect();
        let differential = (0..self.len())
            .map(|i| {
                let terms = self.differential[i]
                    .terms()
                    .rev()
                    .map(|(m, c)| TermJson {
                        coefficient: scalar::render(c),
                        monomial: m
                            .iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(g, &e)| (self.name(g).to_string(), e))
                            .collect(),
                    })
                    .collect();
                (self.name(i).to_string(), terms)
            })
            .collect();
        SullivanJson {
            generators,
            differential,
        }
    }
}

impl fmt::Display for SullivanPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.len())
            .map(|i| format!("{}:{}", self.name(i), self.degree(i)))
            .collect();
        write!(f, "Λ({})", gens.join(", "))?;
        for i in 0..self.len() {
            write!(
                f,
                "; d {} = {}",
                self.name(i),
                self.ring.render(&self.differential[i])
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub coefficient: String,
    pub monomial: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SullivanJson {
    pub generators: Vec<GeneratorJson>,
    pub differential: BTreeMap<String, Vec<TermJson>>,
}

/// Sign attached to the ordered tuple `e_J` when passing between brackets
/// and monomials: `(-1)^{sum_{p<q} |e_p| (|e_q| + 1)}`.
fn tuple_sign(degrees: &[i64]) -> bool {
    let mut negative = false;
    for p in 0..degrees.len() {
        for q in p + 1..degrees.len() {
            if (degrees[p] * (degrees[q] + 1)).rem_euclid(2) == 1 {
                negative = !negative;
            }
        }
    }
    negative
}

fn multiplicity_factorial(key: &[usize]) -> Scalar {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in key {
        *counts.entry(k).or_default() += 1;
    }
    counts.values().map(|&m| scalar::factorial(m)).product()
}

fn suspended_name(name: &str) -> String {
    format!("s{name}")
}

fn desuspended_name(name: &str) -> String {
    match name.strip_prefix('s') {
        Some(rest) if !rest.is_empty() => rest.to_string(),
        _ => name.to_string(),
    }
}

/// The Chevalley-Eilenberg algebra of a finite non-negatively graded
/// L-infinity algebra, with `d^2 = 0` verified on every generator.
pub fn ce_construct(l: &LInftyAlgebra) -> Result<SullivanPresentation> {
    if let Some(i) = (0..l.dim()).find(|&i| l.degree(i) < 0) {
        return Err(Error::NegativeDegree(format!(
            "`{}` has degree {}",
            l.name(i),
            l.degree(i)
        )));
    }
    let n = l.dim();
    let ring = PolyRing::new((0..n).map(|i| (suspended_name(l.name(i)), l.degree(i) + 1)))?;
    let mut differential = vec![Poly::zero(); n];
    for (r, key, value) in l.entries() {
        let mut m: Monomial = vec![0; n];
        for &k in key {
            m[k] += 1;
        }
        let factor = if r == 1 {
            -scalar::sign((l.degree(key[0]) + 1).rem_euclid(2) == 1)
        } else {
            let degrees: Vec<i64> = key.iter().map(|&k| l.degree(k)).collect();
            -scalar::sign(tuple_sign(&degrees)) / multiplicity_factorial(key)
        };
        for (i, c) in value.terms() {
            differential[i].add_term(m.clone(), c * &factor);
        }
    }
    let s = SullivanPresentation::new(ring, differential)?;
    let failures = s.d_squared_failures();
    if let Some(&i) = failures.first() {
        return Err(Error::DifferentialSquare(format!(
            "d^2 {} = {}",
            s.name(i),
            s.ring.render(&s.apply(s.d(i)))
        )));
    }
    Ok(s)
}

/// Reads an L-infinity structure off a Sullivan differential: the
/// word-length `r` part of `d` gives the `r`-ary bracket.
pub fn sullivan_to_linfty(s: &SullivanPresentation) -> Result<LInftyAlgebra> {
    let n = s.len();
    let mut space = GradedSpace::new();
    for i in 0..n {
        space.push(desuspended_name(s.name(i)), s.degree(i) - 1)?;
    }
    let degree = |i: usize| s.degree(i) - 1;
    let mut values: BTreeMap<Vec<usize>, Element> = BTreeMap::new();
    for i in 0..n {
        for (m, c) in s.d(i).terms() {
            let key = s.ring.word(m);
            let coeff = match key.len() {
                0 => {
                    return Err(Error::MalformedSullivan(format!(
                        "d {} has a constant term",
                        s.name(i)
                    )))
                }
                1 => -scalar::sign((degree(key[0]) + 1).rem_euclid(2) == 1) * c,
                _ => {
                    let degrees: Vec<i64> = key.iter().map(|&k| degree(k)).collect();
                    -scalar::sign(tuple_sign(&degrees)) * multiplicity_factorial(&key) * c
                }
            };
            values.entry(key).or_default().add_term(i, coeff);
        }
    }
    let mut l = LInftyAlgebra::new(space);
    for (key, v) in values {
        l.set_bracket(&key, v)?;
    }
    Ok(l)
}

/// True iff no differential has a linear term.
pub fn minimality_check(s: &SullivanPresentation) -> bool {
    s.differential
        .iter()
        .all(|d| d.terms().all(|(m, _)| word_length(m) != 1))
}

/// Removes contractible pairs: while some `d v = c u + N` with `N`
/// decomposable, passes to the quotient by the ideal `(v, d v)`, in which
/// `u = -N|_{v=0} / c`. The result is minimal and quasi-isomorphic to the
/// input.
pub fn minimal_model(s: &SullivanPresentation) -> Result<SullivanPresentation> {
    let mut cur = s.clone();
    loop {
        let Some((v, u, c)) = (0..cur.len()).find_map(|v| {
            cur.d(v)
                .terms()
                .rev()
                .find(|(m, _)| word_length(m) == 1)
                .map(|(m, c)| (v, m.iter().position(|&e| e == 1).unwrap(), c.clone()))
        }) else {
            return Ok(cur);
        };
        let kept: Vec<usize> = (0..cur.len()).filter(|&i| i != u && i != v).collect();
        let ring = PolyRing::new(kept.iter().map(|&i| (cur.name(i), cur.degree(i))))?;
        let mut images = vec![Poly::zero(); cur.len()];
        for (k, &i) in kept.iter().enumerate() {
            images[i] = ring.gen(k);
        }
        let mut rest = Poly::zero();
        for (m, coeff) in cur.d(v).terms() {
            if word_length(m) > 1 && m[v] == 0 {
                rest.add_term(m.clone(), coeff.clone());
            }
        }
        let u_image = cur
            .ring
            .substitute(&rest, &ring, &images)
            .scale(&(-Scalar::one() / c));
        images[u] = u_image;
        let differential = kept
            .iter()
            .map(|&i| cur.ring.substitute(cur.d(i), &ring, &images))
            .collect();
        cur = SullivanPresentation::new(ring, differential)?;
    }
}

/// Searches for nonzero scalars `l_i` such that `v_i -> l_i v'_i` is an
/// isomorphism from `a` to `b`, generators being matched by position.
pub fn diagonal_equivalence(
    a: &SullivanPresentation,
    b: &SullivanPresentation,
) -> Option<Vec<Scalar>> {
    let n = a.len();
    if b.len() != n || (0..n).any(|i| a.degree(i) != b.degree(i)) {
        return None;
    }
    // each term gives prod l^e = ratio, with e the monomial minus generator i
    let mut equations: Vec<(Vec<i64>, Scalar)> = Vec::new();
    for i in 0..n {
        let (da, db) = (a.d(i), b.d(i));
        let support: Vec<&Monomial> = da.terms().map(|(m, _)| m).collect();
        if support.len() != db.len() || support.iter().any(|m| db.coeff(m).is_zero()) {
            return None;
        }
        for (m, c) in da.terms() {
            let mut e: Vec<i64> = m.iter().map(|&x| x as i64).collect();
            e[i] -= 1;
            equations.push((e, db.coeff(m) / c));
        }
    }
    let mut known: Vec<Option<Scalar>> = vec![None; n];
    loop {
        let mut progress = false;
        for (e, ratio) in &equations {
            let unknown: Vec<usize> = (0..n)
                .filter(|&g| e[g] != 0 && known[g].is_none())
                .collect();
            if let [g] = unknown.as_slice() {
                let mut rhs = ratio.clone();
                for h in 0..n {
                    if h != *g && e[h] != 0 {
                        rhs /= pow(known[h].as_ref().unwrap(), e[h]);
                    }
                }
                known[*g] = Some(rational_root(&rhs, e[*g])?);
                progress = true;
            }
        }
        if !progress {
            match known.iter().position(Option::is_none) {
                Some(g) => known[g] = Some(Scalar::one()),
                None => break,
            }
        }
    }
    let lambda: Vec<Scalar> = known.into_iter().map(Option::unwrap).collect();
    for (e, ratio) in &equations {
        let lhs: Scalar = (0..n)
            .filter(|&g| e[g] != 0)
            .map(|g| pow(&lambda[g], e[g]))
            .product();
        if &lhs != ratio {
            return None;
        }
    }
    Some(lambda)
}

fn pow(x: &Scalar, e: i64) -> Scalar {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// A rational `x` with `x^e = r`, if one exists.
fn rational_root(r: &Scalar, e: i64) -> Option<Scalar> {
    if r.is_zero() {
        return None;
    }
    let r = if e < 0 { r.recip() } else { r.clone() };
    let k = e.unsigned_abs() as u32;
    if r.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let x = n.abs().nth_root(k);
        (num_traits::pow(x.clone(), k as usize) == n.abs()).then_some(x)
    };
    let x = Scalar::new(root(r.numer())?, root(r.denom())?);
    Some(if r.is_negative() { -x } else { x })
}
