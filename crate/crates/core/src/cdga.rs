//! Finite-dimensional commutative differential graded algebras.
//!
//! Degrees are cohomological at the interface and stored negated in the
//! underlying [`GradedSpace`]. Quotients of free graded-commutative algebras
//! are built degree by degree: the ideal's graded piece is spanned by
//! monomial multiples of the relations and reduced exactly, and the
//! non-pivot monomials form the normal-form basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::graded::{Element, GradedSpace};
use crate::linalg;
use crate::poly::{Monomial, Poly, PolyRing};
use crate::scalar::{self, Scalar};
use num_traits::{One, Zero};

/// Generators, relations, differential and degree cap of a finitely
/// presented graded-commutative algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    pub ring: PolyRing,
    pub relations: Vec<Poly>,
    /// `d` of each generator; zero when absent.
    pub differential: Vec<Poly>,
    pub cap: i64,
}

impl Presentation {
    pub fn new<S: Into<String>>(
        gens: impl IntoIterator<Item = (S, i64)>,
        cap: i64,
    ) -> Result<Self> {
        let ring = PolyRing::new(gens)?;
        let n = ring.len();
        Ok(Self {
            ring,
            relations: Vec::new(),
            differential: vec![Poly::zero(); n],
            cap,
        })
    }

    pub fn relation(mut self, p: Poly) -> Self {
        self.relations.push(p);
        self
    }

    pub fn with_differential(mut self, gen: usize, p: Poly) -> Self {
        self.differential[gen] = p;
        self
    }

    /// `Q[x]/(x^{n+1})` with `|x| = 2`, the cohomology of `CP^n`.
    pub fn truncated_polynomial(name: &str, degree: i64, n: u32) -> Result<Self> {
        let p = Self::new([(name, degree)], degree * (n as i64 + 1))?;
        let rel = p.ring.pow(&p.ring.gen(0), n + 1);
        Ok(p.relation(rel))
    }

    pub fn has_odd_generators(&self) -> bool {
        self.ring
            .generators()
            .iter()
            .any(|g| g.degree.rem_euclid(2) == 1)
    }
}

#[derive(Debug, Clone)]
struct Piece {
    /// Columns of the free piece, largest monomial first.
    monomials: Vec<Monomial>,
    /// Reduced row echelon basis of the ideal's piece.
    rref: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    /// Global algebra index of each non-pivot column (degree within cap).
    basis: Vec<(usize, Option<usize>)>,
}

#[derive(Debug, Clone)]
struct Quotient {
    ring: PolyRing,
    cap: i64,
    pieces: BTreeMap<i64, Piece>,
}

impl Quotient {
    fn reduce_piece(&self, degree: i64, p: &Poly) -> Result<Vec<(Option<usize>, Scalar)>> {
        let piece = self.pieces.get(&degree).ok_or(Error::CapExceeded {
            cap: self.cap,
            degree,
        })?;
        let mut v = vec![Scalar::zero(); piece.monomials.len()];
        for (m, c) in p.terms() {
            let col = piece
                .monomials
                .iter()
                .position(|x| x == m)
                .expect("monomial of the right degree");
            v[col] += c;
        }
        for (row, &pc) in piece.rref.iter().zip(&piece.pivots) {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        Ok(piece
            .basis
            .iter()
            .filter(|(col, _)| !v[*col].is_zero())
            .map(|(col, idx)| (*idx, v[*col].clone()))
            .collect())
    }

    /// Normal form of a polynomial as an algebra element.
    fn reduce(&self, p: &Poly) -> Result<Element> {
        let mut by_degree: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in p.terms() {
            by_degree
                .entry(self.ring.monomial_degree(m))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        let mut out = Element::zero();
        for (deg, part) in by_degree {
            for (idx, c) in self.reduce_piece(deg, &part)? {
                match idx {
                    Some(i) => out.add_term(i, c),
                    None => return Err(Error::Overflow(self.ring.render(&part))),
                }
            }
        }
        Ok(out)
    }
}

/// A finite-dimensional cdga given by structure tables.
#[derive(Debug, Clone)]
pub struct Cdga {
    space: GradedSpace,
    unit: usize,
    /// `None` marks a product that leaves the truncated range.
    mult: Vec<Vec<Option<Element>>>,
    diff: Vec<Element>,
    quotient: Option<Arc<Quotient>>,
}

impl Cdga {
    /// The ground field `Q` in degree zero.
    pub fn ground() -> Self {
        Self::from_tables(
            vec![("1".to_string(), 0)],
            0,
            vec![vec![Some(Element::basis(0))]],
            vec![Element::zero()],
        )
        .expect("ground field")
    }

    /// Builds an algebra from explicit tables. `basis` carries cohomological
    /// degrees.
    pub fn from_tables(
        basis: Vec<(String, i64)>,
        unit: usize,
        mult: Vec<Vec<Option<Element>>>,
        diff: Vec<Element>,
    ) -> Result<Self> {
        let n = basis.len();
        let space = GradedSpace::from_basis(basis.into_iter().map(|(s, d)| (s, -d)))?;
        space.check_index(unit)?;
        if mult.len() != n || mult.iter().any(|r| r.len() != n) || diff.len() != n {
            return Err(Error::LengthMismatch(
                "cdga tables must be square over the basis".into(),
            ));
        }
        Ok(Self {
            space,
            unit,
            mult,
            diff,
            quotient: None,
        })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn name(&self, i: usize) -> &str {
        self.space.name(i)
    }

    /// Cohomological degree of a basis element.
    pub fn cohdeg(&self, i: usize) -> i64 {
        -self.space.degree(i)
    }

    pub fn product(&self, i: usize, j: usize) -> Result<Element> {
        self.mult[i][j]
            .clone()
            .ok_or_else(|| Error::Overflow(format!("{}*{}", self.name(i), self.name(j))))
    }

    pub fn is_total(&self) -> bool {
        self.mult.iter().all(|r| r.iter().all(Option::is_some))
    }

    pub fn differential(&self, i: usize) -> &Element {
        &self.diff[i]
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                out.add_scaled(&self.product(i, j)?, &(x * y));
            }
        }
        Ok(out)
    }

    pub fn d(&self, a: &Element) -> Element {
        let mut out = Element::zero();
        for (i, x) in a.terms() {
            out.add_scaled(&self.diff[i], x);
        }
        out
    }

    /// Replaces one product entry. Intended for fault injection in tests.
    pub fn set_product(&mut self, i: usize, j: usize, value: Option<Element>) {
        self.mult[i][j] = value;
    }

    pub fn set_differential(&mut self, i: usize, value: Element) {
        self.diff[i] = value;
    }

    /// Generators of the presentation this algebra was built from.
    pub fn ring(&self) -> Option<&PolyRing> {
        self.quotient.as_deref().map(|q| &q.ring)
    }

    /// Evaluates a polynomial in the presentation's generators.
    pub fn eval(&self, p: &Poly) -> Result<Element> {
        let q = self
            .quotient
            .as_ref()
            .ok_or_else(|| Error::Invalid("algebra has no presentation".into()))?;
        q.reduce(p)
    }

    /// Basis indices in the given cohomological degree.
    pub fn indices_in_cohdeg(&self, degree: i64) -> Vec<usize> {
        self.space.indices_in_degree(-degree)
    }

    pub fn render(&self, e: &Element) -> String {
        self.space.render(e)
    }

    pub fn top_cohdeg(&self) -> i64 {
        (0..self.dim()).map(|i| self.cohdeg(i)).max().unwrap_or(0)
    }
}

/// Builds the finite cdga presented by generators, homogeneous relations,
/// and a differential, truncated at the presentation's degree cap.
pub fn build_quotient(p: &Presentation) -> Result<Cdga> {
    let ring = &p.ring;
    let cap = p.cap;
    if cap < 0 {
        return Err(Error::Invalid(format!("negative degree cap {cap}")));
    }
    for r in &p.relations {
        if let Some(d) = ring.degree(r)? {
            if d > cap {
                return Err(Error::CapExceeded { cap, degree: d });
            }
        }
    }
    for (i, dp) in p.differential.iter().enumerate() {
        if let Some(d) = ring.degree(dp)? {
            let expected = ring.degree_of_gen(i) + 1;
            if d != expected {
                return Err(Error::DegreeMismatch { expected, found: d });
            }
        }
    }

    let top = 2 * cap + 1;
    let mut pieces = BTreeMap::new();
    let mut names = Vec::new();
    for degree in 0..=top {
        let mut monomials = ring.monomials_in_degree(degree)?;
        monomials.reverse();
        let cols = monomials.len();
        let mut gens = Vec::new();
        for r in &p.relations {
            let Some(rd) = ring.degree(r)? else { continue };
            if rd > degree {
                continue;
            }
            for m in ring.monomials_in_degree(degree - rd)? {
                let prod = ring.mul(&Poly::monomial(m, Scalar::one()), r);
                let mut v = vec![Scalar::zero(); cols];
                for (pm, c) in prod.terms() {
                    let col = monomials.iter().position(|x| x == pm).expect("same degree");
                    v[col] += c;
                }
                gens.push(v);
            }
        }
        let rref = linalg::row_space_basis(&gens, cols);
        let pivots: Vec<usize> = rref
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect();
        let mut basis = Vec::new();
        for col in 0..cols {
            if pivots.contains(&col) {
                continue;
            }
            let idx = if degree <= cap {
                names.push((ring.render_monomial(&monomials[col]), degree));
                Some(names.len() - 1)
            } else {
                None
            };
            basis.push((col, idx));
        }
        pieces.insert(
            degree,
            Piece {
                monomials,
                rref,
                pivots,
                basis,
            },
        );
    }

    let quotient = Arc::new(Quotient {
        ring: ring.clone(),
        cap,
        pieces,
    });
    if names.first().map(|(n, d)| (n.as_str(), *d)) != Some(("1", 0)) {
        return Err(Error::Invalid("the unit lies in the relation ideal".into()));
    }

    // monomial representative of each basis element
    let mut reps: Vec<Monomial> = Vec::with_capacity(names.len());
    for (degree, piece) in &quotient.pieces {
        if *degree > cap {
            break;
        }
        for (col, idx) in &piece.basis {
            debug_assert_eq!(Some(reps.len()), *idx);
            reps.push(piece.monomials[*col].clone());
        }
    }

    let n = names.len();
    let mut mult = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (m, neg) = match ring.mul_monomials(&reps[i], &reps[j]) {
                Some(x) => x,
                None => {
                    mult[i][j] = Some(Element::zero());
                    continue;
                }
            };
            let prod = Poly::monomial(m, scalar::sign(neg));
            mult[i][j] = match quotient.reduce(&prod) {
                Ok(e) => Some(e),
                Err(Error::Overflow(_)) => None,
                Err(e) => return Err(e),
            };
        }
    }

    // ideal preservation: d(f) must vanish in the quotient
    for r in &p.relations {
        let dr = ring.apply_derivation(r, &p.differential, 1);
        match quotient.reduce(&dr) {
            Ok(e) if e.is_zero() => {}
            Ok(_) | Err(Error::Overflow(_)) => {
                return Err(Error::IdealNotPreserved(ring.render(r)))
            }
            Err(e) => return Err(e),
        }
    }
    let mut diff = Vec::with_capacity(n);
    for rep in &reps {
        let dm = ring.apply_derivation(
            &Poly::monomial(rep.clone(), Scalar::one()),
            &p.differential,
            1,
        );
        diff.push(quotient.reduce(&dm)?);
    }

    let mut a = Cdga::from_tables(names, 0, mult, diff)?;
    a.quotient = Some(quotient);
    Ok(a)
}

/// Checks every cdga axiom on basis elements. Products that overflow the
/// degree cap are skipped.
pub fn check_cdga(a: &Cdga) -> Vec<Violation> {
    let n = a.dim();
    let mut out = Vec::new();
    let name = |i: usize| a.name(i).to_string();
    let push = |out: &mut Vec<Violation>, axiom: &str, at: Vec<String>| {
        out.push(Violation {
            axiom: axiom.to_string(),
            at,
        })
    };
    let homogeneous_in = |e: &Element, cohdeg: i64| e.support().all(|k| a.cohdeg(k) == cohdeg);

    if a.cohdeg(a.unit) != 0 {
        push(&mut out, "unit degree", vec![name(a.unit)]);
    }
    for i in 0..n {
        if a.mult[a.unit][i].as_ref() != Some(&Element::basis(i))
            || a.mult[i][a.unit].as_ref() != Some(&Element::basis(i))
        {
            push(&mut out, "unit", vec![name(i)]);
        }
        if !homogeneous_in(&a.diff[i], a.cohdeg(i) + 1) {
            push(&mut out, "diff degree", vec![name(i)]);
        }
        if !a.d(&a.diff[i]).is_zero() {
            push(&mut out, "d squared", vec![name(i)]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let Some(p) = &a.mult[i][j] else { continue };
            if !homogeneous_in(p, a.cohdeg(i) + a.cohdeg(j)) {
                push(&mut out, "mult degree", vec![name(i), name(j)]);
            }
            if let Some(q) = &a.mult[j][i] {
                let s = scalar::sign((a.cohdeg(i) * a.cohdeg(j)).rem_euclid(2) == 1);
                if *p != q.scale(&s) {
                    push(&mut out, "commutativity", vec![name(i), name(j)]);
                }
            }
            // Leibniz: d(ij) = d(i) j + (-1)^|i| i d(j)
            let lhs = a.d(p);
            let rhs = (|| -> Result<Element> {
                let t1 = a.mul(&a.diff[i], &Element::basis(j))?;
                let t2 = a.mul(&Element::basis(i), &a.diff[j])?;
                Ok(&t1 + &t2.scale(&scalar::sign(a.cohdeg(i).rem_euclid(2) == 1)))
            })();
            if let Ok(rhs) = rhs {
                if lhs != rhs {
                    push(&mut out, "leibniz", vec![name(i), name(j)]);
                }
            }
            for k in 0..n {
                let left = a.mul(p, &Element::basis(k));
                let right = a
                    .product(j, k)
                    .and_then(|jk| a.mul(&Element::basis(i), &jk));
                if let (Ok(l), Ok(r)) = (left, right) {
                    if l != r {
                        push(&mut out, "associativity", vec![name(i), name(j), name(k)]);
                    }
                }
            }
        }
    }
    out
}
