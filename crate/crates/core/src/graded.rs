//! Finite graded vector spaces with a named basis, and sparse elements.
//!
//! All degrees are homological. A cohomological degree `i` is stored as `-i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVector {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedSpace {
    basis: Vec<BasisVector>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_basis<S: Into<String>>(basis: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut space = Self::new();
        for (name, degree) in basis {
            space.push(name, degree)?;
        }
        Ok(space)
    }

    /// Appends a basis vector and returns its index.
    pub fn push(&mut self, name: impl Into<String>, degree: i64) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        let i = self.basis.len();
        self.index.insert(name.clone(), i);
        self.basis.push(BasisVector { name, degree });
        Ok(i)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(Error::InvalidIndex {
                index: i,
                dim: self.dim(),
            })
        }
    }

    /// Basis indices of the given degree, in declaration order.
    pub fn indices_in_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.degree(i) == degree)
            .collect()
    }

    /// Sorted list of degrees that occur.
    pub fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.degree).or_insert(0) += 1;
        }
        out
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::basis(i)
    }

    /// Checks that every index of `e` belongs to this space.
    pub fn contains(&self, e: &Element) -> Result<()> {
        match e.terms.keys().next_back() {
            Some(&i) => self.check_index(i),
            None => Ok(()),
        }
    }

    /// The common degree of a nonzero homogeneous element, `None` for zero.
    pub fn degree_of(&self, e: &Element) -> Result<Option<i64>> {
        self.contains(e)?;
        let mut degree = None;
        for &i in e.terms.keys() {
            let d = self.degree(i);
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return Err(Error::MixedDegree),
                _ => {}
            }
        }
        Ok(degree)
    }

    pub fn render(&self, e: &Element) -> String {
        e.render_with(|i| self.name(i).to_string())
    }
}

/// A finitely supported vector: basis index to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Element {
    terms: BTreeMap<usize, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, Scalar::one())
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(i, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut e = Self::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    /// Builds an element from a dense coordinate vector.
    pub fn from_dense(coords: &[Scalar]) -> Self {
        Self::from_terms(coords.iter().cloned().enumerate())
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        for (&i, c) in &self.terms {
            v[i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.terms.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(i) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.terms {
            self.add_term(i, x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    /// Relabels basis indices through `f`, summing collisions.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Element {
        Element::from_terms(self.terms.iter().map(|(&i, c)| (f(i), c.clone())))
    }

    /// Keeps only the terms whose index satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(&i, _)| keep(i))
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn render_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (&i, c)) in self.terms.iter().enumerate() {
            let negative = scalar::is_negative(c);
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&scalar::render(&abs));
                out.push('*');
            }
            out.push_str(&name(i));
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(|i| format!("e{i}")))
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += &rhs;
        self
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (&i, c) in &rhs.terms {
            self.add_term(i, c.clone());
        }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Scalar::one())
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}
