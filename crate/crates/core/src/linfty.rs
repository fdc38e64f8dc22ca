//! L-infinity algebras given by sparse bracket tables.
//!
//! The `r`-ary bracket is stored on canonical (weakly increasing) basis
//! tuples only; any other ordering is recovered through the graded
//! antisymmetry sign. Absent keys mean zero.
//!
//! Besides evaluation and axiom checking this module provides the three
//! constructions used to model mapping spaces: extension of scalars by a
//! cdga, twisting by a Maurer-Cartan element, and truncation below a degree.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use crate::cdga::Cdga;
use crate::error::{Error, Result, Violation};
use crate::graded::{Element, GradedSpace};
use crate::linalg;
use crate::scalar::{self, Scalar};
use crate::sign::{canonical_tuples, canonicalize_tuple, canonicalize_with, koszul_parity};

#[derive(Debug, Clone, PartialEq)]
pub struct LInftyAlgebra {
    space: GradedSpace,
    brackets: BTreeMap<usize, BTreeMap<Vec<usize>, Element>>,
}

impl LInftyAlgebra {
    /// The abelian algebra with zero differential on `space`.
    pub fn new(space: GradedSpace) -> Self {
        Self {
            space,
            brackets: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn name(&self, i: usize) -> &str {
        self.space.name(i)
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    /// Largest arity with a nonzero table, zero for the trivial structure.
    pub fn max_arity(&self) -> usize {
        self.brackets
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(&r, _)| r)
            .max()
            .unwrap_or(0)
    }

    pub fn is_abelian(&self) -> bool {
        self.max_arity() <= 1
    }

    pub fn is_minimal(&self) -> bool {
        self.table(1).next().is_none()
    }

    /// Stored entries of the `r`-ary bracket, by canonical key.
    pub fn table(&self, arity: usize) -> impl Iterator<Item = (&Vec<usize>, &Element)> {
        self.brackets.get(&arity).into_iter().flat_map(|t| t.iter())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Vec<usize>, &Element)> {
        self.brackets
            .iter()
            .flat_map(|(&r, t)| t.iter().map(move |(k, v)| (r, k, v)))
    }

    /// Sets `[e_{i_1}, ..., e_{i_r}] = value`, storing it on the canonical key.
    pub fn set_bracket(&mut self, args: &[usize], value: Element) -> Result<()> {
        if args.is_empty() {
            return Err(Error::Invalid("brackets have arity at least one".into()));
        }
        self.space.contains(&value)?;
        match canonicalize_tuple(args, &self.space)? {
            None if value.is_zero() => Ok(()),
            None => Err(Error::AntisymmetryConflict(self.render_tuple(args))),
            Some(key) => {
                let table = self.brackets.entry(args.len()).or_default();
                if value.is_zero() {
                    table.remove(&key.key);
                } else {
                    let v = value.scale(&key.sign());
                    table.insert(key.key, v);
                }
                Ok(())
            }
        }
    }

    /// Bracket of basis vectors in arbitrary order.
    pub fn bracket_basis(&self, args: &[usize]) -> Result<Element> {
        let Some(table) = self.brackets.get(&args.len()) else {
            return Ok(Element::zero());
        };
        Ok(match canonicalize_tuple(args, &self.space)? {
            None => Element::zero(),
            Some(key) => match table.get(&key.key) {
                Some(v) => v.scale(&key.sign()),
                None => Element::zero(),
            },
        })
    }

    pub fn differential(&self, i: usize) -> Element {
        self.brackets
            .get(&1)
            .and_then(|t| t.get(&vec![i]))
            .cloned()
            .unwrap_or_default()
    }

    pub fn delta(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (i, c) in e.terms() {
            out.add_scaled(&self.differential(i), c);
        }
        out
    }

    pub fn render(&self, e: &Element) -> String {
        self.space.render(e)
    }

    pub fn render_tuple(&self, t: &[usize]) -> String {
        let names: Vec<&str> = t.iter().map(|&i| self.name(i)).collect();
        format!("[{}]", names.join(","))
    }
}

/// Multilinear evaluation of `[a_1, ..., a_r]`.
pub fn bracket_eval(l: &LInftyAlgebra, args: &[Element]) -> Result<Element> {
    for a in args {
        l.space.contains(a)?;
    }
    if args.is_empty() {
        return Err(Error::Invalid("brackets have arity at least one".into()));
    }
    let Some(table) = l.brackets.get(&args.len()) else {
        return Ok(Element::zero());
    };
    if table.is_empty() || args.iter().any(Element::is_zero) {
        return Ok(Element::zero());
    }
    let mut out = Element::zero();
    let mut idx = Vec::with_capacity(args.len());
    expand(l, table, args, &mut idx, Scalar::one(), &mut out);
    Ok(out)
}

fn expand(
    l: &LInftyAlgebra,
    table: &BTreeMap<Vec<usize>, Element>,
    args: &[Element],
    idx: &mut Vec<usize>,
    coeff: Scalar,
    out: &mut Element,
) {
    let k = idx.len();
    if k == args.len() {
        if let Some(key) = canonicalize_with(idx, |i| l.degree(i)) {
            if let Some(v) = table.get(&key.key) {
                let c = if key.negative { -coeff } else { coeff };
                out.add_scaled(v, &c);
            }
        }
        return;
    }
    for (i, c) in args[k].terms() {
        idx.push(i);
        expand(l, table, args, idx, &coeff * c, out);
        idx.pop();
    }
}

/// Options for [`check_linfty`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    /// Largest number of inputs for which the Jacobi identities are
    /// evaluated. Defaults to twice the maximal arity.
    pub jacobi_bound: Option<usize>,
}

/// Verifies the degree of every stored entry and the generalized Jacobi
/// identities on all canonical basis tuples up to the bound.
pub fn check_linfty(l: &LInftyAlgebra) -> Vec<Violation> {
    check_linfty_with(l, CheckOptions::default())
}

pub fn check_linfty_with(l: &LInftyAlgebra, opts: CheckOptions) -> Vec<Violation> {
    let mut out = Vec::new();
    for (r, key, value) in l.entries() {
        let expected: i64 = key.iter().map(|&i| l.degree(i)).sum::<i64>() + r as i64 - 2;
        if value.support().any(|i| l.degree(i) != expected) {
            out.push(Violation::new(
                "degree r-2",
                key.iter().map(|&i| l.name(i).to_string()).collect(),
            ));
        }
    }
    let max = l.max_arity();
    if max == 0 {
        return out;
    }
    let bound = opts.jacobi_bound.unwrap_or(2 * max);
    for n in 1..=bound {
        let tuples = canonical_tuples(&l.space, n);
        let failures: Vec<Violation> = tuples
            .par_iter()
            .filter_map(|t| {
                let j = jacobiator(l, t);
                (!j.is_zero()).then(|| {
                    Violation::new("jacobi", t.iter().map(|&i| l.name(i).to_string()).collect())
                })
            })
            .collect();
        out.extend(failures);
    }
    out
}

/// The generalized Jacobi expression on basis vectors `x_1, ..., x_n`:
/// the sum over `p` and `(p, n-p)`-unshuffles `s` of
/// `(-1)^p * koszul(s) * [[x_{s_1}..x_{s_p}], x_{s_{p+1}}..x_{s_n}]`.
pub fn jacobiator(l: &LInftyAlgebra, xs: &[usize]) -> Element {
    let n = xs.len();
    let max = l.max_arity();
    let degrees: Vec<i64> = xs.iter().map(|&i| l.degree(i)).collect();
    let mut total = Element::zero();
    for p in 1..=n {
        let outer = n - p + 1;
        if p > max || outer > max {
            continue;
        }
        for_each_subset(n, p, |inner: &[usize]| {
            let mut perm = inner.to_vec();
            perm.extend((0..n).filter(|k| !inner.contains(k)));
            let negative =
                koszul_parity(&perm, &degrees).expect("valid permutation") ^ (p % 2 == 1);
            let inner_args: Vec<usize> = inner.iter().map(|&k| xs[k]).collect();
            let first = l.bracket_basis(&inner_args).expect("valid indices");
            if first.is_zero() {
                return;
            }
            let mut args = vec![first];
            args.extend(perm[p..].iter().map(|&k| Element::basis(xs[k])));
            let v = bracket_eval(l, &args).expect("valid element");
            total.add_scaled(&v, &scalar::sign(negative));
        });
    }
    total
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), &mut f);
}

/// Extension of scalars `A (x) L`.
///
/// The basis is `a (x) l` in `a`-major order with homological degree
/// `|l| - cohdeg(a)`; `delta(x (x) l) = d x (x) l + (-1)^|x| x (x) delta l`
/// and `[x_1 (x) l_1, ..., x_r (x) l_r] = (-1)^{sum_{i<j} |l_i||x_j|}
/// x_1...x_r (x) [l_1, ..., l_r]` for `r >= 2`.
pub fn tensor(a: &Cdga, l: &LInftyAlgebra) -> Result<LInftyAlgebra> {
    let (na, nl) = (a.dim(), l.dim());
    let idx = |x: usize, y: usize| x * nl + y;
    let mut space = GradedSpace::new();
    for x in 0..na {
        for y in 0..nl {
            let name = if a.name(x) == "1" && na == 1 {
                l.name(y).to_string()
            } else {
                format!("{}⊗{}", a.name(x), l.name(y))
            };
            space.push(name, l.degree(y) - a.cohdeg(x))?;
        }
    }
    let mut out = LInftyAlgebra::new(space);

    for x in 0..na {
        for y in 0..nl {
            let mut d = Element::zero();
            for (x2, c) in a.differential(x).terms() {
                d.add_term(idx(x2, y), c.clone());
            }
            let s = scalar::sign(a.cohdeg(x).rem_euclid(2) == 1);
            for (y2, c) in l.differential(y).terms() {
                d.add_term(idx(x, y2), c * &s);
            }
            if !d.is_zero() {
                out.set_bracket(&[idx(x, y)], d)?;
            }
        }
    }

    let mut values: BTreeMap<Vec<usize>, Element> = BTreeMap::new();
    for (r, key, value) in l.entries() {
        if r < 2 {
            continue;
        }
        let mut assignment = vec![0usize; r];
        loop {
            let mut negative = false;
            for i in 0..r {
                for j in i + 1..r {
                    if (l.degree(key[i]) * a.cohdeg(assignment[j])).rem_euclid(2) == 1 {
                        negative = !negative;
                    }
                }
            }
            let mut prod = Element::basis(assignment[0]);
            for &x in &assignment[1..] {
                prod = a.mul(&prod, &Element::basis(x))?;
            }
            let tuple: Vec<usize> = assignment
                .iter()
                .zip(key)
                .map(|(&x, &y)| idx(x, y))
                .collect();
            if let Some(canon) = canonicalize_with(&tuple, |i| out.degree(i)) {
                if let std::collections::btree_map::Entry::Vacant(e) = values.entry(canon.key) {
                    let mut v = Element::zero();
                    for (x, c) in prod.terms() {
                        for (y, d) in value.terms() {
                            v.add_term(idx(x, y), c * d);
                        }
                    }
                    let v = v.scale(&scalar::sign(negative ^ canon.negative));
                    e.insert(v);
                }
            }
            // next assignment in base `na`
            let mut k = 0;
            while k < r {
                assignment[k] += 1;
                if assignment[k] < na {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
        }
    }
    for (key, v) in values {
        if !v.is_zero() {
            out.set_bracket(&key, v)?;
        }
    }
    Ok(out)
}

fn check_mc_degree(l: &LInftyAlgebra, tau: &Element) -> Result<()> {
    match l.space.degree_of(tau)? {
        None | Some(-1) => Ok(()),
        Some(d) => Err(Error::DegreeMismatch {
            expected: -1,
            found: d,
        }),
    }
}

/// `sum_{k>=1} 1/k! [tau, ..., tau]`; finite because arities are bounded.
pub fn curvature(l: &LInftyAlgebra, tau: &Element) -> Result<Element> {
    check_mc_degree(l, tau)?;
    let mut out = Element::zero();
    for k in 1..=l.max_arity() {
        let args = vec![tau.clone(); k];
        let v = bracket_eval(l, &args)?;
        out.add_scaled(&v, &(Scalar::one() / scalar::factorial(k)));
    }
    Ok(out)
}

/// A degree `-1` element with vanishing curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct McElement {
    value: Element,
}

impl McElement {
    pub fn new(l: &LInftyAlgebra, value: Element) -> Result<Self> {
        let f = curvature(l, &value)?;
        if !f.is_zero() {
            return Err(Error::NotMaurerCartan(l.render(&f)));
        }
        Ok(Self { value })
    }

    pub fn zero() -> Self {
        Self {
            value: Element::zero(),
        }
    }

    pub fn value(&self) -> &Element {
        &self.value
    }
}

/// Brackets deformed by an arbitrary degree `-1` element:
/// `[a_1..a_r]_tau = sum_k 1/k! [tau^k, a_1..a_r]`. This is an L-infinity
/// structure exactly when `tau` is Maurer-Cartan; see [`twist`].
pub fn deform(l: &LInftyAlgebra, tau: &Element) -> Result<LInftyAlgebra> {
    check_mc_degree(l, tau)?;
    let max = l.max_arity();
    let mut out = LInftyAlgebra::new(l.space.clone());
    if tau.is_zero() {
        out.brackets = l.brackets.clone();
        return Ok(out);
    }
    for r in 1..=max {
        let tuples = canonical_tuples(&l.space, r);
        let values: Vec<(Vec<usize>, Element)> = tuples
            .into_par_iter()
            .map(|t| {
                let mut v = Element::zero();
                for k in 0..=(max - r) {
                    let mut args = vec![tau.clone(); k];
                    args.extend(t.iter().map(|&i| Element::basis(i)));
                    let b = bracket_eval(l, &args).expect("valid arguments");
                    v.add_scaled(&b, &(Scalar::one() / scalar::factorial(k)));
                }
                (t, v)
            })
            .collect();
        for (t, v) in values {
            if !v.is_zero() {
                out.set_bracket(&t, v)?;
            }
        }
    }
    Ok(out)
}

/// The twisted algebra `L^tau`.
pub fn twist(l: &LInftyAlgebra, tau: &McElement) -> Result<LInftyAlgebra> {
    let f = curvature(l, &tau.value)?;
    if !f.is_zero() {
        return Err(Error::NotMaurerCartan(l.render(&f)));
    }
    deform(l, &tau.value)
}

/// A truncation together with the inclusion of its basis into the original
/// algebra.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub algebra: LInftyAlgebra,
    pub embedding: Vec<Element>,
}

/// The sub-algebra spanned by everything of degree above `m` and the cycles
/// of degree `m`.
pub fn truncate(l: &LInftyAlgebra, m: i64) -> Result<LInftyAlgebra> {
    Ok(truncate_with_embedding(l, m)?.algebra)
}

pub fn truncate_with_embedding(l: &LInftyAlgebra, m: i64) -> Result<Truncation> {
    let source = l.space.indices_in_degree(m);
    let target = l.space.indices_in_degree(m - 1);
    let rows: Vec<Vec<Scalar>> = target
        .iter()
        .map(|&t| source.iter().map(|&s| l.differential(s).coeff(t)).collect())
        .collect();
    let kernel = linalg::kernel(&rows, source.len());
    let cycles: Vec<Element> = kernel
        .iter()
        .map(|v| Element::from_terms(source.iter().zip(v).map(|(&s, c)| (s, c.clone()))))
        .collect();

    let mut space = GradedSpace::new();
    let mut embedding = Vec::new();
    let mut position = vec![None; l.dim()];
    let mut cycle_position = Vec::with_capacity(cycles.len());
    for i in 0..l.dim() {
        if l.degree(i) > m {
            position[i] = Some(space.push(l.name(i), l.degree(i))?);
            embedding.push(Element::basis(i));
        } else if source.first() == Some(&i) {
            for z in &cycles {
                let name = match z.terms().collect::<Vec<_>>().as_slice() {
                    [(j, c)] if c.is_one() => l.name(*j).to_string(),
                    _ => format!("[{}]", l.render(z)),
                };
                cycle_position.push(space.push(name, m)?);
                embedding.push(z.clone());
            }
        }
    }
    let cycle_vectors: Vec<Vec<Scalar>> = cycles.iter().map(|z| z.to_dense(l.dim())).collect();
    let project = |e: &Element| -> Result<Element> {
        let mut out = Element::zero();
        let mut low = Element::zero();
        for (i, c) in e.terms() {
            match (l.degree(i).cmp(&m), position[i]) {
                (std::cmp::Ordering::Greater, Some(p)) => out.add_term(p, c.clone()),
                (std::cmp::Ordering::Equal, _) => low.add_term(i, c.clone()),
                _ => return Err(Error::TruncationNotClosed(l.render(e))),
            }
        }
        if !low.is_zero() {
            let coords = linalg::coordinates(&cycle_vectors, l.dim(), &low.to_dense(l.dim()))
                .ok_or_else(|| Error::TruncationNotClosed(l.render(e)))?;
            for (k, c) in coords.into_iter().enumerate() {
                out.add_term(cycle_position[k], c);
            }
        }
        Ok(out)
    };

    let mut out = LInftyAlgebra::new(space);
    for r in 1..=l.max_arity() {
        for t in canonical_tuples(&out.space, r) {
            let args: Vec<Element> = t.iter().map(|&i| embedding[i].clone()).collect();
            let v = bracket_eval(l, &args)?;
            let p = project(&v)?;
            if !p.is_zero() {
                out.set_bracket(&t, p)?;
            }
        }
    }
    Ok(Truncation {
        algebra: out,
        embedding,
    })
}

/// The lower central series `F_1 = L`, `F_{r+1}` spanned by brackets (of
/// any arity) with an argument in `F_r`, each stored as a reduced basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    pub steps: Vec<Vec<Element>>,
}

impl Filtration {
    /// Number of nonzero steps.
    pub fn length(&self) -> usize {
        self.steps.iter().filter(|s| !s.is_empty()).count()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(Vec::len).collect()
    }
}

/// Computes the lower central series, or `Err(NotNilpotent)` if it does not
/// reach zero within `dim + 1` steps.
pub fn lcs_filtration(l: &LInftyAlgebra) -> Result<Filtration> {
    let n = l.dim();
    let mut current: Vec<Element> = (0..n).map(Element::basis).collect();
    let mut steps = Vec::new();
    for _ in 0..=n + 1 {
        steps.push(current.clone());
        if current.is_empty() {
            return Ok(Filtration { steps });
        }
        let mut spanning = Vec::new();
        for r in 1..=l.max_arity() {
            let others = if r == 1 {
                vec![vec![]]
            } else {
                canonical_tuples(&l.space, r - 1)
            };
            for v in &current {
                for t in &others {
                    let mut args = vec![v.clone()];
                    args.extend(t.iter().map(|&i| Element::basis(i)));
                    let b = bracket_eval(l, &args)?;
                    if !b.is_zero() {
                        spanning.push(b.to_dense(n));
                    }
                }
            }
        }
        current = linalg::row_space_basis(&spanning, n)
            .iter()
            .map(|v| Element::from_dense(v))
            .collect();
    }
    Err(Error::NotNilpotent)
}
