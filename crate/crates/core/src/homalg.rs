//! Homology of the underlying chain complex, the bracket it inherits, the
//! Campbell-Hausdorff group on degree zero, and derivations of graded
//! algebras with polynomial relations.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cdga::{build_quotient, Cdga, Presentation};
use crate::ce::{sullivan_to_linfty, SullivanPresentation};
use crate::error::{Error, Result};
use crate::graded::{Element, GradedSpace};
use crate::linalg;
use crate::linfty::{bracket_eval, lcs_filtration, tensor, twist, LInftyAlgebra, McElement};
use crate::poly::{Poly, PolyRing};
use crate::scalar::{self, Scalar};
use crate::sign::canonical_tuples;

/// A graded space with a degree `-1` differential.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex {
    space: GradedSpace,
    differential: Vec<Element>,
}

impl ChainComplex {
    pub fn new(space: GradedSpace, differential: Vec<Element>) -> Result<Self> {
        if differential.len() != space.dim() {
            return Err(Error::LengthMismatch(format!(
                "{} basis vectors but {} differentials",
                space.dim(),
                differential.len()
            )));
        }
        for (i, d) in differential.iter().enumerate() {
            space.contains(d)?;
            if let Some(k) = space.degree_of(d)? {
                if k != space.degree(i) - 1 {
                    return Err(Error::DegreeMismatch {
                        expected: space.degree(i) - 1,
                        found: k,
                    });
                }
            }
        }
        let c = Self {
            space,
            differential,
        };
        for i in 0..c.space.dim() {
            let dd = c.apply(&c.differential[i]);
            if !dd.is_zero() {
                return Err(Error::DifferentialSquare(format!(
                    "delta^2 {} = {}",
                    c.space.name(i),
                    c.space.render(&dd)
                )));
            }
        }
        Ok(c)
    }

    /// The complex `(L, l_1)`.
    pub fn from_linfty(l: &LInftyAlgebra) -> Result<Self> {
        Self::new(
            l.space().clone(),
            (0..l.dim()).map(|i| l.differential(i)).collect(),
        )
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn apply(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (i, c) in e.terms() {
            out.add_scaled(&self.differential[i], c);
        }
        out
    }
}

/// Homology in one degree: a basis of boundaries completed by
/// representatives to a basis of cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyGroup {
    pub representatives: Vec<Element>,
    boundaries: Vec<Vec<Scalar>>,
}

impl HomologyGroup {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomologyReport {
    ambient: usize,
    groups: BTreeMap<i64, HomologyGroup>,
}

impl HomologyReport {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn group(&self, n: i64) -> Option<&HomologyGroup> {
        self.groups.get(&n)
    }

    pub fn dim(&self, n: i64) -> usize {
        self.groups.get(&n).map_or(0, HomologyGroup::dim)
    }

    /// Nonzero dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.groups
            .iter()
            .filter(|(_, g)| g.dim() > 0)
            .map(|(&n, g)| (n, g.dim()))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.groups.values().map(HomologyGroup::dim).sum()
    }

    pub fn representatives(&self, n: i64) -> &[Element] {
        self.groups
            .get(&n)
            .map_or(&[], |g| g.representatives.as_slice())
    }

    /// Coordinates in `H_n` of a cycle of degree `n`. Boundaries project to
    /// zero.
    pub fn project(&self, n: i64, cycle: &Element) -> Result<Vec<Scalar>> {
        let Some(g) = self.groups.get(&n) else {
            return if cycle.is_zero() {
                Ok(Vec::new())
            } else {
                Err(Error::NotACycle(format!("{cycle:?}")))
            };
        };
        let mut vectors = g.boundaries.clone();
        vectors.extend(g.representatives.iter().map(|r| r.to_dense(self.ambient)));
        let coords = linalg::coordinates(&vectors, self.ambient, &cycle.to_dense(self.ambient))
            .ok_or_else(|| Error::NotACycle(format!("{cycle:?}")))?;
        Ok(coords[g.boundaries.len()..].to_vec())
    }

    /// Homology classes as `(degree, position)`, by increasing degree.
    pub fn classes(&self) -> Vec<(i64, usize)> {
        self.groups
            .iter()
            .flat_map(|(&n, g)| (0..g.dim()).map(move |k| (n, k)))
            .collect()
    }
}

/// Exact homology, one degree at a time.
pub fn homology(c: &ChainComplex) -> HomologyReport {
    let space = &c.space;
    let n = space.dim();
    let degrees: Vec<i64> = space.dims_by_degree().keys().copied().collect();
    let groups = degrees
        .par_iter()
        .map(|&deg| {
            let source = space.indices_in_degree(deg);
            let target = space.indices_in_degree(deg - 1);
            let rows: Vec<Vec<Scalar>> = target
                .iter()
                .map(|&t| source.iter().map(|&s| c.differential[s].coeff(t)).collect())
                .collect();
            let cycles: Vec<Vec<Scalar>> = linalg::kernel(&rows, source.len())
                .into_iter()
                .map(|v| Element::from_terms(source.iter().copied().zip(v)).to_dense(n))
                .collect();
            let images: Vec<Vec<Scalar>> = space
                .indices_in_degree(deg + 1)
                .into_iter()
                .map(|i| c.differential[i].to_dense(n))
                .collect();
            let boundaries = linalg::row_space_basis(&images, n);
            let mut family = boundaries.clone();
            family.extend(cycles.iter().cloned());
            let representatives = linalg::independent_subset(&family, n)
                .into_iter()
                .filter(|&k| k >= boundaries.len())
                .map(|k| Element::from_dense(&family[k]))
                .collect();
            (
                deg,
                HomologyGroup {
                    representatives,
                    boundaries,
                },
            )
        })
        .collect();
    HomologyReport { ambient: n, groups }
}

fn class_name(l: &LInftyAlgebra, rep: &Element) -> String {
    match rep.terms().collect::<Vec<_>>().as_slice() {
        [(i, c)] if c.is_one() => l.name(*i).to_string(),
        _ => format!("[{}]", l.render(rep)),
    }
}

/// The graded Lie algebra `H(L)` with the bracket induced by `l_2`, as an
/// L-infinity algebra with only a binary bracket.
pub fn induced_bracket(l: &LInftyAlgebra, h: &HomologyReport) -> Result<LInftyAlgebra> {
    if h.ambient != l.dim() {
        return Err(Error::ReportMismatch);
    }
    for g in h.groups.values() {
        for r in &g.representatives {
            if !l.delta(r).is_zero() {
                return Err(Error::ReportMismatch);
            }
        }
    }
    let classes = h.classes();
    let mut space = GradedSpace::new();
    let mut offset = BTreeMap::new();
    for (k, &(n, pos)) in classes.iter().enumerate() {
        if pos == 0 {
            offset.insert(n, k);
        }
        let rep = &h.groups[&n].representatives[pos];
        let mut name = class_name(l, rep);
        if space.lookup(&name).is_some() {
            name = format!("{name}#{k}");
        }
        space.push(name, n)?;
    }
    let mut out = LInftyAlgebra::new(space);
    for t in canonical_tuples(out.space(), 2) {
        let (n0, p0) = classes[t[0]];
        let (n1, p1) = classes[t[1]];
        let v = bracket_eval(
            l,
            &[
                h.groups[&n0].representatives[p0].clone(),
                h.groups[&n1].representatives[p1].clone(),
            ],
        )?;
        let deg = n0 + n1;
        let coords = h.project(deg, &v)?;
        if coords.iter().all(Zero::is_zero) {
            continue;
        }
        let base = offset[&deg];
        let value = Element::from_terms(coords.into_iter().enumerate().map(|(k, c)| (base + k, c)));
        out.set_bracket(&t, value)?;
    }
    Ok(out)
}

/// The degree-zero part of a graded Lie algebra, with its binary bracket.
pub fn degree_zero_part(g: &LInftyAlgebra) -> Result<LInftyAlgebra> {
    let keep = g.space().indices_in_degree(0);
    let mut space = GradedSpace::new();
    for &i in &keep {
        space.push(g.name(i), 0)?;
    }
    let position: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut out = LInftyAlgebra::new(space);
    for t in canonical_tuples(out.space(), 2) {
        let v = g.bracket_basis(&[keep[t[0]], keep[t[1]]])?;
        let mapped = Element::from_terms(v.terms().map(|(i, c)| (position[&i], c.clone())));
        out.set_bracket(&t, mapped)?;
    }
    Ok(out)
}

fn lie(g: &LInftyAlgebra, a: &Element, b: &Element) -> Result<Element> {
    bracket_eval(g, &[a.clone(), b.clone()])
}

/// `log(exp(a) exp(b))` in a nilpotent Lie algebra, by the Dynkin series
/// truncated at the nilpotency class.
pub fn ch_product(g: &LInftyAlgebra, a: &Element, b: &Element) -> Result<Element> {
    let class = lcs_filtration(g)?.length();
    // Dynkin coefficients collected by word; a word ending in two equal
    // letters contributes nothing
    let mut words: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for_each_block_sequence(class, &mut |blocks: &[(usize, usize)]| -> Result<()> {
        let mut word = Vec::new();
        let mut denominator = Scalar::one();
        for &(r, s) in blocks {
            word.extend(std::iter::repeat_n(0, r));
            word.extend(std::iter::repeat_n(1, s));
            denominator *= scalar::factorial(r) * scalar::factorial(s);
        }
        if word.len() >= 2 && word[word.len() - 1] == word[word.len() - 2] {
            return Ok(());
        }
        let n = blocks.len();
        denominator *= scalar::int(n as i64) * scalar::int(word.len() as i64);
        *words.entry(word).or_insert_with(Scalar::zero) +=
            scalar::sign(n.is_multiple_of(2)) / denominator;
        Ok(())
    })?;
    let letters = [a, b];
    let mut out = Element::zero();
    for (word, c) in words {
        if c.is_zero() {
            continue;
        }
        let mut acc = letters[*word.last().unwrap()].clone();
        for &w in word[..word.len() - 1].iter().rev() {
            if acc.is_zero() {
                break;
            }
            acc = lie(g, letters[w], &acc)?;
        }
        out.add_scaled(&acc, &c);
    }
    Ok(out)
}

type BlockVisitor<'a> = dyn FnMut(&[(usize, usize)]) -> Result<()> + 'a;

/// Calls `f` on every sequence of pairs `(r_i, s_i)` with `r_i + s_i >= 1`
/// and total at most `max`.
fn for_each_block_sequence(max: usize, f: &mut BlockVisitor<'_>) -> Result<()> {
    fn go(remaining: usize, cur: &mut Vec<(usize, usize)>, f: &mut BlockVisitor<'_>) -> Result<()> {
        if !cur.is_empty() {
            f(cur)?;
        }
        for total in 1..=remaining {
            for r in 0..=total {
                cur.push((r, total - r));
                go(remaining - total, cur, f)?;
                cur.pop();
            }
        }
        Ok(())
    }
    go(max, &mut Vec::new(), f)
}

/// A derivation of a presented algebra, given by the images of the
/// generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub degree: i64,
    pub images: Vec<Element>,
}

impl Derivation {
    pub fn render(&self, a: &Cdga, ring: &PolyRing) -> String {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| {
                let coeff = a.render(p);
                let d = format!("∂/∂{}", ring.name(i));
                if coeff == "1" {
                    d
                } else if p.len() > 1 {
                    format!("({coeff})·{d}")
                } else {
                    format!("{coeff}·{d}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn require_f0(p: &Presentation, square: bool) -> Result<()> {
    if p.has_odd_generators() {
        return Err(Error::NotF0("odd generators present".into()));
    }
    if p.differential.iter().any(|d| !d.is_zero()) {
        return Err(Error::NotF0("nonzero differential".into()));
    }
    if square && p.relations.len() != p.ring.len() {
        return Err(Error::NotF0(format!(
            "{} generators but {} relations",
            p.ring.len(),
            p.relations.len()
        )));
    }
    Ok(())
}

/// A basis of the derivations of cohomological degree `d`: assignments
/// `x_i -> p_i` with `sum_i p_i df_j/dx_i = 0` in the quotient for every
/// relation `f_j`.
pub fn derivations(p: &Presentation, d: i64) -> Result<Vec<Derivation>> {
    require_f0(p, false)?;
    let a = build_quotient(p)?;
    derivations_in(p, &a, d)
}

fn derivations_in(p: &Presentation, a: &Cdga, d: i64) -> Result<Vec<Derivation>> {
    let ring = &p.ring;
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for i in 0..ring.len() {
        for b in a.indices_in_cohdeg(ring.degree_of_gen(i) + d) {
            unknowns.push((i, b));
        }
    }
    let partials: Vec<Vec<Element>> = p
        .relations
        .iter()
        .map(|f| {
            (0..ring.len())
                .map(|i| a.eval(&ring.partial(f, i)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let dim = a.dim();
    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(unknowns.len());
    for &(i, b) in &unknowns {
        let mut col = Vec::with_capacity(dim * partials.len());
        for row in &partials {
            let v = a.mul(&Element::basis(b), &row[i])?;
            col.extend(v.to_dense(dim));
        }
        columns.push(col);
    }
    let rows = linalg::transpose(&columns, dim * partials.len());
    let kernel = if rows.is_empty() {
        (0..unknowns.len())
            .map(|k| {
                let mut v = vec![Scalar::zero(); unknowns.len()];
                v[k] = Scalar::one();
                v
            })
            .collect()
    } else {
        linalg::kernel(&rows, unknowns.len())
    };
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut images = vec![Element::zero(); ring.len()];
            for (&(i, b), c) in unknowns.iter().zip(v) {
                images[i].add_term(b, c);
            }
            Derivation { degree: d, images }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalperinDegree {
    /// Derivation degree.
    pub derivation_degree: i64,
    pub kernel_dim: usize,
    pub derivation_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalperinReport {
    /// Whether the algebra has no derivations of negative degree.
    pub holds: bool,
    /// The relations are taken to form a regular sequence without checking.
    pub regular_sequence_assumed: bool,
    /// Keyed by the homological degree of the odd part of `A (x) L`.
    pub degrees: BTreeMap<i64, HalperinDegree>,
    pub negative_derivations: BTreeMap<i64, usize>,
    pub witness: Option<String>,
}

/// The L-infinity model of the Koszul complex `(Q[x] (x) Lambda(y), dy_j = f_j)`
/// of an even presentation, with generators `alpha_<x>` and `beta<j>`.
pub fn koszul_linfty(p: &Presentation) -> Result<LInftyAlgebra> {
    require_f0(p, true)?;
    let ring = &p.ring;
    let n = ring.len();
    let mut gens: Vec<(String, i64)> = (0..n)
        .map(|i| (format!("salpha_{}", ring.name(i)), ring.degree_of_gen(i)))
        .collect();
    for (j, f) in p.relations.iter().enumerate() {
        let deg = ring
            .degree(f)?
            .ok_or_else(|| Error::NotF0(format!("relation {} is zero", j + 1)))?;
        gens.push((format!("sbeta{}", j + 1), deg - 1));
    }
    let koszul_ring = PolyRing::new(gens)?;
    let images: Vec<Poly> = (0..n).map(|i| koszul_ring.gen(i)).collect();
    let mut differential = vec![Poly::zero(); n];
    differential.extend(
        p.relations
            .iter()
            .map(|f| ring.substitute(f, &koszul_ring, &images)),
    );
    sullivan_to_linfty(&SullivanPresentation::new(koszul_ring, differential)?)
}

/// Compares, degree by degree, the kernel of the twisted differential on
/// the odd part of `A (x) L` with the derivations of `A`, where `A` is the
/// presented algebra and `L` the L-infinity model of its Koszul complex
/// `(Q[x] (x) Lambda(y), dy_j = f_j)`.
pub fn halperin_check(p: &Presentation) -> Result<HalperinReport> {
    require_f0(p, true)?;
    let a = build_quotient(p)?;
    let ring = &p.ring;
    let (n, k) = (ring.len(), p.relations.len());
    let l = koszul_linfty(p)?;
    let t = tensor(&a, &l)?;
    let index = |x: usize, y: usize| x * l.dim() + y;

    let mut pi = Element::zero();
    for i in 0..n {
        if let Some(x) = a.space().lookup(ring.name(i)) {
            pi.add_term(index(x, i), Scalar::one());
        }
    }
    let tw = twist(&t, &McElement::new(&t, pi)?)?;

    let min_gen = (0..n).map(|i| ring.degree_of_gen(i)).min().unwrap_or(0);
    let max_gen = (0..n).map(|i| ring.degree_of_gen(i)).max().unwrap_or(0);
    let mut degrees = BTreeMap::new();
    let mut negative_derivations = BTreeMap::new();
    let mut witness = None;
    for d in -max_gen..=a.top_cohdeg() - min_gen {
        let source: Vec<usize> = (0..n)
            .flat_map(|i| {
                a.indices_in_cohdeg(ring.degree_of_gen(i) + d)
                    .into_iter()
                    .map(move |x| index(x, i))
            })
            .collect();
        if source.is_empty() {
            continue;
        }
        let targets: Vec<usize> = (0..k)
            .flat_map(|j| (0..a.dim()).map(move |x| index(x, n + j)))
            .collect();
        let rows: Vec<Vec<Scalar>> = targets
            .iter()
            .map(|&r| {
                source
                    .iter()
                    .map(|&s| tw.differential(s).coeff(r))
                    .collect()
            })
            .collect();
        let kernel_dim = linalg::kernel(&rows, source.len()).len();
        let ders = derivations_in(p, &a, d)?;
        let degree = -1 - d;
        if kernel_dim != ders.len() {
            return Err(Error::HalperinMismatch {
                degree,
                kernel: kernel_dim,
                derivations: ders.len(),
            });
        }
        if d < 0 {
            negative_derivations.insert(d, ders.len());
            if witness.is_none() {
                witness = ders.first().map(|x| x.render(&a, ring));
            }
        }
        degrees.insert(
            degree,
            HalperinDegree {
                derivation_degree: d,
                kernel_dim,
                derivation_dim: ders.len(),
            },
        );
    }
    Ok(HalperinReport {
        holds: witness.is_none(),
        regular_sequence_assumed: true,
        degrees,
        negative_derivations,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn heisenberg() -> LInftyAlgebra {
        let space = GradedSpace::from_basis([("X", 0), ("Y", 0), ("Z", 0)]).unwrap();
        let mut l = LInftyAlgebra::new(space);
        l.set_bracket(&[0, 1], Element::basis(2)).unwrap();
        l
    }

    #[test]
    fn acyclic_complex() {
        let space = GradedSpace::from_basis([("a", 1), ("b", 0)]).unwrap();
        let c = ChainComplex::new(space, vec![Element::basis(1), Element::zero()]).unwrap();
        let h = homology(&c);
        assert_eq!(h.total_dim(), 0);
        assert!(h.dims().is_empty());
        assert_eq!(
            h.project(0, &Element::basis(1)).unwrap(),
            Vec::<Scalar>::new()
        );
        assert!(h.project(1, &Element::basis(0)).is_err());
    }

    #[test]
    fn differential_square_is_rejected() {
        let space = GradedSpace::from_basis([("a", 2), ("b", 1), ("c", 0)]).unwrap();
        let r = ChainComplex::new(
            space,
            vec![Element::basis(1), Element::basis(2), Element::zero()],
        );
        assert!(matches!(r, Err(Error::DifferentialSquare(_))));
    }

    #[test]
    fn homology_with_representatives() {
        // a -> b + c, with b, c in degree 0: H_0 is one-dimensional
        let space = GradedSpace::from_basis([("a", 1), ("b", 0), ("c", 0)]).unwrap();
        let c = ChainComplex::new(
            space,
            vec![
                &Element::basis(1) + &Element::basis(2),
                Element::zero(),
                Element::zero(),
            ],
        )
        .unwrap();
        let h = homology(&c);
        assert_eq!(h.dims(), BTreeMap::from([(0, 1)]));
        let rep = &h.representatives(0)[0];
        assert_eq!(h.project(0, rep).unwrap(), vec![int(1)]);
        let b_plus_c = &Element::basis(1) + &Element::basis(2);
        assert_eq!(h.project(0, &b_plus_c).unwrap(), vec![int(0)]);
        let shifted = rep + &b_plus_c.scale(&ratio(3, 2));
        assert_eq!(h.project(0, &shifted).unwrap(), vec![int(1)]);
    }

    #[test]
    fn induced_bracket_on_heisenberg() {
        let l = heisenberg();
        let h = homology(&ChainComplex::from_linfty(&l).unwrap());
        let b = induced_bracket(&l, &h).unwrap();
        assert_eq!(b, l);

        let ab = LInftyAlgebra::new(GradedSpace::from_basis([("u", 0), ("v", 1)]).unwrap());
        let h = homology(&ChainComplex::from_linfty(&ab).unwrap());
        assert!(induced_bracket(&ab, &h).unwrap().is_abelian());
        assert_eq!(
            induced_bracket(&heisenberg(), &h),
            Err(Error::ReportMismatch)
        );
    }

    #[test]
    fn ch_products() {
        let l = heisenberg();
        let (x, y) = (Element::basis(0), Element::basis(1));
        let z = ch_product(&l, &x, &y).unwrap();
        assert_eq!(
            z,
            Element::from_terms([(0, int(1)), (1, int(1)), (2, ratio(1, 2))])
        );
        let ab = LInftyAlgebra::new(GradedSpace::from_basis([("u", 0), ("v", 0)]).unwrap());
        let s = ch_product(&ab, &Element::basis(0), &Element::basis(1)).unwrap();
        assert_eq!(s, &Element::basis(0) + &Element::basis(1));

        let space = GradedSpace::from_basis([("e", 0), ("f", 0), ("h", 0)]).unwrap();
        let mut sl2 = LInftyAlgebra::new(space);
        sl2.set_bracket(&[0, 1], Element::basis(2)).unwrap();
        sl2.set_bracket(&[2, 0], Element::term(0, int(2))).unwrap();
        sl2.set_bracket(&[2, 1], Element::term(1, int(-2))).unwrap();
        assert_eq!(ch_product(&sl2, &x, &y), Err(Error::NotNilpotent));
    }

    #[test]
    fn dynkin_weight_three_terms() {
        // free nilpotent of class 3 on X, Y: Z = [X,Y], U = [X,Z], W = [Y,Z]
        let space =
            GradedSpace::from_basis([("X", 0), ("Y", 0), ("Z", 0), ("U", 0), ("W", 0)]).unwrap();
        let mut g = LInftyAlgebra::new(space);
        g.set_bracket(&[0, 1], Element::basis(2)).unwrap();
        g.set_bracket(&[0, 2], Element::basis(3)).unwrap();
        g.set_bracket(&[1, 2], Element::basis(4)).unwrap();
        let v = ch_product(&g, &Element::basis(0), &Element::basis(1)).unwrap();
        // X + Y + 1/2 Z + 1/12 [X,[X,Y]] + 1/12 [[X,Y],Y]
        let expected = Element::from_terms([
            (0, int(1)),
            (1, int(1)),
            (2, ratio(1, 2)),
            (3, ratio(1, 12)),
            (4, ratio(-1, 12)),
        ]);
        assert_eq!(v, expected);
    }

    fn cp_cohomology(n: u32) -> Presentation {
        Presentation::truncated_polynomial("x", 2, n).unwrap()
    }

    #[test]
    fn derivations_of_truncated_polynomials() {
        let p = cp_cohomology(2);
        assert!(derivations(&p, -2).unwrap().is_empty());
        let d0 = derivations(&p, 0).unwrap();
        assert_eq!(d0.len(), 1);
        let a = build_quotient(&p).unwrap();
        assert_eq!(d0[0].render(&a, &p.ring), "x·∂/∂x");
        let d2 = derivations(&p, 2).unwrap();
        assert_eq!(d2.len(), 1);
        assert_eq!(d2[0].render(&a, &p.ring), "x^2·∂/∂x");

        let free = Presentation::new([("x", 2)], 6).unwrap();
        let d = derivations(&free, -2).unwrap();
        assert_eq!(d.len(), 1);

        let odd = Presentation::new([("y", 3)], 6).unwrap();
        assert!(matches!(derivations(&odd, 0), Err(Error::NotF0(_))));
    }

    #[test]
    fn product_of_projective_lines() {
        let base = Presentation::new([("a", 2), ("b", 2)], 4).unwrap();
        let (a2, b2) = (
            base.ring.pow(&base.ring.gen(0), 2),
            base.ring.pow(&base.ring.gen(1), 2),
        );
        let p = base.relation(a2).relation(b2);
        for d in [-2, -4] {
            assert!(derivations(&p, d).unwrap().is_empty());
        }
        let r = halperin_check(&p).unwrap();
        assert!(r.holds);
        assert!(r.regular_sequence_assumed);
    }

    #[test]
    fn halperin_for_projective_spaces() {
        let r = halperin_check(&cp_cohomology(2)).unwrap();
        assert!(r.holds);
        assert_eq!(r.witness, None);
        let total: usize = r.degrees.values().map(|d| d.kernel_dim).sum();
        assert_eq!(total, 2);
        let positive: usize = r
            .degrees
            .iter()
            .filter(|(&n, _)| n > 0)
            .map(|(_, d)| d.kernel_dim)
            .sum();
        assert_eq!(positive, 0);
        assert_eq!(r.degrees[&-1].derivation_dim, 1);
        assert_eq!(r.degrees[&-3].derivation_dim, 1);

        assert!(halperin_check(&cp_cohomology(1)).unwrap().holds);

        let not_square = Presentation::new([("x", 2), ("y", 2)], 4).unwrap();
        let rel = not_square.ring.pow(&not_square.ring.gen(0), 2);
        assert!(matches!(
            halperin_check(&not_square.relation(rel)),
            Err(Error::NotF0(_))
        ));
    }
}
