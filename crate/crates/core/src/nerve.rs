//! Polynomial differential forms on simplices and Maurer-Cartan simplices.
//!
//! A form on the standard `n`-simplex is stored in reduced coordinates:
//! `t_0` and `dt_0` are eliminated through `t_0 = 1 - (t_1 + ... + t_n)`, so
//! every form has a unique expansion in the monomials `t^a dt_S`,
//! `S ⊆ {1..n}`. Faces and degeneracies are pullbacks along the coface and
//! codegeneracy maps, computed by substitution.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::Element;
use crate::linalg;
use crate::linfty::{bracket_eval, LInftyAlgebra, McElement};
use crate::scalar::{self, Scalar};

/// Exponents of `t_1..t_n` and the indices `S` (1-based, increasing) of
/// `dt_S`.
type FormKey = (Vec<u32>, Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyForm {
    n: usize,
    terms: BTreeMap<FormKey, Scalar>,
}

/// Sign of merging two increasing index lists, or `None` if they overlap.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut negative = false;
    for &y in b {
        if a.contains(&y) {
            return None;
        }
        if a.iter().filter(|&&x| x > y).count() % 2 == 1 {
            negative = !negative;
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, negative))
}

impl PolyForm {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        let mut f = Self::zero(n);
        f.add_term((vec![0; n], Vec::new()), c);
        f
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    /// The barycentric coordinate `t_i`, `0 <= i <= n`.
    pub fn coordinate(n: usize, i: usize) -> Result<Self> {
        if i > n {
            return Err(Error::InvalidIndex {
                index: i,
                dim: n + 1,
            });
        }
        if i == 0 {
            let mut f = Self::one(n);
            for j in 1..=n {
                f = &f - &Self::coordinate(n, j)?;
            }
            return Ok(f);
        }
        let mut e = vec![0; n];
        e[i - 1] = 1;
        let mut f = Self::zero(n);
        f.add_term((e, Vec::new()), Scalar::one());
        Ok(f)
    }

    /// `dt_i`, `0 <= i <= n`.
    pub fn dt(n: usize, i: usize) -> Result<Self> {
        Ok(Self::coordinate(n, i)?.d())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &Scalar)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: FormKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Form degrees that occur.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|(_, s)| s.len()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Splits into homogeneous pieces by form degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, PolyForm> {
        let mut out: BTreeMap<usize, PolyForm> = BTreeMap::new();
        for (k, v) in &self.terms {
            out.entry(k.1.len())
                .or_insert_with(|| Self::zero(self.n))
                .add_term(k.clone(), v.clone());
        }
        out
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(format!(
                "forms on simplices of dimension {} and {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for ((ea, sa), ca) in &self.terms {
            for ((eb, sb), cb) in &other.terms {
                if let Some((s, negative)) = merge_sign(sa, sb) {
                    let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                    let c = ca * cb;
                    out.add_term((e, s), if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// The de Rham differential.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((e, s), c) in &self.terms {
            for i in 0..self.n {
                if e[i] == 0 || s.contains(&(i + 1)) {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] -= 1;
                let (s2, negative) = merge_sign(&[i + 1], s).expect("disjoint");
                let v = c * Scalar::from_integer(e[i].into());
                out.add_term((e2, s2), if negative { -v } else { v });
            }
        }
        out
    }

    /// Pullback along the affine map sending `t_j` to `images[j - 1]`.
    fn pullback(&self, target: usize, images: &[PolyForm]) -> PolyForm {
        let differentials: Vec<PolyForm> = images.iter().map(PolyForm::d).collect();
        let mut out = PolyForm::zero(target);
        for ((e, s), c) in &self.terms {
            let mut acc = PolyForm::one(target);
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    acc = acc.wedge(&images[j]).expect("same dimension");
                }
            }
            for &j in s {
                acc = acc.wedge(&differentials[j - 1]).expect("same dimension");
            }
            for (k, v) in acc.terms {
                out.add_term(k, v * c);
            }
        }
        out
    }

    /// Restriction to the `i`-th face.
    pub fn face(&self, i: usize) -> Result<Self> {
        if self.n == 0 || i > self.n {
            return Err(Error::InvalidIndex {
                index: i,
                dim: self.n + 1,
            });
        }
        let m = self.n - 1;
        let images: Vec<PolyForm> = (1..=self.n)
            .map(|j| match j.cmp(&i) {
                std::cmp::Ordering::Less => PolyForm::coordinate(m, j),
                std::cmp::Ordering::Equal => Ok(PolyForm::zero(m)),
                std::cmp::Ordering::Greater => PolyForm::coordinate(m, j - 1),
            })
            .collect::<Result<_>>()?;
        Ok(self.pullback(m, &images))
    }

    /// Pullback along the `i`-th codegeneracy `Δ^{n+1} -> Δ^n`.
    pub fn degeneracy(&self, i: usize) -> Result<Self> {
        if i > self.n {
            return Err(Error::InvalidIndex {
                index: i,
                dim: self.n + 1,
            });
        }
        let m = self.n + 1;
        let images: Vec<PolyForm> = (1..=self.n)
            .map(|j| match j.cmp(&i) {
                std::cmp::Ordering::Less => PolyForm::coordinate(m, j),
                std::cmp::Ordering::Equal => {
                    Ok(&PolyForm::coordinate(m, j)? + &PolyForm::coordinate(m, j + 1)?)
                }
                std::cmp::Ordering::Greater => PolyForm::coordinate(m, j + 1),
            })
            .collect::<Result<_>>()?;
        Ok(self.pullback(m, &images))
    }
}

impl std::ops::Add for &PolyForm {
    type Output = PolyForm;
    fn add(self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.n, other.n, "forms on different simplices");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl std::ops::Sub for &PolyForm {
    type Output = PolyForm;
    fn sub(self, other: &PolyForm) -> PolyForm {
        self + &other.scale(&-Scalar::one())
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((e, s), c)) in self.terms.iter().enumerate() {
            let negative = c < &Scalar::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(format!("t{}", i + 1)),
                    _ => factors.push(format!("t{}^{}", i + 1, p)),
                }
            }
            factors.extend(s.iter().map(|j| format!("dt{j}")));
            if factors.is_empty() {
                write!(f, "{}", scalar::render(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", scalar::render(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `k! sum_j (-1)^j t_{i_j} dt_{i_0} ... (omit dt_{i_j}) ... dt_{i_k}`.
pub fn elementary_form(n: usize, indices: &[usize]) -> Result<PolyForm> {
    if indices.is_empty() {
        return Err(Error::Invalid(
            "elementary forms need at least one index".into(),
        ));
    }
    if indices.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Invalid(format!(
            "indices {indices:?} are not increasing"
        )));
    }
    if let Some(&i) = indices.iter().find(|&&i| i > n) {
        return Err(Error::InvalidIndex {
            index: i,
            dim: n + 1,
        });
    }
    let k = indices.len() - 1;
    let mut out = PolyForm::zero(n);
    for j in 0..=k {
        let mut term = PolyForm::coordinate(n, indices[j])?;
        for (p, &i) in indices.iter().enumerate() {
            if p != j {
                term = term.wedge(&PolyForm::dt(n, i)?)?;
            }
        }
        out = &out + &term.scale(&scalar::sign(j % 2 == 1));
    }
    Ok(out.scale(&scalar::factorial(k)))
}

/// The volume form `ω = ω_{0..n} = n! dt_1 ... dt_n`.
pub fn top_form(n: usize) -> PolyForm {
    elementary_form(n, &(0..=n).collect::<Vec<_>>()).expect("valid indices")
}

/// `ω` with the listed vertices omitted.
pub fn omitted_form(n: usize, omit: &[usize]) -> Result<PolyForm> {
    if let Some(&i) = omit.iter().find(|&&i| i > n) {
        return Err(Error::InvalidIndex {
            index: i,
            dim: n + 1,
        });
    }
    let indices: Vec<usize> = (0..=n).filter(|i| !omit.contains(i)).collect();
    elementary_form(n, &indices)
}

/// An element of `Ω_n ⊗ L`, with form factors written first.
#[derive(Debug, Clone, PartialEq)]
pub struct GSimplex {
    n: usize,
    terms: BTreeMap<usize, PolyForm>,
}

impl GSimplex {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The constant simplex on an element.
    pub fn constant(n: usize, e: &Element) -> Self {
        let mut s = Self::zero(n);
        s.add_tensor(&PolyForm::one(n), e);
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn component(&self, i: usize) -> Option<&PolyForm> {
        self.terms.get(&i)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &PolyForm)> {
        self.terms.iter().map(|(&i, f)| (i, f))
    }

    /// Adds `form ⊗ e`.
    pub fn add_tensor(&mut self, form: &PolyForm, e: &Element) {
        assert_eq!(form.n, self.n, "form on a different simplex");
        for (i, c) in e.terms() {
            let cur = self
                .terms
                .remove(&i)
                .unwrap_or_else(|| PolyForm::zero(self.n));
            let next = &cur + &form.scale(c);
            if !next.is_zero() {
                self.terms.insert(i, next);
            }
        }
    }

    pub fn with_tensor(mut self, form: &PolyForm, e: &Element) -> Self {
        self.add_tensor(form, e);
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&i, f) in &other.terms {
            out.add_tensor(f, &Element::basis(i));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (&i, f) in &self.terms {
            out.add_tensor(&f.scale(c), &Element::basis(i));
        }
        out
    }

    pub fn face(&self, i: usize) -> Result<Self> {
        let mut out = Self::zero(self.n.saturating_sub(1));
        for (&g, f) in &self.terms {
            out.add_tensor(&f.face(i)?, &Element::basis(g));
        }
        Ok(out)
    }

    /// Total degree `|g| - |form|`, if homogeneous.
    pub fn degree(&self, l: &LInftyAlgebra) -> Result<Option<i64>> {
        let mut found = None;
        for (&g, f) in &self.terms {
            for p in f.degrees() {
                let d = l.degree(g) - p as i64;
                match found {
                    None => found = Some(d),
                    Some(x) if x != d => return Err(Error::MixedDegree),
                    _ => {}
                }
            }
        }
        Ok(found)
    }

    pub fn render(&self, l: &LInftyAlgebra) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(&g, f)| format!("({f})⊗{}", l.name(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn pieces(&self) -> Vec<(usize, usize, PolyForm)> {
        self.terms
            .iter()
            .flat_map(|(&g, f)| {
                f.homogeneous_parts()
                    .into_iter()
                    .map(move |(p, part)| (g, p, part))
            })
            .collect()
    }
}

fn check_degree(l: &LInftyAlgebra, s: &GSimplex) -> Result<()> {
    l.space()
        .check_index(s.terms.keys().copied().max().unwrap_or(0))
        .or_else(|e| if s.is_zero() { Ok(()) } else { Err(e) })?;
    match s.degree(l)? {
        None | Some(-1) => Ok(()),
        Some(d) => Err(Error::DegreeMismatch {
            expected: -1,
            found: d,
        }),
    }
}

/// `(d + δ) s + sum_{k>=2} 1/k! [s, ..., s]` in `Ω_n ⊗ L`, with
/// `[ω_1⊗g_1, ..., ω_k⊗g_k] = (-1)^{sum_{i<j} |g_i||ω_j|} ω_1...ω_k ⊗ [g_1, ..., g_k]`.
pub fn simplex_curvature(l: &LInftyAlgebra, s: &GSimplex) -> Result<GSimplex> {
    check_degree(l, s)?;
    let pieces = s.pieces();
    let mut out = GSimplex::zero(s.n);
    for (g, p, f) in &pieces {
        out.add_tensor(&f.d(), &Element::basis(*g));
        out.add_tensor(&f.scale(&scalar::sign(p % 2 == 1)), &l.differential(*g));
    }
    for k in 2..=l.max_arity() {
        let weight = Scalar::one() / scalar::factorial(k);
        let mut choice = vec![0usize; k];
        'outer: loop {
            let mut form = PolyForm::one(s.n);
            let mut negative = false;
            let mut args = Vec::with_capacity(k);
            let mut ok = true;
            for (pos, &c) in choice.iter().enumerate() {
                let (g, p, f) = &pieces[c];
                for &prev in &choice[..pos] {
                    if (l.degree(pieces[prev].0) * *p as i64).rem_euclid(2) == 1 {
                        negative = !negative;
                    }
                }
                form = form.wedge(f)?;
                if form.is_zero() {
                    ok = false;
                    break;
                }
                args.push(*g);
            }
            if ok {
                let v = l.bracket_basis(&args)?;
                if !v.is_zero() {
                    out.add_tensor(&form.scale(&(scalar::sign(negative) * &weight)), &v);
                }
            }
            let mut p = 0;
            loop {
                if p == k {
                    break 'outer;
                }
                choice[p] += 1;
                if choice[p] < pieces.len() {
                    break;
                }
                choice[p] = 0;
                p += 1;
            }
            if pieces.is_empty() {
                break;
            }
        }
    }
    Ok(out)
}

pub fn mc_simplex_check(l: &LInftyAlgebra, s: &GSimplex) -> Result<bool> {
    Ok(simplex_curvature(l, s)?.is_zero())
}

/// `δ_τ x = sum_k 1/k! [τ^k, x]`.
pub fn twisted_differential(l: &LInftyAlgebra, tau: &Element, x: &Element) -> Result<Element> {
    let mut out = Element::zero();
    for k in 0..l.max_arity() {
        let mut args = vec![tau.clone(); k];
        args.push(x.clone());
        let v = bracket_eval(l, &args)?;
        out.add_scaled(&v, &(Scalar::one() / scalar::factorial(k)));
    }
    Ok(out)
}

/// `(d + δ_τ)` on `Ω_n ⊗ L`.
pub fn twisted_total_differential(
    l: &LInftyAlgebra,
    tau: &Element,
    s: &GSimplex,
) -> Result<GSimplex> {
    let mut out = GSimplex::zero(s.n);
    for (g, p, f) in s.pieces() {
        out.add_tensor(&f.d(), &Element::basis(g));
        let dg = twisted_differential(l, tau, &Element::basis(g))?;
        out.add_tensor(&f.scale(&scalar::sign(p % 2 == 1)), &dg);
    }
    Ok(out)
}

fn require_twisted_cycle(l: &LInftyAlgebra, tau: &Element, alpha: &Element) -> Result<i64> {
    let n = l
        .space()
        .degree_of(alpha)?
        .ok_or_else(|| Error::Invalid("the cycle must be nonzero".into()))?;
    if !twisted_differential(l, tau, alpha)?.is_zero() {
        return Err(Error::NotACycle(l.render(alpha)));
    }
    Ok(n)
}

fn faces_are(s: &GSimplex, expected: &[GSimplex]) -> Result<bool> {
    for (i, e) in expected.iter().enumerate() {
        if &s.face(i)? != e {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The simplex `τ + α⊗ω^{n+1}` in `Ω_{n+1} ⊗ L` for a `δ_τ`-cycle `α` of
/// degree `n`. All its faces are the constant simplex `τ`.
pub fn b_simplex(l: &LInftyAlgebra, tau: &McElement, alpha: &Element) -> Result<GSimplex> {
    let n = require_twisted_cycle(l, tau.value(), alpha)?;
    if n < 0 {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: n,
        });
    }
    let dim = n as usize + 1;
    let s = GSimplex::constant(dim, tau.value()).with_tensor(&top_form(dim), alpha);
    let constant = GSimplex::constant(dim - 1, tau.value());
    if !mc_simplex_check(l, &s)? || !faces_are(&s, &vec![constant; dim + 1])? {
        return Err(Error::Invalid("b-simplex failed its postcondition".into()));
    }
    Ok(s)
}

/// Coordinates of `target` in the span of `forms`.
fn form_coordinates(forms: &[PolyForm], target: &PolyForm) -> Option<Vec<Scalar>> {
    let mut keys: Vec<&FormKey> = target.terms.keys().collect();
    for f in forms {
        keys.extend(f.terms.keys());
    }
    keys.sort();
    keys.dedup();
    let dense = |f: &PolyForm| -> Vec<Scalar> {
        keys.iter()
            .map(|k| f.terms.get(*k).cloned().unwrap_or_else(Scalar::zero))
            .collect()
    };
    let vectors: Vec<Vec<Scalar>> = forms.iter().map(dense).collect();
    linalg::coordinates(&vectors, keys.len(), &dense(target))
}

/// A simplex certifying that `B[δ_τ χ]` is trivial: an MC simplex of
/// dimension `n + 2` (`n = |χ| - 1 >= 1`) whose zeroth face is
/// `τ + α⊗ω` for the returned `α = δ_τ χ` (up to the returned rescaling of
/// `χ`) and whose other faces are the constant `τ`.
pub fn boundary_witness(
    l: &LInftyAlgebra,
    tau: &McElement,
    chi: &Element,
) -> Result<(GSimplex, Element)> {
    let t = tau.value();
    let m = l
        .space()
        .degree_of(chi)?
        .ok_or_else(|| Error::Invalid("χ must be nonzero".into()))?;
    let n = m - 1;
    if n < 1 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: m,
        });
    }
    let alpha = twisted_differential(l, t, chi)?;
    let big = n as usize + 2;
    let omit2 = omitted_form(big, &[2])?;
    let omit02 = omitted_form(big, &[0, 2])?;
    let omit0 = omitted_form(big, &[0])?;
    let coords = form_coordinates(&[omit0.clone(), omit2.clone()], &omit02.d())
        .ok_or_else(|| Error::Invalid("unexpected elementary form differential".into()))?;
    let (a, b) = (coords[0].clone(), coords[1].clone());
    if b.is_zero() || a.is_zero() {
        return Err(Error::Invalid(
            "unexpected elementary form differential".into(),
        ));
    }
    let c = -scalar::sign((n + 1) % 2 == 1) / &b;
    let eta = GSimplex::zero(big)
        .with_tensor(&omit2, chi)
        .with_tensor(&omit02.scale(&c), &alpha);
    let lambda = twisted_total_differential(l, t, &eta)?.scale(&(Scalar::one() / (&c * &a)));
    let s = GSimplex::constant(big, t).add(&lambda);
    Ok((s, alpha))
}

/// `τ + ω_{0̂}⊗α + ω_{1̂}⊗(α+β) + ω_{2̂}⊗β` for `δ_τ`-cycles of degree
/// `n >= 1`; its first three faces are `τ + α⊗ω`, `τ + (α+β)⊗ω`,
/// `τ + β⊗ω`.
pub fn sum_witness(
    l: &LInftyAlgebra,
    tau: &McElement,
    alpha: &Element,
    beta: &Element,
) -> Result<GSimplex> {
    let n = require_twisted_cycle(l, tau.value(), alpha)?;
    let nb = require_twisted_cycle(l, tau.value(), beta)?;
    if n != nb || n < 1 {
        return Err(Error::DegreeMismatch {
            expected: n.max(1),
            found: nb,
        });
    }
    let big = n as usize + 2;
    let sum = alpha + beta;
    Ok(GSimplex::constant(big, tau.value())
        .with_tensor(&omitted_form(big, &[0])?, alpha)
        .with_tensor(&omitted_form(big, &[1])?, &sum)
        .with_tensor(&omitted_form(big, &[2])?, beta))
}

/// True iff `path` is an MC simplex of `Ω_1 ⊗ L` from `tau0` to `tau1`.
pub fn verify_mc_path(l: &LInftyAlgebra, tau0: &Element, tau1: &Element, path: &GSimplex) -> bool {
    if path.n != 1 {
        return false;
    }
    let ok = || -> Result<bool> {
        Ok(mc_simplex_check(l, path)?
            && path.face(0)? == GSimplex::constant(0, tau1)
            && path.face(1)? == GSimplex::constant(0, tau0))
    };
    ok().unwrap_or(false)
}

/// Dimension of the space of MC `n`-simplices with all faces zero, spanned
/// by elementary forms, modulo those of the form `(d + δ) η` with `η`
/// relative to the boundary. For abelian `L` this is `dim H_{n-1}(L)`.
pub fn normalized_simplex_dimension(l: &LInftyAlgebra, n: usize) -> Result<usize> {
    if !l.is_abelian() {
        return Err(Error::Invalid(
            "normalized simplices are linear only for abelian algebras".into(),
        ));
    }
    let mut forms = Vec::new();
    for mask in 1u32..(1 << (n + 1)) {
        let idx: Vec<usize> = (0..=n).filter(|i| mask & (1 << i) != 0).collect();
        forms.push((idx.len() - 1, elementary_form(n, &idx)?));
    }
    // relative elements of total degree `deg`, as a basis of simplices
    let relative = |deg: i64| -> Result<Vec<GSimplex>> {
        let mut basis = Vec::new();
        for (p, f) in &forms {
            for g in l.space().indices_in_degree(deg + *p as i64) {
                basis.push(GSimplex::zero(n).with_tensor(f, &Element::basis(g)));
            }
        }
        if n == 0 {
            return Ok(basis);
        }
        let flat: Vec<Vec<GSimplex>> = basis
            .iter()
            .map(|s| (0..=n).map(|i| s.face(i)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let (keys, rows) = flatten(&flat.iter().map(|fs| fs.as_slice()).collect::<Vec<_>>());
        let kernel = if keys == 0 {
            (0..basis.len())
                .map(|k| {
                    let mut v = vec![Scalar::zero(); basis.len()];
                    v[k] = Scalar::one();
                    v
                })
                .collect()
        } else {
            linalg::kernel(&linalg::transpose(&rows, keys), basis.len())
        };
        Ok(kernel
            .into_iter()
            .map(|v| {
                basis
                    .iter()
                    .zip(v)
                    .fold(GSimplex::zero(n), |acc, (s, c)| acc.add(&s.scale(&c)))
            })
            .collect())
    };
    let zero = Element::zero();
    let candidates = relative(-1)?;
    let images: Vec<Vec<GSimplex>> = candidates
        .iter()
        .map(|s| Ok(vec![twisted_total_differential(l, &zero, s)?]))
        .collect::<Result<_>>()?;
    let (keys, rows) = flatten(&images.iter().map(|v| v.as_slice()).collect::<Vec<_>>());
    let cycles = if keys == 0 {
        candidates.len()
    } else {
        linalg::kernel(&linalg::transpose(&rows, keys), candidates.len()).len()
    };
    let boundaries: Vec<Vec<GSimplex>> = relative(0)?
        .iter()
        .map(|s| Ok(vec![twisted_total_differential(l, &zero, s)?]))
        .collect::<Result<_>>()?;
    let (keys, rows) = flatten(&boundaries.iter().map(|v| v.as_slice()).collect::<Vec<_>>());
    let rank = if keys == 0 {
        0
    } else {
        linalg::rank(&rows, keys)
    };
    Ok(cycles - rank)
}

/// Dense coordinates of lists of simplices over the union of their terms.
fn flatten(items: &[&[GSimplex]]) -> (usize, Vec<Vec<Scalar>>) {
    let mut keys: Vec<(usize, usize, FormKey)> = Vec::new();
    for list in items {
        for (pos, s) in list.iter().enumerate() {
            for (g, f) in s.components() {
                for (k, _) in f.terms() {
                    keys.push((pos, g, k.clone()));
                }
            }
        }
    }
    keys.sort();
    keys.dedup();
    let index: BTreeMap<&(usize, usize, FormKey), usize> =
        keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let rows = items
        .iter()
        .map(|list| {
            let mut v = vec![Scalar::zero(); keys.len()];
            for (pos, s) in list.iter().enumerate() {
                for (g, f) in s.components() {
                    for (k, c) in f.terms() {
                        v[index[&(pos, g, k.clone())]] = c.clone();
                    }
                }
            }
            v
        })
        .collect();
    (keys.len(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedSpace;
    use crate::scalar::int;

    #[test]
    fn basic_forms() {
        let t1 = PolyForm::coordinate(2, 1).unwrap();
        let dt1 = PolyForm::dt(2, 1).unwrap();
        assert_eq!(t1.d(), dt1);
        assert!(dt1.d().is_zero());
        assert!(dt1.wedge(&dt1).unwrap().is_zero());
        assert_eq!(dt1.to_string(), "dt1");
        let dt0 = PolyForm::dt(2, 0).unwrap();
        assert_eq!(dt0.to_string(), "-dt1 - dt2");
        let f = t1.wedge(&t1).unwrap().scale(&int(2)).wedge(&dt1).unwrap();
        assert_eq!(f.to_string(), "2*t1^2*dt1");
        assert!(PolyForm::coordinate(2, 3).is_err());
    }

    #[test]
    fn elementary_forms() {
        assert_eq!(
            elementary_form(1, &[0, 1]).unwrap(),
            PolyForm::dt(1, 1).unwrap()
        );
        for n in 1..=4 {
            let mut vol = PolyForm::one(n);
            for i in 1..=n {
                vol = vol.wedge(&PolyForm::dt(n, i).unwrap()).unwrap();
            }
            assert_eq!(top_form(n), vol.scale(&scalar::factorial(n)));
        }
        assert!(elementary_form(2, &[1, 0]).is_err());
        assert!(elementary_form(2, &[0, 3]).is_err());
    }

    #[test]
    fn face_examples() {
        let w = elementary_form(2, &[1, 2]).unwrap();
        assert_eq!(w.face(0).unwrap(), top_form(1));
        assert!(w.face(1).unwrap().is_zero());
        assert!(w.face(3).is_err());
    }

    #[test]
    fn constant_and_top_form_simplices() {
        let space = GradedSpace::from_basis([("a", 1), ("b", 2)]).unwrap();
        let mut l = LInftyAlgebra::new(space);
        l.set_bracket(&[0, 0], Element::basis(1)).unwrap();
        let tau = McElement::zero();
        let s = b_simplex(&l, &tau, &Element::basis(1)).unwrap();
        assert_eq!(s.dim(), 3);
        assert!(mc_simplex_check(&l, &s).unwrap());
        // f⊗a with f = dt1 dt2 + dt3 dt4: [f⊗a, f⊗a] = f∧f ⊗ b ≠ 0
        let dt = |i| PolyForm::dt(4, i).unwrap();
        let f = &dt(1).wedge(&dt(2)).unwrap() + &dt(3).wedge(&dt(4)).unwrap();
        let not_mc = GSimplex::zero(4).with_tensor(&f, &Element::basis(0));
        assert!(!mc_simplex_check(&l, &not_mc).unwrap());
        let single =
            GSimplex::zero(4).with_tensor(&dt(1).wedge(&dt(2)).unwrap(), &Element::basis(0));
        assert!(mc_simplex_check(&l, &single).unwrap());
        let wrong = GSimplex::constant(1, &Element::basis(0));
        assert!(matches!(
            mc_simplex_check(&l, &wrong),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn paths_in_abelian_algebras() {
        // δ u = v, with u of degree 0 and v of degree -1
        let space = GradedSpace::from_basis([("u", 0), ("v", -1)]).unwrap();
        let mut l = LInftyAlgebra::new(space);
        l.set_bracket(&[0], Element::basis(1)).unwrap();
        let tau0 = Element::zero();
        let tau1 = Element::basis(1);
        let t1 = PolyForm::coordinate(1, 1).unwrap();
        let dt1 = PolyForm::dt(1, 1).unwrap();
        // t1⊗v + dt1⊗u: d(t1) v - dt1 δu = 0
        let path = GSimplex::zero(1)
            .with_tensor(&t1, &tau1)
            .with_tensor(&dt1, &Element::basis(0));
        assert!(verify_mc_path(&l, &tau0, &tau1, &path));
        assert!(!verify_mc_path(&l, &tau1, &tau0, &path));
        let bad = GSimplex::zero(1)
            .with_tensor(&t1, &tau1)
            .with_tensor(&dt1, &Element::term(0, int(2)));
        assert!(!verify_mc_path(&l, &tau0, &tau1, &bad));
        assert!(verify_mc_path(
            &l,
            &tau1,
            &tau1,
            &GSimplex::constant(1, &tau1)
        ));
    }

    #[test]
    fn dold_kan_dimensions() {
        // δ: a (1) -> b (0), plus free c (0), d (1), e (2)
        let space =
            GradedSpace::from_basis([("a", 1), ("b", 0), ("c", 0), ("d", 1), ("e", 2)]).unwrap();
        let mut l = LInftyAlgebra::new(space);
        l.set_bracket(&[0], Element::basis(1)).unwrap();
        assert_eq!(normalized_simplex_dimension(&l, 1).unwrap(), 1);
        assert_eq!(normalized_simplex_dimension(&l, 2).unwrap(), 1);
        assert_eq!(normalized_simplex_dimension(&l, 3).unwrap(), 1);
    }
}
