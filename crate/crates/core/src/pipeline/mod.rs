//! Model files, the mapping-space driver and the built-in example corpus.
//!
//! A model file names a cdga `A`, an L-infinity algebra `L` and
//! Maurer-Cartan elements of `A (x) L`. The driver twists by one of them and
//! reads off rational homotopy groups, the Lie and Campbell-Hausdorff
//! structure on `H_0`, and a Sullivan model of the component.

mod builtin;
mod parse;
mod report;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::cdga::{build_quotient, check_cdga, Cdga, Presentation};
use crate::error::{Error, Result, Violation};
use crate::graded::{Element, GradedSpace};
use crate::linfty::{check_linfty, curvature, tensor, LInftyAlgebra};
use crate::nerve::{verify_mc_path, GSimplex, PolyForm};
use crate::poly::{Poly, PolyRing};
use crate::scalar;

pub use builtin::{
    builtin, corpus, cp_inclusion, em_target, f0_aut, Builtin, TRUNCATED_CUBE, TWO_SPHERES,
};
pub use parse::{
    parse, parse_cdga, BracketDecl, CdgaDecl, ElementDecl, Expr, Factor, GenDecl, LinfDecl,
    ModelSpec, ParseError, Pos, Term, FORM_SYMBOLS,
};
pub use report::{
    map_model, pi_summary, ChSample, MapOptions, MappingSpaceReport, McReport, SullivanReport,
};

/// A model file resolved into algebraic objects.
#[derive(Debug, Clone)]
pub struct Model {
    pub presentation: Option<Presentation>,
    pub cdga: Cdga,
    pub linf: LInftyAlgebra,
    /// `A (x) L`.
    pub tensor: LInftyAlgebra,
    pub mcs: BTreeMap<String, Element>,
    pub paths: BTreeMap<String, GSimplex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Form,
    Cdga,
    Linf,
}

fn default_cap(decl: &CdgaDecl, ring: &PolyRing, relations: &[Poly]) -> Result<i64> {
    let mut cap = decl.gens.iter().map(|g| g.degree).max().unwrap_or(0);
    let mut rel_sum = 0;
    for r in relations {
        let d = ring.degree(r)?.unwrap_or(0);
        cap = cap.max(d);
        rel_sum += d;
    }
    let even = decl.gens.iter().all(|g| g.degree % 2 == 0);
    if even && !relations.is_empty() && relations.len() == decl.gens.len() {
        let gen_sum: i64 = decl.gens.iter().map(|g| g.degree).sum();
        cap = cap.max(rel_sum - gen_sum);
    }
    Ok(cap)
}

fn ring_poly(ring: &PolyRing, e: &Expr) -> Result<Poly> {
    let mut out = Poly::zero();
    for t in &e.terms {
        let mut p = ring.constant(t.coeff.clone());
        for f in &t.factors {
            let i = ring
                .lookup(&f.name)
                .ok_or_else(|| Error::UnknownName(f.name.clone()))?;
            p = ring.mul(&p, &ring.pow(&ring.gen(i), f.power));
        }
        out = out.add(&p);
    }
    Ok(out)
}

/// Builds the presentation declared by a cdga block.
pub fn presentation(decl: &CdgaDecl) -> Result<Presentation> {
    let ring = PolyRing::new(decl.gens.iter().map(|g| (g.name.clone(), g.degree)))?;
    let relations = decl
        .relations
        .iter()
        .map(|r| ring_poly(&ring, r))
        .collect::<Result<Vec<_>>>()?;
    let cap = match decl.cap {
        Some(c) => c,
        None => default_cap(decl, &ring, &relations)?,
    };
    let mut p = Presentation::new(decl.gens.iter().map(|g| (g.name.clone(), g.degree)), cap)?;
    for r in relations {
        p = p.relation(r);
    }
    for (g, e) in &decl.differentials {
        let i = ring
            .lookup(g)
            .ok_or_else(|| Error::UnknownName(g.clone()))?;
        let d = ring_poly(&ring, e)?;
        p = p.with_differential(i, d);
    }
    Ok(p)
}

/// Builds the L-infinity algebra declared by a linf block.
pub fn linf_algebra(decl: &LinfDecl) -> Result<LInftyAlgebra> {
    let space = GradedSpace::from_basis(decl.gens.iter().map(|g| (g.name.clone(), g.degree)))?;
    let mut l = LInftyAlgebra::new(space);
    for b in &decl.brackets {
        let args = b
            .args
            .iter()
            .map(|a| l.space().require(a))
            .collect::<Result<Vec<_>>>()?;
        let mut value = Element::zero();
        for t in &b.value.terms {
            if t.coeff.is_zero() {
                continue;
            }
            match t.factors.as_slice() {
                [f] if f.power == 1 => value.add_term(l.space().require(&f.name)?, t.coeff.clone()),
                _ => {
                    return Err(Error::Invalid(format!(
                        "bracket [{}] must be linear in the generators",
                        b.args.join(",")
                    )))
                }
            }
        }
        if l.table(args.len()).any(|(k, _)| {
            let mut s = args.clone();
            s.sort_unstable();
            let mut k = k.clone();
            k.sort_unstable();
            k == s
        }) {
            return Err(Error::Invalid(format!(
                "bracket [{}] is declared twice",
                b.args.join(",")
            )));
        }
        l.set_bracket(&args, value)?;
    }
    Ok(l)
}

impl Model {
    pub fn build(spec: &ModelSpec) -> Result<Self> {
        let (presentation, cdga) = match &spec.cdga {
            Some(decl) => {
                let p = presentation(decl)?;
                let a = build_quotient(&p)?;
                (Some(p), a)
            }
            None => (None, Cdga::ground()),
        };
        let linf = linf_algebra(&spec.linf)?;
        let tensor = tensor(&cdga, &linf)?;
        let mut model = Model {
            presentation,
            cdga,
            linf,
            tensor,
            mcs: BTreeMap::new(),
            paths: BTreeMap::new(),
        };
        for m in &spec.mcs {
            let v = model.resolve(&m.value, false)?;
            let e = constant_part(&v);
            match model.tensor.space().degree_of(&e)? {
                None | Some(-1) => {}
                Some(d) => {
                    return Err(Error::DegreeMismatch {
                        expected: -1,
                        found: d,
                    })
                }
            }
            model.mcs.insert(m.name.clone(), e);
        }
        for p in &spec.paths {
            let s = model.resolve(&p.value, true)?;
            model.paths.insert(p.name.clone(), s);
        }
        Ok(model)
    }

    fn cdga_element(&self, factors: &[&Factor]) -> Result<Element> {
        let Some(p) = &self.presentation else {
            return Ok(Element::basis(self.cdga.unit()));
        };
        let ring = &p.ring;
        let mut poly = ring.one();
        for f in factors {
            let i = ring
                .lookup(&f.name)
                .ok_or_else(|| Error::UnknownName(f.name.clone()))?;
            poly = ring.mul(&poly, &ring.pow(&ring.gen(i), f.power));
        }
        self.cdga.eval(&poly)
    }

    /// Resolves an expression into `Omega_n (x) A (x) L`, reordering each
    /// term into forms, cdga factors, and one L generator, with Koszul signs.
    fn resolve(&self, e: &Expr, forms: bool) -> Result<GSimplex> {
        let n = usize::from(forms);
        let nl = self.linf.dim();
        let mut out = GSimplex::zero(n);
        for t in &e.terms {
            if t.coeff.is_zero() {
                continue;
            }
            let mut items: Vec<(Kind, bool, &Factor)> = Vec::new();
            for f in &t.factors {
                let (kind, odd) = if let Some(y) = self.linf.space().lookup(&f.name) {
                    (Kind::Linf, self.linf.degree(y).rem_euclid(2) == 1)
                } else if forms && FORM_SYMBOLS.contains(&f.name.as_str()) {
                    (Kind::Form, f.name.starts_with("dt") && f.power % 2 == 1)
                } else {
                    let d = self
                        .presentation
                        .as_ref()
                        .and_then(|p| p.ring.lookup(&f.name).map(|i| p.ring.degree_of_gen(i)))
                        .ok_or_else(|| Error::UnknownName(f.name.clone()))?;
                    (Kind::Cdga, (d * f.power as i64).rem_euclid(2) == 1)
                };
                items.push((kind, odd, f));
            }
            let rank = |k: Kind| match k {
                Kind::Form => 0,
                Kind::Cdga => 1,
                Kind::Linf => 2,
            };
            let mut negative = false;
            for i in 0..items.len() {
                for j in i + 1..items.len() {
                    if rank(items[i].0) > rank(items[j].0) && items[i].1 && items[j].1 {
                        negative = !negative;
                    }
                }
            }
            items.sort_by_key(|x| rank(x.0));
            let linf: Vec<&Factor> = items
                .iter()
                .filter(|x| x.0 == Kind::Linf)
                .map(|x| x.2)
                .collect();
            let y = match linf.as_slice() {
                [f] if f.power == 1 => self.linf.space().require(&f.name)?,
                _ => {
                    return Err(Error::Invalid(format!(
                    "each term needs exactly one L-infinity generator (near line {}, column {})",
                    e.pos.line, e.pos.column
                )))
                }
            };
            let mut form = PolyForm::one(n);
            for x in items.iter().filter(|x| x.0 == Kind::Form) {
                let f = x.2;
                let i = usize::from(f.name.ends_with('1'));
                let base = if f.name.starts_with("dt") {
                    PolyForm::dt(1, i)?
                } else {
                    PolyForm::coordinate(1, i)?
                };
                for _ in 0..f.power {
                    form = form.wedge(&base)?;
                }
            }
            let cdga: Vec<&Factor> = items
                .iter()
                .filter(|x| x.0 == Kind::Cdga)
                .map(|x| x.2)
                .collect();
            let a = self.cdga_element(&cdga)?;
            let coeff = &t.coeff * scalar::sign(negative);
            let value = Element::from_terms(a.terms().map(|(x, c)| (x * nl + y, c * &coeff)));
            out.add_tensor(&form, &value);
        }
        Ok(out)
    }

    pub fn mc(&self, name: &str) -> Result<&Element> {
        self.mcs
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn path(&self, name: &str) -> Result<&GSimplex> {
        self.paths
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Checks that `path` runs from `from` to `to` through MC elements.
    pub fn verify_path(&self, from: &str, to: &str, path: &str) -> Result<bool> {
        Ok(verify_mc_path(
            &self.tensor,
            self.mc(from)?,
            self.mc(to)?,
            self.path(path)?,
        ))
    }
}

/// Outcome of checking every axiom a model file relies on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub cdga: Vec<Violation>,
    pub linfty: Vec<Violation>,
    /// Curvature of each declared MC element, rendered; `"0"` when MC.
    pub curvatures: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.cdga.is_empty() && self.linfty.is_empty() && self.curvatures.values().all(|c| c == "0")
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out: Vec<Violation> = self.cdga.iter().chain(&self.linfty).cloned().collect();
        for (name, c) in &self.curvatures {
            if c != "0" {
                out.push(Violation::new(
                    "Maurer-Cartan",
                    vec![name.clone(), c.clone()],
                ));
            }
        }
        out
    }
}

pub fn check(model: &Model) -> Result<CheckReport> {
    let mut curvatures = BTreeMap::new();
    for (name, tau) in &model.mcs {
        let f = curvature(&model.tensor, tau)?;
        curvatures.insert(name.clone(), model.tensor.render(&f));
    }
    Ok(CheckReport {
        cdga: check_cdga(&model.cdga),
        linfty: check_linfty(&model.linf),
        curvatures,
    })
}

/// Renders an L-infinity algebra as a `linf` block.
pub fn linf_block(name: &str, l: &LInftyAlgebra) -> String {
    let mut out = format!("algebra linf {name} {{\n");
    for i in 0..l.dim() {
        out.push_str(&format!("  gen {} : {};\n", l.name(i), l.degree(i)));
    }
    for (_, key, value) in l.entries() {
        let args: Vec<&str> = key.iter().map(|&k| l.name(k)).collect();
        out.push_str(&format!(
            "  bracket [{}] = {};\n",
            args.join(","),
            l.render(value)
        ));
    }
    out.push_str("}\n");
    out
}

/// Renders a presentation as a `cdga` block.
pub fn cdga_block(name: &str, p: &Presentation) -> String {
    let ring = &p.ring;
    let mut out = format!("algebra cdga {name} {{\n");
    for i in 0..ring.len() {
        out.push_str(&format!(
            "  gen {} : {};\n",
            ring.name(i),
            ring.degree_of_gen(i)
        ));
    }
    for r in &p.relations {
        out.push_str(&format!("  rel {};\n", ring.render(r)));
    }
    for (i, d) in p.differential.iter().enumerate() {
        if !d.is_zero() {
            out.push_str(&format!("  d {} = {};\n", ring.name(i), ring.render(d)));
        }
    }
    out.push_str(&format!("  cap {};\n}}\n", p.cap));
    out
}

/// The element underlying a simplex on the point.
fn constant_part(v: &GSimplex) -> Element {
    let mut e = Element::zero();
    for (i, f) in v.components() {
        for (_, c) in f.terms() {
            e.add_term(i, c.clone());
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    const CP12: &str = "
        algebra cdga A { gen x : 2; rel x^2; cap 4; }
        algebra linf L { gen alpha : 1; gen beta : 4; bracket [alpha,alpha,alpha] = 6 beta; }
        mc tau = x*alpha;
        mc zero = 0 alpha;
    ";

    #[test]
    fn builds_the_projective_model() {
        let m = Model::build(&parse(CP12).unwrap()).unwrap();
        assert_eq!(m.tensor.dim(), 4);
        let tau = m.mc("tau").unwrap();
        assert_eq!(m.tensor.render(tau), "x⊗alpha");
        assert!(m.mc("zero").unwrap().is_zero());
        let r = check(&m).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(
            m.linf.bracket_basis(&[0, 0, 0]).unwrap(),
            Element::term(1, int(6))
        );
    }

    #[test]
    fn koszul_reordering() {
        let text = "
            algebra cdga A { gen y : 3; cap 3; }
            algebra linf L { gen e : 1; gen f : 2; }
            path a = e*y;
            path b = y*e;
            path c = y*dt1*e;
            path d = dt1*y*e;
            path g = f*dt1*y;
        ";
        let m = Model::build(&parse(text).unwrap()).unwrap();
        let p = |n: &str| m.path(n).unwrap().clone();
        assert_eq!(p("a"), p("b").scale(&int(-1)));
        assert_eq!(p("c"), p("d").scale(&int(-1)));
        assert_eq!(p("g").render(&m.tensor), "(dt1)⊗y⊗f");
    }

    #[test]
    fn validation_errors() {
        let wrong_degree = "algebra linf L { gen a : 0; } mc t = a;";
        assert!(matches!(
            Model::build(&parse(wrong_degree).unwrap()),
            Err(Error::DegreeMismatch {
                expected: -1,
                found: 0
            })
        ));
        let nonlinear = "algebra linf L { gen a : -1; gen b : -2; bracket [a,a] = b^2; }";
        assert!(Model::build(&parse(nonlinear).unwrap()).is_err());
        let twice =
            "algebra linf L { gen a : -1; gen b : -2; bracket [a,a] = b; bracket [a,a] = b; }";
        assert!(Model::build(&parse(twice).unwrap()).is_err());
        let not_mc = "algebra linf L { gen a : -1; gen b : -2; bracket [a,a] = b; } mc t = a;";
        let m = Model::build(&parse(not_mc).unwrap()).unwrap();
        let r = check(&m).unwrap();
        assert!(!r.ok());
        assert_eq!(r.curvatures["t"], "1/2*b");
    }

    #[test]
    fn default_cap_covers_the_socle() {
        let s =
            parse("algebra cdga A { gen x : 2; rel x^3; } algebra linf L { gen a : 1; }").unwrap();
        let p = presentation(s.cdga.as_ref().unwrap()).unwrap();
        assert_eq!(p.cap, 6);
        assert_eq!(build_quotient(&p).unwrap().dim(), 3);
    }

    #[test]
    fn paths() {
        // L abelian, delta u = v; t1 v + dt1 u runs from 0 to v
        let text = "
            algebra linf L { gen v : -1; gen u : 0; bracket [u] = v; }
            mc zero = 0 v;
            mc end = v;
            path p = t1 v + dt1 u;
            path bad = t1 v;
        ";
        let m = Model::build(&parse(text).unwrap()).unwrap();
        assert!(m.verify_path("zero", "end", "p").unwrap());
        assert!(!m.verify_path("zero", "end", "bad").unwrap());
        assert!(!m.verify_path("end", "zero", "p").unwrap());
        assert!(m.verify_path("zero", "end", "nope").is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let s = parse(CP12).unwrap();
        let m = Model::build(&s).unwrap();
        let text = format!(
            "{}{}",
            cdga_block("A", m.presentation.as_ref().unwrap()),
            linf_block("L", &m.linf)
        );
        let again = Model::build(&parse(&text).unwrap()).unwrap();
        assert_eq!(again.linf, m.linf);
        assert_eq!(again.presentation, m.presentation);
    }
}
