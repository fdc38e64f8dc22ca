//! The mapping-space driver and its report.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use super::Model;
use crate::ce::{
    ce_construct, minimal_model, minimality_check, SullivanJson, SullivanPresentation,
};
use crate::error::Result;
use crate::graded::Element;
use crate::homalg::{ch_product, degree_zero_part, homology, induced_bracket, ChainComplex};
use crate::linfty::{lcs_filtration, truncate, twist, LInftyAlgebra, McElement};

pub const SCHEMA: &str = "linfty.mapping-space/1";

/// How many Campbell-Hausdorff products to sample on `H_0`.
const CH_SAMPLES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MapOptions {
    /// Highest homological degree reported; defaults to twice the top
    /// degree of `A (x) L`, plus two.
    pub max_degree: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McReport {
    pub name: String,
    pub value: String,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChSample {
    pub left: String,
    pub right: String,
    pub product: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SullivanReport {
    pub text: String,
    pub minimal: bool,
    pub presentation: SullivanJson,
}

impl SullivanReport {
    fn new(s: &SullivanPresentation) -> Self {
        Self {
            text: s.to_string(),
            minimal: minimality_check(s),
            presentation: s.to_json(),
        }
    }
}

/// Rational homotopy of the mapping-space component picked out by an MC
/// element. `pi` maps `k` to `dim pi_k = dim H_{k-1}` of the twisted
/// algebra, for `1 <= k <= max_degree + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappingSpaceReport {
    pub schema: String,
    pub mc: McReport,
    pub max_degree: i64,
    pub homology: BTreeMap<i64, usize>,
    pub pi: BTreeMap<i64, usize>,
    pub classes: BTreeMap<i64, Vec<String>>,
    pub induced_brackets: Vec<String>,
    pub h0_brackets: Vec<String>,
    pub ch_samples: Vec<ChSample>,
    /// The Chevalley-Eilenberg algebra of the connected truncation.
    pub sullivan: SullivanReport,
    /// The same with contractible pairs removed.
    pub minimal_model: SullivanReport,
    pub notes: Vec<String>,
}

impl MappingSpaceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Homotopy degrees with nonzero rank.
    pub fn nonzero_pi(&self) -> Vec<i64> {
        self.pi
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&k, _)| k)
            .collect()
    }
}

impl fmt::Display for MappingSpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "MC element {} = {}: {}",
            self.mc.name, self.mc.value, self.mc.verdict
        )?;
        writeln!(f, "rational homotopy (up to pi_{}):", self.max_degree + 1)?;
        for (k, d) in &self.pi {
            if *d > 0 {
                let reps = self
                    .classes
                    .get(&(k - 1))
                    .map(|c| c.join(", "))
                    .unwrap_or_default();
                writeln!(f, "  pi_{k} = Q^{d}  [{reps}]")?;
            }
        }
        if self.pi.values().all(|&d| d == 0) {
            writeln!(f, "  all zero")?;
        }
        if !self.h0_brackets.is_empty() {
            writeln!(f, "Lie bracket on H_0:")?;
            for b in &self.h0_brackets {
                writeln!(f, "  {b}")?;
            }
        }
        if !self.ch_samples.is_empty() {
            writeln!(f, "Campbell-Hausdorff products:")?;
            for s in &self.ch_samples {
                writeln!(f, "  {} * {} = {}", s.left, s.right, s.product)?;
            }
        }
        if !self.induced_brackets.is_empty() {
            writeln!(f, "induced brackets:")?;
            for b in &self.induced_brackets {
                writeln!(f, "  {b}")?;
            }
        }
        writeln!(f, "Sullivan model: {}", self.sullivan.text)?;
        writeln!(f, "minimal model:  {}", self.minimal_model.text)?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

fn render_brackets(g: &LInftyAlgebra) -> Vec<String> {
    g.entries()
        .filter(|(_, _, v)| !v.is_zero())
        .map(|(_, k, v)| format!("{} = {}", g.render_tuple(k), g.render(v)))
        .collect()
}

/// Twists `A (x) L` by the named MC element and computes homotopy groups,
/// the structure on `H_0` and a Sullivan model of the component.
pub fn map_model(model: &Model, mc: &str, opts: MapOptions) -> Result<MappingSpaceReport> {
    let t = &model.tensor;
    let tau = McElement::new(t, model.mc(mc)?.clone())?;
    lcs_filtration(t)?;
    let tw = twist(t, &tau)?;
    let top = (0..t.dim()).map(|i| t.degree(i)).max().unwrap_or(0).max(0);
    let max_degree = opts.max_degree.unwrap_or(2 * top + 2);

    let h = homology(&ChainComplex::from_linfty(&tw)?);
    let mut pi = BTreeMap::new();
    let mut classes = BTreeMap::new();
    for n in 0..=max_degree {
        pi.insert(n + 1, h.dim(n));
        let reps: Vec<String> = h.representatives(n).iter().map(|r| tw.render(r)).collect();
        if !reps.is_empty() {
            classes.insert(n, reps);
        }
    }

    let hl = induced_bracket(&tw, &h)?;
    let induced_brackets = hl
        .entries()
        .filter(|(_, k, _)| k.iter().all(|&i| (0..=max_degree).contains(&hl.degree(i))))
        .map(|(_, k, v)| format!("{} = {}", hl.render_tuple(k), hl.render(v)))
        .collect();
    let h0 = degree_zero_part(&hl)?;
    let h0_brackets = render_brackets(&h0);
    let mut ch_samples = Vec::new();
    'outer: for i in 0..h0.dim() {
        for j in i + 1..h0.dim() {
            if ch_samples.len() == CH_SAMPLES {
                break 'outer;
            }
            let p = ch_product(&h0, &Element::basis(i), &Element::basis(j))?;
            ch_samples.push(ChSample {
                left: h0.name(i).to_string(),
                right: h0.name(j).to_string(),
                product: h0.render(&p),
            });
        }
    }

    let connected = truncate(&tw, 0)?;
    let sullivan = ce_construct(&connected)?;
    let minimal = minimal_model(&sullivan)?;

    let mut notes = vec![format!(
        "pi_0: {mc} verified Maurer-Cartan; components are not enumerated"
    )];
    let negative: usize = h
        .dims()
        .iter()
        .filter(|(&n, _)| n < 0)
        .map(|(_, &d)| d)
        .sum();
    if negative > 0 {
        notes.push(format!(
            "twisted homology in negative degrees has total dimension {negative} and is not a homotopy group"
        ));
    }
    if h.dims().keys().any(|&n| n > max_degree) {
        notes.push(format!("homology above degree {max_degree} is omitted"));
    }
    if !sullivan.is_empty() && minimality_check(&sullivan) {
        notes.push(
            "the connected truncation has zero differential, so its Sullivan model is minimal"
                .into(),
        );
    }

    Ok(MappingSpaceReport {
        schema: SCHEMA.to_string(),
        mc: McReport {
            name: mc.to_string(),
            value: t.render(tau.value()),
            verdict: "Maurer-Cartan".to_string(),
        },
        max_degree,
        homology: h.dims(),
        pi,
        classes,
        induced_brackets,
        h0_brackets,
        ch_samples,
        sullivan: SullivanReport::new(&sullivan),
        minimal_model: SullivanReport::new(&minimal),
        notes,
    })
}

/// Summary line used by callers that only want the homotopy ranks.
pub fn pi_summary(r: &MappingSpaceReport) -> String {
    let mut out = String::new();
    for k in r.nonzero_pi() {
        let _ = write!(out, "pi_{k}={} ", r.pi[&k]);
    }
    out.trim_end().to_string()
}
