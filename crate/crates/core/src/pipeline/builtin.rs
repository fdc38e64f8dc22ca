//! The built-in example families and the test corpus.

use super::parse::{parse, parse_cdga, CdgaDecl, ModelSpec};
use super::{cdga_block, linf_block, presentation};
use crate::error::{Error, Result};
use crate::homalg::koszul_linfty;

/// A named family together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    /// Maps `CP^n -> CP^m` homotopic to the inclusion.
    CpInclusion { n: u32, m: u32 },
    /// A cdga block and the degrees of an abelian L-infinity algebra.
    EmTarget {
        cohomology: String,
        degrees: Vec<i64>,
    },
    /// Self-equivalences of an F0 space given by an even presentation.
    F0Aut { presentation: String },
}

fn reparse(text: &str) -> Result<ModelSpec> {
    parse(text).map_err(|e| Error::Invalid(format!("generated model does not parse: {e}\n{text}")))
}

/// `A = Q[x]/(x^{n+1})`, `L = <alpha, beta>` with `|alpha| = 1`,
/// `|beta| = 2m` and `[alpha^{m+1}] = (m+1)! beta`, `tau = x (x) alpha`.
pub fn cp_inclusion(n: u32, m: u32) -> Result<ModelSpec> {
    if n == 0 || m < n {
        return Err(Error::Invalid(format!(
            "cp-inclusion needs 1 <= n <= m, got n = {n}, m = {m}"
        )));
    }
    let args = vec!["alpha"; m as usize + 1].join(",");
    let factorial: u64 = (1..=u64::from(m) + 1).product();
    let text = format!(
        "algebra cdga CP{n} {{ gen x : 2; rel x^{}; cap {}; }}\n\
         algebra linf CP{m} {{ gen alpha : 1; gen beta : {}; bracket [{args}] = {factorial} beta; }}\n\
         mc tau = x alpha;\n",
        n + 1,
        2 * (n + 1),
        2 * m,
    );
    reparse(&text)
}

fn cdga_only(text: &str) -> Result<CdgaDecl> {
    parse_cdga(text).map_err(|e| Error::Invalid(format!("cdga block: {e}")))
}

/// The abelian L-infinity algebra with one generator `e<i>` per entry of
/// `degrees`, against the given cdga, twisted by zero.
pub fn em_target(cohomology: &str, degrees: &[i64]) -> Result<ModelSpec> {
    let decl = cdga_only(cohomology)?;
    let p = presentation(&decl)?;
    let mut text = cdga_block(&decl.name, &p);
    text.push_str("algebra linf EM {\n");
    for (i, d) in degrees.iter().enumerate() {
        text.push_str(&format!("  gen e{} : {d};\n", i + 1));
    }
    text.push_str("}\n");
    let anchor = degrees
        .first()
        .map(|_| "e1")
        .ok_or_else(|| Error::Invalid("em-target needs at least one degree".into()))?;
    text.push_str(&format!("mc zero = 0 {anchor};\n"));
    reparse(&text)
}

/// `A` the presented algebra, `L` the model of its Koszul complex and
/// `pi = sum x_i (x) alpha_i`.
pub fn f0_aut(presentation_text: &str) -> Result<ModelSpec> {
    let decl = cdga_only(presentation_text)?;
    let p = presentation(&decl)?;
    let l = koszul_linfty(&p)?;
    let mut text = cdga_block(&decl.name, &p);
    text.push_str(&linf_block("Koszul", &l));
    let terms: Vec<String> = (0..p.ring.len())
        .map(|i| format!("{} alpha_{}", p.ring.name(i), p.ring.name(i)))
        .collect();
    text.push_str(&format!("mc pi = {};\n", terms.join(" + ")));
    reparse(&text)
}

pub fn builtin(b: &Builtin) -> Result<ModelSpec> {
    match b {
        Builtin::CpInclusion { n, m } => cp_inclusion(*n, *m),
        Builtin::EmTarget {
            cohomology,
            degrees,
        } => em_target(cohomology, degrees),
        Builtin::F0Aut { presentation } => f0_aut(presentation),
    }
}

pub const TRUNCATED_CUBE: &str = "algebra cdga A { gen x : 2; rel x^3; }";
pub const TWO_SPHERES: &str = "algebra cdga S2xS2 { gen a : 2; gen b : 2; rel a^2; rel b^2; }";

const HEISENBERG: &str = "
algebra linf Heis {
  gen X : 0; gen Y : 0; gen Z : 0;
  bracket [X,Y] = Z;
}
mc zero = 0 X;
";

const CONTRACTIBLE_PAIR: &str = "
# maps into K(Q,3) from an algebra with a contractible pair
algebra cdga B { gen v : 2; gen w : 3; rel v^3; d w = v^2; cap 7; }
algebra linf K3 { gen a : 2; }
mc zero = 0 a;
";

/// Every built-in example used by the test suites, by name.
pub fn corpus() -> Vec<(String, ModelSpec)> {
    let mut out = Vec::new();
    for (n, m) in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)] {
        out.push((
            format!("cp-{n}-{m}"),
            cp_inclusion(n, m).expect("cp corpus"),
        ));
    }
    out.push((
        "em-cube-1-3".into(),
        em_target(TRUNCATED_CUBE, &[1, 3]).expect("em corpus"),
    ));
    out.push((
        "em-spheres-2".into(),
        em_target(TWO_SPHERES, &[2]).expect("em corpus"),
    ));
    out.push(("f0-cube".into(), f0_aut(TRUNCATED_CUBE).expect("f0 corpus")));
    out.push(("f0-spheres".into(), f0_aut(TWO_SPHERES).expect("f0 corpus")));
    out.push(("heisenberg".into(), parse(HEISENBERG).expect("heisenberg")));
    out.push((
        "contractible-pair".into(),
        parse(CONTRACTIBLE_PAIR).expect("s3"),
    ));
    out
}
