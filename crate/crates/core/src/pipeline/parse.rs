//! Lexer and recursive-descent parser for model files.
//!
//! ```text
//! # comment
//! algebra cdga A { gen x : 2; rel x^3; cap 6; }
//! algebra linf L { gen alpha : 1; gen beta : 4; bracket [alpha,alpha,alpha] = 6 beta; }
//! mc tau = x alpha;
//! path p = t1 x alpha + 1/2 dt1 beta;
//! ```

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {}, column {}: {message}", pos.line, pos.column)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    fn new(pos: Pos, message: impl Into<String>) -> Self {
        Self {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(Scalar),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("number {n}"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: ln + 1,
                column: i + 1,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: String = chars[start..i].iter().collect();
                let mut value = Scalar::from_integer(num.parse().expect("digits"));
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    let s = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let den: String = chars[s..i].iter().collect();
                    let den = Scalar::from_integer(den.parse().expect("digits"));
                    if den.is_zero() {
                        return Err(ParseError::new(pos, "division by zero"));
                    }
                    value /= den;
                }
                out.push((Tok::Number(value), pos));
            } else if "{}[]();:=,+-*^".contains(c) {
                out.push((Tok::Sym(c), pos));
                i += 1;
            } else {
                return Err(ParseError::new(pos, format!("unexpected character `{c}`")));
            }
        }
    }
    let end = Pos {
        line: text.lines().count().max(1),
        column: text.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    out.push((Tok::Eof, end));
    Ok(out)
}

/// A symbol raised to a power.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub name: String,
    pub power: u32,
    pub pos: Pos,
}

/// A coefficient times an ordered product of symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Scalar,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub terms: Vec<Term>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenDecl {
    pub name: String,
    pub degree: i64,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdgaDecl {
    pub name: String,
    pub gens: Vec<GenDecl>,
    pub relations: Vec<Expr>,
    pub differentials: Vec<(String, Expr)>,
    pub cap: Option<i64>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketDecl {
    pub args: Vec<String>,
    pub value: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinfDecl {
    pub name: String,
    pub gens: Vec<GenDecl>,
    pub brackets: Vec<BracketDecl>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementDecl {
    pub name: String,
    pub value: Expr,
    pub pos: Pos,
}

/// A parsed model file. Cdga degrees are cohomological and L-infinity
/// degrees homological, as written.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub cdga: Option<CdgaDecl>,
    pub linf: LinfDecl,
    pub mcs: Vec<ElementDecl>,
    pub paths: Vec<ElementDecl>,
}

impl ModelSpec {
    pub fn mc(&self, name: &str) -> Option<&ElementDecl> {
        self.mcs.iter().find(|m| m.name == name)
    }

    pub fn path(&self, name: &str) -> Option<&ElementDecl> {
        self.paths.iter().find(|m| m.name == name)
    }
}

/// Symbols for forms on the 1-simplex inside `path` declarations.
pub const FORM_SYMBOLS: [&str; 4] = ["t0", "t1", "dt0", "dt1"];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::new(
            self.pos(),
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == &Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            self.unexpected(&format!("`{c}`"))
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == &Tok::Sym(c)
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.pos();
                self.next();
                Ok((s, p))
            }
            _ => self.unexpected("an identifier"),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let negative = if self.is_sym('-') {
            self.next();
            true
        } else {
            false
        };
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(n) if n.is_integer() => {
                self.next();
                let v: i64 = n
                    .to_integer()
                    .try_into()
                    .map_err(|_| ParseError::new(pos, "integer out of range"))?;
                Ok(if negative { -v } else { v })
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let mut terms = Vec::new();
        let mut negative = false;
        if self.is_sym('+') || self.is_sym('-') {
            negative = self.is_sym('-');
            self.next();
        }
        loop {
            let mut product = self.product()?;
            if negative {
                for t in &mut product {
                    t.coeff = -t.coeff.clone();
                }
            }
            terms.extend(product);
            if self.is_sym('+') || self.is_sym('-') {
                negative = self.is_sym('-');
                self.next();
            } else {
                break;
            }
        }
        Ok(Expr { terms, pos })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Number(_) | Tok::Ident(_) | Tok::Sym('('))
    }

    fn product(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut acc = vec![Term {
            coeff: Scalar::one(),
            factors: Vec::new(),
        }];
        if !self.starts_factor() {
            return self.unexpected("a term");
        }
        while self.starts_factor() {
            let f = self.factor()?;
            acc = multiply(&acc, &f);
            if self.is_sym('*') {
                self.next();
                if !self.starts_factor() {
                    return self.unexpected("a factor after `*`");
                }
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Vec<Term>, ParseError> {
        let pos = self.pos();
        let base = match self.next().0 {
            Tok::Number(n) => vec![Term {
                coeff: n,
                factors: Vec::new(),
            }],
            Tok::Ident(name) => vec![Term {
                coeff: Scalar::one(),
                factors: vec![Factor {
                    name,
                    power: 1,
                    pos,
                }],
            }],
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.sym(')')?;
                e.terms
            }
            _ => unreachable!("checked by starts_factor"),
        };
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.next();
        let epos = self.pos();
        let k = self.integer()?;
        if k < 0 {
            return Err(ParseError::new(epos, "negative exponent"));
        }
        if let [t] = base.as_slice() {
            if let [f] = t.factors.as_slice() {
                if t.coeff.is_one() {
                    let mut f = f.clone();
                    f.power *= k as u32;
                    return Ok(vec![Term {
                        coeff: Scalar::one(),
                        factors: if f.power == 0 { vec![] } else { vec![f] },
                    }]);
                }
            }
        }
        let mut acc = vec![Term {
            coeff: Scalar::one(),
            factors: Vec::new(),
        }];
        for _ in 0..k {
            acc = multiply(&acc, &base);
        }
        Ok(acc)
    }

    fn gen_decl(&mut self) -> Result<GenDecl, ParseError> {
        let (name, pos) = self.ident()?;
        self.sym(':')?;
        let degree = self.integer()?;
        self.sym(';')?;
        Ok(GenDecl { name, degree, pos })
    }

    fn cdga_block(&mut self, pos: Pos) -> Result<CdgaDecl, ParseError> {
        let (name, _) = self.ident()?;
        self.sym('{')?;
        let mut decl = CdgaDecl {
            name,
            gens: Vec::new(),
            relations: Vec::new(),
            differentials: Vec::new(),
            cap: None,
            pos,
        };
        while !self.is_sym('}') {
            let (kw, kpos) = self.ident()?;
            match kw.as_str() {
                "gen" => decl.gens.push(self.gen_decl()?),
                "rel" => {
                    decl.relations.push(self.expr()?);
                    self.sym(';')?;
                }
                "d" => {
                    let (g, _) = self.ident()?;
                    self.sym('=')?;
                    decl.differentials.push((g, self.expr()?));
                    self.sym(';')?;
                }
                "cap" => {
                    decl.cap = Some(self.integer()?);
                    self.sym(';')?;
                }
                _ => {
                    return Err(ParseError::new(
                        kpos,
                        format!("expected `gen`, `rel`, `d` or `cap`, found `{kw}`"),
                    ))
                }
            }
        }
        self.sym('}')?;
        Ok(decl)
    }

    fn linf_block(&mut self, pos: Pos) -> Result<LinfDecl, ParseError> {
        let (name, _) = self.ident()?;
        self.sym('{')?;
        let mut decl = LinfDecl {
            name,
            gens: Vec::new(),
            brackets: Vec::new(),
            pos,
        };
        while !self.is_sym('}') {
            let (kw, kpos) = self.ident()?;
            match kw.as_str() {
                "gen" => decl.gens.push(self.gen_decl()?),
                "bracket" => {
                    self.sym('[')?;
                    let mut args = vec![self.ident()?.0];
                    while self.is_sym(',') {
                        self.next();
                        args.push(self.ident()?.0);
                    }
                    self.sym(']')?;
                    self.sym('=')?;
                    let value = self.expr()?;
                    self.sym(';')?;
                    decl.brackets.push(BracketDecl {
                        args,
                        value,
                        pos: kpos,
                    });
                }
                _ => {
                    return Err(ParseError::new(
                        kpos,
                        format!("expected `gen` or `bracket`, found `{kw}`"),
                    ))
                }
            }
        }
        self.sym('}')?;
        Ok(decl)
    }

    fn element(&mut self) -> Result<ElementDecl, ParseError> {
        let (name, pos) = self.ident()?;
        self.sym('=')?;
        let value = self.expr()?;
        self.sym(';')?;
        Ok(ElementDecl { name, value, pos })
    }
}

fn multiply(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut factors = x.factors.clone();
            factors.extend(y.factors.iter().cloned());
            out.push(Term {
                coeff: &x.coeff * &y.coeff,
                factors,
            });
        }
    }
    out
}

fn check_unique(gens: &[GenDecl], taken: &mut BTreeSet<String>) -> Result<(), ParseError> {
    for g in gens {
        if FORM_SYMBOLS.contains(&g.name.as_str()) {
            return Err(ParseError::new(g.pos, format!("`{}` is reserved", g.name)));
        }
        if !taken.insert(g.name.clone()) {
            return Err(ParseError::new(
                g.pos,
                format!("duplicate generator `{}`", g.name),
            ));
        }
    }
    Ok(())
}

fn check_names(e: &Expr, allowed: &dyn Fn(&str) -> bool) -> Result<(), ParseError> {
    for t in &e.terms {
        for f in &t.factors {
            if !allowed(&f.name) {
                return Err(ParseError::new(
                    f.pos,
                    format!("unknown generator `{}`", f.name),
                ));
            }
        }
    }
    Ok(())
}

/// Parses a model file and resolves every name it mentions.
pub fn parse(text: &str) -> Result<ModelSpec, ParseError> {
    parse_with(text, true)
}

/// Parses a file holding a single `algebra cdga` block.
pub fn parse_cdga(text: &str) -> Result<CdgaDecl, ParseError> {
    let spec = parse_with(text, false)?;
    if spec.linf.pos != Pos::default() || !spec.mcs.is_empty() || !spec.paths.is_empty() {
        return Err(ParseError::new(
            spec.linf.pos,
            "expected only an `algebra cdga` block",
        ));
    }
    spec.cdga
        .ok_or_else(|| ParseError::new(Pos { line: 1, column: 1 }, "missing `algebra cdga` block"))
}

fn parse_with(text: &str, require_linf: bool) -> Result<ModelSpec, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let mut cdga: Option<CdgaDecl> = None;
    let mut linf: Option<LinfDecl> = None;
    let mut mcs: Vec<ElementDecl> = Vec::new();
    let mut paths: Vec<ElementDecl> = Vec::new();
    while p.peek() != &Tok::Eof {
        let (kw, pos) = p.ident()?;
        match kw.as_str() {
            "algebra" => {
                let (kind, kpos) = p.ident()?;
                match kind.as_str() {
                    "cdga" if cdga.is_none() => cdga = Some(p.cdga_block(pos)?),
                    "linf" if linf.is_none() => linf = Some(p.linf_block(pos)?),
                    "cdga" | "linf" => {
                        return Err(ParseError::new(kpos, format!("second `{kind}` block")))
                    }
                    _ => {
                        return Err(ParseError::new(
                            kpos,
                            format!("expected `cdga` or `linf`, found `{kind}`"),
                        ))
                    }
                }
            }
            "mc" => mcs.push(p.element()?),
            "path" => paths.push(p.element()?),
            _ => {
                return Err(ParseError::new(
                    pos,
                    format!("expected `algebra`, `mc` or `path`, found `{kw}`"),
                ))
            }
        }
    }
    let linf = match linf {
        Some(l) => l,
        None if require_linf => {
            return Err(ParseError::new(p.pos(), "missing `algebra linf` block"))
        }
        None => LinfDecl {
            name: String::new(),
            gens: Vec::new(),
            brackets: Vec::new(),
            pos: Pos::default(),
        },
    };

    let mut taken = BTreeSet::new();
    let cdga_names: BTreeSet<String> = cdga
        .iter()
        .flat_map(|c| c.gens.iter().map(|g| g.name.clone()))
        .collect();
    let linf_names: BTreeSet<String> = linf.gens.iter().map(|g| g.name.clone()).collect();
    if let Some(c) = &cdga {
        check_unique(&c.gens, &mut taken)?;
        for r in &c.relations {
            check_names(r, &|n| cdga_names.contains(n))?;
        }
        for (g, e) in &c.differentials {
            if !cdga_names.contains(g) {
                return Err(ParseError::new(e.pos, format!("unknown generator `{g}`")));
            }
            check_names(e, &|n| cdga_names.contains(n))?;
        }
    }
    check_unique(&linf.gens, &mut taken)?;
    for b in &linf.brackets {
        if let Some(a) = b.args.iter().find(|a| !linf_names.contains(*a)) {
            return Err(ParseError::new(b.pos, format!("unknown generator `{a}`")));
        }
        check_names(&b.value, &|n| linf_names.contains(n))?;
    }
    let mut seen = BTreeSet::new();
    for m in mcs.iter().chain(&paths) {
        if !seen.insert(m.name.clone()) {
            return Err(ParseError::new(
                m.pos,
                format!("duplicate element `{}`", m.name),
            ));
        }
    }
    for m in &mcs {
        check_names(&m.value, &|n| {
            cdga_names.contains(n) || linf_names.contains(n)
        })?;
    }
    for m in &paths {
        check_names(&m.value, &|n| {
            cdga_names.contains(n) || linf_names.contains(n) || FORM_SYMBOLS.contains(&n)
        })?;
    }
    Ok(ModelSpec {
        cdga,
        linf,
        mcs,
        paths,
    })
}
