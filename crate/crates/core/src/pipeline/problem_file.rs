// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented problem files.
//!
//! ```text
//! [domain]
//! a = 0.0
//! b = 10.0
//! [term]
//! order = 2
//! stencil = central 2
//! segment 0.0 10.0 1
//! [source]
//! segment 0.0 10.0 0
//! [boundary]
//! kind = robin
//! a1 = 1/2
//! ...
//! ```
//!
//! Piecewise polynomials are `segment <lo> <hi> <c0> <c1> ...` lines with
//! monomial coefficients in increasing degree.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::discretize::{StencilChoice, StencilKind};
use crate::model::{
    BoundaryCondition, Coeff, InitialCondition, PdeProblem1D, PdeTerm1D, PiecewisePolynomial, RobinBoundary, Segment,
};
use crate::schrodinger::{RecoveryStrategy, Window};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Matrix,
    Circuit,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "matrix" => Ok(Mode::Matrix),
            "circuit" => Ok(Mode::Circuit),
            other => Err(format!("unknown mode `{other}` (expected matrix or circuit)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Matrix => "matrix",
            Mode::Circuit => "circuit",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSection {
    pub n: usize,
    pub n_xi: usize,
    pub l_xi: f64,
    /// Clock register `(n_s, L_s)`.
    pub clock: Option<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RecoverySpec {
    Single(f64),
    Band(f64, f64),
    Range(usize, usize),
    All,
    /// Band above the growth threshold of `S1`.
    Threshold,
}

impl RecoverySpec {
    pub fn strategy(&self, s1: &crate::SparseMatrix, t: f64, floor: f64) -> RecoveryStrategy {
        let window = match *self {
            RecoverySpec::Single(p) => Window::Single(p),
            RecoverySpec::Band(a, b) => Window::Band(a, b),
            RecoverySpec::Range(a, b) => Window::Range(a, b),
            RecoverySpec::All => Window::AllPositive,
            RecoverySpec::Threshold => return RecoveryStrategy { floor, ..RecoveryStrategy::above_threshold(s1, t) },
        };
        RecoveryStrategy { window, floor }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSection {
    pub times: Vec<f64>,
    pub epsilon: f64,
    pub mode: Mode,
    pub recovery: RecoverySpec,
    pub floor: f64,
    pub general_homogenization: bool,
    pub euler_dt: Option<f64>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            times: vec![0.0],
            epsilon: 1e-6,
            mode: Mode::Matrix,
            recovery: RecoverySpec::Single(2.0),
            floor: 1e-12,
            general_homogenization: true,
            euler_dt: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub problem: PdeProblem1D,
    pub stencils: Vec<StencilChoice>,
    pub grid: GridSection,
    pub run: RunSection,
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn write_poly(out: &mut String, p: &PiecewisePolynomial) {
    for s in p.segments() {
        let cs: Vec<String> = s.coeffs.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "segment {} {} {}", num(s.lo), num(s.hi), cs.join(" "));
    }
}

impl ProblemFile {
    pub fn to_text(&self) -> String {
        let p = &self.problem;
        let mut o = String::new();
        let _ = writeln!(o, "[domain]\na = {}\nb = {}", num(p.domain.0), num(p.domain.1));
        for (t, st) in p.terms.iter().zip(&self.stencils) {
            let _ = writeln!(o, "\n[term]\norder = {}\nstencil = {} {}", t.order, st.kind, st.accuracy);
            write_poly(&mut o, &t.coefficient);
        }
        o.push_str("\n[source]\n");
        write_poly(&mut o, &p.source);
        o.push_str("\n[boundary]\n");
        match &p.boundary {
            BoundaryCondition::Robin(r) => {
                let _ = writeln!(o, "kind = robin\na1 = {}\na2 = {}\nb1 = {}\nb2 = {}", r.a1, r.a2, r.b1, r.b2);
            }
            BoundaryCondition::Dirichlet { left, right } => {
                let _ = writeln!(o, "kind = dirichlet\nleft = {left}\nright = {right}");
            }
            BoundaryCondition::Periodic => o.push_str("kind = periodic\n"),
        }
        o.push_str("\n[initial]\n");
        match &p.initial {
            InitialCondition::Sine { amplitude, k, phase } => {
                let _ = writeln!(o, "kind = sine\namplitude = {}\nk = {}\nphase = {}", num(*amplitude), num(*k), num(*phase));
            }
            InitialCondition::Values(v) => {
                o.push_str("kind = values\n");
                for z in v {
                    let _ = writeln!(o, "value {}", Coeff::Complex(*z));
                }
            }
            InitialCondition::Piecewise(pp) => {
                o.push_str("kind = piecewise\n");
                write_poly(&mut o, pp);
            }
        }
        let g = &self.grid;
        let _ = writeln!(o, "\n[grid]\nn = {}\nn_xi = {}\nl_xi = {}", g.n, g.n_xi, num(g.l_xi));
        if let Some((ns, ls)) = g.clock {
            let _ = writeln!(o, "n_s = {ns}\nl_s = {}", num(ls));
        }
        let r = &self.run;
        let times: Vec<String> = r.times.iter().map(|&t| num(t)).collect();
        let _ = writeln!(o, "\n[run]\ntimes = {}\nepsilon = {}\nmode = {}", times.join(" "), num(r.epsilon), r.mode);
        let rec = match r.recovery {
            RecoverySpec::Single(p) => format!("single {}", num(p)),
            RecoverySpec::Band(a, b) => format!("band {} {}", num(a), num(b)),
            RecoverySpec::Range(a, b) => format!("range {a} {b}"),
            RecoverySpec::All => "all".into(),
            RecoverySpec::Threshold => "threshold".into(),
        };
        let _ = writeln!(o, "recovery = {rec}\nfloor = {}", num(r.floor));
        let _ = writeln!(o, "homogenization = {}", if r.general_homogenization { "general" } else { "identity" });
        if let Some(dt) = r.euler_dt {
            let _ = writeln!(o, "euler_dt = {}", num(dt));
        }
        o
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().run(text)
    }
}

#[derive(Default)]
struct TermDraft {
    order: Option<usize>,
    stencil: StencilChoice,
    segments: Vec<Segment>,
}

#[derive(Default)]
struct Parser {
    domain: (Option<f64>, Option<f64>),
    terms: Vec<TermDraft>,
    source: Vec<Segment>,
    boundary: Vec<(String, String, usize)>,
    initial_kv: Vec<(String, String, usize)>,
    initial_values: Vec<C64>,
    initial_segments: Vec<Segment>,
    grid: Vec<(String, String, usize)>,
    run: Vec<(String, String, usize)>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num<T: FromStr>(v: &str, line: usize, what: &str) -> Result<T> {
    v.trim().parse().map_err(|_| perr(line, format!("bad {what} `{v}`")))
}

fn parse_segment(rest: &str, line: usize) -> Result<Segment> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() < 3 {
        return Err(perr(line, "segment needs lo, hi and at least one coefficient"));
    }
    let coeffs = parts[2..].iter().map(|c| c.parse::<Coeff>().map_err(|e| perr(line, e))).collect::<Result<_>>()?;
    Ok(Segment { lo: parse_num(parts[0], line, "segment bound")?, hi: parse_num(parts[1], line, "segment bound")?, coeffs })
}

fn lookup<'a>(kv: &'a [(String, String, usize)], key: &str) -> Option<(&'a str, usize)> {
    kv.iter().rev().find(|(k, _, _)| k == key).map(|(_, v, l)| (v.as_str(), *l))
}

fn require<'a>(kv: &'a [(String, String, usize)], key: &str, section: &str) -> Result<(&'a str, usize)> {
    lookup(kv, key).ok_or_else(|| perr(0, format!("[{section}] is missing `{key}`")))
}

fn coeff(kv: &[(String, String, usize)], key: &str, section: &str) -> Result<Coeff> {
    let (v, l) = require(kv, key, section)?;
    v.parse().map_err(|e: String| perr(l, e))
}

impl Parser {
    fn run(mut self, text: &str) -> Result<ProblemFile> {
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            if let Some(name) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                section = name.trim().to_string();
                match section.as_str() {
                    "term" => self.terms.push(TermDraft::default()),
                    "domain" | "source" | "boundary" | "initial" | "grid" | "run" => {}
                    other => return Err(perr(line, format!("unknown section [{other}]"))),
                }
                continue;
            }
            if let Some(rest) = s.strip_prefix("segment ") {
                let seg = parse_segment(rest, line)?;
                match section.as_str() {
                    "term" => self.terms.last_mut().expect("term section open").segments.push(seg),
                    "source" => self.source.push(seg),
                    "initial" => self.initial_segments.push(seg),
                    _ => return Err(perr(line, format!("segment line not allowed in [{section}]"))),
                }
                continue;
            }
            if let Some(rest) = s.strip_prefix("value ") {
                if section != "initial" {
                    return Err(perr(line, "value lines belong in [initial]"));
                }
                let c: Coeff = rest.parse().map_err(|e: String| perr(line, e))?;
                self.initial_values.push(c.value());
                continue;
            }
            let (k, v) = s.split_once('=').ok_or_else(|| perr(line, format!("expected `key = value`, got `{s}`")))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            match section.as_str() {
                "domain" => match k.as_str() {
                    "a" => self.domain.0 = Some(parse_num(&v, line, "domain bound")?),
                    "b" => self.domain.1 = Some(parse_num(&v, line, "domain bound")?),
                    _ => return Err(perr(line, format!("unknown key `{k}` in [domain]"))),
                },
                "term" => {
                    let t = self.terms.last_mut().expect("term section open");
                    match k.as_str() {
                        "order" => t.order = Some(parse_num(&v, line, "order")?),
                        "stencil" => {
                            let mut it = v.split_whitespace();
                            let kind: StencilKind =
                                it.next().unwrap_or("").parse().map_err(|e: String| perr(line, e))?;
                            let acc = parse_num(it.next().unwrap_or(""), line, "accuracy")?;
                            t.stencil = StencilChoice::new(kind, acc);
                        }
                        _ => return Err(perr(line, format!("unknown key `{k}` in [term]"))),
                    }
                }
                "boundary" => self.boundary.push((k, v, line)),
                "initial" => self.initial_kv.push((k, v, line)),
                "grid" => self.grid.push((k, v, line)),
                "run" => self.run.push((k, v, line)),
                "" => return Err(perr(line, "key outside any section")),
                other => return Err(perr(line, format!("key-value lines not allowed in [{other}]"))),
            }
        }
        self.finish()
    }

    fn finish(self) -> Result<ProblemFile> {
        let domain = match self.domain {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(perr(0, "[domain] needs `a` and `b`")),
        };
        let poly = |segs: Vec<Segment>, what: &str| -> Result<PiecewisePolynomial> {
            if segs.is_empty() {
                return Err(perr(0, format!("{what} has no segment lines")));
            }
            PiecewisePolynomial::new(domain, segs).map_err(|e| perr(0, format!("{what}: {e}")))
        };
        let mut terms = Vec::new();
        let mut stencils = Vec::new();
        for (k, t) in self.terms.into_iter().enumerate() {
            let order = t.order.ok_or_else(|| perr(0, format!("term {} has no order", k + 1)))?;
            terms.push(PdeTerm1D { order, coefficient: poly(t.segments, &format!("term {}", k + 1))? });
            stencils.push(t.stencil);
        }
        let source = if self.source.is_empty() {
            PiecewisePolynomial::constant(domain, Coeff::int(0))
        } else {
            poly(self.source, "source")?
        };
        let boundary = match require(&self.boundary, "kind", "boundary")? {
            ("robin", _) => BoundaryCondition::Robin(RobinBoundary {
                a1: coeff(&self.boundary, "a1", "boundary")?,
                a2: coeff(&self.boundary, "a2", "boundary")?,
                b1: coeff(&self.boundary, "b1", "boundary")?,
                b2: coeff(&self.boundary, "b2", "boundary")?,
            }),
            ("dirichlet", _) => BoundaryCondition::Dirichlet {
                left: coeff(&self.boundary, "left", "boundary")?,
                right: coeff(&self.boundary, "right", "boundary")?,
            },
            ("periodic", _) => BoundaryCondition::Periodic,
            (other, l) => return Err(perr(l, format!("unknown boundary kind `{other}`"))),
        };
        let initial = match require(&self.initial_kv, "kind", "initial")? {
            ("sine", _) => {
                let f = |key: &str| -> Result<f64> {
                    let (v, l) = require(&self.initial_kv, key, "initial")?;
                    parse_num(v, l, key)
                };
                InitialCondition::Sine { amplitude: f("amplitude")?, k: f("k")?, phase: f("phase")? }
            }
            ("values", _) => InitialCondition::Values(self.initial_values),
            ("piecewise", _) => InitialCondition::Piecewise(poly(self.initial_segments, "initial condition")?),
            (other, l) => return Err(perr(l, format!("unknown initial kind `{other}`"))),
        };
        let g = &self.grid;
        let gnum = |key: &str| -> Result<f64> {
            let (v, l) = require(g, key, "grid")?;
            parse_num(v, l, key)
        };
        let gint = |key: &str| -> Result<usize> {
            let (v, l) = require(g, key, "grid")?;
            parse_num(v, l, key)
        };
        let clock = match lookup(g, "n_s") {
            Some((v, l)) => Some((parse_num(v, l, "n_s")?, gnum("l_s")?)),
            None => None,
        };
        let grid = GridSection { n: gint("n")?, n_xi: gint("n_xi")?, l_xi: gnum("l_xi")?, clock };
        let mut run = RunSection::default();
        for (k, v, l) in &self.run {
            let l = *l;
            match k.as_str() {
                "times" => {
                    run.times = v.split_whitespace().map(|t| parse_num(t, l, "time")).collect::<Result<_>>()?;
                }
                "epsilon" => run.epsilon = parse_num(v, l, "epsilon")?,
                "mode" => run.mode = v.parse().map_err(|e: String| perr(l, e))?,
                "floor" => run.floor = parse_num(v, l, "floor")?,
                "euler_dt" => run.euler_dt = Some(parse_num(v, l, "euler_dt")?),
                "homogenization" => {
                    run.general_homogenization = match v.as_str() {
                        "general" => true,
                        "identity" => false,
                        other => return Err(perr(l, format!("unknown homogenization `{other}`"))),
                    }
                }
                "recovery" => {
                    let parts: Vec<&str> = v.split_whitespace().collect();
                    run.recovery = match parts.as_slice() {
                        ["single", p] => RecoverySpec::Single(parse_num(p, l, "recovery coordinate")?),
                        ["band", a, b] => RecoverySpec::Band(parse_num(a, l, "band")?, parse_num(b, l, "band")?),
                        ["range", a, b] => RecoverySpec::Range(parse_num(a, l, "range")?, parse_num(b, l, "range")?),
                        ["all"] => RecoverySpec::All,
                        ["threshold"] => RecoverySpec::Threshold,
                        _ => return Err(perr(l, format!("bad recovery `{v}`"))),
                    };
                }
                other => return Err(perr(l, format!("unknown key `{other}` in [run]"))),
            }
        }
        let problem = PdeProblem1D { domain, terms, source, boundary, initial };
        problem.validate()?;
        Ok(ProblemFile { problem, stencils, grid, run })
    }
}
