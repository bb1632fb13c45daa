// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Declarative PDE problems: piecewise-polynomial coefficients, derivative
//! terms, boundary data and separable multi-dimensional coefficient specs.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result, C64};

/// A scalar kept exact when the user wrote a rational.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coeff {
    Rational(Ratio<i64>),
    Complex(C64),
}

impl Coeff {
    pub fn value(&self) -> C64 {
        match self {
            Coeff::Rational(r) => C64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            Coeff::Complex(z) => *z,
        }
    }

    pub fn int(v: i64) -> Self {
        Coeff::Rational(Ratio::from_integer(v))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Coeff::Rational(Ratio::new(p, q))
    }

    pub fn real(v: f64) -> Self {
        Coeff::Complex(C64::new(v, 0.0))
    }

    pub fn conj(&self) -> Self {
        match self {
            Coeff::Rational(_) => *self,
            Coeff::Complex(z) => Coeff::Complex(z.conj()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(r) => r.is_zero(),
            Coeff::Complex(z) => z.norm() == 0.0,
        }
    }
}

impl From<f64> for Coeff {
    fn from(v: f64) -> Self {
        Coeff::real(v)
    }
}

impl From<C64> for Coeff {
    fn from(v: C64) -> Self {
        Coeff::Complex(v)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Coeff::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Coeff::Complex(z) if z.im == 0.0 => write!(f, "{:?}", z.re),
            Coeff::Complex(z) => write!(f, "({:?},{:?})", z.re, z.im),
        }
    }
}

impl FromStr for Coeff {
    type Err = String;

    /// Accepts `p`, `p/q`, decimals, and `(re,im)`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (re, im) = inner.split_once(',').ok_or_else(|| format!("bad complex literal `{s}`"))?;
            let re: f64 = re.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            let im: f64 = im.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            return Ok(Coeff::Complex(C64::new(re, im)));
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            let q: i64 = q.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            if q == 0 {
                return Err(format!("`{s}`: zero denominator"));
            }
            return Ok(Coeff::Rational(Ratio::new(p, q)));
        }
        if let Ok(p) = s.parse::<i64>() {
            return Ok(Coeff::int(p));
        }
        let v: f64 = s.parse().map_err(|e| format!("`{s}`: {e}"))?;
        if !v.is_finite() {
            return Err(format!("`{s}` is not finite"));
        }
        Ok(Coeff::real(v))
    }
}

/// Grid point `x_j = a + j (b - a)/(N - 1)` with `N = 2^n`.
pub fn grid_point(a: f64, b: f64, n: usize, j: usize) -> f64 {
    let m = (1usize << n) - 1;
    if j == m {
        b
    } else {
        a + (b - a) * j as f64 / m as f64
    }
}

pub fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..1usize << n).map(|j| grid_point(a, b, n, j)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    /// Monomial coefficients in the global coordinate: `Σ c_i x^i`.
    pub coeffs: Vec<Coeff>,
}

impl Segment {
    pub fn eval(&self, x: f64) -> C64 {
        horner(&self.values(), x)
    }

    pub fn values(&self) -> Vec<C64> {
        self.coeffs.iter().map(Coeff::value).collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

pub fn horner(c: &[C64], x: f64) -> C64 {
    c.iter().rev().fold(C64::zero(), |acc, &ci| acc * x + ci)
}

/// Piecewise polynomial on `[a, b]`; segments are half-open `[lo, hi)` except
/// the last, which is closed.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePolynomial {
    domain: (f64, f64),
    segments: Vec<Segment>,
}

impl PiecewisePolynomial {
    pub fn new(domain: (f64, f64), segments: Vec<Segment>) -> Result<Self> {
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Domain(format!("invalid domain [{a}, {b}]")));
        }
        if segments.is_empty() {
            return Err(Error::Domain("no segments".into()));
        }
        if segments[0].lo != a || segments[segments.len() - 1].hi != b {
            return Err(Error::Domain("segments must tile the domain exactly".into()));
        }
        for (k, s) in segments.iter().enumerate() {
            if !(s.lo < s.hi) {
                return Err(Error::Domain(format!("segment {k} is empty or reversed")));
            }
            if k > 0 && segments[k - 1].hi != s.lo {
                return Err(Error::Domain(format!("gap or overlap before segment {k}")));
            }
            if s.coeffs.is_empty() {
                return Err(Error::Domain(format!("segment {k} has no coefficients")));
            }
            if s.values().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Domain(format!("segment {k} has a non-finite coefficient")));
            }
        }
        Ok(Self { domain, segments })
    }

    pub fn constant(domain: (f64, f64), c: impl Into<Coeff>) -> Self {
        Self::single(domain, vec![c.into()])
    }

    /// One segment with the given monomial coefficients.
    pub fn single(domain: (f64, f64), coeffs: Vec<Coeff>) -> Self {
        Self::new(domain, vec![Segment { lo: domain.0, hi: domain.1, coeffs }]).expect("valid single segment")
    }

    pub fn from_real(domain: (f64, f64), coeffs: &[f64]) -> Self {
        Self::single(domain, coeffs.iter().map(|&c| Coeff::real(c)).collect())
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment_index(&self, x: f64) -> Result<usize> {
        let (a, b) = self.domain;
        if !(x >= a && x <= b) {
            return Err(Error::Domain(format!("x = {x} outside [{a}, {b}]")));
        }
        let last = self.segments.len() - 1;
        Ok(self.segments.iter().position(|s| x < s.hi).unwrap_or(last))
    }

    pub fn evaluate(&self, x: f64) -> Result<C64> {
        Ok(self.segments[self.segment_index(x)?].eval(x))
    }

    pub fn sample(&self, n: usize) -> Vec<C64> {
        let (a, b) = self.domain;
        grid(a, b, n).into_iter().map(|x| self.evaluate(x).expect("grid inside domain")).collect()
    }

    pub fn conj(&self) -> Self {
        let segs = self
            .segments
            .iter()
            .map(|s| Segment { lo: s.lo, hi: s.hi, coeffs: s.coeffs.iter().map(Coeff::conj).collect() })
            .collect();
        Self { domain: self.domain, segments: segs }
    }

    /// Apply `g` to every monomial coefficient.
    pub fn map_coefficients(&self, g: impl Fn(C64) -> C64) -> Self {
        let segs = self
            .segments
            .iter()
            .map(|s| Segment { lo: s.lo, hi: s.hi, coeffs: s.values().into_iter().map(|z| Coeff::Complex(g(z))).collect() })
            .collect();
        Self { domain: self.domain, segments: segs }
    }

    /// True when every segment is the same constant.
    pub fn as_constant(&self) -> Option<C64> {
        let first = self.segments[0].values();
        let c = first[0];
        let all = self.segments.iter().all(|s| {
            let v = s.values();
            v[0] == c && v[1..].iter().all(|z| *z == C64::zero())
        });
        all.then_some(c)
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(C64::zero())
    }

    /// Upper bound on `|f|` over the domain from dense sampling with a margin.
    pub fn max_abs(&self) -> f64 {
        const SAMPLES: usize = 8192;
        let mut m: f64 = 0.0;
        for s in &self.segments {
            let vals = s.values();
            for k in 0..=SAMPLES {
                let x = s.lo + (s.hi - s.lo) * k as f64 / SAMPLES as f64;
                m = m.max(horner(&vals, x).norm());
            }
        }
        m * 1.005
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdeTerm1D {
    pub order: usize,
    pub coefficient: PiecewisePolynomial,
}

/// `u'(a) + A1 u(a) = A2` and `u'(b) + B1 u(b) = B2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobinBoundary {
    pub a1: Coeff,
    pub a2: Coeff,
    pub b1: Coeff,
    pub b2: Coeff,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCondition {
    Robin(RobinBoundary),
    /// `u(a) = left`, `u(b) = right`, held fixed in time.
    Dirichlet { left: Coeff, right: Coeff },
    Periodic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    Values(Vec<C64>),
    /// `amplitude · sin(k x + phase)`.
    Sine { amplitude: f64, k: f64, phase: f64 },
    Piecewise(PiecewisePolynomial),
}

impl InitialCondition {
    pub fn sample(&self, domain: (f64, f64), n: usize) -> Result<Vec<C64>> {
        let n_pts = 1usize << n;
        match self {
            InitialCondition::Values(v) if v.len() == n_pts => Ok(v.clone()),
            InitialCondition::Values(v) => {
                Err(Error::Config(format!("initial values have length {}, grid has {n_pts}", v.len())))
            }
            InitialCondition::Sine { amplitude, k, phase } => Ok(grid(domain.0, domain.1, n)
                .into_iter()
                .map(|x| C64::new(amplitude * (k * x + phase).sin(), 0.0))
                .collect()),
            InitialCondition::Piecewise(p) => Ok(p.sample(n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdeProblem1D {
    pub domain: (f64, f64),
    pub terms: Vec<PdeTerm1D>,
    pub source: PiecewisePolynomial,
    pub boundary: BoundaryCondition,
    pub initial: InitialCondition,
}

impl PdeProblem1D {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a < b) {
            return Err(Error::Domain(format!("domain [{a}, {b}] is empty")));
        }
        if self.terms.is_empty() {
            return Err(Error::Config("at least one term is required".into()));
        }
        for (k, t) in self.terms.iter().enumerate() {
            if t.coefficient.domain() != self.domain {
                return Err(Error::Domain(format!("term {k} coefficient domain differs from problem domain")));
            }
        }
        if self.source.domain() != self.domain {
            return Err(Error::Domain("source domain differs from problem domain".into()));
        }
        Ok(())
    }
}

/// One product `g_1(x_1) ⋯ g_d(x_d) · g_s(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableSummand {
    pub factors: Vec<PiecewisePolynomial>,
    pub clock: Option<PiecewisePolynomial>,
}

/// `h(Σ_m Π_i g_{mi}(x_i) g_{ms}(t))`, `h` the identity when absent.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableFunctionSpec {
    pub summands: Vec<SeparableSummand>,
    /// Monomial coefficients of the outer real polynomial.
    pub outer: Option<Vec<f64>>,
}

impl SeparableFunctionSpec {
    pub fn product(factors: Vec<PiecewisePolynomial>) -> Self {
        Self { summands: vec![SeparableSummand { factors, clock: None }], outer: None }
    }

    pub fn constant(domains: &[(f64, f64)], c: f64) -> Self {
        let mut factors: Vec<_> = domains.iter().map(|&d| PiecewisePolynomial::constant(d, 1.0)).collect();
        factors[0] = PiecewisePolynomial::constant(domains[0], c);
        Self::product(factors)
    }

    pub fn dims(&self) -> usize {
        self.summands.first().map_or(0, |s| s.factors.len())
    }

    pub fn is_time_dependent(&self) -> bool {
        self.summands.iter().any(|s| s.clock.as_ref().is_some_and(|c| c.as_constant().is_none()))
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dims();
        if d == 0 || self.summands.iter().any(|s| s.factors.len() != d) {
            return Err(Error::Config("separable summands must share a nonzero dimension count".into()));
        }
        if let Some(h) = &self.outer {
            let m = (0..=2000)
                .map(|k| -1.0 + k as f64 / 1000.0)
                .map(|x| h.iter().rev().fold(0.0, |acc, &c| acc * x + c).abs())
                .fold(0.0, f64::max);
            if m > 0.5 + 1e-12 {
                return Err(Error::Config(format!("outer polynomial reaches {m:.4} > 1/2 on [-1, 1]")));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[f64], t: f64) -> Result<C64> {
        let mut inner = C64::zero();
        for s in &self.summands {
            let mut p = C64::new(1.0, 0.0);
            for (g, &xi) in s.factors.iter().zip(x) {
                p *= g.evaluate(xi)?;
            }
            if let Some(c) = &s.clock {
                p *= c.evaluate(t)?;
            }
            inner += p;
        }
        Ok(match &self.outer {
            None => inner,
            Some(h) => h.iter().rev().fold(C64::zero(), |acc, &c| acc * inner + c),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiTerm {
    pub orders: Vec<usize>,
    pub coefficient: SeparableFunctionSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdeProblemMultiD {
    pub domains: Vec<(f64, f64)>,
    pub terms: Vec<MultiTerm>,
    pub source: SeparableFunctionSpec,
    pub boundaries: Vec<BoundaryCondition>,
}

impl PdeProblemMultiD {
    pub fn dims(&self) -> usize {
        self.domains.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dims();
        if d == 0 {
            return Err(Error::Config("at least one dimension is required".into()));
        }
        if self.boundaries.len() != d {
            return Err(Error::Config("one boundary condition per dimension is required".into()));
        }
        if self.terms.is_empty() {
            return Err(Error::Config("at least one term is required".into()));
        }
        for t in &self.terms {
            if t.orders.len() != d || t.coefficient.dims() != d {
                return Err(Error::Config("term dimension mismatch".into()));
            }
            t.coefficient.validate()?;
        }
        if self.source.dims() != d {
            return Err(Error::Config("source dimension mismatch".into()));
        }
        self.source.validate()
    }
}
