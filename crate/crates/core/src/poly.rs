//! Univariate and multivariate real polynomials, and real-root isolation by
//! Sturm sequences.
//!
//! Coefficients are `f64`. Sturm chains are built with a relative cutoff so
//! that remainders that are zero up to rounding terminate the chain; root
//! counts are then exact for the small, well-scaled polynomials this crate
//! works with.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Remainder coefficients below this fraction of the dividend scale are zero.
const CHAIN_CUTOFF: f64 = 1e-12;

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniPoly {
    coeffs: Vec<f64>,
}

impl UniPoly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Cauchy bound: every real root lies in `[-b, b]`.
    pub fn root_bound(&self) -> f64 {
        match self.coeffs.split_last() {
            Some((lead, rest)) if !rest.is_empty() => {
                1.0 + rest.iter().fold(0.0, |m: f64, c| m.max((c / lead).abs()))
            }
            _ => 1.0,
        }
    }

    /// Negated remainder of `self / d`, with rounding-level terms cleared.
    fn neg_rem(&self, d: &UniPoly) -> UniPoly {
        let mut r = self.coeffs.clone();
        let dn = d.coeffs.len();
        let lead = *d.coeffs.last().expect("nonzero divisor");
        let cutoff = CHAIN_CUTOFF * self.scale().max(d.scale());
        while r.len() >= dn {
            let f = r.pop().unwrap() / lead;
            let off = r.len() + 1 - dn;
            for (k, dc) in d.coeffs[..dn - 1].iter().enumerate() {
                r[off + k] -= f * dc;
            }
        }
        for c in r.iter_mut() {
            *c = if c.abs() <= cutoff { 0.0 } else { -*c };
        }
        UniPoly::new(r)
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone()];
        let mut next = self.derivative();
        while !next.is_zero() {
            let r = chain.last().unwrap().neg_rem(&next);
            chain.push(next);
            next = r;
        }
        chain
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if *c < 0.0 { '-' } else { '+' })?;
            } else if *c < 0.0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*t")?,
                _ => write!(f, "{a}*t^{k}")?,
            }
        }
        Ok(())
    }
}

fn sign_variations(chain: &[UniPoly], t: f64) -> usize {
    let mut count = 0;
    let mut prev = 0.0f64;
    for p in chain {
        let v = p.eval(t);
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && (v < 0.0) != (prev < 0.0) {
            count += 1;
        }
        prev = v;
    }
    count
}

/// Interval `(lo, hi]` containing exactly one distinct real root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootEnclosure {
    pub lo: f64,
    pub hi: f64,
}

impl RootEnclosure {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Real-root isolator holding the Sturm chain of one polynomial.
pub struct RootIsolator {
    poly: UniPoly,
    chain: Vec<UniPoly>,
}

impl RootIsolator {
    pub fn new(poly: &UniPoly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::DegeneratePolynomial);
        }
        Ok(RootIsolator {
            poly: poly.clone(),
            chain: poly.sturm_chain(),
        })
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: f64, b: f64) -> usize {
        sign_variations(&self.chain, a).saturating_sub(sign_variations(&self.chain, b))
    }

    /// Disjoint enclosures of every distinct real root in `[lo, hi]`, ascending.
    pub fn isolate(&self, lo: f64, hi: f64) -> Result<Vec<RootEnclosure>> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        let mut out = Vec::new();
        if self.poly.eval(lo) == 0.0 {
            out.push(RootEnclosure { lo, hi: lo });
        }
        if lo < hi {
            self.split(lo, hi, self.count(lo, hi), &mut out);
        }
        Ok(out)
    }

    fn split(&self, a: f64, b: f64, n: usize, out: &mut Vec<RootEnclosure>) {
        if n == 0 {
            return;
        }
        let m = 0.5 * (a + b);
        if n == 1 || m <= a || m >= b {
            // A cluster narrower than one ulp is reported as a single root.
            out.push(RootEnclosure { lo: a, hi: b });
            return;
        }
        let left = self.count(a, m);
        self.split(a, m, left, out);
        self.split(m, b, n.saturating_sub(left), out);
    }

    /// Shrinks an enclosure to at most `width`.
    pub fn refine(&self, e: RootEnclosure, width: f64) -> RootEnclosure {
        let RootEnclosure { mut lo, mut hi } = e;
        if lo == hi {
            return e;
        }
        let mut flo = self.poly.eval(lo);
        let fhi = self.poly.eval(hi);
        let bracketed = flo != 0.0 && fhi != 0.0 && (flo < 0.0) != (fhi < 0.0);
        while hi - lo > width {
            let m = 0.5 * (lo + hi);
            if m <= lo || m >= hi {
                break;
            }
            let fm = self.poly.eval(m);
            if fm == 0.0 {
                return RootEnclosure { lo: m, hi: m };
            }
            let go_left = if bracketed {
                (fm < 0.0) != (flo < 0.0)
            } else {
                // Even multiplicity: no sign change, use the Sturm count.
                self.count(lo, m) >= 1
            };
            if go_left {
                hi = m;
            } else {
                lo = m;
                flo = fm;
            }
        }
        RootEnclosure { lo, hi }
    }

    /// Distinct real roots in `[lo, hi]`, each refined to `width`.
    pub fn roots(&self, lo: f64, hi: f64, width: f64) -> Result<Vec<f64>> {
        Ok(self
            .isolate(lo, hi)?
            .into_iter()
            .map(|e| self.polish(self.refine(e, width)))
            .collect())
    }

    /// Endpoint or midpoint of `e`, improved by one Newton step when that
    /// stays inside the enclosure and lowers `|p|`.
    fn polish(&self, e: RootEnclosure) -> f64 {
        if self.poly.eval(e.hi) == 0.0 {
            return e.hi;
        }
        let m = e.midpoint();
        let fm = self.poly.eval(m);
        let d = self.poly.derivative().eval(m);
        if fm == 0.0 || d == 0.0 {
            return m;
        }
        let t = m - fm / d;
        if e.lo <= t && t <= e.hi && self.poly.eval(t).abs() < fm.abs() {
            t
        } else {
            m
        }
    }

    /// All distinct real roots on the real line.
    pub fn all_roots(&self, width: f64) -> Vec<f64> {
        let b = self.poly.root_bound();
        self.roots(-b, b, width).expect("finite Cauchy interval")
    }
}

/// Enclosures of the distinct real roots of `p` in `[lo, hi]`.
pub fn isolate_real_roots(p: &UniPoly, lo: f64, hi: f64) -> Result<Vec<RootEnclosure>> {
    RootIsolator::new(p)?.isolate(lo, hi)
}

/// Sparse multivariate polynomial over a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl MultiPoly {
    /// Terms are `(coefficient, exponent per variable)`.
    pub fn new(nvars: usize, terms: Vec<(f64, Vec<u32>)>) -> Self {
        assert!(
            terms.iter().all(|(_, e)| e.len() == nvars),
            "exponent vector length must equal nvars"
        );
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Highest variable index with a nonzero exponent.
    pub fn main_variable(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter_map(|(_, e)| e.iter().rposition(|&k| k > 0))
            .max()
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                e.iter()
                    .zip(point)
                    .fold(*c, |acc, (&k, &v)| acc * v.powi(k as i32))
            })
            .sum()
    }

    /// Substitutes `prefix` for the first variables and returns the result as
    /// a polynomial in variable `var = prefix.len()`. Variables after `var`
    /// must not occur.
    pub fn specialize(&self, prefix: &[f64]) -> UniPoly {
        let var = prefix.len();
        let degree = self.terms.iter().map(|(_, e)| e[var]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![0.0; degree + 1];
        for (c, e) in &self.terms {
            debug_assert!(e[var + 1..].iter().all(|&k| k == 0));
            let v = e[..var]
                .iter()
                .zip(prefix)
                .fold(*c, |acc, (&k, &x)| acc * x.powi(k as i32));
            coeffs[e[var] as usize] += v;
        }
        UniPoly::new(coeffs)
    }
}
