//! Exact integer/rational primitives and the truncated polynomial engine.
//!
//! [`TruncPoly`] is a sparse multivariate polynomial over the rationals in a
//! fixed, named variable roster. Each variable may carry a degree cap; any
//! monomial whose exponent exceeds its cap is zero in the ring, so products
//! are truncated eagerly. This models nilpotent cohomology generators such as
//! a hyperplane class on `P^k` (cap `k`) or the theta divisor on a genus-`g`
//! Jacobian (cap `g`).
//!
//! [`UniPoly`] is the dense integer-coefficient univariate fast path.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type ExactInt = BigInt;
pub type ExactRat = BigRational;

/// `C(n, k)`, with `C(n, k) = 0` whenever `k < 0` or `k > n`.
pub fn binom(n: i64, k: i64) -> Result<ExactInt> {
    if n < 0 {
        return Err(Error::invalid(format!("binomial with negative top {n}")));
    }
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

pub fn factorial(n: u32) -> ExactInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `base^exp` as an exact integer.
pub fn ipow(base: i64, exp: u32) -> ExactInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn rat(n: impl Into<BigInt>) -> ExactRat {
    BigRational::from_integer(n.into())
}

/// Returns the integer value of `q`, or `None` when its denominator is not 1.
pub fn rat_to_int(q: &ExactRat) -> Option<ExactInt> {
    q.is_integer().then(|| q.to_integer())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    /// Highest exponent that survives; `None` means uncapped.
    pub cap: Option<u32>,
}

/// Ordered list of named variables shared by every polynomial of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Roster(Vec<Variable>);

impl Roster {
    pub fn new<'a>(vars: impl IntoIterator<Item = (&'a str, Option<u32>)>) -> Self {
        Roster(
            vars.into_iter()
                .map(|(name, cap)| Variable {
                    name: name.to_string(),
                    cap,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn admits(&self, exps: &[u32]) -> bool {
        self.0
            .iter()
            .zip(exps)
            .all(|(v, &e)| v.cap.is_none_or(|c| e <= c))
    }
}

impl fmt::Display for Roster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match v.cap {
                Some(c) => write!(f, "{}<={}", v.name, c)?,
                None => write!(f, "{}", v.name)?,
            }
        }
        write!(f, "]")
    }
}

/// Sparse truncated polynomial with exact rational coefficients.
///
/// Invariant: no stored exponent exceeds its cap and no stored coefficient is
/// zero, so structural equality is ring equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncPoly {
    roster: Roster,
    terms: BTreeMap<Vec<u32>, ExactRat>,
}

impl TruncPoly {
    pub fn zero(roster: &Roster) -> Self {
        TruncPoly {
            roster: roster.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(roster: &Roster, c: ExactRat) -> Self {
        Self::monomial(roster, c, &vec![0; roster.len()])
    }

    pub fn one(roster: &Roster) -> Self {
        Self::constant(roster, ExactRat::one())
    }

    /// `c * prod(var_i^exps_i)`; zero if any exponent is above its cap.
    ///
    /// Panics if `exps` does not have one entry per roster variable.
    pub fn monomial(roster: &Roster, c: ExactRat, exps: &[u32]) -> Self {
        assert_eq!(exps.len(), roster.len(), "exponent tuple length");
        let mut p = Self::zero(roster);
        if !c.is_zero() && roster.admits(exps) {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    /// The polynomial `name^1`.
    pub fn var(roster: &Roster, name: &str) -> Result<Self> {
        Self::var_pow(roster, name, 1)
    }

    pub fn var_pow(roster: &Roster, name: &str, k: u32) -> Result<Self> {
        let idx = roster.index_of(name)?;
        let mut exps = vec![0; roster.len()];
        exps[idx] = k;
        Ok(Self::monomial(roster, ExactRat::one(), &exps))
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent tuples.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &ExactRat)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, exps: &[u32]) -> ExactRat {
        self.terms.get(exps).cloned().unwrap_or_else(ExactRat::zero)
    }

    /// Largest exponent of `name` over all stored terms (0 for the zero polynomial).
    pub fn degree_in(&self, name: &str) -> Result<u32> {
        let idx = self.roster.index_of(name)?;
        Ok(self.terms.keys().map(|e| e[idx]).max().unwrap_or(0))
    }

    fn check_roster(&self, other: &TruncPoly) -> Result<()> {
        if self.roster != other.roster {
            return Err(Error::RosterMismatch {
                left: self.roster.to_string(),
                right: other.roster.to_string(),
            });
        }
        Ok(())
    }

    fn accumulate(terms: &mut BTreeMap<Vec<u32>, ExactRat>, exps: Vec<u32>, c: ExactRat) {
        use std::collections::btree_map::Entry;
        match terms.entry(exps) {
            Entry::Vacant(slot) => {
                if !c.is_zero() {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check_roster(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::accumulate(&mut terms, e.clone(), c.clone());
        }
        Ok(TruncPoly {
            roster: self.roster.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> TruncPoly {
        TruncPoly {
            roster: self.roster.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &ExactRat) -> TruncPoly {
        if s.is_zero() {
            return Self::zero(&self.roster);
        }
        TruncPoly {
            roster: self.roster.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        trunc_mul(self, other)
    }

    pub fn pow(&self, k: u32) -> TruncPoly {
        (0..k).fold(Self::one(&self.roster), |acc, _| {
            trunc_mul(&acc, self).expect("same roster")
        })
    }

    /// Coefficient of `name^k`, as a polynomial in the other variables
    /// (same roster, with the exponent of `name` set to 0).
    pub fn coeff_extract(&self, name: &str, k: u32) -> Result<TruncPoly> {
        let idx = self.roster.index_of(name)?;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[idx] == k)
            .map(|(e, c)| {
                let mut e = e.clone();
                e[idx] = 0;
                (e, c.clone())
            })
            .collect();
        Ok(TruncPoly {
            roster: self.roster.clone(),
            terms,
        })
    }

    /// Embeds `p(name)` into this roster.
    pub fn from_uni(roster: &Roster, name: &str, p: &UniPoly) -> Result<TruncPoly> {
        let idx = roster.index_of(name)?;
        let mut out = Self::zero(roster);
        for (k, c) in p.nonzero_terms() {
            let mut exps = vec![0; roster.len()];
            exps[idx] = k as u32;
            if roster.admits(&exps) {
                out.terms.insert(exps, rat(c.clone()));
            }
        }
        Ok(out)
    }
}

/// Product of two truncated polynomials over the same roster, discarding
/// every term whose exponent exceeds a cap.
pub fn trunc_mul(a: &TruncPoly, b: &TruncPoly) -> Result<TruncPoly> {
    a.check_roster(b)?;
    let mut terms = BTreeMap::new();
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if a.roster.admits(&exps) {
                TruncPoly::accumulate(&mut terms, exps, ca * cb);
            }
        }
    }
    Ok(TruncPoly {
        roster: a.roster.clone(),
        terms,
    })
}

fn fmt_coeff_monomial(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &ExactRat,
    vars: &[(&str, u32)],
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { '-' } else { '+' })?;
    }
    let mut factors = Vec::new();
    if !abs.is_one() || vars.iter().all(|(_, e)| *e == 0) {
        if abs.is_integer() {
            factors.push(abs.to_integer().to_string());
        } else {
            factors.push(format!("({abs})"));
        }
    }
    for (name, e) in vars {
        match e {
            0 => {}
            1 => factors.push(name.to_string()),
            _ => factors.push(format!("{name}^{e}")),
        }
    }
    write!(f, "{}", factors.join("*"))
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (exps, c)) in terms.into_iter().enumerate() {
            let vars: Vec<(&str, u32)> = self
                .roster
                .vars()
                .iter()
                .zip(exps)
                .map(|(v, &e)| (v.name.as_str(), e))
                .collect();
            fmt_coeff_monomial(f, i == 0, c, &vars)?;
        }
        Ok(())
    }
}

/// Dense univariate polynomial with integer coefficients.
///
/// `coeffs[k]` is the coefficient of `x^k`; trailing zeros are trimmed so the
/// zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<ExactInt>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: ExactInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<ExactInt>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> ExactInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, &ExactInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// `Some((k, c))` when the polynomial is exactly `c * x^k` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(usize, &ExactInt)> {
        let mut it = self.nonzero_terms();
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.nonzero_terms() {
            for (j, b) in other.nonzero_terms() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// Reads a polynomial in the single variable `name` back out of a
    /// [`TruncPoly`]. Fails if another variable appears or a coefficient is
    /// not an integer.
    pub fn from_trunc(p: &TruncPoly, name: &str) -> Result<UniPoly> {
        let idx = p.roster().index_of(name)?;
        let mut coeffs = Vec::new();
        for (exps, c) in p.terms() {
            if exps.iter().enumerate().any(|(i, &e)| i != idx && e != 0) {
                return Err(Error::invalid(format!(
                    "polynomial is not univariate in `{name}`"
                )));
            }
            let c = rat_to_int(c)
                .ok_or_else(|| Error::invalid(format!("non-integral coefficient {c}")))?;
            let k = exps[idx] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            coeffs[k] = c;
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<_> = self.nonzero_terms().collect();
        for (i, (k, c)) in terms.into_iter().rev().enumerate() {
            fmt_coeff_monomial(f, i == 0, &rat(c.clone()), &[("x", k as u32)])?;
        }
        Ok(())
    }
}
