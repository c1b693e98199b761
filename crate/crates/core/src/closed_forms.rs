//! Closed-form degree formulas, used as oracles for the other routes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::enumerativity::{dims_check, enum_bound_closed};
use crate::error::{Error, Result};
use crate::exact::{binom, factorial, ipow, ExactInt, UniPoly};
use crate::jacobian::{HypParams, InsertionProfile};
use crate::schubert::check_p1_params;

/// Tevelev degree of `P^1` by the binomial formula
/// `2^g - sum_{i=0}^{g-d-1} C(g,i) + (g-d-1) C(g,g-d) + (d-g-1) C(g,g-d+1)`.
///
/// Evaluated literally. It agrees with [`crate::schubert::tev_p1_schubert`]
/// for `d >= g` but not below; see [`p1_discrepancies`].
pub fn tev_p1_cps(g: u32, d: u32) -> Result<ExactInt> {
    check_p1_params(g, d)?;
    let (g, d) = (g as i64, d as i64);
    let mut v = ipow(2, g as u32);
    for i in 0..=(g - d - 1) {
        v -= binom(g, i)?;
    }
    v += BigInt::from(g - d - 1) * binom(g, g - d)?;
    v += BigInt::from(d - g - 1) * binom(g, g - d + 1)?;
    Ok(v)
}

/// One row of the binomial-vs-Schubert disagreement table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P1Discrepancy {
    pub g: u32,
    pub d: u32,
    pub n: u32,
    pub cps: ExactInt,
    pub schubert: ExactInt,
}

/// Every `(g, d)` with `g <= max_genus`, `1 <= d < g` and `n >= 0` where the two
/// `P^1` routes disagree, ordered by `(g, d)`.
pub fn p1_discrepancies(max_genus: u32) -> Result<Vec<P1Discrepancy>> {
    let mut out = Vec::new();
    for g in 0..=max_genus {
        for d in 1..g {
            let Ok(n) = check_p1_params(g, d) else {
                continue;
            };
            let cps = tev_p1_cps(g, d)?;
            let schubert = crate::schubert::tev_p1_schubert(g, d)?;
            if cps != schubert {
                out.push(P1Discrepancy {
                    g,
                    d,
                    n: n as u32,
                    cps,
                    schubert,
                });
            }
        }
    }
    Ok(out)
}

/// A closed-form hypersurface value with its validity flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypersurfaceValue {
    pub value: ExactInt,
    pub n: u32,
    /// `3 <= e <= (r+3)/2`, the range where the virtual formula is proven.
    pub virtual_range: bool,
    /// `r > (e+1)(e-2)` and `d` above the closed-form enumerativity bound.
    pub bound_ok: bool,
}

/// `((e-1)!)^n (r+2-e)^g e^{(d-n)e-g+1}`.
pub fn vtev_hypersurface_closed(g: u32, d: u32, e: u32, r: u32) -> Result<HypersurfaceValue> {
    let n = dims_check(g, d, e, r)?;
    let t = twist_rank(g, d, e, n)?;
    let value = num_traits::pow(factorial(e - 1), n as usize)
        * ipow(r as i64 + 2 - e as i64, g)
        * ipow(e as i64, t);
    Ok(HypersurfaceValue {
        value,
        n,
        virtual_range: 2 * e <= r + 3,
        bound_ok: bound_ok(g, d, e, r),
    })
}

pub(crate) fn bound_ok(g: u32, d: u32, e: u32, r: u32) -> bool {
    enum_bound_closed(g, e, r).is_ok_and(|b| b.admits(d))
}

/// `t = (d-n)e - g + 1`, required to be nonnegative.
pub(crate) fn twist_rank(g: u32, d: u32, e: u32, n: u32) -> Result<u32> {
    let t = (d as i64 - n as i64) * e as i64 - g as i64 + 1;
    u32::try_from(t).map_err(|_| Error::invalid(format!("t = (d-n)e - g + 1 = {t} is negative")))
}

/// `(r+1)^g`.
pub fn vtev_projective_closed(g: u32, r: u32) -> Result<ExactInt> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    Ok(ipow(r as i64 + 1, g))
}

/// Coefficients `alpha_1 .. alpha_{e+r+1}` of
/// `(1 + z + ... + z^{r+1}) * prod_{j=0}^{e-1} (j + (e-j) z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaList {
    pub e: u32,
    pub r: u32,
    values: Vec<ExactInt>,
}

impl AlphaList {
    /// `alpha_ell` for `1 <= ell <= e + r + 1`.
    pub fn get(&self, ell: u32) -> Result<&ExactInt> {
        (ell as usize)
            .checked_sub(1)
            .and_then(|i| self.values.get(i))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "alpha index {ell} outside 1..={}",
                    self.values.len()
                ))
            })
    }

    pub fn values(&self) -> &[ExactInt] {
        &self.values
    }

    pub fn sum(&self) -> ExactInt {
        self.values.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.values.iter().eq(self.values.iter().rev())
    }
}

pub fn alpha_coefficients(e: u32, r: u32) -> Result<AlphaList> {
    if e < 3 || r == 0 {
        return Err(Error::invalid(format!(
            "alpha list needs e >= 3, r >= 1 (got e={e}, r={r})"
        )));
    }
    let geometric = UniPoly::from_coeffs(vec![BigInt::one(); r as usize + 2]);
    let poly = (0..e).fold(geometric, |acc, j| {
        acc.mul(&UniPoly::from_coeffs(vec![j.into(), (e - j).into()]))
    });
    if !poly.coeff(0).is_zero() {
        return Err(Error::breach("alpha polynomial has a constant term"));
    }
    let values: Vec<ExactInt> = (1..=(e + r + 1) as usize).map(|k| poly.coeff(k)).collect();
    if values.iter().any(|a| !a.is_positive()) {
        return Err(Error::breach("alpha list has a non-positive entry"));
    }
    Ok(AlphaList { e, r, values })
}

/// `(r+2-e)^g e^{(d-n)e-g+1} prod_i alpha_{ell_i}` under the insertion
/// dimension condition `r(n+g-1) = (r+2-e)d + sum(ell_i - 1)`.
pub fn deg_t_insertions_closed(
    g: u32,
    d: u32,
    e: u32,
    r: u32,
    profile: &InsertionProfile,
) -> Result<ExactInt> {
    let p = HypParams::with_insertions(g, d, e, r, profile)?;
    let alphas = alpha_coefficients(e, r)?;
    let mut v = ipow(r as i64 + 2 - e as i64, g) * ipow(e as i64, p.t());
    for &ell in profile.ells() {
        v *= alphas.get(ell)?;
    }
    Ok(v)
}
