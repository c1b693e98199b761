//! Degree of the incidence zero-cycle `T` over the Jacobian.
//!
//! The ambient space is `P(V^{r+2}) x (P^{r+1})^n` over `Jac^d(C)`, with
//! `V` of rank `d - g + 1`. Classes are polynomials in the relative
//! hyperplane class `H`, the factor hyperplanes `H_i` and the theta divisor.
//! Each marked point only couples `H` with its own `H_i`, so the
//! `prod H_i^{r+1}` coefficient of the full product is the product of
//! per-point coefficients ([`point_factor`]); the remaining class in `H` and
//! `theta` is pushed forward along the projective bundle by Segre classes and
//! integrated with `deg theta^g = g!`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::closed_forms::twist_rank;
use crate::enumerativity::dims_check;
use crate::error::{Error, Result};
use crate::exact::{
    factorial, ipow, rat, rat_to_int, ExactInt, ExactRat, Roster, TruncPoly, UniPoly,
};

/// Validated `(g, d, e, r)` with the derived marked-point count `n`, the
/// rank `t = e(d-n) - g + 1` and the projective-bundle rank `N = (r+2)(d-g+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HypParams {
    g: u32,
    d: u32,
    e: u32,
    r: u32,
    n: u32,
    t: u32,
    fiber_rank: u64,
}

impl HypParams {
    /// Point insertions (`ell_i = 1`): `n` is solved from
    /// `r(n + g - 1) = (r + 2 - e) d`.
    pub fn new(g: u32, d: u32, e: u32, r: u32) -> Result<Self> {
        let n = dims_check(g, d, e, r)?;
        Self::build(g, d, e, r, n)
    }

    /// Linear-space insertions: `n` is the profile length and
    /// `r(n + g - 1) = (r + 2 - e) d + sum(ell_i - 1)` must hold.
    pub fn with_insertions(
        g: u32,
        d: u32,
        e: u32,
        r: u32,
        profile: &InsertionProfile,
    ) -> Result<Self> {
        if e < 3 || r == 0 || d == 0 {
            return Err(Error::invalid(format!(
                "need e >= 3, r >= 1, d >= 1 (got e={e}, r={r}, d={d})"
            )));
        }
        if e > r + 1 {
            return Err(Error::invalid(format!(
                "need e <= r + 1 (got e={e}, r={r})"
            )));
        }
        if profile.max_ell() > r + 1 {
            return Err(Error::invalid(format!(
                "insertion dimension {} exceeds r + 1 = {}",
                profile.max_ell(),
                r + 1
            )));
        }
        let n = profile.len() as u32;
        let lhs = r as i64 * (n as i64 + g as i64 - 1);
        let rhs = (r as i64 + 2 - e as i64) * d as i64 + profile.excess() as i64;
        if lhs != rhs {
            return Err(Error::invalid(format!(
                "insertion dimension condition fails: r(n+g-1) = {lhs} but (r+2-e)d + sum(ell-1) = {rhs}"
            )));
        }
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(Error::invalid(format!(
                "unstable: 2g - 2 + n = {}",
                2 * g as i64 - 2 + n as i64
            )));
        }
        Self::build(g, d, e, r, n)
    }

    fn build(g: u32, d: u32, e: u32, r: u32, n: u32) -> Result<Self> {
        if d < 2 * g {
            return Err(Error::invalid(format!("need d >= 2g (got d={d}, g={g})")));
        }
        let t = twist_rank(g, d, e, n)?;
        if t == 0 {
            return Err(Error::invalid("need t = (d-n)e - g + 1 >= 1"));
        }
        let fiber_rank = (r as u64 + 2) * (d - g + 1) as u64;
        Ok(HypParams {
            g,
            d,
            e,
            r,
            n,
            t,
            fiber_rank,
        })
    }

    pub fn g(&self) -> u32 {
        self.g
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn t(&self) -> u32 {
        self.t
    }
    /// `N = (r+2)(d-g+1)`, the rank of `V^{r+2}`.
    pub fn fiber_rank(&self) -> u64 {
        self.fiber_rank
    }
}

/// Dimensions `ell_i` of the linear spaces imposed at the marked points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InsertionProfile(Vec<u32>);

impl InsertionProfile {
    pub fn new(ells: Vec<u32>, r: u32) -> Result<Self> {
        if ells.is_empty() {
            return Err(Error::invalid("insertion profile is empty"));
        }
        if let Some(bad) = ells.iter().find(|&&l| l == 0 || l > r + 1) {
            return Err(Error::invalid(format!("ell = {bad} outside 1..={}", r + 1)));
        }
        Ok(InsertionProfile(ells))
    }

    /// `n` point insertions.
    pub fn points(n: u32) -> Self {
        InsertionProfile(vec![1; n as usize])
    }

    pub fn ells(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum(ell_i - 1)`
    pub fn excess(&self) -> u64 {
        self.0.iter().map(|&l| l as u64 - 1).sum()
    }

    fn max_ell(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

const H: &str = "H";
const THETA: &str = "theta";

/// Class on `P(V^{r+2})` in `H` and `theta`, with `theta^{g+1} = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacClass(TruncPoly);

impl JacClass {
    pub fn roster(g: u32) -> Roster {
        Roster::new([(H, None), (THETA, Some(g))])
    }

    pub fn zero(g: u32) -> Self {
        JacClass(TruncPoly::zero(&Self::roster(g)))
    }

    /// `c * H^h * theta^m`.
    pub fn monomial(g: u32, c: ExactRat, h: u32, m: u32) -> Self {
        JacClass(TruncPoly::monomial(&Self::roster(g), c, &[h, m]))
    }

    pub fn from_poly(p: TruncPoly) -> Result<Self> {
        let cap = p.roster().vars().get(1).and_then(|v| v.cap).unwrap_or(0);
        if *p.roster() != Self::roster(cap) {
            return Err(Error::RosterMismatch {
                left: p.roster().to_string(),
                right: Self::roster(cap).to_string(),
            });
        }
        Ok(JacClass(p))
    }

    pub fn poly(&self) -> &TruncPoly {
        &self.0
    }

    /// Coefficient of `H^h theta^m`.
    pub fn coefficient(&self, h: u32, m: u32) -> ExactRat {
        self.0.coefficient(&[h, m])
    }

    /// `(H exponent, theta exponent, coefficient)` triples.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &ExactRat)> {
        self.0.terms().map(|(e, c)| (e[0], e[1], c))
    }

    pub fn add(&self, other: &JacClass) -> Result<JacClass> {
        Ok(JacClass(self.0.add(&other.0)?))
    }

    pub fn mul(&self, other: &JacClass) -> Result<JacClass> {
        Ok(JacClass(self.0.mul(&other.0)?))
    }

    /// Multiplies by a polynomial in `H` alone.
    pub fn mul_h_poly(&self, p: &UniPoly) -> Result<JacClass> {
        let lifted = TruncPoly::from_uni(self.0.roster(), H, p)?;
        Ok(JacClass(self.0.mul(&lifted)?))
    }

    /// Smallest and largest `H` exponents present.
    pub fn h_support(&self) -> Option<(u32, u32)> {
        let mut it = self.terms().map(|(h, _, _)| h);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), h| (lo.min(h), hi.max(h))))
    }
}

impl fmt::Display for JacClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Coefficient of `H_i^{r+1}` in
/// `(sum_{a+b=r+1} H^a H_i^b) * prod_{k=1}^{e} ((k-1)H + (e+1-k)H_i) * H_i^{r+1-ell}`,
/// computed by expanding the bivariate product with `H_i^{r+2} = 0`.
///
/// The result is always a single monomial `alpha_ell * H^{r+1+e-ell}`.
pub fn point_factor(e: u32, r: u32, ell: u32) -> Result<UniPoly> {
    if e < 3 || r == 0 {
        return Err(Error::invalid(format!(
            "need e >= 3, r >= 1 (got e={e}, r={r})"
        )));
    }
    if ell == 0 || ell > r + 1 {
        return Err(Error::invalid(format!("ell = {ell} outside 1..={}", r + 1)));
    }
    const HI: &str = "H_i";
    let ring = Roster::new([(H, None), (HI, Some(r + 1))]);
    let h = TruncPoly::var(&ring, H)?;
    let hi = TruncPoly::var(&ring, HI)?;

    // diagonal class pulled back along evaluation
    let mut diag = TruncPoly::zero(&ring);
    for a in 0..=r + 1 {
        diag = diag.add(&TruncPoly::monomial(
            &ring,
            ExactRat::one(),
            &[a, r + 1 - a],
        ))?;
    }
    // order-e vanishing conditions at the marked point
    let mut vanishing = TruncPoly::one(&ring);
    for k in 1..=e {
        let factor = h.scale(&rat(k - 1)).add(&hi.scale(&rat(e + 1 - k)))?;
        vanishing = vanishing.mul(&factor)?;
    }
    let linear = TruncPoly::var_pow(&ring, HI, r + 1 - ell)?;

    let full = diag.mul(&vanishing)?.mul(&linear)?;
    let factor = UniPoly::from_trunc(&full.coeff_extract(HI, r + 1)?, H)?;
    let expected_degree = (r + 1 + e - ell) as usize;
    match factor.as_monomial() {
        Some((k, _)) if k == expected_degree => Ok(factor),
        _ => Err(Error::breach(format!(
            "point factor for (e={e}, r={r}, ell={ell}) is {factor}, not a monomial of degree {expected_degree}"
        ))),
    }
}

/// `e^t * sum_{m=0}^{g} ((-e)^m / m!) theta^m H^{t-m}`.
pub fn excess_class(g: u32, e: u32, t: u32) -> Result<JacClass> {
    if t < g {
        return Err(Error::OutOfModel { t: t as i64, g });
    }
    let scale = ipow(e as i64, t);
    let mut class = JacClass::zero(g);
    for m in 0..=g {
        let c = ExactRat::new(&scale * ipow(-(e as i64), m), factorial(m));
        class = class.add(&JacClass::monomial(g, c, t - m, m))?;
    }
    Ok(class)
}

/// Class of the vanishing locus of `F` along the whole curve, as a multiplier
/// on `P(V^{r+2})`.
pub fn step3_class(p: &HypParams) -> Result<JacClass> {
    excess_class(p.g, p.e, p.t)
}

/// Pushforward along `P(V^{r+2}) -> Jac^d(C)`: `H^{N-1+k}` maps to
/// `(r+2)^k theta^k / k!` and lower powers of `H` map to zero.
pub fn pushforward_theta(c: &JacClass, p: &HypParams) -> JacClass {
    let g = p.g;
    let base = p.fiber_rank - 1;
    let mut out = JacClass::zero(g);
    for (h, m, coeff) in c.terms() {
        let Some(k) = (h as u64).checked_sub(base) else {
            continue;
        };
        if k + m as u64 > g as u64 {
            continue;
        }
        let k = k as u32;
        let segre = ExactRat::new(ipow(p.r as i64 + 2, k), factorial(k));
        let term = JacClass::monomial(g, coeff * segre, 0, m + k);
        out = out.add(&term).expect("same roster");
    }
    out
}

/// `deg theta^g = g!`; lower powers of theta integrate to zero.
pub fn integrate_theta(c: &JacClass, g: u32) -> ExactRat {
    c.coefficient(0, g) * rat(factorial(g))
}

/// Product of all per-point factors with the excess class, before pushforward.
pub fn pre_pushforward_class(p: &HypParams, profile: &InsertionProfile) -> Result<JacClass> {
    check_profile(p, profile)?;
    let factors = point_factors(p, profile)?;
    let product = factors.iter().fold(UniPoly::one(), |acc, f| acc.mul(f));
    step3_class(p)?.mul_h_poly(&product)
}

fn check_profile(p: &HypParams, profile: &InsertionProfile) -> Result<()> {
    let expected = HypParams::with_insertions(p.g, p.d, p.e, p.r, profile)?;
    if expected != *p {
        return Err(Error::invalid(
            "parameters do not match the insertion profile",
        ));
    }
    Ok(())
}

fn point_factors(p: &HypParams, profile: &InsertionProfile) -> Result<Vec<UniPoly>> {
    let mut cache: BTreeMap<u32, UniPoly> = BTreeMap::new();
    profile
        .ells()
        .iter()
        .map(|&ell| {
            if let Some(f) = cache.get(&ell) {
                return Ok(f.clone());
            }
            let f = point_factor(p.e, p.r, ell)?;
            cache.insert(ell, f.clone());
            Ok(f)
        })
        .collect()
}

/// Multiplies the given per-point factors with `excess`, pushes forward and
/// integrates. The result must be a nonnegative integer and the product must
/// be supported in `H`-degrees `N-1 ..= N-1+g`; anything else is an
/// [`Error::InvariantBreach`].
pub fn assemble_degree(
    p: &HypParams,
    per_point: &[UniPoly],
    excess: &JacClass,
) -> Result<ExactInt> {
    let product = per_point.iter().fold(UniPoly::one(), |acc, f| acc.mul(f));
    let full = excess.mul_h_poly(&product)?;
    if let Some((lo, hi)) = full.h_support() {
        let base = p.fiber_rank - 1;
        if (lo as u64) < base || hi as u64 > base + p.g as u64 {
            return Err(Error::breach(format!(
                "class before pushforward has H-degrees {lo}..={hi}, expected within {base}..={}",
                base + p.g as u64
            )));
        }
    }
    let degree = integrate_theta(&pushforward_theta(&full, p), p.g);
    let value = rat_to_int(&degree)
        .ok_or_else(|| Error::breach(format!("degree {degree} is not an integer")))?;
    if value.is_negative() {
        return Err(Error::breach(format!("degree {value} is negative")));
    }
    Ok(value)
}

/// Degree of `T` for the given insertion profile.
pub fn deg_t(p: &HypParams, profile: &InsertionProfile) -> Result<ExactInt> {
    check_profile(p, profile)?;
    let factors = point_factors(p, profile)?;
    assemble_degree(p, &factors, &step3_class(p)?)
}

/// Tevelev degree from the engine: `deg T` with point insertions, divided by `e^n`.
pub fn tev_hypersurface_engine(p: &HypParams) -> Result<ExactInt> {
    let deg = deg_t(p, &InsertionProfile::points(p.n))?;
    let en = ipow(p.e as i64, p.n);
    if !(&deg % &en).is_zero() {
        return Err(Error::breach(format!(
            "e^n = {en} does not divide deg T = {deg}"
        )));
    }
    Ok(deg / en)
}

/// `deg T` with point insertions.
pub fn deg_t_points(p: &HypParams) -> Result<ExactInt> {
    deg_t(p, &InsertionProfile::points(p.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> ExactRat {
        ExactRat::new(n.into(), d.into())
    }

    /// Independent oracle: expand the per-point product as a dense
    /// two-variable integer array and read off the `H_i^{r+1}` column.
    fn point_factor_oracle(e: u32, r: u32, ell: u32) -> Vec<i128> {
        let top = (r + 1) as usize;
        let size = (r + e + 3) as usize * 2;
        // poly[a][b] = coefficient of H^a H_i^b
        let mut poly = vec![vec![0i128; size]; size];
        for a in 0..=top {
            poly[a][top - a] = 1;
        }
        let mul_linear = |p: &Vec<Vec<i128>>, ch: i128, chi: i128| {
            let mut out = vec![vec![0i128; size]; size];
            for a in 0..size - 1 {
                for b in 0..size - 1 {
                    out[a + 1][b] += p[a][b] * ch;
                    out[a][b + 1] += p[a][b] * chi;
                }
            }
            out
        };
        for k in 1..=e as i128 {
            poly = mul_linear(&poly, k - 1, e as i128 + 1 - k);
        }
        for _ in 0..(r + 1 - ell) {
            poly = mul_linear(&poly, 0, 1);
        }
        (0..size).map(|a| poly[a][top]).collect()
    }

    #[test]
    fn point_factor_examples() {
        assert_eq!(
            point_factor(3, 3, 1).unwrap(),
            UniPoly::monomial(6.into(), 6)
        );
        assert_eq!(
            point_factor(3, 3, 2).unwrap(),
            UniPoly::monomial(21.into(), 5)
        );
        assert_eq!(
            point_factor(3, 3, 4).unwrap(),
            UniPoly::monomial(27.into(), 3)
        );
        assert!(point_factor(3, 3, 0).is_err());
        assert!(point_factor(3, 3, 5).is_err());
    }

    #[test]
    fn point_factor_matches_dense_oracle() {
        for e in 3..=6 {
            for r in 1..=6 {
                for ell in 1..=r + 1 {
                    let got = point_factor(e, r, ell).unwrap();
                    let oracle = point_factor_oracle(e, r, ell);
                    for (k, c) in oracle.iter().enumerate() {
                        assert_eq!(
                            got.coeff(k),
                            BigInt::from(*c),
                            "e={e} r={r} ell={ell} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn point_factor_matches_alpha() {
        for e in 3..=6 {
            for r in 1..=8 {
                let alphas = crate::closed_forms::alpha_coefficients(e, r).unwrap();
                for ell in 1..=r + 1 {
                    let f = point_factor(e, r, ell).unwrap();
                    let (k, c) = f.as_monomial().unwrap();
                    assert_eq!(k as u32, r + 1 + e - ell);
                    assert_eq!(c, alphas.get(ell).unwrap());
                }
            }
        }
    }

    #[test]
    fn excess_class_examples() {
        let c = excess_class(0, 3, 1).unwrap();
        assert_eq!(c, JacClass::monomial(0, q(3, 1), 1, 0));

        let c = excess_class(1, 3, 3).unwrap();
        let expected = JacClass::monomial(1, q(27, 1), 3, 0)
            .add(&JacClass::monomial(1, q(-81, 1), 2, 1))
            .unwrap();
        assert_eq!(c, expected);

        let c = excess_class(2, 3, 4).unwrap();
        assert_eq!(c.coefficient(4, 0), q(81, 1));
        assert_eq!(c.coefficient(3, 1), q(-243, 1));
        assert_eq!(c.coefficient(2, 2), q(729, 2));
        assert_eq!(c.terms().count(), 3);

        assert_eq!(excess_class(3, 3, 2), Err(Error::OutOfModel { t: 2, g: 3 }));
    }

    #[test]
    fn pushforward_examples() {
        // g=1, d=3, e=3, r=3 => N = 5 * 3 = 15
        let p = HypParams::new(1, 3, 3, 3).unwrap();
        assert_eq!(p.fiber_rank(), 15);
        let push = |h| pushforward_theta(&JacClass::monomial(1, q(1, 1), h, 0), &p);
        assert_eq!(push(14), JacClass::monomial(1, q(1, 1), 0, 0));
        assert_eq!(push(15), JacClass::monomial(1, q(5, 1), 0, 1));
        assert_eq!(push(13), JacClass::zero(1));
        // beyond theta^g
        assert_eq!(push(16), JacClass::zero(1));
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(
            integrate_theta(&JacClass::monomial(2, q(1, 1), 0, 2), 2),
            q(2, 1)
        );
        assert_eq!(
            integrate_theta(&JacClass::monomial(0, q(1, 1), 0, 0), 0),
            q(1, 1)
        );
        assert_eq!(
            integrate_theta(&JacClass::monomial(2, q(1, 1), 0, 1), 2),
            q(0, 1)
        );
    }

    #[test]
    fn deg_t_examples() {
        let p = HypParams::new(0, 3, 3, 3).unwrap();
        assert_eq!((p.n(), p.t(), p.fiber_rank()), (3, 1, 20));
        assert_eq!(deg_t_points(&p).unwrap(), 648.into());
        assert_eq!(tev_hypersurface_engine(&p).unwrap(), 24.into());

        let p = HypParams::new(1, 3, 3, 3).unwrap();
        assert_eq!(deg_t_points(&p).unwrap(), 1944.into());
        assert_eq!(tev_hypersurface_engine(&p).unwrap(), 216.into());

        let prof = InsertionProfile::new(vec![2, 2, 2, 1, 1, 1], 3).unwrap();
        let p = HypParams::with_insertions(0, 6, 3, 3, &prof).unwrap();
        assert_eq!(deg_t(&p, &prof).unwrap(), 6001128.into());

        let p = HypParams::new(0, 8, 3, 8).unwrap();
        assert_eq!(p.n(), 8);
        assert_eq!(tev_hypersurface_engine(&p).unwrap(), 768.into());
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(HypParams::new(0, 4, 3, 3).is_err());
        // d < 2g
        assert!(HypParams::new(2, 3, 3, 3).is_err());
        let p = HypParams::new(0, 3, 3, 3).unwrap();
        let wrong = InsertionProfile::points(2);
        assert!(deg_t(&p, &wrong).is_err());
        assert!(InsertionProfile::new(vec![1, 5], 3).is_err());
        assert!(InsertionProfile::new(vec![], 3).is_err());
    }

    #[test]
    fn support_window_holds() {
        for e in 3..=5u32 {
            for r in (2 * e - 3)..=10 {
                for g in 0..=3u32 {
                    for d in 1..=30 {
                        let Ok(p) = HypParams::new(g, d, e, r) else {
                            continue;
                        };
                        let c =
                            pre_pushforward_class(&p, &InsertionProfile::points(p.n())).unwrap();
                        let (lo, hi) = c.h_support().unwrap();
                        let base = p.fiber_rank() - 1;
                        assert_eq!((lo as u64, hi as u64), (base, base + g as u64));
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_factor_is_a_breach() {
        let p = HypParams::new(1, 3, 3, 3).unwrap();
        let good = point_factor(3, 3, 1).unwrap();
        // wrong H-degree
        let shifted = UniPoly::monomial(6.into(), 7);
        let err =
            assemble_degree(&p, &[good.clone(), shifted], &step3_class(&p).unwrap()).unwrap_err();
        assert!(err.is_invariant_breach());
        // non-integral excess class
        let seventh = JacClass::monomial(1, q(1, 7), 3, 0);
        let err = assemble_degree(&p, &[good.clone(), good], &seventh).unwrap_err();
        assert!(err.is_invariant_breach(), "{err}");
    }
}
