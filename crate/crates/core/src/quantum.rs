//! Small quantum cohomology of `P^r`: `Z[h, q] / (h^{r+1} - q)`.
//!
//! Elements are stored in the basis `q^a h^b` with `0 <= b <= r`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::ExactInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolyClass {
    r: u32,
    /// `(q exponent, h exponent) -> coefficient`
    terms: BTreeMap<(u64, u32), ExactInt>,
}

impl QPolyClass {
    pub fn zero(r: u32) -> Self {
        QPolyClass {
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(r: u32) -> Self {
        Self::basis(r, 0, 0, BigInt::one())
    }

    /// `c * q^a * h^b`, with `h^b` reduced by `h^{r+1} = q` when `b > r`.
    pub fn basis(r: u32, qexp: u64, hexp: u32, c: ExactInt) -> Self {
        let mut x = Self::zero(r);
        let (extra_q, h) = reduce(r, hexp as u64);
        x.accumulate((qexp + extra_q, h), c);
        x
    }

    /// Hyperplane class `h`.
    pub fn hyperplane(r: u32) -> Self {
        Self::basis(r, 0, 1, BigInt::one())
    }

    /// Point class `P = h^r`.
    pub fn point(r: u32) -> Self {
        Self::basis(r, 0, r, BigInt::one())
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u32, &ExactInt)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    /// Coefficient of the basis monomial `q^a h^b`.
    pub fn coeff(&self, qexp: u64, hexp: u32) -> ExactInt {
        self.terms
            .get(&(qexp, hexp))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    fn accumulate(&mut self, key: (u64, u32), c: ExactInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &QPolyClass) -> Result<QPolyClass> {
        check_rank(self, other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &ExactInt) -> QPolyClass {
        let mut out = Self::zero(self.r);
        for (k, c) in &self.terms {
            out.accumulate(*k, c * s);
        }
        out
    }

    pub fn pow(&self, k: u32) -> QPolyClass {
        (0..k).fold(Self::one(self.r), |acc, _| {
            qmul(&acc, self).expect("same r")
        })
    }
}

fn reduce(r: u32, hexp: u64) -> (u64, u32) {
    let m = r as u64 + 1;
    (hexp / m, (hexp % m) as u32)
}

fn check_rank(x: &QPolyClass, y: &QPolyClass) -> Result<()> {
    if x.r != y.r {
        return Err(Error::RankMismatch {
            left: x.r,
            right: y.r,
        });
    }
    Ok(())
}

/// Quantum product: `h^i * h^j = h^{i+j}` for `i + j <= r`, else `q h^{i+j-r-1}`.
pub fn qmul(x: &QPolyClass, y: &QPolyClass) -> Result<QPolyClass> {
    check_rank(x, y)?;
    let mut out = QPolyClass::zero(x.r);
    for (&(qa, ha), ca) in &x.terms {
        for (&(qb, hb), cb) in &y.terms {
            let (extra, h) = reduce(x.r, (ha + hb) as u64);
            out.accumulate((qa + qb + extra, h), ca * cb);
        }
    }
    Ok(out)
}

/// Quantum Euler class `sum_j gamma_j^dual * gamma_j` over the basis
/// `gamma_j = h^j` with dual `h^{r-j}`.
pub fn quantum_euler(r: u32) -> Result<QPolyClass> {
    if r == 0 {
        return Err(Error::invalid("quantum Euler class needs r >= 1"));
    }
    let mut e = QPolyClass::zero(r);
    for j in 0..=r {
        let term = qmul(
            &QPolyClass::basis(r, 0, r - j, BigInt::one()),
            &QPolyClass::basis(r, 0, j, BigInt::one()),
        )?;
        e = e.add(&term)?;
    }
    Ok(e)
}

/// Virtual Tevelev degree of `P^r` as the coefficient of `q^d P` in
/// `P^{*n} * E^{*g}`.
pub fn vtev_projective_qh(g: u32, d: u64, r: u32, n: u32) -> Result<ExactInt> {
    if r == 0 || d == 0 {
        return Err(Error::invalid("need r >= 1 and d >= 1"));
    }
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::invalid(format!(
            "unstable: 2g - 2 + n = {}",
            2 * g as i64 - 2 + n as i64
        )));
    }
    let product = qmul(&QPolyClass::point(r).pow(n), &quantum_euler(r)?.pow(g))?;
    Ok(product.coeff(d, r))
}

/// The marked-point count matching `(g, d, r)` for `P^r`, when integral and stable.
pub fn projective_n(g: u32, d: u64, r: u32) -> Option<u32> {
    let num = (r as u64 + 1) * d;
    if r == 0 || !num.is_multiple_of(r as u64) {
        return None;
    }
    let n = (num / r as u64) as i64 - g as i64 + 1;
    (n >= 1 && 2 * g as i64 - 2 + n > 0).then_some(n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h_pow(r: u32, k: u32) -> QPolyClass {
        QPolyClass::basis(r, 0, k, BigInt::one())
    }

    #[test]
    fn qmul_examples() {
        let h = QPolyClass::hyperplane(1);
        assert_eq!(
            qmul(&h, &h).unwrap(),
            QPolyClass::basis(1, 1, 0, BigInt::one())
        );

        let x = QPolyClass::basis(3, 2, 1, 7.into())
            .add(&QPolyClass::basis(3, 0, 3, (-2).into()))
            .unwrap();
        assert_eq!(qmul(&QPolyClass::one(3), &x).unwrap(), x);

        let h2 = h_pow(2, 2);
        assert_eq!(
            qmul(&h2, &h2).unwrap(),
            QPolyClass::basis(2, 1, 1, BigInt::one())
        );

        assert!(matches!(
            qmul(&QPolyClass::one(2), &QPolyClass::one(3)),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn euler_class_is_scaled_point() {
        for r in 1..=12u32 {
            assert_eq!(
                quantum_euler(r).unwrap(),
                QPolyClass::point(r).scale(&BigInt::from(r + 1))
            );
        }
        assert_eq!(
            quantum_euler(1).unwrap(),
            QPolyClass::basis(1, 0, 1, 2.into())
        );
        assert!(quantum_euler(0).is_err());
    }

    #[test]
    fn vtev_examples() {
        assert_eq!(vtev_projective_qh(2, 2, 2, 2).unwrap(), 9.into());
        assert_eq!(vtev_projective_qh(0, 1, 1, 3).unwrap(), 1.into());
        assert_eq!(vtev_projective_qh(1, 2, 2, 2).unwrap(), 0.into());
        assert!(vtev_projective_qh(0, 1, 1, 2).is_err());
    }

    #[test]
    fn vtev_matches_power_and_vanishes_off_condition() {
        for r in 1..=6u32 {
            for g in 0..=6u32 {
                for d in (r as u64..=4 * r as u64).step_by(r as usize) {
                    let Some(n) = projective_n(g, d, r) else {
                        continue;
                    };
                    let expected = num_traits::pow(BigInt::from(r + 1), g as usize);
                    assert_eq!(vtev_projective_qh(g, d, r, n).unwrap(), expected);
                    for n2 in [n - 1, n + 1] {
                        if n2 >= 1 && 2 * g as i64 - 2 + n2 as i64 > 0 {
                            assert!(vtev_projective_qh(g, d, r, n2).unwrap().is_zero());
                        }
                    }
                }
            }
        }
    }

    fn arb_class(r: u32) -> impl Strategy<Value = QPolyClass> {
        prop::collection::vec((0u64..3, 0..=r, -9i64..=9), 0..=8).prop_map(move |ts| {
            ts.into_iter().fold(QPolyClass::zero(r), |acc, (a, b, c)| {
                acc.add(&QPolyClass::basis(r, a, b, c.into())).unwrap()
            })
        })
    }

    fn triple() -> impl Strategy<Value = (QPolyClass, QPolyClass, QPolyClass)> {
        (1u32..=6).prop_flat_map(|r| (arb_class(r), arb_class(r), arb_class(r)))
    }

    proptest! {
        #[test]
        fn qmul_associative_commutative((x, y, z) in triple()) {
            let xy = qmul(&x, &y).unwrap();
            prop_assert_eq!(&xy, &qmul(&y, &x).unwrap());
            prop_assert_eq!(qmul(&xy, &z).unwrap(), qmul(&x, &qmul(&y, &z).unwrap()).unwrap());
        }

        #[test]
        fn grading_is_additive(r in 1u32..=6, a1 in 0u64..3, b1 in 0u32..=6, a2 in 0u64..3, b2 in 0u32..=6) {
            let b1 = b1.min(r);
            let b2 = b2.min(r);
            let x = QPolyClass::basis(r, a1, b1, 3.into());
            let y = QPolyClass::basis(r, a2, b2, 5.into());
            let grade = |a: u64, b: u32| a * (r as u64 + 1) + b as u64;
            for (a, b, _) in qmul(&x, &y).unwrap().terms() {
                prop_assert!(b <= r);
                prop_assert_eq!(grade(a, b), grade(a1, b1) + grade(a2, b2));
            }
        }
    }
}
