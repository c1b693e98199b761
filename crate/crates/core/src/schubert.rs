//! Schubert calculus on `Gr(2, d+1)` via the two-row Pieri rule.
//!
//! Classes are indexed by partitions `(a, b)` fitting in a `2 x box` rectangle,
//! `box = d - 1`. The special class `sigma_i` is `(i, 0)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::ExactInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoRowPartition {
    pub a: u32,
    pub b: u32,
}

impl TwoRowPartition {
    pub fn new(a: u32, b: u32, box_size: u32) -> Result<Self> {
        if !(box_size >= a && a >= b) {
            return Err(Error::invalid(format!(
                "partition ({a},{b}) does not fit a 2x{box_size} box"
            )));
        }
        Ok(TwoRowPartition { a, b })
    }

    pub fn size(&self) -> u32 {
        self.a + self.b
    }
}

/// Integer combination of Schubert classes sharing one box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertCombo {
    box_size: u32,
    terms: BTreeMap<TwoRowPartition, ExactInt>,
}

impl SchubertCombo {
    pub fn zero(box_size: u32) -> Self {
        SchubertCombo {
            box_size,
            terms: BTreeMap::new(),
        }
    }

    /// The fundamental class `sigma_{0,0}`.
    pub fn one(box_size: u32) -> Self {
        Self::schubert(TwoRowPartition { a: 0, b: 0 }, box_size)
    }

    pub fn schubert(p: TwoRowPartition, box_size: u32) -> Self {
        let mut c = Self::zero(box_size);
        if p.a <= box_size && p.b <= p.a {
            c.terms.insert(p, BigInt::one());
        }
        c
    }

    /// `sigma_i`, zero for `i > box`.
    pub fn special(i: u32, box_size: u32) -> Self {
        Self::schubert(TwoRowPartition { a: i, b: 0 }, box_size)
    }

    pub fn box_size(&self) -> u32 {
        self.box_size
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TwoRowPartition, &ExactInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: u32, b: u32) -> ExactInt {
        self.terms
            .get(&TwoRowPartition { a, b })
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    fn accumulate(&mut self, p: TwoRowPartition, c: ExactInt) {
        let slot = self.terms.entry(p).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &SchubertCombo) -> Result<SchubertCombo> {
        if self.box_size != other.box_size {
            return Err(Error::invalid(format!(
                "box sizes differ: {} vs {}",
                self.box_size, other.box_size
            )));
        }
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.accumulate(*p, c.clone());
        }
        Ok(out)
    }

    /// `self * sigma_i` by the Pieri rule.
    pub fn pieri(&self, i: u32) -> SchubertCombo {
        pieri_special(self, i)
    }
}

/// Pieri rule for a special class: `sigma_{a,b} * sigma_i` is the sum of
/// `sigma_{a',b'}` over `a' + b' = a + b + i` with `box >= a' >= a >= b' >= b`.
pub fn pieri_special(c: &SchubertCombo, i: u32) -> SchubertCombo {
    let bx = c.box_size;
    let mut out = SchubertCombo::zero(bx);
    if i > bx {
        return out;
    }
    for (p, coeff) in &c.terms {
        let total = p.a + p.b + i;
        // b' ranges over [b, a]; a' = total - b' must satisfy a <= a' <= box
        for b2 in p.b..=p.a {
            let Some(a2) = total.checked_sub(b2) else {
                continue;
            };
            if a2 >= p.a && a2 <= bx {
                out.accumulate(TwoRowPartition { a: a2, b: b2 }, coeff.clone());
            }
        }
    }
    out
}

/// Degree of the zero-cycle: the coefficient of `sigma_{box,box}`.
pub fn grassmann_integral(c: &SchubertCombo) -> ExactInt {
    c.coefficient(c.box_size, c.box_size)
}

/// `sigma_1^k` on the given box, by `k` successive Pieri steps.
pub fn sigma1_power(k: u32, box_size: u32) -> SchubertCombo {
    (0..k).fold(SchubertCombo::one(box_size), |acc, _| acc.pieri(1))
}

/// Tevelev degree of `P^1` as the integral over `Gr(2, d+1)` of
/// `sigma_1^g * sum_{i+j = 2d-2-g} sigma_i sigma_j`.
///
/// Requires `d >= 1` and `n = 2d - g + 1 >= 0`.
pub fn tev_p1_schubert(g: u32, d: u32) -> Result<ExactInt> {
    check_p1_params(g, d)?;
    let bx = d - 1;
    let s = 2 * d as i64 - 2 - g as i64;
    if s < 0 {
        return Ok(BigInt::zero());
    }
    let s = s as u32;
    let base = sigma1_power(g, bx);
    let mut total = BigInt::zero();
    for i in 0..=s {
        let j = s - i;
        // sigma_i with i > box vanishes; pieri_special handles it
        total += grassmann_integral(&base.pieri(i).pieri(j));
    }
    Ok(total)
}

pub(crate) fn check_p1_params(g: u32, d: u32) -> Result<i64> {
    if d == 0 {
        return Err(Error::invalid("d must be at least 1"));
    }
    let n = 2 * d as i64 - g as i64 + 1;
    if n < 0 {
        return Err(Error::invalid(format!(
            "n = 2d - g + 1 = {n} is negative (g={g}, d={d})"
        )));
    }
    if 2 * g as i64 - 2 + n <= 0 {
        return Err(Error::invalid(format!(
            "unstable: 2g - 2 + n = {} (g={g}, n={n})",
            2 * g as i64 - 2 + n
        )));
    }
    Ok(n)
}
