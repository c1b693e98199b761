//! Independent oracles for the Grassmannian and hypersurface routes.

use num_bigint::BigInt;
use proptest::prelude::*;

use tevelev::closed_forms::deg_t_insertions_closed;
use tevelev::jacobian::{deg_t, HypParams, InsertionProfile};
use tevelev::schubert::tev_p1_schubert;

/// Dense bivariate integer polynomial, `c[a][b]` the coefficient of `x^a y^b`.
#[derive(Clone)]
struct Bi {
    c: Vec<Vec<i128>>,
}

impl Bi {
    fn zero(size: usize) -> Self {
        Bi {
            c: vec![vec![0; size]; size],
        }
    }

    fn mono(size: usize, a: usize, b: usize) -> Self {
        let mut p = Self::zero(size);
        if a < size && b < size {
            p.c[a][b] = 1;
        }
        p
    }

    fn size(&self) -> usize {
        self.c.len()
    }

    fn add(&self, o: &Bi) -> Bi {
        let mut p = self.clone();
        for a in 0..self.size() {
            for b in 0..self.size() {
                p.c[a][b] += o.c[a][b];
            }
        }
        p
    }

    fn mul(&self, o: &Bi) -> Bi {
        let n = self.size();
        let mut p = Self::zero(n);
        for a in 0..n {
            for b in 0..n {
                if self.c[a][b] == 0 {
                    continue;
                }
                for c in 0..n - a {
                    for d in 0..n - b {
                        p.c[a + c][b + d] += self.c[a][b] * o.c[c][d];
                    }
                }
            }
        }
        p
    }

    /// Complete homogeneous `h_k(x, y)`.
    fn h(size: usize, k: usize) -> Bi {
        (0..=k).fold(Self::zero(size), |acc, a| {
            acc.add(&Self::mono(size, a, k - a))
        })
    }
}

/// Integral over `Gr(2, m)` of a symmetric polynomial in the Chern roots of
/// the dual tautological subbundle, where `sigma_i = h_i`:
/// `-(1/2) [x^{m-1} y^{m-1}] (phi * (x - y)^2)`.
fn gr2_integral(phi: &Bi, m: usize) -> i128 {
    let size = phi.size();
    let diff = Bi::mono(size, 1, 0).add(&{
        let mut neg = Bi::mono(size, 0, 1);
        neg.c[0][1] = -1;
        neg
    });
    let vand = diff.mul(&diff);
    let top = phi.mul(&vand).c[m - 1][m - 1];
    assert_eq!(top % 2, 0);
    -top / 2
}

fn tev_p1_residue(g: u32, d: u32) -> i128 {
    let s = 2 * d as i64 - 2 - g as i64;
    if s < 0 {
        return 0;
    }
    let m = d as usize + 1;
    let size = 2 * m + 2;
    let sigma1 = Bi::h(size, 1);
    let mut phi = Bi::mono(size, 0, 0);
    for _ in 0..g {
        phi = phi.mul(&sigma1);
    }
    let mut sum = Bi::zero(size);
    for i in 0..=s as usize {
        sum = sum.add(&Bi::h(size, i).mul(&Bi::h(size, s as usize - i)));
    }
    gr2_integral(&phi.mul(&sum), m)
}

#[test]
fn residue_oracle_sanity() {
    // deg Gr(2,4) = 2, deg Gr(2,5) = 5
    let size = 12;
    let s1 = Bi::h(size, 1);
    let p4 = (0..4).fold(Bi::mono(size, 0, 0), |a, _| a.mul(&s1));
    assert_eq!(gr2_integral(&p4, 4), 2);
    let p6 = (0..6).fold(Bi::mono(size, 0, 0), |a, _| a.mul(&s1));
    assert_eq!(gr2_integral(&p6, 5), 5);
}

#[test]
fn schubert_route_matches_residue_oracle() {
    for g in 0..=10u32 {
        for d in 1..=12u32 {
            if 2 * d as i64 - g as i64 + 1 < 0 {
                continue;
            }
            let pieri = tev_p1_schubert(g, d).unwrap();
            assert_eq!(pieri, BigInt::from(tev_p1_residue(g, d)), "g={g} d={d}");
        }
    }
}

fn insertion_problem() -> impl Strategy<Value = Option<(HypParams, InsertionProfile)>> {
    (
        3u32..=5,
        0u32..=8,
        0u32..=2,
        prop::collection::vec(0u32..=8, 1..=7),
    )
        .prop_map(|(e, r_off, g, raw)| {
            let r = (e - 1 + r_off).min(8).max(e - 1);
            let ells: Vec<u32> = raw.iter().map(|x| 1 + x % (r + 1)).collect();
            let n = ells.len() as i64;
            let excess: i64 = ells.iter().map(|&l| l as i64 - 1).sum();
            let numer = r as i64 * (n + g as i64 - 1) - excess;
            let fano = r as i64 + 2 - e as i64;
            if numer <= 0 || numer % fano != 0 {
                return None;
            }
            let prof = InsertionProfile::new(ells, r).ok()?;
            let p = HypParams::with_insertions(g, (numer / fano) as u32, e, r, &prof).ok()?;
            (p.t() >= g).then_some((p, prof))
        })
}

proptest! {
    #[test]
    fn insertion_engine_matches_closed_form(problem in insertion_problem()) {
        if let Some((p, prof)) = problem {
            let engine = deg_t(&p, &prof).unwrap();
            let closed = deg_t_insertions_closed(p.g(), p.d(), p.e(), p.r(), &prof).unwrap();
            prop_assert_eq!(engine, closed);
        }
    }
}
