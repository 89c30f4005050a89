//! Random quasi-homogeneous germs in normal form, for randomized testing.
//!
//! A family fixes weights `(a, b)`, the multiplicity `n` and either the pure
//! power `yᵐ` of the third coordinate or, when there is none, the degree of
//! the third coordinate. Every monomial `xⁱyʲ` with `i, j ≥ 1` of the right
//! weighted degree then gets a small random integer coefficient.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{MPoly, Rational};
use crate::germ::{MapGerm, XY};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThirdCoordinate {
    /// `yᵐ + x·q(x, y)`, with `m` not a multiple of `n`.
    PurePower(u32),
    /// `x·q(x, y)` of the given weighted degree (only for `n = 2`).
    Degree(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QhFamily {
    pub a: u64,
    pub b: u64,
    pub n: u32,
    pub third: ThirdCoordinate,
}

impl QhFamily {
    pub fn d2(&self) -> u64 {
        self.n as u64 * self.b
    }

    pub fn d3(&self) -> u64 {
        match self.third {
            ThirdCoordinate::PurePower(m) => m as u64 * self.b,
            ThirdCoordinate::Degree(d) => d,
        }
    }

    /// Draws a family with `a ≤ max_a`, `b ≤ max_b`, `n ∈ {2, 3, 4}`.
    pub fn random<R: Rng>(rng: &mut R, max_a: u64, max_b: u64) -> Self {
        loop {
            let a = rng.gen_range(1..=max_a);
            let b = rng.gen_range(1..=max_b);
            if a.gcd(&b) != 1 {
                continue;
            }
            let n = rng.gen_range(2..=4u32);
            let third = if n == 2 && rng.gen_bool(0.3) {
                let i = rng.gen_range(1..=3u64);
                let j = rng.gen_range(1..=4u64);
                ThirdCoordinate::Degree(a * i + b * j)
            } else {
                let m = rng.gen_range(n + 1..=n + 5);
                if m % n == 0 {
                    continue;
                }
                ThirdCoordinate::PurePower(m)
            };
            let family = QhFamily { a, b, n, third };
            if family.d3() < family.d2() {
                continue;
            }
            return family;
        }
    }
}

/// Exponents `(i, j)` with `i, j ≥ 1` and `a·i + b·j = d`.
pub fn mixed_monomials(a: u64, b: u64, d: u64) -> Vec<[u32; 2]> {
    (1..=d / a)
        .filter_map(|i| {
            let rest = d.checked_sub(a * i)?;
            (rest > 0 && rest % b == 0).then(|| [i as u32, (rest / b) as u32])
        })
        .collect()
}

fn random_part<R: Rng>(rng: &mut R, a: u64, b: u64, d: u64) -> MPoly {
    let mut p = MPoly::zero(XY);
    for e in mixed_monomials(a, b, d) {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            p.add_term(e.to_vec(), Rational::from_integer(c.into()));
        }
    }
    p
}

/// A germ of the family with random coefficients. It may fail to be
/// finitely determined; callers filter.
pub fn random_germ<R: Rng>(family: &QhFamily, rng: &mut R) -> MapGerm {
    let (a, b) = (family.a, family.b);
    let y_pow = |k: u32| MPoly::from_int_terms(XY, &[(&[0, k], 1)]);
    let f2 = &y_pow(family.n) + &random_part(rng, a, b, family.d2());
    let f3 = match family.third {
        ThirdCoordinate::PurePower(m) => &y_pow(m) + &random_part(rng, a, b, family.d3()),
        ThirdCoordinate::Degree(d) => random_part(rng, a, b, d),
    };
    MapGerm::new(MPoly::var(XY, "x").expect("x"), f2, f3).expect("terms vanish at 0")
}

/// A family and germ drawn from a ChaCha stream with the given seed, with
/// `a ≤ 5` and `b ≤ 3`.
pub fn seeded_germ(seed: u64) -> (QhFamily, MapGerm) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = QhFamily::random(&mut rng, 5, 3);
    let germ = random_germ(&family, &mut rng);
    (family, germ)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_have_the_degree() {
        assert_eq!(mixed_monomials(1, 1, 3), vec![[1, 2], [2, 1]]);
        assert_eq!(mixed_monomials(4, 1, 9), vec![[1, 5], [2, 1]]);
        assert!(mixed_monomials(2, 3, 4).is_empty());
    }

    #[test]
    fn random_germs_are_quasi_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let fam = QhFamily::random(&mut rng, 5, 3);
            let g = random_germ(&fam, &mut rng);
            let w = [fam.a, fam.b];
            assert_eq!(g.f[1].weighted_degree(&w), Some(fam.d2()));
            if !g.f[2].is_zero() {
                assert_eq!(g.f[2].weighted_degree(&w), Some(fam.d3()));
            }
        }
    }
}
