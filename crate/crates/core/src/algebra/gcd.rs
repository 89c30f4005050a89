//! Multivariate gcd over Q and square-free parts.
//!
//! The gcd is the classical recursive one: split off the content with respect
//! to the highest variable (itself a gcd in fewer variables), then run a
//! primitive pseudo-remainder sequence on the primitive parts.
//!
//! Large double point curves (hundreds of terms, y-degree near 100) make the
//! exact sequence expensive, so [`square_free_part`] first tries a modular
//! certificate: if a univariate specialization in each variable stays
//! square-free modulo a large prime without dropping degree, no repeated
//! factor can exist over Q. Only when that certificate fails do we fall back
//! to the exact gcd.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::mpoly::MPoly;
use super::rational::Rational;

/// Canonical gcd: primitive with positive graded-lex leading coefficient.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    gcd_rec(a, b).primitive_part()
}

fn main_var(p: &MPoly) -> Option<usize> {
    (0..p.nvars()).rev().find(|&v| p.degree_in(v).unwrap_or(0) > 0)
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let v = match (main_var(a), main_var(b)) {
        (None, _) | (_, None) => return a.constant_like(Rational::one()),
        (Some(x), Some(y)) => x.max(y),
    };
    let da = a.degree_in(v).unwrap_or(0);
    let db = b.degree_in(v).unwrap_or(0);
    if da == 0 {
        return gcd_rec(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd_rec(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == Some(0) {
            return c;
        }
        f = g;
        g = primitive_in(&r, v);
    }
    &c * &primitive_in(&g, v)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MPoly, v: usize) -> MPoly {
    let mut acc = p.zero_like();
    for c in p.coefficients_in(v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd_rec(&acc, &c);
        if acc.is_constant() {
            return acc.constant_like(Rational::one());
        }
    }
    acc
}

/// `p` divided by its content in `v`.
pub fn primitive_in(p: &MPoly, v: usize) -> MPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive_part()
}

/// Pseudo-remainder of `f` by `g` in the variable `v`.
fn prem(f: &MPoly, g: &MPoly, v: usize) -> MPoly {
    let dg = g.degree_in(v).unwrap_or(0);
    let gc = g.coefficients_in(v);
    let lcg = gc.last().expect("nonzero").clone();
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v).unwrap_or(0);
        if dr < dg {
            break;
        }
        let lcr = r.coefficients_in(v).pop().expect("nonzero");
        let mut shift = vec![0; r.nvars()];
        shift[v] = dr - dg;
        let t = (&lcr * g).mul_monomial(&shift, &Rational::one());
        r = &(&lcg * &r) - &t;
    }
    r
}

/// `p / gcd(p, ∂p/∂x₁, …)` as a canonical primitive polynomial, and whether
/// `p` was already square-free.
pub fn square_free_part(p: &MPoly) -> (MPoly, bool) {
    assert!(!p.is_zero(), "square-free part of the zero polynomial");
    if p.is_constant() {
        return (p.constant_like(Rational::one()), true);
    }
    if certify_square_free(p) {
        return (p.primitive_part(), true);
    }
    let g = repeated_factor(p);
    if g.is_constant() {
        return (p.primitive_part(), true);
    }
    (p.div_exact(&g).expect("gcd divides").primitive_part(), false)
}

/// `gcd(p, ∂p/∂x₁, …, ∂p/∂xₙ)`: the product of repeated factors (each to one
/// power less).
pub fn repeated_factor(p: &MPoly) -> MPoly {
    let mut g = p.clone();
    for v in 0..p.nvars() {
        let d = p.derivative(v);
        if d.is_zero() {
            continue;
        }
        g = gcd(&g, &d);
        if g.is_constant() {
            break;
        }
    }
    g.primitive_part()
}

/// True when the germ of `V(p)` at the origin is reduced: no repeated factor
/// of `p` passes through 0.
pub fn is_reduced_at_origin(p: &MPoly) -> bool {
    if p.is_zero() {
        return false;
    }
    if certify_square_free(p) {
        return true;
    }
    let g = repeated_factor(p);
    !g.constant_term().is_zero()
}

// ---------------------------------------------------------------------------
// Modular certificate

const PRIME: u64 = (1 << 61) - 1;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> u64 {
    powm(a, PRIME - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let m = n.mod_floor(&BigInt::from(PRIME));
    m.to_u64().expect("reduced below the modulus")
}

fn reduce_rational(r: &Rational) -> Option<u64> {
    let d = reduce_int(r.denom());
    (d != 0).then(|| mulm(reduce_int(r.numer()), invm(d)))
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_mod(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = invm(b[db]);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = mulm(top, inv);
            let off = r.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                r[off + i] = (r[off + i] + PRIME - mulm(c, bc)) % PRIME;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn gcd_degree_mod(a: &[u64], b: &[u64]) -> usize {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_mod(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Specializes every variable except `keep` to `point` and checks that the
/// resulting univariate polynomial keeps its full degree in `keep` and is
/// square-free modulo the prime.
fn univariate_certificate(p: &MPoly, keep: usize, point: &[u64]) -> bool {
    let deg = match p.degree_in(keep) {
        Some(d) if d > 0 => d as usize,
        _ => return true, // variable absent: nothing to certify in this direction
    };
    let mut coeffs = vec![0u64; deg + 1];
    for (e, c) in p.terms() {
        let Some(mut val) = reduce_rational(c) else {
            return false;
        };
        for (i, &k) in e.iter().enumerate() {
            if i != keep && k > 0 {
                val = mulm(val, powm(point[i], k as u64));
            }
        }
        let slot = &mut coeffs[e[keep] as usize];
        *slot = (*slot + val) % PRIME;
    }
    if coeffs[deg] == 0 {
        return false;
    }
    let deriv: Vec<u64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| mulm(c, k as u64 % PRIME))
        .collect();
    gcd_degree_mod(&coeffs, &deriv) == 0
}

/// Sound (never wrongly positive) test that `p` has no repeated factor.
///
/// A repeated factor `h² | p` has positive degree in some variable `v`; after
/// specializing the other variables at a point where the leading coefficient
/// in `v` survives modulo the prime, `h̄²` still divides and `h̄` keeps its
/// degree, so the specialization cannot be square-free.
pub fn certify_square_free(p: &MPoly) -> bool {
    const POINTS: [u64; 6] = [3, 7, 12345, 271828, 314159, 99991];
    let n = p.nvars();
    (0..n).all(|keep| {
        POINTS.iter().enumerate().any(|(j, _)| {
            let point: Vec<u64> = (0..n).map(|i| POINTS[(i + j) % POINTS.len()]).collect();
            univariate_certificate(p, keep, &point)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    const XY: &[&str] = &["x", "y"];

    fn p(s: &str) -> MPoly {
        parse_poly(s, XY).unwrap()
    }

    #[test]
    fn gcd_of_products() {
        let a = p("(x - y^2)*(x + y)*(x^3 - 2*y)");
        let b = p("(x - y^2)*(x^3 - 2*y)*(x*y + 1)");
        assert_eq!(gcd(&a, &b), p("(x - y^2)*(x^3 - 2*y)").primitive_part());
        assert_eq!(gcd(&p("x^2*y"), &p("x*y^3")), p("x*y"));
        assert!(gcd(&p("x + 1"), &p("y - 1")).is_constant());
    }

    #[test]
    fn square_free_examples() {
        let (part, sf) = square_free_part(&p("x^2 - x*y^4"));
        assert!(sf);
        assert_eq!(part.to_string(), "x*y^4 - x^2");
        let (part, sf) = square_free_part(&p("x^2"));
        assert!(!sf);
        assert_eq!(part, p("x"));
        let (part, sf) = square_free_part(&p("x*y^2 - x^5"));
        assert!(sf);
        assert_eq!(part, p("x^5 - x*y^2"));
        let (part, sf) = square_free_part(&p("(x - y)^3*(x + y)"));
        assert!(!sf);
        assert_eq!(part, p("(x - y)*(x + y)"));
    }

    #[test]
    fn certificate_is_sound() {
        assert!(!certify_square_free(&p("(x + y^2)^2*y")));
        assert!(!certify_square_free(&p("(x - 1)^2*(y + x)")));
        assert!(certify_square_free(&p("x*(x - y^4)")));
    }

    #[test]
    fn local_reducedness() {
        assert!(is_reduced_at_origin(&p("(x - 1)^2*(x - y^2)")));
        assert!(!is_reduced_at_origin(&p("x^2")));
        assert!(!is_reduced_at_origin(&p("(x - y)^2*(x + 1)")));
    }
}
