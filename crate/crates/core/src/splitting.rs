//! Decomposition of odd rational primes in `Z[q]` and generators of the split prime ideals.

use crate::arith::{is_prime, mod_pow};
use crate::error::{Error, Result};
use crate::ring::{exact_div, gcd_q, QuadInt, RingSpec};

/// How `<p>` factors in `Z[q]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl Splitting {
    pub fn as_str(&self) -> &'static str {
        match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        }
    }
}

fn check_odd_prime(p: i64) -> Result<()> {
    if p == 2 {
        Err(Error::EvenPrime)
    } else if !is_prime(p) {
        Err(Error::NotOddPrime(p))
    } else {
        Ok(())
    }
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: i64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(match mod_pow(a, ((p - 1) / 2) as u64, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

pub fn classify_rational_prime(p: i64, ring: &RingSpec) -> Result<Splitting> {
    check_odd_prime(p)?;
    Ok(match legendre(ring.d(), p)? {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    })
}

/// Square root of `a` modulo an odd prime `p` by Tonelli-Shanks, normalized to the smaller
/// of the two roots.
pub fn sqrt_mod(a: i64, p: i64) -> Result<i64> {
    if legendre(a, p)? != 1 {
        return Err(Error::NonResidue { a, p });
    }
    let a = a.rem_euclid(p);
    let mut q = (p - 1) as u64;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p)? != -1 {
        z += 1;
    }
    let mul = |x: i64, y: i64| ((x as i128 * y as i128) % p as i128) as i64;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2);
            i += 1;
        }
        let b = mod_pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Ok(r.min(p - r))
}

/// Root `x'` of `X² + BX + C` modulo `p`, from the quadratic formula with `sqrt_mod(D, p)`.
pub fn minimal_poly_root(p: i64, ring: &RingSpec) -> Result<i64> {
    // B² - 4C equals D when B = -1, giving x' = (1 + √D) / 2, and 4D when B = 0, giving √D.
    let s = sqrt_mod(ring.d(), p)?;
    if ring.b() == 0 {
        return Ok(s);
    }
    let inv2 = (p + 1) / 2;
    Ok(((1 + s) * inv2) % p)
}

/// Whether `u` has a strictly smaller argument than `v` (both in the closed upper half-plane).
fn smaller_argument(u: &QuadInt, v: &QuadInt) -> bool {
    let b = u.ring().b() as i128;
    let xu = 2 * u.m1() as i128 - b * u.m2() as i128;
    let xv = 2 * v.m1() as i128 - b * v.m2() as i128;
    xu * v.m2() as i128 - u.m2() as i128 * xv > 0
}

/// Elements of norm `p` dividing `x' - q`, searched over `|m2|` up to the norm bound.
fn search_generator(p: i64, ring: &RingSpec, target: &QuadInt) -> Result<QuadInt> {
    // N(m) >= (C - B²/4) m2², so |m2| <= sqrt(4p / (4C - B²)).
    let disc = ring.four_c_minus_b2();
    let mut bound = 0i64;
    while (bound + 1) * (bound + 1) * disc <= 4 * p {
        bound += 1;
    }
    let m1_bound = (p as f64).sqrt().ceil() as i64 + bound + 1;
    for m2 in -bound..=bound {
        for m1 in -m1_bound..=m1_bound {
            let cand = ring.elem(m1, m2);
            if cand.norm()? == p && exact_div(target, &cand)?.is_some() {
                return Ok(cand.canonical_associate());
            }
        }
    }
    Err(Error::SplitSearchExhausted { p, bound })
}

/// Generators `(π, π̂)` of the two prime ideals over a split prime `p`.
///
/// `π` is the canonical associate with the smaller argument among the two conjugate
/// classes; `π̂` is its literal conjugate, so `π π̂ = p`.
pub fn split_prime(p: i64, ring: &RingSpec) -> Result<(QuadInt, QuadInt)> {
    match classify_rational_prime(p, ring)? {
        Splitting::Split => {}
        other => {
            return Err(Error::NotSplit {
                p,
                d: ring.d(),
                kind: other.as_str(),
            })
        }
    }
    let x = minimal_poly_root(p, ring)?;
    let target = ring.elem(x, -1);
    let found = if ring.is_euclidean() {
        gcd_q(&ring.int(p), &target)?
    } else {
        search_generator(p, ring, &target)?
    };
    let other = found.conjugate().canonical_associate();
    let pi = if smaller_argument(&other, &found) {
        other
    } else {
        found
    };
    Ok((pi, pi.conjugate()))
}
