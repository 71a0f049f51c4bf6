//! Rings of integers `Z[q]` of imaginary quadratic fields with class number one.
//!
//! An element is stored by its coordinates `(m1, m2)` in the integral basis `{1, q}`,
//! where `q` is a root of the minimal polynomial `X² + BX + C`. Multiplication reduces
//! `q²` to `-Bq - C`; the conjugate `q̂ = -B - q` gives `conj(m1 + m2 q) = (m1 - B m2) - m2 q`.
//!
//! Every fallible operation checks for `i64` overflow. The operator impls
//! (`+`, `-`, `*`) are conveniences that panic where the checked methods return `Err`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{self, floor_div, gcd, gcd_i128, is_prime, round_div_even, to_i64};
use crate::error::{ck, Error, Result};
use crate::splitting::legendre;

/// The nine imaginary quadratic fields whose ring of integers is a PID.
pub const PID_DISCRIMINANTS: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

/// The norm-Euclidean subset of [`PID_DISCRIMINANTS`].
pub const EUCLIDEAN_DISCRIMINANTS: [i64; 5] = [-1, -2, -3, -7, -11];

/// A validated imaginary quadratic PID `Z[q]` with minimal polynomial `X² + BX + C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingSpec {
    d: i64,
    b: i64,
    c: i64,
    euclidean: bool,
}

impl RingSpec {
    pub fn from_d(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::NotImaginary(d));
        }
        if !arith::is_square_free(d) {
            return Err(Error::NotSquareFree(d));
        }
        if !PID_DISCRIMINANTS.contains(&d) {
            return Err(Error::NotPid(d));
        }
        let (b, c) = if d.rem_euclid(4) == 1 {
            (-1, (1 - d) / 4)
        } else {
            (0, -d)
        };
        Ok(RingSpec {
            d,
            b,
            c,
            euclidean: EUCLIDEAN_DISCRIMINANTS.contains(&d),
        })
    }

    /// `Z[i]`.
    pub fn gaussian() -> Self {
        Self::from_d(-1).expect("D = -1 is valid")
    }

    /// `Z[ω]`, `ω = e^{iπ/3}`.
    pub fn eisenstein() -> Self {
        Self::from_d(-3).expect("D = -3 is valid")
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean
    }

    /// `4C - B² = |disc| / (1 or 4)`; the radicand of `Im q` up to the factor 1/2 or 1.
    pub(crate) fn four_c_minus_b2(&self) -> i64 {
        4 * self.c - self.b * self.b
    }

    pub fn elem(&self, m1: i64, m2: i64) -> QuadInt {
        QuadInt {
            ring: *self,
            m1,
            m2,
        }
    }

    pub fn int(&self, n: i64) -> QuadInt {
        self.elem(n, 0)
    }

    pub fn zero(&self) -> QuadInt {
        self.elem(0, 0)
    }

    pub fn one(&self) -> QuadInt {
        self.elem(1, 0)
    }

    /// The basis element `q`.
    pub fn q(&self) -> QuadInt {
        self.elem(0, 1)
    }

    /// All units, in a fixed order. Units have `|m2| <= 1` since `C >= 1`.
    pub fn units(&self) -> Vec<QuadInt> {
        let mut out = Vec::with_capacity(6);
        for m2 in -1..=1 {
            for m1 in -2..=2 {
                let u = self.elem(m1, m2);
                if u.norm_i128() == 1 {
                    out.push(u);
                }
            }
        }
        out
    }

    /// Symbol used when printing elements: `i` for `Z[i]`, `w` for `Z[ω]`, else `q`.
    pub fn symbol(&self) -> &'static str {
        match self.d {
            -1 => "i",
            -3 => "w",
            _ => "q",
        }
    }

    fn check(&self, other: &RingSpec) -> Result<()> {
        if self != other {
            Err(Error::RingMismatch(self.d, other.d))
        } else {
            Ok(())
        }
    }
}

/// Builds a [`RingSpec`] from its discriminant parameter `D`.
pub fn ring_from_d(d: i64) -> Result<RingSpec> {
    RingSpec::from_d(d)
}

/// A quadratic integer `m1 + m2 q` of a [`RingSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadInt {
    ring: RingSpec,
    m1: i64,
    m2: i64,
}

impl QuadInt {
    pub fn new(ring: RingSpec, m1: i64, m2: i64) -> Self {
        ring.elem(m1, m2)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn m1(&self) -> i64 {
        self.m1
    }

    pub fn m2(&self) -> i64 {
        self.m2
    }

    pub fn coords(&self) -> (i64, i64) {
        (self.m1, self.m2)
    }

    pub fn is_zero(&self) -> bool {
        self.m1 == 0 && self.m2 == 0
    }

    pub fn is_rational(&self) -> bool {
        self.m2 == 0
    }

    pub fn checked_add(&self, rhs: &QuadInt) -> Result<QuadInt> {
        self.ring.check(&rhs.ring)?;
        Ok(self.ring.elem(
            ck(self.m1.checked_add(rhs.m1))?,
            ck(self.m2.checked_add(rhs.m2))?,
        ))
    }

    pub fn checked_sub(&self, rhs: &QuadInt) -> Result<QuadInt> {
        self.ring.check(&rhs.ring)?;
        Ok(self.ring.elem(
            ck(self.m1.checked_sub(rhs.m1))?,
            ck(self.m2.checked_sub(rhs.m2))?,
        ))
    }

    pub fn checked_neg(&self) -> Result<QuadInt> {
        Ok(self
            .ring
            .elem(ck(self.m1.checked_neg())?, ck(self.m2.checked_neg())?))
    }

    /// `(a1 + a2 q)(b1 + b2 q)` with `q² = -Bq - C`.
    pub fn checked_mul(&self, rhs: &QuadInt) -> Result<QuadInt> {
        self.ring.check(&rhs.ring)?;
        let (a1, a2) = (self.m1 as i128, self.m2 as i128);
        let (b1, b2) = (rhs.m1 as i128, rhs.m2 as i128);
        let (bb, cc) = (self.ring.b as i128, self.ring.c as i128);
        let qq = a2 * b2;
        let r1 = a1 * b1 - cc * qq;
        let r2 = a1 * b2 + a2 * b1 - bb * qq;
        Ok(self.ring.elem(to_i64(r1)?, to_i64(r2)?))
    }

    pub fn checked_scale(&self, k: i64) -> Result<QuadInt> {
        Ok(self
            .ring
            .elem(ck(self.m1.checked_mul(k))?, ck(self.m2.checked_mul(k))?))
    }

    pub fn try_conjugate(&self) -> Result<QuadInt> {
        let bm2 = ck(self.ring.b.checked_mul(self.m2))?;
        Ok(self
            .ring
            .elem(ck(self.m1.checked_sub(bm2))?, ck(self.m2.checked_neg())?))
    }

    /// Algebraic conjugate `(m1 - B m2) - m2 q`.
    ///
    /// # Panics
    /// On `i64` overflow; use [`QuadInt::try_conjugate`] to get an error instead.
    pub fn conjugate(&self) -> QuadInt {
        self.try_conjugate().expect("overflow in conjugate")
    }

    fn norm_i128(&self) -> i128 {
        let (m1, m2) = (self.m1 as i128, self.m2 as i128);
        m1 * m1 - self.ring.b as i128 * m1 * m2 + self.ring.c as i128 * m2 * m2
    }

    /// `N(m) = m1² - B m1 m2 + C m2²`.
    pub fn norm(&self) -> Result<i64> {
        to_i64(self.norm_i128())
    }

    pub fn is_unit(&self) -> bool {
        self.norm_i128() == 1
    }

    /// Inverse of a unit (its conjugate), `None` otherwise.
    pub fn unit_inverse(&self) -> Option<QuadInt> {
        if self.is_unit() {
            self.try_conjugate().ok()
        } else {
            None
        }
    }

    /// The unique associate lying in the fundamental sector `[0, 2π/w)` of the unit group
    /// (`w` = number of units). Zero maps to zero.
    pub fn canonical_associate(&self) -> QuadInt {
        if self.is_zero() {
            return *self;
        }
        let many_units = matches!(self.ring.d, -1 | -3);
        for u in self.ring.units() {
            let v = *self * u;
            let in_sector = if many_units {
                v.m1 > 0 && v.m2 >= 0
            } else {
                v.m2 > 0 || (v.m2 == 0 && v.m1 > 0)
            };
            if in_sector {
                return v;
            }
        }
        unreachable!("every nonzero element has an associate in the fundamental sector")
    }

    pub fn is_associate(&self, other: &QuadInt) -> bool {
        self.ring == other.ring && self.canonical_associate() == other.canonical_associate()
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.m2 < 0 { '-' } else { '+' };
        write!(
            f,
            "{}{}{}{}",
            self.m1,
            sign,
            self.m2.unsigned_abs(),
            self.ring.symbol()
        )
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        self.checked_add(&rhs).expect("quadratic integer addition")
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        self.checked_sub(&rhs)
            .expect("quadratic integer subtraction")
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: QuadInt) -> QuadInt {
        self.checked_mul(&rhs)
            .expect("quadratic integer multiplication")
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        self.checked_neg().expect("quadratic integer negation")
    }
}

/// Arithmetic operation selector for [`qi_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Neg,
    Mul,
}

/// Dispatches one ring operation; `Neg` ignores `b` apart from the ring check.
pub fn qi_arith(op: ArithOp, a: &QuadInt, b: &QuadInt) -> Result<QuadInt> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Neg => {
            a.ring.check(&b.ring)?;
            a.checked_neg()
        }
        ArithOp::Mul => a.checked_mul(b),
    }
}

/// `n / m` when `m` divides `n` exactly, `None` otherwise.
pub fn exact_div(n: &QuadInt, m: &QuadInt) -> Result<Option<QuadInt>> {
    n.ring.check(&m.ring)?;
    if m.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let num = n.checked_mul(&m.try_conjugate()?)?;
    let nm = m.norm()?;
    if num.m1 % nm == 0 && num.m2 % nm == 0 {
        Ok(Some(n.ring.elem(num.m1 / nm, num.m2 / nm)))
    } else {
        Ok(None)
    }
}

/// Division with remainder `n = q m + r`, `N(r) < N(m)`.
///
/// The quotient is the nearest ring element to `n/m` in the embedded plane. Candidates
/// around the exact quotient are scanned, the per-coordinate ties-to-even rounding first,
/// and the first one of minimal remainder norm wins.
pub fn euclid_divmod(n: &QuadInt, m: &QuadInt) -> Result<(QuadInt, QuadInt)> {
    n.ring.check(&m.ring)?;
    let ring = n.ring;
    if !ring.euclidean {
        return Err(Error::NonEuclidean(ring.d));
    }
    if m.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let num = n.checked_mul(&m.try_conjugate()?)?;
    let nm = m.norm()? as i128;
    let (u, v) = (num.m1 as i128, num.m2 as i128);

    let rounded = (round_div_even(u, nm), round_div_even(v, nm));
    let mut candidates = vec![rounded];
    let (fu, fv) = (floor_div(u, nm), floor_div(v, nm));
    for q2 in [fv, fv + 1] {
        for q1 in fu - 1..=fu + 2 {
            if (q1, q2) != rounded {
                candidates.push((q1, q2));
            }
        }
    }

    let mut best: Option<(i128, QuadInt, QuadInt)> = None;
    for (q1, q2) in candidates {
        let q = ring.elem(to_i64(q1)?, to_i64(q2)?);
        let r = n.checked_sub(&q.checked_mul(m)?)?;
        let rn = r.norm_i128();
        if best.as_ref().is_none_or(|(bn, _, _)| rn < *bn) {
            best = Some((rn, q, r));
        }
    }
    let (rn, q, r) = best.expect("candidate list is non-empty");
    debug_assert!(rn < nm);
    Ok((q, r))
}

/// Greatest common divisor, normalized by [`QuadInt::canonical_associate`].
pub fn gcd_q(a: &QuadInt, b: &QuadInt) -> Result<QuadInt> {
    a.ring.check(&b.ring)?;
    if !a.ring.euclidean {
        return Err(Error::NonEuclidean(a.ring.d));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut x, mut y) = (*a, *b);
    while !y.is_zero() {
        let (_, r) = euclid_divmod(&x, &y)?;
        x = y;
        y = r;
    }
    Ok(x.canonical_associate())
}

/// Bezout coefficients `(α, β)` with `a α + b β = 1` for coprime `a`, `b`.
pub fn bezout(a: &QuadInt, b: &QuadInt) -> Result<(QuadInt, QuadInt)> {
    a.ring.check(&b.ring)?;
    let ring = a.ring;
    if !ring.euclidean {
        return Err(Error::NonEuclidean(ring.d));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    if let Some(inv) = a.unit_inverse() {
        return Ok((inv, ring.zero()));
    }
    let (mut old_r, mut r) = (*a, *b);
    let (mut old_s, mut s) = (ring.one(), ring.zero());
    let (mut old_t, mut t) = (ring.zero(), ring.one());
    while !r.is_zero() {
        let (q, rem) = euclid_divmod(&old_r, &r)?;
        (old_r, r) = (r, rem);
        let ns = old_s.checked_sub(&q.checked_mul(&s)?)?;
        (old_s, s) = (s, ns);
        let nt = old_t.checked_sub(&q.checked_mul(&t)?)?;
        (old_t, t) = (t, nt);
    }
    let inv = old_r.unit_inverse().ok_or(Error::NotCoprime)?;
    Ok((old_s.checked_mul(&inv)?, old_t.checked_mul(&inv)?))
}

/// Whether the ideal `(a, b)` is all of `Z[q]`, decided on the Z-lattice spanned by
/// `a, aq, b, bq`: it is the whole ring iff the gcd of the 2×2 minors is 1.
/// Valid in every ring, Euclidean or not.
pub fn generates_unit_ideal(a: &QuadInt, b: &QuadInt) -> Result<bool> {
    a.ring.check(&b.ring)?;
    let q = a.ring.q();
    let cols = [*a, a.checked_mul(&q)?, *b, b.checked_mul(&q)?];
    let mut g = 0i128;
    for i in 0..4 {
        for j in i + 1..4 {
            let minor =
                cols[i].m1 as i128 * cols[j].m2 as i128 - cols[j].m1 as i128 * cols[i].m2 as i128;
            g = gcd_i128(g, minor);
        }
    }
    Ok(g == 1)
}

/// Coprimality of two quadratic integers.
///
/// Euclidean rings test whether the gcd is a unit; the other PIDs use the
/// unit-ideal lattice test of [`generates_unit_ideal`].
pub fn are_coprime(a: &QuadInt, b: &QuadInt) -> Result<bool> {
    a.ring.check(&b.ring)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    if a.ring.euclidean {
        Ok(gcd_q(a, b)?.is_unit())
    } else {
        generates_unit_ideal(a, b)
    }
}

/// Closed-form coprimality of `m1 + m2 q` and its conjugate, by the three cases on `B`, `C`.
pub fn conjugate_pair_coprime(m1: i64, m2: i64, ring: &RingSpec) -> bool {
    if m1 == 0 && m2 == 0 {
        return false;
    }
    let c = ring.c;
    if ring.b == -1 {
        gcd(m1, m2) == 1 && gcd(2 * m1 + m2, 4 * c - 1) == 1
    } else if c % 2 == 0 {
        gcd(m1, m2) == 1 && gcd(m1, c) == 1
    } else {
        gcd(m1 + m2, m1 - m2) == 1 && gcd(m1, c) == 1
    }
}

/// Whether the rational prime `p` stays prime in the ring (including `p = 2`).
pub(crate) fn rational_prime_is_inert(p: i64, ring: &RingSpec) -> bool {
    if p == 2 {
        // X² - X + C is irreducible mod 2 iff C is odd; B = 0 rings ramify at 2.
        ring.b == -1 && ring.c % 2 == 1
    } else {
        legendre(ring.d, p).map(|l| l == -1).unwrap_or(false)
    }
}

/// The rational integer `r` with `a` a unit multiple of `r`, if any.
fn associated_rational(a: &QuadInt) -> Option<i64> {
    a.ring
        .units()
        .into_iter()
        .map(|u| *a * u)
        .find(|v| v.m2 == 0)
        .map(|v| v.m1.abs())
}

/// Primality valid in any PID: norm is a rational prime, or `a` is a unit multiple of an
/// inert rational prime.
pub fn is_prime_by_norm(a: &QuadInt) -> Result<bool> {
    if a.is_zero() || a.is_unit() {
        return Err(Error::ZeroOrUnit(a.to_string()));
    }
    if is_prime(a.norm()?) {
        return Ok(true);
    }
    Ok(match associated_rational(a) {
        Some(r) => is_prime(r) && rational_prime_is_inert(r, &a.ring),
        None => false,
    })
}

/// Whether `a` is a prime element. Gaussian and Eisenstein integers use their explicit
/// criteria; the other rings use [`is_prime_by_norm`].
pub fn is_prime_element(a: &QuadInt) -> Result<bool> {
    if a.is_zero() || a.is_unit() {
        return Err(Error::ZeroOrUnit(a.to_string()));
    }
    match a.ring.d {
        -1 => {
            let (m1, m2) = (a.m1, a.m2);
            Ok(if m1 != 0 && m2 != 0 {
                is_prime(a.norm()?)
            } else {
                let v = (m1 + m2).abs();
                is_prime(v) && v % 4 == 3
            })
        }
        -3 => {
            if is_prime(a.norm()?) {
                return Ok(true);
            }
            Ok(associated_rational(a).is_some_and(|r| is_prime(r) && r % 3 == 2))
        }
        _ => is_prime_by_norm(a),
    }
}
