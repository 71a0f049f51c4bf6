//! Canonical embedding of `Z[q]` into the plane, with exact generator matrices and the
//! integer matrix representations `B_m` of multiplication by `m`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

use crate::arith::is_square_free;
use crate::error::{ck, Error, Result};
use crate::ring::{are_coprime, bezout, QuadInt, RingSpec};

pub type Rational = Ratio<i64>;

fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// An exact real number `r + s·√n` with rational `r`, `s` and a fixed square-free radicand `n`.
///
/// A radicand of 1 is folded into `r`, so `s` is always zero in that case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Surd {
    r: Rational,
    s: Rational,
    n: i64,
}

impl Surd {
    pub fn new(r: Rational, s: Rational, n: i64) -> Self {
        if n == 1 {
            Surd {
                r: r + s,
                s: rat(0),
                n,
            }
        } else {
            Surd { r, s, n }
        }
    }

    pub fn rational(r: Rational, n: i64) -> Self {
        Surd::new(r, rat(0), n)
    }

    pub fn int(v: i64, n: i64) -> Self {
        Surd::rational(rat(v), n)
    }

    pub fn zero(n: i64) -> Self {
        Surd::int(0, n)
    }

    pub fn r(&self) -> Rational {
        self.r
    }

    pub fn s(&self) -> Rational {
        self.s
    }

    pub fn radicand(&self) -> i64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.r == rat(0) && self.s == rat(0)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: Rational| *q.numer() as f64 / *q.denom() as f64;
        f(self.r) + f(self.s) * (self.n as f64).sqrt()
    }

    fn same(&self, o: &Surd) {
        assert_eq!(self.n, o.n, "surds with different radicands");
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        self.same(&o);
        Surd::new(self.r + o.r, self.s + o.s, self.n)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        self.same(&o);
        Surd::new(self.r - o.r, self.s - o.s, self.n)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.r, -self.s, self.n)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        self.same(&o);
        let n = rat(self.n);
        Surd::new(
            self.r * o.r + self.s * o.s * n,
            self.r * o.s + self.s * o.r,
            self.n,
        )
    }
}

impl Mul<i64> for Surd {
    type Output = Surd;
    fn mul(self, k: i64) -> Surd {
        Surd::new(self.r * k, self.s * k, self.n)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = rat(0);
        match (self.r == zero, self.s == zero) {
            (_, true) => write!(f, "{}", self.r),
            (true, false) => write!(f, "{}*sqrt({})", self.s, self.n),
            (false, false) => write!(f, "{} + {}*sqrt({})", self.r, self.s, self.n),
        }
    }
}

/// A 2×2 integer matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMat2 {
    pub a11: i64,
    pub a12: i64,
    pub a21: i64,
    pub a22: i64,
}

impl IntMat2 {
    pub const fn new(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        IntMat2 { a11, a12, a21, a22 }
    }

    /// Matrix with the given columns.
    pub const fn from_cols(c1: (i64, i64), c2: (i64, i64)) -> Self {
        IntMat2::new(c1.0, c2.0, c1.1, c2.1)
    }

    pub const fn identity() -> Self {
        IntMat2::new(1, 0, 0, 1)
    }

    pub const fn zero() -> Self {
        IntMat2::new(0, 0, 0, 0)
    }

    pub fn col1(&self) -> (i64, i64) {
        (self.a11, self.a21)
    }

    pub fn col2(&self) -> (i64, i64) {
        (self.a12, self.a22)
    }

    pub fn det(&self) -> Result<i64> {
        let d = self.a11 as i128 * self.a22 as i128 - self.a12 as i128 * self.a21 as i128;
        crate::arith::to_i64(d)
    }

    /// Classical adjugate `[[a22, -a12], [-a21, a11]]`.
    pub fn adjugate(&self) -> IntMat2 {
        IntMat2::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn checked_mul(&self, o: &IntMat2) -> Result<IntMat2> {
        let e = |a: i64, b: i64, c: i64, d: i64| {
            crate::arith::to_i64(a as i128 * b as i128 + c as i128 * d as i128)
        };
        Ok(IntMat2::new(
            e(self.a11, o.a11, self.a12, o.a21)?,
            e(self.a11, o.a12, self.a12, o.a22)?,
            e(self.a21, o.a11, self.a22, o.a21)?,
            e(self.a21, o.a12, self.a22, o.a22)?,
        ))
    }

    pub fn checked_add(&self, o: &IntMat2) -> Result<IntMat2> {
        Ok(IntMat2::new(
            ck(self.a11.checked_add(o.a11))?,
            ck(self.a12.checked_add(o.a12))?,
            ck(self.a21.checked_add(o.a21))?,
            ck(self.a22.checked_add(o.a22))?,
        ))
    }

    pub fn checked_scale(&self, k: i64) -> Result<IntMat2> {
        Ok(IntMat2::new(
            ck(self.a11.checked_mul(k))?,
            ck(self.a12.checked_mul(k))?,
            ck(self.a21.checked_mul(k))?,
            ck(self.a22.checked_mul(k))?,
        ))
    }

    /// `M·(x, y)ᵀ`.
    pub fn apply(&self, v: (i64, i64)) -> Result<(i64, i64)> {
        let e = |a: i64, b: i64| {
            crate::arith::to_i64(a as i128 * v.0 as i128 + b as i128 * v.1 as i128)
        };
        Ok((e(self.a11, self.a12)?, e(self.a21, self.a22)?))
    }
}

impl Mul for IntMat2 {
    type Output = IntMat2;
    fn mul(self, o: IntMat2) -> IntMat2 {
        self.checked_mul(&o)
            .expect("integer matrix product overflow")
    }
}

impl Add for IntMat2 {
    type Output = IntMat2;
    fn add(self, o: IntMat2) -> IntMat2 {
        self.checked_add(&o).expect("integer matrix sum overflow")
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

/// A 2×2 matrix of [`Surd`] entries sharing one radicand, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactMat2 {
    pub e: [[Surd; 2]; 2],
}

impl ExactMat2 {
    pub fn new(a11: Surd, a12: Surd, a21: Surd, a22: Surd) -> Self {
        ExactMat2 {
            e: [[a11, a12], [a21, a22]],
        }
    }

    pub fn radicand(&self) -> i64 {
        self.e[0][0].radicand()
    }

    pub fn det(&self) -> Surd {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn mul(&self, o: &ExactMat2) -> ExactMat2 {
        let e = |i: usize, j: usize| self.e[i][0] * o.e[0][j] + self.e[i][1] * o.e[1][j];
        ExactMat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn mul_int(&self, m: &IntMat2) -> ExactMat2 {
        self.mul(&ExactMat2::from_int(m, self.radicand()))
    }

    pub fn from_int(m: &IntMat2, n: i64) -> ExactMat2 {
        ExactMat2::new(
            Surd::int(m.a11, n),
            Surd::int(m.a12, n),
            Surd::int(m.a21, n),
            Surd::int(m.a22, n),
        )
    }

    pub fn transpose(&self) -> ExactMat2 {
        ExactMat2::new(self.e[0][0], self.e[1][0], self.e[0][1], self.e[1][1])
    }

    /// `M·(x, y)ᵀ` for an integer vector.
    pub fn apply(&self, v: (i64, i64)) -> (Surd, Surd) {
        (
            self.e[0][0] * v.0 + self.e[0][1] * v.1,
            self.e[1][0] * v.0 + self.e[1][1] * v.1,
        )
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        [
            [self.e[0][0].to_f64(), self.e[0][1].to_f64()],
            [self.e[1][0].to_f64(), self.e[1][1].to_f64()],
        ]
    }
}

/// `G = [[1, Re q], [0, Im q]]` with `Re q = -B/2` and `Im q = √(4C - B²)/2`.
pub fn generator_matrix(ring: &RingSpec) -> ExactMat2 {
    let n = -ring.d();
    // 4C - B² is |D| when B = -1 and 4|D| when B = 0.
    let im_coeff = if ring.b() == -1 {
        Rational::new(1, 2)
    } else {
        rat(1)
    };
    ExactMat2::new(
        Surd::int(1, n),
        Surd::rational(Rational::new(-ring.b(), 2), n),
        Surd::zero(n),
        Surd::new(rat(0), im_coeff, n),
    )
}

/// `[[1, σ₁(q)], [1, σ₂(q)]]` for the real quadratic field `Q(√D)`, `D > 1` square-free.
pub fn real_generator_matrix(d: i64) -> Result<ExactMat2> {
    if d <= 1 || !is_square_free(d) {
        return Err(Error::NotRealSquareFree(d));
    }
    let (r, s) = if d.rem_euclid(4) == 1 {
        (Rational::new(1, 2), Rational::new(1, 2))
    } else {
        (rat(0), rat(1))
    };
    Ok(ExactMat2::new(
        Surd::int(1, d),
        Surd::new(r, s, d),
        Surd::int(1, d),
        Surd::new(r, -s, d),
    ))
}

/// `B_m = [[m1, -C m2], [m2, m1 - B m2]]`; its columns are the coordinates of `m` and `m q`.
pub fn matrix_rep(m: &QuadInt) -> IntMat2 {
    let ring = m.ring();
    let (m1, m2) = m.coords();
    IntMat2::new(m1, -ring.c() * m2, m2, m1 - ring.b() * m2)
}

/// The adjugate of `B_m`, which equals `B_{m̂}`.
pub fn adjugate_rep(m: &QuadInt) -> IntMat2 {
    matrix_rep(m).adjugate()
}

/// `G_m = G B_m`, a basis of the ideal lattice `σ(<m>)`.
pub fn ideal_lattice_basis(m: &QuadInt) -> ExactMat2 {
    generator_matrix(&m.ring()).mul_int(&matrix_rep(m))
}

/// `GᵀG = [[1, -B/2], [-B/2, C]]`.
pub fn gram_form(ring: &RingSpec) -> [[Rational; 2]; 2] {
    let h = Rational::new(-ring.b(), 2);
    [[rat(1), h], [h, rat(ring.c())]]
}

pub fn gram_det(ring: &RingSpec) -> Rational {
    let g = gram_form(ring);
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

/// `(B_α, B_β)` with `B_m B_α + B_n B_β = I`, from the Bezout coefficients of `m`, `n`.
pub fn bezout_matrices(m: &QuadInt, n: &QuadInt) -> Result<(IntMat2, IntMat2)> {
    if !are_coprime(m, n)? {
        return Err(Error::NotCoprime);
    }
    let (alpha, beta) = bezout(m, n)?;
    Ok((matrix_rep(&alpha), matrix_rep(&beta)))
}

/// Row vector of ring elements times an integer matrix: `(r1, r2)·M`.
pub fn row_times_matrix(row: [QuadInt; 2], m: &IntMat2) -> Result<[QuadInt; 2]> {
    let term = |x: &QuadInt, k: i64| x.checked_scale(k);
    Ok([
        term(&row[0], m.a11)?.checked_add(&term(&row[1], m.a21)?)?,
        term(&row[0], m.a12)?.checked_add(&term(&row[1], m.a22)?)?,
    ])
}

/// Whether `(1, q)` and `(1, q̂)` are left eigenvectors of `B_m` with eigenvalues `m`, `m̂`.
pub fn row_eigen_identities_hold(m: &QuadInt) -> Result<bool> {
    let ring = m.ring();
    let bm = matrix_rep(m);
    let q = ring.q();
    let qh = q.try_conjugate()?;
    let mh = m.try_conjugate()?;
    let lhs = row_times_matrix([ring.one(), q], &bm)?;
    let lhs_h = row_times_matrix([ring.one(), qh], &bm)?;
    Ok(lhs == [*m, m.checked_mul(&q)?] && lhs_h == [mh, mh.checked_mul(&qh)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ring_from_d;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn generator_matrices() {
        let zw = ring_from_d(-3).unwrap();
        let g = generator_matrix(&zw);
        assert_eq!(g.e[0][0], Surd::int(1, 3));
        assert_eq!(g.e[0][1], Surd::rational(r(1, 2), 3));
        assert_eq!(g.e[1][0], Surd::zero(3));
        assert_eq!(g.e[1][1], Surd::new(r(0, 1), r(1, 2), 3));
        assert_eq!(g.det(), Surd::new(r(0, 1), r(1, 2), 3));

        let zi = ring_from_d(-1).unwrap();
        assert_eq!(
            generator_matrix(&zi),
            ExactMat2::from_int(&IntMat2::identity(), 1)
        );

        let z2 = ring_from_d(-2).unwrap();
        assert_eq!(
            generator_matrix(&z2).e[1][1],
            Surd::new(r(0, 1), r(1, 1), 2)
        );
    }

    #[test]
    fn det_squared_matches_gram() {
        for d in crate::ring::PID_DISCRIMINANTS {
            let ring = ring_from_d(d).unwrap();
            let det = generator_matrix(&ring).det();
            let sq = det * det;
            assert_eq!(sq.s(), r(0, 1));
            assert_eq!(sq.r(), gram_det(&ring));
        }
    }

    #[test]
    fn real_generator() {
        let g = real_generator_matrix(5).unwrap();
        assert_eq!(g.e[0][1], Surd::new(r(1, 2), r(1, 2), 5));
        assert_eq!(g.e[1][1], Surd::new(r(1, 2), r(-1, 2), 5));
        // det = σ₂(q) - σ₁(q) = -√5
        assert_eq!(g.det(), Surd::new(r(0, 1), r(-1, 1), 5));
        let g = real_generator_matrix(2).unwrap();
        assert_eq!(g.det(), Surd::new(r(0, 1), r(-2, 1), 2));
        assert!(real_generator_matrix(-3).is_err());
        assert!(real_generator_matrix(8).is_err());
    }

    #[test]
    fn matrix_reps() {
        let zi = ring_from_d(-1).unwrap();
        assert_eq!(matrix_rep(&zi.elem(2, 1)), IntMat2::new(2, -1, 1, 2));
        assert_eq!(adjugate_rep(&zi.elem(2, 1)), IntMat2::new(2, 1, -1, 2));
        let zw = ring_from_d(-3).unwrap();
        assert_eq!(matrix_rep(&zw.elem(1, 2)), IntMat2::new(1, -2, 2, 3));
        assert_eq!(adjugate_rep(&zw.elem(1, 2)), IntMat2::new(3, 2, -2, 1));
        assert_eq!(matrix_rep(&zw.one()), IntMat2::identity());
        assert_eq!(adjugate_rep(&zi.int(5)), IntMat2::new(5, 0, 0, 5));
    }

    #[test]
    fn adjugate_is_conjugate_rep() {
        for d in crate::ring::PID_DISCRIMINANTS {
            let ring = ring_from_d(d).unwrap();
            for m1 in -5..=5 {
                for m2 in -5..=5 {
                    let m = ring.elem(m1, m2);
                    assert_eq!(adjugate_rep(&m), matrix_rep(&m.conjugate()));
                    let n = m.norm().unwrap();
                    assert_eq!(matrix_rep(&m) * adjugate_rep(&m), IntMat2::new(n, 0, 0, n));
                }
            }
        }
    }

    #[test]
    fn ideal_bases() {
        let zw = ring_from_d(-3).unwrap();
        let g = ideal_lattice_basis(&zw.elem(-1, 4));
        assert_eq!(g.e[0][0], Surd::int(1, 3));
        assert_eq!(g.e[0][1], Surd::rational(r(-5, 2), 3));
        assert_eq!(g.e[1][0], Surd::new(r(0, 1), r(2, 1), 3));
        assert_eq!(g.e[1][1], Surd::new(r(0, 1), r(3, 2), 3));

        let zi = ring_from_d(-1).unwrap();
        assert_eq!(
            ideal_lattice_basis(&zi.elem(2, 1)),
            ExactMat2::from_int(&IntMat2::new(2, -1, 1, 2), 1)
        );
        assert_eq!(ideal_lattice_basis(&zw.one()), generator_matrix(&zw));
    }

    #[test]
    fn gram_forms() {
        let zw = ring_from_d(-3).unwrap();
        assert_eq!(gram_form(&zw), [[r(1, 1), r(1, 2)], [r(1, 2), r(1, 1)]]);
        assert_eq!(gram_det(&zw), r(3, 4));
        let zi = ring_from_d(-1).unwrap();
        assert_eq!(gram_form(&zi), [[r(1, 1), r(0, 1)], [r(0, 1), r(1, 1)]]);
        for d in crate::ring::PID_DISCRIMINANTS {
            let ring = ring_from_d(d).unwrap();
            let g = generator_matrix(&ring);
            let gtg = g.transpose().mul(&g);
            let gram = gram_form(&ring);
            for (row, grow) in gtg.e.iter().zip(&gram) {
                for (x, g) in row.iter().zip(grow) {
                    assert_eq!(*x, Surd::rational(*g, -d));
                }
            }
        }
    }

    #[test]
    fn bezout_matrix_examples() {
        let zi = ring_from_d(-1).unwrap();
        let (m, n) = (zi.elem(2, 1), zi.elem(2, -1));
        // Expansion oracle: (2+i)·(2+i) + (2-i)·(-2i) = 1.
        let (c0, d0) = (matrix_rep(&zi.elem(2, 1)), matrix_rep(&zi.elem(0, -2)));
        assert_eq!(c0, IntMat2::new(2, -1, 1, 2));
        assert_eq!(d0, IntMat2::new(0, 2, -2, 0));
        assert_eq!(
            matrix_rep(&m) * c0 + matrix_rep(&n) * d0,
            IntMat2::identity()
        );

        let (c, d) = bezout_matrices(&m, &n).unwrap();
        assert_eq!(matrix_rep(&m) * c + matrix_rep(&n) * d, IntMat2::identity());
        assert_eq!(c * matrix_rep(&m) + d * matrix_rep(&n), IntMat2::identity());

        let b = zi.elem(4, 7);
        assert_eq!(
            bezout_matrices(&zi.one(), &b).unwrap(),
            (IntMat2::identity(), IntMat2::zero())
        );

        let zw = ring_from_d(-3).unwrap();
        let (m, n) = (zw.elem(1, 2), zw.elem(3, -2));
        let (c, d) = bezout_matrices(&m, &n).unwrap();
        assert_eq!(matrix_rep(&m) * c + matrix_rep(&n) * d, IntMat2::identity());

        assert!(matches!(
            bezout_matrices(&zi.elem(1, 1), &zi.int(2)),
            Err(Error::NotCoprime)
        ));
    }

    #[test]
    fn eigen_rows() {
        for d in crate::ring::PID_DISCRIMINANTS {
            let ring = ring_from_d(d).unwrap();
            for (m1, m2) in [(3, -2), (0, 1), (7, 5), (-4, 9)] {
                assert!(row_eigen_identities_hold(&ring.elem(m1, m2)).unwrap());
            }
        }
    }

    #[test]
    fn surd_arithmetic() {
        let a = Surd::new(r(1, 2), r(1, 2), 3);
        let b = Surd::new(r(1, 2), r(-1, 2), 3);
        assert_eq!(a * b, Surd::rational(r(-1, 2), 3));
        assert_eq!(a + b, Surd::int(1, 3));
        assert!((a.to_f64() - (0.5 + 3f64.sqrt() / 2.0)).abs() < 1e-15);
        assert_eq!(Surd::new(r(1, 1), r(2, 1), 1), Surd::int(3, 1));
        assert_eq!(a.to_string(), "1/2 + 1/2*sqrt(3)");
    }
}
