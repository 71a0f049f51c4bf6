//! Sublattices of the ambient lattice `σ(Z[q])`, exact Voronoi membership with a half-open
//! tie rule, reduction modulo a sublattice and coset enumeration.
//!
//! Points are kept in ambient `{1, q}` coordinates. The squared Euclidean length of
//! `(a, b)` is the norm `a² - B ab + C b²`, an integer, so every geometric comparison
//! here is exact.

use std::fmt;

use rayon::prelude::*;

use crate::arith::{ext_gcd, round_div_even};
use crate::embedding::{generator_matrix, matrix_rep, IntMat2, Rational, Surd};
use crate::error::{Error, Result};
use crate::ring::{QuadInt, RingSpec};

/// A point in ambient `{1, q}` coordinates. Ordered lexicographically by `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }

    pub fn is_origin(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn add(&self, o: &LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a + o.a, self.b + o.b)
    }

    pub fn sub(&self, o: &LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a - o.a, self.b - o.b)
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint::new(-self.a, -self.b)
    }

    pub fn to_quad(&self, ring: &RingSpec) -> QuadInt {
        ring.elem(self.a, self.b)
    }

    /// Exact Cartesian position `G·(a, b)ᵀ`.
    pub fn cartesian(&self, ring: &RingSpec) -> (Surd, Surd) {
        generator_matrix(ring).apply((self.a, self.b))
    }

    pub fn cartesian_f64(&self, ring: &RingSpec) -> (f64, f64) {
        let (x, y) = self.cartesian(ring);
        (x.to_f64(), y.to_f64())
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from(v: (i64, i64)) -> Self {
        LatticePoint::new(v.0, v.1)
    }
}

impl From<LatticePoint> for (i64, i64) {
    fn from(p: LatticePoint) -> Self {
        (p.a, p.b)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Squared length `a² - B ab + C b²` as an integer.
pub(crate) fn norm_int(pt: &LatticePoint, ring: &RingSpec) -> i128 {
    let (a, b) = (pt.a as i128, pt.b as i128);
    a * a - ring.b() as i128 * a * b + ring.c() as i128 * b * b
}

/// Twice the inner product of two points under the Gram form.
fn dot2(u: (i64, i64), v: (i64, i64), ring: &RingSpec) -> i128 {
    let (u1, u2, v1, v2) = (u.0 as i128, u.1 as i128, v.0 as i128, v.1 as i128);
    2 * u1 * v1 - ring.b() as i128 * (u1 * v2 + u2 * v1) + 2 * ring.c() as i128 * u2 * v2
}

/// Exact squared Euclidean length of the embedded point.
pub fn norm_sq(pt: &LatticePoint, ring: &RingSpec) -> Rational {
    Rational::from_integer(norm_int(pt, ring) as i64)
}

/// Whether `u` is strictly preferred to `v` as a coset representative: shorter, or equally
/// long and lexicographically smaller.
fn precedes(u: &LatticePoint, v: &LatticePoint, ring: &RingSpec) -> bool {
    (norm_int(u, ring), u) < (norm_int(v, ring), v)
}

/// A full-rank sublattice of the ambient lattice, given by basis columns in `{1, q}` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    ring: RingSpec,
    basis: IntMat2,
    label: String,
    reduced: IntMat2,
    neighbors: Vec<LatticePoint>,
}

impl Lattice {
    pub fn new(ring: RingSpec, basis: IntMat2, label: impl Into<String>) -> Result<Self> {
        if basis.det()? == 0 {
            return Err(Error::Singular);
        }
        let reduced = gauss_reduce(&basis, &ring);
        let (r1, r2) = (reduced.col1(), reduced.col2());
        let mut neighbors = Vec::with_capacity(24);
        for i in -2i64..=2 {
            for j in -2i64..=2 {
                if (i, j) != (0, 0) {
                    neighbors.push(LatticePoint::new(i * r1.0 + j * r2.0, i * r1.1 + j * r2.1));
                }
            }
        }
        Ok(Lattice {
            ring,
            basis,
            label: label.into(),
            reduced,
            neighbors,
        })
    }

    /// The ambient lattice `σ(Z[q])`.
    pub fn ambient(ring: RingSpec) -> Self {
        Lattice::new(ring, IntMat2::identity(), "Z[q]").expect("identity is non-singular")
    }

    /// The ideal lattice `σ(<m>)` with basis `B_m`.
    pub fn ideal(m: &QuadInt) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::Singular);
        }
        Lattice::new(m.ring(), matrix_rep(m), format!("<{m}>"))
    }

    /// `k` times this lattice.
    pub fn scaled(&self, k: i64) -> Result<Self> {
        Lattice::new(
            self.ring,
            self.basis.checked_scale(k)?,
            format!("{k}{}", self.label),
        )
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn basis(&self) -> IntMat2 {
        self.basis
    }

    pub fn reduced_basis(&self) -> IntMat2 {
        self.reduced
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The 24 nonzero vectors with coefficients in `[-2, 2]²` over the reduced basis.
    pub fn neighbors(&self) -> &[LatticePoint] {
        &self.neighbors
    }

    /// Index in the ambient lattice.
    pub fn index(&self) -> i64 {
        self.basis.det().expect("checked at construction").abs()
    }

    pub fn contains(&self, pt: &LatticePoint) -> bool {
        let det = self.basis.det().expect("checked at construction") as i128;
        let adj = self.basis.adjugate();
        let x = adj.a11 as i128 * pt.a as i128 + adj.a12 as i128 * pt.b as i128;
        let y = adj.a21 as i128 * pt.a as i128 + adj.a22 as i128 * pt.b as i128;
        x % det == 0 && y % det == 0
    }

    /// Whether every vector of `other` lies in this lattice.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.contains(&other.basis.col1().into()) && self.contains(&other.basis.col2().into())
    }
}

/// Lagrange-Gauss reduction of the basis columns under the Gram form.
fn gauss_reduce(basis: &IntMat2, ring: &RingSpec) -> IntMat2 {
    let n = |v: (i64, i64)| norm_int(&v.into(), ring);
    let (mut v1, mut v2) = (basis.col1(), basis.col2());
    loop {
        if n(v1) > n(v2) {
            std::mem::swap(&mut v1, &mut v2);
        }
        let mu = round_div_even(dot2(v1, v2, ring), 2 * n(v1)) as i64;
        if mu == 0 {
            break;
        }
        v2 = (v2.0 - mu * v1.0, v2.1 - mu * v1.1);
    }
    IntMat2::from_cols(v1, v2)
}

/// Membership in the half-open Voronoi cell of `sub`: no neighbor translate is shorter, and
/// on equal length the point itself is lexicographically smaller.
pub fn voronoi_member(pt: &LatticePoint, sub: &Lattice) -> bool {
    sub.neighbors
        .iter()
        .all(|l| !precedes(&pt.sub(l), pt, &sub.ring))
}

/// Membership in the closed Voronoi cell of `sub`.
pub fn voronoi_member_closed(pt: &LatticePoint, sub: &Lattice) -> bool {
    let n0 = norm_int(pt, &sub.ring);
    sub.neighbors
        .iter()
        .all(|l| norm_int(&pt.sub(l), &sub.ring) >= n0)
}

/// The representative of `pt + sub` in the half-open Voronoi cell of `sub`.
pub fn reduce_mod(pt: &LatticePoint, sub: &Lattice) -> LatticePoint {
    let r = &sub.reduced;
    let det = r.det().expect("checked at construction") as i128;
    let adj = r.adjugate();
    let (pa, pb) = (pt.a as i128, pt.b as i128);
    let mut c1 = adj.a11 as i128 * pa + adj.a12 as i128 * pb;
    let mut c2 = adj.a21 as i128 * pa + adj.a22 as i128 * pb;
    if det < 0 {
        (c1, c2) = (-c1, -c2);
    }
    let (k1, k2) = (
        round_div_even(c1, det.abs()) as i64,
        round_div_even(c2, det.abs()) as i64,
    );
    let mut cur = LatticePoint::new(
        pt.a - k1 * r.a11 - k2 * r.a12,
        pt.b - k1 * r.a21 - k2 * r.a22,
    );
    loop {
        let best = sub
            .neighbors
            .iter()
            .map(|l| cur.sub(l))
            .min_by_key(|c| (norm_int(c, &sub.ring), *c))
            .expect("neighbor set is non-empty");
        if precedes(&best, &cur, &sub.ring) {
            cur = best;
        } else {
            return cur;
        }
    }
}

/// Upper-triangular Hermite form diagonal `(h11, h22)` of the column lattice of `m`.
fn hnf_diagonal(m: &IntMat2) -> Result<(i64, i64)> {
    let (c1, c2) = (m.col1(), m.col2());
    let (g, _, _) = ext_gcd(c1.1, c2.1);
    if g == 0 {
        return Err(Error::Singular);
    }
    let top = (c2.1 / g) as i128 * c1.0 as i128 - (c1.1 / g) as i128 * c2.0 as i128;
    let h11 = crate::arith::to_i64(top.abs())?;
    if h11 == 0 {
        return Err(Error::Singular);
    }
    Ok((h11, g))
}

/// Coefficients of `within` in the basis of `sub`, required to be integral.
fn relative_basis(sub: &Lattice, within: &Lattice) -> Result<IntMat2> {
    let not_sub = || Error::NotSublattice {
        sub: sub.label.clone(),
        within: within.label.clone(),
    };
    if sub.ring != within.ring {
        return Err(Error::RingMismatch(sub.ring.d(), within.ring.d()));
    }
    let det = sub.basis.det()?;
    let prod = sub.basis.adjugate().checked_mul(&within.basis)?;
    let entries = [prod.a11, prod.a12, prod.a21, prod.a22];
    if entries.iter().any(|e| e % det != 0) {
        return Err(not_sub());
    }
    Ok(IntMat2::new(
        prod.a11 / det,
        prod.a12 / det,
        prod.a21 / det,
        prod.a22 / det,
    ))
}

fn coset_box(sub: &Lattice, within: &Lattice) -> Result<(i64, i64)> {
    hnf_diagonal(&relative_basis(sub, within)?)
}

fn box_point(sub: &Lattice, i: i64, j: i64) -> LatticePoint {
    let s = &sub.basis;
    LatticePoint::new(i * s.a11 + j * s.a12, i * s.a21 + j * s.a22)
}

/// Representatives of `sub / within` lying in the half-open Voronoi cell of `within`,
/// sorted lexicographically.
pub fn coset_representatives(sub: &Lattice, within: &Lattice) -> Result<Vec<LatticePoint>> {
    let (h1, h2) = coset_box(sub, within)?;
    let mut out: Vec<LatticePoint> = (0..h1)
        .flat_map(|i| (0..h2).map(move |j| (i, j)))
        .map(|(i, j)| reduce_mod(&box_point(sub, i, j), within))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Parallel version of [`coset_representatives`]; returns the identical list.
pub fn coset_representatives_par(sub: &Lattice, within: &Lattice) -> Result<Vec<LatticePoint>> {
    let (h1, h2) = coset_box(sub, within)?;
    let mut out: Vec<LatticePoint> = (0..h1)
        .into_par_iter()
        .flat_map_iter(|i| (0..h2).map(move |j| reduce_mod(&box_point(sub, i, j), within)))
        .collect();
    out.par_sort_unstable();
    Ok(out)
}

/// Points of `sub` in the closed Voronoi cell of `within`: the half-open representatives plus
/// every equally short translate on the cell boundary.
pub fn closed_cell_points(sub: &Lattice, within: &Lattice) -> Result<Vec<LatticePoint>> {
    let reps = coset_representatives(sub, within)?;
    let ring = within.ring;
    let mut out = Vec::with_capacity(reps.len());
    for r in reps {
        let n0 = norm_int(&r, &ring);
        out.push(r);
        for l in &within.neighbors {
            let t = r.sub(l);
            if norm_int(&t, &ring) == n0 {
                out.push(t);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Vertices of the Voronoi cell of `sub` in Cartesian coordinates, counterclockwise.
pub fn voronoi_polygon(sub: &Lattice) -> Vec<(f64, f64)> {
    let ring = sub.ring;
    let reach = sub
        .neighbors
        .iter()
        .map(|l| {
            let (x, y) = l.cartesian_f64(&ring);
            x.abs().max(y.abs())
        })
        .fold(1.0, f64::max);
    let mut poly = vec![
        (-reach, -reach),
        (reach, -reach),
        (reach, reach),
        (-reach, reach),
    ];
    for l in &sub.neighbors {
        let (lx, ly) = l.cartesian_f64(&ring);
        let c = (lx * lx + ly * ly) / 2.0;
        poly = clip(&poly, lx, ly, c);
    }
    poly
}

/// Sutherland-Hodgman clip of a convex polygon to `lx·x + ly·y <= c`.
fn clip(poly: &[(f64, f64)], lx: f64, ly: f64, c: f64) -> Vec<(f64, f64)> {
    let eps = 1e-9 * c.abs().max(1.0);
    let side = |p: &(f64, f64)| lx * p.0 + ly * p.1 - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (sp, sq) = (side(&p), side(&q));
        if sp <= eps {
            out.push(p);
        }
        if (sp < -eps && sq > eps) || (sp > eps && sq < -eps) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Number of ambient lattice points of squared length at most `r²` (unit minimum distance).
pub fn count_points_in_disc(ring: &RingSpec, r: i64) -> u64 {
    let r2 = (r as i128) * (r as i128);
    let b_max = 2 * r + 1;
    (-b_max..=b_max)
        .into_par_iter()
        .map(|b| {
            let span = r + b.abs() + 1;
            (-span..=span)
                .filter(|&a| norm_int(&LatticePoint::new(a, b), ring) <= r2)
                .count() as u64
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ring_from_d;
    use std::collections::BTreeSet;

    fn zi() -> RingSpec {
        ring_from_d(-1).unwrap()
    }
    fn zw() -> RingSpec {
        ring_from_d(-3).unwrap()
    }

    #[test]
    fn squared_lengths() {
        assert_eq!(
            norm_sq(&LatticePoint::new(1, 0), &zw()),
            Rational::from_integer(1)
        );
        assert_eq!(
            norm_sq(&LatticePoint::ORIGIN, &zw()),
            Rational::from_integer(0)
        );
        // |1 + ω|² = (3/2)² + (√3/2)² = 3
        assert_eq!(
            norm_sq(&LatticePoint::new(1, 1), &zw()),
            Rational::from_integer(3)
        );
    }

    #[test]
    fn squared_length_matches_embedding() {
        for d in crate::ring::PID_DISCRIMINANTS {
            let ring = ring_from_d(d).unwrap();
            for (a, b) in [(1, 1), (-3, 2), (5, -7)] {
                let (x, y) = LatticePoint::new(a, b).cartesian(&ring);
                let len = x * x + y * y;
                assert_eq!(len.s(), Rational::from_integer(0));
                assert_eq!(len.r(), norm_sq(&LatticePoint::new(a, b), &ring));
            }
        }
    }

    #[test]
    fn membership_examples() {
        let five = Lattice::ambient(zi()).scaled(5).unwrap();
        assert!(voronoi_member(&LatticePoint::new(2, 2), &five));
        assert!(!voronoi_member(&LatticePoint::new(3, 0), &five));
        assert!(voronoi_member(&LatticePoint::ORIGIN, &five));
        let four = Lattice::ambient(zi()).scaled(4).unwrap();
        // (2, 0) and (-2, 0) tie; the lexicographically smaller one wins.
        assert!(voronoi_member(&LatticePoint::new(-2, 0), &four));
        assert!(!voronoi_member(&LatticePoint::new(2, 0), &four));
        assert!(voronoi_member_closed(&LatticePoint::new(2, 0), &four));
    }

    #[test]
    fn reduction_examples() {
        let five = Lattice::ambient(zi()).scaled(5).unwrap();
        assert_eq!(
            reduce_mod(&LatticePoint::new(7, 0), &five),
            LatticePoint::new(2, 0)
        );
        assert_eq!(
            reduce_mod(&LatticePoint::new(2, 2), &five),
            LatticePoint::new(2, 2)
        );
        for a in -20..20 {
            for b in -20..20 {
                let x = reduce_mod(&LatticePoint::new(a, b), &five);
                assert_eq!(reduce_mod(&x, &five), x);
                assert!(voronoi_member(&x, &five));
                assert!(five.contains(&LatticePoint::new(a, b).sub(&x)));
            }
        }
    }

    #[test]
    fn reduction_is_global_minimum() {
        // Oracle: lexicographic-minimum among shortest coset elements in a wide window.
        let ring = zw();
        let sub = Lattice::ideal(&ring.elem(2, 1)).unwrap().scaled(2).unwrap();
        for a in -9..9 {
            for b in -9..9 {
                let pt = LatticePoint::new(a, b);
                let mut best: Option<LatticePoint> = None;
                for i in -12..=12 {
                    for j in -12..=12 {
                        let l = box_point(&sub, i, j);
                        let c = pt.sub(&l);
                        if best.is_none_or(|bb| precedes(&c, &bb, &ring)) {
                            best = Some(c);
                        }
                    }
                }
                assert_eq!(reduce_mod(&pt, &sub), best.unwrap());
            }
        }
    }

    #[test]
    fn coset_counts() {
        let amb = Lattice::ambient(zi());
        let five = amb.scaled(5).unwrap();
        assert_eq!(coset_representatives(&amb, &five).unwrap().len(), 25);
        let p1 = Lattice::ideal(&zi().elem(2, 1)).unwrap();
        assert_eq!(coset_representatives(&p1, &five).unwrap().len(), 5);
        let amb3 = Lattice::ambient(zw());
        let seven = amb3.scaled(7).unwrap();
        let p = Lattice::ideal(&zw().elem(1, 2)).unwrap();
        assert_eq!(coset_representatives(&p, &seven).unwrap().len(), 7);
        assert_eq!(
            coset_representatives(&amb3, &amb3.scaled(2).unwrap())
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            coset_representatives(&amb, &amb.scaled(2).unwrap())
                .unwrap()
                .len(),
            4
        );
    }

    #[test]
    fn non_sublattice_rejected() {
        let p1 = Lattice::ideal(&zi().elem(2, 1)).unwrap();
        let p2 = Lattice::ideal(&zi().elem(2, -1)).unwrap();
        assert!(matches!(
            coset_representatives(&p1, &p2),
            Err(Error::NotSublattice { .. })
        ));
        assert!(matches!(
            Lattice::new(zi(), IntMat2::new(1, 2, 2, 4), "x"),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn partition_property() {
        for (d, p) in [(-1, 5), (-1, 13), (-3, 7), (-3, 13)] {
            let ring = ring_from_d(d).unwrap();
            let amb = Lattice::ambient(ring);
            let within = amb.scaled(p).unwrap();
            let reps = coset_representatives(&amb, &within).unwrap();
            assert_eq!(reps.len() as i64, p * p);
            let set: BTreeSet<_> = reps.iter().copied().collect();
            assert_eq!(set.len(), reps.len());
            for a in -3 * p..=3 * p {
                for b in -3 * p..=3 * p {
                    let r = reduce_mod(&LatticePoint::new(a, b), &within);
                    assert!(set.contains(&r), "D={d} p={p} ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let ring = zw();
        let amb = Lattice::ambient(ring);
        let within = Lattice::ideal(&ring.elem(-1, 4))
            .unwrap()
            .scaled(2)
            .unwrap();
        assert_eq!(
            coset_representatives(&amb, &within).unwrap(),
            coset_representatives_par(&amb, &within).unwrap()
        );
    }

    #[test]
    fn closed_cell_superset() {
        let amb = Lattice::ambient(zi());
        let four = amb.scaled(4).unwrap();
        let closed = closed_cell_points(&amb, &four).unwrap();
        // 3x3 interior, 4 edges of 3 points, 4 corners: a 5x5 block.
        assert_eq!(closed.len(), 25);
        assert!(closed.iter().all(|p| voronoi_member_closed(p, &four)));
    }

    #[test]
    fn polygons() {
        let sq = voronoi_polygon(&Lattice::ambient(zi()).scaled(5).unwrap());
        assert_eq!(sq.len(), 4);
        for (x, y) in &sq {
            assert!((x.abs() - 2.5).abs() < 1e-9 && (y.abs() - 2.5).abs() < 1e-9);
        }
        let hex = voronoi_polygon(&Lattice::ambient(zw()).scaled(7).unwrap());
        assert_eq!(hex.len(), 6);
        let circumradius = 7.0 / 3f64.sqrt();
        for (x, y) in &hex {
            assert!(((x * x + y * y).sqrt() - circumradius).abs() < 1e-9);
        }
    }

    #[test]
    fn disc_counts() {
        // Oracle: direct Cartesian test on a bounding box.
        for ring in [zi(), zw()] {
            let r = 12;
            let mut count = 0u64;
            for a in -40i64..=40 {
                for b in -40i64..=40 {
                    let (x, y) = LatticePoint::new(a, b).cartesian_f64(&ring);
                    if x * x + y * y <= (r * r) as f64 + 1e-9 {
                        count += 1;
                    }
                }
            }
            assert_eq!(count_points_in_disc(&ring, r), count);
        }
    }
}
