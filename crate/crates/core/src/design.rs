//! CRT and hole-free symmetric CRT (HSCRT) planar arrays, their cross-difference and sum
//! coarrays, and the structural checks on both.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::embedding::matrix_rep;
use crate::error::{Error, Result};
use crate::lattice::{
    closed_cell_points, coset_representatives, reduce_mod, voronoi_member, voronoi_polygon,
    Lattice, LatticePoint,
};
use crate::ring::{QuadInt, RingSpec};
use crate::splitting::{classify_rational_prime, split_prime, Splitting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Crt,
    Hscrt,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Crt => "CRT",
            Variant::Hscrt => "HSCRT",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "CRT" => Some(Variant::Crt),
            "HSCRT" => Some(Variant::Hscrt),
            _ => None,
        }
    }
}

/// How the first HSCRT subarray enumerates `Z[q] / 2σ(𝔭₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// One representative per coset, from the half-open Voronoi cell.
    HalfOpen,
    /// Every point of the closed Voronoi cell, so boundary ties contribute both sides.
    ClosedCell,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::HalfOpen => "half-open",
            Strategy::ClosedCell => "closed-cell",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        match s {
            "half-open" => Some(Strategy::HalfOpen),
            "closed-cell" => Some(Strategy::ClosedCell),
            _ => None,
        }
    }
}

/// Sensor positions of a two-subarray design, in ambient `{1, q}` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayDesign {
    pub ring: RingSpec,
    pub p: i64,
    /// `(π, π̂)`, generators of `𝔭₁` and `𝔭₂`.
    pub generators: (QuadInt, QuadInt),
    pub variant: Variant,
    pub strategy: Strategy,
    /// Points of `σ(𝔭₂)`.
    pub subarray1: Vec<LatticePoint>,
    /// Points of `σ(𝔭₁)`.
    pub subarray2: Vec<LatticePoint>,
    /// Minimum inter-sensor spacing `d`; metadata only.
    pub spacing: f64,
}

impl ArrayDesign {
    /// Distinct sensor positions of both subarrays, sorted.
    pub fn sensors(&self) -> Vec<LatticePoint> {
        let set: BTreeSet<_> = self
            .subarray1
            .iter()
            .chain(self.subarray2.iter())
            .copied()
            .collect();
        set.into_iter().collect()
    }

    pub fn sensor_count(&self) -> usize {
        self.sensors().len()
    }

    pub fn p_lattice(&self) -> Lattice {
        Lattice::ambient(self.ring)
            .scaled(self.p)
            .expect("p is a small positive prime")
    }
}

fn require_split(ring: &RingSpec, p: i64) -> Result<(QuadInt, QuadInt)> {
    match classify_rational_prime(p, ring)? {
        Splitting::Split => split_prime(p, ring),
        other => Err(Error::NotSplit {
            p,
            d: ring.d(),
            kind: other.as_str(),
        }),
    }
}

/// The CRT array: representatives of `σ(𝔭₂)/pΛ` and `σ(𝔭₁)/pΛ` in the Voronoi cell of `pΛ`.
pub fn crt_array(ring: &RingSpec, p: i64) -> Result<ArrayDesign> {
    let (pi, pih) = require_split(ring, p)?;
    let within = Lattice::ambient(*ring).scaled(p)?;
    let subarray1 = coset_representatives(&Lattice::ideal(&pih)?, &within)?;
    let subarray2 = coset_representatives(&Lattice::ideal(&pi)?, &within)?;
    Ok(ArrayDesign {
        ring: *ring,
        p,
        generators: (pi, pih),
        variant: Variant::Crt,
        strategy: Strategy::HalfOpen,
        subarray1,
        subarray2,
        spacing: 1.0,
    })
}

/// HSCRT array built with a fixed enumeration strategy, without the hole-free check.
///
/// `subarray1 = {B_π̂ x₁}` over `x₁ ∈ Z[q] / 2σ(𝔭₁)` with the nonzero points of `pΛ` dropped;
/// `subarray2 = {B_π x₂}` over `x₂ ∈ Z[q] / σ(𝔭₂)`.
pub fn hscrt_array_with_strategy(
    ring: &RingSpec,
    p: i64,
    strategy: Strategy,
) -> Result<ArrayDesign> {
    let (pi, pih) = require_split(ring, p)?;
    let amb = Lattice::ambient(*ring);
    let double_p1 = Lattice::ideal(&pi)?.scaled(2)?;
    let x1 = match strategy {
        Strategy::HalfOpen => coset_representatives(&amb, &double_p1)?,
        Strategy::ClosedCell => closed_cell_points(&amb, &double_p1)?,
    };
    let x2 = coset_representatives(&amb, &Lattice::ideal(&pih)?)?;
    let (b_pi, b_pih) = (matrix_rep(&pi), matrix_rep(&pih));
    let p_lat = amb.scaled(p)?;

    let mut subarray1 = Vec::with_capacity(x1.len());
    for x in &x1 {
        let z: LatticePoint = b_pih.apply((x.a, x.b))?.into();
        if z.is_origin() || !p_lat.contains(&z) {
            subarray1.push(z);
        }
    }
    let mut subarray2 = x2
        .iter()
        .map(|x| b_pi.apply((x.a, x.b)).map(LatticePoint::from))
        .collect::<Result<Vec<_>>>()?;
    subarray1.sort_unstable();
    subarray1.dedup();
    subarray2.sort_unstable();
    subarray2.dedup();
    Ok(ArrayDesign {
        ring: *ring,
        p,
        generators: (pi, pih),
        variant: Variant::Hscrt,
        strategy,
        subarray1,
        subarray2,
        spacing: 1.0,
    })
}

/// HSCRT array that passes [`verify_hole_free`]: the half-open strategy first, the
/// closed-cell enumeration if that leaves a hole.
pub fn hscrt_array(ring: &RingSpec, p: i64) -> Result<ArrayDesign> {
    let mut last = None;
    for strategy in [Strategy::HalfOpen, Strategy::ClosedCell] {
        let design = hscrt_array_with_strategy(ring, p, strategy)?;
        let report = verify_hole_free(&design)?;
        if report.passed {
            return Ok(design);
        }
        last = Some(report);
    }
    let report = last.expect("at least one strategy ran");
    Err(Error::HoleFreeFailed {
        missing: report.missing.len(),
        first: report.missing.first().map(|p| (p.a, p.b)).unwrap_or((0, 0)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoarrayKind {
    Difference,
    Sum,
}

/// A multiset of virtual sensor positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coarray {
    pub kind: CoarrayKind,
    pub entries: BTreeMap<LatticePoint, u64>,
}

impl Coarray {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, pt: &LatticePoint) -> u64 {
        self.entries.get(pt).copied().unwrap_or(0)
    }

    pub fn contains(&self, pt: &LatticePoint) -> bool {
        self.entries.contains_key(pt)
    }

    pub fn points(&self) -> BTreeSet<LatticePoint> {
        self.entries.keys().copied().collect()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries
            .keys()
            .all(|p| self.entries.contains_key(&p.neg()))
    }
}

fn pairwise(design: &ArrayDesign, kind: CoarrayKind) -> Coarray {
    let s2 = &design.subarray2;
    let entries = design
        .subarray1
        .par_chunks(16)
        .map(|chunk| {
            let mut m = BTreeMap::new();
            for z1 in chunk {
                for z2 in s2 {
                    let v = match kind {
                        CoarrayKind::Difference => z1.sub(z2),
                        CoarrayKind::Sum => z1.add(z2),
                    };
                    *m.entry(v).or_insert(0u64) += 1;
                }
            }
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Coarray { kind, entries }
}

/// All differences `z₁ - z₂` with `z₁` in subarray 1 and `z₂` in subarray 2.
pub fn cross_difference(design: &ArrayDesign) -> Coarray {
    pairwise(design, CoarrayKind::Difference)
}

/// All sums `z₁ + z₂` with `z₁` in subarray 1 and `z₂` in subarray 2.
pub fn sum_coarray(design: &ArrayDesign) -> Coarray {
    pairwise(design, CoarrayKind::Sum)
}

/// A residue modulo `pΛ` reached by more than one cross-difference pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub residue: LatticePoint,
    pub pairs: Vec<(LatticePoint, LatticePoint)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtReport {
    pub sensor_count: usize,
    pub expected_sensors: usize,
    pub pairs: usize,
    pub residues_hit: usize,
    pub residues_expected: usize,
    pub collisions: Vec<Collision>,
    pub passed: bool,
}

fn expect_variant(design: &ArrayDesign, v: Variant) -> Result<()> {
    if design.variant == v {
        Ok(())
    } else {
        Err(Error::WrongVariant {
            expected: v.as_str(),
            found: design.variant.as_str(),
        })
    }
}

/// Reduces every cross-difference modulo `pΛ` and checks the `p²` residues are each hit once.
pub fn verify_crt_bijection(design: &ArrayDesign) -> Result<CrtReport> {
    expect_variant(design, Variant::Crt)?;
    let p_lat = design.p_lattice();
    let mut hits: BTreeMap<LatticePoint, Vec<(LatticePoint, LatticePoint)>> = BTreeMap::new();
    for z1 in &design.subarray1 {
        for z2 in &design.subarray2 {
            let r = reduce_mod(&z1.sub(z2), &p_lat);
            hits.entry(r).or_default().push((*z1, *z2));
        }
    }
    let collisions: Vec<Collision> = hits
        .iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(r, v)| Collision {
            residue: *r,
            pairs: v.clone(),
        })
        .collect();
    let p = design.p as usize;
    let sensor_count = design.sensor_count();
    let pairs = design.subarray1.len() * design.subarray2.len();
    let passed = collisions.is_empty() && hits.len() == p * p && sensor_count == 2 * p - 1;
    Ok(CrtReport {
        sensor_count,
        expected_sensors: 2 * p - 1,
        pairs,
        residues_hit: hits.len(),
        residues_expected: p * p,
        collisions,
        passed,
    })
}

/// Number of distinct residues modulo `pΛ` among the coarray lags.
pub fn reduce_residues(design: &ArrayDesign, co: &Coarray) -> usize {
    let p_lat = design.p_lattice();
    co.entries
        .keys()
        .map(|x| reduce_mod(x, &p_lat))
        .collect::<BTreeSet<_>>()
        .len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleFreeReport {
    pub core_size: usize,
    pub covered: usize,
    pub missing: Vec<LatticePoint>,
    pub sum_equals_difference: bool,
    pub passed: bool,
}

/// Checks that every point of [`contiguous_core`] is a raw cross-difference.
pub fn verify_hole_free(design: &ArrayDesign) -> Result<HoleFreeReport> {
    expect_variant(design, Variant::Hscrt)?;
    let core = contiguous_core(&design.ring, design.p)?;
    let diff = cross_difference(design);
    let sum = sum_coarray(design);
    let missing: Vec<LatticePoint> = core.iter().filter(|c| !diff.contains(c)).copied().collect();
    let sum_equals_difference = diff.points() == sum.points();
    Ok(HoleFreeReport {
        core_size: core.len(),
        covered: core.len() - missing.len(),
        passed: missing.is_empty(),
        missing,
        sum_equals_difference,
    })
}

/// The hole-free central region `Λ ∩ V(pΛ)` of an HSCRT coarray, `p²` points, sorted.
///
/// `Z[i]` gives the square `|a|, |b| <= (p-1)/2`. `Z[ω]` gives the hexagon
/// `-p <= 2a+b < p`, `-p <= a+2b < p`, `-p < b-a <= p`, the half-open cell of `pA₂`.
pub fn contiguous_core(ring: &RingSpec, p: i64) -> Result<Vec<LatticePoint>> {
    require_split(ring, p)?;
    let mut out = Vec::with_capacity((p * p) as usize);
    match ring.d() {
        -1 => {
            let h = (p - 1) / 2;
            for a in -h..=h {
                for b in -h..=h {
                    out.push(LatticePoint::new(a, b));
                }
            }
        }
        -3 => {
            for a in -p..=p {
                for b in -p..=p {
                    let (u, v, w) = (2 * a + b, a + 2 * b, b - a);
                    if (-p..p).contains(&u) && (-p..p).contains(&v) && -p < w && w <= p {
                        out.push(LatticePoint::new(a, b));
                    }
                }
            }
        }
        _ => {
            let amb = Lattice::ambient(*ring);
            out = coset_representatives(&amb, &amb.scaled(p)?)?;
            debug_assert!(out
                .iter()
                .all(|x| voronoi_member(x, &amb.scaled(p).unwrap())));
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalMetrics {
    pub sensor_count: usize,
    pub expected_sensor_count: usize,
    /// Perimeter of the aperture `V(2pΛ)` scaled by the spacing.
    pub perimeter: f64,
    /// Area of the aperture `V(2pΛ)` scaled by the spacing.
    pub area: f64,
    pub dof_contiguous: usize,
}

/// Aperture perimeter and area of an HSCRT design, with the measured sensor count.
pub fn physical_metrics(design: &ArrayDesign) -> Result<PhysicalMetrics> {
    expect_variant(design, Variant::Hscrt)?;
    let (p, d) = (design.p as f64, design.spacing);
    let sin60 = (std::f64::consts::PI / 3.0).sin();
    let (perimeter, area) = match design.ring.d() {
        -1 => (8.0 * p * d, 4.0 * p * p * d * d),
        -3 => (6.0 * p * d / sin60, 3.0 * p * p * d * d / sin60),
        _ => {
            let cell = voronoi_polygon(&Lattice::ambient(design.ring).scaled(2 * design.p)?);
            let n = cell.len();
            let mut per = 0.0;
            let mut twice_area = 0.0;
            for i in 0..n {
                let (x0, y0) = cell[i];
                let (x1, y1) = cell[(i + 1) % n];
                per += (x1 - x0).hypot(y1 - y0);
                twice_area += x0 * y1 - x1 * y0;
            }
            (per * d, twice_area.abs() / 2.0 * d * d)
        }
    };
    Ok(PhysicalMetrics {
        sensor_count: design.sensor_count(),
        expected_sensor_count: (5 * design.p - 4) as usize,
        perimeter,
        area,
        dof_contiguous: (design.p * design.p) as usize,
    })
}
