//! JSON and CSV forms of an [`ArrayDesign`].
//!
//! JSON (schema version 1) keeps exact basis coordinates next to decimal Cartesian
//! positions; import reads only the basis coordinates back, so a round trip is lossless.

use serde::{Deserialize, Serialize};

use crate::design::{ArrayDesign, Strategy, Variant};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::ring::{ring_from_d, RingSpec};

pub const SCHEMA_VERSION: u32 = 1;

pub const SUBARRAY_LABELS: [&str; 2] = ["subarray1", "subarray2"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingDoc {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "B")]
    pub b: i64,
    #[serde(rename = "C")]
    pub c: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubarrayDoc {
    pub label: String,
    pub coords_basis: Vec<[i64; 2]>,
    pub coords_cartesian: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignDoc {
    pub schema_version: u32,
    pub ring: RingDoc,
    pub p: i64,
    pub generators: [[i64; 2]; 2],
    pub variant: String,
    pub strategy: String,
    pub spacing: f64,
    pub subarrays: Vec<SubarrayDoc>,
}

/// Rounds to 12 significant decimal digits.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn cartesian(pt: &LatticePoint, ring: &RingSpec, spacing: f64) -> [f64; 2] {
    let (x, y) = pt.cartesian_f64(ring);
    [round_sig12(x * spacing), round_sig12(y * spacing)]
}

impl DesignDoc {
    pub fn from_design(design: &ArrayDesign) -> Self {
        let ring = design.ring;
        let sub = |label: &str, pts: &[LatticePoint]| SubarrayDoc {
            label: label.to_string(),
            coords_basis: pts.iter().map(|p| [p.a, p.b]).collect(),
            coords_cartesian: pts
                .iter()
                .map(|p| cartesian(p, &ring, design.spacing))
                .collect(),
        };
        let (pi, pih) = design.generators;
        DesignDoc {
            schema_version: SCHEMA_VERSION,
            ring: RingDoc {
                d: ring.d(),
                b: ring.b(),
                c: ring.c(),
            },
            p: design.p,
            generators: [[pi.m1(), pi.m2()], [pih.m1(), pih.m2()]],
            variant: design.variant.as_str().to_string(),
            strategy: design.strategy.as_str().to_string(),
            spacing: design.spacing,
            subarrays: vec![
                sub(SUBARRAY_LABELS[0], &design.subarray1),
                sub(SUBARRAY_LABELS[1], &design.subarray2),
            ],
        }
    }

    /// Structural validation and conversion back to a design.
    ///
    /// The sensor sets themselves are taken as given; checking them is the job of the
    /// verifiers.
    pub fn into_design(self) -> Result<ArrayDesign> {
        let bad = |m: String| Err(Error::InvalidDesign(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "unsupported schema_version {}",
                self.schema_version
            ));
        }
        let ring = ring_from_d(self.ring.d)?;
        if (ring.b(), ring.c()) != (self.ring.b, self.ring.c) {
            return bad(format!(
                "B, C = {}, {} do not match D = {}",
                self.ring.b, self.ring.c, self.ring.d
            ));
        }
        let pi = ring.elem(self.generators[0][0], self.generators[0][1]);
        let pih = ring.elem(self.generators[1][0], self.generators[1][1]);
        if pih != pi.try_conjugate()? || pi.norm()? != self.p {
            return bad(format!(
                "generators {pi}, {pih} are not a conjugate pair of norm {}",
                self.p
            ));
        }
        let Some(variant) = Variant::parse(&self.variant) else {
            return bad(format!("unknown variant '{}'", self.variant));
        };
        let Some(strategy) = Strategy::parse(&self.strategy) else {
            return bad(format!("unknown strategy '{}'", self.strategy));
        };
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return bad(format!("spacing must be positive, got {}", self.spacing));
        }
        let labels: Vec<&str> = self.subarrays.iter().map(|s| s.label.as_str()).collect();
        if labels != SUBARRAY_LABELS {
            return bad(format!(
                "expected subarrays {SUBARRAY_LABELS:?}, found {labels:?}"
            ));
        }
        let mut subs = Vec::with_capacity(2);
        for s in self.subarrays {
            if s.coords_basis.is_empty() {
                return bad(format!("{} is empty", s.label));
            }
            if s.coords_cartesian.len() != s.coords_basis.len() {
                return bad(format!(
                    "{}: {} basis rows but {} Cartesian rows",
                    s.label,
                    s.coords_basis.len(),
                    s.coords_cartesian.len()
                ));
            }
            subs.push(
                s.coords_basis
                    .iter()
                    .map(|c| LatticePoint::new(c[0], c[1]))
                    .collect::<Vec<_>>(),
            );
        }
        let subarray2 = subs.pop().expect("two subarrays");
        let subarray1 = subs.pop().expect("two subarrays");
        Ok(ArrayDesign {
            ring,
            p: self.p,
            generators: (pi, pih),
            variant,
            strategy,
            subarray1,
            subarray2,
            spacing: self.spacing,
        })
    }
}

pub fn export_json(design: &ArrayDesign) -> String {
    let mut s = serde_json::to_string_pretty(&DesignDoc::from_design(design))
        .expect("design document serializes");
    s.push('\n');
    s
}

pub fn import_json(text: &str) -> Result<ArrayDesign> {
    let doc: DesignDoc = serde_json::from_str(text)?;
    doc.into_design()
}

/// CSV with header `x,y,subarray`; one row per sensor of each subarray.
pub fn export_csv(design: &ArrayDesign) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "subarray"])
        .expect("in-memory write");
    for (k, pts) in [&design.subarray1, &design.subarray2].iter().enumerate() {
        for p in pts.iter() {
            let [x, y] = cartesian(p, &design.ring, design.spacing);
            w.write_record([x.to_string(), y.to_string(), (k + 1).to_string()])
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

/// Reads a CSV export back into basis coordinates of the two subarrays.
///
/// Every row must be a lattice point of `ring` (scaled by `spacing`) to within `1e-6`.
pub fn import_csv(
    text: &str,
    ring: &RingSpec,
    spacing: f64,
) -> Result<(Vec<LatticePoint>, Vec<LatticePoint>)> {
    let bad = |m: String| Error::InvalidDesign(m);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["x", "y", "subarray"] {
        return Err(bad(format!("unexpected CSV header {header:?}")));
    }
    let g = crate::embedding::generator_matrix(ring).to_f64();
    let (re_q, im_q) = (g[0][1], g[1][1]);
    let mut out = (Vec::new(), Vec::new());
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|_| bad(format!("row {}: bad number '{}'", line + 1, &rec[i])))
        };
        let (x, y) = (num(0)? / spacing, num(1)? / spacing);
        let bf = y / im_q;
        let af = x - re_q * bf;
        let (a, b) = (af.round(), bf.round());
        if (a - af).abs() > 1e-6 || (b - bf).abs() > 1e-6 {
            return Err(bad(format!(
                "row {}: ({x}, {y}) is not a lattice point",
                line + 1
            )));
        }
        let pt = LatticePoint::new(a as i64, b as i64);
        match &rec[2] {
            "1" => out.0.push(pt),
            "2" => out.1.push(pt),
            other => return Err(bad(format!("row {}: unknown subarray '{other}'", line + 1))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{crt_array, hscrt_array};

    #[test]
    fn json_round_trip() {
        for (d, p) in [(-1, 5), (-3, 13), (-7, 11)] {
            let ring = ring_from_d(d).unwrap();
            for design in [crt_array(&ring, p).unwrap(), hscrt_array(&ring, p).unwrap()] {
                let text = export_json(&design);
                let back = import_json(&text).unwrap();
                assert_eq!(back, design);
                assert_eq!(export_json(&back), text);
            }
        }
    }

    #[test]
    fn json_layout() {
        let design = crt_array(&ring_from_d(-1).unwrap(), 5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&export_json(&design)).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["ring"]["D"], -1);
        assert_eq!(v["generators"][0], serde_json::json!([2, 1]));
        assert_eq!(v["variant"], "CRT");
        assert_eq!(
            v["subarrays"][0]["coords_basis"].as_array().unwrap().len(),
            5
        );
        assert_eq!(v["subarrays"][1]["label"], "subarray2");
    }

    #[test]
    fn cartesian_precision() {
        let design = hscrt_array(&ring_from_d(-3).unwrap(), 7).unwrap();
        let doc = DesignDoc::from_design(&design);
        for (b, c) in doc.subarrays[0]
            .coords_basis
            .iter()
            .zip(&doc.subarrays[0].coords_cartesian)
        {
            let x = b[0] as f64 + b[1] as f64 / 2.0;
            let y = b[1] as f64 * 3f64.sqrt() / 2.0;
            assert!((c[0] - x).abs() <= 1e-11 * x.abs().max(1.0));
            assert!((c[1] - y).abs() <= 1e-11 * y.abs().max(1.0));
        }
        assert_eq!(round_sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig12(-123456.7890123456), -123456.789012);
    }

    #[test]
    fn json_rejections() {
        let design = crt_array(&ring_from_d(-1).unwrap(), 5).unwrap();
        let good = DesignDoc::from_design(&design);

        let mut doc = good.clone();
        doc.schema_version = 2;
        assert!(matches!(doc.into_design(), Err(Error::InvalidDesign(_))));

        let mut doc = good.clone();
        doc.generators[1] = [2, 1];
        assert!(matches!(doc.into_design(), Err(Error::InvalidDesign(_))));

        let mut doc = good.clone();
        doc.variant = "XYZ".into();
        assert!(matches!(doc.into_design(), Err(Error::InvalidDesign(_))));

        let mut doc = good.clone();
        doc.subarrays[0].coords_basis.clear();
        doc.subarrays[0].coords_cartesian.clear();
        assert!(matches!(doc.into_design(), Err(Error::InvalidDesign(_))));

        let mut doc = good;
        doc.ring.d = -5;
        assert!(matches!(doc.into_design(), Err(Error::NotPid(-5))));

        assert!(matches!(import_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn csv_round_trip() {
        for d in [-1, -3] {
            let ring = ring_from_d(d).unwrap();
            let mut design = hscrt_array(&ring, 13).unwrap();
            design.spacing = 0.5;
            let text = export_csv(&design);
            assert!(text.starts_with("x,y,subarray\n"));
            assert_eq!(
                text.lines().count(),
                1 + design.subarray1.len() + design.subarray2.len()
            );
            let (s1, s2) = import_csv(&text, &ring, 0.5).unwrap();
            assert_eq!(s1, design.subarray1);
            assert_eq!(s2, design.subarray2);
        }
    }

    #[test]
    fn csv_rejects_off_lattice() {
        let ring = ring_from_d(-3).unwrap();
        let text = "x,y,subarray\n0.3,0.1,1\n";
        assert!(matches!(
            import_csv(text, &ring, 1.0),
            Err(Error::InvalidDesign(_))
        ));
        assert!(import_csv("a,b,c\n", &ring, 1.0).is_err());
    }
}
