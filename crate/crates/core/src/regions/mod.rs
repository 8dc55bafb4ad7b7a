//! Admissible index sets in the `(1/p, 1/q)` square.
//!
//! All coordinates are exact rationals. The quadrangle `Δ_a` has vertices
//! `A = (1/2, 1/2)`, `B = (1, 1/q_a)`, `C = (1, 0)`, `D = (1/q_a', 0)` with
//! `q_a = n/μ_a` and `μ_a = (mn - 4n + 2a)/(2(m - 2))`. The triangle `AEF`
//! adds `E = ((n+m)/(2n), 1/2)` and `F = (1/2, (n-m)/(2n))`.

mod svg;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{fmt_q, q, Q};

pub use svg::{render_svg, Stroke};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("mu_a = {0} < 0: the region is undefined")]
    NegativeMu(String),
    #[error("{kind} needs {hypothesis}")]
    Hypothesis { kind: String, hypothesis: String },
}

/// `q` or `q = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(Q),
    Infinite,
}

impl Index {
    pub fn reciprocal(&self) -> Q {
        match self {
            Index::Finite(v) => v.recip(),
            Index::Infinite => Q::zero(),
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(v) => f.write_str(&fmt_q(v)),
            Index::Infinite => f.write_str("inf"),
        }
    }
}

/// A point `(1/p, 1/q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexPoint {
    pub inv_p: Q,
    pub inv_q: Q,
}

impl IndexPoint {
    pub fn new(inv_p: Q, inv_q: Q) -> Result<Self, RegionError> {
        let unit = |v: &Q| !v.is_negative() && *v <= Q::one();
        if !unit(&inv_p) || !unit(&inv_q) {
            return Err(RegionError::InvalidParameters(format!(
                "({}, {}) is not in the unit square",
                fmt_q(&inv_p),
                fmt_q(&inv_q)
            )));
        }
        Ok(IndexPoint { inv_p, inv_q })
    }

    fn at(inv_p: Q, inv_q: Q) -> Self {
        IndexPoint { inv_p, inv_q }
    }
}

impl fmt::Display for IndexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_q(&self.inv_p), fmt_q(&self.inv_q))
    }
}

fn check_mn(m: u32, n: usize) -> Result<(), RegionError> {
    if m < 4 || m % 2 != 0 {
        return Err(RegionError::InvalidParameters(format!("m must be even and >= 4, got {m}")));
    }
    if n < 2 {
        return Err(RegionError::InvalidParameters(format!("n must be >= 2, got {n}")));
    }
    Ok(())
}

/// `(μ_a, q_a)`; `q_a = ∞` when `μ_a = 0`.
pub fn mu_q(a: Q, m: u32, n: usize) -> Result<(Q, Index), RegionError> {
    check_mn(m, n)?;
    let (mi, ni) = (m as i64, n as i64);
    let mu = (Q::from_integer(mi * ni - 4 * ni) + a * 2) / Q::from_integer(2 * (mi - 2));
    if mu.is_negative() {
        return Err(RegionError::NegativeMu(fmt_q(&mu)));
    }
    let qa = if mu.is_zero() {
        Index::Infinite
    } else {
        Index::Finite(Q::from_integer(ni) / mu)
    };
    Ok((mu, qa))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    /// Quadrangle `Δ_a`.
    Delta(Q),
    Aef,
    /// `AEBCDF`, built with `a = m`.
    Hexagon,
    /// The `m ∈ (n, 2n)` pentagon; the full square for `m >= 2n`.
    Pentagon,
}

impl RegionKind {
    pub fn parse(s: &str, m: u32) -> Result<Self, RegionError> {
        match s {
            "delta_m" => Ok(RegionKind::Delta(Q::from_integer(m as i64))),
            "delta_0" => Ok(RegionKind::Delta(Q::zero())),
            "aef" | "AEF" => Ok(RegionKind::Aef),
            "hexagon" => Ok(RegionKind::Hexagon),
            "pentagon" => Ok(RegionKind::Pentagon),
            other => match other.strip_prefix("delta_").and_then(crate::exact::parse_q) {
                Some(a) => Ok(RegionKind::Delta(a)),
                None => Err(RegionError::InvalidParameters(format!(
                    "unknown region kind '{other}' (expected delta_m, delta_0, delta_<a>, aef, hexagon, pentagon)"
                ))),
            },
        }
    }

    pub fn tag(&self) -> String {
        match self {
            RegionKind::Delta(a) => format!("delta_{}", fmt_q(a)),
            RegionKind::Aef => "aef".into(),
            RegionKind::Hexagon => "hexagon".into(),
            RegionKind::Pentagon => "pentagon".into(),
        }
    }
}

/// Norm pair attached to an index point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormPair {
    /// `(L^p, L^q)`.
    Strong,
    /// `(L^1, L^{q_a,∞})` at `B`.
    WeakTarget,
    /// `(L^{q_a',1}, L^∞)` at `D`.
    LorentzSource,
    /// `(L^p, L^{q,∞})` on the edge `1/q = 1/p - m/(2n)`.
    WeakEdge,
}

impl fmt::Display for NormPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormPair::Strong => "(L^p, L^q)",
            NormPair::WeakTarget => "(L^1, L^{q,inf})",
            NormPair::LorentzSource => "(L^{q',1}, L^inf)",
            NormPair::WeakEdge => "(L^p, L^{q,inf})",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub location: Location,
    /// `None` outside the region.
    pub norms: Option<NormPair>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexRegion {
    pub kind: RegionKind,
    pub m: u32,
    pub n: usize,
    /// Distinct vertices in boundary order.
    pub vertices: Vec<IndexPoint>,
    pub labels: Vec<String>,
    pub flags: Vec<String>,
    /// Points carrying the `(L^1, L^{q,∞})` tag.
    weak_target: Vec<IndexPoint>,
    /// Points carrying the `(L^{q',1}, L^∞)` tag.
    lorentz_source: Vec<IndexPoint>,
    /// Offset `m/(2n)` of the weak edge `1/q = 1/p - m/(2n)`.
    weak_edge: Option<Q>,
}

fn hypothesis(kind: RegionKind, text: &str) -> RegionError {
    RegionError::Hypothesis {
        kind: kind.tag(),
        hypothesis: text.into(),
    }
}

struct Builder {
    vertices: Vec<IndexPoint>,
    labels: Vec<String>,
    merged: bool,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: Vec::new(),
            labels: Vec::new(),
            merged: false,
        }
    }

    fn push(&mut self, label: &str, pt: IndexPoint) {
        if let Some(i) = self.vertices.iter().position(|v| *v == pt) {
            self.labels[i] = format!("{}={label}", self.labels[i]);
            self.merged = true;
        } else {
            self.vertices.push(pt);
            self.labels.push(label.into());
        }
    }
}

pub fn build_region(kind: RegionKind, m: u32, n: usize) -> Result<IndexRegion, RegionError> {
    check_mn(m, n)?;
    let (mi, ni) = (m as i64, n as i64);
    let half = q(1, 2);
    let a_pt = IndexPoint::at(half, half);
    let e_pt = IndexPoint::at(q(ni + mi, 2 * ni), half);
    let f_pt = IndexPoint::at(half, q(ni - mi, 2 * ni));
    let mut flags = Vec::new();
    let mut b = Builder::new();
    let mut weak_target = Vec::new();
    let mut lorentz_source = Vec::new();
    let mut weak_edge = None;

    let corners = |a: Q, flags: &mut Vec<String>| -> Result<(IndexPoint, IndexPoint), RegionError> {
        let (mu, qa) = mu_q(a, m, n)?;
        let inv = qa.reciprocal();
        if inv > half {
            return Err(hypothesis(kind, &format!("q_a >= 2 (got q_a = {qa}, mu_a = {})", fmt_q(&mu))));
        }
        if qa == Index::Infinite {
            flags.push("degenerate: q_a = inf, B and D collapse onto C".into());
        }
        Ok((IndexPoint::at(Q::one(), inv), IndexPoint::at(Q::one() - inv, Q::zero())))
    };

    match kind {
        RegionKind::Delta(a) => {
            if a == Q::from_integer(mi) && n < m as usize {
                return Err(hypothesis(kind, "n >= m"));
            }
            let (bp, dp) = corners(a, &mut flags)?;
            b.push("A", a_pt);
            b.push("B", bp);
            b.push("C", IndexPoint::at(Q::one(), Q::zero()));
            b.push("D", dp);
            weak_target.push(bp);
            lorentz_source.push(dp);
        }
        RegionKind::Aef => {
            if n < m as usize {
                return Err(hypothesis(kind, "n >= m"));
            }
            if n == m as usize {
                flags.push("n = m: F lies on the axis 1/q = 0".into());
            }
            b.push("A", a_pt);
            b.push("E", e_pt);
            b.push("F", f_pt);
            weak_edge = Some(q(mi, 2 * ni));
        }
        RegionKind::Hexagon => {
            if n < m as usize {
                return Err(hypothesis(kind, "n >= m"));
            }
            let (bp, dp) = corners(Q::from_integer(mi), &mut flags)?;
            b.push("A", a_pt);
            b.push("E", e_pt);
            b.push("B", bp);
            b.push("C", IndexPoint::at(Q::one(), Q::zero()));
            b.push("D", dp);
            b.push("F", f_pt);
            weak_target.push(bp);
            lorentz_source.push(dp);
            weak_edge = Some(q(mi, 2 * ni));
        }
        RegionKind::Pentagon => {
            if m as usize <= n {
                return Err(hypothesis(kind, "m > n"));
            }
            let m1 = mi / 2;
            b.push("A", a_pt);
            b.push("P2", IndexPoint::at(Q::one(), half));
            if (m as usize) < 2 * n {
                b.push("P3", IndexPoint::at(Q::one(), q(ni - m1, ni)));
                b.push("P4", IndexPoint::at(q(m1, ni), Q::zero()));
                flags.push("vertex list taken verbatim from the source remark for m in (n, 2n)".into());
            } else {
                b.push("C", IndexPoint::at(Q::one(), Q::zero()));
                flags.push("m >= 2n: whole index square".into());
            }
            b.push("P5", IndexPoint::at(half, Q::zero()));
        }
    }
    if b.merged {
        flags.push("coincident vertices merged".into());
    }
    let region = IndexRegion {
        kind,
        m,
        n,
        vertices: b.vertices,
        labels: b.labels,
        flags,
        weak_target,
        lorentz_source,
        weak_edge,
    };
    if region.vertices.len() >= 3 && !region.is_convex() {
        return Err(RegionError::InvalidParameters(format!(
            "{} for (m, n) = ({m}, {n}) is not convex",
            kind.tag()
        )));
    }
    Ok(region)
}

fn cross(o: &IndexPoint, a: &IndexPoint, b: &IndexPoint) -> Q {
    (a.inv_p - o.inv_p) * (b.inv_q - o.inv_q) - (a.inv_q - o.inv_q) * (b.inv_p - o.inv_p)
}

fn on_segment(a: &IndexPoint, b: &IndexPoint, pt: &IndexPoint) -> bool {
    cross(a, b, pt).is_zero()
        && pt.inv_p >= a.inv_p.min(b.inv_p)
        && pt.inv_p <= a.inv_p.max(b.inv_p)
        && pt.inv_q >= a.inv_q.min(b.inv_q)
        && pt.inv_q <= a.inv_q.max(b.inv_q)
}

impl IndexRegion {
    pub fn label(&self, name: &str) -> Option<IndexPoint> {
        self.labels
            .iter()
            .position(|l| l.split('=').any(|part| part == name))
            .map(|i| self.vertices[i])
    }

    /// Twice the signed area.
    fn signed_area2(&self) -> Q {
        let v = &self.vertices;
        (0..v.len()).fold(Q::zero(), |acc, i| {
            let (a, b) = (&v[i], &v[(i + 1) % v.len()]);
            acc + a.inv_p * b.inv_q - b.inv_p * a.inv_q
        })
    }

    fn is_convex(&self) -> bool {
        let v = &self.vertices;
        let k = v.len();
        let mut sign = 0;
        for i in 0..k {
            let c = cross(&v[i], &v[(i + 1) % k], &v[(i + 2) % k]);
            let s = if c.is_positive() { 1 } else if c.is_negative() { -1 } else { 0 };
            if s != 0 {
                if sign != 0 && s != sign {
                    return false;
                }
                sign = s;
            }
        }
        true
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3 || self.signed_area2().is_zero()
    }

    pub fn location(&self, pt: &IndexPoint) -> Location {
        let v = &self.vertices;
        let k = v.len();
        if self.is_degenerate() {
            let hit = match k {
                0 => false,
                1 => v[0] == *pt,
                _ => (0..k).any(|i| on_segment(&v[i], &v[(i + 1) % k], pt)),
            };
            return if hit { Location::Boundary } else { Location::Outside };
        }
        let orient = if self.signed_area2().is_positive() { Q::one() } else { -Q::one() };
        let mut on_edge = false;
        for i in 0..k {
            let c = cross(&v[i], &v[(i + 1) % k], pt) * orient;
            if c.is_negative() {
                return Location::Outside;
            }
            if c.is_zero() {
                on_edge = true;
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    pub fn classify(&self, pt: &IndexPoint) -> Classification {
        let location = self.location(pt);
        if location == Location::Outside {
            return Classification { location, norms: None };
        }
        let norms = if self.weak_target.contains(pt) && !self.lorentz_source.contains(pt) {
            NormPair::WeakTarget
        } else if self.lorentz_source.contains(pt) && !self.weak_target.contains(pt) {
            NormPair::LorentzSource
        } else if self.weak_edge.is_some_and(|d| pt.inv_q == pt.inv_p - d) {
            NormPair::WeakEdge
        } else {
            NormPair::Strong
        };
        Classification {
            location,
            norms: Some(norms),
        }
    }

    pub fn export(&self) -> RegionJson {
        RegionJson {
            kind: self.kind.tag(),
            m: self.m,
            n: self.n,
            vertices: self
                .vertices
                .iter()
                .zip(&self.labels)
                .map(|(v, l)| VertexJson {
                    label: l.clone(),
                    inv_p: fmt_q(&v.inv_p),
                    inv_q: fmt_q(&v.inv_q),
                })
                .collect(),
            degenerate: self.is_degenerate(),
            flags: self.flags.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexJson {
    pub label: String,
    pub inv_p: String,
    pub inv_q: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionJson {
    pub kind: String,
    pub m: u32,
    pub n: usize,
    pub vertices: Vec<VertexJson>,
    pub degenerate: bool,
    pub flags: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(a: (i64, i64), b: (i64, i64)) -> IndexPoint {
        IndexPoint::new(q(a.0, a.1), q(b.0, b.1)).unwrap()
    }

    #[test]
    fn mu_and_q_examples() {
        assert_eq!(mu_q(q(4, 1), 4, 6).unwrap(), (q(2, 1), Index::Finite(q(3, 1))));
        assert_eq!(mu_q(q(0, 1), 4, 6).unwrap(), (q(0, 1), Index::Infinite));
        for m in [4u32, 6, 8, 10] {
            let (_, qa) = mu_q(Q::from_integer(m as i64), m, m as usize).unwrap();
            assert_eq!(qa, Index::Finite(q(2, 1)));
        }
        assert!(matches!(mu_q(q(-20, 1), 4, 6), Err(RegionError::NegativeMu(_))));
        assert!(mu_q(q(4, 1), 5, 6).is_err());
    }

    #[test]
    fn figure_vertices_for_four_six() {
        let d = build_region(RegionKind::Delta(q(4, 1)), 4, 6).unwrap();
        assert_eq!(d.vertices, vec![pt((1, 2), (1, 2)), pt((1, 1), (1, 3)), pt((1, 1), (0, 1)), pt((2, 3), (0, 1))]);
        assert_eq!(d.labels, ["A", "B", "C", "D"]);
        let t = build_region(RegionKind::Aef, 4, 6).unwrap();
        assert_eq!(t.label("E"), Some(pt((5, 6), (1, 2))));
        assert_eq!(t.label("F"), Some(pt((1, 2), (1, 6))));
        let h = build_region(RegionKind::Hexagon, 4, 6).unwrap();
        assert_eq!(h.labels, ["A", "E", "B", "C", "D", "F"]);
        assert!(h.flags.is_empty());
    }

    #[test]
    fn degenerate_delta_zero_at_m_four() {
        let d = build_region(RegionKind::Delta(q(0, 1)), 4, 6).unwrap();
        assert!(d.is_degenerate());
        assert_eq!(d.vertices, vec![pt((1, 2), (1, 2)), pt((1, 1), (0, 1))]);
        assert!(d.flags.iter().any(|f| f.contains("q_a = inf")));
        assert_eq!(d.location(&pt((3, 4), (1, 4))), Location::Boundary);
        assert_eq!(d.location(&pt((3, 4), (1, 5))), Location::Outside);
    }

    #[test]
    fn n_equals_m_flags() {
        let t = build_region(RegionKind::Aef, 4, 4).unwrap();
        assert_eq!(t.label("F"), Some(pt((1, 2), (0, 1))));
        assert!(!t.flags.is_empty());
        let h = build_region(RegionKind::Hexagon, 4, 4).unwrap();
        assert!(h.flags.iter().any(|f| f.contains("merged")));
    }

    #[test]
    fn hypothesis_errors() {
        assert!(matches!(build_region(RegionKind::Aef, 6, 4), Err(RegionError::Hypothesis { .. })));
        assert!(matches!(build_region(RegionKind::Delta(q(6, 1)), 6, 4), Err(RegionError::Hypothesis { .. })));
        assert!(matches!(build_region(RegionKind::Pentagon, 4, 6), Err(RegionError::Hypothesis { .. })));
    }

    #[test]
    fn pentagon_and_square() {
        let p = build_region(RegionKind::Pentagon, 6, 4).unwrap();
        assert_eq!(p.vertices.len(), 5);
        assert_eq!(p.vertices[2], pt((1, 1), (1, 4)));
        assert_eq!(p.vertices[3], pt((3, 4), (0, 1)));
        let s = build_region(RegionKind::Pentagon, 8, 4).unwrap();
        assert_eq!(s.vertices.len(), 4);
        assert_eq!(s.location(&pt((1, 1), (0, 1))), Location::Boundary);
        assert_eq!(s.location(&pt((3, 4), (1, 4))), Location::Interior);
    }

    #[test]
    fn endpoint_tags() {
        let d = build_region(RegionKind::Delta(q(4, 1)), 4, 6).unwrap();
        let c = d.classify(&pt((1, 1), (1, 3)));
        assert_eq!(c.location, Location::Boundary);
        assert_eq!(c.norms, Some(NormPair::WeakTarget));
        assert_eq!(d.classify(&pt((2, 3), (0, 1))).norms, Some(NormPair::LorentzSource));
        let a = d.classify(&pt((1, 2), (1, 2)));
        assert_eq!((a.location, a.norms), (Location::Boundary, Some(NormPair::Strong)));
        assert_eq!(d.classify(&pt((1, 2), (3, 4))), Classification { location: Location::Outside, norms: None });
        let t = build_region(RegionKind::Aef, 4, 6).unwrap();
        assert_eq!(t.classify(&pt((2, 3), (1, 3))).norms, Some(NormPair::WeakEdge));
    }

    #[test]
    fn export_uses_rational_strings() {
        let j = build_region(RegionKind::Delta(q(4, 1)), 4, 6).unwrap().export();
        let coords: Vec<(String, String)> = j.vertices.iter().map(|v| (v.inv_p.clone(), v.inv_q.clone())).collect();
        assert_eq!(coords[1], ("1".to_string(), "1/3".to_string()));
        assert_eq!(coords[3], ("2/3".to_string(), "0".to_string()));
    }

    /// Supporting lines through vertex pairs, without using the vertex order.
    fn brute_force(region: &IndexRegion, pt: &IndexPoint) -> Location {
        let v = &region.vertices;
        let mut inside = true;
        let mut on_line = false;
        for i in 0..v.len() {
            for j in 0..v.len() {
                if i == j {
                    continue;
                }
                let sides: Vec<Q> = v.iter().map(|w| cross(&v[i], &v[j], w)).collect();
                if sides.iter().any(|s| s.is_negative()) {
                    continue;
                }
                let c = cross(&v[i], &v[j], pt);
                if c.is_negative() {
                    inside = false;
                } else if c.is_zero() {
                    on_line = true;
                }
            }
        }
        match (inside, on_line) {
            (false, _) => Location::Outside,
            (true, true) => Location::Boundary,
            (true, false) => Location::Interior,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn classify_matches_half_planes(a in 0i64..=240, b in 0i64..=240, kind in 0usize..4, mn in 0usize..3) {
            let (m, n) = [(4u32, 6usize), (4, 8), (6, 9)][mn];
            let k = [RegionKind::Delta(Q::from_integer(m as i64)), RegionKind::Aef, RegionKind::Hexagon, RegionKind::Delta(q(1, 1))][kind];
            let region = build_region(k, m, n).unwrap();
            let p = IndexPoint::new(q(a, 240), q(b, 240)).unwrap();
            prop_assert_eq!(region.location(&p), brute_force(&region, &p));
        }

        #[test]
        fn weak_edge_holds_at_e_and_f(m2 in 2u32..6, extra in 0usize..8) {
            let m = 2 * m2;
            let n = m as usize + extra;
            let t = build_region(RegionKind::Aef, m, n).unwrap();
            let off = q(m as i64, 2 * n as i64);
            for name in ["E", "F"] {
                let v = t.label(name).unwrap();
                prop_assert_eq!(v.inv_q, v.inv_p - off);
            }
        }

        #[test]
        fn duality_and_monotone_b(m2 in 2u32..6, n in 2usize..12) {
            let m = 2 * m2;
            let (mu0, q0) = mu_q(Q::zero(), m, n).unwrap();
            let (mum, qm) = mu_q(Q::from_integer(m as i64), m, n).unwrap();
            prop_assert!(mu0 <= mum);
            prop_assert!(q0.reciprocal() <= qm.reciprocal());
            if let Ok(d) = build_region(RegionKind::Delta(Q::zero()), m, n) {
                let (bp, dp) = (d.label("B").unwrap(), d.label("D").unwrap());
                prop_assert_eq!(bp.inv_q + dp.inv_p, Q::one());
            }
        }
    }
}
