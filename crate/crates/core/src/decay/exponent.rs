//! Exact time exponents of the `L^p → L^q` estimates for `U` and `V`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::DecayError;
use crate::exact::{fmt_q, q, Q};
use crate::kernel::Regime;
use crate::regions::{build_region, IndexPoint, IndexRegion, Location, NormPair, RegionKind};

/// `U = F⁻¹[cos(t√P) F u0]`, `V = F⁻¹[sin(t√P)/√P F u1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    U,
    V,
}

/// Which estimate supplies the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimate {
    /// `V` on `Δ_m`, kernel bound for the sine part.
    SineQuadrangle,
    /// `V` on the triangle `AEF`, uniform for large time.
    SineTriangle,
    /// `V` for `n < m` on the pentagon (or square for `m >= 2n`).
    SinePentagon,
    /// `U` on `Δ_0`.
    CosineQuadrangle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentQuery {
    pub part: Part,
    pub regime: Regime,
    pub inv_p: Q,
    pub inv_q: Q,
    pub m: u32,
    pub n: usize,
}

impl ExponentQuery {
    pub fn point(&self) -> Result<IndexPoint, DecayError> {
        Ok(IndexPoint::new(self.inv_p, self.inv_q)?)
    }

    pub fn describe(&self) -> String {
        format!(
            "{:?}, {}, (1/p, 1/q) = ({}, {}), m = {}, n = {}",
            self.part,
            match self.regime {
                Regime::SmallTime => "small",
                Regime::LargeTime => "large",
            },
            fmt_q(&self.inv_p),
            fmt_q(&self.inv_q),
            self.m,
            self.n
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoreticalExponent {
    pub exponent: Q,
    pub estimate: Estimate,
    pub region: IndexRegion,
    pub location: Location,
    pub norms: NormPair,
}

/// Regions consulted, in order of preference.
fn candidates(part: Part, m: u32, n: usize) -> Vec<(Estimate, RegionKind)> {
    match part {
        Part::U => vec![(Estimate::CosineQuadrangle, RegionKind::Delta(Q::zero()))],
        Part::V if n >= m as usize => vec![
            (Estimate::SineQuadrangle, RegionKind::Delta(Q::from_integer(m as i64))),
            (Estimate::SineTriangle, RegionKind::Aef),
        ],
        Part::V => vec![(Estimate::SinePentagon, RegionKind::Pentagon)],
    }
}

pub fn theoretical_exponent(qr: &ExponentQuery) -> Result<TheoreticalExponent, DecayError> {
    let pt = qr.point()?;
    let (m, n) = (qr.m, qr.n);
    let mut tried = Vec::new();
    for (estimate, kind) in candidates(qr.part, m, n) {
        let region = build_region(kind, m, n)?;
        let c = region.classify(&pt);
        let Some(norms) = c.norms else {
            tried.push(kind.tag());
            continue;
        };
        let exponent = formula(estimate, qr.regime, &pt, m, n);
        return Ok(TheoreticalExponent {
            exponent,
            estimate,
            region,
            location: c.location,
            norms,
        });
    }
    Err(DecayError::Outside {
        point: pt.to_string(),
        regions: tried.join(", "),
    })
}

fn formula(estimate: Estimate, regime: Regime, pt: &IndexPoint, m: u32, n: usize) -> Q {
    let nq = Q::from_integer(n as i64);
    let m1 = Q::from_integer(m as i64 / 2);
    let small = nq / m1 * (pt.inv_q - pt.inv_p);
    // |1/q - 1/p'| with 1/p' = 1 - 1/p
    let dual_gap = (pt.inv_q - (Q::one() - pt.inv_p)).abs();
    match (estimate, regime) {
        (Estimate::CosineQuadrangle, Regime::SmallTime) => small,
        (Estimate::CosineQuadrangle, Regime::LargeTime) => nq * dual_gap - m1.recip(),
        (_, Regime::SmallTime) => small + Q::one(),
        (Estimate::SineQuadrangle, Regime::LargeTime) => nq * dual_gap - q(1, m as i64),
        (_, Regime::LargeTime) => Q::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn query(part: Part, regime: Regime, inv_p: Q, inv_q: Q, m: u32, n: usize) -> ExponentQuery {
        ExponentQuery {
            part,
            regime,
            inv_p,
            inv_q,
            m,
            n,
        }
    }

    #[test]
    fn worked_examples() {
        let h = q(1, 2);
        let v = theoretical_exponent(&query(Part::V, Regime::SmallTime, h, h, 4, 6)).unwrap();
        assert_eq!(v.exponent, q(1, 1));
        assert_eq!(v.estimate, Estimate::SineQuadrangle);
        let b = theoretical_exponent(&query(Part::V, Regime::LargeTime, q(1, 1), q(1, 3), 4, 6)).unwrap();
        assert_eq!(b.exponent, q(7, 4));
        assert_eq!(b.norms, NormPair::WeakTarget);
        let u = theoretical_exponent(&query(Part::U, Regime::SmallTime, h, h, 4, 6)).unwrap();
        assert_eq!(u.exponent, q(0, 1));
    }

    #[test]
    fn outside_every_region() {
        let e = theoretical_exponent(&query(Part::V, Regime::SmallTime, q(1, 2), q(3, 4), 4, 6)).unwrap_err();
        assert!(e.to_string().contains("outside region"), "{e}");
    }

    #[test]
    fn triangle_is_uniform_for_large_time() {
        // (13/24, 5/24) is on EF and outside Δ_m for (4, 6)
        let t = theoretical_exponent(&query(Part::V, Regime::LargeTime, q(13, 24), q(5, 24), 4, 6)).unwrap();
        assert_eq!(t.estimate, Estimate::SineTriangle);
        assert_eq!(t.exponent, q(0, 1));
        assert_eq!(t.norms, NormPair::WeakEdge);
        let s = theoretical_exponent(&query(Part::V, Regime::SmallTime, q(13, 24), q(5, 24), 4, 6)).unwrap();
        assert_eq!(s.exponent, q(0, 1));
    }

    #[test]
    fn pentagon_for_short_dimension() {
        let t = theoretical_exponent(&query(Part::V, Regime::SmallTime, q(1, 1), q(1, 2), 6, 4)).unwrap();
        assert_eq!(t.estimate, Estimate::SinePentagon);
        assert_eq!(t.exponent, q(4, 3) * q(-1, 2) + q(1, 1));
    }

    #[test]
    fn cosine_large_time_at_c() {
        // Δ_0 for (4, 6) is the segment AC, where 1/q = 1/p' and only -1/m₁ remains.
        let c = theoretical_exponent(&query(Part::U, Regime::LargeTime, q(1, 1), q(0, 1), 4, 6)).unwrap();
        assert_eq!(c.exponent, q(-1, 2));
        assert_eq!(c.location, Location::Boundary);
        let off = theoretical_exponent(&query(Part::U, Regime::LargeTime, q(3, 4), q(1, 3), 4, 6));
        assert!(matches!(off, Err(DecayError::Outside { .. })));
    }

    proptest! {
        #[test]
        fn affine_along_ab(k in 0i64..=64, m2 in 2u32..5, extra in 0usize..6) {
            let m = 2 * m2;
            let n = m as usize + extra;
            let region = build_region(RegionKind::Delta(Q::from_integer(m as i64)), m, n).unwrap();
            let (a, b) = (region.label("A").unwrap(), region.label("B").unwrap());
            let s = q(k, 64);
            let pt = (a.inv_p + s * (b.inv_p - a.inv_p), a.inv_q + s * (b.inv_q - a.inv_q));
            let at = |x: Q, y: Q| theoretical_exponent(&query(Part::V, Regime::LargeTime, x, y, m, n)).unwrap().exponent;
            let ea = at(a.inv_p, a.inv_q);
            let eb = at(b.inv_p, b.inv_q);
            prop_assert_eq!(at(pt.0, pt.1), ea + s * (eb - ea));
        }
    }
}
