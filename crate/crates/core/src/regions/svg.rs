//! SVG rendering of index regions over the unit square.

use std::fmt::Write;

use super::{IndexPoint, IndexRegion};
use crate::exact::to_f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
    Dotted,
}

impl Stroke {
    fn attrs(self) -> &'static str {
        match self {
            Stroke::Solid => r##"stroke="#000000" stroke-width="2""##,
            Stroke::Dashed => r##"stroke="#c00000" stroke-width="2" stroke-dasharray="8,5""##,
            Stroke::Dotted => r##"stroke="#c00000" stroke-width="2" stroke-dasharray="2,4""##,
        }
    }
}

const SCALE: f64 = 400.0;
const PAD: f64 = 50.0;

fn px(pt: &IndexPoint) -> (f64, f64) {
    (PAD + SCALE * to_f64(&pt.inv_p), PAD + SCALE * (1.0 - to_f64(&pt.inv_q)))
}

/// Index square with one polygon per layer and labelled vertices.
pub fn render_svg(layers: &[(&IndexRegion, Stroke)]) -> String {
    let size = SCALE + 2.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>"##);
    let (x0, y0) = (PAD, PAD + SCALE);
    let _ = writeln!(
        s,
        r##"<path d="M{x0} {y0} H{} M{x0} {y0} V{PAD}" stroke="#808080" stroke-width="1" fill="none"/>"##,
        PAD + SCALE
    );
    for (tick, text) in [(0.5, "1/2"), (1.0, "1")] {
        let x = PAD + SCALE * tick;
        let y = PAD + SCALE * (1.0 - tick);
        let _ = writeln!(s, r#"<text x="{x}" y="{}" font-size="12" text-anchor="middle">{text}</text>"#, y0 + 18.0);
        let _ = writeln!(s, r#"<text x="{}" y="{y}" font-size="12" text-anchor="end">{text}</text>"#, x0 - 6.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="14">1/p</text>"#, PAD + SCALE + 8.0, y0 + 4.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="14">1/q</text>"#, x0 - 10.0, PAD - 12.0);
    for (region, stroke) in layers {
        let pts: Vec<String> = region
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = px(v);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon data-kind="{}" points="{}" fill="none" {}/>"#,
            region.kind.tag(),
            pts.join(" "),
            stroke.attrs()
        );
        for (v, label) in region.vertices.iter().zip(&region.labels) {
            let (x, y) = px(v);
            let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#000000"/>"##);
            let _ = writeln!(
                s,
                r#"<text x="{:.3}" y="{:.3}" font-size="12">{label}</text>"#,
                x + 5.0,
                y - 5.0
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::regions::{build_region, RegionKind};

    #[test]
    fn layers_render_with_their_strokes() {
        let d = build_region(RegionKind::Delta(q(4, 1)), 4, 6).unwrap();
        let t = build_region(RegionKind::Aef, 4, 6).unwrap();
        let h = build_region(RegionKind::Hexagon, 4, 6).unwrap();
        let svg = render_svg(&[(&d, Stroke::Solid), (&t, Stroke::Dashed), (&h, Stroke::Dotted)]);
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert!(svg.contains("stroke-dasharray=\"8,5\""));
        assert!(svg.contains("stroke-dasharray=\"2,4\""));
        // B = (1, 1/3)
        assert!(svg.contains("450.000,316.667"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
