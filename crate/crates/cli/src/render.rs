//! Schematic SVG of a Kirby diagram shadow.
//!
//! Ball pairs sit in a row at the top. Each component gets its own lane
//! below; every letter of its word is drawn as a chord from the lane into one
//! disk of the pair and out of the other, with the identification shown
//! dashed. Names, framings and words are written beside the lanes.

use std::fmt::Write as _;

use openbook::{ComponentRole, KirbyDiagram, Sign};

const MARGIN: i64 = 40;
const PAIR_GAP: i64 = 130;
const DISK_R: i64 = 14;
const DISK_Y: i64 = 60;
const LANE_TOP: i64 = 150;
const LANE_GAP: i64 = 56;
const LABEL_W: i64 = 150;
const STEP: i64 = 9;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn pair_x(ball: usize) -> i64 {
    MARGIN + LABEL_W + PAIR_GAP / 2 + PAIR_GAP * (ball as i64 - 1)
}

pub fn render(kd: &KirbyDiagram) -> String {
    let n = kd.component_count() as i64;
    let width = 2 * MARGIN + LABEL_W + PAIR_GAP * (kd.balls().max(1) as i64) + 220;
    let height = LANE_TOP + LANE_GAP * n.max(1) + 40;
    let mut s = String::new();
    writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{MARGIN}" y="24" font-family="monospace" font-size="13">balls {}  components {}  3-handles {}  4-handles {}</text>"#,
        kd.balls(),
        n,
        kd.three_handles(),
        kd.four_handles()
    )
    .unwrap();

    for b in 1..=kd.balls() {
        let x = pair_x(b);
        for (dx, tag) in [(-DISK_R * 2, ""), (DISK_R * 2, "'")] {
            writeln!(
                s,
                r#"<circle cx="{}" cy="{DISK_Y}" r="{DISK_R}" fill="none" stroke="black" stroke-width="1.5"/>"#,
                x + dx
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="11" text-anchor="middle">{b}{tag}</text>"#,
                x + dx,
                DISK_Y + 4
            )
            .unwrap();
        }
    }

    for (i, c) in kd.components().iter().enumerate() {
        let lane = LANE_TOP + LANE_GAP * i as i64;
        let colour = match c.role {
            ComponentRole::Page => "#1f4e9c",
            ComponentRole::Dual => "#a33b20",
        };
        writeln!(
            s,
            r#"<text x="{MARGIN}" y="{}" font-family="monospace" font-size="12" fill="{colour}">{} [{}]</text>"#,
            lane + 4,
            escape(&c.name),
            c.framing
        )
        .unwrap();
        let start = MARGIN + LABEL_W - 20;
        let end = pair_x(kd.balls().max(1)) + PAIR_GAP / 2;
        writeln!(
            s,
            r#"<line x1="{start}" y1="{lane}" x2="{end}" y2="{lane}" stroke="{colour}" stroke-width="1.5"/>"#
        )
        .unwrap();
        // one chord per letter, nudged sideways so repeats stay visible
        let mut seen = vec![0i64; kd.balls() + 1];
        for l in c.word.letters() {
            let x = pair_x(l.generator);
            let nudge = STEP * seen[l.generator];
            seen[l.generator] += 1;
            let (into, out) = match l.sign {
                Sign::Plus => (x - DISK_R * 2, x + DISK_R * 2),
                Sign::Minus => (x + DISK_R * 2, x - DISK_R * 2),
            };
            let top = DISK_Y + DISK_R;
            writeln!(
                s,
                r#"<polyline points="{a},{lane} {a},{top}" fill="none" stroke="{colour}" stroke-width="1.2"/>"#,
                a = into + nudge - DISK_R / 2
            )
            .unwrap();
            writeln!(
                s,
                r#"<polyline points="{b},{top} {b},{lane}" fill="none" stroke="{colour}" stroke-width="1.2"/>"#,
                b = out + nudge - DISK_R / 2
            )
            .unwrap();
            writeln!(
                s,
                r#"<line x1="{}" y1="{top}" x2="{}" y2="{top}" stroke="{colour}" stroke-width="0.8" stroke-dasharray="3,3"/>"#,
                into + nudge - DISK_R / 2,
                out + nudge - DISK_R / 2
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="12" fill="{colour}">{}</text>"#,
            end + 10,
            lane + 4,
            escape(&c.word.to_string())
        )
        .unwrap();
    }

    let n = kd.component_count();
    for i in 0..n {
        for j in i + 1..n {
            let lk = kd.linking_number(i, j);
            if lk == 0 {
                continue;
            }
            let (yi, yj) = (
                LANE_TOP + LANE_GAP * i as i64,
                LANE_TOP + LANE_GAP * j as i64,
            );
            let x = MARGIN + LABEL_W - 30 - 6 * ((i + j) as i64 % 4);
            writeln!(
                s,
                r#"<line x1="{x}" y1="{yi}" x2="{x}" y2="{yj}" stroke="gray" stroke-width="0.8"/>"#
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="10" fill="gray" text-anchor="end">lk {lk}</text>"#,
                x - 3,
                (yi + yj) / 2 + 3
            )
            .unwrap();
        }
    }
    writeln!(s, "</svg>").unwrap();
    s
}
