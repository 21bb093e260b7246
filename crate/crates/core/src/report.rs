//! Text, JSON and LaTeX renderings of a [`WhResult`].

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assembly::{DegreeResult, DegreeWindow, WhResult};
use crate::group::GroupProfile;
use crate::kexpr::Expr;
use crate::ring::RingKind;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            other => Err(format!("unknown format `{other}` (expected text, json or latex)")),
        }
    }
}

/// JSON report document. Deserializes back to identical `Expr` values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub schema_version: u32,
    pub input: String,
    pub ring: RingKind,
    pub window: DegreeWindow,
    pub group_profile: GroupProfile,
    pub degrees: Vec<JsonDegree>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonDegree {
    pub degree: i32,
    pub finite_rel: Expr,
    pub vc_rel: Expr,
    pub wh: Expr,
    pub wh_text: String,
    pub provenance: Vec<String>,
    pub caveats: Vec<String>,
}

impl JsonReport {
    pub fn new(r: &WhResult, warnings: &[String]) -> Self {
        JsonReport {
            schema_version: SCHEMA_VERSION,
            input: r.input.clone(),
            ring: r.ring,
            window: r.window,
            group_profile: r.group_profile.clone(),
            degrees: r
                .degrees
                .iter()
                .map(|d| JsonDegree {
                    degree: d.degree,
                    finite_rel: d.finite_rel.clone(),
                    vc_rel: d.vc_rel.clone(),
                    wh: d.wh.clone(),
                    wh_text: d.wh.to_string(),
                    provenance: d.provenance.clone(),
                    caveats: d.caveats.clone(),
                })
                .collect(),
            warnings: warnings.to_vec(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

pub fn render(r: &WhResult, format: Format, warnings: &[String]) -> String {
    match format {
        Format::Text => render_text(r, warnings),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&JsonReport::new(r, warnings))
                .expect("reports always serialize");
            s.push('\n');
            s
        }
        Format::Latex => render_latex(r),
    }
}

fn les_nodes(e: &Expr) -> Vec<String> {
    let mut out = Vec::new();
    e.visit(&mut |x| {
        if let Expr::Les(node) = x {
            out.push(node.display_sequence());
        }
    });
    out
}

fn text_degree(out: &mut String, d: &DegreeResult) {
    let _ = writeln!(out, "Wh_{} = {}", d.degree, d.wh);
    let _ = writeln!(out, "  finite part: {}", d.finite_rel);
    let _ = writeln!(out, "  virtually cyclic part: {}", d.vc_rel);
    for seq in les_nodes(&d.wh) {
        for line in seq.lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    if !d.provenance.is_empty() {
        out.push_str("  provenance:\n");
        for p in &d.provenance {
            let _ = writeln!(out, "    - {p}");
        }
    }
    if !d.caveats.is_empty() {
        out.push_str("  caveats:\n");
        for c in &d.caveats {
            let _ = writeln!(out, "    - {c}");
        }
    }
}

fn render_text(r: &WhResult, warnings: &[String]) -> String {
    let mut out = String::new();
    for w in warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out, "input: {}", r.input);
    let _ = writeln!(out, "ring: {}", r.ring);
    let _ = writeln!(out, "degrees: {}", r.window);
    let p = &r.group_profile;
    let _ = writeln!(
        out,
        "group: torsion-free={}, finite factors=[{}]",
        p.torsion_free,
        p.spherical_factor_groups
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    for d in &r.degrees {
        out.push('\n');
        text_degree(&mut out, d);
    }
    out
}

fn render_latex(r: &WhResult) -> String {
    let mut out = String::from("\\begin{align*}\n");
    let rows: Vec<String> = r
        .degrees
        .iter()
        .map(|d| format!("  \\mathrm{{Wh}}_{{{}}} &\\cong {}", d.degree, d.wh.latex()))
        .collect();
    out.push_str(&rows.join(" \\\\\n"));
    out.push_str("\n\\end{align*}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble_wh;
    use crate::manifold::parse_manifold;
    use crate::ring::RingProfile;

    #[test]
    fn text_line_and_json_round_trip() {
        let m = parse_manifold("S2xE(Z)").unwrap();
        let r = assemble_wh(&m, &RingProfile::generic(), DegreeWindow::single(1)).unwrap();
        let text = render(&r, Format::Text, &[]);
        assert!(text.contains("Wh_1 = 2·NK_1(R)\n"), "{text}");
        let json = render(&r, Format::Json, &[]);
        let back: JsonReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, JsonReport::new(&r, &[]));
        assert_eq!(back.degrees[0].wh, r.degrees[0].wh);
        assert!(render(&r, Format::Latex, &[]).contains("\\mathrm{Wh}_{1} &\\cong 2\\,NK_{1}(R)"));
    }
}
