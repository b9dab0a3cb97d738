//! Parameter sets that regenerate the data behind the eight published
//! figures (negativity: fig1 … fig5, CHSH value: fig6 … fig8).
//!
//! The captions fix some of (g, Ω, γ, n) and never the per-curve θ. Each
//! curve lists which of its values come from the caption and which were
//! chosen here; the latter are echoed as `reconstructed` in CSV metadata.
//! The θ set covers the three initial-state cases the figures discuss:
//! separable (θ = 0, π/2), partially entangled with the same |sin 2θ| but
//! different phase (π/8, 3π/8, 5π/8, 7π/8) and maximally entangled
//! (π/4, 3π/4).

use std::f64::consts::PI;

use tavis_core::ModelParams;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Negativity,
    Bell,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Self::Negativity => "negativity",
            Self::Bell => "bell",
        }
    }
}

/// One curve of one panel.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetCurve {
    pub figure: &'static str,
    pub panel: char,
    pub style: &'static str,
    pub measure: Measure,
    pub config: RunConfig,
    /// Parameters fixed by the caption.
    pub stated: Vec<&'static str>,
    /// Parameters chosen here.
    pub reconstructed: Vec<&'static str>,
    /// θ as written, e.g. `3pi/4`.
    pub theta_label: &'static str,
}

impl PresetCurve {
    pub fn metadata(&self) -> Vec<(String, String)> {
        let list = |v: &[&str]| if v.is_empty() { "none".to_string() } else { v.join(",") };
        vec![
            ("preset".into(), self.figure.to_string()),
            ("panel".into(), self.panel.to_string()),
            ("style".into(), self.style.to_string()),
            ("measure".into(), self.measure.name().to_string()),
            ("theta_label".into(), self.theta_label.to_string()),
            ("stated".into(), list(&self.stated)),
            ("reconstructed".into(), list(&self.reconstructed)),
        ]
    }
}

pub const FIGURES: [&str; 8] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

const SOLID: &str = "solid";
const DASHED: &str = "dashed";
const DASH_DOT: &str = "dash-dot";

fn theta_value(label: &str) -> f64 {
    match label {
        "0" => 0.0,
        "pi/8" => PI / 8.0,
        "pi/4" => PI / 4.0,
        "3pi/8" => 3.0 * PI / 8.0,
        "pi/2" => PI / 2.0,
        "5pi/8" => 5.0 * PI / 8.0,
        "3pi/4" => 3.0 * PI / 4.0,
        "7pi/8" => 7.0 * PI / 8.0,
        other => unreachable!("no preset angle {other}"),
    }
}

/// Curve builder. `stated` names the parameters the caption fixes; every
/// other model parameter, θ included, is recorded as reconstructed.
#[allow(clippy::too_many_arguments)]
fn curve(
    figure: &'static str,
    panel: char,
    style: &'static str,
    measure: Measure,
    big_omega: f64,
    gamma: f64,
    n: u32,
    theta: &'static str,
    stated: &[&'static str],
) -> PresetCurve {
    let params =
        ModelParams::new(1.0, 0.0, big_omega, gamma, n, theta_value(theta)).expect("preset parameters are valid");
    let reconstructed = ["big_omega", "gamma", "n", "theta"]
        .into_iter()
        .filter(|name| !stated.contains(name))
        .collect();
    let mut stated_all = vec!["g"];
    stated_all.extend_from_slice(stated);
    PresetCurve {
        figure,
        panel,
        style,
        measure,
        config: RunConfig::new(params),
        stated: stated_all,
        reconstructed,
        theta_label: theta,
    }
}

/// Panels a … d with a solid and a dashed curve each; the four (solid,
/// dashed) θ pairs walk through the separable, partial and maximal cases.
fn four_panels(
    figure: &'static str,
    measure: Measure,
    omega_gamma_n: [(f64, f64, u32); 4],
    stated: &[&'static str],
) -> Vec<PresetCurve> {
    let thetas = [("0", "pi/8"), ("pi/4", "3pi/8"), ("pi/2", "5pi/8"), ("3pi/4", "7pi/8")];
    let mut out = Vec::new();
    for (i, ((solid, dashed), (w, gamma, n))) in thetas.into_iter().zip(omega_gamma_n).enumerate() {
        let panel = (b'a' + i as u8) as char;
        out.push(curve(figure, panel, SOLID, measure, w, gamma, n, solid, stated));
        out.push(curve(figure, panel, DASHED, measure, w, gamma, n, dashed, stated));
    }
    out
}

/// Every curve of figure `id` (`fig1` … `fig8`).
pub fn figure_preset(id: &str) -> Result<Vec<PresetCurve>> {
    use Measure::{Bell, Negativity};
    let curves = match id {
        // Ω = 1, γ = 0, n = 0 from the caption.
        "fig1" => four_panels("fig1", Negativity, [(1.0, 0.0, 0); 4], &["big_omega", "gamma", "n"]),
        // no and weak dipole coupling: Ω = 0 in (a, b), Ω = 0.5 in (c, d).
        "fig2" => four_panels(
            "fig2",
            Negativity,
            [(0.0, 0.0, 0), (0.0, 0.0, 0), (0.5, 0.0, 0), (0.5, 0.0, 0)],
            &["gamma", "n"],
        ),
        // strong dipole coupling: Ω = 5 in (a, b), Ω = 10 in (c, d).
        "fig3" => four_panels(
            "fig3",
            Negativity,
            [(5.0, 0.0, 0), (5.0, 0.0, 0), (10.0, 0.0, 0), (10.0, 0.0, 0)],
            &["gamma", "n"],
        ),
        // (a, b): Ω = 1 at γ = 0.01 and 0.1, plus the frozen dash-dot curve;
        // (c, d): γ = 0.1 at Ω = 0.5 and 5.
        "fig4" => {
            let stated = &["n"];
            let mut v = Vec::new();
            for (panel, gamma) in [('a', 0.01), ('b', 0.1)] {
                v.push(curve("fig4", panel, SOLID, Negativity, 1.0, gamma, 0, "0", stated));
                v.push(curve("fig4", panel, DASHED, Negativity, 1.0, gamma, 0, "pi/8", stated));
                v.push(curve(
                    "fig4", panel, DASH_DOT, Negativity, 1.0, gamma, 0, "3pi/4", stated,
                ));
            }
            for (panel, w) in [('c', 0.5), ('d', 5.0)] {
                v.push(curve("fig4", panel, SOLID, Negativity, w, 0.1, 0, "0", stated));
                v.push(curve("fig4", panel, DASHED, Negativity, w, 0.1, 0, "pi/8", stated));
            }
            v
        }
        // n = 1; γ = 0 in (a, b), γ = 0.1 in (c, d); Ω ∈ {0, 1} as solid/dashed.
        "fig5" => {
            let stated = &["gamma", "n"];
            let mut v = Vec::new();
            for (panel, gamma, theta) in [('a', 0.0, "0"), ('b', 0.0, "pi/8"), ('c', 0.1, "0"), ('d', 0.1, "pi/8")] {
                v.push(curve("fig5", panel, SOLID, Negativity, 0.0, gamma, 1, theta, stated));
                v.push(curve("fig5", panel, DASHED, Negativity, 1.0, gamma, 1, theta, stated));
            }
            v
        }
        // γ = 0, n = 0; Ω = 1 in (a, b), Ω = 0.5 in (c, d).
        "fig6" => four_panels(
            "fig6",
            Bell,
            [(1.0, 0.0, 0), (1.0, 0.0, 0), (0.5, 0.0, 0), (0.5, 0.0, 0)],
            &["gamma", "n"],
        ),
        // γ = 0.1, n = 0; Ω = 1 in (a, b), Ω = 0.5 in (c), Ω = 5 in (d).
        "fig7" => four_panels(
            "fig7",
            Bell,
            [(1.0, 0.1, 0), (1.0, 0.1, 0), (0.5, 0.1, 0), (5.0, 0.1, 0)],
            &["gamma", "n"],
        ),
        // Ω = 5, n = 0; γ = 0 in (a, b), γ = 0.1 in (c, d).
        "fig8" => four_panels(
            "fig8",
            Bell,
            [(5.0, 0.0, 0), (5.0, 0.0, 0), (5.0, 0.1, 0), (5.0, 0.1, 0)],
            &["big_omega", "n"],
        ),
        other => return Err(CliError::UnknownFigure(other.to_string())),
    };
    Ok(curves)
}
