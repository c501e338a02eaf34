//! End-to-end run: embed `X`, thicken it to `P(X)`, verify, and close up.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Signed;
use serde::Serialize;

use crate::complex::{Complex, Vertex};
use crate::error::{Error, Result};
use crate::geometry::{
    choose_spine_barycenters, epsilon_neighborhood_embedding, sample_general_position_map, verify_injective,
    SpineEmbedding,
};
use crate::homology::{homology_groups, HomologyResult};
use crate::io::{complex_to_json, format_rational, map_to_json, to_json, to_off, viewer_layout};
use crate::reflection::{close_up, verify_closed_locally, CloseUpReport, LocalReport};
use crate::thicken::{
    build_spine_thickening, cone_boundary_neighborhoods, extract_sheet_data, require_thickenable, verify_thickening,
    Provenance, ThickeningOutput, ThickeningReport,
};
use crate::Rational;

pub const DEFAULT_BUDGET: u128 = 2_000_000;
pub const DEFAULT_DENOM_BOUND: u32 = 16;

#[derive(Clone, Debug, Serialize)]
pub struct PipelineConfig {
    pub seed: u64,
    pub denom_bound: u32,
    /// Largest closed-up complex (in simplices) that is materialized.
    pub budget: u128,
    pub local_only: bool,
    pub export_off: bool,
    /// Stop after verifying `P(X)`.
    pub thicken_only: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            denom_bound: DEFAULT_DENOM_BOUND,
            budget: DEFAULT_BUDGET,
            local_only: false,
            export_off: false,
            thicken_only: false,
        }
    }
}

/// An error tagged with the stage that raised it.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl StageError {
    pub fn new(stage: &'static str, error: Error) -> Self {
        StageError { stage, error }
    }

    pub fn to_json(&self) -> String {
        to_json(&serde_json::json!({ "stage": self.stage, "error": self.error.to_string() }))
    }
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError> {
        self.map_err(|e| StageError::new(stage, e))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbedReport {
    pub ambient_dim: usize,
    pub singular_records: usize,
    pub singular_max_dim: isize,
    pub pairs_checked: usize,
    pub barycenter_attempts_max: usize,
    pub spine_injective: bool,
    pub neighborhood_injective: bool,
    pub delta: Option<String>,
    pub epsilon: Option<String>,
    /// Largest bit length of a numerator or denominator among the
    /// neighbourhood coordinates.
    pub max_coordinate_bits: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CloseStage {
    Global { report: CloseUpReport, homology: HomologyResult },
    Local { report: LocalReport },
}

impl CloseStage {
    pub fn passed(&self) -> bool {
        match self {
            CloseStage::Global { report, .. } => report.passed(),
            CloseStage::Local { report } => report.all_closed_manifolds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    pub input_f_vector: Vec<usize>,
    pub embed: EmbedReport,
    pub thicken: ThickeningReport,
    pub close: Option<CloseStage>,
    pub warnings: Vec<String>,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub report: PipelineReport,
    /// File name → contents, in a fixed order.
    pub artifacts: BTreeMap<String, String>,
}

impl PipelineOutput {
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, text) in &self.artifacts {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }
}

fn bits(q: &Rational) -> u64 {
    q.numer().abs().bits().max(q.denom().bits())
}

/// Samples the general-position map and the spine neighbourhood of `x`
/// in `R^3`.
pub fn embed_spine(x: &Complex, config: &PipelineConfig) -> std::result::Result<SpineEmbedding<Rational>, StageError> {
    let m = sample_general_position_map::<Rational>(x, 3, config.seed, config.denom_bound).stage("embed")?;
    let se = choose_spine_barycenters(&m, config.seed).stage("spine-embed")?;
    epsilon_neighborhood_embedding(se).stage("spine-embed")
}

pub fn embed_report(se: &SpineEmbedding<Rational>) -> EmbedReport {
    let nbhd = se.nbhd.as_ref();
    EmbedReport {
        ambient_dim: se.base.n,
        singular_records: se.singular.records.len(),
        singular_max_dim: se.singular.max_dim(),
        pairs_checked: se.singular.pairs_checked,
        barycenter_attempts_max: se.attempts.values().copied().max().unwrap_or(0),
        spine_injective: verify_injective(&se.spine_map()).is_ok(),
        neighborhood_injective: nbhd.is_some_and(|n| verify_injective(&n.map).is_ok()),
        delta: se.delta.as_ref().map(format_rational),
        epsilon: se.epsilon.as_ref().map(format_rational),
        max_coordinate_bits: nbhd
            .map_or(0, |n| n.map.points.values().flat_map(|p| p.0.iter().map(bits)).max().unwrap_or(0)),
    }
}

pub fn provenance_json(t: &ThickeningOutput) -> String {
    #[derive(Serialize)]
    struct Entry<'a> {
        #[serde(flatten)]
        part: Provenance,
        #[serde(skip_serializing_if = "Option::is_none")]
        role: Option<&'a str>,
    }
    let cone_of: BTreeMap<&Vertex, &Vertex> = t.cone_vertices.iter().map(|(v, w)| (w, v)).collect();
    let vertices: BTreeMap<String, Entry> =
        t.p.vertices()
            .into_iter()
            .map(|u| {
                let part = match cone_of.get(&u) {
                    Some(v) => Provenance::Cone((*v).clone()),
                    None => Provenance::M,
                };
                let role = t.spine.roles.get(&u).map(String::as_str);
                (u.to_string(), Entry { part, role })
            })
            .collect();
    let cones: BTreeMap<String, String> = t.cone_vertices.iter().map(|(v, w)| (v.to_string(), w.to_string())).collect();
    to_json(&serde_json::json!({ "cone_vertices": cones, "vertices": vertices }))
}

/// Closes `p` up if the result fits the budget, and otherwise (or when
/// asked to) verifies the closed-up complex through its links.
pub fn close_stage(
    p: &Complex,
    cones: &std::collections::BTreeSet<Vertex>,
    config: &PipelineConfig,
    warnings: &mut Vec<String>,
) -> std::result::Result<(CloseStage, Option<Complex>), StageError> {
    if !config.local_only {
        match close_up(p, config.budget) {
            Ok(c) => {
                let homology = homology_groups(&c.chamber.q, None).stage("close")?;
                return Ok((CloseStage::Global { report: c.report, homology }, Some(c.chamber.q)));
            }
            Err(Error::BudgetExceeded { needed, budget }) => {
                let needed = if needed == u128::MAX { "at least 2^128".to_string() } else { needed.to_string() };
                warnings.push(format!(
                    "closed-up complex needs {needed} simplices, over the budget of {budget}; verified locally instead"
                ));
            }
            Err(e) => return Err(StageError::new("close", e)),
        }
    }
    let report = verify_closed_locally(p, cones).stage("local-verify")?;
    Ok((CloseStage::Local { report }, None))
}

pub fn run_pipeline(config: &PipelineConfig, x: &Complex) -> std::result::Result<PipelineOutput, StageError> {
    if x.dim() < 2 {
        return Err(StageError::new("input", Error::Dimension { what: "d >= 2 required", found: x.dim() }));
    }
    require_thickenable(x).stage("input")?;
    let se = embed_spine(x, config)?;
    let embed = embed_report(&se);

    let sheets = extract_sheet_data(&se).stage("thicken")?;
    let spine = build_spine_thickening(&sheets, &se).stage("thicken")?;
    let t = cone_boundary_neighborhoods(spine).stage("thicken")?;
    let thicken = verify_thickening(&t, x).stage("verify")?;

    let mut warnings = Vec::new();
    let (close, q) = if config.thicken_only {
        (None, None)
    } else {
        let (c, q) = close_stage(&t.p, &t.cone_vertex_set(), config, &mut warnings)?;
        (Some(c), q)
    };

    let mut failures: Vec<String> = thicken.failures().into_iter().map(String::from).collect();
    if !embed.spine_injective {
        failures.push("spine embedding is not injective".into());
    }
    if !embed.neighborhood_injective {
        failures.push("neighbourhood embedding is not injective".into());
    }
    if close.as_ref().is_some_and(|c| !c.passed()) {
        failures.push("closed-up complex has a non-manifold link".into());
    }

    let mut artifacts = BTreeMap::new();
    artifacts.insert("x.json".to_string(), complex_to_json(x));
    artifacts.insert("embedding.json".to_string(), map_to_json(&se.base));
    artifacts.insert("p.json".to_string(), complex_to_json(&t.p));
    artifacts.insert("x_copy.json".to_string(), complex_to_json(&t.x_copy));
    artifacts.insert("provenance.json".to_string(), provenance_json(&t));
    if let Some(q) = &q {
        artifacts.insert("q.json".to_string(), complex_to_json(q));
    }
    if config.export_off {
        let pos = viewer_layout(&t, &se);
        artifacts.insert("boundary.off".to_string(), to_off(&t.spine.boundary_surface, &pos));
        for (v, curve) in &t.spine.lv {
            artifacts.insert(format!("curve-{v}.off"), to_off(curve, &pos));
        }
    }
    let report = PipelineReport {
        config: config.clone(),
        input_f_vector: x.f_vector(),
        embed,
        thicken,
        close,
        warnings,
        passed: failures.is_empty(),
        failures,
    };
    artifacts.insert("report.json".to_string(), to_json(&report));
    Ok(PipelineOutput { report, artifacts })
}
