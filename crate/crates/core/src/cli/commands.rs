use std::path::Path;

use serde::Serialize;

use super::catalog::find_entry;
use super::{CliError, Result, RunConfig};
use crate::invariants::{
    bounds, finite_nondegeneracy, hoermander_numbers, jet_nondegeneracy, levi_form, levi_nondegenerate,
    nondeg_in_dimension_1, Dim1Report, MapJet, Stabilization,
};
use crate::manifold::model::ModelSummary;
use crate::manifold::{normal_coordinates, parse_model, ManifoldModel};
use crate::reflection::jet::{jet_coordinates, JetCoefficient};
use crate::reflection::param::SetupSummary;
use crate::reflection::{
    box_grid, check_cr_jet, parametrize_jet, reconstruct_map, CompleteSystem, CrCheck, JetFile, Sample, Setup,
    SystemSummary,
};
use crate::segre::{build_v, delta_and_eta0, reflection_identity_check, segre_chain};
use crate::series::{generic_rank, rank, Coeff, GaussRational, Matrix};

/// Resolve a model argument: a file path, or else a catalog name.
pub fn load_model(spec: &str, kappa: Option<u32>) -> Result<ManifoldModel> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("cannot read {spec}: {e}")))?;
        return parse_model(&text, kappa.unwrap_or(12)).map_err(CliError::from_model);
    }
    match find_entry(spec) {
        Some(e) => e.model(kappa),
        None => Err(CliError::Usage(format!("`{spec}` is neither a readable file nor a catalog model"))),
    }
}

fn models(cfg: &RunConfig) -> Result<(ManifoldModel, ManifoldModel)> {
    let source = cfg.models.first().ok_or_else(|| CliError::Usage("--model is required".into()))?;
    let s = load_model(source, cfg.kappa)?;
    let t = match cfg.models.get(1) {
        Some(t) => load_model(t, cfg.kappa)?,
        None => s.clone(),
    };
    Ok((s, t))
}

fn rational(s: &str) -> Result<GaussRational> {
    GaussRational::from_strings(s, "0").map_err(|e| CliError::Usage(format!("`{s}` is not a rational number: {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct LeviSummary {
    /// Rank of each component of the form.
    pub ranks: Vec<usize>,
    pub nondegenerate: bool,
    pub hermitian: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub model: ModelSummary,
    pub levi: LeviSummary,
    pub finite_type: bool,
    pub mu: Vec<u32>,
    pub nu: Option<u32>,
    pub bracket_dims: Vec<usize>,
    pub l: Option<u32>,
    pub l_verdict: String,
    pub span_dims: Vec<usize>,
    pub dim1: Option<Dim1Report>,
    pub r: Option<u64>,
    pub k: Option<u64>,
    pub m_bound: Option<u64>,
}

pub fn analyze(model: &ManifoldModel, l_max: u32) -> Result<AnalyzeReport> {
    let form = levi_form(model).map_err(|e| CliError::from_invariant("levi", e))?;
    let ranks = (0..form.d)
        .map(|k| {
            let m: Vec<Vec<GaussRational>> = form.matrix.iter().map(|row| row.iter().map(|v| v[k].clone()).collect()).collect();
            rank(&m)
        })
        .collect();
    let levi = LeviSummary { ranks, nondegenerate: levi_nondegenerate(&form), hermitian: form.is_hermitian() };
    let h = hoermander_numbers(model, model.kappa.saturating_sub(1).max(1)).map_err(|e| CliError::from_invariant("hoermander", e))?;
    let nd = finite_nondegeneracy(model, l_max).map_err(|e| CliError::from_invariant("nondegeneracy", e))?;
    let l_verdict = match (nd.l, nd.stabilization) {
        (Some(l), _) => l.to_string(),
        (None, Some(Stabilization::Absolute)) => format!("none ≤ {l_max} (stabilized: absolute)"),
        (None, _) => format!("none ≤ {l_max} (stabilized: budget)"),
    };
    let dim1 = if model.n == 2 && model.d == 1 {
        Some(nondeg_in_dimension_1(model, l_max).map_err(|e| CliError::from_invariant("dimension-1", e))?)
    } else {
        None
    };
    let b = match (h.finite_type, nd.l) {
        (true, Some(l)) => {
            let mu: Vec<u64> = h.mu.iter().map(|&x| x as u64).collect();
            Some(bounds(model.d as u64, l as u64, &mu))
        }
        _ => None,
    };
    let m_bound = h.finite_type.then(|| 2 * (h.mu.iter().map(|&x| x as u64).sum::<u64>() - model.d as u64));
    Ok(AnalyzeReport {
        model: model.summary(),
        levi,
        finite_type: h.finite_type,
        mu: h.mu,
        nu: h.nu,
        bracket_dims: h.dims,
        l: nd.l,
        l_verdict,
        span_dims: nd.span_dims,
        dim1,
        r: b.map(|b| b.r),
        k: b.map(|b| b.k),
        m_bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub length: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSummary {
    pub m: u32,
    pub m_bound: Option<u32>,
    pub attained: bool,
    pub eta0: Vec<i64>,
    pub directions_tried: usize,
    /// Lowest homogeneous part of `δ`.
    pub delta_leading: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SegreReport {
    pub model: ModelSummary,
    pub s: usize,
    pub n_ambient: usize,
    /// Components of `v¹, …, v^{2s}`.
    pub chain: Vec<Vec<String>>,
    pub rank_table: Vec<RankRow>,
    pub palindrome_ok: bool,
    pub palindrome_detail: Option<String>,
    pub delta: Option<DeltaSummary>,
    pub verdict: String,
}

/// Chain, rank table and palindrome identity, without `δ`.
pub fn segre_chain_report(model: &ManifoldModel, s: Option<usize>, seed: u64) -> Result<SegreReport> {
    let s = s.unwrap_or(model.d + 1);
    if s == 0 {
        return Err(CliError::Usage("--s must be ≥ 1".into()));
    }
    let nf = normal_coordinates(model).map_err(CliError::from_model)?;
    let chain = segre_chain(&nf, 2 * s).map_err(|e| CliError::from_segre("segre chain", e))?;
    let n = model.n;
    let rank_table = (1..=2 * s)
        .map(|j| {
            let jac: Matrix<GaussRational> = chain.v[j]
                .iter()
                .map(|c| (0..j * n).map(|v| c.differentiate(v)).collect::<std::result::Result<Vec<_>, _>>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| CliError::math("segre rank", e))?;
            Ok(RankRow { length: j, rank: generic_rank(&jac, seed) })
        })
        .collect::<Result<Vec<_>>>()?;
    let pal = reflection_identity_check(&chain);
    let top = rank_table.last().map_or(0, |r| r.rank);
    let verdict = if top < model.big_n() { "infinite type suspected".to_string() } else { "full rank".to_string() };
    Ok(SegreReport {
        model: model.summary(),
        s,
        n_ambient: model.big_n(),
        chain: chain.v[1..].iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect(),
        rank_table,
        palindrome_ok: pal.is_ok(),
        palindrome_detail: pal.err(),
        delta: None,
        verdict,
    })
}

/// Full Segre report: adds `δ`, `η₀`, `m` and the comparison of `m` with
/// `2(Σμ − d)`.
pub fn segre(model: &ManifoldModel, s: Option<usize>, seed: u64) -> Result<SegreReport> {
    let mut report = segre_chain_report(model, s, seed)?;
    if report.verdict != "full rank" {
        return Ok(report);
    }
    let h = hoermander_numbers(model, model.kappa.saturating_sub(1).max(1)).map_err(|e| CliError::from_invariant("hoermander", e))?;
    let m_bound = h.finite_type.then(|| 2 * (h.mu.iter().sum::<u32>() - model.d as u32));
    let nf = normal_coordinates(model).map_err(CliError::from_model)?;
    let chain = segre_chain(&nf, 2 * report.s).map_err(|e| CliError::from_segre("segre chain", e))?;
    let v = build_v(&chain, seed).map_err(|e| CliError::from_segre("V", e))?;
    let d = delta_and_eta0(&v, m_bound).map_err(|e| CliError::from_segre("delta", e))?;
    let attained = d.matches_prediction();
    report.verdict = match m_bound {
        Some(b) if d.m <= b => "PASS".into(),
        Some(_) => "FAIL".into(),
        None => "no bound (type not reached)".into(),
    };
    report.delta = Some(DeltaSummary {
        m: d.m,
        m_bound,
        attained,
        eta0: d.eta0.clone(),
        directions_tried: d.directions_tried,
        delta_leading: d.delta.truncate(d.m).to_string(),
    });
    Ok(report)
}

fn read_jet(path: &str) -> Result<JetFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path} is not a jet file: {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct ParametrizeArtifact {
    pub source_model: String,
    pub target_model: String,
    pub kappa: u32,
    pub seed: u64,
    pub l: u32,
    pub jet_check: CrCheck,
    pub setup: SetupSummary,
    pub guaranteed_order: u32,
    /// `Ψᵏ` at the jet through `guaranteed_order`.
    pub psi: Vec<JetCoefficient>,
    pub complete_system: Option<SystemSummary>,
    pub validity_radius: Option<f64>,
    pub complete_system_note: Option<String>,
}

/// `l` for the jet: its degeneracy as a map, within the contact order.
fn jet_l(source: &ManifoldModel, target: &ManifoldModel, jet: &MapJet, check: &CrCheck, l_max: u32) -> Result<u32> {
    let budget = l_max.min(check.sends_order).min(source.kappa.saturating_sub(1));
    let nd = jet_nondegeneracy(source, target, jet, budget).map_err(|e| CliError::from_invariant("jet nondegeneracy", e))?;
    nd.l.ok_or_else(|| CliError::math("jet nondegeneracy", format!("the jet is not finitely nondegenerate within l ≤ {budget}")))
}

fn checked_jet(source: &ManifoldModel, target: &ManifoldModel, file: &JetFile) -> Result<(MapJet, CrCheck)> {
    let jet = file.to_jet(source, target.big_n()).map_err(|e| CliError::from_reflection("jet file", e))?;
    let check = check_cr_jet(source, target, &jet, file.order.max(1)).map_err(|e| CliError::from_reflection("check_cr_jet", e))?;
    if !check.is_cr {
        return Err(CliError::math("check_cr_jet", "the jet is not holomorphic along the CR fields"));
    }
    Ok((jet, check))
}

/// `kappa_trunc ≥ m + r + 2`, checked before the pipeline runs.
fn check_kappa(model: &ManifoldModel, l: u32) -> Result<()> {
    let h = hoermander_numbers(model, model.kappa.saturating_sub(1).max(1)).map_err(|e| CliError::from_invariant("hoermander", e))?;
    if !h.finite_type {
        return Err(CliError::Budget(format!("finite type not reached within bracket length {}", model.kappa - 1)));
    }
    let mu: Vec<u64> = h.mu.iter().map(|&x| x as u64).collect();
    let b = bounds(model.d as u64, l as u64, &mu);
    let need = b.m_bound + b.r + 2;
    if (model.kappa as u64) < need {
        return Err(CliError::Budget(format!("kappa_trunc {} < m + r + 2 = {need}", model.kappa)));
    }
    Ok(())
}

pub fn parametrize(cfg: &RunConfig) -> Result<ParametrizeArtifact> {
    let (source, target) = models(cfg)?;
    let path = cfg.jet.as_deref().ok_or_else(|| CliError::Usage("--jet is required".into()))?;
    let file = read_jet(path)?;
    let (jet, check) = checked_jet(&source, &target, &file)?;
    let l = jet_l(&source, &target, &jet, &check, cfg.l_max)?;
    check_kappa(&source, l)?;
    let setup = Setup::new(&source, &target, l, cfg.k, cfg.seed).map_err(|e| CliError::from_reflection("setup", e))?;
    if file.order < setup.r {
        return Err(CliError::Usage(format!("the jet has order {} but r = {}", file.order, setup.r)));
    }
    let p = parametrize_jet(&setup, &jet).map_err(|e| CliError::from_reflection("parametrize", e))?;
    let psi = MapJet { f: p.psi.iter().map(|s| s.truncate(p.guaranteed_order)).collect() };
    let psi = JetFile::from_jet("", "", &psi, source.big_n(), p.guaranteed_order).coefficients;
    let (complete_system, validity_radius, complete_system_note) =
        match CompleteSystem::new(&source, &target, l, setup.k, cfg.seed) {
            Ok(sys) => (Some(sys.summary.clone()), Some(sys.radius), None),
            Err(e) => (None, None, Some(e.to_string())),
        };
    Ok(ParametrizeArtifact {
        source_model: cfg.models[0].clone(),
        target_model: cfg.models.get(1).unwrap_or(&cfg.models[0]).clone(),
        kappa: source.kappa,
        seed: cfg.seed,
        l,
        jet_check: check,
        setup: setup.summary(),
        guaranteed_order: p.guaranteed_order,
        psi,
        complete_system,
        validity_radius,
        complete_system_note,
    })
}

/// Settings recovered from a parametrize artifact.
fn system_settings(path: &str) -> Result<(Vec<String>, u32, u32, u32, u64)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let get = |k: &str| v.get(k).ok_or_else(|| CliError::Usage(format!("{path} lacks `{k}`")));
    let num = |k: &str| get(k)?.as_u64().ok_or_else(|| CliError::Usage(format!("{path}: `{k}` is not a number")));
    let text_of = |k: &str| get(k)?.as_str().map(String::from).ok_or_else(|| CliError::Usage(format!("{path}: `{k}` is not a string")));
    let sys = get("complete_system")?;
    let k = sys
        .get("k")
        .and_then(|k| k.as_u64())
        .ok_or_else(|| CliError::Usage(format!("{path} carries no complete system")))?;
    Ok((vec![text_of("source_model")?, text_of("target_model")?], num("kappa")? as u32, num("l")? as u32, k as u32, num("seed")?))
}

pub fn reconstruct(cfg: &RunConfig) -> Result<Vec<Sample>> {
    let mut cfg = cfg.clone();
    let mut fixed_l = None;
    if let Some(path) = &cfg.system {
        let (models, kappa, l, k, seed) = system_settings(path)?;
        cfg.models = models;
        cfg.kappa = Some(kappa);
        cfg.k = Some(k);
        cfg.seed = seed;
        fixed_l = Some(l);
    }
    let (source, target) = models(&cfg)?;
    let path = cfg.jet.as_deref().ok_or_else(|| CliError::Usage("--jet is required".into()))?;
    let file = read_jet(path)?;
    let (jet, check) = checked_jet(&source, &target, &file)?;
    let l = match fixed_l {
        Some(l) => l,
        None => jet_l(&source, &target, &jet, &check, cfg.l_max)?,
    };
    check_kappa(&source, l)?;
    let k = match cfg.k {
        Some(k) => k,
        None => Setup::new(&source, &target, l, None, cfg.seed).map_err(|e| CliError::from_reflection("setup", e))?.k,
    };
    let sys = CompleteSystem::new(&source, &target, l, k, cfg.seed).map_err(|e| CliError::from_reflection("complete system", e))?;
    if file.order < sys.r {
        return Err(CliError::Usage(format!("the jet has order {} but r = {}", file.order, sys.r)));
    }
    let jet0: Vec<_> = jet_coordinates(&jet.f, source.big_n(), sys.r).iter().map(|c| c.to_complex64()).collect();
    let (radius, spacing, h) = (rational(&cfg.grid.0)?, rational(&cfg.grid.1)?, rational(&cfg.step)?);
    if spacing.is_zero() || h.is_zero() {
        return Err(CliError::Usage("grid spacing and step must be nonzero".into()));
    }
    let grid = box_grid(sys.chart.dim(), &radius, &spacing);
    reconstruct_map(&sys, &jet0, &grid, &h).map_err(|e| CliError::from_reflection("reconstruct", e))
}
