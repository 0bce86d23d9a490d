//! Run reports, baseline comparison and the batch search for runs with a
//! nonzero error term.
//!
//! Reports are plain data with a fixed field order and exact rationals
//! written as strings, so two runs with the same inputs serialize to the
//! same bytes. Wall-clock timings are only included on request.

use std::fs;
use std::path::Path;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cover::{backtrack, certify, validate_cover, BoundCertificate, CoverError};
use crate::elp::{solve_elp_with, ElpError};
use crate::graph::{write_dimacs, Edge, GeneratorKind, Graph};
use crate::oracle::{exact_vc, matching_2approx, nt_half_integral_round, OracleError};
use crate::rational::{rat, Rat};
use crate::reduce::{run_pipeline, EdgeRule, Mode, PipelineConfig, PipelineError};

pub const SCHEMA: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Elp(#[from] ElpError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("produced set misses edges {0:?}")]
    InvalidCover(Vec<Edge>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Config(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub name: String,
    pub source: String,
    pub n: usize,
    pub m: usize,
}

impl Instance {
    pub fn new(name: &str, source: &str, g: &Graph) -> Instance {
        Instance { name: name.to_string(), source: source.to_string(), n: g.vertex_count(), m: g.edge_count() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleFields {
    pub opt_size: usize,
    /// `|S1| / |S*|`, or `"1"` on an edgeless graph.
    pub ratio: Rat,
    /// `max(0, |S1| - 3/2 |S*|)`
    pub xi_observed: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub kind: &'static str,
    pub vertices: usize,
    pub objective: Rat,
    pub decrease: Rat,
    pub ones: usize,
    pub zeros: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub hypothesis_failed: bool,
    pub pins: usize,
    pub alternate_optima: usize,
    pub cut_rounds: usize,
    pub skipped_zero_one: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub pipeline_ms: f64,
    pub oracle_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub instance: Instance,
    pub mode: Mode,
    pub seed: u64,
    pub edge_rule: EdgeRule,
    pub f1: Rat,
    /// `None` when base mode stopped on hypothesis failure.
    pub cover: Option<Vec<u32>>,
    pub cover_size: Option<usize>,
    pub certificate: Option<BoundCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleFields>,
    pub trace: Vec<StepSummary>,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_log: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn hypothesis_failed(&self) -> bool {
        self.diagnostics.hypothesis_failed
    }

    pub fn xi(&self) -> Option<&Rat> {
        self.certificate.as_ref().map(|c| &c.xi)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub pipeline: PipelineConfig,
    /// Run the exact oracle when the graph has at most this many vertices.
    pub oracle_cap: Option<usize>,
    pub timings: bool,
    pub cut_log: bool,
}

/// Runs the whole algorithm on one graph and assembles its report.
pub fn solve_instance(instance: Instance, g: &Graph, opts: &SolveOptions) -> Result<RunReport, BenchError> {
    let start = Instant::now();
    let run = run_pipeline(g, &opts.pipeline)?;
    let trace = &run.trace;
    let (cover, certificate) = if trace.hypothesis_failed {
        (None, None)
    } else {
        let s = backtrack(trace)?;
        let (ok, missed) = validate_cover(g, &s);
        if !ok {
            return Err(BenchError::InvalidCover(missed));
        }
        let cert = certify(trace, &s);
        for f in &cert.findings {
            log::warn!("{}: {f}", instance.name);
        }
        (Some(s), Some(cert))
    };
    let pipeline_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut oracle_ms = None;
    let oracle = match (opts.oracle_cap, &cover) {
        (Some(cap), Some(s)) if g.vertex_count() <= cap => {
            let t = Instant::now();
            let exact = exact_vc(g, false, cap)?;
            oracle_ms = Some(t.elapsed().as_secs_f64() * 1e3);
            let size = Rat::from(s.len());
            let opt = Rat::from(exact.opt_size);
            let ratio = if exact.opt_size == 0 { Rat::integer(1) } else { &size / &opt };
            let xi_observed = (size - opt * rat(3, 2)).max(Rat::zero());
            Some(OracleFields { opt_size: exact.opt_size, ratio, xi_observed })
        }
        _ => None,
    };

    let cut_log = if opts.cut_log {
        let sol = solve_elp_with(g, &opts.pipeline.elp)?;
        Some(sol.rounds.iter().map(|r| r.to_string()).collect())
    } else {
        None
    };

    let steps = trace
        .records
        .iter()
        .map(|r| StepSummary {
            kind: r.reduction.name(),
            vertices: r.vertices,
            objective: r.objective.clone(),
            decrease: r.decrease.clone(),
            ones: r.ones.len(),
            zeros: r.zeros.len(),
        })
        .collect();
    let diagnostics = Diagnostics {
        hypothesis_failed: trace.hypothesis_failed,
        pins: trace.total_pins(),
        alternate_optima: trace.records.iter().filter(|r| r.alternate_found).count(),
        cut_rounds: trace.total_cut_rounds(),
        skipped_zero_one: trace.records.iter().filter(|r| r.skipped_zero_one).count(),
    };
    Ok(RunReport {
        schema: SCHEMA,
        instance,
        mode: opts.pipeline.mode,
        seed: opts.pipeline.seed,
        edge_rule: opts.pipeline.edge_rule,
        f1: trace.initial_objective(),
        cover_size: cover.as_ref().map(|s| s.len()),
        cover: cover.map(|s| s.members.iter().map(|v| v.0).collect()),
        certificate,
        oracle,
        trace: steps,
        diagnostics,
        cut_log,
        timings: opts.timings.then_some(Timings { pipeline_ms, oracle_ms }),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub schema: u32,
    pub instance: Instance,
    pub elp: usize,
    pub matching: usize,
    pub nt_rounding: usize,
    pub opt: Option<usize>,
    pub xi: Rat,
}

impl CompareReport {
    pub fn table(&self) -> String {
        let opt = self.opt.map_or_else(|| "-".to_string(), |o| o.to_string());
        format!(
            "{:<12} {:>6}\n{:<12} {:>6}\n{:<12} {:>6}\n{:<12} {:>6}\n{:<12} {:>6}\n",
            "method", "size", "elp", self.elp, "matching", self.matching, "nt-rounding", self.nt_rounding, "optimal", opt
        )
    }
}

/// The enhanced algorithm against both 2-approximations and, when small enough, the optimum.
pub fn compare(instance: Instance, g: &Graph, opts: &SolveOptions) -> Result<CompareReport, BenchError> {
    let mut opts = opts.clone();
    opts.pipeline.mode = Mode::Enhanced;
    let report = solve_instance(instance.clone(), g, &opts)?;
    let matching = matching_2approx(g);
    let nt = nt_half_integral_round(g)?;
    for c in [&matching, &nt] {
        let (ok, missed) = validate_cover(g, c);
        if !ok {
            return Err(BenchError::InvalidCover(missed));
        }
    }
    Ok(CompareReport {
        schema: SCHEMA,
        instance,
        elp: report.cover_size.expect("enhanced mode always yields a cover"),
        matching: matching.len(),
        nt_rounding: nt.len(),
        opt: report.oracle.as_ref().map(|o| o.opt_size),
        xi: report.certificate.map(|c| c.xi).unwrap_or_else(Rat::zero),
    })
}

/// Instance families for the batch search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HuntGenerator {
    GnpTriangleFree,
    Torus,
    Bipartite,
    Mixed,
}

impl std::str::FromStr for HuntGenerator {
    type Err = String;
    fn from_str(s: &str) -> Result<HuntGenerator, String> {
        match s {
            "gnp-trianglefree" => Ok(HuntGenerator::GnpTriangleFree),
            "torus" => Ok(HuntGenerator::Torus),
            "bipartite" => Ok(HuntGenerator::Bipartite),
            "mixed" => Ok(HuntGenerator::Mixed),
            _ => Err(format!("unknown generator {s:?} (gnp-trianglefree, torus, bipartite, mixed)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HuntConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub trials: usize,
    pub seed: u64,
    pub generator: HuntGenerator,
    pub jobs: usize,
    pub solve: SolveOptions,
}

/// Instance `index` of a hunt; depends only on the master seed and the index.
pub fn hunt_instance(cfg: &HuntConfig, index: usize) -> GeneratorKind {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let n = rng.gen_range(cfg.n_min..=cfg.n_max);
    let p = rng.gen_range(0.15..0.6);
    let seed = rng.gen();
    let family = match cfg.generator {
        HuntGenerator::Mixed => [
            HuntGenerator::GnpTriangleFree,
            HuntGenerator::Torus,
            HuntGenerator::Bipartite,
            HuntGenerator::Mixed,
        ][index % 4],
        g => g,
    };
    match family {
        HuntGenerator::GnpTriangleFree => GeneratorKind::RandomTriangleFree { n, p, seed },
        HuntGenerator::Bipartite => GeneratorKind::RandomBipartite { n, p, seed },
        HuntGenerator::Torus => {
            let rows = rng.gen_range(3..=((n as f64).sqrt() as u32).max(3));
            GeneratorKind::TorusGrid(rows, (n / rows).max(3))
        }
        // plain G(n, p), triangles allowed
        HuntGenerator::Mixed => GeneratorKind::Gnp { n, p, seed },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntRow {
    pub index: usize,
    pub generator: String,
    pub n: usize,
    pub m: usize,
    pub f1: Rat,
    pub cover_size: usize,
    pub opt_size: Option<usize>,
    pub ratio: Option<Rat>,
    pub xi: Rat,
    pub gamma: usize,
    pub delta: usize,
    pub eta: usize,
    pub sigma: usize,
    pub pins: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntSummary {
    pub schema: u32,
    pub trials: usize,
    pub seed: u64,
    pub generator: HuntGenerator,
    pub failures: usize,
    pub xi_zero: usize,
    pub xi_nonzero: Vec<usize>,
    pub random_edge_runs: usize,
    /// `ratio -> count`, over runs with an oracle value
    pub ratio_histogram: Vec<(Rat, usize)>,
    pub rows: Vec<HuntRow>,
}

fn hunt_one(cfg: &HuntConfig, index: usize) -> (HuntRow, Graph) {
    let kind = hunt_instance(cfg, index);
    let g = kind.generate().unwrap_or_default();
    let name = format!("hunt-{index}");
    let outcome = solve_instance(Instance::new(&name, &kind.to_string(), &g), &g, &cfg.solve);
    let mut row = HuntRow {
        index,
        generator: kind.to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        f1: Rat::zero(),
        cover_size: 0,
        opt_size: None,
        ratio: None,
        xi: Rat::zero(),
        gamma: 0,
        delta: 0,
        eta: 0,
        sigma: 0,
        pins: 0,
        error: None,
    };
    match outcome {
        Ok(rep) => {
            let cert = rep.certificate.expect("enhanced mode yields a certificate");
            row.f1 = rep.f1;
            row.cover_size = cert.cover_size;
            row.opt_size = rep.oracle.as_ref().map(|o| o.opt_size);
            row.ratio = rep.oracle.map(|o| o.ratio);
            row.xi = cert.xi;
            row.gamma = cert.gamma;
            row.delta = cert.delta;
            row.eta = cert.eta;
            row.sigma = cert.sigma;
            row.pins = rep.diagnostics.pins;
        }
        Err(e) => {
            log::error!("{name}: {e}");
            row.error = Some(e.to_string());
        }
    }
    (row, g)
}

/// Runs `cfg.trials` enhanced-mode instances on up to `cfg.jobs` threads.
/// Rows come back in index order whatever the scheduling. With `out`,
/// writes `hunt.csv`, `hunt.json` and a DIMACS file per nonzero-error instance.
pub fn hunt(cfg: &HuntConfig, out: Option<&Path>) -> Result<HuntSummary, BenchError> {
    if cfg.n_min > cfg.n_max {
        return Err(BenchError::Config(format!("empty n range {}..={}", cfg.n_min, cfg.n_max)));
    }
    let mut cfg = cfg.clone();
    cfg.solve.pipeline.mode = Mode::Enhanced;
    cfg.solve.timings = false;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))?;
    let results: Vec<(HuntRow, Graph)> = pool.install(|| (0..cfg.trials).into_par_iter().map(|i| hunt_one(&cfg, i)).collect());

    let mut hist: std::collections::BTreeMap<Rat, usize> = Default::default();
    for (row, _) in &results {
        if let Some(r) = &row.ratio {
            *hist.entry(r.clone()).or_default() += 1;
        }
    }
    let rows: Vec<HuntRow> = results.iter().map(|(r, _)| r.clone()).collect();
    let summary = HuntSummary {
        schema: SCHEMA,
        trials: cfg.trials,
        seed: cfg.seed,
        generator: cfg.generator,
        failures: rows.iter().filter(|r| r.error.is_some()).count(),
        xi_zero: rows.iter().filter(|r| r.error.is_none() && r.xi.is_zero()).count(),
        xi_nonzero: rows.iter().filter(|r| !r.xi.is_zero()).map(|r| r.index).collect(),
        random_edge_runs: rows.iter().filter(|r| r.gamma > 0).count(),
        ratio_histogram: hist.into_iter().collect(),
        rows,
    };

    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("hunt.csv"))?;
        w.write_record([
            "index", "generator", "n", "m", "f1", "cover_size", "opt_size", "ratio", "xi", "gamma", "delta", "eta",
            "sigma", "pins", "error",
        ])?;
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        for r in &summary.rows {
            w.write_record([
                r.index.to_string(),
                r.generator.clone(),
                r.n.to_string(),
                r.m.to_string(),
                r.f1.to_string(),
                r.cover_size.to_string(),
                opt(&r.opt_size.map(|v| v.to_string())),
                opt(&r.ratio.as_ref().map(|v| v.to_string())),
                r.xi.to_string(),
                r.gamma.to_string(),
                r.delta.to_string(),
                r.eta.to_string(),
                r.sigma.to_string(),
                r.pins.to_string(),
                opt(&r.error),
            ])?;
        }
        w.flush()?;
        fs::write(dir.join("hunt.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
        for &i in &summary.xi_nonzero {
            fs::write(dir.join(format!("xi-nonzero-{i}.dimacs")), write_dimacs(&results[i].1))?;
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::graph::Format;
    use crate::oracle::DEFAULT_CAP;

    fn opts() -> SolveOptions {
        SolveOptions { oracle_cap: Some(DEFAULT_CAP), ..Default::default() }
    }

    fn solve(kind: GeneratorKind) -> RunReport {
        let g = kind.generate().unwrap();
        solve_instance(Instance::new("t", &kind.to_string(), &g), &g, &opts()).unwrap()
    }

    #[test]
    fn k3_and_c5_reports() {
        let r = solve(GeneratorKind::Complete(3));
        assert_eq!(r.cover_size, Some(2));
        assert_eq!(r.f1, Rat::integer(2));
        assert!(r.xi().unwrap().is_zero());
        assert_eq!(r.oracle.as_ref().unwrap().ratio, Rat::integer(1));
        let r = solve(GeneratorKind::Cycle(5));
        assert_eq!(r.cover_size, Some(3));
        assert!(r.xi().unwrap().is_zero());
    }

    #[test]
    fn json_is_stable_and_has_schema() {
        let a = solve(GeneratorKind::Petersen).to_json();
        let b = solve(GeneratorKind::Petersen).to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], 1);
        assert!(v.get("timings").is_none());
        assert!(v["f1"].is_string());
    }

    #[test]
    fn compare_examples() {
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let r = compare(Instance::new("c5", "cycle:5", &c5), &c5, &opts()).unwrap();
        // all-1/2 is the only LP optimum on an odd cycle, so rounding keeps every vertex
        assert_eq!((r.elp, r.matching, r.nt_rounding, r.opt), (3, 4, 5, Some(3)));
        let k2 = GeneratorKind::Complete(2).generate().unwrap();
        let r = compare(Instance::new("k2", "complete:2", &k2), &k2, &opts()).unwrap();
        assert_eq!((r.elp, r.matching, r.nt_rounding, r.opt), (1, 2, 1, Some(1)));
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        let r = compare(Instance::new("k3", "complete:3", &k3), &k3, &opts()).unwrap();
        assert_eq!((r.elp, r.matching, r.nt_rounding, r.opt), (2, 2, 3, Some(2)));
        assert!(r.table().contains("matching"));
    }

    fn hunt_cfg(generator: HuntGenerator, trials: usize) -> HuntConfig {
        HuntConfig { n_min: 6, n_max: 10, trials, seed: 7, generator, jobs: 2, solve: opts() }
    }

    #[test]
    fn hunt_is_ordered_and_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let a = hunt(&hunt_cfg(HuntGenerator::Mixed, 24), Some(dir.path())).unwrap();
        let b = hunt(&hunt_cfg(HuntGenerator::Mixed, 24), None).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.rows.iter().enumerate().all(|(i, r)| r.index == i));
        assert_eq!(a.failures, 0);
        let csv = std::fs::read_to_string(dir.path().join("hunt.csv")).unwrap();
        assert_eq!(csv.lines().count(), 25);
        for &i in &a.xi_nonzero {
            let text = std::fs::read_to_string(dir.path().join(format!("xi-nonzero-{i}.dimacs"))).unwrap();
            assert!(parse_graph(&text, Format::Dimacs).is_ok());
        }
    }

    #[test]
    fn bipartite_hunt_never_needs_random_edges() {
        let s = hunt(&hunt_cfg(HuntGenerator::Bipartite, 30), None).unwrap();
        assert_eq!(s.random_edge_runs, 0);
        assert_eq!(s.xi_zero, 30);
        assert!(s.rows.iter().all(|r| r.ratio == Some(Rat::integer(1)) || r.opt_size == Some(0)));
    }

    #[test]
    fn empty_hunt() {
        let s = hunt(&hunt_cfg(HuntGenerator::Torus, 0), None).unwrap();
        assert!(s.rows.is_empty());
        assert_eq!(s.xi_zero, 0);
    }
}
