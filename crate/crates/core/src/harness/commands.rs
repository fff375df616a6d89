use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::config::{AlgorithmEntry, ExperimentConfig, TopologyKind};
use super::table::{BucketSampler, RawRow, ResultTable};
use crate::analysis::{compute_bounds, estimate_tave, BoundsReport, TaveOptions};
use crate::engine::{Algorithm, EngineConfig, Simulation};
use crate::error::{Error, Result};
use crate::fields::{synthesize, FieldSpec};
use crate::seed::{derive, label_tag};
use crate::topology::{generate_grid, generate_rgg, Graph};

pub fn graph_seed(base: u64, size: usize, graph_id: usize) -> u64 {
    derive(base, &[label_tag("graph"), size as u64, graph_id as u64])
}

fn field_seed(base: u64, size: usize, graph_id: usize) -> u64 {
    derive(base, &[label_tag("field"), size as u64, graph_id as u64])
}

pub fn run_seed(base: u64, size: usize, graph_id: usize, run_id: usize, kind: Algorithm) -> u64 {
    derive(
        base,
        &[
            label_tag("run"),
            size as u64,
            graph_id as u64,
            run_id as u64,
            label_tag(kind.name()),
        ],
    )
}

/// Realization `graph_id` of the configured topology at `size` (grids are deterministic).
pub fn make_graph(cfg: &ExperimentConfig, size: usize, graph_id: usize) -> Result<Graph> {
    match cfg.topology.kind {
        TopologyKind::Rgg => generate_rgg(size, graph_seed(cfg.seed, size, graph_id)),
        TopologyKind::Grid => generate_grid(size),
    }
}

pub fn make_field(cfg: &ExperimentConfig, size: usize, graph_id: usize, g: &Graph) -> Result<Vec<f64>> {
    synthesize(
        &FieldSpec::new(cfg.field.clone(), field_seed(cfg.seed, size, graph_id)),
        g,
    )
}

fn make_graphs(cfg: &ExperimentConfig, size: usize) -> Result<Vec<(Graph, Vec<f64>)>> {
    (0..cfg.topology.graphs)
        .into_par_iter()
        .map(|gid| {
            let g = make_graph(cfg, size, gid)?;
            let x0 = make_field(cfg, size, gid, &g)?;
            Ok((g, x0))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e: Error| e.context(format!("size {size}")))
}

/// Simulate every (graph, algorithm, run) at `size` and sample each run on the
/// bucket grid. Does no I/O.
pub fn run_experiment(cfg: &ExperimentConfig, size: usize, algorithms: &[AlgorithmEntry]) -> Result<ResultTable> {
    if algorithms.is_empty() {
        return Err(Error::Config("no algorithms to run".into()));
    }
    let graphs = make_graphs(cfg, size)?;
    let tasks: Vec<(usize, usize, usize)> = (0..graphs.len())
        .flat_map(|g| (0..algorithms.len()).flat_map(move |a| (0..cfg.runs).map(move |r| (g, a, r))))
        .collect();
    let results = tasks
        .par_iter()
        .map(|&(gid, a, r)| {
            let (g, x0) = &graphs[gid];
            let entry = &algorithms[a];
            let seed = run_seed(cfg.seed, size, gid, r, entry.engine.algorithm);
            let mut sampler = BucketSampler::new(cfg.bucket, cfg.budget);
            let mut sim = Simulation::new(g, x0, entry.engine, seed)?;
            sim.run(cfg.budget, |p, _| sampler.observe(p), |_| false)?;
            let rows: Vec<RawRow> = sampler
                .finish()
                .into_iter()
                .map(|(k, tx, rel_err)| RawRow {
                    algorithm: a,
                    graph_id: gid,
                    run_id: r,
                    k,
                    tx,
                    rel_err,
                })
                .collect();
            Ok((rows, (a, gid, r, sim.tx())))
        })
        .collect::<Result<Vec<_>>>();
    let results = results?;

    let mut table = ResultTable {
        algorithms: algorithms.iter().map(|a| a.name.clone()).collect(),
        bucket: cfg.bucket,
        rows: Vec::with_capacity(results.iter().map(|(r, _)| r.len()).sum()),
        final_tx: Vec::with_capacity(results.len()),
    };
    for (rows, fin) in results {
        table.rows.extend(rows);
        table.final_tx.push(fin);
    }
    table.canonicalize();
    Ok(table)
}

fn prepare_output(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::from(e).context(format!("creating {}", dir.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::from(e).context(format!("writing {}", path.display())))
}

fn metadata(cfg: &ExperimentConfig, command: &str, graphs: &[(usize, &Graph)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command = {command}");
    let _ = writeln!(s, "seed = {}", cfg.seed);
    let _ = writeln!(s, "bucket = {}", cfg.bucket);
    let _ = writeln!(s, "budget = {}", cfg.budget);
    let _ = writeln!(s, "runs = {}", cfg.runs);
    for (gid, g) in graphs {
        let _ = writeln!(
            s,
            "graph {gid}: n = {}, edges = {}, d_max = {}, redraws = {}",
            g.n(),
            g.edge_count(),
            g.max_degree(),
            g.redraws()
        );
    }
    s.push_str("\n# canonical config\n");
    s.push_str(&cfg.to_toml());
    s
}

fn write_table(cfg: &ExperimentConfig, table: &ResultTable, stem: &str, command: &str) -> Result<()> {
    let dir = &cfg.output;
    prepare_output(dir)?;
    write(&dir.join(format!("{stem}.csv")), &table.raw_csv())?;
    write(
        &dir.join(format!("{stem}_aggregate.csv")),
        &super::table::aggregate_csv(&table.aggregate()),
    )?;
    let graphs: Vec<(usize, Graph)> = (0..cfg.topology.graphs)
        .map(|gid| make_graph(cfg, cfg.topology.size, gid).map(|g| (gid, g)))
        .collect::<Result<_>>()?;
    let refs: Vec<(usize, &Graph)> = graphs.iter().map(|(i, g)| (*i, g)).collect();
    write(
        &dir.join(format!("{stem}_metadata.txt")),
        &metadata(cfg, command, &refs),
    )
}

/// Run the configured algorithms; writes `runs.csv`, `runs_aggregate.csv` and
/// `runs_metadata.txt`.
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let table = run_experiment(cfg, cfg.topology.size, &cfg.algorithms)?;
    write_table(cfg, &table, "runs", "run")?;
    Ok(table)
}

fn format_p(p: f64) -> String {
    format!("gge_p{p}")
}

/// GGE (the first configured GGE entry) at each miss probability, with p = 0
/// always included, plus randomized gossip.
pub fn stale_algorithms(cfg: &ExperimentConfig) -> Vec<AlgorithmEntry> {
    let base = cfg.base_gge();
    let mut ps = vec![0.0];
    ps.extend(cfg.miss_probs.iter().copied().filter(|&p| p != 0.0));
    let mut out: Vec<AlgorithmEntry> = ps
        .into_iter()
        .map(|p| AlgorithmEntry::new(format_p(p), base.with_miss_prob(p)))
        .collect();
    out.push(AlgorithmEntry::new("rg", EngineConfig::rg()));
    out
}

pub fn cmd_stale(cfg: &ExperimentConfig) -> Result<ResultTable> {
    if cfg.miss_probs.is_empty() {
        return Err(Error::Config("stale needs a non-empty miss_probs list".into()));
    }
    let table = run_experiment(cfg, cfg.topology.size, &stale_algorithms(cfg))?;
    write_table(cfg, &table, "stale", "stale")?;
    Ok(table)
}

/// GGE with 1, 2 and 3 hops, randomized gossip and geographic gossip.
pub fn multihop_algorithms(cfg: &ExperimentConfig) -> Vec<AlgorithmEntry> {
    let base = cfg.base_gge();
    let mut out: Vec<AlgorithmEntry> = (1..=3)
        .map(|h| AlgorithmEntry::new(format!("gge_h{h}"), base.with_hops(h)))
        .collect();
    out.push(AlgorithmEntry::new("rg", EngineConfig::rg()));
    out.push(AlgorithmEntry::new("geographic", EngineConfig::geographic()));
    out
}

pub fn cmd_multihop(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let table = run_experiment(cfg, cfg.topology.size, &multihop_algorithms(cfg))?;
    write_table(cfg, &table, "multihop", "multihop")?;
    Ok(table)
}

/// Write `graph_<id>.edges` for every realization.
pub fn cmd_topology(cfg: &ExperimentConfig) -> Result<Vec<Graph>> {
    prepare_output(&cfg.output)?;
    let graphs = make_graphs(cfg, cfg.topology.size)?;
    for (gid, (g, _)) in graphs.iter().enumerate() {
        write(&cfg.output.join(format!("graph_{gid}.edges")), &g.to_edge_list())?;
    }
    Ok(graphs.into_iter().map(|(g, _)| g).collect())
}

fn optimizer_seed(base: u64, size: usize, graph_id: usize) -> u64 {
    derive(base, &[label_tag("optimizer"), size as u64, graph_id as u64])
}

/// Spectral gap, contraction constant and averaging-time bounds of every
/// realization; writes `bounds.csv` and `bounds.txt`.
pub fn cmd_bounds(cfg: &ExperimentConfig) -> Result<Vec<BoundsReport>> {
    let size = cfg.topology.size;
    let graphs = make_graphs(cfg, size)?;
    let reports = graphs
        .par_iter()
        .enumerate()
        .map(|(gid, (g, _))| {
            compute_bounds(g, cfg.epsilon, &cfg.optimizer, optimizer_seed(cfg.seed, size, gid))
                .map_err(|e| e.context(format!("graph {gid}")))
        })
        .collect::<Result<Vec<_>>>()?;
    prepare_output(&cfg.output)?;
    let mut csv = String::from(BoundsReport::CSV_HEADER);
    csv.push('\n');
    let mut text = String::new();
    for (gid, r) in reports.iter().enumerate() {
        csv.push_str(&r.csv_row(gid));
        csv.push('\n');
        let _ = writeln!(text, "[graph {gid}]");
        text.push_str(&r.to_key_value());
        text.push('\n');
    }
    write(&cfg.output.join("bounds.csv"), &csv)?;
    write(&cfg.output.join("bounds.txt"), &text)?;
    Ok(reports)
}

/// One line of the scaling table: statistics over the realizations at one size.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub size: usize,
    pub n: usize,
    pub graphs: usize,
    pub a_min: f64,
    pub a_mean: f64,
    pub a_max: f64,
    pub lambda2_mean: f64,
    /// Empirical averaging time (iterations) from the configured field.
    pub tave_min: u64,
    pub tave_mean: f64,
    pub tave_max: u64,
    /// Mean empirical averaging time from the contraction maximizer.
    pub tave_worst_mean: f64,
    pub tave_bound_mean: f64,
    /// `1.5 n / ln n`
    pub ref_rgg: f64,
    /// `2.5 n`
    pub ref_grid: f64,
}

impl SweepRow {
    pub fn tave_per_node(&self) -> f64 {
        self.tave_mean / self.n as f64
    }
}

pub const SWEEP_HEADER: &str = "kind,size,n,graphs,a_min,a_mean,a_max,lambda2_mean,tave_min,tave_mean,tave_max,tave_per_node,tave_worst_mean,tave_bound_mean,ref_rgg,ref_grid";

pub fn sweep_table(kind: TopologyKind, rows: &[SweepRow]) -> String {
    let kind = match kind {
        TopologyKind::Rgg => "rgg",
        TopologyKind::Grid => "grid",
    };
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{kind},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.size,
            r.n,
            r.graphs,
            r.a_min,
            r.a_mean,
            r.a_max,
            r.lambda2_mean,
            r.tave_min,
            r.tave_mean,
            r.tave_max,
            r.tave_per_node(),
            r.tave_worst_mean,
            r.tave_bound_mean,
            r.ref_rgg,
            r.ref_grid
        );
    }
    s
}

/// For each size in `topology.sizes`: the contraction constant of every
/// realization and the empirical averaging time of the first configured GGE
/// variant from both the configured field and the contraction maximizer.
/// Writes `sweep.csv` and per-graph detail in `sweep_graphs.csv`.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let sizes = if cfg.topology.sizes.is_empty() {
        vec![cfg.topology.size]
    } else {
        cfg.topology.sizes.clone()
    };
    let engine = cfg.base_gge();
    let opts = TaveOptions::new(cfg.epsilon, cfg.runs);
    let mut rows = Vec::with_capacity(sizes.len());
    let mut detail = String::from("size,graph_id,n,a_estimate,lambda2,tave,tave_worst,tave_bound\n");
    for &size in &sizes {
        let graphs = make_graphs(cfg, size)?;
        let per_graph = graphs
            .iter()
            .enumerate()
            .map(|(gid, (g, x0))| -> Result<(BoundsReport, u64, u64)> {
                let ctx = |e: Error| e.context(format!("size {size}, graph {gid}"));
                let b =
                    compute_bounds(g, cfg.epsilon, &cfg.optimizer, optimizer_seed(cfg.seed, size, gid)).map_err(ctx)?;
                let tseed = derive(cfg.seed, &[label_tag("tave"), size as u64, gid as u64]);
                let t = estimate_tave(g, &engine, x0, &opts, tseed).map_err(ctx)?;
                let tw = estimate_tave(g, &engine, &b.argmax, &opts, tseed).map_err(ctx)?;
                Ok((b, t.iterations, tw.iterations))
            })
            .collect::<Result<Vec<_>>>()?;
        let count = per_graph.len() as f64;
        let n = per_graph[0].0.n;
        for (gid, (b, t, tw)) in per_graph.iter().enumerate() {
            let _ = writeln!(
                detail,
                "{size},{gid},{},{:.16e},{:.16e},{t},{tw},{:.16e}",
                b.n, b.a_estimate, b.lambda2, b.tave_bound_gge
            );
        }
        let a = per_graph.iter().map(|(b, _, _)| b.a_estimate);
        let nf = n as f64;
        rows.push(SweepRow {
            size,
            n,
            graphs: per_graph.len(),
            a_min: a.clone().fold(f64::INFINITY, f64::min),
            a_mean: a.clone().sum::<f64>() / count,
            a_max: a.fold(f64::NEG_INFINITY, f64::max),
            lambda2_mean: per_graph.iter().map(|(b, _, _)| b.lambda2).sum::<f64>() / count,
            tave_min: per_graph.iter().map(|p| p.1).min().unwrap_or(0),
            tave_mean: per_graph.iter().map(|p| p.1 as f64).sum::<f64>() / count,
            tave_max: per_graph.iter().map(|p| p.1).max().unwrap_or(0),
            tave_worst_mean: per_graph.iter().map(|p| p.2 as f64).sum::<f64>() / count,
            tave_bound_mean: per_graph.iter().map(|(b, _, _)| b.tave_bound_gge).sum::<f64>() / count,
            ref_rgg: 1.5 * nf / nf.ln(),
            ref_grid: 2.5 * nf,
        });
    }
    prepare_output(&cfg.output)?;
    write(&cfg.output.join("sweep.csv"), &sweep_table(cfg.topology.kind, &rows))?;
    write(&cfg.output.join("sweep_graphs.csv"), &detail)?;
    Ok(rows)
}
