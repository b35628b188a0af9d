use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rank2d_core::netstats::{self, correlator::write_sweep_csv, powerlaw::FitData, SweepMode};
use rank2d_core::{
    cheirank, degree_distribution, load_edge_list, load_node_subset, overlap_curve, pagerank,
    subset_rank, subset_window_fraction, window_overlap, Direction, EdgeListFormat, Error,
    RankTable, RankedList, Resolution, Result, SolverOptions, TableMeta, Weighting,
};

use crate::manifest::{GraphRecord, InputRecord, RankManifest, RunConfig, SolveRecord};
use crate::{Command, OverlapMode, ResolutionArgs, Separator, SolverArgs, StatsKind, SweepKind};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Rank {
            edges,
            out_dir,
            solver,
            separator,
        } => cmd_rank(&edges, &out_dir, &solver, separator),
        Command::Stats {
            table,
            out_dir,
            expect_graph,
            which,
        } => cmd_stats(&table, &out_dir, expect_graph.as_deref(), which),
        Command::Sweep {
            edges,
            out,
            mode,
            values,
            fixed,
            tol,
            max_iter,
            workers,
            separator,
        } => {
            let opts = SolverOptions {
                tol,
                max_iter,
                workers,
            };
            cmd_sweep(&edges, &out, mode, values, fixed, &opts, separator)
        }
        Command::Degrees {
            edges,
            out_dir,
            fit_range,
            unweighted,
            separator,
        } => cmd_degrees(&edges, &out_dir, fit_range, unweighted, separator),
        Command::Overlap {
            mode,
            list_a,
            list_b,
            out,
            window,
            ks_max,
        } => cmd_overlap(mode, &list_a, &list_b, &out, window, ks_max),
        Command::Subset {
            table,
            subset,
            out,
            resolution,
            expect_graph,
        } => cmd_subset(&table, &subset, &out, resolution, expect_graph.as_deref()),
        Command::Synth {
            n,
            mu_in,
            mu_out,
            mean_degree,
            seed,
            out,
        } => cmd_synth(n, mu_in, mu_out, mean_degree, seed, &out),
    }
}

fn format_of(sep: Separator) -> EdgeListFormat {
    match sep {
        Separator::Tab => EdgeListFormat::Tab,
        Separator::Whitespace => EdgeListFormat::Whitespace,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn read_table(path: &Path, expect_graph: Option<&str>) -> Result<RankTable> {
    let table = RankTable::read_tsv(BufReader::new(File::open(path)?))?;
    if let Some(expected) = expect_graph {
        if table.meta.graph_hash != expected {
            return Err(Error::Contract(format!(
                "rank table was computed for graph {}, expected {expected}",
                table.meta.graph_hash
            )));
        }
    }
    Ok(table)
}

fn cmd_rank(edges: &Path, out_dir: &Path, solver: &SolverArgs, sep: Separator) -> Result<()> {
    let content = fs::read(edges)?;
    let (graph, stats) = load_edge_list(content.as_slice(), format_of(sep))?;
    let opts = SolverOptions {
        tol: solver.tol,
        max_iter: solver.max_iter,
        workers: solver.workers,
    };
    let p = pagerank(&graph, solver.alpha, &opts)?;
    let q = cheirank(&graph, solver.alpha_star, &opts)?;
    let kappa = netstats::correlator(&p, &q)?.kappa;
    let graph_hash = graph.content_hash();
    let table = RankTable::build(
        graph.names().to_vec(),
        &p,
        &q,
        TableMeta {
            graph_hash: graph_hash.clone(),
            alpha: solver.alpha,
            alpha_star: solver.alpha_star,
            tol: solver.tol,
            max_iter: solver.max_iter,
        },
    )?;

    fs::create_dir_all(out_dir)?;
    table.write_tsv(create(&out_dir.join("rank_table.tsv"))?)?;
    p.write_tsv(graph.names(), create(&out_dir.join("pagerank.tsv"))?)?;
    q.write_tsv(graph.names(), create(&out_dir.join("cheirank.tsv"))?)?;

    let manifest = RankManifest {
        command: "rank",
        input: InputRecord::new(edges, &content),
        graph: GraphRecord {
            nodes: graph.n_nodes(),
            distinct_edges: graph.n_edges(),
            total_edge_weight: graph.total_edge_weight(),
            self_loop_records: stats.self_loops,
            merged_duplicates: stats.merged_duplicates,
            content_hash: graph_hash,
        },
        config: RunConfig {
            alpha: solver.alpha,
            alpha_star: solver.alpha_star,
            tol: solver.tol,
            max_iter: solver.max_iter,
        },
        pagerank: SolveRecord {
            iterations: p.iterations,
            residual: p.residual,
        },
        cheirank: SolveRecord {
            iterations: q.iterations,
            residual: q.residual,
        },
        kappa,
        outputs: ["rank_table.tsv", "pagerank.tsv", "cheirank.tsv"]
            .map(String::from)
            .to_vec(),
    };
    let mut out = create(&out_dir.join("manifest.json"))?;
    serde_json::to_writer_pretty(&mut out, &manifest).map_err(std::io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_stats(
    table_path: &Path,
    out_dir: &Path,
    expect_graph: Option<&str>,
    which: StatsKind,
) -> Result<()> {
    let table = read_table(table_path, expect_graph)?;
    fs::create_dir_all(out_dir)?;
    match which {
        StatsKind::Density {
            cells,
            seed,
            samples,
        } => {
            let grid = netstats::density_grid(&table, cells)?;
            grid.write_csv(create(&out_dir.join("density.csv"))?)?;
            if let Some(seed) = seed {
                let pairs = netstats::sample_independent(
                    &table.pagerank_curve(),
                    &table.cheirank_curve(),
                    samples.unwrap_or(table.len()),
                    seed,
                )?;
                let null = netstats::DensityGrid::from_pairs(&pairs, table.len(), cells)?;
                null.write_csv(create(&out_dir.join("density_null.csv"))?)?;
            }
        }
        StatsKind::Slice { x0, cells } => {
            let grid = netstats::density_grid(&table, cells)?;
            let slice = netstats::slice_density(&grid, x0)?;
            slice.write_csv(create(&out_dir.join("slice.csv"))?)?;
        }
        StatsKind::Correlator => {
            let kappa = netstats::kappa(table.pagerank(), table.cheirank())?;
            let point = netstats::SweepPoint {
                alpha: table.meta.alpha,
                alpha_star: table.meta.alpha_star,
                kappa: Some(kappa),
                converged: true,
            };
            write_sweep_csv(&[point], create(&out_dir.join("correlator.csv"))?)?;
        }
        StatsKind::Fitcurve { fit_range } => {
            for (name, curve) in [
                ("fit_pagerank.csv", table.pagerank_curve()),
                ("fit_cheirank.csv", table.cheirank_curve()),
            ] {
                let points: Vec<(f64, f64)> = curve
                    .iter()
                    .enumerate()
                    .map(|(r, &p)| ((r + 1) as f64, p))
                    .collect();
                let fit = netstats::fit_power_law(FitData::Curve(&points), fit_range)?;
                fit.write_csv(create(&out_dir.join(name))?)?;
            }
        }
    }
    Ok(())
}

fn cmd_sweep(
    edges: &Path,
    out: &Path,
    mode: SweepKind,
    values: Vec<f64>,
    fixed: f64,
    opts: &SolverOptions,
    sep: Separator,
) -> Result<()> {
    let (graph, _) = load_edge_list(BufReader::new(File::open(edges)?), format_of(sep))?;
    let mode = match mode {
        SweepKind::Diagonal => SweepMode::Diagonal(values),
        SweepKind::FixAlpha => SweepMode::FixAlpha {
            alpha: fixed,
            alpha_stars: values,
        },
        SweepKind::FixAlphaStar => SweepMode::FixAlphaStar {
            alpha_star: fixed,
            alphas: values,
        },
    };
    let points = match opts.workers {
        Some(w) => {
            let pool = rayon_pool(w)?;
            pool.install(|| netstats::correlator_sweep(&graph, &mode, opts))?
        }
        None => netstats::correlator_sweep(&graph, &mode, opts)?,
    };
    write_sweep_csv(&points, create(out)?)
}

fn rayon_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Contract(format!("cannot build thread pool: {e}")))
}

fn cmd_degrees(
    edges: &Path,
    out_dir: &Path,
    fit_range: (f64, f64),
    unweighted: bool,
    sep: Separator,
) -> Result<()> {
    let (graph, _) = load_edge_list(BufReader::new(File::open(edges)?), format_of(sep))?;
    let weighting = if unweighted {
        Weighting::Distinct
    } else {
        Weighting::Multiplicity
    };
    fs::create_dir_all(out_dir)?;
    for (direction, tag) in [(Direction::In, "in"), (Direction::Out, "out")] {
        let hist = degree_distribution(&graph, direction, weighting);
        let mut out = create(&out_dir.join(format!("degrees_{tag}.csv")))?;
        writeln!(out, "k,count")?;
        for (k, c) in &hist.counts {
            writeln!(out, "{k},{c}")?;
        }
        out.flush()?;
        let pairs: Vec<(u64, u64)> = hist.counts.iter().map(|(&k, &c)| (k, c)).collect();
        let fit = netstats::fit_power_law(FitData::Histogram(&pairs), fit_range)?;
        fit.write_csv(create(&out_dir.join(format!("fit_degrees_{tag}.csv")))?)?;
    }
    Ok(())
}

fn read_list(path: &Path) -> Result<RankedList> {
    RankedList::read(BufReader::new(File::open(path)?))
}

fn cmd_overlap(
    mode: OverlapMode,
    list_a: &Path,
    list_b: &Path,
    out: &Path,
    window: usize,
    ks_max: Option<usize>,
) -> Result<()> {
    let a = read_list(list_a)?;
    let series = match mode {
        OverlapMode::Cumulative => {
            let b = read_list(list_b)?;
            overlap_curve(&a, &b, ks_max.unwrap_or(a.len().min(b.len())))?
        }
        OverlapMode::Window => window_overlap(&a, &read_list(list_b)?, window)?,
        OverlapMode::Subset => {
            let subset = read_list(list_b)?;
            subset_window_fraction(&a, subset.names(), window)?
        }
    };
    series.write_csv(create(out)?)
}

fn cmd_subset(
    table_path: &Path,
    subset_path: &Path,
    out: &Path,
    resolution: ResolutionArgs,
    expect_graph: Option<&str>,
) -> Result<()> {
    let table = read_table(table_path, expect_graph)?;
    let mode = if resolution.lenient {
        Resolution::Lenient
    } else {
        Resolution::Strict
    };
    let label = subset_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let loaded = load_node_subset(
        BufReader::new(File::open(subset_path)?),
        &table,
        &label,
        mode,
    )?;
    for (line, name) in &loaded.unresolved {
        eprintln!("rank2d: line {line}: unresolved name {name:?} skipped");
    }
    if loaded.duplicates > 0 {
        eprintln!("rank2d: {} duplicate names ignored", loaded.duplicates);
    }
    let sub = subset_rank(&loaded.subset, &table)?;
    sub.write_tsv(create(out)?)
}

fn cmd_synth(
    n: usize,
    mu_in: f64,
    mu_out: f64,
    mean_degree: f64,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let graph = netstats::generate_scale_free(n, mu_in, mu_out, mean_degree, seed)?;
    rank2d_core::write_edge_list(&graph, create(out)?)
}
