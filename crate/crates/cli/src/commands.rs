use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use indicator_cdf::experiment::{run_experiment, Execution, ExperimentConfig};
use indicator_cdf::formats::{indicator_json, parse_experiment_config, read_indicator_file};
use indicator_cdf::report::{factor_means_csv, markdown_table, metric_csv, Metric};
use indicator_cdf::{
    bin_to_indicators, cdf_at, estimate_from_survival, simulate_trace, survival_from_indicators,
    CdfEstimate, ForwardPdfEstimate, IndicatorSeries, SimConfig, SurvivalCurve, WeibullSpec,
};
use serde_json::json;

use crate::error::CliError;
use crate::{Cli, CliResult, Command, Format};

const DEFAULT_REPRODUCE_DIR: &str = "results";

pub fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Estimate {
            ref file,
            interval,
            ref queries,
            verbose,
        } => estimate(&cli, file, interval, queries, verbose),
        Command::Simulate {
            alpha,
            beta,
            horizon,
            interval,
            warmup,
            ref trace_out,
        } => simulate(
            &cli,
            alpha,
            beta,
            horizon,
            interval,
            warmup,
            trace_out.as_deref(),
        ),
        Command::Reproduce { ref config, serial } => reproduce(&cli, config.as_deref(), serial),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

struct EstimateView<'a> {
    series: &'a IndicatorSeries,
    survival: &'a SurvivalCurve,
    fitted: Option<(&'a ForwardPdfEstimate, &'a CdfEstimate)>,
    queries: &'a [(f64, f64)],
    verbose: bool,
}

fn estimate(
    cli: &Cli,
    file: &Path,
    interval: Option<f64>,
    queries: &[f64],
    verbose: bool,
) -> CliResult<()> {
    let series = read_indicator_file(file, interval)?;
    let survival = survival_from_indicators(&series);
    let fitted = estimate_from_survival(&survival);

    let (pdf, cdf) = match &fitted {
        Ok((pdf, cdf)) => (pdf, cdf),
        Err(err) => {
            // The survival estimate is still worth showing.
            if verbose {
                let view = EstimateView {
                    series: &series,
                    survival: &survival,
                    fitted: None,
                    queries: &[],
                    verbose,
                };
                emit(cli.out.as_deref(), &render_estimate(&view, cli.format))?;
            }
            return Err(err.clone().into());
        }
    };

    let answered = queries
        .iter()
        .map(|&x| Ok((x, cdf_at(cdf, x)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let view = EstimateView {
        series: &series,
        survival: &survival,
        fitted: Some((pdf, cdf)),
        queries: &answered,
        verbose,
    };
    emit(cli.out.as_deref(), &render_estimate(&view, cli.format))
}

fn render_estimate(view: &EstimateView<'_>, format: Option<Format>) -> String {
    match format.unwrap_or(Format::Json) {
        Format::Json => estimate_json(view),
        Format::Csv => estimate_csv(view),
        Format::Markdown => estimate_markdown(view),
    }
}

fn estimate_json(view: &EstimateView<'_>) -> String {
    let mut report = json!({
        "t": view.series.interval(),
        "v": view.series.len(),
    });
    if let Some((pdf, cdf)) = view.fitted {
        report["mu_hat"] = json!(cdf.mu_hat());
        report["cutoff"] = json!(pdf.cutoff());
        report["knots"] = cdf
            .knot_positions()
            .zip(cdf.knots())
            .enumerate()
            .map(|(k, (x, f))| json!({ "k": k, "x": x, "cdf": f }))
            .collect();
        if !view.queries.is_empty() {
            report["queries"] = view
                .queries
                .iter()
                .map(|(x, f)| json!({ "x": x, "cdf": f }))
                .collect();
        }
        if view.verbose {
            report["g"] = json!(pdf.g_values());
        }
    }
    if view.verbose {
        report["survival"] = json!(view.survival.values());
    }
    let mut text = serde_json::to_string_pretty(&report).expect("json value");
    text.push('\n');
    text
}

// Rows k = 0..=v when verbose (survival is defined there), else the knots.
// Query rows follow with an empty k column.
fn estimate_csv(view: &EstimateView<'_>) -> String {
    let t = view.series.interval();
    let p = view.survival.values();
    let (g, knots): (&[f64], &[f64]) = match view.fitted {
        Some((pdf, cdf)) => (pdf.g_values(), cdf.knots()),
        None => (&[], &[]),
    };
    let cell = |vals: &[f64], k: usize| vals.get(k).map(f64::to_string).unwrap_or_default();

    let mut s = String::new();
    if view.verbose {
        s.push_str("k,x,survival,g,cdf\n");
        for (k, pk) in p.iter().enumerate() {
            let _ = writeln!(
                s,
                "{k},{},{pk},{},{}",
                k as f64 * t,
                cell(g, k),
                cell(knots, k)
            );
        }
    } else {
        s.push_str("k,x,cdf\n");
        for (k, f) in knots.iter().enumerate() {
            let _ = writeln!(s, "{k},{},{f}", k as f64 * t);
        }
    }
    for (x, f) in view.queries {
        if view.verbose {
            let _ = writeln!(s, ",{x},,,{f}");
        } else {
            let _ = writeln!(s, ",{x},{f}");
        }
    }
    s
}

fn estimate_markdown(view: &EstimateView<'_>) -> String {
    let t = view.series.interval();
    let mut s = String::new();
    let _ = writeln!(s, "intervals: {} of length {t}", view.series.len());
    if let Some((pdf, cdf)) = view.fitted {
        let _ = writeln!(s, "mu_hat: {:.4}", cdf.mu_hat());
        let _ = writeln!(s, "K: {}\n", pdf.cutoff());
        let _ = writeln!(s, "| k | x | g | F |\n|---|---|---|---|");
        for (k, (g, f)) in pdf.g_values().iter().zip(cdf.knots()).enumerate() {
            let _ = writeln!(s, "| {k} | {:.4} | {g:.4} | {f:.4} |", k as f64 * t);
        }
        if !view.queries.is_empty() {
            let _ = writeln!(s, "\n| x | F(x) |\n|---|---|");
            for (x, f) in view.queries {
                let _ = writeln!(s, "| {x} | {f:.4} |");
            }
        }
    }
    if view.verbose {
        let _ = writeln!(s, "\n| k | survival |\n|---|---|");
        for (k, p) in view.survival.values().iter().enumerate() {
            let _ = writeln!(s, "| {k} | {p:.4} |");
        }
    }
    s
}

fn simulate(
    cli: &Cli,
    alpha: f64,
    beta: f64,
    horizon: f64,
    interval: f64,
    warmup: f64,
    trace_out: Option<&Path>,
) -> CliResult<()> {
    let config = SimConfig {
        spec: WeibullSpec::new(alpha, beta)?,
        horizon,
        warmup,
        seed: cli.seed.unwrap_or(0),
    };
    let trace = simulate_trace(&config)?;
    let series = bin_to_indicators(&trace, interval)?;

    if let Some(path) = trace_out {
        let text = serde_json::to_string(&trace).expect("trace serializes");
        fs::write(path, text + "\n")?;
    }
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => indicator_json(&series) + "\n",
        Format::Csv => {
            let mut s = String::from("interval,empty\n");
            for (i, &empty) in series.indicators().iter().enumerate() {
                let _ = writeln!(s, "{},{}", i + 1, u8::from(empty));
            }
            s
        }
        Format::Markdown => {
            return Err(CliError::invalid("simulate writes json or csv"));
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn reproduce(cli: &Cli, config_path: Option<&Path>, serial: bool) -> CliResult<()> {
    let mut config = match config_path {
        Some(path) => parse_experiment_config(&fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(runs) = cli.runs {
        config.runs = runs;
    }
    let execution = if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let cells = run_experiment(&config, execution)?;

    let dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_REPRODUCE_DIR));
    fs::create_dir_all(&dir)?;
    let csv_err = |e: indicator_cdf::report::CsvError| CliError::runtime(e.to_string());
    for metric in [Metric::MaxAbsCdfDiff, Metric::AbsMeanDiff] {
        let name = format!("{}.csv", metric.table_name());
        fs::write(dir.join(name), metric_csv(&cells, metric).map_err(csv_err)?)?;
    }
    fs::write(
        dir.join("factor_means.csv"),
        factor_means_csv(&cells).map_err(csv_err)?,
    )?;

    let failed: usize = cells.iter().map(|c| c.runs_failed).sum();
    let metadata = json!({
        "config": config,
        "grid_step": format!("t / {}", config.grid_step_divisor),
        "sup_norm_range": "max((K-1)t, 0.999 quantile of the truth), plus all knots",
        "execution": if serial { "serial" } else { "parallel" },
        "cells": cells.len(),
        "failed_runs": failed,
    });
    let text = serde_json::to_string_pretty(&metadata).expect("json value");
    fs::write(dir.join("metadata.json"), text + "\n")?;

    if cli.format == Some(Format::Markdown) {
        let md = format!(
            "{}\n{}",
            markdown_table(&cells, Metric::MaxAbsCdfDiff),
            markdown_table(&cells, Metric::AbsMeanDiff)
        );
        fs::write(dir.join("tables.md"), &md)?;
        print!("{md}");
    }
    eprintln!(
        "wrote {} cells ({} failed runs) to {}",
        cells.len(),
        failed,
        dir.display()
    );
    Ok(())
}
