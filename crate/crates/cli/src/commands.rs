//! One handler per subcommand: validate flags, call the library, and shape
//! the report. All randomized reports carry the master seed.

use serde::Deserialize;
use serde_json::{json, Value};

use bootlab_core::{
    al_window, chain_crossed, closure, detercross_check, diam, edge_blocked, g, gamma_expectation,
    gamma_set, highdim_series, lambda, lambda_highdim, lambda_table, lgap_probability_exact,
    pc_estimate, percolation_prob, small_component, span, w_min, w_min_refined, BlockerSign,
    BoundaryCondition, ColouredGraph, Error, GraphChain, LatticeSpec, Result, TrialReport,
};

use crate::io::{axis_index, cell_strings, load_cells, load_spec, parse_coords, parse_rect};
use crate::render::{num, Output, SCHEMA_VERSION};

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn trial_output(report: &TrialReport, context: Value) -> Output {
    let value = merge(
        merge(json!({"schema_version": SCHEMA_VERSION}), context),
        serde_json::to_value(report).expect("report serialization"),
    );
    Output::new(
        value,
        &["p", "estimate", "half_width", "trials", "seed"],
        vec![vec![
            num(report.p),
            num(report.estimate),
            num(report.half_width),
            report.trials.to_string(),
            report.master_seed.to_string(),
        ]],
    )
}

pub fn lambda_cmd(d: u32, r: u32, tol: f64) -> Result<Output> {
    let q = lambda(d, r, tol)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "d": d,
        "r": r,
        "tol": tol,
        "value": q.value,
        "abs_error_estimate": q.abs_error_estimate,
        "truncation_point": q.truncation_point,
    });
    Ok(Output::new(
        value,
        &["d", "r", "value", "abs_error_estimate", "truncation_point"],
        vec![vec![
            d.to_string(),
            r.to_string(),
            num(q.value),
            num(q.abs_error_estimate),
            num(q.truncation_point),
        ]],
    ))
}

pub fn table_cmd(dmax: u32, tol: f64) -> Result<Output> {
    let table = lambda_table(dmax, tol)?;
    let entries: Vec<Value> = table
        .iter()
        .map(|(d, r, q)| {
            json!({
                "d": d,
                "r": r,
                "value": q.value,
                "abs_error_estimate": q.abs_error_estimate,
            })
        })
        .collect();
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "dmax": dmax,
        "tol": tol,
        "entries": entries,
    });
    // CSV is the triangle as printed: one row per threshold r, one column
    // per dimension d.
    let mut headers: Vec<String> = vec!["r/d".to_string()];
    headers.extend((2..=dmax).map(|d| d.to_string()));
    let mut rows = Vec::new();
    for r in 2..=dmax {
        let mut row = vec![r.to_string()];
        for d in 2..=dmax {
            row.push(match table.iter().find(|&&(td, tr, _)| td == d && tr == r) {
                Some((_, _, q)) => num(q.value),
                None => String::new(),
            });
        }
        rows.push(row);
    }
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    Ok(Output::new(value, &header_refs, rows))
}

fn parse_bc(spec: &LatticeSpec, arg: &str) -> Result<BoundaryCondition> {
    match arg {
        "none" => Ok(BoundaryCondition::None),
        "all-outside" => Ok(BoundaryCondition::AllOutside),
        other => {
            if let Some(axis) = other.strip_prefix("half-low:") {
                let axis: u32 = axis
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad axis in {other:?}")))?;
                Ok(BoundaryCondition::HalfSpaceLow(axis_index(
                    axis,
                    spec.d(),
                    "boundary",
                )?))
            } else if let Some(axis) = other.strip_prefix("half-high:") {
                let axis: u32 = axis
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad axis in {other:?}")))?;
                Ok(BoundaryCondition::HalfSpaceHigh(axis_index(
                    axis,
                    spec.d(),
                    "boundary",
                )?))
            } else {
                Err(Error::Parse(format!(
                    "boundary condition {other:?} (expect none, all-outside, half-low:J, half-high:J)"
                )))
            }
        }
    }
}

pub fn close_cmd(spec_arg: &str, cells_arg: &str, bc_arg: &str) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let seeds = load_cells(&spec, cells_arg)?;
    let bc = parse_bc(&spec, bc_arg)?;
    let result = closure(&spec, &seeds, bc)?;
    let closed = cell_strings(&spec, &result.closure);
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "spec": serde_json::to_value(&spec).expect("spec serialization"),
        "seed_count": seeds.len(),
        "closure_size": result.closure.len(),
        "generations": result.generations,
        "history_sizes": result.history_sizes,
        "percolates": result.closure.len() == spec.cell_count(),
        "diam": diam(&spec, &result.closure)?,
        "closure": closed,
    });
    let rows = closed.iter().map(|c| vec![c.clone()]).collect();
    Ok(Output::new(value, &["cell"], rows))
}

pub fn span_cmd(spec_arg: &str, cells_arg: &str) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let seeds = load_cells(&spec, cells_arg)?;
    let decomposition = span(&spec, &seeds)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "spec": serde_json::to_value(&spec).expect("spec serialization"),
        "components": decomposition.rects.len(),
        "rects": serde_json::to_value(&decomposition.rects).expect("rect serialization"),
    });
    let rows = decomposition
        .rects
        .iter()
        .enumerate()
        .map(|(i, rect)| {
            vec![
                (i + 1).to_string(),
                rect.lo()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                rect.hi()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ]
        })
        .collect();
    Ok(Output::new(value, &["component", "lo", "hi"], rows))
}

#[allow(clippy::too_many_arguments)]
pub fn cross_cmd(
    spec_arg: &str,
    rect_arg: &str,
    p: f64,
    axis: u32,
    trials: u64,
    seed: u64,
) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let rect = parse_rect(&spec, rect_arg)?;
    let axis0 = axis_index(axis, spec.d(), "crossing")?;
    let report = bootlab_core::crossing_prob(&spec, &rect, p, axis0, trials, seed)?;
    Ok(trial_output(
        &report,
        json!({"event": "crossed", "rect": rect_arg, "axis": axis}),
    ))
}

pub fn prob_cmd(spec_arg: &str, p: f64, trials: u64, seed: u64) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let report = percolation_prob(&spec, p, trials, seed)?;
    Ok(trial_output(&report, json!({"event": "percolates"})))
}

pub fn pc_cmd(spec_arg: &str, trials: u64, tol: f64, seed: u64, target: f64) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let est = pc_estimate(&spec, trials, tol, seed, target)?;
    let value = merge(
        json!({"schema_version": SCHEMA_VERSION}),
        serde_json::to_value(est).expect("report serialization"),
    );
    Ok(Output::new(
        value,
        &["p_lo", "p_hi", "p_mid", "trials_per_probe", "target", "seed"],
        vec![vec![
            num(est.p_lo),
            num(est.p_hi),
            num(est.p_mid),
            est.trials_per_probe.to_string(),
            num(est.target),
            est.master_seed.to_string(),
        ]],
    ))
}

pub fn diam_event_cmd(
    spec_arg: &str,
    p: f64,
    len: u32,
    trials: u64,
    seed: u64,
) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let report = bootlab_core::diam_event_prob(&spec, p, len, trials, seed)?;
    Ok(trial_output(
        &report,
        json!({"event": "diam_at_least", "len": len}),
    ))
}

pub fn lgap_cmd(m: u32, ell: u32, u: f64) -> Result<Output> {
    let probability = lgap_probability_exact(m, ell, u)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "m": m,
        "ell": ell,
        "u": u,
        "probability": probability,
    });
    Ok(Output::new(
        value,
        &["m", "ell", "u", "probability"],
        vec![vec![
            m.to_string(),
            ell.to_string(),
            num(u),
            num(probability),
        ]],
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn gamma_cmd(
    spec_arg: &str,
    m: u32,
    x_arg: &str,
    cells_arg: Option<&str>,
    p: Option<f64>,
    trials: Option<u64>,
    seed: u64,
) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let x = parse_coords(x_arg, "centre")?;
    match (cells_arg, p) {
        (Some(cells_arg), None) => {
            if trials.is_some() {
                return Err(Error::domain("--trials applies only to the sampled mode"));
            }
            let a = load_cells(&spec, cells_arg)?;
            let set = gamma_set(&spec, &a, m, &x)?;
            let cells = cell_strings(&spec, &set);
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "m": m,
                "x": x_arg,
                "size": set.len(),
                "cells": cells,
            });
            let rows = cells.iter().map(|c| vec![c.clone()]).collect();
            Ok(Output::new(value, &["cell"], rows))
        }
        (None, Some(p)) => {
            let trials = trials
                .ok_or_else(|| Error::domain("sampled mode needs --trials alongside --p"))?;
            let report = gamma_expectation(&spec, p, m, &x, trials, seed)?;
            Ok(trial_output(
                &report,
                json!({"event": "gamma_mean_size", "m": m, "x": x_arg}),
            ))
        }
        _ => Err(Error::domain(
            "give exactly one of --cells (exact set) or --p with --trials (sampled mean)",
        )),
    }
}

#[derive(Deserialize)]
struct ChainFile {
    s: u32,
    graphs: Vec<GraphFile>,
}

#[derive(Deserialize)]
struct GraphFile {
    #[serde(default)]
    good: Vec<((u32, u8), (u32, u8))>,
    #[serde(default)]
    bad: Vec<((u32, u8), (u32, u8))>,
}

pub fn chain_cmd(file: &str) -> Result<Output> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Parse(format!("cannot read chain file {file}: {e}")))?;
    let wire: ChainFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad chain file: {e}")))?;
    let graphs = wire
        .graphs
        .into_iter()
        .map(|g| ColouredGraph::new(wire.s, g.good, g.bad))
        .collect::<Result<Vec<_>>>()?;
    let chain = GraphChain::new(graphs)?;
    let crossed = chain_crossed(&chain);
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "s": chain.s(),
        "layers": chain.len(),
        "admissible": true,
        "crossed": crossed,
    });
    Ok(Output::new(
        value,
        &["s", "layers", "admissible", "crossed"],
        vec![vec![
            chain.s().to_string(),
            chain.len().to_string(),
            "true".to_string(),
            crossed.to_string(),
        ]],
    ))
}

fn parse_rate(arg: &str) -> Result<u32> {
    let k = arg
        .strip_prefix("g:")
        .ok_or_else(|| Error::Parse(format!("rate {arg:?} must look like g:K")))?;
    let k: u32 = k
        .parse()
        .map_err(|_| Error::Parse(format!("bad rate index in {arg:?}")))?;
    if k == 0 {
        return Err(Error::domain("rate index must be at least 1"));
    }
    Ok(k)
}

pub fn wpath_cmd(f_arg: &str, a_arg: &str, b_arg: &str, grid: u32) -> Result<Output> {
    let k = parse_rate(f_arg)?;
    let parse_point = |arg: &str, what: &str| -> Result<Vec<f64>> {
        arg.split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad {what} coordinate {f:?}")))
            })
            .collect()
    };
    let a = parse_point(a_arg, "start")?;
    let b = parse_point(b_arg, "end")?;
    let f = move |y: f64| g(k, y).unwrap_or(f64::INFINITY);
    let coarse = w_min(f, &a, &b, grid)?;
    let (value_fine, slack) = w_min_refined(f, &a, &b, grid)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "f": f_arg,
        "a": a_arg,
        "b": b_arg,
        "grid": grid,
        "value": value_fine,
        "coarse_value": coarse,
        "slack": slack,
    });
    Ok(Output::new(
        value,
        &["f", "a", "b", "grid", "value", "slack"],
        vec![vec![
            f_arg.to_string(),
            a_arg.to_string(),
            b_arg.to_string(),
            grid.to_string(),
            num(value_fine),
            num(slack),
        ]],
    ))
}

pub fn al_window_cmd(spec_arg: &str, cells_arg: &str, l: u32) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let a = load_cells(&spec, cells_arg)?;
    let rect = al_window(&spec, &a, l)?;
    let fmt = |cs: &[u32]| {
        cs.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "l": l,
        "lo": rect.lo(),
        "hi": rect.hi(),
        "long": rect.long(),
        "short": rect.short(),
    });
    Ok(Output::new(
        value,
        &["l", "lo", "hi", "long", "short"],
        vec![vec![
            l.to_string(),
            fmt(rect.lo()),
            fmt(rect.hi()),
            rect.long().to_string(),
            rect.short().to_string(),
        ]],
    ))
}

pub fn small_component_cmd(spec_arg: &str, cells_arg: &str, l: u32) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let a = load_cells(&spec, cells_arg)?;
    let set = small_component(&spec, &a, l)?;
    let cells = cell_strings(&spec, &set);
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "l": l,
        "size": set.len(),
        "diam": diam(&spec, &set)?,
        "cells": cells,
    });
    let rows = cells.iter().map(|c| vec![c.clone()]).collect();
    Ok(Output::new(value, &["cell"], rows))
}

pub fn double_gap_cmd(
    spec_arg: &str,
    rect_arg: &str,
    cells_arg: &str,
    axis: u32,
) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let rect = parse_rect(&spec, rect_arg)?;
    let a = load_cells(&spec, cells_arg)?;
    let axis0 = axis_index(axis, spec.axes(), "gap")?;
    let double_gap = bootlab_core::has_double_gap(&spec, &rect, &a, axis0)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "rect": rect_arg,
        "axis": axis,
        "double_gap": double_gap,
    });
    Ok(Output::new(
        value,
        &["rect", "axis", "double_gap"],
        vec![vec![
            rect_arg.to_string(),
            axis.to_string(),
            double_gap.to_string(),
        ]],
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn blocked_cmd(
    spec_arg: &str,
    cells_arg: &str,
    corner_arg: &str,
    axis: u32,
    full: bool,
    x_arg: Option<&str>,
    sign_arg: Option<&str>,
) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let a = load_cells(&spec, cells_arg)?;
    let corner = parse_coords(corner_arg, "corner")?;
    let axis0 = axis_index(axis, spec.ell(), "thick")?;
    match (x_arg, sign_arg) {
        (Some(x_arg), Some(sign_arg)) => {
            if full {
                return Err(Error::domain("--full applies only to whole-edge queries"));
            }
            let x = parse_coords(x_arg, "slice")?;
            let sign = match sign_arg {
                "plus" => BlockerSign::Plus,
                "minus" => BlockerSign::Minus,
                other => {
                    return Err(Error::Parse(format!(
                        "sign {other:?} must be plus or minus"
                    )))
                }
            };
            let blocker = bootlab_core::is_blocker(&spec, &a, &x, &corner, axis0, sign)?;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "corner": corner_arg,
                "axis": axis,
                "x": x_arg,
                "sign": sign_arg,
                "blocker": blocker,
            });
            Ok(Output::new(
                value,
                &["corner", "axis", "x", "sign", "blocker"],
                vec![vec![
                    corner_arg.to_string(),
                    axis.to_string(),
                    x_arg.to_string(),
                    sign_arg.to_string(),
                    blocker.to_string(),
                ]],
            ))
        }
        (None, None) => {
            let blocked = edge_blocked(&spec, &a, &corner, axis0, full)?;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "corner": corner_arg,
                "axis": axis,
                "full": full,
                "blocked": blocked,
            });
            Ok(Output::new(
                value,
                &["corner", "axis", "full", "blocked"],
                vec![vec![
                    corner_arg.to_string(),
                    axis.to_string(),
                    full.to_string(),
                    blocked.to_string(),
                ]],
            ))
        }
        _ => Err(Error::domain(
            "give both --x and --sign for a single-slice query, or neither for the whole edge",
        )),
    }
}

pub fn detercross_cmd(spec_arg: &str, cells_arg: &str, axis: u32) -> Result<Output> {
    let spec = load_spec(spec_arg)?;
    let a = load_cells(&spec, cells_arg)?;
    let axis0 = axis_index(axis, spec.ell(), "thick")?;
    let case = detercross_check(&spec, &a, axis0)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "axis": axis,
        "case": case.to_string(),
    });
    Ok(Output::new(
        value,
        &["axis", "case"],
        vec![vec![axis.to_string(), case.to_string()]],
    ))
}

pub fn highdim_cmd(tol: f64) -> Result<Output> {
    let root = lambda_highdim(tol)?;
    let residual = highdim_series(root);
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "tol": tol,
        "value": root,
        "residual": residual,
    });
    Ok(Output::new(
        value,
        &["tol", "value", "residual"],
        vec![vec![num(tol), num(root), num(residual)]],
    ))
}
