//! Grid sweeps and their CSV form.

use std::io::Write;

use entcap_core::{method1_capacity, method2_capacity, CapacityResult, Direction, OptimizerConfig};
use rayon::prelude::*;

use crate::config::{Directions, Resolved};
use crate::error::{CliError, Result};
use crate::params::{ChannelParams, Grid, Method, SweepVariable};

pub const CSV_COLUMNS: [&str; 11] = [
    "sweep_value",
    "e_up",
    "e_down",
    "e_up_lower",
    "e_up_upper_gap",
    "e_down_lower",
    "e_down_upper_gap",
    "alpha_opt_up",
    "alpha_opt_down",
    "converged_up",
    "converged_down",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub params: ChannelParams,
    pub variable: SweepVariable,
    pub grid: Grid,
    pub directions: Directions,
    pub method: Method,
    pub optimizer: OptimizerConfig,
}

impl SweepSpec {
    pub fn from_resolved(r: &Resolved) -> Result<Self> {
        let grid = r
            .grid
            .ok_or_else(|| CliError::validation("sweep needs a grid"))?;
        Ok(Self {
            params: r.params.clone(),
            variable: r.params.family.sweep_variable(),
            grid,
            directions: r.directions,
            method: r.method,
            optimizer: r.optimizer.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub up: Option<CapacityResult>,
    pub down: Option<CapacityResult>,
}

impl SweepRow {
    pub fn converged(&self) -> bool {
        self.up.iter().chain(&self.down).all(|r| r.converged)
    }
}

pub fn evaluate(
    params: &ChannelParams,
    method: Method,
    direction: Direction,
    cfg: &OptimizerConfig,
) -> Result<CapacityResult> {
    let ch = params.channel()?;
    Ok(match method {
        Method::Method1 => method1_capacity(&ch, direction)?,
        Method::Method2 => method2_capacity(&ch, direction, cfg)?,
    })
}

/// Every (grid point, direction) pair runs as its own task; rows come back
/// in grid order whatever the completion order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let values = spec.grid.values();
    let tasks: Vec<(usize, Direction)> = (0..values.len())
        .flat_map(|i| spec.directions.iter().map(move |d| (i, d)))
        .collect();
    let results: Vec<Result<CapacityResult>> = tasks
        .par_iter()
        .map(|&(i, d)| evaluate(&spec.params.at(values[i]), spec.method, d, &spec.optimizer))
        .collect();

    let mut rows: Vec<SweepRow> = values
        .iter()
        .map(|&v| SweepRow {
            sweep_value: v,
            up: None,
            down: None,
        })
        .collect();
    for (&(i, d), res) in tasks.iter().zip(results) {
        let r = res?;
        match d {
            Direction::Up => rows[i].up = Some(r),
            Direction::Down => rows[i].down = Some(r),
        }
    }
    Ok(rows)
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("float round trip");
    if rounded.abs() >= 1e-4 && rounded.abs() < 1e15 {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn cells(r: Option<&CapacityResult>) -> [String; 4] {
    match r {
        None => Default::default(),
        Some(r) => [
            format_sig12(r.value),
            format_sig12(r.output_interval.lower),
            format_sig12(r.output_interval.gap()),
            r.argument.alpha().map(format_sig12).unwrap_or_default(),
        ],
    }
}

pub fn write_csv(rows: &[SweepRow], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for row in rows {
        let [up, up_lo, up_gap, up_alpha] = cells(row.up.as_ref());
        let [down, down_lo, down_gap, down_alpha] = cells(row.down.as_ref());
        let flag = |r: &Option<CapacityResult>| {
            r.as_ref()
                .map(|r| r.converged.to_string())
                .unwrap_or_default()
        };
        let line = [
            format_sig12(row.sweep_value),
            up,
            down,
            up_lo,
            up_gap,
            down_lo,
            down_gap,
            up_alpha,
            down_alpha,
            flag(&row.up),
            flag(&row.down),
        ];
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
