//! Per-point threshold search and the grid report.

use std::io::Write;

use serde::Serialize;

use super::{assemble, ConditionContext, ConditionId};
use crate::error::{Error, Result};
use crate::funcspace::io::format_value;
use crate::funcspace::log_grid;
use crate::par;
use crate::solve::{threshold, Search, Threshold};

/// Constants beyond this are reported as `+∞`.
pub const CONSTANT_CAP: f64 = 1e12;
/// Relative bracket width of per-point constant searches.
pub const CONSTANT_REL_WIDTH: f64 = 1e-3;
const CONSTANT_FLOOR: f64 = 1e-12;
/// Successive thresholds along an extension must grow at least this much.
const DIVERGENCE_GROWTH: f64 = 2.0;
const EXTENSION_STEPS: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionGrid {
    pub r: Vec<f64>,
    pub eps: Vec<f64>,
}

impl Default for ConditionGrid {
    /// 12×12 log-spaced points on `[10⁻³, 10³]²`.
    fn default() -> Self {
        ConditionGrid::square(1e-3, 1e3, 12)
    }
}

impl ConditionGrid {
    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        ConditionGrid { r: log_grid(lo, hi, n), eps: log_grid(lo, hi, n) }
    }

    fn points(&self) -> Vec<(f64, f64)> {
        self.r.iter().flat_map(|&r| self.eps.iter().map(move |&e| (r, e))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionRow {
    pub r: f64,
    pub eps: f64,
    /// Smallest constant for which the condition holds at `(r, ε)`.
    pub threshold: f64,
    pub capped: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Behaviour of the per-point thresholds beyond the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Trend {
    Bounded,
    /// Thresholds grow at least geometrically along `direction`.
    Diverging { direction: String, thresholds: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub grid: ConditionGrid,
    /// Sup over the grid of the per-point thresholds.
    pub minimal_constant: f64,
    pub worst_point: Option<(f64, f64)>,
    pub trend: Trend,
    #[serde(skip)]
    pub rows: Vec<ConditionRow>,
}

impl ConditionReport {
    /// The grid constant, or `+∞` when the thresholds diverge off the grid.
    pub fn effective_constant(&self) -> f64 {
        match self.trend {
            Trend::Bounded => self.minimal_constant,
            Trend::Diverging { .. } => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.effective_constant().is_finite()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "condition,r,eps,threshold,lhs,rhs,capped")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.id,
                format_value(row.r),
                format_value(row.eps),
                format_value(row.threshold),
                format_value(row.lhs),
                format_value(row.rhs),
                row.capped
            )?;
        }
        Ok(())
    }
}

/// Threshold of condition `id` at one point, with the sides evaluated there.
pub fn point_threshold(ctx: &ConditionContext, id: ConditionId, r: f64, eps: f64) -> Result<ConditionRow> {
    let assembled = assemble(ctx, id, r, eps)?;
    let search = Search { start: 1.0, floor: CONSTANT_FLOOR, cap: CONSTANT_CAP, rel_width: CONSTANT_REL_WIDTH };
    let found = threshold(
        |c| {
            let p = assembled.at(c);
            if p.lhs == 0.0 {
                -1e6
            } else {
                (p.lhs / p.rhs).ln()
            }
        },
        search,
    );
    let (value, probe) = match found {
        Threshold::AboveCap(cap) => (f64::INFINITY, cap),
        t => (t.value(), t.value()),
    };
    let p = assembled.at(probe);
    Ok(ConditionRow { r, eps, threshold: value, capped: found.is_capped(), lhs: p.lhs, rhs: p.rhs })
}

fn sup(rows: &[ConditionRow]) -> f64 {
    rows.iter().map(|r| r.threshold).fold(0.0, f64::max)
}

fn thresholds_at(ctx: &ConditionContext, id: ConditionId, pts: &[(f64, f64)]) -> Result<Vec<ConditionRow>> {
    par::map(pts, |&(r, e)| point_threshold(ctx, id, r, e)).into_iter().collect()
}

/// Sup of the thresholds along three decade steps past each edge of the grid.
fn trend(ctx: &ConditionContext, id: ConditionId, grid: &ConditionGrid, rows: &[ConditionRow]) -> Result<Trend> {
    let edge = |pick: &dyn Fn(&ConditionRow) -> bool| sup(&rows.iter().copied().filter(|r| pick(r)).collect::<Vec<_>>());
    let (r_lo, r_hi) = (grid.r[0], grid.r[grid.r.len() - 1]);
    let (e_lo, e_hi) = (grid.eps[0], grid.eps[grid.eps.len() - 1]);
    let dirs: [(&str, f64, bool, f64); 4] = [
        ("r -> infinity", r_hi, true, 10.0),
        ("r -> 0", r_lo, true, 0.1),
        ("eps -> infinity", e_hi, false, 10.0),
        ("eps -> 0", e_lo, false, 0.1),
    ];
    for (direction, start, along_r, step) in dirs {
        let mut seq = vec![edge(&|row: &ConditionRow| if along_r { row.r == start } else { row.eps == start })];
        for k in 1..=EXTENSION_STEPS {
            let at = start * step.powi(k);
            let pts: Vec<(f64, f64)> = if along_r {
                grid.eps.iter().map(|&e| (at, e)).collect()
            } else {
                grid.r.iter().map(|&r| (r, at)).collect()
            };
            seq.push(sup(&thresholds_at(ctx, id, &pts)?));
        }
        let diverging = seq.windows(2).all(|w| w[1].is_infinite() || (w[0] > 0.0 && w[1] >= DIVERGENCE_GROWTH * w[0]));
        if diverging {
            return Ok(Trend::Diverging { direction: direction.to_string(), thresholds: seq });
        }
    }
    Ok(Trend::Bounded)
}

/// Per-point thresholds over `grid`, their sup and the off-grid trend.
pub fn minimal_constant(ctx: &ConditionContext, id: ConditionId, grid: &ConditionGrid) -> Result<ConditionReport> {
    if grid.r.is_empty() || grid.eps.is_empty() {
        return Err(Error::Config("condition grid must be non-empty".into()));
    }
    ctx.check(id)?;
    let rows = thresholds_at(ctx, id, &grid.points())?;
    let values: Vec<f64> = rows.iter().map(|r| r.threshold).collect();
    let (minimal_constant, worst_point) = match par::argmax(&values) {
        Some((i, v)) => (v, Some((rows[i].r, rows[i].eps))),
        None => (0.0, None),
    };
    let trend = if minimal_constant.is_finite() { trend(ctx, id, grid, &rows)? } else { Trend::Bounded };
    Ok(ConditionReport { id, grid: grid.clone(), minimal_constant, worst_point, trend, rows })
}

/// A constant shared by several conditions, reported as the max of theirs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharedConstant {
    pub name: String,
    pub conditions: Vec<ConditionId>,
    pub value: f64,
}

/// `A₁, A₂, A₃` (or `B₁, B₂, B₃`) from the reports of one theorem, where the
/// third constant serves both logarithmic conditions.
pub fn shared_constants(reports: &[ConditionReport]) -> Vec<SharedConstant> {
    use ConditionId::*;
    let groups: [(&str, &[ConditionId]); 6] = [
        ("A1", &[T21C1]),
        ("A2", &[T21C2]),
        ("A3", &[T21C3, T21C4]),
        ("B1", &[T31C1]),
        ("B2", &[T31C2]),
        ("B3", &[T31C3, T31C4]),
    ];
    groups
        .iter()
        .filter_map(|(name, ids)| {
            let members: Vec<&ConditionReport> = reports.iter().filter(|r| ids.contains(&r.id)).collect();
            if members.is_empty() {
                return None;
            }
            Some(SharedConstant {
                name: name.to_string(),
                conditions: members.iter().map(|r| r.id).collect(),
                value: members.iter().map(|r| r.effective_constant()).fold(0.0, f64::max),
            })
        })
        .collect()
}
