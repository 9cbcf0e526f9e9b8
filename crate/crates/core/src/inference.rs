//! Mode estimate, highest-density confidence regions and the associated test.
//!
//! All computations are discrete: grid densities carry trapezoid point masses,
//! atomic densities carry their own masses. The threshold `k` is the largest
//! attained density value whose upper level set has mass at least `1 - α`.

use serde::{Deserialize, Serialize};

use crate::dist::{Density1D, Measure};
use crate::error::{Error, Result};

/// Relative slack when comparing accumulated masses against `1 - α`.
const MASS_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum Members {
    /// Disjoint closed intervals, sorted, with endpoints on grid nodes.
    Intervals(Vec<(f64, f64)>),
    Atoms(Vec<f64>),
}

impl Members {
    pub fn is_empty(&self) -> bool {
        match self {
            Members::Intervals(v) => v.is_empty(),
            Members::Atoms(v) => v.is_empty(),
        }
    }

    /// Total length of the intervals; number of atoms for atom sets.
    pub fn measure(&self) -> f64 {
        match self {
            Members::Intervals(v) => v.iter().map(|(a, b)| b - a).sum(),
            Members::Atoms(v) => v.len() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceRegion {
    pub level: f64,
    pub threshold_k: f64,
    pub members: Members,
    pub achieved_mass: f64,
    /// Indices of member support points, increasing.
    pub member_indices: Vec<usize>,
}

impl ConfidenceRegion {
    pub fn contains_index(&self, i: usize) -> bool {
        self.member_indices.binary_search(&i).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// `d_H`: the tested value lies in the region.
    NotRejected,
    /// `d_A`.
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestDecision {
    pub decision: Decision,
    pub tested_value: f64,
    /// Support point the tested value was snapped to.
    pub snapped_value: Option<f64>,
    pub out_of_support: bool,
    pub region: ConfidenceRegion,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in [0,1], got {alpha}")))
    }
}

/// Support point of maximal density; ties resolve to the smallest point.
pub fn mode_estimate(d: &Density1D) -> f64 {
    let points = d.points();
    let values = d.values();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    points[best]
}

/// `k_{α}`: the largest value among `{0} ∪ {f_i}` whose level set `{f >= k}` has mass `>= 1 - α`.
///
/// `α = 1` yields `max f + 1`, i.e. the empty region.
pub fn hpd_threshold(d: &Density1D, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let values = d.values();
    let max = d.max_value();
    if alpha == 1.0 {
        return Ok(max + 1.0);
    }
    let masses = d.point_masses();
    let target = (1.0 - alpha) * (1.0 - MASS_EPS);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

    let mut acc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let level = values[order[i]];
        if level <= 0.0 {
            break;
        }
        // Whole tie block enters together.
        while i < order.len() && values[order[i]] == level {
            acc += masses[order[i]];
            i += 1;
        }
        if acc >= target {
            return Ok(level);
        }
    }
    Ok(0.0)
}

/// Highest-density region `{θ : f(θ) >= k_α}`.
pub fn hpd_region(d: &Density1D, alpha: f64) -> Result<ConfidenceRegion> {
    let k = hpd_threshold(d, alpha)?;
    let points = d.points();
    let values = d.values();
    let masses = d.point_masses();
    let member_indices: Vec<usize> = (0..values.len()).filter(|&i| values[i] >= k).collect();
    let achieved_mass = member_indices.iter().map(|&i| masses[i]).sum::<f64>();
    let members = match d.measure() {
        Measure::Counting => Members::Atoms(member_indices.iter().map(|&i| points[i]).collect()),
        Measure::Lebesgue => {
            let mut runs: Vec<(f64, f64)> = Vec::new();
            let mut start: Option<usize> = None;
            for (pos, &i) in member_indices.iter().enumerate() {
                let s = *start.get_or_insert(i);
                let next_contiguous = member_indices.get(pos + 1).is_some_and(|&j| j == i + 1);
                if !next_contiguous {
                    runs.push((points[s], points[i]));
                    start = None;
                }
            }
            Members::Intervals(runs)
        }
    };
    Ok(ConfidenceRegion { level: 1.0 - alpha, threshold_k: k, members, achieved_mass, member_indices })
}

/// Rejects `theta_dot` unless it lies in the level-`1 - α` region.
///
/// Off-grid values snap to the nearest node. Values outside the grid range, or
/// not matching an atom, are rejected and flagged.
pub fn neoclassical_test(d: &Density1D, alpha: f64, theta_dot: f64) -> Result<TestDecision> {
    let region = hpd_region(d, alpha)?;
    let points = d.points();
    let inside_range = match d.measure() {
        Measure::Lebesgue => theta_dot >= points[0] && theta_dot <= points[points.len() - 1],
        Measure::Counting => true,
    };
    let idx = if inside_range { d.locate(theta_dot) } else { None };
    let (decision, snapped) = match idx {
        Some(i) if region.contains_index(i) => (Decision::NotRejected, Some(points[i])),
        Some(i) => (Decision::Rejected, Some(points[i])),
        None => (Decision::Rejected, None),
    };
    Ok(TestDecision {
        decision,
        tested_value: theta_dot,
        snapped_value: snapped,
        out_of_support: idx.is_none(),
        region,
    })
}

/// Mass of a region's member set under the density's quadrature.
pub fn region_mass(d: &Density1D, region: &ConfidenceRegion) -> Result<f64> {
    let masses = d.point_masses();
    let points = d.points();
    match &region.members {
        Members::Atoms(atoms) => atoms
            .iter()
            .map(|&a| {
                d.locate(a)
                    .map(|i| masses[i])
                    .ok_or_else(|| Error::Alignment(format!("atom {a} is not in the support")))
            })
            .sum(),
        Members::Intervals(intervals) => {
            let h = d.spacing().ok_or_else(|| Error::Alignment("interval members on an atomic density".into()))?;
            let mut total = 0.0;
            for &(a, b) in intervals {
                let (ia, ib) = match (d.locate(a), d.locate(b)) {
                    (Some(ia), Some(ib)) => (ia, ib),
                    _ => return Err(Error::Alignment(format!("[{a}, {b}] leaves the grid"))),
                };
                for (x, i) in [(a, ia), (b, ib)] {
                    if (points[i] - x).abs() > 1e-9 * h {
                        return Err(Error::Alignment(format!("{x} is not a grid node")));
                    }
                }
                total += masses[ia..=ib].iter().sum::<f64>();
            }
            Ok(total)
        }
    }
}
