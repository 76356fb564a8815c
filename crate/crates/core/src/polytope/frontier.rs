use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Points closer than this in both coordinates are treated as one.
const DOMINANCE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub fn new(r1: f64, r2: f64) -> Self {
        RatePoint { r1, r2 }
    }

    pub fn swapped(self) -> RatePoint {
        RatePoint::new(self.r2, self.r1)
    }
}

fn cross(o: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

fn by_coordinates(a: &RatePoint, b: &RatePoint) -> Ordering {
    a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2))
}

/// Provenance attached to a frontier.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrontierMeta {
    pub scheme: String,
    pub grid: String,
    pub directions: usize,
    /// Allocations (or parameter sets) whose region was empty.
    pub infeasible: usize,
    /// Allocations (or parameter sets) evaluated.
    pub evaluated: usize,
}

/// Pareto-optimal `(r1, r2)` points in bits per channel use, `r1` strictly
/// increasing and `r2` strictly decreasing.
///
/// A frontier stands for the region of points weakly dominated by the convex
/// hull of its points (the axes close it off); see [`Frontier::contains`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub points: Vec<RatePoint>,
    pub meta: FrontierMeta,
}

impl Frontier {
    /// Pareto reduction of arbitrary points (no convexification).
    pub fn from_points(points: impl IntoIterator<Item = RatePoint>) -> Frontier {
        Frontier {
            points: pareto_filter(points.into_iter().map(clamp).collect()),
            meta: FrontierMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: FrontierMeta) -> Frontier {
        self.meta = meta;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_r1(&self) -> f64 {
        self.points.iter().map(|p| p.r1).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.points.iter().map(|p| p.r2).fold(0.0, f64::max)
    }

    /// `max over points of w1*r1 + w2*r2`; zero for an empty frontier.
    pub fn support(&self, w1: f64, w2: f64) -> f64 {
        self.points
            .iter()
            .map(|p| w1 * p.r1 + w2 * p.r2)
            .fold(0.0, f64::max)
    }

    pub fn swapped(&self) -> Frontier {
        Frontier::from_points(self.points.iter().map(|p| p.swapped())).with_meta(self.meta.clone())
    }

    /// True when `p` lies in the region described by this frontier, allowing
    /// `tol` of slack.
    pub fn contains(&self, p: RatePoint, tol: f64) -> bool {
        if self.points.is_empty() {
            return false;
        }
        if p.r1 < -tol || p.r2 < -tol || p.r1 > self.max_r1() + tol || p.r2 > self.max_r2() + tol {
            return false;
        }
        let hull = pareto_merge_points(self.points.clone());
        hull.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            let len = ((b.r1 - a.r1).powi(2) + (b.r2 - a.r2).powi(2)).sqrt();
            // p must not be strictly left of a->b (above the edge)
            cross(a, b, p) <= tol * len
        })
    }

    /// Chebyshev distance from `p` to the region; zero inside.
    pub fn distance_linf(&self, p: RatePoint) -> f64 {
        if self.points.is_empty() {
            return f64::INFINITY;
        }
        if self.contains(p, 0.0) {
            return 0.0;
        }
        // for a downward-closed region the closest point in the sup norm is
        // reached moving diagonally toward the origin
        let shifted = |t: f64| RatePoint::new((p.r1 - t).max(0.0), (p.r2 - t).max(0.0));
        let (mut lo, mut hi) = (0.0, p.r1.max(p.r2).max(0.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.contains(shifted(mid), 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Directionwise dominance: every support value of `self` is at most that
    /// of `other` plus `tol`, over `directions` angles in `[0, pi/2]`.
    pub fn dominated_by(&self, other: &Frontier, directions: usize, tol: f64) -> bool {
        self.max_support_excess(other, directions) <= tol
    }

    /// Largest `h_self(theta) - h_other(theta)` over sampled angles.
    pub fn max_support_excess(&self, other: &Frontier, directions: usize) -> f64 {
        direction_weights(directions.max(2))
            .into_iter()
            .map(|(w1, w2)| self.support(w1, w2) - other.support(w1, w2))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `count` unit weight pairs at angles uniformly spaced over `[0, pi/2]`,
/// endpoints included. Mirror-image angles give exactly swapped pairs.
pub fn direction_weights(count: usize) -> Vec<(f64, f64)> {
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            let mirror = count - 1 - i;
            if i == mirror {
                (
                    std::f64::consts::FRAC_1_SQRT_2,
                    std::f64::consts::FRAC_1_SQRT_2,
                )
            } else if i < mirror {
                let theta = std::f64::consts::FRAC_PI_2 * i as f64 / last;
                (theta.cos(), theta.sin())
            } else {
                let theta = std::f64::consts::FRAC_PI_2 * mirror as f64 / last;
                (theta.sin(), theta.cos())
            }
        })
        .collect()
}

fn clamp(p: RatePoint) -> RatePoint {
    // numerical noise from the solver can leave values a hair below zero
    RatePoint::new(p.r1.max(0.0), p.r2.max(0.0))
}

fn usable(p: &RatePoint) -> bool {
    p.r1.is_finite() && p.r2.is_finite()
}

/// Keeps points not dominated by another point, ordered by increasing `r1`.
pub fn pareto_filter(mut points: Vec<RatePoint>) -> Vec<RatePoint> {
    points.retain(usable);
    // descending r1, then descending r2
    points.sort_by(|a, b| by_coordinates(b, a));
    let mut kept: Vec<RatePoint> = Vec::new();
    let mut best_r2 = f64::NEG_INFINITY;
    for p in points {
        if p.r2 > best_r2 + DOMINANCE_EPS {
            best_r2 = p.r2;
            kept.push(p);
        }
    }
    kept.reverse();
    kept
}

/// Pareto vertices of the convex hull of `points` together with their
/// projections onto both axes.
pub fn pareto_merge_points(points: Vec<RatePoint>) -> Vec<RatePoint> {
    let mut pts: Vec<RatePoint> = points.into_iter().filter(usable).map(clamp).collect();
    if pts.is_empty() {
        return pts;
    }
    let max_r1 = pts.iter().map(|p| p.r1).fold(0.0, f64::max);
    let max_r2 = pts.iter().map(|p| p.r2).fold(0.0, f64::max);
    // projections of the extreme points dominate all other projections
    pts.push(RatePoint::new(0.0, max_r2));
    pts.push(RatePoint::new(max_r1, 0.0));

    pts.sort_by(by_coordinates);
    // highest r2 per distinct r1
    let mut column_tops: Vec<RatePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        match column_tops.last_mut() {
            Some(last) if last.r1 == p.r1 => *last = p,
            _ => column_tops.push(p),
        }
    }

    let mut hull: Vec<RatePoint> = Vec::with_capacity(column_tops.len());
    for p in column_tops {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    pareto_filter(hull)
}

/// Pareto frontier of the convex closure of the union of all inputs,
/// including time sharing with silence.
pub fn pareto_merge(frontiers: &[Frontier]) -> Frontier {
    let points = frontiers
        .iter()
        .flat_map(|f| f.points.iter().copied())
        .collect();
    let mut meta = FrontierMeta::default();
    for f in frontiers {
        meta.infeasible += f.meta.infeasible;
        meta.evaluated += f.meta.evaluated;
    }
    Frontier {
        points: pareto_merge_points(points),
        meta,
    }
}
