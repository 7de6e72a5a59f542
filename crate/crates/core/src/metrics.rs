//! Aesthetic criteria for hypergraph drawings.
//!
//! `m_i` counts crossings between hull boundaries in the Venn view; the other
//! three score the straight-line bipartite view. Crossing tests use exact
//! orientation predicates, and segments that only touch, share an endpoint
//! or overlap collinearly do not count as crossing.

use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::hypergraph::Hypergraph;
use crate::layout::{self, HullPolygon, Layout, LayoutConfig, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub m_i: usize,
    pub m_c: f64,
    pub m_l: f64,
    pub m_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsComparison {
    pub before: MetricsReport,
    pub after: MetricsReport,
}

/// A straight-line drawing of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Drawing {
    pub positions: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
}

impl Drawing {
    /// The bipartite incidence drawing: vertex nodes first, then hyperedge
    /// nodes, one segment per incidence.
    pub fn incidence(h: &Hypergraph, layout: &Layout) -> Drawing {
        let n = h.vertex_count();
        Drawing {
            positions: layout.positions().copied().collect(),
            edges: h
                .edges()
                .iter()
                .enumerate()
                .flat_map(|(j, e)| e.members.iter().map(move |v| (v.0, n + j)))
                .collect(),
        }
    }

    fn segment(&self, e: (usize, usize)) -> (Point, Point) {
        (self.positions[e.0], self.positions[e.1])
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.positions.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

fn orientation(a: Point, b: Point, c: Point) -> f64 {
    orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    )
}

fn opposite(p: f64, q: f64) -> bool {
    (p > 0.0 && q < 0.0) || (p < 0.0 && q > 0.0)
}

/// True when the open segments cross at a single interior point.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    opposite(orientation(a, b, c), orientation(a, b, d))
        && opposite(orientation(c, d, a), orientation(c, d, b))
}

fn boundary(points: &[Point]) -> Vec<(Point, Point)> {
    match points.len() {
        0 | 1 => Vec::new(),
        2 => vec![(points[0], points[1])],
        n => (0..n).map(|i| (points[i], points[(i + 1) % n])).collect(),
    }
}

/// Number of crossings between boundary segments of different hulls.
pub fn contour_intersections(hulls: &[HullPolygon]) -> usize {
    let rings: Vec<Vec<(Point, Point)>> = hulls.iter().map(|h| boundary(&h.points)).collect();
    let mut count = 0;
    for (i, a) in rings.iter().enumerate() {
        for b in &rings[i + 1..] {
            for &(p, q) in a {
                count += b.iter().filter(|&&(r, s)| segments_cross(p, q, r, s)).count();
            }
        }
    }
    count
}

/// Unordered pairs of drawing edges that cross.
pub fn crossing_count(d: &Drawing) -> usize {
    let segs: Vec<(Point, Point)> = d.edges.iter().map(|&e| d.segment(e)).collect();
    let mut count = 0;
    for (i, &(a, b)) in segs.iter().enumerate() {
        count += segs[i + 1..]
            .iter()
            .filter(|&&(c, e)| segments_cross(a, b, c, e))
            .count();
    }
    count
}

/// `1 - c / c_max`, or 1 when no pair of non-adjacent edges exists.
pub fn edge_crossings_metric(d: &Drawing) -> f64 {
    let m = d.edges.len() as f64;
    let adjacent: f64 = d.degrees().iter().map(|&k| (k * k.saturating_sub(1)) as f64).sum();
    let c_max = m * (m - 1.0) / 2.0 - adjacent / 2.0;
    if c_max > 0.0 {
        1.0 - crossing_count(d) as f64 / c_max
    } else {
        1.0
    }
}

/// Normalized standard deviation of edge lengths divided by its upper bound
/// `sqrt(|E| - 1)`. Zero for fewer than two edges.
pub fn edge_length_variation(d: &Drawing) -> f64 {
    let m = d.edges.len();
    if m < 2 {
        return 0.0;
    }
    let lengths: Vec<f64> = d
        .edges
        .iter()
        .map(|&e| {
            let (a, b) = d.segment(e);
            (a[0] - b[0]).hypot(a[1] - b[1])
        })
        .collect();
    let mean = lengths.iter().sum::<f64>() / m as f64;
    if mean == 0.0 {
        return 0.0;
    }
    let spread: f64 = lengths.iter().map(|l| (l - mean).powi(2)).sum();
    let sigma = (spread / (m as f64 * mean * mean)).sqrt();
    (sigma / ((m - 1) as f64).sqrt()).min(1.0)
}

/// `1 - d_theta`, where `d_theta` averages the relative shortfall of each
/// node's smallest angle from `360 / deg`. Nodes of degree below 2 have no
/// angle and are left out; with none left the score is 1.
pub fn minimum_angle_metric(d: &Drawing) -> f64 {
    let mut rays: Vec<Vec<f64>> = vec![Vec::new(); d.positions.len()];
    for &(a, b) in &d.edges {
        let (pa, pb) = (d.positions[a], d.positions[b]);
        rays[a].push((pb[1] - pa[1]).atan2(pb[0] - pa[0]).to_degrees());
        rays[b].push((pa[1] - pb[1]).atan2(pa[0] - pb[0]).to_degrees());
    }
    let mut total = 0.0;
    let mut eligible = 0usize;
    for mut angles in rays.into_iter().filter(|r| r.len() >= 2) {
        angles.sort_by(f64::total_cmp);
        let wrap = 360.0 - (angles[angles.len() - 1] - angles[0]);
        let smallest = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(wrap, f64::min);
        let ideal = 360.0 / angles.len() as f64;
        total += ((ideal - smallest) / ideal).abs();
        eligible += 1;
    }
    if eligible == 0 {
        1.0
    } else {
        1.0 - total / eligible as f64
    }
}

pub fn evaluate(h: &Hypergraph, layout: &Layout, margin: f64) -> MetricsReport {
    let drawing = Drawing::incidence(h, layout);
    MetricsReport {
        m_i: contour_intersections(&layout::venn_hulls(h, layout, margin)),
        m_c: edge_crossings_metric(&drawing),
        m_l: edge_length_variation(&drawing),
        m_a: minimum_angle_metric(&drawing),
    }
}

/// Scores the original and simplified hypergraphs, each under its own layout
/// from the same seed.
pub fn before_after(original: &Hypergraph, simplified: &Hypergraph, config: &LayoutConfig) -> MetricsComparison {
    let score = |h: &Hypergraph| {
        let l = layout::bipartite_layout(h, config.seed, config.iterations);
        evaluate(h, &l, config.margin)
    };
    MetricsComparison {
        before: score(original),
        after: score(simplified),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: f64, y: f64, side: f64, edge: usize) -> HullPolygon {
        HullPolygon {
            edge,
            points: vec![[x, y], [x + side, y], [x + side, y + side], [x, y + side]],
            margin: 0.0,
        }
    }

    #[test]
    fn hull_crossings() {
        assert_eq!(contour_intersections(&[square(0.0, 0.0, 1.0, 0), square(5.0, 5.0, 1.0, 1)]), 0);
        assert_eq!(contour_intersections(&[square(0.0, 0.0, 2.0, 0), square(1.0, 1.0, 2.0, 1)]), 2);
        assert_eq!(contour_intersections(&[square(0.0, 0.0, 2.0, 0), square(0.0, 0.0, 2.0, 1)]), 0);
        assert_eq!(contour_intersections(&[]), 0);
    }

    #[test]
    fn k4_with_one_crossing() {
        let d = Drawing {
            positions: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
        };
        assert_eq!(crossing_count(&d), 1);
        assert_eq!(edge_crossings_metric(&d), 1.0 - 1.0 / 3.0);
    }

    #[test]
    fn star_and_planar_score_one() {
        let star = Drawing {
            positions: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]],
            edges: vec![(0, 1), (0, 2), (0, 3)],
        };
        assert_eq!(edge_crossings_metric(&star), 1.0);
        let path = Drawing {
            positions: vec![[0.0, 0.0], [1.0, 0.0], [2.0, 1.0], [3.0, 0.0]],
            edges: vec![(0, 1), (1, 2), (2, 3)],
        };
        assert_eq!(edge_crossings_metric(&path), 1.0);
    }

    #[test]
    fn length_variation_of_one_and_three() {
        let d = Drawing {
            positions: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 5.0], [3.0, 5.0]],
            edges: vec![(0, 1), (2, 3)],
        };
        assert_eq!(edge_length_variation(&d), 0.5);
        let equal = Drawing {
            positions: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]],
            edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(edge_length_variation(&equal), 0.0);
        let single = Drawing {
            positions: vec![[0.0, 0.0], [1.0, 0.0]],
            edges: vec![(0, 1)],
        };
        assert_eq!(edge_length_variation(&single), 0.0);
    }

    #[test]
    fn angle_cases() {
        let right = Drawing {
            positions: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            edges: vec![(0, 1), (0, 2)],
        };
        assert!((minimum_angle_metric(&right) - 0.5).abs() < 1e-12);
        let third = 2.0 * std::f64::consts::PI / 3.0;
        let tripod = Drawing {
            positions: vec![
                [0.0, 0.0],
                [1.0, 0.0],
                [third.cos(), third.sin()],
                [(2.0 * third).cos(), (2.0 * third).sin()],
            ],
            edges: vec![(0, 1), (0, 2), (0, 3)],
        };
        assert!((minimum_angle_metric(&tripod) - 1.0).abs() < 1e-12);
        let bare = Drawing {
            positions: vec![[0.0, 0.0], [1.0, 0.0]],
            edges: vec![(0, 1)],
        };
        assert_eq!(minimum_angle_metric(&bare), 1.0);
    }

    #[test]
    fn shared_endpoints_do_not_cross() {
        assert!(!segments_cross([0.0, 0.0], [1.0, 1.0], [1.0, 1.0], [2.0, 0.0]));
        assert!(!segments_cross([0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [3.0, 0.0]));
        assert!(!segments_cross([0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [1.0, 1.0]));
        assert!(segments_cross([0.0, 0.0], [2.0, 2.0], [0.0, 2.0], [2.0, 0.0]));
    }
}
