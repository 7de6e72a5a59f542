//! Force-directed layout of the bipartite incidence graph and convex hulls
//! for the Venn view.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hypergraph::Hypergraph;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ITERATIONS: usize = 300;
pub const DEFAULT_MARGIN: f64 = 0.15;
/// Segments per half circle when rounding hull corners.
pub const ARC_SEGMENTS: usize = 16;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutConfig {
    pub seed: u64,
    pub iterations: usize,
    pub margin: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            seed: DEFAULT_SEED,
            iterations: DEFAULT_ITERATIONS,
            margin: DEFAULT_MARGIN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub seed: u64,
    pub iterations: usize,
    pub vertices: Vec<Point>,
    /// Positions of the hyperedge nodes of the bipartite view.
    pub hyperedges: Vec<Point>,
}

impl Layout {
    /// All positions, vertices first.
    pub fn positions(&self) -> impl Iterator<Item = &Point> {
        self.vertices.iter().chain(&self.hyperedges)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullPolygon {
    pub edge: usize,
    /// Counterclockwise, without repeating the first point.
    pub points: Vec<Point>,
    pub margin: f64,
}

/// Fruchterman-Reingold spring embedding of the incidence graph. Node `i`
/// for `i < n` is vertex `i`; node `n + j` is hyperedge `j`. The result is
/// translated so the centroid sits at the origin.
pub fn bipartite_layout(h: &Hypergraph, seed: u64, iterations: usize) -> Layout {
    let n = h.vertex_count();
    let total = n + h.edge_count();
    let links: Vec<(usize, usize)> = h
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(j, e)| e.members.iter().map(move |v| (v.0, n + j)))
        .collect();

    let k = 1.0;
    let side = (total as f64).sqrt() * k * 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<Point> = (0..total)
        .map(|_| {
            [
                rng.random_range(-0.5..0.5) * side,
                rng.random_range(-0.5..0.5) * side,
            ]
        })
        .collect();

    let start_temperature = side / 10.0;
    let mut disp = vec![[0.0f64; 2]; total];
    for it in 0..iterations {
        let temperature = start_temperature * (1.0 - it as f64 / iterations as f64);
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);
        for a in 0..total {
            for b in a + 1..total {
                let (dx, dy, dist) = separation(&pos, a, b);
                let force = k * k / dist;
                let (fx, fy) = (dx / dist * force, dy / dist * force);
                disp[a][0] += fx;
                disp[a][1] += fy;
                disp[b][0] -= fx;
                disp[b][1] -= fy;
            }
        }
        for &(a, b) in &links {
            let (dx, dy, dist) = separation(&pos, a, b);
            let force = dist * dist / k;
            let (fx, fy) = (dx / dist * force, dy / dist * force);
            disp[a][0] -= fx;
            disp[a][1] -= fy;
            disp[b][0] += fx;
            disp[b][1] += fy;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = d[0].hypot(d[1]);
            if len > 0.0 {
                let step = len.min(temperature);
                p[0] += d[0] / len * step;
                p[1] += d[1] / len * step;
            }
        }
    }

    if total > 0 {
        let cx = pos.iter().map(|p| p[0]).sum::<f64>() / total as f64;
        let cy = pos.iter().map(|p| p[1]).sum::<f64>() / total as f64;
        for p in &mut pos {
            p[0] -= cx;
            p[1] -= cy;
        }
    }
    let hyperedges = pos.split_off(n);
    Layout {
        seed,
        iterations,
        vertices: pos,
        hyperedges,
    }
}

/// Offset from `b` to `a` and its length; coincident nodes get a small
/// index-dependent nudge.
fn separation(pos: &[Point], a: usize, b: usize) -> (f64, f64, f64) {
    let (mut dx, mut dy) = (pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]);
    let mut dist = dx.hypot(dy);
    if dist < 1e-9 {
        let angle = (a * 31 + b * 17) as f64;
        dx = 1e-3 * angle.cos();
        dy = 1e-3 * angle.sin();
        dist = 1e-3;
    }
    (dx, dy, dist)
}

/// Convex hull of every hyperedge's member positions, grown outward by
/// `margin`. Corners are rounded with a circumscribed polygon so every
/// boundary point keeps at least `margin` from the members. Empty hyperedges
/// get no polygon. With zero margin, one- and two-member hyperedges yield a
/// degenerate point or segment.
pub fn venn_hulls(h: &Hypergraph, layout: &Layout, margin: f64) -> Vec<HullPolygon> {
    let steps = 2 * ARC_SEGMENTS;
    let radius = margin / (PI / steps as f64).cos();
    let disc: Vec<Point> = (0..steps)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / steps as f64;
            [radius * a.cos(), radius * a.sin()]
        })
        .collect();
    h.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.members.is_empty())
        .map(|(j, e)| {
            let centers = e.members.iter().map(|v| layout.vertices[v.0]);
            let cloud: Vec<Point> = if margin > 0.0 {
                centers
                    .flat_map(|c| disc.iter().map(move |d| [c[0] + d[0], c[1] + d[1]]))
                    .collect()
            } else {
                centers.collect()
            };
            HullPolygon {
                edge: j,
                points: convex_hull(cloud),
                margin,
            }
        })
        .collect()
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
pub fn convex_hull(mut points: Vec<Point>) -> Vec<Point> {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    points.dedup();
    if points.len() < 3 {
        return points;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(points.len() * 2);
    for pass in 0..2 {
        let floor = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(points.iter())
        } else {
            Box::new(points.iter().rev())
        };
        for &p in iter {
            while hull.len() >= floor + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inside_or_on(poly: &[Point], p: Point) -> bool {
        (0..poly.len()).all(|i| cross(poly[i], poly[(i + 1) % poly.len()], p) >= -1e-9)
    }

    #[test]
    fn single_vertex_sits_at_origin() {
        let h = Hypergraph::from_member_lists(["a"], Vec::<(String, Vec<usize>)>::new()).unwrap();
        let l = bipartite_layout(&h, 7, 300);
        assert_eq!(l.vertices, vec![[0.0, 0.0]]);
        assert!(l.hyperedges.is_empty());
    }

    #[test]
    fn layout_is_deterministic() {
        let h = crate::hypergraph::fig4();
        let a = bipartite_layout(&h, 42, 100);
        let b = bipartite_layout(&h, 42, 100);
        assert_eq!(a, b);
        assert_ne!(a, bipartite_layout(&h, 43, 100));
        assert!(a.positions().all(|p| p[0].is_finite() && p[1].is_finite()));
    }

    #[test]
    fn triangle_hull_without_margin() {
        let h = Hypergraph::from_member_lists(["a", "b", "c"], [("e".to_string(), vec![0, 1, 2])]).unwrap();
        let l = Layout {
            seed: 0,
            iterations: 0,
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            hyperedges: vec![[0.3, 0.3]],
        };
        let hulls = venn_hulls(&h, &l, 0.0);
        assert_eq!(hulls[0].points, vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn single_member_hull_is_a_disc() {
        let h = Hypergraph::from_member_lists(["a"], [("e".to_string(), vec![0])]).unwrap();
        let l = Layout {
            seed: 0,
            iterations: 0,
            vertices: vec![[2.0, -1.0]],
            hyperedges: vec![[0.0, 0.0]],
        };
        let hull = &venn_hulls(&h, &l, 0.5)[0];
        assert_eq!(hull.points.len(), 2 * ARC_SEGMENTS);
        for p in &hull.points {
            let r = (p[0] - 2.0).hypot(p[1] + 1.0);
            assert!(r >= 0.5 && r < 0.51);
        }
    }

    #[test]
    fn hulls_contain_members_and_are_convex() {
        let h = crate::hypergraph::fig4();
        let l = bipartite_layout(&h, 42, 300);
        for hull in venn_hulls(&h, &l, 0.2) {
            let pts = &hull.points;
            for v in &h.edges()[hull.edge].members {
                assert!(inside_or_on(pts, l.vertices[v.0]));
            }
            for i in 0..pts.len() {
                let c = cross(pts[i], pts[(i + 1) % pts.len()], pts[(i + 2) % pts.len()]);
                assert!(c > 0.0);
            }
        }
    }

    #[test]
    fn empty_edges_get_no_hull() {
        let h = Hypergraph::from_member_lists(["a"], [("e".to_string(), vec![])]).unwrap();
        let l = bipartite_layout(&h, 1, 10);
        assert!(venn_hulls(&h, &l, 0.1).is_empty());
    }
}
