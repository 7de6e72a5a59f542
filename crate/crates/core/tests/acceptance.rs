//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use hypersimplify::graph::{clique_expansion, line_graph};
use hypersimplify::layout::{self, Layout};
use hypersimplify::metrics::{self, Drawing};
use hypersimplify::persistence::{
    bottleneck_distance, compute_barcode, epsilon_partition, simplified_barcode,
};
use hypersimplify::{simplify, Side, SimplificationParams, SingletonMode, WeightScheme, WeightedGraph};
use rand::Rng;

use common::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Jaccard weights of every pair of sets, as reduced fractions.
fn jaccard_oracle(sets: &[BTreeSet<usize>]) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let inter = sets[i].intersection(&sets[j]).count();
            if inter > 0 {
                let union = sets[i].union(&sets[j]).count();
                let g = gcd(inter, union);
                out.push((i, j, inter / g, union / g));
            }
        }
    }
    out
}

fn matches_oracle(g: &WeightedGraph, oracle: &[(usize, usize, usize, usize)]) -> Result<(), String> {
    ensure(g.edges.len() == oracle.len(), || {
        format!("{} edges, oracle has {}", g.edges.len(), oracle.len())
    })?;
    for (e, &(a, b, p, q)) in g.edges.iter().zip(oracle) {
        // Division of exact integers is correctly rounded, so the nearest
        // double to p/q is unique.
        ensure(
            (e.source, e.target) == (a, b) && e.weight == p as f64 / q as f64,
            || format!("edge ({}, {}) weight {} != {p}/{q}", e.source, e.target, e.weight),
        )?;
    }
    Ok(())
}

fn fig4_weights() -> Check {
    let h = fig4();
    let lg = line_graph(&h, 1, WeightScheme::Jaccard).map_err(|e| e.to_string())?;
    ensure(lg.weight(0, 1) == Some(2.0 / 3.0), || format!("w(e1,e2) = {:?}", lg.weight(0, 1)))?;
    let ce = clique_expansion(&h, 1, WeightScheme::Jaccard).map_err(|e| e.to_string())?;
    ensure(ce.weight(0, 1) == Some(0.5), || format!("w(v1,v2) = {:?}", ce.weight(0, 1)))?;

    let edge_sets: Vec<BTreeSet<usize>> =
        h.edges().iter().map(|e| e.members.iter().map(|v| v.0).collect()).collect();
    let vertex_sets: Vec<BTreeSet<usize>> = (0..h.vertex_count())
        .map(|v| h.memberships(hypersimplify::VertexId(v)).iter().map(|e| e.0).collect())
        .collect();
    matches_oracle(&lg, &jaccard_oracle(&edge_sets)).map_err(|e| format!("line graph: {e}"))?;
    matches_oracle(&ce, &jaccard_oracle(&vertex_sets)).map_err(|e| format!("clique expansion: {e}"))?;
    Ok(format!(
        "w(e1,e2)=2/3, w(v1,v2)=1/2; {} + {} weights equal the rational oracle",
        lg.edges.len(),
        ce.edges.len()
    ))
}

fn fig7_barcode() -> Check {
    let (b, _) = compute_barcode(&fig7());
    let finite = b.finite_lengths();
    ensure(finite.len() == 4, || format!("{} finite bars", finite.len()))?;
    ensure(finite[0] == 1.5, || format!("shortest bar {}", finite[0]))?;
    Ok(format!("finite bars {finite:?}"))
}

fn stability() -> Check {
    let start = Instant::now();
    let mut rng = rng(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let density = rng.random_range(0.05..0.5);
        let g = random_weighted_graph(&mut rng, 30, density);
        let (b, _) = compute_barcode(&g);
        let eps = if i % 4 == 0 && !b.finite_lengths().is_empty() {
            // Exactly on a bar length, the tie case.
            let lengths = b.finite_lengths();
            lengths[rng.random_range(0..lengths.len())]
        } else {
            rng.random_range(0.0..10.0)
        };
        let d = bottleneck_distance(&b, &simplified_barcode(&b, eps));
        ensure(d <= eps, || format!("graph {i}: distance {d} > epsilon {eps}"))?;
        worst = worst.max(if eps > 0.0 { d / eps } else { 0.0 });
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("200 graphs, 0 violations, max d/eps {worst:.3}, {elapsed:.2?}"))
}

fn slc_oracle() -> Check {
    let mut rng = rng(0x5eed_0002);
    let mut cuts = 0;
    for i in 0..100 {
        let density = rng.random_range(0.1..0.6);
        let g = random_weighted_graph(&mut rng, 15, density);
        let (_, dendrogram) = compute_barcode(&g);
        let distances: Vec<f64> = g.edges.iter().map(|e| 1.0 / e.weight).collect();
        for k in 0..5 {
            let eps = if k % 2 == 1 && !distances.is_empty() {
                distances[rng.random_range(0..distances.len())]
            } else {
                rng.random_range(0.0..8.0)
            };
            let p = epsilon_partition(&dendrogram, eps, &BTreeSet::new()).map_err(|e| e.to_string())?;
            let expected = naive_single_linkage(&g, eps);
            ensure(canonical(p.classes.clone()) == expected, || {
                format!("graph {i}, eps {eps}: {:?} != {expected:?}", p.classes)
            })?;
            cuts += 1;
        }
    }
    Ok(format!("{cuts} cuts, 0 mismatches"))
}

fn duality() -> Check {
    let mut rng = rng(0x5eed_0003);
    let mut nonempty = 0;
    for i in 0..100 {
        let p = rng.random_range(0.1..0.7);
        let h = random_hypergraph(&mut rng, 12, 8, p);
        let s = rng.random_range(1..=3);
        for scheme in [WeightScheme::Jaccard, WeightScheme::Overlap] {
            let a = clique_expansion(&h, s, scheme).map_err(|e| e.to_string())?;
            let b = line_graph(&h.dual(), s, scheme).map_err(|e| e.to_string())?;
            ensure(
                a.node_ids == b.node_ids && a.labels == b.labels && a.edges == b.edges && a.singleton == b.singleton,
                || format!("hypergraph {i}, s={s}, {scheme:?}: representations differ"),
            )?;
            nonempty += usize::from(!a.edges.is_empty());
        }
    }
    Ok(format!("100 hypergraphs x 2 schemes equal ({nonempty} with edges)"))
}

fn southern_women_checks() -> Check {
    let h = southern_women();
    ensure(
        (h.vertex_count(), h.edge_count(), h.incidence_count()) == (18, 14, 89),
        || "dataset is not 18 x 14 with 89 incidences".into(),
    )?;

    // (a) exact collapse of identical attendance.
    let records = h.collapse_vertices().records();
    let merged: Vec<Vec<String>> = records.iter().map(|r| labels_of(&h, &r.constituents)).collect();
    ensure(merged == vec![vec!["Olivia".to_string(), "Flora".to_string()]], || {
        format!("(a) collapsed groups {merged:?}")
    })?;

    // (b) overlap, s = 1, eps = 0.28 after exact collapse.
    let p = SimplificationParams::new(Side::Vertex)
        .with_weight(WeightScheme::Overlap)
        .with_epsilon(0.28)
        .with_collapse(true, false);
    let r = simplify(&h, &p).map_err(|e| e.to_string())?;
    let groups: Vec<Vec<&str>> = (0..r.class_count()).map(|c| r.class_labels(c).unwrap()).collect();
    ensure(groups.len() == 5, || format!("(b) {} groups: {groups:?}", groups.len()))?;
    let core = ["Laura", "Brenda", "Evelyn", "Theresa"];
    ensure(groups.iter().any(|g| core.iter().all(|w| g.contains(w))), || {
        format!("(b) core split: {groups:?}")
    })?;
    ensure(groups.iter().any(|g| g.contains(&"Flora") && g.contains(&"Olivia")), || {
        format!("(b) Flora/Olivia split: {groups:?}")
    })?;
    let multi = groups.iter().filter(|g| g.len() > 1).count();

    // (c) Jaccard, s = 4, filter, cut where two super-vertices remain.
    let p = SimplificationParams::new(Side::Vertex)
        .with_s(4)
        .with_singletons(SingletonMode::Filter);
    let r0 = simplify(&h, &p).map_err(|e| e.to_string())?;
    let top = r0.barcode.finite_lengths().last().copied().ok_or("(c) no finite bars")?;
    let r = r0.with_epsilon(top).map_err(|e| e.to_string())?;
    ensure(r.class_count() == 2, || format!("(c) {} classes", r.class_count()))?;
    let excluded: HashSet<&str> = r
        .correspondence
        .original_to_simplified
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(v, _)| h.vertex_labels()[v].as_str())
        .collect();
    let expected: HashSet<&str> = ["Dorothy", "Olivia", "Flora", "Pearl"].into();
    ensure(excluded == expected, || format!("(c) excluded {excluded:?}"))?;

    Ok(format!(
        "(a) Olivia=Flora; (b) 5 groups, {multi} with several members, core together; (c) 2 super-vertices, excluded {{Dorothy, Olivia, Flora, Pearl}}"
    ))
}

fn orient(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> i64 {
    ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).signum()
}

fn oracle_crossings(pos: &[[i64; 2]], edges: &[(usize, usize)]) -> usize {
    let mut count = 0;
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = (pos[edges[i].0], pos[edges[i].1]);
            let (c, d) = (pos[edges[j].0], pos[edges[j].1]);
            if orient(a, b, c) * orient(a, b, d) == -1 && orient(c, d, a) * orient(c, d, b) == -1 {
                count += 1;
            }
        }
    }
    count
}

fn transform(l: &Layout, theta: f64, dx: f64, dy: f64) -> Layout {
    let (s, c) = theta.sin_cos();
    let f = |p: &[f64; 2]| [c * p[0] - s * p[1] + dx, s * p[0] + c * p[1] + dy];
    Layout {
        vertices: l.vertices.iter().map(f).collect(),
        hyperedges: l.hyperedges.iter().map(f).collect(),
        ..l.clone()
    }
}

fn metrics_suite() -> Check {
    let mut rng = rng(0x5eed_0004);

    // Range bounds on random layouts.
    for i in 0..100 {
        let h = random_hypergraph(&mut rng, 10, 6, 0.4);
        let l = Layout {
            seed: 0,
            iterations: 0,
            vertices: (0..h.vertex_count()).map(|_| [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]).collect(),
            hyperedges: (0..h.edge_count()).map(|_| [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]).collect(),
        };
        let m = metrics::evaluate(&h, &l, 0.2);
        for (name, v) in [("m_c", m.m_c), ("m_l", m.m_l), ("m_a", m.m_a)] {
            ensure((0.0..=1.0).contains(&v), || format!("layout {i}: {name} = {v}"))?;
        }
    }

    // Crossing count against exact integer arithmetic on a small grid,
    // where touching and collinear pairs are common.
    for i in 0..200 {
        let n = rng.random_range(2..12);
        let pos: Vec<[i64; 2]> = (0..n).map(|_| [rng.random_range(0..5), rng.random_range(0..5)]).collect();
        let edges: Vec<(usize, usize)> = (0..rng.random_range(1..15))
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
            .filter(|(a, b)| a != b)
            .collect();
        let d = Drawing {
            positions: pos.iter().map(|p| [p[0] as f64, p[1] as f64]).collect(),
            edges: edges.clone(),
        };
        let (got, want) = (metrics::crossing_count(&d), oracle_crossings(&pos, &edges));
        ensure(got == want, || format!("grid drawing {i}: c = {got}, oracle {want}"))?;
    }

    // Hand-built layouts against the formulas.
    let two = Drawing {
        positions: vec![[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]],
        edges: vec![(0, 1), (0, 2)],
    };
    // Equal lengths; 60 degrees at node 0 against an ideal of 180.
    ensure(metrics::edge_length_variation(&two).abs() < 1e-12, || "m_l of 2-edge".into())?;
    let want = 1.0 - (180.0 - 60.0) / 180.0;
    ensure((metrics::minimum_angle_metric(&two) - want).abs() < 1e-12, || {
        format!("m_a of 2-edge {}", metrics::minimum_angle_metric(&two))
    })?;
    let three = Drawing {
        positions: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [-4.0, 0.0]],
        edges: vec![(0, 1), (0, 2), (0, 3)],
    };
    let lengths = [1.0f64, 2.0, 4.0];
    let mean = lengths.iter().sum::<f64>() / 3.0;
    let sigma = (lengths.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (3.0 * mean * mean)).sqrt();
    let want_l = sigma / 2f64.sqrt();
    ensure((metrics::edge_length_variation(&three) - want_l).abs() < 1e-12, || {
        format!("m_l of 3-edge {} vs {want_l}", metrics::edge_length_variation(&three))
    })?;
    let want_a = 1.0 - (120.0 - 90.0) / 120.0;
    ensure((metrics::minimum_angle_metric(&three) - want_a).abs() < 1e-12, || {
        format!("m_a of 3-edge {}", metrics::minimum_angle_metric(&three))
    })?;

    // Rigid motions. Hull discs are axis-aligned 32-gons, so m_i is checked
    // under quarter turns, which map them onto themselves.
    for i in 0..50 {
        let h = random_hypergraph(&mut rng, 9, 5, 0.4);
        let l = layout::bipartite_layout(&h, i, 50);
        let base = metrics::evaluate(&h, &l, 0.2);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let (dx, dy) = (rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
        let moved = metrics::evaluate(&h, &transform(&l, theta, dx, dy), 0.2);
        for (name, a, b) in [("m_c", base.m_c, moved.m_c), ("m_l", base.m_l, moved.m_l), ("m_a", base.m_a, moved.m_a)] {
            ensure((a - b).abs() < 1e-9, || format!("layout {i}: {name} {a} -> {b}"))?;
        }
        let turned = metrics::evaluate(&h, &transform(&l, std::f64::consts::FRAC_PI_2, dx, dy), 0.2);
        ensure(turned.m_i == base.m_i, || format!("layout {i}: m_i {} -> {}", base.m_i, turned.m_i))?;
    }
    Ok("bounds on 100 layouts, c = oracle on 200 grid drawings, formulas to 1e-12, rigid motions to 1e-9".into())
}

fn cli_determinism() -> Check {
    let exe = env!("CARGO_BIN_EXE_hypersimplify");
    let sw = data_path("southern_women.csv");
    let fig4 = data_path("fig4.json");
    let sw = sw.to_str().unwrap();
    let fig4 = fig4.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["simplify", "--input", sw, "--side", "vertex", "--weight", "overlap", "--epsilon", "0.28", "--collapse-vertices"],
        vec!["simplify", "--input", sw, "--side", "vertex", "--s", "4", "--singletons", "filter", "--epsilon", "2"],
        vec!["barcode", "--input", fig4, "--side", "edge"],
        vec!["metrics", "--input", sw, "--side", "vertex", "--epsilon", "1.6"],
        vec!["simplify", "--input", sw, "--epsilon", "1.6", "--emit", "svg"],
        vec!["components", "--input", sw, "--side", "vertex", "--s", "4"],
    ];
    let mut bytes = 0;
    for args in &runs {
        let once = || Command::new(exe).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (once()?, once()?);
        ensure(a.status.success() && b.status.success(), || {
            format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr))
        })?;
        ensure(a.stdout == b.stdout, || format!("{args:?}: outputs differ"))?;
        bytes += a.stdout.len();
    }
    Ok(format!("{} invocations, {bytes} bytes identical across runs", runs.len()))
}

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("fig4 weights", fig4_weights),
        ("fig7 barcode", fig7_barcode),
        ("stability", stability),
        ("single-linkage oracle", slc_oracle),
        ("duality", duality),
        ("southern women", southern_women_checks),
        ("metrics properties", metrics_suite),
        ("cli determinism", cli_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_text(p))));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
