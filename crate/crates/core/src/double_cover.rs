//! The double of a graph (every edge taken twice), its parameterizations by
//! closed walks, and their total curvature.
//!
//! A parameterization is determined by a perfect matching of the edge-copy ends
//! at every vertex: the walk arriving through one end leaves through its partner.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph_model::{Point3, SpatialGraph, UnitVector};
use crate::vertex_curvature::exterior_angle;

pub const DEFAULT_MAX_VALENCE: usize = 6;

/// One end of one copy of a base edge. `side` is 0 at `from`, 1 at `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndId {
    pub edge: usize,
    pub side: u8,
    pub copy: u8,
}

impl EndId {
    pub fn label(&self, g: &SpatialGraph) -> String {
        let side = if self.side == 0 { "from" } else { "to" };
        format!("{}.{}.{}", g.edges()[self.edge].label, side, self.copy)
    }

    /// True when `self` and `o` are the two copies of the same base end.
    pub fn is_twin(&self, o: &EndId) -> bool {
        self.edge == o.edge && self.side == o.side && self.copy != o.copy
    }
}

/// The double of a graph: per vertex, its `2d` edge-copy ends.
#[derive(Debug, Clone)]
pub struct DoubledGraph<'a> {
    pub base: &'a SpatialGraph,
    /// Ends at each base vertex, sorted by `(edge, side, copy)`.
    pub ends: Vec<Vec<EndId>>,
}

impl DoubledGraph<'_> {
    pub fn valence(&self, vertex: usize) -> usize {
        self.ends[vertex].len()
    }

    pub fn edge_copies(&self) -> usize {
        2 * self.base.edges().len()
    }
}

pub fn double_graph(g: &SpatialGraph) -> DoubledGraph<'_> {
    let mut ends = vec![Vec::new(); g.vertices().len()];
    for (k, e) in g.edges().iter().enumerate() {
        for copy in 0..2 {
            ends[e.from].push(EndId {
                edge: k,
                side: 0,
                copy,
            });
            ends[e.to].push(EndId {
                edge: k,
                side: 1,
                copy,
            });
        }
    }
    for list in &mut ends {
        list.sort();
    }
    DoubledGraph { base: g, ends }
}

/// Unit tangent at the vertex pointing into the edge through `end`.
fn end_tangent(g: &SpatialGraph, end: EndId) -> UnitVector {
    let chain = g.edge_chain(end.edge);
    let (a, b): (Point3, Point3) = if end.side == 0 {
        (chain[0], chain[1])
    } else {
        (chain[chain.len() - 1], chain[chain.len() - 2])
    };
    UnitVector::normalize(b - a).expect("segments have positive length")
}

/// A perfect matching of the ends at every vertex. `pairs[v]` holds index pairs
/// `(i, j)`, `i < j`, into `DoubledGraph::ends[v]`, sorted by `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPairing {
    pub pairs: Vec<Vec<(usize, usize)>>,
}

impl VertexPairing {
    pub fn self_pairs(&self, d: &DoubledGraph) -> usize {
        self.pairs
            .iter()
            .enumerate()
            .map(|(v, ps)| {
                ps.iter()
                    .filter(|&&(i, j)| d.ends[v][i].is_twin(&d.ends[v][j]))
                    .count()
            })
            .sum()
    }

    /// Per vertex, the matched pairs as end labels.
    pub fn to_json(&self, d: &DoubledGraph) -> serde_json::Value {
        let g = d.base;
        serde_json::Value::Array(
            self.pairs
                .iter()
                .enumerate()
                .map(|(v, ps)| {
                    serde_json::json!({
                        "vertex": g.vertices()[v].label,
                        "pairs": ps
                            .iter()
                            .map(|&(i, j)| [d.ends[v][i].label(g), d.ends[v][j].label(g)])
                            .collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

/// All perfect matchings of `0..n` (n even), in lexicographic order of their pair lists.
pub fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        free: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for k in 0..free.len() {
            let b = free.remove(k);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(k, b);
        }
        free.insert(0, a);
    }
    assert!(n.is_multiple_of(2), "matchings need an even number of ends");
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Matchings of the ends at one vertex. Without `allow_self`, matchings containing a
/// twin pair are skipped, except at a valence-1 vertex where the twin pair is the
/// only matching.
pub fn vertex_matchings(ends: &[EndId], allow_self: bool) -> Vec<Vec<(usize, usize)>> {
    let all = perfect_matchings(ends.len());
    if allow_self || ends.len() <= 2 {
        return all;
    }
    all.into_iter()
        .filter(|m| m.iter().all(|&(i, j)| !ends[i].is_twin(&ends[j])))
        .collect()
}

fn check_valences(d: &DoubledGraph, max_valence: usize) -> Result<()> {
    for (v, ends) in d.ends.iter().enumerate() {
        if ends.len() / 2 > max_valence {
            return Err(Error::ValenceTooLarge {
                vertex: d.base.vertices()[v].label.clone(),
                valence: ends.len() / 2,
                cap: max_valence,
            });
        }
    }
    Ok(())
}

/// Lazy Cartesian product of the per-vertex matchings, in lexicographic order.
pub struct PairingIter {
    choices: Vec<Vec<Vec<(usize, usize)>>>,
    state: Option<Vec<usize>>,
}

impl PairingIter {
    /// Number of pairings the iterator yields in total (saturating).
    pub fn total(&self) -> u128 {
        self.choices
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    pub fn per_vertex_counts(&self) -> Vec<usize> {
        self.choices.iter().map(Vec::len).collect()
    }
}

impl Iterator for PairingIter {
    type Item = VertexPairing;

    fn next(&mut self) -> Option<VertexPairing> {
        let state = self.state.as_mut()?;
        let item = VertexPairing {
            pairs: state
                .iter()
                .zip(&self.choices)
                .map(|(&k, c)| c[k].clone())
                .collect(),
        };
        // odometer, last vertex fastest
        let mut v = state.len();
        loop {
            if v == 0 {
                self.state = None;
                break;
            }
            v -= 1;
            state[v] += 1;
            if state[v] < self.choices[v].len() {
                break;
            }
            state[v] = 0;
        }
        Some(item)
    }
}

pub fn enumerate_pairings(
    g: &SpatialGraph,
    allow_self: bool,
    max_valence: usize,
) -> Result<PairingIter> {
    let d = double_graph(g);
    check_valences(&d, max_valence)?;
    let choices: Vec<_> = d
        .ends
        .iter()
        .map(|ends| vertex_matchings(ends, allow_self))
        .collect();
    let state = if choices.iter().all(|c| !c.is_empty()) {
        Some(vec![0; choices.len()])
    } else {
        None
    };
    Ok(PairingIter { choices, state })
}

/// Traversal of one edge copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Traversal {
    pub edge: usize,
    pub copy: u8,
    /// From `from` to `to` when true.
    pub forward: bool,
}

impl Traversal {
    fn start_end(&self) -> EndId {
        EndId {
            edge: self.edge,
            side: if self.forward { 0 } else { 1 },
            copy: self.copy,
        }
    }

    fn finish_end(&self) -> EndId {
        EndId {
            edge: self.edge,
            side: if self.forward { 1 } else { 0 },
            copy: self.copy,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Parameterization {
    pub walks: Vec<Vec<Traversal>>,
    pub pairing: VertexPairing,
    /// `C(Gamma')`.
    pub total_curvature: f64,
}

impl Parameterization {
    pub fn half_curvature(&self) -> f64 {
        0.5 * self.total_curvature
    }
}

/// Curvature of one matched pair: the turning angle of a walk entering through one end and leaving through the other.
fn pair_angle(g: &SpatialGraph, a: EndId, b: EndId) -> f64 {
    exterior_angle(end_tangent(g, a), end_tangent(g, b))
}

fn edge_part(g: &SpatialGraph) -> f64 {
    (0..g.edges().len())
        .map(|k| g.edge_interior_curvature_by_id(k))
        .sum()
}

fn vertex_part(g: &SpatialGraph, ends: &[EndId], pairs: &[(usize, usize)]) -> f64 {
    pairs
        .iter()
        .map(|&(i, j)| pair_angle(g, ends[i], ends[j]))
        .sum()
}

fn check_pairing(d: &DoubledGraph, p: &VertexPairing) -> Result<()> {
    let g = d.base;
    if p.pairs.len() != d.ends.len() {
        return Err(Error::IncompletePairing(format!(
            "pairing covers {} vertices, graph has {}",
            p.pairs.len(),
            d.ends.len()
        )));
    }
    for (v, ps) in p.pairs.iter().enumerate() {
        let n = d.ends[v].len();
        let mut seen = vec![false; n];
        for &(i, j) in ps {
            for k in [i, j] {
                if k >= n || seen[k] {
                    return Err(Error::IncompletePairing(format!(
                        "end {k} at `{}` is out of range or matched twice",
                        g.vertices()[v].label
                    )));
                }
                seen[k] = true;
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::IncompletePairing(format!(
                "end `{}` at `{}` is unmatched",
                d.ends[v][k].label(g),
                g.vertices()[v].label
            )));
        }
    }
    Ok(())
}

/// Assembles the closed walks of a pairing and their total curvature
/// `2 * sum(edge interior curvature) + sum(pair angles)`.
pub fn parameterization_curvature(
    g: &SpatialGraph,
    pairing: &VertexPairing,
) -> Result<Parameterization> {
    let d = double_graph(g);
    check_pairing(&d, pairing)?;
    let edges = g.edges();
    let vertex_of = |end: EndId| {
        if end.side == 0 {
            edges[end.edge].from
        } else {
            edges[end.edge].to
        }
    };
    let partner = |end: EndId| -> EndId {
        let v = vertex_of(end);
        let ends = &d.ends[v];
        let i = ends.binary_search(&end).expect("end belongs to its vertex");
        let &(a, b) = pairing.pairs[v]
            .iter()
            .find(|&&(a, b)| a == i || b == i)
            .expect("pairing checked complete");
        ends[if a == i { b } else { a }]
    };
    let mut used = vec![[false; 2]; edges.len()];
    let mut walks = Vec::new();
    for k in 0..edges.len() {
        for copy in 0..2u8 {
            if used[k][copy as usize] {
                continue;
            }
            let mut walk = Vec::new();
            let mut t = Traversal {
                edge: k,
                copy,
                forward: true,
            };
            while !used[t.edge][t.copy as usize] {
                used[t.edge][t.copy as usize] = true;
                walk.push(t);
                let next = partner(t.finish_end());
                t = Traversal {
                    edge: next.edge,
                    copy: next.copy,
                    forward: next.side == 0,
                };
            }
            walks.push(walk);
        }
    }
    let vertices: f64 = d
        .ends
        .iter()
        .zip(&pairing.pairs)
        .map(|(ends, ps)| vertex_part(g, ends, ps))
        .sum();
    Ok(Parameterization {
        walks,
        pairing: pairing.clone(),
        total_curvature: 2.0 * edge_part(g) + vertices,
    })
}

/// A single closed walk covering every edge copy once (Hierholzer), with its induced pairing.
pub fn euler_circuit(d: &DoubledGraph) -> Parameterization {
    let g = d.base;
    let edges = g.edges();
    let mut used = vec![[false; 2]; edges.len()];
    let mut ptr = vec![0usize; d.ends.len()];
    let mut stack: Vec<(usize, Option<Traversal>)> = vec![(0, None)];
    let mut circuit = Vec::with_capacity(d.edge_copies());
    while let Some(&(v, _)) = stack.last() {
        let ends = &d.ends[v];
        while ptr[v] < ends.len() && used[ends[ptr[v]].edge][ends[ptr[v]].copy as usize] {
            ptr[v] += 1;
        }
        if ptr[v] == ends.len() {
            if let Some((_, Some(t))) = stack.pop() {
                circuit.push(t);
            }
        } else {
            let end = ends[ptr[v]];
            used[end.edge][end.copy as usize] = true;
            let forward = end.side == 0;
            let w = if forward {
                edges[end.edge].to
            } else {
                edges[end.edge].from
            };
            stack.push((
                w,
                Some(Traversal {
                    edge: end.edge,
                    copy: end.copy,
                    forward,
                }),
            ));
        }
    }
    circuit.reverse();

    let mut pairs = vec![Vec::new(); d.ends.len()];
    for (i, t) in circuit.iter().enumerate() {
        let next = circuit[(i + 1) % circuit.len()];
        let (a, b) = (t.finish_end(), next.start_end());
        let v = if a.side == 0 {
            edges[a.edge].from
        } else {
            edges[a.edge].to
        };
        let ia = d.ends[v].binary_search(&a).expect("end at vertex");
        let ib = d.ends[v].binary_search(&b).expect("end at vertex");
        pairs[v].push((ia.min(ib), ia.max(ib)));
    }
    for ps in &mut pairs {
        ps.sort();
    }
    let pairing = VertexPairing { pairs };
    let vertices: f64 = d
        .ends
        .iter()
        .zip(&pairing.pairs)
        .map(|(ends, ps)| vertex_part(g, ends, ps))
        .sum();
    Parameterization {
        walks: vec![circuit],
        pairing,
        total_curvature: 2.0 * edge_part(g) + vertices,
    }
}

#[derive(Debug, Clone)]
pub struct MinHalfCurvature {
    /// `min over pairings of C(Gamma') / 2`.
    pub value: f64,
    pub witness: VertexPairing,
    /// Half the pair-angle sum chosen at each vertex.
    pub per_vertex: Vec<f64>,
    /// Sum of edge interior curvatures (counted once, since the double is halved).
    pub edges: f64,
}

/// Minimum of `C(Gamma') / 2` over all pairings. The objective separates over
/// vertices, so each vertex is minimized on its own; ties keep the first matching
/// in lexicographic order.
pub fn min_half_curvature(g: &SpatialGraph, allow_self: bool) -> Result<MinHalfCurvature> {
    let d = double_graph(g);
    check_valences(&d, DEFAULT_MAX_VALENCE)?;
    let mut pairs = Vec::with_capacity(d.ends.len());
    let mut per_vertex = Vec::with_capacity(d.ends.len());
    for ends in &d.ends {
        let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
        for m in vertex_matchings(ends, allow_self) {
            let c = 0.5 * vertex_part(g, ends, &m);
            if best.as_ref().is_none_or(|(b, _)| c < b - 1e-12) {
                best = Some((c, m));
            }
        }
        let (c, m) = best.expect("every vertex has at least one matching");
        per_vertex.push(c);
        pairs.push(m);
    }
    let edges = edge_part(g);
    Ok(MinHalfCurvature {
        value: edges + per_vertex.iter().sum::<f64>(),
        witness: VertexPairing { pairs },
        per_vertex,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::{generate_example, EdgeSpec, Example};
    use crate::random_graphs::random_graph;
    use crate::vertex_curvature::{net_total_curvature, NcMethod};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;
    use std::f64::consts::PI;

    fn segment() -> SpatialGraph {
        SpatialGraph::new(
            vec![
                ("a".into(), Point3::ZERO),
                ("b".into(), Point3::new(1.0, 0.0, 0.0)),
            ],
            vec![EdgeSpec::new("s", "a", "b")],
        )
        .unwrap()
    }

    fn double_factorial(n: usize) -> usize {
        (1..=n).rev().step_by(2).product()
    }

    /// Brute-force oracle: every pairing of `0..n` built from all permutations.
    fn brute_matchings(n: usize) -> HashSet<Vec<(usize, usize)>> {
        fn perms(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == items.len() {
                out.push(items.clone());
                return;
            }
            for i in k..items.len() {
                items.swap(k, i);
                perms(items, k + 1, out);
                items.swap(k, i);
            }
        }
        let mut all = Vec::new();
        perms(&mut (0..n).collect(), 0, &mut all);
        all.into_iter()
            .map(|p| {
                let mut m: Vec<_> = p
                    .chunks(2)
                    .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
                    .collect();
                m.sort();
                m
            })
            .collect()
    }

    fn star_ends(d: usize) -> Vec<EndId> {
        let mut ends: Vec<EndId> = (0..d)
            .flat_map(|e| {
                (0..2).map(move |copy| EndId {
                    edge: e,
                    side: 0,
                    copy,
                })
            })
            .collect();
        ends.sort();
        ends
    }

    #[test]
    fn matching_counts() {
        for (d, total, no_self) in [(2, 3, 2), (3, 15, 8), (4, 105, 60)] {
            let ends = star_ends(d);
            let all = vertex_matchings(&ends, true);
            assert_eq!(all.len(), total);
            assert_eq!(all.len(), double_factorial(2 * d - 1));
            let oracle = brute_matchings(2 * d);
            assert_eq!(all.iter().cloned().collect::<HashSet<_>>(), oracle);
            let free = vertex_matchings(&ends, false);
            assert_eq!(free.len(), no_self);
            let oracle_free = oracle
                .iter()
                .filter(|m| m.iter().all(|&(i, j)| !ends[i].is_twin(&ends[j])))
                .count();
            assert_eq!(free.len(), oracle_free);
        }
        assert_eq!(perfect_matchings(10).len(), 945);
    }

    #[test]
    fn matchings_are_lexicographic() {
        let m = perfect_matchings(6);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn doubled_valences() {
        let s = segment();
        let d = double_graph(&s);
        assert_eq!(d.edge_copies(), 2);
        assert_eq!((d.valence(0), d.valence(1)), (2, 2));
        let theta = generate_example(&Example::StandardTheta { n: 8 }).unwrap();
        let d = double_graph(&theta);
        assert_eq!(d.edge_copies(), 6);
        assert_eq!(d.valence(0), 6);
        let b = generate_example(&Example::Butterfly).unwrap();
        assert_eq!(double_graph(&b).edge_copies(), 14);
    }

    #[test]
    fn euler_circuits() {
        let s = segment();
        let p = euler_circuit(&double_graph(&s));
        assert_eq!(p.walks[0].len(), 2);
        assert!((p.total_curvature - 2.0 * PI).abs() < 1e-12);

        let tri = generate_example(&Example::ConvexPolygon { n: 3 }).unwrap();
        assert_eq!(tri.edges().len(), 3);
        let d = double_graph(&tri);
        let p = euler_circuit(&d);
        assert_eq!(p.walks[0].len(), 6);

        let theta = generate_example(&Example::StandardTheta { n: 8 }).unwrap();
        let d = double_graph(&theta);
        let p = euler_circuit(&d);
        let walk = &p.walks[0];
        assert_eq!(walk.len(), 6);
        let copies: HashSet<_> = walk.iter().map(|t| (t.edge, t.copy)).collect();
        assert_eq!(copies.len(), 6);
        for w in walk.windows(2) {
            let v_end = |t: &Traversal| {
                let e = &theta.edges()[t.edge];
                if t.forward {
                    e.to
                } else {
                    e.from
                }
            };
            let v_start = |t: &Traversal| {
                let e = &theta.edges()[t.edge];
                if t.forward {
                    e.from
                } else {
                    e.to
                }
            };
            assert_eq!(v_end(&w[0]), v_start(&w[1]));
        }
    }

    #[test]
    fn euler_pairing_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let g = random_graph(&mut rng, 14, 4);
            let d = double_graph(&g);
            let e = euler_circuit(&d);
            assert_eq!(e.walks[0].len(), d.edge_copies());
            let p = parameterization_curvature(&g, &e.pairing).unwrap();
            assert_eq!(p.walks.len(), 1);
            assert_eq!(p.walks[0].len(), d.edge_copies());
            assert!((p.total_curvature - e.total_curvature).abs() < 1e-12);
        }
    }

    #[test]
    fn valence4_star_criss_cross() {
        for alpha in [0.25, 0.5, 1.0] {
            let g = generate_example(&Example::Valence4Star { alpha }).unwrap();
            let m = min_half_curvature(&g, true).unwrap();
            let c = g.vertex_id("c").unwrap();
            assert!((m.per_vertex[c] - 2.0 * alpha).abs() < 1e-9);
            // leaves are forced to turn back: pi/2 each after halving
            assert!((m.value - (2.0 * PI + 2.0 * alpha)).abs() < 1e-9);
            // criss-cross: every copy of r0 pairs with r2, r1 with r3
            let d = double_graph(&g);
            for &(i, j) in &m.witness.pairs[c] {
                let (a, b) = (d.ends[c][i].edge, d.ends[c][j].edge);
                let label = |k: usize| g.edges()[k].label.as_str();
                let pair = [label(a), label(b)];
                assert!(pair == ["r0", "r2"] || pair == ["r1", "r3"], "{pair:?}");
            }
            let n = net_total_curvature(&g, NcMethod::Exact).unwrap();
            assert!(n < m.value - 1e-3);
        }
    }

    #[test]
    fn straight_through_vertex_costs_nothing() {
        let g = SpatialGraph::new(
            vec![
                ("a".into(), Point3::ZERO),
                ("m".into(), Point3::new(1.0, 0.0, 0.0)),
                ("b".into(), Point3::new(2.0, 0.0, 0.0)),
            ],
            vec![EdgeSpec::new("x", "a", "m"), EdgeSpec::new("y", "m", "b")],
        )
        .unwrap();
        let m = min_half_curvature(&g, false).unwrap();
        assert!(m.per_vertex[g.vertex_id("m").unwrap()].abs() < 1e-15);
        assert!((m.value - PI).abs() < 1e-12);
    }

    #[test]
    fn coplanar_three_star_every_pairing_gives_nc() {
        let g = generate_example(&Example::CoplanarStar { d: 3 }).unwrap();
        let c = g.vertex_id("c").unwrap();
        let d = double_graph(&g);
        for m in vertex_matchings(&d.ends[c], false) {
            let half = 0.5 * vertex_part(&g, &d.ends[c], &m);
            assert!((half - PI / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn valence_three_pairings_all_equal_net_curvature() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 8, 3);
            let n = net_total_curvature(&g, NcMethod::Exact).unwrap();
            let iter = enumerate_pairings(&g, false, 3).unwrap();
            if iter.total() > 5000 {
                continue;
            }
            for p in iter {
                let c = parameterization_curvature(&g, &p).unwrap();
                assert!((c.half_curvature() - n).abs() < 1e-9);
            }
        }
        let b = generate_example(&Example::Butterfly).unwrap();
        let m = min_half_curvature(&b, false).unwrap();
        assert!((m.value - (5.0 * PI - 4.0 * 0.5f64.atan())).abs() < 1e-9);
    }

    #[test]
    fn separable_minimum_matches_full_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 6, 4);
            let iter = enumerate_pairings(&g, true, 4).unwrap();
            if iter.total() > 20_000 {
                continue;
            }
            let n = net_total_curvature(&g, NcMethod::Exact).unwrap();
            let mut best: Option<(f64, VertexPairing)> = None;
            for p in iter {
                let c = parameterization_curvature(&g, &p).unwrap().half_curvature();
                assert!(c >= n - 1e-9);
                if best.as_ref().is_none_or(|(b, _)| c < b - 1e-12) {
                    best = Some((c, p));
                }
            }
            let (b, _) = best.unwrap();
            let m = min_half_curvature(&g, true).unwrap();
            assert!((m.value - b).abs() < 1e-9);
        }
    }

    #[test]
    fn errors() {
        let g = generate_example(&Example::CoplanarStar { d: 7 }).unwrap();
        assert!(matches!(
            enumerate_pairings(&g, true, 6),
            Err(Error::ValenceTooLarge {
                valence: 7,
                cap: 6,
                ..
            })
        ));
        assert!(matches!(
            min_half_curvature(&g, true),
            Err(Error::ValenceTooLarge { .. })
        ));
        let s = segment();
        let bad = VertexPairing {
            pairs: vec![vec![(0, 1)], vec![]],
        };
        assert!(matches!(
            parameterization_curvature(&s, &bad),
            Err(Error::IncompletePairing(_))
        ));
    }

    #[test]
    fn witness_json() {
        let g = generate_example(&Example::Valence4Star { alpha: 0.5 }).unwrap();
        let d = double_graph(&g);
        let m = min_half_curvature(&g, true).unwrap();
        let j = m.witness.to_json(&d);
        let c = &j[g.vertex_id("c").unwrap()];
        assert_eq!(c["vertex"], "c");
        assert_eq!(c["pairs"].as_array().unwrap().len(), 4);
        assert!(c["pairs"][0][0].as_str().unwrap().starts_with("r0.from."));
    }
}
