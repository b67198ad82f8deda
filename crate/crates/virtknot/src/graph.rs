//! Vertex-signed directed intersection graphs and their local moves.
//!
//! `Γ(G)` has one vertex per chord, carrying the chord's sign, and one
//! directed edge per interleaved chord pair. The edge points into `v(c)` from
//! `v(x)` exactly when `x` crosses `c` left to right, so the in-neighbors of
//! a vertex are the chords counted positively by its index. Parallel edges
//! are allowed: the bigon move inserts antiparallel pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diagram::GaussDiagram;
use crate::trimove::{prime_table, shadow_table, ShadowEntry};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("invalid move site: {0}")]
    InvalidSite(String),
    #[error("graph exceeds the {0}-vertex isomorphism cap")]
    SizeLimit(usize),
    #[error("bad graph json: {0}")]
    BadJson(String),
}

/// Vertex-signed directed multigraph without loops.
#[derive(Clone, Debug, Default)]
pub struct IntersectionGraph {
    vertices: BTreeMap<VertexId, i8>,
    edges: Vec<(VertexId, VertexId)>, // sorted multiset
    next_id: u32,
}

impl PartialEq for IntersectionGraph {
    fn eq(&self, other: &Self) -> bool {
        // fresh-id bookkeeping is not part of graph identity
        self.vertices == other.vertices && self.edges == other.edges
    }
}
impl Eq for IntersectionGraph {}

impl IntersectionGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn sign(&self, v: VertexId) -> Result<i8, GraphError> {
        self.vertices
            .get(&v)
            .copied()
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    /// Adds a vertex with an explicit id (id must be unused).
    pub fn add_vertex(&mut self, v: VertexId, sign: i8) {
        assert!(
            self.vertices.insert(v, sign).is_none(),
            "duplicate vertex id"
        );
        self.next_id = self.next_id.max(v.0 + 1);
    }

    /// Adds a vertex under a never-recycled fresh id.
    pub fn add_fresh_vertex(&mut self, sign: i8) -> VertexId {
        let v = VertexId(self.next_id);
        self.add_vertex(v, sign);
        v
    }

    pub fn add_edge(&mut self, from: VertexId, to: VertexId) {
        assert!(from != to, "loops are not allowed");
        assert!(
            self.contains(from) && self.contains(to),
            "edge endpoint must exist"
        );
        let pos = self.edges.partition_point(|e| *e < (from, to));
        self.edges.insert(pos, (from, to));
    }

    fn remove_one_edge(&mut self, from: VertexId, to: VertexId) -> bool {
        if let Some(pos) = self.edges.iter().position(|&e| e == (from, to)) {
            self.edges.remove(pos);
            true
        } else {
            false
        }
    }

    fn remove_vertex(&mut self, v: VertexId) {
        self.vertices.remove(&v);
        self.edges.retain(|&(a, b)| a != v && b != v);
    }

    pub fn edge_multiplicity(&self, from: VertexId, to: VertexId) -> usize {
        self.edges.iter().filter(|&&e| e == (from, to)).count()
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_multiplicity(u, v) > 0 || self.edge_multiplicity(v, u) > 0
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Directed neighbor multiset of `v`: `(other, incoming)` with multiplicity.
    fn neighbor_multiset(&self, v: VertexId) -> BTreeMap<(VertexId, bool), usize> {
        let mut out = BTreeMap::new();
        for &(a, b) in &self.edges {
            if b == v {
                *out.entry((a, true)).or_insert(0) += 1;
            } else if a == v {
                *out.entry((b, false)).or_insert(0) += 1;
            }
        }
        out
    }

    /// Sum of in-neighbor signs minus sum of out-neighbor signs, with edge
    /// multiplicity. Equals the chord index of the corresponding chord.
    pub fn vertex_index(&self, v: VertexId) -> Result<i64, GraphError> {
        self.sign(v)?;
        let mut sum = 0i64;
        for &(a, b) in &self.edges {
            if b == v {
                sum += self.vertices[&a] as i64;
            } else if a == v {
                sum -= self.vertices[&b] as i64;
            }
        }
        Ok(sum)
    }

    /// Negates the sign of `v` and reverses every incident edge. Involution;
    /// the graph shadow of a crossing switch.
    pub fn vertex_switch(&self, v: VertexId) -> Result<IntersectionGraph, GraphError> {
        self.sign(v)?;
        let mut g = self.clone();
        *g.vertices.get_mut(&v).unwrap() *= -1;
        for e in &mut g.edges {
            if e.0 == v || e.1 == v {
                *e = (e.1, e.0);
            }
        }
        g.edges.sort();
        Ok(g)
    }
}

/// Builds `Γ(d)`: vertex ids reuse the chord ids.
pub fn build_intersection_graph(d: &GaussDiagram) -> IntersectionGraph {
    let mut g = IntersectionGraph::new();
    for c in d.chord_ids() {
        g.add_vertex(VertexId(c.0), d.sign(c).unwrap());
    }
    let ids: Vec<_> = d.chord_ids().collect();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if d.interleaves(a, b).unwrap() {
                // edge into v(a) from v(b) iff sense(a, b) = +1
                if d.crossing_sense(a, b).unwrap() == 1 {
                    g.add_edge(VertexId(b.0), VertexId(a.0));
                } else {
                    g.add_edge(VertexId(a.0), VertexId(b.0));
                }
            }
        }
    }
    g
}

pub const ISO_VERTEX_CAP: usize = 16;

/// Sign-, direction- and multiplicity-preserving isomorphism test by
/// backtracking with sign/degree pruning. Capped at [`ISO_VERTEX_CAP`]
/// vertices.
pub fn graphs_isomorphic(
    g1: &IntersectionGraph,
    g2: &IntersectionGraph,
) -> Result<bool, GraphError> {
    if g1.vertex_count() > ISO_VERTEX_CAP || g2.vertex_count() > ISO_VERTEX_CAP {
        return Err(GraphError::SizeLimit(ISO_VERTEX_CAP));
    }
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let profile = |g: &IntersectionGraph, v: VertexId| {
        let indeg = g.edges.iter().filter(|&&(_, b)| b == v).count();
        let outdeg = g.edges.iter().filter(|&&(a, _)| a == v).count();
        (g.vertices[&v], indeg, outdeg)
    };
    let mut p1: Vec<_> = g1.vertex_ids().map(|v| profile(g1, v)).collect();
    let mut p2: Vec<_> = g2.vertex_ids().map(|v| profile(g2, v)).collect();
    p1.sort();
    p2.sort();
    if p1 != p2 {
        return Ok(false);
    }

    let vs1: Vec<VertexId> = g1.vertex_ids().collect();
    let vs2: Vec<VertexId> = g2.vertex_ids().collect();
    fn backtrack(
        g1: &IntersectionGraph,
        g2: &IntersectionGraph,
        vs1: &[VertexId],
        vs2: &[VertexId],
        map: &mut Vec<(VertexId, VertexId)>,
        used: &mut BTreeSet<VertexId>,
    ) -> bool {
        if map.len() == vs1.len() {
            return true;
        }
        let u = vs1[map.len()];
        for &w in vs2 {
            if used.contains(&w) || g1.vertices[&u] != g2.vertices[&w] {
                continue;
            }
            let ok = map.iter().all(|&(a, b)| {
                g1.edge_multiplicity(u, a) == g2.edge_multiplicity(w, b)
                    && g1.edge_multiplicity(a, u) == g2.edge_multiplicity(b, w)
            });
            if !ok {
                continue;
            }
            map.push((u, w));
            used.insert(w);
            if backtrack(g1, g2, vs1, vs2, map, used) {
                return true;
            }
            map.pop();
            used.remove(&w);
        }
        false
    }
    let mut map = Vec::new();
    let mut used = BTreeSet::new();
    Ok(backtrack(g1, g2, &vs1, &vs2, &mut map, &mut used))
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: BTreeMap<String, i8>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: u32,
    to: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphFormat {
    Dot,
    Json,
}

/// Deterministic export. DOT: one node line per vertex with a sign
/// attribute, one line per edge occurrence. JSON mirrors the type structure.
pub fn export_graph(g: &IntersectionGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => {
            let json = GraphJson {
                vertices: g
                    .vertex_ids()
                    .map(|v| (v.0.to_string(), g.sign(v).unwrap()))
                    .collect(),
                edges: g
                    .edges()
                    .iter()
                    .map(|&(a, b)| EdgeJson { from: a.0, to: b.0 })
                    .collect(),
            };
            serde_json::to_string(&json).expect("graph json serialization")
        }
        GraphFormat::Dot => {
            let mut out = String::from("digraph intersection {\n");
            for v in g.vertex_ids() {
                let s = if g.sign(v).unwrap() > 0 { "+1" } else { "-1" };
                writeln!(out, "  v{} [sign=\"{}\"];", v.0, s).unwrap();
            }
            for &(a, b) in g.edges() {
                writeln!(out, "  v{} -> v{};", a.0, b.0).unwrap();
            }
            out.push_str("}\n");
            out
        }
    }
}

/// Parses the JSON produced by [`export_graph`].
pub fn import_graph_json(text: &str) -> Result<IntersectionGraph, GraphError> {
    let json: GraphJson =
        serde_json::from_str(text).map_err(|e| GraphError::BadJson(e.to_string()))?;
    let mut g = IntersectionGraph::new();
    for (k, sign) in json.vertices {
        let id: u32 = k
            .parse()
            .map_err(|_| GraphError::BadJson(format!("vertex id `{k}`")))?;
        if sign != 1 && sign != -1 {
            return Err(GraphError::BadJson(format!(
                "sign of vertex {k} must be 1 or -1"
            )));
        }
        g.add_vertex(VertexId(id), sign);
    }
    for e in json.edges {
        let (from, to) = (VertexId(e.from), VertexId(e.to));
        if from == to {
            return Err(GraphError::BadJson(format!("loop at vertex {from}")));
        }
        if !g.contains(from) || !g.contains(to) {
            return Err(GraphError::BadJson(format!(
                "edge {from}->{to} has unknown endpoint"
            )));
        }
        g.add_edge(from, to);
    }
    Ok(g)
}

/// Whether an edge of an ω2 pair points into or out of the new vertices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum EdgeDir {
    Incoming,
    Outgoing,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum OmegaKind {
    #[serde(rename = "w0_add")]
    Omega0Add,
    #[serde(rename = "w0_remove")]
    Omega0Remove,
    #[serde(rename = "w1_add")]
    Omega1Add,
    #[serde(rename = "w1_remove")]
    Omega1Remove,
    #[serde(rename = "w2_add")]
    Omega2Add,
    #[serde(rename = "w2_remove")]
    Omega2Remove,
    #[serde(rename = "w3")]
    Omega3,
    #[serde(rename = "w3_prime")]
    Omega3Prime,
}

/// A locator for one applicable graph move, with all free choices recorded.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OmegaSite {
    /// Insert an antiparallel edge pair between two vertices (bigon).
    #[serde(rename = "w0_add")]
    Omega0Add { u: VertexId, v: VertexId },
    /// Delete one antiparallel edge pair between two vertices.
    #[serde(rename = "w0_remove")]
    Omega0Remove { u: VertexId, v: VertexId },
    /// Insert an isolated vertex of the chosen sign.
    #[serde(rename = "w1_add")]
    Omega1Add { sign: i8 },
    /// Delete an isolated vertex.
    #[serde(rename = "w1_remove")]
    Omega1Remove { v: VertexId },
    /// Insert a non-adjacent opposite-sign pair with identical directed
    /// neighbor multisets onto the chosen targets.
    #[serde(rename = "w2_add")]
    Omega2Add {
        sign_first: i8,
        neighbors: Vec<(VertexId, EdgeDir)>,
    },
    /// Delete such a pair.
    #[serde(rename = "w2_remove")]
    Omega2Remove { u: VertexId, v: VertexId },
    /// Triangle move: rewrite the induced subgraph on three vertices by the
    /// given table entry.
    #[serde(rename = "w3")]
    Omega3 {
        vertices: [VertexId; 3],
        entry: usize,
    },
    /// The derived triangle move of the one-odd-sign pattern.
    #[serde(rename = "w3_prime")]
    Omega3Prime {
        vertices: [VertexId; 3],
        entry: usize,
    },
}

impl OmegaSite {
    pub fn kind(&self) -> OmegaKind {
        match self {
            OmegaSite::Omega0Add { .. } => OmegaKind::Omega0Add,
            OmegaSite::Omega0Remove { .. } => OmegaKind::Omega0Remove,
            OmegaSite::Omega1Add { .. } => OmegaKind::Omega1Add,
            OmegaSite::Omega1Remove { .. } => OmegaKind::Omega1Remove,
            OmegaSite::Omega2Add { .. } => OmegaKind::Omega2Add,
            OmegaSite::Omega2Remove { .. } => OmegaKind::Omega2Remove,
            OmegaSite::Omega3 { .. } => OmegaKind::Omega3,
            OmegaSite::Omega3Prime { .. } => OmegaKind::Omega3Prime,
        }
    }
}

fn triple_entry_applies(g: &IntersectionGraph, vs: &[VertexId; 3], entry: &ShadowEntry) -> bool {
    if vs[0] == vs[1] || vs[0] == vs[2] || vs[1] == vs[2] {
        return false;
    }
    for (i, &v) in vs.iter().enumerate() {
        match g.sign(v) {
            Ok(s) if s == entry.signs[i] => {}
            _ => return false,
        }
    }
    // induced subgraph must equal the before pattern exactly
    let mut induced: Vec<(u8, u8)> = Vec::new();
    for &(a, b) in g.edges() {
        let ia = vs.iter().position(|&v| v == a);
        let ib = vs.iter().position(|&v| v == b);
        if let (Some(ia), Some(ib)) = (ia, ib) {
            induced.push((ia as u8, ib as u8));
        }
    }
    induced.sort();
    induced == entry.before
}

fn apply_triple_entry(
    g: &IntersectionGraph,
    vs: &[VertexId; 3],
    entry: &ShadowEntry,
) -> IntersectionGraph {
    let mut out = g.clone();
    out.edges
        .retain(|&(a, b)| !(vs.contains(&a) && vs.contains(&b)));
    for &(x, y) in &entry.after {
        out.add_edge(vs[x as usize], vs[y as usize]);
    }
    out
}

/// All applicable sites of the given kind.
///
/// Add-sites with unbounded free choices are enumerated canonically: ω1 over
/// both signs, ω0 over vertex pairs, ω2 over neighbor lists of length at most
/// one. [`apply_omega`] accepts arbitrary payloads.
pub fn enumerate_omega_sites(g: &IntersectionGraph, kind: OmegaKind) -> Vec<OmegaSite> {
    let vs: Vec<VertexId> = g.vertex_ids().collect();
    let mut sites = Vec::new();
    match kind {
        OmegaKind::Omega0Add => {
            for (i, &u) in vs.iter().enumerate() {
                for &v in &vs[i + 1..] {
                    sites.push(OmegaSite::Omega0Add { u, v });
                }
            }
        }
        OmegaKind::Omega0Remove => {
            for (i, &u) in vs.iter().enumerate() {
                for &v in &vs[i + 1..] {
                    if g.edge_multiplicity(u, v) > 0 && g.edge_multiplicity(v, u) > 0 {
                        sites.push(OmegaSite::Omega0Remove { u, v });
                    }
                }
            }
        }
        OmegaKind::Omega1Add => {
            sites.push(OmegaSite::Omega1Add { sign: 1 });
            sites.push(OmegaSite::Omega1Add { sign: -1 });
        }
        OmegaKind::Omega1Remove => {
            for &v in &vs {
                if g.degree(v) == 0 {
                    sites.push(OmegaSite::Omega1Remove { v });
                }
            }
        }
        OmegaKind::Omega2Add => {
            for sign_first in [1i8, -1] {
                sites.push(OmegaSite::Omega2Add {
                    sign_first,
                    neighbors: vec![],
                });
                for &t in &vs {
                    for dir in [EdgeDir::Incoming, EdgeDir::Outgoing] {
                        sites.push(OmegaSite::Omega2Add {
                            sign_first,
                            neighbors: vec![(t, dir)],
                        });
                    }
                }
            }
        }
        OmegaKind::Omega2Remove => {
            for (i, &u) in vs.iter().enumerate() {
                for &v in &vs[i + 1..] {
                    if g.sign(u).unwrap() == -g.sign(v).unwrap()
                        && !g.adjacent(u, v)
                        && g.neighbor_multiset(u) == g.neighbor_multiset(v)
                    {
                        sites.push(OmegaSite::Omega2Remove { u, v });
                    }
                }
            }
        }
        OmegaKind::Omega3 | OmegaKind::Omega3Prime => {
            let table: &Vec<ShadowEntry> = if kind == OmegaKind::Omega3 {
                shadow_table()
            } else {
                prime_table()
            };
            type RewriteKey = (Vec<VertexId>, Vec<(VertexId, VertexId)>);
            let mut seen: BTreeSet<RewriteKey> = BTreeSet::new();
            for i in 0..vs.len() {
                for j in 0..vs.len() {
                    for k in 0..vs.len() {
                        if i == j || i == k || j == k {
                            continue;
                        }
                        let triple = [vs[i], vs[j], vs[k]];
                        // compute the induced pattern once per triple; the
                        // per-entry check is then a cheap comparison
                        let signs = [
                            g.sign(triple[0]).unwrap(),
                            g.sign(triple[1]).unwrap(),
                            g.sign(triple[2]).unwrap(),
                        ];
                        let mut induced: Vec<(u8, u8)> = Vec::new();
                        for &(a, b) in g.edges() {
                            let ia = triple.iter().position(|&v| v == a);
                            let ib = triple.iter().position(|&v| v == b);
                            if let (Some(ia), Some(ib)) = (ia, ib) {
                                induced.push((ia as u8, ib as u8));
                            }
                        }
                        induced.sort_unstable();
                        for (e, entry) in table.iter().enumerate() {
                            if entry.signs == signs && entry.before == induced {
                                // dedupe rewrites that produce the same graph
                                let after = apply_triple_entry(g, &triple, entry);
                                let mut key = triple.to_vec();
                                key.sort();
                                if seen.insert((key, after.edges.clone())) {
                                    sites.push(if kind == OmegaKind::Omega3 {
                                        OmegaSite::Omega3 {
                                            vertices: triple,
                                            entry: e,
                                        }
                                    } else {
                                        OmegaSite::Omega3Prime {
                                            vertices: triple,
                                            entry: e,
                                        }
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    sites
}

/// Applies one graph move, re-validating the site. Every kind preserves the
/// graph writhe polynomial.
pub fn apply_omega(
    g: &IntersectionGraph,
    site: &OmegaSite,
) -> Result<IntersectionGraph, GraphError> {
    let invalid = |msg: String| GraphError::InvalidSite(msg);
    match site {
        OmegaSite::Omega0Add { u, v } => {
            if *u == *v {
                return Err(invalid("bigon endpoints must differ".into()));
            }
            g.sign(*u)?;
            g.sign(*v)?;
            let mut out = g.clone();
            out.add_edge(*u, *v);
            out.add_edge(*v, *u);
            Ok(out)
        }
        OmegaSite::Omega0Remove { u, v } => {
            let mut out = g.clone();
            if !(out.remove_one_edge(*u, *v) && out.remove_one_edge(*v, *u)) {
                return Err(invalid(format!(
                    "no antiparallel edge pair between {u} and {v}"
                )));
            }
            Ok(out)
        }
        OmegaSite::Omega1Add { sign } => {
            if sign.abs() != 1 {
                return Err(invalid("sign must be +1 or -1".into()));
            }
            let mut out = g.clone();
            out.add_fresh_vertex(*sign);
            Ok(out)
        }
        OmegaSite::Omega1Remove { v } => {
            g.sign(*v)?;
            if g.degree(*v) != 0 {
                return Err(invalid(format!("vertex {v} is not isolated")));
            }
            let mut out = g.clone();
            out.remove_vertex(*v);
            Ok(out)
        }
        OmegaSite::Omega2Add {
            sign_first,
            neighbors,
        } => {
            if sign_first.abs() != 1 {
                return Err(invalid("sign must be +1 or -1".into()));
            }
            for (t, _) in neighbors {
                g.sign(*t)?;
            }
            let mut out = g.clone();
            let a = out.add_fresh_vertex(*sign_first);
            let b = out.add_fresh_vertex(-sign_first);
            for &(t, dir) in neighbors {
                for new in [a, b] {
                    match dir {
                        EdgeDir::Incoming => out.add_edge(t, new),
                        EdgeDir::Outgoing => out.add_edge(new, t),
                    }
                }
            }
            Ok(out)
        }
        OmegaSite::Omega2Remove { u, v } => {
            if g.sign(*u)? != -g.sign(*v)? {
                return Err(invalid(format!("{u} and {v} must have opposite signs")));
            }
            if g.adjacent(*u, *v) {
                return Err(invalid(format!("{u} and {v} must be non-adjacent")));
            }
            if g.neighbor_multiset(*u) != g.neighbor_multiset(*v) {
                return Err(invalid(format!(
                    "{u} and {v} have different neighbor multisets"
                )));
            }
            let mut out = g.clone();
            out.remove_vertex(*u);
            out.remove_vertex(*v);
            Ok(out)
        }
        OmegaSite::Omega3 { vertices, entry } => {
            let table = shadow_table();
            let e = table
                .get(*entry)
                .ok_or_else(|| invalid("unknown w3 entry".into()))?;
            if !triple_entry_applies(g, vertices, e) {
                return Err(invalid("triangle pattern not present".into()));
            }
            Ok(apply_triple_entry(g, vertices, e))
        }
        OmegaSite::Omega3Prime { vertices, entry } => {
            let table = prime_table();
            let e = table
                .get(*entry)
                .ok_or_else(|| invalid("unknown w3' entry".into()))?;
            if !triple_entry_applies(g, vertices, e) {
                return Err(invalid("triangle pattern not present".into()));
            }
            Ok(apply_triple_entry(g, vertices, e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_gauss_code, random_diagram};
    use crate::invariants::{chord_index, graph_writhe_polynomial};

    const TREFOIL: &str = "O1+ O2+ U1+ U2+";

    fn trefoil_graph() -> IntersectionGraph {
        build_intersection_graph(&parse_gauss_code(TREFOIL).unwrap())
    }

    #[test]
    fn build_examples() {
        assert_eq!(
            build_intersection_graph(&GaussDiagram::default()).vertex_count(),
            0
        );

        let g = trefoil_graph();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.sign(VertexId(1)).unwrap(), 1);
        assert_eq!(g.sign(VertexId(2)).unwrap(), 1);
        // chord 2 crosses chord 1 right to left, so the edge leaves v1
        assert_eq!(g.edges(), &[(VertexId(1), VertexId(2))]);

        let p2 = build_intersection_graph(&parse_gauss_code("O1+ O2- O3- U1+ U3- U2-").unwrap());
        assert_eq!(p2.vertex_count(), 3);
        assert_eq!(p2.edge_count(), 2);
        assert!(p2.adjacent(VertexId(1), VertexId(2)));
        assert!(p2.adjacent(VertexId(1), VertexId(3)));
        assert!(!p2.adjacent(VertexId(2), VertexId(3)));
    }

    use crate::diagram::GaussDiagram;

    #[test]
    fn vertex_index_examples() {
        let mut g = IntersectionGraph::new();
        let v = g.add_fresh_vertex(1);
        assert_eq!(g.vertex_index(v).unwrap(), 0);

        let t = trefoil_graph();
        assert_eq!(t.vertex_index(VertexId(1)).unwrap(), -1);
        assert_eq!(t.vertex_index(VertexId(2)).unwrap(), 1);

        for seed in 0..50 {
            let d = random_diagram(6, seed);
            let g = build_intersection_graph(&d);
            for c in d.chord_ids() {
                assert_eq!(
                    g.vertex_index(VertexId(c.0)).unwrap(),
                    chord_index(&d, c).unwrap()
                );
            }
        }
    }

    #[test]
    fn vertex_switch_examples() {
        let t = trefoil_graph();
        let s = t.vertex_switch(VertexId(1)).unwrap();
        assert_eq!(s.sign(VertexId(1)).unwrap(), -1);
        assert_eq!(s.edges(), &[(VertexId(2), VertexId(1))]);
        assert_eq!(s.vertex_switch(VertexId(1)).unwrap(), t);
    }

    #[test]
    fn switch_commutes_with_build() {
        for seed in 0..50 {
            let d = random_diagram(6, seed);
            for c in d.chord_ids() {
                let lhs = build_intersection_graph(&d.crossing_switch(c).unwrap());
                let rhs = build_intersection_graph(&d)
                    .vertex_switch(VertexId(c.0))
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn switch_preserves_nonneighbor_indices() {
        for seed in 0..20 {
            let d = random_diagram(6, seed);
            let g = build_intersection_graph(&d);
            for v in g.vertex_ids() {
                let s = g.vertex_switch(v).unwrap();
                for u in g.vertex_ids() {
                    if u != v && !g.adjacent(u, v) {
                        assert_eq!(g.vertex_index(u).unwrap(), s.vertex_index(u).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let t = trefoil_graph();
        assert!(graphs_isomorphic(&t, &t).unwrap());

        // reversing the edge is an isomorphism that swaps the vertices
        let mut rev = IntersectionGraph::new();
        rev.add_vertex(VertexId(1), 1);
        rev.add_vertex(VertexId(2), 1);
        rev.add_edge(VertexId(2), VertexId(1));
        assert!(graphs_isomorphic(&t, &rev).unwrap());

        let mut iso = IntersectionGraph::new();
        iso.add_vertex(VertexId(1), 1);
        iso.add_vertex(VertexId(2), 1);
        assert!(!graphs_isomorphic(&t, &iso).unwrap());

        // sign mismatch
        let mut neg = IntersectionGraph::new();
        neg.add_vertex(VertexId(1), 1);
        neg.add_vertex(VertexId(2), -1);
        neg.add_edge(VertexId(1), VertexId(2));
        assert!(!graphs_isomorphic(&t, &neg).unwrap());

        let mut big = IntersectionGraph::new();
        for _ in 0..17 {
            big.add_fresh_vertex(1);
        }
        assert_eq!(
            graphs_isomorphic(&big, &big),
            Err(GraphError::SizeLimit(16))
        );
    }

    #[test]
    fn isomorphism_agrees_with_bruteforce_on_small_graphs() {
        // brute force over all vertex bijections
        fn brute(g1: &IntersectionGraph, g2: &IntersectionGraph) -> bool {
            let v1: Vec<_> = g1.vertex_ids().collect();
            let v2: Vec<_> = g2.vertex_ids().collect();
            if v1.len() != v2.len() {
                return false;
            }
            fn perms(n: usize) -> Vec<Vec<usize>> {
                if n == 0 {
                    return vec![vec![]];
                }
                let mut out = Vec::new();
                for p in perms(n - 1) {
                    for i in 0..n {
                        let mut q = p.clone();
                        q.insert(i, n - 1);
                        out.push(q);
                    }
                }
                out
            }
            perms(v1.len()).into_iter().any(|p| {
                v1.iter()
                    .enumerate()
                    .all(|(i, &u)| g1.vertices[&u] == g2.vertices[&v2[p[i]]])
                    && v1.iter().enumerate().all(|(i, &u)| {
                        v1.iter().enumerate().all(|(j, &w)| {
                            g1.edge_multiplicity(u, w) == g2.edge_multiplicity(v2[p[i]], v2[p[j]])
                        })
                    })
            })
        }
        for seed in 0..40 {
            let g1 = build_intersection_graph(&random_diagram(4, seed));
            let g2 = build_intersection_graph(&random_diagram(4, seed + 1));
            assert_eq!(
                graphs_isomorphic(&g1, &g2).unwrap(),
                brute(&g1, &g2),
                "seed {seed}"
            );
            assert!(graphs_isomorphic(&g1, &g1).unwrap());
        }
    }

    #[test]
    fn export_examples() {
        let empty = IntersectionGraph::new();
        assert_eq!(
            export_graph(&empty, GraphFormat::Json),
            r#"{"vertices":{},"edges":[]}"#
        );

        let t = trefoil_graph();
        let dot = export_graph(&t, GraphFormat::Dot);
        assert_eq!(dot.lines().filter(|l| l.contains("[sign=")).count(), 2);
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 1);

        let json = export_graph(&t, GraphFormat::Json);
        let back = import_graph_json(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn omega1_examples() {
        let empty = IntersectionGraph::new();
        assert!(enumerate_omega_sites(&empty, OmegaKind::Omega1Remove).is_empty());

        let g = apply_omega(&empty, &OmegaSite::Omega1Add { sign: 1 }).unwrap();
        assert_eq!(enumerate_omega_sites(&g, OmegaKind::Omega1Remove).len(), 1);
        let v = g.vertex_ids().next().unwrap();
        let back = apply_omega(&g, &OmegaSite::Omega1Remove { v }).unwrap();
        assert_eq!(back, empty);
        // isolated vertex contributes nothing to W
        assert!(graph_writhe_polynomial(&g).is_zero());
    }

    #[test]
    fn omega0_examples() {
        let t = trefoil_graph();
        assert!(enumerate_omega_sites(&t, OmegaKind::Omega0Remove).is_empty());
        let site = OmegaSite::Omega0Add {
            u: VertexId(1),
            v: VertexId(2),
        };
        let g = apply_omega(&t, &site).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(enumerate_omega_sites(&g, OmegaKind::Omega0Remove).len(), 1);
        assert_eq!(graph_writhe_polynomial(&g), graph_writhe_polynomial(&t));
        let back = apply_omega(
            &g,
            &OmegaSite::Omega0Remove {
                u: VertexId(1),
                v: VertexId(2),
            },
        )
        .unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn omega2_examples() {
        let t = trefoil_graph();
        let site = OmegaSite::Omega2Add {
            sign_first: 1,
            neighbors: vec![(VertexId(1), EdgeDir::Incoming)],
        };
        let g = apply_omega(&t, &site).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(graph_writhe_polynomial(&g), graph_writhe_polynomial(&t));
        // the new negative vertex can cancel against either same-profile
        // positive vertex; all removals preserve W, one restores t exactly
        let removes = enumerate_omega_sites(&g, OmegaKind::Omega2Remove);
        assert!(!removes.is_empty());
        let mut restored = false;
        for site in &removes {
            let back = apply_omega(&g, site).unwrap();
            assert_eq!(graph_writhe_polynomial(&back), graph_writhe_polynomial(&t));
            restored |= back == t;
        }
        assert!(restored);
    }

    #[test]
    fn omega_moves_preserve_w_randomly() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for seed in 0..30 {
            let mut g = build_intersection_graph(&random_diagram(5, seed));
            let w0 = graph_writhe_polynomial(&g);
            for _ in 0..25 {
                let kinds = [
                    OmegaKind::Omega0Add,
                    OmegaKind::Omega0Remove,
                    OmegaKind::Omega1Add,
                    OmegaKind::Omega1Remove,
                    OmegaKind::Omega2Add,
                    OmegaKind::Omega2Remove,
                    OmegaKind::Omega3,
                    OmegaKind::Omega3Prime,
                ];
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let sites = enumerate_omega_sites(&g, kind);
                if sites.is_empty() {
                    continue;
                }
                let site = &sites[rng.gen_range(0..sites.len())];
                g = apply_omega(&g, site).unwrap();
                assert_eq!(graph_writhe_polynomial(&g), w0, "kind {kind:?}");
            }
        }
    }

    #[test]
    fn omega3_sites_exist_and_invert() {
        // a one-edge mixed-sign pair with a third vertex admits triangle moves
        for seed in 0..40u64 {
            let g = build_intersection_graph(&random_diagram(4, seed));
            for site in enumerate_omega_sites(&g, OmegaKind::Omega3) {
                let h = apply_omega(&g, &site).unwrap();
                assert_eq!(graph_writhe_polynomial(&h), graph_writhe_polynomial(&g));
                // the inverse rewrite exists among the w3 sites of h
                let back = enumerate_omega_sites(&h, OmegaKind::Omega3)
                    .iter()
                    .any(|s| apply_omega(&h, s).unwrap() == g);
                assert!(back);
            }
        }
    }
}
