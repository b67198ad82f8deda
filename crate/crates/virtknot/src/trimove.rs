//! Local model of the third Reidemeister move.
//!
//! Three straight strands in general position form a triangle; the move
//! slides the middle strand across the opposite crossing, which reverses the
//! order of the two crossings along every strand. On the Gauss diagram this
//! swaps three adjacent endpoint pairs, one pair per strand.
//!
//! A candidate site is legal when some assignment of directions and a
//! transitive over/under order to the three strands reproduces the observed
//! signs, roles and within-arc orders. Legality is purely local: the closure
//! of the strands outside the disk is free because virtual crossings carry no
//! Gauss-diagram data.
//!
//! The same enumeration, specialized to the 3-chord local diagrams, yields
//! the table of induced rewrites on intersection graphs (the triangle moves
//! of the graph module).

use std::sync::OnceLock;

use crate::diagram::{ChordId, GaussDiagram, Role};

/// Strands of the local chords: chord 0 joins strands 0,1; chord 1 joins
/// strands 0,2; chord 2 joins strands 1,2.
const CHORD_STRANDS: [[u8; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

/// Strand shared by two distinct local chords.
pub(crate) fn shared_strand(c1: u8, c2: u8) -> u8 {
    for s in 0..3u8 {
        if CHORD_STRANDS[c1 as usize].contains(&s) && CHORD_STRANDS[c2 as usize].contains(&s) {
            return s;
        }
    }
    unreachable!("distinct local chords always share a strand")
}

/// One realizable local configuration of the triangle.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TriConfig {
    /// Crossing sign of each local chord.
    pub sign: [i8; 3],
    /// Which strand is on top at each local chord.
    pub over: [u8; 3],
    /// Per strand, its two local chords in traversal order.
    pub order: [[u8; 2]; 3],
}

/// Enumerates the 48 realizable configurations: lines
/// `L0: y=0 (dir (1,0))`, `L1: x=0 (dir (0,1))`, `L2: x+y=1 (dir (-1,1))`,
/// 8 direction choices times the 6 transitive height orders.
pub(crate) fn tri_configs() -> &'static Vec<TriConfig> {
    static TABLE: OnceLock<Vec<TriConfig>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let base_dir: [(i64, i64); 3] = [(1, 0), (0, 1), (-1, 1)];
        // crossing c is the intersection of CHORD_STRANDS[c]
        // parameter of crossing c along the base direction of strand s
        let param = |s: u8, c: u8| -> i64 {
            match (s, c) {
                (0, 0) | (1, 0) | (2, 1) => 0,
                (0, 1) | (1, 2) | (2, 2) => 1,
                _ => unreachable!(),
            }
        };
        let mut out = Vec::new();
        for dirs in 0..8u8 {
            let d: Vec<i64> = (0..3)
                .map(|i| if dirs >> i & 1 == 0 { 1 } else { -1 })
                .collect();
            for heights in [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ] {
                // heights[k] = strand with rank k, rank 0 on top
                let rank = |s: u8| heights.iter().position(|&x| x == s).unwrap();
                let mut sign = [0i8; 3];
                let mut over = [0u8; 3];
                for c in 0..3u8 {
                    let [i, j] = CHORD_STRANDS[c as usize];
                    let (o, u) = if rank(i) < rank(j) { (i, j) } else { (j, i) };
                    over[c as usize] = o;
                    let vo = (
                        base_dir[o as usize].0 * d[o as usize],
                        base_dir[o as usize].1 * d[o as usize],
                    );
                    let vu = (
                        base_dir[u as usize].0 * d[u as usize],
                        base_dir[u as usize].1 * d[u as usize],
                    );
                    let det = vo.0 * vu.1 - vo.1 * vu.0;
                    sign[c as usize] = if det > 0 { 1 } else { -1 };
                }
                let mut order = [[0u8; 2]; 3];
                for s in 0..3u8 {
                    let mut cs: Vec<u8> = (0..3)
                        .filter(|&c| CHORD_STRANDS[c as usize].contains(&s))
                        .collect();
                    cs.sort_by_key(|&c| param(s, c) * d[s as usize]);
                    order[s as usize] = [cs[0], cs[1]];
                }
                out.push(TriConfig { sign, over, order });
            }
        }
        out
    })
}

/// Directed rewrite of the induced subgraph on the three vertices of a
/// triangle move. Edges are directed pairs of local vertex indices `0..3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ShadowEntry {
    pub signs: [i8; 3],
    pub before: Vec<(u8, u8)>,
    pub after: Vec<(u8, u8)>,
}

fn local_diagram(conf: &TriConfig, arc_order: [u8; 3]) -> GaussDiagram {
    let mut word = Vec::new();
    for &s in &arc_order {
        for &c in &conf.order[s as usize] {
            let role = if conf.over[c as usize] == s {
                Role::Over
            } else {
                Role::Under
            };
            word.push((ChordId(c as u32 + 1), role, conf.sign[c as usize]));
        }
    }
    GaussDiagram::from_word(word).expect("local triangle word is valid")
}

fn swap_pairs(d: &GaussDiagram) -> GaussDiagram {
    let mut w = d.word();
    for p in [0, 2, 4] {
        w.swap(p, p + 1);
    }
    GaussDiagram::from_word(w).expect("pair swap preserves validity")
}

fn pattern(d: &GaussDiagram) -> Vec<(u8, u8)> {
    let mut edges = Vec::new();
    for a in 0..3u8 {
        for b in (a + 1)..3 {
            let (ca, cb) = (ChordId(a as u32 + 1), ChordId(b as u32 + 1));
            if d.interleaves(ca, cb).unwrap() {
                // edge into v iff the other chord crosses v's chord left to right
                if d.crossing_sense(ca, cb).unwrap() == 1 {
                    edges.push((b, a));
                } else {
                    edges.push((a, b));
                }
            }
        }
    }
    edges.sort();
    edges
}

/// All distinct induced-subgraph rewrites of triangle moves.
///
/// Each vertex keeps its sign and its index contribution from inside the
/// triple, so applying an entry in any external context preserves every
/// vertex index and hence the writhe polynomial.
pub(crate) fn shadow_table() -> &'static Vec<ShadowEntry> {
    static TABLE: OnceLock<Vec<ShadowEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out: Vec<ShadowEntry> = Vec::new();
        for conf in tri_configs() {
            for arc_order in [[0u8, 1, 2], [0, 2, 1]] {
                let d = local_diagram(conf, arc_order);
                let d2 = swap_pairs(&d);
                for c in 1..=3u32 {
                    let id = ChordId(c);
                    assert_eq!(
                        crate::invariants::chord_index(&d, id).unwrap(),
                        crate::invariants::chord_index(&d2, id).unwrap(),
                        "triangle move must preserve every internal index contribution"
                    );
                }
                let entry = ShadowEntry {
                    signs: conf.sign,
                    before: pattern(&d),
                    after: pattern(&d2),
                };
                if !out.contains(&entry) {
                    out.push(entry);
                }
            }
        }
        out
    })
}

/// Subset of triangle rewrites with one odd-signed vertex whose single edge
/// to one of the two like-signed vertices is rerouted through the other.
pub(crate) fn prime_table() -> &'static Vec<ShadowEntry> {
    static TABLE: OnceLock<Vec<ShadowEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        shadow_table()
            .iter()
            .filter(|e| {
                let total: i8 = e.signs.iter().sum();
                if total.abs() != 1 {
                    return false;
                }
                let odd = e.signs.iter().position(|&s| s == total).unwrap() as u8;
                e.before.len() == 1
                    && (e.before[0].0 == odd || e.before[0].1 == odd)
                    && e.after.len() == 2
            })
            .cloned()
            .collect()
    })
}

/// Checks whether swapping the three adjacent endpoint pairs starting at
/// `pair_starts` is a legal third Reidemeister move on `d`.
///
/// Requires: each pair holds endpoints of two distinct chords, the pairs are
/// disjoint, the three chords cover all three chord pairs, and some local
/// configuration matches the observed signs, roles and within-arc orders
/// under one of the six chord labelings.
pub(crate) fn r3_legal(d: &GaussDiagram, pair_starts: [usize; 3]) -> bool {
    let n2 = d.endpoints().len();
    if n2 < 6 {
        return false;
    }
    let mut used = std::collections::BTreeSet::new();
    let mut arcs = Vec::new(); // per arc: [(chord, role); 2]
    for &p in &pair_starts {
        if p >= n2 {
            return false;
        }
        let q = (p + 1) % n2;
        if !used.insert(p) || !used.insert(q) {
            return false;
        }
        let e1 = d.endpoints()[p];
        let e2 = d.endpoints()[q];
        if e1.chord == e2.chord {
            return false;
        }
        arcs.push([(e1.chord, e1.role), (e2.chord, e2.role)]);
    }
    let mut chords: Vec<ChordId> = arcs.iter().flatten().map(|&(c, _)| c).collect();
    chords.sort();
    chords.dedup();
    if chords.len() != 3 {
        return false;
    }
    let pairs: std::collections::BTreeSet<(ChordId, ChordId)> = arcs
        .iter()
        .map(|a| {
            let (x, y) = (a[0].0, a[1].0);
            (x.min(y), x.max(y))
        })
        .collect();
    if pairs.len() != 3 {
        return false;
    }

    // try every labeling of the three chords as local chords 0..3
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for perm in perms {
        let local = |c: ChordId| perm[chords.iter().position(|&x| x == c).unwrap()] as u8;
        'config: for conf in tri_configs() {
            for c in &chords {
                if d.sign(*c).unwrap() != conf.sign[local(*c) as usize] {
                    continue 'config;
                }
            }
            for arc in &arcs {
                let (l1, l2) = (local(arc[0].0), local(arc[1].0));
                let s = shared_strand(l1, l2);
                if conf.order[s as usize] != [l1, l2] {
                    continue 'config;
                }
                for &(c, role) in arc {
                    let want = if conf.over[local(c) as usize] == s {
                        Role::Over
                    } else {
                        Role::Under
                    };
                    if role != want {
                        continue 'config;
                    }
                }
            }
            return true;
        }
    }
    false
}
