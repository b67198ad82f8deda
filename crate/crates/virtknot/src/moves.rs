//! Diagram-level rewrites: generating Reidemeister moves, shell moves,
//! bounded equivalence search and the invariance fuzz driver.
//!
//! All moves are pure: they take a diagram and a fully parameterized site and
//! return the rewritten diagram. Every move preserves the writhe polynomial
//! exactly; the first shell move additionally preserves the intersection
//! graph.

use std::collections::{BTreeSet, VecDeque};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{
    parse_gauss_code, serialize_gauss_code, ChordId, DiagramError, GaussDiagram, Role,
};
use crate::graph::{
    apply_omega, build_intersection_graph, enumerate_omega_sites, graphs_isomorphic, OmegaKind,
    OmegaSite,
};
use crate::invariants::{chord_index, writhe_polynomial, LaurentPolynomial};
use crate::trimove::r3_legal;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("invalid move site: {0}")]
    InvalidSite(String),
    #[error("no sign/direction choice for the new shells satisfies the S2 constraints")]
    S2ConstraintUnsatisfiable,
    #[error("search limit exceeded: {0}")]
    SizeLimit(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Which direction an S2 site runs.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum S2Direction {
    /// Slide the endpoint at `pos` past its successor and insert the two
    /// compensating shells; `sign_new` is the sign of the shell on the first
    /// chord.
    Insert { pos: usize, sign_new: i8 },
    /// Delete the two shells and slide the freed endpoints back past each
    /// other.
    Remove { shell1: ChordId, shell2: ChordId },
}

/// Locator for one applicable diagram rewrite, with every free choice
/// recorded so traces replay exactly.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DiagramMoveSite {
    /// Insert a kink chord at the gap before position `gap`.
    R1Add {
        gap: usize,
        sign: i8,
        over_first: bool,
    },
    /// Delete a chord whose endpoints are adjacent on the circle.
    R1Remove { chord: ChordId },
    /// Insert an opposite-sign chord pair: over endpoints at `gap_over` in
    /// order (first, second), under endpoints at `gap_under` reversed.
    R2Add {
        gap_over: usize,
        gap_under: usize,
        sign_first: i8,
    },
    /// Delete such a pair.
    R2Remove { c1: ChordId, c2: ChordId },
    /// Swap the three adjacent endpoint pairs starting at `pairs`.
    R3 { pairs: [usize; 3] },
    /// Slide a shell to the other endpoint of its host chord, keeping its
    /// crossing sense. Preserves the intersection graph.
    S1 { shell: ChordId },
    /// Second shell move, either direction.
    S2 { direction: S2Direction },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
    S1,
    S2,
}

pub const ALL_MOVE_KINDS: [MoveKind; 7] = [
    MoveKind::R1Add,
    MoveKind::R1Remove,
    MoveKind::R2Add,
    MoveKind::R2Remove,
    MoveKind::R3,
    MoveKind::S1,
    MoveKind::S2,
];

impl DiagramMoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            DiagramMoveSite::R1Add { .. } => MoveKind::R1Add,
            DiagramMoveSite::R1Remove { .. } => MoveKind::R1Remove,
            DiagramMoveSite::R2Add { .. } => MoveKind::R2Add,
            DiagramMoveSite::R2Remove { .. } => MoveKind::R2Remove,
            DiagramMoveSite::R3 { .. } => MoveKind::R3,
            DiagramMoveSite::S1 { .. } => MoveKind::S1,
            DiagramMoveSite::S2 { .. } => MoveKind::S2,
        }
    }
}

type Token = (ChordId, Role, i8);

fn word_of(d: &GaussDiagram) -> Vec<Token> {
    d.word()
}

/// A shell is a chord whose endpoints flank a single endpoint of another
/// chord, so it crosses that chord once and nothing else. Returns the host
/// chord and the circle position it wraps.
fn shell_of(d: &GaussDiagram, c: ChordId) -> Option<(ChordId, usize)> {
    let n2 = d.endpoints().len();
    if n2 < 4 {
        return None;
    }
    let data = d.chord(c).ok()?;
    for (a, b) in [
        (data.over_pos, data.under_pos),
        (data.under_pos, data.over_pos),
    ] {
        if (a + 2) % n2 == b {
            let mid = (a + 1) % n2;
            let host = d.endpoints()[mid].chord;
            if host != c {
                return Some((host, mid));
            }
        }
    }
    None
}

/// Inserts a shell wrapping the endpoint currently at `pos`, with the given
/// sign and a direction chosen so its crossing sense on the host is `sense`.
fn insert_shell(word: &mut Vec<Token>, pos: usize, id: ChordId, sign: i8, sense: i8) {
    let host_role = word[pos].1;
    // sense(+1) needs the over token before a head, after a tail
    let over_first = match host_role {
        Role::Under => sense == 1,
        Role::Over => sense == -1,
    };
    let (first, second) = if over_first {
        (Role::Over, Role::Under)
    } else {
        (Role::Under, Role::Over)
    };
    word.insert(pos + 1, (id, second, sign));
    word.insert(pos, (id, first, sign));
}

/// All applicable sites of the given kind.
pub fn enumerate_moves(d: &GaussDiagram, kind: MoveKind) -> Vec<DiagramMoveSite> {
    let n2 = d.endpoints().len();
    let mut sites = Vec::new();
    match kind {
        MoveKind::R1Add => {
            let gaps = if n2 == 0 { 1 } else { n2 };
            for gap in 0..gaps {
                for sign in [1i8, -1] {
                    for over_first in [true, false] {
                        sites.push(DiagramMoveSite::R1Add {
                            gap,
                            sign,
                            over_first,
                        });
                    }
                }
            }
        }
        MoveKind::R1Remove => {
            for c in d.chord_ids() {
                let data = d.chord(c).unwrap();
                let (a, b) = (data.over_pos, data.under_pos);
                if (a + 1) % n2 == b || (b + 1) % n2 == a {
                    sites.push(DiagramMoveSite::R1Remove { chord: c });
                }
            }
        }
        MoveKind::R2Add => {
            let gaps = if n2 == 0 { 1 } else { n2 };
            for gap_over in 0..gaps {
                for gap_under in 0..gaps {
                    for sign_first in [1i8, -1] {
                        sites.push(DiagramMoveSite::R2Add {
                            gap_over,
                            gap_under,
                            sign_first,
                        });
                    }
                }
            }
        }
        MoveKind::R2Remove => {
            let ids: Vec<_> = d.chord_ids().collect();
            for (i, &c1) in ids.iter().enumerate() {
                for &c2 in &ids[i + 1..] {
                    if r2_remove_pattern(d, c1, c2).is_some() {
                        sites.push(DiagramMoveSite::R2Remove { c1, c2 });
                    }
                }
            }
        }
        MoveKind::R3 => {
            for p1 in 0..n2 {
                for p2 in (p1 + 2)..n2 {
                    for p3 in (p2 + 2)..n2 {
                        // pairs must not overlap, including the wrap-around
                        if p1 == 0 && p3 == n2 - 1 {
                            continue;
                        }
                        if r3_legal(d, [p1, p2, p3]) {
                            sites.push(DiagramMoveSite::R3 {
                                pairs: [p1, p2, p3],
                            });
                        }
                    }
                }
            }
        }
        MoveKind::S1 => {
            for c in d.chord_ids() {
                if shell_of(d, c).is_some() {
                    sites.push(DiagramMoveSite::S1 { shell: c });
                }
            }
        }
        MoveKind::S2 => {
            for pos in 0..n2 {
                if d.endpoints()[pos].chord != d.endpoints()[(pos + 1) % n2].chord {
                    for sign_new in [1i8, -1] {
                        sites.push(DiagramMoveSite::S2 {
                            direction: S2Direction::Insert { pos, sign_new },
                        });
                    }
                }
            }
            let shells: Vec<_> = d
                .chord_ids()
                .filter_map(|c| shell_of(d, c).map(|h| (c, h)))
                .collect();
            for (i, &(s1, _)) in shells.iter().enumerate() {
                for &(s2, _) in &shells[i + 1..] {
                    let site = DiagramMoveSite::S2 {
                        direction: S2Direction::Remove {
                            shell1: s1,
                            shell2: s2,
                        },
                    };
                    if apply_move(d, &site).is_ok() {
                        sites.push(site);
                    }
                }
            }
        }
    }
    sites
}

/// The pair pattern deletable by an R2 move: opposite signs, over endpoints
/// adjacent, under endpoints adjacent, and the two within-pair orders
/// reversed (so the chords do not cross each other and cross everything else
/// identically). Returns the over-pair and under-pair start positions.
fn r2_remove_pattern(d: &GaussDiagram, c1: ChordId, c2: ChordId) -> Option<(usize, usize)> {
    let n2 = d.endpoints().len();
    let d1 = d.chord(c1).ok()?;
    let d2 = d.chord(c2).ok()?;
    if d1.sign != -d2.sign {
        return None;
    }
    let over_pair = if (d1.over_pos + 1) % n2 == d2.over_pos {
        (d1.over_pos, c1)
    } else if (d2.over_pos + 1) % n2 == d1.over_pos {
        (d2.over_pos, c2)
    } else {
        return None;
    };
    let under_pair = if (d1.under_pos + 1) % n2 == d2.under_pos {
        (d1.under_pos, c1)
    } else if (d2.under_pos + 1) % n2 == d1.under_pos {
        (d2.under_pos, c2)
    } else {
        return None;
    };
    // orders must be reversed between the two pairs
    if over_pair.1 == under_pair.1 {
        return None;
    }
    Some((over_pair.0, under_pair.0))
}

/// Applies one move, re-validating the site.
pub fn apply_move(d: &GaussDiagram, site: &DiagramMoveSite) -> Result<GaussDiagram, MoveError> {
    let invalid = |msg: String| MoveError::InvalidSite(msg);
    let n2 = d.endpoints().len();
    match site {
        DiagramMoveSite::R1Add {
            gap,
            sign,
            over_first,
        } => {
            if *gap > n2 || sign.abs() != 1 {
                return Err(invalid(format!("bad R1 insertion gap {gap}")));
            }
            let id = d.fresh_chord_id();
            let mut word = word_of(d);
            let (r1, r2) = if *over_first {
                (Role::Over, Role::Under)
            } else {
                (Role::Under, Role::Over)
            };
            word.insert(*gap, (id, r2, *sign));
            word.insert(*gap, (id, r1, *sign));
            Ok(GaussDiagram::from_word(word)?)
        }
        DiagramMoveSite::R1Remove { chord } => {
            let data = d.chord(*chord)?;
            let adjacent = (data.over_pos + 1) % n2 == data.under_pos
                || (data.under_pos + 1) % n2 == data.over_pos;
            if !adjacent {
                return Err(invalid(format!("chord {chord} is not a kink")));
            }
            let word = word_of(d).into_iter().filter(|t| t.0 != *chord).collect();
            Ok(GaussDiagram::from_word(word)?)
        }
        DiagramMoveSite::R2Add {
            gap_over,
            gap_under,
            sign_first,
        } => {
            if *gap_over > n2 || *gap_under > n2 || sign_first.abs() != 1 {
                return Err(invalid("bad R2 insertion gaps".into()));
            }
            let c = d.fresh_chord_id();
            let e = ChordId(c.0 + 1);
            let mut word = Vec::with_capacity(n2 + 4);
            let old = word_of(d);
            let insert_at = |word: &mut Vec<Token>, gap: usize| {
                if gap == *gap_over {
                    word.push((c, Role::Over, *sign_first));
                    word.push((e, Role::Over, -*sign_first));
                }
                if gap == *gap_under {
                    word.push((e, Role::Under, -*sign_first));
                    word.push((c, Role::Under, *sign_first));
                }
            };
            for (i, &tok) in old.iter().enumerate() {
                insert_at(&mut word, i);
                word.push(tok);
            }
            insert_at(&mut word, n2);
            Ok(GaussDiagram::from_word(word)?)
        }
        DiagramMoveSite::R2Remove { c1, c2 } => {
            d.chord(*c1)?;
            d.chord(*c2)?;
            if r2_remove_pattern(d, *c1, *c2).is_none() {
                return Err(invalid(format!("chords {c1},{c2} do not form an R2 pair")));
            }
            let word = word_of(d)
                .into_iter()
                .filter(|t| t.0 != *c1 && t.0 != *c2)
                .collect();
            Ok(GaussDiagram::from_word(word)?)
        }
        DiagramMoveSite::R3 { pairs } => {
            if !r3_legal(d, *pairs) {
                return Err(invalid(format!(
                    "positions {pairs:?} are not a legal R3 site"
                )));
            }
            let mut word = word_of(d);
            for &p in pairs {
                let q = (p + 1) % n2;
                word.swap(p, q);
            }
            Ok(GaussDiagram::from_word(word)?)
        }
        DiagramMoveSite::S1 { shell } => {
            let (host, wrapped) = shell_of(d, *shell)
                .ok_or_else(|| invalid(format!("chord {shell} is not a shell")))?;
            let sense = d.crossing_sense(*shell, host)?;
            let sign = d.sign(*shell)?;
            let host_data = d.chord(host)?;
            let other = if host_data.over_pos == wrapped {
                host_data.under_pos
            } else {
                host_data.over_pos
            };
            let mut word: Vec<Token> = word_of(d).into_iter().filter(|t| t.0 != *shell).collect();
            // other endpoint's position after deleting the two shell tokens
            let removed_before = [(wrapped + n2 - 1) % n2, (wrapped + 1) % n2]
                .iter()
                .filter(|&&p| p < other)
                .count();
            insert_shell(&mut word, other - removed_before, *shell, sign, sense);
            let out = GaussDiagram::from_word(word)?;
            debug_assert_eq!(out.crossing_sense(*shell, host), Ok(sense));
            Ok(out)
        }
        DiagramMoveSite::S2 { direction } => apply_s2(d, direction),
    }
}

fn apply_s2(d: &GaussDiagram, direction: &S2Direction) -> Result<GaussDiagram, MoveError> {
    let invalid = |msg: String| MoveError::InvalidSite(msg);
    let n2 = d.endpoints().len();
    match direction {
        S2Direction::Insert { pos, sign_new } => {
            if *pos >= n2 || sign_new.abs() != 1 {
                return Err(invalid(format!("bad S2 position {pos}")));
            }
            let q = (*pos + 1) % n2;
            let c1 = d.endpoints()[*pos].chord;
            let c2 = d.endpoints()[q].chord;
            if c1 == c2 {
                return Err(invalid("S2 needs endpoints of distinct chords".into()));
            }
            let ind1 = chord_index(d, c1)?;
            let ind2 = chord_index(d, c2)?;
            let id3 = d.fresh_chord_id();
            let id4 = ChordId(id3.0 + 1);
            // slide the two endpoints past each other
            let mut swapped = word_of(d);
            swapped.swap(*pos, q);
            // the shells' directions are forced; solve by trying all four
            for sense3 in [1i8, -1] {
                for sense4 in [1i8, -1] {
                    let mut word = Vec::with_capacity(n2 + 4);
                    for (i, &tok) in swapped.iter().enumerate() {
                        if i == *pos {
                            // c2's endpoint now sits here; wrap it with the
                            // second shell
                            let at = word.len();
                            word.push(tok);
                            insert_shell(&mut word, at, id4, -*sign_new, sense4);
                        } else if i == q {
                            let at = word.len();
                            word.push(tok);
                            insert_shell(&mut word, at, id3, *sign_new, sense3);
                        } else {
                            word.push(tok);
                        }
                    }
                    let cand = GaussDiagram::from_word(word)?;
                    let ind3 = chord_index(&cand, id3)?;
                    let ind4 = chord_index(&cand, id4)?;
                    if ind3 == ind4
                        && chord_index(&cand, c1)? == ind1
                        && chord_index(&cand, c2)? == ind2
                    {
                        return Ok(cand);
                    }
                }
            }
            Err(MoveError::S2ConstraintUnsatisfiable)
        }
        S2Direction::Remove { shell1, shell2 } => {
            let (h1, m1) = shell_of(d, *shell1)
                .ok_or_else(|| invalid(format!("chord {shell1} is not a shell")))?;
            let (h2, m2) = shell_of(d, *shell2)
                .ok_or_else(|| invalid(format!("chord {shell2} is not a shell")))?;
            if shell1 == shell2 || h1 == h2 || h1 == *shell2 || h2 == *shell1 {
                return Err(invalid("S2 shells must wrap distinct hosts".into()));
            }
            if d.sign(*shell1)? != -d.sign(*shell2)? {
                return Err(MoveError::S2ConstraintUnsatisfiable);
            }
            if chord_index(d, *shell1)? != chord_index(d, *shell2)? {
                return Err(MoveError::S2ConstraintUnsatisfiable);
            }
            // the wrapped endpoints must become adjacent once the shells go
            let gap_ok = |from: usize, to: usize| -> bool {
                let mut p = (from + 1) % n2;
                while p != to {
                    let c = d.endpoints()[p].chord;
                    if c != *shell1 && c != *shell2 {
                        return false;
                    }
                    p = (p + 1) % n2;
                }
                true
            };
            let (first, second) = if gap_ok(m1, m2) {
                (m1, m2)
            } else if gap_ok(m2, m1) {
                (m2, m1)
            } else {
                return Err(invalid("shell-wrapped endpoints are not adjacent".into()));
            };
            let ind1 = chord_index(d, h1)?;
            let ind2 = chord_index(d, h2)?;
            let mut word = Vec::new();
            let old = word_of(d);
            for (i, &tok) in old.iter().enumerate() {
                if tok.0 == *shell1 || tok.0 == *shell2 {
                    continue;
                }
                // swap the two freed endpoints as we copy
                if i == first {
                    word.push(old[second]);
                } else if i == second {
                    word.push(old[first]);
                } else {
                    word.push(tok);
                }
            }
            let out = GaussDiagram::from_word(word)?;
            if chord_index(&out, h1)? != ind1 || chord_index(&out, h2)? != ind2 {
                return Err(MoveError::S2ConstraintUnsatisfiable);
            }
            Ok(out)
        }
    }
}

/// One replayable rewrite step, on either the diagram or the mirrored graph
/// track.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "track")]
pub enum TraceStep {
    #[serde(rename = "diagram")]
    Diagram { site: DiagramMoveSite },
    #[serde(rename = "graph")]
    Graph { site: OmegaSite },
}

/// Ordered record of applied moves, replayable from the recorded start.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct MoveTrace {
    pub start: String,
    pub steps: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MoveTrace {
    pub fn new(start: &GaussDiagram) -> Self {
        MoveTrace {
            start: serialize_gauss_code(start),
            steps: Vec::new(),
            seed: None,
        }
    }

    /// Replays the trace: diagram steps act on the diagram, graph steps on
    /// the intersection graph of the start diagram.
    pub fn replay(&self) -> Result<(GaussDiagram, crate::graph::IntersectionGraph), MoveError> {
        let mut d = parse_gauss_code(&self.start)?;
        let mut g = build_intersection_graph(&d);
        for step in &self.steps {
            match step {
                TraceStep::Diagram { site } => d = apply_move(&d, site)?,
                TraceStep::Graph { site } => {
                    g = apply_omega(&g, site).map_err(|e| MoveError::InvalidSite(e.to_string()))?
                }
            }
        }
        Ok((d, g))
    }
}

/// Cyclic-word canonical form: the lexicographically minimal rotation after
/// first-appearance relabeling. Two diagrams get equal keys iff they agree
/// up to rotation and chord renaming.
pub fn canonical_cyclic_key(d: &GaussDiagram) -> String {
    let n2 = d.endpoints().len();
    if n2 == 0 {
        return String::new();
    }
    let word = word_of(d);
    let mut best: Option<String> = None;
    for r in 0..n2 {
        let rotated: Vec<Token> = (0..n2).map(|i| word[(i + r) % n2]).collect();
        let canon = GaussDiagram::from_word(rotated).unwrap();
        let key = serialize_gauss_code(&canon);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap()
}

pub const MAX_SEARCH_DEPTH: usize = 6;
pub const MAX_SEARCH_CHORDS: usize = 6;
const MAX_SEARCH_STATES: usize = 100_000;

/// Breadth-first search for a move sequence taking `d1` to a diagram equal
/// to `d2` up to rotation and relabeling.
///
/// Returns immediately with `None` when the writhe polynomials differ (no
/// sequence can exist). The frontier is capped at [`MAX_SEARCH_STATES`]
/// states and intermediate diagrams at one chord above the larger input.
pub fn bounded_equivalence_search(
    d1: &GaussDiagram,
    d2: &GaussDiagram,
    depth: usize,
) -> Result<Option<MoveTrace>, MoveError> {
    if depth > MAX_SEARCH_DEPTH {
        return Err(MoveError::SizeLimit(format!(
            "depth {depth} > cap {MAX_SEARCH_DEPTH}"
        )));
    }
    if d1.chord_count() > MAX_SEARCH_CHORDS || d2.chord_count() > MAX_SEARCH_CHORDS {
        return Err(MoveError::SizeLimit(format!(
            "diagrams above {MAX_SEARCH_CHORDS} chords"
        )));
    }
    if writhe_polynomial(d1) != writhe_polynomial(d2) {
        return Ok(None);
    }
    let target = canonical_cyclic_key(d2);
    let chord_cap = d1.chord_count().max(d2.chord_count()) + 1;

    let start_key = canonical_cyclic_key(d1);
    if start_key == target {
        return Ok(Some(MoveTrace::new(d1)));
    }
    let mut queue: VecDeque<(GaussDiagram, Vec<DiagramMoveSite>)> = VecDeque::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    seen.insert(start_key);
    queue.push_back((d1.clone(), Vec::new()));
    while let Some((d, path)) = queue.pop_front() {
        if path.len() >= depth {
            continue;
        }
        for kind in ALL_MOVE_KINDS {
            for site in enumerate_moves(&d, kind) {
                let next = match apply_move(&d, &site) {
                    Ok(next) => next,
                    Err(_) => continue,
                };
                if next.chord_count() > chord_cap {
                    continue;
                }
                let key = canonical_cyclic_key(&next);
                if !seen.insert(key.clone()) {
                    continue;
                }
                let mut next_path = path.clone();
                next_path.push(site);
                if key == target {
                    let mut trace = MoveTrace::new(d1);
                    trace.steps = next_path
                        .into_iter()
                        .map(|site| TraceStep::Diagram { site })
                        .collect();
                    return Ok(Some(trace));
                }
                if seen.len() > MAX_SEARCH_STATES {
                    return Ok(None);
                }
                queue.push_back((next, next_path));
            }
        }
    }
    Ok(None)
}

/// One recorded assertion failure during fuzzing.
#[derive(Clone, Debug, Serialize)]
pub struct FuzzFailure {
    pub step: usize,
    pub message: String,
    pub trace: MoveTrace,
}

/// Outcome of an invariance fuzz run.
#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub chords: usize,
    pub diagram_moves_applied: usize,
    pub graph_moves_applied: usize,
    pub failures: Vec<FuzzFailure>,
    pub trace: MoveTrace,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Negative-control corruption for fuzz self-tests: flips the crossing sense
/// contribution of one chord in the checked polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    FlipOneSense,
}

/// Generates a random diagram and applies random applicable moves, asserting
/// after every step that the writhe polynomial is unchanged, that diagram
/// and graph computations agree, that S1 preserves the intersection graph up
/// to isomorphism and that S2 satisfies the shell constraints. Random graph
/// moves are mirrored on the intersection-graph track with the same
/// invariant. Failures become report entries with a replayable trace.
pub fn fuzz_invariance(n: usize, moves: usize, seed: u64) -> FuzzReport {
    fuzz_invariance_impl(n, moves, seed, None)
}

#[doc(hidden)]
pub fn fuzz_invariance_impl(
    n: usize,
    moves: usize,
    seed: u64,
    corruption: Option<Corruption>,
) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = crate::diagram::random_diagram(n, seed);
    let w0 = writhe_polynomial(&start);
    let mut d = start.clone();
    let mut g = build_intersection_graph(&start);
    let mut trace = MoveTrace::new(&start);
    trace.seed = Some(seed);
    let mut report = FuzzReport {
        seed,
        chords: n,
        diagram_moves_applied: 0,
        graph_moves_applied: 0,
        failures: Vec::new(),
        trace: MoveTrace::new(&start),
    };

    let checked_w = |d: &GaussDiagram| -> LaurentPolynomial {
        match corruption {
            None => writhe_polynomial(d),
            Some(Corruption::FlipOneSense) => {
                // pretend one chord's crossings were read with the opposite
                // sense: its index term moves to the negated exponent
                let mut w = writhe_polynomial(d);
                if let Some(c) = d.chord_ids().find(|&c| chord_index(d, c).unwrap() != 0) {
                    let ind = chord_index(d, c).unwrap();
                    let sign = d.sign(c).unwrap() as i64;
                    w.add_term(ind, -sign);
                    w.add_term(-ind, sign);
                }
                w
            }
        }
    };

    // growth caps keep long runs tractable: once the diagram or graph gets
    // large, only non-growing kinds stay eligible
    const CHORD_CAP: usize = 12;
    const VERTEX_CAP: usize = 14;
    const EDGE_CAP: usize = 40;

    for step in 0..moves {
        // diagram-level move: random kind, falling back over the others
        let mut kinds = ALL_MOVE_KINDS;
        kinds.shuffle(&mut rng);
        let mut sites = Vec::new();
        for kind in kinds {
            let grows = matches!(kind, MoveKind::R1Add | MoveKind::R2Add);
            if grows && d.chord_count() >= CHORD_CAP {
                continue;
            }
            sites = enumerate_moves(&d, kind);
            if d.chord_count() + 2 > CHORD_CAP && kind == MoveKind::S2 {
                sites.retain(|s| {
                    !matches!(
                        s,
                        DiagramMoveSite::S2 {
                            direction: S2Direction::Insert { .. }
                        }
                    )
                });
            }
            if !sites.is_empty() {
                break;
            }
        }
        if !sites.is_empty() {
            let site = sites[rng.gen_range(0..sites.len())].clone();
            let before = d.clone();
            match apply_move(&d, &site) {
                Ok(next) => {
                    d = next;
                    trace.steps.push(TraceStep::Diagram { site: site.clone() });
                    report.diagram_moves_applied += 1;
                    let mut fail = |message: String| {
                        report.failures.push(FuzzFailure {
                            step,
                            message,
                            trace: trace.clone(),
                        });
                    };
                    if checked_w(&d) != w0 {
                        fail(format!("writhe polynomial changed by {site:?}"));
                    }
                    if writhe_polynomial(&d)
                        != crate::invariants::graph_writhe_polynomial(&build_intersection_graph(&d))
                    {
                        fail("diagram/graph writhe polynomials disagree".into());
                    }
                    if let DiagramMoveSite::S1 { .. } = site {
                        let iso = graphs_isomorphic(
                            &build_intersection_graph(&before),
                            &build_intersection_graph(&d),
                        );
                        if iso != Ok(true) {
                            fail("S1 did not preserve the intersection graph".into());
                        }
                    }
                    if let DiagramMoveSite::S2 { ref direction } = site {
                        if let Some(msg) = check_s2_constraints(&before, &d, direction) {
                            fail(msg);
                        }
                    }
                }
                Err(e) => {
                    report.failures.push(FuzzFailure {
                        step,
                        message: format!("enumerated site failed to apply: {e}"),
                        trace: trace.clone(),
                    });
                }
            }
        }

        // mirrored graph-level move: random kind with the same fallback
        let mut gkinds = [
            OmegaKind::Omega0Add,
            OmegaKind::Omega0Remove,
            OmegaKind::Omega1Add,
            OmegaKind::Omega1Remove,
            OmegaKind::Omega2Add,
            OmegaKind::Omega2Remove,
            OmegaKind::Omega3,
            OmegaKind::Omega3Prime,
        ];
        gkinds.shuffle(&mut rng);
        let mut gsites = Vec::new();
        for kind in gkinds {
            let skip = match kind {
                OmegaKind::Omega0Add => g.edge_count() >= EDGE_CAP,
                OmegaKind::Omega1Add | OmegaKind::Omega2Add => g.vertex_count() >= VERTEX_CAP,
                _ => false,
            };
            if skip {
                continue;
            }
            gsites = enumerate_omega_sites(&g, kind);
            if !gsites.is_empty() {
                break;
            }
        }
        if !gsites.is_empty() {
            let site = gsites[rng.gen_range(0..gsites.len())].clone();
            match apply_omega(&g, &site) {
                Ok(next) => {
                    g = next;
                    trace.steps.push(TraceStep::Graph { site: site.clone() });
                    report.graph_moves_applied += 1;
                    if crate::invariants::graph_writhe_polynomial(&g) != w0 {
                        report.failures.push(FuzzFailure {
                            step,
                            message: format!("graph writhe polynomial changed by {site:?}"),
                            trace: trace.clone(),
                        });
                    }
                }
                Err(e) => {
                    report.failures.push(FuzzFailure {
                        step,
                        message: format!("enumerated graph site failed to apply: {e}"),
                        trace: trace.clone(),
                    });
                }
            }
        }
    }
    report.trace = trace;
    report
}

/// Checks the quoted S2 constraints on an applied move; returns a failure
/// message if any is violated.
pub fn check_s2_constraints(
    before: &GaussDiagram,
    after: &GaussDiagram,
    direction: &S2Direction,
) -> Option<String> {
    match direction {
        S2Direction::Insert { pos, .. } => {
            let n2 = before.endpoints().len();
            let c1 = before.endpoints()[*pos].chord;
            let c2 = before.endpoints()[(pos + 1) % n2].chord;
            let news: Vec<ChordId> = after
                .chord_ids()
                .filter(|c| before.chord(*c).is_err())
                .collect();
            if news.len() != 2 {
                return Some(format!("S2 insert created {} chords", news.len()));
            }
            let (c3, c4) = (news[0], news[1]);
            s2_invariant_violation(before, after, c1, c2, c3, c4)
        }
        S2Direction::Remove { shell1, shell2 } => {
            let (h1, _) = shell_of(before, *shell1)?;
            let (h2, _) = shell_of(before, *shell2)?;
            // same constraints, read on the pre-move diagram
            s2_invariant_violation(after, before, h1, h2, *shell1, *shell2)
        }
    }
}

fn s2_invariant_violation(
    plain: &GaussDiagram,
    shelled: &GaussDiagram,
    c1: ChordId,
    c2: ChordId,
    c3: ChordId,
    c4: ChordId,
) -> Option<String> {
    if shelled.sign(c3).ok()? != -shelled.sign(c4).ok()? {
        return Some("S2 shells do not have opposite signs".into());
    }
    if chord_index(shelled, c3).ok()? != chord_index(shelled, c4).ok()? {
        return Some("S2 shells do not have equal indices".into());
    }
    for c in [c1, c2] {
        if chord_index(plain, c).ok()? != chord_index(shelled, c).ok()? {
            return Some(format!("S2 changed the index of chord {c}"));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::random_diagram;
    use crate::invariants::parse_poly;

    const TREFOIL: &str = "O1+ O2+ U1+ U2+";

    fn tref() -> GaussDiagram {
        parse_gauss_code(TREFOIL).unwrap()
    }

    #[test]
    fn r1_examples() {
        let kink = parse_gauss_code("O1+ U1+").unwrap();
        let sites = enumerate_moves(&kink, MoveKind::R1Remove);
        assert_eq!(sites.len(), 1);
        assert!(apply_move(&kink, &sites[0]).unwrap().is_empty());

        let empty = GaussDiagram::default();
        assert_eq!(enumerate_moves(&empty, MoveKind::R1Add).len(), 4);

        // add then remove at the new chord is the identity
        let t = tref();
        for site in enumerate_moves(&t, MoveKind::R1Add) {
            let d2 = apply_move(&t, &site).unwrap();
            assert_eq!(writhe_polynomial(&d2), parse_poly("t + t^-1 - 2").unwrap());
            let new = d2.chord_ids().find(|c| t.chord(*c).is_err()).unwrap();
            let back = apply_move(&d2, &DiagramMoveSite::R1Remove { chord: new }).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn r2_examples() {
        let t = tref();
        assert!(enumerate_moves(&t, MoveKind::R2Remove).is_empty());

        for site in enumerate_moves(&t, MoveKind::R2Add) {
            let d2 = apply_move(&t, &site).unwrap();
            assert_eq!(writhe_polynomial(&d2), writhe_polynomial(&t), "{site:?}");
            let removes = enumerate_moves(&d2, MoveKind::R2Remove);
            assert!(!removes.is_empty(), "no inverse for {site:?}");
            assert!(removes.iter().any(|r| apply_move(&d2, r).unwrap() == t));
        }
    }

    #[test]
    fn r3_preserves_w_and_indices() {
        let mut tested = 0;
        for seed in 0..200 {
            let d = random_diagram(4, seed);
            for site in enumerate_moves(&d, MoveKind::R3) {
                let d2 = apply_move(&d, &site).unwrap();
                assert_eq!(writhe_polynomial(&d2), writhe_polynomial(&d));
                for c in d.chord_ids() {
                    assert_eq!(chord_index(&d, c).unwrap(), chord_index(&d2, c).unwrap());
                }
                tested += 1;
            }
        }
        assert!(tested > 0, "no R3 sites found across the corpus");
    }

    #[test]
    fn s1_preserves_graph() {
        // build a diagram with a shell: trefoil plus a shell on chord 1
        let d = parse_gauss_code("O3- O1+ U3- O2+ U1+ U2+").unwrap();
        // chord 3 wraps position of O1
        let sites = enumerate_moves(&d, MoveKind::S1);
        assert!(!sites.is_empty());
        for site in sites {
            let d2 = apply_move(&d, &site).unwrap();
            assert_eq!(writhe_polynomial(&d2), writhe_polynomial(&d));
            assert_eq!(
                build_intersection_graph(&d2),
                build_intersection_graph(&d),
                "S1 must preserve the intersection graph exactly"
            );
        }
    }

    #[test]
    fn s2_insert_constraints_and_inverse() {
        for seed in 0..30 {
            let d = random_diagram(4, seed);
            for site in enumerate_moves(&d, MoveKind::S2) {
                let d2 = apply_move(&d, &site).unwrap();
                assert_eq!(writhe_polynomial(&d2), writhe_polynomial(&d), "{site:?}");
                if let DiagramMoveSite::S2 { direction } = &site {
                    assert_eq!(check_s2_constraints(&d, &d2, direction), None);
                }
            }
        }
    }

    #[test]
    fn s2_round_trip() {
        let d = tref();
        let site = DiagramMoveSite::S2 {
            direction: S2Direction::Insert {
                pos: 1,
                sign_new: 1,
            },
        };
        let d2 = apply_move(&d, &site).unwrap();
        assert_eq!(d2.chord_count(), 4);
        let news: Vec<ChordId> = d2.chord_ids().filter(|c| d.chord(*c).is_err()).collect();
        let back = apply_move(
            &d2,
            &DiagramMoveSite::S2 {
                direction: S2Direction::Remove {
                    shell1: news[0],
                    shell2: news[1],
                },
            },
        )
        .unwrap();
        assert_eq!(canonical_cyclic_key(&back), canonical_cyclic_key(&d));
    }

    #[test]
    fn trace_replay() {
        let d = tref();
        let site = DiagramMoveSite::R1Add {
            gap: 0,
            sign: -1,
            over_first: true,
        };
        let d2 = apply_move(&d, &site).unwrap();
        let mut trace = MoveTrace::new(&d);
        trace.steps.push(TraceStep::Diagram { site });
        let (replayed, _) = trace.replay().unwrap();
        assert_eq!(replayed, d2);
        // json round trip
        let json = serde_json::to_string(&trace).unwrap();
        let back: MoveTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn search_examples() {
        let d = tref();
        let trace = bounded_equivalence_search(&d, &d, 0).unwrap().unwrap();
        assert!(trace.steps.is_empty());

        // unequal W: pre-filter
        let p2 = parse_gauss_code("O1+ O2- O3- U1+ U3- U2-").unwrap();
        assert_eq!(bounded_equivalence_search(&d, &p2, 4).unwrap(), None);

        // trefoil vs trefoil-with-kink at depth 1
        let kinked = apply_move(
            &d,
            &DiagramMoveSite::R1Add {
                gap: 2,
                sign: -1,
                over_first: false,
            },
        )
        .unwrap();
        let trace = bounded_equivalence_search(&d, &kinked, 1).unwrap().unwrap();
        assert_eq!(trace.steps.len(), 1);
        let (end, _) = trace.replay().unwrap();
        assert_eq!(canonical_cyclic_key(&end), canonical_cyclic_key(&kinked));

        assert!(matches!(
            bounded_equivalence_search(&d, &kinked, 99),
            Err(MoveError::SizeLimit(_))
        ));
    }

    #[test]
    fn fuzz_small_runs_pass() {
        let r = fuzz_invariance(0, 0, 1);
        assert!(r.passed());
        for seed in 0..5 {
            let r = fuzz_invariance(5, 20, seed);
            assert!(r.passed(), "failures: {:?}", r.failures);
            let (dd, gg) = r.trace.replay().unwrap();
            assert_eq!(
                writhe_polynomial(&dd),
                writhe_polynomial(&parse_gauss_code(&r.trace.start).unwrap())
            );
            assert_eq!(
                crate::invariants::graph_writhe_polynomial(&gg),
                writhe_polynomial(&dd)
            );
        }
    }

    #[test]
    fn fuzz_negative_control() {
        let r = fuzz_invariance_impl(6, 30, 7, Some(Corruption::FlipOneSense));
        assert!(!r.passed(), "corrupted run must report failures");
    }
}
