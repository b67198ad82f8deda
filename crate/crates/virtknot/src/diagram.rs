//! Gauss diagram model, Gauss code text format and diagram surgery.
//!
//! A Gauss diagram is a counterclockwise oriented circle with `2n` marked
//! points joined in pairs by signed, directed chords. Each chord records one
//! classical crossing; it is directed from the preimage of the overcrossing
//! (the tail) to the preimage of the undercrossing (the head) and carries the
//! crossing sign.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifier of a chord. Arbitrary nonnegative integer, unique within a diagram.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ChordId(pub u32);

impl fmt::Display for ChordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which preimage of a crossing an endpoint is.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "O")]
    Over,
    #[serde(rename = "U")]
    Under,
}

impl Role {
    pub fn flip(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }
}

/// One marked point on the circle.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EndpointRef {
    pub chord: ChordId,
    pub role: Role,
}

/// Per-chord data: sign and the circle positions of its two endpoints.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ChordData {
    /// Crossing sign, `+1` or `-1`.
    pub sign: i8,
    /// Position of the overcrossing preimage (tail of the chord).
    pub over_pos: usize,
    /// Position of the undercrossing preimage (head of the chord).
    pub under_pos: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("empty token in Gauss code")]
    EmptyToken,
    #[error("malformed token `{0}` (expected O<id><sign> or U<id><sign>)")]
    BadToken(String),
    #[error("chord {0} does not appear exactly once as O and once as U")]
    RoleError(ChordId),
    #[error("the two tokens of chord {0} disagree in sign")]
    SignMismatch(ChordId),
    #[error("unknown chord {0}")]
    UnknownChord(ChordId),
    #[error("chords {0} and {1} do not cross")]
    NotCrossing(ChordId, ChordId),
}

/// A Gauss diagram: cyclic word of `2n` endpoints plus per-chord data.
///
/// Invariants, enforced on construction: every chord appears exactly twice in
/// `endpoints`, once with each role; positions recorded in `chords` agree with
/// the word. The empty diagram (`n = 0`) is valid.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GaussDiagram {
    endpoints: Vec<EndpointRef>,
    chords: BTreeMap<ChordId, ChordData>,
}

impl GaussDiagram {
    /// Builds a diagram from an endpoint word, checking all invariants.
    pub fn from_word(word: Vec<(ChordId, Role, i8)>) -> Result<GaussDiagram, DiagramError> {
        let mut chords: BTreeMap<ChordId, (Option<usize>, Option<usize>, i8)> = BTreeMap::new();
        for (pos, &(id, role, sign)) in word.iter().enumerate() {
            let entry = chords.entry(id).or_insert((None, None, sign));
            if entry.2 != sign {
                return Err(DiagramError::SignMismatch(id));
            }
            let slot = match role {
                Role::Over => &mut entry.0,
                Role::Under => &mut entry.1,
            };
            if slot.is_some() {
                return Err(DiagramError::RoleError(id));
            }
            *slot = Some(pos);
        }
        let mut out = BTreeMap::new();
        for (id, (over, under, sign)) in chords {
            match (over, under) {
                (Some(over_pos), Some(under_pos)) => {
                    out.insert(
                        id,
                        ChordData {
                            sign,
                            over_pos,
                            under_pos,
                        },
                    );
                }
                _ => return Err(DiagramError::RoleError(id)),
            }
        }
        let endpoints = word
            .into_iter()
            .map(|(chord, role, _)| EndpointRef { chord, role })
            .collect();
        Ok(GaussDiagram {
            endpoints,
            chords: out,
        })
    }

    /// Number of chords `n`.
    pub fn chord_count(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    /// Endpoint word, positions `0..2n` counterclockwise.
    pub fn endpoints(&self) -> &[EndpointRef] {
        &self.endpoints
    }

    pub fn chord_ids(&self) -> impl Iterator<Item = ChordId> + '_ {
        self.chords.keys().copied()
    }

    pub fn chord(&self, c: ChordId) -> Result<ChordData, DiagramError> {
        self.chords
            .get(&c)
            .copied()
            .ok_or(DiagramError::UnknownChord(c))
    }

    pub fn sign(&self, c: ChordId) -> Result<i8, DiagramError> {
        Ok(self.chord(c)?.sign)
    }

    /// True iff position `x` lies strictly inside the counterclockwise arc
    /// from `a` to `b`.
    fn ccw_between(a: usize, b: usize, x: usize) -> bool {
        if a < b {
            a < x && x < b
        } else {
            x > a || x < b
        }
    }

    /// True iff the chords cross: exactly one endpoint of `c2` lies on the
    /// counterclockwise arc strictly between the endpoints of `c1`.
    pub fn interleaves(&self, c1: ChordId, c2: ChordId) -> Result<bool, DiagramError> {
        let d1 = self.chord(c1)?;
        let d2 = self.chord(c2)?;
        Ok(Self::ccw_between(d1.over_pos, d1.under_pos, d2.over_pos)
            != Self::ccw_between(d1.over_pos, d1.under_pos, d2.under_pos))
    }

    /// Direction in which `x` crosses `c`: `+1` for left-to-right, `-1` for
    /// right-to-left.
    ///
    /// Fixed convention: the sense is `+1` iff the tail (over endpoint) of `x`
    /// lies on the counterclockwise arc from the head of `c` to the tail of
    /// `c`. Antisymmetric: `crossing_sense(c, x) == -crossing_sense(x, c)`.
    pub fn crossing_sense(&self, c: ChordId, x: ChordId) -> Result<i8, DiagramError> {
        if !self.interleaves(c, x)? {
            return Err(DiagramError::NotCrossing(c, x));
        }
        let dc = self.chord(c)?;
        let dx = self.chord(x)?;
        Ok(
            if Self::ccw_between(dc.under_pos, dc.over_pos, dx.over_pos) {
                1
            } else {
                -1
            },
        )
    }

    /// Chords interleaving `c`, with senses.
    pub fn crossings_of(&self, c: ChordId) -> Result<Vec<(ChordId, i8)>, DiagramError> {
        self.chord(c)?;
        let mut out = Vec::new();
        for x in self.chord_ids() {
            if x != c && self.interleaves(c, x)? {
                out.push((x, self.crossing_sense(c, x)?));
            }
        }
        Ok(out)
    }

    /// Concatenates the endpoint words of `self` and `other` at their
    /// basepoints, relabeling chords disjointly. Chords of the two summands
    /// never interleave, so all indices are preserved and the writhe
    /// polynomials add.
    pub fn connected_sum(&self, other: &GaussDiagram) -> GaussDiagram {
        let offset = self.chord_ids().map(|c| c.0 + 1).max().unwrap_or(0);
        let word = self
            .word()
            .into_iter()
            .chain(
                other
                    .word()
                    .into_iter()
                    .map(|(id, role, sign)| (ChordId(id.0 + offset), role, sign)),
            )
            .collect();
        GaussDiagram::from_word(word).expect("concatenation of valid words is valid")
    }

    /// Switches the crossing of chord `c`: over/under positions swap and the
    /// sign negates. Involution.
    pub fn crossing_switch(&self, c: ChordId) -> Result<GaussDiagram, DiagramError> {
        self.chord(c)?;
        let word = self
            .word()
            .into_iter()
            .map(|(id, role, sign)| {
                if id == c {
                    (id, role.flip(), -sign)
                } else {
                    (id, role, sign)
                }
            })
            .collect();
        Ok(GaussDiagram::from_word(word).expect("switch preserves validity"))
    }

    /// The endpoint word as `(chord, role, sign)` triples.
    pub fn word(&self) -> Vec<(ChordId, Role, i8)> {
        self.endpoints
            .iter()
            .map(|e| (e.chord, e.role, self.chords[&e.chord].sign))
            .collect()
    }

    /// Relabels chords by first appearance starting at 1.
    pub fn canonical_labels(&self) -> GaussDiagram {
        let mut map: BTreeMap<ChordId, u32> = BTreeMap::new();
        let mut next = 1u32;
        for e in &self.endpoints {
            map.entry(e.chord).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
        }
        let word = self
            .word()
            .into_iter()
            .map(|(id, role, sign)| (ChordId(map[&id]), role, sign))
            .collect();
        GaussDiagram::from_word(word).expect("relabeling preserves validity")
    }

    /// Smallest unused chord id.
    pub fn fresh_chord_id(&self) -> ChordId {
        ChordId(self.chord_ids().map(|c| c.0 + 1).max().unwrap_or(1))
    }
}

/// Parses the Gauss code text format: whitespace-separated tokens
/// `O<id><sign>` / `U<id><sign>` with sign `+` or `-`, listed in
/// counterclockwise circle order.
pub fn parse_gauss_code(text: &str) -> Result<GaussDiagram, DiagramError> {
    let mut word = Vec::new();
    for tok in text.split_whitespace() {
        let mut chars = tok.chars();
        let role = match chars.next() {
            Some('O') => Role::Over,
            Some('U') => Role::Under,
            _ => return Err(DiagramError::BadToken(tok.to_string())),
        };
        let rest: &str = chars.as_str();
        if rest.len() < 2 {
            return Err(DiagramError::BadToken(tok.to_string()));
        }
        let (digits, sign_str) = rest.split_at(rest.len() - 1);
        let sign = match sign_str {
            "+" => 1i8,
            "-" => -1i8,
            _ => return Err(DiagramError::BadToken(tok.to_string())),
        };
        let id: u32 = digits
            .parse()
            .map_err(|_| DiagramError::BadToken(tok.to_string()))?;
        word.push((ChordId(id), role, sign));
    }
    GaussDiagram::from_word(word)
}

/// Serializes to the Gauss code text format, single-space separated, chord
/// ids relabeled by first appearance starting at 1. Empty diagram gives "".
pub fn serialize_gauss_code(d: &GaussDiagram) -> String {
    let canon = d.canonical_labels();
    canon
        .word()
        .iter()
        .map(|(id, role, sign)| {
            format!(
                "{}{}{}",
                match role {
                    Role::Over => 'O',
                    Role::Under => 'U',
                },
                id.0,
                if *sign > 0 { '+' } else { '-' }
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// JSON export of a diagram.
#[derive(Serialize, Deserialize)]
pub struct DiagramJson {
    pub endpoints: Vec<EndpointRef>,
    pub signs: BTreeMap<String, i8>,
}

pub fn diagram_to_json(d: &GaussDiagram) -> String {
    let signs = d
        .chord_ids()
        .map(|c| (c.0.to_string(), d.sign(c).unwrap()))
        .collect();
    let json = DiagramJson {
        endpoints: d.endpoints().to_vec(),
        signs,
    };
    serde_json::to_string(&json).expect("diagram json serialization")
}

/// Deterministic random diagram with `n` chords: uniformly shuffled endpoint
/// word, independent uniform signs and over/under role order.
pub fn random_diagram(n: usize, seed: u64) -> GaussDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<usize> = (0..2 * n).collect();
    positions.shuffle(&mut rng);
    let mut word = vec![None; 2 * n];
    for i in 0..n {
        let sign: i8 = if rng.gen::<bool>() { 1 } else { -1 };
        let (mut p, mut q) = (positions[2 * i], positions[2 * i + 1]);
        if rng.gen::<bool>() {
            std::mem::swap(&mut p, &mut q);
        }
        let id = ChordId(i as u32 + 1);
        word[p] = Some((id, Role::Over, sign));
        word[q] = Some((id, Role::Under, sign));
    }
    let word = word.into_iter().map(|e| e.unwrap()).collect();
    // canonical labels so the diagram round-trips through its Gauss code
    // exactly (the serializer relabels by first appearance)
    GaussDiagram::from_word(word)
        .expect("random word is valid")
        .canonical_labels()
}
