//! Laurent polynomial arithmetic, chord index, writhe polynomial and the
//! graph-equivalence decision.
//!
//! The writhe polynomial of a diagram `D` is
//! `W(t) = sum_c w(c) t^Ind(c) - w(D)`
//! where `Ind(c)` is the signed, direction-weighted count of chords crossing
//! `c` and `w(D)` the writhe. The same value can be computed from the
//! intersection graph alone, which is what makes writhe-polynomial equality
//! decide intersection-graph equivalence.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{ChordId, DiagramError, GaussDiagram};
use crate::graph::{IntersectionGraph, VertexId};

/// Bound on coefficient magnitude accepted by the text parser.
pub const MAX_COEFF: i64 = 1_000_000;
/// Bound on exponent magnitude accepted by the text parser.
pub const MAX_EXP: i64 = 1_000;

/// Sparse integer Laurent polynomial: exponent -> nonzero coefficient.
///
/// Arithmetic is exact over `i64`; inputs are kept desk-scale by the parser
/// bounds [`MAX_COEFF`] and [`MAX_EXP`].
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, i64>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot parse polynomial term `{0}`")]
    PolyParseError(String),
    #[error("coefficient or exponent out of supported range (|coeff| <= 10^6, |exp| <= 10^3)")]
    OutOfRange,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Single term `coeff * t^exp`.
    pub fn term(exp: i64, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        let c = self.coeffs.entry(exp).or_insert(0);
        *c = c
            .checked_add(coeff)
            .expect("polynomial coefficient overflow");
        if *c == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn negate(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            out.add_term(
                e,
                c.checked_mul(k).expect("polynomial coefficient overflow"),
            );
        }
        out
    }

    /// `f(1)`, the sum of coefficients.
    pub fn eval_at_one(&self) -> i64 {
        self.terms().map(|(_, c)| c).sum()
    }

    /// `f'(1)`, the exponent-weighted sum of coefficients.
    pub fn derivative_at_one(&self) -> i64 {
        self.terms().map(|(e, c)| e * c).sum()
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Canonical form: descending absolute exponent with the positive
    /// exponent first on ties (so the constant comes last), coefficient
    /// elided when `+-1` (except for the constant term), `t^0` elided,
    /// `t^1` as `t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(i64, i64)> = self.coeffs.iter().map(|(&e, &c)| (e, c)).collect();
        ordered.sort_by_key(|&(e, _)| (std::cmp::Reverse(e.abs()), std::cmp::Reverse(e)));
        for (i, (exp, coeff)) in ordered.into_iter().enumerate() {
            let mag = coeff.unsigned_abs();
            if i == 0 {
                if coeff < 0 {
                    write!(f, "-")?;
                }
            } else if coeff < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match exp {
                0 => write!(f, "{mag}")?,
                1 => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "t")?;
                }
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "t^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

/// Parses the polynomial text grammar: terms `<int>`, `t`, `t^<int>`,
/// `<int>t`, `<int>t^<int>` joined by `+`/`-`; exponents may be negative as
/// `t^-2`. Whitespace is ignored.
pub fn parse_poly(text: &str) -> Result<LaurentPolynomial, PolyError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = LaurentPolynomial::zero();
    if compact.is_empty() || compact == "0" {
        return Ok(out);
    }
    // split into signed terms
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    let mut chars = compact.chars().peekable();
    let mut expect_term_start = true;
    while let Some(ch) = chars.next() {
        match ch {
            '+' | '-' if !expect_term_start => {
                terms.push((sign, std::mem::take(&mut cur)));
                sign = if ch == '-' { -1 } else { 1 };
                expect_term_start = true;
            }
            '-' if expect_term_start && cur.is_empty() => {
                sign = -sign;
            }
            '+' if expect_term_start && cur.is_empty() => {}
            _ => {
                cur.push(ch);
                // a '-' directly after '^' belongs to the exponent
                if ch == '^' {
                    if let Some(&next) = chars.peek() {
                        if next == '-' || next == '+' {
                            cur.push(chars.next().unwrap());
                        }
                    }
                }
                expect_term_start = false;
            }
        }
    }
    if cur.is_empty() {
        return Err(PolyError::PolyParseError(text.to_string()));
    }
    terms.push((sign, cur));

    for (sign, term) in terms {
        let (exp, mag) = parse_term(&term)?;
        if mag.abs() > MAX_COEFF || exp.abs() > MAX_EXP {
            return Err(PolyError::OutOfRange);
        }
        out.add_term(exp, sign * mag);
        if out.coeff(exp).abs() > MAX_COEFF {
            return Err(PolyError::OutOfRange);
        }
    }
    Ok(out)
}

fn parse_term(term: &str) -> Result<(i64, i64), PolyError> {
    let bad = || PolyError::PolyParseError(term.to_string());
    match term.find('t') {
        None => {
            let c: i64 = term.parse().map_err(|_| bad())?;
            Ok((0, c))
        }
        Some(tpos) => {
            let coeff_str = &term[..tpos];
            let coeff: i64 = if coeff_str.is_empty() {
                1
            } else {
                coeff_str.parse().map_err(|_| bad())?
            };
            let rest = &term[tpos + 1..];
            let exp: i64 = if rest.is_empty() {
                1
            } else {
                let stripped = rest.strip_prefix('^').ok_or_else(bad)?;
                stripped.parse().map_err(|_| bad())?
            };
            Ok((exp, coeff))
        }
    }
}

/// Per-chord sign and index table plus the writhe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexProfile {
    pub chords: BTreeMap<ChordId, (i8, i64)>,
    pub writhe: i64,
}

/// `Ind(c)`: the sum over chords `x` crossing `c` of `sense(c, x) * sign(x)`.
pub fn chord_index(d: &GaussDiagram, c: ChordId) -> Result<i64, DiagramError> {
    Ok(d.crossings_of(c)?
        .into_iter()
        .map(|(x, sense)| sense as i64 * d.sign(x).unwrap() as i64)
        .sum())
}

/// Sum of chord signs.
pub fn writhe(d: &GaussDiagram) -> i64 {
    d.chord_ids().map(|c| d.sign(c).unwrap() as i64).sum()
}

pub fn index_profile(d: &GaussDiagram) -> IndexProfile {
    let chords = d
        .chord_ids()
        .map(|c| (c, (d.sign(c).unwrap(), chord_index(d, c).unwrap())))
        .collect();
    IndexProfile {
        chords,
        writhe: writhe(d),
    }
}

/// `W(t) = sum_c w(c) t^Ind(c) - w(D)`.
pub fn writhe_polynomial(d: &GaussDiagram) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for c in d.chord_ids() {
        p.add_term(chord_index(d, c).unwrap(), d.sign(c).unwrap() as i64);
    }
    p.add_term(0, -writhe(d));
    p
}

/// `W` computed from the intersection graph alone:
/// `sum_v w(v) t^Ind(v) - sum_v w(v)`.
pub fn graph_writhe_polynomial(g: &IntersectionGraph) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    let mut total = 0i64;
    for v in g.vertex_ids() {
        let sign = g.sign(v).unwrap() as i64;
        p.add_term(g.vertex_index(v).unwrap(), sign);
        total += sign;
    }
    p.add_term(0, -total);
    p
}

/// True iff `f(1) = 0` and `f'(1) = 0`: the exact characterization of the
/// writhe polynomials of virtual knots.
pub fn is_realizable(f: &LaurentPolynomial) -> bool {
    f.eval_at_one() == 0 && f.derivative_at_one() == 0
}

/// Decides intersection-graph equivalence by writhe-polynomial equality.
///
/// Defined on all vertex-signed directed multigraphs; the knot-theoretic
/// meaning (equivalence under the graph moves) is guaranteed for graphs of
/// virtual knot diagrams.
pub fn graphs_equivalent(g1: &IntersectionGraph, g2: &IntersectionGraph) -> bool {
    graph_writhe_polynomial(g1) == graph_writhe_polynomial(g2)
}

/// Convenience: vertex index of the vertex that carries a chord id.
pub fn graph_vertex_for_chord(c: ChordId) -> VertexId {
    VertexId(c.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_gauss_code, random_diagram};
    use crate::graph::build_intersection_graph;

    const TREFOIL: &str = "O1+ O2+ U1+ U2+";
    const P2: &str = "O1+ O2- O3- U1+ U3- U2-";

    #[test]
    fn poly_parse_and_format() {
        let f = parse_poly("t + t^-1 - 2").unwrap();
        assert_eq!(f.coeff(1), 1);
        assert_eq!(f.coeff(-1), 1);
        assert_eq!(f.coeff(0), -2);
        assert_eq!(f.to_string(), "t + t^-1 - 2");
        assert_eq!(parse_poly(&f.to_string()).unwrap(), f);

        assert_eq!(parse_poly("0").unwrap(), LaurentPolynomial::zero());
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
        assert_eq!(parse_poly("3t^2-t+5").unwrap().to_string(), "3t^2 - t + 5");
        assert_eq!(parse_poly("-2t^-3 + 4").unwrap().to_string(), "-2t^-3 + 4");
        assert!(parse_poly("t^").is_err());
        assert!(parse_poly("q+1").is_err());
        assert_eq!(parse_poly("t^2000"), Err(PolyError::OutOfRange));
        assert_eq!(parse_poly("2000000"), Err(PolyError::OutOfRange));
    }

    #[test]
    fn poly_arithmetic() {
        let f = parse_poly("t^2 - 2t + 1").unwrap();
        assert!(f.add(&f.negate()).is_zero());
        assert_eq!(f.eval_at_one(), 0);
        assert_eq!(f.derivative_at_one(), 0);
        assert_eq!(f.scale(3).coeff(1), -6);
        let g = parse_poly("t - 1").unwrap();
        assert_eq!(g.eval_at_one(), 0);
        assert_eq!(g.derivative_at_one(), 1);
    }

    #[test]
    fn chord_index_examples() {
        let t = parse_gauss_code(TREFOIL).unwrap();
        let mut inds: Vec<i64> = t.chord_ids().map(|c| chord_index(&t, c).unwrap()).collect();
        inds.sort();
        assert_eq!(inds, vec![-1, 1]);

        let p2 = parse_gauss_code(P2).unwrap();
        assert_eq!(chord_index(&p2, ChordId(1)).unwrap(), 2);
        assert_eq!(chord_index(&p2, ChordId(2)).unwrap(), 1);
        assert_eq!(chord_index(&p2, ChordId(3)).unwrap(), 1);
    }

    #[test]
    fn writhe_examples() {
        assert_eq!(writhe(&GaussDiagram::default()), 0);
        assert_eq!(writhe(&parse_gauss_code(TREFOIL).unwrap()), 2);
        assert_eq!(writhe(&parse_gauss_code(P2).unwrap()), -1);
    }

    #[test]
    fn writhe_polynomial_examples() {
        assert!(writhe_polynomial(&GaussDiagram::default()).is_zero());
        let t = writhe_polynomial(&parse_gauss_code(TREFOIL).unwrap());
        assert_eq!(t, parse_poly("t + t^-1 - 2").unwrap());
        let p2 = writhe_polynomial(&parse_gauss_code(P2).unwrap());
        assert_eq!(p2, parse_poly("t^2 - 2t + 1").unwrap());
    }

    #[test]
    fn connected_sum_is_additive() {
        let t = parse_gauss_code(TREFOIL).unwrap();
        let s = t.connected_sum(&t);
        let wt = writhe_polynomial(&t);
        assert_eq!(writhe_polynomial(&s), wt.add(&wt));
        assert_eq!(writhe_polynomial(&s), parse_poly("2t + 2t^-1 - 4").unwrap());
        for seed in 0..20 {
            let d1 = random_diagram(4, seed);
            let d2 = random_diagram(5, seed + 1000);
            assert_eq!(
                writhe_polynomial(&d1.connected_sum(&d2)),
                writhe_polynomial(&d1).add(&writhe_polynomial(&d2))
            );
        }
    }

    #[test]
    fn realizability_examples() {
        assert!(is_realizable(&LaurentPolynomial::zero()));
        assert!(is_realizable(&parse_poly("t^2 - 2t + 1").unwrap()));
        assert!(!is_realizable(&parse_poly("t - 1").unwrap()));
    }

    #[test]
    fn necessity_on_random_diagrams() {
        for seed in 0..100 {
            let d = random_diagram(8, seed);
            let w = writhe_polynomial(&d);
            assert_eq!(w.eval_at_one(), 0, "W(1) != 0 at seed {seed}");
            assert_eq!(w.derivative_at_one(), 0, "W'(1) != 0 at seed {seed}");
            // equivalent statement on the index profile
            let prof = index_profile(&d);
            let s: i64 = prof.chords.values().map(|&(w, i)| w as i64 * i).sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn diagram_graph_agreement() {
        for seed in 0..100 {
            let d = random_diagram(7, seed);
            let g = build_intersection_graph(&d);
            assert_eq!(writhe_polynomial(&d), graph_writhe_polynomial(&g));
        }
    }

    #[test]
    fn graphs_equivalent_examples() {
        let t = parse_gauss_code(TREFOIL).unwrap();
        let g1 = build_intersection_graph(&t);
        let g2 = build_intersection_graph(&t.connected_sum(&t));
        assert!(graphs_equivalent(&g1, &g1));
        assert!(!graphs_equivalent(&g1, &g2));
    }

    #[test]
    fn poly_json_round_trip() {
        let f = parse_poly("t^2 - 2t + 1").unwrap();
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"0":1,"1":-2,"2":1}"#);
        let back: LaurentPolynomial = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
    }
}
