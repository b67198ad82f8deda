//! Constructive realization of admissible Laurent polynomials.
//!
//! Any polynomial with f(1) = 0 and f'(1) = 0 is the writhe polynomial of
//! some diagram. This module builds an explicit witness: a small generating
//! family of diagrams whose writhe polynomials span the admissible lattice,
//! a deterministic decomposition of f over that basis, and assembly by
//! connected sum.

use serde::{Deserialize, Serialize};

use crate::diagram::{parse_gauss_code, GaussDiagram};
use crate::invariants::{is_realizable, LaurentPolynomial};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RealizeError {
    #[error("invalid generator spec: {0}")]
    BadSpec(String),
    #[error("polynomial is not realizable: {0}")]
    NotRealizable(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GeneratorFamily {
    /// Positive-exponent generator, k >= 2: basis t^k - k*t + (k-1).
    P,
    /// Negative-exponent generator, k <= -2: basis t^k - |k|*t^-1 + (|k|-1).
    N,
    /// Virtual trefoil, k = 1 marker: basis t + t^-1 - 2.
    T,
}

/// One generator diagram: a family member together with the orientation
/// deciding whether it contributes +basis or -basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: GeneratorFamily,
    pub k: i64,
    pub orientation: i8,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<(), RealizeError> {
        let range_ok = match self.family {
            GeneratorFamily::P => self.k >= 2,
            GeneratorFamily::N => self.k <= -2,
            GeneratorFamily::T => self.k == 1,
        };
        if !range_ok {
            return Err(RealizeError::BadSpec(format!(
                "exponent {} out of range for family {:?}",
                self.k, self.family
            )));
        }
        if self.orientation.abs() != 1 {
            return Err(RealizeError::BadSpec(format!(
                "orientation {} not ±1",
                self.orientation
            )));
        }
        Ok(())
    }

    /// The polynomial this generator's diagram realizes:
    /// orientation × basis(family, k).
    pub fn basis(&self) -> Result<LaurentPolynomial, RealizeError> {
        self.validate()?;
        let mut f = LaurentPolynomial::default();
        match self.family {
            GeneratorFamily::P => {
                f.add_term(self.k, 1);
                f.add_term(1, -self.k);
                f.add_term(0, self.k - 1);
            }
            GeneratorFamily::N => {
                let m = -self.k;
                f.add_term(self.k, 1);
                f.add_term(-1, -m);
                f.add_term(0, m - 1);
            }
            GeneratorFamily::T => {
                f.add_term(1, 1);
                f.add_term(-1, 1);
                f.add_term(0, -2);
            }
        }
        if self.orientation == -1 {
            f = f.negate();
        }
        Ok(f)
    }
}

/// Builds the word for the positive-orientation P(k) diagram: one positive
/// main chord crossed by k mutually non-crossing negative satellites.
fn p_word(k: i64) -> String {
    let mut toks = vec!["O1+".to_string()];
    for i in 2..=(k + 1) {
        toks.push(format!("O{i}-"));
    }
    toks.push("U1+".to_string());
    for i in (2..=(k + 1)).rev() {
        toks.push(format!("U{i}-"));
    }
    toks.join(" ")
}

/// Builds the word for the positive-orientation N(k) diagram (k <= -2): the
/// satellites cross the main chord in the mirrored direction.
fn n_word(k: i64) -> String {
    let m = -k;
    let mut toks = vec!["O1+".to_string()];
    for i in 2..=(m + 1) {
        toks.push(format!("U{i}-"));
    }
    toks.push("U1+".to_string());
    for i in (2..=(m + 1)).rev() {
        toks.push(format!("O{i}-"));
    }
    toks.join(" ")
}

const TREFOIL_WORD: &str = "O1+ O2+ U1+ U2+";

fn flip_signs(code: &str) -> String {
    code.chars()
        .map(|c| match c {
            '+' => '-',
            '-' => '+',
            other => other,
        })
        .collect()
}

/// The fixed diagram whose writhe polynomial is `spec.basis()`.
///
/// Negating every sign of a diagram sends W(t) to -W(t^-1), so the
/// orientation -1 member of each family is the sign-flipped diagram of the
/// opposite-exponent family.
pub fn generator_diagram(spec: &GeneratorSpec) -> Result<GaussDiagram, RealizeError> {
    spec.validate()?;
    let code = match (spec.family, spec.orientation) {
        (GeneratorFamily::P, 1) => p_word(spec.k),
        (GeneratorFamily::N, 1) => n_word(spec.k),
        (GeneratorFamily::T, 1) => TREFOIL_WORD.to_string(),
        (GeneratorFamily::P, _) => flip_signs(&n_word(-spec.k)),
        (GeneratorFamily::N, _) => flip_signs(&p_word(-spec.k)),
        (GeneratorFamily::T, _) => flip_signs(TREFOIL_WORD),
    };
    Ok(parse_gauss_code(&code).expect("generator words are well formed"))
}

/// Deterministic decomposition of an admissible polynomial over the
/// generator basis.
///
/// The coefficient of t^k for |k| >= 2 is touched by exactly one basis
/// element, so the P/N multiplicities are forced; the remainder is supported
/// on {-1, 0, 1} and admissibility forces it to be a multiple of the trefoil
/// basis.
pub fn decompose(f: &LaurentPolynomial) -> Result<Vec<(GeneratorSpec, u64)>, RealizeError> {
    if !is_realizable(f) {
        return Err(RealizeError::NotRealizable(format!(
            "f(1) = {}, f'(1) = {}",
            f.eval_at_one(),
            f.derivative_at_one()
        )));
    }
    let mut out = Vec::new();
    let mut rest = f.clone();
    // largest |k| first so termination is by strictly shrinking support
    let mut exps: Vec<i64> = rest
        .terms()
        .map(|(e, _)| e)
        .filter(|e| e.abs() >= 2)
        .collect();
    exps.sort_by_key(|e| std::cmp::Reverse(e.abs()));
    for k in exps {
        let a = rest.coeff(k);
        if a == 0 {
            continue;
        }
        let family = if k >= 2 {
            GeneratorFamily::P
        } else {
            GeneratorFamily::N
        };
        let spec = GeneratorSpec {
            family,
            k,
            orientation: if a > 0 { 1 } else { -1 },
        };
        rest = rest.add(&spec.basis()?.scale(-a.abs()));
        out.push((spec, a.unsigned_abs()));
    }
    let a = rest.coeff(1);
    if a != 0 {
        let spec = GeneratorSpec {
            family: GeneratorFamily::T,
            k: 1,
            orientation: if a > 0 { 1 } else { -1 },
        };
        rest = rest.add(&spec.basis()?.scale(-a.abs()));
        out.push((spec, a.unsigned_abs()));
    }
    debug_assert!(
        rest.is_zero(),
        "admissible remainder must vanish, got {rest}"
    );
    Ok(out)
}

/// Builds a diagram whose writhe polynomial is exactly `f`, as the connected
/// sum of generator diagrams over `decompose(f)`.
pub fn realize(f: &LaurentPolynomial) -> Result<GaussDiagram, RealizeError> {
    let parts = decompose(f)?;
    let mut acc = GaussDiagram::default();
    for (spec, mult) in parts {
        let g = generator_diagram(&spec)?;
        for _ in 0..mult {
            acc = acc.connected_sum(&g);
        }
    }
    Ok(acc)
}
