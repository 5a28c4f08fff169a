//! Chiral quadratic data `(N, P)` on the affine line in coordinates.
//!
//! `N` is a list of generators `e_1..e_r`; `P` is the `Q[t]`-span of relation
//! rows, each a vector of Laurent polynomials indexed by the ordered pairs
//! `(i, j)` (basis `e_i ⊠ e_j`, flat index `i * r + j`). Inverting `t` restricts
//! to the complement of the diagonal.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::laurent::{pivots_are_monomial, LaurentError, LaurentMatrix, LaurentPoly};
use crate::scalar::{one, Scalar};

/// Suffix marking the dual of a generator.
pub const DUAL_SUFFIX: &str = "^v";
/// Reserved name of the unit generator of a QLS datum.
pub const UNIT_NAME: &str = "unit";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("relation row {row} has length {len}, expected {expected}")]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("relation row {0} is zero")]
    ZeroRow(usize),
    #[error("datum is not dualizable (determinant {determinant})")]
    NotDualizable { determinant: LaurentPoly },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn flip(self) -> Self {
        Self::from_odd(!self.is_odd())
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, other: Parity) -> Parity {
        Self::from_odd(self.is_odd() != other.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    /// Cohomological degree.
    pub degree: i64,
    /// Intrinsic super parity.
    pub parity: Parity,
    /// Conformal weight.
    pub weight: Scalar,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: i64, parity: Parity, weight: Scalar) -> Self {
        Self {
            name: name.into(),
            degree,
            parity,
            weight,
        }
    }

    pub fn even(name: impl Into<String>, weight: Scalar) -> Self {
        Self::new(name, 0, Parity::Even, weight)
    }

    pub fn unit() -> Self {
        Self::new(UNIT_NAME, 0, Parity::Even, Scalar::zero())
    }

    pub fn is_unit(&self) -> bool {
        self.name == UNIT_NAME
    }

    /// Intrinsic parity plus degree mod 2; the parity used in every Koszul sign.
    pub fn total_parity(&self) -> Parity {
        self.parity + Parity::from_odd(self.degree.rem_euclid(2) == 1)
    }

    /// The suspended dual `s^{-1} x^v`: degree `-d-1`, weight `1-w`, total
    /// parity flipped. The dual of `x^v` is identified with `x` again; the
    /// second return value is true in that case, where the identification
    /// `V -> V^vv` contributes the sign `(-1)^{p(x)}`.
    pub fn dual(&self) -> (GeneratorSpec, bool) {
        let (name, identified) = match self.name.strip_suffix(DUAL_SUFFIX) {
            Some(base) => (base.to_string(), true),
            None => (format!("{}{DUAL_SUFFIX}", self.name), false),
        };
        (
            GeneratorSpec {
                name,
                degree: -self.degree - 1,
                parity: self.parity,
                weight: one() - &self.weight,
            },
            identified,
        )
    }
}

pub type RelationRow = Vec<LaurentPoly>;

/// Generators plus relation rows over `e_i ⊠ e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticDatum {
    generators: Vec<GeneratorSpec>,
    relations: Vec<RelationRow>,
}

impl QuadraticDatum {
    pub fn new(generators: Vec<GeneratorSpec>, relations: Vec<RelationRow>) -> Result<Self, DatumError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(DatumError::DuplicateName(g.name.clone()));
            }
        }
        let expected = generators.len() * generators.len();
        for (row, rel) in relations.iter().enumerate() {
            if rel.len() != expected {
                return Err(DatumError::RowLength {
                    row,
                    len: rel.len(),
                    expected,
                });
            }
            if rel.iter().all(LaurentPoly::is_zero) {
                return Err(DatumError::ZeroRow(row));
            }
        }
        Ok(Self {
            generators,
            relations,
        })
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn relations(&self) -> &[RelationRow] {
        &self.relations
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        i * self.rank() + j
    }

    pub fn relation_matrix(&self) -> LaurentMatrix {
        let n = self.rank() * self.rank();
        LaurentMatrix::from_rows(self.relations.clone(), n).expect("rows validated on construction")
    }

    /// Koszul sign of the pairing `<e_i ⊠ e_j, e_i^v ⊠ e_j^v>`:
    /// `(-1)^{p(e_j) p(e_i^v)}`.
    pub fn pairing_sign_odd(&self, i: usize, j: usize) -> bool {
        let pi_dual = self.generators[i].total_parity().flip();
        let pj = self.generators[j].total_parity();
        pi_dual.is_odd() && pj.is_odd()
    }

    /// Swap of the two factors: `f(t) e_i ⊠ e_j -> (-1)^{p_i p_j} f(-t) e_j ⊠ e_i`.
    pub fn transpose_row(&self, row: &[LaurentPoly]) -> RelationRow {
        let r = self.rank();
        let mut out = vec![LaurentPoly::zero(); r * r];
        for i in 0..r {
            for j in 0..r {
                let v = &row[i * r + j];
                if v.is_zero() {
                    continue;
                }
                let mut w = v.reflect();
                if self.generators[i].total_parity().is_odd() && self.generators[j].total_parity().is_odd() {
                    w = -w;
                }
                out[j * r + i] = w;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualizabilityReport {
    pub is_valid_datum: bool,
    pub is_dualizable: bool,
    pub rank: usize,
    /// Hermite normal form of the relations.
    pub canonical_matrix: LaurentMatrix,
    pub determinant: LaurentPoly,
    /// Largest pole order along the diagonal among the canonical generators
    /// (the locality bound).
    pub max_pole_order: Option<i64>,
    pub failure_witness: Option<String>,
}

/// Checks that `P` agrees with `N ⊠ N` off the diagonal. On the affine line
/// with free `P`, this already makes the datum dualizable.
pub fn validate(d: &QuadraticDatum) -> DualizabilityReport {
    let n = d.rank() * d.rank();
    let (canonical, pivots) = d.relation_matrix().hnf_with_pivots();
    let rank = canonical.nrows();
    let max_pole_order = canonical.max_pole_order();
    if rank < n {
        return DualizabilityReport {
            is_valid_datum: false,
            is_dualizable: false,
            rank,
            canonical_matrix: canonical,
            determinant: LaurentPoly::zero(),
            max_pole_order,
            failure_witness: Some(format!(
                "relations span a module of rank {rank}, need {n} to agree with N⊠N off the diagonal"
            )),
        };
    }
    let determinant = canonical.det().expect("full rank Hermite form is square");
    let unit = pivots_are_monomial(&canonical, &pivots);
    debug_assert_eq!(unit, determinant.as_unit().is_some());
    let failure_witness = (!unit).then(|| {
        format!("determinant {determinant} vanishes away from t = 0, so P misses part of N⊠N off the diagonal")
    });
    DualizabilityReport {
        is_valid_datum: unit,
        is_dualizable: unit,
        rank,
        canonical_matrix: canonical,
        determinant,
        max_pole_order,
        failure_witness,
    }
}

/// The dual datum `(s^{-1} N^v, P^⊥)`. Dual rows are the rows of `F^{-T}`,
/// `F` the canonical relation matrix, with each column `(i, j)` carrying the
/// pairing sign.
pub fn dual_datum(d: &QuadraticDatum) -> Result<QuadraticDatum, DatumError> {
    let report = validate(d);
    if !report.is_dualizable {
        return Err(DatumError::NotDualizable {
            determinant: report.determinant,
        });
    }
    let r = d.rank();
    let n = r * r;
    let inverse = report.canonical_matrix.invert_if_unit_det()?;
    let (duals, identified): (Vec<GeneratorSpec>, Vec<bool>) = d.generators.iter().map(GeneratorSpec::dual).unzip();
    let identification_odd: Vec<bool> = duals
        .iter()
        .zip(&identified)
        .map(|(g, &id)| id && g.total_parity().is_odd())
        .collect();
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = Vec::with_capacity(n);
        for i in 0..r {
            for j in 0..r {
                let mut v = inverse.get(i * r + j, k).clone();
                let odd = d.pairing_sign_odd(i, j) ^ identification_odd[i] ^ identification_odd[j];
                if odd {
                    v = -v;
                }
                row.push(v);
            }
        }
        rows.push(row);
    }
    QuadraticDatum::new(duals, rows)
}

/// True iff the two row sets span the same `Q[t]`-module.
pub fn module_equal(a: &[RelationRow], b: &[RelationRow]) -> Result<bool, DatumError> {
    let cols = common_width(a, b)?;
    let ha = LaurentMatrix::from_rows(a.to_vec(), cols)?.hnf_over_poly().0;
    let hb = LaurentMatrix::from_rows(b.to_vec(), cols)?.hnf_over_poly().0;
    Ok(ha == hb)
}

/// True iff `v` lies in the `Q[t]`-span of `rows`.
pub fn module_contains(rows: &[RelationRow], v: &[LaurentPoly]) -> Result<bool, DatumError> {
    let mut extended = rows.to_vec();
    extended.push(v.to_vec());
    module_equal(rows, &extended)
}

fn common_width(a: &[RelationRow], b: &[RelationRow]) -> Result<usize, DatumError> {
    let widths: HashSet<usize> = a.iter().chain(b).map(Vec::len).collect();
    match widths.len() {
        0 => Ok(0),
        1 => Ok(*widths.iter().next().unwrap()),
        _ => Err(DatumError::DimensionMismatch(format!("rows of lengths {widths:?}"))),
    }
}

/// `<p, q> = sum_{ij} p_ij q_ij σ(i, j)` for `p` over `e_i ⊠ e_j` and `q` over
/// the dual basis.
pub fn pairing(primal: &QuadraticDatum, p: &[LaurentPoly], q: &[LaurentPoly]) -> LaurentPoly {
    let r = primal.rank();
    let mut acc = LaurentPoly::zero();
    for i in 0..r {
        for j in 0..r {
            let idx = i * r + j;
            if p[idx].is_zero() || q[idx].is_zero() {
                continue;
            }
            let term = &p[idx] * &q[idx];
            if primal.pairing_sign_odd(i, j) {
                acc -= &term;
            } else {
                acc += &term;
            }
        }
    }
    acc
}

/// True iff every relation of `primal` pairs regularly (no pole at `t = 0`)
/// with every row of `dual_rows`.
pub fn pairing_regular(primal: &QuadraticDatum, dual_rows: &[RelationRow]) -> bool {
    primal
        .relations()
        .iter()
        .all(|p| dual_rows.iter().all(|q| pairing(primal, p, q).is_regular()))
}

/// Builds a relation row from `(coefficient, exponent, i, j)` terms.
pub fn row_from_terms(rank: usize, terms: &[(Scalar, i64, usize, usize)]) -> RelationRow {
    let mut row = vec![LaurentPoly::zero(); rank * rank];
    for (c, k, i, j) in terms {
        row[i * rank + j].add_term(*k, c.clone());
    }
    row
}
