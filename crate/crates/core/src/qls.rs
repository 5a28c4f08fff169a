//! Quadratic-linear-scalar data: a quadratic datum on `N ⊕ 1°` whose
//! relations mix quadratic terms with linear (`1°⊠x`, `x⊠1°`) and scalar
//! (`1°⊠1°`) terms, and the twisted pair presentation of their duals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::datum::{
    dual_datum, module_contains, module_equal, DatumError, GeneratorSpec, Parity, QuadraticDatum, RelationRow,
    UNIT_NAME,
};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::scalar::{format_scalar, one, Scalar};

/// Which requirement on the dual fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QlsCondition {
    /// `μ(S⊠-)` must carry dual generators into the quadratic dual.
    Differential,
    /// `μ(S⊠S)` must land in the quadratic dual.
    Curving,
    /// Rows anchored at `ψ⊠S` must be the swaps of those anchored at `S⊠ψ`.
    Antisymmetry,
}

impl QlsCondition {
    pub fn id(self) -> &'static str {
        match self {
            QlsCondition::Differential => "1",
            QlsCondition::Curving => "2",
            QlsCondition::Antisymmetry => "antisymmetry",
        }
    }
}

impl fmt::Display for QlsCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QlsError {
    #[error("no generator named `{UNIT_NAME}`")]
    MissingUnit,
    #[error("the unit generator must have degree 0, even parity and weight 0")]
    BadUnit,
    #[error("relations meet the linear and scalar block in more than its regular part")]
    NotQls,
    #[error("dual is not a twisted pair: condition {0} fails")]
    NotQLSDualizable(QlsCondition),
    #[error(transparent)]
    Datum(#[from] DatumError),
}

/// A quadratic datum with a distinguished generator named `unit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QlsDatum {
    datum: QuadraticDatum,
    unit: usize,
}

impl QlsDatum {
    pub fn new(datum: QuadraticDatum) -> Result<Self, QlsError> {
        // names are unique, so at most one generator is the unit
        let unit = datum.generator_index(UNIT_NAME).ok_or(QlsError::MissingUnit)?;
        let g = &datum.generators()[unit];
        if g.degree != 0 || g.parity != Parity::Even || !g.weight.is_zero() {
            return Err(QlsError::BadUnit);
        }
        Ok(Self { datum, unit })
    }

    pub fn datum(&self) -> &QuadraticDatum {
        &self.datum
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    /// Indices of the non-unit generators, in order.
    pub fn quadratic_generators(&self) -> Vec<usize> {
        (0..self.datum.rank()).filter(|&i| i != self.unit).collect()
    }

    fn is_mixed(&self, col: usize) -> bool {
        let r = self.datum.rank();
        col / r == self.unit || col % r == self.unit
    }
}

/// True iff `P°` meets the linear and scalar block exactly in its regular
/// part, `span(1°⊠1°, 1°⊠x, x⊠1°)` over `Q[t]`.
pub fn check_qls(d: &QlsDatum) -> bool {
    let n = d.datum.rank() * d.datum.rank();
    let (quad, mixed): (Vec<usize>, Vec<usize>) = (0..n).partition(|&c| !d.is_mixed(c));
    let perm: Vec<usize> = quad.iter().chain(&mixed).copied().collect();
    let (h, pivots) = d.datum.relation_matrix().permute_columns(&perm).hnf_with_pivots();
    let inside: Vec<RelationRow> = pivots
        .iter()
        .enumerate()
        .filter(|(_, &p)| p >= quad.len())
        .map(|(i, _)| h.row(i)[quad.len()..].to_vec())
        .collect();
    let identity = LaurentMatrix::identity(mixed.len()).to_rows();
    module_equal(&inside, &identity).unwrap_or(false)
}

/// The image `qP°` of `P°` under the projection to `N⊠N`, as a datum on `N`.
pub fn quadratic_projection(d: &QlsDatum) -> Result<QuadraticDatum, DatumError> {
    let r = d.datum.rank();
    let keep = d.quadratic_generators();
    let rows: Vec<RelationRow> = d
        .datum
        .relations()
        .iter()
        .map(|row| {
            keep.iter()
                .flat_map(|&i| keep.iter().map(move |&j| row[i * r + j].clone()))
                .collect::<RelationRow>()
        })
        .filter(|row| row.iter().any(|p| !p.is_zero()))
        .collect();
    let gens: Vec<GeneratorSpec> = keep.iter().map(|&i| d.datum.generators()[i].clone()).collect();
    let width = keep.len() * keep.len();
    let canonical = if rows.is_empty() {
        rows
    } else {
        LaurentMatrix::from_rows(rows, width)?.hnf_over_poly().0.to_rows()
    };
    QuadraticDatum::new(gens, canonical)
}

/// `sum c * (∂^k x_a / k!) · x_b`, keyed by `(a, k, b)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MuExpr {
    terms: BTreeMap<(usize, u32, usize), Scalar>,
}

impl MuExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, a: usize, k: u32, b: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, k, b)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, k, b));
        }
    }

    pub fn add_scaled(&mut self, other: &MuExpr, s: &Scalar) {
        for (&(a, k, b), c) in &other.terms {
            self.add_term(a, k, b, c * s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: usize, k: u32, b: usize) -> Scalar {
        self.terms.get(&(a, k, b)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `(coefficient, a, k, b)` in key order.
    pub fn terms(&self) -> Vec<(Scalar, usize, u32, usize)> {
        self.terms.iter().map(|(&(a, k, b), c)| (c.clone(), a, k, b)).collect()
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(&(a, k, b), c)| {
                let left = match k {
                    0 => names[a].clone(),
                    1 => format!("∂{}", names[a]),
                    _ => format!("∂^{k}{}/{k}!", names[a]),
                };
                format!("{} ({left})({})", format_scalar(c), names[b])
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The commutative product read off a pole profile: `t^{-k} ↦ (∂^{k-1}a/(k-1)!)·b`;
/// the regular part contributes nothing.
pub fn de_rham_mu(f: &LaurentPoly, a: usize, b: usize) -> MuExpr {
    let mut out = MuExpr::zero();
    for (k, c) in f.terms() {
        if k < 0 {
            out.add_term(a, (-k - 1) as u32, b, c.clone());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedPairPresentation {
    /// The quadratic dual `(qP°)^⊥` on the dual generators.
    pub quadratic_dual: QuadraticDatum,
    /// `P°^⊥` on the dual generators and `S`.
    pub full_dual: QuadraticDatum,
    /// The distinguished degree `-1` generator `S = s^{-1}1°`.
    pub s: GeneratorSpec,
    /// `d(ψ_c)` for each generator of `quadratic_dual`, in order.
    pub differential_table: Vec<MuExpr>,
    /// The degree `-2` curving.
    pub curving: MuExpr,
}

impl TwistedPairPresentation {
    pub fn dual_names(&self) -> Vec<String> {
        self.quadratic_dual.generators().iter().map(|g| g.name.clone()).collect()
    }
}

/// Dualizes a QLS datum and reads off the differential and curving from the
/// dual rows anchored at `S⊠ψ_c` and `S⊠S`.
pub fn extract_twisted_pair(d: &QlsDatum) -> Result<TwistedPairPresentation, QlsError> {
    if !check_qls(d) {
        return Err(QlsError::NotQls);
    }
    let full_dual = dual_datum(&d.datum)?;
    let quadratic_dual = dual_datum(&quadratic_projection(d)?)?;
    let r = d.datum.rank();
    let u = d.unit;
    let keep = d.quadratic_generators();
    let q = keep.len();

    // columns: (S,S), (S,ψ_c)..., (ψ_c,S)..., then (ψ_a,ψ_b)
    let mut perm = vec![u * r + u];
    perm.extend(keep.iter().map(|&c| u * r + c));
    perm.extend(keep.iter().map(|&c| c * r + u));
    perm.extend(keep.iter().flat_map(|&a| keep.iter().map(move |&b| a * r + b)));
    let mixed = 2 * q + 1;
    let (h, pivots) = full_dual.relation_matrix().permute_columns(&perm).hnf_with_pivots();

    let condition_of = |col: usize| match col {
        0 => QlsCondition::Curving,
        c if c <= q => QlsCondition::Differential,
        _ => QlsCondition::Antisymmetry,
    };
    for col in 0..mixed {
        let Some(row) = pivots.iter().position(|&p| p == col) else {
            return Err(QlsError::NotQLSDualizable(condition_of(col)));
        };
        let entries = h.row(row);
        let clean = (0..mixed).all(|c| {
            if c == col {
                entries[c] == LaurentPoly::one()
            } else {
                entries[c].is_zero()
            }
        });
        if !clean {
            return Err(QlsError::NotQLSDualizable(condition_of(col)));
        }
    }

    let tail_expr = |row: usize| {
        let entries = h.row(row);
        let mut e = MuExpr::zero();
        for a in 0..q {
            for b in 0..q {
                e.add_scaled(&de_rham_mu(&entries[mixed + a * q + b], a, b), &-one());
            }
        }
        e
    };
    let row_of = |col: usize| pivots.iter().position(|&p| p == col).expect("checked above");
    let curving = tail_expr(row_of(0));
    let differential_table = (1..=q).map(|col| tail_expr(row_of(col))).collect();

    // the swap of each S-anchored row must again be a dual relation
    let unpermute = |row: usize| {
        let mut out = vec![LaurentPoly::zero(); r * r];
        for (k, &orig) in perm.iter().enumerate() {
            out[orig] = h.row(row)[k].clone();
        }
        out
    };
    for col in 0..=q {
        let swapped = full_dual.transpose_row(&unpermute(row_of(col)));
        if !module_contains(full_dual.relations(), &swapped)? {
            return Err(QlsError::NotQLSDualizable(QlsCondition::Antisymmetry));
        }
    }

    Ok(TwistedPairPresentation {
        s: full_dual.generators()[u].clone(),
        quadratic_dual,
        full_dual,
        differential_table,
        curving,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::row_from_terms;
    use crate::scalar::int;

    /// unit plus one even generator x of weight 1, with scalar term `c t^{-k}`.
    fn rank_one(c: i64, k: i64) -> QlsDatum {
        let gens = vec![GeneratorSpec::unit(), GeneratorSpec::even("x", int(1))];
        let rows = vec![
            row_from_terms(2, &[(int(1), 0, 0, 0)]),
            row_from_terms(2, &[(int(1), 0, 0, 1)]),
            row_from_terms(2, &[(int(1), 0, 1, 0)]),
            row_from_terms(2, &[(int(1), 0, 1, 1), (int(-c), -k, 0, 0)]),
        ];
        QlsDatum::new(QuadraticDatum::new(gens, rows).unwrap()).unwrap()
    }

    #[test]
    fn mu_pole_profile() {
        let f = LaurentPoly::from_terms([(-1, int(1))]);
        assert_eq!(de_rham_mu(&f, 0, 1).terms(), vec![(int(1), 0, 0, 1)]);
        let f = LaurentPoly::from_terms([(-2, int(3))]);
        assert_eq!(de_rham_mu(&f, 0, 1).terms(), vec![(int(3), 0, 1, 1)]);
        let f = LaurentPoly::from_terms([(0, int(1)), (3, int(1))]);
        assert!(de_rham_mu(&f, 0, 1).is_zero());
    }

    #[test]
    fn unit_is_required() {
        let d = QuadraticDatum::new(vec![GeneratorSpec::even("x", int(1))], vec![]).unwrap();
        assert_eq!(QlsDatum::new(d), Err(QlsError::MissingUnit));
        let bad = GeneratorSpec::new(UNIT_NAME, 0, Parity::Even, int(1));
        let d = QuadraticDatum::new(vec![bad], vec![]).unwrap();
        assert_eq!(QlsDatum::new(d), Err(QlsError::BadUnit));
    }

    #[test]
    fn scalar_tail_becomes_curving() {
        let d = rank_one(5, 2);
        assert!(check_qls(&d));
        let tp = extract_twisted_pair(&d).unwrap();
        assert!(tp.differential_table[0].is_zero());
        assert_eq!(tp.curving.terms(), vec![(int(-5), 0, 1, 0)]);
        assert_eq!(tp.s.degree, -1);
        assert_eq!(tp.s.name, "unit^v");
    }

    #[test]
    fn extra_polar_mixed_row_breaks_qls() {
        let d = rank_one(1, 1);
        let mut rows = d.datum().relations().to_vec();
        rows.push(row_from_terms(2, &[(int(1), -1, 0, 1)]));
        let d = QlsDatum::new(QuadraticDatum::new(d.datum().generators().to_vec(), rows).unwrap()).unwrap();
        assert!(!check_qls(&d));
        assert_eq!(extract_twisted_pair(&d), Err(QlsError::NotQls));
    }

    #[test]
    fn projection_drops_mixed_terms() {
        let d = rank_one(1, 2);
        let q = quadratic_projection(&d).unwrap();
        assert_eq!(q.rank(), 1);
        assert_eq!(q.relations(), &[vec![LaurentPoly::one()]]);
    }

    #[test]
    fn pure_quadratic_part_is_kept() {
        // x⊠x with a pole, mixed block regular
        let gens = vec![GeneratorSpec::unit(), GeneratorSpec::even("x", int(1))];
        let rows = vec![
            row_from_terms(2, &[(int(1), 0, 0, 0)]),
            row_from_terms(2, &[(int(1), 0, 0, 1)]),
            row_from_terms(2, &[(int(1), 0, 1, 0)]),
            row_from_terms(2, &[(int(1), -3, 1, 1)]),
        ];
        let d = QlsDatum::new(QuadraticDatum::new(gens, rows).unwrap()).unwrap();
        assert!(check_qls(&d));
        let q = quadratic_projection(&d).unwrap();
        assert!(module_equal(q.relations(), &[vec![LaurentPoly::t_pow(-3)]]).unwrap());
    }
}
