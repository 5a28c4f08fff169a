//! Finite dimensional Lie algebras with an invariant symmetric form, given by
//! structure constants in a fixed basis.

use num_traits::{One, Zero};

use super::EngineError;
use crate::scalar::Scalar;

pub type ScalarMatrix = Vec<Vec<Scalar>>;

/// Structure constants `f[a][b][c] = f^c_{ab}` (so `[x_a, x_b] = sum_c f^c_{ab} x_c`)
/// and the form `kappa[a][b] = κ(x_a, x_b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieData {
    f: Vec<Vec<Vec<Scalar>>>,
    kappa: ScalarMatrix,
}

impl LieData {
    /// Validates antisymmetry, Jacobi, symmetry of κ and invariance
    /// `κ([x,y],z) + κ(y,[x,z]) = 0`.
    pub fn new(f: Vec<Vec<Vec<Scalar>>>, kappa: ScalarMatrix) -> Result<Self, EngineError> {
        let data = Self::new_unchecked(f, kappa)?;
        data.check()?;
        Ok(data)
    }

    /// Only checks shapes. Used to build deliberately broken data.
    pub fn new_unchecked(f: Vec<Vec<Vec<Scalar>>>, kappa: ScalarMatrix) -> Result<Self, EngineError> {
        let n = f.len();
        let shape_ok = f.iter().all(|fa| fa.len() == n && fa.iter().all(|fab| fab.len() == n))
            && kappa.len() == n
            && kappa.iter().all(|row| row.len() == n);
        if !shape_ok {
            return Err(EngineError::InvalidLieData(format!(
                "structure constants and form must both have dimension {n}"
            )));
        }
        Ok(Self { f, kappa })
    }

    /// Abelian algebra of dimension `n` with form `kappa`.
    pub fn abelian(kappa: ScalarMatrix) -> Result<Self, EngineError> {
        let n = kappa.len();
        Self::new(vec![vec![vec![Scalar::zero(); n]; n]; n], kappa)
    }

    pub fn dim(&self) -> usize {
        self.f.len()
    }

    /// `f^c_{ab}`.
    pub fn f(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.f[a][b][c]
    }

    pub fn kappa(&self, a: usize, b: usize) -> &Scalar {
        &self.kappa[a][b]
    }

    pub fn kappa_matrix(&self) -> &ScalarMatrix {
        &self.kappa
    }

    pub fn structure_constants(&self) -> &Vec<Vec<Vec<Scalar>>> {
        &self.f
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().flatten().flatten().all(Zero::is_zero)
    }

    pub fn with_kappa(&self, kappa: ScalarMatrix) -> Result<Self, EngineError> {
        Self::new(self.f.clone(), kappa)
    }

    fn check(&self) -> Result<(), EngineError> {
        let n = self.dim();
        let bad = |msg: String| Err(EngineError::InvalidLieData(msg));
        for a in 0..n {
            for b in 0..n {
                if self.kappa[a][b] != self.kappa[b][a] {
                    return bad(format!("form is not symmetric at ({a}, {b})"));
                }
                for c in 0..n {
                    if self.f[a][b][c] != -self.f[b][a][c].clone() {
                        return bad(format!("bracket is not antisymmetric at ({a}, {b})"));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] in coordinates
                    for e in 0..n {
                        let mut acc = Scalar::zero();
                        for d in 0..n {
                            acc += &self.f[b][c][d] * &self.f[a][d][e];
                            acc += &self.f[c][a][d] * &self.f[b][d][e];
                            acc += &self.f[a][b][d] * &self.f[c][d][e];
                        }
                        if !acc.is_zero() {
                            return bad(format!("Jacobi identity fails for ({a}, {b}, {c})"));
                        }
                    }
                    let mut inv = Scalar::zero();
                    for d in 0..n {
                        inv += &self.f[a][b][d] * &self.kappa[d][c];
                        inv += &self.f[a][c][d] * &self.kappa[b][d];
                    }
                    if !inv.is_zero() {
                        return bad(format!("form is not invariant for ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Data in the basis `x'_a = sum_i A[a][i] x_i`.
    pub fn change_basis(&self, a: &ScalarMatrix) -> Result<Self, EngineError> {
        let n = self.dim();
        let inv = invert(a).ok_or_else(|| EngineError::InvalidLieData("basis change is singular".into()))?;
        let mut f = vec![vec![vec![Scalar::zero(); n]; n]; n];
        let mut kappa = vec![vec![Scalar::zero(); n]; n];
        for p in 0..n {
            for q in 0..n {
                // [x'_p, x'_q] in the old basis
                let mut old = vec![Scalar::zero(); n];
                for i in 0..n {
                    for j in 0..n {
                        let w = &a[p][i] * &a[q][j];
                        if w.is_zero() {
                            continue;
                        }
                        for (k, o) in old.iter_mut().enumerate() {
                            *o += &w * &self.f[i][j][k];
                        }
                        kappa[p][q] += &w * &self.kappa[i][j];
                    }
                }
                for c in 0..n {
                    let mut acc = Scalar::zero();
                    for (k, o) in old.iter().enumerate() {
                        acc += o * &inv[k][c];
                    }
                    f[p][q][c] = acc;
                }
            }
        }
        Self::new(f, kappa)
    }
}

/// Solves `x * m = b` for a row vector `x`; `None` when `m` is singular.
pub fn solve_row(m: &ScalarMatrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let inv = invert(m)?;
    let n = m.len();
    Some(
        (0..n)
            .map(|j| (0..n).fold(Scalar::zero(), |acc, i| acc + &b[i] * &inv[i][j]))
            .collect(),
    )
}

/// Gauss-Jordan inverse of a square rational matrix.
pub fn invert(m: &ScalarMatrix) -> Option<ScalarMatrix> {
    let n = m.len();
    let mut aug: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for v in aug[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &aug[col][c];
                    aug[r][c] -= delta;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
