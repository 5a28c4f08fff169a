//! Recognizing the example family behind a QLS datum file.
//!
//! The structure constants (or the pairing) are read off the extracted
//! twisted pair, the catalog datum is rebuilt from them, and the result is
//! accepted only if it reproduces the file's relation module.

use chiral_core::catalog::{beta_gamma_bc_example, kac_moody_example, ExampleBundle};
use chiral_core::datum::{module_equal, GeneratorSpec, Parity, QuadraticDatum};
use chiral_core::laurent::LaurentPoly;
use chiral_core::qls::{extract_twisted_pair, QlsDatum, TwistedPairPresentation};
use chiral_core::scalar::{int, zero, Scalar};
use chiral_core::vertex::lie::ScalarMatrix;
use chiral_core::vertex::{LieData, ModeAlgebra};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Family {
    KacMoody(LieData),
    Weyl {
        omega: ScalarMatrix,
        weights: Vec<Scalar>,
        parities: Vec<Parity>,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::KacMoody(_) => "kac-moody",
            Family::Weyl { .. } => "weyl",
        }
    }

    pub fn bundle(&self) -> Result<ExampleBundle, CliError> {
        Ok(match self {
            Family::KacMoody(lie) => kac_moody_example(lie, None)?,
            Family::Weyl {
                omega,
                weights,
                parities,
            } => beta_gamma_bc_example(omega, weights, parities)?,
        })
    }

    /// The primal engine on the given generator names.
    pub fn engine(&self, gens: Vec<GeneratorSpec>) -> Result<ModeAlgebra, CliError> {
        Ok(match self {
            Family::KacMoody(lie) => ModeAlgebra::affine(gens, lie.clone())?,
            Family::Weyl { omega, .. } => ModeAlgebra::weyl_clifford(gens, omega.clone())?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Recognized {
    pub family: Family,
    pub twisted_pair: TwistedPairPresentation,
    /// Non-unit generators of the file, in file order.
    pub generators: Vec<GeneratorSpec>,
}

/// The datum with generators reordered as `perm[0], perm[1], ...`.
pub fn reorder(d: &QuadraticDatum, perm: &[usize]) -> Result<QuadraticDatum, CliError> {
    let r = d.rank();
    let gens = perm.iter().map(|&k| d.generators()[k].clone()).collect();
    let rows = d
        .relations()
        .iter()
        .map(|row| {
            let mut out = vec![LaurentPoly::zero(); r * r];
            for (i, &pi) in perm.iter().enumerate() {
                for (j, &pj) in perm.iter().enumerate() {
                    out[i * r + j] = row[pi * r + pj].clone();
                }
            }
            out
        })
        .collect();
    Ok(QuadraticDatum::new(gens, rows)?)
}

fn unit_first(q: &QlsDatum) -> Result<QlsDatum, CliError> {
    let u = q.unit_index();
    let mut perm = vec![u];
    perm.extend(q.quadratic_generators());
    Ok(QlsDatum::new(reorder(q.datum(), &perm)?)?)
}

pub fn recognize(q: &QlsDatum) -> Result<Recognized, CliError> {
    let q = unit_first(q)?;
    let tp = extract_twisted_pair(&q)?;
    let generators: Vec<GeneratorSpec> = q.datum().generators()[1..].to_vec();
    let n = generators.len();
    let affine_like = generators
        .iter()
        .all(|g| g.degree == 0 && g.parity == Parity::Even && g.weight == int(1));
    let family = if affine_like {
        // d(ψ_c) = -1/2 sum f^c_{ab} ψ_a ψ_b and ι = -sum κ_{ab} (∂ψ_a) ψ_b
        let mut f = vec![vec![vec![zero(); n]; n]; n];
        for (c, image) in tp.differential_table.iter().enumerate() {
            for (coeff, a, k, b) in image.terms() {
                if k != 0 {
                    return Err(CliError::Unsupported(format!("differential has a derivative term in d({})", generators[c].name)));
                }
                f[a][b][c] = coeff * int(-2);
            }
        }
        let mut kappa = vec![vec![zero(); n]; n];
        for (coeff, a, k, b) in tp.curving.terms() {
            if k != 1 {
                return Err(CliError::Unsupported("curving is not of the form sum κ (∂ψ)ψ".into()));
            }
            kappa[a][b] = -coeff;
        }
        let lie = LieData::new(f, kappa).map_err(|e| CliError::Unsupported(e.to_string()))?;
        Family::KacMoody(lie)
    } else {
        if tp.differential_table.iter().any(|e| !e.is_zero()) {
            return Err(CliError::Unsupported("nonzero differential outside the affine family".into()));
        }
        let mut omega = vec![vec![zero(); n]; n];
        for (coeff, a, k, b) in tp.curving.terms() {
            if k != 0 {
                return Err(CliError::Unsupported("curving is not of the form sum Ω ψψ".into()));
            }
            omega[a][b] = -coeff;
        }
        Family::Weyl {
            omega,
            weights: generators.iter().map(|g| g.weight.clone()).collect(),
            parities: generators.iter().map(|g| g.parity).collect(),
        }
    };
    let rebuilt = family.bundle()?;
    let rebuilt = rebuilt.datum.datum();
    let same_gens = rebuilt
        .generators()
        .iter()
        .zip(q.datum().generators())
        .all(|(a, b)| a.degree == b.degree && a.parity == b.parity && a.weight == b.weight);
    if !same_gens || !module_equal(rebuilt.relations(), q.datum().relations())? {
        return Err(CliError::Unsupported(
            "relations are not those of an affine or Weyl-Clifford datum".into(),
        ));
    }
    Ok(Recognized {
        family,
        twisted_pair: tp,
        generators,
    })
}
