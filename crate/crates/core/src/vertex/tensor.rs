//! Tensor products of two engines.

use num_traits::One;

use super::engine::{format_combination, Combination, Monomial, State};
use super::{EngineError, ModeAlgebra};
use crate::scalar::Scalar;

pub type TensorState = Combination<(Monomial, Monomial)>;

#[derive(Debug, Clone, Copy)]
pub struct TensorEngine<'a> {
    pub left: &'a ModeAlgebra,
    pub right: &'a ModeAlgebra,
}

impl<'a> TensorEngine<'a> {
    pub fn new(left: &'a ModeAlgebra, right: &'a ModeAlgebra) -> Self {
        Self { left, right }
    }

    pub fn tensor(a: &State, b: &State) -> TensorState {
        let mut out = TensorState::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                out.add_term((ma.clone(), mb.clone()), ca * cb);
            }
        }
        out
    }

    pub fn check_cutoff(&self, t: &TensorState) -> Result<(), EngineError> {
        for ((a, b), _) in t.terms() {
            self.left.check_cutoff(&State::single(a.clone(), Scalar::one()))?;
            self.right.check_cutoff(&State::single(b.clone(), Scalar::one()))?;
        }
        Ok(())
    }

    pub fn term_odd(&self, (a, b): &(Monomial, Monomial)) -> bool {
        self.left.monomial_odd(a) ^ self.right.monomial_odd(b)
    }

    pub fn term_degree(&self, (a, b): &(Monomial, Monomial)) -> i64 {
        self.left.monomial_degree(a) + self.right.monomial_degree(b)
    }

    pub fn term_weight(&self, (a, b): &(Monomial, Monomial)) -> Scalar {
        self.left.monomial_weight(a) + self.right.monomial_weight(b)
    }

    /// `(a⊗b)(n)(c⊗d) = sum_{p+q=n-1} (-1)^{p(b)p(c)} a(p)c ⊗ b(q)d`.
    pub fn nth_product(&self, u: &TensorState, n: i64, v: &TensorState) -> Result<TensorState, EngineError> {
        self.check_cutoff(u)?;
        self.check_cutoff(v)?;
        let mut out = TensorState::zero();
        for ((a, b), cu) in u.terms() {
            for ((c, d), cv) in v.terms() {
                let sa = State::single(a.clone(), Scalar::one());
                let sb = State::single(b.clone(), Scalar::one());
                let sc = State::single(c.clone(), Scalar::one());
                let sd = State::single(d.clone(), Scalar::one());
                // a(p)c = 0 once p >= wt(a)+wt(c); likewise b(q)d
                let p_max = (self.left.monomial_weight(a) + self.left.monomial_weight(c)).ceil().to_integer();
                let q_max = (self.right.monomial_weight(b) + self.right.monomial_weight(d))
                    .ceil()
                    .to_integer();
                let p_max = i64::try_from(p_max).expect("weight fits in i64") - 1;
                let q_max = i64::try_from(q_max).expect("weight fits in i64") - 1;
                let p_min = n - 1 - q_max;
                let negate = self.right.monomial_odd(b) && self.left.monomial_odd(c);
                let mut coeff = cu * cv;
                if negate {
                    coeff = -coeff;
                }
                for p in p_min..=p_max {
                    let q = n - 1 - p;
                    let left = self.left.nth_product_unchecked(&sa, p, &sc);
                    if left.is_zero() {
                        continue;
                    }
                    let right = self.right.nth_product_unchecked(&sb, q, &sd);
                    if right.is_zero() {
                        continue;
                    }
                    out.add_scaled(&Self::tensor(&left, &right), &coeff);
                }
            }
        }
        self.check_cutoff(&out)?;
        Ok(out)
    }

    /// `sum_a x_a ⊗ y_a` over matching generator indices.
    pub fn canonical_element(&self) -> Result<TensorState, EngineError> {
        if self.left.rank() != self.right.rank() {
            return Err(EngineError::Mismatch(format!(
                "cannot pair {} generators with {}",
                self.left.rank(),
                self.right.rank()
            )));
        }
        let mut out = TensorState::zero();
        for a in 0..self.left.rank() {
            out.add_term((vec![(a, -1)], vec![(a, -1)]), Scalar::one());
        }
        Ok(out)
    }

    /// `sum_a x_a ⊗ images[a]`.
    pub fn element_from_images(&self, images: &[State]) -> Result<TensorState, EngineError> {
        if images.len() != self.left.rank() {
            return Err(EngineError::Mismatch(format!(
                "{} images for {} generators",
                images.len(),
                self.left.rank()
            )));
        }
        let mut out = TensorState::zero();
        for (a, y) in images.iter().enumerate() {
            out.add_assign(&Self::tensor(&self.left.generator(a), y));
        }
        Ok(out)
    }

    pub fn format(&self, t: &TensorState) -> String {
        format_combination(t.terms().map(|((a, b), c)| {
            (
                format!("{} ⊗ {}", self.left.format_monomial(a), self.right.format_monomial(b)),
                c,
            )
        }))
    }
}
