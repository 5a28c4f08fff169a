//! Weight-truncated PBW mode calculus.
//!
//! A state is a rational combination of monomials `x1(m1) ... xk(mk)|0>` with
//! all modes negative, sorted by mode ascending and then generator index.
//! Fields follow `a(z) = sum_n a(n) z^{-n-1}`, so `a(n)|0> = 0` for `n >= 0`
//! and `a = a(-1)|0>`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lie::{LieData, ScalarMatrix};
use super::EngineError;
use crate::datum::GeneratorSpec;
use crate::scalar::{binomial, format_scalar, int, rat, Scalar};

pub const DEFAULT_CUTOFF: i64 = 4;

/// `(generator index, mode)`.
pub type Letter = (usize, i64);
pub type Monomial = Vec<Letter>;

/// Finite rational combination of basis keys with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Combination<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

pub type State = Combination<Monomial>;

impl<K: Ord> Default for Combination<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, c: Scalar) -> Self {
        let mut s = Self::zero();
        s.add_term(key, c);
        s
    }

    pub fn add_term(&mut self, key: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn sub_assign(&mut self, other: &Self) {
        self.add_scaled(other, &-Scalar::one());
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for Combination<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Combination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(k, v)| (k, format_scalar(v))))
            .finish()
    }
}

impl State {
    pub fn vacuum() -> Self {
        Self::single(Vec::new(), Scalar::one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModeKind {
    /// `[x_a(l), x_b(m)] = sum_c f^c_{ab} x_c(l+m) + l κ_{ab} δ_{l+m,0}`.
    AffineKacMoody(LieData),
    /// `[x_a(l), x_b(m)] = Ω_{ab} δ_{l+m,-1}`.
    WeylClifford(ScalarMatrix),
    /// Supercommutative; all brackets vanish. Carries the Lie data whose
    /// Chevalley-Eilenberg differential and curving act on it.
    AbelianCe(LieData),
}

/// One term of a mode bracket: a single mode, or a multiple of the identity.
enum BracketTerm {
    Mode(Letter, Scalar),
    Scalar(Scalar),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeAlgebra {
    generators: Vec<GeneratorSpec>,
    kind: ModeKind,
    odd: Vec<bool>,
    /// Generator weights times `denom`.
    weight_units: Vec<i64>,
    denom: i64,
    cutoff: i64,
}

impl ModeAlgebra {
    pub fn affine(generators: Vec<GeneratorSpec>, lie: LieData) -> Result<Self, EngineError> {
        Self::check_dim(&generators, lie.dim())?;
        Self::build(generators, ModeKind::AffineKacMoody(lie))
    }

    pub fn abelian_ce(generators: Vec<GeneratorSpec>, lie: LieData) -> Result<Self, EngineError> {
        Self::check_dim(&generators, lie.dim())?;
        Self::build(generators, ModeKind::AbelianCe(lie))
    }

    /// Weyl-Clifford algebra of a pairing `Ω`, which must be graded
    /// antisymmetric `Ω_{ba} = -(-1)^{p_a p_b} Ω_{ab}` and of weight `-1`.
    pub fn weyl_clifford(generators: Vec<GeneratorSpec>, omega: ScalarMatrix) -> Result<Self, EngineError> {
        let n = generators.len();
        if omega.len() != n || omega.iter().any(|r| r.len() != n) {
            return Err(EngineError::InvalidPairing(format!("pairing must be {n}x{n}")));
        }
        for a in 0..n {
            for b in 0..n {
                let both_odd = generators[a].total_parity().is_odd() && generators[b].total_parity().is_odd();
                let expected = if both_odd { omega[a][b].clone() } else { -omega[a][b].clone() };
                if omega[b][a] != expected {
                    return Err(EngineError::InvalidPairing(format!(
                        "pairing is not graded antisymmetric at ({a}, {b})"
                    )));
                }
                if !omega[a][b].is_zero() && &generators[a].weight + &generators[b].weight != Scalar::one() {
                    return Err(EngineError::InvalidPairing(format!(
                        "pairing between {} and {} does not have weight -1",
                        generators[a].name, generators[b].name
                    )));
                }
            }
        }
        Self::build(generators, ModeKind::WeylClifford(omega))
    }

    fn check_dim(generators: &[GeneratorSpec], dim: usize) -> Result<(), EngineError> {
        if generators.len() != dim {
            return Err(EngineError::Mismatch(format!(
                "{} generators for a Lie algebra of dimension {dim}",
                generators.len()
            )));
        }
        Ok(())
    }

    fn build(generators: Vec<GeneratorSpec>, kind: ModeKind) -> Result<Self, EngineError> {
        if let Some(g) = generators.iter().find(|g| g.weight.is_negative()) {
            return Err(EngineError::Mismatch(format!("generator {} has negative weight", g.name)));
        }
        let denom = generators
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, g| acc.lcm(g.weight.denom()));
        let denom = denom
            .to_i64()
            .ok_or_else(|| EngineError::Mismatch("weight denominators too large".into()))?;
        let weight_units = generators
            .iter()
            .map(|g| (&g.weight * int(denom)).to_integer().to_i64().expect("weight fits in i64"))
            .collect();
        let odd = generators.iter().map(|g| g.total_parity().is_odd()).collect();
        Ok(Self {
            generators,
            kind,
            odd,
            weight_units,
            denom,
            cutoff: DEFAULT_CUTOFF,
        })
    }

    /// Same algebra with the generators renamed; only display changes.
    pub fn with_names(mut self, names: &[String]) -> Result<Self, EngineError> {
        if names.len() != self.rank() {
            return Err(EngineError::Mismatch(format!("{} names for {} generators", names.len(), self.rank())));
        }
        for (g, n) in self.generators.iter_mut().zip(names) {
            g.name = n.clone();
        }
        Ok(self)
    }

    pub fn with_cutoff(mut self, cutoff: i64) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn kind(&self) -> &ModeKind {
        &self.kind
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn is_commutative(&self) -> bool {
        matches!(self.kind, ModeKind::AbelianCe(_))
    }

    pub fn is_odd(&self, gen: usize) -> bool {
        self.odd[gen]
    }

    /// The state `x = x(-1)|0>`.
    pub fn generator(&self, gen: usize) -> State {
        State::single(vec![(gen, -1)], Scalar::one())
    }

    pub fn monomial_odd(&self, mono: &[Letter]) -> bool {
        mono.iter().fold(false, |acc, &(g, _)| acc ^ self.odd[g])
    }

    /// Total parity of a homogeneous state; `None` for mixed or zero states.
    pub fn state_odd(&self, s: &State) -> Option<bool> {
        let mut parities = s.terms().map(|(m, _)| self.monomial_odd(m));
        let first = parities.next()?;
        parities.all(|p| p == first).then_some(first)
    }

    /// Cohomological degree of a monomial.
    pub fn monomial_degree(&self, mono: &[Letter]) -> i64 {
        mono.iter().map(|&(g, _)| self.generators[g].degree).sum()
    }

    fn letter_units(&self, (g, m): Letter) -> i64 {
        self.weight_units[g] - (m + 1) * self.denom
    }

    fn monomial_units(&self, mono: &[Letter]) -> i64 {
        mono.iter().map(|&l| self.letter_units(l)).sum()
    }

    pub fn monomial_weight(&self, mono: &[Letter]) -> Scalar {
        rat(self.monomial_units(mono), self.denom)
    }

    fn max_units(&self, s: &State) -> Option<i64> {
        s.terms().map(|(m, _)| self.monomial_units(m)).max()
    }

    /// Largest weight among the monomials of `s`.
    pub fn max_weight(&self, s: &State) -> Option<Scalar> {
        self.max_units(s).map(|u| rat(u, self.denom))
    }

    /// Weight of a homogeneous state.
    pub fn state_weight(&self, s: &State) -> Option<Scalar> {
        let mut ws = s.terms().map(|(m, _)| self.monomial_units(m));
        let first = ws.next()?;
        ws.all(|w| w == first).then(|| rat(first, self.denom))
    }

    pub fn check_cutoff(&self, s: &State) -> Result<(), EngineError> {
        match self.max_units(s) {
            Some(u) if u > self.cutoff * self.denom => Err(EngineError::CutoffExceeded {
                weight: format_scalar(&rat(u, self.denom)),
                cutoff: self.cutoff,
            }),
            _ => Ok(()),
        }
    }

    fn bracket(&self, (x, m): Letter, (y, k): Letter) -> Vec<BracketTerm> {
        match &self.kind {
            ModeKind::AbelianCe(_) => Vec::new(),
            ModeKind::WeylClifford(omega) => {
                if m + k == -1 && !omega[x][y].is_zero() {
                    vec![BracketTerm::Scalar(omega[x][y].clone())]
                } else {
                    Vec::new()
                }
            }
            ModeKind::AffineKacMoody(lie) => {
                let mut out: Vec<BracketTerm> = (0..lie.dim())
                    .filter(|&c| !lie.f(x, y, c).is_zero())
                    .map(|c| BracketTerm::Mode((c, m + k), lie.f(x, y, c).clone()))
                    .collect();
                if m + k == 0 && m != 0 && !lie.kappa(x, y).is_zero() {
                    out.push(BracketTerm::Scalar(int(m) * lie.kappa(x, y)));
                }
                out
            }
        }
    }

    fn apply_bracket(&self, terms: &[BracketTerm], rest: &[Letter], out: &mut State, c: &Scalar) {
        for term in terms {
            match term {
                BracketTerm::Scalar(s) => out.add_term(rest.to_vec(), s * c),
                BracketTerm::Mode(l, s) => {
                    let r = self.apply_mode_mono(*l, rest);
                    out.add_scaled(&r, &(s * c));
                }
            }
        }
    }

    /// `x(m)` applied to a canonical monomial, returned in canonical form.
    pub fn apply_mode_mono(&self, (x, m): Letter, mono: &[Letter]) -> State {
        if self.monomial_units(mono) + self.letter_units((x, m)) < 0 {
            return State::zero();
        }
        let Some(&(y, k)) = mono.first() else {
            return if m >= 0 {
                State::zero()
            } else {
                State::single(vec![(x, m)], Scalar::one())
            };
        };
        let rest = &mono[1..];
        let key_x = (m, x);
        let key_y = (k, y);
        let mut out = State::zero();
        if key_x < key_y || (key_x == key_y && !self.odd[x]) {
            let mut v = Vec::with_capacity(mono.len() + 1);
            v.push((x, m));
            v.extend_from_slice(mono);
            out.add_term(v, Scalar::one());
        } else if key_x == key_y {
            // x(m)^2 = [x(m), x(m)]/2 for odd x
            let br = self.bracket((x, m), (x, m));
            self.apply_bracket(&br, rest, &mut out, &rat(1, 2));
        } else {
            let sign = if self.odd[x] && self.odd[y] { -Scalar::one() } else { Scalar::one() };
            let inner = self.apply_mode_mono((x, m), rest);
            for (w, c) in inner.terms() {
                let r = self.apply_mode_mono((y, k), w);
                out.add_scaled(&r, &(c * &sign));
            }
            let br = self.bracket((x, m), (y, k));
            self.apply_bracket(&br, rest, &mut out, &Scalar::one());
        }
        out
    }

    pub fn apply_mode(&self, letter: Letter, s: &State) -> State {
        let mut out = State::zero();
        for (mono, c) in s.terms() {
            out.add_scaled(&self.apply_mode_mono(letter, mono), c);
        }
        out
    }

    /// Canonical form of `word[0] word[1] ... |0>`.
    pub fn normal_order(&self, word: &[Letter]) -> Result<State, EngineError> {
        let mut s = State::vacuum();
        for &l in word.iter().rev() {
            s = self.apply_mode(l, &s);
        }
        self.check_cutoff(&s)?;
        Ok(s)
    }

    /// `u(n) v`.
    pub fn nth_product(&self, u: &State, n: i64, v: &State) -> Result<State, EngineError> {
        self.check_cutoff(u)?;
        self.check_cutoff(v)?;
        let out = self.nth_product_unchecked(u, n, v);
        self.check_cutoff(&out)?;
        Ok(out)
    }

    pub(crate) fn nth_product_unchecked(&self, u: &State, n: i64, v: &State) -> State {
        let mut out = State::zero();
        for (mono, c) in u.terms() {
            out.add_scaled(&self.nth_mono(mono, n, v), c);
        }
        out
    }

    /// `(x(m) w)(n) v = sum_j (-1)^j C(m,j) [x(m-j) (w(n+j) v)
    ///   - (-1)^m (-1)^{p(x)p(w)} w(m+n-j) (x(j) v)]`.
    fn nth_mono(&self, mono: &[Letter], n: i64, v: &State) -> State {
        let Some(v_units) = self.max_units(v) else {
            return State::zero();
        };
        let Some(&(x, m)) = mono.first() else {
            return if n == -1 { v.clone() } else { State::zero() };
        };
        let w = &mono[1..];
        let w_units = self.monomial_units(w);
        let x_units = self.weight_units[x];
        let mut out = State::zero();
        // first sum: w(n+j) v has weight wt(w)+wt(v)-n-j-1 >= 0
        let j_max = (w_units + v_units).div_euclid(self.denom) - n - 1;
        let w_state = State::single(w.to_vec(), Scalar::one());
        for j in 0..=j_max.max(-1) {
            let coeff = binomial(m, j as u32) * if j % 2 == 0 { int(1) } else { int(-1) };
            if coeff.is_zero() {
                continue;
            }
            let inner = self.nth_mono(w, n + j, v);
            if inner.is_zero() {
                continue;
            }
            out.add_scaled(&self.apply_mode((x, m - j), &inner), &coeff);
        }
        // second sum: x(j) v has weight wt(x)+wt(v)-j-1 >= 0
        let j_max = (x_units + v_units).div_euclid(self.denom) - 1;
        let odd = m.rem_euclid(2) == 1;
        let koszul = self.odd[x] && self.monomial_odd(w);
        let base_sign = if odd ^ koszul { int(1) } else { int(-1) };
        for j in 0..=j_max.max(-1) {
            let coeff = binomial(m, j as u32) * if j % 2 == 0 { int(1) } else { int(-1) } * &base_sign;
            if coeff.is_zero() {
                continue;
            }
            let xv = self.apply_mode((x, j), v);
            if xv.is_zero() {
                continue;
            }
            out.add_scaled(&self.nth_product_unchecked(&w_state, m + n - j, &xv), &coeff);
        }
        out
    }

    /// `T` with `T(x(k) w) = -k x(k-1) w + x(k) T w` and `T|0> = 0`.
    pub fn translation(&self, u: &State) -> Result<State, EngineError> {
        let mut out = State::zero();
        for (mono, c) in u.terms() {
            for (i, &(g, k)) in mono.iter().enumerate() {
                let mut word = mono.clone();
                word[i] = (g, k - 1);
                let mut s = State::vacuum();
                for &l in word.iter().rev() {
                    s = self.apply_mode(l, &s);
                }
                out.add_scaled(&s, &(c * int(-k)));
            }
        }
        self.check_cutoff(&out)?;
        Ok(out)
    }

    /// `T^k u / k!`.
    pub fn divided_translation(&self, u: &State, k: u32) -> Result<State, EngineError> {
        let mut s = u.clone();
        for i in 1..=k {
            s = self.translation(&s)?.scaled(&rat(1, i as i64));
        }
        Ok(s)
    }

    /// Some `u` with `T u = s`, if one exists. `s` must be homogeneous.
    pub fn translation_preimage(&self, s: &State) -> Result<Option<State>, EngineError> {
        if s.is_zero() {
            return Ok(Some(State::zero()));
        }
        let Some(w) = self.state_weight(s) else {
            return Err(EngineError::Mismatch("state is not homogeneous".into()));
        };
        let target = w - Scalar::one();
        if target.is_negative() {
            return Ok(None);
        }
        let top = i64::try_from(target.ceil().to_integer()).expect("weight fits in i64");
        let candidates: Vec<Monomial> = self
            .basis(top)?
            .into_iter()
            .filter(|m| self.monomial_weight(m) == target)
            .collect();
        // reduced echelon form of the images, tracking preimages
        let mut rows: Vec<(Monomial, State, State)> = Vec::new();
        for m in candidates {
            let pre = State::single(m, Scalar::one());
            let img = self.translation(&pre)?;
            let (img, pre) = reduce_pair(&rows, img, pre);
            let Some((pivot, c)) = img.terms().next().map(|(k, c)| (k.clone(), c.clone())) else {
                continue;
            };
            let inv = c.recip();
            let (img, pre) = (img.scaled(&inv), pre.scaled(&inv));
            for (_, r_img, r_pre) in rows.iter_mut() {
                let c = r_img.coeff(&pivot);
                if !c.is_zero() {
                    r_img.add_scaled(&img, &-c.clone());
                    r_pre.add_scaled(&pre, &-c);
                }
            }
            rows.push((pivot, img, pre));
        }
        let (rest, pre) = reduce_pair(&rows, s.clone(), State::zero());
        Ok(rest.is_zero().then(|| pre.scaled(&-Scalar::one())))
    }

    /// All canonical monomials of weight at most `max_weight`.
    pub fn basis(&self, max_weight: i64) -> Result<Vec<Monomial>, EngineError> {
        let limit = max_weight * self.denom;
        if let Some(g) = (0..self.rank()).find(|&g| !self.odd[g] && self.weight_units[g] == 0) {
            return Err(EngineError::UnboundedBasis(self.generators[g].name.clone()));
        }
        let mut letters: Vec<Letter> = Vec::new();
        for g in 0..self.rank() {
            let mut m = -1;
            while self.letter_units((g, m)) <= limit {
                letters.push((g, m));
                m -= 1;
            }
        }
        letters.sort_by_key(|&(g, m)| (m, g));
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_basis(&letters, 0, limit, &mut current, &mut out);
        out.sort();
        Ok(out)
    }

    fn extend_basis(&self, letters: &[Letter], start: usize, budget: i64, current: &mut Monomial, out: &mut Vec<Monomial>) {
        out.push(current.clone());
        for i in start..letters.len() {
            let l = letters[i];
            let u = self.letter_units(l);
            if u > budget {
                continue;
            }
            current.push(l);
            let next = if self.odd[l.0] { i + 1 } else { i };
            self.extend_basis(letters, next, budget - u, current, out);
            current.pop();
        }
    }

    pub fn format_monomial(&self, mono: &[Letter]) -> String {
        if mono.is_empty() {
            return "|0>".into();
        }
        let mut s: String = mono
            .iter()
            .map(|&(g, m)| format!("{}({m})", self.generators[g].name))
            .collect::<Vec<_>>()
            .join(" ");
        s.push_str("|0>");
        s
    }

    pub fn format_state(&self, s: &State) -> String {
        format_combination(s.terms().map(|(m, c)| (self.format_monomial(m), c)))
    }
}

pub(crate) fn format_combination<'a>(terms: impl Iterator<Item = (String, &'a Scalar)>) -> String {
    let parts: Vec<String> = terms.map(|(k, c)| format!("{} {k}", format_scalar(c))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Subtracts pivot rows from `img`, applying the same combination to `pre`.
fn reduce_pair(rows: &[(Monomial, State, State)], mut img: State, mut pre: State) -> (State, State) {
    for (pivot, r_img, r_pre) in rows {
        let c = img.coeff(pivot);
        if !c.is_zero() {
            img.add_scaled(r_img, &-c.clone());
            pre.add_scaled(r_pre, &-c);
        }
    }
    (img, pre)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::Parity;
    use crate::scalar::rat;

    fn heisenberg() -> ModeAlgebra {
        let lie = LieData::abelian(vec![vec![int(1)]]).unwrap();
        ModeAlgebra::affine(vec![GeneratorSpec::even("b", int(1))], lie).unwrap()
    }

    fn fermion() -> ModeAlgebra {
        let g = GeneratorSpec::new("psi", 0, Parity::Odd, rat(1, 2));
        ModeAlgebra::weyl_clifford(vec![g], vec![vec![int(1)]]).unwrap()
    }

    #[test]
    fn heisenberg_two_point() {
        let e = heisenberg();
        let b = e.generator(0);
        assert_eq!(e.nth_product(&b, 1, &b).unwrap(), State::vacuum());
        assert!(e.nth_product(&b, 0, &b).unwrap().is_zero());
        assert!(e.nth_product(&b, 2, &b).unwrap().is_zero());
        let bb = e.nth_product(&b, -1, &b).unwrap();
        assert_eq!(bb, State::single(vec![(0, -1), (0, -1)], int(1)));
    }

    #[test]
    fn heisenberg_mode_commutator_on_vacuum() {
        let e = heisenberg();
        // b(2) b(-2)|0> = 2|0>
        let s = e.normal_order(&[(0, 2), (0, -2)]).unwrap();
        assert_eq!(s, State::single(vec![], int(2)));
    }

    #[test]
    fn fermion_squares_vanish() {
        let e = fermion();
        assert!(e.normal_order(&[(0, -1), (0, -1)]).unwrap().is_zero());
        let psi = e.generator(0);
        assert_eq!(e.nth_product(&psi, 0, &psi).unwrap(), State::vacuum());
        assert_eq!(
            e.normal_order(&[(0, -1), (0, -2)]).unwrap(),
            State::single(vec![(0, -2), (0, -1)], int(-1))
        );
    }

    #[test]
    fn translation_of_generator() {
        let e = heisenberg();
        let t = e.translation(&e.generator(0)).unwrap();
        assert_eq!(t, State::single(vec![(0, -2)], int(1)));
        assert!(e.translation(&State::vacuum()).unwrap().is_zero());
        let t2 = e.divided_translation(&e.generator(0), 2).unwrap();
        assert_eq!(t2, State::single(vec![(0, -3)], int(1)));
    }

    #[test]
    fn cutoff_enforced() {
        let e = heisenberg().with_cutoff(1);
        let bb = State::single(vec![(0, -1), (0, -1)], int(1));
        assert!(matches!(e.check_cutoff(&bb), Err(EngineError::CutoffExceeded { .. })));
        assert!(e.nth_product(&e.generator(0), -1, &e.generator(0)).is_err());
    }

    #[test]
    fn basis_counts_partitions() {
        let e = heisenberg();
        // partitions of 0..=4: 1 + 1 + 2 + 3 + 5
        assert_eq!(e.basis(4).unwrap().len(), 12);
    }

    #[test]
    fn even_weight_zero_basis_is_unbounded() {
        let lie = LieData::abelian(vec![vec![int(0)]]).unwrap();
        let e = ModeAlgebra::abelian_ce(vec![GeneratorSpec::even("c", int(0))], lie).unwrap();
        assert!(matches!(e.basis(1), Err(EngineError::UnboundedBasis(_))));
    }
}
