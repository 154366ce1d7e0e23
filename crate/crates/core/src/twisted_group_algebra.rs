//! The level-l ideal of the twisted group algebra of `T x Pi^bas`, in the
//! basis `theta_{eta,mu}` of rank-one operators `delta_mu -> delta_{mu + l b_flat(eta)}`,
//! and its block matrix model on windowed `l^2` of each `l Pi`-coset.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::characters::{coset_indicator, CosetTransversal, PeriodicCharacter};
use crate::error::{Error, Result};
use crate::rootsystem::{CorootElem, RootSystem, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaElement {
    pub level: i64,
    pub terms: BTreeMap<(CorootElem, Weight), i64>,
}

impl ThetaElement {
    pub fn zero(level: i64) -> Self {
        ThetaElement {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(level: i64, eta: CorootElem, mu: Weight) -> Self {
        let mut a = Self::zero(level);
        a.add_term(eta, mu, 1);
        a
    }

    pub fn add_term(&mut self, eta: CorootElem, mu: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let key = (eta, mu);
        let v = self.terms.entry(key.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn get(&self, eta: &CorootElem, mu: &Weight) -> i64 {
        self.terms.get(&(eta.clone(), mu.clone())).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ThetaElement) -> Result<ThetaElement> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        let mut out = self.clone();
        for ((e, m), &c) in &other.terms {
            out.add_term(e.clone(), m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> ThetaElement {
        let mut out = ThetaElement::zero(self.level);
        for ((e, m), &x) in &self.terms {
            out.add_term(e.clone(), m.clone(), x * c);
        }
        out
    }
}

/// Target weight `mu + l b_flat(eta)` of `theta_{eta,mu}`.
pub fn theta_target(rs: &RootSystem, level: i64, eta: &CorootElem, mu: &Weight) -> Weight {
    mu.add(&rs.b_flat(eta).scale(level))
}

pub fn theta_multiply(rs: &RootSystem, a: &ThetaElement, b: &ThetaElement) -> Result<ThetaElement> {
    if a.level != b.level {
        return Err(Error::LevelMismatch(a.level, b.level));
    }
    // index a's terms by source weight
    let mut by_source: BTreeMap<&Weight, Vec<(&CorootElem, i64)>> = BTreeMap::new();
    for ((eta, mu), &c) in &a.terms {
        by_source.entry(mu).or_default().push((eta, c));
    }
    let mut out = ThetaElement::zero(a.level);
    for ((eta2, mu2), &c2) in &b.terms {
        let target = theta_target(rs, b.level, eta2, mu2);
        if let Some(list) = by_source.get(&target) {
            for (eta1, c1) in list {
                out.add_term(eta1.add(eta2), mu2.clone(), c1 * c2);
            }
        }
    }
    Ok(out)
}

pub fn theta_star(rs: &RootSystem, a: &ThetaElement) -> ThetaElement {
    let mut out = ThetaElement::zero(a.level);
    for ((eta, mu), &c) in &a.terms {
        out.add_term(eta.neg(), theta_target(rs, a.level, eta, mu), c);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct ThetaTermRepr {
    eta: CorootElem,
    mu: Weight,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct ThetaRepr {
    level: i64,
    terms: Vec<ThetaTermRepr>,
}

impl Serialize for ThetaElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ThetaRepr {
            level: self.level,
            terms: self
                .terms
                .iter()
                .map(|((eta, mu), &coeff)| ThetaTermRepr {
                    eta: eta.clone(),
                    mu: mu.clone(),
                    coeff,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThetaElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ThetaRepr::deserialize(d)?;
        let mut a = ThetaElement::zero(r.level);
        for t in r.terms {
            a.add_term(t.eta, t.mu, t.coeff);
        }
        Ok(a)
    }
}

/// Coordinates of the weights `rep + l b_flat(eta)`, `|eta|_inf <= window`.
#[derive(Debug, Clone)]
pub struct WindowedCosets {
    pub level: i64,
    pub window: i64,
    pub transversal: CosetTransversal,
    pub reps: Vec<Weight>,
}

impl WindowedCosets {
    pub fn new(rs: &RootSystem, level: i64, window: i64) -> Result<Self> {
        if window < 1 {
            return Err(Error::Internal(format!("window must be >= 1, got {window}")));
        }
        let transversal = CosetTransversal::new(rs, level)?;
        let reps = transversal.representatives();
        Ok(WindowedCosets {
            level,
            window,
            transversal,
            reps,
        })
    }

    pub fn block_dim(&self, rank: usize) -> usize {
        ((2 * self.window + 1) as usize).pow(rank as u32)
    }

    /// `(block, eta)` with `mu = reps[block] + l b_flat(eta)`.
    pub fn locate(&self, rs: &RootSystem, mu: &Weight) -> (usize, CorootElem) {
        let r = self.transversal.reduce(mu);
        let block = self.reps.binary_search(&r).expect("canonical representative");
        let d = rs.b_sharp(&mu.sub(&r));
        let eta = d
            .iter()
            .map(|q| {
                let x = q / self.level;
                debug_assert!(x.is_integer());
                x.to_integer()
            })
            .collect();
        (block, CorootElem(eta))
    }

    pub fn eta_index(&self, eta: &CorootElem) -> Option<usize> {
        if eta.norm_inf() > self.window {
            return None;
        }
        let side = 2 * self.window + 1;
        Some(eta.0.iter().fold(0i64, |acc, &x| acc * side + x + self.window) as usize)
    }

    pub fn eta_at(&self, rank: usize, mut index: usize) -> CorootElem {
        let side = (2 * self.window + 1) as usize;
        let mut v = vec![0; rank];
        for i in (0..rank).rev() {
            v[i] = (index % side) as i64 - self.window;
            index /= side;
        }
        CorootElem(v)
    }

    pub fn basis_weight(&self, rs: &RootSystem, block: usize, index: usize) -> Weight {
        let eta = self.eta_at(rs.rank(), index);
        theta_target(rs, self.level, &eta, &self.reps[block])
    }
}

pub type IntBlock = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockMatrixModel {
    pub level: i64,
    pub window: i64,
    pub reps: Vec<Weight>,
    /// `blocks[b][row][col]`, aligned with `reps`.
    pub blocks: Vec<IntBlock>,
}

fn zero_block(d: usize) -> IntBlock {
    vec![vec![0; d]; d]
}

fn block_mul(a: &IntBlock, b: &IntBlock) -> IntBlock {
    let d = a.len();
    let mut out = zero_block(d);
    for i in 0..d {
        for (l, &x) in a[i].iter().enumerate() {
            if x != 0 {
                for j in 0..d {
                    out[i][j] += x * b[l][j];
                }
            }
        }
    }
    out
}

impl BlockMatrixModel {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().flatten().all(|&x| x == 0)
    }

    pub fn multiply(&self, other: &BlockMatrixModel) -> Result<BlockMatrixModel> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        if self.window != other.window {
            return Err(Error::Internal("window mismatch".into()));
        }
        let blocks = self
            .blocks
            .par_iter()
            .zip(other.blocks.par_iter())
            .map(|(a, b)| block_mul(a, b))
            .collect();
        Ok(BlockMatrixModel {
            level: self.level,
            window: self.window,
            reps: self.reps.clone(),
            blocks,
        })
    }

    /// Only the nonzero entries as `(block, row, col, value)`.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, i64)> {
        let mut out = vec![];
        for (b, m) in self.blocks.iter().enumerate() {
            for (i, row) in m.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    if x != 0 {
                        out.push((b, i, j, x));
                    }
                }
            }
        }
        out
    }
}

/// Check that every term of `a` lands inside the window, returning
/// `(block, row, col)` matrix-unit positions.
fn term_positions(
    rs: &RootSystem,
    wc: &WindowedCosets,
    a: &ThetaElement,
) -> Result<Vec<(usize, usize, usize, i64)>> {
    let mut out = vec![];
    for ((eta, mu), &c) in &a.terms {
        rs.check_coroot(eta)?;
        rs.check_weight(mu)?;
        let (block, eta_mu) = wc.locate(rs, mu);
        let overflow = || Error::WindowOverflow {
            eta: eta.0.clone(),
            mu: mu.clone(),
            window: wc.window,
        };
        let col = wc.eta_index(&eta_mu).ok_or_else(overflow)?;
        let row = wc.eta_index(&eta_mu.add(eta)).ok_or_else(overflow)?;
        out.push((block, row, col, c));
    }
    Ok(out)
}

pub fn matrix_model(rs: &RootSystem, a: &ThetaElement, window: i64) -> Result<BlockMatrixModel> {
    let wc = WindowedCosets::new(rs, a.level, window)?;
    let d = wc.block_dim(rs.rank());
    let mut blocks = vec![zero_block(d); wc.reps.len()];
    for (b, i, j, c) in term_positions(rs, &wc, a)? {
        blocks[b][i][j] += c;
    }
    Ok(BlockMatrixModel {
        level: a.level,
        window,
        reps: wc.reps,
        blocks,
    })
}

/// The operator of `a` on the full windowed space (all cosets at once),
/// indexed by weight without using the coset decomposition.
pub fn dense_operator(rs: &RootSystem, a: &ThetaElement, window: i64) -> Result<(Vec<Weight>, IntBlock)> {
    let wc = WindowedCosets::new(rs, a.level, window)?;
    let d = wc.block_dim(rs.rank());
    let mut basis: Vec<Weight> = (0..wc.reps.len())
        .flat_map(|b| (0..d).map(move |i| (b, i)))
        .map(|(b, i)| wc.basis_weight(rs, b, i))
        .collect();
    basis.sort();
    let mut m = zero_block(basis.len());
    for ((eta, mu), &c) in &a.terms {
        let target = theta_target(rs, a.level, eta, mu);
        let overflow = || Error::WindowOverflow {
            eta: eta.0.clone(),
            mu: mu.clone(),
            window,
        };
        let col = basis.binary_search(mu).map_err(|_| overflow())?;
        let row = basis.binary_search(&target).map_err(|_| overflow())?;
        m[row][col] += c;
    }
    Ok((basis, m))
}

/// True when no entry of the dense operator couples distinct `l Pi`-cosets.
pub fn is_block_diagonal(rs: &RootSystem, a: &ThetaElement, window: i64) -> Result<bool> {
    let (basis, m) = dense_operator(rs, a, window)?;
    let t = CosetTransversal::new(rs, a.level)?;
    let cosets: Vec<Weight> = basis.iter().map(|w| t.reduce(w)).collect();
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x != 0 && cosets[i] != cosets[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Formal T-character of the generator `L^2([xi])` of `K_0`.
pub fn k0_generator_character(rs: &RootSystem, xi: &Weight, level: i64) -> Result<PeriodicCharacter> {
    coset_indicator(rs, xi, level)
}

/// Random element whose terms all fit in `window`: source offsets within
/// `window - reach`, translations within `reach`.
pub fn random_theta<R: Rng>(
    rs: &RootSystem,
    wc: &WindowedCosets,
    rng: &mut R,
    terms: usize,
    reach: i64,
) -> ThetaElement {
    let n = rs.rank();
    let src = (wc.window - reach).max(0);
    let mut a = ThetaElement::zero(wc.level);
    for _ in 0..terms {
        let rep = &wc.reps[rng.random_range(0..wc.reps.len())];
        let eta_mu = CorootElem((0..n).map(|_| rng.random_range(-src..=src)).collect());
        let eta = CorootElem((0..n).map(|_| rng.random_range(-reach..=reach)).collect());
        let mu = theta_target(rs, wc.level, &eta_mu, rep);
        let c = loop {
            let c = rng.random_range(-3..=3);
            if !c.is_zero() {
                break c;
            }
        };
        a.add_term(eta, mu, c);
    }
    a
}

/// Random `(a, b)` where some terms of `a` start where terms of `b` end, so
/// that the product is usually nonzero. Both fit in the window.
pub fn random_composable_pair<R: Rng>(
    rs: &RootSystem,
    wc: &WindowedCosets,
    rng: &mut R,
    terms: usize,
) -> (ThetaElement, ThetaElement) {
    let b = random_theta(rs, wc, rng, terms, 1);
    let mut a = random_theta(rs, wc, rng, terms / 2, 1);
    for ((eta, mu), _) in &b.terms {
        if rng.random_bool(0.7) {
            let target = theta_target(rs, wc.level, eta, mu);
            let (_, eta_t) = wc.locate(rs, &target);
            // pick a translation keeping the image inside the window
            let step = CorootElem(
                eta_t
                    .0
                    .iter()
                    .map(|&x| {
                        let lo = -wc.window - x;
                        let hi = wc.window - x;
                        rng.random_range(lo.max(-1)..=hi.min(1))
                    })
                    .collect(),
            );
            a.add_term(step, target, rng.random_range(1..=3));
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::LieType;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse::<LieType>().unwrap()).unwrap()
    }

    fn th(level: i64, eta: &[i64], mu: &[i64]) -> ThetaElement {
        ThetaElement::basis(level, CorootElem(eta.to_vec()), Weight(mu.to_vec()))
    }

    #[test]
    fn multiply_examples() {
        let a1 = rs("A1");
        let d = th(3, &[0], &[4]);
        assert_eq!(theta_multiply(&a1, &d, &d).unwrap(), d);
        let p = theta_multiply(&a1, &th(3, &[1], &[0]), &th(3, &[-1], &[6])).unwrap();
        assert_eq!(p, th(3, &[0], &[6]));
        assert!(theta_multiply(&a1, &th(3, &[1], &[0]), &th(3, &[1], &[0]))
            .unwrap()
            .is_zero());
        assert!(matches!(
            theta_multiply(&a1, &th(3, &[0], &[0]), &th(2, &[0], &[0])),
            Err(Error::LevelMismatch(3, 2))
        ));
    }

    #[test]
    fn star_examples() {
        let a2 = rs("A2");
        let d = th(2, &[0, 0], &[1, 1]);
        assert_eq!(theta_star(&a2, &d), d);
        let a = th(2, &[1, -1], &[0, 1]);
        let p = theta_multiply(&a2, &theta_star(&a2, &a), &a).unwrap();
        assert_eq!(p, th(2, &[0, 0], &[0, 1]));
        assert_eq!(theta_star(&a2, &theta_star(&a2, &a)), a);
    }

    #[test]
    fn random_algebra_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (name, level) in [("A1", 3), ("A2", 2), ("B2", 2), ("G2", -2)] {
            let r = rs(name);
            let wc = WindowedCosets::new(&r, level, 3).unwrap();
            for _ in 0..40 {
                let (a, b) = random_composable_pair(&r, &wc, &mut rng, 4);
                let (c, _) = random_composable_pair(&r, &wc, &mut rng, 4);
                let ab = theta_multiply(&r, &a, &b).unwrap();
                let bc = theta_multiply(&r, &b, &c).unwrap();
                assert_eq!(
                    theta_multiply(&r, &ab, &c).unwrap(),
                    theta_multiply(&r, &a, &bc).unwrap()
                );
                assert_eq!(
                    theta_star(&r, &ab),
                    theta_multiply(&r, &theta_star(&r, &b), &theta_star(&r, &a)).unwrap()
                );
            }
        }
    }

    #[test]
    fn block_counts() {
        for (name, level, expected) in [("A1", 2, 4), ("A1", 3, 6), ("A2", 2, 12), ("G2", 2, 12), ("B2", 3, 36)] {
            let r = rs(name);
            let m = matrix_model(&r, &ThetaElement::zero(level), 1).unwrap();
            assert_eq!(m.block_count() as i64, expected, "{name} {level}");
            let det = r.coroot_index();
            assert_eq!(expected, level.pow(r.rank() as u32) * det);
        }
    }

    #[test]
    fn diagonal_matrix_unit() {
        let a1 = rs("A1");
        let m = matrix_model(&a1, &th(3, &[0], &[7]), 2).unwrap();
        let nz = m.nonzero_entries();
        assert_eq!(nz.len(), 1);
        let (b, i, j, x) = nz[0];
        assert_eq!((i, x), (j, 1));
        assert_eq!(m.reps[b], Weight(vec![1]));
    }

    #[test]
    fn window_overflow_names_term() {
        let a1 = rs("A1");
        let err = matrix_model(&a1, &th(3, &[3], &[0]), 2).unwrap_err();
        match err {
            Error::WindowOverflow { eta, mu, window } => {
                assert_eq!((eta, mu, window), (vec![3], Weight(vec![0]), 2));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn model_is_homomorphism_and_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (name, level) in [("A1", 2), ("A1", 3), ("A2", 2)] {
            let r = rs(name);
            let window = 2;
            let wc = WindowedCosets::new(&r, level, window).unwrap();
            for _ in 0..25 {
                let (a, b) = random_composable_pair(&r, &wc, &mut rng, 4);
                let ab = theta_multiply(&r, &a, &b).unwrap();
                let ma = matrix_model(&r, &a, window).unwrap();
                let mb = matrix_model(&r, &b, window).unwrap();
                assert_eq!(matrix_model(&r, &ab, window).unwrap(), ma.multiply(&mb).unwrap());
                assert!(is_block_diagonal(&r, &a, window).unwrap());
                assert_eq!(ma.is_zero(), a.is_zero());
            }
        }
    }

    #[test]
    fn generator_characters() {
        let a1 = rs("A1");
        let t = CosetTransversal::new(&a1, 3).unwrap();
        let c = k0_generator_character(&a1, &Weight(vec![0]), 3).unwrap();
        for x in -12..=12 {
            assert_eq!(c.value(&t, &Weight(vec![x])), i64::from(x % 6 == 0));
        }
        for (name, lmax) in [("A1", 4), ("A2", 3)] {
            let r = rs(name);
            for level in 1..=lmax {
                let t = CosetTransversal::new(&r, level).unwrap();
                let chars: Vec<PeriodicCharacter> = t
                    .representatives()
                    .iter()
                    .map(|x| k0_generator_character(&r, x, level).unwrap())
                    .collect();
                for i in 0..chars.len() {
                    for j in 0..i {
                        assert_ne!(chars[i], chars[j]);
                    }
                }
                let total = chars
                    .iter()
                    .skip(1)
                    .try_fold(chars[0].clone(), |acc, c| acc.add(c))
                    .unwrap();
                assert!(total.coset_mults.values().all(|&m| m == 1));
            }
        }
    }

    #[test]
    fn theta_json() {
        let a = th(3, &[1], &[0]).add(&th(3, &[0], &[2]).scale(-2)).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"{"level":3,"terms":[{"eta":[0],"mu":[2],"coeff":-2},{"eta":[1],"mu":[0],"coeff":1}]}"#
        );
        assert_eq!(serde_json::from_str::<ThetaElement>(&s).unwrap(), a);
    }
}
