//! Finite and affine Weyl group actions, and signed alcove folding.
//!
//! The affine Weyl group `W x Pi` acts on weights by the rho-shifted level
//! `l` action `(w, eta) . xi = w(xi + rho) - rho + l b_flat(eta)`. Its
//! fundamental domain is the shifted scaled alcove
//! `{ xi : <xi+rho, a_i^vee> > 0, <xi+rho, theta^vee> < l }`.
//!
//! Only the parity of the length of a group element is tracked.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{image_bounds, integer_box, to_rational, rat_inverse};
use crate::rootsystem::{CorootElem, RootSystem, Weight};

/// Element `(wbar, eta)` of the affine Weyl group. `word` lists simple
/// reflection indices with `wbar = s_{word[0]} ... s_{word[m-1]}`, always
/// reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineWeylElem {
    pub word: Vec<usize>,
    pub eta: CorootElem,
    pub parity: i64,
}

impl AffineWeylElem {
    pub fn identity(rank: usize) -> Self {
        AffineWeylElem {
            word: vec![],
            eta: CorootElem::zero(rank),
            parity: 1,
        }
    }

    pub fn translation(eta: CorootElem) -> Self {
        AffineWeylElem {
            word: vec![],
            eta,
            parity: 1,
        }
    }

    /// Finite Weyl element given by any word; the word is reduced.
    pub fn finite(rs: &RootSystem, word: &[usize]) -> Self {
        let image = apply_word(rs, word, &rs.rho);
        let word = reduced_word_from_rho_image(rs, &image);
        let parity = if word.len() % 2 == 0 { 1 } else { -1 };
        AffineWeylElem {
            word,
            eta: CorootElem::zero(rs.rank()),
            parity,
        }
    }

    /// Simple affine reflection `s_i`; index `rank` is `s_0 = (s_theta, theta^vee)`.
    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        if i < rs.rank() {
            AffineWeylElem::finite(rs, &[i])
        } else {
            let s_theta_rho = rs.rho.sub(&rs.theta.scale(rs.theta_pairing(&rs.rho)));
            let word = reduced_word_from_rho_image(rs, &s_theta_rho);
            let parity = if word.len() % 2 == 0 { 1 } else { -1 };
            debug_assert_eq!(parity, -1);
            AffineWeylElem {
                word,
                eta: rs.theta_coroot.clone(),
                parity,
            }
        }
    }

    /// Product of simple affine reflections (indices `0..=rank`, `rank` meaning `s_0`).
    pub fn from_affine_word(rs: &RootSystem, word: &[usize]) -> Self {
        word.iter().fold(AffineWeylElem::identity(rs.rank()), |acc, &i| {
            acc.compose(rs, &AffineWeylElem::simple(rs, i))
        })
    }

    /// `self * other`.
    pub fn compose(&self, rs: &RootSystem, other: &AffineWeylElem) -> AffineWeylElem {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        let eta = self.eta.add(&apply_word_coroot(rs, &self.word, &other.eta));
        let image = apply_word(rs, &word, &rs.rho);
        let word = reduced_word_from_rho_image(rs, &image);
        AffineWeylElem {
            word,
            eta,
            parity: self.parity * other.parity,
        }
    }

    pub fn apply_finite(&self, rs: &RootSystem, xi: &Weight) -> Weight {
        apply_word(rs, &self.word, xi)
    }
}

fn apply_word(rs: &RootSystem, word: &[usize], xi: &Weight) -> Weight {
    word.iter().rev().fold(xi.clone(), |acc, &i| rs.reflect(i, &acc))
}

fn apply_word_coroot(rs: &RootSystem, word: &[usize], eta: &CorootElem) -> CorootElem {
    word.iter().rev().fold(eta.clone(), |acc, &i| {
        // s_i(eta) = eta - <alpha_i, eta> alpha_i^vee
        let c: i64 = rs.cartan[i].iter().zip(&acc.0).map(|(a, e)| a * e).sum();
        let mut v = acc.0;
        v[i] -= c;
        CorootElem(v)
    })
}

/// Reduced word for the finite Weyl element sending `rho` to `image`.
fn reduced_word_from_rho_image(rs: &RootSystem, image: &Weight) -> Vec<usize> {
    let mut mu = image.clone();
    let mut word = Vec::new();
    while let Some(i) = mu.0.iter().position(|&x| x < 0) {
        mu = rs.reflect(i, &mu);
        word.push(i);
    }
    debug_assert_eq!(mu, rs.rho);
    word
}

/// `w . xi = wbar(xi + rho) - rho + level * b_flat(eta)`.
pub fn shifted_action(rs: &RootSystem, w: &AffineWeylElem, xi: &Weight, level: i64) -> Weight {
    let moved = w.apply_finite(rs, &xi.add(&rs.rho)).sub(&rs.rho);
    moved.add(&rs.b_flat(&w.eta).scale(level))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FoldOutcome {
    Interior { weight: Weight, sign: i64 },
    Boundary,
}

impl FoldOutcome {
    pub fn is_boundary(&self) -> bool {
        matches!(self, FoldOutcome::Boundary)
    }

    pub fn sign(&self) -> i64 {
        match self {
            FoldOutcome::Interior { sign, .. } => *sign,
            FoldOutcome::Boundary => 0,
        }
    }

    pub fn weight(&self) -> Option<&Weight> {
        match self {
            FoldOutcome::Interior { weight, .. } => Some(weight),
            FoldOutcome::Boundary => None,
        }
    }
}

/// Whether `xi` lies strictly inside the shifted level-`level` alcove.
pub fn is_alcove_interior(rs: &RootSystem, xi: &Weight, level: i64) -> bool {
    let mu = xi.add(&rs.rho);
    mu.0.iter().all(|&x| x > 0) && rs.theta_pairing(&mu) < level
}

/// Wall indices `0..rank` are the simple walls, `rank` the affine wall.
fn violated_walls(rs: &RootSystem, mu: &Weight, level: Option<i64>) -> Vec<usize> {
    let mut v: Vec<usize> = (0..rs.rank()).filter(|&i| mu.0[i] < 0).collect();
    if let Some(l) = level {
        if rs.theta_pairing(mu) > l {
            v.push(rs.rank());
        }
    }
    v
}

fn on_wall(rs: &RootSystem, mu: &Weight, level: Option<i64>) -> bool {
    mu.0.iter().any(|&x| x == 0) || level.is_some_and(|l| rs.theta_pairing(mu) == l)
}

fn reflect_wall(rs: &RootSystem, wall: usize, mu: &Weight, level: i64) -> Weight {
    if wall < rs.rank() {
        rs.reflect(wall, mu)
    } else {
        // mu -> s_theta(mu) + level * theta
        let c = rs.theta_pairing(mu) - level;
        mu.sub(&rs.theta.scale(c))
    }
}

fn fold_cap(rs: &RootSystem, xi: &Weight, level: i64) -> u64 {
    let n_pos = rs.positive_roots.len() as i64;
    let scale = level.max(n_pos * rs.h_dual);
    (10 * (xi.norm_l1() + rs.rank() as i64) * scale) as u64
}

/// Fold with a caller-chosen wall among the violated ones. Returns the
/// outcome and the sequence of walls reflected in.
pub fn affine_fold_traced<F>(
    rs: &RootSystem,
    xi: &Weight,
    level: i64,
    mut choose: F,
) -> Result<(FoldOutcome, Vec<usize>)>
where
    F: FnMut(&[usize]) -> usize,
{
    rs.check_weight(xi)?;
    if level < 1 {
        return Err(Error::NonPositiveLevel(level));
    }
    let cap = fold_cap(rs, xi, level);
    let mut mu = xi.add(&rs.rho);
    let mut sign = 1;
    let mut trace = Vec::new();
    loop {
        if on_wall(rs, &mu, Some(level)) {
            return Ok((FoldOutcome::Boundary, trace));
        }
        let walls = violated_walls(rs, &mu, Some(level));
        if walls.is_empty() {
            let weight = mu.sub(&rs.rho);
            return Ok((FoldOutcome::Interior { weight, sign }, trace));
        }
        if trace.len() as u64 >= cap {
            return Err(Error::FoldGuard {
                weight: xi.clone(),
                level,
                cap,
            });
        }
        let wall = walls[choose(&walls) % walls.len()];
        mu = reflect_wall(rs, wall, &mu, level);
        sign = -sign;
        trace.push(wall);
    }
}

/// Fold `xi` into the shifted level-`level` alcove, lowest-index wall first.
pub fn affine_fold(rs: &RootSystem, xi: &Weight, level: i64) -> Result<FoldOutcome> {
    affine_fold_traced(rs, xi, level, |_| 0).map(|(o, _)| o)
}

/// Fold `xi` into the rho-shifted dominant chamber.
pub fn finite_fold(rs: &RootSystem, xi: &Weight) -> FoldOutcome {
    let mut mu = xi.add(&rs.rho);
    let mut sign = 1;
    loop {
        if on_wall(rs, &mu, None) {
            return FoldOutcome::Boundary;
        }
        match mu.0.iter().position(|&x| x < 0) {
            None => {
                return FoldOutcome::Interior {
                    weight: mu.sub(&rs.rho),
                    sign,
                }
            }
            Some(i) => {
                mu = rs.reflect(i, &mu);
                sign = -sign;
            }
        }
    }
}

/// The affine Weyl element undoing a fold trace: maps the folded weight
/// back to the input under the shifted action.
pub fn element_from_trace(rs: &RootSystem, trace: &[usize]) -> AffineWeylElem {
    // folded = s_{t_m} ... s_{t_1} . xi, so xi = s_{t_1} ... s_{t_m} . folded
    AffineWeylElem::from_affine_word(rs, trace)
}

/// Integer bounds on `eta` such that `base + level * b_flat(eta)` can land in
/// `[-box, box]^rank`.
pub(crate) fn translation_range(
    rs: &RootSystem,
    base: &Weight,
    level: i64,
    bx: i64,
) -> (Vec<i64>, Vec<i64>) {
    let inv = rat_inverse(&to_rational(&rs.gram_coroot)).expect("nonsingular");
    let scaled: Vec<Vec<_>> = inv
        .iter()
        .map(|row| row.iter().map(|x| x / level).collect())
        .collect();
    let lo: Vec<i64> = base.0.iter().map(|b| -bx - b).collect();
    let hi: Vec<i64> = base.0.iter().map(|b| bx - b).collect();
    image_bounds(&scaled, &lo, &hi)
}

/// All `(w . xi0, parity(w))` with every coordinate in `[-bx, bx]`, sorted
/// by weight.
pub fn enumerate_orbit(rs: &RootSystem, xi0: &Weight, level: i64, bx: i64) -> Result<Vec<(Weight, i64)>> {
    rs.check_weight(xi0)?;
    if level < 1 {
        return Err(Error::NonPositiveLevel(level));
    }
    if !is_alcove_interior(rs, xi0, level) {
        return Err(Error::NotLevelWeight {
            weight: xi0.clone(),
            k: level - rs.h_dual,
        });
    }
    let mut out = Vec::new();
    for (nu, s) in rs.regular_orbit(&xi0.add(&rs.rho))? {
        let base = nu.sub(&rs.rho);
        let (lo, hi) = translation_range(rs, &base, level, bx);
        for eta in integer_box(&lo, &hi) {
            let w = base.add(&rs.b_flat(&CorootElem(eta)).scale(level));
            if w.norm_inf() <= bx {
                out.push((w, s));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::LieType;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse::<LieType>().unwrap()).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn shifted_action_examples() {
        let a1 = rs("A1");
        let id = AffineWeylElem::identity(1);
        assert_eq!(shifted_action(&a1, &id, &w(&[5]), 3), w(&[5]));
        let s = AffineWeylElem::finite(&a1, &[0]);
        assert_eq!(shifted_action(&a1, &s, &w(&[0]), 3), w(&[-2]));
        let t = AffineWeylElem::translation(CorootElem(vec![1]));
        assert_eq!(shifted_action(&a1, &t, &w(&[0]), 3), w(&[6]));
    }

    #[test]
    fn action_law() {
        let a2 = rs("A2");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let w1: Vec<usize> = (0..rng.random_range(0..6)).map(|_| rng.random_range(0..3)).collect();
            let w2: Vec<usize> = (0..rng.random_range(0..6)).map(|_| rng.random_range(0..3)).collect();
            let a = AffineWeylElem::from_affine_word(&a2, &w1);
            let b = AffineWeylElem::from_affine_word(&a2, &w2);
            let xi = w(&[rng.random_range(-9..9), rng.random_range(-9..9)]);
            let lhs = shifted_action(&a2, &a.compose(&a2, &b), &xi, 5);
            let rhs = shifted_action(&a2, &a, &shifted_action(&a2, &b, &xi, 5), 5);
            assert_eq!(lhs, rhs);
            let total = w1.len() + w2.len();
            assert_eq!(a.compose(&a2, &b).parity, if total % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn affine_reflection_fixes_its_wall() {
        for name in ["A1", "A2", "B2", "G2", "C3"] {
            let r = rs(name);
            let s0 = AffineWeylElem::simple(&r, r.rank());
            assert_eq!(s0.parity, -1);
            // a point on the shifted affine wall is fixed
            let l = 7;
            let mut mu = Weight::zero(r.rank());
            // find some weight with <mu, theta^vee> = l
            'outer: for c in integer_box(&vec![0; r.rank()], &vec![l; r.rank()]) {
                let cand = Weight(c);
                if r.theta_pairing(&cand) == l {
                    mu = cand;
                    break 'outer;
                }
            }
            let xi = mu.sub(&r.rho);
            assert_eq!(shifted_action(&r, &s0, &xi, l), xi, "{name}");
        }
    }

    #[test]
    fn affine_fold_examples() {
        let a1 = rs("A1");
        assert_eq!(
            affine_fold(&a1, &w(&[0]), 3).unwrap(),
            FoldOutcome::Interior { weight: w(&[0]), sign: 1 }
        );
        assert_eq!(affine_fold(&a1, &w(&[2]), 3).unwrap(), FoldOutcome::Boundary);
        assert_eq!(
            affine_fold(&a1, &w(&[3]), 3).unwrap(),
            FoldOutcome::Interior { weight: w(&[1]), sign: -1 }
        );
        assert!(matches!(
            affine_fold(&a1, &w(&[3]), 0),
            Err(Error::NonPositiveLevel(0))
        ));
    }

    #[test]
    fn finite_fold_examples() {
        let a1 = rs("A1");
        assert_eq!(
            finite_fold(&a1, &w(&[4])),
            FoldOutcome::Interior { weight: w(&[4]), sign: 1 }
        );
        assert_eq!(finite_fold(&a1, &w(&[-1])), FoldOutcome::Boundary);
        assert_eq!(
            finite_fold(&a1, &w(&[-3])),
            FoldOutcome::Interior { weight: w(&[1]), sign: -1 }
        );
    }

    /// Independent orbit oracle for A1: the shifted orbit of xi0 at level l
    /// is `{xi0 + 2 l j}` (even) and `{-xi0 - 2 + 2 l j}` (odd).
    fn a1_orbit_oracle(xi0: i64, l: i64, bx: i64) -> BTreeMap<i64, i64> {
        let mut m = BTreeMap::new();
        for j in -100..=100 {
            let even = xi0 + 2 * l * j;
            let odd = -xi0 - 2 + 2 * l * j;
            if even.abs() <= bx {
                m.insert(even, 1);
            }
            if odd.abs() <= bx {
                m.insert(odd, -1);
            }
        }
        m
    }

    #[test]
    fn enumerate_orbit_a1_matches_oracle() {
        let a1 = rs("A1");
        let got = enumerate_orbit(&a1, &w(&[0]), 3, 8).unwrap();
        let expected: Vec<(Weight, i64)> = vec![
            (w(&[-8]), -1),
            (w(&[-6]), 1),
            (w(&[-2]), -1),
            (w(&[0]), 1),
            (w(&[4]), -1),
            (w(&[6]), 1),
        ];
        assert_eq!(got, expected);
        for l in 2..8 {
            for xi0 in 0..=(l - 2) {
                let got: BTreeMap<i64, i64> = enumerate_orbit(&a1, &w(&[xi0]), l, 20)
                    .unwrap()
                    .into_iter()
                    .map(|(x, s)| (x.0[0], s))
                    .collect();
                assert_eq!(got, a1_orbit_oracle(xi0, l, 20));
            }
        }
    }

    #[test]
    fn enumerate_orbit_small_box() {
        let a2 = rs("A2");
        assert_eq!(
            enumerate_orbit(&a2, &w(&[1, 0]), 5, 1).unwrap(),
            vec![(w(&[1, 0]), 1)]
        );
        assert!(enumerate_orbit(&a2, &w(&[3, 0]), 5, 4).is_err());
    }

    #[test]
    fn orbit_points_fold_back() {
        for (name, l) in [("A2", 5), ("B2", 6), ("G2", 6)] {
            let r = rs(name);
            for xi0 in integer_box(&vec![0; 2], &vec![l; 2]).into_iter().map(Weight) {
                if !is_alcove_interior(&r, &xi0, l) {
                    continue;
                }
                for (p, s) in enumerate_orbit(&r, &xi0, l, 12).unwrap() {
                    assert_eq!(
                        affine_fold(&r, &p, l).unwrap(),
                        FoldOutcome::Interior { weight: xi0.clone(), sign: s },
                        "{name} {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn fold_trace_reconstructs_input() {
        let g2 = rs("G2");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let xi = w(&[rng.random_range(-15..15), rng.random_range(-15..15)]);
            let (out, trace) = affine_fold_traced(&g2, &xi, 6, |_| 0).unwrap();
            if let FoldOutcome::Interior { weight, sign } = out {
                let elem = element_from_trace(&g2, &trace);
                assert_eq!(shifted_action(&g2, &elem, &weight, 6), xi);
                assert_eq!(elem.parity, sign);
            }
        }
    }

    #[test]
    fn fold_is_idempotent_on_interior() {
        let b2 = rs("B2");
        for c in integer_box(&[-3, -3], &[8, 8]) {
            let xi = Weight(c);
            if let FoldOutcome::Interior { weight, .. } = affine_fold(&b2, &xi, 7).unwrap() {
                assert_eq!(
                    affine_fold(&b2, &weight, 7).unwrap(),
                    FoldOutcome::Interior { weight: weight.clone(), sign: 1 }
                );
            }
        }
    }

    #[test]
    fn random_tie_breaking_is_consistent() {
        for (name, l) in [("A2", 4), ("B2", 5), ("G2", 5), ("A3", 5)] {
            let r = rs(name);
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..300 {
                let xi = Weight((0..r.rank()).map(|_| rng.random_range(-20..20)).collect());
                let base = affine_fold(&r, &xi, l).unwrap();
                let mut rng2 = ChaCha8Rng::seed_from_u64(rng.random());
                let (other, _) =
                    affine_fold_traced(&r, &xi, l, |walls| rng2.random_range(0..walls.len())).unwrap();
                assert_eq!(base, other, "{name} {xi}");
            }
        }
    }

    #[test]
    fn fold_outcome_json() {
        let o = FoldOutcome::Interior { weight: w(&[1, 2]), sign: -1 };
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(s, r#"{"kind":"interior","weight":[1,2],"sign":-1}"#);
        assert_eq!(serde_json::to_string(&FoldOutcome::Boundary).unwrap(), r#"{"kind":"boundary"}"#);
    }
}
