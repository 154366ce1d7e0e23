//! Formal characters of the maximal torus.
//!
//! Three flavours appear: finitely supported characters, characters
//! periodic under the level-`l` translation action of `Pi`, and characters
//! alternating under the shifted affine Weyl action. Infinite characters are
//! always handled through an explicit window `[-w, w]^rank` in
//! fundamental-weight coordinates.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affine_weyl::{affine_fold, FoldOutcome};
use crate::error::{Error, Result};
use crate::lattice::{integer_box, HermiteBasis};
use crate::rootsystem::{RootSystem, Weight};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FormalCharacter {
    terms: BTreeMap<Weight, i64>,
}

impl FormalCharacter {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `e_xi`.
    pub fn monomial(xi: Weight) -> Self {
        let mut c = Self::zero();
        c.add_term(xi, 1);
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(terms: I) -> Self {
        let mut c = Self::zero();
        for (w, m) in terms {
            c.add_term(w, m);
        }
        c
    }

    pub fn add_term(&mut self, xi: Weight, mult: i64) {
        if mult == 0 {
            return;
        }
        let entry = self.terms.entry(xi);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += mult;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(mult);
            }
        }
    }

    pub fn get(&self, xi: &Weight) -> i64 {
        self.terms.get(xi).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.terms.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FormalCharacter) -> FormalCharacter {
        let mut out = self.clone();
        for (w, m) in other.terms() {
            out.add_term(w.clone(), m);
        }
        out
    }

    pub fn sub(&self, other: &FormalCharacter) -> FormalCharacter {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> FormalCharacter {
        FormalCharacter::from_terms(self.terms().map(|(w, m)| (w.clone(), m * c)))
    }

    /// Convolution of multiplicity functions.
    pub fn multiply(&self, other: &FormalCharacter) -> FormalCharacter {
        let mut out = FormalCharacter::zero();
        for (a, ma) in self.terms() {
            for (b, mb) in other.terms() {
                out.add_term(a.add(b), ma * mb);
            }
        }
        out
    }

    pub fn shift(&self, by: &Weight) -> FormalCharacter {
        FormalCharacter::from_terms(self.terms().map(|(w, m)| (w.add(by), m)))
    }

    /// Restriction to `[-bx, bx]^rank`.
    pub fn truncate(&self, bx: i64) -> FormalCharacter {
        FormalCharacter {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.norm_inf() <= bx)
                .map(|(w, &m)| (w.clone(), m))
                .collect(),
        }
    }

    pub fn max_norm_inf(&self) -> i64 {
        self.terms.keys().map(|w| w.norm_inf()).max().unwrap_or(0)
    }

    /// Sum of multiplicities, i.e. the value at the identity.
    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }
}

pub fn char_multiply(a: &FormalCharacter, b: &FormalCharacter) -> FormalCharacter {
    a.multiply(b)
}

/// Transversal of `Pi* / l Pi` with canonical box representatives.
#[derive(Debug, Clone)]
pub struct CosetTransversal {
    level: i64,
    basis: HermiteBasis,
}

impl CosetTransversal {
    pub fn new(rs: &RootSystem, level: i64) -> Result<Self> {
        if level == 0 {
            return Err(Error::NonPositiveLevel(level));
        }
        // columns l * b_flat(alpha_j^vee)
        let m: Vec<Vec<i64>> = rs
            .gram_coroot
            .iter()
            .map(|row| row.iter().map(|x| x * level).collect())
            .collect();
        Ok(CosetTransversal {
            level,
            basis: HermiteBasis::from_columns(&m),
        })
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn reduce(&self, xi: &Weight) -> Weight {
        Weight(self.basis.reduce(&xi.0))
    }

    pub fn representatives(&self) -> Vec<Weight> {
        self.basis.transversal().into_iter().map(Weight).collect()
    }

    pub fn count(&self) -> i64 {
        self.basis.index()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicCharacter {
    pub level: i64,
    /// One entry per canonical coset representative.
    pub coset_mults: BTreeMap<Weight, i64>,
}

impl PeriodicCharacter {
    pub fn zero(rs: &RootSystem, level: i64) -> Result<Self> {
        let t = CosetTransversal::new(rs, level)?;
        Ok(PeriodicCharacter {
            level,
            coset_mults: t.representatives().into_iter().map(|r| (r, 0)).collect(),
        })
    }

    /// Multiplicity at an arbitrary weight.
    pub fn value(&self, transversal: &CosetTransversal, xi: &Weight) -> i64 {
        self.coset_mults
            .get(&transversal.reduce(xi))
            .copied()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &PeriodicCharacter) -> Result<PeriodicCharacter> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        let mut out = self.clone();
        for (r, m) in &other.coset_mults {
            *out.coset_mults.entry(r.clone()).or_insert(0) += m;
        }
        Ok(out)
    }
}

/// Sum a finite character over `l Pi`-cosets.
pub fn periodize(rs: &RootSystem, fc: &FormalCharacter, level: i64) -> Result<PeriodicCharacter> {
    let t = CosetTransversal::new(rs, level)?;
    let mut out = PeriodicCharacter::zero(rs, level)?;
    for (w, m) in fc.terms() {
        rs.check_weight(w)?;
        *out.coset_mults.get_mut(&t.reduce(w)).expect("canonical rep") += m;
    }
    Ok(out)
}

/// Indicator function of the coset `xi + l Pi`.
pub fn coset_indicator(rs: &RootSystem, xi: &Weight, level: i64) -> Result<PeriodicCharacter> {
    rs.check_weight(xi)?;
    let t = CosetTransversal::new(rs, level)?;
    let mut out = PeriodicCharacter::zero(rs, level)?;
    *out.coset_mults.get_mut(&t.reduce(xi)).expect("canonical rep") = 1;
    Ok(out)
}

/// Dominant `lambda` with `<lambda, theta^vee> <= k`, ordered by coordinate
/// sum, then lexicographically.
pub fn level_weight_list(rs: &RootSystem, k: i64) -> Vec<Weight> {
    if k < 0 {
        return vec![];
    }
    let n = rs.rank();
    let mut out: Vec<Weight> = integer_box(&vec![0; n], &vec![k; n])
        .into_iter()
        .map(Weight)
        .filter(|w| rs.theta_pairing(w) <= k)
        .collect();
    out.sort_by_key(|w| (w.0.iter().sum::<i64>(), w.clone()));
    out
}

/// Weights strictly inside the shifted level-`level` alcove.
pub fn alcove_interior_weights(rs: &RootSystem, level: i64) -> Vec<Weight> {
    level_weight_list(rs, level - rs.h_dual)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingCharacter {
    pub level: i64,
    /// Keys are exactly the interior weights for `level`.
    pub alcove_mults: BTreeMap<Weight, i64>,
}

impl AlternatingCharacter {
    pub fn zero(rs: &RootSystem, level: i64) -> Self {
        AlternatingCharacter {
            level,
            alcove_mults: alcove_interior_weights(rs, level)
                .into_iter()
                .map(|w| (w, 0))
                .collect(),
        }
    }

    pub fn delta(rs: &RootSystem, level: i64, lambda: &Weight) -> Result<Self> {
        let mut out = Self::zero(rs, level);
        match out.alcove_mults.get_mut(lambda) {
            Some(m) => *m = 1,
            None => {
                return Err(Error::NotLevelWeight {
                    weight: lambda.clone(),
                    k: level - rs.h_dual,
                })
            }
        }
        Ok(out)
    }

    pub fn get(&self, lambda: &Weight) -> i64 {
        self.alcove_mults.get(lambda).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.alcove_mults.values().all(|&m| m == 0)
    }
}

/// Value at `xi` of the unique alternating extension.
pub fn alternating_extend(rs: &RootSystem, ac: &AlternatingCharacter, xi: &Weight) -> Result<i64> {
    Ok(match affine_fold(rs, xi, ac.level)? {
        FoldOutcome::Boundary => 0,
        FoldOutcome::Interior { weight, sign } => sign * ac.get(&weight),
    })
}

/// The alternating extension of `ac` truncated to the window.
pub fn windowed_extension(rs: &RootSystem, ac: &AlternatingCharacter, window: i64) -> Result<FormalCharacter> {
    let n = rs.rank();
    let mut out = FormalCharacter::zero();
    for c in integer_box(&vec![-window; n], &vec![window; n]) {
        let xi = Weight(c);
        let m = alternating_extend(rs, ac, &xi)?;
        out.add_term(xi, m);
    }
    Ok(out)
}

/// Read an alternating character off its window truncation, checking every
/// windowed entry against the reconstructed extension.
pub fn restrict_to_alcove(
    rs: &RootSystem,
    fc: &FormalCharacter,
    level: i64,
    window: i64,
) -> Result<AlternatingCharacter> {
    if level < 1 {
        return Err(Error::NonPositiveLevel(level));
    }
    let mut ac = AlternatingCharacter::zero(rs, level);
    for (w, m) in ac.alcove_mults.iter_mut() {
        if w.norm_inf() > window {
            return Err(Error::WindowTooSmall(w.clone()));
        }
        *m = fc.get(w);
    }
    for (w, _) in fc.terms() {
        rs.check_weight(w)?;
    }
    let n = rs.rank();
    for c in integer_box(&vec![-window; n], &vec![window; n]) {
        let xi = Weight(c);
        let expected = alternating_extend(rs, &ac, &xi)?;
        let found = fc.get(&xi);
        if found != expected {
            return Err(Error::NotAlternating {
                weight: xi,
                found,
                expected,
            });
        }
    }
    Ok(ac)
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    weight: Weight,
    mult: i64,
}

#[derive(Serialize, Deserialize)]
struct FormalRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for FormalCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormalRepr {
            terms: self
                .terms()
                .map(|(w, m)| TermRepr {
                    weight: w.clone(),
                    mult: m,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FormalRepr::deserialize(d)?;
        Ok(FormalCharacter::from_terms(
            r.terms.into_iter().map(|t| (t.weight, t.mult)),
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct CosetRepr {
    rep: Weight,
    mult: i64,
}

#[derive(Serialize, Deserialize)]
struct PeriodicRepr {
    level: i64,
    cosets: Vec<CosetRepr>,
}

impl Serialize for PeriodicCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PeriodicRepr {
            level: self.level,
            cosets: self
                .coset_mults
                .iter()
                .map(|(r, &m)| CosetRepr {
                    rep: r.clone(),
                    mult: m,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodicCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PeriodicRepr::deserialize(d)?;
        Ok(PeriodicCharacter {
            level: r.level,
            coset_mults: r.cosets.into_iter().map(|c| (c.rep, c.mult)).collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct AlternatingRepr {
    level: i64,
    alcove: Vec<TermRepr>,
}

impl Serialize for AlternatingCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlternatingRepr {
            level: self.level,
            alcove: self
                .alcove_mults
                .iter()
                .map(|(w, &m)| TermRepr {
                    weight: w.clone(),
                    mult: m,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlternatingCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AlternatingRepr::deserialize(d)?;
        Ok(AlternatingCharacter {
            level: r.level,
            alcove_mults: r.alcove.into_iter().map(|t| (t.weight, t.mult)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{CorootElem, LieType};

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse::<LieType>().unwrap()).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn fc(terms: &[(i64, i64)]) -> FormalCharacter {
        FormalCharacter::from_terms(terms.iter().map(|&(x, m)| (w(&[x]), m)))
    }

    #[test]
    fn no_zero_entries_stored() {
        let mut c = fc(&[(1, 2), (3, -1)]);
        c.add_term(w(&[1]), -2);
        assert_eq!(c, fc(&[(3, -1)]));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn multiply_examples() {
        let a = fc(&[(1, 1), (-1, 1)]);
        assert_eq!(a.multiply(&FormalCharacter::monomial(w(&[0]))), a);
        assert_eq!(a.multiply(&a), fc(&[(2, 1), (0, 2), (-2, 1)]));
        let b = fc(&[(0, 1), (-2, -1)]);
        assert_eq!(b.multiply(&a), fc(&[(1, 1), (-3, -1)]));
    }

    #[test]
    fn alternating_extend_examples() {
        let a1 = rs("A1");
        let delta0 = AlternatingCharacter::delta(&a1, 3, &w(&[0])).unwrap();
        assert_eq!(alternating_extend(&a1, &delta0, &w(&[0])).unwrap(), 1);
        assert_eq!(alternating_extend(&a1, &delta0, &w(&[4])).unwrap(), -1);
        let mut any = AlternatingCharacter::zero(&a1, 3);
        any.alcove_mults.insert(w(&[0]), 5);
        any.alcove_mults.insert(w(&[1]), -7);
        assert_eq!(alternating_extend(&a1, &any, &w(&[2])).unwrap(), 0);
        assert_eq!(alternating_extend(&a1, &any, &w(&[1])).unwrap(), -7);
    }

    #[test]
    fn restrict_examples() {
        let a1 = rs("A1");
        let zero = restrict_to_alcove(&a1, &FormalCharacter::zero(), 3, 10).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.alcove_mults.len(), 2);
        let bad = FormalCharacter::monomial(w(&[2]));
        assert!(matches!(
            restrict_to_alcove(&a1, &bad, 3, 10),
            Err(Error::NotAlternating { .. })
        ));
        assert!(matches!(
            restrict_to_alcove(&a1, &FormalCharacter::zero(), 30, 5),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn restrict_inverts_extension_on_deltas() {
        for (name, max_l) in [("A1", 6), ("A2", 5)] {
            let r = rs(name);
            for l in 1..=max_l {
                for lam in alcove_interior_weights(&r, l) {
                    let ac = AlternatingCharacter::delta(&r, l, &lam).unwrap();
                    let ext = windowed_extension(&r, &ac, 10).unwrap();
                    assert_eq!(restrict_to_alcove(&r, &ext, l, 10).unwrap(), ac);
                }
            }
        }
    }

    #[test]
    fn coset_counts() {
        let a1 = rs("A1");
        assert_eq!(CosetTransversal::new(&a1, 3).unwrap().count(), 6);
        let a2 = rs("A2");
        assert_eq!(CosetTransversal::new(&a2, 2).unwrap().count(), 12);
        let g2 = rs("G2");
        assert_eq!(CosetTransversal::new(&g2, 2).unwrap().count(), 4 * 3);
    }

    #[test]
    fn periodize_examples() {
        let a1 = rs("A1");
        let p = periodize(&a1, &FormalCharacter::monomial(w(&[0])), 3).unwrap();
        assert_eq!(p, coset_indicator(&a1, &w(&[0]), 3).unwrap());
        assert_eq!(p.coset_mults.len(), 6);
        let two = periodize(&a1, &fc(&[(0, 1), (6, 1)]), 3).unwrap();
        let ind = coset_indicator(&a1, &w(&[0]), 3).unwrap();
        assert_eq!(two, ind.add(&ind).unwrap());
    }

    #[test]
    fn periodize_is_translation_invariant() {
        let a2 = rs("A2");
        let c = FormalCharacter::from_terms(vec![(w(&[1, 2]), 3), (w(&[-4, 0]), -1), (w(&[0, 0]), 2)]);
        let base = periodize(&a2, &c, 4).unwrap();
        for eta in [vec![1, 0], vec![0, 1], vec![-2, 3]] {
            let shift = a2.b_flat(&CorootElem(eta)).scale(4);
            assert_eq!(periodize(&a2, &c.shift(&shift), 4).unwrap(), base);
        }
    }

    #[test]
    fn json_round_trips() {
        let a2 = rs("A2");
        let c = FormalCharacter::from_terms(vec![(w(&[1, 2]), 3), (w(&[-4, 0]), -1)]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"terms":[{"weight":[-4,0],"mult":-1},{"weight":[1,2],"mult":3}]}"#);
        assert_eq!(serde_json::from_str::<FormalCharacter>(&s).unwrap(), c);
        let p = coset_indicator(&a2, &w(&[1, 1]), 2).unwrap();
        let back: PeriodicCharacter = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        let ac = AlternatingCharacter::delta(&a2, 5, &w(&[1, 1])).unwrap();
        let back: AlternatingCharacter = serde_json::from_str(&serde_json::to_string(&ac).unwrap()).unwrap();
        assert_eq!(back, ac);
    }
}
