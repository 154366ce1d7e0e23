//! The lattice `Pi`, the homomorphism `kappa`, the sign cocycle
//! `sigma = (-1)^epsilon`, and the two group laws on `T x Pi x U(1)`.
//!
//! `U(1)` is modelled as `Q/Z`: a [`Phase`] `p` stands for `exp(2 pi i p)`.
//! Torus elements are rational vectors in simple-coroot coordinates of the
//! Lie algebra of `T`, taken modulo `Pi`.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{rat_mat_vec, to_rational};
use crate::rootsystem::{CorootElem, RootSystem, Weight};

fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Rational64);

impl Phase {
    pub fn new(value: Rational64) -> Self {
        Phase(frac(value))
    }

    pub fn zero() -> Self {
        Phase(Rational64::zero())
    }

    pub fn half() -> Self {
        Phase(Rational64::new(1, 2))
    }

    pub fn value(&self) -> Rational64 {
        self.0
    }

    pub fn mul(self, other: Phase) -> Phase {
        Phase::new(self.0 + other.0)
    }

    pub fn inv(self) -> Phase {
        Phase::new(-self.0)
    }

    pub fn pow(self, n: i64) -> Phase {
        Phase::new(self.0 * n)
    }

    /// `+1 -> 0`, `-1 -> 1/2`.
    pub fn from_sign(s: i64) -> Phase {
        if s == 1 {
            Phase::zero()
        } else {
            Phase::half()
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElem(Vec<Rational64>);

impl TorusElem {
    pub fn new(coords: Vec<Rational64>) -> Self {
        TorusElem(coords.into_iter().map(frac).collect())
    }

    pub fn identity(rank: usize) -> Self {
        TorusElem(vec![Rational64::zero(); rank])
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &TorusElem) -> TorusElem {
        TorusElem::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `t^xi` as a phase: `<xi, x>` for `t = exp(x)`.
    pub fn character(&self, xi: &Weight) -> Phase {
        Phase::new(
            self.0
                .iter()
                .zip(&xi.0)
                .fold(Rational64::zero(), |acc, (x, &c)| acc + x * c),
        )
    }
}

impl fmt::Display for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Basic extension, cocycle `(kappa^l, sigma^l)`.
    Bas,
    /// Trivial extension of `Pi`, cocycle `(kappa^l, 1)`.
    Triv,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    pub t: TorusElem,
    pub eta: CorootElem,
    pub z: Phase,
    pub level: i64,
}

impl GroupElem {
    pub fn new(t: TorusElem, eta: CorootElem, z: Phase, level: i64) -> Self {
        GroupElem { t, eta, z, level }
    }

    pub fn identity(rank: usize, level: i64) -> Self {
        GroupElem {
            t: TorusElem::identity(rank),
            eta: CorootElem::zero(rank),
            z: Phase::zero(),
            level,
        }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, eta={}, z={})", self.t, self.eta, self.z)
    }
}

/// Strictly lower-triangular part of the coroot Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonForm {
    pub matrix: Vec<Vec<i64>>,
}

impl EpsilonForm {
    pub fn new(rs: &RootSystem) -> Self {
        let n = rs.rank();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i > j { rs.gram_coroot[i][j] } else { 0 })
                    .collect()
            })
            .collect();
        EpsilonForm { matrix }
    }

    pub fn eval(&self, a: &CorootElem, b: &CorootElem) -> i64 {
        let mut acc = 0;
        for (i, &ai) in a.0.iter().enumerate() {
            for (j, &bj) in b.0.iter().enumerate() {
                acc += self.matrix[i][j] * ai * bj;
            }
        }
        acc
    }
}

/// `kappa^level_eta(t) = t^{-level b_flat(eta)}`.
pub fn kappa(rs: &RootSystem, eta: &CorootElem, t: &TorusElem, level: i64) -> Phase {
    t.character(&rs.b_flat(eta)).pow(-level)
}

pub fn epsilon(rs: &RootSystem, a: &CorootElem, b: &CorootElem) -> i64 {
    EpsilonForm::new(rs).eval(a, b)
}

pub fn sigma(rs: &RootSystem, a: &CorootElem, b: &CorootElem) -> i64 {
    if epsilon(rs, a, b).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Precomputed data for repeated group-law evaluation.
#[derive(Debug, Clone)]
pub struct TwistedLatticeGroup<'a> {
    rs: &'a RootSystem,
    eps: EpsilonForm,
}

impl<'a> TwistedLatticeGroup<'a> {
    pub fn new(rs: &'a RootSystem) -> Self {
        TwistedLatticeGroup {
            rs,
            eps: EpsilonForm::new(rs),
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        self.rs
    }

    pub fn sigma(&self, a: &CorootElem, b: &CorootElem) -> i64 {
        if self.eps.eval(a, b).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn multiply(&self, g1: &GroupElem, g2: &GroupElem, variant: Variant) -> Result<GroupElem> {
        if g1.level != g2.level {
            return Err(Error::LevelMismatch(g1.level, g2.level));
        }
        self.rs.check_coroot(&g1.eta)?;
        self.rs.check_coroot(&g2.eta)?;
        self.rs.check_dim(g1.t.rank())?;
        self.rs.check_dim(g2.t.rank())?;
        let level = g1.level;
        let mut z = kappa(self.rs, &g1.eta, &g2.t, level)
            .mul(g1.z)
            .mul(g2.z);
        if variant == Variant::Bas {
            z = z.mul(Phase::from_sign(self.sigma(&g1.eta, &g2.eta)).pow(level));
        }
        Ok(GroupElem {
            t: g1.t.mul(&g2.t),
            eta: g1.eta.add(&g2.eta),
            z,
            level,
        })
    }

    pub fn inverse(&self, g: &GroupElem, variant: Variant) -> GroupElem {
        // g * g^{-1} = (1, 0, kappa_eta(t^{-1}) sigma(eta,-eta) z w); solve for w.
        let t_inv = TorusElem::new(g.t.coords().iter().map(|x| -x).collect());
        let eta_inv = g.eta.neg();
        let mut w = kappa(self.rs, &g.eta, &t_inv, g.level).mul(g.z).inv();
        if variant == Variant::Bas {
            w = w.mul(
                Phase::from_sign(self.sigma(&g.eta, &eta_inv))
                    .pow(g.level)
                    .inv(),
            );
        }
        GroupElem {
            t: t_inv,
            eta: eta_inv,
            z: w,
            level: g.level,
        }
    }

    /// `eta_eps = 1/2 B^sharp(epsilon(-, eta))` in simple-coroot coordinates.
    pub fn eta_epsilon(&self, eta: &CorootElem) -> TorusElem {
        TorusElem::new(self.eta_epsilon_raw(eta))
    }

    fn eta_epsilon_raw(&self, eta: &CorootElem) -> Vec<Rational64> {
        // functional mu -> mu^T E eta, as a weight (coefficients on the coroot basis)
        let n = self.rs.rank();
        let contraction: Vec<i64> = (0..n)
            .map(|i| (0..n).map(|j| self.eps.matrix[i][j] * eta.0[j]).sum())
            .collect();
        let half = Rational64::new(1, 2);
        rat_mat_vec(&self.rs.gram_weight, &contraction)
            .into_iter()
            .map(|x| x * half)
            .collect()
    }

    /// `Psi(t, eta, z) = (t exp(eta_eps), eta, z)`, from the basic to the
    /// trivial group law.
    pub fn psi(&self, g: &GroupElem) -> GroupElem {
        GroupElem {
            t: g.t.mul(&self.eta_epsilon(&g.eta)),
            eta: g.eta.clone(),
            z: g.z,
            level: g.level,
        }
    }

    /// `exp(eta_eps)^{b_flat(mu)}` as a phase; equals `sigma(mu, eta)`.
    pub fn absorbed_sign(&self, mu: &CorootElem, eta: &CorootElem) -> Phase {
        self.eta_epsilon(eta).character(&self.rs.b_flat(mu))
    }
}

pub fn eta_epsilon(rs: &RootSystem, eta: &CorootElem) -> TorusElem {
    TwistedLatticeGroup::new(rs).eta_epsilon(eta)
}

pub fn psi(rs: &RootSystem, g: &GroupElem) -> GroupElem {
    TwistedLatticeGroup::new(rs).psi(g)
}

pub fn multiply(rs: &RootSystem, g1: &GroupElem, g2: &GroupElem, variant: Variant) -> Result<GroupElem> {
    TwistedLatticeGroup::new(rs).multiply(g1, g2, variant)
}

/// Coordinates of `eta_eps` lie in `1/2 B^sharp(Pi*)`: doubling and applying
/// `B^flat` returns an integer vector.
pub fn eta_epsilon_is_half_integral(rs: &RootSystem, eta: &CorootElem) -> bool {
    let raw = TwistedLatticeGroup::new(rs).eta_epsilon_raw(eta);
    to_rational(&rs.gram_coroot).iter().all(|row| {
        let v = row
            .iter()
            .zip(&raw)
            .fold(Rational64::zero(), |acc, (a, b)| acc + a * b);
        (v * 2).is_integer()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::LieType;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse::<LieType>().unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn kappa_examples() {
        let a1 = rs("A1");
        let t = TorusElem::new(vec![q(1, 4)]);
        let alpha = CorootElem(vec![1]);
        assert_eq!(kappa(&a1, &CorootElem(vec![0]), &t, 5), Phase::zero());
        assert_eq!(kappa(&a1, &alpha, &t, 1), Phase::new(q(1, 2)));
        assert_eq!(kappa(&a1, &alpha, &t, 2), Phase::zero());
    }

    #[test]
    fn sigma_examples() {
        let a1 = rs("A1");
        assert_eq!(sigma(&a1, &CorootElem(vec![3]), &CorootElem(vec![-5])), 1);
        let a2 = rs("A2");
        let b1 = CorootElem(vec![1, 0]);
        let b2 = CorootElem(vec![0, 1]);
        assert_eq!(sigma(&a2, &b2, &b1), -1);
        assert_eq!(sigma(&a2, &b1, &b2), 1);
        assert_eq!(epsilon(&a2, &b2, &b1), -1);
    }

    #[test]
    fn epsilon_form_is_strictly_lower() {
        let g2 = rs("G2");
        let e = EpsilonForm::new(&g2);
        assert_eq!(e.matrix, vec![vec![0, 0], vec![-3, 0]]);
    }

    #[test]
    fn multiply_examples() {
        let a2 = rs("A2");
        let grp = TwistedLatticeGroup::new(&a2);
        let id = GroupElem::identity(2, 1);
        let g = GroupElem::new(
            TorusElem::new(vec![q(1, 3), q(2, 5)]),
            CorootElem(vec![1, -2]),
            Phase::new(q(1, 7)),
            1,
        );
        for v in [Variant::Bas, Variant::Triv] {
            assert_eq!(grp.multiply(&id, &g, v).unwrap(), g);
            assert_eq!(grp.multiply(&g, &id, v).unwrap(), g);
        }
        let x = GroupElem::new(TorusElem::identity(2), CorootElem(vec![1, 0]), Phase::zero(), 1);
        let y = GroupElem::new(TorusElem::identity(2), CorootElem(vec![0, 1]), Phase::zero(), 1);
        let xy = grp.multiply(&x, &y, Variant::Bas).unwrap();
        let yx = grp.multiply(&y, &x, Variant::Bas).unwrap();
        assert_eq!(xy.eta, yx.eta);
        assert_eq!(xy.z.mul(yx.z.inv()), Phase::half());

        let a1 = rs("A1");
        let grp1 = TwistedLatticeGroup::new(&a1);
        let g1 = GroupElem::new(TorusElem::new(vec![q(1, 4)]), CorootElem(vec![1]), Phase::zero(), 1);
        let g2 = GroupElem::new(TorusElem::new(vec![q(1, 4)]), CorootElem(vec![0]), Phase::zero(), 1);
        assert_eq!(grp1.multiply(&g1, &g2, Variant::Bas).unwrap().z, Phase::new(q(1, 2)));
    }

    #[test]
    fn level_mismatch_is_an_error() {
        let a1 = rs("A1");
        let a = GroupElem::identity(1, 1);
        let b = GroupElem::identity(1, 2);
        assert_eq!(
            multiply(&a1, &a, &b, Variant::Bas),
            Err(Error::LevelMismatch(1, 2))
        );
    }

    #[test]
    fn inverse_is_two_sided() {
        let a2 = rs("A2");
        let grp = TwistedLatticeGroup::new(&a2);
        for level in [1, 2, 3] {
            let g = GroupElem::new(
                TorusElem::new(vec![q(1, 6), q(3, 4)]),
                CorootElem(vec![2, -1]),
                Phase::new(q(2, 9)),
                level,
            );
            for v in [Variant::Bas, Variant::Triv] {
                let inv = grp.inverse(&g, v);
                assert_eq!(grp.multiply(&g, &inv, v).unwrap(), GroupElem::identity(2, level));
                assert_eq!(grp.multiply(&inv, &g, v).unwrap(), GroupElem::identity(2, level));
            }
        }
    }

    #[test]
    fn eta_epsilon_examples() {
        let a1 = rs("A1");
        assert_eq!(eta_epsilon(&a1, &CorootElem(vec![4])), TorusElem::identity(1));
        let a2 = rs("A2");
        let grp = TwistedLatticeGroup::new(&a2);
        let b1 = CorootElem(vec![1, 0]);
        let b2 = CorootElem(vec![0, 1]);
        assert_eq!(grp.eta_epsilon(&CorootElem::zero(2)), TorusElem::identity(2));
        assert_eq!(grp.absorbed_sign(&b2, &b1), Phase::from_sign(sigma(&a2, &b2, &b1)));
        assert_eq!(grp.absorbed_sign(&b2, &b1), Phase::half());
    }

    #[test]
    fn absorbing_property_all_types() {
        for t in LieType::all_up_to_rank(5) {
            let r = RootSystem::new(t).unwrap();
            let grp = TwistedLatticeGroup::new(&r);
            for i in 0..t.rank {
                for j in 0..t.rank {
                    let mu = CorootElem::unit(t.rank, i);
                    let eta = CorootElem::unit(t.rank, j);
                    assert_eq!(
                        grp.absorbed_sign(&mu, &eta),
                        Phase::from_sign(grp.sigma(&mu, &eta)),
                        "{t} {i} {j}"
                    );
                }
                assert!(eta_epsilon_is_half_integral(&r, &CorootElem::unit(t.rank, i)));
            }
        }
    }

    #[test]
    fn psi_examples() {
        let a1 = rs("A1");
        let g = GroupElem::new(TorusElem::new(vec![q(1, 3)]), CorootElem(vec![2]), Phase::new(q(1, 5)), 1);
        assert_eq!(psi(&a1, &g), g);
        assert_eq!(psi(&a1, &GroupElem::identity(1, 1)), GroupElem::identity(1, 1));

        let a2 = rs("A2");
        let grp = TwistedLatticeGroup::new(&a2);
        let x = GroupElem::new(TorusElem::identity(2), CorootElem(vec![0, 1]), Phase::zero(), 1);
        let y = GroupElem::new(TorusElem::identity(2), CorootElem(vec![1, 0]), Phase::zero(), 1);
        let lhs = grp
            .multiply(&grp.psi(&x), &grp.psi(&y), Variant::Triv)
            .unwrap();
        let rhs = grp.psi(&grp.multiply(&x, &y, Variant::Bas).unwrap());
        assert_eq!(lhs, rhs);
    }
}
