//! Root data for simple Lie types A-G.
//!
//! Weights live in the fundamental-weight basis of the weight lattice, and
//! elements of the integral lattice in the simple-coroot basis. The inner
//! product is the basic one: short coroots (equivalently long roots) have
//! squared length 2. Simple roots follow Bourbaki numbering.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{determinant, rat_inverse, rat_mat_vec, to_rational, IntMatrix, RatMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieType {
    pub series: Series,
    pub rank: usize,
}

impl LieType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let bad = |reason| Error::InvalidLieType {
            series: series.letter(),
            rank,
            reason,
        };
        match series {
            Series::A if rank < 1 => Err(bad("A requires rank >= 1")),
            Series::B | Series::C if rank < 2 => Err(bad("B and C require rank >= 2")),
            Series::D if rank < 3 => Err(bad("D requires rank >= 3")),
            Series::E if !(6..=8).contains(&rank) => Err(bad("E requires rank 6, 7 or 8")),
            Series::F if rank != 4 => Err(bad("F requires rank 4")),
            Series::G if rank != 2 => Err(bad("G requires rank 2")),
            _ => Ok(LieType { series, rank }),
        }
    }

    /// Every valid type with rank at most `max_rank`.
    pub fn all_up_to_rank(max_rank: usize) -> Vec<LieType> {
        let series = [
            Series::A,
            Series::B,
            Series::C,
            Series::D,
            Series::E,
            Series::F,
            Series::G,
        ];
        series
            .iter()
            .flat_map(|&s| (1..=max_rank).filter_map(move |r| LieType::new(s, r).ok()))
            .collect()
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::ParseLieType(s.into()))?;
        let series = match letter.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return Err(Error::ParseLieType(s.into())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::ParseLieType(s.into()))?;
        LieType::new(series, rank)
    }
}

impl Serialize for LieType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LieType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Element of the weight lattice, in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

/// Element of the coroot lattice, in simple-coroot coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CorootElem(pub Vec<i64>);

macro_rules! lattice_vector {
    ($t:ident) => {
        impl $t {
            pub fn zero(rank: usize) -> Self {
                $t(vec![0; rank])
            }

            pub fn unit(rank: usize, i: usize) -> Self {
                let mut v = vec![0; rank];
                v[i] = 1;
                $t(v)
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&x| x == 0)
            }

            pub fn add(&self, other: &Self) -> Self {
                $t(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                $t(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
            }

            pub fn scale(&self, c: i64) -> Self {
                $t(self.0.iter().map(|a| a * c).collect())
            }

            pub fn neg(&self) -> Self {
                self.scale(-1)
            }

            pub fn norm_inf(&self) -> i64 {
                self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
            }

            pub fn norm_l1(&self) -> i64 {
                self.0.iter().map(|x| x.abs()).sum()
            }
        }

        impl From<Vec<i64>> for $t {
            fn from(v: Vec<i64>) -> Self {
                $t(v)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, x) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    };
}

lattice_vector!(Weight);
lattice_vector!(CorootElem);

/// Largest Weyl group whose regular orbits are enumerated explicitly.
pub const MAX_ENUMERATED_WEYL: usize = 500_000;

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub lie_type: LieType,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`, so row `i` is `alpha_i` in
    /// fundamental-weight coordinates.
    pub cartan: IntMatrix,
    pub simple_roots: Vec<Weight>,
    /// Positive roots in fundamental-weight coordinates, ordered by height.
    pub positive_roots: Vec<Weight>,
    /// The same roots in simple-root coordinates.
    pub positive_roots_simple: Vec<Vec<i64>>,
    /// Coroots of `positive_roots`, index-aligned.
    pub positive_coroots: Vec<CorootElem>,
    pub rho: Weight,
    pub theta: Weight,
    pub theta_coroot: CorootElem,
    pub h_dual: i64,
    /// B on the weight lattice in fundamental-weight coordinates.
    pub gram_weight: RatMatrix,
    /// B on the coroot lattice in simple-coroot coordinates.
    pub gram_coroot: IntMatrix,
    /// `B(alpha_i, alpha_i)` for the simple roots.
    pub simple_root_lengths: Vec<Rational64>,
}

fn cartan_matrix(t: LieType) -> IntMatrix {
    let n = t.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t.series {
        Series::A | Series::B | Series::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Series::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Series::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        Series::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        Series::G => link(0, 1),
    }
    match t.series {
        Series::B => a[n - 2][n - 1] = -2,
        Series::C => a[n - 1][n - 2] = -2,
        Series::F => a[1][2] = -2,
        Series::G => a[1][0] = -3,
        _ => {}
    }
    a
}

/// Squared lengths of the simple roots, normalised so the longest is 2.
fn simple_root_lengths(cartan: &IntMatrix) -> Vec<Rational64> {
    let n = cartan.len();
    let mut len: Vec<Option<Rational64>> = vec![None; n];
    len[0] = Some(Rational64::one());
    let mut queue = VecDeque::from([0usize]);
    // cartan[i][j] |alpha_j|^2 = cartan[j][i] |alpha_i|^2
    while let Some(i) = queue.pop_front() {
        let li = len[i].unwrap();
        for j in 0..n {
            if j != i && cartan[i][j] != 0 && len[j].is_none() {
                len[j] = Some(li * cartan[j][i] / cartan[i][j]);
                queue.push_back(j);
            }
        }
    }
    let len: Vec<Rational64> = len.into_iter().map(|l| l.expect("connected Dynkin diagram")).collect();
    let max = *len.iter().max().unwrap();
    len.into_iter().map(|l| l * 2 / max).collect()
}

impl RootSystem {
    pub fn new(t: LieType) -> Result<Self> {
        let t = LieType::new(t.series, t.rank)?;
        let n = t.rank;
        let cartan = cartan_matrix(t);
        let lengths = simple_root_lengths(&cartan);

        // B(alpha_i^vee, alpha_j^vee) = d_j <alpha_j, alpha_i^vee>, d_j = 2 / |alpha_j|^2
        let d: Vec<i64> = lengths
            .iter()
            .map(|l| {
                let x = Rational64::from_integer(2) / l;
                debug_assert!(x.is_integer());
                x.to_integer()
            })
            .collect();
        let gram_coroot: IntMatrix = (0..n)
            .map(|i| (0..n).map(|j| d[j] * cartan[j][i]).collect())
            .collect();
        let gram_weight = rat_inverse(&to_rational(&gram_coroot))
            .ok_or_else(|| Error::Internal("singular coroot Gram matrix".into()))?;

        let simple_roots: Vec<Weight> = cartan.iter().map(|r| Weight(r.clone())).collect();
        let positive_roots_simple = positive_roots_by_closure(&cartan);
        let to_weight = |c: &[i64]| -> Weight {
            let mut w = vec![0i64; n];
            for (i, &ci) in c.iter().enumerate() {
                for (j, wj) in w.iter_mut().enumerate() {
                    *wj += ci * cartan[i][j];
                }
            }
            Weight(w)
        };
        let positive_roots: Vec<Weight> = positive_roots_simple.iter().map(|c| to_weight(c)).collect();

        // alpha^vee = sum_i c_i (|alpha_i|^2 / |alpha|^2) alpha_i^vee
        let mut positive_coroots = Vec::with_capacity(positive_roots.len());
        for (c, root) in positive_roots_simple.iter().zip(&positive_roots) {
            let len = quad(&gram_weight, &root.0, &root.0);
            let mut co = Vec::with_capacity(n);
            for i in 0..n {
                let x = Rational64::from_integer(c[i]) * lengths[i] / len;
                if !x.is_integer() {
                    return Err(Error::Internal(format!("non-integral coroot for {root}")));
                }
                co.push(x.to_integer());
            }
            positive_coroots.push(CorootElem(co));
        }

        let height = |c: &Vec<i64>| c.iter().sum::<i64>();
        let max_height = positive_roots_simple.iter().map(height).max().unwrap();
        let top: Vec<usize> = (0..positive_roots.len())
            .filter(|&i| height(&positive_roots_simple[i]) == max_height)
            .collect();
        if top.len() != 1 {
            return Err(Error::Internal("highest root is not unique".into()));
        }
        let theta = positive_roots[top[0]].clone();
        let theta_coroot = positive_coroots[top[0]].clone();
        let rho = Weight(vec![1; n]);
        let h_dual = 1 + theta_coroot.0.iter().sum::<i64>();

        Ok(RootSystem {
            lie_type: t,
            cartan,
            simple_roots,
            positive_roots,
            positive_roots_simple,
            positive_coroots,
            rho,
            theta,
            theta_coroot,
            h_dual,
            gram_weight,
            gram_coroot,
            simple_root_lengths: lengths,
        })
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        self.check_dim(w.rank())
    }

    pub fn check_coroot(&self, e: &CorootElem) -> Result<()> {
        self.check_dim(e.rank())
    }

    pub fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank(),
                got,
            })
        }
    }

    /// The canonical pairing of the weight lattice with the coroot lattice.
    pub fn pairing(&self, xi: &Weight, eta: &CorootElem) -> Result<i64> {
        self.check_weight(xi)?;
        self.check_coroot(eta)?;
        Ok(dot(&xi.0, &eta.0))
    }

    pub fn inner_product_weights(&self, xi: &Weight, mu: &Weight) -> Result<Rational64> {
        self.check_weight(xi)?;
        self.check_weight(mu)?;
        Ok(quad(&self.gram_weight, &xi.0, &mu.0))
    }

    pub fn inner_product_coroots(&self, a: &CorootElem, b: &CorootElem) -> Result<i64> {
        self.check_coroot(a)?;
        self.check_coroot(b)?;
        Ok(int_quad(&self.gram_coroot, &a.0, &b.0))
    }

    /// `B(eta, -)` as a weight.
    pub fn b_flat(&self, eta: &CorootElem) -> Weight {
        Weight(crate::lattice::int_mat_vec(&self.gram_coroot, &eta.0))
    }

    /// Inverse of `b_flat`, in rational simple-coroot coordinates.
    pub fn b_sharp(&self, xi: &Weight) -> Vec<Rational64> {
        rat_mat_vec(&self.gram_weight, &xi.0)
    }

    /// `<xi, theta^vee>`, which equals `B(xi, theta)`.
    pub fn theta_pairing(&self, xi: &Weight) -> i64 {
        dot(&xi.0, &self.theta_coroot.0)
    }

    /// Simple reflection `s_i`.
    pub fn reflect(&self, i: usize, xi: &Weight) -> Weight {
        let c = xi.0[i];
        Weight(
            xi.0.iter()
                .zip(&self.cartan[i])
                .map(|(x, a)| x - c * a)
                .collect(),
        )
    }

    pub fn is_dominant(&self, xi: &Weight) -> bool {
        xi.0.iter().all(|&x| x >= 0)
    }

    pub fn is_regular_dominant(&self, xi: &Weight) -> bool {
        xi.0.iter().all(|&x| x > 0)
    }

    /// Dominant weight in the Weyl orbit of `xi`.
    pub fn dominant_conjugate(&self, xi: &Weight) -> Weight {
        let mut w = xi.clone();
        while let Some(i) = w.0.iter().position(|&x| x < 0) {
            w = self.reflect(i, &w);
        }
        w
    }

    /// Weyl orbit of a regular dominant weight, each point with `det(w)`.
    /// The first entry is the weight itself.
    pub fn signed_weyl_orbit(&self, mu: &Weight) -> Vec<(Weight, i64)> {
        assert!(self.is_regular_dominant(mu), "orbit signs need a regular weight");
        let mut seen: HashMap<Weight, i64> = HashMap::new();
        let mut order = vec![mu.clone()];
        seen.insert(mu.clone(), 1);
        let mut head = 0;
        while head < order.len() {
            let cur = order[head].clone();
            let s = seen[&cur];
            head += 1;
            for i in 0..self.rank() {
                let next = self.reflect(i, &cur);
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), -s);
                    order.push(next);
                }
            }
        }
        order.into_iter().map(|w| {
            let s = seen[&w];
            (w, s)
        }).collect()
    }

    /// Full (unsigned) Weyl orbit of an arbitrary weight.
    pub fn weyl_orbit(&self, mu: &Weight) -> Vec<Weight> {
        let start = self.dominant_conjugate(mu);
        let mut seen: HashSet<Weight> = HashSet::from([start.clone()]);
        let mut order = vec![start];
        let mut head = 0;
        while head < order.len() {
            let cur = order[head].clone();
            head += 1;
            for i in 0..self.rank() {
                let next = self.reflect(i, &cur);
                if seen.insert(next.clone()) {
                    order.push(next);
                }
            }
        }
        order
    }

    /// Signed orbit of a regular weight, refusing groups too large to list.
    pub fn regular_orbit(&self, mu: &Weight) -> Result<Vec<(Weight, i64)>> {
        let order = self.weyl_group_order();
        if order > MAX_ENUMERATED_WEYL {
            return Err(Error::WeylGroupTooLarge {
                lie_type: self.lie_type.to_string(),
                order,
                limit: MAX_ENUMERATED_WEYL,
            });
        }
        Ok(self.signed_weyl_orbit(mu))
    }

    /// `|W| = prod over positive coroots of (ht + 1) / ht`; no orbit enumeration,
    /// so it is cheap for E8.
    pub fn weyl_group_order(&self) -> usize {
        let mut order = Rational64::one();
        for co in &self.positive_coroots {
            let ht: i64 = co.0.iter().sum();
            order *= Rational64::new(ht + 1, ht);
        }
        debug_assert!(order.is_integer());
        order.to_integer() as usize
    }

    /// Weyl dimension formula: prod over positive coroots of
    /// `<lambda+rho, a^vee> / <rho, a^vee>`.
    pub fn weyl_dimension(&self, lambda: &Weight) -> i64 {
        let shifted = lambda.add(&self.rho);
        let mut dim = Rational64::one();
        for co in &self.positive_coroots {
            dim *= Rational64::new(dot(&shifted.0, &co.0), dot(&self.rho.0, &co.0));
        }
        debug_assert!(dim.is_integer());
        dim.to_integer()
    }

    /// `lambda - mu` expressed in simple-root coordinates.
    pub fn to_root_coords(&self, xi: &Weight) -> Vec<Rational64> {
        // xi_j = sum_i c_i cartan[i][j]  =>  c = (cartan^T)^{-1} xi
        let ct: IntMatrix = (0..self.rank())
            .map(|j| (0..self.rank()).map(|i| self.cartan[i][j]).collect())
            .collect();
        let inv = rat_inverse(&to_rational(&ct)).expect("Cartan matrix is invertible");
        rat_mat_vec(&inv, &xi.0)
    }

    /// `[Pi* : Pi] = det(gram_coroot)`.
    pub fn coroot_index(&self) -> i64 {
        determinant(&self.gram_coroot)
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn quad(m: &RatMatrix, a: &[i64], b: &[i64]) -> Rational64 {
    let mut acc = Rational64::zero();
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                acc += m[i][j] * (ai * bj);
            }
        }
    }
    acc
}

fn int_quad(m: &IntMatrix, a: &[i64], b: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            acc += m[i][j] * ai * bj;
        }
    }
    acc
}

/// Positive roots in simple-root coordinates, by the root-string closure.
fn positive_roots_by_closure(cartan: &IntMatrix) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let simple: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut roots: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut layer = simple;
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for beta in &layer {
            for i in 0..n {
                // <beta, alpha_i^vee>
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if roots.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !roots.contains(&up) {
                        next.insert(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next.into_iter().collect();
    }
    let mut out: Vec<Vec<i64>> = roots.into_iter().collect();
    out.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));
    out
}
