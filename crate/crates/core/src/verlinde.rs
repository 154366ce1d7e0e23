//! The level-k Verlinde ring: level weights, Freudenthal weight systems,
//! Brauer-Klimyk tensor products, Kac-Walton fusion, the quotient map from
//! the representation ring, and two independent oracles (the S-matrix
//! Verlinde formula and character values at the special torus points).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use parking_lot::{Mutex, RwLock};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affine_weyl::{affine_fold, finite_fold, FoldOutcome};
use crate::characters::{level_weight_list, FormalCharacter};
use crate::error::{Error, Result};
use crate::rootsystem::{LieType, RootSystem, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelWeights {
    pub k: i64,
    pub level: i64,
    pub weights: Vec<Weight>,
}

impl LevelWeights {
    pub fn contains(&self, w: &Weight) -> bool {
        self.weights.binary_search_by_key(&sort_key(w), sort_key).is_ok()
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.weights.binary_search_by_key(&sort_key(w), sort_key).ok()
    }
}

fn sort_key(w: &Weight) -> (i64, Weight) {
    (w.0.iter().sum(), w.clone())
}

pub fn level_weights(rs: &RootSystem, k: i64) -> LevelWeights {
    LevelWeights {
        k,
        level: k + rs.h_dual,
        weights: level_weight_list(rs, k),
    }
}

pub fn is_level_weight(rs: &RootSystem, w: &Weight, k: i64) -> bool {
    w.rank() == rs.rank() && rs.is_dominant(w) && rs.theta_pairing(w) <= k
}

/// Element of the Verlinde ring; `coeffs` holds nonzero entries only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionElement {
    pub k: i64,
    pub coeffs: BTreeMap<Weight, i64>,
}

impl FusionElement {
    pub fn zero(k: i64) -> Self {
        FusionElement {
            k,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(k: i64, lambda: Weight) -> Self {
        let mut e = Self::zero(k);
        e.add_term(lambda, 1);
        e
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let v = self.coeffs.entry(w.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&w);
        }
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.coeffs.get(w).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &FusionElement) -> FusionElement {
        let mut out = self.clone();
        for (w, &c) in &other.coeffs {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> FusionElement {
        let mut out = FusionElement::zero(self.k);
        for (w, &x) in &self.coeffs {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Bilinear extension of the fusion product.
    pub fn multiply(&self, rs: &RootSystem, other: &FusionElement) -> Result<FusionElement> {
        if self.k != other.k {
            return Err(Error::LevelMismatch(self.k, other.k));
        }
        let mut out = FusionElement::zero(self.k);
        for (a, &ca) in &self.coeffs {
            for (b, &cb) in &other.coeffs {
                out = out.add(&fusion(rs, a, b, self.k)?.scale(ca * cb));
            }
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    weight: Weight,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct FusionRepr {
    k: i64,
    coeffs: Vec<CoeffRepr>,
}

impl Serialize for FusionElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FusionRepr {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(w, &c)| CoeffRepr {
                    weight: w.clone(),
                    coeff: c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FusionElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FusionRepr::deserialize(d)?;
        let mut e = FusionElement::zero(r.k);
        for c in r.coeffs {
            e.add_term(c.weight, c.coeff);
        }
        Ok(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub highest: Weight,
    pub mults: BTreeMap<Weight, i64>,
}

impl WeightSystem {
    pub fn dimension(&self) -> i64 {
        self.mults.values().sum()
    }

    pub fn character(&self) -> FormalCharacter {
        FormalCharacter::from_terms(self.mults.iter().map(|(w, &m)| (w.clone(), m)))
    }

    pub fn mult(&self, w: &Weight) -> i64 {
        self.mults.get(w).copied().unwrap_or(0)
    }
}

/// Dominant weights `mu <= lambda`, by subtracting positive roots.
fn dominant_weights_below(rs: &RootSystem, lambda: &Weight) -> BTreeSet<Weight> {
    let mut seen = BTreeSet::from([lambda.clone()]);
    let mut queue = VecDeque::from([lambda.clone()]);
    while let Some(mu) = queue.pop_front() {
        for alpha in &rs.positive_roots {
            let nu = mu.sub(alpha);
            if rs.is_dominant(&nu) && seen.insert(nu.clone()) {
                queue.push_back(nu);
            }
        }
    }
    seen
}

fn compute_weight_system(rs: &RootSystem, lambda: &Weight) -> WeightSystem {
    let dominant = dominant_weights_below(rs, lambda);
    let depth = |mu: &Weight| -> Rational64 {
        rs.to_root_coords(&lambda.sub(mu))
            .into_iter()
            .fold(Rational64::zero(), |a, b| a + b)
    };
    let mut ordered: Vec<(Rational64, Weight)> = dominant.iter().map(|m| (depth(m), m.clone())).collect();
    ordered.sort();

    let ip = |a: &Weight, b: &Weight| rs.inner_product_weights(a, b).expect("rank checked");
    let lr = lambda.add(&rs.rho);
    let top = ip(&lr, &lr);
    let mut mult: HashMap<Weight, i64> = HashMap::new();
    for (_, mu) in &ordered {
        if mu == lambda {
            mult.insert(mu.clone(), 1);
            continue;
        }
        let mut acc = Rational64::zero();
        for alpha in &rs.positive_roots {
            let mut nu = mu.add(alpha);
            loop {
                let dom = rs.dominant_conjugate(&nu);
                if !dominant.contains(&dom) {
                    break;
                }
                let m = mult.get(&dom).copied().unwrap_or(0);
                acc += ip(&nu, alpha) * m;
                nu = nu.add(alpha);
            }
        }
        let mr = mu.add(&rs.rho);
        let denom = top - ip(&mr, &mr);
        let value = acc * 2 / denom;
        debug_assert!(value.is_integer());
        mult.insert(mu.clone(), value.to_integer());
    }

    let mut mults = BTreeMap::new();
    for (mu, &m) in &mult {
        if m != 0 {
            for nu in rs.weyl_orbit(mu) {
                mults.insert(nu, m);
            }
        }
    }
    WeightSystem {
        highest: lambda.clone(),
        mults,
    }
}

const CACHE_VERSION: &str = "v1";

/// Memo of Freudenthal weight systems keyed by `(type, highest weight)`,
/// optionally mirrored to one JSON file per key on disk.
#[derive(Debug, Default)]
pub struct WeightCache {
    memory: RwLock<HashMap<(LieType, Weight), Arc<WeightSystem>>>,
    dir: Option<PathBuf>,
    write_lock: Mutex<()>,
}

impl WeightCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn persistent(dir: impl Into<PathBuf>) -> Self {
        WeightCache {
            dir: Some(dir.into()),
            ..Self::default()
        }
    }

    pub fn file_path(&self, t: LieType, lambda: &Weight) -> Option<PathBuf> {
        let name: Vec<String> = lambda.0.iter().map(|x| x.to_string()).collect();
        self.dir
            .as_ref()
            .map(|d| d.join(CACHE_VERSION).join(t.to_string()).join(format!("{}.json", name.join("_"))))
    }

    pub fn get(&self, rs: &RootSystem, lambda: &Weight) -> Arc<WeightSystem> {
        let key = (rs.lie_type, lambda.clone());
        if let Some(ws) = self.memory.read().get(&key) {
            return ws.clone();
        }
        let ws = self
            .load(rs, lambda)
            .unwrap_or_else(|| {
                let ws = compute_weight_system(rs, lambda);
                self.store(rs, &ws);
                ws
            });
        let ws = Arc::new(ws);
        self.memory.write().entry(key).or_insert(ws).clone()
    }

    fn load(&self, rs: &RootSystem, lambda: &Weight) -> Option<WeightSystem> {
        let path = self.file_path(rs.lie_type, lambda)?;
        let text = fs::read_to_string(path).ok()?;
        let ch: FormalCharacter = serde_json::from_str(&text).ok()?;
        let ws = WeightSystem {
            highest: lambda.clone(),
            mults: ch.terms().map(|(w, m)| (w.clone(), m)).collect(),
        };
        let sane = ws.mults.keys().all(|w| w.rank() == rs.rank())
            && ws.mult(lambda) == 1
            && ws.mults.values().all(|&m| m > 0)
            && ws.dimension() == rs.weyl_dimension(lambda);
        sane.then_some(ws)
    }

    fn store(&self, rs: &RootSystem, ws: &WeightSystem) {
        let Some(path) = self.file_path(rs.lie_type, &ws.highest) else {
            return;
        };
        let _guard = self.write_lock.lock();
        let Ok(text) = serde_json::to_string(&ws.character()) else {
            return;
        };
        // Cache failures only cost recomputation.
        if let Some(parent) = path.parent() {
            let _ = fs::create_dir_all(parent);
        }
        let tmp = path.with_extension("json.tmp");
        if fs::write(&tmp, text).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }
}

static GLOBAL_CACHE: OnceLock<WeightCache> = OnceLock::new();

fn global_cache() -> &'static WeightCache {
    GLOBAL_CACHE.get_or_init(WeightCache::in_memory)
}

/// Back the process-wide cache with `dir`. Only effective before the first
/// weight system is computed; returns whether it took effect.
pub fn set_global_cache_dir(dir: impl Into<PathBuf>) -> bool {
    GLOBAL_CACHE.set(WeightCache::persistent(dir)).is_ok()
}

/// Weights of the irreducible representation with highest weight `lambda`.
pub fn freudenthal_weights(rs: &RootSystem, lambda: &Weight) -> Result<Arc<WeightSystem>> {
    freudenthal_weights_cached(rs, lambda, global_cache())
}

pub fn freudenthal_weights_cached(
    rs: &RootSystem,
    lambda: &Weight,
    cache: &WeightCache,
) -> Result<Arc<WeightSystem>> {
    rs.check_weight(lambda)?;
    if !rs.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.clone()));
    }
    Ok(cache.get(rs, lambda))
}

/// Brauer-Klimyk: multiplicities of irreducibles in `V_lambda (x) V_mu`.
pub fn tensor_decompose(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<BTreeMap<Weight, i64>> {
    rs.check_weight(lambda)?;
    if !rs.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.clone()));
    }
    let ws = freudenthal_weights(rs, mu)?;
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for (xi, &m) in &ws.mults {
        if let FoldOutcome::Interior { weight, sign } = finite_fold(rs, &lambda.add(xi)) {
            *out.entry(weight).or_insert(0) += sign * m;
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

fn check_level_weight(rs: &RootSystem, w: &Weight, k: i64) -> Result<()> {
    rs.check_weight(w)?;
    if is_level_weight(rs, w, k) {
        Ok(())
    } else {
        Err(Error::NotLevelWeight { weight: w.clone(), k })
    }
}

/// Kac-Walton fusion product of two level-k weights.
pub fn fusion(rs: &RootSystem, lambda: &Weight, mu: &Weight, k: i64) -> Result<FusionElement> {
    check_level_weight(rs, lambda, k)?;
    check_level_weight(rs, mu, k)?;
    let level = k + rs.h_dual;
    let ws = freudenthal_weights(rs, mu)?;
    let mut out = FusionElement::zero(k);
    for (xi, &m) in &ws.mults {
        if let FoldOutcome::Interior { weight, sign } = affine_fold(rs, &lambda.add(xi), level)? {
            out.add_term(weight, sign * m);
        }
    }
    Ok(out)
}

/// Image of `[V_nu]` under `R(G) -> R_k(G)`.
pub fn project_to_level(rs: &RootSystem, nu: &Weight, k: i64) -> Result<FusionElement> {
    rs.check_weight(nu)?;
    if !rs.is_dominant(nu) {
        return Err(Error::NotDominant(nu.clone()));
    }
    if k < 0 {
        return Err(Error::NonPositiveLevel(k));
    }
    let mut out = FusionElement::zero(k);
    if let FoldOutcome::Interior { weight, sign } = affine_fold(rs, nu, k + rs.h_dual)? {
        out.add_term(weight, sign);
    }
    Ok(out)
}

/// Linear extension of `project_to_level` to a decomposition in `R(G)`.
pub fn project_decomposition(rs: &RootSystem, decomposition: &BTreeMap<Weight, i64>, k: i64) -> Result<FusionElement> {
    let mut out = FusionElement::zero(k);
    for (nu, &c) in decomposition {
        out = out.add(&project_to_level(rs, nu, k)?.scale(c));
    }
    Ok(out)
}

/// Full fusion table over `Pi*_k x Pi*_k`, row-major in level-weight order.
pub fn fusion_table(rs: &RootSystem, k: i64) -> Result<Vec<(Weight, Weight, FusionElement)>> {
    let lw = level_weights(rs, k);
    let pairs: Vec<(Weight, Weight)> = lw
        .weights
        .iter()
        .flat_map(|a| lw.weights.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    pairs
        .into_par_iter()
        .map(|(a, b)| fusion(rs, &a, &b, k).map(|f| (a, b, f)))
        .collect()
}

#[derive(Debug, Clone)]
pub struct SMatrix {
    pub k: i64,
    pub labels: Vec<Weight>,
    pub entries: Vec<Vec<Complex64>>,
    pub normalization: f64,
}

impl SMatrix {
    pub fn new(rs: &RootSystem, k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::NonPositiveLevel(k));
        }
        let lw = level_weights(rs, k);
        let level = lw.level as f64;
        let n = lw.weights.len();
        let to_f64 = |x: Rational64| x.to_f64().expect("finite rational");
        // B(nu, mu+rho) via the weight Gram matrix
        let gram: Vec<Vec<f64>> = rs
            .gram_weight
            .iter()
            .map(|r| r.iter().map(|&x| to_f64(x)).collect())
            .collect();
        let orbits: Vec<Vec<(Weight, i64)>> = lw
            .weights
            .iter()
            .map(|l| rs.regular_orbit(&l.add(&rs.rho)))
            .collect::<Result<_>>()?;
        let shifted: Vec<Vec<f64>> = lw
            .weights
            .iter()
            .map(|m| {
                let v = m.add(&rs.rho);
                gram.iter()
                    .map(|row| row.iter().zip(&v.0).map(|(g, &x)| g * x as f64).sum())
                    .collect()
            })
            .collect();
        let mut raw = vec![vec![Complex64::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::zero();
                for (nu, s) in &orbits[i] {
                    let b: f64 = nu.0.iter().zip(&shifted[j]).map(|(&a, g)| a as f64 * g).sum();
                    acc += Complex64::from_polar(*s as f64, -2.0 * PI * b / level);
                }
                raw[i][j] = acc;
            }
        }
        let row0: f64 = raw[0].iter().map(|z| z.norm_sqr()).sum();
        let normalization = 1.0 / row0.sqrt();
        let entries = raw
            .into_iter()
            .map(|r| r.into_iter().map(|z| z * normalization).collect())
            .collect();
        Ok(SMatrix {
            k,
            labels: lw.weights,
            entries,
            normalization,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.labels.iter().position(|x| x == w)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                m = m.max((self.entries[i][j] - self.entries[j][i]).norm());
            }
        }
        m
    }

    /// `max |S S^dagger - 1|` entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::zero();
                for l in 0..n {
                    acc += self.entries[i][l] * self.entries[j][l].conj();
                }
                let target = if i == j { 1.0 } else { 0.0 };
                m = m.max((acc - target).norm());
            }
        }
        m
    }

    /// Raw Verlinde-formula value of `N_{lambda mu}^nu` before rounding.
    pub fn verlinde_raw(&self, i: usize, j: usize, l: usize) -> Complex64 {
        (0..self.dim())
            .map(|s| {
                self.entries[i][s] * self.entries[j][s] * self.entries[l][s].conj() / self.entries[0][s]
            })
            .sum()
    }

    /// Fusion coefficients from the Verlinde formula, with the largest
    /// pre-rounding deviation seen.
    pub fn verlinde_fusion(&self, lambda: &Weight, mu: &Weight, tol: f64) -> Result<(FusionElement, f64)> {
        let not_level = |w: &Weight| Error::NotLevelWeight { weight: w.clone(), k: self.k };
        let i = self.index_of(lambda).ok_or_else(|| not_level(lambda))?;
        let j = self.index_of(mu).ok_or_else(|| not_level(mu))?;
        let mut out = FusionElement::zero(self.k);
        let mut worst: f64 = 0.0;
        for (l, nu) in self.labels.iter().enumerate() {
            let v = self.verlinde_raw(i, j, l);
            let r = v.re.round();
            let dev = (v - r).norm();
            worst = worst.max(dev);
            if dev > tol {
                return Err(Error::OracleDisagreement {
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                    nu: nu.clone(),
                    deviation: dev,
                });
            }
            out.add_term(nu.clone(), r as i64);
        }
        Ok((out, worst))
    }
}

pub fn s_matrix(rs: &RootSystem, k: i64) -> Result<SMatrix> {
    SMatrix::new(rs, k)
}

pub const VERLINDE_ROUNDING_TOL: f64 = 1e-6;

pub fn verlinde_fusion(rs: &RootSystem, lambda: &Weight, mu: &Weight, k: i64) -> Result<FusionElement> {
    s_matrix(rs, k)?
        .verlinde_fusion(lambda, mu, VERLINDE_ROUNDING_TOL)
        .map(|(f, _)| f)
}

/// `sum_mu mult(mu) exp(2 pi i <mu, x>)` for `x` in simple-coroot coordinates.
pub fn char_value(ws: &WeightSystem, x: &[Rational64]) -> Complex64 {
    let xf: Vec<f64> = x.iter().map(|q| q.to_f64().unwrap()).collect();
    char_value_f64(ws, &xf)
}

fn char_value_f64(ws: &WeightSystem, x: &[f64]) -> Complex64 {
    ws.mults
        .iter()
        .map(|(mu, &m)| {
            // reduce the exact pairing would need rationals; f64 is enough here
            let p: f64 = mu.0.iter().zip(x).map(|(&a, b)| a as f64 * b).sum();
            Complex64::from_polar(m as f64, 2.0 * PI * p)
        })
        .sum()
}

/// `B^sharp(xi + rho) / (k + h_dual)` for each level-k weight `xi`.
pub fn special_points(rs: &RootSystem, k: i64) -> Vec<Vec<Rational64>> {
    let level = k + rs.h_dual;
    level_weight_list(rs, k)
        .iter()
        .map(|xi| {
            rs.b_sharp(&xi.add(&rs.rho))
                .into_iter()
                .map(|c| c / level)
                .collect()
        })
        .collect()
}

fn fusion_element_value(rs: &RootSystem, e: &FusionElement, x: &[Rational64]) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for (w, &c) in &e.coeffs {
        acc += char_value(&*freudenthal_weights(rs, w)?, x) * c as f64;
    }
    Ok(acc)
}

/// Whether `chi_nu - chi(project_to_level(nu))` vanishes at every special
/// point, i.e. lies in the Verlinde ideal.
pub fn ideal_vanishing_check(rs: &RootSystem, nu: &Weight, k: i64, tol: f64) -> Result<bool> {
    let ws = freudenthal_weights(rs, nu)?;
    let projected = project_to_level(rs, nu, k)?;
    for p in special_points(rs, k) {
        let d = char_value(&ws, &p) - fusion_element_value(rs, &projected, &p)?;
        if d.norm() >= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `max_p |chi_lambda(p) chi_mu(p) - sum_nu N^nu chi_nu(p)|` over special points.
pub fn special_point_deviation(rs: &RootSystem, lambda: &Weight, mu: &Weight, product: &FusionElement) -> Result<f64> {
    let wl = freudenthal_weights(rs, lambda)?;
    let wm = freudenthal_weights(rs, mu)?;
    let mut worst: f64 = 0.0;
    for p in special_points(rs, product.k) {
        let lhs = char_value(&wl, &p) * char_value(&wm, &p);
        let rhs = fusion_element_value(rs, product, &p)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}
