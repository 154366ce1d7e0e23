//! Seeded invariant suites, one per module. Each check reports pass/fail
//! counts; case generation is sequential and seeded, case evaluation runs on
//! the ambient rayon pool, and reports are assembled in case order so the
//! output does not depend on the number of workers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine_weyl::{
    affine_fold, affine_fold_traced, element_from_trace, enumerate_orbit, shifted_action, AffineWeylElem,
    FoldOutcome,
};
use crate::characters::{
    level_weight_list, periodize, restrict_to_alcove, windowed_extension, AlternatingCharacter,
    CosetTransversal, FormalCharacter,
};
use crate::error::{Error, Result};
use crate::fht_map::{
    assembly_matches_image, fht_image, fht_image_alternating, fusion_via_fht, inverse_fht, numerator_identity_check,
};
use crate::lattice::integer_box;
use crate::lattice_cocycle::{GroupElem, Phase, TorusElem, TwistedLatticeGroup, Variant};
use crate::rootsystem::{CorootElem, LieType, RootSystem, Series, Weight};
use crate::twisted_group_algebra::{
    is_block_diagonal, matrix_model, random_composable_pair, random_theta, theta_multiply, theta_star, ThetaElement,
    WindowedCosets,
};
use crate::verlinde::{
    freudenthal_weights, fusion, level_weights, project_decomposition, s_matrix, special_point_deviation,
    tensor_decompose, ideal_vanishing_check, FusionElement,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    LatticeCocycle,
    AffineWeyl,
    Characters,
    Verlinde,
    TwistedGroupAlgebra,
    FhtMap,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::LatticeCocycle,
        Suite::AffineWeyl,
        Suite::Characters,
        Suite::Verlinde,
        Suite::TwistedGroupAlgebra,
        Suite::FhtMap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LatticeCocycle => "lattice_cocycle",
            Suite::AffineWeyl => "affine_weyl",
            Suite::Characters => "characters",
            Suite::Verlinde => "verlinde",
            Suite::TwistedGroupAlgebra => "twisted_group_algebra",
            Suite::FhtMap => "fht_map",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let norm = s.trim().replace('-', "_").to_ascii_lowercase();
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == norm)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Overrides for the default configurations of each suite. Unset fields
/// select the built-in configuration lists.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub lie_type: Option<LieType>,
    pub k: Option<i64>,
    pub level: Option<i64>,
    pub window: Option<i64>,
    pub seed: u64,
    pub tolerance: f64,
    /// Random case count override.
    pub cases: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            lie_type: None,
            k: None,
            level: None,
            window: None,
            seed: 0,
            tolerance: 1e-9,
            cases: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub config: String,
    pub passed: u64,
    pub failed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: u64,
    pub failed: u64,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<CheckReport>) -> Self {
        SuiteReport {
            suite,
            passed: checks.iter().map(|c| c.passed).sum(),
            failed: checks.iter().map(|c| c.failed).sum(),
            checks,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn find(&self, check: &str) -> Vec<&CheckReport> {
        self.checks.iter().filter(|c| c.check == check).collect()
    }
}

type CaseResult = std::result::Result<Option<f64>, String>;

fn pass() -> CaseResult {
    Ok(None)
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> CaseResult {
    if cond {
        Ok(None)
    } else {
        Err(msg())
    }
}

fn run_cases<T, F>(check: &str, config: &str, cases: &[T], f: F) -> CheckReport
where
    T: Sync,
    F: Fn(&T) -> CaseResult + Sync,
{
    let outcomes: Vec<CaseResult> = cases.par_iter().map(&f).collect();
    let mut report = CheckReport {
        check: check.to_string(),
        config: config.to_string(),
        passed: 0,
        failed: 0,
        max_deviation: None,
        first_failure: None,
    };
    for o in outcomes {
        match o {
            Ok(dev) => {
                report.passed += 1;
                if let Some(d) = dev {
                    report.max_deviation = Some(report.max_deviation.map_or(d, |m: f64| m.max(d)));
                }
            }
            Err(msg) => {
                report.failed += 1;
                report.first_failure.get_or_insert(msg);
            }
        }
    }
    report
}

fn err_msg(e: Error) -> String {
    e.to_string()
}

/// Deterministic per-check stream: FNV-1a of the labels mixed with the seed.
fn rng_for(seed: u64, labels: &[&str]) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf29ce484222325;
    for l in labels {
        for b in l.bytes().chain([0xff]) {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    ChaCha8Rng::seed_from_u64(h ^ seed)
}

fn ty(s: &str) -> LieType {
    s.parse().expect("built-in type")
}

fn types_or(cfg: &VerifyConfig, defaults: &[&str]) -> Vec<LieType> {
    match cfg.lie_type {
        Some(t) => vec![t],
        None => defaults.iter().map(|s| ty(s)).collect(),
    }
}

/// `(type, k)` pairs: the override if given, else the defaults.
fn level_configs(cfg: &VerifyConfig, defaults: &[(&str, i64, i64)]) -> Vec<(LieType, i64)> {
    let mut out = vec![];
    match (cfg.lie_type, cfg.k) {
        (Some(t), Some(k)) => out.push((t, k)),
        (Some(t), None) => {
            let hi = defaults
                .iter()
                .find(|(s, _, _)| ty(s) == t)
                .map_or(2, |&(_, _, hi)| hi);
            let lo = defaults.first().map_or(1, |&(_, lo, _)| lo);
            out.extend((lo..=hi).map(|k| (t, k)));
        }
        (None, Some(k)) => out.extend(defaults.iter().map(|(s, _, _)| (ty(s), k))),
        (None, None) => {
            for &(s, lo, hi) in defaults {
                out.extend((lo..=hi).map(|k| (ty(s), k)));
            }
        }
    }
    out
}

fn label(t: LieType, what: &str, v: i64) -> String {
    format!("{t} {what}={v}")
}

fn random_weight<R: Rng>(rng: &mut R, n: usize, r: i64) -> Weight {
    Weight((0..n).map(|_| rng.random_range(-r..=r)).collect())
}

fn random_coroot<R: Rng>(rng: &mut R, n: usize, r: i64) -> CorootElem {
    CorootElem((0..n).map(|_| rng.random_range(-r..=r)).collect())
}

fn random_phase<R: Rng>(rng: &mut R) -> Phase {
    let d = rng.random_range(1..=12);
    Phase::new(Rational64::new(rng.random_range(0..d), d))
}

fn random_group_elem<R: Rng>(rng: &mut R, n: usize, level: i64) -> GroupElem {
    let t = TorusElem::new(
        (0..n)
            .map(|_| {
                let d = rng.random_range(1..=12);
                Rational64::new(rng.random_range(0..d), d)
            })
            .collect(),
    );
    GroupElem::new(t, random_coroot(rng, n, 4), random_phase(rng), level)
}

fn random_affine_word<R: Rng>(rng: &mut R, rs: &RootSystem, max_len: usize) -> Vec<usize> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| rng.random_range(0..=rs.rank())).collect()
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::LatticeCocycle => lattice_cocycle_suite(cfg)?,
        Suite::AffineWeyl => affine_weyl_suite(cfg)?,
        Suite::Characters => characters_suite(cfg)?,
        Suite::Verlinde => verlinde_suite(cfg)?,
        Suite::TwistedGroupAlgebra => algebra_suite(cfg)?,
        Suite::FhtMap => fht_suite(cfg)?,
    };
    Ok(SuiteReport::new(suite, checks))
}

pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

fn lattice_cocycle_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let n_cases = cfg.cases.unwrap_or(1000);
    let mut out = vec![];
    for t in types_or(cfg, &["A1", "A2", "B2", "G2"]) {
        let rs = RootSystem::new(t)?;
        let g = TwistedLatticeGroup::new(&rs);
        let n = rs.rank();
        let conf = t.to_string();
        let mut rng = rng_for(cfg.seed, &["lattice_cocycle", &conf]);

        let triples: Vec<[CorootElem; 3]> = (0..n_cases)
            .map(|_| std::array::from_fn(|_| random_coroot(&mut rng, n, 6)))
            .collect();
        out.push(run_cases("sigma_bimultiplicative", &conf, &triples, |[a, b, c]| {
            let left = g.sigma(&a.add(b), c) == g.sigma(a, c) * g.sigma(b, c);
            let right = g.sigma(a, &b.add(c)) == g.sigma(a, b) * g.sigma(a, c);
            expect(left && right, || format!("a={a} b={b} c={c}"))
        }));
        out.push(run_cases("commutator_law", &conf, &triples, |[a, b, _]| {
            let b_ab = rs.inner_product_coroots(a, b).map_err(err_msg)?;
            let lhs = g.sigma(a, b) * g.sigma(b, a);
            expect(lhs == if b_ab % 2 == 0 { 1 } else { -1 }, || format!("a={a} b={b}"))
        }));
        out.push(run_cases("absorbing_property", &conf, &triples, |[a, b, _]| {
            let s = g.absorbed_sign(a, b);
            expect(s == Phase::from_sign(g.sigma(a, b)), || format!("mu={a} eta={b}: {s}"))
        }));

        let elems: Vec<[GroupElem; 3]> = (0..n_cases)
            .map(|_| {
                let level = cfg.level.unwrap_or_else(|| rng.random_range(-4..=4));
                std::array::from_fn(|_| random_group_elem(&mut rng, n, level))
            })
            .collect();
        for (name, variant) in [("associativity_bas", Variant::Bas), ("associativity_triv", Variant::Triv)] {
            out.push(run_cases(name, &conf, &elems, |[x, y, z]| {
                let m = |a: &GroupElem, b: &GroupElem| g.multiply(a, b, variant).map_err(err_msg);
                let lhs = m(&m(x, y)?, z)?;
                let rhs = m(x, &m(y, z)?)?;
                expect(lhs == rhs, || format!("{x} {y} {z}"))
            }));
        }
        out.push(run_cases("inverse", &conf, &elems, |[x, _, _]| {
            for variant in [Variant::Bas, Variant::Triv] {
                let inv = g.inverse(x, variant);
                let id = GroupElem::identity(n, x.level);
                if g.multiply(x, &inv, variant).map_err(err_msg)? != id
                    || g.multiply(&inv, x, variant).map_err(err_msg)? != id
                {
                    return Err(format!("{x} ({variant:?})"));
                }
            }
            pass()
        }));
        out.push(run_cases("psi_homomorphism", &conf, &elems, |[x, y, _]| {
            let lhs = g.psi(&g.multiply(x, y, Variant::Bas).map_err(err_msg)?);
            let rhs = g.multiply(&g.psi(x), &g.psi(y), Variant::Triv).map_err(err_msg)?;
            expect(lhs == rhs, || format!("{x} {y}"))
        }));
    }
    Ok(out)
}

fn affine_weyl_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let n_cases = cfg.cases.unwrap_or(500);
    let mut out = vec![];
    for t in types_or(cfg, &["A1", "A2", "B2", "G2", "C3"]) {
        let rs = RootSystem::new(t)?;
        let n = rs.rank();
        let levels: Vec<i64> = match (cfg.level, cfg.k) {
            (Some(l), _) => vec![l],
            (None, Some(k)) => vec![k + rs.h_dual],
            (None, None) => (1..=3).map(|k| k + rs.h_dual).collect(),
        };
        for level in levels {
            let conf = label(t, "level", level);
            let mut rng = rng_for(cfg.seed, &["affine_weyl", &conf]);
            let interior = level_weight_list(&rs, level - rs.h_dual);

            let cases: Vec<(Vec<usize>, Vec<usize>, Weight)> = (0..n_cases)
                .map(|_| {
                    (
                        random_affine_word(&mut rng, &rs, 6),
                        random_affine_word(&mut rng, &rs, 6),
                        random_weight(&mut rng, n, 12),
                    )
                })
                .collect();
            out.push(run_cases("action_law", &conf, &cases, |(w1, w2, xi)| {
                let a = AffineWeylElem::from_affine_word(&rs, w1);
                let b = AffineWeylElem::from_affine_word(&rs, w2);
                let ab = a.compose(&rs, &b);
                let lhs = shifted_action(&rs, &ab, xi, level);
                let rhs = shifted_action(&rs, &a, &shifted_action(&rs, &b, xi, level), level);
                let parity = if (w1.len() + w2.len()) % 2 == 0 { 1 } else { -1 };
                expect(lhs == rhs && ab.parity == parity, || format!("{w1:?} {w2:?} {xi}"))
            }));

            if !interior.is_empty() {
                let cases: Vec<(Vec<usize>, Weight)> = (0..n_cases)
                    .map(|_| {
                        let lam = interior[rng.random_range(0..interior.len())].clone();
                        (random_affine_word(&mut rng, &rs, 8), lam)
                    })
                    .collect();
                out.push(run_cases("fold_recovers_orbit_point", &conf, &cases, |(word, lam)| {
                    let w = AffineWeylElem::from_affine_word(&rs, word);
                    let moved = shifted_action(&rs, &w, lam, level);
                    let got = affine_fold(&rs, &moved, level).map_err(err_msg)?;
                    let want = FoldOutcome::Interior {
                        weight: lam.clone(),
                        sign: w.parity,
                    };
                    expect(got == want, || format!("{word:?} {lam}: {got:?}"))
                }));
            }

            let cases: Vec<(Weight, u64)> = (0..n_cases)
                .map(|_| (random_weight(&mut rng, n, 25), rng.random()))
                .collect();
            out.push(run_cases("fold_trace_and_tie_breaking", &conf, &cases, |(xi, s)| {
                let base = affine_fold(&rs, xi, level).map_err(err_msg)?;
                let mut r2 = ChaCha8Rng::seed_from_u64(*s);
                let (other, trace) =
                    affine_fold_traced(&rs, xi, level, |walls| r2.random_range(0..walls.len())).map_err(err_msg)?;
                if other != base {
                    return Err(format!("{xi}: {base:?} vs {other:?}"));
                }
                if let FoldOutcome::Interior { weight, sign } = &other {
                    let elem = element_from_trace(&rs, &trace);
                    if shifted_action(&rs, &elem, weight, level) != *xi || elem.parity != *sign {
                        return Err(format!("{xi}: trace does not reconstruct"));
                    }
                    if affine_fold(&rs, weight, level).map_err(err_msg)?.sign() != 1 {
                        return Err(format!("{xi}: fold not idempotent"));
                    }
                }
                pass()
            }));

            out.push(run_cases("orbit_folds_back", &conf, &interior, |lam| {
                for (nu, s) in enumerate_orbit(&rs, lam, level, 8).map_err(err_msg)? {
                    let got = affine_fold(&rs, &nu, level).map_err(err_msg)?;
                    if got != (FoldOutcome::Interior { weight: lam.clone(), sign: s }) {
                        return Err(format!("{lam}: {nu} -> {got:?}"));
                    }
                }
                pass()
            }));
        }
    }
    Ok(out)
}

fn characters_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let n_cases = cfg.cases.unwrap_or(200);
    let window = cfg.window.unwrap_or(10);
    let mut out = vec![];
    for t in types_or(cfg, &["A1", "A2", "B2", "G2"]) {
        let rs = RootSystem::new(t)?;
        let n = rs.rank();
        let levels: Vec<i64> = match (cfg.level, cfg.k) {
            (Some(l), _) => vec![l],
            (None, Some(k)) => vec![k + rs.h_dual],
            (None, None) => (rs.h_dual..=rs.h_dual + 2).collect(),
        };
        for level in levels {
            let conf = label(t, "level", level);
            let mut rng = rng_for(cfg.seed, &["characters", &conf]);
            let interior = level_weight_list(&rs, level - rs.h_dual);

            out.push(run_cases("restrict_extension_round_trip", &conf, &interior, |lam| {
                let d = AlternatingCharacter::delta(&rs, level, lam).map_err(err_msg)?;
                let ext = windowed_extension(&rs, &d, window).map_err(err_msg)?;
                let back = restrict_to_alcove(&rs, &ext, level, window).map_err(err_msg)?;
                expect(back == d, || format!("{lam}"))
            }));

            let perturb: Vec<(Weight, Weight)> = (0..n_cases.min(50))
                .filter(|_| !interior.is_empty())
                .map(|_| {
                    (
                        interior[rng.random_range(0..interior.len())].clone(),
                        random_weight(&mut rng, n, window),
                    )
                })
                .collect();
            out.push(run_cases("non_alternating_rejected", &conf, &perturb, |(lam, at)| {
                let d = AlternatingCharacter::delta(&rs, level, lam).map_err(err_msg)?;
                let mut ext = windowed_extension(&rs, &d, window).map_err(err_msg)?;
                ext.add_term(at.clone(), 1);
                match restrict_to_alcove(&rs, &ext, level, window) {
                    Err(Error::NotAlternating { .. }) => pass(),
                    other => Err(format!("{lam} +e_{at}: {other:?}")),
                }
            }));

            out.push(run_cases("coset_count", &conf, &[()], |_| {
                let tr = CosetTransversal::new(&rs, level).map_err(err_msg)?;
                let want = level.pow(n as u32) * rs.coroot_index();
                let reps = tr.representatives();
                let canonical = reps.iter().all(|r| tr.reduce(r) == *r);
                expect(tr.count() == want && reps.len() as i64 == want && canonical, || {
                    format!("count {} want {want}", tr.count())
                })
            }));

            let cases: Vec<(FormalCharacter, CorootElem)> = (0..n_cases)
                .map(|_| (random_character(&mut rng, n, 4, 6), random_coroot(&mut rng, n, 3)))
                .collect();
            out.push(run_cases("periodize_translation_invariant", &conf, &cases, |(fc, eta)| {
                let shift = rs.b_flat(eta).scale(level);
                let a = periodize(&rs, fc, level).map_err(err_msg)?;
                let b = periodize(&rs, &fc.shift(&shift), level).map_err(err_msg)?;
                let tot: i64 = a.coset_mults.values().sum();
                expect(a == b && tot == fc.total(), || format!("eta={eta}"))
            }));
        }

        let conf = t.to_string();
        let mut rng = rng_for(cfg.seed, &["characters_ring", &conf]);
        let cases: Vec<[FormalCharacter; 3]> = (0..n_cases)
            .map(|_| std::array::from_fn(|_| random_character(&mut rng, n, 3, 5)))
            .collect();
        out.push(run_cases("multiplication_ring_laws", &conf, &cases, |[a, b, c]| {
            let comm = a.multiply(b) == b.multiply(a);
            let assoc = a.multiply(b).multiply(c) == a.multiply(&b.multiply(c));
            let dist = a.multiply(&b.add(c)) == a.multiply(b).add(&a.multiply(c));
            let no_zero = a.multiply(b).terms().all(|(_, m)| m != 0);
            expect(comm && assoc && dist && no_zero, || "ring law".into())
        }));
        out.push(run_cases("json_round_trip", &conf, &cases, |[a, _, _]| {
            let s = serde_json::to_string(a).map_err(|e| e.to_string())?;
            let back: FormalCharacter = serde_json::from_str(&s).map_err(|e| e.to_string())?;
            expect(back == *a, || s)
        }));
    }
    Ok(out)
}

fn random_character<R: Rng>(rng: &mut R, n: usize, terms: usize, r: i64) -> FormalCharacter {
    let mut fc = FormalCharacter::zero();
    for _ in 0..rng.random_range(1..=terms) {
        fc.add_term(random_weight(rng, n, r), rng.random_range(-3..=3));
    }
    fc
}

/// Decompose a W-invariant character by repeatedly removing the character
/// of the irreducible whose highest weight is the highest remaining term.
pub fn peel_decomposition(rs: &RootSystem, fc: &FormalCharacter) -> Result<BTreeMap<Weight, i64>> {
    let height = |w: &Weight| -> Rational64 { rs.to_root_coords(w).into_iter().sum() };
    let mut rest = fc.clone();
    let mut out = BTreeMap::new();
    while !rest.is_empty() {
        let (top, c) = rest
            .terms()
            .max_by(|(a, _), (b, _)| height(a).cmp(&height(b)).then(a.cmp(b)))
            .map(|(w, c)| (w.clone(), c))
            .expect("nonempty");
        if !rs.is_dominant(&top) {
            return Err(Error::Internal(format!("character not W-invariant at {top}")));
        }
        let ch = freudenthal_weights(rs, &top)?.character();
        rest = rest.sub(&ch.scale(c));
        out.insert(top, c);
    }
    Ok(out)
}

/// Known dual Coxeter numbers.
pub fn dual_coxeter_table(t: LieType) -> i64 {
    let n = t.rank as i64;
    match t.series {
        Series::A => n + 1,
        Series::B => 2 * n - 1,
        Series::C => n + 1,
        Series::D => 2 * n - 2,
        Series::E => match n {
            6 => 12,
            7 => 18,
            _ => 30,
        },
        Series::F => 9,
        Series::G => 4,
    }
}

fn verlinde_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let tol = cfg.tolerance;
    let n_assoc = cfg.cases.unwrap_or(200);
    let mut out = vec![];
    let configs = level_configs(cfg, &[("A1", 1, 6), ("A2", 1, 4), ("G2", 1, 2)]);
    for &(t, k) in &configs {
        let rs = RootSystem::new(t)?;
        let conf = label(t, "k", k);
        let lw = level_weights(&rs, k).weights;
        let pairs: Vec<(Weight, Weight)> = lw
            .iter()
            .flat_map(|a| lw.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let s = s_matrix(&rs, k)?;

        out.push(run_cases("s_matrix_symmetric_unitary", &conf, &[()], |_| {
            let dev = s.max_asymmetry().max(s.unitarity_defect());
            expect(dev < tol, || format!("deviation {dev:e}")).map(|_| Some(dev))
        }));
        out.push(run_cases("oracle_equivalence", &conf, &pairs, |(a, b)| {
            let kw = fusion(&rs, a, b, k).map_err(err_msg)?;
            let (vf, dev) = s.verlinde_fusion(a, b, 1e-6).map_err(err_msg)?;
            expect(kw == vf, || format!("{a} x {b}")).map(|_| Some(dev))
        }));
        out.push(run_cases("special_point_identity", &conf, &pairs, |(a, b)| {
            let f = fusion(&rs, a, b, k).map_err(err_msg)?;
            let dev = special_point_deviation(&rs, a, b, &f).map_err(err_msg)?;
            expect(dev < tol, || format!("{a} x {b}: {dev:e}")).map(|_| Some(dev))
        }));
        out.push(run_cases("quotient_multiplicativity", &conf, &pairs, |(a, b)| {
            let dec = tensor_decompose(&rs, a, b).map_err(err_msg)?;
            let p = project_decomposition(&rs, &dec, k).map_err(err_msg)?;
            let f = fusion(&rs, a, b, k).map_err(err_msg)?;
            expect(p == f, || format!("{a} x {b}"))
        }));
        out.push(run_cases("commutativity", &conf, &pairs, |(a, b)| {
            let ab = fusion(&rs, a, b, k).map_err(err_msg)?;
            let ba = fusion(&rs, b, a, k).map_err(err_msg)?;
            let nonneg = ab.coeffs.values().all(|&c| c > 0);
            expect(ab == ba && nonneg, || format!("{a} x {b}"))
        }));
        out.push(run_cases("unit", &conf, &lw, |a| {
            let f = fusion(&rs, a, &Weight::zero(rs.rank()), k).map_err(err_msg)?;
            expect(f == FusionElement::basis(k, a.clone()), || format!("{a}"))
        }));
        let mut rng = rng_for(cfg.seed, &["verlinde_assoc", &conf]);
        let triples: Vec<[Weight; 3]> = (0..n_assoc)
            .map(|_| std::array::from_fn(|_| lw[rng.random_range(0..lw.len())].clone()))
            .collect();
        out.push(run_cases("associativity", &conf, &triples, |[a, b, c]| {
            let ea = FusionElement::basis(k, a.clone());
            let eb = FusionElement::basis(k, b.clone());
            let ec = FusionElement::basis(k, c.clone());
            let lhs = ea.multiply(&rs, &eb).and_then(|x| x.multiply(&rs, &ec)).map_err(err_msg)?;
            let rhs = eb.multiply(&rs, &ec).and_then(|x| ea.multiply(&rs, &x)).map_err(err_msg)?;
            expect(lhs == rhs, || format!("({a} {b}) {c}"))
        }));
        let cases: Vec<Weight> = (0..20)
            .map(|_| Weight((0..rs.rank()).map(|_| rng.random_range(0..=k + 3)).collect()))
            .collect();
        out.push(run_cases("ideal_vanishing", &conf, &cases, |nu| {
            expect(ideal_vanishing_check(&rs, nu, k, tol).map_err(err_msg)?, || format!("{nu}"))
        }));
    }

    let mut types: Vec<LieType> = configs.iter().map(|c| c.0).collect();
    types.dedup();
    for t in types {
        let rs = RootSystem::new(t)?;
        let n = rs.rank();
        let conf = t.to_string();
        let top = if n <= 3 { 4 } else { 1 };
        let lams: Vec<Weight> = integer_box(&vec![0; n], &vec![top; n]).into_iter().map(Weight).collect();
        out.push(run_cases("freudenthal_dimension", &conf, &lams, |lam| {
            let ws = freudenthal_weights(&rs, lam).map_err(err_msg)?;
            let want = rs.weyl_dimension(lam);
            expect(ws.dimension() == want, || format!("{lam}: {} vs {want}", ws.dimension()))
        }));
        let mut rng = rng_for(cfg.seed, &["verlinde_tensor", &conf]);
        let pairs: Vec<(Weight, Weight)> = (0..cfg.cases.unwrap_or(100))
            .map(|_| {
                let mut r = || Weight((0..n).map(|_| rng.random_range(0..=2)).collect());
                (r(), r())
            })
            .collect();
        out.push(run_cases("tensor_vs_character_product", &conf, &pairs, |(a, b)| {
            let bk = tensor_decompose(&rs, a, b).map_err(err_msg)?;
            let prod = freudenthal_weights(&rs, a)
                .and_then(|x| Ok(x.character().multiply(&freudenthal_weights(&rs, b)?.character())))
                .map_err(err_msg)?;
            let peel = peel_decomposition(&rs, &prod).map_err(err_msg)?;
            let dims: i64 = bk.iter().map(|(nu, c)| c * rs.weyl_dimension(nu)).sum();
            let ok = bk == peel && dims == rs.weyl_dimension(a) * rs.weyl_dimension(b);
            expect(ok, || format!("{a} x {b}"))
        }));
    }

    // closed forms for the level-weight counts and the dual Coxeter numbers
    let ks: Vec<i64> = (0..=10).collect();
    let a1 = RootSystem::new(ty("A1"))?;
    let a2 = RootSystem::new(ty("A2"))?;
    out.push(run_cases("level_weight_count_closed_form", "A1,A2 k<=10", &ks, |&k| {
        let c1 = level_weights(&a1, k).weights.len() as i64;
        let c2 = level_weights(&a2, k).weights.len() as i64;
        expect(c1 == k + 1 && c2 == (k + 1) * (k + 2) / 2, || format!("k={k}: {c1} {c2}"))
    }));
    let all = LieType::all_up_to_rank(8);
    out.push(run_cases("dual_coxeter_table", "rank<=8", &all, |&t| {
        let rs = RootSystem::new(t).map_err(err_msg)?;
        let recomputed = 1 + rs.pairing(&rs.rho, &rs.theta_coroot).map_err(err_msg)?;
        let ok = rs.h_dual == recomputed && recomputed == dual_coxeter_table(t);
        expect(ok, || format!("{t}: {} {recomputed}", rs.h_dual))
    }));
    Ok(out)
}

fn algebra_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let n_cases = cfg.cases.unwrap_or(500);
    let window = cfg.window.unwrap_or(2);
    let mut out = vec![];
    let configs: Vec<(LieType, i64)> = match (cfg.lie_type, cfg.level) {
        (Some(t), Some(l)) => vec![(t, l)],
        (Some(t), None) => vec![(t, 2)],
        (None, Some(l)) => vec![(ty("A1"), l), (ty("A2"), l)],
        (None, None) => vec![(ty("A1"), 2), (ty("A1"), 3), (ty("A2"), 2)],
    };
    for (t, level) in configs {
        let rs = RootSystem::new(t)?;
        let conf = label(t, "level", level);
        let mut rng = rng_for(cfg.seed, &["twisted_group_algebra", &conf]);
        let wide = WindowedCosets::new(&rs, level, 4)?;
        let triples: Vec<[ThetaElement; 3]> = (0..n_cases)
            .map(|_| {
                let (a, b) = random_composable_pair(&rs, &wide, &mut rng, 4);
                let (c, _) = random_composable_pair(&rs, &wide, &mut rng, 4);
                [a, b, c]
            })
            .collect();
        out.push(run_cases("associativity", &conf, &triples, |[a, b, c]| {
            let m = |x: &ThetaElement, y: &ThetaElement| theta_multiply(&rs, x, y).map_err(err_msg);
            expect(m(&m(a, b)?, c)? == m(a, &m(b, c)?)?, || "associativity".into())
        }));
        out.push(run_cases("star_anti_multiplicative", &conf, &triples, |[a, b, _]| {
            let ab = theta_multiply(&rs, a, b).map_err(err_msg)?;
            let rhs = theta_multiply(&rs, &theta_star(&rs, b), &theta_star(&rs, a)).map_err(err_msg)?;
            let invol = theta_star(&rs, &theta_star(&rs, a)) == *a;
            expect(theta_star(&rs, &ab) == rhs && invol, || "star".into())
        }));
        out.push(run_cases("partial_isometry", &conf, &triples, |[a, _, _]| {
            for (eta, mu) in a.terms.keys() {
                let th = ThetaElement::basis(level, eta.clone(), mu.clone());
                let p = theta_multiply(&rs, &theta_star(&rs, &th), &th).map_err(err_msg)?;
                if p != ThetaElement::basis(level, CorootElem::zero(rs.rank()), mu.clone()) {
                    return Err(format!("eta={eta} mu={mu}"));
                }
            }
            pass()
        }));

        let wc = WindowedCosets::new(&rs, level, window)?;
        let n_model = cfg.cases.unwrap_or(200);
        let pairs: Vec<(ThetaElement, ThetaElement)> = (0..n_model)
            .map(|_| random_composable_pair(&rs, &wc, &mut rng, 4))
            .collect();
        out.push(run_cases("matrix_model_homomorphism", &conf, &pairs, |(a, b)| {
            let ab = theta_multiply(&rs, a, b).map_err(err_msg)?;
            let lhs = matrix_model(&rs, &ab, window).map_err(err_msg)?;
            let ma = matrix_model(&rs, a, window).map_err(err_msg)?;
            let mb = matrix_model(&rs, b, window).map_err(err_msg)?;
            expect(lhs == ma.multiply(&mb).map_err(err_msg)?, || "homomorphism".into())
        }));
        out.push(run_cases("block_diagonal", &conf, &pairs, |(a, _)| {
            expect(is_block_diagonal(&rs, a, window).map_err(err_msg)?, || "off-block entry".into())
        }));
        let singles: Vec<ThetaElement> = (0..n_model)
            .map(|_| random_theta(&rs, &wc, &mut rng, 3, 1))
            .collect();
        out.push(run_cases("faithful_on_window", &conf, &singles, |a| {
            let m = matrix_model(&rs, a, window).map_err(err_msg)?;
            expect(m.is_zero() == a.is_zero(), || "kernel".into())
        }));
        out.push(run_cases("block_count", &conf, &[()], |_| {
            let m = matrix_model(&rs, &ThetaElement::zero(level), window).map_err(err_msg)?;
            let want = level.abs().pow(rs.rank() as u32) * rs.coroot_index();
            expect(m.block_count() as i64 == want, || format!("{} vs {want}", m.block_count()))
        }));
    }
    Ok(out)
}

fn fht_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let window = cfg.window.unwrap_or(10);
    let n_alt = cfg.cases.unwrap_or(500);
    let mut out = vec![];
    let configs = level_configs(cfg, &[("A1", 1, 5), ("A2", 1, 3)]);
    for &(t, k) in &configs {
        let rs = RootSystem::new(t)?;
        let n = rs.rank();
        let level = k + rs.h_dual;
        let conf = label(t, "k", k);
        let lw = level_weights(&rs, k).weights;

        out.push(run_cases("round_trip", &conf, &lw, |lam| {
            let img = fht_image(&rs, lam, k, window).map_err(err_msg)?;
            let ac = restrict_to_alcove(&rs, &img, level, window).map_err(err_msg)?;
            let delta = fht_image_alternating(&rs, lam, k).map_err(err_msg)?;
            let back = inverse_fht(&rs, &ac).map_err(err_msg)?;
            expect(ac == delta && back == FusionElement::basis(k, lam.clone()), || format!("{lam}"))
        }));
        out.push(run_cases("assembly_equals_image", &conf, &lw, |lam| {
            expect(assembly_matches_image(&rs, lam, k, window).map_err(err_msg)?, || format!("{lam}"))
        }));

        let images: Vec<FormalCharacter> = lw
            .iter()
            .map(|lam| fht_image(&rs, lam, k, window))
            .collect::<Result<_>>()?;
        let mut rng = rng_for(cfg.seed, &["fht_alternation", &conf]);
        let cases: Vec<(usize, Vec<usize>, Weight)> = (0..n_alt)
            .map(|_| {
                let i = rng.random_range(0..lw.len());
                loop {
                    let word = random_affine_word(&mut rng, &rs, 6);
                    let xi = if rng.random_bool(0.5) && !images[i].is_empty() {
                        let support: Vec<&Weight> = images[i].terms().map(|(w, _)| w).collect();
                        support[rng.random_range(0..support.len())].clone()
                    } else {
                        random_weight(&mut rng, n, window)
                    };
                    let w = AffineWeylElem::from_affine_word(&rs, &word);
                    if shifted_action(&rs, &w, &xi, level).norm_inf() <= window {
                        break (i, word, xi);
                    }
                }
            })
            .collect();
        out.push(run_cases("alternation", &conf, &cases, |(i, word, xi)| {
            let w = AffineWeylElem::from_affine_word(&rs, word);
            let moved = shifted_action(&rs, &w, xi, level);
            let img = &images[*i];
            expect(img.get(&moved) == w.parity * img.get(xi), || format!("{word:?} {xi}"))
        }));

        out.push(run_cases("ring_compatibility", &conf, &{
            lw.iter()
                .flat_map(|a| lw.iter().map(move |b| (a.clone(), b.clone())))
                .collect::<Vec<_>>()
        }, |(a, b)| {
            let via = fusion_via_fht(&rs, a, b, k, k + 2).map_err(err_msg)?;
            let direct = fusion(&rs, a, b, k).map_err(err_msg)?;
            expect(via == direct, || format!("{a} x {b}"))
        }));
    }

    let types = match cfg.lie_type {
        Some(t) => vec![t],
        None => ["A1", "A2", "B2", "G2", "A3", "B3", "C3"].iter().map(|s| ty(s)).collect(),
    };
    for t in types {
        let rs = RootSystem::new(t)?;
        let n = rs.rank();
        let top = if n <= 3 { 3 } else { 1 };
        let lams: Vec<Weight> = integer_box(&vec![0; n], &vec![top; n]).into_iter().map(Weight).collect();
        out.push(run_cases("numerator_identity", &t.to_string(), &lams, |lam| {
            let ok = numerator_identity_check(&rs, lam).map_err(err_msg)?;
            let ws = freudenthal_weights(&rs, lam).map_err(err_msg)?;
            let dim_ok = ws.dimension() == rs.weyl_dimension(lam);
            expect(ok && dim_ok, || format!("{lam}"))
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("fht-map".parse::<Suite>().unwrap(), Suite::FhtMap);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        let cfg = VerifyConfig {
            lie_type: Some(ty("A2")),
            k: Some(2),
            cases: Some(20),
            ..VerifyConfig::default()
        };
        for s in Suite::ALL {
            let r = run_suite(s, &cfg).unwrap();
            assert!(r.ok(), "{s}: {:?}", r.checks.iter().find(|c| !c.ok()));
            assert!(r.passed > 0);
        }
    }

    #[test]
    fn peel_matches_tensor() {
        let a2 = RootSystem::new(ty("A2")).unwrap();
        let a = Weight(vec![1, 0]);
        let prod = freudenthal_weights(&a2, &a).unwrap().character().multiply(
            &freudenthal_weights(&a2, &a).unwrap().character(),
        );
        let peel = peel_decomposition(&a2, &prod).unwrap();
        assert_eq!(peel, tensor_decompose(&a2, &a, &a).unwrap());
        assert_eq!(peel.len(), 2);
    }
}
