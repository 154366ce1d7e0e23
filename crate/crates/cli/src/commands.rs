use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use alcove_core::affine_weyl::{affine_fold, finite_fold, FoldOutcome};
use alcove_core::fht_map::{fht_image, fht_image_alternating, inverse_fht};
use alcove_core::lattice_cocycle::{GroupElem, Phase, TorusElem, TwistedLatticeGroup, Variant};
use alcove_core::twisted_group_algebra::{matrix_model, theta_multiply, theta_star, BlockMatrixModel, ThetaElement};
use alcove_core::verify::{run_suites, Suite, VerifyConfig};
use alcove_core::verlinde::{fusion, fusion_table, level_weights, s_matrix, FusionElement};
use alcove_core::{CorootElem, RootSystem, Weight};

use crate::config::RunConfig;
use crate::output::{weight_str, Output};
use crate::{CliError, Command, Oracle, VariantArg};

type CmdResult = Result<(Output, u8), CliError>;

pub fn dispatch(cfg: &RunConfig, cmd: &Command) -> CmdResult {
    match cmd {
        Command::Info => info(cfg),
        Command::Fold { weight, finite } => fold(cfg, weight, *finite),
        Command::Fusion { lambda, mu, oracle } => fusion_cmd(cfg, lambda, mu, *oracle),
        Command::FusionTable { oracle } => fusion_table_cmd(cfg, *oracle),
        Command::SMatrix => s_matrix_cmd(cfg),
        Command::FhtImage { weight } => fht_image_cmd(cfg, weight),
        Command::GroupLaw { g1, g2, variant } => group_law(cfg, g1.as_deref(), g2.as_deref(), *variant),
        Command::Algebra { terms, times } => algebra(cfg, terms, times),
        Command::Verify { suites, cases } => verify(cfg, suites, *cases),
    }
}

fn ok(out: Output) -> CmdResult {
    Ok((out, 0))
}

fn root_system(cfg: &RunConfig) -> Result<RootSystem, CliError> {
    Ok(RootSystem::new(cfg.require_type()?)?)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| CliError::Usage(format!("invalid {what} `{s}`"))))
        .collect()
}

fn parse_weight(rs: &RootSystem, s: &str) -> Result<Weight, CliError> {
    let w = Weight(parse_list(s, "weight")?);
    rs.check_weight(&w)?;
    Ok(w)
}

fn parse_rational(s: &str) -> Result<Rational64, CliError> {
    s.trim()
        .parse::<Rational64>()
        .map_err(|_| CliError::Usage(format!("invalid rational `{s}`")))
}

fn fold_level(cfg: &RunConfig, rs: &RootSystem) -> Result<i64, CliError> {
    match (cfg.level, cfg.k) {
        (Some(l), _) => Ok(l),
        (None, Some(k)) => Ok(k + rs.h_dual),
        _ => Err(CliError::Usage("--level (or --k) is required".into())),
    }
}

fn rationals(v: &[Rational64]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn info(cfg: &RunConfig) -> CmdResult {
    let rs = root_system(cfg)?;
    let gram_weight: Vec<Vec<String>> = rs.gram_weight.iter().map(|r| rationals(r)).collect();
    let result = json!({
        "lie_type": rs.lie_type.to_string(),
        "rank": rs.rank(),
        "cartan": rs.cartan,
        "simple_root_lengths": rationals(&rs.simple_root_lengths),
        "positive_roots": rs.positive_roots,
        "positive_coroots": rs.positive_coroots,
        "rho": rs.rho,
        "theta": rs.theta,
        "theta_coroot": rs.theta_coroot,
        "h_dual": rs.h_dual,
        "gram_coroot": rs.gram_coroot,
        "gram_weight": gram_weight,
        "weyl_group_order": rs.weyl_group_order(),
        "coroot_index": rs.coroot_index(),
    });
    let rows = vec![
        vec!["lie_type".into(), rs.lie_type.to_string()],
        vec!["rank".into(), rs.rank().to_string()],
        vec!["h_dual".into(), rs.h_dual.to_string()],
        vec!["rho".into(), weight_str(&rs.rho.0)],
        vec!["theta".into(), weight_str(&rs.theta.0)],
        vec!["theta_coroot".into(), weight_str(&rs.theta_coroot.0)],
        vec!["positive_roots".into(), rs.positive_roots.len().to_string()],
        vec!["weyl_group_order".into(), rs.weyl_group_order().to_string()],
    ];
    ok(Output::new(result).table(&["key", "value"], rows))
}

fn fold_row(o: &FoldOutcome) -> Vec<String> {
    match o {
        FoldOutcome::Boundary => vec!["boundary".into(), String::new(), "0".into()],
        FoldOutcome::Interior { weight, sign } => vec!["interior".into(), weight_str(&weight.0), sign.to_string()],
    }
}

fn fold(cfg: &RunConfig, weight: &str, finite: bool) -> CmdResult {
    let rs = root_system(cfg)?;
    let xi = parse_weight(&rs, weight)?;
    let (outcome, level) = if finite {
        (finite_fold(&rs, &xi), None)
    } else {
        let level = fold_level(cfg, &rs)?;
        (affine_fold(&rs, &xi, level)?, Some(level))
    };
    let result = json!({ "weight": xi, "level": level, "outcome": outcome });
    let row = fold_row(&outcome);
    ok(Output::new(result).table(&["outcome", "weight", "sign"], vec![row]))
}

fn fusion_rows(lambda: &Weight, mu: &Weight, f: &FusionElement) -> Vec<Vec<String>> {
    f.coeffs
        .iter()
        .map(|(nu, c)| vec![weight_str(&lambda.0), weight_str(&mu.0), weight_str(&nu.0), c.to_string()])
        .collect()
}

fn fusion_cmd(cfg: &RunConfig, lambda: &str, mu: &str, oracle: Option<Oracle>) -> CmdResult {
    let rs = root_system(cfg)?;
    let k = cfg.require_k()?;
    let a = parse_weight(&rs, lambda)?;
    let b = parse_weight(&rs, mu)?;
    let product = fusion(&rs, &a, &b, k)?;
    let mut result = json!({ "lambda": a, "mu": b, "k": k, "product": product });
    if oracle == Some(Oracle::Smatrix) {
        let s = s_matrix(&rs, k)?;
        let (vf, dev) = s.verlinde_fusion(&a, &b, cfg.oracle_tolerance())?;
        if vf != product {
            return Err(CliError::Oracle(format!("S-matrix fusion of {a} x {b} differs from folding")));
        }
        result["oracle"] = json!({ "name": "smatrix", "agrees": true, "max_deviation": dev });
    }
    let rows = fusion_rows(&a, &b, &product);
    ok(Output::new(result).table(&["lambda", "mu", "nu", "coeff"], rows))
}

fn fusion_table_cmd(cfg: &RunConfig, oracle: Option<Oracle>) -> CmdResult {
    let rs = root_system(cfg)?;
    let k = cfg.require_k()?;
    let table = fusion_table(&rs, k)?;
    let weights = level_weights(&rs, k).weights;
    let mut result = json!({
        "k": k,
        "level": k + rs.h_dual,
        "weights": weights,
        "table": table
            .iter()
            .map(|(a, b, f)| json!({ "lambda": a, "mu": b, "product": f }))
            .collect::<Vec<_>>(),
    });
    if oracle == Some(Oracle::Smatrix) {
        let s = s_matrix(&rs, k)?;
        let checked: Vec<Result<f64, CliError>> = table
            .par_iter()
            .map(|(a, b, f)| {
                let (vf, dev) = s.verlinde_fusion(a, b, cfg.oracle_tolerance())?;
                if vf != *f {
                    return Err(CliError::Oracle(format!("S-matrix fusion of {a} x {b} differs from folding")));
                }
                Ok(dev)
            })
            .collect();
        let mut worst: f64 = 0.0;
        for c in checked {
            worst = worst.max(c?);
        }
        result["oracle"] = json!({ "name": "smatrix", "pairs": table.len(), "max_deviation": worst });
    }
    let rows = table.iter().flat_map(|(a, b, f)| fusion_rows(a, b, f)).collect();
    ok(Output::new(result).table(&["lambda", "mu", "nu", "coeff"], rows))
}

fn s_matrix_cmd(cfg: &RunConfig) -> CmdResult {
    let rs = root_system(cfg)?;
    let k = cfg.require_k()?;
    let s = s_matrix(&rs, k)?;
    let entries: Vec<Vec<[f64; 2]>> = s
        .entries
        .iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    let result = json!({
        "k": k,
        "labels": s.labels,
        "normalization": s.normalization,
        "entries": entries,
        "max_asymmetry": s.max_asymmetry(),
        "unitarity_defect": s.unitarity_defect(),
    });
    let mut rows = vec![];
    for (i, r) in s.entries.iter().enumerate() {
        for (j, z) in r.iter().enumerate() {
            rows.push(vec![
                weight_str(&s.labels[i].0),
                weight_str(&s.labels[j].0),
                z.re.to_string(),
                z.im.to_string(),
            ]);
        }
    }
    ok(Output::new(result).table(&["lambda", "mu", "re", "im"], rows))
}

fn fht_image_cmd(cfg: &RunConfig, weight: &str) -> CmdResult {
    let rs = root_system(cfg)?;
    let k = cfg.require_k()?;
    let window = cfg.window.unwrap_or(10);
    let lambda = parse_weight(&rs, weight)?;
    let image = fht_image(&rs, &lambda, k, window)?;
    let alternating = fht_image_alternating(&rs, &lambda, k)?;
    let mut result = json!({
        "lambda": lambda,
        "k": k,
        "level": k + rs.h_dual,
        "window": window,
        "character": image,
        "alternating": alternating,
    });
    if k >= 1 {
        result["inverse"] = serde_json::to_value(inverse_fht(&rs, &alternating)?)
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let rows = image
        .terms()
        .map(|(w, m)| vec![weight_str(&w.0), m.to_string()])
        .collect();
    ok(Output::new(result).table(&["weight", "mult"], rows))
}

fn group_elem_json(g: &GroupElem) -> Value {
    json!({ "t": rationals(g.t.coords()), "eta": g.eta, "z": g.z.value().to_string() })
}

fn parse_group_elem(rs: &RootSystem, s: &str, level: i64) -> Result<GroupElem, CliError> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("group element `{s}` must be `t;eta;z`")));
    }
    let t: Vec<Rational64> = parse_list::<String>(parts[0], "torus element")?
        .iter()
        .map(|x| parse_rational(x))
        .collect::<Result<_, _>>()?;
    let eta = CorootElem(parse_list(parts[1], "coroot element")?);
    rs.check_coroot(&eta)?;
    rs.check_dim(t.len())?;
    let z = Phase::new(parse_rational(parts[2])?);
    Ok(GroupElem::new(TorusElem::new(t), eta, z, level))
}

fn random_group_elem(rng: &mut ChaCha8Rng, n: usize, level: i64) -> GroupElem {
    let q = |rng: &mut ChaCha8Rng| {
        let d = rng.random_range(1..=12);
        Rational64::new(rng.random_range(0..d), d)
    };
    let t = TorusElem::new((0..n).map(|_| q(rng)).collect());
    let eta = CorootElem((0..n).map(|_| rng.random_range(-3..=3)).collect());
    let z = Phase::new(q(rng));
    GroupElem::new(t, eta, z, level)
}

fn group_law(cfg: &RunConfig, g1: Option<&str>, g2: Option<&str>, variant: Option<VariantArg>) -> CmdResult {
    let rs = root_system(cfg)?;
    let level = cfg
        .level
        .or(cfg.k)
        .ok_or_else(|| CliError::Usage("--level is required".into()))?;
    let group = TwistedLatticeGroup::new(&rs);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = rs.rank();
    let x = match g1 {
        Some(s) => parse_group_elem(&rs, s, level)?,
        None => random_group_elem(&mut rng, n, level),
    };
    let y = match g2 {
        Some(s) => parse_group_elem(&rs, s, level)?,
        None => random_group_elem(&mut rng, n, level),
    };
    let variants: Vec<Variant> = match variant {
        Some(VariantArg::Bas) => vec![Variant::Bas],
        Some(VariantArg::Triv) => vec![Variant::Triv],
        None => vec![Variant::Bas, Variant::Triv],
    };
    let mut products = serde_json::Map::new();
    for v in variants {
        let name = match v {
            Variant::Bas => "bas",
            Variant::Triv => "triv",
        };
        products.insert(name.into(), group_elem_json(&group.multiply(&x, &y, v)?));
    }
    let psi_lhs = group.psi(&group.multiply(&x, &y, Variant::Bas)?);
    let psi_rhs = group.multiply(&group.psi(&x), &group.psi(&y), Variant::Triv)?;
    if psi_lhs != psi_rhs {
        return Err(CliError::Internal(format!("Psi is not multiplicative on {x}, {y}")));
    }
    let result = json!({
        "level": level,
        "g1": group_elem_json(&x),
        "g2": group_elem_json(&y),
        "sigma": group.sigma(&x.eta, &y.eta),
        "products": products,
        "psi": { "g1": group_elem_json(&group.psi(&x)), "g2": group_elem_json(&group.psi(&y)),
                 "product": group_elem_json(&psi_lhs), "homomorphism": true },
    });
    let rows = products
        .iter()
        .map(|(name, g)| vec![name.clone(), g.to_string()])
        .collect();
    ok(Output::new(result).table(&["law", "product"], rows))
}

fn parse_theta(rs: &RootSystem, terms: &[String], level: i64) -> Result<ThetaElement, CliError> {
    let mut a = ThetaElement::zero(level);
    for s in terms {
        let parts: Vec<&str> = s.split(';').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(CliError::Usage(format!("term `{s}` must be `eta;mu[;coeff]`")));
        }
        let eta = CorootElem(parse_list(parts[0], "coroot element")?);
        rs.check_coroot(&eta)?;
        let mu = parse_weight(rs, parts[1])?;
        let c = match parts.get(2) {
            Some(c) => c.trim().parse().map_err(|_| CliError::Usage(format!("invalid coefficient in `{s}`")))?,
            None => 1,
        };
        a.add_term(eta, mu, c);
    }
    Ok(a)
}

fn model_json(m: &BlockMatrixModel, rank: usize) -> Value {
    let blocks: Vec<Value> = m
        .reps
        .iter()
        .zip(&m.blocks)
        .map(|(rep, b)| {
            let entries: Vec<[i64; 3]> = b
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(move |(j, &x)| [i as i64, j as i64, x])
                })
                .collect();
            json!({ "rep": rep, "entries": entries })
        })
        .collect();
    json!({
        "level": m.level,
        "window": m.window,
        "block_count": m.block_count(),
        "block_dim": ((2 * m.window + 1) as usize).pow(rank as u32),
        "blocks": blocks,
    })
}

fn algebra(cfg: &RunConfig, terms: &[String], times: &[String]) -> CmdResult {
    let rs = root_system(cfg)?;
    let level = cfg.require_level()?;
    if level == 0 {
        return Err(CliError::Usage("level must be nonzero".into()));
    }
    let window = cfg.window.unwrap_or(2);
    let a = parse_theta(&rs, terms, level)?;
    let model = matrix_model(&rs, &a, window)?;
    let mut result = json!({
        "element": a,
        "star": theta_star(&rs, &a),
        "model": model_json(&model, rs.rank()),
    });
    if !times.is_empty() {
        let b = parse_theta(&rs, times, level)?;
        let ab = theta_multiply(&rs, &a, &b)?;
        let mb = matrix_model(&rs, &b, window)?;
        let mab = matrix_model(&rs, &ab, window)?;
        if mab != model.multiply(&mb)? {
            return Err(CliError::Internal("matrix model is not multiplicative".into()));
        }
        result["times"] = json!(b);
        result["product"] = json!(ab);
        result["product_model"] = model_json(&mab, rs.rank());
    }
    let rows = model
        .nonzero_entries()
        .into_iter()
        .map(|(b, i, j, x)| vec![weight_str(&model.reps[b].0), i.to_string(), j.to_string(), x.to_string()])
        .collect();
    ok(Output::new(result).table(&["block", "row", "col", "value"], rows))
}

fn verify(cfg: &RunConfig, suites: &[Suite], cases: Option<usize>) -> CmdResult {
    let selected: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        let mut s = suites.to_vec();
        s.sort();
        s.dedup();
        s
    };
    let vc = VerifyConfig {
        lie_type: cfg.lie_type,
        k: cfg.k,
        level: cfg.level,
        window: cfg.window,
        seed: cfg.seed,
        tolerance: cfg.tolerance,
        cases,
    };
    let reports = run_suites(&selected, &vc)?;
    let passed: u64 = reports.iter().map(|r| r.passed).sum();
    let failed: u64 = reports.iter().map(|r| r.failed).sum();
    let result = json!({ "ok": failed == 0, "passed": passed, "failed": failed, "suites": reports });
    let mut rows = vec![];
    for r in &reports {
        for c in &r.checks {
            rows.push(vec![
                r.suite.to_string(),
                c.check.clone(),
                c.config.clone(),
                c.passed.to_string(),
                c.failed.to_string(),
                c.max_deviation.map(|d| format!("{d:e}")).unwrap_or_default(),
            ]);
        }
    }
    let out = Output::new(result).table(&["suite", "check", "config", "passed", "failed", "max_deviation"], rows);
    Ok((out, if failed == 0 { 0 } else { 4 }))
}
