//! Generator-level inverse of the Freed-Hopkins-Teleman map: Weyl numerators,
//! the character of `wedge n_-`, the image of `x_lambda` as a truncated
//! alternating formal character, the assembly-side character, and the read-off
//! back into the Verlinde ring.

use serde::{Deserialize, Serialize};

use crate::affine_weyl::{enumerate_orbit, translation_range};
use crate::characters::{restrict_to_alcove, AlternatingCharacter, FormalCharacter};
use crate::error::{Error, Result};
use crate::lattice::integer_box;
use crate::rootsystem::{CorootElem, RootSystem, Weight};
use crate::verlinde::{freudenthal_weights, is_level_weight, FusionElement};

/// Label of the generator `x_lambda` of the twisted K-homology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorClass {
    pub lambda: Weight,
    pub k: i64,
}

impl GeneratorClass {
    pub fn new(rs: &RootSystem, lambda: Weight, k: i64) -> Result<Self> {
        check_level(rs, &lambda, k)?;
        Ok(GeneratorClass { lambda, k })
    }

    pub fn level(&self, rs: &RootSystem) -> i64 {
        self.k + rs.h_dual
    }
}

fn check_level(rs: &RootSystem, lambda: &Weight, k: i64) -> Result<()> {
    rs.check_weight(lambda)?;
    if k < 0 || !is_level_weight(rs, lambda, k) {
        return Err(Error::NotLevelWeight {
            weight: lambda.clone(),
            k,
        });
    }
    Ok(())
}

fn check_dominant(rs: &RootSystem, lambda: &Weight) -> Result<()> {
    rs.check_weight(lambda)?;
    if !rs.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.clone()));
    }
    Ok(())
}

/// `sum_w det(w) e_{w(lambda+rho)-rho}`.
pub fn weyl_numerator(rs: &RootSystem, lambda: &Weight) -> Result<FormalCharacter> {
    check_dominant(rs, lambda)?;
    Ok(FormalCharacter::from_terms(
        rs.regular_orbit(&lambda.add(&rs.rho))?
            .into_iter()
            .map(|(nu, s)| (nu.sub(&rs.rho), s)),
    ))
}

/// `prod_{alpha > 0} (1 - e_{-alpha})`.
pub fn wedge_n_minus_char(rs: &RootSystem) -> FormalCharacter {
    let one = FormalCharacter::monomial(Weight::zero(rs.rank()));
    rs.positive_roots.iter().fold(one.clone(), |acc, alpha| {
        let mut factor = one.clone();
        factor.add_term(alpha.neg(), -1);
        acc.multiply(&factor)
    })
}

/// `chi(V_lambda|_T) * chi(wedge n_-) == weyl_numerator(lambda)`, exactly.
pub fn numerator_identity_check(rs: &RootSystem, lambda: &Weight) -> Result<bool> {
    let restricted = freudenthal_weights(rs, lambda)?.character();
    Ok(restricted.multiply(&wedge_n_minus_char(rs)) == weyl_numerator(rs, lambda)?)
}

/// Truncation to the box of radius `window` of the signed shifted orbit of
/// `lambda` at level `k + h_dual`.
pub fn fht_image(rs: &RootSystem, lambda: &Weight, k: i64, window: i64) -> Result<FormalCharacter> {
    check_level(rs, lambda, k)?;
    let orbit = enumerate_orbit(rs, lambda, k + rs.h_dual, window)?;
    Ok(FormalCharacter::from_terms(orbit))
}

/// The same image viewed in the alternating model: the delta at `lambda`.
pub fn fht_image_alternating(rs: &RootSystem, lambda: &Weight, k: i64) -> Result<AlternatingCharacter> {
    check_level(rs, lambda, k)?;
    AlternatingCharacter::delta(rs, k + rs.h_dual, lambda)
}

/// `max |xi|_inf` over the Weyl numerator's support.
pub fn assembly_margin(rs: &RootSystem, lambda: &Weight) -> Result<i64> {
    Ok(weyl_numerator(rs, lambda)?.max_norm_inf())
}

/// `sum_{|eta|_inf <= comb_radius} e_{l b_flat(eta)}`.
pub fn lattice_comb(rs: &RootSystem, level: i64, comb_radius: i64) -> FormalCharacter {
    let n = rs.rank();
    FormalCharacter::from_terms(
        integer_box(&vec![-comb_radius; n], &vec![comb_radius; n])
            .into_iter()
            .map(|eta| (rs.b_flat(&CorootElem(eta)).scale(level), 1)),
    )
}

/// Weyl numerator times the comb of radius `comb_radius`, truncated to `window`.
pub fn assembly_character_with_comb(
    rs: &RootSystem,
    lambda: &Weight,
    k: i64,
    comb_radius: i64,
    window: i64,
) -> Result<FormalCharacter> {
    check_level(rs, lambda, k)?;
    let comb = lattice_comb(rs, k + rs.h_dual, comb_radius);
    Ok(weyl_numerator(rs, lambda)?.multiply(&comb).truncate(window))
}

/// Character of `L^2_tau(Pi) (x) R_lambda^T`, truncated to `window`. The comb
/// covers every lattice point `l b_flat(eta)` in the window.
pub fn assembly_character(rs: &RootSystem, lambda: &Weight, k: i64, window: i64) -> Result<FormalCharacter> {
    let (lo, hi) = translation_range(rs, &Weight::zero(rs.rank()), k + rs.h_dual, window);
    let radius = lo.iter().chain(&hi).map(|x| x.abs()).max().unwrap_or(0);
    assembly_character_with_comb(rs, lambda, k, radius.max(window), window)
}

/// Whether the assembly character and `fht_image` agree on the box of radius
/// `window - margin`.
pub fn assembly_matches_image(rs: &RootSystem, lambda: &Weight, k: i64, window: i64) -> Result<bool> {
    let inner = window - assembly_margin(rs, lambda)?;
    if inner < 0 {
        return Err(Error::WindowTooSmall(lambda.clone()));
    }
    let a = assembly_character(rs, lambda, k, window)?.truncate(inner);
    let b = fht_image(rs, lambda, k, window)?.truncate(inner);
    Ok(a == b)
}

/// Read the alcove multiplicities as coefficients on the level weights.
pub fn inverse_fht(rs: &RootSystem, ac: &AlternatingCharacter) -> Result<FusionElement> {
    let min = rs.h_dual + 1;
    if ac.level < min {
        return Err(Error::LevelTooSmall { level: ac.level, min });
    }
    let mut out = FusionElement::zero(ac.level - rs.h_dual);
    for (w, &m) in &ac.alcove_mults {
        out.add_term(w.clone(), m);
    }
    Ok(out)
}

/// `inverse_fht(restrict(chi(V_mu|_T) * fht_image(lambda)))`, the fusion
/// product computed on the formal-character side.
pub fn fusion_via_fht(rs: &RootSystem, lambda: &Weight, mu: &Weight, k: i64, window: i64) -> Result<FusionElement> {
    check_level(rs, mu, k)?;
    let v_mu = freudenthal_weights(rs, mu)?.character();
    let reach = v_mu.max_norm_inf();
    let image = fht_image(rs, lambda, k, window + reach)?;
    let product = v_mu.multiply(&image).truncate(window);
    let ac = restrict_to_alcove(rs, &product, k + rs.h_dual, window)?;
    inverse_fht(rs, &ac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::level_weight_list;
    use crate::rootsystem::LieType;
    use crate::verlinde::fusion;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse::<LieType>().unwrap()).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn fc(terms: &[(&[i64], i64)]) -> FormalCharacter {
        FormalCharacter::from_terms(terms.iter().map(|(v, m)| (w(v), *m)))
    }

    #[test]
    fn numerator_examples() {
        let a1 = rs("A1");
        assert_eq!(weyl_numerator(&a1, &w(&[0])).unwrap(), fc(&[(&[0], 1), (&[-2], -1)]));
        assert_eq!(weyl_numerator(&a1, &w(&[1])).unwrap(), fc(&[(&[1], 1), (&[-3], -1)]));
        let a2 = rs("A2");
        let n = weyl_numerator(&a2, &w(&[0, 0])).unwrap();
        assert_eq!(n.len(), 6);
        assert_eq!(n.total(), 0);
        assert!(matches!(weyl_numerator(&a2, &w(&[-1, 0])), Err(Error::NotDominant(_))));
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge_n_minus_char(&rs("A1")), fc(&[(&[0], 1), (&[-2], -1)]));
        let a2 = rs("A2");
        let wedge = wedge_n_minus_char(&a2);
        assert_eq!(wedge, weyl_numerator(&a2, &w(&[0, 0])).unwrap());
        for name in ["A2", "B3", "G2", "C3"] {
            let r = rs(name);
            assert_eq!(wedge_n_minus_char(&r).get(&Weight::zero(r.rank())), 1);
        }
    }

    #[test]
    fn numerator_identity() {
        for name in ["A1", "A2", "B2", "G2", "A3", "B3", "C3"] {
            let r = rs(name);
            let n = r.rank();
            let top = if n == 3 { 2 } else { 3 };
            for c in integer_box(&vec![0; n], &vec![top; n]) {
                assert!(numerator_identity_check(&r, &Weight(c)).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn fht_image_example() {
        let a1 = rs("A1");
        let img = fht_image(&a1, &w(&[0]), 1, 8).unwrap();
        assert_eq!(
            img,
            fc(&[(&[0], 1), (&[-2], -1), (&[4], -1), (&[6], 1), (&[-6], 1), (&[-8], -1)])
        );
        let asm = assembly_character(&a1, &w(&[0]), 1, 8).unwrap();
        assert_eq!(asm, img);
        assert_eq!(
            assembly_character_with_comb(&a1, &w(&[1]), 2, 0, 10).unwrap(),
            weyl_numerator(&a1, &w(&[1])).unwrap()
        );
    }

    #[test]
    fn round_trip_and_assembly() {
        for (name, kmax) in [("A1", 5), ("A2", 3)] {
            let r = rs(name);
            for k in 0..=kmax {
                for lam in level_weight_list(&r, k) {
                    let img = fht_image(&r, &lam, k, 10).unwrap();
                    let ac = restrict_to_alcove(&r, &img, k + r.h_dual, 10).unwrap();
                    assert_eq!(ac, fht_image_alternating(&r, &lam, k).unwrap());
                    if k >= 1 {
                        assert_eq!(inverse_fht(&r, &ac).unwrap(), FusionElement::basis(k, lam.clone()));
                    }
                    assert!(assembly_matches_image(&r, &lam, k, 10).unwrap(), "{name} {k} {lam}");
                }
            }
        }
    }

    #[test]
    fn inverse_errors_and_zero() {
        let a1 = rs("A1");
        assert!(matches!(
            inverse_fht(&a1, &AlternatingCharacter::zero(&a1, 2)),
            Err(Error::LevelTooSmall { level: 2, min: 3 })
        ));
        assert!(inverse_fht(&a1, &AlternatingCharacter::zero(&a1, 5)).unwrap().is_zero());
    }

    #[test]
    fn ring_compatibility() {
        let a1 = rs("A1");
        let expected = fusion(&a1, &w(&[1]), &w(&[1]), 2).unwrap();
        assert_eq!(fusion_via_fht(&a1, &w(&[1]), &w(&[1]), 2, 8).unwrap(), expected);
        for (name, kmax) in [("A1", 4), ("A2", 3)] {
            let r = rs(name);
            for k in 1..=kmax {
                let lw = level_weight_list(&r, k);
                for a in &lw {
                    for b in &lw {
                        assert_eq!(
                            fusion_via_fht(&r, a, b, k, k + 2).unwrap(),
                            fusion(&r, a, b, k).unwrap()
                        );
                    }
                }
            }
        }
    }
}
