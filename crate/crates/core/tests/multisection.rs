mod common;

use common::{lv, sampled_crossings, smooth_fans};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use troplag_core::multisection::{
    ext_prediction, genericity_count, realizability, topology_prediction, validate, Case, Realizability,
};
use troplag_core::{CoveringKind, ToricDivisor, TropicalMultiSection};

fn random_instance(rng: &mut ChaCha8Rng) -> (usize, CoveringKind, Vec<i64>) {
    let fans = smooth_fans();
    let f = rng.gen_range(0..fans.len());
    let n = fans[f].n_rays();
    let kind = if rng.gen_bool(0.5) { CoveringKind::Maximal } else { CoveringKind::Split };
    let values = (0..2 * n).map(|_| rng.gen_range(-3..=3)).collect();
    (f, kind, values)
}

#[test]
fn exact_count_matches_sampled_count() {
    let fans = smooth_fans();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..600 {
        let (f, kind, values) = random_instance(&mut rng);
        let Ok(ts) = TropicalMultiSection::from_ray_values(&fans[f], 2, kind, &values) else { continue };
        let rep = genericity_count(&ts);
        let Some(n) = rep.n else { continue };
        let sampled = sampled_crossings(&fans[f], kind == CoveringKind::Maximal, &values, 4000);
        assert_eq!(n as usize, sampled, "{kind:?} {values:?} on fan {f}");
        checked += 1;
    }
    assert!(checked > 200, "only {checked} generic instances");
}

#[test]
fn parity_of_generic_counts() {
    let fans = smooth_fans();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..400 {
        let (f, kind, values) = random_instance(&mut rng);
        let Ok(ts) = TropicalMultiSection::from_ray_values(&fans[f], 2, kind, &values) else { continue };
        if let Some(n) = genericity_count(&ts).n {
            let odd = n % 2 == 1;
            assert_eq!(odd, kind == CoveringKind::Maximal, "{kind:?} N = {n}");
        }
    }
}

#[test]
fn realizability_gate_for_rank_two() {
    let fans = smooth_fans();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = 0;
    while seen < 200 {
        let (f, kind, values) = random_instance(&mut rng);
        let Ok(ts) = TropicalMultiSection::from_ray_values(&fans[f], 2, kind, &values) else { continue };
        if !validate(&ts).valid {
            continue;
        }
        seen += 1;
        let v = realizability(&ts);
        match genericity_count(&ts).n {
            Some(n) if n >= 3 => {
                assert_eq!(v.status, Realizability::Realizable);
                assert_eq!(v.d, Some(n - 2));
            }
            Some(n) if kind == CoveringKind::Maximal => {
                assert_eq!(v.status, Realizability::NotRealizable, "N = {n}");
                assert_eq!(v.d, None);
            }
            Some(_) => assert_eq!(v.d, None),
            None => assert_eq!(v.status, Realizability::NotRealizable),
        }
    }
}

#[test]
fn validation_catches_discontinuity() {
    let fan = common::fan_of(&[(1, 0), (0, 1), (-1, -1)]);
    let mut ts = TropicalMultiSection::from_ray_values(&fan, 2, CoveringKind::Maximal, &[-1, 0, -1, 0, -1, 0]).unwrap();
    assert!(validate(&ts).valid);
    ts.lifts[0].slope = ts.lifts[0].slope + lv(1, 0);
    assert!(!validate(&ts).valid);
}

#[test]
fn topology_and_ext_tables() {
    for n in 3..=7u32 {
        let case = if n % 2 == 1 { Case::O } else { Case::E };
        let t = topology_prediction(n, case).unwrap();
        assert_eq!((t.b0, t.b1, t.b2), (1, n - 3, 0));
        assert_eq!(ext_prediction(n).unwrap(), (1, n - 3, 0));
        // Euler characteristic of a genus g surface with p punctures
        assert_eq!(t.b0 as i64 - t.b1 as i64 + t.b2 as i64, 2 - 2 * t.genus as i64 - t.punctures as i64);
        let wrong = if case == Case::O { Case::E } else { Case::O };
        assert!(topology_prediction(n, wrong).is_err());
    }
}

#[test]
fn rank_three_instance() {
    let fan = common::fan_of(&[(1, 0), (0, 1), (-1, 0), (0, -1)]);
    let ts = TropicalMultiSection::from_ray_values(&fan, 3, CoveringKind::Maximal, &[0, -1, 1, -1, 1, 0, -1, 1, -1, 1, 0, 0])
        .unwrap();
    assert!(validate(&ts).valid);
    let rep = genericity_count(&ts);
    assert_eq!(rep.n, Some(3));
    assert_eq!(rep.total, 10);
    let v = realizability(&ts);
    assert_eq!(v.status, Realizability::Realizable);
    assert_eq!(v.d, Some(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn twisting_preserves_genericity(
        f in 0usize..7,
        split in any::<bool>(),
        values in proptest::collection::vec(-3i64..=3, 12),
        k in proptest::collection::vec(-3i64..=3, 6),
    ) {
        let fan = &smooth_fans()[f];
        let n = fan.n_rays();
        let kind = if split { CoveringKind::Split } else { CoveringKind::Maximal };
        let Ok(ts) = TropicalMultiSection::from_ray_values(fan, 2, kind, &values[..2 * n]) else { return Ok(()) };
        let d = ToricDivisor::new(k[..n].to_vec());
        let tw = ts.twisted(&d).unwrap();
        let (a, b) = (genericity_count(&ts), genericity_count(&tw));
        prop_assert_eq!(a.n, b.n);
        prop_assert_eq!(a.failure_reason, b.failure_reason);
        let dirs = |r: &troplag_core::GenericityReport| {
            let mut v: Vec<_> = r.crossings.iter().map(|c| c.direction).collect();
            v.sort_by_key(|d| (d.x, d.y));
            v
        };
        prop_assert_eq!(dirs(&a), dirs(&b));
        prop_assert_eq!(genericity_count(&ts.negated()).n, a.n);
        prop_assert_eq!(validate(&tw).valid, validate(&ts).valid);
    }
}
