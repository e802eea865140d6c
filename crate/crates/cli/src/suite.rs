//! Checks behind `witness` and the regression suite.

use fibergroup::burnside3::{four_subset_exponent_check, B3Structure, ExponentVerdict};
use fibergroup::fpgroup::{
    coset_enumerate, g1_presentation, g2_presentation, group_order, pg33_presentation, CosetGroup,
    EnumerationStatus,
};
use fibergroup::group::Group;
use fibergroup::witnesses::{
    eisenstein_witness_group, evaluate, quaternion_order_sweep, quaternion_translation_witness,
    quaternion_witness_group, verify_relators, RelatorVerdict,
};
use fibergroup::words::{Alphabet, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::burnside_oracle;
use crate::report::{Report, Status};
use crate::CliError;

fn words(src: &[&str]) -> Vec<Word> {
    let l = Alphabet::letters(2);
    src.iter().map(|s| l.parse(s).expect("literal")).collect()
}

pub fn quaternion_checks(report: &mut Report, radius: usize) {
    let (group, gens) = quaternion_witness_group();
    let _ = report.check::<()>("quaternion-relators", "witness", || {
        let v = verify_relators(&group, &gens, &words(&["a^4", "b^4"]));
        Ok((
            Status::from_bool(matches!(v, RelatorVerdict::Pass { .. })),
            json!(v),
        ))
    });
    let _ = report.check::<()>("quaternion-order-four", "witness", || {
        let sweep = quaternion_order_sweep(radius);
        let violations: Vec<String> = sweep.violations.iter().map(|w| w.display(&Alphabet::letters(2))).collect();
        let payload = json!({ "radius": radius, "elements": sweep.elements, "checked": sweep.checked, "violations": violations });
        Ok((Status::from_bool(violations.is_empty() && sweep.checked > 0), payload))
    });
    // Literal requirement: (g1 g2)^4 should be a nonzero translation. Reported as found.
    let _ = report.check::<()>("quaternion-product-fourth-power", "witness", || {
        let x = evaluate(&group, &gens, &words(&["(a b)^4"])[0]);
        let payload = json!({
            "is_identity": x.is_identity(),
            "is_translation": x.is_translation(),
            "translation": x.translation.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        });
        Ok((
            Status::from_bool(x.is_translation() && !x.is_identity()),
            payload,
        ))
    });
    let _ = report.check::<()>("quaternion-translation", "witness", || {
        let found = quaternion_translation_witness(radius);
        let payload = match &found {
            Some((x, w)) => json!({
                "word": w.display(&Alphabet::letters(2)),
                "translation": x.translation.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            }),
            None => json!(null),
        };
        Ok((Status::from_bool(found.is_some()), payload))
    });
}

pub fn eisenstein_checks(report: &mut Report, power_check: usize) {
    let (group, gens) = eisenstein_witness_group();
    let _ = report.check::<()>("eisenstein-relators", "witness", || {
        let v = verify_relators(&group, &gens, &words(&["a^3", "b^3", "(a b)^3"]));
        Ok((
            Status::from_bool(matches!(v, RelatorVerdict::Pass { .. })),
            json!(v),
        ))
    });
    let _ = report.check::<()>("eisenstein-violates-ab2-cubed", "witness", || {
        let x = evaluate(&group, &gens, &words(&["(a b^2)^3"])[0]);
        Ok((
            Status::from_bool(!group.is_identity(&x)),
            json!({ "is_identity": group.is_identity(&x) }),
        ))
    });
    let _ = report.check::<()>("eisenstein-commutator-powers", "witness", || {
        let c = evaluate(&group, &gens, &words(&["[a, b]"])[0]);
        let mut x = c;
        let mut first_trivial = None;
        for k in 1..=power_check {
            if group.is_identity(&x) {
                first_trivial = Some(k);
                break;
            }
            x = group.multiply(&x, &c);
        }
        let payload = json!({
            "powers_checked": power_check,
            "first_trivial_power": first_trivial,
            "commutator_is_translation": c.is_translation(),
            "commutator_translation": c.translation.to_string(),
        });
        Ok((Status::from_bool(first_trivial.is_none()), payload))
    });
}

fn enumeration_check(
    report: &mut Report,
    name: &str,
    run: impl FnOnce() -> EnumerationStatus,
    expected: Option<usize>,
) {
    let _ = report.check::<()>(name, "enumeration", || {
        let status = run();
        let ok = match expected {
            Some(k) => status == EnumerationStatus::Complete { index: k },
            None => !status.is_complete(),
        };
        Ok((
            Status::from_bool(ok),
            json!({ "result": status, "expected_index": expected }),
        ))
    });
}

pub fn regression_suite(report: &mut Report, seed: u64) -> Result<(), CliError> {
    for n in 1..=3 {
        report.check(&format!("burnside-order-{n}"), "burnside", || {
            burnside_oracle(n, 1000, seed)
        })?;
    }
    enumeration_check(
        report,
        "g2-order",
        || group_order(&g2_presentation(), 100_000),
        Some(27),
    );
    enumeration_check(
        report,
        "g1-exceeds-bound",
        || group_order(&g1_presentation(), 100_000),
        None,
    );
    let pg = pg33_presentation();
    let ab = pg.alphabet().parse_list("a, b")?;
    enumeration_check(
        report,
        "kernel-index",
        || coset_enumerate(&pg, &ab, 1_000_000).status(),
        Some(81),
    );
    enumeration_check(
        report,
        "kernel-extension-order",
        || group_order(&pg, 1_000_000),
        Some(2187),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    report.check::<CliError>("exponent-law", "burnside", || {
        let s = B3Structure::new(5)?;
        let failures = (0..1000)
            .filter(|_| {
                let u = s.random_element(&mut rng);
                !s.is_identity(&s.power(&u, 3))
            })
            .count();
        Ok((
            Status::from_bool(failures == 0),
            json!({ "n": 5, "samples": 1000, "failures": failures }),
        ))
    })?;
    report.check::<CliError>("double-commutators-central", "burnside", || {
        let s = B3Structure::new(4)?;
        let mut failures = 0;
        for _ in 0..300 {
            let [u, v, w] = [(); 3].map(|_| s.random_element(&mut rng));
            let c = s.commutator(&s.commutator(&u, &v), &w);
            failures += (0..4)
                .filter(|&i| s.commutator(&c, &s.generator(i)) != s.identity())
                .count();
        }
        Ok((
            Status::from_bool(failures == 0),
            json!({ "n": 4, "samples": 300, "failures": failures }),
        ))
    })?;
    report.check::<CliError>("triple-commutator-sign", "burnside", || {
        let s = B3Structure::new(5)?;
        let mut checked = 0;
        let mut failures = 0;
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let e = |x: usize, y: usize, z: usize| {
                        let g = |t: usize| Word::generator(5, t).unwrap();
                        s.b3_from_word(&g(x).commutator(&g(y)).unwrap().commutator(&g(z)).unwrap())
                            .unwrap()
                    };
                    let base = e(i, j, k);
                    for (p, odd) in [
                        ((j, k, i), false),
                        ((k, i, j), false),
                        ((j, i, k), true),
                        ((i, k, j), true),
                        ((k, j, i), true),
                    ] {
                        let x = e(p.0, p.1, p.2);
                        let expected = if odd { s.inverse(&base) } else { base.clone() };
                        checked += 1;
                        failures += (x != expected) as usize;
                    }
                }
            }
        }
        Ok((
            Status::from_bool(failures == 0),
            json!({ "n": 5, "checked": checked, "failures": failures }),
        ))
    })?;
    report.check::<CliError>("four-subset-burnside", "burnside", || {
        let s = B3Structure::new(5)?;
        let gens: Vec<_> = (0..5).map(|i| s.generator(i)).collect();
        let v = four_subset_exponent_check(&s, &gens, 200, 8, &mut rng);
        Ok((
            Status::from_bool(matches!(v, ExponentVerdict::Pass { .. })),
            json!(v),
        ))
    })?;
    report.check::<CliError>("four-subset-detects-violation", "burnside", || {
        let l = Alphabet::letters(2);
        let p = g1_presentation().with_relators([l.parse("(a b^2)^9")?])?;
        let t = coset_enumerate(&p, &[], 100_000);
        let order = t.index();
        let g = CosetGroup::new(t)?;
        let gens = [g.generator(0), g.generator(1)];
        let v = four_subset_exponent_check(&g, &gens, 200, 6, &mut rng);
        let found = matches!(v, ExponentVerdict::Fail { .. });
        Ok((
            Status::from_bool(found),
            json!({ "quotient_order": order, "verdict": v }),
        ))
    })?;
    quaternion_checks(report, 6);
    eisenstein_checks(report, 1000);
    Ok(())
}
