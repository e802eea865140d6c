//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every criterion is attempted and
//! reported. The process fails if the set of failing criteria differs from
//! `EXPECTED_FAILURES`.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use fibergroup::burnside3::b3_order;
use fibergroup::fiberquot::{base_change_rescale, orbit_closure, FiberData, OrbitBounds};
use fibergroup::fpgroup::{
    bt_presentation, coset_enumerate, group_order, pg33_presentation, EnumerationStatus,
    PrimitiveFamily,
};
use fibergroup::group::{closure, Group};
use fibergroup::monodromy::{
    disjoint_product, is_identity_mod, mod_n_action, random_disjoint_classes, standard_twists,
    transvection, HomologyClass,
};
use fibergroup::nilpotent::{TreeComponent, TreeExtension, UCGroup};
use fibergroup::shafarevich::{free_product_infinite_witness, parse_scan_file};
use fibergroup::words::{surface_relator, Alphabet, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// The literal `(g1 g2)^4` requirement cannot hold: that element is the identity.
const EXPECTED_FAILURES: &[usize] = &[3];

type Outcome = Result<(), String>;

struct Criterion {
    name: &'static str,
    run: fn() -> Outcome,
    budget: Duration,
}

const fn criterion(name: &'static str, run: fn() -> Outcome, secs: u64) -> Criterion {
    Criterion {
        name,
        run,
        budget: Duration::from_secs(secs),
    }
}

fn ensure(ok: bool, msg: impl Into<String>) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs the CLI and returns (exit code, stdout).
fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fibergroup"))
        .args(args)
        .output()
        .expect("spawn fibergroup");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let (_, out) = cli(args);
    serde_json::from_str(&out).map_err(|e| format!("bad JSON from {args:?}: {e}"))
}

/// Names of checks whose status is not "pass".
fn failing_checks(report: &Value) -> Vec<String> {
    report["checks"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|c| c["status"] != "pass")
        .map(|c| {
            format!(
                "{} ({})",
                c["name"].as_str().unwrap_or("?"),
                c["status"].as_str().unwrap_or("?")
            )
        })
        .collect()
}

fn burnside_orders() -> Outcome {
    for (n, expected) in [(1usize, 3u64), (2, 27), (3, 2187)] {
        let n_arg = n.to_string();
        let r = cli_json(&["burnside", "--n", &n_arg, "--order", "--no-timing"])?;
        let order = r["checks"][0]["payload"]["order"].as_u64();
        ensure(
            order == Some(expected),
            format!("burnside --n {n} --order gave {order:?}"),
        )?;
        ensure(b3_order(n) == expected as u128, "b3_order")?;
    }
    for (n, family, expected) in [
        (2, PrimitiveFamily::Pairs, 27),
        (3, PrimitiveFamily::Triples, 2187),
    ] {
        let status = group_order(
            &bt_presentation(n, 3, family).map_err(|e| e.to_string())?,
            1_000_000,
        );
        ensure(
            status == EnumerationStatus::Complete { index: expected },
            format!("enumeration for n = {n}: {status:?}"),
        )?;
    }
    Ok(())
}

fn kernel_order() -> Outcome {
    let p = pg33_presentation();
    let ab = p.alphabet().parse_list("a, b").map_err(|e| e.to_string())?;
    let status = coset_enumerate(&p, &ab, 1_000_000).status();
    ensure(
        status == EnumerationStatus::Complete { index: 81 },
        format!("index over <a, b>: {status:?}"),
    )
}

fn witnesses() -> Outcome {
    let e = cli_json(&[
        "witness",
        "--eisenstein",
        "--power-check",
        "1000",
        "--no-timing",
    ])?;
    let q = cli_json(&["witness", "--quaternion", "--radius", "6", "--no-timing"])?;
    let failed: Vec<String> = failing_checks(&e)
        .into_iter()
        .chain(failing_checks(&q))
        .collect();
    ensure(
        failed.is_empty(),
        format!("failing checks: {}", failed.join(", ")),
    )
}

fn monodromy_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..1000 {
        let g = 1 + trial % 4;
        let t =
            disjoint_product(&random_disjoint_classes(g, &mut rng)).map_err(|e| e.to_string())?;
        ensure(t.is_symplectic(), format!("trial {trial}: not symplectic"))?;
        ensure(
            t.is_unipotent_of_step_two(),
            format!("trial {trial}: (1-T)^2 != 0"),
        )?;
        for n in [2u32, 3, 4, 5, 7] {
            let rows = mod_n_action(&t.power(n), n as u64).map_err(|e| e.to_string())?;
            ensure(
                is_identity_mod(&rows),
                format!("trial {trial}: T^{n} != 1 mod {n}"),
            )?;
        }
    }
    Ok(())
}

fn twist_square() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in 1..=3 {
        for t in standard_twists(g) {
            let d = transvection(&HomologyClass::standard(g, &t.curve).map_err(|e| e.to_string())?);
            for _ in 0..100 {
                let w = Word::random(2 * g, 16, &mut rng);
                let lhs = HomologyClass::of_word(&t.apply(&w).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let rhs = d.apply(&HomologyClass::of_word(&w).map_err(|e| e.to_string())?);
                ensure(
                    lhs == rhs,
                    format!("twist({}) at genus {g} fails on {w:?}", t.curve),
                )?;
            }
        }
    }
    Ok(())
}

fn uc_orders() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (genus, expected) in [(1usize, 9usize), (2, 19683)] {
        let g = UCGroup::new(genus, 3).map_err(|e| e.to_string())?;
        let gens: Vec<_> = (0..2 * genus).map(|i| g.generator(i)).collect();
        let size = closure(&g, &gens, 1 << 20).map(|s| s.len());
        ensure(
            size == Some(expected),
            format!("closure at genus {genus}: {size:?}"),
        )?;
        let rel = g
            .uc_from_word(&surface_relator(genus).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(g.is_identity(&rel), "surface relator is not trivial")?;
        for _ in 0..1000 {
            let w = Word::random(2 * genus, 20, &mut rng);
            if w.abelianize_vector().iter().all(|c| c % 3 == 0) {
                continue;
            }
            let x = g.uc_from_word(&w).map_err(|e| e.to_string())?;
            ensure(
                g.element_order(&x, 10) == Some(3),
                format!("{w:?} does not have order 3"),
            )?;
        }
    }
    Ok(())
}

fn tree_extension() -> Outcome {
    let comps = vec![
        TreeComponent {
            genus: 1,
            nz_cycles: vec![vec![1, 0]],
        },
        TreeComponent {
            genus: 1,
            nz_cycles: vec![vec![0, 1]],
        },
    ];
    let t = TreeExtension::build(comps, vec![(0, 1)]).map_err(|e| e.to_string())?;
    let gens: Vec<_> = (0..4).map(|i| t.generator(i)).collect();
    let size = closure(&t, &gens, 1000).map(|s| s.len());
    ensure(size == Some(32), format!("order {size:?}"))?;
    let l = Alphabet::surface(2);
    let z: Vec<_> = ["[a1, b1]", "[a2, b2]"]
        .iter()
        .map(|s| t.word_image(&l.parse(s).unwrap()).unwrap())
        .collect();
    ensure(
        z[0] == z[1] && z[0] == t.z_cycle_image(),
        "Z-cycle images differ",
    )?;
    ensure(
        t.element_order(&z[0], 10) == Some(2),
        "Z-cycle image does not have order 2",
    )
}

fn rescaling() -> Outcome {
    let data =
        FiberData::parse(&std::fs::read_to_string(fixture("trivial_monodromy.fiber")).unwrap())
            .map_err(|e| e.to_string())?;
    let m1 = BTreeMap::from([(0, 2), (1, 5)]);
    let m2 = BTreeMap::from([(1, 3), (7, 4)]);
    let once = base_change_rescale(&data, &m1).map_err(|e| e.to_string())?;
    for (a, b) in data.cycles.iter().zip(&once.cycles) {
        ensure(
            b.exponent == a.exponent * m1.get(&a.fiber).copied().unwrap_or(1),
            "rescale is not per-fiber",
        )?;
    }
    let twice = base_change_rescale(&once, &m2).map_err(|e| e.to_string())?;
    let product = BTreeMap::from([(0, 2), (1, 15), (7, 4)]);
    ensure(
        twice == base_change_rescale(&data, &product).map_err(|e| e.to_string())?,
        "rescale does not compose",
    )?;
    let orbit = orbit_closure(&data, OrbitBounds::default());
    let input: Vec<_> = data
        .cycles
        .iter()
        .map(|c| c.word.pow(c.exponent as i64).cyclic_normal_form(true))
        .collect();
    ensure(
        orbit.exhausted && orbit.relators == input,
        "trivial monodromy changed the relators",
    )
}

fn scan() -> Outcome {
    let path = fixture("two_torus_chain.scan");
    let r = cli_json(&["scan", &path, "--no-timing"])?;
    let failed = failing_checks(&r);
    ensure(
        failed.is_empty(),
        format!("failing checks: {}", failed.join(", ")),
    )?;
    let check = |name: &str| {
        r["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .cloned()
            .unwrap_or_default()
    };
    for part in ["part-0-finite", "part-1-finite"] {
        let bound = check(part)["payload"]["verdicts"][0]["order_bound"].as_u64();
        ensure(bound == Some(27), format!("{part}: bound {bound:?}"))?;
    }
    let verdict = &check("verdict")["payload"]["verdict"]["verdict"];
    ensure(
        verdict == "candidate_counterexample",
        format!("verdict {verdict}"),
    )?;
    let (_, setup) =
        parse_scan_file(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
    let names: Vec<String> = setup
        .free_product
        .factors
        .iter()
        .map(|f| f.name())
        .collect();
    ensure(names == ["B(2,3)", "B(2,3)"], format!("factors {names:?}"))?;
    let w = free_product_infinite_witness(&setup.free_product, 1000).ok_or("no witness")?;
    let fp = &setup.free_product;
    for k in [1, 10, 100, 1000] {
        ensure(
            fp.power(&w.element, k).len() == 2 * k as usize,
            format!("power {k} is not of length {}", 2 * k),
        )?;
    }
    Ok(())
}

fn determinism() -> Outcome {
    let args = ["verify-appendix-b", "--seed", "7", "--no-timing"];
    let (_, a) = cli(&args);
    let (_, b) = cli(&args);
    ensure(!a.is_empty(), "no output")?;
    ensure(a == b, "outputs differ")
}

fn main() {
    let criteria = [
        criterion("Burnside orders 3, 27, 2187", burnside_orders, 5),
        criterion("kernel index 81", kernel_order, 10),
        criterion("infiniteness witnesses", witnesses, 5),
        criterion("monodromy laws", monodromy_laws, 10),
        criterion("twist/abelianization square", twist_square, 5),
        criterion("UC_g^3 orders 9 and 19683", uc_orders, 30),
        criterion("N = 2 tree extension of order 32", tree_extension, 1),
        criterion("base-change rescaling", rescaling, 1),
        criterion("two-torus chain scan", scan, 30),
        criterion("determinism of the regression suite", determinism, 60),
    ];
    let mut failed = Vec::new();
    for (i, Criterion { name, run, budget }) in criteria.iter().enumerate() {
        let k = i + 1;
        let start = Instant::now();
        let outcome = run().and_then(|()| {
            let took = start.elapsed();
            ensure(took <= *budget, format!("took {took:?}, budget {budget:?}"))
        });
        match outcome {
            Ok(()) => println!("criterion {k:>2}: PASS  {name}"),
            Err(msg) => {
                let note = if EXPECTED_FAILURES.contains(&k) {
                    " [expected]"
                } else {
                    ""
                };
                println!("criterion {k:>2}: FAIL  {name}: {msg}{note}");
                failed.push(k);
            }
        }
    }
    if failed != EXPECTED_FAILURES {
        eprintln!("failing criteria {failed:?}, expected {EXPECTED_FAILURES:?}");
        std::process::exit(1);
    }
}
