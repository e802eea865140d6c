use std::io::Write;
use std::path::Path;

use fibergroup::burnside3::{b3_log3_order, b3_order, B3Structure};
use fibergroup::fiberquot::{analyze_quotient, FiberData, Oracle, OrbitBounds, QuotientVerdict};
use fibergroup::fpgroup::{
    bt_presentation, coset_enumerate, CosetGroup, EnumerationStatus, Presentation, PrimitiveFamily,
};
use fibergroup::group::{closure, Group};
use fibergroup::monodromy::{disjoint_product, is_identity_mod, mod_n_action, HomologyClass};
use fibergroup::nilpotent::UCGroup;
use fibergroup::shafarevich::{split_scan, parse_scan_file, ScanVerdict};
use fibergroup::words::{surface_relator, Alphabet, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{Report, Status};
use crate::{CliError, OrbitArgs};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.into(),
        msg: e.to_string(),
    })
}

fn file_error(path: &Path) -> impl Fn(fibergroup::Error) -> CliError + '_ {
    move |e| CliError::File {
        path: path.into(),
        msg: e.to_string(),
    }
}

fn bounds(args: OrbitArgs) -> OrbitBounds {
    OrbitBounds {
        max_relators: args.max_relators,
        max_word_length: args.max_length,
        max_depth: args.max_depth,
    }
}

/// Prints `{status, index, cosets_used, runtime_ms}` and returns the status.
pub fn enumerate(
    path: &Path,
    subgroup: Option<&str>,
    max_cosets: usize,
    timing: bool,
) -> Result<Status, CliError> {
    let p = Presentation::parse(&read(path)?).map_err(file_error(path))?;
    let subgroup = match subgroup {
        Some(s) => p.alphabet().parse_list(s)?,
        None => Vec::new(),
    };
    let table = coset_enumerate(&p, &subgroup, max_cosets);
    let (status, index) = match table.status() {
        EnumerationStatus::Complete { index } => ("complete", Some(index)),
        EnumerationStatus::Overflow { .. } => ("overflow", None),
    };
    let mut out =
        json!({ "status": status, "index": index, "cosets_used": table.stats().total_defined });
    if timing {
        out["runtime_ms"] = json!(table.runtime_ms() as u64);
    }
    let _ = writeln!(
        std::io::stdout(),
        "{}",
        serde_json::to_string_pretty(&out).expect("json")
    );
    Ok(if index.is_some() {
        Status::Pass
    } else {
        Status::Unknown
    })
}

fn family_for(n: usize) -> PrimitiveFamily {
    match n {
        1 => PrimitiveFamily::Basic,
        2 => PrimitiveFamily::Pairs,
        _ => PrimitiveFamily::Triples,
    }
}

/// Enumerates the exponent-3 presentation of rank `n` and compares its
/// regular representation with collection on `samples` random words.
pub fn burnside_oracle(n: usize, samples: usize, seed: u64) -> Result<(Status, Value), CliError> {
    if !(1..=3).contains(&n) {
        return Err(CliError::Usage("--check-oracle needs n <= 3".into()));
    }
    let s = B3Structure::new(n)?;
    let table = coset_enumerate(&bt_presentation(n, 3, family_for(n))?, &[], 1_000_000);
    let index = table.index();
    let expected = b3_order(n);
    let mut mismatches = 0;
    if index == Some(expected as usize) {
        let regular = CosetGroup::new(table)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let u = Word::random(n, 20, &mut rng);
            let v = Word::random(n, 20, &mut rng);
            let same_collected = s.b3_from_word(&u)? == s.b3_from_word(&v)?;
            let same_regular = regular.element(&u)? == regular.element(&v)?;
            let product_ok = s.b3_from_word(&u.mul(&v))?
                == s.multiply(&s.b3_from_word(&u)?, &s.b3_from_word(&v)?);
            if same_collected != same_regular || !product_ok {
                mismatches += 1;
            }
        }
    }
    let ok = index == Some(expected as usize) && mismatches == 0;
    Ok((
        Status::from_bool(ok),
        json!({ "n": n, "enumerated": index, "expected": expected, "samples": samples, "mismatches": mismatches }),
    ))
}

pub fn burnside(
    report: &mut Report,
    n: usize,
    order: bool,
    eval: Option<&str>,
    check_oracle: bool,
    samples: usize,
    seed: u64,
) -> Result<(), CliError> {
    let s = B3Structure::new(n)?;
    if order || (eval.is_none() && !check_oracle) {
        report.check::<CliError>("order", "burnside", || {
            let log3 = b3_log3_order(n);
            let order = (log3 <= 80).then(|| b3_order(n));
            Ok((
                Status::Pass,
                json!({ "n": n, "order": order, "log3_order": log3 }),
            ))
        })?;
    }
    if let Some(src) = eval {
        report.check::<CliError>("eval", "burnside", || {
            let w = s.alphabet().parse(src)?;
            let e = s.b3_from_word(&w)?;
            let nf = s.normal_form_word(&e).display(&s.alphabet());
            Ok((Status::Pass, json!({ "word": src, "coordinates": s.format(&e), "element": e, "normal_form": nf })))
        })?;
    }
    if check_oracle {
        report.check("oracle", "burnside", || burnside_oracle(n, samples, seed))?;
    }
    Ok(())
}

pub fn nilpotent(
    report: &mut Report,
    g: usize,
    modulus: u64,
    image: Option<&str>,
    brute: bool,
) -> Result<(), CliError> {
    let group = UCGroup::new(g, modulus)?;
    let alphabet = Alphabet::surface(g);
    report.check::<CliError>("order", "nilpotent", || {
        Ok((
            Status::Pass,
            json!({ "g": g, "N": modulus, "order": group.order() }),
        ))
    })?;
    report.check::<CliError>("surface-relator", "nilpotent", || {
        let e = group.uc_from_word(&surface_relator(g)?)?;
        Ok((
            Status::from_bool(group.is_identity(&e)),
            json!({ "image": e }),
        ))
    })?;
    if let Some(src) = image {
        report.check::<CliError>("image", "nilpotent", || {
            let e = group.uc_from_word(&alphabet.parse(src)?)?;
            let order = group.uc_element_order(&e);
            Ok((
                Status::Pass,
                json!({ "word": src, "v": e.v, "w": e.w, "order": order }),
            ))
        })?;
    }
    if brute {
        report.check::<CliError>("closure", "nilpotent", || {
            let gens: Vec<_> = (0..2 * g).map(|i| group.generator(i)).collect();
            let limit = group.order().min(1 << 22) as usize;
            let size = closure(&group, &gens, limit).map(|s| s.len());
            let status = match size {
                Some(k) => Status::from_bool(k as u128 == group.order()),
                None => Status::Unknown,
            };
            Ok((
                status,
                json!({ "closure_size": size, "order": group.order() }),
            ))
        })?;
    }
    Ok(())
}

pub fn monodromy(
    report: &mut Report,
    g: usize,
    cycles: &str,
    unipotent: bool,
    modulus: Option<u64>,
) -> Result<(), CliError> {
    let alphabet = Alphabet::surface(g);
    let classes = cycles
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| HomologyClass::of_word(&alphabet.parse(s.trim())?))
        .collect::<fibergroup::Result<Vec<_>>>()?;
    let t = disjoint_product(&classes)?;
    report.check::<CliError>("symplectic", "monodromy", || {
        Ok((
            Status::from_bool(t.is_symplectic()),
            json!({ "matrix": t.m, "rank_one_minus": t.one_minus().rank() }),
        ))
    })?;
    if unipotent {
        report.check::<CliError>("unipotent", "monodromy", || {
            Ok((
                Status::from_bool(t.is_unipotent_of_step_two()),
                json!({ "one_minus_squared_zero": t.is_unipotent_of_step_two() }),
            ))
        })?;
    }
    if let Some(n) = modulus {
        report.check::<CliError>("power-mod-N", "monodromy", || {
            let rows = mod_n_action(&t.power(n as u32), n)?;
            Ok((
                Status::from_bool(is_identity_mod(&rows)),
                json!({ "N": n, "T_pow_N_mod_N": rows }),
            ))
        })?;
    }
    Ok(())
}

pub fn fiberquot(
    report: &mut Report,
    path: &Path,
    oracles: &str,
    args: OrbitArgs,
) -> Result<(), CliError> {
    let data = FiberData::parse(&read(path)?).map_err(file_error(path))?;
    let oracles = oracles
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<fibergroup::Result<Vec<Oracle>>>()?;
    report.check::<CliError>("quotient", "fiberquot", || {
        let analysis = analyze_quotient(&data, bounds(args), &oracles, args.max_cosets)?;
        let status = match analysis.verdict {
            QuotientVerdict::Unknown { .. } => Status::Unknown,
            _ if analysis.quotients.iter().any(|q| !q.relators_trivial) => Status::Fail,
            _ => Status::Pass,
        };
        Ok((status, serde_json::to_value(&analysis).expect("json")))
    })?;
    Ok(())
}

fn parse_split(src: &str) -> Result<(Vec<usize>, Vec<usize>), CliError> {
    let bad = || CliError::Usage(format!("bad split {src:?}, expected e.g. \"0|1\""));
    let (a, b) = src.split_once('|').ok_or_else(bad)?;
    let list = |s: &str| {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| bad()))
            .collect::<Result<Vec<usize>, _>>()
    };
    Ok((list(a)?, list(b)?))
}

pub fn scan(
    report: &mut Report,
    path: &Path,
    split: Option<&str>,
    args: OrbitArgs,
) -> Result<(), CliError> {
    let (data, setup) = parse_scan_file(&read(path)?).map_err(file_error(path))?;
    let (k1, k2) = match split {
        Some(s) => parse_split(s)?,
        None => setup
            .split
            .clone()
            .ok_or_else(|| CliError::Usage("no --split and no `split:` in the file".into()))?,
    };
    let mut result = None;
    report.check::<CliError>("orbit", "scan", || {
        let scan = split_scan(&data, &setup, &k1, &k2, bounds(args), args.max_cosets)?;
        let payload = json!({ "orbit_size": scan.orbit_size, "orbit_exhausted": scan.orbit_exhausted, "split": [k1, k2] });
        result = Some(scan);
        Ok((Status::Pass, payload))
    })?;
    let scan = result.expect("scan ran");
    for (i, part) in scan.parts.iter().enumerate() {
        report.check::<CliError>(&format!("part-{i}-finite"), "scan", || {
            let status = if part.finite {
                Status::Pass
            } else {
                Status::Unknown
            };
            Ok((status, serde_json::to_value(part).expect("json")))
        })?;
    }
    report.check::<CliError>("surjection", "scan", || {
        let status = match &scan.surjection {
            Some(s) => Status::from_bool(s.ok()),
            None => Status::Unknown,
        };
        Ok((
            status,
            serde_json::to_value(&scan.surjection).expect("json"),
        ))
    })?;
    report.check::<CliError>("infinite-witness", "scan", || {
        let status = if scan.witness.is_some() {
            Status::Pass
        } else {
            Status::Unknown
        };
        Ok((status, serde_json::to_value(&scan.witness).expect("json")))
    })?;
    report.check::<CliError>("verdict", "scan", || {
        let status = match scan.verdict {
            ScanVerdict::Inconclusive { .. } => Status::Unknown,
            _ => Status::Pass,
        };
        Ok((
            status,
            json!({ "verdict": scan.verdict, "enumeration": scan.enumeration }),
        ))
    })?;
    Ok(())
}
