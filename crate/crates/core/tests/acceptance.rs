//! Acceptance suite: every release gate as one test with a pass/fail line.
//!
//! Run with `cargo test -p indexcode --test acceptance -- --nocapture` to see
//! the per-criterion lines and timings.

use indexcode::golden::{check_all, corpus, errata};
use indexcode::{
    build_schedule, capacity, construct, decodable, decode_with_schedule, encode, find_sum,
    minrank_oracle, one_sided_problem, side_info_for, substitute, BitVec, Component, LinearCode,
    Rational, SubstitutionMap, SymmetricParams,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};

fn report(number: u8, name: &str, start: Instant, budget: Duration, failures: &[String]) {
    let elapsed = start.elapsed();
    let verdict = if failures.is_empty() && elapsed <= budget {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "acceptance criterion {number} ({name}): {verdict} in {:.2?} (budget {:.0?})",
        elapsed, budget
    );
    assert!(
        failures.is_empty(),
        "criterion {number} failures:\n{}",
        failures.join("\n")
    );
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its runtime budget: {elapsed:.2?} > {budget:.0?}"
    );
}

/// Criterion 1: every reference listing is reproduced row for row after
/// index normalization, with residual diffs covered by the errata file and
/// decodability preserved.
#[test]
fn criterion_1_golden_reproduction() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let checks = check_all();
    if checks.len() != corpus().len() {
        failures.push("corpus size mismatch".into());
    }
    let mut errata_used = 0;
    for check in &checks {
        if !check.passed {
            failures.push(format!("{}: {:?}", check.id, check.notes));
        }
        errata_used += check.errata_rows.len();
    }
    if errata_used != errata().len() {
        failures.push(format!(
            "{} errata on file but {} applied",
            errata().len(),
            errata_used
        ));
    }
    report(
        1,
        "golden reproduction",
        start,
        Duration::from_secs(1),
        &failures,
    );
}

/// Criterion 2: the capacity table reproduces every printed value exactly,
/// and the one printed value that contradicts the formula is flagged.
#[test]
fn criterion_2_capacity_table() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let table: [(usize, usize, usize, i64, i64); 8] = [
        (20, 1, 5, 2, 16),
        (20, 2, 6, 3, 16),
        (20, 1, 16, 2, 5),
        (20, 1, 9, 2, 12),
        (21, 2, 6, 3, 17),
        (18, 1, 6, 2, 13),
        (19, 2, 7, 3, 14),
        (28, 1, 19, 2, 10),
    ];
    for (k, u, d, num, den) in table {
        match capacity(k, u, d) {
            Ok(c) if c == Rational::new(num, den) => {}
            Ok(c) => failures.push(format!("capacity({k},{u},{d}) = {c}, expected {num}/{den}")),
            Err(e) => failures.push(format!("capacity({k},{u},{d}) failed: {e}")),
        }
    }
    // The discrepant printed value: 3/16 against the formula's 4/16.
    match capacity(20, 3, 7) {
        Ok(c) if c == Rational::new(4, 16) => {}
        other => failures.push(format!("capacity(20,3,7) = {other:?}, expected 4/16")),
    }
    let flagged = corpus()
        .iter()
        .find(|e| e.id == "l01-x4")
        .map(indexcode::golden::check_entry)
        .is_some_and(|check| {
            check
                .notes
                .iter()
                .any(|n| n.contains("printed capacity 3/16 differs from computed 1/4"))
        });
    if !flagged {
        failures.push("the 3/16-vs-4/16 discrepancy is not flagged".into());
    }
    report(
        2,
        "capacity table",
        start,
        Duration::from_secs(1),
        &failures,
    );
}

/// Criterion 3: every constructible instance with K <= 40 yields a code of
/// length exactly K - delta that decodes its one-sided problem and meets
/// capacity.
#[test]
fn criterion_3_construction_sweep() {
    let start = Instant::now();
    let instances = indexcode::construct::all_instances(40);
    let failures: Vec<String> = instances
        .par_iter()
        .flat_map(|params| {
            let mut errs = Vec::new();
            match construct(params) {
                Ok(code) => {
                    if code.len() != params.k - params.delta {
                        errs.push(format!(
                            "{params:?}: length {} instead of {}",
                            code.len(),
                            params.k - params.delta
                        ));
                    }
                    match SymmetricParams::new(params.k, 0, params.delta)
                        .and_then(|p| indexcode::check_optimality(p, &code, "sweep"))
                    {
                        Ok(rep) => {
                            if !rep.all_decodable {
                                errs.push(format!("{params:?}: not decodable"));
                            }
                            if !rep.optimal {
                                errs.push(format!("{params:?}: not optimal ({})", rep.rate));
                            }
                        }
                        Err(e) => errs.push(format!("{params:?}: verification failed: {e}")),
                    }
                }
                Err(e) => errs.push(format!("{params:?}: construction failed: {e}")),
            }
            errs
        })
        .collect();
    println!(
        "criterion 3 swept {} instances across classes 1-3,5-10",
        instances.len()
    );
    report(
        3,
        "construction sweep",
        start,
        Duration::from_secs(30),
        &failures,
    );
}

fn random_message(rng: &mut impl Rng, len: usize) -> BitVec {
    let mut m = BitVec::zeros(len);
    for i in 0..len {
        m.set(i, rng.random());
    }
    m
}

/// Criterion 4: every extension of every swept instance keeps the code
/// length, meets the two-sided capacity, builds a schedule, and survives 100
/// random encode/decode round trips on all receivers.
#[test]
fn criterion_4_vector_extension_sweep() {
    let start = Instant::now();
    let instances = indexcode::construct::all_instances(40);
    let cases: Vec<(indexcode::ConstructionParams, usize)> = instances
        .iter()
        .flat_map(|&params| {
            (0..=3usize)
                .filter(move |&u| u + params.delta + u < params.k)
                .map(move |u| (params, u))
        })
        .collect();
    let failures: Vec<String> = cases
        .par_iter()
        .enumerate()
        .flat_map(|(case_idx, &(params, u))| {
            let mut errs = Vec::new();
            let tag = format!("{params:?} u={u}");
            let scalar = match construct(&params) {
                Ok(c) => c,
                Err(e) => return vec![format!("{tag}: construction failed: {e}")],
            };
            let code = match substitute(&scalar, u) {
                Ok(c) => c,
                Err(e) => return vec![format!("{tag}: substitution failed: {e}")],
            };
            if code.len() != scalar.len() {
                errs.push(format!("{tag}: substitution changed the length"));
            }
            let rate = Rational::new(code.block_size() as i64, code.len() as i64);
            // On the boundary U+(delta+U) = K-1 every receiver knows all
            // other blocks, the capacity jumps to 1, and the extension is
            // decodable but no longer rate-optimal; equality holds on the
            // whole U+(delta+U) <= K-2 regime.
            let boundary = u + params.delta + u == params.k - 1;
            match capacity(params.k, u, params.delta + u) {
                Ok(cap) if boundary => {
                    if cap != Rational::one() || rate > cap {
                        errs.push(format!(
                            "{tag}: boundary case has rate {rate}, capacity {cap}"
                        ));
                    }
                }
                Ok(cap) if cap == rate => {}
                Ok(cap) => errs.push(format!("{tag}: rate {rate} != capacity {cap}")),
                Err(e) => errs.push(format!("{tag}: capacity failed: {e}")),
            }
            let seed_problem = match one_sided_problem(params.k, params.delta) {
                Ok(p) => p,
                Err(e) => return vec![format!("{tag}: seed problem failed: {e}")],
            };
            let schedule = match build_schedule(&scalar, u, &seed_problem) {
                Ok(s) => s,
                Err(e) => return vec![format!("{tag}: schedule failed: {e}")],
            };
            let extended = match schedule.extended_problem() {
                Ok(p) => p,
                Err(e) => return vec![format!("{tag}: extended problem failed: {e}")],
            };
            let t = u + 1;
            let len = params.k * t;
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97 + case_idx as u64);
            for trial in 0..100 {
                let message = random_message(&mut rng, len);
                let word = match encode(&code, &message) {
                    Ok(w) => w,
                    Err(e) => {
                        errs.push(format!("{tag}: encode failed: {e}"));
                        break;
                    }
                };
                for k in 1..=params.k {
                    let side = side_info_for(&extended, t, &message, k);
                    match decode_with_schedule(&schedule, &word, &side, k) {
                        Ok(block) => {
                            for (i, &bit) in block.iter().enumerate() {
                                if bit != message.get((k - 1) * t + i) {
                                    errs.push(format!(
                                        "{tag}: trial {trial} receiver {k} component {} wrong",
                                        i + 1
                                    ));
                                }
                            }
                        }
                        Err(e) => {
                            errs.push(format!("{tag}: trial {trial} receiver {k} failed: {e}"))
                        }
                    }
                }
                if !errs.is_empty() {
                    break;
                }
            }
            errs
        })
        .collect();
    println!("criterion 4 swept {} (instance, U) cases", cases.len());
    report(
        4,
        "vector extension sweep",
        start,
        Duration::from_secs(300),
        &failures,
    );
}

/// Criterion 5: the exhaustive oracle certifies the constructed length
/// K - delta as the true minimum for every one-sided instance with K <= 6.
#[test]
fn criterion_5_minrank_certification() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut certified = 0;
    for k in 3..=6usize {
        for delta in 1..k - 1 {
            let problem = one_sided_problem(k, delta).unwrap();
            match minrank_oracle(&problem, k - delta) {
                Ok(Some(min)) if min == k - delta => certified += 1,
                Ok(found) => failures.push(format!(
                    "one_sided({k},{delta}): oracle found {found:?}, expected {}",
                    k - delta
                )),
                Err(e) => failures.push(format!("one_sided({k},{delta}): {e}")),
            }
        }
    }
    println!("criterion 5 certified {certified} instances by exhaustive search");
    report(
        5,
        "minrank certification",
        start,
        Duration::from_secs(60),
        &failures,
    );
}

/// Criterion 6: negative controls. Removing any single symbol from any
/// golden code breaks some receiver, and every scalar golden's decoding sums
/// stay inside the one-sided window.
#[test]
fn criterion_6_negative_controls() {
    let start = Instant::now();
    let failures: Vec<String> = corpus()
        .par_iter()
        .flat_map(|entry| {
            let mut errs = Vec::new();
            let code = match entry.generated_code() {
                Ok(c) => c,
                Err(e) => return vec![format!("{}: generation failed: {e}", entry.id)],
            };
            let problem = match entry.problem() {
                Ok(p) => p,
                Err(e) => return vec![format!("{}: problem failed: {e}", entry.id)],
            };
            for r in 0..code.len() {
                let truncated = LinearCode::new(
                    code.num_messages(),
                    code.block_size(),
                    code.matrix().without_row(r),
                )
                .expect("row removal keeps the code well-formed");
                match decodable(&problem, &truncated) {
                    Ok(checks) => {
                        if checks.iter().all(|c| c.decodable) {
                            errs.push(format!(
                                "{}: still decodable after deleting symbol {r}",
                                entry.id
                            ));
                        }
                    }
                    Err(e) => errs.push(format!("{}: decodable failed: {e}", entry.id)),
                }
            }
            if entry.u == 0 {
                for k in 1..=entry.k {
                    match find_sum(&code, &problem, k) {
                        Ok(w) => {
                            if w.offsets.iter().any(|&a| a < 1 || a > entry.delta) {
                                errs.push(format!(
                                    "{}: receiver {k} offsets {:?} leave 1..={}",
                                    entry.id, w.offsets, entry.delta
                                ));
                            }
                        }
                        Err(e) => errs.push(format!("{}: find_sum({k}) failed: {e}", entry.id)),
                    }
                }
            }
            errs
        })
        .collect();
    report(
        6,
        "negative controls",
        start,
        Duration::from_secs(60),
        &failures,
    );
}

/// Criterion 7: the property suite under a fixed seed — schedule topological
/// soundness, one unknown per decoding step, substitution row-count
/// preservation, and rank invariance under random elementary row operations.
#[test]
fn criterion_7_property_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();

    // Schedule properties across all golden parameter sets and U <= 3.
    for entry in corpus().iter().filter(|e| e.u == 0) {
        let scalar = entry.generated_code().expect("golden scalar");
        let seed_problem = one_sided_problem(entry.k, entry.delta).unwrap();
        for u in 0..=3usize {
            if u + entry.delta + u >= entry.k {
                continue;
            }
            let tag = format!("{} u={u}", entry.id);
            let code = substitute(&scalar, u).unwrap();
            if code.len() != scalar.len() {
                failures.push(format!("{tag}: substitution changed row count"));
            }
            let schedule = match build_schedule(&scalar, u, &seed_problem) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("{tag}: schedule failed: {e}"));
                    continue;
                }
            };
            let map = SubstitutionMap::new(entry.k, u);
            for (kidx, steps) in schedule.steps.iter().enumerate() {
                let receiver = kidx + 1;
                let mut recovered: Vec<Component> = Vec::new();
                for (sidx, step) in steps.iter().enumerate() {
                    // Topological soundness: cancellations only reference
                    // components recovered at strictly earlier steps.
                    for c in &step.cancel {
                        if !recovered.contains(c) {
                            failures.push(format!(
                                "{tag}: receiver {receiver} step {} cancels unrecovered {c}",
                                sidx + 1
                            ));
                        }
                    }
                    // One unknown per step: after side information and
                    // cancellations, only the target remains.
                    let blocks =
                        std::iter::once(step.sum_index).chain(step.offsets.iter().map(|&a| {
                            indexcode::problem::wrap((step.sum_index + a) as i64, entry.k)
                        }));
                    let mut unknown = Vec::new();
                    for b in blocks {
                        for comp in map.components_of(b) {
                            let known = comp.message() != receiver || recovered.contains(&comp);
                            if comp != step.recovers && !known {
                                unknown.push(comp);
                            }
                        }
                    }
                    if !unknown.is_empty() {
                        failures.push(format!(
                            "{tag}: receiver {receiver} step {} leaves unknowns {unknown:?}",
                            sidx + 1
                        ));
                    }
                    recovered.push(step.recovers);
                }
            }
        }
    }

    // GF(2) invariants under randomized elementary row operations.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for _ in 0..300 {
        let rows = rng.random_range(1..=16);
        let cols = rng.random_range(1..=16);
        let mut m = indexcode::BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.random::<bool>() {
                    m.set(r, c, true);
                }
            }
        }
        let rank = m.rank();
        let (rref, pivots) = m.rref();
        if rref.rank() != rank || pivots.len() != rank {
            failures.push("rref changed the rank".into());
        }
        // A random sequence of row additions must not move the rank.
        let mut twisted_rows: Vec<BitVec> = (0..rows).map(|r| m.row(r).clone()).collect();
        for _ in 0..8 {
            let src = rng.random_range(0..rows);
            let dst = rng.random_range(0..rows);
            if src != dst {
                let patch = twisted_rows[src].clone();
                twisted_rows[dst].xor_assign(&patch);
            }
        }
        let twisted = indexcode::BitMatrix::from_rows(twisted_rows, cols);
        if twisted.rank() != rank {
            failures.push("row addition changed the rank".into());
        }
    }

    report(
        7,
        "property suite",
        start,
        Duration::from_secs(60),
        &failures,
    );
}
