//! Independent correctness and optimality checks.
//!
//! Decodability here is the span criterion: receiver `R_k` can decode iff
//! every unit vector of its wanted block lies in the span of the code rows
//! together with the unit vectors of its side-information components. This
//! is deliberately separate from the constructive schedule decoder so the
//! two can cross-check each other.

use crate::code::{Component, LinearCode};
use crate::construct::capacity;
use crate::gf2::{BitMatrix, BitVec};
use crate::problem::{ProblemSpec, SymmetricParams};
use crate::rational::Rational;
use crate::Error;
use rayon::prelude::*;
use serde::Serialize;

/// Span witness for one wanted component: the code symbols to combine and
/// the side-information components that complete the cancellation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentWitness {
    pub component: Component,
    /// 0/1 coefficients over the code symbols.
    pub coeffs: Vec<u8>,
    /// Side-information components entering the combination.
    pub side: Vec<Component>,
}

/// Decodability verdict for one receiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReceiverCheck {
    pub receiver: usize,
    pub decodable: bool,
    /// One witness per wanted component when decodable.
    pub witnesses: Vec<ComponentWitness>,
}

/// Checks every receiver of `problem` against `code` by span membership,
/// returning per-receiver witnesses.
pub fn decodable(problem: &ProblemSpec, code: &LinearCode) -> Result<Vec<ReceiverCheck>, Error> {
    if code.num_messages() != problem.k {
        return Err(Error::Shape(format!(
            "code has {} messages, problem has {}",
            code.num_messages(),
            problem.k
        )));
    }
    let t = code.block_size();
    let l = code.len();
    (1..=problem.k)
        .map(|k| {
            // Code rows plus one unit row per known side-information component.
            let mut basis = code.matrix().clone();
            let mut side_components = Vec::new();
            for &m in problem.antidotes_of(k) {
                for i in 1..=t {
                    let comp = Component(m, i);
                    basis.push_row(BitVec::unit(problem.k * t, code.column_of(comp)));
                    side_components.push(comp);
                }
            }
            let mut witnesses = Vec::new();
            let mut ok = true;
            let wanted = problem.wanted_by(k);
            for i in 1..=t {
                let comp = Component(wanted, i);
                let target = BitVec::unit(problem.k * t, code.column_of(comp));
                match basis.solve_in_span(&target)? {
                    Some(solution) => {
                        let coeffs = (0..l).map(|r| u8::from(solution.get(r))).collect();
                        let side = solution
                            .ones()
                            .filter(|&idx| idx >= l)
                            .map(|idx| side_components[idx - l])
                            .collect();
                        witnesses.push(ComponentWitness {
                            component: comp,
                            coeffs,
                            side,
                        });
                    }
                    None => {
                        ok = false;
                        witnesses.clear();
                        break;
                    }
                }
            }
            Ok(ReceiverCheck {
                receiver: k,
                decodable: ok,
                witnesses,
            })
        })
        .collect()
}

/// Full verification verdict: decodability per receiver plus the exact
/// rate-versus-capacity comparison.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub problem: String,
    pub code: String,
    pub receivers: Vec<ReceiverCheck>,
    pub all_decodable: bool,
    /// Components per message over code length, in lowest terms.
    pub rate: Rational,
    /// Symmetric capacity, when the problem parameters are symmetric.
    pub capacity: Option<Rational>,
    /// True iff decodable everywhere and the rate meets capacity exactly.
    pub optimal: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Verifies `code` against the symmetric pattern `params`: decodability on
/// the generated problem and exact equality of `t/l` with the capacity.
pub fn check_optimality(
    params: SymmetricParams,
    code: &LinearCode,
    code_id: &str,
) -> Result<VerificationReport, Error> {
    let problem = params.problem()?;
    let receivers = decodable(&problem, code)?;
    let all_decodable = receivers.iter().all(|r| r.decodable);
    let rate = Rational::new(code.block_size() as i64, code.len() as i64);
    let cap = capacity(params.k, params.up, params.down)?;
    let mut notes = Vec::new();
    if !all_decodable {
        let failed: Vec<usize> = receivers
            .iter()
            .filter(|r| !r.decodable)
            .map(|r| r.receiver)
            .collect();
        notes.push(format!("undecodable receivers: {failed:?}"));
    }
    if rate != cap {
        notes.push(format!("rate {rate} differs from capacity {cap}"));
    }
    Ok(VerificationReport {
        problem: problem.label.clone(),
        code: code_id.to_string(),
        receivers,
        all_decodable,
        rate,
        capacity: Some(cap),
        optimal: all_decodable && rate == cap,
        notes,
    })
}

/// Verifies a code against an explicit problem, assessing optimality only
/// when the problem turns out to be a symmetric two-sided pattern.
pub fn verify_against_problem(
    problem: &ProblemSpec,
    code: &LinearCode,
    code_id: &str,
) -> Result<VerificationReport, Error> {
    let receivers = decodable(problem, code)?;
    let all_decodable = receivers.iter().all(|r| r.decodable);
    let rate = Rational::new(code.block_size() as i64, code.len() as i64);
    let mut notes = Vec::new();
    if !all_decodable {
        let failed: Vec<usize> = receivers
            .iter()
            .filter(|r| !r.decodable)
            .map(|r| r.receiver)
            .collect();
        notes.push(format!("undecodable receivers: {failed:?}"));
    }
    let cap = match problem.symmetric_params() {
        Some(params) => Some(capacity(params.k, params.up, params.down)?),
        None => {
            notes.push("problem is not a symmetric window pattern; capacity not assessed".into());
            None
        }
    };
    let optimal = all_decodable && cap == Some(rate);
    if let Some(c) = cap {
        if c != rate {
            notes.push(format!("rate {rate} differs from capacity {c}"));
        }
    }
    Ok(VerificationReport {
        problem: problem.label.clone(),
        code: code_id.to_string(),
        receivers,
        all_decodable,
        rate,
        capacity: cap,
        optimal,
        notes,
    })
}

/// Hard cap on the number of candidate row spaces the exhaustive oracle
/// will enumerate.
const ORACLE_BUDGET: u128 = 1 << 24;

/// Exhaustive minimum-length search for scalar codes of `problem`.
///
/// Enumerates row spaces (codes up to row operations, as reduced echelon
/// forms) of each dimension `1..=max_len` and returns the smallest dimension
/// admitting a fully decodable code, or `None` if none exists within
/// `max_len`. The scan of each dimension below the answer is exhaustive, so
/// the result certifies the minimum.
pub fn minrank_oracle(problem: &ProblemSpec, max_len: usize) -> Result<Option<usize>, Error> {
    let k = problem.k;
    let levels = max_len.min(k);
    // 2^K - 1 single-row candidates already exceed the budget past K = 24.
    if levels >= 1 && k > 24 {
        return Err(Error::InstanceTooLarge(format!(
            "2^{k} - 1 single-row candidates for K={k} exceed the budget of {ORACLE_BUDGET}"
        )));
    }
    let budget: u128 = (1..=levels).map(|l| subspace_count(k, l)).sum();
    if budget > ORACLE_BUDGET {
        return Err(Error::InstanceTooLarge(format!(
            "enumerating {budget} candidate row spaces for K={k}, max_len={max_len} exceeds the budget of {ORACLE_BUDGET}"
        )));
    }
    // Side-information unit rows per receiver, reused across candidates.
    let side_rows: Vec<Vec<BitVec>> = (1..=k)
        .map(|r| {
            problem
                .antidotes_of(r)
                .iter()
                .map(|&m| BitVec::unit(k, m - 1))
                .collect()
        })
        .collect();
    let solves = |rows: &[BitVec]| {
        (1..=k).all(|r| {
            let mut basis = rows.to_vec();
            basis.extend(side_rows[r - 1].iter().cloned());
            let m = BitMatrix::from_rows(basis, k);
            m.spans(&BitVec::unit(k, problem.wanted_by(r) - 1))
        })
    };
    for l in 1..=levels {
        // One representative per l-dimensional row space: scan echelon forms
        // pivot set by pivot set, fanning the free-entry assignments out
        // across workers.
        for pivots in pivot_sets(k, l) {
            let free = free_positions(k, &pivots);
            let found = (0u64..1 << free.len())
                .into_par_iter()
                .any(|assignment| solves(&build_rref(k, &pivots, &free, assignment)));
            if found {
                return Ok(Some(l));
            }
        }
    }
    Ok(None)
}

/// Number of `dim`-dimensional subspaces of GF(2)^n (Gaussian binomial).
fn subspace_count(n: usize, dim: usize) -> u128 {
    if dim > n {
        return 0;
    }
    let mut numer: u128 = 1;
    let mut denom: u128 = 1;
    for i in 0..dim {
        numer *= (1u128 << (n - i)) - 1;
        denom *= (1u128 << (dim - i)) - 1;
    }
    numer / denom
}

/// All strictly increasing pivot-column choices of size `l` in `0..cols`.
fn pivot_sets(cols: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(cols: usize, l: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        let remaining = l - cur.len();
        for c in start..=cols.saturating_sub(remaining) {
            cur.push(c);
            rec(cols, l, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(cols, l, 0, &mut Vec::with_capacity(l), &mut out);
    out
}

/// Free entries of an echelon form with the given pivots: non-pivot columns
/// to the right of each row's pivot.
fn free_positions(cols: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    (0..pivots.len())
        .flat_map(|r| {
            (pivots[r] + 1..cols)
                .filter(|c| !pivots.contains(c))
                .map(move |c| (r, c))
        })
        .collect()
}

/// Materializes the echelon form for one free-entry assignment.
fn build_rref(
    cols: usize,
    pivots: &[usize],
    free: &[(usize, usize)],
    assignment: u64,
) -> Vec<BitVec> {
    let mut rows: Vec<BitVec> = pivots.iter().map(|&p| BitVec::unit(cols, p)).collect();
    for (bit, &(r, c)) in free.iter().enumerate() {
        if assignment >> bit & 1 == 1 {
            rows[r].set(c, true);
        }
    }
    rows
}

/// Test-only full enumeration of rank-`l` echelon forms.
#[cfg(test)]
fn enumerate_rref(cols: usize, l: usize) -> Vec<Vec<BitVec>> {
    let mut out = Vec::new();
    for pivots in pivot_sets(cols, l) {
        let free = free_positions(cols, &pivots);
        for assignment in 0u64..(1 << free.len()) {
            out.push(build_rref(cols, &pivots, &free, assignment));
        }
    }
    out
}

/// Difference between a generated code and a reference listing, as row
/// multisets after cyclic index normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenDiff {
    /// Rows of the reference not produced by the generator.
    pub missing: Vec<Vec<Component>>,
    /// Generated rows absent from the reference.
    pub unexpected: Vec<Vec<Component>>,
}

impl GoldenDiff {
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

/// Canonical form of a row: components with message indices reduced into
/// `1..=K`, sorted. Reference listings sometimes carry indices just outside
/// the range (e.g. `K+1` for `1`); normalization makes the comparison
/// index-convention-proof.
#[must_use]
pub fn normalize_row(row: &[Component], k: usize) -> Vec<Component> {
    let mut out: Vec<Component> = row
        .iter()
        .map(|c| Component(crate::problem::wrap(c.message() as i64, k), c.index()))
        .collect();
    out.sort();
    out
}

/// Compares two codes as multisets of normalized rows.
pub fn compare_golden(generated: &LinearCode, golden: &LinearCode) -> Result<GoldenDiff, Error> {
    if generated.num_messages() != golden.num_messages()
        || generated.block_size() != golden.block_size()
    {
        return Err(Error::Shape(format!(
            "cannot compare codes over K={}, t={} and K={}, t={}",
            generated.num_messages(),
            generated.block_size(),
            golden.num_messages(),
            golden.block_size()
        )));
    }
    let k = generated.num_messages();
    let mut gen_rows: Vec<Vec<Component>> = generated
        .rows()
        .iter()
        .map(|r| normalize_row(r, k))
        .collect();
    let mut missing = Vec::new();
    for row in golden.rows() {
        let norm = normalize_row(&row, k);
        match gen_rows.iter().position(|r| *r == norm) {
            Some(pos) => {
                gen_rows.swap_remove(pos);
            }
            None => missing.push(norm),
        }
    }
    missing.sort();
    gen_rows.sort();
    Ok(GoldenDiff {
        missing,
        unexpected: gen_rows,
    })
}
