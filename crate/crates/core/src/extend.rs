//! Extension of scalar codes into vector codes, with constructive decoding.
//!
//! A scalar code over composite symbols `y_1..y_K` turns into a vector code
//! over `K*(U+1)` message components by packing `U+1` components into each
//! `y_k` (one from each of the `U+1` preceding blocks, staggered so every
//! component lands in exactly one `y`). The packed code serves the problem
//! where each receiver wants a whole block and knows the `U` blocks before
//! and `D+U` after its own.
//!
//! Decoding is constructive: receiver `k` peels its block one component per
//! step, using at step `l` the decoding sum anchored at `k+U+1-l` and
//! cancelling the interference from its own already-recovered components.

use crate::code::{Component, LinearCode};
use crate::gf2::BitVec;
use crate::problem::{one_sided_problem, wrap, ProblemSpec};
use crate::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The packing of `K*(U+1)` components into `K` composite symbols:
/// `y_k` holds component `(k+1-i, i)` for `i = 1..=U+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubstitutionMap {
    k: usize,
    u: usize,
}

impl SubstitutionMap {
    #[must_use]
    pub fn new(k: usize, u: usize) -> Self {
        assert!(k > 0, "empty problem");
        Self { k, u }
    }

    /// Components per message block.
    #[must_use]
    pub const fn block_size(&self) -> usize {
        self.u + 1
    }

    /// The ordered components packed into composite symbol `y_b`.
    pub fn components_of(&self, b: usize) -> impl Iterator<Item = Component> + '_ {
        (1..=self.u + 1).map(move |i| Component(wrap(b as i64 + 1 - i as i64, self.k), i))
    }

    /// The composite symbol holding a component.
    #[must_use]
    pub fn host_of(&self, c: Component) -> usize {
        wrap(c.message() as i64 + c.index() as i64 - 1, self.k)
    }
}

/// Replaces every composite symbol in a scalar code by its packed
/// components, yielding a code over `K*(U+1)` columns with the same number
/// of rows.
pub fn substitute(scalar: &LinearCode, u: usize) -> Result<LinearCode, Error> {
    if scalar.block_size() != 1 {
        return Err(Error::NotScalar(scalar.block_size()));
    }
    let map = SubstitutionMap::new(scalar.num_messages(), u);
    let rows: Vec<Vec<Component>> = scalar
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .flat_map(|c| map.components_of(c.message()))
                .collect()
        })
        .collect();
    let code = LinearCode::from_rows(scalar.num_messages(), u + 1, &rows)?;
    debug_assert_eq!(code.len(), scalar.len());
    Ok(code)
}

/// A combination of code symbols equal to `y_k` plus antidote symbols
/// `y_{k+a}` for the recorded offsets `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumWitness {
    pub receiver: usize,
    /// Coefficients over the scalar code's symbols.
    pub coeffs: BitVec,
    /// Strictly increasing antidote offsets, each within the receiver's
    /// side-information window.
    pub offsets: Vec<usize>,
}

/// Finds the decoding sum for receiver `k` of a scalar code: coefficients
/// `c` with `c * code = e_k + sum of e_{k+a}` over the receiver's antidote
/// offsets `a`. The witness is canonical (lowest-pivot elimination), so
/// schedules built from it are reproducible.
pub fn find_sum(scalar: &LinearCode, problem: &ProblemSpec, k: usize) -> Result<SumWitness, Error> {
    if scalar.block_size() != 1 {
        return Err(Error::NotScalar(scalar.block_size()));
    }
    if scalar.num_messages() != problem.k {
        return Err(Error::Shape(format!(
            "code has {} messages, problem has {}",
            scalar.num_messages(),
            problem.k
        )));
    }
    let n = problem.k;
    let offsets = problem.antidote_offsets(k);
    let mut augmented = scalar.matrix().clone();
    for &a in &offsets {
        augmented.push_row(BitVec::unit(n, wrap(k as i64 + a as i64, n) - 1));
    }
    let target = BitVec::unit(n, k - 1);
    let Some(solution) = augmented.solve_in_span(&target)? else {
        return Err(Error::Undecodable(k));
    };
    let l = scalar.len();
    let mut coeffs = BitVec::zeros(l);
    let mut used = Vec::new();
    for idx in solution.ones() {
        if idx < l {
            coeffs.set(idx, true);
        } else {
            used.push(offsets[idx - l]);
        }
    }
    used.sort_unstable();
    Ok(SumWitness {
        receiver: k,
        coeffs,
        offsets: used,
    })
}

/// One decoding step: combine the code symbols selected by `coeffs`, strip
/// side information and the already-recovered `cancel` components, and read
/// off `recovers`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleStep {
    /// Anchor of the decoding sum used by this step.
    pub sum_index: usize,
    /// Coefficients over the code symbols, as 0/1 flags.
    #[serde(with = "bits_as_ints")]
    pub coeffs: BitVec,
    /// Antidote offsets of the anchored sum.
    pub offsets: Vec<usize>,
    /// Own-block components that interfere and must be cancelled; all are
    /// recovered by earlier steps.
    pub cancel: Vec<Component>,
    /// The component this step recovers.
    pub recovers: Component,
}

/// Per-receiver constructive decoding plans for an extended code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingSchedule {
    #[serde(rename = "K")]
    pub k: usize,
    /// Number of extra components per block; block size is `u + 1`.
    pub u: usize,
    /// Antidote window of the seed one-sided problem.
    pub d: usize,
    /// Scalar (and extended) code length.
    pub l: usize,
    /// `steps[k-1]` lists receiver `R_k`'s steps in execution order.
    pub steps: Vec<Vec<ScheduleStep>>,
}

mod bits_as_ints {
    use crate::gf2::BitVec;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &BitVec, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq((0..bits.len()).map(|i| u8::from(bits.get(i))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BitVec, D::Error> {
        let ints = Vec::<u8>::deserialize(de)?;
        let mut bits = BitVec::zeros(ints.len());
        for (i, v) in ints.iter().enumerate() {
            match v {
                0 => {}
                1 => bits.set(i, true),
                _ => return Err(D::Error::custom("coefficients must be 0 or 1")),
            }
        }
        Ok(bits)
    }
}

impl DecodingSchedule {
    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let schedule: Self = serde_json::from_str(s)?;
        schedule.validate()?;
        Ok(schedule)
    }

    /// Structural consistency: one step list per receiver, coefficient
    /// vectors of the code length, and all indices in range.
    pub fn validate(&self) -> Result<(), Error> {
        if self.k == 0 || self.steps.len() != self.k {
            return Err(Error::Shape(format!(
                "schedule has {} step lists for K={}",
                self.steps.len(),
                self.k
            )));
        }
        for (idx, steps) in self.steps.iter().enumerate() {
            let receiver = idx + 1;
            if steps.len() != self.u + 1 {
                return Err(Error::Shape(format!(
                    "receiver {receiver} has {} steps, expected {}",
                    steps.len(),
                    self.u + 1
                )));
            }
            for step in steps {
                if step.coeffs.len() != self.l {
                    return Err(Error::Shape(format!(
                        "receiver {receiver}: coefficient vector has {} bits, code length is {}",
                        step.coeffs.len(),
                        self.l
                    )));
                }
                if step.sum_index < 1 || step.sum_index > self.k {
                    return Err(Error::Shape(format!(
                        "receiver {receiver}: sum index {} outside 1..={}",
                        step.sum_index, self.k
                    )));
                }
                for comp in step.cancel.iter().chain(std::iter::once(&step.recovers)) {
                    if comp.message() != receiver || comp.index() < 1 || comp.index() > self.u + 1 {
                        return Err(Error::Shape(format!(
                            "receiver {receiver}: component {comp} outside its block"
                        )));
                    }
                }
                if step.offsets.iter().any(|&a| a < 1 || a >= self.k) {
                    return Err(Error::Shape(format!(
                        "receiver {receiver}: offsets {:?} leave 1..{}",
                        step.offsets, self.k
                    )));
                }
            }
        }
        Ok(())
    }

    /// The extended problem this schedule decodes.
    pub fn extended_problem(&self) -> Result<ProblemSpec, Error> {
        crate::problem::extended_problem(self.k, self.u, self.d)
    }
}

/// Builds the full decoding schedule for `substitute(scalar, u)`.
///
/// `problem` is the seed one-sided problem the scalar code decodes. Step `l`
/// of receiver `k` uses the sum anchored at `k+U+1-l` and recovers component
/// `U+2-l`; interference from the receiver's own block is cancelled against
/// components recovered at earlier steps.
pub fn build_schedule(
    scalar: &LinearCode,
    u: usize,
    problem: &ProblemSpec,
) -> Result<DecodingSchedule, Error> {
    if scalar.block_size() != 1 {
        return Err(Error::NotScalar(scalar.block_size()));
    }
    let k_total = problem.k;
    let witnesses: Vec<SumWitness> = (1..=k_total)
        .map(|k| find_sum(scalar, problem, k))
        .collect::<Result<_, _>>()?;
    let d = witnesses
        .iter()
        .flat_map(|w| w.offsets.iter().copied())
        .chain((1..=k_total).flat_map(|k| problem.antidote_offsets(k)))
        .max()
        .unwrap_or(0);
    if u + (d + u) >= k_total {
        return Err(Error::AntidoteCount {
            k: k_total,
            up: u,
            down: d + u,
        });
    }
    let map = SubstitutionMap::new(k_total, u);
    let mut steps = Vec::with_capacity(k_total);
    for k in 1..=k_total {
        let mut receiver_steps = Vec::with_capacity(u + 1);
        let mut recovered: Vec<Component> = Vec::new();
        for l in 1..=u + 1 {
            let anchor = wrap(k as i64 + u as i64 + 1 - l as i64, k_total);
            let witness = &witnesses[anchor - 1];
            let target = Component(k, u + 2 - l);
            // Expand the anchored sum and split its components by role.
            let mut cancel = Vec::new();
            let mut unknown = Vec::new();
            for b in std::iter::once(anchor).chain(
                witness
                    .offsets
                    .iter()
                    .map(|&a| wrap((anchor + a) as i64, k_total)),
            ) {
                for comp in map.components_of(b) {
                    if comp.message() != k || comp == target {
                        continue;
                    }
                    if recovered.contains(&comp) {
                        cancel.push(comp);
                    } else {
                        unknown.push(comp);
                    }
                }
            }
            if !unknown.is_empty() {
                unknown.push(target);
                return Err(Error::Interference {
                    receiver: k,
                    step: l,
                    components: unknown.iter().map(|c| (c.message(), c.index())).collect(),
                });
            }
            cancel.sort();
            recovered.push(target);
            receiver_steps.push(ScheduleStep {
                sum_index: anchor,
                coeffs: witness.coeffs.clone(),
                offsets: witness.offsets.clone(),
                cancel,
                recovers: target,
            });
        }
        steps.push(receiver_steps);
    }
    Ok(DecodingSchedule {
        k: k_total,
        u,
        d,
        l: scalar.len(),
        steps,
    })
}

/// Component values known to a receiver before decoding.
pub type KnownComponents = BTreeMap<Component, bool>;

/// Collects the side information of receiver `k` for a block size `t`:
/// every component of every antidote block, read out of a full message.
#[must_use]
pub fn side_info_for(
    problem: &ProblemSpec,
    t: usize,
    message: &BitVec,
    k: usize,
) -> KnownComponents {
    let mut known = KnownComponents::new();
    for &m in problem.antidotes_of(k) {
        for i in 1..=t {
            let col = (m - 1) * t + (i - 1);
            known.insert(Component(m, i), message.get(col));
        }
    }
    known
}

/// Matrix-vector encoding: one transmitted bit per code symbol.
pub fn encode(code: &LinearCode, message: &BitVec) -> Result<BitVec, Error> {
    if message.len() != code.num_messages() * code.block_size() {
        return Err(Error::Shape(format!(
            "message has {} bits, code expects {}",
            message.len(),
            code.num_messages() * code.block_size()
        )));
    }
    Ok(code.matrix().mul_vec(message))
}

/// Runs receiver `k`'s schedule over a received codeword, returning its
/// block components `(k, 1)..=(k, U+1)` in index order.
///
/// `side_info` must hold every component of the receiver's antidote blocks;
/// beyond those, only the codeword and components recovered by earlier steps
/// of the same schedule are consumed.
pub fn decode_with_schedule(
    schedule: &DecodingSchedule,
    codeword: &BitVec,
    side_info: &KnownComponents,
    k: usize,
) -> Result<Vec<bool>, Error> {
    if k < 1 || k > schedule.k {
        return Err(Error::Shape(format!(
            "receiver {k} outside 1..={}",
            schedule.k
        )));
    }
    if codeword.len() != schedule.l {
        return Err(Error::Shape(format!(
            "codeword has {} bits, schedule expects {}",
            codeword.len(),
            schedule.l
        )));
    }
    let map = SubstitutionMap::new(schedule.k, schedule.u);
    let mut recovered: BTreeMap<Component, bool> = BTreeMap::new();
    for step in &schedule.steps[k - 1] {
        let mut bit = step
            .coeffs
            .ones()
            .fold(false, |acc, r| acc ^ codeword.get(r));
        for b in std::iter::once(step.sum_index).chain(
            step.offsets
                .iter()
                .map(|&a| wrap((step.sum_index + a) as i64, schedule.k)),
        ) {
            for comp in map.components_of(b) {
                if comp == step.recovers {
                    continue;
                }
                if comp.message() == k {
                    let Some(&v) = recovered.get(&comp) else {
                        return Err(Error::Shape(format!(
                            "schedule for receiver {k} cancels {comp} before recovering it"
                        )));
                    };
                    bit ^= v;
                } else {
                    let Some(&v) = side_info.get(&comp) else {
                        return Err(Error::Shape(format!(
                            "receiver {k} is missing side information for {comp}"
                        )));
                    };
                    bit ^= v;
                }
            }
        }
        recovered.insert(step.recovers, bit);
    }
    (1..=schedule.u + 1)
        .map(|i| {
            recovered
                .get(&Component(k, i))
                .copied()
                .ok_or_else(|| Error::Shape(format!("schedule never recovers component ({k},{i})")))
        })
        .collect()
}

/// A vector code for a two-sided symmetric problem, decoded through the
/// one-sided seed schedule. When the pattern has more antidotes before than
/// after the wanted message, the construction runs on the reversed index
/// order and the codec relabels in and out transparently.
#[derive(Debug, Clone)]
pub struct TwoSidedCodec {
    code: LinearCode,
    schedule: DecodingSchedule,
    mirrored: bool,
}

impl TwoSidedCodec {
    /// Builds the codec for the two-sided pattern with `up` and `down`
    /// antidotes from a scalar code for the one-sided problem with
    /// `|down - up|` antidotes.
    pub fn new(scalar: &LinearCode, up: usize, down: usize) -> Result<Self, Error> {
        let k = scalar.num_messages();
        let delta = up.abs_diff(down);
        let seed = one_sided_problem(k, delta)?;
        let u = up.min(down);
        let schedule = build_schedule(scalar, u, &seed)?;
        let direct = substitute(scalar, u)?;
        if up <= down {
            Ok(Self {
                code: direct,
                schedule,
                mirrored: false,
            })
        } else {
            Ok(Self {
                code: direct.mirror(),
                schedule,
                mirrored: true,
            })
        }
    }

    #[must_use]
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    #[must_use]
    pub fn schedule(&self) -> &DecodingSchedule {
        &self.schedule
    }

    pub fn encode(&self, message: &BitVec) -> Result<BitVec, Error> {
        encode(&self.code, message)
    }

    /// Decodes receiver `k`'s block from the codeword and its two-sided side
    /// information.
    pub fn decode(
        &self,
        codeword: &BitVec,
        side_info: &KnownComponents,
        k: usize,
    ) -> Result<Vec<bool>, Error> {
        if !self.mirrored {
            return decode_with_schedule(&self.schedule, codeword, side_info, k);
        }
        let n = self.schedule.k;
        let reflected: KnownComponents = side_info
            .iter()
            .map(|(c, &v)| (Component(wrap(-(c.message() as i64), n), c.index()), v))
            .collect();
        decode_with_schedule(&self.schedule, codeword, &reflected, wrap(-(k as i64), n))
    }
}
