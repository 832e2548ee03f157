//! Index coding problem instances and the symmetric antidote generators.
//!
//! An instance has `K` messages and `K` receivers; receiver `R_k` demands
//! one message and already knows a set of others (its antidotes). Messages
//! are 1-based and all index arithmetic is cyclic, with canonical
//! representatives in `1..=K`.

use crate::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Parameters of a symmetric two-sided antidote pattern: each receiver knows
/// the `up` messages before and the `down` messages after its wanted one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricParams {
    #[serde(rename = "K")]
    pub k: usize,
    pub up: usize,
    pub down: usize,
}

impl SymmetricParams {
    pub fn new(k: usize, up: usize, down: usize) -> Result<Self, Error> {
        if k == 0 || up + down >= k {
            return Err(Error::AntidoteCount { k, up, down });
        }
        Ok(Self { k, up, down })
    }

    /// Total side-information count `A = U + D`.
    #[must_use]
    pub fn total(&self) -> usize {
        self.up + self.down
    }

    /// The one-sided antidote count `|D - U|` of the seed problem behind
    /// this pattern.
    #[must_use]
    pub fn delta(&self) -> usize {
        self.down.abs_diff(self.up)
    }

    /// The problem instance with this pattern.
    pub fn problem(&self) -> Result<ProblemSpec, Error> {
        two_sided_problem(self.k, self.up, self.down)
    }
}

/// Reduces an index to its canonical cyclic representative in `1..=k`.
#[must_use]
pub fn wrap(index: i64, k: usize) -> usize {
    assert!(k > 0, "wrap with zero modulus");
    let m = index.rem_euclid(k as i64);
    if m == 0 {
        k
    } else {
        m as usize
    }
}

/// A multiple-unicast index coding instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    /// Number of messages (and receivers).
    #[serde(rename = "K")]
    pub k: usize,
    /// `wants[k-1]` is the message demanded by receiver `R_k`.
    pub wants: Vec<usize>,
    /// `antidotes[k-1]` is the side-information set of receiver `R_k`.
    pub antidotes: Vec<BTreeSet<usize>>,
    /// Free-text description, including block structure for extended problems.
    pub label: String,
}

impl ProblemSpec {
    /// Validates the multiple-unicast invariants: `wants` is a permutation of
    /// `1..=K`, no receiver holds its own wanted message, and every antidote
    /// index is in range.
    pub fn validate(&self) -> Result<(), Error> {
        if self.wants.len() != self.k || self.antidotes.len() != self.k {
            return Err(Error::InvalidProblem(format!(
                "K={} but wants has {} entries and antidotes {}",
                self.k,
                self.wants.len(),
                self.antidotes.len()
            )));
        }
        let mut seen = vec![false; self.k];
        for (idx, &w) in self.wants.iter().enumerate() {
            if w < 1 || w > self.k {
                return Err(Error::InvalidProblem(format!(
                    "receiver {} wants message {w}, outside 1..={}",
                    idx + 1,
                    self.k
                )));
            }
            if seen[w - 1] {
                return Err(Error::InvalidProblem(format!(
                    "message {w} demanded twice; wants must be a permutation"
                )));
            }
            seen[w - 1] = true;
            if self.antidotes[idx].contains(&w) {
                return Err(Error::InvalidProblem(format!(
                    "receiver {} holds its own wanted message {w}",
                    idx + 1
                )));
            }
        }
        for (idx, set) in self.antidotes.iter().enumerate() {
            if let Some(&bad) = set.iter().find(|&&m| m < 1 || m > self.k) {
                return Err(Error::InvalidProblem(format!(
                    "receiver {} antidote {bad} outside 1..={}",
                    idx + 1,
                    self.k
                )));
            }
        }
        Ok(())
    }

    /// The antidote set of receiver `R_k` (1-based).
    ///
    /// # Panics
    /// Panics if `k` is out of range.
    #[must_use]
    pub fn antidotes_of(&self, k: usize) -> &BTreeSet<usize> {
        &self.antidotes[k - 1]
    }

    /// The message demanded by receiver `R_k` (1-based).
    ///
    /// # Panics
    /// Panics if `k` is out of range.
    #[must_use]
    pub fn wanted_by(&self, k: usize) -> usize {
        self.wants[k - 1]
    }

    /// Cyclic offsets `(m - k) mod K` of receiver `R_k`'s antidotes,
    /// ascending. Offsets in `1..=D` are "down" (after the wanted message);
    /// offsets near `K-1` are "up" (before it).
    #[must_use]
    pub fn antidote_offsets(&self, k: usize) -> Vec<usize> {
        let mut offsets: Vec<usize> = self.antidotes[k - 1]
            .iter()
            .map(|&m| wrap(m as i64 - k as i64, self.k))
            .collect();
        offsets.sort_unstable();
        offsets
    }

    /// If every receiver's antidotes form the same cyclic window of `D`
    /// messages after and `U` before its wanted one, returns `(U, D)`.
    ///
    /// When `U + D = K - 1` the split is ambiguous; the maximal down-window
    /// is reported.
    #[must_use]
    pub fn symmetric_params(&self) -> Option<SymmetricParams> {
        if self.k == 0 || self.wants.iter().enumerate().any(|(i, &w)| w != i + 1) {
            return None;
        }
        let offsets: BTreeSet<usize> = self.antidote_offsets(1).into_iter().collect();
        let mut down = 0;
        while offsets.contains(&(down + 1)) {
            down += 1;
        }
        let mut up = 0;
        while up < self.k - 1 - down && offsets.contains(&(self.k - 1 - up)) {
            up += 1;
        }
        if offsets.len() != up + down {
            return None;
        }
        for k in 2..=self.k {
            if self
                .antidote_offsets(k)
                .into_iter()
                .collect::<BTreeSet<_>>()
                != offsets
            {
                return None;
            }
        }
        Some(SymmetricParams {
            k: self.k,
            up,
            down,
        })
    }

    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let p: Self = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }
}

/// One-sided pattern: receiver `R_k` wants `x_k` and knows the `D` messages
/// cyclically after it, `{x_{k+1}, ..., x_{k+D}}`.
pub fn one_sided_problem(k: usize, down: usize) -> Result<ProblemSpec, Error> {
    two_sided_problem(k, 0, down)
}

/// Two-sided pattern: receiver `R_k` knows the `U` messages before and the
/// `D` messages after its wanted one, cyclically.
pub fn two_sided_problem(k: usize, up: usize, down: usize) -> Result<ProblemSpec, Error> {
    if k == 0 || up + down >= k {
        return Err(Error::AntidoteCount { k, up, down });
    }
    let antidotes = (1..=k as i64)
        .map(|r| {
            let mut set = BTreeSet::new();
            for a in 1..=down as i64 {
                set.insert(wrap(r + a, k));
            }
            for a in 1..=up as i64 {
                set.insert(wrap(r - a, k));
            }
            set
        })
        .collect();
    let label = if up == 0 {
        format!("one-sided K={k} D={down}")
    } else {
        format!("two-sided K={k} U={up} D={down}")
    };
    Ok(ProblemSpec {
        k,
        wants: (1..=k).collect(),
        antidotes,
        label,
    })
}

/// The extension of a one-sided problem with `delta` antidotes: each message
/// becomes a block of `up + 1` components and the antidote window grows to
/// `up` messages before and `delta + up` after. With `up = 0` this is the
/// seed problem itself.
pub fn extended_problem(k: usize, up: usize, delta: usize) -> Result<ProblemSpec, Error> {
    if up == 0 {
        return one_sided_problem(k, delta);
    }
    let mut p = two_sided_problem(k, up, delta + up)?;
    p.label = format!(
        "extended K={k} U={up} D={delta} (blocks of {}, antidotes two-sided U={up} D={})",
        up + 1,
        delta + up
    );
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn wrap_canonical_range() {
        assert_eq!(wrap(21, 20), 1);
        assert_eq!(wrap(20, 20), 20);
        assert_eq!(wrap(0, 20), 20);
        assert_eq!(wrap(-1, 20), 19);
    }

    #[test]
    fn one_sided_wraps_around() {
        let p = one_sided_problem(20, 4).unwrap();
        assert_eq!(p.antidotes_of(17), &set(&[18, 19, 20, 1]));
        assert_eq!(p.wanted_by(17), 17);
    }

    #[test]
    fn one_sided_no_side_information() {
        let p = one_sided_problem(3, 0).unwrap();
        assert!(p.antidotes.iter().all(BTreeSet::is_empty));
    }

    #[test]
    fn one_sided_full_side_information() {
        let p = one_sided_problem(5, 4).unwrap();
        assert_eq!(p.antidotes_of(1), &set(&[2, 3, 4, 5]));
    }

    #[test]
    fn one_sided_rejects_oversized_window() {
        assert!(matches!(
            one_sided_problem(5, 5),
            Err(Error::AntidoteCount { .. })
        ));
    }

    #[test]
    fn two_sided_case_parameters() {
        let p = two_sided_problem(20, 1, 5).unwrap();
        assert_eq!(p.antidotes_of(1), &set(&[20, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn two_sided_degenerate_up_is_one_sided() {
        assert_eq!(
            two_sided_problem(4, 0, 2).unwrap(),
            one_sided_problem(4, 2).unwrap()
        );
    }

    #[test]
    fn two_sided_interior_receiver() {
        let p = two_sided_problem(19, 2, 7).unwrap();
        assert_eq!(
            p.antidotes_of(10),
            &set(&[8, 9, 11, 12, 13, 14, 15, 16, 17])
        );
    }

    #[test]
    fn extended_matches_two_sided_sets() {
        let e = extended_problem(20, 1, 4).unwrap();
        let t = two_sided_problem(20, 1, 5).unwrap();
        assert_eq!(e.antidotes, t.antidotes);

        let e3 = extended_problem(20, 3, 4).unwrap();
        let t3 = two_sided_problem(20, 3, 7).unwrap();
        assert_eq!(e3.antidotes, t3.antidotes);
    }

    #[test]
    fn extended_with_zero_up_is_seed_problem() {
        assert_eq!(
            extended_problem(20, 0, 4).unwrap(),
            one_sided_problem(20, 4).unwrap()
        );
    }

    #[test]
    fn generated_patterns_are_shift_invariant() {
        for (k, up, down) in [(20, 1, 5), (19, 2, 7), (7, 0, 3), (9, 3, 4)] {
            let p = two_sided_problem(k, up, down).unwrap();
            p.validate().unwrap();
            for r in 1..=k {
                assert_eq!(p.antidotes_of(r).len(), up + down);
                let shifted: BTreeSet<usize> = p
                    .antidotes_of(r)
                    .iter()
                    .map(|&m| wrap(m as i64 + 1, k))
                    .collect();
                assert_eq!(&shifted, p.antidotes_of(wrap(r as i64 + 1, k)));
            }
        }
    }

    #[test]
    fn symmetric_params_detection() {
        let p = two_sided_problem(20, 1, 5).unwrap();
        let params = p.symmetric_params().unwrap();
        assert_eq!((params.k, params.up, params.down), (20, 1, 5));

        let one = one_sided_problem(18, 5).unwrap();
        let params = one.symmetric_params().unwrap();
        assert_eq!((params.up, params.down), (0, 5));

        let mut lopsided = one_sided_problem(6, 2).unwrap();
        lopsided.antidotes[3].insert(2);
        assert!(lopsided.symmetric_params().is_none());
    }

    #[test]
    fn json_schema_round_trip() {
        let p = two_sided_problem(5, 1, 2).unwrap();
        let json = p.to_json().unwrap();
        assert!(json.contains("\"K\": 5"));
        assert!(json.contains("\"wants\""));
        assert!(json.contains("\"antidotes\""));
        assert!(json.contains("\"label\""));
        assert_eq!(ProblemSpec::from_json(&json).unwrap(), p);
    }

    #[test]
    fn from_json_rejects_invalid() {
        let bad = r#"{"K": 3, "wants": [1, 1, 3], "antidotes": [[], [], []], "label": ""}"#;
        assert!(ProblemSpec::from_json(bad).is_err());
        let own = r#"{"K": 2, "wants": [1, 2], "antidotes": [[1], []], "label": ""}"#;
        assert!(ProblemSpec::from_json(own).is_err());
    }
}
