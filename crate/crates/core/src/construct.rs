//! Capacity formulas and the explicit scalar code constructions.
//!
//! For a one-sided symmetric problem with `K` messages and `delta` antidotes
//! there are ten recognized parameter classes, each named by the
//! divisibility condition that makes its closed-form code work. Classes 5-10
//! additionally take an integer `lambda`. Class 4 is recognized but has no
//! closed form here; such codes can only be verified, not generated.
//!
//! Every generated code has exactly `K - delta` symbols, matching the
//! one-sided capacity `1/(K - delta)`.

use crate::code::{Component, LinearCode};
use crate::problem::wrap;
use crate::rational::Rational;
use crate::Error;
use serde::{Deserialize, Serialize};

/// Symmetric capacity of the two-sided pattern with `up` and `down`
/// antidotes per receiver: 1 when `up + down = K - 1`, otherwise
/// `(min+1) / (K + min - max)`.
pub fn capacity(k: usize, up: usize, down: usize) -> Result<Rational, Error> {
    if k == 0 || up + down >= k {
        return Err(Error::AntidoteCount { k, up, down });
    }
    if up + down == k - 1 {
        return Ok(Rational::one());
    }
    let lo = up.min(down) as i64;
    let hi = up.max(down) as i64;
    Ok(Rational::new(lo + 1, k as i64 + lo - hi))
}

/// The ten parameter classes, named by their divisibility conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum CodeClass {
    /// 1: `delta` divides `K`.
    DeltaDividesK,
    /// 2: `K - delta` divides `K`.
    LengthDividesK,
    /// 3: `K/2 - delta` divides `delta` (K even).
    HalfGapDividesDelta,
    /// 4: `delta - K/2` divides `K/2` (K even). Recognized, no construction.
    DeltaGapDividesHalf,
    /// 5: `delta` divides `K - lambda` and `lambda` divides `delta`.
    DeltaDividesKMinusLambda,
    /// 6: `K - delta` divides `K - lambda` and `lambda` divides `K - delta`.
    LengthDividesKMinusLambda,
    /// 7: `delta + lambda` divides `K` and `lambda` divides `delta`.
    DeltaPlusLambdaDividesK,
    /// 8: `K - delta + lambda` divides `K` and `lambda` divides `K - delta`.
    LengthPlusLambdaDividesK,
    /// 9: `delta` divides `K + lambda` and `lambda` divides `delta`.
    DeltaDividesKPlusLambda,
    /// 10: `K - delta` divides `K + lambda` and `lambda` divides `K - delta`.
    LengthDividesKPlusLambda,
}

pub const ALL_CLASSES: [CodeClass; 10] = [
    CodeClass::DeltaDividesK,
    CodeClass::LengthDividesK,
    CodeClass::HalfGapDividesDelta,
    CodeClass::DeltaGapDividesHalf,
    CodeClass::DeltaDividesKMinusLambda,
    CodeClass::LengthDividesKMinusLambda,
    CodeClass::DeltaPlusLambdaDividesK,
    CodeClass::LengthPlusLambdaDividesK,
    CodeClass::DeltaDividesKPlusLambda,
    CodeClass::LengthDividesKPlusLambda,
];

/// Classes with an implemented construction, in id order.
pub const CONSTRUCTIBLE_CLASSES: [CodeClass; 9] = [
    CodeClass::DeltaDividesK,
    CodeClass::LengthDividesK,
    CodeClass::HalfGapDividesDelta,
    CodeClass::DeltaDividesKMinusLambda,
    CodeClass::LengthDividesKMinusLambda,
    CodeClass::DeltaPlusLambdaDividesK,
    CodeClass::LengthPlusLambdaDividesK,
    CodeClass::DeltaDividesKPlusLambda,
    CodeClass::LengthDividesKPlusLambda,
];

impl CodeClass {
    /// Numeric id 1..=10.
    #[must_use]
    pub fn id(self) -> u8 {
        ALL_CLASSES.iter().position(|&c| c == self).unwrap() as u8 + 1
    }

    pub fn from_id(id: u8) -> Result<Self, Error> {
        ALL_CLASSES
            .get(id.checked_sub(1).map_or(usize::MAX, usize::from))
            .copied()
            .ok_or_else(|| {
                Error::ClassCondition(format!("unknown class id {id}; valid ids are 1..=10"))
            })
    }

    /// Whether the class takes a `lambda` parameter.
    #[must_use]
    pub fn uses_lambda(self) -> bool {
        self.id() >= 5
    }

    /// Whether a closed-form construction exists for the class.
    #[must_use]
    pub fn constructible(self) -> bool {
        self != CodeClass::DeltaGapDividesHalf
    }
}

impl TryFrom<u8> for CodeClass {
    type Error = Error;
    fn try_from(id: u8) -> Result<Self, Error> {
        Self::from_id(id)
    }
}

impl From<CodeClass> for u8 {
    fn from(c: CodeClass) -> u8 {
        c.id()
    }
}

/// Parameters of one construction instance. `lambda` is `None` for classes
/// 1-3 and must be a valid choice for classes 5-10.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub class: CodeClass,
    #[serde(rename = "K")]
    pub k: usize,
    pub delta: usize,
    pub lambda: Option<usize>,
}

impl ConstructionParams {
    pub fn new(class: CodeClass, k: usize, delta: usize, lambda: Option<usize>) -> Self {
        Self {
            class,
            k,
            delta,
            lambda,
        }
    }

    /// Length of the code this instance generates.
    #[must_use]
    pub fn code_length(&self) -> usize {
        self.k - self.delta
    }

    /// Checks the class's divisibility condition, resolving `lambda` if the
    /// class needs one. Returns the parameters with `lambda` filled in.
    pub fn resolved(&self) -> Result<Self, Error> {
        let (k, delta) = (self.k, self.delta);
        if delta == 0 || delta >= k {
            return Err(Error::ClassCondition(format!(
                "delta must satisfy 0 < delta < K (delta={delta}, K={k})"
            )));
        }
        if !self.class.uses_lambda() {
            if self.lambda.is_some() {
                return Err(Error::ClassCondition(format!(
                    "class {} takes no lambda",
                    self.class.id()
                )));
            }
            let ok = match self.class {
                CodeClass::DeltaDividesK => k % delta == 0,
                CodeClass::LengthDividesK => k % (k - delta) == 0,
                CodeClass::HalfGapDividesDelta => {
                    k % 2 == 0 && k / 2 > delta && delta % (k / 2 - delta) == 0
                }
                CodeClass::DeltaGapDividesHalf => {
                    k % 2 == 0 && delta > k / 2 && (k / 2) % (delta - k / 2) == 0
                }
                _ => unreachable!(),
            };
            if !ok {
                return Err(Error::ClassCondition(self.condition_failure()));
            }
            if self.class == CodeClass::DeltaGapDividesHalf {
                return Err(Error::ClassCondition(format!(
                    "class 4 (K={k}, delta={delta}) has no construction; verify user-supplied codes instead"
                )));
            }
            return Ok(*self);
        }
        let valid = valid_lambdas(self.class, k, delta);
        match self.lambda {
            Some(l) if valid.contains(&l) => Ok(*self),
            Some(l) => Err(Error::ClassCondition(format!(
                "{} (K={k}, delta={delta}, lambda={l})",
                self.condition_failure()
            ))),
            None => match valid.as_slice() {
                [] => Err(Error::ClassCondition(self.condition_failure())),
                [only] => Ok(Self {
                    lambda: Some(*only),
                    ..*self
                }),
                _ => Err(Error::LambdaRequired(valid)),
            },
        }
    }

    /// Human description of the failed divisibility for diagnostics.
    fn condition_failure(&self) -> String {
        let (k, delta) = (self.k, self.delta);
        let len = k.saturating_sub(delta);
        match self.class {
            CodeClass::DeltaDividesK => format!("{delta} does not divide {k}"),
            CodeClass::LengthDividesK => format!("{len} does not divide {k}"),
            CodeClass::HalfGapDividesDelta => {
                format!("K/2 - delta does not divide delta (K={k}, delta={delta})")
            }
            CodeClass::DeltaGapDividesHalf => {
                format!("delta - K/2 does not divide K/2 (K={k}, delta={delta})")
            }
            CodeClass::DeltaDividesKMinusLambda => format!(
                "no lambda with {delta} dividing {k}-lambda and lambda dividing {delta} (window at least 2 periods)"
            ),
            CodeClass::LengthDividesKMinusLambda => {
                format!("no lambda with {len} dividing {k}-lambda and lambda dividing {len}")
            }
            CodeClass::DeltaPlusLambdaDividesK => {
                format!("no lambda with {delta}+lambda dividing {k} and lambda dividing {delta}")
            }
            CodeClass::LengthPlusLambdaDividesK => {
                format!("no lambda with {len}+lambda dividing {k} and lambda dividing {len}")
            }
            CodeClass::DeltaDividesKPlusLambda => format!(
                "no lambda with {delta} dividing {k}+lambda and lambda dividing {delta} (at least 3 periods)"
            ),
            CodeClass::LengthDividesKPlusLambda => format!(
                "no lambda with {len} dividing {k}+lambda, lambda dividing {len}, and {len}/lambda at least 2"
            ),
        }
    }
}

/// All `lambda` values satisfying `class`'s condition for `(k, delta)`.
/// Empty for classes that take no lambda or when nothing fits.
#[must_use]
pub fn valid_lambdas(class: CodeClass, k: usize, delta: usize) -> Vec<usize> {
    if !class.uses_lambda() || delta == 0 || delta >= k {
        return Vec::new();
    }
    let len = k - delta;
    let divides = |d: usize, n: usize| d != 0 && n.is_multiple_of(d);
    (1..=k)
        .filter(|&lambda| match class {
            CodeClass::DeltaDividesKMinusLambda => {
                divides(lambda, delta)
                    && lambda < k
                    && divides(delta, k - lambda)
                    && (k - lambda) / delta >= 2
            }
            CodeClass::LengthDividesKMinusLambda => {
                divides(lambda, len) && lambda < k && divides(len, k - lambda)
            }
            CodeClass::DeltaPlusLambdaDividesK => {
                divides(lambda, delta) && divides(delta + lambda, k)
            }
            CodeClass::LengthPlusLambdaDividesK => divides(lambda, len) && divides(len + lambda, k),
            CodeClass::DeltaDividesKPlusLambda => {
                divides(lambda, delta) && divides(delta, k + lambda) && (k + lambda) / delta >= 3
            }
            CodeClass::LengthDividesKPlusLambda => {
                divides(lambda, len) && len / lambda >= 2 && divides(len, k + lambda)
            }
            _ => false,
        })
        .collect()
}

/// How (and whether) a class applies to `(k, delta)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassApplicability {
    pub class: CodeClass,
    /// Valid lambda choices; empty for the lambda-free classes 1-4.
    pub lambdas: Vec<usize>,
    /// False for class 4: the condition is recognized but nothing can be
    /// generated.
    pub constructible: bool,
}

/// Every class whose condition is satisfiable for `(k, delta)`, with the
/// lambda witnesses. Class 4 is reported as recognized-but-not-constructible.
#[must_use]
pub fn applicable_classes(k: usize, delta: usize) -> Vec<ClassApplicability> {
    let mut out = Vec::new();
    if delta == 0 || delta >= k {
        return out;
    }
    for class in ALL_CLASSES {
        if class.uses_lambda() {
            let lambdas = valid_lambdas(class, k, delta);
            if !lambdas.is_empty() {
                out.push(ClassApplicability {
                    class,
                    lambdas,
                    constructible: true,
                });
            }
        } else if ConstructionParams::new(class, k, delta, None)
            .resolved()
            .is_ok()
            || (class == CodeClass::DeltaGapDividesHalf
                && k.is_multiple_of(2)
                && delta > k / 2
                && (k / 2).is_multiple_of(delta - k / 2))
        {
            out.push(ClassApplicability {
                class,
                lambdas: Vec::new(),
                constructible: class.constructible(),
            });
        }
    }
    out
}

/// Every constructible instance with `2 <= K <= max_k`, for sweeps.
#[must_use]
pub fn all_instances(max_k: usize) -> Vec<ConstructionParams> {
    let mut out = Vec::new();
    for k in 2..=max_k {
        for delta in 1..k {
            for class in CONSTRUCTIBLE_CLASSES {
                if class.uses_lambda() {
                    for lambda in valid_lambdas(class, k, delta) {
                        out.push(ConstructionParams::new(class, k, delta, Some(lambda)));
                    }
                } else if ConstructionParams::new(class, k, delta, None)
                    .resolved()
                    .is_ok()
                {
                    out.push(ConstructionParams::new(class, k, delta, None));
                }
            }
        }
    }
    out
}

/// Builds the scalar code for a resolved parameter set: exactly `K - delta`
/// symbols over messages `y_1..y_K`, indices reduced cyclically into `1..=K`.
pub fn construct(params: &ConstructionParams) -> Result<LinearCode, Error> {
    let p = params.resolved()?;
    let (k, delta) = (p.k, p.delta);
    let lambda = p.lambda.unwrap_or(0);
    let rows: Vec<Vec<usize>> = match p.class {
        // Pairs one period apart: y_s + y_{s+delta} for s = 1..K-delta.
        CodeClass::DeltaDividesK => (1..=k - delta).map(|s| vec![s, s + delta]).collect(),

        // Full-period sums: m = K-delta starting points, n = K/m terms each.
        CodeClass::LengthDividesK => {
            let m = k - delta;
            let n = k / m;
            (1..=m)
                .map(|i| (0..n).map(|g| i + g * m).collect())
                .collect()
        }

        // m = K/2 - delta, p = delta/m: runs of p+1 terms spaced m, with the
        // window slid one step at a time.
        CodeClass::HalfGapDividesDelta => {
            let m = k / 2 - delta;
            let n = k / m;
            let p_ = delta / m;
            let mut rows = Vec::new();
            for j in 0..=(n - p_ - 1) {
                for i in 1..=m {
                    rows.push((0..=p_).map(|g| i + (j + g) * m).collect());
                }
            }
            rows
        }

        CodeClass::DeltaGapDividesHalf => unreachable!("rejected by resolved()"),

        // Pairs as in class 1 over the first K-lambda messages, plus lambda
        // tail rows chaining the remainder backwards with step lambda.
        CodeClass::DeltaDividesKMinusLambda => {
            let n = (k - lambda) / delta;
            let mut rows: Vec<Vec<usize>> =
                (1..=(n - 1) * delta).map(|s| vec![s, s + delta]).collect();
            for r in 1..=lambda {
                rows.push(
                    (0..=delta / lambda)
                        .map(|t| k - lambda + r - t * lambda)
                        .collect(),
                );
            }
            rows
        }

        // q = (K-lambda)/m chain terms spaced m, plus one tail symbol from
        // the last lambda messages.
        CodeClass::LengthDividesKMinusLambda => {
            let m = k - delta;
            let q = (k - lambda) / m;
            (1..=m)
                .map(|i| {
                    let mut row: Vec<usize> = (0..q).map(|g| i + g * m).collect();
                    row.push(q * m + 1 + (i - 1) % lambda);
                    row
                })
                .collect()
        }

        // Runs of delta/lambda + 1 terms spaced lambda, window slid by
        // lambda; lambda starting phases.
        CodeClass::DeltaPlusLambdaDividesK => {
            let p_ = delta / lambda;
            let mut rows = Vec::new();
            for j in 0..=(k - delta - lambda) / lambda {
                for i in 1..=lambda {
                    rows.push((0..=p_).map(|g| i + (j + g) * lambda).collect());
                }
            }
            rows
        }

        // p = K/(K-delta+lambda) close pairs spaced lambda, each pair
        // K-delta further along.
        CodeClass::LengthPlusLambdaDividesK => {
            let m = k - delta;
            let p_ = k / (m + lambda);
            (1..=m)
                .map(|i| {
                    let mut row = Vec::with_capacity(2 * p_);
                    for g in 0..p_ {
                        row.push(i + g * lambda + g * m);
                        row.push(i + (g + 1) * lambda + g * m);
                    }
                    row
                })
                .collect()
        }

        // Pairs covering n-2 periods, plus p = delta-lambda triple rows
        // tying the tail to the last lambda messages.
        CodeClass::DeltaDividesKPlusLambda => {
            let n = (k + lambda) / delta;
            let p_ = delta - lambda;
            let mut rows = Vec::new();
            for i in 1..=delta {
                for j in 1..=n - 2 {
                    rows.push(vec![i + (j - 1) * delta, i + j * delta]);
                }
            }
            for i in 0..p_ {
                rows.push(vec![
                    k - 2 * delta + 1 + lambda + i,
                    k - delta + 1 + i,
                    k - lambda + 1 + i % lambda,
                ]);
            }
            rows
        }

        // m = K-delta rows in three shapes depending on the starting point,
        // chains spaced m with a lambda-spaced tail.
        CodeClass::LengthDividesKPlusLambda => {
            let m = k - delta;
            let p_ = m - lambda;
            let q = (k + lambda) / m;
            let s = m / lambda;
            let mut rows = Vec::new();
            for start in 1..=lambda {
                let mut row: Vec<usize> = (0..q).map(|g| start + g * m).collect();
                row.extend((1..=s.saturating_sub(2)).map(|j| start + (q - 1) * m + j * lambda));
                rows.push(row);
            }
            for start in lambda + 1..=p_ {
                let mut row: Vec<usize> = (0..q - 1).map(|g| start + g * m).collect();
                row.push(start + (q - 1) * m - lambda);
                rows.push(row);
            }
            for start in p_ + 1..=m {
                let mut row: Vec<usize> = (0..q - 1).map(|g| start + g * m).collect();
                row.extend((1..=s - 1).map(|j| start + (q - 2) * m + j * lambda));
                rows.push(row);
            }
            rows
        }
    };

    let component_rows: Vec<Vec<Component>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&idx| Component(wrap(idx as i64, k), 1))
                .collect()
        })
        .collect();
    let code = LinearCode::from_rows(k, 1, &component_rows)?;
    debug_assert_eq!(
        code.len(),
        p.code_length(),
        "construction length must be K - delta"
    );
    Ok(code)
}
