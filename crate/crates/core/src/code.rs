//! Linear index codes over GF(2).
//!
//! A code is a list of transmitted symbols, each a GF(2) sum of message
//! components. Message `k` contributes `t` components `(k, 1)..(k, t)`;
//! scalar codes have `t = 1`. Columns are ordered message-major, so
//! component `(k, i)` maps to column `(k-1)*t + (i-1)`.

use crate::gf2::{BitMatrix, BitVec};
use crate::problem::wrap;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::fmt;

/// One message component `(k, i)`: component `i` of message `k`, both
/// 1-based. Serializes as the two-element array `[k, i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Component(pub usize, pub usize);

impl Component {
    #[must_use]
    pub const fn message(&self) -> usize {
        self.0
    }

    #[must_use]
    pub const fn index(&self) -> usize {
        self.1
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x_{{{},{}}}", self.0, self.1)
    }
}

/// A linear code: `len()` symbols over `K * t` message-component columns.
///
/// Every symbol transmits something (no zero rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    k: usize,
    t: usize,
    matrix: BitMatrix,
}

/// Serialized form: `{"K": .., "t": .., "rows": [[[k, i], ..], ..]}`.
#[derive(Serialize, Deserialize)]
struct CodeJson {
    #[serde(rename = "K")]
    k: usize,
    t: usize,
    rows: Vec<Vec<Component>>,
}

impl LinearCode {
    /// Wraps a bit matrix as a code over `k` messages of `t` components.
    pub fn new(k: usize, t: usize, matrix: BitMatrix) -> Result<Self, Error> {
        if t == 0 || k == 0 {
            return Err(Error::InvalidCode(format!(
                "degenerate dimensions K={k}, t={t}"
            )));
        }
        if matrix.num_cols() != k * t {
            return Err(Error::InvalidCode(format!(
                "matrix has {} columns, expected K*t = {}",
                matrix.num_cols(),
                k * t
            )));
        }
        if let Some(r) = matrix.rows().position(BitVec::is_zero) {
            return Err(Error::InvalidCode(format!(
                "symbol {r} transmits nothing (zero row)"
            )));
        }
        Ok(Self { k, t, matrix })
    }

    /// Builds a code from rows given as component lists. Components must be
    /// in range; repeated components within a row cancel over GF(2).
    pub fn from_rows(k: usize, t: usize, rows: &[Vec<Component>]) -> Result<Self, Error> {
        let mut matrix = BitMatrix::zeros(0, k * t);
        for row in rows {
            let mut bits = BitVec::zeros(k * t);
            for &c in row {
                if c.message() < 1 || c.message() > k || c.index() < 1 || c.index() > t {
                    return Err(Error::InvalidCode(format!(
                        "component {c} outside K={k}, t={t}"
                    )));
                }
                bits.flip(column_of(c, t));
            }
            matrix.push_row(bits);
        }
        Self::new(k, t, matrix)
    }

    /// Number of transmitted symbols (code length `l`).
    #[must_use]
    pub fn len(&self) -> usize {
        self.matrix.num_rows()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of messages `K`.
    #[must_use]
    pub const fn num_messages(&self) -> usize {
        self.k
    }

    /// Components per message `t` (1 for scalar codes).
    #[must_use]
    pub const fn block_size(&self) -> usize {
        self.t
    }

    #[must_use]
    pub const fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// The components of symbol `r`, ascending by `(message, index)`.
    #[must_use]
    pub fn row_components(&self, r: usize) -> Vec<Component> {
        self.matrix
            .row(r)
            .ones()
            .map(|c| self.component_of(c))
            .collect()
    }

    /// All rows as component lists.
    #[must_use]
    pub fn rows(&self) -> Vec<Vec<Component>> {
        (0..self.len()).map(|r| self.row_components(r)).collect()
    }

    #[must_use]
    pub fn column_of(&self, c: Component) -> usize {
        column_of(c, self.t)
    }

    #[must_use]
    pub fn component_of(&self, column: usize) -> Component {
        Component(column / self.t + 1, column % self.t + 1)
    }

    /// Relabels every component `(m, i)` to `(K - m, i)` (message `K` stays
    /// put), reversing the cyclic orientation of the message indices.
    #[must_use]
    pub fn mirror(&self) -> Self {
        let rows: Vec<Vec<Component>> = self
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| Component(wrap(-(c.message() as i64), self.k), c.index()))
                    .collect()
            })
            .collect();
        Self::from_rows(self.k, self.t, &rows).expect("mirroring preserves validity")
    }

    pub fn to_json(&self) -> Result<String, Error> {
        let doc = CodeJson {
            k: self.k,
            t: self.t,
            rows: self.rows(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let doc: CodeJson = serde_json::from_str(s)?;
        Self::from_rows(doc.k, doc.t, &doc.rows)
    }

    /// Dense text form: one row per line of `0`/`1` characters, columns in
    /// `(message, component)` order.
    #[must_use]
    pub fn to_matrix_text(&self) -> String {
        let mut out = String::with_capacity(self.len() * (self.k * self.t + 1));
        for r in 0..self.len() {
            let row = self.matrix.row(r);
            for c in 0..self.k * self.t {
                out.push(if row.get(c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

fn column_of(c: Component, t: usize) -> usize {
    (c.message() - 1) * t + (c.index() - 1)
}
