use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::MaxPlus;
use crate::error::{Error, Result};
use crate::graph;

/// Tolerance used when deciding whether a maximum cycle mean is positive.
pub const LAMBDA_TOLERANCE: f64 = 1e-9;

/// Dense row-major matrix over the max-plus semiring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPlusMatrix {
    rows: usize,
    cols: usize,
    data: Vec<MaxPlus>,
}

impl MaxPlusMatrix {
    pub fn filled(rows: usize, cols: usize, value: MaxPlus) -> Self {
        MaxPlusMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn epsilon(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, MaxPlus::EPSILON)
    }

    /// Tropical identity: 0 on the diagonal, ε elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::epsilon(n, n);
        for i in 0..n {
            m.set(i, i, MaxPlus::ZERO);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<MaxPlus>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::EmptyMatrix);
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    c
                )));
            }
            data.extend(row);
        }
        Ok(MaxPlusMatrix { rows: r, cols: c, data })
    }

    /// `None` is ε.
    pub fn from_options(rows: &[Vec<Option<f64>>]) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, x) in row.iter().enumerate() {
                r.push(MaxPlus::from_option(*x).map_err(|reason| Error::InvalidEntry {
                    row: i,
                    col: j,
                    reason: reason.to_string(),
                })?);
            }
            out.push(r);
        }
        Self::from_rows(out)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> MaxPlus) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MaxPlusMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> MaxPlus {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: MaxPlus) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[MaxPlus] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<MaxPlus> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, MaxPlus)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, &x)| (k / self.cols, k % self.cols, x))
    }

    pub fn to_options(&self) -> Vec<Vec<Option<f64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.value()).collect())
            .collect()
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(self.mismatch(other, op))
        }
    }

    fn mismatch(&self, other: &Self, op: &'static str) -> Error {
        Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// `(A ⊗ B)_{ij} = max_k a_{ik} + b_{kj}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(self.mismatch(other, "multiply"));
        }
        let mut out = Self::epsilon(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_epsilon() {
                    continue;
                }
                for (j, slot) in out_row.iter_mut().enumerate() {
                    let p = a.otimes(other.data[k * other.cols + j]);
                    if p > *slot {
                        *slot = p;
                    }
                }
            }
        }
        Ok(out)
    }

    /// k-fold product; `A^0 = I`.
    pub fn power(&self, k: usize) -> Result<Self> {
        let n = self.require_square()?;
        let mut result = Self::identity(n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(result)
    }

    /// Entrywise maximum.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "oplus")?;
        Ok(self.zip_with(other, MaxPlus::oplus))
    }

    /// Entrywise minimum.
    pub fn entrywise_min(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "entrywise_min")?;
        Ok(self.zip_with(other, MaxPlus::min))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(MaxPlus, MaxPlus) -> MaxPlus) -> Self {
        MaxPlusMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(MaxPlus) -> MaxPlus) -> Self {
        MaxPlusMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Multiplies every entry by the scalar `c`, i.e. adds `c` to finite entries.
    pub fn scale(&self, c: MaxPlus) -> Self {
        self.map(|x| x.otimes(c))
    }

    /// `X⁻¹ A X` with `X = diag(x)`: entry `a_ij - x_i + x_j`. All of `x` must be finite.
    pub fn diagonal_similarity(&self, x: &[f64]) -> Result<Self> {
        let n = self.require_square()?;
        if x.len() != n || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition(
                "scaling vector must be finite with one entry per node".into(),
            ));
        }
        Ok(Self::from_fn(n, n, |i, j| {
            self.get(i, j).otimes(MaxPlus::finite(x[j] - x[i]))
        }))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise `≤`.
    pub fn le(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    /// Row-major first position where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.cols, k % self.cols))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(*b, tol))
    }

    /// Finiteness pattern, row-major.
    pub fn support(&self) -> Vec<bool> {
        self.data.iter().map(|x| x.is_finite()).collect()
    }

    pub fn same_support(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.is_finite() == b.is_finite())
    }

    pub fn max_entry(&self) -> MaxPlus {
        self.data.iter().copied().fold(MaxPlus::EPSILON, MaxPlus::oplus)
    }

    /// Submatrix keeping the listed columns in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// Submatrix keeping the listed rows in order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j))
    }

    /// `I ⊕ A ⊕ … ⊕ A^{n-1}`; requires `λ(A) ≤ 0`.
    pub fn kleene_star(&self) -> Result<Self> {
        self.require_square()?;
        self.require_nonpositive_lambda()?;
        Ok(self.star_unchecked())
    }

    /// `A ⊗ A*`; requires `λ(A) ≤ 0`.
    pub fn metric_matrix(&self) -> Result<Self> {
        let star = self.kleene_star()?;
        self.multiply(&star)
    }

    fn require_nonpositive_lambda(&self) -> Result<()> {
        if let Some(lambda) = graph::matrix_max_cycle_mean(self)?.value() {
            if lambda > LAMBDA_TOLERANCE {
                return Err(Error::Divergent { lambda });
            }
        }
        Ok(())
    }

    pub(crate) fn star_unchecked(&self) -> Self {
        let n = self.rows;
        let mut sum = Self::identity(n);
        let mut p = Self::identity(n);
        for _ in 1..n {
            p = p.multiply(self).expect("square");
            sum = sum.zip_with(&p, MaxPlus::oplus);
        }
        sum
    }

    pub(crate) fn metric_unchecked(&self) -> Self {
        self.multiply(&self.star_unchecked()).expect("square")
    }
}

impl Index<(usize, usize)> for MaxPlusMatrix {
    type Output = MaxPlus;

    fn index(&self, (i, j): (usize, usize)) -> &MaxPlus {
        &self.data[i * self.cols + j]
    }
}

/// Whitespace-separated grid, one row per line or `;`. `e`, `ε` and `-inf` denote ε.
impl FromStr for MaxPlusMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in s.split(['\n', ';']) {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let tok = tok.trim_matches(',');
                let value = match tok {
                    "e" | "ε" | "eps" | "-inf" => MaxPlus::EPSILON,
                    _ => {
                        let x: f64 = tok
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad matrix entry `{tok}`")))?;
                        MaxPlus::try_from_f64(x).map_err(|e| Error::Parse(e.to_string()))?
                    }
                };
                row.push(value);
            }
            rows.push(row);
        }
        Self::from_rows(rows)
    }
}

impl fmt::Display for MaxPlusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<MaxPlus>>,
}

impl Serialize for MaxPlusMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MaxPlusMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(D::Error::custom(format!(
                "entries do not form a {}x{} grid",
                raw.rows, raw.cols
            )));
        }
        MaxPlusMatrix::from_rows(raw.entries).map_err(D::Error::custom)
    }
}
