//! Dense matrices over GF(2^m) with just enough linear algebra for erasure
//! decoding: rank, solving, and CSV round-tripping.

use std::io::{BufRead, BufReader, Read, Write};

use super::gf::GfField;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u16>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols));
        Self {
            rows: rows.len(),
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&Matrix]) -> Self {
        let cols = parts.iter().find(|m| m.rows > 0).map_or(0, |m| m.cols);
        assert!(parts.iter().all(|m| m.rows == 0 || m.cols == cols));
        let mut data = Vec::new();
        let mut rows = 0;
        for part in parts {
            data.extend_from_slice(&part.data);
            rows += part.rows;
        }
        Self { rows, cols, data }
    }

    /// `x * self` for a row vector `x` of length `self.rows`.
    pub fn left_mul(&self, field: &GfField, x: &[u16]) -> Vec<u16> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0u16; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = field.add(*o, field.mul(xr, self.get(r, c)));
            }
        }
        out
    }

    pub fn rank(&self, field: &GfField) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            if rank == work.rows {
                break;
            }
            let pivot = (rank..work.rows).find(|&r| work.get(r, col) != 0);
            let Some(pivot) = pivot else { continue };
            work.swap_rows(rank, pivot);
            let inv = field.inv(work.get(rank, col));
            for c in col..work.cols {
                work.set(rank, c, field.mul(inv, work.get(rank, c)));
            }
            for r in 0..work.rows {
                if r != rank && work.get(r, col) != 0 {
                    let factor = work.get(r, col);
                    for c in col..work.cols {
                        let v = field.add(work.get(r, c), field.mul(factor, work.get(rank, c)));
                        work.set(r, c, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Writes the matrix as CSV: a `rows,cols` header line followed by
    /// row-major integer values.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{},{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut lines = BufReader::new(input).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty matrix CSV".into()))??;
        let dims: Vec<usize> = header
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidParameter(format!("bad matrix header `{header}`")))?;
        if dims.len() != 2 {
            return Err(Error::InvalidParameter("matrix header must be `rows,cols`".into()));
        }
        let (rows, cols) = (dims[0], dims[1]);
        let mut data = Vec::with_capacity(rows * cols);
        for line in lines.take(rows) {
            let line = line?;
            for cell in line.split(',') {
                let v: u16 = cell
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad matrix value `{cell}`")))?;
                data.push(v);
            }
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "matrix CSV has {} values, expected {}",
                data.len(),
                rows * cols
            )));
        }
        Ok(Self { rows, cols, data })
    }
}

/// Solves `x * a = b` for a row vector `x` of length `a.rows()`.
///
/// `a` is dim x s with `s` surviving positions. Succeeds iff the columns span
/// rank `a.rows()`. Surplus equations must be consistent; a contradiction
/// means corrupted known positions, which an erasure channel cannot produce,
/// and is reported as `InconsistentSystem`.
pub fn solve_left(field: &GfField, a: &Matrix, b: &[u16]) -> Result<Vec<u16>> {
    assert_eq!(b.len(), a.cols());
    let dim = a.rows();
    // Augmented system over the transpose: columns of `a` become equations.
    let mut aug = Matrix::zeros(a.cols(), dim + 1);
    for (c, &rhs) in b.iter().enumerate() {
        for r in 0..dim {
            aug.set(c, r, a.get(r, c));
        }
        aug.set(c, dim, rhs);
    }

    let mut pivot_rows = Vec::with_capacity(dim);
    let mut row = 0;
    for col in 0..dim {
        let Some(pivot) = (row..aug.rows()).find(|&r| aug.get(r, col) != 0) else {
            continue;
        };
        aug.swap_rows(row, pivot);
        let inv = field.inv(aug.get(row, col));
        for c in col..=dim {
            aug.set(row, c, field.mul(inv, aug.get(row, c)));
        }
        for r in 0..aug.rows() {
            if r != row && aug.get(r, col) != 0 {
                let factor = aug.get(r, col);
                for c in col..=dim {
                    let v = field.add(aug.get(r, c), field.mul(factor, aug.get(row, c)));
                    aug.set(r, c, v);
                }
            }
        }
        pivot_rows.push((row, col));
        row += 1;
    }

    if pivot_rows.len() < dim {
        return Err(Error::RankDeficient {
            have: pivot_rows.len(),
            need: dim,
        });
    }
    // Remaining equations reduced to 0 = rhs; any nonzero rhs is a contradiction.
    for r in row..aug.rows() {
        if aug.get(r, dim) != 0 {
            return Err(Error::InconsistentSystem);
        }
    }
    let mut x = vec![0u16; dim];
    for (r, col) in pivot_rows {
        x[col] = aug.get(r, dim);
    }
    Ok(x)
}
