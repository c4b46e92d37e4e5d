//! Sparse matrices over F_q with exact arithmetic and a deterministic
//! text format ("SPFQ 1").
//!
//! Storage is coordinate triples sorted row-major; a row-pointer index is
//! built on demand where row access matters (multiplication). Matrices are
//! immutable once constructed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::rng::Xoshiro256StarStar;

/// Sparse matrix over a prime field. Only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    /// (row, col, value), strictly sorted row-major, values in [1, q).
    entries: Vec<(usize, usize, u64)>,
}

impl SparseMatrix {
    /// All-zero matrix.
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(Self {
            field,
            rows,
            cols,
            entries: Vec::new(),
        })
    }

    pub fn identity(field: PrimeField, dim: usize) -> Result<Self> {
        let mut m = Self::zero(field, dim, dim)?;
        m.entries = (0..dim).map(|i| (i, i, 1)).collect();
        Ok(m)
    }

    /// Builds from triples that must already be strictly sorted row-major,
    /// in bounds, without duplicates, and with values in [1, q).
    pub fn from_triplets(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: Vec<(usize, usize, u64)>,
    ) -> Result<Self> {
        let m = Self {
            field,
            rows,
            cols,
            entries,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds from triples in any order; duplicates are an error.
    pub fn from_unsorted_triplets(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, u64)>,
    ) -> Result<Self> {
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Self::from_triplets(field, rows, cols, entries)
    }

    /// Builds from a dense row-major table (zeros dropped).
    pub fn from_dense(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidMatrix("dense table must be non-empty".into()));
        }
        let cols = rows[0].len();
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidMatrix("ragged dense table".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    entries.push((i, j, v));
                }
            }
        }
        Self::from_triplets(field, rows.len(), cols, entries)
    }

    fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "dimensions must be positive, got {}x{}",
                self.rows, self.cols
            )));
        }
        let q = self.field.modulus();
        let mut prev: Option<(usize, usize)> = None;
        for &(r, c, v) in &self.entries {
            if r >= self.rows || c >= self.cols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({r}, {c}) outside {}x{}",
                    self.rows, self.cols
                )));
            }
            if v == 0 || v >= q {
                return Err(Error::InvalidMatrix(format!(
                    "stored value {v} outside [1, {q})"
                )));
            }
            if let Some(p) = prev {
                if (r, c) <= p {
                    return Err(Error::InvalidMatrix(format!(
                        "entries not strictly sorted row-major at ({r}, {c})"
                    )));
                }
            }
            prev = Some((r, c));
        }
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        match self
            .entries
            .binary_search_by_key(&(row, col), |&(r, c, _)| (r, c))
        {
            Ok(i) => self.entries[i].2,
            Err(_) => 0,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut d = vec![vec![0u64; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            d[r][c] = v;
        }
        d
    }

    /// Fraction of zero entries: (k*m - nnz) / (k*m).
    pub fn empirical_sparsity(&self) -> f64 {
        let total = (self.rows * self.cols) as f64;
        (total - self.nnz() as f64) / total
    }

    /// Offsets of each row's slice in `entries` (built on demand).
    fn row_ptr(&self) -> Vec<usize> {
        let mut ptr = vec![0usize; self.rows + 1];
        for &(r, _, _) in &self.entries {
            ptr[r + 1] += 1;
        }
        for i in 0..self.rows {
            ptr[i + 1] += ptr[i];
        }
        ptr
    }

    /// `self + scalar * rhs`, elementwise in F_q (merge of sorted triples).
    pub fn add_scaled(&self, rhs: &SparseMatrix, scalar: u64) -> Result<SparseMatrix> {
        self.field.check_same(&rhs.field)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let scalar = scalar % f.modulus();
        let mut entries = Vec::with_capacity(self.nnz() + rhs.nnz());
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.entries.len() || j < rhs.entries.len() {
            let left = self.entries.get(i).map(|&(r, c, _)| (r, c));
            let right = rhs.entries.get(j).map(|&(r, c, _)| (r, c));
            let v = match (left, right) {
                (Some(l), Some(r)) if l == r => {
                    let v = f.add(self.entries[i].2, f.mul(scalar, rhs.entries[j].2));
                    i += 1;
                    j += 1;
                    (l, v)
                }
                (Some(l), Some(r)) if l < r => {
                    let v = self.entries[i].2;
                    i += 1;
                    (l, v)
                }
                (Some(_), Some(r)) => {
                    let v = f.mul(scalar, rhs.entries[j].2);
                    j += 1;
                    (r, v)
                }
                (Some(l), None) => {
                    let v = self.entries[i].2;
                    i += 1;
                    (l, v)
                }
                (None, Some(r)) => {
                    let v = f.mul(scalar, rhs.entries[j].2);
                    j += 1;
                    (r, v)
                }
                (None, None) => unreachable!(),
            };
            if v.1 != 0 {
                entries.push((v.0 .0, v.0 .1, v.1));
            }
        }
        Ok(SparseMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(rhs, 1)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(rhs, self.field.neg(1 % self.field.modulus()))
    }

    pub fn scale(&self, scalar: u64) -> SparseMatrix {
        let f = self.field;
        let scalar = scalar % f.modulus();
        let entries = self
            .entries
            .iter()
            .filter_map(|&(r, c, v)| {
                let w = f.mul(scalar, v);
                (w != 0).then_some((r, c, w))
            })
            .collect();
        SparseMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Exact sparse product, row-wise accumulation. Work is proportional to
    /// the sum over nonzeros (i, k) of `self` of nnz(rhs row k).
    pub fn sp_mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.field.check_same(&rhs.field)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "inner dimensions differ: {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let rptr = rhs.row_ptr();
        let mut scratch = vec![0u64; rhs.cols];
        let mut seen = vec![false; rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut entries = Vec::new();

        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            let row_end = {
                let mut e = i;
                while e < self.entries.len() && self.entries[e].0 == row {
                    e += 1;
                }
                e
            };
            for &(_, k, v) in &self.entries[i..row_end] {
                for &(_, j, w) in &rhs.entries[rptr[k]..rptr[k + 1]] {
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    scratch[j] = f.add(scratch[j], f.mul(v, w));
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                if scratch[j] != 0 {
                    entries.push((row, j, scratch[j]));
                }
                scratch[j] = 0;
                seen[j] = false;
            }
            touched.clear();
            i = row_end;
        }
        Ok(SparseMatrix {
            field: f,
            rows: self.rows,
            cols: rhs.cols,
            entries,
        })
    }

    /// Multiply-add count the sparse product would perform; the simulator's
    /// cost proxy.
    pub fn mul_work(&self, rhs: &SparseMatrix) -> Result<u64> {
        self.field.check_same(&rhs.field)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "inner dimensions differ: {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let rptr = rhs.row_ptr();
        Ok(self
            .entries
            .iter()
            .map(|&(_, k, _)| (rptr[k + 1] - rptr[k]) as u64)
            .sum())
    }

    /// Writes the "SPFQ 1" text format (UTF-8, LF line endings).
    pub fn write_spfq(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        writeln!(out, "SPFQ 1").unwrap();
        writeln!(
            out,
            "{} {} {} {}",
            self.field.modulus(),
            self.rows,
            self.cols,
            self.nnz()
        )
        .unwrap();
        for &(r, c, v) in &self.entries {
            writeln!(out, "{r} {c} {v}").unwrap();
        }
        fs::write(path, out)?;
        Ok(())
    }

    /// Reads the "SPFQ 1" text format.
    pub fn read_spfq(path: &Path) -> Result<Self> {
        let fail = |msg: String| Error::Format {
            path: path.to_path_buf(),
            msg,
        };
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines();
        match lines.next() {
            Some("SPFQ 1") => {}
            other => return Err(fail(format!("bad magic line {other:?}, expected \"SPFQ 1\""))),
        }
        let header = lines
            .next()
            .ok_or_else(|| fail("missing header line".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(fail(format!("header must be \"q k m nnz\", got {header:?}")));
        }
        let q: u64 = fields[0]
            .parse()
            .map_err(|_| fail(format!("bad q {:?}", fields[0])))?;
        let rows: usize = fields[1]
            .parse()
            .map_err(|_| fail(format!("bad row count {:?}", fields[1])))?;
        let cols: usize = fields[2]
            .parse()
            .map_err(|_| fail(format!("bad column count {:?}", fields[2])))?;
        let nnz: usize = fields[3]
            .parse()
            .map_err(|_| fail(format!("bad nnz {:?}", fields[3])))?;
        let field = PrimeField::new(q)?;
        let mut entries = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let line = lines
                .next()
                .ok_or_else(|| fail(format!("expected {nnz} entry lines")))?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(fail(format!("entry line must be \"row col value\", got {line:?}")));
            }
            let r: usize = parts[0]
                .parse()
                .map_err(|_| fail(format!("bad row index {:?}", parts[0])))?;
            let c: usize = parts[1]
                .parse()
                .map_err(|_| fail(format!("bad column index {:?}", parts[1])))?;
            let v: u64 = parts[2]
                .parse()
                .map_err(|_| fail(format!("bad value {:?}", parts[2])))?;
            entries.push((r, c, v));
        }
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(fail(format!("trailing content {extra:?}")));
        }
        Self::from_triplets(field, rows, cols, entries).map_err(|e| fail(e.to_string()))
    }
}

/// Entry distribution of a source matrix: Pr(0) = s, the remaining mass
/// uniform over the q-1 nonzero symbols.
#[derive(Debug, Clone, Copy)]
pub struct SourceModel {
    field: PrimeField,
    s: f64,
}

impl SourceModel {
    pub fn new(field: PrimeField, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidProbability {
                name: "s",
                value: s,
            });
        }
        Ok(Self { field, s })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn sparsity(&self) -> f64 {
        self.s
    }

    /// The entry PMF as a dense vector indexed by field value.
    pub fn entry_pmf(&self) -> Vec<f64> {
        let q = self.field.modulus() as usize;
        let mut p = vec![(1.0 - self.s) / (q as f64 - 1.0); q];
        p[0] = self.s;
        p
    }

    pub fn entry_prob(&self, a: u64) -> f64 {
        if a == 0 {
            self.s
        } else {
            (1.0 - self.s) / (self.field.modulus() as f64 - 1.0)
        }
    }
}

/// Samples a matrix with i.i.d. entries from the source model.
///
/// One PRNG stream, row-major draw order, inverse-CDF per entry with
/// categories ordered [0, 1, 2, ..., q-1]; deterministic given the seed.
pub fn sample_source_matrix(
    model: &SourceModel,
    rows: usize,
    cols: usize,
    seed: u64,
) -> Result<SparseMatrix> {
    let field = model.field();
    let q = field.modulus();
    let s = model.sparsity();
    let nonzero_mass = (1.0 - s) / (q as f64 - 1.0);
    let mut rng = Xoshiro256StarStar::from_seed(seed);
    let mut entries = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let u = rng.next_f64();
            if u < s || nonzero_mass <= 0.0 {
                continue;
            }
            let k = ((u - s) / nonzero_mass) as u64;
            entries.push((r, c, 1 + k.min(q - 2)));
        }
    }
    SparseMatrix::from_triplets(field, rows, cols, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn dense_mul_reference(a: &SparseMatrix, b: &SparseMatrix) -> Vec<Vec<u64>> {
        let fld = a.field();
        let (ad, bd) = (a.to_dense(), b.to_dense());
        let mut out = vec![vec![0u64; b.cols()]; a.rows()];
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = 0u64;
                for k in 0..a.cols() {
                    acc = fld.add(acc, fld.mul(ad[i][k], bd[k][j]));
                }
                out[i][j] = acc;
            }
        }
        out
    }

    #[test]
    fn identity_multiplication() {
        let fld = f(89);
        let b = SparseMatrix::from_dense(fld, &[vec![3, 0, 7], vec![0, 0, 1], vec![5, 2, 0]])
            .unwrap();
        let id = SparseMatrix::identity(fld, 3).unwrap();
        assert_eq!(id.sp_mul(&b).unwrap(), b);
    }

    #[test]
    fn zero_times_anything_is_zero() {
        let fld = f(89);
        let a = SparseMatrix::zero(fld, 4, 3).unwrap();
        let b = SparseMatrix::from_dense(fld, &[vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let c = a.sp_mul(&b).unwrap();
        assert_eq!(c.nnz(), 0);
        assert_eq!((c.rows(), c.cols()), (4, 2));
    }

    #[test]
    fn two_by_two_product_mod_7() {
        let fld = f(7);
        let a = SparseMatrix::from_dense(fld, &[vec![1, 2], vec![0, 3]]).unwrap();
        let b = SparseMatrix::from_dense(fld, &[vec![4, 0], vec![5, 6]]).unwrap();
        let c = a.sp_mul(&b).unwrap();
        assert_eq!(c.to_dense(), vec![vec![0, 5], vec![1, 4]]);
    }

    #[test]
    fn sp_mul_matches_dense_reference_on_random_matrices() {
        let mut rng = Xoshiro256StarStar::from_seed(21);
        for q in [2u64, 7, 89, 5081] {
            let fld = f(q);
            for trial in 0..8 {
                let (k, l, m) = (
                    1 + (trial * 3) % 30,
                    1 + (trial * 7 + 2) % 30,
                    1 + (trial * 5 + 4) % 30,
                );
                let model = SourceModel::new(fld, 0.6).unwrap();
                let a = sample_source_matrix(&model, k, l, rng.next_u64()).unwrap();
                let b = sample_source_matrix(&model, l, m, rng.next_u64()).unwrap();
                assert_eq!(a.sp_mul(&b).unwrap().to_dense(), dense_mul_reference(&a, &b));
            }
        }
    }

    #[test]
    fn mul_work_counts_row_matches() {
        let fld = f(7);
        let a = SparseMatrix::from_dense(fld, &[vec![1, 2], vec![0, 3]]).unwrap();
        let b = SparseMatrix::from_dense(fld, &[vec![4, 0], vec![5, 6]]).unwrap();
        // entries of a: (0,0),(0,1),(1,1); rows of b have nnz 1 and 2.
        assert_eq!(a.mul_work(&b).unwrap(), 1 + 2 + 2);
    }

    #[test]
    fn add_scaled_and_scale() {
        let fld = f(7);
        let a = SparseMatrix::from_dense(fld, &[vec![3, 0], vec![1, 2]]).unwrap();
        let b = SparseMatrix::from_dense(fld, &[vec![2, 5], vec![0, 6]]).unwrap();
        let c = a.add_scaled(&b, 3).unwrap();
        assert_eq!(c.to_dense(), vec![vec![2, 1], vec![1, 6]]);
        // cancellation drops entries
        let d = a.sub(&a).unwrap();
        assert_eq!(d.nnz(), 0);
        assert_eq!(a.scale(0).nnz(), 0);
        assert_eq!(a.scale(2).to_dense(), vec![vec![6, 0], vec![2, 4]]);
    }

    #[test]
    fn empirical_sparsity_values() {
        let fld = f(89);
        assert_eq!(
            SparseMatrix::zero(fld, 5, 4).unwrap().empirical_sparsity(),
            1.0
        );
        let dense = SparseMatrix::from_dense(fld, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(dense.empirical_sparsity(), 0.0);
        let mut entries = Vec::new();
        for i in 0..37 {
            entries.push((i / 10, i % 10, 1u64));
        }
        let m = SparseMatrix::from_unsorted_triplets(fld, 10, 10, entries).unwrap();
        assert!((m.empirical_sparsity() - 0.63).abs() < 1e-15);
    }

    #[test]
    fn construction_rejects_bad_triples() {
        let fld = f(7);
        assert!(SparseMatrix::from_triplets(fld, 2, 2, vec![(0, 0, 7)]).is_err());
        assert!(SparseMatrix::from_triplets(fld, 2, 2, vec![(0, 0, 0)]).is_err());
        assert!(SparseMatrix::from_triplets(fld, 2, 2, vec![(2, 0, 1)]).is_err());
        assert!(
            SparseMatrix::from_triplets(fld, 2, 2, vec![(0, 1, 1), (0, 0, 1)]).is_err(),
            "unsorted"
        );
        assert!(
            SparseMatrix::from_triplets(fld, 2, 2, vec![(0, 0, 1), (0, 0, 2)]).is_err(),
            "duplicate"
        );
        assert!(SparseMatrix::zero(fld, 0, 3).is_err());
    }

    #[test]
    fn sampling_degenerate_sparsities() {
        let fld = f(89);
        let all_zero =
            sample_source_matrix(&SourceModel::new(fld, 1.0).unwrap(), 20, 20, 5).unwrap();
        assert_eq!(all_zero.nnz(), 0);
        let f2 = f(2);
        let all_ones =
            sample_source_matrix(&SourceModel::new(f2, 0.0).unwrap(), 13, 9, 5).unwrap();
        assert_eq!(all_ones.nnz(), 13 * 9);
        assert!(all_ones.iter().all(|(_, _, v)| v == 1));
    }

    #[test]
    fn sampling_hits_requested_sparsity() {
        let fld = f(89);
        let model = SourceModel::new(fld, 0.95).unwrap();
        let m = sample_source_matrix(&model, 1000, 1000, 42).unwrap();
        let n = 1_000_000f64;
        let sigma = (0.95f64 * 0.05 / n).sqrt();
        assert!(
            (m.empirical_sparsity() - 0.95).abs() < 3.0 * sigma,
            "sparsity {} too far from 0.95",
            m.empirical_sparsity()
        );
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let fld = f(89);
        let model = SourceModel::new(fld, 0.8).unwrap();
        let a = sample_source_matrix(&model, 50, 50, 7).unwrap();
        let b = sample_source_matrix(&model, 50, 50, 7).unwrap();
        let c = sample_source_matrix(&model, 50, 50, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn spfq_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.spfq");
        let fld = f(89);
        let model = SourceModel::new(fld, 0.7).unwrap();
        let m = sample_source_matrix(&model, 17, 23, 3).unwrap();
        m.write_spfq(&path).unwrap();
        assert_eq!(SparseMatrix::read_spfq(&path).unwrap(), m);

        let empty = SparseMatrix::zero(fld, 3, 3).unwrap();
        empty.write_spfq(&path).unwrap();
        assert_eq!(SparseMatrix::read_spfq(&path).unwrap(), empty);
    }

    #[test]
    fn spfq_parse_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.spfq");

        fs::write(&path, "SPFQ 2\n89 1 1 0\n").unwrap();
        assert!(matches!(
            SparseMatrix::read_spfq(&path),
            Err(Error::Format { .. })
        ));

        // value equal to q
        fs::write(&path, "SPFQ 1\n89 2 2 1\n0 0 89\n").unwrap();
        assert!(SparseMatrix::read_spfq(&path).is_err());

        // unsorted entries
        fs::write(&path, "SPFQ 1\n89 2 2 2\n0 1 3\n0 0 2\n").unwrap();
        assert!(SparseMatrix::read_spfq(&path).is_err());

        // composite modulus
        fs::write(&path, "SPFQ 1\n91 2 2 0\n").unwrap();
        assert!(SparseMatrix::read_spfq(&path).is_err());

        // truncated entry list
        fs::write(&path, "SPFQ 1\n89 2 2 2\n0 0 1\n").unwrap();
        assert!(SparseMatrix::read_spfq(&path).is_err());
    }
}
