//! Labelled count matrices and their element-wise merge.

use std::fmt;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::types::{Code, Domain};

/// Co-occurrence counts of two categorical variables.
///
/// Rows are labelled by the partner variable (the class, or an already
/// selected feature), columns by the candidate feature. Labels are kept in
/// ascending order and never reordered, so two tables are mergeable exactly
/// when their label vectors are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ContingencyTable {
    rows: Domain,
    cols: Domain,
    counts: SmallVec<[u64; 9]>,
}

impl ContingencyTable {
    pub fn zeros(rows: Domain, cols: Domain) -> Self {
        let counts = smallvec![0; rows.len() * cols.len()];
        ContingencyTable { rows, cols, counts }
    }

    /// Builds a table from a row-major count matrix.
    pub fn from_counts(rows: Domain, cols: Domain, counts: &[u64]) -> Result<Self> {
        if counts.len() != rows.len() * cols.len() {
            return Err(Error::invalid(format!(
                "{} counts given for a {}x{} table",
                counts.len(),
                rows.len(),
                cols.len()
            )));
        }
        Ok(ContingencyTable { rows, cols, counts: SmallVec::from_slice(counts) })
    }

    /// The table holding a single observation `(row_code, col_code)`.
    pub fn single_observation(row_code: Code, col_code: Code, rows: &Domain, cols: &Domain) -> Result<Self> {
        let r = rows
            .position(row_code)
            .ok_or_else(|| Error::DomainViolation { code: row_code, feature: "row variable".into() })?;
        let c = cols
            .position(col_code)
            .ok_or_else(|| Error::DomainViolation { code: col_code, feature: "column variable".into() })?;
        Ok(Self::single_at(r, c, rows, cols))
    }

    /// Like [`single_observation`](Self::single_observation) with positions
    /// already resolved.
    #[inline]
    pub fn single_at(row: usize, col: usize, rows: &Domain, cols: &Domain) -> Self {
        let mut table = Self::zeros(rows.clone(), cols.clone());
        table.counts[row * cols.len() + col] = 1;
        table
    }

    /// Cross-tabulates two equally long code vectors. Labels are the
    /// distinct values actually observed.
    pub fn from_pairs(rows: &[Code], cols: &[Code]) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::structural(format!(
                "cannot cross-tabulate vectors of length {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        if rows.is_empty() {
            return Err(Error::EmptyTable);
        }
        let row_domain = Domain::new(rows.iter().copied())?;
        let col_domain = Domain::new(cols.iter().copied())?;
        let mut table = Self::zeros(row_domain, col_domain);
        let width = table.cols.len();
        for (&r, &c) in rows.iter().zip(cols) {
            // both positions exist: the domains were built from these vectors
            let r = table.rows.position(r).unwrap();
            let c = table.cols.position(c).unwrap();
            table.counts[r * width + c] += 1;
        }
        Ok(table)
    }

    pub fn rows(&self) -> &Domain {
        &self.rows
    }

    pub fn cols(&self) -> &Domain {
        &self.cols
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.cols.len() + col]
    }

    /// Iterates over the rows of the count matrix.
    pub fn count_rows(&self) -> impl Iterator<Item = &[u64]> {
        self.counts.chunks(self.cols.len())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.count_rows().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.cols.len()];
        for row in self.count_rows() {
            for (s, &n) in sums.iter_mut().zip(row) {
                *s += n;
            }
        }
        sums
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols.clone(), self.rows.clone());
        let (h, w) = (self.rows.len(), self.cols.len());
        for r in 0..h {
            for c in 0..w {
                out.counts[c * h + r] = self.counts[r * w + c];
            }
        }
        out
    }

    /// Adds `other` into `self` cell by cell.
    #[inline]
    pub fn merge_from(&mut self, other: &ContingencyTable) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::structural(format!(
                "cannot merge tables labelled {:?}x{:?} and {:?}x{:?}",
                self.rows.codes(),
                self.cols.codes(),
                other.rows.codes(),
                other.cols.codes()
            )));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }
}

/// Element-wise sum of two identically labelled tables.
pub fn merge_tables(a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
    let mut out = a.clone();
    out.merge_from(b)?;
    Ok(out)
}

impl fmt::Debug for ContingencyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u64]> = self.count_rows().collect();
        f.debug_struct("ContingencyTable")
            .field("rows", &self.rows.codes())
            .field("cols", &self.cols.codes())
            .field("counts", &rows)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dom(codes: &[Code]) -> Domain {
        Domain::new(codes.iter().copied()).unwrap()
    }

    #[test]
    fn single_observation_sets_one_cell() {
        let t = ContingencyTable::single_observation(0, 2, &dom(&[0, 1]), &dom(&[-2, 0, 2])).unwrap();
        assert_eq!(t.counts(), &[0, 0, 1, 0, 0, 0]);
        assert_eq!(t.total(), 1);
    }

    #[test]
    fn singleton_domain_gives_unit_table() {
        let t = ContingencyTable::single_observation(7, 7, &dom(&[7]), &dom(&[7])).unwrap();
        assert_eq!(t.counts(), &[1]);
    }

    #[test]
    fn every_cell_once_sums_to_all_ones() {
        let (rows, cols) = (dom(&[0, 1]), dom(&[-2, 0, 2]));
        let mut acc = ContingencyTable::zeros(rows.clone(), cols.clone());
        for &r in rows.codes() {
            for &c in cols.codes() {
                acc.merge_from(&ContingencyTable::single_observation(r, c, &rows, &cols).unwrap()).unwrap();
            }
        }
        assert!(acc.counts().iter().all(|&n| n == 1));
    }

    #[test]
    fn out_of_domain_code_is_reported() {
        let err = ContingencyTable::single_observation(0, 5, &dom(&[0, 1]), &dom(&[0, 1])).unwrap_err();
        assert!(matches!(err, Error::DomainViolation { code: 5, .. }));
    }

    #[test]
    fn merge_rejects_label_mismatch() {
        let a = ContingencyTable::zeros(dom(&[0, 1]), dom(&[0, 1]));
        let b = ContingencyTable::zeros(dom(&[0, 1]), dom(&[0, 2]));
        let err = merge_tables(&a, &b).unwrap_err();
        assert!(err.is_internal());
    }

    #[test]
    fn merge_with_zero_is_identity() {
        let t = ContingencyTable::from_counts(dom(&[0, 1]), dom(&[0, 1, 2]), &[3, 0, 1, 4, 1, 5]).unwrap();
        let z = ContingencyTable::zeros(dom(&[0, 1]), dom(&[0, 1, 2]));
        assert_eq!(merge_tables(&t, &z).unwrap(), t);
    }

    #[test]
    fn from_pairs_uses_observed_labels() {
        let t = ContingencyTable::from_pairs(&[0, 0, 1, 1], &[5, 3, 3, 3]).unwrap();
        assert_eq!(t.rows().codes(), &[0, 1]);
        assert_eq!(t.cols().codes(), &[3, 5]);
        assert_eq!(t.counts(), &[1, 1, 2, 0]);
        assert!(ContingencyTable::from_pairs(&[0], &[0, 1]).is_err());
        assert!(matches!(ContingencyTable::from_pairs(&[], &[]), Err(Error::EmptyTable)));
    }

    #[test]
    fn transpose_swaps_cells() {
        let t = ContingencyTable::from_counts(dom(&[0, 1]), dom(&[0, 1, 2]), &[1, 2, 3, 4, 5, 6]).unwrap();
        let tt = t.transpose();
        assert_eq!(tt.counts(), &[1, 4, 2, 5, 3, 6]);
        assert_eq!(tt.transpose(), t);
        assert_eq!(t.row_sums(), vec![6, 15]);
        assert_eq!(t.col_sums(), vec![5, 7, 9]);
    }

    fn table_2x3() -> impl Strategy<Value = ContingencyTable> {
        proptest::collection::vec(0u64..1000, 6)
            .prop_map(|c| ContingencyTable::from_counts(dom(&[0, 1]), dom(&[-2, 0, 2]), &c).unwrap())
    }

    proptest! {
        #[test]
        fn merge_is_a_commutative_monoid(a in table_2x3(), b in table_2x3(), c in table_2x3()) {
            let ab_c = merge_tables(&merge_tables(&a, &b).unwrap(), &c).unwrap();
            let a_bc = merge_tables(&a, &merge_tables(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(&ab_c, &a_bc);
            prop_assert_eq!(merge_tables(&a, &b).unwrap(), merge_tables(&b, &a).unwrap());
            for (i, &n) in ab_c.counts().iter().enumerate() {
                prop_assert_eq!(n, a.counts()[i] + b.counts()[i] + c.counts()[i]);
            }
            prop_assert_eq!(ab_c.total(), a.total() + b.total() + c.total());
        }
    }
}
