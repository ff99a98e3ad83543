use std::fmt::Write as _;

use super::{Int, IntMatrix, LinearError};

/// Largest row or column count accepted from a coordinate dump.
pub const MAX_DUMP_DIM: usize = 1 << 22;

/// Column-major sparse integer matrix. Columns hold `(row, value)` pairs
/// sorted by row; zero values are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, Int)>>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows <= u32::MAX as usize, "row count exceeds u32 indexing");
        SparseIntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions
    /// are summed and zero results dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self, LinearError>
    where
        I: IntoIterator<Item = (usize, usize, Int)>,
    {
        let mut m = SparseIntMatrix::zero(rows, cols);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinearError::IndexOutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            m.columns[c].push((r as u32, v));
        }
        for col in &mut m.columns {
            *col = normalize_column(std::mem::take(col));
        }
        Ok(m)
    }

    /// Builds a matrix column by column. Each column may list rows in any
    /// order and may repeat them; duplicates are summed.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, Int)>>) -> Self {
        let cols = columns.len();
        let columns = columns.into_iter().map(normalize_column).collect();
        let m = SparseIntMatrix {
            rows,
            cols,
            columns,
        };
        debug_assert!(m
            .columns
            .iter()
            .all(|c| c.iter().all(|(r, _)| (*r as usize) < rows)));
        m
    }

    pub fn from_dense(d: &IntMatrix) -> Self {
        let mut triplets = Vec::new();
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let v = d.get(r, c);
                if !v.is_zero() {
                    triplets.push((r, c, v.clone()));
                }
            }
        }
        SparseIntMatrix::from_triplets(d.rows(), d.cols(), triplets).expect("indices in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(u32, Int)] {
        &self.columns[c]
    }

    pub(crate) fn into_columns(self) -> Vec<Vec<(u32, Int)>> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        let col = &self.columns[c];
        match col.binary_search_by_key(&(r as u32), |(row, _)| *row) {
            Ok(i) => col[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Int)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r as usize, c, v)))
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut cols: Vec<Vec<(u32, Int)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            cols[r].push((c as u32, v.clone()));
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: cols,
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix, LinearError> {
        if self.cols != rhs.rows {
            return Err(LinearError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let columns = rhs
            .columns
            .iter()
            .map(|col| self.apply_to_sparse(col))
            .collect();
        Ok(SparseIntMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    /// `self * v` for a sparse column vector `v`.
    pub(crate) fn apply_to_sparse(&self, v: &[(u32, Int)]) -> Vec<(u32, Int)> {
        let mut acc = Vec::new();
        for (k, x) in v {
            for (r, a) in &self.columns[*k as usize] {
                acc.push((*r, a * x));
            }
        }
        normalize_column(acc)
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            d.set(r, c, v.clone());
        }
        d
    }

    /// Coordinate dump: a `rows cols nnz` header followed by one
    /// `row col value` line per nonzero entry.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.entries() {
            let _ = writeln!(out, "{r} {c} {v}");
        }
        out
    }

    pub fn parse_coordinate_text(text: &str) -> Result<Self, LinearError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(LinearError::Dump {
            line: 1,
            msg: "missing header".into(),
        })?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(LinearError::Dump {
                line: hline,
                msg: "header must be `rows cols nnz`".into(),
            });
        }
        let parse_usize = |s: &str, line: usize| {
            s.parse::<usize>().map_err(|_| LinearError::Dump {
                line,
                msg: format!("expected a non-negative integer, found `{s}`"),
            })
        };
        let rows = parse_usize(h[0], hline)?;
        let cols = parse_usize(h[1], hline)?;
        let nnz = parse_usize(h[2], hline)?;
        if rows > MAX_DUMP_DIM || cols > MAX_DUMP_DIM {
            return Err(LinearError::Dump {
                line: hline,
                msg: format!("dimensions exceed {MAX_DUMP_DIM}"),
            });
        }
        let mut triplets = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (line, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(LinearError::Dump {
                    line,
                    msg: "entry must be `row col value`".into(),
                });
            }
            let r = parse_usize(f[0], line)?;
            let c = parse_usize(f[1], line)?;
            let v: Int = f[2].parse().map_err(|_| LinearError::Dump {
                line,
                msg: format!("bad integer `{}`", f[2]),
            })?;
            if r >= rows || c >= cols {
                return Err(LinearError::Dump {
                    line,
                    msg: format!("entry ({r}, {c}) outside {rows}x{cols}"),
                });
            }
            if v.is_zero() {
                return Err(LinearError::Dump {
                    line,
                    msg: "explicit zero entry".into(),
                });
            }
            if !seen.insert((r, c)) {
                return Err(LinearError::Dump {
                    line,
                    msg: format!("duplicate entry ({r}, {c})"),
                });
            }
            triplets.push((r, c, v));
        }
        if triplets.len() != nnz {
            return Err(LinearError::Dump {
                line: hline,
                msg: format!("header declares {nnz} entries, found {}", triplets.len()),
            });
        }
        SparseIntMatrix::from_triplets(rows, cols, triplets)
    }
}

/// Sorts by row, sums duplicates and drops zeros.
pub(crate) fn normalize_column(mut col: Vec<(u32, Int)>) -> Vec<(u32, Int)> {
    if col.windows(2).all(|w| w[0].0 < w[1].0) && col.iter().all(|(_, v)| !v.is_zero()) {
        return col;
    }
    col.sort_by_key(|(r, _)| *r);
    let mut out: Vec<(u32, Int)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv = &*lv + &v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Like [`axpy_sub`], reporting rows present in the result but absent from `a`.
pub(crate) fn axpy_sub_with(
    a: &[(u32, Int)],
    factor: &Int,
    b: &[(u32, Int)],
    mut on_new_row: impl FnMut(u32),
) -> Vec<(u32, Int)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            on_new_row(b[j].0);
            out.push((b[j].0, -(factor * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(factor * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseIntMatrix::from_triplets(
            2,
            2,
            vec![
                (0, 0, Int::from(2)),
                (0, 0, Int::from(-2)),
                (1, 1, Int::from(3)),
                (1, 1, Int::from(1)),
            ],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), Int::from(4));
        assert_eq!(m.get(0, 0), Int::ZERO);
    }

    #[test]
    fn out_of_bounds_rejected() {
        let err = SparseIntMatrix::from_triplets(2, 2, vec![(2, 0, Int::ONE)]).unwrap_err();
        assert!(matches!(err, LinearError::IndexOutOfBounds { row: 2, .. }));
    }

    #[test]
    fn coordinate_dump_round_trip() {
        let m = SparseIntMatrix::from_triplets(
            3,
            4,
            vec![
                (0, 1, Int::from(-7)),
                (2, 3, Int::from(5)),
                (1, 0, Int::from(1)),
            ],
        )
        .unwrap();
        let text = m.to_coordinate_text();
        assert!(text.starts_with("3 4 3\n"));
        assert_eq!(SparseIntMatrix::parse_coordinate_text(&text).unwrap(), m);
    }

    #[test]
    fn coordinate_dump_errors_name_line() {
        let err = SparseIntMatrix::parse_coordinate_text("2 2 1\n0 5 1\n").unwrap_err();
        assert!(matches!(err, LinearError::Dump { line: 2, .. }));
        let err = SparseIntMatrix::parse_coordinate_text("2 2 2\n0 0 1\n").unwrap_err();
        assert!(matches!(err, LinearError::Dump { line: 1, .. }));
    }

    #[test]
    fn product_matches_dense() {
        let a = SparseIntMatrix::from_triplets(
            2,
            3,
            vec![
                (0, 0, Int::from(1)),
                (0, 2, Int::from(2)),
                (1, 1, Int::from(-1)),
            ],
        )
        .unwrap();
        let b = SparseIntMatrix::from_triplets(
            3,
            2,
            vec![
                (0, 0, Int::from(3)),
                (2, 0, Int::from(1)),
                (1, 1, Int::from(4)),
            ],
        )
        .unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.to_dense(), a.to_dense().mul(&b.to_dense()));
        assert_eq!(p.get(0, 0), Int::from(5));
        assert_eq!(p.get(1, 1), Int::from(-4));
    }
}
