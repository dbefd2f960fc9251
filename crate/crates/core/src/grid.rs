//! Grids: rectangular arrays of optional symbols, the substrate for
//! (partial) latin rectangles.

use crate::error::{Error, Result, Violation};

/// A symbol is an integer in `1..=n` where `n` is the order of the ambient
/// object. Empty cells are represented as `None` at the API level and as a
/// zero byte internally.
pub type Symbol = u8;

/// An `r x n` array of optional symbols, `r <= n`.
///
/// The latin condition (each symbol at most once per row and per column) is
/// not an invariant of the type; it is checked by [`Grid::validate_latin`]
/// so that search code can manipulate partial states freely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<u8>, // 0 = empty
}

impl Grid {
    /// Empty grid with `rows <= cols`.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows > cols {
            return Err(Error::Dimension(format!(
                "grid has {rows} rows but only {cols} columns"
            )));
        }
        Ok(Grid {
            rows,
            cols,
            cells: vec![0; rows * cols],
        })
    }

    pub fn from_rows(rows: &[Vec<Option<Symbol>>]) -> Result<Self> {
        let r = rows.len();
        let n = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != n) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut g = Grid::new(r, n)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if let Some(s) = v {
                    g.set(i, j, Some(s))?;
                }
            }
        }
        Ok(g)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Option<Symbol> {
        match self.cells[r * self.cols + c] {
            0 => None,
            v => Some(v),
        }
    }

    /// Writes a cell, checking only the symbol range (1..=cols).
    pub fn set(&mut self, r: usize, c: usize, v: Option<Symbol>) -> Result<()> {
        if let Some(s) = v {
            if s == 0 || s as usize > self.cols {
                return Err(Error::SymbolRange {
                    row: r,
                    col: c,
                    value: s,
                    order: self.cols,
                });
            }
        }
        self.cells[r * self.cols + c] = v.unwrap_or(0);
        Ok(())
    }

    /// Unchecked write for hot loops; `v == 0` clears the cell.
    #[inline]
    pub(crate) fn set_raw(&mut self, r: usize, c: usize, v: u8) {
        self.cells[r * self.cols + c] = v;
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(|&v| v != 0)
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|&&v| v != 0).count()
    }

    /// Collects every latin-condition violation: for each duplicated symbol
    /// in a line, one entry per offending cell beyond the first.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.cols;
        let mut seen = vec![false; n + 1];
        for r in 0..self.rows {
            seen.iter_mut().for_each(|x| *x = false);
            for c in 0..n {
                if let Some(s) = self.get(r, c) {
                    if seen[s as usize] {
                        out.push(Violation {
                            row: r,
                            col: c,
                            symbol: s,
                        });
                    }
                    seen[s as usize] = true;
                }
            }
        }
        for c in 0..n {
            seen.iter_mut().for_each(|x| *x = false);
            for r in 0..self.rows {
                if let Some(s) = self.get(r, c) {
                    if seen[s as usize] {
                        out.push(Violation {
                            row: r,
                            col: c,
                            symbol: s,
                        });
                    }
                    seen[s as usize] = true;
                }
            }
        }
        out
    }

    /// Validates the partial-latin condition, returning the violations on
    /// failure. Symbol range and `r <= n` were enforced at construction.
    pub fn validate_latin(&self) -> std::result::Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Set of symbols present in row `r`, as a bitmask (bit `s` for symbol `s`).
    pub fn row_content(&self, r: usize) -> u64 {
        let mut m = 0u64;
        for c in 0..self.cols {
            if let Some(s) = self.get(r, c) {
                m |= 1 << s;
            }
        }
        m
    }

    pub fn col_content(&self, c: usize) -> u64 {
        let mut m = 0u64;
        for r in 0..self.rows {
            if let Some(s) = self.get(r, c) {
                m |= 1 << s;
            }
        }
        m
    }
}

/// Standalone validator matching the operation contract: `Ok(())` when the
/// latin condition holds, otherwise the full violation list.
pub fn validate_partial_latin(g: &Grid) -> std::result::Result<(), Vec<Violation>> {
    g.validate_latin()
}

/// The cyclic latin square of order `n`: `L[i][j] = ((i + j) mod n) + 1`.
pub fn cyclic_square(n: usize) -> Grid {
    let mut g = Grid::new(n, n).expect("square shape");
    for i in 0..n {
        for j in 0..n {
            g.set_raw(i, j, (((i + j) % n) + 1) as u8);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_4_is_latin() {
        let g = cyclic_square(4);
        assert!(g.validate_latin().is_ok());
        assert_eq!(g.get(0, 0), Some(1));
        assert_eq!(g.get(3, 3), Some(3));
    }

    #[test]
    fn duplicate_in_row_is_reported() {
        let mut g = Grid::new(2, 4).unwrap();
        g.set(0, 0, Some(1)).unwrap();
        g.set(0, 2, Some(1)).unwrap();
        let errs = g.validate_latin().unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].symbol, 1);
        assert_eq!((errs[0].row, errs[0].col), (0, 2));
    }

    #[test]
    fn too_many_rows_rejected() {
        assert!(Grid::new(5, 4).is_err());
    }

    #[test]
    fn symbol_out_of_range_rejected() {
        let mut g = Grid::new(2, 3).unwrap();
        assert!(g.set(0, 0, Some(4)).is_err());
        assert!(g.set(0, 0, Some(3)).is_ok());
    }
}
