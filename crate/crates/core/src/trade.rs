//! mu-way latin trades: aligned partial rectangles on the same filled cells,
//! cellwise distinct, with equal row and column content sets across layers.

use crate::error::{Error, Result};
use crate::grid::{Grid, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuWayTrade {
    mu: usize,
    rows: usize,
    cols: usize,
    layers: Vec<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row,
    Col,
}

impl MuWayTrade {
    /// Validating constructor. Checks, in order: shape agreement, latin
    /// condition per layer, identical filled-cell sets, cellwise pairwise
    /// distinctness, and row/column content-set equality across layers.
    pub fn new(layers: Vec<Grid>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::Dimension("a trade needs at least 2 layers".into()));
        }
        let rows = layers[0].rows();
        let cols = layers[0].cols();
        if layers.iter().any(|g| g.rows() != rows || g.cols() != cols) {
            return Err(Error::Dimension("layer shapes differ".into()));
        }
        for (t, g) in layers.iter().enumerate() {
            if let Err(violations) = g.validate_latin() {
                return Err(Error::NonLatinLayer {
                    layer: t,
                    violations,
                });
            }
        }
        for r in 0..rows {
            for c in 0..cols {
                let filled = layers[0].get(r, c).is_some();
                if layers.iter().any(|g| g.get(r, c).is_some() != filled) {
                    return Err(Error::FilledSetMismatch { row: r, col: c });
                }
                if filled {
                    let mut seen = 0u64;
                    for g in &layers {
                        let s = g.get(r, c).unwrap();
                        if seen & (1 << s) != 0 {
                            return Err(Error::CellConflict {
                                row: r,
                                col: c,
                                entries: layers.iter().map(|g| g.get(r, c).unwrap()).collect(),
                            });
                        }
                        seen |= 1 << s;
                    }
                }
            }
        }
        // Each layer is row- and column-latin, so per-line multiplicities are
        // 0/1 and set equality is the full content condition.
        for r in 0..rows {
            let base = layers[0].row_content(r);
            for (t, g) in layers.iter().enumerate().skip(1) {
                if g.row_content(r) != base {
                    return Err(Error::ContentMismatch {
                        which: "row",
                        index: r,
                        layer: t,
                    });
                }
            }
        }
        for c in 0..cols {
            let base = layers[0].col_content(c);
            for (t, g) in layers.iter().enumerate().skip(1) {
                if g.col_content(c) != base {
                    return Err(Error::ContentMismatch {
                        which: "column",
                        index: c,
                        layer: t,
                    });
                }
            }
        }
        Ok(MuWayTrade {
            mu: layers.len(),
            rows,
            cols,
            layers,
        })
    }

    /// The empty trade of the given shape.
    pub fn empty(mu: usize, rows: usize, cols: usize) -> Result<Self> {
        let layers = (0..mu)
            .map(|_| Grid::new(rows, cols))
            .collect::<Result<Vec<_>>>()?;
        Ok(MuWayTrade {
            mu,
            rows,
            cols,
            layers,
        })
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn layers(&self) -> &[Grid] {
        &self.layers
    }

    /// Number of filled cells.
    pub fn volume(&self) -> usize {
        self.layers[0].filled_count()
    }

    /// Content set `R_i` (or `C_j`) of the trade, identical across layers.
    pub fn line_content(&self, which: Line, index: usize) -> Result<Vec<Symbol>> {
        let mask = match which {
            Line::Row => {
                if index >= self.rows {
                    return Err(Error::IndexOutOfRange(format!("row {index}")));
                }
                self.layers[0].row_content(index)
            }
            Line::Col => {
                if index >= self.cols {
                    return Err(Error::IndexOutOfRange(format!("column {index}")));
                }
                self.layers[0].col_content(index)
            }
        };
        Ok((1..=self.cols as u8)
            .filter(|s| mask & (1 << s) != 0)
            .collect())
    }

    /// Block-diagonal disjoint union. The second trade is shifted down-right
    /// and its symbols are relabeled into a fresh range, which preserves all
    /// trade invariants term by term.
    pub fn compose(&self, other: &MuWayTrade) -> Result<MuWayTrade> {
        if self.mu != other.mu {
            return Err(Error::Dimension(format!(
                "cannot compose {}-way with {}-way",
                self.mu, other.mu
            )));
        }
        let rows = self.rows + other.rows();
        let cols = self.cols + other.cols();
        let shift = self.cols as u8;
        let mut layers = Vec::with_capacity(self.mu);
        for t in 0..self.mu {
            let mut g = Grid::new(rows, cols)?;
            for r in 0..self.rows {
                for c in 0..self.cols {
                    if let Some(s) = self.layers[t].get(r, c) {
                        g.set_raw(r, c, s);
                    }
                }
            }
            for r in 0..other.rows() {
                for c in 0..other.cols() {
                    if let Some(s) = other.layers()[t].get(r, c) {
                        g.set_raw(self.rows + r, self.cols + c, s + shift);
                    }
                }
            }
            layers.push(g);
        }
        MuWayTrade::new(layers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shifted_rows(mu: usize, m: usize, n: usize) -> Vec<Grid> {
        // layer t = first m rows of the cyclic square, rotated down by t
        (0..mu)
            .map(|t| {
                let mut g = Grid::new(m, n).unwrap();
                for i in 0..m {
                    let src = (i + t) % m;
                    for j in 0..n {
                        g.set_raw(i, j, (((src + j) % n) + 1) as u8);
                    }
                }
                g
            })
            .collect()
    }

    #[test]
    fn row_rotated_cyclic_is_a_trade() {
        let t = MuWayTrade::new(shifted_rows(4, 4, 4)).unwrap();
        assert_eq!(t.volume(), 16);
        assert_eq!(t.line_content(Line::Row, 0).unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn filled_set_mismatch_detected() {
        let mut layers = shifted_rows(4, 4, 5);
        layers[2].set(1, 1, None).unwrap();
        match MuWayTrade::new(layers) {
            Err(Error::FilledSetMismatch { row: 1, col: 1 }) => {}
            other => panic!("expected filled-set mismatch, got {other:?}"),
        }
    }

    #[test]
    fn repeated_entry_in_cell_detected() {
        let layers = vec![cycl(3, 4, 0), cycl(3, 4, 1), cycl(3, 4, 0)];
        match MuWayTrade::new(layers) {
            Err(Error::CellConflict { .. }) => {}
            other => panic!("expected cell conflict, got {other:?}"),
        }
    }

    fn cycl(m: usize, n: usize, t: usize) -> Grid {
        let mut g = Grid::new(m, n).unwrap();
        for i in 0..m {
            for j in 0..n {
                g.set_raw(i, j, (((i + t + j) % n) + 1) as u8);
            }
        }
        g
    }

    #[test]
    fn compose_adds_volumes() {
        let a = MuWayTrade::new(shifted_rows(4, 4, 4)).unwrap();
        let b = MuWayTrade::new(shifted_rows(4, 4, 5)).unwrap();
        let c = a.compose(&b).unwrap();
        assert_eq!(c.volume(), 36);
        assert_eq!(c.cols(), 9);
    }

    #[test]
    fn empty_trade_row_content_is_empty() {
        let t = MuWayTrade::empty(4, 3, 5).unwrap();
        assert!(t.line_content(Line::Row, 0).unwrap().is_empty());
        assert!(t.line_content(Line::Row, 9).is_err());
    }
}
