//! mu-way latin squares and rectangles, their skeletons, and the
//! square <-> trade correspondence.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::trade::MuWayTrade;

/// Binary matrix marking the intersection part, with its line sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
    row_seq: Vec<usize>,
    col_seq: Vec<usize>,
}

impl Skeleton {
    pub fn from_bits(rows: usize, cols: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), rows * cols);
        let mut row_seq = vec![0; rows];
        let mut col_seq = vec![0; cols];
        for r in 0..rows {
            for c in 0..cols {
                if bits[r * cols + c] {
                    row_seq[r] += 1;
                    col_seq[c] += 1;
                }
            }
        }
        Skeleton {
            rows,
            cols,
            bits,
            row_seq,
            col_seq,
        }
    }

    #[inline]
    pub fn is_fixed(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn row_seq(&self) -> &[usize] {
        &self.row_seq
    }

    pub fn col_seq(&self) -> &[usize] {
        &self.col_seq
    }

    /// Number of ones; equals the fixed-cell count of the owning object.
    pub fn ones(&self) -> usize {
        self.row_seq.iter().sum()
    }
}

/// A mu-way latin square (or rectangle, when `rows < order`): mu aligned,
/// fully filled latin layers where each cell's entries are all equal or
/// pairwise distinct.
///
/// All fields are immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuWaySquare {
    mu: usize,
    order: usize,
    rows: usize,
    layers: Vec<Grid>,
    skeleton: Skeleton,
}

impl MuWaySquare {
    /// Assembles and validates mu aligned layers. Rejects fewer than two
    /// layers, shape mismatches, partial layers, non-latin layers and cells
    /// whose entries are neither all equal nor pairwise distinct.
    pub fn assemble(layers: Vec<Grid>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::Dimension("need at least 2 layers".into()));
        }
        let rows = layers[0].rows();
        let order = layers[0].cols();
        if layers.iter().any(|g| g.rows() != rows || g.cols() != order) {
            return Err(Error::Dimension("layer shapes differ".into()));
        }
        for (t, g) in layers.iter().enumerate() {
            if !g.is_full() {
                return Err(Error::Dimension(format!("layer {t} has empty cells")));
            }
            if let Err(violations) = g.validate_latin() {
                return Err(Error::NonLatinLayer {
                    layer: t,
                    violations,
                });
            }
        }
        let mut bits = vec![false; rows * order];
        for r in 0..rows {
            for c in 0..order {
                let first = layers[0].get(r, c).unwrap();
                let all_equal = layers.iter().all(|g| g.get(r, c).unwrap() == first);
                if all_equal {
                    bits[r * order + c] = true;
                    continue;
                }
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
        let skeleton = Skeleton::from_bits(rows, order, bits);
        Ok(MuWaySquare {
            mu: layers.len(),
            order,
            rows,
            layers,
            skeleton,
        })
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.order
    }

    pub fn layers(&self) -> &[Grid] {
        &self.layers
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    /// Number of fixed (all-equal) cells actually present.
    pub fn fixed_cells(&self) -> usize {
        self.skeleton.ones()
    }

    /// Trade volume: number of cells whose entries are pairwise distinct.
    pub fn trade_volume(&self) -> usize {
        self.rows * self.order - self.fixed_cells()
    }

    /// The intersection size `k`. For a square this is the fixed-cell count.
    /// For an `r x n` rectangle it is the intersection achieved once the
    /// rectangle is completed with identical rows: `n^2 - volume`, which is
    /// the number the appendix labels carry.
    pub fn intersection_size(&self) -> usize {
        self.order * self.order - self.trade_volume()
    }

    /// Empties the fixed cells, leaving the mu-way latin trade. The result is
    /// re-validated; a failure here would indicate a bug in assembly.
    pub fn extract_trade(&self) -> Result<MuWayTrade> {
        let mut layers = Vec::with_capacity(self.mu);
        for g in &self.layers {
            let mut t = Grid::new(self.rows, self.order)?;
            for r in 0..self.rows {
                for c in 0..self.order {
                    if !self.skeleton.is_fixed(r, c) {
                        t.set_raw(r, c, g.get(r, c).unwrap());
                    }
                }
            }
            layers.push(t);
        }
        MuWayTrade::new(layers)
            .map_err(|e| Error::Internal(format!("extracted trade failed validation: {e}")))
    }
}

/// Operation-contract alias for [`MuWaySquare::assemble`].
pub fn assemble_mu_way(layers: Vec<Grid>) -> Result<MuWaySquare> {
    MuWaySquare::assemble(layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::cyclic_square;

    #[test]
    fn identical_layers_are_all_fixed() {
        let sq = MuWaySquare::assemble(vec![cyclic_square(4); 4]).unwrap();
        assert_eq!(sq.intersection_size(), 16);
        assert_eq!(sq.skeleton().row_seq(), &[4, 4, 4, 4]);
        let trade = sq.extract_trade().unwrap();
        assert_eq!(trade.volume(), 0);
    }

    #[test]
    fn two_equal_two_distinct_cell_rejected() {
        // cell (0,0) holds (1,1,2,3)
        let mut layers = vec![cyclic_square(4); 2];
        let mut a = cyclic_square(4);
        let mut b = cyclic_square(4);
        // rotate rows of a and b to change (0,0) while keeping latin
        for j in 0..4 {
            let va = ((1 + j) % 4 + 1) as u8;
            let vb = ((2 + j) % 4 + 1) as u8;
            a.set_raw(0, j, va);
            a.set_raw(1, j, (j % 4 + 1) as u8);
            b.set_raw(0, j, vb);
            b.set_raw(2, j, (j % 4 + 1) as u8);
        }
        layers.push(a);
        layers.push(b);
        match MuWaySquare::assemble(layers) {
            Err(Error::CellConflict { row: 0, col: 0, .. }) => {}
            other => panic!("expected cell conflict, got {other:?}"),
        }
    }

    #[test]
    fn intersection_plus_volume_is_order_squared() {
        let sq = MuWaySquare::assemble(vec![cyclic_square(5); 4]).unwrap();
        assert_eq!(sq.intersection_size() + sq.trade_volume(), 25);
    }
}
