//! Builders for mu-way latin trades of prescribed volume.

use crate::compact::{parse_compact, resolve};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::trade::MuWayTrade;

/// Trade of volume `m*n` on an `m x n` rectangle (`min(m, n) >= mu`):
/// layer `t` holds the first `m` rows of the cyclic square of order `n`,
/// rotated down by `t`. Row rotation keeps every row's content equal to
/// `{1..n}` and permutes each column within itself, so all trade conditions
/// hold; distinct rotations give pairwise distinct entries since `mu <= m`.
pub fn full_trade(mu: usize, m: usize, n: usize) -> Result<MuWayTrade> {
    if m.min(n) < mu {
        return Err(Error::ShapeTooSmall {
            mu,
            rows: m,
            cols: n,
        });
    }
    // orient so the row count never exceeds the column count
    let (m, n) = (m.min(n), m.max(n));
    let layers = (0..mu)
        .map(|t| {
            let mut g = Grid::new(m, n)?;
            for i in 0..m {
                let src = (i + t) % m;
                for j in 0..n {
                    g.set_raw(i, j, (((src + j) % n) + 1) as u8);
                }
            }
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    MuWayTrade::new(layers)
}

fn check_gear_trade_params(mu: usize, a: usize, b: usize, x: usize, y: usize) -> Result<()> {
    if x < 1 {
        return Err(Error::ParameterViolation("x >= 1 fails".into()));
    }
    if a < x + mu - 1 {
        return Err(Error::ParameterViolation(format!(
            "a >= x + mu - 1 fails ({a} < {})",
            x + mu - 1
        )));
    }
    if b < mu - 1 {
        return Err(Error::ParameterViolation(format!(
            "b >= mu - 1 fails ({b} < {})",
            mu - 1
        )));
    }
    if y < mu {
        return Err(Error::ParameterViolation(format!("y >= mu fails ({y} < {mu})")));
    }
    if x + y > a + b {
        return Err(Error::ParameterViolation(format!(
            "x + y <= a + b fails ({} > {})",
            x + y,
            a + b
        )));
    }
    Ok(())
}

/// Row-major backtracking fill of the designated empty cells, each row drawn
/// from `row_pool` (a bitmask of permitted symbols per row), lowest symbol
/// first, subject to row- and column-distinctness within the grid.
fn fill_cells(g: &mut Grid, cells: &[(usize, usize)], row_pool: &dyn Fn(usize) -> u64) -> bool {
    let rows = g.rows();
    let cols = g.cols();
    let mut row_used = vec![0u64; rows];
    let mut col_used = vec![0u64; cols];
    for r in 0..rows {
        for c in 0..cols {
            if let Some(s) = g.get(r, c) {
                row_used[r] |= 1 << s;
                col_used[c] |= 1 << s;
            }
        }
    }
    let mut tried = vec![0u64; cells.len()];
    let mut depth = 0usize;
    loop {
        if depth == cells.len() {
            return true;
        }
        let (r, c) = cells[depth];
        let avail = row_pool(r) & !row_used[r] & !col_used[c] & !tried[depth];
        if avail == 0 {
            tried[depth] = 0;
            if depth == 0 {
                return false;
            }
            depth -= 1;
            let (pr, pc) = cells[depth];
            let ps = g.get(pr, pc).unwrap();
            g.set_raw(pr, pc, 0);
            row_used[pr] &= !(1 << ps);
            col_used[pc] &= !(1 << ps);
            continue;
        }
        let s = avail.trailing_zeros() as u8;
        tried[depth] |= 1 << s;
        g.set_raw(r, c, s);
        row_used[r] |= 1 << s;
        col_used[c] |= 1 << s;
        depth += 1;
    }
}

/// Gear-derived trade of volume `y*b + (y+x)*a` on `x+y` rows and `a+b`
/// columns. The A block (columns `b+1..a+b`, all rows) and the B block
/// (columns `1..b`, rows `x+1..x+y`) are cyclically row-permuted per layer.
///
/// The first `x + mu - 1` rows of the A block are cyclic on `{1..a}` and the
/// rows `x+1..x+mu-1` of the B block cyclic on `{a+1..a+b}`; the remaining
/// rows are full rows filled by backtracking. This keeps every row's content
/// invariant under the two rotations, which is exactly what the trade
/// conditions ask of the rotated layers.
pub fn gear_trade(mu: usize, a: usize, b: usize, x: usize, y: usize) -> Result<MuWayTrade> {
    check_gear_trade_params(mu, a, b, x, y)?;
    let n = a + b;
    let rows = x + y;
    let mut base = Grid::new(rows, n)?;
    // structured top: A block rows 1..x+mu-1 on {1..a}
    for i in 0..(x + mu - 1) {
        for j in 0..a {
            base.set_raw(i, b + j, (((i + j) % a) + 1) as u8);
        }
    }
    // B block rows x+1..x+mu-1 on {a+1..a+b}
    for i in x..(x + mu - 1) {
        for j in 0..b {
            base.set_raw(i, j, (a + ((i + j) % b) + 1) as u8);
        }
    }
    // defect rows: full rows over the whole alphabet
    let mut cells = Vec::new();
    for r in (x + mu - 1)..rows {
        for c in 0..n {
            cells.push((r, c));
        }
    }
    let full: u64 = ((1u128 << (n + 1)) - 2) as u64;
    if !fill_cells(&mut base, &cells, &|_| full) {
        // rotation cannot realize these parameters; fall back to a direct
        // search over the gear shape
        let mut shape = Vec::new();
        for i in 0..rows {
            for c in 0..n {
                let in_a = c >= b;
                let in_b = c < b && i >= x;
                if in_a || in_b {
                    shape.push((i, c));
                }
            }
        }
        return search_trade_shape(mu, rows, n, &shape, 200_000_000).ok_or(
            Error::CompletionFailure(format!(
                "no {mu}-way trade realizes gear parameters (a={a}, b={b}, x={x}, y={y})"
            )),
        );
    }
    let layers = (0..mu)
        .map(|t| {
            let mut g = Grid::new(rows, n)?;
            for i in 0..rows {
                // A block spans all rows, B block rows x..x+y
                let sa = (i + t) % rows;
                for j in 0..a {
                    if let Some(s) = base.get(sa, b + j) {
                        g.set_raw(i, b + j, s);
                    }
                }
                if i >= x {
                    let sb = x + ((i - x + t) % y);
                    for j in 0..b {
                        if let Some(s) = base.get(sb, j) {
                            g.set_raw(i, j, s);
                        }
                    }
                }
            }
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    MuWayTrade::new(layers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ShapeSearch {
    Found,
    Exhausted,
    Budget,
}

struct ShapeState {
    mu: usize,
    rows: usize,
    cols: usize,
    row_used: Vec<u64>, // [layer * rows + r]
    col_used: Vec<u64>, // [layer * cols + c]
    row_rem: Vec<usize>,
    col_rem: Vec<usize>,
    grids: Vec<Grid>,
    nodes: u64,
    budget: u64,
}

impl ShapeState {
    fn content_ok(&self, line_masks: impl Iterator<Item = u64> + Clone, rem: usize) -> bool {
        let union = line_masks.clone().fold(0u64, |a, m| a | m);
        line_masks.into_iter().all(|m| (union & !m).count_ones() as usize <= rem)
    }

    fn dfs(&mut self, cells: &[(usize, usize)], k: usize, max0: u8) -> ShapeSearch {
        if k == cells.len() {
            return ShapeSearch::Found;
        }
        let (r, c) = cells[k];
        let full: u64 = ((1u128 << (self.cols + 1)) - 2) as u64;
        let mut avail = [0u64; 8];
        for t in 0..self.mu {
            avail[t] =
                full & !self.row_used[t * self.rows + r] & !self.col_used[t * self.cols + c];
        }
        let mut tuple = [0u8; 8];
        self.enumerate(cells, k, max0, &avail[..self.mu], &mut tuple, 0, 0)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        cells: &[(usize, usize)],
        k: usize,
        max0: u8,
        avail: &[u64],
        tuple: &mut [u8; 8],
        chosen: u64,
        t: usize,
    ) -> ShapeSearch {
        let (r, c) = cells[k];
        if t == self.mu {
            if self.nodes >= self.budget {
                return ShapeSearch::Budget;
            }
            self.nodes += 1;
            for (q, &s) in tuple[..self.mu].iter().enumerate() {
                self.grids[q].set_raw(r, c, s);
                self.row_used[q * self.rows + r] |= 1 << s;
                self.col_used[q * self.cols + c] |= 1 << s;
            }
            self.row_rem[r] -= 1;
            self.col_rem[c] -= 1;
            let ok = self.content_ok(
                (0..self.mu).map(|q| self.row_used[q * self.rows + r]),
                self.row_rem[r],
            ) && self.content_ok(
                (0..self.mu).map(|q| self.col_used[q * self.cols + c]),
                self.col_rem[c],
            );
            let res = if ok {
                self.dfs(cells, k + 1, max0.max(tuple[0]))
            } else {
                ShapeSearch::Exhausted
            };
            if res == ShapeSearch::Found {
                return res;
            }
            for (q, &s) in tuple[..self.mu].iter().enumerate() {
                self.grids[q].set_raw(r, c, 0);
                self.row_used[q * self.rows + r] &= !(1 << s);
                self.col_used[q * self.cols + c] &= !(1 << s);
            }
            self.row_rem[r] += 1;
            self.col_rem[c] += 1;
            return res;
        }
        let mut m = avail[t] & !chosen;
        if t == 0 {
            // layer 0 introduces new symbols in ascending order
            let cap = (max0 + 1).min(self.cols as u8);
            m &= ((1u128 << (cap + 1)) - 2) as u64;
        }
        while m != 0 {
            let s = m.trailing_zeros() as u8;
            m &= m - 1;
            // layers are interchangeable: sort the very first tuple
            if k == 0 && t > 0 && s <= tuple[t - 1] {
                continue;
            }
            tuple[t] = s;
            match self.enumerate(cells, k, max0, avail, tuple, chosen | (1 << s), t + 1) {
                ShapeSearch::Exhausted => {}
                other => return other,
            }
        }
        ShapeSearch::Exhausted
    }
}

/// Searches for any mu-way trade on the given filled shape (cells listed
/// row-major). Symmetry breaking (sound for existence): the first cell's
/// tuple is strictly increasing, and layer 0 introduces new symbols in
/// ascending order. Returns `None` when the shape is exhausted or the node
/// budget is hit.
pub fn search_trade_shape(
    mu: usize,
    rows: usize,
    cols: usize,
    cells: &[(usize, usize)],
    budget: u64,
) -> Option<MuWayTrade> {
    if cells.is_empty() {
        return MuWayTrade::empty(mu, rows, cols).ok();
    }
    let mut row_rem = vec![0usize; rows];
    let mut col_rem = vec![0usize; cols];
    for &(r, c) in cells {
        row_rem[r] += 1;
        col_rem[c] += 1;
    }
    let mut st = ShapeState {
        mu,
        rows,
        cols,
        row_used: vec![0; mu * rows],
        col_used: vec![0; mu * cols],
        row_rem,
        col_rem,
        grids: (0..mu).map(|_| Grid::new(rows, cols).unwrap()).collect(),
        nodes: 0,
        budget,
    };
    match st.dfs(cells, 0, 0) {
        ShapeSearch::Found => MuWayTrade::new(st.grids).ok(),
        _ => None,
    }
}

/// Outcome of a volume request.
#[derive(Debug)]
pub enum VolumeOutcome {
    Trade(MuWayTrade),
    /// The volume is in the proven-impossible set.
    Infeasible,
    /// Not covered by any construction route (none expected for mu = 4).
    Unknown,
}

/// Impossible 4-way trade volumes.
pub const IMPOSSIBLE_VOLUMES_MU4: [usize; 21] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 17, 18, 19, 21, 22, 26,
];

pub fn is_impossible_volume_mu4(s: usize) -> bool {
    IMPOSSIBLE_VOLUMES_MU4.contains(&s)
}

// Witnesses for the handful of volumes no full or gear trade reaches: the
// trade parts of appendix objects of matching volume (n^2 - k).
const EXTRACT_WITNESSES: [(usize, &str); 13] = [
    (23, include_str!("../../../fixtures/appendix/n10_k077.r5.mwls")),
    (27, include_str!("../../../fixtures/appendix/n12_k117.r5.mwls")),
    (29, include_str!("../../../fixtures/appendix/n06_k007.mwls")),
    (31, include_str!("../../../fixtures/appendix/n06_k005.mwls")),
    (33, include_str!("../../../fixtures/appendix/n06_k003.mwls")),
    (34, include_str!("../../../fixtures/appendix/n06_k002.mwls")),
    (37, include_str!("../../../fixtures/appendix/n07_k012.mwls")),
    (38, include_str!("../../../fixtures/appendix/n07_k011.mwls")),
    (39, include_str!("../../../fixtures/appendix/n07_k010.mwls")),
    (41, include_str!("../../../fixtures/appendix/n07_k008.mwls")),
    (43, include_str!("../../../fixtures/appendix/n07_k006.mwls")),
    (46, include_str!("../../../fixtures/appendix/n07_k003.mwls")),
    (47, include_str!("../../../fixtures/appendix/n07_k002.mwls")),
];

fn factor_pair(mu: usize, s: usize) -> Option<(usize, usize)> {
    let mut m = (s as f64).sqrt() as usize + 1;
    while m >= mu {
        if m <= s && s % m == 0 && s / m >= m {
            return Some((m, s / m));
        }
        m -= 1;
    }
    None
}

/// Smallest non-relaxed gear parameters reaching volume `s`, ordered by
/// total order `n = a + b`, then `a`, then `x`. Restricting to
/// `b >= x + mu - 1` keeps the rotation construction feasible without a
/// fallback search.
fn gear_params_for_volume(mu: usize, s: usize) -> Option<(usize, usize, usize, usize)> {
    for n in (2 * mu)..=s {
        for a in mu..n {
            let b = n - a;
            for x in 1..n {
                if a < x + mu - 1 || b < x + mu - 1 {
                    break;
                }
                let rem = match s.checked_sub(x * a) {
                    Some(v) if v > 0 => v,
                    _ => break,
                };
                if rem % n == 0 {
                    let y = rem / n;
                    if y >= mu && x + y <= n {
                        return Some((a, b, x, y));
                    }
                }
            }
        }
    }
    None
}

/// Builds a mu-way trade of the requested volume, or reports the volume
/// impossible. Dispatch order: empty, factorable `m x n` full trade, the
/// extraction library, gear parameter search, then block-diagonal
/// composition of two smaller pieces.
pub fn trade_of_volume(mu: usize, s: usize) -> Result<VolumeOutcome> {
    if s == 0 {
        return Ok(VolumeOutcome::Trade(MuWayTrade::empty(mu, 0, 0)?));
    }
    if mu == 4 && is_impossible_volume_mu4(s) {
        return Ok(VolumeOutcome::Infeasible);
    }
    if let Some((m, n)) = factor_pair(mu, s) {
        return Ok(VolumeOutcome::Trade(full_trade(mu, m, n)?));
    }
    if mu == 4 {
        if let Some((_, text)) = EXTRACT_WITNESSES.iter().find(|(v, _)| *v == s) {
            let fx = parse_compact(text)?;
            let sq = resolve(&fx)?;
            let trade = sq.extract_trade()?;
            debug_assert_eq!(trade.volume(), s);
            return Ok(VolumeOutcome::Trade(trade));
        }
    }
    if let Some((a, b, x, y)) = gear_params_for_volume(mu, s) {
        return Ok(VolumeOutcome::Trade(gear_trade(mu, a, b, x, y)?));
    }
    // last resort: split into two constructible pieces
    for s1 in (16..=s / 2).rev() {
        let s2 = s - s1;
        if mu == 4 && (is_impossible_volume_mu4(s1) || is_impossible_volume_mu4(s2)) {
            continue;
        }
        let t1 = match trade_of_volume(mu, s1)? {
            VolumeOutcome::Trade(t) => t,
            _ => continue,
        };
        let t2 = match trade_of_volume(mu, s2)? {
            VolumeOutcome::Trade(t) => t,
            _ => continue,
        };
        return Ok(VolumeOutcome::Trade(t1.compose(&t2)?));
    }
    Ok(VolumeOutcome::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_trade_4_4_4() {
        let t = full_trade(4, 4, 4).unwrap();
        assert_eq!(t.volume(), 16);
    }

    #[test]
    fn full_trade_4_5_6() {
        let t = full_trade(4, 5, 6).unwrap();
        assert_eq!(t.volume(), 30);
    }

    #[test]
    fn full_trade_too_small() {
        assert!(matches!(
            full_trade(4, 3, 7),
            Err(Error::ShapeTooSmall { .. })
        ));
    }

    #[test]
    fn gear_trade_paper_parameters() {
        // x=1, n=3mu-i-1, y=mu, a in {mu..2mu-i}; for i=4 this is volume 32
        let t = gear_trade(4, 4, 3, 1, 4).unwrap();
        assert_eq!(t.volume(), 4 * 3 + 5 * 4);
        let t = gear_trade(4, 8, 4, 1, 4).unwrap();
        assert_eq!(t.volume(), 56);
    }

    #[test]
    fn gear_trade_rejects_small_a() {
        assert!(matches!(
            gear_trade(4, 3, 3, 1, 4),
            Err(Error::ParameterViolation(_))
        ));
    }

    #[test]
    fn volume_zero_and_infeasible() {
        assert!(matches!(
            trade_of_volume(4, 0).unwrap(),
            VolumeOutcome::Trade(t) if t.volume() == 0
        ));
        assert!(matches!(
            trade_of_volume(4, 7).unwrap(),
            VolumeOutcome::Infeasible
        ));
        assert!(matches!(
            trade_of_volume(4, 26).unwrap(),
            VolumeOutcome::Infeasible
        ));
    }

    #[test]
    fn volume_23_via_extraction() {
        match trade_of_volume(4, 23).unwrap() {
            VolumeOutcome::Trade(t) => assert_eq!(t.volume(), 23),
            other => panic!("expected trade, got {other:?}"),
        }
    }

    #[test]
    fn volume_44_exists() {
        match trade_of_volume(4, 44).unwrap() {
            VolumeOutcome::Trade(t) => assert_eq!(t.volume(), 44),
            other => panic!("expected trade, got {other:?}"),
        }
    }
}
