//! Appendix-style compact fixtures.
//!
//! Each cell is either one symbol character (fixed across layers), a run of
//! `mu` characters (per-layer entries), or an underscore-prefixed symbol
//! (a fixed cell of a technique-input layout, printed underlined in the
//! source). `groups:` records where the double lines fall, as cumulative
//! column counts.

use crate::complete::extend_rectangle;
use crate::error::{Error, Result};
use crate::grid::{Grid, Symbol};
use crate::mwls::symbol_from_char;
use crate::square::MuWaySquare;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureLabel {
    /// Order of the (completed) latin square.
    pub n: usize,
    /// Achieved intersection number.
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompactKind {
    Square,
    Rectangle,
    /// Single-layer row-permuting layout with underlined fixed cells.
    Gear,
}

#[derive(Debug)]
pub enum CompactPayload {
    Full(MuWaySquare),
    Gear(GearLayout),
}

#[derive(Debug)]
pub struct CompactFixture {
    pub label: FixtureLabel,
    pub mu: usize,
    pub kind: CompactKind,
    pub payload: CompactPayload,
}

/// A single latin rectangle whose designated subrectangles are cyclically
/// row-permuted to produce the layers of a mu-way square.
#[derive(Debug, Clone)]
pub struct GearLayout {
    pub n: usize,
    pub rows: usize,
    pub grid: Grid,
    pub underlined: Vec<bool>,
    /// Column ranges `[start, end)` delimited by the double lines.
    pub groups: Vec<(usize, usize)>,
}

pub fn parse_compact(text: &str) -> Result<CompactFixture> {
    let mut label = None;
    let mut rows_hdr = None;
    let mut mu = None;
    let mut kind = None;
    let mut group_bounds: Vec<usize> = Vec::new();
    let mut grid_lines: Vec<(usize, &str)> = Vec::new();
    let mut in_grid = false;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if in_grid {
            grid_lines.push((no + 1, line));
            continue;
        }
        let (key, val) = line.split_once(':').ok_or(Error::Parse {
            line: no + 1,
            msg: format!("expected `key: value`, got {line:?}"),
        })?;
        let val = val.trim();
        match key.trim() {
            "label" => {
                let p: Vec<&str> = val.split_whitespace().collect();
                if p.len() != 2 {
                    return Err(Error::Parse {
                        line: no + 1,
                        msg: "label needs `n k`".into(),
                    });
                }
                label = Some(FixtureLabel {
                    n: p[0].parse().map_err(|_| Error::Parse {
                        line: no + 1,
                        msg: "bad n".into(),
                    })?,
                    k: p[1].parse().map_err(|_| Error::Parse {
                        line: no + 1,
                        msg: "bad k".into(),
                    })?,
                });
            }
            "rows" => {
                rows_hdr = Some(val.parse::<usize>().map_err(|_| Error::Parse {
                    line: no + 1,
                    msg: "bad rows".into(),
                })?)
            }
            "mu" => {
                mu = Some(val.parse::<usize>().map_err(|_| Error::Parse {
                    line: no + 1,
                    msg: "bad mu".into(),
                })?)
            }
            "kind" => {
                kind = Some(match val {
                    "square" => CompactKind::Square,
                    "rectangle" => CompactKind::Rectangle,
                    "gear" => CompactKind::Gear,
                    other => {
                        return Err(Error::Parse {
                            line: no + 1,
                            msg: format!("unknown kind {other:?}"),
                        })
                    }
                })
            }
            "groups" => {
                group_bounds = val
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<usize>().map_err(|_| Error::Parse {
                            line: no + 1,
                            msg: "bad group boundary".into(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
            }
            "grid" => in_grid = true,
            other => {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: format!("unknown header {other:?}"),
                })
            }
        }
    }
    let label = label.ok_or(Error::Parse {
        line: 1,
        msg: "missing label".into(),
    })?;
    let mu = mu.unwrap_or(4);
    let n = label.n;
    let r = rows_hdr.unwrap_or(n);
    if grid_lines.len() != r {
        return Err(Error::Parse {
            line: grid_lines.last().map_or(1, |x| x.0),
            msg: format!("expected {r} grid rows, found {}", grid_lines.len()),
        });
    }
    let kind = kind.unwrap_or(if r == n {
        CompactKind::Square
    } else {
        CompactKind::Rectangle
    });

    if kind == CompactKind::Gear {
        let mut grid = Grid::new(r, n)?;
        let mut underlined = vec![false; r * n];
        for (i, (no, line)) in grid_lines.iter().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != n {
                return Err(Error::Parse {
                    line: *no,
                    msg: format!("expected {n} cells, found {}", toks.len()),
                });
            }
            for (j, tok) in toks.iter().enumerate() {
                let (fixed, body) = match tok.strip_prefix('_') {
                    Some(rest) => (true, rest),
                    None => (false, *tok),
                };
                let mut chars = body.chars();
                let sym = match (chars.next(), chars.next()) {
                    (Some(c), None) => symbol_from_char(c),
                    _ => None,
                };
                let s = sym.ok_or(Error::Parse {
                    line: *no,
                    msg: format!("bad layout cell {tok:?}"),
                })?;
                grid.set(i, j, Some(s))?;
                underlined[i * n + j] = fixed;
            }
        }
        let mut groups = Vec::new();
        let mut start = 0;
        for &b in &group_bounds {
            groups.push((start, b));
            start = b;
        }
        groups.push((start, n));
        return Ok(CompactFixture {
            label,
            mu,
            kind,
            payload: CompactPayload::Gear(GearLayout {
                n,
                rows: r,
                grid,
                underlined,
                groups,
            }),
        });
    }

    // full square / rectangle: expand cells to mu layers
    let mut layers: Vec<Grid> = (0..mu).map(|_| Grid::new(r, n)).collect::<Result<_>>()?;
    for (i, (no, line)) in grid_lines.iter().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::Parse {
                line: *no,
                msg: format!("expected {n} cells, found {}", toks.len()),
            });
        }
        for (j, tok) in toks.iter().enumerate() {
            let syms: Vec<Symbol> = tok
                .chars()
                .map(|c| {
                    symbol_from_char(c).ok_or(Error::Parse {
                        line: *no,
                        msg: format!("bad symbol {c:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match syms.len() {
                1 => {
                    for g in layers.iter_mut() {
                        g.set(i, j, Some(syms[0]))?;
                    }
                }
                len if len == mu => {
                    for (g, &s) in layers.iter_mut().zip(&syms) {
                        g.set(i, j, Some(s))?;
                    }
                }
                len => {
                    return Err(Error::Parse {
                        line: *no,
                        msg: format!("cell {tok:?} has {len} entries, expected 1 or {mu}"),
                    })
                }
            }
        }
    }
    let sq = MuWaySquare::assemble(layers)?;
    Ok(CompactFixture {
        label,
        mu,
        kind,
        payload: CompactPayload::Full(sq),
    })
}

impl GearLayout {
    /// Rows of `group` that carry no underline mark (candidate permuting rows).
    fn unmarked_rows(&self, group: (usize, usize)) -> Vec<usize> {
        (0..self.rows)
            .filter(|&r| (group.0..group.1).all(|c| !self.underlined[r * self.n + c]))
            .collect()
    }

    /// Applies the cyclic row permutation of each subrectangle (given as a
    /// row list per column group) and returns the mu layers.
    fn rotate(&self, mu: usize, lists: &[Vec<usize>]) -> Vec<Grid> {
        (0..mu)
            .map(|t| {
                let mut g = self.grid.clone();
                for (group, list) in self.groups.iter().zip(lists) {
                    let h = list.len();
                    if h == 0 {
                        continue;
                    }
                    for (idx, &dst) in list.iter().enumerate() {
                        let src = list[(idx + t) % h];
                        for c in group.0..group.1 {
                            g.set_raw(dst, c, self.grid.get(src, c).unwrap());
                        }
                    }
                }
                g
            })
            .collect()
    }

    fn try_lists(&self, mu: usize, lists: &[Vec<usize>]) -> Option<MuWaySquare> {
        let layers = self.rotate(mu, lists);
        let rect = MuWaySquare::assemble(layers).ok()?;
        // re-validate the trade part (column content equality in particular)
        rect.extract_trade().ok()?;
        let sq = complete_to_square(&rect).ok()?;
        Some(sq)
    }

    /// Finds the permuting subrectangles, builds the mu-way square and checks
    /// the labeled intersection number.
    ///
    /// The underline marks identify the permuting rows in most blocks; a few
    /// blocks leave some fixed cells unmarked, so when the marked rows do not
    /// account for the labeled trade volume we search shorter suffixes of the
    /// marked row lists, deterministically, and keep the first choice that
    /// validates end to end.
    pub fn expand(&self, mu: usize, label: FixtureLabel) -> Result<MuWaySquare> {
        let volume = label.n * label.n - label.k;
        let marked: Vec<Vec<usize>> = self.groups.iter().map(|&g| self.unmarked_rows(g)).collect();
        let widths: Vec<usize> = self.groups.iter().map(|&(a, b)| b - a).collect();

        let full_sum: usize = marked
            .iter()
            .zip(&widths)
            .map(|(l, w)| l.len() * w)
            .sum();
        if full_sum == volume {
            if let Some(sq) = self.try_lists(mu, &marked) {
                if sq.intersection_size() == label.k {
                    return Ok(sq);
                }
            }
        }
        // fallback: suffixes of each marked list (empty list = group is fixed)
        let options: Vec<Vec<Vec<usize>>> = marked
            .iter()
            .map(|l| (0..=l.len()).map(|cut| l[cut..].to_vec()).collect())
            .collect();
        let mut pick = vec![0usize; options.len()];
        loop {
            let lists: Vec<Vec<usize>> =
                pick.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
            let sum: usize = lists.iter().zip(&widths).map(|(l, w)| l.len() * w).sum();
            if sum == volume && lists.iter().all(|l| l.is_empty() || l.len() >= mu) {
                if let Some(sq) = self.try_lists(mu, &lists) {
                    if sq.intersection_size() == label.k {
                        return Ok(sq);
                    }
                }
            }
            // advance the mixed-radix counter
            let mut d = pick.len();
            loop {
                if d == 0 {
                    return Err(Error::CompletionFailure(format!(
                        "no permuting-subrectangle assignment reproduces k={} for the {}x{} layout",
                        label.k, self.rows, self.n
                    )));
                }
                d -= 1;
                pick[d] += 1;
                if pick[d] < options[d].len() {
                    break;
                }
                pick[d] = 0;
            }
        }
    }
}

/// Completes a mu-way rectangle to a square of its order by appending the
/// same rows to every layer (the completion of layer 0, which stays latin in
/// every layer because row and column contents agree across layers).
pub fn complete_to_square(rect: &MuWaySquare) -> Result<MuWaySquare> {
    if rect.is_square() {
        return Ok(rect.clone());
    }
    let full0 = extend_rectangle(&rect.layers()[0])?;
    let n = rect.order();
    let layers = rect
        .layers()
        .iter()
        .map(|g| {
            let mut out = g.clone();
            let mut rows: Vec<Vec<Option<Symbol>>> = Vec::new();
            for r in 0..rect.rows() {
                rows.push((0..n).map(|c| out.get(r, c)).collect());
            }
            for r in rect.rows()..n {
                rows.push((0..n).map(|c| full0.get(r, c)).collect());
            }
            out = Grid::from_rows(&rows)?;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    MuWaySquare::assemble(layers)
}

/// Resolves a compact fixture to a full mu-way square of order `n`,
/// verifying the labeled intersection number on the way.
pub fn resolve(fx: &CompactFixture) -> Result<MuWaySquare> {
    let sq = match &fx.payload {
        CompactPayload::Full(sq) => {
            if !sq.is_square() {
                sq.extract_trade()?; // enforce trade conditions for rectangles
                complete_to_square(sq)?
            } else {
                sq.clone()
            }
        }
        CompactPayload::Gear(layout) => layout.expand(fx.mu, fx.label)?,
    };
    if sq.order() != fx.label.n || sq.intersection_size() != fx.label.k {
        return Err(Error::Internal(format!(
            "fixture labeled ({}, {}) resolved to ({}, {})",
            fx.label.n,
            fx.label.k,
            sq.order(),
            sq.intersection_size()
        )));
    }
    Ok(sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIVE_ONE: &str = "label: 5 1\nmu: 4\nkind: square\ngrid:\n\
1 2345 3254 4523 5432\n2345 1453 4132 5214 3521\n3254 4512 5321 1435 2143\n\
4523 5231 2415 3142 1354\n5432 3124 1543 2351 4215\n";

    #[test]
    fn five_one_parses_and_validates() {
        let fx = parse_compact(FIVE_ONE).unwrap();
        let sq = resolve(&fx).unwrap();
        assert_eq!(sq.intersection_size(), 1);
        assert_eq!(sq.mu(), 4);
    }

    #[test]
    fn three_chars_with_mu_four_rejected() {
        let bad = FIVE_ONE.replace("2345 1453", "234 1453");
        assert!(matches!(parse_compact(&bad), Err(Error::Parse { .. })));
    }
}
