//! The canonical "MWLS" text format.
//!
//! Line 1 is `mu n r`; then `mu` blocks, each `r` lines of `n` whitespace-
//! separated symbol tokens, blocks separated by one blank line. `.` denotes
//! an empty cell. Symbols are `1..9` then `a..z` for `n <= 35`, decimal
//! tokens otherwise.

use crate::error::{Error, Result};
use crate::grid::{Grid, Symbol};
use crate::square::MuWaySquare;
use crate::trade::MuWayTrade;

/// Renders one symbol for order `n`.
pub fn symbol_token(s: Symbol, n: usize) -> String {
    if n <= 35 {
        if s <= 9 {
            (b'0' + s) as char
        } else {
            (b'a' + s - 10) as char
        }
        .to_string()
    } else {
        s.to_string()
    }
}

/// Parses one symbol character (compact alphabet, `n <= 35`).
pub fn symbol_from_char(ch: char) -> Option<Symbol> {
    match ch {
        '1'..='9' => Some(ch as u8 - b'0'),
        'a'..='z' => Some(ch as u8 - b'a' + 10),
        _ => None,
    }
}

fn parse_token(tok: &str, n: usize, line: usize) -> Result<Option<Symbol>> {
    if tok == "." {
        return Ok(None);
    }
    let v = if n <= 35 {
        let mut chars = tok.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => symbol_from_char(c),
            _ => None,
        }
    } else {
        tok.parse::<u8>().ok()
    };
    match v {
        Some(s) if s as usize <= n => Ok(Some(s)),
        _ => Err(Error::Parse {
            line,
            msg: format!("bad symbol token {tok:?} for order {n}"),
        }),
    }
}

#[derive(Debug)]
pub enum Parsed {
    /// Fully filled object: a square when `r == n`, a rectangle otherwise.
    Square(MuWaySquare),
    /// Partially filled object satisfying the trade invariants.
    Trade(MuWayTrade),
}

impl Parsed {
    pub fn mu(&self) -> usize {
        match self {
            Parsed::Square(s) => s.mu(),
            Parsed::Trade(t) => t.mu(),
        }
    }
}

pub fn render_square(sq: &MuWaySquare) -> String {
    render_layers(sq.mu(), sq.order(), sq.rows(), sq.layers())
}

pub fn render_trade(t: &MuWayTrade) -> String {
    render_layers(t.mu(), t.cols(), t.rows(), t.layers())
}

fn render_layers(mu: usize, n: usize, r: usize, layers: &[Grid]) -> String {
    let mut out = format!("{mu} {n} {r}\n");
    for (t, g) in layers.iter().enumerate() {
        if t > 0 {
            out.push('\n');
        }
        for i in 0..r {
            let row: Vec<String> = (0..n)
                .map(|j| match g.get(i, j) {
                    Some(s) => symbol_token(s, n),
                    None => ".".to_string(),
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parses MWLS text into a validated square/rectangle or trade; the kind is
/// inferred from the fill pattern.
pub fn parse(text: &str) -> Result<Parsed> {
    let mut lines = text.lines().enumerate();
    let (hdr_no, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Parse {
            line: hdr_no + 1,
            msg: format!("expected header `mu n r`, got {header:?}"),
        });
    }
    let mu: usize = parts[0].parse().map_err(|_| Error::Parse {
        line: hdr_no + 1,
        msg: "bad mu".into(),
    })?;
    let n: usize = parts[1].parse().map_err(|_| Error::Parse {
        line: hdr_no + 1,
        msg: "bad n".into(),
    })?;
    let r: usize = parts[2].parse().map_err(|_| Error::Parse {
        line: hdr_no + 1,
        msg: "bad r".into(),
    })?;

    let mut layers = Vec::with_capacity(mu);
    let mut current: Vec<Vec<Option<Symbol>>> = Vec::with_capacity(r);
    for (no, raw) in lines {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::Parse {
                line: no + 1,
                msg: format!("expected {n} tokens, found {}", toks.len()),
            });
        }
        let row = toks
            .iter()
            .map(|t| parse_token(t, n, no + 1))
            .collect::<Result<Vec<_>>>()?;
        current.push(row);
        if current.len() == r {
            layers.push(Grid::from_rows(&current)?);
            current.clear();
        }
    }
    if !current.is_empty() || layers.len() != mu {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!(
                "truncated input: got {} full layers of {mu}, {} stray rows",
                layers.len(),
                current.len()
            ),
        });
    }
    let full = layers.iter().all(|g| g.is_full());
    if full {
        Ok(Parsed::Square(MuWaySquare::assemble(layers)?))
    } else {
        Ok(Parsed::Trade(MuWayTrade::new(layers)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::cyclic_square;

    #[test]
    fn square_round_trip() {
        let sq = MuWaySquare::assemble(vec![cyclic_square(11); 4]).unwrap();
        let text = render_square(&sq);
        match parse(&text).unwrap() {
            Parsed::Square(back) => assert_eq!(back, sq),
            _ => panic!("expected square"),
        }
    }

    #[test]
    fn truncated_input_is_a_syntax_error() {
        let sq = MuWaySquare::assemble(vec![cyclic_square(5); 4]).unwrap();
        let text = render_square(&sq);
        let cut: String = text.lines().take(12).collect::<Vec<_>>().join("\n");
        assert!(matches!(parse(&cut), Err(Error::Parse { .. })));
    }

    #[test]
    fn tokens_above_nine_use_letters() {
        assert_eq!(symbol_token(10, 12), "a");
        assert_eq!(symbol_token(35, 35), "z");
        assert_eq!(symbol_token(10, 40), "10");
        assert_eq!(symbol_from_char('c'), Some(12));
    }
}
