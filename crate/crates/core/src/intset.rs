//! Finite sets of nonnegative integers with the sumset and scaling
//! operators the spectrum recursions are written in.

use std::fmt;

/// Bitset-backed integer set. Sumsets are shift-or convolutions, so the
/// recursions stay cheap even for the order-64 tables.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntSet {
    words: Vec<u64>,
}

impl IntSet {
    pub fn new() -> Self {
        IntSet::default()
    }

    pub fn interval(lo: usize, hi_inclusive: usize) -> Self {
        let mut s = IntSet::new();
        if hi_inclusive < lo {
            return s;
        }
        for v in lo..=hi_inclusive {
            s.insert(v);
        }
        s
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = IntSet::new();
        s.insert(v);
        s
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (v % 64);
    }

    pub fn contains(&self, v: usize) -> bool {
        let w = v / 64;
        w < self.words.len() && (self.words[w] >> (v % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn max(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(i * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn members(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        for (i, &w) in self.words.iter().enumerate() {
            let mut m = w;
            while m != 0 {
                out.push(i * 64 + m.trailing_zeros() as usize);
                m &= m - 1;
            }
        }
        out
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        let mut words = vec![0u64; self.words.len().max(other.words.len())];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0);
        }
        IntSet { words }
    }

    pub fn union_with(&mut self, other: &IntSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i] |= w;
        }
    }

    pub fn intersect(&self, other: &IntSet) -> IntSet {
        let n = self.words.len().min(other.words.len());
        IntSet {
            words: (0..n).map(|i| self.words[i] & other.words[i]).collect(),
        }
    }

    pub fn minus(&self, other: &IntSet) -> IntSet {
        IntSet {
            words: self
                .words
                .iter()
                .enumerate()
                .map(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0))
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &IntSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    /// `{a + b : a in self, b in other}`.
    pub fn sumset(&self, other: &IntSet) -> IntSet {
        if self.is_empty() || other.is_empty() {
            return IntSet::new();
        }
        let hi = self.max().unwrap() + other.max().unwrap();
        let mut words = vec![0u64; hi / 64 + 1];
        for a in self.members() {
            let (shift_w, shift_b) = (a / 64, a % 64);
            for (i, &w) in other.words.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let lo = i + shift_w;
                words[lo] |= w << shift_b;
                if shift_b > 0 && lo + 1 < words.len() {
                    words[lo + 1] |= w >> (64 - shift_b);
                }
            }
        }
        IntSet { words }
    }

    /// `{c * a : a in self}` (the scalar-times-set notation of the
    /// recursion formulas).
    pub fn scale(&self, c: usize) -> IntSet {
        let mut s = IntSet::new();
        for a in self.members() {
            s.insert(c * a);
        }
        s
    }

    pub fn shift(&self, c: usize) -> IntSet {
        self.sumset(&IntSet::singleton(c))
    }

    /// Renders as maximal intervals, e.g. `[0,22] u {24,25,26,29,33,49}`.
    pub fn notation(&self) -> String {
        let m = self.members();
        if m.is_empty() {
            return "{}".to_string();
        }
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for v in m {
            match runs.last_mut() {
                Some((_, hi)) if *hi + 1 == v => *hi = v,
                _ => runs.push((v, v)),
            }
        }
        let mut intervals = Vec::new();
        let mut singles = Vec::new();
        for (lo, hi) in runs {
            if hi - lo >= 2 {
                intervals.push(format!("[{lo},{hi}]"));
            } else {
                singles.push(lo.to_string());
                if hi > lo {
                    singles.push(hi.to_string());
                }
            }
        }
        let mut parts = intervals;
        if !singles.is_empty() {
            parts.push(format!("{{{}}}", singles.join(",")));
        }
        parts.join(" u ")
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntSet({})", self.notation())
    }
}

impl FromIterator<usize> for IntSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = IntSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// Parses `[0,22] u {24,25} u 49`-style notation (used by the data files).
/// `-` or `{}` denote the empty set.
pub fn parse_notation(text: &str) -> Option<IntSet> {
    let mut s = IntSet::new();
    let text = text.trim();
    if text == "-" || text == "{}" {
        return Some(s);
    }
    for part in text.split(['u', '∪']) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some(body) = part.strip_prefix('[').and_then(|p| p.strip_suffix(']')) {
            let (lo, hi) = body.split_once(',')?;
            let lo: usize = lo.trim().parse().ok()?;
            let hi: usize = hi.trim().parse().ok()?;
            s.union_with(&IntSet::interval(lo, hi));
        } else if let Some(body) = part.strip_prefix('{').and_then(|p| p.strip_suffix('}')) {
            for v in body.split(',') {
                let v = v.trim();
                if v.is_empty() {
                    continue;
                }
                s.insert(v.parse().ok()?);
            }
        } else {
            s.insert(part.parse().ok()?);
        }
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sumset_matches_naive() {
        let a: IntSet = [0usize, 3, 7, 20].into_iter().collect();
        let b: IntSet = [1usize, 2, 50].into_iter().collect();
        let naive: IntSet = a
            .members()
            .iter()
            .flat_map(|&x| b.members().into_iter().map(move |y| x + y))
            .collect();
        assert_eq!(a.sumset(&b), naive);
    }

    #[test]
    fn notation_round_trip() {
        let s: IntSet = (0..=22).chain([24, 25, 26, 29, 33, 49]).collect();
        assert_eq!(s.notation(), "[0,22] u [24,26] u {29,33,49}");
        assert_eq!(parse_notation(&s.notation()).unwrap(), s);
        assert_eq!(parse_notation("-").unwrap(), IntSet::new());
    }

    #[test]
    fn scale_and_shift() {
        let s: IntSet = [0usize, 1, 5].into_iter().collect();
        assert_eq!(s.scale(9).members(), vec![0, 9, 45]);
        assert_eq!(s.shift(3).members(), vec![3, 4, 8]);
    }
}
