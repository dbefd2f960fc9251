//! Exhaustive and witness-seeking backtracking over mu-way latin squares
//! with a prescribed intersection size.
//!
//! The outer loop enumerates candidate skeletons up to row/column
//! permutation (nonincreasing row sequence, equal-sum rows in nonincreasing
//! bitmask order, column multisets deduplicated); the inner loop fills all
//! cells layer-synchronously in row-major order, assigning fixed values or
//! mu-tuples in ascending lexicographic order. Layer 0's first row is
//! normalized to 1..n by symbol relabeling.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::square::MuWaySquare;

/// Which lemma-derived prune families are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruneSet {
    /// Sequence lemmas for mu=4, n in {5,6,7}, plus the line-sum domain
    /// restriction to {0..n-mu} u {n}.
    pub sequence: bool,
    /// Symbol-count lemmas: intersection-only elements and the transversal
    /// lower bound on their number.
    pub symbol_counts: bool,
    /// Row/column content conditions of the trade part.
    pub local_content: bool,
}

impl PruneSet {
    pub const ALL: PruneSet = PruneSet {
        sequence: true,
        symbol_counts: true,
        local_content: true,
    };
    pub const NONE: PruneSet = PruneSet {
        sequence: false,
        symbol_counts: false,
        local_content: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    FirstWitness,
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub mu: usize,
    pub n: usize,
    pub k: usize,
    pub mode: Mode,
    /// Node budget; 0 means unlimited. A node is one assignment attempt.
    pub budget: u64,
    pub prunes: PruneSet,
    pub threads: usize,
}

impl SearchSpec {
    pub fn new(mu: usize, n: usize, k: usize, mode: Mode) -> Self {
        SearchSpec {
            mu,
            n,
            k,
            mode,
            budget: 0,
            prunes: PruneSet::ALL,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Witness,
    ExhaustedNonexistent,
    BudgetExceeded,
}

#[derive(Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<MuWaySquare>,
    pub nodes: u64,
    pub skeletons: usize,
    pub wall: Duration,
}

impl SearchOutcome {
    /// Replayable certificate (no timing, see the determinism contract).
    pub fn certificate(&self, spec: &SearchSpec) -> String {
        let verdict = match self.status {
            SearchStatus::Witness => "WITNESS",
            SearchStatus::ExhaustedNonexistent => "NONEXISTENT",
            SearchStatus::BudgetExceeded => "BUDGET-EXCEEDED",
        };
        let mut prunes = Vec::new();
        if spec.prunes.sequence {
            prunes.push("sequence");
        }
        if spec.prunes.symbol_counts {
            prunes.push("symbol-counts");
        }
        if spec.prunes.local_content {
            prunes.push("local-content");
        }
        format!(
            "search: mu={} n={} k={} mode={}\nprunes: {}\nsymmetry: skeleton row/col sorted; layer-1 first row normalized\nverdict: {}\nskeletons: {}\nnodes: {}\ntraversal: v1\n",
            spec.mu,
            spec.n,
            spec.k,
            match spec.mode {
                Mode::Exhaustive => "exhaustive",
                Mode::FirstWitness => "first-witness",
            },
            if prunes.is_empty() { "none".into() } else { prunes.join(",") },
            verdict,
            self.skeletons,
            self.nodes,
        )
    }
}

/// Rejects row/column sequences hit by the order-5/6/7 sequence lemmas for
/// mu = 4. `seq` must be nonincreasing. Returns the offending pattern.
pub fn prune_row_sequence(mu: usize, n: usize, seq: &[usize]) -> Option<&'static str> {
    if mu != 4 {
        return None;
    }
    let count = |v: usize| seq.iter().filter(|&&x| x == v).count();
    match n {
        5 => {
            if count(5) >= 1 && count(1) >= 1 {
                return Some("{5,1}");
            }
        }
        6 => {
            if count(6) >= 1 && count(2) >= 1 {
                return Some("{6,2}");
            }
            if count(6) >= 2 && count(1) >= 1 {
                return Some("{6,6,1}");
            }
        }
        7 => {
            if count(7) >= 1 && count(3) >= 1 {
                return Some("{7,3}");
            }
            if count(7) >= 2 && count(2) >= 1 {
                return Some("{7,7,2}");
            }
            if count(7) >= 3 && count(1) >= 1 {
                return Some("{7,7,7,1}");
            }
        }
        _ => {}
    }
    None
}

/// Lower bound on the number of elements that appear only in the
/// intersection part (the transversal lemma): `ceil(n - (n^2-k)/mu)`.
pub fn required_intersection_only(mu: usize, n: usize, k: usize) -> usize {
    let v = n * n - k;
    n.saturating_sub(v / mu + if v % mu == 0 { 0 } else { 1 })
        .max(0)
}

/// Standalone symbol-count filter over a partial assignment summary:
/// `fixed_count[s-1]` counts intersection appearances of `s`, `in_trade`
/// marks symbols already present in the trade part.
pub fn prune_symbol_counts(
    mu: usize,
    n: usize,
    k: usize,
    fixed_count: &[usize],
    in_trade: &[bool],
) -> bool {
    for s in 0..n {
        if in_trade[s] && fixed_count[s] >= n - mu + 1 {
            return false;
        }
    }
    let trade_symbols = in_trade.iter().filter(|&&b| b).count();
    n - trade_symbols >= required_intersection_only(mu, n, k)
}

/// Standalone local-content filter over a partial trade (one grid per
/// layer, trade cells only). Checks the `|R_i n C_j| >= mu` bound with
/// optimistic completion, using exact sets when a line is complete.
pub fn prune_local_content(mu: usize, layers: &[Grid]) -> bool {
    if layers.is_empty() {
        return true;
    }
    let rows = layers[0].rows();
    let cols = layers[0].cols();
    let mut row_mask = vec![0u64; rows];
    let mut col_mask = vec![0u64; cols];
    let mut row_rem = vec![0usize; rows];
    let mut col_rem = vec![0usize; cols];
    for r in 0..rows {
        for c in 0..cols {
            let filled: Vec<_> = layers.iter().filter_map(|g| g.get(r, c)).collect();
            if filled.is_empty() {
                continue;
            }
            if filled.len() < layers.len() {
                row_rem[r] += 1;
                col_rem[c] += 1;
            }
            for s in filled {
                row_mask[r] |= 1 << s;
                col_mask[c] |= 1 << s;
            }
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            if layers[0].get(r, c).is_none() {
                continue;
            }
            let inter = (row_mask[r] & col_mask[c]).count_ones() as usize;
            let slack = mu * row_rem[r].min(col_rem[c])
                + if row_rem[r] == 0 && col_rem[c] == 0 {
                    0
                } else {
                    // symbols known on one line may still join the other
                    ((row_mask[r] | col_mask[c]) ^ (row_mask[r] & col_mask[c])).count_ones()
                        as usize
                };
            if inter + slack < mu {
                return false;
            }
        }
    }
    true
}

/// Skeleton candidates with `k` ones, up to row/column permutation.
pub fn enumerate_skeletons(n: usize, k: usize, prunes: PruneSet, mu: usize) -> Vec<Vec<u64>> {
    let mut seqs = Vec::new();
    let domain: Vec<usize> = if prunes.local_content {
        (0..=n.saturating_sub(mu)).chain(std::iter::once(n)).collect()
    } else {
        (0..=n).collect()
    };
    fn gen_seq(
        domain: &[usize],
        n: usize,
        left: usize,
        max: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = n - cur.len();
        for &v in domain.iter().rev() {
            if v > max || v > left {
                continue;
            }
            // even taking the max everywhere must reach the target
            if left > v * remaining {
                continue;
            }
            cur.push(v);
            gen_seq(domain, n, left - v, v, cur, out);
            cur.pop();
        }
    }
    gen_seq(&domain, n, k, n, &mut Vec::new(), &mut seqs);

    let mut out = Vec::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for seq in seqs {
        if prunes.sequence && prune_row_sequence(mu, n, &seq).is_some() {
            continue;
        }
        // choose a bitmask per row, nonincreasing within equal-sum runs
        let mut rows: Vec<u64> = Vec::with_capacity(n);
        let mut col_cnt = vec![0usize; n];
        fn masks_with_popcount(n: usize, k: usize) -> Vec<u64> {
            let mut v: Vec<u64> = (0u64..(1 << n)).filter(|m| m.count_ones() as usize == k).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        }
        let tables: Vec<Vec<u64>> = (0..=n).map(|k| masks_with_popcount(n, k)).collect();
        fn rec(
            n: usize,
            mu: usize,
            seq: &[usize],
            tables: &[Vec<u64>],
            rows: &mut Vec<u64>,
            col_cnt: &mut [usize],
            prunes: PruneSet,
            seen: &mut BTreeSet<Vec<u64>>,
            out: &mut Vec<Vec<u64>>,
        ) {
            let i = rows.len();
            if i == seq.len() {
                let col_seq: Vec<usize> = col_cnt.to_vec();
                if prunes.local_content
                    && col_seq.iter().any(|&c| c != n && c > n.saturating_sub(mu))
                {
                    return;
                }
                if prunes.sequence {
                    let mut sorted = col_seq.clone();
                    sorted.sort_unstable_by(|a, b| b.cmp(a));
                    if prune_row_sequence(mu, n, &sorted).is_some() {
                        return;
                    }
                }
                // canonical key: column vectors as bitstrings, sorted
                let mut cols: Vec<u64> = (0..n)
                    .map(|c| {
                        rows.iter()
                            .enumerate()
                            .fold(0u64, |acc, (r, m)| acc | (((m >> c) & 1) << r))
                    })
                    .collect();
                cols.sort_unstable();
                if seen.insert(cols) {
                    out.push(rows.clone());
                }
                return;
            }
            for &mask in &tables[seq[i]] {
                if i > 0 && seq[i] == seq[i - 1] && mask > rows[i - 1] {
                    continue;
                }
                let mut ok = true;
                for c in 0..n {
                    if (mask >> c) & 1 == 1 {
                        col_cnt[c] += 1;
                        if col_cnt[c] > n {
                            ok = false;
                        }
                    }
                }
                if ok {
                    rows.push(mask);
                    rec(n, mu, seq, tables, rows, col_cnt, prunes, seen, out);
                    rows.pop();
                }
                for c in 0..n {
                    if (mask >> c) & 1 == 1 {
                        col_cnt[c] -= 1;
                    }
                }
            }
        }
        rec(
            n,
            mu,
            &seq,
            &tables,
            &mut rows,
            &mut col_cnt,
            prunes,
            &mut seen,
            &mut out,
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FillResult {
    Found,
    Exhausted,
    Budget,
}

struct Filler<'a> {
    mu: usize,
    n: usize,
    k: usize,
    skeleton: &'a [u64],
    prunes: PruneSet,
    // per layer per line symbol masks
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    grids: Vec<Grid>,
    // symbol statistics for the symbol-count prunes
    fixed_count: Vec<usize>,
    in_trade_count: Vec<usize>,
    trade_symbols: usize,
    // trade-content bookkeeping (per layer per line, trade cells only)
    trade_row: Vec<u64>,
    trade_col: Vec<u64>,
    trade_row_rem: Vec<usize>,
    trade_col_rem: Vec<usize>,
    witness: Option<Vec<Grid>>,
    nodes: u64,
    local_budget: u64,
    global_nodes: &'a AtomicU64,
    cancel: &'a dyn Fn() -> bool,
}

impl<'a> Filler<'a> {
    fn full_mask(&self) -> u64 {
        ((1u128 << (self.n + 1)) - 2) as u64
    }

    fn avail(&self, t: usize, r: usize, c: usize) -> u64 {
        self.full_mask() & !self.row_used[t * self.n + r] & !self.col_used[t * self.n + c]
    }

    fn place(&mut self, r: usize, c: usize, vals: &[u8]) {
        for (t, &s) in vals.iter().enumerate() {
            self.grids[t].set_raw(r, c, s);
            self.row_used[t * self.n + r] |= 1 << s;
            self.col_used[t * self.n + c] |= 1 << s;
        }
    }

    fn unplace(&mut self, r: usize, c: usize, vals: &[u8]) {
        for (t, &s) in vals.iter().enumerate() {
            self.grids[t].set_raw(r, c, 0);
            self.row_used[t * self.n + r] &= !(1 << s);
            self.col_used[t * self.n + c] &= !(1 << s);
        }
    }

    fn is_fixed(&self, r: usize, c: usize) -> bool {
        (self.skeleton[r] >> c) & 1 == 1
    }

    fn count_node(&mut self) -> bool {
        self.nodes += 1;
        if self.local_budget != 0 && self.nodes > self.local_budget {
            return false;
        }
        if self.nodes % 4096 == 0 {
            self.global_nodes.fetch_add(4096, Ordering::Relaxed);
            if (self.cancel)() {
                return false;
            }
        }
        true
    }

    /// Symbol-count prunes after placing values at a cell.
    fn symbol_counts_ok(&self) -> bool {
        if !self.prunes.symbol_counts {
            return true;
        }
        let need = required_intersection_only(self.mu, self.n, self.k);
        if self.n - self.trade_symbols < need {
            return false;
        }
        true
    }

    fn check_fixed_symbol(&self, s: u8) -> bool {
        if !self.prunes.symbol_counts {
            return true;
        }
        // an element with >= n-mu+1 intersection appearances must stay out
        // of the trade part
        if self.in_trade_count[s as usize] > 0
            && self.fixed_count[s as usize] + 1 >= self.n - self.mu + 1
        {
            return false;
        }
        true
    }

    fn check_trade_symbols(&self, vals: &[u8]) -> bool {
        if !self.prunes.symbol_counts {
            return true;
        }
        for &s in vals {
            if self.fixed_count[s as usize] >= self.n - self.mu + 1 {
                return false;
            }
        }
        true
    }

    /// Trade-content propagation: every layer must be able to catch up with
    /// the union of line contents in the remaining trade cells.
    fn local_content_ok(&self, r: usize, c: usize) -> bool {
        if !self.prunes.local_content {
            return true;
        }
        let union_r = (0..self.mu).fold(0u64, |a, t| a | self.trade_row[t * self.n + r]);
        for t in 0..self.mu {
            if (union_r & !self.trade_row[t * self.n + r]).count_ones() as usize
                > self.trade_row_rem[r]
            {
                return false;
            }
        }
        let union_c = (0..self.mu).fold(0u64, |a, t| a | self.trade_col[t * self.n + c]);
        for t in 0..self.mu {
            if (union_c & !self.trade_col[t * self.n + c]).count_ones() as usize
                > self.trade_col_rem[c]
            {
                return false;
            }
        }
        // |R_i n C_j| >= mu with optimistic completion
        let inter = (union_r & union_c).count_ones() as usize;
        let slack = self.mu * self.trade_row_rem[r].min(self.trade_col_rem[c])
            + if self.trade_row_rem[r] == 0 && self.trade_col_rem[c] == 0 {
                0
            } else {
                (union_r ^ union_c).count_ones() as usize
            };
        inter + slack >= self.mu
    }

    fn dfs(&mut self, d: usize) -> FillResult {
        if d == self.n * self.n {
            self.witness = Some(self.grids.clone());
            return FillResult::Found;
        }
        let r = d / self.n;
        let c = d % self.n;
        if self.is_fixed(r, c) {
            let mut cand = (0..self.mu).fold(self.full_mask(), |a, t| a & self.avail(t, r, c));
            if r == 0 {
                cand &= 1u64 << (c + 1); // normalized first row
            }
            while cand != 0 {
                let s = cand.trailing_zeros() as u8;
                cand &= cand - 1;
                if !self.check_fixed_symbol(s) {
                    continue;
                }
                if !self.count_node() {
                    return FillResult::Budget;
                }
                let vals = vec![s; self.mu];
                self.place(r, c, &vals);
                self.fixed_count[s as usize] += 1;
                let res = self.dfs(d + 1);
                self.fixed_count[s as usize] -= 1;
                self.unplace(r, c, &vals);
                if res != FillResult::Exhausted {
                    return res;
                }
            }
            return FillResult::Exhausted;
        }
        // trade cell: assign a tuple of pairwise distinct symbols
        let mut tuple = vec![0u8; self.mu];
        self.tuple_dfs(d, r, c, &mut tuple, 0, 0)
    }

    fn tuple_dfs(
        &mut self,
        d: usize,
        r: usize,
        c: usize,
        tuple: &mut Vec<u8>,
        chosen: u64,
        t: usize,
    ) -> FillResult {
        if t == self.mu {
            if !self.check_trade_symbols(tuple) {
                return FillResult::Exhausted;
            }
            if !self.count_node() {
                return FillResult::Budget;
            }
            let vals = tuple.clone();
            self.place(r, c, &vals);
            for (q, &s) in vals.iter().enumerate() {
                self.trade_row[q * self.n + r] |= 1 << s;
                self.trade_col[q * self.n + c] |= 1 << s;
            }
            self.trade_row_rem[r] -= 1;
            self.trade_col_rem[c] -= 1;
            let mut new_trade = 0usize;
            for &s in &vals {
                if self.in_trade_count[s as usize] == 0 {
                    new_trade += 1;
                }
                self.in_trade_count[s as usize] += 1;
            }
            self.trade_symbols += new_trade;
            let ok = self.symbol_counts_ok() && self.local_content_ok(r, c);
            let res = if ok { self.dfs(d + 1) } else { FillResult::Exhausted };
            for &s in &vals {
                self.in_trade_count[s as usize] -= 1;
                if self.in_trade_count[s as usize] == 0 {
                    self.trade_symbols -= 1;
                }
            }
            self.trade_row_rem[r] += 1;
            self.trade_col_rem[c] += 1;
            for (q, &s) in vals.iter().enumerate() {
                self.trade_row[q * self.n + r] &= !(1 << s);
                self.trade_col[q * self.n + c] &= !(1 << s);
            }
            self.unplace(r, c, &vals);
            return res;
        }
        let mut m = self.avail(t, r, c) & !chosen;
        if r == 0 && t == 0 {
            m &= 1u64 << (c + 1);
        }
        while m != 0 {
            let s = m.trailing_zeros() as u8;
            m &= m - 1;
            tuple[t] = s;
            match self.tuple_dfs(d, r, c, tuple, chosen | (1 << s), t + 1) {
                FillResult::Exhausted => {}
                other => return other,
            }
        }
        FillResult::Exhausted
    }
}

fn fill_skeleton(
    spec: &SearchSpec,
    skeleton: &[u64],
    global_nodes: &AtomicU64,
    cancel: &dyn Fn() -> bool,
) -> (FillResult, Option<MuWaySquare>, u64) {
    let n = spec.n;
    let mut row_rem = vec![0usize; n];
    let mut col_rem = vec![0usize; n];
    for r in 0..n {
        for c in 0..n {
            if (skeleton[r] >> c) & 1 == 0 {
                row_rem[r] += 1;
                col_rem[c] += 1;
            }
        }
    }
    let mut filler = Filler {
        mu: spec.mu,
        n,
        k: spec.k,
        skeleton,
        prunes: spec.prunes,
        row_used: vec![0; spec.mu * n],
        col_used: vec![0; spec.mu * n],
        grids: (0..spec.mu).map(|_| Grid::new(n, n).unwrap()).collect(),
        fixed_count: vec![0; n + 1],
        in_trade_count: vec![0; n + 1],
        trade_symbols: 0,
        trade_row: vec![0; spec.mu * n],
        trade_col: vec![0; spec.mu * n],
        trade_row_rem: row_rem,
        trade_col_rem: col_rem,
        witness: None,
        nodes: 0,
        local_budget: spec.budget,
        global_nodes,
        cancel,
    };
    let res = filler.dfs(0);
    let witness = filler
        .witness
        .take()
        .map(|grids| MuWaySquare::assemble(grids).expect("witness must validate"));
    (res, witness, filler.nodes)
}

/// Runs the search described by `spec`.
pub fn search(spec: &SearchSpec) -> Result<SearchOutcome> {
    if spec.k > spec.n * spec.n {
        return Err(Error::Dimension(format!(
            "k={} exceeds n^2={}",
            spec.k,
            spec.n * spec.n
        )));
    }
    let t0 = Instant::now();
    let skeletons = enumerate_skeletons(spec.n, spec.k, spec.prunes, spec.mu);
    let global_nodes = AtomicU64::new(0);
    let mut total_nodes = 0u64;
    let threads = spec.threads.max(1);

    if threads == 1 {
        let mut budget_hit = false;
        let mut remaining = spec.budget;
        for sk in &skeletons {
            let mut local_spec = spec.clone();
            local_spec.budget = remaining;
            let (res, witness, nodes) =
                fill_skeleton(&local_spec, sk, &global_nodes, &|| false);
            total_nodes += nodes;
            if spec.budget != 0 {
                remaining = remaining.saturating_sub(nodes);
            }
            match res {
                FillResult::Found => {
                    let w = witness.unwrap();
                    debug_assert_eq!(w.intersection_size(), spec.k);
                    return Ok(SearchOutcome {
                        status: SearchStatus::Witness,
                        witness: Some(w),
                        nodes: total_nodes,
                        skeletons: skeletons.len(),
                        wall: t0.elapsed(),
                    });
                }
                FillResult::Budget => {
                    budget_hit = true;
                    break;
                }
                FillResult::Exhausted => {}
            }
        }
        return Ok(SearchOutcome {
            status: if budget_hit {
                SearchStatus::BudgetExceeded
            } else {
                SearchStatus::ExhaustedNonexistent
            },
            witness: None,
            nodes: total_nodes,
            skeletons: skeletons.len(),
            wall: t0.elapsed(),
        });
    }

    // parallel: independent skeletons, deterministic merge by index. A
    // witness cancels only siblings with larger indices, so the first
    // witness in skeleton order is identical for every thread count.
    let best_witness_idx = AtomicUsize::new(usize::MAX);
    let next = AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<(FillResult, Option<MuWaySquare>, u64)>>> =
        (0..skeletons.len()).map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= skeletons.len() {
                    break;
                }
                if idx > best_witness_idx.load(Ordering::SeqCst) {
                    continue;
                }
                let cancel = || idx > best_witness_idx.load(Ordering::SeqCst);
                let r = fill_skeleton(spec, &skeletons[idx], &global_nodes, &cancel);
                if matches!(r.0, FillResult::Found) {
                    best_witness_idx.fetch_min(idx, Ordering::SeqCst);
                }
                *results[idx].lock().unwrap() = Some(r);
            });
        }
    });
    let mut budget_hit = false;
    for (idx, slot) in results.iter().enumerate() {
        let slot = slot.lock().unwrap();
        let Some((res, witness, nodes)) = slot.as_ref() else {
            continue;
        };
        total_nodes += nodes;
        match res {
            FillResult::Found => {
                return Ok(SearchOutcome {
                    status: SearchStatus::Witness,
                    witness: witness.clone(),
                    nodes: total_nodes,
                    skeletons: skeletons.len(),
                    wall: t0.elapsed(),
                });
            }
            FillResult::Budget => budget_hit = true,
            FillResult::Exhausted => {}
        }
        let _ = idx;
    }
    Ok(SearchOutcome {
        status: if budget_hit {
            SearchStatus::BudgetExceeded
        } else {
            SearchStatus::ExhaustedNonexistent
        },
        witness: None,
        nodes: total_nodes,
        skeletons: skeletons.len(),
        wall: t0.elapsed(),
    })
}

/// Enumerates all latin squares of order `n` in lexicographic cell order.
pub fn all_latin_squares(n: usize) -> Vec<Grid> {
    let mut out = Vec::new();
    let mut g = Grid::new(n, n).unwrap();
    let full: u64 = ((1u128 << (n + 1)) - 2) as u64;
    let mut row_used = vec![0u64; n];
    let mut col_used = vec![0u64; n];
    fn rec(
        n: usize,
        d: usize,
        g: &mut Grid,
        row_used: &mut [u64],
        col_used: &mut [u64],
        full: u64,
        out: &mut Vec<Grid>,
    ) {
        if d == n * n {
            out.push(g.clone());
            return;
        }
        let (r, c) = (d / n, d % n);
        let mut m = full & !row_used[r] & !col_used[c];
        while m != 0 {
            let s = m.trailing_zeros() as u8;
            m &= m - 1;
            g.set_raw(r, c, s);
            row_used[r] |= 1 << s;
            col_used[c] |= 1 << s;
            rec(n, d + 1, g, row_used, col_used, full, out);
            row_used[r] &= !(1 << s);
            col_used[c] &= !(1 << s);
            g.set_raw(r, c, 0);
        }
    }
    rec(n, 0, &mut g, &mut row_used, &mut col_used, full, &mut out);
    out
}

/// Independent oracle: the exact set of intersection sizes over all
/// mu-tuples of order-n latin squares, found by layer-by-layer completion
/// pruned only by the cellwise all-equal-or-all-distinct rule.
///
/// Hard-capped at n <= 4 for mu = 4 unless `allow_large` is set.
pub fn brute_force_oracle(mu: usize, n: usize, allow_large: bool) -> Result<BTreeSet<usize>> {
    if !allow_large && n > 4 {
        return Err(Error::Dimension(format!(
            "oracle capped at n <= 4 (asked for n = {n})"
        )));
    }
    let squares = all_latin_squares(n);
    let mut found = BTreeSet::new();
    // compatible(tuple prefix, candidate): each cell all-equal or
    // all-distinct so far
    fn compatible(chosen: &[&Grid], cand: &Grid, n: usize) -> bool {
        for r in 0..n {
            for c in 0..n {
                let v = cand.get(r, c).unwrap();
                let first = chosen[0].get(r, c).unwrap();
                let all_eq = chosen.iter().all(|g| g.get(r, c).unwrap() == first);
                if all_eq {
                    // candidate may continue the equal run or start a
                    // distinct one only if the run has length 1
                    if v != first && chosen.len() > 1 {
                        return false;
                    }
                } else {
                    if chosen.iter().any(|g| g.get(r, c).unwrap() == v) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn rec<'a>(
        squares: &'a [Grid],
        chosen: &mut Vec<&'a Grid>,
        mu: usize,
        n: usize,
        found: &mut BTreeSet<usize>,
    ) {
        if chosen.len() == mu {
            let k = (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .filter(|&(r, c)| {
                    let first = chosen[0].get(r, c).unwrap();
                    chosen.iter().all(|g| g.get(r, c).unwrap() == first)
                })
                .count();
            found.insert(k);
            return;
        }
        for cand in squares {
            if chosen.is_empty() || compatible(chosen, cand, n) {
                chosen.push(cand);
                rec(squares, chosen, mu, n, found);
                chosen.pop();
            }
        }
    }
    rec(&squares, &mut Vec::new(), mu, n, &mut found);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_lemma_patterns() {
        assert_eq!(
            prune_row_sequence(4, 7, &[7, 3, 3, 3, 2, 1, 1]),
            Some("{7,3}")
        );
        assert_eq!(prune_row_sequence(4, 7, &[3, 3, 3, 3, 3, 3, 2]), None);
        assert_eq!(prune_row_sequence(4, 5, &[0, 0, 0, 0, 0]), None);
        assert_eq!(prune_row_sequence(4, 5, &[5, 1, 0, 0, 0]), Some("{5,1}"));
        assert_eq!(prune_row_sequence(4, 6, &[6, 6, 1, 1, 0, 0]), Some("{6,6,1}"));
        assert_eq!(prune_row_sequence(4, 6, &[6, 2, 0, 0, 0, 0]), Some("{6,2}"));
    }

    #[test]
    fn transversal_bound_values() {
        // mu=4, n=7, k=20: ceil(7 - 29/4) = 0
        assert_eq!(required_intersection_only(4, 7, 20), 0);
        // k = n^2 forces all symbols intersection-only
        assert_eq!(required_intersection_only(4, 5, 25), 5);
    }

    #[test]
    fn oracle_tiny_orders() {
        assert_eq!(
            brute_force_oracle(4, 1, false).unwrap(),
            BTreeSet::from([1])
        );
        assert_eq!(
            brute_force_oracle(4, 2, false).unwrap(),
            BTreeSet::from([4])
        );
        assert_eq!(
            brute_force_oracle(4, 3, false).unwrap(),
            BTreeSet::from([9])
        );
        assert!(brute_force_oracle(4, 5, false).is_err());
    }

    #[test]
    fn search_identical_layers_witness() {
        let spec = SearchSpec::new(4, 4, 16, Mode::FirstWitness);
        let out = search(&spec).unwrap();
        assert_eq!(out.status, SearchStatus::Witness);
        let w = out.witness.unwrap();
        assert_eq!(w.intersection_size(), 16);
    }

    #[test]
    fn search_n4_k0_witness() {
        let out = search(&SearchSpec::new(4, 4, 0, Mode::FirstWitness)).unwrap();
        assert_eq!(out.status, SearchStatus::Witness);
    }

    #[test]
    fn search_n4_k8_nonexistent() {
        let out = search(&SearchSpec::new(4, 4, 8, Mode::Exhaustive)).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNonexistent);
    }

    #[test]
    fn budget_reported() {
        let mut spec = SearchSpec::new(4, 5, 0, Mode::FirstWitness);
        spec.budget = 10;
        let out = search(&spec).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        assert!(out.nodes <= 10 + 1);
    }
}
