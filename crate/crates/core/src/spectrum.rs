//! Integer-set bookkeeping for the 4-way intersection spectrum: the outer
//! bound J, the doubling recursions, evidence-carrying assembled spectra,
//! and reconciliation against the shipped result table.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::compact::{complete_to_square, parse_compact, resolve};
use crate::construct::{
    gear1_params_iter, gear2_params_iter, gear_square, technique1_spectrum, trade_into_trade,
};
use crate::error::{Error, Result};
use crate::fixtures::load_fixture;
use crate::grid::{cyclic_square, Grid};
use crate::intset::{parse_notation, IntSet};
use crate::search::{search, Mode, SearchSpec, SearchStatus};
use crate::square::MuWaySquare;
use crate::trades::full_trade;

/// Volumes no 4-way latin trade attains.
fn impossible_volume(s: usize) -> bool {
    (1..=15).contains(&s) || matches!(s, 17 | 18 | 19 | 21 | 22 | 26)
}

/// `J^4[n]`: every `k` in `[0, n^2]` whose complementary trade volume is
/// attainable.
pub fn j_set(n: usize) -> IntSet {
    (0..=n * n).filter(|&k| !impossible_volume(n * n - k)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EvidenceKind {
    Trivial,
    FullTrade,
    ComputerSearch,
    Technique1,
    Technique3,
    Technique4,
    Proposition,
    TradeIntoTrade,
    PadRectangle,
}

impl EvidenceKind {
    pub fn parse(text: &str) -> Option<Self> {
        Some(match text {
            "trivial" => EvidenceKind::Trivial,
            "full-trade" => EvidenceKind::FullTrade,
            "computer-search" => EvidenceKind::ComputerSearch,
            "technique1" => EvidenceKind::Technique1,
            "technique3" => EvidenceKind::Technique3,
            "technique4" => EvidenceKind::Technique4,
            "proposition" => EvidenceKind::Proposition,
            "trade-into-trade" => EvidenceKind::TradeIntoTrade,
            "pad-rectangle" => EvidenceKind::PadRectangle,
            _ => return None,
        })
    }
}

impl fmt::Display for EvidenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EvidenceKind::Trivial => "trivial",
            EvidenceKind::FullTrade => "full-trade",
            EvidenceKind::ComputerSearch => "computer-search",
            EvidenceKind::Technique1 => "technique1",
            EvidenceKind::Technique3 => "technique3",
            EvidenceKind::Technique4 => "technique4",
            EvidenceKind::Proposition => "proposition",
            EvidenceKind::TradeIntoTrade => "trade-into-trade",
            EvidenceKind::PadRectangle => "pad-rectangle",
        };
        f.write_str(s)
    }
}

/// One piece of evidence for a spectrum member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub kind: EvidenceKind,
    /// Free-form tag: construction parameters, fixture path or certificate.
    pub tag: String,
    /// Whether the evidence is a validated witness object (as opposed to
    /// derived set arithmetic).
    pub witnessed: bool,
}

/// A set of achievable intersection sizes with provenance per member.
#[derive(Debug, Default)]
pub struct SpectrumSet {
    pub mu: usize,
    pub n: usize,
    pub members: IntSet,
    pub provenance: BTreeMap<usize, Vec<Evidence>>,
    /// Intersection sizes certified impossible by exhaustive search.
    pub nonexistent: BTreeMap<usize, String>,
}

impl SpectrumSet {
    fn add(&mut self, k: usize, ev: Evidence) {
        self.members.insert(k);
        let list = self.provenance.entry(k).or_default();
        if !list.contains(&ev) {
            list.push(ev);
        }
    }

    pub fn kinds_of(&self, k: usize) -> Vec<EvidenceKind> {
        self.provenance
            .get(&k)
            .map(|v| v.iter().map(|e| e.kind).collect())
            .unwrap_or_default()
    }

    pub fn has_witness(&self, k: usize) -> bool {
        self.provenance
            .get(&k)
            .is_some_and(|v| v.iter().any(|e| e.witnessed))
    }
}

/// `I^4[2n]` lower bound by doubling: `[0, 3n^2] u (I_n + 3n^2)` under the
/// guard `I_n >= [0, ceil(n^2/2)]`, always unioned with the order-doubling
/// sumset `I+I+I+I` and the embeddings of the supplied smaller spectra.
pub fn recursion_2n(i_n: &IntSet, n: usize, smaller: &BTreeMap<usize, IntSet>) -> IntSet {
    let mut out = IntSet::new();
    let guard = IntSet::interval(0, n * n / 2 + (n * n) % 2);
    if guard.is_subset_of(i_n) {
        out.union_with(&IntSet::interval(0, 3 * n * n));
        out.union_with(&i_n.shift(3 * n * n));
    }
    let four = i_n.sumset(i_n).sumset(i_n).sumset(i_n);
    out.union_with(&four);
    let big = 2 * n;
    for (&i, set) in smaller.iter().filter(|(&i, _)| i <= n) {
        out.union_with(&set.shift(big * big - i * i));
    }
    out
}

/// `I^4[2n+1]` lower bound: `[0, (2n+1)^2 - n^2] u (I_n + (2n+1)^2 - n^2)`
/// under the guard `I_n >= [0, 7n+4]`, plus the full technique-1 spectrum.
pub fn recursion_2n_plus_1(
    i_n: &IntSet,
    n: usize,
    smaller: &BTreeMap<usize, IntSet>,
) -> Result<IntSet> {
    if n < 4 {
        return Err(Error::Dimension(format!("recursion needs n >= 4, got {n}")));
    }
    let big = 2 * n + 1;
    let offset = big * big - n * n;
    let mut out = IntSet::new();
    if IntSet::interval(0, 7 * n + 4).is_subset_of(i_n) {
        out.union_with(&IntSet::interval(0, offset));
        out.union_with(&i_n.shift(offset));
    }
    out.union_with(&technique1_spectrum(n, i_n, smaller)?);
    Ok(out)
}

/// Extends an `r x n0` 4-way rectangle to order `target`: fresh fixed
/// symbols fill the appended columns (a cyclic `r x (target-n0)` block) and
/// identical rows complete the square. Reports the resulting intersection,
/// which is `target^2 - volume(rect)`.
pub fn pad_rectangle(rect: &MuWaySquare, target: usize) -> Result<MuWaySquare> {
    let n0 = rect.order();
    let r = rect.rows();
    if target < n0 {
        return Err(Error::Dimension(format!(
            "target order {target} below rectangle order {n0}"
        )));
    }
    let fresh = target - n0;
    if fresh > 0 && r > fresh {
        return Err(Error::CompletionFailure(format!(
            "cannot pad {r} rows with {fresh} fresh symbols; widen the target"
        )));
    }
    let layers = rect
        .layers()
        .iter()
        .map(|g| {
            let mut out = Grid::new(r, target)?;
            for i in 0..r {
                for j in 0..n0 {
                    out.set_raw(i, j, g.get(i, j).unwrap());
                }
                for j in 0..fresh {
                    out.set_raw(i, n0 + j, (n0 + ((i + j) % fresh) + 1) as u8);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let wide = MuWaySquare::assemble(layers)?;
    complete_to_square(&wide)
}

/// The shipped transcription of the final result table.
#[derive(Debug, Clone)]
pub struct TheoremRow {
    pub n: usize,
    pub equality: bool,
    pub r_set: IntSet,
    pub excluded: IntSet,
}

#[derive(Debug, Clone)]
pub struct TheoremTable {
    pub rows: BTreeMap<usize, TheoremRow>,
}

/// SHA-256 of the shipped table file; reconciliation refuses a table that
/// does not match its transcription checksum.
pub const MAIN_THEOREM_SHA256: &str =
    "d67342b05950834c514a662f693d69da7875a2830fa77213a14e7a29391166ff";

pub const MAIN_THEOREM_TSV: &str = include_str!("../../../data/main_theorem.tsv");
pub const ITEMIZED_TSV: &str = include_str!("../../../data/itemized_existence.tsv");

impl TheoremTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: format!("expected 4 columns, found {}", cols.len()),
                });
            }
            let n: usize = cols[0].parse().map_err(|_| Error::Parse {
                line: no + 1,
                msg: "bad n".into(),
            })?;
            let equality = match cols[1] {
                "eq" => true,
                "superset" => false,
                other => {
                    return Err(Error::Parse {
                        line: no + 1,
                        msg: format!("bad claim {other:?}"),
                    })
                }
            };
            let r_set = parse_notation(cols[2]).ok_or(Error::Parse {
                line: no + 1,
                msg: "bad R set".into(),
            })?;
            let excluded = parse_notation(cols[3]).ok_or(Error::Parse {
                line: no + 1,
                msg: "bad excluded set".into(),
            })?;
            rows.insert(
                n,
                TheoremRow {
                    n,
                    equality,
                    r_set,
                    excluded,
                },
            );
        }
        Ok(TheoremTable { rows })
    }

    pub fn load_shipped() -> Result<Self> {
        let sum = sha256_hex(MAIN_THEOREM_TSV.as_bytes());
        if sum != MAIN_THEOREM_SHA256 {
            return Err(Error::Internal(format!(
                "main theorem table checksum mismatch: {sum}"
            )));
        }
        Self::parse(MAIN_THEOREM_TSV)
    }

    /// Table row for `n`, extending the `n >= 16` equality rule.
    pub fn row(&self, n: usize) -> TheoremRow {
        if let Some(r) = self.rows.get(&n) {
            return r.clone();
        }
        TheoremRow {
            n,
            equality: n >= 16 || n <= 6,
            r_set: IntSet::new(),
            excluded: IntSet::new(),
        }
    }

    /// Claimed lower bound for `n`: `J` for equality rows, else
    /// `J \ (R u excluded)`.
    pub fn lower_bound(&self, n: usize) -> IntSet {
        let row = self.row(n);
        let j = j_set(n);
        if row.equality {
            j
        } else {
            j.minus(&row.r_set).minus(&row.excluded)
        }
    }

    /// Consistency of the four parts per row; returns human-readable flags
    /// instead of assuming them.
    pub fn consistency_flags(&self) -> Vec<String> {
        let mut flags = Vec::new();
        for row in self.rows.values() {
            let j = j_set(row.n);
            if !row.r_set.is_subset_of(&j) {
                flags.push(format!(
                    "n={}: R contains values outside J: {:?}",
                    row.n,
                    row.r_set.minus(&j)
                ));
            }
            if !row.excluded.is_subset_of(&j) {
                flags.push(format!(
                    "n={}: excluded set leaves J: {:?}",
                    row.n,
                    row.excluded.minus(&j)
                ));
            }
            if !row.r_set.intersect(&row.excluded).is_empty() {
                flags.push(format!("n={}: R and excluded overlap", row.n));
            }
        }
        flags
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// The explicit per-order existence items with their stated evidence kind.
#[derive(Debug, Clone)]
pub struct Itemization {
    pub items: Vec<(usize, EvidenceKind, IntSet)>,
}

impl Itemization {
    pub fn load_shipped() -> Result<Self> {
        Self::parse(ITEMIZED_TSV)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut items = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: "expected 3 columns".into(),
                });
            }
            let n = cols[0].parse().map_err(|_| Error::Parse {
                line: no + 1,
                msg: "bad n".into(),
            })?;
            let kind = EvidenceKind::parse(cols[1]).ok_or(Error::Parse {
                line: no + 1,
                msg: format!("bad kind {:?}", cols[1]),
            })?;
            let set = parse_notation(cols[2]).ok_or(Error::Parse {
                line: no + 1,
                msg: "bad set".into(),
            })?;
            items.push((n, kind, set));
        }
        Ok(Itemization { items })
    }

    pub fn for_order(&self, n: usize) -> Vec<(EvidenceKind, IntSet)> {
        self.items
            .iter()
            .filter(|(m, _, _)| *m == n)
            .map(|(_, k, s)| (*k, s.clone()))
            .collect()
    }
}

/// Ingredient switches for [`assemble`].
#[derive(Debug, Clone)]
pub struct AssembleOptions {
    pub fixture_dir: Option<std::path::PathBuf>,
    pub full_trades: bool,
    pub gear_sweep: bool,
    pub trade_into_trade_examples: bool,
    pub pad_rectangles: bool,
    pub technique1: bool,
    pub proposition: bool,
    /// Run first-witness searches (and nonexistence certification) for
    /// orders up to this bound.
    pub search_up_to: usize,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions {
            fixture_dir: None,
            full_trades: true,
            gear_sweep: true,
            trade_into_trade_examples: true,
            pad_rectangles: true,
            technique1: true,
            proposition: true,
            search_up_to: 5,
        }
    }
}

/// The 2-way order-4 host with 9 fixed cells used by the worked
/// trade-into-trade example.
pub fn example_host_2way() -> Result<MuWaySquare> {
    let l1 = Grid::from_rows(&[
        vec![Some(1), Some(2), Some(3), Some(4)],
        vec![Some(3), Some(4), Some(1), Some(2)],
        vec![Some(2), Some(3), Some(4), Some(1)],
        vec![Some(4), Some(1), Some(2), Some(3)],
    ])?;
    let l2 = Grid::from_rows(&[
        vec![Some(1), Some(2), Some(3), Some(4)],
        vec![Some(3), Some(4), Some(2), Some(1)],
        vec![Some(2), Some(1), Some(4), Some(3)],
        vec![Some(4), Some(3), Some(1), Some(2)],
    ])?;
    MuWaySquare::assemble(vec![l1, l2])
}

/// Assembles the proven spectrum for order `n` from the requested evidence
/// sources. Every witness-backed member is fully re-validated on the way in;
/// a failing evidence item aborts assembly.
pub fn assemble(
    n: usize,
    opts: &AssembleOptions,
    smaller: &BTreeMap<usize, SpectrumSet>,
) -> Result<SpectrumSet> {
    let mu = 4;
    let mut out = SpectrumSet {
        mu,
        n,
        ..Default::default()
    };
    // the trivial all-identical witness
    if n >= 1 {
        let sq = MuWaySquare::assemble(vec![cyclic_square(n); mu])?;
        debug_assert_eq!(sq.intersection_size(), n * n);
        out.add(
            n * n,
            Evidence {
                kind: EvidenceKind::Trivial,
                tag: "identical-layers".into(),
                witnessed: true,
            },
        );
    }
    if opts.full_trades {
        for m in mu..=n {
            let t = full_trade(mu, m, n)?;
            let rect = MuWaySquare::assemble(t.layers().to_vec())?;
            let sq = complete_to_square(&rect)?;
            let k = n * n - m * n;
            if sq.intersection_size() != k {
                return Err(Error::Internal(format!(
                    "full trade witness for k={k} came out as {}",
                    sq.intersection_size()
                )));
            }
            out.add(
                k,
                Evidence {
                    kind: EvidenceKind::FullTrade,
                    tag: format!("full-trade {m}x{n}"),
                    witnessed: true,
                },
            );
        }
    }
    if opts.gear_sweep {
        for k in 0..=(n * n) {
            for p in gear1_params_iter(mu, n, k) {
                let Ok(sq) = gear_square(&p) else { continue };
                debug_assert_eq!(sq.intersection_size(), k);
                out.add(
                    k,
                    Evidence {
                        kind: EvidenceKind::Technique3,
                        tag: format!("gear1 a={} b={} x={} y={}", p.a, p.b, p.x, p.y),
                        witnessed: true,
                    },
                );
                break;
            }
            for p in gear2_params_iter(mu, n, k) {
                let Ok(sq) = gear_square(&p) else { continue };
                debug_assert_eq!(sq.intersection_size(), k);
                out.add(
                    k,
                    Evidence {
                        kind: EvidenceKind::Technique4,
                        tag: format!(
                            "gear2 a={} b={} c={} x={} y={}",
                            p.a, p.b, p.c, p.x, p.y
                        ),
                        witnessed: true,
                    },
                );
                break;
            }
        }
    }
    if opts.trade_into_trade_examples && n == 8 {
        let host = example_host_2way()?;
        let plugs = vec![full_trade(2, 2, 2)?; 2];
        let sq = trade_into_trade(&host, &plugs)?;
        out.add(
            sq.intersection_size(),
            Evidence {
                kind: EvidenceKind::TradeIntoTrade,
                tag: "order-4 host with 9 fixed cells, order-2 plugs".into(),
                witnessed: true,
            },
        );
    }
    if let Some(dir) = &opts.fixture_dir {
        let report = crate::fixtures::verify_dir(dir)?;
        for res in &report.results {
            if let crate::fixtures::FixtureStatus::Pass { n: fn_, k, mu: fmu } = res.status {
                if fn_ == n && fmu == mu {
                    out.add(
                        k,
                        Evidence {
                            kind: EvidenceKind::ComputerSearch,
                            tag: format!(
                                "fixture {}",
                                res.path.file_name().unwrap_or_default().to_string_lossy()
                            ),
                            witnessed: true,
                        },
                    );
                }
            }
        }
    }
    if opts.pad_rectangles {
        if let Some(dir) = &opts.fixture_dir {
            for (file, vol) in [("n10_k077.r5.mwls", 23usize), ("n12_k117.r5.mwls", 27)] {
                let path = dir.join("appendix").join(file);
                if !path.exists() {
                    continue;
                }
                let fx = load_fixture(&path)?;
                let rows = 5;
                let n0 = fx.label.n;
                if n >= n0 && (n == n0 || n - n0 >= rows) {
                    let rect = match &fx.payload {
                        crate::compact::CompactPayload::Full(sq) => sq.clone(),
                        _ => continue,
                    };
                    let sq = pad_rectangle(&rect, n)?;
                    let k = n * n - vol;
                    if sq.intersection_size() != k {
                        return Err(Error::Internal(format!(
                            "padding {file} to order {n} produced k={}",
                            sq.intersection_size()
                        )));
                    }
                    out.add(
                        k,
                        Evidence {
                            kind: EvidenceKind::PadRectangle,
                            tag: format!("pad {file} to order {n}"),
                            witnessed: true,
                        },
                    );
                }
            }
        }
    }
    if opts.search_up_to >= n {
        for k in j_set(n).members() {
            let spec = SearchSpec::new(mu, n, k, Mode::Exhaustive);
            let outcome = search(&spec)?;
            match outcome.status {
                SearchStatus::Witness => {
                    out.add(
                        k,
                        Evidence {
                            kind: EvidenceKind::ComputerSearch,
                            tag: outcome.certificate(&spec).replace('\n', "; "),
                            witnessed: true,
                        },
                    );
                }
                SearchStatus::ExhaustedNonexistent => {
                    out.nonexistent
                        .insert(k, outcome.certificate(&spec).replace('\n', "; "));
                }
                SearchStatus::BudgetExceeded => {}
            }
        }
    }
    let smaller_sets: BTreeMap<usize, IntSet> = smaller
        .iter()
        .map(|(&i, s)| (i, s.members.clone()))
        .collect();
    if opts.technique1 && n % 2 == 1 && n >= 9 {
        let m = (n - 1) / 2;
        if let Some(im) = smaller.get(&m) {
            let set = technique1_spectrum(m, &im.members, &smaller_sets)?;
            for k in set.members() {
                out.add(
                    k,
                    Evidence {
                        kind: EvidenceKind::Technique1,
                        tag: format!("technique1 formula from order {m}"),
                        witnessed: false,
                    },
                );
            }
        }
    }
    if opts.proposition && n % 2 == 0 && n >= 8 {
        let m = n / 2;
        if let Some(im) = smaller.get(&m) {
            let mut set = im
                .members
                .sumset(&im.members)
                .sumset(&im.members)
                .sumset(&im.members);
            for (&i, s) in smaller.iter().filter(|(&i, _)| i <= m) {
                set.union_with(&s.members.shift(n * n - i * i));
            }
            for k in set.members() {
                out.add(
                    k,
                    Evidence {
                        kind: EvidenceKind::Proposition,
                        tag: format!("doubling sumset from order {m}"),
                        witnessed: false,
                    },
                );
            }
        }
    }
    // the outer bound is a hard invariant of every evidence source
    if !out.members.is_subset_of(&j_set(n)) {
        return Err(Error::Internal(format!(
            "assembled members escape J: {:?}",
            out.members.minus(&j_set(n))
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    ProvenIn,
    ProvenOut,
    Undecided,
    Inconsistent,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::ProvenIn => "proven-in",
            Classification::ProvenOut => "proven-out",
            Classification::Undecided => "undecided",
            Classification::Inconsistent => "inconsistent-with-theorem",
        })
    }
}

#[derive(Debug)]
pub struct ReconcileRow {
    pub k: usize,
    pub class: Classification,
    pub evidence: Vec<EvidenceKind>,
    pub note: Option<String>,
}

#[derive(Debug)]
pub struct ReconcileReport {
    pub n: usize,
    pub rows: Vec<ReconcileRow>,
    pub undecided: IntSet,
    pub findings: Vec<String>,
}

/// Classifies every `k` in `[0, n^2]` against the table, reporting (never
/// repairing) discrepancies between local evidence and the claimed sets.
pub fn reconcile(n: usize, assembled: &SpectrumSet, table: &TheoremTable) -> ReconcileReport {
    let j = j_set(n);
    let row = table.row(n);
    let lb = table.lower_bound(n);
    let mut rows = Vec::new();
    let mut findings = table.consistency_flags();
    for k in 0..=(n * n) {
        let evidence = assembled.kinds_of(k);
        let witnessed = assembled.has_witness(k);
        let (class, note) = if !j.contains(k) {
            if witnessed {
                (
                    Classification::Inconsistent,
                    Some("witness exists for a volume-impossible k".to_string()),
                )
            } else {
                (Classification::ProvenOut, None)
            }
        } else if row.r_set.contains(k) {
            if witnessed {
                (
                    Classification::Inconsistent,
                    Some("local witness for a value the table leaves undecided".to_string()),
                )
            } else if !evidence.is_empty() {
                (
                    Classification::Undecided,
                    Some("derived-set evidence only; table classification kept".to_string()),
                )
            } else {
                (Classification::Undecided, None)
            }
        } else if lb.contains(k) {
            if assembled.nonexistent.contains_key(&k) {
                (
                    Classification::Inconsistent,
                    Some("exhaustive search refutes a table-claimed value".to_string()),
                )
            } else {
                (Classification::ProvenIn, None)
            }
        } else {
            // k in J \ (LB u R): excluded by the table
            if witnessed {
                (
                    Classification::Inconsistent,
                    Some("local witness for a table-excluded value".to_string()),
                )
            } else {
                (Classification::ProvenOut, None)
            }
        };
        if let Some(note) = &note {
            findings.push(format!("n={n} k={k}: {note}"));
        }
        rows.push(ReconcileRow {
            k,
            class,
            evidence,
            note,
        });
    }
    ReconcileReport {
        n,
        rows,
        undecided: row.r_set.clone(),
        findings,
    }
}

impl ReconcileReport {
    pub fn render_text(&self) -> String {
        let mut out = format!("reconciliation for n={}\n", self.n);
        out.push_str(&format!("undecided (R): {}\n", self.undecided.notation()));
        let mut by_class: BTreeMap<&'static str, Vec<usize>> = BTreeMap::new();
        for row in &self.rows {
            let label = match row.class {
                Classification::ProvenIn => "proven-in",
                Classification::ProvenOut => "proven-out",
                Classification::Undecided => "undecided",
                Classification::Inconsistent => "inconsistent-with-theorem",
            };
            by_class.entry(label).or_default().push(row.k);
        }
        for (label, ks) in by_class {
            let set: IntSet = ks.into_iter().collect();
            out.push_str(&format!("{label}: {}\n", set.notation()));
        }
        for f in &self.findings {
            out.push_str(&format!("finding: {f}\n"));
        }
        out
    }
}

/// Loads and resolves a single fixture file into a validated square, for
/// callers that need a specific appendix object.
pub fn fixture_square(path: &Path) -> Result<MuWaySquare> {
    let fx = parse_compact(&std::fs::read_to_string(path)?)?;
    resolve(&fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_set_examples() {
        let j7 = j_set(7);
        let expect: IntSet = (0..=22).chain([24, 25, 26, 29, 33, 49]).collect();
        assert_eq!(j7, expect);
        assert_eq!(j_set(4).members(), vec![0, 16]);
        assert_eq!(j_set(1).members(), vec![1]);
        assert_eq!(j_set(2).members(), vec![4]);
        assert_eq!(j_set(3).members(), vec![9]);
    }

    #[test]
    fn theorem_table_loads() {
        let t = TheoremTable::load_shipped().unwrap();
        assert!(t.consistency_flags().is_empty());
        assert_eq!(t.row(7).r_set.members(), vec![18]);
        assert!(t.row(16).equality);
        assert!(t.row(40).equality);
        // n=7 lower bound from the table matches the stated one
        let lb7: IntSet = (0..=17).chain([19, 21, 49]).collect();
        assert_eq!(t.lower_bound(7), lb7);
    }

    #[test]
    fn recursion_equalities_hold_upward() {
        // I[16] = J[16] and the guards hold, so doubling reproduces J
        let smaller: BTreeMap<usize, IntSet> =
            (1..=16).map(|i| (i, j_set(i))).collect();
        let i32 = recursion_2n(&j_set(16), 16, &smaller);
        assert_eq!(i32, j_set(32));
        let i33 = recursion_2n_plus_1(&j_set(16), 16, &smaller).unwrap();
        assert_eq!(i33, j_set(33));
    }

    #[test]
    fn technique1_contains_paper_list_for_order_9() {
        let smaller: BTreeMap<usize, IntSet> = [
            (1, IntSet::singleton(1)),
            (2, IntSet::singleton(4)),
            (3, IntSet::singleton(9)),
            (4, j_set(4)),
        ]
        .into_iter()
        .collect();
        let i4: IntSet = [0usize, 16].into_iter().collect();
        let set = technique1_spectrum(4, &i4, &smaller).unwrap();
        for k in [1, 5, 16, 17, 20, 21, 25, 29, 37, 41, 61, 65] {
            assert!(set.contains(k), "missing {k}");
        }
        assert!(set.is_subset_of(&j_set(9)));
    }

    #[test]
    fn pad_rectangle_trivial() {
        let rect = MuWaySquare::assemble(vec![cyclic_square(6); 4]).unwrap();
        let sq = pad_rectangle(&rect, 6).unwrap();
        assert_eq!(sq.intersection_size(), 36);
    }
}
