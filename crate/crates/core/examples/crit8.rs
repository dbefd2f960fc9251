use muway_core::fixtures::default_fixture_dir;
use muway_core::spectrum::*;
use std::collections::BTreeMap;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let table = TheoremTable::load_shipped().unwrap();
    let itemized = Itemization::load_shipped().unwrap();
    let opts = AssembleOptions {
        fixture_dir: Some(default_fixture_dir()),
        ..Default::default()
    };
    let mut spectra: BTreeMap<usize, SpectrumSet> = BTreeMap::new();
    for n in 1..=15usize {
        let s = assemble(n, &opts, &spectra).unwrap();
        spectra.insert(n, s);
    }
    println!("assembled 1..15 in {:.2?}", t0.elapsed());
    for n in 7..=15usize {
        let assembled = &spectra[&n];
        let rep = reconcile(n, assembled, &table);
        // R verbatim
        assert_eq!(rep.undecided, table.row(n).r_set, "R mismatch at n={n}");
        for (kind, set) in itemized.for_order(n) {
            for k in set.members() {
                let row = &rep.rows[k];
                if table.row(n).r_set.contains(k) {
                    println!("n={n} k={k} itemized {kind} but table-undecided -> {:?} [flagged]", row.class);
                    continue;
                }
                if !matches!(row.class, Classification::ProvenIn) {
                    println!("FAIL n={n} k={k}: class {:?}, expected proven-in ({kind})", row.class);
                    continue;
                }
                if !row.evidence.contains(&kind) {
                    println!("FAIL n={n} k={k}: evidence {:?} lacks itemized kind {kind}", row.evidence);
                }
            }
        }
        println!("n={n} ok ({} findings)", rep.findings.len());
    }
    println!("total {:.2?}", t0.elapsed());
}
