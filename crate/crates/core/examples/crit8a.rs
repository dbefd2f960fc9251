use muway_core::fixtures::default_fixture_dir;
use muway_core::spectrum::*;
use std::collections::BTreeMap;
use std::time::Instant;

fn main() {
    let opts = AssembleOptions {
        fixture_dir: Some(default_fixture_dir()),
        ..Default::default()
    };
    let mut spectra: BTreeMap<usize, SpectrumSet> = BTreeMap::new();
    for n in 1..=15usize {
        let t0 = Instant::now();
        let s = assemble(n, &opts, &spectra).unwrap();
        println!("n={n}: |members|={} in {:.2?}", s.members.len(), t0.elapsed());
        spectra.insert(n, s);
    }
}
