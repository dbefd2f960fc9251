use muway_core::search::{brute_force_oracle, search, Mode, SearchSpec, SearchStatus};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let oracle = brute_force_oracle(4, 4, false).unwrap();
    println!("oracle n=4: {:?} in {:.2?}", oracle, t0.elapsed());

    for k in [16usize, 0, 25, 5, 1] {
        let n = if k == 16 || k == 0 { 4 } else { 5 };
        let t = Instant::now();
        let out = search(&SearchSpec::new(4, n, k, Mode::FirstWitness)).unwrap();
        println!(
            "witness n={n} k={k}: {:?} nodes={} skel={} in {:.2?}",
            out.status, out.nodes, out.skeletons, t.elapsed()
        );
    }
    for k in [2usize, 9] {
        let t = Instant::now();
        let out = search(&SearchSpec::new(4, 5, k, Mode::Exhaustive)).unwrap();
        println!(
            "exhaust n=5 k={k}: {:?} nodes={} skel={} in {:.2?}",
            out.status, out.nodes, out.skeletons, t.elapsed()
        );
        assert_eq!(out.status, SearchStatus::ExhaustedNonexistent);
    }
    {
        let t = Instant::now();
        let out = search(&SearchSpec::new(4, 5, 0, Mode::FirstWitness)).unwrap();
        println!("witness n=5 k=0: {:?} nodes={} in {:.2?}", out.status, out.nodes, t.elapsed());
    }
    // prunes off
    use muway_core::search::PruneSet;
    for k in [2usize] {
        let t = Instant::now();
        let mut spec = SearchSpec::new(4, 5, k, Mode::Exhaustive);
        spec.prunes = PruneSet::NONE;
        let out = search(&spec).unwrap();
        println!("exhaust-npr n=5 k={k}: {:?} nodes={} skel={} in {:.2?}", out.status, out.nodes, out.skeletons, t.elapsed());
    }
    {
        let t = Instant::now();
        let mut set = Vec::new();
        for k in 0..=16 {
            let mut spec = SearchSpec::new(4, 4, k, Mode::Exhaustive);
            spec.prunes = PruneSet::NONE;
            let out = search(&spec).unwrap();
            if out.status == SearchStatus::Witness { set.push(k); }
        }
        println!("search sweep n=4 prunes-off: {:?} in {:.2?}", set, t.elapsed());
    }
    // full n=4 sweep prunes on
    let t = Instant::now();
    let mut set = Vec::new();
    for k in 0..=16 {
        let out = search(&SearchSpec::new(4, 4, k, Mode::Exhaustive)).unwrap();
        if out.status == SearchStatus::Witness {
            set.push(k);
        }
    }
    println!("search sweep n=4: {:?} in {:.2?}", set, t.elapsed());
}
