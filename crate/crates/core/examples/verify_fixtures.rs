use muway_core::fixtures::{default_fixture_dir, verify_dir, FixtureStatus};

fn main() {
    let report = verify_dir(&default_fixture_dir()).unwrap();
    for r in &report.results {
        match &r.status {
            FixtureStatus::Pass { n, k, mu } => {
                println!("PASS {} ({}-way n={} k={})", r.path.file_name().unwrap().to_string_lossy(), mu, n, k)
            }
            FixtureStatus::Fail(e) => {
                println!("FAIL {}: {}", r.path.file_name().unwrap().to_string_lossy(), e)
            }
            FixtureStatus::Quarantined(e) => {
                println!("QUAR {}: {}", r.path.file_name().unwrap().to_string_lossy(), e)
            }
        }
    }
    println!("passed={} failed={} quarantined={}", report.passed(), report.failed(), report.quarantined());
}
