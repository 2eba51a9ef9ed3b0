//! Delayed-choice quantum-eraser curves for detectors I and II.

use eprsim::experiments::{kim_expectation, KimDetector};
use eprsim::sources::SourceModel;

fn main() {
    let ent = SourceModel::entangled();
    let dis = SourceModel::disentangled();
    println!("{:>6}{:>10}{:>10}{:>10}{:>10}", "phi", "ent I", "ent II", "dis I", "dis II");
    for step in 0..=12 {
        let deg = step as f64 * 15.0;
        let phi = deg.to_radians();
        let row = [
            kim_expectation(&ent, KimDetector::I, phi),
            kim_expectation(&ent, KimDetector::II, phi),
            kim_expectation(&dis, KimDetector::I, phi),
            kim_expectation(&dis, KimDetector::II, phi),
        ];
        println!("{deg:>6.0}{:>10.5}{:>10.5}{:>10.5}{:>10.5}", row[0], row[1], row[2], row[3]);
    }
}
