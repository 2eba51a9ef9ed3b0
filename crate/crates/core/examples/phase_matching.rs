//! Fraction of disentangled pairs whose phases match within a window.

use eprsim::mc_engine::{detection_rate_analytic, estimate_detection_rate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>10}{:>14}{:>14}{:>12}", "window", "analytic", "mc", "stderr");
    for deg in [0.0f64, 0.1, 0.58, 1.0, 5.0, 30.0, 90.0, 180.0] {
        let w = deg.to_radians();
        let est = estimate_detection_rate(w, 2_000_000, 1)?;
        println!("{deg:>10.2}{:>14.6e}{:>14.6e}{:>12.2e}", detection_rate_analytic(w), est.rate, est.std_err);
    }
    Ok(())
}
