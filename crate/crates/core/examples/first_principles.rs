//! Builds the 8-dimensional three-photon state for each triple experiment
//! and compares |⟨Φ|ψ⟩|² with the closed-form expression.
//!
//! Kim detector labels are exchanged between the Bell vector and the sign
//! of the closed form; `born_equivalent` applies that mapping.

use std::f64::consts::TAU;

use eprsim::experiments::{
    entangled_first_principles, triple_closed_form, triple_setup, KimDetector, TripleSettings,
};
use eprsim::sources::SourceModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = SourceModel::entangled();
    let templates = [
        TripleSettings::gisin(0.0),
        TripleSettings::Zeilinger { alice: 45f64.to_radians(), bob: 0.0 },
        TripleSettings::Kim { detector: KimDetector::I, phi: 0.0 },
        TripleSettings::Kim { detector: KimDetector::II, phi: 0.0 },
    ];
    for template in templates {
        let setup = triple_setup(&template.born_equivalent())?;
        let mut worst: f64 = 0.0;
        for i in 0..16 {
            let s = template.with_x(i as f64 * TAU / 16.0);
            let born = entangled_first_principles(&model, &s.born_equivalent())?;
            worst = worst.max((born - triple_closed_form(&model, &s)?).abs());
        }
        let name = match template {
            TripleSettings::Kim { detector, .. } => format!("{} detector {}", template.kind().label(), detector.label()),
            _ => template.kind().label().to_owned(),
        };
        println!("{name:<24} source {:?}: max deviation {worst:.2e}", setup.source);
    }
    Ok(())
}
