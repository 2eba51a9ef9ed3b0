//! The four teleportation-test cells for both models, checked against a
//! direct Born-rule evaluation on the three-photon register.

use eprsim::experiments::{entangled_first_principles, zeilinger_rate, Diagonal, TripleSettings};
use eprsim::sources::SourceModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ent = SourceModel::entangled();
    let dis = SourceModel::disentangled();
    println!("{:>7}{:>7}{:>11}{:>9}{:>14}", "alice", "bob", "entangled", "Born", "disentangled");
    for alice in [Diagonal::Plus45, Diagonal::Minus45] {
        for bob in [Diagonal::Plus45, Diagonal::Minus45] {
            let born = entangled_first_principles(&ent, &TripleSettings::zeilinger(alice, bob))?;
            println!(
                "{:>7}{:>7}{:>11.4}{:>9.4}{:>14.4}",
                alice.degrees(),
                bob.degrees(),
                zeilinger_rate(&ent, alice, bob),
                born,
                zeilinger_rate(&dis, alice, bob)
            );
        }
    }
    let rel = zeilinger_rate(&dis, Diagonal::Plus45, Diagonal::Minus45)
        / zeilinger_rate(&dis, Diagonal::Plus45, Diagonal::Plus45);
    println!("disentangled wrong/right detector intensity: {:.1}%", 100.0 * rel);
    Ok(())
}
