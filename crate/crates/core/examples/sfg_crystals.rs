//! Sum-frequency-generation crystals acting on two-photon states: type I
//! swaps |++⟩ and |−−⟩, type II swaps |+−⟩ and |−+⟩. Each crystal leaves
//! three Bell states unchanged and flips the sign of the fourth.

use eprsim::optics::{sfg_transform, SfgType};
use eprsim::qcore::{bell_state, BellKind, PureState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in BellKind::ALL {
        let psi = bell_state(kind);
        for t in [SfgType::TypeI, SfgType::TypeII] {
            let out = sfg_transform(t, &psi)?;
            let overlap = psi.inner(&out)?;
            println!("{kind:?} through {t:?}: ⟨ψ|T|ψ⟩ = {:+.3}", overlap.re);
        }
    }
    let product = PureState::from_real(&[1.0, 0.0, 0.0, 0.0])?;
    let out: Vec<f64> = sfg_transform(SfgType::TypeI, &product)?.amplitudes().iter().map(|z| z.re).collect();
    println!("|++⟩ through TypeI -> {out:?}");
    Ok(())
}
