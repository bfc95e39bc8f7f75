use hulthen::verify::suite::state_grid;
use hulthen::{energy_closed_form, quantization_root_on, BranchSign, Complex64 as C, StateStatus};

#[test]
fn roots_from_varied_seeds() {
    let offsets = [C::new(1e-3, 1e-3), C::new(-2e-3, 1.5e-3), C::new(5e-3, -4e-3), C::new(-1e-2, -1e-2), C::new(0.0, 3e-2)];
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (spec, n) in state_grid(1.0) {
        let levels: Vec<C> = [BranchSign::Plus, BranchSign::Minus]
            .iter()
            .filter_map(|&b| energy_closed_form(&spec, n, b).ok().map(|s| s.energy))
            .collect();
        for sign in [BranchSign::Plus, BranchSign::Minus] {
            let Ok(st) = energy_closed_form(&spec, n, sign) else { continue };
            if st.status == StateStatus::Discrepant {
                continue;
            }
            for off in offsets {
                match quantization_root_on(&spec, n, st.energy + off, st.sheet) {
                    // Either branch of the same level is an acceptable landing point.
                    Ok(r) => {
                        let d = levels.iter().map(|e| (r.energy - e).norm()).fold(f64::INFINITY, f64::min);
                        worst = worst.max(d);
                    }
                    Err(e) => failures.push(format!("{spec:?} n={n} {off}: {e}")),
                }
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(worst <= 1e-8, "{worst:e}");
}

#[test]
fn backtracks_past_unevaluable_energies() {
    let spec = hulthen::PotentialSpec::new(hulthen::Variant::PTSymmetric, 4.0, 2.0, 2.0, 1.0).unwrap();
    let st = energy_closed_form(&spec, 0, BranchSign::Plus).unwrap();
    let r = quantization_root_on(&spec, 0, st.energy + C::new(-2e-3, 1.5e-3), st.sheet).unwrap();
    assert!((r.energy - st.energy).norm() < 1e-10, "{r:?} vs {}", st.energy);
}
