//! A3s / A3w-only verdicts for every preset on its space form.

use spaceform_mtw::costlib::presets;
use spaceform_mtw::{scan_conditions, CostFunction, Curvature, ScanConfig};

fn main() {
    for p in presets::catalog() {
        let k = Curvature::try_from(p.curvatures[0]).expect("catalog curvature");
        let d = match (p.name, k) {
            ("quartic", _) => 1.0,
            (_, Curvature::Positive) => 2.5,
            _ => 2.0,
        };
        let cost = CostFunction::from_preset(&p, d).expect("admissible");
        for dim in [2, 3] {
            let v = scan_conditions(&cost, k, &ScanConfig { dim, ..ScanConfig::default() }).expect("scan");
            println!(
                "{:16} K = {k:+} n = {dim} D = {d}: {:9} binding {} (min slack {:+.3e})   expected: {}",
                p.name,
                v.status.to_string(),
                v.binding,
                v.min_slacks.combo.value.min(v.min_slacks.beta.value).min(v.min_slacks.gamma.value),
                p.expected
            );
        }
    }
}
