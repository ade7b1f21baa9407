//! Acceptance matrix at full resolution. Each criterion prints one line.

use frac_hardy::selftest::{run_criterion, Level, SelftestOptions, CRITERIA};
use frac_hardy::Workers;

fn check(id: usize) {
    let opts = SelftestOptions { level: Level::Full, workers: Workers::default(), constant_scale: 1.0 };
    let outcome = run_criterion(id, &opts);
    println!("{}", outcome.line());
    assert!(outcome.pass, "criterion {id} ({}) failed: {:?}", CRITERIA[id - 1], outcome.failure);
}

macro_rules! criteria {
    ($($name:ident = $id:expr;)*) => {
        $(
            #[test]
            fn $name() {
                check($id);
            }
        )*
    };
}

criteria! {
    c01_constant_identity = 1;
    c02_sphere_integral = 2;
    c03_kappa_vanishing = 3;
    c04_half_space_weight = 4;
    c05_weight_bound_inequality = 5;
    c06_reduction_equivalence = 6;
    c07_inversion_invariance = 7;
    c08_hardy_inequalities = 8;
    c09_sharpness = 9;
    c10_remainder_positivity = 10;
    c11_fs_potential = 11;
    c12_determinism = 12;
}
