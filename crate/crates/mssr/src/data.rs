//! Bundled demonstration data: breakdown times (in minutes) of specimens
//! of an electrical insulating fluid tested at constant voltage, a classic
//! pair of datasets for record-value analysis. The first set plays the
//! strength role, the second the common stress.

pub const INSULATING_FLUID_STRENGTH: [f64; 15] = [
    0.40, 82.85, 9.88, 89.29, 215.10, 2.75, 0.79, 15.93, 3.91, 0.27, 0.69, 100.58, 27.80, 13.95,
    53.24,
];

pub const INSULATING_FLUID_STRESS: [f64; 8] = [0.47, 0.73, 1.40, 0.74, 0.39, 1.13, 0.09, 2.38];
