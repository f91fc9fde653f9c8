//! Series and small-argument forms of `K_nu`.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `K_0(x)` from its power series, accurate for moderate `x`.
pub fn k0_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..80 {
        term *= q / (k as f64 * k as f64);
        harmonic += 1.0 / k as f64;
        i0 += term;
        tail += term * harmonic;
    }
    -((x / 2.0).ln() + EULER_GAMMA) * i0 + tail
}

/// Leading small-argument behaviour: `Gamma(nu)/2 (2/x)^nu` for `nu > 0`,
/// `-ln(x/2) - gamma_E` for `nu = 0`.
pub fn k_small_arg(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    if nu == 0.0 {
        -(x / 2.0).ln() - EULER_GAMMA
    } else {
        0.5 * libm::tgamma(nu) * (2.0 / x).powf(nu)
    }
}
