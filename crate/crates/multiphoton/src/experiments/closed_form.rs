//! Closed-form predictions used as oracles by the experiment checks.
//!
//! Every pass/fail flag in the suite compares an engine result against one
//! of these functions evaluated at run time.

use num_complex::Complex64;

/// Two-photon coincidence of one splitter with packet overlap |s|^2:
/// T^2 + R^2 - 2 T R |s|^2. At |s| = 1 this is the (T - R)^2 null, at
/// |s| = 0 the classical baseline.
pub fn hom_coincidence(t: f64, overlap_sq: f64) -> f64 {
    let r = 1.0 - t;
    t * t + r * r - 2.0 * t * r * overlap_sq
}

/// Classical two-photon coincidence T^2 + R^2.
pub fn classical_coincidence(t: f64) -> f64 {
    hom_coincidence(t, 0.0)
}

/// Classical probability T R of both photons leaving through one port.
pub fn classical_bucket(t: f64) -> f64 {
    t * (1.0 - t)
}

/// Pair-bunching ratio P4(4,0) / P4_cl(4,0) as a function of the pair
/// overlap s: 4 (1 + 4 s^2 + s^4) / (1 + s^2)^2, running from 6 at s = 1
/// down to 4 at s = 0.
pub fn bunching_ratio(overlap: f64) -> f64 {
    let s2 = overlap * overlap;
    4.0 * (1.0 + 4.0 * s2 + s2 * s2) / ((1.0 + s2) * (1.0 + s2))
}

/// All-photon detection probability (N+1)/2^{N+1} for |N,1> on a balanced
/// splitter.
pub fn stimulated_quantum(n: u32) -> f64 {
    (n as f64 + 1.0) / 2f64.powi(n as i32 + 1)
}

/// Classical counterpart 1/2^{N+1}.
pub fn stimulated_classical(n: u32) -> f64 {
    1.0 / 2f64.powi(n as i32 + 1)
}

/// Signed (2,1) output amplitude sqrt(T) (T - 2R) for the |2,1> input.
pub fn wang_kobayashi_amplitude(t: f64) -> f64 {
    let r = 1.0 - t;
    t.sqrt() * (t - 2.0 * r)
}

/// P3(2,1) = T (T - 2R)^2.
pub fn wang_kobayashi_coincidence(t: f64) -> f64 {
    let a = wang_kobayashi_amplitude(t);
    a * a
}

/// Conditioned amplitude sqrt(T^{n-1}) (T - n R) of the Fock filter.
pub fn fock_filter_amplitude(t: f64, n: u32) -> f64 {
    let r = 1.0 - t;
    if n == 0 {
        return t.sqrt();
    }
    t.powf((n as f64 - 1.0) / 2.0) * (t - n as f64 * r)
}

/// Signed (2,2) output amplitude (T - R)^2 - 2 T R for the |2,2> input;
/// its roots sit at T = (3 +- sqrt(3)) / 6.
pub fn two_pair_amplitude(t: f64) -> f64 {
    let r = 1.0 - t;
    (t - r) * (t - r) - 2.0 * t * r
}

/// P4(2,2) = ((T - R)^2 - 2 T R)^2.
pub fn two_pair_coincidence(t: f64) -> f64 {
    let a = two_pair_amplitude(t);
    a * a
}

/// Normalized NOON fringe (1 + cos(N phi)) / 2.
pub fn noon_fringe(n: u32, phi: f64) -> f64 {
    0.5 * (1.0 + (n as f64 * phi).cos())
}

/// Normalized intensity correlation 0.5 cos(2 pi dx / L) of two independent
/// phase-diffusing sources.
pub fn pfleegor_mandel_correlation(separation: f64, fringe_spacing: f64) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * separation / fringe_spacing).cos()
}

/// Projection probability 2 N! / (2N)^N of the polarization merge.
pub fn merge_projection_probability(n: u32) -> f64 {
    2.0 * crate::float::factorial::<f64>(n) / (2.0 * n as f64).powi(n as i32)
}

/// The two output coefficient families of the three-photon mixing scheme:
/// (extreme, middle) = ((a^2 + 3 sqrt(2) e) a / (4 sqrt(3)), (a^2 - sqrt(2) e) a / 4).
pub fn three_photon_mixing_coefficients(
    alpha: Complex64,
    eta: Complex64,
) -> (Complex64, Complex64) {
    let sqrt2 = Complex64::new(2f64.sqrt(), 0.0);
    let middle = (alpha * alpha - eta * sqrt2) * alpha / Complex64::new(4.0, 0.0);
    let extreme =
        (alpha * alpha + eta * sqrt2 * 3.0) * alpha / Complex64::new(4.0 * 3f64.sqrt(), 0.0);
    (extreme, middle)
}

/// Fringe laws of the projection schemes, normalized to peak 1.
pub fn de_broglie_fringe(harmonic: u32, phi: f64, inverted: bool) -> f64 {
    let c = (harmonic as f64 * phi).cos();
    if inverted {
        0.5 * (1.0 - c)
    } else {
        0.5 * (1.0 + c)
    }
}

/// Dip visibility m / N of both distinguishability schemes.
pub fn visibility_law(overlapping: u32, photons: u32) -> f64 {
    overlapping as f64 / photons as f64
}

/// Classical M-fold coincidence of the projection fan: M! / (2 M^2)^M.
pub fn fan_classical_coincidence(photons: u32) -> f64 {
    let m = photons as f64;
    crate::float::factorial::<f64>(photons) / (2.0 * m * m).powi(photons as i32)
}

/// Classical (1, N) coincidence of the asymmetric splitter:
/// T^{N+1}... more precisely T^N T + N R^2 T^{N-1} with the single photon
/// on the low-occupancy port; evaluated directly from the multinomial sum.
pub fn asymmetric_classical_coincidence(photons: u32, t: f64) -> f64 {
    let r = 1.0 - t;
    let n = photons as f64;
    // either everyone transmits, or the lone photon reflects together with
    // exactly one of the N others
    t.powi(photons as i32) * t + n * r * r * t.powi(photons as i32 - 1)
}

/// Single-realization fringe visibility 2 sqrt(n m) / (N + M) for n, m
/// indistinguishable photons out of N + M.
pub fn fringe_visibility(big_n: u32, big_m: u32, n_indist: u32, m_indist: u32) -> f64 {
    2.0 * ((n_indist * m_indist) as f64).sqrt() / ((big_n + big_m) as f64)
}

/// Degree of coherence sqrt(n m / (N M)).
pub fn degree_of_coherence(big_n: u32, big_m: u32, n_indist: u32, m_indist: u32) -> f64 {
    (((n_indist * m_indist) as f64) / ((big_n * big_m) as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_forms_hit_their_quoted_values() {
        assert_abs_diff_eq!(hom_coincidence(0.5, 1.0), 0.0);
        assert_abs_diff_eq!(hom_coincidence(0.4, 1.0), 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(classical_coincidence(0.5), 0.5);
        assert_abs_diff_eq!(classical_bucket(0.5), 0.25);
        assert_abs_diff_eq!(bunching_ratio(1.0), 6.0);
        assert_abs_diff_eq!(bunching_ratio(0.0), 4.0);
        assert_abs_diff_eq!(stimulated_quantum(3), 0.25);
        assert_abs_diff_eq!(stimulated_classical(2), 0.125);
        assert_abs_diff_eq!(wang_kobayashi_coincidence(2.0 / 3.0), 0.0, epsilon = 1e-30);
        assert_abs_diff_eq!(wang_kobayashi_coincidence(0.5), 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(wang_kobayashi_coincidence(1.0), 1.0);
        assert_abs_diff_eq!(fock_filter_amplitude(0.75, 3), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            two_pair_amplitude((3.0 + 3f64.sqrt()) / 6.0),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(two_pair_coincidence(0.5), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(noon_fringe(4, 0.0), 1.0);
        assert!(noon_fringe(4, std::f64::consts::PI / 4.0).abs() < 1e-15);
        assert_abs_diff_eq!(merge_projection_probability(2), 0.25);
        assert_abs_diff_eq!(merge_projection_probability(3), 1.0 / 18.0, epsilon = 1e-15);
        assert_abs_diff_eq!(visibility_law(1, 2), 0.5);
        assert_abs_diff_eq!(degree_of_coherence(4, 4, 2, 2), 0.5);
        assert_abs_diff_eq!(fringe_visibility(2, 2, 1, 1), 0.5);
    }
}
