//! Lossless linear-optical elements and small networks acting on Fock states.
//!
//! A two-mode coupler rewrites each term's creation-operator monomial through
//! the substitution
//!
//! ```text
//! a1^dag -> sqrt(T) b1^dag - sqrt(R) b2^dag
//! a2^dag -> sqrt(T) b2^dag + sqrt(R) b1^dag        (R = 1 - T)
//! ```
//!
//! and re-expands with binomial coefficients and sqrt(n!) normalization
//! factors. The minus sign rides on the reflected component of the first
//! input, network-wide. Networks are ordered element lists applied in
//! sequence; no general unitary compilation is attempted because every
//! scheme in the suite is a short splitter cascade.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::float::{binomial, factorial, phase_factor, Real};
use crate::fock::{FockVector, OccupationVector, TermAccumulator};

/// Largest photon number accepted by the merge construction.
pub const MERGE_LIMIT: usize = 6;

/// Lossless two-mode coupler with transmissivity `T` (reflectivity `1 - T`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamSplitter<T: Real> {
    transmissivity: T,
    modes: (usize, usize),
}

impl<T: Real> BeamSplitter<T> {
    pub fn new(transmissivity: T, modes: (usize, usize)) -> Result<Self> {
        if !(transmissivity >= T::zero() && transmissivity <= T::one()) {
            return Err(Error::InvalidTransmissivity(
                transmissivity.to_f64().unwrap_or(f64::NAN),
            ));
        }
        if modes.0 == modes.1 {
            return Err(Error::DegenerateSplitter);
        }
        Ok(Self {
            transmissivity,
            modes,
        })
    }

    /// Balanced 50:50 coupler.
    pub fn balanced(modes: (usize, usize)) -> Result<Self> {
        Self::new(T::of(0.5), modes)
    }

    pub fn transmissivity(&self) -> T {
        self.transmissivity
    }

    pub fn reflectivity(&self) -> T {
        T::one() - self.transmissivity
    }

    pub fn modes(&self) -> (usize, usize) {
        self.modes
    }

    /// The inverse coupler: same transmissivity, swapped port roles.
    pub fn inverted(&self) -> Self {
        Self {
            transmissivity: self.transmissivity,
            modes: (self.modes.1, self.modes.0),
        }
    }

    /// Evolves a state through the coupler. Photon number is conserved
    /// exactly and the norm is preserved, so the normalization flag carries
    /// over from the input.
    pub fn apply(&self, state: &FockVector<T>) -> Result<FockVector<T>> {
        let (m1, m2) = self.modes;
        let mode_count = state.mode_count();
        if m1 >= mode_count {
            return Err(Error::ModeOutOfRange {
                index: m1,
                mode_count,
            });
        }
        if m2 >= mode_count {
            return Err(Error::ModeOutOfRange {
                index: m2,
                mode_count,
            });
        }

        let st = self.transmissivity.sqrt();
        let sr = self.reflectivity().sqrt();
        let mut acc = TermAccumulator::new(mode_count);

        for (occ, amp) in state.terms() {
            let n1 = occ.count(m1);
            let n2 = occ.count(m2);
            let prefactor = (factorial::<T>(n1) * factorial::<T>(n2)).sqrt().recip();

            for j in 0..=n1 {
                // j photons of input 1 transmit; n1 - j reflect with a sign.
                let reflected_1 = n1 - j;
                let sign = if reflected_1 % 2 == 0 {
                    T::one()
                } else {
                    -T::one()
                };
                let c1 = binomial::<T>(n1, j) * st.powi(j as i32) * sr.powi(reflected_1 as i32);
                for k in 0..=n2 {
                    let reflected_2 = n2 - k;
                    let c2 = binomial::<T>(n2, k) * st.powi(k as i32) * sr.powi(reflected_2 as i32);
                    let out1 = j + reflected_2;
                    let out2 = reflected_1 + k;
                    let norm = (factorial::<T>(out1) * factorial::<T>(out2)).sqrt();

                    let mut counts = occ.counts().to_vec();
                    counts[m1] = out1;
                    counts[m2] = out2;
                    let coeff = prefactor * sign * c1 * c2 * norm;
                    acc.add(OccupationVector::new(counts)?, amp.scale(coeff))?;
                }
            }
        }

        Ok(acc.build(false).with_flag(state.is_normalized()))
    }
}

/// Phase shift on a single mode: a term with n photons there picks up
/// e^{i n phi}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseShifter<T: Real> {
    pub mode: usize,
    pub phase: T,
}

impl<T: Real> PhaseShifter<T> {
    pub fn new(mode: usize, phase: T) -> Self {
        Self { mode, phase }
    }

    pub fn apply(&self, state: &FockVector<T>) -> Result<FockVector<T>> {
        let mode_count = state.mode_count();
        if self.mode >= mode_count {
            return Err(Error::ModeOutOfRange {
                index: self.mode,
                mode_count,
            });
        }
        let mut acc = TermAccumulator::new(mode_count);
        for (occ, amp) in state.terms() {
            let n = occ.count(self.mode);
            let factor = phase_factor(self.phase * T::of_usize(n as usize));
            acc.add(occ.clone(), amp * factor)?;
        }
        Ok(acc.build(false).with_flag(state.is_normalized()))
    }
}

/// Half-wave-plate rotation feeding a polarizing splitter. A rotation by
/// `theta` acts as a variable coupler with reflectivity sin^2(2 theta).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfWavePlate<T: Real> {
    pub angle: T,
}

impl<T: Real> HalfWavePlate<T> {
    pub fn new(angle: T) -> Self {
        Self { angle }
    }

    pub fn reflectivity(&self) -> T {
        let s = (T::of(2.0) * self.angle).sin();
        s * s
    }

    /// The equivalent two-mode coupler on `modes`.
    pub fn splitter(&self, modes: (usize, usize)) -> Result<BeamSplitter<T>> {
        BeamSplitter::new(T::one() - self.reflectivity(), modes)
    }
}

/// One element of a sequential network.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NetworkElement<T: Real> {
    Splitter(BeamSplitter<T>),
    Phase(PhaseShifter<T>),
}

impl<T: Real> NetworkElement<T> {
    pub fn apply(&self, state: &FockVector<T>) -> Result<FockVector<T>> {
        match self {
            NetworkElement::Splitter(s) => s.apply(state),
            NetworkElement::Phase(p) => p.apply(state),
        }
    }
}

/// Applies the elements in order.
pub fn apply_network<T: Real>(
    state: &FockVector<T>,
    elements: &[NetworkElement<T>],
) -> Result<FockVector<T>> {
    let mut current = state.clone();
    for element in elements {
        current = element.apply(&current)?;
    }
    Ok(current)
}

/// Probability that independent classical particles entering the coupler
/// produce `outcome`. Modes outside the coupler pair must match exactly;
/// any photon-number mismatch yields probability zero rather than an error.
pub fn classical_outcome_probability<T: Real>(
    inputs: &OccupationVector,
    splitter: &BeamSplitter<T>,
    outcome: &OccupationVector,
) -> Result<T> {
    if inputs.mode_count() != outcome.mode_count() {
        return Err(Error::ModeCountMismatch {
            left: inputs.mode_count(),
            right: outcome.mode_count(),
        });
    }
    let (m1, m2) = splitter.modes();
    let mode_count = inputs.mode_count();
    if m1 >= mode_count || m2 >= mode_count {
        return Err(Error::ModeOutOfRange {
            index: m1.max(m2),
            mode_count,
        });
    }
    for mode in 0..mode_count {
        if mode != m1 && mode != m2 && inputs.count(mode) != outcome.count(mode) {
            return Ok(T::zero());
        }
    }

    let n1 = inputs.count(m1);
    let n2 = inputs.count(m2);
    let o1 = outcome.count(m1);
    let o2 = outcome.count(m2);
    if n1 + n2 != o1 + o2 {
        return Ok(T::zero());
    }

    let t = splitter.transmissivity();
    let r = splitter.reflectivity();
    let mut prob = T::zero();
    // k photons from input 1 stay in output 1; the rest reflect. Photons
    // from input 2 must supply the remaining o1 - k by reflection.
    for k in 0..=n1.min(o1) {
        let from_2 = o1 - k;
        if from_2 > n2 {
            continue;
        }
        let j = n2 - from_2; // photons from input 2 staying in output 2
        let p1 = binomial::<T>(n1, k) * t.powi(k as i32) * r.powi((n1 - k) as i32);
        let p2 = binomial::<T>(n2, j) * t.powi(j as i32) * r.powi((n2 - j) as i32);
        prob += p1 * p2;
    }
    Ok(prob)
}

/// Partial occupation constraint: a detection pattern that pins the photon
/// count of some modes and leaves the rest free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostselectPattern {
    constraints: Vec<Option<u32>>,
}

impl PostselectPattern {
    /// No constraint on any of `mode_count` modes.
    pub fn unconstrained(mode_count: usize) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::EmptyOccupation);
        }
        Ok(Self {
            constraints: vec![None; mode_count],
        })
    }

    /// Constrains the listed `(mode, count)` pairs, leaving others free.
    pub fn on_modes(mode_count: usize, pins: &[(usize, u32)]) -> Result<Self> {
        let mut pattern = Self::unconstrained(mode_count)?;
        for &(mode, count) in pins {
            if mode >= mode_count {
                return Err(Error::ModeOutOfRange {
                    index: mode,
                    mode_count,
                });
            }
            pattern.constraints[mode] = Some(count);
        }
        Ok(pattern)
    }

    /// Fully pinned pattern: every mode must match `counts`.
    pub fn bucket(counts: &OccupationVector) -> Self {
        Self {
            constraints: counts.counts().iter().map(|&c| Some(c)).collect(),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraint(&self, mode: usize) -> Option<u32> {
        self.constraints[mode]
    }

    pub fn is_unconstrained(&self) -> bool {
        self.constraints.iter().all(Option::is_none)
    }

    pub fn matches(&self, occ: &OccupationVector) -> bool {
        occ.counts()
            .iter()
            .zip(&self.constraints)
            .all(|(&c, pin)| pin.is_none_or(|p| p == c))
    }
}

/// Projects onto the constrained subspace. Returns the unnormalized
/// projected state together with its squared norm, which is the
/// post-selection probability whenever the input is normalized. An empty
/// projection is a zero-probability outcome, not an error.
pub fn postselect<T: Real>(
    state: &FockVector<T>,
    pattern: &PostselectPattern,
) -> Result<(FockVector<T>, T)> {
    if pattern.mode_count() != state.mode_count() {
        return Err(Error::ModeCountMismatch {
            left: state.mode_count(),
            right: pattern.mode_count(),
        });
    }
    let mut acc = TermAccumulator::new(state.mode_count());
    let mut kept = 0usize;
    for (occ, amp) in state.terms() {
        if pattern.matches(occ) {
            acc.add(occ.clone(), *amp)?;
            kept += 1;
        }
    }
    // Dropping nothing is the identity, so the flag may survive.
    let identity = kept == state.term_count();
    let projected = acc
        .build(false)
        .with_flag(identity && state.is_normalized());
    let probability = projected.norm_sqr();
    Ok((projected, probability))
}

/// Renormalized variant of [`postselect`]. The probability of an empty
/// projection is zero and the returned state is empty.
pub fn postselect_normalized<T: Real>(
    state: &FockVector<T>,
    pattern: &PostselectPattern,
) -> Result<(FockVector<T>, T)> {
    let (projected, probability) = postselect(state, pattern)?;
    if projected.is_empty() {
        return Ok((projected, probability));
    }
    Ok((projected.normalized()?, probability))
}

/// (|N, 0> + e^{i phase} |0, N>) / sqrt(2).
pub fn make_noon<T: Real>(photons: u32, relative_phase: T) -> Result<FockVector<T>> {
    if photons == 0 {
        return Err(Error::ZeroPhotons);
    }
    let amp = Complex::new(T::of(0.5).sqrt(), T::zero());
    let state = FockVector::from_terms(
        2,
        [
            (OccupationVector::new(vec![photons, 0])?, amp),
            (
                OccupationVector::new(vec![0, photons])?,
                amp * phase_factor(relative_phase),
            ),
        ],
    )?;
    state.mark_normalized()
}

/// Evenly spaced polarization twists 2 pi k / n for k = 0 .. n-1.
pub fn merge_twists<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|k| T::of(2.0) * T::PI() * T::of_usize(k) / T::of_usize(n))
        .collect()
}

/// Merges `n` twisted single-photon polarization states through a cascade of
/// n - 1 couplers and projects all photons into the first spatial port.
///
/// Each input k carries (|H> - e^{i 2 pi k / n} |V>) / sqrt(2); the cascade
/// uses transmissivities k/(k+1) so every input reaches the output bus with
/// equal weight. The projected two-mode (H, V) state is proportional to
/// |n,0> - |0,n> and its squared norm, 2 n! / (2n)^n, is returned as the
/// projection probability.
pub fn hofmann_merge<T: Real>(n: usize) -> Result<(FockVector<T>, T)> {
    if n == 0 {
        return Err(Error::ZeroPhotons);
    }
    if n > MERGE_LIMIT {
        return Err(Error::ShellOverflow {
            photons: n,
            limit: MERGE_LIMIT,
        });
    }

    // Mode layout: spatial k occupies (H, V) = (2k, 2k + 1).
    let half = Complex::new(T::of(0.5).sqrt(), T::zero());
    let twists = merge_twists::<T>(n);
    let mut state: Option<FockVector<T>> = None;
    for &delta in &twists {
        let single = FockVector::from_terms(
            2,
            [
                (OccupationVector::new(vec![1, 0])?, half),
                (
                    OccupationVector::new(vec![0, 1])?,
                    -half * phase_factor(delta),
                ),
            ],
        )?
        .mark_normalized()?;
        state = Some(match state {
            None => single,
            Some(prev) => prev.tensor(&single),
        });
    }
    let mut state = state.expect("n >= 1");

    // Merge spatial mode k into the bus (spatial 0); the coupler acts on the
    // H pair and the V pair with the same transmissivity.
    for k in 1..n {
        let t = T::of_usize(k) / T::of_usize(k + 1);
        state = BeamSplitter::new(t, (0, 2 * k))?.apply(&state)?;
        state = BeamSplitter::new(t, (1, 2 * k + 1))?.apply(&state)?;
    }

    let pins: Vec<(usize, u32)> = (2..2 * n).map(|m| (m, 0)).collect();
    let pattern = PostselectPattern::on_modes(2 * n, &pins)?;
    let (projected, probability) = postselect(&state, &pattern)?;
    let reduced = projected.restrict_to_modes(&[0, 1])?;
    Ok((reduced, probability))
}

/// The n-detector coincidence rate of the projection fan, up to the fixed
/// constant 1 / (2^{n-1} n^{2n}): |c_0 - c_n|^2 for an input with
/// coefficients c_k on |n-k, k>.
pub fn noon_projection_rate<T: Real>(coeffs: &[Complex<T>]) -> Result<T> {
    if coeffs.len() < 2 {
        return Err(Error::ZeroPhotons);
    }
    let n = coeffs.len() - 1;
    debug_assert!(
        (coeffs.iter().map(Complex::norm_sqr).sum::<T>() - T::one()).abs() < T::of(1e-6),
        "coefficients should be normalized as a state"
    );
    let diff = coeffs[0] - coeffs[n];
    let constant = T::of(2.0).powi(n as i32 - 1) * T::of_usize(n).powi(2 * n as i32);
    Ok(diff.norm_sqr() / constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::enumerate_shell;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn ov(counts: &[u32]) -> OccupationVector {
        OccupationVector::new(counts.to_vec()).unwrap()
    }

    fn basis64(counts: &[u32]) -> FockVector<f64> {
        FockVector::basis(ov(counts))
    }

    #[test]
    fn balanced_splitter_cancels_the_coincidence_term() {
        let out = BeamSplitter::balanced((0, 1))
            .unwrap()
            .apply(&basis64(&[1, 1]))
            .unwrap();
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(out.amplitude(&ov(&[1, 1])).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitude(&ov(&[2, 0])).re, inv_sqrt2, epsilon = 1e-14);
        assert_abs_diff_eq!(out.amplitude(&ov(&[0, 2])).re, -inv_sqrt2, epsilon = 1e-14);
        assert!(out.is_normalized());
    }

    #[test]
    fn coincidence_amplitude_is_t_minus_r() {
        for i in 1..10 {
            let t = 0.1 * i as f64;
            let out = BeamSplitter::new(t, (0, 1))
                .unwrap()
                .apply(&basis64(&[1, 1]))
                .unwrap();
            let expected = t - (1.0 - t);
            let overlap = basis64(&[1, 1]).inner_product(&out).unwrap();
            assert_abs_diff_eq!(overlap.re, expected, epsilon = 1e-13);
            assert_abs_diff_eq!(overlap.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn three_photon_output_matches_the_closed_triple() {
        let out = BeamSplitter::new(2.0 / 3.0, (0, 1))
            .unwrap()
            .apply(&basis64(&[2, 1]))
            .unwrap();
        assert_abs_diff_eq!(out.amplitude(&ov(&[3, 0])).re, 2.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(
            out.amplitude(&ov(&[0, 3])).re,
            2f64.sqrt() / 3.0,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            out.amplitude(&ov(&[1, 2])).re,
            -3f64.sqrt() / 3.0,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(out.amplitude(&ov(&[2, 1])).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn two_pair_output_matches_closed_coefficients() {
        // Balanced case
        let out = BeamSplitter::balanced((0, 1))
            .unwrap()
            .apply(&basis64(&[2, 2]))
            .unwrap();
        assert_abs_diff_eq!(
            out.amplitude(&ov(&[4, 0])).re,
            (3f64 / 8.0).sqrt(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            out.amplitude(&ov(&[0, 4])).re,
            (3f64 / 8.0).sqrt(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(out.amplitude(&ov(&[2, 2])).re, -0.5, epsilon = 1e-13);

        // General T: the |3,1> coefficient is sqrt(6 T R) (T - R).
        for i in 1..10 {
            let t = 0.1 * i as f64;
            let r = 1.0 - t;
            let out = BeamSplitter::new(t, (0, 1))
                .unwrap()
                .apply(&basis64(&[2, 2]))
                .unwrap();
            let expected = (6.0 * t * r).sqrt() * (t - r);
            assert_abs_diff_eq!(out.amplitude(&ov(&[3, 1])).re, expected, epsilon = 1e-13);
            assert_abs_diff_eq!(out.amplitude(&ov(&[1, 3])).re, -expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn closed_form_coefficients_hold_across_the_t_grid() {
        // every output amplitude of the two-, three-, and four-photon
        // symmetric inputs, against its closed form, for T = 0.1 .. 0.9
        for i in 1..=9 {
            let t = 0.1 * i as f64;
            let r = 1.0 - t;
            let s = BeamSplitter::new(t, (0, 1)).unwrap();

            let two = s.apply(&basis64(&[1, 1])).unwrap();
            assert_abs_diff_eq!(two.amplitude(&ov(&[1, 1])).re, t - r, epsilon = 1e-12);
            assert_abs_diff_eq!(
                two.amplitude(&ov(&[2, 0])).re,
                (2.0 * t * r).sqrt(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                two.amplitude(&ov(&[0, 2])).re,
                -(2.0 * t * r).sqrt(),
                epsilon = 1e-12
            );

            let three = s.apply(&basis64(&[2, 1])).unwrap();
            assert_abs_diff_eq!(
                three.amplitude(&ov(&[3, 0])).re,
                (3.0 * t * t * r).sqrt(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                three.amplitude(&ov(&[0, 3])).re,
                (3.0 * t * r * r).sqrt(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                three.amplitude(&ov(&[2, 1])).re,
                t.sqrt() * (t - 2.0 * r),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                three.amplitude(&ov(&[1, 2])).re,
                r.sqrt() * (r - 2.0 * t),
                epsilon = 1e-12
            );

            let four = s.apply(&basis64(&[2, 2])).unwrap();
            assert_abs_diff_eq!(
                four.amplitude(&ov(&[4, 0])).re,
                6f64.sqrt() * t * r,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                four.amplitude(&ov(&[0, 4])).re,
                6f64.sqrt() * t * r,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                four.amplitude(&ov(&[2, 2])).re,
                (t - r) * (t - r) - 2.0 * t * r,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                four.amplitude(&ov(&[3, 1])).re,
                (6.0 * t * r).sqrt() * (t - r),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                four.amplitude(&ov(&[1, 3])).re,
                -(6.0 * t * r).sqrt() * (t - r),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn boundary_transmissivities_are_legal() {
        let identity = BeamSplitter::new(1.0, (0, 1))
            .unwrap()
            .apply(&basis64(&[2, 1]))
            .unwrap();
        assert_abs_diff_eq!(identity.amplitude(&ov(&[2, 1])).re, 1.0, epsilon = 1e-14);

        let swap = BeamSplitter::new(0.0, (0, 1))
            .unwrap()
            .apply(&basis64(&[2, 1]))
            .unwrap();
        assert_abs_diff_eq!(swap.amplitude(&ov(&[1, 2])).norm(), 1.0, epsilon = 1e-14);

        assert!(BeamSplitter::new(1.2f64, (0, 1)).is_err());
        assert!(BeamSplitter::new(-0.1f64, (0, 1)).is_err());
        assert!(BeamSplitter::new(0.5f64, (1, 1)).is_err());
    }

    #[test]
    fn phase_shifts_are_number_weighted() {
        let n = 4u32;
        let phi = 0.37;
        let shifted = PhaseShifter::new(0, phi).apply(&basis64(&[n, 0])).unwrap();
        let expected = Complex64::from_polar(1.0, n as f64 * phi);
        assert_abs_diff_eq!(
            (shifted.amplitude(&ov(&[n, 0])) - expected).norm(),
            0.0,
            epsilon = 1e-14
        );

        let vacuum: FockVector<f64> = FockVector::vacuum(2).unwrap();
        let still = PhaseShifter::new(0, phi).apply(&vacuum).unwrap();
        assert_abs_diff_eq!(still.amplitude(&ov(&[0, 0])).re, 1.0, epsilon = 1e-15);

        let noon = make_noon::<f64>(3, 0.0).unwrap();
        let shifted = PhaseShifter::new(1, phi).apply(&noon).unwrap();
        let ratio = shifted.amplitude(&ov(&[0, 3])) / shifted.amplitude(&ov(&[3, 0]));
        assert_abs_diff_eq!(
            (ratio - Complex64::from_polar(1.0, 3.0 * phi)).norm(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn wave_plate_angle_nulls_the_filter_coincidence() {
        // sin^2(2 theta) = 1/(N+1) reproduces the splitter null at R = 1/(N+1)
        for n in 1..=5u32 {
            let angle = 0.5 * (1.0 / (n as f64 + 1.0)).sqrt().asin();
            let plate = HalfWavePlate::new(angle);
            assert_abs_diff_eq!(
                plate.reflectivity(),
                1.0 / (n as f64 + 1.0),
                epsilon = 1e-14
            );
            let out = plate
                .splitter((0, 1))
                .unwrap()
                .apply(&basis64(&[n, 1]))
                .unwrap();
            assert_abs_diff_eq!(out.amplitude(&ov(&[n, 1])).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn classical_probabilities_match_the_multinomial_forms() {
        let half = BeamSplitter::<f64>::balanced((0, 1)).unwrap();
        assert_abs_diff_eq!(
            classical_outcome_probability(&ov(&[1, 1]), &half, &ov(&[1, 1])).unwrap(),
            0.5
        );
        assert_abs_diff_eq!(
            classical_outcome_probability(&ov(&[1, 1]), &half, &ov(&[2, 0])).unwrap(),
            0.25
        );
        assert_abs_diff_eq!(
            classical_outcome_probability(&ov(&[2, 2]), &half, &ov(&[4, 0])).unwrap(),
            1.0 / 16.0
        );
        // photon-number mismatch is a zero, not an error
        assert_abs_diff_eq!(
            classical_outcome_probability(&ov(&[1, 1]), &half, &ov(&[2, 1])).unwrap(),
            0.0
        );
    }

    #[test]
    fn classical_probabilities_are_complete() {
        let s = BeamSplitter::new(0.37, (0, 1)).unwrap();
        for inputs in [ov(&[1, 1]), ov(&[2, 2]), ov(&[3, 1])] {
            let total: f64 = enumerate_shell(2, inputs.total())
                .iter()
                .map(|o| classical_outcome_probability(&inputs, &s, o).unwrap())
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_photon_quantum_equals_classical() {
        let s = BeamSplitter::new(0.3, (0, 1)).unwrap();
        let out = s.apply(&basis64(&[1, 0])).unwrap();
        for occ in enumerate_shell(2, 1) {
            let quantum = out.outcome_probability(&occ).unwrap();
            let classical = classical_outcome_probability(&ov(&[1, 0]), &s, &occ).unwrap();
            assert_abs_diff_eq!(quantum, classical, epsilon = 1e-14);
        }
    }

    #[test]
    fn postselection_examples() {
        // HOM output at T = 1/2: one photon in mode 1 never happens.
        let out = BeamSplitter::balanced((0, 1))
            .unwrap()
            .apply(&basis64(&[1, 1]))
            .unwrap();
        let (_, p) = postselect(&out, &PostselectPattern::on_modes(2, &[(1, 1)]).unwrap()).unwrap();
        assert_abs_diff_eq!(p, 0.0, epsilon = 1e-26);

        // Empty constraint is the identity.
        let (same, p) = postselect(&out, &PostselectPattern::unconstrained(2).unwrap()).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        assert_eq!(same.term_count(), out.term_count());
        assert!(same.is_normalized());

        // Projection of a missing pattern returns an empty state.
        let (empty, p) =
            postselect(&out, &PostselectPattern::on_modes(2, &[(0, 3)]).unwrap()).unwrap();
        assert!(empty.is_empty());
        assert_abs_diff_eq!(p, 0.0);
    }

    #[test]
    fn noon_states_have_two_extreme_terms() {
        let one = make_noon::<f64>(1, 0.0).unwrap();
        assert_abs_diff_eq!(
            one.amplitude(&ov(&[1, 0])).re,
            1.0 / 2f64.sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            one.amplitude(&ov(&[0, 1])).re,
            1.0 / 2f64.sqrt(),
            epsilon = 1e-15
        );

        let two = make_noon::<f64>(2, std::f64::consts::PI).unwrap();
        let hom = BeamSplitter::balanced((0, 1))
            .unwrap()
            .apply(&basis64(&[1, 1]))
            .unwrap();
        assert_abs_diff_eq!(two.fidelity(&hom).unwrap(), 1.0, epsilon = 1e-12);

        let four = make_noon::<f64>(4, 0.0).unwrap();
        assert_abs_diff_eq!(
            four.inner_product(&basis64(&[2, 2])).unwrap().norm(),
            0.0,
            epsilon = 1e-15
        );
        assert!(make_noon::<f64>(0, 0.0).is_err());
    }

    #[test]
    fn merge_probabilities_follow_the_closed_form() {
        for n in 1..=5usize {
            let (state, p) = hofmann_merge::<f64>(n).unwrap();
            let expected =
                2.0 * crate::float::factorial::<f64>(n as u32) / (2.0 * n as f64).powi(n as i32);
            assert_abs_diff_eq!(p, expected, epsilon = 1e-12);

            let target = make_noon::<f64>(n as u32, std::f64::consts::PI).unwrap();
            assert_abs_diff_eq!(state.fidelity(&target).unwrap(), 1.0, epsilon = 1e-12);
        }
        assert!(hofmann_merge::<f64>(0).is_err());
        assert!(hofmann_merge::<f64>(7).is_err());
    }

    #[test]
    fn projection_rate_examples() {
        let inv_sqrt2 = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        let zero = Complex64::new(0.0, 0.0);

        // symmetric cancellation
        let rate = noon_projection_rate(&[inv_sqrt2, zero, inv_sqrt2]).unwrap();
        assert_abs_diff_eq!(rate, 0.0, epsilon = 1e-30);

        // middle kets project to zero
        let rate = noon_projection_rate(&[zero, Complex64::new(1.0, 0.0), zero]).unwrap();
        assert_abs_diff_eq!(rate, 0.0);

        // equal-strength fields fringe as 1 - cos(N phi)
        let n = 3usize;
        for step in 0..8 {
            let phi = step as f64 * 0.7;
            let c0 = inv_sqrt2;
            let cn = inv_sqrt2 * Complex64::from_polar(1.0, n as f64 * phi);
            let mut coeffs = vec![zero; n + 1];
            coeffs[0] = c0;
            coeffs[n] = cn;
            let rate = noon_projection_rate(&coeffs).unwrap();
            let expected = (1.0 - (n as f64 * phi).cos())
                / (2f64.powi(n as i32 - 1) * (n as f64).powi(2 * n as i32));
            assert_abs_diff_eq!(rate, expected, epsilon = 1e-15);
        }
    }

    proptest! {
        #[test]
        fn splitters_preserve_norm_and_photon_number(
            t in 0.0f64..=1.0,
            amps in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
        ) {
            let shell = enumerate_shell(2, 3);
            let terms: Vec<_> = amps
                .iter()
                .enumerate()
                .map(|(i, &(re, im))| (shell[i % shell.len()].clone(), Complex64::new(re, im)))
                .collect();
            let state = FockVector::from_terms(2, terms).unwrap();
            prop_assume!(state.norm_sqr() > 1e-6);
            let state = state.normalized().unwrap();
            let splitter = BeamSplitter::new(t, (0, 1)).unwrap();
            let out = splitter.apply(&state).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
            for (occ, _) in out.terms() {
                prop_assert_eq!(occ.total(), 3);
            }
            // applying the inverse rotation returns the original state
            let back = splitter.inverted().apply(&out).unwrap();
            prop_assert!(back.max_amplitude_diff(&state) < 1e-12);
        }
    }
}
