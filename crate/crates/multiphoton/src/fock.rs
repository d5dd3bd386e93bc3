//! Exact algebra of multimode bosonic Fock states.
//!
//! States are sparse superpositions over occupation-number basis kets with
//! complex amplitudes. All values are immutable; every operation returns a
//! new state. Lossless network elements preserve the total photon number, so
//! dense enumeration is only ever needed inside one photon-number shell
//! (N <= [`SHELL_LIMIT`] covers everything the experiment suite runs).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::float::Real;

/// Largest total photon number the dense shell helpers are intended for.
pub const SHELL_LIMIT: u32 = 8;

/// Photon counts per mode: the basis label |n1, n2, ...>.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    /// Builds a label from per-mode counts. At least one mode is required.
    pub fn new(counts: impl Into<Vec<u32>>) -> Result<Self> {
        let counts = counts.into();
        if counts.is_empty() {
            return Err(Error::EmptyOccupation);
        }
        Ok(Self(counts))
    }

    /// Builds a label from signed counts, rejecting negative entries.
    pub fn from_signed(counts: &[i64]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyOccupation);
        }
        let mut out = Vec::with_capacity(counts.len());
        for &c in counts {
            if c < 0 {
                return Err(Error::NegativeOccupation(c));
            }
            out.push(c as u32);
        }
        Ok(Self(out))
    }

    /// The empty label |0, ..., 0> over `mode_count` modes.
    pub fn vacuum(mode_count: usize) -> Result<Self> {
        Self::new(vec![0; mode_count])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn count(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    /// Total photon number across all modes.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Label with one more photon in `mode`.
    pub fn with_increment(&self, mode: usize) -> Self {
        let mut counts = self.0.clone();
        counts[mode] += 1;
        Self(counts)
    }

    /// Label with one fewer photon in `mode`, or `None` if it is empty there.
    pub fn with_decrement(&self, mode: usize) -> Option<Self> {
        if self.0[mode] == 0 {
            return None;
        }
        let mut counts = self.0.clone();
        counts[mode] -= 1;
        Some(Self(counts))
    }

    /// Concatenation of two labels (tensor-product ordering).
    pub fn concat(&self, other: &Self) -> Self {
        let mut counts = self.0.clone();
        counts.extend_from_slice(&other.0);
        Self(counts)
    }
}

impl fmt::Debug for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

/// Sparse superposition of occupation-number basis kets.
///
/// The `normalized` flag is explicit bookkeeping, never implied: projected
/// states are deliberately carried around unnormalized, and probabilities may
/// only be read off states that carry the flag. Unitary elements propagate
/// the flag; everything else drops it until [`FockVector::normalized`] or
/// [`FockVector::mark_normalized`] is called.
#[derive(Clone, PartialEq)]
pub struct FockVector<T: Real> {
    mode_count: usize,
    terms: BTreeMap<OccupationVector, Complex<T>>,
    normalized: bool,
}

impl<T: Real> FockVector<T> {
    /// |0, ..., 0>, normalized by construction.
    pub fn vacuum(mode_count: usize) -> Result<Self> {
        Ok(Self::basis(OccupationVector::vacuum(mode_count)?))
    }

    /// The basis ket |occ> with unit amplitude.
    pub fn basis(occ: OccupationVector) -> Self {
        let mode_count = occ.mode_count();
        let mut terms = BTreeMap::new();
        terms.insert(occ, Complex::new(T::one(), T::zero()));
        Self {
            mode_count,
            terms,
            normalized: true,
        }
    }

    /// Builds an (unflagged) state from explicit terms. Amplitudes on the
    /// same ket merge; entries below the prune threshold are dropped.
    pub fn from_terms(
        mode_count: usize,
        terms: impl IntoIterator<Item = (OccupationVector, Complex<T>)>,
    ) -> Result<Self> {
        let mut acc = TermAccumulator::new(mode_count);
        for (occ, amp) in terms {
            acc.add(occ, amp)?;
        }
        Ok(acc.build(false))
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Number of retained basis terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates terms in a deterministic (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &Complex<T>)> {
        self.terms.iter()
    }

    /// Amplitude on |occ>, zero when the ket is absent.
    pub fn amplitude(&self, occ: &OccupationVector) -> Complex<T> {
        self.terms
            .get(occ)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Whether the state carries the explicit normalization flag.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> T {
        self.terms.values().map(Complex::norm_sqr).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm and sets the flag.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == T::zero() {
            return Err(Error::ZeroNorm);
        }
        let inv = Complex::new(norm.recip(), T::zero());
        let mut out = self.map_amplitudes(|a| a * inv);
        out.normalized = true;
        Ok(out)
    }

    /// Sets the flag after verifying the norm is already 1 within tolerance.
    pub fn mark_normalized(mut self) -> Result<Self> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::norm_tolerance() {
            return Err(Error::NormOutOfTolerance(
                norm_sqr.to_f64().unwrap_or(f64::NAN),
            ));
        }
        self.normalized = true;
        Ok(self)
    }

    /// Scalar multiple. The flag survives only a pure phase factor.
    pub fn scaled(&self, factor: Complex<T>) -> Self {
        let unit_modulus = (factor.norm_sqr() - T::one()).abs() <= T::norm_tolerance();
        let mut out = self.map_amplitudes(|a| a * factor);
        out.normalized = self.normalized && unit_modulus;
        out
    }

    /// Term-wise sum. The result is not flagged normalized.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_modes(other)?;
        let mut acc = TermAccumulator::new(self.mode_count);
        for (occ, amp) in self.terms() {
            acc.add(occ.clone(), *amp)?;
        }
        for (occ, amp) in other.terms() {
            acc.add(occ.clone(), *amp)?;
        }
        Ok(acc.build(false))
    }

    /// Tensor product; mode counts add, amplitudes multiply.
    pub fn tensor(&self, other: &Self) -> Self {
        let mode_count = self.mode_count + other.mode_count;
        let mut acc = TermAccumulator::new(mode_count);
        for (occ_a, amp_a) in self.terms() {
            for (occ_b, amp_b) in other.terms() {
                acc.add(occ_a.concat(occ_b), amp_a * amp_b)
                    .expect("concatenated labels have the combined mode count");
            }
        }
        acc.build(self.normalized && other.normalized)
    }

    /// Creation operator on `mode`: |..., n, ...> -> sqrt(n+1) |..., n+1, ...>.
    /// The output is generally unnormalized.
    pub fn apply_creation(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let mut acc = TermAccumulator::new(self.mode_count);
        for (occ, amp) in self.terms() {
            let n = occ.count(mode);
            let factor = T::of_usize(n as usize + 1).sqrt();
            acc.add(occ.with_increment(mode), amp.scale(factor))?;
        }
        Ok(acc.build(false))
    }

    /// Annihilation operator on `mode`: |..., n, ...> -> sqrt(n) |..., n-1, ...>.
    pub fn apply_annihilation(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let mut acc = TermAccumulator::new(self.mode_count);
        for (occ, amp) in self.terms() {
            let n = occ.count(mode);
            if let Some(lowered) = occ.with_decrement(mode) {
                let factor = T::of_usize(n as usize).sqrt();
                acc.add(lowered, amp.scale(factor))?;
            }
        }
        Ok(acc.build(false))
    }

    /// A superposition of creation operators, sum_m c_m a_m^dag, applied once.
    pub fn apply_creation_sum(&self, combo: &[(usize, Complex<T>)]) -> Result<Self> {
        for &(mode, _) in combo {
            self.check_mode(mode)?;
        }
        let mut acc = TermAccumulator::new(self.mode_count);
        for (occ, amp) in self.terms() {
            for &(mode, coeff) in combo {
                let n = occ.count(mode);
                let factor = T::of_usize(n as usize + 1).sqrt();
                acc.add(occ.with_increment(mode), amp * coeff.scale(factor))?;
            }
        }
        Ok(acc.build(false))
    }

    /// A superposition of annihilation operators, sum_m c_m a_m, applied once.
    pub fn apply_annihilation_sum(&self, combo: &[(usize, Complex<T>)]) -> Result<Self> {
        for &(mode, _) in combo {
            self.check_mode(mode)?;
        }
        let mut acc = TermAccumulator::new(self.mode_count);
        for (occ, amp) in self.terms() {
            for &(mode, coeff) in combo {
                let n = occ.count(mode);
                if let Some(lowered) = occ.with_decrement(mode) {
                    let factor = T::of_usize(n as usize).sqrt();
                    acc.add(lowered, amp * coeff.scale(factor))?;
                }
            }
        }
        Ok(acc.build(false))
    }

    /// <self|other>, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_modes(other)?;
        let mut sum = Complex::new(T::zero(), T::zero());
        for (occ, amp) in self.terms() {
            sum += amp.conj() * other.amplitude(occ);
        }
        Ok(sum)
    }

    /// |<occ|state>|^2 for a state flagged normalized.
    pub fn outcome_probability(&self, occ: &OccupationVector) -> Result<T> {
        if occ.mode_count() != self.mode_count {
            return Err(Error::ModeCountMismatch {
                left: self.mode_count,
                right: occ.mode_count(),
            });
        }
        if !self.normalized {
            return Err(Error::NotNormalized);
        }
        Ok(self.amplitude(occ).norm_sqr())
    }

    /// Drops terms with |amplitude| below `threshold`.
    pub fn prune(&self, threshold: T) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, amp)| amp.norm_sqr() >= threshold * threshold)
            .map(|(o, a)| (o.clone(), *a))
            .collect();
        Self {
            mode_count: self.mode_count,
            terms,
            normalized: self.normalized,
        }
    }

    /// Expectation of the photon number in `mode`, read from amplitudes:
    /// sum_occ |a(occ)|^2 occ\[mode\] / norm^2.
    pub fn mean_photon_number(&self, mode: usize) -> Result<T> {
        self.check_mode(mode)?;
        let norm_sqr = self.norm_sqr();
        if norm_sqr == T::zero() {
            return Err(Error::ZeroNorm);
        }
        let weighted: T = self
            .terms()
            .map(|(occ, amp)| amp.norm_sqr() * T::of_usize(occ.count(mode) as usize))
            .sum();
        Ok(weighted / norm_sqr)
    }

    /// Distinct total photon numbers present in the superposition.
    pub fn photon_shells(&self) -> Vec<u32> {
        let mut shells: Vec<u32> = self.terms.keys().map(OccupationVector::total).collect();
        shells.sort_unstable();
        shells.dedup();
        shells
    }

    /// Keeps only the listed modes. All discarded modes must be empty in
    /// every retained term (the state must already be projected onto their
    /// vacuum), otherwise photon bookkeeping would silently break.
    pub fn restrict_to_modes(&self, modes: &[usize]) -> Result<Self> {
        for &m in modes {
            self.check_mode(m)?;
        }
        let keep: std::collections::BTreeSet<usize> = modes.iter().copied().collect();
        let mut acc = TermAccumulator::new(modes.len());
        for (occ, amp) in self.terms() {
            for (mode, &count) in occ.counts().iter().enumerate() {
                if count > 0 && !keep.contains(&mode) {
                    return Err(Error::InvalidParameter(format!(
                        "cannot drop mode {mode}: it still holds {count} photons"
                    )));
                }
            }
            let counts: Vec<u32> = modes.iter().map(|&m| occ.count(m)).collect();
            acc.add(OccupationVector::new(counts)?, *amp)?;
        }
        let mut out = acc.build(false);
        out.normalized = self.normalized;
        Ok(out)
    }

    /// Squared overlap |<a|b>|^2 of the normalized directions of two states.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        let overlap = self.inner_product(other)?;
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom == T::zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(overlap.norm_sqr() / denom)
    }

    /// Largest amplitude difference against `other`, including kets present
    /// on only one side.
    pub fn max_amplitude_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for (occ, amp) in self.terms() {
            worst = worst.max((amp - other.amplitude(occ)).norm());
        }
        for (occ, amp) in other.terms() {
            worst = worst.max((self.amplitude(occ) - amp).norm());
        }
        worst
    }

    fn map_amplitudes(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let terms = self.terms.iter().map(|(o, a)| (o.clone(), f(*a))).collect();
        Self {
            mode_count: self.mode_count,
            terms,
            normalized: false,
        }
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.mode_count {
            return Err(Error::ModeOutOfRange {
                index: mode,
                mode_count: self.mode_count,
            });
        }
        Ok(())
    }

    fn check_same_modes(&self, other: &Self) -> Result<()> {
        if self.mode_count != other.mode_count {
            return Err(Error::ModeCountMismatch {
                left: self.mode_count,
                right: other.mode_count,
            });
        }
        Ok(())
    }

    pub(crate) fn with_flag(mut self, normalized: bool) -> Self {
        self.normalized = normalized;
        self
    }
}

impl<T: Real> fmt::Debug for FockVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Real> fmt::Display for FockVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (occ, amp)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", amp.re, amp.im, occ)?;
        }
        Ok(())
    }
}

/// Builder that merges amplitudes per ket and prunes sub-threshold entries.
pub(crate) struct TermAccumulator<T: Real> {
    mode_count: usize,
    terms: BTreeMap<OccupationVector, Complex<T>>,
}

impl<T: Real> TermAccumulator<T> {
    pub(crate) fn new(mode_count: usize) -> Self {
        Self {
            mode_count,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn add(&mut self, occ: OccupationVector, amp: Complex<T>) -> Result<()> {
        if occ.mode_count() != self.mode_count {
            return Err(Error::ModeCountMismatch {
                left: self.mode_count,
                right: occ.mode_count(),
            });
        }
        let slot = self
            .terms
            .entry(occ)
            .or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *slot += amp;
        Ok(())
    }

    pub(crate) fn build(self, normalized: bool) -> FockVector<T> {
        let threshold = T::prune_threshold();
        let terms = self
            .terms
            .into_iter()
            .filter(|(_, amp)| amp.norm_sqr() >= threshold * threshold)
            .collect();
        FockVector {
            mode_count: self.mode_count,
            terms,
            normalized,
        }
    }
}

/// All occupation vectors over `mode_count` modes with the given total photon
/// number, in lexicographic order. Intended for shells up to [`SHELL_LIMIT`].
pub fn enumerate_shell(mode_count: usize, total: u32) -> Vec<OccupationVector> {
    fn rec(
        prefix: &mut Vec<u32>,
        modes_left: usize,
        total_left: u32,
        out: &mut Vec<OccupationVector>,
    ) {
        if modes_left == 1 {
            prefix.push(total_left);
            out.push(OccupationVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for n in 0..=total_left {
            prefix.push(n);
            rec(prefix, modes_left - 1, total_left - n, out);
            prefix.pop();
        }
    }
    assert!(mode_count >= 1, "at least one mode");
    let mut out = Vec::new();
    rec(
        &mut Vec::with_capacity(mode_count),
        mode_count,
        total,
        &mut out,
    );
    out
}
