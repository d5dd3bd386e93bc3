//! Spectral wave packets and partial temporal distinguishability.
//!
//! Photons are modeled as Gaussian spectral packets. Their pairwise-overlap
//! Gram matrix drives everything else: the permanent of the Gram matrix is
//! the permutation normalization of a product multi-photon state, and a
//! pivoted-Cholesky orthogonalization of the same matrix embeds each photon
//! into at most N orthonormal internal modes. Evolving the embedded state
//! through a spatial network (internal modes untouched) and summing outcome
//! probabilities over internal-mode assignments gives exact interference
//! probabilities for partially distinguishable photons: detectors are blind
//! to the internal label, but the amplitudes are not.

use ndarray::{s, Array2, ArrayView2};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::float::{phase_factor, Real};
use crate::fock::{FockVector, OccupationVector};
use crate::optics::{merge_twists, BeamSplitter, NetworkElement, PhaseShifter, PostselectPattern};

/// Largest matrix the exact permanent is willing to take on.
pub const PERMANENT_LIMIT: usize = 12;

/// Largest total photon number for the embedded-coincidence engine.
pub const COINCIDENCE_LIMIT: usize = 6;

/// Default number of samples per frequency axis.
pub const DEFAULT_GRID_POINTS: usize = 128;

/// How many bandwidths each side of a packet center the default grids cover.
/// Seven keeps the Gaussian truncation error below 1e-10; five would leave
/// it near 1e-6 and visible at the quoted check tolerances.
const GRID_SIGMA_SPAN: f64 = 7.0;

/// Single-photon spectral wave packet
/// phi(omega) ~ exp(-(omega - center)^2 / (4 sigma^2)) e^{i omega tau},
/// unit-normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPacket<T: Real> {
    center: T,
    bandwidth: T,
    delay: T,
}

impl<T: Real> GaussianPacket<T> {
    pub fn new(center: T, bandwidth: T, delay: T) -> Result<Self> {
        if bandwidth <= T::zero() || bandwidth.is_nan() {
            return Err(Error::InvalidBandwidth(
                bandwidth.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self {
            center,
            bandwidth,
            delay,
        })
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn bandwidth(&self) -> T {
        self.bandwidth
    }

    pub fn delay(&self) -> T {
        self.delay
    }

    /// Same packet displaced to a new delay.
    pub fn at_delay(&self, delay: T) -> Self {
        Self { delay, ..*self }
    }

    /// The normalized spectral amplitude at `omega`.
    pub fn amplitude(&self, omega: T) -> Complex<T> {
        let two = T::of(2.0);
        let norm = (two * T::PI() * self.bandwidth * self.bandwidth).powf(-T::of(0.25));
        let detune = omega - self.center;
        let gauss = (-(detune * detune) / (T::of(4.0) * self.bandwidth * self.bandwidth)).exp();
        phase_factor(omega * self.delay).scale(norm * gauss)
    }
}

/// Closed-form overlap <phi_a | phi_b> of two Gaussian packets.
///
/// For equal centers and bandwidths the magnitude is
/// exp(-sigma^2 (tau_b - tau_a)^2 / 2).
pub fn packet_overlap<T: Real>(a: &GaussianPacket<T>, b: &GaussianPacket<T>) -> Complex<T> {
    // integrand: N_a N_b exp(-(w - wa)^2/(4 sa^2) - (w - wb)^2/(4 sb^2)) e^{i w (tb - ta)}
    // Gaussian integral: int exp(-p w^2 + q w + r) dw = sqrt(pi/p) exp(q^2/(4p) + r).
    let quarter = T::of(0.25);
    let ca = quarter / (a.bandwidth * a.bandwidth);
    let cb = quarter / (b.bandwidth * b.bandwidth);
    let p = ca + cb;
    let q = Complex::new(
        T::of(2.0) * (ca * a.center + cb * b.center),
        b.delay - a.delay,
    );
    let r = -(ca * a.center * a.center + cb * b.center * b.center);
    let norm = (T::of(2.0) * T::PI() * a.bandwidth * a.bandwidth).powf(-quarter)
        * (T::of(2.0) * T::PI() * b.bandwidth * b.bandwidth).powf(-quarter);
    let gauss =
        (q * q / Complex::new(T::of(4.0) * p, T::zero()) + Complex::new(r, T::zero())).exp();
    gauss.scale(norm * (T::PI() / p).sqrt())
}

/// An ordered list of packets plus their Hermitian overlap Gram matrix.
///
/// Synthetic sets (exactly orthogonal or exactly shared packets) may be built
/// straight from a Gram matrix, in which case the packet list stays empty.
#[derive(Clone, Debug)]
pub struct PacketSet<T: Real> {
    packets: Vec<GaussianPacket<T>>,
    gram: Array2<Complex<T>>,
}

impl<T: Real> PacketSet<T> {
    /// Builds the set from explicit packets, filling the Gram matrix with the
    /// closed-form overlaps.
    pub fn from_packets(packets: Vec<GaussianPacket<T>>) -> Result<Self> {
        if packets.is_empty() {
            return Err(Error::EmptyOccupation);
        }
        let n = packets.len();
        let mut gram = Array2::zeros((n, n));
        for i in 0..n {
            gram[(i, i)] = Complex::new(T::one(), T::zero());
            for j in i + 1..n {
                let o = packet_overlap(&packets[i], &packets[j]);
                gram[(i, j)] = o;
                gram[(j, i)] = o.conj();
            }
        }
        Ok(Self { packets, gram })
    }

    /// Builds a synthetic set from a unit-diagonal Hermitian Gram matrix.
    pub fn from_gram(gram: Array2<Complex<T>>) -> Result<Self> {
        let (rows, cols) = gram.dim();
        if rows != cols {
            return Err(Error::NonSquareMatrix { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyOccupation);
        }
        let tol = T::norm_tolerance().max(T::of(1e-9));
        for i in 0..rows {
            if (gram[(i, i)] - Complex::new(T::one(), T::zero())).norm() > tol {
                return Err(Error::InvalidGram(format!("diagonal entry {i} is not 1")));
            }
            for j in 0..cols {
                if (gram[(i, j)] - gram[(j, i)].conj()).norm() > tol {
                    return Err(Error::InvalidGram(format!("not Hermitian at ({i},{j})")));
                }
                if gram[(i, j)].norm() > T::one() + tol {
                    return Err(Error::InvalidGram(format!(
                        "overlap magnitude above 1 at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self {
            packets: Vec::new(),
            gram,
        })
    }

    pub fn len(&self) -> usize {
        self.gram.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn packets(&self) -> &[GaussianPacket<T>] {
        &self.packets
    }

    pub fn gram(&self) -> ArrayView2<'_, Complex<T>> {
        self.gram.view()
    }
}

/// Partition of photon indices into blocks: photons within a block share one
/// packet; distinct blocks are exactly orthogonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishabilityScenario {
    photons: usize,
    blocks: Vec<Vec<usize>>,
}

impl DistinguishabilityScenario {
    pub fn new(photons: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; photons];
        for block in &blocks {
            for &i in block {
                if i >= photons || seen[i] {
                    return Err(Error::InvalidPartition);
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidPartition);
        }
        Ok(Self { photons, blocks })
    }

    /// One block: the "N x 1" case, all photons mutually indistinguishable.
    pub fn fully_indistinguishable(photons: usize) -> Self {
        Self {
            photons,
            blocks: vec![(0..photons).collect()],
        }
    }

    /// Singleton blocks: the "1 x N" case, all photons mutually orthogonal.
    pub fn fully_distinguishable(photons: usize) -> Self {
        Self {
            photons,
            blocks: (0..photons).map(|i| vec![i]).collect(),
        }
    }

    pub fn photon_count(&self) -> usize {
        self.photons
    }

    pub fn block_of(&self, photon: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&photon))
            .expect("partition covers all photons")
    }

    /// The exact 0/1 Gram matrix of this partition.
    pub fn packet_set<T: Real>(&self) -> PacketSet<T> {
        let n = self.photons;
        let mut gram = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                if self.block_of(i) == self.block_of(j) {
                    gram[(i, j)] = Complex::new(T::one(), T::zero());
                }
            }
        }
        PacketSet {
            packets: Vec::new(),
            gram,
        }
    }
}

/// Exact permanent by Ryser's inclusion-exclusion with Gray-code updates,
/// O(2^n n).
pub fn permanent<T: Real>(matrix: ArrayView2<'_, Complex<T>>) -> Result<Complex<T>> {
    let (rows, cols) = matrix.dim();
    if rows != cols {
        return Err(Error::NonSquareMatrix { rows, cols });
    }
    let n = rows;
    if n == 0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    if n > PERMANENT_LIMIT {
        return Err(Error::PermanentTooLarge {
            size: n,
            limit: PERMANENT_LIMIT,
        });
    }

    let zero = Complex::new(T::zero(), T::zero());
    let mut row_sums = vec![zero; n];
    let mut total = zero;
    let mut prev_gray: u64 = 0;
    let mut subset_size: i64 = 0;

    for k in 1u64..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let changed = gray ^ prev_gray;
        let j = changed.trailing_zeros() as usize;
        if gray & changed != 0 {
            for (i, sum) in row_sums.iter_mut().enumerate() {
                *sum += matrix[(i, j)];
            }
            subset_size += 1;
        } else {
            for (i, sum) in row_sums.iter_mut().enumerate() {
                *sum -= matrix[(i, j)];
            }
            subset_size -= 1;
        }
        prev_gray = gray;

        let mut prod = Complex::new(T::one(), T::zero());
        for sum in &row_sums {
            prod *= *sum;
        }
        if (n as i64 - subset_size) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// The permutation normalization of a product multi-photon state: the
/// permanent of the packet Gram matrix. Equals N! for N identical packets
/// and 1 for mutually orthogonal ones.
pub fn normalization_constant<T: Real>(ps: &PacketSet<T>) -> Result<T> {
    let value = permanent(ps.gram())?;
    debug_assert!(
        value.im.abs() <= T::of(1e-9) * (T::one() + value.re.abs()),
        "Gram permanent should be real"
    );
    Ok(value.re)
}

/// Uniform frequency axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyGrid<T: Real> {
    start: T,
    step: T,
    count: usize,
}

impl<T: Real> FrequencyGrid<T> {
    pub fn spanning(lo: T, hi: T, count: usize) -> Self {
        assert!(count >= 2, "a grid needs at least two points");
        Self {
            start: lo,
            step: (hi - lo) / T::of_usize(count - 1),
            count,
        }
    }

    /// Axis covering every listed packet out to five bandwidths.
    pub fn covering(packets: &[GaussianPacket<T>], count: usize) -> Self {
        assert!(!packets.is_empty());
        let span = T::of(GRID_SIGMA_SPAN);
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for p in packets {
            lo = lo.min(p.center() - span * p.bandwidth());
            hi = hi.max(p.center() + span * p.bandwidth());
        }
        Self::spanning(lo, hi, count)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn point(&self, index: usize) -> T {
        self.start + self.step * T::of_usize(index)
    }

    fn coarsened(&self) -> Self {
        Self {
            start: self.start,
            step: self.step * T::of(2.0),
            count: self.count.div_ceil(2),
        }
    }
}

/// Discretized two-photon spectral wave function Phi_2(omega_1, omega_2).
#[derive(Clone, Debug)]
pub struct JointAmplitude<T: Real> {
    grid1: FrequencyGrid<T>,
    grid2: FrequencyGrid<T>,
    values: Array2<Complex<T>>,
}

impl<T: Real> JointAmplitude<T> {
    /// Samples `f` on the product grid.
    pub fn sample(
        grid1: FrequencyGrid<T>,
        grid2: FrequencyGrid<T>,
        f: impl Fn(T, T) -> Complex<T>,
    ) -> Self {
        let mut values = Array2::zeros((grid1.len(), grid2.len()));
        for i in 0..grid1.len() {
            let w1 = grid1.point(i);
            for j in 0..grid2.len() {
                values[(i, j)] = f(w1, grid2.point(j));
            }
        }
        Self {
            grid1,
            grid2,
            values,
        }
    }

    /// Separable product phi_a(omega_1) phi_b(omega_2) on a shared axis
    /// covering both packets.
    pub fn two_photon(a: &GaussianPacket<T>, b: &GaussianPacket<T>, points: usize) -> Self {
        let grid = FrequencyGrid::covering(&[*a, *b], points);
        let a = *a;
        let b = *b;
        Self::sample(grid, grid, move |w1, w2| a.amplitude(w1) * b.amplitude(w2))
    }

    pub fn grid1(&self) -> FrequencyGrid<T> {
        self.grid1
    }

    pub fn grid2(&self) -> FrequencyGrid<T> {
        self.grid2
    }

    pub fn values(&self) -> ArrayView2<'_, Complex<T>> {
        self.values.view()
    }

    /// I = sum |Phi|^2 dw1 dw2.
    pub fn norm_integral(&self) -> T {
        let raw: T = self.values.iter().map(Complex::norm_sqr).sum();
        raw * self.grid1.step() * self.grid2.step()
    }

    fn coarsened(&self) -> Self {
        Self {
            grid1: self.grid1.coarsened(),
            grid2: self.grid2.coarsened(),
            values: self.values.slice(s![..;2, ..;2]).to_owned(),
        }
    }
}

/// The pair-distinguishability quantities of a two-photon amplitude:
/// `a` is the squared norm integral, `e` the exchange integral. Their ratio
/// e/a runs from 0 (distinguishable pairs) to 1 (pair-exchange symmetric).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairQuantities<T: Real> {
    pub a: T,
    pub e: T,
}

impl<T: Real> PairQuantities<T> {
    pub fn ratio(&self) -> T {
        self.e / self.a
    }
}

fn pair_quantities_raw<T: Real>(j: &JointAmplitude<T>) -> PairQuantities<T> {
    let i = j.norm_integral();
    let a = i * i;
    // E = Tr[(M M^dag)^2] d1^2 d2^2; for Hermitian K = M M^dag the trace of
    // K^2 is the squared Frobenius norm.
    let m = &j.values;
    let mh = m.t().mapv(|c| c.conj());
    let k = m.dot(&mh);
    let frob: T = k.iter().map(Complex::norm_sqr).sum();
    let d1 = j.grid1.step();
    let d2 = j.grid2.step();
    let e = frob * d1 * d1 * d2 * d2;
    PairQuantities { a, e }
}

fn converged<T: Real>(fine: &PairQuantities<T>, coarse: &PairQuantities<T>) -> Result<()> {
    let rel_a = ((fine.a - coarse.a) / fine.a).abs();
    let scale_e = fine.e.max(fine.a * T::of(1e-3));
    let rel_e = ((fine.e - coarse.e) / scale_e).abs();
    let worst = rel_a.max(rel_e);
    if worst > T::of(0.005) {
        return Err(Error::GridNotConverged(worst.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// A = I^2 and E = Tr[(M M^dag)^2] (dw)^4 for a two-photon amplitude, with a
/// built-in resolution check: the same quantities on the stride-2 subgrid
/// must agree within 0.5%.
pub fn pair_quantities<T: Real>(j: &JointAmplitude<T>) -> Result<PairQuantities<T>> {
    let fine = pair_quantities_raw(j);
    let coarse = pair_quantities_raw(&j.coarsened());
    converged(&fine, &coarse)?;
    Ok(fine)
}

/// The four-photon generalization for two (possibly different) pairs:
/// A = I_a I_b, E = sum |M_a M_b^dag|^2 (dw)^4. With identical arguments this
/// reduces to [`pair_quantities`]; with spectrally disjoint pairs E vanishes.
pub fn four_photon_pair_quantities<T: Real>(
    a: &JointAmplitude<T>,
    b: &JointAmplitude<T>,
) -> Result<PairQuantities<T>> {
    if a.grid1 != b.grid1 || a.grid2 != b.grid2 {
        return Err(Error::GridMismatch);
    }
    let raw = |ja: &JointAmplitude<T>, jb: &JointAmplitude<T>| {
        let cross = ja.values.dot(&jb.values.t().mapv(|c| c.conj()));
        let frob: T = cross.iter().map(Complex::norm_sqr).sum();
        let d1 = ja.grid1.step();
        let d2 = ja.grid2.step();
        PairQuantities {
            a: ja.norm_integral() * jb.norm_integral(),
            e: frob * d1 * d1 * d2 * d2,
        }
    };
    let fine = raw(a, b);
    let coarse = raw(&a.coarsened(), &b.coarsened());
    converged(&fine, &coarse)?;
    Ok(fine)
}

/// Two-photon interference visibility of a joint amplitude:
/// the exchange quotient int Phi^*(w1,w2) Phi(w2,w1) / int |Phi|^2.
/// Requires a shared axis; the imaginary residue must stay negligible and
/// the real part is reported.
pub fn hom_visibility<T: Real>(j: &JointAmplitude<T>) -> Result<T> {
    if j.grid1 != j.grid2 {
        return Err(Error::GridMismatch);
    }
    let m = &j.values;
    let mut num = Complex::new(T::zero(), T::zero());
    let mut den = T::zero();
    for i in 0..m.nrows() {
        for k in 0..m.ncols() {
            num += m[(i, k)].conj() * m[(k, i)];
            den += m[(i, k)].norm_sqr();
        }
    }
    let v = num / Complex::new(den, T::zero());
    if v.im.abs() > T::visibility_imag_tolerance() {
        return Err(Error::ComplexVisibility(v.im.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(v.re)
}

/// Expansion of each photon over at most N orthonormal internal modes,
/// obtained from a pivoted Cholesky factorization of the Gram matrix.
#[derive(Clone, Debug)]
pub struct InternalModeEmbedding<T: Real> {
    expansions: Vec<Vec<Complex<T>>>,
    rank: usize,
}

/// Orthogonalizes a packet set. Small negative pivot residuals (above
/// -1e-10) coming from quadrature noise are clipped to zero; anything more
/// negative is reported as an indefinite Gram matrix.
pub fn embed_internal_modes<T: Real>(ps: &PacketSet<T>) -> Result<InternalModeEmbedding<T>> {
    let gram = ps.gram();
    let n = ps.len();
    let neg_floor = T::of(-1e-10);
    let clip = T::of(1e-12);

    let zero = Complex::new(T::zero(), T::zero());
    let mut lower = vec![vec![zero; n]; n];
    let mut residual: Vec<T> = (0..n).map(|i| gram[(i, i)].re).collect();
    let mut processed = vec![false; n];
    let mut pivots: Vec<usize> = Vec::new();

    for step in 0..n {
        let mut pivot = None;
        let mut best = T::neg_infinity();
        for i in 0..n {
            if !processed[i] && residual[i] > best {
                best = residual[i];
                pivot = Some(i);
            }
        }
        let p = pivot.expect("unprocessed index exists");
        if best < neg_floor {
            return Err(Error::IndefiniteGram(best.to_f64().unwrap_or(f64::NAN)));
        }
        if best <= clip {
            break; // remaining directions are numerically dependent
        }
        let diag = best.sqrt();
        lower[p][step] = Complex::new(diag, T::zero());
        processed[p] = true;
        for i in 0..n {
            if processed[i] {
                continue;
            }
            let mut v = gram[(i, p)];
            for (li, lp) in lower[i][..step].iter().zip(&lower[p][..step]) {
                v -= *li * lp.conj();
            }
            let entry = v.unscale(diag);
            lower[i][step] = entry;
            residual[i] -= entry.norm_sqr();
        }
        pivots.push(p);
    }

    let rank = pivots.len().max(1);
    let expansions = lower
        .into_iter()
        .map(|row| row.into_iter().take(rank).map(|c| c.conj()).collect())
        .collect();
    Ok(InternalModeEmbedding { expansions, rank })
}

impl<T: Real> InternalModeEmbedding<T> {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn photon_count(&self) -> usize {
        self.expansions.len()
    }

    /// Internal-mode coefficients of one photon.
    pub fn expansion(&self, photon: usize) -> &[Complex<T>] {
        &self.expansions[photon]
    }

    /// Flat index of (spatial mode, internal mode).
    pub fn fine_mode(&self, spatial: usize, internal: usize) -> usize {
        spatial * self.rank + internal
    }

    /// The unnormalized product state with photon i created in spatial mode
    /// `spatial[i]`, expanded over (spatial x internal) modes. Its squared
    /// norm is the Gram permanent.
    pub fn embedded_state(
        &self,
        spatial: &[usize],
        spatial_mode_count: usize,
    ) -> Result<FockVector<T>> {
        if spatial.len() != self.photon_count() {
            return Err(Error::InvalidParameter(
                "one spatial mode per photon required".into(),
            ));
        }
        let fine_count = spatial_mode_count * self.rank;
        let mut state = FockVector::vacuum(fine_count)?;
        for (photon, &mode) in spatial.iter().enumerate() {
            if mode >= spatial_mode_count {
                return Err(Error::ModeOutOfRange {
                    index: mode,
                    mode_count: spatial_mode_count,
                });
            }
            let combo: Vec<(usize, Complex<T>)> = self.expansions[photon]
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm_sqr() > T::zero())
                .map(|(k, &c)| (self.fine_mode(mode, k), c))
                .collect();
            state = state.apply_creation_sum(&combo)?;
        }
        Ok(state)
    }

    /// Spatial occupation obtained by summing a fine label over its internal
    /// modes.
    pub fn spatial_occupation(
        &self,
        occ: &OccupationVector,
        spatial_mode_count: usize,
    ) -> OccupationVector {
        let mut counts = vec![0u32; spatial_mode_count];
        for (fine, &c) in occ.counts().iter().enumerate() {
            counts[fine / self.rank] += c;
        }
        OccupationVector::new(counts).expect("spatial mode count is positive")
    }
}

/// Exact coincidence probability for partially distinguishable photons.
///
/// Photon i (with packet i of `ps`) is created in spatial input mode
/// `input_modes[i]`; the network elements address spatial modes and act
/// identically on every internal mode; `pattern` constrains the detected
/// spatial occupation, with detectors blind to internal modes.
///
/// With all packets identical this reduces to the pure-Fock pipeline; with
/// all packets orthogonal and a full bucket pattern it reduces to the
/// classical independent-particle probability.
pub fn coincidence_with_distinguishability<T: Real>(
    ps: &PacketSet<T>,
    input_modes: &[usize],
    spatial_mode_count: usize,
    network: &[NetworkElement<T>],
    pattern: &PostselectPattern,
) -> Result<T> {
    let photons = ps.len();
    if photons > COINCIDENCE_LIMIT {
        return Err(Error::ShellOverflow {
            photons,
            limit: COINCIDENCE_LIMIT,
        });
    }
    if pattern.mode_count() != spatial_mode_count {
        return Err(Error::ModeCountMismatch {
            left: spatial_mode_count,
            right: pattern.mode_count(),
        });
    }

    let embedding = embed_internal_modes(ps)?;
    let state = embedding
        .embedded_state(input_modes, spatial_mode_count)?
        .normalized()?;

    let mut fine_elements = Vec::new();
    for element in network {
        match element {
            NetworkElement::Splitter(splitter) => {
                let (a, b) = splitter.modes();
                if a >= spatial_mode_count || b >= spatial_mode_count {
                    return Err(Error::ModeOutOfRange {
                        index: a.max(b),
                        mode_count: spatial_mode_count,
                    });
                }
                for k in 0..embedding.rank() {
                    fine_elements.push(NetworkElement::Splitter(BeamSplitter::new(
                        splitter.transmissivity(),
                        (embedding.fine_mode(a, k), embedding.fine_mode(b, k)),
                    )?));
                }
            }
            NetworkElement::Phase(phase) => {
                if phase.mode >= spatial_mode_count {
                    return Err(Error::ModeOutOfRange {
                        index: phase.mode,
                        mode_count: spatial_mode_count,
                    });
                }
                for k in 0..embedding.rank() {
                    fine_elements.push(NetworkElement::Phase(PhaseShifter::new(
                        embedding.fine_mode(phase.mode, k),
                        phase.phase,
                    )));
                }
            }
        }
    }

    let evolved = crate::optics::apply_network(&state, &fine_elements)?;
    let mut probability = T::zero();
    for (occ, amp) in evolved.terms() {
        let spatial = embedding.spatial_occupation(occ, spatial_mode_count);
        if pattern.matches(&spatial) {
            probability += amp.norm_sqr();
        }
    }
    Ok(probability)
}

/// N-fold coincidence of the projection fan for a product state of partially
/// distinguishable photons on two polarization modes (0 = H, 1 = V).
///
/// Detector n (n = 0 .. N-1) annihilates
/// (a_H - e^{i 2 pi n / N} a_V) / (N sqrt(2)) in every internal mode; the
/// full coincidence sums |amplitude|^2 over the internal-mode assignment of
/// all detectors.
pub fn noon_projection_coincidence<T: Real>(
    ps: &PacketSet<T>,
    polarizations: &[usize],
) -> Result<T> {
    let photons = ps.len();
    if photons == 0 {
        return Err(Error::ZeroPhotons);
    }
    if photons > COINCIDENCE_LIMIT {
        return Err(Error::ShellOverflow {
            photons,
            limit: COINCIDENCE_LIMIT,
        });
    }
    for &p in polarizations {
        if p > 1 {
            return Err(Error::ModeOutOfRange {
                index: p,
                mode_count: 2,
            });
        }
    }

    let embedding = embed_internal_modes(ps)?;
    let state = embedding.embedded_state(polarizations, 2)?.normalized()?;
    let rank = embedding.rank();
    let twists = merge_twists::<T>(photons);
    let scale = (T::of_usize(photons) * T::of(2.0).sqrt()).recip();

    // Detector operators per internal mode choice.
    type DetectorOps<T> = Vec<Vec<[(usize, Complex<T>); 2]>>;
    let mut detector_ops: DetectorOps<T> = Vec::with_capacity(photons);
    for &delta in &twists {
        let mut per_internal = Vec::with_capacity(rank);
        for k in 0..rank {
            per_internal.push([
                (embedding.fine_mode(0, k), Complex::new(scale, T::zero())),
                (embedding.fine_mode(1, k), -phase_factor(delta).scale(scale)),
            ]);
        }
        detector_ops.push(per_internal);
    }

    // Sum |<0| prod_n B_{n, xi_n} |state>|^2 over internal assignments xi.
    let vacuum_label = OccupationVector::vacuum(2 * rank)?;
    let mut total = T::zero();
    let mut assignment = vec![0usize; photons];
    loop {
        let mut current = state.clone();
        for (n, &xi) in assignment.iter().enumerate() {
            current = current.apply_annihilation_sum(&detector_ops[n][xi])?;
            if current.is_empty() {
                break;
            }
        }
        if !current.is_empty() {
            total += current.amplitude(&vacuum_label).norm_sqr();
        }

        // next mixed-radix assignment
        let mut digit = 0;
        loop {
            if digit == photons {
                return Ok(total);
            }
            assignment[digit] += 1;
            if assignment[digit] < rank {
                break;
            }
            assignment[digit] = 0;
            digit += 1;
        }
    }
}
