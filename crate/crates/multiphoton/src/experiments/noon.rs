//! NOON-state fringes, NOON generation, and projection-measurement fringes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::experiments::{closed_form, ExperimentReport, ResolvedInput, ScanDefaults};
use crate::fit::{fit_cosine, harmonic_amplitudes, FitSummary};
use crate::fock::{FockVector, OccupationVector};
use crate::optics::{
    apply_network, make_noon, noon_projection_rate, BeamSplitter, NetworkElement, PhaseShifter,
};
use crate::scan::{tol, Check, ScanResult};

const PHASE_SCAN: ScanDefaults = ScanDefaults {
    parameter: "phase",
    start: 0.0,
    stop: 2.0 * std::f64::consts::PI,
    steps: 81,
};

/// Standard fringe diagnostics: fitted period 2 pi / n, unit visibility when
/// requested, and no other harmonic above 1e-6 of the principal one.
fn fringe_checks(
    phases: &[f64],
    values: &[f64],
    harmonic: u32,
    check_visibility: bool,
) -> Result<(Vec<Check>, FitSummary)> {
    let max_harmonic = (2 * harmonic as usize).max(2);
    let fit = fit_cosine(phases, values, 1..=max_harmonic, 2.0 * std::f64::consts::PI)?;
    let expected_period = 2.0 * std::f64::consts::PI / harmonic as f64;

    let amps = harmonic_amplitudes(phases, values, max_harmonic, 2.0 * std::f64::consts::PI)?;
    let principal = amps[harmonic as usize - 1];
    let mut stray: f64 = 0.0;
    for (idx, &a) in amps.iter().enumerate() {
        if idx + 1 != harmonic as usize {
            stray = stray.max(a);
        }
    }

    let mut checks = vec![
        Check::new(
            "fitted_period",
            expected_period,
            fit.period,
            expected_period * tol::PERIOD_REL,
        ),
        Check::new(
            "harmonic_purity",
            0.0,
            stray / principal.max(f64::MIN_POSITIVE),
            tol::VISIBILITY,
        ),
    ];
    if check_visibility {
        checks.push(Check::new(
            "visibility",
            1.0,
            fit.visibility(),
            tol::VISIBILITY,
        ));
    }
    Ok((checks, fit.summary()))
}

fn noon_fringe_probability(photons: u32, phi: f64) -> Result<f64> {
    let state = make_noon::<f64>(photons, 0.0)?;
    let network = [
        NetworkElement::Phase(PhaseShifter::new(0, phi)),
        NetworkElement::Splitter(BeamSplitter::balanced((0, 1))?),
    ];
    let out = apply_network(&state, &network)?;
    out.outcome_probability(&OccupationVector::new(vec![photons, 0])?)
}

/// NOON state through a phase arm and a balanced splitter: the all-photons
/// rate fringes as (1 + cos N phi) / 2 after normalization by 2^{N-1}.
pub fn run_noon_fringe(input: &ResolvedInput) -> Result<ExperimentReport> {
    let photons = input.count("photons")? as u32;
    if photons == 0 || photons > 6 {
        return Err(Error::ShellOverflow {
            photons: photons as usize,
            limit: 6,
        });
    }

    let (param_name, phases) = input.scan_values(&PHASE_SCAN)?;
    let mut scan = ScanResult::new(
        "noon_fringe",
        param_name,
        vec![
            "coincidence".into(),
            "normalized".into(),
            "closed_form".into(),
        ],
    );
    let rescale = 2f64.powi(photons as i32 - 1);
    let mut normalized = Vec::new();
    let mut worst_gap = 0.0f64;
    for &phi in &phases {
        let raw = noon_fringe_probability(photons, phi)?;
        let model = closed_form::noon_fringe(photons, phi);
        worst_gap = worst_gap.max((raw * rescale - model).abs());
        scan.push_row(phi, vec![raw, raw * rescale, model]);
        normalized.push(raw * rescale);
    }
    scan.insert_metadata("photons", photons);

    let (mut checks, fit) = fringe_checks(&phases, &normalized, photons, true)?;
    checks.push(Check::new(
        "peak_at_zero",
        closed_form::noon_fringe(photons, 0.0),
        noon_fringe_probability(photons, 0.0)? * rescale,
        tol::EXACT,
    ));
    checks.push(Check::new(
        "fringe_matches_closed_form",
        0.0,
        worst_gap,
        tol::EXACT,
    ));
    Ok(ExperimentReport::new(scan, checks, Some(fit)))
}

const ETA_SCAN: ScanDefaults = ScanDefaults {
    parameter: "eta_scale",
    start: 0.0,
    stop: 2.0,
    steps: 41,
};

/// Three-photon output coefficients of the coherent + photon-pair mixing:
/// amplitudes on (|3,0>, |2,1>, |1,2>, |0,3>) after the balanced splitter.
fn mixing_output(alpha: Complex64, eta: Complex64) -> Result<FockVector<f64>> {
    // Taylor-truncated inputs: coherent state up to |3>, pair state |0> + eta |2>.
    let mut port1 = Vec::new();
    let mut amp = Complex64::new(1.0, 0.0);
    for n in 0..=3u32 {
        if n > 0 {
            amp = amp * alpha / Complex64::new((n as f64).sqrt(), 0.0);
        }
        port1.push((OccupationVector::new(vec![n])?, amp));
    }
    let port1 = FockVector::from_terms(1, port1)?;
    let port2 = FockVector::from_terms(
        1,
        [
            (OccupationVector::new(vec![0])?, Complex64::new(1.0, 0.0)),
            (OccupationVector::new(vec![2])?, eta),
        ],
    )?;
    let joint = port1.tensor(&port2);
    // project onto the three-photon shell before the splitter (the splitter
    // conserves the shell, so the order is immaterial)
    let shell = FockVector::from_terms(
        2,
        joint
            .terms()
            .filter(|(occ, _)| occ.total() == 3)
            .map(|(occ, amp)| (occ.clone(), *amp)),
    )?;
    BeamSplitter::balanced((0, 1))?.apply(&shell)
}

/// Interference of a weak coherent state with a photon pair on a balanced
/// splitter: at alpha^2 = sqrt(2) eta the |2,1> and |1,2> amplitudes cancel
/// and the three-photon shell collapses onto a NOON state.
pub fn run_three_photon_noon_generation(input: &ResolvedInput) -> Result<ExperimentReport> {
    let alpha = Complex64::new(input.number("alpha_re"), input.number("alpha_im"));
    let eta = Complex64::new(input.number("eta_re"), input.number("eta_im"));
    if alpha.norm() > 0.5 || eta.norm() > 0.5 {
        return Err(Error::TruncationViolation(
            "require |alpha| <= 0.5 and |eta| <= 0.5 so neglected shells stay irrelevant".into(),
        ));
    }

    // the produced NOON state carries the pi relative phase
    let noon3 = make_noon::<f64>(3, std::f64::consts::PI)?;
    let observables = |out: &FockVector<f64>| -> Result<(f64, f64, f64)> {
        let middle = out.amplitude(&OccupationVector::new(vec![2, 1])?).norm();
        let extreme = out.amplitude(&OccupationVector::new(vec![3, 0])?).norm();
        let fidelity = if out.norm_sqr() > 0.0 {
            out.fidelity(&noon3)?
        } else {
            0.0
        };
        Ok((middle, extreme, fidelity))
    };

    let (param_name, scales) = input.scan_values(&ETA_SCAN)?;
    let mut scan = ScanResult::new(
        "three_photon_noon_generation",
        param_name,
        vec![
            "middle_magnitude".into(),
            "extreme_magnitude".into(),
            "noon_fidelity".into(),
        ],
    );
    for &s in &scales {
        let out = mixing_output(alpha, eta * s)?;
        let (middle, extreme, fidelity) = observables(&out)?;
        scan.push_row(s, vec![middle, extreme, fidelity]);
    }

    let mut checks = Vec::new();
    // Engine vs the closed-form coefficient families at the configured
    // (alpha, eta). With the network-wide splitter sign convention the
    // output is extreme (|3,0> - |0,3>) - middle (|2,1> - |1,2>): the two
    // families carry opposite signs on their mirror kets.
    let out = mixing_output(alpha, eta)?;
    let (model_extreme, model_middle) = closed_form::three_photon_mixing_coefficients(alpha, eta);
    checks.push(Check::new(
        "middle_amplitude",
        0.0,
        (out.amplitude(&OccupationVector::new(vec![2, 1])?) + model_middle).norm(),
        tol::EXACT,
    ));
    checks.push(Check::new(
        "mirror_middle_amplitude",
        0.0,
        (out.amplitude(&OccupationVector::new(vec![1, 2])?) - model_middle).norm(),
        tol::EXACT,
    ));
    checks.push(Check::new(
        "extreme_amplitude",
        0.0,
        (out.amplitude(&OccupationVector::new(vec![3, 0])?) - model_extreme).norm(),
        tol::EXACT,
    ));
    checks.push(Check::new(
        "mirror_extreme_amplitude",
        0.0,
        (out.amplitude(&OccupationVector::new(vec![0, 3])?) + model_extreme).norm(),
        tol::EXACT,
    ));

    // the matched point: eta* = alpha^2 / sqrt(2)
    let eta_star = alpha * alpha / Complex64::new(2f64.sqrt(), 0.0);
    let matched = mixing_output(alpha, eta_star)?;
    let (middle, _, fidelity) = observables(&matched)?;
    checks.push(Check::new(
        "matched_middle_vanishes",
        0.0,
        middle,
        tol::EXACT,
    ));
    checks.push(Check::new(
        "matched_noon_fidelity",
        1.0,
        fidelity,
        tol::EXACT,
    ));

    // no coherent drive, no three-photon shell at all
    let empty = mixing_output(Complex64::new(0.0, 0.0), eta)?;
    checks.push(Check::new(
        "alpha_zero_shell_empty",
        0.0,
        empty.norm_sqr(),
        tol::EXACT,
    ));

    // pure coherent drive: both families scale with |alpha|^3, extreme
    // smaller by 1/sqrt(3)
    if alpha.norm() > 0.0 {
        let bare = mixing_output(alpha, Complex64::new(0.0, 0.0))?;
        let (middle, extreme, _) = observables(&bare)?;
        checks.push(Check::new(
            "eta_zero_middle",
            alpha.norm().powi(3) / 4.0,
            middle,
            tol::EXACT,
        ));
        checks.push(Check::new(
            "eta_zero_extreme",
            alpha.norm().powi(3) / (4.0 * 3f64.sqrt()),
            extreme,
            tol::EXACT,
        ));
    }

    Ok(ExperimentReport::new(scan, checks, None))
}

struct ProjectionScheme {
    harmonic: u32,
    inverted: bool,
    /// Raw fringe rate at the fringe peak.
    peak: f64,
    rate: Box<dyn Fn(f64) -> Result<f64>>,
}

fn projection_scheme(name: &str, photons: u32) -> Result<ProjectionScheme> {
    match name {
        "three_photon_wk" => {
            let t = 2.0 / 3.0;
            Ok(ProjectionScheme {
                harmonic: 3,
                inverted: false,
                peak: 32.0 / 81.0,
                rate: Box::new(move |phi| {
                    let network = [
                        NetworkElement::Splitter(BeamSplitter::new(t, (0, 1))?),
                        NetworkElement::Phase(PhaseShifter::new(0, phi)),
                        NetworkElement::Splitter(BeamSplitter::new(t, (0, 1))?),
                    ];
                    let state = FockVector::<f64>::basis(OccupationVector::new(vec![2, 1])?);
                    let out = apply_network(&state, &network)?;
                    out.outcome_probability(&OccupationVector::new(vec![1, 2])?)
                }),
            })
        }
        "four_photon_asym" => {
            let t1 = (3.0 + 3f64.sqrt()) / 6.0;
            Ok(ProjectionScheme {
                harmonic: 4,
                inverted: false,
                peak: 0.25,
                rate: Box::new(move |phi| {
                    let network = [
                        NetworkElement::Splitter(BeamSplitter::new(t1, (0, 1))?),
                        NetworkElement::Phase(PhaseShifter::new(0, phi)),
                        NetworkElement::Splitter(BeamSplitter::balanced((0, 1))?),
                    ];
                    let state = FockVector::<f64>::basis(OccupationVector::new(vec![2, 2])?);
                    let out = apply_network(&state, &network)?;
                    out.outcome_probability(&OccupationVector::new(vec![2, 2])?)
                }),
            })
        }
        "four_photon_symmetric" => Ok(ProjectionScheme {
            harmonic: 4,
            inverted: true,
            peak: 0.375,
            rate: Box::new(move |phi| {
                let network = [
                    NetworkElement::Splitter(BeamSplitter::balanced((0, 1))?),
                    NetworkElement::Phase(PhaseShifter::new(0, phi)),
                    NetworkElement::Splitter(BeamSplitter::balanced((0, 1))?),
                ];
                let state = FockVector::<f64>::basis(OccupationVector::new(vec![2, 2])?);
                let out = apply_network(&state, &network)?;
                out.outcome_probability(&OccupationVector::new(vec![3, 1])?)
            }),
        }),
        "noon_projection" => {
            if photons == 0 || photons > 6 {
                return Err(Error::ShellOverflow {
                    photons: photons as usize,
                    limit: 6,
                });
            }
            let n = photons as usize;
            let peak = 2.0 / (2f64.powi(n as i32 - 1) * (n as f64).powi(2 * n as i32));
            Ok(ProjectionScheme {
                harmonic: photons,
                inverted: true,
                peak,
                rate: Box::new(move |phi| {
                    let inv_sqrt2 = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
                    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
                    coeffs[0] = inv_sqrt2;
                    coeffs[n] = inv_sqrt2 * Complex64::from_polar(1.0, n as f64 * phi);
                    noon_projection_rate(&coeffs)
                }),
            })
        }
        other => Err(Error::UnknownScheme(other.to_string())),
    }
}

/// Fringes with an N-photon period from projection measurements that filter
/// out every non-NOON component.
pub fn run_de_broglie_projection(input: &ResolvedInput) -> Result<ExperimentReport> {
    let scheme_name = input.text("scheme").to_string();
    let photons = input.count("photons")? as u32;
    let scheme = projection_scheme(&scheme_name, photons)?;

    let (param_name, phases) = input.scan_values(&PHASE_SCAN)?;
    let mut scan = ScanResult::new(
        "de_broglie_projection",
        param_name,
        vec!["coincidence".into(), "closed_form".into()],
    );
    let mut series = Vec::new();
    let mut worst_gap = 0.0f64;
    for &phi in &phases {
        let rate = (scheme.rate)(phi)?;
        let model =
            scheme.peak * closed_form::de_broglie_fringe(scheme.harmonic, phi, scheme.inverted);
        worst_gap = worst_gap.max((rate - model).abs());
        scan.push_row(phi, vec![rate, model]);
        series.push(rate);
    }
    scan.insert_metadata("scheme", scheme_name);

    let (mut checks, fit) = fringe_checks(&phases, &series, scheme.harmonic, false)?;
    checks.push(Check::new(
        "fringe_matches_closed_form",
        0.0,
        worst_gap,
        tol::EXACT,
    ));
    // the null phase: pi/N for upright fringes, 0 for inverted ones
    let null_phase = if scheme.inverted {
        0.0
    } else {
        std::f64::consts::PI / scheme.harmonic as f64
    };
    checks.push(Check::new(
        "dark_fringe",
        0.0,
        (scheme.rate)(null_phase)?,
        tol::EXACT,
    ));
    Ok(ExperimentReport::new(scan, checks, Some(fit)))
}
