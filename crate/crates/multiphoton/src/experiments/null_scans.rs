//! Transmissivity scans around destructive-interference nulls.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::experiments::{bisect_zero, closed_form, ExperimentReport, ResolvedInput, ScanDefaults};
use crate::fock::{FockVector, OccupationVector};
use crate::optics::{postselect, BeamSplitter, PostselectPattern};
use crate::scan::{tol, Check, ScanResult};

const T_SCAN: ScanDefaults = ScanDefaults {
    parameter: "transmissivity",
    start: 0.01,
    stop: 0.99,
    steps: 99,
};

fn splitter_amplitude(
    input: &OccupationVector,
    t: f64,
    outcome: &OccupationVector,
) -> Result<Complex64> {
    let out = BeamSplitter::new(t, (0, 1))?.apply(&FockVector::<f64>::basis(input.clone()))?;
    Ok(out.amplitude(outcome))
}

/// P3(2,1) over T for the |2,1> input; the null sits at T = 2/3 where the
/// amplitude sqrt(T)(T - 2R) changes sign.
pub fn run_wang_kobayashi_null(input: &ResolvedInput) -> Result<ExperimentReport> {
    let in_state = OccupationVector::new(vec![2, 1])?;
    let pattern = OccupationVector::new(vec![2, 1])?;

    let (param_name, values) = input.scan_values(&T_SCAN)?;
    let mut scan = ScanResult::new(
        "wang_kobayashi_null",
        param_name,
        vec!["p21_quantum".into(), "p21_closed_form".into()],
    );
    for t in values {
        let amp = splitter_amplitude(&in_state, t, &pattern)?;
        scan.push_row(
            t,
            vec![amp.norm_sqr(), closed_form::wang_kobayashi_coincidence(t)],
        );
    }

    let null = bisect_zero(
        |t| {
            splitter_amplitude(&in_state, t, &pattern)
                .map(|a| a.re)
                .unwrap_or(f64::NAN)
        },
        0.5,
        0.9,
        tol::ZERO_LOCATE,
    )?;

    let at_null =
        BeamSplitter::new(2.0 / 3.0, (0, 1))?.apply(&FockVector::<f64>::basis(in_state.clone()))?;
    let checks = vec![
        Check::new("null_location", 2.0 / 3.0, null, tol::ZERO_LOCATE),
        Check::new(
            "p21_at_half",
            closed_form::wang_kobayashi_coincidence(0.5),
            splitter_amplitude(&in_state, 0.5, &pattern)?.norm_sqr(),
            tol::EXACT,
        ),
        Check::new(
            "p21_transparent",
            closed_form::wang_kobayashi_coincidence(1.0),
            splitter_amplitude(&in_state, 1.0, &pattern)?.norm_sqr(),
            tol::EXACT,
        ),
        Check::new(
            "amplitude_30_at_null",
            2.0 / 3.0,
            at_null.amplitude(&OccupationVector::new(vec![3, 0])?).re,
            tol::EXACT,
        ),
        Check::new(
            "amplitude_03_at_null",
            2f64.sqrt() / 3.0,
            at_null.amplitude(&OccupationVector::new(vec![0, 3])?).re,
            tol::EXACT,
        ),
        Check::new(
            "amplitude_12_at_null",
            -(3f64.sqrt()) / 3.0,
            at_null.amplitude(&OccupationVector::new(vec![1, 2])?).re,
            tol::EXACT,
        ),
    ];
    Ok(ExperimentReport::new(scan, checks, None))
}

/// Conditioned amplitudes of the ancilla filter: input sum_n c_n |n> plus a
/// single photon on the other port, post-selected on one photon leaving that
/// port. The engine amplitudes must follow c_n sqrt(T^{n-1}) (T - n R), with
/// the component n = T/R (integer case) suppressed.
pub fn run_fock_filter(input: &ResolvedInput) -> Result<ExperimentReport> {
    let t = input.number("transmissivity");
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidTransmissivity(t));
    }
    let coeffs: Vec<f64> = (0..=5).map(|n| input.number(&format!("c{n}"))).collect();
    let norm: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter(
            "at least one input amplitude must be nonzero".into(),
        ));
    }
    let coeffs: Vec<f64> = coeffs.iter().map(|c| c / norm).collect();

    // two-mode input: signal superposition on port 0, ancilla photon on port 1
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(n, &c)| {
            (
                OccupationVector::new(vec![n as u32, 1]).expect("two modes"),
                Complex64::new(c, 0.0),
            )
        });
    let state = FockVector::from_terms(2, terms)?.mark_normalized()?;
    let out = BeamSplitter::new(t, (0, 1))?.apply(&state)?;
    let (conditioned, _) = postselect(&out, &PostselectPattern::on_modes(2, &[(1, 1)])?)?;

    let mut scan = ScanResult::new(
        "fock_filter",
        "component",
        vec![
            "input_amplitude".into(),
            "conditioned_engine".into(),
            "conditioned_closed_form".into(),
        ],
    );
    let mut checks = Vec::new();
    for (n, &c) in coeffs.iter().enumerate() {
        let engine = conditioned
            .amplitude(&OccupationVector::new(vec![n as u32, 1])?)
            .re;
        let model = c * closed_form::fock_filter_amplitude(t, n as u32);
        scan.push_row(n as f64, vec![c, engine, model]);
        checks.push(Check::new(
            format!("amplitude_law_n{n}"),
            model,
            engine,
            tol::EXACT,
        ));
    }
    scan.insert_metadata("transmissivity", t);

    // integer T/R suppresses that Fock component
    let r = 1.0 - t;
    if r > 0.0 {
        let ratio = t / r;
        if (ratio - ratio.round()).abs() < 1e-9 && ratio.round() >= 0.0 {
            let n0 = ratio.round() as usize;
            if n0 < coeffs.len() && coeffs[n0] != 0.0 {
                let engine = conditioned
                    .amplitude(&OccupationVector::new(vec![n0 as u32, 1])?)
                    .norm();
                checks.push(Check::new(
                    format!("filtered_component_n{n0}"),
                    0.0,
                    engine,
                    tol::ZERO_LOCATE,
                ));
            }
        }
    }

    // nulls at T = N/(N+1) for pure |N> inputs
    for n in 1..=5u32 {
        let t_null = n as f64 / (n as f64 + 1.0);
        let pure = FockVector::<f64>::basis(OccupationVector::new(vec![n, 1])?);
        let out = BeamSplitter::new(t_null, (0, 1))?.apply(&pure)?;
        let amp = out.amplitude(&OccupationVector::new(vec![n, 1])?).norm();
        checks.push(Check::new(
            format!("null_at_t_{n}_over_{}", n + 1),
            0.0,
            amp,
            tol::EXACT,
        ));
    }

    Ok(ExperimentReport::new(scan, checks, None))
}

/// P4(2,2) over T for the |2,2> input; the amplitude (T-R)^2 - 2TR crosses
/// zero at T = (3 +- sqrt(3)) / 6.
pub fn run_two_pair_null(input: &ResolvedInput) -> Result<ExperimentReport> {
    let in_state = OccupationVector::new(vec![2, 2])?;
    let pattern = OccupationVector::new(vec![2, 2])?;

    let (param_name, values) = input.scan_values(&T_SCAN)?;
    let mut scan = ScanResult::new(
        "two_pair_null",
        param_name,
        vec!["p22_quantum".into(), "p22_closed_form".into()],
    );
    for t in values {
        let amp = splitter_amplitude(&in_state, t, &pattern)?;
        scan.push_row(
            t,
            vec![amp.norm_sqr(), closed_form::two_pair_coincidence(t)],
        );
    }

    let amplitude = |t: f64| {
        splitter_amplitude(&in_state, t, &pattern)
            .map(|a| a.re)
            .unwrap_or(f64::NAN)
    };
    let low_root = bisect_zero(amplitude, 0.05, 0.5, tol::ZERO_LOCATE)?;
    let high_root = bisect_zero(amplitude, 0.5, 0.95, tol::ZERO_LOCATE)?;

    let sqrt3 = 3f64.sqrt();
    let checks = vec![
        Check::new("null_low", (3.0 - sqrt3) / 6.0, low_root, tol::ZERO_LOCATE),
        Check::new(
            "null_high",
            (3.0 + sqrt3) / 6.0,
            high_root,
            tol::ZERO_LOCATE,
        ),
        Check::new(
            "p22_balanced",
            closed_form::two_pair_coincidence(0.5),
            splitter_amplitude(&in_state, 0.5, &pattern)?.norm_sqr(),
            tol::EXACT,
        ),
        Check::new(
            "p22_transparent",
            closed_form::two_pair_coincidence(1.0),
            splitter_amplitude(&in_state, 1.0, &pattern)?.norm_sqr(),
            tol::EXACT,
        ),
    ];
    Ok(ExperimentReport::new(scan, checks, None))
}
