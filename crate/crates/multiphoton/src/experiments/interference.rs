//! Correlation, dip, and bunching experiments.

use crate::error::Result;
use crate::experiments::{closed_form, ExperimentReport, ResolvedInput, ScanDefaults};
use crate::fock::{FockVector, OccupationVector};
use crate::optics::{
    classical_outcome_probability, BeamSplitter, NetworkElement, PostselectPattern,
};
use crate::scan::{tol, Check, ScanResult};
use crate::temporal::{coincidence_with_distinguishability, GaussianPacket, PacketSet};

const SCAN_DEFAULT: ScanDefaults = ScanDefaults {
    parameter: "separation",
    start: -1.5,
    stop: 1.5,
    steps: 121,
};

/// Intensity correlation of two independent phase-diffusing sources,
/// computed by summing the four two-photon path cases: the two same-source
/// cases contribute flat rates, the two cross-source cases interfere.
pub fn run_pfleegor_mandel(input: &ResolvedInput) -> Result<ExperimentReport> {
    let fringe = input.number("fringe_spacing");
    if fringe <= 0.0 {
        return Err(crate::error::Error::InvalidParameter(
            "fringe_spacing must be positive".into(),
        ));
    }

    let four_case_rate = |separation: f64| -> f64 {
        let base = 1.0f64; // equal per-case probability
        let same_source = base + base;
        let cross = 2.0 * base * (1.0 + (2.0 * std::f64::consts::PI * separation / fringe).cos());
        same_source + cross
    };
    let mean_rate = 4.0;

    let (param_name, values) = input.scan_values(&SCAN_DEFAULT)?;
    let mut scan = ScanResult::new(
        "pfleegor_mandel",
        param_name,
        vec!["coincidence_rate".into(), "lambda12".into()],
    );
    for dx in values {
        let rate = four_case_rate(dx);
        scan.push_row(dx, vec![rate, rate / mean_rate - 1.0]);
    }
    scan.insert_metadata("fringe_spacing", fringe);

    let lambda = |dx: f64| four_case_rate(dx) / mean_rate - 1.0;
    let checks = vec![
        Check::new(
            "correlation_at_full_spacing",
            closed_form::pfleegor_mandel_correlation(fringe, fringe),
            lambda(fringe),
            tol::EXACT,
        ),
        Check::new(
            "correlation_at_half_spacing",
            closed_form::pfleegor_mandel_correlation(fringe / 2.0, fringe),
            lambda(fringe / 2.0),
            tol::EXACT,
        ),
        Check::new(
            "correlation_at_quarter_spacing",
            closed_form::pfleegor_mandel_correlation(fringe / 4.0, fringe),
            lambda(fringe / 4.0),
            tol::EXACT,
        ),
    ];
    Ok(ExperimentReport::new(scan, checks, None))
}

const HOM_SCAN: ScanDefaults = ScanDefaults {
    parameter: "delay",
    start: -5.0,
    stop: 5.0,
    steps: 81,
};

fn hom_coincidence_at(t: f64, sigma: f64, delay: f64) -> Result<f64> {
    let reference = GaussianPacket::new(0.0, sigma, 0.0)?;
    let delayed = reference.at_delay(delay);
    let ps = PacketSet::from_packets(vec![reference, delayed])?;
    let network = [NetworkElement::Splitter(BeamSplitter::new(t, (0, 1))?)];
    let pattern = PostselectPattern::bucket(&OccupationVector::new(vec![1, 1])?);
    coincidence_with_distinguishability(&ps, &[0, 1], 2, &network, &pattern)
}

/// The two-photon coincidence dip: baseline T^2 + R^2 for well-separated
/// packets, minimum (T - R)^2 at zero delay.
pub fn run_hom_dip(input: &ResolvedInput) -> Result<ExperimentReport> {
    let t = input.number("transmissivity");
    let sigma = input.number("bandwidth");

    let (param_name, values) = input.scan_values(&HOM_SCAN)?;
    let mut scan = ScanResult::new(
        "hom_dip",
        param_name,
        vec!["coincidence".into(), "closed_form".into()],
    );
    let mut worst_model_gap = 0.0f64;
    let mut trace = Vec::new();
    for delay in values {
        let engine = hom_coincidence_at(t, sigma, delay)?;
        let overlap = (-sigma * sigma * delay * delay / 2.0).exp();
        let model = closed_form::hom_coincidence(t, overlap * overlap);
        worst_model_gap = worst_model_gap.max((engine - model).abs());
        scan.push_row(delay, vec![engine, model]);
        trace.push((delay, engine));
    }
    scan.insert_metadata("transmissivity", t);
    scan.insert_metadata("bandwidth", sigma);

    // the dip magnitude shrinks monotonically as |delay| grows
    let mut worst_nonmonotone = 0.0f64;
    for pair in trace.windows(2) {
        let (d0, p0) = pair[0];
        let (d1, p1) = pair[1];
        if d0 >= 0.0 {
            worst_nonmonotone = worst_nonmonotone.max(p0 - p1);
        }
        if d1 <= 0.0 {
            worst_nonmonotone = worst_nonmonotone.max(p1 - p0);
        }
    }

    let checks = vec![
        Check::new(
            "dip_monotone_in_abs_delay",
            0.0,
            worst_nonmonotone,
            tol::EXACT,
        ),
        Check::new(
            "dip_minimum",
            closed_form::hom_coincidence(t, 1.0),
            hom_coincidence_at(t, sigma, 0.0)?,
            tol::EXACT,
        ),
        Check::new(
            "baseline_at_sigma_tau_10",
            closed_form::classical_coincidence(t),
            hom_coincidence_at(t, sigma, 10.0 / sigma)?,
            tol::CLASSICAL_MATCH,
        ),
        Check::new("dip_shape_matches_model", 0.0, worst_model_gap, tol::EXACT),
    ];
    Ok(ExperimentReport::new(scan, checks, None))
}

const BUNCHING_SCAN: ScanDefaults = ScanDefaults {
    parameter: "pair_delay",
    start: 0.0,
    stop: 5.0,
    steps: 51,
};

fn pair_bunching_probability(sigma: f64, delay: f64) -> Result<f64> {
    let early = GaussianPacket::new(0.0, sigma, 0.0)?;
    let late = early.at_delay(delay);
    // one photon of each pair per input port
    let ps = PacketSet::from_packets(vec![early, early, late, late])?;
    let network = [NetworkElement::Splitter(BeamSplitter::balanced((0, 1))?)];
    let pattern = PostselectPattern::bucket(&OccupationVector::new(vec![4, 0])?);
    coincidence_with_distinguishability(&ps, &[0, 1, 0, 1], 2, &network, &pattern)
}

/// Two-photon and pair bunching: the all-photons-one-port rate over the
/// classical rate is 2 for one photon pair, and for two pairs it slides from
/// 6 (coincident pairs) to 4 (separated pairs) as the pair delay grows.
pub fn run_bunching(input: &ResolvedInput) -> Result<ExperimentReport> {
    let sigma = input.number("bandwidth");
    let splitter = BeamSplitter::balanced((0, 1))?;

    let classical_p40 = classical_outcome_probability(
        &OccupationVector::new(vec![2, 2])?,
        &splitter,
        &OccupationVector::new(vec![4, 0])?,
    )?;

    let (param_name, values) = input.scan_values(&BUNCHING_SCAN)?;
    let mut scan = ScanResult::new(
        "bunching",
        param_name,
        vec![
            "quantum_p40".into(),
            "ratio".into(),
            "closed_form_ratio".into(),
        ],
    );
    let mut ratios = Vec::new();
    for delay in values {
        let p40 = pair_bunching_probability(sigma, delay)?;
        let ratio = p40 / classical_p40;
        let overlap = (-sigma * sigma * delay * delay / 2.0).exp();
        scan.push_row(
            delay,
            vec![p40, ratio, closed_form::bunching_ratio(overlap)],
        );
        ratios.push((delay, ratio));
    }
    scan.insert_metadata("bandwidth", sigma);

    // two-photon bunching: quantum 2TR vs classical TR
    let hom_out = splitter.apply(&FockVector::<f64>::basis(OccupationVector::new(vec![
        1, 1,
    ])?))?;
    let quantum_20 = hom_out.outcome_probability(&OccupationVector::new(vec![2, 0])?)?;
    let classical_20 = classical_outcome_probability(
        &OccupationVector::new(vec![1, 1])?,
        &splitter,
        &OccupationVector::new(vec![2, 0])?,
    )?;

    // monotone interpolation: the ratio must never increase with delay
    let mut worst_rise = 0.0f64;
    for pair in ratios.windows(2) {
        if pair[1].0 > pair[0].0 {
            worst_rise = worst_rise.max(pair[1].1 - pair[0].1);
        }
    }

    let checks = vec![
        Check::new(
            "two_photon_ratio",
            2.0,
            quantum_20 / classical_20,
            tol::EXACT,
        ),
        Check::new(
            "pair_ratio_zero_delay",
            closed_form::bunching_ratio(1.0),
            pair_bunching_probability(sigma, 0.0)? / classical_p40,
            tol::EXACT,
        ),
        Check::new(
            "pair_ratio_separated",
            closed_form::bunching_ratio(0.0),
            pair_bunching_probability(sigma, 25.0 / sigma)? / classical_p40,
            tol::CLASSICAL_MATCH,
        ),
        Check::new("ratio_monotone_decreasing", 0.0, worst_rise, tol::EXACT),
    ];
    Ok(ExperimentReport::new(scan, checks, None))
}

/// The (N+1)-fold enhancement of detecting all N+1 photons in one port when
/// |N, 1> meets a balanced splitter, swept over N.
pub fn run_stimulated_emission(input: &ResolvedInput) -> Result<ExperimentReport> {
    let n_max = input.count("n_max")?;
    if n_max == 0 || n_max > 5 {
        return Err(crate::error::Error::ShellOverflow {
            photons: n_max,
            limit: 5,
        });
    }

    let splitter = BeamSplitter::balanced((0, 1))?;
    let mut scan = ScanResult::new(
        "stimulated_emission",
        "photon_number",
        vec!["quantum".into(), "classical".into(), "enhancement".into()],
    );
    let mut checks = Vec::new();
    for n in 1..=n_max {
        let inputs = OccupationVector::new(vec![n as u32, 1])?;
        let all_in_one = OccupationVector::new(vec![n as u32 + 1, 0])?;
        let out = splitter.apply(&FockVector::<f64>::basis(inputs.clone()))?;
        let quantum = out.outcome_probability(&all_in_one)?;
        let classical = classical_outcome_probability(&inputs, &splitter, &all_in_one)?;
        scan.push_row(n as f64, vec![quantum, classical, quantum / classical]);

        checks.push(Check::new(
            format!("quantum_n{n}"),
            closed_form::stimulated_quantum(n as u32),
            quantum,
            tol::EXACT,
        ));
        checks.push(Check::new(
            format!("classical_n{n}"),
            closed_form::stimulated_classical(n as u32),
            classical,
            tol::EXACT,
        ));
        checks.push(Check::new(
            format!("enhancement_n{n}"),
            (n + 1) as f64,
            quantum / classical,
            tol::EXACT,
        ));
    }
    Ok(ExperimentReport::new(scan, checks, None))
}
