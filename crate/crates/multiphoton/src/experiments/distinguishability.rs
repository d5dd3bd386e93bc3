//! Dip visibility as a measure of multi-photon temporal distinguishability.

use crate::error::{Error, Result};
use crate::experiments::{closed_form, ExperimentReport, ResolvedInput, ScanDefaults};
use crate::fock::OccupationVector;
use crate::optics::{HalfWavePlate, NetworkElement, PostselectPattern};
use crate::scan::{tol, Check, ScanResult};
use crate::temporal::{
    coincidence_with_distinguishability, noon_projection_coincidence, DistinguishabilityScenario,
    GaussianPacket, PacketSet,
};

const DELAY_SCAN: ScanDefaults = ScanDefaults {
    parameter: "delay",
    start: -5.0,
    stop: 5.0,
    steps: 81,
};

enum Scheme {
    NoonProjection,
    AsymmetricBs,
}

impl Scheme {
    fn parse(name: &str) -> Result<Self> {
        match name {
            "noon_projection" => Ok(Scheme::NoonProjection),
            "asymmetric_bs" => Ok(Scheme::AsymmetricBs),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }
}

/// Geometry: one H photon delayed by `h_delay`, `overlapping` V photons at
/// zero delay, and the remaining V photons parked far outside the scan
/// window at mutually orthogonal delays.
fn packet_geometry(
    photons: u32,
    overlapping: u32,
    sigma: f64,
    h_delay: f64,
) -> Result<(PacketSet<f64>, Vec<usize>)> {
    let reference = GaussianPacket::new(0.0, sigma, 0.0)?;
    let mut packets = vec![reference.at_delay(h_delay)];
    let mut spatial = vec![0usize];
    for _ in 0..overlapping {
        packets.push(reference);
        spatial.push(1);
    }
    for j in 0..(photons - overlapping) {
        packets.push(reference.at_delay(40.0 * (j as f64 + 1.0) / sigma));
        spatial.push(1);
    }
    Ok((PacketSet::from_packets(packets)?, spatial))
}

fn coincidence(
    scheme: &Scheme,
    ps: &PacketSet<f64>,
    spatial: &[usize],
    photons: u32,
) -> Result<f64> {
    match scheme {
        Scheme::NoonProjection => noon_projection_coincidence(ps, spatial),
        Scheme::AsymmetricBs => {
            // wave plate rotated so that sin^2(2 theta) = 1/(N+1)
            let angle = 0.5 * (1.0 / (photons as f64 + 1.0)).sqrt().asin();
            let splitter = HalfWavePlate::new(angle).splitter((0, 1))?;
            let network = [NetworkElement::Splitter(splitter)];
            let pattern = PostselectPattern::bucket(&OccupationVector::new(vec![1, photons])?);
            coincidence_with_distinguishability(ps, spatial, 2, &network, &pattern)
        }
    }
}

/// Coincidence dip of |1_H, N_V> vs the H-photon delay. With m of the N
/// V photons indistinguishable from the H photon the dip visibility against
/// the fully-distinguishable baseline is exactly m/N, for both the
/// projection-fan scheme and the asymmetric-splitter scheme.
pub fn run_visibility_vs_distinguishability(input: &ResolvedInput) -> Result<ExperimentReport> {
    let scheme_name = input.text("scheme").to_string();
    let scheme = Scheme::parse(&scheme_name)?;
    let photons = input.count("photons")? as u32;
    let overlapping = input.count("overlapping")? as u32;
    let sigma = input.number("bandwidth");
    if photons == 0 || photons > 4 {
        return Err(Error::ShellOverflow {
            photons: photons as usize + 1,
            limit: 5,
        });
    }
    if overlapping > photons {
        return Err(Error::InvalidParameter(format!(
            "overlapping photons {overlapping} exceed the V-photon number {photons}"
        )));
    }

    // exact fully-distinguishable baseline: every photon its own block
    let baseline_spatial: Vec<usize> = std::iter::once(0usize)
        .chain(std::iter::repeat_n(1usize, photons as usize))
        .collect();
    let baseline_set =
        DistinguishabilityScenario::fully_distinguishable(photons as usize + 1).packet_set::<f64>();
    let baseline = coincidence(&scheme, &baseline_set, &baseline_spatial, photons)?;

    let (param_name, delays) = input.scan_values(&DELAY_SCAN)?;
    let mut scan = ScanResult::new(
        "visibility_vs_distinguishability",
        param_name,
        vec!["coincidence".into(), "baseline".into()],
    );
    let mut minimum = f64::INFINITY;
    for &delay in &delays {
        let (ps, spatial) = packet_geometry(photons, overlapping, sigma, delay / sigma)?;
        let rate = coincidence(&scheme, &ps, &spatial, photons)?;
        minimum = minimum.min(rate);
        scan.push_row(delay, vec![rate, baseline]);
    }
    scan.insert_metadata("scheme", &scheme_name);
    scan.insert_metadata("photons", photons);
    scan.insert_metadata("overlapping", overlapping);

    let visibility = (baseline - minimum) / baseline;
    let classical = match scheme {
        Scheme::NoonProjection => closed_form::fan_classical_coincidence(photons + 1),
        Scheme::AsymmetricBs => closed_form::asymmetric_classical_coincidence(
            photons,
            photons as f64 / (photons as f64 + 1.0),
        ),
    };

    let checks = vec![
        Check::new(
            "dip_visibility",
            closed_form::visibility_law(overlapping, photons),
            visibility,
            tol::VISIBILITY,
        ),
        Check::new(
            "baseline_equals_classical",
            classical,
            baseline,
            tol::CLASSICAL_MATCH,
        ),
    ];
    Ok(ExperimentReport::new(scan, checks, None))
}
