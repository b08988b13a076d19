use matern::lagrangian::{dispersion_curve, empirical_diffusivity, unwrap_periodic, TrajectoryEnsemble};
use matern::ComplexSeries;
use serde_json::json;

use super::{parse_numbers, path_string};
use crate::args::{DispersionArgs, SeriesKind};
use crate::csvio::{read_series, write_table};
use crate::error::{CliError, Result};
use crate::manifest::{manifest_path, RunManifest};

pub fn run(a: &DispersionArgs, argv: &[String]) -> Result<()> {
    let window = a
        .window
        .as_deref()
        .map(|w| parse_numbers("window", w, 2, 2).map(|v| (v[0], v[1])))
        .transpose()?;
    if let Some((t0, t1)) = window {
        if !(t0 < t1) {
            return Err(CliError::Usage(format!("--window: need t0 < t1, got {t0},{t1}")));
        }
    }
    let widths = a
        .domain_width
        .as_deref()
        .map(|w| parse_numbers("domain-width", w, 1, 2).map(|v| (v[0], *v.last().expect("nonempty"))))
        .transpose()?;
    let ens = read_series(&a.input)?;
    ens.common_shape()?;
    let trajectories = match a.kind {
        SeriesKind::Velocity => {
            if widths.is_some() {
                return Err(CliError::Usage("--domain-width applies to --kind position".into()));
            }
            TrajectoryEnsemble::from_velocities(&ens.series)?
        }
        SeriesKind::Position => {
            let members = match widths {
                Some((wx, wy)) => ens
                    .series
                    .iter()
                    .map(|r| unwrap_periodic(r, wx, wy))
                    .collect::<matern::Result<Vec<ComplexSeries>>>()?,
                None => ens.series.clone(),
            };
            TrajectoryEnsemble::new(members)?
        }
    };
    let curve = dispersion_curve(&trajectories, a.stride)?;
    write_table(
        &a.out,
        &["t", "r_tilde"],
        curve.iter().map(|&(t, r)| (None, vec![t, r])),
    )?;
    let kappa = window.map(|w| empirical_diffusivity(&trajectories, w)).transpose()?;
    if let Some(k) = kappa {
        println!("kappa {}", crate::csvio::fmt_g17(k));
    }

    let mut m = RunManifest::new(
        "dispersion",
        argv,
        json!({
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "stride": a.stride,
            "window": window.map(|(t0, t1)| [t0, t1]),
            "domain_width": widths.map(|(wx, wy)| [wx, wy]),
        }),
    );
    m.inputs = vec![path_string(&a.input)];
    m.outputs = vec![path_string(&a.out)];
    m.results = json!({ "trajectories": trajectories.len(), "points": curve.len(), "kappa": kappa });
    m.write(&manifest_path(&a.out))
}
