use matern::model::ProcessParams;
use matern::simulate::{fast_audit, FastGenConfig};
use serde_json::json;

use super::{oversampling, path_string, write_json};
use crate::args::AuditArgs;
use crate::csvio::fmt_g17;
use crate::error::{CliError, Result};
use crate::manifest::{manifest_path, RunManifest};

pub fn run(a: &AuditArgs, argv: &[String]) -> Result<()> {
    let p = ProcessParams::new(a.sigma, a.alpha, a.lambda, a.omega)?;
    let cfg = FastGenConfig {
        epsilon: a.epsilon,
        oversampling: oversampling(a.oversample),
        seed: 0,
    };
    let report = fast_audit(&p, a.n, a.dt, &cfg)?;
    println!("max_abs_error {}", fmt_g17(report.max_abs_error));
    println!("max_rel_error {}", fmt_g17(report.max_rel_error));
    println!("oversampling {}", report.oversampling);
    println!("burn_in {}", report.burn_in);
    let passed = report.max_rel_error <= a.tolerance;
    if let Some(out) = &a.out {
        let body = json!({
            "max_abs_error": report.max_abs_error,
            "max_rel_error": report.max_rel_error,
            "oversampling": report.oversampling,
            "burn_in": report.burn_in,
            "tolerance": a.tolerance,
            "passed": passed,
        });
        write_json(out, &body)?;
        let mut m = RunManifest::new(
            "audit",
            argv,
            json!({
                "sigma": a.sigma, "alpha": a.alpha, "lambda": a.lambda, "omega": a.omega,
                "n": a.n, "dt": a.dt, "epsilon": a.epsilon,
                "oversample": a.oversample.to_string(), "tolerance": a.tolerance,
            }),
        );
        m.outputs = vec![path_string(out)];
        m.results = body;
        m.write(&manifest_path(out))?;
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::AuditExceeded {
            got: report.max_rel_error,
            tolerance: a.tolerance,
        })
    }
}
