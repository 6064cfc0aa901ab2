//! CSV and JSON renderings of a run.

use std::fmt::Write;

use dampjc_core::DiagnosticsRow;
use serde_json::json;

use crate::config::RawConfig;
use crate::run::RunOutput;

pub const CSV_HEADER: &str =
    "time,trace_re,trace_im,herm_defect,purity,pop_excited,pop_ground,mean_photons,leakage,fidelity,err_norm";

/// Shortest round-trip digits; exponent form outside `[1e-4, 1e15)`.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn csv_row(r: &DiagnosticsRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        num(r.time),
        num(r.trace_re),
        num(r.trace_im),
        num(r.herm_defect),
        num(r.purity),
        num(r.pop_excited),
        num(r.pop_ground),
        num(r.mean_photons),
        num(r.leakage),
        opt(r.fidelity),
        opt(r.err_norm)
    )
}

/// Rows under the fixed header. An error study follows as `#` comment lines:
/// one summary line, then one `t,error` pair per line.
pub fn to_csv(out: &RunOutput) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &out.rows {
        s.push_str(&csv_row(r));
        s.push('\n');
    }
    if let Some(fit) = &out.error_fit {
        let regime = serde_json::to_value(fit.regime).expect("serializable");
        let _ = writeln!(
            s,
            "# error_fit slope={} intercept={} r_squared={} regime={}",
            num(fit.slope),
            num(fit.intercept),
            num(fit.r_squared),
            regime.as_str().unwrap_or_default()
        );
        for (t, e) in fit.t_values.iter().zip(&fit.errors) {
            let _ = writeln!(s, "# {},{}", num(*t), num(*e));
        }
    }
    s
}

pub fn to_json(out: &RunOutput, raw: &RawConfig) -> String {
    let mut doc = json!({ "rows": out.rows, "config_echo": raw });
    if let Some(fit) = &out.error_fit {
        doc["error_fit"] = json!(fit);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
