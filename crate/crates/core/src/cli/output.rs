//! CSV emission. Numbers are written with 17 significant digits in
//! scientific notation, independent of locale.

use std::io::Write;

use crate::dynamics::Trajectory;
use crate::mpemba::CrossingReport;

pub const TRAJECTORY_HEADER: [&str; 9] = [
    "tau",
    "E_state",
    "E_passive",
    "ergotropy",
    "erg_v",
    "erg_theta",
    "wigner_entropy",
    "f_beta_t",
    "r_t",
];

pub const CROSSING_HEADER: [&str; 11] = [
    "r",
    "nbar_pi",
    "nbar",
    "mu",
    "exists",
    "tau_c_closed",
    "tau_c_numeric",
    "difference",
    "erg0_squeezed",
    "erg0_displaced",
    "note",
];

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_else(|| "NaN".to_string())
}

pub fn write_trajectory<W: Write>(w: W, traj: &Trajectory) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRAJECTORY_HEADER)?;
    for r in traj.records() {
        out.write_record(
            [
                r.tau,
                r.energy,
                r.passive_energy,
                r.ergotropy,
                r.erg_v,
                r.erg_theta,
                r.wigner_entropy,
                r.f_beta_t,
                r.r_t,
            ]
            .map(fmt_num),
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_crossings<W: Write>(w: W, rows: &[CrossingReport]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CROSSING_HEADER)?;
    for c in rows {
        out.write_record([
            fmt_num(c.params.r),
            fmt_num(c.params.nbar_pi),
            fmt_num(c.params.nbar),
            fmt_num(c.params.mu),
            c.exists.to_string(),
            fmt_opt(c.tau_c_closed),
            fmt_opt(c.tau_c_numeric),
            fmt_opt(c.difference()),
            fmt_num(c.erg0_squeezed),
            fmt_num(c.erg0_displaced),
            c.note.map(|n| n.as_str()).unwrap_or("").to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
