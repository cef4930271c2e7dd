use std::io::{self, Write};

use crate::fading_sim::SweepRecord;

/// Shortest decimal string that parses back to the same `f64`.
/// Rust's float `Display` is locale-free and never uses separators.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub const MONTECARLO_HEADER: &str =
    "strategy,sigma2_hd,p_r,mean_capacity,stderr_capacity,mean_consumed_power,stderr_consumed_power,n_samples,seed";

/// Writes one block of rows per relay-destination variance.
pub fn write_montecarlo_csv<W: Write + ?Sized>(out: &mut W, blocks: &[(f64, Vec<SweepRecord>)]) -> io::Result<()> {
    writeln!(out, "{MONTECARLO_HEADER}")?;
    for (var_hd, records) in blocks {
        for r in records {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.strategy.label(),
                fmt_f64(*var_hd),
                fmt_f64(r.p_r),
                fmt_f64(r.mean_capacity),
                fmt_f64(r.stderr_capacity),
                fmt_f64(r.mean_consumed_power),
                fmt_f64(r.stderr_consumed_power),
                r.n_samples,
                r.seed
            )?;
        }
    }
    Ok(())
}
