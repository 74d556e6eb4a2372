//! Number formatting and output sinks.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use qgame_core::SurfaceRow;
use serde::Serialize;

use crate::CliError;

pub const CSV_HEADER: [&str; 9] =
    ["gamma1", "gamma2", "kind", "a0_star", "payoff_a", "payoff_b", "h_plus", "h_minus", "delta"];

/// `x` with 9 significant digits, plain notation for moderate exponents and
/// scientific otherwise, trailing zeros removed.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn surface_csv(rows: &[SurfaceRow]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(CliError::internal)?;
    for r in rows {
        let nums = [r.a0_star, r.payoff_a, r.payoff_b, r.h_plus, r.h_minus, r.delta].map(sig9);
        let mut record = vec![sig9(r.gamma1), sig9(r.gamma2), r.kind.label().to_string()];
        record.extend(nums);
        w.write_record(&record).map_err(CliError::internal)?;
    }
    w.into_inner().map_err(|e| CliError::internal(e.into_error()))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(CliError::internal)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    let result = match path {
        Some(p) => File::create(p).and_then(|mut f| f.write_all(bytes).and_then(|_| f.flush())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush())
        }
    };
    result.map_err(|e| CliError::Write(match path {
        Some(p) => format!("{}: {e}", p.display()),
        None => format!("stdout: {e}"),
    }))
}
