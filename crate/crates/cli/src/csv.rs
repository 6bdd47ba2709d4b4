//! CSV emission. The format is part of the artifact contract: fixed header,
//! rows sorted by (scheme token, tau, snr), 6 significant digits, LF line
//! ends, byte-identical across runs with the same config.

use std::io::Write;

use multiway_core::simulate::{SweepRecord, SweepResult};

pub const CSV_HEADER: &str = "scheme,tau,snr_db,trials,sum_rate_mean_bpcu,sum_rate_stderr_bpcu";

/// Plain decimal with 6 significant digits; falls back to scientific
/// notation only for magnitudes far outside the artifact's value ranges.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').expect("{:.5e} always has an exponent");
    let k: i32 = exp.parse().expect("exponent is an integer");
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    debug_assert_eq!(digits.len(), 6);
    let body = if (0..=14).contains(&k) {
        let k = k as usize;
        if k >= 5 {
            format!("{digits}{}", "0".repeat(k - 5))
        } else {
            format!("{}.{}", &digits[..k + 1], &digits[k + 1..])
        }
    } else if (-4..0).contains(&k) {
        format!("0.{}{digits}", "0".repeat((-k) as usize - 1))
    } else {
        return sci;
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

fn row(r: &SweepRecord) -> String {
    format!(
        "{},{},{},{},{},{}",
        r.scheme.token(),
        sig6(r.tau),
        sig6(r.snr_db),
        r.trials,
        sig6(r.mean),
        sig6(r.stderr)
    )
}

pub fn render_csv(res: &SweepResult) -> String {
    let mut records: Vec<&SweepRecord> = res.records.iter().collect();
    records.sort_by(|a, b| {
        (a.scheme.token(), a.tau, a.snr_db)
            .partial_cmp(&(b.scheme.token(), b.tau, b.snr_db))
            .expect("validated sweeps have no NaN keys")
    });
    let mut out = String::with_capacity((records.len() + 1) * 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&row(r));
        out.push('\n');
    }
    out
}

pub fn write_csv<W: Write>(res: &SweepResult, mut sink: W) -> std::io::Result<()> {
    sink.write_all(render_csv(res).as_bytes())
}
