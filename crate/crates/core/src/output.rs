//! Text form of query results: one `r s dist` line per pair, external ids.

use std::io::{self, Write};

use crate::graph::RoadNetwork;
use crate::query::MatchPair;

/// Formats like C's `%.9g`: nine significant digits, trailing zeros
/// dropped, scientific notation outside `1e-4 ..= 1e9`.
///
/// ```
/// use roadjoin::format_distance;
/// assert_eq!(format_distance(3.0), "3");
/// assert_eq!(format_distance(0.1 + 0.2), "0.3");
/// assert_eq!(format_distance(1234567890.0), "1.23456789e+09");
/// assert_eq!(format_distance(0.00001), "1e-05");
/// ```
pub fn format_distance(d: f64) -> String {
    if d.is_nan() {
        return "nan".into();
    }
    if d.is_infinite() {
        return if d > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if d == 0.0 {
        return if d.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{d:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let prec = (8 - exp) as usize;
        strip_zeros(&format!("{d:.prec$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_pairs<W: Write>(mut out: W, net: &RoadNetwork, pairs: &[MatchPair]) -> io::Result<()> {
    for p in pairs {
        writeln!(
            out,
            "{} {} {}",
            net.external_id(p.r),
            net.external_id(p.s),
            format_distance(p.dist)
        )?;
    }
    Ok(())
}

pub fn format_pairs(net: &RoadNetwork, pairs: &[MatchPair]) -> String {
    let mut buf = Vec::new();
    write_pairs(&mut buf, net, pairs).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
