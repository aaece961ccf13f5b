use cvd_core::cost::{int, parse_rational};
use cvd_core::CostFn;

/// Reads lines `"v value"` where value is an integer or `p/q`. Vertices not
/// listed cost 1.
pub fn parse_costs(text: &str, n: usize) -> Result<CostFn, String> {
    let mut values = vec![int(1); n];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| format!("costs line {}: {msg}", i + 1);
        let mut parts = line.split_whitespace();
        let (Some(v), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(at(format!("expected \"vertex cost\", got {line:?}")));
        };
        let v: usize = v.parse().map_err(|_| at(format!("bad vertex {v:?}")))?;
        if v >= n {
            return Err(at(format!("vertex {v} out of range (n = {n})")));
        }
        let value = parse_rational(value).ok_or_else(|| at(format!("bad cost {value:?}")))?;
        if value < int(0) {
            return Err(at(format!("negative cost {value} for vertex {v}")));
        }
        values[v] = value;
    }
    CostFn::new(values).map_err(|e| e.to_string())
}
