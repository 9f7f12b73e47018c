//! Number formatting shared by the CSV writers.

/// `%.{sig}g`-style formatting; non-finite values print as `inf`, `-inf`, `nan`.
///
/// ```
/// use fdde::format::sig;
/// assert_eq!(sig(2.78762, 9), "2.78762");
/// assert_eq!(sig(1.0 / 3.0, 9), "0.333333333");
/// assert_eq!(sig(f64::INFINITY, 9), "inf");
/// assert_eq!(sig(1.5e-7, 9), "1.5e-7");
/// ```
pub fn sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sig = sig.max(1);
    let exp = x.abs().log10().floor() as i32;
    if exp < -5 || exp >= sig as i32 {
        let s = format!("{:.*e}", sig - 1, x);
        let (mant, e) = s.split_once('e').expect("exponent");
        return format!("{}e{}", trim(mant), e);
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    // rounding can carry into a new digit, e.g. 9.9999999996 -> 10.00000000
    let s = if s.trim_start_matches('-').split('.').next().map_or(0, str::len) > (exp + 1).max(1) as usize
        && decimals > 0
    {
        format!("{:.*}", decimals - 1, x)
    } else {
        s
    };
    trim(&s).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn carries_and_signs() {
        assert_eq!(sig(9.9999999996, 9), "10");
        assert_eq!(sig(-0.0418347, 9), "-0.0418347");
        assert_eq!(sig(182.000635123, 9), "182.000635");
        assert_eq!(sig(-1.2e12, 9), "-1.2e12");
    }
}
