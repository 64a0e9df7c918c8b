use sumprod_core::{Quantity, Scalar};

/// Six significant digits.
pub fn decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        return format!("{x:.5e}");
    }
    let places = (5 - mag).max(0) as usize;
    let s = format!("{x:.places$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Decimal rendering followed by the exact value, unless they coincide.
pub fn quantity(q: &Quantity) -> String {
    let d = decimal(q.to_f64());
    let exact = match q.as_ratio() {
        Some(r) if r.is_integer() => r.numer().to_string(),
        _ => q.to_string(),
    };
    if d == exact {
        d
    } else {
        format!("{d} ({exact})")
    }
}

pub fn scalar(x: &Scalar) -> String {
    let d = decimal(x.to_f64());
    let exact = x.to_string();
    if d == exact {
        d
    } else {
        format!("{d} ({exact})")
    }
}
