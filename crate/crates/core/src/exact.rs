//! Exact rationals and their text form.

use num_rational::Rational64;

pub type Q = Rational64;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn fmt_q(v: &Q) -> String {
    if *v.denom() == 1 {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: i64 = a.trim().parse().ok()?;
            let den: i64 = b.trim().parse().ok()?;
            (den != 0).then(|| Q::new(num, den))
        }
        None => s.parse().ok().map(Q::from_integer),
    }
}

pub fn to_f64(v: &Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for v in [q(1, 3), q(-7, 4), q(6, 3), q(0, 5)] {
            assert_eq!(parse_q(&fmt_q(&v)), Some(v));
        }
        assert_eq!(fmt_q(&q(4, 2)), "2");
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q(" 2 / 3 "), Some(q(2, 3)));
    }
}
