//! Symbol literals: `{"coeffs": {"-1": [re, im], "0": [re, im]}}`, or the bare
//! inner map.

use anyhow::{anyhow, bail, Context, Result};
use fredholm_core::{Complex64, LaurentSymbol};
use serde_json::Value;

pub fn parse_symbol(text: &str) -> Result<LaurentSymbol> {
    let value: Value = serde_json::from_str(text).context("symbol literal is not valid JSON")?;
    let map = match &value {
        Value::Object(obj) => match obj.get("coeffs") {
            Some(Value::Object(inner)) if obj.len() == 1 => inner,
            Some(_) => bail!("\"coeffs\" must be the only key and hold an object"),
            None => obj,
        },
        _ => bail!("symbol literal must be a JSON object"),
    };
    let mut terms = Vec::with_capacity(map.len());
    for (key, v) in map {
        let exponent: i32 = key
            .trim()
            .parse()
            .map_err(|_| anyhow!("exponent {key:?} is not an integer"))?;
        terms.push((exponent, pair(v).with_context(|| format!("coefficient of z^{exponent}"))?));
    }
    Ok(LaurentSymbol::from_terms(terms)?)
}

fn pair(v: &Value) -> Result<Complex64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => {
            let re = re.as_f64().ok_or_else(|| anyhow!("real part is not a number"))?;
            let im = im.as_f64().ok_or_else(|| anyhow!("imaginary part is not a number"))?;
            Ok(Complex64::new(re, im))
        }
        _ => bail!("expected [re, im]"),
    }
}

/// `"re,im"` or a bare real.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| anyhow!("{text:?} is not a number or re,im pair"));
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(text)?, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_spellings() {
        let a = parse_symbol(r#"{"coeffs": {"-1": [1, 0], "0": [0.5, -2]}}"#).unwrap();
        let b = parse_symbol(r#"{"-1": [1, 0], "0": [0.5, -2]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coeff(0), Complex64::new(0.5, -2.0));
        assert_eq!(a.support(), Some((-1, 0)));
    }

    #[test]
    fn empty_is_zero() {
        assert!(parse_symbol("{}").unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_literals() {
        for bad in ["[]", r#"{"x": [1, 0]}"#, r#"{"1": [1]}"#, r#"{"1": "a"}"#, r#"{"coeffs": 3}"#, "{"] {
            assert!(parse_symbol(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_pairs() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), Complex64::new(1.5, -2.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert!(parse_complex("a").is_err());
    }
}
