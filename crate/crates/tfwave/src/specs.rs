//! Text forms of exponents, norm specs and symbols used on the command line.
//!
//! * exponents: a number `≥ 1`, or `inf` / `infinity` / `∞`;
//! * modulation norms: `mod:P,Q,S` or `mod:p=P,q=Q,s=S`;
//! * amalgam norms `W(FL^q_s, L^p_γ)`: `am:Q,S,P,G` or `am:q=Q,s=S,p=P,gamma=G`;
//! * symbols: `sinpow:ALPHA:DELTA`, `cos`, `wavecos:T`, `wavesinc:T`,
//!   `one`, `const:C`.

use tfwave_core::grid::Exponent;
use tfwave_core::multipliers::{CustomSymbol, Symbol};
use tfwave_core::tfnorms::{AmalgamSpec, ModulationSpec, NormSpec};

use crate::error::{HarnessError, HarnessResult};

fn bad(what: &str, text: &str) -> HarnessError {
    HarnessError::Config(format!("cannot parse {what} {text:?}"))
}

pub fn parse_exponent_value(text: &str) -> HarnessResult<f64> {
    match text.trim() {
        "inf" | "infinity" | "∞" | "Inf" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|_| bad("exponent", text)),
    }
}

pub fn parse_exponent(text: &str) -> HarnessResult<Exponent> {
    Ok(Exponent::new(parse_exponent_value(text)?)?)
}

pub fn format_exponent(p: Exponent) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format_number(p.value())
    }
}

pub fn format_number(x: f64) -> String {
    format!("{x}")
}

/// Splits `a,b,c` or `k=a,k=b,k=c` into values ordered as `keys`.
fn fields(body: &str, keys: &[&[&str]], text: &str) -> HarnessResult<Vec<String>> {
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != keys.len() {
        return Err(bad("norm spec", text));
    }
    if parts.iter().all(|p| !p.contains('=')) {
        return Ok(parts.into_iter().map(String::from).collect());
    }
    let mut out = vec![None; keys.len()];
    for part in parts {
        let (k, v) = part.split_once('=').ok_or_else(|| bad("norm spec", text))?;
        let slot = keys
            .iter()
            .position(|names| names.contains(&k.trim()))
            .ok_or_else(|| bad("norm spec", text))?;
        if out[slot].replace(v.trim().to_string()).is_some() {
            return Err(bad("norm spec", text));
        }
    }
    out.into_iter().map(|v| v.ok_or_else(|| bad("norm spec", text))).collect()
}

fn number(text: &str, whole: &str) -> HarnessResult<f64> {
    text.parse::<f64>().map_err(|_| bad("number in", whole))
}

pub fn parse_norm_spec(text: &str) -> HarnessResult<NormSpec> {
    let (kind, body) = text.split_once(':').ok_or_else(|| bad("norm spec", text))?;
    match kind.trim() {
        "mod" | "m" => {
            let v = fields(body, &[&["p"], &["q"], &["s"]], text)?;
            Ok(NormSpec::Modulation(ModulationSpec::new(
                parse_exponent_value(&v[0])?,
                parse_exponent_value(&v[1])?,
                number(&v[2], text)?,
            )?))
        }
        "am" | "w" => {
            let v = fields(body, &[&["q"], &["s"], &["p"], &["gamma", "g", "γ"]], text)?;
            Ok(NormSpec::Amalgam(AmalgamSpec::new(
                parse_exponent_value(&v[0])?,
                number(&v[1], text)?,
                parse_exponent_value(&v[2])?,
                number(&v[3], text)?,
            )?))
        }
        _ => Err(bad("norm spec", text)),
    }
}

pub fn format_norm_spec(spec: &NormSpec) -> String {
    match spec {
        NormSpec::Modulation(m) => format!(
            "mod:p={},q={},s={}",
            format_exponent(m.p),
            format_exponent(m.q),
            format_number(m.s)
        ),
        NormSpec::Amalgam(a) => format!(
            "am:q={},s={},p={},gamma={}",
            format_exponent(a.q),
            format_number(a.s),
            format_exponent(a.p),
            format_number(a.gamma)
        ),
    }
}

pub fn parse_symbol(text: &str) -> HarnessResult<Symbol> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    let num = |s: &str| number(s, text);
    let sym = match parts.as_slice() {
        ["sinpow", a, d] => Symbol::sin_pow(num(a)?, num(d)?)?,
        ["cos"] => Symbol::Cos,
        ["wavecos", t] => Symbol::WaveCos { t: num(t)? },
        ["wavesinc", t] => Symbol::WaveSinc { t: num(t)? },
        ["one"] => Symbol::constant(1.0),
        ["const", c] => Symbol::constant(num(c)?),
        _ => return Err(bad("symbol", text)),
    };
    Ok(sym)
}

/// Inverse of [`parse_symbol`] for the symbols it produces.
pub fn format_symbol(sym: &Symbol) -> String {
    match sym {
        Symbol::SinPow { alpha, delta } => format!("sinpow:{}:{}", format_number(*alpha), format_number(*delta)),
        Symbol::Cos => "cos".into(),
        Symbol::WaveCos { t } => format!("wavecos:{}", format_number(*t)),
        Symbol::WaveSinc { t } => format!("wavesinc:{}", format_number(*t)),
        Symbol::Custom(CustomSymbol::Constant(c)) => format!("const:{}", format_number(c.re)),
        Symbol::Custom(_) => "custom".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_spec_forms_agree() {
        let a = parse_norm_spec("mod:2,1,0").unwrap();
        let b = parse_norm_spec("mod:p=2,q=1,s=0").unwrap();
        let c = parse_norm_spec("mod:s=0, q=1, p=2").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let w = parse_norm_spec("am:q=1,s=0,p=2,gamma=0.5").unwrap();
        assert_eq!(w, parse_norm_spec("am:1,0,2,0.5").unwrap());
        assert_eq!(parse_norm_spec(&format_norm_spec(&w)).unwrap(), w);
        let inf = parse_norm_spec("mod:inf,1,1").unwrap();
        assert_eq!(format_norm_spec(&inf), "mod:p=inf,q=1,s=1");
    }

    #[test]
    fn norm_spec_errors() {
        for bad in ["mod:2,1", "mod:p=2,p=1,s=0", "xyz:1,1,1", "mod:2,1,abc", "am:1,0,2"] {
            assert!(matches!(parse_norm_spec(bad), Err(HarnessError::Config(_))), "{bad}");
        }
        let e = parse_norm_spec("mod:0.5,1,0").unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn symbols() {
        for text in ["sinpow:1:1", "cos", "wavecos:0.5", "wavesinc:0.25", "const:2"] {
            assert_eq!(format_symbol(&parse_symbol(text).unwrap()), text);
        }
        assert_eq!(parse_symbol("one").unwrap(), Symbol::constant(1.0));
        assert!(parse_symbol("sinpow:0.5:1").is_err());
        assert!(parse_symbol("tan").is_err());
    }
}
