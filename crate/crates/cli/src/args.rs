//! Parsers for the small text formats accepted on the command line.

use lna_core::noise::{db_to_factor, NoiseParameters};
use lna_core::{parse_gamma, CascadeStage, Complex};

fn key_values(s: &str) -> Result<Vec<(String, String)>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| format!("expected key=value, got {p:?}"))
        })
        .collect()
}

fn number(key: &str, v: &str) -> Result<f64, String> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("{key}: invalid number {v:?}"))
}

/// `nf_db=X,gain_db=Y`.
pub fn parse_stage(s: &str) -> Result<CascadeStage, String> {
    let mut nf_db = None;
    let mut gain_db = None;
    for (k, v) in key_values(s)? {
        let slot = match k.as_str() {
            "nf_db" => &mut nf_db,
            "gain_db" => &mut gain_db,
            other => return Err(format!("unknown stage key {other:?} in {s:?}")),
        };
        if slot.replace(number(&k, &v)?).is_some() {
            return Err(format!("duplicate key {k:?} in {s:?}"));
        }
    }
    let nf_db = nf_db.ok_or_else(|| format!("stage {s:?} is missing nf_db"))?;
    let gain_db = gain_db.ok_or_else(|| format!("stage {s:?} is missing gain_db"))?;
    CascadeStage::from_db(nf_db, gain_db).map_err(|e| format!("stage {s:?}: {e}"))
}

/// `fmin_db=<dB>, rn=<normalized> | Rn=<ohms>[ohm], gopt=<MAG<ANGLE>`.
/// `fmin=<linear>` is accepted in place of `fmin_db`.
pub fn parse_noise(s: &str, z0: f64) -> Result<NoiseParameters, String> {
    let mut f_min = None;
    let mut r_n = None;
    let mut gamma_opt: Option<Complex> = None;
    for (k, v) in key_values(s)? {
        match k.as_str() {
            "fmin_db" => f_min = Some(db_to_factor(number(&k, &v)?)),
            "fmin" => f_min = Some(number(&k, &v)?),
            "rn" => r_n = Some(number(&k, &v)?),
            "Rn" => {
                let lower = v.to_ascii_lowercase();
                let ohms = lower
                    .strip_suffix("ohms")
                    .or_else(|| lower.strip_suffix("ohm"))
                    .or_else(|| lower.strip_suffix('Ω'))
                    .unwrap_or(&lower)
                    .trim();
                r_n = Some(number(&k, ohms)? / z0);
            }
            "gopt" => gamma_opt = Some(parse_gamma(&v).map_err(|e| format!("gopt: {e}"))?),
            other => return Err(format!("unknown noise parameter {other:?}")),
        }
    }
    let f_min = f_min.ok_or("noise parameters: missing fmin_db")?;
    let r_n = r_n.ok_or("noise parameters: missing rn or Rn")?;
    let gamma_opt = gamma_opt.ok_or("noise parameters: missing gopt")?;
    NoiseParameters::new(f_min, r_n, gamma_opt).map_err(|e| e.to_string())
}

/// `R_IN,R_OUT` in ohms.
pub fn parse_resistance_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected R_IN,R_OUT, got {s:?}"))?;
    Ok((number("r_in", a.trim())?, number("r_out", b.trim())?))
}
