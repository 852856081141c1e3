//! Value formatting shared by the text and JSON renderers.

use lna_core::complex::format_gamma;
use lna_core::gain::to_db;
use lna_core::{Complex, PolarForm, Region, SmithCircle};
use serde_json::{json, Value};

/// Four significant digits, for display text.
pub fn sig4(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (3 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn gamma_text(z: Complex) -> String {
    let p = PolarForm::from(z);
    format!("{}<{}", sig4(p.magnitude), sig4(p.angle_deg))
}

/// `MAG<ANGLE` at full precision.
pub fn gamma_json(z: Complex) -> Value {
    Value::String(format_gamma(z))
}

/// JSON number, with infinities spelled `"inf"` / `"-inf"` and NaN as null.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::Null
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn db(x: f64) -> f64 {
    to_db(x)
}

pub fn region_name(r: Region) -> &'static str {
    match r {
        Region::Inside => "inside",
        Region::Outside => "outside",
    }
}

pub fn circle_json(c: &SmithCircle) -> Value {
    let p = PolarForm::from(c.center);
    json!({
        "center": gamma_json(c.center),
        "center_mag": num(p.magnitude),
        "center_angle_deg": num(p.angle_deg),
        "radius": num(c.radius),
    })
}

pub fn circle_text(c: &SmithCircle) -> String {
    format!("center {} radius {}", gamma_text(c.center), sig4(c.radius))
}

/// Aligned `label  value` lines.
#[derive(Debug, Default)]
pub struct TextReport {
    rows: Vec<(String, String)>,
}

impl TextReport {
    pub fn row(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.rows.push((label.into(), value.into()));
    }

    pub fn render(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|(l, _)| l.chars().count())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for (label, value) in &self.rows {
            let pad = width - label.chars().count();
            out.push_str(label);
            out.push_str(&" ".repeat(pad + 2));
            out.push_str(value);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_digits() {
        assert_eq!(sig4(1.12689), "1.127");
        assert_eq!(sig4(15.0516), "15.05");
        assert_eq!(sig4(0.040830), "0.04083");
        assert_eq!(sig4(-157.085), "-157.1");
        assert_eq!(sig4(24982.7), "24983");
        assert_eq!(sig4(0.0), "0");
        assert_eq!(sig4(f64::INFINITY), "inf");
    }

    #[test]
    fn infinite_numbers_serialize_as_strings() {
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(f64::NEG_INFINITY), json!("-inf"));
        assert_eq!(num(1.5), json!(1.5));
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn text_rows_align() {
        let mut t = TextReport::default();
        t.row("K", "1.127");
        t.row("delta", "0.3359<-79.62");
        assert_eq!(t.render(), "K      1.127\ndelta  0.3359<-79.62\n");
    }
}
