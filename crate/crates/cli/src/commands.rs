//! Subcommand implementations. Each returns a [`Rendered`] report or a
//! [`CliError`] carrying the process exit code.

use std::io::Read as _;
use std::path::{Path, PathBuf};

use lna_core::design::{
    design_amplifier_with, simultaneous_conjugate_match, DesignError, DesignOptions,
};
use lna_core::gain::{
    available_gain_circle, from_db, max_available_gain, max_stable_gain, unilateral_assessment,
};
use lna_core::matching::{
    electrical_to_physical, quarter_wave_transformer, single_stub_match, BiasFeed, MatchingError,
    MatchingNetwork, MicrostripLine, NetworkElement, StubKind, Substrate, Topology,
};
use lna_core::noise::{factor_to_db, friis_cascade, friis_contributions, noise_circle};
use lna_core::stability::stability_report;
use lna_core::touchstone::sample_at;
use lna_core::{
    parse_gamma, parse_touchstone, CascadeStage, Complex, DesignSpec, NoiseParameters, SmithCircle,
    StabilityReport, SweepTable, TwoPortS,
};
use serde_json::{json, Value};

use crate::args::{parse_noise, parse_resistance_pair, parse_stage};
use crate::report::{
    circle_json, circle_text, db, gamma_json, gamma_text, num, opt_num, region_name, sig4,
    TextReport,
};
use crate::svg::SmithPlotSpec;

pub const EXIT_IO: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_ANALYSIS: u8 = 3;
pub const EXIT_DESIGN: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            msg: msg.into(),
        }
    }

    pub fn analysis(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_ANALYSIS,
            msg: msg.into(),
        }
    }

    pub fn design(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_DESIGN,
            msg: msg.into(),
        }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            msg: msg.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.msg)
    }
}

/// A finished report in both output flavours, plus an optional chart.
#[derive(Debug)]
pub struct Rendered {
    pub json: Value,
    pub text: String,
    pub plot: Option<SmithPlotSpec>,
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::parse(format!("cannot read standard input: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

pub fn load_sweep(path: &Path) -> Result<SweepTable, CliError> {
    let text = read_input(path)?;
    parse_touchstone(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn frequency_for(sweep: &SweepTable, freq: Option<f64>) -> Result<f64, CliError> {
    match freq {
        Some(f) => Ok(f),
        None if sweep.len() == 1 => Ok(sweep.f_min()),
        None => Err(CliError::parse(format!(
            "--freq is required for a sweep of {} points ({} to {} Hz)",
            sweep.len(),
            sweep.f_min(),
            sweep.f_max()
        ))),
    }
}

fn sample(
    sweep: &SweepTable,
    freq: Option<f64>,
    z0: Option<f64>,
) -> Result<(f64, TwoPortS), CliError> {
    let f = frequency_for(sweep, freq)?;
    let s = sample_at(sweep, f).map_err(|e| CliError::analysis(e.to_string()))?;
    if let Some(z0) = z0 {
        if (z0 - s.z0).abs() > 1e-9 * s.z0 {
            return Err(CliError::analysis(format!(
                "S-parameters are referenced to {} ohm, not the requested {z0} ohm",
                s.z0
            )));
        }
    }
    Ok((f, s))
}

fn s_matrix_json(s: &TwoPortS) -> Value {
    json!({
        "s11": gamma_json(s.s11),
        "s12": gamma_json(s.s12),
        "s21": gamma_json(s.s21),
        "s22": gamma_json(s.s22),
    })
}

fn stability_circle_json(c: Option<SmithCircle>, region: Option<lna_core::Region>) -> Value {
    match c {
        Some(c) => {
            let mut v = circle_json(&c);
            v["clearance"] = num(c.clearance_from_unit_disc());
            v["stable_region"] = region.map_or(Value::Null, |r| json!(region_name(r)));
            v
        }
        None => Value::Null,
    }
}

fn stability_json(st: &StabilityReport) -> Value {
    json!({
        "delta": gamma_json(st.delta),
        "delta_mag": num(st.delta.norm()),
        "k": num(st.k),
        "mu": num(st.mu),
        "mu_prime": num(st.mu_prime),
        "unconditional": st.unconditional,
        "circles_clear_of_chart": st.circles_clear_of_chart(),
        "load_circle": stability_circle_json(st.load_circle, st.load_stable_region),
        "source_circle": stability_circle_json(st.source_circle, st.source_stable_region),
    })
}

fn stability_rows(t: &mut TextReport, st: &StabilityReport) {
    t.row("delta", gamma_text(st.delta));
    t.row("K", sig4(st.k));
    t.row("mu", sig4(st.mu));
    t.row("mu'", sig4(st.mu_prime));
    t.row(
        "stability",
        if st.unconditional {
            "unconditionally stable"
        } else {
            "potentially unstable"
        },
    );
    for (name, c, r) in [
        ("load circle", st.load_circle, st.load_stable_region),
        ("source circle", st.source_circle, st.source_stable_region),
    ] {
        let value = match (c, r) {
            (Some(c), Some(r)) => format!("{}, stable {}", circle_text(&c), region_name(r)),
            (Some(c), None) => circle_text(&c),
            _ => "degenerate (straight line)".into(),
        };
        t.row(name, value);
    }
}

fn stability_plot(st: &StabilityReport) -> SmithPlotSpec {
    let mut plot = SmithPlotSpec {
        show_unit_chart: true,
        ..Default::default()
    };
    if let Some(c) = st.load_circle {
        plot.circle(c, "load stability", st.load_stable_region);
    }
    if let Some(c) = st.source_circle {
        plot.circle(c, "source stability", st.source_stable_region);
    }
    plot
}

fn gain_pair(t: &mut TextReport, label: &str, g: f64) {
    t.row(label, format!("{} dB ({})", sig4(db(g)), sig4(g)));
}

pub fn analyze(file: &Path, freq: Option<f64>, z0: Option<f64>) -> Result<Rendered, CliError> {
    let sweep = load_sweep(file)?;
    let (f, s) = sample(&sweep, freq, z0)?;
    let st = stability_report(&s);
    let mag = max_available_gain(&s).ok();
    let msg = max_stable_gain(&s);
    let ua = unilateral_assessment(&s).ok();
    let conj = simultaneous_conjugate_match(&s).ok();

    let mut json = json!({
        "command": "analyze",
        "frequency_hz": num(f),
        "z0": num(s.z0),
        "s": s_matrix_json(&s),
        "mag": opt_num(mag),
        "mag_db": opt_num(mag.map(db)),
        "msg": num(msg),
        "msg_db": num(db(msg)),
        "u": opt_num(ua.map(|u| u.u)),
        "bound_low": opt_num(ua.map(|u| u.lower_bound)),
        "bound_high": opt_num(ua.map(|u| u.upper_bound)),
        "bound_low_db": opt_num(ua.map(|u| u.lower_db)),
        "bound_high_db": opt_num(ua.map(|u| u.upper_db)),
        "gamma_ms": conj.map_or(Value::Null, |c| gamma_json(c.0)),
        "gamma_ml": conj.map_or(Value::Null, |c| gamma_json(c.1)),
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut json, stability_json(&st)) {
        dst.extend(src);
    }

    let mut t = TextReport::default();
    t.row("frequency", format!("{} GHz", sig4(f / 1e9)));
    t.row("z0", format!("{} ohm", sig4(s.z0)));
    stability_rows(&mut t, &st);
    match mag {
        Some(g) => gain_pair(&mut t, "MAG", g),
        None => t.row("MAG", "undefined (not unconditionally stable)"),
    }
    gain_pair(&mut t, "MSG", msg);
    match ua {
        Some(u) => {
            t.row("U", sig4(u.u));
            t.row(
                "G_T/G_TU bounds",
                format!("[{}, {}] dB", sig4(u.lower_db), sig4(u.upper_db)),
            );
        }
        None => t.row("U", "undefined (|S11| or |S22| >= 1)"),
    }
    if let Some((gs, gl)) = conj {
        t.row("gamma_MS", gamma_text(gs));
        t.row("gamma_ML", gamma_text(gl));
    }

    let mut plot = stability_plot(&st);
    if let Some((gs, gl)) = conj {
        plot.point(gs, "Γ_MS");
        plot.point(gl, "Γ_ML");
    }
    Ok(Rendered {
        json,
        text: t.render(),
        plot: Some(plot),
    })
}

fn substrate(eps_r: Option<f64>, h_mm: Option<f64>) -> Result<Option<Substrate>, CliError> {
    match (eps_r, h_mm) {
        (Some(eps_r), Some(height_mm)) => {
            if !(eps_r >= 1.0 && height_mm > 0.0) {
                return Err(CliError::parse(format!(
                    "invalid substrate: eps_r {eps_r}, height {height_mm} mm"
                )));
            }
            Ok(Some(Substrate { eps_r, height_mm }))
        }
        (None, None) => Ok(None),
        _ => Err(CliError::parse("--eps-r and --h-mm must be given together")),
    }
}

fn physical(
    z0: f64,
    deg: f64,
    f_hz: Option<f64>,
    sub: Option<Substrate>,
) -> Result<(Option<f64>, Option<f64>), MatchingError> {
    match (f_hz, sub) {
        (Some(f), Some(sub)) => {
            let line = MicrostripLine::design(z0, sub, deg, f)?;
            Ok((Some(line.length_mm), Some(line.width_mm)))
        }
        (Some(f), None) => Ok((Some(electrical_to_physical(deg, f, 1.0)), None)),
        (None, _) => Ok((None, None)),
    }
}

fn elements_json(
    net: &MatchingNetwork,
    f_hz: Option<f64>,
    sub: Option<Substrate>,
) -> Result<Value, MatchingError> {
    net.elements()
        .into_iter()
        .map(|el| {
            let (kind, z0, deg) = match el {
                NetworkElement::SeriesLine { z0, deg } => ("series_line", z0, deg),
                NetworkElement::ShuntStub {
                    kind: StubKind::Open,
                    z0,
                    deg,
                } => ("shunt_stub_open", z0, deg),
                NetworkElement::ShuntStub {
                    kind: StubKind::Short,
                    z0,
                    deg,
                } => ("shunt_stub_short", z0, deg),
            };
            let (mm, width_mm) = physical(z0, deg, f_hz, sub)?;
            let mut v = json!({ "type": kind, "z0": num(z0), "deg": num(deg) });
            if let Some(mm) = mm {
                v["mm"] = num(mm);
            }
            if let Some(w) = width_mm {
                v["width_mm"] = num(w);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Value::Array)
}

fn topology_name(t: Topology) -> &'static str {
    match t {
        Topology::SeriesLineShuntStub => "series_line_shunt_stub",
        Topology::QuarterWave => "quarter_wave",
        Topology::Identity => "identity",
    }
}

fn network_json(
    net: &MatchingNetwork,
    target: Option<Complex>,
    f_hz: Option<f64>,
    sub: Option<Substrate>,
) -> Result<Value, MatchingError> {
    let mut v = json!({
        "topology": topology_name(net.topology),
        "termination_ohm": num(net.termination),
        "achieved_gamma": gamma_json(net.achieved_gamma),
        "elements": elements_json(net, f_hz, sub)?,
    });
    if let Some(t) = target {
        v["target_gamma"] = gamma_json(t);
        v["error"] = num((net.achieved_gamma - t).norm());
    }
    Ok(v)
}

fn network_text(
    net: &MatchingNetwork,
    f_hz: Option<f64>,
    sub: Option<Substrate>,
) -> Result<String, MatchingError> {
    if net.topology == Topology::Identity {
        return Ok("none (already matched)".into());
    }
    let parts = net
        .elements()
        .into_iter()
        .map(|el| {
            let (name, z0, deg) = match el {
                NetworkElement::SeriesLine { z0, deg } => ("series line", z0, deg),
                NetworkElement::ShuntStub {
                    kind: StubKind::Open,
                    z0,
                    deg,
                } => ("open stub", z0, deg),
                NetworkElement::ShuntStub {
                    kind: StubKind::Short,
                    z0,
                    deg,
                } => ("short stub", z0, deg),
            };
            let (mm, w) = physical(z0, deg, f_hz, sub)?;
            let mut s = format!("{name} {} ohm {} deg", sig4(z0), sig4(deg));
            match (mm, w) {
                (Some(mm), Some(w)) => s.push_str(&format!(" ({} mm x {} mm)", sig4(mm), sig4(w))),
                (Some(mm), None) => s.push_str(&format!(" ({} mm)", sig4(mm))),
                _ => {}
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>, MatchingError>>()?;
    Ok(parts.join(", "))
}

fn bias_json(b: &BiasFeed) -> Value {
    json!({
        "line_z0": num(b.line_z0),
        "electrical_deg": num(b.electrical_deg),
        "length_mm": num(b.length_mm),
        "width_mm": opt_num(b.width_mm),
        "termination": b.termination,
    })
}

fn design_error(e: DesignError) -> CliError {
    match e {
        DesignError::Sample(e) => CliError::analysis(e.to_string()),
        other => CliError::design(other.to_string()),
    }
}

fn matching_error(e: MatchingError) -> CliError {
    CliError::analysis(format!("matching: {e}"))
}

pub struct DesignArgs<'a> {
    pub file: &'a Path,
    pub config: &'a Path,
    pub noise: Option<&'a str>,
    pub networks: Option<&'a Path>,
    pub stub: StubKind,
    pub eps_r: Option<f64>,
    pub h_mm: Option<f64>,
    pub bias_z0: f64,
    pub z0: Option<f64>,
}

pub fn design(a: &DesignArgs<'_>) -> Result<(Rendered, Option<(PathBuf, String)>), CliError> {
    let sweep = load_sweep(a.file)?;
    let config_text = read_input(a.config)?;
    let mut spec = DesignSpec::parse_config(&config_text)
        .map_err(|e| CliError::parse(format!("{}: {e}", a.config.display())))?;
    if let Some(z0) = a.z0 {
        spec.z0 = z0;
    }
    let np = a
        .noise
        .map(|s| parse_noise(s, spec.z0))
        .transpose()
        .map_err(CliError::parse)?;
    let sub = substrate(a.eps_r, a.h_mm)?;
    let options = DesignOptions {
        stub_kind: a.stub,
        bias_line_z0: a.bias_z0,
        substrate: sub,
        ..Default::default()
    };
    let r = design_amplifier_with(&sweep, np.as_ref(), &spec, &options).map_err(design_error)?;
    let f = Some(r.frequency_hz);

    let source_net =
        network_json(&r.source_network, Some(r.gamma_s), f, sub).map_err(matching_error)?;
    let load_net =
        network_json(&r.load_network, Some(r.gamma_l), f, sub).map_err(matching_error)?;
    let json = json!({
        "command": "design",
        "objective": r.objective.to_string(),
        "frequency_hz": num(r.frequency_hz),
        "z0": num(spec.z0),
        "s": s_matrix_json(&r.s),
        "gamma_s": gamma_json(r.gamma_s),
        "gamma_l": gamma_json(r.gamma_l),
        "gt": num(r.gt),
        "gt_db": num(db(r.gt)),
        "ga": num(r.ga),
        "ga_db": num(db(r.ga)),
        "mag": opt_num(r.mag),
        "mag_db": opt_num(r.mag.map(db)),
        "nf": opt_num(r.nf),
        "nf_db": opt_num(r.nf.map(factor_to_db)),
        "stability": stability_json(&r.stability),
        "source_network": source_net,
        "load_network": load_net,
        "bias_feed": bias_json(&r.bias_feed),
    });

    let networks = a.networks.map(|path| {
        let doc = json!({
            "frequency_hz": num(r.frequency_hz),
            "source": json["source_network"]["elements"].clone(),
            "load": json["load_network"]["elements"].clone(),
            "bias_feed": json["bias_feed"].clone(),
        });
        let text = serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n";
        (path.to_path_buf(), text)
    });

    let mut t = TextReport::default();
    t.row("objective", r.objective.to_string());
    t.row("frequency", format!("{} GHz", sig4(r.frequency_hz / 1e9)));
    t.row("gamma_S", gamma_text(r.gamma_s));
    t.row("gamma_L", gamma_text(r.gamma_l));
    gain_pair(&mut t, "G_T", r.gt);
    gain_pair(&mut t, "G_A", r.ga);
    if let Some(m) = r.mag {
        gain_pair(&mut t, "MAG", m);
    }
    if let Some(nf) = r.nf {
        t.row(
            "NF",
            format!("{} dB (F = {})", sig4(factor_to_db(nf)), sig4(nf)),
        );
    }
    stability_rows(&mut t, &r.stability);
    t.row(
        "source network",
        network_text(&r.source_network, f, sub).map_err(matching_error)?,
    );
    t.row(
        "load network",
        network_text(&r.load_network, f, sub).map_err(matching_error)?,
    );
    let b = &r.bias_feed;
    t.row(
        "bias feed",
        format!(
            "{} ohm {} deg line, {} mm, {} termination",
            sig4(b.line_z0),
            sig4(b.electrical_deg),
            sig4(b.length_mm),
            b.termination
        ),
    );

    let mut plot = stability_plot(&r.stability);
    if let (Some(np), Some(nf)) = (np.as_ref(), r.nf) {
        if nf > np.f_min * (1.0 + 1e-9) {
            if let Ok(c) = noise_circle(np, nf) {
                plot.circle(c, format!("NF {} dB", sig4(factor_to_db(nf))), None);
            }
        }
        plot.point(np.gamma_opt, "Γ_opt");
    }
    if let Ok(c) = available_gain_circle(&r.s, r.ga) {
        plot.circle(c, format!("G_A {} dB", sig4(db(r.ga))), None);
    }
    plot.point(r.gamma_s, "Γ_S");
    plot.point(r.gamma_l, "Γ_L");
    Ok((
        Rendered {
            json,
            text: t.render(),
            plot: Some(plot),
        },
        networks,
    ))
}

pub struct CirclesArgs<'a> {
    pub file: &'a Path,
    pub freq: Option<f64>,
    pub noise: Option<&'a str>,
    pub nf_db: &'a [f64],
    pub ga_db: &'a [f64],
    pub z0: Option<f64>,
}

struct CircleRow {
    kind: &'static str,
    label: String,
    level_db: Option<f64>,
    circle: SmithCircle,
    region: Option<lna_core::Region>,
}

pub fn circles(a: &CirclesArgs<'_>) -> Result<(Rendered, String), CliError> {
    let sweep = load_sweep(a.file)?;
    let (f, s) = sample(&sweep, a.freq, a.z0)?;
    let np: Option<NoiseParameters> = a
        .noise
        .map(|n| parse_noise(n, s.z0))
        .transpose()
        .map_err(CliError::parse)?;
    if !a.nf_db.is_empty() && np.is_none() {
        return Err(CliError::parse("--nf-db requires --noise"));
    }
    let st = stability_report(&s);
    let mut rows = Vec::new();
    for (kind, label, c, region) in [
        (
            "load_stability",
            "load stability",
            st.load_circle,
            st.load_stable_region,
        ),
        (
            "source_stability",
            "source stability",
            st.source_circle,
            st.source_stable_region,
        ),
    ] {
        if let Some(circle) = c {
            rows.push(CircleRow {
                kind,
                label: label.into(),
                level_db: None,
                circle,
                region,
            });
        }
    }
    if let Some(np) = &np {
        for &level in a.nf_db {
            let circle = noise_circle(np, from_db(level))
                .map_err(|e| CliError::analysis(format!("noise circle at {level} dB: {e}")))?;
            rows.push(CircleRow {
                kind: "noise",
                label: format!("NF {level} dB"),
                level_db: Some(level),
                circle,
                region: None,
            });
        }
    }
    for &level in a.ga_db {
        let circle = available_gain_circle(&s, from_db(level))
            .map_err(|e| CliError::analysis(format!("gain circle at {level} dB: {e}")))?;
        rows.push(CircleRow {
            kind: "available_gain",
            label: format!("G_A {level} dB"),
            level_db: Some(level),
            circle,
            region: None,
        });
    }

    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = circle_json(&r.circle);
            v["kind"] = json!(r.kind);
            v["label"] = json!(r.label);
            v["level_db"] = opt_num(r.level_db);
            v["stable_region"] = r.region.map_or(Value::Null, |x| json!(region_name(x)));
            v
        })
        .collect();
    let json = json!({
        "command": "circles",
        "frequency_hz": num(f),
        "z0": num(s.z0),
        "circles": json_rows,
    });

    let mut t = TextReport::default();
    for r in &rows {
        let mut value = circle_text(&r.circle);
        if let Some(region) = r.region {
            value.push_str(&format!(", stable {}", region_name(region)));
        }
        t.row(&r.label, value);
    }

    let mut csv = String::from("kind,label,level_db,center_re,center_im,center_mag,center_angle_deg,radius,stable_region\n");
    for r in &rows {
        let p = lna_core::PolarForm::from(r.circle.center);
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.kind,
            r.label,
            r.level_db.map_or(String::new(), |l| l.to_string()),
            r.circle.center.re,
            r.circle.center.im,
            p.magnitude,
            p.angle_deg,
            r.circle.radius,
            r.region.map_or("", region_name)
        ));
    }

    let mut plot = SmithPlotSpec {
        show_unit_chart: true,
        ..Default::default()
    };
    for r in &rows {
        plot.circle(r.circle, r.label.clone(), r.region);
    }
    if let Some(np) = &np {
        plot.point(np.gamma_opt, "Γ_opt");
    }
    Ok((
        Rendered {
            json,
            text: t.render(),
            plot: Some(plot),
        },
        csv,
    ))
}

pub fn cascade(stage_args: &[String]) -> Result<Rendered, CliError> {
    if stage_args.is_empty() {
        return Err(CliError::parse(
            "at least one --stage nf_db=X,gain_db=Y is required",
        ));
    }
    let stages: Vec<CascadeStage> = stage_args
        .iter()
        .map(|s| parse_stage(s).map_err(CliError::parse))
        .collect::<Result<_, _>>()?;
    let contributions =
        friis_contributions(&stages).map_err(|e| CliError::analysis(e.to_string()))?;
    let total = friis_cascade(&stages).map_err(|e| CliError::analysis(e.to_string()))?;

    let rows: Vec<Value> = stages
        .iter()
        .zip(&contributions)
        .enumerate()
        .map(|(i, (st, c))| {
            json!({
                "stage": i + 1,
                "f": num(st.f),
                "nf_db": num(factor_to_db(st.f)),
                "g": num(st.g),
                "gain_db": num(db(st.g)),
                "contribution": num(*c),
            })
        })
        .collect();
    let json = json!({
        "command": "cascade",
        "stages": rows,
        "total_f": num(total),
        "total_nf_db": num(factor_to_db(total)),
    });

    let mut text = format!(
        "{:<5}  {:>8}  {:>9}  {:>7}  {:>12}\n",
        "stage", "NF (dB)", "gain (dB)", "F", "contribution"
    );
    for (i, (st, c)) in stages.iter().zip(&contributions).enumerate() {
        text.push_str(&format!(
            "{:<5}  {:>8}  {:>9}  {:>7}  {:>12}\n",
            i + 1,
            sig4(factor_to_db(st.f)),
            sig4(db(st.g)),
            sig4(st.f),
            sig4(*c)
        ));
    }
    text.push_str(&format!(
        "total NF {} dB (F = {})\n",
        sig4(factor_to_db(total)),
        sig4(total)
    ));
    Ok(Rendered {
        json,
        text,
        plot: None,
    })
}

pub struct MatchArgs<'a> {
    pub gamma: Option<&'a str>,
    pub quarter_wave: Option<&'a str>,
    pub stub: StubKind,
    pub freq: Option<f64>,
    pub eps_r: Option<f64>,
    pub h_mm: Option<f64>,
    pub z0: Option<f64>,
}

pub fn matching(a: &MatchArgs<'_>) -> Result<Rendered, CliError> {
    let z0 = a.z0.unwrap_or(50.0);
    let sub = substrate(a.eps_r, a.h_mm)?;
    let (net, target) = match (a.gamma, a.quarter_wave) {
        (Some(g), None) => {
            let target = parse_gamma(g).map_err(|e| CliError::parse(format!("--gamma: {e}")))?;
            (
                single_stub_match(target, z0, a.stub).map_err(matching_error)?,
                Some(target),
            )
        }
        (None, Some(pair)) => {
            let (r_in, r_out) = parse_resistance_pair(pair).map_err(CliError::parse)?;
            (
                quarter_wave_transformer(r_in, r_out).map_err(matching_error)?,
                None,
            )
        }
        _ => {
            return Err(CliError::parse(
                "give exactly one of --gamma or --quarter-wave",
            ))
        }
    };
    let mut json = network_json(&net, target, a.freq, sub).map_err(matching_error)?;
    json["command"] = json!("match");
    json["z0"] = num(z0);
    json["frequency_hz"] = opt_num(a.freq);

    let mut t = TextReport::default();
    if let Some(target) = target {
        t.row("target", gamma_text(target));
    }
    t.row("topology", topology_name(net.topology));
    t.row(
        "network",
        network_text(&net, a.freq, sub).map_err(matching_error)?,
    );
    t.row("achieved", gamma_text(net.achieved_gamma));

    let mut plot = SmithPlotSpec {
        show_unit_chart: true,
        ..Default::default()
    };
    if let Some(target) = target {
        plot.point(target, "target");
    }
    Ok(Rendered {
        json,
        text: t.render(),
        plot: Some(plot),
    })
}
