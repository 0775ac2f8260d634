use std::path::{Path, PathBuf};

use landau_core::constructions::{
    counterexample_rows, phase_extremes, sharpness_report, CounterexampleSpec,
};
use landau_core::propagator::{maximal, propagate_point, HoelderCurve, PropagatorParams, TimeGrid};
use landau_core::rates::{rate_report, screen_generic, RateExperiment};
use landau_core::sobolev::{fourier_weighted_norm, homogeneous_energy, wsp_norm, NormInput};
use landau_core::spectral::{lp_decompose, GridFunction, SpectralFunction};
use rayon::prelude::*;

use crate::config::{Format, RunConfig};
use crate::error::{bad, CliError, Result};
use crate::output::{render, render_csv, write_atomic, Cell, Table};

const XI_SAMPLES: usize = 201;
const CURVE_CANDIDATES: [f64; 7] = [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5];

struct Params<'a>(&'a RunConfig);

impl Params<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.params.get(key).map(String::as_str)
    }

    fn f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => {
                let x: f64 = v.trim().parse().map_err(|_| bad(key, format!("not a number: `{v}`")))?;
                if x.is_nan() {
                    return Err(bad(key, "must not be NaN"));
                }
                Ok(x)
            }
        }
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.trim().parse().map_err(|_| bad(key, format!("not a nonnegative integer: `{v}`"))),
        }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        let xs = v
            .split(',')
            .map(|s| {
                let x: f64 = s.trim().parse().map_err(|_| bad(key, format!("not a number: `{}`", s.trim())))?;
                if !x.is_finite() {
                    return Err(bad(key, "values must be finite"));
                }
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(xs))
    }

    fn time_grid(&self, t_max: f64, t_min: f64, ratio: f64) -> Result<TimeGrid> {
        Ok(TimeGrid::geometric(self.f64("t-max", t_max)?, self.f64("t-min", t_min)?, self.f64("ratio", ratio)?)?)
    }
}

enum Data {
    Spectral(String, SpectralFunction),
    Grid(String, GridFunction),
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })
}

fn load_data(p: &Params) -> Result<Data> {
    let name = p.raw("data").unwrap_or("gaussian");
    let spec = match name {
        "gaussian" => SpectralFunction::standard_gaussian(),
        "bump" => SpectralFunction::scaled_bump(1.0, 1.0, 0.0, 0.0)?,
        "indicator" => SpectralFunction::indicator(0.0, 1.0, 1.0)?,
        _ => {
            if let Some(path) = name.strip_prefix("json:") {
                SpectralFunction::from_json(&read_file(path)?)?
            } else if let Some(path) = name.strip_prefix("csv:") {
                return Ok(Data::Grid(name.to_string(), GridFunction::from_csv(&read_file(path)?)?));
            } else {
                return Err(bad("data", format!("unknown entry `{name}` (gaussian, bump, indicator, json:PATH, csv:PATH)")));
            }
        }
    };
    Ok(Data::Spectral(name.to_string(), spec))
}

fn spectral_data(p: &Params) -> Result<SpectralFunction> {
    match load_data(p)? {
        Data::Spectral(_, s) => Ok(s),
        Data::Grid(..) => Err(bad("data", "grid data is only accepted by `sobolev`")),
    }
}

fn default_x() -> Vec<f64> {
    (-4..=4).map(|j| j as f64 * 0.5).collect()
}

fn propagate(p: &Params) -> Result<Table> {
    let spec = spectral_data(p)?;
    let (a, gamma) = (p.f64("a", 2.0)?, p.f64("gamma", 2.0)?);
    let grid = p.time_grid(1.0, 1e-3, 0.5)?;
    let xs = p.list("x")?.unwrap_or_else(default_x);
    let mut jobs = Vec::new();
    for &x in &xs {
        for &t in grid.values() {
            jobs.push((x, PropagatorParams::new(a, gamma, t)?));
        }
    }
    let values = jobs
        .par_iter()
        .map(|(x, params)| propagate_point(&spec, *x, params))
        .collect::<landau_core::Result<Vec<_>>>()?;
    let mut table = Table::new(vec!["x", "t", "re", "im"]);
    for ((x, params), v) in jobs.iter().zip(values) {
        table.push(vec![Cell::Num(*x), Cell::Num(params.t()), Cell::Num(v.re), Cell::Num(v.im)]);
    }
    Ok(table)
}

fn maximal_cmd(p: &Params) -> Result<Table> {
    let spec = spectral_data(p)?;
    let (a, gamma) = (p.f64("a", 2.0)?, p.f64("gamma", 2.0)?);
    PropagatorParams::new(a, gamma, 1.0)?;
    let grid = p.time_grid(1.0, 1e-8, TimeGrid::default_ratio())?;
    let xs = p.list("x")?.unwrap_or_else(default_x);
    let mut table = Table::new(vec!["x", "maximal"]);
    for x in xs {
        table.push(vec![Cell::Num(x), Cell::Num(maximal(&spec, x, &grid, a, gamma)?)]);
    }
    Ok(table)
}

struct RateOutput {
    table: Table,
    samples: Vec<(f64, Vec<(f64, f64)>)>,
}

fn rate(p: &Params) -> Result<RateOutput> {
    let spec = spectral_data(p)?;
    let (a, gamma) = (p.f64("a", 2.0)?, p.f64("gamma", 2.0)?);
    PropagatorParams::new(a, gamma, 1.0)?;
    let delta = p.f64("delta", f64::INFINITY)?;
    let grid = p.time_grid(1e-2, 1e-6, TimeGrid::default_ratio())?;
    let given = p.list("x")?;
    let radius = given.iter().flatten().fold(2.0f64, |r, x| r.max(x.abs() + 1.0));
    let curve = match p.raw("curve").unwrap_or("vertical") {
        "vertical" => {
            if p.raw("beta").is_some() {
                return Err(bad("beta", "not used with the vertical curve"));
            }
            HoelderCurve::vertical(0.0, radius)?
        }
        "power" => HoelderCurve::power_shift(p.f64("beta", 0.5)?, 0.0, radius)?,
        other => return Err(bad("curve", format!("unknown kind `{other}` (vertical, power)"))),
    };
    let xs = match given {
        Some(xs) => xs,
        None if curve.is_vertical() => vec![0.0],
        None => screen_generic(&spec, &CURVE_CANDIDATES, &curve, gamma, a)?.into_iter().take(5).collect(),
    };
    let exp = RateExperiment::new(spec, curve, a, gamma, delta, grid, xs)?;
    let rows = rate_report(&exp)?;
    let mut table = Table::new(vec!["x", "slope", "intercept", "r2", "predicted_h", "o_consistent"]);
    let mut samples = Vec::new();
    for r in rows {
        table.push(vec![
            Cell::Num(r.x),
            Cell::Num(r.fit.slope),
            Cell::Num(r.fit.intercept),
            Cell::Num(r.fit.r_squared),
            Cell::Num(r.predicted_h),
            Cell::Bool(r.o_consistent),
        ]);
        samples.push((r.x, r.samples));
    }
    Ok(RateOutput { table, samples })
}

fn counterexample(p: &Params) -> Result<Table> {
    let spec = CounterexampleSpec::new(p.f64("theta", 2f64.powi(-8))?, p.f64("a", 2.0)?, p.f64("gamma", 2.0)?)?;
    let n_x = p.usize("n-x", 32)?;
    if n_x == 0 {
        return Err(bad("n-x", "must be positive"));
    }
    let rows = counterexample_rows(&spec, n_x)?;
    let mut table = Table::new(vec!["theta", "x", "t_pinned", "phi_max", "psi_max", "maximal", "f_theta_abs"]);
    for r in rows {
        let e = phase_extremes(&spec, r.x, XI_SAMPLES)?;
        table.push(vec![
            Cell::Num(spec.theta()),
            Cell::Num(r.x),
            Cell::Num(r.t_pinned),
            Cell::Num(e.phi_max),
            Cell::Num(e.psi_max),
            Cell::Num(r.maximal),
            Cell::Num(r.f_theta_abs),
        ]);
    }
    Ok(table)
}

fn sharpness(p: &Params) -> Result<Table> {
    let (r, a, gamma) = (p.f64("R", 1000.0)?, p.f64("a", 2.0)?, p.f64("gamma", 2.0)?);
    let rep = sharpness_report(r, a, gamma)?;
    let mut table = Table::new(vec!["R", "a", "gamma", "t0", "first_order_min", "tail"]);
    table.push(vec![
        Cell::Num(r),
        Cell::Num(a),
        Cell::Num(gamma),
        Cell::Num(rep.t0),
        Cell::Num(rep.first_order_min),
        Cell::Num(rep.tail),
    ]);
    Ok(table)
}

fn sobolev(p: &Params) -> Result<Table> {
    let (s, q) = (p.f64("s", 0.5)?, p.f64("p", 2.0)?);
    let mut table = Table::new(vec!["entry", "s", "p", "wsp", "fourier", "ratio"]);
    let row = match load_data(p)? {
        Data::Spectral(name, spec) => {
            let w = wsp_norm(NormInput::Catalog(&spec), s, q)?;
            let f = fourier_weighted_norm(&spec, s, q)?;
            let ratio = if w > 0.0 { Cell::Num(f / w) } else { Cell::Empty };
            vec![Cell::Text(name), Cell::Num(s), Cell::Num(q), Cell::Num(w), Cell::Num(f), ratio]
        }
        Data::Grid(name, grid) => {
            let w = wsp_norm(NormInput::Grid(&grid), s, q)?;
            vec![Cell::Text(name), Cell::Num(s), Cell::Num(q), Cell::Num(w), Cell::Empty, Cell::Empty]
        }
    };
    table.push(row);
    Ok(table)
}

fn lp(p: &Params) -> Result<Table> {
    let spec = spectral_data(p)?;
    let covering = spec.extent().max(1.0).log2().ceil() as usize;
    let k_max = p.usize("k-max", covering)?;
    let k_max = u32::try_from(k_max).map_err(|_| bad("k-max", "too large"))?;
    let pieces = lp_decompose(&spec, k_max)?;
    let mut table = Table::new(vec!["k", "scale", "energy"]);
    for piece in pieces {
        table.push(vec![
            Cell::Int(piece.index as i64),
            Cell::Num(piece.scale),
            Cell::Num(homogeneous_energy(&piece.spectrum, 0.0)?),
        ]);
    }
    Ok(table)
}

/// Rendered outputs keyed by destination; `None` means standard output.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub main: String,
    pub companions: Vec<(PathBuf, String)>,
}

fn companion_path(out: &Path, index: usize) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!(".samples-{index}.csv"));
    out.with_file_name(name)
}

/// Runs the command and renders its outputs without touching the filesystem.
pub fn execute(cfg: &RunConfig) -> Result<Artifacts> {
    let p = Params(cfg);
    let mut companions = Vec::new();
    let table = match cfg.command {
        crate::Command::Propagate => propagate(&p)?,
        crate::Command::Maximal => maximal_cmd(&p)?,
        crate::Command::Rate => {
            let out = rate(&p)?;
            if let (Some(path), Format::Csv) = (&cfg.output_path, cfg.format) {
                for (i, (x, samples)) in out.samples.iter().enumerate() {
                    let mut t = Table::new(vec!["t", "err"]);
                    for &(ti, e) in samples {
                        t.push(vec![Cell::Num(ti), Cell::Num(e)]);
                    }
                    let meta = format!("{} x={}", cfg.meta_line(), landau_core::spectral::fmt_f64(*x));
                    companions.push((companion_path(path, i), render_csv(&meta, &t)));
                }
            }
            out.table
        }
        crate::Command::Counterexample => counterexample(&p)?,
        crate::Command::Sharpness => sharpness(&p)?,
        crate::Command::Sobolev => sobolev(&p)?,
        crate::Command::LpDecompose => lp(&p)?,
    };
    Ok(Artifacts { main: render(cfg, &table), companions })
}

/// Executes and writes every artifact; the main output goes to stdout when
/// no path is configured.
pub fn run(cfg: &RunConfig) -> Result<Option<String>> {
    let art = execute(cfg)?;
    match &cfg.output_path {
        Some(path) => {
            for (p, text) in &art.companions {
                write_atomic(p, text)?;
            }
            write_atomic(path, &art.main)?;
            Ok(None)
        }
        None => Ok(Some(art.main)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, RunConfig};

    fn cfg(text: &str) -> RunConfig {
        RunConfig::from_settings(parse_config(text).unwrap()).unwrap()
    }

    #[test]
    fn companion_names() {
        assert_eq!(companion_path(Path::new("dir/rate.csv"), 2), PathBuf::from("dir/rate.csv.samples-2.csv"));
    }

    #[test]
    fn list_parsing() {
        let c = cfg("command = propagate\nx = 1, -2.5,3e-1\n");
        assert_eq!(Params(&c).list("x").unwrap(), Some(vec![1.0, -2.5, 0.3]));
        let c = cfg("command = propagate\nx = 1,,2\n");
        assert!(Params(&c).list("x").is_err());
    }

    #[test]
    fn sharpness_defaults() {
        let out = execute(&cfg("command = sharpness\n")).unwrap().main;
        let line = out.lines().nth(2).unwrap();
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(&fields[..3], &[1000.0, 2.0, 2.0]);
        assert!(fields[4] >= 0.005 && fields[5] <= 2.8731e-4);
    }

    #[test]
    fn grid_data_only_for_sobolev() {
        assert!(execute(&cfg("command = propagate\ndata = csv:/nonexistent\n")).is_err());
        assert!(matches!(execute(&cfg("command = propagate\ndata = nope\n")), Err(CliError::BadValue { .. })));
    }
}
