use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use serde_json::json;
use treemax_core::geometry::{enumerate_ball, DEFAULT_ENUMERATION_BUDGET};
use treemax_core::harness::{
    region_csv, region_svg, run_delta_divergence, run_growth, run_invariants, run_radial_bounded, run_rwt_probe,
    run_veca, run_zclass, InvariantsParams, RegionFigure, Report, SetFamily, VecaRun, ZClassParams,
};
use treemax_core::io::{read_finite_csv, read_radial_csv, write_finite_csv};
use treemax_core::lorentz::{lorentz_norm, pytlik_surrogate_detailed, FiniteFunction, LorentzIndex, RadialFunction, Tail};
use treemax_core::maximal::{maximal_at, maximal_bruteforce, maximal_radial_profile, uncentered_bruteforce, MaximalParams, RadiusPolicy};
use treemax_core::theory::{VecaParams, VerdictKind};
use treemax_core::{Error, Result, TreeParams};

use crate::args::{Cli, Command, ExperimentArgs, ExperimentName, Global, Kind, MaximalArgs, NormArgs, Source};

/// Runs one command; `Ok(false)` means an experiment check failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let tree = TreeParams::new(cli.global.k)?;
    match &cli.command {
        Command::Norm(a) => norm(&cli.global, tree, a).map(|_| true),
        Command::Maximal(a) => maximal(&cli.global, tree, a).map(|_| true),
        Command::Region(a) => region(&cli.global, a.gamma.clone(), a.grid, a.kind, a.csv.as_deref()).map(|_| true),
        Command::Experiment(a) => experiment(&cli.global, tree, a),
    }
}

fn emit(global: &Global, text: &str) -> Result<()> {
    match &global.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

enum Input {
    Radial(RadialFunction),
    Finite(FiniteFunction),
}

fn read_input(src: &Source, tree: TreeParams) -> Result<Input> {
    let open = |p: &Path| -> Result<BufReader<File>> { Ok(BufReader::new(File::open(p)?)) };
    match (&src.radial, &src.finite) {
        (Some(p), None) => Ok(Input::Radial(read_radial_csv(open(p)?, tree)?)),
        (None, Some(p)) => Ok(Input::Finite(read_finite_csv(open(p)?, tree)?)),
        _ => Err(Error::Parameter("give exactly one of --radial and --finite".into())),
    }
}

fn norm(global: &Global, tree: TreeParams, a: &NormArgs) -> Result<()> {
    let p = a.p.0;
    let s = a.s.map_or(p, |s| s.0);
    let idx = LorentzIndex::new(p, s)?;
    let input = read_input(&a.source, tree)?;
    let (value, extra) = match input {
        Input::Radial(mut f) => {
            if let Some(lr) = a.tail_log_ratio {
                f = f.with_tail(Tail {
                    log_ratio: lr,
                    degree: a.tail_degree,
                })?;
            }
            if a.surrogate {
                let r = pytlik_surrogate_detailed(&f, idx)?;
                (r.value, Some(r.tail_error))
            } else {
                (lorentz_norm(&f, idx)?, None)
            }
        }
        Input::Finite(f) => {
            if a.surrogate || a.tail_log_ratio.is_some() {
                return Err(Error::Parameter("--surrogate and tails need a radial table".into()));
            }
            (lorentz_norm(&f, idx)?, None)
        }
    };
    let text = if global.json {
        let mut obj = json!({
            "p": a.p,
            "s": a.s.unwrap_or(a.p),
            "surrogate": a.surrogate,
            "value": value.to_sci(15),
        });
        if let Some(e) = extra {
            obj["tail_error"] = json!(e);
        }
        format!("{}\n", serde_json::to_string_pretty(&obj)?)
    } else {
        format!("{}\n", value.to_sci(15))
    };
    emit(global, &text)
}

fn maximal(global: &Global, tree: TreeParams, a: &MaximalArgs) -> Result<()> {
    let policy = match a.radius_cap {
        Some(r) => RadiusPolicy::UpTo(r),
        None => RadiusPolicy::SupportClosure,
    };
    let params = MaximalParams::new(a.gamma, policy)?;
    let mut out = Vec::new();
    match read_input(&a.source, tree)? {
        Input::Radial(f) => {
            let m_max = a.m_max.or(f.support_radius()).unwrap_or(0);
            let prof = maximal_radial_profile(&f, params, m_max)?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["norm", "value", "argmax_radius"]).map_err(Error::from)?;
            for (m, (v, r)) in prof.values.iter().zip(&prof.argmax).enumerate() {
                w.write_record([m.to_string(), v.to_sci(15), r.to_string()]).map_err(Error::from)?;
            }
            w.flush()?;
        }
        Input::Finite(f) => {
            let radius = a
                .radius
                .ok_or_else(|| Error::Parameter("finite input needs --radius".into()))?;
            let mf = if a.uncentered {
                uncentered_bruteforce(&f, a.gamma, radius, DEFAULT_ENUMERATION_BUDGET)?
            } else if a.exact || a.radius_cap.is_some() {
                let mut mf = FiniteFunction::zero(tree);
                for x in enumerate_ball(tree, radius, DEFAULT_ENUMERATION_BUDGET)? {
                    let v = maximal_at(&f, &x, params)?.value;
                    mf.insert(x, v)?;
                }
                mf
            } else {
                maximal_bruteforce(&f, a.gamma, radius, DEFAULT_ENUMERATION_BUDGET)?
            };
            write_finite_csv(&mut out, &mf)?;
        }
    }
    emit(global, &String::from_utf8_lossy(&out))
}

fn verdict_kind(kind: Kind) -> VerdictKind {
    match kind {
        Kind::Strong => VerdictKind::Strong,
        Kind::Restricted => VerdictKind::RestrictedWeak,
    }
}

fn region(global: &Global, gammas: Vec<f64>, grid: usize, kind: Kind, csv: Option<&Path>) -> Result<()> {
    let fig = RegionFigure::new(gammas, grid, verdict_kind(kind))?;
    let svg = region_svg(&fig)?;
    emit(global, &svg)?;
    let companion: Option<PathBuf> = csv
        .map(Path::to_path_buf)
        .or_else(|| global.out.as_ref().map(|p| p.with_extension("csv")));
    if let Some(path) = companion {
        std::fs::write(path, region_csv(&fig)?)?;
    }
    Ok(())
}

fn one_gamma(a: &ExperimentArgs, default: f64) -> Result<f64> {
    match a.gamma.as_slice() {
        [] => Ok(default),
        [g] => Ok(*g),
        _ => Err(Error::Parameter("this experiment takes a single --gamma".into())),
    }
}

fn real(v: Option<crate::args::Real>, default: f64) -> f64 {
    v.map_or(default, |r| r.0)
}

fn experiment(global: &Global, tree: TreeParams, a: &ExperimentArgs) -> Result<bool> {
    let seed = global.seed;
    let report: Report = match a.name {
        ExperimentName::Growth => run_growth(
            tree,
            one_gamma(a, 0.5)?,
            real(a.s, 1.0),
            real(a.t, 1.0),
            a.n_max.unwrap_or(48),
        )?,
        ExperimentName::DeltaDivergence => {
            run_delta_divergence(tree, one_gamma(a, 0.5)?, real(a.t, 1.0), a.big_n.unwrap_or(60))?
        }
        ExperimentName::Veca => {
            let vp = VecaParams::new(real(a.s, 2.0), a.beta.unwrap_or(0.75))?;
            let mut run = VecaRun::new(vp, a.big_n.unwrap_or(255));
            run.direct_n = a.direct_n.unwrap_or(run.direct_n);
            run.direct_m = a.direct_m.unwrap_or(run.direct_m);
            run_veca(tree, run)?
        }
        ExperimentName::RadialBounded => run_radial_bounded(
            tree,
            one_gamma(a, 0.75)?,
            real(a.s, f64::INFINITY),
            a.family_size.unwrap_or(124),
            seed,
        )?,
        ExperimentName::RwtProbe => {
            let family: SetFamily = a.family.as_deref().unwrap_or("balls").parse()?;
            run_rwt_probe(
                tree,
                one_gamma(a, 0.5)?,
                real(a.p, 2.0),
                real(a.q, 2.0),
                family,
                a.n_max.unwrap_or(40),
                seed,
            )?
        }
        ExperimentName::Zclass => {
            let gamma = one_gamma(a, 0.5)?;
            let zp = ZClassParams::new(
                a.epsilon.unwrap_or(0.5),
                gamma,
                real(a.p, 1.0 / (1.0 - gamma)),
                real(a.q, 2.0),
            )?;
            run_zclass(tree, zp, a.n_max.unwrap_or(20))?
        }
        ExperimentName::RegionFigure => {
            let gammas = if a.gamma.is_empty() {
                vec![0.25, 0.5, 0.6, 0.75, 1.0, 1.5]
            } else {
                a.gamma.clone()
            };
            region(global, gammas, a.grid.unwrap_or(200), a.kind.unwrap_or(Kind::Strong), a.csv.as_deref())?;
            return Ok(true);
        }
        ExperimentName::Invariants => {
            let mut params = InvariantsParams::default();
            if !a.gamma.is_empty() {
                params.gammas = a.gamma.clone();
            }
            params.big_r = a.radius.unwrap_or(params.big_r);
            params.support = a.support.unwrap_or(params.support);
            params.count = a.count.unwrap_or(params.count);
            run_invariants(tree, &params, seed)?
        }
    };
    let text = if global.json { report.to_json()? + "\n" } else { report.to_csv()? };
    emit(global, &text)?;
    for c in &report.verdicts {
        eprintln!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    Ok(report.passed())
}
