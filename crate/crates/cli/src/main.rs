//! `gbe`: command-line front end.

mod stat;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gbe_core::arith::Rational;
use gbe_core::classical::closed::applicable_forms;
use gbe_core::classical::{
    closed_form_moment, large_n_moment_expansion, recurrence_moments, EnsembleTag,
};
use gbe_core::density::{density_from_resolvent, linear_statistic_mean, QuadConfig};
use gbe_core::loops::{resolvent_from_store, HierarchyStore};
use gbe_core::mc::{estimate_with, Convention, McConfig};
use gbe_core::moments::{moment_polynomial_from, ResolventCoefficients};

#[derive(Parser, Debug)]
#[command(
    name = "gbe",
    version,
    about = "Large-N expansion of the Gaussian beta-ensemble"
)]
struct Cli {
    /// Coupling g; the starred support is (-2√g, 2√g).
    #[arg(long, global = true, env = "GBE_G", default_value = "1/4", value_parser = parse_positive)]
    g: Rational,

    #[arg(long, global = true, env = "GBE_CONVENTION", value_enum, default_value_t = Conv::Starred)]
    convention: Conv,

    #[arg(long, global = true, env = "GBE_FORMAT", value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true, env = "GBE_OUT")]
    out: Option<PathBuf>,

    #[arg(long, global = true, env = "GBE_THREADS", default_value_t = 1,
          value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Conv {
    Starred,
    Unscaled,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resolvent coefficients W_1^0 .. W_1^lmax.
    Resolvent {
        #[arg(long, default_value_t = 2)]
        lmax: usize,
        /// Emit the dependency graph of the solved correlators instead.
        #[arg(long)]
        dag: bool,
    },
    /// Moment polynomial m_2p(N, κ), unscaled.
    Moments {
        #[arg(long)]
        p: usize,
        /// With --kappa, also evaluate at this N.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, value_parser = parse_positive)]
        kappa: Option<Rational>,
    },
    /// Moments of the GUE, GOE or GSE by recurrence and closed forms.
    Classical {
        #[arg(long)]
        ensemble: EnsembleTag,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: usize,
        /// Also emit the large-N expansion of m_2p to this order.
        #[arg(long)]
        expansion: Option<usize>,
    },
    /// Smoothed density correction ρ̃_l.
    Density {
        #[arg(long)]
        l: usize,
    },
    /// Per-order means of a linear statistic.
    Integrate {
        /// poly:K (x^K), cheb:K (T_K), cos:T (cos tx) or exp:T (e^{tx}).
        #[arg(long)]
        stat: stat::StatSpec,
        #[arg(long, default_value_t = 4)]
        lmax: usize,
        #[arg(long, default_value = "1", value_parser = parse_positive)]
        kappa: Rational,
        /// Also sum the series at this N.
        #[arg(long)]
        n: Option<f64>,
    },
    /// Monte-Carlo moments of the tridiagonal model against exact values.
    Mc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        p: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::Golden)]
        suite: verify::Suite,
        /// Highest moment index for the classical suite.
        #[arg(long, default_value_t = 12)]
        pmax: usize,
    },
}

fn parse_positive(s: &str) -> Result<Rational, String> {
    let r: Rational = s.trim().parse().map_err(|e| format!("{e}"))?;
    if r.is_negative() || r.is_zero() {
        return Err(format!("`{s}` must be positive"));
    }
    Ok(r)
}

/// A failure to report: exit code and message.
struct Failure(u8, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(usage(format!(
            "--format {:?} is not available here (use one of {:?})",
            f, allowed
        )))
    }
}

fn envelope(kind: &str, body: Value) -> Value {
    let mut v = json!({ "schema": "gbe/1", "kind": kind });
    if let (Some(o), Value::Object(b)) = (v.as_object_mut(), body) {
        o.extend(b);
    }
    v
}

fn convention(cli: &Cli) -> Convention {
    match cli.convention {
        Conv::Starred => Convention::Starred { g: cli.g.to_f64() },
        Conv::Unscaled => Convention::Unscaled,
    }
}

/// Returns the rendered output and whether every comparison passed.
fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    match &cli.command {
        Command::Resolvent { lmax, dag } => {
            let mut store = HierarchyStore::new();
            let ws =
                resolvent_from_store(&mut store, *lmax).map_err(|e| Failure(2, e.to_string()))?;
            if *dag {
                pick(cli.format, Format::Json, &[Format::Json])?;
                return Ok((pretty(&store.dag_json()), true));
            }
            let text = match pick(
                cli.format,
                Format::Json,
                &[Format::Json, Format::Latex, Format::Text],
            )? {
                Format::Json => pretty(&envelope(
                    "resolvent",
                    json!({ "lmax": lmax, "coefficients": ws.iter().map(|w| w.to_json()).collect::<Vec<_>>() }),
                )),
                Format::Latex => ws
                    .iter()
                    .enumerate()
                    .map(|(l, w)| format!("W_{{1}}^{{{l}}} = {}\n", w.to_latex()))
                    .collect(),
                _ => ws.iter().map(|w| format!("{w}\n")).collect(),
            };
            Ok((text, true))
        }
        Command::Moments { p, n, kappa } => {
            let table = ResolventCoefficients::from_series(*p, *p);
            let m = moment_polynomial_from(*p, &table).map_err(|e| Failure(2, e.to_string()))?;
            let value = match (n, kappa) {
                (Some(n), Some(k)) => Some(m.eval(&Rational::from_int(*n), k)),
                (None, None) => None,
                _ => return Err(usage("--n and --kappa must be given together")),
            };
            let text = match pick(cli.format, Format::Json, &[Format::Json, Format::Latex])? {
                Format::Latex => format!("{}\n", m.to_latex()),
                _ => {
                    let mut v = m.to_json();
                    if let Some(val) = value {
                        v["value"] = json!(val.to_string());
                    }
                    pretty(&v)
                }
            };
            Ok((text, true))
        }
        Command::Classical {
            ensemble,
            n,
            p,
            expansion,
        } => {
            if *n < 1 {
                return Err(usage("--n must be at least 1"));
            }
            let rec = recurrence_moments(*ensemble, *p, &Rational::from_int(*n));
            let mut methods = vec![("recurrence".to_string(), rec[*p].clone())];
            for f in applicable_forms(*ensemble, *n) {
                let v = closed_form_moment(*ensemble, f, *p, *n)
                    .map_err(|e| Failure(2, e.to_string()))?;
                methods.push((format!("{f:?}"), v));
            }
            let agree = methods.iter().all(|(_, v)| *v == rec[*p]);
            let exp = match expansion {
                Some(o) => Some(
                    large_n_moment_expansion(*ensemble, *p, *o)
                        .map_err(|e| Failure(2, e.to_string()))?,
                ),
                None => None,
            };
            let text = match pick(cli.format, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Csv => {
                    let mut s = String::from("method,value\n");
                    for (m, v) in &methods {
                        s.push_str(&format!("{m},{v}\n"));
                    }
                    s
                }
                _ => pretty(&envelope(
                    "classical",
                    json!({
                        "ensemble": ensemble.name(),
                        "n": n,
                        "p": p,
                        "methods": methods.iter().map(|(m, v)| json!({"method": m, "value": v.to_string()})).collect::<Vec<_>>(),
                        "agree": agree,
                        "expansion": exp.map(|c| c.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
                    }),
                )),
            };
            Ok((text, agree))
        }
        Command::Density { l } => {
            let d = density_at(*l)?;
            let text = match pick(cli.format, Format::Json, &[Format::Json, Format::Latex])? {
                Format::Latex => format!("{}\n", d.to_latex()),
                _ => pretty(&d.to_json()),
            };
            Ok((text, true))
        }
        Command::Integrate {
            stat,
            lmax,
            kappa,
            n,
        } => {
            let densities: Vec<_> = (0..=*lmax).map(density_at).collect::<Result<_, _>>()?;
            let s = linear_statistic_mean(
                &stat.statistic(),
                &densities,
                &cli.g,
                kappa,
                &QuadConfig::default(),
            )
            .map_err(|e| Failure(2, e.to_string()))?;
            let exact = |l: usize| s.exact.as_ref().map(|e| e[l].to_string());
            let text = match pick(cli.format, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Csv => {
                    let mut out = String::from("l,value,exact\n");
                    for (l, v) in s.per_order.iter().enumerate() {
                        let v = v + 0.0;
                        out.push_str(&format!("{l},{v},{}\n", exact(l).unwrap_or_default()));
                    }
                    out
                }
                _ => pretty(&envelope(
                    "statistic",
                    json!({
                        "stat": stat.to_string(),
                        "g": cli.g.to_string(),
                        "kappa": kappa.to_string(),
                        "orders": s.per_order.iter().enumerate().map(|(l, v)| json!({
                            "l": l, "value": v + 0.0, "exact": exact(l),
                        })).collect::<Vec<_>>(),
                        "total": n.map(|n| s.at(n)),
                        "n": n,
                    }),
                )),
            };
            Ok((text, true))
        }
        Command::Mc {
            n,
            beta,
            samples,
            p,
            seed,
            stream,
        } => {
            let cfg = McConfig {
                n: *n,
                beta: *beta,
                p_max: *p,
                samples: *samples,
                seed: *seed,
                stream: *stream,
                convention: convention(cli),
                threads: cli.threads as usize,
            };
            let est = estimate_with(&cfg).map_err(|e| usage(format!("mc: {e}")))?;
            let ok = est.iter().all(|e| !e.flagged());
            let text = match pick(cli.format, Format::Csv, &[Format::Csv, Format::Json])? {
                Format::Json => pretty(&envelope(
                    "mc",
                    json!({
                        "n": n, "beta": beta, "samples": samples, "seed": seed,
                        "rows": est.iter().map(|e| json!({
                            "p": e.p, "estimate": e.mean, "stderr": e.stderr, "exact": e.exact, "z": e.z,
                        })).collect::<Vec<_>>(),
                    }),
                )),
                _ => {
                    let mut s = String::from("p,estimate,stderr,exact,z\n");
                    for e in &est {
                        s.push_str(&format!(
                            "{},{},{},{},{:.4}\n",
                            e.p, e.mean, e.stderr, e.exact, e.z
                        ));
                    }
                    s
                }
            };
            Ok((text, ok))
        }
        Command::Verify { suite, pmax } => {
            let report = verify::run(*suite, *pmax, cli.threads as usize);
            let ok = report.passed();
            let text = match pick(cli.format, Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => report.to_text(),
                _ => pretty(&report.to_json()),
            };
            Ok((text, ok))
        }
    }
}

fn density_at(l: usize) -> Result<gbe_core::density::SmoothedDensity, Failure> {
    let mut store = HierarchyStore::new();
    let ws = resolvent_from_store(&mut store, l).map_err(|e| Failure(2, e.to_string()))?;
    density_from_resolvent(&ws[l], l).map_err(|e| Failure(2, e.to_string()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, ok) = match run(&cli) {
        Ok(r) => r,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    let written = match &cli.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| format!("--out {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
