use clap::ValueEnum;
use serde_json::{json, Value};

use gbe_core::arith::rational::{binomial_int, factorial};
use gbe_core::arith::{Rational, Var};
use gbe_core::classical::closed::applicable_forms;
use gbe_core::classical::series::double_factorial_odd;
use gbe_core::classical::{
    closed_form_moment, gse_goe_duality, gue_u_series, harer_zagier, large_n_moment_expansion,
    ode_residual, recurrence_moments, recurrence_moments_symbolic, u_ode_check, EnsembleTag,
};
use gbe_core::density::{density_from_resolvent, polynomial_mean};
use gbe_core::loops::{canonical_check, resolvent_expansion};
use gbe_core::moments::{moment_polynomial_from, ResolventCoefficients};
use gbe_core::reference;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Golden,
    Classical,
    All,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn push(
        &mut self,
        id: impl Into<String>,
        anchor: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            id: id.into(),
            anchor: anchor.into(),
            ok,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "gbe/1",
            "kind": "verification",
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "id": c.id,
                "anchor": c.anchor,
                "status": if c.ok { "pass" } else { "fail" },
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.ok { "PASS" } else { "FAIL" };
            s.push_str(&format!(
                "{status} {:<36} {:<28} {}\n",
                c.id, c.anchor, c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.ok).count();
        s.push_str(&format!(
            "{}: {} checks, {failed} failed\n",
            self.suite,
            self.checks.len()
        ));
        s
    }
}

/// Runs independent jobs on up to `threads` threads; output order follows
/// the job order.
fn par_map<T: Send>(jobs: Vec<Box<dyn FnOnce() -> T + Send + '_>>, threads: usize) -> Vec<T> {
    let threads = threads.max(1);
    let mut slots: Vec<Option<T>> = (0..jobs.len()).map(|_| None).collect();
    let mut jobs: Vec<Option<Box<dyn FnOnce() -> T + Send + '_>>> =
        jobs.into_iter().map(Some).collect();
    std::thread::scope(|scope| {
        let per = jobs.len().div_ceil(threads).max(1);
        for (js, out) in jobs.chunks_mut(per).zip(slots.chunks_mut(per)) {
            scope.spawn(move || {
                for (j, o) in js.iter_mut().zip(out.iter_mut()) {
                    *o = Some((j.take().expect("each job runs once"))());
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("job finished"))
        .collect()
}

type Job<'a> = Box<dyn FnOnce() -> VerificationReport + Send + 'a>;

pub fn run(suite: Suite, pmax: usize, threads: usize) -> VerificationReport {
    let jobs: Vec<Job> = match suite {
        Suite::Golden => golden_jobs(pmax),
        Suite::Classical => classical_jobs(pmax),
        Suite::All => golden_jobs(pmax)
            .into_iter()
            .chain(classical_jobs(pmax))
            .collect(),
    };
    let mut out = VerificationReport {
        suite: format!("{suite:?}").to_lowercase(),
        checks: Vec::new(),
    };
    for r in par_map(jobs, threads) {
        out.checks.extend(r.checks);
    }
    out
}

fn golden_jobs(pmax: usize) -> Vec<Job<'static>> {
    vec![
        Box::new(golden_resolvent_and_density),
        Box::new(golden_moments),
        Box::new(move || triple_agreement(pmax)),
    ]
}

fn golden_resolvent_and_density() -> VerificationReport {
    let mut r = VerificationReport::default();
    let ws = match resolvent_expansion(6) {
        Ok(ws) => ws,
        Err(e) => {
            r.push("resolvent", "W_1^0..W_1^6", false, e.to_string());
            return r;
        }
    };
    for (l, w) in ws.iter().enumerate() {
        r.push(
            format!("resolvent/W1^{l}"),
            format!("W_1^{l} closed form"),
            *w == reference::resolvent(l),
            "exact",
        );
        let s = canonical_check(w, l);
        let detail = s
            .failures()
            .iter()
            .map(|f| format!("{}: {}", f.0, f.2))
            .collect::<Vec<_>>()
            .join("; ");
        r.push(
            format!("structure/W1^{l}"),
            "block structure of W_1^l",
            s.passed(),
            detail,
        );
    }
    for (l, w) in ws.iter().enumerate() {
        match density_from_resolvent(w, l) {
            Ok(d) => {
                let detail = if reference::DENSITY_ERRATA.iter().any(|e| e.0 == l) {
                    "exact, with the corrected sign of the h^3 epsilon^(3) coefficient"
                } else {
                    "exact"
                };
                r.push(
                    format!("density/rho{l}"),
                    format!("rho_{l}"),
                    d == reference::density(l),
                    detail,
                );
                if l >= 1 {
                    let bad: Vec<u32> = (0..l as u32)
                        .filter(|s| !polynomial_mean(&d, 2 * s).is_zero())
                        .collect();
                    r.push(
                        format!("density/rho{l}/moment-identity"),
                        format!("moments of rho_{l} below x^{}", 2 * l),
                        bad.is_empty(),
                        if bad.is_empty() {
                            String::new()
                        } else {
                            format!("nonzero at 2σ in {bad:?}")
                        },
                    );
                }
            }
            Err(e) => r.push(
                format!("density/rho{l}"),
                format!("rho_{l}"),
                false,
                e.to_string(),
            ),
        }
    }
    r
}

fn golden_moments() -> VerificationReport {
    let mut r = VerificationReport::default();
    let top = reference::MOMENTS.len() - 1;
    let table = ResolventCoefficients::from_series(top, top);
    for p in 0..=top {
        let ok = moment_polynomial_from(p, &table).map(|m| m == reference::moment(p));
        r.push(
            format!("moments/m{}", 2 * p),
            format!("m_{}", 2 * p),
            ok.as_ref().copied().unwrap_or(false),
            ok.err()
                .map(|e| e.to_string())
                .unwrap_or_else(|| "exact".into()),
        );
    }
    r
}

fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Recurrence = closed forms = general-β moments at the ensemble's κ.
fn triple_agreement(pmax: usize) -> VerificationReport {
    let mut r = VerificationReport::default();
    let table = ResolventCoefficients::from_series(pmax, pmax);
    let general: Vec<_> = (0..=pmax)
        .map(|p| moment_polynomial_from(p, &table).expect("table covers pmax"))
        .collect();
    for e in EnsembleTag::ALL {
        for n in 1..=8i64 {
            let rec = recurrence_moments(e, pmax, &int(n));
            let mut bad = Vec::new();
            for p in 0..=pmax {
                if general[p].eval(&int(n), &e.kappa()) != rec[p] {
                    bad.push(format!("general-beta p={p}"));
                }
                for f in applicable_forms(e, n) {
                    if closed_form_moment(e, f, p, n).ok().as_ref() != Some(&rec[p]) {
                        bad.push(format!("{f:?} p={p}"));
                    }
                }
            }
            r.push(
                format!("classical/{}/N{n}/triple", e.name()),
                format!("{} moments, p <= {pmax}", e.name()),
                bad.is_empty(),
                bad.join(", "),
            );
        }
    }
    r
}

fn classical_jobs(pmax: usize) -> Vec<Job<'static>> {
    vec![
        Box::new(move || triple_agreement(pmax)),
        Box::new(generating_functions),
        Box::new(resolvent_odes),
        Box::new(move || expansions_and_duality(pmax)),
    ]
}

fn generating_functions() -> VerificationReport {
    let mut r = VerificationReport::default();
    for n in 1..=8u32 {
        let rec = recurrence_moments(EnsembleTag::Gue, 20, &int(n as i64));
        let hz = harer_zagier(20, n);
        let u = gue_u_series(20, &int(n as i64));
        let hz_ok = (0..=20).all(|p| &hz[p] * &double_factorial_odd(p) == rec[p]);
        let u_ok = (0..=20).all(|p| &u[p] * &Rational::from(factorial(2 * p as u32)) == rec[p]);
        r.push(
            format!("classical/GUE/N{n}/harer-zagier"),
            "Harer-Zagier generating function",
            hz_ok,
            "p <= 20",
        );
        r.push(
            format!("classical/GUE/N{n}/1F1"),
            "confluent hypergeometric series",
            u_ok,
            "p <= 20",
        );
    }
    for e in EnsembleTag::ALL {
        for n in 1..=6i64 {
            r.push(
                format!("classical/{}/N{n}/u-ode", e.name()),
                format!("{} exponential generating function ODE", e.name()),
                u_ode_check(e, 10, &int(n)),
                "through t^20",
            );
        }
    }
    r
}

fn resolvent_odes() -> VerificationReport {
    let mut r = VerificationReport::default();
    let ws = match resolvent_expansion(6) {
        Ok(ws) => ws,
        Err(e) => {
            r.push(
                "classical/resolvent-ode",
                "resolvent ODEs",
                false,
                e.to_string(),
            );
            return r;
        }
    };
    for e in EnsembleTag::ALL {
        let want = if e == EnsembleTag::Gue { 8 } else { 7 };
        let rep = ode_residual(e, &ws);
        r.push(
            format!("classical/{}/resolvent-ode", e.name()),
            format!("{} resolvent ODE", e.name()),
            rep.first_nonzero.is_none_or(|j| j >= want),
            format!(
                "first nonzero order {:?}, expected >= {want}",
                rep.first_nonzero
            ),
        );
    }
    r
}

fn expansions_and_duality(pmax: usize) -> VerificationReport {
    let mut r = VerificationReport::default();
    for e in EnsembleTag::ALL {
        let sym = recurrence_moments_symbolic(e, pmax);
        let mut bad = Vec::new();
        for (p, m) in sym.iter().enumerate() {
            let ex = match large_n_moment_expansion(e, p, 6) {
                Ok(ex) => ex,
                Err(err) => {
                    bad.push(format!("p={p}: {err}"));
                    continue;
                }
            };
            let cp = binomial_int(2 * p as i64, p as i64) / int(p as i64 + 1);
            let by_n = m.coeffs_in(Var::N);
            for (j, c) in ex.iter().enumerate() {
                let deg = p as i64 + 1 - j as i64;
                let mut want = if deg >= 0 && (deg as usize) < by_n.len() {
                    by_n[deg as usize].constant_term()
                } else {
                    Rational::zero()
                };
                if e == EnsembleTag::Gue {
                    want = want / cp.clone();
                }
                if *c != want {
                    bad.push(format!("p={p} N^-{j}"));
                }
            }
        }
        r.push(
            format!("classical/{}/large-n", e.name()),
            format!("{} large-N expansion", e.name()),
            bad.is_empty(),
            bad.join(", "),
        );
    }
    let bad: Vec<usize> = (0..=pmax.min(10))
        .filter(|&p| !gse_goe_duality(p))
        .collect();
    let detail = if bad.is_empty() {
        String::new()
    } else {
        format!("failing p: {bad:?}")
    };
    r.push(
        "classical/gse-goe-duality",
        "GSE-GOE duality",
        bad.is_empty(),
        detail,
    );
    r
}
