//! The conjectured shape of `W_1^l`: h-blocks over `y^{3l−2}` and
//! `y^{3l−1}` with fixed numerator degrees and parities.

use std::collections::BTreeMap;

use crate::arith::{MultiPoly, X};
use crate::moments::StructureReport;
use crate::spectral::expr::y_squared;
use crate::spectral::SpectralExpr;

/// Expected `deg_x` of the numerator of `h^a` over `y^σ`, or `None` when
/// the slot is empty.
fn expected_degree(l: usize, a: usize, sigma: i32) -> Option<u32> {
    let lo = 3 * l as i32 - 2;
    if l % 2 == 0 && a == 0 {
        return (sigma == lo + 1).then_some(l as u32 - 2);
    }
    if sigma == lo {
        Some(l as u32 - 1)
    } else {
        Some(l as u32)
    }
}

fn parity_ok(p: &MultiPoly, deg: u32) -> bool {
    p.terms()
        .iter()
        .all(|(m, _)| (m.exp(X) as u32 + deg) % 2 == 0)
}

/// Checks a computed `W_1^l` against the conjectured block structure and its
/// `x^{−2l−1}` decay. Violations are reported, not raised.
pub fn canonical_check(w: &SpectralExpr, l: usize) -> StructureReport {
    let mut r = StructureReport::default();
    if l == 0 {
        let base: SpectralExpr = "(x - y)/2".parse().expect("literal");
        r.push("base", *w == base, format!("{w}"));
        return r;
    }
    let lo = 3 * l as i32 - 2;
    // lift every (h-power, σ) block to the σ of its parity class
    let mut blocks: BTreeMap<(usize, i32), MultiPoly> = BTreeMap::new();
    for ((a, s), p) in w.h_blocks() {
        let a = a as usize;
        r.push(
            format!("h^{a} allowed"),
            a <= l && (l - a) % 2 == 0,
            format!("h-power {a} at order {l}"),
        );
        let target = if s.rem_euclid(2) == lo.rem_euclid(2) {
            lo
        } else {
            lo + 1
        };
        if s > target {
            r.push(
                format!("h^{a} y^-{s}"),
                false,
                format!("exponent {s} exceeds {target}"),
            );
            continue;
        }
        let lifted = &p * &y_squared(X).pow(((target - s) / 2) as u32);
        blocks.insert((a, target), lifted);
    }
    for a in (l % 2..=l).step_by(2) {
        for sigma in [lo, lo + 1] {
            let id = format!("h^{a} y^-{sigma}");
            let want = expected_degree(l, a, sigma);
            match (blocks.get(&(a, sigma)), want) {
                (None, None) => {}
                (Some(p), None) => r.push(id, false, format!("unexpected numerator {p}")),
                (None, Some(d)) => r.push(id, false, format!("missing numerator of degree {d}")),
                (Some(p), Some(d)) => {
                    let got = p.degree(X).unwrap_or(0) as u32;
                    r.push(
                        id.clone() + " degree",
                        got == d,
                        format!("deg_x = {got}, expected {d}"),
                    );
                    r.push(id + " parity", parity_ok(p, d), format!("{p}"));
                }
            }
        }
    }
    let s = w.series_at_infinity(2 * l as i32 + 1);
    let early = (-1..2 * l as i32 + 1).find(|&k| !s.coeff(k).is_zero());
    r.push(
        "leading x^-(2l+1)",
        early.is_none() && !s.coeff(2 * l as i32 + 1).is_zero(),
        match early {
            Some(k) => format!("nonzero coefficient of x^-{k}"),
            None => "ok".into(),
        },
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_decay_is_reported() {
        let w: SpectralExpr = "h/y".parse().unwrap();
        let r = canonical_check(&w, 1);
        assert!(!r.passed());
        assert!(r.failures().iter().any(|f| f.0 == "leading x^-(2l+1)"));
    }
}
