//! Large-N coefficients of the classical moments and the GOE ↔ GSE duality.

use crate::arith::{MultiPoly, Rational, Var};
use crate::error::ClassicalError;
use crate::moments::gamma_ratio;

use super::recurrence::recurrence_moments_symbolic;
use super::EnsembleTag;

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

fn two(e: i64) -> Rational {
    r(2).pow(e as i32)
}

fn catalan(p: i64) -> Rational {
    crate::arith::rational::binomial_int(2 * p, p) / r(p + 1)
}

/// `[c_0, …, c_order]` with `m_{2p}/(C_p N^{p+1}) = Σ c_j N^{-j}` for the
/// GUE and `m_{2p}/N^{p+1} = Σ c_j N^{-j}` for the GOE and GSE.
pub fn large_n_moment_expansion(
    e: EnsembleTag,
    p: usize,
    order: usize,
) -> Result<Vec<Rational>, ClassicalError> {
    if order > 6 {
        return Err(ClassicalError::Domain(format!(
            "closed forms are known through N^-6, asked for N^-{order}"
        )));
    }
    let pi = p as i64;
    let ff = |k: i64| -> Rational { (0..k).map(|i| r(pi - i)).product() };
    let out: Vec<Rational> = match e {
        EnsembleTag::Gue => {
            vec![
                Rational::one(),
                Rational::zero(),
                r(pi + 1) * ff(2) / r(12),
                Rational::zero(),
                r(pi + 1) * ff(4) * r(5 * pi - 2) / r(1440),
                Rational::zero(),
                r(pi + 1) * ff(6) * r(35 * pi * pi - 77 * pi + 12) / r(362880),
            ]
        }
        EnsembleTag::Goe | EnsembleTag::Gse => {
            let g = gamma_ratio(p);
            // the two ensembles share the brackets, up to sign at odd orders
            let pre: [Rational; 6] = if e == EnsembleTag::Goe {
                [
                    two(2 * pi - 1),
                    r(4).pow(pi as i32 - 1) / r(3),
                    r(4).pow(pi as i32 - 2) / r(3),
                    two(2 * pi - 5) / r(45),
                    r(4).pow(pi as i32 - 4) / r(45),
                    two(2 * pi - 9) / r(2835),
                ]
            } else {
                [
                    r(4).pow(pi as i32 - 1),
                    r(4).pow(pi as i32 - 2) / r(3),
                    two(2 * pi - 7) / r(3),
                    two(2 * pi - 9) / r(45),
                    two(2 * pi - 13) / r(45),
                    two(2 * pi - 15) / r(2835),
                ]
            };
            let brackets = [
                // [1 − Γ]
                (r(1), r(-1)),
                // [−3 + (7p−1)Γ]
                (r(-3), r(7 * pi - 1)),
                // [8p − 7 − (14p − 4)Γ]
                (r(8 * pi - 7), r(-(14 * pi - 4))),
                // [−15(8p − 9) + (185p² − 317p + 6)Γ]
                (r(-15 * (8 * pi - 9)), r(185 * pi * pi - 317 * pi + 6)),
                // [320p² − 1008p + 487 − 4(185p² − 387p + 28)Γ]
                (
                    r(320 * pi * pi - 1008 * pi + 487),
                    r(-4 * (185 * pi * pi - 387 * pi + 28)),
                ),
                // [−63(320p² − 1168p + 675) + 4(6209p³ − 29106p² + 26605p − 60)Γ]
                (
                    r(-63 * (320 * pi * pi - 1168 * pi + 675)),
                    r(4 * (6209 * pi * pi * pi - 29106 * pi * pi + 26605 * pi - 60)),
                ),
            ];
            let mut v = vec![catalan(pi)];
            for j in 0..6 {
                let (a, b) = &brackets[j];
                let mut bracket = a + &(b * &g);
                if e == EnsembleTag::Gse && j % 2 == 0 {
                    bracket = -bracket;
                }
                v.push(&pre[j] * &(ff(j as i64) * bracket));
            }
            v
        }
    };
    Ok(out[..=order].to_vec())
}

/// `m_{2p}(N, 2) = (−1)^{p+1} 2^{−p−1} m_{2p}(−2N, 1/2)` for the given
/// symbolic GSE and GOE moments.
pub fn duality_holds(gse: &MultiPoly, goe: &MultiPoly, p: usize) -> bool {
    let sign = if (p + 1) % 2 == 0 { 1 } else { -1 };
    let minus_2n = MultiPoly::var(Var::N).scale(&r(-2));
    let image = goe
        .substitute(Var::N, &minus_2n)
        .scale(&(r(sign) * two(-(p as i64) - 1)));
    &image == gse
}

/// The duality checked on the recurrence outputs.
pub fn gse_goe_duality(p: usize) -> bool {
    let gse = recurrence_moments_symbolic(EnsembleTag::Gse, p);
    let goe = recurrence_moments_symbolic(EnsembleTag::Goe, p);
    duality_holds(&gse[p], &goe[p], p)
}
