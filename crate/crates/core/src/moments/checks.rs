use std::collections::BTreeMap;

use crate::arith::rational::factorial;
use crate::arith::{MultiPoly, Rational, Var};
use crate::error::MomentError;

use super::MomentPoly;

/// Named pass/fail findings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub checks: Vec<(String, bool, String)>,
}

impl StructureReport {
    pub fn push(&mut self, id: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push((id.into(), ok, detail.into()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    pub fn failures(&self) -> Vec<&(String, bool, String)> {
        self.checks.iter().filter(|c| !c.1).collect()
    }
}

/// `m_{2p}(N, κ) = (-1)^{p+1} κ^{-p-1} m_{2p}(-κN, 1/κ)`; on coefficients
/// `N^a k^b ↦ (-1)^{a+p+1} N^a k^{p+1-a-b}`.
pub fn check_duality(m: &MomentPoly) -> bool {
    let p = m.p() as i64;
    let mut image = BTreeMap::new();
    for (&(a, b), c) in m.coeffs() {
        let nb = p + 1 - a as i64 - b as i64;
        if nb < 0 {
            return false;
        }
        let c = if (a as i64 + p + 1) % 2 == 0 {
            c.clone()
        } else {
            -c
        };
        image.insert((a, nb as u32), c);
    }
    &image == m.coeffs()
}

fn catalan(p: usize) -> Rational {
    Rational::from_big(
        factorial(2 * p as u32),
        factorial(p as u32) * factorial(p as u32 + 1),
    )
}

pub fn check_structure(m: &MomentPoly) -> StructureReport {
    let p = m.p() as u32;
    let mut r = StructureReport::default();
    r.push(
        "degree",
        m.degree_n() == Some(p + 1),
        format!("deg_N = {:?}, expected {}", m.degree_n(), p + 1),
    );
    r.push(
        "tail",
        m.n_coefficient(0).iter().all(|c| c.is_zero()),
        "coefficient of N^0 vanishes",
    );
    let lead = m.n_coefficient(p + 1);
    r.push(
        "catalan",
        lead.len() == 1 && lead[0] == catalan(p as usize),
        format!("leading {:?}, C_{p} = {}", lead, catalan(p as usize)),
    );
    for a in 1..=p {
        let d = (p + 1 - a) as usize;
        let poly = m.n_coefficient(a);
        r.push(
            format!("k-degree N^{a}"),
            poly.len() <= d + 1,
            format!(
                "degree {} in 1/kappa, expected at most {d}",
                poly.len().saturating_sub(1)
            ),
        );
        let at = |b: usize| poly.get(b).cloned().unwrap_or_else(Rational::zero);
        // numerator in κ is Σ c_b κ^{d-b}
        let (kind, ok) = if d % 2 == 0 {
            ("palindromic", (0..=d).all(|b| at(b) == at(d - b)))
        } else {
            ("anti-palindromic", (0..=d).all(|b| at(b) == -at(d - b)))
        };
        r.push(format!("{kind} N^{a}"), ok, format!("{poly:?}"));
        if d % 2 == 1 {
            let s: Rational = (0..=d).map(at).sum();
            r.push(
                format!("kappa-1 factor N^{a}"),
                s.is_zero(),
                format!("numerator at kappa=1 is {s}"),
            );
        }
    }
    r
}

/// `Γ(l + 1/2) / (√π Γ(l + 1)) = (2l)! / (4^l (l!)²)`.
pub fn gamma_ratio(l: usize) -> Rational {
    let f = factorial(l as u32);
    Rational::from_big(factorial(2 * l as u32), &f * &f) / Rational::from_int(4).pow(l as i32)
}

/// Closed form for the coefficient of `κ^{-depth/2} N^{l+1-depth}` in
/// `m_{2l}` before `h` is expanded, as a polynomial in `h`.
pub fn subleading_closed_form(l: usize, depth: usize) -> Result<MultiPoly, MomentError> {
    if !(1..=6).contains(&depth) || l < depth {
        return Err(MomentError::Domain(format!(
            "closed form at depth {depth} needs 1 <= depth <= 6 and l >= depth, got l = {l}"
        )));
    }
    let li = l as i64;
    let q = |n: i64, d: i64| Rational::new(n, d);
    let two = |e: i64| Rational::from_int(2).pow(e as i32);
    let four = |e: i64| Rational::from_int(4).pow(e as i32);
    let lr = Rational::from_int(li);
    let g = gamma_ratio(l);
    // l (l-1) … (l-k+1)
    let fall = |k: i64| -> Rational { (0..k).map(|j| Rational::from_int(li - j)).product() };
    let poly = |v: i64| Rational::from_int(v);
    let terms: Vec<(u16, Rational)> = match depth {
        1 => vec![(1, two(2 * li - 1) * (&g - &Rational::one()))],
        2 => vec![
            (
                2,
                q(1, 3)
                    * four(li - 1)
                    * lr.clone()
                    * (&(Rational::from_int(5 * li + 1) * &g) - &poly(3)),
            ),
            (0, q(1, 3) * four(li - 1) * fall(2) * g.clone()),
        ],
        3 => vec![
            (
                3,
                q(5, 3) * four(li - 3) * lr.clone() * fall(2) * (&(poly(8) * &g) - &poly(3)),
            ),
            (
                1,
                q(1, 3)
                    * two(2 * li - 7)
                    * fall(2)
                    * (&poly(28 - 17 * li) + &(Rational::from_int(16 * (li - 1)) * &g)),
            ),
        ],
        4 => vec![
            (
                4,
                two(2 * li - 7)
                    * fall(3)
                    * (&q(8 - 15 * li, 3) + &(q(4 * (1105 * li * li - 193 * li - 42), 945) * &g)),
            ),
            (
                2,
                four(li - 4)
                    * fall(3)
                    * (&q(28 - 17 * li, 3) + &(q(16 * (590 * li * li - 1259 * li - 84), 945) * &g)),
            ),
            (0, two(2 * li - 5) * fall(4) * q(5 * li - 2, 45) * g.clone()),
        ],
        5 => vec![
            (
                5,
                two(2 * li - 13)
                    * lr.clone()
                    * fall(4)
                    * (&q(99 - 113 * li, 3) + &(q(128 * (1105 * li - 1243), 945) * &g)),
            ),
            (
                3,
                four(li - 7)
                    * fall(4)
                    * (&q(-(5677 * li * li - 17271 * li + 4952), 45)
                        + &(q(302080 * li * li - 698368 * li + 10752, 945) * &g)),
            ),
            (
                1,
                two(2 * li - 13)
                    * fall(4)
                    * (&q(-(li - 1) * (239 * li - 886), 15)
                        + &(q(128 * (li - 3) * (5 * li - 2), 45) * &g)),
            ),
        ],
        _ => {
            let l2 = li * li;
            let l3 = l2 * li;
            vec![
                (
                    6,
                    four(li - 7)
                        * fall(5)
                        * (&q(-(565 * l2 - 1295 * li + 512), 15)
                            + &(q(128 * (82825 * l3 - 135690 * l2 + 8081 * li + 1716), 405405)
                                * &g)),
                ),
                (
                    4,
                    two(2 * li - 15)
                        * fall(5)
                        * (&q(-(5677 * l2 - 19991 * li + 9432), 45)
                            + &(q(256 * (5929 * l3 - 23320 * l2 + 12861 * li + 312), 12285) * &g)),
                ),
                (
                    2,
                    four(li - 7)
                        * fall(5)
                        * (&q(-(li - 1) * (239 * li - 886), 15)
                            + &(q(
                                128 * (93427 * l3 - 549765 * l2 + 623360 * li + 9438),
                                405405,
                            ) * &g)),
                ),
                (
                    0,
                    two(2 * li - 7) * fall(6) * q(35 * l2 - 77 * li + 12, 2835) * g.clone(),
                ),
            ]
        }
    };
    Ok(terms
        .into_iter()
        .map(|(e, c)| MultiPoly::var_pow(Var::H, e).scale(&c))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_ratio_values() {
        assert_eq!(gamma_ratio(0), Rational::one());
        assert_eq!(gamma_ratio(1), Rational::new(1, 2));
        assert_eq!(gamma_ratio(3), Rational::new(5, 16));
    }

    #[test]
    fn first_depth_is_a000346() {
        // 2^{2l-1} (1 - Γ-ratio) = 1, 5, 22, 93, 386 (up to sign)
        let want = [1, 5, 22, 93, 386];
        for (i, w) in want.iter().enumerate() {
            let c = subleading_closed_form(i + 1, 1).unwrap();
            assert_eq!(c, MultiPoly::var(Var::H).scale(&Rational::from_int(-w)));
        }
    }

    #[test]
    fn below_threshold_is_rejected() {
        assert!(subleading_closed_form(2, 3).is_err());
        assert!(subleading_closed_form(7, 7).is_err());
    }
}
