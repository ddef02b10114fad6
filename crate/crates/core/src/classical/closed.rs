//! Finite-sum evaluations of the classical moments.
//!
//! Half-integer Pochhammer symbols are carried as a rational times a power
//! of `√π`; every evaluation must end with the `√π` powers cancelled.

use std::collections::BTreeMap;

use crate::arith::rational::{binomial_int, factorial, gamma_half_over_sqrt_pi};
use crate::arith::Rational;
use crate::error::ClassicalError;

use super::recurrence::recurrence_moments;
use super::EnsembleTag;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// GUE, `₂F₁` sum.
    Mehta,
    /// GUE (both parities), GOE (even N), GSE.
    MezzadriSimm,
    /// GOE, generalized binomial double sum.
    GouldenJackson,
}

impl std::str::FromStr for ClosedForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "mehta" => Ok(ClosedForm::Mehta),
            "mezzadrisimm" | "ms" => Ok(ClosedForm::MezzadriSimm),
            "gouldenjackson" | "gj" => Ok(ClosedForm::GouldenJackson),
            _ => Err(format!("unknown closed form `{s}`")),
        }
    }
}

/// `Σ_k c_k (√π)^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SqrtPiRational(BTreeMap<i32, Rational>);

impl SqrtPiRational {
    pub fn rational(c: Rational) -> Self {
        Self::tagged(c, 0)
    }

    pub fn tagged(c: Rational, sqrt_pi_power: i32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(sqrt_pi_power, c);
        }
        SqrtPiRational(m)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, v) in &o.0 {
            let e = m.entry(*k).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                m.remove(k);
            }
        }
        SqrtPiRational(m)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = SqrtPiRational::default();
        for (a, u) in &self.0 {
            for (b, v) in &o.0 {
                out = out.add(&Self::tagged(u * v, a + b));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = SqrtPiRational::default();
        for (k, v) in &self.0 {
            out = out.add(&Self::tagged(v * c, *k));
        }
        out
    }

    /// The value, provided no `√π` survives.
    pub fn into_rational(self) -> Result<Rational, ClassicalError> {
        match self.0.iter().find(|(k, _)| **k != 0) {
            Some((k, _)) => Err(ClassicalError::SqrtPiResidue(*k)),
            None => Ok(self.0.get(&0).cloned().unwrap_or_else(Rational::zero)),
        }
    }
}

/// `Γ(n)` for a positive integer `n`.
fn gamma_int(n: i64) -> Rational {
    assert!(n >= 1, "Γ({n}) is not a positive-integer value");
    factorial(n as u32 - 1).into()
}

/// `Γ(n + 1/2)` for any integer `n`.
fn gamma_half(n: i64) -> SqrtPiRational {
    SqrtPiRational::tagged(gamma_half_over_sqrt_pi(n), 1)
}

/// `(a)_{q + 1/2} = Γ(a + q + 1/2) / Γ(a)` for integers `a ≥ 1`, `a + q ≥ 0`.
fn pochhammer_half(a: i64, q: i64) -> SqrtPiRational {
    gamma_half(a + q).scale(&gamma_int(a).recip())
}

/// Rising factorial `(a)_j` of a rational.
fn rising(a: &Rational, j: i64) -> Rational {
    (0..j).map(|i| a + &Rational::from_int(i)).product()
}

fn two(e: i64) -> Rational {
    Rational::from_int(2).pow(e as i32)
}

fn fact(n: i64) -> Rational {
    factorial(n as u32).into()
}

fn gue_recurrence(p: usize, n: i64) -> Rational {
    recurrence_moments(EnsembleTag::Gue, p, &Rational::from_int(n))[p].clone()
}

/// `m_{2p}(N, κ)` at the ensemble's κ via the named finite sum.
pub fn closed_form_moment(
    e: EnsembleTag,
    method: ClosedForm,
    p: usize,
    n: i64,
) -> Result<Rational, ClassicalError> {
    if n < 1 {
        return Err(ClassicalError::Domain(format!(
            "N must be positive, got {n}"
        )));
    }
    let pi = p as i64;
    match (e, method) {
        (EnsembleTag::Gue, ClosedForm::Mehta) => Ok(mehta(pi, n)),
        (EnsembleTag::Gue, ClosedForm::MezzadriSimm) => gue_ms(pi, n),
        (EnsembleTag::Goe, ClosedForm::GouldenJackson) => Ok(goe_gj(pi, n)),
        (EnsembleTag::Goe, ClosedForm::MezzadriSimm) => {
            if n % 2 != 0 {
                return Err(ClassicalError::ParityUnsupported {
                    method: "Mezzadri-Simm GOE sum",
                    requirement: "even N",
                });
            }
            goe_ms(pi, n)
        }
        (EnsembleTag::Gse, ClosedForm::MezzadriSimm) => gse_ms(pi, n),
        _ => Err(ClassicalError::MethodUnsupported {
            method: match method {
                ClosedForm::Mehta => "Mehta",
                ClosedForm::MezzadriSimm => "Mezzadri-Simm",
                ClosedForm::GouldenJackson => "Goulden-Jackson",
            },
            ensemble: e.name(),
        }),
    }
}

/// Every closed form that applies to `(e, N)`.
pub fn applicable_forms(e: EnsembleTag, n: i64) -> Vec<ClosedForm> {
    match e {
        EnsembleTag::Gue => vec![ClosedForm::Mehta, ClosedForm::MezzadriSimm],
        EnsembleTag::Goe if n % 2 == 0 => {
            vec![ClosedForm::GouldenJackson, ClosedForm::MezzadriSimm]
        }
        EnsembleTag::Goe => vec![ClosedForm::GouldenJackson],
        EnsembleTag::Gse => vec![ClosedForm::MezzadriSimm],
    }
}

fn mehta(p: i64, n: i64) -> Rational {
    let pre = fact(2 * p) / (two(p) * fact(p));
    let s: Rational = (0..=p)
        .map(|j| binomial_int(p, j) * binomial_int(n, j + 1) * two(j))
        .sum();
    pre * s
}

fn gue_ms(p: i64, n: i64) -> Result<Rational, ClassicalError> {
    let mut sum = SqrtPiRational::default();
    let pre = if n % 2 == 0 {
        let h = n / 2;
        for j in 0..=(h - 1).min(p) {
            let c = binomial_int(p, j) * binomial_int(p + 1, j + 1);
            sum = sum.add(&pochhammer_half(h - j, p).scale(&c));
        }
        two(n + p) * gamma_int(h + 1) * gamma_int(h)
    } else {
        let h = (n + 1) / 2;
        for j in 0..=((n - 1) / 2).min(p) {
            let c = binomial_int(p, j) * binomial_int(p + 1, j);
            sum = sum.add(&pochhammer_half(h - j, p).scale(&c));
        }
        let gh = gamma_int(h);
        two(n + p) * &gh * gh
    };
    let pre = pre / (Rational::from_int(2 * p + 1) * gamma_int(n));
    sum.mul(&SqrtPiRational::tagged(pre, -1)).into_rational()
}

fn goe_gj(p: i64, n: i64) -> Rational {
    let half_n1 = Rational::new(n - 1, 2);
    let top = Rational::new(2 * p - 1, 2);
    let mut s = Rational::zero();
    for i in 0..=p {
        for j in 0..=p {
            let b = Rational::binomial(&top, (p - j) as u32)
                * Rational::binomial(&Rational::from_int(i + j - 1), i as u32)
                * Rational::binomial(&half_n1, j as u32);
            s += two(2 * p - i) * b;
        }
    }
    gue_recurrence(p as usize, n - 1) + fact(p) * s
}

/// `(a)_{p+1/2} / (b)_{1/2}` with `a = b − i`, continued to `b ≤ 0`, where
/// `Γ(b)/Γ(a)` is a ratio of residues `(−1)^i (−a)!/(−b)!`.
fn goe_ms_ratio(b: i64, i: i64, p: i64) -> SqrtPiRational {
    let a = b - i;
    let gammas = gamma_half(a + p).mul(&gamma_half(b).into_inverse());
    if b >= 1 {
        if a <= 0 {
            return SqrtPiRational::default();
        }
        return gammas.scale(&(gamma_int(b) / gamma_int(a)));
    }
    let sign = if i % 2 == 0 { 1 } else { -1 };
    gammas.scale(&(Rational::from_int(sign) * fact(-a) / fact(-b)))
}

/// `Σ_{j ≥ 1} Σ_i C(p,i) C(p,i+j) (N/2−i−j)_{p+1/2} / (N/2−j)_{1/2}` over
/// `j ≤ j_max`, `i ≤ p`; terms with `N/2 − i − j ≤ 0 < N/2 − j` vanish.
fn goe_ms_sum(
    p: i64,
    n: i64,
    j_range: std::ops::RangeInclusive<i64>,
) -> Result<Rational, ClassicalError> {
    let h = n / 2;
    let mut sum = SqrtPiRational::default();
    for j in j_range {
        for i in 0..=p {
            let c = binomial_int(p, i) * binomial_int(p, i + j);
            sum = sum.add(&goe_ms_ratio(h - j, i, p).scale(&c));
        }
    }
    sum.into_rational()
}

fn goe_ms(p: i64, n: i64) -> Result<Rational, ClassicalError> {
    let h = n / 2;
    let sum = goe_ms_sum(p, n, 1..=(h - 1).min(p))?;
    Ok(gue_recurrence(p as usize, n - 1) - two(p) * sum + goe_phi(p, n)?)
}

/// `φ_p(N)`. For `N ≤ 2p` this is the `N > 2p` expression plus the
/// continued terms `j ≥ N/2` that the truncated double sum omits.
fn goe_phi(p: i64, n: i64) -> Result<Rational, ClassicalError> {
    let h = n / 2;
    let base = Rational::new(n + 1, 2);
    let s: Rational = (0..=p)
        .map(|j| {
            rising(&(&base - &Rational::from_int(j)), j) * two(3 * j) / (fact(2 * j) * fact(p - j))
        })
        .sum();
    let large = fact(2 * p) * s;
    if n > 2 * p {
        return Ok(large);
    }
    Ok(large - two(p) * goe_ms_sum(p, n, h..=p)?)
}

/// The `N ≤ 2p` branch of `φ_p(N)` in its two-double-sum form as
/// published; it does not reproduce the GOE moments and is kept for the
/// record.
pub fn goe_phi_literal(p: i64, n: i64) -> Rational {
    let h = n / 2;
    let gh = gamma_int(h);
    let mut a = Rational::zero();
    for j in 0..=(p - h) {
        for i in 0..h {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            a += binomial_int(n - 1, 2 * j) * Rational::from_int(sign) * two(-j - 2 * i)
                / (fact(2 * j + 2 * i + 1) * fact(p - h - j));
        }
    }
    let mut b = Rational::zero();
    for j in 0..h {
        for i in 0..=j {
            b += fact(h - i - 1) / (fact(j - i) * fact(p - j) * two(p - 2 * j))
                * binomial_int(n - 1, n - 2 * i - 1);
        }
    }
    fact(2 * p) * (two(h) * a + b) / gh
}

fn gse_ms(p: i64, n: i64) -> Result<Rational, ClassicalError> {
    let mut sum = SqrtPiRational::default();
    for j in 1..=n.min(p) {
        for i in 0..=(n - j).min(p - j) {
            let c = binomial_int(p, i) * binomial_int(p, i + j);
            sum = sum.add(&pochhammer_half(n - i - j + 1, p - 1).scale(&c));
        }
    }
    let pre = gamma_int(n + 1) * gamma_int(n)
        / (Rational::from_int(4).pow((1 - n) as i32) * gamma_int(2 * n));
    let corr = sum.mul(&SqrtPiRational::tagged(pre, -1)).into_rational()?;
    Ok(two(-(p + 1)) * gue_recurrence(p as usize, 2 * n) - corr)
}

impl SqrtPiRational {
    /// Inverse of a single tagged term.
    fn into_inverse(self) -> Self {
        let mut it = self.0.into_iter();
        match (it.next(), it.next()) {
            (Some((k, v)), None) => SqrtPiRational::tagged(v.recip(), -k),
            _ => panic!("only a single √π-tagged term is invertible"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_values() {
        // Γ(5/2) = 3√π/4
        assert_eq!(
            gamma_half(2),
            SqrtPiRational::tagged(Rational::new(3, 4), 1)
        );
        assert_eq!(
            pochhammer_half(1, 0),
            SqrtPiRational::tagged(Rational::new(1, 2), 1)
        );
    }

    #[test]
    fn residue_is_reported() {
        let v = SqrtPiRational::tagged(Rational::one(), 1);
        assert_eq!(v.into_rational(), Err(ClassicalError::SqrtPiResidue(1)));
    }

    #[test]
    fn wrong_method_or_parity() {
        assert!(matches!(
            closed_form_moment(EnsembleTag::Gse, ClosedForm::Mehta, 2, 3),
            Err(ClassicalError::MethodUnsupported { .. })
        ));
        assert!(matches!(
            closed_form_moment(EnsembleTag::Goe, ClosedForm::MezzadriSimm, 2, 3),
            Err(ClassicalError::ParityUnsupported { .. })
        ));
    }

    #[test]
    fn gue_m6_at_two() {
        // 5 N^2 (N^2 + 2) at N = 2
        for m in [ClosedForm::Mehta, ClosedForm::MezzadriSimm] {
            assert_eq!(
                closed_form_moment(EnsembleTag::Gue, m, 3, 2).unwrap(),
                Rational::from_int(120)
            );
        }
    }

    #[test]
    fn small_n_phi_branch() {
        // m_4(2, 1/2) = 46 = m_4(1, 1) + φ_2(2)
        assert_eq!(goe_phi(2, 2).unwrap(), Rational::from_int(43));
        assert_eq!(goe_phi_literal(2, 2), Rational::from_int(51));
    }
}
