//! Bernoulli numbers, genus power series, and multiplicative sequences in
//! the Pontrjagin classes via formal roots and elementary-symmetric
//! reduction.

use crate::error::{Error, Result};
use crate::poly::{GradedPoly, RingPresentation};
use crate::scalar::{rat_int, Rat, Scalar};
use crate::series::PowerSeries;
use crate::symmetric::{m_to_e, partitions, SymFn};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

fn bernoulli_cache() -> &'static Mutex<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rat::one()]))
}

/// Exact Bernoulli number B_n (convention B_1 = -1/2, B_2 = 1/6).
///
/// Indices must be even, or 0 or 1; odd indices above 1 are rejected since
/// the corresponding values are zero and never meant here.
pub fn bernoulli(index: u64) -> Result<Rat> {
    if index % 2 == 1 && index > 1 {
        return Err(Error::OddBernoulliIndex(index));
    }
    let mut cache = bernoulli_cache().lock().unwrap();
    while (cache.len() as u64) <= index {
        let m = cache.len();
        // sum_{j=0}^{m} C(m+1, j) B_j = 0  for m >= 1
        let mut s = Rat::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, b) in cache.iter().enumerate() {
            s += Rat::from_integer(binom.clone()) * b;
            // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let value = -s / Rat::from_integer(BigInt::from(m + 1));
        cache.push(value);
    }
    Ok(cache[index as usize].clone())
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenusKind {
    /// sqrt(x) coth(sqrt(x)): coefficient of x^k is 2^{2k} B_{2k} / (2k)!
    L,
    /// sqrt(x) coth(sqrt(x)/2): coefficient of x^k is 2 B_{2k} / (2k)!;
    /// the constant term is 2, so this is not a normalized genus.
    Ltilde,
    /// (1 + x)^{-1}
    InvLinear,
    /// 1 + x (the total Pontrjagin class)
    TotalP,
}

impl GenusKind {
    pub fn parse(s: &str) -> Result<GenusKind> {
        match s {
            "l" | "L" => Ok(GenusKind::L),
            "ltilde" | "Ltilde" => Ok(GenusKind::Ltilde),
            "inv-linear" | "inv_linear" => Ok(GenusKind::InvLinear),
            "total-p" | "total_p" => Ok(GenusKind::TotalP),
            _ => Err(Error::Parse(format!("unknown genus kind '{}'", s))),
        }
    }
}

/// The defining power series of a genus, in the degree-4 root variable x.
pub fn genus_series(kind: GenusKind, order: usize) -> PowerSeries<Rat> {
    let mut coeffs = vec![Rat::zero(); order + 1];
    match kind {
        GenusKind::L => {
            for (k, c) in coeffs.iter_mut().enumerate() {
                let b = bernoulli(2 * k as u64).unwrap();
                let pow4 = Rat::from_integer(BigInt::from(4).pow(k as u32));
                *c = pow4 * b / Rat::from_integer(factorial(2 * k as u64));
            }
        }
        GenusKind::Ltilde => {
            for (k, c) in coeffs.iter_mut().enumerate() {
                let b = bernoulli(2 * k as u64).unwrap();
                *c = rat_int(2) * b / Rat::from_integer(factorial(2 * k as u64));
            }
        }
        GenusKind::InvLinear => {
            for (k, c) in coeffs.iter_mut().enumerate() {
                *c = rat_int(if k % 2 == 0 { 1 } else { -1 });
            }
        }
        GenusKind::TotalP => {
            coeffs[0] = Rat::one();
            if order >= 1 {
                coeffs[1] = Rat::one();
            }
        }
    }
    PowerSeries::new(coeffs)
}

/// Homogeneous pieces of a multiplicative sequence (or a rank-m genus
/// product): the polynomial of degree 4k lives at key k.
#[derive(Clone, Debug)]
pub struct SequencePolys {
    pub presentation: Arc<RingPresentation>,
    pub by_k: BTreeMap<u32, GradedPoly<Rat>>,
    pub max_deg: u32,
}

impl SequencePolys {
    pub fn component(&self, k: u32) -> GradedPoly<Rat> {
        self.by_k
            .get(&k)
            .cloned()
            .unwrap_or_else(|| GradedPoly::zero(&self.presentation))
    }

    /// The whole (truncated) total class as one polynomial.
    pub fn total(&self) -> GradedPoly<Rat> {
        let mut acc = GradedPoly::zero(&self.presentation);
        for p in self.by_k.values() {
            acc = acc.add(p);
        }
        acc
    }
}

/// Expand prod_{i=1..nroots} Q(t_i), truncated at degree `max_deg`, and
/// rewrite it in p_1..p_m (elementary symmetrics, with p_j = 0 for j > m).
pub(crate) fn expand_with_roots(
    q: &PowerSeries<Rat>,
    m: u32,
    max_deg: u32,
    nroots: usize,
) -> SequencePolys {
    assert!(m >= 1);
    let kmax = (max_deg / 4) as u32;
    let pres = RingPresentation::pontrjagin(m, max_deg);
    let mut by_k = BTreeMap::new();
    let q0 = q.coeff(0);
    for k in 0..=kmax {
        let mut f = SymFn::zero(nroots);
        for lambda in partitions(k, nroots) {
            let mut c = pow_rat(&q0, nroots - lambda.len());
            for &part in &lambda {
                c = c.mul(&q.coeff(part as usize));
            }
            f.add_term(lambda, c);
        }
        let mut poly = GradedPoly::zero(&pres);
        for (e_exps, c) in m_to_e(&f) {
            // e_j = p_j for j <= m, e_j = 0 beyond
            if e_exps.iter().skip(m as usize).any(|&e| e > 0) {
                continue;
            }
            let exps: Vec<u32> = (0..m as usize)
                .map(|j| e_exps.get(j).copied().unwrap_or(0))
                .collect();
            poly = poly.add(&GradedPoly::monomial(&pres, exps, c));
        }
        if !poly.is_zero() {
            by_k.insert(k, poly);
        }
    }
    SequencePolys {
        presentation: pres,
        by_k,
        max_deg,
    }
}

fn pow_rat(x: &Rat, e: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// The multiplicative sequence K_k of a normalized series Q (Q(0) = 1),
/// computed with ceil(max_deg / 4) formal roots.
pub fn multiplicative_sequence(
    q: &PowerSeries<Rat>,
    num_p: u32,
    max_deg: u32,
) -> Result<SequencePolys> {
    if q.coeff(0) != Rat::one() {
        return Err(Error::NotNormalized(q.coeff(0).to_string()));
    }
    let nroots = ((max_deg + 3) / 4).max(1) as usize;
    Ok(expand_with_roots(q, num_p, max_deg, nroots))
}

/// Expansion of prod_{i=1..m} Q(t_i) for arbitrary constant term; the number
/// of roots equals the rank parameter m (an unstable, rank-2m class).
pub fn genus_product(q: &PowerSeries<Rat>, m: u32, max_deg: u32) -> SequencePolys {
    expand_with_roots(q, m, max_deg, m as usize)
}

/// Comparison of the degree-4k part of the Ltilde product with L_{4k}.
#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub m: u32,
    pub k: u32,
    pub ratio: Rat,
    pub is_power_of_two: bool,
    /// Exponent e with ratio = 2^e, when `is_power_of_two`.
    pub exponent: i64,
    /// The exponent m - k printed in the source identity, for comparison.
    pub printed_exponent: i64,
}

impl ScalingReport {
    pub fn matches_printed(&self) -> bool {
        self.is_power_of_two && self.exponent == self.printed_exponent
    }
}

/// Compute the exact ratio Ltilde_{4k} / L_{4k} in H^*(BSO(2m)). The two
/// polynomials must be proportional; both the computed exponent and the
/// printed one are reported, with no claim of agreement hard-coded.
pub fn scaling_relation_report(m: u32, k: u32) -> Result<ScalingReport> {
    assert!(k >= 1 && m >= 1);
    let order = (k as usize).max(1);
    let ltilde = genus_product(&genus_series(GenusKind::Ltilde, order), m, 4 * k);
    let l = multiplicative_sequence(&genus_series(GenusKind::L, order), m, 4 * k)?;
    let lt_k = ltilde.component(k);
    let l_k = l.component(k);
    if l_k.is_zero() {
        return Err(Error::Inconsistency(format!(
            "L_{{4k}} vanishes for m = {}, k = {}",
            m, k
        )));
    }
    let (exps, lead) = l_k
        .terms()
        .next()
        .map(|(e, c)| (e.clone(), c.clone()))
        .unwrap();
    let lt_lead = lt_k
        .coefficient(&exps)
        .cloned()
        .unwrap_or_else(Rat::zero);
    let ratio = lt_lead / lead;
    if lt_k != l_k.scale(&ratio) {
        return Err(Error::Inconsistency(format!(
            "Ltilde_{{4k}} is not proportional to L_{{4k}} for m = {}, k = {}",
            m, k
        )));
    }
    let (is_pow2, exponent) = power_of_two_exponent(&ratio);
    Ok(ScalingReport {
        m,
        k,
        ratio,
        is_power_of_two: is_pow2,
        exponent,
        printed_exponent: m as i64 - k as i64,
    })
}

/// If x = 2^e for some integer e, return (true, e).
pub fn power_of_two_exponent(x: &Rat) -> (bool, i64) {
    if x.is_negative() || Zero::is_zero(x) {
        return (false, 0);
    }
    let num = x.numer();
    let den = x.denom();
    let is_pow2 = |b: &BigInt| {
        let b = b.magnitude();
        b.count_ones() == 1
    };
    if !is_pow2(num) || !is_pow2(den) {
        return (false, 0);
    }
    let e = num.bits() as i64 - 1 - (den.bits() as i64 - 1);
    (true, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::scalar::rat;

    fn q1() -> Rat {
        Rat::one()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0).unwrap(), rat_int(1));
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
        assert!(bernoulli(3).is_err());
        assert_eq!(bernoulli(1).unwrap(), rat(-1, 2));
    }

    #[test]
    fn l_series_low_order() {
        let s = genus_series(GenusKind::L, 3);
        assert_eq!(s.coeff(0), rat_int(1));
        assert_eq!(s.coeff(1), rat(1, 3));
        assert_eq!(s.coeff(2), rat(-1, 45));
        assert_eq!(s.coeff(3), rat(2, 945));
    }

    #[test]
    fn ltilde_series_low_order() {
        let s = genus_series(GenusKind::Ltilde, 1);
        assert_eq!(s.coeff(0), rat_int(2));
        assert_eq!(s.coeff(1), rat(1, 6));
    }

    #[test]
    fn inv_linear_is_geometric() {
        let s = genus_series(GenusKind::InvLinear, 4);
        for k in 0..=4 {
            assert_eq!(s.coeff(k), rat_int(if k % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn l_sequence_low_degrees() {
        let l = multiplicative_sequence(&genus_series(GenusKind::L, 4), 2, 16).unwrap();
        let pres = &l.presentation;
        assert_eq!(
            l.component(1),
            parse_poly(pres, "1/3*p1", &q1()).unwrap()
        );
        assert_eq!(
            l.component(2),
            parse_poly(pres, "7/45*p2 - 1/45*p1^2", &q1()).unwrap()
        );
    }

    #[test]
    fn inv_linear_degree_4_is_minus_p1() {
        let k = multiplicative_sequence(&genus_series(GenusKind::InvLinear, 4), 2, 16).unwrap();
        assert_eq!(k.component(1).to_string(), "-1*p1");
    }

    #[test]
    fn unnormalized_series_rejected() {
        let s = genus_series(GenusKind::Ltilde, 3);
        assert!(matches!(
            multiplicative_sequence(&s, 2, 8),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn genus_product_total_p() {
        let g = genus_product(&genus_series(GenusKind::TotalP, 2), 2, 8);
        assert_eq!(g.total().to_string(), "1 + 1*p1 + 1*p2");
    }

    #[test]
    fn genus_product_ltilde_rank_one() {
        let g = genus_product(&genus_series(GenusKind::Ltilde, 2), 1, 8);
        assert_eq!(g.component(0).to_string(), "2");
        assert_eq!(g.component(1).to_string(), "1/6*p1");
    }

    #[test]
    fn genus_product_agrees_with_sequence_when_normalized() {
        let q = genus_series(GenusKind::L, 2);
        let a = genus_product(&q, 2, 8);
        let b = multiplicative_sequence(&q, 2, 8).unwrap();
        for k in 0..=2 {
            assert_eq!(a.component(k), b.component(k));
        }
    }

    #[test]
    fn sequence_stability_in_root_count() {
        let q = genus_series(GenusKind::L, 3);
        for n in 3..5 {
            let a = expand_with_roots(&q, 2, 12, n);
            let b = expand_with_roots(&q, 2, 12, n + 1);
            for k in 0..=3 {
                assert_eq!(a.component(k), b.component(k), "roots {} vs {}", n, n + 1);
            }
        }
    }

    #[test]
    fn scaling_report_examples() {
        let r = scaling_relation_report(1, 1).unwrap();
        assert_eq!(r.ratio, rat(1, 2));
        assert!(r.is_power_of_two);
        assert_eq!(r.exponent, -1);
        assert_eq!(r.printed_exponent, 0);

        let r = scaling_relation_report(2, 1).unwrap();
        assert!(r.is_power_of_two);

        let r = scaling_relation_report(2, 2).unwrap();
        assert!(r.is_power_of_two);
        assert_eq!(r.exponent, -2);
    }

    #[test]
    fn power_of_two_detection() {
        assert_eq!(power_of_two_exponent(&rat(1, 2)), (true, -1));
        assert_eq!(power_of_two_exponent(&rat(8, 1)), (true, 3));
        assert_eq!(power_of_two_exponent(&rat(3, 1)).0, false);
        assert_eq!(power_of_two_exponent(&rat(-2, 1)).0, false);
    }
}
