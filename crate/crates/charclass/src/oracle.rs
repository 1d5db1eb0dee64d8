//! Independent oracles for cross-checking the main computations.
//!
//! The multiplicative-sequence oracle goes through log/exp and Newton's
//! identities (power sums), deliberately avoiding the formal-root and
//! monomial-basis machinery of the primary path. The Bernoulli oracle
//! inverts the exponential series instead of using the recurrence.

use crate::error::{Error, Result};
use crate::genus::{factorial, SequencePolys};
use crate::poly::{GradedPoly, RingPresentation};
use crate::scalar::{rat_int, Rat, Scalar};
use crate::series::PowerSeries;
use num::traits::{One, Zero};
use std::collections::BTreeMap;

/// log of a series with constant term 1.
pub fn series_log(q: &PowerSeries<Rat>) -> Result<PowerSeries<Rat>> {
    if q.coeff(0) != Rat::one() {
        return Err(Error::NotNormalized(q.coeff(0).to_string()));
    }
    let n = q.order();
    let mut s_pow = PowerSeries::constant(Rat::one(), n); // s^0
    let mut s_coeffs = q.coeffs().to_vec();
    s_coeffs[0] = Rat::zero();
    let s = PowerSeries::new(s_coeffs);
    let mut out = PowerSeries::constant(Rat::zero(), n);
    for k in 1..=n {
        s_pow = s_pow.multiply(&s);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let scale = Rat::new(num::BigInt::from(sign), num::BigInt::from(k));
        let scaled = PowerSeries::new(s_pow.coeffs().iter().map(|c| c * &scale).collect());
        out = out.add(&scaled);
    }
    Ok(out)
}

/// The j-th power sum of the formal roots as a polynomial in p_1..p_m, by
/// Newton's identities with e_i = p_i (and e_i = 0 past m).
pub fn power_sum(j: u32, pres: &std::sync::Arc<RingPresentation>) -> Result<GradedPoly<Rat>> {
    let m = pres.generators().len() as u32;
    let e = |i: u32| -> Result<GradedPoly<Rat>> {
        if i == 0 {
            Ok(GradedPoly::constant(pres, Rat::one()))
        } else if i <= m {
            GradedPoly::generator(pres, &format!("p{}", i), Rat::one())
        } else {
            Ok(GradedPoly::zero(pres))
        }
    };
    let mut sums: Vec<GradedPoly<Rat>> = vec![GradedPoly::zero(pres)]; // P_0 unused
    for jj in 1..=j {
        // P_j = sum_{i=1..j-1} (-1)^{i-1} e_i P_{j-i} + (-1)^{j-1} j e_j
        let mut acc = GradedPoly::zero(pres);
        for i in 1..jj {
            let term = e(i)?.mul(&sums[(jj - i) as usize]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        let last = e(jj)?.scale(&rat_int(jj as i64));
        acc = if jj % 2 == 1 { acc.add(&last) } else { acc.sub(&last) };
        sums.push(acc);
    }
    Ok(sums.swap_remove(j as usize))
}

/// exp of a polynomial with zero constant term, finite under truncation.
fn poly_exp(x: &GradedPoly<Rat>) -> Result<GradedPoly<Rat>> {
    if x.coefficient(&vec![0; x.presentation().generators().len()]).is_some() {
        return Err(Error::NonzeroConstantTerm);
    }
    let pres = x.presentation().clone();
    let mut acc = GradedPoly::constant(&pres, Rat::one());
    let mut power = GradedPoly::constant(&pres, Rat::one());
    let mut k = 0u64;
    loop {
        k += 1;
        power = power.mul(x);
        if power.is_zero() {
            break;
        }
        let inv_fact = Rat::one() / Rat::from_integer(factorial(k));
        acc = acc.add(&power.scale(&inv_fact));
    }
    Ok(acc)
}

/// Multiplicative sequence of Q via sum_i log Q(t_i) = sum_j c_j P_j and
/// exponentiation, split into homogeneous pieces like the primary path.
pub fn multiplicative_sequence_oracle(
    q: &PowerSeries<Rat>,
    num_p: u32,
    max_deg: u32,
) -> Result<SequencePolys> {
    let kmax = max_deg / 4;
    let pres = RingPresentation::pontrjagin(num_p, max_deg);
    let logq = series_log(&q.truncate(kmax as usize))?;
    let mut log_total = GradedPoly::zero(&pres);
    for j in 1..=kmax {
        let c = logq.coeff(j as usize);
        if !Scalar::is_zero(&c) {
            log_total = log_total.add(&power_sum(j, &pres)?.scale(&c));
        }
    }
    let total = poly_exp(&log_total)?;
    let mut by_k: BTreeMap<u32, GradedPoly<Rat>> = BTreeMap::new();
    for (d, comp) in total.components() {
        if d % 4 != 0 {
            return Err(Error::Inconsistency(format!(
                "oracle produced a component in degree {}",
                d
            )));
        }
        if d > 0 {
            by_k.insert(d / 4, comp);
        }
    }
    Ok(SequencePolys {
        presentation: pres,
        by_k,
        max_deg,
    })
}

/// Bernoulli numbers from x / (e^x - 1): invert sum x^k / (k+1)! and scale
/// the n-th coefficient by n!.
pub fn bernoulli_oracle(n: u64) -> Result<Rat> {
    let order = n as usize + 1;
    let coeffs: Vec<Rat> = (0..=order)
        .map(|k| Rat::one() / Rat::from_integer(factorial(k as u64 + 1)))
        .collect();
    let inv = PowerSeries::new(coeffs).invert()?;
    Ok(inv.coeff(n as usize) * Rat::from_integer(factorial(n)))
}

/// Closed form for the compactified Euler-root power series: the alternating
/// sum over l of z^{rl+1} + z^{rl+p}, to the given order.
pub fn wu_series_closed_form(prime: u64, order: usize) -> Vec<Rat> {
    let r = ((prime - 1) / 2) as usize;
    let mut coeffs = vec![Rat::zero(); order + 1];
    let mut l = 0usize;
    loop {
        let a = r * l + 1;
        let b = r * l + prime as usize;
        if a > order && b > order {
            break;
        }
        let sign = if l % 2 == 0 { 1 } else { -1 };
        if a <= order {
            coeffs[a] += rat_int(sign);
        }
        if b <= order {
            coeffs[b] += rat_int(sign);
        }
        l += 1;
    }
    coeffs
}

/// The same series computed by division, for coefficientwise comparison.
pub fn wu_series_by_division(prime: u64, order: usize) -> Result<Vec<Rat>> {
    let r = ((prime - 1) / 2) as usize;
    let mut num = vec![Rat::zero(); order + 1];
    num[1] = Rat::one();
    if (prime as usize) <= order {
        num[prime as usize] = Rat::one();
    }
    let mut den = vec![Rat::zero(); order + 1];
    den[0] = Rat::one();
    if r <= order {
        den[r] = Rat::one();
    }
    let s = PowerSeries::new(num).multiply(&PowerSeries::new(den).invert()?);
    Ok(s.coeffs().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus::{bernoulli, genus_series, multiplicative_sequence, GenusKind};
    use crate::scalar::rat;

    #[test]
    fn log_of_geometric() {
        // log(1/(1-x)) = sum x^k / k; here log(1+x) = x - x^2/2 + ...
        let mut c = vec![Rat::zero(); 5];
        c[0] = Rat::one();
        c[1] = Rat::one();
        let l = series_log(&PowerSeries::new(c)).unwrap();
        assert_eq!(l.coeff(1), rat(1, 1));
        assert_eq!(l.coeff(2), rat(-1, 2));
        assert_eq!(l.coeff(3), rat(1, 3));
        assert_eq!(l.coeff(4), rat(-1, 4));
    }

    #[test]
    fn newton_power_sums() {
        let pres = RingPresentation::pontrjagin(2, 16);
        assert_eq!(power_sum(1, &pres).unwrap().to_string(), "1*p1");
        assert_eq!(power_sum(2, &pres).unwrap().to_string(), "-2*p2 + 1*p1^2");
        // two variables: P_3 = e1^3 - 3 e1 e2
        assert_eq!(power_sum(3, &pres).unwrap().to_string(), "-3*p1*p2 + 1*p1^3");
    }

    #[test]
    fn oracle_agrees_with_primary_path_low_degrees() {
        let q = genus_series(GenusKind::L, 4);
        let a = multiplicative_sequence(&q, 3, 16).unwrap();
        let b = multiplicative_sequence_oracle(&q, 3, 16).unwrap();
        for k in 1..=4 {
            assert_eq!(a.component(k), b.component(k), "k = {}", k);
        }
    }

    #[test]
    fn bernoulli_oracle_matches_recurrence() {
        for n in [0u64, 1, 2, 4, 6, 8, 10, 12] {
            assert_eq!(bernoulli_oracle(n).unwrap(), bernoulli(n).unwrap(), "n = {}", n);
        }
    }

    #[test]
    fn wu_series_identity_smoke() {
        for p in [3u64, 5, 7] {
            assert_eq!(
                wu_series_closed_form(p, 20),
                wu_series_by_division(p, 20).unwrap(),
                "p = {}",
                p
            );
        }
    }
}
