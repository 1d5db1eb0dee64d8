//! Symmetric polynomials in N formal roots, kept in the monomial-symmetric
//! basis, with rewriting into elementary symmetric polynomials.
//!
//! Partitions are descending vectors of positive parts. A symmetric function
//! is a map partition -> coefficient; the partition lambda stands for
//! m_lambda, the sum over the orbit of t^lambda in N variables.

use crate::scalar::{rat_int, Rat, Scalar};
use std::collections::BTreeMap;

pub type Partition = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct SymFn {
    pub nvars: usize,
    pub coeffs: BTreeMap<Partition, Rat>,
}

impl SymFn {
    pub fn zero(nvars: usize) -> SymFn {
        SymFn {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> SymFn {
        let mut f = SymFn::zero(nvars);
        f.coeffs.insert(vec![], rat_int(1));
        f
    }

    pub fn add_term(&mut self, lambda: Partition, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert!(lambda.len() <= self.nvars);
        debug_assert!(lambda.windows(2).all(|w| w[0] >= w[1]));
        let entry = self.coeffs.entry(lambda).or_insert_with(|| rat_int(0));
        *entry = entry.add(&c);
        if entry.is_zero() {
            // re-fetch key to remove; BTreeMap has no entry-remove-by-value
            let dead: Vec<Partition> = self
                .coeffs
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.coeffs.remove(&k);
            }
        }
    }
}

fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return rat_int(0);
    }
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc * (n as i128 - i) / (i + 1);
    }
    rat_int(acc as i64)
}

/// Value -> multiplicity table of a partition padded with zeros to `nvars`.
fn value_counts(lambda: &[u32], nvars: usize) -> BTreeMap<u32, u32> {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &v in lambda {
        *counts.entry(v).or_insert(0) += 1;
    }
    let zeros = nvars as u32 - lambda.len() as u32;
    if zeros > 0 {
        *counts.entry(0).or_insert(0) += zeros;
    }
    counts
}

/// Multiplicity of m_nu in m_mu * e_k: the number of ways a fixed monomial of
/// shape nu arises as (rearrangement of mu) + (0/1-vector with k ones).
/// The decrement pattern is uniquely determined by (mu, nu), so this is a
/// single product of binomial coefficients, or zero.
fn strip_multiplicity(mu: &[u32], nu: &[u32], k: u32, nvars: usize) -> Rat {
    let cnu = value_counts(nu, nvars);
    let cmu = value_counts(mu, nvars);
    let max_v = nu.first().copied().unwrap_or(0);
    // s[v] = number of value-v slots of nu that are decremented
    let mut s_above = 0u32;
    let mut total = 0u32;
    let mut mult = rat_int(1);
    for v in (0..=max_v).rev() {
        let c_nu_v = cnu.get(&v).copied().unwrap_or(0);
        let c_mu_v = cmu.get(&v).copied().unwrap_or(0);
        // counts of value v in mu = c_nu_v - s_v + s_{v+1}
        let s_v_signed = c_nu_v as i64 + s_above as i64 - c_mu_v as i64;
        if s_v_signed < 0 || s_v_signed > c_nu_v as i64 {
            return rat_int(0);
        }
        let s_v = s_v_signed as u32;
        if v == 0 && s_v != 0 {
            return rat_int(0);
        }
        mult = mult.mul(&binomial(c_nu_v, s_v));
        total += s_v;
        s_above = s_v;
    }
    if total != k {
        return rat_int(0);
    }
    mult
}

/// Enumerate the partitions reachable from `lambda` by adding 1 to k distinct
/// slots (a vertical k-strip) within `nvars` variables.
fn vertical_strip_targets(lambda: &[u32], k: u32, nvars: usize) -> Vec<Partition> {
    let counts: Vec<(u32, u32)> = value_counts(lambda, nvars).into_iter().collect();
    let mut out = Vec::new();
    let mut choice = vec![0u32; counts.len()];
    fn rec(
        counts: &[(u32, u32)],
        choice: &mut Vec<u32>,
        idx: usize,
        remaining: u32,
        out: &mut Vec<Partition>,
    ) {
        if idx == counts.len() {
            if remaining == 0 {
                let mut parts: Vec<u32> = Vec::new();
                for (i, &(v, c)) in counts.iter().enumerate() {
                    let d = choice[i];
                    for _ in 0..(c - d) {
                        if v > 0 {
                            parts.push(v);
                        }
                    }
                    for _ in 0..d {
                        parts.push(v + 1);
                    }
                }
                parts.sort_unstable_by(|a, b| b.cmp(a));
                out.push(parts);
            }
            return;
        }
        let cap = counts[idx].1.min(remaining);
        for d in 0..=cap {
            choice[idx] = d;
            rec(counts, choice, idx + 1, remaining - d, out);
        }
        choice[idx] = 0;
    }
    rec(&counts, &mut choice, 0, k, &mut out);
    out.sort();
    out.dedup();
    out
}

/// f * e_k in the monomial-symmetric basis.
pub fn multiply_by_ek(f: &SymFn, k: u32) -> SymFn {
    let mut out = SymFn::zero(f.nvars);
    for (lambda, c) in &f.coeffs {
        for nu in vertical_strip_targets(lambda, k, f.nvars) {
            let mult = strip_multiplicity(lambda, &nu, k, f.nvars);
            if !mult.is_zero() {
                out.add_term(nu, c.mul(&mult));
            }
        }
    }
    out
}

/// Expand a product of elementary symmetrics, given as exponents of
/// e_1..e_N, into the monomial basis.
pub fn e_product_to_m(e_exps: &[u32], nvars: usize) -> SymFn {
    let mut acc = SymFn::one(nvars);
    for (i, &e) in e_exps.iter().enumerate() {
        for _ in 0..e {
            acc = multiply_by_ek(&acc, i as u32 + 1);
        }
    }
    acc
}

/// Rewrite a symmetric function as a polynomial in e_1..e_N: returns a map
/// from e-exponent vectors (length nvars) to coefficients.
///
/// Gauss's algorithm: repeatedly kill the lex-largest monomial-basis term
/// with the unique elementary-symmetric product having that leading term.
pub fn m_to_e(f: &SymFn) -> BTreeMap<Vec<u32>, Rat> {
    let nvars = f.nvars;
    let mut out: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    let mut rest = f.clone();
    while let Some(lambda) = lex_largest(&rest) {
        let c = rest.coeffs.get(&lambda).unwrap().clone();
        // exponent of e_i is lambda_i - lambda_{i+1}
        let mut e_exps = vec![0u32; nvars];
        for i in 0..lambda.len() {
            let next = if i + 1 < lambda.len() { lambda[i + 1] } else { 0 };
            e_exps[i] = lambda[i] - next;
        }
        let expansion = e_product_to_m(&e_exps, nvars);
        for (mu, ec) in &expansion.coeffs {
            rest.add_term(mu.clone(), ec.mul(&c).neg());
        }
        let entry = out.entry(e_exps).or_insert_with(|| rat_int(0));
        *entry = entry.add(&c);
        debug_assert!(!rest.coeffs.contains_key(&lambda));
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn lex_largest(f: &SymFn) -> Option<Partition> {
    f.coeffs.keys().max_by(|a, b| cmp_lex(a, b)).cloned()
}

fn cmp_lex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    for i in 0..a.len().max(b.len()) {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// All partitions of `weight` with at most `max_parts` parts.
pub fn partitions(weight: u32, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        remaining: u32,
        max_part: u32,
        slots: usize,
        stack: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(stack.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        let top = remaining.min(max_part);
        for p in (1..=top).rev() {
            stack.push(p);
            rec(remaining - p, p, slots - 1, stack, out);
            stack.pop();
        }
    }
    rec(weight, weight, max_parts, &mut stack, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_expansions_in_two_vars() {
        // e_1^2 = m_(2) + 2 m_(1,1)
        let f = e_product_to_m(&[2, 0], 2);
        assert_eq!(f.coeffs.get(&vec![2]).unwrap(), &rat_int(1));
        assert_eq!(f.coeffs.get(&vec![1, 1]).unwrap(), &rat_int(2));
        // e_2 = m_(1,1)
        let g = e_product_to_m(&[0, 1], 2);
        assert_eq!(g.coeffs.len(), 1);
        assert_eq!(g.coeffs.get(&vec![1, 1]).unwrap(), &rat_int(1));
    }

    #[test]
    fn power_sum_two_vars() {
        // p_2 = m_(2) = e_1^2 - 2 e_2
        let mut f = SymFn::zero(2);
        f.add_term(vec![2], rat_int(1));
        let e = m_to_e(&f);
        assert_eq!(e.get(&vec![2, 0]).unwrap(), &rat_int(1));
        assert_eq!(e.get(&vec![0, 1]).unwrap(), &rat_int(-2));
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn m_to_e_round_trips() {
        // m_(2,1) in 3 variables
        let mut f = SymFn::zero(3);
        f.add_term(vec![2, 1], rat_int(1));
        f.add_term(vec![1, 1, 1], rat_int(5));
        let e = m_to_e(&f);
        let mut back = SymFn::zero(3);
        for (exps, c) in &e {
            for (mu, mc) in &e_product_to_m(exps, 3).coeffs {
                back.add_term(mu.clone(), mc.mul(c));
            }
        }
        assert_eq!(back, f);
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(4, 4).len(), 5);
        assert_eq!(partitions(4, 2).len(), 3);
        assert_eq!(partitions(0, 3), vec![Vec::<u32>::new()]);
    }
}
