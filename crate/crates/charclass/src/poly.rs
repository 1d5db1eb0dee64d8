//! Graded multivariate polynomials over named generators, with the single
//! rewriting relation chi^2 -> p_m and a truncation degree.
//!
//! Every `GradedPoly` is stored in normal form: no zero coefficients, chi
//! exponents at most 1 when the presentation carries the rewrite rule, and
//! no terms above the truncation degree. The canonical term order used for
//! printing is graded lexicographic with generators in declared order.

use crate::error::{Error, Result};
use crate::scalar::{Fp, Rat, Scalar};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: &str, degree: u32) -> Generator {
        Generator {
            name: name.to_string(),
            degree,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rewrite {
    /// Index of the generator whose square rewrites (chi).
    chi: usize,
    /// Index of the replacement generator (p_m).
    pm: usize,
}

/// Generator/relation data of a polynomial ring, possibly with the relation
/// chi^2 = p_m, truncated above `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    gens: Vec<Generator>,
    rewrite: Option<Rewrite>,
    trunc: u32,
}

pub const DEFAULT_TRUNCATION: u32 = 64;

impl RingPresentation {
    pub fn polynomial(gens: Vec<Generator>, trunc: u32) -> Arc<RingPresentation> {
        Arc::new(RingPresentation {
            gens,
            rewrite: None,
            trunc,
        })
    }

    pub fn with_rewrite(
        gens: Vec<Generator>,
        chi_name: &str,
        pm_name: &str,
        trunc: u32,
    ) -> Result<Arc<RingPresentation>> {
        let chi = Self::index_in(&gens, chi_name)?;
        let pm = Self::index_in(&gens, pm_name)?;
        if 2 * gens[chi].degree != gens[pm].degree {
            return Err(Error::DegreeMismatch(format!(
                "rewrite {}^2 -> {} is not degree preserving",
                chi_name, pm_name
            )));
        }
        Ok(Arc::new(RingPresentation {
            gens,
            rewrite: Some(Rewrite { chi, pm }),
            trunc,
        }))
    }

    /// H^*(BSO(n)) away from characteristic 2: p_1..p_m for n = 2m+1,
    /// p_1..p_m and chi with chi^2 = p_m for n = 2m.
    pub fn bso(n: u32, trunc: u32) -> Arc<RingPresentation> {
        assert!(n >= 1);
        let m = n / 2;
        let mut gens: Vec<Generator> = (1..=m)
            .map(|i| Generator::new(&format!("p{}", i), 4 * i))
            .collect();
        if n % 2 == 0 {
            gens.push(Generator::new("chi", n));
            RingPresentation::with_rewrite(gens, "chi", &format!("p{}", m), trunc)
                .expect("bso presentation is well formed")
        } else {
            RingPresentation::polynomial(gens, trunc)
        }
    }

    /// Free graded polynomial ring on p_1..p_m (no Euler class).
    pub fn pontrjagin(m: u32, trunc: u32) -> Arc<RingPresentation> {
        let gens = (1..=m)
            .map(|i| Generator::new(&format!("p{}", i), 4 * i))
            .collect();
        RingPresentation::polynomial(gens, trunc)
    }

    fn index_in(gens: &[Generator], name: &str) -> Result<usize> {
        gens.iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::PresentationMismatch(format!("unknown generator {}", name)))
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        Self::index_in(&self.gens, name)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn monomial_degree(&self, exps: &[u32]) -> u32 {
        exps.iter()
            .zip(&self.gens)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// All exponent vectors (normal form) of the given degree.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.gens.len()];
        self.enumerate(0, degree, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, idx: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == self.gens.len() {
            if remaining == 0 {
                out.push(exps.clone());
            }
            return;
        }
        let d = self.gens[idx].degree;
        let cap = if self.rewrite.as_ref().map(|r| r.chi) == Some(idx) {
            1
        } else {
            remaining / d
        };
        for e in 0..=cap {
            if e * d > remaining {
                break;
            }
            exps[idx] = e;
            self.enumerate(idx + 1, remaining - e * d, exps, out);
        }
        exps[idx] = 0;
    }
}

/// A graded polynomial tied to its presentation. `K` is `Rat` or `Fp`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedPoly<K: Scalar> {
    pres: Arc<RingPresentation>,
    terms: BTreeMap<Vec<u32>, K>,
}

impl<K: Scalar> GradedPoly<K> {
    pub fn zero(pres: &Arc<RingPresentation>) -> Self {
        GradedPoly {
            pres: pres.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(pres: &Arc<RingPresentation>, c: K) -> Self {
        let mut p = Self::zero(pres);
        if !c.is_zero() {
            p.terms.insert(vec![0; pres.gens.len()], c);
        }
        p
    }

    pub fn monomial(pres: &Arc<RingPresentation>, exps: Vec<u32>, c: K) -> Self {
        assert_eq!(exps.len(), pres.gens.len());
        let mut p = Self::zero(pres);
        p.add_term(exps, c);
        p
    }

    pub fn generator(pres: &Arc<RingPresentation>, name: &str, one: K) -> Result<Self> {
        let idx = pres.index_of(name)?;
        let mut exps = vec![0; pres.gens.len()];
        exps[idx] = 1;
        Ok(Self::monomial(pres, exps, one))
    }

    pub fn presentation(&self) -> &Arc<RingPresentation> {
        &self.pres
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &K)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Insert a term in normal form: rewrite chi powers, truncate, drop zeros.
    fn add_term(&mut self, mut exps: Vec<u32>, c: K) {
        if c.is_zero() {
            return;
        }
        if let Some(rw) = &self.pres.rewrite {
            while exps[rw.chi] >= 2 {
                exps[rw.chi] -= 2;
                exps[rw.pm] += 1;
            }
        }
        if self.pres.monomial_degree(&exps) > self.pres.trunc {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.pres != other.pres {
            return Err(Error::PresentationMismatch(
                "operands live over different presentations".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other).expect("presentation mismatch in add");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.pres);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero(&self.pres);
        for (e, k) in &self.terms {
            out.add_term(e.clone(), k.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other).expect("presentation mismatch in mul");
        let mut out = Self::zero(&self.pres);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let one = match self.terms.values().next() {
            Some(c) => c.one_like(),
            None => {
                if e == 0 {
                    panic!("0^0 of the zero polynomial needs a scalar context");
                }
                return Self::zero(&self.pres);
            }
        };
        let mut acc = Self::constant(&self.pres, one);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn coefficient(&self, exps: &[u32]) -> Option<&K> {
        self.terms.get(exps)
    }

    /// Degree of the highest nonzero term, if any.
    pub fn top_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| self.pres.monomial_degree(e))
            .max()
    }

    pub fn homogeneous_component(&self, degree: u32) -> Self {
        let mut out = Self::zero(&self.pres);
        for (e, c) in &self.terms {
            if self.pres.monomial_degree(e) == degree {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Degree -> homogeneous component, covering every nonzero term.
    pub fn components(&self) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = self.pres.monomial_degree(e);
            out.entry(d)
                .or_insert_with(|| Self::zero(&self.pres))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        self.components().len() <= 1
    }

    /// Substitute each generator by a polynomial over the target
    /// presentation. Every image must be homogeneous of the generator's
    /// degree, or zero.
    pub fn substitute(
        &self,
        assignment: &HashMap<String, GradedPoly<K>>,
        target: &Arc<RingPresentation>,
    ) -> Result<GradedPoly<K>> {
        let mut images = Vec::with_capacity(self.pres.gens.len());
        for g in &self.pres.gens {
            match assignment.get(&g.name) {
                Some(img) => {
                    if img.pres != *target {
                        return Err(Error::PresentationMismatch(format!(
                            "image of {} lives over the wrong presentation",
                            g.name
                        )));
                    }
                    if !img.is_zero() {
                        let comps = img.components();
                        if comps.len() != 1 || !comps.contains_key(&g.degree) {
                            return Err(Error::DegreeMismatch(format!(
                                "image of {} (degree {}) is not homogeneous of that degree",
                                g.name, g.degree
                            )));
                        }
                    }
                    images.push(img.clone());
                }
                None => {
                    return Err(Error::PresentationMismatch(format!(
                        "no image assigned to generator {}",
                        g.name
                    )))
                }
            }
        }
        let mut out = GradedPoly::zero(target);
        for (exps, c) in &self.terms {
            let mut term = GradedPoly::constant(target, c.clone());
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    term = term.mul(&images[i].pow(*e));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Canonical term order for printing: ascending degree, then ascending
    /// lexicographic on exponent vectors in declared generator order.
    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &K)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(ea, _), (eb, _)| {
            let da = self.pres.monomial_degree(ea);
            let db = self.pres.monomial_degree(eb);
            da.cmp(&db).then_with(|| ea.cmp(eb))
        });
        ts
    }
}

/// Re-normalize a polynomial with respect to a presentation. Polynomials are
/// kept in normal form throughout, so this is mostly a change-of-presentation
/// entry point (and the place where unknown generators are rejected).
pub fn poly_reduce<K: Scalar>(
    p: &GradedPoly<K>,
    pres: &Arc<RingPresentation>,
) -> Result<GradedPoly<K>> {
    let mut positions = Vec::with_capacity(p.pres.gens.len());
    for g in p.pres.generators() {
        positions.push(pres.index_of(&g.name)?);
    }
    let mut out = GradedPoly::zero(pres);
    for (exps, c) in &p.terms {
        let mut new_exps = vec![0u32; pres.gens.len()];
        for (i, e) in exps.iter().enumerate() {
            new_exps[positions[i]] += e;
        }
        out.add_term(new_exps, c.clone());
    }
    Ok(out)
}

/// Coefficientwise reduction mod an odd prime; errors when the class is not
/// p-integral.
pub fn field_reduce(p: &GradedPoly<Rat>, prime: u64) -> Result<GradedPoly<Fp>> {
    let mut out = GradedPoly::zero(p.presentation());
    for (exps, c) in p.terms() {
        out.add_term(exps.clone(), Fp::from_rat(prime, c)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Text grammar (bit-exact):
//   term     := rational '*' factor ('*' factor)*  |  rational
//   factor   := name ('^' uint)?
//   rational := int ('/' uint)?
// Terms joined by ' + ' / ' - '; e.g. "7/45*p2 - 1/45*p1^2".
// ---------------------------------------------------------------------------

impl<K: Scalar> fmt::Display for GradedPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in self.sorted_terms().into_iter().enumerate() {
            let cs = c.to_string();
            let (sign, abs) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else if sign == "-" {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", abs)?;
            for (j, e) in exps.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                write!(f, "*{}", self.pres.gens[j].name)?;
                if *e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// Parse the polynomial grammar above. `one` supplies the scalar context.
pub fn parse_poly<K: Scalar>(
    pres: &Arc<RingPresentation>,
    input: &str,
    one: &K,
) -> Result<GradedPoly<K>> {
    let input = input.trim();
    if input.is_empty() || input == "0" {
        return Ok(GradedPoly::zero(pres));
    }
    let mut out = GradedPoly::zero(pres);
    for (sign, term) in split_terms(input)? {
        let mut coeff: Option<K> = None;
        let mut exps = vec![0u32; pres.generators().len()];
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in term '{}'", term)));
            }
            let first = factor.chars().next().unwrap();
            if first.is_ascii_digit() || first == '-' || first == '+' {
                if coeff.is_some() {
                    return Err(Error::Parse(format!(
                        "more than one rational in term '{}'",
                        term
                    )));
                }
                coeff = Some(parse_rational(factor, one)?);
            } else {
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in '{}'", factor)))?,
                    ),
                    None => (factor, 1),
                };
                let idx = pres.index_of(name)?;
                exps[idx] += e;
            }
        }
        let mut c = coeff.unwrap_or_else(|| one.clone());
        if sign < 0 {
            c = c.neg();
        }
        out.add_term(exps, c);
    }
    Ok(out)
}

fn split_terms(input: &str) -> Result<Vec<(i32, String)>> {
    let mut out = Vec::new();
    let mut rest = input.trim();
    let mut sign = 1;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r.trim_start();
    }
    loop {
        if let Some(pos) = find_term_break(rest) {
            let (term, tail) = rest.split_at(pos);
            out.push((sign, term.trim().to_string()));
            let tail = tail.trim_start();
            if let Some(r) = tail.strip_prefix('+') {
                sign = 1;
                rest = r.trim_start();
            } else if let Some(r) = tail.strip_prefix('-') {
                sign = -1;
                rest = r.trim_start();
            } else {
                return Err(Error::Parse(format!("unexpected text at '{}'", tail)));
            }
        } else {
            if rest.is_empty() {
                return Err(Error::Parse("trailing operator".into()));
            }
            out.push((sign, rest.trim().to_string()));
            return Ok(out);
        }
    }
}

fn find_term_break(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    for i in 0..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-')
            && i > 0
            && bytes[i - 1] == b' '
        {
            return Some(i - 1);
        }
    }
    None
}

fn parse_rational<K: Scalar>(s: &str, one: &K) -> Result<K> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let n: i64 = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer '{}'", num)))?;
    let mut c = one.of_i64(n);
    if let Some(d) = den {
        let d: i64 = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator '{}'", d)))?;
        let dinv = one
            .of_i64(d)
            .inv()
            .ok_or_else(|| Error::Parse(format!("denominator {} is not invertible", d)))?;
        c = c.mul(&dinv);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use num::traits::One;

    fn bso4() -> Arc<RingPresentation> {
        RingPresentation::bso(4, 64)
    }

    fn gp(pres: &Arc<RingPresentation>, s: &str) -> GradedPoly<Rat> {
        parse_poly(pres, s, &Rat::one()).unwrap()
    }

    #[test]
    fn chi_square_rewrites_to_pm() {
        let pres = bso4();
        let chi = gp(&pres, "1*chi");
        let p2 = gp(&pres, "1*p2");
        // chi^2 - p2 = 0 in BSO(4)
        assert!(chi.mul(&chi).sub(&p2).is_zero());
        // chi^3 = chi * p2
        assert_eq!(chi.pow(3), chi.mul(&p2));
    }

    #[test]
    fn zero_coefficients_drop() {
        let pres = bso4();
        let p = gp(&pres, "1*p1 + 0*p2");
        assert_eq!(p, gp(&pres, "1*p1"));
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn truncation_applies() {
        let pres = RingPresentation::pontrjagin(1, 8);
        let p1 = gp(&pres, "1*p1");
        assert!(p1.pow(3).is_zero());
        assert!(!p1.pow(2).is_zero());
    }

    #[test]
    fn display_matches_grammar() {
        let pres = RingPresentation::pontrjagin(2, 64);
        let l2 = gp(&pres, "7/45*p2 - 1/45*p1^2");
        assert_eq!(l2.to_string(), "7/45*p2 - 1/45*p1^2");
        let l1 = gp(&pres, "1/3*p1");
        assert_eq!(l1.to_string(), "1/3*p1");
        let c = GradedPoly::constant(&pres, rat(-2, 3));
        assert_eq!(c.to_string(), "-2/3");
    }

    #[test]
    fn parse_roundtrip() {
        let pres = bso4();
        for s in ["1/3*p1", "7/45*p2 - 1/45*p1^2", "1 - 1*p1 + 1*p1*p2", "0"] {
            let p = gp(&pres, s);
            assert_eq!(gp(&pres, &p.to_string()), p);
        }
    }

    #[test]
    fn unknown_generator_rejected() {
        let pres = bso4();
        assert!(parse_poly(&pres, "1*q7", &Rat::one()).is_err());
        let other = RingPresentation::polynomial(vec![Generator::new("h", 2)], 64);
        let h = gp(&other, "1*h");
        assert!(poly_reduce(&h, &pres).is_err());
    }

    #[test]
    fn homogeneous_components_sum_back() {
        let pres = bso4();
        let p = gp(&pres, "1 + 1*p1 + 2*p2 - 1*p1^2 + 1*chi");
        let mut sum = GradedPoly::zero(&pres);
        for (_, c) in p.components() {
            sum = sum.add(&c);
        }
        assert_eq!(sum, p);
    }

    #[test]
    fn substitution_identity_and_linearity() {
        let pres = RingPresentation::pontrjagin(2, 64);
        let mut ident = HashMap::new();
        ident.insert("p1".to_string(), gp(&pres, "1*p1"));
        ident.insert("p2".to_string(), gp(&pres, "1*p2"));
        let l2 = gp(&pres, "7/45*p2 - 1/45*p1^2");
        assert_eq!(l2.substitute(&ident, &pres).unwrap(), l2);

        // degree mismatch is rejected
        let mut bad = ident.clone();
        bad.insert("p2".to_string(), gp(&pres, "1*p1"));
        assert!(l2.substitute(&bad, &pres).is_err());
    }

    #[test]
    fn field_reduce_example() {
        let pres = RingPresentation::pontrjagin(2, 64);
        let l2 = gp(&pres, "7/45*p2 - 1/45*p1^2");
        let r = field_reduce(&l2, 7).unwrap();
        assert_eq!(r.to_string(), "2*p1^2");
        let p1 = gp(&pres, "1*p1");
        assert_eq!(field_reduce(&p1, 5).unwrap().to_string(), "1*p1");
        assert!(field_reduce(&gp(&pres, "1/3*p1"), 3).is_err());
    }

    #[test]
    fn monomial_enumeration_respects_chi_bound() {
        let pres = bso4();
        // degree 8: p2, p1^2, p1*chi (chi^2 excluded by normal form)
        let ms = pres.monomials_of_degree(8);
        assert_eq!(ms.len(), 3);
        // degree 6: p1 * chi... p1 deg 4 + chi deg 4 = 8, so degree 6 empty
        assert!(pres.monomials_of_degree(6).is_empty());
    }

    #[test]
    fn fp_poly_arithmetic() {
        let pres = RingPresentation::bso(4, 64);
        let one = Fp::new(3, 1).unwrap();
        let p = parse_poly(&pres, "1*p1 + 2*p2", &one).unwrap();
        let q = p.add(&p).add(&p);
        assert!(q.is_zero());
    }

    #[test]
    fn poly_reduce_is_multiplicative_on_samples() {
        let pres = bso4();
        let a = gp(&pres, "1*chi + 1*p1");
        let b = gp(&pres, "1*chi - 1*p1");
        // (chi + p1)(chi - p1) = chi^2 - p1^2 = p2 - p1^2
        assert_eq!(a.mul(&b), gp(&pres, "1*p2 - 1*p1^2"));
        assert_eq!(rat_int(0), rat(0, 5));
    }
}
