//! Classical invariants of closed oriented manifolds and the bottom homotopy
//! group of the stable tangential Thom spectra: Euler characteristic,
//! signature, Kervaire semicharacteristic, the Euler-class subgroup, Adams
//! numbers, and prime ranges for mod-p vanishing.

use crate::error::{Error, Result};
use crate::fixtures::read_fixture;
use crate::genus::{bernoulli, factorial};
use crate::scalar::{is_prime, Rat};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;

pub const BORDISM_FIXTURE: &str = include_str!("../fixtures/bordism.table");

/// A closed oriented manifold described by its Betti numbers and signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldDescriptor {
    pub name: String,
    pub dim: u32,
    pub betti: Vec<u64>,
    pub signature: i64,
}

impl ManifoldDescriptor {
    pub fn new(name: &str, dim: u32, betti: Vec<u64>, signature: i64) -> Result<Self> {
        let d = ManifoldDescriptor {
            name: name.to_string(),
            dim,
            betti,
            signature,
        };
        d.validate()?;
        Ok(d)
    }

    /// Consistency checks: Poincare duality, parity constraints on the Euler
    /// characteristic, and the signature bounds forced by the dimension.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim as usize;
        if self.betti.len() != n + 1 {
            return Err(Error::InvalidDescriptor(format!(
                "{}: needs {} Betti numbers, got {}",
                self.name,
                n + 1,
                self.betti.len()
            )));
        }
        for i in 0..=n {
            if self.betti[i] != self.betti[n - i] {
                return Err(Error::InvalidDescriptor(format!(
                    "{}: duality fails, b_{} != b_{}",
                    self.name,
                    i,
                    n - i
                )));
            }
        }
        let chi = self.euler_characteristic();
        match self.dim % 4 {
            2 => {
                // middle intersection pairing is skew and nondegenerate
                if chi % 2 != 0 {
                    return Err(Error::InvalidDescriptor(format!(
                        "{}: odd Euler characteristic in dimension 2 mod 4",
                        self.name
                    )));
                }
            }
            0 if self.dim > 0 => {
                if (self.signature + chi) % 2 != 0 {
                    return Err(Error::InvalidDescriptor(format!(
                        "{}: signature and Euler characteristic differ mod 2",
                        self.name
                    )));
                }
                let middle = self.betti[n / 2];
                if self.signature.unsigned_abs() > middle {
                    return Err(Error::InvalidDescriptor(format!(
                        "{}: |signature| exceeds the middle Betti number",
                        self.name
                    )));
                }
            }
            _ => {}
        }
        if self.dim % 4 != 0 && self.signature != 0 {
            return Err(Error::InvalidDescriptor(format!(
                "{}: nonzero signature away from dimensions 0 mod 4",
                self.name
            )));
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Kervaire semicharacteristic in dimensions 1 mod 4: the mod-2 sum of
    /// the Betti numbers up to the middle dimension.
    pub fn kervaire_semicharacteristic(&self) -> Result<u64> {
        if self.dim % 4 != 1 {
            return Err(Error::WrongDimensionClass(self.dim));
        }
        let half = (self.dim as usize - 1) / 2;
        let sum: u64 = self.betti[..=half].iter().sum();
        Ok(sum % 2)
    }
}

/// Parse "name:dim:b0,b1,...,bn:signature".
pub fn parse_descriptor(s: &str) -> Result<ManifoldDescriptor> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!(
            "descriptor '{}' is not name:dim:betti:signature",
            s
        )));
    }
    let dim: u32 = parts[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension '{}'", parts[1])))?;
    let betti: Vec<u64> = parts[2]
        .split(',')
        .map(|b| {
            b.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad Betti number '{}'", b)))
        })
        .collect::<Result<_>>()?;
    let signature: i64 = parts[3]
        .parse()
        .map_err(|_| Error::Parse(format!("bad signature '{}'", parts[3])))?;
    ManifoldDescriptor::new(parts[0], dim, betti, signature)
}

/// A few standard closed manifolds by name.
pub fn builtin_manifold(name: &str) -> Result<ManifoldDescriptor> {
    match name {
        "S1" => ManifoldDescriptor::new("S1", 1, vec![1, 1], 0),
        "S5" => ManifoldDescriptor::new("S5", 5, vec![1, 0, 0, 0, 0, 1], 0),
        "T5" => ManifoldDescriptor::new("T5", 5, vec![1, 5, 10, 10, 5, 1], 0),
        "S2" => ManifoldDescriptor::new("S2", 2, vec![1, 0, 1], 0),
        "T2" => ManifoldDescriptor::new("T2", 2, vec![1, 2, 1], 0),
        "CP2" => ManifoldDescriptor::new("CP2", 4, vec![1, 0, 1, 0, 1], 1),
        "K3" => ManifoldDescriptor::new("K3", 4, vec![1, 0, 22, 0, 1], -16),
        "S4" => ManifoldDescriptor::new("S4", 4, vec![1, 0, 0, 0, 1], 0),
        _ => Err(Error::FixtureNotFound(format!("manifold '{}'", name))),
    }
}

/// Order parameter of the Euler-class subgroup in dimension n: the subgroup
/// is Z for 0, trivial for 1, and Z/2 for 2.
pub fn euler_subgroup(n: u32) -> u64 {
    if n % 2 == 1 {
        0
    } else if n % 4 == 2 {
        2
    } else {
        1
    }
}

fn cyclic_name(order: u64) -> String {
    match order {
        0 => "Z".to_string(),
        1 => "0".to_string(),
        k => format!("Z/{}", k),
    }
}

/// Table of oriented bordism groups, indexed by dimension.
#[derive(Clone, Debug)]
pub struct BordismTable {
    entries: BTreeMap<u32, String>,
}

impl BordismTable {
    pub fn parse(text: &str) -> Result<BordismTable> {
        let mut entries = BTreeMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (n, group) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad bordism line '{}'", line)))?;
            let n: u32 = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad dimension '{}'", n)))?;
            entries.insert(n, group.trim().to_string());
        }
        Ok(BordismTable { entries })
    }

    pub fn builtin() -> BordismTable {
        BordismTable::parse(BORDISM_FIXTURE).expect("built-in table parses")
    }

    pub fn load(spec: &str) -> Result<BordismTable> {
        if spec == "default" {
            return Ok(BordismTable::builtin());
        }
        BordismTable::parse(&read_fixture(spec)?)
    }

    pub fn group(&self, n: u32) -> Result<&str> {
        self.entries
            .get(&n)
            .map(|s| s.as_str())
            .ok_or(Error::MissingBordismEntry(n))
    }
}

/// The bottom homotopy group of the n-th tangential Thom spectrum, as an
/// extension of the bordism group by the Euler-class subgroup of dimension
/// n + 1, with the invariant that detects the splitting when one exists.
#[derive(Clone, Debug)]
pub struct Pi0Report {
    pub n: u32,
    pub euler_part: String,
    pub bordism_part: String,
    pub group: String,
    pub splitting: Option<String>,
}

pub fn pi0_report(n: u32, table: &BordismTable) -> Result<Pi0Report> {
    let euler_part = cyclic_name(euler_subgroup(n + 1));
    let bordism_part = table.group(n)?.to_string();
    let parts: Vec<&str> = [euler_part.as_str(), bordism_part.as_str()]
        .into_iter()
        .filter(|s| *s != "0")
        .collect();
    let group = if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    };
    let splitting = match n % 4 {
        2 => Some("chi/2".to_string()),
        0 => Some("(sign+chi)/2".to_string()),
        1 => Some("kerv".to_string()),
        _ => None,
    };
    Ok(Pi0Report {
        n,
        euler_part,
        bordism_part,
        group,
        splitting,
    })
}

/// The integer invariant that splits the extension for the given manifold:
/// chi/2 in dimensions 2 mod 4, (sign + chi)/2 in dimensions 0 mod 4, the
/// Kervaire semicharacteristic in dimensions 1 mod 4. In dimensions 3 mod 4
/// the extension needs no splitting invariant.
pub fn splitting_value(m: &ManifoldDescriptor) -> Result<i64> {
    m.validate()?;
    match m.dim % 4 {
        2 => Ok(m.euler_characteristic() / 2),
        0 => Ok((m.signature + m.euler_characteristic()) / 2),
        1 => Ok(m.kervaire_semicharacteristic()? as i64),
        _ => Err(Error::NoSplittingNeeded),
    }
}

/// Adams number m(r) = prod over primes p of p^floor(r / (p - 1)).
pub fn adams_m(r: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut p = 2u64;
    while p - 1 <= r as u64 {
        if is_prime(p) {
            let e = r as u64 / (p - 1);
            acc *= BigInt::from(p).pow(e as u32);
        }
        p += 1;
    }
    acc
}

/// The coefficient kappa_k = (B_{2k} / (2k)!) m(2k) whose unit part governs
/// the image of the degree-4k Hurewicz map.
pub fn kappa_coefficient(k: u32) -> Result<Rat> {
    if k == 0 {
        return Err(Error::Parse("kappa needs k >= 1".into()));
    }
    let b = bernoulli(2 * k as u64)?;
    Ok(b / Rat::from_integer(factorial(2 * k as u64)) * Rat::from_integer(adams_m(2 * k)))
}

/// p-adic valuation of a nonzero rational.
pub fn p_valuation(x: &Rat, p: u64) -> Result<i64> {
    if Zero::is_zero(x) {
        return Err(Error::Inconsistency("valuation of zero".into()));
    }
    let p = BigInt::from(p);
    let count = |mut b: BigInt| {
        let mut v = 0i64;
        while (&b % &p).is_zero() {
            b /= &p;
            v += 1;
        }
        v
    };
    Ok(count(x.numer().abs()) - count(x.denom().abs()))
}

#[derive(Clone, Debug)]
pub struct KappaReport {
    pub k: u32,
    /// |kappa_k|; the overall sign is a convention the sources leave open,
    /// flagged by `sign_unknown`.
    pub abs_value: Rat,
    pub sign_unknown: bool,
    pub prime: u64,
    pub valuation: i64,
    pub is_p_integral: bool,
    pub is_p_unit: bool,
}

pub fn kappa_report(k: u32, prime: u64) -> Result<KappaReport> {
    if prime < 3 || !is_prime(prime) {
        return Err(Error::BadPrime(prime));
    }
    let value = kappa_coefficient(k)?;
    let valuation = p_valuation(&value, prime)?;
    Ok(KappaReport {
        k,
        abs_value: value.abs(),
        sign_unknown: true,
        prime,
        valuation,
        is_p_integral: valuation >= 0,
        is_p_unit: valuation == 0,
    })
}

/// Odd primes p <= bound with p >= 2k that do not divide the numerator of
/// B_{2k}: the range where the degree-4k coefficient obstruction vanishes
/// mod p.
pub fn vanishing_primes(k: u32, bound: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::Parse("vanishing primes need k >= 1".into()));
    }
    let numer = bernoulli(2 * k as u64)?.numer().abs();
    let mut out = Vec::new();
    for p in 3..=bound {
        if p % 2 == 1 && is_prime(p) && p >= 2 * k as u64 {
            if !(numer.clone() % BigInt::from(p)).is_zero() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Von Staudt-Clausen denominator of B_{2k}: the product of the primes p
/// with (p - 1) dividing 2k.
pub fn von_staudt_denominator(k: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut p = 2u64;
    while p - 1 <= 2 * k as u64 {
        if is_prime(p) && (2 * k as u64) % (p - 1) == 0 {
            acc *= BigInt::from(p);
        }
        p += 1;
    }
    acc
}

/// Degrees (in the 4k-grading) where the mod-p Wu classes of the Thom class
/// live: k = i (p - 1) / 2 for i >= 1.
pub fn wu_vanishing_degrees(prime: u64, kmax: u32) -> Result<Vec<u32>> {
    if prime < 3 || !is_prime(prime) {
        return Err(Error::BadPrime(prime));
    }
    let step = ((prime - 1) / 2) as u32;
    Ok((1..).map(|i| i * step).take_while(|&k| k <= kmax).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn euler_characteristics() {
        assert_eq!(builtin_manifold("S2").unwrap().euler_characteristic(), 2);
        assert_eq!(builtin_manifold("T2").unwrap().euler_characteristic(), 0);
        assert_eq!(builtin_manifold("K3").unwrap().euler_characteristic(), 24);
    }

    #[test]
    fn kervaire_values() {
        assert_eq!(
            builtin_manifold("S1").unwrap().kervaire_semicharacteristic().unwrap(),
            1
        );
        assert_eq!(
            builtin_manifold("S5").unwrap().kervaire_semicharacteristic().unwrap(),
            1
        );
        assert_eq!(
            builtin_manifold("T5").unwrap().kervaire_semicharacteristic().unwrap(),
            0
        );
        assert!(matches!(
            builtin_manifold("S2").unwrap().kervaire_semicharacteristic(),
            Err(Error::WrongDimensionClass(2))
        ));
    }

    #[test]
    fn descriptor_validation() {
        // duality violation
        assert!(ManifoldDescriptor::new("bad", 2, vec![1, 0, 2], 0).is_err());
        // odd Euler characteristic in dimension 2
        assert!(ManifoldDescriptor::new("bad", 2, vec![1, 1, 1], 0).is_err());
        // signature outside dimensions 0 mod 4
        assert!(ManifoldDescriptor::new("bad", 2, vec![1, 2, 1], 1).is_err());
        // signature too large for the middle Betti number
        assert!(ManifoldDescriptor::new("bad", 4, vec![1, 0, 1, 0, 1], 3).is_err());
        // signature/Euler parity in dimension 4
        assert!(ManifoldDescriptor::new("bad", 4, vec![1, 0, 2, 0, 1], 1).is_err());
        assert!(builtin_manifold("CP2").is_ok());
    }

    #[test]
    fn descriptor_parsing() {
        let t5 = parse_descriptor("T5:5:1,5,10,10,5,1:0").unwrap();
        assert_eq!(t5, builtin_manifold("T5").unwrap());
        assert!(parse_descriptor("x:2:1,2").is_err());
    }

    #[test]
    fn euler_subgroup_by_residue() {
        assert_eq!(euler_subgroup(3), 0);
        assert_eq!(euler_subgroup(2), 2);
        assert_eq!(euler_subgroup(4), 1);
        assert_eq!(euler_subgroup(6), 2);
    }

    #[test]
    fn pi0_low_dimensions() {
        let t = BordismTable::builtin();
        let expect = [
            (1u32, "Z/2"),
            (2, "Z"),
            (3, "0"),
            (4, "Z + Z"),
        ];
        for (n, g) in expect {
            assert_eq!(pi0_report(n, &t).unwrap().group, g, "n = {}", n);
        }
        assert_eq!(pi0_report(1, &t).unwrap().splitting.as_deref(), Some("kerv"));
        assert_eq!(pi0_report(2, &t).unwrap().splitting.as_deref(), Some("chi/2"));
        assert_eq!(
            pi0_report(4, &t).unwrap().splitting.as_deref(),
            Some("(sign+chi)/2")
        );
        assert_eq!(pi0_report(3, &t).unwrap().splitting, None);
        assert!(matches!(
            pi0_report(40, &t),
            Err(Error::MissingBordismEntry(40))
        ));
    }

    #[test]
    fn splitting_values() {
        assert_eq!(splitting_value(&builtin_manifold("S2").unwrap()).unwrap(), 1);
        assert_eq!(splitting_value(&builtin_manifold("CP2").unwrap()).unwrap(), 2);
        assert_eq!(splitting_value(&builtin_manifold("K3").unwrap()).unwrap(), 4);
        assert_eq!(splitting_value(&builtin_manifold("T5").unwrap()).unwrap(), 0);
        let s3 = ManifoldDescriptor::new("S3", 3, vec![1, 0, 0, 1], 0).unwrap();
        assert!(matches!(
            splitting_value(&s3),
            Err(Error::NoSplittingNeeded)
        ));
    }

    #[test]
    fn adams_numbers() {
        assert_eq!(adams_m(0), BigInt::one());
        assert_eq!(adams_m(2), BigInt::from(12));
        assert_eq!(adams_m(4), BigInt::from(720));
        assert_eq!(adams_m(8), BigInt::from(3628800));
    }

    #[test]
    fn adams_divisibility_and_valuations() {
        for r in 1..=16u32 {
            assert!(
                (adams_m(r) % adams_m(r - 1)).is_zero(),
                "m({}) does not divide m({})",
                r - 1,
                r
            );
            for p in [2u64, 3, 5, 7, 11, 13, 17] {
                let v = p_valuation(&Rat::from_integer(adams_m(r)), p).unwrap();
                assert_eq!(v, (r as i64) / (p as i64 - 1), "r = {}, p = {}", r, p);
            }
        }
    }

    #[test]
    fn vanishing_primes_make_kappa_a_unit() {
        for k in 1..=10u32 {
            for p in vanishing_primes(k, 100).unwrap() {
                let r = kappa_report(k, p).unwrap();
                assert!(r.is_p_unit, "kappa_{} not a unit mod {}", k, p);
            }
        }
    }

    #[test]
    fn wu_and_vanishing_sets_overlap_consistently() {
        // p = 3 covers every k; k = 1, p = 3 lies in both outputs
        assert_eq!(wu_vanishing_degrees(3, 10).unwrap(), (1..=10).collect::<Vec<_>>());
        assert!(vanishing_primes(1, 10).unwrap().contains(&3));
    }

    #[test]
    fn kappa_units() {
        assert_eq!(kappa_coefficient(1).unwrap(), rat(1, 1));
        assert_eq!(kappa_coefficient(2).unwrap().abs(), rat(1, 1));
        assert_eq!(kappa_coefficient(4).unwrap().abs(), rat(3, 1));
        let r = kappa_report(4, 3).unwrap();
        assert!(r.is_p_integral && !r.is_p_unit);
        let r = kappa_report(4, 5).unwrap();
        assert!(r.is_p_unit);
    }

    #[test]
    fn vanishing_prime_ranges() {
        assert_eq!(vanishing_primes(1, 20).unwrap(), vec![3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(vanishing_primes(3, 20).unwrap(), vec![7, 11, 13, 17, 19]);
    }

    #[test]
    fn von_staudt_matches_bernoulli_denominators() {
        for k in 1..=20u32 {
            assert_eq!(
                &von_staudt_denominator(k),
                bernoulli(2 * k as u64).unwrap().denom(),
                "k = {}",
                k
            );
        }
    }

    #[test]
    fn wu_degree_lattice() {
        assert_eq!(wu_vanishing_degrees(3, 4).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(wu_vanishing_degrees(5, 7).unwrap(), vec![2, 4, 6]);
        assert!(wu_vanishing_degrees(2, 4).is_err());
    }

    #[test]
    fn bordism_table_parsing() {
        let t = BordismTable::parse("0 = Z\n5 = Z/2\n").unwrap();
        assert_eq!(t.group(5).unwrap(), "Z/2");
        assert!(t.group(1).is_err());
    }
}
