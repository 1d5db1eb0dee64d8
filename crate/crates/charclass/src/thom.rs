//! Thom-module cohomology of MTSO(n), restriction maps, Leray-Hirsch bundle
//! models with fibre integration, generalized MMM classes and the signature
//! identity.

use crate::error::{Error, Result};
use crate::genus::{multiplicative_sequence, genus_series, GenusKind};
use crate::poly::{parse_poly, GradedPoly, RingPresentation};
use crate::scalar::{Rat, Scalar};
use num::traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// An element u_{shift} * payload of the free rank-1 Thom module over the
/// base presentation; the total degree is shift + deg(payload).
#[derive(Clone, Debug, PartialEq)]
pub struct ThomElement<K: Scalar> {
    pub shift: i64,
    pub payload: GradedPoly<K>,
}

impl<K: Scalar> ThomElement<K> {
    pub fn new(shift: i64, payload: GradedPoly<K>) -> Self {
        ThomElement { shift, payload }
    }

    pub fn is_zero(&self) -> bool {
        self.payload.is_zero()
    }

    /// Degrees of the nonzero homogeneous pieces.
    pub fn degrees(&self) -> Vec<i64> {
        self.payload
            .components()
            .keys()
            .map(|d| self.shift + *d as i64)
            .collect()
    }

    /// Module action: (u * a) * b = u * (a b).
    pub fn module_mul(&self, b: &GradedPoly<K>) -> Self {
        ThomElement {
            shift: self.shift,
            payload: self.payload.mul(b),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shift, other.shift, "shift mismatch in Thom addition");
        ThomElement {
            shift: self.shift,
            payload: self.payload.add(&other.payload),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shift, other.shift, "shift mismatch in Thom subtraction");
        ThomElement {
            shift: self.shift,
            payload: self.payload.sub(&other.payload),
        }
    }
}

impl<K: Scalar> fmt::Display for ThomElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.payload.is_zero() {
            return write!(f, "0");
        }
        let u = format!("u_{}", self.shift);
        let terms: Vec<_> = self.payload.terms().collect();
        if terms.len() == 1 {
            let (exps, c) = terms[0];
            let mut s = String::new();
            if *c != c.one_like() {
                s.push_str(&format!("{}*", c));
            }
            s.push_str(&u);
            let gens = self.payload.presentation().generators();
            for (j, e) in exps.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                s.push_str(&format!("*{}", gens[j].name));
                if *e > 1 {
                    s.push_str(&format!("^{}", e));
                }
            }
            write!(f, "{}", s)
        } else {
            write!(f, "{}*({})", u, self.payload)
        }
    }
}

/// Thom isomorphism: promote a reduced class over BSO(n) to u_{-n} * c.
pub fn thom_promote<K: Scalar>(c: GradedPoly<K>, n: u32) -> ThomElement<K> {
    ThomElement::new(-(n as i64), c)
}

/// Restriction along eta: MTSO(n) -> suspension of MTSO(n+1), read on
/// cohomology as a map from Thom elements over BSO(n+1) to Thom elements
/// over BSO(n), with one suspension recorded.
///
/// L_{n+1}|BSO(n) = L_n + R dictates the payload map: for n+1 = 2m both chi
/// and p_m (= chi^2) restrict to 0; for n+1 = 2m+1 every p_i survives.
pub fn eta_restrict<K: Scalar>(
    e: &ThomElement<K>,
    n_plus_1: u32,
    target: &Arc<RingPresentation>,
) -> Result<(ThomElement<K>, u32)> {
    assert_eq!(e.shift, -(n_plus_1 as i64), "element is not over BSO(n+1)");
    let source = e.payload.presentation();
    let mut out = GradedPoly::zero(target);
    let killed: Vec<String> = if n_plus_1 % 2 == 0 {
        let m = n_plus_1 / 2;
        vec![format!("p{}", m), "chi".to_string()]
    } else {
        Vec::new()
    };
    for (exps, c) in e.payload.terms() {
        let mut new_exps = vec![0u32; target.generators().len()];
        let mut dead = false;
        for (i, ex) in exps.iter().enumerate() {
            if *ex == 0 {
                continue;
            }
            let name = &source.generators()[i].name;
            if killed.iter().any(|k| k == name) {
                dead = true;
                break;
            }
            let idx = target.index_of(name)?;
            new_exps[idx] += ex;
        }
        if !dead {
            out = out.add(&GradedPoly::monomial(target, new_exps, c.clone()));
        }
    }
    Ok((ThomElement::new(-(n_plus_1 as i64 - 1), out), 1))
}

/// Monomial basis of H^degree(MTSO(n)) in one degree, via the shifted
/// cohomology of BSO(n).
#[derive(Clone, Debug)]
pub struct ManifoldBasisReport {
    pub n: u32,
    pub degree: i64,
    pub field: String,
    pub basis: Vec<ThomElement<Rat>>,
}

pub fn mtso_basis(n: u32, degree: i64, field: &str) -> Result<ManifoldBasisReport> {
    if field == "F2" || field == "f2" {
        return Err(Error::BadPrime(2));
    }
    let pres = RingPresentation::bso(n, crate::poly::DEFAULT_TRUNCATION);
    let target = degree + n as i64;
    let mut basis = Vec::new();
    if target >= 0 {
        for exps in pres.monomials_of_degree(target as u32) {
            basis.push(ThomElement::new(
                -(n as i64),
                GradedPoly::monomial(&pres, exps, Rat::one()),
            ));
        }
    }
    Ok(ManifoldBasisReport {
        n,
        degree,
        field: field.to_string(),
        basis,
    })
}

/// An element of a Leray-Hirsch bundle model: base coefficients indexed by
/// the fibre basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelElement {
    pub comps: Vec<GradedPoly<Rat>>,
}

impl ModelElement {
    pub fn zero(model: &BundleModel) -> ModelElement {
        ModelElement {
            comps: vec![GradedPoly::zero(&model.base); model.basis.len()],
        }
    }

    pub fn from_base(model: &BundleModel, b: GradedPoly<Rat>) -> ModelElement {
        let mut e = ModelElement::zero(model);
        e.comps[0] = b;
        e
    }

    pub fn basis_elem(model: &BundleModel, idx: usize) -> ModelElement {
        let mut e = ModelElement::zero(model);
        e.comps[idx] = GradedPoly::constant(&model.base, Rat::one());
        e
    }

    pub fn add(&self, other: &ModelElement) -> ModelElement {
        ModelElement {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> ModelElement {
        ModelElement {
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }
}

/// A finite Leray-Hirsch presentation of the cohomology of a fibre bundle:
/// free module over the base on the fibre basis, with the products of basis
/// elements and the vertical characteristic classes recorded explicitly.
#[derive(Clone, Debug)]
pub struct BundleModel {
    pub name: String,
    pub base: Arc<RingPresentation>,
    pub fibre_dim: u32,
    /// (name, degree); index 0 is the unit, the top element has degree
    /// `fibre_dim`.
    pub basis: Vec<(String, u32)>,
    /// products[i][j] = basis_i * basis_j for i, j >= 1.
    pub products: HashMap<(usize, usize), ModelElement>,
    /// p_i(T_v E) for i = 1.., as model elements.
    pub vertical_p: Vec<ModelElement>,
    /// chi(T_v E), when the fibre dimension is even.
    pub vertical_chi: Option<ModelElement>,
    /// p_i(TB) as base classes; empty means stably trivial base tangent.
    pub tangent_p: Vec<GradedPoly<Rat>>,
    /// Fundamental monomial of the base, for evaluation against [B].
    pub fundamental: Option<Vec<u32>>,
    pub top: usize,
}

impl BundleModel {
    pub fn basis_index(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown fibre basis element '{}'", name)))
    }

    pub fn mul(&self, a: &ModelElement, b: &ModelElement) -> ModelElement {
        let mut out = ModelElement::zero(self);
        for (i, pa) in a.comps.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (j, pb) in b.comps.iter().enumerate() {
                if pb.is_zero() {
                    continue;
                }
                let coeff = pa.mul(pb);
                let prod = self.basis_product(i, j);
                out = out.add(&prod_scale(&prod, &coeff));
            }
        }
        out
    }

    fn basis_product(&self, i: usize, j: usize) -> ModelElement {
        if i == 0 {
            return ModelElement::basis_elem(self, j);
        }
        if j == 0 {
            return ModelElement::basis_elem(self, i);
        }
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.products
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| ModelElement::zero(self))
    }

    pub fn pow(&self, a: &ModelElement, e: u32) -> ModelElement {
        let mut acc = ModelElement::from_base(self, GradedPoly::constant(&self.base, Rat::one()));
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Evaluate a characteristic-class polynomial in p_i (and chi) at the
    /// vertical tangent bundle.
    pub fn eval_vertical(&self, c: &GradedPoly<Rat>) -> Result<ModelElement> {
        let gens = c.presentation().generators().to_vec();
        let mut images: Vec<ModelElement> = Vec::new();
        for g in &gens {
            if g.name == "chi" {
                match &self.vertical_chi {
                    Some(e) => images.push(e.clone()),
                    None => images.push(ModelElement::zero(self)),
                }
            } else if let Some(stripped) = g.name.strip_prefix('p') {
                let i: usize = stripped
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad Pontrjagin generator {}", g.name)))?;
                if i >= 1 && i <= self.vertical_p.len() {
                    images.push(self.vertical_p[i - 1].clone());
                } else {
                    images.push(ModelElement::zero(self));
                }
            } else {
                return Err(Error::PresentationMismatch(format!(
                    "generator {} has no vertical interpretation",
                    g.name
                )));
            }
        }
        let mut out = ModelElement::zero(self);
        for (exps, coeff) in c.terms() {
            let mut term =
                ModelElement::from_base(self, GradedPoly::constant(&self.base, coeff.clone()));
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    term = self.mul(&term, &self.pow(&images[i], *e));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Total L-class of the base tangent bundle, from the recorded p_i(TB).
    pub fn l_of_base_tangent(&self) -> Result<GradedPoly<Rat>> {
        let trunc = self.base.truncation();
        let kmax = trunc / 4 + 1;
        let m = self.tangent_p.len().max(1) as u32;
        let l = multiplicative_sequence(&genus_series(GenusKind::L, kmax as usize), m, 4 * kmax)?;
        let mut assignment = HashMap::new();
        for i in 1..=m as usize {
            let img = self
                .tangent_p
                .get(i - 1)
                .cloned()
                .unwrap_or_else(|| GradedPoly::zero(&self.base));
            assignment.insert(format!("p{}", i), img);
        }
        let mut acc = GradedPoly::constant(&self.base, Rat::one());
        for (_, lk) in &l.by_k {
            let image = lk.substitute(&assignment, &self.base)?;
            acc = acc.add(&image);
        }
        // remove the doubled constant term
        acc = acc.sub(&GradedPoly::constant(&self.base, Rat::one()));
        Ok(acc)
    }
}

fn prod_scale(e: &ModelElement, coeff: &GradedPoly<Rat>) -> ModelElement {
    ModelElement {
        comps: e.comps.iter().map(|p| p.mul(coeff)).collect(),
    }
}

/// Umkehr map f_!: coefficient of the top fibre-basis element; the degree
/// drops by the fibre dimension.
pub fn fiber_integrate(model: &BundleModel, x: &ModelElement) -> GradedPoly<Rat> {
    x.comps[model.top].clone()
}

/// Sphere-bundle model S(V) -> B for a rank >= 2 bundle V with Euler class
/// zero: free module on {1, z}, z^2 = 0, and T_v S(V) + R = f*V.
pub fn sphere_bundle_model(
    rank: u32,
    base: &Arc<RingPresentation>,
    pontrjagin_v: Vec<GradedPoly<Rat>>,
    euler_v: GradedPoly<Rat>,
    name: &str,
) -> Result<BundleModel> {
    if rank < 2 {
        return Err(Error::DegreeMismatch("sphere bundle needs rank >= 2".into()));
    }
    if !euler_v.is_zero() {
        return Err(Error::Inconsistency(
            "only the e(V) = 0 sphere-bundle fixture is built in".into(),
        ));
    }
    for (i, p) in pontrjagin_v.iter().enumerate() {
        if !p.is_zero() && p.homogeneous_component(4 * (i as u32 + 1)) != *p {
            return Err(Error::DegreeMismatch(format!(
                "p_{}(V) is not homogeneous of degree {}",
                i + 1,
                4 * (i + 1)
            )));
        }
    }
    let fibre_dim = rank - 1;
    let mut model = BundleModel {
        name: name.to_string(),
        base: base.clone(),
        fibre_dim,
        basis: vec![("1".to_string(), 0), ("z".to_string(), fibre_dim)],
        products: HashMap::new(),
        vertical_p: Vec::new(),
        vertical_chi: None,
        tangent_p: Vec::new(),
        fundamental: None,
        top: 1,
    };
    // z^2 = 0 for trivial Euler class
    model
        .products
        .insert((1, 1), ModelElement::zero(&model));
    // p_i(T_v) = f* p_i(V) by stability
    model.vertical_p = pontrjagin_v
        .into_iter()
        .map(|p| ModelElement::from_base(&model, p))
        .collect();
    if fibre_dim % 2 == 0 {
        // chi of the odd-rank vertical bundle vanishes rationally anyway
        model.vertical_chi = Some(ModelElement::zero(&model));
    }
    Ok(model)
}

/// Generalized MMM class kappa_c = f_!(c(T_v E)).
pub fn mmm_class(model: &BundleModel, c: &GradedPoly<Rat>) -> Result<GradedPoly<Rat>> {
    let v = model.eval_vertical(c)?;
    Ok(fiber_integrate(model, &v))
}

/// Signature of the total space via <L(TB) * f_!(L(T_v E)), [B]>.
pub fn signature_via_l(model: &BundleModel) -> Result<Rat> {
    let fundamental = model
        .fundamental
        .as_ref()
        .ok_or(Error::MissingFundamentalClass)?;
    let m_fibre = (model.fibre_dim / 2 + 1).max(1);
    let trunc = model.base.truncation() + model.fibre_dim;
    let l_fibre = multiplicative_sequence(
        &genus_series(GenusKind::L, (trunc / 4 + 1) as usize),
        m_fibre,
        trunc,
    )?;
    let l_vertical = model.eval_vertical(&l_fibre.total())?;
    let pushed = fiber_integrate(model, &l_vertical);
    let l_base = model.l_of_base_tangent()?;
    let total = l_base.mul(&pushed);
    Ok(total
        .coefficient(fundamental)
        .cloned()
        .unwrap_or_else(Rat::zero))
}

/// Check the transfer-style identity f_!(y(T_v) chi(T_v)) =
/// chi(fibre) * (base component of y(T_v)).
pub fn transfer_pullback_check(model: &BundleModel, y: &GradedPoly<Rat>) -> Result<bool> {
    if model.fibre_dim % 2 != 0 {
        return Err(Error::DegreeMismatch(
            "transfer check needs an even fibre dimension".into(),
        ));
    }
    let chi_v = model
        .vertical_chi
        .clone()
        .ok_or_else(|| Error::Inconsistency("model has no vertical Euler class".into()))?;
    let y_v = model.eval_vertical(y)?;
    let lhs = fiber_integrate(model, &model.mul(&y_v, &chi_v));
    let fibre_euler = fiber_integrate(model, &chi_v)
        .coefficient(&vec![0; model.base.generators().len()])
        .cloned()
        .unwrap_or_else(Rat::zero);
    let rhs = y_v.comps[0].scale(&fibre_euler);
    Ok(lhs == rhs)
}

// ---------------------------------------------------------------------------
// Fixture file format: line-oriented "key = value" records.
//
//   name = cp1-bundle
//   fibre_dim = 2
//   base_gen = h 2
//   base_trunc = 2
//   fundamental = h
//   basis = z 2
//   product = z z : -1*h @ z
//   vertical_p = 1 : 1*h^2 @ 1
//   vertical_chi = 1*h @ 1 + 2 @ z
//   tangent_p = 1 : 0
//
// Model elements are '+'-joined "poly @ basisname" pairs, or "0". The unit
// basis element "1" is implicit and must not be redeclared.
// ---------------------------------------------------------------------------

pub fn parse_model(input: &str) -> Result<BundleModel> {
    let mut name = String::from("model");
    let mut fibre_dim: Option<u32> = None;
    let mut gens = Vec::new();
    let mut trunc = crate::poly::DEFAULT_TRUNCATION;
    let mut fundamental_src: Option<String> = None;
    let mut basis: Vec<(String, u32)> = vec![("1".to_string(), 0)];
    let mut product_src: Vec<(String, String, String)> = Vec::new();
    let mut vertical_p_src: Vec<(usize, String)> = Vec::new();
    let mut vertical_chi_src: Option<String> = None;
    let mut tangent_p_src: Vec<(usize, String)> = Vec::new();

    for line in input.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad fixture line '{}'", line)))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "name" => name = value.to_string(),
            "fibre_dim" => {
                fibre_dim = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad fibre_dim '{}'", value)))?,
                )
            }
            "base_gen" => {
                let mut it = value.split_whitespace();
                let gname = it
                    .next()
                    .ok_or_else(|| Error::Parse("base_gen needs a name".into()))?;
                let deg: u32 = it
                    .next()
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::Parse("base_gen needs a degree".into()))?;
                gens.push(crate::poly::Generator::new(gname, deg));
            }
            "base_trunc" => {
                trunc = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad base_trunc '{}'", value)))?
            }
            "fundamental" => fundamental_src = Some(value.to_string()),
            "basis" => {
                let mut it = value.split_whitespace();
                let bname = it
                    .next()
                    .ok_or_else(|| Error::Parse("basis needs a name".into()))?;
                let deg: u32 = it
                    .next()
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::Parse("basis needs a degree".into()))?;
                basis.push((bname.to_string(), deg));
            }
            "product" => {
                let (lhs, rhs) = value
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad product line '{}'", value)))?;
                let mut it = lhs.split_whitespace();
                let a = it
                    .next()
                    .ok_or_else(|| Error::Parse("product needs two factors".into()))?;
                let b = it
                    .next()
                    .ok_or_else(|| Error::Parse("product needs two factors".into()))?;
                product_src.push((a.to_string(), b.to_string(), rhs.trim().to_string()));
            }
            "vertical_p" => {
                let (i, rhs) = value
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad vertical_p line '{}'", value)))?;
                let i: usize = i
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertical_p index '{}'", i)))?;
                vertical_p_src.push((i, rhs.trim().to_string()));
            }
            "vertical_chi" => vertical_chi_src = Some(value.to_string()),
            "tangent_p" => {
                let (i, rhs) = value
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad tangent_p line '{}'", value)))?;
                let i: usize = i
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad tangent_p index '{}'", i)))?;
                tangent_p_src.push((i, rhs.trim().to_string()));
            }
            other => return Err(Error::Parse(format!("unknown fixture key '{}'", other))),
        }
    }

    let fibre_dim = fibre_dim.ok_or_else(|| Error::Parse("fixture needs fibre_dim".into()))?;
    let base = RingPresentation::polynomial(gens, trunc);
    let top = basis
        .iter()
        .position(|(_, d)| *d == fibre_dim)
        .ok_or_else(|| Error::Parse("no fibre-basis element in the top degree".into()))?;
    let mut model = BundleModel {
        name,
        base: base.clone(),
        fibre_dim,
        basis,
        products: HashMap::new(),
        vertical_p: Vec::new(),
        vertical_chi: None,
        tangent_p: Vec::new(),
        fundamental: None,
        top,
    };
    for (a, b, rhs) in product_src {
        let i = model.basis_index(&a)?;
        let j = model.basis_index(&b)?;
        let elem = parse_model_element(&model, &rhs)?;
        let key = if i <= j { (i, j) } else { (j, i) };
        model.products.insert(key, elem);
    }
    let max_p = vertical_p_src.iter().map(|(i, _)| *i).max().unwrap_or(0);
    model.vertical_p = vec![ModelElement::zero(&model); max_p];
    for (i, rhs) in vertical_p_src {
        if i == 0 {
            return Err(Error::Parse("vertical_p indices start at 1".into()));
        }
        model.vertical_p[i - 1] = parse_model_element(&model, &rhs)?;
    }
    if let Some(src) = vertical_chi_src {
        model.vertical_chi = Some(parse_model_element(&model, &src)?);
    }
    let max_t = tangent_p_src.iter().map(|(i, _)| *i).max().unwrap_or(0);
    model.tangent_p = vec![GradedPoly::zero(&base); max_t];
    for (i, rhs) in tangent_p_src {
        if i == 0 {
            return Err(Error::Parse("tangent_p indices start at 1".into()));
        }
        model.tangent_p[i - 1] = parse_poly(&base, &rhs, &Rat::one())?;
    }
    if let Some(src) = fundamental_src {
        let poly = parse_poly(&base, &format!("1*{}", src), &Rat::one())?;
        let (exps, _) = poly
            .terms()
            .next()
            .ok_or_else(|| Error::Parse("empty fundamental monomial".into()))?;
        model.fundamental = Some(exps.clone());
    }
    validate_model(&model)?;
    Ok(model)
}

fn parse_model_element(model: &BundleModel, src: &str) -> Result<ModelElement> {
    let src = src.trim();
    let mut out = ModelElement::zero(model);
    if src == "0" {
        return Ok(out);
    }
    for part in src.split(" + ") {
        let (poly_src, basis_name) = match part.split_once('@') {
            Some((p, b)) => (p.trim(), b.trim()),
            None => (part.trim(), "1"),
        };
        let idx = model.basis_index(basis_name)?;
        let poly = parse_poly(&model.base, poly_src, &Rat::one())?;
        out.comps[idx] = out.comps[idx].add(&poly);
    }
    Ok(out)
}

fn validate_model(model: &BundleModel) -> Result<()> {
    // degree consistency of vertical data
    for (i, e) in model.vertical_p.iter().enumerate() {
        check_element_degree(model, e, 4 * (i as u32 + 1), &format!("p_{}(T_v)", i + 1))?;
    }
    if let Some(chi) = &model.vertical_chi {
        check_element_degree(model, chi, model.fibre_dim, "chi(T_v)")?;
    }
    Ok(())
}

fn check_element_degree(
    model: &BundleModel,
    e: &ModelElement,
    degree: u32,
    what: &str,
) -> Result<()> {
    for (i, p) in e.comps.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let fibre_deg = model.basis[i].1;
        if fibre_deg > degree || p.homogeneous_component(degree - fibre_deg) != *p {
            return Err(Error::DegreeMismatch(format!(
                "{} has a component of the wrong degree on {}",
                what, model.basis[i].0
            )));
        }
    }
    Ok(())
}

pub use crate::fixtures::load_model;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::{poly_reduce, Generator};
    use crate::scalar::rat_int;

    fn bso3() -> Arc<RingPresentation> {
        RingPresentation::bso(3, 64)
    }

    fn bso4() -> Arc<RingPresentation> {
        RingPresentation::bso(4, 64)
    }

    fn gp(pres: &Arc<RingPresentation>, s: &str) -> GradedPoly<Rat> {
        parse_poly(pres, s, &Rat::one()).unwrap()
    }

    #[test]
    fn promote_degrees() {
        let p1 = gp(&bso3(), "1*p1");
        let t = thom_promote(p1, 3);
        assert_eq!(t.degrees(), vec![1]);
        let one = gp(&bso3(), "1");
        assert_eq!(thom_promote(one, 3).degrees(), vec![-3]);
    }

    #[test]
    fn eta_restriction_examples() {
        let b4 = bso4();
        let b3 = bso3();
        // u_{-4} p1 p2 -> 0
        let e = thom_promote(gp(&b4, "1*p1*p2"), 4);
        let (r, susp) = eta_restrict(&e, 4, &b3).unwrap();
        assert!(r.is_zero());
        assert_eq!(susp, 1);
        // u_{-4} -> u_{-3}
        let e = thom_promote(gp(&b4, "1"), 4);
        let (r, _) = eta_restrict(&e, 4, &b3).unwrap();
        assert_eq!(r, thom_promote(gp(&b3, "1"), 3));
        // u_{-4} p1 -> u_{-3} p1
        let e = thom_promote(gp(&b4, "1*p1"), 4);
        let (r, _) = eta_restrict(&e, 4, &b3).unwrap();
        assert_eq!(r, thom_promote(gp(&b3, "1*p1"), 3));
        // chi also dies
        let e = thom_promote(gp(&b4, "1*chi"), 4);
        let (r, _) = eta_restrict(&e, 4, &b3).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn mtso3_basis_in_low_degrees() {
        let r = mtso_basis(3, 1, "Q").unwrap();
        assert_eq!(r.basis.len(), 1);
        assert_eq!(r.basis[0].to_string(), "u_-3*p1");
        let r = mtso_basis(3, -3, "Q").unwrap();
        assert_eq!(r.basis.len(), 1);
        assert_eq!(r.basis[0].to_string(), "u_-3");
        assert!(mtso_basis(3, 2, "Q").unwrap().basis.is_empty());
        assert!(mtso_basis(3, 1, "F2").is_err());
    }

    #[test]
    fn thom_display() {
        let b4 = bso4();
        let t = thom_promote(gp(&b4, "1*p1*p2"), 4);
        assert_eq!(t.to_string(), "u_-4*p1*p2");
        let t = thom_promote(gp(&b4, "2*p1"), 4);
        assert_eq!(t.to_string(), "2*u_-4*p1");
        let t = thom_promote(gp(&b4, "1 + 1*p1"), 4);
        assert_eq!(t.to_string(), "u_-4*(1 + 1*p1)");
    }

    fn s3_model() -> BundleModel {
        parse_model(fixtures::SPHERE_S3_FIXTURE).unwrap()
    }

    fn cp1_model() -> BundleModel {
        parse_model(fixtures::CP1_FIXTURE).unwrap()
    }

    #[test]
    fn sphere_model_shape() {
        let m = s3_model();
        assert_eq!(m.fibre_dim, 3);
        assert_eq!(m.basis.len(), 2);
        // z^2 = 0
        let z = ModelElement::basis_elem(&m, 1);
        assert!(m.mul(&z, &z).is_zero());
        // p1(T_v) = f* p1(V)
        assert_eq!(m.vertical_p[0].comps[0], gp(&m.base, "1*h^2"));
        assert!(m.vertical_p[0].comps[1].is_zero());
    }

    #[test]
    fn fiber_integration_rules() {
        let m = s3_model();
        let z = ModelElement::basis_elem(&m, 1);
        let one = ModelElement::basis_elem(&m, 0);
        assert_eq!(fiber_integrate(&m, &z), gp(&m.base, "1"));
        assert!(fiber_integrate(&m, &one).is_zero());
        // projection formula: f_!(f*(h) z) = h
        let h = ModelElement::from_base(&m, gp(&m.base, "1*h"));
        assert_eq!(fiber_integrate(&m, &m.mul(&h, &z)), gp(&m.base, "1*h"));
    }

    #[test]
    fn cp1_euler_number() {
        let m = cp1_model();
        let chi = m.vertical_chi.clone().unwrap();
        assert_eq!(fiber_integrate(&m, &chi), gp(&m.base, "2"));
        // kappa_{chi^2} = f_!((2z + h)^2) = f_!(4z^2 + 4hz + h^2) = -4h + 4h = ...
        let b2 = RingPresentation::bso(2, 64);
        let chi2 = gp(&b2, "1*chi^2");
        let kappa = mmm_class(&m, &chi2).unwrap();
        // (2z+h)^2 = 4z^2 + 4hz + h^2 = 4(-hz) + 4hz + h^2 = h^2 = 0 (trunc 2)
        // so f_! gives 0; with z^2 = -hz the Gysin terms cancel.
        assert!(kappa.is_zero());
    }

    #[test]
    fn mmm_classes_vanish_on_sphere_model() {
        let m = s3_model();
        let l = multiplicative_sequence(&genus_series(GenusKind::L, 4), 1, 16).unwrap();
        for k in 1..=4 {
            let c = poly_reduce(&l.component(k), &RingPresentation::bso(3, 64)).unwrap();
            let kappa = mmm_class(&m, &c).unwrap();
            assert!(kappa.is_zero(), "kappa_L_{} nonzero", 4 * k);
        }
    }

    #[test]
    fn signature_vanishes_on_fixtures() {
        for m in [s3_model(), fixtures::trivial_m3_model()] {
            assert_eq!(signature_via_l(&m).unwrap(), rat_int(0));
        }
    }

    #[test]
    fn transfer_identity_on_cp1() {
        let m = cp1_model();
        let b2 = RingPresentation::bso(2, 64);
        let y = gp(&b2, "1");
        assert!(transfer_pullback_check(&m, &y).unwrap());
    }

    #[test]
    fn thom_iso_bijective_degreewise() {
        for n in 1..=4u32 {
            let pres = RingPresentation::bso(n, 64);
            for d in -20i64..=20 {
                let basis = mtso_basis(n, d, "Q").unwrap().basis.len();
                let target = d + n as i64;
                let expected = if target < 0 {
                    0
                } else {
                    pres.monomials_of_degree(target as u32).len()
                };
                assert_eq!(basis, expected, "n = {}, degree = {}", n, d);
            }
        }
    }

    #[test]
    fn sphere_model_constructor_rejects_nonzero_euler() {
        let base = RingPresentation::polynomial(vec![Generator::new("h", 2)], 4);
        let e = gp(&base, "1*h^2");
        assert!(sphere_bundle_model(4, &base, vec![], e, "bad").is_err());
    }
}
