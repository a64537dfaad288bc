//! Coefficient rings: fields and (mixed polynomial/Laurent) monomial rings over them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::field::{BaseField, FieldElem};

/// Exponent vector of a monomial, one entry per ring variable.
pub type Exponent = Vec<i32>;

/// A Laurent ring `K[x_1^±, …]`, where variables flagged `polynomial` only take
/// non-negative exponents (so `K[s]` is the one-variable polynomial ring).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentDesc {
    pub base: BaseField,
    pub vars: Vec<String>,
    pub polynomial: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDesc {
    Rationals,
    PrimeField(u64),
    Laurent(LaurentDesc),
}

impl RingDesc {
    pub fn laurent(base: BaseField, vars: &[&str]) -> Result<Self> {
        Self::mixed(base, vars, &[])
    }

    /// Ring with Laurent variables `vars` and polynomial variables `poly_vars`,
    /// in the order given (Laurent ones first).
    pub fn mixed(base: BaseField, vars: &[&str], poly_vars: &[&str]) -> Result<Self> {
        let mut names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let mut polynomial = vec![false; names.len()];
        for v in poly_vars {
            names.push(v.to_string());
            polynomial.push(true);
        }
        let desc = RingDesc::Laurent(LaurentDesc { base, vars: names, polynomial });
        desc.validate()?;
        Ok(desc)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingDesc::Rationals => Ok(()),
            RingDesc::PrimeField(p) => BaseField::prime(*p).map(|_| ()),
            RingDesc::Laurent(l) => {
                if let BaseField::Prime(p) = l.base {
                    BaseField::prime(p)?;
                }
                if l.vars.len() != l.polynomial.len() {
                    return Err(Error::InvalidRing("variable flags do not match names".into()));
                }
                for (i, v) in l.vars.iter().enumerate() {
                    let ok = !v.is_empty()
                        && v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok {
                        return Err(Error::InvalidRing(format!("bad variable name {v:?}")));
                    }
                    if l.vars[..i].contains(v) {
                        return Err(Error::InvalidRing(format!("duplicate variable {v}")));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn base(&self) -> BaseField {
        match self {
            RingDesc::Rationals => BaseField::Rationals,
            RingDesc::PrimeField(p) => BaseField::Prime(*p),
            RingDesc::Laurent(l) => l.base,
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            RingDesc::Laurent(l) => l.vars.len(),
            _ => 0,
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, RingDesc::Laurent(_))
    }

    pub fn var_names(&self) -> &[String] {
        match self {
            RingDesc::Laurent(l) => &l.vars,
            _ => &[],
        }
    }

    /// True for variables restricted to non-negative exponents.
    pub fn is_polynomial_var(&self, i: usize) -> bool {
        match self {
            RingDesc::Laurent(l) => l.polynomial[i],
            _ => false,
        }
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDesc::Rationals => write!(f, "Q"),
            RingDesc::PrimeField(p) => write!(f, "GF({p})"),
            RingDesc::Laurent(l) => {
                write!(f, "{}[", l.base)?;
                let parts: Vec<String> = l
                    .vars
                    .iter()
                    .zip(&l.polynomial)
                    .map(|(v, poly)| if *poly { v.clone() } else { format!("{v},{v}^-1") })
                    .collect();
                write!(f, "{}]", parts.join(","))
            }
        }
    }
}

/// Shared handle on a ring descriptor; cheap to clone, compared by value.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingDesc>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

impl Deref for Ring {
    type Target = RingDesc;
    fn deref(&self) -> &RingDesc {
        &self.0
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<RingDesc> for Ring {
    fn from(d: RingDesc) -> Self {
        Ring(Arc::new(d))
    }
}

/// Ring element without its ring; every operation goes through a [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    F(FieldElem),
    /// Sparse monomial expansion; never stores a zero coefficient.
    L(BTreeMap<Exponent, FieldElem>),
}

impl Ring {
    pub fn new(desc: RingDesc) -> Result<Self> {
        desc.validate()?;
        Ok(Ring(Arc::new(desc)))
    }

    pub fn rationals() -> Self {
        RingDesc::Rationals.into()
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Ring::new(RingDesc::PrimeField(p))
    }

    pub fn desc(&self) -> &RingDesc {
        &self.0
    }

    pub fn zero(&self) -> Elem {
        match &*self.0 {
            RingDesc::Laurent(_) => Elem::L(BTreeMap::new()),
            d => Elem::F(d.base().zero()),
        }
    }

    pub fn one(&self) -> Elem {
        self.constant(self.base().one())
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.constant(self.base().from_i64(v))
    }

    pub fn constant(&self, c: FieldElem) -> Elem {
        match &*self.0 {
            RingDesc::Laurent(l) => {
                let mut m = BTreeMap::new();
                if !l.base.is_zero(&c) {
                    m.insert(vec![0; l.vars.len()], c);
                }
                Elem::L(m)
            }
            _ => Elem::F(c),
        }
    }

    /// The monomial `c * x^exps`; rejects negative powers of polynomial variables.
    pub fn monomial(&self, c: FieldElem, exps: Exponent) -> Result<Elem> {
        match &*self.0 {
            RingDesc::Laurent(l) => {
                if exps.len() != l.vars.len() {
                    return Err(Error::Shape(format!(
                        "exponent vector of length {} for {} variables",
                        exps.len(),
                        l.vars.len()
                    )));
                }
                for (i, e) in exps.iter().enumerate() {
                    if l.polynomial[i] && *e < 0 {
                        return Err(Error::NotAUnit(format!(
                            "{} (negative power of polynomial variable in {self})",
                            l.vars[i]
                        )));
                    }
                }
                let mut m = BTreeMap::new();
                if !l.base.is_zero(&c) {
                    m.insert(exps, c);
                }
                Ok(Elem::L(m))
            }
            _ => {
                if !exps.is_empty() {
                    return Err(Error::Shape(format!("{self} has no variables")));
                }
                Ok(Elem::F(c))
            }
        }
    }

    /// Canonical-form membership test.
    pub fn contains(&self, a: &Elem) -> bool {
        let base = self.base();
        match (&*self.0, a) {
            (RingDesc::Laurent(l), Elem::L(m)) => m.iter().all(|(e, c)| {
                e.len() == l.vars.len()
                    && base.contains(c)
                    && !base.is_zero(c)
                    && e.iter().zip(&l.polynomial).all(|(x, poly)| !*poly || *x >= 0)
            }),
            (RingDesc::Laurent(_), Elem::F(_)) => false,
            (_, Elem::F(c)) => base.contains(c),
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::F(c) => self.base().is_zero(c),
            Elem::L(m) => m.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let base = self.base();
        match (a, b) {
            (Elem::F(x), Elem::F(y)) => Elem::F(base.add(x, y)),
            (Elem::L(x), Elem::L(y)) => {
                let (big, small) = if x.len() >= y.len() { (x, y) } else { (y, x) };
                let mut out = big.clone();
                for (e, c) in small {
                    add_term(&base, &mut out, e.clone(), c.clone());
                }
                Elem::L(out)
            }
            _ => panic!("element kinds do not match ring {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let base = self.base();
        match a {
            Elem::F(x) => Elem::F(base.neg(x)),
            Elem::L(m) => Elem::L(m.iter().map(|(e, c)| (e.clone(), base.neg(c))).collect()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let base = self.base();
        match (a, b) {
            (Elem::F(x), Elem::F(y)) => Elem::F(base.mul(x, y)),
            (Elem::L(x), Elem::L(y)) => {
                let mut out = BTreeMap::new();
                for (ex, cx) in x {
                    for (ey, cy) in y {
                        let e: Exponent = ex.iter().zip(ey).map(|(p, q)| p + q).collect();
                        add_term(&base, &mut out, e, base.mul(cx, cy));
                    }
                }
                Elem::L(out)
            }
            _ => panic!("element kinds do not match ring {self}"),
        }
    }

    /// Multiplies by a base-field scalar.
    pub fn scale(&self, c: &FieldElem, a: &Elem) -> Elem {
        let base = self.base();
        if base.is_zero(c) {
            return self.zero();
        }
        match a {
            Elem::F(x) => Elem::F(base.mul(c, x)),
            Elem::L(m) => Elem::L(m.iter().map(|(e, x)| (e.clone(), base.mul(c, x))).collect()),
        }
    }

    /// Units are nonzero field elements, or single monomials with no
    /// polynomial-variable factor.
    pub fn is_unit(&self, a: &Elem) -> bool {
        match (&*self.0, a) {
            (_, Elem::F(c)) => !self.base().is_zero(c),
            (RingDesc::Laurent(l), Elem::L(m)) => {
                m.len() == 1
                    && m.keys().next().is_some_and(|e| {
                        e.iter().zip(&l.polynomial).all(|(x, poly)| !*poly || *x == 0)
                    })
            }
            _ => false,
        }
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        let base = self.base();
        match a {
            Elem::F(c) => base.inv(c).map(Elem::F),
            Elem::L(m) => {
                let (e, c) = m.iter().next()?;
                let mut out = BTreeMap::new();
                out.insert(e.iter().map(|x| -x).collect(), base.inv(c)?);
                Some(Elem::L(out))
            }
        }
    }

    /// `a^n`; negative powers require a unit.
    pub fn pow(&self, a: &Elem, n: i64) -> Option<Elem> {
        let (mut b, mut k) = if n < 0 { (self.inv(a)?, n.unsigned_abs()) } else { (a.clone(), n as u64) };
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        Some(acc)
    }

    /// Monomial terms of an element; fields yield one term with the empty exponent.
    pub fn terms(&self, a: &Elem) -> Vec<(Exponent, FieldElem)> {
        match a {
            Elem::F(c) if self.base().is_zero(c) => Vec::new(),
            Elem::F(c) => vec![(Vec::new(), c.clone())],
            Elem::L(m) => m.iter().map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Coefficient of the monomial `x^w` (zero when absent).
    pub fn coefficient(&self, a: &Elem, w: &[i32]) -> FieldElem {
        match a {
            Elem::F(c) if w.is_empty() => c.clone(),
            Elem::F(_) => self.base().zero(),
            Elem::L(m) => m.get(w).cloned().unwrap_or_else(|| self.base().zero()),
        }
    }

    pub fn fmt_elem(&self, a: &Elem) -> String {
        match a {
            Elem::F(c) => c.to_string(),
            Elem::L(m) => {
                if m.is_empty() {
                    return "0".into();
                }
                let names = self.var_names();
                let base = self.base();
                let mut out = String::new();
                for (i, (e, c)) in m.iter().enumerate() {
                    let neg = c.is_negative();
                    let mag = if neg { base.neg(c) } else { c.clone() };
                    if i == 0 {
                        if neg {
                            out.push('-');
                        }
                    } else {
                        out.push_str(if neg { " - " } else { " + " });
                    }
                    let mut factors: Vec<String> = Vec::new();
                    let is_const = e.iter().all(|x| *x == 0);
                    if !base.is_one(&mag) || is_const {
                        factors.push(mag.to_string());
                    }
                    for (name, x) in names.iter().zip(e) {
                        match *x {
                            0 => {}
                            1 => factors.push(name.clone()),
                            x => factors.push(format!("{name}^{x}")),
                        }
                    }
                    out.push_str(&factors.join("*"));
                }
                out
            }
        }
    }
}

fn add_term(base: &BaseField, m: &mut BTreeMap<Exponent, FieldElem>, e: Exponent, c: FieldElem) {
    use std::collections::btree_map::Entry;
    match m.entry(e) {
        Entry::Vacant(v) => {
            if !base.is_zero(&c) {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let s = base.add(o.get(), &c);
            if base.is_zero(&s) {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// A ring element together with its ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    ring: Ring,
    elem: Elem,
}

impl Scalar {
    pub fn new(ring: Ring, elem: Elem) -> Result<Self> {
        if !ring.contains(&elem) {
            return Err(Error::Invariant(format!("element not in canonical form for {ring}")));
        }
        Ok(Scalar { ring, elem })
    }

    pub fn zero(ring: &Ring) -> Self {
        Scalar { ring: ring.clone(), elem: ring.zero() }
    }

    pub fn one(ring: &Ring) -> Self {
        Scalar { ring: ring.clone(), elem: ring.one() }
    }

    pub fn from_i64(ring: &Ring, v: i64) -> Self {
        Scalar { ring: ring.clone(), elem: ring.from_i64(v) }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn elem(&self) -> &Elem {
        &self.elem
    }

    pub fn into_elem(self) -> Elem {
        self.elem
    }

    fn same_ring(&self, other: &Scalar) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                expected: self.ring.to_string(),
                found: other.ring.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(Scalar { ring: self.ring.clone(), elem: self.ring.add(&self.elem, &other.elem) })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(Scalar { ring: self.ring.clone(), elem: self.ring.sub(&self.elem, &other.elem) })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        Ok(Scalar { ring: self.ring.clone(), elem: self.ring.mul(&self.elem, &other.elem) })
    }

    pub fn neg(&self) -> Scalar {
        Scalar { ring: self.ring.clone(), elem: self.ring.neg(&self.elem) }
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.elem)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.elem)
    }

    pub fn inverse(&self) -> Result<Scalar> {
        self.ring
            .inv(&self.elem)
            .map(|elem| Scalar { ring: self.ring.clone(), elem })
            .ok_or_else(|| Error::NotAUnit(self.to_string()))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.fmt_elem(&self.elem))
    }
}
