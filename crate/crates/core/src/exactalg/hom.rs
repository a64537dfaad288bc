use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::ring::{Elem, Ring};

/// A ring homomorphism fixing the base field, determined by variable images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    images: Vec<Elem>,
    identity: bool,
}

impl RingHom {
    /// Builds `x_i ↦ images[i]`. Laurent variables must land on units, otherwise
    /// `x_i^{-1}` has no image.
    pub fn new(source: Ring, target: Ring, images: Vec<Elem>) -> Result<Self> {
        if source.base() != target.base() {
            return Err(Error::InvalidHom(format!(
                "base fields differ: {} vs {}",
                source.base(),
                target.base()
            )));
        }
        if images.len() != source.nvars() {
            return Err(Error::InvalidHom(format!(
                "{} images for {} variables",
                images.len(),
                source.nvars()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if !target.contains(img) {
                return Err(Error::InvalidHom(format!("image {i} is not an element of {target}")));
            }
            if !source.is_polynomial_var(i) && !target.is_unit(img) {
                return Err(Error::InvalidHom(format!(
                    "{} ↦ {} is not a unit",
                    source.var_names()[i],
                    target.fmt_elem(img)
                )));
            }
        }
        let identity = source == target
            && images.iter().enumerate().all(|(i, img)| {
                let mut e = vec![0; source.nvars()];
                e[i] = 1;
                target.monomial(target.base().one(), e).as_ref() == Ok(img)
            });
        Ok(RingHom { source, target, images, identity })
    }

    pub fn identity(ring: &Ring) -> Self {
        let n = ring.nvars();
        let images = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                ring.monomial(ring.base().one(), e).expect("unit exponent")
            })
            .collect();
        RingHom { source: ring.clone(), target: ring.clone(), images, identity: true }
    }

    /// The inclusion of the base field into `target`.
    pub fn from_base(source: &Ring, target: &Ring) -> Result<Self> {
        if source.nvars() != 0 {
            return Err(Error::InvalidHom(format!("{source} is not a field")));
        }
        RingHom::new(source.clone(), target.clone(), Vec::new())
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// True when every variable maps to a single monomial.
    pub fn is_monomial(&self) -> bool {
        self.images.iter().all(|img| self.target.terms(img).len() == 1)
    }

    pub fn apply(&self, a: &Elem) -> Elem {
        if self.identity {
            return a.clone();
        }
        let t = &self.target;
        let mut out = t.zero();
        for (e, c) in self.source.terms(a) {
            let mut term = t.constant(c);
            for (img, k) in self.images.iter().zip(&e) {
                if *k != 0 {
                    let p = t.pow(img, *k as i64).expect("validated unit image");
                    term = t.mul(&term, &p);
                }
            }
            out = t.add(&out, &term);
        }
        out
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &RingHom) -> Result<RingHom> {
        if first.target != self.source {
            return Err(Error::RingMismatch {
                expected: self.source.to_string(),
                found: first.target.to_string(),
            });
        }
        let images = first.images.iter().map(|img| self.apply(img)).collect();
        RingHom::new(first.source.clone(), self.target.clone(), images)
    }
}

impl fmt::Display for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)?;
        let names = self.source.var_names();
        if !names.is_empty() {
            let parts: Vec<String> = names
                .iter()
                .zip(&self.images)
                .map(|(n, img)| format!("{n} ↦ {}", self.target.fmt_elem(img)))
                .collect();
            write!(f, " ({})", parts.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::BaseField;
    use crate::exactalg::ring::RingDesc;

    fn laurent(v: &str) -> Ring {
        Ring::new(RingDesc::laurent(BaseField::Rationals, &[v]).unwrap()).unwrap()
    }

    #[test]
    fn t_to_s_inverse() {
        let rt = laurent("t");
        let rs = laurent("s");
        let sinv = rs.monomial(rs.base().one(), vec![-1]).unwrap();
        let h = RingHom::new(rt.clone(), rs.clone(), vec![sinv]).unwrap();
        let t2 = rt.monomial(rt.base().one(), vec![2]).unwrap();
        assert_eq!(h.apply(&t2), rs.monomial(rs.base().one(), vec![-2]).unwrap());
    }

    #[test]
    fn laurent_variable_needs_unit_image() {
        let rt = laurent("t");
        let one_plus_t = rt.add(&rt.one(), &rt.monomial(rt.base().one(), vec![1]).unwrap());
        assert!(RingHom::new(rt.clone(), rt.clone(), vec![one_plus_t]).is_err());
    }

    #[test]
    fn polynomial_variable_may_map_anywhere() {
        let rs = Ring::new(RingDesc::mixed(BaseField::Rationals, &[], &["s"]).unwrap()).unwrap();
        let rt = laurent("t");
        let img = rt.add(&rt.one(), &rt.monomial(rt.base().one(), vec![-1]).unwrap());
        let h = RingHom::new(rs.clone(), rt.clone(), vec![img.clone()]).unwrap();
        let s2 = rs.monomial(rs.base().one(), vec![2]).unwrap();
        assert_eq!(h.apply(&s2), rt.mul(&img, &img));
    }

    #[test]
    fn composition_is_associative() {
        let r = laurent("t");
        let mono = |c: i64, e: i32| r.monomial(r.base().from_i64(c), vec![e]).unwrap();
        let f = RingHom::new(r.clone(), r.clone(), vec![mono(2, -1)]).unwrap();
        let g = RingHom::new(r.clone(), r.clone(), vec![mono(-3, 2)]).unwrap();
        let h = RingHom::new(r.clone(), r.clone(), vec![mono(5, 3)]).unwrap();
        let left = h.after(&g).unwrap().after(&f).unwrap();
        let right = h.after(&g.after(&f).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(RingHom::identity(&r).after(&f).unwrap() == f);
    }
}
