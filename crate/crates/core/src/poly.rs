//! Laurent polynomials with rational coefficients over named variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VarMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable {0}")]
    UnknownVar(String),
    #[error("negative power of {0} needs an invertible image")]
    NotInvertible(String),
    #[error("bad coefficient {0}")]
    BadCoefficient(String),
}

pub type Result<T> = std::result::Result<T, PolyError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl Poly {
    pub fn zero(vars: &[String]) -> Self {
        Self { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: BigRational) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn monomial(vars: &[String], e: Vec<i64>, c: BigRational) -> Self {
        assert_eq!(e.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn var(vars: &[String], name: &str) -> Result<Self> {
        let i = index_of(vars, name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, e, BigRational::one()))
    }

    /// `1 + c * x^e`.
    pub fn one_plus(vars: &[String], e: Vec<i64>, c: BigRational) -> Self {
        Self::one(vars).add(&Self::monomial(vars, e, c)).expect("same vars")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i64]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.vars != o.vars {
            return Err(PolyError::VarMismatch(self.vars.clone(), o.vars.clone()));
        }
        Ok(())
    }

    fn insert(&mut self, e: Vec<i64>, c: BigRational) {
        let entry = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = Self::zero(&self.vars);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.insert(a.iter().zip(b).map(|(s, t)| s + t).collect(), x * y);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..n {
            out = out.mul(self).expect("same vars");
        }
        out
    }

    pub fn product<'a>(vars: &[String], factors: impl IntoIterator<Item = &'a Poly>) -> Result<Self> {
        factors.into_iter().try_fold(Self::one(vars), |acc, f| acc.mul(f))
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Vec<i64>, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Reciprocal of a monomial.
    pub fn inverse_monomial(&self) -> Option<Self> {
        let (e, c) = self.as_monomial()?;
        Some(Self::monomial(&self.vars, e.iter().map(|x| -x).collect(), c.recip()))
    }

    /// Smallest and largest exponent of `name`.
    pub fn degree_range(&self, name: &str) -> Result<Option<(i64, i64)>> {
        let i = index_of(&self.vars, name)?;
        let mut it = self.terms.keys().map(|e| e[i]);
        let Some(first) = it.next() else { return Ok(None) };
        Ok(Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)))))
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that occurs.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let target = vars.iter().position(|w| w == v);
            if target.is_none() && self.terms.keys().any(|e| e[i] != 0) {
                return Err(PolyError::UnknownVar(v.clone()));
            }
            map.push(target);
        }
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut f = vec![0; vars.len()];
            for (x, t) in e.iter().zip(&map) {
                if let Some(t) = t {
                    f[*t] = *x;
                }
            }
            out.insert(f, c.clone());
        }
        Ok(out)
    }

    /// Drops variables that do not occur.
    pub fn prune_vars(&self) -> Self {
        let keep: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] != 0))
            .map(|(_, v)| v.clone())
            .collect();
        self.with_vars(&keep).expect("only unused variables dropped")
    }

    /// Substitutes polynomials (over a common variable list `target`) for
    /// some variables; variables not in `images` are carried over and must
    /// be in `target`. Negative powers need monomial images.
    pub fn substitute(&self, target: &[String], images: &BTreeMap<String, Poly>) -> Result<Self> {
        let mut base = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let img = match images.get(v) {
                Some(p) => p.with_vars(target)?,
                None if target.contains(v) => Poly::var(target, v)?,
                None if self.terms.keys().all(|e| e[i] == 0) => Poly::one(target),
                None => return Err(PolyError::UnknownVar(v.clone())),
            };
            base.push(img);
        }
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for ((x, img), name) in e.iter().zip(&base).zip(&self.vars) {
                let f = if *x >= 0 {
                    img.pow(*x as u32)
                } else {
                    img.inverse_monomial().ok_or_else(|| PolyError::NotInvertible(name.clone()))?.pow((-x) as u32)
                };
                term = term.mul(&f)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Sets variables to rational values and removes them from the list.
    pub fn evaluate(&self, values: &BTreeMap<String, BigRational>) -> Result<Self> {
        let keep: Vec<String> = self.vars.iter().filter(|v| !values.contains_key(*v)).cloned().collect();
        let images = values.iter().map(|(k, v)| (k.clone(), Poly::constant(&keep, v.clone()))).collect();
        for (k, v) in values {
            if v.is_zero() && self.vars.contains(k) {
                let i = index_of(&self.vars, k)?;
                if self.terms.keys().any(|e| e[i] < 0) {
                    return Err(PolyError::NotInvertible(k.clone()));
                }
            }
        }
        self.substitute(&keep, &images)
    }
}

fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter().position(|v| v == name).ok_or_else(|| PolyError::UnknownVar(name.to_string()))
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // constant first, then by total degree
        let mut keys: Vec<&Vec<i64>> = self.terms.keys().collect();
        keys.sort_by_key(|e| (e.iter().map(|x| x.abs()).sum::<i64>(), e.iter().map(|x| -x).collect::<Vec<_>>()));
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(x, _)| **x != 0)
                .map(|(x, v)| if *x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if mono.is_empty() {
                write!(f, "{}", fmt_coeff(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    e: Vec<i64>,
    num: String,
    den: String,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(e, c)| TermRepr { e: e.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
            .collect();
        let mut st = s.serialize_struct("Poly", 2)?;
        st.serialize_field("vars", &self.vars)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            vars: Vec<String>,
            terms: Vec<TermRepr>,
        }
        let r = Repr::deserialize(d)?;
        let mut p = Poly::zero(&r.vars);
        for t in r.terms {
            if t.e.len() != r.vars.len() {
                return Err(serde::de::Error::custom("exponent length differs from variable count"));
            }
            let num: BigInt = t.num.parse().map_err(serde::de::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(serde::de::Error::custom)?;
            if den.is_zero() {
                return Err(serde::de::Error::custom("zero denominator"));
            }
            p.insert(t.e, BigRational::new(num, den));
        }
        Ok(p)
    }
}

/// Parses `"3"`, `"-1/2"` style rationals.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || PolyError::BadCoefficient(s.to_string());
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use proptest::prelude::*;

    fn vs(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn binomial_expansion() {
        let v = vs(&["Z"]);
        let p = Poly::one_plus(&v, vec![1], rat(1, 1)).pow(4);
        for (i, c) in [1, 4, 6, 4, 1].iter().enumerate() {
            assert_eq!(p.coeff(&[i as i64]), rat(*c, 1));
        }
        assert_eq!(p.to_string(), "1 + 4*Z + 6*Z^2 + 4*Z^3 + Z^4");
        assert_eq!(p.degree_range("Z").unwrap(), Some((0, 4)));
    }

    #[test]
    fn laurent_substitution_and_evaluation() {
        let v = vs(&["U", "Z", "q"]);
        let u = Poly::var(&v, "U").unwrap();
        let inv = u.inverse_monomial().unwrap();
        assert_eq!(u.mul(&inv).unwrap(), Poly::one(&v));
        let p = Poly::one_plus(&v, vec![0, 1, 1], rat(1, 1));
        let at1 = p.evaluate(&BTreeMap::from([("q".to_string(), rat(1, 1))])).unwrap();
        assert_eq!(at1.vars(), vs(&["U", "Z"]));
        assert_eq!(at1.to_string(), "1 + Z");
        let bad = inv.evaluate(&BTreeMap::from([("U".to_string(), rat(0, 1))]));
        assert!(matches!(bad, Err(PolyError::NotInvertible(_))));
    }

    #[test]
    fn json_round_trip() {
        let v = vs(&["X", "Y"]);
        let p = Poly::one_plus(&v, vec![1, -2], rat(-3, 7));
        let s = serde_json::to_string(&p).unwrap();
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((-2i64..3, 0i64..3), -5i64..6), 0..6).prop_map(|ts| {
            let v = vs(&["a", "b"]);
            ts.into_iter().fold(Poly::zero(&v), |acc, ((x, y), c)| {
                acc.add(&Poly::monomial(&v, vec![x, y], rat(c, 1))).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        }

        #[test]
        fn substitution_is_a_ring_map(a in arb_poly(), b in arb_poly()) {
            let v = a.vars().to_vec();
            let images = BTreeMap::from([("b".to_string(), Poly::one_plus(&v, vec![1, 0], rat(2, 1)))]);
            let s = |p: &Poly| p.substitute(&v, &images);
            prop_assert_eq!(s(&a.mul(&b).unwrap()).unwrap(), s(&a).unwrap().mul(&s(&b).unwrap()).unwrap());
        }
    }
}
