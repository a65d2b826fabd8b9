//! Exact multivariate power series with rational coefficients, truncated by
//! total degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VarMismatch(Vec<String>, Vec<String>),
    #[error("series has nonzero constant term {0}")]
    NonzeroConstant(String),
    #[error("invalid substitution image for {var}: {reason}")]
    BadImage { var: String, reason: String },
    #[error("unknown variable {0}")]
    UnknownVar(String),
    #[error("exponent {0:?} has wrong length for {1} variables")]
    BadExponent(Vec<u32>, usize),
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("mirror map reversion did not reach a fixed point")]
    NotConverged,
}

pub type Result<T> = std::result::Result<T, SeriesError>;

pub type Exponent = Vec<u32>;

fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// A power series in named variables, exact to total degree `order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    vars: Vec<String>,
    order: u32,
    terms: BTreeMap<Exponent, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl TruncatedSeries {
    pub fn zero(vars: &[String], order: u32) -> Self {
        Self { vars: vars.to_vec(), order, terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], order: u32, c: BigRational) -> Self {
        Self::monomial(vars, order, vec![0; vars.len()], c)
    }

    pub fn one(vars: &[String], order: u32) -> Self {
        Self::constant(vars, order, BigRational::one())
    }

    /// `c * x^e`, dropped if beyond the truncation order.
    pub fn monomial(vars: &[String], order: u32, e: Exponent, c: BigRational) -> Self {
        assert_eq!(e.len(), vars.len(), "exponent length");
        let mut s = Self::zero(vars, order);
        if total_degree(&e) <= order && !c.is_zero() {
            s.terms.insert(e, c);
        }
        s
    }

    /// The series consisting of the single variable `name`.
    pub fn var(vars: &[String], order: u32, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SeriesError::UnknownVar(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, order, e, BigRational::one()))
    }

    pub fn from_terms<I>(vars: &[String], order: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, BigRational)>,
    {
        let mut s = Self::zero(vars, order);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(SeriesError::BadExponent(e, vars.len()));
            }
            s.add_term(e, c);
        }
        Ok(s)
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if total_degree(&e) > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowers the truncation order (never raises it).
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self {
            vars: self.vars.clone(),
            order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(SeriesError::VarMismatch(self.vars.clone(), other.vars.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.truncate(other.order);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(&self.vars, self.order);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(&self.vars, order);
        for (e1, c1) in &self.terms {
            let d1 = total_degree(e1);
            if d1 > order {
                continue;
            }
            for (e2, c2) in &other.terms {
                if d1 + total_degree(e2) > order {
                    continue;
                }
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars, self.order);
        for _ in 0..n {
            acc = acc.mul(self).expect("same vars");
        }
        acc
    }

    /// Homogeneous components by total degree, index = degree.
    fn components(&self) -> Vec<Self> {
        let mut out: Vec<Self> = (0..=self.order).map(|_| Self::zero(&self.vars, self.order)).collect();
        for (e, c) in &self.terms {
            out[total_degree(e) as usize].terms.insert(e.clone(), c.clone());
        }
        out
    }

    fn require_no_constant(&self) -> Result<()> {
        let c = self.constant_term();
        if !c.is_zero() {
            return Err(SeriesError::NonzeroConstant(c.to_string()));
        }
        Ok(())
    }

    /// `exp(a)` for `a` without constant term, via `n E_n = sum m a_m E_{n-m}`
    /// on homogeneous components.
    pub fn exp(&self) -> Result<Self> {
        self.require_no_constant()?;
        let a = self.components();
        let n_max = self.order as usize;
        let mut e: Vec<Self> = vec![Self::one(&self.vars, self.order)];
        for n in 1..=n_max {
            let mut acc = Self::zero(&self.vars, self.order);
            for m in 1..=n {
                if a[m].is_zero() {
                    continue;
                }
                let t = a[m].mul(&e[n - m])?.scale(&rat(m as i64, 1));
                acc = acc.add(&t)?;
            }
            e.push(acc.scale(&rat(1, n as i64)));
        }
        let mut out = Self::zero(&self.vars, self.order);
        for c in e {
            out = out.add(&c)?;
        }
        Ok(out)
    }

    /// `log(1 + a)` for `a` without constant term.
    pub fn log1p(&self) -> Result<Self> {
        self.require_no_constant()?;
        let a = self.components();
        let n_max = self.order as usize;
        // n L_n = n a_n - sum_{m=1}^{n-1} a_{n-m} (m L_m)
        let mut l: Vec<Self> = vec![Self::zero(&self.vars, self.order)];
        for n in 1..=n_max {
            let mut acc = a[n].scale(&rat(n as i64, 1));
            for m in 1..n {
                if a[n - m].is_zero() || l[m].is_zero() {
                    continue;
                }
                let t = a[n - m].mul(&l[m])?.scale(&rat(m as i64, 1));
                acc = acc.sub(&t)?;
            }
            l.push(acc.scale(&rat(1, n as i64)));
        }
        let mut out = Self::zero(&self.vars, self.order);
        for c in l {
            out = out.add(&c)?;
        }
        Ok(out)
    }

    /// Replaces each variable `x_c` by `m_c * u_c` where `m_c` is a monomial
    /// of positive degree and `u_c` a series with constant term 1, both in a
    /// common target variable list.
    pub fn substitute(&self, images: &[SubstImage]) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(SeriesError::BadImage {
                var: "*".into(),
                reason: format!("{} images for {} variables", images.len(), self.vars.len()),
            });
        }
        let target_vars = match images.first() {
            Some(im) => im.unit.vars.clone(),
            None => return Ok(self.clone()),
        };
        let mut order = self.order;
        for (v, im) in self.vars.iter().zip(images) {
            let bad = |reason: &str| SeriesError::BadImage { var: v.clone(), reason: reason.into() };
            if im.unit.vars != target_vars {
                return Err(bad("images use different variable lists"));
            }
            if im.monomial.len() != target_vars.len() {
                return Err(bad("monomial length"));
            }
            if total_degree(&im.monomial) == 0 {
                return Err(bad("monomial of degree 0"));
            }
            if !im.unit.constant_term().is_one() {
                return Err(bad("unit factor must have constant term 1"));
            }
            order = order.min(im.unit.order);
        }
        // powers of each image, computed lazily up to the needed exponent
        let mut powers: Vec<Vec<Self>> = images.iter().map(|_| vec![Self::one(&target_vars, order)]).collect();
        let mut out = Self::zero(&target_vars, order);
        for (e, c) in &self.terms {
            let mut term = Self::constant(&target_vars, order, c.clone());
            for (idx, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                while powers[idx].len() <= p as usize {
                    let last = powers[idx].last().unwrap().clone();
                    let next = last.mul(&images[idx].as_series(order))?;
                    powers[idx].push(next);
                }
                term = term.mul(&powers[idx][p as usize])?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Renames variables without touching coefficients.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        if vars.len() != self.vars.len() {
            return Err(SeriesError::VarMismatch(self.vars.clone(), vars.to_vec()));
        }
        let mut s = self.clone();
        s.vars = vars.to_vec();
        Ok(s)
    }

    /// Maximum of |numerator| and denominator bit sizes, a cheap size gauge.
    pub fn max_coefficient_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

/// Image `monomial * unit` of one variable under [`TruncatedSeries::substitute`].
#[derive(Debug, Clone)]
pub struct SubstImage {
    pub monomial: Exponent,
    pub unit: TruncatedSeries,
}

impl SubstImage {
    pub fn identity(vars: &[String], order: u32, index: usize) -> Self {
        let mut monomial = vec![0; vars.len()];
        monomial[index] = 1;
        Self { monomial, unit: TruncatedSeries::one(vars, order) }
    }

    pub fn to_series(&self) -> TruncatedSeries {
        self.as_series(self.unit.order)
    }

    fn as_series(&self, order: u32) -> TruncatedSeries {
        let m = TruncatedSeries::monomial(&self.unit.vars, order, self.monomial.clone(), BigRational::one());
        m.mul(&self.unit.truncate(order)).expect("same vars")
    }
}

/// The map `q_c = x_c * exp(h_c(x))` in the variables of `h`.
pub fn forward_mirror_map(h: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
    let vars = match h.first() {
        Some(s) => s.vars.clone(),
        None => return Ok(Vec::new()),
    };
    h.iter()
        .enumerate()
        .map(|(c, hc)| {
            if hc.vars != vars {
                return Err(SeriesError::VarMismatch(vars.clone(), hc.vars.clone()));
            }
            let x = TruncatedSeries::var(&vars, hc.order, &vars[c])?;
            x.mul(&hc.exp()?)
        })
        .collect()
}

/// Inverts `q_c = x_c * exp(h_c(x))`, returning `x_c` as series in the `q`
/// variables (same names, same order). The result is exact to the smallest
/// order among the `h_c`.
pub fn reverse_mirror_map(h: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
    let units = reverse_mirror_map_units(h)?;
    Ok(coordinate_images(&units).iter().map(|im| im.as_series(im.unit.order)).collect())
}

/// Images `x_c -> q_c * u_c` for the given unit factors.
pub fn coordinate_images(units: &[TruncatedSeries]) -> Vec<SubstImage> {
    units
        .iter()
        .enumerate()
        .map(|(c, u)| {
            let mut monomial = vec![0; u.vars.len()];
            monomial[c] = 1;
            SubstImage { monomial, unit: u.clone() }
        })
        .collect()
}

/// The unit factors `u_c = x_c / q_c` of the inverse mirror map, exact to
/// the smallest order among the `h_c`.
pub fn reverse_mirror_map_units(h: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
    let Some(first) = h.first() else { return Ok(Vec::new()) };
    let vars = first.vars.clone();
    let order = h.iter().map(|s| s.order).min().unwrap();
    for hc in h {
        if hc.vars != vars {
            return Err(SeriesError::VarMismatch(vars.clone(), hc.vars.clone()));
        }
        hc.require_no_constant()?;
    }
    // u_c = exp(-h_c(x(q))); each pass fixes one more degree.
    let mut units: Vec<TruncatedSeries> = h.iter().map(|_| TruncatedSeries::one(&vars, order)).collect();
    for _ in 0..=order {
        let im = coordinate_images(&units);
        units = h
            .iter()
            .map(|hc| hc.truncate(order).substitute(&im)?.neg().exp())
            .collect::<Result<_>>()?;
    }
    // fixed-point assertion: q_c = x_c * exp(h_c(x))
    let im = coordinate_images(&units);
    for (c, hc) in h.iter().enumerate() {
        let back = im[c].as_series(order).mul(&hc.truncate(order).substitute(&im)?.exp()?)?;
        let q = TruncatedSeries::var(&vars, order, &vars[c])?;
        if back != q {
            return Err(SeriesError::NotConverged);
        }
    }
    Ok(units)
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.order + 1);
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(p, _)| **p > 0)
                .map(|(p, v)| if *p == 1 { v.clone() } else { format!("{v}^{p}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        write!(f, " + O({})", self.order + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    e: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    vars: Vec<String>,
    order: u32,
    terms: Vec<TermRepr>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            vars: self.vars.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr { e: e.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let r = SeriesRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in r.terms {
            let num: BigInt = t.num.parse().map_err(|_| D::Error::custom(SeriesError::BadCoefficient(t.num.clone())))?;
            let den: BigInt = t.den.parse().map_err(|_| D::Error::custom(SeriesError::BadCoefficient(t.den.clone())))?;
            if den.is_zero() {
                return Err(D::Error::custom(SeriesError::BadCoefficient("zero denominator".into())));
            }
            if total_degree(&t.e) > r.order {
                return Err(D::Error::custom(format!("term {:?} exceeds order {}", t.e, r.order)));
            }
            terms.push((t.e, BigRational::new(num, den)));
        }
        TruncatedSeries::from_terms(&r.vars, r.order, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn uni(order: u32, coeffs: &[(u32, BigRational)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(&v(&["q"]), order, coeffs.iter().map(|(p, c)| (vec![*p], c.clone()))).unwrap()
    }

    #[test]
    fn basic_products() {
        let vars = v(&["q"]);
        let q = TruncatedSeries::var(&vars, 2, "q").unwrap();
        let one = TruncatedSeries::one(&vars, 2);
        let p = one.add(&q).unwrap().mul(&one.sub(&q).unwrap()).unwrap();
        assert_eq!(p, uni(2, &[(0, rat(1, 1)), (2, rat(-1, 1))]));
        let q1 = TruncatedSeries::var(&vars, 1, "q").unwrap();
        assert!(q1.mul(&q1).unwrap().is_zero());

        let vars = v(&["a", "b"]);
        let one = TruncatedSeries::one(&vars, 2);
        let a = TruncatedSeries::var(&vars, 2, "a").unwrap();
        let b = TruncatedSeries::var(&vars, 2, "b").unwrap();
        let p = one.add(&a).unwrap().mul(&one.add(&b).unwrap()).unwrap();
        assert_eq!(p.terms().len(), 4);
        assert_eq!(p.coeff(&[1, 1]), rat(1, 1));
        assert!(a.add(&TruncatedSeries::var(&v(&["q"]), 2, "q").unwrap()).is_err());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(TruncatedSeries::zero(&v(&["q"]), 4).exp().unwrap(), TruncatedSeries::one(&v(&["q"]), 4));
        let a = uni(2, &[(1, rat(1, 1)), (2, rat(3, 2))]);
        assert_eq!(a.exp().unwrap(), uni(2, &[(0, rat(1, 1)), (1, rat(1, 1)), (2, rat(2, 1))]));
        let a = uni(3, &[(1, rat(1, 1)), (2, rat(3, 2)), (3, rat(10, 3))]);
        assert_eq!(
            a.exp().unwrap(),
            uni(3, &[(0, rat(1, 1)), (1, rat(1, 1)), (2, rat(2, 1)), (3, rat(5, 1))])
        );
        assert!(matches!(
            TruncatedSeries::one(&v(&["q"]), 3).exp(),
            Err(SeriesError::NonzeroConstant(_))
        ));
    }

    #[test]
    fn log1p_mercator() {
        let q = uni(3, &[(1, rat(1, 1))]);
        assert_eq!(q.log1p().unwrap(), uni(3, &[(1, rat(1, 1)), (2, rat(-1, 2)), (3, rat(1, 3))]));
        assert!(TruncatedSeries::zero(&v(&["q"]), 3).log1p().unwrap().is_zero());
    }

    #[test]
    fn substitution_example() {
        let vars = v(&["x"]);
        let a = TruncatedSeries::monomial(&vars, 3, vec![2], rat(1, 1));
        let unit = uni(3, &[(0, rat(1, 1)), (1, rat(2, 1))]).with_vars(&vars).unwrap();
        let out = a.substitute(&[SubstImage { monomial: vec![1], unit }]).unwrap();
        assert_eq!(out.coeff(&[2]), rat(1, 1));
        assert_eq!(out.coeff(&[3]), rat(4, 1));
        assert_eq!(out.terms().len(), 2);

        let bad = SubstImage { monomial: vec![0], unit: TruncatedSeries::one(&vars, 3) };
        assert!(a.substitute(&[bad]).is_err());
        let bad = SubstImage { monomial: vec![1], unit: uni(3, &[(0, rat(2, 1))]).with_vars(&vars).unwrap() };
        assert!(a.substitute(&[bad]).is_err());
    }

    #[test]
    fn a1_reversion() {
        let g1 = uni(3, &[(1, rat(1, 1)), (2, rat(3, 2)), (3, rat(10, 3))]);
        let h = g1.scale(&rat(2, 1));
        let fwd = forward_mirror_map(std::slice::from_ref(&h)).unwrap();
        assert_eq!(fwd[0], uni(3, &[(1, rat(1, 1)), (2, rat(2, 1)), (3, rat(5, 1))]));
        let inv = reverse_mirror_map(&[h]).unwrap();
        assert_eq!(inv[0], uni(3, &[(1, rat(1, 1)), (2, rat(-2, 1)), (3, rat(3, 1))]));
    }

    #[test]
    fn json_round_trip() {
        let s = uni(3, &[(0, rat(1, 1)), (2, rat(-7, 3))]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"vars":["q"],"order":3,"terms":[{"e":[0],"num":"1","den":"1"},{"e":[2],"num":"-7","den":"3"}]}"#);
        assert_eq!(serde_json::from_str::<TruncatedSeries>(&j).unwrap(), s);
        assert!(serde_json::from_str::<TruncatedSeries>(r#"{"vars":["q"],"order":1,"terms":[{"e":[2],"num":"1","den":"1"}]}"#).is_err());
    }

    #[test]
    fn display() {
        let s = uni(3, &[(0, rat(1, 1)), (1, rat(-1, 1)), (2, rat(3, 2))]);
        assert_eq!(s.to_string(), "1 - q + 3/2*q^2 + O(4)");
    }

    fn arb_series(order: u32) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(((0u32..4, 0u32..4), -5i64..6, 1i64..4), 0..8).prop_map(move |ts| {
            TruncatedSeries::from_terms(
                &v(&["a", "b"]),
                order,
                ts.into_iter().map(|((i, j), n, d)| (vec![i, j], rat(n, d))),
            )
            .unwrap()
        })
    }

    fn no_constant(s: TruncatedSeries) -> TruncatedSeries {
        let c = TruncatedSeries::constant(s.vars(), s.order(), s.constant_term());
        s.sub(&c).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_axioms(a in arb_series(5), b in arb_series(5), c in arb_series(5)) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn exp_is_a_homomorphism(a in arb_series(5), b in arb_series(5)) {
            let (a, b) = (no_constant(a), no_constant(b));
            prop_assert_eq!(a.add(&b).unwrap().exp().unwrap(), a.exp().unwrap().mul(&b.exp().unwrap()).unwrap());
        }

        #[test]
        fn exp_log_round_trips(a in arb_series(5)) {
            let a = no_constant(a);
            let one = TruncatedSeries::one(a.vars(), a.order());
            prop_assert_eq!(a.exp().unwrap().sub(&one).unwrap().log1p().unwrap(), a.clone());
            prop_assert_eq!(a.log1p().unwrap().exp().unwrap(), one.add(&a).unwrap());
        }

        #[test]
        fn reversion_round_trips(a in arb_series(4), b in arb_series(4)) {
            let h = vec![no_constant(a), no_constant(b)];
            let x = reverse_mirror_map(&h).unwrap();
            // substitute x(q) into q(x) gives the identity
            let fwd = forward_mirror_map(&h).unwrap();
            let images: Vec<SubstImage> = x
                .iter()
                .enumerate()
                .map(|(c, xc)| {
                    let mut m = vec![0, 0];
                    m[c] = 1;
                    // x_c / q_c as a unit series
                    let unit = TruncatedSeries::from_terms(
                        xc.vars(),
                        xc.order(),
                        xc.terms().iter().map(|(e, c2)| {
                            let mut e = e.clone();
                            e[c] -= 1;
                            (e, c2.clone())
                        }),
                    ).unwrap();
                    SubstImage { monomial: m, unit }
                })
                .collect();
            for (c, f) in fwd.iter().enumerate() {
                let id = f.substitute(&images).unwrap();
                let mut m = vec![0, 0];
                m[c] = 1;
                prop_assert_eq!(id.clone(), TruncatedSeries::monomial(id.vars(), id.order(), m, rat(1, 1)));
            }
        }

        #[test]
        fn substitution_composes(a in arb_series(4), u in arb_series(4), w in arb_series(4)) {
            // x -> x*(1+u), then x -> x*(1+w), equals the composite image.
            let vars = a.vars().to_vec();
            let one = TruncatedSeries::one(&vars, 4);
            let u = one.add(&no_constant(u)).unwrap();
            let w = one.add(&no_constant(w)).unwrap();
            let id = |c: usize, unit: TruncatedSeries| {
                let mut m = vec![0, 0];
                m[c] = 1;
                SubstImage { monomial: m, unit }
            };
            let first = vec![id(0, u.clone()), id(1, one.clone())];
            let second = vec![id(0, w.clone()), id(1, w.clone())];
            let stepwise = a.substitute(&first).unwrap().substitute(&second).unwrap();
            let composite_unit = u.substitute(&second).unwrap().mul(&w).unwrap();
            let composite = vec![id(0, composite_unit), id(1, w.clone())];
            prop_assert_eq!(stepwise, a.substitute(&composite).unwrap());
        }
    }
}
