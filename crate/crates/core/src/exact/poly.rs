//! Sparse multivariate Laurent polynomials with rational coefficients.
//!
//! Variables are interned globally; the standard names (`q`, `t`, `h`,
//! `lambda1..8`, `L1..8`) are registered first so their ids are stable
//! across runs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

fn registry() -> &'static RwLock<Vec<String>> {
    static REG: OnceLock<RwLock<Vec<String>>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut names: Vec<String> = vec!["q".into(), "t".into(), "h".into()];
        for i in 1..=8 {
            names.push(format!("lambda{i}"));
        }
        for i in 1..=8 {
            names.push(format!("L{i}"));
        }
        RwLock::new(names)
    })
}

/// An interned indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u16);

impl Var {
    pub fn named(name: &str) -> Var {
        {
            let reg = registry().read().unwrap();
            if let Some(i) = reg.iter().position(|n| n == name) {
                return Var(i as u16);
            }
        }
        let mut reg = registry().write().unwrap();
        if let Some(i) = reg.iter().position(|n| n == name) {
            return Var(i as u16);
        }
        reg.push(name.to_string());
        Var((reg.len() - 1) as u16)
    }

    pub fn name(self) -> String {
        registry().read().unwrap()[self.0 as usize].clone()
    }

    pub fn q() -> Var {
        Var(0)
    }
    pub fn t() -> Var {
        Var(1)
    }
    pub fn h() -> Var {
        Var(2)
    }
    /// Orbit parameter `lambda_{i+1}` (zero-based index).
    pub fn lambda(i: usize) -> Var {
        assert!(i < 8, "at most 8 orbit parameters");
        Var(3 + i as u16)
    }
    /// The invertible symbol standing for `q^{lambda_{i+1}}`.
    pub fn big_l(i: usize) -> Var {
        assert!(i < 8, "at most 8 orbit parameters");
        Var(11 + i as u16)
    }
    pub fn lambda_index(self) -> Option<usize> {
        (3..11).contains(&self.0).then(|| (self.0 - 3) as usize)
    }
    pub fn big_l_index(self) -> Option<usize> {
        (11..19).contains(&self.0).then(|| (self.0 - 11) as usize)
    }
}

/// Sorted sparse exponent vector; never stores a zero exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: i32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|(_, e)| *e >= 0)
    }

    /// Lexicographic order with lower variable ids more significant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, e))) => return 0.cmp(&e),
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va == vb {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    } else if va < vb {
                        return ea.cmp(&0);
                    } else {
                        return 0.cmp(&eb);
                    }
                }
            }
        }
    }

    /// `self / other` when every exponent stays nonnegative.
    pub fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let m = self.mul(&other.inv());
        m.is_polynomial().then_some(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        Ok(())
    }
}

/// A multivariate Laurent polynomial over Q. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = MultiPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v, 1), Rational::one())
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::monomial(Monomial::var(v, e), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = MultiPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, v: Var) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: Var) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.is_polynomial())
    }

    /// Every term has the same total degree over `vars`.
    pub fn homogeneous_degree(&self, vars: &[Var]) -> Option<i64> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d: i64 = vars.iter().map(|v| m.exp(*v) as i64).sum();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Coefficient of `v^e`, as a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, v: Var, e: i32) -> MultiPoly {
        MultiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(v) == e)
                .map(|(m, c)| (m.without(v), c.clone())),
        )
    }

    /// Substitute rational values; fails if a variable with a negative exponent is sent to 0.
    pub fn eval(&self, assignment: &[(Var, Rational)]) -> Result<MultiPoly, Var> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in &m.0 {
                if let Some((_, val)) = assignment.iter().find(|(w, _)| *w == v) {
                    if val.is_zero() {
                        if e < 0 {
                            return Err(v);
                        }
                        coeff = Rational::zero();
                    } else {
                        coeff *= rational_pow(val, e);
                    }
                } else {
                    rest.push((v, e));
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        Ok(out)
    }

    /// Full evaluation to a rational; every variable must be assigned.
    pub fn eval_rational(&self, assignment: &[(Var, Rational)]) -> Result<Rational, Var> {
        let p = self.eval(assignment)?;
        match p.as_constant() {
            Some(c) => Ok(c),
            None => Err(p.vars()[0]),
        }
    }

    /// Substitute `v -> value` where `value` is a polynomial; `v` must appear with nonnegative
    /// exponents unless `value` is a single monomial.
    pub fn substitute(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        let inv = if value.len() == 1 {
            let (m, c) = value.terms().next().unwrap();
            Some(MultiPoly::monomial(m.inv(), c.recip()))
        } else {
            None
        };
        let mut out = MultiPoly::zero();
        let mut cache: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let rest = MultiPoly::monomial(m.without(v), c.clone());
            let p = cache
                .entry(e)
                .or_insert_with(|| {
                    if e >= 0 {
                        value.pow(e as u32)
                    } else {
                        inv.as_ref()
                            .expect("negative power substitution needs a monomial value")
                            .pow((-e) as u32)
                    }
                })
                .clone();
            out = out.add(&rest.mul(&p));
        }
        out
    }

    /// Leading term under [`Monomial::lex_cmp`].
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Exact division of polynomials; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = {
            let (m, c) = divisor.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.divide(&dm)?;
            let c = rc / &dc;
            let term = MultiPoly::monomial(m, c);
            rem = rem.sub(&divisor.mul(&term));
            quot = quot.add(&term);
        }
        Some(quot)
    }

    /// gcd of numerators over lcm of denominators of the coefficients, sign of the leading term.
    pub fn content(&self) -> Rational {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return Rational::one();
        }
        let mut r = Rational::new(g, l);
        if self.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            r = -r;
        }
        r
    }

    /// Map coefficients and monomials.
    pub fn map_terms<F: Fn(&Monomial, &Rational) -> (Monomial, Rational)>(&self, f: F) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| f(m, c)))
    }

    /// Replace every `v^e` by `v^e * w^(k-e)` on terms of `v`-degree `e` (homogenization).
    pub fn homogenize(&self, vars: &[Var], by: Var, degree: i64) -> MultiPoly {
        self.map_terms(|m, c| {
            let d: i64 = vars.iter().map(|v| m.exp(*v) as i64).sum();
            (m.mul(&Monomial::var(by, (degree - d) as i32)), c.clone())
        })
    }
}

pub(crate) fn rational_pow(x: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.lex_cmp(a.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl super::Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        MultiPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        MultiPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MultiPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
    fn from_rational(c: &Rational) -> Self {
        MultiPoly::constant(c.clone())
    }
}

/// Small helper used by tests and oracles: integer value of a rational.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    r.is_integer().then(|| r.numer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> MultiPoly {
        MultiPoly::var(Var::lambda(0))
    }
    fn h() -> MultiPoly {
        MultiPoly::var(Var::h())
    }

    #[test]
    fn laurent_normalization() {
        let q = MultiPoly::var(Var::q());
        let qi = MultiPoly::var_pow(Var::q(), -1);
        assert!(q.mul(&qi).is_one());
        let l = MultiPoly::var(Var::big_l(0));
        let li = MultiPoly::var_pow(Var::big_l(0), -1);
        assert!(l.mul(&li).is_one());
    }

    #[test]
    fn exact_division() {
        let a = lam().sub(&h()).mul(&lam().add(&MultiPoly::from_int(2)));
        let b = a.div_exact(&lam().sub(&h())).unwrap();
        assert_eq!(b, lam().add(&MultiPoly::from_int(2)));
        assert!(a.div_exact(&lam().add(&h())).is_none());
    }

    #[test]
    fn evaluation_reports_vanishing_variable() {
        let p = lam().mul(&MultiPoly::var_pow(Var::h(), -1));
        let err = p.eval(&[(Var::h(), Rational::zero())]).unwrap_err();
        assert_eq!(err, Var::h());
        let v = p
            .eval_rational(&[(Var::h(), Rational::from_integer(2.into())), (Var::lambda(0), Rational::from_integer(3.into()))])
            .unwrap();
        assert_eq!(v, Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn display_is_readable() {
        let p = lam().sub(&h().scale(&Rational::from_integer(2.into())));
        assert_eq!(p.to_string(), "-2*h + lambda1");
    }
}
