//! Coefficients of the quantum layer: Laurent polynomials in `q` and the
//! `L_i = q^{lambda_i}` symbols, over a univariate denominator in `q`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{Monomial, MultiPoly, Rational, UniPoly, Var};

/// `num / den` where `den` is a monic polynomial in `q` with nonzero constant term,
/// coprime to `num` over Q(L)[q].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QFrac {
    num: MultiPoly,
    den: UniPoly,
}

impl fmt::Debug for QFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, uni_to_poly(&self.den))
        }
    }
}

fn uni_to_poly(u: &UniPoly) -> MultiPoly {
    MultiPoly::from_terms(
        u.0.iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(Var::q(), i as i32), c.clone())),
    )
}

/// Split a Laurent polynomial into `q^shift * sum_m P_m(q) * m` with `P_m` ordinary polynomials.
fn q_slices(p: &MultiPoly) -> (i32, BTreeMap<Monomial, UniPoly>) {
    let q = Var::q();
    let shift = p.min_degree_in(q);
    let mut raw: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = (m.exp(q) - shift) as usize;
        let v = raw.entry(m.without(q)).or_default();
        if v.len() <= e {
            v.resize(e + 1, Rational::zero());
        }
        v[e] += c;
    }
    (shift, raw.into_iter().map(|(m, v)| (m, UniPoly::new(v))).collect())
}

fn divide_by_uni(p: &MultiPoly, d: &UniPoly) -> MultiPoly {
    let (shift, slices) = q_slices(p);
    let mut out = MultiPoly::zero();
    for (m, s) in slices {
        let (quot, rem) = s.divrem(d);
        debug_assert!(rem.is_zero());
        for (i, c) in quot.0.iter().enumerate() {
            out.add_term(m.mul(&Monomial::var(Var::q(), i as i32 + shift)), c.clone());
        }
    }
    out
}

impl QFrac {
    pub fn from_poly(p: MultiPoly) -> Self {
        QFrac { num: p, den: UniPoly::one() }
    }

    /// `num / den` with `den` a nonzero Laurent polynomial in `q` alone.
    pub fn new(num: MultiPoly, den: &MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero q-denominator");
        assert!(
            den.vars().iter().all(|v| *v == Var::q()),
            "q-denominators may only involve q"
        );
        let (shift, slices) = q_slices(den);
        let u = slices.into_values().next().unwrap();
        // den = q^shift * u(q); move q^shift into the numerator.
        let low = u.0.iter().position(|c| !c.is_zero()).unwrap();
        let u = UniPoly::new(u.0[low..].to_vec());
        let shift = shift + low as i32;
        let lead = u.lead();
        let num = num
            .mul_monomial(&Monomial::var(Var::q(), -shift))
            .scale(&lead.recip());
        let mut f = QFrac { num, den: u.monic() };
        f.reduce();
        f
    }

    pub fn var(v: Var) -> Self {
        QFrac::from_poly(MultiPoly::var(v))
    }

    pub fn q_pow(e: i32) -> Self {
        QFrac::from_poly(MultiPoly::var_pow(Var::q(), e))
    }

    /// Quantum integer `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`.
    pub fn q_int(n: i32, d: i32) -> Self {
        let num = MultiPoly::var_pow(Var::q(), d * n).sub(&MultiPoly::var_pow(Var::q(), -d * n));
        let den = MultiPoly::var_pow(Var::q(), d).sub(&MultiPoly::var_pow(Var::q(), -d));
        QFrac::new(num, &den)
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom_poly(&self) -> MultiPoly {
        uni_to_poly(&self.den)
    }

    pub fn denom(&self) -> &UniPoly {
        &self.den
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = UniPoly::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let (_, slices) = q_slices(&self.num);
        let mut g = self.den.clone();
        for s in slices.values() {
            g = g.gcd(s);
            if g.degree() == Some(0) {
                return;
            }
        }
        if g.degree().unwrap_or(0) > 0 {
            self.num = divide_by_uni(&self.num, &g);
            self.den = self.den.divrem(&g).0.monic();
        }
    }

    pub fn is_l_free(&self) -> bool {
        self.num.vars().iter().all(|v| *v == Var::q())
    }

    /// Multiplicative inverse; only defined when the numerator involves `q` alone.
    pub fn inverse(&self) -> Option<QFrac> {
        if self.num.is_zero() || !self.is_l_free() {
            return None;
        }
        Some(QFrac::new(uni_to_poly(&self.den), &self.num))
    }

    /// Apply a ring map on the numerator variables other than `q`.
    pub fn map_numerator<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> QFrac {
        let mut out = QFrac { num: f(&self.num), den: self.den.clone() };
        out.reduce();
        out
    }
}

impl super::Ring for QFrac {
    fn zero() -> Self {
        QFrac::from_poly(MultiPoly::zero())
    }
    fn one() -> Self {
        QFrac::from_poly(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let mut f = QFrac { num: self.num.add(&o.num), den: self.den.clone() };
            f.reduce();
            return f;
        }
        let g = self.den.gcd(&o.den);
        let a_mult = o.den.divrem(&g).0;
        let b_mult = self.den.divrem(&g).0;
        let num = self
            .num
            .mul(&uni_to_poly(&a_mult))
            .add(&o.num.mul(&uni_to_poly(&b_mult)));
        // Both denominators are monic, so the lcm is monic as well.
        let mut f = QFrac { num, den: self.den.mul(&a_mult) };
        f.reduce();
        f
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return QFrac::zero();
        }
        let mut f = QFrac { num: self.num.mul(&o.num), den: self.den.mul(&o.den) };
        f.reduce();
        f
    }
    fn neg(&self) -> Self {
        QFrac { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_rational(c: &Rational) -> Self {
        QFrac::from_poly(MultiPoly::constant(c.clone()))
    }
}

impl QFrac {
    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn scale(&self, c: &Rational) -> QFrac {
        QFrac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn one_ref() -> &'static QFrac {
        static ONE: std::sync::OnceLock<QFrac> = std::sync::OnceLock::new();
        ONE.get_or_init(|| QFrac::from_poly(MultiPoly::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Ring;

    #[test]
    fn quantum_integers_are_laurent() {
        let two = QFrac::q_int(2, 1);
        assert!(two.denom().is_one());
        assert_eq!(
            two.numer(),
            &MultiPoly::var(Var::q()).add(&MultiPoly::var_pow(Var::q(), -1))
        );
    }

    #[test]
    fn cancellation_through_addition() {
        let d = MultiPoly::var(Var::q()).sub(&MultiPoly::var_pow(Var::q(), -1));
        let a = QFrac::new(MultiPoly::var(Var::q()), &d);
        let b = QFrac::new(MultiPoly::var_pow(Var::q(), -1), &d);
        assert_eq!(a.sub(&b), QFrac::one());
        let inv = a.inverse().unwrap();
        assert_eq!(inv.mul(&a), QFrac::one());
    }

    #[test]
    fn l_symbols_stay_in_numerator() {
        let d = MultiPoly::var(Var::q()).sub(&MultiPoly::var_pow(Var::q(), -1));
        let l = MultiPoly::var(Var::big_l(0));
        let x = QFrac::new(l.clone().sub(&MultiPoly::var_pow(Var::big_l(0), -1)), &d);
        assert!(x.inverse().is_none());
        assert!(!x.denom().is_one());
        let y = x.mul(&QFrac::from_poly(d.clone()));
        assert!(y.denom().is_one());
    }
}
