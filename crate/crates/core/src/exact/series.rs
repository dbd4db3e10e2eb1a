//! Truncated power series in `t` with polynomial coefficients, and the
//! `q = e^t`, `L_i = e^{lambda_i t}` expansion.

use std::fmt;

use super::{q_int, Monomial, MultiPoly, QFrac, Rational, Ring, Var};

/// `sum_j c_j t^j`, known modulo `t^{order+1}`; `order = None` means exact.
#[derive(Clone, PartialEq)]
pub struct TSeries {
    coeffs: Vec<MultiPoly>,
    order: Option<usize>,
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "[t^{j}: {c}] ")?;
            }
        }
        match self.order {
            Some(o) => write!(f, "+ O(t^{})", o + 1),
            None => Ok(()),
        }
    }
}

impl TSeries {
    pub fn new(mut coeffs: Vec<MultiPoly>, order: Option<usize>) -> Self {
        if let Some(o) = order {
            coeffs.truncate(o + 1);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TSeries { coeffs, order }
    }

    pub fn constant(p: MultiPoly) -> Self {
        TSeries::new(vec![p], None)
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn coeff(&self, j: usize) -> MultiPoly {
        self.coeffs.get(j).cloned().unwrap_or_else(MultiPoly::zero)
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> TSeries {
        let o = self.order.map_or(order, |s| s.min(order));
        TSeries::new(self.coeffs.clone(), Some(o))
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn min_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn map_coeffs<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> TSeries {
        TSeries::new(self.coeffs.iter().map(f).collect(), self.order)
    }

    /// Divide by a series whose coefficients are rational constants; the divisor's
    /// valuation is absorbed and reduces the known order.
    pub fn div_scalar_series(&self, d: &TSeries) -> Option<TSeries> {
        let v = d.valuation()?;
        if self.valuation().is_some_and(|w| w < v) {
            return None;
        }
        let shifted_num: Vec<MultiPoly> = self.coeffs.iter().skip(v).cloned().collect();
        let den: Vec<Rational> = d
            .coeffs
            .iter()
            .skip(v)
            .map(|c| c.as_constant().expect("scalar divisor"))
            .collect();
        let order = Self::min_order(self.order, d.order).map(|o| o - v);
        let n = order.unwrap_or(shifted_num.len() + 8);
        let inv0 = den[0].recip();
        let mut out: Vec<MultiPoly> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut acc = shifted_num.get(j).cloned().unwrap_or_else(MultiPoly::zero);
            for i in 1..=j {
                if let Some(di) = den.get(i) {
                    if !di.is_zero() {
                        acc = acc.sub(&out[j - i].scale(di));
                    }
                }
            }
            out.push(acc.scale(&inv0));
        }
        Some(TSeries::new(out, order.or(Some(n))))
    }

    /// Collapse to a single polynomial in `t` and the coefficient variables.
    pub fn to_poly(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            out = out.add(&c.mul_monomial(&Monomial::var(Var::t(), j as i32)));
        }
        out
    }
}

impl Ring for TSeries {
    fn zero() -> Self {
        TSeries::new(vec![], None)
    }
    fn one() -> Self {
        TSeries::constant(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = MultiPoly::zero();
        TSeries::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z).add(o.coeffs.get(i).unwrap_or(&z)))
                .collect(),
            Self::min_order(self.order, o.order),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        // a nonzero factor of valuation v keeps v extra orders of the other factor.
        let order = match (self.order, o.order) {
            (None, None) => None,
            (Some(a), None) => Some(a + o.valuation().unwrap_or(0)),
            (None, Some(b)) => Some(b + self.valuation().unwrap_or(0)),
            (Some(a), Some(b)) => {
                Some((a + o.valuation().unwrap_or(0)).min(b + self.valuation().unwrap_or(0)))
            }
        };
        if self.is_zero() || o.is_zero() {
            return TSeries::new(vec![], order);
        }
        let cap = order.unwrap_or(usize::MAX);
        let mut out = vec![MultiPoly::zero(); (self.coeffs.len() + o.coeffs.len() - 1).min(cap.saturating_add(1))];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= out.len() {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TSeries::new(out, order)
    }
    fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }
    fn from_rational(c: &Rational) -> Self {
        TSeries::constant(MultiPoly::constant(c.clone()))
    }
}

/// `exp(form * t)` modulo `t^{order+1}`.
pub fn exp_series(form: &MultiPoly, order: usize) -> TSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut power = MultiPoly::one();
    let mut fact = Rational::one();
    for j in 0..=order {
        if j > 0 {
            power = power.mul(form);
            fact *= q_int(j as i64);
        }
        coeffs.push(power.scale(&fact.recip()));
    }
    TSeries::new(coeffs, Some(order))
}

/// Expand a Laurent polynomial in `q`, `L_i` with `q = e^t` and `L_i = e^{w_i t}`,
/// where `weights[i]` is the exponent form `w_i` (e.g. `lambda_i` or `lambda_i / h`).
pub fn expand_laurent(p: &MultiPoly, weights: &dyn Fn(usize) -> MultiPoly, order: usize) -> TSeries {
    let mut out = TSeries::new(vec![], Some(order));
    for (m, c) in p.terms() {
        let mut form = MultiPoly::zero();
        let mut rest = Vec::new();
        for &(v, e) in &m.0 {
            if v == Var::q() {
                form = form.add(&MultiPoly::from_int(e as i64));
            } else if let Some(i) = v.big_l_index() {
                form = form.add(&weights(i).scale(&q_int(e as i64)));
            } else {
                rest.push((v, e));
            }
        }
        let s = exp_series(&form, order).map_coeffs(|x| x.mul_monomial(&Monomial(rest.clone())).scale(c));
        out = out.add(&s);
    }
    out
}

/// Expand a q-coefficient; the denominator's t-valuation is divided out, which costs
/// that many orders of precision, so the numerator is expanded correspondingly further.
pub fn expand_qfrac(x: &QFrac, weights: &dyn Fn(usize) -> MultiPoly, order: usize) -> TSeries {
    if x.denom().is_one() {
        return expand_laurent(x.numer(), weights, order);
    }
    let span = (x.denom_poly().degree_in(Var::q()) - x.denom_poly().min_degree_in(Var::q())).max(0) as usize;
    let den = expand_laurent(&x.denom_poly(), &|_| MultiPoly::zero(), order + span + 1);
    let v = den.valuation().expect("nonzero denominator");
    let num = expand_laurent(x.numer(), weights, order + v);
    let den = den.truncate(order + v);
    num.div_scalar_series(&den)
        .expect("q-coefficient is not a power series in t")
        .truncate(order)
}

/// Result of [`q_series_expand`]: a polynomial in `t` and `lambda_i`, valid modulo `t^{order+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    pub poly: MultiPoly,
    pub order: usize,
}

/// Substitute `q = e^t`, `L_i = e^{lambda_i t}` and truncate at total t-order `order`.
pub fn q_series_expand(p: &MultiPoly, order: usize) -> QSeries {
    let s = expand_laurent(p, &|i| MultiPoly::var(Var::lambda(i)), order);
    QSeries { poly: s.to_poly(), order }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_frac;

    #[test]
    fn q_minus_q_inverse() {
        let p = MultiPoly::var(Var::q()).sub(&MultiPoly::var_pow(Var::q(), -1));
        let s = q_series_expand(&p, 2);
        assert_eq!(s.poly, MultiPoly::var(Var::t()).scale(&q_int(2)));
        assert_eq!(s.order, 2);
    }

    #[test]
    fn l_symbol_taylor() {
        let s = q_series_expand(&MultiPoly::var(Var::big_l(0)), 2);
        let l = MultiPoly::var(Var::lambda(0));
        let t = MultiPoly::var(Var::t());
        let expect = MultiPoly::one()
            .add(&l.mul(&t))
            .add(&l.pow(2).mul(&t.pow(2)).scale(&q_frac(1, 2)));
        assert_eq!(s.poly, expect);
    }

    #[test]
    fn quantum_number_of_lambda_is_a_series() {
        // [lambda] = (L - L^-1)/(q - q^-1) = lambda + (lambda^3 - lambda) t^2 / 6 + ...
        let d = MultiPoly::var(Var::q()).sub(&MultiPoly::var_pow(Var::q(), -1));
        let n = MultiPoly::var(Var::big_l(0)).sub(&MultiPoly::var_pow(Var::big_l(0), -1));
        let x = QFrac::new(n, &d);
        let s = expand_qfrac(&x, &|i| MultiPoly::var(Var::lambda(i)), 2);
        let l = MultiPoly::var(Var::lambda(0));
        assert_eq!(s.coeff(0), l);
        assert!(s.coeff(1).is_zero());
        assert_eq!(s.coeff(2), l.pow(3).sub(&l).scale(&q_frac(1, 6)));
    }
}
