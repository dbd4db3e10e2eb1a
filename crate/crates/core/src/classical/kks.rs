use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact::{q_int, Rational};
use crate::liealg::ChevalleyBasis;

/// Polynomial in the linear coordinates of `g*`, one per Chevalley basis element.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SymPolyElement {
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl fmt::Debug for SymPolyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl SymPolyElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn linear(dim: usize, x: usize) -> Self {
        let mut m = vec![0; dim];
        m[x] = 1;
        Self::monomial(m, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(exps, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (m, c) in &o.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut s = Self::zero();
        for (m, c) in &self.terms {
            s.add_term(m.clone(), c * k);
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut s = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                s.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        s
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn derivative(&self, x: usize) -> Self {
        let mut s = Self::zero();
        for (m, c) in &self.terms {
            if m[x] > 0 {
                let mut m2 = m.clone();
                m2[x] -= 1;
                s.add_term(m2, c * q_int(m[x] as i64));
            }
        }
        s
    }

    /// Value at a point of `g*` given by its coordinates.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (e, p) in m.iter().zip(point) {
                for _ in 0..*e {
                    v *= p;
                }
            }
            total += v;
        }
        total
    }
}

/// `{f, g} = Σ ∂_a f ∂_b g [x_a, x_b]`, the Leibniz extension of `{x, y} = [x, y]`.
pub fn kks_bracket(basis: &ChevalleyBasis, f: &SymPolyElement, g: &SymPolyElement) -> SymPolyElement {
    let n = basis.dim();
    let df: Vec<SymPolyElement> = (0..n).map(|a| f.derivative(a)).collect();
    let dg: Vec<SymPolyElement> = (0..n).map(|b| g.derivative(b)).collect();
    let mut out = SymPolyElement::zero();
    for a in 0..n {
        if df[a].is_zero() {
            continue;
        }
        for b in 0..n {
            if dg[b].is_zero() || basis.bracket(a, b).is_empty() {
                continue;
            }
            let mut lin = SymPolyElement::zero();
            for &(z, c) in basis.bracket(a, b) {
                lin = lin.add(&SymPolyElement::linear(n, z).scale(&q_int(c)));
            }
            out = out.add(&df[a].mul(&dg[b]).mul(&lin));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::RootSystem;

    #[test]
    fn sl2_examples() {
        let b = ChevalleyBasis::new(&RootSystem::from_name("A1").unwrap());
        let n = b.dim();
        let (e, h, f) = (
            SymPolyElement::linear(n, b.e(0)),
            SymPolyElement::linear(n, b.h(0)),
            SymPolyElement::linear(n, b.f(0)),
        );
        assert_eq!(kks_bracket(&b, &e, &f), h);
        assert!(kks_bracket(&b, &h, &h.mul(&h)).is_zero());
        assert!(kks_bracket(&b, &e.mul(&f), &h).is_zero());
    }

    #[test]
    fn antisymmetry_and_jacobi_on_sl3() {
        let b = ChevalleyBasis::new(&RootSystem::from_name("A2").unwrap());
        let n = b.dim();
        let x = |i| SymPolyElement::linear(n, i);
        let f = x(0).mul(&x(5)).add(&x(3));
        let g = x(1).mul(&x(1)).add(&x(7).scale(&q_int(3)));
        let k = x(2).mul(&x(6)).mul(&x(4));
        let fg = kks_bracket(&b, &f, &g);
        assert_eq!(fg.add(&kks_bracket(&b, &g, &f)), SymPolyElement::zero());
        let j = kks_bracket(&b, &f, &kks_bracket(&b, &g, &k))
            .add(&kks_bracket(&b, &g, &kks_bracket(&b, &k, &f)))
            .add(&kks_bracket(&b, &k, &fg));
        assert!(j.is_zero());
        assert_eq!(fg.degree(), Some(3));
    }
}
