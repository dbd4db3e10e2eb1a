use std::fmt;

use super::{MultiPoly, Rational, Ring, Var};

/// Element of the fraction field of Q[vars], reduced by content.
#[derive(Clone, PartialEq, Eq)]
pub struct FractionElement {
    num: MultiPoly,
    den: MultiPoly,
}

impl fmt::Debug for FractionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FractionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<MultiPoly> for FractionElement {
    fn from(p: MultiPoly) -> Self {
        FractionElement { num: p, den: MultiPoly::one() }
    }
}

impl FractionElement {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "fraction with zero denominator");
        let mut f = FractionElement { num, den };
        f.reduce();
        f
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one();
            return;
        }
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale(&c.recip());
            self.den = MultiPoly::one();
            return;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = MultiPoly::one();
            return;
        }
        let c = self.den.content();
        self.num = self.num.scale(&c.recip());
        self.den = self.den.scale(&c.recip());
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    pub fn recip(&self) -> Self {
        FractionElement::new(self.den.clone(), self.num.clone())
    }

    /// Evaluate at a full or partial assignment; `Err` when the denominator vanishes.
    pub fn eval(&self, assignment: &[(Var, Rational)]) -> Result<FractionElement, ()> {
        let n = self.num.eval(assignment).map_err(|_| ())?;
        let d = self.den.eval(assignment).map_err(|_| ())?;
        if d.is_zero() {
            return Err(());
        }
        Ok(FractionElement::new(n, d))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }
}

impl Ring for FractionElement {
    fn zero() -> Self {
        MultiPoly::zero().into()
    }
    fn one() -> Self {
        MultiPoly::one().into()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return FractionElement::new(self.num.add(&o.num), self.den.clone());
        }
        FractionElement::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        FractionElement::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        FractionElement { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_rational(c: &Rational) -> Self {
        MultiPoly::constant(c.clone()).into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancels_exact_quotients() {
        let l = MultiPoly::var(Var::lambda(0));
        let h = MultiPoly::var(Var::h());
        let f = FractionElement::new(l.mul(&h), h.clone());
        assert_eq!(f, FractionElement::from(l.clone()));
        let g = FractionElement::new(l.clone(), h.clone());
        let back = g.mul(&FractionElement::from(h));
        assert_eq!(back, FractionElement::from(l));
    }
}
