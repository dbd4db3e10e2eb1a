//! Exact arithmetic: rationals, Laurent polynomials, fractions, q-coefficients,
//! truncated t-series and matrices with exact rank.

mod frac;
mod matrix;
mod poly;
mod qfrac;
mod rank;
mod series;
mod unipoly;

pub use frac::FractionElement;
pub use matrix::{Matrix, SparseMatrix};
pub use poly::{rational_to_i64, Monomial, MultiPoly, Var};
pub use qfrac::QFrac;
pub use rank::{
    bareiss_determinant, bareiss_rank, nullspace, rank_over_fractions, rank_over_q, rref, specialize,
    specialized_rank, QEchelon, SpecializeError,
};
pub use series::{exp_series, expand_laurent, expand_qfrac, q_series_expand, QSeries, TSeries};
pub use unipoly::UniPoly;

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

/// Commutative ring operations shared by every coefficient type.
pub trait Ring: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(c: &Rational) -> Self;

    fn from_int(c: i64) -> Self {
        Self::from_rational(&Rational::from_integer(c.into()))
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(c: &Rational) -> Self {
        c.clone()
    }
}

/// Shorthand for an integer rational.
pub fn q_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn q_frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
