use std::collections::BTreeMap;

use crate::exact::{Matrix, Ring};

/// Column-sparse operator on a truncated module.
///
/// Columns of input depth `<= trusted` are exact; deeper columns may have lost
/// output components beyond the depth cap. `raise` bounds how much the operator
/// can increase depth.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<R: Ring> {
    pub dim: usize,
    pub cols: Vec<Vec<(usize, R)>>,
    pub trusted: i64,
    pub raise: i64,
}

impl<R: Ring> Operator<R> {
    pub fn zero(dim: usize, trusted: i64) -> Self {
        Operator { dim, cols: vec![Vec::new(); dim], trusted, raise: i64::MIN / 4 }
    }

    pub fn identity(dim: usize, trusted: i64) -> Self {
        Operator { dim, cols: (0..dim).map(|i| vec![(i, R::one())]).collect(), trusted, raise: 0 }
    }

    pub fn scalar(dim: usize, trusted: i64, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero(dim, trusted);
        }
        Operator { dim, cols: (0..dim).map(|i| vec![(i, c.clone())]).collect(), trusted, raise: 0 }
    }

    pub fn from_columns(cols: Vec<BTreeMap<usize, R>>, trusted: i64, raise: i64) -> Self {
        let dim = cols.len();
        let cols = cols
            .into_iter()
            .map(|c| c.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Operator { dim, cols, trusted, raise }
    }

    pub fn entry(&self, r: usize, c: usize) -> R {
        self.cols[c]
            .iter()
            .find(|(i, _)| *i == r)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut cols = Vec::with_capacity(self.dim);
        for col in &other.cols {
            let mut acc: BTreeMap<usize, R> = BTreeMap::new();
            for (k, b) in col {
                for (r, a) in &self.cols[*k] {
                    let v = a.mul(b);
                    match acc.get_mut(r) {
                        Some(x) => *x = x.add(&v),
                        None => {
                            acc.insert(*r, v);
                        }
                    }
                }
            }
            cols.push(acc);
        }
        let trusted = other.trusted.min(self.trusted - other.raise.max(0));
        Operator::from_columns(cols, trusted, self.raise + other.raise)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.sub(b))
    }

    fn combine(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        let z = R::zero();
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let left: BTreeMap<usize, &R> = a.iter().map(|(r, v)| (*r, v)).collect();
                let right: BTreeMap<usize, &R> = b.iter().map(|(r, v)| (*r, v)).collect();
                let mut acc = BTreeMap::new();
                for r in left.keys().chain(right.keys()) {
                    if acc.contains_key(r) {
                        continue;
                    }
                    let x = left.get(r).copied().unwrap_or(&z);
                    let y = right.get(r).copied().unwrap_or(&z);
                    acc.insert(*r, f(x, y));
                }
                acc
            })
            .collect();
        Operator::from_columns(cols, self.trusted.min(other.trusted), self.raise.max(other.raise))
    }

    pub fn scale(&self, c: &R) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v.mul(c))).collect())
            .collect();
        Operator::from_columns(cols, self.trusted, self.raise)
    }

    pub fn map<S: Ring, F: Fn(&R) -> S>(&self, f: F) -> Operator<S> {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, f(v))).collect())
            .collect();
        Operator::from_columns(cols, self.trusted, self.raise)
    }

    pub fn try_map<S: Ring, E, F: Fn(&R) -> Result<S, E>>(&self, f: F) -> Result<Operator<S>, E> {
        let mut cols = Vec::with_capacity(self.dim);
        for col in &self.cols {
            let mut out = BTreeMap::new();
            for (r, v) in col {
                out.insert(*r, f(v)?);
            }
            cols.push(out);
        }
        Ok(Operator::from_columns(cols, self.trusted, self.raise))
    }

    /// Keep only columns whose index satisfies `keep`, zeroing the rest.
    pub fn restrict_columns(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut op = self.clone();
        for (c, col) in op.cols.iter_mut().enumerate() {
            if !keep(c) {
                col.clear();
            }
        }
        op
    }

    pub fn to_matrix(&self) -> Matrix<R> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q_int, Rational};

    fn shift(dim: usize) -> Operator<Rational> {
        let cols = (0..dim)
            .map(|c| {
                let mut m = BTreeMap::new();
                if c + 1 < dim {
                    m.insert(c + 1, q_int(1));
                }
                m
            })
            .collect();
        Operator::from_columns(cols, dim as i64 - 2, 1)
    }

    #[test]
    fn compose_tracks_trust() {
        let s = shift(5);
        let s2 = s.compose(&s);
        assert_eq!(s2.entry(2, 0), q_int(1));
        assert_eq!(s2.raise, 2);
        assert_eq!(s2.trusted, 2);
    }

    #[test]
    fn add_and_sub_cancel() {
        let s = shift(4);
        let id = Operator::<Rational>::identity(4, 3);
        assert!(s.add(&id).sub(&s).sub(&id).is_zero());
        assert_eq!(s.add(&id).entry(0, 0), q_int(1));
    }
}
