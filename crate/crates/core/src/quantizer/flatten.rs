use std::collections::{BTreeMap, HashMap};

use crate::exact::{Monomial, MultiPoly, Rational, Ring};
use crate::verma::{Operator, TruncatedVerma};

/// Interning of flattened coordinates `(row, col, monomial)`.
#[derive(Default)]
pub struct FlatIndex {
    map: HashMap<(usize, usize, Monomial), usize>,
}

impl FlatIndex {
    pub fn slot(&mut self, r: usize, c: usize, m: &Monomial) -> usize {
        let n = self.map.len();
        *self.map.entry((r, c, m.clone())).or_insert(n)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Coefficient vector of an operator over Q, restricted to columns of depth `≤ trusted`.
pub fn flatten_poly(op: &Operator<MultiPoly>, tv: &TruncatedVerma, trusted: i64, index: &mut FlatIndex) -> BTreeMap<usize, Rational> {
    let mut v = BTreeMap::new();
    for (c, col) in op.cols.iter().enumerate() {
        if tv.depths[c] as i64 > trusted {
            continue;
        }
        for (r, p) in col {
            for (m, coeff) in p.terms() {
                v.insert(index.slot(*r, c, m), coeff.clone());
            }
        }
    }
    v
}

/// Same for operators with rational entries.
pub fn flatten_rational(op: &Operator<Rational>, tv: &TruncatedVerma, trusted: i64, index: &mut FlatIndex) -> BTreeMap<usize, Rational> {
    let one = Monomial::one();
    let mut v = BTreeMap::new();
    for (c, col) in op.cols.iter().enumerate() {
        if tv.depths[c] as i64 > trusted {
            continue;
        }
        for (r, x) in col {
            if !Ring::is_zero(x) {
                v.insert(index.slot(*r, c, &one), x.clone());
            }
        }
    }
    v
}
