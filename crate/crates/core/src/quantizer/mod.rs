//! Graded slices of `A_{λ,h}`, the image of `hφ_{λ/h}`, inside operators on a truncated
//! Verma module, and the checks run on them.

mod checks;
mod flatten;

use serde_json::json;

use crate::exact::{MultiPoly, QEchelon, Var};
use crate::liealg::ParabolicDatum;
use crate::verma::{Operator, VermaActions};
use crate::Error;

pub use checks::{
    commutativity_mod_h, flatness_evidence, generic_slice_rank, hilbert_oracle, random_point, specialized_slice_rank, leading_term_eval, multiplicity_check, symmetrized_action_on_vacuum,
    CommutativityReport, FlatnessReport, FlatnessRow, IsotypicReport, IsotypicRow, SpecialPoint,
};
pub use flatten::{flatten_poly, flatten_rational, FlatIndex};

pub type PolyOp = Operator<MultiPoly>;

/// Degree-`d` piece of `A_{λ,h}` as a Q-basis of operators.
#[derive(Clone, Debug)]
pub struct GradedSlice {
    pub degree: usize,
    pub ops: Vec<PolyOp>,
    /// Weight of each basis operator in simple-root coordinates.
    pub weights: Vec<Vec<i64>>,
    /// Columns of depth `≤ trusted` are exact for every operator in the slice.
    pub trusted: i64,
    pub spanning: usize,
    pub rank: usize,
}

/// Rescaled generators on a truncated module, plus the scalar multipliers `λ_i`, `h`.
pub struct SliceBuilder {
    pub pd: ParabolicDatum,
    pub actions: VermaActions,
}

impl SliceBuilder {
    pub fn new(pd: &ParabolicDatum, depth: usize) -> Result<SliceBuilder, Error> {
        Ok(SliceBuilder { pd: pd.clone(), actions: VermaActions::new(pd, depth)? })
    }

    pub fn depth(&self) -> usize {
        self.actions.tv.depth_cap
    }

    pub fn generator(&self, x: usize) -> &PolyOp {
        &self.actions.rescaled[x].op
    }

    pub fn scalars(&self) -> Vec<MultiPoly> {
        let mut s: Vec<MultiPoly> = (0..self.pd.levi.n_params()).map(|j| MultiPoly::var(Var::lambda(j))).collect();
        s.push(MultiPoly::var(Var::h()));
        s
    }

    pub fn identity(&self) -> PolyOp {
        Operator::identity(self.actions.tv.dim(), self.depth() as i64)
    }

    /// Slices of degree `0..=d_max`.
    pub fn build(&self, d_max: usize) -> Vec<GradedSlice> {
        let tv = &self.actions.tv;
        let rank = self.pd.rs().rank;
        let mut out = vec![GradedSlice {
            degree: 0,
            ops: vec![self.identity()],
            weights: vec![vec![0; rank]],
            trusted: self.depth() as i64,
            spanning: 1,
            rank: 1,
        }];
        let b = &self.pd.basis;
        for d in 1..=d_max {
            let prev = out.last().unwrap();
            let mut cands: Vec<(PolyOp, Vec<i64>)> = Vec::new();
            for (a, w) in prev.ops.iter().zip(&prev.weights) {
                for x in 0..b.dim() {
                    let wx: Vec<i64> = w.iter().zip(b.weight(x)).map(|(u, v)| u + v).collect();
                    cands.push((self.generator(x).compose(a), wx));
                }
                for s in self.scalars() {
                    cands.push((a.scale(&s), w.clone()));
                }
            }
            let trusted = cands.iter().map(|(o, _)| o.trusted).min().unwrap_or(-1);
            let mut index = FlatIndex::default();
            let mut ech = QEchelon::default();
            let mut ops = Vec::new();
            let mut weights = Vec::new();
            let spanning = cands.len();
            for (op, w) in cands {
                let v = flatten_poly(&op, tv, trusted, &mut index);
                if ech.insert(v) {
                    ops.push(op);
                    weights.push(w);
                }
            }
            let rank = ops.len();
            out.push(GradedSlice { degree: d, ops, weights, trusted, spanning, rank });
        }
        out
    }
}

/// Degree-indexed ranks with the depth evidence behind them.
#[derive(Clone, Debug)]
pub struct HilbertTable {
    pub algebra: String,
    pub levi: Vec<usize>,
    pub ranks: Vec<usize>,
    pub depth: usize,
    pub stabilized: bool,
    /// `(depth, ranks)` for every depth tried.
    pub history: Vec<(usize, Vec<usize>)>,
}

impl HilbertTable {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "algebra": self.algebra,
            "levi": self.levi.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "table": self.ranks.iter().enumerate().map(|(d, r)| json!({"d": d, "rank": r})).collect::<Vec<_>>(),
            "depth": self.depth,
            "stabilized": self.stabilized,
            "depth_history": self.history.iter().map(|(d, r)| json!({"depth": d, "ranks": r})).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,rank\n");
        for (d, r) in self.ranks.iter().enumerate() {
            s.push_str(&format!("{d},{r}\n"));
        }
        s
    }
}

/// Starting depth `2·d_max·(max root height)`.
pub fn initial_depth(pd: &ParabolicDatum, d_max: usize) -> usize {
    (2 * d_max * pd.rs().max_height()).max(1)
}

/// Ranks for `d ≤ d_max`, raising the depth by 2 until two consecutive increments agree.
/// Without stabilization below `depth_cap` the table is returned with `stabilized = false`.
pub fn hilbert_function(pd: &ParabolicDatum, d_max: usize, depth_cap: usize) -> Result<(HilbertTable, SliceBuilder, Vec<GradedSlice>), Error> {
    let mut depth = initial_depth(pd, d_max);
    let mut history: Vec<(usize, Vec<usize>)> = Vec::new();
    loop {
        let sb = SliceBuilder::new(pd, depth)?;
        let slices = sb.build(d_max);
        let ranks: Vec<usize> = slices.iter().map(|s| s.rank).collect();
        history.push((depth, ranks.clone()));
        let n = history.len();
        let stable = n >= 3 && history[n - 3].1 == ranks && history[n - 2].1 == ranks;
        if stable || depth + 2 > depth_cap {
            let table = HilbertTable {
                algebra: pd.rs().name(),
                levi: pd.levi.levi_simples.clone(),
                ranks,
                depth,
                stabilized: stable,
                history,
            };
            return Ok((table, sb, slices));
        }
        depth += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_low_degrees() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        let sb = SliceBuilder::new(&pd, 8).unwrap();
        let ranks: Vec<usize> = sb.build(2).iter().map(|s| s.rank).collect();
        assert_eq!(ranks, vec![1, 5, 14]);
    }

    #[test]
    fn slices_are_homogeneous() {
        let pd = ParabolicDatum::from_names("A2", &[0]).unwrap();
        let sb = SliceBuilder::new(&pd, 6).unwrap();
        for s in sb.build(2) {
            for op in &s.ops {
                for col in &op.cols {
                    for (_, v) in col {
                        assert_eq!(v.homogeneous_degree(&[Var::lambda(0), Var::h()]), Some(s.degree as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn degree_zero_only() {
        let pd = ParabolicDatum::from_names("A2", &[]).unwrap();
        let (t, _, _) = hilbert_function(&pd, 0, 8).unwrap();
        assert_eq!(t.ranks, vec![1]);
        assert!(t.stabilized);
    }
}
