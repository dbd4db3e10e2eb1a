use serde_json::json;

use super::{ChevalleyBasis, RootSystem};
use crate::Error;

/// Levi subset `S` of simple roots and the complementary orbit parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviDatum {
    pub levi_simples: Vec<usize>,
    pub orbit_params: Vec<usize>,
}

impl LeviDatum {
    pub fn new(rank: usize, levi_simples: &[usize]) -> Result<LeviDatum, Error> {
        let mut s = levi_simples.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(bad) = s.iter().find(|&&i| i >= rank) {
            return Err(Error::InvalidInput(format!("levi index {} out of range for rank {rank}", bad + 1)));
        }
        let orbit_params: Vec<usize> = (0..rank).filter(|i| !s.contains(i)).collect();
        if orbit_params.is_empty() {
            return Err(Error::InvalidInput("the Levi subset must leave at least one orbit parameter".into()));
        }
        Ok(LeviDatum { levi_simples: s, orbit_params })
    }

    pub fn torus(rank: usize) -> LeviDatum {
        LeviDatum { levi_simples: vec![], orbit_params: (0..rank).collect() }
    }

    /// Which lambda coordinate the simple index `i` carries, if any.
    pub fn param_of(&self, i: usize) -> Option<usize> {
        self.orbit_params.iter().position(|&j| j == i)
    }

    pub fn n_params(&self) -> usize {
        self.orbit_params.len()
    }

    pub fn is_levi_root(&self, root: &[i64]) -> bool {
        root.iter().enumerate().all(|(i, &c)| c == 0 || self.levi_simples.contains(&i))
    }
}

/// Parabolic `P = L + N^+` with the ordered basis of `N^-_P`.
#[derive(Clone, Debug)]
pub struct ParabolicDatum {
    pub basis: ChevalleyBasis,
    pub levi: LeviDatum,
    /// Positive-root indices `k` such that `f_k` spans `N^-_P`, in PBW order.
    pub n_minus: Vec<usize>,
    pub levi_roots: Vec<usize>,
}

impl ParabolicDatum {
    pub fn new(basis: &ChevalleyBasis, levi: LeviDatum) -> ParabolicDatum {
        let (levi_roots, n_minus): (Vec<usize>, Vec<usize>) =
            (0..basis.n_pos()).partition(|&k| levi.is_levi_root(&basis.rs.positive_roots[k]));
        ParabolicDatum { basis: basis.clone(), levi, n_minus, levi_roots }
    }

    pub fn from_names(algebra: &str, levi_simples: &[usize]) -> Result<ParabolicDatum, Error> {
        let rs = RootSystem::from_name(algebra)?;
        let levi = LeviDatum::new(rs.rank, levi_simples)?;
        Ok(ParabolicDatum::new(&ChevalleyBasis::new(&rs), levi))
    }

    pub fn rs(&self) -> &RootSystem {
        &self.basis.rs
    }

    pub fn root_height(&self, k: usize) -> usize {
        RootSystem::height(&self.basis.rs.positive_roots[k]) as usize
    }

    /// Names of the `N^-_P` basis vectors in PBW order.
    pub fn n_minus_names(&self) -> Vec<String> {
        self.n_minus.iter().map(|&k| self.basis.name(self.basis.f(k))).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "algebra": self.rs().name(),
            "levi": self.levi.levi_simples.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "orbit_params": self.levi.orbit_params.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "n_minus_P": self.n_minus_names(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_sizes() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        assert_eq!(pd.n_minus_names(), vec!["f(1)"]);
        let pd = ParabolicDatum::from_names("A2", &[0]).unwrap();
        assert_eq!(pd.n_minus_names(), vec!["f(0,1)", "f(1,1)"]);
        assert_eq!(pd.levi.orbit_params, vec![1]);
        let pd = ParabolicDatum::from_names("A2", &[]).unwrap();
        assert_eq!(pd.n_minus.len(), 3);
    }

    #[test]
    fn complement_counts() {
        for (name, s) in [("A3", vec![0, 2]), ("B2", vec![1]), ("A3", vec![1])] {
            let pd = ParabolicDatum::from_names(name, &s).unwrap();
            assert_eq!(pd.n_minus.len() + pd.levi_roots.len(), pd.rs().positive_roots.len());
        }
    }

    #[test]
    fn rejects_bad_levi() {
        assert!(ParabolicDatum::from_names("A2", &[5]).is_err());
        assert!(ParabolicDatum::from_names("A1", &[0]).is_err());
    }
}
