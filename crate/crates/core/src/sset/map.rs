use std::fmt;
use std::sync::Arc;

use super::{SSet, Simplex};
use crate::error::{Error, Result};

/// A levelwise function commuting with faces and degeneracies.
#[derive(Clone)]
pub struct SSetMap {
    source: Arc<SSet>,
    target: Arc<SSet>,
    components: Vec<Vec<Simplex>>,
}

impl fmt::Debug for SSetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SSetMap")
            .field("source", &self.source.level_sizes())
            .field("target", &self.target.level_sizes())
            .finish()
    }
}

/// Where two parallel maps first disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub level: usize,
    pub simplex: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}-simplex {}: {} != {}", self.level, self.simplex, self.left, self.right)
    }
}

impl SSetMap {
    /// Builds a map and checks that it is simplicial.
    pub fn new(source: Arc<SSet>, target: Arc<SSet>, components: Vec<Vec<Simplex>>) -> Result<Self> {
        let map = Self::new_unchecked(source, target, components)?;
        if let Some(w) = map.simplicial_violation() {
            return Err(Error::NotSimplicial(w));
        }
        Ok(map)
    }

    /// Builds a map checking only shapes; callers guarantee it is simplicial.
    pub(crate) fn new_unchecked(
        source: Arc<SSet>,
        target: Arc<SSet>,
        components: Vec<Vec<Simplex>>,
    ) -> Result<Self> {
        let m = source.truncation();
        if target.truncation() != m {
            return Err(Error::TruncationMismatch(m, target.truncation()));
        }
        if components.len() != m + 1 {
            return Err(Error::Malformed(format!("map needs {} components", m + 1)));
        }
        for (n, c) in components.iter().enumerate() {
            if c.len() != source.level_size(n) || c.iter().any(|&y| y as usize >= target.level_size(n)) {
                return Err(Error::Malformed(format!("component {n} is not a total function")));
            }
        }
        Ok(Self { source, target, components })
    }

    pub fn identity(set: &Arc<SSet>) -> Self {
        let components =
            (0..=set.truncation()).map(|n| (0..set.level_size(n) as Simplex).collect()).collect();
        Self { source: set.clone(), target: set.clone(), components }
    }

    /// The unique map to a terminal object.
    pub fn terminal(source: &Arc<SSet>, point: &Arc<SSet>) -> Result<Self> {
        if point.level_sizes().iter().any(|&s| s != 1) {
            return Err(Error::Precondition("target is not terminal".into()));
        }
        let components = (0..=source.truncation()).map(|n| vec![0; source.level_size(n)]).collect();
        Self::new_unchecked(source.clone(), point.clone(), components)
    }

    /// The map from `Δ[0]` picking out a vertex.
    pub fn vertex(point: &Arc<SSet>, target: &Arc<SSet>, v: Simplex) -> Result<Self> {
        if v as usize >= target.level_size(0) {
            return Err(Error::Precondition(format!("vertex {v} out of range")));
        }
        let components = (0..=target.truncation()).map(|n| vec![target.degenerate_vertex(v, n)]).collect();
        Self::new_unchecked(point.clone(), target.clone(), components)
    }

    pub fn source(&self) -> &Arc<SSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SSet> {
        &self.target
    }

    pub fn components(&self) -> &[Vec<Simplex>] {
        &self.components
    }

    #[inline]
    pub fn apply(&self, n: usize, x: Simplex) -> Simplex {
        self.components[n][x as usize]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SSetMap) -> Result<SSetMap> {
        if !Arc::ptr_eq(&self.target, &other.source) && !self.target.same_structure(&other.source) {
            return Err(Error::Precondition("maps are not composable".into()));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(n, c)| c.iter().map(|&x| other.apply(n, x)).collect())
            .collect();
        Ok(SSetMap { source: self.source.clone(), target: other.target.clone(), components })
    }

    /// Replaces the recorded endpoints by structurally equal objects.
    pub fn with_endpoints(&self, source: Arc<SSet>, target: Arc<SSet>) -> Result<SSetMap> {
        if !source.same_structure(&self.source) || !target.same_structure(&self.target) {
            return Err(Error::Precondition("endpoints differ structurally".into()));
        }
        Ok(SSetMap { source, target, components: self.components.clone() })
    }

    fn simplicial_violation(&self) -> Option<String> {
        let (s, t) = (&self.source, &self.target);
        for n in 0..=s.truncation() {
            for x in 0..s.level_size(n) as Simplex {
                let fx = self.apply(n, x);
                if n > 0 {
                    for i in 0..=n {
                        if self.apply(n - 1, s.face(n, i, x)) != t.face(n, i, fx) {
                            return Some(format!("d{i} at {}-simplex {}", n, s.name(n, x)));
                        }
                    }
                }
                if n < s.truncation() {
                    for j in 0..=n {
                        if self.apply(n + 1, s.degeneracy(n, j, x)) != t.degeneracy(n, j, fx) {
                            return Some(format!("s{j} at {}-simplex {}", n, s.name(n, x)));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial_violation().is_none()
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().enumerate().all(|(n, c)| {
            let mut seen = vec![false; self.target.level_size(n)];
            c.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().enumerate().all(|(n, c)| {
            let mut seen = vec![false; self.target.level_size(n)];
            c.iter().for_each(|&y| seen[y as usize] = true);
            seen.into_iter().all(|b| b)
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Levelwise inverse of a bijection.
    pub fn inverse(&self) -> Result<SSetMap> {
        if !self.is_bijective() {
            return Err(Error::Precondition("map is not a bijection".into()));
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut inv = vec![0; c.len()];
                for (x, &y) in c.iter().enumerate() {
                    inv[y as usize] = x as Simplex;
                }
                inv
            })
            .collect();
        Ok(SSetMap { source: self.target.clone(), target: self.source.clone(), components })
    }

    /// First simplex where `self` and `other` differ, or `None` if equal.
    pub fn first_difference(&self, other: &SSetMap) -> Option<Discrepancy> {
        if self.source.level_sizes() != other.source.level_sizes() {
            return Some(Discrepancy {
                level: 0,
                simplex: "<source>".into(),
                left: format!("{:?}", self.source.level_sizes()),
                right: format!("{:?}", other.source.level_sizes()),
            });
        }
        for (n, (a, b)) in self.components.iter().zip(&other.components).enumerate() {
            for (x, (&y, &z)) in a.iter().zip(b).enumerate() {
                if y != z {
                    return Some(Discrepancy {
                        level: n,
                        simplex: self.source.name(n, x as Simplex).into_owned(),
                        left: self.target.name(n, y).into_owned(),
                        right: other.target.name(n, z).into_owned(),
                    });
                }
            }
        }
        None
    }
}

impl PartialEq for SSetMap {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.source, &other.source) || self.source.same_structure(&other.source))
            && (Arc::ptr_eq(&self.target, &other.target) || self.target.same_structure(&other.target))
            && self.components == other.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{indiscrete_nerve, standard_simplex};

    #[test]
    fn non_simplicial_map_is_rejected() {
        let d1 = Arc::new(standard_simplex(1, 1));
        // swap vertices but keep edges: not simplicial
        let comps = vec![vec![1, 0], vec![0, 1, 2]];
        assert!(matches!(SSetMap::new(d1.clone(), d1, comps), Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn identity_composition_and_inverse() {
        let n = Arc::new(indiscrete_nerve(3, 2).unwrap());
        let id = SSetMap::identity(&n);
        assert!(id.is_bijective());
        assert_eq!(id.then(&id).unwrap(), id);
        assert_eq!(id.inverse().unwrap(), id);
        assert!(id.first_difference(&id).is_none());
    }
}
