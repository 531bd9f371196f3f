//! Backtracking enumeration of simplicial maps.
//!
//! Images are chosen for nondegenerate simplices in ascending level and index
//! order; images of degenerate simplices are forced by `f(s_j y) = s_j f(y)`,
//! and candidates for a nondegenerate `n`-simplex are the target simplices
//! whose faces match the images already chosen.

use std::ops::ControlFlow;
use std::sync::Arc;

use super::{SSet, SSetMap, Simplex};
use crate::error::{Error, Result};

const UNSET: Simplex = Simplex::MAX;

/// A configured search for maps `source -> target`.
///
/// Besides plain enumeration it supports pinned images (for lifting problems),
/// a constraint `p ∘ f = v` (maps over a base), injectivity, and compact
/// *choice keys*: the positions chosen at every slot with more than one
/// admissible candidate, which identify a map uniquely within the search.
#[derive(Clone)]
pub struct HomSearch {
    source: Arc<SSet>,
    target: Arc<SSet>,
    pinned: Option<Vec<Vec<Simplex>>>,
    over: Option<(SSetMap, Vec<Vec<Simplex>>)>,
    injective: bool,
    conflict: bool,
}

struct Walk<'a, F> {
    search: &'a HomSearch,
    values: Vec<Vec<Simplex>>,
    used: Vec<Vec<bool>>,
    key: Vec<u32>,
    buffers: Vec<Vec<Simplex>>,
    visit: F,
}

impl HomSearch {
    pub fn new(source: &Arc<SSet>, target: &Arc<SSet>) -> Result<Self> {
        if source.truncation() != target.truncation() {
            return Err(Error::TruncationMismatch(source.truncation(), target.truncation()));
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            pinned: None,
            over: None,
            injective: false,
            conflict: false,
        })
    }

    pub fn source(&self) -> &Arc<SSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SSet> {
        &self.target
    }

    /// Requires `f(x) = y` for the `n`-simplex `x`.
    pub fn pin(mut self, n: usize, x: Simplex, y: Simplex) -> Self {
        let source = &self.source;
        let pinned = self
            .pinned
            .get_or_insert_with(|| (0..=source.truncation()).map(|n| vec![UNSET; source.level_size(n)]).collect());
        let slot = &mut pinned[n][x as usize];
        if *slot != UNSET && *slot != y {
            self.conflict = true;
        }
        *slot = y;
        self
    }

    /// Requires `f ∘ along = u` for maps `along: A -> source`, `u: A -> target`.
    pub fn pin_along(mut self, along: &SSetMap, u: &SSetMap) -> Result<Self> {
        if !along.target().same_structure(&self.source) || !u.target().same_structure(&self.target) {
            return Err(Error::Precondition("pinning maps do not match the search".into()));
        }
        for n in 0..=self.source.truncation() {
            for a in 0..along.source().level_size(n) as Simplex {
                self = self.pin(n, along.apply(n, a), u.apply(n, a));
            }
        }
        Ok(self)
    }

    /// Requires `p ∘ f = v` for `p: target -> Y` and `v: source -> Y`.
    pub fn over(mut self, p: &SSetMap, v: &SSetMap) -> Result<Self> {
        if !p.source().same_structure(&self.target) || !v.source().same_structure(&self.source) {
            return Err(Error::Precondition("base maps do not match the search".into()));
        }
        self.over = Some((p.clone(), v.components().to_vec()));
        Ok(self)
    }

    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    /// Visits every admissible map with its choice key, in canonical order,
    /// until the visitor breaks.
    pub fn for_each_keyed<F>(&self, visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[Vec<Simplex>], &[u32]) -> ControlFlow<()>,
    {
        if self.conflict {
            return ControlFlow::Continue(());
        }
        let s = &self.source;
        let mut walk = Walk {
            search: self,
            values: (0..=s.truncation()).map(|n| vec![UNSET; s.level_size(n)]).collect(),
            used: if self.injective {
                (0..=s.truncation()).map(|n| vec![false; self.target.level_size(n)]).collect()
            } else {
                Vec::new()
            },
            key: Vec::new(),
            buffers: Vec::new(),
            visit,
        };
        walk.level(0, 0, 0)
    }

    pub fn for_each<F>(&self, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[Vec<Simplex>]) -> ControlFlow<()>,
    {
        self.for_each_keyed(|values, _| visit(values))
    }

    pub fn first(&self) -> Option<SSetMap> {
        let mut found = None;
        let _ = self.for_each(|values| {
            found = Some(values.to_vec());
            ControlFlow::Break(())
        });
        found.map(|c| self.wrap(c))
    }

    pub fn all(&self) -> Vec<SSetMap> {
        let mut out = Vec::new();
        let _ = self.for_each(|values| {
            out.push(values.to_vec());
            ControlFlow::Continue(())
        });
        out.into_iter().map(|c| self.wrap(c)).collect()
    }

    pub fn count(&self) -> usize {
        let mut count = 0;
        let _ = self.for_each(|_| {
            count += 1;
            ControlFlow::Continue(())
        });
        count
    }

    fn wrap(&self, components: Vec<Vec<Simplex>>) -> SSetMap {
        SSetMap::new_unchecked(self.source.clone(), self.target.clone(), components)
            .expect("enumerated map is well-shaped")
    }

    fn admissible(&self, n: usize, x: Simplex, y: Simplex) -> bool {
        if let Some(p) = &self.pinned {
            let want = p[n][x as usize];
            if want != UNSET && want != y {
                return false;
            }
        }
        if let Some((p, v)) = &self.over {
            if p.apply(n, y) != v[n][x as usize] {
                return false;
            }
        }
        true
    }

    /// Admissible candidates for nondegenerate `x` at level `n` given lower levels.
    fn candidates(&self, n: usize, x: Simplex, values: &[Vec<Simplex>], out: &mut Vec<Simplex>) {
        out.clear();
        let pin = self.pinned.as_ref().map(|p| p[n][x as usize]).filter(|&y| y != UNSET);
        if n == 0 {
            match pin {
                Some(y) => {
                    if (y as usize) < self.target.level_size(0) && self.admissible(0, x, y) {
                        out.push(y)
                    }
                }
                None => out.extend((0..self.target.level_size(0) as Simplex).filter(|&y| self.admissible(0, x, y))),
            }
            return;
        }
        let faces: Vec<Simplex> = (0..=n).map(|i| values[n - 1][self.source.face(n, i, x) as usize]).collect();
        match pin {
            Some(y) => {
                if (0..=n).all(|i| self.target.face(n, i, y) == faces[i]) && self.admissible(n, x, y) {
                    out.push(y);
                }
            }
            None => out.extend(
                self.target.simplices_with_faces(n, &faces).iter().copied().filter(|&y| self.admissible(n, x, y)),
            ),
        }
    }

    /// Fills the degenerate simplices of level `n` from level `n - 1`;
    /// false if a constraint fails.
    fn force_degenerates(&self, n: usize, values: &mut [Vec<Simplex>]) -> bool {
        let skel = self.source.skeleton();
        for (x, d) in skel.degenerate_of[n].iter().enumerate() {
            if let Some((j, y)) = *d {
                let image = self.target.degeneracy(n - 1, j, values[n - 1][y as usize]);
                if !self.admissible(n, x as Simplex, image) {
                    return false;
                }
                values[n][x] = image;
            }
        }
        true
    }

    /// The choice key of a map, or `None` if it is not admissible for this search.
    pub fn encode(&self, components: &[Vec<Simplex>]) -> Option<Vec<u32>> {
        if self.conflict {
            return None;
        }
        let skel = self.source.skeleton();
        let mut values: Vec<Vec<Simplex>> =
            (0..=self.source.truncation()).map(|n| vec![UNSET; self.source.level_size(n)]).collect();
        let mut key = Vec::new();
        let mut buf = Vec::new();
        for n in 0..=self.source.truncation() {
            if n > 0 {
                if !self.force_degenerates(n, &mut values) {
                    return None;
                }
                for (x, d) in skel.degenerate_of[n].iter().enumerate() {
                    if d.is_some() && values[n][x] != components[n][x] {
                        return None;
                    }
                }
            }
            for &x in &skel.nondegenerate[n] {
                self.candidates(n, x, &values, &mut buf);
                let want = components[n][x as usize];
                let pos = buf.iter().position(|&y| y == want)?;
                if buf.len() > 1 {
                    key.push(pos as u32);
                }
                values[n][x as usize] = want;
            }
        }
        Some(key)
    }

    /// Rebuilds a map from its choice key.
    pub fn decode(&self, key: &[u32]) -> Option<Vec<Vec<Simplex>>> {
        if self.conflict {
            return None;
        }
        let skel = self.source.skeleton();
        let mut values: Vec<Vec<Simplex>> =
            (0..=self.source.truncation()).map(|n| vec![UNSET; self.source.level_size(n)]).collect();
        let mut next = key.iter();
        let mut buf = Vec::new();
        for n in 0..=self.source.truncation() {
            if n > 0 && !self.force_degenerates(n, &mut values) {
                return None;
            }
            for &x in &skel.nondegenerate[n] {
                self.candidates(n, x, &values, &mut buf);
                let y = match buf.len() {
                    0 => return None,
                    1 => buf[0],
                    _ => *buf.get(*next.next()? as usize)?,
                };
                values[n][x as usize] = y;
            }
        }
        next.next().is_none().then_some(values)
    }
}

impl<'a, F> Walk<'a, F>
where
    F: FnMut(&[Vec<Simplex>], &[u32]) -> ControlFlow<()>,
{
    fn mark(&mut self, n: usize, y: Simplex, on: bool) {
        if self.search.injective {
            self.used[n][y as usize] = on;
        }
    }

    fn level(&mut self, n: usize, pos: usize, depth: usize) -> ControlFlow<()> {
        let search = self.search;
        let skel = search.source.skeleton();
        let m = search.source.truncation();
        if pos == 0 && n > 0 {
            if !search.force_degenerates(n, &mut self.values) {
                return ControlFlow::Continue(());
            }
            if search.injective {
                let forced: Vec<Simplex> = skel.degenerate_of[n]
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| d.is_some())
                    .map(|(x, _)| self.values[n][x])
                    .collect();
                // distinct and unused
                let mut ok = true;
                let mut marked = Vec::new();
                for y in forced {
                    if self.used[n][y as usize] {
                        ok = false;
                        break;
                    }
                    self.used[n][y as usize] = true;
                    marked.push(y);
                }
                let flow = if ok { self.level_body(n, pos, depth) } else { ControlFlow::Continue(()) };
                for y in marked {
                    self.used[n][y as usize] = false;
                }
                return flow;
            }
        }
        let _ = m;
        self.level_body(n, pos, depth)
    }

    fn level_body(&mut self, n: usize, pos: usize, depth: usize) -> ControlFlow<()> {
        let search = self.search;
        let skel = search.source.skeleton();
        let m = search.source.truncation();
        if pos == skel.nondegenerate[n].len() {
            return if n == m {
                (self.visit)(&self.values, &self.key)
            } else {
                self.level(n + 1, 0, depth)
            };
        }
        let x = skel.nondegenerate[n][pos];
        if self.buffers.len() <= depth {
            self.buffers.push(Vec::new());
        }
        let mut buf = std::mem::take(&mut self.buffers[depth]);
        search.candidates(n, x, &self.values, &mut buf);
        if search.injective {
            buf.retain(|&y| !self.used[n][y as usize]);
        }
        let branching = buf.len() > 1;
        let mut flow = ControlFlow::Continue(());
        for (k, &y) in buf.iter().enumerate() {
            self.values[n][x as usize] = y;
            self.mark(n, y, true);
            if branching {
                self.key.push(k as u32);
            }
            flow = self.level_body(n, pos + 1, depth + 1);
            if branching {
                self.key.pop();
            }
            self.mark(n, y, false);
            if flow.is_break() {
                break;
            }
        }
        self.buffers[depth] = buf;
        flow
    }
}

/// Every simplicial map `source -> target`, in canonical order.
pub fn enumerate_maps(source: &Arc<SSet>, target: &Arc<SSet>) -> Result<Vec<SSetMap>> {
    Ok(HomSearch::new(source, target)?.all())
}

/// A levelwise bijective simplicial map, if one exists.
pub fn find_isomorphism(source: &Arc<SSet>, target: &Arc<SSet>) -> Result<Option<SSetMap>> {
    if source.level_sizes() != target.level_sizes() {
        return Ok(None);
    }
    let search = HomSearch::new(source, target)?.injective();
    Ok(search.first())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{indiscrete_nerve, interval, lambda, point, standard_simplex};

    /// Brute force: every levelwise function that is simplicial.
    fn brute_count(a: &Arc<SSet>, x: &Arc<SSet>) -> usize {
        let mut levels: Vec<Vec<Vec<Simplex>>> = Vec::new();
        for n in 0..=a.truncation() {
            let mut all = vec![Vec::new()];
            for _ in 0..a.level_size(n) {
                all = all
                    .into_iter()
                    .flat_map(|p: Vec<Simplex>| {
                        (0..x.level_size(n) as Simplex).map(move |y| {
                            let mut q = p.clone();
                            q.push(y);
                            q
                        })
                    })
                    .collect();
            }
            levels.push(all);
        }
        let mut count = 0;
        let mut idx = vec![0usize; levels.len()];
        loop {
            let comps: Vec<Vec<Simplex>> = idx.iter().enumerate().map(|(n, &k)| levels[n][k].clone()).collect();
            if SSetMap::new(a.clone(), x.clone(), comps).is_ok() {
                count += 1;
            }
            let mut n = 0;
            loop {
                if n == idx.len() {
                    return count;
                }
                idx[n] += 1;
                if idx[n] < levels[n].len() {
                    break;
                }
                idx[n] = 0;
                n += 1;
            }
        }
    }

    #[test]
    fn maps_from_point_are_vertices() {
        let x = Arc::new(indiscrete_nerve(3, 2).unwrap());
        let p = Arc::new(point(2));
        assert_eq!(enumerate_maps(&p, &x).unwrap().len(), 3);
    }

    #[test]
    fn interval_self_maps() {
        let i = interval(2);
        assert_eq!(enumerate_maps(&i, &i).unwrap().len(), 4);
        let small = interval(1);
        assert_eq!(HomSearch::new(&small, &small).unwrap().count(), brute_count(&small, &small));
    }

    #[test]
    fn lambda_with_pinned_ends() {
        let (l, i1, i2) = lambda(2);
        let i = interval(2);
        let outer0 = i1.apply(0, 0);
        let outer1 = i2.apply(0, 1);
        let search = HomSearch::new(&l, &i).unwrap().pin(0, outer0, 0).pin(0, outer1, 1);
        assert_eq!(search.count(), 2);
    }

    #[test]
    fn simplex_maps_match_brute_force() {
        let d1 = Arc::new(standard_simplex(1, 1));
        let n2 = Arc::new(indiscrete_nerve(2, 1).unwrap());
        assert_eq!(enumerate_maps(&d1, &n2).unwrap().len(), brute_count(&d1, &n2));
        assert_eq!(enumerate_maps(&n2, &d1).unwrap().len(), brute_count(&n2, &d1));
    }

    #[test]
    fn keys_round_trip() {
        let d2 = Arc::new(standard_simplex(2, 2));
        let x = Arc::new(indiscrete_nerve(3, 2).unwrap());
        let search = HomSearch::new(&d2, &x).unwrap();
        let mut seen = 0;
        let _ = search.for_each_keyed(|values, key| {
            assert_eq!(search.encode(values).as_deref(), Some(key));
            assert_eq!(search.decode(key).as_deref(), Some(values));
            seen += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(seen, 27);
    }

    #[test]
    fn isomorphism_search() {
        let (l, _, _) = lambda(2);
        let flipped = Arc::new(l.renamed(|_, s| format!("x{s}")));
        assert!(find_isomorphism(&l, &flipped).unwrap().unwrap().is_bijective());
        let i = interval(2);
        let d1 = Arc::new(standard_simplex(1, 2));
        assert!(find_isomorphism(&i, &d1).unwrap().is_none());
    }
}
