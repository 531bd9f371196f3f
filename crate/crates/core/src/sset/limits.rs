//! Finite limits computed levelwise as sets of compatible tuples.

use std::collections::HashMap;
use std::sync::Arc;

use super::{SSet, SSetMap, Simplex};
use crate::error::{Error, Result};

/// A constraint `left_map(x[left]) = right_map(x[right])` between two tuple components.
#[derive(Clone, Debug)]
pub struct Equation {
    pub left: usize,
    pub left_map: SSetMap,
    pub right: usize,
    pub right_map: SSetMap,
}

/// A finite diagram given by its objects and by equations between them.
///
/// An arrow `f: X_i -> X_j` of the diagram contributes the equation
/// `f(x_i) = x_j`; cospans contribute `f(x_i) = g(x_j)` directly.
#[derive(Clone, Debug, Default)]
pub struct LimitShape {
    pub objects: Vec<Arc<SSet>>,
    pub equations: Vec<Equation>,
    /// Needed only when there are no objects.
    pub truncation: Option<usize>,
}

impl LimitShape {
    pub fn new(objects: Vec<Arc<SSet>>) -> Self {
        Self { objects, equations: Vec::new(), truncation: None }
    }

    /// The empty diagram, whose limit is the terminal object.
    pub fn empty(truncation: usize) -> Self {
        Self { objects: Vec::new(), equations: Vec::new(), truncation: Some(truncation) }
    }

    pub fn arrow(&mut self, from: usize, to: usize, map: SSetMap) -> &mut Self {
        let id = SSetMap::identity(&self.objects[to]);
        self.equations.push(Equation { left: from, left_map: map, right: to, right_map: id });
        self
    }

    pub fn equation(&mut self, left: usize, left_map: SSetMap, right: usize, right_map: SSetMap) -> &mut Self {
        self.equations.push(Equation { left, left_map, right, right_map });
        self
    }

    fn check(&self) -> Result<usize> {
        let m = match (self.objects.first(), self.truncation) {
            (Some(o), _) => o.truncation(),
            (None, Some(m)) => return Ok(m),
            (None, None) => return Err(Error::Precondition("empty limit shape without a truncation".into())),
        };
        for o in &self.objects {
            if o.truncation() != m {
                return Err(Error::TruncationMismatch(m, o.truncation()));
            }
        }
        for (k, e) in self.equations.iter().enumerate() {
            let fits = |idx: usize, map: &SSetMap| {
                idx < self.objects.len()
                    && (Arc::ptr_eq(map.source(), &self.objects[idx])
                        || map.source().same_structure(&self.objects[idx]))
            };
            if !fits(e.left, &e.left_map) || !fits(e.right, &e.right_map) {
                return Err(Error::Precondition(format!("equation {k} does not match its objects")));
            }
            if !e.left_map.target().same_structure(e.right_map.target()) {
                return Err(Error::Precondition(format!("equation {k} compares different objects")));
            }
        }
        Ok(m)
    }
}

/// A limit object with its cone and a tuple lookup.
pub struct LimitCone {
    pub object: Arc<SSet>,
    pub projections: Vec<SSetMap>,
    arity: usize,
    tuples: Vec<Vec<Simplex>>,
    lookup: Vec<HashMap<Box<[Simplex]>, Simplex>>,
}

impl std::fmt::Debug for LimitCone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LimitCone").field("object", &self.object).field("arity", &self.arity).finish()
    }
}

impl LimitCone {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuple(&self, n: usize, x: Simplex) -> &[Simplex] {
        let k = self.arity;
        if k == 0 {
            return &[];
        }
        &self.tuples[n][x as usize * k..(x as usize + 1) * k]
    }

    pub fn index_of(&self, n: usize, tuple: &[Simplex]) -> Option<Simplex> {
        self.lookup[n].get(tuple).copied()
    }

    /// The map into the limit induced by a cone; fails with a witness if the
    /// legs do not satisfy the limit's equations.
    pub fn induced(&self, source: &Arc<SSet>, legs: &[SSetMap]) -> Result<SSetMap> {
        if legs.len() != self.arity {
            return Err(Error::Precondition(format!("expected {} legs", self.arity)));
        }
        let mut components = Vec::with_capacity(source.truncation() + 1);
        let mut buf = vec![0; self.arity];
        for n in 0..=source.truncation() {
            let mut level = Vec::with_capacity(source.level_size(n));
            for x in 0..source.level_size(n) as Simplex {
                for (slot, leg) in buf.iter_mut().zip(legs) {
                    *slot = leg.apply(n, x);
                }
                match self.index_of(n, &buf) {
                    Some(y) => level.push(y),
                    None => {
                        return Err(Error::NonCommuting(format!(
                            "legs do not form a cone at {}-simplex {}",
                            n,
                            source.name(n, x)
                        )))
                    }
                }
            }
            components.push(level);
        }
        SSetMap::new_unchecked(source.clone(), self.object.clone(), components)
    }
}

struct Plan {
    order: Vec<usize>,
    /// For each position: equation used to generate candidates, and whether
    /// the new object is on its right side.
    generator: Vec<Option<(usize, bool)>>,
    /// For each position: equations fully determined once this object is set.
    checks: Vec<Vec<usize>>,
}

fn plan(shape: &LimitShape) -> Plan {
    let k = shape.objects.len();
    let mut assigned = vec![false; k];
    let mut order = Vec::with_capacity(k);
    let mut generator = Vec::with_capacity(k);
    let mut checks = Vec::with_capacity(k);
    for _ in 0..k {
        // Prefer an object forced by an arrow, then any constrained one, then the first free one.
        let mut best: Option<(usize, usize, bool, u8)> = None;
        for (ei, e) in shape.equations.iter().enumerate() {
            for (this, other, on_right, map) in
                [(e.right, e.left, true, &e.right_map), (e.left, e.right, false, &e.left_map)]
            {
                if assigned[this] || !assigned[other] {
                    continue;
                }
                let identity_like = map.source().level_sizes() == map.target().level_sizes()
                    && map.components().iter().all(|c| c.iter().enumerate().all(|(x, &y)| x as Simplex == y));
                let rank = if identity_like { 0 } else { 1 };
                if best.map_or(true, |b| (rank, this) < (b.3, b.0)) {
                    best = Some((this, ei, on_right, rank));
                }
            }
        }
        let (obj, gen) = match best {
            Some((obj, ei, on_right, _)) => (obj, Some((ei, on_right))),
            None => ((0..k).find(|&o| !assigned[o]).expect("unassigned object"), None),
        };
        assigned[obj] = true;
        let ready: Vec<usize> = shape
            .equations
            .iter()
            .enumerate()
            .filter(|(ei, e)| {
                (e.left == obj || e.right == obj)
                    && assigned[e.left]
                    && assigned[e.right]
                    && gen.map_or(true, |(g, _)| g != *ei)
            })
            .map(|(ei, _)| ei)
            .collect();
        order.push(obj);
        generator.push(gen);
        checks.push(ready);
    }
    Plan { order, generator, checks }
}

/// The limit of a finite diagram, levelwise as the set of compatible tuples in
/// lexicographic order; simplices are named by their component tuples.
pub fn finite_limit(shape: &LimitShape) -> Result<LimitCone> {
    let m = shape.check()?;
    let k = shape.objects.len();
    if k == 0 {
        let object = Arc::new(crate::sset::point(m).renamed(|_, _| "()".into()));
        return Ok(LimitCone {
            object,
            projections: Vec::new(),
            arity: 0,
            tuples: vec![Vec::new(); m + 1],
            lookup: (0..=m).map(|_| HashMap::from([(Box::from([] as [Simplex; 0]), 0)])).collect(),
        });
    }
    let plan = plan(shape);
    let mut tuples: Vec<Vec<Simplex>> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        // inverse images for generating equations
        let inverses: HashMap<(usize, bool), Vec<Vec<Simplex>>> = plan
            .generator
            .iter()
            .flatten()
            .map(|&(ei, on_right)| {
                let e = &shape.equations[ei];
                let map = if on_right { &e.right_map } else { &e.left_map };
                let mut inv = vec![Vec::new(); map.target().level_size(n)];
                for (x, &y) in map.components()[n].iter().enumerate() {
                    inv[y as usize].push(x as Simplex);
                }
                ((ei, on_right), inv)
            })
            .collect();
        let mut out = Vec::new();
        let mut current = vec![0 as Simplex; k];
        search(shape, &plan, &inverses, n, 0, &mut current, &mut out);
        // sort tuples lexicographically
        let mut rows: Vec<&[Simplex]> = out.chunks(k).collect();
        rows.sort_unstable();
        tuples.push(rows.concat());
    }
    let lookup: Vec<HashMap<Box<[Simplex]>, Simplex>> = tuples
        .iter()
        .map(|level| level.chunks(k).enumerate().map(|(x, t)| (t.into(), x as Simplex)).collect())
        .collect();
    let size = |n: usize| tuples[n].len() / k;
    let mut faces = vec![Vec::new()];
    let mut degeneracies = Vec::new();
    for n in 0..=m {
        if n > 0 {
            faces.push(
                (0..=n)
                    .map(|i| {
                        tuples[n]
                            .chunks(k)
                            .map(|t| {
                                let image: Vec<Simplex> =
                                    t.iter().zip(&shape.objects).map(|(&x, o)| o.face(n, i, x)).collect();
                                lookup[n - 1][image.as_slice()]
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        degeneracies.push(if n < m {
            (0..=n)
                .map(|j| {
                    tuples[n]
                        .chunks(k)
                        .map(|t| {
                            let image: Vec<Simplex> =
                                t.iter().zip(&shape.objects).map(|(&x, o)| o.degeneracy(n, j, x)).collect();
                            lookup[n + 1][image.as_slice()]
                        })
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        });
    }
    let names = (0..=m)
        .map(|n| {
            tuples[n]
                .chunks(k)
                .map(|t| {
                    let parts: Vec<String> =
                        t.iter().zip(&shape.objects).map(|(&x, o)| o.name(n, x).into_owned()).collect();
                    format!("({})", parts.join(","))
                })
                .collect()
        })
        .collect();
    let object = Arc::new(SSet::from_parts(m, names, faces, degeneracies)?);
    let projections = (0..k)
        .map(|i| {
            let comps = (0..=m).map(|n| (0..size(n)).map(|x| tuples[n][x * k + i]).collect()).collect();
            SSetMap::new_unchecked(object.clone(), shape.objects[i].clone(), comps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitCone { object, projections, arity: k, tuples, lookup })
}

fn search(
    shape: &LimitShape,
    plan: &Plan,
    inverses: &HashMap<(usize, bool), Vec<Vec<Simplex>>>,
    n: usize,
    pos: usize,
    current: &mut Vec<Simplex>,
    out: &mut Vec<Simplex>,
) {
    if pos == plan.order.len() {
        out.extend_from_slice(current);
        return;
    }
    let obj = plan.order[pos];
    let holds = |current: &Vec<Simplex>, ei: usize| {
        let e = &shape.equations[ei];
        e.left_map.apply(n, current[e.left]) == e.right_map.apply(n, current[e.right])
    };
    let try_candidate = |x: Simplex, current: &mut Vec<Simplex>, out: &mut Vec<Simplex>| {
        current[obj] = x;
        if plan.checks[pos].iter().all(|&ei| holds(current, ei)) {
            search(shape, plan, inverses, n, pos + 1, current, out);
        }
    };
    match plan.generator[pos] {
        Some((ei, on_right)) => {
            let e = &shape.equations[ei];
            let value = if on_right {
                e.left_map.apply(n, current[e.left])
            } else {
                e.right_map.apply(n, current[e.right])
            };
            for &x in &inverses[&(ei, on_right)][value as usize] {
                try_candidate(x, current, out);
            }
        }
        None => {
            for x in 0..shape.objects[obj].level_size(n) as Simplex {
                try_candidate(x, current, out);
            }
        }
    }
}

/// Binary product with its projections.
pub fn product(left: &Arc<SSet>, right: &Arc<SSet>) -> Result<LimitCone> {
    finite_limit(&LimitShape::new(vec![left.clone(), right.clone()]))
}

/// Pullback of `f: X -> Z <- Y: g`, with simplices named `(x,y)`.
pub fn pullback(f: &SSetMap, g: &SSetMap) -> Result<LimitCone> {
    if !f.target().same_structure(g.target()) {
        return Err(Error::Precondition("pullback of maps with different targets".into()));
    }
    let mut shape = LimitShape::new(vec![f.source().clone(), g.source().clone()]);
    shape.equation(0, f.clone(), 1, g.clone());
    finite_limit(&shape)
}

/// Index arithmetic for the levelwise product `A × B` without materializing names.
///
/// Simplices of the product are `(a, b)` at index `a * |B_n| + b`, which is the
/// same order [`product`] produces.
#[derive(Clone)]
pub struct ProductIndex {
    pub left: Arc<SSet>,
    pub right: Arc<SSet>,
    pub object: Arc<SSet>,
}

impl ProductIndex {
    pub fn new(left: &Arc<SSet>, right: &Arc<SSet>) -> Result<Self> {
        let m = left.truncation();
        if right.truncation() != m {
            return Err(Error::TruncationMismatch(m, right.truncation()));
        }
        let sizes: Vec<usize> = (0..=m).map(|n| left.level_size(n) * right.level_size(n)).collect();
        let mut faces = vec![Vec::new()];
        let mut degeneracies = Vec::new();
        for n in 0..=m {
            let rb = right.level_size(n);
            if n > 0 {
                let rb1 = right.level_size(n - 1) as Simplex;
                faces.push(
                    (0..=n)
                        .map(|i| {
                            (0..sizes[n])
                                .map(|x| {
                                    let (a, b) = ((x / rb) as Simplex, (x % rb) as Simplex);
                                    left.face(n, i, a) * rb1 + right.face(n, i, b)
                                })
                                .collect()
                        })
                        .collect(),
                );
            }
            degeneracies.push(if n < m {
                let rb1 = right.level_size(n + 1) as Simplex;
                (0..=n)
                    .map(|j| {
                        (0..sizes[n])
                            .map(|x| {
                                let (a, b) = ((x / rb) as Simplex, (x % rb) as Simplex);
                                left.degeneracy(n, j, a) * rb1 + right.degeneracy(n, j, b)
                            })
                            .collect()
                    })
                    .collect()
            } else {
                Vec::new()
            });
        }
        let names = (0..=m)
            .map(|n| {
                let rb = right.level_size(n);
                (0..sizes[n])
                    .map(|x| {
                        format!(
                            "({},{})",
                            left.name(n, (x / rb) as Simplex),
                            right.name(n, (x % rb) as Simplex)
                        )
                    })
                    .collect()
            })
            .collect();
        let object = Arc::new(SSet::from_parts(m, names, faces, degeneracies)?);
        Ok(Self { left: left.clone(), right: right.clone(), object })
    }

    #[inline]
    pub fn pair(&self, n: usize, a: Simplex, b: Simplex) -> Simplex {
        a * self.right.level_size(n) as Simplex + b
    }

    #[inline]
    pub fn split(&self, n: usize, x: Simplex) -> (Simplex, Simplex) {
        let rb = self.right.level_size(n) as Simplex;
        (x / rb, x % rb)
    }

    pub fn projections(&self) -> (SSetMap, SSetMap) {
        let m = self.object.truncation();
        let l = (0..=m)
            .map(|n| (0..self.object.level_size(n) as Simplex).map(|x| self.split(n, x).0).collect())
            .collect();
        let r = (0..=m)
            .map(|n| (0..self.object.level_size(n) as Simplex).map(|x| self.split(n, x).1).collect())
            .collect();
        (
            SSetMap::new_unchecked(self.object.clone(), self.left.clone(), l).expect("projection"),
            SSetMap::new_unchecked(self.object.clone(), self.right.clone(), r).expect("projection"),
        )
    }

    /// `⟨f, g⟩` into the product.
    pub fn pairing(&self, f: &SSetMap, g: &SSetMap) -> Result<SSetMap> {
        let m = self.object.truncation();
        let comps = (0..=m)
            .map(|n| {
                (0..f.source().level_size(n) as Simplex).map(|x| self.pair(n, f.apply(n, x), g.apply(n, x))).collect()
            })
            .collect();
        SSetMap::new_unchecked(f.source().clone(), self.object.clone(), comps)
    }

    /// `f × g` between products.
    pub fn map_product(&self, f: &SSetMap, g: &SSetMap, onto: &ProductIndex) -> Result<SSetMap> {
        let m = self.object.truncation();
        let comps = (0..=m)
            .map(|n| {
                (0..self.object.level_size(n) as Simplex)
                    .map(|x| {
                        let (a, b) = self.split(n, x);
                        onto.pair(n, f.apply(n, a), g.apply(n, b))
                    })
                    .collect()
            })
            .collect();
        SSetMap::new_unchecked(self.object.clone(), onto.object.clone(), comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{indiscrete_nerve, point, standard_simplex};

    #[test]
    fn empty_limit_is_terminal() {
        let cone = finite_limit(&LimitShape::empty(2)).unwrap();
        assert!(cone.object.level_sizes().iter().all(|&s| s == 1));
        let x = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let to_point = cone.induced(&x, &[]).unwrap();
        assert!(to_point.is_simplicial());
    }

    #[test]
    fn product_with_point_is_identity_like() {
        let x = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let p = Arc::new(point(2));
        let cone = product(&p, &x).unwrap();
        assert_eq!(cone.object.level_sizes(), x.level_sizes());
        assert!(cone.projections[1].is_bijective());
        assert!(cone.object.validate().is_empty());
    }

    #[test]
    fn product_cardinality() {
        let n = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let d = Arc::new(standard_simplex(1, 2));
        let cone = product(&n, &d).unwrap();
        assert_eq!(cone.object.level_size(1), 12);
        for k in 0..=2 {
            assert_eq!(cone.object.level_size(k), n.level_size(k) * d.level_size(k));
        }
        let idx = ProductIndex::new(&n, &d).unwrap();
        assert!(idx.object.same_structure(&cone.object));
    }

    #[test]
    fn pullback_of_identities() {
        let x = Arc::new(indiscrete_nerve(3, 2).unwrap());
        let id = SSetMap::identity(&x);
        let cone = pullback(&id, &id).unwrap();
        assert!(cone.projections[0].is_bijective());
        assert!(cone.object.validate().is_empty());
    }

    #[test]
    fn non_cone_is_rejected() {
        let x = Arc::new(indiscrete_nerve(2, 1).unwrap());
        let p = Arc::new(point(1));
        let v0 = SSetMap::vertex(&p, &x, 0).unwrap();
        let v1 = SSetMap::vertex(&p, &x, 1).unwrap();
        let id = SSetMap::identity(&x);
        let cone = pullback(&id, &id).unwrap();
        assert!(cone.induced(&p, &[v0.clone(), v0.clone()]).is_ok());
        assert!(matches!(cone.induced(&p, &[v0, v1]), Err(Error::NonCommuting(_))));
    }

    #[test]
    fn limit_matches_brute_force_filter() {
        // equalizer of two maps N2 -> N2: identity and the swap
        let x = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let swap_comps: Vec<Vec<Simplex>> = (0..=2)
            .map(|n| {
                (0..x.level_size(n) as Simplex)
                    .map(|s| {
                        let name: String = x
                            .name(n, s)
                            .chars()
                            .map(|c| if c == '0' { '1' } else { '0' })
                            .collect();
                        x.lookup(n, &name).unwrap()
                    })
                    .collect()
            })
            .collect();
        let swap = SSetMap::new(x.clone(), x.clone(), swap_comps).unwrap();
        let mut shape = LimitShape::new(vec![x.clone(), x.clone()]);
        shape.arrow(0, 1, SSetMap::identity(&x)).arrow(0, 1, swap.clone());
        let cone = finite_limit(&shape).unwrap();
        for n in 0..=2 {
            let brute = (0..x.level_size(n) as Simplex)
                .filter(|&s| swap.apply(n, s) == s)
                .count();
            assert_eq!(cone.object.level_size(n), brute);
        }
    }
}
