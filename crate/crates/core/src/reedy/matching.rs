//! Matching objects as finite limits, and latching data as compatible families.

use std::sync::Arc;

use super::category::{Morphism, ReedyCategory};
use super::diagram::PartialFunctor;
use crate::error::{Error, Result};
use crate::sset::{finite_limit, LimitCone, LimitShape, SSet, SSetMap};

/// `M_c F`: the limit over the non-identity minus morphisms out of `c`.
pub struct MatchingData {
    pub object: usize,
    /// The index objects `g: c -> d`, in morphism order; cone leg `i` is `g = index[i]`.
    pub index: Vec<Morphism>,
    pub cone: LimitCone,
    /// `F(c) -> M_c F`, when `F(c)` is available.
    pub map: Option<SSetMap>,
}

impl std::fmt::Debug for MatchingData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatchingData")
            .field("object", &self.object)
            .field("index", &self.index)
            .field("sizes", &self.cone.object.level_sizes())
            .finish()
    }
}

impl MatchingData {
    pub fn object_value(&self) -> &Arc<SSet> {
        &self.cone.object
    }
}

/// Builds `M_c F` and, if `F(c)` is known, the matching map.
///
/// The index category has the non-identity minus morphisms `g: c -> d` as
/// objects and a morphism `g -> g'` for each non-identity minus `h` with
/// `h ∘ g = g'`. An empty index gives the terminal object.
pub fn matching_data(f: &dyn PartialFunctor, c: usize) -> Result<MatchingData> {
    let cat = f.category();
    let index = cat.minus_out_of(c);
    let m = f.truncation();
    let shape = if index.is_empty() {
        LimitShape::empty(m)
    } else {
        let objects = index
            .iter()
            .map(|&g| f.require_value(cat.morphism(g).target).cloned())
            .collect::<Result<Vec<_>>>()?;
        let mut shape = LimitShape::new(objects);
        for (i, &g) in index.iter().enumerate() {
            for (j, &g2) in index.iter().enumerate() {
                for h in cat.minus_out_of(cat.morphism(g).target) {
                    if cat.compose(g, h) == Some(g2) {
                        shape.arrow(i, j, f.require_map(h)?.clone());
                    }
                }
            }
        }
        shape
    };
    let cone = finite_limit(&shape)?;
    let map = match f.value(c) {
        Some(v) => {
            let legs = index.iter().map(|&g| f.require_map(g).cloned()).collect::<Result<Vec<_>>>()?;
            Some(cone.induced(v, &legs)?)
        }
        None => None,
    };
    Ok(MatchingData { object: c, index, cone, map })
}

/// `M_c F -> M_c G` induced by per-object maps `eta[d]: F(d) -> G(d)`.
pub fn induced_matching_map(
    cat: &ReedyCategory,
    eta: &[Option<SSetMap>],
    from: &MatchingData,
    to: &MatchingData,
) -> Result<SSetMap> {
    if from.index != to.index {
        return Err(Error::Precondition("matching objects over different indices".into()));
    }
    let legs = from
        .index
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let d = cat.morphism(g).target;
            let eta_d = eta
                .get(d)
                .and_then(Option::as_ref)
                .ok_or_else(|| Error::Missing(format!("component at {}", cat.object_name(d))))?;
            from.cone.projections[i].then(eta_d)
        })
        .collect::<Result<Vec<_>>>()?;
    to.cone.induced(&from.cone.object, &legs).map_err(|e| match e {
        Error::NonCommuting(w) => Error::NonCommuting(format!("transformation is not natural: {w}")),
        other => other,
    })
}

/// A map out of the latching object of `c`, as one leg per non-identity plus
/// morphism `b -> c`.
#[derive(Clone, Debug)]
pub struct LatchingFamily {
    pub object: usize,
    pub index: Vec<Morphism>,
    pub legs: Vec<SSetMap>,
}

/// Checks that `legs` (one per non-identity plus morphism into `c`) commute
/// with every non-identity plus morphism between their sources.
pub fn latching_family_of(f: &dyn PartialFunctor, c: usize, legs: Vec<SSetMap>) -> Result<LatchingFamily> {
    let cat = f.category();
    let index = cat.plus_into(c);
    if legs.len() != index.len() {
        return Err(Error::Missing(format!("{} legs for {} latching morphisms", legs.len(), index.len())));
    }
    for (i, &p) in index.iter().enumerate() {
        let b = cat.morphism(p).source;
        if !legs[i].source().same_structure(f.require_value(b)?) {
            return Err(Error::Precondition(format!("leg for {} has the wrong source", cat.describe(p))));
        }
        if i > 0 && !legs[i].target().same_structure(legs[0].target()) {
            return Err(Error::Precondition("legs have different targets".into()));
        }
    }
    for (i, &p) in index.iter().enumerate() {
        for (j, &p2) in index.iter().enumerate() {
            for u in cat.plus_into(cat.morphism(p2).source) {
                if cat.compose(u, p2) != Some(p) {
                    continue;
                }
                let via = f.require_map(u)?.then(&legs[j])?;
                if let Some(d) = via.first_difference(&legs[i]) {
                    return Err(Error::NonCommuting(format!(
                        "latching legs {} and {} disagree along {}: {d}",
                        cat.describe(p),
                        cat.describe(p2),
                        cat.describe(u)
                    )));
                }
            }
        }
    }
    Ok(LatchingFamily { object: c, index, legs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reedy::{shapes, CategorySpec, Diagram, GeneratorSpec, MorphismClass, ObjectSpec};
    use crate::sset::{indiscrete_nerve, point, product};

    #[test]
    fn cospan_matching_object_is_the_apex() {
        let y = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let p = Arc::new(point(2));
        let v0 = SSetMap::vertex(&p, &y, 0).unwrap();
        let c = Arc::new(ReedyCategory::new(shapes::cospan()).unwrap());
        let d = Diagram::new(c.clone(), vec![p.clone(), y.clone(), p.clone()], vec![v0.clone(), v0.clone()]).unwrap();
        let x = c.object_index("x").unwrap();
        let md = matching_data(&d, x).unwrap();
        assert!(md.cone.object.same_structure(&y));
        assert_eq!(md.map.unwrap().then(&md.cone.projections[0]).unwrap(), v0);
        let ym = matching_data(&d, c.object_index("y").unwrap()).unwrap();
        assert!(ym.cone.object.level_sizes().iter().all(|&s| s == 1));
        // identity transformation induces the identity
        let eta: Vec<Option<SSetMap>> = d.values().iter().map(|v| Some(SSetMap::identity(v))).collect();
        let mdd = matching_data(&d, x).unwrap();
        let induced = induced_matching_map(&c, &eta, &mdd, &mdd).unwrap();
        assert!(induced.is_bijective());
    }

    #[test]
    fn equalizer_matching_object_is_a_square() {
        let y = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let id = SSetMap::identity(&y);
        let c = Arc::new(ReedyCategory::new(shapes::equalizer()).unwrap());
        let d = Diagram::new(c.clone(), vec![y.clone(), y.clone()], vec![id.clone(), id]).unwrap();
        let md = matching_data(&d, c.object_index("x").unwrap()).unwrap();
        let sq = product(&y, &y).unwrap();
        assert_eq!(md.cone.object.level_sizes(), sq.object.level_sizes());
    }

    #[test]
    fn incompatible_latching_family_is_rejected() {
        // plus chain a -p-> b -q-> c; the family into c must be compatible along q
        let spec = CategorySpec {
            objects: vec![
                ObjectSpec { name: "a".into(), degree: 0 },
                ObjectSpec { name: "b".into(), degree: 1 },
                ObjectSpec { name: "c".into(), degree: 2 },
            ],
            generators: vec![
                GeneratorSpec { name: "p".into(), source: "a".into(), target: "b".into(), class: MorphismClass::Plus },
                GeneratorSpec { name: "q".into(), source: "b".into(), target: "c".into(), class: MorphismClass::Plus },
            ],
            relations: vec![],
        };
        let cat = Arc::new(ReedyCategory::new(spec).unwrap());
        let x = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let id = SSetMap::identity(&x);
        let d = Diagram::new(cat.clone(), vec![x.clone(), x.clone(), x.clone()], vec![id.clone(), id.clone()]).unwrap();
        let c = cat.object_index("c").unwrap();
        let index = cat.plus_into(c);
        assert_eq!(index.len(), 2);
        let good: Vec<SSetMap> = index.iter().map(|_| id.clone()).collect();
        assert!(latching_family_of(&d, c, good).is_ok());
        let p = Arc::new(point(2));
        let v0 = SSetMap::vertex(&p, &x, 0).unwrap();
        let collapse = SSetMap::terminal(&x, &p).unwrap().then(&v0).unwrap();
        let bad = vec![collapse, id];
        assert!(matches!(latching_family_of(&d, c, bad), Err(Error::NonCommuting(_))));
        // discrete plus part: the family is empty
        let cos = Arc::new(ReedyCategory::new(shapes::cospan()).unwrap());
        assert!(cos.plus_into(0).is_empty());
    }
}
