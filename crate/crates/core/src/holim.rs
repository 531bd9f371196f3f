//! Closed forms of the replacement on small shapes (cospans, parallel pairs,
//! truncated towers), each compared against [`replace`] by an explicit map.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::certificate::{Certificate, CertificateSet};
use crate::error::{Error, Result};
use crate::path::{homotopy_pullback, PathObjectData};
use crate::reedy::{Diagram, Morphism, PartialFunctor, ReedyCategory};
use crate::replace::{replace, ReplacementResult, StageRecord};
use crate::sset::{
    enumerate_maps, finite_limit, find_isomorphism, fibration_check, indiscrete_nerve, interval, interval_flip, lambda,
    product, pullback, vertex_map, Exponential, LimitCone, LimitShape, SSet, SSetMap, Simplex,
};

/// How a closed form was matched with the replacement at one object.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Matching {
    /// The constructed comparison map is a bijection.
    Canonical,
    /// The constructed map failed; an isomorphism was found by search.
    Search,
    Failed,
}

pub struct Crosscheck {
    pub matching: Vec<Matching>,
    pub comparisons: Vec<Option<SSetMap>>,
    pub certificates: CertificateSet,
}

impl Crosscheck {
    pub fn passed(&self) -> bool {
        self.certificates.all_pass() && self.matching.iter().all(|&m| m == Matching::Canonical)
    }
}

/// Compares `replace`'s output with a closed-form diagram over the same
/// category, given a candidate comparison per object.
fn finish_crosscheck(r: &ReplacementResult, closed: &Diagram, candidates: Vec<Result<SSetMap>>) -> Result<Crosscheck> {
    let cat = r.category();
    let mut certs = CertificateSet::new();
    let mut matching = Vec::new();
    let mut comparisons = Vec::new();
    for (c, candidate) in candidates.into_iter().enumerate() {
        let name = cat.object_name(c);
        let (rc, cc) = (&r.output.values()[c], &closed.values()[c]);
        match candidate {
            Ok(map) if map.is_bijective() => {
                certs.push(Certificate::pass(format!("closed form at {name} matches by the constructed map")));
                matching.push(Matching::Canonical);
                comparisons.push(Some(map));
            }
            other => {
                let why = match other {
                    Ok(_) => "constructed map is not bijective".to_string(),
                    Err(e) => e.to_string(),
                };
                let found = find_isomorphism(rc, cc)?;
                certs.push(Certificate::check(
                    format!("closed form at {name} matches by the constructed map"),
                    Some(format!("{why}; search {}", if found.is_some() { "found an isomorphism" } else { "failed" })),
                ));
                matching.push(if found.is_some() { Matching::Search } else { Matching::Failed });
                comparisons.push(None);
            }
        }
    }
    for f in 0..cat.morphisms().len() {
        let data = cat.morphism(f);
        let (Some(a), Some(b)) = (&comparisons[data.source], &comparisons[data.target]) else { continue };
        let lhs = r.output.maps()[f].then(b)?;
        let rhs = a.then(&closed.maps()[f])?;
        certs.push(Certificate::check(
            format!("comparison commutes with {}", cat.describe(f)),
            lhs.first_difference(&rhs),
        ));
    }
    Ok(Crosscheck { matching, comparisons, certificates: certs })
}

/// `(x, γ) ↦ (x, h∘γ)` from a stage of the replacement into a closed-form pullback.
fn stage_comparison<H>(stage: &StageRecord, cone: &LimitCone, space: &Exponential, h: H) -> Result<SSetMap>
where
    H: Fn(usize, Simplex) -> Option<Simplex>,
{
    let source = &stage.cone.object;
    let components = (0..=source.truncation())
        .map(|n| {
            (0..source.level_size(n) as Simplex)
                .map(|v| {
                    let t = stage.cone.tuple(n, v);
                    stage
                        .paths
                        .space
                        .transport(n, t[1], space, &h)
                        .and_then(|g| cone.index_of(n, &[t[0], g]))
                        .ok_or_else(|| Error::Internal(format!("{}-simplex {} has no closed-form image", n, source.name(n, v))))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SSetMap::new(source.clone(), cone.object.clone(), components)
}

fn hom_between(cat: &ReedyCategory, a: usize, b: usize) -> Option<Morphism> {
    (0..cat.morphisms().len()).find(|&f| {
        let d = cat.morphism(f);
        d.source == a && d.target == b
    })
}

/// The two degree-1 objects, the degree-0 apex, and the two legs.
struct CospanShape {
    apex: usize,
    sides: [usize; 2],
    legs: [Morphism; 2],
}

fn cospan_shape(cat: &ReedyCategory) -> Result<CospanShape> {
    let bad = || Error::Precondition("diagram is not on a cospan shape".into());
    if cat.object_count() != 3 || cat.generator_count() != 2 {
        return Err(bad());
    }
    let order = cat.processing_order();
    let apex = *order.iter().find(|&&c| cat.degree(c) == 0).ok_or_else(bad)?;
    let sides: Vec<usize> = order.iter().copied().filter(|&c| cat.degree(c) == 1).collect();
    if sides.len() != 2 {
        return Err(bad());
    }
    let legs = [hom_between(cat, sides[0], apex).ok_or_else(bad)?, hom_between(cat, sides[1], apex).ok_or_else(bad)?];
    if legs.iter().any(|&g| !cat.morphism(g).minus) || cat.morphisms().len() != 5 {
        return Err(bad());
    }
    Ok(CospanShape { apex, sides: [sides[0], sides[1]], legs })
}

/// `C_x ×_{C_y} C_y^I -> C_y <- C_z ×_{C_y} C_y^I`, with paths starting at the image.
pub struct CospanClosedForm {
    pub diagram: Diagram,
    pub paths: PathObjectData,
    /// Per side, the pullback with tuples `(x, γ)`.
    pub sides: [LimitCone; 2],
}

pub fn cospan_closed_form(f: &Diagram) -> Result<CospanClosedForm> {
    f.require_projective_fibrant()?;
    let cat = f.category();
    let shape = cospan_shape(cat)?;
    let apex = f.require_value(shape.apex)?.clone();
    let paths = PathObjectData::interval(&apex)?;
    let sides = [
        pullback(f.require_map(shape.legs[0])?, &paths.source)?,
        pullback(f.require_map(shape.legs[1])?, &paths.source)?,
    ];
    let mut values = vec![apex.clone(); 3];
    let mut maps: Vec<SSetMap> = Vec::new();
    for (k, &s) in shape.sides.iter().enumerate() {
        values[s] = sides[k].object.clone();
    }
    for g in 0..cat.generator_count() {
        let m = cat.generator_morphism(g);
        let k = shape.legs.iter().position(|&l| l == m).ok_or_else(|| Error::Precondition("unexpected generator".into()))?;
        maps.push(sides[k].projections[1].then(&paths.target)?);
    }
    let diagram = Diagram::new(f.category_arc().clone(), values, maps)?;
    Ok(CospanClosedForm { diagram, paths, sides })
}

/// Levelwise comparison of `replace(F)` with the cospan closed form.
pub fn cospan_crosscheck(f: &Diagram) -> Result<Crosscheck> {
    let r = replace(f)?;
    let closed = cospan_closed_form(f)?;
    let shape = cospan_shape(f.category())?;
    let mut candidates: Vec<Result<SSetMap>> = (0..3).map(|_| Err(Error::Internal("unset".into()))).collect();
    candidates[shape.apex] = Ok(SSetMap::identity(&r.output.values()[shape.apex]));
    for (k, &s) in shape.sides.iter().enumerate() {
        let stage = r.stages[s].as_ref().expect("degree one");
        let m = &stage.matching.cone;
        candidates[s] = stage_comparison(stage, &closed.sides[k], &closed.paths.space, |p, v| Some(m.tuple(p, v)[0]));
    }
    finish_crosscheck(&r, &closed.diagram, candidates)
}

/// The limit of `replace(F)` over a base with discrete plus part.
pub fn holim_discrete_plus(f: &Diagram) -> Result<(LimitCone, ReplacementResult)> {
    let cat = f.category();
    if !cat.has_discrete_plus() {
        return Err(Error::Precondition("the plus part of the base is not discrete".into()));
    }
    let r = replace(f)?;
    let mut shape = if cat.object_count() == 0 {
        LimitShape::empty(f.truncation())
    } else {
        LimitShape::new(r.output.values().to_vec())
    };
    for g in 0..cat.generator_count() {
        let m = cat.generator_morphism(g);
        let d = cat.morphism(m);
        shape.arrow(d.source, d.target, r.output.maps()[m].clone());
    }
    Ok((finite_limit(&shape)?, r))
}

/// Compares the limit of `replace(F)` over a cospan with the `Λ`-model
/// homotopy pullback via `(x, λ, z) ↦ ((x, λ|first), λ(end of first), (z, reverse(λ|second)))`.
pub fn cospan_holim_comparison(f: &Diagram) -> Result<Certificate> {
    let shape = cospan_shape(f.category())?;
    let (holim, r) = holim_discrete_plus(f)?;
    let (f0, f1) = (f.require_map(shape.legs[0])?, f.require_map(shape.legs[1])?);
    let hp = homotopy_pullback(f0, f1)?;
    let m = f.truncation();
    let (l, i1, i2) = lambda(m);
    let i = interval(m);
    let arms = [i1.with_endpoints(i.clone(), l.clone())?, interval_flip(m).then(&i2)?.with_endpoints(i, l)?];
    let stages: Vec<&StageRecord> = shape.sides.iter().map(|&s| r.stages[s].as_ref().expect("degree one")).collect();
    let restrictions = arms
        .iter()
        .zip(&stages)
        .map(|(arm, st)| {
            // Y^Λ -> Y^I, then values moved into the one-object matching limit
            let plain = Exponential::new(f.require_value(shape.apex)?, arm.source())?;
            Ok((hp.path.space.precompose(arm, &plain)?, plain, &st.matching.cone, &st.paths.space, &st.cone))
        })
        .collect::<Result<Vec<_>>>()?;
    let components = (0..=m)
        .map(|n| {
            (0..hp.cone.object.level_size(n) as Simplex)
                .map(|w| {
                    let t = hp.cone.tuple(n, w);
                    let ends = [t[0], t[2]];
                    let mut tuple = vec![0; 3];
                    for (k, (restrict, plain, mcone, space, cone)) in restrictions.iter().enumerate() {
                        let gamma = restrict.apply(n, t[1]);
                        let moved = plain.transport(n, gamma, space, |p, y| mcone.index_of(p, &[y]));
                        tuple[shape.sides[k]] = moved
                            .and_then(|g| cone.index_of(n, &[ends[k], g]))
                            .ok_or_else(|| Error::Internal("Λ-path has no image in the replacement".into()))?;
                    }
                    tuple[shape.apex] = r.output.maps()[shape.legs[0]].apply(n, tuple[shape.sides[0]]);
                    holim.index_of(n, &tuple).ok_or_else(|| Error::Internal("image is not a cone".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let map = SSetMap::new(hp.cone.object.clone(), holim.object.clone(), components)?;
    Ok(Certificate::check(
        "homotopy pullback ≅ limit of the replacement",
        (!map.is_bijective())
            .then(|| format!("levels {:?} vs {:?}", hp.cone.object.level_sizes(), holim.object.level_sizes())),
    ))
}

/// A parallel pair `x ⇉ y` with `x` in degree 1.
struct EqualizerShape {
    source: usize,
    target: usize,
    arrows: [Morphism; 2],
}

fn equalizer_shape(cat: &ReedyCategory) -> Result<EqualizerShape> {
    let bad = || Error::Precondition("diagram is not on a parallel-pair shape".into());
    if cat.object_count() != 2 || cat.generator_count() != 2 || cat.morphisms().len() != 4 {
        return Err(bad());
    }
    let source = (0..2).find(|&c| cat.degree(c) == 1).ok_or_else(bad)?;
    let target = 1 - source;
    if cat.degree(target) != 0 {
        return Err(bad());
    }
    let index = cat.minus_out_of(source);
    if index.len() != 2 {
        return Err(bad());
    }
    Ok(EqualizerShape { source, target, arrows: [index[0], index[1]] })
}

/// `E_x ×_{E_y²} (E_y²)^I ⇉ E_y`, the stage at the degree-1 object.
pub struct EqualizerClosedForm {
    pub diagram: Diagram,
    pub square: LimitCone,
    pub paths: PathObjectData,
    /// Tuples `(x, γ)`.
    pub stage: LimitCone,
}

pub fn equalizer_closed_form(g: &Diagram) -> Result<EqualizerClosedForm> {
    g.require_projective_fibrant()?;
    let cat = g.category();
    let shape = equalizer_shape(cat)?;
    let ey = g.require_value(shape.target)?.clone();
    let ex = g.require_value(shape.source)?.clone();
    let square = product(&ey, &ey)?;
    let legs = [g.require_map(shape.arrows[0])?.clone(), g.require_map(shape.arrows[1])?.clone()];
    let mu = square.induced(&ex, &legs)?;
    let paths = PathObjectData::interval(&square.object)?;
    let stage = pullback(&mu, &paths.source)?;
    let to_square = stage.projections[1].then(&paths.target)?;
    let mut values = vec![ey.clone(); 2];
    values[shape.source] = stage.object.clone();
    let maps = (0..cat.generator_count())
        .map(|k| {
            let m = cat.generator_morphism(k);
            let slot = shape.arrows.iter().position(|&a| a == m).expect("generator is one of the pair");
            to_square.then(&square.projections[slot])
        })
        .collect::<Result<Vec<_>>>()?;
    let diagram = Diagram::new(g.category_arc().clone(), values, maps)?;
    Ok(EqualizerClosedForm { diagram, square, paths, stage })
}

pub fn equalizer_crosscheck(g: &Diagram) -> Result<Crosscheck> {
    let r = replace(g)?;
    let closed = equalizer_closed_form(g)?;
    let shape = equalizer_shape(g.category())?;
    let stage = r.stages[shape.source].as_ref().expect("degree one");
    let m = &stage.matching.cone;
    let mut candidates: Vec<Result<SSetMap>> = vec![Err(Error::Internal("unset".into())), Err(Error::Internal("unset".into()))];
    candidates[shape.target] = Ok(SSetMap::identity(&r.output.values()[shape.target]));
    candidates[shape.source] =
        stage_comparison(stage, &closed.stage, &closed.paths.space, |p, v| closed.square.index_of(p, m.tuple(p, v)));
    finish_crosscheck(&r, &closed.diagram, candidates)
}

/// Vertices of the equalizer-shaped limit against triples `(p, a, q)` of
/// paths `p, q` in `E_y` and `a ∈ E_x` with `p(0) = u(a)`, `p(1) = q(0)`,
/// `q(1) = v(a)`, enumerated independently.
pub struct TripleCheck {
    pub limit_vertices: usize,
    pub triples: usize,
    pub certificate: Certificate,
}

pub fn equalizer_triples(g: &Diagram) -> Result<TripleCheck> {
    let shape = equalizer_shape(g.category())?;
    let (holim, r) = holim_discrete_plus(g)?;
    let m = g.truncation();
    let i = interval(m);
    let ey = g.require_value(shape.target)?.clone();
    let ex = g.require_value(shape.source)?.clone();
    let (u, v) = (g.require_map(shape.arrows[0])?, g.require_map(shape.arrows[1])?);
    let paths = enumerate_maps(&i, &ey)?;
    let mut brute = BTreeSet::new();
    for a in 0..ex.level_size(0) as Simplex {
        for (pi, p) in paths.iter().enumerate() {
            if p.apply(0, 0) != u.apply(0, a) {
                continue;
            }
            for (qi, q) in paths.iter().enumerate() {
                if p.apply(0, 1) == q.apply(0, 0) && q.apply(0, 1) == v.apply(0, a) {
                    brute.insert((pi, a, qi));
                }
            }
        }
    }
    let stage = r.stages[shape.source].as_ref().expect("degree one");
    let space = &stage.paths.space;
    let flip = interval_flip(m);
    let mut seen = BTreeSet::new();
    let mut witness = None;
    for w in 0..holim.object.level_size(0) as Simplex {
        let t = holim.tuple(0, w);
        let (rx, e) = (t[shape.source], t[shape.target]);
        let st = stage.cone.tuple(0, rx);
        let values = space.decode(0, st[1]);
        let prod = space.product(0);
        let arm = |slot: usize| -> Result<SSetMap> {
            let components = (0..=m)
                .map(|n| {
                    (0..i.level_size(n) as Simplex)
                        .map(|lam| stage.matching.cone.tuple(n, values[n][prod.pair(n, lam, 0) as usize])[slot])
                        .collect()
                })
                .collect();
            SSetMap::new(i.clone(), ey.clone(), components)
        };
        let p = arm(0)?;
        let q = flip.then(&arm(1)?)?;
        let find = |x: &SSetMap| paths.iter().position(|y| y == x);
        match (find(&p), find(&q)) {
            (Some(pi), Some(qi)) if p.apply(0, 1) == e && q.apply(0, 0) == e => {
                if !seen.insert((pi, st[0], qi)) {
                    witness.get_or_insert(format!("two limit vertices give the triple at vertex {}", holim.object.name(0, w)));
                }
            }
            _ => {
                witness.get_or_insert(format!("limit vertex {} gives no triple", holim.object.name(0, w)));
            }
        }
    }
    if witness.is_none() && seen != brute {
        witness = Some(format!("{} triples from the limit, {} enumerated", seen.len(), brute.len()));
    }
    Ok(TripleCheck {
        limit_vertices: holim.object.level_size(0),
        triples: brute.len(),
        certificate: Certificate::check("limit vertices ↔ triples (p, a, q)", witness),
    })
}

/// Objects of a truncated tower by degree, checked to form a chain.
fn tower_objects(cat: &ReedyCategory) -> Result<Vec<usize>> {
    let bad = || Error::Precondition("diagram is not on a truncated tower".into());
    let top = cat.max_degree();
    let mut objects = Vec::new();
    for k in 0..=top {
        let at: Vec<usize> = (0..cat.object_count()).filter(|&c| cat.degree(c) == k).collect();
        if at.len() != 1 {
            return Err(bad());
        }
        objects.push(at[0]);
    }
    if objects.len() != cat.object_count() {
        return Err(bad());
    }
    for a in 0..=top {
        for b in 0..=top {
            let count = (0..cat.morphisms().len())
                .filter(|&f| cat.morphism(f).source == objects[a] && cat.morphism(f).target == objects[b])
                .count();
            if count != usize::from(b <= a) {
                return Err(bad());
            }
        }
    }
    Ok(objects)
}

/// Stage `n` of the tower closed form: the equalizer of
/// `∏_{i ≤ n} J_i^{N(I[n-i])} ⇉ ∏_{j < n} J_j^{N(I[n-j-1])}`.
pub struct TowerClosedForm {
    pub stage: usize,
    /// `A_i = J_i^{N(I[n-i])}`.
    pub factors: Vec<Arc<Exponential>>,
    /// `B_j = J_j^{N(I[n-j-1])}`.
    pub targets: Vec<Arc<Exponential>>,
    /// `A_j -> B_j` by restriction to the first `n-j` objects.
    pub restrict: Vec<SSetMap>,
    /// `A_{j+1} -> B_j` by postcomposition.
    pub push: Vec<SSetMap>,
    /// Tuples `(a_0, ..., a_n)`.
    pub cone: LimitCone,
    /// `J_n -> stage`, constant paths.
    pub unit: SSetMap,
    /// To stage `n-1`, restricting to the last objects.
    pub structure: Option<SSetMap>,
}

fn nerve(points: usize, m: usize) -> Result<Arc<SSet>> {
    Ok(Arc::new(indiscrete_nerve(points, m)?))
}

/// Closed forms for stages `0..=n`.
pub fn tower_closed_forms(j: &Diagram, n: usize) -> Result<Vec<TowerClosedForm>> {
    let cat = j.category();
    let objects = tower_objects(cat)?;
    if n >= objects.len() {
        return Err(Error::Precondition(format!("stage {n} beyond the tower's top degree {}", objects.len() - 1)));
    }
    let m = j.truncation();
    let value = |k: usize| j.require_value(objects[k]).cloned();
    let down = |a: usize, b: usize| j.require_map(hom_between(cat, objects[a], objects[b]).expect("chain"));
    let mut out: Vec<TowerClosedForm> = Vec::new();
    for s in 0..=n {
        let factors = (0..=s)
            .map(|i| Ok(Arc::new(Exponential::new(&value(i)?, &nerve(s - i + 1, m)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let targets = (0..s)
            .map(|i| Ok(Arc::new(Exponential::new(&value(i)?, &nerve(s - i, m)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut restrict = Vec::new();
        let mut push = Vec::new();
        let mut shape = LimitShape::new(factors.iter().map(|a| a.object().clone()).collect());
        for i in 0..s {
            let first: Vec<usize> = (0..s - i).collect();
            let psi = vertex_map(targets[i].exponent(), factors[i].exponent(), &first)?;
            let r = factors[i].precompose(&psi, &targets[i])?;
            let p = factors[i + 1].postcompose(down(i + 1, i)?, &targets[i])?;
            shape.equation(i, r.clone(), i + 1, p.clone());
            restrict.push(r);
            push.push(p);
        }
        let cone = finite_limit(&shape)?;
        let legs = (0..=s)
            .map(|i| down(s, i)?.then(&factors[i].constant()))
            .collect::<Result<Vec<_>>>()?;
        let unit = cone.induced(&value(s)?, &legs)?;
        let structure = match out.last() {
            None => None,
            Some(prev) => {
                let legs = (0..s)
                    .map(|i| {
                        let shift: Vec<usize> = (1..=s - i).collect();
                        let along = vertex_map(prev.factors[i].exponent(), factors[i].exponent(), &shift)?;
                        cone.projections[i].then(&factors[i].precompose(&along, &prev.factors[i])?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(prev.cone.induced(&cone.object, &legs)?)
            }
        };
        out.push(TowerClosedForm { stage: s, factors, targets, restrict, push, cone, unit, structure });
    }
    Ok(out)
}

pub fn tower_closed_form(j: &Diagram, n: usize) -> Result<TowerClosedForm> {
    Ok(tower_closed_forms(j, n)?.pop().expect("at least stage 0"))
}

pub struct TowerCrosscheck {
    pub stages: Vec<TowerClosedForm>,
    /// `R(J)_k -> closed form at k`.
    pub comparisons: Vec<SSetMap>,
    pub certificates: CertificateSet,
}

fn evaluation_table(e: &Exponential) -> Vec<Vec<Vec<Simplex>>> {
    let obj = e.object();
    (0..=obj.truncation())
        .map(|p| {
            (0..obj.level_size(p) as Simplex)
                .map(|f| {
                    let values = e.decode(p, f);
                    (0..e.exponent().level_size(p) as Simplex).map(|a| e.evaluate_decoded(p, &values, a)).collect()
                })
                .collect()
        })
        .collect()
}

/// Builds the closed forms up to stage `n`, the comparison maps out of the
/// replacement by `0 ↦ (0, 0)`, `j ↦ (j-1, 1)`, and checks them.
pub fn tower_crosscheck(j: &Diagram, n: usize, check_dim: Option<usize>) -> Result<TowerCrosscheck> {
    let stages = tower_closed_forms(j, n)?;
    let cat = j.category();
    let objects = tower_objects(cat)?;
    let r = replace(&j.restrict_to_degree(n)?)?;
    // the restriction keeps object names; find each degree's object there
    let rcat = r.category();
    let robj: Vec<usize> = objects[..=n]
        .iter()
        .map(|&o| rcat.object_index(cat.object_name(o)).expect("kept object"))
        .collect();
    let m = j.truncation();
    let iv = interval(m);
    let mut comparisons: Vec<SSetMap> = Vec::new();
    let mut certs = CertificateSet::new();
    for (s, cf) in stages.iter().enumerate() {
        let rs = &r.output.values()[robj[s]];
        let top_constant = cf.factors[s].constant();
        let psi = match r.stages[robj[s]].as_ref() {
            None => {
                let legs = vec![top_constant];
                cf.cone.induced(rs, &legs)?
            }
            Some(stage) => {
                let prev = &stages[s - 1];
                let prev_psi = &comparisons[s - 1];
                let tables: Vec<_> = prev.factors.iter().map(|a| evaluation_table(a)).collect();
                let iotas = (0..s)
                    .map(|i| {
                        let k = s - i;
                        let from = cf.factors[i].exponent();
                        let mut first: Vec<usize> = vec![0];
                        first.extend(0..k);
                        let mut second = vec![0];
                        second.extend(std::iter::repeat(1).take(k));
                        Ok((vertex_map(from, prev.factors[i].exponent(), &first)?, vertex_map(from, &iv, &second)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let components = (0..=m)
                    .map(|level| {
                        (0..rs.level_size(level) as Simplex)
                            .map(|v| {
                                let t = stage.cone.tuple(level, v);
                                let gamma = stage.paths.space.decode(level, t[1]);
                                let gprod = stage.paths.space.product(level);
                                let mut tuple = Vec::with_capacity(s + 1);
                                for i in 0..s {
                                    let a = &cf.factors[i];
                                    let aprod = a.product(level);
                                    let (iota1, iota2) = &iotas[i];
                                    let values: Vec<Vec<Simplex>> = (0..=m)
                                        .map(|p| {
                                            (0..aprod.object.level_size(p) as Simplex)
                                                .map(|z| {
                                                    let (lam, theta) = aprod.split(p, z);
                                                    let mv = gamma[p][gprod.pair(p, iota2.apply(p, lam), theta) as usize];
                                                    let below = stage.matching.cone.tuple(p, mv)[0];
                                                    let c = prev_psi.apply(p, below);
                                                    let comp = prev.cone.tuple(p, c)[i];
                                                    tables[i][p][comp as usize][iota1.apply(p, lam) as usize]
                                                })
                                                .collect()
                                        })
                                        .collect();
                                    tuple.push(a.encode(level, &values).ok_or_else(|| {
                                        Error::Internal(format!("component {i} at stage {s} is not simplicial"))
                                    })?);
                                }
                                tuple.push(top_constant.apply(level, t[0]));
                                cf.cone.index_of(level, &tuple).ok_or_else(|| {
                                    Error::Internal(format!("{}-simplex {} misses the equalizer", level, rs.name(level, v)))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                SSetMap::new(rs.clone(), cf.cone.object.clone(), components)?
            }
        };
        certs.push(Certificate::check(
            format!("stage {s}: comparison is a levelwise bijection"),
            (!psi.is_bijective())
                .then(|| format!("{:?} vs {:?}", rs.level_sizes(), cf.cone.object.level_sizes())),
        ));
        certs.push(Certificate::check(
            format!("stage {s}: comparison carries κ to the unit"),
            r.kappa[robj[s]].then(&psi)?.first_difference(&cf.unit),
        ));
        if let Some(structure) = &cf.structure {
            let f = hom_between(rcat, robj[s], robj[s - 1]).expect("chain");
            let lhs = r.output.maps()[f].then(&comparisons[s - 1])?;
            let rhs = psi.then(structure)?;
            certs.push(Certificate::check(
                format!("stage {s}: comparison commutes with the structure maps"),
                lhs.first_difference(&rhs),
            ));
            let report = fibration_check(structure, check_dim)?;
            certs.push(Certificate::check(
                format!("stage {s}: structure map is a fibration{}", if report.partial { " (partial)" } else { "" }),
                (!report.verdict).then(|| report.to_string()),
            ));
        }
        comparisons.push(psi);
    }
    // the limit over the truncated tower is the top stage
    let mut shape = LimitShape::new(r.output.values().to_vec());
    for g in 0..rcat.generator_count() {
        let f = rcat.generator_morphism(g);
        shape.arrow(rcat.morphism(f).source, rcat.morphism(f).target, r.output.maps()[f].clone());
    }
    let lim = finite_limit(&shape)?;
    certs.push(Certificate::check(
        format!("limit over stages 0..={n} projects bijectively to stage {n}"),
        (!lim.projections[robj[n]].is_bijective()).then_some("projection is not bijective"),
    ));
    Ok(TowerCrosscheck { stages, comparisons, certificates: certs })
}
