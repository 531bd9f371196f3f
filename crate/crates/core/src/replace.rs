//! The degree-by-degree fibrant replacement `R(X)` with `κ`, `α` and `H`.
//!
//! Degree-0 values are kept as they are. At an object `c` of positive degree,
//! with `M = M_c R` built from the lower degrees,
//!
//! ```text
//! R(c) = X(c) ×_M M^I      (pullback of X(c) -> M_c X -> M and the source map s_M)
//! κ(x) = (x, c_M(μ x))     α(x, γ) = x     H((x, γ), j) = (x, D_M(γ, j))
//! ```
//!
//! A minus morphism `g` out of `c` acts by `π_g ∘ t_M` on the path component;
//! a plus morphism `p: b -> c` acts through the latching leg
//! `r ↦ (X(p) α_b(r), [(r', j) ↦ (R(g p) H_b(r', j))_g])`. Other morphisms act
//! through their unique plus-minus factorization.

use std::sync::Arc;

use crate::certificate::{Certificate, CertificateSet};
use crate::error::{Error, Result};
use crate::path::{d_tilde, MinTable, PathObjectData, RightHomotopy};
use crate::reedy::{
    induced_matching_map, latching_family_of, matching_data, validate_reedy, Diagram, DiagramMap, LatchingFamily,
    MatchingData, Morphism, PartialFunctor, ReedyCategory,
};
use crate::sset::limits::ProductIndex;
use crate::sset::{fibration_check, kan_check, pullback, FibrationReport, LimitCone, SSet, SSetMap, Simplex};

/// The data built at an object of positive degree.
pub struct StageRecord {
    pub object: usize,
    pub matching: MatchingData,
    pub paths: PathObjectData,
    /// `X(c) -> M_c X -> M_c R`.
    pub mu: SSetMap,
    /// `R(c)` with tuples `(x, γ)`.
    pub cone: LimitCone,
}

impl StageRecord {
    /// `R(c) -> M_c R`, the composite `t_M ∘ proj`.
    pub fn matching_map(&self) -> Result<SSetMap> {
        self.cone.projections[1].then(&self.paths.target)
    }
}

pub struct ReplacementResult {
    pub input: Diagram,
    pub output: Diagram,
    pub kappa: Vec<SSetMap>,
    pub alpha: Vec<SSetMap>,
    pub homotopy: Vec<RightHomotopy>,
    pub stages: Vec<Option<StageRecord>>,
    pub latching: Vec<LatchingFamily>,
    /// Checks made while building: latching compatibility and factorization.
    pub certificates: CertificateSet,
}

impl ReplacementResult {
    pub fn category(&self) -> &ReedyCategory {
        self.input.category()
    }

    /// `R(c) -> M_c R`, terminal for objects without a stage.
    pub fn matching_map(&self, c: usize) -> Result<(SSetMap, Arc<SSet>)> {
        match &self.stages[c] {
            Some(s) => Ok((s.matching_map()?, s.matching.cone.object.clone())),
            None => {
                let md = matching_data(&self.output, c)?;
                let map = md.map.clone().expect("value present");
                Ok((map, md.cone.object.clone()))
            }
        }
    }
}

struct Partial<'a> {
    category: &'a ReedyCategory,
    m: usize,
    values: Vec<Option<Arc<SSet>>>,
    maps: Vec<Option<SSetMap>>,
}

impl PartialFunctor for Partial<'_> {
    fn category(&self) -> &ReedyCategory {
        self.category
    }

    fn truncation(&self) -> usize {
        self.m
    }

    fn value(&self, object: usize) -> Option<&Arc<SSet>> {
        self.values[object].as_ref()
    }

    fn map(&self, f: Morphism) -> Option<&SSetMap> {
        self.maps[f].as_ref()
    }
}

fn internal(e: Error) -> Error {
    match e {
        Error::NonCommuting(w) => Error::Internal(w),
        other => other,
    }
}

/// Builds `R(X)`, `κ`, `α` and `H` for a projective-fibrant diagram.
pub fn replace(x: &Diagram) -> Result<ReplacementResult> {
    x.require_projective_fibrant()?;
    let cat = x.category();
    if let Some(v) = validate_reedy(cat).into_iter().next() {
        return Err(Error::InvalidReedy(v.to_string()));
    }
    let m = x.truncation();
    let n_obj = cat.object_count();
    let n_mor = cat.morphisms().len();
    let min = MinTable::new(m);
    let mut partial = Partial { category: cat, m, values: vec![None; n_obj], maps: vec![None; n_mor] };
    let mut kappa: Vec<Option<SSetMap>> = vec![None; n_obj];
    let mut alpha: Vec<Option<SSetMap>> = vec![None; n_obj];
    let mut homotopy: Vec<Option<RightHomotopy>> = vec![None; n_obj];
    let mut stages: Vec<Option<StageRecord>> = (0..n_obj).map(|_| None).collect();
    let mut latching = Vec::new();
    let mut certificates = CertificateSet::new();

    let order = cat.processing_order();
    let max_degree = cat.max_degree();
    for degree in 0..=max_degree {
        let layer: Vec<usize> = order.iter().copied().filter(|&c| cat.degree(c) == degree).collect();
        for &c in &layer {
            let xc = x.require_value(c)?.clone();
            if degree == 0 {
                let id = SSetMap::identity(&xc);
                homotopy[c] = Some(RightHomotopy::constant(&id)?);
                kappa[c] = Some(id.clone());
                alpha[c] = Some(id);
                partial.values[c] = Some(xc);
                continue;
            }
            let matching = matching_data(&partial, c).map_err(internal)?;
            let paths = PathObjectData::interval(&matching.cone.object)?;
            let legs = matching
                .index
                .iter()
                .map(|&g| x.require_map(g)?.then(kappa[cat.morphism(g).target].as_ref().expect("lower degree")))
                .collect::<Result<Vec<_>>>()?;
            let mu = matching.cone.induced(&xc, &legs).map_err(internal)?;
            let cone = pullback(&mu, &paths.source)?;
            let rc = cone.object.clone();
            let k = cone.induced(&xc, &[SSetMap::identity(&xc), mu.then(&paths.insertion)?]).map_err(internal)?;
            let a = cone.projections[0].clone();
            let retract = a.then(&k)?;
            let h = RightHomotopy::from_fn(&retract, &SSetMap::identity(&rc), |p, r, j| {
                let t = cone.tuple(p, r);
                let gamma = d_tilde(&paths.space, &min, p, t[1], j);
                cone.index_of(p, &[t[0], gamma]).expect("D fixes the source of a path")
            })?;
            let to_matching = cone.projections[1].then(&paths.target)?;
            for (i, &g) in matching.index.iter().enumerate() {
                let rg = to_matching.then(&matching.cone.projections[i])?;
                partial.maps[g] = Some(rg.with_endpoints(rc.clone(), partial.values[cat.morphism(g).target].clone().expect("lower degree"))?);
            }
            kappa[c] = Some(k);
            alpha[c] = Some(a);
            homotopy[c] = Some(h);
            partial.values[c] = Some(rc);
            stages[c] = Some(StageRecord { object: c, matching, paths, mu, cone });
        }
        // Plus morphisms into this degree, through the latching legs.
        for &c in &layer {
            let index = cat.plus_into(c);
            let mut legs = Vec::new();
            for &p in &index {
                let b = cat.morphism(p).source;
                let leg = match &stages[c] {
                    Some(stage) => {
                        let rb = partial.values[b].clone().expect("lower degree");
                        let hb = homotopy[b].as_ref().expect("lower degree");
                        let through: Vec<SSetMap> = stage
                            .matching
                            .index
                            .iter()
                            .map(|&g| {
                                let gp = cat.compose(p, g).expect("composable");
                                partial.require_map(gp).cloned()
                            })
                            .collect::<Result<Vec<_>>>()?;
                        let path = stage.paths.space.curry(&rb, |lvl, r, j| {
                            let moved = hb.apply(lvl, r, j);
                            let tuple: Vec<Simplex> = through.iter().map(|f| f.apply(lvl, moved)).collect();
                            stage.matching.cone.index_of(lvl, &tuple).unwrap_or(Simplex::MAX)
                        })?;
                        let xp = alpha[b].as_ref().expect("lower degree").then(x.require_map(p)?)?;
                        stage.cone.induced(&rb, &[xp, path]).map_err(internal)?
                    }
                    None => unreachable!("plus morphisms only enter positive degrees"),
                };
                partial.maps[p] = Some(leg.clone());
                legs.push(leg);
            }
            if index.is_empty() {
                continue;
            }
            let family = latching_family_of(&partial, c, legs);
            certificates.push(Certificate::check(
                format!("latching family at {} is compatible", cat.object_name(c)),
                family.as_ref().err(),
            ));
            let family = family.map_err(internal)?;
            let stage = stages[c].as_ref().expect("positive degree");
            let to_matching = stage.matching_map()?;
            for (leg, &p) in family.legs.iter().zip(&family.index) {
                let b = cat.morphism(p).source;
                let through = stage
                    .matching
                    .index
                    .iter()
                    .map(|&g| partial.require_map(cat.compose(p, g).expect("composable")).cloned())
                    .collect::<Result<Vec<_>>>()?;
                let rb = partial.values[b].clone().expect("lower degree");
                let latching_matching = stage.matching.cone.induced(&rb, &through).map_err(internal)?;
                certificates.push(Certificate::check(
                    format!("leg {} then matching map = latching-matching map", cat.describe(p)),
                    leg.then(&to_matching)?.first_difference(&latching_matching),
                ));
            }
            latching.push(family);
        }
        // Every remaining morphism among degrees <= this one, by factorization.
        for f in 0..n_mor {
            let data = cat.morphism(f);
            if partial.maps[f].is_some() || cat.degree(data.source) > degree || cat.degree(data.target) > degree {
                continue;
            }
            let (minus, plus) = cat.factor(f)?;
            let source = partial.values[data.source].clone().expect("processed");
            let mut map = SSetMap::identity(&source);
            for part in [minus, plus] {
                if !cat.is_identity(part) {
                    map = map.then(partial.require_map(part)?)?;
                }
            }
            let target = partial.values[data.target].clone().expect("processed");
            partial.maps[f] = Some(map.with_endpoints(source, target)?);
        }
    }
    let values: Vec<Arc<SSet>> = partial.values.into_iter().map(|v| v.expect("every object processed")).collect();
    let maps: Vec<SSetMap> = partial.maps.into_iter().map(|m| m.expect("every morphism assigned")).collect();
    let output = Diagram::from_morphism_maps(x.category_arc().clone(), values, maps).map_err(internal)?;
    Ok(ReplacementResult {
        input: x.clone(),
        output,
        kappa: kappa.into_iter().map(Option::unwrap).collect(),
        alpha: alpha.into_iter().map(Option::unwrap).collect(),
        homotopy: homotopy.into_iter().map(Option::unwrap).collect(),
        stages,
        latching,
        certificates,
    })
}

/// `α(c) ∘ κ(c) = id` at every object.
pub fn verify_retraction(r: &ReplacementResult) -> Result<CertificateSet> {
    let cat = r.category();
    let mut certs = CertificateSet::new();
    for c in 0..cat.object_count() {
        let id = SSetMap::identity(&r.input.values()[c]);
        certs.push(Certificate::check(
            format!("α∘κ = id at {}", cat.object_name(c)),
            r.kappa[c].then(&r.alpha[c])?.first_difference(&id),
        ));
    }
    Ok(certs)
}

/// Endpoints `κ∘α` and `id` of `H`, and `H` constant on the image of `κ`.
pub fn verify_homotopy(r: &ReplacementResult) -> Result<CertificateSet> {
    let cat = r.category();
    let mut certs = CertificateSet::new();
    for c in 0..cat.object_count() {
        let name = cat.object_name(c);
        let h = &r.homotopy[c];
        let retract = r.alpha[c].then(&r.kappa[c])?;
        certs.push(Certificate::check(format!("H starts at κ∘α at {name}"), h.end(0)?.first_difference(&retract)));
        let id = SSetMap::identity(&r.output.values()[c]);
        certs.push(Certificate::check(format!("H ends at id at {name}"), h.end(1)?.first_difference(&id)));
        let xc = &r.input.values()[c];
        let mut witness = None;
        'outer: for n in 0..=xc.truncation() {
            for v in 0..xc.level_size(n) as Simplex {
                let kv = r.kappa[c].apply(n, v);
                for j in 0..h.cylinder.right.level_size(n) as Simplex {
                    if h.apply(n, kv, j) != kv {
                        witness = Some(format!("at {}-simplex {}", n, xc.name(n, v)));
                        break 'outer;
                    }
                }
            }
        }
        certs.push(Certificate::check(format!("H∘κ is constant at {name}"), witness));
    }
    Ok(certs)
}

/// `κ` natural on every morphism; `α` and `H` natural on plus morphisms.
pub fn verify_naturality(r: &ReplacementResult) -> Result<CertificateSet> {
    let cat = r.category();
    let mut certs = CertificateSet::new();
    for f in 0..cat.morphisms().len() {
        let data = cat.morphism(f);
        let (s, t) = (data.source, data.target);
        let name = cat.describe(f);
        let lhs = r.input.maps()[f].then(&r.kappa[t])?;
        let rhs = r.kappa[s].then(&r.output.maps()[f])?;
        certs.push(Certificate::check(format!("κ natural along {name}"), lhs.first_difference(&rhs)));
        if !data.plus || cat.is_identity(f) {
            continue;
        }
        let lhs = r.alpha[s].then(&r.input.maps()[f])?;
        let rhs = r.output.maps()[f].then(&r.alpha[t])?;
        certs.push(Certificate::check(format!("α natural along {name}"), lhs.first_difference(&rhs)));
        let rf = &r.output.maps()[f];
        let (hs, ht) = (&r.homotopy[s], &r.homotopy[t]);
        let rs = &r.output.values()[s];
        let mut witness = None;
        'outer: for n in 0..=rs.truncation() {
            for v in 0..rs.level_size(n) as Simplex {
                for j in 0..hs.cylinder.right.level_size(n) as Simplex {
                    if rf.apply(n, hs.apply(n, v, j)) != ht.apply(n, rf.apply(n, v), j) {
                        witness = Some(format!("at {}-simplex {}", n, rs.name(n, v)));
                        break 'outer;
                    }
                }
            }
        }
        certs.push(Certificate::check(format!("H natural along {name}"), witness));
    }
    Ok(certs)
}

/// `κ(c)` levelwise injective at every object.
pub fn verify_injective(r: &ReplacementResult) -> CertificateSet {
    let cat = r.category();
    let mut certs = CertificateSet::new();
    for c in 0..cat.object_count() {
        certs.push(Certificate::check(
            format!("κ injective at {}", cat.object_name(c)),
            (!r.kappa[c].is_injective()).then_some("two simplices share an image"),
        ));
    }
    certs
}

/// Fibrancy of every matching map `R(c) -> M_c R`, and Kan checks of every `M_c R`.
pub fn verify_fibrant(r: &ReplacementResult, check_dim: Option<usize>) -> Result<Vec<FibrationReport>> {
    let cat = r.category();
    let mut out = Vec::new();
    for c in 0..cat.object_count() {
        let name = cat.object_name(c);
        let (map, target) = r.matching_map(c)?;
        let mut report = fibration_check(&map, check_dim)?;
        report.map = format!("R({name}) -> M_{name} R");
        out.push(report);
        let mut kan = kan_check(&target, check_dim)?;
        kan.map = format!("M_{name} R");
        out.push(kan);
    }
    Ok(out)
}

/// Every certificate: construction checks, retraction, homotopy, naturality,
/// injectivity and fibrancy.
pub fn certify(r: &ReplacementResult, check_dim: Option<usize>) -> Result<CertificateSet> {
    let mut certs = r.certificates.clone();
    certs.extend(verify_retraction(r)?);
    certs.extend(verify_homotopy(r)?);
    certs.extend(verify_naturality(r)?);
    certs.extend(verify_injective(r));
    for report in verify_fibrant(r, check_dim)? {
        let label = if report.partial { format!("{} fibrant (partial)", report.map) } else { format!("{} fibrant", report.map) };
        certs.push(Certificate::check(label, (!report.verdict).then(|| report.to_string())));
    }
    Ok(certs)
}

/// `R(f)` for a natural transformation `f: X -> Y`, with the `κ` squares.
pub fn replace_map(
    f: &DiagramMap,
    rx: &ReplacementResult,
    ry: &ReplacementResult,
) -> Result<(DiagramMap, CertificateSet)> {
    let cat = rx.category();
    if rx.input.truncation() != ry.input.truncation() {
        return Err(Error::TruncationMismatch(rx.input.truncation(), ry.input.truncation()));
    }
    DiagramMap::new(&rx.input, &ry.input, f.components.clone())?;
    let mut components: Vec<Option<SSetMap>> = vec![None; cat.object_count()];
    for c in cat.processing_order() {
        let fc = &f.components[c];
        let map = match (&rx.stages[c], &ry.stages[c]) {
            (None, None) => fc.with_endpoints(rx.output.values()[c].clone(), ry.output.values()[c].clone())?,
            (Some(sx), Some(sy)) => {
                let mf = induced_matching_map(cat, &components, &sx.matching, &sy.matching)?;
                let rxc = &rx.output.values()[c];
                let comps = (0..=rxc.truncation())
                    .map(|n| {
                        (0..rxc.level_size(n) as Simplex)
                            .map(|v| {
                                let t = sx.cone.tuple(n, v);
                                sx.paths
                                    .space
                                    .transport(n, t[1], &sy.paths.space, |p, z| Some(mf.apply(p, z)))
                                    .and_then(|g| sy.cone.index_of(n, &[fc.apply(n, t[0]), g]))
                                    .ok_or_else(|| Error::NonCommuting(format!("R(f) leaves the stage at {}", cat.object_name(c))))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                SSetMap::new(rxc.clone(), ry.output.values()[c].clone(), comps)?
            }
            _ => return Err(Error::Precondition("replacements built over different shapes".into())),
        };
        components[c] = Some(map);
    }
    let components: Vec<SSetMap> = components.into_iter().map(Option::unwrap).collect();
    let mut certs = CertificateSet::new();
    for c in 0..cat.object_count() {
        let lhs = rx.kappa[c].then(&components[c])?;
        let rhs = f.components[c].then(&ry.kappa[c])?;
        certs.push(Certificate::check(format!("R(f)∘κ = κ∘f at {}", cat.object_name(c)), lhs.first_difference(&rhs)));
    }
    let rf = DiagramMap::new(&rx.output, &ry.output, components);
    certs.push(Certificate::check("R(f) natural", rf.as_ref().err()));
    Ok((rf?, certs))
}

/// The comparison `R(X × Y) -> R(X) × R(Y)` is a levelwise bijection
/// commuting with `κ`, all structure maps and all matching maps.
pub fn verify_product_preservation(x: &Diagram, y: &Diagram) -> Result<CertificateSet> {
    let cat = x.category();
    let (xy, prods) = x.product(y)?;
    let (rxy, rx, ry) = (replace(&xy)?, replace(x)?, replace(y)?);
    let proj = |left: bool| -> Result<DiagramMap> {
        let comps = prods
            .iter()
            .map(|p| {
                let (a, b) = p.projections();
                Ok(if left { a } else { b })
            })
            .collect::<Result<Vec<_>>>()?;
        DiagramMap::new(&xy, if left { x } else { y }, comps)
    };
    let mut certs = CertificateSet::new();
    let (r1, c1) = replace_map(&proj(true)?, &rxy, &rx)?;
    let (r2, c2) = replace_map(&proj(false)?, &rxy, &ry)?;
    certs.extend(c1);
    certs.extend(c2);
    let targets = (0..cat.object_count())
        .map(|c| ProductIndex::new(&rx.output.values()[c], &ry.output.values()[c]))
        .collect::<Result<Vec<_>>>()?;
    let comparison = (0..cat.object_count())
        .map(|c| targets[c].pairing(&r1.components[c], &r2.components[c]))
        .collect::<Result<Vec<_>>>()?;
    for c in 0..cat.object_count() {
        let name = cat.object_name(c);
        certs.push(Certificate::check(
            format!("comparison bijective at {name}"),
            (!comparison[c].is_bijective()).then(|| {
                format!("{:?} vs {:?}", comparison[c].source().level_sizes(), comparison[c].target().level_sizes())
            }),
        ));
        let lhs = rxy.kappa[c].then(&comparison[c])?;
        let rhs = prods[c].map_product(&rx.kappa[c], &ry.kappa[c], &targets[c])?;
        certs.push(Certificate::check(format!("comparison commutes with κ at {name}"), lhs.first_difference(&rhs)));
    }
    for f in 0..cat.morphisms().len() {
        let data = cat.morphism(f);
        let lhs = rxy.output.maps()[f].then(&comparison[data.target])?;
        let rhs = comparison[data.source].then(&targets[data.source].map_product(
            &rx.output.maps()[f],
            &ry.output.maps()[f],
            &targets[data.target],
        )?)?;
        certs.push(Certificate::check(
            format!("comparison commutes with R({})", cat.describe(f)),
            lhs.first_difference(&rhs),
        ));
    }
    let first: Vec<Option<SSetMap>> = r1.components.iter().cloned().map(Some).collect();
    let second: Vec<Option<SSetMap>> = r2.components.iter().cloned().map(Some).collect();
    for c in 0..cat.object_count() {
        let (Some(sxy), Some(sx), Some(sy)) = (&rxy.stages[c], &rx.stages[c], &ry.stages[c]) else { continue };
        let name = cat.object_name(c);
        let m1 = induced_matching_map(cat, &first, &sxy.matching, &sx.matching)?;
        let m2 = induced_matching_map(cat, &second, &sxy.matching, &sy.matching)?;
        let mprod = ProductIndex::new(&sx.matching.cone.object, &sy.matching.cone.object)?;
        let mcomp = mprod.pairing(&m1, &m2)?;
        certs.push(Certificate::check(
            format!("matching comparison bijective at {name}"),
            (!mcomp.is_bijective()).then_some("not a bijection"),
        ));
        let lhs = sxy.matching_map()?.then(&mcomp)?;
        let rhs = comparison[c].then(&targets[c].map_product(&sx.matching_map()?, &sy.matching_map()?, &mprod)?)?;
        certs.push(Certificate::check(
            format!("comparison commutes with matching maps at {name}"),
            lhs.first_difference(&rhs),
        ));
    }
    Ok(certs)
}
