//! Functors from a finite Reedy category to truncated simplicial sets.

use std::sync::Arc;

use super::category::{Morphism, ReedyCategory};
use crate::error::{Error, Result};
use crate::sset::limits::ProductIndex;
use crate::sset::{kan_check, FibrationReport, SSet, SSetMap};

/// Read access to a functor that may be defined only on part of the category.
pub trait PartialFunctor {
    fn category(&self) -> &ReedyCategory;
    fn truncation(&self) -> usize;
    fn value(&self, object: usize) -> Option<&Arc<SSet>>;
    fn map(&self, f: Morphism) -> Option<&SSetMap>;

    fn require_value(&self, object: usize) -> Result<&Arc<SSet>> {
        self.value(object)
            .ok_or_else(|| Error::Missing(format!("value at {}", self.category().object_name(object))))
    }

    fn require_map(&self, f: Morphism) -> Result<&SSetMap> {
        self.map(f).ok_or_else(|| Error::Missing(format!("map for {}", self.category().describe(f))))
    }
}

#[derive(Clone)]
pub struct Diagram {
    category: Arc<ReedyCategory>,
    values: Vec<Arc<SSet>>,
    maps: Vec<SSetMap>,
    kan: Vec<Option<FibrationReport>>,
}

impl std::fmt::Debug for Diagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sizes: Vec<_> = self.values.iter().map(|v| v.level_sizes().to_vec()).collect();
        f.debug_struct("Diagram").field("values", &sizes).finish()
    }
}

impl PartialFunctor for Diagram {
    fn category(&self) -> &ReedyCategory {
        &self.category
    }

    fn truncation(&self) -> usize {
        self.values.first().map_or(0, |v| v.truncation())
    }

    fn value(&self, object: usize) -> Option<&Arc<SSet>> {
        self.values.get(object)
    }

    fn map(&self, f: Morphism) -> Option<&SSetMap> {
        self.maps.get(f)
    }
}

impl Diagram {
    /// A diagram from its values and one map per generator; every morphism is
    /// assigned the composite along its word, then functoriality is checked on
    /// the full composition table.
    pub fn new(category: Arc<ReedyCategory>, values: Vec<Arc<SSet>>, generator_maps: Vec<SSetMap>) -> Result<Self> {
        if values.len() != category.object_count() {
            return Err(Error::Missing(format!("{} values for {} objects", values.len(), category.object_count())));
        }
        if generator_maps.len() != category.generator_count() {
            return Err(Error::Missing("a map for every generator".into()));
        }
        let m = values.first().map_or(0, |v| v.truncation());
        for v in &values {
            if v.truncation() != m {
                return Err(Error::TruncationMismatch(m, v.truncation()));
            }
        }
        for (g, map) in generator_maps.iter().enumerate() {
            let data = category.morphism(category.generator_morphism(g));
            if !map.source().same_structure(&values[data.source]) || !map.target().same_structure(&values[data.target])
            {
                return Err(Error::Precondition(format!(
                    "map for {} does not match its endpoint values",
                    category.generator_name(g)
                )));
            }
        }
        let maps = (0..category.morphisms().len())
            .map(|f| {
                let data = category.morphism(f);
                let mut map = SSetMap::identity(&values[data.source]);
                for &g in &data.word {
                    map = map.then(&generator_maps[g])?;
                }
                map.with_endpoints(values[data.source].clone(), values[data.target].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_morphism_maps(category, values, maps)
    }

    /// A diagram from a map for every morphism, checked for functoriality.
    pub fn from_morphism_maps(category: Arc<ReedyCategory>, values: Vec<Arc<SSet>>, maps: Vec<SSetMap>) -> Result<Self> {
        let d = Self { kan: vec![None; values.len()], category, values, maps };
        if let Some(w) = d.functoriality_violation() {
            return Err(Error::NonCommuting(w));
        }
        Ok(d)
    }

    /// The first composable pair or identity on which the assignment is not functorial.
    pub fn functoriality_violation(&self) -> Option<String> {
        let c = &self.category;
        for o in 0..c.object_count() {
            let id = SSetMap::identity(&self.values[o]);
            if let Some(d) = self.maps[c.identity(o)].first_difference(&id) {
                return Some(format!("identity on {}: {d}", c.object_name(o)));
            }
        }
        for a in 0..c.morphisms().len() {
            for b in 0..c.morphisms().len() {
                if let Some(ab) = c.compose(a, b) {
                    let composite = self.maps[a].then(&self.maps[b]).ok()?;
                    if let Some(d) = self.maps[ab].first_difference(&composite) {
                        return Some(format!("{} then {}: {d}", c.describe(a), c.describe(b)));
                    }
                }
            }
        }
        None
    }

    pub fn category_arc(&self) -> &Arc<ReedyCategory> {
        &self.category
    }

    pub fn values(&self) -> &[Arc<SSet>] {
        &self.values
    }

    pub fn maps(&self) -> &[SSetMap] {
        &self.maps
    }

    pub fn generator_map(&self, g: usize) -> &SSetMap {
        &self.maps[self.category.generator_morphism(g)]
    }

    /// Runs `kan_check` on every value and records the reports.
    pub fn certify_kan(&mut self, check_dim: Option<usize>) -> Result<()> {
        for (o, v) in self.values.iter().enumerate() {
            let mut report = kan_check(v, check_dim)?;
            report.map = format!("value at {}", self.category.object_name(o));
            self.kan[o] = Some(report);
        }
        Ok(())
    }

    pub fn kan_reports(&self) -> &[Option<FibrationReport>] {
        &self.kan
    }

    /// Fails unless every value carries a positive Kan certificate.
    pub fn require_projective_fibrant(&self) -> Result<()> {
        for (o, r) in self.kan.iter().enumerate() {
            match r {
                None => {
                    return Err(Error::NotKan(format!(
                        "no Kan certificate for the value at {}",
                        self.category.object_name(o)
                    )))
                }
                Some(r) if !r.verdict => return Err(Error::NotKan(r.to_string())),
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// The restriction to the full subcategory of objects of degree `<= k`.
    pub fn restrict_to_degree(&self, k: usize) -> Result<Diagram> {
        let sub = Arc::new(self.category.restrict_to_degree(k)?);
        let index = |o: usize| self.category.object_index(sub.object_name(o)).expect("kept object");
        let values: Vec<Arc<SSet>> = (0..sub.object_count()).map(|o| self.values[index(o)].clone()).collect();
        let maps = (0..sub.generator_count())
            .map(|g| {
                let name = sub.generator_name(g);
                self.generator_map(self.category.generator_index(name).expect("kept generator")).clone()
            })
            .collect();
        let mut d = Diagram::new(sub.clone(), values, maps)?;
        for o in 0..sub.object_count() {
            d.kan[o] = self.kan[index(o)].clone();
        }
        Ok(d)
    }

    /// The objectwise product, with the product indices used per object.
    pub fn product(&self, other: &Diagram) -> Result<(Diagram, Vec<ProductIndex>)> {
        if !Arc::ptr_eq(&self.category, &other.category) {
            return Err(Error::Precondition("product of diagrams over different categories".into()));
        }
        let products = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| ProductIndex::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        let values = products.iter().map(|p| p.object.clone()).collect();
        let maps = (0..self.category.generator_count())
            .map(|g| {
                let data = self.category.morphism(self.category.generator_morphism(g));
                products[data.source].map_product(
                    self.generator_map(g),
                    other.generator_map(g),
                    &products[data.target],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let mut d = Diagram::new(self.category.clone(), values, maps)?;
        for o in 0..d.kan.len() {
            if let (Some(a), Some(b)) = (&self.kan[o], &other.kan[o]) {
                if a.verdict && b.verdict {
                    // products of Kan complexes are Kan; recompute to record an honest report
                    let mut r = kan_check(&d.values[o], Some(a.check_dim))?;
                    r.map = format!("value at {}", self.category.object_name(o));
                    d.kan[o] = Some(r);
                }
            }
        }
        Ok((d, products))
    }
}

/// A natural transformation between diagrams over the same category.
#[derive(Clone, Debug)]
pub struct DiagramMap {
    pub components: Vec<SSetMap>,
}

impl DiagramMap {
    /// Checks naturality on every morphism.
    pub fn new(source: &dyn PartialFunctor, target: &dyn PartialFunctor, components: Vec<SSetMap>) -> Result<Self> {
        let c = source.category();
        for f in 0..c.morphisms().len() {
            let data = c.morphism(f);
            let left = source.require_map(f)?.then(&components[data.target])?;
            let right = components[data.source].then(target.require_map(f)?)?;
            if let Some(d) = left.first_difference(&right) {
                return Err(Error::NonCommuting(format!("naturality at {}: {d}", c.describe(f))));
            }
        }
        Ok(Self { components })
    }

    pub fn identity(d: &Diagram) -> Self {
        Self { components: d.values.iter().map(SSetMap::identity).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reedy::shapes;
    use crate::sset::{indiscrete_nerve, point};

    fn cospan(x: Arc<SSet>, y: Arc<SSet>, z: Arc<SSet>, f: SSetMap, g: SSetMap) -> Result<Diagram> {
        let c = Arc::new(ReedyCategory::new(shapes::cospan()).unwrap());
        Diagram::new(c, vec![x, y, z], vec![f, g])
    }

    #[test]
    fn cospan_diagram_builds_and_restricts() {
        let y = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let p = Arc::new(point(2));
        let v0 = SSetMap::vertex(&p, &y, 0).unwrap();
        let v1 = SSetMap::vertex(&p, &y, 1).unwrap();
        let mut d = cospan(p.clone(), y.clone(), p.clone(), v0, v1).unwrap();
        d.certify_kan(None).unwrap();
        d.require_projective_fibrant().unwrap();
        let r = d.restrict_to_degree(0).unwrap();
        assert_eq!(r.values().len(), 1);
        assert!(r.values()[0].same_structure(&y));
    }

    #[test]
    fn missing_kan_certificate_is_reported() {
        let y = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let id = SSetMap::identity(&y);
        let d = cospan(y.clone(), y.clone(), y.clone(), id.clone(), id).unwrap();
        assert!(matches!(d.require_projective_fibrant(), Err(Error::NotKan(_))));
    }

    #[test]
    fn mismatched_generator_is_rejected() {
        let y = Arc::new(indiscrete_nerve(2, 2).unwrap());
        let p = Arc::new(point(2));
        let v0 = SSetMap::vertex(&p, &y, 0).unwrap();
        assert!(cospan(y.clone(), y.clone(), p, v0.clone(), v0).is_err());
    }
}
