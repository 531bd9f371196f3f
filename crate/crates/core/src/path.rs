//! Path objects `X^I` and `X^Λ`, right homotopies, the factorization of a map
//! through a path-space pullback, homotopy pullbacks, and the retraction
//! homotopy `D_B: B^I -> (B^I)^I`.

use std::sync::Arc;

use crate::certificate::{Certificate, CertificateSet};
use crate::error::{Error, Result};
use crate::sset::limits::ProductIndex;
use crate::sset::{
    fibration_check, finite_limit, interval, interval_flip, kan_check, lambda, pullback, Exponential, LimitCone, LimitShape, SSet,
    SSetMap, Simplex,
};

/// A factorization `X -> P -> X × X` of the diagonal.
pub struct PathObjectData {
    pub base: Arc<SSet>,
    pub space: Arc<Exponential>,
    pub insertion: SSetMap,
    pub source: SSetMap,
    pub target: SSetMap,
    pub certificates: CertificateSet,
}

impl std::fmt::Debug for PathObjectData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PathObjectData").field("space", &self.space.object().level_sizes()).finish()
    }
}

impl PathObjectData {
    fn from_exponential(base: &Arc<SSet>, space: Exponential, start: Simplex, end: Simplex) -> Self {
        let insertion = space.constant();
        let source = space.evaluation_at(start);
        let target = space.evaluation_at(end);
        Self {
            base: base.clone(),
            space: Arc::new(space),
            insertion,
            source,
            target,
            certificates: CertificateSet::new(),
        }
    }

    /// `X^I` with `c`, `s`, `t`, without certificates or a Kan precondition.
    pub fn interval(base: &Arc<SSet>) -> Result<Self> {
        let i = interval(base.truncation());
        Ok(Self::from_exponential(base, Exponential::new(base, &i)?, 0, 1))
    }

    /// `X^Λ` with `λ`, `σ`, `τ`, without certificates or a Kan precondition.
    pub fn lambda(base: &Arc<SSet>) -> Result<Self> {
        let (l, i1, i2) = lambda(base.truncation());
        let (start, end) = (i1.apply(0, 0), i2.apply(0, 1));
        Ok(Self::from_exponential(base, Exponential::new(base, &l)?, start, end))
    }

    pub fn object(&self) -> &Arc<SSet> {
        self.space.object()
    }

    /// Checks `s∘d = t∘d = id`, injectivity of `d`, and that `⟨s,t⟩` is a fibration.
    pub fn certify(&mut self, check_dim: Option<usize>) -> Result<()> {
        let id = SSetMap::identity(&self.base);
        let mut certs = CertificateSet::new();
        certs.push(Certificate::check("s∘c = id", self.insertion.then(&self.source)?.first_difference(&id)));
        certs.push(Certificate::check("t∘c = id", self.insertion.then(&self.target)?.first_difference(&id)));
        let injective = self.insertion.is_injective();
        certs.push(Certificate::check("c levelwise injective", (!injective).then_some("collision")));
        let square = ProductIndex::new(&self.base, &self.base)?;
        let endpoints = square.pairing(&self.source, &self.target)?;
        let diagonal = square.pairing(&id, &id)?;
        certs.push(Certificate::check("⟨s,t⟩∘c = diagonal", self.insertion.then(&endpoints)?.first_difference(&diagonal)));
        let report = fibration_check(&endpoints, check_dim)?;
        certs.push(Certificate::check("⟨s,t⟩ is a fibration", (!report.verdict).then(|| report.to_string())));
        self.certificates = certs;
        Ok(())
    }
}

fn require_kan(x: &Arc<SSet>, what: &str) -> Result<()> {
    let report = kan_check(x, None)?;
    if !report.verdict {
        return Err(Error::NotKan(format!("{what}: {report}")));
    }
    Ok(())
}

/// The interval path object of a Kan complex, with its certificate bundle.
pub fn path_i(x: &Arc<SSet>) -> Result<PathObjectData> {
    require_kan(x, "path object base")?;
    let mut p = PathObjectData::interval(x)?;
    p.certify(None)?;
    Ok(p)
}

/// The `Λ` path object of a Kan complex, with its certificate bundle.
pub fn path_lambda(x: &Arc<SSet>) -> Result<PathObjectData> {
    require_kan(x, "path object base")?;
    let mut p = PathObjectData::lambda(x)?;
    p.certify(None)?;
    Ok(p)
}

/// A homotopy `h: A × I -> B` from `from` to `to`, stored uncurried; the
/// transpose `A -> B^I` is [`RightHomotopy::curried`].
#[derive(Clone)]
pub struct RightHomotopy {
    pub cylinder: ProductIndex,
    pub map: SSetMap,
    pub from: SSetMap,
    pub to: SSetMap,
}

impl RightHomotopy {
    /// Builds `h` from its values `h(level, a, i)`; fails if not simplicial.
    pub fn from_fn<H>(from: &SSetMap, to: &SSetMap, h: H) -> Result<Self>
    where
        H: Fn(usize, Simplex, Simplex) -> Simplex,
    {
        let a = from.source();
        let cylinder = ProductIndex::new(a, &interval(a.truncation()))?;
        let components = (0..=a.truncation())
            .map(|n| {
                (0..cylinder.object.level_size(n) as Simplex)
                    .map(|x| {
                        let (a, i) = cylinder.split(n, x);
                        h(n, a, i)
                    })
                    .collect()
            })
            .collect();
        let map = SSetMap::new(cylinder.object.clone(), from.target().clone(), components)?;
        Ok(Self { cylinder, map, from: from.clone(), to: to.clone() })
    }

    /// The constant homotopy on `f`.
    pub fn constant(f: &SSetMap) -> Result<Self> {
        Self::from_fn(f, f, |n, a, _| f.apply(n, a))
    }

    pub fn apply(&self, n: usize, a: Simplex, i: Simplex) -> Simplex {
        self.map.apply(n, self.cylinder.pair(n, a, i))
    }

    /// The end of the homotopy at vertex `v` of `I`.
    pub fn end(&self, v: Simplex) -> Result<SSetMap> {
        let a = self.from.source();
        let i = &self.cylinder.right;
        let components = (0..=a.truncation())
            .map(|n| {
                let iv = i.degenerate_vertex(v, n);
                (0..a.level_size(n) as Simplex).map(|x| self.apply(n, x, iv)).collect()
            })
            .collect();
        SSetMap::new(a.clone(), self.map.target().clone(), components)
    }

    /// The transpose `A -> B^I` into a path object on `B`.
    pub fn curried(&self, path: &PathObjectData) -> Result<SSetMap> {
        path.space.curry(self.from.source(), |n, a, i| self.apply(n, a, i))
    }
}

/// Checks both endpoints of a right homotopy levelwise.
pub fn verify_right_homotopy(h: &RightHomotopy) -> Result<CertificateSet> {
    let mut certs = CertificateSet::new();
    certs.push(Certificate::check("s∘h = f", h.end(0)?.first_difference(&h.from)));
    certs.push(Certificate::check("t∘h = g", h.end(1)?.first_difference(&h.to)));
    Ok(certs)
}

/// The same check through the path object: `s∘h = f` and `t∘h = g` for the
/// transpose `h: A -> B^I`.
pub fn verify_right_homotopy_curried(h: &RightHomotopy, path: &PathObjectData) -> Result<CertificateSet> {
    let curried = h.curried(path)?;
    let mut certs = CertificateSet::new();
    certs.push(Certificate::check("s∘h = f", curried.then(&path.source)?.first_difference(&h.from)));
    certs.push(Certificate::check("t∘h = g", curried.then(&path.target)?.first_difference(&h.to)));
    Ok(certs)
}

/// `Q(i, j) = i × j` on `nerve(I[1])`, as a levelwise table.
#[derive(Clone, Debug)]
pub struct MinTable {
    table: Vec<Vec<Simplex>>,
    sizes: Vec<usize>,
}

impl MinTable {
    pub fn new(m: usize) -> Self {
        let i = interval(m);
        let mut table = Vec::new();
        let mut sizes = Vec::new();
        for n in 0..=m {
            let size = i.level_size(n);
            let names = i.names_at(n);
            let mut row = Vec::with_capacity(size * size);
            for a in &names {
                for b in &names {
                    let min: String = a.chars().zip(b.chars()).map(|(x, y)| if x == '1' && y == '1' { '1' } else { '0' }).collect();
                    row.push(i.lookup(n, &min).expect("sequence"));
                }
            }
            table.push(row);
            sizes.push(size);
        }
        Self { table, sizes }
    }

    #[inline]
    pub fn min(&self, n: usize, a: Simplex, b: Simplex) -> Simplex {
        self.table[n][a as usize * self.sizes[n] + b as usize]
    }
}

/// Uncurried `D_B`: the `n`-simplex of `B^I` obtained from the path `f` and the
/// outer coordinate `j`, namely `(i', θ) ↦ f(Q(i', θ^*j), θ)`.
pub fn d_tilde(paths: &Exponential, q: &MinTable, n: usize, f: Simplex, j: Simplex) -> Simplex {
    let values = paths.decode(n, f);
    let i = paths.exponent();
    let prod = paths.product(n);
    let m = paths.object().truncation();
    let new_values: Vec<Vec<Simplex>> = (0..=m)
        .map(|p| {
            let js: Vec<Simplex> = paths.thetas(n, p).iter().map(|theta| i.act(n, j, theta)).collect();
            (0..prod.object.level_size(p) as Simplex)
                .map(|x| {
                    let (ip, t) = prod.split(p, x);
                    values[p][prod.pair(p, q.min(p, ip, js[t as usize]), t) as usize]
                })
                .collect()
        })
        .collect();
    paths.encode(n, &new_values).expect("D preserves simplicial maps")
}

/// `D_B` materialized as a map `B^I -> (B^I)^I`, with its certificates.
pub struct RetractionHomotopy {
    pub path: PathObjectData,
    pub outer: PathObjectData,
    pub map: SSetMap,
    pub certificates: CertificateSet,
}

/// Builds `D_B` and checks `s∘D = c∘s`, `t∘D = id` and `D∘c = c∘c`.
pub fn retraction_homotopy_d(b: &Arc<SSet>) -> Result<RetractionHomotopy> {
    require_kan(b, "retraction homotopy base")?;
    let path = PathObjectData::interval(b)?;
    let outer = PathObjectData::interval(path.object())?;
    let q = MinTable::new(b.truncation());
    let map = outer.space.curry(path.object(), |n, f, j| d_tilde(&path.space, &q, n, f, j))?;
    let mut certs = CertificateSet::new();
    let cs = path.source.then(&path.insertion)?;
    certs.push(Certificate::check("s∘D = c∘s", map.then(&outer.source)?.first_difference(&cs)));
    let id = SSetMap::identity(path.object());
    certs.push(Certificate::check("t∘D = id", map.then(&outer.target)?.first_difference(&id)));
    let cc = path.insertion.then(&outer.insertion)?;
    certs.push(Certificate::check("D∘c = c∘c", path.insertion.then(&map)?.first_difference(&cc)));
    Ok(RetractionHomotopy { path, outer, map, certificates: certs })
}

/// `X -> X ×_Y Y^I -> Y` with its homotopy data.
pub struct BrownFactorization {
    pub path: PathObjectData,
    pub cone: LimitCone,
    pub j: SSetMap,
    pub q: SSetMap,
    pub projection: SSetMap,
    pub homotopy: RightHomotopy,
    pub certificates: CertificateSet,
}

/// Factors `f` as `q ∘ j` through `N = X ×_Y Y^I`.
pub fn brown_factorize(f: &SSetMap) -> Result<BrownFactorization> {
    require_kan(f.source(), "factorization source")?;
    require_kan(f.target(), "factorization target")?;
    let path = PathObjectData::interval(f.target())?;
    let cone = pullback(f, &path.source)?;
    let projection = cone.projections[0].clone();
    let q = cone.projections[1].then(&path.target)?;
    let j = cone.induced(f.source(), &[SSetMap::identity(f.source()), f.then(&path.insertion)?])?;
    let min = MinTable::new(f.source().truncation());
    let retract = projection.then(&j)?;
    let homotopy = RightHomotopy::from_fn(&retract, &SSetMap::identity(&cone.object), |n, r, i| {
        let t = cone.tuple(n, r);
        let gamma = d_tilde(&path.space, &min, n, t[1], i);
        cone.index_of(n, &[t[0], gamma]).expect("path starts over x")
    })?;
    let mut certs = CertificateSet::new();
    certs.push(Certificate::check("q∘j = f", j.then(&q)?.first_difference(f)));
    certs.push(Certificate::check(
        "projection∘j = id",
        j.then(&projection)?.first_difference(&SSetMap::identity(f.source())),
    ));
    certs.push(Certificate::check("j levelwise injective", (!j.is_injective()).then_some("collision")));
    let report = fibration_check(&q, None)?;
    certs.push(Certificate::check("q is a fibration", (!report.verdict).then(|| report.to_string())));
    certs.extend(verify_right_homotopy(&homotopy)?);
    Ok(BrownFactorization { path, cone, j, q, projection, homotopy, certificates: certs })
}

/// `X ×_Y Y^Λ ×_Y Z` with its cone `(x, λ, z)`.
pub struct HomotopyPullback {
    pub path: PathObjectData,
    pub cone: LimitCone,
}

pub fn homotopy_pullback(f: &SSetMap, g: &SSetMap) -> Result<HomotopyPullback> {
    if !f.target().same_structure(g.target()) {
        return Err(Error::Precondition("cospan legs have different targets".into()));
    }
    for (x, what) in [(f.source(), "first leg"), (f.target(), "apex"), (g.source(), "second leg")] {
        require_kan(x, what)?;
    }
    let path = PathObjectData::lambda(f.target())?;
    let mut shape = LimitShape::new(vec![f.source().clone(), path.object().clone(), g.source().clone()]);
    shape.equation(0, f.clone(), 1, path.source.clone());
    shape.equation(1, path.target.clone(), 2, g.clone());
    let cone = finite_limit(&shape)?;
    Ok(HomotopyPullback { path, cone })
}

/// Compares the `Λ`-model with the two-sided interval model
/// `(X ×_Y Y^I) ×_Y (Z ×_Y Y^I)` (glued along the path targets) via
/// `(x, λ, z) ↦ ((x, λ|first), (z, reverse(λ|second)))`.
pub fn homotopy_pullback_comparison(f: &SSetMap, g: &SSetMap, hp: &HomotopyPullback) -> Result<Certificate> {
    let m = f.source().truncation();
    let left = brown_factorize(f)?;
    let right = brown_factorize(g)?;
    let glued = pullback(&left.q, &right.q)?;
    let (l, i1, i2) = lambda(m);
    let i = interval(m);
    let flip = interval_flip(m);
    let second_arm = flip.then(&i2)?;
    let restrict_first = hp.path.space.precompose(&i1.with_endpoints(i.clone(), l.clone())?, &left.path.space)?;
    let restrict_second =
        hp.path.space.precompose(&second_arm.with_endpoints(i.clone(), l.clone())?, &right.path.space)?;
    let components = (0..=m)
        .map(|n| {
            (0..hp.cone.object.level_size(n) as Simplex)
                .map(|w| {
                    let t = hp.cone.tuple(n, w);
                    let a = left.cone.index_of(n, &[t[0], restrict_first.apply(n, t[1])]);
                    let b = right.cone.index_of(n, &[t[2], restrict_second.apply(n, t[1])]);
                    a.zip(b)
                        .and_then(|(a, b)| glued.index_of(n, &[a, b]))
                        .ok_or_else(|| Error::Internal("comparison leaves the glued pullback".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let comparison = SSetMap::new(hp.cone.object.clone(), glued.object.clone(), components)?;
    Ok(Certificate::check(
        "Λ-model ≅ glued interval model",
        (!comparison.is_bijective()).then(|| {
            format!("levels {:?} vs {:?}", hp.cone.object.level_sizes(), glued.object.level_sizes())
        }),
    ))
}
