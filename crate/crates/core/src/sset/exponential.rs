//! Exponentials `X^A` with `n`-simplices the maps `A × Δ[n] -> X`.
//!
//! Each simplex is stored as the choice key of its map inside a fixed
//! [`HomSearch`], so simplices cost a few words each; full maps are rebuilt on
//! demand by [`Exponential::decode`]. Simplices are named `e<index>` in the
//! canonical enumeration order.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::limits::ProductIndex;
use super::{simplex_operator, simplex_sequences, standard_simplex, HomSearch, SSet, SSetMap, Simplex};
use crate::error::{Error, Result};

pub struct Exponential {
    base: Arc<SSet>,
    exponent: Arc<SSet>,
    object: Arc<SSet>,
    simplices: Vec<Arc<SSet>>,
    products: Vec<ProductIndex>,
    searches: Vec<HomSearch>,
    keys: Vec<Vec<Box<[u32]>>>,
    index: Vec<HashMap<Box<[u32]>, Simplex>>,
    /// `thetas[n][p]`: the `p`-simplices of `Δ[n]` as sequences.
    thetas: Vec<Vec<Vec<Vec<usize>>>>,
    /// Index of the identity `n`-simplex of `Δ[n]`.
    tops: Vec<Simplex>,
}

impl std::fmt::Debug for Exponential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Exponential").field("sizes", &self.object.level_sizes()).finish()
    }
}

/// Component tables of `id_A × theta: A × Δ[p] -> A × Δ[q]`.
fn product_operator(
    products: &[ProductIndex],
    simplices: &[Arc<SSet>],
    p: usize,
    q: usize,
    theta: &[usize],
) -> Result<Vec<Vec<Simplex>>> {
    let op = simplex_operator(&simplices[p], &simplices[q], theta)?;
    let (from, to) = (&products[p], &products[q]);
    Ok((0..=from.object.truncation())
        .map(|l| {
            (0..from.object.level_size(l) as Simplex)
                .map(|x| {
                    let (a, t) = from.split(l, x);
                    to.pair(l, a, op.apply(l, t))
                })
                .collect()
        })
        .collect())
}

fn compose(table: &[Vec<Simplex>], values: &[Vec<Simplex>]) -> Vec<Vec<Simplex>> {
    table.iter().enumerate().map(|(l, row)| row.iter().map(|&x| values[l][x as usize]).collect()).collect()
}

impl Exponential {
    pub fn new(base: &Arc<SSet>, exponent: &Arc<SSet>) -> Result<Self> {
        let m = base.truncation();
        if exponent.truncation() != m {
            return Err(Error::TruncationMismatch(m, exponent.truncation()));
        }
        let simplices: Vec<Arc<SSet>> = (0..=m).map(|n| Arc::new(standard_simplex(n, m))).collect();
        let products =
            simplices.iter().map(|d| ProductIndex::new(exponent, d)).collect::<Result<Vec<_>>>()?;
        let searches =
            products.iter().map(|p| HomSearch::new(&p.object, base)).collect::<Result<Vec<_>>>()?;
        let thetas: Vec<Vec<Vec<Vec<usize>>>> =
            simplices.iter().map(|d| (0..=m).map(|p| simplex_sequences(d, p)).collect()).collect();
        let tops = (0..=m)
            .map(|n| {
                thetas[n][n].iter().position(|t| t.iter().enumerate().all(|(k, &v)| k == v)).unwrap() as Simplex
            })
            .collect();

        let mut keys: Vec<Vec<Box<[u32]>>> = Vec::new();
        let mut index: Vec<HashMap<Box<[u32]>, Simplex>> = Vec::new();
        let mut faces: Vec<Vec<Vec<Simplex>>> = vec![Vec::new()];
        for n in 0..=m {
            let cofaces = (0..if n == 0 { 0 } else { n + 1 })
                .map(|i| {
                    let theta: Vec<usize> = (0..n).map(|k| if k < i { k } else { k + 1 }).collect();
                    product_operator(&products, &simplices, n - 1, n, &theta)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut level_keys: Vec<Box<[u32]>> = Vec::new();
            let mut level_faces: Vec<Vec<Simplex>> = vec![Vec::new(); if n == 0 { 0 } else { n + 1 }];
            let mut failure = None;
            let _ = searches[n].for_each_keyed(|values, key| {
                for (i, table) in cofaces.iter().enumerate() {
                    let restricted = compose(table, values);
                    let face = searches[n - 1]
                        .encode(&restricted)
                        .and_then(|k| index[n - 1].get(k.as_slice()).copied());
                    match face {
                        Some(y) => level_faces[i].push(y),
                        None => {
                            failure = Some(format!("face d{i} of an exponential {n}-simplex"));
                            return ControlFlow::Break(());
                        }
                    }
                }
                level_keys.push(Box::from(key));
                ControlFlow::Continue(())
            });
            if let Some(f) = failure {
                return Err(Error::Internal(f));
            }
            index.push(level_keys.iter().enumerate().map(|(x, k)| (k.clone(), x as Simplex)).collect());
            keys.push(level_keys);
            if n > 0 {
                faces.push(level_faces);
            }
        }
        let mut degeneracies = Vec::new();
        for n in 0..=m {
            if n == m {
                degeneracies.push(Vec::new());
                continue;
            }
            let mut tables = Vec::new();
            for j in 0..=n {
                let theta: Vec<usize> = (0..=n + 1).map(|k| if k <= j { k } else { k - 1 }).collect();
                let table = product_operator(&products, &simplices, n + 1, n, &theta)?;
                let row = keys[n]
                    .iter()
                    .map(|key| {
                        let values = searches[n].decode(key).expect("stored key decodes");
                        let lifted = compose(&table, &values);
                        searches[n + 1]
                            .encode(&lifted)
                            .and_then(|k| index[n + 1].get(k.as_slice()).copied())
                            .ok_or_else(|| Error::Internal(format!("degeneracy s{j} of an exponential {n}-simplex")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                tables.push(row);
            }
            degeneracies.push(tables);
        }
        let sizes = keys.iter().map(Vec::len).collect();
        let object = Arc::new(SSet::from_indexed(m, sizes, faces, degeneracies)?);
        Ok(Self {
            base: base.clone(),
            exponent: exponent.clone(),
            object,
            simplices,
            products,
            searches,
            keys,
            index,
            thetas,
            tops,
        })
    }

    pub fn object(&self) -> &Arc<SSet> {
        &self.object
    }

    pub fn base(&self) -> &Arc<SSet> {
        &self.base
    }

    pub fn exponent(&self) -> &Arc<SSet> {
        &self.exponent
    }

    /// `Δ[n]` as used for the `n`-simplices.
    pub fn standard(&self, n: usize) -> &Arc<SSet> {
        &self.simplices[n]
    }

    /// `A × Δ[n]` with its index arithmetic.
    pub fn product(&self, n: usize) -> &ProductIndex {
        &self.products[n]
    }

    /// The map `A × Δ[n] -> X` of an `n`-simplex.
    pub fn decode(&self, n: usize, f: Simplex) -> Vec<Vec<Simplex>> {
        self.searches[n].decode(&self.keys[n][f as usize]).expect("stored key decodes")
    }

    /// The `n`-simplex of a map `A × Δ[n] -> X`, if it is simplicial.
    pub fn encode(&self, n: usize, components: &[Vec<Simplex>]) -> Option<Simplex> {
        let key = self.searches[n].encode(components)?;
        self.index[n].get(key.as_slice()).copied()
    }

    /// `f(a, ι_n)` for an `n`-simplex `f` and an `n`-simplex `a` of `A`.
    pub fn evaluate_decoded(&self, n: usize, values: &[Vec<Simplex>], a: Simplex) -> Simplex {
        let top = self.tops[n];
        values[n][self.products[n].pair(n, a, top) as usize]
    }

    pub fn evaluate(&self, n: usize, f: Simplex, a: Simplex) -> Simplex {
        self.evaluate_decoded(n, &self.decode(n, f), a)
    }

    /// Evaluation at a vertex `v` of `A`: the map `X^A -> X`.
    pub fn evaluation_at(&self, v: Simplex) -> SSetMap {
        let m = self.object.truncation();
        let components = (0..=m)
            .map(|n| {
                let a = self.exponent.degenerate_vertex(v, n);
                (0..self.object.level_size(n) as Simplex).map(|f| self.evaluate(n, f, a)).collect()
            })
            .collect();
        SSetMap::new_unchecked(self.object.clone(), self.base.clone(), components).expect("evaluation is well-shaped")
    }

    /// The transpose `K -> X^A` of `g: K × A -> X`, given levelwise as
    /// `g(level, k, a)`. Fails if `g` is not simplicial.
    pub fn curry<G>(&self, k_set: &Arc<SSet>, g: G) -> Result<SSetMap>
    where
        G: Fn(usize, Simplex, Simplex) -> Simplex,
    {
        let m = self.object.truncation();
        let mut components = Vec::with_capacity(m + 1);
        for n in 0..=m {
            let prod = &self.products[n];
            let mut row = Vec::with_capacity(k_set.level_size(n));
            for k in 0..k_set.level_size(n) as Simplex {
                let values: Vec<Vec<Simplex>> = (0..=m)
                    .map(|p| {
                        let restricted: Vec<Simplex> =
                            self.thetas[n][p].iter().map(|theta| k_set.act(n, k, theta)).collect();
                        (0..prod.object.level_size(p) as Simplex)
                            .map(|x| {
                                let (a, t) = prod.split(p, x);
                                g(p, restricted[t as usize], a)
                            })
                            .collect()
                    })
                    .collect();
                let f = self.encode(n, &values).ok_or_else(|| {
                    Error::Internal(format!("transpose is not simplicial at {}-simplex {}", n, k_set.name(n, k)))
                })?;
                row.push(f);
            }
            components.push(row);
        }
        SSetMap::new_unchecked(k_set.clone(), self.object.clone(), components)
    }

    /// The constant map `c: X -> X^A`.
    pub fn constant(&self) -> SSetMap {
        self.curry(&self.base, |_, x, _| x).expect("constant maps are simplicial")
    }

    /// `X^A -> X^{A'}` by precomposition with `along: A' -> A`.
    pub fn precompose(&self, along: &SSetMap, onto: &Exponential) -> Result<SSetMap> {
        if !along.target().same_structure(&self.exponent)
            || !along.source().same_structure(&onto.exponent)
            || !self.base.same_structure(&onto.base)
        {
            return Err(Error::Precondition("precomposition does not match exponents".into()));
        }
        let m = self.object.truncation();
        let components = (0..=m)
            .map(|n| {
                let table: Vec<Vec<Simplex>> = (0..=m)
                    .map(|p| {
                        (0..onto.products[n].object.level_size(p) as Simplex)
                            .map(|x| {
                                let (a, t) = onto.products[n].split(p, x);
                                self.products[n].pair(p, along.apply(p, a), t)
                            })
                            .collect()
                    })
                    .collect();
                (0..self.object.level_size(n) as Simplex)
                    .map(|f| {
                        let values = compose(&table, &self.decode(n, f));
                        onto.encode(n, &values).ok_or_else(|| Error::Internal("precomposition left the exponential".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SSetMap::new_unchecked(self.object.clone(), onto.object.clone(), components)
    }

    /// `X^A -> Y^A` by postcomposition with `h: X -> Y`.
    pub fn postcompose(&self, h: &SSetMap, onto: &Exponential) -> Result<SSetMap> {
        if !h.source().same_structure(&self.base)
            || !h.target().same_structure(&onto.base)
            || !self.exponent.same_structure(&onto.exponent)
        {
            return Err(Error::Precondition("postcomposition does not match bases".into()));
        }
        let m = self.object.truncation();
        let components = (0..=m)
            .map(|n| {
                (0..self.object.level_size(n) as Simplex)
                    .map(|f| {
                        let values: Vec<Vec<Simplex>> = self
                            .decode(n, f)
                            .iter()
                            .enumerate()
                            .map(|(p, row)| row.iter().map(|&x| h.apply(p, x)).collect())
                            .collect();
                        onto.encode(n, &values)
                            .ok_or_else(|| Error::Internal("postcomposition left the exponential".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SSetMap::new_unchecked(self.object.clone(), onto.object.clone(), components)
    }

    /// The `n`-simplex of `onto` obtained by applying `h(level, x)` to every
    /// value of `f`; `None` if `h` is undefined somewhere or the result is not simplicial.
    pub fn transport<H>(&self, n: usize, f: Simplex, onto: &Exponential, h: H) -> Option<Simplex>
    where
        H: Fn(usize, Simplex) -> Option<Simplex>,
    {
        let values = self
            .decode(n, f)
            .iter()
            .enumerate()
            .map(|(p, row)| row.iter().map(|&x| h(p, x)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        onto.encode(n, &values)
    }

    /// Monotone sequences for the `p`-simplices of `Δ[n]`.
    pub fn thetas(&self, n: usize, p: usize) -> &[Vec<usize>] {
        &self.thetas[n][p]
    }
}
