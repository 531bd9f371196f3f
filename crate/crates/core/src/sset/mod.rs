//! Levelwise-finite simplicial sets recorded up to a truncation dimension.
//!
//! A [`SSet`] stores every simplex of dimension `0..=m` explicitly, degenerate
//! ones included, and denotes the `m`-coskeletal extension of that data. All
//! map-equality and hom-set computations work on the truncation.

pub mod document;
pub mod exponential;
pub mod hom;
pub mod lifting;
pub mod limits;
pub mod map;

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub use exponential::Exponential;
pub use hom::{enumerate_maps, find_isomorphism, HomSearch};
pub use lifting::{fibration_check, kan_check, solve_lift, FibrationReport, HornResult, LiftingProblem};
pub use limits::{finite_limit, product, pullback, LimitCone, LimitShape};
pub use map::SSetMap;

/// Index of a simplex within its level.
pub type Simplex = u32;

#[derive(Debug, Clone)]
enum Names {
    Explicit(Vec<Vec<String>>),
    /// Simplices are named `e<index>`; used for exponentials.
    Indexed,
}

/// A truncated simplicial set.
pub struct SSet {
    truncation: usize,
    sizes: Vec<usize>,
    names: Names,
    /// `faces[n][i][x]` for `1 <= n <= m`, `0 <= i <= n`.
    faces: Vec<Vec<Vec<Simplex>>>,
    /// `degeneracies[n][j][x]` for `0 <= n < m`, `0 <= j <= n`.
    degeneracies: Vec<Vec<Vec<Simplex>>>,
    skeleton: OnceLock<Skeleton>,
    face_index: OnceLock<Vec<HashMap<Box<[Simplex]>, Vec<Simplex>>>>,
    name_index: OnceLock<Vec<HashMap<String, Simplex>>>,
}

/// Nondegenerate simplices and a chosen degeneracy decomposition of the rest.
#[derive(Debug)]
pub(crate) struct Skeleton {
    pub nondegenerate: Vec<Vec<Simplex>>,
    /// For a degenerate `x` at level `n`: `(j, y)` with `s_j y = x`.
    pub degenerate_of: Vec<Vec<Option<(usize, Simplex)>>>,
}

impl fmt::Debug for SSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SSet")
            .field("truncation", &self.truncation)
            .field("sizes", &self.sizes)
            .finish()
    }
}

/// A violated simplicial identity, with the simplex that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IdentityViolation {
    pub identity: String,
    pub level: usize,
    pub simplex: String,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails on {}-simplex {}", self.identity, self.level, self.simplex)
    }
}

impl SSet {
    /// Assembles a simplicial set from raw tables, checking only their shapes.
    ///
    /// Simplicial identities are not checked here; use [`SSet::validate`].
    pub fn from_parts(
        truncation: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<Simplex>>>,
        degeneracies: Vec<Vec<Vec<Simplex>>>,
    ) -> Result<Self> {
        let sizes: Vec<usize> = names.iter().map(Vec::len).collect();
        let set = Self::from_tables(truncation, sizes, Names::Explicit(names), faces, degeneracies)?;
        for (n, level) in set.explicit_names().unwrap_or(&[]).iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for name in level {
                if !seen.insert(name.as_str()) {
                    return Err(Error::Malformed(format!("duplicate identifier {name:?} at level {n}")));
                }
            }
        }
        Ok(set)
    }

    pub(crate) fn from_indexed(
        truncation: usize,
        sizes: Vec<usize>,
        faces: Vec<Vec<Vec<Simplex>>>,
        degeneracies: Vec<Vec<Vec<Simplex>>>,
    ) -> Result<Self> {
        Self::from_tables(truncation, sizes, Names::Indexed, faces, degeneracies)
    }

    fn from_tables(
        truncation: usize,
        sizes: Vec<usize>,
        names: Names,
        faces: Vec<Vec<Vec<Simplex>>>,
        degeneracies: Vec<Vec<Vec<Simplex>>>,
    ) -> Result<Self> {
        let m = truncation;
        if sizes.len() != m + 1 || faces.len() != m + 1 || degeneracies.len() != m + 1 {
            return Err(Error::Malformed(format!("expected {} levels", m + 1)));
        }
        for n in 0..=m {
            let expected_faces = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expected_faces {
                return Err(Error::Malformed(format!("level {n} needs {expected_faces} face tables")));
            }
            for (i, table) in faces[n].iter().enumerate() {
                if table.len() != sizes[n] || table.iter().any(|&y| y as usize >= sizes[n - 1]) {
                    return Err(Error::Malformed(format!("face d_{i} at level {n} is not total")));
                }
            }
            let expected_degens = if n == m { 0 } else { n + 1 };
            if degeneracies[n].len() != expected_degens {
                return Err(Error::Malformed(format!(
                    "level {n} needs {expected_degens} degeneracy tables"
                )));
            }
            for (j, table) in degeneracies[n].iter().enumerate() {
                if table.len() != sizes[n] || table.iter().any(|&y| y as usize >= sizes[n + 1]) {
                    return Err(Error::Malformed(format!("degeneracy s_{j} at level {n} is not total")));
                }
            }
        }
        Ok(Self {
            truncation,
            sizes,
            names,
            faces,
            degeneracies,
            skeleton: OnceLock::new(),
            face_index: OnceLock::new(),
            name_index: OnceLock::new(),
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.sizes[n]
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.sizes
    }

    #[inline]
    pub fn face(&self, n: usize, i: usize, x: Simplex) -> Simplex {
        self.faces[n][i][x as usize]
    }

    #[inline]
    pub fn degeneracy(&self, n: usize, j: usize, x: Simplex) -> Simplex {
        self.degeneracies[n][j][x as usize]
    }

    pub fn name(&self, n: usize, x: Simplex) -> Cow<'_, str> {
        match &self.names {
            Names::Explicit(names) => Cow::Borrowed(names[n][x as usize].as_str()),
            Names::Indexed => Cow::Owned(format!("e{x}")),
        }
    }

    fn explicit_names(&self) -> Option<&[Vec<String>]> {
        match &self.names {
            Names::Explicit(names) => Some(names),
            Names::Indexed => None,
        }
    }

    pub fn names_at(&self, n: usize) -> Vec<String> {
        (0..self.sizes[n] as Simplex).map(|x| self.name(n, x).into_owned()).collect()
    }

    pub fn lookup(&self, n: usize, name: &str) -> Option<Simplex> {
        let index = self.name_index.get_or_init(|| {
            (0..=self.truncation)
                .map(|n| {
                    (0..self.sizes[n] as Simplex)
                        .map(|x| (self.name(n, x).into_owned(), x))
                        .collect()
                })
                .collect()
        });
        index.get(n)?.get(name).copied()
    }

    /// The image of `x` under the operator of a monotone map `theta: [p] -> [n]`,
    /// given as its sequence of values.
    pub fn act(&self, n: usize, x: Simplex, theta: &[usize]) -> Simplex {
        debug_assert!(!theta.is_empty());
        // Faces for the vertices missed by theta, highest first.
        let mut level = n;
        let mut y = x;
        for i in (0..=n).rev() {
            if !theta.contains(&i) {
                y = self.face(level, i, y);
                level -= 1;
            }
        }
        // Degeneracies at every repeated position, left to right.
        for t in 0..theta.len() - 1 {
            if theta[t] == theta[t + 1] {
                y = self.degeneracy(level, t, y);
                level += 1;
            }
        }
        y
    }

    /// The degenerate `level`-simplex on a vertex.
    pub fn degenerate_vertex(&self, vertex: Simplex, level: usize) -> Simplex {
        let mut y = vertex;
        for n in 0..level {
            y = self.degeneracy(n, 0, y);
        }
        y
    }

    /// The `k`-th vertex of an `n`-simplex.
    pub fn vertex(&self, n: usize, x: Simplex, k: usize) -> Simplex {
        self.act(n, x, &[k])
    }

    pub fn is_degenerate(&self, n: usize, x: Simplex) -> bool {
        self.skeleton().degenerate_of[n][x as usize].is_some()
    }

    pub(crate) fn skeleton(&self) -> &Skeleton {
        self.skeleton.get_or_init(|| {
            let m = self.truncation;
            let mut degenerate_of: Vec<Vec<Option<(usize, Simplex)>>> =
                self.sizes.iter().map(|&s| vec![None; s]).collect();
            for n in 0..m {
                for j in 0..=n {
                    for y in 0..self.sizes[n] as Simplex {
                        let x = self.degeneracy(n, j, y) as usize;
                        if degenerate_of[n + 1][x].is_none() {
                            degenerate_of[n + 1][x] = Some((j, y));
                        }
                    }
                }
            }
            let nondegenerate = degenerate_of
                .iter()
                .map(|level| {
                    level
                        .iter()
                        .enumerate()
                        .filter(|(_, d)| d.is_none())
                        .map(|(x, _)| x as Simplex)
                        .collect()
                })
                .collect();
            Skeleton { nondegenerate, degenerate_of }
        })
    }

    /// Simplices at level `n >= 1` grouped by their tuple of faces.
    pub(crate) fn simplices_with_faces(&self, n: usize, faces: &[Simplex]) -> &[Simplex] {
        let index = self.face_index.get_or_init(|| {
            (0..=self.truncation)
                .map(|n| {
                    let mut map: HashMap<Box<[Simplex]>, Vec<Simplex>> = HashMap::new();
                    if n > 0 {
                        for x in 0..self.sizes[n] as Simplex {
                            let key: Box<[Simplex]> = (0..=n).map(|i| self.face(n, i, x)).collect();
                            map.entry(key).or_default().push(x);
                        }
                    }
                    map
                })
                .collect()
        });
        index[n].get(faces).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Equality of the underlying simplicial structure, ignoring identifiers.
    pub fn same_structure(&self, other: &SSet) -> bool {
        self.truncation == other.truncation
            && self.sizes == other.sizes
            && self.faces == other.faces
            && self.degeneracies == other.degeneracies
    }

    /// Every violated simplicial identity, each with a witnessing simplex.
    /// Empty iff the tables form a truncated simplicial set.
    pub fn validate(&self) -> Vec<IdentityViolation> {
        let m = self.truncation;
        let mut out = Vec::new();
        let mut report = |identity: String, level: usize, x: Simplex| {
            out.push(IdentityViolation { identity, level, simplex: self.name(level, x).into_owned() });
        };
        for n in 2..=m {
            for x in 0..self.sizes[n] as Simplex {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face(n - 1, i, self.face(n, j, x));
                        let rhs = self.face(n - 1, j - 1, self.face(n, i, x));
                        if lhs != rhs {
                            report(format!("d{i} d{j} = d{} d{i}", j - 1), n, x);
                        }
                    }
                }
            }
        }
        for n in 0..m.saturating_sub(1) {
            for x in 0..self.sizes[n] as Simplex {
                for j in 0..=n {
                    for i in 0..=j {
                        let lhs = self.degeneracy(n + 1, i, self.degeneracy(n, j, x));
                        let rhs = self.degeneracy(n + 1, j + 1, self.degeneracy(n, i, x));
                        if lhs != rhs {
                            report(format!("s{i} s{j} = s{} s{i}", j + 1), n, x);
                        }
                    }
                }
            }
        }
        for n in 0..m {
            for x in 0..self.sizes[n] as Simplex {
                for j in 0..=n {
                    let sx = self.degeneracy(n, j, x);
                    for i in 0..=n + 1 {
                        let lhs = self.face(n + 1, i, sx);
                        let expected = if i < j {
                            (n > 0).then(|| self.degeneracy(n - 1, j - 1, self.face(n, i, x)))
                        } else if i == j || i == j + 1 {
                            Some(x)
                        } else {
                            (n > 0).then(|| self.degeneracy(n - 1, j, self.face(n, i - 1, x)))
                        };
                        if let Some(rhs) = expected {
                            if lhs != rhs {
                                report(format!("d{i} s{j} interchange"), n, x);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Rebuilds the same structure with fresh identifiers.
    pub fn with_names(&self, names: Vec<Vec<String>>) -> Result<SSet> {
        SSet::from_parts(self.truncation, names, self.faces.clone(), self.degeneracies.clone())
    }

    /// Applies `f` to every identifier.
    pub fn renamed(&self, f: impl Fn(usize, &str) -> String) -> SSet {
        let names = (0..=self.truncation)
            .map(|n| (0..self.sizes[n] as Simplex).map(|x| f(n, &self.name(n, x))).collect())
            .collect();
        SSet::from_parts(self.truncation, names, self.faces.clone(), self.degeneracies.clone())
            .expect("renaming preserves shape")
    }
}

fn sequence_name(seq: &[usize], symbols: usize) -> String {
    let sep = if symbols <= 10 { "" } else { "." };
    seq.iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

/// Builds a simplicial set whose `n`-simplices are given sequences of length
/// `n + 1`; faces delete and degeneracies repeat entries. Every listed family
/// must be closed under those operations.
fn from_sequences(m: usize, symbols: usize, levels: Vec<Vec<Vec<usize>>>) -> SSet {
    let index: Vec<HashMap<Vec<usize>, Simplex>> = levels
        .iter()
        .map(|level| level.iter().enumerate().map(|(x, s)| (s.clone(), x as Simplex)).collect())
        .collect();
    let mut faces = vec![Vec::new()];
    let mut degeneracies = Vec::new();
    for n in 0..=m {
        if n > 0 {
            faces.push(
                (0..=n)
                    .map(|i| {
                        levels[n]
                            .iter()
                            .map(|s| {
                                let mut t = s.clone();
                                t.remove(i);
                                index[n - 1][&t]
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        if n < m {
            degeneracies.push(
                (0..=n)
                    .map(|j| {
                        levels[n]
                            .iter()
                            .map(|s| {
                                let mut t = s.clone();
                                t.insert(j, s[j]);
                                index[n + 1][&t]
                            })
                            .collect()
                    })
                    .collect(),
            );
        } else {
            degeneracies.push(Vec::new());
        }
    }
    let names = levels
        .iter()
        .map(|level| level.iter().map(|s| sequence_name(s, symbols)).collect())
        .collect();
    SSet::from_parts(m, names, faces, degeneracies).expect("sequence model is well-shaped")
}

fn parse_sequence(name: &str, symbols: usize) -> Vec<usize> {
    if symbols <= 10 {
        name.chars().map(|c| c.to_digit(10).expect("digit") as usize).collect()
    } else {
        name.split('.').map(|t| t.parse().expect("number")).collect()
    }
}

/// The map `Δ[p] -> Δ[q]` induced by a monotone `theta: [p] -> [q]`, given
/// as its sequence of values; both simplices must come from [`standard_simplex`].
pub fn simplex_operator(from: &Arc<SSet>, to: &Arc<SSet>, theta: &[usize]) -> Result<SSetMap> {
    let p = from.level_size(0) - 1;
    let q = to.level_size(0) - 1;
    if theta.len() != p + 1 || theta.iter().any(|&t| t > q) || theta.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition(format!("{theta:?} is not a monotone map [{p}] -> [{q}]")));
    }
    let components = (0..=from.truncation())
        .map(|n| {
            (0..from.level_size(n) as Simplex)
                .map(|x| {
                    let seq: Vec<usize> =
                        parse_sequence(&from.name(n, x), p + 1).into_iter().map(|k| theta[k]).collect();
                    to.lookup(n, &sequence_name(&seq, q + 1)).expect("image is monotone")
                })
                .collect()
        })
        .collect();
    SSetMap::new_unchecked(from.clone(), to.clone(), components)
}

/// The map between standard simplices or indiscrete nerves sending vertex
/// `k` to `f[k]`, acting on simplices through their vertex sequences.
pub fn vertex_map(from: &Arc<SSet>, to: &Arc<SSet>, f: &[usize]) -> Result<SSetMap> {
    let (p, q) = (from.level_size(0), to.level_size(0));
    if f.len() != p || f.iter().any(|&t| t >= q) {
        return Err(Error::Precondition(format!("{f:?} is not a vertex function {p} -> {q}")));
    }
    let components = (0..=from.truncation())
        .map(|n| {
            (0..from.level_size(n) as Simplex)
                .map(|x| {
                    let seq: Vec<usize> = parse_sequence(&from.name(n, x), p).into_iter().map(|k| f[k]).collect();
                    to.lookup(n, &sequence_name(&seq, q))
                        .ok_or_else(|| Error::NotSimplicial(format!("no simplex {seq:?} in the target")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SSetMap::new(from.clone(), to.clone(), components)
}

/// The `p`-simplices of `Δ[n]` as monotone sequences, in index order.
pub fn simplex_sequences(delta: &SSet, p: usize) -> Vec<Vec<usize>> {
    let symbols = delta.level_size(0);
    (0..delta.level_size(p) as Simplex).map(|x| parse_sequence(&delta.name(p, x), symbols)).collect()
}

/// All sequences of length `len` over `0..symbols`, lexicographic; monotone only if asked.
fn sequences(len: usize, symbols: usize, monotone: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, len: usize, symbols: usize, monotone: bool) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = if monotone { cur.last().copied().unwrap_or(0) } else { 0 };
        for v in start..symbols {
            cur.push(v);
            rec(out, cur, len, symbols, monotone);
            cur.pop();
        }
    }
    rec(&mut out, &mut current, len, symbols, monotone);
    out
}

/// `Δ[n]` truncated at `m`: `p`-simplices are monotone maps `[p] -> [n]`.
pub fn standard_simplex(n: usize, m: usize) -> SSet {
    let levels = (0..=m).map(|p| sequences(p + 1, n + 1, true)).collect();
    from_sequences(m, n + 1, levels)
}

/// The horn `Λ^k[n]` truncated at `m`, with its inclusion into `Δ[n]`.
pub fn horn(n: usize, k: usize, m: usize) -> Result<(Arc<SSet>, SSetMap)> {
    if k > n {
        return Err(Error::Precondition(format!("horn index {k} outside 0..={n}")));
    }
    let in_horn = |s: &Vec<usize>| (0..=n).any(|i| i != k && !s.contains(&i));
    let simplex = Arc::new(standard_simplex(n, m));
    let kept: Vec<Vec<Vec<usize>>> =
        (0..=m).map(|p| sequences(p + 1, n + 1, true).into_iter().filter(in_horn).collect()).collect();
    let components = (0..=m)
        .map(|p| {
            kept[p]
                .iter()
                .map(|s| simplex.lookup(p, &sequence_name(s, n + 1)).expect("horn simplex lies in Δ[n]"))
                .collect()
        })
        .collect();
    let horn = Arc::new(from_sequences(m, n + 1, kept));
    let inclusion = SSetMap::new(horn.clone(), simplex, components)?;
    Ok((horn, inclusion))
}

/// The nerve of the indiscrete groupoid on `points` objects: `cosk_0` of a finite set.
pub fn indiscrete_nerve(points: usize, m: usize) -> Result<SSet> {
    if points == 0 {
        return Err(Error::Precondition("indiscrete nerve needs at least one point".into()));
    }
    let levels = (0..=m).map(|p| sequences(p + 1, points, false)).collect();
    Ok(from_sequences(m, points, levels))
}

/// The constant simplicial set on `points` vertices.
pub fn discrete(points: usize, m: usize) -> SSet {
    let levels = (0..=m).map(|p| (0..points).map(|v| vec![v; p + 1]).collect()).collect();
    from_sequences(m, points, levels)
}

/// The terminal object `Δ[0]`.
pub fn point(m: usize) -> SSet {
    standard_simplex(0, m)
}

/// Pushout of `Y1 <- * -> Y2` identifying the vertices `y1` and `y2` with the
/// degenerate simplices above them. Returns the pushout and both injections.
pub fn glue_at_point(
    first: &Arc<SSet>,
    first_vertex: Simplex,
    second: &Arc<SSet>,
    second_vertex: Simplex,
) -> Result<(Arc<SSet>, SSetMap, SSetMap)> {
    let m = first.truncation();
    if second.truncation() != m {
        return Err(Error::TruncationMismatch(m, second.truncation()));
    }
    if first_vertex as usize >= first.level_size(0) || second_vertex as usize >= second.level_size(0) {
        return Err(Error::Precondition("gluing vertex out of range".into()));
    }
    let mut first_map: Vec<Vec<Simplex>> = Vec::new();
    let mut second_map: Vec<Vec<Simplex>> = Vec::new();
    let mut names = Vec::new();
    for n in 0..=m {
        let glued_first = first.degenerate_vertex(first_vertex, n);
        let glued_second = second.degenerate_vertex(second_vertex, n);
        let mut level_names: Vec<String> =
            (0..first.level_size(n) as Simplex).map(|x| format!("1.{}", first.name(n, x))).collect();
        first_map.push((0..first.level_size(n) as Simplex).collect());
        let mut next = first.level_size(n) as Simplex;
        let mut row = Vec::with_capacity(second.level_size(n));
        for y in 0..second.level_size(n) as Simplex {
            if y == glued_second {
                row.push(glued_first);
            } else {
                row.push(next);
                level_names.push(format!("2.{}", second.name(n, y)));
                next += 1;
            }
        }
        second_map.push(row);
        names.push(level_names);
    }
    let sizes: Vec<usize> = names.iter().map(Vec::len).collect();
    // Preimage of each glued simplex: which side and which index.
    let mut origin: Vec<Vec<(bool, Simplex)>> = sizes.iter().map(|&s| vec![(true, 0); s]).collect();
    for n in 0..=m {
        for x in 0..first.level_size(n) {
            origin[n][first_map[n][x] as usize] = (true, x as Simplex);
        }
        for y in 0..second.level_size(n) {
            let z = second_map[n][y] as usize;
            if z >= first.level_size(n) {
                origin[n][z] = (false, y as Simplex);
            }
        }
    }
    let mut faces = vec![Vec::new()];
    let mut degeneracies = Vec::new();
    for n in 0..=m {
        if n > 0 {
            faces.push(
                (0..=n)
                    .map(|i| {
                        origin[n]
                            .iter()
                            .map(|&(left, x)| {
                                if left {
                                    first_map[n - 1][first.face(n, i, x) as usize]
                                } else {
                                    second_map[n - 1][second.face(n, i, x) as usize]
                                }
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        degeneracies.push(if n < m {
            (0..=n)
                .map(|j| {
                    origin[n]
                        .iter()
                        .map(|&(left, x)| {
                            if left {
                                first_map[n + 1][first.degeneracy(n, j, x) as usize]
                            } else {
                                second_map[n + 1][second.degeneracy(n, j, x) as usize]
                            }
                        })
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        });
    }
    let glued = Arc::new(SSet::from_parts(m, names, faces, degeneracies)?);
    let i1 = SSetMap::new(first.clone(), glued.clone(), first_map)?;
    let i2 = SSetMap::new(second.clone(), glued.clone(), second_map)?;
    Ok((glued, i1, i2))
}

/// `nerve(I[1])`, the interval used for path objects.
pub fn interval(m: usize) -> Arc<SSet> {
    Arc::new(indiscrete_nerve(2, m).expect("two points"))
}

/// The reversal of `nerve(I[1])` swapping its two vertices.
pub fn interval_flip(m: usize) -> SSetMap {
    let i = interval(m);
    vertex_map(&i, &i, &[1, 0]).expect("the interval is indiscrete")
}

/// `Λ = nerve(I[1]) ⊔_* nerve(I[1])`, glued at vertex 1 of the first copy and
/// vertex 0 of the second. Returns the object and both injections.
pub fn lambda(m: usize) -> (Arc<SSet>, SSetMap, SSetMap) {
    let i = interval(m);
    glue_at_point(&i, 1, &i, 0).expect("interval vertices exist")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monotone_count(p: usize, n: usize) -> usize {
        // brute force over all functions [p] -> [n]
        let mut count = 0;
        let total = (n + 1).pow(p as u32 + 1);
        for code in 0..total {
            let mut c = code;
            let mut seq = Vec::new();
            for _ in 0..=p {
                seq.push(c % (n + 1));
                c /= n + 1;
            }
            seq.reverse();
            if seq.windows(2).all(|w| w[0] <= w[1]) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn standard_simplex_level_sizes() {
        let d1 = standard_simplex(1, 2);
        assert_eq!(d1.level_sizes(), &[2, 3, 4]);
        for p in 0..=2 {
            assert_eq!(d1.level_size(p), monotone_count(p, 1));
        }
        assert!(d1.validate().is_empty());
        let d0 = point(3);
        assert!(d0.level_sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn horn_two_one_has_five_edges() {
        let (h, inc) = horn(2, 1, 2).unwrap();
        assert_eq!(h.level_size(1), 5);
        assert_eq!(h.level_size(0), 3);
        assert!(h.validate().is_empty());
        assert!(inc.is_injective());
        let nondeg = &h.skeleton().nondegenerate[1];
        assert_eq!(nondeg.len(), 2);
        assert!(horn(2, 3, 2).is_err());
    }

    #[test]
    fn indiscrete_nerve_sizes_and_nondegenerates() {
        let n2 = indiscrete_nerve(2, 2).unwrap();
        assert_eq!(n2.level_sizes(), &[2, 4, 8]);
        for p in 0..=2 {
            assert_eq!(n2.skeleton().nondegenerate[p].len(), 2);
        }
        assert!(n2.validate().is_empty());
        assert!(indiscrete_nerve(1, 2).unwrap().level_sizes().iter().all(|&s| s == 1));
        assert!(indiscrete_nerve(0, 2).is_err());
    }

    #[test]
    fn indiscrete_nerve_matches_sequence_oracle() {
        // independent rebuild: sequences over 2 symbols, identities checked directly
        let n2 = indiscrete_nerve(2, 2).unwrap();
        for x in 0..8u32 {
            let name = n2.name(2, x).into_owned();
            let seq: Vec<char> = name.chars().collect();
            for i in 0..3 {
                let mut t = seq.clone();
                t.remove(i);
                let expected: String = t.into_iter().collect();
                assert_eq!(n2.name(1, n2.face(2, i, x)), expected);
            }
        }
    }

    #[test]
    fn injected_defect_is_reported() {
        let good = indiscrete_nerve(2, 2).unwrap();
        let mut faces = good.faces.clone();
        // break d0 on the 2-simplex "010"
        let x = good.lookup(2, "010").unwrap() as usize;
        faces[2][0][x] = good.lookup(1, "11").unwrap();
        let bad = SSet::from_parts(2, good.explicit_names().unwrap().to_vec(), faces, good.degeneracies.clone())
            .unwrap();
        let report = bad.validate();
        assert!(!report.is_empty());
        assert!(report.iter().any(|v| v.simplex == "010"));
    }

    #[test]
    fn lambda_levels_and_joint_surjectivity() {
        let (l, i1, i2) = lambda(2);
        assert_eq!(l.level_sizes(), &[3, 7, 15]);
        for n in 0..=2 {
            assert_eq!(l.level_size(n), 2 * 2usize.pow(n as u32 + 1) - 1);
            let mut hit = vec![false; l.level_size(n)];
            for x in 0..i1.source().level_size(n) as Simplex {
                hit[i1.apply(n, x) as usize] = true;
                hit[i2.apply(n, x) as usize] = true;
            }
            assert!(hit.iter().all(|&h| h));
        }
        assert!(i1.is_injective() && i2.is_injective());
        assert!(l.validate().is_empty());
    }

    #[test]
    fn gluing_points_is_a_point() {
        let p = Arc::new(point(2));
        let (g, _, _) = glue_at_point(&p, 0, &p, 0).unwrap();
        assert!(g.level_sizes().iter().all(|&s| s == 1));
        assert!(glue_at_point(&p, 1, &p, 0).is_err());
    }

    #[test]
    fn act_matches_sequence_semantics() {
        let d2 = standard_simplex(2, 2);
        let x = d2.lookup(1, "02").unwrap();
        assert_eq!(d2.name(2, d2.act(1, x, &[0, 0, 1])), "002");
        assert_eq!(d2.name(0, d2.act(1, x, &[1])), "2");
        let top = d2.lookup(2, "012").unwrap();
        assert_eq!(d2.name(2, d2.act(2, top, &[1, 1, 2])), "112");
    }
}
