//! Lifting problems and exhaustive horn-filling checks.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use super::{horn, point, HomSearch, SSetMap};
use crate::error::{Error, Result};

/// A commutative square `p ∘ u = v ∘ i` asking for a diagonal `B -> E`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: SSetMap,
    pub right: SSetMap,
    pub top: SSetMap,
    pub bottom: SSetMap,
}

impl LiftingProblem {
    pub fn new(left: SSetMap, right: SSetMap, top: SSetMap, bottom: SSetMap) -> Result<Self> {
        let problem = Self { left, right, top, bottom };
        problem.check()?;
        Ok(problem)
    }

    fn check(&self) -> Result<()> {
        let pu = self.top.then(&self.right)?;
        let vi = self.left.then(&self.bottom)?;
        if let Some(d) = pu.first_difference(&vi) {
            return Err(Error::NonCommuting(format!("lifting square fails {d}")));
        }
        Ok(())
    }
}

/// The first filler in canonical order, or `None` if exhaustive search finds none.
pub fn solve_lift(problem: &LiftingProblem) -> Result<Option<SSetMap>> {
    problem.check()?;
    let search = HomSearch::new(problem.left.target(), problem.top.target())?
        .pin_along(&problem.left, &problem.top)?
        .over(&problem.right, &problem.bottom)?;
    Ok(search.first())
}

/// Outcome for one horn inclusion `Λ^k[n] ⊂ Δ[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HornResult {
    pub dimension: usize,
    pub horn: usize,
    pub problems: usize,
    pub solved: bool,
    /// An unsolvable problem, described by the images of the horn's
    /// nondegenerate simplices and of the top simplex below.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibrationReport {
    pub map: String,
    pub rows: Vec<HornResult>,
    pub check_dim: usize,
    /// True when `check_dim` is below the sufficient bound `m + 1`.
    pub partial: bool,
    pub verdict: bool,
}

impl FibrationReport {
    pub fn first_failure(&self) -> Option<&HornResult> {
        self.rows.iter().find(|r| !r.solved)
    }
}

impl fmt::Display for FibrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.verdict { "fibration" } else { "not a fibration" };
        write!(f, "{}: {} up to dimension {}", self.map, verdict, self.check_dim)?;
        if self.partial {
            write!(f, " (partial)")?;
        }
        if let Some(fail) = self.first_failure() {
            write!(f, "; horn({},{}) unfillable", fail.dimension, fail.horn)?;
            if let Some(w) = &fail.witness {
                write!(f, ": {w}")?;
            }
        }
        Ok(())
    }
}

fn describe(map: &SSetMap) -> String {
    let s = map.source();
    let skel = s.skeleton();
    let mut parts = Vec::new();
    for n in 0..=s.truncation() {
        for &x in &skel.nondegenerate[n] {
            parts.push(format!("{}->{}", s.name(n, x), map.target().name(n, map.apply(n, x))));
        }
    }
    parts.join(" ")
}

/// Solves every lifting problem of `p` against `Λ^k[n] ⊂ Δ[n]` for
/// `1 <= n <= check_dim` (default `m + 1`; above that the truncated horn and
/// simplex coincide).
pub fn fibration_check(p: &SSetMap, check_dim: Option<usize>) -> Result<FibrationReport> {
    let m = p.source().truncation();
    let check_dim = check_dim.unwrap_or(m + 1);
    let mut rows = Vec::new();
    for n in 1..=check_dim {
        for k in 0..=n {
            let (h, inclusion) = horn(n, k, m)?;
            let simplex = inclusion.target().clone();
            let mut problems = 0usize;
            let mut witness = None;
            let tops = HomSearch::new(&h, p.source())?;
            let mut failure: Option<Error> = None;
            let _ = tops.for_each(|u| {
                let u = SSetMap::new_unchecked(h.clone(), p.source().clone(), u.to_vec()).expect("horn map");
                let pu = match u.then(p) {
                    Ok(pu) => pu,
                    Err(e) => {
                        failure = Some(e);
                        return ControlFlow::Break(());
                    }
                };
                let bottoms = HomSearch::new(&simplex, p.target())
                    .and_then(|s| s.pin_along(&inclusion, &pu));
                let bottoms = match bottoms {
                    Ok(b) => b,
                    Err(e) => {
                        failure = Some(e);
                        return ControlFlow::Break(());
                    }
                };
                let _ = bottoms.for_each(|v| {
                    problems += 1;
                    if witness.is_none() {
                        let v = SSetMap::new_unchecked(simplex.clone(), p.target().clone(), v.to_vec())
                            .expect("simplex map");
                        let lift = HomSearch::new(&simplex, p.source())
                            .and_then(|s| s.pin_along(&inclusion, &u))
                            .and_then(|s| s.over(p, &v))
                            .map(|s| s.first());
                        match lift {
                            Ok(Some(_)) => {}
                            Ok(None) => {
                                witness = Some(format!("top [{}], bottom [{}]", describe(&u), describe(&v)));
                            }
                            Err(e) => {
                                failure = Some(e);
                                return ControlFlow::Break(());
                            }
                        }
                    }
                    ControlFlow::Continue(())
                });
                if failure.is_some() {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            rows.push(HornResult { dimension: n, horn: k, problems, solved: witness.is_none(), witness });
        }
    }
    let verdict = rows.iter().all(|r| r.solved);
    Ok(FibrationReport {
        map: format!("{:?} -> {:?}", p.source().level_sizes(), p.target().level_sizes()),
        rows,
        check_dim,
        partial: check_dim < m + 1,
        verdict,
    })
}

/// [`fibration_check`] of the terminal map.
pub fn kan_check(x: &Arc<super::SSet>, check_dim: Option<usize>) -> Result<FibrationReport> {
    let pt = Arc::new(point(x.truncation()));
    let mut report = fibration_check(&SSetMap::terminal(x, &pt)?, check_dim)?;
    report.map = format!("{:?}", x.level_sizes());
    Ok(report)
}
