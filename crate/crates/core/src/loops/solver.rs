//! Triangular solution of the Gaussian loop-equation hierarchy.
//!
//! Writing `W_n = κ^{-n/2} ν^{2-n} Σ_l ν^{-l} W_n^l` with `ν = N√κ/g`, the
//! order-`(n, l)` slice of the loop equation is linear in `W_n^l` with
//! coefficient `2W_1^0 − x = −y`, so `W_n^l = K/y` where `K` collects
//! already-known pieces:
//!
//! * `Σ_{J⊆I} Σ_{l1+l2=l} W_{|J|+1}^{l1}(x,J) W_{n-|J|}^{l2}(x,I∖J)` without
//!   the two terms containing `W_n^l` itself,
//! * `W_{n+1}^{l-2}(x, x, I)`,
//! * `h ∂_x W_n^{l-1}(x, I)`,
//! * `Σ_i ∂_{x_i} [(W_{n-1}^l(x, I∖x_i) − W_{n-1}^l(x_i, I∖x_i)) / (x − x_i)]`.

use std::collections::{BTreeMap, BTreeSet};

use log::debug;
use serde::Serialize;

use super::laurent::LaurentCorrelator;
use super::ring::LoopRing;
use crate::arith::poly::x;
use crate::arith::{MultiPoly, Rational};
use crate::error::SolverError;
use crate::spectral::{Correlator, SpectralExpr, ZCorrelator};

pub type Slot = (usize, usize);

/// `W_1^0 = (x − y)/2`.
pub fn solve_base() -> Correlator {
    let half = Rational::new(1, 2);
    let e = SpectralExpr::from_raw([
        (0, x().scale(&half)),
        (-1, MultiPoly::constant(-half.clone())),
    ]);
    let mut c = Correlator::from_spectral(&e.reduce());
    c.tag = Some((1, 0));
    c
}

/// Every `(n', l')` read by the order-`(n, l)` equation.
pub fn dependencies(n: usize, l: usize) -> Vec<Slot> {
    let mut out = BTreeSet::new();
    for s in 0..n {
        for l1 in 0..=l {
            let a = (s + 1, l1);
            let b = (n - s, l - l1);
            if a == (n, l) || b == (n, l) {
                continue;
            }
            out.insert(a);
            out.insert(b);
        }
    }
    if l >= 2 {
        out.insert((n + 1, l - 2));
    }
    if l >= 1 {
        out.insert((n, l - 1));
    }
    if n >= 2 {
        out.insert((n - 1, l));
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DependencyEdge {
    pub from: Slot,
    pub to: Slot,
}

/// Solved correlators keyed by `(n, l)`, with the dependency DAG that
/// produced them.
#[derive(Clone)]
pub struct Hierarchy<R: LoopRing> {
    solved: BTreeMap<Slot, R>,
    edges: Vec<DependencyEdge>,
    schedule: Vec<Slot>,
}

/// Hierarchy in explicit `x`, `y` form with general `g`.
pub type HierarchyStore = Hierarchy<Correlator>;
/// Hierarchy in the uniformizing coordinate at `g = 1`.
pub type ZHierarchy = Hierarchy<ZCorrelator>;
/// Hierarchy of expansions at infinity truncated at a fixed total degree.
pub type LaurentHierarchy = Hierarchy<LaurentCorrelator>;

impl<R: LoopRing> Default for Hierarchy<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: LoopRing> Hierarchy<R> {
    pub fn new() -> Self {
        Self::with_base(R::base())
    }

    /// Starts from a caller-supplied `W_1^0` (e.g. a series truncated at a chosen degree).
    pub fn with_base(base: R) -> Self {
        let mut solved = BTreeMap::new();
        solved.insert((1, 0), base);
        Hierarchy {
            solved,
            edges: Vec::new(),
            schedule: vec![(1, 0)],
        }
    }

    pub fn get(&self, n: usize, l: usize) -> Option<&R> {
        self.solved.get(&(n, l))
    }

    pub fn contains(&self, n: usize, l: usize) -> bool {
        self.solved.contains_key(&(n, l))
    }

    /// Slots solved so far, in the order they were computed.
    pub fn schedule(&self) -> &[Slot] {
        &self.schedule
    }

    pub fn edges(&self) -> &[DependencyEdge] {
        &self.edges
    }

    /// Overwrites a slot; used by tests that corrupt the store.
    pub fn insert(&mut self, n: usize, l: usize, c: R) {
        self.solved.insert((n, l), c);
    }

    /// Solves `(n, l)` and everything it needs, memoized.
    pub fn ensure(&mut self, n: usize, l: usize) -> Result<&R, SolverError> {
        let mut stack = vec![(n, l)];
        while let Some(&top) = stack.last() {
            if self.solved.contains_key(&top) {
                stack.pop();
                continue;
            }
            let missing: Vec<Slot> = dependencies(top.0, top.1)
                .into_iter()
                .filter(|d| !self.solved.contains_key(d))
                .collect();
            if missing.is_empty() {
                let w = solve_order(top.0, top.1, self)?;
                for d in dependencies(top.0, top.1) {
                    self.edges.push(DependencyEdge { from: d, to: top });
                }
                debug!("solved W_{}^{} with {} monomials", top.0, top.1, w.size());
                self.solved.insert(top, w);
                self.schedule.push(top);
                stack.pop();
            } else {
                stack.extend(missing);
            }
        }
        Ok(&self.solved[&(n, l)])
    }

    /// Dependency DAG as JSON.
    pub fn dag_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": "gbe/1",
            "kind": "dependency-dag",
            "schedule": self.schedule.iter().map(|(n, l)| [n, l]).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| [[e.from.0, e.from.1], [e.to.0, e.to.1]]).collect::<Vec<_>>(),
        })
    }
}

fn fetch<R: LoopRing>(
    store: &Hierarchy<R>,
    n: usize,
    l: usize,
    slot: Slot,
) -> Result<&R, SolverError> {
    store
        .get(slot.0, slot.1)
        .ok_or(SolverError::MissingDependency {
            n,
            l,
            dep_n: slot.0,
            dep_l: slot.1,
        })
}

/// Everything in the order-`(n, l)` equation except the terms linear in
/// `W_n^l`; the solution is this divided by `y`.
pub fn known_part<R: LoopRing>(n: usize, l: usize, store: &Hierarchy<R>) -> Result<R, SolverError> {
    let mut k = R::zero(n);
    let rest: Vec<usize> = (1..n).collect();

    // (a) convolution over subsets J of I and splittings l1 + l2 = l
    for mask in 0u32..(1 << (n - 1)) {
        let mut ja = vec![0usize];
        let mut jb = vec![0usize];
        for (bit, &v) in rest.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                ja.push(v);
            } else {
                jb.push(v);
            }
        }
        for l1 in 0..=l {
            let a = (ja.len(), l1);
            let b = (jb.len(), l - l1);
            if a == (n, l) || b == (n, l) {
                continue;
            }
            let wa = fetch(store, n, l, a)?.embed(n, &ja);
            let wb = fetch(store, n, l, b)?.embed(n, &jb);
            k.add_assign(&wa.mul(&wb));
        }
    }

    // (b) W_{n+1}^{l-2}(x, x, I)
    if l >= 2 {
        let w = fetch(store, n, l, (n + 1, l - 2))?;
        k.add_assign(&w.merge_first_pair()?);
    }

    // (c) h ∂_x W_n^{l-1}
    if l >= 1 {
        let w = fetch(store, n, l, (n, l - 1))?;
        k.add_assign(&w.dx(0).mul_h());
    }

    // (d) difference quotients in each x_i
    if n >= 2 {
        let w = fetch(store, n, l, (n - 1, l))?;
        for &i in &rest {
            let others: Vec<usize> = rest.iter().copied().filter(|&v| v != i).collect();
            let mut at_x = vec![0usize];
            at_x.extend(&others);
            let mut at_xi = vec![i];
            at_xi.extend(&others);
            let diff = w.embed(n, &at_x).sub(&w.embed(n, &at_xi));
            k.add_assign(&diff.div_x_difference(0, i).canonicalize().dx(i));
        }
    }
    Ok(k.canonicalize())
}

/// `W_n^l` from its dependencies in `store`.
pub fn solve_order<R: LoopRing>(
    n: usize,
    l: usize,
    store: &Hierarchy<R>,
) -> Result<R, SolverError> {
    if (n, l) == (1, 0) {
        return Err(SolverError::BaseCase);
    }
    let k = known_part(n, l, store)?;
    let w = k.div_y(0).canonicalize();
    w.validate()?;
    Ok(w)
}

/// Full order-`(n, l)` equation evaluated on the stored `W_n^l`: the
/// self-terms `2 W_1^0 W_n^l − x W_n^l` are added back to the known part.
/// Zero exactly when the stored value solves its equation.
pub fn loop_residual<R: LoopRing>(
    n: usize,
    l: usize,
    store: &Hierarchy<R>,
) -> Result<R, SolverError> {
    let mut k = known_part(n, l, store)?;
    let w = fetch(store, n, l, (n, l))?;
    let w10 = fetch(store, n, l, (1, 0))?.embed(n, &[0]);
    let two_w10_minus_x = w10.scale_int(2).sub(&R::x0(n));
    k.add_assign(&two_w10_minus_x.mul(w));
    Ok(k.canonicalize())
}

/// `[W_1^0, …, W_1^{l_max}]` in normal form.
pub fn resolvent_expansion(l_max: usize) -> Result<Vec<SpectralExpr>, SolverError> {
    let mut store = HierarchyStore::new();
    resolvent_from_store(&mut store, l_max)
}

pub fn resolvent_from_store<R: LoopRing>(
    store: &mut Hierarchy<R>,
    l_max: usize,
) -> Result<Vec<SpectralExpr>, SolverError> {
    (0..=l_max)
        .map(|l| {
            let c = store.ensure(1, l)?;
            Ok(c.to_w1(l).expect("W_1 has one variable"))
        })
        .collect()
}
