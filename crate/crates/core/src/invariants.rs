//! Chain invariants of a subgroup lattice.
//!
//! Chain lengths count strict inclusions, so `1 < Z3 < S3` has length 2.
//! Witness ties always go to the least subgroup id.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Chain, SubgroupId, SubgroupLattice};
use crate::spec::is_prime;

/// A pair of elements at which one of the two modular identities fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModularityFailure {
    /// `x ∨ (m ∧ y) != (x ∨ m) ∧ y` with `x ≤ y`.
    Lower { x: SubgroupId, y: SubgroupId },
    /// `m ∨ (x ∧ n) != (m ∨ x) ∧ n` with `m ≤ n`.
    Upper { x: SubgroupId, n: SubgroupId },
}

/// Searches exhaustively for a failure of modularity at `m`.
///
/// Pairs where either identity holds for order reasons alone are skipped:
/// in the first, `m ≤ y` or `x ≤ m`; in the second, `x ≤ n` or `m ≤ x`.
pub fn modularity_failure(lat: &SubgroupLattice, m: SubgroupId) -> Option<ModularityFailure> {
    let down_m = lat.down_set(m);
    let up_m = lat.up_set(m);
    let below_m = |x: SubgroupId| down_m.binary_search(&x).is_ok();
    let above_m = |x: SubgroupId| up_m.binary_search(&x).is_ok();
    for y in lat.ids() {
        if above_m(y) {
            continue;
        }
        let my = lat.meet(m, y);
        for x in lat.down_set(y) {
            if below_m(x) {
                continue;
            }
            if lat.join(x, my) != lat.meet(lat.join(x, m), y) {
                return Some(ModularityFailure::Lower { x, y });
            }
        }
    }
    for &n in &up_m {
        if n == m {
            continue;
        }
        for x in lat.ids() {
            if lat.leq(x, n) || above_m(x) {
                continue;
            }
            if lat.join(m, lat.meet(x, n)) != lat.meet(lat.join(m, x), n) {
                return Some(ModularityFailure::Upper { x, n });
            }
        }
    }
    None
}

pub fn is_modular_element(lat: &SubgroupLattice, m: SubgroupId) -> bool {
    modularity_failure(lat, m).is_none()
}

/// All modular elements, ascending. One member per conjugacy class is tested;
/// conjugation is a lattice automorphism, so the verdict holds for the class.
pub fn modular_elements(lat: &SubgroupLattice) -> Vec<SubgroupId> {
    let verdicts: Vec<bool> = lat
        .classes()
        .par_iter()
        .map(|class| is_modular_element(lat, class[0]))
        .collect();
    let mut out: Vec<SubgroupId> = lat
        .classes()
        .iter()
        .zip(verdicts)
        .filter(|(_, ok)| *ok)
        .flat_map(|(class, _)| class.iter().copied())
        .collect();
    out.sort_unstable();
    out
}

/// Longest chain inside `members` (ascending ids). Returns the chain ending at
/// the least id among the best endpoints, each step back taking the least id.
fn longest_chain_within(lat: &SubgroupLattice, members: &[SubgroupId]) -> Chain {
    if members.is_empty() {
        return Chain(Vec::new());
    }
    let mut best = vec![0usize; members.len()];
    let mut pred = vec![usize::MAX; members.len()];
    for j in 0..members.len() {
        for i in 0..j {
            if best[i] + 1 > best[j] && lat.lt(members[i], members[j]) {
                best[j] = best[i] + 1;
                pred[j] = i;
            }
        }
    }
    let top = (0..members.len()).max_by_key(|&j| (best[j], std::cmp::Reverse(j))).unwrap();
    let mut chain = vec![members[top]];
    let mut j = top;
    while pred[j] != usize::MAX {
        j = pred[j];
        chain.push(members[j]);
    }
    chain.reverse();
    Chain(chain)
}

/// Maximum length of a chain of modular elements, given the modular set.
pub fn modl_from(lat: &SubgroupLattice, modular: &[SubgroupId]) -> Chain {
    longest_chain_within(lat, modular)
}

pub fn modl(lat: &SubgroupLattice) -> (usize, Chain) {
    let chain = modl_from(lat, &modular_elements(lat));
    (chain.length(), chain)
}

pub fn normal_sublattice(lat: &SubgroupLattice) -> Vec<SubgroupId> {
    lat.normal_subgroups()
}

/// Chief length with a witness chief series. Fails only if the normal
/// subgroups do not form a graded poset, which would mean a bug upstream.
pub fn chiefl(lat: &SubgroupLattice) -> Result<(usize, Chain)> {
    let normals = normal_sublattice(lat);
    if !is_graded_within(lat, &normals) {
        return Err(Error::NormalSublatticeNotGraded);
    }
    let chain = longest_chain_within(lat, &normals);
    Ok((chain.length(), chain))
}

/// Whether every cover inside `members` raises a common rank by one, with
/// the least member at rank zero.
fn is_graded_within(lat: &SubgroupLattice, members: &[SubgroupId]) -> bool {
    let k = members.len();
    let mut rank = vec![usize::MAX; k];
    if k == 0 {
        return true;
    }
    rank[0] = 0;
    for j in 0..k {
        if rank[j] == usize::MAX {
            return false;
        }
        for t in j + 1..k {
            if !lat.lt(members[j], members[t]) {
                continue;
            }
            let between = (j + 1..t).any(|u| lat.lt(members[j], members[u]) && lat.lt(members[u], members[t]));
            if between {
                continue;
            }
            if rank[t] == usize::MAX {
                rank[t] = rank[j] + 1;
            } else if rank[t] != rank[j] + 1 {
                return false;
            }
        }
    }
    true
}

/// Minimum length of a maximal chain, with the witness path that takes the
/// least-id cover at each step among those still on a shortest route.
pub fn minmaxl(lat: &SubgroupLattice) -> (usize, Chain) {
    let len = lat.len();
    let top = lat.top();
    let mut to_top = vec![usize::MAX; len];
    to_top[top] = 0;
    let mut queue = VecDeque::from([top]);
    while let Some(y) = queue.pop_front() {
        for &x in lat.lower_covers(y) {
            if to_top[x] == usize::MAX {
                to_top[x] = to_top[y] + 1;
                queue.push_back(x);
            }
        }
    }
    let mut chain = vec![lat.bottom()];
    let mut x = lat.bottom();
    while x != top {
        x = *lat
            .upper_covers(x)
            .iter()
            .find(|&&y| to_top[y] + 1 == to_top[x])
            .expect("a shortest route continues through some cover");
        chain.push(x);
    }
    (to_top[lat.bottom()], Chain(chain))
}

/// Subgroups invariant under conjugation by `ambient`.
pub fn is_invariant(lat: &SubgroupLattice, ambient: SubgroupId, h: SubgroupId) -> bool {
    lat.group().normalizes(lat.generators(ambient), lat.subgroup(h))
}

/// Longest chain `lower = N0 < ... < Nt = upper` of subgroups invariant under
/// conjugation by `ambient`.
pub fn nl(lat: &SubgroupLattice, ambient: SubgroupId, lower: SubgroupId, upper: SubgroupId) -> Result<usize> {
    lat.check(ambient)?;
    let interval = lat.interval(lower, upper)?;
    for end in [lower, upper] {
        if !is_invariant(lat, ambient, end) {
            return Err(Error::NotInvariant(end));
        }
    }
    let members: Vec<SubgroupId> = interval
        .members()
        .iter()
        .copied()
        .filter(|&x| is_invariant(lat, ambient, x))
        .collect();
    // members[0] = lower and the last is upper; longest path between them
    let mut best = vec![0usize; members.len()];
    for j in 1..members.len() {
        best[j] = (0..j)
            .filter(|&i| lat.lt(members[i], members[j]))
            .map(|i| best[i] + 1)
            .max()
            .unwrap_or(0);
    }
    Ok(*best.last().unwrap())
}

/// `HK = KH` for every subgroup `K`, tested as `|H||K| / |H ∩ K| = |H ∨ K|`.
pub fn is_permutable(lat: &SubgroupLattice, h: SubgroupId) -> bool {
    let oh = lat.order_of(h);
    lat.ids().all(|k| {
        let product = oh * lat.order_of(k) / lat.order_of(lat.meet(h, k));
        product == lat.order_of(lat.join(h, k))
    })
}

/// Every factor of the given chief series has prime order.
pub fn chief_factors_prime(lat: &SubgroupLattice, series: &Chain) -> bool {
    series
        .ids()
        .windows(2)
        .all(|w| is_prime((lat.order_of(w[1]) / lat.order_of(w[0])) as u32))
}

pub fn is_supersolvable(lat: &SubgroupLattice) -> Result<bool> {
    let (_, series) = chiefl(lat)?;
    Ok(chief_factors_prime(lat, &series))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    pub minmaxl: Chain,
    pub chiefl: Chain,
    pub modl: Chain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub spec: String,
    pub order: usize,
    pub subgroups: usize,
    pub minmaxl: usize,
    pub chiefl: usize,
    pub modl: usize,
    pub solvable: bool,
    pub supersolvable: bool,
    pub graded: bool,
    pub modular_count: usize,
    pub witnesses: Witnesses,
}

pub fn invariant_report(spec: &str, lat: &SubgroupLattice) -> Result<InvariantReport> {
    let modular = modular_elements(lat);
    let modl_chain = modl_from(lat, &modular);
    let (chief, chief_chain) = chiefl(lat)?;
    let (mml, mml_chain) = minmaxl(lat);
    Ok(InvariantReport {
        spec: spec.to_string(),
        order: lat.group().order(),
        subgroups: lat.len(),
        minmaxl: mml,
        chiefl: chief,
        modl: modl_chain.length(),
        solvable: lat.group().is_solvable(),
        supersolvable: chief_factors_prime(lat, &chief_chain),
        graded: lat.is_graded(),
        modular_count: modular.len(),
        witnesses: Witnesses {
            minmaxl: mml_chain,
            chiefl: chief_chain,
            modl: modl_chain,
        },
    })
}
