//! The subgroup lattice of a finite group.
//!
//! Enumeration seeds with every cyclic subgroup and then closes the collection
//! under joins with cyclic subgroups of prime-power order. Only one
//! representative per conjugacy class is expanded; its conjugates are
//! registered alongside it.
//!
//! Prime order alone is not enough: the quaternion subgroup of SL(2,3) keeps
//! its only involution in its Frattini subgroup and is never `H ∨ <p>` with
//! `p` of prime order. Prime-power order is: for `y` in `Y \ X`, some
//! prime-power part `y_p` of `y` also lies outside `X`.
//!
//! Covers fall out of the same joins: if `X < Y` is a cover then
//! `Y = X ∨ <y_p>` for such a `y_p`, so the upper covers of `X` are the
//! minimal members of `{X ∨ C}` over those cyclic `C`.
//!
//! Subgroup ids are assigned by sorting on `(order, membership bitset)`.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{ElemId, FiniteGroup, SubgroupSet, IDENTITY};

pub type SubgroupId = usize;

#[derive(Clone, Copy, Debug)]
pub struct LatticeOptions {
    pub subgroup_cap: usize,
    /// Order-ideal tables (and with them table-speed meet/join) up to this many subgroups.
    pub table_threshold: usize,
    pub deadline: Option<Instant>,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions {
            subgroup_cap: 200_000,
            table_threshold: 4096,
            deadline: None,
        }
    }
}

/// Up-sets and down-sets of every subgroup, as bitsets over subgroup ids.
#[derive(Debug)]
struct OrderTables {
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

#[derive(Debug)]
pub struct SubgroupLattice {
    group: Arc<FiniteGroup>,
    subgroups: Vec<SubgroupSet>,
    gens: Vec<Vec<ElemId>>,
    index: FxHashMap<BitSet, SubgroupId>,
    upper_covers: Vec<Vec<SubgroupId>>,
    lower_covers: Vec<Vec<SubgroupId>>,
    tables: Option<OrderTables>,
    /// For each group generator, the permutation of subgroup ids it induces by conjugation.
    conj_action: Vec<Vec<SubgroupId>>,
    classes: Vec<Vec<SubgroupId>>,
    class_of: Vec<usize>,
}

/// A strictly increasing list of subgroups; its length counts the inclusions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Chain(pub Vec<SubgroupId>);

impl Chain {
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn ids(&self) -> &[SubgroupId] {
        &self.0
    }

    pub fn is_strictly_increasing(&self, lat: &SubgroupLattice) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1] && lat.leq(w[0], w[1]))
    }

    /// Runs bottom to top through covering pairs.
    pub fn is_maximal(&self, lat: &SubgroupLattice) -> bool {
        self.0.first() == Some(&lat.bottom())
            && self.0.last() == Some(&lat.top())
            && self.0.windows(2).all(|w| lat.is_cover(w[0], w[1]))
    }
}

struct Node {
    set: SubgroupSet,
    gens: Vec<ElemId>,
}

struct Builder<'g> {
    group: &'g FiniteGroup,
    opts: LatticeOptions,
    nodes: Vec<Node>,
    index: FxHashMap<BitSet, usize>,
}

impl Builder<'_> {
    /// Adds `set` and all its conjugates; returns the node index of `set` and
    /// whether it was new.
    fn register(&mut self, set: SubgroupSet, gens: Vec<ElemId>) -> Result<(usize, bool)> {
        if let Some(&i) = self.index.get(set.bits()) {
            return Ok((i, false));
        }
        let g = self.group;
        let first = self.nodes.len();
        self.index.insert(set.bits().clone(), first);
        self.nodes.push(Node { set, gens });
        let mut i = first;
        while i < self.nodes.len() {
            for &s in g.generator_ids() {
                let c = g.conjugate(&self.nodes[i].set, s);
                if self.index.contains_key(c.bits()) {
                    continue;
                }
                let cg = self.nodes[i].gens.iter().map(|&x| g.conj(x, s)).collect();
                self.index.insert(c.bits().clone(), self.nodes.len());
                self.nodes.push(Node { set: c, gens: cg });
            }
            i += 1;
        }
        if self.nodes.len() > self.opts.subgroup_cap {
            return Err(Error::LatticeCapExceeded {
                cap: self.opts.subgroup_cap,
            });
        }
        Ok((first, true))
    }

    fn check_deadline(&self) -> Result<()> {
        match self.opts.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExhausted),
            _ => Ok(()),
        }
    }
}

impl SubgroupLattice {
    pub fn enumerate(group: Arc<FiniteGroup>, opts: LatticeOptions) -> Result<Self> {
        let g = &*group;
        let n = g.order();
        let mut b = Builder {
            group: g,
            opts,
            nodes: Vec::new(),
            index: FxHashMap::default(),
        };

        // cyclic subgroups, and the prime-power-order ones among them
        let mut seen = BitSet::new(n);
        let mut joiners: Vec<ElemId> = Vec::new();
        let mut frontier = Vec::new();
        for x in 0..n as ElemId {
            if seen.contains(x as usize) {
                continue;
            }
            let mut powers = vec![IDENTITY];
            let mut y = x;
            while y != IDENTITY {
                powers.push(y);
                y = g.mult(y, x);
            }
            let order = powers.len();
            let mut bits = BitSet::new(n);
            for (j, &p) in powers.iter().enumerate() {
                bits.insert(p as usize);
                // other generators of the same cyclic group need no visit
                if gcd(j, order) == 1 {
                    seen.insert(p as usize);
                }
            }
            let set = SubgroupSet::from_bits_unchecked(bits);
            let gens = if x == IDENTITY { vec![] } else { vec![x] };
            if is_prime_power(order) {
                joiners.push(x);
            }
            let (i, fresh) = b.register(set, gens)?;
            if fresh {
                frontier.push(i);
            }
        }

        let mut joins: FxHashMap<usize, Vec<usize>> = FxHashMap::default();
        while !frontier.is_empty() {
            b.check_deadline()?;
            let results: Vec<Vec<(SubgroupSet, ElemId)>> = frontier
                .par_iter()
                .map(|&r| {
                    let node = &b.nodes[r];
                    let mut out: Vec<(SubgroupSet, ElemId)> = Vec::new();
                    let mut local: FxHashMap<BitSet, ()> = FxHashMap::default();
                    for &p in &joiners {
                        if node.set.contains(p) {
                            continue;
                        }
                        let k = g.extend(&node.set, &node.gens, &[p]);
                        if local.insert(k.bits().clone(), ()).is_none() {
                            out.push((k, p));
                        }
                    }
                    out
                })
                .collect();
            let mut next = Vec::new();
            for (&r, found) in frontier.iter().zip(results) {
                let mut js = Vec::with_capacity(found.len());
                for (k, p) in found {
                    let mut gens = b.nodes[r].gens.clone();
                    gens.push(p);
                    let (i, fresh) = b.register(k, gens)?;
                    if fresh {
                        next.push(i);
                    }
                    js.push(i);
                }
                joins.insert(r, js);
            }
            frontier = next;
        }

        // final ids: sort by (order, bits)
        let mut order: Vec<usize> = (0..b.nodes.len()).collect();
        order.sort_by(|&x, &y| b.nodes[x].set.cmp(&b.nodes[y].set));
        let mut final_id = vec![0; order.len()];
        for (id, &node) in order.iter().enumerate() {
            final_id[node] = id;
        }
        let mut rep_covers: Vec<(SubgroupId, Vec<SubgroupId>)> = Vec::new();
        for (r, js) in &joins {
            let mut ys: Vec<SubgroupId> = js.iter().map(|&j| final_id[j]).collect();
            ys.sort_unstable();
            ys.dedup();
            let mut minimal: Vec<SubgroupId> = Vec::new();
            for &y in &ys {
                let ybits = b.nodes[order[y]].set.bits();
                if !minimal.iter().any(|&m| b.nodes[order[m]].set.bits().is_subset(ybits)) {
                    minimal.push(y);
                }
            }
            rep_covers.push((final_id[*r], minimal));
        }
        let mut nodes: Vec<Option<Node>> = b.nodes.into_iter().map(Some).collect();
        let mut subgroups = Vec::with_capacity(nodes.len());
        let mut gens = Vec::with_capacity(nodes.len());
        for &i in &order {
            let node = nodes[i].take().unwrap();
            subgroups.push(node.set);
            gens.push(node.gens);
        }
        drop(b.index);

        let mut lat = Self::assemble(group.clone(), subgroups, gens);
        let mut covers: Vec<Option<Vec<SubgroupId>>> = vec![None; lat.len()];
        for (r, cs) in rep_covers {
            covers[r] = Some(cs);
        }
        // carry each representative's covers around its class
        for r in 0..lat.len() {
            if covers[r].is_none() {
                continue;
            }
            let mut queue = vec![r];
            while let Some(x) = queue.pop() {
                for act in &lat.conj_action {
                    let y = act[x];
                    if covers[y].is_none() {
                        let mut cs: Vec<_> = covers[x].as_ref().unwrap().iter().map(|&c| act[c]).collect();
                        cs.sort_unstable();
                        covers[y] = Some(cs);
                        queue.push(y);
                    }
                }
            }
        }
        let covers = covers
            .into_iter()
            .map(|c| c.expect("every class has an expanded representative"))
            .collect();
        lat.set_covers(covers, opts.table_threshold);
        Ok(lat)
    }

    /// Rebuilds a lattice from a complete list of subgroups, e.g. one read back
    /// from the cache. Covers are recomputed by containment unless supplied,
    /// in which case the list must already be in id order.
    pub fn from_subgroups(
        group: Arc<FiniteGroup>,
        mut subgroups: Vec<SubgroupSet>,
        covers: Option<Vec<Vec<SubgroupId>>>,
        opts: LatticeOptions,
    ) -> Result<Self> {
        if covers.is_none() {
            subgroups.sort();
        }
        let gens = subgroups.iter().map(|h| group.generating_set(h)).collect();
        Self::from_parts(group, subgroups, gens, covers, opts)
    }

    /// As `from_subgroups`, with generators already known and the list in id order.
    pub fn from_parts(
        group: Arc<FiniteGroup>,
        subgroups: Vec<SubgroupSet>,
        gens: Vec<Vec<ElemId>>,
        covers: Option<Vec<Vec<SubgroupId>>>,
        opts: LatticeOptions,
    ) -> Result<Self> {
        if subgroups.len() > opts.subgroup_cap {
            return Err(Error::LatticeCapExceeded {
                cap: opts.subgroup_cap,
            });
        }
        let mut lat = Self::assemble(group, subgroups, gens);
        let covers = match covers {
            Some(c) => c,
            None => lat.covers_by_containment(),
        };
        lat.set_covers(covers, opts.table_threshold);
        Ok(lat)
    }

    fn assemble(group: Arc<FiniteGroup>, subgroups: Vec<SubgroupSet>, gens: Vec<Vec<ElemId>>) -> Self {
        let index: FxHashMap<BitSet, SubgroupId> = subgroups
            .iter()
            .enumerate()
            .map(|(i, h)| (h.bits().clone(), i))
            .collect();
        let conj_action: Vec<Vec<SubgroupId>> = group
            .generator_ids()
            .iter()
            .map(|&s| {
                subgroups
                    .par_iter()
                    .map(|h| index[group.conjugate(h, s).bits()])
                    .collect()
            })
            .collect();

        // conjugacy classes as orbits of the induced action
        let len = subgroups.len();
        let mut class_of = vec![usize::MAX; len];
        let mut classes = Vec::new();
        for start in 0..len {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            class_of[start] = c;
            let mut members = vec![start];
            let mut i = 0;
            while i < members.len() {
                for act in &conj_action {
                    let y = act[members[i]];
                    if class_of[y] == usize::MAX {
                        class_of[y] = c;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }

        SubgroupLattice {
            group,
            subgroups,
            gens,
            index,
            upper_covers: Vec::new(),
            lower_covers: Vec::new(),
            tables: None,
            conj_action,
            classes,
            class_of,
        }
    }

    fn set_covers(&mut self, upper: Vec<Vec<SubgroupId>>, table_threshold: usize) {
        let len = self.len();
        let mut lower = vec![Vec::new(); len];
        for (x, ys) in upper.iter().enumerate() {
            for &y in ys {
                lower[y].push(x);
            }
        }
        self.upper_covers = upper;
        self.lower_covers = lower;
        if len <= table_threshold {
            // covers always point to strictly larger orders, hence larger ids
            let mut up: Vec<BitSet> = vec![BitSet::new(len); len];
            for x in (0..len).rev() {
                let mut u = BitSet::new(len);
                u.insert(x);
                for &y in &self.upper_covers[x] {
                    u.union_with(&up[y]);
                }
                up[x] = u;
            }
            let mut down = vec![BitSet::new(len); len];
            for (x, u) in up.iter().enumerate() {
                for y in u.iter() {
                    down[y].insert(x);
                }
            }
            self.tables = Some(OrderTables { up, down });
        }
    }

    /// Covers computed from containment alone: candidates above `X` are scanned
    /// in increasing order, and a candidate is a cover unless it contains an
    /// already accepted cover.
    pub fn covers_by_containment(&self) -> Vec<Vec<SubgroupId>> {
        (0..self.len())
            .into_par_iter()
            .map(|x| {
                let hx = &self.subgroups[x];
                let mut covers: Vec<SubgroupId> = Vec::new();
                for y in x + 1..self.len() {
                    let hy = &self.subgroups[y];
                    if hy.order() == hx.order() || hy.order() % hx.order() != 0 {
                        continue;
                    }
                    if !self.gens[x].iter().all(|&e| hy.contains(e)) {
                        continue;
                    }
                    if covers
                        .iter()
                        .all(|&c| !self.gens[c].iter().all(|&e| hy.contains(e)))
                    {
                        covers.push(y);
                    }
                }
                covers
            })
            .collect()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn bottom(&self) -> SubgroupId {
        0
    }

    pub fn top(&self) -> SubgroupId {
        self.len() - 1
    }

    pub fn ids(&self) -> std::ops::Range<SubgroupId> {
        0..self.len()
    }

    pub fn subgroup(&self, id: SubgroupId) -> &SubgroupSet {
        &self.subgroups[id]
    }

    pub fn subgroups(&self) -> &[SubgroupSet] {
        &self.subgroups
    }

    pub fn order_of(&self, id: SubgroupId) -> usize {
        self.subgroups[id].order()
    }

    /// Generators recorded during enumeration (not necessarily minimal).
    pub fn generators(&self, id: SubgroupId) -> &[ElemId] {
        &self.gens[id]
    }

    pub fn id_of(&self, h: &SubgroupSet) -> Option<SubgroupId> {
        self.index.get(h.bits()).copied()
    }

    pub fn check(&self, id: SubgroupId) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidSubgroup(id))
        }
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    #[inline]
    pub fn leq(&self, a: SubgroupId, b: SubgroupId) -> bool {
        match &self.tables {
            Some(t) => t.up[a].contains(b),
            None => {
                a == b || {
                    let hb = &self.subgroups[b];
                    self.subgroups[a].order() < hb.order() && self.gens[a].iter().all(|&e| hb.contains(e))
                }
            }
        }
    }

    pub fn lt(&self, a: SubgroupId, b: SubgroupId) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        match &self.tables {
            Some(t) => t.down[a].last_common(&t.down[b]).expect("bottom lies below everything"),
            None => self.index[self.subgroups[a].intersection(&self.subgroups[b]).bits()],
        }
    }

    pub fn join(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        match &self.tables {
            // the smallest common upper bound has the least order, hence the least id
            Some(t) => t.up[a].first_common(&t.up[b]).expect("top lies above everything"),
            None => {
                if self.leq(a, b) {
                    return b;
                }
                let k = self.group.extend(&self.subgroups[a], &self.gens[a], &self.gens[b]);
                self.index[k.bits()]
            }
        }
    }

    /// Upward covers of `id`, ascending.
    pub fn upper_covers(&self, id: SubgroupId) -> &[SubgroupId] {
        &self.upper_covers[id]
    }

    /// Maximal subgroups of `id`, ascending.
    pub fn lower_covers(&self, id: SubgroupId) -> &[SubgroupId] {
        &self.lower_covers[id]
    }

    pub fn cover_relation(&self) -> &[Vec<SubgroupId>] {
        &self.upper_covers
    }

    pub fn is_cover(&self, x: SubgroupId, y: SubgroupId) -> bool {
        self.upper_covers[x].binary_search(&y).is_ok()
    }

    pub fn cover_count(&self) -> usize {
        self.upper_covers.iter().map(Vec::len).sum()
    }

    /// Maximal subgroups of the whole group.
    pub fn coatoms(&self) -> &[SubgroupId] {
        self.lower_covers(self.top())
    }

    /// Everything at or above `id`.
    pub fn up_set(&self, id: SubgroupId) -> Vec<SubgroupId> {
        match &self.tables {
            Some(t) => t.up[id].iter().collect(),
            None => (id..self.len()).filter(|&y| self.leq(id, y)).collect(),
        }
    }

    /// Everything at or below `id`.
    pub fn down_set(&self, id: SubgroupId) -> Vec<SubgroupId> {
        match &self.tables {
            Some(t) => t.down[id].iter().collect(),
            None => (0..=id).filter(|&x| self.leq(x, id)).collect(),
        }
    }

    /// Rank function witnessing gradedness, if one exists.
    pub fn rank_function(&self) -> Option<Vec<usize>> {
        let mut rank = vec![usize::MAX; self.len()];
        rank[self.bottom()] = 0;
        // ids increase along covers, so a single ascending pass is a topological order
        for x in self.ids() {
            if rank[x] == usize::MAX {
                return None;
            }
            for &y in &self.upper_covers[x] {
                if rank[y] == usize::MAX {
                    rank[y] = rank[x] + 1;
                } else if rank[y] != rank[x] + 1 {
                    return None;
                }
            }
        }
        Some(rank)
    }

    pub fn is_graded(&self) -> bool {
        self.rank_function().is_some()
    }

    /// Conjugacy classes, each sorted, ordered by least member.
    pub fn classes(&self) -> &[Vec<SubgroupId>] {
        &self.classes
    }

    pub fn class_of(&self, id: SubgroupId) -> usize {
        self.class_of[id]
    }

    pub fn class_representative(&self, id: SubgroupId) -> SubgroupId {
        self.classes[self.class_of[id]][0]
    }

    /// Normal subgroups are exactly the singleton classes.
    pub fn is_normal(&self, id: SubgroupId) -> bool {
        self.classes[self.class_of[id]].len() == 1
    }

    pub fn normal_subgroups(&self) -> Vec<SubgroupId> {
        self.ids().filter(|&x| self.is_normal(x)).collect()
    }

    /// Subgroup-id permutation induced by conjugating with the `k`-th group generator.
    pub fn conjugation_action(&self, k: usize) -> &[SubgroupId] {
        &self.conj_action[k]
    }

    /// Subgroup-id permutation induced by conjugation with an arbitrary element.
    pub fn conjugation_by(&self, g: ElemId) -> Vec<SubgroupId> {
        self.subgroups
            .iter()
            .map(|h| self.index[self.group.conjugate(h, g).bits()])
            .collect()
    }

    pub fn interval(&self, lower: SubgroupId, upper: SubgroupId) -> Result<Interval<'_>> {
        self.check(lower)?;
        self.check(upper)?;
        if !self.leq(lower, upper) {
            return Err(Error::NotContained { lower, upper });
        }
        let members = match &self.tables {
            Some(t) => t.up[lower].intersection(&t.down[upper]).iter().collect(),
            None => (lower..=upper)
                .filter(|&x| self.leq(lower, x) && self.leq(x, upper))
                .collect(),
        };
        Ok(Interval {
            lat: self,
            lower,
            upper,
            members,
        })
    }

    /// Id of the subgroup with the given members, computing nothing new.
    pub fn lookup_bits(&self, bits: &BitSet) -> Option<SubgroupId> {
        self.index.get(bits).copied()
    }

    pub fn core(&self, id: SubgroupId) -> SubgroupId {
        let class = &self.classes[self.class_of[id]];
        let mut bits = self.subgroups[id].bits().clone();
        for &c in class {
            bits.intersect_with(self.subgroups[c].bits());
        }
        self.index[&bits]
    }

    pub fn normal_closure(&self, id: SubgroupId) -> SubgroupId {
        self.classes[self.class_of[id]]
            .iter()
            .fold(self.bottom(), |acc, &c| self.join(acc, c))
    }
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The sub-poset `[lower, upper]`, sharing the ambient meet and join.
#[derive(Debug)]
pub struct Interval<'a> {
    lat: &'a SubgroupLattice,
    pub lower: SubgroupId,
    pub upper: SubgroupId,
    members: Vec<SubgroupId>,
}

impl Interval<'_> {
    pub fn members(&self) -> &[SubgroupId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: SubgroupId) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn meet(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        self.lat.meet(a, b)
    }

    pub fn join(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        self.lat.join(a, b)
    }
}
