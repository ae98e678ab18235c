//! Finite permutation groups with a dense element table.
//!
//! Every element gets an integer id assigned in breadth-first order over the
//! generator list, identity first. All subgroup-level work happens on those
//! ids; permutations are only touched during construction and for display.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub type ElemId = u32;

pub const IDENTITY: ElemId = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupOptions {
    /// Construction fails once more than this many elements are found.
    pub order_cap: usize,
    /// Groups up to this order get a full multiplication table.
    pub table_threshold: usize,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions {
            order_cap: 20_000,
            table_threshold: 4096,
        }
    }
}

/// Element lookup keyed by the images of a base (a point set whose pointwise
/// stabilizer is trivial). Packs the images into a `u128` when they fit.
#[derive(Debug)]
enum ElementIndex {
    Packed {
        base: Vec<u32>,
        radix: u128,
        map: FxHashMap<u128, ElemId>,
    },
    Full(FxHashMap<Box<[u32]>, ElemId>),
}

#[derive(Debug)]
enum Multiplication {
    Table(Vec<u16>),
    Oracle,
}

/// A subgroup encoded as a membership bitset over element ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupSet {
    // field order matters for the derived Ord: (order, bits)
    order: usize,
    bits: BitSet,
}

impl SubgroupSet {
    pub(crate) fn from_bits_unchecked(bits: BitSet) -> Self {
        SubgroupSet {
            order: bits.count(),
            bits,
        }
    }

    pub fn trivial(group_order: usize) -> Self {
        let mut bits = BitSet::new(group_order);
        bits.insert(IDENTITY as usize);
        SubgroupSet { order: 1, bits }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, x: ElemId) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn is_subgroup_of(&self, other: &SubgroupSet) -> bool {
        self.order <= other.order && other.order % self.order == 0 && self.bits.is_subset(&other.bits)
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.bits.iter().map(|i| i as ElemId)
    }

    pub fn intersection(&self, other: &SubgroupSet) -> SubgroupSet {
        SubgroupSet::from_bits_unchecked(self.bits.intersection(&other.bits))
    }
}

impl std::fmt::Debug for SubgroupSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order, self.bits)
    }
}

#[derive(Debug)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    gen_ids: Vec<ElemId>,
    elements: Vec<Permutation>,
    inverses: Vec<ElemId>,
    index: ElementIndex,
    mult: Multiplication,
    /// Breadth-first tree: parent element and the generator index leading from it.
    tree: Vec<(ElemId, u32)>,
}

impl FiniteGroup {
    /// Enumerates the group generated by `generators`.
    pub fn generate(degree: usize, generators: Vec<Permutation>, opts: GroupOptions) -> Result<Self> {
        let degree = degree.max(1);
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }

        let id = Permutation::identity(degree);
        let mut lookup: FxHashMap<Box<[u32]>, ElemId> = FxHashMap::default();
        let mut elements = vec![id.clone()];
        let mut tree = vec![(IDENTITY, 0)];
        lookup.insert(id.images().into(), IDENTITY);
        let mut queue = VecDeque::from([IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for (k, g) in generators.iter().enumerate() {
                let y = elements[x as usize].compose(g);
                if !lookup.contains_key(y.images()) {
                    if elements.len() >= opts.order_cap {
                        return Err(Error::OrderCapExceeded { cap: opts.order_cap });
                    }
                    let yid = elements.len() as ElemId;
                    lookup.insert(y.images().into(), yid);
                    elements.push(y);
                    tree.push((x, k as u32));
                    queue.push_back(yid);
                }
            }
        }

        let gen_ids = generators.iter().map(|g| lookup[g.images()]).collect();
        let inverses = elements
            .iter()
            .map(|p| lookup[p.inverse().images()])
            .collect();
        let index = build_index(degree, &elements, lookup);
        let mut group = FiniteGroup {
            degree,
            generators,
            gen_ids,
            elements,
            inverses,
            index,
            mult: Multiplication::Oracle,
            tree,
        };
        let n = group.order();
        if n <= opts.table_threshold && n <= u16::MAX as usize + 1 {
            let mut table = Vec::with_capacity(n * n);
            for a in 0..n as ElemId {
                for b in 0..n as ElemId {
                    table.push(group.mult_oracle(a, b) as u16);
                }
            }
            group.mult = Multiplication::Table(table);
        }
        Ok(group)
    }

    pub fn trivial() -> Self {
        Self::generate(1, Vec::new(), GroupOptions::default()).expect("trivial group")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Element ids of the generators, in generator order.
    pub fn generator_ids(&self) -> &[ElemId] {
        &self.gen_ids
    }

    pub fn element(&self, id: ElemId) -> &Permutation {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn id_of(&self, p: &Permutation) -> Option<ElemId> {
        if p.degree() != self.degree {
            return None;
        }
        let id = match &self.index {
            ElementIndex::Packed { base, radix, map } => {
                map.get(&pack(base.iter().map(|&b| p.apply(b)), *radix)).copied()
            }
            ElementIndex::Full(map) => map.get(p.images()).copied(),
        }?;
        // the base key only identifies elements of this group
        (self.elements[id as usize] == *p).then_some(id)
    }

    #[inline]
    pub fn mult(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.mult {
            Multiplication::Table(t) => t[a as usize * self.order() + b as usize] as ElemId,
            Multiplication::Oracle => self.mult_oracle(a, b),
        }
    }

    fn mult_oracle(&self, a: ElemId, b: ElemId) -> ElemId {
        let (pa, pb) = (&self.elements[a as usize], &self.elements[b as usize]);
        match &self.index {
            ElementIndex::Packed { base, radix, map } => {
                map[&pack(base.iter().map(|&x| pb.apply(pa.apply(x))), *radix)]
            }
            ElementIndex::Full(map) => map[pa.compose(pb).images()],
        }
    }

    #[inline]
    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inverses[a as usize]
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: ElemId, g: ElemId) -> ElemId {
        self.mult(self.mult(self.inv(g), x), g)
    }

    pub fn element_order(&self, x: ElemId) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != IDENTITY {
            y = self.mult(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gen_ids;
        g.iter()
            .all(|&a| g.iter().all(|&b| self.mult(a, b) == self.mult(b, a)))
    }

    /// A shortest word in the generators (as indices) evaluating to `x`, read left to right.
    pub fn word(&self, x: ElemId) -> Vec<usize> {
        let mut w = Vec::new();
        let mut y = x;
        while y != IDENTITY {
            let (parent, k) = self.tree[y as usize];
            w.push(k as usize);
            y = parent;
        }
        w.reverse();
        w
    }

    /// `word` rendered as `g0*g1*...`, or `e` for the identity.
    pub fn word_string(&self, x: ElemId) -> String {
        let w = self.word(x);
        if w.is_empty() {
            return "e".to_string();
        }
        w.iter().map(|k| format!("g{k}")).collect::<Vec<_>>().join("*")
    }

    pub fn check_id(&self, x: ElemId) -> Result<()> {
        if (x as usize) < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidElement(x))
        }
    }

    pub fn whole(&self) -> SubgroupSet {
        SubgroupSet::from_bits_unchecked(BitSet::full(self.order()))
    }

    pub fn trivial_subgroup(&self) -> SubgroupSet {
        SubgroupSet::trivial(self.order())
    }

    /// Smallest subgroup containing `seed`.
    pub fn subgroup_generated(&self, seed: &[ElemId]) -> Result<SubgroupSet> {
        for &x in seed {
            self.check_id(x)?;
        }
        Ok(self.extend(&self.trivial_subgroup(), &[], seed))
    }

    /// `<base, new>` given generators of `base`.
    ///
    /// Grows the result as a union of right cosets of `base`, so the work is
    /// proportional to the index rather than to the full closure.
    pub fn extend(&self, base: &SubgroupSet, base_gens: &[ElemId], new: &[ElemId]) -> SubgroupSet {
        let n = self.order();
        let gens: Vec<ElemId> = base_gens
            .iter()
            .chain(new)
            .copied()
            .filter(|&g| g != IDENTITY)
            .collect();
        if new.iter().all(|&g| base.contains(g)) {
            return base.clone();
        }
        let base_elems: Vec<ElemId> = base.elements().collect();
        let mut bits = base.bits.clone();
        let mut count = base.order;
        let mut reps = vec![IDENTITY];
        let mut i = 0;
        while i < reps.len() {
            let x = reps[i];
            i += 1;
            for &s in &gens {
                let e = self.mult(x, s);
                if bits.contains(e as usize) {
                    continue;
                }
                for &r in &base_elems {
                    bits.insert(self.mult(r, e) as usize);
                }
                count += base_elems.len();
                // a subgroup larger than half the group is the group
                if 2 * count > n {
                    return self.whole();
                }
                reps.push(e);
            }
        }
        SubgroupSet { order: count, bits }
    }

    /// Greedy generating set: scan members in id order, keep those not yet covered.
    pub fn generating_set(&self, h: &SubgroupSet) -> Vec<ElemId> {
        let mut gens = Vec::new();
        let mut cur = self.trivial_subgroup();
        for x in h.elements() {
            if cur.order() == h.order() {
                break;
            }
            if !cur.contains(x) {
                cur = self.extend(&cur, &gens, &[x]);
                gens.push(x);
            }
        }
        gens
    }

    /// Treats `bits` as a subgroup if it is one, returning it with a greedy
    /// generating set. Costs one closure step per generator found.
    pub fn subgroup_from_bits(&self, bits: &BitSet) -> Option<(SubgroupSet, Vec<ElemId>)> {
        if bits.capacity() != self.order() || !bits.contains(IDENTITY as usize) {
            return None;
        }
        let target = bits.count();
        let mut gens = Vec::new();
        let mut cur = self.trivial_subgroup();
        for x in bits.iter() {
            if cur.order() == target {
                break;
            }
            let x = x as ElemId;
            if !cur.contains(x) {
                cur = self.extend(&cur, &gens, &[x]);
                if !cur.bits().is_subset(bits) {
                    return None;
                }
                gens.push(x);
            }
        }
        (cur.order() == target).then_some((cur, gens))
    }

    /// Checks closure under products; `bits` must contain the identity.
    pub fn is_subgroup(&self, bits: &BitSet) -> bool {
        if bits.capacity() != self.order() || !bits.contains(IDENTITY as usize) {
            return false;
        }
        let members: Vec<ElemId> = bits.iter().map(|i| i as ElemId).collect();
        members
            .iter()
            .all(|&a| members.iter().all(|&b| bits.contains(self.mult(a, b) as usize)))
    }

    pub fn conjugate(&self, h: &SubgroupSet, g: ElemId) -> SubgroupSet {
        let mut bits = BitSet::new(self.order());
        for x in h.elements() {
            bits.insert(self.conj(x, g) as usize);
        }
        SubgroupSet { order: h.order, bits }
    }

    /// True iff every generator of the group conjugates `h` into itself.
    pub fn is_normal(&self, h: &SubgroupSet) -> bool {
        self.gen_ids
            .iter()
            .all(|&g| h.elements().all(|x| h.contains(self.conj(x, g))))
    }

    /// Whether every element of `by` normalizes `h`.
    pub fn normalizes(&self, by: &[ElemId], h: &SubgroupSet) -> bool {
        by.iter().all(|&g| h.elements().all(|x| h.contains(self.conj(x, g))))
    }

    /// All distinct conjugates of `h`, starting with `h` itself.
    pub fn conjugates(&self, h: &SubgroupSet) -> Vec<SubgroupSet> {
        let mut seen: FxHashSet<BitSet> = FxHashSet::default();
        seen.insert(h.bits.clone());
        let mut out = vec![h.clone()];
        let mut i = 0;
        while i < out.len() {
            for &g in &self.gen_ids {
                let c = self.conjugate(&out[i], g);
                if seen.insert(c.bits.clone()) {
                    out.push(c);
                }
            }
            i += 1;
        }
        out
    }

    /// Intersection of all conjugates of `h`.
    pub fn core(&self, h: &SubgroupSet) -> SubgroupSet {
        let mut bits = h.bits.clone();
        for c in self.conjugates(h) {
            bits.intersect_with(&c.bits);
        }
        SubgroupSet::from_bits_unchecked(bits)
    }

    /// Subgroup generated by all conjugates of `h`.
    pub fn normal_closure(&self, h: &SubgroupSet) -> SubgroupSet {
        self.normal_closure_within(h, &self.gen_ids)
    }

    /// Smallest subgroup containing `h` and normalized by `by`.
    pub fn normal_closure_within(&self, h: &SubgroupSet, by: &[ElemId]) -> SubgroupSet {
        let mut gens = self.generating_set(h);
        let mut k = h.clone();
        loop {
            let mut grown = false;
            for &g in by {
                for x in gens.clone() {
                    let y = self.conj(x, g);
                    if !k.contains(y) {
                        k = self.extend(&k, &gens, &[y]);
                        gens.push(y);
                        grown = true;
                    }
                }
            }
            if !grown {
                return k;
            }
        }
    }

    pub fn centralizer(&self, h: &SubgroupSet) -> SubgroupSet {
        let gens = self.generating_set(h);
        let mut bits = BitSet::new(self.order());
        for g in 0..self.order() as ElemId {
            if gens.iter().all(|&x| self.mult(g, x) == self.mult(x, g)) {
                bits.insert(g as usize);
            }
        }
        SubgroupSet::from_bits_unchecked(bits)
    }

    pub fn normalizer(&self, h: &SubgroupSet) -> SubgroupSet {
        let gens = self.generating_set(h);
        let mut bits = BitSet::new(self.order());
        for g in 0..self.order() as ElemId {
            if gens.iter().all(|&x| h.contains(self.conj(x, g))) {
                bits.insert(g as usize);
            }
        }
        SubgroupSet::from_bits_unchecked(bits)
    }

    /// Commutator subgroup `[h, h]`: normal closure in `h` of the generator commutators.
    pub fn derived_subgroup(&self, h: &SubgroupSet) -> SubgroupSet {
        let gens = self.generating_set(h);
        let mut comms = Vec::new();
        for &a in &gens {
            for &b in &gens {
                // [a, b] = a^-1 b^-1 a b
                let c = self.mult(self.mult(self.inv(a), self.inv(b)), self.mult(a, b));
                comms.push(c);
            }
        }
        let seed = self.extend(&self.trivial_subgroup(), &[], &comms);
        self.normal_closure_within(&seed, &gens)
    }

    /// Derived series of `h`, ending at the first repeated term.
    pub fn derived_series_of(&self, h: &SubgroupSet) -> Vec<SubgroupSet> {
        let mut series = vec![h.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.derived_subgroup(last);
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn derived_series(&self) -> Vec<SubgroupSet> {
        self.derived_series_of(&self.whole())
    }

    pub fn subgroup_is_solvable(&self, h: &SubgroupSet) -> bool {
        self.derived_series_of(h).last().unwrap().order() == 1
    }

    pub fn is_solvable(&self) -> bool {
        self.subgroup_is_solvable(&self.whole())
    }

    /// `G/N` acting on the cosets of `n`.
    pub fn quotient(&self, n: &SubgroupSet, opts: GroupOptions) -> Result<FiniteGroup> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut label = vec![u32::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() as ElemId {
            if label[g as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(g);
            for x in n.elements() {
                label[self.mult(x, g) as usize] = c;
            }
        }
        let degree = reps.len();
        let gens = self
            .gen_ids
            .iter()
            .map(|&s| {
                let images = reps.iter().map(|&r| label[self.mult(r, s) as usize]).collect();
                Permutation::from_images(images)
            })
            .collect::<Result<Vec<_>>>()?;
        let gens = gens.into_iter().filter(|p| !p.is_identity()).collect();
        FiniteGroup::generate(degree, gens, opts)
    }

    /// Elements fixing every point in `points`.
    pub fn pointwise_stabilizer(&self, points: impl IntoIterator<Item = u32> + Clone) -> SubgroupSet {
        let mut bits = BitSet::new(self.order());
        for (i, p) in self.elements.iter().enumerate() {
            if points.clone().into_iter().all(|x| p.apply(x) == x) {
                bits.insert(i);
            }
        }
        SubgroupSet::from_bits_unchecked(bits)
    }
}

/// `a × b` acting on the disjoint union of their point sets, `a` first.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, opts: GroupOptions) -> Result<FiniteGroup> {
    let (da, db) = (a.degree(), b.degree());
    let degree = da + db;
    let gens = a
        .generators()
        .iter()
        .map(|g| g.embed(0, degree))
        .chain(b.generators().iter().map(|g| g.embed(da, degree)))
        .collect();
    FiniteGroup::generate(degree, gens, opts)
}

fn pack(images: impl Iterator<Item = u32>, radix: u128) -> u128 {
    images.fold(0u128, |acc, x| acc * radix + x as u128)
}

fn build_index(degree: usize, elements: &[Permutation], full: FxHashMap<Box<[u32]>, ElemId>) -> ElementIndex {
    // greedy base: each new point is moved by something fixing the earlier ones
    let mut base: Vec<u32> = Vec::new();
    let mut live: Vec<&Permutation> = elements.iter().skip(1).collect();
    while let Some(p) = live.first() {
        let point = (0..degree as u32).find(|&x| p.apply(x) != x).unwrap();
        base.push(point);
        live.retain(|q| q.apply(point) == point);
    }
    let radix = degree as u128;
    let fits = (base.len() as f64) * (degree as f64).log2() < 127.0;
    if !fits {
        return ElementIndex::Full(full);
    }
    let map = elements
        .iter()
        .enumerate()
        .map(|(i, p)| (pack(base.iter().map(|&b| p.apply(b)), radix), i as ElemId))
        .collect();
    ElementIndex::Packed { base, radix, map }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::generate(3, vec![perm(3, &[&[0, 1, 2]]), perm(3, &[&[0, 1]])], GroupOptions::default()).unwrap()
    }

    fn s4() -> FiniteGroup {
        FiniteGroup::generate(4, vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[0, 1]])], GroupOptions::default())
            .unwrap()
    }

    fn sub(g: &FiniteGroup, gens: &[Permutation]) -> SubgroupSet {
        let ids: Vec<_> = gens.iter().map(|p| g.id_of(p).unwrap()).collect();
        g.subgroup_generated(&ids).unwrap()
    }

    /// Brute-force closure oracle: multiply until nothing new appears.
    fn naive_closure(g: &FiniteGroup, seed: &[ElemId]) -> BitSet {
        let mut bits = BitSet::new(g.order());
        bits.insert(0);
        seed.iter().for_each(|&s| {
            bits.insert(s as usize);
        });
        loop {
            let members: Vec<_> = bits.iter().collect();
            let before = bits.count();
            for &a in &members {
                for &b in &members {
                    bits.insert(g.mult(a as ElemId, b as ElemId) as usize);
                }
            }
            if bits.count() == before {
                return bits;
            }
        }
    }

    #[test]
    fn s3_by_hand() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.element(IDENTITY), &Permutation::identity(3));
        for a in 0..6 {
            assert_eq!(g.mult(a, g.inv(a)), IDENTITY);
            for b in 0..6 {
                let p = g.element(a).compose(g.element(b));
                assert_eq!(g.element(g.mult(a, b)), &p);
            }
        }
    }

    #[test]
    fn words_evaluate_to_their_element() {
        let g = s4();
        assert_eq!(g.word_string(IDENTITY), "e");
        for x in 0..g.order() as ElemId {
            let p = g
                .word(x)
                .iter()
                .fold(Permutation::identity(4), |acc, &k| acc.compose(&g.generators()[k]));
            assert_eq!(&p, g.element(x));
        }
        assert_eq!(g.word_string(g.generator_ids()[1]), "g1");
    }

    #[test]
    fn subgroup_from_bits_accepts_exactly_subgroups() {
        let g = s4();
        let v4 = sub(&g, &[perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])]);
        let (h, gens) = g.subgroup_from_bits(v4.bits()).unwrap();
        assert_eq!(h, v4);
        assert_eq!(gens.len(), 2);
        let mut broken = v4.bits().clone();
        broken.insert(g.id_of(&perm(4, &[&[0, 1]])).unwrap() as usize);
        assert!(g.subgroup_from_bits(&broken).is_none());
        let mut no_identity = v4.bits().clone();
        no_identity.remove(0);
        assert!(g.subgroup_from_bits(&no_identity).is_none());
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::generate(1, vec![], GroupOptions::default()).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.is_solvable());
        assert_eq!(g.derived_series().len(), 1);
    }

    #[test]
    fn degree_mismatch_and_cap() {
        let err = FiniteGroup::generate(3, vec![perm(4, &[&[0, 1]])], GroupOptions::default());
        assert!(matches!(err, Err(Error::DegreeMismatch { .. })));
        let opts = GroupOptions {
            order_cap: 5,
            ..GroupOptions::default()
        };
        let err = FiniteGroup::generate(3, vec![perm(3, &[&[0, 1, 2]]), perm(3, &[&[0, 1]])], opts);
        assert!(matches!(err, Err(Error::OrderCapExceeded { cap: 5 })));
    }

    #[test]
    fn ids_are_deterministic() {
        let a = s4();
        let b = s4();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn oracle_and_table_agree() {
        let gens = vec![perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1]])];
        let t = FiniteGroup::generate(5, gens.clone(), GroupOptions::default()).unwrap();
        let o = FiniteGroup::generate(
            5,
            gens,
            GroupOptions {
                table_threshold: 0,
                ..GroupOptions::default()
            },
        )
        .unwrap();
        assert_eq!(t.order(), 120);
        for a in 0..120 {
            for b in 0..120 {
                assert_eq!(t.mult(a, b), o.mult(a, b));
            }
        }
    }

    #[test]
    fn closure_matches_naive() {
        let g = s4();
        for a in 0..24 {
            for b in 0..24 {
                let fast = g.subgroup_generated(&[a, b]).unwrap();
                assert_eq!(fast.bits(), &naive_closure(&g, &[a, b]), "seed {a},{b}");
                assert_eq!(fast.order(), fast.bits().count());
            }
        }
        assert_eq!(g.subgroup_generated(&[]).unwrap().order(), 1);
        assert!(g.subgroup_generated(&[99]).is_err());
    }

    #[test]
    fn s3_normality_core_closure_centralizer() {
        let g = s3();
        let z3 = sub(&g, &[perm(3, &[&[0, 1, 2]])]);
        let z2 = sub(&g, &[perm(3, &[&[0, 1]])]);
        assert_eq!(z3.order(), 3);
        assert!(g.is_normal(&z3));
        assert!(!g.is_normal(&z2));
        assert!(g.is_normal(&g.whole()));
        assert_eq!(g.core(&z2).order(), 1);
        assert_eq!(g.normal_closure(&z2).order(), 6);
        assert_eq!(g.core(&z3), z3);
        assert_eq!(g.normal_closure(&z3), z3);
        assert_eq!(g.centralizer(&g.trivial_subgroup()).order(), 6);
        assert_eq!(g.centralizer(&z3), z3);
        assert_eq!(g.conjugates(&z2).len(), 3);
    }

    #[test]
    fn derived_series_s4_and_a5() {
        let g = s4();
        let orders: Vec<_> = g.derived_series().iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![24, 12, 4, 1]);
        let a5 = FiniteGroup::generate(
            5,
            vec![perm(5, &[&[0, 1, 2]]), perm(5, &[&[0, 1, 3]]), perm(5, &[&[0, 1, 4]])],
            GroupOptions::default(),
        )
        .unwrap();
        assert_eq!(a5.order(), 60);
        assert!(!a5.is_solvable());
        assert_eq!(a5.derived_series().len(), 1);
    }

    #[test]
    fn quotient_s4_by_v4() {
        let g = s4();
        let v4 = sub(&g, &[perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])]);
        assert_eq!(v4.order(), 4);
        let q = g.quotient(&v4, GroupOptions::default()).unwrap();
        assert_eq!(q.order(), 6);
        assert!(!q.is_abelian());
        assert_eq!(g.quotient(&g.whole(), GroupOptions::default()).unwrap().order(), 1);
        assert_eq!(g.quotient(&g.trivial_subgroup(), GroupOptions::default()).unwrap().order(), 24);
        let z2 = sub(&g, &[perm(4, &[&[0, 1]])]);
        assert!(matches!(g.quotient(&z2, GroupOptions::default()), Err(Error::NotNormal)));
    }

    #[test]
    fn products() {
        let c2 = FiniteGroup::generate(2, vec![perm(2, &[&[0, 1]])], GroupOptions::default()).unwrap();
        let c3 = FiniteGroup::generate(3, vec![perm(3, &[&[0, 1, 2]])], GroupOptions::default()).unwrap();
        let p = direct_product(&c2, &c3, GroupOptions::default()).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.is_abelian());
        let t = direct_product(&FiniteGroup::trivial(), &s4(), GroupOptions::default()).unwrap();
        assert_eq!(t.order(), 24);
    }
}
