#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use latcheck_core::catalog::{tier, CatalogEntry};
use latcheck_core::{BitSet, ElemId, FiniteGroup, GroupOptions, GroupSpec, LatticeOptions, SubgroupLattice, Tier};

pub fn group(spec: &str) -> Arc<FiniteGroup> {
    Arc::new(GroupSpec::parse(spec).unwrap().build(GroupOptions::default()).unwrap())
}

pub fn lattice(spec: &str) -> SubgroupLattice {
    SubgroupLattice::enumerate(group(spec), LatticeOptions::default()).unwrap()
}

/// Every core-catalog lattice, built once per test binary.
pub fn core_lattices() -> &'static [(CatalogEntry, SubgroupLattice)] {
    static LATTICES: OnceLock<Vec<(CatalogEntry, SubgroupLattice)>> = OnceLock::new();
    LATTICES.get_or_init(|| {
        tier(Tier::Core)
            .into_iter()
            .map(|e| {
                let lat = SubgroupLattice::enumerate(
                    Arc::new(e.spec.build(GroupOptions::default()).unwrap()),
                    LatticeOptions::default(),
                )
                .unwrap();
                (e, lat)
            })
            .collect()
    })
}

/// A subgroup lattice held as plain element sets, with order, meet and join
/// tables recomputed from the sets themselves.
pub struct Naive {
    pub sets: Vec<Vec<bool>>,
    orders: Vec<usize>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

impl Naive {
    pub fn from_lattice(lat: &SubgroupLattice) -> Self {
        let n = lat.group().order();
        let sets: Vec<Vec<bool>> = lat
            .ids()
            .map(|x| (0..n).map(|e| lat.subgroup(x).contains(e as ElemId)).collect())
            .collect();
        Self::from_sets(sets)
    }

    pub fn from_sets(sets: Vec<Vec<bool>>) -> Self {
        let k = sets.len();
        let orders: Vec<usize> = sets.iter().map(|s| s.iter().filter(|&&b| b).count()).collect();
        let leq: Vec<Vec<bool>> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| sets[a].iter().zip(&sets[b]).all(|(&x, &y)| !x || y))
                    .collect()
            })
            .collect();
        let index: HashMap<&Vec<bool>, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let meet = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        let want: Vec<bool> = sets[a].iter().zip(&sets[b]).map(|(&x, &y)| x && y).collect();
                        *index.get(&want).expect("intersection is listed")
                    })
                    .collect()
            })
            .collect();
        let join = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        (0..k)
                            .filter(|&z| leq[a][z] && leq[b][z])
                            .min_by_key(|&z| orders[z])
                            .expect("the whole group is listed")
                    })
                    .collect()
            })
            .collect();
        Naive {
            sets,
            orders,
            leq,
            meet,
            join,
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn order(&self, x: usize) -> usize {
        self.orders[x]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    /// Smallest listed set containing both.
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !(0..self.len()).any(|z| self.lt(a, z) && self.lt(z, b))
    }

    pub fn covers(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|a| (0..self.len()).filter(|&b| self.is_cover(a, b)).collect())
            .collect()
    }

    /// Both modular identities checked over every pair, straight from the definition.
    pub fn is_modular(&self, m: usize) -> bool {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                if self.leq(x, y) && self.join(x, self.meet(m, y)) != self.meet(self.join(x, m), y) {
                    return false;
                }
                if self.leq(m, y) && self.join(m, self.meet(x, y)) != self.meet(self.join(m, x), y) {
                    return false;
                }
            }
        }
        true
    }
}

/// Is the element set closed under the group's product? (Finite, so that is enough.)
pub fn closed(g: &FiniteGroup, set: &[ElemId]) -> bool {
    let mut member = vec![false; g.order()];
    for &x in set {
        member[x as usize] = true;
    }
    set.iter().all(|&a| set.iter().all(|&b| member[g.mult(a, b) as usize]))
}

/// Every subgroup found by filtering all subsets that contain the identity.
pub fn subgroups_by_subset_filter(g: &FiniteGroup) -> Vec<BitSet> {
    let n = g.order();
    assert!(n <= 20, "subset filter is exponential");
    let mut found = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let set: Vec<ElemId> = std::iter::once(0)
            .chain((1..n as ElemId).filter(|&i| mask >> (i - 1) & 1 == 1))
            .collect();
        if closed(g, &set) {
            let mut bits = BitSet::new(n);
            for x in set {
                bits.insert(x as usize);
            }
            found.push(bits);
        }
    }
    found
}

/// A chief series found without the lattice: a maximal chain of normal
/// subgroups, each normal subgroup tested by conjugating every element.
pub fn chief_series_orders(g: &FiniteGroup, naive: &Naive) -> Vec<usize> {
    let n = g.order();
    let normal: Vec<usize> = (0..naive.len())
        .filter(|&h| {
            (0..n).all(|x| !naive.sets[h][x] || (0..n).all(|c| naive.sets[h][g.conj(x as ElemId, c as ElemId) as usize]))
        })
        .collect();
    // walk up greedily by minimal normal steps
    let mut cur = *normal.iter().min_by_key(|&&h| naive.order(h)).unwrap();
    let mut orders = vec![naive.order(cur)];
    loop {
        let next = normal
            .iter()
            .copied()
            .filter(|&h| naive.lt(cur, h))
            .min_by_key(|&h| naive.order(h));
        match next {
            Some(h) => {
                cur = h;
                orders.push(naive.order(h));
            }
            None => break,
        }
    }
    orders
}
