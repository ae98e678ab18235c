//! Mechanical checks of the chain-length theorems and lemmas over groups.
//!
//! Each check yields a [`Verdict`] keyed by a stable claim id. Claims whose
//! hypotheses never apply are reported as `skipped-precondition`, and work
//! cut short by a deadline or size cap as `skipped-budget`.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{CatalogEntry, Tier};
use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup, GroupOptions};
use crate::invariants::{self, chief_factors_prime};
use crate::lattice::{Chain, LatticeOptions, SubgroupId, SubgroupLattice};
use crate::spec::GroupSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedPrecondition,
    SkippedBudget,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedPrecondition => "skipped-precondition",
            Status::SkippedBudget => "skipped-budget",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which family of claims to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Lemmas,
    All,
}

impl Suite {
    fn includes(self, family: Suite) -> bool {
        self == Suite::All || self == family
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Suite::Core),
            "lemmas" => Ok(Suite::Lemmas),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidSpec(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClaimInfo {
    pub id: &'static str,
    pub suite: Suite,
    pub statement: &'static str,
}

pub const CLAIMS: &[ClaimInfo] = &[
    ClaimInfo {
        id: "thm.concl",
        suite: Suite::Core,
        statement: "G is solvable iff minmaxl(G) = modl(G)",
    },
    ClaimInfo {
        id: "thm.mod",
        suite: Suite::Core,
        statement: "modl(G) = chiefl(G)",
    },
    ClaimInfo {
        id: "thm.solv",
        suite: Suite::Core,
        statement: "solvable G has a maximal chain of length chiefl(G)",
    },
    ClaimInfo {
        id: "thm.nonsolv",
        suite: Suite::Core,
        statement: "nonsolvable G has minmaxl(G) >= chiefl(G) + 2",
    },
    ClaimInfo {
        id: "cor.mmlgechl",
        suite: Suite::Core,
        statement: "minmaxl(G) >= chiefl(G)",
    },
    ClaimInfo {
        id: "iwasawa.graded",
        suite: Suite::Core,
        statement: "L(G) is graded iff every chief factor of G has prime order",
    },
    ClaimInfo {
        id: "fact.l2p.1",
        suite: Suite::Core,
        statement: "L2(p) is simple for p > 3",
    },
    ClaimInfo {
        id: "fact.l2p.2",
        suite: Suite::Core,
        statement: "|L2(p)| = p(p^2 - 1)/2",
    },
    ClaimInfo {
        id: "fact.l2p.3",
        suite: Suite::Core,
        statement: "maximal subgroups of L2(5) have orders 6, 10, 12",
    },
    ClaimInfo {
        id: "fact.l2p.4",
        suite: Suite::Core,
        statement: "maximal subgroups of L2(31) have orders 60, 24, 30, 32, 465",
    },
    ClaimInfo {
        id: "fact.l2p.5",
        suite: Suite::Core,
        statement: "for p = 1 mod 5, L2(p) has a maximal subgroup of order 60 and every order-60 subgroup is maximal",
    },
    ClaimInfo {
        id: "eq.chn",
        suite: Suite::Lemmas,
        statement: "chiefl(G) = chiefl(G/N) + nl_G(N) for normal N",
    },
    ClaimInfo {
        id: "lem.cldiff",
        suite: Suite::Lemmas,
        statement: "chiefl(M) - chiefl(G) = nl_M(M_G) - nl_G(M_G) + nl_{M/M_G}((M n N)/M_G) - 1",
    },
    ClaimInfo {
        id: "cor.cdcor.1",
        suite: Suite::Lemmas,
        statement: "chiefl(M) >= chiefl(G) - 1 for maximal M",
    },
    ClaimInfo {
        id: "cor.cdcor.2",
        suite: Suite::Lemmas,
        statement: "M n N != M_G implies chiefl(M) >= chiefl(G)",
    },
    ClaimInfo {
        id: "cor.cdcor.3",
        suite: Suite::Lemmas,
        statement: "(M n N)/M_G neither trivial nor minimal normal in M/M_G implies chiefl(M) >= chiefl(G) + 1",
    },
    ClaimInfo {
        id: "prop.chlesns",
        suite: Suite::Lemmas,
        statement: "G nonsolvable, M solvable maximal implies chiefl(M) > chiefl(G)",
    },
    ClaimInfo {
        id: "lem.modjoin",
        suite: Suite::Lemmas,
        statement: "the join of two modular elements is modular",
    },
    ClaimInfo {
        id: "lem.liusag",
        suite: Suite::Lemmas,
        statement: "A maximal in B, N normal: AN = BN or AN is maximal in BN",
    },
    ClaimInfo {
        id: "lem.projdp",
        suite: Suite::Lemmas,
        statement: "minmaxl(G) > minmaxl(G/N) for normal N != 1",
    },
    ClaimInfo {
        id: "lem.dpsimp",
        suite: Suite::Lemmas,
        statement: "minmaxl(G x S) >= minmaxl(G) + 2 for S nonabelian simple not a section of G",
    },
    ClaimInfo {
        id: "lem.minmod",
        suite: Suite::Lemmas,
        statement: "a minimal nontrivial modular M that is not minimal normal has a normal prime-order subgroup in M^G",
    },
];

pub fn claim(id: &str) -> Option<&'static ClaimInfo> {
    CLAIMS.iter().find(|c| c.id == id)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub claim: &'static str,
    pub status: Status,
    /// Witness on pass, counterexample on fail, reason on skip.
    pub detail: String,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub spec: String,
    pub tier: Option<Tier>,
    pub order: Option<usize>,
    pub subgroups: Option<usize>,
    pub verdicts: Vec<Verdict>,
}

impl VerdictReport {
    pub fn verdict(&self, claim: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.claim == claim)
    }

    pub fn status(&self, claim: &str) -> Option<Status> {
        self.verdict(claim).map(|v| v.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.verdicts.iter().filter(|v| v.status == status).count()
    }

    /// The report with timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> VerdictReport {
        let mut r = self.clone();
        r.verdicts.iter_mut().for_each(|v| v.elapsed_ms = 0.0);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub groups: Vec<VerdictReport>,
}

impl SuiteReport {
    pub fn count(&self, status: Status) -> usize {
        self.groups.iter().map(|g| g.count(status)).sum()
    }

    pub fn failed(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }
}

#[derive(Clone, Debug)]
pub struct HarnessOptions {
    pub suite: Suite,
    pub group: GroupOptions,
    pub lattice: LatticeOptions,
    /// Shared by every group in a run; past it, remaining claims are skipped-budget.
    pub deadline: Option<Instant>,
    /// Largest lattice whose modular elements are scanned exhaustively.
    pub modular_scan_cap: usize,
    /// Most (cover, normal subgroup) triples examined by `lem.liusag`.
    pub liusag_cap: usize,
    /// Largest product order built for `lem.dpsimp`.
    pub dpsimp_order_cap: usize,
    pub dpsimp_factors: Vec<GroupSpec>,
    /// Forces the named claim to fail; used to test exit codes.
    pub inject_fail: Option<String>,
    pub jobs: Option<usize>,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            suite: Suite::All,
            group: GroupOptions::default(),
            lattice: LatticeOptions::default(),
            deadline: None,
            modular_scan_cap: 5000,
            liusag_cap: 2_000_000,
            dpsimp_order_cap: 3000,
            dpsimp_factors: vec![GroupSpec::Alt(5), GroupSpec::Psl2(7)],
            inject_fail: None,
            jobs: None,
        }
    }
}

impl HarnessOptions {
    fn lattice_opts(&self) -> LatticeOptions {
        LatticeOptions {
            deadline: self.deadline.or(self.lattice.deadline),
            ..self.lattice
        }
    }

    fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() > d)
    }
}

/// One group with its lattice and the invariants most claims share.
pub struct GroupContext {
    pub spec: String,
    pub lat: SubgroupLattice,
    pub solvable: bool,
    pub minmaxl: (usize, Chain),
    pub chiefl: (usize, Chain),
    /// `None` when the lattice is past the modular scan cap.
    pub modular: Option<Vec<SubgroupId>>,
    pub modl: Option<Chain>,
}

impl GroupContext {
    pub fn build(spec: &GroupSpec, opts: &HarnessOptions) -> Result<Self> {
        let group = spec.build(opts.group)?;
        let lat = SubgroupLattice::enumerate(Arc::new(group), opts.lattice_opts())?;
        Self::from_lattice(spec.to_string(), lat, opts)
    }

    pub fn from_lattice(spec: String, lat: SubgroupLattice, opts: &HarnessOptions) -> Result<Self> {
        let solvable = lat.group().is_solvable();
        let minmaxl = invariants::minmaxl(&lat);
        let chiefl = invariants::chiefl(&lat)?;
        let (modular, modl) = if lat.len() <= opts.modular_scan_cap {
            let m = invariants::modular_elements(&lat);
            let chain = invariants::modl_from(&lat, &m);
            (Some(m), Some(chain))
        } else {
            (None, None)
        };
        Ok(GroupContext {
            spec,
            lat,
            solvable,
            minmaxl,
            chiefl,
            modular,
            modl,
        })
    }
}

fn describe(lat: &SubgroupLattice, chain: &Chain) -> String {
    let orders: Vec<String> = chain.ids().iter().map(|&x| format!("{x}:{}", lat.order_of(x))).collect();
    format!("[{}]", orders.join(" < "))
}

type Outcome = (Status, String);

fn pass(detail: impl Into<String>) -> Outcome {
    (Status::Pass, detail.into())
}

fn fail(detail: impl Into<String>) -> Outcome {
    (Status::Fail, detail.into())
}

fn precondition(detail: impl Into<String>) -> Outcome {
    (Status::SkippedPrecondition, detail.into())
}

fn budget(detail: impl Into<String>) -> Outcome {
    (Status::SkippedBudget, detail.into())
}

/// Instances of one claim checked across several configurations.
struct Tally {
    checked: usize,
    failure: Option<String>,
    budget: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failure: None,
            budget: None,
        }
    }

    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(counterexample());
        }
    }

    fn outcome(self, what: &str) -> Outcome {
        match (self.failure, self.budget) {
            (Some(c), _) => fail(c),
            (None, Some(b)) => budget(format!("{b} ({} {what} checked before stopping)", self.checked)),
            (None, None) if self.checked == 0 => precondition(format!("no {what} satisfy the hypotheses")),
            (None, None) => pass(format!("{} {what} checked", self.checked)),
        }
    }
}

fn budget_error(e: &Error) -> bool {
    matches!(
        e,
        Error::BudgetExhausted | Error::LatticeCapExceeded { .. } | Error::OrderCapExceeded { .. }
    )
}

/// Runs claim computations, timing them and turning budget errors into skips.
struct Runner<'a> {
    opts: &'a HarnessOptions,
    verdicts: Vec<Verdict>,
}

impl Runner<'_> {
    fn run<const K: usize>(&mut self, ids: [&'static str; K], f: impl FnOnce() -> Result<[Outcome; K]>) {
        let start = Instant::now();
        let outcomes = if self.opts.out_of_time() {
            Ok(std::array::from_fn(|_| budget("deadline reached before the claim ran")))
        } else {
            f()
        };
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        let outcomes: [Outcome; K] = match outcomes {
            Ok(o) => o,
            Err(e) if budget_error(&e) => std::array::from_fn(|_| budget(e.to_string())),
            Err(e) => std::array::from_fn(|_| fail(format!("error while checking: {e}"))),
        };
        for (id, (mut status, mut detail)) in ids.into_iter().zip(outcomes) {
            if self.opts.inject_fail.as_deref() == Some(id) {
                detail = format!("injected failure (was {status}: {detail})");
                status = Status::Fail;
            }
            self.verdicts.push(Verdict {
                claim: id,
                status,
                detail,
                elapsed_ms,
            });
        }
    }
}

fn needs_modular(cx: &GroupContext) -> std::result::Result<(&[SubgroupId], &Chain), Outcome> {
    match (&cx.modular, &cx.modl) {
        (Some(m), Some(c)) => Ok((m, c)),
        _ => Err(budget(format!(
            "modular-element scan not run on {} subgroups",
            cx.lat.len()
        ))),
    }
}

/// Main theorems and the Iwasawa cross-check.
fn main_theorems(cx: &GroupContext, r: &mut Runner) {
    let lat = &cx.lat;
    let (mml, mml_chain) = (&cx.minmaxl.0, &cx.minmaxl.1);
    let (chl, chief_chain) = (&cx.chiefl.0, &cx.chiefl.1);

    r.run(["cor.mmlgechl"], || {
        Ok([if mml >= chl {
            pass(format!("minmaxl {mml} >= chiefl {chl}"))
        } else {
            fail(format!(
                "minmaxl {mml} < chiefl {chl}; maximal chain {} vs chief series {}",
                describe(lat, mml_chain),
                describe(lat, chief_chain)
            ))
        }])
    });

    r.run(["thm.mod"], || {
        Ok([match needs_modular(cx) {
            Err(o) => o,
            Ok((_, modl_chain)) => {
                let modl = modl_chain.length();
                if modl == *chl {
                    pass(format!("modl = chiefl = {chl}"))
                } else {
                    fail(format!(
                        "modl {modl} != chiefl {chl}; modular chain {} vs chief series {}",
                        describe(lat, modl_chain),
                        describe(lat, chief_chain)
                    ))
                }
            }
        }])
    });

    r.run(["thm.concl"], || {
        Ok([match needs_modular(cx) {
            Err(o) => o,
            Ok((_, modl_chain)) => {
                let modl = modl_chain.length();
                let equal = *mml == modl;
                let line = format!("solvable {} minmaxl {mml} modl {modl}", cx.solvable);
                if equal == cx.solvable {
                    pass(line)
                } else {
                    fail(format!(
                        "{line}; maximal chain {} modular chain {}",
                        describe(lat, mml_chain),
                        describe(lat, modl_chain)
                    ))
                }
            }
        }])
    });

    r.run(["thm.solv"], || {
        Ok([if !cx.solvable {
            precondition("group is not solvable")
        } else if mml == chl && mml_chain.is_maximal(lat) && mml_chain.length() == *chl {
            pass(format!("maximal chain {} of length {chl}", describe(lat, mml_chain)))
        } else {
            fail(format!(
                "shortest maximal chain {} has length {mml}, chiefl {chl}",
                describe(lat, mml_chain)
            ))
        }])
    });

    r.run(["thm.nonsolv"], || {
        Ok([if cx.solvable {
            precondition("group is solvable")
        } else if *mml >= chl + 2 {
            pass(format!("minmaxl {mml} >= chiefl {chl} + 2"))
        } else {
            fail(format!(
                "minmaxl {mml} < chiefl {chl} + 2; maximal chain {}",
                describe(lat, mml_chain)
            ))
        }])
    });

    r.run(["iwasawa.graded"], || {
        let graded = lat.is_graded();
        let prime = chief_factors_prime(lat, chief_chain);
        let line = format!("graded {graded}, prime chief factors {prime}");
        Ok([if graded == prime {
            pass(line)
        } else {
            fail(format!("{line}; chief series {}", describe(lat, chief_chain)))
        }])
    });
}

/// Facts about L2(p), run on `psl2:p` specs only.
fn l2p_facts(cx: &GroupContext, p: u32, r: &mut Runner) {
    let lat = &cx.lat;
    let coatom_orders = || {
        let mut o: Vec<usize> = lat.coatoms().iter().map(|&c| lat.order_of(c)).collect();
        o.sort_unstable();
        o.dedup();
        o
    };

    r.run(["fact.l2p.1"], || {
        let normals = lat.normal_subgroups();
        Ok([if lat.len() > 1 && normals == [lat.bottom(), lat.top()] {
            pass("normal subgroups are exactly 1 and G")
        } else {
            fail(format!("normal subgroups {normals:?}"))
        }])
    });

    r.run(["fact.l2p.2"], || {
        let expected = p as usize * (p as usize * p as usize - 1) / 2;
        let order = lat.group().order();
        Ok([if order == expected {
            pass(format!("order {order}"))
        } else {
            fail(format!("order {order}, expected {expected}"))
        }])
    });

    r.run(["fact.l2p.3"], || {
        Ok([if p != 5 {
            precondition("only stated for p = 5")
        } else {
            let o = coatom_orders();
            if o.iter().all(|x| [6, 10, 12].contains(x)) {
                pass(format!("maximal subgroup orders {o:?}"))
            } else {
                fail(format!("maximal subgroup orders {o:?}"))
            }
        }])
    });

    r.run(["fact.l2p.4"], || {
        Ok([if p != 31 {
            precondition("only stated for p = 31")
        } else {
            let o = coatom_orders();
            if o.iter().all(|x| [24, 30, 32, 60, 465].contains(x)) {
                pass(format!("maximal subgroup orders {o:?}"))
            } else {
                fail(format!("maximal subgroup orders {o:?}"))
            }
        }])
    });

    r.run(["fact.l2p.5"], || {
        Ok([if p % 5 != 1 {
            precondition("p is not 1 mod 5")
        } else {
            let sixty: Vec<SubgroupId> = lat.ids().filter(|&x| lat.order_of(x) == 60).collect();
            let not_max: Vec<SubgroupId> = sixty.iter().copied().filter(|&x| !lat.is_cover(x, lat.top())).collect();
            if sixty.is_empty() {
                fail("no subgroup of order 60")
            } else if !not_max.is_empty() {
                fail(format!("order-60 subgroups {not_max:?} are not maximal"))
            } else {
                pass(format!("{} subgroups of order 60, all maximal", sixty.len()))
            }
        }])
    });
}

/// Lattice of the subgroup `id` regarded as a group in its own right.
fn subgroup_lattice(lat: &SubgroupLattice, id: SubgroupId, opts: &HarnessOptions) -> Result<SubgroupLattice> {
    let g = lat.group();
    let gens = lat.generators(id).iter().map(|&x| g.element(x).clone()).collect();
    let h = FiniteGroup::generate(g.degree(), gens, opts.group)?;
    SubgroupLattice::enumerate(Arc::new(h), opts.lattice_opts())
}

struct QuotientData {
    normal: SubgroupId,
    chiefl: usize,
    minmaxl: usize,
}

fn quotients(cx: &GroupContext, opts: &HarnessOptions) -> Result<Vec<QuotientData>> {
    let lat = &cx.lat;
    lat.normal_subgroups()
        .into_iter()
        .map(|n| {
            if opts.out_of_time() {
                return Err(Error::BudgetExhausted);
            }
            let q = lat.group().quotient(lat.subgroup(n), opts.group)?;
            let qlat = SubgroupLattice::enumerate(Arc::new(q), opts.lattice_opts())?;
            Ok(QuotientData {
                normal: n,
                chiefl: invariants::chiefl(&qlat)?.0,
                minmaxl: invariants::minmaxl(&qlat).0,
            })
        })
        .collect()
}

fn lemmas(cx: &GroupContext, r: &mut Runner) {
    let opts = r.opts;
    let lat = &cx.lat;
    let top = lat.top();
    let bottom = lat.bottom();
    let chl = cx.chiefl.0;

    // both claims use the quotient lattices; the first computes them
    let mut quot: Option<Vec<QuotientData>> = None;

    r.run(["eq.chn"], || {
        if lat.len() == 1 {
            return Ok([precondition("trivial group")]);
        }
        let qs = quot.insert(quotients(cx, opts)?);
        let mut t = Tally::new();
        for q in qs.iter() {
            let nl = invariants::nl(lat, top, bottom, q.normal)?;
            t.record(chl == q.chiefl + nl, || {
                format!(
                    "N = {} (order {}): chiefl(G) {chl} != chiefl(G/N) {} + nl {nl}",
                    q.normal,
                    lat.order_of(q.normal),
                    q.chiefl
                )
            });
        }
        Ok([t.outcome("normal subgroups")])
    });

    r.run(["lem.projdp"], || {
        let qs = match quot.take() {
            Some(qs) => qs,
            None => quotients(cx, opts)?,
        };
        let mml = cx.minmaxl.0;
        let mut t = Tally::new();
        for q in qs.iter().filter(|q| q.normal != bottom) {
            t.record(mml > q.minmaxl, || {
                format!(
                    "N = {} (order {}): minmaxl(G) {mml} <= minmaxl(G/N) {}",
                    q.normal,
                    lat.order_of(q.normal),
                    q.minmaxl
                )
            });
        }
        Ok([t.outcome("nontrivial normal subgroups")])
    });

    r.run(
        ["lem.cldiff", "cor.cdcor.1", "cor.cdcor.2", "cor.cdcor.3", "prop.chlesns"],
        || maximal_subgroup_lemmas(cx, opts),
    );

    r.run(["lem.modjoin"], || {
        Ok([match needs_modular(cx) {
            Err(o) => o,
            Ok((modular, _)) => {
                let mut t = Tally::new();
                for (i, &m) in modular.iter().enumerate() {
                    for &n in &modular[i + 1..] {
                        let j = lat.join(m, n);
                        t.record(modular.binary_search(&j).is_ok(), || {
                            format!("{m} v {n} = {j} is not modular")
                        });
                    }
                }
                t.outcome("pairs of modular elements")
            }
        }])
    });

    r.run(["lem.liusag"], || {
        let normals = lat.normal_subgroups();
        let mut t = Tally::new();
        'outer: for a in lat.ids() {
            for &b in lat.upper_covers(a) {
                if t.checked + normals.len() > opts.liusag_cap {
                    t.budget = Some(format!("triple cap {} reached", opts.liusag_cap));
                    break 'outer;
                }
                for &n in &normals {
                    let an = lat.join(a, n);
                    let bn = lat.join(b, n);
                    t.record(an == bn || lat.is_cover(an, bn), || {
                        format!("A = {a}, B = {b}, N = {n}: AN = {an} is neither BN = {bn} nor maximal in it")
                    });
                }
            }
        }
        Ok([t.outcome("(A, B, N) triples")])
    });

    r.run(["lem.dpsimp"], || {
        if !cx.solvable {
            return Ok([precondition("only checked for solvable G")]);
        }
        let mut t = Tally::new();
        let mml = cx.minmaxl.0;
        for s in &opts.dpsimp_factors {
            let s_group = s.build(opts.group)?;
            let size = lat.group().order() * s_group.order();
            if size > opts.dpsimp_order_cap {
                t.budget = Some(format!("G x {s} has order {size} > {}", opts.dpsimp_order_cap));
                continue;
            }
            let prod = direct_product(lat.group(), &s_group, opts.group)?;
            let plat = SubgroupLattice::enumerate(Arc::new(prod), opts.lattice_opts())?;
            let pm = invariants::minmaxl(&plat).0;
            t.record(pm >= mml + 2, || format!("minmaxl(G x {s}) = {pm} < minmaxl(G) {mml} + 2"));
        }
        // a skipped factor does not hide a checked one
        if t.checked > 0 && t.failure.is_none() {
            t.budget = None;
        }
        Ok([t.outcome("simple factors")])
    });

    r.run(["lem.minmod"], || {
        Ok([match needs_modular(cx) {
            Err(o) => o,
            Ok((modular, _)) => minmod(lat, modular),
        }])
    });
}

fn minmod(lat: &SubgroupLattice, modular: &[SubgroupId]) -> Outcome {
    let bottom = lat.bottom();
    let nontrivial: Vec<SubgroupId> = modular.iter().copied().filter(|&m| m != bottom).collect();
    let normals: Vec<SubgroupId> = lat.normal_subgroups().into_iter().filter(|&n| n != bottom).collect();
    let mut t = Tally::new();
    for &m in &nontrivial {
        if nontrivial.iter().any(|&x| lat.lt(x, m)) {
            continue;
        }
        let minimal_normal = lat.is_normal(m) && !normals.iter().any(|&n| lat.lt(n, m));
        if minimal_normal {
            continue;
        }
        let closure = lat.normal_closure(m);
        let found = normals
            .iter()
            .find(|&&x| crate::spec::is_prime(lat.order_of(x) as u32) && lat.leq(x, closure));
        t.record(found.is_some(), || {
            format!("M = {m} (order {}): M^G = {closure} has no normal subgroup of prime order", lat.order_of(m))
        });
    }
    t.outcome("minimal modular elements that are not minimal normal")
}

fn maximal_subgroup_lemmas(cx: &GroupContext, opts: &HarnessOptions) -> Result<[Outcome; 5]> {
    let lat = &cx.lat;
    let top = lat.top();
    let bottom = lat.bottom();
    let chl = cx.chiefl.0 as i64;
    let normals = lat.normal_subgroups();

    let mut cldiff = Tally::new();
    let mut cd1 = Tally::new();
    let mut cd2 = Tally::new();
    let mut cd3 = Tally::new();
    let mut chlesns = Tally::new();

    let mut reps: Vec<SubgroupId> = lat.coatoms().iter().map(|&m| lat.class_representative(m)).collect();
    reps.sort_unstable();
    reps.dedup();
    for m in reps {
        if opts.out_of_time() {
            return Err(Error::BudgetExhausted);
        }
        // chiefl(M) from M's own lattice, independent of the nl terms below
        let mlat = subgroup_lattice(lat, m, opts)?;
        let chm = invariants::chiefl(&mlat)?.0 as i64;
        let mg = lat.core(m);
        let candidates: Vec<SubgroupId> = normals.iter().copied().filter(|&n| lat.lt(mg, n)).collect();
        let minimal: Vec<SubgroupId> = candidates
            .iter()
            .copied()
            .filter(|&n| !candidates.iter().any(|&k| lat.lt(k, n)))
            .collect();
        let nl_m_mg = invariants::nl(lat, m, bottom, mg)? as i64;
        let nl_g_mg = invariants::nl(lat, top, bottom, mg)? as i64;
        for n in minimal {
            let mn = lat.meet(m, n);
            let nl_quot = invariants::nl(lat, m, mg, mn)? as i64;
            let rhs = nl_m_mg - nl_g_mg + nl_quot - 1;
            let tag = || format!("M = {m} (order {}), N = {n} (order {})", lat.order_of(m), lat.order_of(n));
            cldiff.record(chm - chl == rhs, || {
                format!(
                    "{}: chiefl(M) - chiefl(G) = {} but nl terms give {nl_m_mg} - {nl_g_mg} + {nl_quot} - 1 = {rhs}",
                    tag(),
                    chm - chl
                )
            });
            cd1.record(chm >= chl - 1, || format!("{}: chiefl(M) {chm} < chiefl(G) {chl} - 1", tag()));
            if mn != mg {
                cd2.record(chm >= chl, || format!("{}: chiefl(M) {chm} < chiefl(G) {chl}", tag()));
                if nl_quot >= 2 {
                    cd3.record(chm > chl, || format!("{}: chiefl(M) {chm} < chiefl(G) {chl} + 1", tag()));
                }
            }
        }
        if !cx.solvable && mlat.group().is_solvable() {
            chlesns.record(chm > chl, || {
                format!("M = {m} (order {}): chiefl(M) {chm} <= chiefl(G) {chl}", lat.order_of(m))
            });
        }
    }
    let what = "(M, N) pairs";
    Ok([
        cldiff.outcome(what),
        cd1.outcome(what),
        cd2.outcome(what),
        cd3.outcome(what),
        chlesns.outcome("solvable maximal subgroups"),
    ])
}

fn psl2_prime(spec: &GroupSpec) -> Option<u32> {
    match *spec {
        GroupSpec::Psl2(p) => Some(p),
        _ => None,
    }
}

fn claims_for(spec: &GroupSpec, suite: Suite) -> Vec<&'static str> {
    CLAIMS
        .iter()
        .filter(|c| suite.includes(c.suite))
        .filter(|c| !c.id.starts_with("fact.l2p") || psl2_prime(spec).is_some())
        .map(|c| c.id)
        .collect()
}

/// Runs every selected claim on one group.
pub fn verify_group(spec: &GroupSpec, tier: Option<Tier>, opts: &HarnessOptions) -> VerdictReport {
    let start = Instant::now();
    let mut report = VerdictReport {
        spec: spec.to_string(),
        tier,
        order: None,
        subgroups: None,
        verdicts: Vec::new(),
    };
    let cx = match GroupContext::build(spec, opts) {
        Ok(cx) => cx,
        Err(e) => {
            let status = if budget_error(&e) { Status::SkippedBudget } else { Status::Fail };
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            report.verdicts = claims_for(spec, opts.suite)
                .into_iter()
                .map(|claim| Verdict {
                    claim,
                    status,
                    detail: format!("could not build the lattice: {e}"),
                    elapsed_ms,
                })
                .collect();
            return report;
        }
    };
    report.order = Some(cx.lat.group().order());
    report.subgroups = Some(cx.lat.len());
    let mut runner = Runner {
        opts,
        verdicts: Vec::new(),
    };
    if opts.suite.includes(Suite::Core) {
        main_theorems(&cx, &mut runner);
        if let Some(p) = psl2_prime(spec) {
            l2p_facts(&cx, p, &mut runner);
        }
    }
    if opts.suite.includes(Suite::Lemmas) {
        lemmas(&cx, &mut runner);
    }
    report.verdicts = runner.verdicts;
    report
}

/// Checks every entry, in parallel across entries; reports keep entry order.
pub fn run_suite(entries: &[CatalogEntry], opts: &HarnessOptions) -> Result<SuiteReport> {
    let work = || {
        entries
            .par_iter()
            .map(|e| verify_group(&e.spec, Some(e.tier), opts))
            .collect::<Vec<_>>()
    };
    let groups = match opts.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(SuiteReport { groups })
}

/// One line per verdict, for terminal output.
pub fn render(report: &VerdictReport) -> String {
    let mut out = String::new();
    let order = report.order.map_or("?".to_string(), |o| o.to_string());
    let subgroups = report.subgroups.map_or("?".to_string(), |o| o.to_string());
    let _ = writeln!(out, "{} (order {order}, {subgroups} subgroups)", report.spec);
    for v in &report.verdicts {
        let _ = writeln!(
            out,
            "  {:<15} {:<21} {:>9.1} ms  {}",
            v.claim, v.status.as_str(), v.elapsed_ms, v.detail
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verify(spec: &str, suite: Suite) -> VerdictReport {
        let opts = HarnessOptions {
            suite,
            ..HarnessOptions::default()
        };
        verify_group(&GroupSpec::parse(spec).unwrap(), None, &opts)
    }

    #[test]
    fn registry_ids_are_unique() {
        let mut ids: Vec<_> = CLAIMS.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CLAIMS.len());
        assert_eq!(CLAIMS.len(), 22);
    }

    #[test]
    fn a5_all_pass() {
        let r = verify("alt:5", Suite::All);
        assert_eq!(r.count(Status::Fail), 0, "{}", render(&r));
        assert_eq!(r.status("thm.nonsolv"), Some(Status::Pass));
        assert_eq!(r.status("thm.solv"), Some(Status::SkippedPrecondition));
        assert_eq!(r.status("prop.chlesns"), Some(Status::Pass));
        assert_eq!(r.status("lem.dpsimp"), Some(Status::SkippedPrecondition));
        assert!(r.verdict("fact.l2p.1").is_none());
    }

    #[test]
    fn psl2_5_facts() {
        let r = verify("psl2:5", Suite::Core);
        assert_eq!(r.count(Status::Fail), 0, "{}", render(&r));
        assert_eq!(r.status("fact.l2p.3"), Some(Status::Pass));
        assert_eq!(r.status("fact.l2p.5"), Some(Status::SkippedPrecondition));
        assert!(r.verdict("eq.chn").is_none());
    }

    #[test]
    fn s4_lemmas_pass() {
        let r = verify("sym:4", Suite::All);
        assert_eq!(r.count(Status::Fail), 0, "{}", render(&r));
        for id in ["thm.solv", "eq.chn", "lem.cldiff", "cor.cdcor.1", "lem.liusag", "lem.projdp", "lem.dpsimp"] {
            assert_eq!(r.status(id), Some(Status::Pass), "{id}");
        }
    }

    #[test]
    fn trivial_group() {
        let r = verify("cyclic:1", Suite::All);
        assert_eq!(r.count(Status::Fail), 0, "{}", render(&r));
        assert_eq!(r.status("eq.chn"), Some(Status::SkippedPrecondition));
        assert_eq!(r.status("lem.cldiff"), Some(Status::SkippedPrecondition));
    }

    #[test]
    fn injected_failure_and_exit_code() {
        let opts = HarnessOptions {
            suite: Suite::Core,
            inject_fail: Some("thm.mod".into()),
            ..HarnessOptions::default()
        };
        let entries = crate::catalog::catalog()
            .into_iter()
            .filter(|e| e.text() == "sym:3")
            .collect::<Vec<_>>();
        let r = run_suite(&entries, &opts).unwrap();
        assert_eq!(r.count(Status::Fail), 1);
        assert_eq!(r.exit_code(), 1);
        assert_eq!(run_suite(&[], &opts).unwrap().exit_code(), 0);
    }

    #[test]
    fn expired_deadline_skips_on_budget() {
        let opts = HarnessOptions {
            deadline: Some(Instant::now() - std::time::Duration::from_secs(1)),
            ..HarnessOptions::default()
        };
        let r = verify_group(&GroupSpec::Sym(4), None, &opts);
        assert!(!r.verdicts.is_empty());
        assert!(r.verdicts.iter().all(|v| v.status == Status::SkippedBudget));
    }

    #[test]
    fn runs_are_deterministic() {
        let a = verify("prod(sym:3,cyclic:4)", Suite::All).without_timings();
        let b = verify("prod(sym:3,cyclic:4)", Suite::All).without_timings();
        assert_eq!(a, b);
    }
}
