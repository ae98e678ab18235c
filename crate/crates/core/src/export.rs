//! Hasse diagrams in DOT, lattice dumps in JSON, and the analysis report schema.

use std::fmt::Write as _;

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::invariants::InvariantReport;
use crate::lattice::{Chain, SubgroupId, SubgroupLattice};

/// Base64 of the bitset's words as little-endian bytes.
pub fn encode_bits(bits: &BitSet) -> String {
    let bytes: Vec<u8> = bits.words().iter().flat_map(|w| w.to_le_bytes()).collect();
    STANDARD.encode(bytes)
}

pub fn decode_bits(text: &str, len: usize) -> Option<BitSet> {
    let bytes = STANDARD.decode(text).ok()?;
    if bytes.len() % 8 != 0 {
        return None;
    }
    let words = bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    BitSet::from_words(len, words)
}

/// Sorted generator words for a subgroup, independent of how the lattice was built.
pub fn generator_words(lat: &SubgroupLattice, id: SubgroupId) -> Vec<String> {
    let g = lat.group();
    let mut words: Vec<String> = g
        .generating_set(lat.subgroup(id))
        .into_iter()
        .map(|x| g.word_string(x))
        .collect();
    words.sort();
    words
}

/// Hasse diagram, bottom at the bottom. Labels read `order|class`; modular
/// elements are double circles and normal subgroups are filled.
pub fn to_dot(lat: &SubgroupLattice, modular: Option<&[SubgroupId]>) -> String {
    let mut out = String::new();
    out.push_str("digraph lattice {\n  rankdir=BT;\n  node [shape=circle];\n");
    for x in lat.ids() {
        let mut attrs = vec![format!("label=\"{}|{}\"", lat.order_of(x), lat.class_of(x))];
        if modular.is_some_and(|m| m.binary_search(&x).is_ok()) {
            attrs.push("shape=doublecircle".into());
        }
        if lat.is_normal(x) {
            attrs.push("style=filled".into());
        }
        let _ = writeln!(out, "  n{x} [{}];", attrs.join(", "));
    }
    for x in lat.ids() {
        for &y in lat.upper_covers(x) {
            let _ = writeln!(out, "  n{x} -> n{y};");
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct SubgroupJson {
    pub id: SubgroupId,
    pub order: usize,
    pub class: usize,
    pub normal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular: Option<bool>,
    pub generators: Vec<String>,
    pub bits: String,
}

#[derive(Serialize)]
pub struct LatticeJson {
    pub spec: String,
    pub order: usize,
    pub subgroups: Vec<SubgroupJson>,
    pub covers: Vec<Vec<SubgroupId>>,
    pub classes: Vec<Vec<SubgroupId>>,
}

pub fn lattice_json(spec: &str, lat: &SubgroupLattice, modular: Option<&[SubgroupId]>) -> LatticeJson {
    LatticeJson {
        spec: spec.to_string(),
        order: lat.group().order(),
        subgroups: lat
            .ids()
            .map(|x| SubgroupJson {
                id: x,
                order: lat.order_of(x),
                class: lat.class_of(x),
                normal: lat.is_normal(x),
                modular: modular.map(|m| m.binary_search(&x).is_ok()),
                generators: generator_words(lat, x),
                bits: encode_bits(lat.subgroup(x).bits()),
            })
            .collect(),
        covers: lat.cover_relation().to_vec(),
        classes: lat.classes().to_vec(),
    }
}

#[derive(Serialize)]
pub struct ChainLink {
    pub order: usize,
    pub generators: Vec<String>,
}

#[derive(Serialize)]
pub struct WitnessJson {
    pub minmaxl: Vec<ChainLink>,
    pub chiefl: Vec<ChainLink>,
    pub modl: Vec<ChainLink>,
}

/// The `analyze --json` object.
#[derive(Serialize)]
pub struct AnalysisJson {
    pub spec: String,
    pub order: usize,
    pub subgroups: usize,
    pub minmaxl: usize,
    pub chiefl: usize,
    pub modl: usize,
    pub solvable: bool,
    pub supersolvable: bool,
    pub graded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<WitnessJson>,
}

pub fn chain_links(lat: &SubgroupLattice, chain: &Chain) -> Vec<ChainLink> {
    chain
        .ids()
        .iter()
        .map(|&x| ChainLink {
            order: lat.order_of(x),
            generators: generator_words(lat, x),
        })
        .collect()
}

pub fn analysis_json(report: &InvariantReport, lat: &SubgroupLattice, witnesses: bool) -> AnalysisJson {
    AnalysisJson {
        spec: report.spec.clone(),
        order: report.order,
        subgroups: report.subgroups,
        minmaxl: report.minmaxl,
        chiefl: report.chiefl,
        modl: report.modl,
        solvable: report.solvable,
        supersolvable: report.supersolvable,
        graded: report.graded,
        witnesses: witnesses.then(|| WitnessJson {
            minmaxl: chain_links(lat, &report.witnesses.minmaxl),
            chiefl: chain_links(lat, &report.witnesses.chiefl),
            modl: chain_links(lat, &report.witnesses.modl),
        }),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::GroupOptions;
    use crate::invariants::{invariant_report, modular_elements};
    use crate::lattice::LatticeOptions;
    use crate::spec::GroupSpec;

    fn lattice(spec: &str) -> SubgroupLattice {
        let g = GroupSpec::parse(spec).unwrap().build(GroupOptions::default()).unwrap();
        SubgroupLattice::enumerate(Arc::new(g), LatticeOptions::default()).unwrap()
    }

    #[test]
    fn s3_dot() {
        let lat = lattice("sym:3");
        let dot = to_dot(&lat, Some(&modular_elements(&lat)));
        assert_eq!(dot.matches(" [label=").count(), 6);
        assert_eq!(dot.matches("  n0 -> ").count(), 4);
        assert_eq!(dot.matches("doublecircle").count(), 6);
        assert_eq!(dot.matches("filled").count(), 3);
        assert!(dot.contains("n0 [label=\"1|0\""));
    }

    #[test]
    fn trivial_dot_has_one_node() {
        let dot = to_dot(&lattice("cyclic:1"), None);
        assert_eq!(dot.matches(" [label=").count(), 1);
        assert!(!dot.contains("->"));
    }

    #[test]
    fn a4_json_round_trips_bits() {
        let lat = lattice("alt:4");
        let v = serde_json::to_value(lattice_json("alt:4", &lat, None)).unwrap();
        let subs = v["subgroups"].as_array().unwrap();
        assert_eq!(subs.len(), 10);
        for (x, s) in subs.iter().enumerate() {
            let bits = decode_bits(s["bits"].as_str().unwrap(), 12).unwrap();
            assert_eq!(&bits, lat.subgroup(x).bits());
        }
        assert_eq!(v["classes"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn analysis_keys() {
        let lat = lattice("sym:3");
        let r = invariant_report("sym:3", &lat).unwrap();
        let plain = serde_json::to_value(analysis_json(&r, &lat, false)).unwrap();
        let keys: Vec<&str> = plain.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 9);
        assert!(plain.get("witnesses").is_none());
        let full = serde_json::to_value(analysis_json(&r, &lat, true)).unwrap();
        let chain = full["witnesses"]["minmaxl"].as_array().unwrap();
        assert_eq!(chain.len(), 3);
        assert_eq!(chain[0]["generators"].as_array().unwrap().len(), 0);
    }
}
