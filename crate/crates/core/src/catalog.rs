//! The built-in list of groups the theorem harness runs over.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spec::GroupSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Core,
    Extended,
    Stretch,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Core => "core",
            Tier::Extended => "extended",
            Tier::Stretch => "stretch",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Tier::Core),
            "extended" => Ok(Tier::Extended),
            "stretch" => Ok(Tier::Stretch),
            _ => Err(Error::InvalidSpec(format!("unknown tier {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub spec: GroupSpec,
    pub expected_order: u64,
    pub tier: Tier,
    /// Common name, when the spec text does not make it obvious.
    pub label: Option<&'static str>,
}

impl CatalogEntry {
    pub fn text(&self) -> String {
        self.spec.to_string()
    }
}

pub const SL23: &str = "perm:8:(0 3 6)(1 7 4);(0 5 1 2)(3 6 7 4)";

const ENTRIES: &[(&str, u64, Tier, Option<&str>)] = &[
    ("cyclic:1", 1, Tier::Core, None),
    ("cyclic:2", 2, Tier::Core, None),
    ("cyclic:6", 6, Tier::Core, None),
    ("cyclic:8", 8, Tier::Core, None),
    ("cyclic:12", 12, Tier::Core, None),
    ("cyclic:30", 30, Tier::Core, None),
    ("dihedral:4", 8, Tier::Core, None),
    ("dihedral:5", 10, Tier::Core, None),
    ("dihedral:6", 12, Tier::Core, None),
    ("dihedral:8", 16, Tier::Core, None),
    ("dihedral:16", 32, Tier::Core, None),
    ("sym:3", 6, Tier::Core, None),
    ("sym:4", 24, Tier::Core, None),
    ("sym:5", 120, Tier::Core, None),
    ("alt:4", 12, Tier::Core, None),
    ("alt:5", 60, Tier::Core, None),
    ("alt:6", 360, Tier::Core, None),
    ("psl2:5", 60, Tier::Core, None),
    ("psl2:7", 168, Tier::Core, None),
    ("psl2:11", 660, Tier::Core, None),
    ("prod(cyclic:2,alt:5)", 120, Tier::Core, None),
    ("prod(sym:3,cyclic:4)", 24, Tier::Core, None),
    (SL23, 24, Tier::Core, Some("SL(2,3)")),
    ("prod(sym:3,sym:3)", 36, Tier::Core, None),
    ("prod(sym:4,cyclic:2)", 48, Tier::Core, None),
    ("prod(sym:4,sym:3)", 144, Tier::Core, None),
    ("sym:6", 720, Tier::Extended, None),
    ("psl2:13", 1092, Tier::Extended, None),
    ("prod(alt:5,sym:3)", 360, Tier::Extended, None),
    ("alt:7", 2520, Tier::Extended, None),
    ("psl2:31", 14880, Tier::Stretch, None),
];

/// Every entry, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    ENTRIES
        .iter()
        .map(|&(text, order, tier, label)| CatalogEntry {
            spec: GroupSpec::parse(text).expect("catalog specs parse"),
            expected_order: order,
            tier,
            label,
        })
        .collect()
}

pub fn tier(tier: Tier) -> Vec<CatalogEntry> {
    catalog().into_iter().filter(|e| e.tier == tier).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_are_canonical_and_orders_match() {
        for e in catalog() {
            match e.spec.expected_order() {
                Some(o) => assert_eq!(o, e.expected_order, "{}", e.text()),
                None => {
                    let g = e.spec.build(crate::group::GroupOptions::default()).unwrap();
                    assert_eq!(g.order() as u64, e.expected_order, "{}", e.text());
                }
            }
            // spec text is already in canonical form
            assert_eq!(GroupSpec::parse(&e.text()).unwrap(), e.spec);
        }
    }

    #[test]
    fn core_tier_is_small() {
        let core = tier(Tier::Core);
        assert!(core.iter().all(|e| e.expected_order <= 660));
        assert_eq!(core.len(), 26);
        assert_eq!(tier(Tier::Stretch).len(), 1);
    }

    #[test]
    fn tiers_parse() {
        assert_eq!("extended".parse::<Tier>().unwrap(), Tier::Extended);
        assert!("huge".parse::<Tier>().is_err());
    }
}
