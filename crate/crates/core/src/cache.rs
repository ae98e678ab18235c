//! On-disk cache of subgroup lattices.
//!
//! Record layout, all integers little-endian:
//!
//! ```text
//! magic "LTCK" | version u8 | spec: u32 len + utf8 | order u64 | count u64
//! count x (u32 word count + u64 words)
//! covers flag u8, then count x (u32 len + u32 ids) when set
//! sha256 of everything above (32 bytes)
//! ```
//!
//! Records are named by the sha256 of the canonical spec text. Anything that
//! fails validation is logged and treated as a miss.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupOptions};
use crate::lattice::{LatticeOptions, SubgroupLattice};
use crate::spec::GroupSpec;

pub const FORMAT_VERSION: u8 = 1;
const MAGIC: &[u8; 4] = b"LTCK";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub version: u8,
    pub spec: String,
    pub order: u64,
    pub subgroups: Vec<BitSet>,
    pub covers: Option<Vec<Vec<u32>>>,
}

impl CacheRecord {
    pub fn from_lattice(spec: &GroupSpec, lat: &SubgroupLattice, with_covers: bool) -> Self {
        CacheRecord {
            version: FORMAT_VERSION,
            spec: spec.to_string(),
            order: lat.group().order() as u64,
            subgroups: lat.subgroups().iter().map(|h| h.bits().clone()).collect(),
            covers: with_covers.then(|| {
                lat.cover_relation()
                    .iter()
                    .map(|cs| cs.iter().map(|&c| c as u32).collect())
                    .collect()
            }),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(self.version);
        out.extend_from_slice(&(self.spec.len() as u32).to_le_bytes());
        out.extend_from_slice(self.spec.as_bytes());
        out.extend_from_slice(&self.order.to_le_bytes());
        out.extend_from_slice(&(self.subgroups.len() as u64).to_le_bytes());
        for bits in &self.subgroups {
            out.extend_from_slice(&(bits.words().len() as u32).to_le_bytes());
            for w in bits.words() {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        match &self.covers {
            None => out.push(0),
            Some(covers) => {
                out.push(1);
                for cs in covers {
                    out.extend_from_slice(&(cs.len() as u32).to_le_bytes());
                    for c in cs {
                        out.extend_from_slice(&c.to_le_bytes());
                    }
                }
            }
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    /// Parses and checks framing, version and checksum. Group-level checks
    /// happen in [`CacheRecord::into_lattice`].
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Cache(m.to_string());
        if bytes.len() < MAGIC.len() + 1 + 32 {
            return Err(bad("record too short"));
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(bad("checksum mismatch"));
        }
        let mut r = Reader { buf: body, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = r.u8()?;
        if version != FORMAT_VERSION {
            return Err(Error::Cache(format!("version {version}, expected {FORMAT_VERSION}")));
        }
        let spec_len = r.u32()? as usize;
        let spec = String::from_utf8(r.take(spec_len)?.to_vec()).map_err(|_| bad("spec is not utf-8"))?;
        let order = r.u64()?;
        let count = r.u64()? as usize;
        let words_expected = (order as usize).div_ceil(64);
        let mut subgroups = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let n = r.u32()? as usize;
            if n != words_expected {
                return Err(bad("bitset length does not match the group order"));
            }
            let words = (0..n).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
            subgroups.push(BitSet::from_words(order as usize, words).ok_or_else(|| bad("stray bits past the group order"))?);
        }
        let covers = match r.u8()? {
            0 => None,
            1 => {
                let mut covers = Vec::with_capacity(count.min(1 << 20));
                for _ in 0..count {
                    let n = r.u32()? as usize;
                    covers.push((0..n).map(|_| r.u32()).collect::<Result<Vec<_>>>()?);
                }
                Some(covers)
            }
            _ => return Err(bad("bad covers flag")),
        };
        if r.pos != body.len() {
            return Err(bad("trailing bytes"));
        }
        Ok(CacheRecord {
            version,
            spec,
            order,
            subgroups,
            covers,
        })
    }

    /// Rebuilds the lattice over `group`, checking every stored set is a
    /// subgroup, that ids are in canonical order, and that covers point upward.
    pub fn into_lattice(self, group: Arc<FiniteGroup>, opts: LatticeOptions) -> Result<SubgroupLattice> {
        let bad = |m: String| Error::Cache(m);
        if self.order != group.order() as u64 {
            return Err(bad(format!("order {} but the group has {}", self.order, group.order())));
        }
        if self.subgroups.len() > opts.subgroup_cap {
            return Err(Error::LatticeCapExceeded {
                cap: opts.subgroup_cap,
            });
        }
        let mut sets = Vec::with_capacity(self.subgroups.len());
        let mut gens = Vec::with_capacity(self.subgroups.len());
        for (i, bits) in self.subgroups.iter().enumerate() {
            let (h, g) = group
                .subgroup_from_bits(bits)
                .ok_or_else(|| bad(format!("entry {i} is not a subgroup")))?;
            sets.push(h);
            gens.push(g);
        }
        if !sets.windows(2).all(|w| w[0] < w[1]) {
            return Err(bad("subgroups are not in canonical order".into()));
        }
        match (sets.first(), sets.last()) {
            (Some(b), Some(t)) if b.order() == 1 && t.order() == group.order() => {}
            _ => return Err(bad("missing trivial subgroup or whole group".into())),
        }
        let covers = match self.covers {
            None => None,
            Some(covers) => {
                if covers.len() != sets.len() {
                    return Err(bad("cover table has the wrong length".into()));
                }
                let mut out = Vec::with_capacity(covers.len());
                for (x, cs) in covers.into_iter().enumerate() {
                    let cs: Vec<usize> = cs.into_iter().map(|c| c as usize).collect();
                    let ok = cs.windows(2).all(|w| w[0] < w[1])
                        && cs.iter().all(|&y| y > x && y < sets.len() && sets[x].is_subgroup_of(&sets[y]));
                    if !ok {
                        return Err(bad(format!("covers of entry {x} are inconsistent")));
                    }
                    out.push(cs);
                }
                Some(out)
            }
        };
        SubgroupLattice::from_parts(group, sets, gens, covers, opts)
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Cache("record truncated".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Hex sha256 of the canonical spec text.
pub fn cache_key(spec: &GroupSpec) -> String {
    hex::encode(Sha256::digest(spec.to_string().as_bytes()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// A record existed but failed validation and was recomputed.
    Discarded,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, spec: &GroupSpec) -> PathBuf {
        self.dir.join(format!("{}.lat", cache_key(spec)))
    }

    /// Writes the record through a temporary file and a rename, so readers
    /// see either the old record or the new one.
    pub fn store(&self, spec: &GroupSpec, lat: &SubgroupLattice) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let bytes = CacheRecord::from_lattice(spec, lat, true).encode();
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&bytes)?;
        tmp.as_file().sync_all()?;
        let path = self.path_for(spec);
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        Ok(path)
    }

    /// Reads a record for `spec` and rebuilds it over `group`. Errors mean
    /// the record was present but unusable.
    pub fn load(&self, spec: &GroupSpec, group: Arc<FiniteGroup>, opts: LatticeOptions) -> Result<Option<SubgroupLattice>> {
        let path = self.path_for(spec);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let record = CacheRecord::decode(&bytes)?;
        if record.spec != spec.to_string() {
            return Err(Error::Cache(format!("record is for {:?}", record.spec)));
        }
        record.into_lattice(group, opts).map(Some)
    }

    /// Loads the lattice if a valid record exists, otherwise enumerates and stores it.
    /// A failed store is logged, not returned.
    pub fn load_or_compute(
        &self,
        spec: &GroupSpec,
        gopts: GroupOptions,
        lopts: LatticeOptions,
    ) -> Result<(SubgroupLattice, CacheOutcome)> {
        let group = Arc::new(spec.build(gopts)?);
        let outcome = match self.load(spec, group.clone(), lopts) {
            Ok(Some(lat)) => return Ok((lat, CacheOutcome::Hit)),
            Ok(None) => CacheOutcome::Miss,
            Err(e @ (Error::LatticeCapExceeded { .. } | Error::BudgetExhausted)) => return Err(e),
            Err(e) => {
                log::warn!("discarding cache record {}: {e}", self.path_for(spec).display());
                CacheOutcome::Discarded
            }
        };
        let lat = SubgroupLattice::enumerate(group, lopts)?;
        if let Err(e) = self.store(spec, &lat) {
            log::warn!("could not write cache record in {}: {e}", self.dir.display());
        }
        Ok((lat, outcome))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(spec: &str) -> (GroupSpec, Arc<FiniteGroup>, SubgroupLattice) {
        let spec = GroupSpec::parse(spec).unwrap();
        let g = Arc::new(spec.build(GroupOptions::default()).unwrap());
        let lat = SubgroupLattice::enumerate(g.clone(), LatticeOptions::default()).unwrap();
        (spec, g, lat)
    }

    #[test]
    fn encode_decode_round_trip() {
        let (spec, _, lat) = setup("sym:4");
        for covers in [false, true] {
            let rec = CacheRecord::from_lattice(&spec, &lat, covers);
            assert_eq!(CacheRecord::decode(&rec.encode()).unwrap(), rec);
        }
    }

    #[test]
    fn store_then_load_a5() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (spec, g, lat) = setup("alt:5");
        cache.store(&spec, &lat).unwrap();
        let back = cache.load(&spec, g, LatticeOptions::default()).unwrap().unwrap();
        assert_eq!(back.len(), 59);
        assert_eq!(back.subgroups(), lat.subgroups());
        assert_eq!(back.cover_relation(), lat.cover_relation());
        assert_eq!(back.classes(), lat.classes());
    }

    #[test]
    fn misses_and_rejections() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (spec, g, lat) = setup("sym:3");
        assert!(cache.load(&spec, g.clone(), LatticeOptions::default()).unwrap().is_none());

        // stale version byte, with a valid checksum so only the version is wrong
        let mut rec = CacheRecord::from_lattice(&spec, &lat, true);
        rec.version = FORMAT_VERSION + 1;
        fs::write(cache.path_for(&spec), rec.encode()).unwrap();
        assert!(matches!(cache.load(&spec, g.clone(), LatticeOptions::default()), Err(Error::Cache(_))));

        // a flipped payload bit
        cache.store(&spec, &lat).unwrap();
        let mut bytes = fs::read(cache.path_for(&spec)).unwrap();
        bytes[20] ^= 1;
        fs::write(cache.path_for(&spec), &bytes).unwrap();
        assert!(cache.load(&spec, g.clone(), LatticeOptions::default()).is_err());

        // a record whose sets are not subgroups
        let mut rec = CacheRecord::from_lattice(&spec, &lat, false);
        rec.subgroups[1].insert(5);
        rec.subgroups[1].insert(4);
        fs::write(cache.path_for(&spec), rec.encode()).unwrap();
        assert!(cache.load(&spec, g, LatticeOptions::default()).is_err());

        let (lat2, outcome) = cache
            .load_or_compute(&spec, GroupOptions::default(), LatticeOptions::default())
            .unwrap();
        assert_eq!(outcome, CacheOutcome::Discarded);
        assert_eq!(lat2.subgroups(), lat.subgroups());
        let (_, outcome) = cache
            .load_or_compute(&spec, GroupOptions::default(), LatticeOptions::default())
            .unwrap();
        assert_eq!(outcome, CacheOutcome::Hit);
    }

    #[test]
    fn keys_follow_canonical_text() {
        let a = GroupSpec::prod(GroupSpec::Cyclic(2), GroupSpec::Alt(5));
        let direct = hex::encode(Sha256::digest(b"prod(cyclic:2,alt:5)"));
        assert_eq!(cache_key(&a), direct);
        assert_ne!(cache_key(&a), cache_key(&GroupSpec::Alt(5)));
        assert_eq!(cache_key(&a).len(), 64);
    }
}
