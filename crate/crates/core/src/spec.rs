//! Textual group specifications.
//!
//! ```text
//! spec   := atom | "prod(" spec "," spec ")"
//! atom   := ("cyclic" | "dihedral" | "sym" | "alt" | "psl2") ":" uint
//!         | "perm:" uint ":" cycles
//! cycles := generator (";" generator)*      e.g. (0 1 2 3 4);(0 1)
//! ```
//!
//! Points are 0-based. `dihedral:n` is the symmetry group of the n-gon, of order 2n.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup, GroupOptions};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u32),
    Dihedral(u32),
    Sym(u32),
    Alt(u32),
    Psl2(u32),
    Perm { degree: u32, generators: Vec<Permutation> },
    Prod(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let spec = p.spec()?;
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn prod(a: GroupSpec, b: GroupSpec) -> Self {
        GroupSpec::Prod(Box::new(a), Box::new(b))
    }

    /// Semantic checks that the grammar alone cannot express.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        match *self {
            GroupSpec::Cyclic(0) | GroupSpec::Sym(0) | GroupSpec::Alt(0) => bad(format!("{self}: n must be positive")),
            GroupSpec::Dihedral(n) if n < 2 => bad(format!("{self}: dihedral needs n >= 2")),
            GroupSpec::Psl2(p) if p < 5 || !is_prime(p) => {
                bad(format!("{self}: psl2 needs a prime p >= 5"))
            }
            GroupSpec::Perm { degree: 0, .. } => bad("perm: degree must be positive".into()),
            GroupSpec::Perm {
                degree,
                ref generators,
            } => {
                if let Some(g) = generators.iter().find(|g| g.degree() != degree as usize) {
                    return bad(format!("perm: generator {g} has wrong degree"));
                }
                Ok(())
            }
            GroupSpec::Prod(ref a, ref b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    /// The order this spec should produce, when it is known in closed form.
    pub fn expected_order(&self) -> Option<u64> {
        let fact = |n: u64| (1..=n).product::<u64>();
        Some(match *self {
            GroupSpec::Cyclic(n) => n as u64,
            GroupSpec::Dihedral(n) => 2 * n as u64,
            GroupSpec::Sym(n) => fact(n as u64),
            GroupSpec::Alt(n) => (fact(n as u64) / 2).max(1),
            GroupSpec::Psl2(p) => {
                let p = p as u64;
                p * (p * p - 1) / 2
            }
            GroupSpec::Perm { .. } => return None,
            GroupSpec::Prod(ref a, ref b) => a.expected_order()? * b.expected_order()?,
        })
    }

    pub fn build(&self, opts: GroupOptions) -> Result<FiniteGroup> {
        self.validate()?;
        let cyc = |n: usize, cycles: &[Vec<u32>]| Permutation::from_cycles(n, cycles);
        match *self {
            GroupSpec::Cyclic(n) => {
                let n = n as usize;
                let gens = if n > 1 {
                    vec![cyc(n, &[(0..n as u32).collect()])?]
                } else {
                    vec![]
                };
                FiniteGroup::generate(n, gens, opts)
            }
            GroupSpec::Dihedral(2) => {
                // the 2-gon has no faithful action on 2 points; use the Klein group on 4
                let gens = vec![cyc(4, &[vec![0, 1], vec![2, 3]])?, cyc(4, &[vec![0, 2], vec![1, 3]])?];
                FiniteGroup::generate(4, gens, opts)
            }
            GroupSpec::Dihedral(n) => {
                let n = n as usize;
                let rotation = cyc(n, &[(0..n as u32).collect()])?;
                let reflection: Vec<Vec<u32>> = (0..n / 2).map(|i| vec![i as u32, (n - 1 - i) as u32]).collect();
                FiniteGroup::generate(n, vec![rotation, cyc(n, &reflection)?], opts)
            }
            GroupSpec::Sym(n) => {
                let n = n as usize;
                let gens = match n {
                    1 => vec![],
                    2 => vec![cyc(2, &[vec![0, 1]])?],
                    _ => vec![cyc(n, &[(0..n as u32).collect()])?, cyc(n, &[vec![0, 1]])?],
                };
                FiniteGroup::generate(n, gens, opts)
            }
            GroupSpec::Alt(n) => {
                let n = n as usize;
                let gens = (2..n as u32)
                    .map(|i| cyc(n, &[vec![0, 1, i]]))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::generate(n, gens, opts)
            }
            GroupSpec::Psl2(p) => FiniteGroup::generate(p as usize + 1, psl2_generators(p), opts),
            GroupSpec::Perm {
                degree,
                ref generators,
            } => FiniteGroup::generate(degree as usize, generators.clone(), opts),
            GroupSpec::Prod(ref a, ref b) => direct_product(&a.build(opts)?, &b.build(opts)?, opts),
        }
    }
}

/// `x -> x + 1` and `x -> -1/x` on the projective line, with infinity as point `p`.
fn psl2_generators(p: u32) -> Vec<Permutation> {
    let inf = p;
    let inv_mod = |x: u32| -> u32 {
        let mut r = 1u64;
        let (mut b, mut e) = (x as u64, p as u64 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    };
    let shift = (0..=p).map(|x| if x == inf { inf } else { (x + 1) % p }).collect();
    let flip = (0..=p)
        .map(|x| match x {
            _ if x == inf => 0,
            0 => inf,
            _ => (p - inv_mod(x)) % p,
        })
        .collect();
    vec![
        Permutation::from_images(shift).expect("translation is a bijection"),
        Permutation::from_images(flip).expect("inversion is a bijection"),
    ]
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Sym(n) => write!(f, "sym:{n}"),
            GroupSpec::Alt(n) => write!(f, "alt:{n}"),
            GroupSpec::Psl2(p) => write!(f, "psl2:{p}"),
            GroupSpec::Perm { degree, generators } => {
                write!(f, "perm:{degree}:")?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
            GroupSpec::Prod(a, b) => write!(f, "prod({a},{b})"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{lit}`")))
        }
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "integer too large".into(),
            })
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        if self.eat("prod(") {
            let a = self.spec()?;
            self.expect(",")?;
            let b = self.spec()?;
            self.expect(")")?;
            return Ok(GroupSpec::prod(a, b));
        }
        if self.eat("perm:") {
            let degree = self.uint()?;
            self.expect(":")?;
            let generators = self.generators(degree)?;
            return Ok(GroupSpec::Perm { degree, generators });
        }
        type Ctor = fn(u32) -> GroupSpec;
        let kinds: [(&str, Ctor); 5] = [
            ("cyclic:", GroupSpec::Cyclic),
            ("dihedral:", GroupSpec::Dihedral),
            ("sym:", GroupSpec::Sym),
            ("alt:", GroupSpec::Alt),
            ("psl2:", GroupSpec::Psl2),
        ];
        for (kw, ctor) in kinds {
            if self.eat(kw) {
                return Ok(ctor(self.uint()?));
            }
        }
        Err(self.error("expected a group name or `prod(`"))
    }

    fn generators(&mut self, degree: u32) -> Result<Vec<Permutation>> {
        let mut gens = Vec::new();
        if !self.src[self.pos..].starts_with(b"(") {
            return Ok(gens);
        }
        loop {
            let start = self.pos;
            let mut cycles = Vec::new();
            while self.eat("(") {
                let mut cycle = Vec::new();
                while !self.eat(")") {
                    if !cycle.is_empty() {
                        self.expect(" ")?;
                    }
                    cycle.push(self.uint()?);
                }
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
            }
            if start == self.pos {
                return Err(self.error("expected `(`"));
            }
            let p = Permutation::from_cycles(degree as usize, &cycles).map_err(|e| Error::Parse {
                offset: start,
                message: e.to_string(),
            })?;
            gens.push(p);
            if !self.eat(";") {
                return Ok(gens);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn order(s: &str) -> usize {
        GroupSpec::parse(s).unwrap().build(GroupOptions::default()).unwrap().order()
    }

    #[test]
    fn named_orders() {
        assert_eq!(order("alt:5"), 60);
        assert_eq!(order("prod(alt:5,cyclic:2)"), 120);
        assert_eq!(order("cyclic:1"), 1);
        assert_eq!(order("sym:1"), 1);
        assert_eq!(order("sym:2"), 2);
        assert_eq!(order("alt:3"), 3);
        assert_eq!(order("dihedral:2"), 4);
        assert_eq!(order("dihedral:5"), 10);
        assert_eq!(order("perm:4:(0 1 2 3);(0 1)"), 24);
        assert_eq!(order("perm:3:"), 1);
        assert_eq!(order("perm:3:()"), 1);
        assert_eq!(order("perm:8:(0 3 6)(1 7 4);(0 5 1 2)(3 6 7 4)"), 24);
    }

    #[test]
    fn psl2_orders_follow_formula() {
        for p in [5u32, 7, 11, 13] {
            let expected = (p * (p * p - 1) / 2) as usize;
            assert_eq!(order(&format!("psl2:{p}")), expected, "p = {p}");
        }
    }

    #[test]
    fn parse_shapes() {
        assert_eq!(GroupSpec::parse("alt:5").unwrap(), GroupSpec::Alt(5));
        assert_eq!(
            GroupSpec::parse("prod(cyclic:2,alt:5)").unwrap(),
            GroupSpec::prod(GroupSpec::Cyclic(2), GroupSpec::Alt(5))
        );
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let at = |s: &str| match GroupSpec::parse(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{s}: expected parse error, got {other:?}"),
        };
        assert_eq!(at("foo:3"), 0);
        assert_eq!(at("alt:"), 4);
        assert_eq!(at("prod(alt:5;cyclic:2)"), 10);
        assert_eq!(at("alt:5 "), 5);
        assert_eq!(at("perm:3:(0 3)"), 7);
        assert_eq!(at("perm:3:(0 1"), 11);
    }

    #[test]
    fn semantic_errors() {
        for bad in ["psl2:3", "psl2:2", "psl2:9", "cyclic:0", "dihedral:1", "perm:0:"] {
            assert!(
                matches!(GroupSpec::parse(bad), Err(Error::InvalidSpec(_))),
                "{bad} should be rejected"
            );
        }
    }

    fn arb_spec() -> impl Strategy<Value = GroupSpec> {
        let leaf = prop_oneof![
            (1u32..30).prop_map(GroupSpec::Cyclic),
            (2u32..30).prop_map(GroupSpec::Dihedral),
            (1u32..9).prop_map(GroupSpec::Sym),
            (1u32..9).prop_map(GroupSpec::Alt),
            prop::sample::select(vec![5u32, 7, 11, 13, 31]).prop_map(GroupSpec::Psl2),
            (1usize..7)
                .prop_flat_map(|n| prop::collection::vec(Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle(), 0..3))
                .prop_map(|imgs| {
                    let degree = imgs.first().map_or(1, |v| v.len()) as u32;
                    let generators = imgs
                        .into_iter()
                        .map(|v| Permutation::from_images(v).unwrap())
                        .collect();
                    GroupSpec::Perm { degree, generators }
                }),
        ];
        leaf.prop_recursive(3, 8, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| GroupSpec::prod(a, b)))
    }

    proptest! {
        #[test]
        fn text_round_trip(spec in arb_spec()) {
            let text = spec.to_string();
            let back = GroupSpec::parse(&text).unwrap();
            prop_assert_eq!(&back, &spec);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
