//! Classification cases for pairs `(G, N)` with complement `K` and their
//! deficiency `t`, and the matcher that assigns verdicts.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::enumerate::abelian_spec;
use super::{build_group, CatalogError, GroupSpec};
use crate::group::{are_isomorphic, is_extraspecial_pair, min_generators, FiniteGroup};
use crate::pair::PairContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    T10,
    T12,
    T13,
    T14,
    T15,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::T10,
        Theorem::T12,
        Theorem::T13,
        Theorem::T14,
        Theorem::T15,
    ];

    /// The deficiency every case of the theorem is about.
    pub fn t_value(self) -> u32 {
        match self {
            Theorem::T10 => 0,
            Theorem::T12 | Theorem::T13 => 1,
            Theorem::T14 => 2,
            Theorem::T15 => 3,
        }
    }

    /// Whether the listed cases are claimed to be exactly the pairs with
    /// this `t`. Otherwise they are only claimed to contain them.
    pub fn is_characterization(self) -> bool {
        self != Theorem::T12
    }

    /// Whether the statement assumes `K` normal in `G`.
    pub fn assumes_normal_complement(self) -> bool {
        matches!(self, Theorem::T13 | Theorem::T14 | Theorem::T15)
    }

    pub fn cases(self) -> impl Iterator<Item = &'static TheoremCase> {
        CASES.iter().filter(move |c| c.theorem == self)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Theorem {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CatalogError::Semantic(format!("unknown theorem id {s:?}")))
    }
}

/// A named isomorphism type, instantiated at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// `Z_{p^e1} x Z_{p^e2} x ...`.
    Abelian(&'static [u32]),
    D8,
    Q8,
    E1,
    E2,
    D8TimesZ2,
    ZpTimesE1,
    E1TimesZpTimesZp,
}

impl Shape {
    /// The spec at `p`, or `None` when the shape needs another prime.
    pub fn spec(self, p: u64) -> Option<GroupSpec> {
        let odd = p != 2;
        Some(match self {
            Shape::Abelian(exps) => abelian_spec(p, exps),
            Shape::D8 if !odd => GroupSpec::D8,
            Shape::Q8 if !odd => GroupSpec::Q8,
            Shape::D8TimesZ2 if !odd => GroupSpec::product(GroupSpec::D8, GroupSpec::Cyclic(2)),
            Shape::E1 if odd => GroupSpec::E1(p),
            Shape::E2 if odd => GroupSpec::E2(p),
            Shape::ZpTimesE1 if odd => GroupSpec::product(GroupSpec::E1(p), GroupSpec::Cyclic(p)),
            Shape::E1TimesZpTimesZp if odd => GroupSpec::product_of([
                GroupSpec::E1(p),
                GroupSpec::Cyclic(p),
                GroupSpec::Cyclic(p),
            ]),
            _ => return None,
        })
    }

    /// `log_p` of the order.
    pub fn log_order(self) -> u32 {
        match self {
            Shape::Abelian(exps) => exps.iter().sum(),
            Shape::D8 | Shape::Q8 | Shape::E1 | Shape::E2 => 3,
            Shape::D8TimesZ2 | Shape::ZpTimesE1 => 4,
            Shape::E1TimesZpTimesZp => 5,
        }
    }
}

/// What the normal subgroup must look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalPattern {
    Trivial,
    Iso(Shape),
    /// `G` itself is elementary abelian and `N` is nontrivial.
    ElementaryAbelianPair,
    /// `Z(N,G) = [N,G]` of order `p`.
    ExtraspecialPair,
}

/// What the complement must look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplementPattern {
    Any,
    Trivial,
    Iso(Shape),
    /// `d(K) = m - j` where `|K| = p^m`.
    GeneratorDeficit(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoremCase {
    pub theorem: Theorem,
    pub case_id: &'static str,
    pub normal: NormalPattern,
    pub complement: ComplementPattern,
    pub t_value: u32,
    /// The case asserts `G ≅ N × K`, so a semidirect pair never matches it.
    pub direct_only: bool,
}

const fn case(
    theorem: Theorem,
    case_id: &'static str,
    normal: NormalPattern,
    complement: ComplementPattern,
    t_value: u32,
    direct_only: bool,
) -> TheoremCase {
    TheoremCase {
        theorem,
        case_id,
        normal,
        complement,
        t_value,
        direct_only,
    }
}

use ComplementPattern as K;
use NormalPattern as N;
use Theorem::*;

const ZP: Shape = Shape::Abelian(&[1]);
const ZP2: Shape = Shape::Abelian(&[2]);
const ZP3: Shape = Shape::Abelian(&[3]);
const ZP_ZP: Shape = Shape::Abelian(&[1, 1]);
const ZP_ZP_ZP: Shape = Shape::Abelian(&[1, 1, 1]);
const ZP2_ZP: Shape = Shape::Abelian(&[2, 1]);
const ZP2_ZP_ZP: Shape = Shape::Abelian(&[2, 1, 1]);

/// Every case, in statement order.
pub static CASES: [TheoremCase; 29] = [
    case(T10, "T10.i", N::Trivial, K::Any, 0, false),
    case(T10, "T10.ii", N::ElementaryAbelianPair, K::Any, 0, false),
    case(T12, "T12.i", N::Iso(ZP2), K::Trivial, 1, true),
    case(T12, "T12.ii", N::Iso(ZP), K::GeneratorDeficit(1), 1, true),
    case(T12, "T12.iii", N::ExtraspecialPair, K::Any, 1, false),
    case(T13, "T13.i", N::Iso(ZP2), K::Trivial, 1, true),
    case(T13, "T13.ii", N::Iso(ZP), K::GeneratorDeficit(1), 1, true),
    case(T13, "T13.iii", N::Iso(Shape::E1), K::Trivial, 1, true),
    case(T14, "T14.i", N::Iso(ZP2_ZP), K::Trivial, 2, true),
    case(T14, "T14.ii", N::Iso(Shape::D8), K::Trivial, 2, true),
    case(
        T14,
        "T14.iii",
        N::Iso(Shape::ZpTimesE1),
        K::Trivial,
        2,
        true,
    ),
    case(T14, "T14.iv", N::Iso(ZP2), K::Iso(ZP), 2, true),
    case(T14, "T14.v", N::Iso(Shape::E1), K::Iso(ZP), 2, true),
    case(
        T14,
        "T14.vi",
        N::Iso(ZP_ZP),
        K::GeneratorDeficit(1),
        2,
        true,
    ),
    case(T14, "T14.vii", N::Iso(ZP), K::GeneratorDeficit(2), 2, true),
    case(T15, "T15.i", N::Iso(ZP3), K::Trivial, 3, true),
    case(T15, "T15.ii", N::Iso(ZP2_ZP_ZP), K::Trivial, 3, true),
    case(T15, "T15.iii", N::Iso(Shape::Q8), K::Trivial, 3, true),
    case(T15, "T15.iv", N::Iso(Shape::E2), K::Trivial, 3, true),
    case(T15, "T15.v", N::Iso(Shape::D8TimesZ2), K::Trivial, 3, true),
    case(
        T15,
        "T15.vi",
        N::Iso(Shape::E1TimesZpTimesZp),
        K::Trivial,
        3,
        true,
    ),
    case(T15, "T15.vii", N::Iso(ZP2), K::Iso(ZP2), 3, true),
    case(T15, "T15.viii", N::Iso(ZP2_ZP), K::Iso(ZP), 3, true),
    case(T15, "T15.ix", N::Iso(Shape::D8), K::Iso(ZP), 3, true),
    case(T15, "T15.x", N::Iso(Shape::ZpTimesE1), K::Iso(ZP), 3, true),
    case(T15, "T15.xi", N::Iso(ZP2), K::Iso(ZP_ZP), 3, true),
    case(T15, "T15.xii", N::Iso(Shape::E1), K::Iso(ZP_ZP), 3, true),
    case(T15, "T15.xiii", N::Iso(ZP), K::GeneratorDeficit(3), 3, true),
    case(
        T15,
        "T15.xiv",
        N::Iso(ZP_ZP_ZP),
        K::GeneratorDeficit(1),
        3,
        true,
    ),
];

impl TheoremCase {
    pub fn by_id(id: &str) -> Option<&'static TheoremCase> {
        CASES.iter().find(|c| c.case_id == id)
    }

    /// `|N|` and the smallest `|K|` any instance needs, as exponents of `p`;
    /// `None` when the case has no instance at `p`.
    pub fn minimal_witness_exponents(&self, p: u64) -> Option<(u32, u32)> {
        let n = match self.normal {
            N::Trivial => 0,
            N::Iso(s) => {
                s.spec(p)?;
                s.log_order()
            }
            N::ElementaryAbelianPair | N::ExtraspecialPair => 1,
        };
        let m = match self.complement {
            K::Any | K::Trivial => 0,
            K::Iso(s) => {
                s.spec(p)?;
                s.log_order()
            }
            K::GeneratorDeficit(j) => j + 1,
        };
        Some((n, m))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Confirmed,
    Unlisted,
    Mismatch,
}

/// Whether a pair falls under some statement's hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    InScope,
    /// `t` is 2 or 3 but `K` is not normal, which those statements assume.
    OutsideHypotheses,
    /// `t >= 4`: no statement lists these pairs.
    BeyondRange,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub fingerprint: String,
    pub t: u32,
    pub matched_cases: Vec<String>,
    pub status: Status,
    pub scope: Scope,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

pub const CAPABILITY_NOTE: &str = "capability unverified";

/// Matches pairs against the case table at one prime. Holds the shape
/// groups so repeated classification does not rebuild them.
pub struct Classifier {
    p: u64,
    shapes: BTreeMap<Shape, Option<FiniteGroup>>,
}

impl Classifier {
    pub fn new(p: u64) -> Classifier {
        let mut shapes = BTreeMap::new();
        for c in CASES.iter() {
            for shape in [c.normal_shape(), c.complement_shape()]
                .into_iter()
                .flatten()
            {
                shapes
                    .entry(shape)
                    .or_insert_with(|| shape.spec(p).and_then(|s| build_group(&s).ok()));
            }
        }
        Classifier { p, shapes }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn is_shape(&self, g: &FiniteGroup, shape: Shape) -> bool {
        match self.shapes.get(&shape) {
            Some(Some(h)) => h.order() == g.order() && are_isomorphic(g, h).is_some(),
            _ => false,
        }
    }

    /// Structural match only; `t` plays no part.
    pub fn matches(
        &self,
        case: &TheoremCase,
        ctx: &PairContext,
        n: &FiniteGroup,
        k: &FiniteGroup,
    ) -> bool {
        if case.direct_only && !ctx.is_direct() {
            return false;
        }
        let normal_ok = match case.normal {
            N::Trivial => n.order() == 1,
            N::Iso(s) => self.is_shape(n, s),
            N::ElementaryAbelianPair => {
                let g = ctx.group();
                n.order() > 1 && g.is_abelian() && g.exponent() as u64 == self.p
            }
            N::ExtraspecialPair => {
                is_extraspecial_pair(ctx.group(), ctx.normal(), self.p).unwrap_or(false)
            }
        };
        normal_ok
            && match case.complement {
                K::Any => true,
                K::Trivial => k.order() == 1,
                K::Iso(s) => self.is_shape(k, s),
                K::GeneratorDeficit(j) => min_generators(k, self.p).is_ok_and(|d| d + j == ctx.m()),
            }
    }

    /// Classifies against every case.
    pub fn classify(&self, ctx: &PairContext, t: u32) -> Verdict {
        self.classify_among(ctx, t, CASES.iter())
    }

    /// Classifies against the given cases. Cases of a statement that only
    /// constrains pairs with its own `t` are skipped for other values.
    pub fn classify_among<'a>(
        &self,
        ctx: &PairContext,
        t: u32,
        cases: impl IntoIterator<Item = &'a TheoremCase>,
    ) -> Verdict {
        let (n, k) = (ctx.normal_group(), ctx.complement_group());
        let mut matched = Vec::new();
        let mut all_agree = true;
        let mut notes = Vec::new();
        for case in cases {
            if !case.theorem.is_characterization() && case.t_value != t {
                continue;
            }
            if self.matches(case, ctx, &n, &k) {
                matched.push(case.case_id.to_string());
                all_agree &= case.t_value == t;
                if case.normal == N::ExtraspecialPair {
                    notes.push(CAPABILITY_NOTE.to_string());
                }
            }
        }
        let status = match (matched.is_empty(), all_agree) {
            (true, _) => Status::Unlisted,
            (false, true) => Status::Confirmed,
            (false, false) => Status::Mismatch,
        };
        let scope = if t >= 4 {
            Scope::BeyondRange
        } else if t >= 2 && !ctx.is_direct() {
            Scope::OutsideHypotheses
        } else {
            Scope::InScope
        };
        Verdict {
            fingerprint: pair_fingerprint(ctx),
            t,
            matched_cases: matched,
            status,
            scope,
            notes,
        }
    }
}

impl TheoremCase {
    fn normal_shape(&self) -> Option<Shape> {
        match self.normal {
            N::Iso(s) => Some(s),
            _ => None,
        }
    }

    fn complement_shape(&self) -> Option<Shape> {
        match self.complement {
            K::Iso(s) => Some(s),
            _ => None,
        }
    }
}

/// `G`'s invariant key followed by `|N|` and `|K|`.
pub fn pair_fingerprint(ctx: &PairContext) -> String {
    format!(
        "{}|N{}|K{}",
        crate::group::Fingerprint::of(ctx.group()).key(),
        ctx.normal().order(),
        ctx.complement().order()
    )
}

/// One-shot classification at the pair's own prime.
pub fn classify_pair(ctx: &PairContext, t: u32) -> Verdict {
    Classifier::new(ctx.prime()).classify(ctx, t)
}
