//! The group-spec language.
//!
//! ```text
//! spec := atom { "x" atom }
//! atom := "1" | "Z" int | "ElemAb(" int "," int ")" | "D8" | "Q8"
//!       | "E1(" int ")" | "E2(" int ")" | "Sd(" spec "," spec "," path ")" | "@" path
//! ```
//!
//! Whitespace between tokens is ignored. Paths run up to the next
//! whitespace, comma or closing parenthesis. Products associate to the left.

use std::fmt;
use std::str::FromStr;

use super::CatalogError;
use crate::abelian::is_prime;
use crate::group::MAX_GROUP_ORDER;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Trivial,
    Cyclic(u64),
    ElemAb(u64, u32),
    D8,
    Q8,
    E1(u64),
    E2(u64),
    CayleyFile(String),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Semidirect(Box<GroupSpec>, Box<GroupSpec>, String),
}

impl GroupSpec {
    pub fn product(a: GroupSpec, b: GroupSpec) -> GroupSpec {
        GroupSpec::Product(Box::new(a), Box::new(b))
    }

    /// Left-nested product of the given factors; the empty product is `1`.
    pub fn product_of(factors: impl IntoIterator<Item = GroupSpec>) -> GroupSpec {
        factors
            .into_iter()
            .reduce(GroupSpec::product)
            .unwrap_or(GroupSpec::Trivial)
    }

    /// The group order when it is known without reading files.
    pub fn static_order(&self) -> Option<u128> {
        Some(match self {
            GroupSpec::Trivial => 1,
            GroupSpec::Cyclic(n) => *n as u128,
            GroupSpec::ElemAb(p, k) => (*p as u128).checked_pow(*k)?,
            GroupSpec::D8 | GroupSpec::Q8 => 8,
            GroupSpec::E1(p) | GroupSpec::E2(p) => (*p as u128).checked_pow(3)?,
            GroupSpec::CayleyFile(_) | GroupSpec::Semidirect(..) => return None,
            GroupSpec::Product(a, b) => a.static_order()?.checked_mul(b.static_order()?)?,
        })
    }

    /// Checks the side conditions the grammar cannot express.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |msg: String| Err(CatalogError::Semantic(msg));
        let max = MAX_GROUP_ORDER as u128;
        match self {
            GroupSpec::Trivial | GroupSpec::D8 | GroupSpec::Q8 | GroupSpec::CayleyFile(_) => {}
            GroupSpec::Cyclic(n) => {
                if *n == 0 || *n as u128 > max {
                    return bad(format!("Z{n}: order must be between 1 and {max}"));
                }
            }
            GroupSpec::ElemAb(p, k) => {
                if !is_prime(*p) {
                    return bad(format!("ElemAb({p},{k}): {p} is not prime"));
                }
                if self.static_order().is_none_or(|o| o > max) {
                    return bad(format!("ElemAb({p},{k}): order exceeds {max}"));
                }
            }
            GroupSpec::E1(p) | GroupSpec::E2(p) => {
                let name = if matches!(self, GroupSpec::E1(_)) {
                    "E1"
                } else {
                    "E2"
                };
                if *p == 2 {
                    return bad(format!("{name}(2): {name} requires odd p"));
                }
                if !is_prime(*p) {
                    return bad(format!("{name}({p}): {p} is not prime"));
                }
                if self.static_order().is_none_or(|o| o > max) {
                    return bad(format!("{name}({p}): order exceeds {max}"));
                }
            }
            GroupSpec::Product(a, b) => {
                a.validate()?;
                b.validate()?;
                if let Some(o) = self.static_order() {
                    if o > max {
                        return bad(format!("{self}: order {o} exceeds {max}"));
                    }
                }
            }
            GroupSpec::Semidirect(a, b, _) => {
                a.validate()?;
                b.validate()?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "1"),
            GroupSpec::Cyclic(n) => write!(f, "Z{n}"),
            GroupSpec::ElemAb(p, k) => write!(f, "ElemAb({p},{k})"),
            GroupSpec::D8 => write!(f, "D8"),
            GroupSpec::Q8 => write!(f, "Q8"),
            GroupSpec::E1(p) => write!(f, "E1({p})"),
            GroupSpec::E2(p) => write!(f, "E2({p})"),
            GroupSpec::CayleyFile(path) => write!(f, "@{path}"),
            GroupSpec::Product(a, b) => write!(f, "{a} x {b}"),
            GroupSpec::Semidirect(a, b, path) => write!(f, "Sd({a}, {b}, {path})"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_spec(s)
    }
}

/// Parses and validates a spec.
pub fn parse_spec(text: &str) -> Result<GroupSpec, CatalogError> {
    let mut p = Parser { text, pos: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("`x` or end of input"));
    }
    spec.validate()?;
    Ok(spec)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> CatalogError {
        CatalogError::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), CatalogError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("`{token}`")))
        }
    }

    fn int(&mut self) -> Result<u64, CatalogError> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        let digits = &self.rest()[..len];
        let value = digits.parse().map_err(|_| self.error("an integer"))?;
        self.pos += len;
        Ok(value)
    }

    fn path(&mut self) -> Result<String, CatalogError> {
        self.skip_ws();
        let len: usize = self
            .rest()
            .chars()
            .take_while(|c| !c.is_whitespace() && *c != ',' && *c != ')')
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return Err(self.error("a path"));
        }
        let path = self.rest()[..len].to_string();
        self.pos += len;
        Ok(path)
    }

    fn spec(&mut self) -> Result<GroupSpec, CatalogError> {
        let mut acc = self.atom()?;
        while self.eat("x") {
            acc = GroupSpec::product(acc, self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<GroupSpec, CatalogError> {
        self.skip_ws();
        if self.eat("ElemAb(") {
            let p = self.int()?;
            self.expect(",")?;
            let k = self.int()?;
            self.expect(")")?;
            let k = u32::try_from(k)
                .map_err(|_| CatalogError::Semantic(format!("ElemAb rank {k} too large")))?;
            return Ok(GroupSpec::ElemAb(p, k));
        }
        for (token, make) in [
            ("E1(", GroupSpec::E1 as fn(u64) -> GroupSpec),
            ("E2(", GroupSpec::E2),
        ] {
            if self.eat(token) {
                let p = self.int()?;
                self.expect(")")?;
                return Ok(make(p));
            }
        }
        if self.eat("Sd(") {
            let n = self.spec()?;
            self.expect(",")?;
            let k = self.spec()?;
            self.expect(",")?;
            let path = self.path()?;
            self.expect(")")?;
            return Ok(GroupSpec::Semidirect(Box::new(n), Box::new(k), path));
        }
        if self.eat("D8") {
            return Ok(GroupSpec::D8);
        }
        if self.eat("Q8") {
            return Ok(GroupSpec::Q8);
        }
        if self.eat("@") {
            return Ok(GroupSpec::CayleyFile(self.path()?));
        }
        if self.eat("Z") {
            let n = self.int()?;
            return Ok(GroupSpec::Cyclic(n));
        }
        if self.rest().starts_with('1')
            && !self.rest()[1..].starts_with(|c: char| c.is_ascii_digit())
        {
            self.pos += 1;
            return Ok(GroupSpec::Trivial);
        }
        Err(self.error("a group atom (1, Zn, ElemAb(p,k), D8, Q8, E1(p), E2(p), Sd(..), @path)"))
    }
}
