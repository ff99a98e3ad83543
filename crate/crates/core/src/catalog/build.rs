use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::{CatalogError, GroupSpec};
use crate::group::{
    direct_product, semidirect_product, Action, Elem, FiniteGroup, Product, Subgroup,
};

/// A built spec. For a top-level product the two factors are kept, the left
/// one playing the role of the normal subgroup.
#[derive(Clone, Debug)]
pub struct Built {
    pub group: FiniteGroup,
    pub normal: Option<Subgroup>,
    pub complement: Option<Subgroup>,
}

/// Builds a spec, resolving file references relative to the working directory.
pub fn build(spec: &GroupSpec) -> Result<Built, CatalogError> {
    build_in(spec, Path::new("."))
}

/// Builds a spec, resolving file references relative to `base`.
pub fn build_in(spec: &GroupSpec, base: &Path) -> Result<Built, CatalogError> {
    spec.validate()?;
    let with_factors = |p: Product| Built {
        group: p.group,
        normal: Some(p.left),
        complement: Some(p.right),
    };
    Ok(match spec {
        GroupSpec::Product(a, b) => {
            let (a, b) = (build_group_in(a, base)?, build_group_in(b, base)?);
            with_factors(direct_product(&a, &b))
        }
        GroupSpec::Semidirect(n, k, path) => {
            let (n, k) = (build_group_in(n, base)?, build_group_in(k, base)?);
            let action = read_action_file(&base.join(path), &n, &k)?;
            with_factors(semidirect_product(&n, &k, &action)?)
        }
        other => Built {
            group: build_group_in(other, base)?,
            normal: None,
            complement: None,
        },
    })
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, CatalogError> {
    build_group_in(spec, Path::new("."))
}

fn build_group_in(spec: &GroupSpec, base: &Path) -> Result<FiniteGroup, CatalogError> {
    spec.validate()?;
    let g = match spec {
        GroupSpec::Trivial => cyclic(1),
        GroupSpec::Cyclic(n) => cyclic(*n as usize),
        GroupSpec::ElemAb(p, k) => elementary_abelian(*p as usize, *k),
        GroupSpec::D8 => dihedral8(),
        GroupSpec::Q8 => quaternion8(),
        GroupSpec::E1(p) => heisenberg(*p as usize),
        GroupSpec::E2(p) => extraspecial_exponent_p2(*p as usize),
        GroupSpec::CayleyFile(path) => {
            let full = base.join(path);
            let text = std::fs::read_to_string(&full)
                .map_err(|e| CatalogError::Io(format!("{}: {e}", full.display())))?;
            FiniteGroup::from_json(&text)?
        }
        GroupSpec::Product(..) | GroupSpec::Semidirect(..) => build_in(spec, base)?.group,
    };
    Ok(g.with_label(spec.to_string()))
}

fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            table.push(mul(a, b));
        }
    }
    FiniteGroup::from_trusted(order, table)
}

pub fn cyclic(n: usize) -> FiniteGroup {
    from_fn(n, |a, b| (a + b) % n)
}

/// `Z_p^k` as vectors over `F_p` in base-`p` digits.
pub fn elementary_abelian(p: usize, k: u32) -> FiniteGroup {
    let order = p.pow(k);
    from_fn(order, |mut a, mut b| {
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    })
}

/// Symmetries of a square; `r^i s^j` is stored as `i + 4j`.
pub fn dihedral8() -> FiniteGroup {
    from_fn(8, |a, b| {
        let (i1, j1, i2, j2) = (a % 4, a / 4, b % 4, b / 4);
        let i = if j1 == 0 { i1 + i2 } else { i1 + 4 - i2 } % 4;
        i + 4 * ((j1 + j2) % 2)
    })
}

/// Unit quaternions `±1, ±i, ±j, ±k`; element `s + 2u` is `(-1)^s u` with
/// `u` running over `1, i, j, k`.
pub fn quaternion8() -> FiniteGroup {
    // unit products: (sign, unit) for u*v.
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    from_fn(8, |a, b| {
        let (s, u) = UNIT[a / 2][b / 2];
        (a % 2 + b % 2 + s) % 2 + 2 * u
    })
}

/// Upper unitriangular 3x3 matrices over `F_p`. The matrix with entries
/// `a` (1,2), `b` (2,3), `c` (1,3) is stored as `a p^2 + b p + c`.
pub fn heisenberg(p: usize) -> FiniteGroup {
    from_fn(p * p * p, |x, y| {
        let (a1, b1, c1) = (x / (p * p), x / p % p, x % p);
        let (a2, b2, c2) = (y / (p * p), y / p % p, y % p);
        let (a, b, c) = ((a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p);
        a * p * p + b * p + c
    })
}

/// `Z_{p^2} ⋊ Z_p`, the generator of `Z_p` acting by multiplication by `1+p`.
pub fn extraspecial_exponent_p2(p: usize) -> FiniteGroup {
    let (n, k) = (cyclic(p * p), cyclic(p));
    let mult: Vec<Elem> = (0..p * p).map(|x| x * (1 + p) % (p * p)).collect();
    let action = Action::from_generator_images(&n, &k, &BTreeMap::from([(1, mult)]))
        .expect("1+p is a unit of order p");
    semidirect_product(&n, &k, &action)
        .expect("validated action")
        .group
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    generator_images: BTreeMap<String, Vec<i64>>,
}

/// Parses an action file `{"generator_images": {"k": [images over N]}}`
/// against the groups it acts between.
pub fn parse_action(text: &str, n: &FiniteGroup, k: &FiniteGroup) -> Result<Action, CatalogError> {
    let file: ActionFile = serde_json::from_str(text).map_err(|e| CatalogError::ActionFile {
        reason: format!("line {} column {}: {e}", e.line(), e.column()),
    })?;
    let mut images = BTreeMap::new();
    for (key, values) in file.generator_images {
        let ki: Elem = key.trim().parse().map_err(|_| CatalogError::ActionFile {
            reason: format!("key {key:?} is not an element index"),
        })?;
        let mut map = Vec::with_capacity(values.len());
        for v in values {
            if v < 0 || v as usize >= n.order() {
                return Err(CatalogError::ActionFile {
                    reason: format!(
                        "image {v} of element {ki} is outside N (order {})",
                        n.order()
                    ),
                });
            }
            map.push(v as usize);
        }
        images.insert(ki, map);
    }
    Ok(Action::from_generator_images(n, k, &images)?)
}

pub fn read_action_file(
    path: &Path,
    n: &FiniteGroup,
    k: &FiniteGroup,
) -> Result<Action, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))?;
    parse_action(&text, n, k)
}
