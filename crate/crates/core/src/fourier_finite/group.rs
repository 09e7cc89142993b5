use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Finite group given by its Cayley table: `table[a·n + b]` is the index of `ab`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    name: String,
}

impl TryFrom<RawGroup> for FiniteGroup {
    type Error = Error;
    fn try_from(raw: RawGroup) -> Result<Self> {
        if raw.table.len() != raw.order || raw.table.iter().any(|r| r.len() != raw.order) {
            return invalid(format!("table must be {0}x{0}", raw.order));
        }
        FiniteGroup::from_table(raw.name, raw.table.concat())
    }
}

impl From<FiniteGroup> for RawGroup {
    fn from(g: FiniteGroup) -> Self {
        RawGroup { order: g.order, table: g.table.chunks(g.order).map(<[usize]>::to_vec).collect(), name: g.name }
    }
}

impl FiniteGroup {
    /// Validates the Latin-square property, associativity, identity and inverses.
    pub fn from_table(name: impl Into<String>, table: Vec<usize>) -> Result<Self> {
        let n = (table.len() as f64).sqrt().round() as usize;
        if n == 0 || n * n != table.len() {
            return invalid("Cayley table must be a nonempty square");
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= n) {
            return invalid(format!("table entry {bad} out of range for order {n}"));
        }
        let at = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[at(a, b)] = true;
                col[at(b, a)] = true;
            }
            if !row.iter().all(|&x| x) || !col.iter().all(|&x| x) {
                return invalid(format!("table is not a Latin square at index {a}"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return invalid(format!("not associative on ({a}, {b}, {c})"));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::InvalidInput("no identity element".into()))?;
        let inverse: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| at(a, b) == identity && at(b, a) == identity))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidInput("some element has no inverse".into()))?;
        Ok(Self { name: name.into(), order: n, table, identity, inverse })
    }

    fn from_rule(name: String, n: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let table = (0..n * n).map(|t| mul(t / n, t % n)).collect();
        Self::from_table(name, table).expect("built-in group tables are valid")
    }

    /// `ℤ/n`.
    pub fn cyclic(n: usize) -> Self {
        Self::from_rule(format!("Z/{n}"), n.max(1), |a, b| (a + b) % n.max(1))
    }

    /// Symmetries of the regular `m`-gon, order `2m`; `rᵃsᵇ` has index `a + m·b`.
    pub fn dihedral(m: usize) -> Self {
        let m = m.max(1);
        Self::from_rule(format!("D{m}"), 2 * m, |x, y| {
            let (a, b) = (x % m, x / m);
            let (c, d) = (y % m, y / m);
            let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
            rot + m * ((b + d) % 2)
        })
    }

    /// Permutations of `k` letters in lexicographic order, product `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
        Self::from_rule(format!("S{k}"), perms.len(), |a, b| {
            let composed: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
            index(&composed)
        })
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`; `±u` has index `u + 4·[sign < 0]`
    /// with `u = 0, 1, 2, 3` for `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products: (sign flip, unit)
        const UNITS: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        Self::from_rule("Q8".into(), 8, |x, y| {
            let (flip, u) = UNITS[x % 4][y % 4];
            u + 4 * ((x / 4 + y / 4 + flip) % 2)
        })
    }

    /// Direct product; `(a, b)` has index `a·|H| + b`.
    pub fn product(g: &Self, h: &Self) -> Self {
        let m = h.order;
        let name = format!("{} x {}", g.name, h.name);
        Self::from_rule(name, g.order * m, |x, y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
    }

    /// Built-in group by name: `Z/n`, `D<m>`, `S<k>` (k ≤ 5), `Q8`, and products `A x B`.
    pub fn by_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some((a, b)) = name.split_once(" x ") {
            return Ok(Self::product(&Self::by_name(a)?, &Self::by_name(b)?));
        }
        let number = |s: &str| s.parse::<usize>().ok().filter(|&n| n > 0);
        let unknown = || Error::InvalidInput(format!("unknown group name {name:?}"));
        if name == "Q8" {
            Ok(Self::quaternion())
        } else if let Some(n) = name.strip_prefix("Z/").and_then(number) {
            Ok(Self::cyclic(n))
        } else if let Some(m) = name.strip_prefix('D').and_then(number) {
            Ok(Self::dihedral(m))
        } else if let Some(k) = name.strip_prefix('S').and_then(number).filter(|&k| k <= 5) {
            Ok(Self::symmetric(k))
        } else {
            Err(unknown())
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub(crate) fn check_element(&self, s: usize) -> Result<()> {
        if s >= self.order {
            return invalid(format!("element index {s} out of range for a group of order {}", self.order));
        }
        Ok(())
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// Subgroup `H ⊆ G` as a group in its own right, with `embedding[i]` the
/// index in `G` of the `i`-th element of `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgroup {
    parent: FiniteGroup,
    group: FiniteGroup,
    embedding: Vec<usize>,
}

impl Subgroup {
    /// Verifies closure under products and inverses.
    pub fn new(parent: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        if elements.is_empty() {
            return invalid("a subgroup is nonempty");
        }
        let mut position = vec![None; parent.order()];
        for (i, &s) in elements.iter().enumerate() {
            parent.check_element(s)?;
            if position[s].replace(i).is_some() {
                return invalid(format!("element {s} listed twice"));
            }
        }
        let m = elements.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in elements {
            if position[parent.inv(a)].is_none() {
                return invalid(format!("not closed under inverses at element {a}"));
            }
            for &b in elements {
                let p = position[parent.mul(a, b)]
                    .ok_or_else(|| Error::InvalidInput(format!("not closed under products at ({a}, {b})")))?;
                table.push(p);
            }
        }
        let group = FiniteGroup::from_table(format!("subgroup of {}", parent.name()), table)?;
        Ok(Self { parent: parent.clone(), group, embedding: elements.to_vec() })
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }
}
