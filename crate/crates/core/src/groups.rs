//! Finite groups stored by full multiplication table.
//!
//! Elements are indices `0..order`. Groups built from permutations keep the
//! permutation of every element as its label; products follow function
//! composition, `(g * h)(x) = g(h(x))`, so permutation groups act on the left.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard cap on the order of any constructed group.
pub const MAX_GROUP_ORDER: usize = 10080;
/// Cap for the exhaustive subgroup lister.
pub const MAX_SUBGROUP_ORDER: usize = 1024;

/// A permutation of `{0, .., n-1}` given by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Validates that `images` is a bijection of `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Invalid(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses cycle notation on points `1..=degree`, e.g. `(1,2)(3 4 5)`.
    pub fn from_cycles(cycles: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut rest = cycles.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::Parse(format!("bad cycle notation: {cycles}")));
            };
            let end = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle: {cycles}")))?;
            let points: Vec<usize> = body[..end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point {s:?}")))
                })
                .collect::<Result<_>>()?;
            for &p in &points {
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!("point {p} outside 1..={degree}")));
                }
            }
            // cycles compose right to left, matching the group product
            let mut step: Vec<usize> = (0..degree).collect();
            for w in 0..points.len() {
                let a = points[w] - 1;
                let b = points[(w + 1) % points.len()] - 1;
                step[a] = b;
            }
            let step = Permutation::new(step)?;
            images = (0..degree).map(|x| images[step.0[x]]).collect();
            rest = body[end + 1..].trim_start();
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, x)| i == *x).count()
    }

    /// Cycle notation on 1-based points; `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cyc = vec![start + 1];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cyc.push(x + 1);
                x = self.0[x];
            }
            out.push('(');
            out.push_str(
                &cyc.iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

/// A fully enumerated finite group.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u16>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    labels: Option<Vec<Permutation>>,
    // Breadth-first spanning tree over the generators: tree[x] = (y, s) with
    // x = y * generators[s]; the identity points at itself.
    tree: Vec<(usize, usize)>,
    bfs_order: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.identity == other.identity
            && self.table == other.table
            && self.generators == other.generators
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a multiplication table, validating the group law.
    pub fn from_table(
        name: impl Into<String>,
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty multiplication table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::CapExceeded {
                order: n,
                cap: MAX_GROUP_ORDER,
            });
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Invalid("table is not square over 0..order".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        // latin square check gives inverses and cancellation
        for row in &table {
            let set: BTreeSet<_> = row.iter().collect();
            if set.len() != n {
                return Err(Error::Invalid("table rows are not permutations".into()));
            }
        }
        for j in 0..n {
            let set: BTreeSet<_> = (0..n).map(|i| table[i][j]).collect();
            if set.len() != n {
                return Err(Error::Invalid("table columns are not permutations".into()));
            }
        }
        // associativity: exhaustive for small orders, on generators otherwise
        // (x(ys) = (xy)s for all x, y and generators s implies associativity
        // once the generators generate)
        let checks: Vec<usize> = if n <= 64 {
            (0..n).collect()
        } else {
            generators.clone()
        };
        for x in 0..n {
            for y in 0..n {
                for &z in &checks {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::Invalid(format!(
                            "associativity fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(Error::Invalid("generator index out of range".into()));
        }
        let flat: Vec<u16> = table.iter().flatten().map(|&x| x as u16).collect();
        let group = Self::assemble(name.into(), n, flat, identity, generators, None)?;
        Ok(group)
    }

    fn assemble(
        name: String,
        order: usize,
        table: Vec<u16>,
        identity: usize,
        generators: Vec<usize>,
        labels: Option<Vec<Permutation>>,
    ) -> Result<Self> {
        let mut inverses = vec![usize::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if table[x * order + y] as usize == identity {
                    inverses[x] = y;
                    break;
                }
            }
        }
        let mut tree = vec![(usize::MAX, usize::MAX); order];
        tree[identity] = (identity, usize::MAX);
        let mut bfs_order = vec![identity];
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for (s, &g) in generators.iter().enumerate() {
                let y = table[x * order + g] as usize;
                if tree[y].0 == usize::MAX {
                    tree[y] = (x, s);
                    bfs_order.push(y);
                    queue.push_back(y);
                }
            }
        }
        if bfs_order.len() != order {
            return Err(Error::Invalid(format!(
                "generators span only {} of {} elements",
                bfs_order.len(),
                order
            )));
        }
        Ok(FiniteGroup {
            name,
            order,
            table,
            identity,
            inverses,
            generators,
            labels,
            tree,
            bfs_order,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[Permutation]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].cycle_string(),
            None => format!("g{x}"),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x]
    }

    /// `g x g^{-1}`
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    /// Elements in breadth-first order over the generators, with each
    /// non-identity element's tree edge `(parent, generator position)`.
    pub fn spanning_tree(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.bfs_order
            .iter()
            .skip(1)
            .map(|&x| (x, self.tree[x].0, self.tree[x].1))
    }

    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs_order
    }

    /// A word in generator positions whose product is `x`.
    pub fn word(&self, x: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut y = x;
        while y != self.identity {
            let (p, s) = self.tree[y];
            w.push(s);
            y = p;
        }
        w.reverse();
        w
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The group with the same table but another generating list.
    pub fn with_generators(&self, generators: Vec<usize>) -> Result<Self> {
        Self::assemble(
            self.name.clone(),
            self.order,
            self.table.clone(),
            self.identity,
            generators,
            self.labels.clone(),
        )
    }

    /// Elements generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Size of the abelianization `G / [G, G]`, with its structure as a list
    /// of cyclic orders (not normalized).
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let comms: BTreeSet<usize> = self
            .elements()
            .flat_map(|a| {
                self.elements().map(move |b| {
                    self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
                })
            })
            .collect();
        self.closure(&comms.into_iter().collect::<Vec<_>>())
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        let n = self.order * other.order;
        if n > MAX_GROUP_ORDER {
            return Err(Error::CapExceeded {
                order: n,
                cap: MAX_GROUP_ORDER,
            });
        }
        // (a, b) -> a * other.order + b
        let mut table = Vec::with_capacity(n * n);
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        let a = self.mul(a1, a2);
                        let b = other.mul(b1, b2);
                        table.push((a * other.order + b) as u16);
                    }
                }
            }
        }
        let mut gens: Vec<usize> = self
            .generators
            .iter()
            .map(|&a| a * other.order + other.identity)
            .collect();
        gens.extend(
            other
                .generators
                .iter()
                .map(|&b| self.identity * other.order + b),
        );
        let labels = match (&self.labels, &other.labels) {
            (Some(l1), Some(l2)) => {
                let d1 = l1[0].degree();
                let d2 = l2[0].degree();
                let mut out = Vec::with_capacity(n);
                for p in l1 {
                    for q in l2 {
                        let mut img: Vec<usize> = p.images().to_vec();
                        img.extend(q.images().iter().map(|&x| x + d1));
                        debug_assert_eq!(img.len(), d1 + d2);
                        out.push(Permutation(img));
                    }
                }
                Some(out)
            }
            _ => None,
        };
        Self::assemble(
            format!("{} x {}", self.name, other.name),
            n,
            table,
            self.identity * other.order + other.identity,
            gens,
            labels,
        )
    }

    /// The element whose label is `p`, for permutation groups.
    pub fn find_permutation(&self, p: &Permutation) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|q| q == p)
    }
}

/// Closure of permutation generators on `degree` points.
pub fn close_generators(degree: usize, perms: &[Permutation]) -> Result<FiniteGroup> {
    close_generators_capped(degree, perms, MAX_GROUP_ORDER)
}

pub fn close_generators_capped(
    degree: usize,
    perms: &[Permutation],
    cap: usize,
) -> Result<FiniteGroup> {
    for p in perms {
        if p.degree() != degree {
            return Err(Error::Invalid(format!(
                "permutation {p} does not act on {degree} points"
            )));
        }
    }
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(id, 0)]);
    // right[x][s] = index of elements[x] * perms[s]
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut x = 0;
    while x < elements.len() {
        let mut row = Vec::with_capacity(perms.len());
        for p in perms {
            let y = elements[x].compose(p);
            let idx = match index.get(&y) {
                Some(&i) => i,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            order: elements.len() + 1,
                            cap,
                        });
                    }
                    let i = elements.len();
                    index.insert(y.clone(), i);
                    elements.push(y);
                    i
                }
            };
            row.push(idx);
        }
        right.push(row);
        x += 1;
    }
    let n = elements.len();
    // words from the BFS discovery order: every element j > 0 was first
    // found as parent[j] * perms[gen[j]] with parent[j] < j
    let mut parent = vec![(0usize, 0usize); n];
    let mut found = vec![false; n];
    found[0] = true;
    for (x, row) in right.iter().enumerate() {
        for (s, &y) in row.iter().enumerate() {
            if !found[y] {
                found[y] = true;
                parent[y] = (x, s);
            }
        }
    }
    let mut table = vec![0u16; n * n];
    for i in 0..n {
        table[i * n] = i as u16;
        // BFS discovery order is increasing index
        for j in 1..n {
            let (p, s) = parent[j];
            let ip = table[i * n + p] as usize;
            table[i * n + j] = right[ip][s] as u16;
        }
    }
    // generators: indices of the given permutations (deduplicated, non-identity kept)
    let generators: Vec<usize> = perms.iter().map(|p| index[p]).collect();
    FiniteGroup::assemble(
        format!("<{}>", perms.iter().map(|p| p.cycle_string()).collect::<Vec<_>>().join(", ")),
        n,
        table,
        0,
        generators,
        Some(elements),
    )
}

/// Specification of a named group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(usize),
    Dihedral(usize),
    Klein,
    WeylG2,
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    /// Parses names such as `symmetric 4`, `S4`, `alternating 5`, `C6`,
    /// `dihedral 4`, `klein`, `weyl_g2`, `product(S3, C2)` or `S3 x C2`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let lower = t.to_ascii_lowercase();
        if let Some(inner) = lower
            .strip_prefix("product(")
            .and_then(|s| s.strip_suffix(')'))
        {
            let (a, b) = split_top_level_comma(inner)
                .ok_or_else(|| Error::UnsupportedGroup(text.into()))?;
            return Ok(GroupSpec::Product(
                Box::new(Self::parse(a)?),
                Box::new(Self::parse(b)?),
            ));
        }
        if let Some((a, b)) = lower.split_once(" x ") {
            return Ok(GroupSpec::Product(
                Box::new(Self::parse(a)?),
                Box::new(Self::parse(b)?),
            ));
        }
        if let Some((a, b)) = lower.split_once('x') {
            if let (Ok(a), Ok(b)) = (Self::parse(a), Self::parse(b)) {
                return Ok(GroupSpec::Product(Box::new(a), Box::new(b)));
            }
        }
        match lower.as_str() {
            "klein" | "v4" | "klein4" => return Ok(GroupSpec::Klein),
            "weyl_g2" | "weyl-g2" | "w(g2)" => return Ok(GroupSpec::WeylG2),
            _ => {}
        }
        let words: [(&str, fn(usize) -> GroupSpec); 8] = [
            ("symmetric", GroupSpec::Symmetric),
            ("alternating", GroupSpec::Alternating),
            ("cyclic", GroupSpec::Cyclic),
            ("dihedral", GroupSpec::Dihedral),
            ("s", GroupSpec::Symmetric),
            ("a", GroupSpec::Alternating),
            ("c", GroupSpec::Cyclic),
            ("d", GroupSpec::Dihedral),
        ];
        for (word, ctor) in words {
            if let Some(rest) = lower.strip_prefix(word) {
                if let Ok(n) = rest.trim().parse::<usize>() {
                    if n == 0 {
                        break;
                    }
                    return Ok(ctor(n));
                }
            }
        }
        Err(Error::UnsupportedGroup(text.into()))
    }

    /// Expected order, computed without building the group.
    pub fn order(&self) -> Option<usize> {
        let fact = |n: usize| (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
        match self {
            GroupSpec::Symmetric(n) => fact(*n),
            GroupSpec::Alternating(n) => fact(*n).map(|f| if *n >= 2 { f / 2 } else { f }),
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::Dihedral(n) => Some(2 * n),
            GroupSpec::Klein => Some(4),
            GroupSpec::WeylG2 => Some(12),
            GroupSpec::Product(a, b) => a.order()?.checked_mul(b.order()?),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Klein => write!(f, "V4"),
            GroupSpec::WeylG2 => write!(f, "W(G2)"),
            GroupSpec::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

fn split_top_level_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn cycle_perm(degree: usize, points: &[usize]) -> Permutation {
    let mut img: Vec<usize> = (0..degree).collect();
    for w in 0..points.len() {
        img[points[w]] = points[(w + 1) % points.len()];
    }
    Permutation(img)
}

/// Builds a named group as a permutation group.
pub fn named_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    if let Some(order) = spec.order() {
        if order > MAX_GROUP_ORDER {
            return Err(Error::CapExceeded {
                order,
                cap: MAX_GROUP_ORDER,
            });
        }
    } else {
        return Err(Error::CapExceeded {
            order: usize::MAX,
            cap: MAX_GROUP_ORDER,
        });
    }
    let group = match spec {
        GroupSpec::Symmetric(n) => {
            let n = *n;
            let gens = match n {
                1 => vec![],
                2 => vec![cycle_perm(2, &[0, 1])],
                _ => vec![
                    cycle_perm(n, &[0, 1]),
                    cycle_perm(n, &(0..n).collect::<Vec<_>>()),
                ],
            };
            close_generators(n, &gens)?
        }
        GroupSpec::Alternating(n) => {
            let n = *n;
            let gens = if n < 3 {
                vec![]
            } else if n == 3 {
                vec![cycle_perm(3, &[0, 1, 2])]
            } else if n % 2 == 1 {
                vec![
                    cycle_perm(n, &[0, 1, 2]),
                    cycle_perm(n, &(0..n).collect::<Vec<_>>()),
                ]
            } else {
                vec![
                    cycle_perm(n, &[0, 1, 2]),
                    cycle_perm(n, &(1..n).collect::<Vec<_>>()),
                ]
            };
            close_generators(n.max(1), &gens)?
        }
        GroupSpec::Cyclic(n) => {
            let gens = if *n == 1 {
                vec![]
            } else {
                vec![cycle_perm(*n, &(0..*n).collect::<Vec<_>>())]
            };
            close_generators(*n, &gens)?
        }
        GroupSpec::Dihedral(n) => match n {
            1 => close_generators(2, &[cycle_perm(2, &[0, 1])])?,
            2 => klein()?,
            _ => {
                let n = *n;
                let rot = cycle_perm(n, &(0..n).collect::<Vec<_>>());
                let refl = Permutation((0..n).map(|i| (n - i) % n).collect());
                close_generators(n, &[rot, refl])?
            }
        },
        GroupSpec::Klein => klein()?,
        GroupSpec::WeylG2 => {
            // S3 on {1,2,3} times the swap of {4,5}
            let s3 = named_group(&GroupSpec::Symmetric(3))?;
            let c2 = named_group(&GroupSpec::Cyclic(2))?;
            s3.direct_product(&c2)?
        }
        GroupSpec::Product(a, b) => named_group(a)?.direct_product(&named_group(b)?)?,
    };
    Ok(group.with_name(spec.to_string()))
}

fn klein() -> Result<FiniteGroup> {
    let a = Permutation::from_cycles("(1,2)(3,4)", 4)?;
    let b = Permutation::from_cycles("(1,3)(2,4)", 4)?;
    close_generators(4, &[a, b])
}

/// A subgroup, as a sorted element set of its parent with a generating list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn from_generators(group: &FiniteGroup, generators: &[usize]) -> Self {
        let elements = group.closure(generators);
        Subgroup {
            elements,
            generators: minimal_generators(group, generators),
        }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup {
            elements: group.elements().collect(),
            generators: group.generators().to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn conjugate(&self, group: &FiniteGroup, g: usize) -> Subgroup {
        let mut elements: Vec<usize> = self.elements.iter().map(|&x| group.conjugate(x, g)).collect();
        elements.sort_unstable();
        Subgroup {
            elements,
            generators: self.generators.iter().map(|&x| group.conjugate(x, g)).collect(),
        }
    }

    /// Left cosets `g H`, each sorted, in order of their least element.
    pub fn left_cosets(&self, group: &FiniteGroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; group.order()];
        let mut cosets = Vec::new();
        for g in group.elements() {
            if seen[g] {
                continue;
            }
            let mut c: Vec<usize> = self.elements.iter().map(|&h| group.mul(g, h)).collect();
            c.sort_unstable();
            for &x in &c {
                seen[x] = true;
            }
            cosets.push(c);
        }
        cosets
    }

    /// The subgroup as a group in its own right, with the embedding into the
    /// parent (local index -> parent index).
    pub fn to_group(&self, parent: &FiniteGroup) -> Result<(FiniteGroup, Vec<usize>)> {
        let n = self.elements.len();
        let local: HashMap<usize, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i))
            .collect();
        let mut table = Vec::with_capacity(n * n);
        for &x in &self.elements {
            for &y in &self.elements {
                table.push(local[&parent.mul(x, y)] as u16);
            }
        }
        let gens: Vec<usize> = self.generators.iter().map(|g| local[g]).collect();
        let labels = parent
            .labels()
            .map(|l| self.elements.iter().map(|&x| l[x].clone()).collect());
        let name = format!("subgroup of order {} in {}", n, parent.name());
        let group = FiniteGroup::assemble(name, n, table, local[&parent.identity()], gens, labels)?;
        Ok((group, self.elements.clone()))
    }
}

fn minimal_generators(group: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let target = group.closure(gens).len();
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = 1;
    for &g in gens {
        if current == target {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(g);
        let size = group.closure(&trial).len();
        if size > current {
            chosen = trial;
            current = size;
        }
    }
    chosen
}

/// All subgroups of a group together with conjugacy classes.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    pub subgroups: Vec<Subgroup>,
    /// Conjugacy classes as index lists into `subgroups`; the first index of
    /// each class is its representative.
    pub classes: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    pub fn representatives(&self) -> Vec<&Subgroup> {
        self.classes.iter().map(|c| &self.subgroups[c[0]]).collect()
    }
}

/// Exhaustive subgroup enumeration by joins of cyclic subgroups.
pub fn subgroups(group: &FiniteGroup) -> Result<SubgroupLattice> {
    if group.order() > MAX_SUBGROUP_ORDER {
        return Err(Error::CapExceeded {
            order: group.order(),
            cap: MAX_SUBGROUP_ORDER,
        });
    }
    let mut known: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut all: Vec<Subgroup> = Vec::new();
    let mut cyclic: Vec<usize> = Vec::new();
    for g in group.elements() {
        let h = Subgroup::from_generators(group, &[g]);
        if !known.contains_key(&h.elements) {
            known.insert(h.elements.clone(), all.len());
            cyclic.push(g);
            all.push(h);
        }
    }
    let mut i = 0;
    while i < all.len() {
        for &c in &cyclic {
            if all[i].contains(c) {
                continue;
            }
            let mut gens = all[i].generators.clone();
            gens.push(c);
            let elements = group.closure(&gens);
            if !known.contains_key(&elements) {
                known.insert(elements.clone(), all.len());
                all.push(Subgroup {
                    elements,
                    generators: minimal_generators(group, &gens),
                });
            }
        }
        i += 1;
    }
    all.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    let index: HashMap<Vec<usize>, usize> = all
        .iter()
        .enumerate()
        .map(|(i, h)| (h.elements.clone(), i))
        .collect();
    let mut class_of = vec![usize::MAX; all.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..all.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let mut members = BTreeSet::from([i]);
        let mut queue = VecDeque::from([i]);
        while let Some(j) = queue.pop_front() {
            for &g in group.generators() {
                let c = all[j].conjugate(group, g);
                let k = index[&c.elements];
                if members.insert(k) {
                    queue.push_back(k);
                }
            }
        }
        let cls = classes.len();
        for &m in &members {
            class_of[m] = cls;
        }
        // subgroups are sorted by element set, so the least index is the
        // lexicographically least member of the class
        classes.push(members.into_iter().collect());
    }
    Ok(SubgroupLattice {
        subgroups: all,
        classes,
    })
}

/// A validated homomorphism between finite groups.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

/// Why a candidate homomorphism was rejected: `image(g * h)` differs from
/// `image(g) * image(h)` for a group element `g` and generator `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomWitness {
    pub g: usize,
    pub h: usize,
    pub expected: usize,
    pub found: usize,
}

impl fmt::Display for HomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "image({} * {}) = {} but image({}) * image({}) = {}",
            self.g, self.h, self.found, self.g, self.h, self.expected
        )
    }
}

impl GroupHom {
    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn image(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source
            .elements()
            .filter(|&x| self.images[x] == self.target.identity())
            .collect()
    }

    pub fn is_bijective(&self) -> bool {
        let set: BTreeSet<_> = self.images.iter().collect();
        self.source.order() == self.target.order() && set.len() == self.images.len()
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            images: group.elements().collect(),
        }
    }

    /// Inner automorphism `x -> g x g^{-1}`.
    pub fn inner(group: &Arc<FiniteGroup>, g: usize) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            images: group.elements().map(|x| group.conjugate(x, g)).collect(),
        }
    }
}

/// Extends generator images along the spanning tree and checks every
/// Cayley-graph edge; accepts exactly when the assignment is a homomorphism.
pub fn hom_check(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    generator_images: &[usize],
) -> std::result::Result<GroupHom, HomWitness> {
    assert_eq!(
        generator_images.len(),
        source.generators().len(),
        "one image per generator"
    );
    let mut images = vec![usize::MAX; source.order()];
    images[source.identity()] = target.identity();
    for (x, parent, s) in source.spanning_tree() {
        images[x] = target.mul(images[parent], generator_images[s]);
    }
    for x in source.elements() {
        for (s, &g) in source.generators().iter().enumerate() {
            let expected = target.mul(images[x], generator_images[s]);
            let found = images[source.mul(x, g)];
            if expected != found {
                return Err(HomWitness {
                    g: x,
                    h: g,
                    expected,
                    found,
                });
            }
        }
    }
    Ok(GroupHom {
        source: source.clone(),
        target: target.clone(),
        images,
    })
}

/// Validates an automorphism given by the images of the generators.
pub fn outer_twist(group: &Arc<FiniteGroup>, generator_images: &[usize]) -> Result<GroupHom> {
    if generator_images.len() != group.generators().len() {
        return Err(Error::NotHomomorphism(format!(
            "{} images for {} generators",
            generator_images.len(),
            group.generators().len()
        )));
    }
    let hom = hom_check(group, group, generator_images)
        .map_err(|w| Error::NotHomomorphism(w.to_string()))?;
    if !hom.is_bijective() {
        return Err(Error::NotHomomorphism("endomorphism is not bijective".into()));
    }
    Ok(hom)
}

/// Automorphism of a subgroup induced by conjugation with an element of the
/// ambient group that normalizes it.
pub fn conjugation_automorphism(
    parent: &FiniteGroup,
    sub: &Subgroup,
    sub_group: &Arc<FiniteGroup>,
    embedding: &[usize],
    g: usize,
) -> Result<GroupHom> {
    let local: HashMap<usize, usize> = embedding.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let images = sub_group
        .generators()
        .iter()
        .map(|&x| {
            let y = parent.conjugate(embedding[x], g);
            local
                .get(&y)
                .copied()
                .ok_or_else(|| Error::Invalid(format!("element does not normalize subgroup of order {}", sub.order())))
        })
        .collect::<Result<Vec<_>>>()?;
    outer_twist(sub_group, &images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(c: &str, n: usize) -> Permutation {
        Permutation::from_cycles(c, n).unwrap()
    }

    #[test]
    fn closure_examples() {
        let s3 = close_generators(3, &[perm("(1,2)", 3), perm("(1,2,3)", 3)]).unwrap();
        assert_eq!(s3.order(), 6);
        let v = close_generators(4, &[perm("(1,2)(3,4)", 4), perm("(1,3)(2,4)", 4)]).unwrap();
        assert_eq!(v.order(), 4);
        assert!(v.is_abelian());
        assert!(v.elements().all(|x| v.mul(x, x) == v.identity()));
        let t = close_generators(3, &[]).unwrap();
        assert_eq!(t.order(), 1);
    }

    #[test]
    fn closure_cap() {
        let gens = [perm("(1,2)", 8), perm("(1,2,3,4,5,6,7,8)", 8)];
        assert!(matches!(
            close_generators_capped(8, &gens, 100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn cycles_compose_right_to_left() {
        // (1,2)(2,3) = (1,2,3) as functions applied right to left
        let p = perm("(1,2)(2,3)", 3);
        assert_eq!(p, perm("(1,2,3)", 3));
        assert_eq!(p.cycle_string(), "(1,2,3)");
    }

    #[test]
    fn named_orders() {
        for (s, n) in [
            ("symmetric 4", 24),
            ("alternating 5", 60),
            ("cyclic 7", 7),
            ("dihedral 4", 8),
            ("weyl_g2", 12),
            ("product(S3, C2)", 12),
            ("klein", 4),
            ("A4", 12),
            ("dihedral 2", 4),
        ] {
            let g = named_group(&GroupSpec::parse(s).unwrap()).unwrap();
            assert_eq!(g.order(), n, "{s}");
        }
        assert!(GroupSpec::parse("monster").is_err());
    }

    #[test]
    fn subgroup_counts() {
        let c4 = named_group(&GroupSpec::Cyclic(4)).unwrap();
        let l = subgroups(&c4).unwrap();
        assert_eq!(l.subgroups.len(), 3);
        let s3 = named_group(&GroupSpec::Symmetric(3)).unwrap();
        let l = subgroups(&s3).unwrap();
        assert_eq!(l.subgroups.len(), 6);
        assert_eq!(l.classes.len(), 4);
        let v = named_group(&GroupSpec::Klein).unwrap();
        assert_eq!(subgroups(&v).unwrap().subgroups.len(), 5);
        let s4 = named_group(&GroupSpec::Symmetric(4)).unwrap();
        let l = subgroups(&s4).unwrap();
        assert_eq!(l.subgroups.len(), 30);
        assert_eq!(l.classes.len(), 11);
        let s5 = named_group(&GroupSpec::Symmetric(5)).unwrap();
        let l = subgroups(&s5).unwrap();
        assert_eq!(l.subgroups.len(), 156);
        assert_eq!(l.classes.len(), 19);
    }

    #[test]
    fn homomorphism_checks() {
        let s4 = Arc::new(named_group(&GroupSpec::Symmetric(4)).unwrap());
        let s3 = Arc::new(named_group(&GroupSpec::Symmetric(3)).unwrap());
        // S4 = <(1,2), (1,2,3,4)> acting on the pair partitions
        // {12|34, 13|24, 14|23}: (1,2) -> (2,3) and (1,2,3,4) -> (1,3).
        let a = s3.find_permutation(&perm("(2,3)", 3)).unwrap();
        let b = s3.find_permutation(&perm("(1,3)", 3)).unwrap();
        let h = hom_check(&s4, &s3, &[a, b]).unwrap();
        assert_eq!(h.kernel().len(), 4);
        let c2 = Arc::new(named_group(&GroupSpec::Cyclic(2)).unwrap());
        let c3 = Arc::new(named_group(&GroupSpec::Cyclic(3)).unwrap());
        assert!(hom_check(&c2, &c3, &[c3.generators()[0]]).is_err());
        let id = hom_check(&s4, &s4, s4.generators()).unwrap();
        assert!(id.is_bijective());
    }

    #[test]
    fn automorphisms() {
        let s3 = Arc::new(named_group(&GroupSpec::Symmetric(3)).unwrap());
        let c = s3.find_permutation(&perm("(1,2,3)", 3)).unwrap();
        let imgs: Vec<usize> = s3.generators().iter().map(|&x| s3.conjugate(x, c)).collect();
        assert!(outer_twist(&s3, &imgs).is_ok());
        let e = s3.identity();
        assert!(outer_twist(&s3, &[e, e]).is_err());
    }
}
