//! Finite groups as explicit multiplication tables.
//!
//! Element 0 is always the identity. Tables are validated exhaustively at
//! construction; everything downstream may assume the axioms hold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub order: usize,
    /// `mul[x][y]` is the product xy.
    pub mul: Vec<Vec<usize>>,
    /// `inv[x]` is the inverse of x.
    pub inv: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// An element of a named group, by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub usize);

/// Named constructors and explicit tables accepted by [`make_group`].
#[derive(Debug, Clone)]
pub enum GroupSpec {
    /// Trivial group, also reachable as `Z(1)`.
    Trivial,
    /// Cyclic group of order n.
    Z(usize),
    /// Symmetric group on n letters, n <= 5, elements in lexicographic
    /// one-line-notation order.
    S(usize),
    /// Dihedral group of order 2n.
    D(usize),
    /// Quaternion group of order 8.
    Q8,
    /// Explicit table; inverses are derived and validated.
    Table {
        mul: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    },
}

pub fn make_group(spec: GroupSpec) -> Result<FiniteGroup> {
    let g = match spec {
        GroupSpec::Trivial => cyclic(1, Some("trivial".to_string())),
        GroupSpec::Z(n) => {
            if n == 0 {
                return Err(Error::bad_input("Z(0) is not a group"));
            }
            cyclic(n, Some(format!("Z{n}")))
        }
        GroupSpec::S(n) => {
            if n > 5 {
                return Err(Error::bad_input("S(n) supported only for n <= 5"));
            }
            symmetric(n)
        }
        GroupSpec::D(n) => {
            if n == 0 {
                return Err(Error::bad_input("D(0) is not a group"));
            }
            dihedral(n)
        }
        GroupSpec::Q8 => quaternion(),
        GroupSpec::Table { mul, labels } => from_table(mul, labels)?,
    };
    g.validate()?;
    Ok(g)
}

/// Parse a group name as accepted by the CLI: "trivial", "Z4", "S3", "D4", "Q8".
pub fn group_by_name(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if name.eq_ignore_ascii_case("trivial") || name == "1" {
        return make_group(GroupSpec::Trivial);
    }
    if name.eq_ignore_ascii_case("q8") {
        return make_group(GroupSpec::Q8);
    }
    let (head, tail) = name.split_at(1);
    let n: usize = tail
        .parse()
        .map_err(|_| Error::bad_input(format!("unknown group name {name:?}")))?;
    match head {
        "Z" | "z" | "C" | "c" => make_group(GroupSpec::Z(n)),
        "S" | "s" => make_group(GroupSpec::S(n)),
        "D" | "d" => make_group(GroupSpec::D(n)),
        _ => Err(Error::bad_input(format!("unknown group name {name:?}"))),
    }
}

fn cyclic(n: usize, name: Option<String>) -> FiniteGroup {
    let mul = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
    let inv = (0..n).map(|x| (n - x) % n).collect();
    let labels = (0..n)
        .map(|x| match x {
            0 => "e".to_string(),
            1 => "a".to_string(),
            k => format!("a^{k}"),
        })
        .collect();
    FiniteGroup {
        order: n,
        mul,
        inv,
        labels: Some(labels),
        name,
    }
}

fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn symmetric(n: usize) -> FiniteGroup {
    let perms = permutations_lex(n);
    let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    let order = perms.len();
    // (pq)(i) = p(q(i)): q acts first.
    let mul: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let pq: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                    index(&pq)
                })
                .collect()
        })
        .collect();
    let inv = perms
        .iter()
        .map(|p| {
            let mut ip = vec![0; n];
            for (i, &pi) in p.iter().enumerate() {
                ip[pi] = i;
            }
            index(&ip)
        })
        .collect();
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>())
        .collect();
    FiniteGroup {
        order,
        mul,
        inv,
        labels: Some(labels),
        name: Some(format!("S{n}")),
    }
}

fn dihedral(n: usize) -> FiniteGroup {
    // Elements s^a r^b with 0 <= a < 2, 0 <= b < n, index a*n + b.
    // Relations: r^n = e, s^2 = e, s r s = r^-1.
    let order = 2 * n;
    let idx = |a: usize, b: usize| a * n + b;
    let mut mul = vec![vec![0; order]; order];
    for a1 in 0..2 {
        for b1 in 0..n {
            for a2 in 0..2 {
                for b2 in 0..n {
                    // s^a1 r^b1 s^a2 r^b2 = s^(a1+a2) r^(b2 + (-1)^a2 b1)
                    let a = (a1 + a2) % 2;
                    let b = if a2 == 0 { (b1 + b2) % n } else { (n - b1 + b2) % n };
                    mul[idx(a1, b1)][idx(a2, b2)] = idx(a, b);
                }
            }
        }
    }
    let inv = (0..order)
        .map(|x| {
            let (a, b) = (x / n, x % n);
            if a == 0 {
                idx(0, (n - b) % n)
            } else {
                x // reflections are involutions: (s r^b)^2 = s^2 r^(-b+b) = e
            }
        })
        .collect();
    let labels = (0..order)
        .map(|x| {
            let (a, b) = (x / n, x % n);
            match (a, b) {
                (0, 0) => "e".to_string(),
                (0, 1) => "r".to_string(),
                (0, b) => format!("r^{b}"),
                (_, 0) => "s".to_string(),
                (_, 1) => "sr".to_string(),
                (_, b) => format!("sr^{b}"),
            }
        })
        .collect();
    FiniteGroup {
        order,
        mul,
        inv,
        labels: Some(labels),
        name: Some(format!("D{n}")),
    }
}

fn quaternion() -> FiniteGroup {
    // 1, -1, i, -i, j, -j, k, -k; the identity must sit at index 0.
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
    // unit products with sign: table over {1, i, j, k}
    let unit_mul = |u: usize, v: usize| -> (usize, bool) {
        match (u, v) {
            (0, x) => (x, false),
            (x, 0) => (x, false),
            (1, 1) => (0, true),
            (2, 2) => (0, true),
            (3, 3) => (0, true),
            (1, 2) => (3, false), // ij = k
            (2, 1) => (3, true),  // ji = -k
            (2, 3) => (1, false), // jk = i
            (3, 2) => (1, true),  // kj = -i
            (3, 1) => (2, false), // ki = j
            (1, 3) => (2, true),  // ik = -j
            _ => unreachable!(),
        }
    };
    let enc = |unit: usize, neg: bool| 2 * unit + usize::from(neg);
    let mut mul = vec![vec![0; 8]; 8];
    for x in 0..8 {
        for y in 0..8 {
            let (ux, sx) = (x / 2, x % 2 == 1);
            let (uy, sy) = (y / 2, y % 2 == 1);
            let (u, s) = unit_mul(ux, uy);
            mul[x][y] = enc(u, s ^ sx ^ sy);
        }
    }
    let mut inv = vec![0; 8];
    for x in 0..8 {
        inv[x] = (0..8).find(|&y| mul[x][y] == 0).unwrap();
    }
    FiniteGroup {
        order: 8,
        mul,
        inv,
        labels: Some(labels.iter().map(|s| s.to_string()).collect()),
        name: Some("Q8".to_string()),
    }
}

fn from_table(mul: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<FiniteGroup> {
    let order = mul.len();
    if order == 0 {
        return Err(Error::validation("empty multiplication table"));
    }
    for (i, row) in mul.iter().enumerate() {
        if row.len() != order {
            return Err(Error::validation(format!("row {i} has length {}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= order) {
            return Err(Error::validation(format!("entry {bad} out of range in row {i}")));
        }
    }
    if let Some(ref l) = labels {
        if l.len() != order {
            return Err(Error::validation("labels length differs from order"));
        }
    }
    let mut inv = vec![usize::MAX; order];
    for x in 0..order {
        match (0..order).find(|&y| mul[x][y] == 0 && mul[y][x] == 0) {
            Some(y) => inv[x] = y,
            None => {
                return Err(Error::validation(format!("element {x} has no two-sided inverse")))
            }
        }
    }
    Ok(FiniteGroup {
        order,
        mul,
        inv,
        labels,
        name: None,
    })
}

impl FiniteGroup {
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if self.mul.len() != n || self.inv.len() != n {
            return Err(Error::validation("table dimensions disagree with order"));
        }
        for x in 0..n {
            if self.mul[0][x] != x || self.mul[x][0] != x {
                return Err(Error::validation(format!(
                    "element 0 is not an identity at x = {x}"
                )));
            }
        }
        for x in 0..n {
            if self.inv[x] >= n || self.mul[x][self.inv[x]] != 0 || self.mul[self.inv[x]][x] != 0 {
                return Err(Error::validation(format!("bad inverse for element {x}")));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.mul[self.mul[x][y]][z] != self.mul[x][self.mul[y][z]] {
                        return Err(Error::validation(format!(
                            "non-associative triple ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Conjugacy classes as a partition; classes ordered by least element,
    /// elements within a class in increasing order.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> =
                (0..self.order).map(|g| self.conj(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Index of the conjugacy class containing x, in the order produced by
    /// `conjugacy_classes`.
    pub fn class_of(&self, x: usize) -> usize {
        self.conjugacy_classes()
            .iter()
            .position(|c| c.contains(&x))
            .unwrap()
    }

    /// Least element conjugate to x.
    pub fn class_min(&self, x: usize) -> usize {
        (0..self.order).map(|g| self.conj(g, x)).min().unwrap()
    }

    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| self.mul(g, x) == self.mul(x, g))
            .collect()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Resolve an element reference: an index, a label, or either with a
    /// `^k` power suffix (k may be negative). Ambiguous labels are rejected.
    pub fn parse_element(&self, token: &str) -> Result<usize> {
        let token = token.trim();
        let (base, exp) = match token.rsplit_once('^') {
            Some((b, e)) if e.parse::<i64>().is_ok() => (b, e.parse::<i64>().unwrap()),
            _ => (token, 1),
        };
        let base_idx = self.resolve_base(base)?;
        Ok(self.power(base_idx, exp))
    }

    fn resolve_base(&self, base: &str) -> Result<usize> {
        if let Some(labels) = &self.labels {
            let hits: Vec<usize> = labels
                .iter()
                .enumerate()
                .filter(|(_, l)| l.as_str() == base)
                .map(|(i, _)| i)
                .collect();
            match hits.len() {
                1 => return Ok(hits[0]),
                0 => {}
                _ => return Err(Error::bad_input(format!("ambiguous label {base:?}"))),
            }
        }
        // "e" always names the identity unless a label claims it
        if base == "e" {
            return Ok(0);
        }
        base.parse::<usize>()
            .ok()
            .filter(|&i| i < self.order)
            .ok_or_else(|| Error::bad_input(format!("unknown element {base:?}")))
    }

    pub fn power(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut out = 0;
        for _ in 0..k.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }

    /// Parse a comma-separated monodromy tuple.
    pub fn parse_tuple(&self, s: &str) -> Result<Vec<usize>> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Vec::new());
        }
        s.split(',').map(|t| self.parse_element(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_orders() {
        assert_eq!(make_group(GroupSpec::Z(1)).unwrap().order, 1);
        assert_eq!(make_group(GroupSpec::S(3)).unwrap().order, 6);
        assert_eq!(make_group(GroupSpec::D(4)).unwrap().order, 8);
        assert_eq!(make_group(GroupSpec::Q8).unwrap().order, 8);
        assert_eq!(make_group(GroupSpec::S(4)).unwrap().order, 24);
        assert!(make_group(GroupSpec::S(6)).is_err());
    }

    #[test]
    fn bad_table_cites_offender() {
        // Z/2 table with one corrupted entry (breaks inverse/identity search).
        let err = make_group(GroupSpec::Table {
            mul: vec![vec![0, 1], vec![1, 1]],
            labels: None,
        })
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("inverse") || msg.contains("identity") || msg.contains("triple"));

        // Associativity violation in a table that has identity and inverses:
        // order 3 with a tweaked cell.
        let err = make_group(GroupSpec::Table {
            mul: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            labels: None,
        });
        assert!(err.is_ok());
        let err = make_group(GroupSpec::Table {
            mul: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]],
            labels: None,
        })
        .unwrap_err();
        assert!(err.to_string().contains("triple") || err.to_string().contains("inverse"));
    }

    #[test]
    fn conjugacy_classes_oracle() {
        // Brute-force orbit oracle: class of x is {gxg^-1 : g}.
        let check = |g: &FiniteGroup| {
            let classes = g.conjugacy_classes();
            let mut covered = vec![false; g.order];
            for class in &classes {
                for &x in class {
                    assert!(!covered[x]);
                    covered[x] = true;
                    let orbit: std::collections::BTreeSet<usize> =
                        (0..g.order).map(|h| g.conj(h, x)).collect();
                    assert_eq!(orbit.iter().copied().collect::<Vec<_>>(), *class);
                }
            }
            assert!(covered.iter().all(|&c| c));
            assert_eq!(classes[0], vec![0]);
        };
        let z3 = make_group(GroupSpec::Z(3)).unwrap();
        check(&z3);
        assert_eq!(z3.conjugacy_classes().len(), 3);

        let s3 = make_group(GroupSpec::S(3)).unwrap();
        check(&s3);
        let mut sizes: Vec<usize> = s3.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);

        let q8 = make_group(GroupSpec::Q8).unwrap();
        check(&q8);
        assert_eq!(q8.conjugacy_classes().len(), 5);
    }

    #[test]
    fn centralizers() {
        let s3 = make_group(GroupSpec::S(3)).unwrap();
        assert_eq!(s3.centralizer(0).len(), 6);
        // transpositions in S3: one-line "132", "213", "321"
        let labels = s3.labels.clone().unwrap();
        for (i, l) in labels.iter().enumerate() {
            if ["132", "213", "321"].contains(&l.as_str()) {
                assert_eq!(s3.centralizer(i).len(), 2, "centralizer of {l}");
            }
        }
        let z5 = make_group(GroupSpec::Z(5)).unwrap();
        for x in 0..5 {
            assert_eq!(z5.centralizer(x).len(), 5);
        }
    }

    #[test]
    fn orbit_stabilizer_exact() {
        for g in [
            make_group(GroupSpec::Z(4)).unwrap(),
            make_group(GroupSpec::S(4)).unwrap(),
            make_group(GroupSpec::D(5)).unwrap(),
            make_group(GroupSpec::Q8).unwrap(),
        ] {
            let classes = g.conjugacy_classes();
            for x in 0..g.order {
                let class_len = classes.iter().find(|c| c.contains(&x)).unwrap().len();
                assert_eq!(class_len * g.centralizer(x).len(), g.order);
            }
        }
    }

    #[test]
    fn centralizer_is_subgroup() {
        let g = make_group(GroupSpec::S(4)).unwrap();
        for x in 0..g.order {
            let c = g.centralizer(x);
            assert!(c.contains(&0));
            assert!(c.contains(&x));
            for &a in &c {
                assert!(c.contains(&g.inv(a)));
                for &b in &c {
                    assert!(c.contains(&g.mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn named_groups_round_trip_serialization() {
        for name in ["Z4", "S3", "D4", "Q8"] {
            let g = group_by_name(name).unwrap();
            let json = serde_json::to_string(&g).unwrap();
            let back: FiniteGroup = serde_json::from_str(&json).unwrap();
            assert_eq!(g, back);
            back.validate().unwrap();
        }
    }

    #[test]
    fn element_parsing() {
        let z4 = group_by_name("Z4").unwrap();
        assert_eq!(z4.parse_element("e").unwrap(), 0);
        assert_eq!(z4.parse_element("a").unwrap(), 1);
        assert_eq!(z4.parse_element("a^-1").unwrap(), 3);
        assert_eq!(z4.parse_element("a^2").unwrap(), 2);
        assert_eq!(z4.parse_element("3").unwrap(), 3);
        assert_eq!(z4.parse_tuple("a,a^-1").unwrap(), vec![1, 3]);
        assert_eq!(z4.parse_tuple("-").unwrap(), Vec::<usize>::new());
        assert!(z4.parse_element("b").is_err());

        let amb = make_group(GroupSpec::Table {
            mul: vec![vec![0, 1], vec![1, 0]],
            labels: Some(vec!["x".into(), "x".into()]),
        })
        .unwrap();
        assert!(amb.parse_element("x").is_err());
    }

    #[test]
    fn s_n_lex_order_is_deterministic() {
        let s3 = make_group(GroupSpec::S(3)).unwrap();
        let labels = s3.labels.unwrap();
        assert_eq!(labels, vec!["123", "132", "213", "231", "312", "321"]);
        // identity is the lexicographically first permutation
        assert_eq!(labels[0], "123");
    }

    #[test]
    fn dihedral_relations() {
        let d4 = make_group(GroupSpec::D(4)).unwrap();
        let r = 1;
        let s = 4;
        // s r s = r^-1
        assert_eq!(d4.mul(d4.mul(s, r), s), d4.inv(r));
        assert_eq!(d4.power(r, 4), 0);
        assert_eq!(d4.mul(s, s), 0);
    }

    #[test]
    fn quaternion_relations() {
        let q8 = make_group(GroupSpec::Q8).unwrap();
        let l = |s: &str| q8.parse_element(s).unwrap();
        let (i, j, k, m1) = (l("i"), l("j"), l("k"), l("-1"));
        assert_eq!(q8.mul(i, i), m1);
        assert_eq!(q8.mul(j, j), m1);
        assert_eq!(q8.mul(i, j), k);
        assert_eq!(q8.mul(j, i), l("-k"));
        assert_eq!(q8.mul(m1, m1), 0);
    }
}
