//! Permutations and fully enumerated finite permutation groups.
//!
//! Composition is right to left: `(p * q)(i) = p(q(i))`. Points are
//! 1-based in text and 0-based in storage.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::exactnum::Cyclotomic;

pub const DEFAULT_ORDER_CAP: usize = 10080;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order exceeds the configured cap of {cap}")]
    OrderLimitExceeded { cap: usize },
    #[error("cannot parse permutation `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("{0} is not an element of the group")]
    NotAnElement(String),
    #[error("group is not abelian")]
    NotAbelian,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n as u32).collect() }
    }

    /// From 0-based images; panics if not a bijection.
    pub fn from_images(images: Vec<u32>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!((i as usize) < images.len() && !seen[i as usize], "not a permutation: {images:?}");
            seen[i as usize] = true;
        }
        Perm { images }
    }

    /// From a list of 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut seen = vec![false; n];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a == 0 || a > n {
                    return Err(GroupError::Parse {
                        text: format!("{cycles:?}"),
                        reason: format!("point {a} outside 1..{n}"),
                    });
                }
                if seen[a - 1] {
                    return Err(GroupError::Parse {
                        text: format!("{cycles:?}"),
                        reason: format!("point {a} repeated"),
                    });
                }
                seen[a - 1] = true;
                let b = cyc[(k + 1) % cyc.len()];
                images[a - 1] = (b - 1) as u32;
            }
        }
        Ok(Perm { images })
    }

    /// Parse cycle notation: `()`, `(1 2 3)(4 5)`, or compact `(1342)` when
    /// every point is a single digit.
    pub fn parse(text: &str, n: usize) -> Result<Self, GroupError> {
        let err = |reason: &str| GroupError::Parse { text: text.to_string(), reason: reason.to_string() };
        let t = text.trim();
        if t.is_empty() || t == "()" || t == "1" {
            return Ok(Self::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('(') {
                return Err(err("expected `(`"));
            }
            let close = rest.find(')').ok_or_else(|| err("unbalanced parenthesis"))?;
            let body = rest[1..close].trim();
            rest = &rest[close + 1..];
            if body.is_empty() {
                continue;
            }
            let pts: Vec<usize> = if body.contains(|c: char| c == ' ' || c == ',') {
                body.split(|c: char| c == ' ' || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| err("bad point")))
                    .collect::<Result<_, _>>()?
            } else {
                body.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| err("bad point"))).collect::<Result<_, _>>()?
            };
            cycles.push(pts);
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn order(&self) -> usize {
        let mut acc = 1usize;
        for c in self.cycles() {
            acc = num_integer::lcm(acc, c.len());
        }
        acc
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    /// Nontrivial cycles, 0-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut j = self.apply(s);
            while j != s {
                seen[j] = true;
                cyc.push(j);
                j = self.apply(j);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        let sep = if self.degree() <= 9 { "" } else { " " };
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// Which subgroups [`PermGroup::subgroups`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupFilter {
    All,
    Abelian,
    Cyclic,
}

/// A permutation group with all of its elements listed in lexicographic
/// order of one-line notation (so the identity comes first).
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Option<Arc<Vec<u32>>>,
}

const TABLE_LIMIT: usize = 1024;

impl PermGroup {
    pub fn closure(degree: usize, generators: &[Perm]) -> Result<Self, GroupError> {
        Self::closure_capped(degree, generators, DEFAULT_ORDER_CAP)
    }

    pub fn closure_capped(degree: usize, generators: &[Perm], cap: usize) -> Result<Self, GroupError> {
        for g in generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q = p.compose(g);
                if !seen.contains(&q) {
                    if seen.len() >= cap {
                        return Err(GroupError::OrderLimitExceeded { cap });
                    }
                    seen.insert(q.clone());
                    queue.push_back(q);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::from_sorted(degree, generators.to_vec(), elements))
    }

    fn from_sorted(degree: usize, generators: Vec<Perm>, elements: Vec<Perm>) -> Self {
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; n * n];
            for (i, a) in elements.iter().enumerate() {
                for (j, b) in elements.iter().enumerate() {
                    t[i * n + j] = index[&a.compose(b)] as u32;
                }
            }
            Arc::new(t)
        });
        PermGroup { degree, generators, elements, index, table }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::closure(degree, &[]).expect("trivial group")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[vec![1, 2]]).unwrap());
        }
        if n >= 3 {
            gens.push(Perm::from_cycles(n, &[(1..=n).collect()]).unwrap());
        }
        Self::closure(n, &gens).expect("symmetric group within cap")
    }

    pub fn alternating(n: usize) -> Self {
        let gens: Vec<Perm> = (3..=n).map(|k| Perm::from_cycles(n, &[vec![1, 2, k]]).unwrap()).collect();
        Self::closure(n, &gens).expect("alternating group within cap")
    }

    /// `<(1 2 ... n)>` acting on `n` points.
    pub fn cyclic(n: usize) -> Self {
        let gens = if n >= 2 { vec![Perm::from_cycles(n, &[(1..=n).collect()]).unwrap()] } else { vec![] };
        Self::closure(n, &gens).expect("cyclic group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|a| g.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements.iter().any(|e| e.order() == self.order())
    }

    /// lcm of element orders.
    pub fn exponent(&self) -> usize {
        self.elements.iter().fold(1, |acc, e| num_integer::lcm(acc, e.order()))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|e| other.contains(e))
    }

    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.elements == other.elements
    }

    /// Elements fixing the 0-based point `p`.
    pub fn stabilizer_of_point(&self, p: usize) -> PermGroup {
        let elems: Vec<Perm> = self.elements.iter().filter(|e| e.apply(p) == p).cloned().collect();
        self.subgroup_from_elements(elems)
    }

    /// Wrap a set of elements already known to form a subgroup.
    pub fn subgroup_from_elements(&self, mut elems: Vec<Perm>) -> PermGroup {
        elems.sort();
        elems.dedup();
        let gens = minimal_generators(self.degree, &elems);
        Self::from_sorted(self.degree, gens, elems)
    }

    /// Subgroup generated by the given elements (which must lie in `self`).
    pub fn generated_by(&self, gens: &[Perm]) -> PermGroup {
        Self::closure_capped(self.degree, gens, usize::MAX).expect("subgroup of a finite group")
    }

    /// Smallest subgroup containing all `parts`.
    pub fn generated_subgroup(&self, parts: &[PermGroup]) -> PermGroup {
        let gens: Vec<Perm> = parts.iter().flat_map(|p| p.generators.iter().cloned()).collect();
        let gens = dedup_nontrivial(gens);
        self.generated_by(&gens)
    }

    /// All subgroups matching the filter, sorted by order and then by element
    /// list. Built by joining cyclic subgroups.
    pub fn subgroups(&self, filter: SubgroupFilter) -> Vec<PermGroup> {
        let mut cyclic: Vec<Vec<usize>> = Vec::new();
        let mut cyclic_gen: Vec<usize> = Vec::new();
        let mut seen_cyc: HashSet<Vec<usize>> = HashSet::new();
        for i in 0..self.order() {
            let set = self.cyclic_indices(i);
            if seen_cyc.insert(set.clone()) {
                cyclic.push(set);
                cyclic_gen.push(i);
            }
        }
        let mut found: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut frontier: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (set, &g) in cyclic.iter().zip(&cyclic_gen) {
            found.insert(set.clone(), vec![g]);
            frontier.push((set.clone(), vec![g]));
        }
        if filter != SubgroupFilter::Cyclic {
            while let Some((set, gens)) = frontier.pop() {
                let members: HashSet<usize> = set.iter().copied().collect();
                for &c in &cyclic_gen {
                    if members.contains(&c) {
                        continue;
                    }
                    if filter == SubgroupFilter::Abelian && !set.iter().all(|&h| self.mul(h, c) == self.mul(c, h)) {
                        continue;
                    }
                    let mut g2 = gens.clone();
                    g2.push(c);
                    let joined = self.close_indices(&g2);
                    if !found.contains_key(&joined) {
                        found.insert(joined.clone(), g2.clone());
                        frontier.push((joined, g2));
                    }
                }
            }
        }
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = found.into_iter().collect();
        out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        out.into_iter()
            .map(|(set, gens)| {
                let elems: Vec<Perm> = set.iter().map(|&i| self.elements[i].clone()).collect();
                let gens = dedup_nontrivial(gens.iter().map(|&i| self.elements[i].clone()).collect());
                Self::from_sorted(self.degree, gens, elems)
            })
            .collect()
    }

    fn cyclic_indices(&self, g: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut cur = g;
        while cur != 0 {
            out.push(cur);
            cur = self.mul(cur, g);
        }
        out.sort();
        out
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn close_indices(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut out = vec![0usize];
        while let Some(p) = queue.pop_front() {
            for &g in gens {
                let q = self.mul(p, g);
                if !seen[q] {
                    seen[q] = true;
                    out.push(q);
                    queue.push_back(q);
                }
            }
        }
        out.sort();
        out
    }

    /// Generating set chosen greedily by descending element order (ties by
    /// element order in the list).
    pub fn greedy_generators(&self) -> Vec<Perm> {
        let mut idx: Vec<usize> = (0..self.order()).collect();
        idx.sort_by(|&a, &b| self.elements[b].order().cmp(&self.elements[a].order()).then(a.cmp(&b)));
        let mut gens: Vec<usize> = Vec::new();
        let mut cur = vec![0usize];
        for i in idx {
            if cur.len() == self.order() {
                break;
            }
            if cur.binary_search(&i).is_err() {
                gens.push(i);
                cur = self.close_indices(&gens);
            }
        }
        gens.into_iter().map(|i| self.elements[i].clone()).collect()
    }

    /// All linear characters of an abelian group, as value tables indexed by
    /// element index. The trivial character comes first.
    pub fn characters(&self) -> Result<Vec<Vec<Cyclotomic>>, GroupError> {
        if !self.is_abelian() {
            return Err(GroupError::NotAbelian);
        }
        let gens: Vec<usize> = self.generators.iter().filter(|g| !g.is_identity()).map(|g| self.index[g]).collect();
        let orders: Vec<usize> = gens.iter().map(|&g| self.elements[g].order()).collect();
        let mut out = Vec::new();
        let total: usize = orders.iter().product();
        for code in 0..total {
            let mut c = code;
            let exps: Vec<usize> = orders
                .iter()
                .map(|&o| {
                    let e = c % o;
                    c /= o;
                    e
                })
                .collect();
            let mut vals: Vec<Option<Cyclotomic>> = vec![None; self.order()];
            vals[0] = Some(Cyclotomic::one());
            let mut queue = VecDeque::from([0usize]);
            let mut ok = true;
            'bfs: while let Some(p) = queue.pop_front() {
                for (k, &g) in gens.iter().enumerate() {
                    let q = self.mul(p, g);
                    let v = vals[p].as_ref().unwrap() * &Cyclotomic::root_of_unity(orders[k] as u32, exps[k] as i64);
                    match &vals[q] {
                        None => {
                            vals[q] = Some(v);
                            queue.push_back(q);
                        }
                        Some(w) if *w != v => {
                            ok = false;
                            break 'bfs;
                        }
                        _ => {}
                    }
                }
            }
            if ok {
                out.push(vals.into_iter().map(|v| v.unwrap()).collect());
            }
        }
        Ok(out)
    }

    /// Number of elements of each order, sorted by order.
    pub fn order_statistics(&self) -> Vec<(usize, usize)> {
        let mut m: std::collections::BTreeMap<usize, usize> = Default::default();
        for e in &self.elements {
            *m.entry(e.order()).or_default() += 1;
        }
        m.into_iter().collect()
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|p| p.to_string()).collect();
        write!(f, "PermGroup(degree {}, order {}, <{}>)", self.degree, self.order(), g.join(", "))
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

fn dedup_nontrivial(gens: Vec<Perm>) -> Vec<Perm> {
    let mut out: Vec<Perm> = Vec::new();
    for g in gens {
        if !g.is_identity() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

fn minimal_generators(degree: usize, elems: &[Perm]) -> Vec<Perm> {
    let target: HashSet<&Perm> = elems.iter().collect();
    let mut gens: Vec<Perm> = Vec::new();
    let mut cur: HashSet<Perm> = HashSet::from([Perm::identity(degree)]);
    let mut sorted: Vec<&Perm> = elems.iter().collect();
    sorted.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.cmp(b)));
    for e in sorted {
        if cur.len() == target.len() {
            break;
        }
        if !cur.contains(e) {
            gens.push(e.clone());
            let g = PermGroup::closure_capped(degree, &gens, usize::MAX).expect("finite");
            cur = g.elements.into_iter().collect();
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    #[test]
    fn composition_is_right_to_left() {
        let a = p("(12)", 3);
        let b = p("(23)", 3);
        // apply (23) first: 1 -> 1 -> 2
        assert_eq!(a.compose(&b).apply(0), 1);
        assert_eq!(a.compose(&b), p("(123)", 3));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("(1 3 4 2)", 4), p("(1342)", 4));
        assert_eq!(p("(1342)", 4).to_string(), "(1342)");
        assert_eq!(p("()", 4).to_string(), "()");
        assert_eq!(p("(1 10)", 10).to_string(), "(1 10)");
        assert!(Perm::parse("(1 1)", 3).is_err());
        assert!(Perm::parse("(1 4)", 3).is_err());
        assert!(Perm::parse("(12", 3).is_err());
    }

    #[test]
    fn closure_orders() {
        let s3 = PermGroup::closure(3, &[p("(12)", 3), p("(123)", 3)]).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(s3.element(0).is_identity());
        let c4 = PermGroup::closure(4, &[p("(1234)", 4)]).unwrap();
        assert_eq!(c4.order(), 4);
    }

    #[test]
    fn order_cap() {
        let r = PermGroup::closure_capped(5, &[p("(12)", 5), p("(12345)", 5)], 100);
        assert_eq!(r.unwrap_err(), GroupError::OrderLimitExceeded { cap: 100 });
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(PermGroup::symmetric(3).subgroups(SubgroupFilter::All).len(), 6);
        assert_eq!(PermGroup::cyclic(4).subgroups(SubgroupFilter::All).len(), 3);
        assert_eq!(PermGroup::symmetric(4).subgroups(SubgroupFilter::All).len(), 30);
        assert_eq!(PermGroup::symmetric(4).subgroups(SubgroupFilter::Cyclic).len(), 17);
    }

    #[test]
    fn generated_subgroup_examples() {
        let s3 = PermGroup::symmetric(3);
        let a = s3.generated_by(&[p("(12)", 3)]);
        let b = s3.generated_by(&[p("(123)", 3)]);
        assert_eq!(s3.generated_subgroup(&[a, b]).order(), 6);
        assert_eq!(s3.generated_subgroup(&[]).order(), 1);
    }

    #[test]
    fn characters_of_klein_four() {
        let v = PermGroup::closure(4, &[p("(12)", 4), p("(34)", 4)]).unwrap();
        let chars = v.characters().unwrap();
        assert_eq!(chars.len(), 4);
        assert!(chars[0].iter().all(|c| c.is_one()));
        assert!(PermGroup::symmetric(3).characters().is_err());
    }

    #[test]
    fn greedy_generators_of_s3() {
        let g = PermGroup::symmetric(3).greedy_generators();
        assert_eq!(g.iter().map(|x| x.order()).collect::<Vec<_>>(), vec![3, 2]);
    }
}
