//! Matched pairs of groups from exact factorizations `G = F Gamma`.
//!
//! For `g` in `Gamma` and `x` in `F` the product `g x` in `G` is written
//! uniquely as `(g |> x)(g <| x)` with `g |> x` in `F` and `g <| x` in
//! `Gamma`. The two tables are all that the bicrossed product needs.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::permgrp::{Perm, PermGroup, SubgroupFilter};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchedPairError {
    #[error("not an exact factorization: {0}")]
    NotExactFactorization(String),
    #[error("internal error: compatibility identity fails: {0}")]
    CompatibilityFailure(String),
}

/// Which action to take orbits of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `Gamma` acting on `F` through `|>`; stabilizers live in `Gamma`.
    Left,
    /// `F` acting on `Gamma` through `<|`; stabilizers live in `F`.
    Right,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    /// Element indices (into `F` for [`Side::Left`], into `Gamma` for
    /// [`Side::Right`]), sorted.
    pub members: Vec<usize>,
    pub representative: usize,
    pub stabilizer: PermGroup,
}

#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub g: PermGroup,
    pub f: PermGroup,
    pub gamma: PermGroup,
    /// `left[gi * |F| + xi]` = index in `F` of `g |> x`.
    left: Vec<usize>,
    /// `right[gi * |F| + xi]` = index in `Gamma` of `g <| x`.
    right: Vec<usize>,
    gamma_names: Vec<String>,
}

impl MatchedPair {
    pub fn derive(g: PermGroup, f: PermGroup, gamma: PermGroup) -> Result<Self, MatchedPairError> {
        if !f.is_subgroup_of(&g) || !gamma.is_subgroup_of(&g) {
            return Err(MatchedPairError::NotExactFactorization("factors are not subgroups of G".into()));
        }
        if f.order() * gamma.order() != g.order() {
            return Err(MatchedPairError::NotExactFactorization(format!(
                "|F| |Gamma| = {} * {} differs from |G| = {}",
                f.order(),
                gamma.order(),
                g.order()
            )));
        }
        if f.elements().iter().skip(1).any(|x| gamma.contains(x)) {
            return Err(MatchedPairError::NotExactFactorization("F and Gamma intersect nontrivially".into()));
        }
        let (nf, ng) = (f.order(), gamma.order());
        let mut left = vec![0usize; ng * nf];
        let mut right = vec![0usize; ng * nf];
        for (gi, ge) in gamma.elements().iter().enumerate() {
            for (xi, xe) in f.elements().iter().enumerate() {
                let p = ge.compose(xe);
                let (fi, gam) = f
                    .elements()
                    .iter()
                    .enumerate()
                    .find_map(|(fi, fe)| gamma.index_of(&fe.inverse().compose(&p)).map(|c| (fi, c)))
                    .ok_or_else(|| MatchedPairError::NotExactFactorization(format!("{ge} {xe} does not factor")))?;
                left[gi * nf + xi] = fi;
                right[gi * nf + xi] = gam;
            }
        }
        let gamma_names = gamma_names(&gamma);
        let mp = MatchedPair { g, f, gamma, left, right, gamma_names };
        mp.check_compatibility()?;
        Ok(mp)
    }

    /// Build from `G` and generator lists of the two factors.
    pub fn from_generators(degree: usize, g: &[Perm], f: &[Perm], gamma: &[Perm]) -> Result<Self, MatchedPairError> {
        let err = |e: crate::permgrp::GroupError| MatchedPairError::NotExactFactorization(e.to_string());
        let gg = PermGroup::closure(degree, g).map_err(err)?;
        let ff = PermGroup::closure(degree, f).map_err(err)?;
        let gm = PermGroup::closure(degree, gamma).map_err(err)?;
        Self::derive(gg, ff, gm)
    }

    /// `S_n = C_n S_{n-1}` with `C_n = <(1 2 ... n)>` and `S_{n-1}` the
    /// stabilizer of `n`.
    pub fn cyclic_symmetric(n: usize) -> Self {
        let g = PermGroup::symmetric(n);
        let f = g.stabilizer_of_point(n - 1);
        let gamma = PermGroup::cyclic(n);
        Self::derive(g, f, gamma).expect("S_n = C_n S_(n-1) is exact")
    }

    /// `A_5 = C_5 A_4`.
    pub fn cyclic_alternating5() -> Self {
        let g = PermGroup::alternating(5);
        let f = g.stabilizer_of_point(4);
        let gamma = PermGroup::cyclic(5);
        Self::derive(g, f, gamma).expect("A_5 = C_5 A_4 is exact")
    }

    /// The same factorization read the other way round: `F` and `Gamma`
    /// exchange roles.
    pub fn transposed(&self) -> Result<Self, MatchedPairError> {
        Self::derive(self.g.clone(), self.gamma.clone(), self.f.clone())
    }

    fn check_compatibility(&self) -> Result<(), MatchedPairError> {
        let (nf, ng) = (self.f.order(), self.gamma.order());
        for s in 0..ng {
            for x in 0..nf {
                let recomposed = self.f.element(self.act_left(s, x)).compose(self.gamma.element(self.act_right(s, x)));
                if recomposed != self.gamma.element(s).compose(self.f.element(x)) {
                    return Err(MatchedPairError::CompatibilityFailure(format!("factorization at ({s}, {x})")));
                }
                for y in 0..nf {
                    let lhs = self.act_left(s, self.f.mul(x, y));
                    let rhs = self.f.mul(self.act_left(s, x), self.act_left(self.act_right(s, x), y));
                    if lhs != rhs {
                        return Err(MatchedPairError::CompatibilityFailure(format!(
                            "s |> xy at ({}, {}, {})",
                            self.gamma_name(s),
                            self.f.element(x),
                            self.f.element(y)
                        )));
                    }
                }
                for t in 0..ng {
                    let lhs = self.act_right(self.gamma.mul(s, t), x);
                    let rhs = self.gamma.mul(self.act_right(s, self.act_left(t, x)), self.act_right(t, x));
                    if lhs != rhs {
                        return Err(MatchedPairError::CompatibilityFailure(format!(
                            "st <| x at ({}, {}, {})",
                            self.gamma_name(s),
                            self.gamma_name(t),
                            self.f.element(x)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn nf(&self) -> usize {
        self.f.order()
    }

    pub fn ngamma(&self) -> usize {
        self.gamma.order()
    }

    /// Index in `F` of `g |> x`.
    pub fn act_left(&self, g: usize, x: usize) -> usize {
        self.left[g * self.nf() + x]
    }

    /// Index in `Gamma` of `g <| x`.
    pub fn act_right(&self, g: usize, x: usize) -> usize {
        self.right[g * self.nf() + x]
    }

    pub fn left_trivial(&self) -> bool {
        (0..self.ngamma()).all(|g| (0..self.nf()).all(|x| self.act_left(g, x) == x))
    }

    pub fn right_trivial(&self) -> bool {
        (0..self.ngamma()).all(|g| (0..self.nf()).all(|x| self.act_right(g, x) == g))
    }

    /// Name of a `Gamma` element: powers of a generator `z` when `Gamma` is
    /// cyclic, cycle notation otherwise.
    pub fn gamma_name(&self, g: usize) -> &str {
        &self.gamma_names[g]
    }

    pub fn f_name(&self, x: usize) -> String {
        let e = self.f.element(x);
        if e.is_identity() {
            "1".into()
        } else {
            e.to_string()
        }
    }

    /// Label of the basis element `e_g # x` of the bicrossed product.
    pub fn basis_label(&self, g: usize, x: usize) -> String {
        format!("e_{}#{}", wrap(self.gamma_name(g)), self.f_name(x))
    }

    pub fn orbits(&self, side: Side) -> Vec<Orbit> {
        let (n, m) = match side {
            Side::Left => (self.nf(), self.ngamma()),
            Side::Right => (self.ngamma(), self.nf()),
        };
        let act = |a: usize, b: usize| match side {
            Side::Left => self.act_left(b, a),
            Side::Right => self.act_right(a, b),
        };
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut members: Vec<usize> = (0..m).map(|b| act(start, b)).collect();
            members.sort();
            members.dedup();
            for &a in &members {
                seen[a] = true;
            }
            let stab: Vec<usize> = (0..m).filter(|&b| act(start, b) == start).collect();
            let stabilizer = match side {
                Side::Left => self.gamma.subgroup_from_elements(stab.iter().map(|&b| self.gamma.element(b).clone()).collect()),
                Side::Right => self.f.subgroup_from_elements(stab.iter().map(|&b| self.f.element(b).clone()).collect()),
            };
            out.push(Orbit { representative: members[0], members, stabilizer });
        }
        out.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then(a.members[0].cmp(&b.members[0])));
        out
    }

    /// Stabilizer in `F` of the `Gamma` element `g` under `<|`.
    pub fn stabilizer_in_f(&self, g: usize) -> PermGroup {
        let elems = (0..self.nf()).filter(|&x| self.act_right(g, x) == g).map(|x| self.f.element(x).clone()).collect();
        self.f.subgroup_from_elements(elems)
    }

    /// Whether `g |> T = T` for every `g` in `Gamma`.
    pub fn is_stable(&self, t: &PermGroup) -> bool {
        let idx: Vec<usize> = t.elements().iter().map(|e| self.f.index_of(e).expect("T inside F")).collect();
        let set: HashSet<usize> = idx.iter().copied().collect();
        (0..self.ngamma()).all(|g| idx.iter().all(|&x| set.contains(&self.act_left(g, x))))
    }

    pub fn stable_subgroups(&self, filter: SubgroupFilter) -> Vec<PermGroup> {
        self.f.subgroups(filter).into_iter().filter(|t| self.is_stable(t)).collect()
    }

    /// Largest subgroup of `F` acting trivially on `Gamma` through `<|`.
    pub fn trivially_acting_kernel(&self) -> PermGroup {
        let elems = (0..self.nf())
            .filter(|&x| (0..self.ngamma()).all(|g| self.act_right(g, x) == g))
            .map(|x| self.f.element(x).clone())
            .collect();
        self.f.subgroup_from_elements(elems)
    }

    /// Restrict to a subgroup `F'` of `F`, with `Gamma' = {g : g |> F' = F'}`.
    pub fn restrict(&self, fsub: &PermGroup) -> Result<MatchedPair, MatchedPairError> {
        let idx: Vec<usize> = fsub
            .elements()
            .iter()
            .map(|e| self.f.index_of(e).ok_or_else(|| MatchedPairError::NotExactFactorization("F' not inside F".into())))
            .collect::<Result<_, _>>()?;
        let set: HashSet<usize> = idx.iter().copied().collect();
        let gsub: Vec<Perm> = (0..self.ngamma())
            .filter(|&g| idx.iter().all(|&x| set.contains(&self.act_left(g, x))))
            .map(|g| self.gamma.element(g).clone())
            .collect();
        let gamma2 = self.gamma.subgroup_from_elements(gsub);
        let mut gens: Vec<Perm> = fsub.generators().to_vec();
        gens.extend(gamma2.generators().iter().cloned());
        let g2 = self.g.generated_by(&gens);
        MatchedPair::derive(g2, fsub.clone(), gamma2)
    }

    /// Action tables as CSV: rows `Gamma`, columns `F`, entries
    /// `g|>x | g<|x` in cycle notation.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("g");
        for x in 0..self.nf() {
            let _ = write!(s, ",{}", self.f.element(x));
        }
        s.push('\n');
        for g in 0..self.ngamma() {
            s.push_str(&self.gamma.element(g).to_string());
            for x in 0..self.nf() {
                let _ = write!(
                    s,
                    ",{} | {}",
                    self.f.element(self.act_left(g, x)),
                    self.gamma.element(self.act_right(g, x))
                );
            }
            s.push('\n');
        }
        s
    }
}

fn wrap(s: &str) -> String {
    if s.len() <= 1 || s.starts_with('(') {
        s.to_string()
    } else {
        format!("({s})")
    }
}

fn gamma_names(gamma: &PermGroup) -> Vec<String> {
    let n = gamma.order();
    let gen = gamma
        .generators()
        .iter()
        .find(|g| g.order() == n)
        .cloned()
        .or_else(|| gamma.elements().iter().find(|g| g.order() == n).cloned());
    match gen {
        Some(z) if n > 1 => {
            let mut names = vec![String::new(); n];
            let mut cur = Perm::identity(gamma.degree());
            for k in 0..n {
                let i = gamma.index_of(&cur).expect("power of generator");
                names[i] = match k {
                    0 => "1".into(),
                    1 => "z".into(),
                    _ => format!("z^{k}"),
                };
                cur = cur.compose(&z);
            }
            names
        }
        _ => gamma.elements().iter().map(|e| if e.is_identity() { "1".into() } else { e.to_string() }).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_product_has_trivial_actions() {
        let p = |s: &str| Perm::parse(s, 5).unwrap();
        let mp = MatchedPair::from_generators(5, &[p("(12)"), p("(345)")], &[p("(12)")], &[p("(345)")]).unwrap();
        assert!(mp.left_trivial() && mp.right_trivial());
        assert_eq!(mp.trivially_acting_kernel().order(), 2);
    }

    #[test]
    fn not_exact() {
        let s3 = PermGroup::symmetric(3);
        let f = s3.generated_by(&[Perm::parse("(12)", 3).unwrap()]);
        let r = MatchedPair::derive(s3.clone(), f.clone(), f);
        assert!(matches!(r, Err(MatchedPairError::NotExactFactorization(_))));
    }

    #[test]
    fn c4_names() {
        let mp = MatchedPair::cyclic_symmetric(4);
        let names: Vec<&str> = (0..4).map(|g| mp.gamma_name(g)).collect();
        assert!(names.contains(&"z^2") && names.contains(&"1"));
        let z2 = names.iter().position(|n| *n == "z^2").unwrap();
        let x = mp.f.index_of(&Perm::parse("(13)", 4).unwrap()).unwrap();
        assert_eq!(mp.basis_label(z2, x), "e_(z^2)#(13)");
    }
}
