//! Constructors for the concrete Hopf algebras: function algebras, group
//! algebras, bicrossed products, Drinfeld doubles and twisted group
//! algebras.

use std::collections::VecDeque;

use crate::exactnum::Cyclotomic;
use crate::hopf::{self, CoTerm, ExactSequenceReport, HopfData, HopfError, HopfMap};
use crate::linalg::{self, Scalar, SparseVec};
use crate::matchedpair::MatchedPair;
use crate::permgrp::{Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("incompatible cocycles: {0}")]
    IncompatibleCocycles(String),
    #[error("cocycle table is not normalized at {0}")]
    NotNormalized(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("not a bicharacter: {0}")]
    NotBicharacter(String),
    #[error("not a split extension")]
    NotSplitExtension,
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

fn e_label(p: &Perm) -> String {
    if p.is_identity() {
        "e_1".into()
    } else {
        format!("e_{p}")
    }
}

fn g_label(p: &Perm) -> String {
    if p.is_identity() {
        "1".into()
    } else {
        p.to_string()
    }
}

fn exponent_u32(g: &PermGroup) -> u32 {
    g.exponent() as u32
}

/// `k^G`: basis `e_g`, `e_g e_h = delta_{g,h} e_g`,
/// `Delta(e_g) = sum_{ab=g} e_a (x) e_b`.
pub fn function_algebra(g: &PermGroup) -> HopfData {
    let n = g.order();
    let labels = g.elements().iter().map(e_label).collect();
    let mut mult = vec![SparseVec::new(); n * n];
    for i in 0..n {
        mult[i * n + i] = SparseVec::unit(i);
    }
    let mut comult = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            comult[g.mul(a, b)].push((a, b, Scalar::one()));
        }
    }
    let counit = (0..n).map(|i| if i == 0 { Scalar::one() } else { Scalar::zero() }).collect();
    let unit = SparseVec::from_pairs((0..n).map(|i| (i, Scalar::one())).collect());
    HopfData::from_bialgebra(labels, mult, unit, comult, counit, 1, format!("function algebra on a group of order {n}"))
        .expect("function algebra has an antipode")
}

/// `kG`: basis `G`, `Delta(g) = g (x) g`.
pub fn group_algebra(g: &PermGroup) -> HopfData {
    let n = g.order();
    let labels = g.elements().iter().map(g_label).collect();
    let mut mult = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            mult.push(SparseVec::unit(g.mul(a, b)));
        }
    }
    let comult = (0..n).map(|i| vec![(i, i, Scalar::one())]).collect();
    let counit = vec![Scalar::one(); n];
    HopfData::from_bialgebra(
        labels,
        mult,
        SparseVec::unit(0),
        comult,
        counit,
        exponent_u32(g),
        format!("group algebra of a group of order {n}"),
    )
    .expect("group algebra has an antipode")
}

/// Normalized cocycle data for a bicrossed product.
#[derive(Clone, Debug)]
pub struct CocyclePair {
    nf: usize,
    ng: usize,
    /// `sigma[(g * nf + x) * nf + y] = sigma_g(x, y)`.
    sigma: Vec<Scalar>,
    /// `tau[(x * ng + s) * ng + t] = tau_x(s, t)`.
    tau: Vec<Scalar>,
}

impl CocyclePair {
    pub fn trivial(mp: &MatchedPair) -> Self {
        let (nf, ng) = (mp.nf(), mp.ngamma());
        CocyclePair { nf, ng, sigma: vec![Scalar::one(); ng * nf * nf], tau: vec![Scalar::one(); nf * ng * ng] }
    }

    pub fn sigma(&self, g: usize, x: usize, y: usize) -> &Scalar {
        &self.sigma[(g * self.nf + x) * self.nf + y]
    }

    pub fn tau(&self, x: usize, s: usize, t: usize) -> &Scalar {
        &self.tau[(x * self.ng + s) * self.ng + t]
    }

    pub fn set_sigma(&mut self, g: usize, x: usize, y: usize, v: Scalar) {
        self.sigma[(g * self.nf + x) * self.nf + y] = v;
    }

    pub fn set_tau(&mut self, x: usize, s: usize, t: usize, v: Scalar) {
        self.tau[(x * self.ng + s) * self.ng + t] = v;
    }

    pub fn is_trivial(&self) -> bool {
        self.sigma.iter().chain(&self.tau).all(|v| v.is_one())
    }

    pub fn check_normalized(&self) -> Result<(), BuildError> {
        for g in 0..self.ng {
            for x in 0..self.nf {
                if !self.sigma(g, 0, x).is_one() || !self.sigma(g, x, 0).is_one() {
                    return Err(BuildError::NotNormalized(format!("sigma[{g}][{x}]")));
                }
            }
        }
        for x in 0..self.nf {
            for s in 0..self.ng {
                if !self.tau(x, 0, s).is_one() || !self.tau(x, s, 0).is_one() {
                    return Err(BuildError::NotNormalized(format!("tau[{x}][{s}]")));
                }
            }
        }
        Ok(())
    }

    /// lcm of the multiplicative orders of all values (each must be a root of
    /// unity for the eigenvalue bound; other values contribute nothing).
    pub fn value_exponent(&self) -> u32 {
        let mut acc = 1u32;
        for v in self.sigma.iter().chain(&self.tau) {
            if let Some(o) = root_of_unity_order(v) {
                acc = num_integer::lcm(acc, o);
            }
        }
        acc
    }
}

/// Order of `v` as a root of unity, if it is one.
pub fn root_of_unity_order(v: &Scalar) -> Option<u32> {
    if v.is_zero() {
        return None;
    }
    let bound = 2 * v.conductor().max(1);
    let mut cur = v.clone();
    for k in 1..=bound {
        if cur.is_one() {
            return Some(k);
        }
        cur = &cur * v;
    }
    None
}

/// A bicrossed product `k^Gamma #_sigma^tau kF` together with the data it
/// was built from.
#[derive(Clone, Debug)]
pub struct Bicrossed {
    pub mp: MatchedPair,
    pub cocycles: CocyclePair,
    pub hopf: HopfData,
}

impl Bicrossed {
    pub fn index(&self, g: usize, x: usize) -> usize {
        g * self.mp.nf() + x
    }

    pub fn is_split(&self) -> bool {
        self.cocycles.is_trivial()
    }

    /// `k^Gamma` as a Hopf algebra on its own.
    pub fn gamma_function_algebra(&self) -> HopfData {
        function_algebra(&self.mp.gamma)
    }

    pub fn f_group_algebra(&self) -> HopfData {
        group_algebra(&self.mp.f)
    }

    /// `iota(e_g) = e_g # 1`.
    pub fn iota(&self) -> HopfMap {
        let ng = self.mp.ngamma();
        HopfMap::new(ng, self.hopf.dim, (0..ng).map(|g| SparseVec::unit(self.index(g, 0))).collect())
    }

    /// `pi(e_g # x) = delta_{g,1} x`.
    pub fn pi(&self) -> HopfMap {
        let nf = self.mp.nf();
        let images = (0..self.hopf.dim)
            .map(|i| {
                let (g, x) = (i / nf, i % nf);
                if g == 0 {
                    SparseVec::unit(x)
                } else {
                    SparseVec::new()
                }
            })
            .collect();
        HopfMap::new(self.hopf.dim, nf, images)
    }

    /// The canonical sequence `k -> k^Gamma -> H -> kF -> k`.
    pub fn exact_sequence(&self) -> ExactSequenceReport {
        let a = self.gamma_function_algebra();
        let hbar = self.f_group_algebra();
        hopf::verify_exact_sequence(&a, &self.hopf, &hbar, &self.iota(), &self.pi())
    }

    /// Element `f # x` for a function `f` on `Gamma`.
    pub fn element(&self, f: &[Scalar], x: usize) -> SparseVec {
        SparseVec::from_pairs(f.iter().enumerate().map(|(g, c)| (self.index(g, x), c.clone())).collect())
    }

    /// `1 # x`.
    pub fn one_hash(&self, x: usize) -> SparseVec {
        self.element(&vec![Scalar::one(); self.mp.ngamma()], x)
    }

    /// Basis matching between `self.hopf.dual()` and a split bicrossed
    /// product `t` on the transposed pair: position `(a, s)` of `t` holds
    /// `phi_(a |> s, a <| s)`, with the actions of `t`.
    pub fn transposed_dual_matching(&self, t: &Bicrossed) -> Vec<usize> {
        let tp = &t.mp;
        let mut out = vec![0; self.hopf.dim];
        for a in 0..tp.ngamma() {
            for s in 0..tp.nf() {
                out[t.index(a, s)] = self.index(tp.act_left(a, s), tp.act_right(a, s));
            }
        }
        out
    }

    /// Build the split product on the transposed pair and check that it is
    /// the dual, structure constant by structure constant.
    pub fn dual_is_transposed(&self) -> Result<bool, BuildError> {
        if !self.is_split() {
            return Err(BuildError::NotSplitExtension);
        }
        let tp = self.mp.transposed().map_err(|e| BuildError::IncompatibleCocycles(e.to_string()))?;
        let t = bicrossed(&tp, None)?;
        Ok(self.hopf.dual().permuted(&self.transposed_dual_matching(&t)).same_structure(&t.hopf))
    }

    /// Group-like elements of a split extension: `chi # x` with `chi` a
    /// character of `Gamma` and `x` fixed by `|>`. Each is checked, and the
    /// multiplication table is checked to be a group.
    pub fn grouplikes_split(&self) -> Result<Grouplikes, BuildError> {
        if !self.is_split() {
            return Err(BuildError::NotSplitExtension);
        }
        let chars = self.mp.gamma.characters().map_err(|_| BuildError::NotAbelian)?;
        let fixed: Vec<usize> =
            (0..self.mp.nf()).filter(|&x| (0..self.mp.ngamma()).all(|g| self.mp.act_left(g, x) == x)).collect();
        let mut elements = Vec::new();
        for &x in &fixed {
            for chi in &chars {
                let v = self.element(chi, x);
                if !self.hopf.is_grouplike(&v) {
                    return Err(BuildError::Hopf(HopfError::AxiomFailure(format!(
                        "{} is not group-like",
                        self.hopf.format(&v)
                    ))));
                }
                elements.push(v);
            }
        }
        if linalg::rank(&elements) != elements.len() {
            return Err(BuildError::Hopf(HopfError::AxiomFailure("group-likes are dependent".into())));
        }
        Grouplikes::from_elements(&self.hopf, elements)
    }
}

/// A finite set of group-like elements closed under multiplication.
#[derive(Clone, Debug)]
pub struct Grouplikes {
    pub elements: Vec<SparseVec>,
    /// `table[i * n + j]` = index of `elements[i] * elements[j]`.
    pub table: Vec<usize>,
    pub identity: usize,
}

impl Grouplikes {
    pub fn from_elements(h: &HopfData, elements: Vec<SparseVec>) -> Result<Self, BuildError> {
        let n = elements.len();
        let mut table = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                let p = h.mul(&elements[i], &elements[j]);
                table[i * n + j] = elements.iter().position(|e| *e == p).ok_or_else(|| {
                    BuildError::Hopf(HopfError::AxiomFailure("group-likes not closed under product".into()))
                })?;
            }
        }
        let identity = elements
            .iter()
            .position(|e| *e == h.unit)
            .ok_or_else(|| BuildError::Hopf(HopfError::AxiomFailure("unit missing from group-likes".into())))?;
        let gl = Grouplikes { elements, table, identity };
        if !gl.is_group() {
            return Err(BuildError::Hopf(HopfError::AxiomFailure("group-likes do not form a group".into())));
        }
        Ok(gl)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order() + j]
    }

    pub fn is_group(&self) -> bool {
        let n = self.order();
        let assoc =
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))));
        let unit = (0..n).all(|a| self.mul(self.identity, a) == a && self.mul(a, self.identity) == a);
        let inv = (0..n).all(|a| (0..n).any(|b| self.mul(a, b) == self.identity));
        assoc && unit && inv
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut cur = i;
        let mut k = 1;
        while cur != self.identity {
            cur = self.mul(cur, i);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Number of elements of each order, sorted by order.
    pub fn order_statistics(&self) -> Vec<(usize, usize)> {
        let mut m: std::collections::BTreeMap<usize, usize> = Default::default();
        for i in 0..self.order() {
            *m.entry(self.element_order(i)).or_default() += 1;
        }
        m.into_iter().collect()
    }
}

/// `k^Gamma #_sigma^tau kF` with
/// `(e_g#x)(e_h#y) = delta_{g<|x,h} sigma_g(x,y) e_g#xy` and
/// `Delta(e_g#x) = sum_{st=g} tau_x(s,t) e_s#(t|>x) (x) e_t#x`.
pub fn bicrossed(mp: &MatchedPair, cocycles: Option<CocyclePair>) -> Result<Bicrossed, BuildError> {
    let cocycles = cocycles.unwrap_or_else(|| CocyclePair::trivial(mp));
    cocycles.check_normalized()?;
    let (nf, ng) = (mp.nf(), mp.ngamma());
    let n = nf * ng;
    let idx = |g: usize, x: usize| g * nf + x;
    let mut labels = Vec::with_capacity(n);
    for g in 0..ng {
        for x in 0..nf {
            labels.push(mp.basis_label(g, x));
        }
    }
    let mut mult = vec![SparseVec::new(); n * n];
    for g in 0..ng {
        for x in 0..nf {
            let h = mp.act_right(g, x);
            for y in 0..nf {
                mult[idx(g, x) * n + idx(h, y)] = SparseVec::single(idx(g, mp.f.mul(x, y)), cocycles.sigma(g, x, y).clone());
            }
        }
    }
    let mut comult: Vec<Vec<CoTerm>> = vec![Vec::new(); n];
    for x in 0..nf {
        for s in 0..ng {
            for t in 0..ng {
                let g = mp.gamma.mul(s, t);
                comult[idx(g, x)].push((idx(s, mp.act_left(t, x)), idx(t, x), cocycles.tau(x, s, t).clone()));
            }
        }
    }
    let counit = (0..n).map(|i| if i / nf == 0 { Scalar::one() } else { Scalar::zero() }).collect();
    let unit = SparseVec::from_pairs((0..ng).map(|g| (idx(g, 0), Scalar::one())).collect());
    let exponent = num_integer::lcm(num_integer::lcm(exponent_u32(&mp.f), exponent_u32(&mp.gamma)), cocycles.value_exponent());
    let note = format!(
        "bicrossed product of dimension {n} (|Gamma| = {ng}, |F| = {nf}){}",
        if cocycles.is_trivial() { "" } else { " with cocycles" }
    );
    let h = HopfData::without_antipode(labels, mult, unit, comult, counit, exponent, note)?;
    let mut h = h;
    let report = h.verify();
    if !(report.associative && report.coassociative && report.bialgebra) {
        return Err(BuildError::IncompatibleCocycles(report.first_failure.unwrap_or_default()));
    }
    h.antipode = hopf::solve_antipode(&h).map_err(|e| BuildError::IncompatibleCocycles(e.to_string()))?;
    let report = h.verify();
    if let Some(f) = report.first_failure {
        return Err(BuildError::IncompatibleCocycles(f));
    }
    Ok(Bicrossed { mp: mp.clone(), cocycles, hopf: h })
}

/// `D(G)` and its dual, with the canonical inclusions of `k^G` and `kG`.
#[derive(Clone, Debug)]
pub struct DrinfeldDouble {
    pub group: PermGroup,
    pub double: HopfData,
    pub dual: HopfData,
}

impl DrinfeldDouble {
    fn n(&self) -> usize {
        self.group.order()
    }

    /// `k^G -> D(G)`, `e_g -> e_g (x) 1`.
    pub fn function_inclusion(&self) -> HopfMap {
        let n = self.n();
        HopfMap::new(n, n * n, (0..n).map(|g| SparseVec::unit(g * n)).collect())
    }

    /// `kG -> D(G)`, `x -> sum_g e_g (x) x`.
    pub fn group_inclusion(&self) -> HopfMap {
        let n = self.n();
        HopfMap::new(
            n,
            n * n,
            (0..n).map(|x| SparseVec::from_pairs((0..n).map(|g| (g * n + x, Scalar::one())).collect())).collect(),
        )
    }

    /// `k^G -> D(G)^*`, `e_x -> phi_(1,x)`.
    pub fn dual_iota(&self) -> HopfMap {
        let n = self.n();
        HopfMap::new(n, n * n, (0..n).map(SparseVec::unit).collect())
    }

    /// `D(G)^* -> kG`, `phi_(g,x) -> delta_{x,1} g`.
    pub fn dual_pi(&self) -> HopfMap {
        let n = self.n();
        HopfMap::new(
            n * n,
            n,
            (0..n * n).map(|i| if i % n == 0 { SparseVec::unit(i / n) } else { SparseVec::new() }).collect(),
        )
    }

    /// The central sequence `k -> k^G -> D(G)^* -> kG -> k`, plus the check
    /// that the image of `k^G` is central.
    pub fn central_sequence(&self) -> (ExactSequenceReport, bool) {
        let a = function_algebra(&self.group);
        let hbar = group_algebra(&self.group);
        let iota = self.dual_iota();
        let rep = hopf::verify_exact_sequence(&a, &self.dual, &hbar, &iota, &self.dual_pi());
        let central = iota.images.iter().all(|v| {
            (0..self.dual.dim).all(|j| {
                let b = SparseVec::unit(j);
                self.dual.mul(v, &b) == self.dual.mul(&b, v)
            })
        });
        (rep, central)
    }

    /// `D(G)^*` presented as the split bicrossed product of the matched pair
    /// `G x G = F Gamma` with `F = G x 1` and `Gamma` the diagonal, where
    /// `<|` is trivial and `|>` is conjugation. The basis element `e_z # f`
    /// corresponds to `phi_(z f z^-1, z)`; this correspondence is returned as
    /// a permutation of basis indices and checked by the caller.
    pub fn dual_as_bicrossed(&self) -> Result<(Bicrossed, Vec<usize>), BuildError> {
        let n = self.group.degree();
        let embed = |p: &Perm, shift: bool| {
            let mut imgs: Vec<u32> = (0..2 * n as u32).collect();
            for i in 0..n {
                let j = p.apply(i) as u32;
                if shift {
                    imgs[n + i] = n as u32 + j;
                } else {
                    imgs[i] = j;
                }
            }
            Perm::from_images(imgs)
        };
        let gens = self.group.generators();
        let fgens: Vec<Perm> = gens.iter().map(|p| embed(p, false)).collect();
        let dgens: Vec<Perm> = gens.iter().map(|p| embed(p, false).compose(&embed(p, true))).collect();
        let mut ggens = fgens.clone();
        ggens.extend(gens.iter().map(|p| embed(p, true)));
        let mp = MatchedPair::from_generators(2 * n, &ggens, &fgens, &dgens)
            .map_err(|e| BuildError::IncompatibleCocycles(e.to_string()))?;
        let b = bicrossed(&mp, None)?;
        let m = self.n();
        // position i of the bicrossed basis (z, f) holds phi_(z f z^-1, z)
        let perm = (0..m * m)
            .map(|i| {
                let (z, f) = (i / m, i % m);
                let g = self.group.mul(self.group.mul(z, f), self.group.inv(z));
                g * m + z
            })
            .collect();
        Ok((b, perm))
    }
}

/// `D(G)` with `(e_g (x) x)(e_h (x) y) = delta_{g, x h x^-1} e_g (x) xy` and
/// `Delta(e_g (x) x) = sum_{st=g} (e_s (x) x) (x) (e_t (x) x)`, and its dual.
pub fn drinfeld_double(g: &PermGroup) -> Result<DrinfeldDouble, BuildError> {
    let n = g.order();
    let idx = |a: usize, x: usize| a * n + x;
    let mut labels = Vec::with_capacity(n * n);
    for a in 0..n {
        for x in 0..n {
            labels.push(format!("{}.{}", e_label(g.element(a)), g_label(g.element(x))));
        }
    }
    let mut mult = vec![SparseVec::new(); n * n * n * n];
    for a in 0..n {
        for x in 0..n {
            let h = g.mul(g.mul(g.inv(x), a), x);
            for y in 0..n {
                mult[idx(a, x) * n * n + idx(h, y)] = SparseVec::unit(idx(a, g.mul(x, y)));
            }
        }
    }
    let mut comult = vec![Vec::new(); n * n];
    for x in 0..n {
        for s in 0..n {
            for t in 0..n {
                comult[idx(g.mul(s, t), x)].push((idx(s, x), idx(t, x), Scalar::one()));
            }
        }
    }
    let counit = (0..n * n).map(|i| if i / n == 0 { Scalar::one() } else { Scalar::zero() }).collect();
    let unit = SparseVec::from_pairs((0..n).map(|a| (idx(a, 0), Scalar::one())).collect());
    let double = HopfData::from_bialgebra(
        labels,
        mult,
        unit,
        comult,
        counit,
        exponent_u32(g),
        format!("Drinfeld double of a group of order {n}"),
    )?
    .verified()?;
    let mut dual = double.dual();
    dual.labels = (0..n)
        .flat_map(|a| (0..n).map(move |x| (a, x)))
        .map(|(a, x)| format!("phi_({},{})", g_label(g.element(a)), g_label(g.element(x))))
        .collect();
    dual.note = format!("dual of the Drinfeld double of a group of order {n}");
    let dual = dual.verified()?;
    Ok(DrinfeldDouble { group: g.clone(), double, dual })
}

/// A table `Gamma x Gamma -> k`, multiplicative in each argument.
#[derive(Clone, Debug)]
pub struct Bicharacter {
    pub group: PermGroup,
    values: Vec<Scalar>,
}

impl Bicharacter {
    pub fn trivial(group: &PermGroup) -> Self {
        let n = group.order();
        Bicharacter { group: group.clone(), values: vec![Scalar::one(); n * n] }
    }

    pub fn value(&self, a: usize, b: usize) -> &Scalar {
        &self.values[a * self.group.order() + b]
    }

    /// Extend values given on pairs of generators. `gens` must generate the
    /// group; `table[i][j] = sigma(gens[i], gens[j])`.
    pub fn from_generators(group: &PermGroup, gens: &[Perm], table: &[Vec<Scalar>]) -> Result<Self, BuildError> {
        if !group.is_abelian() {
            return Err(BuildError::NotAbelian);
        }
        let gi: Vec<usize> = gens
            .iter()
            .map(|g| group.index_of(g).ok_or_else(|| BuildError::NotBicharacter(format!("{g} not in the group"))))
            .collect::<Result<_, _>>()?;
        // chi_i = sigma(g_i, -) as a character, then sigma(a, -) for all a.
        let n = group.order();
        let extend = |vals: &[Scalar]| -> Result<Vec<Scalar>, BuildError> {
            let mut out: Vec<Option<Scalar>> = vec![None; n];
            out[0] = Some(Scalar::one());
            let mut q = VecDeque::from([0usize]);
            while let Some(p) = q.pop_front() {
                for (k, &g) in gi.iter().enumerate() {
                    let r = group.mul(p, g);
                    let v = out[p].as_ref().unwrap() * &vals[k];
                    match &out[r] {
                        None => {
                            out[r] = Some(v);
                            q.push_back(r);
                        }
                        Some(w) if *w != v => {
                            return Err(BuildError::NotBicharacter("generator values inconsistent".into()));
                        }
                        _ => {}
                    }
                }
            }
            out.into_iter()
                .map(|v| v.ok_or_else(|| BuildError::NotBicharacter("generators do not generate".into())))
                .collect()
        };
        let rows: Vec<Vec<Scalar>> = table.iter().map(|r| extend(r)).collect::<Result<_, _>>()?;
        // sigma(-, b) is a character built from the column values.
        let mut values = vec![Scalar::zero(); n * n];
        for b in 0..n {
            let col: Vec<Scalar> = rows.iter().map(|r| r[b].clone()).collect();
            let ext = extend(&col)?;
            for a in 0..n {
                values[a * n + b] = ext[a].clone();
            }
        }
        let bc = Bicharacter { group: group.clone(), values };
        bc.check()?;
        Ok(bc)
    }

    /// Build from an explicit function on element indices.
    pub fn from_fn(group: &PermGroup, f: impl Fn(usize, usize) -> Scalar) -> Result<Self, BuildError> {
        if !group.is_abelian() {
            return Err(BuildError::NotAbelian);
        }
        let n = group.order();
        let values = (0..n * n).map(|k| f(k / n, k % n)).collect();
        let bc = Bicharacter { group: group.clone(), values };
        bc.check()?;
        Ok(bc)
    }

    /// Exhaustive multiplicativity check in both arguments.
    pub fn check(&self) -> Result<(), BuildError> {
        let g = &self.group;
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if *self.value(g.mul(a, b), c) != self.value(a, c) * self.value(b, c) {
                        return Err(BuildError::NotBicharacter(format!("first argument at ({a}, {b}, {c})")));
                    }
                    if *self.value(a, g.mul(b, c)) != self.value(a, b) * self.value(a, c) {
                        return Err(BuildError::NotBicharacter(format!("second argument at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `k_sigma Gamma`: basis `[a]`, `[a][b] = sigma(a, b) [ab]`.
#[derive(Clone, Debug)]
pub struct TwistedGroupAlgebra {
    pub group: PermGroup,
    pub sigma: Bicharacter,
    /// `mult[a * n + b]`.
    pub mult: Vec<SparseVec>,
}

impl TwistedGroupAlgebra {
    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let n = self.dim();
        let mut terms = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                for (k, z) in self.mult[i * n + j].iter() {
                    terms.push((*k, &(x * y) * z));
                }
            }
        }
        SparseVec::from_pairs(terms)
    }

    pub fn basis(&self, g: &Perm) -> SparseVec {
        SparseVec::unit(self.group.index_of(g).expect("element of the group"))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let (ea, eb, ec) = (SparseVec::unit(a), SparseVec::unit(b), SparseVec::unit(c));
                    self.mul(&self.mul(&ea, &eb), &ec) == self.mul(&ea, &self.mul(&eb, &ec))
                })
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..n).all(|b| self.mult[a * n + b] == self.mult[b * n + a]))
    }

    /// Basis of the center, from the linear system `[z, b] = 0` for every
    /// basis element `b`.
    pub fn center(&self) -> Vec<SparseVec> {
        let n = self.dim();
        // column i: the map z -> ([z,b_0], ..., [z,b_{n-1}]) applied to b_i
        let cols: Vec<SparseVec> = (0..n)
            .map(|i| {
                let mut terms = Vec::new();
                for j in 0..n {
                    let c = self.mult[i * n + j].sub(&self.mult[j * n + i]);
                    for (k, x) in c.iter() {
                        terms.push((j * n + k, x.clone()));
                    }
                }
                SparseVec::from_pairs(terms)
            })
            .collect();
        linalg::column_kernel(&cols)
    }
}

pub fn twisted_group_algebra(sigma: &Bicharacter) -> Result<TwistedGroupAlgebra, BuildError> {
    let g = &sigma.group;
    if !g.is_abelian() {
        return Err(BuildError::NotAbelian);
    }
    sigma.check()?;
    let n = g.order();
    let mut mult = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            mult.push(SparseVec::single(g.mul(a, b), sigma.value(a, b).clone()));
        }
    }
    let t = TwistedGroupAlgebra { group: g.clone(), sigma: sigma.clone(), mult };
    if !t.is_associative() {
        return Err(BuildError::NotBicharacter("twisted product is not associative".into()));
    }
    Ok(t)
}

/// The Clifford-type bicharacter on `Z_2^r = <t_1, ..., t_r>`:
/// `sigma(t_i, t_j) = -1` for `i < j` and `1` otherwise.
pub fn triangular_bicharacter(group: &PermGroup, gens: &[Perm]) -> Result<Bicharacter, BuildError> {
    let r = gens.len();
    let table: Vec<Vec<Scalar>> =
        (0..r).map(|i| (0..r).map(|j| Scalar::from_int(if i < j { -1 } else { 1 })).collect()).collect();
    Bicharacter::from_generators(group, gens, &table)
}

/// On `Z_n x Z_n = <a, b>`: `sigma((i,j),(t,l)) = w^(j t)` with `w` a
/// primitive `n`-th root of unity.
pub fn heisenberg_bicharacter(group: &PermGroup, a: &Perm, b: &Perm, n: u32) -> Result<Bicharacter, BuildError> {
    let w = Cyclotomic::primitive_root(n);
    let one = Scalar::one();
    // sigma(a,a) = 1, sigma(a,b) = 1, sigma(b,a) = w, sigma(b,b) = 1
    let table = vec![vec![one.clone(), one.clone()], vec![w, one]];
    Bicharacter::from_generators(group, &[a.clone(), b.clone()], &table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_function_algebras() {
        let h = function_algebra(&PermGroup::trivial(1));
        assert_eq!(h.dim, 1);
        let z2 = function_algebra(&PermGroup::cyclic(2));
        assert_eq!(z2.antipode, vec![SparseVec::unit(0), SparseVec::unit(1)]);
        let s3 = function_algebra(&PermGroup::symmetric(3));
        let r = s3.verify();
        assert!(r.is_hopf() && r.commutative && !r.cocommutative, "{r:?}");
    }

    #[test]
    fn function_algebra_antipode_inverts() {
        let g = PermGroup::symmetric(3);
        let h = function_algebra(&g);
        for i in 0..g.order() {
            assert_eq!(h.antipode[i], SparseVec::unit(g.inv(i)));
        }
    }

    #[test]
    fn group_algebra_z4() {
        let h = group_algebra(&PermGroup::cyclic(4));
        let r = h.verify();
        assert!(r.is_hopf() && r.cocommutative && r.commutative);
    }

    #[test]
    fn root_orders() {
        assert_eq!(root_of_unity_order(&Scalar::from_int(-1)), Some(2));
        assert_eq!(root_of_unity_order(&Cyclotomic::root_of_unity(12, 3)), Some(4));
        assert_eq!(root_of_unity_order(&Scalar::from_int(2)), None);
    }
}
