//! Colour-preserving automorphisms, flag orbits, symmetry-type graphs,
//! isomorphism, automorphism lifting and stability.
//!
//! Automorphisms of a connected flag graph act semiregularly: one is fixed by
//! the image of a single flag, and it can be recovered (or refuted) by
//! propagating that assignment along edges. Everything here is built on that
//! propagation.
//!
//! The group search keeps the orbits of the subgroup found so far in a
//! union-find structure and only tests one candidate image per orbit of that
//! subgroup. Each success at least doubles the orbit of the base flag, so at
//! most `log2 F` full propagations succeed; every other test is a refutation,
//! which usually aborts early. The exhaustive scan over all candidate images
//! is kept as an oracle.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maniplex::{Flag, Maniplex};
use crate::weights::{cross_cover, units, WeightFunction};

const UNSET: usize = usize::MAX;

/// A flag permutation. Acts on the right: `(u)(phi psi) = ((u)phi)psi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    perm: Vec<Flag>,
}

impl Automorphism {
    pub fn identity(num_flags: usize) -> Self {
        Automorphism {
            perm: (0..num_flags).collect(),
        }
    }

    /// Wraps a permutation after checking that it is a colour-preserving
    /// bijection of `m`.
    pub fn from_perm(m: &Maniplex, perm: Vec<Flag>) -> Result<Self> {
        let phi = Automorphism { perm };
        phi.check(m)?;
        Ok(phi)
    }

    pub(crate) fn from_perm_unchecked(perm: Vec<Flag>) -> Self {
        Automorphism { perm }
    }

    #[inline]
    pub fn apply(&self, u: Flag) -> Flag {
        self.perm[u]
    }

    pub fn as_slice(&self) -> &[Flag] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(u, &v)| u == v)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: self.perm.iter().map(|&v| other.perm[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.perm.len()];
        for (u, &v) in self.perm.iter().enumerate() {
            inv[v] = u;
        }
        Automorphism { perm: inv }
    }

    /// Checks bijectivity and `(u^i)phi = (u phi)^i` for all flags and colours.
    pub fn check(&self, m: &Maniplex) -> Result<()> {
        let n = m.num_flags();
        if self.perm.len() != n {
            return Err(Error::NotAutomorphism(format!(
                "permutation of {} points on {n} flags",
                self.perm.len()
            )));
        }
        let mut hit = vec![false; n];
        for &v in &self.perm {
            if v >= n || std::mem::replace(&mut hit[v], true) {
                return Err(Error::NotAutomorphism("not a bijection".into()));
            }
        }
        for c in 0..m.rank() {
            for u in m.flags() {
                if self.perm[m.neighbour(u, c)] != m.neighbour(self.perm[u], c) {
                    return Err(Error::NotAutomorphism(format!(
                        "colour {c} is not preserved at flag {u}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_automorphism_of(&self, m: &Maniplex) -> bool {
        self.check(m).is_ok()
    }
}

/// Reusable buffers for propagation, reset in O(1) by bumping an epoch.
struct Workspace {
    image: Vec<Flag>,
    image_epoch: Vec<u32>,
    hit_epoch: Vec<u32>,
    epoch: u32,
    queue: VecDeque<Flag>,
}

impl Workspace {
    fn new(from: usize, to: usize) -> Self {
        Workspace {
            image: vec![UNSET; from],
            image_epoch: vec![0; from],
            hit_epoch: vec![0; to],
            epoch: 0,
            queue: VecDeque::new(),
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.image_epoch.iter_mut().for_each(|e| *e = 0);
            self.hit_epoch.iter_mut().for_each(|e| *e = 0);
            self.epoch = 1;
        }
    }

    /// Propagates `a -> b` from `m1` to `m2` over the component of `a`.
    /// Returns the number of flags assigned, or `None` on a conflict.
    fn propagate(&mut self, m1: &Maniplex, a: Flag, m2: &Maniplex, b: Flag) -> Option<usize> {
        self.next_epoch();
        let epoch = self.epoch;
        self.queue.clear();
        self.image[a] = b;
        self.image_epoch[a] = epoch;
        self.hit_epoch[b] = epoch;
        self.queue.push_back(a);
        let mut assigned = 1;
        while let Some(u) = self.queue.pop_front() {
            let iu = self.image[u];
            for c in 0..m1.rank() {
                let v = m1.neighbour(u, c);
                let t = m2.neighbour(iu, c);
                if self.image_epoch[v] == epoch {
                    if self.image[v] != t {
                        return None;
                    }
                } else {
                    if self.hit_epoch[t] == epoch {
                        return None;
                    }
                    self.image[v] = t;
                    self.image_epoch[v] = epoch;
                    self.hit_epoch[t] = epoch;
                    assigned += 1;
                    self.queue.push_back(v);
                }
            }
        }
        Some(assigned)
    }

    fn extract(&self, n: usize) -> Vec<Flag> {
        self.image[..n].to_vec()
    }
}

/// Cheap per-flag invariants preserved by every colour-preserving
/// isomorphism: cycle lengths of the alternating products `i then j` and of
/// the product of all colours in order.
pub fn flag_signatures(m: &Maniplex) -> Vec<u64> {
    let n = m.num_flags();
    let rank = m.rank();
    let mut words: Vec<Vec<usize>> = Vec::new();
    for i in 0..rank {
        for j in (i + 1)..rank {
            words.push(vec![i, j]);
        }
    }
    if rank > 2 {
        words.push((0..rank).collect());
    }
    let lengths: Vec<Vec<u32>> = words
        .par_iter()
        .map(|word| {
            let step = |u: Flag| word.iter().fold(u, |v, &c| m.neighbour(v, c));
            let mut len = vec![0u32; n];
            for s in 0..n {
                if len[s] != 0 {
                    continue;
                }
                let mut cycle = vec![s];
                let mut v = step(s);
                while v != s {
                    cycle.push(v);
                    v = step(v);
                }
                for &v in &cycle {
                    len[v] = cycle.len() as u32;
                }
            }
            len
        })
        .collect();
    (0..n)
        .map(|u| {
            // FNV-1a over the cycle lengths
            let mut h: u64 = 0xcbf2_9ce4_8422_2325;
            for l in &lengths {
                h ^= u64::from(l[u]);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
            h
        })
        .collect()
}

/// The unique colour-preserving automorphism mapping `a` to `b`, if any.
pub fn find_automorphism(m: &Maniplex, a: Flag, b: Flag) -> Option<Automorphism> {
    if a >= m.num_flags() || b >= m.num_flags() {
        return None;
    }
    let mut ws = Workspace::new(m.num_flags(), m.num_flags());
    let assigned = ws.propagate(m, a, m, b)?;
    (assigned == m.num_flags())
        .then(|| Automorphism::from_perm_unchecked(ws.extract(m.num_flags())))
}

/// Search options for [`automorphism_group_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Skip candidates whose [`flag_signatures`] differ from the base flag's.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prune: true }
    }
}

/// The automorphism group of a connected flag graph, described by a
/// generating set and its flag orbits.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub base: Flag,
    pub order: usize,
    pub generators: Vec<Automorphism>,
    /// Orbit id of every flag; ids ordered by smallest flag.
    pub orbit_of: Vec<usize>,
    pub num_orbits: usize,
}

impl AutGroup {
    pub fn is_regular(&self) -> bool {
        self.num_orbits == 1
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_orbits];
        for &o in &self.orbit_of {
            sizes[o] += 1;
        }
        sizes
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    failed: Vec<bool>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            failed: vec![false; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.failed[ra] |= self.failed[rb];
    }

    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id_of_root = vec![UNSET; n];
        let mut count = 0;
        let out = (0..n)
            .map(|u| {
                let r = self.find(u);
                if id_of_root[r] == UNSET {
                    id_of_root[r] = count;
                    count += 1;
                }
                id_of_root[r]
            })
            .collect();
        (out, count)
    }
}

pub fn automorphism_group(m: &Maniplex) -> AutGroup {
    automorphism_group_with(m, SearchOptions::default())
}

/// Computes `Aut(m)` for a connected `m` by orbit-restricted candidate
/// testing. The result does not depend on `options`.
pub fn automorphism_group_with(m: &Maniplex, options: SearchOptions) -> AutGroup {
    let n = m.num_flags();
    let base = 0;
    let signatures = options.prune.then(|| flag_signatures(m));
    let mut uf = UnionFind::new(n);
    let mut generators = Vec::new();
    let mut ws = Workspace::new(n, n);

    for b in 1..n {
        let rb = uf.find(b);
        if rb == uf.find(base) || uf.failed[rb] {
            continue;
        }
        let plausible = signatures.as_ref().is_none_or(|s| s[b] == s[base]);
        let found = plausible && ws.propagate(m, base, m, b) == Some(n);
        if found {
            let g = Automorphism::from_perm_unchecked(ws.extract(n));
            for u in 0..n {
                uf.union(u, g.apply(u));
            }
            generators.push(g);
        } else {
            uf.failed[rb] = true;
        }
    }

    let rbase = uf.find(base);
    let order = uf.size[rbase];
    let (orbit_of, num_orbits) = uf.classes();
    AutGroup {
        base,
        order,
        generators,
        orbit_of,
        num_orbits,
    }
}

/// `(|Aut(m)|, orbit id per flag)`.
pub fn aut_order_and_orbits(m: &Maniplex) -> (usize, Vec<usize>) {
    let g = automorphism_group(m);
    (g.order, g.orbit_of)
}

/// Oracle: tests every candidate image of flag 0 independently (in
/// parallel) and closes the orbits under all automorphisms found.
pub fn automorphisms_exhaustive(m: &Maniplex, prune: bool) -> Vec<Automorphism> {
    let signatures = prune.then(|| flag_signatures(m));
    (0..m.num_flags())
        .into_par_iter()
        .filter(|&b| signatures.as_ref().is_none_or(|s| s[b] == s[0]))
        .filter_map(|b| find_automorphism(m, 0, b))
        .collect()
}

/// Oracle counterpart of [`aut_order_and_orbits`].
pub fn aut_order_and_orbits_exhaustive(m: &Maniplex, prune: bool) -> (usize, Vec<usize>) {
    let all = automorphisms_exhaustive(m, prune);
    let mut uf = UnionFind::new(m.num_flags());
    for phi in &all {
        for u in m.flags() {
            uf.union(u, phi.apply(u));
        }
    }
    (all.len(), uf.classes().0)
}

/// A colour-preserving isomorphism `m1 -> m2` as an image array, if any.
/// Flag 0 of `m1` is sent to each flag of `m2` in increasing order.
pub fn find_isomorphism(m1: &Maniplex, m2: &Maniplex) -> Option<Vec<Flag>> {
    find_isomorphism_with(m1, m2, SearchOptions::default())
}

pub fn find_isomorphism_with(
    m1: &Maniplex,
    m2: &Maniplex,
    options: SearchOptions,
) -> Option<Vec<Flag>> {
    if m1.rank() != m2.rank() || m1.num_flags() != m2.num_flags() {
        return None;
    }
    let n = m1.num_flags();
    let (s1, s2) = if options.prune {
        (Some(flag_signatures(m1)), Some(flag_signatures(m2)))
    } else {
        (None, None)
    };
    let mut ws = Workspace::new(n, n);
    for b in m2.flags() {
        if let (Some(s1), Some(s2)) = (&s1, &s2) {
            if s1[0] != s2[b] {
                continue;
            }
        }
        if ws.propagate(m1, 0, m2, b) == Some(n) {
            return Some(ws.extract(n));
        }
    }
    None
}

pub fn are_isomorphic(m1: &Maniplex, m2: &Maniplex) -> bool {
    find_isomorphism(m1, m2).is_some()
}

/// One edge slot of a symmetry-type graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StgEdge {
    SemiEdge,
    To(usize),
}

/// Quotient of a maniplex by its full automorphism group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryTypeGraph {
    pub rank: usize,
    pub num_orbits: usize,
    pub orbit_of: Vec<usize>,
    /// `edges[i][o]`: the `i`-slot at orbit `o`.
    pub edges: Vec<Vec<StgEdge>>,
}

impl SymmetryTypeGraph {
    /// Builds the quotient for a given orbit partition, checking that every
    /// representative of an orbit agrees on each colour.
    pub fn from_orbits(m: &Maniplex, orbit_of: Vec<usize>, num_orbits: usize) -> Result<Self> {
        let mut edges = vec![vec![None; num_orbits]; m.rank()];
        for (c, row) in edges.iter_mut().enumerate() {
            for u in m.flags() {
                let o = orbit_of[u];
                let t = orbit_of[m.neighbour(u, c)];
                let e = if t == o {
                    StgEdge::SemiEdge
                } else {
                    StgEdge::To(t)
                };
                match row[o] {
                    None => row[o] = Some(e),
                    Some(prev) if prev != e => {
                        return Err(Error::Construction(format!(
                            "orbit {o} has inconsistent {c}-neighbours"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(SymmetryTypeGraph {
            rank: m.rank(),
            num_orbits,
            orbit_of,
            edges: edges
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|e| e.expect("every orbit is non-empty"))
                        .collect()
                })
                .collect(),
        })
    }

    /// Colours carrying a semi-edge at orbit 0.
    pub fn semi_edge_colours(&self) -> Vec<usize> {
        (0..self.rank)
            .filter(|&c| self.edges[c][0] == StgEdge::SemiEdge)
            .collect()
    }

    /// `2^n_{I}` for two-orbit maniplexes, `I` the semi-edge colours.
    pub fn label(&self) -> Option<String> {
        (self.num_orbits == 2).then(|| type_label(self.rank, &self.semi_edge_colours()))
    }

    /// Number of components after deleting every edge and semi-edge of
    /// `colour`; this is the number of orbits on `colour`-faces.
    pub fn components_without(&self, colour: usize) -> usize {
        let mut uf = UnionFind::new(self.num_orbits);
        for c in (0..self.rank).filter(|&c| c != colour) {
            for o in 0..self.num_orbits {
                if let StgEdge::To(t) = self.edges[c][o] {
                    uf.union(o, t);
                }
            }
        }
        uf.classes().1
    }

    pub fn face_transitivity(&self) -> FaceTransitivity {
        let per_colour: Vec<bool> = (0..self.rank)
            .map(|c| self.components_without(c) == 1)
            .collect();
        FaceTransitivity {
            fully: per_colour.iter().all(|&t| t),
            per_colour,
        }
    }
}

/// `2^rank_{c1,c2,...}`.
pub fn type_label(rank: usize, semi_edges: &[usize]) -> String {
    let inner: Vec<String> = semi_edges.iter().map(|c| c.to_string()).collect();
    format!("2^{rank}_{{{}}}", inner.join(","))
}

impl fmt::Display for SymmetryTypeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "orbits {}", self.num_orbits)?;
        for (c, row) in self.edges.iter().enumerate() {
            let slots: Vec<String> = row
                .iter()
                .map(|e| match e {
                    StgEdge::SemiEdge => "S".to_string(),
                    StgEdge::To(t) => t.to_string(),
                })
                .collect();
            writeln!(f, "c {c} : {}", slots.join(" "))?;
        }
        if let Some(label) = self.label() {
            writeln!(f, "label {label}")?;
        }
        Ok(())
    }
}

pub fn symmetry_type_graph(m: &Maniplex) -> SymmetryTypeGraph {
    symmetry_type_graph_of(m, &automorphism_group(m))
}

pub fn symmetry_type_graph_of(m: &Maniplex, group: &AutGroup) -> SymmetryTypeGraph {
    SymmetryTypeGraph::from_orbits(m, group.orbit_of.clone(), group.num_orbits)
        .expect("automorphism orbits give a well-defined quotient")
}

/// Per-colour face-transitivity; `fully` covers every colour `i < rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceTransitivity {
    pub per_colour: Vec<bool>,
    pub fully: bool,
}

pub fn is_fully_transitive(m: &Maniplex) -> FaceTransitivity {
    symmetry_type_graph(m).face_transitivity()
}

/// Automorphism group orders of a maniplex and of its canonical double cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub aut_order_base: usize,
    pub aut_order_cover: usize,
    pub stable: bool,
}

impl StabilityVerdict {
    pub fn from_orders(aut_order_base: usize, aut_order_cover: usize) -> Self {
        StabilityVerdict {
            aut_order_base,
            aut_order_cover,
            stable: aut_order_cover == 2 * aut_order_base,
        }
    }
}

/// Stable iff the double cover has exactly the `2|Aut(m)|` expected
/// automorphisms. Orientable input is rejected.
pub fn stability(m: &Maniplex) -> Result<StabilityVerdict> {
    if m.is_orientable() {
        return Err(Error::Orientable);
    }
    let base = automorphism_group(m).order;
    stability_with_base_order(m, base)
}

pub(crate) fn stability_with_base_order(
    m: &Maniplex,
    base_order: usize,
) -> Result<StabilityVerdict> {
    if m.is_orientable() {
        return Err(Error::Orientable);
    }
    let cover = automorphism_group(&m.double_cover()).order;
    Ok(StabilityVerdict::from_orders(base_order, cover))
}

/// `(u, i) -> (u phi, alpha i)` for the first unit `alpha` with
/// `w(e phi) = alpha w(e)` on every edge.
pub fn lift_by_unit(
    m: &Maniplex,
    w: &WeightFunction,
    phi: &Automorphism,
) -> Option<(usize, Automorphism)> {
    let k = w.modulus();
    let alpha = units(k).into_iter().find(|&alpha| {
        (0..m.rank()).all(|c| {
            m.flags()
                .all(|u| w.weight(c, phi.apply(u)) == (alpha * w.weight(c, u)) % k)
        })
    })?;
    let perm = (0..m.num_flags() * k)
        .map(|f| phi.apply(f / k) * k + (alpha * (f % k)) % k)
        .collect();
    Some((alpha, Automorphism::from_perm_unchecked(perm)))
}

/// Exact lift search: an automorphism of the cross-cover projecting onto
/// `phi`, found by propagation from each component root to each level of the
/// image fibre, with backtracking across components.
pub fn lift_by_propagation(
    m: &Maniplex,
    w: &WeightFunction,
    phi: &Automorphism,
) -> Result<Option<Automorphism>> {
    let cover = cross_cover(m, w)?;
    Ok(lift_on_cover(&cover, w.modulus(), phi))
}

fn lift_on_cover(cover: &Maniplex, k: usize, phi: &Automorphism) -> Option<Automorphism> {
    let n = cover.num_flags();
    let (comp, num_comps) = cover.components();
    let mut roots = vec![UNSET; num_comps];
    for f in 0..n {
        if roots[comp[f]] == UNSET {
            roots[comp[f]] = f;
        }
    }
    let mut image = vec![UNSET; n];
    let mut used = vec![false; n];

    #[allow(clippy::too_many_arguments)]
    fn assign(
        cover: &Maniplex,
        k: usize,
        phi: &Automorphism,
        root: Flag,
        target: Flag,
        image: &mut [Flag],
        used: &mut [bool],
        touched: &mut Vec<Flag>,
    ) -> bool {
        let mut queue = VecDeque::from([root]);
        image[root] = target;
        used[target] = true;
        touched.push(root);
        while let Some(u) = queue.pop_front() {
            for c in 0..cover.rank() {
                let v = cover.neighbour(u, c);
                let t = cover.neighbour(image[u], c);
                if t / k != phi.apply(v / k) {
                    return false;
                }
                if image[v] == UNSET {
                    if used[t] {
                        return false;
                    }
                    image[v] = t;
                    used[t] = true;
                    touched.push(v);
                    queue.push_back(v);
                } else if image[v] != t {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        cover: &Maniplex,
        k: usize,
        phi: &Automorphism,
        roots: &[Flag],
        idx: usize,
        image: &mut Vec<Flag>,
        used: &mut Vec<bool>,
    ) -> bool {
        if idx == roots.len() {
            return true;
        }
        let root = roots[idx];
        let fibre = phi.apply(root / k);
        for level in 0..k {
            let target = fibre * k + level;
            if used[target] {
                continue;
            }
            let mut touched = Vec::new();
            if assign(cover, k, phi, root, target, image, used, &mut touched)
                && search(cover, k, phi, roots, idx + 1, image, used)
            {
                return true;
            }
            for &f in &touched {
                used[image[f]] = false;
                image[f] = UNSET;
            }
        }
        false
    }

    search(cover, k, phi, &roots, 0, &mut image, &mut used)
        .then(|| Automorphism::from_perm_unchecked(image))
}

/// A lift of `phi` to the cross-cover: the unit-multiplier lift when one
/// exists, otherwise the exact propagation search.
pub fn lift_automorphism(
    m: &Maniplex,
    w: &WeightFunction,
    phi: &Automorphism,
) -> Result<Option<Automorphism>> {
    w.check_against(m)?;
    phi.check(m)?;
    if let Some((_, lift)) = lift_by_unit(m, w, phi) {
        return Ok(Some(lift));
    }
    lift_by_propagation(m, w, phi)
}

/// A generating set of `Aut(m)`: the automorphisms sending the base flag to
/// each of its neighbours when those already generate the whole group,
/// otherwise the generators found by the group search.
pub fn generating_set(m: &Maniplex, group: &AutGroup) -> Vec<Automorphism> {
    let standard: Vec<Automorphism> = (0..m.rank())
        .filter_map(|c| find_automorphism(m, group.base, m.neighbour(group.base, c)))
        .collect();
    let mut uf = UnionFind::new(m.num_flags());
    for g in &standard {
        for u in m.flags() {
            uf.union(u, g.apply(u));
        }
    }
    let base_root = uf.find(group.base);
    if uf.size[base_root] == group.order {
        standard
    } else {
        group.generators.clone()
    }
}

/// True iff every automorphism of `m` lifts to the cross-cover. Lifts
/// compose, so testing a generating set suffices.
pub fn is_aut_consistent(m: &Maniplex, w: &WeightFunction) -> Result<bool> {
    let group = automorphism_group(m);
    is_aut_consistent_with(m, w, &group)
}

pub(crate) fn is_aut_consistent_with(
    m: &Maniplex,
    w: &WeightFunction,
    group: &AutGroup,
) -> Result<bool> {
    w.check_against(m)?;
    let cover = cross_cover(m, w)?;
    for phi in generating_set(m, group) {
        if lift_by_unit(m, w, &phi).is_some() {
            continue;
        }
        if lift_on_cover(&cover, w.modulus(), &phi).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 8-flag flag graph of a digon-like rank-3 maniplex: Z2^3 with colour
    /// i flipping bit i. Regular, orientable.
    fn cube_corner() -> Maniplex {
        let adj = (0..3)
            .map(|i| (0..8).map(|u| u ^ (1 << i)).collect())
            .collect();
        Maniplex::new(3, adj).unwrap()
    }

    #[test]
    fn identity_when_source_equals_target() {
        let m = cube_corner();
        let phi = find_automorphism(&m, 3, 3).unwrap();
        assert!(phi.is_identity());
    }

    #[test]
    fn regular_graph_group() {
        let m = cube_corner();
        let g = automorphism_group(&m);
        assert_eq!(g.order, 8);
        assert!(g.is_regular());
        for phi in &g.generators {
            assert!(phi.is_automorphism_of(&m));
        }
        assert_eq!(aut_order_and_orbits_exhaustive(&m, false).0, 8);
    }

    #[test]
    fn inverse_and_composition_stay_automorphisms() {
        let m = cube_corner();
        let a = find_automorphism(&m, 0, 5).unwrap();
        let b = find_automorphism(&m, 0, 6).unwrap();
        assert!(a.then(&b).is_automorphism_of(&m));
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn non_automorphism_is_rejected() {
        let m = cube_corner();
        let mut perm: Vec<usize> = (0..8).collect();
        perm.swap(0, 1);
        assert!(Automorphism::from_perm(&m, perm).is_err());
    }

    #[test]
    fn label_format() {
        assert_eq!(type_label(3, &[1]), "2^3_{1}");
        assert_eq!(type_label(4, &[1, 3]), "2^4_{1,3}");
        assert_eq!(type_label(3, &[]), "2^3_{}");
    }

    #[test]
    fn inconsistent_partition_is_not_a_quotient() {
        let m = cube_corner();
        let orbit_of = vec![0, 1, 1, 1, 1, 1, 1, 1];
        assert!(SymmetryTypeGraph::from_orbits(&m, orbit_of, 2).is_err());
    }

    #[test]
    fn zero_weight_lifts_levelwise() {
        let m = cube_corner();
        let w = WeightFunction::zero(&m, 3).unwrap();
        let phi = find_automorphism(&m, 0, 7).unwrap();
        let (alpha, lift) = lift_by_unit(&m, &w, &phi).unwrap();
        assert_eq!(alpha, 1);
        let cover = cross_cover(&m, &w).unwrap();
        assert!(lift.is_automorphism_of(&cover));
        // disconnected cover: exact search backtracks per component
        let exact = lift_by_propagation(&m, &w, &phi).unwrap().unwrap();
        assert!(exact.is_automorphism_of(&cover));
        assert!(is_aut_consistent(&m, &w).unwrap());
    }
}
