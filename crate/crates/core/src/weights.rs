//! Edge weights in `Z_k`, alternating walk weights, walk lifts and the
//! cross-cover construction.
//!
//! A cross-cover of a graph relative to `w: E -> Z_k` has vertices `(u, i)`
//! with `i` in `Z_k`, and for each edge `e = uv` and each level `i` an edge
//! joining `(u, i)` to `(v, w(e) - i)`. Each edge keeps the colour of its
//! projection, so the per-colour maps of the cover are involutions by
//! construction. Nothing else is guaranteed: the cover may be disconnected or
//! lose the string property, and callers decide what to do with that.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::maniplex::{Flag, Maniplex};
use crate::walk::Walk;

/// Greatest common divisor, with `gcd(0, k) = k`.
pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Additive order of `x` in `Z_k`.
pub fn additive_order(x: usize, k: usize) -> usize {
    k / gcd(x % k, k)
}

/// Units of `Z_k`; multiplication by each unit is exactly `Aut(Z_k)`.
pub fn units(k: usize) -> Vec<usize> {
    (1..k).filter(|&a| gcd(a, k) == 1).collect()
}

/// A `k`-weight function stored per (colour, flag). Each edge `{u, u^i}`
/// stores its weight at both endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    modulus: usize,
    w: Vec<Vec<usize>>,
}

impl WeightFunction {
    /// Builds a weight function for `m`, checking shape, value range and edge
    /// symmetry `w[i][u] = w[i][u^i]`.
    pub fn new(m: &Maniplex, modulus: usize, w: Vec<Vec<usize>>) -> Result<Self> {
        let wf = Self::from_raw(modulus, w)?;
        wf.check_against(m)?;
        Ok(wf)
    }

    /// Builds a weight function without reference to a maniplex; only the
    /// modulus and value ranges are checked.
    pub fn from_raw(modulus: usize, w: Vec<Vec<usize>>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Unsupported(format!("modulus {modulus} < 2")));
        }
        for (i, row) in w.iter().enumerate() {
            if let Some(&bad) = row.iter().find(|&&x| x >= modulus) {
                return Err(Error::Malformed(format!(
                    "weight {bad} on colour {i} is not reduced mod {modulus}"
                )));
            }
        }
        Ok(WeightFunction { modulus, w })
    }

    /// Same weight on every edge of a colour.
    pub fn per_colour(m: &Maniplex, modulus: usize, values: &[usize]) -> Result<Self> {
        if values.len() != m.rank() {
            return Err(Error::ShapeMismatch(format!(
                "{} colour weights for rank {}",
                values.len(),
                m.rank()
            )));
        }
        let w = values
            .iter()
            .map(|&v| vec![v % modulus; m.num_flags()])
            .collect();
        Self::new(m, modulus, w)
    }

    pub fn zero(m: &Maniplex, modulus: usize) -> Result<Self> {
        Self::per_colour(m, modulus, &vec![0; m.rank()])
    }

    /// Checks that this weight function fits `m` and is edge-symmetric.
    pub fn check_against(&self, m: &Maniplex) -> Result<()> {
        if self.w.len() != m.rank() {
            return Err(Error::ShapeMismatch(format!(
                "weights cover {} colours, maniplex has rank {}",
                self.w.len(),
                m.rank()
            )));
        }
        for (i, row) in self.w.iter().enumerate() {
            if row.len() != m.num_flags() {
                return Err(Error::ShapeMismatch(format!(
                    "weights for colour {i} have {} entries, maniplex has {} flags",
                    row.len(),
                    m.num_flags()
                )));
            }
            for u in m.flags() {
                let v = m.neighbour(u, i);
                if row[u] != row[v] {
                    return Err(Error::Malformed(format!(
                        "edge ({u},{v}) of colour {i} has weights {} and {}",
                        row[u], row[v]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.w.len()
    }

    /// Weight of the `colour`-edge at `flag`.
    #[inline]
    pub fn weight(&self, colour: usize, flag: Flag) -> usize {
        self.w[colour][flag]
    }

    pub fn row(&self, colour: usize) -> &[usize] {
        &self.w[colour]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.w
    }

    /// Weights of the subgraph on `flags` (sorted, as re-indexed by
    /// [`Maniplex::restrict`]) using colours `0..rank`.
    pub fn restrict(&self, flags: &[Flag], rank: usize) -> Result<Self> {
        if rank > self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: rank,
            });
        }
        let mut sorted = flags.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let w = self.w[..rank]
            .iter()
            .map(|row| sorted.iter().map(|&u| row[u]).collect())
            .collect();
        Self::from_raw(self.modulus, w)
    }

    /// The same weights read in `Z_modulus` (values reduced).
    pub fn reduced(&self, modulus: usize) -> Result<Self> {
        Self::from_raw(
            modulus,
            self.w
                .iter()
                .map(|r| r.iter().map(|&x| x % modulus).collect())
                .collect(),
        )
    }
}

/// `sum_t (-1)^t w(e_t) mod k`, signs by position within the walk.
pub fn walk_weight(m: &Maniplex, w: &WeightFunction, walk: &Walk) -> Result<usize> {
    w.check_against(m)?;
    walk.check(m)?;
    Ok(weight_unchecked(m, w, walk.start, &walk.colours))
}

pub(crate) fn weight_unchecked(
    m: &Maniplex,
    w: &WeightFunction,
    start: Flag,
    colours: &[usize],
) -> usize {
    let k = w.modulus();
    let mut u = start;
    let mut total = 0;
    for (t, &c) in colours.iter().enumerate() {
        let x = w.weight(c, u);
        total = if t % 2 == 0 {
            (total + x) % k
        } else {
            (total + k - x) % k
        };
        u = m.neighbour(u, c);
    }
    total
}

/// A lifted walk: the visited `(flag, level)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftResult {
    pub flags: Vec<(Flag, usize)>,
    pub closed: bool,
}

impl LiftResult {
    pub fn end(&self) -> (Flag, usize) {
        *self.flags.last().expect("a lift visits at least its base")
    }
}

/// Lift of `walk` based at `(start, level)`: each step goes from level `l` to
/// `w(e) - l`.
pub fn lift_walk(
    m: &Maniplex,
    w: &WeightFunction,
    walk: &Walk,
    level: usize,
) -> Result<LiftResult> {
    w.check_against(m)?;
    walk.check(m)?;
    let k = w.modulus();
    let base = (walk.start, level % k);
    let mut flags = Vec::with_capacity(walk.len() + 1);
    flags.push(base);
    let (mut u, mut l) = base;
    for &c in &walk.colours {
        l = (w.weight(c, u) + k - l) % k;
        u = m.neighbour(u, c);
        flags.push((u, l));
    }
    let closed = (u, l) == base;
    Ok(LiftResult { flags, closed })
}

/// Closure of the lift of `W^power` at `level`, predicted from the length
/// parity and weight of a closed walk `W` alone.
///
/// Even `W`: closed iff the additive order of `w(W)` divides `power`.
/// Odd `W`: always closed when `w(W) = 2 level`, otherwise iff `power` is even.
pub fn predicted_lift_closed(
    modulus: usize,
    walk_len: usize,
    walk_weight: usize,
    level: usize,
    power: usize,
) -> bool {
    let k = modulus;
    if walk_len.is_multiple_of(2) {
        power.is_multiple_of(additive_order(walk_weight, k))
    } else if walk_weight % k == (2 * level) % k {
        true
    } else {
        power.is_multiple_of(2)
    }
}

/// Cross-cover of `m` relative to `w`. Vertex `(u, i)` has index `u*k + i`
/// and `(u, i)^c = (u^c, w(e) - i)`.
pub fn cross_cover(m: &Maniplex, w: &WeightFunction) -> Result<Maniplex> {
    w.check_against(m)?;
    let k = w.modulus();
    let n = m.num_flags();
    let adj = (0..m.rank())
        .map(|c| {
            let mut row = vec![0; n * k];
            for u in 0..n {
                let v = m.neighbour(u, c);
                let x = w.weight(c, u);
                for i in 0..k {
                    row[u * k + i] = v * k + (x + k - i) % k;
                }
            }
            row
        })
        .collect();
    Ok(Maniplex::new(m.rank(), adj)?.with_provenance(format!("cross({}, k={k})", m.provenance())))
}

/// True iff every alternating 4-cycle of non-consecutive colours has weight
/// zero, which is exactly when the cross-cover keeps the string property.
pub fn cover_has_string_property(m: &Maniplex, w: &WeightFunction) -> Result<bool> {
    w.check_against(m)?;
    let k = w.modulus();
    for i in 0..m.rank() {
        for j in (i + 2)..m.rank() {
            for u in m.flags() {
                let colours = [i, j, i, j];
                let end = colours.iter().fold(u, |v, &c| m.neighbour(v, c));
                if end != u || !weight_unchecked(m, w, u, &colours).is_multiple_of(k) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// An even closed walk whose weight is a unit of `Z_k`, if one exists among
/// the two-coloured cycles of `m` and the supplied walks. Its existence proves
/// the cross-cover connected (for connected `m`); absence is inconclusive.
///
/// Candidates are tried supplied walks first, then colour pairs `(i, j)` in
/// lexicographic order, each cycle rooted at its smallest flag.
pub fn connectivity_witness(
    m: &Maniplex,
    w: &WeightFunction,
    extra: &[Walk],
) -> Result<Option<Walk>> {
    w.check_against(m)?;
    let k = w.modulus();
    let is_witness = |walk: &Walk| -> Result<bool> {
        Ok(walk.len().is_multiple_of(2)
            && walk.is_closed(m)?
            && gcd(weight_unchecked(m, w, walk.start, &walk.colours), k) == 1)
    };
    for walk in extra {
        if is_witness(walk)? {
            return Ok(Some(walk.clone()));
        }
    }
    for i in 0..m.rank() {
        for j in (i + 1)..m.rank() {
            let mut seen = vec![false; m.num_flags()];
            for u in m.flags() {
                if seen[u] {
                    continue;
                }
                let mut colours = Vec::new();
                let mut v = u;
                loop {
                    seen[v] = true;
                    v = m.neighbour(v, i);
                    seen[v] = true;
                    v = m.neighbour(v, j);
                    colours.push(i);
                    colours.push(j);
                    if v == u {
                        break;
                    }
                }
                let walk = Walk::new(u, colours);
                if is_witness(&walk)? {
                    return Ok(Some(walk));
                }
            }
        }
    }
    Ok(None)
}

/// A closed walk of odd length whose weight is even, for even `k`.
///
/// Searches the parity cover on `(flag, length mod 2, weight mod 2)`: the
/// alternating signs do not change a weight mod 2, so reaching `(u, 1, 0)`
/// from `(u, 0, 0)` is exactly the sought walk. Base flags are tried in
/// increasing order, BFS visits colours in increasing order.
pub fn odd_walk_even_weight(m: &Maniplex, w: &WeightFunction) -> Result<Option<Walk>> {
    w.check_against(m)?;
    let k = w.modulus();
    if !k.is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "weight parity is only defined for even modulus, got {k}"
        )));
    }
    let n = m.num_flags();
    let state = |u: Flag, len: usize, par: usize| (u * 2 + len) * 2 + par;
    let mut reached_from_earlier = vec![false; n];
    for base in m.flags() {
        // The parity cover is regular over Z_2 x Z_2, so a base lying in the
        // (u,0,0)-component of an earlier failed base u fails as well.
        if reached_from_earlier[base] {
            continue;
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; 4 * n];
        let mut visited = vec![false; 4 * n];
        let start = state(base, 0, 0);
        let target = state(base, 1, 0);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            let u = s / 4;
            let len = (s / 2) % 2;
            let par = s % 2;
            for c in 0..m.rank() {
                let v = m.neighbour(u, c);
                let t = state(v, len ^ 1, par ^ (w.weight(c, u) % 2));
                if !visited[t] {
                    visited[t] = true;
                    parent[t] = Some((s, c));
                    queue.push_back(t);
                }
            }
        }
        if visited[target] {
            let mut colours = Vec::new();
            let mut s = target;
            while let Some((p, c)) = parent[s] {
                colours.push(c);
                s = p;
            }
            colours.reverse();
            return Ok(Some(Walk::new(base, colours)));
        }
        for u in m.flags() {
            if visited[state(u, 0, 0)] {
                reached_from_earlier[u] = true;
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank-3 graph on 4 flags with an odd closed walk `0 -0-> 1 -2-> 2 -1-> 0`.
    fn square() -> Maniplex {
        Maniplex::new(
            3,
            vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn empty_walk_has_zero_weight() {
        let m = square();
        let w = WeightFunction::per_colour(&m, 5, &[1, 2, 3]).unwrap();
        assert_eq!(walk_weight(&m, &w, &Walk::empty(0)).unwrap(), 0);
    }

    #[test]
    fn two_unit_edges_cancel() {
        let m = square();
        let w = WeightFunction::per_colour(&m, 4, &[1, 1, 1]).unwrap();
        assert_eq!(walk_weight(&m, &w, &Walk::new(0, vec![0, 1])).unwrap(), 0);
    }

    #[test]
    fn asymmetric_weights_are_rejected() {
        let m = square();
        let w = vec![vec![1, 0, 0, 0], vec![0; 4], vec![0; 4]];
        assert!(WeightFunction::new(&m, 4, w).is_err());
        assert!(WeightFunction::from_raw(4, vec![vec![4]]).is_err());
    }

    #[test]
    fn lift_levels_follow_the_recurrence() {
        let m = square();
        let w = WeightFunction::per_colour(&m, 5, &[1, 2, 3]).unwrap();
        let walk = Walk::new(0, vec![0, 2, 1]);
        let lift = lift_walk(&m, &w, &walk, 4).unwrap();
        // 4 -> 1-4=2 -> 3-2=1 -> 2-1=1
        let levels: Vec<usize> = lift.flags.iter().map(|&(_, l)| l).collect();
        assert_eq!(levels, vec![4, 2, 1, 1]);
        // final level = (-1)^3 (4 - w(W)), w(W) = 1 - 3 + 2 = 0
        assert_eq!(lift.end(), (0, 1));
        assert!(!lift.closed);
    }

    #[test]
    fn zero_weights_give_disjoint_copies() {
        let m = square();
        let w = WeightFunction::zero(&m, 3).unwrap();
        let cover = cross_cover(&m, &w).unwrap();
        assert_eq!(cover.num_flags(), 12);
        // (u,i)^c = (u^c, -i)
        assert_eq!(cover.neighbour(1, 0), 3 + 2);
        assert!(connectivity_witness(&m, &w, &[]).unwrap().is_none());
    }

    #[test]
    fn odd_modulus_parity_search_is_unsupported() {
        let m = square();
        let w = WeightFunction::zero(&m, 3).unwrap();
        assert!(matches!(
            odd_walk_even_weight(&m, &w),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn unit_weight_cycle_is_a_witness_for_every_modulus() {
        let m = square();
        for k in 2..9 {
            let w =
                WeightFunction::new(&m, k, vec![vec![1, 1, 0, 0], vec![0; 4], vec![0; 4]]).unwrap();
            let walk = connectivity_witness(&m, &w, &[]).unwrap().unwrap();
            assert_eq!(walk_weight(&m, &w, &walk).unwrap() % k, 1);
        }
    }

    #[test]
    fn supplied_walks_are_tried_first() {
        let m = square();
        let w = WeightFunction::new(&m, 4, vec![vec![1, 1, 0, 0], vec![0; 4], vec![0; 4]]).unwrap();
        let mine = Walk::new(0, vec![0, 0, 0, 1, 0, 1]);
        assert_eq!(walk_weight(&m, &w, &mine).unwrap(), 1);
        let found = connectivity_witness(&m, &w, std::slice::from_ref(&mine)).unwrap();
        assert_eq!(found, Some(mine));
    }

    #[test]
    fn orders_and_units() {
        assert_eq!(additive_order(0, 4), 1);
        assert_eq!(additive_order(2, 4), 2);
        assert_eq!(additive_order(3, 4), 4);
        assert_eq!(units(4), vec![1, 3]);
        assert_eq!(units(6), vec![1, 5]);
        assert_eq!(units(5), vec![1, 2, 3, 4]);
    }
}
