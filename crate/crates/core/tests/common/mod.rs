//! Instance generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use maniplex::catalog::{build_seed, Seed};
use maniplex::{Maniplex, Walk, WeightFunction};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn seeds() -> Vec<Maniplex> {
    Seed::ALL.iter().map(|&s| build_seed(s).unwrap()).collect()
}

pub fn hemicube() -> Maniplex {
    build_seed(Seed::Hemicube).unwrap()
}

/// Independent uniform values on every edge.
pub fn random_weight(m: &Maniplex, k: usize, rng: &mut impl Rng) -> WeightFunction {
    let mut rows = vec![vec![0; m.num_flags()]; m.rank()];
    for (c, row) in rows.iter_mut().enumerate() {
        for u in m.flags() {
            let v = m.neighbour(u, c);
            if u <= v {
                let x = rng.gen_range(0..k);
                row[u] = x;
                row[v] = x;
            }
        }
    }
    WeightFunction::new(m, k, rows).unwrap()
}

/// `w(uv) = f(u) + f(v)` for a random `f`, so every closed walk of even
/// length has weight 0; then `perturb` random edges get random values.
pub fn potential_weight(
    m: &Maniplex,
    k: usize,
    perturb: usize,
    rng: &mut impl Rng,
) -> WeightFunction {
    let f: Vec<usize> = m.flags().map(|_| rng.gen_range(0..k)).collect();
    let mut rows: Vec<Vec<usize>> = (0..m.rank())
        .map(|c| {
            m.flags()
                .map(|u| (f[u] + f[m.neighbour(u, c)]) % k)
                .collect()
        })
        .collect();
    for _ in 0..perturb {
        let c = rng.gen_range(0..m.rank());
        let u = rng.gen_range(0..m.num_flags());
        let x = rng.gen_range(0..k);
        rows[c][u] = x;
        rows[c][m.neighbour(u, c)] = x;
    }
    WeightFunction::new(m, k, rows).unwrap()
}

/// Per-colour constant weights.
pub fn colour_weight(m: &Maniplex, k: usize, rng: &mut impl Rng) -> WeightFunction {
    let values: Vec<usize> = (0..m.rank()).map(|_| rng.gen_range(0..k)).collect();
    WeightFunction::per_colour(m, k, &values).unwrap()
}

/// A potential weight plus a constant on colour-1 edges. On rank 3 the only
/// non-consecutive pair is `(0, 2)`, so the cover keeps the string property.
pub fn shifted_potential_weight(m: &Maniplex, k: usize, rng: &mut impl Rng) -> WeightFunction {
    let base = potential_weight(m, k, 0, rng);
    let shift = rng.gen_range(1..k);
    let rows = base
        .rows()
        .iter()
        .enumerate()
        .map(|(c, row)| {
            row.iter()
                .map(|&x| if c == 1 { (x + shift) % k } else { x })
                .collect()
        })
        .collect();
    WeightFunction::new(m, k, rows).unwrap()
}

/// A mix of the generators above.
pub fn any_weight(m: &Maniplex, k: usize, rng: &mut impl Rng) -> WeightFunction {
    match rng.gen_range(0..4) {
        3 => shifted_potential_weight(m, k, rng),
        0 => random_weight(m, k, rng),
        1 => {
            let perturb = rng.gen_range(0..3);
            potential_weight(m, k, perturb, rng)
        }
        _ => colour_weight(m, k, rng),
    }
}

fn step(m: &Maniplex, u: usize, c: usize) -> usize {
    m.adjacency(c)[u]
}

/// Shortest walk from `(from, 0)` to `(to, parity)` in the bipartite double,
/// if any.
fn walk_with_parity(m: &Maniplex, from: usize, to: usize, parity: usize) -> Option<Vec<usize>> {
    let n = m.num_flags();
    let mut parent = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    seen[2 * from] = true;
    let mut queue = VecDeque::from([2 * from]);
    while let Some(s) = queue.pop_front() {
        if s == 2 * to + parity {
            let mut colours = Vec::new();
            let mut t = s;
            while let Some((p, c)) = parent[t] {
                colours.push(c);
                t = p;
            }
            colours.reverse();
            return Some(colours);
        }
        for c in 0..m.rank() {
            let t = 2 * step(m, s / 2, c) + ((s % 2) ^ 1);
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((s, c));
                queue.push_back(t);
            }
        }
    }
    None
}

/// A random closed walk of the requested length parity: a random prefix,
/// one or more loops at its end, and the prefix reversed. `None` when the
/// graph has no closed walk of that parity (odd on a bipartite graph).
pub fn closed_walk(m: &Maniplex, odd: bool, rng: &mut impl Rng) -> Option<Walk> {
    let start = rng.gen_range(0..m.num_flags());
    let prefix: Vec<usize> = (0..rng.gen_range(0..6))
        .map(|_| rng.gen_range(0..m.rank()))
        .collect();
    let mid = prefix.iter().fold(start, |u, &c| step(m, u, c));
    let mut body = Vec::new();
    let loops = rng.gen_range(1..4);
    for t in 0..loops {
        // every loop is even except possibly the last
        let target_parity = usize::from(odd && t == loops - 1);
        if rng.gen_bool(0.5) || target_parity == 1 {
            // detour to a random flag and back with the wanted parity
            let via = rng.gen_range(0..m.num_flags());
            let there =
                walk_with_parity(m, mid, via, 0).or_else(|| walk_with_parity(m, mid, via, 1))?;
            let back = walk_with_parity(m, via, mid, (there.len() + target_parity) % 2)?;
            body.extend(there);
            body.extend(back);
        } else {
            let i = rng.gen_range(0..m.rank());
            let j = (i + rng.gen_range(1..m.rank())) % m.rank();
            let mut u = mid;
            loop {
                body.push(i);
                body.push(j);
                u = step(m, step(m, u, i), j);
                if u == mid {
                    break;
                }
            }
        }
    }
    let mut colours = prefix.clone();
    colours.extend(body);
    colours.extend(prefix.iter().rev());
    let walk = Walk::new(start, colours);
    debug_assert_eq!(walk.len() % 2 == 1, odd);
    Some(walk)
}

/// `sum_t (-1)^t w(e_t)` computed with signed integers.
pub fn weight_oracle(m: &Maniplex, w: &WeightFunction, walk: &Walk) -> usize {
    let k = w.modulus() as i64;
    let mut u = walk.start;
    let mut total: i64 = 0;
    for (t, &c) in walk.colours.iter().enumerate() {
        let x = w.row(c)[u] as i64;
        total += if t % 2 == 0 { x } else { -x };
        u = step(m, u, c);
    }
    total.rem_euclid(k) as usize
}

/// Walks `W^power` on the cross-cover graph itself, starting at `(start, level)`.
pub fn lift_closed_on_cover(
    cover: &Maniplex,
    k: usize,
    walk: &Walk,
    level: usize,
    power: usize,
) -> bool {
    let start = walk.start * k + level;
    let mut x = start;
    for _ in 0..power {
        for &c in &walk.colours {
            x = step(cover, x, c);
        }
    }
    x == start
}
