//! Seed maps and the weight functions used by the construction.
//!
//! Seeds are built from scratch: the Platonic solid's face structure is
//! recovered from vertex coordinates (faces are the supporting planes of the
//! convex hull), its flag graph is assembled from vertex/edge/face incidence,
//! and the hemi-map is the quotient by the central inversion `v -> -v`. Every
//! seed is then checked for validity, regularity, non-orientability and its
//! Schläfli type.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maniplex::{Flag, Maniplex, MapType};
use crate::symmetry::{automorphism_group, is_aut_consistent_with, AutGroup, Automorphism};
use crate::walk::Walk;
use crate::weights::{cross_cover, odd_walk_even_weight, WeightFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Solid {
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl Solid {
    fn vertices(self) -> Vec<[f64; 3]> {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut out = Vec::new();
        let signs = [-1.0, 1.0];
        // cyclic permutations of (0, a, b)
        let cyclic = |a: f64, b: f64, out: &mut Vec<[f64; 3]>| {
            for &s in &signs {
                for &t in &signs {
                    let (y, z) = (s * a, t * b);
                    out.push([0.0, y, z]);
                    out.push([y, z, 0.0]);
                    out.push([z, 0.0, y]);
                }
            }
        };
        match self {
            Solid::Cube => {
                for &x in &signs {
                    for &y in &signs {
                        for &z in &signs {
                            out.push([x, y, z]);
                        }
                    }
                }
            }
            Solid::Octahedron => {
                for axis in 0..3 {
                    for &s in &signs {
                        let mut v = [0.0; 3];
                        v[axis] = s;
                        out.push(v);
                    }
                }
            }
            Solid::Icosahedron => cyclic(1.0, phi, &mut out),
            Solid::Dodecahedron => {
                for &x in &signs {
                    for &y in &signs {
                        for &z in &signs {
                            out.push([x, y, z]);
                        }
                    }
                }
                cyclic(1.0 / phi, phi, &mut out);
            }
        }
        out
    }
}

const EPS: f64 = 1e-9;

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Faces of the convex hull as cyclically ordered vertex lists.
fn hull_faces(verts: &[[f64; 3]]) -> Vec<Vec<usize>> {
    let n = verts.len();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let normal = cross(sub(verts[j], verts[i]), sub(verts[k], verts[i]));
                if dot(normal, normal) < EPS {
                    continue;
                }
                let d = dot(normal, verts[i]);
                let side: Vec<f64> = verts.iter().map(|&v| dot(normal, v) - d).collect();
                let above = side.iter().any(|&s| s > EPS);
                let below = side.iter().any(|&s| s < -EPS);
                if above && below {
                    continue;
                }
                let on: Vec<usize> = (0..n).filter(|&v| side[v].abs() <= EPS).collect();
                if seen.contains(&on) {
                    continue;
                }
                seen.push(on.clone());
                // order around the centroid, in the face plane
                let centre = on.iter().fold([0.0; 3], |c, &v| {
                    [c[0] + verts[v][0], c[1] + verts[v][1], c[2] + verts[v][2]]
                });
                let centre = centre.map(|x| x / on.len() as f64);
                let e1 = sub(verts[on[0]], centre);
                let e2 = cross(normal, e1);
                let mut ordered = on.clone();
                ordered.sort_by(|&a, &b| {
                    let angle = |v: usize| {
                        let r = sub(verts[v], centre);
                        dot(r, e2).atan2(dot(r, e1))
                    };
                    angle(a).partial_cmp(&angle(b)).expect("finite angles")
                });
                faces.push(ordered);
            }
        }
    }
    faces
}

/// Flag graph of a Platonic solid with the flag permutation induced by the
/// central inversion.
pub fn platonic_flag_graph(solid: Solid) -> Result<(Maniplex, Vec<Flag>)> {
    let verts = solid.vertices();
    let faces = hull_faces(&verts);

    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut faces_of_edge: Vec<Vec<usize>> = Vec::new();
    for (f, face) in faces.iter().enumerate() {
        for t in 0..face.len() {
            let (a, b) = (face[t], face[(t + 1) % face.len()]);
            let key = (a.min(b), a.max(b));
            let e = *edge_index.entry(key).or_insert_with(|| {
                edges.push(key);
                faces_of_edge.push(Vec::new());
                edges.len() - 1
            });
            faces_of_edge[e].push(f);
        }
    }
    if faces_of_edge.iter().any(|fs| fs.len() != 2) {
        return Err(Error::Construction(
            "hull edge not shared by two faces".into(),
        ));
    }

    let mut flags: Vec<(usize, usize, usize)> = Vec::new();
    for (f, face) in faces.iter().enumerate() {
        for t in 0..face.len() {
            let (a, b) = (face[t], face[(t + 1) % face.len()]);
            let e = edge_index[&(a.min(b), a.max(b))];
            flags.push((a, e, f));
            flags.push((b, e, f));
        }
    }
    flags.sort_unstable();
    let index: HashMap<(usize, usize, usize), Flag> =
        flags.iter().enumerate().map(|(i, &fl)| (fl, i)).collect();

    let other_edge_at = |v: usize, e: usize, f: usize| -> usize {
        let face = &faces[f];
        let len = face.len();
        let pos = face.iter().position(|&x| x == v).expect("vertex on face");
        let prev = face[(pos + len - 1) % len];
        let next = face[(pos + 1) % len];
        let ea = edge_index[&(v.min(prev), v.max(prev))];
        let eb = edge_index[&(v.min(next), v.max(next))];
        if ea == e {
            eb
        } else {
            ea
        }
    };

    let mut adj: Vec<Vec<Flag>> = (0..3).map(|_| Vec::with_capacity(flags.len())).collect();
    for &(v, e, f) in &flags {
        let (a, b) = edges[e];
        let v2 = if a == v { b } else { a };
        let e2 = other_edge_at(v, e, f);
        let f2 = if faces_of_edge[e][0] == f {
            faces_of_edge[e][1]
        } else {
            faces_of_edge[e][0]
        };
        adj[0].push(index[&(v2, e, f)]);
        adj[1].push(index[&(v, e2, f)]);
        adj[2].push(index[&(v, e, f2)]);
    }

    let opposite: Vec<usize> = verts
        .iter()
        .map(|&p| {
            let q = p.map(|x| -x);
            verts
                .iter()
                .position(|&r| dot(sub(r, q), sub(r, q)) < EPS)
                .expect("centrally symmetric solid")
        })
        .collect();
    let face_key = |vs: &[usize]| {
        let mut k = vs.to_vec();
        k.sort_unstable();
        k
    };
    let face_index: HashMap<Vec<usize>, usize> = faces
        .iter()
        .enumerate()
        .map(|(f, vs)| (face_key(vs), f))
        .collect();
    let antipode = flags
        .iter()
        .map(|&(v, e, f)| {
            let (a, b) = edges[e];
            let (oa, ob) = (opposite[a], opposite[b]);
            let oe = edge_index[&(oa.min(ob), oa.max(ob))];
            let of_vs: Vec<usize> = faces[f].iter().map(|&x| opposite[x]).collect();
            let of = face_index[&face_key(&of_vs)];
            index[&(opposite[v], oe, of)]
        })
        .collect();

    let name = format!("{solid:?}").to_lowercase();
    Ok((Maniplex::new(3, adj)?.with_provenance(name), antipode))
}

/// Quotient of `m` by a fixed-point-free colour-preserving involution.
/// Classes are numbered by their smallest flag.
pub fn quotient_by_involution(m: &Maniplex, involution: &Automorphism) -> Result<Maniplex> {
    involution.check(m)?;
    let n = m.num_flags();
    let mut class = vec![usize::MAX; n];
    let mut count = 0;
    for u in 0..n {
        let v = involution.apply(u);
        if v == u || involution.apply(v) != u {
            return Err(Error::Construction(
                "not a fixed-point-free involution".into(),
            ));
        }
        if class[u] == usize::MAX {
            class[u] = count;
            class[v] = count;
            count += 1;
        }
    }
    let mut adj = vec![vec![usize::MAX; count]; m.rank()];
    for (c, row) in adj.iter_mut().enumerate() {
        for u in 0..n {
            row[class[u]] = class[m.neighbour(u, c)];
        }
    }
    Maniplex::new(m.rank(), adj)
}

/// The catalogued non-orientable regular maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Seed {
    Hemicube,
    Hemioctahedron,
    Hemidodecahedron,
    Hemiicosahedron,
}

/// Expected properties of a seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedSpec {
    pub seed: Seed,
    pub name: &'static str,
    pub solid: Solid,
    pub map_type: MapType,
    pub num_flags: usize,
}

impl Seed {
    pub const ALL: [Seed; 4] = [
        Seed::Hemicube,
        Seed::Hemioctahedron,
        Seed::Hemidodecahedron,
        Seed::Hemiicosahedron,
    ];

    pub fn spec(self) -> SeedSpec {
        let (name, solid, p, q, num_flags) = match self {
            Seed::Hemicube => ("hemicube", Solid::Cube, 4, 3, 24),
            Seed::Hemioctahedron => ("hemioctahedron", Solid::Octahedron, 3, 4, 24),
            Seed::Hemidodecahedron => ("hemidodecahedron", Solid::Dodecahedron, 5, 3, 60),
            Seed::Hemiicosahedron => ("hemiicosahedron", Solid::Icosahedron, 3, 5, 60),
        };
        SeedSpec {
            seed: self,
            name,
            solid,
            map_type: MapType { p, q },
            num_flags,
        }
    }

    pub fn name(self) -> &'static str {
        self.spec().name
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Seed::ALL
            .into_iter()
            .find(|seed| seed.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown seed `{s}`")))
    }
}

/// Builds a seed map and checks it against its [`SeedSpec`].
pub fn build_seed(seed: Seed) -> Result<Maniplex> {
    let spec = seed.spec();
    if spec.map_type.p.is_multiple_of(2) && spec.map_type.q.is_multiple_of(2) {
        return Err(Error::Construction(format!(
            "{}: neither p nor q is odd",
            spec.name
        )));
    }
    let (solid, antipode) = platonic_flag_graph(spec.solid)?;
    let report = solid.validate();
    if !report.is_maniplex() {
        return Err(Error::Construction(format!(
            "{:?} flag graph: {:?}",
            spec.solid, report.failures
        )));
    }
    let inversion = Automorphism::from_perm(&solid, antipode)?;
    let hemi = quotient_by_involution(&solid, &inversion)?.with_provenance(spec.name);

    let fail = |what: &str| Err(Error::Construction(format!("{}: {what}", spec.name)));
    if !hemi.validate().is_maniplex() {
        return fail("quotient is not a maniplex");
    }
    if hemi.num_flags() != spec.num_flags {
        return fail("unexpected flag count");
    }
    if hemi.is_orientable() {
        return fail("quotient is orientable");
    }
    if hemi.schlafli_type()? != Some(spec.map_type) {
        return fail("unexpected Schläfli type");
    }
    if automorphism_group(&hemi).order != hemi.num_flags() {
        return fail("quotient is not regular");
    }
    Ok(hemi)
}

/// The flag graph of a Platonic solid itself (orientable, regular).
pub fn platonic(solid: Solid) -> Result<Maniplex> {
    Ok(platonic_flag_graph(solid)?.0)
}

/// `Z_4` weights: 0 on 1-edges, 1 on 0- and 2-edges.
pub fn vartheta(m: &Maniplex) -> Result<WeightFunction> {
    rank_three(m)?;
    WeightFunction::per_colour(m, 4, &[1, 0, 1])
}

/// `Z_4` weights: 1 on 1-edges, 0 elsewhere.
pub fn vartheta_prime(m: &Maniplex) -> Result<WeightFunction> {
    rank_three(m)?;
    WeightFunction::per_colour(m, 4, &[0, 1, 0])
}

fn rank_three(m: &Maniplex) -> Result<()> {
    if m.rank() != 3 {
        return Err(Error::RankMismatch {
            expected: 3,
            found: m.rank(),
        });
    }
    Ok(())
}

/// The four conditions on a (maniplex, weight) pair under which the
/// cross-cover is an unstable two-orbit maniplex and extensions by invariant
/// colourings preserve that.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperPairReport {
    pub aut_order: usize,
    pub regular: bool,
    #[serde(serialize_with = "serialize_walk")]
    pub odd_even_walk: Option<Walk>,
    pub cover_nonorientable_maniplex: bool,
    pub aut_consistent: bool,
    pub verdict: bool,
}

fn serialize_walk<S: serde::Serializer>(
    walk: &Option<Walk>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match walk {
        None => s.serialize_none(),
        Some(w) => s.serialize_some(&(w.start, &w.colours)),
    }
}

pub fn verify_proper_pair(m: &Maniplex, w: &WeightFunction) -> Result<ProperPairReport> {
    let group = automorphism_group(m);
    verify_proper_pair_with(m, w, &group)
}

pub(crate) fn verify_proper_pair_with(
    m: &Maniplex,
    w: &WeightFunction,
    group: &AutGroup,
) -> Result<ProperPairReport> {
    let regular = group.order == m.num_flags();
    let odd_even_walk = odd_walk_even_weight(m, w)?;
    let cover = cross_cover(m, w)?;
    let cover_nonorientable_maniplex = cover.validate().is_maniplex() && !cover.is_orientable();
    let aut_consistent = is_aut_consistent_with(m, w, group)?;
    let verdict =
        regular && odd_even_walk.is_some() && cover_nonorientable_maniplex && aut_consistent;
    Ok(ProperPairReport {
        aut_order: group.order,
        regular,
        odd_even_walk,
        cover_nonorientable_maniplex,
        aut_consistent,
        verdict,
    })
}
