//! The flag-graph data model.
//!
//! A [`Maniplex`] of rank `n` stores, for every colour `i < n`, the
//! `i`-adjacency `u -> u^i` as a flat array over dense flag ids `0..F`.
//! The constructor only checks shape and index ranges; whether the graph is
//! actually a maniplex (proper colouring, connectivity, string property) is a
//! verdict produced by [`Maniplex::validate`], because several constructions
//! (cross-covers in particular) legitimately produce graphs that fail it.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense flag index.
pub type Flag = usize;

/// Per-flag facet labels `x` in `Z_2^bits`, present when a maniplex was built
/// as a colour-coded extension. Bit `j - 1` of a label is coordinate `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetLabels {
    bits: usize,
    labels: Vec<u32>,
}

impl FacetLabels {
    pub fn new(bits: usize, labels: Vec<u32>) -> Result<Self> {
        if bits > 32 {
            return Err(Error::LabelOverflow { bits, cap: 32 });
        }
        if let Some(bad) = labels.iter().find(|&&x| bits < 32 && (x >> bits) != 0) {
            return Err(Error::Malformed(format!(
                "facet label {bad:x} does not fit in {bits} bits"
            )));
        }
        Ok(FacetLabels { bits, labels })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, flag: Flag) -> u32 {
        self.labels[flag]
    }
}

/// A properly edge-coloured graph on flags `0..F` with colours `0..rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Maniplex {
    rank: usize,
    adj: Vec<Vec<Flag>>,
    facet_labels: Option<FacetLabels>,
    provenance: String,
}

/// Outcome of [`Maniplex::validate`]. Every check is evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub involution: bool,
    pub fixed_point_free: bool,
    pub connected: bool,
    pub string_property: bool,
    /// `None` when the maniplex carries no facet labels.
    pub facet_labels: Option<bool>,
    pub failures: Vec<String>,
}

impl ValidationReport {
    /// True iff the graph is a maniplex (and its facet labels, if any, are
    /// consistent).
    pub fn is_maniplex(&self) -> bool {
        self.involution
            && self.fixed_point_free
            && self.connected
            && self.string_property
            && self.facet_labels.unwrap_or(true)
    }
}

/// Schläfli type `{p, q}` of an equivelar rank-3 maniplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MapType {
    pub p: usize,
    pub q: usize,
}

impl fmt::Display for MapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.p, self.q)
    }
}

/// The `i`-faces of a maniplex: connected components after deleting all
/// `i`-edges. Face ids are assigned in order of their smallest flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePartition {
    pub colour: usize,
    pub face_of: Vec<usize>,
    pub num_faces: usize,
}

impl FacePartition {
    /// Number of flags in each face, indexed by face id.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_faces];
        for &f in &self.face_of {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Checks the raw adjacency arrays of a candidate rank-`rank` graph.
///
/// Out-of-range indices and ragged arrays are malformed input and produce an
/// error; everything else is reported in the returned verdict.
pub fn validate_raw(rank: usize, adj: &[Vec<Flag>]) -> Result<ValidationReport> {
    check_shape(rank, adj)?;
    let num_flags = adj[0].len();
    let mut failures = Vec::new();

    let mut involution = true;
    let mut fixed_point_free = true;
    for (i, row) in adj.iter().enumerate() {
        for (u, &v) in row.iter().enumerate() {
            if v == u {
                if fixed_point_free {
                    failures.push(format!("colour {i} fixes flag {u}"));
                }
                fixed_point_free = false;
            }
            if row[v] != u {
                if involution {
                    failures.push(format!("colour {i} is not an involution at flag {u}"));
                }
                involution = false;
            }
        }
    }

    let connected = count_components(num_flags, adj, |_| true) == 1;
    if !connected {
        failures.push("flag graph is disconnected".to_string());
    }

    let mut string_property = true;
    'pairs: for i in 0..rank {
        for j in (i + 2)..rank {
            for u in 0..num_flags {
                let ui = adj[i][u];
                let uj = adj[j][u];
                let back = adj[j][adj[i][adj[j][ui]]];
                if back != u || ui == uj {
                    failures.push(format!("colours {i},{j} do not form a 4-cycle at flag {u}"));
                    string_property = false;
                    break 'pairs;
                }
            }
        }
    }

    Ok(ValidationReport {
        involution,
        fixed_point_free,
        connected,
        string_property,
        facet_labels: None,
        failures,
    })
}

fn check_shape(rank: usize, adj: &[Vec<Flag>]) -> Result<()> {
    if rank == 0 {
        return Err(Error::Malformed("rank must be at least 1".into()));
    }
    if adj.len() != rank {
        return Err(Error::Malformed(format!(
            "expected {rank} adjacency arrays, found {}",
            adj.len()
        )));
    }
    let num_flags = adj[0].len();
    if num_flags == 0 {
        return Err(Error::Malformed(
            "a maniplex needs at least one flag".into(),
        ));
    }
    for (i, row) in adj.iter().enumerate() {
        if row.len() != num_flags {
            return Err(Error::Malformed(format!(
                "adjacency {i} has {} entries, expected {num_flags}",
                row.len()
            )));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= num_flags) {
            return Err(Error::FlagOutOfRange { flag: v, num_flags });
        }
    }
    Ok(())
}

/// Counts connected components of the graph restricted to colours accepted by
/// `keep`. Adjacency is treated as undirected.
fn count_components(num_flags: usize, adj: &[Vec<Flag>], keep: impl Fn(usize) -> bool) -> usize {
    label_components(num_flags, adj, keep).1
}

fn label_components(
    num_flags: usize,
    adj: &[Vec<Flag>],
    keep: impl Fn(usize) -> bool,
) -> (Vec<usize>, usize) {
    // Reverse edges make this robust for inputs that are not involutions.
    let colours: Vec<usize> = (0..adj.len()).filter(|&c| keep(c)).collect();
    let mut rev: Vec<Vec<Vec<Flag>>> = Vec::new();
    let symmetric = colours
        .iter()
        .all(|&c| (0..num_flags).all(|u| adj[c][adj[c][u]] == u));
    if !symmetric {
        rev = colours
            .iter()
            .map(|&c| {
                let mut r = vec![Vec::new(); num_flags];
                for u in 0..num_flags {
                    r[adj[c][u]].push(u);
                }
                r
            })
            .collect();
    }

    let mut comp = vec![usize::MAX; num_flags];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..num_flags {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for (ci, &c) in colours.iter().enumerate() {
                let v = adj[c][u];
                if comp[v] == usize::MAX {
                    comp[v] = count;
                    queue.push_back(v);
                }
                if !symmetric {
                    for &w in &rev[ci][u] {
                        if comp[w] == usize::MAX {
                            comp[w] = count;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

impl Maniplex {
    /// Builds a graph from per-colour adjacency arrays. Only shape and index
    /// ranges are checked here.
    pub fn new(rank: usize, adj: Vec<Vec<Flag>>) -> Result<Self> {
        check_shape(rank, &adj)?;
        Ok(Maniplex {
            rank,
            adj,
            facet_labels: None,
            provenance: String::new(),
        })
    }

    pub fn with_facet_labels(mut self, labels: FacetLabels) -> Result<Self> {
        if labels.labels.len() != self.num_flags() {
            return Err(Error::ShapeMismatch(format!(
                "{} facet labels for {} flags",
                labels.labels.len(),
                self.num_flags()
            )));
        }
        self.facet_labels = Some(labels);
        Ok(self)
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_flags(&self) -> usize {
        self.adj[0].len()
    }

    pub fn flags(&self) -> std::ops::Range<Flag> {
        0..self.num_flags()
    }

    /// The `i`-neighbour `u^i`.
    #[inline]
    pub fn neighbour(&self, u: Flag, colour: usize) -> Flag {
        self.adj[colour][u]
    }

    /// The adjacency array of one colour.
    pub fn adjacency(&self, colour: usize) -> &[Flag] {
        &self.adj[colour]
    }

    pub fn adjacencies(&self) -> &[Vec<Flag>] {
        &self.adj
    }

    pub fn facet_labels(&self) -> Option<&FacetLabels> {
        self.facet_labels.as_ref()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub(crate) fn check_colour(&self, colour: usize) -> Result<()> {
        if colour >= self.rank {
            return Err(Error::ColourOutOfRange {
                colour,
                rank: self.rank,
            });
        }
        Ok(())
    }

    pub(crate) fn check_flag(&self, flag: Flag) -> Result<()> {
        if flag >= self.num_flags() {
            return Err(Error::FlagOutOfRange {
                flag,
                num_flags: self.num_flags(),
            });
        }
        Ok(())
    }

    /// Runs every structural check and reports all failures.
    pub fn validate(&self) -> ValidationReport {
        let mut report =
            validate_raw(self.rank, &self.adj).expect("shape is checked at construction");
        if let Some(labels) = &self.facet_labels {
            let ok = self.check_facet_labels(labels, &mut report.failures);
            report.facet_labels = Some(ok);
        }
        report
    }

    fn check_facet_labels(&self, labels: &FacetLabels, failures: &mut Vec<String>) -> bool {
        let top = self.rank - 1;
        for u in self.flags() {
            let x = labels.label(u);
            for i in 0..self.rank {
                let y = labels.label(self.neighbour(u, i));
                let ok = if i < top {
                    x == y
                } else {
                    (x ^ y).count_ones() == 1
                };
                if !ok {
                    failures.push(format!(
                        "facet labels inconsistent along colour {i} at flag {u}"
                    ));
                    return false;
                }
            }
        }
        true
    }

    /// True iff every colour is a fixed-point-free involution, the graph is
    /// connected and the string property holds.
    pub fn is_valid(&self) -> bool {
        self.validate().is_maniplex()
    }

    pub fn is_connected(&self) -> bool {
        count_components(self.num_flags(), &self.adj, |_| true) == 1
    }

    /// Component id of every flag (ids by smallest flag) and the component
    /// count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        label_components(self.num_flags(), &self.adj, |_| true)
    }

    /// Bipartiteness of the flag graph, by BFS 2-colouring of each component.
    pub fn is_orientable(&self) -> bool {
        self.bipartition().is_some()
    }

    /// A proper 2-colouring of the flags, if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.num_flags();
        let mut side = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for i in 0..self.rank {
                    let v = self.neighbour(u, i);
                    if side[v] == u8::MAX {
                        side[v] = side[u] ^ 1;
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    /// Partition of the flags into `i`-faces.
    pub fn faces(&self, colour: usize) -> Result<FacePartition> {
        self.check_colour(colour)?;
        let (face_of, num_faces) = label_components(self.num_flags(), &self.adj, |c| c != colour);
        Ok(FacePartition {
            colour,
            face_of,
            num_faces,
        })
    }

    /// Facets are the `(rank - 1)`-faces.
    pub fn facets(&self) -> FacePartition {
        self.faces(self.rank - 1).expect("top colour is in range")
    }

    /// Partition into connected components of the subgraph using only the
    /// given colours.
    pub fn components_with(&self, colours: &[usize]) -> Result<FacePartition> {
        for &c in colours {
            self.check_colour(c)?;
        }
        let (face_of, num_faces) =
            label_components(self.num_flags(), &self.adj, |c| colours.contains(&c));
        Ok(FacePartition {
            colour: usize::MAX,
            face_of,
            num_faces,
        })
    }

    /// `{p, q}` when every 01-cycle has length `2p` and every 12-cycle length
    /// `2q`; `None` for non-equivelar maps.
    pub fn schlafli_type(&self) -> Result<Option<MapType>> {
        if self.rank != 3 {
            return Err(Error::RankMismatch {
                expected: 3,
                found: self.rank,
            });
        }
        let half_length = |colours: &[usize]| -> Result<Option<usize>> {
            let sizes = self.components_with(colours)?.sizes();
            let first = sizes[0];
            Ok(sizes.iter().all(|&s| s == first).then_some(first / 2))
        };
        match (half_length(&[0, 1])?, half_length(&[1, 2])?) {
            (Some(p), Some(q)) => Ok(Some(MapType { p, q })),
            _ => Ok(None),
        }
    }

    /// Canonical double cover: flag `(u, j)` gets index `2u + j` and
    /// `(u, j)^i = (u^i, j + 1)`.
    pub fn double_cover(&self) -> Maniplex {
        let n = self.num_flags();
        let adj = self
            .adj
            .iter()
            .map(|row| {
                let mut out = vec![0; 2 * n];
                for u in 0..n {
                    out[2 * u] = 2 * row[u] + 1;
                    out[2 * u + 1] = 2 * row[u];
                }
                out
            })
            .collect();
        Maniplex {
            rank: self.rank,
            adj,
            facet_labels: None,
            provenance: format!("double({})", self.provenance),
        }
    }

    /// The subgraph induced on a set of flags using colours `0..rank`,
    /// re-indexed in increasing flag order. Every kept colour must map the set
    /// into itself.
    pub fn restrict(&self, flags: &[Flag], rank: usize) -> Result<Maniplex> {
        if rank == 0 || rank > self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: rank,
            });
        }
        let mut index = vec![usize::MAX; self.num_flags()];
        let mut sorted = flags.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (new, &old) in sorted.iter().enumerate() {
            index[old] = new;
        }
        let mut adj = vec![Vec::with_capacity(sorted.len()); rank];
        for (c, row) in adj.iter_mut().enumerate() {
            for &old in &sorted {
                let image = index[self.neighbour(old, c)];
                if image == usize::MAX {
                    return Err(Error::ShapeMismatch(format!(
                        "colour {c} leaves the flag set at flag {old}"
                    )));
                }
                row.push(image);
            }
        }
        Maniplex::new(rank, adj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digon() -> Maniplex {
        Maniplex::new(2, vec![vec![1, 0], vec![1, 0]]).unwrap()
    }

    #[test]
    fn digon_edge_is_a_rank_two_maniplex() {
        let m = digon();
        let report = m.validate();
        assert!(report.is_maniplex(), "{:?}", report.failures);
        assert!(m.is_orientable());
    }

    #[test]
    fn shared_transposition_breaks_proper_colouring() {
        // rank 3, 8 flags: colours 0 and 2 share the transposition (0 1)
        let c0 = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let c1 = vec![2, 3, 0, 1, 6, 7, 4, 5];
        let mut c2 = vec![4, 5, 6, 7, 0, 1, 2, 3];
        c2[0] = 1;
        c2[1] = 0;
        c2[4] = 4;
        c2[5] = 5;
        let report = validate_raw(3, &[c0, c1, c2]).unwrap();
        assert!(!report.is_maniplex());
        assert!(!report.fixed_point_free);
        assert!(!report.string_property);
        assert!(report.failures.len() >= 2);
    }

    #[test]
    fn out_of_range_index_is_malformed_not_a_verdict() {
        let err = validate_raw(1, &[vec![1, 5]]).unwrap_err();
        assert_eq!(
            err,
            Error::FlagOutOfRange {
                flag: 5,
                num_flags: 2
            }
        );
        assert!(Maniplex::new(2, vec![vec![1, 0]]).is_err());
        assert!(Maniplex::new(1, vec![vec![1, 0, 2]]).is_ok());
    }

    #[test]
    fn rank_one_digon_faces() {
        let m = Maniplex::new(1, vec![vec![1, 0]]).unwrap();
        let faces = m.faces(0).unwrap();
        assert_eq!(faces.num_faces, 2);
        assert_eq!(faces.face_of, vec![0, 1]);
        assert!(m.faces(1).is_err());
    }

    #[test]
    fn double_cover_index_formula() {
        let m = Maniplex::new(1, vec![vec![1, 0]]).unwrap();
        let d = m.double_cover();
        assert_eq!(d.adjacency(0), &[3, 2, 1, 0]);
        assert!(!d.is_connected());
        assert!(d.is_orientable());
    }

    #[test]
    fn schlafli_requires_rank_three() {
        assert!(digon().schlafli_type().is_err());
    }

    #[test]
    fn inconsistent_facet_labels_are_reported() {
        let m = Maniplex::new(1, vec![vec![1, 0]])
            .unwrap()
            .with_facet_labels(FacetLabels::new(2, vec![0, 3]).unwrap())
            .unwrap();
        let report = m.validate();
        assert_eq!(report.facet_labels, Some(false));
        assert!(!report.is_maniplex());
    }
}
