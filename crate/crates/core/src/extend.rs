//! Facet colourings and the colour-coded extension.
//!
//! Given an `n`-maniplex `M` and a colouring `C` of its facets with colours
//! `1..=l`, the extension has flags `(u, x)` with `x` in `Z_2^l`, indexed
//! `u * 2^l + x`. Colours `i < n` act on `u` and keep `x`; the new colour `n`
//! keeps `u` and flips bit `C(u) - 1` of `x`. Facet `F_x` of the extension is
//! the set of flags with label `x`, and since its smallest flag is `(0, x)`
//! its facet id (by smallest flag) is exactly `x`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maniplex::{FacetLabels, Flag, Maniplex};
use crate::symmetry::{automorphism_group, generating_set, AutGroup, Automorphism};
use crate::weights::WeightFunction;

/// Largest supported label width; extensions have `F * 2^bits` flags.
pub const MAX_LABEL_BITS: usize = 24;

/// An element of `Z_2^len`; coordinate `j` (1-based) is bit `j - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    bits: u32,
    len: usize,
}

impl BitVector {
    pub fn new(bits: u32, len: usize) -> Result<Self> {
        if len > MAX_LABEL_BITS {
            return Err(Error::LabelOverflow {
                bits: len,
                cap: MAX_LABEL_BITS,
            });
        }
        if bits >> len != 0 {
            return Err(Error::Malformed(format!(
                "{bits:x} does not fit in {len} bits"
            )));
        }
        Ok(BitVector { bits, len })
    }

    pub fn zero(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// `x^j`: flips coordinate `j` (1-based).
    pub fn flip(self, j: usize) -> Self {
        assert!(
            j >= 1 && j <= self.len,
            "coordinate {j} out of 1..={}",
            self.len
        );
        BitVector {
            bits: self.bits ^ (1 << (j - 1)),
            len: self.len,
        }
    }

    /// `+1` for an even number of ones, `-1` otherwise.
    pub fn parity(self) -> i8 {
        parity(self.bits)
    }

    /// Differs from `self` in every coordinate.
    pub fn antipode(self) -> Self {
        BitVector {
            bits: !self.bits & mask(self.len),
            len: self.len,
        }
    }
}

pub(crate) fn parity(bits: u32) -> i8 {
    if bits.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ColouringKind {
    Total,
    Antipodal,
    Custom,
}

impl ColouringKind {
    /// One-letter key used in variant words.
    pub fn letter(self) -> char {
        match self {
            ColouringKind::Total => 'T',
            ColouringKind::Antipodal => 'A',
            ColouringKind::Custom => 'C',
        }
    }
}

/// A surjective map from facet ids to colours `1..=num_colours`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    num_colours: usize,
    colour_of: Vec<usize>,
    kind: ColouringKind,
}

impl Colouring {
    /// Checks the facet count against `m`, the colour range and surjectivity.
    pub fn new(
        m: &Maniplex,
        num_colours: usize,
        colour_of: Vec<usize>,
        kind: ColouringKind,
    ) -> Result<Self> {
        let facets = m.facets().num_faces;
        if colour_of.len() != facets {
            return Err(Error::InvalidColouring(format!(
                "{} facet colours for {facets} facets",
                colour_of.len()
            )));
        }
        Self::from_raw(num_colours, colour_of, kind)
    }

    /// Checks range and surjectivity only.
    pub fn from_raw(
        num_colours: usize,
        colour_of: Vec<usize>,
        kind: ColouringKind,
    ) -> Result<Self> {
        if num_colours == 0 {
            return Err(Error::InvalidColouring(
                "at least one colour is needed".into(),
            ));
        }
        let mut used = vec![false; num_colours];
        for &c in &colour_of {
            if c == 0 || c > num_colours {
                return Err(Error::InvalidColouring(format!(
                    "colour {c} outside 1..={num_colours}"
                )));
            }
            used[c - 1] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidColouring(format!(
                "colour {} is not used",
                missing + 1
            )));
        }
        Ok(Colouring {
            num_colours,
            colour_of,
            kind,
        })
    }

    pub fn num_colours(&self) -> usize {
        self.num_colours
    }

    pub fn num_facets(&self) -> usize {
        self.colour_of.len()
    }

    pub fn colour(&self, facet: usize) -> usize {
        self.colour_of[facet]
    }

    pub fn colours(&self) -> &[usize] {
        &self.colour_of
    }

    pub fn kind(&self) -> ColouringKind {
        self.kind
    }
}

/// Every facet gets its own colour: facet id `i` gets colour `i + 1`.
pub fn total_colouring(m: &Maniplex) -> Colouring {
    let facets = m.facets().num_faces;
    Colouring::from_raw(facets, (1..=facets).collect(), ColouringKind::Total)
        .expect("identity colouring is surjective")
}

/// Facets `F_x` and `F_y` share a colour iff `y` is the antipode of `x`.
/// Colours are numbered by the smaller label of each pair, ascending.
pub fn antipodal_colouring(m: &Maniplex) -> Result<Colouring> {
    let labels = m.facet_labels().ok_or(Error::MissingFacetLabels)?;
    let facets = m.facets();
    let full = mask(labels.bits());
    let mut label_of_facet = vec![None; facets.num_faces];
    for u in m.flags() {
        let f = facets.face_of[u];
        let x = labels.label(u);
        match label_of_facet[f] {
            None => label_of_facet[f] = Some(x),
            Some(y) if y != x => {
                return Err(Error::Malformed(format!(
                    "facet {f} carries labels {y:x} and {x:x}"
                )))
            }
            _ => {}
        }
    }
    let label_of_facet: Vec<u32> = label_of_facet
        .into_iter()
        .map(|x| x.expect("facets are non-empty"))
        .collect();
    let present: std::collections::HashSet<u32> = label_of_facet.iter().copied().collect();
    let mut pair_keys: Vec<u32> = label_of_facet.iter().map(|&x| x.min(!x & full)).collect();
    for &x in &label_of_facet {
        if !present.contains(&(!x & full)) {
            return Err(Error::InvalidColouring(format!(
                "facet label {x:x} has no antipodal facet"
            )));
        }
    }
    let keys_by_facet = pair_keys.clone();
    pair_keys.sort_unstable();
    pair_keys.dedup();
    let colour_of = keys_by_facet
        .iter()
        .map(|k| pair_keys.binary_search(k).expect("key was collected") + 1)
        .collect();
    Colouring::from_raw(pair_keys.len(), colour_of, ColouringKind::Antipodal)
}

/// The permutation of colours induced by `phi`, if `C(F) -> C(F phi)` is a
/// well-defined bijection. Index 0 is unused.
pub fn induced_colour_permutation(
    m: &Maniplex,
    colouring: &Colouring,
    phi: &Automorphism,
) -> Option<Vec<usize>> {
    let facets = m.facets();
    let l = colouring.num_colours();
    let mut image = vec![0usize; l + 1];
    for u in m.flags() {
        let from = colouring.colour(facets.face_of[u]);
        let to = colouring.colour(facets.face_of[phi.apply(u)]);
        if image[from] == 0 {
            image[from] = to;
        } else if image[from] != to {
            return None;
        }
    }
    let mut hit = vec![false; l + 1];
    for &c in &image[1..] {
        if std::mem::replace(&mut hit[c], true) {
            return None;
        }
    }
    Some(image)
}

/// True iff `colouring` is invariant under every automorphism of `m`
/// (checked on a generating set).
pub fn verify_colouring_invariant(m: &Maniplex, colouring: &Colouring) -> Result<bool> {
    let group = automorphism_group(m);
    verify_colouring_invariant_with(m, colouring, &group)
}

pub(crate) fn verify_colouring_invariant_with(
    m: &Maniplex,
    colouring: &Colouring,
    group: &AutGroup,
) -> Result<bool> {
    if colouring.num_facets() != m.facets().num_faces {
        return Err(Error::InvalidColouring(
            "colouring does not match the facets".into(),
        ));
    }
    Ok(generating_set(m, group)
        .iter()
        .all(|phi| induced_colour_permutation(m, colouring, phi).is_some()))
}

/// The colour-coded extension of `m` relative to `colouring`.
pub fn extension(m: &Maniplex, colouring: &Colouring) -> Result<Maniplex> {
    let l = colouring.num_colours();
    if l > MAX_LABEL_BITS {
        return Err(Error::LabelOverflow {
            bits: l,
            cap: MAX_LABEL_BITS,
        });
    }
    let facets = m.facets();
    if colouring.num_facets() != facets.num_faces {
        return Err(Error::InvalidColouring(
            "colouring does not match the facets".into(),
        ));
    }
    let n = m.rank();
    let width = 1usize << l;
    let total = m
        .num_flags()
        .checked_mul(width)
        .ok_or_else(|| Error::Unsupported("extension size overflows".into()))?;
    let mut adj = Vec::with_capacity(n + 1);
    for c in 0..n {
        let row = m.adjacency(c);
        adj.push(
            (0..total)
                .map(|f| row[f >> l] * width + (f & (width - 1)))
                .collect(),
        );
    }
    let flip: Vec<usize> = m
        .flags()
        .map(|u| 1 << (colouring.colour(facets.face_of[u]) - 1))
        .collect();
    adj.push((0..total).map(|f| f ^ flip[f >> l]).collect());
    let labels = (0..total).map(|f| (f & (width - 1)) as u32).collect();
    let letter = colouring.kind().letter();
    Maniplex::new(n + 1, adj)?
        .with_facet_labels(FacetLabels::new(l, labels)?)
        .map(|e| e.with_provenance(format!("ext{letter}({})", m.provenance())))
}

/// Splits a flag of an extension into `(u, x)`; the labels must follow the
/// extension index layout.
fn extension_layout(m_ext: &Maniplex) -> Result<usize> {
    let labels = m_ext.facet_labels().ok_or(Error::MissingFacetLabels)?;
    let l = labels.bits();
    let width = 1usize << l;
    if !m_ext.num_flags().is_multiple_of(width)
        || m_ext
            .flags()
            .any(|f| labels.label(f) as usize != f & (width - 1))
    {
        return Err(Error::Unsupported(
            "flags do not follow the extension layout u*2^l + x".into(),
        ));
    }
    Ok(l)
}

/// `tau_j: (u, x) -> (u, x^j)`.
pub fn tau(m_ext: &Maniplex, j: usize) -> Result<Automorphism> {
    let l = extension_layout(m_ext)?;
    if j == 0 || j > l {
        return Err(Error::Unsupported(format!("tau index {j} outside 1..={l}")));
    }
    let bit = 1usize << (j - 1);
    Automorphism::from_perm(m_ext, m_ext.flags().map(|f| f ^ bit).collect())
}

/// `(u, x) -> (u phi, phi(x))`, where `phi(x)` moves coordinate `c` to the
/// colour `phi` induces on `c`.
pub fn extend_automorphism(
    m: &Maniplex,
    colouring: &Colouring,
    phi: &Automorphism,
) -> Result<Automorphism> {
    phi.check(m)?;
    let perm = induced_colour_permutation(m, colouring, phi).ok_or(Error::NotInvariant)?;
    let l = colouring.num_colours();
    let width = 1usize << l;
    let moved: Vec<usize> = (0..width)
        .map(|x| {
            (1..=l)
                .filter(|&c| x & (1 << (c - 1)) != 0)
                .fold(0, |y, c| y | (1 << (perm[c] - 1)))
        })
        .collect();
    let total = m.num_flags() * width;
    Ok(Automorphism::from_perm_unchecked(
        (0..total)
            .map(|f| phi.apply(f >> l) * width + moved[f & (width - 1)])
            .collect(),
    ))
}

/// The extended weight on `extension(m, colouring)`: an `i`-edge with `i < n`
/// in facet `F_x` gets `sigma(x) w(projection)`, every `n`-edge gets 0.
pub fn extend_weight(
    m: &Maniplex,
    colouring: &Colouring,
    w: &WeightFunction,
) -> Result<WeightFunction> {
    w.check_against(m)?;
    let l = colouring.num_colours();
    if l > MAX_LABEL_BITS {
        return Err(Error::LabelOverflow {
            bits: l,
            cap: MAX_LABEL_BITS,
        });
    }
    let k = w.modulus();
    let width = 1usize << l;
    let total = m.num_flags() * width;
    let mut rows: Vec<Vec<usize>> = (0..m.rank())
        .map(|c| {
            (0..total)
                .map(|f| {
                    let x = w.weight(c, f >> l);
                    if parity((f & (width - 1)) as u32) > 0 {
                        x
                    } else {
                        (k - x) % k
                    }
                })
                .collect()
        })
        .collect();
    rows.push(vec![0; total]);
    WeightFunction::from_raw(k, rows)
}

/// Flags of facet `F_x` of an extension, in increasing order.
pub fn facet_flags(m_ext: &Maniplex, x: u32) -> Result<Vec<Flag>> {
    let labels = m_ext.facet_labels().ok_or(Error::MissingFacetLabels)?;
    Ok(m_ext.flags().filter(|&f| labels.label(f) == x).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_corner() -> Maniplex {
        let adj = (0..3)
            .map(|i| (0..8).map(|u| u ^ (1 << i)).collect())
            .collect();
        Maniplex::new(3, adj).unwrap()
    }

    #[test]
    fn bit_vector_basics() {
        let x = BitVector::new(0b101, 3).unwrap();
        assert_eq!(x.flip(2).bits(), 0b111);
        assert_eq!(x.flip(1).bits(), 0b100);
        assert_eq!(x.parity(), 1);
        assert_eq!(x.flip(3).parity(), -1);
        assert_eq!(x.antipode().bits(), 0b010);
        assert!(BitVector::new(0, 25).is_err());
        assert!(BitVector::new(8, 3).is_err());
    }

    #[test]
    fn colouring_must_be_surjective() {
        assert!(Colouring::from_raw(2, vec![1, 1], ColouringKind::Custom).is_err());
        assert!(Colouring::from_raw(2, vec![1, 3], ColouringKind::Custom).is_err());
        assert!(Colouring::from_raw(2, vec![2, 1], ColouringKind::Custom).is_ok());
    }

    #[test]
    fn trivial_colouring_doubles_the_flags() {
        let m = cube_corner();
        let one = Colouring::new(&m, 1, vec![1, 1], ColouringKind::Custom).unwrap();
        let e = extension(&m, &one).unwrap();
        assert_eq!(e.num_flags(), 16);
        assert_eq!(e.rank(), 4);
        assert!(e.validate().is_maniplex());
        assert_eq!(e.facets().num_faces, 2);
        // tau_1 swaps the two facets
        let t = tau(&e, 1).unwrap();
        let facets = e.facets();
        assert_ne!(facets.face_of[0], facets.face_of[t.apply(0)]);
        assert!(t.then(&t).is_identity());
        assert!(tau(&e, 2).is_err());
    }

    #[test]
    fn total_colouring_numbers_facets() {
        let m = cube_corner();
        assert_eq!(total_colouring(&m).colours(), &[1, 2]);
    }

    #[test]
    fn antipodal_needs_labels() {
        let m = cube_corner();
        assert_eq!(antipodal_colouring(&m), Err(Error::MissingFacetLabels));
        let one = Colouring::new(&m, 1, vec![1, 1], ColouringKind::Custom).unwrap();
        let e = extension(&m, &one).unwrap();
        let a = antipodal_colouring(&e).unwrap();
        assert_eq!(a.num_colours(), 1);
        assert_eq!(a.colours(), &[1, 1]);
    }

    #[test]
    fn extended_weight_zero_on_new_colour() {
        let m = cube_corner();
        let one = Colouring::new(&m, 1, vec![1, 1], ColouringKind::Custom).unwrap();
        let w = WeightFunction::per_colour(&m, 4, &[1, 0, 3]).unwrap();
        let e = extension(&m, &one).unwrap();
        let we = extend_weight(&m, &one, &w).unwrap();
        we.check_against(&e).unwrap();
        assert!(we.row(3).iter().all(|&x| x == 0));
        // label 1 is odd: weights negated
        assert_eq!(we.weight(0, 1), 3);
        assert_eq!(we.weight(2, 1), 1);
        assert_eq!(we.weight(0, 0), 1);
    }
}
