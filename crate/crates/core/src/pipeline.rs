//! The family construction: from a non-orientable regular map `M` with the
//! weight `vartheta`, extend the proper pair rank by rank through total (`T`)
//! and antipodal (`A`) colourings, and certify every cross-cover as an
//! unstable two-orbit fully transitive maniplex.
//!
//! A variant is identified by its word over `{T, A}`: letter `r - 3` names the
//! colouring used to go from rank `r - 1` to rank `r`. The seed is not an
//! extension and has no facet labels, so the first letter is always `T`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    build_seed, vartheta, vartheta_prime, verify_proper_pair_with, ProperPairReport, Seed,
};
use crate::error::{Error, Result};
use crate::extend::{
    antipodal_colouring, extend_weight, extension, total_colouring,
    verify_colouring_invariant_with, Colouring, MAX_LABEL_BITS,
};
use crate::maniplex::Maniplex;
use crate::symmetry::{
    are_isomorphic, automorphism_group, stability_with_base_order, symmetry_type_graph_of,
    type_label, AutGroup,
};
use crate::weights::{cross_cover, WeightFunction};

pub const DEFAULT_MAX_FLAGS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantSelection {
    All,
    AntipodalOnly,
}

impl FromStr for VariantSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(VariantSelection::All),
            "antipodal-only" => Ok(VariantSelection::AntipodalOnly),
            _ => Err(Error::Unsupported(format!(
                "unknown variant selection `{s}`"
            ))),
        }
    }
}

impl fmt::Display for VariantSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VariantSelection::All => "all",
            VariantSelection::AntipodalOnly => "antipodal-only",
        })
    }
}

/// The rank-3 weight the family starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseWeight {
    Vartheta,
    VarthetaPrime,
}

impl BaseWeight {
    pub fn build(self, m: &Maniplex) -> Result<WeightFunction> {
        match self {
            BaseWeight::Vartheta => vartheta(m),
            BaseWeight::VarthetaPrime => vartheta_prime(m),
        }
    }

    /// Semi-edge colours of the two-orbit symmetry type expected at `rank`.
    pub fn expected_semi_edges(self, rank: usize) -> Vec<usize> {
        let base: &[usize] = match self {
            BaseWeight::Vartheta => &[1],
            BaseWeight::VarthetaPrime => &[0, 2],
        };
        base.iter().copied().chain(3..rank).collect()
    }

    pub fn expected_label(self, rank: usize) -> String {
        type_label(rank, &self.expected_semi_edges(rank))
    }
}

impl FromStr for BaseWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vartheta" => Ok(BaseWeight::Vartheta),
            "vartheta-prime" => Ok(BaseWeight::VarthetaPrime),
            _ => Err(Error::Unsupported(format!("unknown base weight `{s}`"))),
        }
    }
}

impl fmt::Display for BaseWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseWeight::Vartheta => "vartheta",
            BaseWeight::VarthetaPrime => "vartheta-prime",
        })
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub seed: Seed,
    pub max_rank: usize,
    pub variants: VariantSelection,
    /// Cross-covers with more flags are skipped.
    pub max_flags: usize,
    pub base_weight: BaseWeight,
    /// Keep every built cross-cover in [`PipelineRun::covers`].
    pub keep_covers: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: Seed::Hemicube,
            max_rank: 4,
            variants: VariantSelection::All,
            max_flags: DEFAULT_MAX_FLAGS,
            base_weight: BaseWeight::Vartheta,
            keep_covers: false,
        }
    }
}

/// Variant words at `rank`, in lexicographic order (`A < T`).
pub fn variant_words(rank: usize, selection: VariantSelection) -> Vec<String> {
    if rank <= 3 {
        return vec![String::new()];
    }
    let free = rank - 4;
    let mut words: Vec<String> = match selection {
        VariantSelection::AntipodalOnly => vec![format!("T{}", "A".repeat(free))],
        VariantSelection::All => (0..1usize << free)
            .map(|bits| {
                let tail: String = (0..free)
                    .map(|i| {
                        if bits >> (free - 1 - i) & 1 == 1 {
                            'T'
                        } else {
                            'A'
                        }
                    })
                    .collect();
                format!("T{tail}")
            })
            .collect(),
    };
    words.sort();
    words
}

/// `2^(rank - 4)` variants for `rank >= 4` with every choice, one otherwise.
pub fn expected_variant_count(rank: usize, selection: VariantSelection) -> usize {
    match selection {
        VariantSelection::All if rank >= 4 => 1 << (rank - 4),
        _ => 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "CERTIFIED")]
    Certified,
    #[serde(rename = "FAILED")]
    Failed,
    #[serde(rename = "SKIPPED(budget)")]
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Certified => "CERTIFIED",
            Status::Failed => "FAILED",
            Status::Skipped => "SKIPPED(budget)",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantReport {
    pub rank: usize,
    pub word: String,
    pub status: Status,
    /// Failed certification checks, or the reason for skipping.
    pub notes: Vec<String>,
    /// Colours in the last extension step; `None` at rank 3.
    pub label_bits: Option<usize>,
    /// Flag counts; predicted for skipped variants, `None` when unknown.
    pub extension_flags: Option<usize>,
    pub extension_facets: Option<usize>,
    pub cover_flags: Option<usize>,
    pub double_cover_flags: Option<usize>,
    pub colouring_invariant: Option<bool>,
    pub proper_pair: Option<ProperPairReport>,
    pub cover_maniplex: Option<bool>,
    pub cover_orientable: Option<bool>,
    pub cover_facets: Option<usize>,
    pub orbits: Option<usize>,
    pub stg_label: Option<String>,
    pub expected_label: String,
    pub face_transitive: Option<Vec<bool>>,
    pub fully_transitive: Option<bool>,
    pub aut_order_extension: Option<usize>,
    pub aut_order_cover: Option<usize>,
    pub aut_order_double_cover: Option<usize>,
    pub stable: Option<bool>,
    pub wall_clock_ms: u128,
}

impl VariantReport {
    fn skeleton(
        rank: usize,
        word: &str,
        extension_flags: Option<usize>,
        modulus: usize,
        expected_label: String,
    ) -> Self {
        let cover_flags = extension_flags.and_then(|f| f.checked_mul(modulus));
        VariantReport {
            rank,
            word: word.to_string(),
            status: Status::Skipped,
            notes: Vec::new(),
            label_bits: None,
            extension_flags,
            extension_facets: None,
            cover_flags,
            double_cover_flags: cover_flags.and_then(|f| f.checked_mul(2)),
            colouring_invariant: None,
            proper_pair: None,
            cover_maniplex: None,
            cover_orientable: None,
            cover_facets: None,
            orbits: None,
            stg_label: None,
            expected_label,
            face_transitive: None,
            fully_transitive: None,
            aut_order_extension: None,
            aut_order_cover: None,
            aut_order_double_cover: None,
            stable: None,
            wall_clock_ms: 0,
        }
    }

    fn word_or_seed(&self) -> &str {
        if self.word.is_empty() {
            "-"
        } else {
            &self.word
        }
    }
}

/// How two variants of the same rank were told apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distinction {
    FacetCount,
    IsomorphismSearch,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub first: String,
    pub second: String,
    pub method: Distinction,
    pub non_isomorphic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub expected_variants: usize,
    pub variants: Vec<VariantReport>,
    pub non_isomorphism: Vec<PairCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub seed: Seed,
    pub base_weight: BaseWeight,
    pub max_rank: usize,
    pub variants: VariantSelection,
    pub max_flags: usize,
    pub ranks: Vec<RankReport>,
}

impl PipelineReport {
    pub fn entries(&self) -> impl Iterator<Item = &VariantReport> {
        self.ranks.iter().flat_map(|r| r.variants.iter())
    }

    pub fn variant(&self, rank: usize, word: &str) -> Option<&VariantReport> {
        self.entries().find(|v| v.rank == rank && v.word == word)
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries().filter(|v| v.status == status).count()
    }

    /// No variant failed and every built pair of variants was distinguished.
    /// Skipped variants do not count against the verdict.
    pub fn passed(&self) -> bool {
        self.count(Status::Failed) == 0
            && self
                .ranks
                .iter()
                .all(|r| r.non_isomorphism.iter().all(|p| p.non_isomorphic))
    }
}

fn opt<T: fmt::Display>(x: &Option<T>) -> String {
    x.as_ref()
        .map_or_else(|| "?".to_string(), |v| v.to_string())
}

fn yes_no(x: Option<bool>) -> &'static str {
    match x {
        Some(true) => "yes",
        Some(false) => "no",
        None => "?",
    }
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "theorem1 seed={} weight={} max-rank={} variants={} max-flags={}",
            self.seed, self.base_weight, self.max_rank, self.variants, self.max_flags
        )?;
        for rank in &self.ranks {
            writeln!(
                f,
                "rank {}: {} variant(s), expected {}",
                rank.rank,
                rank.variants.len(),
                rank.expected_variants
            )?;
            for v in &rank.variants {
                write!(
                    f,
                    "  [{}] {} extension={} cover={} double={}",
                    v.word_or_seed(),
                    v.status,
                    opt(&v.extension_flags),
                    opt(&v.cover_flags),
                    opt(&v.double_cover_flags)
                )?;
                if v.status != Status::Skipped {
                    write!(
                        f,
                        " facets={} orbits={} stg={} expected={} fully-transitive={} stable={} |Aut|={}/{}/{} {}ms",
                        opt(&v.extension_facets),
                        opt(&v.orbits),
                        opt(&v.stg_label),
                        v.expected_label,
                        yes_no(v.fully_transitive),
                        yes_no(v.stable),
                        opt(&v.aut_order_extension),
                        opt(&v.aut_order_cover),
                        opt(&v.aut_order_double_cover),
                        v.wall_clock_ms
                    )?;
                }
                writeln!(f)?;
                for note in &v.notes {
                    writeln!(f, "      {note}")?;
                }
            }
            for p in &rank.non_isomorphism {
                let method = match p.method {
                    Distinction::FacetCount => "facet count",
                    Distinction::IsomorphismSearch => "isomorphism search",
                };
                writeln!(
                    f,
                    "  {} vs {}: {} ({method})",
                    p.first,
                    p.second,
                    if p.non_isomorphic {
                        "non-isomorphic"
                    } else {
                        "ISOMORPHIC"
                    }
                )?;
            }
        }
        writeln!(
            f,
            "summary: {} certified, {} failed, {} skipped",
            self.count(Status::Certified),
            self.count(Status::Failed),
            self.count(Status::Skipped)
        )
    }
}

/// A built proper pair, kept to extend at the next rank.
struct Stage {
    maniplex: Maniplex,
    weight: WeightFunction,
    group: AutGroup,
}

pub struct PipelineRun {
    pub report: PipelineReport,
    /// Cross-covers keyed by `(rank, word)`; filled when
    /// [`PipelineConfig::keep_covers`] is set.
    pub covers: BTreeMap<(usize, String), Maniplex>,
}

pub fn theorem1(config: &PipelineConfig) -> Result<PipelineReport> {
    Ok(run(config)?.report)
}

pub fn run(config: &PipelineConfig) -> Result<PipelineRun> {
    if config.max_rank < 3 {
        return Err(Error::Unsupported("the pipeline starts at rank 3".into()));
    }
    let seed = build_seed(config.seed)?;
    let w = config.base_weight.build(&seed)?;
    let k = w.modulus();

    let mut covers = BTreeMap::new();
    let mut ranks = Vec::new();
    let mut stages: BTreeMap<String, Stage> = BTreeMap::new();

    for rank in 3..=config.max_rank {
        let words = variant_words(rank, config.variants);
        let expected = config.base_weight.expected_label(rank);
        let results: Vec<(VariantReport, Option<Stage>, Option<Maniplex>)> = words
            .par_iter()
            .map(|word| -> Result<_> {
                let start = Instant::now();
                if rank == 3 {
                    let mut report = VariantReport::skeleton(
                        rank,
                        word,
                        Some(seed.num_flags()),
                        k,
                        expected.clone(),
                    );
                    let out = certify(&mut report, seed.clone(), w.clone(), config)?;
                    report.wall_clock_ms = start.elapsed().as_millis();
                    return Ok((report, out.0, out.1));
                }
                let (parent_word, letter) = word.split_at(word.len() - 1);
                let Some(parent) = stages.get(parent_word) else {
                    let mut report = VariantReport::skeleton(rank, word, None, k, expected.clone());
                    report
                        .notes
                        .push(format!("parent variant `{parent_word}` was not built"));
                    return Ok((report, None, None));
                };
                let colouring = match letter {
                    "T" => total_colouring(&parent.maniplex),
                    _ => antipodal_colouring(&parent.maniplex)?,
                };
                let bits = colouring.num_colours();
                let predicted = 1usize
                    .checked_shl(bits as u32)
                    .and_then(|width| parent.maniplex.num_flags().checked_mul(width));
                let mut report =
                    VariantReport::skeleton(rank, word, predicted, k, expected.clone());
                report.label_bits = Some(bits);
                if bits > MAX_LABEL_BITS {
                    report.notes.push(format!(
                        "{bits} label bits exceed the cap of {MAX_LABEL_BITS}"
                    ));
                    return Ok((report, None, None));
                }
                if report.cover_flags.is_none_or(|f| f > config.max_flags) {
                    report.notes.push(format!(
                        "cross-cover would have {} flags, budget is {}",
                        opt(&report.cover_flags),
                        config.max_flags
                    ));
                    return Ok((report, None, None));
                }
                let (m, wm) = extend_stage(parent, &colouring, &mut report)?;
                let out = certify(&mut report, m, wm, config)?;
                report.wall_clock_ms = start.elapsed().as_millis();
                Ok((report, out.0, out.1))
            })
            .collect::<Result<_>>()?;

        let mut variants = Vec::new();
        let mut next = BTreeMap::new();
        let mut built: Vec<(String, usize, Maniplex)> = Vec::new();
        for (report, stage, cover) in results {
            if let Some(stage) = stage {
                next.insert(report.word.clone(), stage);
            }
            if let (Some(cover), Some(facets)) = (cover, report.cover_facets) {
                built.push((report.word.clone(), facets, cover));
            }
            variants.push(report);
        }
        let non_isomorphism = distinguish(&built);
        if config.keep_covers {
            for (word, _, cover) in built {
                covers.insert((rank, word), cover);
            }
        }
        ranks.push(RankReport {
            rank,
            expected_variants: expected_variant_count(rank, config.variants),
            variants,
            non_isomorphism,
        });
        stages = next;
    }

    Ok(PipelineRun {
        report: PipelineReport {
            seed: config.seed,
            base_weight: config.base_weight,
            max_rank: config.max_rank,
            variants: config.variants,
            max_flags: config.max_flags,
            ranks,
        },
        covers,
    })
}

fn extend_stage(
    parent: &Stage,
    colouring: &Colouring,
    report: &mut VariantReport,
) -> Result<(Maniplex, WeightFunction)> {
    let invariant = verify_colouring_invariant_with(&parent.maniplex, colouring, &parent.group)?;
    report.colouring_invariant = Some(invariant);
    if !invariant {
        report
            .notes
            .push("colouring is not invariant under the automorphism group".into());
    }
    let m = extension(&parent.maniplex, colouring)?;
    let w = extend_weight(&parent.maniplex, colouring, &parent.weight)?;
    Ok((m, w))
}

/// Runs every check on one proper pair and its cross-cover, filling `report`.
/// Returns the stage for the next rank (when the pair is proper) and the
/// cover (when it is a maniplex).
fn certify(
    report: &mut VariantReport,
    m: Maniplex,
    w: WeightFunction,
    config: &PipelineConfig,
) -> Result<(Option<Stage>, Option<Maniplex>)> {
    let rank = m.rank();
    report.extension_flags = Some(m.num_flags());
    report.extension_facets = Some(m.facets().num_faces);

    let group = automorphism_group(&m);
    report.aut_order_extension = Some(group.order);
    let pair = verify_proper_pair_with(&m, &w, &group)?;
    let proper = pair.verdict;
    report.proper_pair = Some(pair);

    let cover = cross_cover(&m, &w)?;
    report.cover_flags = Some(cover.num_flags());
    report.double_cover_flags = Some(2 * cover.num_flags());
    let valid = cover.validate().is_maniplex();
    let orientable = cover.is_orientable();
    report.cover_maniplex = Some(valid);
    report.cover_orientable = Some(orientable);

    let mut failures = Vec::new();
    if report.colouring_invariant == Some(false) {
        failures.push("colouring not invariant".to_string());
    }
    if !proper {
        failures.push("not a proper pair".to_string());
    }
    if !valid || orientable {
        failures.push("cross-cover is not a non-orientable maniplex".to_string());
        report.status = Status::Failed;
        report.notes.extend(failures);
        return Ok((None, None));
    }

    report.cover_facets = Some(cover.facets().num_faces);
    let cover_group = automorphism_group(&cover);
    report.aut_order_cover = Some(cover_group.order);
    report.orbits = Some(cover_group.num_orbits);
    let stg = symmetry_type_graph_of(&cover, &cover_group);
    report.stg_label = stg.label();
    let transitivity = stg.face_transitivity();
    report.fully_transitive = Some(transitivity.fully);
    report.face_transitive = Some(transitivity.per_colour);
    let verdict = stability_with_base_order(&cover, cover_group.order)?;
    report.aut_order_double_cover = Some(verdict.aut_order_cover);
    report.stable = Some(verdict.stable);

    if cover_group.num_orbits != 2 {
        failures.push(format!(
            "{} flag orbits, expected 2",
            cover_group.num_orbits
        ));
    }
    if report.stg_label.as_deref() != Some(report.expected_label.as_str()) {
        failures.push(format!(
            "symmetry type {}, expected {}",
            opt(&report.stg_label),
            report.expected_label
        ));
    }
    if config.base_weight == BaseWeight::Vartheta && !transitivity.fully {
        failures.push("not fully transitive".to_string());
    }
    if verdict.stable {
        failures.push("cross-cover is stable".to_string());
    }
    report.status = if failures.is_empty() {
        Status::Certified
    } else {
        Status::Failed
    };
    report.notes.extend(failures);

    let stage = proper.then_some(Stage {
        maniplex: m,
        weight: w,
        group,
    });
    debug_assert_eq!(cover.rank(), rank);
    Ok((stage, Some(cover)))
}

/// Pairwise non-isomorphism of the covers built at one rank.
fn distinguish(built: &[(String, usize, Maniplex)]) -> Vec<PairCheck> {
    let mut out = Vec::new();
    for (a, (wa, fa, ca)) in built.iter().enumerate() {
        for (wb, fb, cb) in &built[a + 1..] {
            let check = if fa != fb {
                PairCheck {
                    first: wa.clone(),
                    second: wb.clone(),
                    method: Distinction::FacetCount,
                    non_isomorphic: true,
                }
            } else {
                PairCheck {
                    first: wa.clone(),
                    second: wb.clone(),
                    method: Distinction::IsomorphismSearch,
                    non_isomorphic: !are_isomorphic(ca, cb),
                }
            };
            out.push(check);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_start_with_total() {
        assert_eq!(variant_words(3, VariantSelection::All), vec![String::new()]);
        assert_eq!(variant_words(4, VariantSelection::All), vec!["T"]);
        assert_eq!(variant_words(5, VariantSelection::All), vec!["TA", "TT"]);
        assert_eq!(
            variant_words(6, VariantSelection::All),
            vec!["TAA", "TAT", "TTA", "TTT"]
        );
        assert_eq!(
            variant_words(6, VariantSelection::AntipodalOnly),
            vec!["TAA"]
        );
        for r in 3..12 {
            assert_eq!(
                variant_words(r, VariantSelection::All).len(),
                expected_variant_count(r, VariantSelection::All)
            );
        }
    }

    #[test]
    fn expected_labels() {
        assert_eq!(BaseWeight::Vartheta.expected_label(3), "2^3_{1}");
        assert_eq!(BaseWeight::Vartheta.expected_label(5), "2^5_{1,3,4}");
        assert_eq!(BaseWeight::VarthetaPrime.expected_label(3), "2^3_{0,2}");
    }

    #[test]
    fn rank_three_only() {
        let config = PipelineConfig {
            max_rank: 3,
            ..PipelineConfig::default()
        };
        let report = theorem1(&config).unwrap();
        let v = report.variant(3, "").unwrap();
        assert_eq!(v.status, Status::Certified, "{report}");
        assert_eq!(v.cover_flags, Some(96));
        assert!(report.passed());
    }

    #[test]
    fn budget_skips_are_entries() {
        let config = PipelineConfig {
            max_rank: 5,
            max_flags: 1000,
            ..PipelineConfig::default()
        };
        let report = theorem1(&config).unwrap();
        assert_eq!(report.variant(4, "T").unwrap().status, Status::Certified);
        for word in ["TA", "TT"] {
            let v = report.variant(5, word).unwrap();
            assert_eq!(v.status, Status::Skipped);
        }
        assert_eq!(report.variant(5, "TT").unwrap().cover_flags, Some(196_608));
        assert!(report.passed());
    }
}
