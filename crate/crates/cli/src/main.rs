use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use maniplex::catalog::{build_seed, Seed};
use maniplex::extend::{
    antipodal_colouring, extend_weight, extension, total_colouring, verify_colouring_invariant,
};
use maniplex::io::{parse_clr, parse_mpx, parse_wgt_for, write_clr, write_mpx, write_wgt};
use maniplex::pipeline::{self, BaseWeight, PipelineConfig, VariantSelection, DEFAULT_MAX_FLAGS};
use maniplex::symmetry::{automorphism_group, stability, symmetry_type_graph};
use maniplex::weights::cross_cover;
use maniplex::Maniplex;

/// Maniplexes as edge-coloured flag graphs.
#[derive(Parser)]
#[command(name = "maniplex", version)]
struct Cli {
    /// Also write a JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the maniplex axioms; exit 1 if any fails.
    Validate { file: PathBuf },
    /// Flags, faces, orientability, type and automorphism group.
    Info { file: PathBuf },
    /// Face counts and sizes for every colour.
    Faces { file: PathBuf },
    /// Symmetry-type graph.
    Stg { file: PathBuf },
    /// Compare the automorphism group with that of the double cover.
    Stability { file: PathBuf },
    /// Cross-cover by a weight function.
    Cross {
        file: PathBuf,
        weights: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Colour-coded extension.
    Extend {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ColouringArg::Total)]
        colouring: ColouringArg,
        /// Colouring in CLR format, for `--colouring file`.
        #[arg(long, required_if_eq("colouring", "file"))]
        clr: Option<PathBuf>,
        /// Weight function to extend alongside.
        #[arg(long, requires = "weights_output")]
        weights: Option<PathBuf>,
        #[arg(long)]
        weights_output: Option<PathBuf>,
        /// Write the colouring used in CLR format.
        #[arg(long)]
        colouring_output: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Canonical double cover.
    Double {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seed maps.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Build and certify the family of unstable two-orbit maniplexes.
    Theorem1 {
        #[arg(long, default_value = "hemicube")]
        seed: String,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value = "all")]
        variants: String,
        #[arg(long, default_value_t = DEFAULT_MAX_FLAGS)]
        max_flags: usize,
        #[arg(long, default_value = "vartheta")]
        weight: String,
        /// Write every built cross-cover here as `rank<r>_<word>.mpx`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Build {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a rank-3 weight (`vartheta` or `vartheta-prime`).
        #[arg(long, requires = "weights_output")]
        weight: Option<String>,
        #[arg(long)]
        weights_output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColouringArg {
    Total,
    Antipodal,
    File,
}

/// A verdict for the exit code plus a JSON report.
struct Outcome {
    pass: bool,
    report: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command).and_then(|out| {
        if let Some(path) = &cli.json {
            let text = serde_json::to_string_pretty(&out.report)?;
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(out.pass)
    }) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("MANIPLEX_THREADS") {
        let n: usize = value.parse().with_context(|| {
            format!("MANIPLEX_THREADS must be a positive integer, got `{value}`")
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Maniplex> {
    parse_mpx(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Prints validation failures; true iff `m` is a maniplex.
fn require_maniplex(m: &Maniplex) -> bool {
    let report = m.validate();
    for failure in &report.failures {
        println!("invalid: {failure}");
    }
    report.is_maniplex()
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Validate { file } => {
            let m = load(&file)?;
            let report = m.validate();
            println!("involution: {}", report.involution);
            println!("fixed-point-free: {}", report.fixed_point_free);
            println!("connected: {}", report.connected);
            println!("string property: {}", report.string_property);
            if let Some(labels) = report.facet_labels {
                println!("facet labels: {labels}");
            }
            for failure in &report.failures {
                println!("  {failure}");
            }
            let pass = report.is_maniplex();
            println!("{}", if pass { "valid" } else { "invalid" });
            Ok(Outcome {
                pass,
                report: serde_json::to_value(&report)?,
            })
        }
        Command::Info { file } => {
            let m = load(&file)?;
            if !require_maniplex(&m) {
                return Ok(invalid());
            }
            let faces: Vec<usize> = (0..m.rank())
                .map(|i| m.faces(i).map(|f| f.num_faces))
                .collect::<Result<_, _>>()?;
            let map_type = if m.rank() == 3 {
                m.schlafli_type()?
            } else {
                None
            };
            let group = automorphism_group(&m);
            println!("provenance: {}", m.provenance());
            println!("rank: {}", m.rank());
            println!("flags: {}", m.num_flags());
            println!("orientable: {}", m.is_orientable());
            println!("faces: {faces:?}");
            if let Some(t) = map_type {
                println!("type: {t}");
            }
            if let Some(labels) = m.facet_labels() {
                println!("facet label bits: {}", labels.bits());
            }
            println!("|Aut|: {}", group.order);
            println!("flag orbits: {}", group.num_orbits);
            Ok(Outcome {
                pass: true,
                report: json!({
                    "provenance": m.provenance(),
                    "rank": m.rank(),
                    "flags": m.num_flags(),
                    "orientable": m.is_orientable(),
                    "faces": faces,
                    "type": map_type,
                    "facet_label_bits": m.facet_labels().map(|l| l.bits()),
                    "aut_order": group.order,
                    "orbits": group.num_orbits,
                }),
            })
        }
        Command::Faces { file } => {
            let m = load(&file)?;
            if !require_maniplex(&m) {
                return Ok(invalid());
            }
            let mut rows = Vec::new();
            for i in 0..m.rank() {
                let faces = m.faces(i)?;
                let sizes = faces.sizes();
                println!("{i}-faces: {} sizes {:?}", faces.num_faces, sizes);
                rows.push(json!({ "colour": i, "count": faces.num_faces, "sizes": sizes }));
            }
            Ok(Outcome {
                pass: true,
                report: json!({ "faces": rows }),
            })
        }
        Command::Stg { file } => {
            let m = load(&file)?;
            if !require_maniplex(&m) {
                return Ok(invalid());
            }
            let stg = symmetry_type_graph(&m);
            let transitivity = stg.face_transitivity();
            print!("{stg}");
            println!("fully transitive: {}", transitivity.fully);
            Ok(Outcome {
                pass: true,
                report: json!({
                    "orbits": stg.num_orbits,
                    "orbit_of": stg.orbit_of,
                    "edges": stg.edges,
                    "label": stg.label(),
                    "face_transitive": transitivity.per_colour,
                    "fully_transitive": transitivity.fully,
                }),
            })
        }
        Command::Stability { file } => {
            let m = load(&file)?;
            if !require_maniplex(&m) {
                return Ok(invalid());
            }
            let verdict = stability(&m)?;
            println!("|Aut(M)|: {}", verdict.aut_order_base);
            println!("|Aut(double cover)|: {}", verdict.aut_order_cover);
            println!("{}", if verdict.stable { "stable" } else { "unstable" });
            Ok(Outcome {
                pass: true,
                report: serde_json::to_value(verdict)?,
            })
        }
        Command::Cross {
            file,
            weights,
            output,
        } => {
            let m = load(&file)?;
            let w = parse_wgt_for(&read(&weights)?, &m)
                .with_context(|| format!("parsing {}", weights.display()))?;
            let cover = cross_cover(&m, &w)?;
            emit(output.as_deref(), &write_mpx(&cover))?;
            let report = cover.validate();
            if output.is_some() {
                println!(
                    "cross-cover: {} flags, maniplex: {}",
                    cover.num_flags(),
                    report.is_maniplex()
                );
            }
            Ok(Outcome {
                pass: true,
                report: json!({ "flags": cover.num_flags(), "validation": report }),
            })
        }
        Command::Extend {
            file,
            colouring,
            clr,
            weights,
            weights_output,
            colouring_output,
            output,
        } => {
            let m = load(&file)?;
            let c = match colouring {
                ColouringArg::Total => total_colouring(&m),
                ColouringArg::Antipodal => antipodal_colouring(&m)?,
                ColouringArg::File => {
                    let path = clr.expect("clap enforces --clr");
                    parse_clr(&read(&path)?)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
            };
            let ext = extension(&m, &c)?;
            emit(output.as_deref(), &write_mpx(&ext))?;
            if let Some(path) = colouring_output {
                emit(Some(&path), &write_clr(&c))?;
            }
            if let (Some(win), Some(wout)) = (weights, weights_output) {
                let w = parse_wgt_for(&read(&win)?, &m)
                    .with_context(|| format!("parsing {}", win.display()))?;
                emit(Some(&wout), &write_wgt(&extend_weight(&m, &c, &w)?))?;
            }
            let invariant = if m.validate().is_maniplex() {
                Some(verify_colouring_invariant(&m, &c)?)
            } else {
                None
            };
            if output.is_some() {
                println!(
                    "extension: {} flags, {} colours",
                    ext.num_flags(),
                    c.num_colours()
                );
                if let Some(inv) = invariant {
                    println!("colouring invariant: {inv}");
                }
            }
            Ok(Outcome {
                pass: true,
                report: json!({
                    "flags": ext.num_flags(),
                    "colours": c.num_colours(),
                    "colouring": c.colours(),
                    "colouring_invariant": invariant,
                }),
            })
        }
        Command::Double { file, output } => {
            let m = load(&file)?;
            let d = m.double_cover();
            emit(output.as_deref(), &write_mpx(&d))?;
            Ok(Outcome {
                pass: true,
                report: json!({ "flags": d.num_flags() }),
            })
        }
        Command::Catalog { command } => match command {
            CatalogCommand::List => {
                let mut rows = Vec::new();
                for seed in Seed::ALL {
                    let spec = seed.spec();
                    println!(
                        "{:<18} type {} flags {}",
                        spec.name, spec.map_type, spec.num_flags
                    );
                    rows.push(json!({ "name": spec.name, "type": spec.map_type, "flags": spec.num_flags }));
                }
                Ok(Outcome {
                    pass: true,
                    report: json!({ "seeds": rows }),
                })
            }
            CatalogCommand::Build {
                name,
                output,
                weight,
                weights_output,
            } => {
                let seed: Seed = name.parse()?;
                let m = build_seed(seed)?;
                emit(output.as_deref(), &write_mpx(&m))?;
                if let (Some(weight), Some(path)) = (weight, weights_output) {
                    let w = weight.parse::<BaseWeight>()?.build(&m)?;
                    emit(Some(&path), &write_wgt(&w))?;
                }
                Ok(Outcome {
                    pass: true,
                    report: json!({ "name": seed.name(), "flags": m.num_flags() }),
                })
            }
        },
        Command::Theorem1 {
            seed,
            max_rank,
            variants,
            max_flags,
            weight,
            out_dir,
        } => {
            if max_rank < 3 {
                bail!("--max-rank must be at least 3");
            }
            let config = PipelineConfig {
                seed: seed.parse()?,
                max_rank,
                variants: variants.parse::<VariantSelection>()?,
                max_flags,
                base_weight: weight.parse()?,
                keep_covers: out_dir.is_some(),
            };
            let run = pipeline::run(&config)?;
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for ((rank, word), cover) in &run.covers {
                    let path = dir.join(format!(
                        "rank{rank}_{}.mpx",
                        if word.is_empty() { "seed" } else { word }
                    ));
                    emit(Some(&path), &write_mpx(cover))?;
                }
            }
            print!("{}", run.report);
            Ok(Outcome {
                pass: run.report.passed(),
                report: serde_json::to_value(&run.report)?,
            })
        }
    }
}

fn invalid() -> Outcome {
    println!("invalid");
    Outcome {
        pass: false,
        report: json!({ "valid": false }),
    }
}
