//! `qmat`: command-line access to the q-matroid library. One verb per
//! library-facing operation; JSON output by default (CSV for the bounds
//! table), byte-deterministic for fixed inputs. Exit codes: 0 on success,
//! 1 on domain errors, 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::de::DeserializeOwned;

use qmatroid::bounds::{asymptotic_table, upper_bound_r_all_summed, BoundRow, LogValue};
use qmatroid::cdc::{cdc_to_paving, lifted_mrd};
use qmatroid::field::FieldSpec;
use qmatroid::json::{
    BoundRowJson, BoundsTableJson, CensusJson, CollectionJson, DistanceJson, GeneratorJson,
    PatternJson, QMatroidJson, ReportJson, SearchJson, StructureJson, SweepJson, FORMAT_TAG,
};
use qmatroid::lattice::{enumerate_grassmannian, gaussian_binomial, LatticeIndex};
use qmatroid::qmatroid::{enumerate_qmatroids, RankTable};
use qmatroid::repr::{qmatroid_from_generator, search_representation};
use qmatroid::zeropattern::{
    pattern_of_qmatroid, zero_pattern_bound, zero_pattern_bound_linear, DetSystem,
};
use qmatroid::{Error, Result};

#[derive(Parser)]
#[command(name = "qmat", version, about = "Exact q-matroid computations", max_term_width = 100)]
struct Cli {
    /// Worker threads for parallel kernels. The default of 1 keeps every
    /// output byte-stable; higher counts change timings only, never bytes.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Reserved for verbs with randomized search. No current verb draws
    /// randomness, so every run is reproducible with or without it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format. CSV is only available for bounds-table.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Verb {
    /// Gaussian binomial [n k]_q, printed as an exact decimal integer.
    Qbinom {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        n: u64,
        #[arg(short)]
        k: u64,
    },
    /// List the k-dimensional subspaces of F_q^n in canonical order.
    EnumerateSubspaces {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
    },
    /// Rank table of the uniform q-matroid U_{k,n} over F_q.
    Uniform {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: u32,
    },
    /// Rank table of the paving q-matroid defined by a subspace collection.
    Paving {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check the three rank axioms; reports the first violation if any.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Rank table of the dual q-matroid.
    Dual {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Bases, circuits, loops, and the paving property of a rank table.
    Structure {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Rank table induced by a generator matrix over an extension field.
    FromGenerator {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Search for a representation of a rank table over F_{q^m}, m <= m-max.
    SearchRep {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "m-max")]
        m_max: u32,
    },
    /// Lifted MRD constant dimension code with parameters (q, n, k, d).
    LiftedMrd {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(long = "d")]
        d: usize,
    },
    /// Minimum subspace distance of a constant dimension code.
    CdcDistance {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Paving q-matroid induced by a constant dimension code.
    CdcToPaving {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Sweep all evaluation points over F_{q^m} and count zero patterns.
    ZeroSweep {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        m: u32,
        /// Include the attained patterns themselves, in canonical order.
        #[arg(long)]
        patterns: bool,
    },
    /// Zero pattern of a q-matroid at its own rank.
    PatternOf {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Lower/upper bound table for n = 4..=N, exact exponents vs log2 scale.
    BoundsTable {
        #[arg(short)]
        q: u64,
        /// Largest n tabulated (rows run from 4 to this value).
        #[arg(short)]
        n: u64,
        /// Sum the per-rank upper bounds over k instead of using the
        /// uniform-majorized closed form. Far weaker for large n; off by
        /// default.
        #[arg(long)]
        sum_over_k: bool,
    },
    /// Count rank-1 q-matroids on F_q^n by exhaustive enumeration.
    Rank1Census {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        n: usize,
    },
    /// Enumerate all q-matroids on F_q^n of rank at most k.
    EnumerateQmatroids {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: u32,
        /// Include every rank table, not just the count.
        #[arg(long)]
        full: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if cli.format == Format::Csv && !matches!(cli.verb, Verb::BoundsTable { .. }) {
        eprintln!("error: csv output is only available for bounds-table");
        return ExitCode::from(2);
    }

    #[cfg(feature = "parallel")]
    {
        if let Err(e) =
            rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = cli.threads;
    }

    match run(&cli) {
        Ok(output) => match write_out(&cli.out, &output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn write_out(path: &Option<PathBuf>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, format!("{body}\n")),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{body}").and_then(|()| stdout.flush()) {
                // A closed pipe downstream (e.g. `qmat ... | head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other,
            }
        }
    }
}

fn load<T: DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&raw)?)
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}

fn load_table(path: &PathBuf) -> Result<RankTable> {
    load::<QMatroidJson>(path)?.to_table()
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.verb {
        Verb::Qbinom { q, n, k } => Ok(gaussian_binomial(*n, *k, *q)?.to_string()),

        Verb::EnumerateSubspaces { q, n, k } => {
            let field = FieldSpec::from_order(*q)?;
            let subs = enumerate_grassmannian(&field, *n, *k)?;
            json(&CollectionJson::of_subspaces(&field, *n, *k, &subs)?)
        }

        Verb::Uniform { q, n, k } => {
            let field = FieldSpec::from_order(*q)?;
            let index = LatticeIndex::build(&field, *n)?;
            json(&QMatroidJson::of(&RankTable::uniform(index, *k)?))
        }

        Verb::Paving { input } => {
            let doc: CollectionJson = load(input)?;
            let (field, members) = doc.to_subspaces()?;
            let index = LatticeIndex::build(&field, doc.n as usize)?;
            let t = RankTable::paving_from_collection(index, &members, doc.k as u32)?;
            json(&QMatroidJson::of(&t))
        }

        Verb::Check { input } => json(&ReportJson::of(&load_table(input)?.check_axioms())),

        Verb::Dual { input } => json(&QMatroidJson::of(&load_table(input)?.dualize()?)),

        Verb::Structure { input } => {
            let t = load_table(input)?;
            let s = t.derived_structure();
            json(&StructureJson::of(&t, &s))
        }

        Verb::FromGenerator { input } => {
            let g = load::<GeneratorJson>(input)?.to_generator()?;
            json(&QMatroidJson::of(&qmatroid_from_generator(&g)?))
        }

        Verb::SearchRep { input, m_max } => {
            let t = load_table(input)?;
            let witness = search_representation(&t, *m_max)?;
            json(&SearchJson::of(witness.as_ref())?)
        }

        Verb::LiftedMrd { q, n, k, d } => {
            let c = lifted_mrd(*q, *n, *k, *d)?;
            json(&CollectionJson::of(&c)?)
        }

        Verb::CdcDistance { input } => {
            let c = load::<CollectionJson>(input)?.to_cdc()?;
            json(&DistanceJson {
                format: FORMAT_TAG.into(),
                q: c.field().order(),
                n: c.n() as u64,
                k: c.k() as u64,
                size: c.len() as u64,
                distance: c.min_subspace_distance()? as u64,
            })
        }

        Verb::CdcToPaving { input } => {
            let c = load::<CollectionJson>(input)?.to_cdc()?;
            json(&QMatroidJson::of(&cdc_to_paving(&c)?))
        }

        Verb::ZeroSweep { q, n, k, m, patterns } => {
            let sys = DetSystem::new(*q, *n, *k)?;
            let attained = sys.sweep(*m)?;
            json(&SweepJson {
                format: FORMAT_TAG.into(),
                q: *q,
                n: *n as u64,
                k: *k as u64,
                m: *m,
                count: attained.len() as u64,
                bound: applicable_bound(&sys)?.to_string(),
                patterns: patterns
                    .then(|| attained.iter().map(|p| p.to_string()).collect()),
            })
        }

        Verb::PatternOf { input } => {
            let t = load_table(input)?;
            let p = pattern_of_qmatroid(&t)?;
            json(&PatternJson {
                format: FORMAT_TAG.into(),
                q: t.q(),
                n: t.ambient_dim() as u64,
                k: t.rank() as u64,
                pattern: p.to_string(),
            })
        }

        Verb::BoundsTable { q, n, sum_over_k } => {
            let mut rows = asymptotic_table(*q, 4, *n)?;
            if *sum_over_k {
                for row in &mut rows {
                    row.log2_upper_r = upper_bound_r_all_summed(row.n, *q)?;
                    row.gap = &LogValue::from_integer(&row.log2_lower_n) - &row.log2_upper_r;
                }
            }
            match cli.format {
                Format::Json => json(&BoundsTableJson::of(*q, &rows)),
                Format::Csv => Ok(bounds_csv(&rows)),
            }
        }

        Verb::Rank1Census { q, n } => {
            let field = FieldSpec::from_order(*q)?;
            let index = LatticeIndex::build(&field, *n)?;
            let count = enumerate_qmatroids(&index, 1)?
                .into_iter()
                .filter(|t| t.rank() == 1)
                .count();
            json(&CensusJson {
                format: FORMAT_TAG.into(),
                q: *q,
                n: *n as u64,
                count: count as u64,
                tables: None,
            })
        }

        Verb::EnumerateQmatroids { q, n, k, full } => {
            let field = FieldSpec::from_order(*q)?;
            let index = LatticeIndex::build(&field, *n)?;
            let all = enumerate_qmatroids(&index, *k)?;
            json(&CensusJson {
                format: FORMAT_TAG.into(),
                q: *q,
                n: *n as u64,
                count: all.len() as u64,
                tables: full.then(|| all.iter().map(|t| t.ranks().to_vec()).collect()),
            })
        }
    }
}

/// The sharpest applicable zero-pattern bound: the linear form for degree-1
/// systems, the general form when it applies (M >= s), and the trivial 2^M
/// pattern-string cap otherwise.
fn applicable_bound(sys: &DetSystem) -> Result<BigUint> {
    let m_count = sys.len() as u64;
    let s = sys.s() as u64;
    if sys.k() == 1 {
        zero_pattern_bound_linear(m_count, s)
    } else if m_count >= s {
        zero_pattern_bound(m_count, sys.k() as u64, s)
    } else {
        Ok(BigUint::from(1u32) << m_count)
    }
}

fn bounds_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from("n,log2_lower_N,log2_upper_R,gap");
    for row in rows {
        let r = BoundRowJson::of(row);
        out.push_str(&format!("\n{},{},{},{}", r.n, r.log2_lower_n, r.log2_upper_r, r.gap));
    }
    out
}
