//! Command line surface for the exact configuration-space representation
//! computations: dimension tables, representation matrices, content and ξ
//! evaluation, catalog validation, and the verification suites.
//!
//! Exit codes: 0 success, 1 suite failure, 2 usage error.

mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use confrep_core::cohomology::SliceContext;
use confrep_core::freegroup::Word;
use confrep_core::mcg::{parse_catalog, TwistCatalog};
use output::Format;

/// Catalogs shipped with the binary; `--catalog` overrides with a file.
const BUNDLED: &[(usize, &str)] = &[
    (1, include_str!("../data/catalog_g1.txt")),
    (2, include_str!("../data/catalog_g2.txt")),
    (3, include_str!("../data/catalog_g3.txt")),
];

#[derive(Parser)]
#[command(
    name = "confrep",
    about = "Exact mapping class group representations on configuration space cohomology",
    long_about = None,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the table of dimensions of H^i(C_n) for a surface of genus g.
    Dims {
        #[arg(long = "g")]
        genus: usize,
        #[arg(long, default_value_t = 6)]
        imax: usize,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Print the exact matrix of a mapping class on the (i, (n)) slice.
    ///
    /// The product expression composes left to right in composition order:
    /// `T1*T2` means apply `T2` first, so matrices satisfy
    /// rep(T1*T2) = rep(T1)·rep(T2).
    Rep {
        #[arg(long = "g")]
        genus: usize,
        /// Catalog entry name or `*`-product of names, each optionally
        /// suffixed `^-1`.
        #[arg(long)]
        phi: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: usize,
        /// Catalog file; defaults to the bundled catalog for the genus.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Evaluate the content of a word in the free group of rank n.
    Content {
        /// Rank of the ambient free group.
        #[arg(long)]
        n: usize,
        /// Word in tokens `a<i>` / `a<i>^-1`, whitespace-separated; `1` for
        /// the empty word.
        #[arg(long)]
        word: String,
    },
    /// Evaluate the crossed homomorphism ξ of a catalog product.
    Xi {
        #[arg(long = "g")]
        genus: usize,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Validate a catalog file and print its entries.
    Catalog {
        #[arg(long)]
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Run a named verification suite.
    Check {
        /// One of the named suites, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "g", default_value_t = 2)]
        genus: usize,
        /// Search bound for the bounded twist-product searches.
        #[arg(long = "L", default_value_t = 4)]
        bound: usize,
        /// Randomized case count for the sampling suites.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 4)]
        imax: usize,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_catalog_for(genus: usize, path: &Option<PathBuf>) -> Result<TwistCatalog> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .with_context(|| format!("cannot read catalog file {}", p.display()))?,
        None => BUNDLED
            .iter()
            .find(|(g, _)| *g == genus)
            .map(|(_, text)| (*text).to_string())
            .ok_or_else(|| anyhow!("no bundled catalog for genus {genus}; pass --catalog"))?,
    };
    let catalog = parse_catalog(&text).map_err(|e| anyhow!("invalid catalog: {e}"))?;
    if catalog.genus() != genus {
        bail!("catalog has genus {}, expected {genus}", catalog.genus());
    }
    Ok(catalog)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Dims { genus, imax, nmax, format } => {
            let ctx = SliceContext::new(genus);
            let table = ctx.dims_table(imax, nmax);
            print!(
                "{}",
                output::header(
                    format,
                    "dims",
                    &[
                        ("g", genus.to_string()),
                        ("imax", imax.to_string()),
                        ("nmax", nmax.to_string()),
                    ],
                )
            );
            print!("{}", output::render_dims_table(format, &table));
            Ok(ExitCode::SUCCESS)
        }
        Command::Rep { genus, phi, i, n, catalog, format } => {
            let catalog = load_catalog_for(genus, &catalog)?;
            let class = suites::parse_product(&catalog, &phi)?;
            let ctx = SliceContext::new(genus);
            let basis = ctx.slice_basis(i, n);
            let rep = ctx.act(&class, &basis).map_err(|e| anyhow!("{e}"))?;
            print!(
                "{}",
                output::header(
                    format,
                    "rep",
                    &[
                        ("g", genus.to_string()),
                        ("phi", phi.clone()),
                        ("i", i.to_string()),
                        ("n", n.to_string()),
                        ("dim", basis.len().to_string()),
                        ("basis", "fixed monomial order of this tool".to_string()),
                    ],
                )
            );
            print!("{}", output::render_matrix(format, &rep.matrix));
            Ok(ExitCode::SUCCESS)
        }
        Command::Content { n, word } => {
            let word = Word::parse(n, &word).map_err(|e| anyhow!("{e}"))?;
            println!("{}", word.content());
            Ok(ExitCode::SUCCESS)
        }
        Command::Xi { genus, phi, catalog, format } => {
            let catalog = load_catalog_for(genus, &catalog)?;
            let class = suites::parse_product(&catalog, &phi)?;
            print!(
                "{}",
                output::header(format, "xi", &[("g", genus.to_string()), ("phi", phi.clone())])
            );
            print!("{}", suites::render_xi(format, &class));
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog { path, format } => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("cannot read catalog file {}", path.display()))?;
            let catalog = parse_catalog(&text).map_err(|e| anyhow!("invalid catalog: {e}"))?;
            print!(
                "{}",
                output::header(
                    format,
                    "catalog",
                    &[
                        ("path", path.display().to_string()),
                        ("g", catalog.genus().to_string()),
                        ("entries", catalog.len().to_string()),
                    ],
                )
            );
            for entry in catalog.entries() {
                match format {
                    Format::Plain => {
                        println!("{}: valid ({})", entry.name, entry.provenance);
                    }
                    Format::Csv => println!("{},valid", entry.name),
                    Format::Json => println!(
                        "{}",
                        serde_json::json!({
                            "entry": entry.name,
                            "valid": true,
                            "provenance": entry.provenance,
                            "torelli": entry.class.is_torelli(),
                        })
                    ),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { suite, seed, genus, bound, cases, imax, nmax, catalog } => {
            let cfg = suites::SuiteConfig {
                seed,
                genus,
                bound,
                cases,
                i_max: imax,
                n_max: nmax,
            };
            let names: Vec<&str> = if suite == "all" {
                suites::SUITE_NAMES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let needs_catalog = ["nonsymplectic", "xi-tau", "act-homomorphism"];
            let loaded;
            let catalog_ref = if names.iter().any(|n| needs_catalog.contains(n)) {
                loaded = load_catalog_for(genus, &catalog)?;
                Some(&loaded)
            } else {
                None
            };
            println!(
                "# confrep check seed={seed} g={genus} L={bound} cases={cases} imax={imax} nmax={nmax}"
            );
            let mut failed = false;
            for name in names {
                match suites::run_suite(name, &cfg, catalog_ref) {
                    Ok(summary) => println!("PASS {name}: {summary}"),
                    Err(err) => {
                        failed = true;
                        println!("FAIL {name}: {err:#}");
                    }
                }
            }
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}
