use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use formality_core::ainfty::{check_ainfty, random_diffeo, transport, AInftyStructure, RandomDiffeoOptions};
use formality_core::arcalg::{build_arc_category, catalan, enumerate_matchings, Matching};
use formality_core::exactlin::{Field, Scalar};
use formality_core::format::{
    to_json, weight_table_file, AlgebraFile, Certificates, CochainFile, RunTranscript, StageFile, WeightEntryFile,
};
use formality_core::formality::{
    categorical_formalize, formalize, select_equivariant_structures, weight_table, EquivariantStructures,
};
use formality_core::hochschild::{euler_field, pushforward, Cochain, SearchMode};
use formality_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "formality-lab", version, about = "Exact A∞ formality experiments on arc algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldSource {
    Euler,
    Solve,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum Search {
    Full,
    Local,
}

impl From<Search> for SearchMode {
    fn from(s: Search) -> Self {
        match s {
            Search::Full => SearchMode::Full,
            Search::Local => SearchMode::Local,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the crossingless matchings on 2k points.
    Matchings {
        k: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Write the arc category on k strands as an algebra file.
    Build {
        k: usize,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        max_arity: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transport an algebra along a seeded random formal diffeomorphism with identity linear part.
    Twist {
        algebra: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Arities of the random components, as `lo-hi` or a single number.
        #[arg(long, default_value = "2-3")]
        arities: String,
        #[arg(long, default_value_t = 0.05)]
        density: f64,
        /// Forget the objects and twist the total algebra.
        #[arg(long)]
        total: bool,
        #[arg(long)]
        max_arity: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the twisting diffeomorphism.
        #[arg(long)]
        phi_out: Option<PathBuf>,
        /// Where to write the pushforward of the Euler field along the diffeomorphism.
        #[arg(long)]
        field_out: Option<PathBuf>,
    },
    /// Run the purity-to-formality induction.
    Formalize {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value = "solve")]
        field_source: FieldSource,
        /// Cochain file for `--field-source file`.
        #[arg(long)]
        field_file: Option<PathBuf>,
        #[arg(long)]
        max_arity: Option<usize>,
        #[arg(long, value_enum, default_value = "local")]
        search: Search,
        /// Recorded in the transcript.
        #[arg(long)]
        seed: Option<u64>,
        /// Formal algebra output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Transcript output (stdout otherwise).
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Weight gradings of a category with respect to an nc-vector field.
    Weights {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value = "euler")]
        field_source: FieldSource,
        #[arg(long)]
        field_file: Option<PathBuf>,
        /// `auto` (select shifts against the reference), `zero`, or comma-separated unit shifts.
        #[arg(long, default_value = "auto")]
        structures: String,
        /// Reference object name or index for `auto`.
        #[arg(long)]
        reference: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(n) = std::env::var("FORMALITY_LAB_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    log::warn!("could not size the thread pool: {e}");
                }
            }
            _ => log::warn!("ignoring FORMALITY_LAB_THREADS={n:?}"),
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.chain().find_map(|c| c.downcast_ref::<Error>()).map_or(2, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Matchings { k, format } => cmd_matchings(k, format),
        Command::Build { k, field, max_arity, out } => cmd_build(k, &field, max_arity, out.as_deref()),
        Command::Twist { algebra, seed, arities, density, total, max_arity, out, phi_out, field_out } => cmd_twist(
            &algebra,
            seed,
            &arities,
            density,
            total,
            max_arity,
            [out.as_deref(), phi_out.as_deref(), field_out.as_deref()],
        ),
        Command::Formalize { algebra, field_source, field_file, max_arity, search, seed, out, transcript, timings } => {
            cmd_formalize(FormalizeArgs {
                algebra,
                field_source,
                field_file,
                max_arity,
                search: search.into(),
                seed,
                out,
                transcript,
                timings,
            })
        }
        Command::Weights { algebra, field_source, field_file, structures, reference, format, out } => {
            cmd_weights(&algebra, field_source, field_file.as_deref(), &structures, reference.as_deref(), format, out.as_deref())
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_algebra(path: &Path) -> anyhow::Result<AInftyStructure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = AlgebraFile::from_json(&text)?;
    file.to_structure().with_context(|| format!("loading {}", path.display()))
}

fn load_field(a: &AInftyStructure, source: FieldSource, file: Option<&Path>) -> anyhow::Result<Option<Cochain>> {
    Ok(match source {
        FieldSource::Euler => Some(euler_field(a.space())),
        FieldSource::Solve => None,
        FieldSource::File => {
            let path = file.ok_or_else(|| anyhow!("--field-source file needs --field-file"))?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(CochainFile::from_json(&text)?.to_cochain(a.space())?)
        }
    })
}

fn parse_field(tag: &str) -> anyhow::Result<Field> {
    Ok(tag.parse::<Field>().map_err(Error::from)?)
}

fn cmd_matchings(k: usize, format: Format) -> anyhow::Result<()> {
    let ms = enumerate_matchings(k)?;
    match format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct Listing {
                k: usize,
                count: usize,
                catalan: u128,
                matchings: Vec<String>,
            }
            let listing = Listing { k, count: ms.len(), catalan: catalan(k), matchings: ms.iter().map(|m| m.to_string()).collect() };
            print!("{}", to_json(&listing)?);
        }
        Format::Table => {
            for m in &ms {
                println!("{m}");
            }
            println!("count {} (Catalan number {})", ms.len(), catalan(k));
        }
    }
    Ok(())
}

fn cmd_build(k: usize, field: &str, max_arity: Option<usize>, out: Option<&Path>) -> anyhow::Result<()> {
    let cat = build_arc_category(k, parse_field(field)?)?;
    let a = match max_arity {
        Some(n) => cat.structure.with_max_arity(n)?,
        None => cat.structure,
    };
    emit(&AlgebraFile::from_structure(&a).to_json()?, out)
}

fn parse_arities(text: &str) -> anyhow::Result<std::ops::RangeInclusive<usize>> {
    let (lo, hi) = match text.split_once('-') {
        Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
        None => {
            let x = text.trim().parse()?;
            (x, x)
        }
    };
    if lo < 2 || hi < lo {
        return Err(Error::Validation(format!("arities {text:?} must be a range within 2..")).into());
    }
    Ok(lo..=hi)
}

fn cmd_twist(
    path: &Path,
    seed: u64,
    arities: &str,
    density: f64,
    total: bool,
    max_arity: Option<usize>,
    [out, phi_out, field_out]: [Option<&Path>; 3],
) -> anyhow::Result<()> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Validation(format!("density {density} outside [0, 1]")).into());
    }
    let mut a = load_algebra(path)?;
    if total {
        a = a.forget_objects();
    }
    if let Some(n) = max_arity {
        a = a.with_max_arity(n)?;
    }
    let opts = RandomDiffeoOptions {
        arities: parse_arities(arities)?,
        density,
        bound: 2,
        avoid_inputs: a.strict_units().map(|u| u.to_vec()).unwrap_or_default(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = random_diffeo(a.space_arc().clone(), &opts, a.max_arity(), &mut rng)?;
    let twisted = transport(&a, &phi)?;
    if let Some(d) = twisted.first_higher_product() {
        log::info!("twisted structure has μ^{d} ≠ 0");
    }
    if let Some(p) = phi_out {
        emit(&to_json(&CochainFile::from_cochain(a.space(), phi.phi()))?, Some(p))?;
    }
    if let Some(p) = field_out {
        let b = pushforward(&phi, &euler_field(a.space()), a.max_arity())?;
        emit(&to_json(&CochainFile::from_cochain(a.space(), &b))?, Some(p))?;
    }
    emit(&AlgebraFile::from_structure(&twisted).to_json()?, out)
}

struct FormalizeArgs {
    algebra: PathBuf,
    field_source: FieldSource,
    field_file: Option<PathBuf>,
    max_arity: Option<usize>,
    search: SearchMode,
    seed: Option<u64>,
    out: Option<PathBuf>,
    transcript: Option<PathBuf>,
    timings: bool,
}

/// Reference object: the plait when it is an object, else the first one.
fn default_reference(a: &AInftyStructure) -> u32 {
    let space = a.space();
    (1..=8)
        .find_map(|k| space.object_index(&Matching::plait(k).to_string()))
        .unwrap_or(0)
}

fn cmd_formalize(args: FormalizeArgs) -> anyhow::Result<()> {
    let mut clock = BTreeMap::new();
    let start = Instant::now();
    let mut a = load_algebra(&args.algebra)?;
    if let Some(n) = args.max_arity {
        a = a.with_max_arity(n)?;
    }
    clock.insert("load".to_string(), start.elapsed().as_secs_f64());
    let field = load_field(&a, args.field_source, args.field_file.as_deref())?;
    let t = Instant::now();
    let categorical = a.space().is_categorical() && a.strict_units().is_some() && field.is_some();
    let mut shifts = None;
    let mut weights = None;
    let (run, formal) = if categorical {
        let b = field.as_ref().expect("field given");
        let sel = select_equivariant_structures(&a, b, default_reference(&a))?;
        shifts = Some(
            sel.shifts
                .iter()
                .enumerate()
                .map(|(l, s)| (a.space().object_name(l as u32), s.to_string()))
                .collect(),
        );
        let table = weight_table(&a, b, &sel.structures)?;
        weights = Some((table.weights_are_degrees(a.space()), weight_table_file(a.space(), &table)));
        let r = categorical_formalize(&a, b, &sel.structures, args.search)?;
        (r.run, r.formal)
    } else {
        let r = formalize(&a, field.as_ref(), args.search)?;
        let formal = r.formal.clone();
        (r, formal)
    };
    clock.insert("formalize".to_string(), t.elapsed().as_secs_f64());
    let n = formal.max_arity();
    let mut certificates = Certificates::new();
    certificates.insert("ainfty_relation".into(), check_ainfty(&formal).is_ok());
    certificates.insert(format!("formal_to_order_{n}"), formal.is_formal_to_order(n));
    certificates.insert("euler_cocycle".into(), run.euler_certified);
    certificates.insert("mu2_preserved".into(), formal.product(2) == a.product(2));
    if let Some((equal, _)) = &weights {
        certificates.insert("weights_equal_degrees".into(), *equal);
    }
    let space = run.formal.space();
    let transcript = RunTranscript {
        command: "formalize".into(),
        seed: args.seed,
        field: a.space().field().to_string(),
        max_arity: n,
        stages: run.stages.iter().map(|r| StageFile::from_record(space, r)).collect(),
        certificates,
        shifts,
        weights: weights.map(|(_, w)| w),
        timings: args.timings.then_some(clock),
    };
    if let Some(p) = &args.out {
        emit(&AlgebraFile::from_structure(&formal).to_json()?, Some(p))?;
    }
    emit(&to_json(&transcript)?, args.transcript.as_deref())
}

fn parse_structures(a: &AInftyStructure, b: &Cochain, spec: &str, reference: Option<&str>) -> anyhow::Result<(EquivariantStructures, Vec<Scalar>)> {
    let space = a.space();
    let field = space.field();
    match spec {
        "auto" => {
            let r = match reference {
                None => default_reference(a),
                Some(name) => match space.object_index(name) {
                    Some(i) => i,
                    None => name.parse::<u32>().map_err(|_| Error::Validation(format!("unknown object {name:?}")))?,
                },
            };
            let sel = select_equivariant_structures(a, b, r)?;
            Ok((sel.structures, sel.shifts))
        }
        "zero" => Ok((EquivariantStructures::zero(a), vec![field.zero(); space.num_objects()])),
        list => {
            let shifts: Vec<Scalar> = list.split(',').map(|s| field.parse_scalar(s)).collect::<Result<_, _>>().map_err(Error::from)?;
            Ok((EquivariantStructures::from_shifts(a, &shifts)?, shifts))
        }
    }
}

fn cmd_weights(
    path: &Path,
    source: FieldSource,
    field_file: Option<&Path>,
    structures: &str,
    reference: Option<&str>,
    format: Format,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let a = load_algebra(path)?;
    let b = match load_field(&a, source, field_file)? {
        Some(b) => b,
        None => bail!("weights need --field-source euler or file"),
    };
    let (structures, shifts) = parse_structures(&a, &b, structures, reference)?;
    let table = weight_table(&a, &b, &structures)?;
    let space = a.space();
    let entries: Vec<WeightEntryFile> = weight_table_file(space, &table);
    let text = match format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct Report {
                field: String,
                shifts: Vec<(String, String)>,
                weights_equal_degrees: bool,
                table: Vec<WeightEntryFile>,
            }
            let report = Report {
                field: space.field().to_string(),
                shifts: shifts.iter().enumerate().map(|(l, s)| (space.object_name(l as u32), s.to_string())).collect(),
                weights_equal_degrees: table.weights_are_degrees(space),
                table: entries,
            };
            to_json(&report)?
        }
        Format::Table => {
            let mut s = String::new();
            for (l, x) in shifts.iter().enumerate() {
                s.push_str(&format!("shift {} {x}\n", space.object_name(l as u32)));
            }
            for e in &entries {
                for w in &e.spaces {
                    let degrees: Vec<String> = w.degrees.iter().map(|d| d.to_string()).collect();
                    s.push_str(&format!(
                        "hom({}, {})  weight {}  dim {}  degrees {}\n",
                        e.source,
                        e.target,
                        w.weight,
                        w.dimension,
                        degrees.join(",")
                    ));
                }
            }
            s
        }
    };
    emit(&text, out)
}
