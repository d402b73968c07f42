use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ubbcert::basis::{build, BasisKind, SetName};
use ubbcert::cube::{build_topb_with, Completion};
use ubbcert::export::{projector_files, write_file, write_state_set};
use ubbcert::parties::Bipartition;
use ubbcert::report::{
    run_certify, run_full_report, run_verify, ClaimGroup, Format, Report, RunConfig,
};
use ubbcert::{analysis, Error};

#[derive(Parser)]
#[command(
    name = "ubbcert",
    version,
    about = "Exact UPB/UBB construction and certification on the d x d x d cube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output directory for written files.
    #[arg(
        long,
        global = true,
        env = "UBBCERT_OUT_DIR",
        default_value = "ubbcert-out"
    )]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Gram–Schmidt order used to complete the local families.
    #[arg(long, global = true, value_enum, default_value_t = CompletionArg::Index)]
    completion: CompletionArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompletionArg {
    Index,
    Reversed,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    Topb,
    Upb,
    UbbSym,
    UbbAsym,
}

impl From<SetArg> for SetName {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::Topb => SetName::Topb,
            SetArg::Upb => SetName::Upb,
            SetArg::UbbSym => SetName::UbbSym,
            SetArg::UbbAsym => SetName::UbbAsym,
        }
    }
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    set: Option<SetArg>,
    /// Bipartition for ubb-asym: A|BC, AC|B or AB|C.
    #[arg(long)]
    cut: Option<Bipartition>,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seesaw restarts.
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    /// Seesaw iterations per restart.
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Random instances per sampled check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build a state set and write it in the state-set text format.
    Construct {
        #[arg(value_enum)]
        set_name: Option<SetArg>,
        #[command(flatten)]
        target: Target,
        /// Print the block-occupancy diagram of the product basis.
        #[arg(long)]
        diagram: bool,
    },
    /// Analyse the complement projector and check the set's claims.
    Verify {
        #[arg(value_parser = ["projector"])]
        what: Option<String>,
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum)]
        claim: Option<ClaimGroup>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Structural and numerical certificates for one claim.
    Certify {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum)]
        claim: ClaimGroup,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Write projector, density, marginals and partial transposes.
    Export {
        #[command(flatten)]
        target: Target,
    },
    /// Every claim for one dimension.
    Report {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDimension(_)
            | Error::InvalidArgument(_)
            | Error::LayerOutOfRange { .. } => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn completion(g: &Global) -> Completion {
    match g.completion {
        CompletionArg::Index => Completion::IndexOrder,
        CompletionArg::Reversed => Completion::Reversed,
    }
}

fn format(g: &Global) -> Format {
    match g.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    }
}

fn kind_of(set: Option<SetArg>, cut: Option<Bipartition>) -> Result<BasisKind, Failure> {
    let set = set
        .ok_or_else(|| Failure::Usage("a set is required (topb, upb, ubb-sym, ubb-asym)".into()))?;
    Ok(SetName::from(set).with_cut(cut)?)
}

fn stem(kind: BasisKind, d: usize) -> String {
    let cut = match kind.cut() {
        Some(Bipartition::SplitA) => "-a-bc",
        Some(Bipartition::SplitB) => "-ac-b",
        Some(Bipartition::SplitC) => "-ab-c",
        None => "",
    };
    format!("{}-d{d}{cut}", kind.set_name())
}

fn config(g: &Global, d: usize, kind: BasisKind, sampling: Option<&Sampling>) -> RunConfig {
    let mut cfg = RunConfig::new(d, kind);
    cfg.completion = completion(g);
    cfg.out_dir = g.out.clone();
    cfg.format = format(g);
    cfg.jobs = g.jobs;
    if let Some(s) = sampling {
        cfg.seed = s.seed;
        cfg.seesaw.seed = s.seed;
        cfg.seesaw.restarts = s.restarts;
        cfg.seesaw.max_iters = s.max_iters;
        cfg.samples = s.samples;
    }
    cfg
}

fn emit(reports: &[Report], g: &Global, dir: &Path, name: &str) -> Result<bool, Failure> {
    let json = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(reports).expect("reports serialise")
    };
    match format(g) {
        Format::Json => println!("{json}"),
        Format::Text => {
            for r in reports {
                print!("{}", r.to_text());
            }
        }
    }
    let path = write_file(dir, name, &json)?;
    eprintln!("wrote {}", path.display());
    Ok(reports.iter().all(Report::all_passed))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let g = &cli.global;
    match cli.command {
        Command::Construct {
            set_name,
            target,
            diagram,
        } => {
            if set_name.is_some() && target.set.is_some() {
                return Err(Failure::Usage(
                    "give the set either positionally or with --set".into(),
                ));
            }
            let kind = kind_of(set_name.or(target.set), target.cut)?;
            if target.d < 3 {
                return Err(Error::InvalidDimension(target.d).into());
            }
            let set = build(target.d, kind, completion(g))?;
            let path = write_file(
                &g.out,
                &format!("{}.states", stem(kind, target.d)),
                &write_state_set(&set),
            )?;
            match format(g) {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "d": target.d,
                        "set": kind,
                        "states": set.len(),
                        "complement_dim": set.complement_dim(),
                        "file": path,
                    })
                ),
                Format::Text => {
                    println!("states {}", set.len());
                    println!("complement dim {}", set.complement_dim());
                    println!("wrote {}", path.display());
                }
            }
            if diagram {
                print!(
                    "{}",
                    build_topb_with(target.d, completion(g))?.occupancy_diagram()
                );
            }
            Ok(true)
        }
        Command::Verify {
            what: _,
            target,
            claim,
            sampling,
        } => {
            let kind = kind_of(target.set, target.cut)?;
            let mut cfg = config(g, target.d, kind, Some(&sampling));
            cfg.claim = claim;
            let report = run_verify(&cfg)?;
            emit(
                &[report],
                g,
                &g.out,
                &format!("verify-{}.json", stem(kind, target.d)),
            )
        }
        Command::Certify {
            target,
            claim,
            sampling,
        } => {
            let kinds: Vec<BasisKind> = match (claim, target.set) {
                (_, Some(set)) => vec![kind_of(Some(set), target.cut)?],
                (ClaimGroup::Prop1 | ClaimGroup::Ppt, None) => vec![BasisKind::Upb],
                (ClaimGroup::Prop2 | ClaimGroup::Theorem1 | ClaimGroup::Facts, None) => {
                    vec![BasisKind::UbbSymmetric]
                }
                (ClaimGroup::Prop3 | ClaimGroup::Lemma, None) => match target.cut {
                    Some(c) => vec![BasisKind::UbbAsymmetric(c)],
                    None => Bipartition::ALL.map(BasisKind::UbbAsymmetric).to_vec(),
                },
                (ClaimGroup::Search, None) => {
                    return Err(Failure::Usage("--claim search needs --set".into()))
                }
            };
            let mut reports = Vec::new();
            for kind in kinds {
                let mut cfg = config(g, target.d, kind, Some(&sampling));
                cfg.claim = Some(claim);
                reports.push(run_certify(&cfg, claim)?);
            }
            let name = format!(
                "certify-{}-d{}.json",
                serde_json::to_value(claim)
                    .expect("claim")
                    .as_str()
                    .unwrap_or("claim"),
                target.d
            );
            emit(&reports, g, &g.out, &name)
        }
        Command::Export { target } => {
            let kind = kind_of(target.set, target.cut)?;
            if target.d < 3 {
                return Err(Error::InvalidDimension(target.d).into());
            }
            let set = build(target.d, kind, completion(g))?;
            let p = analysis::complement_projector(&set)?;
            let dir = g.out.join(stem(kind, target.d));
            for (name, text) in projector_files(&p)? {
                let path = write_file(&dir, &name, &text)?;
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Report { d, sampling } => {
            let cfg = config(g, d, BasisKind::Upb, Some(&sampling));
            let reports = run_full_report(&cfg)?;
            emit(&reports, g, &g.out, &format!("report-d{d}.json"))
        }
    }
}
