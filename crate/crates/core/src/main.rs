use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use shortrange::constants::{lambda_to_mass, MassConvention};
use shortrange::inference::mstar_from_mass;
use shortrange::pipeline::io::{fmt_sig, raw_csv_document, AtomicOutputs};
use shortrange::pipeline::run::{analyze, load_or_synthesize, Provenance};
use shortrange::pipeline::{AnalysisConfig, SyntheticModel};
use shortrange::Result;

/// Short-range force analysis: Casimir and patch model, fit, Yukawa limits.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// JSON analysis config; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Random seed, overrides the config.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Output directory, overrides the config.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Casimir force table on the config's theory grid.
    Casimir,
    /// Write a synthetic raw dataset to <out>/synthetic.csv.
    Synth,
    /// Bin and fit; writes fit.json, residuals.csv and theory_curve.csv.
    Fit {
        /// Raw data CSV (d_um,force_pN,sigma_pN[,vm_mV]); synthetic data when omitted.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Fit and derive the exclusion curve; also writes exclusion.csv.
    Exclude {
        /// Raw data CSV (d_um,force_pN,sigma_pN[,vm_mV]); synthetic data when omitted.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Planck-scale bound from a boson mass or Compton wavelength.
    Mstar {
        /// Compton wavelength in µm.
        #[arg(long, conflicts_with = "mass_ev", required_unless_present = "mass_ev")]
        lambda_um: Option<f64>,
        /// Boson mass in eV.
        #[arg(long)]
        mass_ev: Option<f64>,
        /// Wavelength-to-mass convention.
        #[arg(long, value_enum, default_value_t = Convention::PlanckH)]
        convention: Convention,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    /// m = ħc/λ
    Hbar,
    /// m = hc/λ
    PlanckH,
}

impl From<Convention> for MassConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Hbar => MassConvention::HBar,
            Convention::PlanckH => MassConvention::PlanckH,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(cli: &Cli) -> Result<AnalysisConfig> {
    let mut config = match &cli.config {
        Some(path) => AnalysisConfig::load(path)?,
        None => AnalysisConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    let mut config = load_config(&cli)?;
    match cli.command {
        Command::Casimir => {
            config.validate()?;
            let calc = config.calculator()?;
            let c = config.correction()?;
            println!("d_um,energy_J_m2,force_pN,corrected_force_pN,matsubara_terms");
            for d in config.theory_distances()? {
                let f = calc.force(d)?;
                let corrected = calc.corrected_force(d, &c)?;
                println!(
                    "{},{},{},{},{}",
                    fmt_sig(d * 1e6, 5),
                    fmt_sig(f.energy_per_area, 6),
                    fmt_sig(f.force * 1e12, 6),
                    fmt_sig(corrected * 1e12, 6),
                    f.terms_used
                );
            }
        }
        Command::Synth => {
            config.validate()?;
            let model = SyntheticModel::build(&config, &config.calculator()?)?;
            let raw = model.draw(config.seed);
            let doc = raw_csv_document(&Provenance::new(&config, None).comments(), &raw)?;
            let mut out = AtomicOutputs::new(&config.output_dir)?;
            let path = out.write("synthetic.csv", &doc)?;
            out.commit();
            eprintln!("wrote {} points to {}", raw.len(), path.display());
        }
        Command::Fit { ref input } | Command::Exclude { ref input } => {
            let with_exclusion = matches!(cli.command, Command::Exclude { .. });
            if input.is_some() {
                config.input = input.clone();
            }
            config.validate()?;
            let (raw, sha) = load_or_synthesize(&config)?;
            let report = analyze(&config, &raw, sha, with_exclusion)?;
            for w in &report.binned.warnings {
                eprintln!("warning: {w}");
            }
            let files = report.write(&config.output_dir)?;
            let f = &report.fit;
            eprintln!(
                "V_rms = {} mV, offset = {} pN, reduced chi2 = {} ({} dof)",
                fmt_sig(f.v_rms() * 1e3, 4),
                fmt_sig(f.offset * 1e12, 4),
                fmt_sig(f.reduced_chi2, 4),
                f.dof
            );
            if let Some(curve) = &report.exclusion {
                for s in &curve.skipped {
                    eprintln!("warning: lambda = {} um skipped: {}", fmt_sig(s.lambda * 1e6, 5), s.reason);
                }
            }
            for p in files {
                eprintln!("wrote {}", p.display());
            }
        }
        Command::Mstar { lambda_um, mass_ev, convention } => {
            let mass = match (lambda_um, mass_ev) {
                (_, Some(m)) => m,
                (Some(l), None) => lambda_to_mass(l * 1e-6, convention.into())?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let mstar = mstar_from_mass(mass)?;
            println!("mass_eV={}", fmt_sig(mass, 6));
            println!("mstar_TeV={}", fmt_sig(mstar * 1e-3, 6));
        }
    }
    Ok(())
}
