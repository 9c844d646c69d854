use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qaq::commands::{self, DistortionKind, DistortionSpec, FitOptions};
use qaq::error::exit;
use qaq::{load_image, load_model, save_model, save_pgm, Error};
use qaq_core::{FeatureConfig, FieldKind, PenaltyWeights};

#[derive(Parser)]
#[command(name = "qaq", version, about = "Quality-aware image statistics and GAN penalty scorers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Blur,
    Awgn,
}

#[derive(Subcommand)]
enum Command {
    /// Print SSIM, d1, d2 and dQ between two images
    ScoreSsim { reference: PathBuf, test: PathBuf },

    /// Fit a pristine model from a directory of PNG/PGM images
    FitPristine {
        corpus: PathBuf,
        output: PathBuf,
        /// Use Sobel gradient magnitude fields instead of raw images
        #[arg(long)]
        gradient: bool,
        #[arg(long, default_value_t = 96)]
        patch_size: usize,
        #[arg(long, default_value_t = 0.75)]
        sharpness: f64,
        #[arg(long, default_value_t = 2)]
        scales: usize,
    },

    /// Score an image against a pristine model (lower is more natural)
    ScoreNiqe {
        image: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        gradient: bool,
    },

    /// Write a blurred or noise-corrupted copy of an image as PGM
    Distort {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        level: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Print the MSCN coefficient histogram as CSV
    MscnHist {
        image: PathBuf,
        #[arg(long)]
        gradient: bool,
        #[arg(long, default_value_t = 101)]
        bins: usize,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-3.0, 3.0])]
        range: Vec<f64>,
    },

    /// Compose the discriminator loss from its batch-mean terms
    PenaltyEval {
        #[arg(long, allow_negative_numbers = true)]
        gap: f64,
        #[arg(long)]
        one_gp: f64,
        #[arg(long)]
        quality: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda1: f64,
        #[arg(long, default_value_t = 0.1)]
        lambda2: f64,
    },
}

fn field_kind(gradient: bool) -> FieldKind {
    if gradient {
        FieldKind::Gradient
    } else {
        FieldKind::Image
    }
}

fn threads_from_env() -> Result<Option<usize>, Error> {
    match std::env::var(commands::THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::Input(format!("{} must be a positive integer, got {v:?}", commands::THREADS_ENV))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::ScoreSsim { reference, test } => commands::score_ssim(&reference, &test),
        Command::FitPristine {
            corpus,
            output,
            gradient,
            patch_size,
            sharpness,
            scales,
        } => {
            let opts = FitOptions {
                config: FeatureConfig {
                    patch_size,
                    sharpness_fraction: sharpness,
                    scales,
                    ..FeatureConfig::default()
                },
                kind: field_kind(gradient),
                threads: threads_from_env()?,
            };
            let report = commands::fit_pristine(&corpus, &opts)?;
            for w in &report.warnings {
                eprintln!("{w}");
            }
            save_model(&report.model, &output)?;
            Ok(format!("images {}\npatches {}\n", report.images, report.patches))
        }
        Command::ScoreNiqe { image, model, gradient } => {
            let model = load_model(&model)?;
            let score = commands::score_niqe(&image, &model, field_kind(gradient))?;
            Ok(format!("{score:.6}\n"))
        }
        Command::Distort {
            input,
            output,
            kind,
            level,
            seed,
        } => {
            let spec = DistortionSpec {
                kind: match kind {
                    Kind::Blur => DistortionKind::Blur,
                    Kind::Awgn => DistortionKind::Awgn,
                },
                level,
                seed,
            };
            let out = commands::distort(&load_image(&input)?, &spec)?;
            save_pgm(&out, &output)?;
            Ok(String::new())
        }
        Command::MscnHist {
            image,
            gradient,
            bins,
            range,
        } => commands::mscn_hist(&load_image(&image)?, gradient, bins, range[0], range[1]),
        Command::PenaltyEval {
            gap,
            one_gp,
            quality,
            lambda1,
            lambda2,
        } => commands::penalty_eval(gap, one_gp, quality, PenaltyWeights::new(lambda1, lambda2)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::from(exit::OK as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
