//! `morphtda` command-line tool: feature extraction, training, evaluation,
//! synthetic data and plots.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use morphtda::classify::{predict, train_svm, SvmModel, TrainConfig};
use morphtda::dataset;
use morphtda::eval::{cross_db, five_fold_cv, render_table, EvalConfig, FoldPooling, LabeledDataset};
use morphtda::featurize::{read_feature_csv, write_feature_csv, BettiBinningConfig, FeatureKind, FeatureVector};
use morphtda::image_io::{load_grayscale, save_grayscale, to_canonical};
use morphtda::mciq::{index_matrix, index_matrix_csv, Characteristic};
use morphtda::persistence::{FiltrationParams, PersistenceBarcode};
use morphtda::pipeline::{extract_features, landmark_barcode, ExtractConfig};
use morphtda::plot::{barcode_plot, feature_plot, Plot};
use morphtda::synth::{alpha_blend, morph_dataset};
use morphtda::ulbp::{extract_landmarks, LbpConfig};

#[derive(Parser)]
#[command(name = "morphtda", version, about = "Face morph detection with MCIQ and topological texture features")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract feature vectors for every image of a dataset.
    Extract(ExtractArgs),
    /// Write the landmark point cloud of an image as CSV.
    Landmarks(ImageOut),
    /// Write the persistence barcode of an image's landmarks as JSON.
    Barcode(BarcodeArgs),
    /// Write the 36x36 block index matrix of one characteristic as CSV.
    MciqMatrix(MatrixArgs),
    /// Blend two images into a synthetic morph.
    SynthMorph(SynthMorphArgs),
    /// Generate a synthetic dataset of textured faces and blended morphs.
    SynthDataset(SynthDatasetArgs),
    /// Render a barcode JSON or one feature CSV row as SVG plus CSV.
    Plot(PlotArgs),
    /// Train an SVM on a feature CSV.
    Train(TrainArgs),
    /// Score a feature CSV with a trained model.
    Predict(PredictArgs),
    /// Repeated balanced 5-fold cross-validation.
    Crossval(CrossvalArgs),
    /// Train on one database and test on another.
    Crossdb(CrossdbArgs),
}

#[derive(Args)]
struct TopoArgs {
    /// Filtration cap for the Rips complex.
    #[arg(long, default_value_t = FiltrationParams::default().threshold)]
    threshold: f64,
    /// Last Betti-curve sampling line.
    #[arg(long, default_value_t = BettiBinningConfig::default().omega)]
    omega: usize,
}

impl TopoArgs {
    fn config(&self) -> ExtractConfig {
        ExtractConfig {
            lbp: LbpConfig::default(),
            filtration: FiltrationParams {
                threshold: self.threshold,
                ..FiltrationParams::default()
            },
            binning: BettiBinningConfig { omega: self.omega },
        }
    }
}

#[derive(Args)]
struct ExtractArgs {
    /// Dataset root holding `genuine/` and `morph/`.
    #[arg(long)]
    dataset: PathBuf,
    /// `sample_id,label` CSV overriding directory labels.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Comma-separated kinds: mciq, bb0, bb1, bs0, bs1.
    #[arg(long, value_delimiter = ',', default_value = "mciq")]
    kinds: Vec<FeatureKind>,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    topo: TopoArgs,
}

#[derive(Args)]
struct ImageOut {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BarcodeArgs {
    #[command(flatten)]
    io: ImageOut,
    /// Highest homology dimension (0 or 1).
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    #[arg(long, default_value_t = FiltrationParams::default().threshold)]
    threshold: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CharacteristicArg {
    Correlation,
    Luminance,
    Contrast,
    Kurtosis,
    Skewness,
}

impl From<CharacteristicArg> for Characteristic {
    fn from(c: CharacteristicArg) -> Self {
        match c {
            CharacteristicArg::Correlation => Characteristic::Correlation,
            CharacteristicArg::Luminance => Characteristic::Luminance,
            CharacteristicArg::Contrast => Characteristic::Contrast,
            CharacteristicArg::Kurtosis => Characteristic::Kurtosis,
            CharacteristicArg::Skewness => Characteristic::Skewness,
        }
    }
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    io: ImageOut,
    #[arg(long, value_enum, default_value = "correlation")]
    characteristic: CharacteristicArg,
}

#[derive(Args)]
struct SynthMorphArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Weight of the first image.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    alpha: f64,
    /// Output image; `.png` writes PNG, anything else binary PGM.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthDatasetArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 60)]
    genuine: usize,
    #[arg(long, default_value_t = 60)]
    morph: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PlotArgs {
    /// Barcode JSON or feature CSV.
    #[arg(long)]
    input: PathBuf,
    /// Output stem; `<out>.svg` and `<out>.csv` are written.
    #[arg(long)]
    out: PathBuf,
    /// Row of a feature CSV to plot (default: first row).
    #[arg(long)]
    sample: Option<String>,
    #[arg(long)]
    kind: Option<FeatureKind>,
}

#[derive(Args)]
struct SvmArgs {
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    /// Z-score features with training-set statistics.
    #[arg(long)]
    standardize: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SvmArgs {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            c: self.c,
            standardize: self.standardize,
            seed: self.seed,
            ..TrainConfig::default()
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
    /// Feature kind to use when the CSV holds several.
    #[arg(long)]
    kind: Option<FeatureKind>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    svm: SvmArgs,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    kind: Option<FeatureKind>,
    /// Predictions CSV: `sample_id,label,predicted,score`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum PoolingArg {
    Pooled,
    PerFold,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, value_enum, default_value = "pooled")]
    pooling: PoolingArg,
    #[command(flatten)]
    svm: SvmArgs,
}

impl EvalArgs {
    fn config(&self) -> EvalConfig {
        EvalConfig {
            repeats: self.repeats,
            folds: self.folds,
            seed: self.svm.seed,
            pooling: match self.pooling {
                PoolingArg::Pooled => FoldPooling::Pooled,
                PoolingArg::PerFold => FoldPooling::PerFold,
            },
        }
    }
}

#[derive(Args)]
struct CrossvalArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    kind: Option<FeatureKind>,
    /// Report JSON; the text table goes to stdout.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    eval: EvalArgs,
}

#[derive(Args)]
struct CrossdbArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    kind: Option<FeatureKind>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    eval: EvalArgs,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extract(a) => extract(a),
        Command::Landmarks(a) => landmarks(a).map(|_| true),
        Command::Barcode(a) => barcode(a).map(|_| true),
        Command::MciqMatrix(a) => mciq_matrix(a).map(|_| true),
        Command::SynthMorph(a) => synth_morph(a).map(|_| true),
        Command::SynthDataset(a) => synth_dataset(a).map(|_| true),
        Command::Plot(a) => plot(a).map(|_| true),
        Command::Train(a) => train(a).map(|_| true),
        Command::Predict(a) => predict_cmd(a).map(|_| true),
        Command::Crossval(a) => crossval(a).map(|_| true),
        Command::Crossdb(a) => crossdb(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Returns `Ok(false)` when some images were skipped.
fn extract(args: ExtractArgs) -> Result<bool> {
    if args.kinds.is_empty() {
        bail!("no feature kinds requested");
    }
    let samples = dataset::scan(&args.dataset, args.manifest.as_deref())?;
    let cfg = args.topo.config();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()?;
    let results: Vec<Result<Vec<FeatureVector>>> = pool.install(|| {
        samples
            .par_iter()
            .map(|s| {
                let img = load_grayscale(&s.path)?;
                let feats = extract_features(&img, &args.kinds, &cfg)?;
                Ok(feats
                    .into_iter()
                    .map(|(kind, values)| FeatureVector::new(kind, values, s.sample_id.clone(), s.label))
                    .collect())
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (s, r) in samples.iter().zip(results) {
        match r {
            Ok(v) => rows.extend(v),
            Err(e) => {
                skipped += 1;
                log::error!("skipping {}: {e:#}", s.path.display());
            }
        }
    }
    write_feature_csv(&rows, create(&args.out)?)?;
    log::info!("wrote {} rows for {} images", rows.len(), samples.len() - skipped);
    if skipped > 0 {
        eprintln!("{skipped} of {} images skipped", samples.len());
    }
    Ok(skipped == 0)
}

fn canonical_image(path: &Path) -> Result<morphtda::GrayImage> {
    let img = load_grayscale(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(to_canonical(&img)?)
}

fn landmarks(args: ImageOut) -> Result<()> {
    let img = canonical_image(&args.image)?;
    let pc = extract_landmarks(&img, &LbpConfig::default())?;
    write_text(&args.out, &pc.to_csv())
}

fn barcode(args: BarcodeArgs) -> Result<()> {
    let img = canonical_image(&args.io.image)?;
    let cfg = ExtractConfig {
        filtration: FiltrationParams {
            max_dim: args.max_dim,
            threshold: args.threshold,
        },
        ..ExtractConfig::default()
    };
    let bc = landmark_barcode(&img, &cfg, args.max_dim)?;
    write_text(&args.io.out, &bc.to_json())
}

fn mciq_matrix(args: MatrixArgs) -> Result<()> {
    let img = canonical_image(&args.io.image)?;
    let m = index_matrix(&img, args.characteristic.into())?;
    write_text(&args.io.out, &index_matrix_csv(&m))
}

fn synth_morph(args: SynthMorphArgs) -> Result<()> {
    let a = canonical_image(&args.a)?;
    let b = canonical_image(&args.b)?;
    let out = alpha_blend(&a, &b, args.alpha)?;
    save_grayscale(&out, &args.out)?;
    Ok(())
}

fn synth_dataset(args: SynthDatasetArgs) -> Result<()> {
    if args.genuine < 2 && args.morph > 0 {
        bail!("morphs need at least two genuine images");
    }
    let (genuine, morphs) = morph_dataset(args.genuine, args.morph, args.seed);
    for (dir, prefix, imgs) in [("genuine", "g", &genuine), ("morph", "m", &morphs)] {
        let dir = args.out.join(dir);
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, img) in imgs.iter().enumerate() {
            save_grayscale(img, dir.join(format!("{prefix}{i:04}.pgm")))?;
        }
    }
    Ok(())
}

fn with_suffix(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn plot(args: PlotArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let is_json = args.input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('{');
    let plot: Plot = if is_json {
        let bc = PersistenceBarcode::from_json(&text).context("parsing barcode JSON")?;
        barcode_plot(&bc)
    } else {
        let rows = read_feature_csv(text.as_bytes()).context("parsing feature CSV")?;
        let row = rows
            .iter()
            .find(|r| {
                args.sample.as_ref().is_none_or(|s| &r.sample_id == s) && args.kind.is_none_or(|k| r.kind == k)
            })
            .context("no matching feature row")?;
        feature_plot(row)
    };
    write_text(&with_suffix(&args.out, ".svg"), &plot.svg)?;
    write_text(&with_suffix(&args.out, ".csv"), &plot.csv)
}

fn read_rows(path: &Path) -> Result<Vec<FeatureVector>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_feature_csv(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

/// The requested kind, or the only kind present in the rows.
fn resolve_kind(rows: &[FeatureVector], requested: Option<FeatureKind>, path: &Path) -> Result<FeatureKind> {
    let mut kinds: Vec<FeatureKind> = rows.iter().map(|r| r.kind).collect();
    kinds.sort_by_key(|k| k.as_str());
    kinds.dedup();
    match (requested, kinds.as_slice()) {
        (Some(k), _) if kinds.contains(&k) => Ok(k),
        (Some(k), _) => bail!("{} has no {k} rows", path.display()),
        (None, [k]) => Ok(*k),
        (None, []) => bail!("{} has no rows", path.display()),
        (None, _) => bail!("{} holds several kinds; pick one with --kind", path.display()),
    }
}

fn load_dataset(path: &Path, kind: Option<FeatureKind>) -> Result<LabeledDataset> {
    let rows = read_rows(path)?;
    let kind = resolve_kind(&rows, kind, path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
    Ok(LabeledDataset::from_rows(&rows, kind, name)?)
}

fn train(args: TrainArgs) -> Result<()> {
    let rows = read_rows(&args.features)?;
    let kind = resolve_kind(&rows, args.kind, &args.features)?;
    let rows: Vec<FeatureVector> = rows.into_iter().filter(|r| r.kind == kind).collect();
    let model = train_svm(&rows, &args.svm.config())?;
    if !model.converged {
        log::warn!("SVM stopped after {} steps without converging", model.iterations);
    }
    write_text(&args.out, &model.to_json())
}

fn predict_cmd(args: PredictArgs) -> Result<()> {
    let model_text = fs::read_to_string(&args.model).with_context(|| format!("reading {}", args.model.display()))?;
    let model = SvmModel::from_json(&model_text).context("parsing model JSON")?;
    let rows = read_rows(&args.features)?;
    let kind = resolve_kind(&rows, args.kind, &args.features)?;
    let mut w = csv::Writer::from_writer(create(&args.out)?);
    w.write_record(["sample_id", "label", "predicted", "score"])?;
    let (mut correct, mut total) = (0usize, 0usize);
    for r in rows.iter().filter(|r| r.kind == kind) {
        let (label, score) = predict(&model, &r.values).with_context(|| format!("sample {}", r.sample_id))?;
        total += 1;
        correct += usize::from(label == r.label);
        w.write_record([r.sample_id.as_str(), r.label.as_str(), label.as_str(), &score.to_string()])?;
    }
    w.flush()?;
    println!("accuracy {correct}/{total}");
    Ok(())
}

fn crossval(args: CrossvalArgs) -> Result<()> {
    let ds = load_dataset(&args.features, args.kind)?;
    let report = five_fold_cv(&ds, &args.eval.svm.config(), &args.eval.config())?;
    write_text(&args.out, &report.to_json())?;
    print!("{}", render_table(&[(ds.db_name.clone(), &report)]));
    Ok(())
}

fn crossdb(args: CrossdbArgs) -> Result<()> {
    let train = load_dataset(&args.train, args.kind)?;
    let test = load_dataset(&args.test, args.kind)?;
    let report = cross_db(&train, &test, &args.eval.svm.config(), &args.eval.config())?;
    write_text(&args.out, &report.to_json())?;
    let column = format!("{} -> {}", train.db_name, test.db_name);
    print!("{}", render_table(&[(column, &report)]));
    Ok(())
}
