//! Sweep configuration and the four experiment runners behind `toric-loc`.
//!
//! Every runner is a pure function of a [`SweepConfig`]; parallel work is
//! keyed by task index, so output bytes do not depend on the worker count.
//! Each emitted file starts with a `# ` comment line holding the resolved
//! configuration as JSON.

use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use toric_localization::decoder::{critical_density_curve, estimate_threshold, ThresholdEstimate};
use toric_localization::dynamics::{
    bound_ceiling, check_bound, displacement_profile, escape_probability, running_max_change, BoundReport,
    DisplacementProfile,
};
use toric_localization::seeding::{derive_seed, GENERATOR};
use toric_localization::spectra::{
    analyze, average_samples, hamiltonian_localization_length, sample_lengths, HamiltonianLength, SampleLength,
    SpectraError,
};
use toric_localization::{build_two_walker, diagonalize, sample_disorder, Pair, PairBasis, TorusLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Localization,
    Evolve,
    Threshold,
    CriticalDensity,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Localization => "localization",
            Experiment::Evolve => "evolve",
            Experiment::Threshold => "threshold",
            Experiment::CriticalDensity => "critical-density",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    /// Largest pair-basis dimension a run may diagonalize.
    pub max_dimension: usize,
    #[serde(skip_serializing)]
    pub workers: usize,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    pub localization: LocalizationConfig,
    pub evolve: EvolveConfig,
    pub threshold: ThresholdConfig,
    pub critical_density: CriticalDensityConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalizationConfig {
    #[serde(rename = "L")]
    pub sizes: Vec<usize>,
    pub gamma_over_h: Vec<f64>,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    #[serde(rename = "L")]
    pub size: usize,
    pub gamma_over_h: Vec<f64>,
    /// Times in units of `1/h`, ascending.
    pub times: Vec<f64>,
    /// Starting vertices as `[x, y]` coordinates.
    pub initial: [[usize; 2]; 2],
    /// Square side used for the escape probability.
    pub escape_side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    pub m: Vec<usize>,
    pub p: Vec<f64>,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalDensityConfig {
    pub l: Vec<f64>,
    pub p_c: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            max_dimension: 10_000,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            out: None,
            localization: LocalizationConfig::default(),
            evolve: EvolveConfig::default(),
            threshold: ThresholdConfig::default(),
            critical_density: CriticalDensityConfig::default(),
        }
    }
}

impl Default for LocalizationConfig {
    fn default() -> Self {
        LocalizationConfig {
            sizes: vec![8, 9, 10, 11],
            gamma_over_h: (1..=7).map(|k| 50.0 * k as f64).collect(),
            n_samples: 100,
        }
    }
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            size: 8,
            gamma_over_h: vec![0.0, 100.0],
            times: vec![0.0, 10.0, 20.0, 40.0, 80.0, 160.0],
            initial: [[0, 0], [1, 0]],
            escape_side: 4.0,
        }
    }
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig { m: vec![4, 6, 8], p: (0..=10).map(|k| 0.06 + 0.01 * k as f64).collect(), trials: 4000 }
    }
}

impl Default for CriticalDensityConfig {
    fn default() -> Self {
        CriticalDensityConfig { l: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0], p_c: 0.11 }
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("invalid config")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// The resolved configuration as written into output headers. Worker
    /// count and output path are left out so outputs match across them.
    pub fn echo(&self, experiment: Experiment) -> String {
        #[derive(Serialize)]
        struct Echo<'a> {
            experiment: Experiment,
            generator: &'static str,
            #[serde(flatten)]
            config: &'a SweepConfig,
        }
        serde_json::to_string(&Echo { experiment, generator: GENERATOR, config: self }).expect("config serializes")
    }

    pub fn validate(&self, experiment: Experiment) -> Result<()> {
        ensure!(self.workers >= 1, "workers must be at least 1");
        match experiment {
            Experiment::Localization => {
                let c = &self.localization;
                ensure!(!c.sizes.is_empty(), "localization.L is empty");
                ensure!(!c.gamma_over_h.is_empty(), "localization.gamma_over_h is empty");
                ensure!(c.n_samples >= 1, "localization.n_samples must be at least 1");
                for &size in &c.sizes {
                    self.check_size(size)?;
                }
            }
            Experiment::Evolve => {
                let c = &self.evolve;
                ensure!(!c.gamma_over_h.is_empty(), "evolve.gamma_over_h is empty");
                ensure!(!c.times.is_empty(), "evolve.times is empty");
                ensure!(c.times.iter().all(|t| t.is_finite()), "evolve.times must be finite");
                ensure!(c.times.windows(2).all(|w| w[0] < w[1]), "evolve.times must be strictly ascending");
                ensure!(c.escape_side > 0.0, "evolve.escape_side must be positive");
                self.check_size(c.size)?;
                let [a, b] = c.initial;
                ensure!(a != b, "evolve.initial names the same vertex twice");
                ensure!(
                    a.iter().chain(&b).all(|&x| x < c.size),
                    "evolve.initial lies outside the {0}x{0} lattice",
                    c.size
                );
            }
            Experiment::Threshold => {
                let c = &self.threshold;
                ensure!(c.m.len() >= 2, "threshold.m needs at least two sizes");
                ensure!(c.p.len() >= 2, "threshold.p needs at least two points");
            }
            Experiment::CriticalDensity => {
                ensure!(!self.critical_density.l.is_empty(), "critical_density.l is empty");
            }
        }
        Ok(())
    }

    fn check_size(&self, size: usize) -> Result<()> {
        ensure!(size >= 3, "lattice size {size} is below the minimum of 3");
        let dim = PairBasis::dimension_for(size);
        if dim > self.max_dimension {
            // Hamiltonian plus eigenvectors, dense f64
            let bytes = 2.0 * 8.0 * (dim as f64).powi(2);
            bail!(
                "L = {size} gives pair dimension {dim} above max_dimension {}; \
                 a dense run needs about {:.1} GiB",
                self.max_dimension,
                bytes / (1u64 << 30) as f64
            );
        }
        Ok(())
    }
}

/// Run `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(f))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish_csv(header: &str, w: csv::Writer<Vec<u8>>) -> Result<String> {
    let body = String::from_utf8(w.into_inner().context("csv flush")?)?;
    Ok(format!("# {header}\n{body}"))
}

fn optional(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One output file: the suffix is appended to the output stem (empty for
/// the main CSV).
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub suffix: &'static str,
    pub contents: String,
}

/// Write artifacts next to `out`: the main CSV at `out`, the others at
/// `out` with the extension replaced by their suffix.
pub fn write_artifacts(out: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for a in artifacts {
        let path = if a.suffix.is_empty() {
            out.to_path_buf()
        } else {
            let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            out.with_file_name(format!("{stem}{}", a.suffix))
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        }
        std::fs::write(&path, &a.contents).with_context(|| format!("cannot write {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub size: usize,
    pub gamma_over_h: f64,
    pub mean_l: Option<f64>,
    pub stderr: Option<f64>,
    pub delocalized_fraction: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone)]
pub struct LocalizationOutput {
    pub rows: Vec<SummaryRow>,
    pub samples: Vec<(usize, f64, SampleLength)>,
    pub artifacts: Vec<Artifact>,
}

/// Disorder-averaged localization length for every `(L, γ/h)`. Sample `i`
/// at size `L` uses seed `derive_seed(derive_seed(seed, L), i)` at every
/// disorder strength.
pub fn run_localization_sweep(config: &SweepConfig) -> Result<LocalizationOutput> {
    config.validate(Experiment::Localization)?;
    let c = &config.localization;
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for &size in &c.sizes {
        let basis = PairBasis::new(TorusLattice::new(size)?);
        let master = derive_seed(config.seed, size as u64);
        for &gamma in &c.gamma_over_h {
            let per_sample = sample_lengths(&basis, gamma, c.n_samples, master)
                .with_context(|| format!("L = {size}, gamma/h = {gamma}"))?;
            samples.extend(per_sample.iter().cloned().map(|s| (size, gamma, s)));
            let row = match average_samples(per_sample) {
                Ok(avg) => SummaryRow {
                    size,
                    gamma_over_h: gamma,
                    mean_l: Some(avg.mean),
                    stderr: avg.stderr,
                    delocalized_fraction: avg.delocalized_fraction,
                    n_samples: c.n_samples,
                },
                Err(SpectraError::AllDelocalized { .. }) => SummaryRow {
                    size,
                    gamma_over_h: gamma,
                    mean_l: None,
                    stderr: None,
                    delocalized_fraction: 1.0,
                    n_samples: c.n_samples,
                },
                Err(e) => return Err(e.into()),
            };
            rows.push(row);
        }
    }

    let header = config.echo(Experiment::Localization);
    let mut w = csv_writer();
    w.write_record(["L", "gamma_over_h", "mean_l", "stderr", "delocalized_fraction", "n_samples"])?;
    for r in &rows {
        w.write_record([
            r.size.to_string(),
            r.gamma_over_h.to_string(),
            optional(r.mean_l),
            optional(r.stderr),
            r.delocalized_fraction.to_string(),
            r.n_samples.to_string(),
        ])?;
    }
    let summary = finish_csv(&header, w)?;

    let mut w = csv_writer();
    w.write_record(["L", "gamma_over_h", "sample", "seed", "l", "delocalized_fraction"])?;
    for (size, gamma, s) in &samples {
        let fraction = match s.length {
            HamiltonianLength::Localized(_) => 0.0,
            HamiltonianLength::Delocalized { fraction } => fraction,
        };
        w.write_record([
            size.to_string(),
            gamma.to_string(),
            s.sample.to_string(),
            s.seed.to_string(),
            optional(s.length.length()),
            fraction.to_string(),
        ])?;
    }
    let per_sample = finish_csv(&header, w)?;

    Ok(LocalizationOutput {
        rows,
        samples,
        artifacts: vec![
            Artifact { suffix: "", contents: summary },
            Artifact { suffix: ".samples.csv", contents: per_sample },
        ],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EscapePoint {
    pub time: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolutionRun {
    pub gamma_over_h: f64,
    pub seed: u64,
    /// Fitted length of this Hamiltonian; absent when it is delocalized.
    pub length: Option<f64>,
    pub delocalized_fraction: f64,
    #[serde(skip)]
    pub profiles: Vec<DisplacementProfile>,
    pub escape: Vec<EscapePoint>,
    /// Growth of the running-maximum escape probability over the second
    /// half of the time range.
    pub escape_saturation: Option<f64>,
    pub bound: Option<BoundReport>,
}

#[derive(Debug, Clone)]
pub struct EvolutionOutput {
    pub initial: Pair,
    /// Length the bound is checked against: the largest fitted length among
    /// the localized runs.
    pub reference_length: Option<f64>,
    pub runs: Vec<EvolutionRun>,
    pub artifacts: Vec<Artifact>,
}

impl EvolutionOutput {
    /// Profile mass in bins beyond distance `d`.
    pub fn tail_mass(&self, run: usize, time: f64, d: usize) -> Option<f64> {
        let p = self.runs.get(run)?.profiles.iter().find(|p| p.time == time)?;
        Some(p.mass.iter().skip(d + 1).sum())
    }
}

/// Evolve the configured starting pair under one disorder realization per
/// `γ/h`. All strengths share the seed `derive_seed(seed, 0)`, so they
/// differ only by the disorder scale.
pub fn run_evolution(config: &SweepConfig) -> Result<EvolutionOutput> {
    config.validate(Experiment::Evolve)?;
    let c = &config.evolve;
    let lattice = TorusLattice::new(c.size)?;
    let [a, b] = c.initial;
    let initial = Pair::new(lattice.vertex_index(a[0], a[1])?, lattice.vertex_index(b[0], b[1])?)?;
    let basis = PairBasis::new(lattice);
    let start = basis.index(initial)?;
    let seed = derive_seed(config.seed, 0);

    let mut runs = Vec::new();
    for &gamma in &c.gamma_over_h {
        let disorder = sample_disorder(basis.lattice(), 0.0, gamma, 1.0, seed)?;
        let eig = diagonalize(&build_two_walker(&basis, &disorder)?)?;
        let (length, delocalized_fraction) = match hamiltonian_localization_length(&analyze(&eig, &basis)?)? {
            HamiltonianLength::Localized(l) => (Some(l), 0.0),
            HamiltonianLength::Delocalized { fraction } => (None, fraction),
        };
        let profiles = c
            .times
            .par_iter()
            .map(|&t| displacement_profile(&eig, &basis, start, t))
            .collect::<Result<Vec<_>, _>>()?;
        let escape = profiles
            .iter()
            .map(|p| Ok(EscapePoint { time: p.time, probability: escape_probability(p, c.escape_side)? }))
            .collect::<Result<Vec<_>>>()?;
        let values: Vec<f64> = escape.iter().map(|e| e.probability).collect();
        let last = c.times[c.times.len() - 1];
        let escape_saturation = running_max_change(&c.times, &values, 0.5 * last);
        runs.push(EvolutionRun {
            gamma_over_h: gamma,
            seed,
            length,
            delocalized_fraction,
            profiles,
            escape,
            escape_saturation,
            bound: None,
        });
    }

    let reference_length = runs.iter().filter_map(|r| r.length).reduce(f64::max);
    if let Some(reference) = reference_length {
        for run in &mut runs {
            let length = run.length.unwrap_or(reference);
            let ceiling = bound_ceiling(&basis, start, length)?;
            let later: Vec<DisplacementProfile> = run.profiles.iter().filter(|p| p.time > 0.0).cloned().collect();
            run.bound = Some(check_bound(&later, length, ceiling)?);
        }
    }

    let header = config.echo(Experiment::Evolve);
    let mut w = csv_writer();
    w.write_record(["gamma_over_h", "t", "d", "probability"])?;
    for run in &runs {
        for p in &run.profiles {
            for (d, m) in p.mass.iter().enumerate() {
                w.write_record([run.gamma_over_h.to_string(), p.time.to_string(), d.to_string(), m.to_string()])?;
            }
        }
    }
    let csv = finish_csv(&header, w)?;

    #[derive(Serialize)]
    struct BoundFile<'a> {
        initial: [usize; 2],
        escape_side: f64,
        reference_length: Option<f64>,
        runs: &'a [EvolutionRun],
    }
    let json = serde_json::to_string_pretty(&BoundFile {
        initial: [initial.first(), initial.second()],
        escape_side: c.escape_side,
        reference_length,
        runs: &runs,
    })?;

    Ok(EvolutionOutput {
        initial,
        reference_length,
        runs,
        artifacts: vec![
            Artifact { suffix: "", contents: csv },
            Artifact { suffix: ".bound.json", contents: format!("# {header}\n{json}\n") },
        ],
    })
}

#[derive(Debug, Clone)]
pub struct ThresholdOutput {
    pub estimate: ThresholdEstimate,
    pub artifacts: Vec<Artifact>,
}

pub fn run_threshold(config: &SweepConfig) -> Result<ThresholdOutput> {
    config.validate(Experiment::Threshold)?;
    let c = &config.threshold;
    let estimate = estimate_threshold(&c.m, &c.p, c.trials, config.seed)?;

    let header = config.echo(Experiment::Threshold);
    let mut w = csv_writer();
    w.write_record(["m", "p", "trials", "failures", "rate", "stderr"])?;
    for r in &estimate.points {
        w.write_record([
            r.m.to_string(),
            r.p.to_string(),
            r.trials.to_string(),
            r.failures.to_string(),
            r.rate.to_string(),
            r.stderr.to_string(),
        ])?;
    }
    let csv = finish_csv(&header, w)?;
    #[derive(Serialize)]
    struct Summary<'a> {
        crossings: &'a [toric_localization::decoder::Crossing],
        estimate: f64,
        spread: f64,
    }
    let json = serde_json::to_string_pretty(&Summary {
        crossings: &estimate.crossings,
        estimate: estimate.estimate,
        spread: estimate.spread,
    })?;
    Ok(ThresholdOutput {
        artifacts: vec![
            Artifact { suffix: "", contents: csv },
            Artifact { suffix: ".crossings.json", contents: format!("# {header}\n{json}\n") },
        ],
        estimate,
    })
}

pub fn run_critical_density(config: &SweepConfig) -> Result<Vec<Artifact>> {
    config.validate(Experiment::CriticalDensity)?;
    let c = &config.critical_density;
    let curve = critical_density_curve(&c.l, c.p_c)?;
    let mut w = csv_writer();
    w.write_record(["l", "lambda_c", "rho_c"])?;
    for p in &curve.points {
        w.write_record([p.length.to_string(), p.lambda_c.to_string(), p.rho_c.to_string()])?;
    }
    Ok(vec![Artifact { suffix: "", contents: finish_csv(&config.echo(Experiment::CriticalDensity), w)? }])
}

/// Run `experiment` on a pool sized by `config.workers`.
pub fn run(experiment: Experiment, config: &SweepConfig) -> Result<Vec<Artifact>> {
    config.validate(experiment)?;
    with_workers(config.workers, || match experiment {
        Experiment::Localization => run_localization_sweep(config).map(|o| o.artifacts),
        Experiment::Evolve => run_evolution(config).map(|o| o.artifacts),
        Experiment::Threshold => run_threshold(config).map(|o| o.artifacts),
        Experiment::CriticalDensity => run_critical_density(config),
    })?
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_sections_override_defaults() {
        let cfg = SweepConfig::from_toml(
            "seed = 7\nworkers = 2\n[localization]\nL = [4]\ngamma_over_h = [1.5]\n[threshold]\ntrials = 200\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.workers, 2);
        assert_eq!(cfg.localization.sizes, vec![4]);
        assert_eq!(cfg.localization.n_samples, 100);
        assert_eq!(cfg.threshold.trials, 200);
        assert_eq!(cfg.threshold.m, vec![4, 6, 8]);
        assert!(SweepConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn echo_omits_workers_and_output() {
        let mut a = SweepConfig { workers: 1, ..Default::default() };
        let mut b = SweepConfig { workers: 3, out: Some("x.csv".into()), ..Default::default() };
        a.seed = 5;
        b.seed = 5;
        assert_eq!(a.echo(Experiment::Threshold), b.echo(Experiment::Threshold));
        assert!(!a.echo(Experiment::Threshold).contains("workers"));
        assert!(a.echo(Experiment::Evolve).contains("\"seed\":5"));
    }

    #[test]
    fn oversized_lattice_is_rejected_with_memory_estimate() {
        let mut cfg = SweepConfig::default();
        cfg.localization.sizes = vec![12];
        let err = cfg.validate(Experiment::Localization).unwrap_err().to_string();
        assert!(err.contains("10296") && err.contains("GiB"), "{err}");
        cfg.max_dimension = 20_000;
        assert!(cfg.validate(Experiment::Localization).is_ok());
    }

    #[test]
    fn rejects_empty_lists_and_zero_workers() {
        let mut cfg = SweepConfig::default();
        cfg.localization.gamma_over_h.clear();
        assert!(cfg.validate(Experiment::Localization).is_err());
        let cfg = SweepConfig { workers: 0, ..Default::default() };
        assert!(cfg.validate(Experiment::CriticalDensity).is_err());
        let mut cfg = SweepConfig::default();
        cfg.evolve.initial = [[1, 1], [1, 1]];
        assert!(cfg.validate(Experiment::Evolve).is_err());
        let mut cfg = SweepConfig::default();
        cfg.evolve.times = vec![1.0, 0.5];
        assert!(cfg.validate(Experiment::Evolve).is_err());
    }

    #[test]
    fn clean_small_lattice_is_fully_delocalized() {
        let mut cfg = SweepConfig { seed: 3, workers: 1, ..Default::default() };
        cfg.localization = LocalizationConfig { sizes: vec![4], gamma_over_h: vec![0.0], n_samples: 2 };
        let out = run_localization_sweep(&cfg).unwrap();
        assert_eq!(out.rows[0].delocalized_fraction, 1.0);
        assert_eq!(out.rows[0].mean_l, None);
        let summary = &out.artifacts[0].contents;
        assert!(summary.starts_with("# {"));
        assert!(summary.lines().nth(1).unwrap() == "L,gamma_over_h,mean_l,stderr,delocalized_fraction,n_samples");
        assert_eq!(summary.lines().nth(2).unwrap(), "4,0,,,1,2");
        assert!(!summary.contains('\r'));
    }

    #[test]
    fn evolution_starts_concentrated() {
        let mut cfg = SweepConfig { workers: 1, ..Default::default() };
        cfg.evolve = EvolveConfig { size: 4, gamma_over_h: vec![0.0, 20.0], times: vec![0.0, 1.0, 2.0], ..Default::default() };
        let out = run_evolution(&cfg).unwrap();
        let csv = &out.artifacts[0].contents;
        assert_eq!(csv.lines().nth(1).unwrap(), "gamma_over_h,t,d,probability");
        assert_eq!(csv.lines().nth(2).unwrap(), "0,0,0,1");
        assert!(out.runs.iter().all(|r| r.profiles[0].mass[0] == 1.0));
        assert!(out.artifacts[1].contents.contains("\"runs\""));
    }

    #[test]
    fn critical_density_rows() {
        let mut cfg = SweepConfig::default();
        cfg.critical_density.l = vec![1.0];
        let a = run_critical_density(&cfg).unwrap();
        let row = a[0].contents.lines().nth(2).unwrap().to_owned();
        let cols: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(cols[0], 1.0);
        assert!((cols[1] - 49.274_057_438_076_91).abs() < 1e-9);
        assert_eq!(cols[2], cols[1].powi(-2));
    }
}
