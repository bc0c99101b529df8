use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used whenever `--seed` is absent.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "adopt", version, about = "Pricing and simulation of ad options")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Price one option with a chosen method and print a JSON report.
    Price(PriceArgs),
    /// Tabulate lattice prices against the closed form as CSV.
    Converge(ConvergeArgs),
    /// Test a `date,price` series for the GBM assumption.
    Diagnose(DiagnoseArgs),
    /// Check the SV lattice against Monte Carlo confidence intervals.
    Validate(ValidateArgs),
    /// Simulate advertiser ledgers and publisher revenue.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Crr,
    TianBin,
    Haahtela,
    BoyleTrin,
    KrTrin,
    TianTrin,
    SvLattice,
    McEuler,
    McMilstein,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Crr => "crr",
            Method::TianBin => "tian-bin",
            Method::Haahtela => "haahtela",
            Method::BoyleTrin => "boyle-trin",
            Method::KrTrin => "kr-trin",
            Method::TianTrin => "tian-trin",
            Method::SvLattice => "sv-lattice",
            Method::McEuler => "mc-euler",
            Method::McMilstein => "mc-milstein",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    PerClick,
    PerMille,
}

/// Option contract and GBM underlying; defaults are an in-the-money
/// one-month per-click option.
#[derive(Debug, Clone, Args)]
pub struct ContractArgs {
    /// Current CPM.
    #[arg(long, default_value_t = 2.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 0.005)]
    pub strike: f64,
    #[arg(long, value_enum, default_value_t = Basis::PerClick)]
    pub basis: Basis,
    /// Click-through rate.
    #[arg(long, default_value_t = 0.3)]
    pub ctr: f64,
    /// Risk-free rate, continuously compounded.
    #[arg(long, default_value_t = 0.05)]
    pub rate: f64,
    /// Time to expiry in years.
    #[arg(long, default_value_t = 31.0 / 365.0)]
    pub expiry: f64,
    /// Volatility of the GBM underlying.
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
}

#[derive(Debug, Args)]
pub struct PriceArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[command(flatten)]
    pub contract: ContractArgs,
    /// Lattice steps, or time steps per Monte Carlo path.
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Stretch of the Boyle and Kamrad-Ritchken trinomials.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Initial volatility of the SV underlying [default: --sigma].
    #[arg(long)]
    pub sigma0: Option<f64>,
    /// Mean-reversion speed of the volatility.
    #[arg(long, default_value_t = 0.0)]
    pub kappa: f64,
    /// Long-run volatility [default: sigma0].
    #[arg(long)]
    pub theta: Option<f64>,
    /// Volatility of volatility.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Monte Carlo paths.
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub contract: ContractArgs,
    /// Comma-separated lattice methods [default: all six].
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    /// Comma-separated step counts, strictly ascending.
    #[arg(long = "n", value_delimiter = ',', default_value = "10,100,1000")]
    pub n: Vec<usize>,
    /// Stretch of the Boyle and Kamrad-Ritchken trinomials.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// CSV file with header `date,price`.
    #[arg(long)]
    pub input: PathBuf,
    /// Significance level of both tests.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Ljung-Box lags [default: n/5 clamped to 1..=10].
    #[arg(long)]
    pub lags: Option<usize>,
    /// Histogram bins [default: Sturges].
    #[arg(long)]
    pub bins: Option<usize>,
    /// Rolling window for the realized-volatility estimate.
    #[arg(long, default_value_t = 7)]
    pub vol_window: usize,
    /// Directory for `acf.csv`, `qq.csv` and `hist.csv`.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 20.0)]
    pub spot: f64,
    /// Per-click strike.
    #[arg(long, default_value_t = 0.633)]
    pub strike: f64,
    #[arg(long, default_value_t = 0.03)]
    pub ctr: f64,
    #[arg(long, default_value_t = 0.05)]
    pub rate: f64,
    /// Time to expiry in years.
    #[arg(long, default_value_t = 7.0 / 365.0)]
    pub expiry: f64,
    /// Lattice steps.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.5)]
    pub sigma0: f64,
    #[arg(long, default_value_t = 3.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.75)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.35)]
    pub delta: f64,
    /// Sweep `param=lo:hi:points` over sigma0, kappa, theta or delta;
    /// repeatable [default: all four over their standard ranges].
    #[arg(long)]
    pub sweep: Vec<String>,
    /// Monte Carlo scheme: euler, milstein or both.
    #[arg(long, default_value = "both")]
    pub scheme: String,
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    /// Time steps per Monte Carlo path.
    #[arg(long, default_value_t = 200)]
    pub mc_steps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Market CSV with header `date,avg_cpm,supply`.
    #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
    pub market: Option<PathBuf>,
    /// JSON scenario configuration for a synthetic market.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Option premium per delivery day (with --market).
    #[arg(long, requires = "market")]
    pub premium: Option<f64>,
    /// Per-click strike (with --market).
    #[arg(long, requires = "market")]
    pub strike: Option<f64>,
    /// Daily budget [default: 5, or the scenario's].
    #[arg(long)]
    pub budget: Option<f64>,
    /// Click-through rate [default: 0.03, or the scenario's].
    #[arg(long)]
    pub ctr: Option<f64>,
    /// Share of each day's impressions the publisher sells as options
    /// [default: 0.2, or the scenario's].
    #[arg(long)]
    pub sell_ratio: Option<f64>,
    /// Clicks delivered per option [default: 1, or the scenario's].
    #[arg(long)]
    pub clicks_per_option: Option<u64>,
    /// Overrides the scenario's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for `rtb.csv`, `options.csv` and `revenue.csv`.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}
