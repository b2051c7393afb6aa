use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "mixstate",
    version,
    about = "Dense mixed-state simulation: separability, discord, one-clean-qubit traces and multiple-quantum coherence",
    after_help = "Relative --output paths are resolved against $MIXSTATE_OUT_DIR when it is set.\n\
                  Exit codes: 0 success, 2 bad arguments, 3 domain, resource or file errors."
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    /// Largest register simulated densely [default: 12].
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Worker threads for parallel loops (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, save and inspect density matrices.
    #[command(subcommand)]
    State(StateCmd),
    /// Partial-transpose tests, thresholds and the polarization crossing.
    #[command(subcommand)]
    Entangle(EntangleCmd),
    /// Mutual information, classical correlation and discord across a cut.
    Discord(DiscordArgs),
    /// One-clean-qubit estimation of normalized traces.
    #[command(subcommand)]
    Dqc1(Dqc1Cmd),
    /// Coherence-order spectra and the multiple-quantum signal.
    #[command(subcommand)]
    Coherence(CoherenceCmd),
}

#[derive(Debug, Subcommand)]
pub enum StateCmd {
    /// Construct a state; print it, or write it with --output.
    Make(MakeArgs),
    /// Load a state file and report its basic properties.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Destination file.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    /// `(1-ε)/4 I + ε |Ψ+⟩⟨Ψ+|` (needs --epsilon).
    Werner,
    /// One Bell state (see --bell).
    Bell,
    /// Mixture of the four Bell states (needs --weights).
    BellMixture,
    /// `(|0…0⟩ + |1…1⟩)/√2` (needs --n).
    Cat,
    /// `(1-ε)/2^n I + ε |cat⟩⟨cat|` (needs --n, --epsilon).
    PseudoPureCat,
    /// `(1 ∓ ε σz¹)/2^n` (needs --n, --epsilon).
    Deviation,
    /// `e^{-βH}/Z` for `H = Σ ω_k σz^k / 2` (needs --freqs, --beta).
    Thermal,
    /// `I / 2^n` (needs --n).
    MaximallyMixed,
    /// Diagonal state from --probs.
    Diagonal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum BellArg {
    /// (|00⟩ + |11⟩)/√2
    #[default]
    PsiPlus,
    /// (|01⟩ + |10⟩)/√2
    PhiPlus,
    /// (|01⟩ - |10⟩)/√2
    PhiMinus,
    /// (|00⟩ - |11⟩)/√2
    PsiMinus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    /// 1 - ε σz
    #[default]
    Minus,
    /// 1 + ε σz
    Plus,
}

/// Where a command's input state comes from: a file or a named family.
#[derive(Clone, Debug, Args)]
pub struct StateSource {
    /// Read the state from a state file.
    #[arg(long, conflicts_with = "state")]
    pub input: Option<PathBuf>,
    /// Named state family.
    #[arg(long, value_enum)]
    pub state: Option<StateKind>,
    /// Number of qubits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Polarization or mixing parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = BellArg::PsiPlus)]
    pub bell: BellArg,
    /// Four Bell-state weights, in the order Ψ+, Φ+, Φ-, Ψ-.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Vec<f64>,
    /// Larmor frequencies, one per spin.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub freqs: Vec<f64>,
    /// Inverse temperature.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Use the first-order high-temperature expansion.
    #[arg(long)]
    pub first_order: bool,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    /// Computational-basis probabilities.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub probs: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum EntangleCmd {
    /// Partial-transpose spectrum and negativity across a cut.
    Ppt(PptArgs),
    /// Bisect the entanglement threshold of a family.
    Threshold(ThresholdArgs),
    /// Where achievable polarization meets the threshold curve.
    Crossing(CrossingArgs),
}

#[derive(Debug, Args)]
pub struct PptArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Qubits on side A of the cut.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub cut: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Werner,
    /// Pseudo-pure cat state.
    Cat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum CutArg {
    #[default]
    OneVsRest,
    Balanced,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Cat register size.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Tabulate cat thresholds for 2..=N instead.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = CutArg::OneVsRest)]
    pub cut: CutArg,
    /// Absolute bisection tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    /// 1/(1 + 2^(2n-1)).
    #[default]
    SeparabilityBound,
    /// 1/(1 + 2^(n-1)).
    CatPpt,
}

#[derive(Debug, Args)]
pub struct CrossingArgs {
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// Polarization at two qubits; fixes c in ε(n) = c·n·2^-n.
    #[arg(long, default_value_t = 1e-5)]
    pub epsilon_at_two: f64,
    #[arg(long, value_enum, default_value_t = CurveArg::SeparabilityBound)]
    pub curve: CurveArg,
    /// Replace the cat-ppt curve by bisected thresholds for 2..=N.
    #[arg(long)]
    pub numeric_up_to: Option<usize>,
    /// Bisection tolerance for --numeric-up-to.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DiscordArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Qubits of the unmeasured side X; the measured side must be one qubit.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub cut: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    pub theta_points: usize,
    #[arg(long, default_value_t = 128)]
    pub phi_points: usize,
    #[arg(long, default_value_t = 200)]
    pub refine_iters: usize,
    /// Polar angle of the basis reported as J_at_basis [default: σz].
    #[arg(long, requires = "phi")]
    pub theta: Option<f64>,
    #[arg(long, requires = "theta", allow_negative_numbers = true)]
    pub phi: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Dqc1Cmd {
    /// Noise-free clean-qubit readout.
    Exact(Dqc1Args),
    /// Finite-shot estimate with seeded ±1 outcomes.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum UnitaryArg {
    Identity,
    /// Haar-random (see --u-seed).
    Random,
    /// X on every qubit.
    PauliX,
    /// Z on every qubit.
    PauliZ,
    /// H on every qubit.
    Hadamard,
    /// S on every qubit.
    PhaseS,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ReadoutArg {
    #[default]
    Canonical,
    FinalHadamard,
}

#[derive(Debug, Args)]
pub struct Dqc1Args {
    #[arg(long, value_enum)]
    pub u: UnitaryArg,
    /// Register size (the clean qubit is extra).
    #[arg(long)]
    pub n: usize,
    /// Seed for --u random.
    #[arg(long, default_value_t = 0)]
    pub u_seed: u64,
    /// Clean-qubit polarization.
    #[arg(long, default_value_t = 1e-5, allow_negative_numbers = true)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    #[arg(long, value_enum, default_value_t = ReadoutArg::Canonical)]
    pub readout: ReadoutArg,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub circuit: Dqc1Args,
    /// Shots per quadrature.
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    /// Seed for the measurement outcomes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum CoherenceCmd {
    /// Weight of each coherence order.
    Spectrum(SpectrumArgs),
    /// Multiple-quantum signal and its Fourier spectrum.
    Signal(SignalArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Collective z-rotation applied first.
    #[arg(long, allow_negative_numbers = true)]
    pub rotate: Option<f64>,
    /// Gaussian collective dephasing width applied first.
    #[arg(long)]
    pub dephase: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SignalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-5, allow_negative_numbers = true)]
    pub epsilon: f64,
    /// Rotation angles over [0, 2π); a power of two.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}
