use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mixstate::coherence::{
    coherence_spectrum, collective_dephasing, collective_rotation, mq_signal, DephasingSpec,
};
use mixstate::discord::{discord, DiscordSettings, OptimizerSettings, ProjectiveBasis};
use mixstate::dqc1::{dqc1_exact_with, dqc1_sampled_with, random_unitary, Dqc1Options, Readout};
use mixstate::entanglement::{
    cat_threshold_analytic, cat_threshold_table, crossing_analysis, ppt_check, threshold_bisect,
    CatCut, ParametrizedFamily, PolarizationForm, PolarizationModel, ThresholdCurve,
};
use mixstate::factory::{
    bell_mixture, cat_state, deviation_state, pseudo_pure, thermal_state, werner, BellState,
    DeviationSign, ThermalForm, ThermalSpec,
};
use mixstate::{Bipartition, DensityMatrix, Operator};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{num, Report, Table};
use crate::state_file::{self, StateFile};
use crate::{CliError, OUT_DIR_ENV};

type CliResult<T> = Result<T, CliError>;

pub fn dispatch(command: &Command) -> CliResult<Report> {
    match command {
        Command::State(StateCmd::Make(a)) => state_make(a),
        Command::State(StateCmd::Check { input }) => state_check(input),
        Command::Entangle(EntangleCmd::Ppt(a)) => entangle_ppt(a),
        Command::Entangle(EntangleCmd::Threshold(a)) => entangle_threshold(a),
        Command::Entangle(EntangleCmd::Crossing(a)) => entangle_crossing(a),
        Command::Discord(a) => discord_cmd(a),
        Command::Dqc1(Dqc1Cmd::Exact(a)) => dqc1_exact_cmd(a),
        Command::Dqc1(Dqc1Cmd::Sample(a)) => dqc1_sample_cmd(a),
        Command::Coherence(CoherenceCmd::Spectrum(a)) => coherence_spectrum_cmd(a),
        Command::Coherence(CoherenceCmd::Signal(a)) => coherence_signal_cmd(a),
    }
}

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn need<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--state {kind} needs --{flag}")))
}

fn kind_name(kind: StateKind) -> String {
    clap::ValueEnum::to_possible_value(&kind)
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn bell(b: BellArg) -> BellState {
    match b {
        BellArg::PsiPlus => BellState::PsiPlus,
        BellArg::PhiPlus => BellState::PhiPlus,
        BellArg::PhiMinus => BellState::PhiMinus,
        BellArg::PsiMinus => BellState::PsiMinus,
    }
}

fn sign(s: SignArg) -> DeviationSign {
    match s {
        SignArg::Minus => DeviationSign::Minus,
        SignArg::Plus => DeviationSign::Plus,
    }
}

/// Resolve the input state and describe how it was obtained.
fn build_state(src: &StateSource) -> CliResult<(DensityMatrix, BTreeMap<String, Value>)> {
    let mut meta = BTreeMap::new();
    if let Some(path) = &src.input {
        meta.insert("input".into(), json!(path.display().to_string()));
        return Ok((state_file::load(path)?, meta));
    }
    let Some(kind) = src.state else {
        return usage("give either --input FILE or --state KIND");
    };
    let name = kind_name(kind);
    meta.insert("kind".into(), json!(name));
    let rho = match kind {
        StateKind::Werner => {
            let eps = need(src.epsilon, "epsilon", &name)?;
            meta.insert("epsilon".into(), json!(eps));
            werner(eps)?
        }
        StateKind::Bell => {
            meta.insert("bell".into(), json!(bell(src.bell)));
            bell(src.bell).vector().to_density()
        }
        StateKind::BellMixture => {
            let w: [f64; 4] = src
                .weights
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage("--weights takes exactly four values".into()))?;
            meta.insert("weights".into(), json!(w));
            bell_mixture(w)?
        }
        StateKind::Cat => {
            let n = need(src.n, "n", &name)?;
            meta.insert("n".into(), json!(n));
            cat_state(n)?.to_density()
        }
        StateKind::PseudoPureCat => {
            let n = need(src.n, "n", &name)?;
            let eps = need(src.epsilon, "epsilon", &name)?;
            meta.insert("n".into(), json!(n));
            meta.insert("epsilon".into(), json!(eps));
            pseudo_pure(n, eps, &cat_state(n)?)?
        }
        StateKind::Deviation => {
            let n = need(src.n, "n", &name)?;
            let eps = need(src.epsilon, "epsilon", &name)?;
            meta.insert("n".into(), json!(n));
            meta.insert("epsilon".into(), json!(eps));
            meta.insert("sign".into(), json!(sign(src.sign)));
            deviation_state(n, eps, sign(src.sign))?
        }
        StateKind::Thermal => {
            if src.freqs.is_empty() {
                return usage("--state thermal needs --freqs");
            }
            let beta = need(src.beta, "beta", &name)?;
            let form = if src.first_order {
                ThermalForm::FirstOrder
            } else {
                ThermalForm::Exact
            };
            meta.insert("freqs".into(), json!(src.freqs));
            meta.insert("beta".into(), json!(beta));
            meta.insert("form".into(), json!(form));
            thermal_state(&ThermalSpec::zeeman(&src.freqs, beta)?, form)?
        }
        StateKind::MaximallyMixed => {
            let n = need(src.n, "n", &name)?;
            if n == 0 {
                return usage("--n must be at least 1");
            }
            meta.insert("n".into(), json!(n));
            // zero polarization; goes through the cap check
            deviation_state(n, 0.0, DeviationSign::Minus)?
        }
        StateKind::Diagonal => {
            if src.probs.is_empty() {
                return usage("--state diagonal needs --probs");
            }
            meta.insert("probs".into(), json!(src.probs));
            DensityMatrix::diagonal(&src.probs)?
        }
    };
    Ok((rho, meta))
}

fn output_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn matrix_table(rho: &DensityMatrix) -> Table {
    let mut t = Table::new(&["row", "col", "re", "im"]);
    let m = rho.matrix();
    for r in 0..rho.dim() {
        for c in 0..rho.dim() {
            t.push(vec![
                r.to_string(),
                c.to_string(),
                num(m[(r, c)].re),
                num(m[(r, c)].im),
            ]);
        }
    }
    t
}

fn state_make(a: &MakeArgs) -> CliResult<Report> {
    let (rho, meta) = build_state(&a.source)?;
    let file = StateFile::from_density(&rho, meta);
    match &a.output {
        None => Ok(Report::new(&file, matrix_table(&rho))),
        Some(p) => {
            let path = output_path(p);
            file.write(&path)?;
            let summary = json!({
                "path": path.display().to_string(),
                "n_qubits": rho.n_qubits(),
                "purity": rho.purity(),
            });
            let t = Table::new(&["path", "n_qubits", "purity"]).row(vec![
                path.display().to_string(),
                rho.n_qubits().to_string(),
                num(rho.purity()),
            ]);
            Ok(Report::new(summary, t))
        }
    }
}

fn state_check(input: &Path) -> CliResult<Report> {
    let rho = state_file::load(input)?;
    let min_eigenvalue = rho.eigenvalues().last().copied().unwrap_or(0.0);
    let v = json!({
        "n_qubits": rho.n_qubits(),
        "trace": rho.matrix().trace().re,
        "purity": rho.purity(),
        "entropy": rho.entropy(),
        "min_eigenvalue": min_eigenvalue,
    });
    let t = Table::new(&["n_qubits", "trace", "purity", "entropy", "min_eigenvalue"]).row(vec![
        rho.n_qubits().to_string(),
        num(rho.matrix().trace().re),
        num(rho.purity()),
        num(rho.entropy()),
        num(min_eigenvalue),
    ]);
    Ok(Report::new(v, t))
}

fn cut_of(rho: &DensityMatrix, side_a: &[usize]) -> CliResult<Bipartition> {
    Ok(Bipartition::new(rho.n_qubits(), side_a)?)
}

fn side(qubits: &[usize]) -> String {
    qubits
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn entangle_ppt(a: &PptArgs) -> CliResult<Report> {
    let (rho, _) = build_state(&a.source)?;
    let cut = cut_of(&rho, &a.cut)?;
    let r = ppt_check(&rho, &cut)?;
    let t = Table::new(&[
        "min_eigenvalue",
        "is_ppt",
        "negativity",
        "conclusive",
        "verdict",
        "side_a",
        "side_b",
    ])
    .row(vec![
        num(r.min_eigenvalue),
        r.is_ppt.to_string(),
        num(r.negativity),
        r.conclusive.to_string(),
        serde_json::to_value(r.verdict)
            .unwrap()
            .as_str()
            .unwrap_or_default()
            .to_string(),
        side(cut.side_a()),
        side(cut.side_b()),
    ]);
    Ok(Report::new(&r, t))
}

fn cat_cut(c: CutArg) -> CatCut {
    match c {
        CutArg::OneVsRest => CatCut::OneVsRest,
        CutArg::Balanced => CatCut::Balanced,
    }
}

fn entangle_threshold(a: &ThresholdArgs) -> CliResult<Report> {
    if !(a.tol > 0.0 && a.tol < 1.0) {
        return usage(format!("--tol must lie in (0, 1), got {}", a.tol));
    }
    let headers = ["family", "n", "epsilon_c", "analytic"];
    match (a.family, a.n_max) {
        (FamilyArg::Werner, Some(_)) => usage("--n-max applies to --family cat only"),
        (FamilyArg::Werner, None) => {
            let eps = threshold_bisect(&ParametrizedFamily::werner(), a.tol)?;
            let analytic = 1.0 / 3.0;
            let v = json!({ "family": "werner", "n": 2, "epsilon_c": eps, "analytic": analytic, "tol": a.tol });
            let t = Table::new(&headers).row(vec![
                "werner".into(),
                "2".into(),
                num(eps),
                num(analytic),
            ]);
            Ok(Report::new(v, t))
        }
        (FamilyArg::Cat, None) => {
            let family = ParametrizedFamily::pseudo_pure_cat(a.n, cat_cut(a.cut))?;
            let eps = threshold_bisect(&family, a.tol)?;
            let analytic = cat_threshold_analytic(a.n);
            let v = json!({
                "family": "cat", "n": a.n, "epsilon_c": eps, "analytic": analytic,
                "tol": a.tol, "cut": family.cut(),
            });
            let t = Table::new(&headers).row(vec![
                "cat".into(),
                a.n.to_string(),
                num(eps),
                num(analytic),
            ]);
            Ok(Report::new(v, t))
        }
        (FamilyArg::Cat, Some(n_max)) => {
            if n_max < 2 {
                return usage("--n-max must be at least 2");
            }
            let rows = cat_threshold_table(2..=n_max, a.tol, cat_cut(a.cut))?;
            let mut t = Table::new(&headers);
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let analytic = cat_threshold_analytic(r.n);
                    t.push(vec![
                        "cat".into(),
                        r.n.to_string(),
                        num(r.epsilon_c),
                        num(analytic),
                    ]);
                    json!({ "n": r.n, "epsilon_c": r.epsilon_c, "analytic": analytic })
                })
                .collect();
            Ok(Report::new(
                json!({ "family": "cat", "tol": a.tol, "rows": rows_json }),
                t,
            ))
        }
    }
}

fn entangle_crossing(a: &CrossingArgs) -> CliResult<Report> {
    if !(a.epsilon_at_two >= 0.0 && a.epsilon_at_two <= 1.0) {
        return usage(format!(
            "--epsilon-at-two must lie in [0, 1], got {}",
            a.epsilon_at_two
        ));
    }
    let curve = match a.curve {
        CurveArg::SeparabilityBound => ThresholdCurve::SeparabilityBound,
        CurveArg::CatPpt => ThresholdCurve::CatPpt,
    };
    let mut model = PolarizationModel {
        form: PolarizationForm::calibrated(a.epsilon_at_two),
        threshold_curve: curve,
        numeric_thresholds: BTreeMap::new(),
    };
    if let Some(top) = a.numeric_up_to {
        if curve != ThresholdCurve::CatPpt {
            return usage("--numeric-up-to needs --curve cat-ppt");
        }
        if top < 2 || top > a.n_max {
            return usage("--numeric-up-to must lie in 2..=n-max");
        }
        for row in cat_threshold_table(2..=top, a.tol, CatCut::OneVsRest)? {
            model.numeric_thresholds.insert(row.n, row.epsilon_c);
        }
    }
    let report = crossing_analysis(&model, a.n_max)?;
    let mut t = Table::new(&["n", "polarization", "threshold", "source"]);
    for p in &report.points {
        let source = serde_json::to_value(p.source).unwrap();
        t.push(vec![
            p.n.to_string(),
            num(p.polarization),
            num(p.threshold),
            source.as_str().unwrap().to_string(),
        ]);
    }
    let v = json!({
        "model": model,
        "n_cross": report.n_cross,
        "unique": report.unique,
        "points": report.points,
    });
    Ok(Report::new(v, t))
}

fn discord_cmd(a: &DiscordArgs) -> CliResult<Report> {
    let (rho, _) = build_state(&a.source)?;
    let cut = cut_of(&rho, &a.cut)?;
    let basis = match (a.theta, a.phi) {
        (Some(t), Some(p)) => Some(ProjectiveBasis::new(t, p)?),
        _ => None,
    };
    let settings = DiscordSettings {
        optimizer: OptimizerSettings {
            theta_points: a.theta_points,
            phi_points: a.phi_points,
            refine_iters: a.refine_iters,
        },
        basis,
    };
    let r = discord(&rho, &cut, &settings)?;
    let t = Table::new(&[
        "I",
        "J_at_basis",
        "J_max",
        "D_standard",
        "D_reversed_sign",
        "theta_argmax",
        "phi_argmax",
    ])
    .row(vec![
        num(r.mutual_information),
        num(r.j_at_basis),
        num(r.j_max),
        num(r.d_standard),
        num(r.d_reversed_sign),
        num(r.basis_argmax.theta),
        num(r.basis_argmax.phi),
    ]);
    Ok(Report::new(&r, t))
}

fn power(gate: Operator, n: usize) -> Operator {
    (1..n).fold(gate.clone(), |acc, _| acc.tensor(&gate))
}

fn unitary(a: &Dqc1Args) -> CliResult<Operator> {
    if a.n == 0 {
        return usage("--n must be at least 1");
    }
    if a.n + 1 > mixstate::max_qubits() {
        return Err(mixstate::Error::Resource(format!(
            "{} qubits with the clean qubit exceed the cap of {}",
            a.n + 1,
            mixstate::max_qubits()
        ))
        .into());
    }
    Ok(match a.u {
        UnitaryArg::Identity => Operator::identity(a.n),
        UnitaryArg::Random => random_unitary(1 << a.n, a.u_seed)?,
        UnitaryArg::PauliX => power(Operator::pauli_x(), a.n),
        UnitaryArg::PauliZ => power(Operator::pauli_z(), a.n),
        UnitaryArg::Hadamard => power(Operator::hadamard(), a.n),
        UnitaryArg::PhaseS => power(Operator::phase_s(), a.n),
    })
}

fn dqc1_options(a: &Dqc1Args) -> Dqc1Options {
    Dqc1Options {
        readout: match a.readout {
            ReadoutArg::Canonical => Readout::Canonical,
            ReadoutArg::FinalHadamard => Readout::FinalHadamard,
        },
        sign: sign(a.sign),
    }
}

fn dqc1_exact_cmd(a: &Dqc1Args) -> CliResult<Report> {
    let u = unitary(a)?;
    let z = dqc1_exact_with(&u, a.epsilon, dqc1_options(a))?;
    // print 0 rather than -0
    let z = z + mixstate::C64::new(0.0, 0.0);
    let v = json!({ "re": z.re, "im": z.im, "n": a.n, "epsilon": a.epsilon });
    let t = Table::new(&["re", "im", "n", "epsilon"]).row(vec![
        num(z.re),
        num(z.im),
        a.n.to_string(),
        num(a.epsilon),
    ]);
    Ok(Report::new(v, t))
}

fn dqc1_sample_cmd(a: &SampleArgs) -> CliResult<Report> {
    let u = unitary(&a.circuit)?;
    let (re, im) = dqc1_sampled_with(
        &u,
        a.circuit.epsilon,
        a.shots,
        a.seed,
        dqc1_options(&a.circuit),
    )?;
    let v = json!({
        "re": { "estimate": re.estimate, "stderr": re.stderr },
        "im": { "estimate": im.estimate, "stderr": im.stderr },
        "shots": a.shots,
        "seed": a.seed,
        "n": a.circuit.n,
        "epsilon": a.circuit.epsilon,
    });
    let mut t = Table::new(&["quadrature", "estimate", "stderr", "shots", "seed"]);
    for (name, r) in [("re", re), ("im", im)] {
        t.push(vec![
            name.into(),
            num(r.estimate),
            num(r.stderr),
            r.shots.to_string(),
            r.seed.to_string(),
        ]);
    }
    Ok(Report::new(v, t))
}

fn coherence_spectrum_cmd(a: &SpectrumArgs) -> CliResult<Report> {
    let (mut rho, _) = build_state(&a.source)?;
    if let Some(phi) = a.rotate {
        if !phi.is_finite() {
            return usage("--rotate must be finite");
        }
        rho = collective_rotation(&rho, phi);
    }
    if let Some(sigma) = a.dephase {
        rho = collective_dephasing(&rho, &DephasingSpec::new(sigma)?);
    }
    let s = coherence_spectrum(&rho);
    let mut t = Table::new(&["order", "weight"]);
    for (p, w) in &s.weights {
        t.push(vec![p.to_string(), num(*w)]);
    }
    Ok(Report::new(&s, t))
}

fn coherence_signal_cmd(a: &SignalArgs) -> CliResult<Report> {
    let s = mq_signal(a.n, a.epsilon, a.samples)?;
    let mut t = Table::new(&["k", "phi", "signal", "order", "amplitude"]);
    for k in 0..s.phi.len() {
        t.push(vec![
            k.to_string(),
            num(s.phi[k]),
            num(s.signal[k]),
            s.spectrum[k].order.to_string(),
            num(s.spectrum[k].amplitude),
        ]);
    }
    Ok(Report::new(&s, t))
}
