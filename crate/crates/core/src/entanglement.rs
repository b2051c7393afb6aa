//! Entanglement certificates from the partial-transpose spectrum, threshold
//! bisection for one-parameter state families, and the comparison between
//! achievable pseudo-pure polarization and the entanglement threshold as the
//! register grows.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::factory::{cat_state, pseudo_pure, werner, NMR_POLARIZATION};
use crate::linalg::{eig_hermitian, TOL};
use crate::state::{Bipartition, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Negative partial transpose: entanglement is certified.
    Entangled,
    /// PPT on two qubits, where PPT is equivalent to separability.
    Separable,
    /// PPT on more than two qubits: no conclusion.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub min_eigenvalue: f64,
    pub is_ppt: bool,
    /// Sum of the magnitudes of the negative partial-transpose eigenvalues.
    pub negativity: f64,
    pub conclusive: bool,
    pub verdict: Verdict,
    pub cut: Bipartition,
}

pub fn ppt_check(rho: &DensityMatrix, cut: &Bipartition) -> Result<PptReport> {
    let pt = rho.partial_transpose(cut)?;
    let spectrum = eig_hermitian(pt.matrix())?;
    let min_eigenvalue = spectrum.last().copied().unwrap_or(0.0);
    let is_ppt = min_eigenvalue >= -TOL;
    let negativity = if is_ppt {
        0.0
    } else {
        spectrum.iter().filter(|&&l| l < 0.0).map(|l| -l).sum()
    };
    let verdict = match (is_ppt, rho.n_qubits() == 2) {
        (false, _) => Verdict::Entangled,
        (true, true) => Verdict::Separable,
        (true, false) => Verdict::Inconclusive,
    };
    Ok(PptReport {
        min_eigenvalue,
        is_ppt,
        negativity,
        conclusive: verdict != Verdict::Inconclusive,
        verdict,
        cut: cut.clone(),
    })
}

type Generator = dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync;

/// A map `ε ∈ [0, 1] → ρ(ε)` together with the cut to test it across.
pub struct ParametrizedFamily {
    name: String,
    cut: Bipartition,
    generator: Box<Generator>,
}

impl fmt::Debug for ParametrizedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametrizedFamily")
            .field("name", &self.name)
            .field("cut", &self.cut)
            .finish()
    }
}

/// Which bipartition to use for cat-state families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatCut {
    /// Qubit 0 against the rest.
    #[default]
    OneVsRest,
    /// First half against second half.
    Balanced,
}

impl CatCut {
    pub fn bipartition(self, n_qubits: usize) -> Result<Bipartition> {
        match self {
            CatCut::OneVsRest => Bipartition::one_vs_rest(n_qubits, 0),
            CatCut::Balanced => Bipartition::balanced(n_qubits),
        }
    }
}

impl ParametrizedFamily {
    pub fn new(
        name: impl Into<String>,
        cut: Bipartition,
        generator: impl Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            cut,
            generator: Box::new(generator),
        }
    }

    pub fn werner() -> Self {
        Self::new("werner", Bipartition::one_vs_rest(2, 0).unwrap(), werner)
    }

    /// `(1-ε)/2^n · I + ε |cat_n⟩⟨cat_n|`.
    pub fn pseudo_pure_cat(n_qubits: usize, cut: CatCut) -> Result<Self> {
        let psi = cat_state(n_qubits)?;
        let cut = cut.bipartition(n_qubits)?;
        Ok(Self::new(
            format!("pseudo-pure-cat-{n_qubits}"),
            cut,
            move |eps| pseudo_pure(n_qubits, eps, &psi),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cut(&self) -> &Bipartition {
        &self.cut
    }

    pub fn state(&self, epsilon: f64) -> Result<DensityMatrix> {
        (self.generator)(epsilon)
    }

    pub fn ppt(&self, epsilon: f64) -> Result<PptReport> {
        ppt_check(&self.state(epsilon)?, &self.cut)
    }
}

/// Bisect the PPT/NPT boundary of a family to absolute tolerance `tol`.
///
/// The family must be PPT at `ε = 0` and NPT at `ε = 1`.
pub fn threshold_bisect(family: &ParametrizedFamily, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return argument(format!("tolerance must be positive, got {tol}"));
    }
    if !family.ppt(0.0)?.is_ppt {
        return Err(Error::Domain(format!(
            "family `{}` is already entangled at epsilon = 0",
            family.name()
        )));
    }
    if family.ppt(1.0)?.is_ppt {
        return Err(Error::Domain(format!(
            "family `{}` is PPT at epsilon = 1; no transition to bracket",
            family.name()
        )));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if family.ppt(mid)?.is_ppt {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `1 / (1 + 2^{n-1})`: PPT threshold of the pseudo-pure cat state.
pub fn cat_threshold_analytic(n_qubits: usize) -> f64 {
    1.0 / (1.0 + 2f64.powi(n_qubits as i32 - 1))
}

/// `1 / (1 + 2^{2n-1})`: below this every pseudo-pure state on `n` qubits is
/// separable, whatever the pure component.
pub fn separability_bound(n_qubits: usize) -> f64 {
    1.0 / (1.0 + 2f64.powi(2 * n_qubits as i32 - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub n: usize,
    pub epsilon_c: f64,
}

/// Bisected cat thresholds for each `n`; the result is checked to be
/// strictly decreasing.
pub fn cat_threshold_table(
    n_range: RangeInclusive<usize>,
    tol: f64,
    cut: CatCut,
) -> Result<Vec<ThresholdRow>> {
    let ns: Vec<usize> = n_range.collect();
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return argument(format!("cat thresholds need at least two qubits, got {n}"));
    }
    if let Some(&top) = ns.last() {
        crate::check_qubit_cap(top)?;
    }
    let rows = crate::par::map_indexed(ns.len(), |k| -> Result<ThresholdRow> {
        let n = ns[k];
        let family = ParametrizedFamily::pseudo_pure_cat(n, cut)?;
        Ok(ThresholdRow {
            n,
            epsilon_c: threshold_bisect(&family, tol)?,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    if let Some(w) = rows.windows(2).find(|w| w[1].epsilon_c >= w[0].epsilon_c) {
        return Err(Error::Domain(format!(
            "threshold table not strictly decreasing at n = {}",
            w[1].n
        )));
    }
    Ok(rows)
}

/// Achievable pseudo-pure polarization as a function of register size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PolarizationForm {
    /// `c · n · 2^{-n}`: the pseudo-pure fraction extracted from a
    /// high-temperature thermal state.
    PseudoPureSignal { c: f64 },
    /// Polarization independent of `n`.
    Constant { epsilon: f64 },
}

impl PolarizationForm {
    /// `c · n · 2^{-n}` with `c` chosen so that `ε(2) = epsilon_at_two`.
    pub fn calibrated(epsilon_at_two: f64) -> Self {
        PolarizationForm::PseudoPureSignal {
            c: 2.0 * epsilon_at_two,
        }
    }

    pub fn at(&self, n_qubits: usize) -> f64 {
        match *self {
            PolarizationForm::PseudoPureSignal { c } => {
                c * n_qubits as f64 * 2f64.powi(-(n_qubits as i32))
            }
            PolarizationForm::Constant { epsilon } => epsilon,
        }
    }
}

impl Default for PolarizationForm {
    fn default() -> Self {
        Self::calibrated(NMR_POLARIZATION)
    }
}

/// Threshold `ε_c(n)` above which entanglement is (or may be) present.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdCurve {
    /// [`cat_threshold_analytic`]: entanglement certified above it.
    CatPpt,
    /// [`separability_bound`]: separability guaranteed below it.
    #[default]
    SeparabilityBound,
}

impl ThresholdCurve {
    pub fn at(self, n_qubits: usize) -> f64 {
        match self {
            ThresholdCurve::CatPpt => cat_threshold_analytic(n_qubits),
            ThresholdCurve::SeparabilityBound => separability_bound(n_qubits),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolarizationModel {
    pub form: PolarizationForm,
    pub threshold_curve: ThresholdCurve,
    /// Numerically computed thresholds that override the analytic curve
    /// at the listed sizes.
    #[serde(default)]
    pub numeric_thresholds: BTreeMap<usize, f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdSource {
    Numeric,
    Analytic,
    /// Analytic curve evaluated beyond the dense-simulation cap.
    Extrapolated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub polarization: f64,
    pub threshold: f64,
    pub source: ThresholdSource,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    /// Smallest `n` with `ε(n) ≥ ε_c(n)`, if any in range.
    pub n_cross: Option<usize>,
    /// The sign of `ε(n) - ε_c(n)` changes at most once over the range.
    pub unique: bool,
    pub points: Vec<CurvePoint>,
}

/// Relative slack when comparing polarization against threshold, so that a
/// model calibrated to meet the curve exactly at some `n` crosses there.
const CROSSING_RTOL: f64 = 1e-12;

/// Compare `ε(n)` with `ε_c(n)` for `n = 2..=n_max`.
pub fn crossing_analysis(model: &PolarizationModel, n_max: usize) -> Result<CrossingReport> {
    if n_max < 2 {
        return argument(format!("n_max must be at least 2, got {n_max}"));
    }
    let cap = crate::max_qubits();
    let points: Vec<CurvePoint> = (2..=n_max)
        .map(|n| {
            let (threshold, source) = match model.numeric_thresholds.get(&n) {
                Some(&t) => (t, ThresholdSource::Numeric),
                None if n > cap => (model.threshold_curve.at(n), ThresholdSource::Extrapolated),
                None => (model.threshold_curve.at(n), ThresholdSource::Analytic),
            };
            CurvePoint {
                n,
                polarization: model.form.at(n),
                threshold,
                source,
            }
        })
        .collect();

    if let Some(w) = points.windows(2).find(|w| w[1].threshold >= w[0].threshold) {
        return argument(format!(
            "threshold curve is not strictly decreasing at n = {}",
            w[1].n
        ));
    }
    if points
        .iter()
        .any(|p| !(p.polarization >= 0.0 && p.polarization.is_finite()))
    {
        return argument("polarization model must be finite and nonnegative");
    }

    let above: Vec<bool> = points
        .iter()
        .map(|p| p.polarization >= p.threshold * (1.0 - CROSSING_RTOL))
        .collect();
    let n_cross = points
        .iter()
        .zip(&above)
        .find(|(_, &a)| a)
        .map(|(p, _)| p.n);
    let flips = above.windows(2).filter(|w| w[0] != w[1]).count();
    let unique = flips <= 1;
    Ok(CrossingReport {
        n_cross,
        unique,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::BellState;
    use approx::assert_abs_diff_eq;

    #[test]
    fn werner_ppt_examples() {
        let cut = Bipartition::one_vs_rest(2, 0).unwrap();
        let r = ppt_check(&werner(0.2).unwrap(), &cut).unwrap();
        assert!(r.is_ppt && r.conclusive);
        assert_eq!(r.verdict, Verdict::Separable);
        let r = ppt_check(&werner(0.5).unwrap(), &cut).unwrap();
        assert_abs_diff_eq!(r.min_eigenvalue, -0.125, epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::Entangled);
        assert_abs_diff_eq!(r.negativity, 0.125, epsilon = 1e-12);
    }

    #[test]
    fn product_is_ppt() {
        let a = BellState::PsiPlus
            .vector()
            .to_density()
            .partial_trace(&[0])
            .unwrap();
        let b = werner(0.7).unwrap();
        let rho = a.tensor(&b);
        for side in [vec![0], vec![1, 2]] {
            let r = ppt_check(&rho, &Bipartition::new(3, &side).unwrap()).unwrap();
            assert_eq!(r.negativity, 0.0);
            assert!(r.is_ppt);
        }
        // splitting the Werner pair exposes it
        let r = ppt_check(&rho, &Bipartition::new(3, &[1]).unwrap()).unwrap();
        assert_abs_diff_eq!(r.negativity, (3.0 * 0.7 - 1.0) / 4.0, epsilon = 1e-12);
        let r = ppt_check(&rho, &Bipartition::new(3, &[0]).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn cut_size_mismatch() {
        let cut = Bipartition::one_vs_rest(3, 0).unwrap();
        assert!(matches!(
            ppt_check(&werner(0.2).unwrap(), &cut),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn werner_threshold() {
        let eps = threshold_bisect(&ParametrizedFamily::werner(), 1e-9).unwrap();
        assert_abs_diff_eq!(eps, 1.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn cat_thresholds_small() {
        let f3 = ParametrizedFamily::pseudo_pure_cat(3, CatCut::OneVsRest).unwrap();
        assert_abs_diff_eq!(threshold_bisect(&f3, 1e-10).unwrap(), 0.2, epsilon = 1e-9);
        let f2 = ParametrizedFamily::pseudo_pure_cat(2, CatCut::OneVsRest).unwrap();
        assert_abs_diff_eq!(
            threshold_bisect(&f2, 1e-10).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-9
        );
        let f4 = ParametrizedFamily::pseudo_pure_cat(4, CatCut::Balanced).unwrap();
        assert_abs_diff_eq!(
            threshold_bisect(&f4, 1e-10).unwrap(),
            1.0 / 9.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn non_bracketing_family_is_domain_error() {
        let cut = Bipartition::one_vs_rest(2, 0).unwrap();
        let never = ParametrizedFamily::new("mixed", cut.clone(), |_| {
            Ok(DensityMatrix::maximally_mixed(2))
        });
        assert!(matches!(
            threshold_bisect(&never, 1e-6),
            Err(Error::Domain(_))
        ));
        let always = ParametrizedFamily::new("bell", cut, |_| {
            Ok(BellState::PsiPlus.vector().to_density())
        });
        assert!(matches!(
            threshold_bisect(&always, 1e-6),
            Err(Error::Domain(_))
        ));
        assert!(threshold_bisect(&ParametrizedFamily::werner(), 0.0).is_err());
    }

    #[test]
    fn table_small_range() {
        let rows = cat_threshold_table(2..=5, 1e-10, CatCut::OneVsRest).unwrap();
        for r in &rows {
            assert_abs_diff_eq!(r.epsilon_c, cat_threshold_analytic(r.n), epsilon = 1e-8);
        }
        assert!(cat_threshold_table(1..=3, 1e-6, CatCut::OneVsRest).is_err());
    }

    #[test]
    fn crossing_calibrated_at_five() {
        let target = cat_threshold_analytic(5);
        let c = target / (5.0 * 2f64.powi(-5));
        let model = PolarizationModel {
            form: PolarizationForm::PseudoPureSignal { c },
            threshold_curve: ThresholdCurve::CatPpt,
            numeric_thresholds: BTreeMap::new(),
        };
        let report = crossing_analysis(&model, 20).unwrap();
        assert_eq!(report.n_cross, Some(5));
        assert!(report.unique);
    }

    #[test]
    fn crossing_absent_for_tiny_scale() {
        let model = PolarizationModel {
            form: PolarizationForm::PseudoPureSignal { c: 1e-300 },
            ..Default::default()
        };
        let report = crossing_analysis(&model, 40).unwrap();
        assert_eq!(report.n_cross, None);
        assert!(report.unique);
    }

    #[test]
    fn crossing_flags_extrapolation() {
        let mut model = PolarizationModel {
            threshold_curve: ThresholdCurve::CatPpt,
            ..Default::default()
        };
        model.numeric_thresholds.insert(3, 0.2);
        let report = crossing_analysis(&model, 14).unwrap();
        let source = |n: usize| report.points.iter().find(|p| p.n == n).unwrap().source;
        assert_eq!(source(3), ThresholdSource::Numeric);
        assert_eq!(source(4), ThresholdSource::Analytic);
        assert_eq!(source(14), ThresholdSource::Extrapolated);
    }

    #[test]
    fn default_model_calibration() {
        assert_abs_diff_eq!(PolarizationForm::default().at(2), 1e-5, epsilon = 1e-20);
    }

    #[test]
    fn default_model_crosses_separability_bound() {
        // 2e-5 n 2^-n against 1/(1 + 2^(2n-1)): 12·2^11 < 5e4 < 13·2^12
        let report = crossing_analysis(&PolarizationModel::default(), 20).unwrap();
        assert_eq!(report.n_cross, Some(13));
        assert!(report.unique);
        let cat = PolarizationModel {
            threshold_curve: ThresholdCurve::CatPpt,
            ..Default::default()
        };
        assert_eq!(crossing_analysis(&cat, 20).unwrap().n_cross, None);
    }
}
