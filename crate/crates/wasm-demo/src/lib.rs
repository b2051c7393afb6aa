//! Browser bindings for the demo page in `www/`.
//!
//! Each export returns a JSON string so the page needs no extra glue.

use mixstate::coherence::mq_signal;
use mixstate::discord::{discord, DiscordSettings, OptimizerSettings};
use mixstate::entanglement::{
    crossing_analysis, ppt_check, PolarizationForm, PolarizationModel, ThresholdCurve,
};
use mixstate::factory::werner;
use mixstate::Bipartition;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Default, Serialize)]
pub struct WernerCurve {
    pub epsilon: Vec<f64>,
    pub negativity: Vec<f64>,
    pub min_pt_eigenvalue: Vec<f64>,
    pub discord: Vec<f64>,
}

/// PPT data and discord for Werner states on `points` evenly spaced `ε`.
pub fn werner_curve_data(points: usize, grid: usize) -> mixstate::Result<WernerCurve> {
    if points < 2 || grid < 2 {
        return Err(mixstate::Error::Argument(
            "need at least two points and a grid of 2".into(),
        ));
    }
    let cut = Bipartition::one_vs_rest(2, 0)?;
    let settings = DiscordSettings {
        optimizer: OptimizerSettings {
            theta_points: grid,
            phi_points: 2 * grid,
            refine_iters: 100,
        },
        basis: None,
    };
    let mut out = WernerCurve::default();
    for k in 0..points {
        let eps = k as f64 / (points - 1) as f64;
        let rho = werner(eps)?;
        let ppt = ppt_check(&rho, &cut)?;
        out.epsilon.push(eps);
        out.negativity.push(ppt.negativity);
        out.min_pt_eigenvalue.push(ppt.min_eigenvalue);
        out.discord.push(discord(&rho, &cut, &settings)?.d_standard);
    }
    Ok(out)
}

pub fn crossing_data(
    epsilon_at_two: f64,
    n_max: usize,
    curve: &str,
) -> mixstate::Result<mixstate::entanglement::CrossingReport> {
    let threshold_curve = match curve {
        "separability-bound" => ThresholdCurve::SeparabilityBound,
        "cat-ppt" => ThresholdCurve::CatPpt,
        other => {
            return Err(mixstate::Error::Argument(format!(
                "unknown curve {other:?}"
            )))
        }
    };
    let model = PolarizationModel {
        form: PolarizationForm::calibrated(epsilon_at_two),
        threshold_curve,
        ..Default::default()
    };
    crossing_analysis(&model, n_max)
}

fn to_json<T: Serialize>(r: mixstate::Result<T>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn werner_curve(points: usize, grid: usize) -> Result<String, JsError> {
    to_json(werner_curve_data(points, grid))
}

#[wasm_bindgen]
pub fn multiple_quantum(n: usize, epsilon: f64, samples: usize) -> Result<String, JsError> {
    to_json(mq_signal(n, epsilon, samples))
}

#[wasm_bindgen]
pub fn crossing(epsilon_at_two: f64, n_max: usize, curve: &str) -> Result<String, JsError> {
    to_json(crossing_data(epsilon_at_two, n_max, curve))
}
