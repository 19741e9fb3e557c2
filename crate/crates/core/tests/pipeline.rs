//! Cross-module integration: training, persistence, the Gaussian
//! laboratory, and the table pipeline working end to end.

use statlearn::data::{parse_wisconsin, reproduce_table_on, ExperimentConfig};
use statlearn::gaussian::{algorithmic_error_estimate, sample_pair, GaussianClass, GaussianPair};
use statlearn::model::{confusion, Classifier, LossSpec, SeparatorModel};
use statlearn::solver::{train_polynomial, SolverConfig};

fn gaussian_pair(mu1: Vec<f64>, var1: f64, mu2: Vec<f64>, var2: f64) -> GaussianPair {
    let d = mu1.len();
    let eye = |s: f64| {
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { s } else { 0.0 }).collect())
            .collect::<Vec<Vec<f64>>>()
    };
    GaussianPair::new(
        GaussianClass::new(mu1, eye(var1)).unwrap(),
        GaussianClass::new(mu2, eye(var2)).unwrap(),
        0.5,
        0.5,
    )
    .unwrap()
}

#[test]
fn trained_model_round_trips_through_text_with_identical_predictions() {
    let pair = gaussian_pair(vec![1.0, 0.5], 1.0, vec![-1.0, -0.5], 1.5);
    let data = sample_pair(&pair, 400, 11).unwrap();
    let config = SolverConfig {
        max_iterations: 1_500,
        ..SolverConfig::default()
    };
    let model = train_polynomial(&data, 2, &LossSpec::Hinge, &config).unwrap();

    let text = model.separator.to_text();
    let reloaded = SeparatorModel::from_text(&text).unwrap();
    assert_eq!(model.separator, reloaded);
    for s in data.samples() {
        assert_eq!(
            model.separator.classify(s.x()).unwrap(),
            reloaded.classify(s.x()).unwrap()
        );
    }
}

#[test]
fn table_pipeline_is_deterministic_on_synthetic_records() {
    // synthetic file in the UCI format: feature 3 (and weakly 5) carry the
    // signal, everything else is noise
    use rand::Rng;
    let mut rng = statlearn::seed::rng_from(5);
    let mut text = String::new();
    for id in 0..260 {
        let signal: f64 = rng.random_range(1.0..=10.0);
        let label = if signal > 5.5 { 4 } else { 2 };
        let mut fields: Vec<String> = vec![format!("{}", 1000 + id)];
        for j in 0..9 {
            let v = match j {
                2 => signal.round() as i64,
                4 => ((signal + rng.random_range(-3.0..3.0)).clamp(1.0, 10.0)).round() as i64,
                _ => rng.random_range(1..=10),
            };
            fields.push(v.to_string());
        }
        fields.push(label.to_string());
        text.push_str(&fields.join(","));
        text.push('\n');
    }
    let load = parse_wisconsin(&text).unwrap();
    assert_eq!(load.data.len(), 260);

    let mut cfg = ExperimentConfig::new("unused");
    cfg.n_train = 130;
    cfg.repetitions = 1;
    cfg.feature_count = 2;
    cfg.seed = 3;
    cfg.solver.max_iterations = 800;

    let a = reproduce_table_on(&load, &cfg).unwrap();
    let b = reproduce_table_on(&load, &cfg).unwrap();
    assert_eq!(a.runs[0].selected_features, b.runs[0].selected_features);
    assert_eq!(a.runs[0].full_linear, b.runs[0].full_linear);
    assert_eq!(a.runs[0].reduced_linear, b.runs[0].reduced_linear);
    assert_eq!(a.runs[0].reduced_quadratic, b.runs[0].reduced_quadratic);
    // the informative coordinate must be picked first
    assert_eq!(a.runs[0].selected_features[0], 2);
    // and both reduced models must classify decently on the 1..10-scale
    // features (the quadratic lift spreads columns over two orders of
    // magnitude, which the solver's equilibration has to absorb)
    assert!(a.median_reduced_linear < 0.2, "{}", a.median_reduced_linear);
    assert!(
        a.median_reduced_quadratic < 0.2,
        "{}",
        a.median_reduced_quadratic
    );
}

#[test]
fn approximation_error_vanishes_when_the_class_contains_the_optimum() {
    // equal covariances: the optimal surface is affine, so both the affine
    // and the quadratic class approximate it exactly
    let pair = gaussian_pair(vec![1.0], 1.0, vec![-1.0], 1.0);
    let solver = SolverConfig {
        max_iterations: 1_200,
        ..SolverConfig::default()
    };
    for k in [1u32, 2] {
        let est = algorithmic_error_estimate(&pair, k, 6_000, 20_000, 42, &solver).unwrap();
        assert!(
            est.estimate <= 3.0 * est.standard_error + 0.01,
            "k={k}: estimate {} (se {})",
            est.estimate,
            est.standard_error
        );
    }
}

#[test]
fn approximation_error_is_positive_for_affine_class_on_concentric_gaussians() {
    // concentric classes with very different scales: no hyperplane beats
    // the quadratic boundary
    let pair = gaussian_pair(vec![0.0, 0.0], 1.0, vec![0.0, 0.0], 4.0);
    let solver = SolverConfig {
        max_iterations: 1_200,
        ..SolverConfig::default()
    };
    let affine = algorithmic_error_estimate(&pair, 1, 6_000, 20_000, 7, &solver).unwrap();
    assert!(
        affine.estimate > 5.0 * affine.standard_error,
        "affine estimate {} (se {})",
        affine.estimate,
        affine.standard_error
    );
    let quadratic = algorithmic_error_estimate(&pair, 2, 6_000, 20_000, 7, &solver).unwrap();
    assert!(
        quadratic.estimate <= 3.0 * quadratic.standard_error + 0.015,
        "quadratic estimate {} (se {})",
        quadratic.estimate,
        quadratic.standard_error
    );
    // nested classes: larger degree cannot have larger approximation error
    assert!(
        quadratic.estimate
            <= affine.estimate + 3.0 * quadratic.standard_error.hypot(affine.standard_error)
    );
}

#[test]
fn degree_one_training_on_gaussian_data_matches_affine_training() {
    let pair = gaussian_pair(vec![0.8, -0.3], 1.0, vec![-0.8, 0.3], 1.2);
    let data = sample_pair(&pair, 300, 77).unwrap();
    let config = SolverConfig {
        max_iterations: 900,
        ..SolverConfig::default()
    };
    let lin = statlearn::solver::train_linear(&data, &LossSpec::Hinge, &config).unwrap();
    let poly = train_polynomial(&data, 1, &LossSpec::Hinge, &config).unwrap();
    let c_lin = confusion(&data, &lin.separator).unwrap();
    let c_poly = confusion(&data, &poly.separator).unwrap();
    assert_eq!(c_lin, c_poly);
}
