mod common;

use common::*;
use rand::Rng;
use sarkas::learners::{maxent, train};
use sarkas::{Algorithm, Hyperparams, Model};

#[test]
fn naive_bayes_matches_bayes_rule_oracle() {
    let mut r = rng(1);
    for _ in 0..200 {
        let (rows, k) = random_rows(&mut r, 8, 3, 3, true);
        let data = dataset(&rows, k);
        let m = train(&data, Algorithm::NaiveBayes, &Hyperparams::default(), 0).unwrap();
        for _ in 0..5 {
            let x: Vec<f64> = (0..data.dim()).map(|_| r.random_range(0.0..3.0)).collect();
            let v = data.space().vector(x.iter().copied().enumerate()).unwrap();
            let got = m.predict_dist(&v).unwrap();
            let want = nb_oracle(&rows, k, 1.0, &x);
            assert!(max_abs_diff(&got, &want) <= 1e-9, "{got:?} vs {want:?}");
        }
    }
}

#[test]
fn maxent_gradient_matches_finite_differences() {
    let mut r = rng(2);
    for _ in 0..20 {
        let (rows, k) = random_rows(&mut r, 8, 5, 3, false);
        let data = dataset(&rows, k);
        for _ in 0..10 {
            let point: Vec<f64> = (0..k * (data.dim() + 1))
                .map(|_| r.random_range(-1.5..1.5))
                .collect();
            let err = gradient_relative_error(&data, &point, 1e-3);
            assert!(err <= 1e-4, "relative error {err}");
        }
    }
}

#[test]
fn maxent_objective_never_increases() {
    let mut r = rng(3);
    for _ in 0..20 {
        let (rows, k) = random_rows(&mut r, 8, 5, 3, false);
        let (_, trace) = maxent::fit(&dataset(&rows, k), &Hyperparams::default()).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn svm_separates_separable_sets() {
    let hp = Hyperparams {
        svm_lambda: 1e-3,
        svm_epochs: 100,
        ..Default::default()
    };
    let mut r = rng(4);
    for i in 0..50 {
        let rows = separable_rows(&mut r, 20, 0.1);
        let data = dataset(&rows, 2);
        let m = train(&data, Algorithm::Svm, &hp, i).unwrap();
        assert_eq!(training_accuracy(&m, &data), 1.0, "set {i}");
    }
}

#[test]
fn identical_class_vectors_are_memorized() {
    let rows = vec![
        (vec![1.0, 0.0, 0.5], 0),
        (vec![1.0, 0.0, 0.5], 0),
        (vec![0.0, 2.0, 0.0], 1),
        (vec![0.0, 2.0, 0.0], 1),
        (vec![0.3, 0.3, 1.5], 2),
    ];
    let data = dataset(&rows, 3);
    for alg in [Algorithm::MaxEnt, Algorithm::Svm] {
        let m = train(&data, alg, &Hyperparams::default(), 7).unwrap();
        assert_eq!(training_accuracy(&m, &data), 1.0, "{alg}");
    }
}

/// Multinomial NB trades the class prior against the likelihood of the
/// vector's mass, so a light vector can lose to a heavier prior. Balanced
/// classes with unit masses on disjoint supports are memorized.
#[test]
fn naive_bayes_memorizes_disjoint_class_vectors() {
    let rows = vec![
        (vec![1.0, 0.0, 0.0, 0.5], 0),
        (vec![1.0, 0.0, 0.0, 0.5], 0),
        (vec![0.0, 2.0, 0.0, 0.0], 1),
        (vec![0.0, 2.0, 0.0, 0.0], 1),
        (vec![0.0, 0.0, 1.0, 0.0], 2),
        (vec![0.0, 0.0, 1.0, 0.0], 2),
    ];
    let data = dataset(&rows, 3);
    let m = train(&data, Algorithm::NaiveBayes, &Hyperparams::default(), 0).unwrap();
    assert_eq!(training_accuracy(&m, &data), 1.0);
}

#[test]
fn scaling_features_keeps_training_argmax_on_separable_data() {
    let hp = Hyperparams {
        svm_lambda: 1e-3,
        svm_epochs: 100,
        ..Default::default()
    };
    let mut r = rng(5);
    for i in 0..20 {
        let rows = separable_rows(&mut r, 20, 0.2);
        let data = dataset(&rows, 2);
        for c in [0.5, 2.0, 10.0] {
            let scaled_rows: Vec<_> = rows
                .iter()
                .map(|(x, l)| (x.iter().map(|v| v * c).collect(), *l))
                .collect();
            let scaled = dataset(&scaled_rows, 2);
            for alg in [Algorithm::MaxEnt, Algorithm::Svm] {
                let a = train(&data, alg, &hp, i).unwrap();
                let b = train(&scaled, alg, &hp, i).unwrap();
                assert_ne!(a.params(), b.params());
                for (va, vb) in data.vectors().iter().zip(scaled.vectors()) {
                    assert_eq!(
                        a.predict(va).unwrap(),
                        b.predict(vb).unwrap(),
                        "{alg} set {i} c={c}"
                    );
                }
            }
        }
    }
}

#[test]
fn distributions_sum_to_one() {
    let mut r = rng(6);
    for _ in 0..30 {
        let (rows, k) = random_rows(&mut r, 8, 4, 3, true);
        let data = dataset(&rows, k);
        for alg in Algorithm::ALL {
            let m = train(&data, alg, &Hyperparams::default(), 1).unwrap();
            for v in data.vectors() {
                let s: f64 = m.predict_dist(v).unwrap().iter().sum();
                assert!((s - 1.0).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn same_inputs_give_identical_model_bytes() {
    let mut r = rng(7);
    let (rows, k) = random_rows(&mut r, 8, 4, 3, true);
    let data = dataset(&rows, k);
    for alg in Algorithm::ALL {
        let a = train(&data, alg, &Hyperparams::default(), 11).unwrap();
        let b = train(&data, alg, &Hyperparams::default(), 11).unwrap();
        assert_eq!(a.to_bytes(), b.to_bytes());
    }
}

#[test]
fn saved_models_reload_with_identical_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(8);
    let (rows, k) = random_rows(&mut r, 8, 4, 3, true);
    let data = dataset(&rows, k);
    for alg in Algorithm::ALL {
        let m = train(&data, alg, &Hyperparams::default(), 3).unwrap();
        let path = dir.path().join(format!("{}.model", alg.code()));
        m.save(&path).unwrap();
        let back = Model::load(&path).unwrap();
        assert_eq!(back, m);
        assert_eq!(std::fs::read(&path).unwrap(), back.to_bytes());
        for _ in 0..100 {
            let x: Vec<f64> = (0..data.dim()).map(|_| r.random_range(0.0..3.0)).collect();
            let v = data.space().vector(x.into_iter().enumerate()).unwrap();
            assert_eq!(m.scores(&v).unwrap(), back.scores(&v).unwrap());
        }
    }
}

#[test]
fn bumped_format_version_is_rejected() {
    let rows = vec![(vec![1.0], 0), (vec![0.0], 1)];
    let m = train(
        &dataset(&rows, 2),
        Algorithm::NaiveBayes,
        &Hyperparams::default(),
        0,
    )
    .unwrap();
    let text = String::from_utf8(m.to_bytes()).unwrap();
    let bumped = text.replacen("SARKAS-MODEL 1", "SARKAS-MODEL 2", 1);
    let err = Model::from_bytes(bumped.as_bytes())
        .unwrap_err()
        .to_string();
    assert!(err.contains('2') && err.contains('1'), "{err}");
    assert!(Model::from_bytes(b"SARKAS-MODEL 1\n{not json").is_err());
}

#[test]
fn single_class_and_mismatched_space_are_errors() {
    let rows = vec![(vec![1.0], 0), (vec![0.5], 0)];
    let data = dataset(&rows, 2);
    assert!(train(&data, Algorithm::MaxEnt, &Hyperparams::default(), 0).is_err());

    let ok = dataset(&[(vec![1.0], 0), (vec![0.0], 1)], 2);
    let m = train(&ok, Algorithm::Svm, &Hyperparams::default(), 0).unwrap();
    let other = space(2).vector([(0, 1.0)]).unwrap();
    assert!(m.predict(&other).is_err());
}
