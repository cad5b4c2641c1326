use pa_core::invariants::{run_pipeline, Input, SurfaceReport};

fn run_phi(phi: &[usize]) -> SurfaceReport {
    run_pipeline(&Input { phi: Some(phi.to_vec()), matrix: None }, &[1, -1]).unwrap()
}

#[test]
fn fig1_report() {
    let r = run_phi(&[2, 1, 3, 5, 6, 4, 0]);
    assert!(r.failed_gate().is_none(), "{:?}", r.gates);
    let lam = r.lambda.as_ref().unwrap();
    assert_eq!(lam.minpoly, "x^4 - x^3 - 2x^2 - x + 1");
    assert!(lam.decimal.starts_with("2.081018"));
    assert!(lam.bi_perron);
    let chi = r.chi.as_ref().unwrap();
    let factors: Vec<&str> = chi.factors.iter().map(|f| f.factor.as_str()).collect();
    assert_eq!(factors.len(), 2);
    assert!(factors.contains(&"x^2 - x + 1"));
    assert!(factors.contains(&"x^4 - x^3 - 2x^2 - x + 1"));
    assert!(chi.palindromic.palindromic());
    let plus = r.epsilon(1).unwrap();
    assert!(plus.satisfied);
    assert_eq!(plus.rotated_rows, vec![1, 5, 6]);
    assert_eq!(plus.euler_characteristic, Some(2));
    assert_eq!(plus.genus, Some(3));
    let pi: Vec<&str> = plus.cone_points.iter().map(|c| c.angle_over_pi.as_str()).collect();
    assert_eq!(pi, vec!["1", "1", "1", "1", "1", "1", "1", "5"]);
    assert_eq!(plus.singularities, Some(vec![10]));
    let hom = plus.homology.as_ref().unwrap();
    assert!(hom.matches_m);
    assert!(hom.preserves_form);
    let minus = r.epsilon(-1).unwrap();
    assert!(!minus.satisfied);
    assert_eq!(minus.gates[0].witness.as_deref(), Some("geometric_conflict(1)"));
}

#[test]
fn fibonacci_and_silver() {
    let r = run_phi(&[1, 2, 0]);
    assert_eq!(r.lambda.as_ref().unwrap().decimal, "1.618033988750");
    let minus = r.epsilon(-1).unwrap();
    assert!(minus.satisfied);
    assert_eq!(minus.genus, Some(1));
    assert_eq!(minus.branch_points.len(), 4);
    assert_eq!(minus.singularities, Some(vec![]));
    let hom = minus.homology.as_ref().unwrap();
    assert_eq!(hom.matrix, vec![vec![0, 1], vec![1, 1]]);
    assert!(hom.preserves_form);
    assert!(!r.epsilon(1).unwrap().satisfied);

    let s = run_phi(&[2, 0, 3, 1]);
    assert_eq!(s.lambda.as_ref().unwrap().minpoly, "x^2 - 2x - 1");
    let minus = s.epsilon(-1).unwrap();
    assert!(minus.satisfied);
    assert_eq!(minus.genus, Some(1));
    assert_eq!(minus.branch_points, vec!["Q0", "Q1", "Q2", "Q3"]);
    assert_eq!(minus.singularities, Some(vec![]));
    assert!(minus.homology.is_none());
}

#[test]
fn thurston_matrix_stops_at_entries() {
    let m = vec![
        vec![5, 6, 0, 0, 0, 0, 0],
        vec![1, 2, 0, 0, 0, 4, 0],
        vec![3, 5, 1, 0, 1, 2, 1],
        vec![8, 4, 1, 0, 7, 4, 1],
        vec![2, 0, 1, 3, 0, 6, 1],
        vec![0, 0, 0, 0, 0, 0, 1],
        vec![0, 0, 0, 0, 0, 0, 1],
    ];
    let input = Input { phi: Some(vec![0, 3, 2, 5, 4, 2, 2, 7]), matrix: Some(m) };
    let r = run_pipeline(&input, &[1, -1]).unwrap();
    assert!(r.gate("odd_block").unwrap().passed);
    let g = r.failed_gate().unwrap();
    assert_eq!(g.gate, "entries");
    assert!(g.witness.as_ref().unwrap().starts_with("ValueTooLarge"));
    assert!(r.epsilons.is_empty());
}

#[test]
fn report_round_trips() {
    let r = run_phi(&[2, 1, 3, 5, 6, 4, 0]);
    let text = serde_json::to_string(&r).unwrap();
    let back: SurfaceReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

#[test]
fn missing_input_is_an_error() {
    assert!(run_pipeline(&Input::default(), &[1]).is_err());
}

#[test]
fn trivial_n1_stops_at_perron() {
    let r = run_phi(&[1, 0]);
    let g = r.failed_gate().unwrap();
    assert_eq!(g.gate, "perron");
}
