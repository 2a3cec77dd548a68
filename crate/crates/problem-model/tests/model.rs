use problem_model::{
    gen_matrix_completion, gen_sensor, read_instance, read_instance_str, write_instance,
    write_instance_string, GammaRule, Payload, RankProblem, Regularizer,
};
use proptest::prelude::*;

fn wrap_completion(inst: problem_model::MatrixCompletionInstance, k: usize) -> RankProblem {
    RankProblem::new(k, 0.25, Regularizer::Frobenius { gamma: 2.0 }, Payload::Completion(inst))
        .unwrap()
}

#[test]
fn generated_instance_round_trips_bit_exact() {
    let inst = gen_matrix_completion(20, 15, 3, 0.3, 0.05, 77).unwrap();
    let problem = wrap_completion(inst, 3);
    let text = write_instance_string(&problem).unwrap();
    let back = read_instance_str(&text, "<mem>").unwrap();
    assert_eq!(problem, back);
    // And the text itself is a fixed point of the round trip.
    assert_eq!(text, write_instance_string(&back).unwrap());
}

#[test]
fn sensor_instance_round_trips_bit_exact() {
    let inst = gen_sensor(8, 2, 0.8, 0.1, 5).unwrap();
    let problem =
        RankProblem::new(2, 0.0, Regularizer::Frobenius { gamma: 4.0 }, Payload::Sensor(inst))
            .unwrap();
    let text = write_instance_string(&problem).unwrap();
    let back = read_instance_str(&text, "<mem>").unwrap();
    assert_eq!(problem, back);
}

#[test]
fn file_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let problem = wrap_completion(gen_matrix_completion(6, 6, 2, 0.5, 0.0, 4).unwrap(), 2);
    write_instance(&problem, &path).unwrap();
    let back = read_instance(&path).unwrap();
    assert_eq!(problem, back);
}

#[test]
fn io_error_carries_path() {
    let err = read_instance(std::path::Path::new("/nonexistent/inst.json")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/inst.json"));
}

#[test]
fn generators_are_pure_functions_of_seed() {
    for seed in [0u64, 1, 99] {
        assert_eq!(
            gen_matrix_completion(7, 5, 2, 0.4, 0.2, seed).unwrap(),
            gen_matrix_completion(7, 5, 2, 0.4, 0.2, seed).unwrap()
        );
        assert_eq!(gen_sensor(6, 2, 1.0, 0.1, seed).unwrap(), gen_sensor(6, 2, 1.0, 0.1, seed).unwrap());
    }
    assert_ne!(
        gen_matrix_completion(7, 5, 2, 0.4, 0.2, 0).unwrap(),
        gen_matrix_completion(7, 5, 2, 0.4, 0.2, 1).unwrap()
    );
}

#[test]
fn gamma_rules_resolve_like_the_grid() {
    let cases = [("20/p", 0.25, 80.0), ("100/p", 0.3, 100.0 / 0.3), ("500/p", 0.2, 2500.0)];
    for (rule, p, want) in cases {
        let g: GammaRule = rule.parse().unwrap();
        assert_eq!(g.resolve(p).unwrap(), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_documents_never_panic_the_parser(text in "\\PC*") {
        let _ = read_instance_str(&text, "<fuzzish>");
    }

    #[test]
    fn gamma_parser_never_panics(text in "\\PC*") {
        let _ = text.parse::<GammaRule>();
    }

    #[test]
    fn round_trip_survives_adversarial_values(
        vals in prop::collection::vec(-1e12f64..1e12, 1..6),
        lambda in 0.0f64..10.0,
        gamma in 0.01f64..1000.0,
    ) {
        let n = vals.len();
        let omega: Vec<(usize, usize)> = (0..n).map(|i| (i, 0)).collect();
        let inst = problem_model::MatrixCompletionInstance::new(n, 1, omega, vals, None).unwrap();
        let problem = RankProblem::new(
            1, lambda, Regularizer::Frobenius { gamma }, Payload::Completion(inst),
        ).unwrap();
        let text = write_instance_string(&problem).unwrap();
        let back = read_instance_str(&text, "<mem>").unwrap();
        prop_assert_eq!(problem, back);
    }
}
