use proptest::prelude::*;

use chainrank::dp::{solve_both_knear, solve_constrained_knear, solve_unconstrained_knear_addition};
use chainrank::io::{parse_instance, parse_solution, write_instance_string, write_solution_string, SolutionFile};
use chainrank::{
    apply_edits, oracle_solve, solve_fixed_side, validate_instance, verify_solution, Instance, InstanceData, Mode,
    ProblemSpec, Side, Variant,
};

fn instance_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| {
            (
                Just(n),
                Just(m),
                proptest::collection::vec(any::<bool>(), n * m),
                Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
                Just((1..=m).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, m, bits, alpha, beta)| {
            let edges = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (i / m + 1, i % m + 1))
                .collect();
            validate_instance(InstanceData {
                num_students: n,
                num_questions: m,
                edges,
                base_student_order: Some(alpha),
                base_question_order: Some(beta),
            })
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn instance_text_round_trips(inst in instance_strategy(8, 8)) {
        let text = write_instance_string(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn validation_is_idempotent(inst in instance_strategy(8, 8)) {
        prop_assert_eq!(validate_instance(inst.to_data()).unwrap(), inst);
    }

    #[test]
    fn solution_text_round_trips(inst in instance_strategy(6, 6), k in 0usize..3) {
        let sol = solve_constrained_knear(&inst, k, Mode::Editing).unwrap();
        let file = SolutionFile {
            solution: sol,
            spec: Some(ProblemSpec::new(Variant::ConstrainedKnear, Mode::Editing, k)),
            verified: Some(true),
        };
        prop_assert_eq!(parse_solution(&write_solution_string(&file)).unwrap(), file);
    }

    #[test]
    fn reversed_edits_restore_instance(inst in instance_strategy(6, 6), k in 0usize..3) {
        let sol = solve_both_knear(&inst, k, Mode::Editing).unwrap();
        let edited = apply_edits(&inst, &sol.edits).unwrap();
        prop_assert_eq!(apply_edits(&edited, &sol.edits.reversed()).unwrap(), inst);
    }

    #[test]
    fn both_cost_survives_transpose(inst in instance_strategy(5, 5), k in 0usize..3, add in any::<bool>()) {
        let mode = if add { Mode::Addition } else { Mode::Editing };
        let direct = solve_both_knear(&inst, k, mode).unwrap().cost;
        prop_assert_eq!(solve_both_knear(&inst.transpose(), k, mode).unwrap().cost, direct);
    }

    #[test]
    fn programs_match_oracle(inst in instance_strategy(5, 5), k in 0usize..3) {
        for mode in [Mode::Editing, Mode::Addition] {
            let c = ProblemSpec::new(Variant::ConstrainedKnear, mode, k);
            prop_assert_eq!(solve_constrained_knear(&inst, k, mode).unwrap().cost, oracle_solve(&inst, &c).unwrap().cost);
            let b = ProblemSpec::new(Variant::BothKnear, mode, k);
            prop_assert_eq!(solve_both_knear(&inst, k, mode).unwrap().cost, oracle_solve(&inst, &b).unwrap().cost);
        }
        let u = ProblemSpec::new(Variant::UnconstrainedKnear, Mode::Addition, k);
        prop_assert_eq!(solve_unconstrained_knear_addition(&inst, k).unwrap().cost, oracle_solve(&inst, &u).unwrap().cost);
    }

    #[test]
    fn outputs_verify_and_costs_order(inst in instance_strategy(7, 7)) {
        let mut prev = [u64::MAX; 2];
        for k in 0..4 {
            let mut costs = [0; 2];
            for (i, mode) in [Mode::Editing, Mode::Addition].into_iter().enumerate() {
                let spec = ProblemSpec::new(Variant::ConstrainedKnear, mode, k);
                let sol = solve_constrained_knear(&inst, k, mode).unwrap();
                prop_assert!(verify_solution(&inst, &spec, &sol).passed());
                costs[i] = sol.cost;
                prop_assert!(sol.cost <= prev[i]);
            }
            prop_assert!(costs[0] <= costs[1]);
            prev = costs;
        }
    }

    #[test]
    fn large_k_constrained_equals_questions_fixed(inst in instance_strategy(6, 6), add in any::<bool>()) {
        let mode = if add { Mode::Addition } else { Mode::Editing };
        let k = inst.num_students();
        let fixed = solve_fixed_side(&inst, Side::QuestionsFixed, inst.base_question_order().unwrap(), mode).unwrap();
        prop_assert_eq!(solve_constrained_knear(&inst, k, mode).unwrap().cost, fixed.cost);
    }
}
