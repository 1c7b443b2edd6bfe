//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use chainrank::dp::{solve_both_knear, solve_constrained_knear, solve_unconstrained_knear_addition};
use chainrank::gen::{gen_benchmark, gen_ideal, GenConfig, Noise, NoiseMode};
use chainrank::hardness::{
    assignment_to_editing, build_reduction, editing_to_assignment, Formula, Literal, ReductionInstance,
};
use chainrank::oracle::{oracle_solve, solve_unconstrained_knear_editing_exact};
use chainrank::{
    recognize_ideal, solve_fixed_side, verify_solution, Instance, InstanceData, Mode, Permutation, ProblemSpec,
    Recognition, Side, Solution, Variant,
};

const MODES: [Mode; 2] = [Mode::Editing, Mode::Addition];

/// Structural facts gathered while running criteria 1 to 4.
#[derive(Default)]
struct Structure {
    outputs: usize,
    failures: Vec<String>,
}

impl Structure {
    fn check(&mut self, inst: &Instance, spec: &ProblemSpec, sol: &Solution, who: &str) {
        self.outputs += 1;
        let report = verify_solution(inst, spec, sol);
        if !report.passed() {
            self.fail(format!("{who} {spec:?}: verification failed\n{report}"));
        }
        if spec.mode == Mode::Addition && !sol.edits.deletions.is_empty() {
            self.fail(format!("{who} {spec:?}: addition output deletes edges"));
        }
    }

    fn monotone_in_k(&mut self, costs: &[u64], what: &str) {
        if costs.windows(2).any(|w| w[1] > w[0]) {
            self.fail(format!("{what}: cost increases with k: {costs:?}"));
        }
    }

    fn mode_dominance(&mut self, editing: u64, addition: u64, what: &str) {
        if editing > addition {
            self.fail(format!("{what}: editing {editing} > addition {addition}"));
        }
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        } else if self.failures.len() == 20 {
            self.failures.push("...".into());
        }
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn random_order(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::from_order(v).unwrap()
}

fn random_instance(n: usize, m: usize, density: f64, rng: &mut ChaCha8Rng) -> Instance {
    let edges = (1..=n)
        .flat_map(|s| (1..=m).map(move |q| (s, q)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    let alpha = random_order(n, rng);
    let beta = random_order(m, rng);
    chainrank::validate_instance(InstanceData {
        num_students: n,
        num_questions: m,
        edges,
        base_student_order: Some(alpha.order().to_vec()),
        base_question_order: Some(beta.order().to_vec()),
    })
    .unwrap()
}

/// The polynomial program for a k-near spec; `None` for unconstrained
/// editing, which has none.
fn dp(inst: &Instance, spec: &ProblemSpec) -> Option<Solution> {
    let sol = match (spec.variant, spec.mode) {
        (Variant::ConstrainedKnear, mode) => solve_constrained_knear(inst, spec.k, mode),
        (Variant::UnconstrainedKnear, Mode::Addition) => solve_unconstrained_knear_addition(inst, spec.k),
        (Variant::UnconstrainedKnear, Mode::Editing) => return None,
        (Variant::BothKnear, mode) => solve_both_knear(inst, spec.k, mode),
        _ => unreachable!(),
    };
    Some(sol.expect("k-near program failed"))
}

fn dp_specs(k: usize) -> Vec<ProblemSpec> {
    vec![
        ProblemSpec::new(Variant::ConstrainedKnear, Mode::Editing, k),
        ProblemSpec::new(Variant::ConstrainedKnear, Mode::Addition, k),
        ProblemSpec::new(Variant::UnconstrainedKnear, Mode::Addition, k),
        ProblemSpec::new(Variant::BothKnear, Mode::Editing, k),
        ProblemSpec::new(Variant::BothKnear, Mode::Addition, k),
    ]
}

fn criterion_1(st: &mut Structure) -> Outcome {
    let start = Instant::now();
    let densities = [0.2, 0.5, 0.8];
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut solves = 0;
    let mut mismatches = Vec::new();
    let instances = 2016;
    for idx in 0..instances {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=6);
        let inst = random_instance(n, m, densities[idx % 3], &mut rng);
        let mut per_spec_costs: Vec<Vec<u64>> = vec![Vec::new(); 5];
        for k in 0..=2 {
            for (slot, spec) in dp_specs(k).iter().enumerate() {
                let fast = dp(&inst, spec).unwrap();
                let slow = oracle_solve(&inst, spec).unwrap();
                solves += 1;
                st.check(&inst, spec, &fast, "dp");
                st.check(&inst, spec, &slow, "oracle");
                if fast.cost != slow.cost {
                    mismatches.push(format!(
                        "instance {idx} {spec:?}: dp {} oracle {}\n{inst:?}",
                        fast.cost, slow.cost
                    ));
                }
                per_spec_costs[slot].push(fast.cost);
            }
        }
        for (slot, spec) in dp_specs(0).iter().enumerate() {
            st.monotone_in_k(&per_spec_costs[slot], &format!("instance {idx} {:?}/{:?}", spec.variant, spec.mode));
        }
        for k in 0..=2 {
            st.mode_dominance(per_spec_costs[0][k], per_spec_costs[1][k], &format!("instance {idx} constrained k={k}"));
            st.mode_dominance(per_spec_costs[3][k], per_spec_costs[4][k], &format!("instance {idx} both k={k}"));
        }
    }
    let elapsed = start.elapsed();
    let within = elapsed < Duration::from_secs(300);
    let mut detail = format!("{instances} instances, {solves} dp/oracle pairs, {:.1}s", elapsed.as_secs_f64());
    if !within {
        detail.push_str(", over the 5 minute budget");
    }
    for m in mismatches.iter().take(5) {
        let _ = write!(detail, "\n    {m}");
    }
    Outcome {
        passed: mismatches.is_empty() && within,
        detail,
    }
}

fn criterion_2(st: &mut Structure) -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    for bits in 0u32..512 {
        let edges = (0..9)
            .filter(|b| bits >> b & 1 == 1)
            .map(|b| (b / 3 + 1, b % 3 + 1))
            .collect();
        let inst = chainrank::validate_instance(InstanceData {
            num_students: 3,
            num_questions: 3,
            edges,
            base_student_order: Some(vec![1, 2, 3]),
            base_question_order: Some(vec![1, 2, 3]),
        })
        .unwrap();
        for k in 0..=2 {
            for variant in [Variant::ConstrainedKnear, Variant::UnconstrainedKnear, Variant::BothKnear] {
                for mode in MODES {
                    let spec = ProblemSpec::new(variant, mode, k);
                    let fast = match dp(&inst, &spec) {
                        Some(sol) => sol,
                        None => solve_unconstrained_knear_editing_exact(&inst, k).unwrap(),
                    };
                    let slow = oracle_solve(&inst, &spec).unwrap();
                    pairs += 1;
                    st.check(&inst, &spec, &fast, &fast.solver_tag.clone());
                    if fast.cost != slow.cost {
                        mismatches.push(format!(
                            "graph {bits:09b} {spec:?}: solver {} oracle {}",
                            fast.cost, slow.cost
                        ));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let within = elapsed < Duration::from_secs(120);
    let mut detail = format!("512 graphs, {pairs} comparisons, {:.1}s", elapsed.as_secs_f64());
    if !within {
        detail.push_str(", over the 2 minute budget");
    }
    for m in mismatches.iter().take(5) {
        let _ = write!(detail, "\n    {m}");
    }
    Outcome {
        passed: mismatches.is_empty() && within,
        detail,
    }
}

fn incomparable(inst: &Instance, a: usize, b: usize) -> bool {
    let (na, nb) = (inst.neighbors(a), inst.neighbors(b));
    a != b && !na.is_subset(nb) && !nb.is_subset(na)
}

fn criterion_3(st: &mut Structure) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let mut problems = Vec::new();
    let imo = ProblemSpec::new(Variant::ImoRecognize, Mode::Editing, 0);
    for seed in 0..500u64 {
        let cfg = GenConfig {
            num_students: rng.gen_range(1..=50),
            num_questions: rng.gen_range(1..=50),
            seed,
            ..GenConfig::default()
        };
        let g = gen_ideal(&cfg).unwrap();
        match recognize_ideal(&g.instance) {
            Recognition::Ideal(cert) => {
                let sol = cert.into_solution();
                if !verify_solution(&g.instance, &imo, &sol).passed() {
                    problems.push(format!("ideal seed {seed}: certificate fails verification"));
                }
                st.check(&g.instance, &imo, &sol, "recognize");
            }
            Recognition::NotIdeal { witness } => problems.push(format!("ideal seed {seed} rejected, witness {witness:?}")),
        }
    }
    for seed in 0..500u64 {
        let cfg = GenConfig {
            num_students: rng.gen_range(2..=50),
            num_questions: rng.gen_range(2..=50),
            seed: 10_000 + seed,
            ..GenConfig::default()
        };
        let g = gen_ideal(&cfg).unwrap();
        let n = cfg.num_students;
        let m = cfg.num_questions;
        let s1 = rng.gen_range(1..=n);
        let s2 = loop {
            let s = rng.gen_range(1..=n);
            if s != s1 {
                break s;
            }
        };
        let qa = rng.gen_range(1..=m);
        let qb = loop {
            let q = rng.gen_range(1..=m);
            if q != qa {
                break q;
            }
        };
        let mut edges: std::collections::BTreeSet<(usize, usize)> = g.instance.edges().collect();
        edges.insert((s1, qa));
        edges.remove(&(s1, qb));
        edges.remove(&(s2, qa));
        edges.insert((s2, qb));
        let inst = chainrank::validate_instance(InstanceData {
            num_students: n,
            num_questions: m,
            edges: edges.into_iter().collect(),
            ..InstanceData::default()
        })
        .unwrap();
        match recognize_ideal(&inst) {
            Recognition::Ideal(_) => problems.push(format!("crossing seed {seed} accepted")),
            Recognition::NotIdeal { witness: (a, b) } => {
                if !incomparable(&inst, a, b) {
                    problems.push(format!("crossing seed {seed}: witness ({a}, {b}) is comparable"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let within = elapsed < Duration::from_secs(60);
    let mut detail = format!("500 ideal + 500 crossing, {:.2}s", elapsed.as_secs_f64());
    if !within {
        detail.push_str(", over the 1 minute budget");
    }
    for p in problems.iter().take(5) {
        let _ = write!(detail, "\n    {p}");
    }
    Outcome {
        passed: problems.is_empty() && within,
        detail,
    }
}

fn criterion_4(st: &mut Structure) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    for seed in 0..500 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=5);
        let density = [0.2, 0.5, 0.8][seed % 3];
        let inst = random_instance(n, m, density, &mut rng);
        for side in [Side::StudentsFixed, Side::QuestionsFixed] {
            let order = match side {
                Side::StudentsFixed => inst.base_student_order().unwrap(),
                Side::QuestionsFixed => inst.base_question_order().unwrap(),
            };
            let mut costs = Vec::new();
            for mode in MODES {
                let spec = ProblemSpec::new(Variant::FixedOneSide(side), mode, 0);
                let fast = solve_fixed_side(&inst, side, order, mode).unwrap();
                let slow = oracle_solve(&inst, &spec).unwrap();
                pairs += 1;
                st.check(&inst, &spec, &fast, "fixed-side");
                if fast.cost != slow.cost {
                    mismatches.push(format!("seed {seed} {side:?} {mode:?}: fixed {} oracle {}", fast.cost, slow.cost));
                }
                costs.push(fast.cost);
            }
            st.mode_dominance(costs[0], costs[1], &format!("seed {seed} fixed {side:?}"));
        }
    }
    let mut detail = format!("500 seeds, {pairs} comparisons, {:.2}s", start.elapsed().as_secs_f64());
    for m in mismatches.iter().take(5) {
        let _ = write!(detail, "\n    {m}");
    }
    Outcome {
        passed: mismatches.is_empty(),
        detail,
    }
}

/// Every formula over `num_vars` variables with at most two clauses, clauses
/// taken as a multiset of non-empty non-tautological literal sets.
fn small_formulas() -> Vec<Formula> {
    let mut out = Vec::new();
    for n in 1..=2usize {
        let mut clauses: Vec<Vec<Literal>> = Vec::new();
        for code in 1..3usize.pow(n as u32) {
            let mut c = Vec::new();
            let mut rest = code;
            for var in 1..=n {
                match rest % 3 {
                    1 => c.push(Literal { var, positive: true }),
                    2 => c.push(Literal { var, positive: false }),
                    _ => {}
                }
                rest /= 3;
            }
            clauses.push(c);
        }
        out.push(Formula::new(n, vec![]).unwrap());
        for i in 0..clauses.len() {
            out.push(Formula::new(n, vec![clauses[i].clone()]).unwrap());
            for j in i..clauses.len() {
                out.push(Formula::new(n, vec![clauses[i].clone(), clauses[j].clone()]).unwrap());
            }
        }
    }
    out
}

fn enforced_relations_hold(red: &ReductionInstance, sol: &Solution) -> bool {
    red.gadget_ranges
        .iter()
        .all(|g| sol.student_order.position_of(g.stronger) > sol.student_order.position_of(g.weaker))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let formulas = small_formulas();
    let mut problems = Vec::new();
    let mut sat_count = 0;
    for phi in &formulas {
        let red = build_reduction(phi).unwrap();
        let spec = red.spec();
        let truth = phi.brute_force_solve();
        let oracle = oracle_solve(&red.instance, &spec).unwrap();
        let exact = solve_unconstrained_knear_editing_exact(&red.instance, 1).unwrap();
        let dimacs = phi.to_dimacs().replace('\n', " / ");
        if oracle.cost != exact.cost {
            problems.push(format!("{dimacs}: oracle {} exact {}", oracle.cost, exact.cost));
        }
        for sol in [&oracle, &exact] {
            if !verify_solution(&red.instance, &spec, sol).passed() {
                problems.push(format!("{dimacs}: {} output fails verification", sol.solver_tag));
            }
        }
        match truth {
            Some(_) => {
                sat_count += 1;
                if oracle.cost != red.t_phi {
                    problems.push(format!("{dimacs}: satisfiable but optimum {} != t_phi {}", oracle.cost, red.t_phi));
                }
                for sol in [&oracle, &exact] {
                    if !enforced_relations_hold(&red, sol) {
                        problems.push(format!("{dimacs}: optimal order breaks an enforced relation"));
                    }
                    match editing_to_assignment(&red, sol) {
                        Ok(a) if phi.is_satisfied_by(&a) => {}
                        other => problems.push(format!("{dimacs}: decoding optimum gave {other:?}")),
                    }
                }
                for bits in 0u32..1 << phi.num_vars {
                    let a: Vec<bool> = (0..phi.num_vars).map(|v| bits >> v & 1 == 1).collect();
                    if !phi.is_satisfied_by(&a) {
                        continue;
                    }
                    let sol = assignment_to_editing(&red, &a).unwrap();
                    if sol.cost != red.t_phi || !verify_solution(&red.instance, &spec, &sol).passed() {
                        problems.push(format!("{dimacs}: forward editing for {a:?} is invalid"));
                    }
                    for &q in &red.clause_question_ids {
                        let touching = sol.edits.additions.iter().chain(&sol.edits.deletions).filter(|e| e.1 == q).count();
                        if touching != 3 * phi.num_vars - 1 {
                            problems.push(format!("{dimacs}: clause question {q} has {touching} edits"));
                        }
                    }
                    let on_gadgets = sol
                        .edits
                        .additions
                        .iter()
                        .chain(&sol.edits.deletions)
                        .filter(|e| !red.clause_question_ids.contains(&e.1))
                        .count();
                    if on_gadgets != 0 {
                        problems.push(format!("{dimacs}: {on_gadgets} edits on gadget questions"));
                    }
                    match editing_to_assignment(&red, &sol) {
                        Ok(back) if back == a => {}
                        other => problems.push(format!("{dimacs}: round trip of {a:?} gave {other:?}")),
                    }
                }
            }
            None => {
                if oracle.cost <= red.t_phi {
                    problems.push(format!(
                        "{dimacs}: unsatisfiable but optimum {} <= t_phi {}",
                        oracle.cost, red.t_phi
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let within = elapsed < Duration::from_secs(600);
    let mut detail = format!(
        "{} formulas ({sat_count} satisfiable), {:.1}s",
        formulas.len(),
        elapsed.as_secs_f64()
    );
    if !within {
        detail.push_str(", over the 10 minute budget");
    }
    for p in problems.iter().take(5) {
        let _ = write!(detail, "\n    {p}");
    }
    Outcome {
        passed: problems.is_empty() && within,
        detail,
    }
}

fn criterion_6(st: &Structure) -> Outcome {
    let mut detail = format!("{} solver outputs checked", st.outputs);
    for f in &st.failures {
        let _ = write!(detail, "\n    {f}");
    }
    Outcome {
        passed: st.failures.is_empty() && st.outputs > 0,
        detail,
    }
}

fn timed(variant: Variant, n: usize, k: usize, limit: Duration) -> (bool, String) {
    let cfg = GenConfig {
        num_students: n,
        num_questions: n,
        noise: Noise::FlipProbability(0.1),
        k_perturb: k,
        seed: 7,
        noise_mode: NoiseMode::Toggle,
    };
    let inst = gen_benchmark(&cfg).unwrap().instance;
    let start = Instant::now();
    let sol = match variant {
        Variant::ConstrainedKnear => solve_constrained_knear(&inst, k, Mode::Editing),
        Variant::BothKnear => solve_both_knear(&inst, k, Mode::Editing),
        _ => unreachable!(),
    }
    .unwrap();
    let elapsed = start.elapsed();
    let spec = ProblemSpec::new(variant, Mode::Editing, k);
    let ok = verify_solution(&inst, &spec, &sol).passed() && elapsed < limit;
    (
        ok,
        format!(
            "{} {n}x{n} k={k}: {:.2}s (limit {}s, cost {})",
            variant.name(),
            elapsed.as_secs_f64(),
            limit.as_secs(),
            sol.cost
        ),
    )
}

fn criterion_7() -> Outcome {
    let runs = [
        timed(Variant::ConstrainedKnear, 100, 1, Duration::from_secs(5)),
        timed(Variant::ConstrainedKnear, 100, 2, Duration::from_secs(60)),
        timed(Variant::BothKnear, 40, 1, Duration::from_secs(60)),
    ];
    Outcome {
        passed: runs.iter().all(|r| r.0),
        detail: runs.iter().map(|r| r.1.as_str()).collect::<Vec<_>>().join("; "),
    }
}

fn report(id: u32, name: &str, outcome: &Outcome) {
    println!(
        "criterion {id} [PRIMARY] {name}: {} ({})",
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.detail
    );
}

fn main() {
    let mut st = Structure::default();
    let results = [
        (1, "oracle equivalence", criterion_1(&mut st)),
        (2, "exhaustive 3x3 sweep", criterion_2(&mut st)),
        (3, "recognition", criterion_3(&mut st)),
        (4, "fixed-side optimality", criterion_4(&mut st)),
        (5, "hardness sanity", criterion_5()),
    ];
    for (id, name, outcome) in &results {
        report(*id, name, outcome);
    }
    let c6 = criterion_6(&st);
    report(6, "structural properties", &c6);
    let c7 = criterion_7();
    report(7, "runtime smoke", &c7);

    let failed = results.iter().filter(|r| !r.2.passed).count() + !c6.passed as usize + !c7.passed as usize;
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
