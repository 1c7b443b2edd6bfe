//! Seeded instance generators.
//!
//! All randomness comes from one `ChaCha8Rng` per call, seeded from the
//! config, so output is identical on every platform.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ChainError, Result};
use crate::model::{Instance, InstanceData, Permutation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    /// Exactly this many pairs are toggled.
    FlipCount(usize),
    /// Each eligible pair is toggled independently.
    FlipProbability(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseMode {
    #[default]
    Toggle,
    AddOnly,
    DeleteOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub num_students: usize,
    pub num_questions: usize,
    pub noise: Noise,
    pub k_perturb: usize,
    pub seed: u64,
    pub noise_mode: NoiseMode,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            num_students: 5,
            num_questions: 5,
            noise: Noise::FlipCount(0),
            k_perturb: 0,
            seed: 0,
            noise_mode: NoiseMode::Toggle,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_students == 0 || self.num_questions == 0 {
            return Err(ChainError::InvalidConfig("both sides need at least one vertex".into()));
        }
        match self.noise {
            Noise::FlipCount(f) if f > self.num_students * self.num_questions => Err(ChainError::InvalidConfig(
                format!("flip count {f} exceeds the {} pairs", self.num_students * self.num_questions),
            )),
            Noise::FlipProbability(p) if !(0.0..=1.0).contains(&p) => {
                Err(ChainError::InvalidConfig(format!("flip probability {p} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdealInstance {
    /// Carries no base orders.
    pub instance: Instance,
    pub true_student_order: Permutation,
    pub true_question_order: Permutation,
}

/// A chain graph: shuffled true orders and sorted random prefix lengths.
pub fn gen_ideal(cfg: &GenConfig) -> Result<IdealInstance> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(ideal_with(cfg.num_students, cfg.num_questions, &mut rng))
}

fn ideal_with(n: usize, m: usize, rng: &mut ChaCha8Rng) -> IdealInstance {
    let mut students: Vec<usize> = (1..=n).collect();
    let mut questions: Vec<usize> = (1..=m).collect();
    students.shuffle(rng);
    questions.shuffle(rng);
    let mut lengths: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=m)).collect();
    lengths.sort_unstable();
    let mut rows = vec![Vec::new(); n];
    for (pos, &s) in students.iter().enumerate() {
        rows[s - 1] = questions[..lengths[pos]].to_vec();
    }
    IdealInstance {
        instance: Instance::from_rows(m, &rows).expect("generated rows are in range"),
        true_student_order: Permutation::from_order(students).expect("shuffled ids"),
        true_question_order: Permutation::from_order(questions).expect("shuffled ids"),
    }
}

/// Student `i` answers the first `lengths[i - 1]` of `m` questions; both base
/// orders are the identity.
pub fn ideal_from_prefix_lengths(lengths: &[usize], m: usize) -> Result<Instance> {
    let rows: Vec<Vec<usize>> = lengths.iter().map(|&l| (1..=l.min(m)).collect()).collect();
    Instance::from_rows(m, &rows)?.with_base_orders(
        Some(Permutation::identity(lengths.len())),
        Some(Permutation::identity(m)),
    )
}

/// Toggles pairs of `inst` according to the noise settings of `cfg`.
pub fn perturb_edges(inst: &Instance, cfg: &GenConfig) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    perturb_edges_with(inst, cfg.noise, cfg.noise_mode, &mut rng)
}

fn perturb_edges_with(inst: &Instance, noise: Noise, mode: NoiseMode, rng: &mut ChaCha8Rng) -> Result<Instance> {
    let n = inst.num_students();
    let m = inst.num_questions();
    let eligible: Vec<(usize, usize)> = (1..=n)
        .flat_map(|s| (1..=m).map(move |q| (s, q)))
        .filter(|&(s, q)| match mode {
            NoiseMode::Toggle => true,
            NoiseMode::AddOnly => !inst.has_edge(s, q),
            NoiseMode::DeleteOnly => inst.has_edge(s, q),
        })
        .collect();
    let chosen: Vec<(usize, usize)> = match noise {
        Noise::FlipCount(f) => {
            if f > eligible.len() {
                return Err(ChainError::NotEnoughPairs {
                    requested: f,
                    available: eligible.len(),
                });
            }
            sample(rng, eligible.len(), f).into_iter().map(|i| eligible[i]).collect()
        }
        Noise::FlipProbability(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(ChainError::InvalidConfig(format!("flip probability {p} outside [0, 1]")));
            }
            eligible.iter().copied().filter(|_| rng.gen_bool(p)).collect()
        }
    };
    let mut edges: std::collections::BTreeSet<(usize, usize)> = inst.edges().collect();
    for pair in chosen {
        if !edges.remove(&pair) {
            edges.insert(pair);
        }
    }
    let data = InstanceData {
        edges: edges.into_iter().collect(),
        ..inst.to_data()
    };
    crate::model::validate_instance(data)
}

/// Random walk of adjacent swaps that never moves an element more than `k`
/// from its place in `true_order`.
pub fn perturb_order(true_order: &Permutation, k: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    perturb_order_with(true_order, k, &mut rng)
}

fn perturb_order_with(true_order: &Permutation, k: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let n = true_order.len();
    let mut order = true_order.order().to_vec();
    if k == 0 || n < 2 {
        return true_order.clone();
    }
    let home = |e: usize| true_order.position_of(e);
    for _ in 0..4 * n * k {
        let i = rng.gen_range(0..n - 1);
        // after the swap order[i] moves to index i+1 and order[i+1] to i
        let ok = (i + 2).abs_diff(home(order[i])) <= k && (i + 1).abs_diff(home(order[i + 1])) <= k;
        if ok {
            order.swap(i, i + 1);
        }
    }
    Permutation::from_order(order).expect("swaps keep a permutation")
}

/// An ideal graph with edge noise whose base orders are `k_perturb`-near
/// the hidden true orders. Returns the instance and the true orders.
pub fn gen_benchmark(cfg: &GenConfig) -> Result<IdealInstance> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ideal = ideal_with(cfg.num_students, cfg.num_questions, &mut rng);
    let noisy = perturb_edges_with(&ideal.instance, cfg.noise, cfg.noise_mode, &mut rng)?;
    let alpha = perturb_order_with(&ideal.true_student_order, cfg.k_perturb, &mut rng);
    let beta = perturb_order_with(&ideal.true_question_order, cfg.k_perturb, &mut rng);
    Ok(IdealInstance {
        instance: noisy.with_base_orders(Some(alpha), Some(beta))?,
        ..ideal
    })
}
