//! Seeded random formulas for cross-checking tests and self-checks.

use crate::formula::{Formula, VarName};
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    /// Variables are drawn from `v1..=vN` with `N = max_vars`.
    pub max_vars: usize,
    pub max_depth: usize,
    pub max_arity: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_vars: 8,
            max_depth: 4,
            max_arity: 3,
        }
    }
}

pub fn random_formula(rng: &mut impl Rng, cfg: GenConfig) -> Formula {
    node(rng, cfg, cfg.max_depth)
}

/// `count` formulas from a ChaCha8 stream seeded with `seed`.
pub fn corpus(seed: u64, count: usize, cfg: GenConfig) -> Vec<Formula> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_formula(&mut rng, cfg)).collect()
}

fn node(rng: &mut impl Rng, cfg: GenConfig, depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        let v = VarName::free(&format!("v{}", rng.gen_range(1..=cfg.max_vars))).unwrap();
        return Formula::lit(v, rng.gen());
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(node(rng, cfg, depth - 1)),
        k => {
            let arity = rng.gen_range(2..=cfg.max_arity.max(2));
            let children = (0..arity).map(|_| node(rng, cfg, depth - 1)).collect();
            if k % 2 == 0 {
                Formula::And(children)
            } else {
                Formula::Or(children)
            }
        }
    }
}
