use serde::{Deserialize, Serialize};

use crate::split::Engine;

/// Integer weights of the four potential terms.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
    pub delta: u64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            alpha: 8,
            beta: 1,
            gamma: 2,
            delta: 4,
        }
    }
}

impl Constants {
    /// `c_α` must dominate the other three weights.
    pub fn is_admissible(&self) -> bool {
        let rest = self.beta.max(self.gamma).max(self.delta);
        self.beta > 0 && self.gamma > 0 && self.delta > 0 && self.alpha > rest
    }
}

/// Unweighted potential terms of a decomposition.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPotential {
    /// `Σ |B_x| f(x)` over Main nodes, the root counting `|B_r|(|B_r|+1)/2`.
    pub alpha: u64,
    /// Sum of DFS statuses over Main nodes.
    pub beta: u64,
    /// Number of nodes.
    pub gamma: u64,
    /// `k² · |V_max|`, where `V_max` holds the nodes of maximum bag size.
    pub delta: u64,
}

impl RawPotential {
    pub fn weigh(&self, c: &Constants) -> PotentialMeter {
        let alpha = c.alpha * self.alpha;
        let beta = c.beta * self.beta;
        let gamma = c.gamma * self.gamma;
        let delta = c.delta * self.delta;
        PotentialMeter {
            alpha,
            beta,
            gamma,
            delta,
            phi: alpha + beta + gamma + delta,
        }
    }
}

/// Weighted potential `φ = α + β + γ + δ`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialMeter {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
    pub delta: u64,
    pub phi: u64,
}

pub fn raw_potential(e: &Engine) -> RawPotential {
    let t = e.tree();
    let max = t.max_bag_size();
    let at_max = t.node_ids().filter(|&x| t.bag(x).len() == max).count() as u64;
    let k = e.k() as u64;
    RawPotential {
        alpha: e.alpha_raw(),
        beta: e.beta_raw(),
        gamma: t.len() as u64,
        delta: k * k * at_max,
    }
}

pub fn potential_phi(e: &Engine, c: &Constants) -> PotentialMeter {
    raw_potential(e).weigh(c)
}

/// Smallest admissible constants, by `c_α` and then by the sum of the other
/// three, such that `cost ≤ φ(raw)` for every sample. `None` when no
/// `c_α ≤ max_alpha` works.
pub fn fit_constants(samples: &[(u64, RawPotential)], max_alpha: u64) -> Option<Constants> {
    let ok = |c: &Constants| samples.iter().all(|(cost, raw)| *cost <= raw.weigh(c).phi);
    for alpha in 2..=max_alpha {
        let top = alpha - 1;
        let mut c = Constants {
            alpha,
            beta: top,
            gamma: top,
            delta: top,
        };
        if !ok(&c) {
            continue;
        }
        // Lower each weight as far as it goes; φ is monotone in each weight.
        loop {
            let mut changed = false;
            for field in 0..3 {
                let slot = match field {
                    0 => &mut c.beta,
                    1 => &mut c.gamma,
                    _ => &mut c.delta,
                };
                if *slot > 1 {
                    *slot -= 1;
                    let lowered = c;
                    if ok(&lowered) {
                        changed = true;
                    } else {
                        match field {
                            0 => c.beta += 1,
                            1 => c.gamma += 1,
                            _ => c.delta += 1,
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        return Some(c);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::TreeDecomposition;
    use crate::graph::Graph;
    use crate::partition::Mode;

    #[test]
    fn single_vertex_potential() {
        let g = Graph::new(1);
        let e = Engine::new(&g, TreeDecomposition::single(vec![0]), 1, Mode::Four);
        let ones = Constants {
            alpha: 1,
            beta: 1,
            gamma: 1,
            delta: 1,
        };
        let p = potential_phi(&e, &ones);
        assert_eq!((p.alpha, p.beta, p.gamma, p.delta, p.phi), (1, 2, 1, 1, 5));
    }

    #[test]
    fn default_constants_are_admissible() {
        assert!(Constants::default().is_admissible());
        assert!(!Constants {
            alpha: 2,
            beta: 2,
            gamma: 1,
            delta: 1
        }
        .is_admissible());
    }

    #[test]
    fn fitting_finds_minimal_weights() {
        let raw = RawPotential {
            alpha: 10,
            beta: 4,
            gamma: 3,
            delta: 1,
        };
        let c = fit_constants(&[(30, raw)], 16).unwrap();
        assert!(c.is_admissible());
        assert!(30 <= raw.weigh(&c).phi);
        assert_eq!(c.alpha, 3);
        assert_eq!(fit_constants(&[(1000, raw)], 4), None);
    }
}
