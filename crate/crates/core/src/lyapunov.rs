//! Monte-Carlo Lyapunov exponents of the transposed incidence cocycle
//! `A(σ) = ᵗM_0` over sampled directive sequences, and the Pisot test
//! `θ₁ > 0 > θ₂`.
//!
//! Samples run in parallel. Sample `j` draws from a ChaCha8 stream `j` of
//! the master seed and results are reduced in sample order, so estimates are
//! bit-identical for any thread count.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::Substitution;

/// Steps between Gram–Schmidt renormalizations.
pub const RENORMALIZE_EVERY: usize = 16;

const STOCHASTIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoficEdge {
    pub from: usize,
    pub to: usize,
    /// Index into the model's substitutions.
    pub sub: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Sampler {
    Iid {
        weights: Vec<f64>,
    },
    /// States are substitutions.
    Markov {
        transition: Vec<Vec<f64>>,
        initial: Vec<f64>,
    },
    /// Edge-weight Markov measure on a labeled graph.
    Sofic {
        states: usize,
        edges: Vec<SoficEdge>,
        initial: Vec<f64>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceModel {
    pub names: Vec<String>,
    #[serde(skip)]
    pub subs: Vec<Substitution>,
    pub sampler: Sampler,
    #[serde(skip)]
    matrices: Vec<[[f64; 2]; 2]>,
}

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidModel(format!("{what} is empty")));
    }
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidModel(format!("{what} has a negative or non-finite entry")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
        return Err(Error::InvalidModel(format!("{what} sums to {sum}, not 1")));
    }
    Ok(())
}

impl SequenceModel {
    pub fn new(names: Vec<String>, subs: Vec<Substitution>, sampler: Sampler) -> Result<Self> {
        if subs.is_empty() || names.len() != subs.len() {
            return Err(Error::InvalidModel("need one name per substitution".into()));
        }
        for (name, s) in names.iter().zip(&subs) {
            if s.incidence().det() == 0.into() {
                return Err(Error::InvalidModel(format!("{name} has a singular incidence matrix")));
            }
        }
        let k = subs.len();
        match &sampler {
            Sampler::Iid { weights } => {
                if weights.len() != k {
                    return Err(Error::InvalidModel("one weight per substitution".into()));
                }
                check_distribution(weights, "weights")?;
            }
            Sampler::Markov { transition, initial } => {
                if transition.len() != k || initial.len() != k || transition.iter().any(|r| r.len() != k) {
                    return Err(Error::InvalidModel(format!("transition must be {k}×{k}")));
                }
                for (i, row) in transition.iter().enumerate() {
                    check_distribution(row, &format!("transition row {i}"))?;
                }
                check_distribution(initial, "initial distribution")?;
            }
            Sampler::Sofic { states, edges, initial } => {
                if *states == 0 || initial.len() != *states {
                    return Err(Error::InvalidModel("initial distribution must cover every state".into()));
                }
                check_distribution(initial, "initial distribution")?;
                for e in edges {
                    if e.from >= *states || e.to >= *states || e.sub >= k {
                        return Err(Error::InvalidModel(format!("edge {} -> {} out of range", e.from, e.to)));
                    }
                }
                for s in 0..*states {
                    let out: Vec<f64> = edges.iter().filter(|e| e.from == s).map(|e| e.weight).collect();
                    check_distribution(&out, &format!("outgoing weights of state {s}"))?;
                }
            }
        }
        let matrices = subs.iter().map(|s| s.incidence().to_f64()).collect();
        Ok(SequenceModel {
            names,
            subs,
            sampler,
            matrices,
        })
    }

    pub fn iid(names: Vec<String>, subs: Vec<Substitution>, weights: Vec<f64>) -> Result<Self> {
        Self::new(names, subs, Sampler::Iid { weights })
    }

    /// Transition graph on sampler states with positive-weight arcs.
    fn graph(&self) -> Vec<Vec<usize>> {
        match &self.sampler {
            Sampler::Iid { weights } => {
                let support: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
                (0..weights.len()).map(|_| support.clone()).collect()
            }
            Sampler::Markov { transition, .. } => transition
                .iter()
                .map(|row| (0..row.len()).filter(|&j| row[j] > 0.0).collect())
                .collect(),
            Sampler::Sofic { states, edges, .. } => (0..*states)
                .map(|s| {
                    edges
                        .iter()
                        .filter(|e| e.from == s && e.weight > 0.0)
                        .map(|e| e.to)
                        .collect()
                })
                .collect(),
        }
    }

    fn reachable(&self, graph: &[Vec<usize>], from: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; graph.len()];
        let mut stack: Vec<usize> = from.to_vec();
        while let Some(s) = stack.pop() {
            if std::mem::replace(&mut seen[s], true) {
                continue;
            }
            stack.extend(graph[s].iter().copied().filter(|&t| !seen[t]));
        }
        seen
    }

    /// Strong connectivity of the positive-weight transition graph, restricted
    /// to states of positive stationary relevance (for i.i.d. models, the support).
    pub fn strongly_connected(&self) -> bool {
        let graph = self.graph();
        let nodes: Vec<usize> = match &self.sampler {
            Sampler::Iid { weights } => (0..weights.len()).filter(|&i| weights[i] > 0.0).collect(),
            _ => (0..graph.len()).collect(),
        };
        nodes
            .iter()
            .all(|&s| {
                let r = self.reachable(&graph, &graph[s]);
                nodes.iter().all(|&t| r[t])
            })
    }

    /// Some finite path of positive probability has a positive product
    /// `M_0⋯M_k`. Positivity depends only on the zero pattern, so this is a
    /// search over (sampler state, pattern) pairs.
    pub fn has_positive_cylinder(&self) -> bool {
        let pattern: Vec<u8> = self
            .matrices
            .iter()
            .map(|m| {
                (0..4).fold(0u8, |acc, b| acc | (((m[b / 2][b % 2] != 0.0) as u8) << b))
            })
            .collect();
        let mul = |a: u8, b: u8| -> u8 {
            let bit = |m: u8, i: usize, j: usize| (m >> (2 * i + j)) & 1 == 1;
            let mut out = 0u8;
            for i in 0..2 {
                for j in 0..2 {
                    if (0..2).any(|k| bit(a, i, k) && bit(b, k, j)) {
                        out |= 1 << (2 * i + j);
                    }
                }
            }
            out
        };
        // Arcs (from sampler state, sub, to sampler state); state 0 for i.i.d.
        let (arcs, starts): (Vec<(usize, usize, usize)>, Vec<(usize, usize)>) = match &self.sampler {
            Sampler::Iid { weights } => {
                let subs: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
                (subs.iter().map(|&i| (0, i, 0)).collect(), subs.iter().map(|&i| (i, 0)).collect())
            }
            Sampler::Markov { transition, initial } => {
                let mut arcs = Vec::new();
                for (i, row) in transition.iter().enumerate() {
                    for (j, &w) in row.iter().enumerate() {
                        if w > 0.0 {
                            arcs.push((i, j, j));
                        }
                    }
                }
                let starts = (0..initial.len()).filter(|&i| initial[i] > 0.0).map(|i| (i, i)).collect();
                (arcs, starts)
            }
            Sampler::Sofic { edges, initial, .. } => {
                let arcs: Vec<_> = edges.iter().filter(|e| e.weight > 0.0).map(|e| (e.from, e.sub, e.to)).collect();
                let starts = arcs
                    .iter()
                    .filter(|a| initial[a.0] > 0.0)
                    .map(|a| (a.1, a.2))
                    .collect();
                (arcs, starts)
            }
        };
        let mut seen = std::collections::HashSet::new();
        let mut stack: Vec<(usize, u8)> = starts.iter().map(|&(sub, st)| (st, pattern[sub])).collect();
        while let Some((st, pat)) = stack.pop() {
            if pat == 0b1111 {
                return true;
            }
            if !seen.insert((st, pat)) {
                continue;
            }
            for &(from, sub, to) in &arcs {
                if from == st {
                    stack.push((to, mul(pat, pattern[sub])));
                }
            }
        }
        false
    }

    pub fn is_unimodular(&self) -> bool {
        self.subs.iter().all(|s| s.is_unimodular())
    }
}

/// Draws substitution indices one step at a time.
struct PathSampler<'a> {
    model: &'a SequenceModel,
    state: Option<usize>,
    iid: Option<WeightedIndex<f64>>,
    rows: Vec<WeightedIndex<f64>>,
    initial: Option<WeightedIndex<f64>>,
    // Sofic: outgoing edge indices per state.
    out_edges: Vec<Vec<usize>>,
}

impl<'a> PathSampler<'a> {
    fn new(model: &'a SequenceModel) -> Result<Self> {
        let wi = |w: &[f64]| WeightedIndex::new(w.iter().copied()).map_err(|e| Error::InvalidModel(e.to_string()));
        let mut s = PathSampler {
            model,
            state: None,
            iid: None,
            rows: Vec::new(),
            initial: None,
            out_edges: Vec::new(),
        };
        match &model.sampler {
            Sampler::Iid { weights } => s.iid = Some(wi(weights)?),
            Sampler::Markov { transition, initial } => {
                s.rows = transition.iter().map(|r| wi(r)).collect::<Result<_>>()?;
                s.initial = Some(wi(initial)?);
            }
            Sampler::Sofic { states, edges, initial } => {
                s.out_edges = (0..*states)
                    .map(|st| (0..edges.len()).filter(|&i| edges[i].from == st).collect())
                    .collect();
                s.rows = s
                    .out_edges
                    .iter()
                    .map(|ids| wi(&ids.iter().map(|&i| edges[i].weight).collect::<Vec<_>>()))
                    .collect::<Result<_>>()?;
                s.initial = Some(wi(initial)?);
            }
        }
        Ok(s)
    }

    fn next<R: Rng>(&mut self, rng: &mut R) -> usize {
        match &self.model.sampler {
            Sampler::Iid { .. } => self.iid.as_ref().expect("iid sampler").sample(rng),
            Sampler::Markov { .. } => {
                let next = match self.state {
                    None => self.initial.as_ref().expect("initial").sample(rng),
                    Some(s) => self.rows[s].sample(rng),
                };
                self.state = Some(next);
                next
            }
            Sampler::Sofic { edges, .. } => {
                let s = match self.state {
                    Some(s) => s,
                    None => self.initial.as_ref().expect("initial").sample(rng),
                };
                let e = &edges[self.out_edges[s][self.rows[s].sample(rng)]];
                self.state = Some(e.to);
                e.sub
            }
        }
    }
}

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A length-`n` directive path drawn from the model.
pub fn sample_sequence(model: &SequenceModel, n: usize, seed: u64) -> Result<Vec<Substitution>> {
    Ok(sample_indices(model, n, seed)?
        .into_iter()
        .map(|i| model.subs[i].clone())
        .collect())
}

pub fn sample_indices(model: &SequenceModel, n: usize, seed: u64) -> Result<Vec<usize>> {
    let mut rng = sample_rng(seed, 0);
    let mut sampler = PathSampler::new(model)?;
    Ok((0..n).map(|_| sampler.next(&mut rng)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PisotVerdict {
    Satisfied,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct SumRule {
    pub sum: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LyapEstimate {
    pub theta1: f64,
    pub stderr1: f64,
    pub theta2: f64,
    pub stderr2: f64,
    pub samples: usize,
    pub length: usize,
    pub seed: u64,
    pub transposed: bool,
    pub pisot: PisotVerdict,
    /// Only meaningful for unimodular models, where `θ₁ + θ₂ = 0`.
    pub sum_rule: SumRule,
}

/// Margin rule with three standard errors.
pub fn pisot_verdict(theta1: f64, stderr1: f64, theta2: f64, stderr2: f64) -> PisotVerdict {
    if theta1 - 3.0 * stderr1 > 0.0 && theta2 + 3.0 * stderr2 < 0.0 {
        PisotVerdict::Satisfied
    } else if theta1 + 3.0 * stderr1 < 0.0 || theta2 - 3.0 * stderr2 > 0.0 {
        PisotVerdict::Violated
    } else {
        PisotVerdict::Inconclusive
    }
}

fn mul(m: &[[f64; 2]; 2], v: [f64; 2], transposed: bool) -> [f64; 2] {
    if transposed {
        [m[0][0] * v[0] + m[1][0] * v[1], m[0][1] * v[0] + m[1][1] * v[1]]
    } else {
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

/// Gram–Schmidt on the frame; returns `(log r11, log r22)`.
fn orthonormalize(v1: &mut [f64; 2], v2: &mut [f64; 2]) -> (f64, f64) {
    let r11 = v1[0].hypot(v1[1]);
    *v1 = [v1[0] / r11, v1[1] / r11];
    let p = v1[0] * v2[0] + v1[1] * v2[1];
    *v2 = [v2[0] - p * v1[0], v2[1] - p * v1[1]];
    let r22 = v2[0].hypot(v2[1]);
    *v2 = [v2[0] / r22, v2[1] / r22];
    (r11.ln(), r22.ln())
}

fn one_sample(model: &SequenceModel, n: usize, seed: u64, stream: u64, transposed: bool) -> Result<(f64, f64)> {
    let mut rng = sample_rng(seed, stream);
    let angle: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let (s, c) = angle.sin_cos();
    let mut v1 = [c, s];
    let mut v2 = [-s, c];
    let mut sampler = PathSampler::new(model)?;
    let (mut l1, mut l2) = (0.0, 0.0);
    for k in 0..n {
        let m = &model.matrices[sampler.next(&mut rng)];
        v1 = mul(m, v1, transposed);
        v2 = mul(m, v2, transposed);
        if (k + 1) % RENORMALIZE_EVERY == 0 || k + 1 == n {
            let (a, b) = orthonormalize(&mut v1, &mut v2);
            l1 += a;
            l2 += b;
        }
    }
    Ok((l1 / n as f64, l2 / n as f64))
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

pub fn estimate_exponents(model: &SequenceModel, n: usize, samples: usize, seed: u64) -> Result<LyapEstimate> {
    estimate_exponents_with(model, n, samples, seed, true)
}

/// `transposed = false` runs the untransposed cocycle `M_0`, for comparison.
pub fn estimate_exponents_with(
    model: &SequenceModel,
    n: usize,
    samples: usize,
    seed: u64,
    transposed: bool,
) -> Result<LyapEstimate> {
    if n == 0 || samples == 0 {
        return Err(Error::Precondition("length and samples must be at least 1".into()));
    }
    let per: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|j| one_sample(model, n, seed, j, transposed))
        .collect::<Result<_>>()?;
    let t1: Vec<f64> = per.iter().map(|p| p.0).collect();
    let t2: Vec<f64> = per.iter().map(|p| p.1).collect();
    let (theta1, stderr1) = mean_stderr(&t1);
    let (theta2, stderr2) = mean_stderr(&t2);
    let sum = theta1 + theta2;
    let tolerance = 3.0 * (stderr1 * stderr1 + stderr2 * stderr2).sqrt();
    Ok(LyapEstimate {
        theta1,
        stderr1,
        theta2,
        stderr2,
        samples,
        length: n,
        seed,
        transposed,
        pisot: pisot_verdict(theta1, stderr1, theta2, stderr2),
        sum_rule: SumRule {
            sum,
            tolerance,
            holds: sum.abs() <= tolerance,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib_model() -> SequenceModel {
        SequenceModel::iid(vec!["fib".into()], vec![Substitution::fibonacci()], vec![1.0]).unwrap()
    }

    #[test]
    fn singleton_support_is_constant() {
        let path = sample_indices(&fib_model(), 50, 7).unwrap();
        assert!(path.iter().all(|&i| i == 0));
    }

    #[test]
    fn absorbing_chain_gets_stuck() {
        let subs = vec![Substitution::fibonacci(), Substitution::from_images("112", "12").unwrap()];
        let sampler = Sampler::Markov {
            transition: vec![vec![0.5, 0.5], vec![0.0, 1.0]],
            initial: vec![1.0, 0.0],
        };
        let m = SequenceModel::new(vec!["a".into(), "b".into()], subs, sampler).unwrap();
        let path = sample_indices(&m, 200, 3).unwrap();
        let first_b = path.iter().position(|&i| i == 1).unwrap();
        assert!(path[first_b..].iter().all(|&i| i == 1));
        assert!(!m.strongly_connected());
    }

    #[test]
    fn seeds_control_paths() {
        let subs = vec![Substitution::fibonacci(), Substitution::from_images("112", "12").unwrap()];
        let m = SequenceModel::iid(vec!["a".into(), "b".into()], subs, vec![0.5, 0.5]).unwrap();
        assert_eq!(sample_indices(&m, 100, 1).unwrap(), sample_indices(&m, 100, 1).unwrap());
        assert_ne!(sample_indices(&m, 100, 1).unwrap(), sample_indices(&m, 100, 2).unwrap());
    }

    #[test]
    fn singular_substitution_rejected() {
        let tm = Substitution::from_images("12", "21").unwrap();
        assert!(matches!(
            SequenceModel::iid(vec!["tm".into()], vec![tm], vec![1.0]),
            Err(Error::InvalidModel(_))
        ));
        assert!(SequenceModel::iid(vec!["fib".into()], vec![Substitution::fibonacci()], vec![0.7]).is_err());
    }

    #[test]
    fn fibonacci_exponents() {
        let est = estimate_exponents(&fib_model(), 4000, 8, 11).unwrap();
        let log_phi = 1.618_033_988_749_895f64.ln();
        assert!((est.theta1 - log_phi).abs() < 2e-3);
        assert!((est.theta2 + log_phi).abs() < 2e-3);
        assert_eq!(est.pisot, PisotVerdict::Satisfied);
        assert!(est.sum_rule.holds);
        let again = estimate_exponents(&fib_model(), 4000, 8, 11).unwrap();
        assert_eq!(est.theta1.to_bits(), again.theta1.to_bits());
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(pisot_verdict(0.48, 0.01, -0.48, 0.01), PisotVerdict::Satisfied);
        assert_eq!(pisot_verdict(0.01, 0.02, -0.01, 0.02), PisotVerdict::Inconclusive);
        assert_eq!(pisot_verdict(-0.3, 0.01, -0.5, 0.01), PisotVerdict::Violated);
    }

    #[test]
    fn structural_checks() {
        let m = fib_model();
        assert!(m.strongly_connected() && m.has_positive_cylinder());
        let lower = Substitution::from_images("12", "2").unwrap();
        let m = SequenceModel::iid(vec!["l".into()], vec![lower], vec![1.0]).unwrap();
        assert!(!m.has_positive_cylinder());
    }
}
