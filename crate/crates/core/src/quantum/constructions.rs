use super::linalg::{identity, kron, kron_vec, permute_factors, real_matrix, CMat, CVec};
use super::{cx, CorrelationObservables, QuantumStrategy};
use crate::error::{Error, Result};
use crate::games::{HadamardCosets, KvParams, Recipe};
use crate::model::BellFunctional;

/// Two-outcome projective measurement of a ±1 observable: outcome 0 is `+1`.
pub fn projective_from_observable(a: &CMat) -> Vec<CMat> {
    let id = identity(a.nrows());
    vec![(&id + a).scale(0.5), (&id - a).scale(0.5)]
}

fn bell_pair() -> CVec {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CVec::from_vec(vec![cx(h), cx(0.0), cx(0.0), cx(h)])
}

fn chsh_observables() -> [[CMat; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let x = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let b0 = real_matrix(2, 2, &[h, h, h, -h]);
    let b1 = real_matrix(2, 2, &[h, -h, -h, -h]);
    [[z, x], [b0, b1]]
}

/// Maximally entangled qubits with Tsirelson-optimal CHSH observables.
pub fn chsh_optimal_observables() -> CorrelationObservables {
    let [a, b] = chsh_observables();
    CorrelationObservables::new(vec![2, 2], bell_pair(), vec![a.to_vec(), b.to_vec()])
        .expect("static observables")
}

/// The same strategy as two-outcome projective measurements.
pub fn chsh_optimal_strategy() -> QuantumStrategy {
    let povms = chsh_observables()
        .iter()
        .map(|party| party.iter().map(projective_from_observable).collect())
        .collect();
    QuantumStrategy::new(vec![2, 2], bell_pair(), povms).expect("static strategy")
}

/// Maximally entangled state of dimension `n`; on question `[u]` both
/// players project onto `v_{u'}(i) = (−1)^{u'(i)} / √n` for the members `u'`.
///
/// Members of one coset differ by a nonzero codeword, which has weight `n/2`,
/// so the vectors of a coset form an orthonormal basis.
pub fn kv_strategy(params: KvParams) -> Result<QuantumStrategy> {
    let cosets = HadamardCosets::new(params.l())?;
    let n = cosets.n();
    let scale = 1.0 / (n as f64).sqrt();
    let mut state = CVec::zeros(n * n);
    for i in 0..n {
        state[i * n + i] = cx(scale);
    }
    let povms: Vec<Vec<CMat>> = cosets
        .cosets()
        .iter()
        .map(|members| {
            members
                .iter()
                .map(|&u| {
                    let v = CVec::from_iterator(
                        n,
                        (0..n).map(|i| cx(if cosets.bit(u, i) == 0 { scale } else { -scale })),
                    );
                    &v * v.adjoint()
                })
                .collect()
        })
        .collect();
    QuantumStrategy::new(vec![n, n], state, vec![povms.clone(), povms])
}

/// Three copies of a bipartite strategy shared pairwise, measured with
/// product POVMs so that the hat game factorizes.
///
/// Copy 1 is shared by Alice and Bob, copy 2 by Alice and Charlie, copy 3 by
/// Bob and Charlie. Alice measures the first site of copies 1 and 2, Bob the
/// second site of copy 1 and the first site of copy 3, Charlie the second
/// sites of copies 2 and 3.
pub fn hat_strategy(qs: &QuantumStrategy, g: &BellFunctional) -> Result<QuantumStrategy> {
    if qs.parties() != 2 {
        return Err(Error::unsupported("hat_strategy needs a bipartite strategy"));
    }
    if g.parties() != 2 || g.scenario() != &qs.scenario() {
        return Err(Error::dim("strategy and functional scenarios differ"));
    }
    let (d1, d2) = (qs.dims()[0], qs.dims()[1]);
    let phi = qs.state();
    let three = kron_vec(&kron_vec(phi, phi), phi);
    let state = permute_factors(&three, &[d1, d2, d1, d2, d1, d2], &[0, 2, 1, 4, 3, 5]);
    let (pi, lambda) = (&qs.povms()[0], &qs.povms()[1]);
    let pair = |first: &[Vec<CMat>], second: &[Vec<CMat>]| -> Vec<Vec<CMat>> {
        let mut out = Vec::with_capacity(first.len() * second.len());
        for e in first {
            for f in second {
                let mut povm = Vec::with_capacity(e.len() * f.len());
                for ea in e {
                    for fb in f {
                        povm.push(kron(ea, fb));
                    }
                }
                out.push(povm);
            }
        }
        out
    };
    QuantumStrategy::new(
        vec![d1 * d1, d2 * d1, d2 * d2],
        state,
        vec![pair(pi, pi), pair(lambda, pi), pair(lambda, lambda)],
    )
}

/// Strategy for the parallel play of two bipartite games.
pub fn tensor_strategy(left: &QuantumStrategy, right: &QuantumStrategy) -> Result<QuantumStrategy> {
    if left.parties() != 2 || right.parties() != 2 {
        return Err(Error::unsupported("tensor_strategy needs bipartite strategies"));
    }
    let (a1, b1, a2, b2) = (left.dims()[0], left.dims()[1], right.dims()[0], right.dims()[1]);
    let state = permute_factors(
        &kron_vec(left.state(), right.state()),
        &[a1, b1, a2, b2],
        &[0, 2, 1, 3],
    );
    let pair = |p: usize| -> Vec<Vec<CMat>> {
        let mut out = Vec::new();
        for e in &left.povms()[p] {
            for f in &right.povms()[p] {
                out.push(e.iter().flat_map(|ea| f.iter().map(move |fb| kron(ea, fb))).collect());
            }
        }
        out
    };
    QuantumStrategy::new(vec![a1 * a2, b1 * b2], state, vec![pair(0), pair(1)])
}

fn trivial_strategy(parties: usize) -> Result<QuantumStrategy> {
    let state = CVec::from_vec(vec![cx(1.0)]);
    QuantumStrategy::new(vec![1; parties], state, vec![vec![vec![identity(1)]]; parties])
}

/// The explicit strategy that comes with a constructed game, if there is one.
pub fn constructed_strategy(recipe: &Recipe) -> Result<QuantumStrategy> {
    match recipe {
        Recipe::Chsh => Ok(chsh_optimal_strategy()),
        Recipe::Trivial { parties } => trivial_strategy(*parties),
        Recipe::Kv { l, eta } => kv_strategy(KvParams::with_eta(*l, *eta)?),
        Recipe::Tensor { left, right } => {
            tensor_strategy(&constructed_strategy(left)?, &constructed_strategy(right)?)
        }
        Recipe::Hat { base } => hat_strategy(&constructed_strategy(base)?, &base.build()?),
        Recipe::ChshCor | Recipe::HadamardCor { .. } => Err(Error::unsupported(
            "correlation functionals have no constructed POVM strategy; use the see-saw",
        )),
        Recipe::Tilde { .. } => Err(Error::unsupported("no constructed strategy for tilde games")),
    }
}
