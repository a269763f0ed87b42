use std::collections::HashMap;

use rayon::prelude::*;

use super::ns::{ns_optimum, ns_program};
use super::{
    label_of, local_value, require_full, Best, Certificate, Method, SolverOptions, ValueClass,
    ValueReport,
};
use crate::error::{Error, Result};
use crate::model::{
    index::{checked_pow, MixedRadix},
    BellFunctional, Behaviour, Partition, Scenario,
};

/// Bipartite functional with the lone party first and the merged pair as
/// one player second. The pair's input is `x_i * N_j + x_j`, its output
/// `a_i * K_j + a_j`, with `[i, j] = partition.merged()`.
pub fn merge_pair(m: &BellFunctional, partition: Partition) -> Result<BellFunctional> {
    let s = m.scenario();
    s.expect_parties(3, "merging a pair")?;
    require_full(m, "merging a pair")?;
    let [i, j] = partition.merged();
    let l = partition.lone();
    let (ni, nj, nl) = (s.inputs()[i], s.inputs()[j], s.inputs()[l]);
    let (ki, kj, kl) = (s.outputs()[i], s.outputs()[j], s.outputs()[l]);
    let merged = Scenario::new(vec![nl, ni * nj], vec![kl, ki * kj])?;

    let inputs = s.input_radix();
    let outputs = s.output_radix();
    let n_out = outputs.len();
    // Digits of the merged layout: x_l x_i x_j a_l a_i a_j.
    let radix = MixedRadix::new(&[nl, ni, nj, kl, ki, kj]);
    let mut d = vec![0; 6];
    let mut x = [0usize; 3];
    let mut a = [0usize; 3];
    let mut coeffs = Vec::with_capacity(radix.len());
    for _ in 0..radix.len() {
        x[l] = d[0];
        x[i] = d[1];
        x[j] = d[2];
        a[l] = d[3];
        a[i] = d[4];
        a[j] = d[5];
        coeffs.push(m.coeffs()[inputs.encode(&x) * n_out + outputs.encode(&a)]);
        radix.advance(&mut d);
    }
    Ok(BellFunctional::new(merged, m.kind(), coeffs)?.with_label(format!("{}[{partition}]", m.label())))
}

/// General (Svetlichny) bilocal value of a tripartite game.
///
/// For each partition the pair is merged into one player and the bipartite
/// local value is computed; the answer is the largest of the three.
pub fn bilocal_value_general(m: &BellFunctional, opts: &SolverOptions) -> Result<ValueReport> {
    m.scenario().expect_parties(3, "bilocal_value_general")?;
    require_full(m, "bilocal_value_general")?;
    if !m.is_nonnegative() {
        return Err(Error::unsupported(
            "bilocal_value_general reduces to merged-pair local values only for \
             non-negative functionals (games); this functional has negative coefficients",
        ));
    }
    let mut best: Option<(f64, Partition, ValueReport)> = None;
    for p in Partition::ALL {
        let merged = merge_pair(m, p)?;
        let r = local_value(&merged, opts)?;
        if best.as_ref().is_none_or(|(v, _, _)| r.value > *v) {
            best = Some((r.value, p, r));
        }
    }
    let (value, partition, report) = best.expect("three partitions");
    let Certificate::Deterministic { strategy } = report.certificate else {
        unreachable!("local_value certifies with a deterministic strategy")
    };
    let kj = m.scenario().outputs()[partition.merged()[1]];
    let merged_outputs = strategy.assignment()[1]
        .iter()
        .map(|&o| [o / kj, o % kj])
        .collect();
    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::BilocalGeneral,
        value,
        method: Method::Enumeration,
        certificate: Certificate::Bilocal {
            partition,
            lone_outputs: strategy.assignment()[0].clone(),
            merged_outputs,
        },
    })
}

/// Non-signalling bilocal value of a tripartite functional.
///
/// The lone party's extreme points are deterministic; for each of them the
/// pair faces a bipartite functional, optimized over its NS polytope.
pub fn bilocal_value_ns(m: &BellFunctional, opts: &SolverOptions) -> Result<ValueReport> {
    let s = m.scenario();
    s.expect_parties(3, "bilocal_value_ns")?;
    require_full(m, "bilocal_value_ns")?;

    let mut total: u128 = 0;
    for p in Partition::ALL {
        let [i, j] = p.merged();
        let pair = Scenario::new(
            vec![s.inputs()[i], s.inputs()[j]],
            vec![s.outputs()[i], s.outputs()[j]],
        )?;
        let lp = ns_program(&pair, &vec![0.0; pair.table_len()])?;
        let per = (lp.num_vars() * lp.num_constraints()) as u128;
        let count = checked_pow(s.outputs()[p.lone()], s.inputs()[p.lone()]);
        total = total.saturating_add(count.saturating_mul(per));
    }
    opts.charge(total, || {
        "K^N lone strategies x NS program size, summed over partitions".to_owned()
    })?;
    // Each LP was charged above; the inner solves run unmetered.
    let inner = SolverOptions::with_budget(u64::MAX);

    let mut best: Option<(f64, Partition, Vec<usize>, Behaviour)> = None;
    for p in Partition::ALL {
        let [i, j] = p.merged();
        let pair = Scenario::new(
            vec![s.inputs()[i], s.inputs()[j]],
            vec![s.outputs()[i], s.outputs()[j]],
        )?;
        let merged = merge_pair(m, p)?;
        let (nl, kl) = (s.inputs()[p.lone()], s.outputs()[p.lone()]);
        let lone_radix = MixedRadix::new(&vec![kl; nl]);
        let width = pair.table_len();

        let folded: Vec<Vec<f64>> = (0..lone_radix.len())
            .map(|idx| {
                let lone = lone_radix.decode(idx);
                let mut f = vec![0.0; width];
                for (xl, &al) in lone.iter().enumerate() {
                    // Merged layout: rows are (x_l, x_pair), columns (a_l, a_pair).
                    let n_pair_in = pair.num_input_tuples();
                    let n_pair_out = pair.num_output_tuples();
                    for xp in 0..n_pair_in {
                        let row = (xl * n_pair_in + xp) * kl * n_pair_out + al * n_pair_out;
                        let src = &merged.coeffs()[row..row + n_pair_out];
                        for (dst, c) in f[xp * n_pair_out..(xp + 1) * n_pair_out].iter_mut().zip(src) {
                            *dst += c;
                        }
                    }
                }
                f
            })
            .collect();

        let mut slot_of: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut unique: Vec<&[f64]> = Vec::new();
        let slots: Vec<usize> = folded
            .iter()
            .map(|f| {
                let key: Vec<u64> = f.iter().map(|v| v.to_bits()).collect();
                *slot_of.entry(key).or_insert_with(|| {
                    unique.push(f);
                    unique.len() - 1
                })
            })
            .collect();
        let solved: Vec<(f64, Behaviour)> = unique
            .par_iter()
            .map(|f| ns_optimum(&pair, f, &inner))
            .collect::<Result<_>>()?;

        let pick = slots
            .iter()
            .enumerate()
            .map(|(idx, &slot)| Best {
                value: solved[slot].0,
                index: idx,
            })
            .fold(Best::MAX_IDENTITY, Best::better);
        if best.as_ref().is_none_or(|(v, ..)| pick.value > *v) {
            let (value, behaviour) = solved[slots[pick.index]].clone();
            best = Some((value, p, lone_radix.decode(pick.index), behaviour));
        }
    }

    let (value, partition, lone_outputs, pair_behaviour) = best.expect("three partitions");
    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::BilocalNs,
        value,
        method: Method::Lp,
        certificate: Certificate::BilocalNs {
            partition,
            lone_outputs,
            pair_behaviour,
        },
    })
}

/// Tripartite behaviour of a lone deterministic party and a deterministic merged pair.
pub(crate) fn deterministic_bilocal_behaviour(
    s: &Scenario,
    partition: Partition,
    lone_outputs: &[usize],
    merged_outputs: &[[usize; 2]],
) -> Result<Behaviour> {
    let [i, j] = partition.merged();
    let l = partition.lone();
    if lone_outputs.len() != s.inputs()[l] || merged_outputs.len() != s.inputs()[i] * s.inputs()[j] {
        return Err(Error::dim("bilocal certificate does not match the scenario"));
    }
    product_behaviour(s, |x, a| {
        let pair = merged_outputs[x[i] * s.inputs()[j] + x[j]];
        if a[l] == lone_outputs[x[l]] && a[i] == pair[0] && a[j] == pair[1] {
            1.0
        } else {
            0.0
        }
    })
}

/// `P(a|x) = Q(a_i a_j | x_i x_j) · [a_l = lone(x_l)]`.
pub(crate) fn ns_bilocal_behaviour(
    s: &Scenario,
    partition: Partition,
    lone_outputs: &[usize],
    pair: &Behaviour,
) -> Result<Behaviour> {
    let [i, j] = partition.merged();
    let l = partition.lone();
    if lone_outputs.len() != s.inputs()[l]
        || pair.scenario().inputs() != [s.inputs()[i], s.inputs()[j]]
        || pair.scenario().outputs() != [s.outputs()[i], s.outputs()[j]]
    {
        return Err(Error::dim("bilocal certificate does not match the scenario"));
    }
    product_behaviour(s, |x, a| {
        if a[l] == lone_outputs[x[l]] {
            pair.prob(&[a[i], a[j]], &[x[i], x[j]])
        } else {
            0.0
        }
    })
}

fn product_behaviour(s: &Scenario, entry: impl Fn(&[usize], &[usize]) -> f64) -> Result<Behaviour> {
    let inputs = s.input_radix();
    let outputs = s.output_radix();
    let mut x = vec![0; s.parties()];
    let mut a = vec![0; s.parties()];
    let mut table = Vec::with_capacity(s.table_len());
    for xi in 0..inputs.len() {
        inputs.decode_into(xi, &mut x);
        for ai in 0..outputs.len() {
            outputs.decode_into(ai, &mut a);
            table.push(entry(&x, &a));
        }
    }
    Behaviour::new(s.clone(), table)
}
