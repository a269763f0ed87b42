use rayon::prelude::*;

use super::{
    label_of, require_correlation, Best, Certificate, Method, SolverOptions, ValueClass, ValueReport,
};
use crate::error::{Error, Result};
use crate::model::{index::MixedRadix, BellFunctional, Correlation, Partition, Scenario};

#[inline]
fn sign_of(bit: usize) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn sign_i8(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// Exact local correlation value `max |Σ M_x Π a^i_{x_i}|` over sign vectors.
///
/// Sign vectors of all parties but the last are enumerated; the last party
/// takes the sign of each partial sum, which realizes the absolute value.
pub fn local_correlation_value(m: &BellFunctional, opts: &SolverOptions) -> Result<ValueReport> {
    require_correlation(m, "local_correlation_value")?;
    let s = m.scenario();
    let k = s.parties();
    let front_bits: usize = s.inputs()[..k - 1].iter().sum();
    let n_last = s.inputs()[k - 1];
    let front_inputs = MixedRadix::new(&s.inputs()[..k - 1]);
    let required = if front_bits >= 127 {
        u128::MAX
    } else {
        (1u128 << front_bits).saturating_mul(s.num_input_tuples() as u128)
    };
    opts.charge(required, || format!("2^(N*(k-1)) = 2^{front_bits} sign patterns"))?;

    let offsets: Vec<usize> = s.inputs()[..k - 1]
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let coeffs = m.coeffs();
    // Bit `offsets[i] + x` of a pattern is the sign of party i on input x.
    let partials = |pattern: usize, x: &mut Vec<usize>, t: &mut Vec<f64>| {
        t.iter_mut().for_each(|v| *v = 0.0);
        for xf in 0..front_inputs.len() {
            front_inputs.decode_into(xf, x);
            let sign: f64 = x
                .iter()
                .enumerate()
                .map(|(i, &xi)| sign_of((pattern >> (offsets[i] + xi)) & 1))
                .product();
            let row = &coeffs[xf * n_last..(xf + 1) * n_last];
            for (dst, c) in t.iter_mut().zip(row) {
                *dst += sign * c;
            }
        }
    };

    let best = (0..1usize << front_bits)
        .into_par_iter()
        .map_init(
            || (vec![0; k - 1], vec![0.0; n_last]),
            |(x, t), pattern| {
                partials(pattern, x, t);
                Best {
                    value: t.iter().map(|v| v.abs()).sum(),
                    index: pattern,
                }
            },
        )
        .reduce(|| Best::MAX_IDENTITY, Best::better);

    let mut x = vec![0; k - 1];
    let mut t = vec![0.0; n_last];
    partials(best.index, &mut x, &mut t);
    let mut signs: Vec<Vec<i8>> = (0..k - 1)
        .map(|i| {
            (0..s.inputs()[i])
                .map(|xi| sign_of((best.index >> (offsets[i] + xi)) & 1) as i8)
                .collect()
        })
        .collect();
    signs.push(t.iter().map(|&v| sign_i8(v)).collect());

    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::LocalCor,
        value: best.value,
        method: Method::Enumeration,
        certificate: Certificate::Signs { signs },
    })
}

/// Non-signalling correlations fill the unit cube, so the value is `Σ |M_x|`.
pub fn ns_correlation_value(m: &BellFunctional) -> Result<ValueReport> {
    require_correlation(m, "ns_correlation_value")?;
    let point: Vec<f64> = m.coeffs().iter().map(|&c| sign_i8(c) as f64).collect();
    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::NsCor,
        value: m.coeffs().iter().map(|c| c.abs()).sum(),
        method: Method::ClosedForm,
        certificate: Certificate::Correlation {
            correlation: Correlation::new(m.scenario().clone(), point)?,
        },
    })
}

/// Bilocal correlation value of a tripartite correlation functional.
///
/// Extreme points are `α_{x_i x_j} c_{x_l}` with `α` in the cube and `c` a
/// sign vector: for fixed `c` the best `α` is the sign of each partial sum.
pub fn bilocal_correlation_value(m: &BellFunctional, opts: &SolverOptions) -> Result<ValueReport> {
    require_correlation(m, "bilocal_correlation_value")?;
    let s = m.scenario();
    s.expect_parties(3, "bilocal_correlation_value")?;
    let required: u128 = Partition::ALL
        .iter()
        .map(|p| {
            let nl = s.inputs()[p.lone()];
            if nl >= 100 {
                u128::MAX
            } else {
                (1u128 << nl).saturating_mul(s.num_input_tuples() as u128)
            }
        })
        .fold(0u128, u128::saturating_add);
    opts.charge(required, || "2^N lone sign patterns per partition".to_owned())?;

    let inputs = s.input_radix();
    let mut best: Option<(f64, Partition, usize, Vec<f64>)> = None;
    for p in Partition::ALL {
        let [i, j] = p.merged();
        let l = p.lone();
        let (ni, nj, nl) = (s.inputs()[i], s.inputs()[j], s.inputs()[l]);
        // Regroup as rows (x_i, x_j) and columns x_l.
        let mut regrouped = vec![0.0; ni * nj * nl];
        let mut x = vec![0; 3];
        for (xi, &c) in m.coeffs().iter().enumerate() {
            inputs.decode_into(xi, &mut x);
            regrouped[(x[i] * nj + x[j]) * nl + x[l]] = c;
        }
        let pair_sums = |pattern: usize| -> Vec<f64> {
            regrouped
                .chunks(nl)
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .map(|(z, c)| c * sign_of((pattern >> z) & 1))
                        .sum()
                })
                .collect()
        };
        let pick = (0..1usize << nl)
            .into_par_iter()
            .map(|pattern| Best {
                value: pair_sums(pattern).iter().map(|v| v.abs()).sum(),
                index: pattern,
            })
            .reduce(|| Best::MAX_IDENTITY, Best::better);
        if best.as_ref().is_none_or(|(v, ..)| pick.value > *v) {
            let point = pair_sums(pick.index).iter().map(|&v| sign_i8(v) as f64).collect();
            best = Some((pick.value, p, pick.index, point));
        }
    }
    let (value, partition, pattern, pair_point) = best.expect("three partitions");
    let lone_signs = (0..s.inputs()[partition.lone()])
        .map(|z| sign_of((pattern >> z) & 1) as i8)
        .collect();
    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::BilocalCor,
        value,
        method: Method::ClosedForm,
        certificate: Certificate::BilocalCorrelation {
            partition,
            lone_signs,
            pair_point,
        },
    })
}

/// `γ_x = Π_i s_i(x_i)`.
pub(crate) fn product_correlation(s: &Scenario, signs: &[Vec<i8>]) -> Result<Correlation> {
    if signs.len() != s.parties() || signs.iter().zip(s.inputs()).any(|(v, &n)| v.len() != n) {
        return Err(Error::dim("sign certificate does not match the scenario"));
    }
    let inputs = s.input_radix();
    let mut x = vec![0; s.parties()];
    let table = (0..inputs.len())
        .map(|xi| {
            inputs.decode_into(xi, &mut x);
            x.iter()
                .enumerate()
                .map(|(i, &xi)| signs[i][xi] as f64)
                .product()
        })
        .collect();
    Correlation::new(s.clone(), table)
}

/// `γ_x = α_{x_i x_j} c_{x_l}`.
pub(crate) fn bilocal_correlation(
    s: &Scenario,
    partition: Partition,
    lone_signs: &[i8],
    pair_point: &[f64],
) -> Result<Correlation> {
    let [i, j] = partition.merged();
    let l = partition.lone();
    let nj = s.inputs()[j];
    if lone_signs.len() != s.inputs()[l] || pair_point.len() != s.inputs()[i] * nj {
        return Err(Error::dim("bilocal certificate does not match the scenario"));
    }
    let inputs = s.input_radix();
    let mut x = vec![0; 3];
    let table = (0..inputs.len())
        .map(|xi| {
            inputs.decode_into(xi, &mut x);
            pair_point[x[i] * nj + x[j]] * lone_signs[x[l]] as f64
        })
        .collect();
    Correlation::new(s.clone(), table)
}
