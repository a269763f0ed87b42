//! Independent reference computations. They share no code with the solvers
//! beyond reading coefficients, and favour obviousness over speed.
#![allow(dead_code, clippy::needless_range_loop)]

use bellgap::BellFunctional;

/// Row-major decode with the first digit slowest.
pub fn decode(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        out[i] = index % radices[i];
        index /= radices[i];
    }
    out
}

pub fn encode(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (d, r)| acc * r + d)
}

fn product(v: &[usize]) -> usize {
    v.iter().product()
}

/// `M[x, a]` of a full functional.
pub fn coeff(m: &BellFunctional, x: &[usize], a: &[usize]) -> f64 {
    let s = m.scenario();
    let n_out = product(s.outputs());
    m.coeffs()[encode(x, s.inputs()) * n_out + encode(a, s.outputs())]
}

/// Every deterministic strategy of every party, no best response.
pub fn brute_force_local(m: &BellFunctional) -> f64 {
    let s = m.scenario();
    let (ins, outs) = (s.inputs().to_vec(), s.outputs().to_vec());
    // One digit per (party, input).
    let mut radices = Vec::new();
    for (n, k) in ins.iter().zip(&outs) {
        radices.extend(std::iter::repeat_n(*k, *n));
    }
    let total = product(&radices);
    let n_in = product(&ins);
    let mut best: f64 = 0.0;
    for idx in 0..total {
        let d = decode(idx, &radices);
        let mut v = 0.0;
        for xi in 0..n_in {
            let x = decode(xi, &ins);
            let mut off = 0;
            let a: Vec<usize> = x
                .iter()
                .enumerate()
                .map(|(p, &xp)| {
                    let r = d[off + xp];
                    off += ins[p];
                    r
                })
                .collect();
            v += coeff(m, &x, &a);
        }
        best = best.max(v.abs());
    }
    best
}

/// Tripartite bilocal value with general pair distributions: for each
/// lone party and each of its deterministic strategies, the pair answers
/// each of its input pairs with the best output pair.
pub fn brute_force_bilocal(m: &BellFunctional) -> f64 {
    let s = m.scenario();
    let (ins, outs) = (s.inputs(), s.outputs());
    let mut best: f64 = 0.0;
    for lone in 0..3 {
        let pair: Vec<usize> = (0..3).filter(|&p| p != lone).collect();
        let (i, j) = (pair[0], pair[1]);
        let lone_radices = vec![outs[lone]; ins[lone]];
        for idx in 0..product(&lone_radices) {
            let strat = decode(idx, &lone_radices);
            let mut total = 0.0;
            for xi in 0..ins[i] {
                for xj in 0..ins[j] {
                    let mut top = f64::NEG_INFINITY;
                    for ai in 0..outs[i] {
                        for aj in 0..outs[j] {
                            let mut v = 0.0;
                            for xl in 0..ins[lone] {
                                let mut x = [0; 3];
                                let mut a = [0; 3];
                                x[i] = xi;
                                x[j] = xj;
                                x[lone] = xl;
                                a[i] = ai;
                                a[j] = aj;
                                a[lone] = strat[xl];
                                v += coeff(m, &x, &a);
                            }
                            top = top.max(v);
                        }
                    }
                    total += top;
                }
            }
            best = best.max(total);
        }
    }
    best
}

/// `max |Σ M_x Π s_i(x_i)|` over every sign assignment of every party.
pub fn brute_force_local_correlation(m: &BellFunctional) -> f64 {
    let s = m.scenario();
    let ins = s.inputs().to_vec();
    let bits: usize = ins.iter().sum();
    let n_in = product(&ins);
    let mut best: f64 = 0.0;
    for pattern in 0..1usize << bits {
        let mut v = 0.0;
        for xi in 0..n_in {
            let x = decode(xi, &ins);
            let mut off = 0;
            let mut sign = 1.0;
            for (p, &xp) in x.iter().enumerate() {
                if (pattern >> (off + xp)) & 1 == 1 {
                    sign = -sign;
                }
                off += ins[p];
            }
            v += sign * m.coeffs()[xi];
        }
        best = best.max(v.abs());
    }
    best
}

/// Tsirelson value of the CHSH game, `cos²(π/8)`.
pub fn chsh_quantum_oracle() -> f64 {
    (std::f64::consts::PI / 8.0).cos().powi(2)
}

/// Largest deviation of any single-party-removed marginal from its value at
/// the reference input of the removed party, plus row-sum and sign defects.
pub fn ns_defect(scenario: &bellgap::Scenario, table: &[f64]) -> f64 {
    let (ins, outs) = (scenario.inputs().to_vec(), scenario.outputs().to_vec());
    let k = ins.len();
    let n_in = product(&ins);
    let n_out = product(&outs);
    let mut worst: f64 = 0.0;
    for xi in 0..n_in {
        let row = &table[xi * n_out..(xi + 1) * n_out];
        worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
        worst = worst.max(row.iter().map(|p| (-p).max(0.0)).fold(0.0, f64::max));
    }
    // Marginal of all parties except `p` must not depend on x_p; with every
    // party checked this covers all subsets.
    for p in 0..k {
        for xi in 0..n_in {
            let x = decode(xi, &ins);
            let mut x_ref = x.clone();
            x_ref[p] = 0;
            let xr = encode(&x_ref, &ins);
            let mut marg = std::collections::HashMap::new();
            for ai in 0..n_out {
                let mut a = decode(ai, &outs);
                a[p] = 0;
                *marg.entry(a).or_insert(0.0) += table[xi * n_out + ai] - table[xr * n_out + ai];
            }
            worst = marg.values().fold(worst, |w, d: &f64| w.max(d.abs()));
        }
    }
    worst
}

/// Bipartite functional with the two players' roles exchanged.
pub fn swap_players(m: &BellFunctional) -> BellFunctional {
    let s = m.scenario();
    let (n, k) = (s.inputs().to_vec(), s.outputs().to_vec());
    let swapped = bellgap::Scenario::new(vec![n[1], n[0]], vec![k[1], k[0]]).unwrap();
    let mut c = vec![0.0; m.coeffs().len()];
    for x in 0..n[0] {
        for y in 0..n[1] {
            for a in 0..k[0] {
                for b in 0..k[1] {
                    c[encode(&[y, x], &[n[1], n[0]]) * k[0] * k[1] + encode(&[b, a], &[k[1], k[0]])] =
                        coeff(m, &[x, y], &[a, b]);
                }
            }
        }
    }
    BellFunctional::new(swapped, m.kind(), c).unwrap()
}
