use rayon::prelude::*;

use super::{label_of, require_full, strategy_bound, Best, Certificate, Method, SolverOptions, ValueClass, ValueReport};
use crate::error::Result;
use crate::model::{index::checked_pow, index::MixedRadix, BellFunctional, DeterministicStrategy};

/// Enumerates deterministic strategies of all parties but the last.
struct FrontEnumerator<'a> {
    coeffs: &'a [f64],
    /// One digit per (party, input) of the front parties, radix = that party's outputs.
    digits: MixedRadix,
    /// Offset of each front party's first digit.
    digit_offset: Vec<usize>,
    front_inputs: MixedRadix,
    front_outputs: MixedRadix,
    n_last: usize,
    k_last: usize,
    n_out: usize,
}

struct Scratch {
    digits: Vec<usize>,
    x: Vec<usize>,
    out_index: Vec<usize>,
    response: Vec<f64>,
}

impl<'a> FrontEnumerator<'a> {
    fn new(m: &'a BellFunctional) -> Self {
        let s = m.scenario();
        let k = s.parties();
        let front = 0..k - 1;
        let mut radices = Vec::new();
        let mut digit_offset = Vec::new();
        for i in front.clone() {
            digit_offset.push(radices.len());
            radices.extend(std::iter::repeat_n(s.outputs()[i], s.inputs()[i]));
        }
        Self {
            coeffs: m.coeffs(),
            digits: MixedRadix::new(&radices),
            digit_offset,
            front_inputs: MixedRadix::new(&s.inputs()[front.clone()]),
            front_outputs: MixedRadix::new(&s.outputs()[front]),
            n_last: s.inputs()[k - 1],
            k_last: s.outputs()[k - 1],
            n_out: s.num_output_tuples(),
        }
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            digits: vec![0; self.digits.digits()],
            x: vec![0; self.front_inputs.digits()],
            out_index: vec![0; self.front_inputs.len()],
            response: vec![0.0; self.n_last * self.k_last],
        }
    }

    /// Fills `scratch.response[x_last * K + a_last]` for front strategy `index`.
    fn response(&self, index: usize, scratch: &mut Scratch) {
        self.digits.decode_into(index, &mut scratch.digits);
        for xf in 0..self.front_inputs.len() {
            self.front_inputs.decode_into(xf, &mut scratch.x);
            scratch.out_index[xf] = scratch
                .x
                .iter()
                .enumerate()
                .map(|(i, &xi)| {
                    scratch.digits[self.digit_offset[i] + xi] * self.front_outputs.stride(i)
                })
                .sum();
        }
        scratch.response.iter_mut().for_each(|v| *v = 0.0);
        for (xf, &ao) in scratch.out_index.iter().enumerate() {
            for xl in 0..self.n_last {
                let base = (xf * self.n_last + xl) * self.n_out + ao * self.k_last;
                let row = &self.coeffs[base..base + self.k_last];
                let dst = &mut scratch.response[xl * self.k_last..(xl + 1) * self.k_last];
                for (d, c) in dst.iter_mut().zip(row) {
                    *d += c;
                }
            }
        }
    }

    /// Best-response totals `(Σ max, Σ min)` over the last party's inputs.
    fn extremes(&self, scratch: &Scratch) -> (f64, f64) {
        scratch
            .response
            .chunks(self.k_last)
            .fold((0.0, 0.0), |(hi, lo), row| {
                let mx = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mn = row.iter().copied().fold(f64::INFINITY, f64::min);
                (hi + mx, lo + mn)
            })
    }
}

/// Exact fully-local value by enumeration with a best-responding last party.
pub fn local_value(m: &BellFunctional, opts: &SolverOptions) -> Result<ValueReport> {
    require_full(m, "local_value")?;
    let s = m.scenario();
    let k = s.parties();
    let front: Vec<usize> = (0..k - 1).collect();
    let strategies = front.iter().fold(1u128, |acc, &i| {
        acc.saturating_mul(checked_pow(s.outputs()[i], s.inputs()[i]))
    });
    let per = (s.num_input_tuples() * s.outputs()[k - 1]) as u128;
    opts.charge(strategies.saturating_mul(per), || strategy_bound(s, &front))?;

    let en = FrontEnumerator::new(m);
    let total = en.digits.len();
    let (hi, lo) = (0..total)
        .into_par_iter()
        .map_init(
            || en.scratch(),
            |scratch, idx| {
                en.response(idx, scratch);
                let (mx, mn) = en.extremes(scratch);
                (
                    Best { value: mx, index: idx },
                    Best { value: -mn, index: idx },
                )
            },
        )
        .reduce(
            || (Best::MAX_IDENTITY, Best::MAX_IDENTITY),
            |(a, b), (c, d)| (a.better(c), b.better(d)),
        );

    // Positive orientation wins ties so games never flip sign.
    let (best, maximize) = if hi.value >= lo.value { (hi, true) } else { (lo, false) };
    let mut scratch = en.scratch();
    en.response(best.index, &mut scratch);

    let mut assignment: Vec<Vec<usize>> = front
        .iter()
        .map(|&i| {
            let off = en.digit_offset[i];
            scratch.digits[off..off + s.inputs()[i]].to_vec()
        })
        .collect();
    let last: Vec<usize> = scratch
        .response
        .chunks(en.k_last)
        .map(|row| {
            let pick = |a: usize, b: usize| {
                let better = if maximize { row[b] > row[a] } else { row[b] < row[a] };
                if better {
                    b
                } else {
                    a
                }
            };
            (1..row.len()).fold(0, pick)
        })
        .collect();
    assignment.push(last);
    let strategy = DeterministicStrategy::new(s.clone(), assignment)?;

    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::Local,
        value: best.value,
        method: Method::Enumeration,
        certificate: Certificate::Deterministic { strategy },
    })
}
