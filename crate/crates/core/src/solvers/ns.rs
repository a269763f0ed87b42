use super::{label_of, require_full, Certificate, Method, SolverOptions, ValueClass, ValueReport};
use crate::error::{Error, Result};
use crate::linprog::{solve_lp, LinearProgram};
use crate::model::{BellFunctional, Behaviour, Scenario};

/// Non-signalling polytope with objective `coeffs`.
///
/// Variables are the behaviour entries in table order. Rows: per-input
/// normalization, and for each party `i` the marginal of the others is the
/// same for `x_i` and `x_i = 0`. Those single-party conditions imply the
/// condition for every subset.
pub fn ns_program(scenario: &Scenario, coeffs: &[f64]) -> Result<LinearProgram> {
    if coeffs.len() != scenario.table_len() {
        return Err(Error::dim("objective does not match the scenario"));
    }
    let k = scenario.parties();
    let inputs = scenario.input_radix();
    let outputs = scenario.output_radix();
    let n_out = outputs.len();
    let mut lp = LinearProgram::new(coeffs.to_vec());

    for xi in 0..inputs.len() {
        lp.add_equality((0..n_out).map(|a| (xi * n_out + a, 1.0)).collect(), 1.0)?;
    }

    let mut x = vec![0; k];
    let mut a = vec![0; k];
    for party in 0..k {
        let (n_i, k_i) = (scenario.inputs()[party], scenario.outputs()[party]);
        let x_stride = inputs.stride(party);
        let a_stride = outputs.stride(party);
        for xi in 0..inputs.len() {
            inputs.decode_into(xi, &mut x);
            if x[party] == 0 || n_i == 1 {
                continue;
            }
            let x_ref = xi - x[party] * x_stride;
            for ai in 0..n_out {
                outputs.decode_into(ai, &mut a);
                if a[party] != 0 {
                    continue;
                }
                // `ai` ranges over output tuples with a_party = 0: one row per a_{-party}.
                let mut row = Vec::with_capacity(2 * k_i);
                for t in 0..k_i {
                    row.push((xi * n_out + ai + t * a_stride, 1.0));
                    row.push((x_ref * n_out + ai + t * a_stride, -1.0));
                }
                lp.add_equality(row, 0.0)?;
            }
        }
    }
    Ok(lp)
}

/// Optimum over the non-signalling polytope with its optimal behaviour.
///
/// Returns `|⟨M, P⟩|` maximized; both orientations are solved unless the
/// coefficients are non-negative.
pub(crate) fn ns_optimum(
    scenario: &Scenario,
    coeffs: &[f64],
    opts: &SolverOptions,
) -> Result<(f64, Behaviour)> {
    let lp = ns_program(scenario, coeffs)?;
    opts.charge(
        (lp.num_vars() as u128) * (lp.num_constraints() as u128),
        || {
            format!(
                "NS program with {} variables and {} constraints",
                lp.num_vars(),
                lp.num_constraints()
            )
        },
    )?;
    let mut best = solve_lp(&lp)?;
    if coeffs.iter().any(|&c| c < 0.0) {
        let negated: Vec<f64> = coeffs.iter().map(|c| -c).collect();
        let other = solve_lp(&ns_program(scenario, &negated)?)?;
        if other.value > best.value {
            best = other;
        }
    }
    let behaviour = Behaviour::new(scenario.clone(), best.point)
        .map_err(|e| Error::Internal(format!("LP point is not a behaviour: {e}")))?;
    Ok((best.value, behaviour))
}

pub fn ns_value(m: &BellFunctional, opts: &SolverOptions) -> Result<ValueReport> {
    require_full(m, "ns_value")?;
    let (value, behaviour) = ns_optimum(m.scenario(), m.coeffs(), opts)?;
    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::Ns,
        value,
        method: Method::Lp,
        certificate: Certificate::Behaviour { behaviour },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::chsh_game;
    use crate::model::FunctionalKind;

    #[test]
    fn chsh_reaches_one_with_a_non_signalling_box() {
        let r = ns_value(&chsh_game(), &SolverOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        match &r.certificate {
            Certificate::Behaviour { behaviour } => assert!(behaviour.is_non_signalling()),
            c => panic!("unexpected certificate {c:?}"),
        }
        assert!((r.recheck(&chsh_game()).unwrap() - r.value).abs() < 1e-9);
    }

    #[test]
    fn zero_functional() {
        let s = Scenario::uniform(3, 2, 2).unwrap();
        let f = BellFunctional::zero(s, FunctionalKind::General).unwrap();
        let r = ns_value(&f, &SolverOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn negative_functional_uses_absolute_value() {
        let f = chsh_game().scaled(-1.0);
        let r = ns_value(&f, &SolverOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn signalling_deterministic_point_is_excluded() {
        // Rewards Alice for outputting Bob's input: NS caps it at 1/2.
        let s = Scenario::uniform(2, 2, 2).unwrap();
        let mut c = vec![0.0; 16];
        for x in 0..2 {
            for y in 0..2 {
                for b in 0..2 {
                    c[(x * 2 + y) * 4 + y * 2 + b] = 0.25;
                }
            }
        }
        let f = BellFunctional::game(s, c).unwrap();
        let r = ns_value(&f, &SolverOptions::default()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9, "{}", r.value);
    }
}
