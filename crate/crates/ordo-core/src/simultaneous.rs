//! Simultaneous bounds on the left-outdegree `δℓ` and right-indegree `ϱʳ`
//! (arc counts, weights ignored).

use crate::bounded::feasible;
use crate::digraph::{Digraph, VertexOrder};
use crate::ext::ExtendedValue;
use crate::solution::{check_len, SolveError, SolveResult, Witness};
use crate::sweep::Sweep;

fn count(c: usize) -> ExtendedValue {
    ExtendedValue::from_count(c)
}

/// `δℓ(v) <= g_delta(v)` and `ϱʳ(v) >= f_rho(v)`, fixing right to left.
/// Infeasibility reports the unfixed set as an unvalidated stuck set.
pub fn solve_out_upper_in_lower(
    d: &Digraph,
    g_delta: &[ExtendedValue],
    f_rho: &[ExtendedValue],
) -> Result<SolveResult, SolveError> {
    check_len("g_delta", g_delta, d.n())?;
    check_len("f_rho", f_rho, d.n())?;
    let unit = vec![ExtendedValue::ONE; d.m()];
    let mut sw = Sweep::new(d, &unit);
    while !sw.all_fixed() {
        let Some(v) = (0..d.n()).find(|&v| {
            sw.is_unfixed(v)
                && count(sw.out_unfixed(v)) <= g_delta[v]
                && count(sw.in_fixed(v)) >= f_rho[v]
        }) else {
            return Ok(SolveResult::infeasible(Witness::stuck(sw.unfixed_vertices())));
        };
        sw.fix(v);
    }
    Ok(feasible(d, &d.weights(), VertexOrder::from_right_to_left(sw.into_fixed())))
}

/// `δℓ(v) >= f_delta(v)` and `ϱʳ(v) <= g_rho(v)`, fixing left to right.
pub fn solve_out_lower_in_upper(
    d: &Digraph,
    f_delta: &[ExtendedValue],
    g_rho: &[ExtendedValue],
) -> Result<SolveResult, SolveError> {
    check_len("f_delta", f_delta, d.n())?;
    check_len("g_rho", g_rho, d.n())?;
    let unit = vec![ExtendedValue::ONE; d.m()];
    let mut sw = Sweep::new(d, &unit);
    while !sw.all_fixed() {
        let Some(v) = (0..d.n()).find(|&v| {
            sw.is_unfixed(v)
                && count(sw.out_fixed(v)) >= f_delta[v]
                && count(sw.in_unfixed(v)) <= g_rho[v]
        }) else {
            return Ok(SolveResult::infeasible(Witness::stuck(sw.unfixed_vertices())));
        };
        sw.fix(v);
    }
    let order = VertexOrder::from_vec_unchecked(sw.into_fixed());
    Ok(feasible(d, &d.weights(), order))
}

/// `δℓ(v) = m_delta(v)` and `ϱʳ(v) = m_rho(v)`.
pub fn solve_exact(d: &Digraph, m_delta: &[usize], m_rho: &[usize]) -> Result<SolveResult, SolveError> {
    check_len("m_delta", m_delta, d.n())?;
    check_len("m_rho", m_rho, d.n())?;
    let lhs: u64 = m_delta.iter().map(|&x| x as u64).sum();
    let rhs: u64 = m_rho.iter().map(|&x| x as u64).sum();
    if lhs != rhs {
        return Ok(SolveResult::infeasible(Witness::SumMismatch { lhs, rhs }));
    }
    let g: Vec<ExtendedValue> = m_delta.iter().map(|&x| count(x)).collect();
    let f: Vec<ExtendedValue> = m_rho.iter().map(|&x| count(x)).collect();
    let result = solve_out_upper_in_lower(d, &g, &f)?;
    if let SolveResult::Feasible { profile, .. } = &result {
        // Both sums count the left-going arcs, so the inequalities are tight.
        assert_eq!(profile.delta_left, m_delta, "left-outdegrees must be exact");
        assert_eq!(profile.rho_right, m_rho, "right-indegrees must be exact");
    }
    Ok(result)
}
