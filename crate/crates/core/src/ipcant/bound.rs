use num_bigint::BigUint;
use num_traits::{One, Pow};

/// The sequences `α_i`, `U_i` and the run-length bound `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundParams {
    pub alpha: Vec<BigUint>,
    pub u: Vec<BigUint>,
    pub m: BigUint,
}

/// Exact values for a machine with `states` control states, basis size
/// `basis` and `counters` counters. The numbers are doubly exponential in
/// `basis`; keep it small.
pub fn compute_bound(states: usize, basis: usize, counters: usize) -> BoundParams {
    let mut alpha = vec![BigUint::from(states)];
    let mut u = vec![BigUint::one()];
    for i in 0..basis {
        let pow: BigUint = Pow::pow(&u[i], counters);
        let base = &alpha[i] * &pow;
        alpha.push(BigUint::from(2 * (basis - i)) * &base);
        u.push(BigUint::from(3u32) * base);
    }
    let m = BigUint::from(2u32) * &alpha[basis] * Pow::pow(&u[basis], counters);
    BoundParams { alpha, u, m }
}

/// `log2 m`, for parameters whose exact value is out of reach.
pub fn bound_log2(states: f64, basis: usize, counters: f64) -> f64 {
    let c = counters;
    let mut la = states.log2();
    let mut lu = 0.0f64;
    for i in 0..basis {
        let base = la + c * lu;
        la = 1.0 + ((basis - i) as f64).log2() + base;
        lu = 3f64.log2() + base;
    }
    1.0 + la + c * lu
}
