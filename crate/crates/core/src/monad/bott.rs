//! Cohomology of line bundles on projective space.

use crate::exact::rational::binomial;
use num_traits::ToPrimitive;

/// `(h^0, ..., h^n)` of `O_{P^n}(k)`.
pub fn bott_line(n: usize, k: i64) -> Vec<usize> {
    let mut h = vec![0; n + 1];
    h[0] = h0(n, k);
    let top = -k - n as i64 - 1;
    if top >= 0 {
        h[n] = h0(n, top);
    }
    h
}

/// `h^0(O_{P^n}(k)) = C(n + k, n)`, zero for negative `k`.
pub fn h0(n: usize, k: i64) -> usize {
    if k < 0 {
        return 0;
    }
    binomial(n as u64 + k as u64, n as u64)
        .to_usize()
        .expect("dimension fits in usize")
}
