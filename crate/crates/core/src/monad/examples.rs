//! Ready-made monads on `P^3`.

use super::complex::LineBundleComplex;
use crate::exact::poly::{HomogPoly, PolyMatrix};

/// Charge-one null-correlation monad `O(-1) -> O^4 -> O(1)` in coordinates
/// `(z0, z1, x, y)`: `alpha = (x, y, z1, -z0)^T`, `beta = (-y, x, z0, z1)`.
pub fn null_correlation() -> LineBundleComplex {
    let v = |i| HomogPoly::var(4, i);
    let (z0, z1, x, y) = (v(0), v(1), v(2), v(3));
    let alpha = PolyMatrix::from_rows(4, vec![vec![x.clone()], vec![y.clone()], vec![z1.clone()], vec![z0.neg()]])
        .expect("rectangular");
    let beta = PolyMatrix::from_rows(4, vec![vec![y.neg(), x, z0, z1]]).expect("rectangular");
    LineBundleComplex::monad(3, 1, 4, 1, alpha, beta).expect("well-formed monad")
}

/// The linear `3 x 3` block `M` shared by both maps.
fn shared_block() -> PolyMatrix {
    let v = |i| HomogPoly::var(4, i);
    let z = HomogPoly::zero(4, 1);
    PolyMatrix::from_rows(
        4,
        vec![
            vec![v(1), v(2), z.clone()],
            vec![v(0).neg(), z.clone(), v(2)],
            vec![z, v(0).neg(), v(1).neg()],
        ],
    )
    .expect("rectangular")
}

/// `O(-1)^3 -> O^6 -> O(1)^3` with `alpha = (-M ; x3 I)` and
/// `beta = (x3 I | M)`. Its middle term is not a sheaf: the complex has
/// cohomology supported on the plane `x3 = 0` and character `(0, 0, -3, 0)`.
pub fn non_sheaf_p3() -> LineBundleComplex {
    let m = shared_block();
    let x3 = HomogPoly::var(4, 3);
    let z = HomogPoly::zero(4, 1);
    let mut alpha_rows = Vec::new();
    for i in 0..3 {
        alpha_rows.push((0..3).map(|j| m.get(i, j).neg()).collect::<Vec<_>>());
    }
    for i in 0..3 {
        alpha_rows.push((0..3).map(|j| if i == j { x3.clone() } else { z.clone() }).collect());
    }
    let mut beta_rows = Vec::new();
    for i in 0..3 {
        let mut row: Vec<HomogPoly> = (0..3).map(|j| if i == j { x3.clone() } else { z.clone() }).collect();
        row.extend((0..3).map(|j| m.get(i, j).clone()));
        beta_rows.push(row);
    }
    let alpha = PolyMatrix::from_rows(4, alpha_rows).expect("rectangular");
    let beta = PolyMatrix::from_rows(4, beta_rows).expect("rectangular");
    LineBundleComplex::monad(3, 3, 6, 3, alpha, beta).expect("well-formed monad")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::qi;
    use crate::monad::hypercohomology;
    use crate::monad::spectral::nonzero;
    use std::collections::BTreeMap;

    #[test]
    fn non_sheaf_monad() {
        let c = non_sheaf_p3();
        assert!(c.verify().unwrap());
        assert_eq!(c.character().a, vec![qi(0), qi(0), qi(-3), qi(0)]);
        assert_eq!(nonzero(&hypercohomology(&c, 0).unwrap()), BTreeMap::from([(1, 6)]));
    }
}
