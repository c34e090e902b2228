//! Integer lattices: kernels of integer matrices and Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A `Z`-basis of `{x in Z^cols : a x = 0}`, computed with unimodular column
/// operations.
pub fn integer_kernel(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    // u[j] is column j of the accumulated unimodular transform.
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| {
            let mut c = vec![BigInt::zero(); cols];
            c[j] = 1.into();
            c
        })
        .collect();
    let col_op = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, f: &BigInt| {
        for row in m.iter_mut() {
            let t = &row[src] * f;
            row[dst] -= t;
        }
        let (s, d) = (u[src].clone(), &mut u[dst]);
        for (x, y) in d.iter_mut().zip(&s) {
            *x -= y * f;
        }
    };
    let col_swap = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        u.swap(i, j);
    };

    let mut pc = 0;
    for i in 0..m.len() {
        if pc == cols {
            break;
        }
        loop {
            let smallest = (pc..cols)
                .filter(|&j| !m[i][j].is_zero())
                .min_by(|&x, &y| m[i][x].abs().cmp(&m[i][y].abs()));
            let Some(j) = smallest else { break };
            col_swap(&mut m, &mut u, pc, j);
            let mut done = true;
            for k in pc + 1..cols {
                if m[i][k].is_zero() {
                    continue;
                }
                let f = m[i][k].div_floor(&m[i][pc]);
                col_op(&mut m, &mut u, k, pc, &f);
                if !m[i][k].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !m[i][pc].is_zero() {
            pc += 1;
        }
    }
    u[pc..].to_vec()
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows
/// are dropped and the result is canonical for the lattice.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            let smallest = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&x, &y| m[x][c].abs().cmp(&m[y][c].abs()));
            let Some(p) = smallest else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].div_floor(&m[r][c]);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= y * &f;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m.get(r).is_some_and(|row| !row[c].is_zero()) {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = m[r].clone();
            for i in 0..r {
                let f = m[i][c].div_floor(&pivot_row[c]);
                if f.is_zero() {
                    continue;
                }
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= y * &f;
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_single_equation() {
        // 2x + 3y + 5z = 0 has a rank-2 kernel
        let a = bi(&[&[2, 3, 5]]);
        let ker = integer_kernel(&a, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let s: BigInt = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn congruence_lattice() {
        // {x : x ≡ 0 mod 4} as the projection of the kernel of [1 | -4]
        let ker = integer_kernel(&bi(&[&[1, -4]]), 2);
        let proj: Vec<Vec<BigInt>> = ker.iter().map(|v| vec![v[0].clone()]).collect();
        assert_eq!(hermite_normal_form(&proj), bi(&[&[4]]));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hermite_normal_form(&bi(&[&[2, 4], &[0, 3], &[2, 1]]));
        let b = hermite_normal_form(&bi(&[&[2, 1], &[0, 3]]));
        assert_eq!(a, b);
        assert_eq!(a, bi(&[&[2, 1], &[0, 3]]));
    }
}
