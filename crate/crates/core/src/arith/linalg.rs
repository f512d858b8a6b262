//! Exact linear algebra over Q and Z for the decision procedures.

use rug::{Integer, Rational};

/// Scales a rational row to a primitive integer row.
pub fn integer_row(row: &[Rational]) -> Vec<Integer> {
    let lcm = row.iter().fold(Integer::from(1), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<Integer> = row.iter().map(|q| Rational::from(q * &lcm).into_numer_denom().0).collect();
    let content = ints.iter().fold(Integer::new(), |acc, x| acc.gcd(x));
    if content <= 1 {
        ints
    } else {
        ints.into_iter().map(|x| x / &content).collect()
    }
}

/// Rank via fraction-free (Bareiss) elimination on integer-scaled rows.
pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Integer>> = rows.iter().map(|r| integer_row(r)).collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = Integer::from(1);
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = Integer::from(&m[rank][col] * &m[r][c]) - Integer::from(&m[r][col] * &m[rank][c]);
                m[r][c] = v.div_exact(&prev);
            }
            m[r][col] = Integer::new();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].clone().recip();
        for c in col..ncols {
            m[row][c] *= &inv;
        }
        for r in 0..nrows {
            if r != row && m[r][col] != 0 {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let d = Rational::from(&f * &m[row][c]);
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}` over Q; `a` is given by rows (equations).
pub fn nullspace_rational(a: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::new(); ncols];
            v[f] = Rational::from(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = Rational::from(-&m[r][f]);
            }
            v
        })
        .collect()
}

/// Solves a square system `A x = b`; `None` when singular.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Z-basis of the integer kernel `{x in Z^n : A x = 0}`.
///
/// Row-reduces `[A^T | I]` with unimodular integer operations; the identity
/// part of every row whose left block vanishes is a kernel vector.
pub fn integer_kernel(a: &[Vec<Integer>], ncols: usize) -> Vec<Vec<Integer>> {
    let neq = a.len();
    let mut m: Vec<Vec<Integer>> = (0..ncols)
        .map(|j| {
            let mut row: Vec<Integer> = a.iter().map(|eq| eq[j].clone()).collect();
            row.extend((0..ncols).map(|k| Integer::from((k == j) as i32)));
            row
        })
        .collect();
    let mut top = 0;
    for col in 0..neq {
        // Euclid on the column below `top` until one nonzero entry remains.
        loop {
            let nz: Vec<usize> = (top..ncols).filter(|&r| m[r][col] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&r) = nz.first() {
                    m.swap(top, r);
                    top += 1;
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| m[r][col].clone().abs()).unwrap();
            for &r in &nz {
                if r != p {
                    let q = <(Integer, Integer)>::from(m[r][col].div_rem_floor_ref(&m[p][col])).0;
                    for c in 0..neq + ncols {
                        let d = Integer::from(&q * &m[p][c]);
                        m[r][c] -= d;
                    }
                }
            }
        }
        if top == ncols {
            break;
        }
    }
    m.into_iter()
        .filter(|row| row[..neq].iter().all(|x| *x == 0))
        .map(|row| row[neq..].to_vec())
        .collect()
}

/// Lagrange-Gauss reduction of two integer vectors under the Euclidean norm.
pub fn gauss_reduce_pair(mut u: Vec<Integer>, mut v: Vec<Integer>) -> (Vec<Integer>, Vec<Integer>) {
    let dot = |a: &[Integer], b: &[Integer]| a.iter().zip(b).fold(Integer::new(), |acc, (x, y)| acc + Integer::from(x * y));
    loop {
        if dot(&u, &u) > dot(&v, &v) {
            std::mem::swap(&mut u, &mut v);
        }
        let uu = dot(&u, &u);
        let q = Rational::from((dot(&u, &v), uu)).round().into_numer_denom().0;
        if q == 0 {
            return (u, v);
        }
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi -= Integer::from(&q * ui);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn rank_and_nullspace() {
        let a = vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)], vec![r(0), r(1), r(1)]];
        assert_eq!(rank_rational(&a), 2);
        let ns = nullspace_rational(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: Rational = row.iter().zip(&ns[0]).map(|(x, y)| Rational::from(x * y)).sum();
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // 2x - 4y = 0 has integer kernel generated by (2, 1), not (4, 2)
        let a = vec![vec![Integer::from(2), Integer::from(-4)]];
        let k = integer_kernel(&a, 2);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(v == &vec![Integer::from(2), Integer::from(1)] || v == &vec![Integer::from(-2), Integer::from(-1)]);
    }

    #[test]
    fn solve_square() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let x = solve_rational(&a, &[r(3), r(5)]).unwrap();
        assert_eq!(x, vec![Rational::from((4, 5)), Rational::from((7, 5))]);
        assert!(solve_rational(&[vec![r(1), r(2)], vec![r(2), r(4)]], &[r(1), r(1)]).is_none());
    }
}
