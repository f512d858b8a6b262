use rug::Integer;

use crate::error::{Error, Result};

/// Exact integral LLL reduction of linearly independent rows, Lovász constant `num/den`.
///
/// Works on Gram determinants `d_k` and scaled coefficients `lambda_{k,j} = d_j mu_{k,j}`,
/// so every intermediate quantity is an integer.
pub fn lll_reduce(rows: &mut [Vec<Integer>], num: u32, den: u32) -> Result<()> {
    let n = rows.len();
    if n < 2 {
        return Ok(());
    }
    let dot = |a: &[Integer], b: &[Integer]| -> Integer {
        a.iter().zip(b).fold(Integer::new(), |acc, (x, y)| acc + Integer::from(x * y))
    };
    // 1-based bookkeeping: d[0] = 1, lam[k][j] for j < k
    let mut d = vec![Integer::from(1); n + 1];
    let mut lam = vec![vec![Integer::new(); n + 1]; n + 1];
    let mut k = 2usize;
    let mut kmax = 1usize;
    d[1] = dot(&rows[0], &rows[0]);
    if d[1] == 0 {
        return Err(Error::Domain("LLL: zero row".into()));
    }

    let red = |rows: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &[Integer], k: usize, l: usize| {
        let twice = Integer::from(&lam[k][l] * 2u32).abs();
        if twice > d[l] {
            // nearest integer to lam / d
            let q = (Integer::from(&lam[k][l] * 2u32) + &d[l]).div_rem_floor(Integer::from(&d[l] * 2u32)).0;
            let (lo, hi) = rows.split_at_mut(k - 1);
            for (x, y) in hi[0].iter_mut().zip(&lo[l - 1]) {
                *x -= Integer::from(&q * y);
            }
            let t = Integer::from(&q * &d[l]);
            lam[k][l] -= t;
            for i in 1..l {
                let t = Integer::from(&q * &lam[l][i]);
                lam[k][i] -= t;
            }
        }
    };

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&rows[k - 1], &rows[j - 1]);
                for i in 1..j {
                    u = (Integer::from(&d[i] * &u) - Integer::from(&lam[k][i] * &lam[j][i])) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u == 0 {
                        return Err(Error::Domain("LLL: rows are linearly dependent".into()));
                    }
                    d[k] = u;
                }
            }
        }
        red(rows, &mut lam, &d, k, k - 1);
        let lhs = (Integer::from(&d[k] * &d[k - 2]) + Integer::from(lam[k][k - 1].square_ref())) * den;
        let rhs = Integer::from(d[k - 1].square_ref()) * num;
        if lhs < rhs {
            // swap rows k and k-1
            rows.swap(k - 1, k - 2);
            for j in 1..k - 1 {
                let (a, b) = (lam[k][j].clone(), lam[k - 1][j].clone());
                lam[k][j] = b;
                lam[k - 1][j] = a;
            }
            let l = lam[k][k - 1].clone();
            let b = (Integer::from(&d[k - 2] * &d[k]) + Integer::from(l.square_ref())) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (Integer::from(&d[k] * &lam[i][k - 1]) - Integer::from(&l * &t)) / &d[k - 1];
                lam[i][k - 1] = (Integer::from(&b * &t) + Integer::from(&l * &lam[i][k])) / &d[k];
            }
            d[k - 1] = b;
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                red(rows, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn int_rows(v: &[&[i64]]) -> Vec<Vec<Integer>> {
        v.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect()
    }

    /// Oracle: Gram-Schmidt over the rationals, checking size reduction and the Lovász condition.
    fn is_reduced(rows: &[Vec<Integer>], delta: Rational) -> bool {
        let n = rows.len();
        let q: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(Rational::from).collect()).collect();
        let dot = |a: &[Rational], b: &[Rational]| a.iter().zip(b).fold(Rational::new(), |s, (x, y)| s + Rational::from(x * y));
        let mut star: Vec<Vec<Rational>> = Vec::new();
        let mut mu = vec![vec![Rational::new(); n]; n];
        for i in 0..n {
            let mut v = q[i].clone();
            for j in 0..i {
                mu[i][j] = dot(&q[i], &star[j]) / dot(&star[j], &star[j]);
                for (x, y) in v.iter_mut().zip(&star[j]) {
                    *x -= Rational::from(&mu[i][j] * y);
                }
            }
            star.push(v);
        }
        for i in 0..n {
            for j in 0..i {
                if Rational::from(mu[i][j].abs_ref()) > (1, 2) {
                    return false;
                }
            }
        }
        (1..n).all(|k| {
            let lhs = dot(&star[k], &star[k]);
            let rhs = (delta.clone() - Rational::from(mu[k][k - 1].square_ref())) * dot(&star[k - 1], &star[k - 1]);
            lhs >= rhs
        })
    }

    #[test]
    fn reduces_small_example() {
        let mut rows = int_rows(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        lll_reduce(&mut rows, 99, 100).unwrap();
        assert!(is_reduced(&rows, Rational::from((99, 100))));
        // determinant is preserved up to sign: |det| = 3
        let m = &rows;
        let det = &m[0][0] * (Integer::from(&m[1][1] * &m[2][2]) - Integer::from(&m[1][2] * &m[2][1]))
            - &m[0][1] * (Integer::from(&m[1][0] * &m[2][2]) - Integer::from(&m[1][2] * &m[2][0]))
            + &m[0][2] * (Integer::from(&m[1][0] * &m[2][1]) - Integer::from(&m[1][1] * &m[2][0]));
        assert_eq!(det.abs(), 3);
    }

    #[test]
    fn finds_short_vector_in_knapsack_lattice() {
        // relation 3*a - 2*b = 0 hidden in [I | N x]
        let (a, b) = (200_000i64, 300_000i64);
        let mut rows = int_rows(&[&[1, 0, a], &[0, 1, b]]);
        lll_reduce(&mut rows, 99, 100).unwrap();
        assert!(is_reduced(&rows, Rational::from((99, 100))));
        let r = &rows[0];
        assert_eq!(r[2], 0);
        assert_eq!((r[0].clone().abs(), r[1].clone().abs()), (Integer::from(3), Integer::from(2)));
    }

    #[test]
    fn rejects_dependent_rows() {
        let mut rows = int_rows(&[&[1, 2], &[2, 4]]);
        assert!(lll_reduce(&mut rows, 99, 100).is_err());
    }
}
