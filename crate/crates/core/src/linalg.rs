//! Small exact integer linear algebra: determinants, ranks, Hermite normal form, kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Matrix given as a list of columns; row count is the column length.
pub type Columns = [Vec<i64>];

fn to_rows(cols: &Columns) -> Vec<Vec<BigRational>> {
    let ell = cols.first().map_or(0, |c| c.len());
    (0..ell)
        .map(|i| cols.iter().map(|c| BigRational::from_integer(BigInt::from(c[i]))).collect())
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(cols: &Columns) -> usize {
    if cols.is_empty() {
        return 0;
    }
    rref(&mut to_rows(cols)).len()
}

pub fn det(cols: &Columns) -> BigInt {
    let n = cols.len();
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| cols.iter().map(|c| BigInt::from(c[i])).collect()).collect();
    // Bareiss fraction-free elimination
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

/// Exact solution x of `sum_j x_j cols_j = target`, if one exists and is unique.
pub fn solve(cols: &Columns, target: &[i64]) -> Option<Vec<BigRational>> {
    let k = cols.len();
    let mut aug: Vec<Vec<i64>> = cols.to_vec();
    aug.push(target.to_vec());
    let mut m = to_rows(&aug);
    let piv = rref(&mut m);
    if piv.len() != k || piv.contains(&k) {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

/// Inverse of a square matrix given by columns, returned as rows.
pub fn inverse(cols: &Columns) -> Option<Vec<Vec<BigRational>>> {
    let n = cols.len();
    let mut m = to_rows(cols);
    for (i, row) in m.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
    }
    let piv = rref(&mut m);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Column-style Hermite normal form: lower triangular H with positive diagonal and
/// H = S U for unimodular U. Returns H as rows.
pub fn hermite_lower(cols: &Columns) -> Option<Vec<Vec<i128>>> {
    let n = cols.len();
    // work on columns
    let mut c: Vec<Vec<i128>> = cols.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    for i in 0..n {
        // clear row i in columns i+1.. by gcd steps into column i
        for j in i + 1..n {
            while c[j][i] != 0 {
                if c[i][i] == 0 || c[j][i].abs() < c[i][i].abs() {
                    c.swap(i, j);
                    continue;
                }
                let q = c[j][i] / c[i][i];
                for r in 0..n {
                    c[j][r] -= q * c[i][r];
                }
            }
        }
        if c[i][i] == 0 {
            return None;
        }
        if c[i][i] < 0 {
            for r in 0..n {
                c[i][r] = -c[i][r];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            let q = Integer::div_floor(&c[j][i], &c[i][i]);
            for r in 0..n {
                c[j][r] -= q * c[i][r];
            }
        }
    }
    Some((0..n).map(|i| (0..n).map(|j| c[j][i]).collect()).collect())
}

/// Representatives of Z^n / S Z^n.
pub fn coset_representatives(cols: &Columns) -> Option<Vec<Vec<i64>>> {
    let h = hermite_lower(cols)?;
    let n = cols.len();
    let mut reps = vec![vec![]];
    for i in 0..n {
        let d = h[i][i] as i64;
        let mut next = Vec::with_capacity(reps.len() * d as usize);
        for r in &reps {
            for z in 0..d {
                let mut v = r.clone();
                v.push(z);
                next.push(v);
            }
        }
        reps = next;
    }
    Some(reps)
}

/// Basis of the lattice { x in Z^n : <x, v> = 0 }.
pub fn perp_basis(v: &[i64]) -> Vec<Vec<i64>> {
    let n = v.len();
    let mut u: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| i64::from(i == j)).collect()).collect();
    let mut w = v.to_vec();
    loop {
        let mut nz: Vec<usize> = (0..n).filter(|&i| w[i] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        nz.sort_by_key(|&i| w[i].abs());
        let p = nz[0];
        for &q in &nz[1..] {
            let f = w[q] / w[p];
            w[q] -= f * w[p];
            let up = u[p].clone();
            for (x, y) in u[q].iter_mut().zip(up) {
                *x -= f * y;
            }
        }
    }
    let p = (0..n).find(|&i| w[i] != 0).expect("zero vector has no perp basis");
    (0..n).filter(|&c| c != p).map(|c| u[c].clone()).collect()
}

/// Primitive integer vector on the same ray, with first nonzero entry positive.
/// Returns the vector and the signed content removed.
pub fn primitive(v: &[i64]) -> (Vec<i64>, i64) {
    let g = v.iter().fold(0i64, |a, &x| a.gcd(&x));
    let first = v.iter().copied().find(|&x| x != 0).unwrap_or(1);
    let g = if first < 0 { -g } else { g };
    (v.iter().map(|&x| x / g).collect(), g)
}

/// A nonzero integer vector spanning the kernel of a rank-deficient set of columns.
pub fn kernel_vector(cols: &Columns) -> Option<Vec<i64>> {
    let k = cols.len();
    let mut m = to_rows(cols);
    let piv = rref(&mut m);
    let free = (0..k).find(|c| !piv.contains(c))?;
    let mut x = vec![BigRational::zero(); k];
    x[free] = BigRational::one();
    for (r, &p) in piv.iter().enumerate() {
        x[p] = -m[r][free].clone();
    }
    let l = x.iter().fold(BigInt::one(), |a, q| a.lcm(q.denom()));
    Some(x.iter().map(|q| i64::try_from(q.numer() * (&l / q.denom())).unwrap()).collect())
}
