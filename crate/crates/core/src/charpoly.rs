//! Division-free characteristic polynomials over `Z` (Berkowitz).

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients `[1, d_1, ..., d_n]` of `det(X·I - M) = X^n + d_1 X^{n-1} + ... + d_n`.
pub fn charpoly(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "square matrix expected");
    match n {
        0 => vec![BigInt::one()],
        1 => vec![BigInt::one(), -&m[0][0]],
        _ => {
            let a = &m[0][0];
            let row: Vec<BigInt> = m[0][1..].to_vec();
            let minor: Vec<Vec<BigInt>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
            let mut col: Vec<BigInt> = m[1..].iter().map(|r| r[0].clone()).collect();
            // first column of the Toeplitz factor: 1, -a, -R C, -R A C, ..., -R A^{n-2} C
            let mut toeplitz = vec![BigInt::one(), -a];
            for step in 0..n - 1 {
                if step > 0 {
                    col = mat_vec(&minor, &col);
                }
                toeplitz.push(-dot(&row, &col));
            }
            let inner = charpoly(&minor);
            (0..=n)
                .map(|i| (0..n.min(i + 1)).fold(BigInt::zero(), |acc, j| acc + &toeplitz[i - j] * &inner[j]))
                .collect()
        }
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn mat_vec(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| dot(row, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_matrices() {
        assert_eq!(charpoly(&big(&[&[1, 2], &[3, 4]])), ints(&[1, -5, -2]));
        // companion matrix of x^3 - 2x^2 + 3x - 5
        assert_eq!(charpoly(&big(&[&[0, 0, 5], &[1, 0, -3], &[0, 1, 2]])), ints(&[1, -2, 3, -5]));
        assert_eq!(charpoly(&big(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]])), ints(&[1, -9, 26, -24]));
    }
}
