//! Integer diagonalization `P A Q = S` by unimodular row and column moves.
//!
//! Only a diagonal form is produced; the divisibility chain of a true Smith
//! normal form is not enforced since callers only solve `S y = b` entrywise.
//! The working matrix is kept exact; `P` and `Q` are tracked modulo a caller
//! supplied modulus because every consumer works in `Z_L`.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Diagonal {
    /// Diagonal entries `s_0 .. s_{rank-1}`, all positive.
    pub diag: Vec<i64>,
    pub rows: usize,
    pub cols: usize,
    /// Row transform modulo `modulus` (rows x rows), if requested.
    pub p: Option<Vec<Vec<i64>>>,
    /// Column transform modulo `modulus` (cols x cols), if requested.
    pub q: Option<Vec<Vec<i64>>>,
    pub modulus: i64,
}

impl Diagonal {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

#[inline]
fn md(x: i128, m: i64) -> i64 {
    (x.rem_euclid(m as i128)) as i64
}

/// Diagonalize `a` (row-major, `rows x cols`).
pub fn diagonalize(a: &[Vec<i64>], cols: usize, modulus: i64, track_p: bool, track_q: bool) -> Result<Diagonal> {
    let rows = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut p = track_p.then(|| identity(rows));
    let mut q = track_q.then(|| identity(cols));
    let mut diag = Vec::new();

    let row_axpy = |m: &mut Vec<Vec<i64>>, p: &mut Option<Vec<Vec<i64>>>, dst: usize, src: usize, f: i64, from: usize| -> Result<()> {
        // row[dst] -= f * row[src]
        let (d, s) = if dst < src {
            let (lo, hi) = m.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = m.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for j in from..cols {
            if s[j] != 0 {
                d[j] = d[j]
                    .checked_sub(f.checked_mul(s[j]).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
        }
        if let Some(p) = p.as_mut() {
            let srow = p[src].clone();
            for (x, y) in p[dst].iter_mut().zip(srow) {
                *x = md(*x as i128 - f as i128 * y as i128, modulus);
            }
        }
        Ok(())
    };

    let rmax = rows.min(cols);
    for k in 0..rmax {
        // smallest nonzero pivot in the trailing block
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, &v) in row.iter().enumerate().skip(k) {
                if v != 0 && best.map_or(true, |(b, _, _)| v.abs() < b) {
                    best = Some((v.abs(), i, j));
                    if v.abs() == 1 {
                        break;
                    }
                }
            }
            if matches!(best, Some((1, _, _))) {
                break;
            }
        }
        let Some((_, pi, pj)) = best else { break };
        swap_rows(&mut m, &mut p, k, pi);
        swap_cols(&mut m, &mut q, k, pj);

        loop {
            let mut dirty = false;
            // clear column k below the pivot
            for i in k + 1..rows {
                if m[i][k] != 0 {
                    let f = m[i][k] / m[k][k];
                    row_axpy(&mut m, &mut p, i, k, f, k)?;
                    if m[i][k] != 0 {
                        dirty = true;
                    }
                }
            }
            // clear row k right of the pivot
            for j in k + 1..cols {
                if m[k][j] != 0 {
                    let f = m[k][j] / m[k][k];
                    for row in m.iter_mut() {
                        if row[k] != 0 {
                            row[j] = row[j]
                                .checked_sub(f.checked_mul(row[k]).ok_or(Error::Overflow)?)
                                .ok_or(Error::Overflow)?;
                        }
                    }
                    if let Some(q) = q.as_mut() {
                        for row in q.iter_mut() {
                            row[j] = md(row[j] as i128 - f as i128 * row[k] as i128, modulus);
                        }
                    }
                    if m[k][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
            // a remainder survived: move the smallest entry of row/column k to the pivot
            let mut best = (m[k][k].abs(), k, k);
            for i in k + 1..rows {
                let v = m[i][k].abs();
                if v != 0 && v < best.0 {
                    best = (v, i, k);
                }
            }
            for j in k + 1..cols {
                let v = m[k][j].abs();
                if v != 0 && v < best.0 {
                    best = (v, k, j);
                }
            }
            swap_rows(&mut m, &mut p, k, best.1);
            swap_cols(&mut m, &mut q, k, best.2);
        }
        if m[k][k] < 0 {
            for v in m[k].iter_mut() {
                *v = -*v;
            }
            if let Some(p) = p.as_mut() {
                for v in p[k].iter_mut() {
                    *v = md(-(*v as i128), modulus);
                }
            }
        }
        diag.push(m[k][k]);
    }
    Ok(Diagonal { diag, rows, cols, p, q, modulus })
}

fn swap_rows(m: &mut [Vec<i64>], p: &mut Option<Vec<Vec<i64>>>, a: usize, b: usize) {
    if a != b {
        m.swap(a, b);
        if let Some(p) = p.as_mut() {
            p.swap(a, b);
        }
    }
}

fn swap_cols(m: &mut [Vec<i64>], q: &mut Option<Vec<Vec<i64>>>, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        if let Some(q) = q.as_mut() {
            for row in q.iter_mut() {
                row.swap(a, b);
            }
        }
    }
}

/// `x * y` of a matrix modulo `m`.
pub fn mat_vec_mod(a: &[Vec<i64>], x: &[i64], m: i64) -> Vec<i64> {
    a.iter()
        .map(|row| {
            md(
                row.iter().zip(x).map(|(&r, &v)| r as i128 * v as i128).sum::<i128>(),
                m,
            )
        })
        .collect()
}

/// Inverse of `a` modulo `m`, assuming `gcd(a, m) = 1`.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1_i64, 0_i64);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = b[0].len();
        a.iter()
            .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn diagonal_form_reproduces_pq() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        // large modulus so P and Q are exact for this small example
        let big = 1_000_000_007;
        let d = diagonalize(&a, 3, big, true, true).unwrap();
        let p: Vec<Vec<i64>> = d.p.clone().unwrap().into_iter().map(|r| r.into_iter().map(|x| if x > big / 2 { x - big } else { x }).collect()).collect();
        let q: Vec<Vec<i64>> = d.q.clone().unwrap().into_iter().map(|r| r.into_iter().map(|x| if x > big / 2 { x - big } else { x }).collect()).collect();
        let s = mat_mul(&mat_mul(&p, &a), &q);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(s[i][j], 0);
                }
            }
        }
        let prod: i64 = d.diag.iter().product();
        // |det a| = 2 * 6 * 12 up to the unimodular transforms
        assert_eq!(prod.abs(), 144);
    }

    #[test]
    fn rank_deficient() {
        let a = vec![vec![1, 1], vec![2, 2], vec![0, 0]];
        let d = diagonalize(&a, 2, 97, false, false).unwrap();
        assert_eq!(d.rank(), 1);
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(inv_mod(1, 1), Some(0));
    }
}
