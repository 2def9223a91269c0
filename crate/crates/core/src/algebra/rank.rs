//! Rank, greedy independent-subset selection and exact determinants.

use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use num::Integer;

use super::scalar::{GaussRat, Scalar, C64};

/// Relative singular-value threshold used when any entry is floating.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

fn all_exact(rows: &[Vec<Scalar>]) -> bool {
    rows.iter().all(|r| r.iter().all(Scalar::is_exact))
}

fn to_dmatrix(rows: &[Vec<Scalar>], width: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows.len(), width, |i, j| rows[i][j].to_c64())
}

/// Numerical rank: singular values below `tol · σ_max` count as zero.
pub fn svd_rank(m: &DMatrix<C64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 || !smax.is_finite() {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Scales every row to Gaussian integers.
fn clear_denominators(rows: &[Vec<Scalar>]) -> Vec<Vec<GaussRat>> {
    rows.iter()
        .map(|r| {
            let mut l = BigInt::one();
            for s in r {
                let g = s.as_exact().expect("exact row");
                l = l.lcm(g.re.denom()).lcm(g.im.denom());
            }
            let f = GaussRat::real(BigRational::from_integer(l));
            r.iter().map(|s| s.as_exact().unwrap().clone() * f.clone()).collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) elimination over Gaussian integers; returns the rank
/// and the last leading principal minor of the eliminated square block.
fn bareiss(mut a: Vec<Vec<GaussRat>>, width: usize) -> (usize, GaussRat) {
    let n = a.len();
    let mut prev = GaussRat::one();
    let mut rank = 0;
    let mut sign = GaussRat::one();
    for col in 0..width {
        if rank == n {
            break;
        }
        let Some(piv) = (rank..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        if piv != rank {
            a.swap(piv, rank);
            sign = -sign;
        }
        for i in rank + 1..n {
            for j in col + 1..width {
                let num = a[rank][col].clone() * a[i][j].clone() - a[i][col].clone() * a[rank][j].clone();
                a[i][j] = num.checked_div(&prev).expect("nonzero Bareiss pivot");
            }
            a[i][col] = GaussRat::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    (rank, sign * prev)
}

/// Matrix rank; exact fraction-free elimination when every entry is a Gaussian
/// rational, singular-value thresholding otherwise.
pub fn rank_exact(rows: &[Vec<Scalar>], tol: f64) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    assert!(rows.iter().all(|r| r.len() == width), "rows of unequal length");
    if all_exact(rows) {
        bareiss(clear_denominators(rows), width).0
    } else {
        svd_rank(&to_dmatrix(rows, width), tol)
    }
}

/// Exact determinant of an integer matrix.
pub fn det_integer(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let a: Vec<Vec<GaussRat>> = m.iter().map(|r| r.iter().map(|&v| GaussRat::from_int(v)).collect()).collect();
    let (rank, det) = bareiss(a, n);
    if rank < n {
        return BigInt::zero();
    }
    det.re.to_integer()
}

/// Result of greedy selection: independent row indices in order, and for each
/// dependent row its expansion over the independent rows selected before it.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub independent: Vec<usize>,
    /// `(row, coefficients)`; `coefficients[k]` multiplies `independent[k]`.
    pub dependent: Vec<(usize, Vec<Scalar>)>,
}

impl Selection {
    pub fn rank(&self) -> usize {
        self.independent.len()
    }
}

/// Walks the rows in order and keeps each one that is independent of those kept
/// so far.
pub fn select_independent(rows: &[Vec<Scalar>], tol: f64) -> Selection {
    if rows.is_empty() {
        return Selection { independent: Vec::new(), dependent: Vec::new() };
    }
    if all_exact(rows) {
        select_exact(rows)
    } else {
        select_float(rows, tol)
    }
}

fn select_exact(rows: &[Vec<Scalar>]) -> Selection {
    struct Basis {
        v: Vec<GaussRat>,
        expr: Vec<GaussRat>,
        pivot: usize,
    }
    let mut basis: Vec<Basis> = Vec::new();
    let mut sel = Selection { independent: Vec::new(), dependent: Vec::new() };
    for (idx, row) in rows.iter().enumerate() {
        let mut w: Vec<GaussRat> = row.iter().map(|s| s.as_exact().unwrap().clone()).collect();
        let mut coef = vec![GaussRat::zero(); sel.independent.len()];
        for b in &basis {
            if w[b.pivot].is_zero() {
                continue;
            }
            let f = w[b.pivot].checked_div(&b.v[b.pivot]).unwrap();
            for (x, y) in w.iter_mut().zip(&b.v) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            for (c, e) in coef.iter_mut().zip(&b.expr) {
                *c = c.clone() + f.clone() * e.clone();
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => sel.dependent.push((idx, coef.into_iter().map(Scalar::Exact).collect())),
            Some(pivot) => {
                let mut expr: Vec<GaussRat> = coef.into_iter().map(|c| -c).collect();
                expr.push(GaussRat::one());
                for b in basis.iter_mut() {
                    b.expr.push(GaussRat::zero());
                }
                basis.push(Basis { v: w, expr, pivot });
                sel.independent.push(idx);
            }
        }
    }
    sel
}

fn select_float(rows: &[Vec<Scalar>], tol: f64) -> Selection {
    let width = rows[0].len();
    let all = to_dmatrix(rows, width);
    let scale = all.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut sel = Selection { independent: Vec::new(), dependent: Vec::new() };
    for idx in 0..rows.len() {
        let r = all.row(idx).clone_owned();
        if r.iter().all(|c| c.norm() <= tol * scale) {
            sel.dependent.push((idx, vec![Scalar::zero(); sel.independent.len()]));
            continue;
        }
        let mut stacked = DMatrix::<C64>::zeros(sel.independent.len() + 1, width);
        for (k, &i) in sel.independent.iter().enumerate() {
            stacked.set_row(k, &all.row(i));
        }
        stacked.set_row(sel.independent.len(), &r);
        if svd_rank(&stacked, tol) > sel.independent.len() {
            sel.independent.push(idx);
            continue;
        }
        // least squares: chosenᵀ x = rᵀ
        let k = sel.independent.len();
        let chosen_t = stacked.rows(0, k).transpose();
        let rhs = r.transpose();
        let svd = chosen_t.svd(true, true);
        let x = svd.solve(&rhs, tol).expect("svd with vectors");
        sel.dependent.push((idx, x.iter().map(|&c| Scalar::Float(c)).collect()));
    }
    sel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(m: &[&[i64]]) -> Vec<Vec<Scalar>> {
        m.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect()
    }

    #[test]
    fn empty_rank_is_zero() {
        assert_eq!(rank_exact(&[], DEFAULT_RANK_TOL), 0);
    }

    #[test]
    fn exact_and_float_agree_on_small_cases() {
        let rows = int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank_exact(&rows, DEFAULT_RANK_TOL), 2);
        let floats: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|s| Scalar::Float(s.to_c64())).collect()).collect();
        assert_eq!(rank_exact(&floats, DEFAULT_RANK_TOL), 2);
    }

    #[test]
    fn integer_determinants() {
        assert_eq!(det_integer(&[vec![2, 1], vec![1, 3]]), BigInt::from(5));
        assert_eq!(det_integer(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(det_integer(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
        assert_eq!(det_integer(&[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]), BigInt::from(0));
    }

    #[test]
    fn selection_reconstructs_dependents() {
        let rows = int_rows(&[&[1, 0, 1], &[0, 1, 1], &[2, -3, -1], &[0, 0, 0], &[0, 0, 5]]);
        let sel = select_independent(&rows, DEFAULT_RANK_TOL);
        assert_eq!(sel.independent, vec![0, 1, 4]);
        for (idx, coef) in &sel.dependent {
            for col in 0..3 {
                let mut acc = Scalar::zero();
                for (c, &i) in coef.iter().zip(&sel.independent) {
                    acc = acc + c.clone() * rows[i][col].clone();
                }
                assert_eq!(acc, rows[*idx][col]);
            }
        }
    }

    #[test]
    fn float_selection_matches_exact() {
        let rows = int_rows(&[&[1, 0, 1], &[0, 1, 1], &[2, -3, -1], &[0, 0, 5]]);
        let floats: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|s| Scalar::Float(s.to_c64())).collect()).collect();
        let sel = select_independent(&floats, DEFAULT_RANK_TOL);
        assert_eq!(sel.independent, vec![0, 1, 3]);
        let (idx, coef) = &sel.dependent[0];
        assert_eq!(*idx, 2);
        assert!((coef[0].to_c64() - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((coef[1].to_c64() - C64::new(-3.0, 0.0)).norm() < 1e-12);
    }
}
