//! Gaussian elimination over GF(q²). Pivots are always the first nonzero
//! entry scanning down the current column, so every result is reproducible.

use crate::error::{Error, Result};
use crate::field_tower::{Elem, Fq2};
use crate::upoly::Poly;

use super::matrix::Matrix;

/// Reduced row echelon form and the pivot columns.
pub fn rref(f: &Fq2, m: &Matrix) -> (Matrix, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let (x, y) = (a.get(p, j), a.get(r, j));
                a.set(p, j, y);
                a.set(r, j, x);
            }
        }
        let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            a.set(r, j, f.mul(a.get(r, j), inv));
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = f.sub(a.get(i, j), f.mul(factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(f: &Fq2, m: &Matrix) -> usize {
    rref(f, m).1.len()
}

pub fn nullity(f: &Fq2, m: &Matrix) -> usize {
    m.cols() - rank(f, m)
}

/// Basis of {x : m·x = 0}, one vector per free column in increasing order.
pub fn nullspace(f: &Fq2, m: &Matrix) -> Vec<Vec<Elem>> {
    let (red, pivots) = rref(f, m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Elem::ZERO; cols];
            v[free] = Elem::ONE;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(red.get(row, free));
            }
            v
        })
        .collect()
}

pub fn inverse(f: &Fq2, m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::Dimension);
    }
    let n = m.rows();
    let mut aug = Matrix::zero(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, n + i, Elem::ONE);
    }
    let (red, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    let mut out = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, red.get(i, n + j));
        }
    }
    Ok(out)
}

pub fn determinant(f: &Fq2, m: &Matrix) -> Result<Elem> {
    if !m.is_square() {
        return Err(Error::Dimension);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Elem::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
            return Ok(Elem::ZERO);
        };
        if p != c {
            for j in 0..n {
                let (x, y) = (a.get(p, j), a.get(c, j));
                a.set(p, j, y);
                a.set(c, j, x);
            }
            det = f.neg(det);
        }
        let pivot = a.get(c, c);
        det = f.mul(det, pivot);
        let inv = f.inv(pivot).expect("nonzero pivot");
        for i in c + 1..n {
            let factor = f.mul(a.get(i, c), inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..n {
                let v = f.sub(a.get(i, j), f.mul(factor, a.get(c, j)));
                a.set(i, j, v);
            }
        }
    }
    Ok(det)
}

/// Similarity transform to upper Hessenberg form.
pub fn hessenberg(f: &Fq2, m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut h = m.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
            continue;
        };
        if p != j + 1 {
            // swap rows and columns p, j+1
            for c in 0..n {
                let (x, y) = (h.get(p, c), h.get(j + 1, c));
                h.set(p, c, y);
                h.set(j + 1, c, x);
            }
            for r in 0..n {
                let (x, y) = (h.get(r, p), h.get(r, j + 1));
                h.set(r, p, y);
                h.set(r, j + 1, x);
            }
        }
        let inv = f.inv(h.get(j + 1, j)).expect("nonzero pivot");
        for i in j + 2..n {
            let u = f.mul(h.get(i, j), inv);
            if u.is_zero() {
                continue;
            }
            // row_i -= u row_{j+1}, then col_{j+1} += u col_i
            for c in 0..n {
                let v = f.sub(h.get(i, c), f.mul(u, h.get(j + 1, c)));
                h.set(i, c, v);
            }
            for r in 0..n {
                let v = f.add(h.get(r, j + 1), f.mul(u, h.get(r, i)));
                h.set(r, j + 1, v);
            }
        }
    }
    h
}

/// det(tI − m), via Hessenberg reduction and the standard recurrence.
pub fn char_poly(f: &Fq2, m: &Matrix) -> Poly {
    let n = m.rows();
    let h = hessenberg(f, m);
    let t = Poly::new(vec![Elem::ZERO, Elem::ONE]);
    let mut polys: Vec<Poly> = vec![Poly::one()];
    for k in 1..=n {
        let diag = Poly::new(vec![f.neg(h.get(k - 1, k - 1))]);
        let mut pk = t.add(f, &diag).mul(f, &polys[k - 1]);
        let mut sub_prod = Elem::ONE;
        for i in 1..k {
            sub_prod = f.mul(sub_prod, h.get(k - i, k - i - 1));
            let coef = f.mul(h.get(k - 1 - i, k - 1), sub_prod);
            if coef.is_zero() {
                continue;
            }
            let term = polys[k - 1 - i].scale(f, f.neg(coef));
            pk = pk.add(f, &term);
        }
        polys.push(pk);
    }
    polys.pop().expect("at least one polynomial")
}
