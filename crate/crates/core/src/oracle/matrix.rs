use crate::error::{Error, Result};
use crate::field_tower::{Elem, Fq2};

/// A dense matrix over GF(q²), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn scalar(n: usize, a: Elem) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, a);
        }
        m
    }

    pub fn diagonal(d: &[Elem]) -> Self {
        let mut m = Self::zero(d.len(), d.len());
        for (i, &a) in d.iter().enumerate() {
            m.set(i, i, a);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Square matrix with small integer entries (reduced into GF(p)).
    pub fn from_ints(f: &Fq2, rows: &[&[i64]]) -> Self {
        let r: Vec<Vec<Elem>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| f.from_int(x)).collect())
            .collect();
        Self::from_rows(r).expect("rectangular literal")
    }

    /// The d×d matrix with ones on the anti-diagonal.
    pub fn anti_identity(d: usize) -> Self {
        let mut m = Self::zero(d, d);
        for i in 0..d {
            m.set(i, d - 1 - i, Elem::ONE);
        }
        m
    }

    /// Companion matrix of a monic polynomial (coefficients low first,
    /// leading 1 included).
    pub fn companion(f: &Fq2, coeffs: &[Elem]) -> Self {
        let d = coeffs.len() - 1;
        let mut m = Self::zero(d, d);
        for i in 1..d {
            m.set(i, i - 1, Elem::ONE);
        }
        for i in 0..d {
            m.set(i, d - 1, f.neg(coeffs[i]));
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[Matrix]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zero(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, a: Elem) {
        self.data[i * self.cols + j] = a;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, f: &Fq2, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &Fq2, v: &[Elem]) -> Vec<Elem> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, f: &Fq2, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, f: &Fq2, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &Fq2, s: Elem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Entrywise bar map.
    pub fn conj(&self, f: &Fq2) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.conj(a)).collect(),
        }
    }

    /// ᵀM̄
    pub fn adjoint(&self, f: &Fq2) -> Matrix {
        self.conj(f).transpose()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols)
                    .all(|j| self.get(i, j) == if i == j { Elem::ONE } else { Elem::ZERO })
            })
    }

    pub fn pow(&self, f: &Fq2, e: usize) -> Matrix {
        (0..e).fold(Matrix::identity(self.rows), |acc, _| acc.mul(f, self))
    }

    /// p(M) for a polynomial given by coefficients, low first.
    pub fn eval_poly(&self, f: &Fq2, coeffs: &[Elem]) -> Matrix {
        let n = self.rows;
        coeffs.iter().rev().fold(Matrix::zero(n, n), |acc, &c| {
            acc.mul(f, self).add(f, &Matrix::scalar(n, c))
        })
    }

    /// ᵀḡ J g = J
    pub fn preserves_form(&self, f: &Fq2, gram: &Matrix) -> bool {
        self.adjoint(f).mul(f, gram).mul(f, self) == *gram
    }

    /// Bits needed per entry for [`pack`](Self::pack).
    pub fn entry_bits(f: &Fq2) -> u32 {
        usize::BITS - (f.order() - 1).leading_zeros()
    }

    /// Packs a square matrix into a u128 key, or `None` when it does not fit.
    pub fn pack(&self, bits: u32) -> Option<u128> {
        if self.data.len() as u32 * bits > 128 {
            return None;
        }
        Some(
            self.data
                .iter()
                .fold(0u128, |acc, a| (acc << bits) | a.0 as u128),
        )
    }

    pub fn unpack(key: u128, n: usize, bits: u32) -> Matrix {
        let mask = (1u128 << bits) - 1;
        let mut data = vec![Elem::ZERO; n * n];
        let mut k = key;
        for slot in data.iter_mut().rev() {
            *slot = Elem((k & mask) as u16);
            k >>= bits;
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Nested entry arrays of GF(p) coordinates.
    pub fn to_wire(&self, f: &Fq2) -> Vec<Vec<Vec<u32>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&a| f.coords(a)).collect())
            .collect()
    }

    pub fn from_wire(f: &Fq2, w: &[Vec<Vec<u32>>]) -> Result<Matrix> {
        let rows = w
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| f.from_coords(c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// Rows of element indices, for compact display.
    pub fn index_rows(&self) -> Vec<Vec<u16>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|a| a.0).collect())
            .collect()
    }
}
