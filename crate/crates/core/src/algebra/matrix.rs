use super::bits::LinAlgError;
use super::field::Field;
use alloc::vec;
use alloc::vec::Vec;

/// Dense row-major matrix over an arbitrary [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Self { field, rows, cols, data: vec![z; rows * cols] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_vec(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self, LinAlgError> {
        if data.len() != rows * cols {
            return Err(LinAlgError::Shape);
        }
        Ok(Self { field, rows, cols, data })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn matvec(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>, LinAlgError> {
        if x.len() != self.cols {
            return Err(LinAlgError::Shape);
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::Shape);
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Forward elimination with first-non-zero pivoting; returns the
    /// echelon rows, the transformed right-hand side and the pivot columns.
    fn eliminate(&self, rhs: Option<&[F::Elem]>, reduce: bool) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<usize>) {
        let f = &self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut b: Vec<F::Elem> = match rhs {
            Some(r) => r.to_vec(),
            None => vec![f.zero(); rows],
        };
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !f.is_zero(a[r * cols + c])) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    a.swap(p * cols + j, rank * cols + j);
                }
                b.swap(p, rank);
            }
            let inv = f.inv(a[rank * cols + c]).unwrap();
            for j in 0..cols {
                a[rank * cols + j] = f.mul(a[rank * cols + j], inv);
            }
            b[rank] = f.mul(b[rank], inv);
            let start = if reduce { 0 } else { rank + 1 };
            for r in start..rows {
                if r == rank {
                    continue;
                }
                let factor = a[r * cols + c];
                if f.is_zero(factor) {
                    continue;
                }
                for j in 0..cols {
                    a[r * cols + j] = f.sub(a[r * cols + j], f.mul(factor, a[rank * cols + j]));
                }
                b[r] = f.sub(b[r], f.mul(factor, b[rank]));
            }
            pivots.push(c);
            rank += 1;
        }
        (a, b, pivots)
    }

    pub fn rank(&self) -> usize {
        self.eliminate(None, false).2.len()
    }

    /// Some `x` with `self * x = y`, free variables set to zero.
    pub fn solve_preimage(&self, y: &[F::Elem]) -> Result<Vec<F::Elem>, LinAlgError> {
        if y.len() != self.rows {
            return Err(LinAlgError::Shape);
        }
        let f = &self.field;
        let (_, b, pivots) = self.eliminate(Some(y), true);
        if b[pivots.len()..].iter().any(|&v| !f.is_zero(v)) {
            return Err(LinAlgError::NoSolution);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = b[i];
        }
        Ok(x)
    }
}

/// Number of non-zero coordinates.
pub fn hamming_weight<E: Copy + Default + PartialEq>(x: &[E]) -> usize {
    let z = E::default();
    x.iter().filter(|&&v| v != z).count()
}
