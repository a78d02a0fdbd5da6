use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Smith normal form `U · M · V = D` together with `U⁻¹` and `V⁻¹`.
///
/// `D` has its nonzero entries first on the diagonal, all positive, each
/// dividing the next. `U` and `V` are unimodular.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    // row_i += c * row_j
    fn row_add(&mut self, i: usize, j: usize, c: &BigInt) {
        self.a.add_row_multiple(i, j, c);
        self.u.add_row_multiple(i, j, c);
        self.u_inv.add_col_multiple(j, i, &-c);
    }

    // col_j += c * col_i
    fn col_add(&mut self, j: usize, i: usize, c: &BigInt) {
        self.a.add_col_multiple(j, i, c);
        self.v.add_col_multiple(j, i, c);
        self.v_inv.add_row_multiple(i, j, &-c);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero |a_ij| with i, j >= t; ties go to the first in
    /// row-major order.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let abs = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                    best = Some((i, j, abs));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero entry in row t or column t (at or beyond t).
    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.a.get(t, t).abs());
        let mut consider = |i: usize, j: usize, v: &BigInt| {
            if !v.is_zero() && (best.2.is_zero() || v.abs() < best.2) {
                best = (i, j, v.abs());
            }
        };
        for j in t + 1..self.a.cols() {
            consider(t, j, self.a.get(t, j));
        }
        for i in t + 1..self.a.rows() {
            consider(i, t, self.a.get(i, t));
        }
        (best.0, best.1)
    }

    fn reduce_at(&mut self, t: usize) {
        loop {
            let mut clean = true;
            let p = self.a.get(t, t).clone();
            for i in t + 1..self.a.rows() {
                let e = self.a.get(i, t).clone();
                if e.is_zero() {
                    continue;
                }
                let q = &e / &p;
                self.row_add(i, t, &-q);
                if !self.a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..self.a.cols() {
                let e = self.a.get(t, j).clone();
                if e.is_zero() {
                    continue;
                }
                let q = &e / &p;
                self.col_add(j, t, &-q);
                if !self.a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let (i, j) = self.min_in_cross(t);
                self.row_swap(t, i);
                self.col_swap(t, j);
                continue;
            }
            // Row and column t are clear; enforce divisibility of the rest.
            let offender =
                (t + 1..self.a.rows()).find(|&i| (t + 1..self.a.cols()).any(|j| !self.a.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => self.row_add(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if self.a.get(t, t).is_negative() {
            self.row_negate(t);
        }
    }
}

/// Smith normal form over ℤ. Total: every integer matrix has one.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = m.shape();
    let mut red = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = red.min_pivot(t) else { break };
        red.row_swap(t, pi);
        red.col_swap(t, pj);
        red.reduce_at(t);
        t += 1;
    }
    Snf {
        u: red.u,
        u_inv: red.u_inv,
        d: red.a,
        v: red.v,
        v_inv: red.v_inv,
        rank: t,
    }
}

impl Snf {
    /// Re-checks `U M V = D`, `U U⁻¹ = I`, `V V⁻¹ = I`, the shape of `D`
    /// and the divisibility chain against the original matrix.
    pub fn verify(&self, m: &IntMatrix) -> Result<bool> {
        let (r, c) = m.shape();
        if self.u.try_mul(m)?.try_mul(&self.v)? != self.d {
            return Ok(false);
        }
        if self.u.try_mul(&self.u_inv)? != IntMatrix::identity(r)
            || self.v.try_mul(&self.v_inv)? != IntMatrix::identity(c)
        {
            return Ok(false);
        }
        for i in 0..r {
            for j in 0..c {
                let e = self.d.get(i, j);
                let on_chain = i == j && i < self.rank;
                if on_chain != !e.is_zero() || (on_chain && e.is_negative()) {
                    return Ok(false);
                }
            }
        }
        let diag = self.diagonal();
        Ok(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()))
    }

    /// Nonzero diagonal entries, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Integer solution of `M x = b`, or `None` when the system has no
    /// solution over ℤ. Absence is witnessed in Smith coordinates: either
    /// some `(U b)_i` is not divisible by `d_i`, or a coordinate past the
    /// rank is nonzero.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.u.cols() {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.u.cols()
            )));
        }
        let ub = self.u.mul_vec(b)?;
        let mut y = vec![BigInt::zero(); self.v.rows()];
        for (i, val) in ub.iter().enumerate() {
            if i < self.rank {
                let (q, rem) = val.div_rem(self.d.get(i, i));
                if !rem.is_zero() {
                    return Ok(None);
                }
                y[i] = q;
            } else if !val.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(self.v.mul_vec(&y)?))
    }

    /// Columns of `V` past the rank: a ℤ-basis of the kernel.
    pub fn kernel_basis(&self) -> IntMatrix {
        self.v.col_range(self.rank, self.v.cols())
    }

    /// A ℤ-basis of the column lattice of `M`: `d_i · (U⁻¹)_{·,i}`.
    pub fn image_basis(&self) -> IntMatrix {
        let mut b = self.u_inv.col_range(0, self.rank);
        for j in 0..self.rank {
            let d = self.d.get(j, j).clone();
            for i in 0..b.rows() {
                let v = b.get(i, j) * &d;
                b.set(i, j, v);
            }
        }
        b
    }
}

/// ℤ-basis of `{x : M x = 0}`, one basis vector per column.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    smith_normal_form(m).kernel_basis()
}

/// Solve `M x = b` over ℤ.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for a {}x{} system",
            b.len(),
            m.rows(),
            m.cols()
        )));
    }
    smith_normal_form(m).solve(b)
}

/// ℤ-basis of the lattice spanned by the columns of `m`.
pub fn lattice_basis(m: &IntMatrix) -> IntMatrix {
    smith_normal_form(m).image_basis()
}
