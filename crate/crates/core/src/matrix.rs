use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::PolyError;
use crate::poly::{Point, Poly, Rat};

/// A dense matrix of exact polynomials. Row/column operations carry the
/// unit-scaled elementary transforms used by the diagonalizer.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PolyMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.data[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn map<F: Fn(&Poly) -> Poly>(&self, f: F) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.data.iter()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = PolyMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    if !self.at(i, k).is_zero() && !other.at(k, j).is_zero() {
                        acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn substitute(&self, map: &BTreeMap<String, Poly>) -> PolyMatrix {
        self.map(|p| p.substitute(map))
    }

    pub fn translate(&self, shift: &Point) -> PolyMatrix {
        self.map(|p| p.translate(shift))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row_i <- scale*row_i - q*row_j (scale must be a local unit for the
    /// transform determinant to stay a unit).
    pub fn row_axpy(&mut self, i: usize, j: usize, scale: &Poly, q: &Poly) {
        assert_ne!(i, j);
        for c in 0..self.cols {
            let v = scale
                .mul(self.at(i, c))
                .sub(&q.mul(self.at(j, c)));
            self.set(i, c, v);
        }
    }

    /// col_j <- scale*col_j - q*col_i.
    pub fn col_axpy(&mut self, j: usize, i: usize, scale: &Poly, q: &Poly) {
        assert_ne!(i, j);
        for r in 0..self.rows {
            let v = scale
                .mul(self.at(r, j))
                .sub(&q.mul(self.at(r, i)));
            self.set(r, j, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, scale: &Poly) {
        for c in 0..self.cols {
            let v = scale.mul(self.at(i, c));
            self.set(i, c, v);
        }
    }

    /// Determinant by Laplace expansion (matrices here are small).
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        match self.rows {
            0 => Poly::one(),
            1 => self.at(0, 0).clone(),
            _ => {
                let mut acc = Poly::zero();
                for j in 0..self.cols {
                    let head = self.at(0, j);
                    if head.is_zero() {
                        continue;
                    }
                    let sub = self.submatrix(&(1..self.rows).collect::<Vec<_>>(), &{
                        (0..self.cols).filter(|&c| c != j).collect::<Vec<_>>()
                    });
                    let term = head.mul(&sub.det());
                    acc = if j % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let data = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.at(r, c).clone()))
            .collect();
        PolyMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// The k x k minor on the given row/column index sets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Poly {
        self.submatrix(rows, cols).det()
    }

    pub fn eval(&self, point: &Point) -> Result<Vec<Vec<Rat>>, PolyError> {
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for c in 0..self.cols {
                row.push(self.at(r, c).eval(point)?);
            }
            out.push(row);
        }
        Ok(out)
    }

    pub fn rank_at(&self, point: &Point) -> Result<usize, PolyError> {
        Ok(crate::chart::rational_rank(self.eval(point)?))
    }

    /// Adjugate: adj(M) * M = det(M) * I. Used to express section-branch
    /// forms polynomially.
    pub fn adjugate(&self) -> PolyMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return PolyMatrix::zero(0, 0);
        }
        if n == 1 {
            return PolyMatrix::from_rows(vec![vec![Poly::one()]]);
        }
        let mut out = PolyMatrix::zero(n, n);
        let all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
                let cof = self.minor(&rows, &cols);
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                out.set(i, j, cof.scale(&crate::poly::rat(sign)));
            }
        }
        out
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for PolyMatrix {
    /// Row-major rendering with entries in canonical text form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        Ok(())
    }
}

/// Solve A x = b exactly over the rationals, if a solution exists.
pub fn rat_solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let pr = (rank..rows).find(|&r| !m[r][c].is_zero());
        let Some(pr) = pr else { continue };
        m.swap(rank, pr);
        let inv = m[rank][c].clone();
        for k in 0..=cols {
            m[rank][k] = &m[rank][k] / &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                for k in 0..=cols {
                    let sub = &m[rank][k] * &factor;
                    m[r][k] = &m[r][k] - &sub;
                }
            }
        }
        pivots.push((rank, c));
        rank += 1;
    }
    // Inconsistent system?
    for r in rank..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for &(r, c) in &pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}
