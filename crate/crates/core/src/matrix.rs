//! Dense matrices over a fixed cyclotomic field.

use std::fmt;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl CycMatrix {
    pub fn zeros(n: u32, rows: usize, cols: usize) -> CycMatrix {
        CycMatrix { rows, cols, data: vec![Cyclotomic::zero(n); rows * cols] }
    }

    pub fn identity(n: u32, r: usize) -> CycMatrix {
        let mut m = Self::zeros(n, r, r);
        for i in 0..r {
            m.data[i * r + i] = Cyclotomic::one(n);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> CycMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data: Vec<Cyclotomic> = rows.into_iter().flatten().collect();
        if let Some(first) = data.first() {
            assert!(
                data.iter().all(|e| e.conductor() == first.conductor()),
                "matrix entries must share a conductor"
            );
        }
        CycMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.data[0].conductor()
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.data
    }

    pub fn embed(&self, m: u32) -> Result<CycMatrix> {
        let data = self.data.iter().map(|e| e.embed(m)).collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, o: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let n = self.conductor();
        let mut out = Self::zeros(n, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        assert_eq!(self.cols, v.len());
        let n = self.conductor();
        (0..self.rows)
            .map(|i| {
                let mut acc = Cyclotomic::zero(n);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        CycMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Entrywise Galois action zeta -> zeta^k.
    pub fn galois(&self, k: i64) -> Result<CycMatrix> {
        let data = self.data.iter().map(|e| e.galois(k)).collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, o: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// True when every row and column holds exactly one nonzero entry.
    pub fn is_monomial(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| self.row(i).iter().filter(|e| !e.is_zero()).count() == 1)
            && (0..self.cols).all(|j| (0..self.rows).filter(|&i| !self.get(i, j).is_zero()).count() == 1)
    }

    pub fn inverse(&self) -> Result<CycMatrix> {
        assert_eq!(self.rows, self.cols);
        let r = self.rows;
        let n = self.conductor();
        let mut a: Vec<Vec<Cyclotomic>> = (0..r).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<Cyclotomic>> = (0..r).map(|i| Self::identity(n, r).row(i).to_vec()).collect();
        for c in 0..r {
            let p = (c..r)
                .find(|&i| !a[i][c].is_zero())
                .ok_or_else(|| Error::Invalid("singular matrix".into()))?;
            a.swap(c, p);
            inv.swap(c, p);
            let pi = a[c][c].inv()?;
            for j in 0..r {
                a[c][j] = &a[c][j] * &pi;
                inv[c][j] = &inv[c][j] * &pi;
            }
            for i in 0..r {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..r {
                        let t = &f * &a[c][j];
                        a[i][j] = &a[i][j] - &t;
                        let t = &f * &inv[c][j];
                        inv[i][j] = &inv[i][j] - &t;
                    }
                }
            }
        }
        Ok(CycMatrix::from_rows(inv))
    }

    pub fn rank(&self) -> usize {
        row_reduce(self.rows_vec()).1.len()
    }

    fn rows_vec(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Basis of the null space, one vector per free column, each scaled so its first
    /// nonzero coordinate is 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Cyclotomic>> {
        let n = self.conductor();
        let (rref, pivots) = row_reduce(self.rows_vec());
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Cyclotomic::zero(n); self.cols];
                v[f] = Cyclotomic::one(n);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&rref[row][f];
                }
                normalize_leading(v)
            })
            .collect()
    }

    /// dim ker(1 - g).
    pub fn fixed_space_dim(&self) -> usize {
        let id = Self::identity(self.conductor(), self.rows);
        self.rows - id.sub(self).rank()
    }

    /// det(1 - x g) as a dense polynomial, lowest degree first.
    pub fn det_one_minus_xg_dense(&self) -> Vec<Cyclotomic> {
        assert_eq!(self.rows, self.cols);
        let r = self.rows;
        let n = self.conductor();
        let one = Cyclotomic::one(n);
        let mut a: Vec<Vec<Vec<Cyclotomic>>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let c0 = if i == j { one.clone() } else { Cyclotomic::zero(n) };
                        upoly_trim(vec![c0, -self.get(i, j)])
                    })
                    .collect()
            })
            .collect();
        // fraction-free elimination over Q(zeta)[x]
        let mut sign = false;
        let mut prev = vec![one.clone()];
        for k in 0..r {
            let Some(p) = (k..r).find(|&i| !upoly_is_zero(&a[i][k])) else {
                return vec![Cyclotomic::zero(n)];
            };
            if p != k {
                a.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..r {
                for j in k + 1..r {
                    let t = upoly_sub(&upoly_mul(&a[i][j], &a[k][k]), &upoly_mul(&a[i][k], &a[k][j]));
                    a[i][j] = upoly_divexact(&t, &prev);
                }
                a[i][k] = vec![Cyclotomic::zero(n)];
            }
            prev = a[k][k].clone();
        }
        let mut det = a[r - 1][r - 1].clone();
        if r == 0 {
            det = vec![one];
        }
        if sign {
            det = det.iter().map(|c| -c).collect();
        }
        let mut det = upoly_trim(det);
        det.resize(r + 1, Cyclotomic::zero(n));
        det
    }

    pub fn det_one_minus_xg(&self) -> MultiPoly<Cyclotomic> {
        let d = self.det_one_minus_xg_dense();
        let mut p = MultiPoly::zero(&["x"]);
        for (k, c) in d.into_iter().enumerate() {
            p.add_term(vec![k as u32], c);
        }
        p
    }

    /// Eigenvalue exponents k (eigenvalue zeta_n^k, n the conductor) with multiplicity,
    /// for a matrix whose order divides `order_hint`.
    pub fn eigen_exponents(&self, order_hint: u32) -> Result<Vec<(u32, usize)>> {
        let n = self.conductor();
        if !n.is_multiple_of(order_hint) {
            return Err(Error::Spectrum(format!("order {order_hint} does not divide conductor {n}")));
        }
        let charp = self.det_one_minus_xg_dense();
        let step = n / order_hint;
        let r = self.rows;
        let id = Self::identity(n, r);
        let mut out = Vec::new();
        let mut total = 0;
        for j in 0..order_hint {
            let k = j * step;
            // lambda is an eigenvalue iff det(1 - lambda^{-1} g) = 0
            let mut acc = Cyclotomic::zero(n);
            for c in charp.iter().rev() {
                acc = &acc.mul_root(-(k as i64)) + c;
            }
            if !acc.is_zero() {
                continue;
            }
            let lam = id.scale(&Cyclotomic::root_of_unity(n, k as i64));
            let mult = r - self.sub(&lam).rank();
            out.push((k, mult));
            total += mult;
        }
        if total != r {
            return Err(Error::Spectrum(format!(
                "eigenspace dimensions sum to {total}, expected {r}"
            )));
        }
        Ok(out)
    }

    pub fn eigenvalues(&self, order_hint: u32) -> Result<Vec<(Cyclotomic, usize)>> {
        let n = self.conductor();
        Ok(self
            .eigen_exponents(order_hint)?
            .into_iter()
            .map(|(k, m)| (Cyclotomic::root_of_unity(n, k as i64), m))
            .collect())
    }

    pub fn scale(&self, s: &Cyclotomic) -> CycMatrix {
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e * s).collect(),
        }
    }

    pub fn trace(&self) -> Cyclotomic {
        let mut t = Cyclotomic::zero(self.conductor());
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        t
    }

    /// `[[a, b], [c, d]]` with entries in field notation.
    pub fn render(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let es: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
                format!("[{}]", es.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.render(), self.conductor())
    }
}

/// Reduced row echelon form; pivots are chosen as the first nonzero entry in column order.
pub fn row_reduce(mut a: Vec<Vec<Cyclotomic>>) -> (Vec<Vec<Cyclotomic>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for j in c..cols {
                if !a[r][j].is_zero() {
                    a[r][j] = &a[r][j] * &inv;
                }
            }
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    if !a[r][j].is_zero() {
                        let t = &f * &a[r][j];
                        a[i][j] = &a[i][j] - &t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn normalize_leading(v: Vec<Cyclotomic>) -> Vec<Cyclotomic> {
    match v.iter().find(|e| !e.is_zero()) {
        Some(lead) if !lead.is_one() => {
            let inv = lead.inv().expect("nonzero");
            v.iter().map(|e| e * &inv).collect()
        }
        _ => v,
    }
}

fn upoly_is_zero(p: &[Cyclotomic]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn upoly_trim(mut p: Vec<Cyclotomic>) -> Vec<Cyclotomic> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn upoly_mul(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let n = a[0].conductor();
    let mut out = vec![Cyclotomic::zero(n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    upoly_trim(out)
}

fn upoly_sub(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let n = a[0].conductor();
    let len = a.len().max(b.len());
    let z = Cyclotomic::zero(n);
    upoly_trim((0..len).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn upoly_divexact(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let n = a[0].conductor();
    let b = upoly_trim(b.to_vec());
    let db = b.len() - 1;
    let mut r = upoly_trim(a.to_vec());
    if r.len() <= db {
        debug_assert!(upoly_is_zero(&r));
        return vec![Cyclotomic::zero(n)];
    }
    let lead = b[db].inv().expect("nonzero divisor");
    let mut q = vec![Cyclotomic::zero(n); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead;
        if !c.is_zero() {
            for j in 0..=db {
                r[i + j] = &r[i + j] - &(&c * &b[j]);
            }
        }
        q[i] = c;
    }
    debug_assert!(upoly_is_zero(&r));
    upoly_trim(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u32, v: i64) -> Cyclotomic {
        Cyclotomic::from_int(n, v)
    }

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    fn swap() -> CycMatrix {
        CycMatrix::from_rows(vec![vec![c(1, 0), c(1, 1)], vec![c(1, 1), c(1, 0)]])
    }

    #[test]
    fn fixed_dims() {
        assert_eq!(CycMatrix::identity(1, 4).fixed_space_dim(), 4);
        assert_eq!(swap().fixed_space_dim(), 1);
        let refl = CycMatrix::from_rows(vec![
            vec![z(3, 1), c(3, 0), c(3, 0)],
            vec![c(3, 0), c(3, 1), c(3, 0)],
            vec![c(3, 0), c(3, 0), c(3, 1)],
        ]);
        assert_eq!(refl.fixed_space_dim(), 2);
    }

    #[test]
    fn char_polys() {
        let id = CycMatrix::identity(1, 2).det_one_minus_xg();
        assert_eq!(id.render(), "x^2 - 2*x + 1");
        assert_eq!(swap().det_one_minus_xg().render(), "-x^2 + 1");
        let d = CycMatrix::from_rows(vec![vec![z(3, 1), c(3, 0)], vec![c(3, 0), z(3, 2)]]);
        assert_eq!(d.det_one_minus_xg().render(), "x^2 + x + 1");
    }

    #[test]
    fn eigen() {
        assert_eq!(CycMatrix::identity(1, 3).eigen_exponents(1).unwrap(), vec![(0, 3)]);
        let s = swap().embed(2).unwrap();
        assert_eq!(s.eigen_exponents(2).unwrap(), vec![(0, 1), (1, 1)]);
        let d = CycMatrix::from_rows(vec![vec![z(3, 1), c(3, 0)], vec![c(3, 0), z(3, 2)]]);
        assert_eq!(d.eigen_exponents(3).unwrap(), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn kernels_and_inverse() {
        assert_eq!(CycMatrix::zeros(1, 2, 2).kernel_basis().len(), 2);
        assert!(CycMatrix::identity(1, 2).kernel_basis().is_empty());
        let ones = CycMatrix::from_rows(vec![vec![c(1, 1), c(1, 1)], vec![c(1, 1), c(1, 1)]]);
        assert_eq!(ones.kernel_basis(), vec![vec![c(1, 1), c(1, -1)]]);
        let m = CycMatrix::from_rows(vec![vec![z(5, 1), c(5, 2)], vec![c(5, 1), z(5, 3)]]);
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
    }
}
