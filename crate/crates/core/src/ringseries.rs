//! Power series with coefficients in the integral group ring Z[C_n].
//!
//! Sums over group elements of expressions like 1/det(1 - x g) only ever involve
//! roots of unity zeta_n^k, so they are accumulated as integer vectors indexed by
//! k and reduced to Q(zeta_n) once at the end.

use std::collections::BTreeMap;

use crate::cyclotomic::{Cyclotomic, Field};
use crate::error::{Error, Result};
use crate::poly::TruncSeries;
use crate::rational::Rational;

/// Element of Z[C_n]: `v[k]` is the weight of zeta^k.
pub type RingElem = Vec<i64>;

pub fn ring_root(n: usize, k: i64, w: i64) -> RingElem {
    let mut v = vec![0; n];
    v[k.rem_euclid(n as i64) as usize] = w;
    v
}

pub fn ring_mul(a: &[i64], b: &[i64]) -> RingElem {
    let n = a.len();
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[(i + j) % n] += x * y;
            }
        }
    }
    out
}

pub fn ring_add_assign(a: &mut [i64], b: &[i64], w: i64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += w * y;
    }
}

/// Reduces to a field element and divides by `den`.
pub fn ring_to_cyclotomic(n: u32, v: &[i64], den: i64) -> Cyclotomic {
    Cyclotomic::from_ring(n, v, den)
}

/// Reduced power-basis integer coordinates.
pub fn ring_reduce(field: &Field, v: &[i64]) -> Vec<i64> {
    field.reduce_ring(v)
}

/// Series in x truncated at `bound`, coefficients in Z[C_n].
#[derive(Clone, Debug, PartialEq)]
pub struct RingSeries {
    n: usize,
    len: usize,
    data: Vec<i64>,
}

impl RingSeries {
    pub fn zero(n: u32, bound: u32) -> RingSeries {
        let n = n as usize;
        let len = bound as usize + 1;
        RingSeries { n, len, data: vec![0; n * len] }
    }

    pub fn one(n: u32, bound: u32) -> RingSeries {
        let mut s = Self::zero(n, bound);
        s.data[0] = 1;
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> u32 {
        (self.len - 1) as u32
    }

    pub fn coeff(&self, j: usize) -> &[i64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn coeff_mut(&mut self, j: usize) -> &mut [i64] {
        &mut self.data[j * self.n..(j + 1) * self.n]
    }

    /// Multiplies by 1/(1 - zeta^a x^k).
    pub fn mul_geometric(&mut self, a: i64, k: usize) {
        assert!(k > 0);
        let n = self.n;
        let a = a.rem_euclid(n as i64) as usize;
        for j in k..self.len {
            let (lo, hi) = self.data.split_at_mut(j * n);
            let prev = &lo[(j - k) * n..(j - k + 1) * n];
            let cur = &mut hi[..n];
            for (t, &v) in prev.iter().enumerate() {
                if v != 0 {
                    cur[(t + a) % n] += v;
                }
            }
        }
    }

    /// Multiplies by (1 + w zeta^a x^k).
    pub fn mul_binomial(&mut self, a: i64, k: usize, w: i64) {
        let n = self.n;
        let a = a.rem_euclid(n as i64) as usize;
        if k == 0 {
            let old = self.data.clone();
            for j in 0..self.len {
                for t in 0..n {
                    let v = old[j * n + t];
                    if v != 0 {
                        self.data[j * n + (t + a) % n] += w * v;
                    }
                }
            }
            return;
        }
        for j in (k..self.len).rev() {
            let (lo, hi) = self.data.split_at_mut(j * n);
            let prev = &lo[(j - k) * n..(j - k + 1) * n];
            let cur = &mut hi[..n];
            for (t, &v) in prev.iter().enumerate() {
                if v != 0 {
                    cur[(t + a) % n] += w * v;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &RingSeries, w: i64) {
        assert_eq!((self.n, self.len), (o.n, o.len));
        for (x, y) in self.data.iter_mut().zip(&o.data) {
            *x += w * y;
        }
    }

    /// `self += elem * o` for a ring element.
    pub fn add_ring_multiple(&mut self, elem: &[i64], o: &RingSeries) {
        let n = self.n;
        for (s, &w) in elem.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for j in 0..self.len {
                let src = &o.data[j * n..(j + 1) * n];
                let dst = &mut self.data[j * n..(j + 1) * n];
                for (t, &v) in src.iter().enumerate() {
                    if v != 0 {
                        dst[(t + s) % n] += w * v;
                    }
                }
            }
        }
    }

    /// Coefficients reduced to Q(zeta_n) power-basis integer coordinates.
    pub fn reduced(&self) -> Vec<Vec<i64>> {
        let field = Field::get(self.n as u32);
        (0..self.len).map(|j| field.reduce_ring(self.coeff(j))).collect()
    }

    /// Order of vanishing at x = 1 of the truncated polynomial, None when it is zero.
    pub fn mult_at_one(&self) -> Option<usize> {
        let mut p: Vec<Vec<i128>> = self
            .reduced()
            .into_iter()
            .map(|c| c.into_iter().map(i128::from).collect())
            .collect();
        while p.last().is_some_and(|c| c.iter().all(|&v| v == 0)) {
            p.pop();
        }
        if p.is_empty() {
            return None;
        }
        let mut k = 0;
        loop {
            // running sums: p = (1 - x) q with q_i = p_0 + ... + p_i
            let mut run = vec![0i128; p[0].len()];
            let mut q = Vec::with_capacity(p.len());
            for c in &p {
                for (r, v) in run.iter_mut().zip(c) {
                    *r += v;
                }
                q.push(run.clone());
            }
            if run.iter().any(|&v| v != 0) || p.len() == 1 {
                return Some(k);
            }
            q.pop();
            while q.last().is_some_and(|c| c.iter().all(|&v| v == 0)) {
                q.pop();
            }
            p = q;
            k += 1;
        }
    }

    /// Coefficients divided by `den`, which must all be rational.
    pub fn rational_coeffs(&self, den: i64) -> Result<Vec<Rational>> {
        self.reduced()
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                if c[1..].iter().any(|&v| v != 0) {
                    return Err(Error::Invalid(format!("coefficient of x^{j} is not rational")));
                }
                Ok(Rational::new(c[0], den))
            })
            .collect()
    }

    /// Coefficients divided by `den` as field elements.
    pub fn field_coeffs(&self, den: i64) -> Vec<Cyclotomic> {
        (0..self.len)
            .map(|j| Cyclotomic::from_ring(self.n as u32, self.coeff(j), den))
            .collect()
    }
}

/// Polynomial in (y, u) with Z[C_n] coefficients.
#[derive(Clone, Debug)]
pub struct RingPoly2 {
    n: usize,
    pub terms: BTreeMap<(u32, u32), RingElem>,
}

impl RingPoly2 {
    pub fn one(n: u32) -> RingPoly2 {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), ring_root(n as usize, 0, 1));
        RingPoly2 { n: n as usize, terms }
    }

    /// Multiplies by (1 + zeta^a u y^m).
    pub fn mul_factor(&mut self, a: i64, m: u32) {
        let n = self.n;
        let a = a.rem_euclid(n as i64) as usize;
        let mut out = self.terms.clone();
        for (&(y, u), v) in &self.terms {
            let e = out.entry((y + m, u + 1)).or_insert_with(|| vec![0; n]);
            for (t, &w) in v.iter().enumerate() {
                if w != 0 {
                    e[(t + a) % n] += w;
                }
            }
        }
        self.terms = out;
    }

    /// Multiplies by sum_j coeffs[j] u^j y^(j m).
    pub fn mul_poly(&mut self, coeffs: &[RingElem], m: u32) {
        let mut out: BTreeMap<(u32, u32), RingElem> = BTreeMap::new();
        for (&(y, u), v) in &self.terms {
            for (j, c) in coeffs.iter().enumerate() {
                if c.iter().all(|&w| w == 0) {
                    continue;
                }
                let e = out.entry((y + j as u32 * m, u + j as u32)).or_insert_with(|| vec![0; self.n]);
                ring_add_assign(e, &ring_mul(v, c), 1);
            }
        }
        out.retain(|_, v| v.iter().any(|&w| w != 0));
        self.terms = out;
    }

    pub fn scaled(&self, w: i64) -> RingPoly2 {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|x| x * w).collect()))
            .collect();
        RingPoly2 { n: self.n, terms }
    }
}

/// Accumulator for series in (x, y, u) with Z[C_n] coefficients.
#[derive(Clone, Debug)]
pub struct Bigraded {
    n: u32,
    bound: u32,
    pub parts: BTreeMap<(u32, u32), RingSeries>,
}

impl Bigraded {
    pub fn new(n: u32, bound: u32) -> Bigraded {
        Bigraded { n, bound, parts: BTreeMap::new() }
    }

    /// Adds `num(y,u) * series(x)`.
    pub fn add_product(&mut self, num: &RingPoly2, series: &RingSeries) {
        for (&key, elem) in &num.terms {
            if elem.iter().all(|&v| v == 0) {
                continue;
            }
            let part = self
                .parts
                .entry(key)
                .or_insert_with(|| RingSeries::zero(self.n, self.bound));
            part.add_ring_multiple(elem, series);
        }
    }

    /// Rational series in (x, y, u) after dividing by `den`.
    pub fn to_series(&self, den: i64, y_bound: u32, u_bound: u32) -> Result<TruncSeries<Rational>> {
        let vars = ["x", "y", "u"];
        let mut s = TruncSeries::zero(&vars, &[self.bound, y_bound, u_bound]);
        for (&(y, u), part) in &self.parts {
            for (j, c) in part.rational_coeffs(den)?.into_iter().enumerate() {
                s.add_term(vec![j as u32, y, u], c);
            }
        }
        Ok(s)
    }

    /// Series in (x, y, u) over Q(zeta_n) after dividing by `den`.
    pub fn to_field_series(&self, den: i64, y_bound: u32, u_bound: u32) -> TruncSeries<Cyclotomic> {
        let vars = ["x", "y", "u"];
        let mut s = TruncSeries::zero(&vars, &[self.bound, y_bound, u_bound]);
        for (&(y, u), part) in &self.parts {
            for (j, c) in part.field_coeffs(den).into_iter().enumerate() {
                s.add_term(vec![j as u32, y, u], c);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn molien_of_c2_by_hand() {
        // (1/2)(1/(1-x) + 1/(1+x)) = 1/(1-x^2)
        let mut acc = RingSeries::zero(2, 6);
        let mut a = RingSeries::one(2, 6);
        a.mul_geometric(0, 1);
        let mut b = RingSeries::one(2, 6);
        b.mul_geometric(1, 1);
        acc.add_scaled(&a, 1);
        acc.add_scaled(&b, 1);
        let c = acc.rational_coeffs(2).unwrap();
        let expect: Vec<i64> = vec![1, 0, 1, 0, 1, 0, 1];
        assert_eq!(c, expect.into_iter().map(Rational::from_int).collect::<Vec<_>>());
    }

    #[test]
    fn binomial_inverts_geometric() {
        let mut s = RingSeries::one(6, 10);
        s.mul_geometric(5, 2);
        s.mul_binomial(5, 2, -1);
        assert_eq!(s, RingSeries::one(6, 10));
    }

    #[test]
    fn nonrational_detected() {
        let mut s = RingSeries::one(3, 2);
        s.mul_geometric(1, 1);
        assert!(s.rational_coeffs(1).is_err());
    }
}
