//! Sparse multivariate polynomials, truncated power series and univariate
//! rational functions over exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exact scalar usable as a polynomial coefficient.
pub trait Coeff: Clone + PartialEq + fmt::Display + Send + Sync {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    /// An integer living in the same ambient field as `self`.
    fn int_like(&self, v: i64) -> Self;
    /// Rendering used inside polynomial strings; negative rationals report their sign.
    fn split_sign(&self) -> (bool, String);
}

impl Coeff for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        *self == Rational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn int_like(&self, v: i64) -> Self {
        Rational::from_int(v)
    }
    fn split_sign(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

impl Coeff for Cyclotomic {
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Cyclotomic::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        Cyclotomic::inv(self).ok()
    }
    fn int_like(&self, v: i64) -> Self {
        Cyclotomic::from_int(self.conductor(), v)
    }
    fn split_sign(&self) -> (bool, String) {
        match self.as_rational() {
            Some(r) => (r.is_negative(), r.abs().to_string()),
            None => (false, format!("({})", self.canonical())),
        }
    }
}

/// Term order used for rendering: total degree descending, then exponents compared
/// from the last variable backwards, larger first.
pub fn render_order(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            match y.cmp(x) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

fn render_terms<'a, C: Coeff + 'a>(
    vars: &[String],
    terms: impl Iterator<Item = (&'a Vec<u32>, &'a C)>,
) -> String {
    let mut list: Vec<_> = terms.filter(|(_, c)| !c.is_zero()).collect();
    if list.is_empty() {
        return "0".to_string();
    }
    list.sort_by(|a, b| render_order(a.0, b.0));
    let mut out = String::new();
    for (i, (exps, c)) in list.iter().enumerate() {
        let (neg, mag) = c.split_sign();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = vars
            .iter()
            .zip(exps.iter())
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if mono.is_empty() {
            out.push_str(&mag);
        } else {
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&mono.join("*"));
        }
    }
    out
}

/// Sparse polynomial in named variables.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<C: Coeff = Rational> {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(vars: &[&str], exps: Vec<u32>, c: C) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: C) {
        assert_eq!(exps.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&C> {
        self.terms.get(exps)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.vars, o.vars, "variable mismatch");
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut r = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.mul(s));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.vars, o.vars, "variable mismatch");
        let mut r = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.mul(c2));
            }
        }
        r
    }

    /// Sets variable `var` to 1.
    pub fn at_one(&self, var: &str) -> Self {
        let idx = self.vars.iter().position(|v| v == var).expect("unknown variable");
        let mut r = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[idx] = 0;
            r.add_term(e, c.clone());
        }
        r
    }

    /// Deterministic text form.
    pub fn render(&self) -> String {
        render_terms(&self.vars, self.terms.iter())
    }

    /// Map from comma-joined exponent tuples to coefficient strings, e.g. `{"2,1": "3"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (e, c) in &self.terms {
            let key = e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            m.insert(key, serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(m)
    }

    /// First term (in render order) where the two polynomials differ.
    pub fn first_difference(&self, o: &Self) -> Option<String> {
        let d = self.sub(o);
        let mut keys: Vec<_> = d.terms.keys().collect();
        keys.sort_by(|a, b| render_order(a, b));
        keys.first().map(|k| {
            let single: BTreeMap<Vec<u32>, C> = [((*k).clone(), d.terms[*k].clone())].into();
            render_terms(&self.vars, single.iter())
        })
    }
}

impl MultiPoly<Rational> {
    pub fn constant(vars: &[&str], c: i64) -> Self {
        let n = vars.len();
        Self::monomial(vars, vec![0; n], Rational::from_int(c))
    }

    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut e = vec![0; vars.len()];
        e[vars.iter().position(|v| *v == name).expect("unknown variable")] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn product<'a>(vars: &[&str], factors: impl IntoIterator<Item = &'a Self>) -> Self {
        let mut acc = Self::constant(vars, 1);
        for f in factors {
            acc = acc.mul(f);
        }
        acc
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Power series truncated at a per-variable degree bound.
#[derive(Clone, PartialEq)]
pub struct TruncSeries<C: Coeff = Rational> {
    vars: Vec<String>,
    bounds: Vec<u32>,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn zero(vars: &[&str], bounds: &[u32]) -> Self {
        assert_eq!(vars.len(), bounds.len());
        TruncSeries {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            bounds: bounds.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &MultiPoly<C>, bounds: &[u32]) -> Self {
        let mut s = TruncSeries {
            vars: p.vars.clone(),
            bounds: bounds.to_vec(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &p.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    fn within(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.bounds).all(|(a, b)| a <= b)
    }

    /// Adds a term, silently dropping it when beyond the bounds.
    pub fn add_term(&mut self, exps: Vec<u32>, c: C) {
        if c.is_zero() || !self.within(&exps) {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&C> {
        self.terms.get(exps)
    }

    fn meet(&self, o: &Self) -> Vec<u32> {
        assert_eq!(self.vars, o.vars, "variable mismatch");
        self.bounds.iter().zip(&o.bounds).map(|(a, b)| *a.min(b)).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let bounds = self.meet(o);
        let mut r = TruncSeries { vars: self.vars.clone(), bounds, terms: BTreeMap::new() };
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            vars: self.vars.clone(),
            bounds: self.bounds.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut r = TruncSeries { vars: self.vars.clone(), bounds: self.bounds.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.mul(s));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let bounds = self.meet(o);
        let mut r = TruncSeries { vars: self.vars.clone(), bounds, terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            if !r.within(e1) {
                continue;
            }
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if r.within(&e) {
                    r.add_term(e, c1.mul(c2));
                }
            }
        }
        r
    }

    /// Multiplicative inverse up to `bounds` (clipped to the series' own bounds).
    pub fn invert(&self, bounds: &[u32]) -> Result<Self> {
        let bounds: Vec<u32> = bounds.iter().zip(&self.bounds).map(|(a, b)| *a.min(b)).collect();
        let zero = vec![0u32; self.vars.len()];
        let a0 = self
            .terms
            .get(&zero)
            .and_then(|c| c.inv())
            .ok_or_else(|| Error::Invalid("series has no invertible constant term".into()))?;
        let mut r = TruncSeries { vars: self.vars.clone(), bounds: bounds.clone(), terms: BTreeMap::new() };
        // walk the box lexicographically; every proper divisor of e precedes e
        let mut e = zero.clone();
        loop {
            let mut acc = if e == zero { a0.int_like(1) } else { a0.int_like(0) };
            for (m, c) in &self.terms {
                if *m == zero || m.iter().zip(&e).any(|(a, b)| a > b) {
                    continue;
                }
                let rest: Vec<u32> = e.iter().zip(m).map(|(a, b)| a - b).collect();
                if let Some(v) = r.terms.get(&rest) {
                    acc = acc.sub(&c.mul(v));
                }
            }
            let v = acc.mul(&a0);
            if !v.is_zero() {
                r.terms.insert(e.clone(), v);
            }
            // next tuple
            let mut i = e.len();
            loop {
                if i == 0 {
                    return Ok(r);
                }
                i -= 1;
                if e[i] < bounds[i] {
                    e[i] += 1;
                    for x in e.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                    break;
                }
            }
        }
    }

    /// The series restricted to terms whose exponent in `var` equals `k`, with that variable zeroed.
    pub fn slice(&self, var: &str, k: u32) -> Self {
        let idx = self.vars.iter().position(|v| v == var).expect("unknown variable");
        let mut r = TruncSeries { vars: self.vars.clone(), bounds: self.bounds.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[idx] == k {
                let mut e = e.clone();
                e[idx] = 0;
                r.terms.insert(e, c.clone());
            }
        }
        r
    }

    pub fn to_poly(&self) -> MultiPoly<C> {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.clone() }
    }

    pub fn render(&self) -> String {
        let body = render_terms(&self.vars, self.terms.iter());
        let b: Vec<String> = self.vars.iter().zip(&self.bounds).map(|(v, b)| format!("{v}^{}", b + 1)).collect();
        format!("{body} + O({})", b.join(", "))
    }

    /// Compares two series on the common box.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let d = self.sub_on_box(o);
        d.terms.is_empty()
    }

    fn sub_on_box(&self, o: &Self) -> Self {
        let bounds = self.meet(o);
        let mut r = TruncSeries { vars: self.vars.clone(), bounds, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.clone());
        }
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.neg());
        }
        r
    }

    /// First differing term on the common box, rendered.
    pub fn first_difference(&self, o: &Self) -> Option<String> {
        let d = self.sub_on_box(o);
        d.to_poly().first_difference(&MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() })
    }
}

impl TruncSeries<Rational> {
    /// 1/(1 - x^d) in the given variable.
    pub fn geometric(vars: &[&str], bounds: &[u32], var: &str, d: u32) -> Self {
        assert!(d > 0);
        let idx = vars.iter().position(|v| *v == var).expect("unknown variable");
        let mut s = Self::zero(vars, bounds);
        let mut k = 0;
        while k <= bounds[idx] {
            let mut e = vec![0; vars.len()];
            e[idx] = k;
            s.add_term(e, Rational::one());
            k += d;
        }
        s
    }

    pub fn one(vars: &[&str], bounds: &[u32]) -> Self {
        let mut s = Self::zero(vars, bounds);
        s.add_term(vec![0; vars.len()], Rational::one());
        s
    }
}

impl<C: Coeff> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Dense univariate rational function numerator/denominator, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct UniRational<C: Coeff = Rational> {
    pub num: Vec<C>,
    pub den: Vec<C>,
}

fn trim<C: Coeff>(p: &mut Vec<C>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
}

/// Multiplicity of x = 1 as a root, by repeated synthetic division by (1 - x).
fn mult_at_one<C: Coeff>(p: &[C]) -> usize {
    let mut p = p.to_vec();
    trim(&mut p);
    if p.iter().all(|c| c.is_zero()) {
        return usize::MAX;
    }
    let mut k = 0;
    loop {
        let zero = p[0].int_like(0);
        let total = p.iter().fold(zero, |a, c| a.add(c));
        if !total.is_zero() || p.len() == 1 {
            return k;
        }
        // p = (1 - x) q  with  q_i = p_0 + ... + p_i
        let mut q = Vec::with_capacity(p.len() - 1);
        let mut run = p[0].int_like(0);
        for c in &p[..p.len() - 1] {
            run = run.add(c);
            q.push(run.clone());
        }
        p = q;
        trim(&mut p);
        k += 1;
    }
}

impl<C: Coeff> UniRational<C> {
    pub fn new(mut num: Vec<C>, mut den: Vec<C>) -> Result<Self> {
        trim(&mut num);
        trim(&mut den);
        if den.iter().all(|c| c.is_zero()) {
            return Err(Error::DivisionByZero);
        }
        if let Some(inv) = den[0].inv() {
            if !den[0].is_one() {
                num = num.iter().map(|c| c.mul(&inv)).collect();
                den = den.iter().map(|c| c.mul(&inv)).collect();
            }
        }
        Ok(UniRational { num, den })
    }

    /// Order of the pole at x = 1 (negative for a zero).
    pub fn pole_order_at_one(&self) -> i64 {
        let n = mult_at_one(&self.num);
        if n == usize::MAX {
            return i64::MIN;
        }
        mult_at_one(&self.den) as i64 - n as i64
    }

    /// Taylor expansion at 0 up to x^bound; needs an invertible constant term in the denominator.
    pub fn expand(&self, bound: u32) -> Result<Vec<C>> {
        let inv = self.den[0]
            .inv()
            .ok_or_else(|| Error::Invalid("denominator vanishes at 0".into()))?;
        let zero = inv.int_like(0);
        let mut out: Vec<C> = Vec::with_capacity(bound as usize + 1);
        for k in 0..=bound as usize {
            let mut acc = self.num.get(k).cloned().unwrap_or_else(|| zero.clone());
            for j in 1..self.den.len().min(k + 1) {
                acc = acc.sub(&self.den[j].mul(&out[k - j]));
            }
            out.push(acc.mul(&inv));
        }
        Ok(out)
    }
}

/// Coefficients of a univariate series in `x` as a dense vector.
pub fn univariate_coeffs(s: &TruncSeries<Rational>) -> Vec<Rational> {
    assert_eq!(s.vars.len(), 1);
    let mut v = vec![Rational::zero(); s.bounds[0] as usize + 1];
    for (e, c) in &s.terms {
        v[e[0] as usize] = c.clone();
    }
    v
}

/// Recovers d_1 <= ... <= d_r from a series equal to prod 1/(1 - x^{d_i}) up to `degree_bound`.
pub fn extract_factor_degrees(
    m: &TruncSeries<Rational>,
    group_order: u64,
    degree_bound: u32,
) -> Result<Vec<u32>> {
    let bound = degree_bound.min(m.bounds[0]) as usize;
    let mut run = univariate_coeffs(m);
    run.truncate(bound + 1);
    if run[0] != Rational::one() {
        return Err(Error::NotPolynomial("constant term is not 1".into()));
    }
    let mut degs = Vec::new();
    loop {
        let j = (1..=bound).find(|&j| !Zero::is_zero(&run[j]));
        let Some(j) = j else { break };
        if run[j].is_negative() || !run[j].is_integer() {
            return Err(Error::NotPolynomial(format!(
                "coefficient {} at degree {j} after removing {:?}",
                run[j], degs
            )));
        }
        degs.push(j as u32);
        // multiply by (1 - x^j)
        for k in (j..=bound).rev() {
            let t = run[k - j].clone();
            run[k] -= &t;
        }
    }
    let prod: u64 = degs.iter().map(|&d| d as u64).product();
    if prod != group_order {
        return Err(Error::NotPolynomial(format!(
            "degrees {degs:?} multiply to {prod}, not {group_order}"
        )));
    }
    Ok(degs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn example_render() {
        let v = ["q", "t"];
        let qt = MultiPoly::monomial(&v, vec![1, 1], r(1));
        let t = MultiPoly::var(&v, "t");
        let a = qt.add(&t);
        let b = a.add(&MultiPoly::constant(&v, 2));
        assert_eq!(a.mul(&b).render(), "q^2*t^2 + 2*q*t^2 + t^2 + 2*q*t + 2*t");
        assert_eq!(MultiPoly::<Rational>::zero(&v).render(), "0");
        let neg = MultiPoly::constant(&v, 1).sub(&t.scale(&Rational::new(3, 2)));
        assert_eq!(neg.render(), "-3/2*t + 1");
    }

    #[test]
    fn series_products() {
        let v = ["x"];
        let one_plus = TruncSeries::from_poly(&MultiPoly::constant(&v, 1).add(&MultiPoly::var(&v, "x")), &[5]);
        let one_minus = TruncSeries::from_poly(&MultiPoly::constant(&v, 1).sub(&MultiPoly::var(&v, "x")), &[5]);
        let p = one_plus.mul(&one_minus);
        let expect = MultiPoly::constant(&v, 1).sub(&MultiPoly::monomial(&v, vec![2], r(1)));
        assert_eq!(p.to_poly(), expect);
        let geo = TruncSeries::geometric(&v, &[9], "x", 1);
        let one_minus9 = TruncSeries::from_poly(&one_minus.to_poly(), &[9]);
        assert_eq!(geo.mul(&one_minus9).to_poly(), MultiPoly::constant(&v, 1));
        assert_eq!(one_minus9.invert(&[9]).unwrap(), geo);
    }

    #[test]
    fn invert_two_variables() {
        let v = ["x", "u"];
        let mut a = TruncSeries::zero(&v, &[6, 3]);
        a.add_term(vec![0, 0], r(2));
        a.add_term(vec![1, 0], r(-1));
        a.add_term(vec![2, 1], r(5));
        let b = a.invert(&[6, 3]).unwrap();
        assert_eq!(a.mul(&b).to_poly(), MultiPoly::monomial(&v, vec![0, 0], r(1)));
        assert_eq!(b.invert(&[6, 3]).unwrap(), a);
    }

    #[test]
    fn pole_orders() {
        let one = r(1);
        let u = UniRational::new(vec![one.clone()], vec![r(1), r(-2), r(1)]).unwrap();
        assert_eq!(u.pole_order_at_one(), 2);
        let c = UniRational::new(vec![r(1), r(-1)], vec![r(1), r(0), r(-1)]).unwrap();
        assert_eq!(c.pole_order_at_one(), 0);
    }

    #[test]
    fn degree_extraction() {
        let v = ["x"];
        let mut s = TruncSeries::one(&v, &[12]);
        for d in [2, 4] {
            s = s.mul(&TruncSeries::geometric(&v, &[12], "x", d));
        }
        assert_eq!(extract_factor_degrees(&s, 8, 12).unwrap(), vec![2, 4]);
        assert!(extract_factor_degrees(&s, 16, 12).is_err());
        let triv = TruncSeries::geometric(&v, &[4], "x", 1);
        assert_eq!(extract_factor_degrees(&triv, 1, 4).unwrap(), vec![1]);
    }
}
