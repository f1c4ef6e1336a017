//! Elements of the cyclotomic field Q(zeta_n) in the power basis modulo Phi_n.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Per-conductor tables shared by all elements of one field.
#[derive(Debug)]
pub struct Field {
    pub n: u32,
    pub phi: usize,
    /// Coefficients of the monic polynomial Phi_n, lowest degree first.
    pub cyclo: Vec<i64>,
    /// `pow[k]` is zeta_n^k reduced to the power basis, for 0 <= k < n.
    pub pow: Vec<Vec<i64>>,
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn cyclotomic_poly(n: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let pd = cyclotomic_poly(d, cache);
            p = poly_divexact(&p, &pd);
        }
    }
    cache.insert(n, p.clone());
    p
}

impl Field {
    fn build(n: u32) -> Field {
        let mut cache = HashMap::new();
        let cyclo = cyclotomic_poly(n, &mut cache);
        let phi = cyclo.len() - 1;
        let mut pow = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            pow.push(cur.clone());
            // multiply by zeta and reduce
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * cyclo[i];
                }
            }
        }
        Field { n, phi, cyclo, pow }
    }

    /// Shared tables for conductor `n`.
    pub fn get(n: u32) -> Arc<Field> {
        assert!(n >= 1, "conductor must be positive");
        static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
        let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = map.lock().unwrap();
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(Field::build(n)))
            .clone()
    }

    /// Reduces exponents of zeta taken mod n, given as integer weights, to the power basis.
    pub fn reduce_ring(&self, weights: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.phi];
        for (k, &w) in weights.iter().enumerate() {
            if w != 0 {
                for (o, &p) in out.iter_mut().zip(&self.pow[k % self.n as usize]) {
                    *o += w * p;
                }
            }
        }
        out
    }
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// An element of Q(zeta_n).
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<Field>,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Cyclotomic {
        let field = Field::get(n);
        let coeffs = vec![Rational::zero(); field.phi];
        Cyclotomic { field, coeffs }
    }

    pub fn one(n: u32) -> Cyclotomic {
        Self::from_rational(n, Rational::one())
    }

    pub fn from_rational(n: u32, r: Rational) -> Cyclotomic {
        let mut c = Self::zero(n);
        c.coeffs[0] = r;
        c
    }

    pub fn from_int(n: u32, v: i64) -> Cyclotomic {
        Self::from_rational(n, Rational::from_int(v))
    }

    /// zeta_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Cyclotomic {
        let field = Field::get(n);
        let idx = k.rem_euclid(n as i64) as usize;
        let coeffs = field.pow[idx].iter().map(|&v| Rational::from_int(v)).collect();
        Cyclotomic { field, coeffs }
    }

    /// Builds an element from power-basis coordinates, reducing if more than phi(n) are given.
    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Cyclotomic {
        let field = Field::get(n);
        if coeffs.len() == field.phi {
            return Cyclotomic { field, coeffs };
        }
        let mut out = vec![Rational::zero(); field.phi];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&field.pow[k % n as usize]) {
                if p != 0 {
                    *o += &(c * &Rational::from_int(p));
                }
            }
        }
        Cyclotomic { field, coeffs: out }
    }

    /// Builds an element from integer weights on zeta^k, k taken mod n, divided by `den`.
    pub fn from_ring(n: u32, weights: &[i64], den: i64) -> Cyclotomic {
        let field = Field::get(n);
        let red = field.reduce_ring(weights);
        let coeffs = red.into_iter().map(|v| Rational::new(v, den)).collect();
        Cyclotomic { field, coeffs }
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational when it lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn same_field(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = a.conductor().lcm(&b.conductor());
        (a.embed(m).unwrap(), b.embed(m).unwrap())
    }

    /// The same element viewed in Q(zeta_m).
    pub fn embed(&self, m: u32) -> Result<Cyclotomic> {
        let n = self.conductor();
        if !m.is_multiple_of(n) {
            return Err(Error::Conductor(format!("cannot embed conductor {n} into {m}")));
        }
        if m == n {
            return Ok(self.clone());
        }
        let step = (m / n) as usize;
        let target = Field::get(m);
        let mut out = vec![Rational::zero(); target.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&target.pow[(i * step) % m as usize]) {
                if p != 0 {
                    *o += &(c * &Rational::from_int(p));
                }
            }
        }
        Ok(Cyclotomic { field: target, coeffs: out })
    }

    /// Image under zeta -> zeta^k.
    pub fn galois(&self, k: i64) -> Result<Cyclotomic> {
        let n = self.conductor() as i64;
        if k.gcd(&n) != 1 {
            return Err(Error::Galois { k, conductor: n as u32 });
        }
        Ok(self.galois_unchecked(k))
    }

    pub(crate) fn galois_unchecked(&self, k: i64) -> Cyclotomic {
        let n = self.conductor() as i64;
        let kk = k.rem_euclid(n);
        if kk == 1 % n {
            return self.clone();
        }
        let mut out = vec![Rational::zero(); self.field.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((i as i64) * kk).rem_euclid(n) as usize;
            for (o, &p) in out.iter_mut().zip(&self.field.pow[e]) {
                if p != 0 {
                    *o += &(c * &Rational::from_int(p));
                }
            }
        }
        Cyclotomic { field: self.field.clone(), coeffs: out }
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cyclotomic {
        self.galois_unchecked(-1)
    }

    /// The exponent k with self = zeta_n^k, if self is an n-th root of unity.
    pub fn root_exponent(&self) -> Option<u32> {
        let f = &self.field;
        (0..f.n).find(|&k| {
            f.pow[k as usize]
                .iter()
                .zip(&self.coeffs)
                .all(|(&p, c)| *c == Rational::from_int(p))
        })
    }

    /// Smallest m with self^m = 1, if self is a root of unity.
    pub fn root_order(&self) -> Option<u32> {
        let n = self.conductor();
        if let Some(k) = self.root_exponent() {
            return Some(n / k.gcd(&n));
        }
        // for odd n the field also contains -zeta^k
        let k = (-self).root_exponent()?;
        let nn = 2 * n;
        let e = (n + 2 * k) % nn;
        Some(nn / e.gcd(&nn))
    }

    /// Multiplies by zeta_n^k.
    pub fn mul_root(&self, k: i64) -> Cyclotomic {
        let f = &self.field;
        let n = f.n as i64;
        let k = k.rem_euclid(n) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut out = vec![Rational::zero(); f.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&f.pow[(i + k) % f.n as usize]) {
                if p != 0 {
                    *o += &(c * &Rational::from_int(p));
                }
            }
        }
        Cyclotomic { field: self.field.clone(), coeffs: out }
    }

    pub fn scale(&self, r: &Rational) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn mul_same(&self, other: &Cyclotomic) -> Cyclotomic {
        if let Some(r) = other.as_rational() {
            return self.scale(r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(r);
        }
        let f = &self.field;
        let phi = f.phi;
        let mut acc = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[i + j] += &(a * b);
                }
            }
        }
        // reduce the high part by the monic cyclotomic polynomial
        for d in (phi..acc.len()).rev() {
            if acc[d].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut acc[d], Rational::zero());
            for (i, &p) in f.cyclo[..phi].iter().enumerate() {
                if p != 0 {
                    acc[d - phi + i] -= &(&c * &Rational::from_int(p));
                }
            }
        }
        acc.truncate(phi);
        Cyclotomic { field: self.field.clone(), coeffs: acc }
    }

    /// Multiplicative inverse, or an error for zero.
    pub fn inv(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclotomic::from_rational(self.conductor(), r.recip()));
        }
        if let Some(k) = self.root_exponent() {
            return Ok(Cyclotomic::root_of_unity(self.conductor(), -(k as i64)));
        }
        let f = &self.field;
        let modulus: Vec<Rational> = f.cyclo.iter().map(|&c| Rational::from_int(c)).collect();
        let s = upoly::inverse_mod(&self.coeffs, &modulus);
        let mut coeffs = s;
        coeffs.resize(f.phi, Rational::zero());
        Ok(Cyclotomic { field: self.field.clone(), coeffs })
    }

    pub fn checked_div(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one(self.conductor());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Rendering with the conductor annotation, e.g. `1 - z@4`.
    pub fn canonical(&self) -> String {
        format!("{}@{}", self, self.conductor())
    }
}

/// Dense univariate polynomials over Q, only what the inverse needs.
mod upoly {
    use super::*;

    fn trim(p: &mut Vec<Rational>) {
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
    }

    fn deg(p: &[Rational]) -> usize {
        p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    fn divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let db = deg(b);
        let lead = b[db].clone();
        let mut r = a.to_vec();
        trim(&mut r);
        if r.len() <= db {
            return (vec![Rational::zero()], r);
        }
        let mut q = vec![Rational::zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = &r[i + db] / &lead;
            if !c.is_zero() {
                for j in 0..=db {
                    let t = &c * &b[j];
                    r[i + j] -= &t;
                }
            }
            q[i] = c;
        }
        r.truncate(db.max(1));
        trim(&mut r);
        (q, r)
    }

    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        out
    }

    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(&mut out);
        out
    }

    /// s with s*a = 1 mod m, assuming gcd(a, m) = 1.
    pub fn inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = divmod(&r0, &r1);
            let s2 = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant
        let c = r0[0].recip();
        let (_, s) = divmod(&s0, m);
        s.iter().map(|x| x * &c).collect()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = Self::same_field(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.conductor()
            .cmp(&other.conductor())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor() != rhs.conductor() {
            let (a, b) = Cyclotomic::same_field(self, rhs);
            return &a + &b;
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor() != rhs.conductor() {
            let (a, b) = Cyclotomic::same_field(self, rhs);
            return &a - &b;
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor() != rhs.conductor() {
            let (a, b) = Cyclotomic::same_field(self, rhs);
            return a.mul_same(&b);
        }
        self.mul_same(rhs)
    }
}

/// Panics on division by zero; use [`Cyclotomic::checked_div`] to get an error instead.
impl Div for &Cyclotomic {
    type Output = Cyclotomic;
    fn div(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($t:ident $m:ident),*) => {$(
        impl $t for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(Field::get(1).cyclo, vec![-1, 1]);
        assert_eq!(Field::get(4).cyclo, vec![1, 0, 1]);
        assert_eq!(Field::get(12).cyclo, vec![1, 0, -1, 0, 1]);
        assert_eq!(Field::get(15).phi, 8);
        for n in 1..60 {
            assert_eq!(Field::get(n).phi, euler_phi(n));
        }
    }

    #[test]
    fn basic_roots() {
        assert!(z(1, 0).is_one());
        assert_eq!(z(4, 2), Cyclotomic::from_int(4, -1));
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_int(3, -1));
        assert_eq!(&z(4, 1) * &z(4, 1), Cyclotomic::from_int(4, -1));
        assert_eq!(&Cyclotomic::one(3) / &z(3, 1), z(3, 2));
    }

    #[test]
    fn norm_of_one_minus_zeta3() {
        let one = Cyclotomic::one(3);
        let p = &(&one - &z(3, 1)) * &(&one - &z(3, 2));
        assert_eq!(p, Cyclotomic::from_int(3, 3));
    }

    #[test]
    fn embedding() {
        let m1 = Cyclotomic::from_int(2, -1).embed(4).unwrap();
        assert_eq!(m1.conductor(), 4);
        assert_eq!(m1, Cyclotomic::from_int(4, -1));
        let e = z(3, 1).embed(12).unwrap();
        assert_eq!(e.coeffs(), z(12, 4).coeffs());
        assert_eq!(z(6, 1), -&z(3, 2).embed(6).unwrap());
        assert!(z(3, 1).embed(8).is_err());
    }

    #[test]
    fn galois_examples() {
        assert_eq!(z(3, 1).galois(2).unwrap(), z(3, 2));
        assert_eq!(z(4, 1).galois(3).unwrap(), -&z(4, 1));
        let a = &z(5, 1) + &Cyclotomic::from_rational(5, Rational::new(3, 7));
        let a = &a * &z(5, 3);
        assert_eq!(a.galois(2).unwrap().galois(2).unwrap(), a.galois(4).unwrap());
        assert!(z(6, 1).galois(3).is_err());
    }

    #[test]
    fn root_orders() {
        assert_eq!(Cyclotomic::one(1).root_order(), Some(1));
        assert_eq!(z(6, 1).root_order(), Some(6));
        assert_eq!(Cyclotomic::from_int(1, 2).root_order(), None);
        assert_eq!((-&z(3, 1)).root_order(), Some(6));
        assert_eq!(Cyclotomic::from_int(1, -1).root_order(), Some(2));
        for n in 1..25u32 {
            for k in 0..n as i64 {
                assert_eq!(z(n, k).root_order(), Some(n / (k as u32).gcd(&n)));
            }
        }
    }

    #[test]
    fn inverse_non_unit() {
        let a = &(&Cyclotomic::from_int(12, 2) + &z(12, 1)) - &z(12, 5).scale(&Rational::new(1, 3));
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert!(matches!(Cyclotomic::zero(5).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn rendering() {
        assert_eq!(Cyclotomic::zero(4).canonical(), "0@4");
        assert_eq!((&Cyclotomic::one(4) - &z(4, 1)).canonical(), "1 - z@4");
        assert_eq!(z(3, 2).to_string(), "-1 - z");
    }
}
