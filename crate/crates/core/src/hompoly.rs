//! Homogeneous polynomials in x_1..x_r as dense coefficient vectors over the
//! monomials of one degree, and the linear substitution action of matrices.

use std::collections::HashMap;

use crate::cyclotomic::Cyclotomic;
use crate::matrix::{row_reduce, CycMatrix};

const BITS: u32 = 8;
const MASK: u64 = (1 << BITS) - 1;

/// Exponent vector packed 8 bits per variable.
pub type Mono = u64;

pub fn pack(e: &[u32]) -> Mono {
    assert!(e.len() <= 8, "at most 8 variables");
    e.iter().enumerate().fold(0, |acc, (i, &x)| {
        assert!(x < 256, "exponent too large");
        acc | ((x as u64) << (BITS * i as u32))
    })
}

pub fn unpack(m: Mono, r: usize) -> Vec<u32> {
    (0..r).map(|i| ((m >> (BITS * i as u32)) & MASK) as u32).collect()
}

fn mono_mul(a: Mono, b: Mono) -> Mono {
    a + b
}

/// All monomials of degree `d` in `r` variables, in a fixed order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub r: usize,
    pub degree: u32,
    pub monos: Vec<Mono>,
    pub index: HashMap<Mono, usize>,
}

impl MonomialBasis {
    pub fn new(r: usize, degree: u32) -> MonomialBasis {
        let mut monos = Vec::new();
        let mut e = vec![0u32; r];
        fill(&mut e, 0, degree, &mut monos);
        let index = monos.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        MonomialBasis { r, degree, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
}

fn fill(e: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Mono>) {
    let r = e.len();
    if r == 0 {
        if left == 0 {
            out.push(0);
        }
        return;
    }
    if i == r - 1 {
        e[i] = left;
        out.push(pack(e));
        return;
    }
    for k in (0..=left).rev() {
        e[i] = k;
        fill(e, i + 1, left - k, out);
    }
    e[i] = 0;
}

/// Sparse polynomial used while expanding substitutions.
type Sparse = HashMap<Mono, Cyclotomic>;

fn sparse_mul(a: &Sparse, b: &Sparse, n: u32) -> Sparse {
    let mut out: Sparse = HashMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let e = out.entry(mono_mul(*ma, *mb)).or_insert_with(|| Cyclotomic::zero(n));
            *e = &*e + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The substitution x_i -> sum_j a_ij x_j on polynomials of one degree.
pub struct Substitution {
    r: usize,
    n: u32,
    rows: Vec<Sparse>,
    monomial: Option<Vec<(usize, Cyclotomic)>>,
    powers: HashMap<(usize, u32), Sparse>,
}

impl Substitution {
    /// Substitution by the matrix rows: x_i becomes row i of `a` as a linear form.
    pub fn new(a: &CycMatrix) -> Substitution {
        let r = a.rows();
        let n = a.conductor();
        let rows: Vec<Sparse> = (0..r)
            .map(|i| {
                let mut s = HashMap::new();
                for j in 0..r {
                    let c = a.get(i, j);
                    if !c.is_zero() {
                        let mut e = vec![0u32; r];
                        e[j] = 1;
                        s.insert(pack(&e), c.clone());
                    }
                }
                s
            })
            .collect();
        let monomial = if a.is_monomial() {
            Some(
                rows.iter()
                    .map(|s| {
                        let (&m, c) = s.iter().next().unwrap();
                        let j = (0..r).find(|&j| (m >> (BITS * j as u32)) & MASK == 1).unwrap();
                        (j, c.clone())
                    })
                    .collect(),
            )
        } else {
            None
        };
        Substitution { r, n, rows, monomial, powers: HashMap::new() }
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial.is_some()
    }

    /// For monomial substitutions, the image of a monomial as (scalar, monomial).
    pub fn monomial_image(&self, m: Mono) -> Option<(Cyclotomic, Mono)> {
        let map = self.monomial.as_ref()?;
        let mut c = Cyclotomic::one(self.n);
        let mut out = vec![0u32; self.r];
        for (i, e) in unpack(m, self.r).into_iter().enumerate() {
            if e > 0 {
                let (j, s) = &map[i];
                out[*j] += e;
                c = &c * &s.pow(e as u64);
            }
        }
        Some((c, pack(&out)))
    }

    fn power(&mut self, i: usize, e: u32) -> Sparse {
        if let Some(p) = self.powers.get(&(i, e)) {
            return p.clone();
        }
        let p = if e == 0 {
            HashMap::from([(0, Cyclotomic::one(self.n))])
        } else {
            let prev = self.power(i, e - 1);
            sparse_mul(&prev, &self.rows[i], self.n)
        };
        self.powers.insert((i, e), p.clone());
        p
    }

    /// Image of one monomial as a sparse polynomial.
    pub fn apply_monomial(&mut self, m: Mono) -> Sparse {
        if let Some((c, mm)) = self.monomial_image(m) {
            return HashMap::from([(mm, c)]);
        }
        let mut acc: Sparse = HashMap::from([(0, Cyclotomic::one(self.n))]);
        for (i, e) in unpack(m, self.r).into_iter().enumerate() {
            if e > 0 {
                let p = self.power(i, e);
                acc = sparse_mul(&acc, &p, self.n);
            }
        }
        acc
    }

    /// Image of a dense polynomial over `basis`.
    pub fn apply(&mut self, basis: &MonomialBasis, f: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let mut out = vec![Cyclotomic::zero(self.n); basis.len()];
        for (k, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, v) in self.apply_monomial(basis.monos[k]) {
                let idx = basis.index[&m];
                out[idx] = &out[idx] + &(c * &v);
            }
        }
        out
    }
}

/// The substitution realizing f -> f o g^{-1}: x_i -> sum_j (g^{-1})_ij x_j.
pub fn action_substitution(g_inverse: &CycMatrix) -> Substitution {
    Substitution::new(g_inverse)
}

/// Product of dense polynomials of degrees `ba.degree` and `bb.degree`.
pub fn multiply(
    ba: &MonomialBasis,
    a: &[Cyclotomic],
    bb: &MonomialBasis,
    b: &[Cyclotomic],
    out_basis: &MonomialBasis,
) -> Vec<Cyclotomic> {
    let n = a.first().or(b.first()).map(|c| c.conductor()).unwrap_or(1);
    let mut out = vec![Cyclotomic::zero(n); out_basis.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let idx = out_basis.index[&mono_mul(ba.monos[i], bb.monos[j])];
            out[idx] = &out[idx] + &(x * y);
        }
    }
    out
}

/// Reduced row echelon basis of the span of `vecs`.
pub fn span_basis(vecs: Vec<Vec<Cyclotomic>>) -> (Vec<Vec<Cyclotomic>>, Vec<usize>) {
    if vecs.is_empty() {
        return (Vec::new(), Vec::new());
    }
    row_reduce(vecs)
}

/// Coordinates of `v` in a reduced row echelon basis, or None if `v` is outside the span.
pub fn coordinates(rref: &[Vec<Cyclotomic>], pivots: &[usize], v: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
    let coords: Vec<Cyclotomic> = pivots.iter().map(|&p| v[p].clone()).collect();
    let n = v.first().map(|c| c.conductor()).unwrap_or(1);
    let mut rebuilt = vec![Cyclotomic::zero(n); v.len()];
    for (c, row) in coords.iter().zip(rref) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in rebuilt.iter_mut().zip(row) {
            if !x.is_zero() {
                *o = &*o + &(c * x);
            }
        }
    }
    (rebuilt.as_slice() == v).then_some(coords)
}

/// Renders a dense polynomial, e.g. `x1^2 + x2^2`.
pub fn render(basis: &MonomialBasis, f: &[Cyclotomic]) -> String {
    let mut terms = Vec::new();
    for (k, c) in f.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = unpack(basis.monos[k], basis.r);
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(i, &x)| if x == 1 { format!("x{}", i + 1) } else { format!("x{}^{x}", i + 1) })
            .collect();
        let mono = mono.join("*");
        let cs = c.to_string();
        let term = if mono.is_empty() {
            cs
        } else if c.is_one() {
            mono
        } else if (-c).is_one() {
            format!("-{mono}")
        } else if cs.contains(' ') {
            format!("({cs})*{mono}")
        } else {
            format!("{cs}*{mono}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                s.push_str(" - ");
                s.push_str(rest);
            }
            None => {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(MonomialBasis::new(3, 2).len(), 6);
        assert_eq!(MonomialBasis::new(4, 6).len(), 84);
        assert_eq!(MonomialBasis::new(2, 0).len(), 1);
    }

    #[test]
    fn swap_substitution() {
        let n = 1;
        let z = Cyclotomic::zero(n);
        let o = Cyclotomic::one(n);
        let swap = CycMatrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]);
        let b = MonomialBasis::new(2, 2);
        let mut s = Substitution::new(&swap);
        let mut f = vec![z.clone(); 3];
        f[b.index[&pack(&[2, 0])]] = o.clone();
        let g = s.apply(&b, &f);
        assert_eq!(g[b.index[&pack(&[0, 2])]], o);
        assert_eq!(render(&b, &g), "x2^2");
    }

    #[test]
    fn general_substitution_expands() {
        let n = 1;
        let o = Cyclotomic::one(n);
        let m = CycMatrix::from_rows(vec![vec![o.clone(), o.clone()], vec![Cyclotomic::zero(n), o.clone()]]);
        let b = MonomialBasis::new(2, 2);
        let mut s = Substitution::new(&m);
        let mut f = vec![Cyclotomic::zero(n); 3];
        f[b.index[&pack(&[2, 0])]] = o.clone();
        // (x1 + x2)^2
        assert_eq!(render(&b, &s.apply(&b, &f)), "x1^2 + 2*x1*x2 + x2^2");
    }
}
