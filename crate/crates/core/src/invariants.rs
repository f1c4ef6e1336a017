//! Molien series, degrees, fake degrees, invariant polynomials, the G-stable
//! space of fundamental N-invariants and its Galois-twisted analogue.

use std::collections::HashMap;

use num_traits::Zero;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::ReflectionGroup;
use crate::hompoly::{action_substitution, coordinates, multiply, span_basis, MonomialBasis, Substitution};
use crate::matrix::CycMatrix;
use crate::poly::{extract_factor_degrees, TruncSeries};
use crate::rational::Rational;
use crate::ringseries::{RingElem, RingSeries};

/// A field element of Z[zeta_n] as group-ring weights; fails off the integers.
pub fn to_ring(c: &Cyclotomic, n: u32) -> Result<RingElem> {
    let c = c.embed(n)?;
    let mut v = vec![0i64; n as usize];
    for (k, x) in c.coeffs().iter().enumerate() {
        v[k] = x
            .to_i64()
            .ok_or_else(|| Error::Invalid(format!("{} is not an algebraic integer in the power basis", c)))?;
    }
    Ok(v)
}

/// prod over the spectrum of 1/(1 - zeta^k x), to x^bound.
pub fn spectrum_series(n: u32, spectrum: &[(u32, usize)], bound: u32) -> RingSeries {
    let mut s = RingSeries::one(n, bound);
    for &(k, m) in spectrum {
        for _ in 0..m {
            s.mul_geometric(k as i64, 1);
        }
    }
    s
}

/// Spectrum on V* from the spectrum on V.
pub fn dual_spectrum(n: u32, spectrum: &[(u32, usize)]) -> Vec<(u32, usize)> {
    let mut v: Vec<(u32, usize)> = spectrum.iter().map(|&(k, m)| ((n - k) % n, m)).collect();
    v.sort_unstable();
    v
}

/// |G| times the Molien series, in the group ring.
fn molien_ring(g: &ReflectionGroup, bound: u32) -> RingSeries {
    let n = g.conductor();
    let mut acc = RingSeries::zero(n, bound);
    for (size, sp) in g.class_data() {
        acc.add_scaled(&spectrum_series(n, sp, bound), size as i64);
    }
    acc
}

/// (1/|G|) sum_g 1/det(1 - x g), truncated at x^bound.
pub fn molien(g: &ReflectionGroup, bound: u32) -> Result<TruncSeries<Rational>> {
    let coeffs = molien_ring(g, bound).rational_coeffs(g.order() as i64)?;
    let mut s = TruncSeries::zero(&["x"], &[bound]);
    for (j, c) in coeffs.into_iter().enumerate() {
        if !c.is_integer() || c.is_negative() {
            return Err(Error::Invalid(format!("Molien coefficient {c} at x^{j}")));
        }
        s.add_term(vec![j as u32], c);
    }
    Ok(s)
}

pub(crate) fn degrees_uncached(g: &ReflectionGroup) -> Result<Vec<u32>> {
    let bound = (g.reflections().len() + g.rank()) as u32;
    let m = molien(g, bound)?;
    let degs = extract_factor_degrees(&m, g.order() as u64, bound)?;
    if degs.len() != g.rank() {
        return Err(Error::NotPolynomial(format!("{} degrees for rank {}", degs.len(), g.rank())));
    }
    Ok(degs)
}

/// Fake degrees from the class function g -> chi(g^-1), given per class representative
/// as a group-ring element: the degrees in which the representation occurs in the
/// coinvariant quotient of S(V*). Returns the exponent multiset.
pub fn fake_degrees_with(
    g: &ReflectionGroup,
    dim: usize,
    mut chi_inverse: impl FnMut(usize) -> Result<RingElem>,
) -> Result<Vec<u32>> {
    let degs = g.degrees()?;
    let bound: u32 = degs.iter().map(|d| d - 1).sum();
    let n = g.conductor();
    let mut acc = RingSeries::zero(n, bound);
    for (ci, class) in g.classes().iter().enumerate() {
        let w = chi_inverse(class[0])?;
        if w.iter().all(|&x| x == 0) {
            continue;
        }
        let s = spectrum_series(n, &dual_spectrum(n, g.class_spectrum(ci)), bound);
        let scaled: Vec<i64> = w.iter().map(|x| x * class.len() as i64).collect();
        acc.add_ring_multiple(&scaled, &s);
    }
    for &d in &degs {
        acc.mul_binomial(0, d as usize, -1);
    }
    let coeffs = acc.rational_coeffs(g.order() as i64)?;
    let mut out = Vec::new();
    for (j, c) in coeffs.iter().enumerate() {
        let k = c
            .to_i64()
            .filter(|&k| k >= 0)
            .ok_or_else(|| Error::Invalid(format!("fake degree coefficient {c} at q^{j}")))?;
        out.extend(std::iter::repeat_n(j as u32, k as usize));
    }
    if out.len() != dim {
        return Err(Error::Dimension(format!("fake degree polynomial has {} terms, expected {dim}", out.len())));
    }
    Ok(out)
}

/// Fake degrees of a representation given by a matrix for every element.
pub fn fake_degrees(g: &ReflectionGroup, rep: impl Fn(usize) -> CycMatrix) -> Result<Vec<u32>> {
    let dim = rep(g.identity()).rows();
    let n = g.conductor();
    fake_degrees_with(g, dim, |x| to_ring(&rep(g.inverse(x)).trace(), n))
}

/// Fake degrees of the Galois twist V^sigma, sigma: zeta -> zeta^k.
pub fn fake_degrees_twisted(g: &ReflectionGroup, k: i64) -> Result<Vec<u32>> {
    let n = g.conductor() as i64;
    if num_integer::Integer::gcd(&k, &n) != 1 {
        return Err(Error::Galois { k, conductor: n as u32 });
    }
    fake_degrees_with(g, g.rank(), |x| {
        let mut w = vec![0i64; n as usize];
        for &(e, m) in g.spectrum(x) {
            w[(-(e as i64) * k).rem_euclid(n) as usize] += m as i64;
        }
        Ok(w)
    })
}

/// A linear map on coordinate vectors.
pub type LinearMap<'a> = Box<dyn FnMut(&[Cyclotomic]) -> Vec<Cyclotomic> + 'a>;

/// Generator actions on a finite-dimensional space, for computing invariants.
pub enum Action<'a> {
    /// Basis vector i goes to scalar * basis vector j.
    Monomial(Vec<(usize, Cyclotomic)>),
    /// Arbitrary linear map on dense vectors.
    Linear(LinearMap<'a>),
}

/// Reduced row echelon basis of the vectors fixed by every action.
pub fn invariant_vectors(dim: usize, n: u32, actions: Vec<Action<'_>>) -> Vec<Vec<Cyclotomic>> {
    let mut monomial = Vec::new();
    let mut linear = Vec::new();
    for a in actions {
        match a {
            Action::Monomial(v) => monomial.push(v),
            Action::Linear(f) => linear.push(f),
        }
    }
    let zero = Cyclotomic::zero(n);
    // orbit sums for the monomial part
    let mut start: Vec<Vec<Cyclotomic>> = Vec::new();
    if monomial.is_empty() {
        for i in 0..dim {
            let mut v = vec![zero.clone(); dim];
            v[i] = Cyclotomic::one(n);
            start.push(v);
        }
    } else {
        let mut seen = vec![false; dim];
        for i0 in 0..dim {
            if seen[i0] {
                continue;
            }
            let mut coef: HashMap<usize, Cyclotomic> = HashMap::from([(i0, Cyclotomic::one(n))]);
            let mut stack = vec![i0];
            seen[i0] = true;
            let mut ok = true;
            while let Some(i) = stack.pop() {
                let ci = coef[&i].clone();
                for m in &monomial {
                    let (j, s) = &m[i];
                    let want = &ci * s;
                    match coef.get(j) {
                        Some(cj) => {
                            if *cj != want {
                                ok = false;
                            }
                        }
                        None => {
                            coef.insert(*j, want);
                            seen[*j] = true;
                            stack.push(*j);
                        }
                    }
                }
            }
            if ok {
                let mut v = vec![zero.clone(); dim];
                for (j, c) in coef {
                    v[j] = c;
                }
                start.push(v);
            }
        }
    }
    if start.is_empty() || linear.is_empty() {
        return span_basis(start).0;
    }
    let k = start.len();
    let mut rows: Vec<Vec<Cyclotomic>> = Vec::new();
    for f in linear.iter_mut() {
        let images: Vec<Vec<Cyclotomic>> = start
            .iter()
            .map(|b| f(b).iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        for t in 0..dim {
            let row: Vec<Cyclotomic> = (0..k).map(|b| images[b][t].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let combos = if rows.is_empty() {
        (0..k)
            .map(|i| {
                let mut v = vec![zero.clone(); k];
                v[i] = Cyclotomic::one(n);
                v
            })
            .collect()
    } else {
        CycMatrix::from_rows(rows).kernel_basis()
    };
    let vecs: Vec<Vec<Cyclotomic>> = combos
        .iter()
        .map(|c| {
            let mut v = vec![zero.clone(); dim];
            for (ci, b) in c.iter().zip(&start) {
                if ci.is_zero() {
                    continue;
                }
                for (o, x) in v.iter_mut().zip(b) {
                    if !x.is_zero() {
                        *o = &*o + &(ci * x);
                    }
                }
            }
            v
        })
        .collect();
    span_basis(vecs).0
}

fn substitution_action<'a>(basis: &'a MonomialBasis, mut sub: Substitution) -> Action<'a> {
    if sub.is_monomial() {
        let images = basis
            .monos
            .iter()
            .map(|&m| {
                let (c, mm) = sub.monomial_image(m).unwrap();
                (basis.index[&mm], c)
            })
            .collect();
        Action::Monomial(images)
    } else {
        Action::Linear(Box::new(move |v: &[Cyclotomic]| sub.apply(basis, v)))
    }
}

/// Homogeneous invariants of one degree.
#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub degree: u32,
    pub monomials: MonomialBasis,
    /// Reduced row echelon basis over `monomials`.
    pub basis: Vec<Vec<Cyclotomic>>,
    pub pivots: Vec<usize>,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn render(&self) -> Vec<String> {
        self.basis.iter().map(|f| crate::hompoly::render(&self.monomials, f)).collect()
    }
}

/// Invariants of `g` of the given degree: orbit sums for monomial generators, then the
/// kernel of (s - 1) for the others.
pub fn invariant_basis(g: &ReflectionGroup, degree: u32) -> InvariantSpace {
    let monomials = MonomialBasis::new(g.rank(), degree);
    let mut gens: Vec<usize> = g.generators().to_vec();
    gens.sort_by_key(|&s| !g.element(s).is_monomial());
    let actions = gens
        .iter()
        .map(|&s| substitution_action(&monomials, Substitution::new(g.element(s))))
        .collect();
    let basis = invariant_vectors(monomials.len(), g.conductor(), actions);
    let pivots = pivots_of(&basis);
    InvariantSpace { degree, monomials, basis, pivots }
}

fn pivots_of(rref: &[Vec<Cyclotomic>]) -> Vec<usize> {
    rref.iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect()
}

/// Orthogonal complement of `sub` inside `space` for the form sum_g <g f, g h>, where the
/// maps in `actions` realize the group elements to average over.
fn hermitian_complement(
    space: &[Vec<Cyclotomic>],
    sub: &[Vec<Cyclotomic>],
    actions: &mut [LinearMap<'_>],
) -> Vec<Vec<Cyclotomic>> {
    if sub.is_empty() {
        return space.to_vec();
    }
    let n = space[0][0].conductor();
    let img_space: Vec<Vec<Vec<Cyclotomic>>> = actions.iter_mut().map(|f| space.iter().map(|v| f(v)).collect()).collect();
    let img_sub: Vec<Vec<Vec<Cyclotomic>>> = actions.iter_mut().map(|f| sub.iter().map(|v| f(v)).collect()).collect();
    let rows: Vec<Vec<Cyclotomic>> = (0..sub.len())
        .map(|j| {
            (0..space.len())
                .map(|b| {
                    let mut acc = Cyclotomic::zero(n);
                    for (is, iu) in img_space.iter().zip(&img_sub) {
                        for (x, y) in is[b].iter().zip(&iu[j]) {
                            if !x.is_zero() && !y.is_zero() {
                                acc = &acc + &(x * &y.conj());
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let combos = CycMatrix::from_rows(rows).kernel_basis();
    let dim = space[0].len();
    let vecs = combos
        .iter()
        .map(|c| {
            let mut v = vec![Cyclotomic::zero(n); dim];
            for (ci, b) in c.iter().zip(space) {
                if ci.is_zero() {
                    continue;
                }
                for (o, x) in v.iter_mut().zip(b) {
                    if !x.is_zero() {
                        *o = &*o + &(ci * x);
                    }
                }
            }
            v
        })
        .collect();
    span_basis(vecs).0
}

/// One graded piece of a G-stable space of N-invariant objects.
#[derive(Clone, Debug)]
pub struct Block {
    pub degree: u32,
    pub monomials: MonomialBasis,
    /// Reduced row echelon basis; for tuple spaces each vector has `width` slots per monomial.
    pub basis: Vec<Vec<Cyclotomic>>,
    pub pivots: Vec<usize>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a vector of the block's ambient space, if it lies in the block.
    pub fn coordinates(&self, v: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
        coordinates(&self.basis, &self.pivots, v)
    }
}

/// E* = span of fundamental N-invariants, a G-stable complement of the decomposables in
/// each degree.
#[derive(Clone, Debug)]
pub struct FundamentalSpace {
    pub blocks: Vec<Block>,
    pub n_degrees: Vec<u32>,
}

impl FundamentalSpace {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }

    /// Degree of each basis vector, in basis order.
    pub fn degrees(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.degree, b.dim())).collect()
    }

    pub fn render(&self) -> Vec<String> {
        self.blocks
            .iter()
            .flat_map(|b| b.basis.iter().map(|f| crate::hompoly::render(&b.monomials, f)))
            .collect()
    }

    /// Matrix of f -> f o g^-1 on the basis, block diagonal by degree.
    pub fn action_matrix(&self, g_inverse: &CycMatrix) -> Result<CycMatrix> {
        let n = g_inverse.conductor();
        let r = self.dim();
        let mut m = CycMatrix::zeros(n, r, r);
        let mut sub = action_substitution(g_inverse);
        let mut off = 0;
        for b in &self.blocks {
            for (j, f) in b.basis.iter().enumerate() {
                let img = sub.apply(&b.monomials, f);
                let c = b
                    .coordinates(&img)
                    .ok_or_else(|| Error::NotNormal(format!("degree {} invariants are not stable", b.degree)))?;
                for (i, x) in c.into_iter().enumerate() {
                    m.set(off + i, off + j, x);
                }
            }
            off += b.dim();
        }
        Ok(m)
    }
}

/// Action closures f -> f o g^-1 for the given elements of `g`, on one monomial basis.
fn poly_actions<'a>(
    g: &'a ReflectionGroup,
    elems: &[usize],
    basis: &'a MonomialBasis,
) -> Vec<LinearMap<'a>> {
    elems
        .iter()
        .map(|&x| {
            let mut sub = action_substitution(g.element(g.inverse(x)));
            Box::new(move |v: &[Cyclotomic]| sub.apply(basis, v)) as Box<dyn FnMut(&[Cyclotomic]) -> Vec<Cyclotomic>>
        })
        .collect()
}

/// Coset representatives of a subgroup given by parent indices.
pub fn coset_reps(g: &ReflectionGroup, n: &ReflectionGroup) -> Result<Vec<usize>> {
    let idx = n
        .parent_indices()
        .ok_or_else(|| Error::Invalid("subgroup carries no parent indices".into()))?;
    Ok(g.cosets(idx).0)
}

/// The G-stable space E* of fundamental invariants of the normal subgroup `n`.
pub fn fundamental_invariant_space(g: &ReflectionGroup, n: &ReflectionGroup) -> Result<FundamentalSpace> {
    let n_degrees = n.degrees()?;
    let reps = coset_reps(g, n)?;
    let top = *n_degrees.iter().max().unwrap_or(&0);
    let r = g.rank();
    let cond = g.conductor();
    // full[j]: basis of all N-invariants of degree j generated by the chosen blocks so far
    let mut full: Vec<(MonomialBasis, Vec<Vec<Cyclotomic>>)> = Vec::new();
    let b0 = MonomialBasis::new(r, 0);
    full.push((b0, vec![vec![Cyclotomic::one(cond)]]));
    let mut blocks: Vec<Block> = Vec::new();
    for d in 1..=top {
        let mb = MonomialBasis::new(r, d);
        let mut prods = Vec::new();
        for blk in &blocks {
            let (lb, lower) = &full[(d - blk.degree) as usize];
            for f in &blk.basis {
                for h in lower {
                    prods.push(multiply(&blk.monomials, f, lb, h, &mb));
                }
            }
        }
        let (dec, _) = span_basis(prods);
        let mult = n_degrees.iter().filter(|&&x| x == d).count();
        if mult == 0 {
            full.push((mb, dec));
            continue;
        }
        let inv = invariant_basis(n, d);
        if inv.dim() != dec.len() + mult {
            return Err(Error::Dimension(format!(
                "degree {d}: {} invariants, {} decomposable, expected {mult} new",
                inv.dim(),
                dec.len()
            )));
        }
        let comp = {
            let mut acts = poly_actions(g, &reps, &mb);
            hermitian_complement(&inv.basis, &dec, &mut acts)
        };
        if comp.len() != mult {
            return Err(Error::Dimension(format!("degree {d}: complement of dimension {}", comp.len())));
        }
        let pivots = pivots_of(&comp);
        blocks.push(Block { degree: d, monomials: mb.clone(), basis: comp, pivots });
        full.push((mb, inv.basis));
    }
    let space = FundamentalSpace { blocks, n_degrees };
    if space.dim() != r {
        return Err(Error::Dimension(format!("E* has dimension {}, expected {r}", space.dim())));
    }
    for &s in g.generators() {
        space.action_matrix(g.element(g.inverse(s)))?;
    }
    Ok(space)
}

/// Pairs (a_i, b_i) read off from the u^1 coefficient of a bigraded series that has
/// already been multiplied by prod (1 - x^{d_i}); `terms[(a, b)]` holds that coefficient.
pub fn pairs_from_u1(terms: &HashMap<(u32, u32), Rational>, r: usize) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    let mut keys: Vec<&(u32, u32)> = terms.keys().collect();
    keys.sort();
    for k in keys {
        let c = &terms[k];
        if c.is_zero() {
            continue;
        }
        let m = c
            .to_i64()
            .filter(|&m| m > 0)
            .ok_or_else(|| Error::Invalid(format!("u-linear coefficient {c} at x^{}y^{}", k.0, k.1)))?;
        out.extend(std::iter::repeat_n(*k, m as usize));
    }
    if out.len() != r {
        return Err(Error::Dimension(format!("{} pairs, expected {r}", out.len())));
    }
    Ok(out)
}

/// Galois-twisted analogue of E*: generators of (S(V*) tensor (V^sigma)*)^N as a graded
/// G-module. Vectors are stored with `rank` slots per monomial.
#[derive(Clone, Debug)]
pub struct OsSpace {
    pub k: i64,
    pub rank: usize,
    pub blocks: Vec<Block>,
}

impl OsSpace {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.degree, b.dim())).collect()
    }

    /// Matrix of an element on the basis, block diagonal by degree.
    pub fn action_matrix(&self, g: &ReflectionGroup, x: usize) -> Result<CycMatrix> {
        let n = g.conductor();
        let r = self.dim();
        let mut m = CycMatrix::zeros(n, r, r);
        let mut off = 0;
        for b in &self.blocks {
            let mut act = tensor_action(g, x, self.k, &b.monomials);
            for (j, f) in b.basis.iter().enumerate() {
                let img = act(f);
                let c = b
                    .coordinates(&img)
                    .ok_or_else(|| Error::NotNormal(format!("degree {} generators are not stable", b.degree)))?;
                for (i, v) in c.into_iter().enumerate() {
                    m.set(off + i, off + j, v);
                }
            }
            off += b.dim();
        }
        Ok(m)
    }
}

/// The action of element x on S_l tensor (V^sigma)*: polynomials by f -> f o x^-1 and the
/// dual basis by the transpose inverse of the twisted matrix.
fn tensor_action<'a>(
    g: &'a ReflectionGroup,
    x: usize,
    k: i64,
    basis: &'a MonomialBasis,
) -> LinearMap<'a> {
    let r = g.rank();
    let inv = g.element(g.inverse(x));
    let mut sub = action_substitution(inv);
    let w = inv.galois(k).expect("unit");
    Box::new(move |v: &[Cyclotomic]| {
        let n = w.conductor();
        let mut out = vec![Cyclotomic::zero(n); v.len()];
        // split into the r polynomial components f_j (coefficient of w_j)
        for j in 0..r {
            let fj: Vec<Cyclotomic> = (0..basis.len()).map(|t| v[t * r + j].clone()).collect();
            if fj.iter().all(|c| c.is_zero()) {
                continue;
            }
            let gf = sub.apply(basis, &fj);
            // x . w_j = sum_i (w)_{j i} w_i
            for i in 0..r {
                let c = w.get(j, i);
                if c.is_zero() {
                    continue;
                }
                for (t, val) in gf.iter().enumerate() {
                    if !val.is_zero() {
                        let o = &mut out[t * r + i];
                        *o = &*o + &(val * c);
                    }
                }
            }
        }
        out
    })
}

fn tensor_monomial_action(g: &ReflectionGroup, x: usize, k: i64, basis: &MonomialBasis) -> Option<Vec<(usize, Cyclotomic)>> {
    let r = g.rank();
    let inv = g.element(g.inverse(x));
    if !inv.is_monomial() {
        return None;
    }
    let sub = action_substitution(inv);
    let w = inv.galois(k).ok()?;
    let mut out = Vec::with_capacity(basis.len() * r);
    for &m in &basis.monos {
        let (c, mm) = sub.monomial_image(m)?;
        let t = basis.index[&mm];
        for j in 0..r {
            let i = (0..r).find(|&i| !w.get(j, i).is_zero())?;
            out.push((t * r + i, &c * w.get(j, i)));
        }
    }
    Some(out)
}

fn tensor_invariants(n: &ReflectionGroup, k: i64, basis: &MonomialBasis) -> Vec<Vec<Cyclotomic>> {
    let r = n.rank();
    let mut gens: Vec<usize> = n.generators().to_vec();
    gens.sort_by_key(|&s| !n.element(s).is_monomial());
    let actions = gens
        .iter()
        .map(|&s| match tensor_monomial_action(n, s, k, basis) {
            Some(v) => Action::Monomial(v),
            None => Action::Linear(tensor_action(n, s, k, basis)),
        })
        .collect();
    invariant_vectors(basis.len() * r, n.conductor(), actions)
}

fn tensor_scale(
    f: &[Cyclotomic],
    fb: &MonomialBasis,
    v: &[Cyclotomic],
    vb: &MonomialBasis,
    out_basis: &MonomialBasis,
    r: usize,
) -> Vec<Cyclotomic> {
    let n = f[0].conductor();
    let mut out = vec![Cyclotomic::zero(n); out_basis.len() * r];
    for j in 0..r {
        let vj: Vec<Cyclotomic> = (0..vb.len()).map(|t| v[t * r + j].clone()).collect();
        if vj.iter().all(|c| c.is_zero()) {
            continue;
        }
        let p = multiply(fb, f, vb, &vj, out_basis);
        for (t, c) in p.into_iter().enumerate() {
            out[t * r + j] = c;
        }
    }
    out
}

/// Generators of the free S(V*)^N-module (S(V*) tensor (V^sigma)*)^N in the degrees given by
/// the fake degrees of V^sigma, as a G-stable complement of the decomposable part.
pub fn os_space(g: &ReflectionGroup, n: &ReflectionGroup, e_star: &FundamentalSpace, k: i64) -> Result<OsSpace> {
    let cond = g.conductor() as i64;
    if num_integer::Integer::gcd(&k, &cond) != 1 {
        return Err(Error::Galois { k, conductor: cond as u32 });
    }
    let targets = fake_degrees_twisted(n, k)?;
    let reps = coset_reps(g, n)?;
    let r = g.rank();
    let top = *targets.iter().max().unwrap_or(&0);
    let mut cache: HashMap<u32, (MonomialBasis, Vec<Vec<Cyclotomic>>)> = HashMap::new();
    let mut blocks = Vec::new();
    for l in 0..=top {
        let mult = targets.iter().filter(|&&x| x == l).count();
        if mult == 0 {
            continue;
        }
        let mb = MonomialBasis::new(r, l);
        let inv = tensor_invariants(n, k, &mb);
        let mut prods = Vec::new();
        for blk in &e_star.blocks {
            if blk.degree > l {
                continue;
            }
            let lower = l - blk.degree;
            let (lb, lv) = cache
                .entry(lower)
                .or_insert_with(|| {
                    let b = MonomialBasis::new(r, lower);
                    let v = tensor_invariants(n, k, &b);
                    (b, v)
                })
                .clone();
            for f in &blk.basis {
                for v in &lv {
                    prods.push(tensor_scale(f, &blk.monomials, v, &lb, &mb, r));
                }
            }
        }
        let (dec, _) = span_basis(prods);
        if inv.len() != dec.len() + mult {
            return Err(Error::Dimension(format!(
                "twisted degree {l}: {} invariants, {} decomposable, expected {mult} new",
                inv.len(),
                dec.len()
            )));
        }
        let comp = {
            let mut acts: Vec<_> = reps.iter().map(|&x| tensor_action(g, x, k, &mb)).collect();
            hermitian_complement(&inv, &dec, &mut acts)
        };
        if comp.len() != mult {
            return Err(Error::Dimension(format!("twisted degree {l}: complement of dimension {}", comp.len())));
        }
        let pivots = pivots_of(&comp);
        cache.insert(l, (mb.clone(), inv));
        blocks.push(Block { degree: l, monomials: mb, basis: comp, pivots });
    }
    let space = OsSpace { k, rank: r, blocks };
    if space.dim() != r {
        return Err(Error::Dimension(format!("twisted space has dimension {}, expected {r}", space.dim())));
    }
    for &s in g.generators() {
        space.action_matrix(g, s)?;
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn grp(s: &str) -> ReflectionGroup {
        ReflectionGroup::build(&s.parse::<GroupSpec>().unwrap()).unwrap()
    }

    fn sub_by_classes(g: &ReflectionGroup, classes: &[usize]) -> ReflectionGroup {
        let refl: Vec<usize> = classes.iter().flat_map(|&c| g.reflection_classes()[c].clone()).collect();
        let gens = g.greedy_generators(&refl);
        let elems = g.closure(&gens);
        g.subgroup(&elems, &gens, "N").unwrap()
    }

    #[test]
    fn molien_of_b2() {
        let g = grp("G(2,1,2)");
        let m = molien(&g, 8).unwrap();
        let expect: Vec<i64> = vec![1, 0, 1, 0, 2, 0, 2, 0, 3];
        for (j, c) in expect.into_iter().enumerate() {
            let got = m.coeff(&[j as u32]).cloned().unwrap_or_else(|| Rational::from_int(0));
            assert_eq!(got, Rational::from_int(c), "x^{j}");
        }
        assert_eq!(g.degrees().unwrap(), vec![2, 4]);
    }

    #[test]
    fn degrees_of_catalog_examples() {
        assert_eq!(grp("G(2,2,4)").degrees().unwrap(), vec![2, 4, 4, 6]);
        assert_eq!(grp("ST28").degrees().unwrap(), vec![2, 6, 8, 12]);
        assert_eq!(grp("G(1,1,1)").degrees().unwrap(), vec![1]);
        assert_eq!(grp("G(1,1,3)").degrees().unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn fake_degrees_of_reflection_representation() {
        for s in ["G(2,1,2)", "ST28", "G(3,1,2)", "ST4"] {
            let g = grp(s);
            let e = fake_degrees(&g, |x| g.element(x).clone()).unwrap();
            assert_eq!(e, g.exponents().unwrap(), "{s}");
            assert_eq!(fake_degrees_twisted(&g, 1).unwrap(), e);
        }
        let g = grp("G(2,1,2)");
        let triv = fake_degrees(&g, |_| CycMatrix::identity(g.conductor(), 1)).unwrap();
        assert_eq!(triv, vec![0]);
    }

    #[test]
    fn invariant_bases() {
        let g = grp("G(2,1,2)");
        let n = sub_by_classes(&g, &[0]);
        assert_eq!(invariant_basis(&n, 2).render(), vec!["x1^2", "x2^2"]);
        assert_eq!(invariant_basis(&n, 0).dim(), 1);
        let s3 = grp("G(1,1,3)");
        assert_eq!(invariant_basis(&s3, 1).render(), vec!["x1 + x2 + x3"]);
    }

    #[test]
    fn invariants_match_reynolds_average() {
        // a group with a non-monomial generator
        let g = grp("ST4");
        for d in [4, 6, 8] {
            let fast = invariant_basis(&g, d);
            let mb = MonomialBasis::new(2, d);
            let mut acts = poly_actions(&g, &(0..g.order()).collect::<Vec<_>>(), &mb);
            let mut avg = Vec::new();
            for i in 0..mb.len() {
                let mut e = vec![Cyclotomic::zero(g.conductor()); mb.len()];
                e[i] = Cyclotomic::one(g.conductor());
                let mut acc = vec![Cyclotomic::zero(g.conductor()); mb.len()];
                for f in acts.iter_mut() {
                    for (o, x) in acc.iter_mut().zip(f(&e)) {
                        *o = &*o + &x;
                    }
                }
                avg.push(acc);
            }
            let (reyn, _) = span_basis(avg.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect());
            assert_eq!(fast.basis, reyn, "degree {d}");
        }
    }

    #[test]
    fn fundamental_space_of_example() {
        let g = grp("G(2,1,2)");
        let n = sub_by_classes(&g, &[0]);
        let e = fundamental_invariant_space(&g, &n).unwrap();
        assert_eq!(e.render(), vec!["x1^2", "x2^2"]);
        let g3 = grp("G(2,1,3)");
        let diag = g3.reflection_classes().iter().position(|c| c.len() == 3).unwrap();
        let n3 = sub_by_classes(&g3, &[diag]);
        let e3 = fundamental_invariant_space(&g3, &n3).unwrap();
        assert_eq!(e3.render(), vec!["x1^2", "x2^2", "x3^2"]);
    }

    #[test]
    fn os_space_untwisted_and_cyclic() {
        let g = grp("G(2,1,2)");
        let n = sub_by_classes(&g, &[0]);
        let e = fundamental_invariant_space(&g, &n).unwrap();
        let u = os_space(&g, &n, &e, 1).unwrap();
        assert_eq!(u.degrees(), vec![1, 1]);
        let c3 = grp("G(3,1,1)");
        let all = sub_by_classes(&c3, &[0]);
        let e = fundamental_invariant_space(&c3, &all).unwrap();
        let u = os_space(&c3, &all, &e, 2).unwrap();
        assert_eq!(u.degrees(), vec![1]);
    }
}
