//! Normal reflection subgroups, the action of G/N on the span E* of fundamental
//! N-invariants, eigenvalue data per coset and the fixed-space dimension on E.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{ReflectionGroup, DEFAULT_ELEMENT_CAP};
use crate::invariants::{dual_spectrum, fake_degrees_with, fundamental_invariant_space, to_ring, FundamentalSpace};
use crate::matrix::CycMatrix;
use crate::poly::UniRational;
use crate::ringseries::RingSeries;

/// A normal subgroup generated by a union of reflection classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSubgroup {
    /// Indices of every reflection class contained in the subgroup.
    pub classes: Vec<usize>,
    /// Sorted element indices in the ambient group.
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
}

impl NormalSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Short description used in labels, e.g. `classes=0,1`.
    pub fn describe(&self) -> String {
        if self.classes.is_empty() {
            "trivial".into()
        } else {
            let c: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
            format!("classes={}", c.join(","))
        }
    }

    pub fn label(&self, g: &ReflectionGroup) -> String {
        format!("{}[{}]", g.label(), self.describe())
    }

    /// The subgroup as a group in its own right, sharing the ambient conductor.
    pub fn group(&self, g: &ReflectionGroup) -> Result<ReflectionGroup> {
        g.subgroup(&self.elements, &self.generators, &self.label(g))
    }
}

/// Subgroup selector: a union of reflection classes, all of them, or none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    Classes(Vec<usize>),
    All,
    Trivial,
}

impl FromStr for SubgroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<SubgroupSpec> {
        let s = s.trim();
        match s {
            "all" => return Ok(SubgroupSpec::All),
            "trivial" => return Ok(SubgroupSpec::Trivial),
            _ => {}
        }
        let rest = s
            .strip_prefix("classes=")
            .ok_or_else(|| Error::Parse(format!("subgroup '{s}': expected classes=i,j, all or trivial")))?;
        let mut v = Vec::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            v.push(
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad class index '{part}'")))?,
            );
        }
        v.sort_unstable();
        v.dedup();
        Ok(if v.is_empty() { SubgroupSpec::Trivial } else { SubgroupSpec::Classes(v) })
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::All => f.write_str("all"),
            SubgroupSpec::Trivial => f.write_str("trivial"),
            SubgroupSpec::Classes(v) => {
                let c: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "classes={}", c.join(","))
            }
        }
    }
}

fn contained_classes(g: &ReflectionGroup, elements: &[usize]) -> Vec<usize> {
    g.reflection_classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| elements.binary_search(&c[0]).is_ok())
        .map(|(i, _)| i)
        .collect()
}

fn check_normal(g: &ReflectionGroup, sub: &NormalSubgroup) -> Result<()> {
    for &s in g.generators() {
        for &n in &sub.generators {
            if !sub.contains(g.conj(s, n)) {
                return Err(Error::NotNormal(format!("{} is not normal in {}", sub.describe(), g.label())));
            }
        }
    }
    Ok(())
}

/// The subgroup generated by `candidates`, which must be normal.
pub fn generated_normal_subgroup(g: &ReflectionGroup, candidates: &[usize]) -> Result<NormalSubgroup> {
    let generators = g.greedy_generators(candidates);
    let elements = g.closure(&generators);
    let classes = contained_classes(g, &elements);
    let sub = NormalSubgroup { classes, elements, generators };
    check_normal(g, &sub)?;
    Ok(sub)
}

/// The normal subgroup generated by the given reflection classes.
pub fn subgroup_from_classes(g: &ReflectionGroup, classes: &[usize]) -> Result<NormalSubgroup> {
    let rc = g.reflection_classes();
    let mut cands = Vec::new();
    for &c in classes {
        let class = rc
            .get(c)
            .ok_or_else(|| Error::Invalid(format!("{} has {} reflection classes, no class {c}", g.label(), rc.len())))?;
        cands.extend_from_slice(class);
    }
    generated_normal_subgroup(g, &cands)
}

pub fn select_subgroup(g: &ReflectionGroup, spec: &SubgroupSpec) -> Result<NormalSubgroup> {
    match spec {
        SubgroupSpec::Trivial => subgroup_from_classes(g, &[]),
        SubgroupSpec::All => subgroup_from_classes(g, &(0..g.reflection_classes().len()).collect::<Vec<_>>()),
        SubgroupSpec::Classes(v) => subgroup_from_classes(g, v),
    }
}

/// All distinct normal reflection subgroups, ordered by (order, class list).
pub fn normal_reflection_subgroups(g: &ReflectionGroup) -> Result<Vec<NormalSubgroup>> {
    let atoms: Vec<NormalSubgroup> = (0..g.reflection_classes().len())
        .map(|c| subgroup_from_classes(g, &[c]))
        .collect::<Result<_>>()?;
    let trivial = subgroup_from_classes(g, &[])?;
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    seen.insert(trivial.elements.clone(), 0);
    let mut found = vec![trivial];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for atom in &atoms {
            if atom.generators.iter().all(|&x| found[i].contains(x)) {
                continue;
            }
            let mut cands = found[i].generators.clone();
            cands.extend_from_slice(&atom.generators);
            let sub = generated_normal_subgroup(g, &cands)?;
            if !seen.contains_key(&sub.elements) {
                seen.insert(sub.elements.clone(), found.len());
                queue.push_back(found.len());
                found.push(sub);
            }
        }
    }
    found.sort_by(|a, b| (a.order(), &a.classes).cmp(&(b.order(), &b.classes)));
    Ok(found)
}

/// Degrees and exponents attached to a pair N, G and the quotient H acting on E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentData {
    pub d_g: Vec<u32>,
    pub d_n: Vec<u32>,
    pub d_h: Vec<u32>,
    pub e_g_v: Vec<u32>,
    pub e_n_v: Vec<u32>,
    pub e_g_e: Vec<u32>,
    pub e_h_e: Vec<u32>,
    /// Pairs (e^G(E), e^N(V)) read off block by block.
    pub pairs: Vec<(u32, u32)>,
}

/// Everything known about N normal in G and the quotient H = G/N acting on E.
pub struct QuotientData<'a> {
    pub g: &'a ReflectionGroup,
    pub n: ReflectionGroup,
    pub subgroup: NormalSubgroup,
    pub coset_reps: Vec<usize>,
    pub coset_of: Vec<usize>,
    pub e_star: FundamentalSpace,
    /// Matrix of each coset on the E* basis (f -> f o g^-1).
    pub h_matrices: Vec<CycMatrix>,
    /// H as a matrix group on E = (E*)*.
    pub h: ReflectionGroup,
    /// Index in `h` of each coset.
    pub h_element: Vec<usize>,
    pub exponents: ExponentData,
    /// Per coset: eigenvalue exponents at the conductor of G with the degree of their block.
    pub epsilon: Vec<Vec<(u32, u32)>>,
}

/// The diagonal block of a block diagonal matrix.
fn block_of(m: &CycMatrix, start: usize, len: usize) -> CycMatrix {
    let rows = (start..start + len)
        .map(|i| (start..start + len).map(|j| m.get(i, j).clone()).collect())
        .collect();
    CycMatrix::from_rows(rows)
}

/// Block offsets and lengths of E*.
fn block_ranges(e: &FundamentalSpace) -> Vec<(usize, usize, u32)> {
    let mut off = 0;
    e.blocks
        .iter()
        .map(|b| {
            let r = (off, b.dim(), b.degree);
            off += b.dim();
            r
        })
        .collect()
}

pub fn build_quotient<'a>(g: &'a ReflectionGroup, subgroup: &NormalSubgroup) -> Result<QuotientData<'a>> {
    check_normal(g, subgroup)?;
    let n = subgroup.group(g)?;
    let (coset_reps, coset_of) = g.cosets(&subgroup.elements);
    let e_star = fundamental_invariant_space(g, &n)?;
    let h_matrices: Vec<CycMatrix> = coset_reps
        .iter()
        .map(|&x| e_star.action_matrix(g.element(g.inverse(x))))
        .collect::<Result<_>>()?;
    for (c, m) in h_matrices.iter().enumerate() {
        if m.is_identity() != (c == 0) {
            return Err(Error::NotNormal(format!("coset {c} acts trivially on E* but is not N")));
        }
    }
    for &x in n.generators() {
        let px = subgroup.elements[x];
        if !e_star.action_matrix(g.element(g.inverse(px)))?.is_identity() {
            return Err(Error::NotNormal("an element of N moves E*".into()));
        }
    }
    // homomorphism on generators; it extends to all products since the matrices depend
    // on the coset only
    for &s in g.generators() {
        let cs = coset_of[s];
        for (c, &x) in coset_reps.iter().enumerate() {
            let prod = coset_of[g.mul(s, x)];
            if h_matrices[cs].mul(&h_matrices[c]) != h_matrices[prod] {
                return Err(Error::NotNormal(format!("coset matrices are not multiplicative at coset {c}")));
            }
        }
    }
    // E = (E*)*: x acts on E by the transpose of its action on E* at x^-1
    let on_e = |c: usize| -> CycMatrix {
        let rep = coset_reps[c];
        h_matrices[coset_of[g.inverse(rep)]].transpose()
    };
    let mut hgens: Vec<CycMatrix> = Vec::new();
    for &s in g.generators() {
        let m = on_e(coset_of[s]);
        if !m.is_identity() && !hgens.contains(&m) {
            hgens.push(m);
        }
    }
    let label = format!("{}/{}", g.label(), subgroup.describe());
    let h = ReflectionGroup::from_generators(g.rank(), &hgens, &label, DEFAULT_ELEMENT_CAP)?;
    if h.order() != coset_reps.len() {
        return Err(Error::Dimension(format!(
            "quotient matrices form a group of order {}, expected {}",
            h.order(),
            coset_reps.len()
        )));
    }
    if !h.is_generated_by_reflections() {
        return Err(Error::NotPolynomial(format!("{label} is not generated by reflections on E")));
    }
    let by_matrix: HashMap<CycMatrix, usize> = h
        .elements()
        .iter()
        .enumerate()
        .map(|(i, m)| Ok((m.embed(g.conductor())?, i)))
        .collect::<Result<_>>()?;
    let h_element: Vec<usize> = (0..coset_reps.len())
        .map(|c| by_matrix.get(&on_e(c)).copied().ok_or_else(|| Error::Invalid("coset matrix outside H".into())))
        .collect::<Result<_>>()?;

    let cond = g.conductor();
    let ranges = block_ranges(&e_star);
    let mut pairs = Vec::new();
    for &(start, len, degree) in &ranges {
        // chi of the block of E at x^-1 is the trace of x on the block of E*
        let a = fake_degrees_with(g, len, |x| {
            to_ring(&block_of(&h_matrices[coset_of[x]], start, len).trace(), cond)
        })?;
        pairs.extend(a.into_iter().map(|a| (a, degree - 1)));
    }
    pairs.sort_unstable();
    let mut e_g_e: Vec<u32> = pairs.iter().map(|p| p.0).collect();
    e_g_e.sort_unstable();
    let exponents = ExponentData {
        d_g: g.degrees()?,
        d_n: n.degrees()?,
        d_h: h.degrees()?,
        e_g_v: g.exponents()?,
        e_n_v: n.exponents()?,
        e_g_e,
        e_h_e: h.exponents()?,
        pairs,
    };
    let epsilon = coset_reps
        .iter()
        .zip(&h_matrices)
        .map(|(&x, m)| {
            let ord = g.element_order(x);
            let mut out = Vec::new();
            for &(start, len, degree) in &ranges {
                for (k, mult) in block_of(m, start, len).eigen_exponents(ord)? {
                    out.extend(std::iter::repeat_n((k, degree), mult));
                }
            }
            out.sort_unstable_by_key(|&(k, d)| (d, k));
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientData { g, n, subgroup: subgroup.clone(), coset_reps, coset_of, e_star, h_matrices, h, h_element, exponents, epsilon })
}

impl QuotientData<'_> {
    pub fn rank(&self) -> usize {
        self.g.rank()
    }

    pub fn cosets(&self) -> usize {
        self.coset_reps.len()
    }

    /// dim of the fixed space of the coset on E, from its matrix.
    pub fn fix_e(&self, c: usize) -> usize {
        self.h_matrices[c].fixed_space_dim()
    }

    /// dim of the fixed space on E for every element of G.
    pub fn fix_e_of(&self, x: usize) -> usize {
        self.fix_e(self.coset_of[x])
    }

    /// Eigenvalues of a coset on E* as field elements, paired with degrees.
    pub fn epsilon_values(&self, c: usize) -> Vec<(Cyclotomic, u32)> {
        let n = self.g.conductor();
        self.epsilon[c]
            .iter()
            .map(|&(k, d)| (Cyclotomic::root_of_unity(n, k as i64), d))
            .collect()
    }

    /// Number of elements of each G-class in a coset, as (class, count).
    pub fn coset_class_counts(&self, c: usize) -> Vec<(usize, usize)> {
        let rep = self.coset_reps[c];
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &x in &self.subgroup.elements {
            *counts.entry(self.g.class_of(self.g.mul(rep, x))).or_default() += 1;
        }
        let mut v: Vec<(usize, usize)> = counts.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// |N| times the numerator of the coset Molien series over (1 - x^n)^r.
    fn coset_molien_numerator(&self, c: usize, numerators: &mut HashMap<usize, RingSeries>) -> RingSeries {
        let g = self.g;
        let n = g.conductor();
        let top = g.rank() as u32 * (n - 1);
        let mut acc = RingSeries::zero(n, top);
        for (class, count) in self.coset_class_counts(c) {
            let num = numerators.entry(class).or_insert_with(|| {
                let mut s = RingSeries::one(n, top);
                for (k, m) in dual_spectrum(n, g.class_spectrum(class)) {
                    for _ in 0..m {
                        s.mul_geometric(k as i64, 1);
                        s.mul_binomial(0, n as usize, -1);
                    }
                }
                s
            });
            acc.add_scaled(num, count as i64);
        }
        acc
    }

    /// The coset Molien series (1/|N|) sum_n 1/det(1 - x ng|V*) as an explicit rational
    /// function with denominator (1 - x^n)^r, n the conductor.
    pub fn coset_molien(&self, c: usize, numerators: &mut HashMap<usize, RingSeries>) -> Result<UniRational<Cyclotomic>> {
        let g = self.g;
        let n = g.conductor();
        let r = g.rank();
        let acc = self.coset_molien_numerator(c, numerators);
        let num = acc.field_coeffs(self.subgroup.order() as i64);
        // (1 - x^n)^r
        let mut den = vec![Cyclotomic::zero(n); r * n as usize + 1];
        let mut binom = 1i64;
        for i in 0..=r {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            den[i * n as usize] = Cyclotomic::from_int(n, sign * binom);
            binom = binom * (r - i) as i64 / (i as i64 + 1);
        }
        UniRational::new(num, den)
    }

    /// dim of the fixed space on E from the pole order at x = 1 of the coset Molien series.
    pub fn fix_e_by_pole(&self, c: usize, numerators: &mut HashMap<usize, RingSeries>) -> Result<usize> {
        let num = self.coset_molien_numerator(c, numerators);
        let p = match num.mult_at_one() {
            Some(k) => self.g.rank() as i64 - k as i64,
            None => i64::MIN,
        };
        usize::try_from(p).map_err(|_| Error::Invalid(format!("coset Molien series has pole order {p}")))
    }

    /// Both fixed-space computations for every coset, as (by matrix, by pole order).
    pub fn fix_e_both(&self) -> Result<Vec<(usize, usize)>> {
        let mut cache = HashMap::new();
        (0..self.cosets())
            .map(|c| Ok((self.fix_e(c), self.fix_e_by_pole(c, &mut cache)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn g(s: &str) -> ReflectionGroup {
        ReflectionGroup::build(&s.parse::<GroupSpec>().unwrap()).unwrap()
    }

    #[test]
    fn subgroup_spec_parsing() {
        assert_eq!("all".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::All);
        assert_eq!("classes=1,0".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::Classes(vec![0, 1]));
        assert_eq!("trivial".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::Trivial);
        assert!("nope".parse::<SubgroupSpec>().is_err());
    }

    #[test]
    fn b2_has_four_normal_reflection_subgroups() {
        let w = g("G(2,1,2)");
        let subs = normal_reflection_subgroups(&w).unwrap();
        let orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 4, 4, 8]);
    }

    #[test]
    fn b2_quotient_by_diagonal_reflections() {
        let w = g("G(2,1,2)");
        let n = subgroup_from_classes(&w, &[0]).unwrap();
        assert_eq!(n.order(), 4);
        let q = build_quotient(&w, &n).unwrap();
        assert_eq!(q.e_star.render(), vec!["x1^2", "x2^2"]);
        assert_eq!(q.h.order(), 2);
        assert_eq!(q.exponents.pairs, vec![(0, 1), (2, 1)]);
        assert_eq!(q.exponents.d_h, vec![1, 2]);
        assert_eq!(q.fix_e(1), 1);
        let eps: Vec<(String, u32)> = q.epsilon_values(1).into_iter().map(|(e, d)| (e.to_string(), d)).collect();
        assert_eq!(eps, vec![("1".to_string(), 2), ("-1".to_string(), 2)]);
        for (a, b) in q.fix_e_both().unwrap() {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn f4_mod_d4() {
        let w = g("ST28");
        let subs = normal_reflection_subgroups(&w).unwrap();
        let d4 = subs.iter().find(|s| s.order() == 192).expect("D4 inside F4");
        let q = build_quotient(&w, d4).unwrap();
        assert_eq!(q.exponents.d_h, vec![1, 1, 2, 3]);
        assert_eq!(q.exponents.e_g_e, vec![0, 0, 4, 8]);
        let mut e_n: Vec<u32> = q.exponents.pairs.iter().map(|p| p.1).collect();
        e_n.sort_unstable();
        assert_eq!(e_n, vec![1, 3, 3, 5]);
    }

    #[test]
    fn st8_mod_g422() {
        let w = g("ST8");
        let subs = normal_reflection_subgroups(&w).unwrap();
        let n = subs.iter().find(|s| s.order() == 16).expect("G(4,2,2) inside ST8");
        let q = build_quotient(&w, n).unwrap();
        assert_eq!(q.h.order(), 6);
        for (a, b) in q.fix_e_both().unwrap() {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn trivial_and_full_quotients() {
        let w = g("G(3,1,2)");
        let t = subgroup_from_classes(&w, &[]).unwrap();
        let q = build_quotient(&w, &t).unwrap();
        assert_eq!(q.h.order(), w.order());
        assert_eq!(q.exponents.e_h_e, w.exponents().unwrap());
        let all = select_subgroup(&w, &SubgroupSpec::All).unwrap();
        let q = build_quotient(&w, &all).unwrap();
        assert_eq!(q.h.order(), 1);
        assert!(q.exponents.pairs.iter().all(|p| p.0 == 0));
        assert_eq!(q.fix_e(0), 2);
    }

    #[test]
    fn ring_pole_order_matches_field_pole_order() {
        for spec in ["G(4,2,2)", "G(3,1,2)", "ST4"] {
            let g = g(spec);
            for sub in normal_reflection_subgroups(&g).unwrap() {
                let qd = build_quotient(&g, &sub).unwrap();
                let mut cache = HashMap::new();
                for c in 0..qd.cosets() {
                    let field = qd.coset_molien(c, &mut cache).unwrap().pole_order_at_one();
                    assert_eq!(qd.fix_e_by_pole(c, &mut cache).unwrap() as i64, field);
                }
            }
        }
    }
}
