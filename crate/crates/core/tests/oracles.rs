//! Values recomputed from scratch: G(m,p,r) enumerated as (permutation, exponent
//! vector) pairs, fixed spaces counted from cycle sums.

use std::collections::BTreeMap;

use reflquot::quotient::{build_quotient, normal_reflection_subgroups};
use reflquot::theorems::{fix_polynomial, main_lhs};
use reflquot::{GroupSpec, ReflectionGroup};

/// Element: x_i -> zeta^{a_i} x_{perm[i]}.
struct Monomial {
    perm: Vec<usize>,
    exps: Vec<u32>,
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(r - 1) {
        for pos in 0..r {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            out.push(q);
        }
    }
    out
}

fn elements(m: u32, p: u32, r: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for perm in permutations(r) {
        let mut exps = vec![0u32; r];
        loop {
            if exps.iter().sum::<u32>() % p == 0 {
                out.push(Monomial { perm: perm.clone(), exps: exps.clone() });
            }
            let mut i = 0;
            while i < r {
                exps[i] += 1;
                if exps[i] < m {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
        }
    }
    out
}

/// Cycles whose exponent sum, times `power`, is 0 mod m: the dimension of the fixed
/// space of the element with every entry raised to `power`.
fn fixed_dim(x: &Monomial, m: u32, power: u32) -> u32 {
    let r = x.perm.len();
    let mut seen = vec![false; r];
    let mut dim = 0;
    for s in 0..r {
        if seen[s] {
            continue;
        }
        let mut sum = 0u32;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            sum += x.exps[i];
            i = x.perm[i];
        }
        if (sum * power).is_multiple_of(m) {
            dim += 1;
        }
    }
    dim
}

fn build(m: u32, p: u32, r: u32) -> ReflectionGroup {
    ReflectionGroup::build(&GroupSpec::imprimitive(m, p, r).unwrap()).unwrap()
}

fn int_terms(p: &reflquot::poly::MultiPoly) -> BTreeMap<Vec<u32>, i64> {
    p.terms()
        .iter()
        .map(|(e, c)| (e.clone(), c.to_string().parse().expect("integer coefficient")))
        .collect()
}

const SMALL: [(u32, u32, u32); 12] = [
    (1, 1, 2),
    (1, 1, 4),
    (2, 1, 2),
    (2, 2, 3),
    (3, 1, 2),
    (3, 3, 3),
    (4, 2, 2),
    (4, 4, 3),
    (5, 1, 2),
    (6, 2, 2),
    (6, 3, 3),
    (2, 1, 4),
];

#[test]
fn orders_reflections_and_fixed_point_polynomials() {
    for (m, p, r) in SMALL {
        let g = build(m, p, r);
        let els = elements(m, p, r as usize);
        assert_eq!(g.order(), els.len(), "G({m},{p},{r})");
        let mut want: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for x in &els {
            *want.entry(vec![fixed_dim(x, m, 1)]).or_default() += 1;
        }
        assert_eq!(int_terms(&fix_polynomial(&g)), want, "G({m},{p},{r})");
        let refl = els.iter().filter(|x| fixed_dim(x, m, 1) == r - 1).count();
        assert_eq!(g.reflections().len(), refl, "G({m},{p},{r})");
    }
}

#[test]
fn degrees_of_the_imprimitive_family() {
    for (m, p, r) in SMALL {
        if m == 1 {
            continue;
        }
        let g = build(m, p, r);
        let mut want: Vec<u32> = (1..r).map(|i| i * m).collect();
        want.push(r * m / p);
        want.sort_unstable();
        assert_eq!(g.degrees().unwrap(), want, "G({m},{p},{r})");
    }
}

#[test]
fn torus_quotients_against_entry_powers() {
    // G(m,1,r) / (C_d)^r acts on x_i^d as G(m/d,1,r): entries raised to the d-th power.
    for (m, r) in [(2, 2), (4, 2), (6, 2), (3, 2), (4, 3), (2, 3)] {
        let g = build(m, 1, r);
        let els = elements(m, 1, r as usize);
        for d in (2..=m).filter(|d| m % d == 0) {
            let subs = normal_reflection_subgroups(&g).unwrap();
            let torus = subs
                .iter()
                .find(|s| {
                    s.order() == d.pow(r) as usize
                        && s.elements.iter().all(|&x| {
                            let a = g.element(x);
                            (0..a.rows()).all(|i| (0..a.rows()).all(|j| i == j || a.get(i, j).is_zero()))
                        })
                })
                .unwrap_or_else(|| panic!("no torus (C{d})^{r} in G({m},1,{r})"));
            let qd = build_quotient(&g, torus).unwrap();
            let mut want: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
            for x in &els {
                *want.entry(vec![fixed_dim(x, m, 1), fixed_dim(x, m, d)]).or_default() += 1;
            }
            assert_eq!(int_terms(&main_lhs(&qd)), want, "G({m},1,{r}) mod (C{d})^{r}");
            let e = m / d;
            let want_h: Vec<u32> = (1..=r).map(|i| i * e).collect();
            assert_eq!(qd.exponents.d_h, want_h, "G({m},1,{r}) mod (C{d})^{r}");
            assert_eq!(qd.exponents.d_n, vec![d; r as usize]);
        }
    }
}

#[test]
fn normal_subgroups_of_small_imprimitive_groups() {
    // by hand: tori (C_d)^r and the subgroups G(m,pd,r), deduplicated
    for (m, p, r) in [(2, 1, 3), (3, 1, 3), (4, 2, 3), (2, 2, 4)] {
        let g = build(m, p, r);
        let subs = normal_reflection_subgroups(&g).unwrap();
        let orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        let expected: Vec<usize> = match (m, p, r) {
            (2, 1, 3) => vec![1, 8, 24, 48],
            (3, 1, 3) => vec![1, 27, 54, 162],
            (4, 2, 3) => vec![1, 8, 96, 192],
            (2, 2, 4) => vec![1, 192],
            _ => unreachable!(),
        };
        assert_eq!(orders, expected, "G({m},{p},{r})");
    }
}
