//! Exact checks of the fixed-space generating functions, degree numerology, coset
//! series and Galois-twisted identities. Every check returns a report holding both
//! sides in canonical form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, ReflectionGroup};
use crate::invariants::{dual_spectrum, fake_degrees_twisted, fake_degrees_with, os_space, spectrum_series, to_ring};
use crate::matrix::CycMatrix;
use crate::poly::{Coeff, MultiPoly, TruncSeries};
use crate::quotient::{generated_normal_subgroup, normal_reflection_subgroups, ExponentData, QuotientData};
use crate::rational::Rational;
use crate::ringseries::{Bigraded, RingElem, RingPoly2, RingSeries};

pub const SCHEMA: u32 = 1;

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub theorem: String,
    pub params: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
    pub millis: u64,
}

impl VerificationReport {
    fn new(theorem: Theorem, params: &[(&str, String)]) -> VerificationReport {
        VerificationReport {
            schema: SCHEMA,
            theorem: theorem.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            lhs: String::new(),
            rhs: String::new(),
            pass: false,
            witness: None,
            details: BTreeMap::new(),
            millis: 0,
        }
    }

    fn detail(&mut self, key: &str, value: impl Into<String>) {
        self.details.insert(key.to_string(), value.into());
    }

    fn polys<C: Coeff>(&mut self, lhs: &MultiPoly<C>, rhs: &MultiPoly<C>) {
        self.lhs = lhs.render();
        self.rhs = rhs.render();
        self.witness = lhs.first_difference(rhs);
        self.pass = self.witness.is_none();
    }

    fn series<C: Coeff>(&mut self, lhs: &TruncSeries<C>, rhs: &TruncSeries<C>) {
        self.lhs = lhs.render();
        self.rhs = rhs.render();
        self.witness = lhs.first_difference(rhs);
        self.pass = self.witness.is_none() && lhs.bounds() == rhs.bounds();
    }

    /// Marks the report failed with a reason, keeping any earlier witness.
    fn fail(&mut self, why: impl Into<String>) {
        self.pass = false;
        let why = why.into();
        self.witness = Some(match self.witness.take() {
            Some(w) => format!("{w}; {why}"),
            None => why,
        });
    }

    fn done(mut self, t0: Instant) -> VerificationReport {
        self.millis = t0.elapsed().as_millis() as u64;
        self
    }
}

/// The identities that can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    ShephardTodd,
    Solomon,
    Numerology,
    Main,
    Bigraded,
    Coset,
    CosetSum,
    OrlikSolomon,
    MainTwisted,
    Factorizing,
    Classification,
}

impl Theorem {
    pub const ALL: [Theorem; 11] = [
        Theorem::ShephardTodd,
        Theorem::Solomon,
        Theorem::Numerology,
        Theorem::Main,
        Theorem::Bigraded,
        Theorem::Coset,
        Theorem::CosetSum,
        Theorem::OrlikSolomon,
        Theorem::MainTwisted,
        Theorem::Factorizing,
        Theorem::Classification,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::ShephardTodd => "shephard-todd",
            Theorem::Solomon => "solomon",
            Theorem::Numerology => "numerology",
            Theorem::Main => "main",
            Theorem::Bigraded => "bigraded",
            Theorem::Coset => "coset",
            Theorem::CosetSum => "coset-sum",
            Theorem::OrlikSolomon => "orlik-solomon",
            Theorem::MainTwisted => "main-twisted",
            Theorem::Factorizing => "factorizing",
            Theorem::Classification => "classification",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Theorem> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theorem '{s}'")))
    }
}

const QT: [&str; 2] = ["q", "t"];
const Q: [&str; 1] = ["q"];

fn list(v: &[u32]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

fn group_params(g: &ReflectionGroup) -> Vec<(&'static str, String)> {
    vec![("group", g.label().to_string())]
}

fn pair_params(qd: &QuotientData) -> Vec<(&'static str, String)> {
    vec![("group", qd.g.label().to_string()), ("subgroup", qd.subgroup.describe())]
}

/// prod (q + e_i).
fn shifted_product(e: &[u32]) -> MultiPoly {
    let q = MultiPoly::var(&Q, "q");
    let f: Vec<MultiPoly> = e.iter().map(|&x| q.add(&MultiPoly::constant(&Q, x as i64))).collect();
    MultiPoly::product(&Q, &f)
}

/// prod (q t + b t + a) over pairs (a, b).
fn main_product(pairs: &[(u32, u32)]) -> MultiPoly {
    let q = MultiPoly::var(&QT, "q");
    let t = MultiPoly::var(&QT, "t");
    let qt = q.mul(&t);
    let f: Vec<MultiPoly> = pairs
        .iter()
        .map(|&(a, b)| {
            qt.add(&t.scale(&Rational::from_int(b as i64)))
                .add(&MultiPoly::constant(&QT, a as i64))
        })
        .collect();
    MultiPoly::product(&QT, &f)
}

/// Sum over G of q^fix(g).
pub fn fix_polynomial(g: &ReflectionGroup) -> MultiPoly {
    let mut p = MultiPoly::zero(&Q);
    for class in g.classes() {
        p.add_term(vec![g.fix(class[0]) as u32], Rational::from_int(class.len() as i64));
    }
    p
}

pub fn verify_shephard_todd(g: &ReflectionGroup) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new(Theorem::ShephardTodd, &group_params(g));
    let e = g.exponents()?;
    rep.polys(&fix_polynomial(g), &shifted_product(&e));
    rep.detail("exponents", list(&e));
    Ok(rep.done(t0))
}

pub fn verify_solomon(g: &ReflectionGroup, bound: Option<u32>) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let d = g.degrees()?;
    let r = g.rank() as u32;
    let bound = bound.unwrap_or_else(|| d.iter().sum());
    let mut params = group_params(g);
    params.push(("bound", bound.to_string()));
    let mut rep = VerificationReport::new(Theorem::Solomon, &params);
    let n = g.conductor();
    let mut acc = Bigraded::new(n, bound);
    for (size, sp) in g.class_data() {
        let dual = dual_spectrum(n, sp);
        let mut num = RingPoly2::one(n);
        for &(k, m) in &dual {
            for _ in 0..m {
                num.mul_factor(k as i64, 0);
            }
        }
        acc.add_product(&num.scaled(size as i64), &spectrum_series(n, &dual, bound));
    }
    let full = acc.to_series(g.order() as i64, 0, r)?;
    let vars = ["q", "u"];
    let bounds = [bound, r];
    let mut lhs = TruncSeries::zero(&vars, &bounds);
    for (e, c) in full.terms() {
        lhs.add_term(vec![e[0], e[2]], c.clone());
    }
    let mut rhs = TruncSeries::one(&vars, &bounds);
    for &di in &d {
        let mut f = MultiPoly::constant(&vars, 1);
        f.add_term(vec![di - 1, 1], Rational::from_int(1));
        rhs = rhs
            .mul(&TruncSeries::from_poly(&f, &bounds))
            .mul(&TruncSeries::geometric(&vars, &bounds, "q", di));
    }
    rep.series(&lhs, &rhs);
    Ok(rep.done(t0))
}

/// Coefficients of det(1 + u A) in u, as group-ring elements.
fn det_one_plus_u(a: &CycMatrix, n: u32) -> Result<Vec<RingElem>> {
    let neg = a.scale(&Cyclotomic::from_int(a.conductor(), -1));
    neg.det_one_minus_xg_dense().iter().map(|c| to_ring(c, n)).collect()
}

fn block_of(m: &CycMatrix, start: usize, len: usize) -> CycMatrix {
    let rows = (start..start + len)
        .map(|i| (start..start + len).map(|j| m.get(i, j).clone()).collect())
        .collect();
    CycMatrix::from_rows(rows)
}

/// prod over blocks of det(1 + u y^(d-1) A_d) for a matrix on E*.
fn e_star_numerator(qd: &QuotientData, m: &CycMatrix) -> Result<RingPoly2> {
    let n = qd.g.conductor();
    let mut num = RingPoly2::one(n);
    let mut off = 0;
    for b in &qd.e_star.blocks {
        let coeffs = det_one_plus_u(&block_of(m, off, b.dim()), n)?;
        num.mul_poly(&coeffs, b.degree - 1);
        off += b.dim();
    }
    Ok(num)
}

fn product_series(pairs: &[(u32, u32)], degrees: &[u32], bounds: &[u32; 3]) -> TruncSeries {
    let vars = ["x", "y", "u"];
    let mut s = TruncSeries::one(&vars, bounds);
    for &(a, b) in pairs {
        let mut f = MultiPoly::constant(&vars, 1);
        f.add_term(vec![a, b, 1], Rational::from_int(1));
        s = s.mul(&TruncSeries::from_poly(&f, bounds));
    }
    for &d in degrees {
        s = s.mul(&TruncSeries::geometric(&vars, bounds, "x", d));
    }
    s
}

pub fn verify_bigraded_series(qd: &QuotientData, bound: Option<u32>) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let g = qd.g;
    let ex = &qd.exponents;
    let xb = bound.unwrap_or_else(|| ex.d_g.iter().sum());
    let yb: u32 = ex.e_n_v.iter().sum();
    let ub = g.rank() as u32;
    let mut params = pair_params(qd);
    params.push(("bound", xb.to_string()));
    let mut rep = VerificationReport::new(Theorem::Bigraded, &params);
    let n = g.conductor();
    let mut acc = Bigraded::new(n, xb);
    for (ci, class) in g.classes().iter().enumerate() {
        let m = &qd.h_matrices[qd.coset_of[class[0]]];
        let num = e_star_numerator(qd, m)?;
        let s = spectrum_series(n, &dual_spectrum(n, g.class_spectrum(ci)), xb);
        acc.add_product(&num.scaled(class.len() as i64), &s);
    }
    let lhs = acc.to_series(g.order() as i64, yb, ub)?;
    let rhs = product_series(&ex.pairs, &ex.d_g, &[xb, yb, ub]);
    rep.series(&lhs, &rhs);
    rep.detail("pairs", format!("{:?}", ex.pairs));
    Ok(rep.done(t0))
}

fn coset_params(qd: &QuotientData, c: usize) -> Vec<(&'static str, String)> {
    let mut p = pair_params(qd);
    p.push(("coset", c.to_string()));
    p
}

fn render_epsilon(qd: &QuotientData, c: usize) -> String {
    let v: Vec<String> = qd
        .epsilon_values(c)
        .into_iter()
        .map(|(e, d)| format!("({e}, {d})"))
        .collect();
    v.join(" ")
}

pub fn verify_coset(qd: &QuotientData, c: usize, bound: Option<u32>) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let g = qd.g;
    let ex = &qd.exponents;
    if c >= qd.cosets() {
        return Err(Error::Invalid(format!("coset {c} out of range ({} cosets)", qd.cosets())));
    }
    let xb = bound.unwrap_or_else(|| ex.d_n.iter().sum::<u32>().max(2 * ex.d_n.iter().max().copied().unwrap_or(1)));
    let yb: u32 = ex.e_n_v.iter().sum();
    let ub = g.rank() as u32;
    let mut params = coset_params(qd, c);
    params.push(("bound", xb.to_string()));
    let mut rep = VerificationReport::new(Theorem::Coset, &params);
    let n = g.conductor();
    let num = e_star_numerator(qd, &qd.h_matrices[c])?;
    let mut acc = Bigraded::new(n, xb);
    for (class, count) in qd.coset_class_counts(c) {
        let s = spectrum_series(n, &dual_spectrum(n, g.class_spectrum(class)), xb);
        acc.add_product(&num.scaled(count as i64), &s);
    }
    let lhs = acc.to_field_series(qd.subgroup.order() as i64, yb, ub);
    let mut rnum = RingPoly2::one(n);
    let mut rser = RingSeries::one(n, xb);
    for &(k, d) in &qd.epsilon[c] {
        rnum.mul_factor(k as i64, d - 1);
        rser.mul_geometric(k as i64, d as usize);
    }
    let mut racc = Bigraded::new(n, xb);
    racc.add_product(&rnum, &rser);
    let rhs = racc.to_field_series(1, yb, ub);
    rep.series(&lhs, &rhs);
    rep.detail("epsilon", render_epsilon(qd, c));
    Ok(rep.done(t0))
}

/// Sum over the coset of q^fix.
fn coset_fix_polynomial(qd: &QuotientData, c: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(&Q);
    for (class, count) in qd.coset_class_counts(c) {
        let fix = qd.g.fix(qd.g.classes()[class][0]);
        p.add_term(vec![fix as u32], Rational::from_int(count as i64));
    }
    p
}

pub fn verify_coset_sum(qd: &QuotientData, c: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    if c >= qd.cosets() {
        return Err(Error::Invalid(format!("coset {c} out of range ({} cosets)", qd.cosets())));
    }
    let mut rep = VerificationReport::new(Theorem::CosetSum, &coset_params(qd, c));
    let lhs = coset_fix_polynomial(qd, c);
    let mut fixed = Vec::new();
    let mut moved = 1i64;
    for &(k, d) in &qd.epsilon[c] {
        if k == 0 {
            fixed.push(d - 1);
        } else {
            moved *= d as i64;
        }
    }
    let rhs = shifted_product(&fixed).scale(&Rational::from_int(moved));
    rep.polys(&lhs, &rhs);
    rep.detail("epsilon", render_epsilon(qd, c));
    Ok(rep.done(t0))
}

/// Sum over G of q^fix_V t^fix_E, element by element.
pub fn main_lhs(qd: &QuotientData) -> MultiPoly {
    let g = qd.g;
    let fix_e: Vec<usize> = (0..qd.cosets()).map(|c| qd.fix_e(c)).collect();
    let mut counts: HashMap<(usize, usize), i64> = HashMap::new();
    for x in 0..g.order() {
        *counts.entry((g.fix(x), fix_e[qd.coset_of[x]])).or_default() += 1;
    }
    let mut p = MultiPoly::zero(&QT);
    for ((a, b), k) in counts {
        p.add_term(vec![a as u32, b as u32], Rational::from_int(k));
    }
    p
}

/// The same sum assembled coset by coset from the coset sums.
pub fn main_lhs_by_cosets(qd: &QuotientData) -> MultiPoly {
    let mut p = MultiPoly::zero(&QT);
    for c in 0..qd.cosets() {
        let fe = qd.fix_e(c) as u32;
        for (e, v) in coset_fix_polynomial(qd, c).terms() {
            p.add_term(vec![e[0], fe], v.clone());
        }
    }
    p
}

pub fn verify_main(qd: &QuotientData) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new(Theorem::Main, &pair_params(qd));
    let lhs = main_lhs(qd);
    let rhs = main_product(&qd.exponents.pairs);
    rep.polys(&lhs, &rhs);
    rep.detail("pairs", format!("{:?}", qd.exponents.pairs));
    if main_lhs_by_cosets(qd) != lhs {
        rep.fail("coset-by-coset assembly differs from the element sum");
    }
    Ok(rep.done(t0))
}

/// One common indexing of all exponent data: per i the tuple
/// (e^N(V), e^G(E), e^G(V), d^N, d^H, d^G, e^H(E)).
pub type Indexing = Vec<[u32; 7]>;

fn take(pool: &mut Vec<u32>, v: u32) -> bool {
    match pool.iter().position(|&x| x == v) {
        Some(i) => {
            pool.swap_remove(i);
            true
        }
        None => false,
    }
}

fn search(
    i: usize,
    ex: &ExponentData,
    pools: &mut [Vec<u32>; 5],
    out: &mut Indexing,
) -> bool {
    if i == ex.pairs.len() {
        return true;
    }
    let (a, b) = ex.pairs[i];
    let dn = b + 1;
    let egv = a + b;
    let dg = egv + 1;
    let snapshot = pools.clone();
    if !(take(&mut pools[0], dn) && take(&mut pools[1], egv) && take(&mut pools[2], dg)) {
        *pools = snapshot;
        return false;
    }
    let mut dh_opts = pools[3].clone();
    dh_opts.sort_unstable();
    dh_opts.dedup();
    for dh in dh_opts {
        if dn * dh != dg {
            continue;
        }
        let mut eh_opts = pools[4].clone();
        eh_opts.sort_unstable();
        eh_opts.dedup();
        for eh in eh_opts {
            if dn * eh != a {
                continue;
            }
            let inner = pools.clone();
            take(&mut pools[3], dh);
            take(&mut pools[4], eh);
            out.push([b, a, egv, dn, dh, dg, eh]);
            if search(i + 1, ex, pools, out) {
                return true;
            }
            out.pop();
            *pools = inner;
        }
    }
    *pools = snapshot;
    false
}

/// Searches for an indexing satisfying the three numerology identities.
pub fn find_indexing(ex: &ExponentData) -> Option<Indexing> {
    let mut pools = [ex.d_n.clone(), ex.e_g_v.clone(), ex.d_g.clone(), ex.d_h.clone(), ex.e_h_e.clone()];
    let mut out = Vec::new();
    search(0, ex, &mut pools, &mut out).then_some(out)
}

pub fn verify_numerology(qd: &QuotientData) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new(Theorem::Numerology, &pair_params(qd));
    let ex = &qd.exponents;
    match find_indexing(ex) {
        Some(ix) => {
            let col = |k: usize| -> Vec<u32> { ix.iter().map(|t| t[k]).collect() };
            let (en, eg, egv, dn, dh, dg, eh) = (col(0), col(1), col(2), col(3), col(4), col(5), col(6));
            let sum: Vec<u32> = en.iter().zip(&eg).map(|(a, b)| a + b).collect();
            let prod: Vec<u32> = dn.iter().zip(&dh).map(|(a, b)| a * b).collect();
            let prod2: Vec<u32> = dn.iter().zip(&eh).map(|(a, b)| a * b).collect();
            rep.lhs = format!(
                "{}+{}; {}*{}; {}*{}",
                list(&en),
                list(&eg),
                list(&dn),
                list(&dh),
                list(&dn),
                list(&eh)
            );
            rep.rhs = format!("{}; {}; {}", list(&egv), list(&dg), list(&eg));
            rep.detail("evaluated", format!("{}; {}; {}", list(&sum), list(&prod), list(&prod2)));
            rep.pass = sum == egv && prod == dg && prod2 == eg;
            if !rep.pass {
                rep.witness = Some("indexing does not satisfy the identities".into());
            }
        }
        None => {
            rep.lhs = format!("pairs {:?}", ex.pairs);
            rep.rhs = format!(
                "e^G(V)={} d^N={} d^H={} d^G={} e^H(E)={}",
                list(&ex.e_g_v),
                list(&ex.d_n),
                list(&ex.d_h),
                list(&ex.d_g),
                list(&ex.e_h_e)
            );
            rep.fail("no common indexing exists");
        }
    }
    Ok(rep.done(t0))
}

/// prod over eigenvalues lambda != 1 of (1 - lambda^k)/(1 - lambda), for one spectrum.
fn twist_weight(n: u32, spectrum: &[(u32, usize)], k: i64) -> Result<Cyclotomic> {
    let one = Cyclotomic::one(n);
    let mut w = one.clone();
    for &(e, m) in spectrum {
        if e == 0 {
            continue;
        }
        let lam = Cyclotomic::root_of_unity(n, e as i64);
        let lam_s = Cyclotomic::root_of_unity(n, e as i64 * k);
        let f = (&one - &lam_s).checked_div(&(&one - &lam))?;
        for _ in 0..m {
            w = &w * &f;
        }
    }
    Ok(w)
}

fn check_unit(g: &ReflectionGroup, k: i64) -> Result<i64> {
    let n = g.conductor() as i64;
    if num_integer::Integer::gcd(&k, &n) != 1 {
        return Err(Error::Galois { k, conductor: n as u32 });
    }
    Ok(k.rem_euclid(n.max(1)))
}

/// Converts a polynomial with field coefficients to rational ones.
fn rational_poly(p: &MultiPoly<Cyclotomic>, vars: &[&str]) -> std::result::Result<MultiPoly, String> {
    let mut out = MultiPoly::zero(vars);
    for (e, c) in p.terms() {
        match c.as_rational() {
            Some(r) => out.add_term(e.clone(), r.clone()),
            None => return Err(format!("coefficient {} is not rational", c)),
        }
    }
    Ok(out)
}

pub fn verify_orlik_solomon(g: &ReflectionGroup, k: i64) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let k = check_unit(g, k)?;
    let mut params = group_params(g);
    params.push(("sigma", k.to_string()));
    let mut rep = VerificationReport::new(Theorem::OrlikSolomon, &params);
    let n = g.conductor();
    let mut p: MultiPoly<Cyclotomic> = MultiPoly::zero(&Q);
    for (ci, class) in g.classes().iter().enumerate() {
        let w = twist_weight(n, g.class_spectrum(ci), k)?;
        let w = w.scale(&Rational::from_int(class.len() as i64));
        p.add_term(vec![g.fix(class[0]) as u32], w);
    }
    let e = fake_degrees_twisted(g, k)?;
    let rhs = shifted_product(&e);
    rep.detail("twisted exponents", list(&e));
    match rational_poly(&p, &Q) {
        Ok(lhs) => rep.polys(&lhs, &rhs),
        Err(why) => {
            rep.lhs = p.render();
            rep.rhs = rhs.render();
            rep.fail(why);
        }
    }
    Ok(rep.done(t0))
}

/// Pairs (e^G((U^sigma)*), e^N(V^sigma)) from the graded pieces of the twisted space.
pub fn twisted_pairs(qd: &QuotientData, k: i64) -> Result<Vec<(u32, u32)>> {
    let g = qd.g;
    let os = os_space(g, &qd.n, &qd.e_star, k)?;
    let n = g.conductor();
    let mats: Vec<CycMatrix> = g
        .classes()
        .iter()
        .map(|c| os.action_matrix(g, c[0]))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    let mut off = 0;
    for b in &os.blocks {
        let len = b.dim();
        // chi of the dual at x^-1 is the trace at x
        let a = fake_degrees_with(g, len, |x| to_ring(&block_of(&mats[g.class_of(x)], off, len).trace(), n))?;
        pairs.extend(a.into_iter().map(|a| (a, b.degree)));
        off += len;
    }
    pairs.sort_unstable();
    Ok(pairs)
}

pub fn verify_main_twisted(qd: &QuotientData, k: i64) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let g = qd.g;
    let k = check_unit(g, k)?;
    let mut params = pair_params(qd);
    params.push(("sigma", k.to_string()));
    let mut rep = VerificationReport::new(Theorem::MainTwisted, &params);
    let n = g.conductor();
    let fix_e: Vec<usize> = (0..qd.cosets()).map(|c| qd.fix_e(c)).collect();
    let mut counts: HashMap<(usize, usize), i64> = HashMap::new();
    for x in 0..g.order() {
        *counts.entry((g.class_of(x), fix_e[qd.coset_of[x]])).or_default() += 1;
    }
    let mut weights: HashMap<usize, Cyclotomic> = HashMap::new();
    let mut p: MultiPoly<Cyclotomic> = MultiPoly::zero(&QT);
    let mut keys: Vec<_> = counts.into_iter().collect();
    keys.sort_unstable();
    for ((class, fe), cnt) in keys {
        if let std::collections::hash_map::Entry::Vacant(e) = weights.entry(class) {
            e.insert(twist_weight(n, g.class_spectrum(class), k)?);
        }
        let w = weights[&class].scale(&Rational::from_int(cnt));
        p.add_term(vec![g.fix(g.classes()[class][0]) as u32, fe as u32], w);
    }
    let pairs = twisted_pairs(qd, k)?;
    let rhs = main_product(&pairs);
    rep.detail("pairs", format!("{pairs:?}"));
    match rational_poly(&p, &QT) {
        Ok(lhs) => rep.polys(&lhs, &rhs),
        Err(why) => {
            rep.lhs = p.render();
            rep.rhs = rhs.render();
            rep.fail(why);
        }
    }
    Ok(rep.done(t0))
}

/// Checks the factorizing shape for the subgroup generated by one orbit of hyperplanes.
pub fn verify_factorizing(g: &ReflectionGroup, orbit: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let orbits = g.hyperplane_orbits();
    if orbit >= orbits.len() {
        return Err(Error::Invalid(format!("{} has {} hyperplane orbits, no orbit {orbit}", g.label(), orbits.len())));
    }
    let mut params = group_params(g);
    params.push(("orbit", orbit.to_string()));
    let mut rep = VerificationReport::new(Theorem::Factorizing, &params);
    let sub = generated_normal_subgroup(g, &g.orbit_reflections(orbit))?;
    let qd = crate::quotient::build_quotient(g, &sub)?;
    let main = verify_main(&qd)?;
    rep.lhs = main.lhs.clone();
    rep.rhs = main.rhs.clone();
    rep.pass = main.pass;
    rep.witness = main.witness.clone();
    rep.detail("subgroup", sub.describe());
    let mut m: Vec<u32> = qd.exponents.pairs.iter().map(|p| p.0).collect();
    let mut sums: Vec<u32> = qd.exponents.pairs.iter().map(|p| p.0 + p.1).collect();
    m.sort_unstable();
    sums.sort_unstable();
    rep.detail("m", list(&m));
    if qd.e_star.dim() != g.rank() {
        rep.fail(format!("E has dimension {}", qd.e_star.dim()));
    }
    if sums != qd.exponents.e_g_v {
        rep.fail(format!("(e_i - m_i) + m_i gives {}, not the exponents {}", list(&sums), list(&qd.exponents.e_g_v)));
    }
    Ok(rep.done(t0))
}

/// Elements of G(ab,b,r) that are diagonal with entries of order dividing d.
fn diagonal_torus(g: &ReflectionGroup, d: u32) -> Vec<usize> {
    (0..g.order())
        .filter(|&x| {
            let m = g.element(x);
            let r = m.rows();
            (0..r).all(|i| (0..r).all(|j| if i == j { m.get(i, j).pow(d as u64).is_one() } else { m.get(i, j).is_zero() }))
        })
        .collect()
}

/// Elements of G(ab,b,r) whose nonzero entries multiply to an (a/d)-th root of unity.
fn entry_product_subgroup(g: &ReflectionGroup, e: u32) -> Vec<usize> {
    (0..g.order())
        .filter(|&x| {
            let m = g.element(x);
            let r = m.rows();
            let mut p = Cyclotomic::one(m.conductor());
            for i in 0..r {
                for j in 0..r {
                    if !m.get(i, j).is_zero() {
                        p = &p * m.get(i, j);
                    }
                }
            }
            p.pow(e as u64).is_one()
        })
        .collect()
}

fn imprimitive_order(m: u64, p: u64, r: u64) -> u64 {
    m.pow(r as u32) * (1..=r).product::<u64>() / p
}

pub fn verify_classification(a: u32, b: u32, r: u32) -> Result<VerificationReport> {
    let t0 = Instant::now();
    if r < 3 || a == 0 || b == 0 {
        return Err(Error::Invalid("classification needs a, b >= 1 and r >= 3".into()));
    }
    let spec = GroupSpec::imprimitive(a * b, b, r)?;
    let g = ReflectionGroup::build(&spec)?;
    let params = vec![
        ("a", a.to_string()),
        ("b", b.to_string()),
        ("r", r.to_string()),
        ("group", g.label().to_string()),
    ];
    let mut rep = VerificationReport::new(Theorem::Classification, &params);
    let found = normal_reflection_subgroups(&g)?;
    let mut expected: Vec<(String, Vec<usize>)> = Vec::new();
    for d in (1..=a).filter(|d| a.is_multiple_of(*d)) {
        expected.push((format!("(C{d})^{r}"), diagonal_torus(&g, d)));
        expected.push((format!("G({},{},{r})", a * b, d * b), entry_product_subgroup(&g, a / d)));
    }
    let mut names: BTreeMap<Vec<usize>, String> = BTreeMap::new();
    for (name, els) in expected {
        names.entry(els).and_modify(|n| *n = format!("{n}={name}")).or_insert(name);
    }
    let mut found_names: Vec<String> = Vec::new();
    let mut missing = Vec::new();
    for (els, name) in &names {
        if found.iter().any(|s| &s.elements == els) {
            found_names.push(format!("{name}[{}]", els.len()));
        } else {
            missing.push(name.clone());
        }
    }
    let extra: Vec<String> = found
        .iter()
        .filter(|s| !names.contains_key(&s.elements))
        .map(|s| format!("{}[{}]", s.describe(), s.order()))
        .collect();
    let mut lhs: Vec<String> = found.iter().map(|s| format!("{}[{}]", s.describe(), s.order())).collect();
    lhs.sort();
    rep.lhs = lhs.join(" ");
    rep.rhs = found_names.join(" ");
    rep.pass = missing.is_empty() && extra.is_empty();
    if !missing.is_empty() {
        rep.fail(format!("missing {}", missing.join(", ")));
    }
    if !extra.is_empty() {
        rep.fail(format!("unexpected {}", extra.join(", ")));
    }
    // quotient orders
    let go = g.order() as u64;
    for d in (1..=a).filter(|d| a.is_multiple_of(*d)) {
        let torus = d.pow(r) as u64;
        let want = imprimitive_order(((a / d) * b) as u64, b as u64, r as u64);
        if go / torus != want {
            rep.fail(format!("|G/(C{d})^{r}| = {} but |G({},{b},{r})| = {want}", go / torus, (a / d) * b));
        }
        let sub = imprimitive_order((a * b) as u64, (d * b) as u64, r as u64);
        if go / sub != d as u64 {
            rep.fail(format!("|G/G({},{},{r})| = {} instead of {d}", a * b, d * b, go / sub));
        }
    }
    Ok(rep.done(t0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{build_quotient, subgroup_from_classes};

    fn g(s: &str) -> ReflectionGroup {
        ReflectionGroup::build(&s.parse::<GroupSpec>().unwrap()).unwrap()
    }

    #[test]
    fn b2_example() {
        let w = g("G(2,1,2)");
        let n = subgroup_from_classes(&w, &[0]).unwrap();
        let qd = build_quotient(&w, &n).unwrap();
        let rep = verify_main(&qd).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.lhs, "q^2*t^2 + 2*q*t^2 + t^2 + 2*q*t + 2*t");
        let cs = verify_coset_sum(&qd, 1).unwrap();
        assert!(cs.pass);
        assert_eq!(cs.lhs, "2*q + 2");
        assert!(verify_coset(&qd, 1, None).unwrap().pass);
        assert!(verify_bigraded_series(&qd, None).unwrap().pass);
        assert!(verify_numerology(&qd).unwrap().pass);
    }

    #[test]
    fn shephard_todd_and_solomon() {
        for s in ["G(2,1,2)", "G(3,1,2)", "G(1,1,3)", "ST4"] {
            let w = g(s);
            assert!(verify_shephard_todd(&w).unwrap().pass, "{s}");
            assert!(verify_solomon(&w, None).unwrap().pass, "{s}");
        }
        assert_eq!(verify_shephard_todd(&g("G(2,1,2)")).unwrap().lhs, "q^2 + 4*q + 3");
    }

    #[test]
    fn orlik_solomon_c3() {
        let w = g("G(3,1,1)");
        let rep = verify_orlik_solomon(&w, 2).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.lhs, "q + 1");
    }

    #[test]
    fn twisted_main_small() {
        let w = g("G(4,1,2)");
        for sub in normal_reflection_subgroups(&w).unwrap() {
            let qd = build_quotient(&w, &sub).unwrap();
            let plain = verify_main(&qd).unwrap();
            let one = verify_main_twisted(&qd, 1).unwrap();
            assert_eq!((plain.lhs.clone(), plain.rhs.clone()), (one.lhs.clone(), one.rhs.clone()));
            let three = verify_main_twisted(&qd, 3).unwrap();
            assert!(three.pass, "{} {three:?}", sub.describe());
        }
    }

    #[test]
    fn classification_small() {
        let rep = verify_classification(2, 1, 3).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(verify_classification(1, 2, 3).unwrap().pass);
    }

    #[test]
    fn report_round_trip() {
        let rep = verify_shephard_todd(&g("G(2,1,2)")).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(rep, back);
    }
}
