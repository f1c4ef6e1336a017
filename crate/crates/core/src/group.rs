//! Finite complex reflection groups, fully enumerated.
//!
//! Elements are stored as permutations of a finite point set (the orbit of the
//! standard basis vectors), so products, inverses and conjugates reduce to a few
//! table lookups. Matrices are read off from the points once at build time.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::Deserialize;

use crate::cyclotomic::{euler_phi, Cyclotomic};
use crate::error::{Error, Result};
use crate::matrix::{normalize_leading, CycMatrix};
use crate::rational::Rational;

pub const DEFAULT_ELEMENT_CAP: usize = 10_000;

/// Exceptional groups with embedded generator data.
pub const SUPPORTED_EXCEPTIONAL: [u32; 10] = [4, 8, 12, 16, 19, 20, 22, 25, 26, 28];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Imprimitive { m: u32, p: u32, r: u32 },
    Exceptional(u32),
    Explicit(Vec<CycMatrix>),
}

impl GroupSpec {
    pub fn imprimitive(m: u32, p: u32, r: u32) -> Result<GroupSpec> {
        if m == 0 || p == 0 || r == 0 || !m.is_multiple_of(p) {
            return Err(Error::Parse(format!("G({m},{p},{r})")));
        }
        Ok(GroupSpec::Imprimitive { m, p, r })
    }

    /// Order predicted by the definition, for the imprimitive family.
    pub fn predicted_order(&self) -> Option<u64> {
        match *self {
            GroupSpec::Imprimitive { m, p, r } => {
                let fact: u64 = (1..=r as u64).product();
                Some((m as u64).pow(r) * fact / p as u64)
            }
            _ => None,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Imprimitive { m, p, r } => write!(f, "G({m},{p},{r})"),
            GroupSpec::Exceptional(n) => write!(f, "ST{n}"),
            GroupSpec::Explicit(g) => write!(f, "<{} generators>", g.len()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupSpec> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(s.to_string());
        if let Some(rest) = t.strip_prefix("ST").or_else(|| t.strip_prefix("st")) {
            let n: u32 = rest.parse().map_err(|_| bad())?;
            if !SUPPORTED_EXCEPTIONAL.contains(&n) {
                return Err(Error::Parse(format!("{s} (supported: ST4, ST8, ST12, ST16, ST19, ST20, ST22, ST25, ST26, ST28)")));
            }
            return Ok(GroupSpec::Exceptional(n));
        }
        let inner = t
            .strip_prefix("G(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<u32> = inner
            .split(',')
            .map(|x| x.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match parts[..] {
            [m, p, r] => GroupSpec::imprimitive(m, p, r),
            _ => Err(bad()),
        }
    }
}

#[derive(Deserialize)]
struct GenData {
    denominator: i64,
    entries: Vec<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
struct GroupData {
    st: u32,
    conductor: u32,
    order: u64,
    degrees: Vec<u32>,
    reflections: usize,
    generators: Vec<GenData>,
}

fn exceptional_data(n: u32) -> &'static str {
    match n {
        4 => include_str!("../data/st4.json"),
        8 => include_str!("../data/st8.json"),
        12 => include_str!("../data/st12.json"),
        16 => include_str!("../data/st16.json"),
        19 => include_str!("../data/st19.json"),
        20 => include_str!("../data/st20.json"),
        22 => include_str!("../data/st22.json"),
        25 => include_str!("../data/st25.json"),
        26 => include_str!("../data/st26.json"),
        28 => include_str!("../data/st28.json"),
        _ => unreachable!("unsupported exceptional group"),
    }
}

fn load_exceptional(n: u32) -> Result<(GroupData, Vec<CycMatrix>)> {
    let data: GroupData =
        serde_json::from_str(exceptional_data(n)).map_err(|e| Error::Data(format!("ST{n}: {e}")))?;
    if data.st != n {
        return Err(Error::Data(format!("ST{n}: file is labelled ST{}", data.st)));
    }
    let c = data.conductor;
    let phi = euler_phi(c);
    let mut gens = Vec::new();
    for g in &data.generators {
        let mut rows = Vec::new();
        for row in &g.entries {
            let mut out = Vec::new();
            for e in row {
                if e.len() != phi {
                    return Err(Error::Data(format!("ST{n}: entry of length {} at conductor {c}", e.len())));
                }
                let coeffs = e.iter().map(|&v| Rational::new(v, g.denominator)).collect();
                out.push(Cyclotomic::from_coeffs(c, coeffs));
            }
            rows.push(out);
        }
        gens.push(CycMatrix::from_rows(rows));
    }
    Ok((data, gens))
}

/// Union-find over `0..n`.
pub(crate) struct Dsu(Vec<usize>);

impl Dsu {
    pub(crate) fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }

    /// Components, each sorted, ordered by smallest member.
    pub(crate) fn groups(&mut self, members: impl IntoIterator<Item = usize>) -> Vec<Vec<usize>> {
        let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
        for x in members {
            let r = self.find(x);
            map.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = map.into_values().collect();
        for g in &mut out {
            g.sort_unstable();
        }
        out.sort();
        out
    }
}

fn compose(s: &[u32], g: &[u32]) -> Vec<u32> {
    g.iter().map(|&x| s[x as usize]).collect()
}

fn invert_perm(p: &[u32]) -> Vec<u32> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn perm_order(p: &[u32]) -> u32 {
    let mut seen = vec![false; p.len()];
    let mut ord = 1u32;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j] as usize;
            len += 1;
        }
        ord = ord.lcm(&len);
    }
    ord
}

fn key_of(p: &[u32], basis: &[u32]) -> Vec<u32> {
    basis.iter().map(|&b| p[b as usize]).collect()
}

/// Eigenvalue exponents of a monomial matrix read off from its cycles.
fn monomial_spectrum(g: &CycMatrix) -> Option<Vec<(u32, usize)>> {
    if !g.is_monomial() {
        return None;
    }
    let r = g.rows();
    let n = g.conductor();
    let mut target = vec![0usize; r];
    let mut expo = vec![0u32; r];
    for j in 0..r {
        let i = (0..r).find(|&i| !g.get(i, j).is_zero())?;
        target[j] = i;
        expo[j] = g.get(i, j).root_exponent()?;
    }
    let mut counts: HashMap<u32, usize> = HashMap::new();
    let mut seen = vec![false; r];
    for start in 0..r {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut s = 0u32;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            s = (s + expo[j]) % n;
            j = target[j];
            len += 1;
        }
        if !n.is_multiple_of(len) || !s.is_multiple_of(len) {
            return None;
        }
        for t in 0..len {
            *counts.entry(s / len + t * (n / len)).or_default() += 1;
        }
    }
    let mut out: Vec<(u32, usize)> = counts.into_iter().collect();
    out.sort_unstable();
    Some(out)
}

/// Normalized linear form cutting out the reflecting hyperplane of `s`.
fn hyperplane_form(s: &CycMatrix) -> Vec<Cyclotomic> {
    let r = s.rows();
    let n = s.conductor();
    let one = CycMatrix::identity(n, r).sub(s);
    let row = (0..r)
        .map(|i| one.row(i).to_vec())
        .find(|row| row.iter().any(|e| !e.is_zero()))
        .expect("a reflection differs from the identity");
    normalize_leading(row)
}

/// A finite matrix group generated by reflections, with every element enumerated.
#[derive(Debug)]
pub struct ReflectionGroup {
    spec: GroupSpec,
    label: String,
    rank: usize,
    conductor: u32,
    twist: i64,
    points: Vec<Vec<Cyclotomic>>,
    basis: Vec<u32>,
    perms: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
    matrices: Vec<CycMatrix>,
    inverses: Vec<usize>,
    orders: Vec<u32>,
    generators: Vec<usize>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    spectra: Vec<Vec<(u32, usize)>>,
    reflections: Vec<usize>,
    reflection_classes: Vec<Vec<usize>>,
    hyperplanes: Vec<Vec<Cyclotomic>>,
    hyperplane_of: HashMap<usize, usize>,
    hyperplane_orbits: Vec<Vec<usize>>,
    parent_indices: Option<Vec<usize>>,
    degrees: OnceLock<std::result::Result<Vec<u32>, Error>>,
}

/// Raw enumeration before canonical sorting.
struct Raw {
    points: Vec<Vec<Cyclotomic>>,
    basis: Vec<u32>,
    perms: Vec<Vec<u32>>,
    gen_perms: Vec<Vec<u32>>,
}

impl ReflectionGroup {
    pub fn build(spec: &GroupSpec) -> Result<ReflectionGroup> {
        Self::build_with_cap(spec, DEFAULT_ELEMENT_CAP)
    }

    pub fn build_with_cap(spec: &GroupSpec, cap: usize) -> Result<ReflectionGroup> {
        match spec {
            GroupSpec::Imprimitive { m, p, r } => {
                let raw = Self::enumerate_imprimitive(*m, *p, *r as usize, cap)?;
                Self::finish(spec.clone(), spec.to_string(), *r as usize, *m, raw)
            }
            GroupSpec::Exceptional(n) => {
                let (data, gens) = load_exceptional(*n)?;
                let rank = gens[0].rows();
                let raw = Self::closure_of_matrices(rank, &gens, cap)?;
                let g = Self::finish(spec.clone(), spec.to_string(), rank, data.conductor, raw)?;
                if g.order() as u64 != data.order || g.reflections.len() != data.reflections {
                    return Err(Error::Data(format!(
                        "ST{n}: got order {} with {} reflections, expected {} and {}",
                        g.order(),
                        g.reflections.len(),
                        data.order,
                        data.reflections
                    )));
                }
                let degs = g.degrees()?;
                if degs != data.degrees {
                    return Err(Error::Data(format!("ST{n}: degrees {degs:?}, expected {:?}", data.degrees)));
                }
                Ok(g)
            }
            GroupSpec::Explicit(gens) => {
                let rank = gens.first().map(|g| g.rows()).unwrap_or(1);
                Self::from_generators(rank, gens, "explicit", cap)
            }
        }
    }

    /// The group generated by `gens` acting on a space of dimension `rank`.
    pub fn from_generators(rank: usize, gens: &[CycMatrix], label: &str, cap: usize) -> Result<ReflectionGroup> {
        if gens.iter().any(|g| g.rows() != rank || g.cols() != rank) {
            return Err(Error::Dimension(format!("generators must be {rank}x{rank}")));
        }
        let c = gens.iter().fold(1u32, |a, g| a.lcm(&g.conductor()));
        let gens: Vec<CycMatrix> = gens.iter().map(|g| g.embed(c)).collect::<Result<_>>()?;
        let raw = Self::closure_of_matrices(rank, &gens, cap)?;
        Self::finish(GroupSpec::Explicit(gens), label.to_string(), rank, c, raw)
    }

    /// Direct enumeration of monomial matrices with entries in mu_m and entry product in mu_{m/p}.
    fn enumerate_imprimitive(m: u32, p: u32, r: usize, cap: usize) -> Result<Raw> {
        let order = GroupSpec::Imprimitive { m, p, r: r as u32 }.predicted_order().unwrap();
        if order > cap as u64 {
            return Err(Error::ElementCap(cap));
        }
        let mu = m as usize;
        let npts = mu * r;
        let act = |pi: &[usize], a: &[u32]| -> Vec<u32> {
            let mut perm = vec![0u32; npts];
            for i in 0..r {
                for k in 0..mu {
                    perm[i * mu + k] = (pi[i] * mu + (k + a[i] as usize) % mu) as u32;
                }
            }
            perm
        };
        let mut perms = Vec::with_capacity(order as usize);
        let mut pi: Vec<usize> = (0..r).collect();
        loop {
            let mut a = vec![0u32; r];
            loop {
                let s: u32 = a.iter().sum();
                if s.is_multiple_of(p) {
                    perms.push(act(&pi, &a));
                }
                let mut i = 0;
                while i < r {
                    a[i] += 1;
                    if a[i] < m {
                        break;
                    }
                    a[i] = 0;
                    i += 1;
                }
                if i == r {
                    break;
                }
            }
            if !next_permutation(&mut pi) {
                break;
            }
        }
        let mut gen_perms = Vec::new();
        let id: Vec<usize> = (0..r).collect();
        for i in 0..r.saturating_sub(1) {
            let mut pi = id.clone();
            pi.swap(i, i + 1);
            gen_perms.push(act(&pi, &vec![0; r]));
        }
        if p < m {
            let mut a = vec![0; r];
            a[0] = p;
            gen_perms.push(act(&id, &a));
        }
        if p > 1 && r >= 2 {
            let mut pi = id.clone();
            pi.swap(0, 1);
            let mut a = vec![0; r];
            a[0] = 1;
            a[1] = m - 1;
            gen_perms.push(act(&pi, &a));
        }
        // symbolic points zeta_m^k e_i, realized later at the final conductor
        let basis = (0..r).map(|i| (i * mu) as u32).collect();
        Ok(Raw { points: Vec::new(), basis, perms, gen_perms })
    }

    /// Points: orbit of the basis vectors. Elements: closure of the generator permutations.
    fn closure_of_matrices(rank: usize, gens: &[CycMatrix], cap: usize) -> Result<Raw> {
        let c = gens.first().map(|g| g.conductor()).unwrap_or(1);
        let mut points: Vec<Vec<Cyclotomic>> = Vec::new();
        let mut index: HashMap<Vec<Cyclotomic>, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..rank {
            let mut v = vec![Cyclotomic::zero(c); rank];
            v[i] = Cyclotomic::one(c);
            index.insert(v.clone(), points.len() as u32);
            points.push(v);
            queue.push_back(points.len() - 1);
        }
        let point_cap = cap.saturating_mul(rank).max(64);
        let mut images: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
        while let Some(i) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let w = g.mul_vec(&points[i]);
                let j = match index.get(&w) {
                    Some(&j) => j,
                    None => {
                        if points.len() >= point_cap {
                            return Err(Error::ElementCap(cap));
                        }
                        let j = points.len() as u32;
                        index.insert(w.clone(), j);
                        points.push(w);
                        queue.push_back(j as usize);
                        j
                    }
                };
                let im = &mut images[gi];
                if im.len() <= i {
                    im.resize(i + 1, u32::MAX);
                }
                im[i] = j;
            }
        }
        let npts = points.len();
        let gen_perms: Vec<Vec<u32>> = images
            .into_iter()
            .map(|mut im| {
                im.resize(npts, u32::MAX);
                im
            })
            .collect();
        let basis: Vec<u32> = (0..rank as u32).collect();
        let perms = closure_perms(&gen_perms, &basis, npts, cap)?;
        Ok(Raw { points, basis, perms, gen_perms })
    }

    fn finish(spec: GroupSpec, label: String, rank: usize, entry_conductor: u32, raw: Raw) -> Result<ReflectionGroup> {
        let Raw { points, basis, perms, gen_perms } = raw;
        let orders: Vec<u32> = perms.iter().map(|p| perm_order(p)).collect();
        let exponent = orders.iter().fold(1u32, |a, &o| a.lcm(&o));
        let n = entry_conductor.lcm(&exponent);
        let points: Vec<Vec<Cyclotomic>> = match &spec {
            GroupSpec::Imprimitive { m, r, .. } => {
                let (m, r) = (*m as usize, *r as usize);
                let step = (n / m as u32) as i64;
                let mut pts = Vec::with_capacity(m * r);
                for i in 0..r {
                    for k in 0..m {
                        let mut v = vec![Cyclotomic::zero(n); r];
                        v[i] = Cyclotomic::root_of_unity(n, k as i64 * step);
                        pts.push(v);
                    }
                }
                pts
            }
            _ => points
                .iter()
                .map(|v| v.iter().map(|e| e.embed(n)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
        };
        let matrix_of = |p: &[u32]| -> CycMatrix {
            let cols: Vec<&Vec<Cyclotomic>> = basis.iter().map(|&b| &points[p[b as usize] as usize]).collect();
            let rows = (0..rank).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
            CycMatrix::from_rows(rows)
        };
        let mut items: Vec<(bool, CycMatrix, Vec<u32>, u32)> = perms
            .into_iter()
            .zip(orders)
            .map(|(p, o)| {
                let m = matrix_of(&p);
                (!m.is_identity(), m, p, o)
            })
            .collect();
        items.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut matrices = Vec::with_capacity(items.len());
        let mut perms = Vec::with_capacity(items.len());
        let mut orders = Vec::with_capacity(items.len());
        for (_, m, p, o) in items {
            matrices.push(m);
            perms.push(p);
            orders.push(o);
        }
        let lookup: HashMap<Vec<u32>, usize> =
            perms.iter().enumerate().map(|(i, p)| (key_of(p, &basis), i)).collect();
        let mut generators: Vec<usize> = gen_perms
            .iter()
            .map(|g| lookup[&key_of(g, &basis)])
            .collect();
        generators.dedup();
        Self::assemble(spec, label, rank, n, points, basis, perms, lookup, matrices, orders, generators, None)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        spec: GroupSpec,
        label: String,
        rank: usize,
        conductor: u32,
        points: Vec<Vec<Cyclotomic>>,
        basis: Vec<u32>,
        perms: Vec<Vec<u32>>,
        lookup: HashMap<Vec<u32>, usize>,
        matrices: Vec<CycMatrix>,
        orders: Vec<u32>,
        generators: Vec<usize>,
        parent_indices: Option<Vec<usize>>,
    ) -> Result<ReflectionGroup> {
        let order = perms.len();
        let inverses: Vec<usize> = perms
            .iter()
            .map(|p| lookup[&key_of(&invert_perm(p), &basis)])
            .collect();
        let mut g = ReflectionGroup {
            spec,
            label,
            rank,
            conductor,
            twist: 1,
            points,
            basis,
            perms,
            lookup,
            matrices,
            inverses,
            orders,
            generators,
            class_of: Vec::new(),
            classes: Vec::new(),
            spectra: Vec::new(),
            reflections: Vec::new(),
            reflection_classes: Vec::new(),
            hyperplanes: Vec::new(),
            hyperplane_of: HashMap::new(),
            hyperplane_orbits: Vec::new(),
            parent_indices,
            degrees: OnceLock::new(),
        };
        // conjugacy classes: orbits under conjugation by the generators
        let mut dsu = Dsu::new(order);
        for x in 0..order {
            for &s in &g.generators {
                let y = g.conj(s, x);
                dsu.union(x, y);
            }
        }
        g.classes = dsu.groups(0..order);
        g.class_of = vec![0; order];
        for (ci, c) in g.classes.iter().enumerate() {
            for &x in c {
                g.class_of[x] = ci;
            }
        }
        let mut spectra = Vec::with_capacity(g.classes.len());
        for c in &g.classes {
            let m = &g.matrices[c[0]];
            let sp = match monomial_spectrum(m) {
                Some(sp) => sp,
                None => m.eigen_exponents(g.orders[c[0]])?,
            };
            spectra.push(sp);
        }
        g.spectra = spectra;
        let r = rank;
        let mut refl_classes: Vec<Vec<usize>> = g
            .classes
            .iter()
            .enumerate()
            .filter(|(ci, _)| g.class_fix(*ci) + 1 == r)
            .map(|(_, c)| c.clone())
            .collect();
        let key = |c: &Vec<usize>| -> (usize, String) {
            let best = c.iter().map(|&x| g.matrices[x].render()).min().unwrap();
            (c.len(), best)
        };
        let mut keyed: Vec<((usize, String), Vec<usize>)> = refl_classes.drain(..).map(|c| (key(&c), c)).collect();
        keyed.sort();
        g.reflection_classes = keyed.into_iter().map(|(_, c)| c).collect();
        let mut refl: Vec<usize> = g.reflection_classes.iter().flatten().copied().collect();
        refl.sort_unstable();
        g.reflections = refl;
        // hyperplanes and their orbits
        let mut hp_index: HashMap<Vec<Cyclotomic>, usize> = HashMap::new();
        for &s in &g.reflections {
            let h = hyperplane_form(&g.matrices[s]);
            let next = hp_index.len();
            let id = *hp_index.entry(h.clone()).or_insert_with(|| {
                g.hyperplanes.push(h);
                next
            });
            g.hyperplane_of.insert(s, id);
        }
        let mut dsu = Dsu::new(g.hyperplanes.len());
        for &t in &g.reflections {
            for &s in &g.generators {
                let u = g.conj(s, t);
                dsu.union(g.hyperplane_of[&t], g.hyperplane_of[&u]);
            }
        }
        g.hyperplane_orbits = dsu.groups(0..g.hyperplanes.len());
        Ok(g)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// Galois parameter applied to the entries (1 if untwisted).
    pub fn twist_parameter(&self) -> i64 {
        self.twist
    }

    pub fn element(&self, i: usize) -> &CycMatrix {
        &self.matrices[i]
    }

    pub fn elements(&self) -> &[CycMatrix] {
        &self.matrices
    }

    /// Index of the identity; always 0 in the canonical order.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn element_order(&self, i: usize) -> u32 {
        self.orders[i]
    }

    /// Index of the product `a * b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let pa = &self.perms[a];
        let pb = &self.perms[b];
        let key: Vec<u32> = self.basis.iter().map(|&x| pa[pb[x as usize] as usize]).collect();
        self.lookup[&key]
    }

    /// Index of `s g s^-1`.
    pub fn conj(&self, s: usize, g: usize) -> usize {
        let ps = &self.perms[s];
        let pg = &self.perms[g];
        let psi = &self.perms[self.inverses[s]];
        let key: Vec<u32> = self
            .basis
            .iter()
            .map(|&x| ps[pg[psi[x as usize] as usize] as usize])
            .collect();
        self.lookup[&key]
    }

    /// Index of a matrix that belongs to the group.
    pub fn index_of(&self, m: &CycMatrix) -> Option<usize> {
        if m.rows() != self.rank || m.cols() != self.rank {
            return None;
        }
        let m = m.embed(self.conductor).ok()?;
        let key: Option<Vec<u32>> = (0..self.rank)
            .map(|j| {
                let col = m.column(j);
                self.points.iter().position(|p| *p == col).map(|x| x as u32)
            })
            .collect();
        let key = key?;
        let idx = *self.lookup.get(&key)?;
        (self.matrices[idx] == m).then_some(idx)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Eigenvalue exponents (zeta_n^k, n the conductor) with multiplicities, for a class.
    pub fn class_spectrum(&self, c: usize) -> &[(u32, usize)] {
        &self.spectra[c]
    }

    pub fn spectrum(&self, i: usize) -> &[(u32, usize)] {
        &self.spectra[self.class_of[i]]
    }

    fn class_fix(&self, c: usize) -> usize {
        self.spectra[c].iter().find(|(k, _)| *k == 0).map_or(0, |(_, m)| *m)
    }

    /// dim ker(1 - g).
    pub fn fix(&self, i: usize) -> usize {
        self.class_fix(self.class_of[i])
    }

    pub fn reflections(&self) -> &[usize] {
        &self.reflections
    }

    pub fn is_reflection(&self, i: usize) -> bool {
        self.reflections.binary_search(&i).is_ok()
    }

    /// Conjugacy classes of reflections, sorted by size and then by smallest rendered member.
    pub fn reflection_classes(&self) -> &[Vec<usize>] {
        &self.reflection_classes
    }

    /// Linear forms, first nonzero coordinate 1, of the reflecting hyperplanes.
    pub fn hyperplanes(&self) -> &[Vec<Cyclotomic>] {
        &self.hyperplanes
    }

    pub fn hyperplane_of(&self, s: usize) -> Option<usize> {
        self.hyperplane_of.get(&s).copied()
    }

    /// Orbits of hyperplane indices, ordered by smallest member.
    pub fn hyperplane_orbits(&self) -> &[Vec<usize>] {
        &self.hyperplane_orbits
    }

    /// Reflections whose hyperplane lies in the given orbit.
    pub fn orbit_reflections(&self, orbit: usize) -> Vec<usize> {
        let hs = &self.hyperplane_orbits[orbit];
        self.reflections
            .iter()
            .copied()
            .filter(|s| hs.contains(&self.hyperplane_of[s]))
            .collect()
    }

    /// Element indices of the parent group, for subgroups.
    pub fn parent_indices(&self) -> Option<&[usize]> {
        self.parent_indices.as_deref()
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let id = self.identity();
        seen[id] = true;
        let mut out = vec![id];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(s, x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Smallest element of each coset g*S of a subgroup S, in increasing order, and the
    /// coset index of every element.
    pub fn cosets(&self, sub: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &s in sub {
                coset_of[self.mul(g, s)] = c;
            }
        }
        (reps, coset_of)
    }

    /// A small generating set for the group generated by `candidates`, chosen greedily
    /// in the given order.
    pub fn greedy_generators(&self, candidates: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order()];
        inside[self.identity()] = true;
        for &c in candidates {
            if !inside[c] {
                gens.push(c);
                inside.iter_mut().for_each(|x| *x = false);
                for x in self.closure(&gens) {
                    inside[x] = true;
                }
            }
        }
        gens
    }

    pub fn is_generated_by_reflections(&self) -> bool {
        self.closure(&self.greedy_generators(&self.reflections)).len() == self.order()
    }

    /// The subgroup on the given (closed) set of element indices, generated by `gens`.
    pub fn subgroup(&self, elements: &[usize], gens: &[usize], label: &str) -> Result<ReflectionGroup> {
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&self.identity()) {
            return Err(Error::Invalid("subgroup must contain the identity".into()));
        }
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let perms: Vec<Vec<u32>> = elements.iter().map(|&e| self.perms[e].clone()).collect();
        let matrices: Vec<CycMatrix> = elements.iter().map(|&e| self.matrices[e].clone()).collect();
        let orders: Vec<u32> = elements.iter().map(|&e| self.orders[e]).collect();
        let lookup: HashMap<Vec<u32>, usize> =
            perms.iter().enumerate().map(|(i, p)| (key_of(p, &self.basis), i)).collect();
        let generators = gens
            .iter()
            .map(|g| pos.get(g).copied().ok_or_else(|| Error::Invalid("generator outside subgroup".into())))
            .collect::<Result<Vec<_>>>()?;
        // a closed subset of a finite group is a subgroup; check closure under generators
        for &e in &elements {
            for &g in gens {
                if !pos.contains_key(&self.mul(g, e)) {
                    return Err(Error::Invalid("element set is not closed".into()));
                }
            }
        }
        let spec = GroupSpec::Explicit(gens.iter().map(|&g| self.matrices[g].clone()).collect());
        let mut sub = Self::assemble(
            spec,
            label.to_string(),
            self.rank,
            self.conductor,
            self.points.clone(),
            self.basis.clone(),
            perms,
            lookup,
            matrices,
            orders,
            generators,
            Some(elements),
        )?;
        sub.twist = self.twist;
        Ok(sub)
    }

    /// The Galois twist: entries mapped by zeta -> zeta^k, element indices preserved.
    pub fn twist(&self, k: i64) -> Result<ReflectionGroup> {
        let n = self.conductor as i64;
        if k.gcd(&n) != 1 {
            return Err(Error::Galois { k, conductor: self.conductor });
        }
        let kk = k.rem_euclid(n) as u32;
        let gal_vec = |v: &Vec<Cyclotomic>| -> Vec<Cyclotomic> { v.iter().map(|e| e.galois_unchecked(k)).collect() };
        let matrices: Vec<CycMatrix> = self.matrices.iter().map(|m| m.galois(k)).collect::<Result<_>>()?;
        let spectra = self
            .spectra
            .iter()
            .map(|sp| {
                let mut v: Vec<(u32, usize)> = sp
                    .iter()
                    .map(|&(e, m)| (((e as u64 * kk as u64) % n as u64) as u32, m))
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        let spec = match &self.spec {
            GroupSpec::Explicit(gs) => GroupSpec::Explicit(gs.iter().map(|g| g.galois(k)).collect::<Result<_>>()?),
            other => other.clone(),
        };
        Ok(ReflectionGroup {
            spec,
            label: format!("{}^s{}", self.label, k.rem_euclid(n)),
            rank: self.rank,
            conductor: self.conductor,
            twist: (self.twist * k).rem_euclid(n.max(1)),
            points: self.points.iter().map(gal_vec).collect(),
            basis: self.basis.clone(),
            perms: self.perms.clone(),
            lookup: self.lookup.clone(),
            matrices,
            inverses: self.inverses.clone(),
            orders: self.orders.clone(),
            generators: self.generators.clone(),
            class_of: self.class_of.clone(),
            classes: self.classes.clone(),
            spectra,
            reflections: self.reflections.clone(),
            reflection_classes: self.reflection_classes.clone(),
            hyperplanes: self.hyperplanes.iter().map(gal_vec).collect(),
            hyperplane_of: self.hyperplane_of.clone(),
            hyperplane_orbits: self.hyperplane_orbits.clone(),
            parent_indices: self.parent_indices.clone(),
            degrees: self.degrees.clone(),
        })
    }

    /// Degrees of the basic invariants, from the Molien series; cached.
    pub fn degrees(&self) -> Result<Vec<u32>> {
        self.degrees
            .get_or_init(|| crate::invariants::degrees_uncached(self))
            .clone()
    }

    /// Exponents e_i = d_i - 1.
    pub fn exponents(&self) -> Result<Vec<u32>> {
        Ok(self.degrees()?.into_iter().map(|d| d - 1).collect())
    }

    pub fn exponent(&self) -> u32 {
        self.orders.iter().fold(1u32, |a, &o| a.lcm(&o))
    }

    /// Class sizes together with spectra, the data every class function sum needs.
    pub fn class_data(&self) -> impl Iterator<Item = (usize, &[(u32, usize)])> + '_ {
        self.classes.iter().zip(&self.spectra).map(|(c, s)| (c.len(), s.as_slice()))
    }
}

impl fmt::Display for ReflectionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn closure_perms(gens: &[Vec<u32>], basis: &[u32], npts: usize, cap: usize) -> Result<Vec<Vec<u32>>> {
    let id: Vec<u32> = (0..npts as u32).collect();
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    seen.insert(key_of(&id, basis), ());
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        for s in gens {
            let y = compose(s, &out[head]);
            let k = key_of(&y, basis);
            if seen.insert(k, ()).is_none() {
                if out.len() >= cap {
                    return Err(Error::ElementCap(cap));
                }
                out.push(y);
            }
        }
        head += 1;
    }
    Ok(out)
}

/// Lexicographic successor; false when `v` was the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// BFS closure of the standard imprimitive generators, as matrices; an oracle for the
/// direct enumeration.
pub fn imprimitive_generator_matrices(m: u32, p: u32, r: usize) -> Vec<CycMatrix> {
    let z = |k: i64| Cyclotomic::root_of_unity(m, k);
    let zero = Cyclotomic::zero(m);
    let mut out = Vec::new();
    let base = |f: &dyn Fn(usize, usize) -> Cyclotomic| {
        CycMatrix::from_rows((0..r).map(|i| (0..r).map(|j| f(i, j)).collect()).collect())
    };
    for t in 0..r.saturating_sub(1) {
        out.push(base(&|i, j| {
            let src = if j == t { t + 1 } else if j == t + 1 { t } else { j };
            if i == src { z(0) } else { zero.clone() }
        }));
    }
    if p < m {
        out.push(base(&|i, j| {
            if i != j {
                zero.clone()
            } else if i == 0 {
                z(p as i64)
            } else {
                z(0)
            }
        }));
    }
    if p > 1 && r >= 2 {
        out.push(base(&|i, j| match (i, j) {
            (0, 1) => z(-1),
            (1, 0) => z(1),
            (a, b) if a == b && a >= 2 => z(0),
            _ => zero.clone(),
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> ReflectionGroup {
        ReflectionGroup::build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn parses_specs() {
        assert_eq!("G(4, 2,2)".parse::<GroupSpec>().unwrap(), GroupSpec::Imprimitive { m: 4, p: 2, r: 2 });
        assert_eq!("ST28".parse::<GroupSpec>().unwrap(), GroupSpec::Exceptional(28));
        assert!("G(4,3,2)".parse::<GroupSpec>().is_err());
        assert!("ST5".parse::<GroupSpec>().is_err());
        assert_eq!(GroupSpec::Exceptional(8).to_string(), "ST8");
    }

    #[test]
    fn dihedral_of_order_eight() {
        let w = g("G(2,1,2)");
        assert_eq!(w.order(), 8);
        assert_eq!(w.reflections().len(), 4);
        let sizes: Vec<usize> = w.reflection_classes().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![2, 2]);
        // diagonal reflections come first
        assert!(w.reflection_classes()[0].iter().all(|&s| w.element(s).is_monomial()
            && w.element(s).get(0, 1).is_zero()));
        assert_eq!(w.hyperplane_orbits().len(), 2);
        assert!(w.hyperplane_orbits().iter().all(|o| o.len() == 2));
        assert!(w.element(w.identity()).is_identity());
    }

    #[test]
    fn symmetric_groups() {
        let s3 = g("G(1,1,3)");
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.reflection_classes().len(), 1);
        assert_eq!(s3.reflection_classes()[0].len(), 3);
        let s4 = g("G(1,1,4)");
        assert_eq!(s4.hyperplane_orbits().len(), 1);
        assert_eq!(s4.hyperplane_orbits()[0].len(), 6);
    }

    #[test]
    fn table_operations_agree_with_matrices() {
        let w = g("G(4,2,2)");
        for a in 0..w.order() {
            assert!(w.element(a).mul(w.element(w.inverse(a))).is_identity());
            for b in [0, 3, 7] {
                assert_eq!(w.element(w.mul(a, b)), &w.element(a).mul(w.element(b)));
            }
            assert_eq!(w.fix(a), w.element(a).fixed_space_dim());
        }
    }

    #[test]
    fn direct_enumeration_matches_generator_closure() {
        for (m, p, r) in [(2, 1, 2), (4, 2, 2), (3, 3, 3), (6, 2, 2), (2, 2, 4), (5, 1, 1)] {
            let direct = g(&format!("G({m},{p},{r})"));
            let gens = imprimitive_generator_matrices(m, p, r);
            let bfs = ReflectionGroup::from_generators(r, &gens, "bfs", 10_000).unwrap();
            assert_eq!(direct.order() as u64, GroupSpec::imprimitive(m, p, r as u32).unwrap().predicted_order().unwrap());
            assert_eq!(bfs.order(), direct.order());
            for e in bfs.elements() {
                assert!(direct.index_of(e).is_some());
            }
        }
    }

    #[test]
    fn exceptional_rank_two_and_three() {
        let w = g("ST4");
        assert_eq!(w.order(), 24);
        assert_eq!(w.degrees().unwrap(), vec![4, 6]);
        let w = g("ST25");
        assert_eq!(w.reflection_classes().len(), 2);
    }

    #[test]
    fn twist_of_cyclic_group() {
        let c3 = g("G(3,1,1)");
        let t = c3.twist(2).unwrap();
        assert_eq!(t.order(), 3);
        for i in 0..3 {
            assert_eq!(t.element(i), &c3.element(i).galois(2).unwrap());
        }
        assert!(c3.twist(3).is_err());
        let same = c3.twist(1).unwrap();
        assert_eq!(same.elements(), c3.elements());
    }

    #[test]
    fn subgroup_and_closure() {
        let w = g("G(2,1,2)");
        let diag = w.reflection_classes()[0].clone();
        let elems = w.closure(&diag);
        assert_eq!(elems.len(), 4);
        let n = w.subgroup(&elems, &diag, "N").unwrap();
        assert_eq!(n.order(), 4);
        assert_eq!(n.reflections().len(), 2);
        assert!(n.is_generated_by_reflections());
    }

    #[test]
    fn monomial_spectrum_matches_generic() {
        let w = g("G(6,2,3)");
        for c in w.classes() {
            let m = w.element(c[0]);
            let mut generic = m.eigen_exponents(w.element_order(c[0])).unwrap();
            generic.sort_unstable();
            assert_eq!(monomial_spectrum(m).unwrap(), generic);
        }
    }
}
