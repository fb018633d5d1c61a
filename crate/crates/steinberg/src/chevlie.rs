//! Chevalley bases and the adjoint module for spherical diagrams.
//!
//! Builds integer structure constants from extraspecial pairs, takes
//! divided-power exponentials of nilpotent adjoint actions, and
//! realizes the sign-tracked Weyl elements s*_i = exp(ad e_i)
//! exp(ad f_i) exp(ad e_i) as integer matrices. Basis order: root
//! vectors for positive roots sorted by (height, lex), then their
//! negatives in the same order, then the coroot basis h_1..h_n.

use crate::cartan::Gcm;
use crate::ring::{RMat, Ring, Value};
use crate::weyl::{self, enumerate_roots, RootSystem};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChevError {
    #[error("diagram is not spherical: {0}")]
    NotSpherical(String),
    #[error("divided power is not integral: {0}")]
    NonIntegralDividedPower(String),
    #[error("not a path in the odd-edge diagram: {0}")]
    NotAnOddPath(String),
}

/// Square integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    pub n: usize,
    pub a: Vec<i64>,
}

impl IMat {
    pub fn identity(n: usize) -> IMat {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        IMat { n, a }
    }

    pub fn zero(n: usize) -> IMat {
        IMat { n, a: vec![0; n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let v = self.a[i * n + k];
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += v * other.a[k * n + j];
                }
            }
        }
        IMat { n, a: out }
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.a[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IMat::identity(self.n)
    }

    /// Casts into a ring, entry by entry.
    pub fn into_ring(&self, ring: &Ring) -> RMat {
        RMat {
            n: self.n,
            a: self.a.iter().map(|&v| ring.from_i64(v)).collect(),
        }
    }
}

/// exp(t·ad v) as a polynomial in t with integer matrix coefficients.
#[derive(Debug, Clone)]
pub struct PolyMat {
    pub mats: Vec<IMat>,
}

impl PolyMat {
    pub fn dim(&self) -> usize {
        self.mats[0].n
    }

    pub fn eval(&self, ring: &Ring, t: &Value) -> RMat {
        let n = self.dim();
        let mut out = RMat::identity(ring, n).a;
        for v in out.iter_mut() {
            *v = ring.zero();
        }
        let mut tk = ring.one();
        for (k, m) in self.mats.iter().enumerate() {
            if k > 0 {
                tk = ring.mul(&tk, t);
            }
            for idx in 0..n * n {
                if m.a[idx] != 0 {
                    let term = ring.mul(&ring.from_i64(m.a[idx]), &tk);
                    out[idx] = ring.add(&out[idx], &term);
                }
            }
        }
        RMat { n, a: out }
    }

    /// Integer evaluation at t = 1: the plain exponential.
    pub fn at_one(&self) -> IMat {
        let n = self.dim();
        let mut out = IMat::zero(n);
        for m in &self.mats {
            for idx in 0..n * n {
                out.a[idx] += m.a[idx];
            }
        }
        out
    }
}

/// Divided-power exponential exp(t·m) of a nilpotent integer matrix,
/// as a polynomial in t.  Fails if m is not nilpotent or some m^k/k!
/// is not integral.
pub fn exp_nilpotent(m: &IMat) -> Result<PolyMat, ChevError> {
    let n = m.n;
    let mut mats = vec![IMat::identity(n)];
    let mut power = m.clone();
    let mut k = 1u32;
    let mut factorial: i64 = 1;
    while power.a.iter().any(|&c| c != 0) {
        if k as usize > n {
            return Err(ChevError::NonIntegralDividedPower(
                "matrix is not nilpotent".into(),
            ));
        }
        factorial *= k as i64;
        let mut dp = IMat::zero(n);
        for idx in 0..n * n {
            let c = power.a[idx];
            if c % factorial != 0 {
                return Err(ChevError::NonIntegralDividedPower(format!(
                    "power {k} has entry {c} not divisible by {k}!"
                )));
            }
            dp.a[idx] = c / factorial;
        }
        mats.push(dp);
        power = power.mul(m);
        k += 1;
    }
    Ok(PolyMat { mats })
}

/// A word in the s*_i and their inverses (exponent ±1).
pub type StarWord = Vec<(usize, i64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabKind {
    /// Loop through a cycle of the odd-edge diagram.
    BasisCycle(Vec<usize>),
    /// Even-edge reflection transported along an odd path.
    Transport { j: usize, k: usize },
    /// The square of a single s*_l.
    SquareTwist(usize),
}

#[derive(Debug, Clone)]
pub struct StabGen {
    pub kind: StabKind,
    pub word: StarWord,
}

/// Compact form of a W* element: a signed permutation on the root
/// vectors together with an integer matrix on the coroot block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StarElem {
    /// Image of root-vector basis k: sign * (index + 1).
    pub e: Vec<i32>,
    /// Cartan block, row major n x n.
    pub h: Vec<i64>,
}

pub struct LieAlgebra {
    gcm: Gcm,
    rs: RootSystem,
    /// Positive roots sorted by (height, lex).
    pos: Vec<Vec<i64>>,
    pos_index: HashMap<Vec<i64>, usize>,
    d: Vec<i64>,
    /// N(x, y) for signed roots with x + y a root; keys are signed
    /// indices: +(k+1) for pos[k], -(k+1) for its negative.
    n_signed: HashMap<(i32, i32), i64>,
    dim: usize,
    star: Vec<IMat>,
    exp_e: Vec<PolyMat>,
    exp_f: Vec<PolyMat>,
}

impl LieAlgebra {
    pub fn new(gcm: &Gcm) -> Result<LieAlgebra, ChevError> {
        let rs = enumerate_roots(gcm, 40);
        if !rs.stabilized() {
            return Err(ChevError::NotSpherical(format!(
                "root enumeration does not terminate for {:?}",
                gcm.labels()
            )));
        }
        let mut pos: Vec<Vec<i64>> =
            rs.positive_roots().iter().map(|p| p.root.clone()).collect();
        pos.sort_by_key(|r| (weyl::height(r), r.clone()));
        let pos_index: HashMap<Vec<i64>, usize> =
            pos.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let d = symmetrizer(gcm);
        let dim = 2 * pos.len() + gcm.rank();
        let mut lie = LieAlgebra {
            gcm: gcm.clone(),
            rs,
            pos,
            pos_index,
            d,
            n_signed: HashMap::new(),
            dim,
            star: Vec::new(),
            exp_e: Vec::new(),
            exp_f: Vec::new(),
        };
        lie.build_constants()?;
        for i in 0..gcm.rank() {
            let e = lie.exp_ad(&lie.simple_e(i))?;
            let f = lie.exp_ad(&lie.simple_f(i))?;
            let s = e.at_one().mul(&f.at_one()).mul(&e.at_one());
            lie.exp_e.push(e);
            lie.exp_f.push(f);
            lie.star.push(s);
        }
        Ok(lie)
    }

    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn roots(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.pos
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    /// Squared length of a root (twice the symmetrized form).
    pub fn norm2(&self, gamma: &[i64]) -> i64 {
        let n = self.rank();
        let mut acc = 0;
        for j in 0..n {
            for k in 0..n {
                acc += gamma[j] * gamma[k] * self.d[j] * self.gcm.entry(j, k);
            }
        }
        acc
    }

    /// Basis index of the root vector e_gamma.
    pub fn root_basis_index(&self, gamma: &[i64]) -> Option<usize> {
        if let Some(&k) = self.pos_index.get(gamma) {
            return Some(k);
        }
        let neg: Vec<i64> = gamma.iter().map(|c| -c).collect();
        self.pos_index.get(&neg).map(|&k| self.pos.len() + k)
    }

    /// Root attached to a basis index below 2 * |positives|.
    pub fn basis_root(&self, idx: usize) -> Option<Vec<i64>> {
        let p = self.pos.len();
        if idx < p {
            Some(self.pos[idx].clone())
        } else if idx < 2 * p {
            Some(self.pos[idx - p].iter().map(|c| -c).collect())
        } else {
            None
        }
    }

    fn signed_id(&self, gamma: &[i64]) -> Option<i32> {
        if let Some(&k) = self.pos_index.get(gamma) {
            return Some(k as i32 + 1);
        }
        let neg: Vec<i64> = gamma.iter().map(|c| -c).collect();
        self.pos_index.get(&neg).map(|&k| -(k as i32 + 1))
    }


    /// Structure constant N(x, y) for roots with x + y a root.
    pub fn n_const(&self, x: &[i64], y: &[i64]) -> i64 {
        let a = self.signed_id(x).expect("x is a root");
        let b = self.signed_id(y).expect("y is a root");
        *self.n_signed.get(&(a, b)).expect("x + y is a root")
    }

    /// The unit vector for e_{alpha_i}.
    pub fn simple_e(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.dim];
        let alpha = self.rs.simple(i);
        v[self.pos_index[&alpha]] = 1;
        v
    }

    /// f_i = -e_{-alpha_i}.
    pub fn simple_f(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.dim];
        let alpha = self.rs.simple(i);
        v[self.pos.len() + self.pos_index[&alpha]] = -1;
        v
    }

    /// Bracket of two coefficient vectors in the adjoint basis.
    pub fn bracket(&self, u: &[i64], v: &[i64]) -> Vec<i64> {
        let p = self.pos.len();
        let n = self.rank();
        let mut out = vec![0i64; self.dim];
        for (iu, &cu) in u.iter().enumerate() {
            if cu == 0 {
                continue;
            }
            for (iv, &cv) in v.iter().enumerate() {
                if cv == 0 {
                    continue;
                }
                let c = cu * cv;
                match (self.basis_root(iu), self.basis_root(iv)) {
                    (Some(x), Some(y)) => {
                        let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                        if sum.iter().all(|&k| k == 0) {
                            let coroot = self.rs.coroot_of(&x).unwrap();
                            for j in 0..n {
                                out[2 * p + j] += c * coroot[j];
                            }
                        } else if let Some(idx) = self.root_basis_index(&sum) {
                            out[idx] += c * self.n_const(&x, &y);
                        }
                    }
                    (None, Some(y)) => {
                        let j = iu - 2 * p;
                        let pair = weyl::simple_pairing(&self.gcm, j, &y);
                        out[iv] += c * pair;
                    }
                    (Some(x), None) => {
                        let j = iv - 2 * p;
                        let pair = weyl::simple_pairing(&self.gcm, j, &x);
                        out[iu] -= c * pair;
                    }
                    (None, None) => {}
                }
            }
        }
        out
    }

    /// Matrix of ad(v) on the adjoint basis.
    pub fn ad(&self, v: &[i64]) -> IMat {
        let mut m = IMat::zero(self.dim);
        for k in 0..self.dim {
            let mut basis = vec![0i64; self.dim];
            basis[k] = 1;
            let col = self.bracket(v, &basis);
            for (i, &c) in col.iter().enumerate() {
                if c != 0 {
                    m.set(i, k, c);
                }
            }
        }
        m
    }

    /// Divided-power exponential exp(t·ad v) for ad-nilpotent v.
    pub fn exp_ad(&self, v: &[i64]) -> Result<PolyMat, ChevError> {
        exp_nilpotent(&self.ad(v))
            .map_err(|_| ChevError::NonIntegralDividedPower(format!("ad of {v:?}")))
    }

    /// Cached exp(t·ad e_i).
    pub fn exp_simple_e(&self, i: usize) -> &PolyMat {
        &self.exp_e[i]
    }

    /// Cached exp(t·ad f_i).
    pub fn exp_simple_f(&self, i: usize) -> &PolyMat {
        &self.exp_f[i]
    }

    /// s*_i as an integer matrix.
    pub fn star(&self, i: usize) -> &IMat {
        &self.star[i]
    }

    /// Product of s*-letters; inverses use s*^3 since s*^4 = 1.
    pub fn star_word(&self, word: &[(usize, i64)]) -> IMat {
        let mut m = IMat::identity(self.dim);
        for &(i, exp) in word {
            let s = &self.star[i];
            let factor = match exp {
                1 => s.clone(),
                -1 => s.mul(s).mul(s),
                _ => panic!("exponents must be +1 or -1"),
            };
            m = m.mul(&factor);
        }
        m
    }

    /// Ad of a coroot: diagonal (-1)^{<beta_vee, gamma>} on root
    /// vectors, identity on the Cartan block.
    pub fn ad_coroot(&self, coroot: &[i64]) -> IMat {
        let p = self.pos.len();
        let mut m = IMat::identity(self.dim);
        for k in 0..2 * p {
            let gamma = self.basis_root(k).unwrap();
            let pair = weyl::pairing(&self.gcm, coroot, &gamma);
            m.set(k, k, if pair.rem_euclid(2) == 0 { 1 } else { -1 });
        }
        m
    }

    /// Compacts a W* matrix into its signed-permutation form;
    /// panics if the matrix is not one.
    pub fn compact(&self, m: &IMat) -> StarElem {
        let p = self.pos.len();
        let n = self.rank();
        let mut e = Vec::with_capacity(2 * p);
        for k in 0..2 * p {
            let mut hit: Option<i32> = None;
            for row in 0..self.dim {
                let v = m.get(row, k);
                if v == 0 {
                    continue;
                }
                assert!(
                    hit.is_none() && (v == 1 || v == -1) && row < 2 * p,
                    "not a signed permutation on root vectors"
                );
                hit = Some(v as i32 * (row as i32 + 1));
            }
            e.push(hit.expect("zero column"));
        }
        let mut h = Vec::with_capacity(n * n);
        for row in 0..n {
            for col in 0..n {
                h.push(m.get(2 * p + row, 2 * p + col));
            }
        }
        for row in 0..2 * p {
            for col in 0..n {
                assert_eq!(m.get(row, 2 * p + col), 0, "mixed Cartan block");
            }
        }
        StarElem { e, h }
    }

    pub fn compose(&self, a: &StarElem, b: &StarElem) -> StarElem {
        let n = self.rank();
        let e = b
            .e
            .iter()
            .map(|&img| {
                let k = (img.abs() - 1) as usize;
                let sign = img.signum();
                let next = a.e[k];
                next * sign
            })
            .collect();
        let mut h = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let v = a.h[i * n + k];
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    h[i * n + j] += v * b.h[k * n + j];
                }
            }
        }
        StarElem { e, h }
    }

    /// Order of W* = <s*_1, ..., s*_n> by closure.
    pub fn wstar_order(&self) -> u64 {
        let gens: Vec<StarElem> = (0..self.rank()).map(|i| self.compact(&self.star[i])).collect();
        let id = self.compact(&IMat::identity(self.dim));
        let mut seen: HashSet<StarElem> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = self.compose(g, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() as u64
    }

    /// Orbit of a signed multiple of a root-vector basis element
    /// under the s*_i. States are sign * (basis index + 1) where the
    /// basis index runs over root vectors only.
    fn signed_orbit(&self, start: i32) -> HashSet<i32> {
        let gens: Vec<StarElem> = (0..self.rank()).map(|i| self.compact(&self.star[i])).collect();
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let k = (x.abs() - 1) as usize;
            let sign = x.signum();
            for g in &gens {
                let y = g.e[k] * sign;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Size of the W-orbit of a root.
    pub fn root_orbit_size(&self, gamma: &[i64]) -> u64 {
        let idx = self.root_basis_index(gamma).expect("root") as i32 + 1;
        let orbit = self.signed_orbit(idx);
        let spaces: HashSet<i32> = orbit.iter().map(|&x| x.abs()).collect();
        spaces.len() as u64
    }

    /// Orbit of the simple root vectors intersected with the root
    /// space of gamma: the one or two vectors ±e_gamma reached.
    pub fn e_set(&self, gamma: &[i64]) -> Vec<Vec<i64>> {
        let target = self.root_basis_index(gamma).expect("root") as i32 + 1;
        let mut hits: Vec<i32> = Vec::new();
        for i in 0..self.rank() {
            let start = self.root_basis_index(&self.rs.simple(i)).unwrap() as i32 + 1;
            for x in self.signed_orbit(start) {
                if x.abs() == target && !hits.contains(&x) {
                    hits.push(x);
                }
            }
        }
        hits.sort_by_key(|x| -x.signum());
        hits.iter()
            .map(|&x| {
                let mut v = vec![0i64; self.dim];
                v[(target - 1) as usize] = x.signum() as i64;
                v
            })
            .collect()
    }

    /// Closure order of a set of star words.
    pub fn word_group_order(&self, words: &[StarWord]) -> u64 {
        let gens: Vec<StarElem> =
            words.iter().map(|w| self.compact(&self.star_word(w))).collect();
        let id = self.compact(&IMat::identity(self.dim));
        let mut seen: HashSet<StarElem> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = self.compose(g, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() as u64
    }

    fn build_constants(&mut self) -> Result<(), ChevError> {
        // Positive-pair table by induction on the height of the sum.
        let p = self.pos.len();
        let mut nplus: HashMap<(usize, usize), i64> = HashMap::new();
        let norm = |lie: &LieAlgebra, g: &Vec<i64>| lie.norm2(g);
        for gi in 0..p {
            let gamma = self.pos[gi].clone();
            if weyl::height(&gamma) < 2 {
                continue;
            }
            // Extraspecial pair: minimal first summand in basis order.
            let mut extra: Option<(usize, usize)> = None;
            for ai in 0..p {
                let alpha = &self.pos[ai];
                let beta: Vec<i64> = gamma.iter().zip(alpha).map(|(g, a)| g - a).collect();
                if beta.iter().all(|&c| c >= 0) {
                    if let Some(&bi) = self.pos_index.get(&beta) {
                        extra = Some((ai, bi));
                        break;
                    }
                }
            }
            let (ai, bi) = extra.expect("positive non-simple root splits");
            let chain = |lie: &LieAlgebra, base: &[i64], step: &[i64]| -> i64 {
                // Largest k with base - k*step a root.
                let mut k = 0;
                loop {
                    let v: Vec<i64> = base
                        .iter()
                        .zip(step)
                        .map(|(b, s)| b - (k + 1) * s)
                        .collect();
                    if lie.rs.is_root(&v) {
                        k += 1;
                    } else {
                        return k;
                    }
                }
            };
            let pchain = chain(self, &self.pos[bi].clone(), &self.pos[ai].clone());
            nplus.insert((ai, bi), pchain + 1);
            nplus.insert((bi, ai), -(pchain + 1));
            // Remaining positive splittings of gamma via the four-root
            // identity with the extraspecial pair.
            let alpha = self.pos[ai].clone();
            let nab = pchain + 1;
            for xi in 0..p {
                let x = self.pos[xi].clone();
                let y: Vec<i64> = gamma.iter().zip(&x).map(|(g, a)| g - a).collect();
                if !y.iter().all(|&c| c >= 0) {
                    continue;
                }
                let yi = match self.pos_index.get(&y) {
                    Some(&yi) => yi,
                    None => continue,
                };
                if xi == ai || xi == bi || nplus.contains_key(&(xi, yi)) {
                    continue;
                }
                // N(x,y) * N(-a,-b) / |g|^2
                //   + N(y,-a) * N(x,-b) / |y-a|^2
                //   + N(-a,x) * N(y,-b) / |x-a|^2 = 0.
                let mixed = |lie: &LieAlgebra,
                             tab: &HashMap<(usize, usize), i64>,
                             u: usize,
                             v: usize|
                 -> (i64, i64) {
                    // N(u, -v) as (num, den) with u, v positive indices.
                    let pu = lie.pos[u].clone();
                    let pv = lie.pos[v].clone();
                    let diff: Vec<i64> = pu.iter().zip(&pv).map(|(a, b)| a - b).collect();
                    if diff.iter().all(|&c| c >= 0) {
                        let wi = lie.pos_index[&diff];
                        let nvw = tab[&(v, wi)];
                        (-norm(lie, &diff) * nvw, norm(lie, &pu))
                    } else {
                        let wv: Vec<i64> = diff.iter().map(|c| -c).collect();
                        let wi = lie.pos_index[&wv];
                        let nwu = tab[&(wi, u)];
                        (norm(lie, &wv) * nwu, norm(lie, &pv))
                    }
                };
                let term = |lie: &LieAlgebra,
                            tab: &HashMap<(usize, usize), i64>,
                            u1: usize,
                            v1: usize,
                            u2: usize,
                            v2: usize,
                            diff: Vec<i64>|
                 -> Option<(i64, i64)> {
                    if !lie.rs.is_root(&diff) {
                        return None;
                    }
                    let (n1, d1) = mixed(lie, tab, u1, v1);
                    let (n2, d2) = mixed(lie, tab, u2, v2);
                    Some((n1 * n2, d1 * d2 * norm(lie, &diff)))
                };
                let ymina: Vec<i64> = y.iter().zip(&alpha).map(|(a, b)| a - b).collect();
                let xmina: Vec<i64> = x.iter().zip(&alpha).map(|(a, b)| a - b).collect();
                let t2 = term(self, &nplus, yi, ai, xi, bi, ymina);
                let t3 = term(self, &nplus, yi, bi, xi, ai, xmina).map(|(n, d)| (-n, d));
                let (num, den) = [t2, t3].iter().flatten().fold((0i64, 1i64), |(an, ad), (bn, bd)| {
                    (an * bd + bn * ad, ad * bd)
                });
                // N(x,y) = |g|^2 / N(a,b) * (t2 + t3).
                let g2 = norm(self, &gamma);
                assert_eq!(
                    (g2 * num) % (den * nab),
                    0,
                    "four-root identity must give an integer"
                );
                let nxy = g2 * num / (den * nab);
                nplus.insert((xi, yi), nxy);
                nplus.insert((yi, xi), -nxy);
            }
        }
        // Expand to all signed pairs.
        let mut full: HashMap<(i32, i32), i64> = HashMap::new();
        let sid = |k: usize, sign: i64| (k as i32 + 1) * sign as i32;
        for xi in 0..p {
            for yi in 0..p {
                let x = self.pos[xi].clone();
                let y = self.pos[yi].clone();
                let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                if self.rs.is_root(&sum) {
                    let n = nplus[&(xi, yi)];
                    full.insert((sid(xi, 1), sid(yi, 1)), n);
                    full.insert((sid(xi, -1), sid(yi, -1)), -n);
                }
                let diff: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
                if self.rs.is_root(&diff) {
                    let (num, den) = if diff.iter().all(|&c| c >= 0) {
                        let wi = self.pos_index[&diff];
                        (-self.norm2(&diff) * nplus[&(yi, wi)], self.norm2(&x))
                    } else {
                        let wv: Vec<i64> = diff.iter().map(|c| -c).collect();
                        let wi = self.pos_index[&wv];
                        (self.norm2(&wv) * nplus[&(wi, xi)], self.norm2(&y))
                    };
                    assert_eq!(num % den, 0, "mixed-sign constant must be integral");
                    let n = num / den;
                    full.insert((sid(xi, 1), sid(yi, -1)), n);
                    full.insert((sid(xi, -1), sid(yi, 1)), -n);
                }
            }
        }
        self.n_signed = full;
        Ok(())
    }
}

/// Smallest positive integer symmetrizer: d_i A_ij = d_j A_ji.
pub fn symmetrizer(gcm: &Gcm) -> Vec<i64> {
    let n = gcm.rank();
    // Propagate exact fractions over edges, then clear denominators.
    let mut num = vec![0i64; n];
    let mut den = vec![1i64; n];
    for comp in gcm.components() {
        let base = comp.nodes[0];
        num[base] = 1;
        let mut queue = VecDeque::from([base]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if gcm.entry(i, j) != 0 && i != j && num[j] == 0 {
                    // d_j = d_i * A_ij / A_ji.
                    let mut nj = num[i] * gcm.entry(i, j);
                    let mut dj = den[i] * gcm.entry(j, i);
                    if dj < 0 {
                        nj = -nj;
                        dj = -dj;
                    }
                    let g = gcd(nj.abs(), dj);
                    num[j] = nj / g;
                    den[j] = dj / g;
                    queue.push_back(j);
                }
            }
        }
    }
    let l = den.iter().fold(1i64, |acc, &d| acc / gcd(acc, d) * d);
    let mut out: Vec<i64> = (0..n).map(|i| num[i] * (l / den[i])).collect();
    let g = out.iter().fold(0i64, |acc, &v| gcd(acc, v.abs()));
    for v in out.iter_mut() {
        *v /= g;
    }
    for i in 0..n {
        for j in 0..n {
            assert_eq!(out[i] * gcm.entry(i, j), out[j] * gcm.entry(j, i));
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Word of the path transporter p: for a path (i_0, ..., i_n) along
/// odd edges, the word (s_{i_{n-1}} s_{i_n}) ... (s_{i_0} s_{i_1});
/// empty for a single vertex.
pub fn p_word(gcm: &Gcm, path: &[usize]) -> Result<Vec<usize>, ChevError> {
    if path.is_empty() {
        return Err(ChevError::NotAnOddPath("empty path".into()));
    }
    for w in path.windows(2) {
        if gcm.edge_label(w[0], w[1]) != Some(3) {
            return Err(ChevError::NotAnOddPath(format!(
                "nodes {} and {} are not joined by an odd edge",
                gcm.label(w[0]),
                gcm.label(w[1])
            )));
        }
    }
    let mut word = Vec::new();
    for t in (0..path.len() - 1).rev() {
        word.push(path[t]);
        word.push(path[t + 1]);
    }
    Ok(word)
}

/// Generators of the W*-stabilizer of the root line of alpha_i:
/// cycle transporters of the odd component, transported even-edge
/// cores, and all squares s*_l^2.
pub fn stabilizer_generators(gcm: &Gcm, i: usize) -> Result<Vec<StabGen>, ChevError> {
    let n = gcm.rank();
    let comps = gcm.odd_diagram();
    let comp = comps
        .iter()
        .find(|c| c.nodes.contains(&i))
        .expect("every node sits in an odd component");
    let mut gens = Vec::new();
    for cycle in &comp.cycles {
        // Close the cycle walk at i instead of the component base.
        let to_base = gcm.odd_path(i, cycle[0]).expect("connected odd component");
        let mut walk = to_base.clone();
        walk.extend_from_slice(&cycle[1..]);
        let mut back = to_base.clone();
        back.reverse();
        walk.extend_from_slice(&back[1..]);
        let word = p_word(gcm, &walk)?;
        gens.push(StabGen {
            kind: StabKind::BasisCycle(walk),
            word: word.into_iter().map(|l| (l, 1)).collect(),
        });
    }
    let mut nodes = comp.nodes.clone();
    nodes.sort_unstable();
    for &j in &nodes {
        let delta = gcm.odd_path(i, j).expect("connected odd component");
        let p = p_word(gcm, &delta)?;
        for k in 0..n {
            let m = match gcm.edge_label(j, k) {
                Some(m) if k != j && (m == 2 || m == 4 || m == 6) => m,
                _ => continue,
            };
            let core: Vec<usize> = match m {
                2 => vec![k],
                4 => vec![k, j, k],
                _ => vec![k, j, k, j, k],
            };
            let mut word: StarWord = p.iter().rev().map(|&l| (l, -1)).collect();
            word.extend(core.iter().map(|&l| (l, 1)));
            word.extend(p.iter().map(|&l| (l, 1)));
            gens.push(StabGen { kind: StabKind::Transport { j, k }, word });
        }
    }
    for l in 0..n {
        gens.push(StabGen {
            kind: StabKind::SquareTwist(l),
            word: vec![(l, 1), (l, 1)],
        });
    }
    Ok(gens)
}

#[derive(Debug, Clone)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl SuiteCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn refl_word_order(gcm: &Gcm, words: &[StarWord]) -> u64 {
    let n = gcm.rank();
    let refl: Vec<Vec<i64>> = (0..n)
        .map(|i| weyl::reflection_matrix(gcm, i).concat())
        .collect();
    let mut id = vec![0i64; n * n];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    let matmul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut y = vec![0i64; n * n];
        for r in 0..n {
            for k in 0..n {
                let v = a[r * n + k];
                if v == 0 {
                    continue;
                }
                for c in 0..n {
                    y[r * n + c] += v * b[k * n + c];
                }
            }
        }
        y
    };
    let gens: Vec<Vec<i64>> = words
        .iter()
        .map(|w| {
            let mut m = id.clone();
            for &(l, _) in w {
                m = matmul(&m, &refl[l]);
            }
            m
        })
        .collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = matmul(g, &x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len() as u64
}

/// Runs the whole identity suite for the triple-exponential matrices
/// of one spherical diagram: braid relations, the square and
/// square-conjugation identities, how the s*_i move the basis root
/// vectors, that the stabilizer generators fix them, and the
/// orbit-stabilizer order counts at both the Weyl-group level and the
/// extension level.
pub fn wstar_suite(gcm: &Gcm) -> Result<Vec<SuiteCheck>, ChevError> {
    let lie = LieAlgebra::new(gcm)?;
    let n = gcm.rank();
    let dim = lie.dim();
    let mut out = Vec::new();

    let mut artin = SuiteCheck {
        name: "artin",
        instances: 0,
        failures: Vec::new(),
    };
    for i in 0..n {
        for j in 0..i {
            let Some(m) = gcm.edge_label(i, j) else { continue };
            artin.instances += 1;
            let mut lhs = IMat::identity(dim);
            let mut rhs = IMat::identity(dim);
            for t in 0..m {
                lhs = lhs.mul(lie.star(if t % 2 == 0 { i } else { j }));
                rhs = rhs.mul(lie.star(if t % 2 == 0 { j } else { i }));
            }
            if lhs != rhs {
                artin
                    .failures
                    .push(format!("nodes {},{}", gcm.label(i), gcm.label(j)));
            }
        }
    }
    out.push(artin);

    let mut squares = SuiteCheck {
        name: "square_is_coroot_involution",
        instances: n,
        failures: Vec::new(),
    };
    for i in 0..n {
        let s2 = lie.star(i).mul(lie.star(i));
        let alpha = lie.roots().simple(i);
        let coroot = lie.roots().coroot_of(&alpha).expect("simple root");
        if s2 != lie.ad_coroot(&coroot) {
            squares.failures.push(format!("node {}", gcm.label(i)));
        }
    }
    out.push(squares);

    let mut conj = SuiteCheck {
        name: "square_conjugation",
        instances: 0,
        failures: Vec::new(),
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            conj.instances += 1;
            let si = lie.star(i);
            let sj2 = lie.star(j).mul(lie.star(j));
            let inv_i = si.mul(si).mul(si);
            let lhs = si.mul(&sj2).mul(&inv_i);
            let exp = (-2 * gcm.entry(j, i)).rem_euclid(4);
            let mut rhs = sj2.clone();
            for _ in 0..exp {
                rhs = rhs.mul(si);
            }
            if lhs != rhs {
                conj.failures
                    .push(format!("nodes {},{}", gcm.label(i), gcm.label(j)));
            }
        }
    }
    out.push(conj);

    let mut moving = SuiteCheck {
        name: "root_moving",
        instances: 0,
        failures: Vec::new(),
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let Some(m) = gcm.edge_label(i, j) else { continue };
            moving.instances += 1;
            let ok = if m == 3 {
                let img = lie.star(j).mul(lie.star(i)).mul_vec(&lie.simple_e(j));
                img == lie.simple_e(i)
            } else {
                let mut w = IMat::identity(dim);
                for t in 0..m - 1 {
                    w = w.mul(lie.star(if t % 2 == 0 { i } else { j }));
                }
                w.mul_vec(&lie.simple_e(j)) == lie.simple_e(j)
            };
            if !ok {
                moving
                    .failures
                    .push(format!("m={m} pair {},{}", gcm.label(i), gcm.label(j)));
            }
        }
    }
    out.push(moving);

    let mut fixes = SuiteCheck {
        name: "stabilizer_fixes_vector",
        instances: 0,
        failures: Vec::new(),
    };
    let mut w_index = SuiteCheck {
        name: "stabilizer_index_in_w",
        instances: n,
        failures: Vec::new(),
    };
    let mut wstar_index = SuiteCheck {
        name: "stabilizer_index_in_wstar",
        instances: n,
        failures: Vec::new(),
    };
    let w_order = weyl::weyl_order(gcm).expect("spherical diagram");
    let wstar_order = lie.wstar_order();
    for i in 0..n {
        let gens = stabilizer_generators(gcm, i)?;
        let e_i = lie.simple_e(i);
        let minus: Vec<i64> = e_i.iter().map(|c| -c).collect();
        for gen in &gens {
            fixes.instances += 1;
            let img = lie.star_word(&gen.word).mul_vec(&e_i);
            let want = match gen.kind {
                StabKind::SquareTwist(l) if gcm.entry(l, i).rem_euclid(2) == 1 => &minus,
                _ => &e_i,
            };
            if img != *want {
                fixes
                    .failures
                    .push(format!("node {} gen {:?}", gcm.label(i), gen.kind));
            }
        }
        let words: Vec<StarWord> = gens.iter().map(|g| g.word.clone()).collect();
        let orbit = lie.root_orbit_size(&lie.roots().simple(i));
        if refl_word_order(gcm, &words) * orbit != w_order {
            w_index.failures.push(format!("node {}", gcm.label(i)));
        }
        if lie.word_group_order(&words) * orbit != wstar_order {
            wstar_index.failures.push(format!("node {}", gcm.label(i)));
        }
    }
    out.push(fixes);
    out.push(w_index);
    out.push(wstar_index);

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Gcm;

    fn lie(name: &str) -> LieAlgebra {
        LieAlgebra::new(&Gcm::named(name).unwrap()).unwrap()
    }

    #[test]
    fn symmetrizers() {
        assert_eq!(symmetrizer(&Gcm::named("B2").unwrap()), vec![1, 2]);
        assert_eq!(symmetrizer(&Gcm::named("G2").unwrap()), vec![1, 3]);
        assert_eq!(symmetrizer(&Gcm::named("F4").unwrap()), vec![2, 2, 1, 1]);
        assert_eq!(symmetrizer(&Gcm::named("A3").unwrap()), vec![1, 1, 1]);
        assert_eq!(symmetrizer(&Gcm::named("C3").unwrap()), vec![1, 1, 2]);
    }

    #[test]
    fn rejects_nonspherical() {
        assert!(matches!(
            LieAlgebra::new(&Gcm::named("A1~").unwrap()),
            Err(ChevError::NotSpherical(_))
        ));
    }

    #[test]
    fn dimensions() {
        assert_eq!(lie("A1").dim(), 3);
        assert_eq!(lie("A2").dim(), 8);
        assert_eq!(lie("B2").dim(), 10);
        assert_eq!(lie("G2").dim(), 14);
        assert_eq!(lie("A3").dim(), 15);
        assert_eq!(lie("D4").dim(), 28);
        assert_eq!(lie("F4").dim(), 52);
    }

    #[test]
    fn structure_constant_magnitudes() {
        // |N(x,y)| = p + 1 where p is the chain length down from y.
        for name in ["A2", "B2", "G2", "B3", "C3", "F4"] {
            let l = lie(name);
            let all: Vec<Vec<i64>> = l.roots().all_roots();
            for x in &all {
                for y in &all {
                    let sum: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                    if sum.iter().all(|&c| c == 0) || !l.roots().is_root(&sum) {
                        continue;
                    }
                    let mut p = 0i64;
                    loop {
                        let v: Vec<i64> = y
                            .iter()
                            .zip(x)
                            .map(|(b, a)| b - (p + 1) * a)
                            .collect();
                        if l.roots().is_root(&v) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    assert_eq!(l.n_const(x, y).abs(), p + 1, "{name} {x:?} {y:?}");
                }
            }
        }
    }

    #[test]
    fn antisymmetry_and_negation() {
        for name in ["B2", "G2"] {
            let l = lie(name);
            let all = l.roots().all_roots();
            for x in &all {
                for y in &all {
                    let sum: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                    if sum.iter().all(|&c| c == 0) || !l.roots().is_root(&sum) {
                        continue;
                    }
                    let nx: Vec<i64> = x.iter().map(|c| -c).collect();
                    let ny: Vec<i64> = y.iter().map(|c| -c).collect();
                    assert_eq!(l.n_const(y, x), -l.n_const(x, y));
                    assert_eq!(l.n_const(&nx, &ny), -l.n_const(x, y));
                }
            }
        }
    }

    #[test]
    fn jacobi_identity() {
        for name in ["A2", "B2", "G2", "A3", "C3"] {
            let l = lie(name);
            let dim = l.dim();
            let basis: Vec<Vec<i64>> = (0..dim)
                .map(|k| {
                    let mut v = vec![0i64; dim];
                    v[k] = 1;
                    v
                })
                .collect();
            for x in 0..dim {
                for y in x..dim {
                    for z in y..dim {
                        let add = |a: &[i64], b: &[i64]| -> Vec<i64> {
                            a.iter().zip(b).map(|(u, v)| u + v).collect()
                        };
                        let t1 = l.bracket(&basis[x], &l.bracket(&basis[y], &basis[z]));
                        let t2 = l.bracket(&basis[y], &l.bracket(&basis[z], &basis[x]));
                        let t3 = l.bracket(&basis[z], &l.bracket(&basis[x], &basis[y]));
                        let total = add(&add(&t1, &t2), &t3);
                        assert!(
                            total.iter().all(|&c| c == 0),
                            "{name} jacobi fails at {x},{y},{z}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn serre_relations() {
        for name in ["B2", "G2", "F4"] {
            let l = lie(name);
            let n = l.rank();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let bound = 1 - l.gcm().entry(i, j);
                    let mut v = l.simple_e(j);
                    for _ in 0..bound {
                        v = l.bracket(&l.simple_e(i), &v);
                    }
                    assert!(v.iter().all(|&c| c == 0), "{name} serre {i},{j}");
                }
            }
        }
    }

    #[test]
    fn exp_ad_is_nilpotent_of_low_degree() {
        let l = lie("G2");
        for i in 0..2 {
            let e = l.exp_simple_e(i);
            assert!(e.mats.len() <= 5);
            let f = l.exp_simple_f(i);
            assert!(f.mats.len() <= 5);
        }
        // Non-nilpotent input is rejected.
        let mut h = vec![0i64; l.dim()];
        h[l.dim() - 1] = 1;
        assert!(matches!(
            l.exp_ad(&h),
            Err(ChevError::NonIntegralDividedPower(_))
        ));
    }

    #[test]
    fn star_squares_are_coroot_involutions() {
        for name in ["A2", "B2", "G2", "A3"] {
            let l = lie(name);
            for i in 0..l.rank() {
                let s = l.star(i);
                let s2 = s.mul(s);
                let alpha = l.roots().simple(i);
                let coroot = l.roots().coroot_of(&alpha).unwrap();
                assert_eq!(s2, l.ad_coroot(&coroot), "{name} node {i}");
                assert!(s2.mul(&s2).is_identity());
            }
        }
    }

    #[test]
    fn star_conjugation_identity() {
        for name in ["A2", "B2", "G2"] {
            let l = lie(name);
            for i in 0..l.rank() {
                for j in 0..l.rank() {
                    if i == j {
                        continue;
                    }
                    let si = l.star(i);
                    let sj2 = l.star(j).mul(l.star(j));
                    let inv_i = si.mul(si).mul(si);
                    let lhs = si.mul(&sj2).mul(&inv_i);
                    // s*_i^{-2 A_ji} with s*_i^4 = 1.
                    let exp = (-2 * l.gcm().entry(j, i)).rem_euclid(4);
                    let mut rhs = sj2.clone();
                    for _ in 0..exp {
                        rhs = rhs.mul(si);
                    }
                    assert_eq!(lhs, rhs, "{name} {i},{j}");
                }
            }
        }
    }

    #[test]
    fn artin_relations_hold_in_star_matrices() {
        for name in ["A2", "B2", "G2", "B3"] {
            let l = lie(name);
            for i in 0..l.rank() {
                for j in 0..i {
                    let m = match l.gcm().edge_label(i, j) {
                        Some(m) => m,
                        None => continue,
                    };
                    let mut lhs = IMat::identity(l.dim());
                    let mut rhs = IMat::identity(l.dim());
                    for t in 0..m {
                        lhs = lhs.mul(l.star(if t % 2 == 0 { i } else { j }));
                        rhs = rhs.mul(l.star(if t % 2 == 0 { j } else { i }));
                    }
                    assert_eq!(lhs, rhs, "{name} braid {i},{j}");
                }
            }
        }
    }

    #[test]
    fn star_moves_root_vectors() {
        // Odd edge: s*_j s*_i carries e_j to e_i exactly.
        let a2 = lie("A2");
        let e1 = a2.simple_e(1);
        let moved = a2.star(1).mul(a2.star(0)).mul_vec(&e1);
        assert_eq!(moved, a2.simple_e(0));
        // Even edges fix the other simple vector via the alternating
        // word of length m - 1.
        for (name, m) in [("B2", 4usize), ("G2", 6)] {
            let l = lie(name);
            for (i, j) in [(0usize, 1usize), (1, 0)] {
                let mut w = IMat::identity(l.dim());
                for t in 0..m - 1 {
                    w = w.mul(l.star(if t % 2 == 0 { i } else { j }));
                }
                assert_eq!(w.mul_vec(&l.simple_e(j)), l.simple_e(j), "{name} {i},{j}");
            }
        }
        let a1a1 = LieAlgebra::new(&Gcm::parse("A1+A1").unwrap()).unwrap();
        assert_eq!(
            a1a1.star(0).mul_vec(&a1a1.simple_e(1)),
            a1a1.simple_e(1)
        );
    }

    #[test]
    fn ad_is_equivariant() {
        let l = lie("B2");
        let words: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![0, 1], vec![1, 0, 1]];
        for word in words {
            let w: StarWord = word.iter().map(|&i| (i, 1)).collect();
            let wm = l.star_word(&w);
            let winv = l.star_word(&w.iter().rev().map(|&(i, _)| (i, -1)).collect::<Vec<_>>());
            assert!(wm.mul(&winv).is_identity());
            for p in l.roots().positive_roots() {
                let lhs = wm.mul(&l.ad_coroot(&p.coroot)).mul(&winv);
                let mut image = p.coroot.clone();
                for &i in word.iter().rev() {
                    image = weyl::reflect_coroot(l.gcm(), i, &image);
                }
                assert_eq!(lhs, l.ad_coroot(&image));
            }
        }
    }

    #[test]
    fn wstar_orders() {
        // |W| times the span of the coroot parity vectors: the
        // squares s*_i^2 generate the diagonal kernel.
        assert_eq!(lie("A1").wstar_order(), 2);
        assert_eq!(lie("A2").wstar_order(), 24);
        assert_eq!(lie("B2").wstar_order(), 16);
        assert_eq!(lie("G2").wstar_order(), 48);
    }

    #[test]
    fn e_sets() {
        let a2 = lie("A2");
        let both = a2.e_set(&[1, 1]);
        assert_eq!(both.len(), 2);
        let idx = a2.root_basis_index(&[1, 1]).unwrap();
        assert_eq!(both[0][idx], 1);
        assert_eq!(both[1][idx], -1);
    }

    #[test]
    fn p_words() {
        let a3 = Gcm::named("A3").unwrap();
        assert_eq!(p_word(&a3, &[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(p_word(&a3, &[0, 1, 2]).unwrap(), vec![1, 2, 0, 1]);
        assert_eq!(p_word(&a3, &[1]).unwrap(), Vec::<usize>::new());
        assert!(matches!(
            p_word(&a3, &[0, 2]),
            Err(ChevError::NotAnOddPath(_))
        ));
        let b2 = Gcm::named("B2").unwrap();
        assert!(p_word(&b2, &[0, 1]).is_err());
    }

    #[test]
    fn stabilizer_generator_shapes() {
        let a3 = Gcm::named("A3").unwrap();
        let gens = stabilizer_generators(&a3, 0).unwrap();
        // r for j = 0, k = 2 (unjoined): bare s_3.
        assert!(gens.iter().any(|g| {
            g.kind == StabKind::Transport { j: 0, k: 2 } && g.word == vec![(2, 1)]
        }));
        // r for j = 2, k = 0 conjugated along the odd path 0-1-2.
        let expect: StarWord = vec![
            (1, -1),
            (0, -1),
            (2, -1),
            (1, -1),
            (0, 1),
            (1, 1),
            (2, 1),
            (0, 1),
            (1, 1),
        ];
        assert!(gens.iter().any(|g| {
            g.kind == StabKind::Transport { j: 2, k: 0 } && g.word == expect
        }));
        let b2 = Gcm::named("B2").unwrap();
        let bgens = stabilizer_generators(&b2, 0).unwrap();
        assert!(bgens.iter().any(|g| {
            g.kind == StabKind::Transport { j: 0, k: 1 } && g.word == vec![(1, 1), (0, 1), (1, 1)]
        }));
    }

    #[test]
    fn identity_suite_passes_on_small_diagrams() {
        for name in ["A2", "B2", "G2", "A3", "A1+A1"] {
            let g = Gcm::parse(name).unwrap();
            let checks = wstar_suite(&g).unwrap();
            assert_eq!(checks.len(), 7);
            for c in &checks {
                assert!(c.passed(), "{name}: {} fails on {:?}", c.name, c.failures);
            }
        }
        assert!(wstar_suite(&Gcm::parse("A2~").unwrap()).is_err());
    }

    #[test]
    fn stabilizers_have_orbit_stabilizer_order() {
        for name in ["A2", "A3", "B2", "B3", "G2"] {
            let g = Gcm::named(name).unwrap();
            let l = LieAlgebra::new(&g).unwrap();
            let total = l.wstar_order();
            for i in 0..g.rank() {
                let gens = stabilizer_generators(&g, i).unwrap();
                let alpha = l.roots().simple(i);
                // Every generator fixes the root line of alpha_i.
                for gen in &gens {
                    let m = l.star_word(&gen.word);
                    let img = m.mul_vec(&l.simple_e(i));
                    let plus = l.simple_e(i);
                    let minus: Vec<i64> = plus.iter().map(|c| -c).collect();
                    match gen.kind {
                        StabKind::SquareTwist(lnode) => {
                            let sign = if g.entry(lnode, i).rem_euclid(2) == 0 { &plus } else { &minus };
                            assert_eq!(&img, sign, "{name} node {i}");
                        }
                        _ => assert_eq!(img, plus, "{name} node {i} {:?}", gen.kind),
                    }
                }
                let words: Vec<StarWord> = gens.iter().map(|g| g.word.clone()).collect();
                let sub = l.word_group_order(&words);
                let orbit = l.root_orbit_size(&alpha);
                assert_eq!(sub * orbit, total, "{name} node {i}");
            }
        }
    }
}
