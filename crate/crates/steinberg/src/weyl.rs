//! Real roots and Weyl-group combinatorics for a generalized Cartan
//! matrix.
//!
//! Roots are integer coordinate vectors in the simple-root basis,
//! coroots in the simple-coroot basis. Enumeration works level by
//! level from the simple roots, so it terminates exactly when the
//! (possibly infinite) root system has been exhausted or the level
//! bound is hit.

use crate::cartan::Gcm;
use std::collections::{BTreeMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("dimension mismatch: expected rank {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not real roots of this system: {0}")]
    NotRealRoots(String),
    #[error("pair is not classically prenilpotent: {0}")]
    PairNotClassicallyPrenilpotent(String),
}

/// ⟨α_i∨, β⟩ for β in root coordinates.
pub fn simple_pairing(gcm: &Gcm, i: usize, beta: &[i64]) -> i64 {
    (0..gcm.rank()).map(|j| gcm.entry(i, j) * beta[j]).sum()
}

/// ⟨β∨, γ⟩ for a coroot and a root in their simple bases.
pub fn pairing(gcm: &Gcm, coroot: &[i64], root: &[i64]) -> i64 {
    let n = gcm.rank();
    let mut acc = 0;
    for j in 0..n {
        for k in 0..n {
            acc += coroot[j] * gcm.entry(j, k) * root[k];
        }
    }
    acc
}

/// s_i acting on a root: only coordinate i changes.
pub fn reflect_root(gcm: &Gcm, i: usize, beta: &[i64]) -> Vec<i64> {
    let mut out = beta.to_vec();
    out[i] -= simple_pairing(gcm, i, beta);
    out
}

/// s_i acting on a coroot.
pub fn reflect_coroot(gcm: &Gcm, i: usize, coroot: &[i64]) -> Vec<i64> {
    let n = gcm.rank();
    let mut out = coroot.to_vec();
    let p: i64 = (0..n).map(|j| coroot[j] * gcm.entry(j, i)).sum();
    out[i] -= p;
    out
}

/// Applies s_{w[0]} s_{w[1]} ... s_{w[k-1]} to a root; the rightmost
/// letter acts first.
pub fn apply_word(gcm: &Gcm, word: &[usize], beta: &[i64]) -> Vec<i64> {
    let mut v = beta.to_vec();
    for &i in word.iter().rev() {
        v = reflect_root(gcm, i, &v);
    }
    v
}

/// Matrix of s_i on root coordinates (row-major, acts on columns).
pub fn reflection_matrix(gcm: &Gcm, i: usize) -> Vec<Vec<i64>> {
    let n = gcm.rank();
    let mut m = vec![vec![0i64; n]; n];
    for r in 0..n {
        m[r][r] = 1;
    }
    for j in 0..n {
        m[i][j] -= gcm.entry(i, j);
    }
    m
}

pub fn height(beta: &[i64]) -> i64 {
    beta.iter().sum()
}

/// Order of the Weyl group by closure of the reflection matrices;
/// None for non-spherical diagrams.
pub fn weyl_order(gcm: &Gcm) -> Option<u64> {
    if !gcm.is_spherical() {
        return None;
    }
    let n = gcm.rank();
    let gens: Vec<Vec<i64>> = (0..n)
        .map(|i| reflection_matrix(gcm, i).concat())
        .collect();
    let mut id = vec![0i64; n * n];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let mut y = vec![0i64; n * n];
            for r in 0..n {
                for k in 0..n {
                    let v = g[r * n + k];
                    if v == 0 {
                        continue;
                    }
                    for c in 0..n {
                        y[r * n + c] += v * x[k * n + c];
                    }
                }
            }
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Some(seen.len() as u64)
}

#[derive(Debug, Clone)]
pub struct PosRoot {
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
    pub level: usize,
}

/// The real roots found within a level bound, with their coroots.
#[derive(Debug, Clone)]
pub struct RootSystem {
    gcm: Gcm,
    positives: Vec<PosRoot>,
    index: BTreeMap<Vec<i64>, usize>,
    stabilized: bool,
    bound: usize,
}

/// Breadth-first closure of the simple roots under simple
/// reflections, keeping positive results. Level 1 is the simple
/// roots; each further level reflects the previous one. Stops early
/// once a level adds nothing, in which case the system is complete.
pub fn enumerate_roots(gcm: &Gcm, bound: usize) -> RootSystem {
    let n = gcm.rank();
    let mut positives: Vec<PosRoot> = Vec::new();
    let mut index: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut frontier: Vec<usize> = Vec::new();
    let mut stabilized = false;
    if bound >= 1 {
        for i in 0..n {
            let mut root = vec![0i64; n];
            root[i] = 1;
            let mut coroot = vec![0i64; n];
            coroot[i] = 1;
            index.insert(root.clone(), positives.len());
            frontier.push(positives.len());
            positives.push(PosRoot { root, coroot, level: 1 });
        }
    }
    for level in 2..=bound {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (root, coroot) = (positives[idx].root.clone(), positives[idx].coroot.clone());
            for i in 0..n {
                let r = reflect_root(gcm, i, &root);
                if r.iter().any(|&c| c < 0) || index.contains_key(&r) {
                    continue;
                }
                let c = reflect_coroot(gcm, i, &coroot);
                index.insert(r.clone(), positives.len());
                next.push(positives.len());
                positives.push(PosRoot { root: r, coroot: c, level });
            }
        }
        if next.is_empty() {
            stabilized = true;
            break;
        }
        frontier = next;
    }
    if bound >= 1 && !stabilized {
        // One extra probe: complete if the last frontier reflects
        // back into the known set.
        stabilized = frontier.iter().all(|&idx| {
            (0..n).all(|i| {
                let r = reflect_root(gcm, i, &positives[idx].root);
                r.iter().any(|&c| c < 0) || index.contains_key(&r)
            })
        });
    }
    RootSystem { gcm: gcm.clone(), positives, index, stabilized, bound }
}

impl RootSystem {
    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// True when enumeration closed up before hitting the bound, i.e.
    /// the listed roots are all the real roots.
    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn positive_roots(&self) -> &[PosRoot] {
        &self.positives
    }

    /// All roots, positives then negatives.
    pub fn all_roots(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.positives.iter().map(|p| p.root.clone()).collect();
        out.extend(self.positives.iter().map(|p| p.root.iter().map(|c| -c).collect::<Vec<i64>>()));
        out
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.signed_index(v).is_some()
    }

    fn signed_index(&self, v: &[i64]) -> Option<(usize, i64)> {
        if v.iter().all(|&c| c >= 0) {
            return self.index.get(v).map(|&i| (i, 1));
        }
        let neg: Vec<i64> = v.iter().map(|c| -c).collect();
        self.index.get(&neg).map(|&i| (i, -1))
    }

    /// Coroot of a (possibly negative) root.
    pub fn coroot_of(&self, v: &[i64]) -> Option<Vec<i64>> {
        let (i, sign) = self.signed_index(v)?;
        Some(self.positives[i].coroot.iter().map(|c| sign * c).collect())
    }

    pub fn simple(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.rank()];
        v[i] = 1;
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank2Type {
    A1,
    A1xA1,
    A2,
    B2,
    G2,
    Infinite,
}

/// Roots of the ambient system lying in the rational span of a and b.
fn span_roots(rs: &RootSystem, a: &[i64], b: &[i64]) -> Vec<Vec<i64>> {
    rs.all_roots()
        .into_iter()
        .filter(|g| in_span(a, b, g))
        .collect()
}

/// Whether g = x·a + y·b has a rational solution.
fn in_span(a: &[i64], b: &[i64], g: &[i64]) -> bool {
    let n = a.len();
    // Find a nonsingular 2x2 minor of (a b).
    for r0 in 0..n {
        for r1 in r0 + 1..n {
            let det = a[r0] * b[r1] - a[r1] * b[r0];
            if det == 0 {
                continue;
            }
            // Cramer, scaled by det to stay integral.
            let x_num = g[r0] * b[r1] - g[r1] * b[r0];
            let y_num = a[r0] * g[r1] - a[r1] * g[r0];
            return (0..n).all(|r| a[r] * x_num + b[r] * y_num == det * g[r]);
        }
    }
    // a and b are proportional; g must be proportional to a.
    let r0 = match (0..n).find(|&r| a[r] != 0) {
        Some(r) => r,
        None => return false,
    };
    (0..n).all(|r| a[r] * g[r0] == g[r] * a[r0])
}

/// Type of the rank-2 (or rank-1) root subsystem spanned by two
/// roots, decided by cardinality with a growth re-check so that
/// infinite subsystems are not mistaken for finite ones.
pub fn rank2_type(rs: &RootSystem, a: &[i64], b: &[i64]) -> Rank2Type {
    let count = span_roots(rs, a, b).len();
    let again = enumerate_roots(&rs.gcm, rs.bound + 4);
    if span_roots(&again, a, b).len() != count {
        return Rank2Type::Infinite;
    }
    match count {
        2 => Rank2Type::A1,
        4 => Rank2Type::A1xA1,
        6 => Rank2Type::A2,
        8 => Rank2Type::B2,
        12 => Rank2Type::G2,
        _ => Rank2Type::Infinite,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// No Weyl image makes both roots negative (or the pair is ±α).
    NotPrenilpotent,
    /// Both roots lie in a common finite rank-≤2 subsystem.
    ClassicallyPrenilpotent(Rank2Type),
    /// Prenilpotent, but the spanned subsystem is infinite.
    PrenilpotentOnly,
    /// The bounded search was inconclusive.
    Unknown,
}

fn check_root(rs: &RootSystem, v: &[i64]) -> Result<(), WeylError> {
    if v.len() != rs.rank() {
        return Err(WeylError::DimensionMismatch { expected: rs.rank(), got: v.len() });
    }
    if !rs.is_root(v) {
        return Err(WeylError::NotRealRoots(format!("{v:?}")));
    }
    Ok(())
}

/// Classifies a pair of real roots by how they sit with respect to
/// Weyl images of the positive system.
pub fn classify_pair(rs: &RootSystem, a: &[i64], b: &[i64]) -> Result<PairClass, WeylError> {
    check_root(rs, a)?;
    check_root(rs, b)?;
    let neg_a: Vec<i64> = a.iter().map(|c| -c).collect();
    if b == neg_a.as_slice() {
        return Ok(PairClass::NotPrenilpotent);
    }
    let t = rank2_type(rs, a, b);
    if t != Rank2Type::Infinite {
        return Ok(PairClass::ClassicallyPrenilpotent(t));
    }
    // Budgeted orbit search for images with both roots positive and
    // images with both negative.
    let n = rs.rank();
    let mut seen: BTreeMap<(Vec<i64>, Vec<i64>), ()> = BTreeMap::new();
    let mut frontier = vec![(a.to_vec(), b.to_vec())];
    seen.insert(frontier[0].clone(), ());
    let (mut both_pos, mut both_neg) = (false, false);
    let positive = |v: &[i64]| v.iter().all(|&c| c >= 0);
    let negative = |v: &[i64]| v.iter().all(|&c| c <= 0);
    for _ in 0..12 {
        let mut next = Vec::new();
        for (x, y) in &frontier {
            both_pos |= positive(x) && positive(y);
            both_neg |= negative(x) && negative(y);
            if both_pos && both_neg {
                return Ok(PairClass::PrenilpotentOnly);
            }
            for i in 0..n {
                let pair = (reflect_root(&rs.gcm, i, x), reflect_root(&rs.gcm, i, y));
                if seen.insert(pair.clone(), ()).is_none() {
                    next.push(pair);
                }
            }
        }
        frontier = next;
        if seen.len() > 20_000 {
            break;
        }
    }
    for (x, y) in &frontier {
        both_pos |= positive(x) && positive(y);
        both_neg |= negative(x) && negative(y);
    }
    if both_pos && both_neg {
        return Ok(PairClass::PrenilpotentOnly);
    }
    // A W-fixed positive vector c·a + d·b certifies that no image
    // ever makes both roots negative.
    for c in 1..=6i64 {
        for d in 1..=6i64 {
            let v: Vec<i64> = (0..n).map(|r| c * a[r] + d * b[r]).collect();
            if v.iter().all(|&x| x >= 0)
                && v.iter().any(|&x| x > 0)
                && (0..n).all(|i| reflect_root(&rs.gcm, i, &v) == v)
            {
                return Ok(PairClass::NotPrenilpotent);
            }
        }
    }
    Ok(PairClass::Unknown)
}

/// The closed interval of roots between a and b: all m·a + n·b with
/// m, n ≥ 0 that are roots. Only defined for classically
/// prenilpotent pairs.
pub fn theta(rs: &RootSystem, a: &[i64], b: &[i64]) -> Result<Vec<Vec<i64>>, WeylError> {
    match classify_pair(rs, a, b)? {
        PairClass::ClassicallyPrenilpotent(_) => {}
        other => {
            return Err(WeylError::PairNotClassicallyPrenilpotent(format!(
                "{a:?}, {b:?} classified {other:?}"
            )))
        }
    }
    let n = rs.rank();
    let mut out = Vec::new();
    for m in 0..=4i64 {
        for k in 0..=4i64 {
            if m == 0 && k == 0 {
                continue;
            }
            let v: Vec<i64> = (0..n).map(|r| m * a[r] + k * b[r]).collect();
            if rs.is_root(&v) && !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out.sort_by_key(|v| (height(v), v.clone()));
    Ok(out)
}
