//! Relator emission: generator symbols, the relator batches, pruning,
//! and the JSON/GAP exporters.

use crate::cartan::Gcm;
use crate::ring::{Ring, Value};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error)]
pub enum PresentError {
    #[error("infinite ring: {0}")]
    InfiniteRing(String),
    #[error("unsupported edge: {0}")]
    UnsupportedEdge(String),
    #[error("wrong diagram: {0}")]
    WrongDiagram(String),
}

/// A generator symbol: `S(i)` or `X(i, t)`.
///
/// `X(i, 0)` is an ordinary symbol; its triviality is a consequence of
/// the additivity relators, not an assumption.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    S(usize),
    X(usize, Value),
}

impl Gen {
    pub fn node(&self) -> usize {
        match self {
            Gen::S(i) => *i,
            Gen::X(i, _) => *i,
        }
    }
}

/// A freely reduced word in the generators, stored letter by letter
/// with exponents ±1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<(Gen, i32)>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn push(&mut self, g: Gen, e: i32) {
        debug_assert!(e == 1 || e == -1);
        match self.0.last() {
            Some((h, f)) if *h == g && *f == -e => {
                self.0.pop();
            }
            _ => self.0.push((g, e)),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for (g, e) in &other.0 {
            out.push(g.clone(), *e);
        }
        out
    }

    pub fn inv(&self) -> Word {
        Word(self.0.iter().rev().map(|(g, e)| (g.clone(), -e)).collect())
    }

    /// `by · self · by⁻¹`.
    pub fn conj(&self, by: &Word) -> Word {
        by.mul(self).mul(&by.inv())
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn comm(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inv()).mul(&b.inv())
    }

    pub fn nodes(&self) -> BTreeSet<usize> {
        self.0.iter().map(|(g, _)| g.node()).collect()
    }

    fn relabel(&self, map: &[usize]) -> Word {
        Word(
            self.0
                .iter()
                .map(|(g, e)| {
                    let g = match g {
                        Gen::S(i) => Gen::S(map[*i]),
                        Gen::X(i, t) => Gen::X(map[*i], t.clone()),
                    };
                    (g, *e)
                })
                .collect(),
        )
    }
}

fn ws(i: usize) -> Word {
    Word(vec![(Gen::S(i), 1)])
}

fn wx(i: usize, t: Value) -> Word {
    Word(vec![(Gen::X(i, t), 1)])
}

fn ws2(i: usize) -> Word {
    Word(vec![(Gen::S(i), 1), (Gen::S(i), 1)])
}

/// One relator together with its provenance: batch number (5 means the
/// torus multiplicativity batch), family label, the nodes it was
/// emitted for, and the ring parameters it was instantiated at.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relator {
    pub batch: u8,
    pub family: &'static str,
    pub nodes: Vec<usize>,
    pub params: Vec<Value>,
    pub word: Word,
}

impl Relator {
    pub fn relabel(&self, map: &[usize]) -> Relator {
        Relator {
            batch: self.batch,
            family: self.family,
            nodes: self.nodes.iter().map(|&n| map[n]).collect(),
            params: self.params.clone(),
            word: self.word.relabel(map),
        }
    }
}

fn rel(batch: u8, family: &'static str, nodes: Vec<usize>, params: Vec<Value>, word: Word) -> Relator {
    Relator { batch, family, nodes, params, word }
}

/// Parameter ranges for one emission pass.  Finite rings range over
/// everything; polynomial rings get a single generic instance per
/// family, with unit parameters drawn from the declared unit variables.
struct ParamSet {
    elems: Vec<Value>,
    pairs: Vec<(Value, Value)>,
    units: Vec<Value>,
}

fn param_set(ring: &Ring) -> Result<ParamSet, PresentError> {
    if let Ok(elems) = ring.elements() {
        let mut pairs = Vec::with_capacity(elems.len() * elems.len());
        for t in &elems {
            for u in &elems {
                pairs.push((t.clone(), u.clone()));
            }
        }
        let units = ring.units().unwrap().into_iter().map(|(u, _)| u).collect();
        return Ok(ParamSet { elems, pairs, units });
    }
    let pv = ring.poly_vars();
    let uv = ring.unit_vars();
    if pv.len() < 2 {
        return Err(PresentError::InfiniteRing(format!(
            "{} has no finite enumeration and fewer than two polynomial variables",
            ring.dsl()
        )));
    }
    if uv.is_empty() {
        return Err(PresentError::InfiniteRing(format!(
            "{} has no finite enumeration and no unit variable",
            ring.dsl()
        )));
    }
    let t = pv[0].1.clone();
    let u = pv[1].1.clone();
    Ok(ParamSet {
        elems: vec![t.clone()],
        pairs: vec![(t, u)],
        units: vec![uv[0].1.clone()],
    })
}

fn finite_elems(ring: &Ring) -> Result<Vec<Value>, PresentError> {
    ring.elements().map_err(|e| PresentError::InfiniteRing(e.to_string()))
}

/// Batch 0: Artin relators for each finite edge label, and the
/// square-conjugation relators for every ordered pair of distinct
/// nodes.
pub fn what_relators(gcm: &Gcm) -> Vec<Relator> {
    let n = gcm.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if let Some(m) = gcm.edge_label(i, j) {
                let mut left = Word::empty();
                let mut right = Word::empty();
                for k in 0..m as usize {
                    left.push(Gen::S(if k % 2 == 0 { i } else { j }), 1);
                    right.push(Gen::S(if k % 2 == 0 { j } else { i }), 1);
                }
                out.push(rel(0, "artin", vec![i, j], vec![], left.mul(&right.inv())));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let eps: i32 = if gcm.entry(i, j) % 2 == 0 { 1 } else { -1 };
            let mut w = ws2(i).mul(&ws(j)).mul(&ws2(i).inv());
            w.push(Gen::S(j), -eps);
            out.push(rel(0, "square_conj", vec![i, j], vec![], w));
        }
    }
    out
}

fn emit_batch1(gcm: &Gcm, ring: &Ring, pairs: &[(Value, Value)]) -> Vec<Relator> {
    let mut out = Vec::new();
    for i in 0..gcm.rank() {
        for (t, u) in pairs {
            let w = wx(i, t.clone())
                .mul(&wx(i, u.clone()))
                .mul(&wx(i, ring.add(t, u)).inv());
            out.push(rel(1, "additivity", vec![i], vec![t.clone(), u.clone()], w));
        }
    }
    out
}

/// Batch 1: `X_i(t) X_i(u) X_i(t+u)⁻¹` over all of R × R.
pub fn additivity_relators(gcm: &Gcm, ring: &Ring) -> Result<Vec<Relator>, PresentError> {
    let elems = finite_elems(ring)?;
    let mut pairs = Vec::new();
    for t in &elems {
        for u in &elems {
            pairs.push((t.clone(), u.clone()));
        }
    }
    Ok(emit_batch1(gcm, ring, &pairs))
}

/// Additive order of `b`: least n > 0 with n·b = 0.
fn additive_order(ring: &Ring, b: &Value) -> u64 {
    let mut acc = b.clone();
    let mut n = 1;
    while !ring.is_zero(&acc) {
        acc = ring.add(&acc, b);
        n += 1;
    }
    n
}

/// An additive generating set with canonical coefficients: for Z/n the
/// element 1; for GF(p^k) the monomial basis.  Returns the basis and,
/// for each ring element, its coefficient vector.
fn additive_basis(ring: &Ring) -> Result<(Vec<Value>, BTreeMap<Value, Vec<u64>>), PresentError> {
    let elems = finite_elems(ring)?;
    let mut basis: Vec<Value> = Vec::new();
    let mut span: BTreeMap<Value, Vec<u64>> = BTreeMap::new();
    span.insert(ring.zero(), vec![]);
    for e in &elems {
        if span.contains_key(e) {
            continue;
        }
        let ord = additive_order(ring, e);
        let old: Vec<(Value, Vec<u64>)> = span.iter().map(|(v, c)| (v.clone(), c.clone())).collect();
        for (v, coeffs) in old {
            let mut acc = v;
            for k in 1..ord {
                acc = ring.add(&acc, e);
                let mut c = coeffs.clone();
                c.resize(basis.len(), 0);
                c.push(k);
                span.insert(acc.clone(), c);
            }
        }
        for c in span.values_mut() {
            c.resize(basis.len() + 1, 0);
        }
        basis.push(e.clone());
    }
    Ok((basis, span))
}

/// Sparse batch 1: additivity imposed only on an additive generating
/// set, plus closure words expressing every other `X_i(t)` in terms of
/// it.  Presents the same group as the full batch.
pub fn sparse_additivity_relators(gcm: &Gcm, ring: &Ring) -> Result<Vec<Relator>, PresentError> {
    let elems = finite_elems(ring)?;
    let (basis, coeffs) = additive_basis(ring)?;
    let mut out = Vec::new();
    for i in 0..gcm.rank() {
        for (m, b) in basis.iter().enumerate() {
            let ord = additive_order(ring, b);
            let mut w = Word::empty();
            for _ in 0..ord {
                w.push(Gen::X(i, b.clone()), 1);
            }
            out.push(rel(1, "basis_order", vec![i], vec![b.clone()], w));
            for c in basis.iter().skip(m + 1) {
                let w = Word::comm(&wx(i, b.clone()), &wx(i, c.clone()));
                out.push(rel(1, "basis_commute", vec![i], vec![b.clone(), c.clone()], w));
            }
        }
        for t in &elems {
            if basis.contains(t) {
                continue;
            }
            let mut canon = Word::empty();
            for (m, b) in basis.iter().enumerate() {
                for _ in 0..coeffs[t][m] {
                    canon.push(Gen::X(i, b.clone()), 1);
                }
            }
            let w = wx(i, t.clone()).mul(&canon.inv());
            out.push(rel(1, "closure", vec![i], vec![t.clone()], w));
        }
    }
    Ok(out)
}

fn emit_batch2(gcm: &Gcm, ring: &Ring, ts: &[Value]) -> Vec<Relator> {
    let n = gcm.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let sign = ring.from_i64(if gcm.entry(i, j) % 2 == 0 { 1 } else { -1 });
            for t in ts {
                let w = ws2(i)
                    .mul(&wx(j, t.clone()))
                    .mul(&ws2(i).inv())
                    .mul(&wx(j, ring.mul(&sign, t)).inv());
                let nodes = if i == j { vec![i] } else { vec![i, j] };
                out.push(rel(2, "sign_twist", nodes, vec![t.clone()], w));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match gcm.edge_label(i, j) {
                Some(3) => {
                    for t in ts {
                        let w = wx(i, t.clone())
                            .mul(&ws(j))
                            .mul(&ws(i))
                            .mul(&ws(j).mul(&ws(i)).mul(&wx(j, t.clone())).inv());
                        out.push(rel(2, "transport", vec![i, j], vec![t.clone()], w));
                    }
                }
                Some(m @ (2 | 4 | 6)) => {
                    let mut conj = Word::empty();
                    for k in 0..(m as usize - 1) {
                        conj.push(Gen::S(if k % 2 == 0 { j } else { i }), 1);
                    }
                    for t in ts {
                        let w = Word::comm(&conj, &wx(i, t.clone()));
                        out.push(rel(2, "braid_commute", vec![i, j], vec![t.clone()], w));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// Batch 2: the square-action relators `B_ij(t)` for every ordered
/// pair (including i = j), the transport relators along single-bond
/// edges, and the braid-word commutation relators for even edge
/// labels.
pub fn batch2_relators(gcm: &Gcm, ring: &Ring) -> Result<Vec<Relator>, PresentError> {
    let elems = finite_elems(ring)?;
    Ok(emit_batch2(gcm, ring, &elems))
}

/// Batch 3 for one edge: the full commutator relator list for its
/// label, with parameters over all of R × R (or one generic instance
/// over a polynomial ring).  The short node is identified internally
/// for labels 4 and 6.
pub fn chevalley_relators(
    gcm: &Gcm,
    ring: &Ring,
    i: usize,
    j: usize,
) -> Result<Vec<Relator>, PresentError> {
    let ps = param_set(ring)?;
    emit_batch3(gcm, ring, i, j, &ps.pairs)
}

fn emit_batch3(
    gcm: &Gcm,
    ring: &Ring,
    i: usize,
    j: usize,
    pairs: &[(Value, Value)],
) -> Result<Vec<Relator>, PresentError> {
    if i == j {
        return Err(PresentError::UnsupportedEdge(format!(
            "node {} paired with itself",
            gcm.label(i)
        )));
    }
    let m = gcm.edge_label(i, j).ok_or_else(|| {
        PresentError::UnsupportedEdge(format!(
            "edge {}–{} has an infinite label",
            gcm.label(i),
            gcm.label(j)
        ))
    })?;
    let mut out = Vec::new();
    let c = |k: i64| ring.from_i64(k);
    match m {
        2 => {
            let (a, b) = (i.min(j), i.max(j));
            for (t, u) in pairs {
                let w = Word::comm(&wx(a, t.clone()), &wx(b, u.clone()));
                out.push(rel(3, "chev2_1", vec![a, b], vec![t.clone(), u.clone()], w));
            }
        }
        3 => {
            for &(i, j) in &[(i.min(j), i.max(j)), (i.max(j), i.min(j))] {
                for (t, u) in pairs {
                    let tu = ring.mul(t, u);
                    let w = Word::comm(&wx(i, t.clone()), &wx(j, u.clone()))
                        .mul(&wx(j, tu).conj(&ws(i)).inv());
                    out.push(rel(3, "chev3_1", vec![i, j], vec![t.clone(), u.clone()], w));
                }
                for (t, u) in pairs {
                    let w = Word::comm(&wx(i, t.clone()), &wx(j, u.clone()).conj(&ws(i)));
                    out.push(rel(3, "chev3_2", vec![i, j], vec![t.clone(), u.clone()], w));
                }
            }
        }
        4 => {
            let s = gcm.short_node(i, j).expect("label-4 edges have a short node");
            let l = if s == i { j } else { i };
            let (i, j) = (s, l);
            for (t, u) in pairs {
                let t = t.clone();
                let u = u.clone();
                let tu = ring.mul(&t, &u);
                let t2u = ring.mul(&ring.mul(&t, &t), &u);
                let w1 = Word::comm(&wx(j, t.clone()).conj(&ws(i)), &wx(i, u.clone()).conj(&ws(j)));
                out.push(rel(3, "chev4_1", vec![i, j], vec![t.clone(), u.clone()], w1));
                let w2 = Word::comm(&wx(j, t.clone()), &wx(j, u.clone()).conj(&ws(i)));
                out.push(rel(3, "chev4_2", vec![i, j], vec![t.clone(), u.clone()], w2));
                let w3 = Word::comm(&wx(i, t.clone()), &wx(i, u.clone()).conj(&ws(j)))
                    .mul(&wx(j, ring.mul(&c(-2), &tu)).conj(&ws(i)).inv());
                out.push(rel(3, "chev4_3", vec![i, j], vec![t.clone(), u.clone()], w3));
                let tail = wx(i, ring.neg(&tu))
                    .conj(&ws(j))
                    .mul(&wx(j, t2u).conj(&ws(i)));
                let w4 = Word::comm(&wx(i, t.clone()), &wx(j, u.clone())).mul(&tail.inv());
                out.push(rel(3, "chev4_4", vec![i, j], vec![t, u], w4));
            }
        }
        6 => {
            let s = gcm.short_node(i, j).expect("label-6 edges have a short node");
            let l = if s == i { j } else { i };
            let (i, j) = (s, l);
            let si = ws(i);
            let sj = ws(j);
            let sij = si.mul(&sj);
            let sji = sj.mul(&si);
            for (t, u) in pairs {
                let t = t.clone();
                let u = u.clone();
                let tu = ring.mul(&t, &u);
                let t2u = ring.mul(&ring.mul(&t, &t), &u);
                let tu2 = ring.mul(&tu, &u);
                let t3u = ring.mul(&t, &t2u);
                let t3u2 = ring.mul(&t3u, &u);
                let w1 = Word::comm(&wx(j, t.clone()), &wx(j, u.clone()).conj(&sji));
                out.push(rel(3, "chev6_1", vec![i, j], vec![t.clone(), u.clone()], w1));
                let w2 = Word::comm(&wx(i, t.clone()).conj(&sij), &wx(j, u.clone()).conj(&sji));
                out.push(rel(3, "chev6_2", vec![i, j], vec![t.clone(), u.clone()], w2));
                let w3 = Word::comm(&wx(j, t.clone()).conj(&si), &wx(i, u.clone()).conj(&sj));
                out.push(rel(3, "chev6_3", vec![i, j], vec![t.clone(), u.clone()], w3));
                let w4 = Word::comm(&wx(j, t.clone()), &wx(j, u.clone()).conj(&si))
                    .mul(&wx(j, tu.clone()).conj(&sji).inv());
                out.push(rel(3, "chev6_4", vec![i, j], vec![t.clone(), u.clone()], w4));
                let w5 = Word::comm(&wx(i, t.clone()), &wx(i, u.clone()).conj(&sij))
                    .mul(&wx(j, ring.mul(&c(3), &tu)).conj(&si).inv());
                out.push(rel(3, "chev6_5", vec![i, j], vec![t.clone(), u.clone()], w5));
                let tail6 = wx(i, ring.mul(&c(-2), &tu))
                    .conj(&sij)
                    .mul(&wx(j, ring.mul(&c(-3), &t2u)).conj(&si))
                    .mul(&wx(j, ring.mul(&c(-3), &tu2)).conj(&sji));
                let w6 = Word::comm(&wx(i, t.clone()), &wx(i, u.clone()).conj(&sj)).mul(&tail6.inv());
                out.push(rel(3, "chev6_6", vec![i, j], vec![t.clone(), u.clone()], w6));
                let tail7 = wx(i, t2u)
                    .conj(&sij)
                    .mul(&wx(i, ring.neg(&tu)).conj(&sj))
                    .mul(&wx(j, t3u).conj(&si))
                    .mul(&wx(j, ring.neg(&t3u2)).conj(&sji));
                let w7 = Word::comm(&wx(i, t.clone()), &wx(j, u.clone())).mul(&tail7.inv());
                out.push(rel(3, "chev6_7", vec![i, j], vec![t, u], w7));
            }
        }
        _ => {
            return Err(PresentError::UnsupportedEdge(format!(
                "edge {}–{} has label {}",
                gcm.label(i),
                gcm.label(j),
                m
            )))
        }
    }
    Ok(out)
}

/// The word `X_i(r) S_i X_i(1/r) S_i⁻¹ X_i(r)`.
pub fn s_tilde(ring: &Ring, i: usize, r: &Value) -> Word {
    let rinv = ring.inv(r).expect("s_tilde needs a unit");
    wx(i, r.clone())
        .mul(&wx(i, rinv).conj(&ws(i)))
        .mul(&wx(i, r.clone()))
}

/// The word `s̃_i(r) s̃_i(−1)`.
pub fn h_tilde(ring: &Ring, i: usize, r: &Value) -> Word {
    s_tilde(ring, i, r).mul(&s_tilde(ring, i, &ring.from_i64(-1)))
}

fn emit_batch4(gcm: &Gcm, ring: &Ring, units: &[Value], ts: &[Value]) -> Vec<Relator> {
    let n = gcm.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let a = gcm.entry(i, j);
            let nodes = if i == j { vec![i] } else { vec![i, j] };
            for r in units {
                let h = h_tilde(ring, i, r);
                let ra = ring.pow(r, a).unwrap();
                let rna = ring.pow(r, -a).unwrap();
                for t in ts {
                    let w = h
                        .mul(&wx(j, t.clone()))
                        .mul(&h.inv())
                        .mul(&wx(j, ring.mul(&ra, t)).inv());
                    out.push(rel(4, "torus_x", nodes.clone(), vec![r.clone(), t.clone()], w));
                    let w = h
                        .mul(&wx(j, t.clone()).conj(&ws(j)))
                        .mul(&h.inv())
                        .mul(&wx(j, ring.mul(&rna, t)).conj(&ws(j)).inv());
                    out.push(rel(4, "torus_sxs", nodes.clone(), vec![r.clone(), t.clone()], w));
                }
            }
        }
    }
    for i in 0..n {
        let one = ring.one();
        let w = ws(i).mul(
            &wx(i, one.clone())
                .mul(&wx(i, one.clone()).conj(&ws(i)))
                .mul(&wx(i, one))
                .inv(),
        );
        out.push(rel(4, "collapse", vec![i], vec![], w));
    }
    out
}

/// Batch 4: the torus action on the `X_j(t)` and on their `S_j`
/// conjugates, plus the collapse relator `S_i = X_i(1) S_i X_i(1)
/// S_i⁻¹ X_i(1)` for each node.
pub fn batch4_relators(gcm: &Gcm, ring: &Ring) -> Result<Vec<Relator>, PresentError> {
    let elems = finite_elems(ring)?;
    let units: Vec<Value> = ring
        .units()
        .map_err(|e| PresentError::InfiniteRing(e.to_string()))?
        .into_iter()
        .map(|(u, _)| u)
        .collect();
    Ok(emit_batch4(gcm, ring, &units, &elems))
}

/// The torus multiplicativity batch: `h̃_i(uv) h̃_i(u)⁻¹ h̃_i(v)⁻¹`
/// over all pairs of units.  Finite rings only.
pub fn kac_moody_relators(gcm: &Gcm, ring: &Ring) -> Result<Vec<Relator>, PresentError> {
    let units: Vec<Value> = ring
        .units()
        .map_err(|e| PresentError::InfiniteRing(e.to_string()))?
        .into_iter()
        .map(|(u, _)| u)
        .collect();
    let mut out = Vec::new();
    for i in 0..gcm.rank() {
        for u in &units {
            for v in &units {
                let w = h_tilde(ring, i, &ring.mul(u, v))
                    .mul(&h_tilde(ring, i, u).inv())
                    .mul(&h_tilde(ring, i, v).inv());
                out.push(rel(5, "torus_mult", vec![i], vec![u.clone(), v.clone()], w));
            }
        }
    }
    Ok(out)
}

/// The shortened relator list for a single double or triple bond.
/// When the ring has characteristic 2 (double bond) or 3 (triple
/// bond) the coefficients that would distinguish the dropped relators
/// vanish, and this list presents the same group as the default
/// batches.  Callers that rely on that equivalence must check the
/// characteristic themselves; the words are emitted for any ring.
pub fn reduced_relators(gcm: &Gcm, ring: &Ring) -> Result<Vec<Relator>, PresentError> {
    if gcm.rank() != 2 {
        return Err(PresentError::WrongDiagram(format!(
            "need exactly two nodes, got {}",
            gcm.rank()
        )));
    }
    let m = match gcm.edge_label(0, 1) {
        Some(m @ (4 | 6)) => m,
        _ => {
            return Err(PresentError::WrongDiagram(
                "need a single double or triple bond".into(),
            ))
        }
    };
    let a = gcm.short_node(0, 1).expect("bond has a short node");
    let b = 1 - a;
    let ps = param_set(ring)?;

    let mut out = emit_batch1(gcm, ring, &ps.pairs);
    let batch2 = emit_batch2(gcm, ring, &ps.elems);
    if m == 4 {
        // The square-action relators are all omitted here.
        out.extend(what_relators(gcm).into_iter().filter(|r| r.family == "artin"));
        out.extend(batch2.into_iter().filter(|r| r.family == "braid_commute"));
    } else {
        out.extend(what_relators(gcm));
        out.extend(batch2);
    }
    for i in [a, b] {
        let one = ring.one();
        let w = ws(i).mul(
            &wx(i, one.clone())
                .mul(&wx(i, one.clone()).conj(&ws(i)))
                .mul(&wx(i, one))
                .inv(),
        );
        out.push(rel(4, "collapse", vec![i], vec![], w));
    }

    if m == 4 {
        for (t, u) in &ps.pairs {
            let t = t.clone();
            let u = u.clone();
            let tu = ring.mul(&t, &u);
            let t2u = ring.mul(&ring.mul(&t, &t), &u);
            let w1 = Word::comm(&wx(b, t.clone()).conj(&ws(a)), &wx(a, u.clone()).conj(&ws(b)));
            out.push(rel(3, "chev4_1", vec![a, b], vec![t.clone(), u.clone()], w1));
            let w2 = Word::comm(&wx(b, t.clone()), &wx(b, u.clone()).conj(&ws(a)));
            out.push(rel(3, "chev4_2", vec![a, b], vec![t.clone(), u.clone()], w2));
            let w2p = Word::comm(&wx(a, t.clone()), &wx(a, u.clone()).conj(&ws(b)));
            out.push(rel(3, "chev4_2_primed", vec![a, b], vec![t.clone(), u.clone()], w2p));
            let tail = wx(a, ring.neg(&tu))
                .conj(&ws(b))
                .mul(&wx(b, t2u).conj(&ws(a)));
            let w4 = Word::comm(&wx(a, t.clone()), &wx(b, u.clone())).mul(&tail.inv());
            out.push(rel(3, "chev4_4", vec![a, b], vec![t, u], w4));
        }
    } else {
        let si = ws(a);
        let sj = ws(b);
        let sij = si.mul(&sj);
        let sji = sj.mul(&si);
        for (t, u) in &ps.pairs {
            let t = t.clone();
            let u = u.clone();
            let tu = ring.mul(&t, &u);
            let t2u = ring.mul(&ring.mul(&t, &t), &u);
            let t3u = ring.mul(&t, &t2u);
            let t3u2 = ring.mul(&t3u, &u);
            let w1 = Word::comm(&wx(b, t.clone()), &wx(b, u.clone()).conj(&sji));
            out.push(rel(3, "chev6_1", vec![a, b], vec![t.clone(), u.clone()], w1));
            let w1p = Word::comm(&wx(a, t.clone()), &wx(a, u.clone()).conj(&sij));
            out.push(rel(3, "chev6_1_primed", vec![a, b], vec![t.clone(), u.clone()], w1p));
            let w2 = Word::comm(&wx(a, t.clone()).conj(&sij), &wx(b, u.clone()).conj(&sji));
            out.push(rel(3, "chev6_2", vec![a, b], vec![t.clone(), u.clone()], w2));
            let w3 = Word::comm(&wx(b, t.clone()).conj(&si), &wx(a, u.clone()).conj(&sj));
            out.push(rel(3, "chev6_3", vec![a, b], vec![t.clone(), u.clone()], w3));
            let w4 = Word::comm(&wx(b, t.clone()), &wx(b, u.clone()).conj(&si))
                .mul(&wx(b, tu.clone()).conj(&sji).inv());
            out.push(rel(3, "chev6_4", vec![a, b], vec![t.clone(), u.clone()], w4));
            let w4p = Word::comm(&wx(a, t.clone()), &wx(a, u.clone()).conj(&sj))
                .mul(&wx(a, tu.clone()).conj(&sij).inv());
            out.push(rel(3, "chev6_4_primed", vec![a, b], vec![t.clone(), u.clone()], w4p));
            let tail7 = wx(a, t2u)
                .conj(&sij)
                .mul(&wx(a, ring.neg(&tu)).conj(&sj))
                .mul(&wx(b, t3u).conj(&si))
                .mul(&wx(b, ring.neg(&t3u2)).conj(&sji));
            let w7 = Word::comm(&wx(a, t.clone()), &wx(b, u.clone())).mul(&tail7.inv());
            out.push(rel(3, "chev6_7", vec![a, b], vec![t, u], w7));
        }
    }
    sort_relators(&mut out);
    Ok(out)
}

/// Every default-batch relator.  Over a finite ring the parameters
/// range over the whole ring; over a polynomial ring each family is
/// instantiated once at generic parameters.
pub fn all_relators(gcm: &Gcm, ring: &Ring) -> Result<Vec<Relator>, PresentError> {
    let ps = param_set(ring)?;
    let mut out = what_relators(gcm);
    out.extend(emit_batch1(gcm, ring, &ps.pairs));
    out.extend(emit_batch2(gcm, ring, &ps.elems));
    for i in 0..gcm.rank() {
        for j in (i + 1)..gcm.rank() {
            match gcm.edge_label(i, j) {
                Some(m) if (2..=6).contains(&m) => {
                    out.extend(emit_batch3(gcm, ring, i, j, &ps.pairs)?);
                }
                _ => {}
            }
        }
    }
    out.extend(emit_batch4(gcm, ring, &ps.units, &ps.elems));
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EmitOptions {
    pub prune: bool,
    pub kac_moody: bool,
    pub sparse: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneLevel {
    CommutingPairs,
    TransportPairs,
    Full,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub gcm: Gcm,
    pub ring: Ring,
    pub generators: Vec<Gen>,
    pub relators: Vec<Relator>,
}

fn family_rank(family: &str) -> u32 {
    const ORDER: &[&str] = &[
        "artin",
        "square_conj",
        "additivity",
        "basis_order",
        "basis_commute",
        "closure",
        "sign_twist",
        "transport",
        "braid_commute",
        "sign_twist_inv",
        "chev2_1",
        "chev3_1",
        "chev3_2",
        "chev4_1",
        "chev4_2",
        "chev4_2_primed",
        "chev4_3",
        "chev4_4",
        "chev6_1",
        "chev6_1_primed",
        "chev6_2",
        "chev6_3",
        "chev6_4",
        "chev6_4_primed",
        "chev6_5",
        "chev6_6",
        "chev6_7",
        "torus_x",
        "torus_sxs",
        "collapse",
        "torus_mult",
    ];
    ORDER.iter().position(|f| *f == family).expect("unknown family") as u32
}

fn sort_relators(relators: &mut Vec<Relator>) {
    relators.sort_by(|a, b| {
        (a.batch, &a.nodes, family_rank(a.family), &a.params)
            .cmp(&(b.batch, &b.nodes, family_rank(b.family), &b.params))
    });
}

fn generator_list(gcm: &Gcm, ring: &Ring) -> Result<Vec<Gen>, PresentError> {
    let elems = finite_elems(ring)?;
    let mut gens: Vec<Gen> = (0..gcm.rank()).map(Gen::S).collect();
    for i in 0..gcm.rank() {
        for t in &elems {
            gens.push(Gen::X(i, t.clone()));
        }
    }
    Ok(gens)
}

/// The full presentation over a finite ring: batches 0–4, optionally
/// the torus multiplicativity batch, optionally pruned, sorted
/// deterministically.
pub fn emit_presentation(
    gcm: &Gcm,
    ring: &Ring,
    opts: EmitOptions,
) -> Result<Presentation, PresentError> {
    let generators = generator_list(gcm, ring)?;
    let mut relators = what_relators(gcm);
    relators.extend(if opts.sparse {
        sparse_additivity_relators(gcm, ring)?
    } else {
        additivity_relators(gcm, ring)?
    });
    relators.extend(batch2_relators(gcm, ring)?);
    for i in 0..gcm.rank() {
        for j in (i + 1)..gcm.rank() {
            match gcm.edge_label(i, j) {
                Some(m) if (2..=6).contains(&m) => {
                    relators.extend(chevalley_relators(gcm, ring, i, j)?);
                }
                _ => {}
            }
        }
    }
    relators.extend(batch4_relators(gcm, ring)?);
    if opts.kac_moody {
        relators.extend(kac_moody_relators(gcm, ring)?);
    }
    let mut p = Presentation {
        gcm: gcm.clone(),
        ring: ring.clone(),
        generators,
        relators,
    };
    if opts.prune {
        p = prune(p, PruneLevel::Full);
    }
    sort_relators(&mut p.relators);
    Ok(p)
}

/// Unordered label-2 pairs kept by the pruner: one lexicographically
/// minimal representative per component of the graph joining pairs
/// that share a node whose other endpoints are joined by a single
/// bond.
pub fn kept_commuting_pairs(gcm: &Gcm) -> BTreeSet<(usize, usize)> {
    let n = gcm.rank();
    let mut verts: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if gcm.edge_label(a, b) == Some(2) {
                verts.push((a, b));
            }
        }
    }
    let adjacent = |p: (usize, usize), q: (usize, usize)| {
        let pn = [p.0, p.1];
        let qn = [q.0, q.1];
        for &s in &pn {
            if qn.contains(&s) {
                let x = if p.0 == s { p.1 } else { p.0 };
                let y = if q.0 == s { q.1 } else { q.0 };
                if x != y && gcm.edge_label(x, y) == Some(3) {
                    return true;
                }
            }
        }
        false
    };
    components_min(&verts, adjacent)
}

/// Ordered label-3 pairs kept by the pruner: one lexicographically
/// minimal representative per component of the transport graph, whose
/// edges join (i,j) and (j,k) when i–j and j–k are single bonds and
/// i, k are unjoined.
pub fn kept_transport_pairs(gcm: &Gcm) -> BTreeSet<(usize, usize)> {
    let n = gcm.rank();
    let mut verts: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && gcm.edge_label(i, j) == Some(3) {
                verts.push((i, j));
            }
        }
    }
    let adjacent = |p: (usize, usize), q: (usize, usize)| {
        for (a, b) in [(p, q), (q, p)] {
            if a.1 == b.0
                && a.0 != b.1
                && gcm.edge_label(a.0, b.1) == Some(2)
            {
                return true;
            }
        }
        false
    };
    components_min(&verts, adjacent)
}

fn components_min<F>(verts: &[(usize, usize)], adjacent: F) -> BTreeSet<(usize, usize)>
where
    F: Fn((usize, usize), (usize, usize)) -> bool,
{
    let mut kept = BTreeSet::new();
    let mut seen = vec![false; verts.len()];
    for start in 0..verts.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for w in 0..verts.len() {
                if !seen[w] && adjacent(verts[v], verts[w]) {
                    seen[w] = true;
                    comp.push(w);
                    queue.push(w);
                }
            }
        }
        kept.insert(comp.iter().map(|&v| verts[v]).min().unwrap());
    }
    kept
}

/// Drops the derivable batch-3 families: commutation relators for
/// non-kept label-2 pairs and both single-bond families for non-kept
/// ordered pairs.
pub fn prune(p: Presentation, level: PruneLevel) -> Presentation {
    let kept2 = kept_commuting_pairs(&p.gcm);
    let kept3 = kept_transport_pairs(&p.gcm);
    let relators = p
        .relators
        .into_iter()
        .filter(|r| match r.family {
            "chev2_1" if level != PruneLevel::TransportPairs => {
                kept2.contains(&(r.nodes[0], r.nodes[1]))
            }
            "chev3_1" | "chev3_2" if level != PruneLevel::CommutingPairs => {
                kept3.contains(&(r.nodes[0], r.nodes[1]))
            }
            _ => true,
        })
        .collect();
    Presentation { relators, ..p }
}

/// The twelve-schema presentation for single-bond diagrams with no
/// isolated nodes, instantiated literally over R.
pub fn table1_presentation(gcm: &Gcm, ring: &Ring) -> Result<Presentation, PresentError> {
    let n = gcm.rank();
    for i in 0..n {
        for j in 0..n {
            if i != j && ![0, -1].contains(&gcm.entry(i, j)) {
                return Err(PresentError::WrongDiagram(format!(
                    "entry at ({}, {}) is {}, need a single-bond diagram",
                    gcm.label(i),
                    gcm.label(j),
                    gcm.entry(i, j)
                )));
            }
        }
    }
    for comp in gcm.components() {
        if comp.nodes.len() == 1 {
            return Err(PresentError::WrongDiagram(format!(
                "node {} is isolated",
                gcm.label(comp.nodes[0])
            )));
        }
    }
    let ps = param_set(ring)?;
    let one = ring.one();
    let mut relators = Vec::new();
    for i in 0..n {
        for (t, u) in &ps.pairs {
            let w = wx(i, t.clone())
                .mul(&wx(i, u.clone()))
                .mul(&wx(i, ring.add(t, u)).inv());
            relators.push(rel(1, "additivity", vec![i], vec![t.clone(), u.clone()], w));
        }
        for t in &ps.elems {
            let w = Word::comm(&ws2(i), &wx(i, t.clone()));
            relators.push(rel(2, "sign_twist", vec![i], vec![t.clone()], w));
        }
        let w = ws(i).mul(
            &wx(i, one.clone())
                .mul(&wx(i, one.clone()).conj(&ws(i)))
                .mul(&wx(i, one.clone()))
                .inv(),
        );
        relators.push(rel(4, "collapse", vec![i], vec![], w));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if !gcm.joined(i, j) {
                if i < j {
                    let w = ws(i).mul(&ws(j)).mul(&ws(j).mul(&ws(i)).inv());
                    relators.push(rel(0, "artin", vec![i, j], vec![], w));
                    for (t, u) in &ps.pairs {
                        let w = Word::comm(&wx(i, t.clone()), &wx(j, u.clone()));
                        relators.push(rel(3, "chev2_1", vec![i, j], vec![t.clone(), u.clone()], w));
                    }
                }
                for t in &ps.elems {
                    let w = Word::comm(&ws(j), &wx(i, t.clone()));
                    relators.push(rel(2, "braid_commute", vec![i, j], vec![t.clone()], w));
                }
            } else {
                if i < j {
                    let left = ws(i).mul(&ws(j)).mul(&ws(i));
                    let right = ws(j).mul(&ws(i)).mul(&ws(j));
                    relators.push(rel(0, "artin", vec![i, j], vec![], left.mul(&right.inv())));
                }
                let mut w = ws2(i).mul(&ws(j)).mul(&ws2(i).inv());
                w.push(Gen::S(j), 1);
                relators.push(rel(0, "square_conj", vec![i, j], vec![], w));
                for t in &ps.elems {
                    let w = wx(i, t.clone())
                        .mul(&ws(j))
                        .mul(&ws(i))
                        .mul(&ws(j).mul(&ws(i)).mul(&wx(j, t.clone())).inv());
                    relators.push(rel(2, "transport", vec![i, j], vec![t.clone()], w));
                    let w = ws2(i)
                        .mul(&wx(j, t.clone()))
                        .mul(&ws2(i).inv())
                        .mul(&wx(j, t.clone()));
                    relators.push(rel(2, "sign_twist_inv", vec![i, j], vec![t.clone()], w));
                }
                for (t, u) in &ps.pairs {
                    let w = Word::comm(&wx(i, t.clone()), &wx(j, u.clone()).conj(&ws(i)));
                    relators.push(rel(3, "chev3_2", vec![i, j], vec![t.clone(), u.clone()], w));
                    let w = Word::comm(&wx(i, t.clone()), &wx(j, u.clone()))
                        .mul(&wx(j, ring.mul(t, u)).conj(&ws(i)).inv());
                    relators.push(rel(3, "chev3_1", vec![i, j], vec![t.clone(), u.clone()], w));
                }
            }
        }
    }
    let generators = generator_list(gcm, ring)?;
    let mut p = Presentation {
        gcm: gcm.clone(),
        ring: ring.clone(),
        generators,
        relators,
    };
    sort_relators(&mut p.relators);
    Ok(p)
}

/// Display name of a generator: `S<label>` or `X<label>(<element>)`.
pub fn gen_name(gcm: &Gcm, ring: &Ring, g: &Gen) -> String {
    match g {
        Gen::S(i) => format!("S{}", gcm.label(*i)),
        Gen::X(i, t) => format!("X{}({})", gcm.label(*i), ring.fmt_value(t)),
    }
}

impl Presentation {
    /// Relators as integer words over the generator list, 1-based,
    /// negatives for inverses.
    pub fn integer_relators(&self) -> Vec<Vec<i32>> {
        let index: BTreeMap<&Gen, i32> = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| (g, k as i32 + 1))
            .collect();
        self.relators
            .iter()
            .map(|r| {
                r.word
                    .0
                    .iter()
                    .map(|(g, e)| index[g] * e)
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| gen_name(&self.gcm, &self.ring, g))
            .collect();
        let relators: Vec<serde_json::Value> = self
            .relators
            .iter()
            .map(|r| {
                serde_json::json!({
                    "batch": r.batch,
                    "family": r.family,
                    "nodes": r.nodes.iter().map(|&n| self.gcm.label(n)).collect::<Vec<_>>(),
                    "params": r.params.iter().map(|p| self.ring.fmt_value(p)).collect::<Vec<_>>(),
                    "word": r.word.0.iter().map(|(g, e)| {
                        serde_json::json!([gen_name(&self.gcm, &self.ring, g), e])
                    }).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "diagram": {
                "labels": self.gcm.labels(),
                "matrix": self.gcm.matrix(),
            },
            "ring": self.ring.dsl(),
            "generators": gens,
            "relators": relators,
        });
        let mut s = serde_json::to_string_pretty(&doc).unwrap();
        s.push('\n');
        s
    }

    pub fn to_gap(&self) -> String {
        let mut s = String::new();
        s.push_str("# Free generators:\n");
        for (k, g) in self.generators.iter().enumerate() {
            let name = match g {
                Gen::S(i) => format!("S{}", self.gcm.label(*i)),
                Gen::X(i, t) => format!("X{}_{}", self.gcm.label(*i), self.ring.fmt_value(t)),
            };
            s.push_str(&format!("#   F.{} = {}\n", k + 1, name));
        }
        s.push_str(&format!("F := FreeGroup({});\n", self.generators.len()));
        let index: BTreeMap<&Gen, usize> = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| (g, k + 1))
            .collect();
        s.push_str("rels := [\n");
        for r in &self.relators {
            let mut terms: Vec<(usize, i64)> = Vec::new();
            for (g, e) in &r.word.0 {
                let idx = index[g];
                match terms.last_mut() {
                    Some((last, exp)) if *last == idx => *exp += *e as i64,
                    _ => terms.push((idx, *e as i64)),
                }
            }
            terms.retain(|(_, e)| *e != 0);
            let body = if terms.is_empty() {
                "One(F)".to_string()
            } else {
                terms
                    .iter()
                    .map(|(idx, e)| {
                        if *e == 1 {
                            format!("F.{idx}")
                        } else {
                            format!("F.{idx}^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            };
            s.push_str(&format!("  {body},\n"));
        }
        s.push_str("];\n");
        s
    }
}
