//! Coset enumeration and matrix group closures.
//!
//! The enumerator is the relator-scanning strategy over a flat coset
//! table: cosets are processed in definition order, every relator is
//! scanned with gap filling, and coincidences merge rows through a
//! union-find. Letters of a word are nonzero integers: +g for
//! generator g - 1, -g for its inverse.

use crate::ring::{RMat, Ring};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FpError {
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumResult {
    /// The table closed: the group has this many cosets.
    Complete { index: u64 },
    /// The cap was reached with the table still open.
    Capped { defined: usize, live: usize },
}

struct CosetTable {
    ncols: usize,
    /// Row 0 is a sentinel; cosets are 1-based.
    data: Vec<u32>,
    rep: Vec<u32>,
    live: usize,
    cap: usize,
}

fn fwd_col(letter: i32) -> usize {
    if letter > 0 {
        2 * (letter as usize - 1)
    } else {
        2 * ((-letter) as usize - 1) + 1
    }
}

impl CosetTable {
    fn new(ngens: usize, cap: usize) -> CosetTable {
        let ncols = 2 * ngens;
        let mut t = CosetTable {
            ncols,
            data: vec![0; ncols],
            rep: vec![0],
            live: 0,
            cap,
        };
        t.alloc();
        t
    }

    fn alloc(&mut self) -> Option<u32> {
        let id = self.rep.len() as u32;
        if id as usize > self.cap {
            return None;
        }
        self.rep.push(id);
        self.data.extend(std::iter::repeat(0).take(self.ncols));
        self.live += 1;
        Some(id)
    }

    fn defined(&self) -> usize {
        self.rep.len() - 1
    }

    fn find(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.rep[root as usize] != root {
            root = self.rep[root as usize];
        }
        let mut cur = c;
        while self.rep[cur as usize] != cur {
            let next = self.rep[cur as usize];
            self.rep[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn get(&self, c: u32, col: usize) -> u32 {
        self.data[c as usize * self.ncols + col]
    }

    fn set(&mut self, c: u32, col: usize, v: u32) {
        self.data[c as usize * self.ncols + col] = v;
    }

    /// Records a = b and transfers rows until consistent.
    fn coincide(&mut self, a: u32, b: u32) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            self.rep[b as usize] = a;
            self.live -= 1;
            for col in 0..self.ncols {
                let x = self.get(b, col);
                if x == 0 {
                    continue;
                }
                let x = self.find(x);
                let ar = self.find(a);
                let cur = self.get(ar, col);
                if cur == 0 {
                    self.set(ar, col, x);
                    let back = self.get(x, col ^ 1);
                    if back == 0 {
                        self.set(x, col ^ 1, ar);
                    } else if self.find(back) != ar {
                        queue.push((back, ar));
                    } else {
                        self.set(x, col ^ 1, ar);
                    }
                } else {
                    queue.push((cur, x));
                }
            }
        }
    }

    /// Declares c · col = d with both directions recorded.
    fn join(&mut self, c: u32, col: usize, d: u32) {
        let c = self.find(c);
        let d = self.find(d);
        let cur = self.get(c, col);
        if cur != 0 {
            if self.find(cur) != d {
                self.coincide(cur, d);
            }
            return;
        }
        self.set(c, col, d);
        let back = self.get(d, col ^ 1);
        if back == 0 {
            self.set(d, col ^ 1, c);
        } else if self.find(back) != c {
            self.coincide(back, c);
        }
    }

    /// Scans one relator at one coset, filling gaps; None when the cap
    /// is hit.
    fn scan_and_fill(&mut self, c: u32, word: &[i32]) -> Option<()> {
        let mut f = c;
        let mut i = 0usize;
        let mut b = c;
        let mut j = word.len();
        loop {
            while i < j {
                let next = self.get(f, fwd_col(word[i]));
                if next == 0 {
                    break;
                }
                f = self.find(next);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincide(f, b);
                }
                return Some(());
            }
            while j > i {
                let next = self.get(b, fwd_col(word[j - 1]) ^ 1);
                if next == 0 {
                    break;
                }
                b = self.find(next);
                j -= 1;
            }
            if i == j {
                if f != b {
                    self.coincide(f, b);
                }
                return Some(());
            }
            if j == i + 1 {
                self.join(f, fwd_col(word[i]), b);
                return Some(());
            }
            let n = self.alloc()?;
            self.join(f, fwd_col(word[i]), n);
            f = self.find(n);
            // The join may have merged cosets under us; restart the
            // scan from a clean state.
            if self.find(c) != c {
                return Some(());
            }
            f = self.find(f);
            b = self.find(b);
            i += 1;
        }
    }
}

/// Freely and cyclically reduces a word.
fn reduce(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    while out.len() >= 2 && out.first().map(|&f| -f) == out.last().copied() {
        out.pop();
        out.remove(0);
    }
    out
}

/// Enumerates cosets of the trivial subgroup: the group order when
/// the table closes within the cap.
pub fn todd_coxeter(ngens: usize, relators: &[Vec<i32>], cap: usize) -> EnumResult {
    let rels: Vec<Vec<i32>> = relators
        .iter()
        .map(|w| reduce(w))
        .filter(|w| !w.is_empty())
        .collect();
    let mut t = CosetTable::new(ngens, cap);
    let mut c: u32 = 1;
    while (c as usize) <= t.defined() {
        if t.find(c) != c {
            c += 1;
            continue;
        }
        for rel in &rels {
            if t.find(c) != c {
                break;
            }
            if t.scan_and_fill(c, rel).is_none() {
                return EnumResult::Capped {
                    defined: t.defined(),
                    live: t.live,
                };
            }
        }
        if t.find(c) == c {
            for col in 0..t.ncols {
                if t.get(c, col) == 0 {
                    match t.alloc() {
                        Some(n) => t.join(c, col, n),
                        None => {
                            return EnumResult::Capped {
                                defined: t.defined(),
                                live: t.live,
                            }
                        }
                    }
                }
            }
        }
        c += 1;
    }
    EnumResult::Complete { index: t.live as u64 }
}

/// Order of the group generated by a set of invertible matrices over
/// a finite ring, by breadth-first closure.
pub fn matrix_closure(ring: &Ring, gens: &[RMat], cap: usize) -> Result<u64, FpError> {
    if gens.is_empty() {
        return Ok(1);
    }
    let n = gens[0].n;
    if let Some(table) = ring.table() {
        let encode = |m: &RMat| -> Vec<u8> { m.a.iter().map(|v| table.code(v)).collect() };
        let mul = |a: &[u8], b: &[u8]| -> Vec<u8> {
            let mut out = vec![table.zero; n * n];
            for i in 0..n {
                for k in 0..n {
                    let aik = a[i * n + k];
                    if aik == table.zero {
                        continue;
                    }
                    for j in 0..n {
                        let prod = table.mul(aik, b[k * n + j]);
                        out[i * n + j] = table.add(out[i * n + j], prod);
                    }
                }
            }
            out
        };
        let id = encode(&RMat::identity(ring, n));
        let gen_codes: Vec<Vec<u8>> = gens.iter().map(encode).collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &gen_codes {
                let next = mul(&m, g);
                if !seen.contains(&next) {
                    if seen.len() >= cap {
                        return Err(FpError::CapExceeded(cap));
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        return Ok(seen.len() as u64);
    }
    let id = RMat::identity(ring, n);
    let mut seen: HashMap<Vec<crate::ring::Value>, ()> = HashMap::new();
    seen.insert(id.a.clone(), ());
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = m.mul(ring, g);
            if !seen.contains_key(&next.a) {
                if seen.len() >= cap {
                    return Err(FpError::CapExceeded(cap));
                }
                seen.insert(next.a.clone(), ());
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Order of the smallest subgroup that contains `seeds` and is closed
/// under conjugation by the group `ambient` generates.  `ambient` must
/// contain the inverse of each of its matrices; passing its known
/// order lets the conjugation sweep stop early once everything is in.
pub fn matrix_normal_closure(
    ring: &Ring,
    seeds: &[RMat],
    ambient: &[RMat],
    ambient_order: Option<u64>,
    cap: usize,
) -> Result<u64, FpError> {
    if seeds.is_empty() {
        return Ok(1);
    }
    let n = seeds[0].n;
    if let Some(table) = ring.table() {
        let encode = |m: &RMat| -> Vec<u8> { m.a.iter().map(|v| table.code(v)).collect() };
        let mul = |a: &[u8], b: &[u8]| -> Vec<u8> {
            let mut out = vec![table.zero; n * n];
            for i in 0..n {
                for k in 0..n {
                    let aik = a[i * n + k];
                    if aik == table.zero {
                        continue;
                    }
                    for j in 0..n {
                        let prod = table.mul(aik, b[k * n + j]);
                        out[i * n + j] = table.add(out[i * n + j], prod);
                    }
                }
            }
            out
        };
        let id = encode(&RMat::identity(ring, n));
        let amb: Vec<Vec<u8>> = ambient.iter().map(encode).collect();
        let amb_inv: Vec<Vec<u8>> = amb
            .iter()
            .map(|g| {
                amb.iter()
                    .find(|h| mul(g, h) == id)
                    .expect("ambient set contains its inverses")
                    .clone()
            })
            .collect();
        let mut set: HashSet<Vec<u8>> = HashSet::from([id.clone()]);
        let mut elems = vec![id];
        let mut gens: Vec<Vec<u8>> = Vec::new();
        let mut pending: VecDeque<Vec<u8>> = seeds.iter().map(encode).collect();
        loop {
            while let Some(s) = pending.pop_front() {
                if set.contains(&s) {
                    continue;
                }
                gens.push(s.clone());
                let mut work: VecDeque<Vec<u8>> =
                    elems.iter().map(|k| mul(k, &s)).collect();
                while let Some(x) = work.pop_front() {
                    if set.contains(&x) {
                        continue;
                    }
                    if set.len() >= cap {
                        return Err(FpError::CapExceeded(cap));
                    }
                    set.insert(x.clone());
                    for g in &gens {
                        work.push_back(mul(&x, g));
                    }
                    elems.push(x);
                }
            }
            if ambient_order == Some(elems.len() as u64) {
                return Ok(elems.len() as u64);
            }
            let mut grew = false;
            for (g, ginv) in amb.iter().zip(&amb_inv) {
                for k in &elems {
                    let conj = mul(g, &mul(k, ginv));
                    if !set.contains(&conj) {
                        pending.push_back(conj);
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok(elems.len() as u64);
            }
        }
    }
    let id = RMat::identity(ring, n);
    let inverses: Vec<RMat> = ambient
        .iter()
        .map(|g| {
            ambient
                .iter()
                .find(|h| g.mul(ring, h) == id)
                .expect("ambient set contains its inverses")
                .clone()
        })
        .collect();
    let mut gens = seeds.to_vec();
    loop {
        let mut seen: HashMap<Vec<crate::ring::Value>, ()> = HashMap::new();
        let mut elems = vec![id.clone()];
        seen.insert(id.a.clone(), ());
        let mut head = 0;
        while head < elems.len() {
            let m = elems[head].clone();
            head += 1;
            for g in &gens {
                let next = m.mul(ring, g);
                if !seen.contains_key(&next.a) {
                    if seen.len() >= cap {
                        return Err(FpError::CapExceeded(cap));
                    }
                    seen.insert(next.a.clone(), ());
                    elems.push(next);
                }
            }
        }
        if ambient_order == Some(elems.len() as u64) {
            return Ok(elems.len() as u64);
        }
        let mut grew = false;
        for (g, ginv) in ambient.iter().zip(&inverses) {
            for k in &elems {
                let conj = g.mul(ring, &k.mul(ring, ginv));
                if !seen.contains_key(&conj.a) {
                    gens.push(conj);
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(elems.len() as u64);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Gcm;
    use crate::chevlie::LieAlgebra;

    #[test]
    fn cyclic_group() {
        assert_eq!(
            todd_coxeter(1, &[vec![1, 1, 1]], 1000),
            EnumResult::Complete { index: 3 }
        );
    }

    #[test]
    fn gcd_of_exponents() {
        let r = todd_coxeter(1, &[vec![1; 6], vec![1; 10]], 1000);
        assert_eq!(r, EnumResult::Complete { index: 2 });
    }

    #[test]
    fn dihedral_presentation() {
        let rels = vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]];
        assert_eq!(
            todd_coxeter(2, &rels, 1000),
            EnumResult::Complete { index: 6 }
        );
    }

    #[test]
    fn quaternion_presentation() {
        // <a, b | a^4, a^2 b^-2, b^-1 a b a>
        let rels = vec![
            vec![1, 1, 1, 1],
            vec![1, 1, -2, -2],
            vec![-2, 1, 2, 1],
        ];
        assert_eq!(
            todd_coxeter(2, &rels, 1000),
            EnumResult::Complete { index: 8 }
        );
    }

    #[test]
    fn free_group_caps_deterministically() {
        let r1 = todd_coxeter(2, &[], 50);
        let r2 = todd_coxeter(2, &[], 50);
        assert_eq!(r1, r2);
        match r1 {
            EnumResult::Capped { defined, .. } => assert_eq!(defined, 50),
            _ => panic!("free group must cap"),
        }
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce(&[1, -1]), Vec::<i32>::new());
        assert_eq!(reduce(&[2, 1, -1, -2, 3]), vec![3]);
        assert_eq!(reduce(&[1, 2, -1]), vec![2]);
    }

    #[test]
    fn sl2_closures() {
        let f2 = Ring::parse("gf2").unwrap();
        let upper = RMat::from_rows(&f2, &[vec![1, 1], vec![0, 1]]);
        let lower = RMat::from_rows(&f2, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(matrix_closure(&f2, &[upper, lower], 100).unwrap(), 6);
        let f3 = Ring::parse("gf3").unwrap();
        let upper = RMat::from_rows(&f3, &[vec![1, 1], vec![0, 1]]);
        let lower = RMat::from_rows(&f3, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(matrix_closure(&f3, &[upper, lower], 100).unwrap(), 24);
    }

    #[test]
    fn cap_exceeded() {
        let f3 = Ring::parse("gf3").unwrap();
        let upper = RMat::from_rows(&f3, &[vec![1, 1], vec![0, 1]]);
        let lower = RMat::from_rows(&f3, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(
            matrix_closure(&f3, &[upper, lower], 10),
            Err(FpError::CapExceeded(10))
        );
    }

    #[test]
    fn unipotent_closure_order() {
        // The full unipotent subgroup over GF(2) has order 2^(number
        // of positive roots).
        let lie = LieAlgebra::new(&Gcm::named("B2").unwrap()).unwrap();
        let f2 = Ring::parse("gf2").unwrap();
        let one = f2.one();
        let gens: Vec<RMat> = (0..lie.positive_roots().len())
            .map(|k| {
                let mut v = vec![0i64; lie.dim()];
                v[k] = 1;
                lie.exp_ad(&v).unwrap().eval(&f2, &one)
            })
            .collect();
        assert_eq!(matrix_closure(&f2, &gens, 1 << 10).unwrap(), 16);
    }

    #[test]
    fn closure_invariant_under_conjugation() {
        let lie = LieAlgebra::new(&Gcm::named("A2").unwrap()).unwrap();
        let f2 = Ring::parse("gf2").unwrap();
        let one = f2.one();
        let gens: Vec<RMat> = (0..2)
            .map(|i| lie.exp_simple_e(i).eval(&f2, &one))
            .collect();
        let base = matrix_closure(&f2, &gens, 1 << 14).unwrap();
        let s = lie.star(0).into_ring(&f2);
        let s3 = lie.star(0).mul(lie.star(0)).mul(lie.star(0)).into_ring(&f2);
        let conj: Vec<RMat> = gens
            .iter()
            .map(|g| s.mul(&f2, g).mul(&f2, &s3))
            .collect();
        assert_eq!(matrix_closure(&f2, &conj, 1 << 14).unwrap(), base);
    }
}
