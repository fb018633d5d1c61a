//! Commutative-ring arithmetic on canonical representatives.
//!
//! Three ring families: Z/n, GF(p^k) as F_p[x] modulo a monic
//! irreducible polynomial, and Laurent/polynomial rings over Z with
//! designated invertible variables. All values are kept in a unique
//! canonical form so equality is structural.

use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("operation needs a finite ring: {0}")]
    InfiniteRing(String),
    #[error("wrong characteristic: {0}")]
    WrongCharacteristic(String),
    #[error("ring has no variable for this role: {0}")]
    MissingVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingDesc {
    ZmodN(u64),
    /// F_p[x] modulo a monic irreducible `poly`, little-endian
    /// coefficients, length = degree + 1.
    Gf { p: u64, poly: Vec<u64> },
    /// Z[units^{±1}][polys]; exponent vectors run over units then
    /// polys in declared order.
    Laurent { units: Vec<String>, polys: Vec<String> },
}

/// A canonical ring element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Mod(u64),
    /// Little-endian coefficients, fixed length = field degree.
    Gf(Vec<u64>),
    /// Monomial exponent vector -> nonzero coefficient.
    Pol(BTreeMap<Vec<i64>, BigInt>),
}

#[derive(Debug, Clone)]
pub struct Ring {
    desc: RingDesc,
}

impl Ring {
    pub fn new(desc: RingDesc) -> Result<Ring, RingError> {
        match &desc {
            RingDesc::ZmodN(n) => {
                if *n < 2 {
                    return Err(RingError::InvalidDescriptor(format!("z/{n}: modulus must be >= 2")));
                }
            }
            RingDesc::Gf { p, poly } => {
                if !is_prime(*p) {
                    return Err(RingError::InvalidDescriptor(format!("gf: {p} is not prime")));
                }
                if poly.len() < 2 || *poly.last().unwrap() != 1 {
                    return Err(RingError::InvalidDescriptor(
                        "gf: polynomial must be monic of degree >= 1".into(),
                    ));
                }
                if poly.iter().any(|&c| c >= *p) {
                    return Err(RingError::InvalidDescriptor(
                        "gf: polynomial coefficients must be reduced mod p".into(),
                    ));
                }
                if !is_irreducible(poly, *p) {
                    return Err(RingError::InvalidDescriptor(format!(
                        "gf: {} is reducible over F_{p}",
                        fmt_fp_poly(poly)
                    )));
                }
            }
            RingDesc::Laurent { units, polys } => {
                let mut seen = BTreeSet::new();
                for name in units.iter().chain(polys.iter()) {
                    if name.is_empty()
                        || !name.chars().next().unwrap().is_ascii_alphabetic()
                        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    {
                        return Err(RingError::InvalidDescriptor(format!(
                            "laurent: bad variable name `{name}`"
                        )));
                    }
                    if !seen.insert(name.clone()) {
                        return Err(RingError::InvalidDescriptor(format!(
                            "laurent: duplicate variable `{name}`"
                        )));
                    }
                }
            }
        }
        Ok(Ring { desc })
    }

    /// Parses `z/4`, `gf8`, `gf8=x^3+x+1`, `laurent(r;t,u)`.
    pub fn parse(dsl: &str) -> Result<Ring, RingError> {
        let s = dsl.trim();
        if let Some(rest) = s.strip_prefix("z/") {
            let n: u64 = rest
                .trim()
                .parse()
                .map_err(|_| RingError::InvalidDescriptor(format!("bad modulus in `{s}`")))?;
            return Ring::new(RingDesc::ZmodN(n));
        }
        if let Some(rest) = s.strip_prefix("gf") {
            let (qs, poly_src) = match rest.split_once('=') {
                Some((a, b)) => (a.trim(), Some(b.trim())),
                None => (rest.trim(), None),
            };
            let q: u64 = qs
                .parse()
                .map_err(|_| RingError::InvalidDescriptor(format!("bad field size in `{s}`")))?;
            let (p, k) = prime_power(q).ok_or_else(|| {
                RingError::InvalidDescriptor(format!("gf{q}: not a prime power"))
            })?;
            let poly = match poly_src {
                Some(src) => {
                    let poly = parse_fp_poly(src, p)?;
                    if poly.len() != k as usize + 1 {
                        return Err(RingError::InvalidDescriptor(format!(
                            "gf{q}: polynomial degree {} but need {k}",
                            poly.len().saturating_sub(1)
                        )));
                    }
                    poly
                }
                None => default_poly(p, k),
            };
            return Ring::new(RingDesc::Gf { p, poly });
        }
        if let Some(rest) = s.strip_prefix("laurent(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| RingError::InvalidDescriptor(format!("unclosed `{s}`")))?;
            let (us, ps) = inner.split_once(';').unwrap_or((inner, ""));
            let split = |part: &str| -> Vec<String> {
                part.split(',')
                    .map(|v| v.trim().to_string())
                    .filter(|v| !v.is_empty())
                    .collect()
            };
            return Ring::new(RingDesc::Laurent {
                units: split(us),
                polys: split(ps),
            });
        }
        Err(RingError::InvalidDescriptor(format!("unrecognized ring `{s}`")))
    }

    pub fn desc(&self) -> &RingDesc {
        &self.desc
    }

    /// Canonical descriptor text (round-trips through parse).
    pub fn dsl(&self) -> String {
        match &self.desc {
            RingDesc::ZmodN(n) => format!("z/{n}"),
            RingDesc::Gf { p, poly } => {
                let k = poly.len() as u32 - 1;
                if k == 1 {
                    format!("gf{p}")
                } else {
                    format!("gf{}={}", p.pow(k), fmt_fp_poly(poly))
                }
            }
            RingDesc::Laurent { units, polys } => {
                format!("laurent({};{})", units.join(","), polys.join(","))
            }
        }
    }

    fn deg(&self) -> usize {
        match &self.desc {
            RingDesc::Gf { poly, .. } => poly.len() - 1,
            _ => 0,
        }
    }

    fn nvars(&self) -> usize {
        match &self.desc {
            RingDesc::Laurent { units, polys } => units.len() + polys.len(),
            _ => 0,
        }
    }

    pub fn zero(&self) -> Value {
        match &self.desc {
            RingDesc::ZmodN(_) => Value::Mod(0),
            RingDesc::Gf { .. } => Value::Gf(vec![0; self.deg()]),
            RingDesc::Laurent { .. } => Value::Pol(BTreeMap::new()),
        }
    }

    pub fn one(&self) -> Value {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Value {
        match &self.desc {
            RingDesc::ZmodN(n) => Value::Mod(v.rem_euclid(*n as i64) as u64),
            RingDesc::Gf { p, .. } => {
                let mut c = vec![0; self.deg()];
                c[0] = v.rem_euclid(*p as i64) as u64;
                Value::Gf(c)
            }
            RingDesc::Laurent { .. } => {
                let mut m = BTreeMap::new();
                if v != 0 {
                    m.insert(vec![0i64; self.nvars()], BigInt::from(v));
                }
                Value::Pol(m)
            }
        }
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        *v == self.zero()
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (&self.desc, a, b) {
            (RingDesc::ZmodN(n), Value::Mod(x), Value::Mod(y)) => Value::Mod((x + y) % n),
            (RingDesc::Gf { p, .. }, Value::Gf(x), Value::Gf(y)) => {
                Value::Gf(x.iter().zip(y).map(|(u, v)| (u + v) % p).collect())
            }
            (RingDesc::Laurent { .. }, Value::Pol(x), Value::Pol(y)) => {
                let mut m = x.clone();
                for (e, c) in y {
                    let entry = m.entry(e.clone()).or_insert_with(|| BigInt::from(0));
                    *entry += c;
                    if *entry == BigInt::from(0) {
                        m.remove(e);
                    }
                }
                Value::Pol(m)
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (&self.desc, a) {
            (RingDesc::ZmodN(n), Value::Mod(x)) => Value::Mod((n - x) % n),
            (RingDesc::Gf { p, .. }, Value::Gf(x)) => {
                Value::Gf(x.iter().map(|u| (p - u) % p).collect())
            }
            (RingDesc::Laurent { .. }, Value::Pol(x)) => {
                Value::Pol(x.iter().map(|(e, c)| (e.clone(), -c)).collect())
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (&self.desc, a, b) {
            (RingDesc::ZmodN(n), Value::Mod(x), Value::Mod(y)) => {
                Value::Mod((*x as u128 * *y as u128 % *n as u128) as u64)
            }
            (RingDesc::Gf { p, poly }, Value::Gf(x), Value::Gf(y)) => {
                let k = poly.len() - 1;
                let mut prod = vec![0u128; 2 * k.max(1)];
                for (i, &u) in x.iter().enumerate() {
                    for (j, &v) in y.iter().enumerate() {
                        prod[i + j] += u as u128 * v as u128;
                    }
                }
                let mut prod: Vec<u64> = prod.iter().map(|&c| (c % *p as u128) as u64).collect();
                for d in (k..prod.len()).rev() {
                    let c = prod[d];
                    if c == 0 {
                        continue;
                    }
                    prod[d] = 0;
                    for (j, &pc) in poly.iter().enumerate().take(k) {
                        let idx = d - k + j;
                        prod[idx] = (prod[idx] + (p - pc % p) % p * c) % p;
                    }
                }
                prod.truncate(k);
                Value::Gf(prod)
            }
            (RingDesc::Laurent { .. }, Value::Pol(x), Value::Pol(y)) => {
                let mut m: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
                for (e1, c1) in x {
                    for (e2, c2) in y {
                        let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                        let entry = m.entry(e.clone()).or_insert_with(|| BigInt::from(0));
                        *entry += c1 * c2;
                        if *entry == BigInt::from(0) {
                            m.remove(&e);
                        }
                    }
                }
                Value::Pol(m)
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn inv(&self, a: &Value) -> Option<Value> {
        match (&self.desc, a) {
            (RingDesc::ZmodN(n), Value::Mod(x)) => inv_mod(*x, *n).map(Value::Mod),
            (RingDesc::Gf { p, poly }, Value::Gf(x)) => {
                if self.is_zero(a) {
                    return None;
                }
                Some(Value::Gf(inv_fp_poly(x, poly, *p)))
            }
            (RingDesc::Laurent { units, .. }, Value::Pol(x)) => {
                if x.len() != 1 {
                    return None;
                }
                let (e, c) = x.iter().next().unwrap();
                let one = BigInt::from(1);
                if *c != one && *c != -one.clone() {
                    return None;
                }
                if e[units.len()..].iter().any(|&k| k != 0) {
                    return None;
                }
                let mut m = BTreeMap::new();
                m.insert(e.iter().map(|k| -k).collect(), c.clone());
                Some(Value::Pol(m))
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn is_unit(&self, a: &Value) -> bool {
        self.inv(a).is_some()
    }

    /// a^e; negative exponents need a unit.
    pub fn pow(&self, a: &Value, e: i64) -> Option<Value> {
        let (base, mut e) = if e < 0 {
            (self.inv(a)?, (-e) as u64)
        } else {
            (a.clone(), e as u64)
        };
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            e >>= 1;
        }
        Some(acc)
    }

    pub fn size(&self) -> Option<u64> {
        match &self.desc {
            RingDesc::ZmodN(n) => Some(*n),
            RingDesc::Gf { p, poly } => Some(p.pow(poly.len() as u32 - 1)),
            RingDesc::Laurent { .. } => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &self.desc {
            RingDesc::ZmodN(n) => *n,
            RingDesc::Gf { p, .. } => *p,
            RingDesc::Laurent { .. } => 0,
        }
    }

    pub fn is_field(&self) -> bool {
        match &self.desc {
            RingDesc::ZmodN(n) => is_prime(*n),
            RingDesc::Gf { .. } => true,
            RingDesc::Laurent { .. } => false,
        }
    }

    /// All elements in canonical sorted order.
    pub fn elements(&self) -> Result<Vec<Value>, RingError> {
        match &self.desc {
            RingDesc::ZmodN(n) => Ok((0..*n).map(Value::Mod).collect()),
            RingDesc::Gf { p, poly } => {
                let k = poly.len() - 1;
                let total = p.pow(k as u32);
                let mut out = Vec::with_capacity(total as usize);
                for m in 0..total {
                    let mut c = Vec::with_capacity(k);
                    let mut m = m;
                    for _ in 0..k {
                        c.push(m % p);
                        m /= p;
                    }
                    out.push(Value::Gf(c));
                }
                out.sort();
                Ok(out)
            }
            RingDesc::Laurent { .. } => Err(RingError::InfiniteRing(
                "cannot enumerate a polynomial ring".into(),
            )),
        }
    }

    /// Invertible elements paired with their inverses, sorted by element.
    pub fn units(&self) -> Result<Vec<(Value, Value)>, RingError> {
        let mut out = Vec::new();
        for v in self.elements()? {
            if let Some(w) = self.inv(&v) {
                out.push((v, w));
            }
        }
        Ok(out)
    }

    /// Whether the ideal generated by q and all x^q - x is proper,
    /// i.e. whether the ring has a nonzero quotient in which q = 0 and
    /// every element satisfies x^q = x (hence surjects onto F_q).
    pub fn has_tiny_quotient(&self, q: u64) -> Result<bool, RingError> {
        if q != 2 && q != 3 {
            return Err(RingError::InvalidDescriptor(format!(
                "tiny-quotient test only supports q = 2 or 3, got {q}"
            )));
        }
        let elems = self.elements()?;
        let mut gens = vec![self.from_i64(q as i64)];
        for x in &elems {
            gens.push(self.sub(&self.pow(x, q as i64).unwrap(), x));
        }
        let mut ideal: BTreeSet<Value> = BTreeSet::new();
        ideal.insert(self.zero());
        let mut queue = gens;
        while let Some(v) = queue.pop() {
            if ideal.contains(&v) {
                continue;
            }
            for s in ideal.clone() {
                queue.push(self.add(&s, &v));
            }
            for r in &elems {
                queue.push(self.mul(r, &v));
            }
            ideal.insert(v);
        }
        Ok(!ideal.contains(&self.one()))
    }

    /// The unique p-th root in a finite field of characteristic 2
    /// or 3, computed as v^(|R|/p).
    pub fn frobenius_root(&self, v: &Value) -> Result<Value, RingError> {
        let p = self.characteristic();
        if !self.is_field() || (p != 2 && p != 3) {
            return Err(RingError::WrongCharacteristic(format!(
                "p-th roots need a finite field of characteristic 2 or 3, have {}",
                self.dsl()
            )));
        }
        let size = self.size().unwrap();
        Ok(self.pow(v, (size / p) as i64).unwrap())
    }

    pub fn unit_vars(&self) -> Vec<(String, Value)> {
        match &self.desc {
            RingDesc::Laurent { units, .. } => units
                .iter()
                .map(|n| (n.clone(), self.var(n).unwrap()))
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn poly_vars(&self) -> Vec<(String, Value)> {
        match &self.desc {
            RingDesc::Laurent { units, polys } => polys
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let mut e = vec![0i64; units.len() + polys.len()];
                    e[units.len() + i] = 1;
                    let mut m = BTreeMap::new();
                    m.insert(e, BigInt::from(1));
                    (n.clone(), Value::Pol(m))
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn var(&self, name: &str) -> Option<Value> {
        match &self.desc {
            RingDesc::Laurent { units, polys } => {
                let idx = units
                    .iter()
                    .chain(polys.iter())
                    .position(|v| v == name)?;
                let mut e = vec![0i64; self.nvars()];
                e[idx] = 1;
                let mut m = BTreeMap::new();
                m.insert(e, BigInt::from(1));
                Some(Value::Pol(m))
            }
            _ => None,
        }
    }

    /// Canonical display form; deterministic and stable.
    pub fn fmt_value(&self, v: &Value) -> String {
        match (&self.desc, v) {
            (RingDesc::ZmodN(_), Value::Mod(x)) => x.to_string(),
            (RingDesc::Gf { .. }, Value::Gf(c)) => fmt_fp_poly(c),
            (RingDesc::Laurent { units, polys }, Value::Pol(m)) => {
                if m.is_empty() {
                    return "0".to_string();
                }
                let names: Vec<&String> = units.iter().chain(polys.iter()).collect();
                let mut out = String::new();
                for (idx, (e, c)) in m.iter().enumerate() {
                    let neg = c < &BigInt::from(0);
                    let mag = if neg { -c.clone() } else { c.clone() };
                    if idx == 0 {
                        if neg {
                            out.push('-');
                        }
                    } else {
                        out.push_str(if neg { " - " } else { " + " });
                    }
                    let mut factors = Vec::new();
                    if mag != BigInt::from(1) || e.iter().all(|&k| k == 0) {
                        factors.push(mag.to_string());
                    }
                    for (slot, &k) in e.iter().enumerate() {
                        if k == 0 {
                            continue;
                        }
                        if k == 1 {
                            factors.push(names[slot].clone());
                        } else {
                            factors.push(format!("{}^{}", names[slot], k));
                        }
                    }
                    out.push_str(&factors.join("*"));
                }
                out
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    /// Lookup tables for small finite rings; `None` when infinite or
    /// larger than 255 elements.
    pub fn table(&self) -> Option<RingTable> {
        let size = self.size()?;
        if size > 255 {
            return None;
        }
        let elems = self.elements().ok()?;
        let n = elems.len();
        let index: HashMap<Value, u8> = elems
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u8))
            .collect();
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        let mut neg = vec![0u8; n];
        for i in 0..n {
            neg[i] = index[&self.neg(&elems[i])];
            for j in 0..n {
                add[i * n + j] = index[&self.add(&elems[i], &elems[j])];
                mul[i * n + j] = index[&self.mul(&elems[i], &elems[j])];
            }
        }
        let zero = index[&self.zero()];
        let one = index[&self.one()];
        Some(RingTable {
            elems,
            n,
            add,
            mul,
            neg,
            zero,
            one,
        })
    }
}

/// Precomputed element codes and operation tables for a small finite
/// ring; the fast path for matrix closures.
pub struct RingTable {
    pub elems: Vec<Value>,
    pub n: usize,
    pub add: Vec<u8>,
    pub mul: Vec<u8>,
    pub neg: Vec<u8>,
    pub zero: u8,
    pub one: u8,
}

impl RingTable {
    pub fn code(&self, v: &Value) -> u8 {
        self.elems.binary_search(v).expect("value in ring") as u8
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.n + b as usize]
    }
}

/// A square matrix over a ring, row major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RMat {
    pub n: usize,
    pub a: Vec<Value>,
}

impl RMat {
    pub fn identity(ring: &Ring, n: usize) -> RMat {
        let mut a = vec![ring.zero(); n * n];
        for i in 0..n {
            a[i * n + i] = ring.one();
        }
        RMat { n, a }
    }

    pub fn from_rows(ring: &Ring, rows: &[Vec<i64>]) -> RMat {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n);
            for &v in row {
                a.push(ring.from_i64(v));
            }
        }
        RMat { n, a }
    }

    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, ring: &Ring, other: &RMat) -> RMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![ring.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = &self.a[i * n + k];
                if ring.is_zero(aik) {
                    continue;
                }
                for j in 0..n {
                    let b = &other.a[k * n + j];
                    if ring.is_zero(b) {
                        continue;
                    }
                    let prod = ring.mul(aik, b);
                    out[i * n + j] = ring.add(&out[i * n + j], &prod);
                }
            }
        }
        RMat { n, a: out }
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        *self == RMat::identity(ring, self.n)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = q;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn inv_mod(x: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, x as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 {
        Some(s0.rem_euclid(n as i128) as u64)
    } else {
        None
    }
}

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = poly_deg(b).expect("nonzero divisor");
    let lead_inv = inv_mod(b[db], p).expect("invertible lead");
    let mut r: Vec<u64> = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let f = r[dr] as u128 * lead_inv as u128 % p as u128;
        for j in 0..=db {
            let sub = f * b[j] as u128 % p as u128;
            let idx = dr - db + j;
            r[idx] = ((r[idx] as u128 + p as u128 - sub) % p as u128) as u64;
        }
    }
    r
}

/// Inverse in F_p[x]/(m) by extended Euclid.
fn inv_fp_poly(x: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let k = m.len() - 1;
    let (mut r0, mut r1): (Vec<u64>, Vec<u64>) = (m.to_vec(), x.to_vec());
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![0], vec![1]);
    while poly_deg(&r1).is_some() {
        // One Euclid step: r0 = q*r1 + r2, s2 = s0 - q*s1.
        let d1 = poly_deg(&r1).unwrap();
        let lead_inv = inv_mod(r1[d1], p).unwrap();
        let mut q = vec![0u64; r0.len()];
        let mut rem = r0.clone();
        while let Some(dr) = poly_deg(&rem) {
            if dr < d1 {
                break;
            }
            let f = rem[dr] as u128 * lead_inv as u128 % p as u128;
            q[dr - d1] = f as u64;
            for j in 0..=d1 {
                let sub = f * r1[j] as u128 % p as u128;
                let idx = dr - d1 + j;
                rem[idx] = ((rem[idx] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
        let mut qs1 = vec![0u64; q.len() + s1.len()];
        for (i, &u) in q.iter().enumerate() {
            for (j, &v) in s1.iter().enumerate() {
                qs1[i + j] = ((qs1[i + j] as u128 + u as u128 * v as u128) % p as u128) as u64;
            }
        }
        let len = s0.len().max(qs1.len());
        let mut s2 = vec![0u64; len];
        for i in 0..len {
            let a = *s0.get(i).unwrap_or(&0);
            let b = *qs1.get(i).unwrap_or(&0);
            s2[i] = ((a as u128 + p as u128 - b as u128 % p as u128) % p as u128) as u64;
        }
        (r0, r1) = (r1, rem);
        (s0, s1) = (s1, s2);
    }
    // r0 is now a nonzero constant gcd; scale s0 by its inverse.
    let c = r0[poly_deg(&r0).expect("unit gcd")];
    let ci = inv_mod(c, p).expect("field");
    let mut out: Vec<u64> = s0
        .iter()
        .map(|&v| (v as u128 * ci as u128 % p as u128) as u64)
        .collect();
    out.resize(k, 0);
    out
}

fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let k = poly.len() - 1;
    if k == 1 {
        return true;
    }
    for d in 1..=k / 2 {
        // All monic divisor candidates of degree d.
        let count = p.pow(d as u32);
        for m in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut m = m;
            for _ in 0..d {
                g.push(m % p);
                m /= p;
            }
            g.push(1);
            let r = poly_rem(poly, &g, p);
            if poly_deg(&r).is_none() {
                return false;
            }
        }
    }
    true
}

/// Smallest irreducible monic polynomial of degree k over F_p, by
/// little-endian coefficient enumeration.
fn default_poly(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k);
    for m in 0..count {
        let mut g = Vec::with_capacity(k as usize + 1);
        let mut m = m;
        for _ in 0..k {
            g.push(m % p);
            m /= p;
        }
        g.push(1);
        if is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn parse_fp_poly(src: &str, p: u64) -> Result<Vec<u64>, RingError> {
    let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.contains('-') {
        return Err(RingError::InvalidDescriptor(
            "polynomial terms must use nonnegative coefficients".into(),
        ));
    }
    let mut coeffs: Vec<u64> = Vec::new();
    for term in compact.split('+') {
        let term = term.trim_end_matches('*');
        let (coef, exp) = if let Some(rest) = term.split_once('x') {
            let c: u64 = match rest.0.trim_end_matches('*') {
                "" => 1,
                s => s.parse().map_err(|_| {
                    RingError::InvalidDescriptor(format!("bad coefficient in `{term}`"))
                })?,
            };
            let e: usize = match rest.1 {
                "" => 1,
                s => s
                    .strip_prefix('^')
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| {
                        RingError::InvalidDescriptor(format!("bad exponent in `{term}`"))
                    })?,
            };
            (c, e)
        } else {
            let c: u64 = term.parse().map_err(|_| {
                RingError::InvalidDescriptor(format!("bad term `{term}` in polynomial"))
            })?;
            (c, 0)
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] = (coeffs[exp] + coef) % p;
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn fmt_fp_poly(c: &[u64]) -> String {
    let mut terms = Vec::new();
    for (d, &coef) in c.iter().enumerate().rev() {
        if coef == 0 {
            continue;
        }
        let t = match (d, coef) {
            (0, _) => coef.to_string(),
            (1, 1) => "x".to_string(),
            (1, _) => format!("{coef}x"),
            (_, 1) => format!("x^{d}"),
            (_, _) => format!("{coef}x^{d}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_basics() {
        let r = Ring::parse("z/6").unwrap();
        let five = r.from_i64(5);
        let two = r.from_i64(2);
        assert_eq!(r.mul(&five, &five), r.from_i64(1));
        assert_eq!(r.inv(&five), Some(five.clone()));
        assert_eq!(r.inv(&two), None);
        assert_eq!(r.from_i64(-1), five);
        let units: Vec<Value> = r.units().unwrap().into_iter().map(|(u, _)| u).collect();
        assert_eq!(units, vec![r.from_i64(1), five]);
        let r4 = Ring::parse("z/4").unwrap();
        assert_eq!(r4.mul(&r4.from_i64(2), &r4.from_i64(2)), r4.zero());
        let u4: Vec<Value> = r4.units().unwrap().into_iter().map(|(u, _)| u).collect();
        assert_eq!(u4, vec![r4.from_i64(1), r4.from_i64(3)]);
    }

    #[test]
    fn default_polynomials() {
        assert_eq!(Ring::parse("gf4").unwrap().dsl(), "gf4=x^2+x+1");
        assert_eq!(Ring::parse("gf8").unwrap().dsl(), "gf8=x^3+x+1");
        assert_eq!(Ring::parse("gf9").unwrap().dsl(), "gf9=x^2+1");
        assert_eq!(Ring::parse("gf16").unwrap().dsl(), "gf16=x^4+x+1");
        assert_eq!(Ring::parse("gf27").unwrap().dsl(), "gf27=x^3+2x+1");
        assert_eq!(Ring::parse("gf25").unwrap().dsl(), "gf25=x^2+2");
        assert_eq!(Ring::parse("gf2").unwrap().dsl(), "gf2");
        assert_eq!(Ring::parse("gf3").unwrap().dsl(), "gf3");
    }

    #[test]
    fn gf4_arithmetic() {
        let r = Ring::parse("gf4").unwrap();
        let x = Value::Gf(vec![0, 1]);
        let x1 = Value::Gf(vec![1, 1]);
        assert_eq!(r.mul(&x, &x), x1);
        assert_eq!(r.mul(&x, &x1), r.one());
        assert_eq!(r.inv(&x), Some(x1.clone()));
        assert_eq!(r.units().unwrap().len(), 3);
        assert_eq!(r.elements().unwrap().len(), 4);
        assert_eq!(r.fmt_value(&x1), "x+1");
    }

    #[test]
    fn gf_rejects_bad_descriptors() {
        assert!(Ring::parse("gf6").is_err());
        assert!(Ring::parse("gf8=x^3+1").is_err());
        assert!(Ring::parse("gf8=x^2+x+1").is_err());
        assert!(Ring::parse("z/1").is_err());
        assert!(Ring::parse("laurent(t;t)").is_err());
    }

    #[test]
    fn frobenius_roots() {
        let r = Ring::parse("gf4").unwrap();
        let x = Value::Gf(vec![0, 1]);
        let w = r.frobenius_root(&x).unwrap();
        assert_eq!(r.mul(&w, &w), x);
        for q in ["gf2", "gf4", "gf8", "gf16", "gf3", "gf9", "gf27"] {
            let r = Ring::parse(q).unwrap();
            let p = r.characteristic() as i64;
            for v in r.elements().unwrap() {
                let w = r.frobenius_root(&v).unwrap();
                assert_eq!(r.pow(&w, p).unwrap(), v, "{q}");
            }
        }
        assert!(Ring::parse("gf25").unwrap().frobenius_root(&Value::Gf(vec![1, 0])).is_err());
        assert!(Ring::parse("z/4").unwrap().frobenius_root(&Value::Mod(1)).is_err());
    }

    #[test]
    fn tiny_quotients() {
        let t = |dsl: &str, q: u64| Ring::parse(dsl).unwrap().has_tiny_quotient(q).unwrap();
        assert!(t("gf2", 2));
        assert!(!t("gf4", 2));
        assert!(t("z/4", 2));
        assert!(!t("z/3", 2));
        assert!(t("z/6", 2));
        assert!(t("z/6", 3));
        assert!(!t("z/5", 2));
        assert!(t("gf3", 3));
        assert!(!t("gf9", 3));
        for k in 1..=4u32 {
            let q2 = Ring::parse(&format!("gf{}", 2u64.pow(k))).unwrap();
            assert_eq!(q2.has_tiny_quotient(2).unwrap(), k == 1, "2^{k}");
            let q3 = Ring::parse(&format!("gf{}", 3u64.pow(k))).unwrap();
            assert_eq!(q3.has_tiny_quotient(3).unwrap(), k == 1, "3^{k}");
        }
    }

    #[test]
    fn laurent_arithmetic() {
        let r = Ring::parse("laurent(r;t,u)").unwrap();
        let rv = r.var("r").unwrap();
        let t = r.var("t").unwrap();
        let u = r.var("u").unwrap();
        assert_eq!(r.mul(&rv, &r.inv(&rv).unwrap()), r.one());
        assert_eq!(r.inv(&t), None);
        let sum = r.add(&t, &u);
        let prod = r.mul(&sum, &t);
        assert_eq!(r.fmt_value(&prod), "t*u + t^2");
        let expr = r.add(
            &r.mul(&r.from_i64(-3), &r.mul(&t, &r.mul(&u, &u))),
            &r.mul(&r.inv(&rv).unwrap(), &t),
        );
        assert_eq!(r.fmt_value(&expr), "r^-1*t - 3*t*u^2");
        assert_eq!(r.pow(&rv, -3).unwrap(), r.inv(&r.pow(&rv, 3).unwrap()).unwrap());
        assert!(r.is_unit(&r.neg(&r.pow(&rv, 2).unwrap())));
        assert!(!r.is_unit(&sum));
        assert_eq!(r.characteristic(), 0);
        assert!(matches!(r.elements(), Err(RingError::InfiniteRing(_))));
    }

    #[test]
    fn characteristic_and_size() {
        assert_eq!(Ring::parse("z/6").unwrap().characteristic(), 6);
        assert_eq!(Ring::parse("gf9").unwrap().characteristic(), 3);
        assert_eq!(Ring::parse("gf9").unwrap().size(), Some(9));
        assert!(Ring::parse("z/6").unwrap().table().is_some());
        assert!(Ring::parse("laurent(;t)").unwrap().table().is_none());
    }

    #[test]
    fn ring_tables_match_ops() {
        for dsl in ["z/4", "gf4", "gf9"] {
            let r = Ring::parse(dsl).unwrap();
            let tab = r.table().unwrap();
            for (i, a) in tab.elems.iter().enumerate() {
                assert_eq!(tab.neg[i], tab.code(&r.neg(a)));
                for (j, b) in tab.elems.iter().enumerate() {
                    assert_eq!(tab.add(i as u8, j as u8), tab.code(&r.add(a, b)), "{dsl}");
                    assert_eq!(tab.mul(i as u8, j as u8), tab.code(&r.mul(a, b)), "{dsl}");
                }
            }
        }
    }

    #[test]
    fn matrix_ops() {
        let r = Ring::parse("z/5").unwrap();
        let m = RMat::from_rows(&r, &[vec![1, 1], vec![0, 1]]);
        let m2 = m.mul(&r, &m);
        assert_eq!(*m2.get(0, 1), r.from_i64(2));
        assert!(RMat::identity(&r, 2).is_identity(&r));
        assert!(!m.is_identity(&r));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn laurent() -> Ring {
            Ring::parse("laurent(r;t,u)").unwrap()
        }

        fn term() -> impl Strategy<Value = Value> {
            (
                -3i64..=3,
                prop::collection::vec(0i64..=2, 2),
                -2i64..=2,
            )
                .prop_map(|(c, pe, ue)| {
                    let mut m = BTreeMap::new();
                    if c != 0 {
                        m.insert(vec![ue, pe[0], pe[1]], BigInt::from(c));
                    }
                    Value::Pol(m)
                })
        }

        fn poly3() -> impl Strategy<Value = Value> {
            prop::collection::vec(term(), 3).prop_map(|ts| {
                let r = laurent();
                ts.iter().fold(r.zero(), |acc, t| r.add(&acc, t))
            })
        }

        proptest! {
            #[test]
            fn laurent_is_commutative_ring(a in poly3(), b in poly3(), c in poly3()) {
                let r = laurent();
                prop_assert_eq!(r.add(&a, &b), r.add(&b, &a));
                prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
                prop_assert_eq!(r.mul(&a, &r.mul(&b, &c)), r.mul(&r.mul(&a, &b), &c));
                prop_assert_eq!(
                    r.mul(&a, &r.add(&b, &c)),
                    r.add(&r.mul(&a, &b), &r.mul(&a, &c))
                );
                prop_assert_eq!(r.add(&a, &r.neg(&a)), r.zero());
            }

            #[test]
            fn finite_ring_axioms(n in 2u64..=12, x in 0i64..=11, y in 0i64..=11) {
                let r = Ring::new(RingDesc::ZmodN(n)).unwrap();
                let a = r.from_i64(x);
                let b = r.from_i64(y);
                prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
                if let Some(i) = r.inv(&a) {
                    prop_assert_eq!(r.mul(&a, &i), r.one());
                }
            }
        }
    }
}
