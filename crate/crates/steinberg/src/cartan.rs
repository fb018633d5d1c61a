//! Generalized Cartan matrices and the diagrams they encode.
//!
//! A matrix is accepted when it is square with 2s on the diagonal,
//! nonpositive integers off it, and zeros occurring symmetrically.
//! Diagrams can be built from named types (`A2`, `B3`, `G2`, ...),
//! affine extensions (`A1~`), sums (`A1+B2`), or explicit matrix
//! literals in JSON.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CartanError {
    #[error("malformed diagram spec: {0}")]
    MalformedSpec(String),
    #[error("not a generalized Cartan matrix: {0}")]
    NotAGcm(String),
    #[error("diagram too large: {0}")]
    TooLarge(String),
}

/// A generalized Cartan matrix with node labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gcm {
    labels: Vec<String>,
    a: Vec<Vec<i64>>,
}

/// Irreducible spherical diagram types.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl std::fmt::Display for SphType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SphType::A(n) => write!(f, "A{n}"),
            SphType::B(n) => write!(f, "B{n}"),
            SphType::C(n) => write!(f, "C{n}"),
            SphType::D(n) => write!(f, "D{n}"),
            SphType::E(n) => write!(f, "E{n}"),
            SphType::F4 => write!(f, "F4"),
            SphType::G2 => write!(f, "G2"),
        }
    }
}

/// One connected component of a diagram, with its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<usize>,
    pub kind: Option<SphType>,
}

/// A connected component of the odd diagram (edges where m = 3),
/// with a spanning tree and a basis of fundamental cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddComponent {
    pub base: usize,
    pub nodes: Vec<usize>,
    pub tree_edges: Vec<(usize, usize)>,
    /// Each cycle is a closed vertex walk starting and ending at `base`.
    pub cycles: Vec<Vec<usize>>,
}

impl Gcm {
    pub fn new(labels: Vec<String>, a: Vec<Vec<i64>>) -> Result<Gcm, CartanError> {
        let n = a.len();
        if n == 0 {
            return Err(CartanError::NotAGcm("empty matrix".into()));
        }
        if labels.len() != n {
            return Err(CartanError::NotAGcm(format!(
                "{} labels for {} nodes",
                labels.len(),
                n
            )));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(CartanError::NotAGcm(format!("row {i} has length {}", row.len())));
            }
            if row[i] != 2 {
                return Err(CartanError::NotAGcm(format!("diagonal entry ({i},{i}) is {}", row[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    if a[i][j] > 0 {
                        return Err(CartanError::NotAGcm(format!(
                            "positive off-diagonal entry ({i},{j}) = {}",
                            a[i][j]
                        )));
                    }
                    if (a[i][j] == 0) != (a[j][i] == 0) {
                        return Err(CartanError::NotAGcm(format!(
                            "asymmetric zero at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(Gcm { labels, a })
    }

    pub fn from_entries(a: Vec<Vec<i64>>) -> Result<Gcm, CartanError> {
        let labels = (1..=a.len()).map(|i| i.to_string()).collect();
        Gcm::new(labels, a)
    }

    /// Parses a diagram spec: a named type (`A2`, `F4`), an affine
    /// extension (`A2~`), a sum (`A1+B2`), or a JSON matrix literal.
    pub fn parse(spec: &str) -> Result<Gcm, CartanError> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Err(CartanError::MalformedSpec("empty spec".into()));
        }
        if spec.starts_with('[') {
            let a: Vec<Vec<i64>> = serde_json::from_str(spec)
                .map_err(|e| CartanError::MalformedSpec(format!("bad matrix literal: {e}")))?;
            return Gcm::from_entries(a);
        }
        let mut parts = Vec::new();
        for part in spec.split('+') {
            parts.push(Gcm::named(part.trim())?);
        }
        let mut sum = parts.remove(0);
        for p in parts {
            sum = sum.direct_sum(&p);
        }
        // Uniform labels across a sum.
        if spec.contains('+') {
            sum.labels = (1..=sum.rank()).map(|i| i.to_string()).collect();
        }
        Ok(sum)
    }

    pub fn named(name: &str) -> Result<Gcm, CartanError> {
        let name = name.trim();
        let (core, affine) = match name.strip_suffix('~') {
            Some(c) => (c, true),
            None => (name, false),
        };
        let mut chars = core.chars();
        let fam = chars
            .next()
            .ok_or_else(|| CartanError::MalformedSpec("empty name".into()))?
            .to_ascii_uppercase();
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| CartanError::MalformedSpec(format!("bad rank in `{name}`")))?;
        let a = named_matrix(fam, rank)
            .ok_or_else(|| CartanError::MalformedSpec(format!("unknown type `{name}`")))?;
        let base = Gcm::from_entries(a)?;
        if affine {
            base.affinize()
        } else {
            Ok(base)
        }
    }

    /// Appends the affine node (labeled `0`) attached through the
    /// highest root of a connected spherical diagram.
    fn affinize(&self) -> Result<Gcm, CartanError> {
        let comps = self.components();
        if comps.len() != 1 || comps[0].kind.is_none() {
            return Err(CartanError::MalformedSpec(
                "affine extension needs a connected spherical base".into(),
            ));
        }
        let n = self.rank();
        let (theta, theta_v) = highest_root(&self.a);
        let mut a = vec![vec![0i64; n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = self.a[i][j];
            }
        }
        a[n][n] = 2;
        for j in 0..n {
            // Pairings of the lowest root -theta against the simples.
            a[n][j] = -(0..n).map(|k| theta_v[k] * self.a[k][j]).sum::<i64>();
            a[j][n] = -(0..n).map(|k| self.a[j][k] * theta[k]).sum::<i64>();
        }
        let mut labels = self.labels.clone();
        labels.push("0".to_string());
        Gcm::new(labels, a)
    }

    fn direct_sum(&self, other: &Gcm) -> Gcm {
        let n = self.rank();
        let m = other.rank();
        let mut a = vec![vec![0i64; n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = self.a[i][j];
            }
        }
        for i in 0..m {
            for j in 0..m {
                a[n + i][n + j] = other.a[i][j];
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Gcm { labels, a }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn matrix(&self) -> &Vec<Vec<i64>> {
        &self.a
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn node_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The Coxeter exponent m(i,j): 1 on the diagonal, then 2, 3, 4, 6
    /// as `a[i][j] * a[j][i]` is 0, 1, 2, 3, and `None` from 4 up.
    pub fn edge_label(&self, i: usize, j: usize) -> Option<u32> {
        if i == j {
            return Some(1);
        }
        match self.a[i][j] * self.a[j][i] {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }

    /// For an edge with m = 4 or 6, the endpoint whose row entry is -2
    /// or -3 (the short-root side).
    pub fn short_node(&self, i: usize, j: usize) -> Option<usize> {
        match self.edge_label(i, j) {
            Some(4) | Some(6) => {
                if self.a[i][j] <= -2 {
                    Some(i)
                } else {
                    Some(j)
                }
            }
            _ => None,
        }
    }

    pub fn joined(&self, i: usize, j: usize) -> bool {
        i != j && self.a[i][j] != 0
    }

    /// Connected components in node order, each classified against the
    /// spherical catalog (`None` if not spherical).
    pub fn components(&self) -> Vec<Component> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut nodes = Vec::new();
            let mut queue = std::collections::VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                nodes.push(v);
                for w in 0..n {
                    if !seen[w] && self.joined(v, w) {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            nodes.sort_unstable();
            let kind = classify_connected(&self.a, &nodes);
            out.push(Component { nodes, kind });
        }
        out
    }

    pub fn is_spherical(&self) -> bool {
        self.components().iter().all(|c| c.kind.is_some())
    }

    /// True when every induced subdiagram on at most k nodes is
    /// spherical.
    pub fn is_k_spherical(&self, k: usize) -> Result<bool, CartanError> {
        let n = self.rank();
        if n > 24 {
            return Err(CartanError::TooLarge(format!("rank {n} diagram")));
        }
        let k = k.min(n);
        for mask in 1u32..(1 << n) {
            if (mask.count_ones() as usize) > k {
                continue;
            }
            let nodes: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if !self.sub_gcm(&nodes).is_spherical() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Induced subdiagram on the given nodes (sorted), keeping labels.
    pub fn sub_gcm(&self, nodes: &[usize]) -> Gcm {
        let mut nodes = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        let a = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| self.a[i][j]).collect())
            .collect();
        let labels = nodes.iter().map(|&i| self.labels[i].clone()).collect();
        Gcm { labels, a }
    }

    pub fn odd_adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.edge_label(i, j) == Some(3)
    }

    /// Components of the odd diagram, each with a BFS spanning tree
    /// from its smallest node and the fundamental cycles of the
    /// remaining edges.
    pub fn odd_diagram(&self) -> Vec<OddComponent> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut parent: Vec<Option<usize>> = vec![None; n];
            let mut nodes = vec![start];
            let mut order = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < order.len() {
                let v = order[head];
                head += 1;
                for w in 0..n {
                    if !seen[w] && self.odd_adjacent(v, w) {
                        seen[w] = true;
                        parent[w] = Some(v);
                        nodes.push(w);
                        order.push(w);
                    }
                }
            }
            nodes.sort_unstable();
            let tree_edges: Vec<(usize, usize)> = nodes
                .iter()
                .filter_map(|&v| parent[v].map(|p| (p.min(v), p.max(v))))
                .collect();
            let mut cycles = Vec::new();
            for &u in &nodes {
                for &v in &nodes {
                    if u < v
                        && self.odd_adjacent(u, v)
                        && parent[u] != Some(v)
                        && parent[v] != Some(u)
                    {
                        cycles.push(fundamental_cycle(&parent, start, u, v));
                    }
                }
            }
            out.push(OddComponent {
                base: start,
                nodes,
                tree_edges,
                cycles,
            });
        }
        out
    }

    /// Shortest path between two nodes along odd edges, inclusive of
    /// both endpoints.
    pub fn odd_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let n = self.rank();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for w in 0..n {
                if !seen[w] && self.odd_adjacent(v, w) {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

fn path_to_base(parent: &[Option<usize>], v: usize) -> Vec<usize> {
    let mut path = vec![v];
    let mut cur = v;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path
}

fn fundamental_cycle(parent: &[Option<usize>], base: usize, u: usize, v: usize) -> Vec<usize> {
    // base -> u -> v -> base as one closed walk.
    let mut to_u = path_to_base(parent, u);
    to_u.reverse();
    let from_v = path_to_base(parent, v);
    let mut cycle = to_u;
    cycle.extend(from_v);
    debug_assert_eq!(cycle.first(), Some(&base));
    debug_assert_eq!(cycle.last(), Some(&base));
    cycle
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
    }
    for i in 0..n.saturating_sub(1) {
        a[i][i + 1] = -1;
        a[i + 1][i] = -1;
    }
    a
}

fn named_matrix(fam: char, n: usize) -> Option<Vec<Vec<i64>>> {
    match (fam, n) {
        ('A', _) if n >= 1 => Some(chain(n)),
        ('B', 2) => Some(vec![vec![2, -2], vec![-1, 2]]),
        ('B', _) if n >= 3 => {
            let mut a = chain(n);
            a[n - 1][n - 2] = -2;
            Some(a)
        }
        ('C', _) if n >= 2 => {
            let mut a = named_matrix('B', n)?;
            for i in 0..n {
                for j in 0..i {
                    let (x, y) = (a[i][j], a[j][i]);
                    a[i][j] = y;
                    a[j][i] = x;
                }
            }
            Some(a)
        }
        ('D', _) if n >= 4 => {
            let mut a = chain(n);
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
            Some(a)
        }
        ('E', 6) | ('E', 7) | ('E', 8) => {
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                a[i][i] = 2;
            }
            let mut edges = vec![(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
            if n >= 7 {
                edges.push((5, 6));
            }
            if n >= 8 {
                edges.push((6, 7));
            }
            for (i, j) in edges {
                a[i][j] = -1;
                a[j][i] = -1;
            }
            Some(a)
        }
        ('F', 4) => Some(vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, 0],
            vec![0, -2, 2, -1],
            vec![0, 0, -1, 2],
        ]),
        ('G', 2) => Some(vec![vec![2, -3], vec![-1, 2]]),
        _ => None,
    }
}

fn catalog_candidates(n: usize) -> Vec<(SphType, Vec<Vec<i64>>)> {
    let mut out = Vec::new();
    let mut push = |t: SphType, fam: char| {
        if let Some(a) = named_matrix(fam, n) {
            out.push((t, a));
        }
    };
    push(SphType::A(n), 'A');
    if n == 2 {
        push(SphType::B(2), 'B');
        push(SphType::G2, 'G');
    }
    if n >= 3 {
        push(SphType::B(n), 'B');
        push(SphType::C(n), 'C');
    }
    if n >= 4 {
        push(SphType::D(n), 'D');
    }
    if (6..=8).contains(&n) {
        push(SphType::E(n), 'E');
    }
    if n == 4 {
        push(SphType::F4, 'F');
    }
    out
}

fn classify_connected(a: &[Vec<i64>], nodes: &[usize]) -> Option<SphType> {
    let m = nodes.len();
    let sub: Vec<Vec<i64>> = nodes
        .iter()
        .map(|&i| nodes.iter().map(|&j| a[i][j]).collect())
        .collect();
    for (t, cat) in catalog_candidates(m) {
        if isomorphic(&sub, &cat) {
            return Some(t);
        }
    }
    None
}

/// Backtracking search for a node bijection matching both matrices
/// entrywise.
fn isomorphic(x: &[Vec<i64>], y: &[Vec<i64>]) -> bool {
    let n = x.len();
    if y.len() != n {
        return false;
    }
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn go(
        x: &[Vec<i64>],
        y: &[Vec<i64>],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        v: usize,
    ) -> bool {
        let n = x.len();
        if v == n {
            return true;
        }
        'cand: for c in 0..n {
            if used[c] {
                continue;
            }
            for u in 0..v {
                let cu = assign[u].unwrap();
                if x[v][u] != y[c][cu] || x[u][v] != y[cu][c] {
                    continue 'cand;
                }
            }
            assign[v] = Some(c);
            used[c] = true;
            if go(x, y, assign, used, v + 1) {
                return true;
            }
            assign[v] = None;
            used[c] = false;
        }
        false
    }
    go(x, y, &mut assign, &mut used, 0)
}

/// Highest root and its coroot for a connected spherical matrix, as
/// coefficient vectors over the simple roots and coroots.
fn highest_root(a: &[Vec<i64>]) -> (Vec<i64>, Vec<i64>) {
    let n = a.len();
    let mut simple = Vec::new();
    for i in 0..n {
        let mut r = vec![0i64; n];
        r[i] = 1;
        simple.push(r);
    }
    let mut known: std::collections::BTreeMap<Vec<i64>, Vec<i64>> = std::collections::BTreeMap::new();
    for i in 0..n {
        known.insert(simple[i].clone(), simple[i].clone());
    }
    let mut frontier: Vec<Vec<i64>> = simple;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for root in frontier {
            let coroot = known[&root].clone();
            for i in 0..n {
                let pair: i64 = (0..n).map(|j| a[i][j] * root[j]).sum();
                let mut r = root.clone();
                r[i] -= pair;
                if r.iter().any(|&c| c < 0) {
                    continue;
                }
                let cpair: i64 = (0..n).map(|j| coroot[j] * a[j][i]).sum();
                let mut cv = coroot.clone();
                cv[i] -= cpair;
                if known.insert(r.clone(), cv).is_none() {
                    next.push(r);
                }
            }
        }
        frontier = next;
        assert!(known.len() < 10_000, "root system failed to stabilize");
    }
    known
        .into_iter()
        .max_by_key(|(r, _)| (r.iter().sum::<i64>(), r.clone()))
        .expect("nonempty root set")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_matrices() {
        assert_eq!(Gcm::parse("A2").unwrap().matrix(), &vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(Gcm::parse("B2").unwrap().matrix(), &vec![vec![2, -2], vec![-1, 2]]);
        assert_eq!(Gcm::parse("G2").unwrap().matrix(), &vec![vec![2, -3], vec![-1, 2]]);
        assert_eq!(Gcm::parse("C2").unwrap().matrix(), &vec![vec![2, -1], vec![-2, 2]]);
        let b3 = Gcm::parse("B3").unwrap();
        assert_eq!(
            b3.matrix(),
            &vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]]
        );
        let f4 = Gcm::parse("F4").unwrap();
        assert_eq!(f4.entry(2, 1), -2);
        assert_eq!(f4.entry(1, 2), -1);
        let d4 = Gcm::parse("D4").unwrap();
        assert!(d4.joined(1, 3) && d4.joined(1, 2) && d4.joined(0, 1));
        assert!(!d4.joined(2, 3) && !d4.joined(0, 2));
    }

    #[test]
    fn edge_labels() {
        let g = Gcm::parse("G2").unwrap();
        assert_eq!(g.edge_label(0, 1), Some(6));
        assert_eq!(g.edge_label(0, 0), Some(1));
        let b = Gcm::parse("B2").unwrap();
        assert_eq!(b.edge_label(0, 1), Some(4));
        assert_eq!(b.short_node(0, 1), Some(0));
        assert_eq!(b.short_node(1, 0), Some(0));
        let a2 = Gcm::parse("A2").unwrap();
        assert_eq!(a2.edge_label(0, 1), Some(3));
        assert_eq!(a2.short_node(0, 1), None);
        let sum = Gcm::parse("A1+A1").unwrap();
        assert_eq!(sum.edge_label(0, 1), Some(2));
        let aff = Gcm::parse("[[2,-2],[-2,2]]").unwrap();
        assert_eq!(aff.edge_label(0, 1), None);
    }

    #[test]
    fn affine_extensions() {
        let a1aff = Gcm::parse("A1~").unwrap();
        assert_eq!(a1aff.matrix(), &vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(a1aff.labels(), &["1".to_string(), "0".to_string()]);
        let a2aff = Gcm::parse("A2~").unwrap();
        assert_eq!(
            a2aff.matrix(),
            &vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]
        );
        let g2aff = Gcm::parse("G2~").unwrap();
        assert_eq!(
            g2aff.matrix(),
            &vec![vec![2, -3, 0], vec![-1, 2, -1], vec![0, -1, 2]]
        );
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            Gcm::parse("[[2,1],[1,2]]"),
            Err(CartanError::NotAGcm(_))
        ));
        assert!(matches!(
            Gcm::parse("[[1,-1],[-1,2]]"),
            Err(CartanError::NotAGcm(_))
        ));
        assert!(matches!(
            Gcm::parse("[[2,0],[-1,2]]"),
            Err(CartanError::NotAGcm(_))
        ));
        assert!(matches!(Gcm::parse("Q5"), Err(CartanError::MalformedSpec(_))));
        assert!(matches!(Gcm::parse("B1"), Err(CartanError::MalformedSpec(_))));
    }

    #[test]
    fn classification() {
        for name in ["A1", "A4", "B2", "B3", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2"] {
            let g = Gcm::parse(name).unwrap();
            let comps = g.components();
            assert_eq!(comps.len(), 1, "{name}");
            assert_eq!(comps[0].kind.unwrap().to_string(), name, "{name}");
        }
        // C2 is B2 with the nodes swapped.
        let c2 = Gcm::parse("C2").unwrap();
        assert_eq!(c2.components()[0].kind, Some(SphType::B(2)));
        // A relabeled D4 still classifies.
        let d4 = Gcm::parse("[[2,0,-1,0],[0,2,-1,0],[-1,-1,2,-1],[0,0,-1,2]]").unwrap();
        assert_eq!(d4.components()[0].kind, Some(SphType::D(4)));
        let sum = Gcm::parse("A1+B2").unwrap();
        let comps = sum.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].nodes, vec![0]);
        assert_eq!(comps[0].kind, Some(SphType::A(1)));
        assert_eq!(comps[1].nodes, vec![1, 2]);
        assert_eq!(comps[1].kind, Some(SphType::B(2)));
        let aff = Gcm::parse("A1~").unwrap();
        assert_eq!(aff.components()[0].kind, None);
    }

    #[test]
    fn k_spherical() {
        let a2 = Gcm::parse("A2").unwrap();
        assert!(a2.is_k_spherical(2).unwrap());
        assert!(a2.is_k_spherical(3).unwrap());
        let a2aff = Gcm::parse("A2~").unwrap();
        assert!(a2aff.is_k_spherical(2).unwrap());
        assert!(!a2aff.is_k_spherical(3).unwrap());
        let a1aff = Gcm::parse("A1~").unwrap();
        assert!(!a1aff.is_k_spherical(2).unwrap());
    }

    #[test]
    fn odd_diagrams() {
        let a3 = Gcm::parse("A3").unwrap();
        let odd = a3.odd_diagram();
        assert_eq!(odd.len(), 1);
        assert_eq!(odd[0].nodes, vec![0, 1, 2]);
        assert_eq!(odd[0].tree_edges, vec![(0, 1), (1, 2)]);
        assert!(odd[0].cycles.is_empty());

        let b2 = Gcm::parse("B2").unwrap();
        let odd = b2.odd_diagram();
        assert_eq!(odd.len(), 2);
        assert!(odd.iter().all(|c| c.nodes.len() == 1 && c.cycles.is_empty()));

        let a2aff = Gcm::parse("A2~").unwrap();
        let odd = a2aff.odd_diagram();
        assert_eq!(odd.len(), 1);
        assert_eq!(odd[0].cycles.len(), 1);
        let cyc = &odd[0].cycles[0];
        assert_eq!(cyc.first(), Some(&0));
        assert_eq!(cyc.last(), Some(&0));
        assert_eq!(cyc.len(), 4);
    }

    #[test]
    fn odd_paths() {
        let f4 = Gcm::parse("F4").unwrap();
        assert_eq!(f4.odd_path(0, 1), Some(vec![0, 1]));
        assert_eq!(f4.odd_path(0, 2), None);
        assert_eq!(f4.odd_path(2, 3), Some(vec![2, 3]));
        let a3 = Gcm::parse("A3").unwrap();
        assert_eq!(a3.odd_path(0, 2), Some(vec![0, 1, 2]));
    }

    #[test]
    fn sub_gcm_keeps_labels() {
        let f4 = Gcm::parse("F4").unwrap();
        let sub = f4.sub_gcm(&[1, 2]);
        assert_eq!(sub.labels(), &["2".to_string(), "3".to_string()]);
        assert_eq!(sub.components()[0].kind, Some(SphType::B(2)));
        assert_eq!(sub.entry(1, 0), -2);
    }
}
