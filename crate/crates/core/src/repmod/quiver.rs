use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of paths enumerated when building projectives
/// and injectives.
const MAX_PATHS: usize = 4096;

/// A finite acyclic quiver. Vertices are `0..vertices`; the first `principal`
/// of them are principal (mutable), the rest frozen.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: usize,
    principal: usize,
    arrows: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    principal: Option<usize>,
    arrows: Vec<[usize; 2]>,
}

impl Quiver {
    pub fn new(vertices: usize, principal: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if principal > vertices {
            return Err(Error::Domain(format!("{principal} principal vertices out of {vertices}")));
        }
        for &(s, t) in &arrows {
            if s >= vertices || t >= vertices {
                return Err(Error::Domain(format!("arrow {}->{} leaves the quiver", s + 1, t + 1)));
            }
            if s == t {
                return Err(Error::Domain(format!("loop at vertex {}", s + 1)));
            }
        }
        let q = Self { vertices, principal, arrows };
        q.topological_order()?;
        Ok(q)
    }

    /// Quiver with every vertex principal.
    pub fn unfrozen(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(vertices, vertices, arrows)
    }

    /// Linearly oriented `A_n`: `1 -> 2 -> ... -> n`.
    pub fn linear_a(n: usize) -> Result<Self> {
        Self::unfrozen(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn principal(&self) -> usize {
        self.principal
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.0 == v).map(|(i, _)| i)
    }

    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.1 == v).map(|(i, _)| i)
    }

    /// Number of arrows `i -> j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> i64 {
        self.arrows.iter().filter(|&&a| a == (i, j)).count() as i64
    }

    /// A topological order of the vertices, or an error if there is a cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut indeg = vec![0usize; self.vertices];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut ready: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(self.vertices);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.out_arrows(v).collect::<Vec<_>>() {
                let t = self.arrows[a].1;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.push(t);
                }
            }
        }
        if order.len() != self.vertices {
            return Err(Error::Domain("quiver has an oriented cycle".into()));
        }
        Ok(order)
    }

    /// All paths starting at `i` as `(end vertex, arrow sequence)`, the
    /// trivial path first.
    pub fn paths_from(&self, i: usize) -> Result<Vec<(usize, Vec<usize>)>> {
        self.check_vertex(i)?;
        let mut out = vec![(i, Vec::new())];
        let mut k = 0;
        while k < out.len() {
            let (end, path) = out[k].clone();
            for a in self.out_arrows(end) {
                let mut longer = path.clone();
                longer.push(a);
                out.push((self.arrows[a].1, longer));
            }
            if out.len() > MAX_PATHS {
                return Err(Error::BudgetExceeded(format!("more than {MAX_PATHS} paths")));
            }
            k += 1;
        }
        Ok(out)
    }

    /// All paths ending at `i` as `(start vertex, arrow sequence)`.
    pub fn paths_to(&self, i: usize) -> Result<Vec<(usize, Vec<usize>)>> {
        self.check_vertex(i)?;
        let mut out = vec![(i, Vec::new())];
        let mut k = 0;
        while k < out.len() {
            let (start, path) = out[k].clone();
            for a in self.in_arrows(start) {
                let mut longer = vec![a];
                longer.extend_from_slice(&path);
                out.push((self.arrows[a].0, longer));
            }
            if out.len() > MAX_PATHS {
                return Err(Error::BudgetExceeded(format!("more than {MAX_PATHS} paths")));
            }
            k += 1;
        }
        Ok(out)
    }

    fn check_vertex(&self, i: usize) -> Result<()> {
        if i >= self.vertices {
            return Err(Error::Domain(format!("vertex {} out of range", i + 1)));
        }
        Ok(())
    }

    /// The full subquiver on the principal vertices.
    pub fn principal_part(&self) -> Quiver {
        let arrows =
            self.arrows.iter().copied().filter(|&(s, t)| s < self.principal && t < self.principal).collect();
        Quiver { vertices: self.principal, principal: self.principal, arrows }
    }

    /// If the underlying graph of the subquiver on `0..k` is a path, its
    /// vertices in order, starting from the endpoint with the smaller index.
    pub fn path_order(&self, k: usize) -> Option<Vec<usize>> {
        if k == 0 {
            return Some(Vec::new());
        }
        let edges: Vec<(usize, usize)> =
            self.arrows.iter().copied().filter(|&(s, t)| s < k && t < k).collect();
        if edges.len() != k - 1 {
            return None;
        }
        let mut nbrs = vec![Vec::new(); k];
        for &(s, t) in &edges {
            nbrs[s].push(t);
            nbrs[t].push(s);
        }
        if nbrs.iter().any(|n| n.len() > 2) {
            return None;
        }
        let start = if k == 1 { 0 } else { (0..k).find(|&v| nbrs[v].len() == 1)? };
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = nbrs[cur].iter().find(|&&w| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        (order.len() == k).then_some(order)
    }

    fn to_wire(&self) -> QuiverJson {
        QuiverJson {
            vertices: self.vertices,
            principal: Some(self.principal),
            arrows: self.arrows.iter().map(|&(s, t)| [s + 1, t + 1]).collect(),
        }
    }

    /// Parses `{"vertices": n, "principal": k, "arrows": [[s, t], ...]}` with
    /// 1-based vertices. `principal` defaults to all vertices.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: QuiverJson = serde_json::from_str(s).map_err(|e| Error::Parse(format!("quiver: {e}")))?;
        Self::from_wire(raw)
    }

    fn from_wire(raw: QuiverJson) -> Result<Self> {
        let mut arrows = Vec::with_capacity(raw.arrows.len());
        for [s, t] in raw.arrows {
            if s == 0 || t == 0 {
                return Err(Error::Parse("quiver vertices are 1-based".into()));
            }
            arrows.push((s - 1, t - 1));
        }
        Self::new(raw.vertices, raw.principal.unwrap_or(raw.vertices), arrows)
    }
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = QuiverJson::deserialize(d)?;
        Quiver::from_wire(raw).map_err(serde::de::Error::custom)
    }
}
