//! Exact combinatorics of the rooted k-homogeneous tree.
//!
//! Every vertex has `k + 1` neighbours. The tree is rooted at a fixed vertex
//! `o` and a vertex is addressed by its child path from `o`: the first index
//! lies in `0..=k` (the root has `k + 1` children), every later one in
//! `0..k`. The norm `||x||` is the path length.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Integer;

use crate::error::{Error, Result};

/// Default cap on the number of vertices an enumeration may produce.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeParams {
    k: u32,
}

impl TreeParams {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::param(format!("branching parameter k must be >= 2, got {k}")));
        }
        Ok(TreeParams { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn root(&self) -> VertexAddress {
        VertexAddress {
            k: self.k,
            path: Vec::new(),
        }
    }

    /// Builds an address, checking every child index.
    pub fn vertex(&self, path: &[u32]) -> Result<VertexAddress> {
        for (i, &c) in path.iter().enumerate() {
            let limit = if i == 0 { self.k + 1 } else { self.k };
            if c >= limit {
                return Err(Error::param(format!(
                    "child index {c} at depth {i} out of range 0..{limit}"
                )));
            }
        }
        Ok(VertexAddress {
            k: self.k,
            path: path.to_vec(),
        })
    }

    /// Parses a slash-separated child path; the empty string (or `/`) is the root.
    pub fn parse_vertex(&self, s: &str) -> Result<VertexAddress> {
        let s = s.trim().trim_matches('/');
        if s.is_empty() {
            return Ok(self.root());
        }
        let path = s
            .split('/')
            .map(|c| {
                u32::from_str(c.trim())
                    .map_err(|_| Error::Format(format!("bad child index {c:?} in path {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.vertex(&path)
    }

    pub fn num_children(&self, x: &VertexAddress) -> u32 {
        if x.is_root() {
            self.k + 1
        } else {
            self.k
        }
    }
}

/// A vertex, encoded as its child path from the root.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexAddress {
    k: u32,
    path: Vec<u32>,
}

impl VertexAddress {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    /// `||x|| = d(o, x)`.
    pub fn norm(&self) -> usize {
        self.path.len()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn parent(&self) -> Option<VertexAddress> {
        if self.is_root() {
            return None;
        }
        Some(VertexAddress {
            k: self.k,
            path: self.path[..self.path.len() - 1].to_vec(),
        })
    }

    pub fn child(&self, c: u32) -> VertexAddress {
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.extend_from_slice(&self.path);
        path.push(c);
        VertexAddress { k: self.k, path }
    }

    pub fn children(&self) -> impl Iterator<Item = VertexAddress> + '_ {
        let n = if self.is_root() { self.k + 1 } else { self.k };
        (0..n).map(move |c| self.child(c))
    }

    /// All `k + 1` neighbours: the parent (if any) first, then the children.
    pub fn neighbors(&self) -> Vec<VertexAddress> {
        let mut out: Vec<VertexAddress> = self.parent().into_iter().collect();
        out.extend(self.children());
        out
    }

    /// Graph distance; addresses from different trees are a parameter error.
    pub fn distance(&self, other: &VertexAddress) -> Result<usize> {
        if self.k != other.k {
            return Err(Error::param(format!(
                "vertices belong to trees with k={} and k={}",
                self.k, other.k
            )));
        }
        Ok(self.distance_unchecked(other))
    }

    pub(crate) fn distance_unchecked(&self, other: &VertexAddress) -> usize {
        let common = self
            .path
            .iter()
            .zip(&other.path)
            .take_while(|(a, b)| a == b)
            .count();
        self.path.len() + other.path.len() - 2 * common
    }
}

impl Ord for VertexAddress {
    /// Norm first, then lexicographic on the path.
    fn cmp(&self, other: &Self) -> Ordering {
        self.k
            .cmp(&other.k)
            .then(self.path.len().cmp(&other.path.len()))
            .then_with(|| self.path.cmp(&other.path))
    }
}

impl PartialOrd for VertexAddress {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return f.write_str("/");
        }
        let parts: Vec<String> = self.path.iter().map(u32::to_string).collect();
        f.write_str(&parts.join("/"))
    }
}

impl fmt::Debug for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v[{self}]")
    }
}

/// `|B_r(o)| = 1 + (k+1)(k^r - 1)/(k - 1)`.
pub fn ball_size(tp: TreeParams, r: usize) -> Integer {
    if r == 0 {
        return Integer::from(1);
    }
    let k = Integer::from(tp.k);
    let kr = Integer::from((&k).pow(r as u32));
    Integer::from(1) + (Integer::from(tp.k + 1) * (kr - 1u32)) / Integer::from(tp.k - 1)
}

/// `|S_n(o)|`: `1` for `n = 0`, `(k+1) k^(n-1)` otherwise.
pub fn sphere_size(tp: TreeParams, n: usize) -> Integer {
    if n == 0 {
        return Integer::from(1);
    }
    Integer::from(tp.k + 1) * Integer::from(tp.k).pow((n - 1) as u32)
}

/// The number of vertices in one shell of a sphere decomposition, written
/// as `factor * k^power` with `factor` one of `1`, `k - 1`, `k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellCount {
    pub factor: u32,
    pub power: usize,
}

impl ShellCount {
    pub fn to_integer(self, tp: TreeParams) -> Integer {
        Integer::from(self.factor) * Integer::from(tp.k).pow(self.power as u32)
    }
}

/// One shell of `S_n(x)`: the vertices reached by `j` steps toward the root
/// followed by `n - j` steps away from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shell {
    pub steps_up: usize,
    pub norm: usize,
    pub count: ShellCount,
}

/// Shells of `S_n(x)` for any `x` with `||x|| = m`, ordered by `steps_up`.
pub fn sphere_shells(tp: TreeParams, m: usize, n: usize) -> Vec<Shell> {
    let k = tp.k;
    let mut out = Vec::with_capacity(n.min(m) + 1);
    if n == 0 {
        out.push(Shell {
            steps_up: 0,
            norm: m,
            count: ShellCount { factor: 1, power: 0 },
        });
        return out;
    }
    if m == 0 {
        out.push(Shell {
            steps_up: 0,
            norm: n,
            count: ShellCount {
                factor: k + 1,
                power: n - 1,
            },
        });
        return out;
    }
    out.push(Shell {
        steps_up: 0,
        norm: m + n,
        count: ShellCount { factor: 1, power: n },
    });
    for j in 1..=n.min(m) {
        let norm = m + n - 2 * j;
        let count = if j == n {
            // the ancestor itself
            ShellCount { factor: 1, power: 0 }
        } else if j == m {
            // turned at the root: k of its k+1 children avoid the path back
            ShellCount {
                factor: 1,
                power: n - m,
            }
        } else {
            ShellCount {
                factor: k - 1,
                power: n - j - 1,
            }
        };
        out.push(Shell {
            steps_up: j,
            norm,
            count,
        });
    }
    out
}

/// `S_n(x)` split by distance from the root, with exact counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereDecomposition {
    pub center_norm: usize,
    pub radius: usize,
    /// `(norm, count)` pairs in order of increasing steps toward the root.
    pub entries: Vec<(usize, Integer)>,
}

impl SphereDecomposition {
    pub fn total(&self) -> Integer {
        self.entries.iter().map(|(_, c)| c).sum()
    }
}

pub fn sphere_decomposition(tp: TreeParams, m: usize, n: usize) -> SphereDecomposition {
    let entries = sphere_shells(tp, m, n)
        .into_iter()
        .map(|s| (s.norm, s.count.to_integer(tp)))
        .collect();
    SphereDecomposition {
        center_norm: m,
        radius: n,
        entries,
    }
}

fn check_budget(tp: TreeParams, r: usize, budget: u64) -> Result<()> {
    let size = ball_size(tp, r);
    if size > budget {
        return Err(Error::Resource {
            what: format!("B_{r}(o) with k={}", tp.k),
            needed: size.to_string(),
            budget,
        });
    }
    Ok(())
}

/// Streams `B_R(o)` in nondecreasing norm order, lexicographic within a
/// sphere. Fails up front when `|B_R(o)|` exceeds `budget`.
pub fn enumerate_ball(tp: TreeParams, radius: usize, budget: u64) -> Result<BallEnumerator> {
    check_budget(tp, radius, budget)?;
    Ok(BallEnumerator {
        radius,
        level: vec![tp.root()],
        pos: 0,
        depth: 0,
    })
}

pub struct BallEnumerator {
    radius: usize,
    level: Vec<VertexAddress>,
    pos: usize,
    depth: usize,
}

impl Iterator for BallEnumerator {
    type Item = VertexAddress;

    fn next(&mut self) -> Option<VertexAddress> {
        if self.pos == self.level.len() {
            if self.depth == self.radius || self.level.is_empty() {
                return None;
            }
            let next: Vec<VertexAddress> = self.level.iter().flat_map(|v| v.children()).collect();
            self.level = next;
            self.pos = 0;
            self.depth += 1;
        }
        let v = self.level[self.pos].clone();
        self.pos += 1;
        Some(v)
    }
}

/// `B_r(z)` in breadth-first order. The caller bounds the work: the ball
/// has `ball_size(r)` vertices.
pub fn ball_around(z: &VertexAddress, r: usize) -> Vec<VertexAddress> {
    let mut out = vec![z.clone()];
    let mut frontier: Vec<(VertexAddress, Option<VertexAddress>)> = vec![(z.clone(), None)];
    for _ in 0..r {
        let mut next = Vec::new();
        for (v, came_from) in &frontier {
            for w in v.neighbors() {
                if came_from.as_ref() != Some(&w) {
                    next.push((w, Some(v.clone())));
                }
            }
        }
        out.extend(next.iter().map(|(w, _)| w.clone()));
        frontier = next;
    }
    out
}
