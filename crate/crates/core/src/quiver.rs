//! Quivers, dimension vectors and the bilinear forms attached to them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Unvalidated quiver description as read from a file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawQuiver {
    pub vertices: Vec<String>,
    /// `(source, target, multiplicity)`.
    pub arrows: Vec<(String, String, u32)>,
}

impl RawQuiver {
    /// Parses either the line format or the JSON format, deciding on the
    /// first non-blank character.
    pub fn parse(src: &str) -> Result<RawQuiver> {
        if src.trim_start().starts_with('{') {
            Self::parse_json(src)
        } else {
            Self::parse_text(src)
        }
    }

    /// ```text
    /// vertices: 1 2
    /// arrow: 1 2 x3
    /// ```
    pub fn parse_text(src: &str) -> Result<RawQuiver> {
        let mut raw = RawQuiver::default();
        let mut seen_vertices = false;
        for (lineno, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::MalformedInput(format!("line {}: {msg}", lineno + 1));
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| bad("expected `key: ...`"))?;
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "vertices" => {
                    if seen_vertices {
                        return Err(bad("duplicate `vertices` line"));
                    }
                    seen_vertices = true;
                    raw.vertices = fields.iter().map(|s| s.to_string()).collect();
                }
                "arrow" => {
                    let mult = match fields.len() {
                        2 => 1,
                        3 => fields[2]
                            .strip_prefix(['x', 'X', '×'])
                            .and_then(|k| k.parse::<u32>().ok())
                            .ok_or_else(|| bad("multiplicity must look like `x3`"))?,
                        _ => return Err(bad("expected `arrow: SOURCE TARGET [xK]`")),
                    };
                    raw.arrows
                        .push((fields[0].to_string(), fields[1].to_string(), mult));
                }
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        if !seen_vertices {
            return Err(Error::MalformedInput("missing `vertices` line".into()));
        }
        Ok(raw)
    }

    /// `{"vertices": ["1","2"], "arrows": [["1","2",3]]}`; the multiplicity
    /// may be omitted.
    pub fn parse_json(src: &str) -> Result<RawQuiver> {
        let value: serde_json::Value =
            serde_json::from_str(src).map_err(|e| Error::MalformedInput(e.to_string()))?;
        let bad = |msg: &str| Error::MalformedInput(msg.to_string());
        let ident = |v: &serde_json::Value| -> Result<String> {
            match v {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                _ => Err(bad("vertex identifiers must be strings or numbers")),
            }
        };
        let obj = value
            .as_object()
            .ok_or_else(|| bad("expected a JSON object"))?;
        let vertices = obj
            .get("vertices")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing `vertices` array"))?
            .iter()
            .map(ident)
            .collect::<Result<Vec<_>>>()?;
        let mut arrows = Vec::new();
        if let Some(list) = obj.get("arrows") {
            for a in list
                .as_array()
                .ok_or_else(|| bad("`arrows` must be an array"))?
            {
                let a = a.as_array().ok_or_else(|| bad("each arrow is an array"))?;
                let mult = match a.len() {
                    2 => 1,
                    3 => a[2]
                        .as_u64()
                        .and_then(|k| u32::try_from(k).ok())
                        .ok_or_else(|| bad("arrow multiplicity must be a nonnegative integer"))?,
                    _ => return Err(bad("arrow must be [source, target, multiplicity?]")),
                };
                arrows.push((ident(&a[0])?, ident(&a[1])?, mult));
            }
        }
        Ok(RawQuiver { vertices, arrows })
    }
}

/// Finite acyclic quiver. Vertices are stored in canonical order: a
/// topological order (sources first) with ties broken lexicographically by
/// identifier. Every vector indexed by vertices uses this order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    names: Vec<String>,
    /// One entry per arrow (multiplicities expanded), sorted.
    arrows: Vec<(usize, usize)>,
    /// `adjacency[i][j]` = number of arrows `i -> j`.
    adjacency: Vec<Vec<i64>>,
}

impl Quiver {
    /// Validates a raw description.
    pub fn validate(raw: &RawQuiver) -> Result<Quiver> {
        let mut index = BTreeMap::new();
        for (i, v) in raw.vertices.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::MalformedInput("empty vertex identifier".into()));
            }
            if index.insert(v.as_str(), i).is_some() {
                return Err(Error::MalformedInput(format!("duplicate vertex {v:?}")));
            }
        }
        let n = raw.vertices.len();
        let mut adj = vec![vec![0i64; n]; n];
        for (s, t, k) in &raw.arrows {
            let lookup = |v: &String| {
                index.get(v.as_str()).copied().ok_or_else(|| {
                    Error::MalformedInput(format!("arrow endpoint {v:?} is not a vertex"))
                })
            };
            let (si, ti) = (lookup(s)?, lookup(t)?);
            if *k > 0 && si == ti {
                return Err(Error::CyclicQuiver(s.clone()));
            }
            adj[si][ti] += *k as i64;
        }

        // Kahn's algorithm; the ready set is ordered by identifier.
        let mut indegree: Vec<i64> = (0..n).map(|j| (0..n).map(|i| adj[i][j]).sum()).collect();
        let mut ready: BTreeSet<(&str, usize)> = (0..n)
            .filter(|&j| indegree[j] == 0)
            .map(|j| (raw.vertices[j].as_str(), j))
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&first) = ready.iter().next() {
            ready.remove(&first);
            let (_, i) = first;
            order.push(i);
            for j in 0..n {
                if adj[i][j] > 0 {
                    indegree[j] -= adj[i][j];
                    if indegree[j] == 0 {
                        ready.insert((raw.vertices[j].as_str(), j));
                    }
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n)
                .filter(|&j| indegree[j] > 0)
                .map(|j| raw.vertices[j].clone())
                .min()
                .unwrap_or_default();
            return Err(Error::CyclicQuiver(stuck));
        }

        let mut position = vec![0; n];
        for (p, &i) in order.iter().enumerate() {
            position[i] = p;
        }
        let names = order.iter().map(|&i| raw.vertices[i].clone()).collect();
        let mut adjacency = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                adjacency[position[i]][position[j]] = adj[i][j];
            }
        }
        Ok(Self::from_canonical(names, adjacency))
    }

    fn from_canonical(names: Vec<String>, adjacency: Vec<Vec<i64>>) -> Quiver {
        let n = names.len();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for _ in 0..adjacency[i][j] {
                    arrows.push((i, j));
                }
            }
        }
        Quiver {
            names,
            arrows,
            adjacency,
        }
    }

    pub fn parse(src: &str) -> Result<Quiver> {
        Self::validate(&RawQuiver::parse(src)?)
    }

    /// Quiver on vertices `1..=n` from `(source, target, multiplicity)`
    /// triples given by 1-based vertex numbers.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, u32)]) -> Result<Quiver> {
        let raw = RawQuiver {
            vertices: (1..=n).map(|i| i.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|&(s, t, k)| (s.to_string(), t.to_string(), k))
                .collect(),
        };
        Self::validate(&raw)
    }

    /// Generalized Kronecker quiver: vertices `1, 2` and `m` arrows `1 -> 2`.
    pub fn kronecker(m: u32) -> Quiver {
        Self::from_arrows(2, &[(1, 2, m)]).expect("Kronecker quiver is acyclic")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Arrows as `(source, target)` canonical indices, one per arrow.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn arrow_count(&self, i: usize, j: usize) -> i64 {
        self.adjacency[i][j]
    }

    pub fn to_raw(&self) -> RawQuiver {
        let n = self.vertex_count();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.adjacency[i][j] > 0 {
                    arrows.push((
                        self.names[i].clone(),
                        self.names[j].clone(),
                        self.adjacency[i][j] as u32,
                    ));
                }
            }
        }
        RawQuiver {
            vertices: self.names.clone(),
            arrows,
        }
    }

    /// All arrows reversed.
    pub fn opposite(&self) -> Quiver {
        let mut raw = self.to_raw();
        for a in raw.arrows.iter_mut() {
            std::mem::swap(&mut a.0, &mut a.1);
        }
        Self::validate(&raw).expect("opposite of an acyclic quiver is acyclic")
    }

    /// Re-indexes `v` (indexed by this quiver's vertices) by the vertex order
    /// of `target`, matching vertices by identifier.
    pub fn transport(&self, v: &[i64], target: &Quiver) -> Result<Vec<i64>> {
        self.check_len(v)?;
        target
            .names
            .iter()
            .map(|name| {
                self.vertex_index(name)
                    .map(|i| v[i])
                    .ok_or_else(|| Error::MalformedInput(format!("vertex {name:?} not shared")))
            })
            .collect()
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.vertex_count() {
            return Err(Error::IndexMismatch {
                expected: self.vertex_count(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Euler matrix `E = I - A` with `⟨d,e⟩ = dᵀ E e`.
    pub fn euler_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| i64::from(i == j) - self.adjacency[i][j])
                    .collect()
            })
            .collect()
    }

    /// Symmetric generalized Cartan matrix `C = E + Eᵀ`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let e = self.euler_matrix();
        let n = self.vertex_count();
        (0..n)
            .map(|i| (0..n).map(|j| e[i][j] + e[j][i]).collect())
            .collect()
    }

    /// `⟨d,e⟩ = Σ d_i e_i − Σ_{α:i→j} d_i e_j`. Negative entries are allowed.
    pub fn euler_form(&self, d: &[i64], e: &[i64]) -> Result<i64> {
        self.check_len(d)?;
        self.check_len(e)?;
        Ok(self.euler_unchecked(d, e))
    }

    pub(crate) fn euler_unchecked(&self, d: &[i64], e: &[i64]) -> i64 {
        let n = d.len();
        let mut total: i64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
        for i in 0..n {
            if d[i] == 0 {
                continue;
            }
            for j in 0..n {
                total -= self.adjacency[i][j] * d[i] * e[j];
            }
        }
        total
    }

    /// `(d,e) = ⟨d,e⟩ + ⟨e,d⟩`.
    pub fn sym_form(&self, d: &[i64], e: &[i64]) -> Result<i64> {
        Ok(self.euler_form(d, e)? + self.euler_form(e, d)?)
    }

    /// `{d,e} = ⟨d,e⟩ − ⟨e,d⟩`.
    pub fn antisym_form(&self, d: &[i64], e: &[i64]) -> Result<i64> {
        Ok(self.euler_form(d, e)? - self.euler_form(e, d)?)
    }

    /// The row `((d, i))_i`, i.e. `C d`.
    pub fn sym_row(&self, d: &[i64]) -> Result<Vec<i64>> {
        self.check_len(d)?;
        let c = self.cartan_matrix();
        Ok(c.iter()
            .map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Connected components of the underlying graph, each sorted, in order of
    /// their smallest canonical index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if !seen[j] && (self.adjacency[i][j] > 0 || self.adjacency[j][i] > 0) {
                        seen[j] = true;
                        comp.push(j);
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Classification of every connected component by the definiteness of
    /// the restricted Cartan matrix, decided in exact arithmetic.
    pub fn classify(&self) -> Vec<ComponentClass> {
        let c = self.cartan_matrix();
        self.components()
            .into_iter()
            .map(|comp| {
                let sub: Vec<Vec<Rational>> = comp
                    .iter()
                    .map(|&i| {
                        comp.iter()
                            .map(|&j| Rational::from_integer(c[i][j] as i128))
                            .collect()
                    })
                    .collect();
                let class = match definiteness(sub) {
                    Definiteness::PositiveDefinite => Classification::Dynkin,
                    Definiteness::PositiveSemidefinite => Classification::ExtendedDynkin,
                    Definiteness::Indefinite => Classification::Wild,
                };
                ComponentClass {
                    vertices: comp.iter().map(|&i| self.names[i].clone()).collect(),
                    class,
                }
            })
            .collect()
    }

    /// Classification of a connected quiver.
    pub fn connected_class(&self) -> Result<Classification> {
        let comps = self.classify();
        if comps.len() != 1 {
            return Err(Error::Disconnected(comps.len()));
        }
        Ok(comps[0].class)
    }

    /// Unit vector `i`.
    pub fn unit(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.vertex_count()];
        v[i] = 1;
        v
    }

    /// Parses whitespace-separated integers in canonical vertex order.
    pub fn parse_dim(&self, s: &str) -> Result<DimVector> {
        let coords = s
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::MalformedInput(format!("bad dimension entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.dim(coords)
    }

    /// A dimension vector for this quiver.
    pub fn dim(&self, coords: Vec<i64>) -> Result<DimVector> {
        self.check_len(&coords)?;
        DimVector::new(coords)
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let raw = self.to_raw();
        writeln!(f, "vertices: {}", raw.vertices.join(" "))?;
        for (s, t, k) in raw.arrows {
            if k == 1 {
                writeln!(f, "arrow: {s} {t}")?;
            } else {
                writeln!(f, "arrow: {s} {t} x{k}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Dynkin,
    ExtendedDynkin,
    Wild,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Dynkin => "Dynkin",
            Classification::ExtendedDynkin => "ExtendedDynkin",
            Classification::Wild => "Wild",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentClass {
    pub vertices: Vec<String>,
    pub class: Classification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    /// Positive semidefinite with nontrivial kernel.
    PositiveSemidefinite,
    Indefinite,
}

/// Exact definiteness of a symmetric rational matrix by symmetric Gaussian
/// elimination with diagonal pivoting.
pub fn definiteness(mut m: Vec<Vec<Rational>>) -> Definiteness {
    let n = m.len();
    let zero = Rational::from_integer(0);
    let mut active: Vec<usize> = (0..n).collect();
    let mut singular = false;
    while !active.is_empty() {
        if active.iter().any(|&i| m[i][i] < zero) {
            return Definiteness::Indefinite;
        }
        match active.iter().position(|&i| m[i][i] > zero) {
            Some(p) => {
                let k = active.remove(p);
                let pivot = m[k][k];
                for &i in &active {
                    let factor = m[i][k] / pivot;
                    if factor == zero {
                        continue;
                    }
                    for &j in &active {
                        let delta = factor * m[k][j];
                        m[i][j] -= delta;
                    }
                }
            }
            None => {
                // All remaining diagonal entries vanish: PSD forces the whole
                // remaining block to vanish.
                if active
                    .iter()
                    .any(|&i| active.iter().any(|&j| m[i][j] != zero))
                {
                    return Definiteness::Indefinite;
                }
                singular = true;
                break;
            }
        }
    }
    if singular {
        Definiteness::PositiveSemidefinite
    } else {
        Definiteness::PositiveDefinite
    }
}

/// Nonnegative integer vector indexed by the vertices in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(Vec<i64>);

impl DimVector {
    pub fn new(coords: Vec<i64>) -> Result<DimVector> {
        if let Some(x) = coords.iter().find(|&&x| x < 0) {
            return Err(Error::MalformedInput(format!(
                "dimension vectors are nonnegative, found {x}"
            )));
        }
        Ok(DimVector(coords))
    }

    pub fn zero(n: usize) -> DimVector {
        DimVector(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise partial order.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: i64) -> DimVector {
        DimVector(self.0.iter().map(|x| x * k).collect())
    }

    /// `self - other`; fails unless `other <= self`.
    pub fn minus(&self, other: &DimVector) -> Result<DimVector> {
        if !other.le(self) {
            return Err(Error::NotBelow(other.to_string(), self.to_string()));
        }
        Ok(DimVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub(crate) fn from_unchecked(coords: Vec<i64>) -> DimVector {
        debug_assert!(coords.iter().all(|&x| x >= 0));
        DimVector(coords)
    }
}

impl Deref for DimVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Quiver {
        Quiver::from_arrows(2, &[(1, 2, 1)]).unwrap()
    }

    #[test]
    fn validates_kronecker() {
        let q = Quiver::parse("vertices: 1 2\narrow: 1 2 x3\n").unwrap();
        assert_eq!(q.arrow_count(0, 1), 3);
        assert_eq!(q.arrows().len(), 3);
        assert_eq!(q, Quiver::kronecker(3));
    }

    #[test]
    fn rejects_loops_and_cycles() {
        assert!(matches!(
            Quiver::parse("vertices: 1\narrow: 1 1"),
            Err(Error::CyclicQuiver(_))
        ));
        assert!(matches!(
            Quiver::from_arrows(3, &[(1, 2, 1), (2, 3, 1), (3, 1, 1)]),
            Err(Error::CyclicQuiver(_))
        ));
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            Quiver::parse("vertices: 1 2\narrow: 1 3"),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            Quiver::parse("vertices: 1 1"),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            Quiver::parse("arrow: 1 2"),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn json_matches_text() {
        let j = Quiver::parse(r#"{"vertices":["1","2"],"arrows":[["1","2",3]]}"#).unwrap();
        assert_eq!(j, Quiver::kronecker(3));
        let j = Quiver::parse(r#"{"vertices":[1,2],"arrows":[[1,2]]}"#).unwrap();
        assert_eq!(j, a2());
    }

    #[test]
    fn canonical_order_is_topological_then_lexicographic() {
        let q = Quiver::parse("vertices: c b a\narrow: c a\n").unwrap();
        // b and c are sources; b < c lexicographically; a follows c.
        assert_eq!(q.vertex_names(), &["b", "c", "a"]);
        let q = Quiver::parse("vertices: 1 2\narrow: 2 1\n").unwrap();
        assert_eq!(q.vertex_names(), &["2", "1"]);
    }

    #[test]
    fn form_values() {
        let k3 = Quiver::kronecker(3);
        assert_eq!(k3.euler_form(&[1, 1], &[1, 1]).unwrap(), -1);
        assert_eq!(k3.sym_form(&[1, 1], &[1, 1]).unwrap(), -2);
        assert_eq!(k3.antisym_form(&[1, 1], &[1, 0]).unwrap(), 3);
        assert_eq!(k3.antisym_form(&[2, 5], &[2, 5]).unwrap(), 0);
        assert_eq!(a2().euler_form(&[1, 0], &[0, 1]).unwrap(), -1);
        for i in 0..2 {
            assert_eq!(k3.euler_form(&k3.unit(i), &k3.unit(i)).unwrap(), 1);
        }
        assert!(matches!(
            k3.euler_form(&[1], &[1, 1]),
            Err(Error::IndexMismatch { .. })
        ));
    }

    #[test]
    fn cartan_has_diagonal_two() {
        let c = Quiver::kronecker(3).cartan_matrix();
        assert_eq!(c, vec![vec![2, -3], vec![-3, 2]]);
    }

    #[test]
    fn classification_table() {
        assert_eq!(a2().connected_class().unwrap(), Classification::Dynkin);
        assert_eq!(
            Quiver::kronecker(2).connected_class().unwrap(),
            Classification::ExtendedDynkin
        );
        assert_eq!(
            Quiver::kronecker(3).connected_class().unwrap(),
            Classification::Wild
        );
        // D4 with a central sink.
        let d4 = Quiver::from_arrows(4, &[(1, 4, 1), (2, 4, 1), (3, 4, 1)]).unwrap();
        assert_eq!(d4.connected_class().unwrap(), Classification::Dynkin);
        // extended D4: four arms.
        let d4t = Quiver::from_arrows(5, &[(1, 5, 1), (2, 5, 1), (3, 5, 1), (4, 5, 1)]).unwrap();
        assert_eq!(
            d4t.connected_class().unwrap(),
            Classification::ExtendedDynkin
        );
        // extended A2 (a triangle with acyclic orientation).
        let a2t = Quiver::from_arrows(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 1)]).unwrap();
        assert_eq!(
            a2t.connected_class().unwrap(),
            Classification::ExtendedDynkin
        );
    }

    #[test]
    fn classify_reports_each_component() {
        let q = Quiver::parse("vertices: a b c d\narrow: a b x3\narrow: c d\n").unwrap();
        let comps = q.classify();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].class, Classification::Wild);
        assert_eq!(comps[1].class, Classification::Dynkin);
        assert!(matches!(q.connected_class(), Err(Error::Disconnected(2))));
    }

    #[test]
    fn opposite_reverses_and_is_an_involution() {
        let k3 = Quiver::kronecker(3);
        let op = k3.opposite();
        assert_eq!(op.vertex_names(), &["2", "1"]);
        assert_eq!(op.arrow_count(0, 1), 3);
        assert_eq!(op.opposite(), k3);
        assert_eq!(
            a2().opposite().to_raw().arrows,
            vec![("2".into(), "1".into(), 1)]
        );
    }

    #[test]
    fn dim_vectors() {
        let k3 = Quiver::kronecker(3);
        let d = k3.parse_dim("2 3").unwrap();
        assert_eq!(d.to_string(), "(2,3)");
        assert!(k3.parse_dim("1 -1").is_err());
        assert!(k3.parse_dim("1").is_err());
        assert!(DimVector::new(vec![1, 2]).unwrap().le(&d));
        assert!(matches!(
            DimVector::new(vec![3, 0]).unwrap().minus(&d),
            Err(Error::NotBelow(..))
        ));
    }
}
