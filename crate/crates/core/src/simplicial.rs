//! Ordered simplicial complexes and the chain-level operations used to model
//! critical submanifolds and moduli components.
//!
//! A simplex is a strictly increasing vertex tuple; its orientation is the
//! vertex order. Chains are dense coefficient vectors indexed by the
//! complex's simplex list in a fixed dimension.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexData {
    vertex_count: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

fn is_strictly_increasing(s: &[usize]) -> bool {
    s.windows(2).all(|w| w[0] < w[1])
}

fn faces(s: &[usize]) -> impl Iterator<Item = (usize, Vec<usize>)> + '_ {
    (0..s.len()).map(move |i| {
        let mut f = s.to_vec();
        f.remove(i);
        (i, f)
    })
}

fn face_sign(i: usize) -> BigInt {
    if i.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

impl SimplicialComplexData {
    /// Takes the full simplex list by dimension. Dimension 0 must list
    /// every vertex `0..vertex_count`, and every face of a listed simplex
    /// must be listed.
    pub fn new(vertex_count: usize, simplices_by_dim: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut index = Vec::with_capacity(simplices_by_dim.len());
        for (dim, list) in simplices_by_dim.iter().enumerate() {
            let mut map = HashMap::with_capacity(list.len());
            for (n, s) in list.iter().enumerate() {
                if s.len() != dim + 1 {
                    return Err(Error::MalformedComplex(format!(
                        "{s:?} listed in dimension {dim}"
                    )));
                }
                if !is_strictly_increasing(s) {
                    return Err(Error::MalformedComplex(format!(
                        "{s:?} is not strictly increasing"
                    )));
                }
                if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                    return Err(Error::MalformedComplex(format!(
                        "vertex {v} out of range in {s:?}"
                    )));
                }
                if map.insert(s.clone(), n).is_some() {
                    return Err(Error::MalformedComplex(format!("{s:?} listed twice")));
                }
            }
            index.push(map);
        }
        let listed_vertices = index.first().map_or(0, HashMap::len);
        if listed_vertices != vertex_count {
            return Err(Error::MalformedComplex(format!(
                "{vertex_count} vertices declared, {listed_vertices} listed"
            )));
        }
        for dim in 1..simplices_by_dim.len() {
            for s in &simplices_by_dim[dim] {
                for (_, f) in faces(s) {
                    if !index[dim - 1].contains_key(&f) {
                        return Err(Error::MalformedComplex(format!(
                            "face {f:?} of {s:?} is missing"
                        )));
                    }
                }
            }
        }
        let mut simplices = simplices_by_dim;
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
            index.pop();
        }
        Ok(SimplicialComplexData {
            vertex_count,
            simplices,
            index,
        })
    }

    /// Closure of the given facets, each simplex list sorted lexicographically.
    pub fn from_facets(vertex_count: usize, facets: &[Vec<usize>]) -> Result<Self> {
        let top = facets.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top.max(1)];
        by_dim[0] = (0..vertex_count).map(|v| vec![v]).collect();
        let mut seen: Vec<std::collections::HashSet<Vec<usize>>> =
            vec![Default::default(); top.max(1)];
        for v in 0..vertex_count {
            seen[0].insert(vec![v]);
        }
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for f in facets {
            if f.is_empty() {
                return Err(Error::MalformedComplex("empty facet".into()));
            }
            if !is_strictly_increasing(f) {
                return Err(Error::MalformedComplex(format!(
                    "{f:?} is not strictly increasing"
                )));
            }
            if let Some(&v) = f.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::MalformedComplex(format!(
                    "vertex {v} out of range in {f:?}"
                )));
            }
            stack.push(f.clone());
        }
        while let Some(s) = stack.pop() {
            let dim = s.len() - 1;
            if !seen[dim].insert(s.clone()) {
                continue;
            }
            by_dim[dim].push(s.clone());
            if dim > 0 {
                stack.extend(faces(&s).map(|(_, f)| f));
            }
        }
        for list in &mut by_dim {
            list.sort();
        }
        Self::new(vertex_count, by_dim)
    }

    /// `n` isolated vertices.
    pub fn points(n: usize) -> Self {
        Self::from_facets(n, &[]).expect("isolated points form a complex")
    }

    /// Boundary of the standard `n`-simplex on vertices `0..=n`.
    pub fn simplex_boundary(n: usize) -> Self {
        let full: Vec<usize> = (0..=n).collect();
        let facets: Vec<Vec<usize>> = faces(&full).map(|(_, f)| f).collect();
        Self::from_facets(n + 1, &facets).expect("faces of a simplex form a complex")
    }

    /// The full standard `n`-simplex.
    pub fn simplex(n: usize) -> Self {
        Self::from_facets(n + 1, &[(0..=n).collect()]).expect("a simplex is a complex")
    }

    /// Cycle graph on `n >= 3` vertices with edges `[i, i+1]` and `[0, n-1]`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::MalformedComplex(format!(
                "a simplicial circle needs at least 3 vertices, got {n}"
            )));
        }
        let mut facets: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        facets.push(vec![0, n - 1]);
        Self::from_facets(n, &facets)
    }

    /// Path on `n >= 2` vertices with edges `[i, i+1]`.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::MalformedComplex(format!(
                "a path needs at least 2 vertices, got {n}"
            )));
        }
        let facets: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        Self::from_facets(n, &facets)
    }

    /// Disjoint union; vertices of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.vertex_count;
        let mut facets = self.facets();
        facets.extend(
            other
                .facets()
                .into_iter()
                .map(|f| f.into_iter().map(|v| v + shift).collect()),
        );
        Self::from_facets(self.vertex_count + other.vertex_count, &facets)
            .expect("union of complexes is a complex")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let dim = simplex.len().checked_sub(1)?;
        self.index.get(dim)?.get(simplex).copied()
    }

    pub fn simplices_by_dim(&self) -> &[Vec<Vec<usize>>] {
        &self.simplices
    }

    /// Simplices that are not a face of any other simplex, lowest dimension first.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for dim in 0..self.simplices.len() {
            let mut covered = vec![false; self.count(dim)];
            if let Some(next) = self.simplices.get(dim + 1) {
                for s in next {
                    for (_, f) in faces(s) {
                        covered[self.index[dim][&f]] = true;
                    }
                }
            }
            out.extend(
                self.simplices[dim]
                    .iter()
                    .zip(covered)
                    .filter(|(_, c)| !c)
                    .map(|(s, _)| s.clone()),
            );
        }
        out
    }

    /// Vertex components, as a component id per vertex.
    pub fn vertex_components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.vertex_count).map(|v| find(&mut parent, v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let comps = self.vertex_components();
        comps.iter().all(|&c| c == 0)
    }

    /// Boundary matrix `C_dim -> C_{dim-1}` with the alternating face sign.
    pub fn boundary_matrix(&self, dim: usize) -> IntMatrix {
        if dim == 0 {
            return IntMatrix::zeros(0, self.count(0));
        }
        let mut d = IntMatrix::zeros(self.count(dim - 1), self.count(dim));
        for (col, s) in self.simplices(dim).iter().enumerate() {
            for (i, f) in faces(s) {
                d.set(self.index[dim - 1][&f], col, face_sign(i));
            }
        }
        d
    }

    pub fn label(simplex: &[usize]) -> String {
        let inner: Vec<String> = simplex.iter().map(ToString::to_string).collect();
        format!("[{}]", inner.join(","))
    }
}

/// Simplicial chain complex in degrees `0..=top_dim`.
pub fn chain_complex_of(k: &SimplicialComplexData) -> ChainComplex {
    let top = k.top_dim().map_or(0, |t| t + 1);
    let ranks: Vec<usize> = (0..top).map(|d| k.count(d)).collect();
    let boundaries = (1..top).map(|d| k.boundary_matrix(d)).collect();
    let mut c = ChainComplex::new(0, ranks, boundaries).expect("shapes are consistent");
    for d in 0..top {
        let labels = k.simplices(d).iter().map(|s| SimplicialComplexData::label(s)).collect();
        c = c.with_labels(d as i64, labels).expect("one label per simplex");
    }
    c
}

/// A chain of fixed dimension on some complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub dim: usize,
    pub coeffs: Vec<BigInt>,
}

impl Chain {
    pub fn zero(k: &SimplicialComplexData, dim: usize) -> Self {
        Chain {
            dim,
            coeffs: vec![BigInt::zero(); k.count(dim)],
        }
    }

    pub fn simplex(k: &SimplicialComplexData, simplex: &[usize]) -> Result<Self> {
        let idx = k.index_of(simplex).ok_or_else(|| {
            Error::MalformedComplex(format!("{simplex:?} is not a simplex of the complex"))
        })?;
        let mut c = Self::zero(k, simplex.len() - 1);
        c.coeffs[idx] = BigInt::one();
        Ok(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn boundary(&self, k: &SimplicialComplexData) -> Chain {
        if self.dim == 0 {
            return Chain {
                dim: 0,
                coeffs: Vec::new(),
            };
        }
        Chain {
            dim: self.dim - 1,
            coeffs: k.boundary_matrix(self.dim).mul_vec(&self.coeffs),
        }
    }

    pub fn scaled(&self, factor: &BigInt) -> Chain {
        Chain {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.dim, other.dim);
        Chain {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// A coherently oriented top-dimensional chain with unit coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedCycle {
    pub chain: Chain,
    /// Codimension-one faces lying on exactly one top simplex; empty for
    /// closed pseudomanifolds.
    pub boundary_faces: Vec<Vec<usize>>,
}

impl OrientedCycle {
    pub fn is_closed(&self) -> bool {
        self.boundary_faces.is_empty()
    }
}

/// Fundamental cycle of a connected, orientable pseudomanifold, possibly
/// with boundary. Normalized so the first top simplex has coefficient +1.
pub fn fundamental_cycle(k: &SimplicialComplexData) -> Result<OrientedCycle> {
    let n = k
        .top_dim()
        .ok_or_else(|| Error::NoFundamentalCycle("empty complex".into()))?;
    let tops = k.simplices(n);
    if n == 0 {
        if tops.len() != 1 {
            return Err(Error::NoFundamentalCycle(format!(
                "{} isolated vertices are not connected",
                tops.len()
            )));
        }
        return Ok(OrientedCycle {
            chain: Chain {
                dim: 0,
                coeffs: vec![BigInt::one()],
            },
            boundary_faces: Vec::new(),
        });
    }

    // every lower simplex must lie in some top simplex
    let facets = k.facets();
    if let Some(f) = facets.iter().find(|f| f.len() != n + 1) {
        return Err(Error::NoFundamentalCycle(format!(
            "{f:?} is a facet of dimension below {n}"
        )));
    }

    // cofaces of each codimension-one face: (top index, sign of the face in its boundary)
    let mut cofaces: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); k.count(n - 1)];
    for (t, s) in tops.iter().enumerate() {
        for (i, f) in faces(s) {
            cofaces[k.index[n - 1][&f]].push((t, face_sign(i)));
        }
    }
    if let Some(f) = cofaces.iter().position(|c| c.len() > 2) {
        return Err(Error::NoFundamentalCycle(format!(
            "face {:?} lies on {} top simplices",
            k.simplices(n - 1)[f],
            cofaces[f].len()
        )));
    }

    let mut adjacency: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); tops.len()];
    for c in &cofaces {
        if let [(a, sa), (b, sb)] = c.as_slice() {
            // coefficient of b is -(coefficient of a) * sa * sb
            let rel = -(sa * sb);
            adjacency[*a].push((*b, rel.clone()));
            adjacency[*b].push((*a, rel));
        }
    }

    let mut coeffs: Vec<Option<BigInt>> = vec![None; tops.len()];
    coeffs[0] = Some(BigInt::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        let ct = coeffs[t].clone().expect("queued simplices are oriented");
        for (u, rel) in &adjacency[t] {
            let want = &ct * rel;
            match &coeffs[*u] {
                None => {
                    coeffs[*u] = Some(want);
                    queue.push_back(*u);
                }
                Some(have) if *have != want => {
                    return Err(Error::NoFundamentalCycle(format!(
                        "non-orientable: {:?} and {:?} disagree",
                        tops[t], tops[*u]
                    )));
                }
                Some(_) => {}
            }
        }
    }
    if let Some(t) = coeffs.iter().position(Option::is_none) {
        return Err(Error::NoFundamentalCycle(format!(
            "not connected through codimension-one faces: {:?} unreachable",
            tops[t]
        )));
    }

    let boundary_faces = cofaces
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() == 1)
        .map(|(f, _)| k.simplices(n - 1)[f].clone())
        .collect();
    Ok(OrientedCycle {
        chain: Chain {
            dim: n,
            coeffs: coeffs.into_iter().map(Option::unwrap).collect(),
        },
        boundary_faces,
    })
}

/// A vertex map that carries every simplex onto a simplex (possibly of
/// lower dimension) of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplexData,
    target: SimplicialComplexData,
    vertex_image: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialComplexData,
        target: SimplicialComplexData,
        vertex_image: Vec<usize>,
    ) -> Result<Self> {
        if vertex_image.len() != source.vertex_count() {
            return Err(Error::NotSimplicial(format!(
                "{} vertex images for {} vertices",
                vertex_image.len(),
                source.vertex_count()
            )));
        }
        if let Some(&v) = vertex_image.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::NotSimplicial(format!(
                "image vertex {v} is not in the target"
            )));
        }
        let map = SimplicialMap {
            source,
            target,
            vertex_image,
        };
        for s in map.source.facets() {
            let mut img: Vec<usize> = s.iter().map(|&v| map.vertex_image[v]).collect();
            img.sort_unstable();
            img.dedup();
            if map.target.index_of(&img).is_none() {
                return Err(Error::NotSimplicial(format!(
                    "{s:?} maps to {img:?}, which is not a simplex of the target"
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(k: &SimplicialComplexData) -> Self {
        SimplicialMap {
            source: k.clone(),
            target: k.clone(),
            vertex_image: (0..k.vertex_count()).collect(),
        }
    }

    pub fn source(&self) -> &SimplicialComplexData {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplexData {
        &self.target
    }

    pub fn vertex_image(&self) -> &[usize] {
        &self.vertex_image
    }

    /// Image simplex and the sign of the sorting permutation, or `None` if
    /// two vertices collapse together.
    pub fn image_simplex(&self, simplex: &[usize]) -> Option<(Vec<usize>, BigInt)> {
        let mut img: Vec<usize> = simplex.iter().map(|&v| self.vertex_image[v]).collect();
        let mut sign = BigInt::one();
        // insertion sort, counting transpositions
        for i in 1..img.len() {
            let mut j = i;
            while j > 0 && img[j - 1] > img[j] {
                img.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if img.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((img, sign))
    }

    /// Linear map `C_dim(source) -> C_dim(target)`.
    pub fn pushforward_matrix(&self, dim: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.count(dim), self.source.count(dim));
        for (col, s) in self.source.simplices(dim).iter().enumerate() {
            if let Some((img, sign)) = self.image_simplex(s) {
                let row = self.target.index_of(&img).expect("map is simplicial");
                m.set(row, col, sign);
            }
        }
        m
    }

    /// Number of sheets if this is a covering onto a union of connected
    /// components of the target. Reports the first simplex where it fails.
    pub fn covering_sheets(&self) -> Result<usize> {
        let top = self.source.top_dim().map_or(0, |t| t + 1);
        for dim in 0..top {
            for s in self.source.simplices(dim) {
                if self.image_simplex(s).is_none() {
                    return Err(Error::NotCovering(format!(
                        "source simplex {s:?} collapses"
                    )));
                }
            }
        }
        let components = self.target.vertex_components();
        let mut sheets_per_component: HashMap<usize, usize> = HashMap::new();
        let mut sheets: Option<usize> = None;
        let target_top = self.target.top_dim().map_or(0, |t| t + 1);
        for dim in 0..target_top.max(top) {
            let mut counts = vec![0usize; self.target.count(dim)];
            for s in self.source.simplices(dim) {
                let (img, _) = self.image_simplex(s).expect("checked above");
                counts[self.target.index_of(&img).expect("map is simplicial")] += 1;
            }
            for (t, s) in self.target.simplices(dim).iter().enumerate() {
                let comp = components[s[0]];
                let expected = *sheets_per_component.entry(comp).or_insert(counts[t]);
                if counts[t] != expected {
                    return Err(Error::NotCovering(format!(
                        "target simplex {s:?} has {} preimages, expected {expected}",
                        counts[t]
                    )));
                }
                if counts[t] > 0 {
                    match sheets {
                        None => sheets = Some(counts[t]),
                        Some(k) if k != counts[t] => {
                            return Err(Error::NotCovering(format!(
                                "target simplex {s:?} has {} preimages, expected {k}",
                                counts[t]
                            )))
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(sheets.unwrap_or(0))
    }

    /// Linear map `C_dim(target) -> C_dim(source)` sending a simplex to the
    /// signed sum of its lifts. Requires a covering.
    pub fn pullback_matrix(&self, dim: usize) -> Result<IntMatrix> {
        self.covering_sheets()?;
        Ok(self.pushforward_matrix(dim).transpose())
    }
}

/// Pushes a chain forward; simplices with collapsed vertices go to zero.
pub fn pushforward(f: &SimplicialMap, c: &Chain) -> Chain {
    Chain {
        dim: c.dim,
        coeffs: f.pushforward_matrix(c.dim).mul_vec(&c.coeffs),
    }
}

/// Replaces each target simplex by the signed sum of its lifts.
pub fn covering_pullback(f: &SimplicialMap, c: &Chain) -> Result<Chain> {
    Ok(Chain {
        dim: c.dim,
        coeffs: f.pullback_matrix(c.dim)?.mul_vec(&c.coeffs),
    })
}
