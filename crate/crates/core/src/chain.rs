//! Free chain complexes over the integers, chain maps, and homology.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{snf, IntMatrix, SmithDecomposition};

/// A bounded chain complex of finitely generated free abelian groups.
///
/// Degrees outside `min_degree..=max_degree` have rank zero. The boundary
/// in degree `k` is a `rank(k-1) x rank(k)` matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    min_degree: i64,
    ranks: Vec<usize>,
    // boundaries[t] is d_{min_degree + 1 + t}
    boundaries: Vec<IntMatrix>,
    labels: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexIssue {
    /// Boundary matrix in `degree` has the wrong shape.
    Shape {
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// `d_{degree-1} * d_degree` is not zero.
    SquareNonZero { degree: i64, residual: IntMatrix },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    pub issues: Vec<ComplexIssue>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl ChainComplex {
    /// `boundaries[t]` is the differential leaving degree `min_degree + 1 + t`,
    /// so there is one fewer boundary than there are ranks.
    pub fn new(min_degree: i64, ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if boundaries.len() != ranks.len().saturating_sub(1) {
            return Err(Error::Dimension(format!(
                "{} ranks need {} boundaries, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        let labels = ranks
            .iter()
            .enumerate()
            .map(|(t, &r)| {
                let k = min_degree + t as i64;
                (0..r).map(|n| format!("e{k}.{n}")).collect()
            })
            .collect();
        Ok(ChainComplex {
            min_degree,
            ranks,
            boundaries,
            labels,
        })
    }

    /// A complex with the given ranks and all differentials zero.
    pub fn zero_differentials(min_degree: i64, ranks: Vec<usize>) -> Self {
        let boundaries = ranks
            .windows(2)
            .map(|w| IntMatrix::zeros(w[0], w[1]))
            .collect();
        Self::new(min_degree, ranks, boundaries).expect("shapes are consistent")
    }

    pub fn with_labels(mut self, degree: i64, labels: Vec<String>) -> Result<Self> {
        let t = self.slot(degree).ok_or_else(|| {
            Error::Dimension(format!("degree {degree} is outside the complex"))
        })?;
        if labels.len() != self.ranks[t] {
            return Err(Error::Dimension(format!(
                "{} labels for rank {} in degree {degree}",
                labels.len(),
                self.ranks[t]
            )));
        }
        self.labels[t] = labels;
        Ok(self)
    }

    fn slot(&self, degree: i64) -> Option<usize> {
        let t = degree - self.min_degree;
        (t >= 0 && (t as usize) < self.ranks.len()).then_some(t as usize)
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Highest stored degree; `min_degree - 1` for a complex with no groups.
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_degree..=self.max_degree()
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.slot(degree).map_or(0, |t| self.ranks[t])
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn labels(&self, degree: i64) -> Vec<String> {
        self.slot(degree)
            .map_or_else(Vec::new, |t| self.labels[t].clone())
    }

    /// The differential `C_degree -> C_{degree-1}`.
    pub fn boundary(&self, degree: i64) -> IntMatrix {
        let t = degree - self.min_degree - 1;
        if t >= 0 && (t as usize) < self.boundaries.len() {
            self.boundaries[t as usize].clone()
        } else {
            IntMatrix::zeros(self.rank(degree - 1), self.rank(degree))
        }
    }

    pub fn validate(&self) -> ComplexReport {
        let mut issues = Vec::new();
        for (t, d) in self.boundaries.iter().enumerate() {
            let k = self.min_degree + 1 + t as i64;
            let expected = (self.rank(k - 1), self.rank(k));
            if d.shape() != expected {
                issues.push(ComplexIssue::Shape {
                    degree: k,
                    expected,
                    found: d.shape(),
                });
            }
        }
        if !issues.is_empty() {
            return ComplexReport { issues };
        }
        for k in self.min_degree + 2..=self.max_degree() {
            let residual = &self.boundary(k - 1) * &self.boundary(k);
            if !residual.is_zero() {
                issues.push(ComplexIssue::SquareNonZero {
                    degree: k,
                    residual,
                });
            }
        }
        ComplexReport { issues }
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.issues.first() {
            None => Ok(()),
            Some(ComplexIssue::Shape { degree, .. }) => Err(Error::InvalidComplex(format!(
                "boundary shape mismatch in degree {degree}"
            ))),
            Some(ComplexIssue::SquareNonZero { degree, .. }) => Err(Error::InvalidComplex(
                format!("d o d != 0 in degree {degree}"),
            )),
        }
    }

    /// Degreewise direct sum, with `self` first in each degree.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let (lo, hi) = joint_range(self, other);
        let ranks: Vec<usize> = (lo..=hi)
            .map(|k| self.rank(k) + other.rank(k))
            .collect();
        let boundaries = (lo + 1..=hi)
            .map(|k| self.boundary(k).direct_sum(&other.boundary(k)))
            .collect();
        let mut out = ChainComplex::new(lo, ranks, boundaries).expect("shapes are consistent");
        for k in lo..=hi {
            let mut labels = self.labels(k);
            labels.extend(other.labels(k));
            if let Some(t) = out.slot(k) {
                out.labels[t] = labels;
            }
        }
        out
    }

    /// Applies a change of basis `P_k` in each degree: `d'_k = P_{k-1} d_k P_k^{-1}`.
    /// `bases` maps degree to the pair `(P_k, P_k^{-1})`; missing degrees keep
    /// the identity.
    pub fn change_basis(&self, bases: &BTreeMap<i64, (IntMatrix, IntMatrix)>) -> Result<Self> {
        let ranks = self.ranks.clone();
        let mut boundaries = Vec::with_capacity(self.boundaries.len());
        for k in self.min_degree + 1..=self.max_degree() {
            let mut d = self.boundary(k);
            if let Some((_, inv)) = bases.get(&k) {
                d = d.checked_mul(inv)?;
            }
            if let Some((p, _)) = bases.get(&(k - 1)) {
                d = p.checked_mul(&d)?;
            }
            boundaries.push(d);
        }
        ChainComplex::new(self.min_degree, ranks, boundaries)
    }
}

fn joint_range(a: &ChainComplex, b: &ChainComplex) -> (i64, i64) {
    match (a.ranks.is_empty(), b.ranks.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (b.min_degree, b.max_degree()),
        (false, true) => (a.min_degree, a.max_degree()),
        (false, false) => (
            a.min_degree.min(b.min_degree),
            a.max_degree().max(b.max_degree()),
        ),
    }
}

/// A finitely generated abelian group `Z^betti + sum Z/t` with optional
/// representative cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
    /// Torsion generators first, then free generators, as chain vectors.
    pub generators: Option<Vec<Vec<BigInt>>>,
}

impl HomologyGroup {
    pub fn new(betti: usize, torsion: Vec<BigInt>) -> Self {
        HomologyGroup {
            betti,
            torsion,
            generators: None,
        }
    }

    pub fn free(betti: usize) -> Self {
        Self::new(betti, Vec::new())
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Compares the abstract groups; generators are ignored.
    pub fn is_isomorphic(&self, other: &HomologyGroup) -> bool {
        self.betti == other.betti && self.torsion == other.torsion
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Homology in one degree together with the data needed to write any cycle
/// in terms of the chosen generators.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: i64,
    pub group: HomologyGroup,
    /// Rows of `V^{-1}` of the outgoing boundary that give kernel coordinates.
    kernel_coords: IntMatrix,
    relations: SmithDecomposition,
}

impl HomologyBasis {
    /// Order of each generator: the torsion coefficient, or zero for free ones.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        let mut orders = self.group.torsion.clone();
        orders.extend(std::iter::repeat_n(BigInt::zero(), self.group.betti));
        orders
    }

    /// Coordinates of a cycle in the generator basis; torsion coordinates are
    /// reduced to `0..t`.
    pub fn coordinates(&self, cycle: &[BigInt]) -> Vec<BigInt> {
        let y = self.kernel_coords.mul_vec(cycle);
        let w = self.relations.u.mul_vec(&y);
        let rank = self.relations.rank();
        let mut out = Vec::with_capacity(self.group.torsion.len() + self.group.betti);
        for (i, factor) in self.relations.invariant_factors.iter().enumerate() {
            if !factor.is_one() {
                out.push(w[i].mod_floor(factor));
            }
        }
        out.extend(w[rank..].iter().cloned());
        out
    }
}

/// Homology of `c` in `degree`, with generator cycles.
pub fn homology_basis(c: &ChainComplex, degree: i64) -> Result<HomologyBasis> {
    c.require_valid()?;
    let n = c.rank(degree);
    let out = snf(&c.boundary(degree));
    let rank_out = out.rank();
    let kernel_dim = n - rank_out;
    let kernel_coords = out.v_inv.row_range(rank_out, kernel_dim);
    let kernel_basis = out.v.column_range(rank_out, kernel_dim);

    let incoming = c.boundary(degree + 1);
    let relation_matrix = kernel_coords.checked_mul(&incoming)?;
    let relations = snf(&relation_matrix);
    let rank_in = relations.rank();

    let mut torsion = Vec::new();
    let mut generators = Vec::new();
    for (i, factor) in relations.invariant_factors.iter().enumerate() {
        if !factor.is_one() {
            torsion.push(factor.clone());
            generators.push(kernel_basis.mul_vec(&relations.u_inv.column(i)));
        }
    }
    for i in rank_in..kernel_dim {
        generators.push(kernel_basis.mul_vec(&relations.u_inv.column(i)));
    }
    Ok(HomologyBasis {
        degree,
        group: HomologyGroup {
            betti: kernel_dim - rank_in,
            torsion,
            generators: Some(generators),
        },
        kernel_coords,
        relations,
    })
}

pub fn homology_at(c: &ChainComplex, degree: i64) -> Result<HomologyGroup> {
    Ok(homology_basis(c, degree)?.group)
}

/// Homology in every stored degree, lowest first.
pub fn homology_all(c: &ChainComplex) -> Result<Vec<(i64, HomologyGroup)>> {
    c.degrees()
        .map(|k| Ok((k, homology_at(c, k)?)))
        .collect()
}

/// A degree-preserving (or shifted) homomorphism between two chain complexes.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    components: BTreeMap<i64, IntMatrix>,
    pub degree_shift: i64,
}

impl ChainMap {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: BTreeMap<i64, IntMatrix>,
    ) -> Self {
        ChainMap {
            source,
            target,
            components,
            degree_shift: 0,
        }
    }

    pub fn with_shift(mut self, shift: i64) -> Self {
        self.degree_shift = shift;
        self
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let components = c
            .degrees()
            .map(|k| (k, IntMatrix::identity(c.rank(k))))
            .collect();
        Self::new(c.clone(), c.clone(), components)
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        Self::new(source.clone(), target.clone(), BTreeMap::new())
    }

    /// Component `C_k -> D_{k + shift}`; zero where none was given.
    pub fn component(&self, degree: i64) -> IntMatrix {
        self.components.get(&degree).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(
                self.target.rank(degree + self.degree_shift),
                self.source.rank(degree),
            )
        })
    }

    fn degree_span(&self) -> (i64, i64) {
        joint_range(&self.source, &self.target)
    }

    /// `d_target * f_k - f_{k-1} * d_source` for every degree where it is
    /// nonzero. Shape errors are reported as `Err`.
    pub fn residuals(&self) -> Result<Vec<(i64, IntMatrix)>> {
        for (&k, m) in &self.components {
            let expected = (self.target.rank(k + self.degree_shift), self.source.rank(k));
            if m.shape() != expected {
                return Err(Error::NotChainMap(format!(
                    "component in degree {k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        let (lo, hi) = self.degree_span();
        let mut out = Vec::new();
        for k in lo..=hi + 1 {
            let left = self
                .target
                .boundary(k + self.degree_shift)
                .checked_mul(&self.component(k))?;
            let right = self
                .component(k - 1)
                .checked_mul(&self.source.boundary(k))?;
            let residual = &left - &right;
            if !residual.is_zero() {
                out.push((k, residual));
            }
        }
        Ok(out)
    }

    pub fn is_chain_map(&self) -> Result<bool> {
        Ok(self.residuals()?.is_empty())
    }

    fn require_chain_map(&self) -> Result<()> {
        self.source.require_valid()?;
        self.target.require_valid()?;
        match self.residuals()?.first() {
            None => Ok(()),
            Some((k, _)) => Err(Error::NotChainMap(format!(
                "map does not commute with boundaries in degree {k}"
            ))),
        }
    }
}

/// Matrix of `f_*` on `H_degree` in the generator bases chosen by
/// [`homology_basis`]. Rows are target generators, columns source generators.
pub fn induced_map_on_homology(f: &ChainMap, degree: i64) -> Result<IntMatrix> {
    f.require_chain_map()?;
    let src = homology_basis(&f.source, degree)?;
    let tgt = homology_basis(&f.target, degree + f.degree_shift)?;
    induced_matrix(f, degree, &src, &tgt)
}

fn induced_matrix(
    f: &ChainMap,
    degree: i64,
    src: &HomologyBasis,
    tgt: &HomologyBasis,
) -> Result<IntMatrix> {
    let component = f.component(degree);
    let generators = src.group.generators.as_deref().unwrap_or_default();
    let columns: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| tgt.coordinates(&component.mul_vec(g)))
        .collect();
    let rows = tgt.group.torsion.len() + tgt.group.betti;
    IntMatrix::from_columns(rows, &columns)
}

/// Decides whether `f_*` is an isomorphism on `H_degree`, torsion included.
pub fn induced_is_isomorphism(f: &ChainMap, degree: i64) -> Result<bool> {
    f.require_chain_map()?;
    let src = homology_basis(&f.source, degree)?;
    let tgt = homology_basis(&f.target, degree + f.degree_shift)?;
    if !src.group.is_isomorphic(&tgt.group) {
        return Ok(false);
    }
    let m = induced_matrix(f, degree, &src, &tgt)?;
    let src_orders = src.generator_orders();
    let tgt_orders = tgt.generator_orders();
    let gt = tgt_orders.len();
    let gs = src_orders.len();
    let mut tgt_relations = IntMatrix::zeros(gt, gt);
    for (i, t) in tgt_orders.iter().enumerate() {
        tgt_relations.set(i, i, t.clone());
    }

    // onto: the columns of [M | relations] generate Z^gt
    let onto = snf(&m.hstack(&tgt_relations)?);
    if onto.rank() != gt || onto.invariant_factors.iter().any(|d| !d.is_one()) {
        return Ok(false);
    }

    // one-to-one: anything sent into the relation lattice is itself a relation
    let kernel = crate::exactalg::kernel_basis(&m.hstack(&(-&tgt_relations))?);
    for c in 0..kernel.cols() {
        for (i, order) in src_orders.iter().enumerate().take(gs) {
            let x = kernel.get(i, c);
            let trivial = if order.is_zero() {
                x.is_zero()
            } else {
                x.is_multiple_of(order)
            };
            if !trivial {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Mapping cone with `cone_k = source_{k-1} + target_k` and differential
/// `(a, b) -> (-d a, f a + d b)`.
pub fn mapping_cone(f: &ChainMap) -> Result<ChainComplex> {
    if f.degree_shift != 0 {
        return Err(Error::NotChainMap(
            "mapping cone needs a degree-preserving map".into(),
        ));
    }
    f.require_chain_map()?;
    let (src, tgt) = (&f.source, &f.target);
    let lo = match (src.ranks.is_empty(), tgt.ranks.is_empty()) {
        (true, true) => return Ok(ChainComplex::zero_differentials(0, Vec::new())),
        (true, false) => tgt.min_degree,
        (false, true) => src.min_degree + 1,
        (false, false) => (src.min_degree + 1).min(tgt.min_degree),
    };
    let hi = (src.max_degree() + 1).max(tgt.max_degree());
    let ranks: Vec<usize> = (lo..=hi)
        .map(|k| src.rank(k - 1) + tgt.rank(k))
        .collect();
    let mut boundaries = Vec::new();
    for k in lo + 1..=hi {
        let (a_in, b_in) = (src.rank(k - 1), tgt.rank(k));
        let (a_out, b_out) = (src.rank(k - 2), tgt.rank(k - 1));
        let mut d = IntMatrix::zeros(a_out + b_out, a_in + b_in);
        d.set_block(0, 0, &-&src.boundary(k - 1));
        d.set_block(a_out, 0, &f.component(k - 1));
        d.set_block(a_out, a_in, &tgt.boundary(k));
        boundaries.push(d);
    }
    ChainComplex::new(lo, ranks, boundaries)
}

/// `true` iff the mapping cone is acyclic in every degree.
pub fn quasi_iso(f: &ChainMap) -> Result<bool> {
    let cone = mapping_cone(f)?;
    for k in cone.degrees() {
        if !homology_at(&cone, k)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Like [`quasi_iso`], but only inspects cone homology up to `max_degree`.
/// Used when the target is a truncation whose top degrees are not faithful.
pub fn quasi_iso_through(f: &ChainMap, max_degree: i64) -> Result<bool> {
    let cone = mapping_cone(f)?;
    for k in cone.min_degree()..=max_degree.min(cone.max_degree()) {
        if !homology_at(&cone, k)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int_vec;

    fn point() -> ChainComplex {
        ChainComplex::zero_differentials(0, vec![1])
    }

    // two vertices v0, v1 and two edges e1: v0 -> v1, e2: v1 -> v0
    fn circle() -> ChainComplex {
        let d1 = IntMatrix::from_rows(&[vec![-1, 1], vec![1, -1]]);
        ChainComplex::new(0, vec![2, 2], vec![d1]).unwrap()
    }

    fn times_two() -> ChainComplex {
        ChainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(point().validate().is_valid());
        assert!(times_two().validate().is_valid());

        let one = IntMatrix::from_rows(&[vec![1]]);
        let bad = ChainComplex::new(0, vec![1, 1, 1], vec![one.clone(), one]).unwrap();
        let report = bad.validate();
        assert_eq!(report.issues.len(), 1);
        assert!(matches!(
            report.issues[0],
            ComplexIssue::SquareNonZero { degree: 2, .. }
        ));
    }

    #[test]
    fn validate_reports_shapes() {
        let c = ChainComplex::new(0, vec![2, 1], vec![IntMatrix::zeros(1, 1)]).unwrap();
        assert!(matches!(
            c.validate().issues[0],
            ComplexIssue::Shape { degree: 1, expected: (2, 1), found: (1, 1) }
        ));
        assert!(homology_at(&c, 0).is_err());
    }

    #[test]
    fn homology_examples() {
        let c = circle();
        assert!(homology_at(&c, 0).unwrap().is_isomorphic(&HomologyGroup::free(1)));
        assert!(homology_at(&c, 1).unwrap().is_isomorphic(&HomologyGroup::free(1)));

        let t = times_two();
        let h0 = homology_at(&t, 0).unwrap();
        assert!(h0.is_isomorphic(&HomologyGroup::new(0, int_vec(&[2]))));
        assert!(homology_at(&t, 1).unwrap().is_trivial());

        let p = point();
        assert!(homology_at(&p, 0).unwrap().is_isomorphic(&HomologyGroup::free(1)));
        assert!(homology_at(&p, 1).unwrap().is_trivial());
        assert!(homology_at(&p, -3).unwrap().is_trivial());
    }

    #[test]
    fn generators_are_cycles() {
        let c = circle();
        let h1 = homology_basis(&c, 1).unwrap();
        let g = &h1.group.generators.as_ref().unwrap()[0];
        assert!(c.boundary(1).mul_vec(g).iter().all(Zero::is_zero));
        assert_eq!(h1.coordinates(g), int_vec(&[1]));
    }

    #[test]
    fn display_format() {
        assert_eq!(HomologyGroup::free(0).to_string(), "0");
        assert_eq!(HomologyGroup::free(1).to_string(), "Z");
        assert_eq!(
            HomologyGroup::new(2, int_vec(&[2, 6])).to_string(),
            "Z^2 ⊕ Z/2 ⊕ Z/6"
        );
    }

    #[test]
    fn induced_maps() {
        let c = circle();
        let id = ChainMap::identity(&c);
        assert_eq!(induced_map_on_homology(&id, 1).unwrap(), IntMatrix::identity(1));
        assert_eq!(
            induced_map_on_homology(&ChainMap::zero(&c, &c), 1).unwrap(),
            IntMatrix::zeros(1, 1)
        );

        // e1 -> 2 e1 + e2, e2 -> e2: the cycle e1 + e2 goes to 2(e1 + e2)
        let mut comps = BTreeMap::new();
        comps.insert(0, IntMatrix::identity(2));
        comps.insert(1, IntMatrix::from_rows(&[vec![2, 0], vec![1, 1]]));
        let double = ChainMap::new(c.clone(), c.clone(), comps);
        assert!(double.is_chain_map().unwrap());
        assert_eq!(
            induced_map_on_homology(&double, 1).unwrap(),
            IntMatrix::from_rows(&[vec![2]])
        );
        assert!(!induced_is_isomorphism(&double, 1).unwrap());
        assert!(induced_is_isomorphism(&double, 0).unwrap());
        assert!(!quasi_iso(&double).unwrap());
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = circle();
        let mut comps = BTreeMap::new();
        comps.insert(0, IntMatrix::from_rows(&[vec![1, 0], vec![0, 0]]));
        comps.insert(1, IntMatrix::identity(2));
        let f = ChainMap::new(c.clone(), c, comps);
        assert!(matches!(
            induced_map_on_homology(&f, 1),
            Err(Error::NotChainMap(_))
        ));
        assert!(mapping_cone(&f).is_err());
    }

    #[test]
    fn cone_examples() {
        let c = circle();
        assert!(quasi_iso(&ChainMap::identity(&c)).unwrap());

        // Z --id--> Z is acyclic, so the zero map from it to itself is a quasi-iso
        let acyclic =
            ChainComplex::new(0, vec![1, 1], vec![IntMatrix::identity(1)]).unwrap();
        assert!(quasi_iso(&ChainMap::zero(&acyclic, &acyclic)).unwrap());

        // a point into the circle misses H_1
        let mut comps = BTreeMap::new();
        comps.insert(0, IntMatrix::from_rows(&[vec![1], vec![0]]));
        let incl = ChainMap::new(point(), c, comps);
        assert!(incl.is_chain_map().unwrap());
        assert!(!quasi_iso(&incl).unwrap());
        assert!(induced_is_isomorphism(&incl, 0).unwrap());
        assert!(!induced_is_isomorphism(&incl, 1).unwrap());
    }

    #[test]
    fn torsion_isomorphism_detection() {
        // Z --4--> Z and multiplication by 3 on Z/4 (a unit) vs by 2 (not)
        let c = ChainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![4]])]).unwrap();
        for (factor, expected) in [(3, true), (2, false), (1, true)] {
            let mut comps = BTreeMap::new();
            comps.insert(0, IntMatrix::from_rows(&[vec![factor]]));
            comps.insert(1, IntMatrix::from_rows(&[vec![factor]]));
            let f = ChainMap::new(c.clone(), c.clone(), comps);
            assert_eq!(induced_is_isomorphism(&f, 0).unwrap(), expected);
            assert_eq!(quasi_iso(&f).unwrap(), expected);
        }
    }

    #[test]
    fn direct_sum_adds_homology() {
        let s = circle().direct_sum(&times_two());
        assert!(s.validate().is_valid());
        assert!(homology_at(&s, 0)
            .unwrap()
            .is_isomorphic(&HomologyGroup::new(1, int_vec(&[2]))));
    }
}
