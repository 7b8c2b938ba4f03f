//! Bigraded multicomplexes: rows `C_p(B_i)` indexed by critical index `i`,
//! maps `∂_[j]` of bidegree `(j-1, -j)`, and their totalization.
//!
//! Columns run over `0..=column_cap`. The total complex is the brutal
//! truncation to total degrees `0..=column_cap`, so its homology is reported
//! for degrees below the cap only.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chain::{homology_at, ChainComplex, HomologyGroup};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;

/// Smallest even integer `>= dim + 2`.
pub fn default_column_cap(dim: usize) -> usize {
    (dim + 3) & !1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multicomplex {
    dim: usize,
    column_cap: usize,
    rows: Vec<Option<ChainComplex>>,
    maps: BTreeMap<(usize, usize, usize), IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub j: usize,
    pub p: usize,
    pub i: usize,
    pub residual: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralFailure {
    Row { i: usize, detail: String },
    Shape {
        j: usize,
        p: usize,
        i: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
}

impl fmt::Display for StructuralFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuralFailure::Row { i, detail } => write!(f, "row {i}: {detail}"),
            StructuralFailure::Shape {
                j,
                p,
                i,
                expected,
                found,
            } => write!(
                f,
                "map j={j} at (p={p}, i={i}) has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub identity_failures: Vec<IdentityFailure>,
    pub structural_failures: Vec<StructuralFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.identity_failures.is_empty() && self.structural_failures.is_empty()
    }

    pub fn first_failure_location(&self) -> String {
        if let Some(f) = self.identity_failures.first() {
            format!("j={}, p={}, i={}", f.j, f.p, f.i)
        } else if let Some(s) = self.structural_failures.first() {
            s.to_string()
        } else {
            "none".into()
        }
    }
}

fn sign_matrix(m: IntMatrix, negative: bool) -> IntMatrix {
    if negative {
        -&m
    } else {
        m
    }
}

impl Multicomplex {
    /// `rows[i]` is the raw row complex of `B_i` (no sign twist), or `None`
    /// when `B_i` is empty. Rows start in degree 0 and stop at or before
    /// the column cap.
    pub fn new(dim: usize, column_cap: usize, rows: Vec<Option<ChainComplex>>) -> Result<Self> {
        if rows.len() != dim + 1 {
            return Err(Error::Dimension(format!(
                "{} rows for ambient dimension {dim}",
                rows.len()
            )));
        }
        if !column_cap.is_multiple_of(2) || column_cap < dim + 2 {
            return Err(Error::Dimension(format!(
                "column cap {column_cap} must be even and at least {}",
                dim + 2
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if let Some(r) = row {
                if r.min_degree() != 0 || r.max_degree() > column_cap as i64 {
                    return Err(Error::Dimension(format!(
                        "row {i} spans degrees {}..={}, outside 0..={column_cap}",
                        r.min_degree(),
                        r.max_degree()
                    )));
                }
            }
        }
        Ok(Multicomplex {
            dim,
            column_cap,
            rows,
            maps: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column_cap(&self) -> usize {
        self.column_cap
    }

    pub fn row(&self, i: usize) -> Option<&ChainComplex> {
        self.rows.get(i).and_then(Option::as_ref)
    }

    pub fn row_present(&self, i: usize) -> bool {
        self.row(i).is_some()
    }

    /// Rank of `C_p(B_i)`; zero outside the stored range.
    pub fn rank(&self, p: i64, i: i64) -> usize {
        if p < 0 || i < 0 || p > self.column_cap as i64 {
            return 0;
        }
        self.row(i as usize).map_or(0, |r| r.rank(p))
    }

    pub fn labels(&self, p: usize, i: usize) -> Vec<String> {
        self.row(i).map_or_else(Vec::new, |r| r.labels(p as i64))
    }

    fn expected_shape(&self, j: usize, p: usize, i: usize) -> (usize, usize) {
        (
            self.rank(p as i64 + j as i64 - 1, i as i64 - j as i64),
            self.rank(p as i64, i as i64),
        )
    }

    /// `∂_[j]` at source bidegree `(p, i)`. For `j = 0` this is the row
    /// boundary times `(-1)^(p+i)`.
    pub fn map(&self, j: usize, p: usize, i: usize) -> IntMatrix {
        let (rows, cols) = self.expected_shape(j, p, i);
        if j == 0 {
            if p == 0 || cols == 0 {
                return IntMatrix::zeros(rows, cols);
            }
            let raw = self.row(i).expect("nonzero rank").boundary(p as i64);
            return sign_matrix(raw, (p + i) % 2 == 1);
        }
        self.maps
            .get(&(j, p, i))
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(rows, cols))
    }

    /// Stores `∂_[j]` for `j >= 1` at source bidegree `(p, i)`.
    pub fn set_map(&mut self, j: usize, p: usize, i: usize, m: IntMatrix) -> Result<()> {
        if j == 0 {
            return Err(Error::Dimension(
                "∂_[0] comes from the row complexes".into(),
            ));
        }
        if j > self.dim {
            return Err(Error::Dimension(format!(
                "j = {j} exceeds ambient dimension {}",
                self.dim
            )));
        }
        let expected = self.expected_shape(j, p, i);
        if m.shape() != expected {
            return Err(Error::Dimension(format!(
                "map j={j} at (p={p}, i={i}) has shape {:?}, expected {expected:?}",
                m.shape()
            )));
        }
        if m.is_zero() {
            self.maps.remove(&(j, p, i));
        } else {
            self.maps.insert((j, p, i), m);
        }
        Ok(())
    }

    /// Nonzero stored maps with `j >= 1`.
    pub fn stored_maps(&self) -> impl Iterator<Item = (&(usize, usize, usize), &IntMatrix)> {
        self.maps.iter()
    }

    /// Same data with a different (even) column cap. Rows are supplied
    /// again because fat rows depend on the cap.
    pub fn with_rows(&self, column_cap: usize, rows: Vec<Option<ChainComplex>>) -> Result<Self> {
        let mut out = Multicomplex::new(self.dim, column_cap, rows)?;
        for (&(j, p, i), m) in &self.maps {
            if p <= column_cap && p + j - 1 <= column_cap {
                out.set_map(j, p, i, m.clone())?;
            }
        }
        Ok(out)
    }
}

/// Checks row complexes, map shapes, and the anticommutation identity
/// `Σ_q ∂_[q] ∂_[j-q] = 0` at every `(j, p, i)` whose intermediate columns
/// stay within the cap.
pub fn validate_multicomplex(mc: &Multicomplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    for i in 0..=mc.dim {
        if let Some(row) = mc.row(i) {
            let rr = row.validate();
            if !rr.is_valid() {
                report.structural_failures.push(StructuralFailure::Row {
                    i,
                    detail: format!("{rr:?}"),
                });
            }
        }
    }
    for (&(j, p, i), m) in &mc.maps {
        let expected = mc.expected_shape(j, p, i);
        if m.shape() != expected {
            report.structural_failures.push(StructuralFailure::Shape {
                j,
                p,
                i,
                expected,
                found: m.shape(),
            });
        }
    }
    if !report.structural_failures.is_empty() {
        return report;
    }

    let cap = mc.column_cap;
    for j in 0..=mc.dim {
        for i in 0..=mc.dim {
            for p in 0..=cap {
                if mc.rank(p as i64, i as i64) == 0 || (j > 0 && p + j - 1 > cap) {
                    continue;
                }
                if j > i {
                    continue;
                }
                let target = mc.rank(p as i64 + j as i64 - 2, i as i64 - j as i64);
                let mut sum = IntMatrix::zeros(target, mc.rank(p as i64, i as i64));
                for q in 0..=j {
                    let first = j - q;
                    if first > i || (first == 0 && p == 0) {
                        continue;
                    }
                    let mid_p = p + first - 1;
                    let mid_i = i - first;
                    if q > mid_i || (q == 0 && mid_p == 0) {
                        continue;
                    }
                    let term = &mc.map(q, mid_p, mid_i) * &mc.map(first, p, i);
                    sum = &sum + &term;
                }
                if !sum.is_zero() {
                    report.identity_failures.push(IdentityFailure {
                        j,
                        p,
                        i,
                        residual: sum,
                    });
                }
            }
        }
    }
    report
}

/// The total complex with the block layout used to build it.
#[derive(Clone, Debug)]
pub struct TotalComplexView {
    pub complex: ChainComplex,
    /// `(p, i) -> offset` of the `C_p(B_i)` block inside degree `p + i`.
    pub offsets: BTreeMap<(usize, usize), usize>,
}

impl TotalComplexView {
    /// Places a vector of `C_p(B_i)` into degree `p + i`.
    pub fn embed(&self, p: usize, i: usize, v: &[BigInt]) -> Vec<BigInt> {
        let k = (p + i) as i64;
        let mut out = vec![BigInt::zero(); self.complex.rank(k)];
        let off = self.offsets[&(p, i)];
        out[off..off + v.len()].clone_from_slice(v);
        out
    }

    /// The `C_p(B_i)` block of a degree-`p + i` vector.
    pub fn block<'a>(&self, mc: &Multicomplex, p: usize, i: usize, v: &'a [BigInt]) -> &'a [BigInt] {
        let off = self.offsets[&(p, i)];
        &v[off..off + mc.rank(p as i64, i as i64)]
    }
}

fn assemble(mc: &Multicomplex) -> TotalComplexView {
    let cap = mc.column_cap;
    let mut offsets = BTreeMap::new();
    let mut ranks = Vec::with_capacity(cap + 1);
    let mut labels = Vec::with_capacity(cap + 1);
    for k in 0..=cap {
        let mut total = 0;
        let mut lab = Vec::new();
        for i in 0..=mc.dim.min(k) {
            let p = k - i;
            offsets.insert((p, i), total);
            total += mc.rank(p as i64, i as i64);
            lab.extend(mc.labels(p, i).into_iter().map(|l| format!("B{i}:{l}")));
        }
        ranks.push(total);
        labels.push(lab);
    }
    let mut boundaries = Vec::with_capacity(cap);
    for k in 1..=cap {
        let mut d = IntMatrix::zeros(ranks[k - 1], ranks[k]);
        for i in 0..=mc.dim.min(k) {
            let p = k - i;
            if mc.rank(p as i64, i as i64) == 0 {
                continue;
            }
            for j in 0..=i {
                if j == 0 && p == 0 {
                    continue;
                }
                let (tp, ti) = (p + j - 1, i - j);
                let block = mc.map(j, p, i);
                if block.rows() > 0 {
                    d.set_block(offsets[&(tp, ti)], offsets[&(p, i)], &block);
                }
            }
        }
        boundaries.push(d);
    }
    let mut complex = ChainComplex::new(0, ranks, boundaries).expect("block shapes are consistent");
    for (k, lab) in labels.into_iter().enumerate() {
        if lab.len() == complex.rank(k as i64) {
            complex = complex.with_labels(k as i64, lab).expect("label count matches");
        }
    }
    TotalComplexView { complex, offsets }
}

/// Assembles `CB_k = ⊕_i C_{k-i}(B_i)` for `k = 0..=column_cap`.
pub fn totalize(mc: &Multicomplex) -> Result<TotalComplexView> {
    let report = validate_multicomplex(mc);
    if !report.is_valid() {
        return Err(Error::InvalidMulticomplex(Box::new(report)));
    }
    Ok(assemble(mc))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyEntry {
    pub degree: usize,
    pub group: HomologyGroup,
    /// Degrees above the ambient dimension depend on the model, not only on `M`.
    pub truncation_sensitive: bool,
}

/// `HB_k` for `k = 0..column_cap`.
pub fn homology_table(mc: &Multicomplex) -> Result<Vec<HomologyEntry>> {
    let view = totalize(mc)?;
    (0..mc.column_cap)
        .map(|k| {
            Ok(HomologyEntry {
                degree: k,
                group: homology_at(&view.complex, k as i64)?,
                truncation_sensitive: k > mc.dim,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{chain_complex_of, SimplicialComplexData};

    fn point_row(cap: usize) -> ChainComplex {
        let ranks = vec![1; cap + 1];
        let boundaries = (1..=cap)
            .map(|k| {
                if k % 2 == 0 {
                    IntMatrix::identity(1)
                } else {
                    IntMatrix::zeros(1, 1)
                }
            })
            .collect();
        ChainComplex::new(0, ranks, boundaries).unwrap()
    }

    #[test]
    fn default_cap() {
        assert_eq!(default_column_cap(0), 2);
        assert_eq!(default_column_cap(1), 4);
        assert_eq!(default_column_cap(2), 4);
        assert_eq!(default_column_cap(3), 6);
    }

    #[test]
    fn single_row_matches_row_homology() {
        let s2 = chain_complex_of(&SimplicialComplexData::simplex_boundary(3));
        let mc = Multicomplex::new(2, 4, vec![Some(s2.clone()), None, None]).unwrap();
        assert!(validate_multicomplex(&mc).is_valid());
        let view = totalize(&mc).unwrap();
        for k in 1..=2i64 {
            let sign = if k % 2 == 1 { -1 } else { 1 };
            assert_eq!(view.complex.boundary(k), s2.boundary(k).scale(&BigInt::from(sign)));
        }
        let table = homology_table(&mc).unwrap();
        let betti: Vec<usize> = table.iter().map(|e| e.group.betti).collect();
        assert_eq!(betti, vec![1, 0, 1, 0]);
        assert!(table[3].truncation_sensitive);
    }

    #[test]
    fn empty_rows_contribute_nothing() {
        let mc = Multicomplex::new(1, 4, vec![None, None]).unwrap();
        let view = totalize(&mc).unwrap();
        assert_eq!(view.complex.total_rank(), 0);
        assert!(homology_table(&mc).unwrap().iter().all(|e| e.group.is_trivial()));
    }

    #[test]
    fn two_point_rows_with_one_map() {
        // rows 0 and 1 are single fat points; ∂_[1] at p = 0 is multiplication by 2
        let cap = 4;
        let mut mc = Multicomplex::new(1, cap, vec![Some(point_row(cap)), Some(point_row(cap))]).unwrap();
        mc.set_map(1, 0, 1, IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(validate_multicomplex(&mc).is_valid());
        let view = totalize(&mc).unwrap();
        // degree 1 holds (1,0) then (0,1)
        assert_eq!(view.complex.boundary(1), IntMatrix::from_rows(&[vec![0, 2]]));
        assert_eq!(
            view.complex.boundary(2),
            IntMatrix::from_rows(&[vec![1, 0], vec![0, 0]])
        );
        let table = homology_table(&mc).unwrap();
        assert!(table[0].group.is_isomorphic(&HomologyGroup::new(0, vec![BigInt::from(2)])));
        assert!(table[1].group.is_trivial());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let mut mc = Multicomplex::new(1, 4, vec![Some(point_row(4)), Some(point_row(4))]).unwrap();
        assert!(Multicomplex::new(1, 2, vec![None, None]).is_err());
        assert!(mc.set_map(1, 0, 1, IntMatrix::zeros(2, 1)).is_err());
        assert!(mc.set_map(0, 1, 1, IntMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn identity_failure_located() {
        // ∂_[1]∂_[1] != 0 across three single-point rows
        let cap = 4;
        let rows = vec![Some(point_row(cap)), Some(point_row(cap)), Some(point_row(cap))];
        let mut mc = Multicomplex::new(2, cap, rows).unwrap();
        mc.set_map(1, 0, 1, IntMatrix::from_rows(&[vec![1]])).unwrap();
        mc.set_map(1, 0, 2, IntMatrix::from_rows(&[vec![1]])).unwrap();
        let report = validate_multicomplex(&mc);
        assert_eq!(report.identity_failures.len(), 1);
        let f = &report.identity_failures[0];
        assert_eq!((f.j, f.p, f.i), (2, 0, 2));
        assert_eq!(f.residual, IntMatrix::from_rows(&[vec![1]]));
        assert!(matches!(totalize(&mc), Err(Error::InvalidMulticomplex(_))));
    }
}
