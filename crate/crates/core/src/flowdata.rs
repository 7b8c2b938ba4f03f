//! Finite flow presentations and the builder that turns them into a
//! multicomplex.
//!
//! Supported moduli components:
//! - point source (`b_i = 0`): the generator at column 0 goes to
//!   `ε · ev_+(fundamental cycle of the domain)`; higher columns go to 0.
//! - positive-dimensional source with `ev_-` a covering (so `j = 1`):
//!   `∂_[1] = Σ ε · ev_+ ∘ ev_-^*` in every column.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::multicomplex::{default_column_cap, validate_multicomplex, Multicomplex};
use crate::simplicial::{chain_complex_of, fundamental_cycle, pushforward, SimplicialComplexData, SimplicialMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CritKind {
    Points,
    Simplicial,
}

/// One critical submanifold `B_i`, as finitely many points or a closed
/// oriented pseudomanifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CritModel {
    pub index: usize,
    pub kind: CritKind,
    pub complex: SimplicialComplexData,
    /// One name per vertex (per point for the points kind).
    pub names: Vec<String>,
}

impl CritModel {
    pub fn points(index: usize, names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidFlowData(format!(
                "critical set of index {index} has no points"
            )));
        }
        check_unique(&names, index)?;
        Ok(CritModel {
            index,
            kind: CritKind::Points,
            complex: SimplicialComplexData::points(names.len()),
            names,
        })
    }

    /// Vertex names default to `v0, v1, ...`.
    pub fn simplicial(
        index: usize,
        complex: SimplicialComplexData,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let names = names.unwrap_or_else(|| {
            (0..complex.vertex_count()).map(|v| format!("v{v}")).collect()
        });
        if names.len() != complex.vertex_count() {
            return Err(Error::InvalidFlowData(format!(
                "index {index}: {} names for {} vertices",
                names.len(),
                complex.vertex_count()
            )));
        }
        check_unique(&names, index)?;
        match complex.top_dim() {
            Some(d) if d > 0 => {}
            _ => {
                return Err(Error::InvalidFlowData(format!(
                    "index {index}: a simplicial critical set needs positive dimension; use points"
                )))
            }
        }
        check_closed_oriented(&complex).map_err(|e| {
            Error::InvalidFlowData(format!("index {index}: {e}"))
        })?;
        Ok(CritModel {
            index,
            kind: CritKind::Simplicial,
            complex,
            names,
        })
    }

    /// `b_i`.
    pub fn dim(&self) -> usize {
        self.complex.top_dim().unwrap_or(0)
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn check_unique(names: &[String], index: usize) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::InvalidFlowData(format!(
                "index {index}: name {n:?} used twice"
            )));
        }
    }
    Ok(())
}

/// Every connected piece must be a closed oriented pseudomanifold of the top dimension.
fn check_closed_oriented(k: &SimplicialComplexData) -> Result<()> {
    let comps = k.vertex_components();
    let mut roots: Vec<usize> = comps.clone();
    roots.sort_unstable();
    roots.dedup();
    for root in roots {
        let keep: Vec<usize> = (0..k.vertex_count()).filter(|&v| comps[v] == root).collect();
        let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(n, &v)| (v, n)).collect();
        let facets: Vec<Vec<usize>> = k
            .facets()
            .into_iter()
            .filter(|f| comps[f[0]] == root)
            .map(|f| f.iter().map(|v| renumber[v]).collect())
            .collect();
        let piece = SimplicialComplexData::from_facets(keep.len(), &facets)?;
        if piece.top_dim() != k.top_dim() {
            return Err(Error::NoFundamentalCycle(format!(
                "component through vertex {root} has lower dimension"
            )));
        }
        let z = fundamental_cycle(&piece)?;
        if !z.is_closed() {
            return Err(Error::NoFundamentalCycle(format!(
                "component through vertex {root} has boundary"
            )));
        }
    }
    Ok(())
}

/// One component of a compactified moduli space `M̄(B_from, B_to)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliComponentModel {
    pub from: usize,
    pub to: usize,
    pub domain: SimplicialComplexData,
    /// Vertex images in `B_from`.
    pub ev_minus: Vec<usize>,
    /// Vertex images in `B_to`.
    pub ev_plus: Vec<usize>,
    /// Orientation sign, `1` or `-1`.
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowPresentation {
    pub dim: usize,
    pub critical: Vec<CritModel>,
    pub moduli: Vec<ModuliComponentModel>,
    pub column_cap: Option<usize>,
}

impl FlowPresentation {
    pub fn crit(&self, index: usize) -> Option<&CritModel> {
        self.critical.iter().find(|c| c.index == index)
    }

    pub fn effective_cap(&self) -> usize {
        self.column_cap.unwrap_or_else(|| default_column_cap(self.dim))
    }

    /// The same presentation with an explicit column cap.
    pub fn with_cap(&self, cap: usize) -> Self {
        FlowPresentation {
            column_cap: Some(cap),
            ..self.clone()
        }
    }

    fn check(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.critical {
            if c.index > self.dim {
                return Err(Error::InvalidFlowData(format!(
                    "critical index {} exceeds dimension {}",
                    c.index, self.dim
                )));
            }
            if !seen.insert(c.index) {
                return Err(Error::InvalidFlowData(format!(
                    "two critical models with index {}",
                    c.index
                )));
            }
            if c.dim() + c.index > self.dim {
                return Err(Error::InvalidFlowData(format!(
                    "critical set of index {} and dimension {} does not fit in dimension {}",
                    c.index,
                    c.dim(),
                    self.dim
                )));
            }
        }
        for (n, m) in self.moduli.iter().enumerate() {
            if m.from <= m.to {
                return Err(Error::InvalidFlowData(format!(
                    "moduli component {n}: index must drop, got {} -> {}",
                    m.from, m.to
                )));
            }
            if m.sign != 1 && m.sign != -1 {
                return Err(Error::InvalidFlowData(format!(
                    "moduli component {n}: sign {} is not 1 or -1",
                    m.sign
                )));
            }
            for idx in [m.from, m.to] {
                if self.crit(idx).is_none() {
                    return Err(Error::InvalidFlowData(format!(
                        "moduli component {n}: no critical set of index {idx}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn fat_row(names: &[String], cap: usize) -> ChainComplex {
    let n = names.len();
    let boundaries = (1..=cap)
        .map(|k| {
            if k % 2 == 0 {
                IntMatrix::identity(n)
            } else {
                IntMatrix::zeros(n, n)
            }
        })
        .collect();
    let mut c = ChainComplex::new(0, vec![n; cap + 1], boundaries).expect("square blocks");
    for k in 0..=cap {
        let labels = names
            .iter()
            .map(|s| if k == 0 { s.clone() } else { format!("{s}^{k}") })
            .collect();
        c = c.with_labels(k as i64, labels).expect("one label per point");
    }
    c
}

/// Chain complex of a point through degree `cap`: rank 1 everywhere,
/// identity boundaries at even positive degrees and zero at odd ones.
pub fn fat_point_row(cap: usize) -> Result<ChainComplex> {
    if cap < 2 || !cap.is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "fat point rows need an even cap of at least 2, got {cap}"
        )));
    }
    Ok(fat_row(&["pt".to_string()], cap))
}

fn row_complex(c: &CritModel, cap: usize) -> ChainComplex {
    match c.kind {
        CritKind::Points => fat_row(&c.names, cap),
        CritKind::Simplicial => {
            let mut row = chain_complex_of(&c.complex);
            for d in row.degrees().collect::<Vec<_>>() {
                let labels = c
                    .complex
                    .simplices(d as usize)
                    .iter()
                    .map(|s| {
                        let vs: Vec<&str> = s.iter().map(|&v| c.names[v].as_str()).collect();
                        format!("[{}]", vs.join(","))
                    })
                    .collect();
                row = row.with_labels(d, labels).expect("one label per simplex");
            }
            row
        }
    }
}

fn add_block(acc: &mut IntMatrix, block: &IntMatrix) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = acc.get(r, c) + block.get(r, c);
            acc.set(r, c, v);
        }
    }
}

/// Builds rows and `∂_[j]` maps without checking the anticommutation identity.
pub fn assemble_multicomplex(fp: &FlowPresentation) -> Result<Multicomplex> {
    fp.check()?;
    let cap = fp.effective_cap();
    let rows = (0..=fp.dim)
        .map(|i| fp.crit(i).map(|c| row_complex(c, cap)))
        .collect();
    let mut mc = Multicomplex::new(fp.dim, cap, rows)?;

    let mut acc: BTreeMap<(usize, usize, usize), IntMatrix> = BTreeMap::new();
    for (n, m) in fp.moduli.iter().enumerate() {
        let src = fp.crit(m.from).expect("checked");
        let tgt = fp.crit(m.to).expect("checked");
        let j = m.from - m.to;
        let ctx = |e: Error| Error::InvalidFlowData(format!("moduli component {n}: {e}"));
        let expected_dim = j + src.dim() - 1;
        if m.domain.top_dim() != Some(expected_dim) {
            return Err(Error::InvalidFlowData(format!(
                "moduli component {n}: domain has dimension {:?}, expected {expected_dim}",
                m.domain.top_dim()
            )));
        }
        let ev_minus = SimplicialMap::new(m.domain.clone(), src.complex.clone(), m.ev_minus.clone())
            .map_err(ctx)?;
        let ev_plus = SimplicialMap::new(m.domain.clone(), tgt.complex.clone(), m.ev_plus.clone())
            .map_err(ctx)?;
        let sign = BigInt::from(m.sign);

        match src.kind {
            CritKind::Points => {
                let fund = fundamental_cycle(&m.domain).map_err(ctx)?;
                let x = m.ev_minus[0];
                let image = pushforward(&ev_plus, &fund.chain);
                let p_target = j - 1;
                let key = (j, 0, m.from);
                let shape = (mc.rank(p_target as i64, m.to as i64), mc.rank(0, m.from as i64));
                let entry = acc.entry(key).or_insert_with(|| IntMatrix::zeros(shape.0, shape.1));
                // the pushforward lives in the target complex; a fat row only
                // agrees with it in degree 0
                if image.coeffs.len() == shape.0 {
                    for (r, v) in image.coeffs.iter().enumerate() {
                        let cur = entry.get(r, x) + v * &sign;
                        entry.set(r, x, cur);
                    }
                }
            }
            CritKind::Simplicial => {
                if j != 1 {
                    return Err(Error::InvalidFlowData(format!(
                        "moduli component {n}: positive-dimensional source needs adjacent indices"
                    )));
                }
                ev_minus.covering_sheets().map_err(ctx)?;
                for p in 0..=src.dim() {
                    let block = &ev_plus.pushforward_matrix(p) * &ev_minus.pullback_matrix(p).map_err(ctx)?;
                    let block = block.scale(&sign);
                    let shape = (mc.rank(p as i64, m.to as i64), mc.rank(p as i64, m.from as i64));
                    let entry = acc
                        .entry((1, p, m.from))
                        .or_insert_with(|| IntMatrix::zeros(shape.0, shape.1));
                    if block.rows() <= shape.0 {
                        add_block(entry, &block);
                    }
                }
            }
        }
    }
    for ((j, p, i), m) in acc {
        mc.set_map(j, p, i, m)?;
    }
    Ok(mc)
}

/// Builds and validates; anticommutation failures come back as
/// [`Error::InconsistentFlowData`].
pub fn build_multicomplex(fp: &FlowPresentation) -> Result<Multicomplex> {
    let mc = assemble_multicomplex(fp)?;
    let report = validate_multicomplex(&mc);
    if !report.is_valid() {
        return Err(Error::InconsistentFlowData(Box::new(report)));
    }
    Ok(mc)
}
