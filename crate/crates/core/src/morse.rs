//! Morse-Smale-Witten complexes and their embedding `Φ_#` into the total
//! complex of a Morse-shaped multicomplex.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chain::{
    homology_at, induced_is_isomorphism, induced_map_on_homology, quasi_iso_through, ChainComplex,
    ChainMap, HomologyGroup,
};
use crate::error::{Error, Result};
use crate::exactalg::{solve_integer, IntMatrix};
use crate::flowdata::{CritModel, FlowPresentation, ModuliComponentModel};
use crate::multicomplex::{totalize, Multicomplex, TotalComplexView};
use crate::simplicial::SimplicialComplexData;

/// Signed count `n(from, to)` of flow lines between critical points of
/// adjacent index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowCount {
    pub from: String,
    pub to: String,
    pub count: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseData {
    pub dim: usize,
    /// `critical[k]` lists the index-`k` critical points.
    pub critical: Vec<Vec<String>>,
    pub counts: Vec<FlowCount>,
}

impl MorseData {
    pub fn new(dim: usize, critical: Vec<Vec<String>>, counts: Vec<FlowCount>) -> Result<Self> {
        if critical.len() > dim + 1 {
            return Err(Error::InvalidMorseData(format!(
                "critical points listed up to index {}, dimension is {dim}",
                critical.len() - 1
            )));
        }
        let mut critical = critical;
        critical.resize(dim + 1, Vec::new());
        let md = MorseData {
            dim,
            critical,
            counts,
        };
        let mut seen = HashSet::new();
        for name in md.critical.iter().flatten() {
            if !seen.insert(name) {
                return Err(Error::InvalidMorseData(format!("critical point {name:?} listed twice")));
            }
        }
        let mut pairs = HashSet::new();
        for c in &md.counts {
            let (qi, _) = md
                .locate(&c.from)
                .ok_or_else(|| Error::InvalidMorseData(format!("unknown critical point {:?}", c.from)))?;
            let (pi, _) = md
                .locate(&c.to)
                .ok_or_else(|| Error::InvalidMorseData(format!("unknown critical point {:?}", c.to)))?;
            if qi != pi + 1 {
                return Err(Error::InvalidMorseData(format!(
                    "count from {:?} (index {qi}) to {:?} (index {pi}) skips an index",
                    c.from, c.to
                )));
            }
            if !pairs.insert((&c.from, &c.to)) {
                return Err(Error::InvalidMorseData(format!(
                    "count from {:?} to {:?} given twice",
                    c.from, c.to
                )));
            }
        }
        Ok(md)
    }

    /// `(index, position)` of a named critical point.
    pub fn locate(&self, name: &str) -> Option<(usize, usize)> {
        self.critical
            .iter()
            .enumerate()
            .find_map(|(k, names)| names.iter().position(|n| n == name).map(|pos| (k, pos)))
    }
}

/// The Morse complex in degrees `0..=dim`. Fails if `∂∘∂ ≠ 0`.
pub fn morse_complex(md: &MorseData) -> Result<ChainComplex> {
    let ranks: Vec<usize> = md.critical.iter().map(Vec::len).collect();
    let mut boundaries: Vec<IntMatrix> = (1..=md.dim)
        .map(|k| IntMatrix::zeros(ranks[k - 1], ranks[k]))
        .collect();
    for c in &md.counts {
        let (qi, q) = md.locate(&c.from).expect("checked at construction");
        let (_, p) = md.locate(&c.to).expect("checked at construction");
        boundaries[qi - 1].set(p, q, BigInt::from(c.count));
    }
    let mut complex = ChainComplex::new(0, ranks, boundaries)?;
    for (k, names) in md.critical.iter().enumerate() {
        complex = complex.with_labels(k as i64, names.clone())?;
    }
    let report = complex.validate();
    if !report.is_valid() {
        return Err(Error::InvalidMorseData(format!(
            "the boundary does not square to zero: {report:?}"
        )));
    }
    Ok(complex)
}

/// One point-domain moduli component per unit of `|n(q, p)|`.
pub fn morse_to_flow(md: &MorseData, column_cap: Option<usize>) -> Result<FlowPresentation> {
    let mut critical = Vec::new();
    for (k, names) in md.critical.iter().enumerate() {
        if !names.is_empty() {
            critical.push(CritModel::points(k, names.clone())?);
        }
    }
    let mut moduli = Vec::new();
    for c in &md.counts {
        let (qi, q) = md.locate(&c.from).expect("checked at construction");
        let (pi, p) = md.locate(&c.to).expect("checked at construction");
        for _ in 0..c.count.unsigned_abs() {
            moduli.push(ModuliComponentModel {
                from: qi,
                to: pi,
                domain: SimplicialComplexData::points(1),
                ev_minus: vec![q],
                ev_plus: vec![p],
                sign: c.count.signum(),
            });
        }
    }
    Ok(FlowPresentation {
        dim: md.dim,
        critical,
        moduli,
        column_cap,
    })
}

/// Every present row has `∂_[0]` unimodular at even positive columns and
/// zero at odd ones.
pub fn check_morse_shaped(mc: &Multicomplex) -> Result<()> {
    for i in 0..=mc.dim() {
        if !mc.row_present(i) {
            continue;
        }
        for p in 1..=mc.column_cap() {
            let d = mc.map(0, p, i);
            let ok = if p % 2 == 0 { d.is_unimodular() } else { d.is_zero() };
            if !ok {
                return Err(Error::NotMorseShaped(format!(
                    "∂_[0] at (p={p}, i={i}) is {d}"
                )));
            }
        }
    }
    Ok(())
}

/// `Φ_#(c0)` for `c0 ∈ C_0(B_k)`, returned as slots `c_0, ..., c_k` with
/// `c_t ∈ C_t(B_{k-t})`.
pub fn phi_embed(c0: &[BigInt], k: usize, mc: &Multicomplex) -> Result<Vec<Vec<BigInt>>> {
    check_morse_shaped(mc)?;
    if c0.len() != mc.rank(0, k as i64) {
        return Err(Error::Dimension(format!(
            "vector of length {} for C_0(B_{k}) of rank {}",
            c0.len(),
            mc.rank(0, k as i64)
        )));
    }
    let mut slots: Vec<Vec<BigInt>> = vec![c0.to_vec()];
    for i in 1..=k {
        let len = mc.rank(i as i64, (k - i) as i64);
        if i % 2 == 1 {
            slots.push(vec![BigInt::zero(); len]);
            continue;
        }
        let mut rhs = vec![BigInt::zero(); mc.rank(i as i64 - 1, (k - i) as i64)];
        for t in (0..i).step_by(2) {
            let term = mc.map(i - t, t, k - t).mul_vec(&slots[t]);
            for (r, v) in rhs.iter_mut().zip(term) {
                *r -= v;
            }
        }
        let d0 = mc.map(0, i, k - i);
        let ci = solve_integer(&d0, &rhs)?.ok_or_else(|| {
            Error::Internal(format!("∂_[0] at (p={i}, i={}) cannot be inverted over Z", k - i))
        })?;
        slots.push(ci);
    }
    Ok(slots)
}

/// `Φ_#` as a chain map from the Morse complex to the total complex.
pub fn phi_chain_map(md: &MorseData, mc: &Multicomplex, view: &TotalComplexView) -> Result<ChainMap> {
    let source = morse_complex(md)?;
    let mut components = BTreeMap::new();
    for k in 0..=md.dim {
        let n = md.critical[k].len();
        if mc.rank(0, k as i64) != n {
            return Err(Error::Dimension(format!(
                "C_0(B_{k}) has rank {}, Morse data has {n} points of index {k}",
                mc.rank(0, k as i64)
            )));
        }
        let mut columns = Vec::with_capacity(n);
        for q in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[q] = 1.into();
            let slots = phi_embed(&e, k, mc)?;
            let mut col = vec![BigInt::zero(); view.complex.rank(k as i64)];
            for (t, slot) in slots.iter().enumerate() {
                let off = view.offsets[&(t, k - t)];
                col[off..off + slot.len()].clone_from_slice(slot);
            }
            columns.push(col);
        }
        components.insert(k as i64, IntMatrix::from_columns(view.complex.rank(k as i64), &columns)?);
    }
    Ok(ChainMap::new(source, view.complex.clone(), components))
}

#[derive(Clone, Debug)]
pub struct InducedMapReport {
    pub degree: usize,
    pub matrix: IntMatrix,
    pub is_isomorphism: bool,
}

#[derive(Clone, Debug)]
pub struct MorseVerification {
    /// Nonzero `Φ_#∘∂ - 𝛛∘Φ_#` blocks by degree; empty when exact.
    pub residuals: Vec<(i64, IntMatrix)>,
    pub quasi_isomorphism: bool,
    pub induced: Vec<InducedMapReport>,
    pub odd_components_zero: bool,
    pub morse_homology: Vec<HomologyGroup>,
    pub multicomplex_homology: Vec<HomologyGroup>,
}

impl MorseVerification {
    pub fn chain_map_exact(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn homology_matches(&self) -> bool {
        self.morse_homology.len() == self.multicomplex_homology.len()
            && self
                .morse_homology
                .iter()
                .zip(&self.multicomplex_homology)
                .all(|(a, b)| a.is_isomorphic(b))
    }

    pub fn passed(&self) -> bool {
        self.chain_map_exact()
            && self.quasi_isomorphism
            && self.odd_components_zero
            && self.homology_matches()
            && self.induced.iter().all(|r| r.is_isomorphism)
    }
}

/// Checks that `Φ_#` is a chain map and a quasi-isomorphism in the degrees
/// the truncated total complex sees.
pub fn verify_morse_mb(md: &MorseData, mc: &Multicomplex) -> Result<MorseVerification> {
    let view = totalize(mc)?;
    let phi = phi_chain_map(md, mc, &view)?;
    let residuals = phi
        .residuals()?
        .into_iter()
        .filter(|(_, r)| !r.is_zero())
        .collect();

    let mut odd_components_zero = true;
    for k in 0..=md.dim {
        for q in 0..md.critical[k].len() {
            let mut e = vec![BigInt::zero(); md.critical[k].len()];
            e[q] = 1.into();
            let slots = phi_embed(&e, k, mc)?;
            if slots
                .iter()
                .skip(1)
                .step_by(2)
                .any(|s| s.iter().any(|v| !v.is_zero()))
            {
                odd_components_zero = false;
            }
        }
    }

    let cap = mc.column_cap() as i64;
    let quasi_isomorphism = quasi_iso_through(&phi, cap - 1)?;
    let mut induced = Vec::new();
    let mut morse_homology = Vec::new();
    let mut multicomplex_homology = Vec::new();
    for k in 0..=md.dim {
        induced.push(InducedMapReport {
            degree: k,
            matrix: induced_map_on_homology(&phi, k as i64)?,
            is_isomorphism: induced_is_isomorphism(&phi, k as i64)?,
        });
        morse_homology.push(homology_at(&phi.source, k as i64)?);
        multicomplex_homology.push(homology_at(&view.complex, k as i64)?);
    }
    Ok(MorseVerification {
        residuals,
        quasi_isomorphism,
        induced,
        odd_components_zero,
        morse_homology,
        multicomplex_homology,
    })
}
