//! Finitely generated modules over a complete discrete valuation ring `O`
//! (uniformizer `w`, fraction field `K`, residue field `F` of characteristic
//! `l`), graded by cohomological degree.
//!
//! A module is recorded only through its invariants: free rank and the
//! exponents `a` of its torsion summands `O/w^a`. Every operation here acts
//! on cohomology degreewise:
//!
//! * `K (x) -` keeps the free rank.
//! * `F (x)^L -` of `O/w^a` lives in degrees `-1` and `0`, so
//!   `H^i(F (x)^L C) = F (x) H^i(C) + Tor_1(F, H^{i+1}(C))`.
//! * `tau_{<=n}` drops degrees above `n`; `tau_{<=n+}` also keeps the torsion
//!   of degree `n + 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicI32, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::FinAbGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OModuleError {
    #[error("degree {degree} outside the support window [-{window}, {window}] (set DECNUM_DEGREE_WINDOW to widen)")]
    OutOfWindow { degree: i32, window: i32 },
    #[error("torsion exponents must be >= 1")]
    ZeroExponent,
}

pub type Result<T> = std::result::Result<T, OModuleError>;

pub const DEFAULT_DEGREE_WINDOW: i32 = 64;

static DEGREE_WINDOW: AtomicI32 = AtomicI32::new(DEFAULT_DEGREE_WINDOW);

/// Half-width `w` of the allowed support `[-w, w]` for graded modules.
pub fn degree_window() -> i32 {
    DEGREE_WINDOW.load(Ordering::Relaxed)
}

pub fn set_degree_window(w: i32) {
    DEGREE_WINDOW.store(w.max(0), Ordering::Relaxed);
}

fn check_degree(degree: i32) -> Result<()> {
    let window = degree_window();
    if degree.abs() > window {
        Err(OModuleError::OutOfWindow { degree, window })
    } else {
        Ok(())
    }
}

/// Common interface of finitely generated modules over a PID, seen through
/// their free rank and torsion summands.
pub trait FgModule: Clone + PartialEq + Default + fmt::Display {
    fn free_rank(&self) -> usize;
    /// Number of cyclic torsion summands.
    fn torsion_count(&self) -> usize;
    fn torsion_part(&self) -> Self;
    /// Free part of `free` plus torsion part of `torsion`.
    fn splice(free: &Self, torsion: &Self) -> Self;

    fn free_part(&self) -> Self {
        Self::splice(self, &Self::default())
    }

    fn is_zero(&self) -> bool {
        self.free_rank() == 0 && self.torsion_count() == 0
    }

    fn is_torsion_free(&self) -> bool {
        self.torsion_count() == 0
    }

    /// Weak inclusion of invariants: rank and torsion count do not decrease.
    fn weakly_below(&self, other: &Self) -> bool {
        self.free_rank() <= other.free_rank() && self.torsion_count() <= other.torsion_count()
    }
}

/// `O^rank + sum_i O/w^{a_i}`, exponents sorted descending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OModule {
    rank: usize,
    torsion: Vec<u32>,
}

impl OModule {
    pub fn new(rank: usize, mut torsion: Vec<u32>) -> Result<Self> {
        if torsion.contains(&0) {
            return Err(OModuleError::ZeroExponent);
        }
        torsion.sort_unstable_by(|a, b| b.cmp(a));
        Ok(OModule { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        OModule { rank, torsion: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u32] {
        &self.torsion
    }

    /// `O (x)_Z G` for `O` unramified over `Z_l`.
    pub fn from_group(g: &FinAbGroup, ell: u64) -> Self {
        let mut torsion = g.l_primary_exponents(ell);
        torsion.sort_unstable_by(|a, b| b.cmp(a));
        OModule { rank: g.free_rank(), torsion }
    }
}

impl FgModule for OModule {
    fn free_rank(&self) -> usize {
        self.rank
    }

    fn torsion_count(&self) -> usize {
        self.torsion.len()
    }

    fn torsion_part(&self) -> Self {
        OModule { rank: 0, torsion: self.torsion.clone() }
    }

    fn splice(free: &Self, torsion: &Self) -> Self {
        OModule { rank: free.rank, torsion: torsion.torsion.clone() }
    }
}

impl FgModule for FinAbGroup {
    fn free_rank(&self) -> usize {
        FinAbGroup::free_rank(self)
    }

    fn torsion_count(&self) -> usize {
        self.divisors().len()
    }

    fn torsion_part(&self) -> Self {
        self.torsion()
    }

    fn splice(free: &Self, torsion: &Self) -> Self {
        FinAbGroup::new(torsion.divisors().to_vec(), FinAbGroup::free_rank(free))
            .expect("divisors of a valid group")
    }
}

impl fmt::Display for OModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("O".to_string()),
            r => parts.push(format!("O^{r}")),
        }
        for &a in &self.torsion {
            parts.push(if a == 1 { "O/w".to_string() } else { format!("O/w^{a}") });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Scalar extension to `K`: torsion dies.
pub fn tensor_k(m: &OModule) -> usize {
    m.rank
}

/// `(dim H^-1, dim H^0)` of `F (x)^L m`.
pub fn derived_tensor_f(m: &OModule) -> (usize, usize) {
    let t = m.torsion.len();
    (t, m.rank + t)
}

/// Finitely supported graded module; absent degrees are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "M: Serialize", deserialize = "M: Deserialize<'de>"))]
pub struct Graded<M> {
    degrees: BTreeMap<i32, M>,
}

impl<M> Default for Graded<M> {
    fn default() -> Self {
        Graded { degrees: BTreeMap::new() }
    }
}

pub type GradedOModule = Graded<OModule>;
/// Graded finitely generated abelian groups (integral cohomology).
pub type GradedZModule = Graded<FinAbGroup>;

impl<M: FgModule> Graded<M> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, M)>) -> Result<Self> {
        let mut g = Self::new();
        for (d, m) in pairs {
            g.set(d, m)?;
        }
        Ok(g)
    }

    pub fn set(&mut self, degree: i32, m: M) -> Result<()> {
        check_degree(degree)?;
        if m.is_zero() {
            self.degrees.remove(&degree);
        } else {
            self.degrees.insert(degree, m);
        }
        Ok(())
    }

    pub fn get(&self, degree: i32) -> M {
        self.degrees.get(&degree).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &M)> {
        self.degrees.iter().map(|(&d, m)| (d, m))
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.degrees.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.degrees.keys().next().copied()
    }

    /// `tau_{<=n}`, or `tau_{<=n+}` when `plus`.
    pub fn truncate(&self, n: i32, plus: bool) -> Self {
        let mut degrees: BTreeMap<i32, M> =
            self.degrees.range(..=n).map(|(&d, m)| (d, m.clone())).collect();
        if plus {
            if let Some(m) = self.degrees.get(&(n + 1)) {
                let t = m.torsion_part();
                if !t.is_zero() {
                    degrees.insert(n + 1, t);
                }
            }
        }
        Graded { degrees }
    }

    /// Reindex: degree `i` of the result is degree `i + k` of `self`.
    pub fn shift(&self, k: i32) -> Result<Self> {
        Self::from_pairs(self.degrees.iter().map(|(&d, m)| (d - k, m.clone())))
    }

    /// Cohomology from compactly supported cohomology on a smooth space of
    /// real dimension `real_dim`: free part from degree `real_dim - k`,
    /// torsion from degree `real_dim - k + 1`.
    pub fn poincare_dual(&self, real_dim: i32) -> Result<Self> {
        let mut out = Self::new();
        let mut targets: Vec<i32> = Vec::new();
        for &d in self.degrees.keys() {
            targets.push(real_dim - d);
            targets.push(real_dim - d + 1);
        }
        targets.sort_unstable();
        targets.dedup();
        for k in targets {
            let free = self.get(real_dim - k);
            let tors = self.get(real_dim - k + 1);
            out.set(k, M::splice(&free, &tors))?;
        }
        Ok(out)
    }

    /// Degreewise weak inclusion of invariants.
    pub fn weakly_below(&self, other: &Self) -> bool {
        self.degrees.iter().all(|(&d, m)| m.weakly_below(&other.get(d)))
    }

    /// Keep only degrees in `lo..=hi`.
    pub fn restrict(&self, lo: i32, hi: i32) -> Self {
        Graded { degrees: self.degrees.range(lo..=hi).map(|(&d, m)| (d, m.clone())).collect() }
    }
}

impl GradedZModule {
    /// `O (x)_Z -` degreewise.
    pub fn localize(&self, ell: u64) -> GradedOModule {
        let degrees = self
            .degrees
            .iter()
            .map(|(&d, g)| (d, OModule::from_group(g, ell)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        Graded { degrees }
    }
}

impl<M: FgModule> fmt::Display for Graded<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (d, m)) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}: {m}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    K,
    F,
}

/// Graded vector space over `K` or `F`: degree -> dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FGraded {
    pub field: Field,
    pub ell: Option<u64>,
    dims: BTreeMap<i32, usize>,
}

impl FGraded {
    pub fn new(field: Field, ell: Option<u64>) -> Self {
        FGraded { field, ell, dims: BTreeMap::new() }
    }

    pub fn from_pairs(
        field: Field,
        ell: Option<u64>,
        pairs: impl IntoIterator<Item = (i32, usize)>,
    ) -> Result<Self> {
        let mut g = Self::new(field, ell);
        for (d, n) in pairs {
            g.add(d, n)?;
        }
        Ok(g)
    }

    pub fn add(&mut self, degree: i32, n: usize) -> Result<()> {
        if n == 0 {
            return Ok(());
        }
        check_degree(degree)?;
        *self.dims.entry(degree).or_insert(0) += n;
        Ok(())
    }

    pub fn with_ell(mut self, ell: u64) -> Self {
        self.ell = Some(ell);
        self
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.dims.iter().map(|(&d, &n)| (d, n))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn truncate(&self, n: i32) -> Self {
        FGraded {
            field: self.field,
            ell: self.ell,
            dims: self.dims.range(..=n).map(|(&d, &k)| (d, k)).collect(),
        }
    }

    pub fn shift(&self, k: i32) -> Result<Self> {
        Self::from_pairs(self.field, self.ell, self.dims.iter().map(|(&d, &n)| (d - k, n)))
    }

    pub fn restrict(&self, lo: i32, hi: i32) -> Self {
        FGraded {
            field: self.field,
            ell: self.ell,
            dims: self.dims.range(lo..=hi).map(|(&d, &k)| (d, k)).collect(),
        }
    }

    /// Euler characteristic `sum (-1)^deg dim`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&d, &n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

impl fmt::Display for FGraded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (d, n)) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}: {n}")?;
        }
        write!(f, "}}")
    }
}

/// `K (x) g` degreewise.
pub fn tensor_k_graded(g: &GradedOModule) -> FGraded {
    let dims = g.iter().map(|(d, m)| (d, m.rank)).filter(|&(_, n)| n > 0).collect();
    FGraded { field: Field::K, ell: None, dims }
}

/// `F (x)^L g`: degree `i` gets `rank_i + t_i + t_{i+1}`.
pub fn reduce_graded(g: &GradedOModule) -> Result<FGraded> {
    let mut out = FGraded::new(Field::F, None);
    for (d, m) in g.iter() {
        let (h_minus1, h0) = derived_tensor_f(m);
        out.add(d, h0)?;
        out.add(d - 1, h_minus1)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn om(rank: usize, torsion: &[u32]) -> OModule {
        OModule::new(rank, torsion.to_vec()).unwrap()
    }

    fn sample() -> GradedOModule {
        GradedOModule::from_pairs([(0, om(1, &[])), (2, om(0, &[1])), (3, om(1, &[]))]).unwrap()
    }

    #[test]
    fn scalar_extension() {
        assert_eq!(tensor_k(&om(2, &[3, 1])), 2);
        assert_eq!(tensor_k(&om(0, &[5])), 0);
        assert_eq!(tensor_k(&om(1, &[])), 1);
        assert_eq!(om(2, &[1, 3]).torsion(), &[3, 1]);
        assert!(OModule::new(0, vec![0]).is_err());
    }

    #[test]
    fn derived_reduction() {
        assert_eq!(derived_tensor_f(&om(1, &[])), (0, 1));
        for a in 1..5 {
            assert_eq!(derived_tensor_f(&om(0, &[a])), (1, 1));
        }
        assert_eq!(derived_tensor_f(&om(2, &[1, 3])), (2, 4));
    }

    #[test]
    fn truncation_examples() {
        let g = sample();
        assert_eq!(g.truncate(1, false), GradedOModule::from_pairs([(0, om(1, &[]))]).unwrap());
        assert_eq!(
            g.truncate(1, true),
            GradedOModule::from_pairs([(0, om(1, &[])), (2, om(0, &[1]))]).unwrap()
        );
        assert_eq!(g.truncate(3, false), g);
        assert_eq!(g.truncate(3, true), g);
        assert_eq!(g.truncate(7, true), g);
    }

    #[test]
    fn reduction_examples() {
        let f = reduce_graded(&sample()).unwrap();
        assert_eq!(f, FGraded::from_pairs(Field::F, None, [(0, 1), (1, 1), (2, 1), (3, 1)]).unwrap());
        let f = reduce_graded(&GradedOModule::from_pairs([(0, om(1, &[]))]).unwrap()).unwrap();
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![(0, 1)]);
        let f = reduce_graded(&GradedOModule::from_pairs([(2, om(0, &[1]))]).unwrap()).unwrap();
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn poincare_duality_examples() {
        // H_c of the smooth part of a simple singularity with P/Q = Z/2
        let hc = GradedOModule::from_pairs([(1, om(1, &[])), (3, om(0, &[1])), (4, om(1, &[]))]).unwrap();
        let h = hc.poincare_dual(4).unwrap();
        assert_eq!(h, sample());
        assert_eq!(h.poincare_dual(4).unwrap(), hc);

        let pt = GradedOModule::from_pairs([(0, om(1, &[]))]).unwrap();
        assert_eq!(pt.poincare_dual(0).unwrap(), pt);

        let free = GradedOModule::from_pairs([(0, om(1, &[])), (1, om(3, &[])), (5, om(2, &[]))]).unwrap();
        let dual = free.poincare_dual(6).unwrap();
        assert_eq!(
            dual,
            GradedOModule::from_pairs([(6, om(1, &[])), (5, om(3, &[])), (1, om(2, &[]))]).unwrap()
        );
    }

    #[test]
    fn localization() {
        let g = GradedZModule::from_pairs([
            (0, FinAbGroup::free(1)),
            (2, FinAbGroup::new(vec![2, 12], 0).unwrap()),
        ])
        .unwrap();
        let at2 = g.localize(2);
        assert_eq!(at2.get(2), om(0, &[2, 1]));
        let at3 = g.localize(3);
        assert_eq!(at3.get(2), om(0, &[1]));
        let at5 = g.localize(5);
        assert!(at5.get(2).is_zero());
        assert_eq!(at5.get(0), om(1, &[]));
    }

    #[test]
    fn display() {
        assert_eq!(sample().to_string(), "{0: O, 2: O/w, 3: O}");
        assert_eq!(om(2, &[3]).to_string(), "O^2 + O/w^3");
    }

    #[test]
    fn window_violation() {
        let mut g = GradedOModule::new();
        let w = degree_window();
        assert!(g.set(w + 1, om(1, &[])).is_err());
        assert!(g.set(-w, om(1, &[])).is_ok());
    }
}
