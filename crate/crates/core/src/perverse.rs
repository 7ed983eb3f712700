//! Perverse extensions on a two-stratum cone.
//!
//! `X` is a cone with smooth open stratum `U` of complex dimension `d` and the
//! cone point as closed stratum. The stalk at the cone point of
//! `j_*(E[d])` is `RΓ(U, E)[d]`, and the six perverse extensions over `O`
//! are truncations of it:
//!
//! | extension | stalk |
//! |-----------|-------|
//! | `p j_!`   | `tau_{<= d-2}`  |
//! | `p+ j_!`  | `tau_{<= d-2+}` |
//! | `p j_!*`  | `tau_{<= d-1}`  |
//! | `p+ j_!*` | `tau_{<= d-1+}` |
//! | `p j_*`   | `tau_{<= d}`    |
//! | `p+ j_*`  | `tau_{<= d+}`   |
//!
//! Stalks are reported in shifted degrees (cohomological degree minus `d`), so
//! the constant sheaf `O_X[d]` has its stalk in degree `-d`.
//!
//! Over `F` the extensions are the same truncations of `RΓ(U, F)[d]`. The
//! decomposition number of the cone point in `F (x) p j_!*(O[d])` is read off
//! as a difference of Euler characteristics, which is valid when
//! `H^{d-1}(U) = 0` and `H^{d+1}(U)` is torsion-free; other inputs are refused.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::{self, FinAbGroup, IntMatError, IntMatrix};
use crate::modrep::{self, EquivariantAbGroup, IrreducibleLabel, ModRepError, SmallGroup};
use crate::omodule::{
    self, FGraded, FgModule, GradedOModule, GradedZModule, OModuleError,
};
use crate::rootsys::{self, DynkinDiagram, FoldingDatum, RootSysError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerverseError {
    #[error("insufficient link data: {0}")]
    InsufficientLink(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("no symmetry action recorded in degree {0}")]
    MissingAction(i32),
    #[error("symmetry group mismatch: data carries {data}, requested {requested}")]
    GroupMismatch { data: SmallGroup, requested: SmallGroup },
    #[error("{0} is not simply laced")]
    NotSimplyLaced(DynkinDiagram),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("F-side extensions exist only for perversity p, got {0}")]
    FlavorOverF(ExtensionFlavor),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    OModule(#[from] OModuleError),
    #[error(transparent)]
    ModRep(#[from] ModRepError),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    IntMat(#[from] IntMatError),
}

pub type Result<T> = std::result::Result<T, PerverseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Perversity {
    #[serde(rename = "p")]
    P,
    #[serde(rename = "p+")]
    PPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtensionKind {
    #[serde(rename = "!")]
    Shriek,
    #[serde(rename = "!*")]
    Intermediate,
    #[serde(rename = "*")]
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtensionFlavor {
    pub perversity: Perversity,
    pub kind: ExtensionKind,
}

impl ExtensionFlavor {
    pub const fn new(perversity: Perversity, kind: ExtensionKind) -> Self {
        ExtensionFlavor { perversity, kind }
    }

    /// The six flavors along the chain of canonical morphisms
    /// `p j_! -> p+ j_! -> p j_!* -> p+ j_!* -> p j_* -> p+ j_*`.
    pub const CHAIN: [ExtensionFlavor; 6] = [
        ExtensionFlavor::new(Perversity::P, ExtensionKind::Shriek),
        ExtensionFlavor::new(Perversity::PPlus, ExtensionKind::Shriek),
        ExtensionFlavor::new(Perversity::P, ExtensionKind::Intermediate),
        ExtensionFlavor::new(Perversity::PPlus, ExtensionKind::Intermediate),
        ExtensionFlavor::new(Perversity::P, ExtensionKind::Star),
        ExtensionFlavor::new(Perversity::PPlus, ExtensionKind::Star),
    ];

    pub const IC: ExtensionFlavor = ExtensionFlavor::new(Perversity::P, ExtensionKind::Intermediate);

    /// Truncation degree in unshifted cohomology of `U`.
    pub fn threshold(self, open_dim: i32) -> i32 {
        open_dim
            + match self.kind {
                ExtensionKind::Shriek => -2,
                ExtensionKind::Intermediate => -1,
                ExtensionKind::Star => 0,
            }
    }

    pub fn is_plus(self) -> bool {
        self.perversity == Perversity::PPlus
    }
}

impl fmt::Display for ExtensionFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.perversity {
            Perversity::P => "p",
            Perversity::PPlus => "p+",
        };
        let k = match self.kind {
            ExtensionKind::Shriek => "!",
            ExtensionKind::Intermediate => "!*",
            ExtensionKind::Star => "*",
        };
        write!(f, "{p} j_{k}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Full,
    /// Only degrees `lo..=hi` of the link cohomology are known.
    Window { lo: i32, hi: i32 },
}

/// Integral cohomology `H^i(U, Z)` of the open stratum of a cone, with the
/// symmetry actions on torsion where known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeData {
    pub label: String,
    pub open_dim: u32,
    pub link: GradedZModule,
    pub completeness: Completeness,
    /// Degrees whose free rank is not known; only torsion-freeness is.
    pub rank_unknown: BTreeSet<i32>,
    pub equivariant: BTreeMap<i32, EquivariantAbGroup>,
}

impl ConeData {
    pub fn d(&self) -> i32 {
        self.open_dim as i32
    }

    /// `H^*(U, O)` for `O` an `l`-adic ring.
    pub fn link_over_o(&self, ell: u64) -> GradedOModule {
        self.link.localize(ell)
    }

    fn known_range(&self) -> (i32, i32) {
        match self.completeness {
            Completeness::Full => (i32::MIN, i32::MAX),
            Completeness::Window { lo, hi } => (lo, hi),
        }
    }

    pub fn is_partial(&self) -> bool {
        matches!(self.completeness, Completeness::Window { .. })
    }

    fn check_covers(&self, flavor: ExtensionFlavor) -> Result<i32> {
        let t = flavor.threshold(self.d());
        let (lo, hi) = self.known_range();
        if t + 1 > hi || t + 1 < lo {
            return Err(PerverseError::InsufficientLink(format!(
                "{} on {} needs degree {} of the link cohomology, known range is {lo}..={hi}",
                flavor,
                self.label,
                t + 1
            )));
        }
        Ok(t)
    }

    /// Restrict a shifted-degree report to what the window determines.
    fn clip_o(&self, g: GradedOModule) -> GradedOModule {
        match self.completeness {
            Completeness::Full => g,
            Completeness::Window { lo, hi } => g.restrict(lo - self.d(), hi - self.d()),
        }
    }

    fn clip_f(&self, g: FGraded) -> FGraded {
        match self.completeness {
            Completeness::Full => g,
            Completeness::Window { lo, hi } => g.restrict(lo - self.d(), hi - self.d()),
        }
    }
}

fn check_prime(ell: u64) -> Result<()> {
    if modrep::is_prime(ell) {
        Ok(())
    } else {
        Err(PerverseError::NotPrime(ell))
    }
}

/// Compactly supported cohomology of `U = X~ \ E` from the long exact
/// sequence `... -> H^i_c(U) -> H^i_c(X~) -f_i-> H^i_c(E) -> H^{i+1}_c(U) -> ...`
/// when `H^*_c(X~)` is free: `H^i_c(U) = coker f_{i-1} + ker f_i`.
///
/// `restriction[i]` is the matrix of `f_i` (rows: rank of `H^i_c(E)`,
/// columns: rank of `H^i_c(X~)`).
pub fn open_part_compact_cohomology(restriction: &[IntMatrix]) -> Result<GradedZModule> {
    let mut out = GradedZModule::new();
    for i in 0..=restriction.len() {
        let coker = match i.checked_sub(1) {
            Some(k) => intmat::cokernel(&restriction[k])?.group,
            None => FinAbGroup::trivial(),
        };
        let kernel_rank = match restriction.get(i) {
            Some(f) => f.cols() - intmat::smith_normal_form(f)?.rank(),
            None => 0,
        };
        out.set(i as i32, coker.direct_sum(&FinAbGroup::free(kernel_rank))?)?;
    }
    Ok(out)
}

/// Link cohomology of the rational double point of simply-laced type `hat`.
///
/// Built from the minimal resolution: `H^2_c(X~) = Q^v`, `H^4_c(X~) = Z`,
/// `H^0_c(E) = Z`, `H^2_c(E) = P^v`, with `H^2_c(X~) -> H^2_c(E)` minus the
/// inclusion (the intersection form is the negative Cartan matrix). The
/// symmetry action of `folding` is attached to degree 2.
pub fn link_cohomology_simple(hat: DynkinDiagram, folding: Option<&FoldingDatum>) -> Result<ConeData> {
    if !hat.is_simply_laced() {
        return Err(PerverseError::NotSimplyLaced(hat));
    }
    let n = hat.rank();
    // coroots in the coweight basis
    let inclusion = rootsys::root_lattice_in_weights(hat, true);
    let mut f2 = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            f2[(i, j)] = -inclusion[(i, j)];
        }
    }
    let restriction = vec![
        IntMatrix::zeros(1, 0), // H^0_c(X~) = 0 -> H^0_c(E) = Z
        IntMatrix::zeros(0, 0),
        f2,
        IntMatrix::zeros(0, 0),
        IntMatrix::zeros(0, 1), // H^4_c(X~) = Z -> H^4_c(E) = 0
    ];
    let hc = open_part_compact_cohomology(&restriction)?;
    let link = hc.poincare_dual(4)?;

    let mut equivariant = BTreeMap::new();
    let label = match folding {
        Some(f) => {
            if f.gamma_hat != hat {
                return Err(PerverseError::Internal(format!(
                    "folding of {} targets {}, not {hat}",
                    f.gamma, f.gamma_hat
                )));
            }
            let e = rootsys::symmetry_action_on_fundamental_group(f)?;
            if e.group() != &link.get(2).torsion() {
                return Err(PerverseError::Internal("H^2(U) differs from P/Q".into()));
            }
            equivariant.insert(2, e);
            f.gamma.to_string()
        }
        None => {
            equivariant.insert(2, EquivariantAbGroup::trivial(link.get(2)));
            hat.to_string()
        }
    };
    Ok(ConeData {
        label,
        open_dim: 2,
        link,
        completeness: Completeness::Full,
        rank_unknown: BTreeSet::new(),
        equivariant,
    })
}

/// Simple singularity of type `gamma` (possibly inhomogeneous) with its
/// symmetry group.
pub fn simple_singularity(gamma: DynkinDiagram) -> Result<ConeData> {
    let f = rootsys::folding(gamma);
    link_cohomology_simple(f.gamma_hat, Some(&f))
}

/// Window `d-1 ..= d+1` of the cohomology of the minimal orbit of type `d`,
/// where `d = 2 h^v - 2`: zero, `P^v(Φ')/Q^v(Φ')` for the long-root
/// subsystem `Φ'`, and a torsion-free module of unrecorded rank.
pub fn link_cohomology_minimal(ty: DynkinDiagram) -> Result<ConeData> {
    let roots = rootsys::root_system(ty);
    let d = (2 * roots.dual_coxeter - 2) as i32;
    let long = rootsys::long_root_subsystem(ty);
    let torsion = rootsys::fundamental_group(long, true)?.group;
    let mut link = GradedZModule::new();
    link.set(d, torsion.clone())?;
    let mut equivariant = BTreeMap::new();
    equivariant.insert(d, EquivariantAbGroup::trivial(torsion));
    let label = ty.to_string().to_lowercase();
    Ok(ConeData {
        label,
        open_dim: d as u32,
        link,
        completeness: Completeness::Window { lo: d - 1, hi: d + 1 },
        rank_unknown: BTreeSet::from([d + 1]),
        equivariant,
    })
}

/// Stalk at the cone point of the extension `flavor` of `O[d]`, shifted degrees.
pub fn extension_stalk(c: &ConeData, flavor: ExtensionFlavor, ell: u64) -> Result<GradedOModule> {
    check_prime(ell)?;
    let t = c.check_covers(flavor)?;
    let stalk = c.link_over_o(ell).truncate(t, flavor.is_plus()).shift(c.d())?;
    Ok(c.clip_o(stalk))
}

/// Integral version of [`extension_stalk`]: `O (x)_Z` of the result, before localizing.
pub fn extension_stalk_integral(c: &ConeData, flavor: ExtensionFlavor) -> Result<GradedZModule> {
    let t = c.check_covers(flavor)?;
    let stalk = c.link.truncate(t, flavor.is_plus()).shift(c.d())?;
    Ok(match c.completeness {
        Completeness::Full => stalk,
        Completeness::Window { lo, hi } => stalk.restrict(lo - c.d(), hi - c.d()),
    })
}

/// `F (x)^L` of an `O`-stalk.
pub fn reduce_stalk(s: &GradedOModule, ell: u64) -> Result<FGraded> {
    Ok(omodule::reduce_graded(s)?.with_ell(ell))
}

/// `K (x)` of an `O`-stalk.
pub fn rationalize_stalk(s: &GradedOModule) -> FGraded {
    omodule::tensor_k_graded(s)
}

/// Stalk of the extension of `F[d]` (perversity `p` only).
pub fn f_extension_stalk(c: &ConeData, flavor: ExtensionFlavor, ell: u64) -> Result<FGraded> {
    check_prime(ell)?;
    if flavor.is_plus() {
        return Err(PerverseError::FlavorOverF(flavor));
    }
    let t = c.check_covers(flavor)?;
    let reduced = omodule::reduce_graded(&c.link_over_o(ell))?;
    let stalk = reduced.truncate(t).shift(c.d())?.with_ell(ell);
    Ok(c.clip_f(stalk))
}

/// Checks that the Euler-characteristic extraction applies at `ell`.
fn check_hypotheses(c: &ConeData, ell: u64) -> Result<GradedOModule> {
    let d = c.d();
    let (lo, hi) = c.known_range();
    if lo > d - 1 || hi < d + 1 {
        return Err(PerverseError::InsufficientLink(format!(
            "{} needs degrees {}..={} of the link cohomology, known range is {lo}..={hi}",
            c.label,
            d - 1,
            d + 1
        )));
    }
    let link = c.link_over_o(ell);
    if c.rank_unknown.contains(&(d - 1)) || !link.get(d - 1).is_zero() {
        return Err(PerverseError::Refused(format!(
            "H^{}(U) is nonzero for {}; multiplicity extraction needs it to vanish",
            d - 1,
            c.label
        )));
    }
    if !link.get(d + 1).is_torsion_free() {
        return Err(PerverseError::Refused(format!(
            "H^{}(U) has {ell}-torsion for {}; multiplicity extraction needs it torsion-free",
            d + 1,
            c.label
        )));
    }
    Ok(link)
}

/// `[F (x) p j_!*(O[d]) : i_* F]`.
pub fn decomposition_number(c: &ConeData, ell: u64) -> Result<usize> {
    check_prime(ell)?;
    let link = check_hypotheses(c, ell)?;
    let reduced_ic = reduce_stalk(&extension_stalk(c, ExtensionFlavor::IC, ell)?, ell)?;
    let f_ic = f_extension_stalk(c, ExtensionFlavor::IC, ell)?;
    let diff = reduced_ic.euler_characteristic() - f_ic.euler_characteristic();
    let expected = link.get(c.d()).torsion_count() as i64;
    if diff != expected || diff < 0 {
        return Err(PerverseError::Internal(format!(
            "Euler characteristic difference {diff} disagrees with dim F (x) H^{}_tors = {expected}",
            c.d()
        )));
    }
    Ok(diff as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkTable {
    pub flavor: ExtensionFlavor,
    pub over_o: GradedOModule,
    pub over_k: FGraded,
    pub reduced: FGraded,
    /// Extension of `F[d]`; present for perversity `p`.
    pub over_f: Option<FGraded>,
}

pub fn stalk_tables(c: &ConeData, ell: u64) -> Result<Vec<StalkTable>> {
    ExtensionFlavor::CHAIN
        .iter()
        .map(|&flavor| {
            let over_o = extension_stalk(c, flavor, ell)?;
            let over_f = if flavor.is_plus() { None } else { Some(f_extension_stalk(c, flavor, ell)?) };
            Ok(StalkTable {
                flavor,
                over_k: rationalize_stalk(&over_o),
                reduced: reduce_stalk(&over_o, ell)?,
                over_o,
                over_f,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub singularity: String,
    pub ell: u64,
    pub symmetry: SmallGroup,
    pub plain: usize,
    pub per_character: BTreeMap<IrreducibleLabel, usize>,
    /// Stalks omit degrees outside the known window when true.
    pub partial: bool,
    pub stalk_tables: Vec<StalkTable>,
}

/// Decomposition numbers for every modular irreducible of the symmetry group
/// acting on the top torsion `H^d(U)_tors`.
pub fn equivariant_decomposition(
    c: &ConeData,
    g: SmallGroup,
    ell: u64,
) -> Result<DecompositionReport> {
    check_prime(ell)?;
    let e = c.equivariant.get(&c.d()).ok_or(PerverseError::MissingAction(c.d()))?;
    if e.symmetry() != g {
        return Err(PerverseError::GroupMismatch { data: e.symmetry(), requested: g });
    }
    let plain = decomposition_number(c, ell)?;
    let rep = modrep::reduce_mod_l(e, ell)?;
    let per_character = modrep::composition_multiplicities(&rep, g)?;
    let total: usize = per_character.iter().map(|(l, m)| l.dim() * m).sum();
    if total != plain {
        return Err(PerverseError::Internal(format!(
            "sum of dim(rho) d_rho = {total} but plain decomposition number is {plain}"
        )));
    }
    Ok(DecompositionReport {
        singularity: c.label.clone(),
        ell,
        symmetry: g,
        plain,
        per_character,
        partial: c.is_partial(),
        stalk_tables: stalk_tables(c, ell)?,
    })
}

/// Symmetry group recorded in degree `d`, trivial when absent.
pub fn symmetry_of(c: &ConeData) -> SmallGroup {
    c.equivariant.get(&c.d()).map_or(SmallGroup::Trivial, EquivariantAbGroup::symmetry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omodule::OModule;
    use IrreducibleLabel::*;

    fn dd(s: &str) -> DynkinDiagram {
        s.parse().unwrap()
    }

    fn om(rank: usize, torsion: &[u32]) -> OModule {
        OModule::new(rank, torsion.to_vec()).unwrap()
    }

    const PPLUS_IC: ExtensionFlavor = ExtensionFlavor::new(Perversity::PPlus, ExtensionKind::Intermediate);

    #[test]
    fn simple_link_cohomology() {
        let a1 = link_cohomology_simple(dd("A1"), None).unwrap();
        let expect = GradedZModule::from_pairs([
            (0, FinAbGroup::free(1)),
            (2, FinAbGroup::cyclic(2)),
            (3, FinAbGroup::free(1)),
        ])
        .unwrap();
        assert_eq!(a1.link, expect);
        let e8 = link_cohomology_simple(dd("E8"), None).unwrap();
        assert_eq!(
            e8.link,
            GradedZModule::from_pairs([(0, FinAbGroup::free(1)), (3, FinAbGroup::free(1))]).unwrap()
        );
        let d4 = link_cohomology_simple(dd("D4"), None).unwrap();
        assert_eq!(d4.link.get(2), FinAbGroup::new(vec![2, 2], 0).unwrap());
        assert!(link_cohomology_simple(dd("B3"), None).is_err());
    }

    #[test]
    fn minimal_link_windows() {
        let f4 = link_cohomology_minimal(dd("F4")).unwrap();
        assert_eq!(f4.open_dim, 16);
        assert_eq!(f4.link.get(16), FinAbGroup::cyclic(3));
        assert_eq!(f4.completeness, Completeness::Window { lo: 15, hi: 17 });
        let e8 = link_cohomology_minimal(dd("E8")).unwrap();
        assert_eq!(e8.open_dim, 58);
        assert!(e8.link.get(58).is_zero());
        let c5 = link_cohomology_minimal(dd("C5")).unwrap();
        assert_eq!(c5.link.get(c5.d()), FinAbGroup::cyclic(2));
    }

    #[test]
    fn a1_stalks() {
        let a1 = link_cohomology_simple(dd("A1"), None).unwrap();
        let ic = extension_stalk(&a1, ExtensionFlavor::IC, 2).unwrap();
        assert_eq!(ic, GradedOModule::from_pairs([(-2, om(1, &[]))]).unwrap());
        let ic_plus = extension_stalk(&a1, PPLUS_IC, 2).unwrap();
        assert_eq!(ic_plus, GradedOModule::from_pairs([(-2, om(1, &[])), (0, om(0, &[1]))]).unwrap());
        assert_eq!(extension_stalk_integral(&a1, PPLUS_IC).unwrap().to_string(), "{-2: Z, 0: Z/2}");

        let f_ic = f_extension_stalk(&a1, ExtensionFlavor::IC, 2).unwrap();
        assert_eq!(f_ic.iter().collect::<Vec<_>>(), vec![(-2, 1), (-1, 1)]);

        let red = reduce_stalk(&ic_plus, 2).unwrap();
        assert_eq!(red.iter().collect::<Vec<_>>(), vec![(-2, 1), (-1, 1), (0, 1)]);
        // 0 -> p j_!*(F) -> F p+ j_!* -> F (x) P/Q -> 0, dimensions add up
        assert_eq!(red.total_dim(), f_ic.total_dim() + 1);

        assert!(f_extension_stalk(&a1, PPLUS_IC, 2).is_err());
    }

    #[test]
    fn e8_is_f_smooth() {
        let e8 = link_cohomology_simple(dd("E8"), None).unwrap();
        for ell in [2, 3, 5, 7] {
            let f_ic = f_extension_stalk(&e8, ExtensionFlavor::IC, ell).unwrap();
            assert_eq!(f_ic.iter().collect::<Vec<_>>(), vec![(-2, 1)]);
            assert_eq!(decomposition_number(&e8, ell).unwrap(), 0);
        }
    }

    #[test]
    fn coprime_ell_has_no_tor() {
        let a4 = link_cohomology_simple(dd("A4"), None).unwrap();
        for flavor in [ExtensionFlavor::IC, ExtensionFlavor::CHAIN[4]] {
            let o = extension_stalk(&a4, flavor, 3).unwrap();
            assert_eq!(reduce_stalk(&o, 3).unwrap(), f_extension_stalk(&a4, flavor, 3).unwrap());
        }
    }

    #[test]
    fn decomposition_examples() {
        for n in 1..8usize {
            let a = link_cohomology_simple(DynkinDiagram::new(rootsys::Series::A, n).unwrap(), None).unwrap();
            for ell in [2u64, 3, 5, 7] {
                let expect = usize::from((n as u64 + 1).is_multiple_of(ell));
                assert_eq!(decomposition_number(&a, ell).unwrap(), expect, "A{n} ell={ell}");
            }
        }
        let e8 = link_cohomology_minimal(dd("E8")).unwrap();
        assert_eq!(decomposition_number(&e8, 5).unwrap(), 0);
        let d6 = link_cohomology_minimal(dd("D6")).unwrap();
        assert_eq!(decomposition_number(&d6, 2).unwrap(), 2);
    }

    #[test]
    fn equivariant_examples() {
        let g2 = simple_singularity(dd("G2")).unwrap();
        let r = equivariant_decomposition(&g2, SmallGroup::S3, 2).unwrap();
        assert_eq!(r.per_character, BTreeMap::from([(Trivial, 0), (Psi, 1)]));

        let b3 = simple_singularity(dd("B3")).unwrap();
        let r = equivariant_decomposition(&b3, SmallGroup::C2, 3).unwrap();
        assert_eq!(r.per_character, BTreeMap::from([(Trivial, 0), (Sign, 1)]));

        let f4 = simple_singularity(dd("F4")).unwrap();
        let r = equivariant_decomposition(&f4, SmallGroup::C2, 2).unwrap();
        assert_eq!(r.per_character, BTreeMap::from([(Trivial, 0)]));

        assert!(matches!(
            equivariant_decomposition(&f4, SmallGroup::S3, 2),
            Err(PerverseError::GroupMismatch { .. })
        ));
    }

    #[test]
    fn refusal_outside_hypotheses() {
        let mut c = link_cohomology_simple(dd("A1"), None).unwrap();
        c.link.set(1, FinAbGroup::free(1)).unwrap();
        assert!(matches!(decomposition_number(&c, 2), Err(PerverseError::Refused(_))));

        let mut c = link_cohomology_simple(dd("A1"), None).unwrap();
        c.link.set(3, FinAbGroup::new(vec![2], 1).unwrap()).unwrap();
        assert!(matches!(decomposition_number(&c, 2), Err(PerverseError::Refused(_))));
        // the same torsion is invisible at ell = 3
        assert_eq!(decomposition_number(&c, 3).unwrap(), 0);
    }

    #[test]
    fn insufficient_window() {
        let mut c = link_cohomology_minimal(dd("F4")).unwrap();
        c.completeness = Completeness::Window { lo: 15, hi: 16 };
        let star_plus = ExtensionFlavor::new(Perversity::PPlus, ExtensionKind::Star);
        assert!(matches!(extension_stalk(&c, star_plus, 3), Err(PerverseError::InsufficientLink(_))));
        assert!(matches!(decomposition_number(&c, 3), Err(PerverseError::InsufficientLink(_))));
    }

    #[test]
    fn compact_support_sequence() {
        let n = 3;
        let c = rootsys::cartan_matrix(dd("A3"));
        let mut f2 = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                f2[(i, j)] = -c[(i, j)];
            }
        }
        let hc = open_part_compact_cohomology(&[
            IntMatrix::zeros(1, 0),
            IntMatrix::zeros(0, 0),
            f2,
            IntMatrix::zeros(0, 0),
            IntMatrix::zeros(0, 1),
        ])
        .unwrap();
        assert_eq!(hc.get(1), FinAbGroup::free(1));
        assert!(hc.get(2).is_zero());
        assert_eq!(hc.get(3), FinAbGroup::cyclic(4));
        assert_eq!(hc.get(4), FinAbGroup::free(1));
    }
}
