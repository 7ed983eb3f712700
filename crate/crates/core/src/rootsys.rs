//! Dynkin diagrams, Cartan matrices and root systems.
//!
//! Conventions:
//!
//! * Cartan matrix entries are `C[i][j] = 2 (a_i, a_j) / (a_j, a_j)`, so for
//!   `G2` (with `a_1` short) `C = [[2, -1], [-3, 2]]`.
//! * Nodes are numbered as in Bourbaki, 1-based in prose and 0-based in code.
//!   For `B_n` the last simple root is short, for `C_n` it is long, for `F4`
//!   the roots `a_3`, `a_4` are short, for `E_n` node 2 hangs off node 4.
//! * With this convention the simple root `a_j` has fundamental-weight
//!   coordinates given by row `j` of `C`, so `P/Q = coker(C^T)` and
//!   `P^v/Q^v = coker(C)`.
//!
//! All foldings land in simply-laced diagrams, where `C` is symmetric and the
//! two conventions agree.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::{self, Cokernel, FinAbGroup, IntMatError, IntMatrix};
use crate::modrep::{EquivariantAbGroup, SmallGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSysError {
    #[error("inadmissible Dynkin type {series}{rank}")]
    Inadmissible { series: char, rank: usize },
    #[error("unknown Dynkin series {0:?}")]
    UnknownSeries(String),
    #[error("not a Cartan matrix: {0}")]
    NotCartan(String),
    #[error("root closure exceeded {0} roots; not of finite type")]
    NotFinite(usize),
    #[error(transparent)]
    IntMat(#[from] IntMatError),
}

pub type Result<T> = std::result::Result<T, RootSysError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

impl FromStr for Series {
    type Err = RootSysError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            _ => Err(RootSysError::UnknownSeries(s.to_string())),
        }
    }
}

/// An irreducible Dynkin diagram. Construction validates admissibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct DynkinDiagram {
    series: Series,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    series: Series,
    rank: usize,
}

impl TryFrom<DiagramRepr> for DynkinDiagram {
    type Error = RootSysError;

    fn try_from(r: DiagramRepr) -> Result<Self> {
        DynkinDiagram::new(r.series, r.rank)
    }
}

impl From<DynkinDiagram> for DiagramRepr {
    fn from(d: DynkinDiagram) -> Self {
        DiagramRepr { series: d.series, rank: d.rank }
    }
}

impl DynkinDiagram {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(DynkinDiagram { series, rank })
        } else {
            Err(RootSysError::Inadmissible { series: series.letter(), rank })
        }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.series, Series::A | Series::D | Series::E)
    }

    /// Unoriented edges with their multiplicity, 0-based.
    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.series {
            Series::A | Series::B | Series::C => (0..n - 1).map(|i| (i, i + 1)).collect(),
            Series::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
            Series::E => {
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
            Series::F => vec![(0, 1), (1, 2), (2, 3)],
            Series::G => vec![(0, 1)],
        }
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for DynkinDiagram {
    type Err = RootSysError;

    /// Parses labels such as `E8`, `a5`, `D10`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let series: Series = head.parse()?;
        let rank = tail
            .parse::<usize>()
            .map_err(|_| RootSysError::UnknownSeries(s.to_string()))?;
        DynkinDiagram::new(series, rank)
    }
}

pub fn cartan_matrix(d: DynkinDiagram) -> IntMatrix {
    let n = d.rank;
    let mut c = IntMatrix::identity(n);
    for i in 0..n {
        c[(i, i)] = 2;
    }
    for (i, j) in d.edges() {
        c[(i, j)] = -1;
        c[(j, i)] = -1;
    }
    match d.series {
        // a_n short
        Series::B => c[(n - 2, n - 1)] = -2,
        // a_n long
        Series::C => c[(n - 1, n - 2)] = -2,
        // a_2 long, a_3 short
        Series::F => c[(1, 2)] = -2,
        // a_1 short, a_2 long
        Series::G => c[(1, 0)] = -3,
        _ => {}
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootLength {
    Long,
    Short,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystemData {
    pub cartan: IntMatrix,
    /// Roots in simple-root coordinates, positive roots first by height then
    /// lexicographically, followed by their negatives in the same order.
    pub roots: Vec<Vec<i64>>,
    pub root_lengths: Vec<RootLength>,
    pub highest_root: Vec<i64>,
    pub dual_coxeter: u64,
    /// `(a_i, a_i)`, scaled so the shortest simple root has the smallest
    /// integer value compatible with symmetrization.
    pub simple_root_norms: Vec<i64>,
}

impl RootSystemData {
    pub fn rank(&self) -> usize {
        self.cartan.rows()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.roots.iter().filter(|r| r.iter().all(|&x| x >= 0))
    }

    /// `2 (x, y)` for vectors in simple-root coordinates.
    pub fn twice_inner_product(&self, x: &[i64], y: &[i64]) -> i64 {
        twice_inner(&self.cartan, &self.simple_root_norms, x, y)
    }
}

/// `2 (x, y) = sum x_i y_j C_ij |a_j|^2`
fn twice_inner(cartan: &IntMatrix, norms: &[i64], x: &[i64], y: &[i64]) -> i64 {
    let n = norms.len();
    let mut twice = 0;
    for i in 0..n {
        for j in 0..n {
            twice += x[i] * y[j] * cartan[(i, j)] * norms[j];
        }
    }
    twice
}

const ROOT_LIMIT: usize = 20_000;

fn check_cartan(c: &IntMatrix) -> Result<()> {
    if !c.is_square() || c.rows() == 0 {
        return Err(RootSysError::NotCartan("must be square and nonempty".into()));
    }
    let n = c.rows();
    for i in 0..n {
        if c[(i, i)] != 2 {
            return Err(RootSysError::NotCartan(format!("diagonal entry {i} is not 2")));
        }
        for j in 0..n {
            if i != j && (c[(i, j)] > 0 || (c[(i, j)] == 0) != (c[(j, i)] == 0)) {
                return Err(RootSysError::NotCartan(format!("bad off-diagonal pair ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Norms `|a_i|^2` with `C_ij |a_j|^2 = C_ji |a_i|^2`, minimal positive integers.
fn symmetrize(c: &IntMatrix) -> Result<Vec<i64>> {
    let n = c.rows();
    let mut norm: Vec<Option<i64>> = vec![None; n];
    let mut scaled: Vec<i64> = vec![0; n];
    for start in 0..n {
        if norm[start].is_some() {
            continue;
        }
        norm[start] = Some(1);
        scaled[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if i == j || c[(i, j)] == 0 {
                    continue;
                }
                // |a_j|^2 = C_ji |a_i|^2 / C_ij
                let num = c[(j, i)] * scaled[i];
                let den = c[(i, j)];
                match norm[j] {
                    Some(_) => {
                        if scaled[j] * den != num {
                            return Err(RootSysError::NotCartan("not symmetrizable".into()));
                        }
                    }
                    None => {
                        if num % den != 0 {
                            let k = den.abs() / gcd(num.abs(), den.abs());
                            for s in scaled.iter_mut() {
                                *s *= k;
                            }
                        }
                        scaled[j] = c[(j, i)] * scaled[i] / c[(i, j)];
                        norm[j] = Some(scaled[j]);
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    let g = scaled.iter().fold(0, |acc, &x| gcd(acc, x));
    Ok(scaled.into_iter().map(|x| x / g).collect())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Full root system by reflection closure of the simple roots.
pub fn generate_roots(cartan: &IntMatrix) -> Result<RootSystemData> {
    check_cartan(cartan)?;
    let n = cartan.rows();
    let norms = symmetrize(cartan)?;

    let simple: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut seen: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut queue: VecDeque<Vec<i64>> = simple.into_iter().collect();
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            // <beta, a_i^v> = sum_j beta_j C_ji
            let pairing: i64 = (0..n).map(|j| beta[j] * cartan[(j, i)]).sum();
            let mut image = beta.clone();
            image[i] -= pairing;
            if seen.insert(image.clone()) {
                if seen.len() > ROOT_LIMIT {
                    return Err(RootSysError::NotFinite(ROOT_LIMIT));
                }
                queue.push_back(image);
            }
        }
    }
    let mut positive: Vec<Vec<i64>> =
        seen.iter().filter(|r| r.iter().all(|&x| x >= 0)).cloned().collect();
    positive.sort_by(|a, b| {
        let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    if positive.len() * 2 != seen.len() {
        return Err(RootSysError::NotCartan("roots are not split into positive and negative".into()));
    }
    let mut roots = positive.clone();
    roots.extend(positive.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));

    let lens: Vec<i64> = roots.iter().map(|r| twice_inner(cartan, &norms, r, r)).collect();
    let max_len = *lens.iter().max().expect("nonempty");
    let root_lengths = lens
        .iter()
        .map(|&l| if l == max_len { RootLength::Long } else { RootLength::Short })
        .collect();

    let highest_root = positive.last().cloned().expect("nonempty");
    if !roots.iter().all(|r| r.iter().zip(&highest_root).all(|(x, h)| x <= h)) {
        return Err(RootSysError::NotCartan("no dominating highest root (reducible?)".into()));
    }
    // h^v = 1 + sum c_i |a_i|^2 / |theta|^2
    let theta_norm = twice_inner(cartan, &norms, &highest_root, &highest_root);
    let weighted: i64 = highest_root.iter().zip(&norms).map(|(c, l)| 2 * c * l).sum();
    if weighted % theta_norm != 0 {
        return Err(RootSysError::NotCartan("non-integral dual Coxeter number".into()));
    }
    let dual_coxeter = 1 + (weighted / theta_norm) as u64;

    Ok(RootSystemData {
        cartan: cartan.clone(),
        roots,
        root_lengths,
        highest_root,
        dual_coxeter,
        simple_root_norms: norms,
    })
}

pub fn root_system(d: DynkinDiagram) -> RootSystemData {
    generate_roots(&cartan_matrix(d)).expect("Dynkin diagrams are of finite type")
}

/// `P/Q` (or `P^v/Q^v` when `dual`) with its coordinate data.
pub fn fundamental_group(d: DynkinDiagram, dual: bool) -> Result<Cokernel> {
    Ok(intmat::cokernel(&root_lattice_in_weights(d, dual))?)
}

/// Columns are simple roots (coroots when `dual`) in the fundamental
/// weight (coweight) basis.
pub fn root_lattice_in_weights(d: DynkinDiagram, dual: bool) -> IntMatrix {
    let c = cartan_matrix(d);
    if dual {
        c
    } else {
        c.transpose()
    }
}

/// Simple reflection `s_i` acting on the fundamental weight basis.
pub fn simple_reflection_on_weights(d: DynkinDiagram, i: usize) -> IntMatrix {
    let m = root_lattice_in_weights(d, false);
    let n = d.rank;
    let mut s = IntMatrix::identity(n);
    // s_i(w_j) = w_j - delta_ij a_i
    for k in 0..n {
        s[(k, i)] -= m[(k, i)];
    }
    s
}

/// Subdiagram spanned by the long simple roots.
pub fn long_root_subsystem(d: DynkinDiagram) -> DynkinDiagram {
    let n = d.rank;
    let (series, rank) = match d.series {
        Series::A | Series::D | Series::E => (d.series, n),
        Series::B => (Series::A, n - 1),
        Series::C | Series::G => (Series::A, 1),
        Series::F => (Series::A, 2),
    };
    DynkinDiagram::new(series, rank).expect("long root subsystems are admissible")
}

/// Long simple roots by index, computed from root norms.
pub fn long_simple_roots(d: DynkinDiagram) -> BTreeSet<usize> {
    let norms = symmetrize(&cartan_matrix(d)).expect("Dynkin diagrams are symmetrizable");
    let max = *norms.iter().max().expect("nonempty");
    (0..d.rank).filter(|&i| norms[i] == max).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldingDatum {
    pub gamma: DynkinDiagram,
    pub gamma_hat: DynkinDiagram,
    pub symmetry: SmallGroup,
    /// Node permutations of `gamma_hat` (0-based): `C2` has one generator,
    /// `S3` has a transposition then a 3-cycle.
    pub generators: Vec<Vec<usize>>,
    /// Finite subgroups `H` and `H^` of `SL_2` realizing the symmetric singularity.
    pub quotient_groups: (String, String),
}

pub fn folding(d: DynkinDiagram) -> FoldingDatum {
    let n = d.rank;
    let hat = |s, r| DynkinDiagram::new(s, r).expect("folding targets are admissible");
    match d.series {
        Series::B => {
            let m = 2 * n - 1;
            FoldingDatum {
                gamma: d,
                gamma_hat: hat(Series::A, m),
                symmetry: SmallGroup::C2,
                generators: vec![(0..m).rev().collect()],
                quotient_groups: (format!("cyclic C{}", 2 * n), format!("binary dihedral D{}", 4 * n)),
            }
        }
        // D3 is A3; C2 is B2
        Series::C if n == 2 => FoldingDatum { gamma: d, ..folding(hat(Series::B, 2)) },
        Series::C => {
            let mut flip: Vec<usize> = (0..=n).collect();
            flip.swap(n - 1, n);
            FoldingDatum {
                gamma: d,
                gamma_hat: hat(Series::D, n + 1),
                symmetry: SmallGroup::C2,
                generators: vec![flip],
                quotient_groups: (
                    format!("binary dihedral D{}", 4 * (n - 1)),
                    format!("binary dihedral D{}", 8 * (n - 1)),
                ),
            }
        }
        Series::F => FoldingDatum {
            gamma: d,
            gamma_hat: hat(Series::E, 6),
            symmetry: SmallGroup::C2,
            // 1<->6, 3<->5, 2 and 4 fixed
            generators: vec![vec![5, 1, 4, 3, 2, 0]],
            quotient_groups: ("binary tetrahedral T".into(), "binary octahedral O".into()),
        },
        Series::G => FoldingDatum {
            gamma: d,
            gamma_hat: hat(Series::D, 4),
            symmetry: SmallGroup::S3,
            // (1 3) and (1 3 4) on the outer nodes; node 2 is central
            generators: vec![vec![2, 1, 0, 3], vec![2, 1, 3, 0]],
            quotient_groups: ("binary dihedral D8".into(), "binary octahedral O".into()),
        },
        Series::A | Series::D | Series::E => FoldingDatum {
            gamma: d,
            gamma_hat: d,
            symmetry: SmallGroup::Trivial,
            generators: Vec::new(),
            quotient_groups: ("H".into(), "H".into()),
        },
    }
}

/// Whether `perm` is an automorphism of the Cartan matrix of `d`.
pub fn is_diagram_automorphism(d: DynkinDiagram, perm: &[usize]) -> bool {
    let c = cartan_matrix(d);
    let n = d.rank;
    perm.len() == n
        && (0..n).all(|i| (0..n).all(|j| c[(perm[i], perm[j])] == c[(i, j)]))
}

/// `P(Γ^)/Q(Γ^)` with the action of the folding symmetry group.
pub fn symmetry_action_on_fundamental_group(f: &FoldingDatum) -> Result<EquivariantAbGroup> {
    let m = root_lattice_in_weights(f.gamma_hat, false);
    let coker = intmat::cokernel(&m)?;
    let mut action = Vec::with_capacity(f.generators.len());
    for perm in &f.generators {
        let g = IntMatrix::permutation(perm);
        action.push(intmat::induced_on_cokernel(&coker, &m, &g)?);
    }
    Ok(EquivariantAbGroup::new(f.symmetry, coker.group.torsion(), action)
        .expect("diagram automorphisms satisfy the group relations"))
}

/// `P/Q` with the trivial group acting.
pub fn fundamental_group_plain(d: DynkinDiagram, dual: bool) -> Result<FinAbGroup> {
    Ok(fundamental_group(d, dual)?.group)
}

/// All admissible diagrams with rank at most `max_rank`.
pub fn all_diagrams(max_rank: usize) -> Vec<DynkinDiagram> {
    let mut out = Vec::new();
    for series in [Series::A, Series::B, Series::C, Series::D, Series::E, Series::F, Series::G] {
        for rank in 1..=max_rank {
            if let Ok(d) = DynkinDiagram::new(series, rank) {
                out.push(d);
            }
        }
    }
    out
}
