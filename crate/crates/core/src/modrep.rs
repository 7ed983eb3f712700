//! Modular representations of the small symmetry groups `1`, `Z/2` and `S3`.
//!
//! Only composition multiplicities (classes in the Grothendieck group) are
//! computed. Each regime uses a closed form: eigenspace dimensions when the
//! group order is invertible, Brauer characters on `l`-regular classes
//! otherwise.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::{self, FinAbGroup, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModRepError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("group {group} expects {expected} generators, got {got}")]
    GeneratorCount { group: SmallGroup, expected: usize, got: usize },
    #[error("generator matrix has wrong shape for dimension {0}")]
    Shape(usize),
    #[error("action violates the defining relations of {0}")]
    RelationsViolated(SmallGroup),
    #[error("non-integral multiplicity solution (internal error)")]
    NonIntegral,
}

pub type Result<T> = std::result::Result<T, ModRepError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SmallGroup {
    Trivial,
    C2,
    S3,
}

impl SmallGroup {
    pub fn order(self) -> u64 {
        match self {
            SmallGroup::Trivial => 1,
            SmallGroup::C2 => 2,
            SmallGroup::S3 => 6,
        }
    }

    /// Generator names: `s` an involution, `t` an element of order 3.
    pub fn generator_names(self) -> &'static [&'static str] {
        match self {
            SmallGroup::Trivial => &[],
            SmallGroup::C2 => &["s"],
            SmallGroup::S3 => &["s", "t"],
        }
    }
}

impl fmt::Display for SmallGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SmallGroup::Trivial => "1",
            SmallGroup::C2 => "Z/2",
            SmallGroup::S3 => "S3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrreducibleLabel {
    #[serde(rename = "1")]
    Trivial,
    #[serde(rename = "eps")]
    Sign,
    #[serde(rename = "psi")]
    Psi,
}

impl IrreducibleLabel {
    pub fn dim(self) -> usize {
        match self {
            IrreducibleLabel::Trivial | IrreducibleLabel::Sign => 1,
            IrreducibleLabel::Psi => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IrreducibleLabel::Trivial => "1",
            IrreducibleLabel::Sign => "eps",
            IrreducibleLabel::Psi => "psi",
        }
    }
}

impl fmt::Display for IrreducibleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Modular irreducibles of `g` over `F_ell`.
pub fn irreducible_labels(g: SmallGroup, ell: u64) -> Vec<IrreducibleLabel> {
    use IrreducibleLabel::*;
    match (g, ell) {
        (SmallGroup::Trivial, _) => vec![Trivial],
        (SmallGroup::C2, 2) => vec![Trivial],
        (SmallGroup::C2, _) => vec![Trivial, Sign],
        (SmallGroup::S3, 2) => vec![Trivial, Psi],
        (SmallGroup::S3, 3) => vec![Trivial, Sign],
        (SmallGroup::S3, _) => vec![Trivial, Sign, Psi],
    }
}

/// A finite abelian group with a small group acting on it through
/// torsion-coordinate matrices (entry `(i, j)` taken modulo divisor `i`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantAbGroup {
    symmetry: SmallGroup,
    group: FinAbGroup,
    action: Vec<IntMatrix>,
}

impl EquivariantAbGroup {
    pub fn new(symmetry: SmallGroup, group: FinAbGroup, mut action: Vec<IntMatrix>) -> Result<Self> {
        let expected = symmetry.generator_names().len();
        if action.len() != expected {
            return Err(ModRepError::GeneratorCount { group: symmetry, expected, got: action.len() });
        }
        let k = group.divisors().len();
        for m in action.iter_mut() {
            if m.rows() != k || m.cols() != k {
                return Err(ModRepError::Shape(k));
            }
            intmat::reduce_mod_divisors(group.divisors(), m);
        }
        let e = EquivariantAbGroup { symmetry, group, action };
        let divisors = e.group.divisors().to_vec();
        let ok = check_relations(symmetry, &e.action, k, |a, b| {
            intmat::compose_mod(&divisors, a, b).expect("small entries")
        }, |m| {
            let mut m = m.clone();
            intmat::reduce_mod_divisors(&divisors, &mut m);
            m
        });
        if !ok {
            return Err(ModRepError::RelationsViolated(symmetry));
        }
        Ok(e)
    }

    /// Trivial action on `group`.
    pub fn trivial(group: FinAbGroup) -> Self {
        EquivariantAbGroup { symmetry: SmallGroup::Trivial, group: group.torsion(), action: Vec::new() }
    }

    pub fn symmetry(&self) -> SmallGroup {
        self.symmetry
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn action(&self) -> &[IntMatrix] {
        &self.action
    }
}

fn check_relations(
    g: SmallGroup,
    gens: &[IntMatrix],
    dim: usize,
    mul: impl Fn(&IntMatrix, &IntMatrix) -> IntMatrix,
    normalize: impl Fn(&IntMatrix) -> IntMatrix,
) -> bool {
    let id = normalize(&IntMatrix::identity(dim));
    match g {
        SmallGroup::Trivial => true,
        SmallGroup::C2 => mul(&gens[0], &gens[0]) == id,
        SmallGroup::S3 => {
            let (s, t) = (&gens[0], &gens[1]);
            let t2 = mul(t, t);
            mul(s, s) == id && mul(&t2, t) == id && mul(&mul(s, t), s) == t2
        }
    }
}

/// A representation of a small group over `F_ell`; entries lie in `[0, ell)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularRep {
    pub ell: u64,
    pub dim: usize,
    pub action: Vec<IntMatrix>,
}

impl ModularRep {
    pub fn new(ell: u64, dim: usize, action: Vec<IntMatrix>) -> Result<Self> {
        if !is_prime(ell) {
            return Err(ModRepError::NotPrime(ell));
        }
        let action = action
            .into_iter()
            .map(|m| {
                if m.rows() != dim || m.cols() != dim {
                    Err(ModRepError::Shape(dim))
                } else {
                    Ok(fp::reduce(&m, ell))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModularRep { ell, dim, action })
    }

    pub fn satisfies_relations(&self, g: SmallGroup) -> bool {
        self.action.len() == g.generator_names().len()
            && check_relations(g, &self.action, self.dim, |a, b| fp::mul(a, b, self.ell), |m| {
                fp::reduce(m, self.ell)
            })
    }

    /// Conjugate every generator by `p` (invertible over `F_ell`).
    pub fn conjugate(&self, p: &IntMatrix, p_inv: &IntMatrix) -> ModularRep {
        let action = self
            .action
            .iter()
            .map(|m| fp::mul(&fp::mul(p, m, self.ell), p_inv, self.ell))
            .collect();
        ModularRep { ell: self.ell, dim: self.dim, action }
    }
}

/// `F_ell (x) e`: the quotient `e / ell e`, on the coordinates whose divisor
/// is divisible by `ell`.
pub fn reduce_mod_l(e: &EquivariantAbGroup, ell: u64) -> Result<ModularRep> {
    if !is_prime(ell) {
        return Err(ModRepError::NotPrime(ell));
    }
    let keep: Vec<usize> = e
        .group
        .divisors()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d % ell == 0)
        .map(|(i, _)| i)
        .collect();
    let dim = keep.len();
    let action = e
        .action
        .iter()
        .map(|m| {
            let mut r = IntMatrix::zeros(dim, dim);
            for (a, &i) in keep.iter().enumerate() {
                for (b, &j) in keep.iter().enumerate() {
                    r[(a, b)] = m[(i, j)].rem_euclid(ell as i64);
                }
            }
            r
        })
        .collect();
    Ok(ModularRep { ell, dim, action })
}

/// Composition multiplicities of `r` in `K_0(F_ell[g])`, one entry per
/// modular irreducible of `g`.
pub fn composition_multiplicities(
    r: &ModularRep,
    g: SmallGroup,
) -> Result<BTreeMap<IrreducibleLabel, usize>> {
    use IrreducibleLabel::*;
    let expected = g.generator_names().len();
    if r.action.len() != expected {
        return Err(ModRepError::GeneratorCount { group: g, expected, got: r.action.len() });
    }
    if !r.satisfies_relations(g) {
        return Err(ModRepError::RelationsViolated(g));
    }
    let p = r.ell;
    let n = r.dim;
    let id = IntMatrix::identity(n);
    let nullity_of = |m: &IntMatrix| n - fp::rank(m, p);
    let mut out = BTreeMap::new();
    match (g, p) {
        (SmallGroup::Trivial, _) | (SmallGroup::C2, 2) => {
            out.insert(Trivial, n);
        }
        (SmallGroup::C2, _) => {
            let s = &r.action[0];
            let plus = nullity_of(&fp::sub(s, &id, p));
            let minus = nullity_of(&fp::add(s, &id, p));
            if plus + minus != n {
                return Err(ModRepError::NonIntegral);
            }
            out.insert(Trivial, plus);
            out.insert(Sign, minus);
        }
        (SmallGroup::S3, 3) => {
            // Brauer character at the transposition; 3-regular classes are {e, s}.
            let s = &r.action[0];
            let plus = nullity_of(&fp::sub(s, &id, p)) as i64;
            let minus = nullity_of(&fp::add(s, &id, p)) as i64;
            let phi = plus - minus;
            let (m1, me) = (n as i64 + phi, n as i64 - phi);
            if m1 % 2 != 0 || m1 < 0 || me < 0 {
                return Err(ModRepError::NonIntegral);
            }
            out.insert(Trivial, (m1 / 2) as usize);
            out.insert(Sign, (me / 2) as usize);
        }
        (SmallGroup::S3, 2) => {
            // Brauer character at the 3-cycle: x - 1 factors lift to 1,
            // x^2 + x + 1 factors to w + w^2 = -1.
            let t = &r.action[1];
            let fixed = nullity_of(&fp::sub(t, &id, p));
            let t2 = fp::mul(t, t, p);
            let cyclotomic = nullity_of(&fp::add(&fp::add(&t2, t, p), &id, p));
            if fixed + cyclotomic != n || cyclotomic % 2 != 0 {
                return Err(ModRepError::NonIntegral);
            }
            let beta = fixed as i64 - (cyclotomic / 2) as i64;
            // m1 + 2 m_psi = n, m1 - m_psi = beta
            let three_psi = n as i64 - beta;
            if three_psi % 3 != 0 || three_psi < 0 {
                return Err(ModRepError::NonIntegral);
            }
            let m_psi = three_psi / 3;
            out.insert(Trivial, (beta + m_psi) as usize);
            out.insert(Psi, m_psi as usize);
        }
        (SmallGroup::S3, _) => {
            let (s, t) = (&r.action[0], &r.action[1]);
            let t2 = fp::mul(t, t, p);
            let rotations = [id.clone(), t.clone(), t2.clone()];
            let reflections: Vec<IntMatrix> = rotations.iter().map(|x| fp::mul(s, x, p)).collect();
            let mut sum = IntMatrix::zeros(n, n);
            let mut signed = IntMatrix::zeros(n, n);
            for x in &rotations {
                sum = fp::add(&sum, x, p);
                signed = fp::add(&signed, x, p);
            }
            for x in &reflections {
                sum = fp::add(&sum, x, p);
                signed = fp::sub(&signed, x, p);
            }
            // 1/6 is a unit, so these have the ranks of the isotypic idempotents.
            let m1 = fp::rank(&sum, p);
            let me = fp::rank(&signed, p);
            let rest = n.checked_sub(m1 + me).ok_or(ModRepError::NonIntegral)?;
            if rest % 2 != 0 {
                return Err(ModRepError::NonIntegral);
            }
            out.insert(Trivial, m1);
            out.insert(Sign, me);
            out.insert(Psi, rest / 2);
        }
    }
    for label in irreducible_labels(g, p) {
        out.entry(label).or_insert(0);
    }
    Ok(out)
}

/// Dense linear algebra over `F_p` on `IntMatrix` values with entries in `[0, p)`.
pub mod fp {
    use crate::intmat::IntMatrix;

    pub fn reduce(m: &IntMatrix, p: u64) -> IntMatrix {
        let p = p as i64;
        let entries = m.entries().iter().map(|x| x.rem_euclid(p)).collect();
        IntMatrix::from_vec(m.rows(), m.cols(), entries).expect("same shape")
    }

    pub fn add(a: &IntMatrix, b: &IntMatrix, p: u64) -> IntMatrix {
        zip(a, b, p, |x, y| x + y)
    }

    pub fn sub(a: &IntMatrix, b: &IntMatrix, p: u64) -> IntMatrix {
        zip(a, b, p, |x, y| x - y)
    }

    fn zip(a: &IntMatrix, b: &IntMatrix, p: u64, f: impl Fn(i64, i64) -> i64) -> IntMatrix {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        let entries = a
            .entries()
            .iter()
            .zip(b.entries())
            .map(|(&x, &y)| f(x, y).rem_euclid(p as i64))
            .collect();
        IntMatrix::from_vec(a.rows(), a.cols(), entries).expect("same shape")
    }

    pub fn mul(a: &IntMatrix, b: &IntMatrix, p: u64) -> IntMatrix {
        assert_eq!(a.cols(), b.rows());
        let p = p as i64;
        let mut out = IntMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let x = a[(i, k)].rem_euclid(p);
                if x == 0 {
                    continue;
                }
                for j in 0..b.cols() {
                    out[(i, j)] = (out[(i, j)] + x * b[(k, j)].rem_euclid(p)) % p;
                }
            }
        }
        out
    }

    pub fn inverse_scalar(x: i64, p: u64) -> i64 {
        let p = p as i64;
        let mut result = 1i64;
        let mut base = x.rem_euclid(p);
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    }

    pub fn rank(m: &IntMatrix, p: u64) -> usize {
        let pi = p as i64;
        let mut a = reduce(m, p);
        let (rows, cols) = (a.rows(), a.cols());
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows).find(|&i| a[(i, c)] != 0) else { continue };
            for j in 0..cols {
                let tmp = a[(r, j)];
                a[(r, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            let inv = inverse_scalar(a[(r, c)], p);
            for i in 0..rows {
                if i != r && a[(i, c)] != 0 {
                    let f = a[(i, c)] * inv % pi;
                    for j in 0..cols {
                        a[(i, j)] = (a[(i, j)] - f * a[(r, j)]).rem_euclid(pi);
                    }
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }

    /// Inverse over `F_p`, `None` when singular.
    pub fn inverse(m: &IntMatrix, p: u64) -> Option<IntMatrix> {
        let n = m.rows();
        let pi = p as i64;
        let mut a = reduce(m, p);
        let mut inv = IntMatrix::identity(n);
        for c in 0..n {
            let piv = (c..n).find(|&i| a[(i, c)] != 0)?;
            for j in 0..n {
                let t = a[(c, j)];
                a[(c, j)] = a[(piv, j)];
                a[(piv, j)] = t;
                let t = inv[(c, j)];
                inv[(c, j)] = inv[(piv, j)];
                inv[(piv, j)] = t;
            }
            let s = inverse_scalar(a[(c, c)], p);
            for j in 0..n {
                a[(c, j)] = a[(c, j)] * s % pi;
                inv[(c, j)] = inv[(c, j)] * s % pi;
            }
            for i in 0..n {
                if i != c && a[(i, c)] != 0 {
                    let f = a[(i, c)];
                    for j in 0..n {
                        a[(i, j)] = (a[(i, j)] - f * a[(c, j)]).rem_euclid(pi);
                        inv[(i, j)] = (inv[(i, j)] - f * inv[(c, j)]).rem_euclid(pi);
                    }
                }
            }
        }
        Some(inv)
    }
}
