use std::collections::BTreeMap;

use decnum_core::intmat::IntMatrix;
use decnum_core::modrep::{self, IrreducibleLabel, ModularRep, SmallGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Mat = Vec<Vec<u64>>;

fn to_mat(m: &IntMatrix, p: u64) -> Mat {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()).collect()
}

fn from_mat(m: &Mat) -> IntMatrix {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    IntMatrix::from_vec(n, cols, m.iter().flatten().map(|&x| x as i64).collect()).unwrap()
}

fn apply(m: &Mat, v: &[u64], p: u64) -> Vec<u64> {
    m.iter().map(|row| row.iter().zip(v).fold(0, |a, (x, y)| (a + x * y) % p)).collect()
}

fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).fold(0, |acc, (x, r)| (acc + x * r[j]) % p)).collect())
        .collect()
}

fn inv_mod(x: u64, p: u64) -> u64 {
    (1..p).find(|y| x * y % p == 1).expect("unit")
}

/// Row-reduced basis of the span of `vs`.
fn span(vs: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = vs.to_vec();
    let n = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..n {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j]) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Smallest subspace containing `v` and stable under `gens`.
fn generated(v: &[u64], gens: &[Mat], p: u64) -> Vec<Vec<u64>> {
    let mut basis = span(&[v.to_vec()], p);
    loop {
        let mut all = basis.clone();
        for b in &basis {
            for g in gens {
                all.push(apply(g, b, p));
            }
        }
        let next = span(&all, p);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

fn all_vectors(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Coordinates of `v` in the basis `b` (rows), solving by elimination.
fn coords(b: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    let n = v.len();
    let k = b.len();
    // augmented system: sum_i x_i b_i = v, columns are basis vectors
    let mut a: Vec<Vec<u64>> = (0..n).map(|r| {
        let mut row: Vec<u64> = b.iter().map(|bi| bi[r]).collect();
        row.push(v[r]);
        row
    }).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(piv) = (r..n).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..=k {
                    a[i][j] = (a[i][j] + p * p - f * a[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    assert_eq!(pivots.len(), k, "basis is independent");
    let mut x = vec![0; k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = a[row][k];
    }
    x
}

fn identify(g: SmallGroup, gens: &[Mat], sub: &[Vec<u64>], p: u64) -> IrreducibleLabel {
    match sub.len() {
        1 => {
            let image = apply(&gens[0], &sub[0], p);
            let lambda = coords(sub, &image, p)[0];
            if lambda == 1 {
                IrreducibleLabel::Trivial
            } else {
                assert_eq!(lambda, p - 1);
                IrreducibleLabel::Sign
            }
        }
        2 => {
            assert_eq!(g, SmallGroup::S3);
            IrreducibleLabel::Psi
        }
        n => panic!("no simple module of dimension {n}"),
    }
}

/// Composition factors from a chain of submodules, each step a minimal
/// cyclic submodule of the current quotient.
fn oracle(g: SmallGroup, gens: &[Mat], p: u64) -> BTreeMap<IrreducibleLabel, usize> {
    let mut out: BTreeMap<IrreducibleLabel, usize> =
        modrep::irreducible_labels(g, p).into_iter().map(|l| (l, 0)).collect();
    let n = gens[0].len();
    if n == 0 {
        return out;
    }
    let simple = all_vectors(n, p)
        .into_iter()
        .filter(|v| v.iter().any(|&x| x != 0))
        .map(|v| generated(&v, gens, p))
        .min_by_key(Vec::len)
        .unwrap();
    *out.entry(identify(g, gens, &simple, p)).or_insert(0) += 1;
    // extend to a basis; the quotient acts on the complement coordinates
    let mut basis = simple.clone();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        let mut trial = basis.clone();
        trial.push(e.clone());
        if span(&trial, p).len() > basis.len() {
            basis.push(e);
        }
    }
    let k = simple.len();
    let quotient: Vec<Mat> = gens
        .iter()
        .map(|m| {
            let cols: Vec<Vec<u64>> =
                basis[k..].iter().map(|b| coords(&basis, &apply(m, b, p), p)[k..].to_vec()).collect();
            (0..n - k).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
        })
        .collect();
    for (label, m) in oracle(g, &quotient, p) {
        *out.entry(label).or_insert(0) += m;
    }
    out
}

fn block_sum(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![0; n + m]; n + m];
    for i in 0..n {
        out[i][..n].copy_from_slice(&a[i]);
    }
    for i in 0..m {
        out[n + i][n..].copy_from_slice(&b[i]);
    }
    out
}

fn kron(a: &Mat, b: &Mat, p: u64) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![0; n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l] % p;
                }
            }
        }
    }
    out
}

fn int(rows: &[&[i64]], p: u64) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()).collect()
}

/// Indecomposable building blocks for `g` over `F_p`, as generator lists.
fn blocks(g: SmallGroup, p: u64) -> Vec<Vec<Mat>> {
    match g {
        SmallGroup::Trivial => vec![vec![int(&[&[1]], p)]],
        SmallGroup::C2 => {
            let mut v = vec![vec![int(&[&[1]], p)], vec![int(&[&[-1]], p)], vec![int(&[&[0, 1], &[1, 0]], p)]];
            if p == 2 {
                v.push(vec![int(&[&[1, 1], &[0, 1]], p)]);
            }
            v
        }
        SmallGroup::S3 => {
            let psi = vec![int(&[&[-1, 1], &[0, 1]], p), int(&[&[0, -1], &[1, -1]], p)];
            let perm = vec![
                int(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]], p),
                int(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]], p),
            ];
            let sign = vec![int(&[&[-1]], p), int(&[&[1]], p)];
            let twisted: Vec<Mat> = perm.iter().zip(&sign).map(|(a, b)| kron(a, b, p)).collect();
            let psi2: Vec<Mat> = psi.iter().map(|a| kron(a, a, p)).collect();
            vec![vec![int(&[&[1]], p), int(&[&[1]], p)], sign, psi, perm, twisted, psi2]
        }
    }
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize, p: u64) -> (Mat, Mat) {
    loop {
        let m: Mat = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
        if let Some(inv) = modrep::fp::inverse(&from_mat(&m), p) {
            return (m, to_mat(&inv, p));
        }
    }
}

/// Direct sums of blocks with total dimension at most 4.
fn sums(bs: &[Vec<Mat>]) -> Vec<Vec<Mat>> {
    let mut out: Vec<Vec<Mat>> = bs.iter().filter(|b| b[0].len() <= 4).cloned().collect();
    for a in bs {
        for b in bs {
            if a[0].len() + b[0].len() <= 4 {
                out.push(a.iter().zip(b).map(|(x, y)| block_sum(x, y)).collect());
            }
        }
    }
    out
}

fn rep(g: SmallGroup, gens: &[Mat], p: u64) -> ModularRep {
    let used = &gens[..g.generator_names().len()];
    ModularRep::new(p, gens[0].len(), used.iter().map(from_mat).collect()).unwrap()
}

#[test]
fn closed_forms_match_submodule_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0001);
    let cases = [
        (SmallGroup::Trivial, vec![2u64, 3]),
        (SmallGroup::C2, vec![2, 3, 5]),
        (SmallGroup::S3, vec![2, 3, 5]),
    ];
    let mut checked = 0;
    for (g, ells) in cases {
        for p in ells {
            for gens in sums(&blocks(g, p)) {
                let n = gens[0].len();
                for _ in 0..3 {
                    let (q, q_inv) = random_invertible(&mut rng, n, p);
                    let conj: Vec<Mat> = gens.iter().map(|m| mat_mul(&mat_mul(&q, m, p), &q_inv, p)).collect();
                    let r = rep(g, &conj, p);
                    assert!(r.satisfies_relations(g));
                    let got = modrep::composition_multiplicities(&r, g).unwrap();
                    let want = oracle(g, &conj, p);
                    assert_eq!(got, want, "{g} over F_{p}: {conj:?}");
                    let total: usize = got.iter().map(|(l, m)| l.dim() * m).sum();
                    assert_eq!(total, n);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn conjugation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0002);
    for (g, p) in [(SmallGroup::C2, 3u64), (SmallGroup::C2, 2), (SmallGroup::S3, 2), (SmallGroup::S3, 3), (SmallGroup::S3, 7)] {
        for gens in sums(&blocks(g, p)) {
            let r = rep(g, &gens, p);
            let base = modrep::composition_multiplicities(&r, g).unwrap();
            for _ in 0..5 {
                let (q, q_inv) = random_invertible(&mut rng, r.dim, p);
                let c = r.conjugate(&from_mat(&q), &from_mat(&q_inv));
                assert_eq!(modrep::composition_multiplicities(&c, g).unwrap(), base);
            }
        }
    }
}

#[test]
fn mismatched_input_is_rejected() {
    let p = 3;
    let s = from_mat(&int(&[&[0, 1], &[1, 0]], p));
    let r = ModularRep::new(p, 2, vec![s.clone()]).unwrap();
    assert!(modrep::composition_multiplicities(&r, SmallGroup::S3).is_err());
    // t of order 2 violates t^3 = 1
    let bad = ModularRep::new(p, 2, vec![s.clone(), s]).unwrap();
    assert!(modrep::composition_multiplicities(&bad, SmallGroup::S3).is_err());
    assert!(ModularRep::new(4, 1, vec![IntMatrix::identity(1)]).is_err());
}
