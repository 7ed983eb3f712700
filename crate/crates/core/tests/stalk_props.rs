use std::collections::{BTreeMap, BTreeSet};

use decnum_core::intmat::FinAbGroup;
use decnum_core::modrep::EquivariantAbGroup;
use decnum_core::omodule::{self, FgModule, GradedOModule, GradedZModule, OModule};
use decnum_core::perverse::{self, Completeness, ConeData, ExtensionFlavor};
use decnum_core::rootsys::{self, DynkinDiagram, Series};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn omodule_strategy() -> impl Strategy<Value = OModule> {
    (0usize..6, prop::collection::vec(1u32..6, 0..6)).prop_map(|(r, t)| OModule::new(r, t).unwrap())
}

fn graded_strategy() -> impl Strategy<Value = GradedOModule> {
    prop::collection::btree_map(-8i32..8, omodule_strategy(), 0..6)
        .prop_map(|m| GradedOModule::from_pairs(m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn derived_reduction_keeps_euler_characteristic(m in omodule_strategy()) {
        let (h_minus1, h0) = omodule::derived_tensor_f(&m);
        prop_assert_eq!(h0 as i64 - h_minus1 as i64, m.rank() as i64);
        prop_assert_eq!(omodule::tensor_k(&m), m.rank());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn truncation_chain(g in graded_strategy(), n in -9i32..9) {
        let a = g.truncate(n, false);
        let b = g.truncate(n, true);
        let c = g.truncate(n + 1, false);
        prop_assert!(a.weakly_below(&b));
        prop_assert!(b.weakly_below(&c));
        prop_assert!(c.weakly_below(&g));
    }

    #[test]
    fn truncation_above_support_is_identity(g in graded_strategy()) {
        let top = g.max_degree().unwrap_or(0);
        prop_assert_eq!(g.truncate(top, false), g.clone());
        prop_assert_eq!(g.truncate(top, true), g);
    }

    #[test]
    fn reduction_against_truncation(g in graded_strategy(), n in -9i32..9) {
        // F (x)^L tau<=n+ and tau<=n of F (x)^L differ by t_{n+1} in degree n+1 only
        let a = omodule::reduce_graded(&g.truncate(n, true)).unwrap();
        let b = omodule::reduce_graded(&g).unwrap().truncate(n);
        let t_next = g.get(n + 1).torsion_count();
        for deg in -12..12 {
            let expected = b.dim(deg) + if deg == n + 1 { t_next } else { 0 };
            prop_assert_eq!(a.dim(deg), expected, "degree {}", deg);
        }
    }

    #[test]
    fn poincare_dual_is_an_involution(g in graded_strategy(), r in 0i32..8) {
        let twice = g.poincare_dual(r).unwrap().poincare_dual(r).unwrap();
        prop_assert_eq!(twice, g);
    }
}

fn random_group(rng: &mut ChaCha8Rng, allow_free: bool, allow_torsion: bool) -> FinAbGroup {
    let mut orders = Vec::new();
    if allow_free {
        for _ in 0..rng.gen_range(0..3) {
            orders.push(0);
        }
    }
    if allow_torsion {
        for _ in 0..rng.gen_range(0..3) {
            orders.push(*[2u64, 3, 4, 5, 6, 8, 9, 12, 25, 27].get(rng.gen_range(0..10)).unwrap());
        }
    }
    FinAbGroup::from_cyclic_factors(&orders).unwrap()
}

/// Random cone: `open_dim` in `1..=8`, link cohomology in degrees `0..=2d`.
/// With `hypotheses`, `H^{d-1} = 0`, `H^{d+1}` is torsion-free and `H^d` finite.
fn random_cone(rng: &mut ChaCha8Rng, hypotheses: bool) -> ConeData {
    let d = rng.gen_range(1..=8i32);
    let mut link = GradedZModule::new();
    for deg in 0..=2 * d {
        let g = if hypotheses && deg == d - 1 {
            FinAbGroup::trivial()
        } else if hypotheses && deg == d + 1 {
            random_group(rng, true, false)
        } else if hypotheses && deg == d {
            random_group(rng, false, true)
        } else {
            random_group(rng, true, true)
        };
        link.set(deg, g).unwrap();
    }
    let mut equivariant = BTreeMap::new();
    equivariant.insert(d, EquivariantAbGroup::trivial(link.get(d)));
    ConeData {
        label: format!("random-{d}"),
        open_dim: d as u32,
        link,
        completeness: Completeness::Full,
        rank_unknown: BTreeSet::new(),
        equivariant,
    }
}

#[test]
fn chain_monotonicity_on_random_cones() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xface_0001);
    for _ in 0..200 {
        let c = random_cone(&mut rng, false);
        for ell in [2u64, 3, 5] {
            let stalks: Vec<GradedOModule> = ExtensionFlavor::CHAIN
                .iter()
                .map(|&f| perverse::extension_stalk(&c, f, ell).unwrap())
                .collect();
            for w in stalks.windows(2) {
                assert!(w[0].weakly_below(&w[1]), "{}: {} then {}", c.label, w[0], w[1]);
            }
            // integral stalks refine the l-local ones
            for &f in &ExtensionFlavor::CHAIN {
                let z = perverse::extension_stalk_integral(&c, f).unwrap();
                assert_eq!(z.localize(ell), perverse::extension_stalk(&c, f, ell).unwrap());
            }
        }
    }
}

#[test]
fn collapse_identities_under_hypotheses() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xface_0002);
    let [pl, ppl, pic, ppic, pst, ppst] = ExtensionFlavor::CHAIN;
    for _ in 0..200 {
        let c = random_cone(&mut rng, true);
        for ell in [2u64, 3, 5, 7] {
            let s = |f| perverse::extension_stalk(&c, f, ell).unwrap();
            assert_eq!(s(pl), s(ppl), "{}", c.label);
            assert_eq!(s(ppl), s(pic), "{}", c.label);
            assert_eq!(s(ppic), s(pst), "{}", c.label);
            assert_eq!(s(pst), s(ppst), "{}", c.label);
            // Euler characteristic extraction agrees with the torsion count
            let n = perverse::decomposition_number(&c, ell).unwrap();
            assert_eq!(n, c.link_over_o(ell).get(c.d()).torsion_count());
        }
    }
}

#[test]
fn collapse_needs_its_hypotheses() {
    // H^{d+1} with torsion separates p j_* from p+ j_*
    let mut link = GradedZModule::new();
    link.set(0, FinAbGroup::free(1)).unwrap();
    link.set(3, FinAbGroup::cyclic(2)).unwrap();
    let c = ConeData {
        label: "t".into(),
        open_dim: 2,
        link,
        completeness: Completeness::Full,
        rank_unknown: BTreeSet::new(),
        equivariant: BTreeMap::new(),
    };
    let [_, _, _, _, pst, ppst] = ExtensionFlavor::CHAIN;
    assert_ne!(perverse::extension_stalk(&c, pst, 2).unwrap(), perverse::extension_stalk(&c, ppst, 2).unwrap());
    assert!(perverse::decomposition_number(&c, 2).is_err());
    // invisible away from 2
    assert!(perverse::decomposition_number(&c, 3).is_ok());
}

fn dd(s: Series, n: usize) -> DynkinDiagram {
    DynkinDiagram::new(s, n).unwrap()
}

fn subregular_grid() -> Vec<DynkinDiagram> {
    let mut v = Vec::new();
    for n in 2..=8 {
        v.push(dd(Series::B, n));
        v.push(dd(Series::C, n));
    }
    v.push(dd(Series::F, 4));
    v.push(dd(Series::G, 2));
    v
}

#[test]
fn equivariant_and_plain_agree_on_subregular_grid() {
    for gamma in subregular_grid() {
        let c = perverse::simple_singularity(gamma).unwrap();
        let g = perverse::symmetry_of(&c);
        for ell in [2u64, 3, 5] {
            let r = perverse::equivariant_decomposition(&c, g, ell).unwrap();
            let total: usize = r.per_character.iter().map(|(l, m)| l.dim() * m).sum();
            assert_eq!(total, r.plain, "{gamma} at {ell}");
            assert_eq!(r.plain, perverse::decomposition_number(&c, ell).unwrap());
        }
    }
}

#[test]
fn simple_singularities_are_rationally_smooth() {
    for d in rootsys::all_diagrams(10) {
        let c = perverse::simple_singularity(d).unwrap();
        for ell in [2u64, 3, 5, 7] {
            for f in ExtensionFlavor::CHAIN.iter().filter(|f| !f.is_plus()) {
                let k = perverse::rationalize_stalk(&perverse::extension_stalk(&c, *f, ell).unwrap());
                assert_eq!(k.iter().collect::<Vec<_>>(), vec![(-2, 1)], "{d} {f}");
            }
        }
    }
}

#[test]
fn f_side_sequence_accounts_for_top_torsion() {
    // reduce(O-IC) and F-IC differ in total Euler characteristic by dim F (x) H^d_tors
    for d in rootsys::all_diagrams(10) {
        let c = perverse::simple_singularity(d).unwrap();
        for ell in [2u64, 3, 5, 7] {
            let o = perverse::reduce_stalk(&perverse::extension_stalk(&c, ExtensionFlavor::IC, ell).unwrap(), ell).unwrap();
            let f = perverse::f_extension_stalk(&c, ExtensionFlavor::IC, ell).unwrap();
            let top = c.link.get(c.d()).l_rank(ell) as i64;
            assert_eq!(o.euler_characteristic() - f.euler_characteristic(), top, "{d} at {ell}");
        }
    }
}
