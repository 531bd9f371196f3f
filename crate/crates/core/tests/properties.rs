use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use reedy_core::sset::{
    discrete, enumerate_maps, fibration_check, horn, indiscrete_nerve, point, product, pullback, standard_simplex,
    Exponential, Simplex, SSet, SSetMap,
};

const M: usize = 2;

fn pool() -> Vec<(&'static str, Arc<SSet>)> {
    vec![
        ("point", Arc::new(point(M))),
        ("Δ[1]", Arc::new(standard_simplex(1, M))),
        ("Δ[2]", Arc::new(standard_simplex(2, M))),
        ("N(2)", Arc::new(indiscrete_nerve(2, M).unwrap())),
        ("N(3)", Arc::new(indiscrete_nerve(3, M).unwrap())),
        ("two points", Arc::new(discrete(2, M))),
        ("horn(2,1)", horn(2, 1, M).unwrap().0),
    ]
}

/// Small sets only, so hom enumeration stays quick.
fn small(k: usize) -> impl Strategy<Value = Arc<SSet>> {
    let p: Vec<Arc<SSet>> = pool().into_iter().map(|(_, x)| x).filter(|x| x.level_size(M) <= k).collect();
    prop::sample::select(p)
}

/// `x` with its simplices renumbered by `perm`, and the isomorphism onto it.
fn relabel(x: &Arc<SSet>, perm: &[Vec<usize>]) -> (Arc<SSet>, SSetMap) {
    let sizes = x.level_sizes();
    let mut names = Vec::new();
    let mut faces = vec![Vec::new()];
    let mut degens = Vec::new();
    for n in 0..=M {
        let mut inv = vec![0; sizes[n]];
        for (a, &b) in perm[n].iter().enumerate() {
            inv[b] = a as Simplex;
        }
        names.push(inv.iter().map(|&a| x.name(n, a).into_owned()).collect());
        if n > 0 {
            faces.push((0..=n).map(|i| inv.iter().map(|&a| perm[n - 1][x.face(n, i, a) as usize] as Simplex).collect()).collect());
        }
        degens.push(if n < M {
            (0..=n).map(|j| inv.iter().map(|&a| perm[n + 1][x.degeneracy(n, j, a) as usize] as Simplex).collect()).collect()
        } else {
            Vec::new()
        });
    }
    let y = Arc::new(SSet::from_parts(M, names, faces, degens).unwrap());
    let components = perm.iter().map(|p| p.iter().map(|&b| b as Simplex).collect()).collect();
    let iso = SSetMap::new(x.clone(), y.clone(), components).unwrap();
    (y, iso)
}

fn permutations(x: &SSet) -> impl Strategy<Value = Vec<Vec<usize>>> {
    x.level_sizes().iter().map(|&s| Just((0..s).collect::<Vec<_>>()).prop_shuffle()).collect::<Vec<_>>()
}

fn relabelled(k: usize) -> impl Strategy<Value = (Arc<SSet>, Vec<Vec<usize>>)> {
    small(k).prop_flat_map(|x| {
        let perms = permutations(&x);
        (Just(x), perms)
    })
}

fn key(f: &SSetMap) -> Vec<Vec<Simplex>> {
    f.components().to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn postcomposition_maps_hom_sets_into_hom_sets(x in small(16), y in small(16), z in small(16), pick in any::<prop::sample::Index>()) {
        let gs = enumerate_maps(&y, &z).unwrap();
        prop_assume!(!gs.is_empty());
        let g = &gs[pick.index(gs.len())];
        let xz: HashSet<_> = enumerate_maps(&x, &z).unwrap().iter().map(key).collect();
        for f in enumerate_maps(&x, &y).unwrap() {
            let fg = f.then(g).unwrap();
            prop_assert!(fg.is_simplicial());
            prop_assert!(xz.contains(&key(&fg)));
        }
    }

    #[test]
    fn hom_counts_are_invariant_under_isomorphism((x, p) in relabelled(16), (y, q) in relabelled(16)) {
        let (x2, _) = relabel(&x, &p);
        let (y2, _) = relabel(&y, &q);
        let maps = enumerate_maps(&x, &y).unwrap();
        prop_assert_eq!(maps.len(), enumerate_maps(&x2, &y2).unwrap().len());
        let distinct: HashSet<_> = maps.iter().map(key).collect();
        prop_assert_eq!(distinct.len(), maps.len());
    }

    #[test]
    fn exponential_adjunction_counts(k in small(8), a in small(8), x in small(16)) {
        let ka = product(&k, &a).unwrap().object;
        let exp = Exponential::new(&x, &a).unwrap();
        prop_assert!(exp.object().validate().is_empty());
        let left = enumerate_maps(&ka, &x).unwrap().len();
        let right = enumerate_maps(&k, exp.object()).unwrap().len();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn pullback_has_the_expected_cardinality(a in small(16), b in small(16), c in small(16), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let fs = enumerate_maps(&a, &c).unwrap();
        let gs = enumerate_maps(&b, &c).unwrap();
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let (f, g) = (&fs[i.index(fs.len())], &gs[j.index(gs.len())]);
        let cone = pullback(f, g).unwrap();
        prop_assert!(cone.object.validate().is_empty());
        for n in 0..=M {
            let mut brute = 0;
            for x in 0..a.level_size(n) as Simplex {
                for y in 0..b.level_size(n) as Simplex {
                    if f.apply(n, x) == g.apply(n, y) {
                        brute += 1;
                    }
                }
            }
            prop_assert_eq!(cone.object.level_size(n), brute);
        }
    }

    #[test]
    fn fibration_verdict_is_invariant_under_isomorphism((x, p) in relabelled(27), (y, q) in relabelled(27), pick in any::<prop::sample::Index>()) {
        let fs = enumerate_maps(&x, &y).unwrap();
        prop_assume!(!fs.is_empty());
        let f = &fs[pick.index(fs.len())];
        let (x2, ix) = relabel(&x, &p);
        let (y2, iy) = relabel(&y, &q);
        let f2 = ix.inverse().unwrap().then(f).unwrap().then(&iy).unwrap();
        prop_assert!(Arc::ptr_eq(f2.source(), &x2) && Arc::ptr_eq(f2.target(), &y2));
        let before = fibration_check(f, None).unwrap();
        let after = fibration_check(&f2, None).unwrap();
        prop_assert_eq!(before.verdict, after.verdict);
    }
}

#[test]
fn relabelling_preserves_the_simplicial_identities() {
    for (name, x) in pool() {
        let perm: Vec<Vec<usize>> = x.level_sizes().iter().map(|&s| (0..s).rev().collect()).collect();
        let (y, iso) = relabel(&x, &perm);
        assert!(y.validate().is_empty(), "{name}");
        assert!(iso.is_simplicial() && iso.is_bijective(), "{name}");
    }
}
