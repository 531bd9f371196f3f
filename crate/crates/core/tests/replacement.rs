use std::sync::Arc;

use proptest::prelude::*;
use reedy_core::reedy::{shapes, Diagram, ReedyCategory};
use reedy_core::replace::{certify, replace, verify_naturality};
use reedy_core::sset::{discrete, enumerate_maps, indiscrete_nerve, point, vertex_map, SSet, SSetMap};

fn nerve(k: usize) -> Arc<SSet> {
    Arc::new(indiscrete_nerve(k, 2).unwrap())
}

fn tower(values: Vec<Arc<SSet>>, maps: Vec<SSetMap>) -> Diagram {
    let cat = Arc::new(ReedyCategory::new(shapes::tower(values.len() - 1)).unwrap());
    let mut d = Diagram::new(cat, values, maps).unwrap();
    d.certify_kan(None).unwrap();
    d
}

#[test]
fn replacement_commutes_with_restriction() {
    let (n2, n3) = (nerve(2), nerve(3));
    let d = tower(
        vec![n2.clone(), n3.clone(), n2.clone()],
        vec![vertex_map(&n3, &n2, &[0, 1, 1]).unwrap(), vertex_map(&n2, &n3, &[2, 0]).unwrap()],
    );
    let full = replace(&d).unwrap();
    let low = replace(&d.restrict_to_degree(1).unwrap()).unwrap();
    for c in 0..2 {
        assert!(full.output.values()[c].same_structure(&low.output.values()[c]), "object {c}");
        assert_eq!(full.kappa[c].components(), low.kappa[c].components());
        assert_eq!(full.alpha[c].components(), low.alpha[c].components());
    }
    assert!(verify_naturality(&full).unwrap().all_pass());
}

#[test]
fn replacing_a_replacement_still_certifies() {
    let n2 = nerve(2);
    let d = tower(vec![n2.clone(), n2.clone()], vec![vertex_map(&n2, &n2, &[1, 0]).unwrap()]);
    let r = replace(&d).unwrap();
    let mut again = r.output.clone();
    again.certify_kan(None).unwrap();
    let rr = replace(&again).unwrap();
    let certs = certify(&rr, None).unwrap();
    assert!(certs.all_pass(), "{certs}");
}

fn kan_pool() -> Vec<Arc<SSet>> {
    vec![Arc::new(point(2)), Arc::new(discrete(2, 2)), nerve(2), nerve(3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_kan_cospans_certify(
        x in prop::sample::select(kan_pool()),
        y in prop::sample::select(kan_pool()),
        z in prop::sample::select(kan_pool()),
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
    ) {
        let fs = enumerate_maps(&x, &y).unwrap();
        let gs = enumerate_maps(&z, &y).unwrap();
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let cat = Arc::new(ReedyCategory::new(shapes::cospan()).unwrap());
        let maps = vec![fs[i.index(fs.len())].clone(), gs[j.index(gs.len())].clone()];
        let mut d = Diagram::new(cat, vec![x, y, z], maps).unwrap();
        d.certify_kan(None).unwrap();
        let r = replace(&d).unwrap();
        let certs = certify(&r, None).unwrap();
        prop_assert!(certs.all_pass(), "{}", certs);
    }
}
