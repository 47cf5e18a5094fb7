use std::collections::BTreeMap;

use proptest::prelude::*;
use qukernel::cohomology::*;

fn small_groups() -> Vec<AbelianGroup> {
    [vec![2], vec![3], vec![4], vec![2, 2]]
        .into_iter()
        .map(|o| AbelianGroup::new(o).unwrap())
        .collect()
}

/// Product of powers of the standard generators with a random bar coboundary.
fn mixed_cocycle(g: &AbelianGroup, powers: &[u8], gamma_seed: &[u8]) -> BarCochain3 {
    let gens = standard_cocycles(g);
    let els = g.elements();
    let table: BTreeMap<(Vec<i64>, Vec<i64>), i64> = els
        .iter()
        .flat_map(|a| els.iter().map(move |b| (a.clone(), b.clone())))
        .enumerate()
        .map(|(i, k)| (k, gamma_seed[i % gamma_seed.len()] as i64))
        .collect();
    let mut phi = BarCochain3::from_2cochain(g.clone(), 12, move |a, b| table[&(a.to_vec(), b.to_vec())]).unwrap();
    for ((_, c), &p) in gens.iter().zip(powers) {
        for _ in 0..p {
            phi = phi.product(c);
        }
    }
    phi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cocycle_criteria_agree(gi in 0usize..4, powers in prop::collection::vec(0u8..4, 3), seed in prop::collection::vec(0u8..12, 1..20)) {
        let g = &small_groups()[gi];
        let phi = mixed_cocycle(g, &powers, &seed);
        prop_assert!(phi.cocycle_failure(0, 0).is_none());
        prop_assert!(is_cocycle(&f3_pullback(&phi), g));
    }

    #[test]
    fn class_detected_by_pullback(gi in 0usize..4, powers in prop::collection::vec(0u8..4, 3), seed in prop::collection::vec(0u8..12, 1..20)) {
        let g = &small_groups()[gi];
        let gens = standard_cocycles(g);
        let phi = mixed_cocycle(g, &powers, &seed);
        // H^3 is the direct sum of the cyclic groups generated by the standard cocycles
        let trivial_class = gens.iter().zip(&powers).all(|((name, _), &p)| {
            let order = cocycle_order(g, name);
            p as i64 % order == 0
        });
        let v = decide_bar_coboundary(&phi, 0, 0).unwrap();
        prop_assert_eq!(v.verdict.is_coboundary(), trivial_class);
    }

    #[test]
    fn coboundaries_closed_under_product(gi in 0usize..3, a in prop::collection::vec(0i64..36, 6), b in prop::collection::vec(0i64..36, 6)) {
        let orders = [vec![2, 4], vec![3, 6], vec![2, 2, 4]][gi].clone();
        let g = AbelianGroup::new(orders).unwrap();
        let kc = KComplex::new(g.clone());
        let table = |v: &[i64]| -> BTreeMap<(usize, usize), i64> {
            let mut t = BTreeMap::new();
            let mut it = v.iter().cycle();
            for i in 0..g.rank() {
                for j in i..g.rank() {
                    t.insert((i, j), *it.next().unwrap());
                }
            }
            t
        };
        let f1 = kc.coboundary_of_2cochain(&table(&a), 36);
        let f2 = kc.coboundary_of_2cochain(&table(&b), 36);
        prop_assert!(is_coboundary(&f1, &g).unwrap().is_coboundary());
        prop_assert!(is_coboundary(&f1.product(&f2), &g).unwrap().is_coboundary());
    }

    #[test]
    fn bar_coboundary_pulls_back_to_coboundary(gi in 0usize..4, seed in prop::collection::vec(0u8..12, 1..30)) {
        let g = &small_groups()[gi];
        let phi = mixed_cocycle(g, &[0, 0, 0], &seed);
        let v = decide_bar_coboundary(&phi, 0, 0).unwrap();
        prop_assert!(v.verdict.is_coboundary());
    }
}

/// Order of a standard generator in H^3: m_r for type r-r, gcd(m_r, m_s) for r-s,
/// gcd of all three for r-s-t.
fn cocycle_order(g: &AbelianGroup, name: &str) -> i64 {
    let idx: Vec<usize> = name
        .trim_start_matches("type-")
        .split('-')
        .map(|x| x.parse::<usize>().unwrap() - 1)
        .collect();
    idx.iter().map(|&i| g.orders[i]).fold(0, num_integer::gcd)
}

#[test]
fn cyclic_generator_has_full_order() {
    for m in 2..=6 {
        let g = AbelianGroup::new(vec![m]).unwrap();
        let (_, gen) = standard_cocycles(&g).remove(0);
        let mut phi = gen.clone();
        for k in 1..=m {
            let v = decide_bar_coboundary(&phi, 0, 0).unwrap();
            assert_eq!(v.verdict.is_coboundary(), k == m, "m = {m}, power {k}");
            phi = phi.product(&gen);
        }
    }
}
