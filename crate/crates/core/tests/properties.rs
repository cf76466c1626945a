use chainlattice::containers::{kw_container, pipeline_t, random_antichain};
use chainlattice::dump::{chain_dump_string, read_chain_dump};
use chainlattice::extremal::{
    aggregate_bound, comparable_pair, grid_partition, sperner_value, verify_grid_partition,
    Ambient, Grid,
};
use chainlattice::lattice::{
    dominance_check, lubell_mass_masks, verify_chain_decomposition, Ground, SizeProfile,
};
use chainlattice::matching::{lym_check, min_chain_partition};
use chainlattice::pipeline::run_pipeline;
use chainlattice::sperner::{build_sperner_graph, certify_alpha};
use chainlattice::subset::{binom, is_subset, level, middle_binom};
use chainlattice::symmetric::{sigma_profile, symmetric_decomposition};
use chainlattice::Method;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Members of `family` that contain no other member.
fn minimal_members(family: &[u64]) -> Vec<u64> {
    family
        .iter()
        .copied()
        .filter(|&x| !family.iter().any(|&y| y != x && is_subset(y, x)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pipeline_partitions_are_valid(n in 6u32..=12, seed in any::<u64>()) {
        let (d, _) = run_pipeline(n, seed).unwrap();
        let report = verify_chain_decomposition(&d);
        prop_assert!(report.passed, "{:?}", report.problems);
        prop_assert_eq!(d.num_chains() as u128, middle_binom(n));
        let sigma = sigma_profile(n).unwrap().sigma;
        prop_assert!(dominance_check(&d.profile(), &sigma).unwrap());
    }

    #[test]
    fn dumps_round_trip(n in 1u32..=10, uniform in any::<bool>(), seed in 0u64..50) {
        let d = if uniform && n >= 6 {
            run_pipeline(n, seed).unwrap().0
        } else {
            symmetric_decomposition(n).unwrap()
        };
        let text = chain_dump_string(&d);
        let back = read_chain_dump(text.as_bytes(), Ground::Full).unwrap();
        prop_assert!(verify_chain_decomposition(&back).passed);
        prop_assert_eq!(chain_dump_string(&back), text);
    }

    #[test]
    fn normalized_matching_holds(n in 4u32..=12, i in 0u32..4, j in 0u32..4, pick in prop::collection::vec(any::<prop::sample::Index>(), 1..40)) {
        let top = n - n.div_ceil(2);
        prop_assume!(i != j && i <= top && j <= top);
        let a_i = level(n, n.div_ceil(2) + i);
        let x: Vec<u64> = pick.iter().map(|ix| a_i[ix.index(a_i.len())]).collect();
        prop_assert!(lym_check(&x, i, j, n).unwrap());
    }

    #[test]
    fn antichains_have_lubell_mass_at_most_one(n in 1u32..=12, raw in prop::collection::vec(any::<u64>(), 1..60)) {
        let family: Vec<u64> = raw.iter().map(|x| x & ((1 << n) - 1)).collect();
        let mut anti = minimal_members(&family);
        anti.sort_unstable();
        anti.dedup();
        prop_assert!(lubell_mass_masks(&anti, n) <= 1.0 + 1e-12);
    }

    #[test]
    fn chain_partitions_of_random_families(n in 1u32..=10, raw in prop::collection::vec(any::<u64>(), 1..80)) {
        let mut family: Vec<u64> = raw.iter().map(|x| x & ((1 << n) - 1)).collect();
        family.sort_unstable();
        family.dedup();
        let chains = min_chain_partition(&family, n).unwrap();
        let d = chainlattice::ChainDecomposition::new(n, Ground::explicit(family.clone()), chains);
        prop_assert!(verify_chain_decomposition(&d).passed);
        // Every chain meets a largest antichain at most once, so the chain
        // count is at least the number of sets of any one size.
        let widest = (0..=n).map(|l| family.iter().filter(|x| x.count_ones() == l).count()).max().unwrap();
        prop_assert!(d.num_chains() >= widest);
    }

    #[test]
    fn grid_operations_form_a_lattice(dims in prop::collection::vec(1u32..6, 1..4), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let g = Grid::new(dims).unwrap();
        let amb = Ambient::Grid(g.clone());
        let (a, b, c) = (a % g.size(), b % g.size(), c % g.size());
        prop_assert_eq!(amb.join(a, b), amb.join(b, a));
        prop_assert_eq!(amb.meet(a, amb.join(a, b)), a);
        prop_assert_eq!(amb.join(amb.join(a, b), c), amb.join(a, amb.join(b, c)));
        prop_assert_eq!(amb.leq(a, b), amb.join(a, b) == b);
        prop_assert_eq!(amb.leq(a, b), amb.meet(a, b) == a);
        prop_assert_eq!(g.point(&g.coords(a)).unwrap(), a);
    }

    #[test]
    fn containers_contain_and_shrink(seed in any::<u64>()) {
        let n = 10;
        let t = pipeline_t(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_antichain(&t, &mut rng);
        let res = kw_container(&a, &t, n).unwrap();
        prop_assert!(a.iter().all(|x| res.container.binary_search(x).is_ok()));
        prop_assert!(res.mass_strictly_decreasing());
    }
}

#[test]
fn symmetric_profiles_are_exact() {
    for n in 1..=16 {
        let d = symmetric_decomposition(n).unwrap();
        assert!(verify_chain_decomposition(&d).passed);
        let mut expected = Vec::new();
        for k in 0..=n / 2 {
            let count = binom(n, k) - if k > 0 { binom(n, k - 1) } else { 0 };
            expected.extend(std::iter::repeat_n(
                (n - 2 * k + 1) as usize,
                count as usize,
            ));
        }
        assert_eq!(d.profile(), SizeProfile::new(expected));
    }
}

#[test]
fn sperner_certificates_for_both_methods() {
    for n in 1..=12 {
        let g = build_sperner_graph(&symmetric_decomposition(n).unwrap()).unwrap();
        assert!(certify_alpha(&g).certified() && g.meets_turan());
        if n >= 6 {
            let g = build_sperner_graph(&run_pipeline(n, 1).unwrap().0).unwrap();
            assert!(certify_alpha(&g).certified() && g.meets_turan());
        }
    }
}

#[test]
fn grid_partitions_aggregate_to_at_least_sperner() {
    for n in 2..=10u32 {
        for d in 1..=2u32 {
            if 2 * d > n {
                continue;
            }
            let gp = grid_partition(n, d, Method::Symmetric, 0).unwrap();
            assert!(verify_grid_partition(&gp).passed, "n = {n}, d = {d}");
            let agg = aggregate_bound(&gp, &comparable_pair()).unwrap();
            assert!(agg.total >= sperner_value(n), "n = {n}, d = {d}");
        }
    }
    let gp = grid_partition(12, 2, Method::Uniform, 4).unwrap();
    assert!(verify_grid_partition(&gp).partition_ok);
}

#[test]
fn lattice_values_are_bounded_by_cell_sums() {
    use chainlattice::extremal::{boolean_algebra, corner, ex_oracle};
    let configs = [comparable_pair(), corner(), boolean_algebra(2).unwrap()];
    for n in 2..=5u32 {
        for d in 1..=2u32 {
            if 2 * d > n {
                continue;
            }
            let gp = grid_partition(n, d, Method::Symmetric, 0).unwrap();
            for c in &configs {
                let exact = ex_oracle(&Ambient::Lattice { n }, c).unwrap().value;
                let agg = aggregate_bound(&gp, c).unwrap();
                assert!(
                    exact <= agg.total,
                    "{} n = {n}, d = {d}: {exact} > {}",
                    c.name,
                    agg.total
                );
            }
        }
    }
}
