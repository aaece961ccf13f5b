use cvd_core::cost::{int, ratio};
use cvd_core::localratio::{
    cluster_vd_apx, cluster_vd_apx_with_stats, cluster_vd_exact, contract_twins, lambda_star, validate, ExactSolver,
    P3Branching, SubsetEnumeration,
};
use cvd_core::{generate, CostFn, Error, Graph, Rational};
use proptest::prelude::*;

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn costs_for(n: usize, raw: &[(u8, u8)], fractional: bool) -> CostFn {
    let values = raw[..n]
        .iter()
        .map(|&(p, q)| if fractional { ratio(p as i64, q as i64 + 1) } else { int(p as i64) })
        .collect();
    CostFn::new(values).unwrap()
}

/// Minimum cost over all vertex subsets whose removal leaves a cluster graph.
fn brute_opt(g: &Graph, c: &CostFn) -> Rational {
    (0u32..1 << g.n())
        .map(|m| (0..g.n()).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>())
        .filter(|x| g.without(x).graph.is_cluster())
        .map(|x| c.total(&x))
        .min()
        .unwrap()
}

/// `g` with a true twin of `v` appended as vertex `n`.
fn with_twin(g: &Graph, v: usize) -> Graph {
    let n = g.n();
    let mut edges: Vec<_> = g.edges().collect();
    edges.extend(g.neighbors(v).ones().map(|u| (u, n)));
    edges.push((v, n));
    Graph::from_edges(n + 1, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn apx_is_minimal_and_within_twice_opt(
        g in any_graph(9),
        raw in proptest::collection::vec((0u8..11, 0u8..6), 9),
        fractional in any::<bool>(),
    ) {
        let c = costs_for(g.n(), &raw, fractional);
        let (x, stats) = cluster_vd_apx_with_stats(&g, &c).unwrap();
        let v = validate(&g, &c, &x.vertices);
        prop_assert!(v.is_hitting && v.is_minimal);
        prop_assert_eq!(&v.cost, &x.cost);
        prop_assert!(x.cost <= brute_opt(&g, &c) * int(2));
        prop_assert!(stats.rounds() <= 2 * g.n());
    }

    #[test]
    fn contraction_preserves_opt(
        g in any_graph(10),
        v in 0usize..10,
        raw in proptest::collection::vec((0u8..11, 0u8..6), 11),
        fractional in any::<bool>(),
    ) {
        let v = v % g.n();
        let big = with_twin(&g, v);
        let c = costs_for(big.n(), &raw, fractional);
        let (small, c2, map) = contract_twins(&big, &c, v, g.n()).unwrap();
        prop_assert_eq!(&small, &g);
        prop_assert_eq!(map, (0..g.n()).collect::<Vec<_>>());
        prop_assert_eq!(c2.get(v), &(c.get(v) + c.get(g.n())));
        prop_assert_eq!(brute_opt(&small, &c2), brute_opt(&big, &c));
    }

    #[test]
    fn lambda_star_zeroes_without_going_negative(
        raw in proptest::collection::vec((1u8..50, 1u8..9, 0u64..7), 1..12),
    ) {
        prop_assume!(raw.iter().any(|t| t.2 > 0));
        let c: Vec<Rational> = raw.iter().map(|&(p, q, _)| ratio(p as i64, q as i64)).collect();
        let c_h: Vec<u64> = raw.iter().map(|t| t.2).collect();
        let lambda = lambda_star(&c, &c_h).unwrap();
        prop_assert!(lambda > int(0));
        let residual: Vec<Rational> = c.iter().zip(&c_h).map(|(cv, &k)| cv - &lambda * int(k as i64)).collect();
        prop_assert!(residual.iter().all(|r| *r >= int(0)));
        prop_assert!(residual.iter().zip(&c_h).any(|(r, &k)| k > 0 && *r == int(0)));
    }

    #[test]
    fn exact_solvers_agree_with_brute_force(
        g in any_graph(9),
        raw in proptest::collection::vec((0u8..11, 0u8..6), 9),
        fractional in any::<bool>(),
    ) {
        let c = costs_for(g.n(), &raw, fractional);
        let opt = brute_opt(&g, &c);
        let a = SubsetEnumeration.solve(&g, &c).unwrap();
        let b = P3Branching.solve(&g, &c).unwrap();
        prop_assert_eq!(&a.cost, &opt);
        prop_assert_eq!(&b.cost, &opt);
        prop_assert!(validate(&g, &c, &a.vertices).is_hitting);
        prop_assert!(validate(&g, &c, &b.vertices).is_hitting);
    }
}

#[test]
fn driver_examples() {
    for g in [generate::complete(4), Graph::empty(3), Graph::from_edges(5, [(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap()] {
        let x = cluster_vd_apx(&g, &CostFn::unit(g.n())).unwrap();
        assert!(x.vertices.is_empty());
        assert_eq!(x.cost, int(0));
    }
    let x = cluster_vd_apx(&generate::path(3), &CostFn::unit(3)).unwrap();
    assert!(x.cost <= int(2) && validate(&generate::path(3), &CostFn::unit(3), &x.vertices).is_minimal);
    let x = cluster_vd_apx(&generate::cycle(4), &CostFn::unit(4)).unwrap();
    assert!(x.cost <= int(4));
    assert!(cluster_vd_apx(&generate::path(3), &CostFn::unit(2)).is_err());
}

#[test]
fn lambda_examples() {
    assert_eq!(lambda_star(&[int(3), int(2)], &[1, 2]).unwrap(), int(1));
    assert_eq!(lambda_star(&[int(5), int(7), int(9)], &[0, 1, 3]).unwrap(), int(3));
    assert_eq!(lambda_star(&[ratio(1, 2), ratio(1, 3)], &[2, 1]).unwrap(), ratio(1, 4));
    assert!(matches!(lambda_star(&[int(1)], &[0]), Err(Error::Contract(_))));
}

#[test]
fn contraction_examples() {
    let (g, c, _) = contract_twins(&generate::complete(2), &CostFn::unit(2), 0, 1).unwrap();
    assert_eq!((g.n(), c.get(0).clone()), (1, int(2)));

    let mut g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)]).unwrap();
    let mut c = CostFn::unit(5);
    let mut steps = 0;
    while let Some(class) = g.twin_classes().classes.into_iter().find(|k| k.len() > 1) {
        (g, c, _) = contract_twins(&g, &c, class[0], class[1]).unwrap();
        steps += 1;
    }
    assert_eq!(steps, 2);
    assert!(g.twin_classes().is_twin_free());
    assert_eq!(c.total(&[0, 1, 2]), int(5));

    let diamond = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
    let c = CostFn::from_ints(&[1, 2, 3, 4]);
    let (p3, c2, map) = contract_twins(&diamond, &c, 1, 2).unwrap();
    assert_eq!(map, vec![0, 1, 3]);
    assert_eq!(p3, generate::path(3));
    assert_eq!(c2.values(), &[int(1), int(5), int(4)]);
    assert!(matches!(contract_twins(&diamond, &c, 0, 3), Err(Error::Contract(_))));
}

#[test]
fn exact_and_validate_examples() {
    let p3 = generate::path(3);
    let unit = CostFn::unit(3);
    assert_eq!(cluster_vd_exact(&p3, &unit).unwrap().cost, int(1));
    assert_eq!(cluster_vd_exact(&generate::cycle(4), &CostFn::unit(4)).unwrap().cost, int(2));
    assert!(cluster_vd_exact(&generate::path(21), &CostFn::unit(21)).is_err());

    let v = validate(&p3, &unit, &[1]);
    assert_eq!((v.is_hitting, v.is_minimal, v.cost), (true, true, int(1)));
    let v = validate(&p3, &unit, &[0, 1]);
    assert_eq!((v.is_hitting, v.is_minimal, v.cost), (true, false, int(2)));
    let v = validate(&generate::cycle(4), &CostFn::unit(4), &[0]);
    assert_eq!((v.is_hitting, v.is_minimal, v.cost), (false, false, int(1)));
}
