use spherindex::fan::{
    dominates, fan_validate, is_complete_for, is_smooth, standard_fan, strata, weyl_saturate, Cone, Fan, FanError,
};
use spherindex::fixtures;
use spherindex::linalg::int_to_q;
use spherindex::restriction::{aut_roots, localize, restrict_datum, valuation_cone, RestrictedDatum, ValuationCone};

fn datum(name: &str) -> RestrictedDatum {
    restrict_datum(&fixtures::load(name).to_datum().unwrap()).unwrap()
}

#[test]
fn standard_fan_sizes() {
    for (name, r) in [("u11", 1), ("split_a2", 2), ("split_b2", 2), ("split_a3", 3)] {
        let rd = datum(name);
        let f = standard_fan(&rd).unwrap();
        assert_eq!(f.cones().len(), 1 << r, "{name}");
        let zk = valuation_cone(&rd);
        assert!(fan_validate(&f, &zk).is_empty());
        assert_eq!(is_complete_for(&f, &zk), Ok(true));
        assert!(is_smooth(&f, &rd.lattice()).iter().all(|&s| s));
    }
    assert_eq!(standard_fan(&datum("lineality")), Err(FanError::NotConvex));
}

#[test]
fn b2_saturation() {
    let rd = datum("split_b2");
    let f = weyl_saturate(&standard_fan(&rd).unwrap(), &rd, None).unwrap();
    let max = f.maximal_cones();
    assert_eq!(max.len(), 8);
    assert!(max.iter().all(|c| c.dim() == 2));
    assert_eq!(f.rays().len(), 8);
    assert_eq!(f.cones().len(), 17);
    let whole = ValuationCone::whole(2);
    assert_eq!(is_complete_for(&f, &whole), Ok(true));
    let missing = f.without(max[0]);
    assert_eq!(is_complete_for(&missing, &whole), Ok(false));
    assert!(matches!(weyl_saturate(&standard_fan(&rd).unwrap(), &rd, Some(5)), Err(FanError::BudgetExceeded { cap: 5 })));
}

#[test]
fn saturation_is_reflection_stable() {
    for name in ["split_a2", "split_b2", "split_a3", "u11"] {
        let rd = datum(name);
        let f = weyl_saturate(&standard_fan(&rd).unwrap(), &rd, None).unwrap();
        for i in 0..rd.sigma.len() {
            let m = rd.reflection_matrix_n(i);
            for c in f.cones() {
                let gens: Vec<_> = c
                    .generators()
                    .iter()
                    .map(|g| {
                        let v = int_to_q(g);
                        (0..m.rows())
                            .map(|r| m.row(r).iter().zip(&v).map(|(a, x)| x * a).sum::<spherindex::linalg::Q>().to_integer())
                            .collect()
                    })
                    .collect();
                let image = Cone::new(rd.rank(), &gens, 0).unwrap();
                assert!(f.index_of(&image).is_some(), "{name}");
            }
        }
    }
}

#[test]
fn rank_one_saturation() {
    let rd = datum("u11");
    let f = weyl_saturate(&standard_fan(&rd).unwrap(), &rd, None).unwrap();
    assert_eq!(f.cones().len(), 3);
}

#[test]
fn strata_form_a_boolean_lattice() {
    let rd = datum("split_a2");
    let f = standard_fan(&rd).unwrap();
    let poset = strata(&f, &rd);
    assert_eq!(poset.nodes.len(), 4);
    assert_eq!(poset.edges.len(), 4);
    let mut labels: Vec<(Vec<usize>, usize)> = poset.nodes.iter().map(|n| (n.sigma.clone(), n.rank)).collect();
    labels.sort();
    assert_eq!(labels, vec![(vec![], 0), (vec![0], 1), (vec![0, 1], 2), (vec![1], 1)]);
    for n in &poset.nodes {
        assert_eq!(n.rank + n.codim, rd.rank());
        assert_eq!(n.j_label.as_ref(), Some(&n.sigma));
        assert_eq!(n.horospherical, n.sigma.is_empty());
        let loc = localize(&rd, &n.sigma).unwrap();
        assert_eq!(loc.embedding, n.lattice);
    }
}

#[test]
fn dominance_of_subdivision() {
    let rd = datum("split_a2");
    let f = standard_fan(&rd).unwrap();
    let top = f.maximal_cones()[0].clone();
    let (a, b) = (&top.generators()[0], &top.generators()[1]);
    let mid: Vec<_> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let halves = [
        Cone::new(2, &[a.clone(), mid.clone()], 0).unwrap(),
        Cone::new(2, &[mid, b.clone()], 0).unwrap(),
    ];
    let sub = Fan::from_cones(2, halves);
    assert!(fan_validate(&sub, &valuation_cone(&rd)).is_empty());
    assert!(dominates(&sub, &f));
    assert!(!dominates(&f, &sub));
}

#[test]
fn e6_quotient_fan() {
    let rd = datum("e6");
    let q = aut_roots(&rd, None).unwrap().quotient;
    assert!(q.predicates().k_wonderful, "{:?} {:?}", q.sigma, q.predicates());
    let f = standard_fan(&q).unwrap();
    let sat = weyl_saturate(&f, &q, None).unwrap();
    assert_eq!(sat.maximal_cones().len(), 8);
}

#[test]
fn support_violation() {
    let rd = datum("split_a2");
    let f = Fan::from_generators(2, &[vec![vec![1, 0]]]).unwrap();
    let v = fan_validate(&f, &valuation_cone(&rd));
    assert!(v.iter().any(|x| x.check == "fan-support"));
}
