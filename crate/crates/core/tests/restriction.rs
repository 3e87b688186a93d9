use num_bigint::BigInt;
use spherindex::fixtures;
use spherindex::linalg::{int_to_q, qr, Q};
use spherindex::restriction::{
    aut_roots, coweight_identity_check, facet_inheritance_check, localize, phi_k_res, restrict_datum,
    valuation_cone, FacetKind, RestrictedDatum,
};
use spherindex::roots::type_name;
use spherindex::validation::has_errors;

fn datum(name: &str) -> RestrictedDatum {
    let d = fixtures::load(name).to_datum().unwrap();
    assert!(!has_errors(&d.validate()), "{name}: {:?}", d.validate());
    restrict_datum(&d).unwrap()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn qs(v: &[(i64, i64)]) -> Vec<Q> {
    v.iter().map(|&(a, b)| qr(a, b)).collect()
}

#[test]
fn su22_root_is_twice_plus_once() {
    let rd = datum("su22");
    assert_eq!(rd.sigma.len(), 1);
    assert_eq!(rd.sigma[0].beta.as_ref().unwrap(), &qs(&[(2, 1), (1, 1)]));
    assert_eq!(rd.sigma[0].fiber.len(), 1);
}

#[test]
fn e6_little_system_is_b2() {
    let rd = datum("e6");
    assert_eq!(rd.sigma[0].beta.as_ref().unwrap(), &qs(&[(0, 1), (1, 1), (2, 1), (2, 1)]));
    assert_eq!(rd.sigma[1].beta.as_ref().unwrap(), &qs(&[(1, 1), (1, 1), (1, 1), (0, 1)]));
    assert_eq!(type_name(&rd.types), "B2");
    assert_eq!(rd.weyl_order, BigInt::from(8));
    assert_eq!(rd.phi.len(), 8);
    phi_k_res(&rd).unwrap();
    coweight_identity_check(&rd).unwrap();
}

#[test]
fn u11_has_multiplier_two() {
    let rd = datum("u11");
    assert_eq!(rd.rank(), 1);
    assert_eq!(rd.sigma[0].coords, ints(&[2]));
    assert_eq!(rd.sigma[0].primitive, ints(&[1]));
    assert_eq!(rd.sigma[0].multiplier, BigInt::from(2));
}

#[test]
fn sp42_restricted_roots_form_a_string() {
    let rd = datum("sp42");
    let res = phi_k_res(&rd).unwrap();
    assert_eq!(rd.sigma.len(), 1);
    let s2 = int_to_q(&rd.sigma[0].coords);
    let multiples: Vec<Vec<BigInt>> = (1..=3)
        .map(|m| s2.iter().map(|x| (x * Q::from_integer(m.into())).to_integer()).collect())
        .collect();
    assert_eq!(res.positive().len(), 3);
    let mut along: Vec<Vec<BigInt>> = res
        .positive()
        .iter()
        .map(|(r, _)| r.clone())
        .filter(|r| multiples.contains(r))
        .collect();
    along.sort_by_key(|r| r.iter().map(|x| x.clone() * x).sum::<BigInt>());
    assert_eq!(along, multiples);
}

#[test]
fn split_data_are_wonderful() {
    for name in ["split_a2", "split_a3"] {
        let rd = datum(name);
        let p = rd.predicates();
        assert!(p.k_convex && p.k_wonderful && !p.k_horospherical, "{name}");
        for f in facet_inheritance_check(&rd).unwrap() {
            assert_eq!(f.kind, FacetKind::Facet);
        }
    }
}

#[test]
fn horospherical_and_lineality() {
    let rd = datum("horospherical");
    assert!(rd.predicates().k_horospherical);
    assert!(!rd.is_convex());
    let rd = datum("lineality");
    assert!(!rd.is_convex());
    assert_eq!(valuation_cone(&rd).lineality.len(), 1);
    assert!(localize(&rd, &[]).is_err());
}

#[test]
fn localizing_split_a3() {
    let rd = datum("split_a3");
    let loc = localize(&rd, &[0, 2]).unwrap();
    assert_eq!(loc.datum.rank(), 2);
    assert_eq!(type_name(&loc.datum.types), "A1xA1");
    let whole = localize(&rd, &[0, 1, 2]).unwrap();
    assert_eq!(whole.datum.rank(), 3);
}

#[test]
fn u11_gamma_two() {
    let f = fixtures::load("u11_gamma2");
    let rd = restrict_datum(&f.to_datum().unwrap()).unwrap();
    let gamma = f.gamma(rd.rank()).unwrap().unwrap();
    let aut = aut_roots(&rd, Some(&gamma)).unwrap();
    assert_eq!(aut.multipliers, vec![BigInt::from(2)]);
    let aut = aut_roots(&rd, None).unwrap();
    assert_eq!(aut.multipliers, vec![BigInt::from(1)]);
}
