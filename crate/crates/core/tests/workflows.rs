use ample_core::json::{self, Json};
use ample_core::nowhere_dense::{build_construction, check_nowhere_dense, truncated_group_order, y_cover};
use ample_core::property_e::{decompose_local, factor_kernel, verify_certificate};
use ample_core::stabilizers::{classify_finite_stabilizer, realize_permutation};
use ample_core::towers::{build_kr, first_return};
use ample_core::{
    BaseSequence, BigElement, BigInt, Cert, ClopenSet, Element, FinitePointSet, OmegaWord, Perm, Point,
    StabilizerClass, DEFAULT_DEPTH_LIMIT,
};

fn b2() -> BaseSequence {
    BaseSequence::dyadic()
}

fn set(d: usize, rs: &[usize]) -> ClopenSet {
    ClopenSet::new(&b2(), d, rs.to_vec()).unwrap()
}

#[test]
fn certificate_survives_serialization() {
    let g = Element::from_cocycle(&b2(), 3, vec![2, 3, -2, 0, -3, 0, 0, 0]).unwrap();
    let (u1, u2) = (set(2, &[0, 1, 2]), set(2, &[0, 2, 3]));
    let cert = decompose_local(&g, &u1, &u2).unwrap();
    let text = json::to_string(&cert);
    let back: Cert = json::from_str(&text, None).unwrap();
    assert!(verify_certificate(&back));
    assert_eq!(back.product(), g);

    let mut tampered = back.clone();
    tampered.target = Element::odometer(&b2());
    assert!(!verify_certificate(&tampered));
}

#[test]
fn big_scalars_match_machine_words() {
    let g = Element::from_cocycle(&b2(), 2, vec![2, 0, -2, 0]).unwrap();
    let big: BigElement = json::from_str(&json::to_string(&g), None).unwrap();
    assert_eq!(json::to_string(&big), json::to_string(&g));
    let huge = BigElement::odometer_power(&b2(), BigInt::from(1u64 << 62) * BigInt::from(8));
    assert_eq!(huge.index(), BigInt::from(1u64 << 62) * BigInt::from(8));
    let k = factor_kernel(&huge.compose(&BigElement::odometer(&b2()).power(&-huge.index())), None).unwrap();
    assert!(k.verify());
}

#[test]
fn first_return_through_towers() {
    let u = set(2, &[0, 3]);
    let (fu, hu): (Element, Element) = first_return(&u).unwrap();
    assert_eq!(fu.compose(&hu), Element::odometer(&b2()));
    let kr = build_kr(&u, &Element::odometer(&b2())).unwrap();
    assert_eq!(kr.heights(), vec![1, 3]);
}

#[test]
fn construction_pipeline() {
    let c = build_construction::<i64>(&b2(), 3, DEFAULT_DEPTH_LIMIT).unwrap();
    let omega: OmegaWord = "121".parse().unwrap();
    assert!(check_nowhere_dense(&c, &omega));
    let cover = y_cover(&c, &omega).unwrap();
    assert!(!cover.is_empty() && !cover.is_full());
    assert_eq!(truncated_group_order(&c, &omega, 1).unwrap().group, 2);
    let back = ample_core::Construction::from_json(&c.to_json(), None).unwrap();
    assert_eq!(back, c);
}

#[test]
fn stabilizer_pipeline() {
    let b = b2();
    let y = FinitePointSet::new(&b, vec![Point::zero(&b), Point::from_integer(&b, &5i64)]).unwrap();
    let z = FinitePointSet::new(&b, vec![Point::from_integer(&b, &2i64)]).unwrap();
    let f: Element = realize_permutation(&y, &Perm::new(vec![1, 0]).unwrap(), &z).unwrap();
    assert_eq!(f.apply_to_point(&y.points()[0]), y.points()[1]);
    assert_eq!(f.apply_to_point(&z.points()[0]), z.points()[0]);
    let class = classify_finite_stabilizer(&y).unwrap().class;
    assert_eq!(class, StabilizerClass::Maximal);
}
