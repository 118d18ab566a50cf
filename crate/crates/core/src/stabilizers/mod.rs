//! Orbits of the odometer on eventually periodic points, realization of
//! finite permutations by group elements, and stabilizers of finite sets.

mod finite;

pub use finite::{
    finite_oracle_maximality, finite_property_e, generate, FiniteModel, OracleReport, PropertyEReport, CLOSURE_CAP,
};

use crate::cantor::{BaseSequence, ClopenSet, Point, DEFAULT_DEPTH_LIMIT};
use crate::element::TfgElement;
use crate::error::{Error, Result};
use crate::genperm::{product, TwoCycleSpec};
use crate::perm::Perm;
use crate::scalar::Scalar;

/// Distinct points over one base, in the given order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePointSet {
    base: BaseSequence,
    points: Vec<Point>,
}

impl FinitePointSet {
    pub fn new(base: &BaseSequence, points: Vec<Point>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            base.same_as(p.base())?;
            if points[..i].contains(p) {
                return Err(Error::InvalidConstruction(format!("point {i} repeats an earlier point")));
            }
        }
        Ok(FinitePointSet { base: base.clone(), points })
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices grouped by odometer orbit, groups ordered by first member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            match groups.iter_mut().find(|g| same_orbit(&self.points[g[0]], p) == Ok(true)) {
                Some(g) => g.push(i),
                None => groups.push(vec![i]),
            }
        }
        groups
    }
}

/// Classification of the stabilizer of a finite set. In the odometer group
/// every orbit is infinite and only `Maximal` and `NotMaximal` occur; the
/// other cases arise in finite models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilizerClass {
    Maximal,
    /// Index two in the stabilizer of the partition `{Y ∩ O, O \ Y}`; when
    /// that partition stabilizer is the whole group, the stabilizer is
    /// maximal.
    IndexTwoInPartitionStabilizer {
        partition_stabilizer_is_whole: bool,
    },
    NotMaximal,
    WholeGroup,
    /// Same stabilizer as the given strict subset.
    ReducesTo {
        subset: Vec<usize>,
        class: Box<StabilizerClass>,
    },
}

impl StabilizerClass {
    /// Whether the stabilizer is a maximal subgroup.
    pub fn is_maximal(&self) -> bool {
        match self {
            StabilizerClass::Maximal => true,
            StabilizerClass::IndexTwoInPartitionStabilizer { partition_stabilizer_is_whole } => {
                *partition_stabilizer_is_whole
            }
            StabilizerClass::NotMaximal | StabilizerClass::WholeGroup => false,
            StabilizerClass::ReducesTo { class, .. } => class.is_maximal(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: StabilizerClass,
    pub orbits: Vec<Vec<usize>>,
}

/// True iff `x - y` is an integer, i.e. `y` is an odometer translate of `x`.
pub fn same_orbit(x: &Point, y: &Point) -> Result<bool> {
    Ok(x.integer_offset::<num_bigint::BigInt>(y)?.is_some())
}

pub fn classify_finite_stabilizer(y: &FinitePointSet) -> Result<Classification> {
    if y.is_empty() {
        return Err(Error::EmptySet);
    }
    let orbits = y.orbits();
    let class = if orbits.len() == 1 { StabilizerClass::Maximal } else { StabilizerClass::NotMaximal };
    Ok(Classification { class, orbits })
}

/// Smallest depth at which the points lie in pairwise distinct cylinders.
pub fn separating_depth(points: &[&Point]) -> Result<usize> {
    for d in 0..=DEFAULT_DEPTH_LIMIT {
        let mut rs: Vec<usize> = points.iter().map(|p| p.residue(d)).collect();
        rs.sort_unstable();
        rs.dedup();
        if rs.len() == points.len() {
            return Ok(d);
        }
    }
    Err(Error::DepthLimit { depth: DEFAULT_DEPTH_LIMIT + 1, limit: DEFAULT_DEPTH_LIMIT })
}

/// An element moving `y[i]` to `y[pi(i)]` and fixing every point of `z`.
///
/// Works at the smallest depth separating `y ∪ z`. Each transposition
/// `(a b)` becomes the 2-cycle on the cylinder of `y[a]` by the odometer
/// power `f^(y[b] - y[a])`, whose support is the two cylinders involved.
pub fn realize_permutation<T: Scalar>(y: &FinitePointSet, pi: &Perm, z: &FinitePointSet) -> Result<TfgElement<T>> {
    let base = y.base();
    base.same_as(z.base())?;
    if pi.len() != y.len() {
        return Err(Error::InvalidPermutation("permutation size differs from the point set".into()));
    }
    if y.points.iter().any(|p| z.points.contains(p)) {
        return Err(Error::SetsIntersect);
    }
    let offsets: Vec<Option<T>> =
        (0..y.len()).map(|i| y.points[pi.apply(i)].integer_offset::<T>(&y.points[i])).collect::<Result<_>>()?;
    if offsets.iter().any(Option::is_none) {
        return Err(Error::CrossesOrbits);
    }
    let all: Vec<&Point> = y.points.iter().chain(&z.points).collect();
    let d = separating_depth(&all)?;
    let mut factors = Vec::new();
    for cycle in pi.cycles() {
        for pair in cycle.windows(2) {
            let (a, b) = (&y.points[pair[0]], &y.points[pair[1]]);
            let m = b.integer_offset::<T>(a)?.expect("same orbit as checked above");
            let cyl = ClopenSet::from_sorted(base, d, vec![a.residue(d)]);
            let delta = TwoCycleSpec::new(cyl, TfgElement::odometer_power(base, m))?;
            factors.push(delta.realize());
        }
    }
    Ok(product(base, &factors))
}

/// Whether the permutation action of `generators` on `parts` is transitive.
/// Every generator must map each part onto a part.
pub fn partition_action_transitive<T: Scalar>(generators: &[TfgElement<T>], parts: &[ClopenSet]) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidPartition("no parts".into()));
    };
    let base = first.base();
    let mut union = ClopenSet::empty(base);
    for p in parts {
        base.same_as(p.base())?;
        if p.is_empty() || !union.is_disjoint(p) {
            return Err(Error::InvalidPartition("parts empty or overlapping".into()));
        }
        union = union.union(p);
    }
    if !union.is_full() {
        return Err(Error::InvalidPartition("parts do not cover the space".into()));
    }
    let mut actions = Vec::with_capacity(generators.len());
    for g in generators {
        base.same_as(g.base())?;
        let mut images = Vec::with_capacity(parts.len());
        for (i, p) in parts.iter().enumerate() {
            let img = g.image_of_clopen(p);
            let j = parts.iter().position(|q| *q == img).ok_or(Error::PartitionNotPreserved { part: i })?;
            images.push(j);
        }
        actions.push(images);
    }
    let mut reached = vec![false; parts.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for a in &actions {
            if !std::mem::replace(&mut reached[a[i]], true) {
                stack.push(a[i]);
            }
        }
    }
    Ok(reached.into_iter().all(|r| r))
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = TfgElement<i64>;

    fn b2() -> BaseSequence {
        BaseSequence::dyadic()
    }

    fn int(n: i64) -> Point {
        Point::from_integer(&b2(), &n)
    }

    fn third() -> Point {
        Point::new(&b2(), vec![], vec![1, 0]).unwrap()
    }

    fn pts(p: Vec<Point>) -> FinitePointSet {
        FinitePointSet::new(&b2(), p).unwrap()
    }

    #[test]
    fn orbit_examples() {
        assert!(same_orbit(&int(0), &int(1)).unwrap());
        assert!(same_orbit(&third(), &third()).unwrap());
        assert!(!same_orbit(&int(0), &third()).unwrap());
        assert!(same_orbit(&third(), &third().add_integer(&-9i64)).unwrap());
        let b3 = BaseSequence::constant(3).unwrap();
        assert_eq!(same_orbit(&int(0), &Point::zero(&b3)), Err(Error::BaseMismatch));
    }

    #[test]
    fn classify_examples() {
        let c = classify_finite_stabilizer(&pts(vec![int(0), int(1)])).unwrap();
        assert_eq!(c.class, StabilizerClass::Maximal);
        let c = classify_finite_stabilizer(&pts(vec![int(0), third()])).unwrap();
        assert_eq!(c.class, StabilizerClass::NotMaximal);
        assert_eq!(c.orbits, vec![vec![0], vec![1]]);
        let c = classify_finite_stabilizer(&pts(vec![int(0)])).unwrap();
        assert_eq!(c.class, StabilizerClass::Maximal);
        assert_eq!(classify_finite_stabilizer(&pts(vec![])), Err(Error::EmptySet));
    }

    #[test]
    fn realize_examples() {
        let y = pts(vec![int(0), int(1)]);
        let z = pts(vec![int(2)]);
        let id = realize_permutation::<i64>(&y, &Perm::identity(2), &z).unwrap();
        assert!(id.is_identity());

        let g = realize_permutation::<i64>(&y, &Perm::transposition(2, 0, 1), &z).unwrap();
        let expected =
            TwoCycleSpec::new(ClopenSet::new(&b2(), 2, vec![0]).unwrap(), E::odometer(&b2())).unwrap().realize();
        assert_eq!(g, expected);
        assert_eq!(g.apply_to_point(&int(0)), int(1));
        assert_eq!(g.apply_to_point(&int(1)), int(0));
        assert_eq!(g.apply_to_point(&int(2)), int(2));

        let y3 = pts(vec![int(0), int(1), int(2)]);
        let cyc = Perm::new(vec![1, 2, 0]).unwrap();
        let g = realize_permutation::<i64>(&y3, &cyc, &pts(vec![])).unwrap();
        for i in 0..3 {
            assert_eq!(g.apply_to_point(&int(i as i64)), int(cyc.apply(i) as i64));
        }
    }

    #[test]
    fn realize_errors() {
        let y = pts(vec![int(0), third()]);
        assert_eq!(
            realize_permutation::<i64>(&y, &Perm::transposition(2, 0, 1), &pts(vec![])),
            Err(Error::CrossesOrbits)
        );
        let y = pts(vec![int(0), int(5)]);
        assert_eq!(realize_permutation::<i64>(&y, &Perm::identity(2), &pts(vec![int(5)])), Err(Error::SetsIntersect));
    }

    #[test]
    fn far_points_and_eventually_periodic_orbits() {
        let x = third();
        let y = pts(vec![x.clone(), x.add_integer(&37i64), int(-3)]);
        let z = pts(vec![x.add_integer(&1i64), int(0)]);
        let pi = Perm::transposition(3, 0, 1);
        let g = realize_permutation::<i64>(&y, &pi, &z).unwrap();
        for i in 0..3 {
            assert_eq!(g.apply_to_point(&y.points()[i]), y.points()[pi.apply(i)]);
        }
        for p in z.points() {
            assert_eq!(&g.apply_to_point(p), p);
        }
    }

    #[test]
    fn partition_action_examples() {
        let full = vec![ClopenSet::full(&b2())];
        assert!(partition_action_transitive::<i64>(&[], &full).unwrap());
        let halves = vec![ClopenSet::new(&b2(), 1, vec![0]).unwrap(), ClopenSet::new(&b2(), 1, vec![1]).unwrap()];
        let delta = E::from_cocycle(&b2(), 1, vec![1, -1]).unwrap();
        assert!(partition_action_transitive(&[delta], &halves).unwrap());
        assert!(!partition_action_transitive(&[E::identity(&b2())], &halves).unwrap());
        let g = E::from_cocycle(&b2(), 2, vec![1, -1, 0, 0]).unwrap();
        assert_eq!(partition_action_transitive(&[g], &halves), Err(Error::PartitionNotPreserved { part: 0 }));
    }
}
