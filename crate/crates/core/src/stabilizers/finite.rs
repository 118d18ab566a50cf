//! Finite models: a permutation group on `{0, .., n-1}` whose ample group is
//! the product of the symmetric groups on its orbits. Used as a brute-force
//! oracle for the stabilizer classification.

use std::collections::HashSet;
use std::hash::Hash;

use super::StabilizerClass;
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Largest group the closure routines will enumerate (`8!`).
pub const CLOSURE_CAP: usize = 40_320;

const MAX_POINTS: usize = 8;

/// Breadth-first closure of `gens` under `mul`, identity first. Fails once
/// more than `cap` elements are found.
pub fn generate<X: Clone + Eq + Hash>(
    identity: X,
    gens: &[X],
    mul: impl Fn(&X, &X) -> X,
    cap: usize,
) -> Result<Vec<X>> {
    let mut seen: HashSet<X> = HashSet::new();
    seen.insert(identity.clone());
    let mut out = vec![identity];
    let mut next = 0;
    while next < out.len() {
        let x = out[next].clone();
        next += 1;
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                if out.len() == cap {
                    return Err(Error::ClosureCap(cap));
                }
                out.push(y);
            }
        }
    }
    Ok(out)
}

fn closure(n: usize, gens: &[Perm]) -> Result<HashSet<Perm>> {
    Ok(generate(Perm::identity(n), gens, |a, b| a.compose(b), CLOSURE_CAP)?.into_iter().collect())
}

/// Adjacent transpositions of `set`, generating its symmetric group.
fn symmetric_generators(n: usize, set: &[usize]) -> Vec<Perm> {
    set.windows(2).map(|w| Perm::transposition(n, w[0], w[1])).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    n: usize,
    generators: Vec<Perm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub class: StabilizerClass,
    pub brute_force_maximal: bool,
    pub agree: bool,
    pub group_order: usize,
    pub stabilizer_order: usize,
    pub partition_stabilizer_order: Option<usize>,
    pub partition_stabilizer_maximal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyEReport {
    pub generated_order: usize,
    pub symmetric_order: usize,
    pub equal: bool,
}

impl FiniteModel {
    pub fn new(n: usize, generators: Vec<Perm>) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::ModelTooLarge(n));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::InvalidPermutation(format!("{g:?} does not act on {n} points")));
        }
        Ok(FiniteModel { n, generators })
    }

    /// The model generated by a single `n`-cycle: one orbit, ample group
    /// `Sym(n)`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let shift = Perm::new((0..n).map(|i| (i + 1) % n.max(1)).collect())?;
        Self::new(n, vec![shift])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Orbits of the generated group, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut label: Vec<usize> = (0..self.n).collect();
        fn find(label: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while label[r] != r {
                r = label[r];
            }
            label[i] = r;
            r
        }
        for g in &self.generators {
            for i in 0..self.n {
                let (a, b) = (find(&mut label, i), find(&mut label, g.apply(i)));
                label[a.max(b)] = a.min(b);
            }
        }
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.n];
        for i in 0..self.n {
            let r = find(&mut label, i);
            if slot[r] == usize::MAX {
                slot[r] = orbits.len();
                orbits.push(Vec::new());
            }
            orbits[slot[r]].push(i);
        }
        orbits
    }

    fn ample_generators(&self) -> Vec<Perm> {
        self.orbits().iter().flat_map(|o| symmetric_generators(self.n, o)).collect()
    }

    /// Classification of the setwise stabilizer of `y` in the ample group,
    /// computed from orbit counts alone.
    pub fn classify(&self, y: &[usize]) -> Result<StabilizerClass> {
        let y = self.normalize(y)?;
        if y.is_empty() {
            return Err(Error::EmptySet);
        }
        let orbits = self.orbits();
        let meet: Vec<usize> = orbits.iter().map(|o| o.iter().filter(|i| y.contains(i)).count()).collect();
        let full: Vec<usize> =
            orbits.iter().zip(&meet).filter(|(o, &m)| m == o.len()).flat_map(|(o, _)| o.iter().copied()).collect();
        if !full.is_empty() {
            let rest: Vec<usize> = y.iter().copied().filter(|i| !full.contains(i)).collect();
            if rest.is_empty() {
                return Ok(StabilizerClass::WholeGroup);
            }
            let class = Box::new(self.classify(&rest)?);
            return Ok(StabilizerClass::ReducesTo { subset: rest, class });
        }
        let proper: Vec<usize> = (0..orbits.len()).filter(|&i| meet[i] > 0).collect();
        Ok(match proper.as_slice() {
            [i] if 2 * meet[*i] == orbits[*i].len() => {
                StabilizerClass::IndexTwoInPartitionStabilizer { partition_stabilizer_is_whole: orbits[*i].len() == 2 }
            }
            [_] => StabilizerClass::Maximal,
            _ => StabilizerClass::NotMaximal,
        })
    }

    fn normalize(&self, y: &[usize]) -> Result<Vec<usize>> {
        let mut y = y.to_vec();
        y.sort_unstable();
        y.dedup();
        if let Some(&i) = y.iter().find(|&&i| i >= self.n) {
            return Err(Error::ResidueOutOfRange { residue: i, modulus: self.n });
        }
        Ok(y)
    }
}

/// Whether `h` is a maximal subgroup of `g`, by closing `h ∪ {x}` for one
/// representative `x` of each double coset `h x h` outside `h`.
fn is_maximal_subgroup(n: usize, g: &HashSet<Perm>, h: &HashSet<Perm>) -> Result<bool> {
    if h.len() == g.len() {
        return Ok(false);
    }
    let mut h_gens: Vec<Perm> = Vec::new();
    let mut span = closure(n, &[])?;
    let mut hs: Vec<&Perm> = h.iter().collect();
    hs.sort();
    for x in &hs {
        if !span.contains(*x) {
            h_gens.push((*x).clone());
            span = closure(n, &h_gens)?;
        }
    }
    let mut done: HashSet<Perm> = h.clone();
    let mut outside: Vec<&Perm> = g.iter().filter(|x| !h.contains(*x)).collect();
    outside.sort();
    for x in outside {
        if done.contains(x) {
            continue;
        }
        let mut gens = h_gens.clone();
        gens.push(x.clone());
        if closure(n, &gens)?.len() != g.len() {
            return Ok(false);
        }
        for a in &hs {
            let ax = a.compose(x);
            for b in &hs {
                done.insert(ax.compose(b));
            }
        }
    }
    Ok(true)
}

fn maps_set_to(p: &Perm, from: &[usize], to: &[usize]) -> bool {
    from.iter().all(|&i| to.contains(&p.apply(i)))
}

/// Classifies the stabilizer of `y` and checks the verdict by brute force.
pub fn finite_oracle_maximality(model: &FiniteModel, y: &[usize]) -> Result<OracleReport> {
    let class = model.classify(y)?;
    let y = model.normalize(y)?;
    let n = model.n;
    let g = closure(n, &model.ample_generators())?;
    let h: HashSet<Perm> = g.iter().filter(|p| maps_set_to(p, &y, &y)).cloned().collect();
    let brute_force_maximal = is_maximal_subgroup(n, &g, &h)?;

    let (mut ps_order, mut ps_max) = (None, None);
    if matches!(class, StabilizerClass::IndexTwoInPartitionStabilizer { .. }) {
        let orbit = model.orbits().into_iter().find(|o| o.iter().any(|i| y.contains(i))).unwrap();
        let rest: Vec<usize> = orbit.into_iter().filter(|i| !y.contains(i)).collect();
        let k: HashSet<Perm> =
            g.iter().filter(|p| maps_set_to(p, &y, &y) || maps_set_to(p, &y, &rest)).cloned().collect();
        if k.len() != 2 * h.len() {
            return Err(Error::Internal("stabilizer is not of index two in the partition stabilizer".into()));
        }
        ps_order = Some(k.len());
        ps_max = Some(is_maximal_subgroup(n, &g, &k)?);
    }
    Ok(OracleReport {
        agree: class.is_maximal() == brute_force_maximal,
        class,
        brute_force_maximal,
        group_order: g.len(),
        stabilizer_order: h.len(),
        partition_stabilizer_order: ps_order,
        partition_stabilizer_maximal: ps_max,
    })
}

/// Whether `Sym(u1)` and `Sym(u2)` generate `Sym(u1 ∪ u2)` inside `Sym(n)`.
pub fn finite_property_e(n: usize, u1: &[usize], u2: &[usize]) -> Result<PropertyEReport> {
    if n > MAX_POINTS {
        return Err(Error::ModelTooLarge(n));
    }
    let mut union: Vec<usize> = u1.iter().chain(u2).copied().collect();
    union.sort_unstable();
    union.dedup();
    if union.last().is_some_and(|&i| i >= n) {
        return Err(Error::InvalidPermutation("point outside the model".into()));
    }
    let mut gens = symmetric_generators(n, u1);
    gens.extend(symmetric_generators(n, u2));
    let generated_order = closure(n, &gens)?.len();
    let symmetric_order = (1..=union.len()).product::<usize>();
    Ok(PropertyEReport { generated_order, symmetric_order, equal: generated_order == symmetric_order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_stabilizer_in_s4() {
        let m = FiniteModel::cyclic(4).unwrap();
        let r = finite_oracle_maximality(&m, &[0]).unwrap();
        assert_eq!(r.class, StabilizerClass::Maximal);
        assert!(r.brute_force_maximal && r.agree);
        assert_eq!((r.group_order, r.stabilizer_order), (24, 6));
    }

    #[test]
    fn half_set_in_s4() {
        let m = FiniteModel::cyclic(4).unwrap();
        let r = finite_oracle_maximality(&m, &[0, 1]).unwrap();
        assert_eq!(r.class, StabilizerClass::IndexTwoInPartitionStabilizer { partition_stabilizer_is_whole: false });
        assert_eq!(r.partition_stabilizer_order, Some(8));
        assert_eq!(r.partition_stabilizer_maximal, Some(true));
        assert!(!r.brute_force_maximal && r.agree);
    }

    #[test]
    fn half_set_in_s2() {
        let m = FiniteModel::cyclic(2).unwrap();
        let r = finite_oracle_maximality(&m, &[0]).unwrap();
        assert_eq!(r.class, StabilizerClass::IndexTwoInPartitionStabilizer { partition_stabilizer_is_whole: true });
        assert_eq!(r.partition_stabilizer_order, Some(2));
        assert!(r.brute_force_maximal && r.agree);
    }

    #[test]
    fn several_orbits() {
        // orbits {0,1,2} and {3,4}
        let gens = vec![Perm::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap()];
        let m = FiniteModel::new(5, gens).unwrap();
        assert_eq!(m.orbits(), vec![vec![0, 1, 2], vec![3, 4]]);
        let cases: [(&[usize], StabilizerClass); 3] = [
            (&[0, 3], StabilizerClass::NotMaximal),
            (&[3, 4], StabilizerClass::WholeGroup),
            (&[0, 3, 4], StabilizerClass::ReducesTo { subset: vec![0], class: Box::new(StabilizerClass::Maximal) }),
        ];
        for (y, class) in cases {
            let r = finite_oracle_maximality(&m, y).unwrap();
            assert_eq!(r.class, class);
            assert!(r.agree, "{y:?}");
        }
    }

    #[test]
    fn exhaustive_agreement_small() {
        for n in 1..=5 {
            let m = FiniteModel::cyclic(n).unwrap();
            for mask in 1u32..(1 << n) {
                let y: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                assert!(finite_oracle_maximality(&m, &y).unwrap().agree, "n={n} y={y:?}");
            }
        }
    }

    #[test]
    fn property_e_finite() {
        let r = finite_property_e(5, &[0, 1, 2], &[2, 3, 4]).unwrap();
        assert!(r.equal);
        assert_eq!(r.generated_order, 120);
        let r = finite_property_e(4, &[0, 1], &[2, 3]).unwrap();
        assert!(!r.equal);
        assert_eq!(r.generated_order, 4);
    }

    #[test]
    fn limits() {
        assert_eq!(FiniteModel::cyclic(9), Err(Error::ModelTooLarge(9)));
        let big = generate(0u32, &[1], |a, b| (a + b) % 100, 10);
        assert_eq!(big, Err(Error::ClosureCap(10)));
    }
}
