//! Randomized and exhaustive property suites over base `2` and base
//! `pre [2] period [3]`. Each suite is deterministic for a given seed and
//! reports its failing cases rather than stopping at the first.

pub mod oracle;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cantor::{BaseSequence, ClopenSet, Point, DEFAULT_DEPTH_LIMIT};
use crate::element::TfgElement;
use crate::error::{Error, Result};
use crate::genperm::{perm_hom, product, torsion_to_genperms, GenPermSpec};
use crate::nowhere_dense::{build_construction, check_nowhere_dense, truncated_group_order, y_cover, OmegaWord};
use crate::perm::Perm;
use crate::property_e::{decompose_local, factor_kernel, verify_certificate, Tag};
use crate::sample::{self, SampleRng};
use crate::scalar::Scalar;
use crate::stabilizers::{
    finite_oracle_maximality, finite_property_e, realize_permutation, same_orbit, FiniteModel, FinitePointSet,
    StabilizerClass,
};
use crate::towers::{build_kr, entries, exits, first_return, first_return_of, parity_exchange};

type E = TfgElement<i64>;

pub const DEFAULT_SEED: u64 = 0x5eed;

pub const SUITES: [&str; 12] = [
    "group-laws",
    "index",
    "gen-perm",
    "torsion",
    "towers",
    "parity",
    "property-e",
    "kernel",
    "measure",
    "finite-oracle",
    "nowhere-dense",
    "stabilizers",
];

/// Failures kept per suite; the count is always exact.
const KEEP_FAILURES: usize = 8;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.cases > 0
    }

    /// `PASS group-laws (3000 cases, 0.41s)` or the FAIL form with the
    /// first failure.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{verdict} {} ({} cases, {} failed, {:.2}s)",
            self.name,
            self.cases,
            self.failed,
            self.elapsed.as_secs_f64()
        );
        if let Some(f) = self.failures.first() {
            s.push_str(": ");
            s.push_str(f);
        }
        s
    }
}

struct Tally {
    cases: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failed: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEEP_FAILURES {
                self.failures.push(what());
            }
        }
    }

    /// A case whose computation may fail; an error counts as a failure.
    fn case(&mut self, what: impl FnOnce() -> String, f: impl FnOnce() -> Result<bool>) {
        match f() {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }
}

pub fn bases() -> [BaseSequence; 2] {
    [BaseSequence::dyadic(), BaseSequence::new(vec![2], vec![3]).expect("valid base")]
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let (name, body): (&'static str, fn(&mut SampleRng, &mut Tally)) = match name {
        "group-laws" => ("group-laws", group_laws),
        "index" => ("index", index),
        "gen-perm" => ("gen-perm", gen_perm),
        "torsion" => ("torsion", torsion),
        "towers" => ("towers", towers),
        "parity" => ("parity", parity),
        "property-e" => ("property-e", property_e),
        "kernel" => ("kernel", kernel),
        "measure" => ("measure", measure),
        "finite-oracle" => ("finite-oracle", finite_oracle),
        "nowhere-dense" => ("nowhere-dense", nowhere_dense),
        "stabilizers" => ("stabilizers", stabilizers),
        _ => return Err(Error::Parse(format!("unknown suite {name:?}"))),
    };
    let start = Instant::now();
    let mut rng = sample::rng(seed);
    let mut t = Tally::new();
    body(&mut rng, &mut t);
    Ok(SuiteReport { name, cases: t.cases, failed: t.failed, failures: t.failures, elapsed: start.elapsed() })
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, seed).expect("listed suite")).collect()
}

fn pick(bases: &[BaseSequence; 2], i: usize) -> &BaseSequence {
    &bases[i % 2]
}

fn group_laws(rng: &mut SampleRng, t: &mut Tally) {
    fn laws<T: Scalar>(t: &mut Tally, g: &TfgElement<T>, h: &TfgElement<T>, k: &TfgElement<T>) {
        let b = g.base();
        let id = TfgElement::identity(b);
        t.check(g.compose(h).compose(k) == g.compose(&h.compose(k)), || format!("associativity {g:?} {h:?} {k:?}"));
        t.check(g.compose(&id) == *g && id.compose(g) == *g, || format!("identity {g:?}"));
        let gi = g.inverse();
        t.check(g.compose(&gi).is_identity() && gi.compose(g).is_identity(), || format!("inverse {g:?}"));
        let again = TfgElement::from_cocycle(b, g.depth() + 1, g.table_at(g.depth() + 1));
        t.check(again.as_ref() == Ok(g), || format!("canonical form {g:?}"));
    }
    let bases = bases();
    for i in 0..1000 {
        let b = pick(&bases, i);
        let [g, h, k]: [E; 3] = std::array::from_fn(|_| sample::element(rng, b, 6, 4));
        laws(t, &g, &h, &k);
        let gh = g.compose(&h);
        t.check(oracle::agree(&gh.compose(&k), |x| oracle::apply(&g, oracle::apply(&h, oracle::apply(&k, x)))), || {
            format!("pointwise composition {g:?} {h:?} {k:?}")
        });
        let gi = g.inverse();
        let k_d = b.modulus(gi.depth().max(g.depth())) as i128;
        t.check((0..k_d).all(|x| oracle::apply(&g, oracle::apply(&gi, x)) == x), || format!("pointwise inverse {g:?}"));
    }
    for i in 0..100 {
        let b = pick(&bases, i);
        let [g, h, k]: [TfgElement<BigInt>; 3] = std::array::from_fn(|_| sample::element(rng, b, 6, 1 << 40));
        laws(t, &g, &h, &k);
    }
}

/// A generalized permutation with `k` maps `f^(a_i) ∘ p_i`, `p_i` permuting `u` internally and
/// the translates `u + a_i` pairwise disjoint.
fn random_spec<R: Rng>(rng: &mut R, base: &BaseSequence, k: usize) -> GenPermSpec<i64> {
    let mut d = (0..).find(|&d| base.modulus(d) >= 2 * k).expect("moduli grow");
    d += rng.gen_range(0..=1);
    let m = base.modulus(d);
    let f = E::odometer(base);
    for _ in 0..100 {
        let size = rng.gen_range(1..=(m / (2 * k)).max(1));
        let mut all: Vec<usize> = (0..m).collect();
        all.shuffle(rng);
        let r: Vec<usize> = all[..size].to_vec();
        let mut used: HashSet<usize> = HashSet::new();
        let mut shifts = Vec::new();
        for _ in 0..k {
            let Some(a) =
                (0..20).map(|_| rng.gen_range(0..m)).find(|a| r.iter().all(|x| !used.contains(&((x + a) % m))))
            else {
                break;
            };
            used.extend(r.iter().map(|x| (x + a) % m));
            shifts.push(a);
        }
        if shifts.len() < k {
            continue;
        }
        let u = ClopenSet::new(base, d, r).expect("residues in range");
        let maps = shifts
            .iter()
            .map(|&a| {
                let wrap = rng.gen_range(-1..=1i64) * m as i64;
                f.power(&(a as i64 + wrap)).compose(&sample::supported_in(rng, &u, 1, 2, false))
            })
            .collect();
        return GenPermSpec::new(u, maps, Perm::identity(k)).expect("images disjoint by construction");
    }
    let u = ClopenSet::new(base, d, vec![0]).expect("residue in range");
    let maps = (0..k).map(|a| f.power(&(a as i64))).collect();
    GenPermSpec::new(u, maps, Perm::identity(k)).expect("translates of one cylinder are disjoint")
}

fn index(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    for b in &bases {
        t.check(E::odometer(b).index() == 1, || format!("index of the odometer over {b}"));
        t.check(oracle::flux(&E::odometer(b)) == 1, || format!("flux of the odometer over {b}"));
    }
    for i in 0..1000 {
        let b = pick(&bases, i);
        let g: E = sample::element(rng, b, 6, 4);
        let h: E = sample::element(rng, b, 6, 4);
        t.check(g.compose(&h).index() == g.index() + h.index(), || format!("index homomorphism {g:?} {h:?}"));
        t.check(oracle::flux(&g) == g.index() as i128, || format!("index against flux {g:?}"));
    }
    for i in 0..200 {
        let b = pick(&bases, i);
        let k = rng.gen_range(2..=4);
        let spec = random_spec(rng, b, k);
        let spec = spec.with_pi(sample::perm(rng, k)).expect("same size");
        t.check(spec.realize().index() == 0, || format!("index of a generalized permutation {spec:?}"));
        let g: E = sample::torsion(rng, b, 4, 4);
        t.case(
            || format!("index of torsion parts {g:?}"),
            || Ok(torsion_to_genperms(&g)?.iter().all(|s| s.realize().index() == 0)),
        );
    }
}

fn gen_perm(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    let s3: Vec<Perm> = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
        .iter()
        .map(|v| Perm::new(v.to_vec()).expect("listed permutation"))
        .collect();
    for (n, b) in bases.iter().enumerate() {
        let spec = random_spec(rng, b, 3);
        for pi in &s3 {
            for sigma in &s3 {
                t.case(|| format!("S3 homomorphism {n} {pi:?} {sigma:?}"), || perm_hom(&spec, pi, sigma));
            }
        }
    }
    for i in 0..100 {
        let b = pick(&bases, i);
        let spec = random_spec(rng, b, 4);
        let (pi, sigma) = (sample::perm(rng, 4), sample::perm(rng, 4));
        t.case(|| format!("S4 homomorphism {pi:?} {sigma:?}"), || perm_hom(&spec, &pi, &sigma));
    }
    for i in 0..100 {
        let b = pick(&bases, i);
        let k = rng.gen_range(2..=4);
        let spec = random_spec(rng, b, k).with_pi(sample::perm(rng, k)).expect("same size");
        let h: E = sample::element(rng, b, 4, 3);
        let g = spec.realize();
        t.check(spec.conjugate(&h).realize() == g.conjugate_by(&h), || format!("conjugation {h:?} {spec:?}"));
        t.check(spec.reparameterize(&h).realize() == g, || format!("reparameterization {h:?} {spec:?}"));
        let twos: Vec<E> = spec.to_two_cycles().iter().map(|s| s.realize()).collect();
        t.check(product(b, &twos) == g, || format!("2-cycle expansion {spec:?}"));
    }
}

fn torsion(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    for i in 0..200 {
        let b = pick(&bases, i);
        let g: E = sample::torsion(rng, b, 4, 4);
        t.case(
            || format!("torsion decomposition {g:?}"),
            || {
                let parts: Vec<E> = torsion_to_genperms(&g)?.iter().map(|s| s.realize()).collect();
                let disjoint = parts.iter().enumerate().all(|(i, p)| {
                    parts[i + 1..].iter().all(|q| p.support().is_disjoint(&q.support()) && p.commutes_with(q))
                });
                Ok(disjoint && product(b, &parts) == g && g.is_torsion())
            },
        );
    }
}

fn towers(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    for i in 0..100 {
        let b = pick(&bases, i);
        let u = sample::nonempty_clopen(rng, b, 4);
        let g: E = sample::element(rng, b, 4, 3);
        t.case(
            || format!("Kakutani-Rokhlin partition {u:?} {g:?}"),
            || {
                let kr = build_kr(&u, &g)?;
                kr.verify()?;
                let mut union = kr.avoiding().clone();
                let mut mass = kr.avoiding().measure::<i64>();
                for tower in kr.towers() {
                    for (l, level) in tower.levels.iter().enumerate() {
                        if !union.is_disjoint(level) || (l == 0) != level.is_subset(&u) {
                            return Ok(false);
                        }
                        if l + 1 < tower.levels.len() && g.image_of_clopen(level) != tower.levels[l + 1] {
                            return Ok(false);
                        }
                        union = union.union(level);
                        mass += level.measure::<i64>();
                    }
                }
                Ok(union.is_full() && mass == Ratio::from_integer(1))
            },
        );
        t.case(
            || format!("first return of {g:?} to {u:?}"),
            || {
                let (gu, hu) = first_return_of(&u, &g)?;
                Ok(gu.compose(&hu) == g && gu.is_supported_in(&u))
            },
        );
    }
    for i in 0..50 {
        let b = pick(&bases, i);
        let u = sample::nonempty_clopen(rng, b, 5);
        t.case(
            || format!("first return of the odometer to {u:?}"),
            || {
                let (fu, hu): (E, E) = first_return(&u)?;
                let f = E::odometer(b);
                let k = b.modulus(fu.depth().max(u.depth())) as i128;
                let pointwise = (0..k)
                    .filter(|&x| u.contains_residue(u.depth(), (x as usize) % b.modulus(u.depth())))
                    .all(|x| oracle::apply(&fu, x) == x + oracle::return_time(&u, x));
                Ok(fu.compose(&hu) == f && fu.index() == 1 && pointwise)
            },
        );
    }
}

fn parity(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    for i in 0..100 {
        let b = pick(&bases, i);
        let u = sample::clopen(rng, b, 4);
        let g: E = sample::element(rng, b, 4, 3);
        let e = parity_exchange(&u, &g);
        t.check(e.image_of_clopen(&exits(&u, &g)) == entries(&u, &g), || format!("exchange image {u:?} {g:?}"));
        t.check(e.compose(&e).is_identity(), || format!("exchange is an involution {u:?} {g:?}"));
    }
}

fn property_e(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    let mut done = 0;
    let mut i = 0;
    while done < 500 {
        i += 1;
        let b = pick(&bases, i);
        let u1 = sample::nonempty_clopen(rng, b, 4);
        let u2 = sample::nonempty_clopen(rng, b, 4);
        if u1.is_disjoint(&u2) {
            continue;
        }
        done += 1;
        let g: E = sample::supported_in(rng, &u1.union(&u2), 1, 3, false);
        t.case(
            || format!("local decomposition {g:?} {u1:?} {u2:?}"),
            || {
                let c = decompose_local(&g, &u1, &u2)?;
                let local = c.factors.iter().all(|f| {
                    f.element.is_supported_in(match f.tag {
                        Tag::U1 => &u1,
                        Tag::U2 => &u2,
                    })
                });
                Ok(verify_certificate(&c) && local && c.product() == g)
            },
        );
    }
}

fn kernel(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    for i in 0..200 {
        let b = pick(&bases, i);
        let (h, w): (E, Option<ClopenSet>) = if i % 4 < 2 {
            let w = sample::nonempty_clopen(rng, b, 4);
            (sample::supported_in(rng, &w, 1, 4, true), Some(w))
        } else {
            (sample::index_zero(rng, b, 4, 4), None)
        };
        t.case(
            || format!("kernel factorization {h:?} {w:?}"),
            || {
                let k = factor_kernel(&h, w.as_ref())?;
                let inside = w.as_ref().is_none_or(|w| k.t1.is_supported_in(w) && k.t2.is_supported_in(w));
                Ok(k.verify() && k.t1.is_torsion() && k.t2.is_torsion() && k.t2.compose(&k.t1) == h && inside)
            },
        );
    }
}

fn measure(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    for i in 0..500 {
        let b = pick(&bases, i);
        let g: E = sample::element(rng, b, 5, 4);
        let u = sample::clopen(rng, b, 5);
        let img = g.image_of_clopen(&u);
        t.check(img.measure::<i64>() == u.measure::<i64>(), || format!("measure {g:?} {u:?}"));
        let (d, rs) = oracle::image_residues(&g, &u);
        t.check(img.residues_at(d) == rs, || format!("image against translation {g:?} {u:?}"));
        if img.is_subset(&u) {
            t.check(img == u, || format!("contraction {g:?} {u:?}"));
        }
        // Forward closure under g: g(v) ⊆ v by construction.
        let mut v = u.clone();
        loop {
            let next = v.union(&g.image_of_clopen(&v));
            if next == v {
                break;
            }
            v = next;
        }
        t.check(g.image_of_clopen(&v) == v, || format!("forward-closed set not invariant {g:?} {u:?}"));
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..1 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

fn finite_oracle(_: &mut SampleRng, t: &mut Tally) {
    for n in 3..=6 {
        let model = FiniteModel::cyclic(n).expect("small model");
        for y in subsets(n) {
            t.case(
                || format!("maximality in S{n} of the stabilizer of {y:?}"),
                || {
                    let r = finite_oracle_maximality(&model, &y)?;
                    let index_two = match r.class {
                        StabilizerClass::IndexTwoInPartitionStabilizer { .. } => {
                            r.partition_stabilizer_order == Some(2 * r.stabilizer_order)
                        }
                        _ => r.partition_stabilizer_order.is_none(),
                    };
                    Ok(r.agree && index_two)
                },
            );
        }
        let all: Vec<Vec<usize>> = subsets(n).collect();
        for (i, u1) in all.iter().enumerate() {
            for u2 in &all[i..] {
                if u1.iter().all(|x| !u2.contains(x)) {
                    continue;
                }
                t.case(
                    || format!("finite generation in S{n} by {u1:?} {u2:?}"),
                    || Ok(finite_property_e(n, u1, u2)?.equal),
                );
            }
        }
    }
}

fn nowhere_dense(_: &mut SampleRng, t: &mut Tally) {
    for b in &bases() {
        for n in 1..=5 {
            t.case(
                || format!("construction over {b} with {n} stages"),
                || {
                    let c = build_construction::<i64>(b, n, DEFAULT_DEPTH_LIMIT)?;
                    c.verify()?;
                    let mut covers = HashSet::new();
                    for omega in OmegaWord::all(n) {
                        if !check_nowhere_dense(&c, &omega) {
                            return Ok(false);
                        }
                        let mut prev = ClopenSet::full(b);
                        for k in 1..=n {
                            let prefix = OmegaWord::new(omega.letters()[..k].to_vec())?;
                            let cover = y_cover(&c, &prefix)?;
                            if !cover.is_subset(&prev) || cover.measure::<i64>() >= prev.measure::<i64>() {
                                return Ok(false);
                            }
                            prev = cover;
                        }
                        covers.insert(prev);
                        if truncated_group_order(&c, &omega, 1)?.group != 2 {
                            return Ok(false);
                        }
                        if n == 5 {
                            for m in 2..=3 {
                                truncated_group_order(&c, &omega, m)?;
                            }
                        }
                    }
                    Ok(covers.len() == 1 << n)
                },
            );
        }
    }
}

fn offsets<R: Rng>(rng: &mut R, count: usize, taken: &mut HashSet<i64>) -> Vec<i64> {
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(-20..=20);
        if taken.insert(n) {
            out.push(n);
        }
    }
    out
}

fn stabilizers(rng: &mut SampleRng, t: &mut Tally) {
    let bases = bases();
    let mut done = 0;
    let mut i = 0;
    while done < 100 {
        i += 1;
        let b = pick(&bases, i);
        let p = sample::point(rng, b);
        let q = sample::point(rng, b);
        if same_orbit(&p, &q) != Ok(false) {
            continue;
        }
        let total = rng.gen_range(1..=6);
        let ny = rng.gen_range(1..=total);
        let ny_p = rng.gen_range(0..=ny);
        let (mut tp, mut tq) = (HashSet::new(), HashSet::new());
        let mut y: Vec<Point> = offsets(rng, ny_p, &mut tp).iter().map(|n| p.add_integer(n)).collect();
        y.extend(offsets(rng, ny - ny_p, &mut tq).iter().map(|n| q.add_integer(n)));
        let mut z = Vec::new();
        while z.len() < total - ny {
            let cand = match rng.gen_range(0..3) {
                0 => p.add_integer(&offsets(rng, 1, &mut tp)[0]),
                1 => q.add_integer(&offsets(rng, 1, &mut tq)[0]),
                _ => sample::point(rng, b),
            };
            if !y.contains(&cand) && !z.contains(&cand) {
                z.push(cand);
            }
        }
        // A permutation preserving the split between the two orbits.
        let mut images: Vec<usize> = (0..ny).collect();
        images[..ny_p].shuffle(rng);
        images[ny_p..].shuffle(rng);
        let pi = Perm::new(images).expect("shuffled identity");
        done += 1;
        t.case(
            || format!("realize {pi:?} on {y:?} fixing {z:?}"),
            || {
                let ys = FinitePointSet::new(b, y.clone())?;
                let zs = FinitePointSet::new(b, z.clone())?;
                let f: E = realize_permutation(&ys, &pi, &zs)?;
                let moves = (0..ny).all(|i| f.apply_to_point(&y[i]) == y[pi.apply(i)]);
                Ok(moves && z.iter().all(|x| f.apply_to_point(x) == *x))
            },
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 0).is_err());
    }

    #[test]
    fn report_line() {
        let r = SuiteReport { name: "index", cases: 3, failed: 0, failures: vec![], elapsed: Duration::ZERO };
        assert_eq!(r.line(), "PASS index (3 cases, 0 failed, 0.00s)");
    }
}
