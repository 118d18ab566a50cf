//! Nested cylinders around the zero point with paired 2-cycles, the finite
//! covers of the closed sets `Y_omega` they define, and finite-depth checks
//! of nowhere density, minimality and local finiteness.
//!
//! Stage `n` has a clopen `u_n ⊆ u_{n-1}` and elements `g_n`, `h_n` with
//! `u_n`, `g_n(u_n)`, `h_n(u_n)` pairwise disjoint inside `u_{n-1}`. The
//! involutions are `f^(1)_n = delta_{u_n; g_n}`, `f^(2)_n = delta_{u_n; h_n}`
//! and `f^(0)_n = id`. For a word `w` of length `n` over `{0,1,2}`,
//! `V^(w) = f^(w_1)_1 ∘ .. ∘ f^(w_n)_n (u_n)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::cantor::{BaseSequence, ClopenSet, Point};
use crate::element::TfgElement;
use crate::error::{Error, Result};
use crate::genperm::TwoCycleSpec;
use crate::perm::Perm;
use crate::scalar::Scalar;
use crate::stabilizers::{generate, CLOSURE_CAP};

/// Largest number of generators for which group orders are enumerated.
pub const MAX_CLOSURE_STAGES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdStage<T> {
    pub u: ClopenSet,
    pub g: TfgElement<T>,
    pub h: TfgElement<T>,
    f1: TfgElement<T>,
    f2: TfgElement<T>,
}

impl<T: Scalar> NdStage<T> {
    /// `f^(letter)` of this stage, `letter` in `0..=2`.
    pub fn involution(&self, letter: u8) -> TfgElement<T> {
        match letter {
            0 => TfgElement::identity(self.u.base()),
            1 => self.f1.clone(),
            2 => self.f2.clone(),
            _ => panic!("stage letter {letter} outside 0..=2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdConstruction<T> {
    base: BaseSequence,
    stages: Vec<NdStage<T>>,
}

/// A finite prefix of `omega ∈ {1,2}^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaWord(Vec<u8>);

impl OmegaWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|&&l| l != 1 && l != 2) {
            return Err(Error::Parse(format!("omega letter {l} is not 1 or 2")));
        }
        Ok(OmegaWord(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `2^n` words of length `n`, in lexicographic order.
    pub fn all(n: usize) -> Vec<OmegaWord> {
        (0..1u32 << n).map(|m| OmegaWord((0..n).map(|i| 1 + (m >> (n - 1 - i) & 1) as u8).collect())).collect()
    }
}

impl FromStr for OmegaWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(Error::Parse(format!("omega letter {c:?} is not 1 or 2"))),
            })
            .collect::<Result<_>>()?;
        Ok(OmegaWord(letters))
    }
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Stage depths: `D_0 = 0` and `D_n` the least depth with
/// `K_{D_n} >= 3 K_{D_{n-1}}`.
fn stage_depths(base: &BaseSequence, n: usize, depth_limit: usize) -> Result<Vec<usize>> {
    let mut depths = vec![0usize];
    for _ in 0..n {
        let prev = *depths.last().unwrap();
        let kp = base.modulus(prev);
        let mut d = prev + 1;
        loop {
            match base.checked_modulus(d) {
                Some(k) if k < kp.saturating_mul(3) => d += 1,
                Some(_) => break,
                None => return Err(Error::DepthLimit { depth: d, limit: depth_limit }),
            }
        }
        base.check_depth(d, depth_limit)?;
        depths.push(d);
    }
    Ok(depths)
}

/// Builds `N` stages: `u_n` is the cylinder of `0` at depth `D_n`,
/// `g_n = f^{K_{D_{n-1}}}` and `h_n = f^{2 K_{D_{n-1}}}`.
pub fn build_construction<T: Scalar>(base: &BaseSequence, n: usize, depth_limit: usize) -> Result<NdConstruction<T>> {
    let depths = stage_depths(base, n, depth_limit)?;
    let mut stages = Vec::with_capacity(n);
    for w in depths.windows(2) {
        let step = T::from_residue(base.modulus(w[0]));
        let u = ClopenSet::from_sorted(base, w[1], vec![0]);
        let g = TfgElement::odometer_power(base, step.clone());
        let h = TfgElement::odometer_power(base, step.clone() + step);
        stages.push((u, g, h));
    }
    NdConstruction::from_stages(base, stages)
}

impl<T: Scalar> NdConstruction<T> {
    /// Accepts any nested stages around `0` for which both 2-cycles are
    /// defined; the disjointness of `g_n(u_n)` and `h_n(u_n)` and the
    /// diameter bound are left to [`Self::verify`].
    pub fn from_stages(base: &BaseSequence, stages: Vec<(ClopenSet, TfgElement<T>, TfgElement<T>)>) -> Result<Self> {
        let zero = Point::zero(base);
        let mut prev = ClopenSet::full(base);
        let mut out = Vec::with_capacity(stages.len());
        for (i, (u, g, h)) in stages.into_iter().enumerate() {
            let bad = |m: &str| Error::InvalidConstruction(format!("stage {}: {m}", i + 1));
            if u.is_empty() || !u.is_subset(&prev) || !u.contains_cylinder(&zero.cylinder_of(u.depth())) {
                return Err(bad("u must be a nonempty subset of the previous stage containing 0"));
            }
            if !g.image_of_clopen(&u).is_subset(&prev) || !h.image_of_clopen(&u).is_subset(&prev) {
                return Err(bad("images leave the previous stage"));
            }
            let f1 = TwoCycleSpec::new(u.clone(), g.clone()).map_err(|_| bad("g(u) meets u"))?.realize();
            let f2 = TwoCycleSpec::new(u.clone(), h.clone()).map_err(|_| bad("h(u) meets u"))?.realize();
            prev = u.clone();
            out.push(NdStage { u, g, h, f1, f2 });
        }
        Ok(NdConstruction { base: base.clone(), stages: out })
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn stages(&self) -> &[NdStage<T>] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// `u_n`, with `u_0 = X`.
    pub fn u(&self, n: usize) -> ClopenSet {
        if n == 0 {
            ClopenSet::full(&self.base)
        } else {
            self.stages[n - 1].u.clone()
        }
    }

    /// `V^(w)` for a word over `{0,1,2}` of length at most `N`.
    pub fn v(&self, word: &[u8]) -> ClopenSet {
        let mut set = self.u(word.len());
        for (k, &l) in word.iter().enumerate().rev() {
            set = self.stages[k].involution(l).image_of_clopen(&set);
        }
        set
    }

    /// Pairwise disjointness at every stage and the diameter surrogate:
    /// each `V^(w)` with `|w| = n` is one cylinder of depth at least `n`.
    pub fn verify(&self) -> Result<()> {
        for (i, s) in self.stages.iter().enumerate() {
            let (a, b) = (s.g.image_of_clopen(&s.u), s.h.image_of_clopen(&s.u));
            if !a.is_disjoint(&b) {
                return Err(Error::InvalidConstruction(format!("stage {}: g(u) and h(u) intersect", i + 1)));
            }
        }
        for n in 1..=self.stages.len() {
            for w in words(n, &[0, 1, 2]) {
                let v = self.v(&w);
                if v.residues().len() != 1 || v.depth() < n {
                    return Err(Error::InvalidConstruction(format!("V^{w:?} is not a deep cylinder")));
                }
            }
        }
        Ok(())
    }

    fn check_omega(&self, omega: &OmegaWord) -> Result<()> {
        if omega.len() > self.stages.len() {
            return Err(Error::LengthMismatch { expected: self.stages.len(), got: omega.len() });
        }
        Ok(())
    }

    /// Generators `f^(omega_k)_k`, `k <= |omega|`.
    pub fn generators(&self, omega: &OmegaWord) -> Vec<TfgElement<T>> {
        omega.letters().iter().zip(&self.stages).map(|(&l, s)| s.involution(l)).collect()
    }
}

/// All words of length `n` over `alphabet`, lexicographic.
fn words(n: usize, alphabet: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Words `w` of length `|omega|` with `w_k ∈ {0, omega_k}`.
fn admissible(omega: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for &l in omega {
        out = out
            .into_iter()
            .flat_map(|w| {
                [0, l].into_iter().map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Union of `V^(w)` over the admissible words of length `|omega|`, a clopen
/// cover of `Y_omega`. `omega` may be shorter than the construction.
pub fn y_cover<T: Scalar>(c: &NdConstruction<T>, omega: &OmegaWord) -> Result<ClopenSet> {
    c.check_omega(omega)?;
    Ok(admissible(omega.letters()).iter().fold(ClopenSet::empty(&c.base), |acc, w| acc.union(&c.v(w))))
}

/// For every admissible `w` shorter than `omega`,
/// `V^(w) \ (V^(w0) ∪ V^(w omega_{|w|+1}))` is nonempty.
pub fn check_nowhere_dense<T: Scalar>(c: &NdConstruction<T>, omega: &OmegaWord) -> bool {
    if c.check_omega(omega).is_err() {
        return false;
    }
    let letters = omega.letters();
    (0..letters.len()).all(|n| {
        admissible(&letters[..n]).into_iter().all(|w| {
            let mut w0 = w.clone();
            w0.push(0);
            let mut w1 = w.clone();
            w1.push(letters[n]);
            !c.v(&w).difference(&c.v(&w0).union(&c.v(&w1))).is_empty()
        })
    })
}

/// Orders of the truncated groups for the first `n` stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedOrders {
    /// `|<f^(omega_1)_1, .., f^(omega_n)_n>|` by closure on elements.
    pub group: usize,
    /// Order of the group generated by `gamma_1, .., gamma_n` on `{0,1}^n`.
    pub gamma_model: usize,
    /// `2^(2^n - 1)`, the order of the iterated wreath product of `Z/2`.
    pub bound: u128,
}

pub fn truncated_group_order<T: Scalar>(c: &NdConstruction<T>, omega: &OmegaWord, n: usize) -> Result<TruncatedOrders> {
    c.check_omega(omega)?;
    if n > omega.len() {
        return Err(Error::LengthMismatch { expected: omega.len(), got: n });
    }
    if n > MAX_CLOSURE_STAGES {
        return Err(Error::ClosureCap(CLOSURE_CAP));
    }
    let gens: Vec<TfgElement<T>> = c.generators(omega).into_iter().take(n).collect();
    let group = generate(TfgElement::identity(&c.base), &gens, |a, b| a.compose(b), CLOSURE_CAP)?.len();
    Ok(TruncatedOrders { group, gamma_model: gamma_order(n)?, bound: 1u128 << ((1u32 << n) - 1) })
}

/// `gamma_k` flips character `k` of strings whose first `k-1` characters
/// are zero. Strings of length `n` are encoded with character `k` at bit
/// `k-1`.
fn gamma_generators(n: usize) -> Vec<Perm> {
    (0..n)
        .map(|k| {
            let low = (1usize << k) - 1;
            let images = (0..1usize << n).map(|s| if s & low == 0 { s ^ (1 << k) } else { s }).collect();
            Perm::new(images).expect("gamma is an involution")
        })
        .collect()
}

fn gamma_order(n: usize) -> Result<usize> {
    Ok(generate(Perm::identity(1 << n), &gamma_generators(n), |a, b| a.compose(b), CLOSURE_CAP)?.len())
}

/// Whether the `gamma` orbit of `0` on `{0,1}^n` is everything.
pub fn gamma_orbit_is_full(n: usize) -> bool {
    let gens = gamma_generators(n);
    let mut seen = vec![false; 1 << n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(s) = stack.pop() {
        for g in &gens {
            let t = g.apply(s);
            if !std::mem::replace(&mut seen[t], true) {
                stack.push(t);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Whether the orbit of `0` under `generators` meets every admissible
/// stage-`|omega|` set `V^(w)`.
pub fn orbit_meets_all<T: Scalar>(c: &NdConstruction<T>, omega: &OmegaWord, generators: &[TfgElement<T>]) -> bool {
    if c.check_omega(omega).is_err() {
        return false;
    }
    let zero = Point::zero(&c.base);
    let mut orbit: HashSet<Point> = HashSet::from([zero.clone()]);
    let mut stack = vec![zero];
    while let Some(x) = stack.pop() {
        for g in generators {
            let y = g.apply_to_point(&x);
            if orbit.insert(y.clone()) {
                if orbit.len() > CLOSURE_CAP {
                    return false;
                }
                stack.push(y);
            }
        }
    }
    admissible(omega.letters()).iter().all(|w| {
        let v = c.v(w);
        orbit.iter().any(|x| v.contains_cylinder(&x.cylinder_of(v.depth())))
    })
}

/// Finite-depth minimality of `H_omega` on `Y_omega`: the orbit of `0`
/// meets every admissible stage set.
pub fn check_minimality_on_y<T: Scalar>(c: &NdConstruction<T>, omega: &OmegaWord) -> bool {
    orbit_meets_all(c, omega, &c.generators(omega))
}
