//! Kakutani-Rokhlin partitions, parity exchange, first-return maps and
//! minimal-power partitions.
//!
//! Return times are computed on residues at the joint depth of `u` and `g`:
//! there `g` permutes cylinders and membership in `u` is a property of the
//! residue, so every cylinder of `u` has one return time.

use crate::cantor::{BaseSequence, ClopenSet};
use crate::element::TfgElement;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One tower: levels `W_{k,1}, .., W_{k,k}` with `g(W_{k,l}) = W_{k,l+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub height: usize,
    pub levels: Vec<ClopenSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrPartition<T> {
    u: ClopenSet,
    g: TfgElement<T>,
    towers: Vec<Tower>,
    avoiding: ClopenSet,
}

impl<T: Scalar> KrPartition<T> {
    pub fn u(&self) -> &ClopenSet {
        &self.u
    }

    pub fn g(&self) -> &TfgElement<T> {
        &self.g
    }

    /// Nonempty towers in increasing height.
    pub fn towers(&self) -> &[Tower] {
        &self.towers
    }

    pub fn tower(&self, height: usize) -> Option<&Tower> {
        self.towers.iter().find(|t| t.height == height)
    }

    /// `W_{k,l}` with 1-based `l`.
    pub fn level(&self, k: usize, l: usize) -> Option<&ClopenSet> {
        self.tower(k).and_then(|t| t.levels.get(l.checked_sub(1)?))
    }

    pub fn heights(&self) -> Vec<usize> {
        self.towers.iter().map(|t| t.height).collect()
    }

    /// Points whose `g`-orbit never meets `u`. Empty whenever `g` is minimal,
    /// in particular for the odometer.
    pub fn avoiding(&self) -> &ClopenSet {
        &self.avoiding
    }

    pub fn covered(&self) -> ClopenSet {
        self.towers.iter().flat_map(|t| &t.levels).fold(ClopenSet::empty(self.u.base()), |a, l| a.union(l))
    }

    /// Checks every structural invariant exactly.
    pub fn verify(&self) -> Result<()> {
        let base = self.u.base();
        let broken = |m: &str| Err(Error::Internal(format!("KR partition: {m}")));
        let mut seen = self.avoiding.clone();
        let mut ground = ClopenSet::empty(base);
        for t in &self.towers {
            if t.levels.len() != t.height || t.height == 0 {
                return broken("tower height does not match its levels");
            }
            for (l, w) in t.levels.iter().enumerate() {
                if w.is_empty() || !seen.is_disjoint(w) {
                    return broken("levels empty or overlapping");
                }
                seen = seen.union(w);
                let img = self.g.image_of_clopen(w);
                if l + 1 < t.height {
                    if img != t.levels[l + 1] {
                        return broken("g does not shift a level onto the next");
                    }
                } else if !img.is_subset(&self.u) {
                    return broken("top level does not return into u");
                }
            }
            for w in &t.levels[1..] {
                if !w.is_disjoint(&self.u) {
                    return broken("upper level meets u");
                }
            }
            ground = ground.union(&t.levels[0]);
        }
        if !seen.is_full() {
            return broken("levels do not cover the space");
        }
        if ground != self.u {
            return broken("ground levels differ from u");
        }
        if self.g.image_of_clopen(&self.avoiding) != self.avoiding || !self.avoiding.is_disjoint(&self.u) {
            return broken("avoiding set is not invariant or meets u");
        }
        Ok(())
    }
}

pub fn build_kr<T: Scalar>(u: &ClopenSet, g: &TfgElement<T>) -> Result<KrPartition<T>> {
    if u.is_empty() {
        return Err(Error::EmptySet);
    }
    u.base().same_as(g.base())?;
    let base = u.base();
    let d = u.depth().max(g.depth());
    let sigma = g.residue_map_at(d);
    let inside = u.mask_at(d);

    // grounds[k] collects the ground residues with return time k
    let mut grounds: Vec<Vec<usize>> = Vec::new();
    for r in u.residues_at(d) {
        let mut k = 1;
        let mut w = sigma[r];
        while !inside[w] {
            w = sigma[w];
            k += 1;
        }
        if grounds.len() <= k {
            grounds.resize(k + 1, Vec::new());
        }
        grounds[k].push(r);
    }

    let mut covered = vec![false; sigma.len()];
    let mut towers = Vec::new();
    for (k, ground) in grounds.into_iter().enumerate() {
        if ground.is_empty() {
            continue;
        }
        let mut level = ground;
        let mut levels = Vec::with_capacity(k);
        for _ in 0..k {
            for &w in &level {
                covered[w] = true;
            }
            let mut sorted = level.clone();
            sorted.sort_unstable();
            levels.push(ClopenSet::from_sorted(base, d, sorted));
            level = level.iter().map(|&w| sigma[w]).collect();
        }
        towers.push(Tower { height: k, levels });
    }
    let rest = (0..covered.len()).filter(|&w| !covered[w]).collect();
    let avoiding = ClopenSet::from_sorted(base, d, rest);
    Ok(KrPartition { u: u.clone(), g: g.clone(), towers, avoiding })
}

/// `u ∩ g^{-1}(X \ u)`, the part of `u` that `g` moves out of `u`.
pub fn exits<T: Scalar>(u: &ClopenSet, g: &TfgElement<T>) -> ClopenSet {
    u.intersection(&g.preimage_of_clopen(&u.complement()))
}

/// `(X \ u) ∩ g^{-1}(u)`, the points `g` moves into `u`.
pub fn entries<T: Scalar>(u: &ClopenSet, g: &TfgElement<T>) -> ClopenSet {
    u.complement().intersection(&g.preimage_of_clopen(u))
}

/// Involution agreeing with `g^{k-1}` on `W_{k,1}` and `g^{1-k}` on
/// `W_{k,k}` for every tower of height `k >= 2`; identity elsewhere.
/// It maps the exits of `u` onto the entries.
pub fn parity_exchange<T: Scalar>(u: &ClopenSet, g: &TfgElement<T>) -> TfgElement<T> {
    let base = u.base();
    if u.is_empty() {
        return TfgElement::identity(base);
    }
    let kr = build_kr(u, g).expect("nonempty u");
    let mut pieces = Vec::new();
    for t in kr.towers.iter().filter(|t| t.height >= 2) {
        let up = g.power(&T::from_residue(t.height - 1));
        pieces.push((t.levels[0].clone(), up.clone()));
        pieces.push((t.levels[t.height - 1].clone(), up.inverse()));
    }
    let refs: Vec<(ClopenSet, &TfgElement<T>)> = pieces.iter().map(|(s, e)| (s.clone(), e)).collect();
    TfgElement::piecewise(base, &refs).expect("tower ends are disjoint")
}

/// `g = g_u ∘ h_u` where `g_u` is the first-return map of `g` to `u`
/// (identity off `u`) and `h_u` climbs each tower and drops from the top
/// level back to the ground. On the avoiding set `h_u` agrees with `g`.
pub fn first_return_of<T: Scalar>(u: &ClopenSet, g: &TfgElement<T>) -> Result<(TfgElement<T>, TfgElement<T>)> {
    let kr = build_kr(u, g)?;
    let base = u.base();
    let mut ret = Vec::new();
    let mut climb = Vec::new();
    for t in &kr.towers {
        let k = T::from_residue(t.height);
        ret.push((t.levels[0].clone(), g.power(&k)));
        climb.push((t.levels[t.height - 1].clone(), g.power(&(T::one() - k))));
        for w in &t.levels[..t.height - 1] {
            climb.push((w.clone(), g.clone()));
        }
    }
    climb.push((kr.avoiding.clone(), g.clone()));
    let glue = |pieces: &[(ClopenSet, TfgElement<T>)]| {
        let refs: Vec<(ClopenSet, &TfgElement<T>)> = pieces.iter().map(|(s, e)| (s.clone(), e)).collect();
        TfgElement::piecewise(base, &refs)
    };
    Ok((glue(&ret)?, glue(&climb)?))
}

/// First-return decomposition of the odometer: `f = f_u ∘ h_u`.
pub fn first_return<T: Scalar>(u: &ClopenSet) -> Result<(TfgElement<T>, TfgElement<T>)> {
    first_return_of(u, &TfgElement::odometer(u.base()))
}

/// Default depth at which minimality of power partitions is certified.
pub const DEFAULT_TEST_DEPTH: usize = 6;

/// Number of pieces of [`minimal_power_partition`]: the value at which
/// `gcd(n, K_d)` stabilizes.
pub fn power_period<T: Scalar>(base: &BaseSequence, n: &T) -> Result<usize> {
    if n.is_zero() {
        return Err(Error::InvalidConstruction("power must be nonzero".into()));
    }
    let n = n.abs();
    // gcd(n, K_{d+1}) = gcd(n, gcd(n, K_d) * r_d); stable once a whole
    // period past the pre-period leaves it unchanged.
    let mut g = T::one();
    let mut d = 0;
    loop {
        let before = g.clone();
        let stop = d + if d < base.pre_period().len() { 1 } else { base.period().len() };
        while d < stop {
            g = n.gcd(&(g * T::from_residue(base.radix(d))));
            d += 1;
        }
        if d > base.pre_period().len() && g == before {
            break;
        }
    }
    g.to_usize().ok_or(Error::Internal("partition count does not fit usize".into()))
}

/// Partition of `X` into the clopen sets on which `f^n` acts minimally: the
/// residue classes modulo `p = lim gcd(n, K_d)`, written at the smallest
/// depth with `p | K_d`.
pub fn minimal_power_partition<T: Scalar>(base: &BaseSequence, n: &T) -> Result<Vec<ClopenSet>> {
    let p = power_period(base, n)?;
    let d = base
        .depth_dividing(p, crate::cantor::DEFAULT_DEPTH_LIMIT)
        .ok_or(Error::DepthLimit { depth: usize::MAX, limit: crate::cantor::DEFAULT_DEPTH_LIMIT })?;
    let k = base.modulus(d);
    Ok((0..p).map(|c| ClopenSet::from_sorted(base, d, (c..k).step_by(p).collect())).collect())
}

/// Finite-depth minimality certificate: each piece is `f^n`-invariant, and
/// at every depth from the pieces' depth up to `test_depth` the orbit of
/// one cylinder of a piece under `w -> w + n mod K` is exactly that piece.
pub fn certify_power_partition<T: Scalar>(base: &BaseSequence, n: &T, pieces: &[ClopenSet], test_depth: usize) -> bool {
    let fn_ = TfgElement::<T>::odometer_power(base, n.clone());
    let mut union = ClopenSet::empty(base);
    for p in pieces {
        if p.is_empty() || !union.is_disjoint(p) || fn_.image_of_clopen(p) != *p {
            return false;
        }
        union = union.union(p);
    }
    if !union.is_full() {
        return false;
    }
    let from = pieces.iter().map(|p| p.depth()).max().unwrap_or(0);
    (from..=test_depth.max(from)).all(|d| {
        let k = base.modulus(d);
        let step = n.residue(k);
        pieces.iter().all(|p| {
            let target = p.residues_at(d);
            let mut orbit = vec![target[0]];
            let mut w = (target[0] + step) % k;
            while w != target[0] {
                orbit.push(w);
                w = (w + step) % k;
            }
            orbit.sort_unstable();
            orbit == target
        })
    })
}
