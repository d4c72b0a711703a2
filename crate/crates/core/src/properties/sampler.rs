//! Seeded random rational symbols.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::factor::Root;
use crate::symbol::{membership, RationalSymbol, SpaceTag};

/// Function class a sampled symbol must belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassConstraint {
    None,
    Hinf,
    HinfBar,
    Invertible,
    Inner,
    Outer,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerProfile {
    pub degree_bound: usize,
    pub inside_annulus: [f64; 2],
    pub outside_annulus: [f64; 2],
    pub allow_circle_zeros: bool,
    pub class_constraint: ClassConstraint,
}

impl Default for SamplerProfile {
    fn default() -> Self {
        Self { degree_bound: 4, inside_annulus: [0.2, 0.8], outside_annulus: [1.25, 5.0], allow_circle_zeros: false, class_constraint: ClassConstraint::None }
    }
}

impl SamplerProfile {
    pub fn with_class(class_constraint: ClassConstraint) -> Self {
        Self { class_constraint, ..Self::default() }
    }
}

/// Minimum distance between any two sampled roots.
const SEPARATION: f64 = 0.08;

#[derive(Clone, Copy, PartialEq)]
enum Region {
    Inside,
    Outside,
    Circle,
}

struct Draw<'a, R: Rng> {
    rng: &'a mut R,
    profile: &'a SamplerProfile,
    taken: Vec<Complex64>,
}

impl<R: Rng> Draw<'_, R> {
    fn point(&mut self, region: Region) -> Complex64 {
        loop {
            let r = match region {
                Region::Inside => self.rng.random_range(self.profile.inside_annulus[0]..=self.profile.inside_annulus[1]),
                Region::Outside => self.rng.random_range(self.profile.outside_annulus[0]..=self.profile.outside_annulus[1]),
                Region::Circle => 1.0,
            };
            let p = Complex64::from_polar(r, self.rng.random_range(0.0..TAU));
            if self.taken.iter().all(|q| (p - q).norm() > SEPARATION) {
                self.taken.push(p);
                return p;
            }
        }
    }

    fn either(&mut self) -> Region {
        if self.rng.random_bool(0.5) {
            Region::Inside
        } else {
            Region::Outside
        }
    }

    fn zero_region(&mut self, otherwise: Region) -> Region {
        if self.profile.allow_circle_zeros && self.rng.random_bool(0.25) {
            Region::Circle
        } else {
            otherwise
        }
    }

    fn roots(&mut self, count: usize, region: impl Fn(&mut Self) -> Region) -> Vec<Root> {
        (0..count)
            .map(|_| {
                let reg = region(self);
                Root::new(self.point(reg), 1)
            })
            .collect()
    }

    fn gain(&mut self) -> Complex64 {
        Complex64::from_polar(self.rng.random_range(0.5..=2.0), self.rng.random_range(0.0..TAU))
    }

    fn count(&mut self, min: usize) -> usize {
        let max = self.profile.degree_bound.max(min);
        self.rng.random_range(min..=max)
    }
}

fn sample_hinf<R: Rng>(d: &mut Draw<'_, R>, outer: bool) -> RationalSymbol {
    let nz = d.count(0);
    let np = d.count(0);
    let zeros = d.roots(nz, |s| {
        let base = if outer { Region::Outside } else { s.either() };
        s.zero_region(base)
    });
    let poles = d.roots(np, |_| Region::Outside);
    let zpow = if outer { 0 } else { d.rng.random_range(0..=1) };
    let gain = d.gain();
    normalized(gain, RationalSymbol::from_zpk(Complex64::new(1.0, 0.0), zpow, &zeros, &poles))
}

/// Rescales `f` so that its sampled maximum on the circle is `|gain|`.
fn normalized(gain: Complex64, f: RationalSymbol) -> RationalSymbol {
    let peak = f.max_abs_on_circle(256);
    if peak > 0.0 && peak.is_finite() {
        f.scale(gain / peak)
    } else {
        f.scale(gain)
    }
}

/// Draws a symbol from `profile` using `rng`.
pub fn sample_with<R: Rng>(profile: &SamplerProfile, rng: &mut R) -> RationalSymbol {
    let mut d = Draw { rng, profile, taken: Vec::new() };
    match profile.class_constraint {
        ClassConstraint::None | ClassConstraint::Invertible => {
            let circle = profile.allow_circle_zeros && profile.class_constraint == ClassConstraint::None;
            let nz = d.count(0);
            let np = d.count(0);
            let zeros = d.roots(nz, |s| {
                let base = s.either();
                if circle && s.rng.random_bool(0.25) {
                    Region::Circle
                } else {
                    base
                }
            });
            let poles = d.roots(np, |s| s.either());
            let zpow = d.rng.random_range(-2..=2);
            let gain = d.gain();
            normalized(gain, RationalSymbol::from_zpk(Complex64::new(1.0, 0.0), zpow, &zeros, &poles))
        }
        ClassConstraint::Hinf => sample_hinf(&mut d, false),
        ClassConstraint::Outer => sample_hinf(&mut d, true),
        ClassConstraint::HinfBar => sample_hinf(&mut d, false).circle_conjugate(),
        ClassConstraint::Inner => {
            let k = d.rng.random_range(0..=2);
            let n = d.count(if k == 0 { 1 } else { 0 });
            let mut theta = RationalSymbol::z_pow(k);
            for _ in 0..n {
                let alpha = d.point(Region::Inside);
                theta = theta.mul(&RationalSymbol::blaschke(alpha));
            }
            let phase = Complex64::from_polar(1.0, d.rng.random_range(0.0..TAU));
            theta.scale(phase)
        }
    }
}

/// Deterministic symbol for a seed.
pub fn sample_symbol(profile: &SamplerProfile, seed: u64) -> RationalSymbol {
    sample_with(profile, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Whether `f` satisfies the class constraint.
pub fn satisfies(f: &RationalSymbol, class: ClassConstraint) -> bool {
    match class {
        ClassConstraint::None => membership(f, SpaceTag::L2),
        ClassConstraint::Hinf => membership(f, SpaceTag::Hinf),
        ClassConstraint::HinfBar => membership(f, SpaceTag::HinfBar),
        ClassConstraint::Inner => membership(f, SpaceTag::InnerPlus),
        ClassConstraint::Outer => membership(f, SpaceTag::OuterPlus) && membership(f, SpaceTag::Hinf),
        ClassConstraint::Invertible => {
            membership(f, SpaceTag::L2) && f.inv().is_ok_and(|g| membership(&g, SpaceTag::L2))
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}
