//! Polynomial roots via companion-matrix eigenvalues with Newton polishing.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::LaurentPoly;
use crate::tol::Tolerances;

pub const MAX_DEGREE: usize = 64;

/// Position of a point relative to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Location {
    #[serde(rename = "in")]
    Inside,
    #[serde(rename = "on")]
    On,
    #[serde(rename = "out")]
    Outside,
}

impl Location {
    pub fn classify(z: Complex64, eps_circle: f64) -> Self {
        let r = z.norm();
        if (r - 1.0).abs() <= eps_circle {
            Location::On
        } else if r < 1.0 {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Location of the reflected point `1/conj(z)`.
    pub fn reflected(self) -> Self {
        match self {
            Location::Inside => Location::Outside,
            Location::On => Location::On,
            Location::Outside => Location::Inside,
        }
    }
}

/// A root with multiplicity and location tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub mult: u32,
    pub loc: Location,
}

impl Root {
    pub fn new(value: Complex64, mult: u32) -> Self {
        Self { value, mult, loc: Location::classify(value, Tolerances::DEFAULT.eps_circle) }
    }

    pub fn tagged(value: Complex64, mult: u32, loc: Location) -> Self {
        Self { value, mult, loc }
    }

    /// The reflected root `1/conj(value)`.
    pub fn reflected(&self) -> Self {
        Self { value: 1.0 / self.value.conj(), mult: self.mult, loc: self.loc.reflected() }
    }
}

/// Roots of the polynomial part of a Laurent polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Exponent of the monomial factored out before root finding.
    pub zpow: i64,
    /// Leading coefficient.
    pub lead: Complex64,
}

impl RootSet {
    pub fn degree(&self) -> u32 {
        self.roots.iter().map(|r| r.mult).sum()
    }

    pub fn count(&self, loc: Location) -> i64 {
        self.roots.iter().filter(|r| r.loc == loc).map(|r| r.mult as i64).sum()
    }

    /// Expands `lead · z^zpow · Π (z - r)^m`.
    pub fn expand(&self) -> LaurentPoly {
        expand_roots(&self.roots).scale(self.lead).shift(self.zpow)
    }
}

/// `Π (z - r)^m` as a polynomial.
pub fn expand_roots(roots: &[Root]) -> LaurentPoly {
    let mut dense = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        for _ in 0..r.mult {
            let mut next = vec![Complex64::new(0.0, 0.0); dense.len() + 1];
            for (i, &c) in dense.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r.value;
            }
            dense = next;
        }
    }
    LaurentPoly::from_dense(0, &dense)
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

fn abs_scale(p: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    p.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn companion_eigenvalues(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 1 {
        return vec![-p[0] / p[1]];
    }
    let lead = p[n];
    let mut c = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        c[(0, j)] = -p[n - 1 - j] / lead;
    }
    for i in 1..n {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let schur = nalgebra::linalg::Schur::new(c);
    match schur.eigenvalues() {
        Some(ev) => ev.iter().copied().collect(),
        None => {
            let (_, t) = schur.unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
    }
}

fn polish(p: &[Complex64], z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut best = horner(p, z).0.norm();
    for _ in 0..8 {
        let (v, d) = horner(p, z);
        if d.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let cand = z - v / d;
        let r = horner(p, cand).0.norm();
        if r.is_finite() && r < best {
            best = r;
            z = cand;
        } else {
            break;
        }
    }
    z
}

/// Merges values within `radius` of each other (single linkage) into centroids.
pub fn cluster(values: &[Complex64], radius: f64) -> Vec<(Complex64, u32)> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj.max(ri)] = rj.min(ri);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, u32)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((r, values[i], 1)),
        }
    }
    groups.into_iter().map(|(_, s, m)| (s / m as f64, m)).collect()
}

/// All roots of `p` after factoring out `z^lo`, with default tolerances.
pub fn poly_roots(p: &LaurentPoly) -> Result<RootSet> {
    poly_roots_with(p, &Tolerances::DEFAULT)
}

pub fn poly_roots_with(p: &LaurentPoly, tol: &Tolerances) -> Result<RootSet> {
    let (lo, dense) = p.to_dense();
    if dense.is_empty() {
        return Err(Error::ZeroFunction);
    }
    let n = dense.len() - 1;
    if n > MAX_DEGREE {
        return Err(Error::DegreeOverflow(n));
    }
    let lead = dense[n];
    if n == 0 {
        return Ok(RootSet { roots: Vec::new(), zpow: lo, lead });
    }
    let raw: Vec<Complex64> = companion_eigenvalues(&dense);
    let clustered = cluster(&raw, tol.eps_cluster);
    let mut roots: Vec<Root> = clustered
        .into_iter()
        .map(|(z, m)| {
            let z = if m == 1 { polish(&dense, z) } else { z };
            Root { value: z, mult: m, loc: Location::classify(z, tol.eps_circle) }
        })
        .collect();
    sort_roots(&mut roots);
    Ok(RootSet { roots, zpow: lo, lead })
}

/// Deterministic ordering: by modulus, then argument.
pub fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| {
        a.value
            .norm()
            .partial_cmp(&b.value.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.value.arg().partial_cmp(&b.value.arg()).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Relative residual `|p(r)| / Σ|p_i||r|^i` of a candidate root.
pub fn root_residual(p: &LaurentPoly, r: Complex64) -> f64 {
    let (_, dense) = p.to_dense();
    let s = abs_scale(&dense, r);
    if s == 0.0 {
        0.0
    } else {
        horner(&dense, r).0.norm() / s
    }
}
