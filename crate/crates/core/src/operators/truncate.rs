//! Rectangular truncations: columns are exact images of monomials.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::expr::{Node, OperatorExpression, Space};
use crate::symbol::{FourierSeries, LaurentPoly, RationalSymbol};

pub const MAX_WINDOW: usize = 4096;

/// Relative size below which symbol Fourier coefficients are dropped.
pub const TAIL_CUTOFF: f64 = 1e-17;

/// A dense coefficient segment starting at index `lo`.
#[derive(Debug, Clone)]
struct Segment {
    lo: i64,
    v: Vec<Complex64>,
}

impl Segment {
    fn unit(j: i64) -> Self {
        Self { lo: j, v: vec![Complex64::new(1.0, 0.0)] }
    }

    fn hi(&self) -> i64 {
        self.lo + self.v.len() as i64 - 1
    }

    fn empty() -> Self {
        Self { lo: 0, v: Vec::new() }
    }

    fn conv(&self, a: &Segment) -> Segment {
        if self.v.is_empty() || a.v.is_empty() {
            return Segment::empty();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.v.len() + a.v.len() - 1];
        for (i, &x) in self.v.iter().enumerate() {
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &y) in a.v.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Segment { lo: self.lo + a.lo, v: out }
    }

    /// Keeps indices in `[from, to]`.
    fn restrict(&self, from: i64, to: i64) -> Segment {
        let lo = self.lo.max(from);
        let hi = self.hi().min(to);
        if self.v.is_empty() || lo > hi {
            return Segment::empty();
        }
        Segment { lo, v: self.v[(lo - self.lo) as usize..=(hi - self.lo) as usize].to_vec() }
    }

    fn plus(&self) -> Segment {
        self.restrict(0, i64::MAX)
    }

    fn minus(&self) -> Segment {
        self.restrict(i64::MIN, -1)
    }

    fn add(&self, other: &Segment) -> Segment {
        if self.v.is_empty() {
            return other.clone();
        }
        if other.v.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut v = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (i, &x) in self.v.iter().enumerate() {
            v[(self.lo - lo) as usize + i] += x;
        }
        for (i, &x) in other.v.iter().enumerate() {
            v[(other.lo - lo) as usize + i] += x;
        }
        Segment { lo, v }
    }

    fn scale(&self, s: Complex64) -> Segment {
        Segment { lo: self.lo, v: self.v.iter().map(|&x| x * s).collect() }
    }
}

/// Fourier coefficients of a symbol over its effective support.
fn symbol_segment(a: &RationalSymbol) -> Result<Segment> {
    if let Some(p) = a.as_laurent() {
        let (lo, v) = p.to_dense();
        return Ok(Segment { lo, v });
    }
    let fs = FourierSeries::new(a)?;
    let (lo, hi) = fs.effective_support(TAIL_CUTOFF);
    Ok(Segment { lo, v: (lo..=hi).map(|k| fs.coefficient(k)).collect() })
}

enum Compiled {
    Paired(Segment, Segment),
    Transposed(Segment, Segment),
    PlusMul(Segment),
    MinusMul(Segment),
    Mult(Segment),
    ProjPlus,
    ProjMinus,
    Compose(Box<Compiled>, Box<Compiled>),
    Sum(Box<Compiled>, Box<Compiled>),
    Scale(Complex64, Box<Compiled>),
    Commutator(Box<Compiled>, Box<Compiled>),
}

fn compile(node: &Node) -> Result<Compiled> {
    Ok(match node {
        Node::Paired { a, b, .. } => Compiled::Paired(symbol_segment(a)?, symbol_segment(b)?),
        Node::Transposed { a, b, .. } => Compiled::Transposed(symbol_segment(a)?, symbol_segment(b)?),
        Node::Toeplitz(a) | Node::HankelTilde(a) => Compiled::PlusMul(symbol_segment(a)?),
        Node::DualToeplitz(a) | Node::Hankel(a) => Compiled::MinusMul(symbol_segment(a)?),
        Node::Mult(a) => Compiled::Mult(symbol_segment(a)?),
        Node::ProjPlus => Compiled::ProjPlus,
        Node::ProjMinus => Compiled::ProjMinus,
        Node::Compose(x, y) => Compiled::Compose(Box::new(compile(x)?), Box::new(compile(y)?)),
        Node::Sum(x, y) => Compiled::Sum(Box::new(compile(x)?), Box::new(compile(y)?)),
        Node::Scale(s, x) => Compiled::Scale(*s, Box::new(compile(x)?)),
        Node::Commutator(x, y) => Compiled::Commutator(Box::new(compile(x)?), Box::new(compile(y)?)),
    })
}

fn run(c: &Compiled, v: &Segment) -> Segment {
    match c {
        Compiled::Paired(a, b) => v.plus().conv(a).add(&v.minus().conv(b)),
        Compiled::Transposed(a, b) => v.conv(a).plus().add(&v.conv(b).minus()),
        Compiled::PlusMul(a) => v.conv(a).plus(),
        Compiled::MinusMul(a) => v.conv(a).minus(),
        Compiled::Mult(a) => v.conv(a),
        Compiled::ProjPlus => v.plus(),
        Compiled::ProjMinus => v.minus(),
        Compiled::Compose(x, y) => run(x, &run(y, v)),
        Compiled::Sum(x, y) => run(x, v).add(&run(y, v)),
        Compiled::Scale(s, x) => run(x, v).scale(*s),
        Compiled::Commutator(x, y) => run(x, &run(y, v)).add(&run(y, &run(x, v)).scale(Complex64::new(-1.0, 0.0))),
    }
}

/// Index range `[lo, hi]` of the monomials a domain contributes at size `n`.
pub fn input_window(domain: Space, n: usize) -> (i64, i64) {
    let n = n as i64;
    match domain {
        Space::L2 => (-n, n),
        Space::H2Plus => (0, n),
        Space::H2Minus => (-n, -1),
    }
}

/// Matrix of an operator on the monomials of a window, with an expanded output window.
#[derive(Debug, Clone)]
pub struct TruncationMatrix {
    pub entries: DMatrix<Complex64>,
    /// Exponents of the columns, `in_window.0 ..= in_window.1`.
    pub in_window: (i64, i64),
    /// Exponents of the rows.
    pub out_window: (i64, i64),
    pub n: usize,
}

impl TruncationMatrix {
    /// Extra rows beyond the input window on either side.
    pub fn bandwidth(&self) -> i64 {
        (self.in_window.0 - self.out_window.0).max(self.out_window.1 - self.in_window.1)
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    /// Coefficient vector of `f` over the input window. Coefficients outside are ignored.
    pub fn vec_in(&self, f: &LaurentPoly) -> DVector<Complex64> {
        let (lo, hi) = self.in_window;
        DVector::from_iterator((hi - lo + 1) as usize, (lo..=hi).map(|k| f.coeff(k)))
    }

    /// Laurent polynomial with coefficients `v` over the output window.
    pub fn poly_out(&self, v: &DVector<Complex64>) -> LaurentPoly {
        LaurentPoly::from_dense(self.out_window.0, v.as_slice())
    }

    /// Laurent polynomial with coefficients `v` over the input window.
    pub fn poly_in(&self, v: &DVector<Complex64>) -> LaurentPoly {
        LaurentPoly::from_dense(self.in_window.0, v.as_slice())
    }

    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        self.poly_out(&(&self.entries * self.vec_in(f)))
    }
}

/// Truncation at size `n` over the columns of the operator's domain window.
pub fn truncate(x: &OperatorExpression, n: usize) -> Result<TruncationMatrix> {
    let (lo, hi) = input_window(x.domain, n);
    truncate_window(x, n, lo, hi)
}

/// Truncation with explicitly chosen column exponents `lo..=hi`.
pub fn truncate_window(x: &OperatorExpression, n: usize, lo: i64, hi: i64) -> Result<TruncationMatrix> {
    if n > MAX_WINDOW || n == 0 {
        return Err(Error::WindowOverflow(n));
    }
    let c = compile(&x.node)?;
    let columns: Vec<Segment> = (lo..=hi).map(|j| run(&c, &Segment::unit(j))).collect();
    let mut out_lo = lo;
    let mut out_hi = hi;
    for col in columns.iter().filter(|s| !s.v.is_empty()) {
        out_lo = out_lo.min(col.lo);
        out_hi = out_hi.max(col.hi());
    }
    let rows = (out_hi - out_lo + 1) as usize;
    if rows > 4 * MAX_WINDOW + 1 {
        return Err(Error::WindowOverflow(rows));
    }
    let mut m = DMatrix::<Complex64>::zeros(rows, columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.v.iter().enumerate() {
            m[((col.lo - out_lo) as usize + i, j)] = v;
        }
    }
    Ok(TruncationMatrix { entries: m, in_window: (lo, hi), out_window: (out_lo, out_hi), n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::apply::apply_exact;

    fn op(node: Node) -> OperatorExpression {
        OperatorExpression::new(node).unwrap()
    }

    #[test]
    fn shift_matrix() {
        let t = truncate(&op(Node::Mult(RationalSymbol::z_pow(1))), 1).unwrap();
        assert_eq!(t.in_window, (-1, 1));
        assert_eq!(t.out_window, (-1, 2));
        for j in 0..3 {
            assert_eq!(t.entries[(j + 1, j)], Complex64::new(1.0, 0.0));
        }
        assert_eq!(t.entries.iter().filter(|c| c.norm() != 0.0).count(), 3);
    }

    #[test]
    fn signature_operator() {
        let t = truncate(&op(Node::paired(RationalSymbol::one(), RationalSymbol::real(-1.0))), 8).unwrap();
        assert_eq!(t.rows(), 17);
        for j in 0..17 {
            let want = if j >= 8 { 1.0 } else { -1.0 };
            assert_eq!(t.entries[(j, j)], Complex64::new(want, 0.0));
        }
    }

    #[test]
    fn truncation_matches_exact_on_polynomials() {
        let a = RationalSymbol::from_laurent(LaurentPoly::from_real(&[(-2, 3.0), (0, 1.0), (1, -2.0)]));
        let b = RationalSymbol::from_laurent(LaurentPoly::from_real(&[(-1, 1.0), (2, 5.0)]));
        let x = op(Node::commutator(Node::transposed(a, b), Node::Mult(RationalSymbol::z_pow(-1))));
        let f = LaurentPoly::from_real(&[(-4, 1.0), (-1, 7.0), (0, 2.0), (3, -1.0)]);
        let t = truncate(&x, 6).unwrap();
        let exact = apply_exact(&x, &RationalSymbol::from_laurent(f.clone())).unwrap();
        assert_eq!(t.apply(&f), exact.num().clone());
    }
}
