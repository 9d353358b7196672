//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] carries the value of a scalar quantity together with all of its
//! partial derivatives up to a fixed total order (at most 4). Arithmetic on
//! jets propagates derivatives exactly (there is no finite differencing
//! anywhere), so curvature quantities that consume several derivative orders
//! of the metric stay at rounding-level accuracy.
//!
//! Internally a jet stores Taylor *coefficients* `c_a = d^a f / a!` indexed by
//! multi-index `a` in graded lexicographic order; products are then plain
//! truncated convolutions. [`Jet::partial`] converts back to derivatives.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Hard cap on chart dimension for the jet tables.
pub const MAX_DIM: usize = 8;
/// Highest supported truncation order.
pub const MAX_ORDER: usize = 4;

type MultiIndex = [u8; MAX_DIM];

/// Shared tables for jets of a fixed `(dimension, order)` pair.
///
/// Spaces are built once and leaked, so references are `'static` and cheap to
/// copy around. The multiplication table lists every coefficient pair whose
/// degrees still fit inside the truncation order.
pub struct JetSpace {
    dim: usize,
    order: usize,
    monomials: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
    factorial: Vec<f64>,
    mul_pairs: Vec<(u32, u32, u32)>,
    /// Per variable: for each slot of the order-lowered space, the source slot
    /// in this space plus the combinatorial factor.
    deriv: Vec<Vec<(usize, f64)>>,
}

fn enumerate_monomials(dim: usize, order: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = [0u8; MAX_DIM];
    for degree in 0..=order {
        fill(dim, degree, 0, &mut cur, &mut out);
    }
    return out;

    fn fill(dim: usize, left: usize, var: usize, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if var == dim - 1 {
            cur[var] = left as u8;
            out.push(*cur);
            cur[var] = 0;
            return;
        }
        for take in (0..=left).rev() {
            cur[var] = take as u8;
            fill(dim, left - take, var + 1, cur, out);
        }
        cur[var] = 0;
    }
}

fn degree(m: &MultiIndex) -> usize {
    m.iter().map(|&x| x as usize).sum()
}

impl JetSpace {
    fn build(dim: usize, order: usize) -> JetSpace {
        let monomials = enumerate_monomials(dim, order);
        let mut index = HashMap::with_capacity(monomials.len());
        for (i, m) in monomials.iter().enumerate() {
            index.insert(*m, i);
        }
        let factorial: Vec<f64> = monomials
            .iter()
            .map(|m| {
                m[..dim]
                    .iter()
                    .map(|&k| (1..=k as u64).product::<u64>() as f64)
                    .product()
            })
            .collect();
        let mut mul_pairs = Vec::new();
        for (ia, a) in monomials.iter().enumerate() {
            let da = degree(a);
            for (ib, b) in monomials.iter().enumerate() {
                if da + degree(b) > order {
                    continue;
                }
                let mut sum = [0u8; MAX_DIM];
                for k in 0..dim {
                    sum[k] = a[k] + b[k];
                }
                mul_pairs.push((ia as u32, ib as u32, index[&sum] as u32));
            }
        }
        let mut deriv = Vec::with_capacity(dim);
        if order > 0 {
            let lower = enumerate_monomials(dim, order - 1);
            for v in 0..dim {
                let mut table = Vec::with_capacity(lower.len());
                for beta in &lower {
                    let mut src = *beta;
                    src[v] += 1;
                    table.push((index[&src], (beta[v] + 1) as f64));
                }
                deriv.push(table);
            }
        }
        JetSpace { dim, order, monomials, index, factorial, mul_pairs, deriv }
    }

    /// Registry lookup; builds the tables on first use.
    pub fn get(dim: usize, order: usize) -> Result<&'static JetSpace> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::invalid(format!("jet dimension {dim} outside 1..={MAX_DIM}")));
        }
        if order > MAX_ORDER {
            return Err(Error::JetOrder { order });
        }
        static REGISTRY: OnceLock<Mutex<HashMap<(usize, usize), &'static JetSpace>>> =
            OnceLock::new();
        let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = registry.lock().unwrap();
        Ok(map
            .entry((dim, order))
            .or_insert_with(|| Box::leak(Box::new(JetSpace::build(dim, order)))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn slot(&self, multi: &[usize]) -> Option<usize> {
        let mut key = [0u8; MAX_DIM];
        for (k, &m) in multi.iter().enumerate() {
            if k >= self.dim {
                return None;
            }
            key[k] = m as u8;
        }
        self.index.get(&key).copied()
    }
}

/// Value plus exact partial derivatives up to the space's order.
#[derive(Clone)]
pub struct Jet {
    space: &'static JetSpace,
    coeffs: Vec<f64>,
}

impl std::fmt::Debug for Jet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Jet")
            .field("dim", &self.space.dim)
            .field("order", &self.space.order)
            .field("value", &self.coeffs[0])
            .finish()
    }
}

impl Jet {
    pub fn zero(space: &'static JetSpace) -> Jet {
        Jet { space, coeffs: vec![0.0; space.len()] }
    }

    pub fn constant(space: &'static JetSpace, value: f64) -> Jet {
        let mut j = Jet::zero(space);
        j.coeffs[0] = value;
        j
    }

    /// Seeds coordinate `var` with value `value`: the order-1 slot for that
    /// variable is 1, everything higher vanishes.
    pub fn variable(space: &'static JetSpace, var: usize, value: f64) -> Jet {
        assert!(var < space.dim, "variable index out of range");
        let mut j = Jet::zero(space);
        j.coeffs[0] = value;
        if space.order >= 1 {
            let mut multi = [0usize; MAX_DIM];
            multi[var] = 1;
            let slot = space.slot(&multi[..space.dim]).unwrap();
            j.coeffs[slot] = 1.0;
        }
        j
    }

    pub fn space(&self) -> &'static JetSpace {
        self.space
    }

    pub fn order(&self) -> usize {
        self.space.order
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    /// Plain value: the order-0 slot.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw Taylor coefficient by storage slot; mainly for diagnostics.
    pub fn coeff_raw(&self, slot: usize) -> f64 {
        self.coeffs[slot]
    }

    /// Partial derivative for a multi-index given as per-variable counts.
    pub fn partial(&self, multi: &[usize]) -> f64 {
        assert!(multi.len() <= self.space.dim, "multi-index longer than dimension");
        match self.space.slot(multi) {
            Some(slot) => self.coeffs[slot] * self.space.factorial[slot],
            None => panic!("multi-index exceeds jet order"),
        }
    }

    /// Derivative with respect to one variable; drops the order by one.
    pub fn derivative(&self, var: usize) -> Jet {
        assert!(self.space.order >= 1, "cannot differentiate an order-0 jet");
        assert!(var < self.space.dim);
        let lower = JetSpace::get(self.space.dim, self.space.order - 1).unwrap();
        let table = &self.space.deriv[var];
        let mut coeffs = Vec::with_capacity(lower.len());
        for &(src, factor) in table {
            coeffs.push(self.coeffs[src] * factor);
        }
        Jet { space: lower, coeffs }
    }

    /// Truncates to a lower order (graded ordering makes this a prefix copy).
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.space.order {
            return self.clone();
        }
        let lower = JetSpace::get(self.space.dim, order).unwrap();
        Jet { space: lower, coeffs: self.coeffs[..lower.len()].to_vec() }
    }

    fn aligned(&self, other: &Jet) -> (Jet, Jet) {
        assert_eq!(self.space.dim, other.space.dim, "jet dimensions differ");
        if self.space.order == other.space.order {
            (self.clone(), other.clone())
        } else if self.space.order < other.space.order {
            (self.clone(), other.truncate(self.space.order))
        } else {
            (self.truncate(other.space.order), other.clone())
        }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }

    pub fn neg(&self) -> Jet {
        let mut a = self.clone();
        for x in a.coeffs.iter_mut() {
            *x = -*x;
        }
        a
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut a = self.clone();
        for x in a.coeffs.iter_mut() {
            *x *= s;
        }
        a
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut a = self.clone();
        a.coeffs[0] += s;
        a
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let (a, b) = self.aligned(other);
        let space = a.space;
        let mut out = vec![0.0; space.len()];
        for &(ia, ib, tgt) in &space.mul_pairs {
            out[tgt as usize] += a.coeffs[ia as usize] * b.coeffs[ib as usize];
        }
        Jet { space, coeffs: out }
    }

    /// Truncated composition `sum_k derivs[k]/k! * (self - value)^k`.
    ///
    /// `derivs[k]` must hold the k-th derivative of the outer function at
    /// `self.value()`. Only the first `order + 1` entries are used.
    fn compose(&self, derivs: &[f64]) -> Jet {
        let order = self.space.order;
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut fact = 1.0;
        let mut taylor = Vec::with_capacity(order + 1);
        for (k, d) in derivs.iter().take(order + 1).enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            taylor.push(d / fact);
        }
        let mut acc = Jet::constant(self.space, *taylor.last().unwrap());
        for k in (0..taylor.len() - 1).rev() {
            acc = acc.mul(&h).add_scalar(taylor[k]);
        }
        acc
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c, s];
        self.compose(&cycle)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s, c];
        self.compose(&cycle)
    }

    pub fn tan(&self) -> std::result::Result<Jet, DomainIssue> {
        let c = self.value().cos();
        if c.abs() < 1e-12 {
            return Err(DomainIssue::TanPole { at: self.value() });
        }
        let t = self.value().tan();
        let t2 = t * t;
        let derivs = [
            t,
            1.0 + t2,
            2.0 * t * (1.0 + t2),
            2.0 + 8.0 * t2 + 6.0 * t2 * t2,
            16.0 * t + 40.0 * t2 * t + 24.0 * t2 * t2 * t,
        ];
        Ok(self.compose(&derivs))
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&[e, e, e, e, e])
    }

    pub fn ln(&self) -> std::result::Result<Jet, DomainIssue> {
        let v = self.value();
        if v <= 0.0 {
            return Err(DomainIssue::LogNonPositive { at: v });
        }
        let mut derivs = [0.0; MAX_ORDER + 1];
        derivs[0] = v.ln();
        let mut sign = 1.0;
        let mut fact = 1.0;
        let mut pw = v;
        for k in 1..=MAX_ORDER {
            if k > 1 {
                fact *= (k - 1) as f64;
                pw *= v;
            }
            derivs[k] = sign * fact / pw;
            sign = -sign;
        }
        Ok(self.compose(&derivs))
    }

    pub fn sqrt(&self) -> std::result::Result<Jet, DomainIssue> {
        let v = self.value();
        if v < 0.0 || (v == 0.0 && self.space.order > 0) {
            return Err(DomainIssue::SqrtNegative { at: v });
        }
        if self.space.order == 0 {
            return Ok(Jet::constant(self.space, v.sqrt()));
        }
        let mut derivs = [0.0; MAX_ORDER + 1];
        let mut coef = 1.0;
        for (k, d) in derivs.iter_mut().enumerate() {
            if k > 0 {
                coef *= 0.5 - (k as f64 - 1.0);
            }
            *d = coef * v.powf(0.5 - k as f64);
        }
        Ok(self.compose(&derivs))
    }

    pub fn recip(&self) -> std::result::Result<Jet, DomainIssue> {
        let v = self.value();
        if v.abs() < 1e-12 {
            return Err(DomainIssue::DivisionByZero { at: v });
        }
        // 1/b = (1/b0) * sum (-u)^k with u = b/b0 - 1, which compose() handles
        // through the reciprocal's derivative ladder.
        let mut derivs = [0.0; MAX_ORDER + 1];
        let mut sign = 1.0;
        let mut fact = 1.0;
        let mut pw = v;
        for (k, d) in derivs.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
                pw *= v;
            }
            *d = sign * fact / pw;
            sign = -sign;
        }
        Ok(self.compose(&derivs))
    }

    pub fn div(&self, other: &Jet) -> std::result::Result<Jet, DomainIssue> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn powi(&self, n: i64) -> std::result::Result<Jet, DomainIssue> {
        if n == 0 {
            return Ok(Jet::constant(self.space, 1.0));
        }
        let mut exp = n.unsigned_abs();
        let mut base = self.clone();
        let mut acc: Option<Jet> = None;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        let result = acc.unwrap();
        if n < 0 {
            result.recip()
        } else {
            Ok(result)
        }
    }

    /// Power with a constant exponent. Integer exponents work for any base;
    /// fractional ones require a strictly positive base.
    pub fn powf(&self, exponent: f64) -> std::result::Result<Jet, DomainIssue> {
        let rounded = exponent.round();
        if (exponent - rounded).abs() < 1e-12 && rounded.abs() < 9.0e15 {
            return self.powi(rounded as i64);
        }
        let v = self.value();
        if v <= 0.0 {
            return Err(DomainIssue::FractionalPow { base: v, exponent });
        }
        let mut derivs = [0.0; MAX_ORDER + 1];
        let mut coef = 1.0;
        for (k, d) in derivs.iter_mut().enumerate() {
            if k > 0 {
                coef *= exponent - (k as f64 - 1.0);
            }
            *d = coef * v.powf(exponent - k as f64);
        }
        Ok(self.compose(&derivs))
    }
}

/// Numerical-domain failures raised by jet arithmetic; the expression
/// evaluator attaches source spans to these.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainIssue {
    DivisionByZero { at: f64 },
    LogNonPositive { at: f64 },
    SqrtNegative { at: f64 },
    TanPole { at: f64 },
    FractionalPow { base: f64, exponent: f64 },
}

impl std::fmt::Display for DomainIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainIssue::DivisionByZero { at } => {
                write!(f, "division by near-zero value {at:.3e}")
            }
            DomainIssue::LogNonPositive { at } => write!(f, "log of non-positive value {at}"),
            DomainIssue::SqrtNegative { at } => write!(f, "sqrt domain violation at value {at}"),
            DomainIssue::TanPole { at } => write!(f, "tan evaluated at a pole (argument {at})"),
            DomainIssue::FractionalPow { base, exponent } => {
                write!(f, "fractional power {exponent} of non-positive base {base}")
            }
        }
    }
}
