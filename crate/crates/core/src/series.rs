//! Truncated q-series whose coefficients are finite exponential polynomials
//! `Σ c_μ e^{2πi(μ|z)}` over a coordinate frame.
//!
//! Two coefficient backends share one API through [`Coeff`]: exact Gaussian
//! rationals ([`GaussRat`]) and `Complex64`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{Mode, VerificationReport};
use crate::Rat;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("frame mismatch: {0:?} vs {1:?}")]
    FrameMismatch(Vec<String>, Vec<String>),
    #[error("insufficient order: have {have}, need {need}")]
    InsufficientOrder { have: String, need: String },
    #[error("Im(tau) must be positive, got {0}")]
    BadTau(f64),
    #[error("expected {expected} frame values, got {got}")]
    PointArity { expected: usize, got: usize },
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("snapshot parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Coefficient ring used by [`QSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const MODE: Mode;
    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_rat(r: Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;

    fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    /// `i^k`.
    fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::one().neg(),
            _ => Self::i().neg(),
        }
    }

    fn scale(&self, r: Rat) -> Self {
        self.mul(&Self::from_rat(r))
    }
}

/// Exact element of `Q(i)` with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn real(r: Rat) -> Self {
        Self::new(big(r), BigRational::zero())
    }

    pub fn imag(r: Rat) -> Self {
        Self::new(BigRational::zero(), big(r))
    }

    /// `self = c · other` for a rational `c`, if such `c` exists.
    pub fn rational_ratio(&self, other: &GaussRat) -> Option<BigRational> {
        if other.is_zero() {
            return None;
        }
        let c = if !other.re.is_zero() { &self.re / &other.re } else { &self.im / &other.im };
        (&other.re * &c == self.re && &other.im * &c == self.im).then_some(c)
    }
}

pub(crate) fn big(r: Rat) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn big_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*i", self.re, sign, self.im.abs())
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussRat {
    type Err = String;

    /// Parses `a/b+c/d*i` (also `a/b-c/d*i`).
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let body = s.strip_suffix("*i").ok_or_else(|| format!("missing `*i` in `{s}`"))?;
        // split at the last sign that is not the leading one
        let pos = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| format!("missing imaginary part in `{s}`"))?;
        let (re, im) = body.split_at(pos);
        let parse = |t: &str| -> std::result::Result<BigRational, String> {
            let t = t.trim_start_matches('+');
            t.parse::<BigRational>().map_err(|e| format!("`{t}`: {e}"))
        };
        Ok(Self::new(parse(re)?, parse(im)?))
    }
}

impl Coeff for GaussRat {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
    fn i() -> Self {
        Self::from_ints(0, 1)
    }
    fn from_rat(r: Rat) -> Self {
        Self::real(r)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::new(&self.re * &o.re, BigRational::zero());
        }
        Self::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    fn neg(&self) -> Self {
        Self::new(-&self.re, -&self.im)
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }
}

impl Coeff for Complex64 {
    const MODE: Mode = Mode::Numeric;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_rat(r: Rat) -> Self {
        Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Coeff::is_zero(self)).then(|| 1.0 / self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Pairings `((μ|b_1), …, (μ|b_k))` against a frame basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExpKey(pub Vec<Rat>);

impl ExpKey {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Rat::zero(); dim])
    }

    pub fn add(&self, o: &ExpKey) -> ExpKey {
        ExpKey(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> ExpKey {
        ExpKey(self.0.iter().map(|a| -a).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Debug for ExpKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExpKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `Σ c_key e^{2πi(key·z)}` with no zero coefficients stored.
#[derive(Clone, PartialEq)]
pub struct ExpPolynomial<C: Coeff> {
    terms: BTreeMap<ExpKey, C>,
}

impl<C: Coeff> Default for ExpPolynomial<C> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> ExpPolynomial<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: ExpKey, c: C) -> Self {
        let mut p = Self::new();
        p.add_term(key, c);
        p
    }

    pub fn add_term(&mut self, key: ExpKey, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_assign(&mut self, o: &ExpPolynomial<C>) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn mul(&self, o: &ExpPolynomial<C>) -> ExpPolynomial<C> {
        let mut out = Self::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                out.add_term(ka.add(kb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> ExpPolynomial<C> {
        let mut out = Self::new();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.mul(c));
        }
        out
    }

    pub fn neg(&self) -> ExpPolynomial<C> {
        Self { terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExpKey, &C)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &ExpKey) -> Option<&C> {
        self.terms.get(key)
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| {
                let arg: Complex64 =
                    k.0.iter().zip(z).map(|(a, zi)| zi * rat_f64(*a)).sum::<Complex64>();
                c.to_complex() * (Complex64::new(0.0, 2.0 * PI) * arg).exp()
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Coeff::abs).fold(0.0, f64::max)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ExpPolynomial<D> {
        let mut out = ExpPolynomial::new();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    pub fn map_keys(&self, f: impl Fn(&ExpKey) -> ExpKey) -> ExpPolynomial<C> {
        let mut out = ExpPolynomial::new();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for ExpPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

pub fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Guaranteed-valid truncation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(Rat),
    /// The series is known exactly (a finite sum).
    Infinite,
}

impl Order {
    pub fn min(self, o: Order) -> Order {
        std::cmp::min(self, o)
    }

    pub fn shift(self, r: Rat) -> Order {
        match self {
            Order::Finite(g) => Order::Finite(g + r),
            Order::Infinite => Order::Infinite,
        }
    }

    pub fn covers(self, r: Rat) -> bool {
        match self {
            Order::Finite(g) => r <= g,
            Order::Infinite => true,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(g) => write!(f, "{g}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// A point `(τ, z_1, …, z_k)` with `Im τ > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoint {
    pub tau: Complex64,
    pub z: Vec<Complex64>,
}

impl EvalPoint {
    pub fn new(tau: Complex64, z: Vec<Complex64>) -> Result<Self> {
        if tau.im <= 0.0 || tau.im.is_nan() {
            return Err(SeriesError::BadTau(tau.im));
        }
        Ok(Self { tau, z })
    }

    pub fn q_abs(&self) -> f64 {
        (-2.0 * PI * self.tau.im).exp()
    }
}

/// `Σ_r P_r(z) q^r`, all exponents `≤ order` exactly present.
#[derive(Clone, PartialEq)]
pub struct QSeries<C: Coeff> {
    vars: Vec<String>,
    terms: BTreeMap<Rat, ExpPolynomial<C>>,
    order: Order,
}

impl<C: Coeff> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[{:?}; O(q^>{})] ", self.vars, self.order)?;
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<C: Coeff> QSeries<C> {
    pub fn zero(vars: Vec<String>, order: Order) -> Self {
        Self { vars, terms: BTreeMap::new(), order }
    }

    /// The exact constant `1`.
    pub fn one(vars: Vec<String>) -> Self {
        let dim = vars.len();
        let mut s = Self::zero(vars, Order::Infinite);
        s.add_term(Rat::zero(), ExpKey::zero(dim), C::one());
        s
    }

    pub fn monomial(vars: Vec<String>, exp: Rat, key: ExpKey, c: C, order: Order) -> Self {
        let mut s = Self::zero(vars, order);
        s.add_term(exp, key, c);
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Accumulates a term; terms beyond the valid order are dropped.
    pub fn add_term(&mut self, exp: Rat, key: ExpKey, c: C) {
        assert_eq!(key.dim(), self.vars.len(), "key dimension must match the frame");
        if !self.order.covers(exp) || c.is_zero() {
            return;
        }
        let poly = self.terms.entry(exp).or_default();
        poly.add_term(key, c);
        if poly.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &ExpPolynomial<C>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: Rat, key: &ExpKey) -> C {
        self.terms.get(&exp).and_then(|p| p.get(key)).cloned().unwrap_or_else(C::zero)
    }

    pub fn poly_at(&self, exp: Rat) -> Option<&ExpPolynomial<C>> {
        self.terms.get(&exp)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.values().map(ExpPolynomial::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest stored exponent.
    pub fn lead(&self) -> Option<Rat> {
        self.terms.keys().next().copied()
    }

    /// Lead for order bookkeeping; unknown tails start right after `order`.
    fn effective_lead(&self) -> Option<Rat> {
        match (self.lead(), self.order) {
            (Some(l), _) => Some(l),
            (None, Order::Finite(g)) => Some(g),
            (None, Order::Infinite) => None,
        }
    }

    pub fn truncate(&self, order: Order) -> Self {
        let order = self.order.min(order);
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| order.covers(**e))
                .map(|(e, p)| (*e, p.clone()))
                .collect(),
            order,
        }
    }

    /// Declares the series valid up to `order` (caller guarantees it).
    pub fn with_order(mut self, order: Order) -> Self {
        self.order = order;
        self.terms.retain(|e, _| order.covers(*e));
        self
    }

    fn check_frame(&self, o: &Self) -> Result<()> {
        if self.vars != o.vars {
            return Err(SeriesError::FrameMismatch(self.vars.clone(), o.vars.clone()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_frame(o)?;
        let mut out = self.truncate(o.order);
        for (e, p) in &o.terms {
            for (k, c) in p.iter() {
                out.add_term(*e, k.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, p)| (*e, p.neg())).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.order);
        for (e, p) in &self.terms {
            let sp = p.scale(c);
            if !sp.is_zero() {
                out.terms.insert(*e, sp);
            }
        }
        out
    }

    /// Multiplies by `q^r` (exactly; the order shifts too).
    pub fn shift_q(&self, r: Rat) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, p)| (e + r, p.clone())).collect(),
            order: self.order.shift(r),
        }
    }

    /// Product with the conservative order `min(G_a + lead_b, G_b + lead_a)`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_frame(o)?;
        let la = self.effective_lead();
        let lb = o.effective_lead();
        let order = match (la, lb) {
            (Some(la), Some(lb)) => self.order.shift(lb).min(o.order.shift(la)),
            _ => Order::Infinite,
        };
        let a: Vec<(&Rat, &ExpPolynomial<C>)> = self.terms.iter().collect();
        let partial = |&(ea, pa): &(&Rat, &ExpPolynomial<C>)| {
            let mut m: BTreeMap<Rat, ExpPolynomial<C>> = BTreeMap::new();
            for (eb, pb) in &o.terms {
                let e = ea + eb;
                if !order.covers(e) {
                    break;
                }
                m.entry(e).or_default().add_assign(&pa.mul(pb));
            }
            m
        };
        let parts: Vec<BTreeMap<Rat, ExpPolynomial<C>>> = if a.len() * o.terms.len() > 4096 {
            a.par_iter().map(partial).collect()
        } else {
            a.iter().map(partial).collect()
        };
        // fixed merge order keeps floating-point results reproducible
        let mut out = Self::zero(self.vars.clone(), order);
        for part in parts {
            for (e, p) in part {
                let slot = out.terms.entry(e).or_default();
                slot.add_assign(&p);
                if slot.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.vars.clone());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// True when every key is the zero vector.
    pub fn is_pure_q(&self) -> bool {
        self.terms.values().all(|p| p.iter().all(|(k, _)| k.0.iter().all(Zero::is_zero)))
    }

    /// Inverse of a pure-q series with a unit leading coefficient.
    /// If `s = c q^L (1 + …)` is valid to `G`, the inverse is valid to `G − 2L`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_pure_q() {
            return Err(SeriesError::NotInvertible("exponential-polynomial coefficients".into()));
        }
        let lead = self.lead().ok_or_else(|| SeriesError::NotInvertible("zero series".into()))?;
        let dim = self.dim();
        let zero_key = ExpKey::zero(dim);
        let c0 = self.coeff(lead, &zero_key);
        let c0_inv = c0.inv().ok_or_else(|| SeriesError::NotInvertible("zero lead".into()))?;
        let Order::Finite(g) = self.order else {
            // finite exact sums are inverted to a default horizon by the caller
            return Err(SeriesError::NotInvertible("exact series needs an explicit order".into()));
        };
        let span = g - lead;
        let den = self.terms.keys().fold(1i64, |acc, e| num_integer::lcm(acc, *(e - lead).denom()));
        let n_max = (span * Rat::from_integer(den)).floor().to_integer();
        if n_max < 0 {
            return Ok(Self::zero(self.vars.clone(), Order::Finite(g - lead - lead)));
        }
        let n_max = n_max as usize;
        let mut u = vec![C::zero(); n_max + 1];
        for (e, p) in &self.terms {
            let idx = ((e - lead) * Rat::from_integer(den)).to_integer() as usize;
            if idx <= n_max {
                u[idx] = p.get(&zero_key).cloned().unwrap_or_else(C::zero).mul(&c0_inv);
            }
        }
        let mut v = vec![C::zero(); n_max + 1];
        v[0] = C::one();
        for n in 1..=n_max {
            let mut acc = C::zero();
            for k in 1..=n {
                if !u[k].is_zero() {
                    acc = acc.add(&u[k].mul(&v[n - k]));
                }
            }
            v[n] = acc.neg();
        }
        let order = Order::Finite(g - lead - lead);
        let mut out = Self::zero(self.vars.clone(), order);
        for (n, c) in v.into_iter().enumerate() {
            let e = Rat::new(n as i64, den) - lead;
            out.add_term(e, zero_key.clone(), c.mul(&c0_inv));
        }
        Ok(out)
    }

    /// Sum of the stored terms at a point, in ascending exponent order.
    pub fn evaluate(&self, p: &EvalPoint) -> Result<Complex64> {
        if p.z.len() != self.dim() {
            return Err(SeriesError::PointArity { expected: self.dim(), got: p.z.len() });
        }
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        Ok(self
            .terms
            .iter()
            .map(|(e, poly)| poly.evaluate(&p.z) * (two_pi_i * p.tau * rat_f64(*e)).exp())
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b))
    }

    /// Heuristic size of the omitted tail at `p`: the magnitude of the top
    /// unit window of stored terms, continued geometrically in `|q|`.
    pub fn tail_estimate(&self, p: &EvalPoint) -> f64 {
        let Order::Finite(g) = self.order else { return 0.0 };
        let qa = p.q_abs();
        let window = g - Rat::one();
        let mut top = 0.0f64;
        let zscale: f64 = p.z.iter().map(|z| (2.0 * PI * z.im.abs()).exp()).product();
        for (e, poly) in self.terms.range(window..) {
            let keymax = poly
                .iter()
                .map(|(k, c)| {
                    let kn: f64 = k.0.iter().map(|r| rat_f64(*r).abs()).fold(0.0, f64::max);
                    c.abs() * zscale.powf(kn)
                })
                .sum::<f64>();
            top = top.max(keymax * qa.powf(rat_f64(*e)));
        }
        if top == 0.0 {
            // nothing stored near the horizon: fall back to |q|^G
            return qa.powf(rat_f64(g).max(0.0));
        }
        top * qa / (1.0 - qa)
    }

    /// Evaluates and refuses when the heuristic tail exceeds `tol`.
    pub fn evaluate_checked(&self, p: &EvalPoint, tol: f64) -> Result<Complex64> {
        let tail = self.tail_estimate(p);
        if tail > tol {
            return Err(SeriesError::InsufficientOrder {
                have: self.order.to_string(),
                need: format!("tail {tail:.2e} > {tol:.1e} at tau={}", p.tau),
            });
        }
        self.evaluate(p)
    }

    /// `τ ↦ τ + 1`: each `q^r` picks up `e^{2πir}`.
    pub fn t_shift(&self) -> QSeries<Complex64> {
        let mut out = QSeries::zero(self.vars.clone(), self.order);
        for (e, poly) in &self.terms {
            let phase = (Complex64::new(0.0, 2.0 * PI) * rat_f64(*e)).exp();
            for (k, c) in poly.iter() {
                out.add_term(*e, k.clone(), c.to_complex() * phase);
            }
        }
        out
    }

    pub fn to_numeric(&self) -> QSeries<Complex64> {
        QSeries {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, p)| (*e, p.map_coeffs(|c| c.to_complex())))
                .collect(),
            order: self.order,
        }
    }

    /// Linear change of frame variables: each key `k` becomes `f(k)`.
    pub fn map_keys(&self, vars: Vec<String>, f: impl Fn(&ExpKey) -> ExpKey) -> Self {
        let mut out = Self::zero(vars, self.order);
        for (e, p) in &self.terms {
            let mp = p.map_keys(&f);
            if !mp.is_zero() {
                out.terms.insert(*e, mp);
            }
        }
        out
    }

    /// Largest coefficient magnitude with exponent `≤ up_to`.
    pub fn max_abs_through(&self, up_to: Rat) -> f64 {
        self.terms.range(..=up_to).map(|(_, p)| p.max_abs()).fold(0.0, f64::max)
    }
}

/// Compares `a` and `b` through `order`; exact emptiness in exact mode,
/// `max |coeff| < tol` in numeric mode.
pub fn assert_equal<C: Coeff>(
    name: &str,
    a: &QSeries<C>,
    b: &QSeries<C>,
    order: Rat,
    tol: f64,
) -> Result<VerificationReport> {
    for s in [a, b] {
        if !s.order().covers(order) {
            return Err(SeriesError::InsufficientOrder {
                have: s.order().to_string(),
                need: order.to_string(),
            });
        }
    }
    let diff = a.sub(b)?;
    let mut report = VerificationReport::new(name, C::MODE).with_order(order);
    if C::MODE == Mode::Numeric {
        report = report.with_tolerance(tol);
    }
    let mut offending = Vec::new();
    let mut residual = 0.0f64;
    for (e, p) in diff.terms.range(..=order) {
        for (k, c) in p.iter() {
            let m = c.abs();
            let bad = match C::MODE {
                Mode::Exact => true,
                Mode::Numeric => m >= tol,
            };
            residual = residual.max(m);
            if bad && offending.len() < 5 {
                offending.push(format!("q^{e} e{k}: {c}"));
            }
        }
    }
    let ok = offending.is_empty();
    let residual = if ok && C::MODE == Mode::Exact { 0.0 } else { residual };
    let line = if ok {
        format!("equal through q^{order}")
    } else {
        format!("differ through q^{order}: {}", offending.join("; "))
    };
    report.record(ok, residual, line);
    Ok(report)
}

impl QSeries<GaussRat> {
    /// Line-based snapshot: a header, then `exponent; key; coeff` per term.
    pub fn to_snapshot(&self) -> String {
        let mut s = format!("# vars = {}; order = {}\n", self.vars.join(","), self.order);
        for (e, p) in &self.terms {
            for (k, c) in p.iter() {
                let key: Vec<String> = k.0.iter().map(|r| r.to_string()).collect();
                s.push_str(&format!("{}; ({}); {}\n", e, key.join(","), c));
            }
        }
        s
    }

    pub fn from_snapshot(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| SeriesError::Parse { line, msg };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| perr(1, "empty snapshot".into()))?;
        let header = header
            .strip_prefix("# vars = ")
            .ok_or_else(|| perr(1, "missing header".into()))?;
        let (vars, order) = header
            .split_once("; order = ")
            .ok_or_else(|| perr(1, "missing order".into()))?;
        let vars: Vec<String> =
            if vars.is_empty() { Vec::new() } else { vars.split(',').map(String::from).collect() };
        let order = if order.trim() == "inf" {
            Order::Infinite
        } else {
            Order::Finite(order.trim().parse::<Rat>().map_err(|e| perr(1, e.to_string()))?)
        };
        let mut s = Self::zero(vars, order);
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(';').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(perr(i + 1, "expected 3 fields".into()));
            }
            let e: Rat = parts[0].parse().map_err(|_| perr(i + 1, "exponent".into()))?;
            let inner = parts[1]
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| perr(i + 1, "key".into()))?;
            let key: Vec<Rat> = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|t| t.trim().parse::<Rat>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| perr(i + 1, "key entry".into()))?
            };
            if key.len() != s.dim() {
                return Err(perr(i + 1, "key arity".into()));
            }
            let c: GaussRat = parts[2].parse().map_err(|m| perr(i + 1, m))?;
            s.add_term(e, ExpKey(key), c);
        }
        Ok(s)
    }

    /// `Some(c)` when `self = c · other` termwise through `order`, `c ∈ Q`.
    pub fn rational_ratio_to(&self, other: &Self, order: Rat) -> Option<BigRational> {
        let mut ratio: Option<BigRational> = None;
        let a: Vec<_> = self.terms.range(..=order).collect();
        let b: Vec<_> = other.terms.range(..=order).collect();
        if a.len() != b.len() {
            return None;
        }
        for ((ea, pa), (eb, pb)) in a.iter().zip(&b) {
            if ea != eb || pa.len() != pb.len() {
                return None;
            }
            for ((ka, ca), (kb, cb)) in pa.iter().zip(pb.iter()) {
                if ka != kb {
                    return None;
                }
                let c = ca.rational_ratio(cb)?;
                match &ratio {
                    None => ratio = Some(c),
                    Some(r) if *r != c => return None,
                    _ => {}
                }
            }
        }
        ratio
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn z1() -> Vec<String> {
        vec!["z".to_string()]
    }

    fn mono(e: Rat, k: Rat, c: i64) -> QSeries<GaussRat> {
        QSeries::monomial(z1(), e, ExpKey(vec![k]), GaussRat::from_ints(c, 0), Order::Finite(int(10)))
    }

    #[test]
    fn cancellation_leaves_empty() {
        let a = mono(rat(1, 8), int(1), 1);
        let b = mono(rat(1, 8), int(1), -1);
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn single_term_product() {
        let a = mono(rat(1, 8), rat(1, 2), 1);
        let b = mono(rat(1, 8), rat(-1, 2), 1);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(rat(1, 4), &ExpKey(vec![int(0)])), GaussRat::one());
    }

    #[test]
    fn product_order_rule() {
        let a = mono(rat(1, 8), int(0), 1).with_order(Order::Finite(int(2)));
        let b = mono(rat(1, 2), int(0), 1).with_order(Order::Finite(int(3)));
        // min(2 + 1/2, 3 + 1/8)
        assert_eq!(a.mul(&b).unwrap().order(), Order::Finite(rat(5, 2)));
        let one = QSeries::<GaussRat>::one(z1());
        assert_eq!(a.mul(&one).unwrap(), a);
    }

    #[test]
    fn frame_mismatch_is_an_error() {
        let a = mono(int(0), int(0), 1);
        let b = QSeries::<GaussRat>::one(vec!["w".into()]);
        assert!(matches!(a.add(&b), Err(SeriesError::FrameMismatch(..))));
    }

    #[test]
    fn inverse_of_geometric() {
        // 1 - q  ->  1 + q + q^2 + ...
        let mut s = QSeries::<GaussRat>::zero(vec![], Order::Finite(int(5)));
        s.add_term(int(0), ExpKey(vec![]), GaussRat::one());
        s.add_term(int(1), ExpKey(vec![]), GaussRat::from_ints(-1, 0));
        let inv = s.inverse().unwrap();
        assert_eq!(inv.order(), Order::Finite(int(5)));
        for n in 0..=5 {
            assert_eq!(inv.coeff(int(n), &ExpKey(vec![])), GaussRat::one());
        }
    }

    #[test]
    fn t_shift_half_integer() {
        let s = mono(rat(1, 2), int(0), 1);
        let t = s.t_shift();
        let c = t.coeff(rat(1, 2), &ExpKey(vec![int(0)]));
        assert!((c - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gauss_display_roundtrip() {
        for g in [GaussRat::from_ints(3, -2), GaussRat::from_ints(0, 0), GaussRat::real(rat(-1, 4))] {
            let s = g.to_string();
            assert_eq!(s.parse::<GaussRat>().unwrap(), g, "{s}");
        }
        assert_eq!(GaussRat::imag(rat(1, 2)).to_string(), "0+1/2*i");
    }

    #[test]
    fn snapshot_roundtrip() {
        let mut s = mono(rat(1, 8), rat(-1, 2), 3);
        s.add_term(rat(9, 8), ExpKey(vec![int(2)]), GaussRat::imag(rat(-1, 2)));
        let text = s.to_snapshot();
        assert_eq!(QSeries::from_snapshot(&text).unwrap(), s);
    }

    #[test]
    fn assert_equal_beyond_order_passes() {
        let a = mono(int(0), int(0), 1);
        let b = a.add(&mono(int(9), int(0), 1)).unwrap();
        assert!(assert_equal("t", &a, &b, int(8), 0.0).unwrap().passed());
        assert!(!assert_equal("t", &a, &b, int(9), 0.0).unwrap().passed());
        assert!(assert_equal("t", &a, &b, int(11), 0.0).is_err());
    }

    #[test]
    fn evaluate_trivial() {
        let p = EvalPoint::new(Complex64::new(0.0, 1.0), vec![Complex64::new(0.1, 0.0)]).unwrap();
        assert_eq!(QSeries::<GaussRat>::zero(z1(), Order::Infinite).evaluate(&p).unwrap(), Complex64::new(0.0, 0.0));
        assert!((QSeries::<GaussRat>::one(z1()).evaluate(&p).unwrap() - 1.0).norm() < 1e-15);
        assert!(EvalPoint::new(Complex64::new(0.0, -1.0), vec![]).is_err());
    }
}
