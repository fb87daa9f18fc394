//! Jacobi theta functions `θ^{(±)}_{j,m}`, Mumford's `ϑ_{ab}` and Dedekind `η`
//! as exact q-series.
//!
//! The elliptic argument is always a rational linear combination of frame
//! variables (`combo`), so arguments like `2z` or `(z1+z3−z4)/2` are built
//! directly into the keys rather than substituted afterwards.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::floor_sqrt;
use crate::series::{rat_f64, Coeff, ExpKey, GaussRat, Order, QSeries};
use crate::{int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn pow(self, k: i64) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus if k.rem_euclid(2) == 0 => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ThetaKind {
    Jacobi { j: Rat, m: Rat, sign: Sign },
    Mumford { a: u8, b: u8 },
    Eta { power: u32 },
}

/// A theta function together with its elliptic argument `Σ combo_i z_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaSpec {
    pub kind: ThetaKind,
    pub combo: Vec<Rat>,
}

impl ThetaSpec {
    pub fn build(&self, vars: &[String], order: Rat) -> QSeries<GaussRat> {
        match &self.kind {
            ThetaKind::Jacobi { j, m, sign } => jacobi_theta(*j, *m, *sign, &self.combo, vars, order),
            ThetaKind::Mumford { a, b } => mumford_theta(*a, *b, &self.combo, vars, order),
            ThetaKind::Eta { power } => {
                lift(&dedekind_eta(order, *power), vars)
            }
        }
    }
}

/// Integer `k` range with `m (k + c)² ≤ order`.
fn k_range(c: Rat, m: Rat, order: Rat) -> std::ops::RangeInclusive<i64> {
    if order < Rat::zero() {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    let r = floor_sqrt(order / m) + 1;
    (-c).floor().to_integer() - r..=(-c).ceil().to_integer() + r
}

fn key(combo: &[Rat], t: Rat) -> ExpKey {
    ExpKey(combo.iter().map(|c| c * t).collect())
}

/// `θ^{(±)}_{j,m}(τ, Σ combo_i z_i) = Σ_k (±1)^k e^{2πi m(k+j/2m)(combo·z)} q^{m(k+j/2m)²}`.
pub fn jacobi_theta(
    j: Rat,
    m: Rat,
    sign: Sign,
    combo: &[Rat],
    vars: &[String],
    order: Rat,
) -> QSeries<GaussRat> {
    assert!(m > Rat::zero(), "Jacobi modulus must be positive");
    assert_eq!(combo.len(), vars.len());
    let c = j / (m * int(2));
    let mut s = QSeries::zero(vars.to_vec(), Order::Finite(order));
    for k in k_range(c, m, order) {
        let r = int(k) + c;
        let e = m * r * r;
        if e > order {
            continue;
        }
        s.add_term(e, key(combo, m * r), GaussRat::from_ints(sign.pow(k), 0));
    }
    s
}

/// Mumford's `ϑ_{ab}(τ, Σ combo_i z_i)`; `ϑ_{11}` carries the factor `i`.
pub fn mumford_theta(a: u8, b: u8, combo: &[Rat], vars: &[String], order: Rat) -> QSeries<GaussRat> {
    assert!(a <= 1 && b <= 1, "Mumford characteristics are 0 or 1");
    assert_eq!(combo.len(), vars.len());
    let half = if a == 1 { Rat::new(1, 2) } else { Rat::zero() };
    let prefactor = if a == 1 && b == 1 { GaussRat::i() } else { GaussRat::one() };
    let mut s = QSeries::zero(vars.to_vec(), Order::Finite(order));
    for n in k_range(half, Rat::new(1, 2), order) {
        let r = int(n) + half;
        let e = r * r / int(2);
        if e > order {
            continue;
        }
        let sgn = if b == 1 && n.rem_euclid(2) == 1 { -1 } else { 1 };
        s.add_term(e, key(combo, r), prefactor.mul(&GaussRat::from_ints(sgn, 0)));
    }
    s
}

/// `∏_{n≥1}(1 − q^n)` via the pentagonal-number theorem, valid to `order`.
pub fn euler_product(order: Rat) -> QSeries<GaussRat> {
    let mut s = QSeries::zero(Vec::new(), Order::Finite(order));
    if order < Rat::zero() {
        return s;
    }
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = int(kk * (3 * kk - 1) / 2);
            if e <= order {
                any = true;
                let sgn = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                s.add_term(e, ExpKey(vec![]), GaussRat::from_ints(sgn, 0));
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    s
}

/// `η(τ)^power = q^{power/24} ∏(1 − q^n)^power`, valid to `order`.
pub fn dedekind_eta(order: Rat, power: u32) -> QSeries<GaussRat> {
    if power == 0 {
        return QSeries::one(Vec::new());
    }
    let shift = Rat::new(power as i64, 24);
    let p = euler_product(order - shift);
    p.pow(power).expect("pure-q frames agree").shift_q(shift)
}

/// `η(τ)^{−power}`, valid to `order`, by exact inversion of the Euler product.
pub fn dedekind_eta_inverse(order: Rat, power: u32) -> QSeries<GaussRat> {
    if power == 0 {
        return QSeries::one(Vec::new());
    }
    let shift = Rat::new(power as i64, 24);
    let p = euler_product(order + shift).pow(power).expect("pure-q frames agree");
    p.inverse().expect("Euler product has unit lead").shift_q(-shift)
}

/// Lifts a pure-q series into a frame (all keys zero).
pub fn lift(s: &QSeries<GaussRat>, vars: &[String]) -> QSeries<GaussRat> {
    let dim = vars.len();
    s.map_keys(vars.to_vec(), |_| ExpKey::zero(dim))
}

/// Coefficient list `[c_0, c_1, …]` of a pure-q series with exponents in
/// `offset + Z_{≥0}`, for quick comparisons in tests.
pub fn integer_coeffs(s: &QSeries<GaussRat>, offset: Rat, n: usize) -> Vec<GaussRat> {
    let dim = s.dim();
    (0..n).map(|k| s.coeff(offset + int(k as i64), &ExpKey::zero(dim))).collect()
}

/// `e^{2πi(e τ + k z)}`.
fn expo(tau: Complex64, e: f64, z: Complex64, k: f64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * (tau * e + z * k)).exp()
}

/// Point value of [`jacobi_theta`] with a single argument `z`, truncated at
/// the same q-order.
pub fn jacobi_theta_value(j: Rat, m: Rat, sign: Sign, tau: Complex64, z: Complex64, order: Rat) -> Complex64 {
    let c = j / (m * int(2));
    let mut acc = Complex64::new(0.0, 0.0);
    for k in k_range(c, m, order) {
        let r = int(k) + c;
        let e = m * r * r;
        if e <= order {
            acc += expo(tau, rat_f64(e), z, rat_f64(m * r)) * sign.pow(k) as f64;
        }
    }
    acc
}

/// Point value of [`mumford_theta`].
pub fn mumford_theta_value(a: u8, b: u8, tau: Complex64, z: Complex64, order: Rat) -> Complex64 {
    let half = if a == 1 { Rat::new(1, 2) } else { Rat::zero() };
    let mut acc = Complex64::new(0.0, 0.0);
    for n in k_range(half, Rat::new(1, 2), order) {
        let r = int(n) + half;
        let e = r * r / int(2);
        if e <= order {
            let sgn = if b == 1 && n.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            acc += expo(tau, rat_f64(e), z, rat_f64(r)) * sgn;
        }
    }
    if a == 1 && b == 1 {
        acc * Complex64::i()
    } else {
        acc
    }
}

/// `η(τ)` with the product truncated after `n ≤ order`.
pub fn eta_value(tau: Complex64, order: Rat) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let top = order.floor().to_integer().max(0);
    let mut p = (Complex64::new(0.0, 2.0 * PI / 24.0) * tau).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 1..=top {
        qn *= q;
        p *= Complex64::new(1.0, 0.0) - qn;
    }
    p
}
