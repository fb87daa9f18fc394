//! Closed forms and modular relations of the `B2`, `K = −1` numerators.
//!
//! Left sides are always computed by the quantized-numerator path; right
//! sides are built independently from theta functions.

use num_complex::Complex64;
use qhr_core::numerator::{cases, quantized_numerator, NumeratorCase, Variant};
use qhr_core::report::{Mode, VerificationReport};
use qhr_core::series::{assert_equal, ExpKey, EvalPoint, GaussRat, Order, QSeries};
use qhr_core::theta::{jacobi_theta, mumford_theta, Sign};
use qhr_core::{int, rat, Coeff, Rat};

use crate::SuiteError;

fn vars() -> Vec<String> {
    vec!["z".to_string()]
}

/// Which `sl2`-triple: `(θ/2, {θ})` over `zα1`, or `(θ_s, {θ_s})` over `zα2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triple {
    Long,
    Short,
}

fn case(triple: Triple, lambda_bar2: bool, variant: Variant) -> Result<NumeratorCase, SuiteError> {
    Ok(match triple {
        Triple::Long => cases::b2_long(lambda_bar2, variant)?,
        Triple::Short => cases::b2_short(lambda_bar2, variant)?,
    })
}

/// The specialised numerator of one case (default `β`).
pub fn numerator(triple: Triple, lambda_bar2: bool, variant: Variant, order: Rat) -> Result<QSeries<GaussRat>, SuiteError> {
    Ok(quantized_numerator(&case(triple, lambda_bar2, variant)?, order, None)?.0)
}

fn mumford(a: u8, b: u8, c: i64, order: Rat) -> QSeries<GaussRat> {
    mumford_theta(a, b, &[int(c)], &vars(), order)
}

fn jacobi(j: Rat, sign: Sign, c: i64, order: Rat) -> QSeries<GaussRat> {
    jacobi_theta(j, int(1), sign, &[int(c)], &vars(), order)
}

fn mul(a: &QSeries<GaussRat>, b: &QSeries<GaussRat>) -> QSeries<GaussRat> {
    a.mul(b).expect("single frame")
}

/// `c · [ϑ_{0,0} + s·ϑ_{0,1}](τ,0) · ϑ11(τ,2z)`.
fn theta_pair_form(c: GaussRat, s: i64, order: Rat) -> QSeries<GaussRat> {
    let pair = mumford(0, 0, 0, order)
        .add(&mumford(0, 1, 0, order).scale(&GaussRat::from_ints(s, 0)))
        .expect("single frame");
    mul(&pair, &mumford(1, 1, 2, order)).scale(&c)
}

/// `−i ϑ_{ab}(τ,0) ϑ11(τ,2z)`.
fn minus_i_theta(a: u8, b: u8, order: Rat) -> QSeries<GaussRat> {
    mul(&mumford(a, b, 0, order), &mumford(1, 1, 2, order)).scale(&GaussRat::from_ints(0, -1))
}

/// `Σ_{j+k ≡ parity} [e^{4πi(j+¼)z} − e^{−4πi(j+¼)z}] q^{(j+¼)²+(k+¼)²}`.
fn quarter_lattice_sum(parity: i64, order: Rat) -> QSeries<GaussRat> {
    let mut s = QSeries::zero(vars(), Order::Finite(order));
    let reach = (qhr_core::series::rat_f64(order).sqrt() as i64) + 2;
    let quarter = rat(1, 4);
    for j in -reach..=reach {
        for k in -reach..=reach {
            if (j + k).rem_euclid(2) != parity {
                continue;
            }
            let (a, b) = (int(j) + quarter, int(k) + quarter);
            let e = a * a + b * b;
            if e > order {
                continue;
            }
            s.add_term(e, ExpKey(vec![int(2) * a]), GaussRat::one());
            s.add_term(e, ExpKey(vec![-(int(2) * a)]), GaussRat::from_ints(-1, 0));
        }
    }
    s
}

/// A named exact comparison; on failure the exact rational ratio (if any)
/// is reported.
fn compare(report: &mut VerificationReport, name: &str, lhs: &QSeries<GaussRat>, rhs: &QSeries<GaussRat>, order: Rat) -> Result<(), SuiteError> {
    let r = assert_equal(name, lhs, rhs, order, 0.0)?;
    if r.passed() {
        report.record(true, 0.0, format!("{name}: equal through q^{order}"));
    } else {
        let ratio = lhs
            .rational_ratio_to(rhs, order)
            .map(|q| format!("computed = {q} × printed"))
            .unwrap_or_else(|| "no constant ratio".into());
        report.record(false, r.residual, format!("{name}: differs ({ratio})"));
    }
    Ok(())
}

/// Long triple, `λ = −Λ0`: plain, `(−)` and `(∗)` closed forms.
pub fn theta_long(order: Rat) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("b2-theta-long", Mode::Exact).with_order(order);
    let half_minus_i = GaussRat::imag(rat(-1, 2));
    let plain = numerator(Triple::Long, false, Variant::Plain, order)?;
    let minus = numerator(Triple::Long, false, Variant::Minus, order)?;
    let star = numerator(Triple::Long, false, Variant::Star, order)?;
    compare(&mut report, "A = (−i/2)[ϑ00+ϑ01](τ,0)ϑ11(τ,2z)", &plain, &theta_pair_form(half_minus_i.clone(), 1, order), order)?;
    compare(&mut report, "A(−) = (−i/2)[ϑ00+ϑ01](τ,0)ϑ11(τ,2z)", &minus, &theta_pair_form(half_minus_i.clone(), 1, order), order)?;
    compare(&mut report, "A(∗) = (−i/2)[ϑ00−ϑ01](τ,0)ϑ11(τ,2z)", &star, &theta_pair_form(half_minus_i.clone(), -1, order), order)?;
    // The literal q^{−M|x|²/2} prefactor moves every exponent by −M|x|² = −1.
    let literal = star.shift_q(int(-1)).with_order(Order::Finite(order - int(1)));
    let target = theta_pair_form(half_minus_i, -1, order).truncate(Order::Finite(order - int(1)));
    report.note(format!(
        "with the literal q^(-M|x|^2/2) star prefactor the series is off by q^-1: equal = {}",
        literal == target
    ));
    Ok(report)
}

/// Long triple, `λ = −Λ0 + Λ̄2`, `α = α1+α2`, `β = θ`.
pub fn theta_mixed(order: Rat) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("b2-theta-mixed", Mode::Exact).with_order(order);
    let plain = numerator(Triple::Long, true, Variant::Plain, order)?;
    let minus = numerator(Triple::Long, true, Variant::Minus, order)?;
    let star = numerator(Triple::Long, true, Variant::Star, order)?;
    compare(&mut report, "A = −iϑ10(τ,0)ϑ11(τ,2z)", &plain, &minus_i_theta(1, 0, order), order)?;
    compare(&mut report, "A(−) = −A", &minus, &plain.neg(), order)?;
    compare(&mut report, "A(∗) = −A", &star, &plain.neg(), order)?;
    Ok(report)
}

/// Short triple, `λ = −Λ0` (`α = θ`, `β = θ_s`) and `λ = −Λ0+Λ̄2` (`α = β = θ_s`).
pub fn theta_short(order: Rat) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("b2-theta-short", Mode::Exact).with_order(order);
    let plain = numerator(Triple::Short, false, Variant::Plain, order)?;
    let minus = numerator(Triple::Short, false, Variant::Minus, order)?;
    let star = numerator(Triple::Short, false, Variant::Star, order)?;
    compare(&mut report, "A = Σ_(j+k even)[…]q^((j+1/4)²+(k+1/4)²)", &plain, &quarter_lattice_sum(0, order), order)?;
    compare(&mut report, "A(−) = −A", &minus, &plain.neg(), order)?;
    compare(&mut report, "A(∗) = −Σ_(j+k odd)[…]", &star, &quarter_lattice_sum(1, order).neg(), order)?;
    let mixed = numerator(Triple::Short, true, Variant::Plain, order)?;
    let rhs = mul(&jacobi(int(0), Sign::Minus, 0, order), &jacobi(int(1), Sign::Minus, 2, order));
    compare(&mut report, "A[θs]_(−Λ0+Λ̄2) = θ(−)_(0,1)(τ,0)θ(−)_(1,1)(τ,2z)", &mixed, &rhs, order)?;
    Ok(report)
}

/// The three functions `ψ1, ψ2, ψ3` of one triple.
pub struct Psi {
    pub triple: Triple,
    pub psi: [QSeries<GaussRat>; 3],
}

impl Psi {
    pub fn new(triple: Triple, order: Rat) -> Result<Self, SuiteError> {
        Ok(Self {
            triple,
            psi: [
                numerator(triple, false, Variant::Plain, order)?,
                numerator(triple, false, Variant::Star, order)?,
                numerator(triple, true, Variant::Plain, order)?,
            ],
        })
    }

    /// `ψ1 + ψ2`, `ψ1 − ψ2`, `ψ3`.
    pub fn combos(&self) -> [QSeries<GaussRat>; 3] {
        let [a, b, c] = &self.psi;
        [a.add(b).expect("frame"), a.sub(b).expect("frame"), c.clone()]
    }

    /// Printed closed forms of the three combinations.
    pub fn closed_forms(&self, order: Rat) -> [QSeries<GaussRat>; 3] {
        match self.triple {
            Triple::Long => [minus_i_theta(0, 0, order), minus_i_theta(0, 1, order), minus_i_theta(1, 0, order)],
            Triple::Short => {
                let h = rat(1, 2);
                let diff = |s: Sign| {
                    jacobi(h, s, 2, order)
                        .sub(&jacobi(-h, s, 2, order))
                        .expect("frame")
                };
                [
                    mul(&jacobi(h, Sign::Minus, 0, order), &diff(Sign::Minus)),
                    mul(&jacobi(h, Sign::Plus, 0, order), &diff(Sign::Plus)),
                    mul(&jacobi(int(0), Sign::Minus, 0, order), &jacobi(int(1), Sign::Minus, 2, order)),
                ]
            }
        }
    }

    /// `4πi` for the long triple, `2πi` for the short one.
    fn s_exponent(&self) -> f64 {
        match self.triple {
            Triple::Long => 4.0,
            Triple::Short => 2.0,
        }
    }
}

fn eval(s: &QSeries<GaussRat>, tau: Complex64, z: Complex64) -> Result<Complex64, SuiteError> {
    Ok(s.evaluate(&EvalPoint::new(tau, vec![z])?)?)
}

/// All nine printed relations of one triple at each `τ`, numerically.
pub fn modular_note(triple: Triple, taus: &[Complex64], z: Complex64, order: Rat, tol: f64) -> Result<VerificationReport, SuiteError> {
    let name = match triple {
        Triple::Long => "b2-modular-1",
        Triple::Short => "b2-modular-2",
    };
    let mut report = VerificationReport::new(name, Mode::Numeric).with_order(order).with_tolerance(tol);
    let psi = Psi::new(triple, order)?;
    let combos = psi.combos();
    let forms = psi.closed_forms(order);
    let names = ["ψ1+ψ2", "ψ1−ψ2", "ψ3"];
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut line = |label: String, lhs: Complex64, rhs: Complex64| {
        let err = (lhs - rhs).norm();
        let ratio = if rhs.norm() > 0.0 { lhs / rhs } else { Complex64::new(f64::NAN, 0.0) };
        report.record(err < tol, err, format!("{label}: |Δ| = {err:.2e}, lhs/rhs = {ratio:.6}"));
    };
    for &tau in taus {
        for i in 0..3 {
            line(
                format!("τ={tau}: {} = closed form", names[i]),
                eval(&combos[i], tau, z)?,
                eval(&forms[i], tau, z)?,
            );
        }
        let s_tau = -Complex64::new(1.0, 0.0) / tau;
        let factor = -tau * (two_pi_i * psi.s_exponent() / 2.0 * z * z / tau).exp();
        for (i, j) in [(0usize, 0usize), (1, 2), (2, 1)] {
            line(
                format!("τ={tau}: {}(−1/τ, z/τ) = −τ e^(…z²/τ) {}", names[i], names[j]),
                eval(&combos[i], s_tau, z / tau)?,
                factor * eval(&combos[j], tau, z)?,
            );
        }
        let e8 = Complex64::from_polar(1.0, std::f64::consts::PI / 4.0);
        let t_tau = tau + 1.0;
        for (i, j, ph) in [(0usize, 1usize, e8), (1, 0, e8), (2, 2, Complex64::i())] {
            line(
                format!("τ={tau}: {}(τ+1) = {ph:.4} {}", names[i], names[j]),
                eval(&combos[i], t_tau, z)?,
                ph * eval(&combos[j], tau, z)?,
            );
        }
    }
    Ok(report)
}
