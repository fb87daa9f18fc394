//! Lattice theta-sum numerators `A^{[α]}_{λ+ρ}` and their specialisations.
//!
//! Two independent computation paths are provided:
//!
//! * [`generic_a`] builds the antisymmetrised sum over the full Cartan frame
//!   and [`specialize`] evaluates it at `(τ, −τx + H, τ|x|²/2)`;
//! * [`quantized_numerator`] assembles the finite Weyl sum of the lattice
//!   sums `f_{λ,x,w}` directly over the centralizer frame.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::RatMatrix;
use crate::report::{Mode, VerificationReport};
use crate::rootsys::{AffineWeight, Frame, RootSysError, RootSystem, Sl2Triple, Weight, WeylElement};
use crate::series::{assert_equal, Coeff, ExpKey, GaussRat, Order, QSeries, SeriesError};
use crate::{int, Rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumeratorError {
    #[error("level condition violated: {0}")]
    LevelCondition(String),
    #[error("no β satisfies (β|x) ∈ Z and (β|h̄^f) = 0")]
    NoBeta,
    #[error("β = {0} does not satisfy (β|x) ∈ Z and (β|h̄^f) = 0")]
    InvalidBeta(String),
    #[error("frame vector {0} is not orthogonal to x")]
    FrameNotOrthogonal(String),
    #[error("phase e^(2πi·{0}) is not a fourth root of unity; exact mode cannot represent it")]
    NonGaussianPhase(String),
    #[error(transparent)]
    Root(#[from] RootSysError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, NumeratorError>;

/// Which of the three lattice sums is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    /// argument `H + x`
    Minus,
    /// argument `H + x + τx`
    Star,
}

/// All inputs of one numerator computation, validated at construction.
#[derive(Clone, Debug)]
pub struct NumeratorCase {
    pub rs: RootSystem,
    pub lambda: AffineWeight,
    pub k: Rat,
    pub alpha: Weight,
    pub triple: Sl2Triple,
    pub variant: Variant,
    modulus: i64,
    weyl: Vec<WeylElement>,
    weyl_inv: Vec<RatMatrix>,
}

impl NumeratorCase {
    pub fn new(
        rs: &RootSystem,
        lambda: AffineWeight,
        k: Rat,
        alpha: Weight,
        triple: Sl2Triple,
        variant: Variant,
    ) -> Result<Self> {
        let modulus = level_modulus(rs, &lambda, k, &alpha)?;
        let weyl = rs.weyl_group()?;
        let weyl_inv = weyl.iter().map(|w| w.inverse().matrix).collect();
        Ok(Self {
            rs: rs.clone(),
            lambda,
            k,
            alpha,
            triple,
            variant,
            modulus,
            weyl,
            weyl_inv,
        })
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Self { variant, ..self.clone() }
    }

    /// `M = K + h∨`.
    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn weyl(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn frame(&self) -> &Frame {
        &self.triple.hf_frame
    }

    /// `λ̄ + ρ̄`.
    pub fn shifted_weight(&self) -> Weight {
        &self.lambda.finite + &self.rs.rho_bar
    }
}

/// Checks `(λ+ρ|δ) = K + h∨ ∈ Z_{>0}` and `(λ+ρ|δ−α) = 0`; returns `K + h∨`.
pub fn level_modulus(rs: &RootSystem, lambda: &AffineWeight, k: Rat, alpha: &Weight) -> Result<i64> {
    if lambda.level != k {
        return Err(NumeratorError::LevelCondition(format!(
            "λ has level {} but K = {k}",
            lambda.level
        )));
    }
    let m = k + int(rs.h_dual);
    if !m.is_integer() || !m.is_positive() {
        return Err(NumeratorError::LevelCondition(format!("K + h∨ = {m} is not a positive integer")));
    }
    if !rs.is_root(alpha) || alpha.coords.iter().any(|c| c.is_negative()) {
        return Err(NumeratorError::LevelCondition(format!("α = {alpha} is not a positive root")));
    }
    let lr = &lambda.finite + &rs.rho_bar;
    let pairing = rs.inner(&lr, alpha);
    if pairing != m {
        return Err(NumeratorError::LevelCondition(format!(
            "(λ+ρ|δ−α) = {} != 0",
            m - pairing
        )));
    }
    Ok(m.to_integer())
}

/// `e^{2πi p}` in exact mode.
fn gauss_phase(p: Rat) -> Result<GaussRat> {
    let quarter = p * int(4);
    if !quarter.is_integer() {
        return Err(NumeratorError::NonGaussianPhase(p.to_string()));
    }
    Ok(GaussRat::i_pow(quarter.to_integer()))
}

/// `f_{λ,x,w}` (or its `(−)`/`(∗)` companion) over the centralizer frame,
/// containing every term with q-exponent `≤ order`.
///
/// The `(∗)` sum is normalised so that its q-exponents are `|μ|²/2M` with
/// `μ = λ̄+ρ̄+Mγ`, i.e. the evaluation of the plain sum at `H + x` for the
/// grading shifted by `τx`. The literal prefactor `q^{−M|x|²/2}` would
/// leave every such sum off by `q^{−M|x|²}`.
pub fn f_lambda_x_w(case: &NumeratorCase, w_index: usize, order: Rat) -> Result<QSeries<GaussRat>> {
    let rs = &case.rs;
    let m = int(case.modulus);
    let winv = &case.weyl_inv[w_index];
    let x = &case.triple.x;
    let wix = Weight::new(winv.apply(&x.coords));
    let frame = case.frame();
    let winv_b: Vec<Weight> = frame.basis.iter().map(|b| Weight::new(winv.apply(&b.coords))).collect();
    let mu0 = case.shifted_weight();
    let m_wix = wix.scale(m);
    let bound = int(2) * m * order;
    let vars = frame.var_names.clone();
    let mut out = QSeries::zero(vars, Order::Finite(order));

    let (shift, nu_offset) = match case.variant {
        Variant::Plain | Variant::Minus => (&mu0 - &m_wix, Weight::zero(rs.rank)),
        Variant::Star => (mu0.clone(), -&m_wix),
    };
    for gamma in rs.enumerate_lattice(&shift, m, bound) {
        let sum = &shift + &gamma.scale(m);
        let exp = rs.norm_sq(&sum) / (int(2) * m);
        let nu = &sum + &nu_offset;
        let key = ExpKey(winv_b.iter().map(|b| rs.inner(&nu, b)).collect());
        let c = match case.variant {
            Variant::Plain => GaussRat::one(),
            Variant::Minus | Variant::Star => gauss_phase(rs.inner(&nu, &wix))?,
        };
        out.add_term(exp, key, c);
    }
    Ok(out)
}

/// Roots `β` with `(β|x) ∈ Z` and `(β|h̄^f) = 0`, in root order.
pub fn beta_candidates(rs: &RootSystem, triple: &Sl2Triple) -> Vec<Weight> {
    rs.roots()
        .into_iter()
        .filter(|b| is_beta_candidate(rs, triple, b))
        .collect()
}

fn is_beta_candidate(rs: &RootSystem, triple: &Sl2Triple, b: &Weight) -> bool {
    rs.is_root(b)
        && rs.inner(b, &triple.x).is_integer()
        && triple.hf_frame.basis.iter().all(|h| rs.inner(b, h).is_zero())
}

/// All `f_{λ,x,w}` in Weyl order (computed in parallel, merged in order).
pub fn weyl_sums(case: &NumeratorCase, order: Rat) -> Result<Vec<QSeries<GaussRat>>> {
    (0..case.weyl.len())
        .into_par_iter()
        .map(|i| f_lambda_x_w(case, i, order))
        .collect()
}

/// `¼(β|x) Σ_w ε(w)(β∨|wα) f_w` from precomputed `f_w`.
pub fn assemble(case: &NumeratorCase, fs: &[QSeries<GaussRat>], beta: &Weight, order: Rat) -> Result<QSeries<GaussRat>> {
    let rs = &case.rs;
    let beta_v = rs.coroot(beta)?;
    let pref = rs.inner(beta, &case.triple.x) / int(4);
    let mut acc = QSeries::zero(case.frame().var_names.clone(), Order::Finite(order));
    for (w, f) in case.weyl.iter().zip(fs) {
        let c = pref * rs.inner(&beta_v, &w.apply(&case.alpha)) * int(w.sign as i64);
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&f.scale(&GaussRat::real(c)))?;
    }
    Ok(acc)
}

/// The quantized numerator and the `β` actually used.
pub fn quantized_numerator(
    case: &NumeratorCase,
    order: Rat,
    beta: Option<&Weight>,
) -> Result<(QSeries<GaussRat>, Weight)> {
    let beta = choose_beta(case, beta)?;
    let fs = weyl_sums(case, order)?;
    Ok((assemble(case, &fs, &beta, order)?, beta))
}

fn choose_beta(case: &NumeratorCase, beta: Option<&Weight>) -> Result<Weight> {
    match beta {
        Some(b) if is_beta_candidate(&case.rs, &case.triple, b) => Ok(b.clone()),
        Some(b) => Err(NumeratorError::InvalidBeta(b.to_string())),
        None => beta_candidates(&case.rs, &case.triple)
            .into_iter()
            .next()
            .ok_or(NumeratorError::NoBeta),
    }
}

/// Names `h1, …, hn` of the full-frame coordinates.
pub fn full_frame_vars(rank: usize) -> Vec<String> {
    (1..=rank).map(|i| format!("h{i}")).collect()
}

/// `A^{[α]}_{λ+ρ}` over the full Cartan frame: keys are the simple-root
/// coordinates of `wμ`, exponents `|μ|²/2M`, `μ = λ̄+ρ̄+Mγ`, coefficients
/// `½ ε(w) (α|γ)`.
pub fn generic_a(rs: &RootSystem, lambda: &AffineWeight, k: Rat, alpha: &Weight, order: Rat) -> Result<QSeries<GaussRat>> {
    let m = int(level_modulus(rs, lambda, k, alpha)?);
    let weyl = rs.weyl_group()?;
    let mu0 = &lambda.finite + &rs.rho_bar;
    let mut out = QSeries::zero(full_frame_vars(rs.rank), Order::Finite(order));
    for gamma in rs.enumerate_lattice(&mu0, m, int(2) * m * order) {
        let c = rs.inner(alpha, &gamma) / int(2);
        if c.is_zero() {
            continue;
        }
        let mu = &mu0 + &gamma.scale(m);
        let exp = rs.norm_sq(&mu) / (int(2) * m);
        for w in &weyl {
            out.add_term(exp, ExpKey(w.apply(&mu).coords), GaussRat::real(c * int(w.sign as i64)));
        }
    }
    Ok(out)
}

/// Order `G'` of [`generic_a`] that guarantees a specialised order `≥ n`.
pub fn generic_order_for(m: i64, x_norm_sq: Rat, n: Rat) -> Rat {
    let m = m as f64;
    let root = (2.0 * m * crate::series::rat_f64(n)).sqrt() + m * crate::series::rat_f64(x_norm_sq).sqrt();
    let g = root * root / (2.0 * m);
    // round up generously to a rational with denominator 8
    Rat::new((g * 8.0).ceil() as i64 + 1, 8)
}

/// Conservative specialised order from a generic order `g`:
/// `(√(2Mg) − M|x|)² / 2M`, rounded down.
pub fn specialized_order(m: i64, x_norm_sq: Rat, g: Rat) -> Rat {
    let mf = m as f64;
    let d = (2.0 * mf * crate::series::rat_f64(g)).sqrt() - mf * crate::series::rat_f64(x_norm_sq).sqrt();
    if d <= 0.0 {
        return int(-1);
    }
    let n = d * d / (2.0 * mf);
    Rat::new(((n - 1e-9) * 64.0).floor() as i64, 64)
}

/// Evaluates a full-frame series at `(τ, −τx + H, τ|x|²/2)` with
/// `H = Σ z_i b_i`; requires `(x|b_i) = 0`.
pub fn specialize(
    rs: &RootSystem,
    series: &QSeries<GaussRat>,
    x: &Weight,
    frame: &Frame,
    m: i64,
) -> Result<QSeries<GaussRat>> {
    for b in &frame.basis {
        if !rs.inner(x, b).is_zero() {
            return Err(NumeratorError::FrameNotOrthogonal(b.to_string()));
        }
    }
    let mr = int(m);
    let x_norm = rs.norm_sq(x);
    let Order::Finite(g) = series.order() else {
        return Err(NumeratorError::Series(SeriesError::InsufficientOrder {
            have: "inf".into(),
            need: "finite generic order".into(),
        }));
    };
    let n = specialized_order(m, x_norm, g);
    let gx = rs.gram.apply(&x.coords);
    let gb: Vec<Vec<Rat>> = frame.basis.iter().map(|b| rs.gram.apply(&b.coords)).collect();
    let dot = |v: &[Rat], u: &[Rat]| v.iter().zip(u).fold(Rat::zero(), |a, (p, q)| a + p * q);
    let mut out = QSeries::zero(frame.var_names.clone(), Order::Finite(n));
    for (e, poly) in series.terms() {
        for (k, c) in poly.iter() {
            let exp = e - dot(&k.0, &gx) + mr * x_norm / int(2);
            let key = ExpKey(gb.iter().map(|g| dot(&k.0, g)).collect());
            out.add_term(exp, key, c.clone());
        }
    }
    Ok(out)
}

/// Independence of `β`: every candidate gives the same series.
pub fn beta_independence_check(case: &NumeratorCase, order: Rat) -> Result<VerificationReport> {
    let cands = beta_candidates(&case.rs, &case.triple);
    let name = "beta-independence";
    if cands.len() < 2 {
        return Ok(VerificationReport::skipped(
            name,
            Mode::Exact,
            format!("only {} candidate β", cands.len()),
        ));
    }
    let fs = weyl_sums(case, order)?;
    let base = assemble(case, &fs, &cands[0], order)?;
    let mut report = VerificationReport::new(name, Mode::Exact).with_order(order);
    report.note(format!("candidates: {cands:?}; reference β = {}", cands[0]));
    for b in &cands[1..] {
        let other = assemble(case, &fs, b, order)?;
        let r = assert_equal(&format!("β={b}"), &base, &other, order, 0.0)?;
        report.absorb(&r);
    }
    Ok(report)
}

/// Vanishing for `n ≥ 2`: the quantized numerator is literally zero.
pub fn vanishing_check(case: &NumeratorCase, order: Rat) -> Result<VerificationReport> {
    let name = "vanishing";
    if case.triple.betas.len() < 2 {
        return Ok(VerificationReport::skipped(name, Mode::Exact, "n = 1: vanishing needs at least two betas"));
    }
    if case.rs.rank < 2 {
        return Ok(VerificationReport::skipped(name, Mode::Exact, "rank < 2"));
    }
    let cands = beta_candidates(&case.rs, &case.triple);
    let fs = weyl_sums(case, order)?;
    let mut report = VerificationReport::new(name, Mode::Exact).with_order(order);
    let raw_terms: usize = fs.iter().map(QSeries::num_terms).sum();
    for b in cands.iter().filter(|b| b.coords.iter().all(|c| !c.is_negative())) {
        let a = assemble(case, &fs, b, order)?;
        report.record(
            a.is_zero(),
            a.max_abs_through(order),
            format!("β={b}: {} surviving terms (from {raw_terms} Weyl-sum terms)", a.num_terms()),
        );
    }
    if cands.is_empty() {
        return Err(NumeratorError::NoBeta);
    }
    Ok(report)
}

/// For `w0 = r_{β′}`, `w0 x = x − β′∨`, `w0` fixes `h̄^f`, and
/// `f_{w0 w} = f_w` for every `w`.
pub fn w0_invariance_check(case: &NumeratorCase, order: Rat) -> Result<VerificationReport> {
    let rs = &case.rs;
    let mut report = VerificationReport::new("w0-invariance", Mode::Exact).with_order(order);
    let index: HashMap<&RatMatrix, usize> = case.weyl.iter().enumerate().map(|(i, w)| (&w.matrix, i)).collect();
    let fs = weyl_sums(case, order)?;
    for bp in &case.triple.betas {
        let r = rs.reflection(bp);
        let expect = &case.triple.x - &rs.coroot(bp)?;
        report.record(
            r.apply(&case.triple.x) == expect,
            0.0,
            format!("r_{bp}(x) = x − {bp}∨"),
        );
        let fixes = case.frame().basis.iter().all(|b| &r.apply(b) == b);
        report.record(fixes, 0.0, format!("r_{bp} fixes h̄^f"));
        let mut bad = Vec::new();
        for (i, w) in case.weyl.iter().enumerate() {
            let j = index[&(&r.matrix * &w.matrix)];
            if fs[i] != fs[j].truncate(fs[i].order()) {
                bad.push(w.word_string());
            }
        }
        report.record(
            bad.is_empty(),
            bad.len() as f64,
            format!("f(r_{bp}·w) = f(w) for all {} w; mismatches {bad:?}", case.weyl.len()),
        );
    }
    if report.status == crate::report::Status::Pass {
        report.residual = 0.0;
    }
    Ok(report)
}

/// Named cases used by the built-in suites.
pub mod cases {
    use super::*;
    use crate::rat;

    fn w(c: &[i64]) -> Weight {
        Weight::from_ints(c)
    }

    /// `B2`, `K = −1`, triple `(θ/2, {θ})`, frame `{α1}`.
    pub fn b2_long(lambda_bar2: bool, variant: Variant) -> Result<NumeratorCase> {
        let rs = RootSystem::from_label("B2")?;
        let x = rs.theta.scale(rat(1, 2));
        let frame = Frame::with_default_names(vec![w(&[1, 0])])?;
        let triple = rs.validate_sl2(&x, std::slice::from_ref(&rs.theta))?.with_frame(&rs, frame)?;
        b2_case(&rs, lambda_bar2, triple, variant)
    }

    /// `B2`, `K = −1`, triple `(θ_s, {θ_s})`, frame `{α2}`.
    pub fn b2_short(lambda_bar2: bool, variant: Variant) -> Result<NumeratorCase> {
        let rs = RootSystem::from_label("B2")?;
        let frame = Frame::with_default_names(vec![w(&[0, 1])])?;
        let triple = rs.validate_sl2(&rs.theta_s, std::slice::from_ref(&rs.theta_s))?.with_frame(&rs, frame)?;
        b2_case(&rs, lambda_bar2, triple, variant)
    }

    /// `B2`, `K = −1`, principal triple `x = 2α1+3α2`, `{α1, α2}`.
    pub fn b2_principal(lambda_bar2: bool) -> Result<NumeratorCase> {
        let rs = RootSystem::from_label("B2")?;
        let triple = rs.validate_sl2(&w(&[2, 3]), &[w(&[1, 0]), w(&[0, 1])])?;
        b2_case(&rs, lambda_bar2, triple, Variant::Plain)
    }

    /// `λ = −Λ0` with `α = θ`, or `λ = −Λ0 + Λ̄2` with `α = θ_s`.
    fn b2_case(rs: &RootSystem, lambda_bar2: bool, triple: Sl2Triple, variant: Variant) -> Result<NumeratorCase> {
        let (fin, alpha) = if lambda_bar2 {
            (rs.fundamental_weights[1].clone(), rs.theta_s.clone())
        } else {
            (Weight::zero(2), rs.theta.clone())
        };
        NumeratorCase::new(rs, AffineWeight::new(int(-1), fin), int(-1), alpha, triple, variant)
    }

    /// The D4 frame `(α1/2, α3/2, α4/2)` with names `z1, z3, z4`.
    pub fn d4_half_frame() -> Frame {
        let basis = [0usize, 2, 3]
            .iter()
            .map(|&i| Weight::unit(4, i).scale(rat(1, 2)))
            .collect();
        Frame::new(basis, vec!["z1".into(), "z3".into(), "z4".into()]).expect("independent")
    }

    /// `D4`, triple `(θ/2, {θ})` over the half frame.
    pub fn d4_minimal_triple(rs: &RootSystem) -> Result<Sl2Triple> {
        let x = rs.theta.scale(rat(1, 2));
        Ok(rs.validate_sl2(&x, std::slice::from_ref(&rs.theta))?.with_frame(rs, d4_half_frame())?)
    }

    /// `D4`, `K = −2`, `λ = −2Λ0`, `α = Σα_i`, minimal triple.
    pub fn d4_minimal() -> Result<NumeratorCase> {
        let rs = RootSystem::from_label("D4")?;
        let triple = d4_minimal_triple(&rs)?;
        NumeratorCase::new(
            &rs,
            AffineWeight::new(int(-2), Weight::zero(4)),
            int(-2),
            w(&[1, 1, 1, 1]),
            triple,
            Variant::Plain,
        )
    }

    /// `D4`, `K = −2`, `λ = −2Λ0`, `α = Σα_i`, `{α1, α3}` with `x = Λ̄1 + Λ̄3`.
    pub fn d4_pair() -> Result<NumeratorCase> {
        let rs = RootSystem::from_label("D4")?;
        let x = &rs.fundamental_weights[0] + &rs.fundamental_weights[2];
        let triple = rs.validate_sl2(&x, &[w(&[1, 0, 0, 0]), w(&[0, 0, 1, 0])])?;
        NumeratorCase::new(
            &rs,
            AffineWeight::new(int(-2), Weight::zero(4)),
            int(-2),
            w(&[1, 1, 1, 1]),
            triple,
            Variant::Plain,
        )
    }

    /// The eight `D4`, `K = −1` weights in label order
    /// `000, 100, 010, 001, 011, 101, 110, 111`, with `α` the first positive
    /// root satisfying the level condition.
    pub fn d4_level_minus_one(label: &str) -> Result<NumeratorCase> {
        let rs = RootSystem::from_label("D4")?;
        let f = &rs.fundamental_weights;
        let fin = match label {
            "000" => Weight::zero(4),
            "100" => &f[2] + &f[3],
            "010" => &f[0] + &f[3],
            "001" => &f[0] + &f[2],
            "011" => f[0].clone(),
            "101" => f[2].clone(),
            "110" => f[3].clone(),
            "111" => f[1].clone(),
            other => {
                return Err(NumeratorError::LevelCondition(format!("unknown D4 label `{other}`")))
            }
        };
        let lr = &fin + &rs.rho_bar;
        let m = int(-1 + rs.h_dual);
        let alpha = rs
            .positive_roots
            .iter()
            .find(|a| rs.inner(&lr, a) == m)
            .cloned()
            .ok_or_else(|| NumeratorError::LevelCondition(format!("no α for label {label}")))?;
        let triple = d4_minimal_triple(&rs)?;
        NumeratorCase::new(&rs, AffineWeight::new(int(-1), fin), int(-1), alpha, triple, Variant::Plain)
    }
}

#[cfg(test)]
mod tests {
    use super::cases::*;
    use super::*;
    use crate::rat;

    #[test]
    fn level_condition_is_checked() {
        let rs = RootSystem::from_label("B2").unwrap();
        let t = rs.validate_sl2(&rs.theta.scale(rat(1, 2)), std::slice::from_ref(&rs.theta)).unwrap();
        let bad = NumeratorCase::new(
            &rs,
            AffineWeight::new(int(-1), Weight::zero(2)),
            int(-1),
            rs.theta_s.clone(),
            t.clone(),
            Variant::Plain,
        );
        assert!(matches!(bad, Err(NumeratorError::LevelCondition(_))));
        let wrong_level = NumeratorCase::new(
            &rs,
            AffineWeight::new(int(0), Weight::zero(2)),
            int(-1),
            rs.theta.clone(),
            t,
            Variant::Plain,
        );
        assert!(wrong_level.is_err());
    }

    #[test]
    fn b2_long_identity_term_leads() {
        let case = b2_long(false, Variant::Plain).unwrap();
        let f = f_lambda_x_w(&case, 0, int(2)).unwrap();
        assert_eq!(f.lead(), Some(rat(1, 8)));
        assert_eq!(f.coeff(rat(1, 8), &ExpKey(vec![int(1)])), GaussRat::one());
    }

    #[test]
    fn star_equals_plain_at_x_zero() {
        // x = 0 is not a valid grading, so build the triple by hand.
        let mut case = b2_long(false, Variant::Plain).unwrap();
        case.triple.x = Weight::zero(2);
        let plain = weyl_sums(&case, int(4)).unwrap();
        let star = weyl_sums(&case.with_variant(Variant::Star), int(4)).unwrap();
        assert_eq!(plain, star);
    }

    #[test]
    fn beta_candidates_b2() {
        let long = b2_long(false, Variant::Plain).unwrap();
        let c = beta_candidates(&long.rs, &long.triple);
        assert_eq!(c, vec![long.rs.theta.clone(), -&long.rs.theta]);
        let short = b2_short(false, Variant::Plain).unwrap();
        let c = beta_candidates(&short.rs, &short.triple);
        assert_eq!(c, vec![short.rs.theta_s.clone(), -&short.rs.theta_s]);
        let p = b2_principal(false).unwrap();
        assert_eq!(beta_candidates(&p.rs, &p.triple).len(), 8);
    }

    #[test]
    fn invalid_beta_is_rejected() {
        let case = b2_long(false, Variant::Plain).unwrap();
        let r = quantized_numerator(&case, int(2), Some(&Weight::from_ints(&[1, 0])));
        assert!(matches!(r, Err(NumeratorError::InvalidBeta(_))));
    }

    #[test]
    fn specialize_requires_orthogonal_frame() {
        let rs = RootSystem::from_label("B2").unwrap();
        let f = Frame::with_default_names(vec![Weight::from_ints(&[0, 1])]).unwrap();
        let s = QSeries::zero(full_frame_vars(2), Order::Finite(int(1)));
        let r = specialize(&rs, &s, &rs.theta.scale(rat(1, 2)), &f, 2);
        assert!(matches!(r, Err(NumeratorError::FrameNotOrthogonal(_))));
    }

    #[test]
    fn generic_order_roundtrip() {
        let g = generic_order_for(2, rat(1, 2), int(8));
        assert!(specialized_order(2, rat(1, 2), g) >= int(8));
    }

    #[test]
    fn d4_level_minus_one_alphas() {
        let c = d4_level_minus_one("000").unwrap();
        assert_eq!(c.alpha, c.rs.theta);
        let c = d4_level_minus_one("100").unwrap();
        assert_eq!(c.alpha, Weight::from_ints(&[0, 1, 1, 1]));
        assert_eq!(c.modulus(), 5);
    }
}
