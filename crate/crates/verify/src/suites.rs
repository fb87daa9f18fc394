//! The default suites, one per verified claim.

use qhr_core::cft::{self, IndexSets, LABELS};
use qhr_core::numerator::{self, cases, generic_a, generic_order_for, quantized_numerator, specialize, NumeratorCase, Variant};
use qhr_core::report::{Mode, VerificationReport};
use qhr_core::rootsys::{root_pair_check, AffineWeight, Frame, RootSystem, Weight};
use qhr_core::series::assert_equal;
use qhr_core::theta::Sign;
use qhr_core::{int, Rat};

use crate::b2::{self, Triple};
use crate::{ParamValue, Params, Registry, Runner, SuiteError, SuiteSpec};

fn order(p: &Params) -> Rat {
    int(p.int("order"))
}

fn spec(name: &str, module: &str, mode: Mode, description: &str, params: &[(&str, ParamValue)]) -> SuiteSpec {
    SuiteSpec {
        name: name.into(),
        module: module.into(),
        mode,
        description: description.into(),
        parameters: Params(params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()),
    }
}

fn i(v: i64) -> ParamValue {
    ParamValue::Int(v)
}

fn f(v: f64) -> ParamValue {
    ParamValue::Float(v)
}

fn t(v: &str) -> ParamValue {
    ParamValue::Text(v.into())
}

pub fn default_registry() -> Registry {
    use Mode::{Exact, Numeric};
    let mut r = Registry::empty();
    let mut add = |s: SuiteSpec, run: Runner| r.push(s, run);
    add(
        spec("root-pairs", "rootsys", Exact, "distinct roots never pair to 2 both ways (B2, D4)", &[]),
        root_pairs,
    );
    add(
        spec("w0-invariance", "numerator", Exact, "f(r_β′ w) = f(w) in the B2 principal case", &[("order", i(6))]),
        w0_invariance,
    );
    add(
        spec("vanish-b2-principal", "numerator", Exact, "B2 principal triple numerators vanish", &[("order", i(10))]),
        vanish_b2_principal,
    );
    add(
        spec("vanish-d4-pair", "numerator", Exact, "D4 {α1, α3} numerator vanishes", &[("order", i(5))]),
        vanish_d4_pair,
    );
    add(
        spec(
            "beta-independence",
            "numerator",
            Exact,
            "all candidate β agree (B2 long/short, D4 minimal)",
            &[("order", i(6)), ("d4_order", i(3))],
        ),
        beta_independence,
    );
    add(
        spec(
            "numerator-paths",
            "numerator",
            Exact,
            "generic-then-specialize equals the direct Weyl sum (B2 long triple)",
            &[("order", i(8))],
        ),
        numerator_paths,
    );
    add(
        spec(
            "numerator-case",
            "numerator",
            Exact,
            "user-described case: numerator, β-independence, w0-invariance, vanishing when n ≥ 2",
            &[
                ("algebra", t("B2")),
                ("cartan", t("")),
                ("k", t("-1")),
                ("lambda", t("0,0")),
                ("alpha", t("1,2")),
                ("x", t("1/2,1")),
                ("betas", t("1,2")),
                ("frame", t("")),
                ("variant", t("plain")),
                ("order", i(6)),
            ],
        ),
        numerator_case,
    );
    add(
        spec("b2-theta-long", "numerator", Exact, "B2 long triple, λ = −Λ0: A, A(−), A(∗)", &[("order", i(8))]),
        |p| b2::theta_long(order(p)),
    );
    add(
        spec("b2-theta-mixed", "numerator", Exact, "B2 long triple, λ = −Λ0+Λ̄2 and its sign relations", &[("order", i(8))]),
        |p| b2::theta_mixed(order(p)),
    );
    add(
        spec("b2-theta-short", "numerator", Exact, "B2 short triple closed forms", &[("order", i(8))]),
        |p| b2::theta_short(order(p)),
    );
    let modular = [("order", i(60)), ("tau", t("0,1;0,2")), ("z", t("0.13,0.07")), ("tolerance", f(1e-8))];
    add(
        spec("b2-modular-1", "theta", Numeric, "S/T relations of the long-triple ψ's", &modular),
        |p| modular_note(Triple::Long, p),
    );
    add(
        spec("b2-modular-2", "theta", Numeric, "S/T relations of the short-triple ψ's", &modular),
        |p| modular_note(Triple::Short, p),
    );
    add(
        spec(
            "d4-s-matrix",
            "cft",
            Numeric,
            "S-matrices of f±, g at z = 0",
            &[("order", i(60)), ("tau", t("0,1;0,2")), ("tolerance", f(1e-6))],
        ),
        |p| Ok(cft::s_matrix_check(&p.complex_list("tau"), order(p), p.float("tolerance"))?),
    );
    add(
        spec("d4-t-phase", "cft", Numeric, "T-phases of f±, g", &[("order", i(3)), ("tolerance", f(1e-9))]),
        |p| Ok(cft::t_phase_check(order(p), p.float("tolerance"))?),
    );
    add(
        spec(
            "d4-asymptotics",
            "cft",
            Numeric,
            "τ ↓ 0 constants of f⁺",
            &[("order", i(150)), ("t", t("0.25,0.15,0.1")), ("tolerance", f(0.1))],
        ),
        |p| Ok(cft::asymptotic_check(&p.float_list("t"), order(p), p.float("tolerance"))?),
    );
    add(
        spec(
            "d4-reduction-characters",
            "cft",
            Numeric,
            "numerator/denominator = C·f⁺ with one shared C (K = −1)",
            &[("order", i(3)), ("eval_order", i(60)), ("tolerance", f(1e-4))],
        ),
        reduction_characters,
    );
    let den = [("order", i(3)), ("sets", t("printed")), ("sign", t("plus"))];
    let runners: [Runner; 4] = [|p| denominator(1, p), |p| denominator(2, p), |p| denominator(3, p), |p| denominator(4, p)];
    for (k, run) in runners.into_iter().enumerate() {
        add(
            spec(
                &format!("d4-denominator-{}", k + 1),
                "cft",
                Exact,
                "η³ × theta sum = theta product (K = −2 denominator)",
                &den,
            ),
            run,
        );
    }
    add(
        spec(
            "d4-numerator-denominator",
            "cft",
            Exact,
            "η³ × K = −2 numerator = theta product",
            &[("order", i(3))],
        ),
        |p| Ok(cft::d4_numerator_denominator_check(order(p))?),
    );
    r
}

fn root_pairs(_: &Params) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("root-pairs", Mode::Exact);
    for label in ["B2", "D4"] {
        report.absorb(&root_pair_check(&RootSystem::from_label(label)?)?);
    }
    Ok(report)
}

fn w0_invariance(p: &Params) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("w0-invariance", Mode::Exact).with_order(order(p));
    for bar2 in [false, true] {
        report.absorb(&numerator::w0_invariance_check(&cases::b2_principal(bar2)?, order(p))?);
    }
    Ok(report)
}

fn vanish_b2_principal(p: &Params) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("vanish-b2-principal", Mode::Exact).with_order(order(p));
    for bar2 in [false, true] {
        let mut r = numerator::vanishing_check(&cases::b2_principal(bar2)?, order(p))?;
        r.suite = if bar2 { "λ=−Λ0+Λ̄2" } else { "λ=−Λ0" }.into();
        report.absorb(&r);
    }
    Ok(report)
}

fn vanish_d4_pair(p: &Params) -> Result<VerificationReport, SuiteError> {
    Ok(numerator::vanishing_check(&cases::d4_pair()?, order(p))?)
}

fn beta_independence(p: &Params) -> Result<VerificationReport, SuiteError> {
    let mut report = VerificationReport::new("beta-independence", Mode::Exact).with_order(order(p));
    let b2: Vec<(&str, NumeratorCase)> = vec![
        ("B2 long λ=−Λ0", cases::b2_long(false, Variant::Plain)?),
        ("B2 long λ=−Λ0+Λ̄2", cases::b2_long(true, Variant::Plain)?),
        ("B2 short λ=−Λ0", cases::b2_short(false, Variant::Plain)?),
        ("B2 short λ=−Λ0+Λ̄2", cases::b2_short(true, Variant::Plain)?),
    ];
    for (name, c) in b2 {
        let mut r = numerator::beta_independence_check(&c, order(p))?;
        r.suite = name.into();
        report.absorb(&r);
    }
    let mut r = numerator::beta_independence_check(&cases::d4_minimal()?, int(p.int("d4_order")))?;
    r.suite = "D4 minimal K=−2".into();
    report.absorb(&r);
    Ok(report)
}

fn numerator_paths(p: &Params) -> Result<VerificationReport, SuiteError> {
    let n = order(p);
    let mut report = VerificationReport::new("numerator-paths", Mode::Exact).with_order(n);
    for bar2 in [false, true] {
        let case = cases::b2_long(bar2, Variant::Plain)?;
        let direct = quantized_numerator(&case, n, None)?.0;
        let g = generic_order_for(case.modulus(), case.triple.x_norm_sq, n);
        let full = generic_a(&case.rs, &case.lambda, case.k, &case.alpha, g)?;
        let spec = specialize(&case.rs, &full, &case.triple.x, case.frame(), case.modulus())?;
        let mut r = assert_equal(if bar2 { "λ=−Λ0+Λ̄2" } else { "λ=−Λ0" }, &direct, &spec, n, 0.0)?;
        r.note(format!("generic order {g}, specialised order {}", spec.order()));
        report.absorb(&r);
    }
    Ok(report)
}

fn modular_note(triple: Triple, p: &Params) -> Result<VerificationReport, SuiteError> {
    let z = p.complex_list("z");
    b2::modular_note(triple, &p.complex_list("tau"), z[0], order(p), p.float("tolerance"))
}

fn reduction_characters(p: &Params) -> Result<VerificationReport, SuiteError> {
    let out = cft::reduction_character_check(
        &LABELS,
        &cft::reduction_points(),
        order(p),
        int(p.int("eval_order")),
        p.float("tolerance"),
    )?;
    Ok(out.report)
}

fn denominator(which: u8, p: &Params) -> Result<VerificationReport, SuiteError> {
    let sets = if p.text("sets") == "corrected" { IndexSets::Corrected } else { IndexSets::Printed };
    let sign = if p.text("sign") == "minus" { Sign::Minus } else { Sign::Plus };
    Ok(cft::d4_denominator_identity_check(which, sets, sign, order(p))?)
}

fn rats(s: &str) -> Result<Vec<Rat>, SuiteError> {
    s.split(',')
        .map(|v| v.trim().parse::<Rat>().map_err(|e| SuiteError::Config(format!("`{v}`: {e}"))))
        .collect()
}

/// `"a,b;c,d"` → rows; the empty string is no rows.
fn rat_rows(s: &str) -> Result<Vec<Vec<Rat>>, SuiteError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(rats).collect()
}

fn weights(s: &str) -> Result<Vec<Weight>, SuiteError> {
    Ok(rat_rows(s)?.into_iter().map(Weight::new).collect())
}

fn one_weight(s: &str) -> Result<Weight, SuiteError> {
    Ok(Weight::new(rats(s)?))
}

/// Builds a case from text parameters: coordinates are in the simple-root
/// basis except `lambda`, which lists the coefficients of the fundamental
/// weights; `k` is both the level and the level of `λ`.
pub fn case_from_params(p: &Params) -> Result<NumeratorCase, SuiteError> {
    let rs = match p.text("cartan").trim() {
        "" => RootSystem::from_label(p.text("algebra"))?,
        rows => {
            let cartan: Vec<Vec<i64>> = rat_rows(rows)?
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|v| {
                            v.is_integer()
                                .then(|| v.to_integer())
                                .ok_or_else(|| SuiteError::Config(format!("Cartan entry {v} is not an integer")))
                        })
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            RootSystem::from_cartan(p.text("algebra"), &cartan)?
        }
    };
    let k = p.text("k").trim().parse::<Rat>().map_err(|e| SuiteError::Config(format!("k: {e}")))?;
    let coeffs = rats(p.text("lambda"))?;
    if coeffs.len() != rs.rank {
        return Err(SuiteError::Config(format!("lambda needs {} coefficients", rs.rank)));
    }
    let mut finite = Weight::zero(rs.rank);
    for (c, om) in coeffs.iter().zip(&rs.fundamental_weights) {
        finite = &finite + &om.scale(*c);
    }
    let mut triple = rs.validate_sl2(&one_weight(p.text("x"))?, &weights(p.text("betas"))?)?;
    let frame = weights(p.text("frame"))?;
    if !frame.is_empty() {
        triple = triple.with_frame(&rs, Frame::with_default_names(frame)?)?;
    }
    let variant = match p.text("variant") {
        "minus" => Variant::Minus,
        "star" => Variant::Star,
        _ => Variant::Plain,
    };
    Ok(NumeratorCase::new(&rs, AffineWeight::new(k, finite), k, one_weight(p.text("alpha"))?, triple, variant)?)
}

fn numerator_case(p: &Params) -> Result<VerificationReport, SuiteError> {
    let case = case_from_params(p)?;
    let n = order(p);
    let mut report = VerificationReport::new("numerator-case", Mode::Exact).with_order(n);
    let (series, beta) = quantized_numerator(&case, n, None)?;
    report.note(format!(
        "{} K={} M={}: β = {beta}, {} terms, lead {}",
        case.rs.label,
        case.k,
        case.modulus(),
        series.num_terms(),
        series.lead().map_or("none".to_string(), |l| l.to_string())
    ));
    let candidates = numerator::beta_candidates(&case.rs, &case.triple);
    if candidates.len() >= 2 {
        report.absorb(&numerator::beta_independence_check(&case, n)?);
    }
    if case.variant == Variant::Plain {
        report.absorb(&numerator::w0_invariance_check(&case, n)?);
    }
    if case.triple.betas.len() >= 2 {
        report.absorb(&numerator::vanishing_check(&case, n)?);
    }
    Ok(report)
}
