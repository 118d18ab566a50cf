use ample_core::json::{scalar_to_json, Json};
use ample_core::nowhere_dense::{
    build_construction, check_nowhere_dense, truncated_group_order, y_cover, MAX_CLOSURE_STAGES,
};
use ample_core::property_e::{decompose_local, factor_kernel, verify_certificate, Tag};
use ample_core::selftest::{self, SUITES};
use ample_core::stabilizers::{
    classify_finite_stabilizer, finite_oracle_maximality, finite_property_e, realize_permutation, same_orbit,
};
use ample_core::towers::{build_kr, first_return_of};
use ample_core::{
    sample, BaseSequence, BigElement, BigInt, Certificate, ClopenSet, FiniteModel, FinitePointSet, OmegaWord,
    OrderResult, Perm, Point, StabilizerClass,
};
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::{CliError, Command, Ctx, ElemOp, NdOp, OracleOp, PropEOp, StabOp};

pub struct Outcome {
    pub lines: Vec<String>,
    pub ok: bool,
}

/// One report: the command, its input, the result fields and named checks.
struct Report {
    command: String,
    input: Value,
    result: Map<String, Value>,
    checks: Vec<(String, bool)>,
}

impl Report {
    fn new(command: &str, input: Value) -> Self {
        Report { command: command.into(), input, result: Map::new(), checks: Vec::new() }
    }

    fn set(&mut self, key: &str, v: Value) -> &mut Self {
        self.result.insert(key.into(), v);
        self
    }

    fn check(&mut self, name: &str, ok: bool) -> &mut Self {
        self.checks.push((name.into(), ok));
        self
    }

    fn ok(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "input": self.input,
            "result": Value::Object(self.result.clone()),
            "checks": self.checks.iter().map(|(c, ok)| json!({ "check": c, "ok": ok })).collect::<Vec<_>>(),
            "ok": self.ok(),
        })
    }

    fn finish(self) -> Outcome {
        Outcome { ok: self.ok(), lines: vec![self.to_value().to_string()] }
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Parse(format!("input has no field {key:?}")))
}

fn element(ctx: &Ctx, v: &Value) -> Result<BigElement, CliError> {
    let g = BigElement::from_json(v, Some(&ctx.base)).map_err(CliError::reading)?;
    ctx.check_depth(g.depth())?;
    Ok(g)
}

fn clopen(ctx: &Ctx, v: &Value, base: &BaseSequence) -> Result<ClopenSet, CliError> {
    let u = ClopenSet::from_json(v, Some(base)).map_err(CliError::reading)?;
    ctx.check_depth(u.depth())?;
    Ok(u)
}

fn point_set(v: &Value, base: &BaseSequence) -> Result<FinitePointSet, CliError> {
    FinitePointSet::from_json(v, Some(base)).map_err(CliError::reading)
}

/// `{"u", "g"}` with `g` defaulting to the odometer of the context base.
fn set_and_map(ctx: &Ctx, input: &Value) -> Result<(ClopenSet, BigElement), CliError> {
    let g = match input.get("g") {
        Some(g) => element(ctx, g)?,
        None => BigElement::odometer(&ctx.base),
    };
    let u = clopen(ctx, field(input, "u")?, g.base())?;
    Ok((u, g))
}

pub fn run(ctx: &Ctx, command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Elem { op } => elem(ctx, op),
        Command::Kr => kr(ctx),
        Command::ReturnMap => return_map(ctx),
        Command::PropE { op } => prop_e(ctx, op),
        Command::Stab { op } => stab(ctx, op),
        Command::Nd { op } => nd(ctx, op),
        Command::Oracle { op } => oracle(op),
        Command::Selftest { suite } => run_selftest(ctx, suite),
    }
}

fn order_json(g: &BigElement) -> Value {
    match g.order() {
        OrderResult::Finite(n) => scalar_to_json(&n),
        OrderResult::Infinite => json!("infinite"),
    }
}

fn elem(ctx: &Ctx, op: &ElemOp) -> Result<Outcome, CliError> {
    let mut r;
    match op {
        ElemOp::Odometer => {
            let f = BigElement::odometer(&ctx.base);
            r = Report::new("elem odometer", json!({ "base": ctx.base.to_json() }));
            r.set("element", f.to_json()).check("index is 1", f.index().is_one());
        }
        ElemOp::Random { max_depth, bound } => {
            let mut rng = sample::rng(ctx.seed);
            let g: BigElement = sample::element(&mut rng, &ctx.base, (*max_depth).min(ctx.depth_limit), *bound);
            r = Report::new(
                "elem random",
                json!({ "base": ctx.base.to_json(), "seed": ctx.seed, "max_depth": max_depth, "bound": bound }),
            );
            r.set("element", g.to_json());
        }
        ElemOp::Compose => {
            let input = ctx.read_input()?;
            let g = element(ctx, field(&input, "g")?)?;
            let h = element(ctx, field(&input, "h")?)?;
            let gh = g.try_compose(&h).map_err(CliError::reading)?;
            r = Report::new("elem compose", input);
            r.set("element", gh.to_json()).check("index is additive", gh.index() == g.index() + h.index());
        }
        ElemOp::Image => {
            let input = ctx.read_input()?;
            let g = element(ctx, field(&input, "g")?)?;
            let u = clopen(ctx, field(&input, "u")?, g.base())?;
            let img = g.image_of_clopen(&u);
            r = Report::new("elem image", input);
            r.set("image", img.to_json())
                .check("measure preserved", img.measure::<BigInt>() == u.measure::<BigInt>())
                .check("preimage recovers the set", g.preimage_of_clopen(&img) == u);
        }
        _ => {
            let input = ctx.read_input()?;
            let g = element(ctx, &input)?;
            let name = match op {
                ElemOp::Show => "elem show",
                ElemOp::Index => "elem index",
                ElemOp::Order => "elem order",
                ElemOp::Inverse => "elem inverse",
                ElemOp::Support => "elem support",
                ElemOp::Wreath => "elem wreath",
                _ => "elem power",
            };
            r = Report::new(name, input);
            match op {
                ElemOp::Show => {
                    r.set("element", g.to_json());
                }
                ElemOp::Index => {
                    r.set("index", scalar_to_json(&g.index()));
                }
                ElemOp::Order => {
                    let order = g.order();
                    if let OrderResult::Finite(n) = &order {
                        r.check("power by the order is the identity", g.power(n).is_identity());
                    }
                    r.set("order", order_json(&g));
                }
                ElemOp::Inverse => {
                    let gi = g.inverse();
                    r.set("element", gi.to_json()).check("g ∘ g^-1 is the identity", g.compose(&gi).is_identity());
                }
                ElemOp::Support => {
                    let s = g.support();
                    r.set("support", s.to_json())
                        .set("measure", json!(s.measure::<BigInt>().to_string()))
                        .check("support is invariant", g.image_of_clopen(&s) == s);
                }
                ElemOp::Wreath => {
                    let w = g.wreath_form();
                    let cycles: Vec<Value> = w
                        .cycles_with_carry()
                        .iter()
                        .map(|(c, sum)| json!({ "cycle": c, "carry_sum": scalar_to_json(sum) }))
                        .collect();
                    let lifted = w.lift().map_err(CliError::running)?;
                    r.set("depth", json!(w.depth))
                        .set("sigma", json!(w.sigma))
                        .set("carry", Value::Array(w.carry.iter().map(scalar_to_json).collect()))
                        .set("cycles", Value::Array(cycles))
                        .check("lift recovers the element", lifted == g);
                }
                ElemOp::Power { k } => {
                    let k: BigInt = k.parse().map_err(|_| CliError::Parse(format!("bad exponent {k:?}")))?;
                    let p = g.power(&k);
                    ctx.check_depth(p.depth()).map_err(|_| CliError::Limit("power exceeds the depth limit".into()))?;
                    r.set("k", scalar_to_json(&k))
                        .set("element", p.to_json())
                        .check("index scales", p.index() == g.index() * k);
                }
                _ => unreachable!("handled above"),
            }
        }
    }
    Ok(r.finish())
}

fn kr(ctx: &Ctx) -> Result<Outcome, CliError> {
    let input = ctx.read_input()?;
    let (u, g) = set_and_map(ctx, &input)?;
    let kr = build_kr(&u, &g).map_err(CliError::running)?;
    let mut r = Report::new("kr", input);
    r.set("partition", kr.to_json())
        .set("heights", json!(kr.heights()))
        .check("levels and the avoiding set partition the space", kr.verify().is_ok());
    Ok(r.finish())
}

fn return_map(ctx: &Ctx) -> Result<Outcome, CliError> {
    let input = ctx.read_input()?;
    let (u, g) = set_and_map(ctx, &input)?;
    let (gu, hu) = first_return_of(&u, &g).map_err(CliError::running)?;
    let mut r = Report::new("return-map", input);
    r.set("first_return", gu.to_json())
        .set("climb", hu.to_json())
        .set("first_return_index", scalar_to_json(&gu.index()))
        .check("g = g_u ∘ h_u", gu.compose(&hu) == g)
        .check("g_u is supported in u", gu.is_supported_in(&u));
    if g == BigElement::odometer(g.base()) {
        r.check("index of f_u is 1", gu.index().is_one());
    }
    Ok(r.finish())
}

fn prop_e(ctx: &Ctx, op: &PropEOp) -> Result<Outcome, CliError> {
    let input = ctx.read_input()?;
    let mut r;
    match op {
        PropEOp::Decompose => {
            let g = element(ctx, field(&input, "g")?)?;
            let u1 = clopen(ctx, field(&input, "u1")?, g.base())?;
            let u2 = clopen(ctx, field(&input, "u2")?, g.base())?;
            let cert = decompose_local(&g, &u1, &u2).map_err(CliError::running)?;
            // Re-verify from the serialized form, as a consumer would.
            let reread = Certificate::<BigInt>::from_json(&cert.to_json(), None).map_err(CliError::running)?;
            r = Report::new("prop-e decompose", input);
            r.set("certificate", cert.to_json()).set("factors", json!(cert.len()));
            certificate_checks(&mut r, &reread);
        }
        PropEOp::Verify => {
            let cert = Certificate::<BigInt>::from_json(&input, Some(&ctx.base)).map_err(CliError::reading)?;
            r = Report::new("prop-e verify", input);
            r.set("factors", json!(cert.len()));
            certificate_checks(&mut r, &cert);
        }
        PropEOp::Kernel => {
            let h = element(ctx, field(&input, "h")?)?;
            let w = match input.get("w") {
                Some(w) => Some(clopen(ctx, w, h.base())?),
                None => None,
            };
            let k = factor_kernel(&h, w.as_ref()).map_err(CliError::running)?;
            r = Report::new("prop-e kernel", input);
            r.set("factorization", k.to_json()).check("t2 ∘ t1 = h with both of finite order", k.verify());
            if let Some(w) = &w {
                r.check("factors supported in w", k.t1.is_supported_in(w) && k.t2.is_supported_in(w));
            }
        }
    }
    Ok(r.finish())
}

fn certificate_checks(r: &mut Report, cert: &Certificate<BigInt>) {
    let local = cert.factors.iter().all(|f| {
        f.element.is_supported_in(match f.tag {
            Tag::U1 => &cert.u1,
            Tag::U2 => &cert.u2,
        })
    });
    r.check("product equals the target", cert.product() == cert.target)
        .check("each factor is supported in its tagged set", local)
        .check("certificate verifies", verify_certificate(cert));
}

fn class_json(c: &StabilizerClass) -> Value {
    let mut v = c.to_json();
    v["maximal"] = json!(c.is_maximal());
    v
}

fn stab(ctx: &Ctx, op: &StabOp) -> Result<Outcome, CliError> {
    let input = ctx.read_input()?;
    let mut r;
    match op {
        StabOp::Classify => {
            let y = point_set(&input, &ctx.base)?;
            let c = classify_finite_stabilizer(&y).map_err(CliError::running)?;
            r = Report::new("stab classify", input);
            r.set("class", class_json(&c.class)).set("orbits", json!(c.orbits));
        }
        StabOp::Realize => {
            let y = point_set(field(&input, "y")?, &ctx.base)?;
            let z = match input.get("z") {
                Some(z) => point_set(z, y.base())?,
                None => FinitePointSet::new(y.base(), Vec::new()).map_err(CliError::reading)?,
            };
            let pi = Perm::from_json(field(&input, "pi")?, None).map_err(CliError::reading)?;
            let f: BigElement = realize_permutation(&y, &pi, &z).map_err(CliError::running)?;
            let ys = y.points();
            r = Report::new("stab realize", input);
            r.set("element", f.to_json())
                .check("y[i] maps to y[pi(i)]", (0..ys.len()).all(|i| f.apply_to_point(&ys[i]) == ys[pi.apply(i)]))
                .check("z is fixed pointwise", z.points().iter().all(|x| f.apply_to_point(x) == *x));
        }
        StabOp::SameOrbit => {
            let x = Point::from_json(field(&input, "x")?, Some(&ctx.base)).map_err(CliError::reading)?;
            let y = Point::from_json(field(&input, "y")?, Some(&ctx.base)).map_err(CliError::reading)?;
            let offset = y.integer_offset::<BigInt>(&x).map_err(CliError::running)?;
            r = Report::new("stab same-orbit", input);
            r.set("same_orbit", json!(same_orbit(&x, &y).map_err(CliError::running)?))
                .set("offset", offset.as_ref().map_or(Value::Null, scalar_to_json));
        }
    }
    Ok(r.finish())
}

fn nd(ctx: &Ctx, op: &NdOp) -> Result<Outcome, CliError> {
    let mut r;
    match op {
        NdOp::Build { stages } => {
            let c = build_construction::<BigInt>(&ctx.base, *stages, ctx.depth_limit).map_err(CliError::running)?;
            r = Report::new("nd build", json!({ "base": ctx.base.to_json(), "stages": stages }));
            r.set("construction", c.to_json()).check("stage invariants hold", c.verify().is_ok());
        }
        NdOp::Check { omega, stages } => {
            let w: OmegaWord = omega.parse().map_err(CliError::reading)?;
            let n = stages.unwrap_or(w.len());
            let c = build_construction::<BigInt>(&ctx.base, n, ctx.depth_limit).map_err(CliError::running)?;
            let cover = y_cover(&c, &w).map_err(CliError::running)?;
            let mut orders = Vec::new();
            for m in 1..=w.len().min(MAX_CLOSURE_STAGES) {
                let o = truncated_group_order(&c, &w, m).map_err(CliError::running)?;
                orders.push(json!({
                    "n": m,
                    "group": o.group,
                    "gamma_model": o.gamma_model,
                    "bound": o.bound.to_string(),
                }));
            }
            r = Report::new("nd check", json!({ "base": ctx.base.to_json(), "omega": w.to_json(), "stages": n }));
            r.set("cover", cover.to_json())
                .set("cover_measure", json!(cover.measure::<BigInt>().to_string()))
                .set("truncated_orders", Value::Array(orders))
                .check("stage invariants hold", c.verify().is_ok())
                .check("nowhere dense at every stage", check_nowhere_dense(&c, &w));
        }
    }
    Ok(r.finish())
}

fn oracle(op: &OracleOp) -> Result<Outcome, CliError> {
    let mut r;
    match op {
        OracleOp::Maximality { n, y } => {
            let model = FiniteModel::cyclic(*n).map_err(CliError::reading)?;
            let rep = finite_oracle_maximality(&model, y).map_err(CliError::running)?;
            r = Report::new("oracle maximality", json!({ "n": n, "y": y }));
            r.set("class", class_json(&rep.class))
                .set("brute_force_maximal", json!(rep.brute_force_maximal))
                .set("group_order", json!(rep.group_order))
                .set("stabilizer_order", json!(rep.stabilizer_order))
                .set("partition_stabilizer_order", json!(rep.partition_stabilizer_order))
                .check("classifier agrees with brute force", rep.agree);
        }
        OracleOp::Generation { n, u1, u2 } => {
            let rep = finite_property_e(*n, u1, u2).map_err(CliError::running)?;
            r = Report::new("oracle generation", json!({ "n": n, "u1": u1, "u2": u2 }));
            r.set("generated_order", json!(rep.generated_order))
                .set("symmetric_order", json!(rep.symmetric_order))
                .set("equal", json!(rep.equal));
        }
    }
    Ok(r.finish())
}

fn run_selftest(ctx: &Ctx, suites: &[String]) -> Result<Outcome, CliError> {
    let names: Vec<&str> =
        if suites.is_empty() { SUITES.to_vec() } else { suites.iter().map(String::as_str).collect() };
    let mut lines = Vec::new();
    let mut ok = true;
    for name in names {
        let rep = selftest::run_suite(name, ctx.seed).map_err(CliError::reading)?;
        eprintln!("{}", rep.line());
        ok &= rep.passed();
        // Timing goes to stderr only so reports stay byte-identical.
        lines.push(
            json!({
                "suite": rep.name,
                "seed": ctx.seed,
                "cases": rep.cases,
                "failed": rep.failed,
                "failures": rep.failures,
                "ok": rep.passed(),
            })
            .to_string(),
        );
    }
    Ok(Outcome { lines, ok })
}
