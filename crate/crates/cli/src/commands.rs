use std::sync::Arc;

use asymlen::asymptotics::{
    difference_profile, epsilon_ideal, epsilon_module, estimate_limit_with, minkowski_family_check,
    symbolic_multiplicity, teissier_check, EpsilonReport, LengthSequence,
};
use asymlen::geometry::{kt_check, limit_newton_region, minkowski_sum, ConvexRegion};
use asymlen::length::maximal_power_index;
use asymlen::rational::{fmt_q, to_f64};
use asymlen::semigroup::{enumerate_levels, SemigroupPredicate};
use asymlen::{parse_ideal, FamilySpec, GradedFamily, MonomialModule, VerificationReport, Q};
use serde_json::{json, Value};

use crate::cache::{members, Member, ResultCache};
use crate::config::{Command, Settings, Which};
use crate::error::{CliError, Result};
use crate::report::{estimate_json, estimate_line, q_json, Report};
use crate::svg::{staircase, Plot, Series};

pub struct Context {
    pub settings: Settings,
    pub cache: Option<ResultCache>,
}

pub fn run(command: Command, ctx: &mut Context) -> Result<Report> {
    match command {
        Command::Family { .. } => family_eval(ctx),
        Command::Limits => limits(ctx),
        Command::Diff => diff(ctx),
        Command::Minkowski => minkowski(ctx),
        Command::Epsilon => epsilon(ctx),
        Command::Symbolic => symbolic(ctx),
        Command::Okounkov => okounkov(ctx),
        Command::Kt => kt(ctx),
        Command::Counterexample { which: Which::Sigma } => sigma(ctx),
        Command::Counterexample { which: Which::Log } => log(ctx),
    }
}

fn family(ctx: &Context) -> Result<GradedFamily> {
    Ok(GradedFamily::new(ctx.settings.family_spec()?)?)
}

fn sequence_of(ctx: &mut Context, fam: &GradedFamily, max_n: u32, need_ideal: bool) -> Result<(LengthSequence, Vec<Member>)> {
    let ms = members(fam, max_n, need_ideal, ctx.cache.as_mut())?;
    let seq = LengthSequence::new(ms.iter().map(|m| (m.n, m.length)).collect(), fam.dim() as u32)?;
    Ok((seq, ms))
}

fn verification_json(v: &VerificationReport) -> Value {
    match v {
        VerificationReport::Pass { checked } => json!({"passed": true, "checked": checked}),
        VerificationReport::Fail { m, n, witness } => json!({
            "passed": false,
            "m": m,
            "n": n,
            "witness": witness.as_ref().map(|w| w.0.clone()),
        }),
    }
}

fn sequence_rows(seq: &LengthSequence) -> Vec<Vec<String>> {
    seq.entries()
        .iter()
        .zip(seq.normalized())
        .map(|((n, v), (_, q))| vec![n.to_string(), v.to_string(), fmt_q(&q)])
        .collect()
}

fn sequence_plot(title: String, seq: &LengthSequence, window: Option<(u32, u32)>, limit: Option<&Q>) -> String {
    let pts = seq.normalized().iter().map(|(n, v)| (*n as f64, to_f64(v))).collect();
    Plot {
        title,
        x_label: "n".into(),
        y_label: format!("value / n^{}", seq.degree()),
        series: vec![Series::line("normalized", pts)],
        window: window.map(|(a, b)| (a as f64, b as f64)),
        hline: limit.map(|l| (format!("estimate {:.4}", to_f64(l)), to_f64(l))),
        from_origin: false,
    }
    .render()
}

/// Boundary of a cobounded 2-D region, cut off at `reach`.
fn region_boundary(region: &ConvexRegion, reach: f64) -> Result<Vec<(f64, f64)>> {
    let mut v: Vec<(f64, f64)> = region.vertices()?.iter().map(|p| (to_f64(&p[0]), to_f64(&p[1]))).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::with_capacity(v.len() + 2);
    if let (Some(first), Some(last)) = (v.first().copied(), v.last().copied()) {
        out.push((first.0, reach));
        out.extend(v);
        out.push((reach, last.1));
    }
    Ok(out)
}

fn region_reach(regions: &[&ConvexRegion]) -> Result<f64> {
    let mut m: f64 = 1.0;
    for r in regions {
        for p in r.vertices()? {
            m = m.max(to_f64(&p[0])).max(to_f64(&p[1]));
        }
    }
    Ok(m * 1.2)
}

fn family_eval(ctx: &mut Context) -> Result<Report> {
    let fam = family(ctx)?;
    let n = ctx.settings.n_or(16);
    let (_, ms) = sequence_of(ctx, &fam, n, true)?;
    let mut r = Report::new("family-eval", ctx.settings.inputs(Some(n)), vec!["n", "generators", "colength", "length", "ideal"]);
    for m in &ms {
        let ideal = m.ideal.clone().unwrap_or_default();
        let gens = if ideal == "0" { 0 } else { ideal.matches(',').count() + 1 };
        let colength = m.colength.map_or_else(|| "inf".to_string(), |v| v.to_string());
        r.rows.push(vec![m.n.to_string(), gens.to_string(), colength, m.length.to_string(), ideal]);
    }
    let graded = fam.verify_graded(n)?;
    let filtration = fam.verify_filtration(n)?;
    r.result = json!({
        "members": ms.len(),
        "primary": ms.iter().all(|m| m.colength.is_some()),
        "graded": verification_json(&graded),
        "filtration": verification_json(&filtration),
    });
    r.summary.push(format!("{}: {} members", fam.spec(), ms.len()));
    r.summary.push(format!("graded: {}, filtration: {}", graded.passed(), filtration.passed()));
    if ctx.settings.svg && fam.dim() == 2 {
        let last = fam.member_ideal(n)?;
        let scale = n as f64;
        let gens: Vec<(f64, f64)> = {
            let mut g: Vec<(f64, f64)> = last.gens().iter().map(|e| (e.0[0] as f64 / scale, e.0[1] as f64 / scale)).collect();
            g.sort_by(|a, b| a.0.total_cmp(&b.0));
            g
        };
        let mut series = Vec::new();
        let mut reach = gens.iter().fold(1.0f64, |m, p| m.max(p.0).max(p.1)) * 1.2;
        if last.is_primary() {
            let region = limit_newton_region(&fam, n)?;
            reach = reach.max(region_reach(&[&region])?);
            series.push(Series::line(format!("staircase of I_{n} / {n}"), staircase(&gens, reach)));
            series.push(Series::line("convex hull", region_boundary(&region, reach)?));
        } else {
            series.push(Series::line(format!("staircase of I_{n} / {n}"), staircase(&gens, reach)));
        }
        r.svg = Some(
            Plot {
                title: format!("{}", fam.spec()),
                x_label: "a_1".into(),
                y_label: "a_2".into(),
                series,
                from_origin: true,
                ..Plot::default()
            }
            .render(),
        );
    }
    Ok(r)
}

fn limits(ctx: &mut Context) -> Result<Report> {
    let fam = family(ctx)?;
    let n = ctx.settings.n_or(32);
    let (seq, _) = sequence_of(ctx, &fam, n, false)?;
    let est = estimate_limit_with(&seq, ctx.settings.tol)?;
    let mut r = Report::new("limits", ctx.settings.inputs(Some(n)), vec!["n", "raw", "normalized"]);
    r.rows = sequence_rows(&seq);
    r.result = json!({"degree": seq.degree(), "estimate": estimate_json(&est)});
    r.summary.push(estimate_line(&format!("lim l(R/I_n)/n^{} for {}", seq.degree(), fam.spec()), &est));
    if ctx.settings.svg {
        r.svg = Some(sequence_plot(fam.spec().to_string(), &seq, Some(est.window), Some(&est.point_estimate)));
    }
    Ok(r)
}

fn diff(ctx: &mut Context) -> Result<Report> {
    let fam = family(ctx)?;
    let n = ctx.settings.n_or(32);
    let (seq, _) = sequence_of(ctx, &fam, n + 1, false)?;
    let profile = difference_profile(&seq)?;
    let d = fam.dim() as u32;
    let mut r = Report::new("diff", ctx.settings.inputs(Some(n)), vec!["n", "difference", "forward", "backward"]);
    let raw: Vec<i128> = seq.entries().windows(2).map(|w| w[1].1 as i128 - w[0].1 as i128).collect();
    for (i, (k, f)) in profile.forward.iter().enumerate() {
        r.rows.push(vec![k.to_string(), raw[i].to_string(), fmt_q(f), fmt_q(&profile.backward[i].1)]);
    }
    let filtration = fam.verify_filtration(n + 1)?;
    let mut result = json!({"filtration": verification_json(&filtration)});
    if filtration.passed() {
        let first = fam.member_ideal(1)?;
        match maximal_power_index(&first) {
            Some(c_min) => {
                let c = ctx.settings.c.unwrap_or(c_min);
                if c < c_min {
                    return Err(CliError::Usage(format!("m^{c} is not contained in I_1 (least power is {c_min})")));
                }
                let cd = (c as u128).pow(d);
                let violation = raw.iter().zip(1u32..).find(|(v, k)| **v as u128 > cd * (*k as u128 + 1).pow(d - 1));
                let detail = match violation {
                    None => format!("l(I_n/I_(n+1)) <= {c}^{d} (n+1)^{} for n <= {n}", d - 1),
                    Some((v, k)) => format!("n = {k}: {v} > {}", cd * (k as u128 + 1).pow(d - 1)),
                };
                r.check("filtration difference bound", violation.is_none(), detail);
                result["c"] = json!(c);
                result["bound_holds"] = json!(violation.is_none());
            }
            None => r.summary.push("I_1 is not m-primary; the difference bound does not apply".into()),
        }
    } else {
        r.summary.push("not a filtration; the difference bound does not apply".into());
    }
    let (lo, hi) = profile
        .forward
        .iter()
        .fold((None::<&Q>, None::<&Q>), |(lo, hi), (_, v)| (Some(lo.map_or(v, |l| l.min(v))), Some(hi.map_or(v, |h| h.max(v)))));
    result["forward_min"] = lo.map_or(Value::Null, q_json);
    result["forward_max"] = hi.map_or(Value::Null, q_json);
    r.result = result;
    r.summary.push(format!(
        "forward profile of {} over n <= {n}: min {:.4}, max {:.4}",
        fam.spec(),
        lo.map_or(f64::NAN, to_f64),
        hi.map_or(f64::NAN, to_f64)
    ));
    if ctx.settings.svg {
        let pts = profile.forward.iter().map(|(k, v)| (*k as f64, to_f64(v))).collect();
        r.svg = Some(
            Plot {
                title: format!("forward differences of {}", fam.spec()),
                x_label: "n".into(),
                y_label: format!("(l_(n+1) - l_n) / n^{}", d - 1),
                series: vec![Series::line("forward", pts)],
                ..Plot::default()
            }
            .render(),
        );
    }
    Ok(r)
}

fn minkowski(ctx: &mut Context) -> Result<Report> {
    let f = family(ctx)?;
    let g = GradedFamily::new(ctx.settings.family2_spec()?)?;
    let n = ctx.settings.n_or(64);
    let rep = minkowski_family_check(&f, &g, n)?;
    let mut r = Report::new("minkowski", ctx.settings.inputs(Some(n)), vec!["family", "point_estimate", "tail_min", "tail_max", "verdict"]);
    let product = format!("product({}; {})", f.spec(), g.spec());
    for (name, e) in [(f.spec().to_string(), &rep.first), (g.spec().to_string(), &rep.second), (product, &rep.product)] {
        r.rows.push(vec![name, fmt_q(&e.point_estimate), fmt_q(&e.tail_min), fmt_q(&e.tail_max), e.verdict.to_string()]);
    }
    let d = f.dim();
    r.check(
        "minkowski inequality for families",
        rep.holds(1e-9),
        format!("lim(F)^(1/{d}) + lim(G)^(1/{d}) - lim(FG)^(1/{d}) = {:.6e}", rep.comparison.slack),
    );
    let mut result = json!({
        "first": estimate_json(&rep.first),
        "second": estimate_json(&rep.second),
        "product": estimate_json(&rep.product),
        "slack": rep.comparison.slack,
        "ordering": format!("{:?}", rep.comparison.ordering),
    });
    if let (FamilySpec::Power(i), FamilySpec::Power(j)) = (f.spec(), g.spec()) {
        if i.is_primary() && j.is_primary() && d <= 3 {
            let t = teissier_check(i, j)?;
            r.check(
                "multiplicity root-sum inequality",
                t.holds(),
                format!("e(I) = {}, e(J) = {}, e(IJ) = {}", fmt_q(&t.first), fmt_q(&t.second), fmt_q(&t.combined)),
            );
            result["multiplicities"] = json!({
                "e_i": fmt_q(&t.first),
                "e_j": fmt_q(&t.second),
                "e_ij": fmt_q(&t.combined),
                "equality": t.is_equality(),
            });
        }
    }
    r.result = result;
    r.summary.push(estimate_line("F", &rep.first));
    r.summary.push(estimate_line("G", &rep.second));
    r.summary.push(estimate_line("FG", &rep.product));
    if ctx.settings.svg && d == 2 {
        let fg = GradedFamily::new(FamilySpec::Product(Box::new(f.spec().clone()), Box::new(g.spec().clone())))?;
        r.svg = Some(regions_plot(
            "limit Newton regions",
            &[("F".into(), limit_newton_region(&f, n)?), ("G".into(), limit_newton_region(&g, n)?), ("FG".into(), limit_newton_region(&fg, n)?)],
        )?);
    }
    Ok(r)
}

fn regions_plot(title: &str, regions: &[(String, ConvexRegion)]) -> Result<String> {
    let refs: Vec<&ConvexRegion> = regions.iter().map(|r| &r.1).collect();
    let reach = region_reach(&refs)?;
    let series =
        regions.iter().map(|(name, reg)| Ok(Series::line(name.clone(), region_boundary(reg, reach)?))).collect::<Result<_>>()?;
    Ok(Plot { title: title.into(), x_label: "a_1".into(), y_label: "a_2".into(), series, from_origin: true, ..Plot::default() }.render())
}

fn epsilon(ctx: &mut Context) -> Result<Report> {
    let n = ctx.settings.n_or(32);
    let (label, rep): (String, EpsilonReport) = match &ctx.settings.module {
        Some(components) => {
            let comps = components.iter().map(|c| parse_ideal(&ctx.settings.ring, c)).collect::<asymlen::Result<Vec<_>>>()?;
            let module = MonomialModule::new(&ctx.settings.ring, comps)?;
            let label = components.iter().map(|c| format!("({c})")).collect::<Vec<_>>().join(" + ");
            (label, epsilon_module(&module, n)?)
        }
        None => match ctx.settings.family_spec()? {
            FamilySpec::Power(i) => (format!("({i})"), epsilon_ideal(&i, n)?),
            other => return Err(CliError::Usage(format!("epsilon needs `power(I)` or a module, got `{other}`"))),
        },
    };
    let mut r = Report::new("epsilon", ctx.settings.inputs(Some(n)), vec!["n", "raw", "normalized"]);
    r.rows = sequence_rows(&rep.sequence);
    r.result = json!({
        "degree": rep.sequence.degree(),
        "primary": rep.primary,
        "limit": estimate_json(&rep.limit),
        "epsilon": estimate_json(&rep.epsilon),
    });
    r.summary.push(estimate_line(&format!("epsilon of {label}"), &rep.epsilon));
    if ctx.settings.svg {
        r.svg = Some(sequence_plot(format!("saturation lengths of {label}"), &rep.sequence, Some(rep.limit.window), Some(&rep.limit.point_estimate)));
    }
    Ok(r)
}

fn symbolic(ctx: &mut Context) -> Result<Report> {
    let n = ctx.settings.n_or(32);
    let (i, j) = match ctx.settings.family_spec()? {
        FamilySpec::Symbolic { ideal, by } => (ideal, by),
        other => return Err(CliError::Usage(format!("symbolic needs `symbolic(I; J)`, got `{other}`"))),
    };
    let rep = symbolic_multiplicity(&i, &j, n)?;
    let mut r = Report::new("symbolic", ctx.settings.inputs(Some(n)), vec!["n", "raw", "normalized"]);
    r.rows = sequence_rows(&rep.sequence);
    r.result = json!({"s": rep.s, "limit": estimate_json(&rep.limit)});
    match rep.s {
        Some(s) => {
            r.summary.push(format!("dim I_n(J)/I^n = {s}"));
            r.summary.push(estimate_line(&format!("lim e(I_n(J)/I^n)/n^{}", i.dim() - s), &rep.limit));
        }
        None => r.summary.push("I_n(J) = I^n for every n".into()),
    }
    if ctx.settings.svg {
        r.svg = Some(sequence_plot(format!("symbolic({i}; {j})"), &rep.sequence, Some(rep.limit.window), Some(&rep.limit.point_estimate)));
    }
    Ok(r)
}

fn okounkov(ctx: &mut Context) -> Result<Report> {
    let fam = Arc::new(family(ctx)?);
    let n = ctx.settings.n_or(64);
    let kappa = ctx.settings.c.unwrap_or(1);
    let pred = SemigroupPredicate::from_family(Arc::clone(&fam), kappa)?;
    let levels = enumerate_levels(&pred, n)?;
    let rep = levels.limit_check()?;
    let body = levels.okounkov_body()?;
    let mut r = Report::new("okounkov", ctx.settings.inputs(Some(n)), vec!["k", "count", "normalized"]);
    r.rows = sequence_rows(&rep.sequence);
    let inv = rep.invariants;
    let vertices: Vec<Vec<String>> = body.vertices().iter().map(|v| v.iter().map(fmt_q).collect()).collect();
    r.result = json!({
        "label": pred.label(),
        "beta": pred.beta(),
        "invariants": {"m": inv.m, "ind": inv.ind, "q": inv.q, "heuristic": inv.heuristic},
        "body": {"vertices": vertices, "volume": fmt_q(&rep.body_volume)},
        "estimate": estimate_json(&rep.estimate),
        "expected": rep.expected.as_ref().map(fmt_q),
        "relative_gap": rep.relative_gap,
        "max_ratio": fmt_q(&rep.max_ratio),
    });
    r.summary.push(format!("m = {}, ind = {}, q = {}, vol = {}", inv.m, inv.ind, inv.q, fmt_q(&rep.body_volume)));
    r.summary.push(estimate_line("count limit", &rep.estimate));
    if let (Some(e), Some(gap)) = (&rep.expected, rep.relative_gap) {
        r.summary.push(format!("m^q vol / ind = {} (relative gap {gap:.3e})", fmt_q(e)));
    }
    if ctx.settings.svg && fam.dim() == 2 {
        let mut ring: Vec<(f64, f64)> = body.vertices().iter().map(|v| (to_f64(&v[0]), to_f64(&v[1]))).collect();
        if let Some(&first) = ring.first() {
            ring.push(first);
        }
        let mut series = vec![Series::line("okounkov body", ring)];
        let top = levels.max_level();
        if levels.count(top).is_some_and(|c| c <= 20_000) {
            let pts = levels.points(top)?.iter().map(|p| (p[0] as f64 / top as f64, p[1] as f64 / top as f64)).collect();
            series.push(Series::scatter(format!("level {top} / {top}"), pts));
        }
        r.svg = Some(
            Plot { title: pred.label().to_string(), x_label: "a_1".into(), y_label: "a_2".into(), series, from_origin: true, ..Plot::default() }
                .render(),
        );
    }
    Ok(r)
}

fn kt(ctx: &mut Context) -> Result<Report> {
    let f = family(ctx)?;
    let g = GradedFamily::new(ctx.settings.family2_spec()?)?;
    let n = ctx.settings.n_or(1);
    let a = limit_newton_region(&f, n)?;
    let b = limit_newton_region(&g, n)?;
    let sum = minkowski_sum(&a, &b)?;
    let rep = kt_check(&a, &b)?;
    let mut r = Report::new("kt", ctx.settings.inputs(Some(n)), vec!["region", "covolume", "halfspaces"]);
    for (name, reg, c) in [("A", &a, &rep.first), ("B", &b, &rep.second), ("A+B", &sum, &rep.combined)] {
        r.rows.push(vec![name.to_string(), fmt_q(c), reg.to_string()]);
    }
    let d = a.dim();
    r.check(
        "covolume root-sum inequality",
        rep.holds(),
        format!("covol(A)^(1/{d}) + covol(B)^(1/{d}) - covol(A+B)^(1/{d}) = {:.6e}", rep.slack),
    );
    r.result = json!({
        "covol_a": fmt_q(&rep.first),
        "covol_b": fmt_q(&rep.second),
        "covol_sum": fmt_q(&rep.combined),
        "slack": rep.slack,
        "equality": rep.is_equality(),
    });
    r.summary.push(format!(
        "covolumes {}, {}, {}{}",
        fmt_q(&rep.first),
        fmt_q(&rep.second),
        fmt_q(&rep.combined),
        if rep.is_equality() { " (equality)" } else { "" }
    ));
    if ctx.settings.svg && d == 2 {
        r.svg = Some(regions_plot("regions and their Minkowski sum", &[("A".into(), a), ("B".into(), b), ("A+B".into(), sum)])?);
    }
    Ok(r)
}

fn maxpower_family(ctx: &Context, name: &str) -> Result<GradedFamily> {
    let spec = asymlen::parse_family(&ctx.settings.ring, &format!("maxpower({name})"))?;
    Ok(GradedFamily::new(spec)?)
}

fn sigma(ctx: &mut Context) -> Result<Report> {
    let fam = maxpower_family(ctx, "sigma")?;
    let n = ctx.settings.n_or(64);
    let (seq, _) = sequence_of(ctx, &fam, n + 1, false)?;
    let profile = difference_profile(&seq)?;
    let mut r = Report::new("counterexample-sigma", ctx.settings.inputs(Some(n)), vec!["m", "b_m", "length", "F"]);
    for ((m, len), (_, f)) in seq.entries().iter().zip(&profile.backward) {
        let b = fam.max_power_exponent(*m)?.ok_or_else(|| CliError::Internal("maxpower family without exponents".into()))?;
        r.rows.push(vec![m.to_string(), b.to_string(), len.to_string(), fmt_q(f)]);
    }
    let graded = fam.verify_graded(n)?;
    let filtration = fam.verify_filtration(n + 1)?;
    r.check("graded family", graded.passed(), format!("I_m I_n in I_(m+n) for m + n <= {n}"));
    // Jump points m = 2^(2^k) - 1 with k >= 1.
    let jumps: Vec<(u32, Q)> = (1..5u32)
        .filter_map(|k| 1u64.checked_shl(1 << k).map(|p| p - 1))
        .filter(|&m| m <= n as u64)
        .map(|m| (m as u32, profile.backward[m as usize - 1].1.clone()))
        .collect();
    let increasing = jumps.windows(2).all(|w| w[0].1 < w[1].1);
    let listing: Vec<String> = jumps.iter().map(|(m, f)| format!("F({m}) = {}", fmt_q(f))).collect();
    r.check("F increases along jump points", increasing, listing.join(", "));
    r.result = json!({
        "graded": verification_json(&graded),
        "filtration": verification_json(&filtration),
        "jump_points": jumps.iter().map(|(m, f)| json!({"m": m, "F": fmt_q(f)})).collect::<Vec<_>>(),
    });
    r.summary.push(format!("{}: F(m) = (l_m - l_(m+1)) / m^{}", fam.spec(), fam.dim() - 1));
    r.summary.extend(listing);
    if let VerificationReport::Fail { m, .. } = filtration {
        r.summary.push(format!("not a filtration: I_{} is not contained in I_{m}", m + 1));
    }
    if ctx.settings.svg {
        let pts = profile.backward.iter().map(|(k, v)| (*k as f64, to_f64(v))).collect();
        r.svg = Some(
            Plot {
                title: format!("normalized differences of {}", fam.spec()),
                x_label: "m".into(),
                y_label: "F(m)".into(),
                series: vec![Series::line("F", pts)],
                ..Plot::default()
            }
            .render(),
        );
    }
    Ok(r)
}

fn log(ctx: &mut Context) -> Result<Report> {
    let fam = maxpower_family(ctx, "log")?;
    let n = ctx.settings.n_or(256);
    let d = fam.dim() as u32;
    let (seq, _) = sequence_of(ctx, &fam, n + 1, false)?;
    let profile = difference_profile(&seq)?;
    let mut r = Report::new("counterexample-log", ctx.settings.inputs(Some(n)), vec!["n", "b_n", "length", "forward"]);
    for ((k, len), (_, f)) in seq.entries().iter().zip(&profile.forward) {
        let b = fam.max_power_exponent(*k)?.ok_or_else(|| CliError::Internal("maxpower family without exponents".into()))?;
        r.rows.push(vec![k.to_string(), b.to_string(), len.to_string(), fmt_q(f)]);
    }
    let head = LengthSequence::new(seq.entries()[..n as usize].to_vec(), d)?;
    let est = estimate_limit_with(&head, ctx.settings.tol)?;
    let filtration = fam.verify_filtration(n + 1)?;
    r.check("filtration", filtration.passed(), format!("I_(n+1) in I_n for n <= {n}"));
    let first = fam.member_ideal(1)?;
    let c = maximal_power_index(&first).ok_or_else(|| CliError::Internal("I_1 of a maxpower family".into()))?;
    let cd = (c as u128).pow(d);
    let violation = seq
        .entries()
        .windows(2)
        .find(|w| w[1].1 - w[0].1 > cd * (w[0].0 as u128 + 1).pow(d - 1))
        .map(|w| w[0].0);
    r.check(
        "filtration difference bound",
        violation.is_none(),
        match violation {
            None => format!("l(I_n/I_(n+1)) <= {c}^{d} (n+1)^{} for n <= {n}", d - 1),
            Some(k) => format!("violated at n = {k}"),
        },
    );
    let jumps: Vec<Value> = profile
        .forward
        .iter()
        .filter(|(k, _)| (k + 1).is_power_of_two())
        .map(|(k, f)| json!({"n": k, "forward": fmt_q(f)}))
        .collect();
    r.result = json!({
        "c": c,
        "estimate": estimate_json(&est),
        "filtration": verification_json(&filtration),
        "jump_points": jumps,
    });
    r.summary.push(estimate_line(&format!("lim l(R/I_n)/n^{d} for {}", fam.spec()), &est));
    if let Some((k, f)) = profile.forward.iter().rev().find(|(k, _)| (k + 1).is_power_of_two()) {
        r.summary.push(format!("forward difference at jump n = {k}: {:.4}", to_f64(f)));
    }
    if ctx.settings.svg {
        let pts = profile.forward.iter().map(|(k, v)| (*k as f64, to_f64(v))).collect();
        let scaled = head.normalized().iter().map(|(k, v)| (*k as f64, to_f64(v))).collect();
        r.svg = Some(
            Plot {
                title: format!("{}", fam.spec()),
                x_label: "n".into(),
                y_label: "value".into(),
                series: vec![Series::line("forward difference", pts), Series::line(format!("l_n / n^{d}"), scaled)],
                ..Plot::default()
            }
            .render(),
        );
    }
    Ok(r)
}
