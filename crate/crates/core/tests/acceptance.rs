//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one `PASS`/`FAIL` line per criterion; exits nonzero if any fails.

use std::cmp::Ordering;
use std::sync::Arc;
use std::time::{Duration, Instant};

use asymlen::asymptotics::{
    difference_profile, epsilon_ideal, epsilon_module, estimate_limit, filtration_difference_bound, length_sequence,
    quotient_length_bound_check, minkowski_family_check, multiplicity, symbolic_multiplicity, teissier_check,
    volume_equals_multiplicity, LengthSequence,
};
use asymlen::geometry::{hull_region, kt_check, multiplicity_exact, ConvexRegion, Halfspace};
use asymlen::length::{colength, for_each_in_box, maximal_power_index, Length};
use asymlen::rational::{fmt_q, q, qi, to_f64};
use asymlen::semigroup::{enumerate_levels, SemigroupPredicate};
use asymlen::{
    parse_ideal, AmbientRing, Exponent, ExponentSequence, FamilySpec, GradedFamily, MonomialIdeal, MonomialModule,
    ValuationWeight, Q,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn ring(d: usize) -> Arc<AmbientRing> {
    AmbientRing::standard(d).unwrap()
}

fn ideal(d: usize, s: &str) -> MonomialIdeal {
    parse_ideal(&ring(d), s).unwrap()
}

fn power_family(d: usize, s: &str) -> GradedFamily {
    GradedFamily::new(FamilySpec::Power(ideal(d, s))).unwrap()
}

fn valuation_family(weights: &[i64], threshold: Q) -> GradedFamily {
    let w = ValuationWeight::new(weights.iter().map(|&x| qi(x)).collect(), threshold);
    GradedFamily::new(FamilySpec::Valuation { ring: ring(weights.len()), constraints: vec![w] }).unwrap()
}

fn rel_err(x: &Q, target: f64) -> f64 {
    (to_f64(x) - target).abs() / target.abs()
}

fn random_ideal(rng: &mut ChaCha8Rng, d: usize, max_exp: u32, primary: bool) -> MonomialIdeal {
    let r = ring(d);
    let k = rng.gen_range(1..=5);
    let mut gens: Vec<Exponent> =
        (0..k).map(|_| Exponent((0..d).map(|_| rng.gen_range(0..=max_exp)).collect())).collect();
    if primary {
        for axis in 0..d {
            gens.push(Exponent::unit(d, axis, rng.gen_range(1..=max_exp)));
        }
    }
    MonomialIdeal::minimalize(&r, gens).unwrap()
}

fn brute_contains(i: &MonomialIdeal, a: &[u32]) -> bool {
    i.gens().iter().any(|g| g.0.iter().zip(a).all(|(x, y)| x <= y))
}

fn agree_on_box(got: &MonomialIdeal, side: u32, brute: impl Fn(&[u32]) -> bool) -> Option<Vec<u32>> {
    let mut bad = None;
    for_each_in_box(&vec![side; got.dim()], |a| {
        if bad.is_none() && got.contains_coords(a) != brute(a) {
            bad = Some(a.to_vec());
        }
    });
    bad
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..1000 {
        let d = rng.gen_range(1..=3);
        let primary = rng.gen_bool(0.5);
        let i = random_ideal(&mut rng, d, 8, primary);
        let j = random_ideal(&mut rng, d, 8, false);
        let ctx = || format!("trial {trial}: I = ({i}), J = ({j})");

        let brute_len = if i.is_primary() {
            let mut n = 0u128;
            for_each_in_box(&vec![9; d], |a| n += u128::from(!brute_contains(&i, a)));
            Length::Finite(n)
        } else {
            Length::Infinite
        };
        ensure(colength(&i) == brute_len, || format!("{}: colength", ctx()))?;

        let colon = e(i.colon(&j))?;
        let bad = agree_on_box(&colon, 10, |a| {
            j.gens().iter().all(|g| {
                let s: Vec<u32> = a.iter().zip(&g.0).map(|(x, y)| x + y).collect();
                brute_contains(&i, &s)
            })
        });
        ensure(bad.is_none(), || format!("{}: colon at {bad:?}", ctx()))?;

        // a ∈ I : J^∞ iff a + 8g ∈ I for every generator g of J (exponents are at most 8).
        let sat = e(i.saturate(&j))?;
        let bad = agree_on_box(&sat, 10, |a| {
            j.gens().iter().all(|g| {
                let s: Vec<u32> = a.iter().zip(&g.0).map(|(x, y)| x + 8 * y).collect();
                brute_contains(&i, &s)
            })
        });
        ensure(bad.is_none(), || format!("{}: saturation at {bad:?}", ctx()))?;

        let meet = e(i.intersect(&j))?;
        let bad = agree_on_box(&meet, 10, |a| brute_contains(&i, a) && brute_contains(&j, a));
        ensure(bad.is_none(), || format!("{}: intersection at {bad:?}", ctx()))?;
    }
    Ok("1000 random ideals: colength, colon, saturation, intersection agree with box enumeration".into())
}

fn multiplicity_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let d = rng.gen_range(2..=3);
        let powers: Vec<u32> = (0..d).map(|_| rng.gen_range(1..=9)).collect();
        let i = e(MonomialIdeal::diagonal(&ring(d), &powers))?;
        let exact = e(multiplicity_exact(&i))?;
        let product: u64 = powers.iter().map(|&p| p as u64).product();
        ensure(exact == product.into(), || format!("e({i}) = {exact}, expected {product}"))?;
    }
    let i = ideal(2, "x^3, x*y, y^2");
    let rep = e(multiplicity(&i, 64))?;
    ensure(rep.e_exact == Some(5.into()), || format!("e((x^3, xy, y^2)) = {:?}", rep.e_exact))?;
    let err = rep.relative_error().unwrap();
    ensure(err < 0.05, || format!("HS estimate {} off by {err:.3}", fmt_q(&rep.e_numeric.point_estimate)))?;
    Ok(format!(
        "50 diagonal ideals exact; e((x^3, xy, y^2)) = 5, HS estimate {:.4} (error {err:.2e})",
        to_f64(&rep.e_numeric.point_estimate)
    ))
}

fn volume_equals_multiplicity_check() -> Outcome {
    let mut parts = Vec::new();
    for (name, fam) in [
        ("valuation (2,1) >= 2", valuation_family(&[2, 1], qi(2))),
        ("power (x^3, xy, y^2)", power_family(2, "x^3, x*y, y^2")),
    ] {
        let cmp = e(volume_equals_multiplicity(&fam, 200))?;
        ensure(cmp.agrees_within(0.02), || format!("{name}: gap {:.4}", cmp.relative_gap))?;
        parts.push(format!("{name}: vol {} gap {:.2e}", fmt_q(&cmp.volume_side.point_estimate), cmp.relative_gap));
    }
    Ok(parts.join("; "))
}

fn minkowski_families() -> Outcome {
    let f = power_family(2, "x, y^2");
    let g = power_family(2, "x^2, y");
    let rep = e(minkowski_family_check(&f, &g, 64))?;
    for (label, est, target) in [("F", &rep.first, 1.0), ("G", &rep.second, 1.0), ("FG", &rep.product, 3.0)] {
        let err = rel_err(&est.point_estimate, target);
        ensure(err < 0.02, || format!("{label}: {} vs {target}", fmt_q(&est.point_estimate)))?;
    }
    ensure(rep.comparison.slack >= -1e-9, || format!("slack {}", rep.comparison.slack))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst, mut equalities) = (f64::INFINITY, 0);
    for k in 0..20 {
        let mut draw = || {
            let w = [rng.gen_range(1..=4), rng.gen_range(1..=4)];
            let t = q(rng.gen_range(1..=6), rng.gen_range(1..=2));
            let region = ConvexRegion::new(2, vec![Halfspace::from_ints(&w, t.clone())]).unwrap();
            (valuation_family(&w, t), region)
        };
        let ((a, ra), (b, rb)) = (draw(), draw());
        // The limit regions are known exactly, so the inequality is also checked without estimation error.
        let exact = e(kt_check(&ra, &rb))?;
        ensure(exact.holds(), || format!("pair {k}: exact limit regions {ra} and {rb}"))?;
        equalities += usize::from(exact.is_equality());
        let r = e(minkowski_family_check(&a, &b, 64))?;
        // Estimation noise floor: the widest tail range among the three limits.
        let noise = [&r.first, &r.second, &r.product]
            .iter()
            .map(|x| to_f64(&(&x.tail_max - &x.tail_min)))
            .fold(1e-9, f64::max);
        ensure(r.holds(noise), || format!("pair {k}: {} and {}: slack {}", a.spec(), b.spec(), r.comparison.slack))?;
        worst = worst.min(r.comparison.slack);
    }
    Ok(format!(
        "limits 1, 1, 3; slack {:.4}; 20 valuation pairs hold exactly and within estimation noise \
         (min estimated slack {worst:.2e}, {equalities} exact equalities)",
        rep.comparison.slack
    ))
}

fn teissier_random() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut equalities = 0;
    for k in 0..200 {
        let d = rng.gen_range(2..=3);
        let i = random_ideal(&mut rng, d, 6, true);
        let j = random_ideal(&mut rng, d, 6, true);
        let r = e(teissier_check(&i, &j))?;
        ensure(r.holds(), || format!("pair {k}: ({i}) and ({j}): e = {}, {}, {}", r.first, r.second, r.combined))?;
        equalities += usize::from(r.is_equality());
    }
    Ok(format!("200 random primary pairs hold exactly ({equalities} equalities)"))
}

fn sigma_counterexample() -> Outcome {
    let fam = GradedFamily::new(FamilySpec::MaxPowerSeq { ring: ring(2), sequence: ExponentSequence::Sigma }).unwrap();
    let f = |m: u32| -> Result<Q, String> {
        let a = e(fam.colength_at(m))?.finite().unwrap();
        let b = e(fam.colength_at(m + 1))?.finite().unwrap();
        Ok(Q::new((a as i128 - b as i128).into(), m.into()))
    };
    // Independent oracle: ℓ(R/m^b) = b(b+1)/2 with b_m = ⌈m σ(m)⌉.
    let expected = [(15u32, 23u64, 20u64), (255, 319, 288), (65535, 73727, 69632)];
    let mut values = Vec::new();
    for (m, b0, b1) in expected {
        ensure(fam.max_power_exponent(m) == Ok(Some(b0)), || format!("b_{m}"))?;
        ensure(fam.max_power_exponent(m + 1) == Ok(Some(b1)), || format!("b_{}", m + 1))?;
        let oracle = Q::new(((b0 * (b0 + 1) / 2) as i128 - (b1 * (b1 + 1) / 2) as i128).into(), m.into());
        let got = f(m)?;
        ensure(got == oracle, || format!("F({m}) = {}, oracle {}", fmt_q(&got), fmt_q(&oracle)))?;
        values.push((m, got));
    }
    ensure(values[0].1 == q(22, 5), || "F(15)".into())?;
    ensure(values[1].1 == q(9424, 255), || "F(255)".into())?;
    ensure(values[2].1 == q(19568640, 4369), || "F(65535)".into())?;
    ensure(values.windows(2).all(|w| w[0].1 < w[1].1), || "not increasing".into())?;
    let listing: Vec<String> = values.iter().map(|(m, v)| format!("F({m}) = {}", fmt_q(v))).collect();
    Ok(format!("{} (strictly increasing)", listing.join(", ")))
}

fn log_family() -> Outcome {
    let fam = GradedFamily::new(FamilySpec::MaxPowerSeq { ring: ring(2), sequence: ExponentSequence::Log }).unwrap();
    let seq = e(length_sequence(&fam, 1001))?;
    let head = e(LengthSequence::new(seq.entries()[..1000].to_vec(), 2))?;
    let est = e(estimate_limit(&head))?;
    let err = rel_err(&est.point_estimate, 0.5);
    ensure(err < 0.01, || format!("limit {} ({err:.3})", fmt_q(&est.point_estimate)))?;
    let profile = e(difference_profile(&seq))?;
    let (mut jumps, mut worst_jump, mut worst_flat) = (0, 0.0f64, 0.0f64);
    for (n, v) in profile.forward.iter().filter(|(n, _)| (100..=1000).contains(n)) {
        let jump = (n + 1).is_power_of_two();
        let target = if jump { 2.0 } else { 1.0 };
        let dev = rel_err(v, target);
        ensure(dev < 0.1, || format!("profile at n = {n}: {:.4} vs {target}", to_f64(v)))?;
        if jump {
            jumps += 1;
            worst_jump = worst_jump.max(dev);
        } else {
            worst_flat = worst_flat.max(dev);
        }
    }
    let bound = e(filtration_difference_bound(&fam, 1000))?;
    ensure(bound.holds(), || format!("bound violated at n = {:?}", bound.first_violation()))?;
    Ok(format!(
        "limit {:.5}; profile within {:.3} of 2 at {jumps} jumps and {:.3} of 1 elsewhere; bound holds with c = {}",
        to_f64(&est.point_estimate),
        worst_jump,
        worst_flat,
        bound.c
    ))
}

fn epsilon_multiplicity() -> Outcome {
    let i = ideal(2, "x^2, x*y");
    let rep = e(epsilon_ideal(&i, 400))?;
    // (I^n)^sat / I^n = x^n R / x^n m^n, of length n(n+1)/2.
    for &(n, v) in rep.sequence.entries() {
        let closed = n as u128 * (n as u128 + 1) / 2;
        ensure(v == closed, || format!("n = {n}: {v} vs closed form {closed}"))?;
    }
    let err = rel_err(&rep.epsilon.point_estimate, 1.0);
    ensure(err < 0.02, || format!("epsilon {}", fmt_q(&rep.epsilon.point_estimate)))?;
    let module = e(MonomialModule::new(&ring(2), vec![i.clone(), MonomialIdeal::unit(&ring(2))]))?;
    let m = e(epsilon_module(&module, 60))?;
    let merr = rel_err(&m.epsilon.point_estimate, 1.0);
    ensure(merr < 0.05, || format!("module epsilon {}", fmt_q(&m.epsilon.point_estimate)))?;
    Ok(format!(
        "ideal {:.5} (closed form exact), module {:.5}",
        to_f64(&rep.epsilon.point_estimate),
        to_f64(&m.epsilon.point_estimate)
    ))
}

fn symbolic() -> Outcome {
    let rep = e(symbolic_multiplicity(&ideal(2, "x^2, x*y"), &ideal(2, "x"), 50))?;
    ensure(rep.s == Some(1), || format!("s = {:?}", rep.s))?;
    let err = rel_err(&rep.limit.point_estimate, 1.0);
    ensure(err < 0.05, || format!("limit {}", fmt_q(&rep.limit.point_estimate)))?;
    Ok(format!("s = 1, limit {:.5}", to_f64(&rep.limit.point_estimate)))
}

fn okounkov_counting() -> Outcome {
    let interval = SemigroupPredicate::new(1, 2, "a <= 2k", |a, k| a[0] <= 2 * k);
    let r = e(e(enumerate_levels(&interval, 60))?.limit_check())?;
    ensure(r.expected == Some(qi(2)) && r.estimate.point_estimate == qi(2), || {
        format!("interval: expected {:?}, estimate {}", r.expected, fmt_q(&r.estimate.point_estimate))
    })?;

    let even = SemigroupPredicate::new(1, 2, "a <= 2k, a even", |a, k| a[0] <= 2 * k && a[0] % 2 == 0);
    let levels = e(enumerate_levels(&even, 60))?;
    let inv = e(levels.lattice_invariants())?;
    ensure(inv.ind == 2, || format!("ind = {}", inv.ind))?;
    let r2 = e(levels.limit_check())?;
    ensure(r2.expected == Some(qi(1)) && r2.estimate.point_estimate == qi(1), || {
        format!("sublattice: expected {:?}, estimate {}", r2.expected, fmt_q(&r2.estimate.point_estimate))
    })?;

    let fam = Arc::new(power_family(2, "x, y"));
    let pred = e(SemigroupPredicate::from_family(fam, 2))?;
    let r3 = e(e(enumerate_levels(&pred, 200))?.limit_check())?;
    let gap = r3.relative_gap.ok_or("no expected value for the family semigroup")?;
    ensure(gap < 0.03, || format!("family: estimate {} vs vol {}", fmt_q(&r3.estimate.point_estimate), fmt_q(&r3.body_volume)))?;
    Ok(format!(
        "interval limit 2 = 2/1; sublattice 1 = 2/2 (ind 2); family vol {} gap {gap:.2e}",
        fmt_q(&r3.body_volume)
    ))
}

fn random_region(rng: &mut ChaCha8Rng) -> ConvexRegion {
    loop {
        let k = rng.gen_range(1..=3);
        let hs: Vec<Halfspace> = (0..k)
            .map(|_| Halfspace::from_ints(&[rng.gen_range(0..=5), rng.gen_range(0..=5)], qi(rng.gen_range(1..=6))))
            .filter(|h| h.normal.iter().any(|c| *c != qi(0)))
            .collect();
        if let Ok(r) = ConvexRegion::new(2, hs) {
            if r.is_cobounded() {
                return r;
            }
        }
    }
}

fn khovanskii_timorin() -> Outcome {
    let a = e(hull_region(&ideal(2, "x, y^2")))?;
    let b = e(hull_region(&ideal(2, "x^2, y")))?;
    let r = e(kt_check(&a, &b))?;
    ensure((r.first.clone(), r.second.clone(), r.combined.clone()) == (qi(1), qi(1), qi(3)), || {
        format!("covolumes {}, {}, {}", r.first, r.second, r.combined)
    })?;
    ensure(r.holds() && !r.is_equality(), || "worked pair".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..200 {
        let (a, b) = (random_region(&mut rng), random_region(&mut rng));
        let r = e(kt_check(&a, &b))?;
        ensure(r.holds(), || format!("pair {k}: {a} and {b}"))?;
    }
    let mut homothety = 0;
    for _ in 0..50 {
        let a = random_region(&mut rng);
        let t = q(rng.gen_range(1..=7), rng.gen_range(1..=3));
        let r = e(kt_check(&a, &a.scale(&t)))?;
        ensure(r.ordering == Ordering::Equal, || format!("{a} scaled by {t}: {:?}", r.ordering))?;
        homothety += 1;
    }
    Ok(format!("worked pair 1, 1, 3; 200 random pairs hold; equality on {homothety} homothety pairs"))
}

fn quotient_length_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut tight = 0;
    for k in 0..100 {
        let d = rng.gen_range(1..=3);
        let i = random_ideal(&mut rng, d, 6, true);
        let s = maximal_power_index(&i).unwrap() + rng.gen_range(0..=2);
        let r = rng.gen_range(1..=4);
        let rep = e(quotient_length_bound_check(&i, r, s))?;
        ensure(rep.holds(), || format!("instance {k}: ({i}), r = {r}, s = {s}: {} > {}", rep.value, rep.bound))?;
        tight += usize::from(rep.value == rep.bound);
    }
    Ok(format!("100 random instances hold exactly ({tight} tight)"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("oracle equivalence", Duration::from_secs(30), oracle_equivalence),
        ("multiplicity identity", Duration::from_secs(20), multiplicity_identity),
        ("volume equals multiplicity", Duration::from_secs(60), volume_equals_multiplicity_check),
        ("minkowski for families", Duration::from_secs(60), minkowski_families),
        ("root-sum inequality for ideals", Duration::from_secs(30), teissier_random),
        ("maximal-power counterexample", Duration::from_secs(5), sigma_counterexample),
        ("logarithmic filtration", Duration::from_secs(30), log_family),
        ("epsilon multiplicity", Duration::from_secs(120), epsilon_multiplicity),
        ("symbolic multiplicity", Duration::from_secs(60), symbolic),
        ("okounkov counting", Duration::from_secs(60), okounkov_counting),
        ("covolume root-sum inequality", Duration::from_secs(30), khovanskii_timorin),
        ("length bound", Duration::from_secs(30), quotient_length_bound),
    ];
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > *budget => Err(format!("{msg}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name} [{elapsed:.2?}]: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{elapsed:.2?}]: {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
