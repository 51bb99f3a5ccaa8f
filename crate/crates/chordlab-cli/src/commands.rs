use std::collections::HashSet;
use std::path::Path;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chordlab::asymptotics::{self as asy, AsymptoticModel};
use chordlab::bell;
use chordlab::bijections::{self as bij, RootShareTriple, Seed, ZTree};
use chordlab::chord::{count_classes, enumerate_diagrams, ChordDiagram, MAX_ENUM_N};
use chordlab::diffeo::{self as dif, Diffeomorphism, KinematicSample};
use chordlab::fps::{FormalPowerSeries as Fps, Q};
use chordlab::gfseries::{self as gf, SeriesName, MAX_VERIFY_ORDER};
use chordlab::yukawa::{self as yuk, PsiImage, TadpoleGraph};

use crate::oeis;
use crate::output::{Check, Format, OutputRecord, Payload};
use crate::{BijKind, EnumKind, Suite};

pub type CmdResult = Result<OutputRecord, String>;

/// Default enumeration guard when `CHORDLAB_MAX_N` is unset.
pub const DEFAULT_MAX_N: usize = 8;
/// Largest series index used by `oeis-compare`.
pub const MAX_COMPARE_INDEX: usize = 150;

pub struct Ctx {
    pub format: Format,
    pub seed: u64,
    pub max_n: usize,
}

pub fn max_n_from_env() -> usize {
    std::env::var("CHORDLAB_MAX_N")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn s<E: ToString>(e: E) -> String {
    e.to_string()
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

fn parse_rationals(list: &str) -> Result<Vec<Q>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Q::from_str(t).map_err(|_| format!("bad rational {t:?}")))
        .collect()
}

fn coeff_strings(f: &Fps) -> Vec<String> {
    f.coeffs().iter().map(ToString::to_string).collect()
}

pub fn series(ctx: &Ctx, name: &str, order: usize) -> CmdResult {
    let sn: SeriesName = name.parse().map_err(s)?;
    if order > MAX_VERIFY_ORDER {
        return Err(format!("order {order} exceeds {MAX_VERIFY_ORDER}"));
    }
    let f = gf::series(sn, order);
    Ok(OutputRecord::new(
        "series",
        &[("name", sn.to_string()), ("order", order.to_string())],
        Payload::Series { name: sn.to_string(), coeffs: coeff_strings(&f) },
        ctx.format,
    ))
}

fn guard(n: usize, limit: usize, what: &str) -> Result<(), String> {
    if n > limit {
        Err(format!("{what} {n} exceeds the limit {limit} (raise CHORDLAB_MAX_N)"))
    } else {
        Ok(())
    }
}

pub fn enumerate(ctx: &Ctx, kind: EnumKind, n: usize, list: bool, class: Option<&str>, extended: bool) -> CmdResult {
    let params = vec![
        ("kind", format!("{kind:?}").to_lowercase()),
        ("n", n.to_string()),
        ("class", class.unwrap_or("all").to_string()),
    ];
    let table = |columns: &[&str], rows: Vec<Vec<String>>| Payload::Table {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    };
    let payload = match kind {
        EnumKind::Chords => {
            guard(n, ctx.max_n.min(MAX_ENUM_N), "chord count")?;
            if list {
                let keep: Box<dyn Fn(&ChordDiagram) -> bool> = match class.unwrap_or("all") {
                    "all" => Box::new(|_| true),
                    "connected" => Box::new(ChordDiagram::is_connected),
                    "2-connected" => Box::new(|d| d.is_k_connected(2)),
                    "connectivity-1" => Box::new(|d| d.connectivity() == 1),
                    "indecomposable" => Box::new(ChordDiagram::is_indecomposable),
                    other => return Err(format!("unknown class {other:?}")),
                };
                let rows = enumerate_diagrams(n)
                    .map_err(s)?
                    .filter(|d| keep(d))
                    .map(|d| vec![d.to_string()])
                    .collect();
                table(&["diagram"], rows)
            } else {
                let c = count_classes(n).map_err(s)?;
                let rows = [
                    ("total", c.total),
                    ("connected", c.connected),
                    ("2-connected", c.two_connected),
                    ("connectivity-1", c.connectivity_one),
                    ("indecomposable", c.indecomposable),
                ]
                .iter()
                .map(|(k, v)| vec![k.to_string(), v.to_string()])
                .collect();
                table(&["class", "count"], rows)
            }
        }
        EnumKind::Tadpoles => {
            let t = yuk::enumerate_tadpoles(n, extended).map_err(s)?;
            if list {
                table(&["tadpole"], t.iter().map(|g| vec![g.to_string()]).collect())
            } else {
                table(&["loops", "tadpoles"], vec![vec![n.to_string(), t.len().to_string()]])
            }
        }
        EnumKind::Qqed => {
            let g = yuk::enumerate_qqed(n).map_err(s)?;
            let primitive_only = class == Some("primitive");
            if list {
                let rows = g
                    .iter()
                    .filter(|x| !primitive_only || yuk::qqed_primitive(x))
                    .map(|x| {
                        let c = yuk::qqed_chord(x);
                        vec![c.to_string(), yuk::qqed_primitive(x).to_string()]
                    })
                    .collect();
                table(&["chord", "primitive"], rows)
            } else {
                let prim = g.iter().filter(|x| yuk::qqed_primitive(x)).count();
                table(
                    &["loops", "graphs", "primitive"],
                    vec![vec![n.to_string(), g.len().to_string(), prim.to_string()]],
                )
            }
        }
    };
    Ok(OutputRecord::new("enumerate", &params, payload, ctx.format))
}

fn parse_triple(t: &str) -> Result<RootShareTriple, String> {
    let parts: Vec<&str> = t.split(';').collect();
    let [c1, c2, k] = parts[..] else {
        return Err("expected '<C1> ; <C2> ; k'".into());
    };
    Ok(RootShareTriple {
        c1: c1.trim().parse().map_err(s)?,
        c2: c2.trim().parse().map_err(s)?,
        k: k.trim().parse().map_err(|_| format!("bad k {k:?}"))?,
    })
}

fn fmt_triple(t: &RootShareTriple) -> String {
    format!("{} ; {} ; {}", t.c1, t.c2, t.k)
}

fn fmt_mark(d: Option<usize>) -> String {
    d.map_or_else(|| "u2".to_string(), |v| v.to_string())
}

pub fn bijection(ctx: &Ctx, map: BijKind, input: &str, inverse: bool) -> CmdResult {
    let chord = |t: &str| t.trim().parse::<ChordDiagram>().map_err(s);
    let out: Vec<String> = match (map, inverse) {
        (BijKind::Phi, false) => vec![bij::phi(&chord(input)?).map_err(s)?.to_string()],
        (BijKind::Phi, true) => vec![bij::phi_inv(&chord(input)?).map_err(s)?.to_string()],
        (BijKind::Nabla, false) => vec![fmt_triple(&bij::nabla(&chord(input)?).map_err(s)?)],
        (BijKind::Nabla, true) => vec![bij::nabla_inv(&parse_triple(input)?).map_err(s)?.to_string()],
        (BijKind::Theta, false) => vec![bij::theta(&input.parse::<Seed>().map_err(s)?).to_string()],
        (BijKind::Theta, true) => vec![bij::theta_inv(&input.parse::<ZTree>().map_err(s)?).map_err(s)?.to_string()],
        (BijKind::Lambda, false) => {
            let t: TadpoleGraph = input.parse().map_err(s)?;
            vec![yuk::lambda_bij(&t).map_err(s)?.to_string()]
        }
        (BijKind::Lambda, true) => vec![yuk::lambda_inv(&chord(input)?).map_err(s)?.to_string()],
        (BijKind::Psi, false) => {
            let parts: Vec<&str> = input.split('|').collect();
            let [t1, t2, d] = parts[..] else {
                return Err("expected '<T1> | <T2> | d' with d a vertex of T2 or u2".into());
            };
            let t1: TadpoleGraph = t1.parse().map_err(s)?;
            let t2: TadpoleGraph = t2.parse().map_err(s)?;
            let d = match d.trim() {
                "u2" => None,
                v => Some(v.parse().map_err(|_| format!("bad vertex {v:?}"))?),
            };
            match yuk::psi(&t1.canonical(), &t2.canonical(), d).map_err(s)? {
                PsiImage::Pair(a, b) => vec![a.to_string(), b.to_string()],
                PsiImage::Tadpole(t) => vec![t.to_string()],
            }
        }
        (BijKind::Psi, true) => {
            let t: TadpoleGraph = input.parse().map_err(s)?;
            let (a, b, d) = yuk::psi_inv(&PsiImage::Tadpole(t)).map_err(s)?;
            vec![format!("{a} | {b} | {}", fmt_mark(d))]
        }
    };
    Ok(OutputRecord::new(
        "bijection",
        &[
            ("map", format!("{map:?}").to_lowercase()),
            ("inverse", inverse.to_string()),
            ("input", input.to_string()),
        ],
        Payload::Text { lines: out },
        ctx.format,
    ))
}

pub fn bell(ctx: &Ctx, n: usize, k: usize, xs: &str, identity: Option<&str>) -> CmdResult {
    let xs = parse_rationals(xs)?;
    let v = bell::bell_partial(n, k, &xs).map_err(s)?;
    let params = [("n", n.to_string()), ("k", k.to_string())];
    let payload = match identity {
        None => Payload::Table {
            columns: vec!["quantity".into(), "value".into()],
            rows: vec![vec![format!("B_{{{n},{k}}}"), v.to_string()]],
        },
        Some(id) => {
            let oracle = bell::bell_partial_by_partitions(n, k, &xs);
            let holds = bell::verify_bell_identity(id, n, k, &xs).map_err(s)?;
            Payload::Checks {
                checks: vec![
                    check("recurrence = partition sum", oracle == v, format!("B_{{{n},{k}}} = {v}")),
                    check(id, holds, ""),
                ],
            }
        }
    };
    Ok(OutputRecord::new("bell", &params, payload, ctx.format))
}

fn sci(q: &Q) -> String {
    format!("{:.6e}", q.to_f64().unwrap_or(f64::NAN))
}

pub fn asym(ctx: &Ctx, model: &str, n: usize, terms: usize, image: bool) -> CmdResult {
    let params = [("model", model.to_string()), ("n", n.to_string()), ("terms", terms.to_string())];
    if image {
        let img = match model {
            "C" => asy::alien_c(terms),
            "C2" | "C>=2" => asy::alien_c2(terms),
            other => return Err(format!("unknown model {other:?}")),
        }
        .map_err(s)?;
        let mut rec = OutputRecord::new(
            "asym",
            &params,
            Payload::Series { name: format!("alien_{model}"), coeffs: coeff_strings(&img.body) },
            ctx.format,
        );
        rec.parameters.insert("offset".into(), format!("e^({})", img.exp_offset));
        rec.parameters.insert("sqrt2pi_inverse".into(), img.sqrt2pi_inverse.to_string());
        return Ok(rec);
    }
    AsymptoticModel::for_series(model, terms).map_err(s)?;
    let mut rows = Vec::new();
    for r in 1..=terms {
        let f = asy::asymptotic_fit(model, n, r).map_err(s)?;
        rows.push(vec![
            r.to_string(),
            sci(&f.scaled_remainder),
            sci(&f.predicted),
            format!("{:.6}", f.ratio()),
        ]);
    }
    Ok(OutputRecord::new(
        "asym",
        &params,
        Payload::Table {
            columns: vec!["R".into(), "scaled_remainder".into(), "e^q*c_R".into(), "ratio".into()],
            rows,
        },
        ctx.format,
    ))
}

fn kinematics(d: &Diffeomorphism, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Q>, String> {
    for _ in 0..32 {
        let kin = KinematicSample::random(n, rng);
        match (1..=n).map(|m| dif::amplitude_recursion(d, m, &kin)).collect::<Result<Vec<_>, _>>() {
            Ok(v) => return Ok(v),
            Err(dif::DiffeoError::VanishingDenominator) => continue,
            Err(e) => return Err(e.to_string()),
        }
    }
    Err("kinematics kept hitting vanishing denominators".into())
}

pub fn diffeo(ctx: &Ctx, a: &str, n: usize, kin: Option<&str>) -> CmdResult {
    let d = Diffeomorphism::new(parse_rationals(a)?).map_err(s)?;
    let b = dif::b_inverse_all(&d, n).map_err(s)?;
    let amps = match kin {
        None => None,
        Some(spec) => {
            let seed = match spec {
                "random" => ctx.seed,
                other => other
                    .strip_prefix("seed=")
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| format!("bad kinematics {other:?}; use random or seed=K"))?,
            };
            guard(n, dif::MAX_AMPLITUDE_N, "amplitude n")?;
            Some(kinematics(&d, n, &mut ChaCha8Rng::seed_from_u64(seed))?)
        }
    };
    let rows = (1..=n)
        .map(|m| {
            vec![
                m.to_string(),
                b[m].to_string(),
                dif::b_closed_form(&d, m).to_string(),
                amps.as_ref().map_or("-".into(), |v| v[m - 1].to_string()),
            ]
        })
        .collect();
    Ok(OutputRecord::new(
        "diffeo",
        &[("a", a.to_string()), ("n", n.to_string()), ("kinematics", kin.unwrap_or("none").to_string())],
        Payload::Table {
            columns: vec!["n".into(), "b_n".into(), "closed_form".into(), "recursion".into()],
            rows,
        },
        ctx.format,
    ))
}

fn nonzero(rng: &mut ChaCha8Rng) -> Q {
    loop {
        let v = dif::random_rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

fn suite_chord(order: usize, max_n: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let nmax = order.min(max_n).min(MAX_ENUM_N);
    let (c, c1, c2, i0) = (gf::series_c(nmax), gf::series_c1(nmax), gf::series_c2(nmax), gf::series_i0(nmax));
    let df = gf::double_factorials(nmax);
    let int = |f: &Fps, n: usize| f.coeff(n).to_integer().to_u64().unwrap_or(u64::MAX);
    for n in 1..=nmax {
        match count_classes(n) {
            Ok(k) => {
                let want = (df[n].to_u64().unwrap_or(0), int(&c, n), int(&c2, n), int(&c1, n), int(&i0, n));
                let got = (k.total, k.connected, k.two_connected, k.connectivity_one, k.indecomposable);
                out.push(check(format!("brute force n={n}"), got == want, format!("{got:?}")));
            }
            Err(e) => out.push(check(format!("brute force n={n}"), false, e.to_string())),
        }
    }
    for name in gf::IDENTITIES {
        let r = gf::verify_identity(name, order.min(MAX_VERIFY_ORDER));
        let (pass, detail) = match r {
            Ok(r) => (r.holds, r.first_failure.map_or(String::new(), |i| format!("fails at x^{i}"))),
            Err(e) => (false, e.to_string()),
        };
        out.push(check(format!("identity {name}"), pass, detail));
    }
    let mut ok = true;
    for n in 2..=nmax.min(6) {
        for d in enumerate_diagrams(n).expect("guarded").filter(ChordDiagram::is_connected) {
            ok &= bij::phi(&d).and_then(|p| bij::phi_inv(&p)).as_ref() == Ok(&d);
            ok &= bij::nabla(&d).and_then(|t| bij::nabla_inv(&t)).as_ref() == Ok(&d);
        }
    }
    out.push(check("phi and nabla roundtrips", ok, format!("n <= {}", nmax.min(6))));
    out
}

fn suite_bell(order: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let nmax = order.min(8);
    let mut out = Vec::new();
    let mut oracle_ok = true;
    let mut failures: Vec<String> = Vec::new();
    let mut count = 0;
    for _ in 0..5 {
        let xs: Vec<Q> = (0..nmax.max(1)).map(|_| nonzero(rng)).collect();
        for n in 0..=nmax {
            for k in 0..=n {
                oracle_ok &= bell::bell_partial(n, k, &xs).ok() == Some(bell::bell_partial_by_partitions(n, k, &xs));
                for id in bell::BELL_IDENTITIES {
                    let valid = match id {
                        "lemma1a" | "lemma1b" | "id3" => k >= 1,
                        "id1" => k >= 1 && k < n,
                        _ => true,
                    };
                    if valid {
                        count += 1;
                        if bell::verify_bell_identity(id, n, k, &xs) != Ok(true) {
                            failures.push(format!("{id}({n},{k})"));
                        }
                    }
                }
            }
        }
    }
    out.push(check("recurrence = partition sum", oracle_ok, format!("n <= {nmax}")));
    out.push(check("Bell identities", failures.is_empty(), format!("{count} instances {}", failures.join(" "))));
    let coro = bell::coro_pipeline(order.min(16));
    out.push(check("coro pipeline = I0", coro.as_ref().ok() == Some(&gf::series_i0(order.min(16))), ""));
    out
}

fn suite_diffeo(order: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();
    for i in 0..5 {
        let d = Diffeomorphism::random(1 + i, rng);
        let tag = format!("diffeo #{} (m={})", i + 1, 1 + i);
        let b = match dif::b_inverse_all(&d, order) {
            Ok(b) => b,
            Err(e) => {
                out.push(check(tag, false, e.to_string()));
                continue;
            }
        };
        let closed = (1..=order).all(|n| dif::b_closed_form(&d, n) == b[n]);
        out.push(check(format!("{tag} closed form"), closed, format!("n <= {order}")));
        out.push(check(format!("{tag} recurrences"), dif::verify_recurrences(&d, order) == Ok(true), ""));
        out.push(check(format!("{tag} differential equations"), dif::verify_ode(&d, order) == Ok(true), ""));
        let nk = order.min(5);
        let mut kin_ok = true;
        for _ in 0..3 {
            kin_ok &= kinematics(&d, nk, rng).map(|v| v[..] == b[1..=nk]).unwrap_or(false);
        }
        out.push(check(format!("{tag} momentum recursion"), kin_ok, format!("n <= {nk}, 3 samples")));
        let mut bad = b.clone();
        if bad.len() > 3 {
            bad[3] += Q::from_integer(1.into());
            let res = dif::recurrence_residuals(&d, &bad, order.min(5));
            let caught = res.iter().any(|(x, y)| !x.is_zero() || !y.is_zero());
            out.push(check(format!("{tag} perturbed b rejected"), caught, ""));
        }
        if d.coeffs()[1..].iter().any(|a| !a.is_zero()) {
            let caught = dif::ode_residuals(&d, &d.series(order + 2), order)
                .map(|(r1, r2)| !r1.is_zero() || !r2.is_zero())
                .unwrap_or(false);
            out.push(check(format!("{tag} G = F rejected"), caught, ""));
        }
    }
    out
}

fn suite_yukawa(order: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let c = gf::series_c(4);
    let tad: Vec<Vec<TadpoleGraph>> = (1..=4).map(|l| yuk::enumerate_tadpoles(l, false).unwrap_or_default()).collect();
    let counts: Vec<usize> = tad.iter().map(Vec::len).collect();
    let want: Vec<usize> = (1..=4).map(|n| c.coeff(n).to_integer().to_usize().unwrap_or(0)).collect();
    out.push(check("tadpole counts = C_n", counts == want, format!("{counts:?}")));
    let mut lam = true;
    for (i, ts) in tad.iter().enumerate() {
        let img: HashSet<ChordDiagram> = ts.iter().filter_map(|g| yuk::lambda_bij(g).ok()).collect();
        let conn: HashSet<ChordDiagram> = enumerate_diagrams(i + 1)
            .expect("small")
            .filter(ChordDiagram::is_connected)
            .collect();
        lam &= img.len() == ts.len() && img == conn;
        lam &= ts.iter().all(|g| yuk::lambda_bij(g).and_then(|x| yuk::lambda_inv(&x)).as_ref() == Ok(g));
    }
    out.push(check("lambda onto connected diagrams", lam, "loops <= 4"));
    let mut psi_ok = true;
    for g in tad.iter().flatten().filter(|g| !g.is_single()) {
        psi_ok &= yuk::psi_inv(&PsiImage::Tadpole(g.clone()))
            .and_then(|(a, b, d)| yuk::psi(&a, &b, d))
            .map(|img| img == PsiImage::Tadpole(g.clone()) || matches!(&img, PsiImage::Tadpole(t) if t.canonical() == *g))
            .unwrap_or(false);
    }
    out.push(check("psi after psi_inv", psi_ok, "loops <= 4"));
    let qmax = order.saturating_sub(1).clamp(1, 5);
    let mut qq = Vec::new();
    let mut agree = true;
    for l in 1..=qmax {
        let gs = yuk::enumerate_qqed(l).unwrap_or_default();
        let mut p = 0;
        for g in &gs {
            let two = yuk::qqed_chord(g).is_k_connected(2);
            agree &= two == yuk::qqed_primitive(g);
            p += two as usize;
        }
        qq.push(p);
    }
    out.push(check("quenched QED primitive = 2-connected", agree, format!("{qq:?}")));
    for r in yuk::green_identities(order.min(MAX_VERIFY_ORDER)) {
        out.push(check(r.name.clone(), r.holds, r.first_failure.map_or(String::new(), |i| format!("fails at {i}"))));
    }
    out
}

fn suite_asym(order: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let o = order.min(32);
    let same = match (asy::alien_c(o), asy::alien_c_alternative(o)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    out.push(check("alien_C forms agree", same, format!("order {o}")));
    out.push(check("chain rule", asy::chain_rule_verify(o) == Ok(true), format!("order {o}")));
    for name in ["C", "C2"] {
        for r in 1..=3 {
            let devs: Vec<f64> = [20, 30, 40]
                .iter()
                .filter_map(|&n| asy::asymptotic_fit(name, n, r).ok().map(|f| f.relative_deviation()))
                .collect();
            let dec = devs.len() == 3 && devs[0] > devs[1] && devs[1] > devs[2];
            out.push(check(format!("{name} R={r} remainder converging"), dec, format!("{devs:.3?}")));
        }
    }
    out
}

pub fn verify(ctx: &Ctx, suite: Suite, order: usize) -> CmdResult {
    if order > MAX_VERIFY_ORDER {
        return Err(format!("order {order} exceeds {MAX_VERIFY_ORDER}"));
    }
    let selected: Vec<Suite> = match suite {
        Suite::All => vec![Suite::Chord, Suite::Bell, Suite::Diffeo, Suite::Yukawa, Suite::Asym],
        one => vec![one],
    };
    // one generator hands each suite its seed, in declaration order
    let mut master = ChaCha8Rng::seed_from_u64(ctx.seed);
    let seeds: Vec<u64> = selected.iter().map(|_| master.next_u64()).collect();
    let max_n = ctx.max_n;
    let results: Vec<Vec<Check>> = std::thread::scope(|sc| {
        let handles: Vec<_> = selected
            .iter()
            .zip(&seeds)
            .map(|(&su, &sd)| {
                sc.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(sd);
                    let prefix = format!("{su:?}").to_lowercase();
                    let checks = match su {
                        Suite::Chord => suite_chord(order, max_n),
                        Suite::Bell => suite_bell(order, &mut rng),
                        Suite::Diffeo => suite_diffeo(order, &mut rng),
                        Suite::Yukawa => suite_yukawa(order),
                        Suite::Asym => suite_asym(order),
                        Suite::All => unreachable!(),
                    };
                    checks
                        .into_iter()
                        .map(|c| Check { name: format!("{prefix}: {}", c.name), ..c })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite panicked")).collect()
    });
    Ok(OutputRecord::new(
        "verify",
        &[
            ("suite", format!("{suite:?}").to_lowercase()),
            ("order", order.to_string()),
            ("seed", ctx.seed.to_string()),
        ],
        Payload::Checks { checks: results.into_iter().flatten().collect() },
        ctx.format,
    ))
}

pub fn oeis_compare(ctx: &Ctx, name: &str, path: &Path, sequence: Option<&str>) -> CmdResult {
    let sn: SeriesName = name.parse().map_err(s)?;
    let entry = match sequence {
        Some(id) => oeis::lookup(id).ok_or_else(|| format!("no offset declared for {id}"))?,
        None => oeis::default_for(sn).ok_or_else(|| format!("no OEIS entry declared for {sn}"))?,
    };
    if entry.series != sn {
        return Err(format!("{} is declared for {}, not {sn}", entry.id, entry.series));
    }
    let data = oeis::read_bfile(path)?;
    let usable: Vec<(i64, usize, &num_bigint::BigInt)> = data
        .iter()
        .filter(|(i, _)| *i >= entry.first_index)
        .filter_map(|(i, a)| {
            let n = i + entry.shift;
            (n >= 0 && (n as usize) <= MAX_COMPARE_INDEX).then_some((*i, n as usize, a))
        })
        .collect();
    let top = usable.iter().map(|u| u.1).max().unwrap_or(0);
    let f = gf::series(sn, top);
    let checks = usable
        .iter()
        .map(|(i, n, a)| {
            let ours = f.coeff(*n);
            let pass = ours.is_integer() && ours.to_integer() == **a;
            check(format!("{}({i}) = [x^{n}] {sn}", entry.id), pass, format!("b-file {a}, series {ours}"))
        })
        .collect();
    Ok(OutputRecord::new(
        "oeis-compare",
        &[
            ("name", sn.to_string()),
            ("sequence", entry.id.to_string()),
            ("shift", entry.shift.to_string()),
            ("note", entry.note.to_string()),
        ],
        Payload::Checks { checks },
        ctx.format,
    ))
}
