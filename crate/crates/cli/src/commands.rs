//! Subcommand bodies. Each returns a [`Report`] holding both renderings.

use crate::input::{graph_hash, parse_element, rat};
use num_rational::Rational64;
use num_traits::{One, Signed};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;
use zhat::flatconn::{component_census, hamm_charpoly};
use zhat::plumbing::{matrix_of, neumann_move, NeumannMove, PlumbingGraph};
use zhat::seifert::{Reduction, SeifertData};
use zhat::splice::{casson_walker, maximal_splice, normalized_z0_with, splice_of, tree_determinant, verify_adjugate};
use zhat::voa::{identify_singlet, SingletMatch};
use zhat::zhat::{Progress, Zhat};
use zhat::{corpus, Error, QSeries, Result};

pub struct Report {
    pub json: Value,
    pub pretty: String,
    pub exit: i32,
}

impl Report {
    fn ok(json: Value, pretty: String) -> Self {
        Report { json, pretty, exit: 0 }
    }
}

fn provenance(command: &str, g: &PlumbingGraph, order: Option<Rational64>) -> Value {
    let m = matrix_of(g);
    json!({
        "command": command,
        "graph_hash": graph_hash(g),
        "vertices": g.s(),
        "h_order": m.order().to_string(),
        "order_requested": order.map(rat),
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn series_json(s: &QSeries) -> Value {
    json!({ "series": s.to_json(), "certified_order": rat(s.order()) })
}

fn progress_printer(p: Progress) {
    eprintln!(
        "branches {}/{}, vectors {}",
        p.branches_done, p.branches_total, p.vectors
    );
}

pub fn zhat(g: &PlumbingGraph, order: Rational64, spinc: Option<usize>, progress: bool) -> Result<Report> {
    let z = Zhat::new(g)?;
    let cb: &(dyn Fn(Progress) + Sync) = &progress_printer;
    let all = z.zhat_all(order, progress.then_some(cb))?;
    let h = z.homology();
    let picked: Vec<usize> = match spinc {
        Some(i) if i < all.len() => vec![i],
        Some(i) => {
            return Err(Error::UnknownSpinc(format!(
                "index {i}, there are {} classes",
                all.len()
            )))
        }
        None => (0..all.len()).collect(),
    };
    let mut pretty = format!("|H| = {}, Δ₀ = {}\n", z.order_h(), rat(z.delta0()));
    let mut rows = Vec::new();
    for i in picked {
        let rep = &h.spinc.reps[i];
        let _ = writeln!(pretty, "[{i}] b = {rep:?}: {}", all[i]);
        rows.push(json!({
            "index": i,
            "rep": rep,
            "c1": h.spinc.c1[i].0,
            "conjugate": h.spinc.conjugate[i],
            "value": series_json(&all[i]),
        }));
    }
    Ok(Report::ok(
        json!({ "meta": provenance("zhat", g, Some(order)), "delta0": rat(z.delta0()), "spinc": rows }),
        pretty,
    ))
}

pub fn zhat_prime(g: &PlumbingGraph, order: Rational64, element: Option<&str>) -> Result<Report> {
    let z = Zhat::new(g)?;
    let grp = &z.homology().group;
    let all = z.zhat_prime_all(order)?;
    let elems = grp.elements();
    let picked: Vec<usize> = match element {
        Some(s) => vec![grp.index_of(&parse_element(s, grp.divisors().len())?)],
        None => (0..elems.len()).collect(),
    };
    let mut pretty = format!("H = ℤ/{:?}\n", grp.divisors());
    let mut rows = Vec::new();
    for i in picked {
        let _ = writeln!(pretty, "[{i}] h = {:?}: {}", elems[i].0, all[i]);
        rows.push(json!({ "index": i, "element": elems[i].0, "value": series_json(&all[i]) }));
    }
    Ok(Report::ok(
        json!({ "meta": provenance("zhat-prime", g, Some(order)), "divisors": grp.divisors(), "classes": rows }),
        pretty,
    ))
}

/// `scaled` reports `Z₀(q^{|H|})`, with `order` in the scaled units.
pub fn z0(g: &PlumbingGraph, order: Rational64, scaled: bool) -> Result<Report> {
    let z = Zhat::new(g)?;
    let h = Rational64::from_integer(z.order_h());
    let s = if scaled {
        z.z0(order / h)?.scale_exponents(h)
    } else {
        z.z0(order)?
    };
    let label = if scaled { "Z₀(q^|H|)" } else { "Z₀" };
    Ok(Report::ok(
        json!({ "meta": provenance("z0", g, Some(order)), "scaled": scaled, "value": series_json(&s) }),
        format!("{label} = {s}\n"),
    ))
}

pub fn z0_normalized(g: &PlumbingGraph, order: Rational64) -> Result<Report> {
    let z = Zhat::new(g)?;
    let lambda = casson_walker(g)?;
    let s = normalized_z0_with(&z, order)?;
    Ok(Report::ok(
        json!({
            "meta": provenance("z0-normalized", g, Some(order)),
            "casson_walker": lambda.to_string(),
            "value": series_json(&s),
        }),
        format!("λ = {lambda}\nq^(−6λ)·Z₀(q^|H|) = {s}\n"),
    ))
}

pub fn splice(g: &PlumbingGraph) -> Result<Report> {
    let diagram = splice_of(g);
    let check = verify_adjugate(g);
    let max = maximal_splice(g);
    let weights: Vec<Value> = max
        .weights
        .iter()
        .map(|((v, w), x)| json!({ "at": v, "toward": w, "weight": x.to_string() }))
        .collect();
    let mut pretty = diagram.render();
    let _ = writeln!(pretty, "det(−M) = {}", tree_determinant(g));
    match &check.witness {
        None => pretty.push_str("adjugate identity: PASS\n"),
        Some((a, b, want, got)) => {
            let _ = writeln!(
                pretty,
                "adjugate identity: FAIL at ({a},{b}): adj(−M) = {want}, N = {got}"
            );
        }
    }
    let witness = check
        .witness
        .as_ref()
        .map(|(a, b, w, n)| json!([a, b, w.to_string(), n.to_string()]));
    Ok(Report {
        json: json!({
            "meta": provenance("splice", g, None),
            "diagram": diagram,
            "maximal_weights": weights,
            "adjugate": { "holds": check.holds, "witness": witness },
        }),
        pretty,
        exit: if check.holds { 0 } else { 4 },
    })
}

pub fn casson_walker_cmd(g: &PlumbingGraph) -> Result<Report> {
    let lambda = casson_walker(g)?;
    Ok(Report::ok(
        json!({ "meta": provenance("casson-walker", g, None), "casson_walker": lambda.to_string() }),
        format!("λ = {lambda}\n"),
    ))
}

/// `order` is in the units of `Z₀(q^{|H|})`.
pub fn seifert_reduce(sd: &SeifertData, order: Rational64, compare: bool) -> Result<Report> {
    let red = Reduction::new(sd)?;
    let g = sd.to_plumbing()?;
    let fast = red.z0(order);
    let primes = red.zhat_prime_all(order)?;
    let grp = &red.classes.homology.group;
    let elems = grp.elements();
    let mut pretty = format!(
        "{sd}\n|H| = {}, Δ = {}, g₀ order {}, at most {} nonzero Ẑ'_h\nZ₀(q^|H|) = {fast}\n",
        red.h_order(),
        rat(red.delta),
        red.g0_order(),
        red.vanishing_bound()
    );
    for (h, s) in elems.iter().zip(&primes) {
        let _ = writeln!(pretty, "Ẑ'_{:?}(q^|H|) = {s}", h.0);
    }
    let mut out = json!({
        "meta": provenance("seifert-reduce", &g, Some(order)),
        "seifert": sd.to_string(),
        "delta": rat(red.delta),
        "g0_order": red.g0_order(),
        "vanishing_bound": red.vanishing_bound(),
        "z0": series_json(&fast),
        "zhat_prime": elems.iter().zip(&primes).map(|(h, s)| json!({ "element": h.0, "value": series_json(s) })).collect::<Vec<_>>(),
    });
    let mut exit = 0;
    if compare {
        let z = Zhat::new(&g)?;
        let scale = Rational64::from_integer(z.order_h());
        let slow = z.z0(order / scale)?.scale_exponents(scale);
        let slow_primes: Vec<QSeries> = z
            .zhat_prime_all(order / scale)?
            .iter()
            .map(|s| s.scale_exponents(scale))
            .collect();
        let pass = slow == fast && slow_primes == primes;
        let _ = writeln!(pretty, "plumbing path Z₀(q^|H|) = {slow}");
        let _ = writeln!(pretty, "compare: {}", if pass { "PASS" } else { "FAIL" });
        out["compare"] = json!({ "pass": pass, "plumbing_z0": series_json(&slow) });
        if !pass {
            exit = 4;
        }
    }
    Ok(Report {
        json: out,
        pretty,
        exit,
    })
}

pub fn connections(a: &[i64]) -> Result<Report> {
    let census = component_census(a)?;
    let spec = hamm_charpoly(a)?;
    let holds = spec.mu as i64 == 4 * census.lambda_p;
    let mut pretty = census.to_string();
    let _ = writeln!(pretty, "λ^P = {}, μ = {}, μ/4 = λ^P: {holds}", census.lambda_p, spec.mu);
    Ok(Report::ok(
        json!({ "command": "connections", "census": census, "mu": spec.mu, "casson_milnor": holds }),
        pretty,
    ))
}

pub fn identify(g: &PlumbingGraph, order: Rational64, max_p: i64) -> Result<Report> {
    let z = Zhat::new(g)?;
    let fam = z.zhat_all(order, None)?;
    let found = identify_singlet(&fam, max_p);
    let pretty = match &found {
        SingletMatch::NoMatch => "no_match\n".to_string(),
        SingletMatch::PureUnit { deltas } => {
            let d: Vec<String> = deltas.iter().map(|x| rat(*x)).collect();
            format!("pure q^Δ_b/(q)_∞ form, Δ_b = {{{}}}\n", d.join(", "))
        }
        SingletMatch::Matched {
            p,
            central_charge,
            prefactor,
            members,
        } => {
            let mut s = format!(
                "p = {p}, c = {}, prefactor q^({})\n",
                rat(*central_charge),
                rat(*prefactor)
            );
            for (i, m) in members.iter().enumerate() {
                let mut theta = String::new();
                for (a, c) in &m.theta {
                    let sign = if c.is_negative() { "−" } else { "+" };
                    let mag = c.abs();
                    let coeff = if mag.is_one() {
                        String::new()
                    } else {
                        format!("{mag}·")
                    };
                    let _ = write!(theta, " {sign} {coeff}Ψ̃^({a}) [s = {}]", p - a);
                }
                let _ = writeln!(s, "member {i}: Δ = {}, unit {},{theta}", rat(m.delta), m.unit);
            }
            s
        }
    };
    Ok(Report::ok(
        json!({ "meta": provenance("identify", g, Some(order)), "result": found }),
        pretty,
    ))
}

pub fn moves(g: &PlumbingGraph, script: &str) -> Result<Report> {
    let before = (matrix_of(g).order(), casson_walker(g)?);
    let mut cur = g.clone();
    let mut applied = Vec::new();
    for (i, line) in script.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mv = NeumannMove::parse(body, i + 1)?;
        cur = neumann_move(&cur, &mv)?;
        applied.push(mv);
    }
    let after = (matrix_of(&cur).order(), casson_walker(&cur)?);
    let pretty = format!(
        "{} moves applied\n|H| {} → {}, λ {} → {}\n{}",
        applied.len(),
        before.0,
        after.0,
        before.1,
        after.1,
        cur.to_text()
    );
    Ok(Report::ok(
        json!({
            "meta": provenance("moves", &cur, None),
            "moves": applied,
            "graph": cur.to_record(),
            "h_order_before": before.0.to_string(),
            "casson_walker_before": before.1.to_string(),
            "casson_walker_after": after.1.to_string(),
        }),
        pretty,
    ))
}

fn golden(header: &str, s: &QSeries) -> String {
    format!("# {header}\n{}\n", s.to_json())
}

/// Writes the golden graphs and series into `dir`.
pub fn seed_corpus(dir: &Path) -> Result<Report> {
    let io = |e: std::io::Error| Error::Parse {
        line: 1,
        column: 1,
        message: format!("{}: {e}", dir.display()),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let files: Vec<(&str, String)> = vec![
        (
            "e6.graph",
            format!("# E6 Dynkin plumbing, all framings −2\n{}", corpus::e6().to_text()),
        ),
        (
            "y1.graph",
            format!(
                "# H-shaped 8-vertex graph, |H| = {}\n{}",
                matrix_of(&corpus::y1()).order(),
                corpus::y1().to_text()
            ),
        ),
        (
            "y2.graph",
            format!(
                "# 10-vertex graph sharing the splice diagram of y1, |H| = {}\n{}",
                matrix_of(&corpus::y2()).order(),
                corpus::y2().to_text()
            ),
        ),
        (
            "e6_zhat0.series",
            golden(
                "Ẑ for the spin^c class with c₁ = 0 on e6.graph, 13 terms",
                &corpus::e6_zhat0(),
            ),
        ),
        (
            "e6_zhat1.series",
            golden(
                "Ẑ for either class with c₁ ≠ 0 on e6.graph, 9 terms",
                &corpus::e6_zhat1(),
            ),
        ),
        (
            "e6_z0_cubed.series",
            golden("Z₀(q³) on e6.graph, 13 terms", &corpus::e6_z0_cubed()),
        ),
        (
            "e6_laplace_f0.series",
            golden(
                "Laplace image of the symmetric expansion for e6",
                &corpus::e6_laplace_f0(),
            ),
        ),
        (
            "e6_voa_bracket.series",
            golden("q·Ẑ₀ on e6.graph, 5 terms", &corpus::e6_voa_bracket()),
        ),
        ("y1_z0.series", golden("Z₀ on y1.graph, 10 terms", &corpus::y1_z0())),
    ];
    let mut written = Vec::new();
    for (name, body) in &files {
        std::fs::write(dir.join(name), body).map_err(io)?;
        written.push(*name);
    }
    Ok(Report::ok(
        json!({ "command": "seed-corpus", "dir": dir.display().to_string(), "files": written }),
        format!("wrote {} files to {}\n", written.len(), dir.display()),
    ))
}
