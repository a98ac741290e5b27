use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Deserialize;
use serde_json::{json, Value};

use quadembed::embedding::{
    build_embedding, globalize, local_variable, m_for, retract_psi_infinity, rewrite_to_two_generators,
    small_cancellation_sweep, transport_solution, v_word, v_word_stats, verify_transport, EmbeddingOutput,
    EmbeddingParams, GroupValue, TwoGeneratorPresentation, C,
};
use quadembed::groups::{GroupBackend, Presentation};
use quadembed::quadratic::{self, enumerate_solvable, verify_solution, QuadraticEquation, Verdict};
use quadembed::surface::{edge_bound_sweep, icosahedron, planar_k4, CombinatorialMap};
use quadembed::words::{Letter, Sort, Word};

use crate::failure::{Failure, EXIT_INCONCLUSIVE, EXIT_UNSOLVABLE, EXIT_VERIFICATION};
use crate::inputs::{
    base_presentation, describe_tuple, load_group, parse_assignments, read_bytes, read_text, sha256_hex,
    tuple_from_json, tuple_to_json, BackendKind,
};
use crate::{CheckMapArgs, CheckScArgs, EmbedArgs, EnumerateArgs, RetractArgs, SolveArgs, VerifyArgs, VwordArgs};

fn emit(json: bool, value: &Value, text: &str) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("json"));
    } else {
        print!("{text}");
    }
}

fn check_n(n: u32) -> Result<(), Failure> {
    if n < 2 || n % 2 == 1 {
        return Err(Failure::input(format!("--n must be even and at least 2, got {n}")));
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn embed(args: EmbedArgs) -> Result<u8, Failure> {
    let loaded = load_group(&args.group.group, args.group.backend, args.group.radius)?;
    let presentation_digest = args
        .presentation
        .as_deref()
        .map(read_bytes)
        .transpose()?
        .map(|b| sha256_hex(&b));
    let base = base_presentation(&loaded.backend, args.presentation.as_deref())?;
    let params = EmbeddingParams::new(args.n, args.count, args.cap)?.with_horizon(args.horizon);

    let started = Instant::now();
    let out = build_embedding(&loaded.backend, &base, &params)?;
    eprintln!("built in {:.2?}", started.elapsed());

    let header = vec![
        format!("n = {}", params.n),
        format!("M = {}", params.m),
        format!("N = {}", out.equations.len()),
        format!("cap = {}", params.cap),
        format!("backend = {}", loaded.backend.kind()),
        format!("group sha256 = {}", loaded.digest),
    ];
    let mut prh_header = header.clone();
    prh_header.push(format!("base relators = {}", out.prh.base_relators));

    let manifest = manifest(
        &out,
        &loaded.backend,
        &loaded.digest,
        presentation_digest,
        args.group.radius,
    );
    let solutions = solutions_json(&out);

    fs::create_dir_all(&args.out).map_err(|e| Failure::input(format!("{}: {e}", args.out.display())))?;
    write_file(&args.out, "g1.pres", &out.g1.to_text_with_header(&header))?;
    write_file(&args.out, "g2.pres", &out.g2.to_text_with_header(&header))?;
    write_file(
        &args.out,
        "prh.pres",
        &out.prh.presentation.to_text_with_header(&prh_header),
    )?;
    write_file(
        &args.out,
        "manifest.json",
        &(serde_json::to_string_pretty(&manifest).expect("json") + "\n"),
    )?;
    write_file(
        &args.out,
        "solutions.json",
        &(serde_json::to_string_pretty(&solutions).expect("json") + "\n"),
    )?;

    let mut text = String::new();
    writeln!(text, "equations {}", out.equations.len()).unwrap();
    for (name, p) in [("g1", &out.g1), ("g2", &out.g2), ("prh", &out.prh.presentation)] {
        writeln!(
            text,
            "{name:<9} {} relators, {} letters",
            p.relators().len(),
            p.total_length()
        )
        .unwrap();
    }
    let longest = out.transports.iter().map(|t| t.length).max().unwrap_or(0);
    writeln!(text, "transports verified, longest tuple {longest} letters").unwrap();
    writeln!(text, "wrote {}", args.out.display()).unwrap();
    emit(args.json, &manifest, &text);
    Ok(0)
}

fn manifest(
    out: &EmbeddingOutput,
    backend: &GroupBackend,
    digest: &str,
    presentation_digest: Option<String>,
    radius: usize,
) -> Value {
    let sizes = |p: &Presentation| json!({ "relators": p.relators().len(), "letters": p.total_length() });
    json!({
        "tool": "quadembed",
        "version": env!("CARGO_PKG_VERSION"),
        "backend": backend.kind(),
        "group_sha256": digest,
        "presentation_sha256": presentation_digest,
        "radius": matches!(backend, GroupBackend::FreeGroup { .. }).then_some(radius),
        "seeds": [],
        "n": out.params.n,
        "m": out.params.m,
        "c": C,
        "count": out.params.count,
        "cap": out.params.cap,
        "horizon": out.params.horizon,
        "small_cancellation_pairs": out.small_cancellation_pairs,
        "equations": out.equations.len(),
        "base_relators": out.prh.base_relators,
        "g1": sizes(&out.g1),
        "g2": sizes(&out.g2),
        "prh": sizes(&out.prh.presentation),
    })
}

fn solutions_json(out: &EmbeddingOutput) -> Value {
    let entries: Vec<Value> = out
        .equations
        .iter()
        .enumerate()
        .map(|(pos, eq)| {
            let t = &out.transports[pos];
            json!({
                "index": pos + 1,
                "equation": eq.to_string(),
                "relator": out.g1.relators()[out.prh.base_relators + pos].to_string(),
                "solution": out.solutions_g.as_ref().map(|s| tuple_to_json(&s[pos])),
                "transport": {
                    "variables": t.global_variables.iter().map(|k| format!("x{k}")).collect::<Vec<_>>(),
                    "v_indices": t.global_variables.iter().map(|k| 2 * k).collect::<Vec<_>>(),
                    "length": t.length,
                    "proof_bound": t.proof_bound,
                    "theorem_bound": t.theorem_bound,
                },
            })
        })
        .collect();
    Value::Array(entries)
}

pub fn solve(args: SolveArgs) -> Result<u8, Failure> {
    let loaded = load_group(&args.group.group, args.group.backend, args.group.radius)?;
    let eq = QuadraticEquation::recognize(args.equation.parse()?)?;
    let verdict = quadratic::solve(&eq, &loaded.backend)?;
    let (status, code, solution) = match &verdict {
        Verdict::Solved(t) => {
            if !verify_solution(&eq, t, &loaded.backend)? {
                return Err(Failure::verification(format!(
                    "solver returned a non-solution for {eq}"
                )));
            }
            ("solvable", 0, Some(t))
        }
        Verdict::Listed => ("solvable", 0, None),
        Verdict::Unsolvable => ("unsolvable", EXIT_UNSOLVABLE, None),
        Verdict::Inconclusive => ("inconclusive", EXIT_INCONCLUSIVE, None),
    };
    let value = json!({
        "equation": eq.to_string(),
        "verdict": status,
        "solution": solution.map(tuple_to_json),
    });
    let mut text = format!("{status}\n");
    if let Some(t) = solution {
        writeln!(text, "{}", describe_tuple(t, &loaded.backend)).unwrap();
    }
    emit(args.json, &value, &text);
    Ok(code)
}

pub fn enumerate(args: EnumerateArgs) -> Result<u8, Failure> {
    check_n(args.n)?;
    let loaded = load_group(&args.group.group, args.group.backend, args.group.radius)?;
    let eqs = enumerate_solvable(&loaded.backend, args.n, args.cap, args.count)?;
    let words: Vec<String> = eqs.iter().map(ToString::to_string).collect();
    let text: String = words.iter().map(|w| format!("{w}\n")).collect();
    emit(args.json, &json!(words), &text);
    Ok(0)
}

pub fn vword(args: VwordArgs) -> Result<u8, Failure> {
    check_n(args.n)?;
    let m = m_for(args.n);
    if args.stats {
        let s = v_word_stats(args.i, m)?;
        if s.length != s.closed_form_length {
            return Err(Failure::verification("expansion disagrees with the closed-form length"));
        }
        let text = format!(
            "i {}\nM {}\nlength {}\nh1-count {}\nrun range [{}, {}]\n",
            s.i, s.m, s.length, s.h1_count, s.min_run, s.max_run
        );
        emit(args.json, &serde_json::to_value(&s).expect("json"), &text);
    } else {
        let w = v_word(args.i, m)?;
        emit(
            args.json,
            &json!({ "i": args.i, "m": m, "word": w.to_string() }),
            &format!("{w}\n"),
        );
    }
    Ok(0)
}

pub fn check_sc(args: CheckScArgs) -> Result<u8, Failure> {
    check_n(args.n)?;
    let reports = small_cancellation_sweep(m_for(args.n), args.max_i)?;
    let failed = reports.iter().filter(|r| !r.passes()).count();
    let mut text = String::new();
    for r in &reports {
        writeln!(
            text,
            "i={} j={} |Vi|={} |Vj|={} t={} qualifying={} {}",
            r.i,
            r.j,
            r.len_i,
            r.len_j,
            r.threshold,
            r.qualifying.len(),
            if r.passes() { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    writeln!(text, "{} pairs, {failed} failed", reports.len()).unwrap();
    let value = json!({ "m": m_for(args.n), "max_i": args.max_i, "failed": failed, "pairs": reports });
    emit(args.json, &value, &text);
    Ok(if failed == 0 { 0 } else { EXIT_VERIFICATION })
}

pub fn check_map(args: CheckMapArgs) -> Result<u8, Failure> {
    if args.random {
        let sweep = edge_bound_sweep(args.seed, args.count, args.max_vertices);
        let text = format!(
            "maps {}\nwith property B2 {}\nfailures {}\nmin slack {}\nmin euler characteristic {}\n",
            sweep.maps,
            sweep.tested,
            sweep.failures.len(),
            sweep.min_slack.map_or("-".into(), |s| s.to_string()),
            sweep.min_euler_characteristic.map_or("-".into(), |s| s.to_string()),
        );
        emit(args.json, &serde_json::to_value(&sweep).expect("json"), &text);
        return Ok(if sweep.failures.is_empty() {
            0
        } else {
            EXIT_VERIFICATION
        });
    }
    let map = match (&args.file, args.builtin.as_deref()) {
        (Some(path), _) => CombinatorialMap::from_json(&read_text(path)?)?,
        (None, Some("k4")) => planar_k4(),
        (None, Some(_)) => icosahedron(),
        (None, None) => return Err(Failure::usage("check-map needs --file, --builtin or --random")),
    };
    let degrees = map.face_degrees();
    let b2 = map.check_property_b2();
    let bound = map.verify_edge_bound().ok();
    let mut text = format!(
        "vertices {}\nedges {}\nfaces {}\neuler characteristic {}\nface degrees {}\nproperty B2 {}\n",
        map.vertex_count(),
        map.edge_count(),
        degrees.len(),
        map.euler_characteristic(),
        degrees.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        if b2 { "yes" } else { "no" },
    );
    match &bound {
        Some(r) => writeln!(
            text,
            "edge bound E={} <= 3(V-chi)={} slack {}",
            r.edges, r.bound, r.slack
        )
        .unwrap(),
        None => writeln!(text, "edge bound not applicable").unwrap(),
    }
    let value = json!({
        "vertices": map.vertex_count(),
        "edges": map.edge_count(),
        "euler_characteristic": map.euler_characteristic(),
        "face_degrees": degrees,
        "property_b2": b2,
        "edge_bound": bound,
    });
    emit(args.json, &value, &text);
    Ok(if bound.as_ref().is_some_and(|r| !r.holds) {
        EXIT_VERIFICATION
    } else {
        0
    })
}

#[derive(Deserialize)]
struct ManifestHead {
    backend: String,
    group_sha256: String,
    n: u32,
    base_relators: usize,
}

struct EmbeddingDir {
    head: ManifestHead,
    g1: Presentation,
}

fn read_dir(dir: &Path) -> Result<EmbeddingDir, Failure> {
    let head: ManifestHead = serde_json::from_str(&read_text(&dir.join("manifest.json"))?)
        .map_err(|e| Failure::input(format!("manifest.json: {e}")))?;
    check_n(head.n)?;
    let g1 = Presentation::parse(&read_text(&dir.join("g1.pres"))?)?;
    if head.base_relators > g1.relators().len() {
        return Err(Failure::input("manifest and g1.pres disagree on the relator count"));
    }
    Ok(EmbeddingDir { head, g1 })
}

/// The `i`-th equation recovered from its relator in G1.
fn localize(relator: &Word, i: usize, n: u32) -> Result<QuadraticEquation, Failure> {
    let local: Word = relator
        .letters()
        .iter()
        .map(|&l| match l.sort() {
            Sort::X => Letter::new(Sort::X, local_variable(l.index(), n).1, l.is_inverse()),
            _ => l,
        })
        .collect();
    let eq = QuadraticEquation::recognize(local)?;
    if &globalize(&eq, i, n)? != relator {
        return Err(Failure::verification(format!(
            "relator {relator} uses variables outside block {i}"
        )));
    }
    Ok(eq)
}

pub fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    let Some(dir) = args.dir else {
        let group = args.group.expect("required by clap");
        let loaded = load_group(&group, args.backend, 0)?;
        let (Some(eq), Some(solution)) = (args.equation, args.solution) else {
            return Err(Failure::usage(
                "verify needs --dir, or --group with --eq and --solution",
            ));
        };
        let eq = QuadraticEquation::recognize(eq.parse()?)?;
        let tuple = parse_assignments(&solution, &loaded.backend)?;
        let ok = verify_solution(&eq, &tuple, &loaded.backend)?;
        let status = if ok { "valid" } else { "invalid" };
        emit(
            args.json,
            &json!({ "equation": eq.to_string(), "valid": ok }),
            &format!("{status}\n"),
        );
        return Ok(if ok { 0 } else { EXIT_VERIFICATION });
    };

    let EmbeddingDir { head, g1 } = read_dir(&dir)?;
    let n = head.n;
    let prh = TwoGeneratorPresentation {
        n,
        base_relators: head.base_relators,
        presentation: Presentation::parse(&read_text(&dir.join("prh.pres"))?)?,
    };
    let g2 = Presentation::parse(&read_text(&dir.join("g2.pres"))?)?;
    let rewritten = rewrite_to_two_generators(&g2, n)?;
    let prh_matches = rewritten == prh;
    let g2_extends_g1 = g2.relators().starts_with(g1.relators());

    let mut results = Vec::new();
    for (pos, relator) in g1.relators()[head.base_relators..].iter().enumerate() {
        let i = pos + 1;
        let eq = localize(relator, i, n)?;
        let t = transport_solution(i, &eq, n)?;
        results.push((i, verify_transport(i, &eq, &t.tuple, &prh)?, t.summary.length));
    }
    let failed = results.iter().filter(|r| !r.1).count();
    let ok = failed == 0 && prh_matches && g2_extends_g1;

    let mut text = String::new();
    for (i, passed, length) in &results {
        writeln!(
            text,
            "equation {i}: length {length} {}",
            if *passed { "ok" } else { "FAIL" }
        )
        .unwrap();
    }
    writeln!(text, "g2 extends g1: {}", if g2_extends_g1 { "yes" } else { "no" }).unwrap();
    writeln!(
        text,
        "prh matches rewritten g2: {}",
        if prh_matches { "yes" } else { "no" }
    )
    .unwrap();
    let value = json!({
        "equations": results.len(),
        "failed": failed,
        "g2_extends_g1": g2_extends_g1,
        "prh_matches": prh_matches,
    });
    emit(args.json, &value, &text);
    Ok(if ok { 0 } else { EXIT_VERIFICATION })
}

pub fn retract(args: RetractArgs) -> Result<u8, Failure> {
    let EmbeddingDir { head, g1 } = read_dir(&args.dir)?;
    let group_bytes = read_bytes(&args.group.group)?;
    if sha256_hex(&group_bytes) != head.group_sha256 {
        return Err(Failure::input(
            "group file differs from the one recorded in manifest.json",
        ));
    }
    let loaded = load_group(&args.group.group, args.group.backend, args.group.radius)?;
    if loaded.backend.kind() != head.backend || args.group.backend == BackendKind::Oracle {
        return Err(Failure::input(format!(
            "retraction needs the {} backend's solutions; oracle runs have none",
            head.backend
        )));
    }
    let entries: Vec<Value> = serde_json::from_str(&read_text(&args.dir.join("solutions.json"))?)
        .map_err(|e| Failure::input(format!("solutions.json: {e}")))?;
    let solutions = entries
        .iter()
        .map(|e| tuple_from_json(&e["solution"]))
        .collect::<Result<Vec<_>, _>>()?;

    let describe = |v: &GroupValue| match (v, &loaded.backend) {
        (GroupValue::Element(g), GroupBackend::FiniteTable(t)) => t.name(*g).to_string(),
        (GroupValue::Element(g), _) => g.to_string(),
        (GroupValue::Word(w), _) => w.to_string(),
    };

    if let Some(word) = args.word {
        let w: Word = word.parse()?;
        let value = retract_psi_infinity(&w, &solutions, head.n, &loaded.backend)?;
        let text = format!("{}\n", describe(&value));
        emit(args.json, &json!({ "word": w.to_string(), "image": value }), &text);
        return Ok(0);
    }
    let mut failures = Vec::new();
    for (pos, r) in g1.relators().iter().enumerate() {
        if !retract_psi_infinity(r, &solutions, head.n, &loaded.backend)?.is_identity(&loaded.backend) {
            failures.push(pos + 1);
        }
    }
    let text = format!(
        "{} relators of g1, {} not killed{}\n",
        g1.relators().len(),
        failures.len(),
        if failures.is_empty() {
            String::new()
        } else {
            format!(": {failures:?}")
        }
    );
    emit(
        args.json,
        &json!({ "relators": g1.relators().len(), "failures": failures }),
        &text,
    );
    Ok(if failures.is_empty() { 0 } else { EXIT_VERIFICATION })
}
