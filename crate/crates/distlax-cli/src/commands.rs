//! One function per subcommand. Each resolves its argument, runs the
//! library checks, and folds everything into a single [`Report`]; exit
//! codes and printing are main's business. Errors out of these functions
//! mean the run could not be judged at all (unreadable documents, broken
//! references, exhausted budgets), as opposed to a report with `ok: false`
//! which means the subject was judged and found wanting.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use distlax::collation::{check_collation_functorial, collate, Bifunctor};
use distlax::converse::{braiding_to_law, extract_law_pseudo, extract_law_t, find_braidings, is_decomposable};
use distlax::core2::{validate_2category, AxiomStatus, CellRef, CheckError, CheckParams, TwoCategory};
use distlax::currying::{check_triangle, check_roundtrip_2morphism, check_roundtrip_law, check_roundtrip_morphism, curry_law, uncurry_nested, NestedLaxFunctor};
use distlax::distlaw::{
    enumerate_laws, validate_dist_2morphism, validate_dist_morphism, validate_law,
    validate_law_assuming_invertible, DistributiveLaw,
};
use distlax::functors::{is_pseudofunctor, validate_lax_functor, validate_modification, validate_oplax};
use distlax::instances::monads_of;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::docs::{
    check_out_name, corruptible_fields, functor_doc, is_doc_name, law_doc, modification_doc,
    nested_doc, oplax_doc, structural, write_doc, CatRef, Loader,
};
use crate::report::Report;

/// What a positional argument resolved to: a document inside a manifest
/// directory, or a category built from a generator expression.
pub enum Target {
    Doc(Loader, String),
    Category(Loader, String),
}

/// Paths win over generator expressions: `rel(2)` is a generator unless a
/// file of that name exists, and a bare name is a document in the current
/// directory. `foo` and `foo.dl` name the same document.
pub fn resolve(arg: &str, params: CheckParams) -> Result<Target, CheckError> {
    for candidate in [PathBuf::from(arg), PathBuf::from(format!("{arg}.dl"))] {
        if candidate.is_file() {
            let dir = match candidate.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let name = candidate
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            return Ok(Target::Doc(Loader::new(dir, params), name));
        }
    }
    match CatRef::parse(arg) {
        Ok(CatRef::Doc(name)) => Err(structural(format!(
            "no document {name}.dl here; give a path or a generator expression"
        ))),
        Ok(r) => Ok(Target::Category(
            Loader::new(PathBuf::from("."), params),
            r.to_string(),
        )),
        Err(_) => Err(structural(format!(
            "{arg} is neither a readable document nor a generator expression"
        ))),
    }
}

fn doc_target(arg: &str, params: CheckParams) -> Result<(Loader, String), CheckError> {
    match resolve(arg, params)? {
        Target::Doc(loader, name) => Ok((loader, name)),
        Target::Category(_, r) => Err(structural(format!(
            "{r} is a generator expression; this command needs a document"
        ))),
    }
}

fn category_target(arg: &str, params: CheckParams) -> Result<(String, Arc<TwoCategory>), CheckError> {
    match resolve(arg, params)? {
        Target::Category(mut loader, r) => {
            let cat = loader.category(&r)?;
            Ok((r, cat))
        }
        Target::Doc(mut loader, name) => {
            let kind = loader.kind_of(&name)?;
            if kind != "category" {
                return Err(structural(format!(
                    "document {name} has kind {kind}, expected category"
                )));
            }
            let cat = loader.category(&name)?;
            Ok((name, cat))
        }
    }
}

pub fn validate(arg: &str, params: &CheckParams) -> Result<Report, CheckError> {
    match resolve(arg, *params)? {
        Target::Category(mut loader, r) => {
            let cat = loader.category(&r)?;
            Ok(Report::from_validation(
                "validate",
                &r,
                validate_2category(&cat, params)?,
            ))
        }
        Target::Doc(mut loader, name) => {
            let kind = loader.kind_of(&name)?;
            let rep = match kind.as_str() {
                "category" => {
                    let cat = loader.category(&name)?;
                    validate_2category(&cat, params)?
                }
                "functor" => validate_lax_functor(&loader.functor(&name)?, params)?,
                "oplax" => validate_oplax(&loader.oplax(&name)?, params)?,
                "modification" => validate_modification(&loader.modification(&name)?, params)?,
                "law" => validate_law(&loader.law(&name)?.law()?, params)?,
                "dist-morphism" => validate_dist_morphism(&loader.dist_morphism(&name)?, params)?,
                "dist-2morphism" => {
                    validate_dist_2morphism(&loader.dist_2morphism(&name)?, params)?
                }
                "nested" => {
                    let q = loader.nested(&name)?;
                    let mut report = Report::new("validate", &name);
                    report.push("fragment-closure", fragment_closure(&q));
                    report.absorb_under("outer", validate_lax_functor(&q.outer, params)?);
                    return Ok(report);
                }
                other => {
                    return Err(structural(format!(
                        "document {name}: no validator for kind {other}"
                    )))
                }
            };
            Ok(Report::from_validation("validate", &name, rep))
        }
    }
}

/// Loading a nested document already regenerated the fragment and checked
/// the listed cells were closed, so closure is reported as the cell count.
fn fragment_closure(q: &NestedLaxFunctor) -> AxiomStatus {
    let total =
        q.fragment.objects.len() + q.fragment.one_cells.len() + q.fragment.two_cells.len();
    AxiomStatus::Pass {
        instances: total as u64,
    }
}

pub fn check_functor(arg: &str, params: &CheckParams) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let f = loader.functor(&name)?;
    Ok(Report::from_validation(
        "check-functor",
        &name,
        validate_lax_functor(&f, params)?,
    ))
}

pub fn check_law(
    arg: &str,
    assume_invertible: bool,
    params: &CheckParams,
) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let law = loader.law(&name)?.law()?;
    let rep = if assume_invertible {
        validate_law_assuming_invertible(&law, params)?
    } else {
        validate_law(&law, params)?
    };
    Ok(Report::from_validation("check-law", &name, rep))
}

pub fn collate_cmd(
    arg: &str,
    out: Option<&str>,
    params: &CheckParams,
) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let loaded = loader.law(&name)?;
    let law = loaded.law()?;
    let mut report = Report::new("collate", &name);
    report.absorb_under("law", validate_law(&law, params)?);
    if !report.ok {
        return Ok(report);
    }
    let bif = collate(&law, params)?;
    report.absorb_under("collation", validate_lax_functor(&bif.p, params)?);
    if let Some(out) = out {
        check_out_name(out)?;
        let dom_ref = format!("product({}, {})", loaded.b_ref, loaded.c_ref);
        let path = write_doc(loader.dir(), &functor_doc(out, &bif.p, &dom_ref, &loaded.d_ref))?;
        report.results.push(format!("wrote {}", path.display()));
    }
    Ok(report)
}

pub fn curry_cmd(
    arg: &str,
    out: Option<&str>,
    params: &CheckParams,
) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let loaded = loader.law(&name)?;
    let law = loaded.law()?;
    let mut report = Report::new("curry", &name);
    report.absorb_under("law", validate_law(&law, params)?);
    if !report.ok {
        return Ok(report);
    }
    let q = curry_law(&law, params)?;
    report.push("fragment-closure", fragment_closure(&q));
    report.absorb_under("outer", validate_lax_functor(&q.outer, params)?);
    if let Some(out) = out {
        check_out_name(out)?;
        let paths = write_nested(
            &loader,
            out,
            &q,
            &loaded.c_ref,
            &loaded.d_ref,
            &loaded.b_ref,
        )?;
        for path in paths {
            report.results.push(format!("wrote {}", path.display()));
        }
    }
    Ok(report)
}

/// A nested functor serializes as one document per fragment cell plus the
/// nested document tying them together, so every cell stays addressable.
fn write_nested(
    loader: &Loader,
    base: &str,
    q: &NestedLaxFunctor,
    inner_dom: &str,
    inner_cod: &str,
    outer_dom: &str,
) -> Result<Vec<PathBuf>, CheckError> {
    let frag = &q.fragment;
    let obj_names: Vec<String> = (0..frag.objects.len())
        .map(|i| format!("{base}-obj{i}"))
        .collect();
    let one_names: Vec<String> = (0..frag.one_cells.len())
        .map(|i| format!("{base}-one{i}"))
        .collect();
    let two_names: Vec<String> = (0..frag.two_cells.len())
        .map(|i| format!("{base}-two{i}"))
        .collect();
    let mut paths = Vec::new();
    for (i, f) in frag.objects.iter().enumerate() {
        paths.push(write_doc(
            loader.dir(),
            &functor_doc(&obj_names[i], f, inner_dom, inner_cod),
        )?);
    }
    for (i, t) in frag.one_cells.iter().enumerate() {
        let src = frag
            .obj_index(&t.src)
            .expect("fragment one-cell endpoints are fragment objects");
        let tgt = frag
            .obj_index(&t.tgt)
            .expect("fragment one-cell endpoints are fragment objects");
        paths.push(write_doc(
            loader.dir(),
            &oplax_doc(&one_names[i], t, &obj_names[src.0], &obj_names[tgt.0]),
        )?);
    }
    for (i, w) in frag.two_cells.iter().enumerate() {
        let src = frag
            .one_index(&w.src)
            .expect("fragment two-cell endpoints are fragment one-cells");
        let tgt = frag
            .one_index(&w.tgt)
            .expect("fragment two-cell endpoints are fragment one-cells");
        paths.push(write_doc(
            loader.dir(),
            &modification_doc(&two_names[i], w, &one_names[src.0], &one_names[tgt.0]),
        )?);
    }
    paths.push(write_doc(
        loader.dir(),
        &nested_doc(
            base, q, inner_dom, inner_cod, outer_dom, &obj_names, &one_names, &two_names,
        ),
    )?);
    Ok(paths)
}

fn write_law_family(
    loader: &Loader,
    base: &str,
    law: &DistributiveLaw,
    b_ref: &str,
    c_ref: &str,
    d_ref: &str,
) -> Result<Vec<PathBuf>, CheckError> {
    let l_names: Vec<String> = (0..law.l.len()).map(|i| format!("{base}-l{i}")).collect();
    let m_names: Vec<String> = (0..law.m.len()).map(|i| format!("{base}-m{i}")).collect();
    let mut paths = Vec::new();
    for (i, f) in law.l.iter().enumerate() {
        paths.push(write_doc(loader.dir(), &functor_doc(&l_names[i], f, b_ref, d_ref))?);
    }
    for (i, f) in law.m.iter().enumerate() {
        paths.push(write_doc(loader.dir(), &functor_doc(&m_names[i], f, c_ref, d_ref))?);
    }
    paths.push(write_doc(
        loader.dir(),
        &law_doc(
            base, &law.label, b_ref, c_ref, d_ref, &l_names, &m_names, &law.sigma,
        ),
    )?);
    Ok(paths)
}

pub fn uncurry_cmd(
    arg: &str,
    out: Option<&str>,
    params: &CheckParams,
) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let raw = loader.raw(&name)?;
    if raw.kind != "nested" {
        return Err(structural(format!(
            "document {name} has kind {}, expected nested",
            raw.kind
        )));
    }
    let q = loader.nested(&name)?;
    let law = uncurry_nested(&q)?;
    let mut report = Report::new("uncurry", &name);
    report.absorb_under("law", validate_law(&law, params)?);
    if let Some(out) = out {
        check_out_name(out)?;
        let b_ref = loader.canonical(raw.require("outer-dom")?)?;
        let c_ref = loader.canonical(raw.require("inner-dom")?)?;
        let d_ref = loader.canonical(raw.require("inner-cod")?)?;
        let paths = write_law_family(&loader, out, &law, &b_ref, &c_ref, &d_ref)?;
        for path in paths {
            report.results.push(format!("wrote {}", path.display()));
        }
    }
    Ok(report)
}

pub fn check_triangle_cmd(arg: &str, params: &CheckParams) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let law = loader.law(&name)?.law()?;
    let mut report = Report::new("check-triangle", &name);
    report.absorb_under("law", validate_law(&law, params)?);
    if !report.ok {
        return Ok(report);
    }
    report.absorb(check_triangle(&law, params)?);
    Ok(report)
}

pub fn extract_law_cmd(
    arg: &str,
    pseudo: bool,
    out: Option<&str>,
    params: &CheckParams,
) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let raw = loader.raw(&name)?;
    if raw.kind != "functor" {
        return Err(structural(format!(
            "document {name} has kind {}, expected functor",
            raw.kind
        )));
    }
    let dom_ref = CatRef::parse(raw.require("dom")?)?;
    let CatRef::Product(left, right) = dom_ref else {
        return Err(structural(format!(
            "document {name}: extract-law needs a functor whose dom is product(b, c)"
        )));
    };
    let left_ref = left.to_string();
    let right_ref = right.to_string();
    let f = loader.functor(&name)?;
    let bif = Bifunctor::new(f, loader.category(&left_ref)?, loader.category(&right_ref)?)?;
    let mut report = Report::new("extract-law", &name);
    report.absorb_under("functor", validate_lax_functor(&bif.p, params)?);
    if !report.ok {
        return Ok(report);
    }
    let law = if pseudo {
        if !is_pseudofunctor(&bif.p) {
            report.push(
                "pseudofunctor",
                AxiomStatus::Fail {
                    witness: Vec::new(),
                    detail: "a compositor or unit has no vertical inverse".to_string(),
                },
            );
            return Ok(report);
        }
        let law = extract_law_pseudo(&bif, params)?;
        report.absorb_under("law", validate_law_assuming_invertible(&law, params)?);
        law
    } else {
        let dec = is_decomposable(&bif, params)?;
        let decomposable = dec.ok;
        report.absorb_under("decomposability", dec);
        if !decomposable {
            return Ok(report);
        }
        let law = extract_law_t(&bif, params)?;
        report.absorb_under("law", validate_law(&law, params)?);
        law
    };
    if let Some(out) = out {
        check_out_name(out)?;
        let cod_ref = loader.canonical(raw.require("cod")?)?;
        let paths = write_law_family(&loader, out, &law, &left_ref, &right_ref, &cod_ref)?;
        for path in paths {
            report.results.push(format!("wrote {}", path.display()));
        }
    }
    Ok(report)
}

pub fn check_roundtrip_cmd(arg: &str, params: &CheckParams) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let kind = loader.kind_of(&name)?;
    let mut report = Report::new("check-roundtrip", &name);
    match kind.as_str() {
        "law" => {
            let law = loader.law(&name)?.law()?;
            report.absorb_under("law", validate_law(&law, params)?);
            if !report.ok {
                return Ok(report);
            }
            report.absorb(check_roundtrip_law(&law, params)?);
        }
        "dist-morphism" => {
            let m = loader.dist_morphism(&name)?;
            report.absorb_under("morphism", validate_dist_morphism(&m, params)?);
            if !report.ok {
                return Ok(report);
            }
            report.absorb(check_roundtrip_morphism(&m, params)?);
        }
        "dist-2morphism" => {
            let w = loader.dist_2morphism(&name)?;
            report.absorb_under("2morphism", validate_dist_2morphism(&w, params)?);
            if !report.ok {
                return Ok(report);
            }
            report.absorb(check_roundtrip_2morphism(&w, params)?);
        }
        other => {
            return Err(structural(format!(
                "document {name} has kind {other}; check-roundtrip takes a law, dist-morphism, or dist-2morphism"
            )))
        }
    }
    Ok(report)
}

pub fn check_braiding_cmd(arg: &str, params: &CheckParams) -> Result<Report, CheckError> {
    let (subject, cat) = category_target(arg, *params)?;
    let mut report = Report::new("check-braiding", &subject);
    let braidings = find_braidings(&cat, params)?;
    for braid in &braidings {
        let law = braiding_to_law(&cat, braid)?;
        let rep = validate_law(&law, params)?;
        report.charged += rep.charged;
        if !rep.ok {
            return Err(structural(format!(
                "internal: enumerated braiding on {subject} fails revalidation"
            )));
        }
        let ids: Vec<String> = braid.iter().map(|t| t.0.to_string()).collect();
        report.results.push(format!("braiding {}", ids.join(" ")));
    }
    let status = if braidings.is_empty() {
        AxiomStatus::Fail {
            witness: Vec::new(),
            detail: "no interchanger table makes the swap a distributive law".to_string(),
        }
    } else {
        AxiomStatus::Pass {
            instances: braidings.len() as u64,
        }
    };
    report.push("braiding-exists", status);
    Ok(report)
}

pub fn enumerate_monads_cmd(arg: &str, params: &CheckParams) -> Result<Report, CheckError> {
    let (subject, cat) = category_target(arg, *params)?;
    let monads = monads_of(&cat, params)?;
    let mut report = Report::new("enumerate-monads", &subject);
    report.push(
        "enumeration",
        AxiomStatus::Pass {
            instances: monads.len() as u64,
        },
    );
    for (_, view) in &monads {
        report.results.push(format!(
            "monad at {} carrier {} mult {} unit {}",
            CellRef::Obj(view.obj),
            CellRef::One(view.t),
            CellRef::Two(view.mu),
            CellRef::Two(view.eta)
        ));
    }
    Ok(report)
}

pub fn enumerate_laws_cmd(arg: &str, params: &CheckParams) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let loaded = loader.law(&name)?;
    let found = enumerate_laws(
        &loaded.label,
        &loaded.b,
        &loaded.c,
        &loaded.d,
        &loaded.l,
        &loaded.m,
        params,
    )?;
    let mut report = Report::new("enumerate-laws", &name);
    report.push(
        "enumeration",
        AxiomStatus::Pass {
            instances: found.len() as u64,
        },
    );
    for law in &found {
        let ids: Vec<String> = law.sigma.iter().map(|t| t.0.to_string()).collect();
        report.results.push(format!("law sigma {}", ids.join(" ")));
    }
    Ok(report)
}

pub fn check_k_cmd(args: &[String], params: &CheckParams) -> Result<Report, CheckError> {
    if args.is_empty() {
        return Err(structural(
            "check-k needs law documents or a manifest directory".to_string(),
        ));
    }
    let mut laws = Vec::new();
    let mut names = Vec::new();
    for arg in args {
        let path = PathBuf::from(arg);
        if path.is_dir() {
            let mut stems: Vec<String> = fs::read_dir(&path)
                .map_err(|e| structural(format!("cannot read {}: {e}", path.display())))?
                .filter_map(|entry| entry.ok())
                .filter_map(|entry| {
                    let p = entry.path();
                    if p.extension().is_some_and(|e| e == "dl") {
                        p.file_stem().map(|s| s.to_string_lossy().into_owned())
                    } else {
                        None
                    }
                })
                .filter(|stem| is_doc_name(stem))
                .collect();
            stems.sort();
            let mut loader = Loader::new(path.clone(), *params);
            for stem in stems {
                if loader.kind_of(&stem)? != "law" {
                    continue;
                }
                let loaded = loader.law(&stem)?;
                if loaded.sigma.is_none() {
                    continue;
                }
                laws.push(loaded.law()?);
                names.push(stem);
            }
        } else {
            let (mut loader, name) = doc_target(arg, *params)?;
            laws.push(loader.law(&name)?.law()?);
            names.push(name);
        }
    }
    let rep = check_collation_functorial(&laws, params)?;
    let mut report = Report::from_validation("check-k", &names.join(","), rep);
    report.results.push(format!("laws {}", laws.len()));
    Ok(report)
}

pub fn corrupt_cmd(
    arg: &str,
    out: &str,
    seed: u64,
    params: &CheckParams,
) -> Result<Report, CheckError> {
    let (mut loader, name) = doc_target(arg, *params)?;
    let doc = loader.raw(&name)?;
    check_out_name(out)?;
    // A position is one integer slot: (field index, token index, pair side,
    // current value). Pair tokens like 1>0 contribute two positions.
    let mut positions: Vec<(usize, usize, Option<bool>, usize)> = Vec::new();
    let fields = corruptible_fields(&doc.kind);
    for (fi, (key, value)) in doc.fields.iter().enumerate() {
        if !fields.contains(&key.as_str()) {
            continue;
        }
        for (ti, tok) in value.split_whitespace().enumerate() {
            if tok == "-" {
                continue;
            }
            if let Some((a, b)) = tok.split_once('>') {
                let a: usize = a
                    .parse()
                    .map_err(|_| structural(format!("document {name}: field {key}: bad token {tok}")))?;
                let b: usize = b
                    .parse()
                    .map_err(|_| structural(format!("document {name}: field {key}: bad token {tok}")))?;
                positions.push((fi, ti, Some(false), a));
                positions.push((fi, ti, Some(true), b));
            } else {
                let v: usize = tok
                    .parse()
                    .map_err(|_| structural(format!("document {name}: field {key}: bad token {tok}")))?;
                positions.push((fi, ti, None, v));
            }
        }
    }
    if positions.is_empty() {
        return Err(structural(format!(
            "document {name}: kind {} has no corruptible tables",
            doc.kind
        )));
    }
    let mut rng = SmallRng::seed_from_u64(seed);
    let (fi, ti, side, old) = positions[rng.gen_range(0..positions.len())];
    // Draw replacements below the field's own ceiling so the corrupted
    // document still parses; the point is a semantic break, not a range error.
    let ceiling = positions
        .iter()
        .filter(|p| p.0 == fi)
        .map(|p| p.3)
        .max()
        .expect("the chosen field has at least one position")
        .max(1)
        + 1;
    let mut new = old;
    while new == old {
        new = rng.gen_range(0..ceiling);
    }
    let key = doc.fields[fi].0.clone();
    let mut toks: Vec<String> = doc.fields[fi]
        .1
        .split_whitespace()
        .map(str::to_string)
        .collect();
    toks[ti] = match side {
        None => new.to_string(),
        Some(second) => {
            let (a, b) = toks[ti].split_once('>').expect("pair token");
            if second {
                format!("{a}>{new}")
            } else {
                format!("{new}>{b}")
            }
        }
    };
    let mut corrupted = doc.clone();
    corrupted.fields[fi].1 = toks.join(" ");
    corrupted.name = out.to_string();
    let path = write_doc(loader.dir(), &corrupted)?;
    let slot = match side {
        None => format!("entry {ti}"),
        Some(false) => format!("src of entry {ti}"),
        Some(true) => format!("tgt of entry {ti}"),
    };
    let mut report = Report::new("corrupt", &name);
    report
        .results
        .push(format!("corrupted {key} {slot}: {old} -> {new}"));
    report.results.push(format!("wrote {}", path.display()));
    Ok(report)
}
