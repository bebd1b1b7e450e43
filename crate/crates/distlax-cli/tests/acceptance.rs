//! The acceptance sweep. Each test is one observable guarantee of the
//! toolkit, checked exhaustively over small instances and printed as a
//! single PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Expected values come from independent oracles computed inside this file:
//! boolean matrix algebra for relations, raw multiplication tables for
//! monoids. The library is never asked to confirm itself where a oracle is
//! cheaper to trust.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use distlax::collation::{
    check_collation_functorial, collate, collate_morphism, composite_monad, kappa_b, kappa_c,
};
use distlax::converse::{
    braiding_to_law, check_reduced_equivalence, extract_law_t, find_braidings, t_on_morphism,
    witness_kappa, witness_lambda,
};
use distlax::core2::{terminal_2category, CheckError, CheckParams, ObjId, OneCellId, TwoCategory, TwoCellId};
use distlax::currying::{
    check_roundtrip_2morphism, check_roundtrip_law, check_roundtrip_morphism, check_triangle,
};
use distlax::distlaw::{
    compose_dist_morphisms, enumerate_dist_2morphisms, enumerate_dist_morphisms, enumerate_laws,
    inverse_dist_morphism, validate_law, DistributiveLaw,
};
use distlax::functors::{
    compose_oplax, identity_lax_functor, identity_oplax, inverse_icon, is_unitary,
    validate_lax_functor, validate_oplax, LaxFunctor,
};
use distlax::instances::{
    cyclic_loop, discrete_monoid_delooping, monads_of, rel_2category, truncated_addition_chain,
};

fn params() -> CheckParams {
    CheckParams::default()
}

fn estr(e: CheckError) -> String {
    e.to_string()
}

fn conclude(number: u32, name: &str, verdict: Result<String, String>) {
    match verdict {
        Ok(note) => println!("acceptance {number:02} {name}: PASS ({note})"),
        Err(why) => {
            println!("acceptance {number:02} {name}: FAIL ({why})");
            panic!("acceptance {number:02} {name}: {why}");
        }
    }
}

/// Every law between every ordered pair of monads on `d`, both families
/// constant at a single monad. `expect_monads` pins exhaustiveness of the
/// monad enumeration itself.
fn monad_pair_laws(
    d: &Arc<TwoCategory>,
    expect_monads: usize,
) -> Result<Vec<DistributiveLaw>, String> {
    let p = params();
    let t = terminal_2category();
    let monads = monads_of(d, &p).map_err(estr)?;
    if monads.len() != expect_monads {
        return Err(format!(
            "{} has {} monads, expected {expect_monads}",
            d.label(),
            monads.len()
        ));
    }
    let mut laws = Vec::new();
    for (sf, _) in &monads {
        for (tf, _) in &monads {
            let found = enumerate_laws(
                &format!("{} over {}", tf.label, sf.label),
                &t,
                &t,
                d,
                &[sf.clone()],
                &[tf.clone()],
                &p,
            )
            .map_err(estr)?;
            laws.extend(found);
        }
    }
    Ok(laws)
}

fn rel2_laws() -> Result<Vec<DistributiveLaw>, String> {
    monad_pair_laws(&rel_2category(2).map_err(estr)?, 4)
}

fn chain_laws() -> Result<Vec<DistributiveLaw>, String> {
    monad_pair_laws(&truncated_addition_chain(2).map_err(estr)?, 2)
}

#[test]
fn criterion_01_collation_soundness() {
    conclude(1, "collation soundness", (|| {
        let p = params();
        let mut notes = Vec::new();
        for laws in [rel2_laws()?, chain_laws()?] {
            for s in &laws {
                let bif = collate(s, &p).map_err(estr)?;
                let report = validate_lax_functor(&bif.p, &p).map_err(estr)?;
                if !report.ok {
                    return Err(format!(
                        "collation of {} is not a lax functor:\n{}",
                        s.label,
                        report.render_text()
                    ));
                }
                for b in (0..s.b.n_objects()).map(ObjId) {
                    let k = kappa_b(s, &bif, b).map_err(estr)?;
                    if !k.is_icon() {
                        return Err(format!("kappa_b of {} at {b} is not an icon", s.label));
                    }
                    let r = validate_oplax(&k, &p).map_err(estr)?;
                    if !r.ok {
                        return Err(format!(
                            "kappa_b of {} at {b} invalid:\n{}",
                            s.label,
                            r.render_text()
                        ));
                    }
                }
                for c in (0..s.c.n_objects()).map(ObjId) {
                    let k = kappa_c(s, &bif, c).map_err(estr)?;
                    if !k.is_icon() {
                        return Err(format!("kappa_c of {} at {c} is not an icon", s.label));
                    }
                    let r = validate_oplax(&k, &p).map_err(estr)?;
                    if !r.ok {
                        return Err(format!(
                            "kappa_c of {} at {c} invalid:\n{}",
                            s.label,
                            r.render_text()
                        ));
                    }
                }
            }
            notes.push(format!("{} laws over {}", laws.len(), laws[0].d.label()));
        }
        Ok(notes.join(", "))
    })());
}

// Boolean matrices, row-major, entry i*n + j meaning "i relates to j". The
// mask encoding matches bit i*n + j, so carriers can be compared directly.

fn mask_matrix(n: usize, mask: usize) -> Vec<bool> {
    (0..n * n).map(|k| mask >> k & 1 == 1).collect()
}

fn matrix_mask(m: &[bool]) -> usize {
    m.iter()
        .enumerate()
        .fold(0, |acc, (k, &b)| acc | (usize::from(b) << k))
}

/// `a` then `b`: out(i, j) holds when some k has a(i, k) and b(k, j).
fn bool_then(n: usize, a: &[bool], b: &[bool]) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] {
                for j in 0..n {
                    out[i * n + j] |= b[k * n + j];
                }
            }
        }
    }
    out
}

fn bool_leq(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !x || *y)
}

fn is_preorder(n: usize, m: &[bool]) -> bool {
    (0..n).all(|i| m[i * n + i]) && bool_leq(&bool_then(n, m, m), m)
}

#[test]
fn criterion_02_composite_monad_oracle() {
    conclude(2, "composite monad oracle", (|| {
        let p = params();
        let t = terminal_2category();
        let mut pairs = 0usize;
        let mut admitting = 0usize;
        for n in 1..=3usize {
            let rel = rel_2category(n).map_err(estr)?;
            let monads = monads_of(&rel, &p).map_err(estr)?;

            let oracle_preorders: BTreeSet<usize> = (0..1usize << (n * n))
                .filter(|&mask| is_preorder(n, &mask_matrix(n, mask)))
                .collect();
            let found_carriers: BTreeSet<usize> =
                monads.iter().map(|(f, _)| f.cell1_map[0].0).collect();
            if found_carriers != oracle_preorders {
                return Err(format!(
                    "monads on rel({n}) are carried by {found_carriers:?}, oracle says {oracle_preorders:?}"
                ));
            }

            for (sf, _) in &monads {
                for (tf, _) in &monads {
                    let s_mat = mask_matrix(n, sf.cell1_map[0].0);
                    let t_mat = mask_matrix(n, tf.cell1_map[0].0);
                    // sigma needs an inclusion from "t then s" into "s then t"
                    let source = bool_then(n, &t_mat, &s_mat);
                    let target = bool_then(n, &s_mat, &t_mat);
                    let oracle_exists = bool_leq(&source, &target);

                    let found = enumerate_laws("pair", &t, &t, &rel, &[sf.clone()], &[tf.clone()], &p)
                        .map_err(estr)?;
                    if found.len() > 1 {
                        return Err(format!(
                            "rel({n}) pair ({}, {}) admits {} laws; inclusions are unique",
                            sf.label,
                            tf.label,
                            found.len()
                        ));
                    }
                    if oracle_exists != (found.len() == 1) {
                        return Err(format!(
                            "rel({n}) pair ({}, {}): library finds {} laws, oracle says {}",
                            sf.label,
                            tf.label,
                            found.len(),
                            if oracle_exists { "one" } else { "none" }
                        ));
                    }
                    if let Some(law) = found.first() {
                        if !is_preorder(n, &target) {
                            return Err(format!(
                                "rel({n}) pair ({}, {}): composite relation is not a preorder",
                                sf.label, tf.label
                            ));
                        }
                        let comp = composite_monad(sf, tf, law.sigma[0], &p).map_err(estr)?;
                        if comp.cell1_map[0].0 != matrix_mask(&target) {
                            return Err(format!(
                                "rel({n}) pair ({}, {}): composite carrier {} disagrees with the oracle matrix {}",
                                sf.label,
                                tf.label,
                                comp.cell1_map[0].0,
                                matrix_mask(&target)
                            ));
                        }
                        admitting += 1;
                    }
                    pairs += 1;
                }
            }
        }
        Ok(format!(
            "{pairs} preorder pairs on carriers of size 1..=3, {admitting} admit a law, exact oracle agreement"
        ))
    })());
}

// Monoid tables with the identity fixed as element 0, stored row-major so
// table[x*k + y] is x*y.

fn monoid_tables(k: usize) -> Vec<Vec<usize>> {
    let free = (k - 1) * (k - 1);
    let mut out = Vec::new();
    let mut table = vec![0usize; k * k];
    for y in 0..k {
        table[y] = y;
    }
    for x in 0..k {
        table[x * k] = x;
    }
    let total = k.pow(free as u32);
    'next: for code in 0..total {
        let mut c = code;
        for x in 1..k {
            for y in 1..k {
                table[x * k + y] = c % k;
                c /= k;
            }
        }
        for a in 0..k {
            for b in 0..k {
                let ab = table[a * k + b];
                for c in 0..k {
                    if table[ab * k + c] != table[a * k + table[b * k + c]] {
                        continue 'next;
                    }
                }
            }
        }
        out.push(table.clone());
    }
    out
}

fn monoid_homs(ka: usize, ta: &[usize], kd: usize, td: &[usize]) -> Vec<Vec<usize>> {
    let free = ka - 1;
    let total = kd.pow(free as u32);
    let mut out = Vec::new();
    'next: for code in 0..total {
        let mut h = vec![0usize; ka];
        let mut c = code;
        for x in 1..ka {
            h[x] = c % kd;
            c /= kd;
        }
        for x in 0..ka {
            for y in 0..ka {
                if h[ta[x * ka + y]] != td[h[x] * kd + h[y]] {
                    continue 'next;
                }
            }
        }
        out.push(h);
    }
    out
}

/// The strict functor between discrete deloopings induced by a monoid
/// homomorphism.
fn delooping_functor(
    label: String,
    dom: &Arc<TwoCategory>,
    cod: &Arc<TwoCategory>,
    h: &[usize],
) -> LaxFunctor {
    let n1 = dom.n_one_cells();
    let cell1_map: Vec<OneCellId> = h.iter().map(|&x| OneCellId(x)).collect();
    let cell2_map: Vec<TwoCellId> = (0..dom.n_two_cells())
        .map(|a| {
            let (f, _) = dom.two_endpoints(TwoCellId(a));
            cod.id2(OneCellId(h[f.0]))
        })
        .collect();
    let mut gamma = vec![None; n1 * n1];
    for g in 0..n1 {
        for f in 0..n1 {
            let image = cod
                .comp1(OneCellId(h[g]), OneCellId(h[f]))
                .expect("deloopings compose totally");
            gamma[g * n1 + f] = Some(cod.id2(image));
        }
    }
    LaxFunctor {
        label,
        dom: Arc::clone(dom),
        cod: Arc::clone(cod),
        obj_map: vec![ObjId(0)],
        cell1_map,
        cell2_map,
        gamma,
        iota: vec![cod.id2(cod.id1(ObjId(0)))],
    }
}

#[test]
fn criterion_03_degenerate_recovery() {
    conclude(3, "degenerate recovery", (|| {
        let p = params();
        let sized: Vec<(usize, Vec<usize>)> = (1..=3)
            .flat_map(|k| monoid_tables(k).into_iter().map(move |t| (k, t)))
            .collect();
        let cats: Vec<Arc<TwoCategory>> = sized
            .iter()
            .enumerate()
            .map(|(i, (k, t))| discrete_monoid_delooping(&format!("mon{i}"), *k, t))
            .collect::<Result<_, _>>()
            .map_err(estr)?;

        let mut instances = 0usize;
        let mut commuting = 0usize;
        for (bi, (kb, tb)) in sized.iter().enumerate() {
            for (ci, (kc, tc)) in sized.iter().enumerate() {
                for (di, (kd, td)) in sized.iter().enumerate() {
                    for hl in monoid_homs(*kb, tb, *kd, td) {
                        let lf = delooping_functor(
                            format!("L{bi}-{di}"),
                            &cats[bi],
                            &cats[di],
                            &hl,
                        );
                        for hm in monoid_homs(*kc, tc, *kd, td) {
                            let mf = delooping_functor(
                                format!("M{ci}-{di}"),
                                &cats[ci],
                                &cats[di],
                                &hm,
                            );
                            let commute = (0..*kb).all(|f| {
                                (0..*kc).all(|g| {
                                    td[hl[f] * kd + hm[g]] == td[hm[g] * kd + hl[f]]
                                })
                            });
                            let found = enumerate_laws(
                                "degenerate",
                                &cats[bi],
                                &cats[ci],
                                &cats[di],
                                &[lf.clone()],
                                &[mf],
                                &p,
                            )
                            .map_err(estr)?;
                            if commute != (found.len() == 1) {
                                return Err(format!(
                                    "monoids ({bi}, {ci}, {di}): images {} but {} laws found",
                                    if commute { "commute" } else { "do not commute" },
                                    found.len()
                                ));
                            }
                            if let Some(law) = found.first() {
                                let d = &cats[di];
                                let nc1 = law.c.n_one_cells();
                                for f in 0..law.b.n_one_cells() {
                                    for g in 0..nc1 {
                                        let src = d
                                            .comp1(OneCellId(hl[f]), OneCellId(hm[g]))
                                            .expect("delooping composes totally");
                                        if law.sigma[f * nc1 + g] != d.id2(src) {
                                            return Err(format!(
                                                "monoids ({bi}, {ci}, {di}): recovered interchanger is not the identity at ({f}, {g})"
                                            ));
                                        }
                                    }
                                }
                                commuting += 1;
                            }
                            instances += 1;
                        }
                    }
                }
            }
        }
        Ok(format!(
            "{instances} functor pairs over {} deloopings, {commuting} commute and recover the identity law",
            cats.len()
        ))
    })());
}

#[test]
fn criterion_04_currying_isomorphism() {
    conclude(4, "currying isomorphism", (|| {
        let p = params();
        let mut laws_done = 0usize;
        let mut morphisms_done = 0usize;
        let mut two_morphisms_done = 0usize;
        for family in [rel2_laws()?, chain_laws()?] {
            for s in &family {
                let rt = check_roundtrip_law(s, &p).map_err(estr)?;
                if !rt.ok {
                    return Err(format!(
                        "law {} does not round-trip:\n{}",
                        s.label,
                        rt.render_text()
                    ));
                }
                let tri = check_triangle(s, &p).map_err(estr)?;
                if !tri.ok {
                    return Err(format!(
                        "triangle fails for {}:\n{}",
                        s.label,
                        tri.render_text()
                    ));
                }
                laws_done += 1;
            }
            for s1 in &family {
                for s2 in &family {
                    let morphisms = enumerate_dist_morphisms(s1, s2, &p).map_err(estr)?;
                    for m in &morphisms {
                        let rt = check_roundtrip_morphism(m, &p).map_err(estr)?;
                        if !rt.ok {
                            return Err(format!(
                                "morphism {} does not round-trip:\n{}",
                                m.label,
                                rt.render_text()
                            ));
                        }
                        morphisms_done += 1;
                    }
                    for m1 in &morphisms {
                        for m2 in &morphisms {
                            let tws = enumerate_dist_2morphisms(m1, m2, &p).map_err(estr)?;
                            for w in &tws {
                                let rt = check_roundtrip_2morphism(w, &p).map_err(estr)?;
                                if !rt.ok {
                                    return Err(format!(
                                        "2-morphism {} does not round-trip:\n{}",
                                        w.label,
                                        rt.render_text()
                                    ));
                                }
                                two_morphisms_done += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok(format!(
            "{laws_done} laws, {morphisms_done} morphisms, {two_morphisms_done} 2-morphisms round-trip; triangle exact"
        ))
    })());
}

#[test]
fn criterion_05_collation_strict_functor() {
    conclude(5, "collation is a strict 2-functor", (|| {
        let budgeted = CheckParams {
            budget: 10_000_000,
            threads: 1,
        };
        let mut notes = Vec::new();
        for family in [rel2_laws()?, chain_laws()?] {
            let label = family[0].d.label().to_string();
            let report = match check_collation_functorial(&family, &budgeted) {
                Ok(report) => report,
                Err(e @ CheckError::BudgetExceeded { .. }) => {
                    return Err(format!("enumeration over {label} ran out of budget: {e}"));
                }
                Err(e) => return Err(estr(e)),
            };
            if !report.ok {
                return Err(format!(
                    "functoriality fails over {label}:\n{}",
                    report.render_text()
                ));
            }
            notes.push(format!("{} laws over {label}", family.len()));
        }
        Ok(notes.join(", "))
    })());
}

#[test]
fn criterion_06_converse_round_trips() {
    conclude(6, "converse round trips", (|| {
        let p = params();
        let mut witnesses = 0usize;
        let mut squares = 0usize;
        for family in [rel2_laws()?, chain_laws()?] {
            let unitary: Vec<&DistributiveLaw> = family
                .iter()
                .filter(|s| s.l.iter().chain(&s.m).all(is_unitary))
                .collect();
            if unitary.is_empty() {
                return Err(format!(
                    "no unitary laws over {}; the sweep would be vacuous",
                    family[0].d.label()
                ));
            }
            for &s in &unitary {
                let kappa = witness_kappa(s, &p).map_err(estr)?;
                if inverse_dist_morphism(&kappa).is_none() {
                    return Err(format!("kappa for {} is not invertible", s.label));
                }
                let bif = collate(s, &p).map_err(estr)?;
                let extracted = extract_law_t(&bif, &p).map_err(estr)?;
                if kappa.src != *s || kappa.tgt != extracted {
                    return Err(format!(
                        "kappa for {} does not connect the law to its extraction",
                        s.label
                    ));
                }
                let lambda = witness_lambda(&bif, &p).map_err(estr)?;
                let inv = inverse_icon(&lambda)
                    .ok_or_else(|| format!("lambda for {} is not invertible", s.label))?;
                let left = compose_oplax(&inv, &lambda).map_err(estr)?;
                let right = compose_oplax(&lambda, &inv).map_err(estr)?;
                if left != identity_oplax(&lambda.src) || right != identity_oplax(&lambda.tgt) {
                    return Err(format!(
                        "lambda inverse for {} is one-sided only",
                        s.label
                    ));
                }
                witnesses += 1;
            }
            // Naturality of both witnesses against every enumerated morphism
            // between unitary laws of the family.
            for &s1 in &unitary {
                for &s2 in &unitary {
                    let k1 = witness_kappa(s1, &p).map_err(estr)?;
                    let k2 = witness_kappa(s2, &p).map_err(estr)?;
                    let b1 = collate(s1, &p).map_err(estr)?;
                    let b2 = collate(s2, &p).map_err(estr)?;
                    let e1 = extract_law_t(&b1, &p).map_err(estr)?;
                    let e2 = extract_law_t(&b2, &p).map_err(estr)?;
                    let kt1 = collate(&e1, &p).map_err(estr)?;
                    let kt2 = collate(&e2, &p).map_err(estr)?;
                    let lam1 = witness_lambda(&b1, &p).map_err(estr)?;
                    let lam2 = witness_lambda(&b2, &p).map_err(estr)?;
                    for m in enumerate_dist_morphisms(s1, s2, &p).map_err(estr)? {
                        let km = collate_morphism(&m, &b1, &b2).map_err(estr)?;
                        let tkm = t_on_morphism(&km, &b1, &b2, &p).map_err(estr)?;
                        let left = compose_dist_morphisms(&tkm, &k1).map_err(estr)?;
                        let right = compose_dist_morphisms(&k2, &m).map_err(estr)?;
                        if left != right {
                            return Err(format!(
                                "kappa is not natural along {} : {} -> {}",
                                m.label, s1.label, s2.label
                            ));
                        }
                        let ktkm = collate_morphism(&tkm, &kt1, &kt2).map_err(estr)?;
                        let lam_left = compose_oplax(&km, &lam1).map_err(estr)?;
                        let lam_right = compose_oplax(&lam2, &ktkm).map_err(estr)?;
                        if lam_left != lam_right {
                            return Err(format!(
                                "lambda is not natural along {} : {} -> {}",
                                m.label, s1.label, s2.label
                            ));
                        }
                        squares += 1;
                    }
                }
            }
        }
        Ok(format!(
            "{witnesses} unitary laws with invertible witnesses, {squares} naturality squares"
        ))
    })());
}

#[test]
fn criterion_07_invertible_sigma_unit_axioms() {
    conclude(7, "invertible interchangers satisfy the unit axioms", (|| {
        let p = params();
        let t = terminal_2category();
        let mut frames = 0usize;
        for d in [
            rel_2category(2).map_err(estr)?,
            truncated_addition_chain(2).map_err(estr)?,
        ] {
            let monads = monads_of(&d, &p).map_err(estr)?;
            for (sf, _) in &monads {
                for (tf, _) in &monads {
                    let report =
                        check_reduced_equivalence(&t, &t, &d, &[sf.clone()], &[tf.clone()], &p)
                            .map_err(estr)?;
                    if !report.ok {
                        return Err(format!(
                            "reduced validator disagrees over {} for ({}, {}):\n{}",
                            d.label(),
                            sf.label,
                            tf.label,
                            report.render_text()
                        ));
                    }
                    frames += 1;
                }
            }
        }
        // A frame whose interchanger candidates are all invertible without
        // being identities: hom-sets are the cyclic group of order 3.
        let loop3 = cyclic_loop(3).map_err(estr)?;
        let id = identity_lax_functor(&loop3);
        let report = check_reduced_equivalence(
            &loop3,
            &loop3,
            &loop3,
            &[id.clone()],
            &[id],
            &p,
        )
        .map_err(estr)?;
        if !report.ok {
            return Err(format!(
                "reduced validator disagrees over {}:\n{}",
                loop3.label(),
                report.render_text()
            ));
        }
        frames += 1;
        Ok(format!(
            "{frames} frames, full and reduced validators accept identical tables"
        ))
    })());
}

#[test]
fn criterion_08_braiding_bijection() {
    conclude(8, "braidings detect commutativity", (|| {
        let p = params();
        let mut total = 0usize;
        let mut commutative = 0usize;
        for k in 1..=4usize {
            for (i, table) in monoid_tables(k).iter().enumerate() {
                let commutes = (0..k).all(|x| (0..k).all(|y| table[x * k + y] == table[y * k + x]));
                let d = discrete_monoid_delooping(&format!("braid{k}-{i}"), k, table)
                    .map_err(estr)?;
                let braidings = find_braidings(&d, &p).map_err(estr)?;
                if braidings.is_empty() == commutes {
                    return Err(format!(
                        "monoid {table:?}: {} braidings found but commutativity is {commutes}",
                        braidings.len()
                    ));
                }
                // The swap candidate itself: identity cells on each product
                let n1 = d.n_one_cells();
                let mut braid = Vec::with_capacity(n1 * n1);
                for f in 0..n1 {
                    for g in 0..n1 {
                        let src = d
                            .comp1(OneCellId(f), OneCellId(g))
                            .expect("delooping composes totally");
                        braid.push(d.id2(src));
                    }
                }
                let law = braiding_to_law(&d, &braid).map_err(estr)?;
                let report = validate_law(&law, &p).map_err(estr)?;
                if report.ok != commutes {
                    return Err(format!(
                        "monoid {table:?}: swap law validates = {}, commutativity = {commutes}",
                        report.ok
                    ));
                }
                total += 1;
                commutative += usize::from(commutes);
            }
        }
        Ok(format!(
            "{total} monoids of size <= 4, {commutative} commutative, braiding existence matches exactly"
        ))
    })());
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .canonicalize()
        .expect("fixtures directory")
}

fn failed_axioms(stdout: &str) -> Vec<String> {
    stdout
        .lines()
        .filter_map(|line| {
            let mut tokens = line.split_whitespace();
            let axiom = tokens.next()?;
            (tokens.next() == Some("FAIL")).then(|| axiom.to_string())
        })
        .collect()
}

#[test]
fn criterion_09_mutation_detection() {
    conclude(9, "mutation detection", (|| {
        // One committed fixture per axiom, each a single-entry corruption of
        // a valid document; validation must name the broken axiom.
        let cases: &[(&str, &str, &str)] = &[
            ("bad-comp1-shape", "validate", "comp1-shape"),
            ("bad-unit1", "validate", "unit1"),
            ("bad-assoc1", "validate", "assoc1"),
            ("bad-parallel-endpoints", "validate", "parallel-endpoints"),
            ("bad-posetal-uniqueness", "validate", "posetal-uniqueness"),
            ("bad-vcomp-shape", "validate", "vcomp-shape"),
            ("bad-hcomp-shape", "validate", "hcomp-shape"),
            ("bad-unit2", "validate", "unit2"),
            ("bad-assoc2", "validate", "assoc2"),
            ("bad-hcomp-functorial", "validate", "hcomp-functorial"),
            ("bad-interchange", "validate", "interchange"),
            ("bad-lax-naturality", "check-functor", "lax-naturality"),
            ("bad-lax-associativity", "check-functor", "lax-associativity"),
            ("bad-lax-unit", "check-functor", "lax-unit"),
            ("bad-oplax-composition", "validate", "oplax-composition"),
            ("bad-oplax-unit", "validate", "oplax-unit"),
            ("bad-oplax-naturality", "validate", "oplax-naturality"),
            ("bad-modification-axiom", "validate", "modification-axiom"),
            ("bad-d1", "check-law", "D1"),
            ("bad-d2", "check-law", "D2"),
            ("bad-d3", "check-law", "D3"),
            ("bad-d4", "check-law", "D4"),
            ("bad-d5", "check-law", "D5"),
            ("bad-d6", "check-law", "D6"),
            ("bad-yang-baxter", "validate", "yang-baxter"),
            ("bad-beth-agreement", "validate", "beth-agreement"),
        ];
        let bin = env!("CARGO_BIN_EXE_distlax");
        let dir = fixtures_dir();
        for (name, command, axiom) in cases {
            let path = dir.join(format!("{name}.dl"));
            let out = Command::new(bin)
                .arg(command)
                .arg(&path)
                .output()
                .map_err(|e| format!("{name}: cannot run the binary: {e}"))?;
            if out.status.code() != Some(1) {
                return Err(format!(
                    "{name}: exit code {:?}, expected 1",
                    out.status.code()
                ));
            }
            let stdout = String::from_utf8(out.stdout)
                .map_err(|_| format!("{name}: report is not UTF-8"))?;
            let failed = failed_axioms(&stdout);
            if !failed.iter().any(|a| a == axiom) {
                return Err(format!(
                    "{name}: expected {axiom} among the failures, report names {failed:?}"
                ));
            }
            // A naturality-only corruption must implicate nothing else.
            if *name == "bad-d5" && failed != ["D5"] {
                return Err(format!(
                    "bad-d5: expected exactly [D5], report names {failed:?}"
                ));
            }
        }
        Ok(format!("{} corruptions each rejected by name", cases.len()))
    })());
}

/// Every stdout byte of every command in the suite, in order. Timing goes
/// to stderr and is deliberately not captured.
fn run_suite(dir: &std::path::Path, threads: &str) -> Result<Vec<(String, Option<i32>, Vec<u8>)>, String> {
    let bin = env!("CARGO_BIN_EXE_distlax");
    let suite: &[&[&str]] = &[
        &["validate", "rel(2)"],
        &["--json", "validate", "rel(2)"],
        &["validate", "cat-w2.dl"],
        &["validate", "bad-interchange.dl"],
        &["--json", "validate", "bad-interchange.dl"],
        &["validate", "dm-yb.dl"],
        &["validate", "d2m-beth.dl"],
        &["check-functor", "fun-m-w2.dl"],
        &["check-law", "law-d5.dl"],
        &["check-law", "bad-d5.dl"],
        &["check-law", "--assume-invertible", "law-yb.dl"],
        &["collate", "law-yb.dl", "-o", "kyb"],
        &["extract-law", "kyb.dl"],
        &["curry", "law-yb.dl", "-o", "nest-yb"],
        &["uncurry", "nest-yb.dl"],
        &["check-triangle", "law-yb.dl"],
        &["--json", "check-triangle", "law-yb.dl"],
        &["check-roundtrip", "law-yb.dl"],
        &["check-roundtrip", "dm-yb.dl"],
        &["check-roundtrip", "d2m-beth.dl"],
        &["check-braiding", "discrete_monoid(0 1 1 1)"],
        &["check-braiding", "discrete_monoid(0 1 1 0)"],
        &["enumerate-monads", "rel(2)"],
        &["enumerate-monads", "ordered_monoid(truncated-add, {0,1,2})"],
        &["enumerate-laws", "frame-yb.dl"],
        &["check-k", "law-yb.dl"],
        &["corrupt", "law-d1.dl", "--seed", "7", "-o", "law-d1-hit"],
    ];
    let mut results = Vec::new();
    for args in suite {
        let out = Command::new(bin)
            .current_dir(dir)
            .args(*args)
            .args(["--threads", threads])
            .output()
            .map_err(|e| format!("{args:?}: cannot run the binary: {e}"))?;
        results.push((format!("{args:?}"), out.status.code(), out.stdout));
    }
    Ok(results)
}

#[test]
fn criterion_10_report_determinism() {
    conclude(10, "report determinism", (|| {
        let staging = tempfile::tempdir().map_err(|e| e.to_string())?;
        for entry in std::fs::read_dir(fixtures_dir()).map_err(|e| e.to_string())? {
            let entry = entry.map_err(|e| e.to_string())?;
            if entry.path().extension().is_some_and(|e| e == "dl") {
                std::fs::copy(entry.path(), staging.path().join(entry.file_name()))
                    .map_err(|e| e.to_string())?;
            }
        }
        let base = run_suite(staging.path(), "1")?;
        for (round, threads) in [("repeat", "1"), ("threads=2", "2"), ("threads=4", "4")] {
            let other = run_suite(staging.path(), threads)?;
            for ((cmd, code_a, bytes_a), (_, code_b, bytes_b)) in base.iter().zip(&other) {
                if code_a != code_b {
                    return Err(format!("{cmd}: exit code differs on {round}"));
                }
                if bytes_a != bytes_b {
                    return Err(format!("{cmd}: stdout differs on {round}"));
                }
            }
        }
        Ok(format!(
            "{} commands byte-identical across repeats and thread counts",
            base.len()
        ))
    })());
}
