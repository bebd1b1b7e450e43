//! The partial converse to collation: decomposability, extraction of a law
//! from a decomposable unitary bifunctor, the equivalence witnesses, the
//! pseudofunctor shortcut, and the braiding dictionary for delooped
//! monoidal categories.

use std::sync::Arc;

use crate::collation::{
    collate, kappa_b, kappa_c, restrict_left, restrict_left_oplax, restrict_right,
    restrict_right_oplax, Bifunctor,
};
use crate::core2::{
    AxiomStatus, CellRef, CheckError, CheckParams, ObjId, OneCellId, TwoCategory, TwoCellId,
    ValidationReport,
};
use crate::distlaw::{
    sigma_slot_candidates, validate_dist_2morphism, validate_dist_morphism, validate_law,
    validate_law_assuming_invertible, Dist2Morphism, DistMorphism, DistributiveLaw,
};
use crate::functors::{
    cats_equal, for_each_assignment, identity_lax_functor, is_pseudofunctor, is_unitary,
    validate_lax_functor, validate_modification, validate_oplax, EnumBudget, LaxFunctor,
    Modification, OplaxTransformation,
};

/// The compositor cell `P(id, g) . P(f, id) -> P(f, g)` whose invertibility
/// is what decomposability asks for.
fn landing_gamma(bif: &Bifunctor, f: OneCellId, g: OneCellId) -> Result<TwoCellId, CheckError> {
    let b2 = bif.dom_left.tgt1(f);
    let c1 = bif.dom_right.src1(g);
    bif.gamma_at(bif.dom_left.id1(b2), g, f, bif.dom_right.id1(c1))
        .ok_or_else(|| {
            CheckError::Structural(format!(
                "functor {}: compositor missing at ((id, {g}), ({f}, id))",
                bif.p.label
            ))
        })
}

/// The companion compositor `P(f, id) . P(id, g) -> P(f, g)`.
fn departing_gamma(bif: &Bifunctor, f: OneCellId, g: OneCellId) -> Result<TwoCellId, CheckError> {
    let b1 = bif.dom_left.src1(f);
    let c2 = bif.dom_right.tgt1(g);
    bif.gamma_at(f, bif.dom_right.id1(c2), bif.dom_left.id1(b1), g)
        .ok_or_else(|| {
            CheckError::Structural(format!(
                "functor {}: compositor missing at (({f}, id), (id, {g}))",
                bif.p.label
            ))
        })
}

fn refuse_invalid(report: &ValidationReport, what: &str) -> Result<(), CheckError> {
    if report.ok {
        Ok(())
    } else {
        Err(CheckError::Structural(format!(
            "{what} fails {}",
            report.failed_axioms().join(", ")
        )))
    }
}

fn require_unitary(bif: &Bifunctor) -> Result<(), CheckError> {
    if is_unitary(&bif.p) {
        Ok(())
    } else {
        Err(CheckError::Structural(format!(
            "functor {}: decomposability is defined for unitary functors only",
            bif.p.label
        )))
    }
}

/// Decide whether a unitary lax bifunctor is decomposable: every compositor
/// of the form `gamma[(id, g), (f, id)]` must have a vertical inverse. The
/// input must validate and be unitary; the verdict is the report's `ok`
/// flag, with the first non-invertible compositor as witness.
pub fn is_decomposable(
    bif: &Bifunctor,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    let p_report = validate_lax_functor(&bif.p, params)?;
    refuse_invalid(&p_report, &format!("functor {}", bif.p.label))?;
    require_unitary(bif)?;

    let mut report = ValidationReport::new(format!("decomposability of {}", bif.p.label));
    let nb1 = bif.dom_left.n_one_cells();
    let nc1 = bif.dom_right.n_one_cells();
    let mut failure: Option<(Vec<CellRef>, String)> = None;
    for f in (0..nb1).map(OneCellId) {
        for g in (0..nc1).map(OneCellId) {
            let cell = landing_gamma(bif, f, g)?;
            if !bif.p.cod.is_invertible2(cell) && failure.is_none() {
                failure = Some((
                    vec![CellRef::One(f), CellRef::One(g)],
                    format!("compositor at ((id, {g}), ({f}, id)) = {cell} has no vertical inverse"),
                ));
            }
        }
    }
    report.push(
        "decomposability",
        match failure {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass {
                instances: (nb1 * nc1) as u64,
            },
        },
    );
    report.charged = p_report.charged + (nb1 * nc1) as u64;
    Ok(report)
}

/// The extraction tables shared by the unitary and pseudofunctor paths:
/// restrict for the families, pair the two compositors for the interchanger.
fn extract_core(bif: &Bifunctor) -> Result<DistributiveLaw, CheckError> {
    let b = &bif.dom_left;
    let c = &bif.dom_right;
    let d = &bif.p.cod;
    let l = (0..c.n_objects())
        .map(|co| restrict_right(bif, ObjId(co)))
        .collect::<Result<Vec<_>, _>>()?;
    let m = (0..b.n_objects())
        .map(|bo| restrict_left(bif, ObjId(bo)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut sigma = Vec::with_capacity(b.n_one_cells() * c.n_one_cells());
    for f in (0..b.n_one_cells()).map(OneCellId) {
        for g in (0..c.n_one_cells()).map(OneCellId) {
            let landing = landing_gamma(bif, f, g)?;
            let inv = d.inverse2(landing).ok_or_else(|| {
                CheckError::NotInvertible(format!(
                    "compositor at ((id, {g}), ({f}, id)) = {landing} has no vertical inverse"
                ))
            })?;
            let cell = d
                .vcomp(inv, departing_gamma(bif, f, g)?)
                .ok_or_else(|| {
                    CheckError::Structural(format!(
                        "extracted interchanger at ({f}, {g}) does not compose"
                    ))
                })?;
            sigma.push(cell);
        }
    }
    Ok(DistributiveLaw {
        label: format!("extract({})", bif.p.label),
        b: Arc::clone(b),
        c: Arc::clone(c),
        d: Arc::clone(d),
        l,
        m,
        sigma,
    })
}

/// Extract the distributive law of a decomposable unitary lax bifunctor:
/// the families are the two restrictions, the interchanger composes one
/// compositor with the other's inverse. The result is validated in full.
pub fn extract_law_t(
    bif: &Bifunctor,
    params: &CheckParams,
) -> Result<DistributiveLaw, CheckError> {
    let dec = is_decomposable(bif, params)?;
    if !dec.ok {
        let detail = dec
            .violations()
            .map(|c| match &c.status {
                AxiomStatus::Fail { detail, .. } => detail.clone(),
                _ => unreachable!("violations are failures"),
            })
            .collect::<Vec<_>>()
            .join("; ");
        return Err(CheckError::NotInvertible(format!(
            "functor {} is not decomposable: {detail}",
            bif.p.label
        )));
    }
    let law = extract_core(bif)?;
    let report = validate_law(&law, params)?;
    refuse_invalid(&report, &format!("extracted law for {}", bif.p.label))?;
    Ok(law)
}

/// Extraction for pseudofunctors, which are decomposable without being
/// unitary; the reduced validator applies because the extracted
/// interchanger is built from invertible cells.
pub fn extract_law_pseudo(
    bif: &Bifunctor,
    params: &CheckParams,
) -> Result<DistributiveLaw, CheckError> {
    let p_report = validate_lax_functor(&bif.p, params)?;
    refuse_invalid(&p_report, &format!("functor {}", bif.p.label))?;
    if !is_pseudofunctor(&bif.p) {
        return Err(CheckError::Structural(format!(
            "functor {}: not a pseudofunctor",
            bif.p.label
        )));
    }
    let law = extract_core(bif)?;
    let report = validate_law_assuming_invertible(&law, params)?;
    refuse_invalid(&report, &format!("extracted law for {}", bif.p.label))?;
    Ok(law)
}

/// Apply extraction to an oplax transformation between decomposable unitary
/// bifunctors: each family component is a restriction of the input.
pub fn t_on_morphism(
    theta: &OplaxTransformation,
    p1: &Bifunctor,
    p2: &Bifunctor,
    params: &CheckParams,
) -> Result<DistMorphism, CheckError> {
    let t_report = validate_oplax(theta, params)?;
    refuse_invalid(&t_report, &format!("transformation {}", theta.label))?;
    if theta.src != p1.p || theta.tgt != p2.p {
        return Err(CheckError::Structural(format!(
            "transformation {}: endpoints are not the given functors",
            theta.label
        )));
    }
    let src = extract_law_t(p1, params)?;
    let tgt = extract_law_t(p2, params)?;
    let theta_c = (0..src.c.n_objects())
        .map(|c| restrict_right_oplax(theta, p1, p2, ObjId(c)))
        .collect::<Result<Vec<_>, _>>()?;
    let theta_b = (0..src.b.n_objects())
        .map(|b| restrict_left_oplax(theta, p1, p2, ObjId(b)))
        .collect::<Result<Vec<_>, _>>()?;
    let morphism = DistMorphism {
        label: format!("T({})", theta.label),
        src,
        tgt,
        theta_c,
        theta_b,
    };
    let report = validate_dist_morphism(&morphism, params)?;
    refuse_invalid(&report, &format!("extracted morphism for {}", theta.label))?;
    Ok(morphism)
}

/// Apply extraction to a modification between such transformations.
pub fn t_on_2morphism(
    beth: &Modification,
    p1: &Bifunctor,
    p2: &Bifunctor,
    params: &CheckParams,
) -> Result<Dist2Morphism, CheckError> {
    let m_report = validate_modification(beth, params)?;
    refuse_invalid(&m_report, &format!("modification {}", beth.label))?;
    let src = t_on_morphism(&beth.src, p1, p2, params)?;
    let tgt = t_on_morphism(&beth.tgt, p1, p2, params)?;
    let maps = &p1.maps;
    let nbo = p1.dom_left.n_objects();
    let nco = p1.dom_right.n_objects();
    let beth_c = (0..nco)
        .map(|c| Modification {
            label: format!("T({})[{c}]", beth.label),
            src: src.theta_c[c].clone(),
            tgt: tgt.theta_c[c].clone(),
            comp: (0..nbo)
                .map(|b| beth.comp[maps.obj(ObjId(b), ObjId(c)).0])
                .collect(),
        })
        .collect();
    let beth_b = (0..nbo)
        .map(|b| Modification {
            label: format!("T({})[{b}]", beth.label),
            src: src.theta_b[b].clone(),
            tgt: tgt.theta_b[b].clone(),
            comp: (0..nco)
                .map(|c| beth.comp[maps.obj(ObjId(b), ObjId(c)).0])
                .collect(),
        })
        .collect();
    let two = Dist2Morphism {
        label: format!("T({})", beth.label),
        src,
        tgt,
        beth_c,
        beth_b,
    };
    let report = validate_dist_2morphism(&two, params)?;
    refuse_invalid(&report, &format!("extracted 2-morphism for {}", beth.label))?;
    Ok(two)
}

/// The equivalence witness on the bifunctor side: the icon
/// `collate(extract(P)) -> P` with identity 1-cell components and the
/// decomposability compositors as 2-cell components.
pub fn witness_lambda(
    bif: &Bifunctor,
    params: &CheckParams,
) -> Result<OplaxTransformation, CheckError> {
    let law = extract_law_t(bif, params)?;
    let k = collate(&law, params)?;
    let d = &bif.p.cod;
    let dom = &bif.p.dom;
    let obj_comp = (0..dom.n_objects())
        .map(|o| d.id1(bif.p.obj_map[o]))
        .collect();
    let mut cell_comp = Vec::with_capacity(dom.n_one_cells());
    for h in (0..dom.n_one_cells()).map(OneCellId) {
        let (f, g) = bif.maps.split_one(h);
        cell_comp.push(landing_gamma(bif, f, g)?);
    }
    let lambda = OplaxTransformation {
        label: format!("lambda({})", bif.p.label),
        src: k.p,
        tgt: bif.p.clone(),
        obj_comp,
        cell_comp,
    };
    let report = validate_oplax(&lambda, params)?;
    refuse_invalid(&report, &format!("lambda witness for {}", bif.p.label))?;
    Ok(lambda)
}

/// The equivalence witness on the law side: the morphism
/// `s -> extract(collate(s))` whose components are the comparison icons.
/// Defined for unitary families.
pub fn witness_kappa(
    s: &DistributiveLaw,
    params: &CheckParams,
) -> Result<DistMorphism, CheckError> {
    for fam in s.l.iter().chain(&s.m) {
        if !is_unitary(fam) {
            return Err(CheckError::Structural(format!(
                "law {}: family member {} is not unitary",
                s.label, fam.label
            )));
        }
    }
    let bif = collate(s, params)?;
    let tgt = extract_law_t(&bif, params)?;
    let theta_c = (0..s.c.n_objects())
        .map(|c| kappa_c(s, &bif, ObjId(c)))
        .collect::<Result<Vec<_>, _>>()?;
    let theta_b = (0..s.b.n_objects())
        .map(|b| kappa_b(s, &bif, ObjId(b)))
        .collect::<Result<Vec<_>, _>>()?;
    let morphism = DistMorphism {
        label: format!("kappa({})", s.label),
        src: s.clone(),
        tgt,
        theta_c,
        theta_b,
    };
    let report = validate_dist_morphism(&morphism, params)?;
    refuse_invalid(&report, &format!("kappa witness for {}", s.label))?;
    Ok(morphism)
}

/// Interpret an interchanger table as a braiding on a delooped monoidal
/// category: both families are the identity and `sigma[f, g]: f.g -> g.f`
/// is the candidate braiding. No axioms are checked here; the point is that
/// `validate_law` on the result decides whether the candidate braids.
pub fn braiding_to_law(
    cmon: &Arc<TwoCategory>,
    braid: &[TwoCellId],
) -> Result<DistributiveLaw, CheckError> {
    if cmon.n_objects() != 1 {
        return Err(CheckError::Structural(format!(
            "category {}: braidings live on one-object 2-categories",
            cmon.label()
        )));
    }
    let n1 = cmon.n_one_cells();
    if braid.len() != n1 * n1 {
        return Err(CheckError::Structural(format!(
            "braiding table has {} entries for {} 1-cell pairs",
            braid.len(),
            n1 * n1
        )));
    }
    let id = identity_lax_functor(cmon);
    Ok(DistributiveLaw {
        label: format!("braiding on {}", cmon.label()),
        b: Arc::clone(cmon),
        c: Arc::clone(cmon),
        d: Arc::clone(cmon),
        l: vec![id.clone()],
        m: vec![id],
        sigma: braid.to_vec(),
    })
}

/// Read the braiding back off a law whose families are both the identity.
pub fn law_to_braiding(s: &DistributiveLaw) -> Result<Vec<TwoCellId>, CheckError> {
    if !cats_equal(&s.b, &s.c) || !cats_equal(&s.b, &s.d) || s.b.n_objects() != 1 {
        return Err(CheckError::Structural(format!(
            "law {}: not a law over a single delooped category",
            s.label
        )));
    }
    let id = identity_lax_functor(&s.b);
    if s.l != vec![id.clone()] || s.m != vec![id] {
        return Err(CheckError::Structural(format!(
            "law {}: families are not the identity",
            s.label
        )));
    }
    Ok(s.sigma.clone())
}

/// All braidings on a delooped monoidal category, as interchanger tables in
/// enumeration order.
pub fn find_braidings(
    cmon: &Arc<TwoCategory>,
    params: &CheckParams,
) -> Result<Vec<Vec<TwoCellId>>, CheckError> {
    if cmon.n_objects() != 1 {
        return Err(CheckError::Structural(format!(
            "category {}: braidings live on one-object 2-categories",
            cmon.label()
        )));
    }
    let id = identity_lax_functor(cmon);
    let laws = crate::distlaw::enumerate_laws(
        &format!("braiding on {}", cmon.label()),
        cmon,
        cmon,
        cmon,
        &[id.clone()],
        &[id],
        params,
    )?;
    Ok(laws.into_iter().map(|s| s.sigma).collect())
}

/// Compare the full validator against the reduced one over every typed
/// interchanger table for the given families whose entries are all
/// invertible. The two must accept exactly the same tables.
pub fn check_reduced_equivalence(
    b: &Arc<TwoCategory>,
    c: &Arc<TwoCategory>,
    d: &Arc<TwoCategory>,
    l: &[LaxFunctor],
    m: &[LaxFunctor],
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    let slots = sigma_slot_candidates(b, c, d, l, m)?;
    let mut budget = EnumBudget::new("reduced equivalence", params);
    let mut report = ValidationReport::new("reduced validator agreement");
    let mut instances = 0u64;
    let mut failure: Option<(Vec<CellRef>, String)> = None;
    let mut index = 0u64;
    let mut scan_err: Option<CheckError> = None;

    for_each_assignment(&slots, &mut |sigma: &[TwoCellId]| -> Result<(), ()> {
        let step = (|| -> Result<(), CheckError> {
            budget.spend(1)?;
            let candidate_index = index;
            index += 1;
            if sigma.iter().any(|&cell| !d.is_invertible2(cell)) {
                return Ok(());
            }
            let candidate = DistributiveLaw {
                label: format!("candidate #{candidate_index}"),
                b: Arc::clone(b),
                c: Arc::clone(c),
                d: Arc::clone(d),
                l: l.to_vec(),
                m: m.to_vec(),
                sigma: sigma.to_vec(),
            };
            let full = validate_law(&candidate, &budget.remaining_params())?;
            budget.spend(full.charged)?;
            let reduced = validate_law_assuming_invertible(&candidate, &budget.remaining_params())?;
            budget.spend(reduced.charged)?;
            instances += 1;
            if full.ok != reduced.ok && failure.is_none() {
                failure = Some((
                    Vec::new(),
                    format!(
                        "validators disagree on candidate #{candidate_index}: full says {}, reduced says {}",
                        full.ok, reduced.ok
                    ),
                ));
            }
            Ok(())
        })();
        match step {
            Ok(()) => Ok(()),
            Err(e) => {
                scan_err = Some(e);
                Err(())
            }
        }
    })
    .ok();
    if let Some(e) = scan_err {
        return Err(e);
    }

    report.push(
        "reduced-agreement",
        match failure {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances },
        },
    );
    report.charged = budget.spent();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core2::{product, terminal_2category, CheckParams};
    use crate::distlaw::enumerate_laws;
    use crate::functors::inverse_icon;
    use crate::instances::{
        cyclic_loop, discrete_monoid_delooping, monads_of, rel_2category,
        truncated_addition_chain,
    };

    fn params() -> CheckParams {
        CheckParams::default()
    }

    fn terminal_identity_law() -> DistributiveLaw {
        let t = terminal_2category();
        let id = identity_lax_functor(&t);
        DistributiveLaw {
            label: "trivial".to_string(),
            b: Arc::clone(&t),
            c: Arc::clone(&t),
            d: Arc::clone(&t),
            l: vec![id.clone()],
            m: vec![id],
            sigma: vec![TwoCellId(0)],
        }
    }

    #[test]
    fn trivial_extraction_round_trips() {
        let s = terminal_identity_law();
        let bif = collate(&s, &params()).unwrap();
        let dec = is_decomposable(&bif, &params()).unwrap();
        assert!(dec.ok);
        let t = extract_law_t(&bif, &params()).unwrap();
        assert_eq!(t, s);
        let kappa = witness_kappa(&s, &params()).unwrap();
        assert!(crate::distlaw::inverse_dist_morphism(&kappa).is_some());
        let lambda = witness_lambda(&bif, &params()).unwrap();
        assert!(lambda.is_icon());
        assert!(inverse_icon(&lambda).is_some());
    }

    #[test]
    fn unitary_rel_law_has_invertible_witnesses() {
        let rel = rel_2category(2).unwrap();
        let monads = monads_of(&rel, &params()).unwrap();
        let diag = monads
            .iter()
            .find(|(f, _)| f.cell1_map[0].0 == 0b1001)
            .unwrap()
            .0
            .clone();
        let b = Arc::clone(&diag.dom);
        let laws = enumerate_laws(
            "rel2 unitary",
            &b,
            &b,
            &rel,
            &[diag.clone()],
            &[diag],
            &params(),
        )
        .unwrap();
        assert_eq!(laws.len(), 1);
        let s = &laws[0];
        assert!(s.l.iter().chain(&s.m).all(is_unitary));

        let bif = collate(s, &params()).unwrap();
        assert!(is_decomposable(&bif, &params()).unwrap().ok);
        let kappa = witness_kappa(s, &params()).unwrap();
        assert!(crate::distlaw::inverse_dist_morphism(&kappa).is_some());
        let lambda = witness_lambda(&bif, &params()).unwrap();
        assert!(inverse_icon(&lambda).is_some());

        let t = extract_law_t(&bif, &params()).unwrap();
        assert_eq!(t, kappa.tgt);
    }

    /// Search all unitary 1-cell tables for a bifunctor from the product of
    /// two delooped join-semilattices into the truncated chain. Laxity
    /// permits strict inequalities, and any strict one at a mixed pair is a
    /// decomposability failure.
    #[test]
    fn chain_bifunctor_search_finds_a_non_decomposable_witness() {
        let max_op = [0usize, 1, 1, 1];
        let b = discrete_monoid_delooping("max2", 2, &max_op).unwrap();
        let c = discrete_monoid_delooping("max2", 2, &max_op).unwrap();
        let d = truncated_addition_chain(2).unwrap();
        let prod = product(&b, &c).unwrap();
        let maps = crate::core2::ProductMaps::for_factors(&c);

        let mut valid = 0usize;
        let mut non_decomposable = Vec::new();
        for p01 in 0..3usize {
            for p10 in 0..3usize {
                for p11 in 0..3usize {
                    let image = |f: usize, g: usize| -> OneCellId {
                        OneCellId(match (f, g) {
                            (0, 0) => 0,
                            (0, 1) => p01,
                            (1, 0) => p10,
                            (1, 1) => p11,
                            _ => unreachable!("two-element factors"),
                        })
                    };
                    let mut cell1_map = vec![OneCellId(0); prod.n_one_cells()];
                    for f in 0..2 {
                        for g in 0..2 {
                            cell1_map[maps.one(OneCellId(f), OneCellId(g)).0] = image(f, g);
                        }
                    }
                    let cell2_map = (0..prod.n_two_cells())
                        .map(|w| {
                            let h = prod.src2(TwoCellId(w));
                            d.id2(cell1_map[h.0])
                        })
                        .collect();
                    let mut gamma = vec![None; prod.n_one_cells() * prod.n_one_cells()];
                    let mut total = true;
                    for h2 in (0..prod.n_one_cells()).map(OneCellId) {
                        for h1 in (0..prod.n_one_cells()).map(OneCellId) {
                            let composite = prod.comp1(h2, h1).unwrap();
                            let src = d.comp1(cell1_map[h2.0], cell1_map[h1.0]).unwrap();
                            let cells = d.cells_between(src, cell1_map[composite.0]);
                            match cells.first() {
                                Some(&cell) => {
                                    gamma[h2.0 * prod.n_one_cells() + h1.0] = Some(cell)
                                }
                                None => total = false,
                            }
                        }
                    }
                    if !total {
                        continue;
                    }
                    let p = LaxFunctor {
                        label: format!("p({p01},{p10},{p11})"),
                        dom: Arc::clone(&prod),
                        cod: Arc::clone(&d),
                        obj_map: vec![ObjId(0)],
                        cell1_map,
                        cell2_map,
                        gamma,
                        iota: vec![d.id2(d.id1(ObjId(0)))],
                    };
                    let bif = Bifunctor::new(p, Arc::clone(&b), Arc::clone(&c)).unwrap();
                    if !validate_lax_functor(&bif.p, &params()).unwrap().ok {
                        continue;
                    }
                    valid += 1;
                    assert!(is_unitary(&bif.p));
                    let dec = is_decomposable(&bif, &params()).unwrap();
                    if is_pseudofunctor(&bif.p) {
                        assert!(dec.ok, "pseudofunctors are decomposable");
                    }
                    if !dec.ok {
                        non_decomposable.push((p01, p10, p11, dec));
                    }
                }
            }
        }
        assert!(valid > 0);
        let hit = non_decomposable
            .iter()
            .find(|(p01, p10, p11, _)| (*p01, *p10, *p11) == (0, 0, 2))
            .expect("the all-or-nothing table is a witness");
        let dec = &hit.3;
        let violation = dec.violations().next().unwrap();
        match &violation.status {
            AxiomStatus::Fail { witness, .. } => {
                assert_eq!(
                    witness,
                    &vec![CellRef::One(OneCellId(1)), CellRef::One(OneCellId(1))]
                );
            }
            _ => unreachable!("violations are failures"),
        }
    }

    #[test]
    fn braidings_exist_exactly_for_commutative_monoids() {
        let z2 = discrete_monoid_delooping("Z/2", 2, &[0, 1, 1, 0]).unwrap();
        let braidings = find_braidings(&z2, &params()).unwrap();
        assert_eq!(braidings.len(), 1);
        let law = braiding_to_law(&z2, &braidings[0]).unwrap();
        assert!(validate_law(&law, &params()).unwrap().ok);
        assert_eq!(law_to_braiding(&law).unwrap(), braidings[0]);

        // Left-zero pair with an adjoined unit: x.y = x away from the unit,
        // so the monoid is not commutative and no interchanger types.
        let lz = discrete_monoid_delooping("left-zero+1", 3, &[0, 1, 2, 1, 1, 1, 2, 2, 2]).unwrap();
        assert!(find_braidings(&lz, &params()).unwrap().is_empty());

        let terminal_monoid = discrete_monoid_delooping("1", 1, &[0]).unwrap();
        assert_eq!(find_braidings(&terminal_monoid, &params()).unwrap().len(), 1);
    }

    #[test]
    fn braided_collation_extracts_the_braiding_back() {
        let z2 = discrete_monoid_delooping("Z/2", 2, &[0, 1, 1, 0]).unwrap();
        let braidings = find_braidings(&z2, &params()).unwrap();
        let law = braiding_to_law(&z2, &braidings[0]).unwrap();
        let bif = collate(&law, &params()).unwrap();
        assert!(is_pseudofunctor(&bif.p));

        let by_pseudo = extract_law_pseudo(&bif, &params()).unwrap();
        assert_eq!(by_pseudo.sigma, law.sigma);
        let by_unitary = extract_law_t(&bif, &params()).unwrap();
        assert_eq!(by_unitary, law);
    }

    #[test]
    fn reduced_validator_agrees_on_an_invertible_nonposetal_family() {
        let t = terminal_2category();
        let d = cyclic_loop(3).unwrap();
        let monad = LaxFunctor {
            label: "zero monad".to_string(),
            dom: Arc::clone(&t),
            cod: Arc::clone(&d),
            obj_map: vec![ObjId(0)],
            cell1_map: vec![OneCellId(0)],
            cell2_map: vec![TwoCellId(0)],
            gamma: vec![Some(TwoCellId(0))],
            iota: vec![TwoCellId(0)],
        };
        assert!(validate_lax_functor(&monad, &params()).unwrap().ok);
        let report = check_reduced_equivalence(
            &t,
            &t,
            &d,
            &[monad.clone()],
            &[monad],
            &params(),
        )
        .unwrap();
        assert!(report.ok, "{}", report.render_text());
        // Three candidate cells, all invertible in a group.
        assert!(report
            .axioms
            .iter()
            .any(|c| matches!(c.status, AxiomStatus::Pass { instances: 3 })));
    }
}
