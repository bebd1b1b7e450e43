//! Collation of a distributive law into one lax functor out of a product
//! 2-category, the restrictions that recover the two families, and the
//! comparison icons relating them.
//!
//! Collating is strictly lossy bookkeeping: the law's axioms are exactly
//! what makes the assembled compositor tables coherent, so [`collate`]
//! refuses a law that does not validate rather than produce a broken
//! functor. Going the other way is the business of the `converse` module.

use std::sync::Arc;

use crate::core2::{
    product, AxiomStatus, CellRef, CheckError, CheckParams, ObjId, OneCellId, ProductMaps,
    TwoCategory, TwoCellId, ValidationReport,
};
use crate::distlaw::{
    compose_dist_morphisms, enumerate_dist_2morphisms, enumerate_dist_morphisms,
    identity_dist_2morphism, identity_dist_morphism, hcomp_dist_2morphisms, vcomp_dist_2morphisms,
    Dist2Morphism, DistMorphism, DistributiveLaw,
};
use crate::functors::{
    cats_equal, compose_oplax, hcomp_modification, identity_modification, identity_oplax,
    vcomp_modification, EnumBudget, LaxFunctor, Modification, OplaxTransformation,
};

/// A lax functor whose domain is the product of two named 2-categories,
/// remembering the factorisation.
///
/// The index maps are derivable from `dom_right` alone, but carrying them
/// here keeps every caller off the raw row-major arithmetic.
#[derive(Debug, Clone)]
pub struct Bifunctor {
    pub p: LaxFunctor,
    pub maps: ProductMaps,
    pub dom_left: Arc<TwoCategory>,
    pub dom_right: Arc<TwoCategory>,
}

impl PartialEq for Bifunctor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && cats_equal(&self.dom_left, &other.dom_left)
            && cats_equal(&self.dom_right, &other.dom_right)
    }
}
impl Eq for Bifunctor {}

impl Bifunctor {
    /// Wrap an existing lax functor, checking that its domain really is the
    /// product of the stated factors.
    pub fn new(
        p: LaxFunctor,
        dom_left: Arc<TwoCategory>,
        dom_right: Arc<TwoCategory>,
    ) -> Result<Bifunctor, CheckError> {
        let prod = product(&dom_left, &dom_right)?;
        if !cats_equal(&p.dom, &prod) {
            return Err(CheckError::Structural(format!(
                "functor {}: domain is not the product of the stated factors",
                p.label
            )));
        }
        let maps = ProductMaps::for_factors(&dom_right);
        Ok(Bifunctor {
            p,
            maps,
            dom_left,
            dom_right,
        })
    }

    pub fn on_obj(&self, b: ObjId, c: ObjId) -> ObjId {
        self.p.on_obj(self.maps.obj(b, c))
    }

    pub fn on_one(&self, f: OneCellId, g: OneCellId) -> OneCellId {
        self.p.on_one(self.maps.one(f, g))
    }

    pub fn on_two(&self, a: TwoCellId, b: TwoCellId) -> TwoCellId {
        self.p.on_two(self.maps.two(a, b))
    }

    /// Compositor at a pair of product 1-cells, outer pair first.
    pub fn gamma_at(
        &self,
        f2: OneCellId,
        g2: OneCellId,
        f1: OneCellId,
        g1: OneCellId,
    ) -> Option<TwoCellId> {
        self.p.gamma_at(self.maps.one(f2, g2), self.maps.one(f1, g1))
    }

    pub fn iota_at(&self, b: ObjId, c: ObjId) -> TwoCellId {
        self.p.iota[self.maps.obj(b, c).0]
    }
}

fn structural(label: &str, e: String) -> CheckError {
    CheckError::Structural(format!("{label}: {e}"))
}

/// Assemble the single lax functor `B x C -> D` determined by a distributive
/// law. The law is validated first and a failing law is refused.
///
/// On 1-cells the image of `(f, g)` is `M(g)` after `L(f)`; the compositor
/// threads `sigma` between the two family compositors, and the unit is the
/// horizontal pasting of the family units.
pub fn collate(s: &DistributiveLaw, params: &CheckParams) -> Result<Bifunctor, CheckError> {
    let report = validate_for_collation(s, params)?;
    if !report.ok {
        return Err(CheckError::Structural(format!(
            "law {} fails {}; only a valid law collates",
            s.label,
            report.failed_axioms().join(", ")
        )));
    }
    collate_unchecked(s)
}

fn validate_for_collation(
    s: &DistributiveLaw,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    crate::distlaw::validate_law(s, params)
}

/// The table assembly behind [`collate`], shared with callers that have
/// already validated the law through another route.
pub(crate) fn collate_unchecked(s: &DistributiveLaw) -> Result<Bifunctor, CheckError> {
    let label = format!("collate({})", s.label);
    let dom = product(&s.b, &s.c)?;
    let maps = ProductMaps::for_factors(&s.c);
    let d = &s.d;

    let nbo = s.b.n_objects();
    let nco = s.c.n_objects();
    let nb1 = s.b.n_one_cells();
    let nc1 = s.c.n_one_cells();
    let nb2 = s.b.n_two_cells();
    let nc2 = s.c.n_two_cells();

    let mut obj_map = vec![ObjId(0); dom.n_objects()];
    for b in (0..nbo).map(ObjId) {
        for c in (0..nco).map(ObjId) {
            obj_map[maps.obj(b, c).0] = s.l[c.0].on_obj(b);
        }
    }

    let mut cell1_map = vec![OneCellId(0); dom.n_one_cells()];
    for f in (0..nb1).map(OneCellId) {
        let b2 = s.b.tgt1(f);
        for g in (0..nc1).map(OneCellId) {
            let c1 = s.c.src1(g);
            cell1_map[maps.one(f, g).0] = d
                .c1(s.m[b2.0].on_one(g), s.l[c1.0].on_one(f))
                .map_err(|e| structural(&label, e))?;
        }
    }

    let mut cell2_map = vec![TwoCellId(0); dom.n_two_cells()];
    for alpha in (0..nb2).map(TwoCellId) {
        let b2 = s.b.tgt1(s.b.src2(alpha));
        for beta in (0..nc2).map(TwoCellId) {
            let c1 = s.c.src1(s.c.src2(beta));
            cell2_map[maps.two(alpha, beta).0] = d
                .hc(s.m[b2.0].on_two(beta), s.l[c1.0].on_two(alpha))
                .map_err(|e| structural(&label, e))?;
        }
    }

    let n1 = dom.n_one_cells();
    let mut gamma = vec![None; n1 * n1];
    for f2 in (0..nb1).map(OneCellId) {
        for f1 in (0..nb1).map(OneCellId) {
            if !s.b.composable1(f2, f1) {
                continue;
            }
            let b3 = s.b.tgt1(f2);
            for g2 in (0..nc1).map(OneCellId) {
                for g1 in (0..nc1).map(OneCellId) {
                    if !s.c.composable1(g2, g1) {
                        continue;
                    }
                    let c1 = s.c.src1(g1);
                    // M(g2) slides past sigma[f2, g1], then both family
                    // compositors land on top.
                    let cell = (|| -> Result<TwoCellId, String> {
                        let mid = d.rw(
                            d.lw(s.m[b3.0].on_one(g2), s.sigma_at(f2, g1))?,
                            s.l[c1.0].on_one(f1),
                        )?;
                        let top_m = s.m[b3.0]
                            .gamma_at(g2, g1)
                            .ok_or_else(|| format!("M[{b3}] compositor missing at ({g2}, {g1})"))?;
                        let top_l = s.l[c1.0]
                            .gamma_at(f2, f1)
                            .ok_or_else(|| format!("L[{c1}] compositor missing at ({f2}, {f1})"))?;
                        d.vc(d.hc(top_m, top_l)?, mid)
                    })()
                    .map_err(|e| structural(&label, e))?;
                    let outer = maps.one(f2, g2);
                    let inner = maps.one(f1, g1);
                    gamma[outer.0 * n1 + inner.0] = Some(cell);
                }
            }
        }
    }

    let mut iota = vec![TwoCellId(0); dom.n_objects()];
    for b in (0..nbo).map(ObjId) {
        for c in (0..nco).map(ObjId) {
            iota[maps.obj(b, c).0] = d
                .hc(s.m[b.0].iota[c.0], s.l[c.0].iota[b.0])
                .map_err(|e| structural(&label, e))?;
        }
    }

    Ok(Bifunctor {
        p: LaxFunctor {
            label,
            dom,
            cod: Arc::clone(d),
            obj_map,
            cell1_map,
            cell2_map,
            gamma,
            iota,
        },
        maps,
        dom_left: Arc::clone(&s.b),
        dom_right: Arc::clone(&s.c),
    })
}

/// Fix the left argument of a bifunctor at an object `b`, giving the lax
/// functor `P(b, -)` on the right factor. Compositors and units are read off
/// the big table along the `id_b` slice.
pub fn restrict_left(bif: &Bifunctor, b: ObjId) -> Result<LaxFunctor, CheckError> {
    if b.0 >= bif.dom_left.n_objects() {
        return Err(CheckError::Structural(format!(
            "functor {}: no left object {b}",
            bif.p.label
        )));
    }
    let maps = &bif.maps;
    let p = &bif.p;
    let cdom = &bif.dom_right;
    let idb = bif.dom_left.id1(b);
    let id2b = bif.dom_left.id2(idb);

    let nco = cdom.n_objects();
    let nc1 = cdom.n_one_cells();
    let nc2 = cdom.n_two_cells();

    let obj_map = (0..nco)
        .map(|c| p.on_obj(maps.obj(b, ObjId(c))))
        .collect();
    let cell1_map = (0..nc1)
        .map(|g| p.on_one(maps.one(idb, OneCellId(g))))
        .collect();
    let cell2_map = (0..nc2)
        .map(|beta| p.on_two(maps.two(id2b, TwoCellId(beta))))
        .collect();
    let mut gamma = vec![None; nc1 * nc1];
    for g2 in (0..nc1).map(OneCellId) {
        for g1 in (0..nc1).map(OneCellId) {
            gamma[g2.0 * nc1 + g1.0] = p.gamma_at(maps.one(idb, g2), maps.one(idb, g1));
        }
    }
    let iota = (0..nco).map(|c| p.iota[maps.obj(b, ObjId(c)).0]).collect();

    Ok(LaxFunctor {
        label: format!("{}({}, -)", p.label, b),
        dom: Arc::clone(cdom),
        cod: Arc::clone(&p.cod),
        obj_map,
        cell1_map,
        cell2_map,
        gamma,
        iota,
    })
}

/// Fix the right argument of a bifunctor at an object `c`, giving `P(-, c)`
/// on the left factor.
pub fn restrict_right(bif: &Bifunctor, c: ObjId) -> Result<LaxFunctor, CheckError> {
    if c.0 >= bif.dom_right.n_objects() {
        return Err(CheckError::Structural(format!(
            "functor {}: no right object {c}",
            bif.p.label
        )));
    }
    let maps = &bif.maps;
    let p = &bif.p;
    let bdom = &bif.dom_left;
    let idc = bif.dom_right.id1(c);
    let id2c = bif.dom_right.id2(idc);

    let nbo = bdom.n_objects();
    let nb1 = bdom.n_one_cells();
    let nb2 = bdom.n_two_cells();

    let obj_map = (0..nbo)
        .map(|b| p.on_obj(maps.obj(ObjId(b), c)))
        .collect();
    let cell1_map = (0..nb1)
        .map(|f| p.on_one(maps.one(OneCellId(f), idc)))
        .collect();
    let cell2_map = (0..nb2)
        .map(|alpha| p.on_two(maps.two(TwoCellId(alpha), id2c)))
        .collect();
    let mut gamma = vec![None; nb1 * nb1];
    for f2 in (0..nb1).map(OneCellId) {
        for f1 in (0..nb1).map(OneCellId) {
            gamma[f2.0 * nb1 + f1.0] = p.gamma_at(maps.one(f2, idc), maps.one(f1, idc));
        }
    }
    let iota = (0..nbo).map(|b| p.iota[maps.obj(ObjId(b), c).0]).collect();

    Ok(LaxFunctor {
        label: format!("{}(-, {})", p.label, c),
        dom: Arc::clone(bdom),
        cod: Arc::clone(&p.cod),
        obj_map,
        cell1_map,
        cell2_map,
        gamma,
        iota,
    })
}

/// The comparison icon `M[b] -> P(b, -)` for a collated law. Its component
/// at a 1-cell `g` pads `M(g)` with the unit of `L` at the source object.
pub fn kappa_b(s: &DistributiveLaw, bif: &Bifunctor, b: ObjId) -> Result<OplaxTransformation, CheckError> {
    let tgt = restrict_left(bif, b)?;
    let d = &s.d;
    let src = s.m[b.0].clone();
    let obj_comp = (0..s.c.n_objects())
        .map(|c| d.id1(src.on_obj(ObjId(c))))
        .collect();
    let mut cell_comp = Vec::with_capacity(s.c.n_one_cells());
    for g in (0..s.c.n_one_cells()).map(OneCellId) {
        let c1 = s.c.src1(g);
        let cell = d
            .lw(src.on_one(g), s.l[c1.0].iota[b.0])
            .map_err(|e| structural("kappa", e))?;
        cell_comp.push(cell);
    }
    Ok(OplaxTransformation {
        label: format!("kappa[{b}]({})", s.label),
        src,
        tgt,
        obj_comp,
        cell_comp,
    })
}

/// The comparison icon `L[c] -> P(-, c)`, padding `L(f)` with the unit of
/// `M` at the target object.
pub fn kappa_c(s: &DistributiveLaw, bif: &Bifunctor, c: ObjId) -> Result<OplaxTransformation, CheckError> {
    let tgt = restrict_right(bif, c)?;
    let d = &s.d;
    let src = s.l[c.0].clone();
    let obj_comp = (0..s.b.n_objects())
        .map(|b| d.id1(src.on_obj(ObjId(b))))
        .collect();
    let mut cell_comp = Vec::with_capacity(s.b.n_one_cells());
    for f in (0..s.b.n_one_cells()).map(OneCellId) {
        let b2 = s.b.tgt1(f);
        let cell = d
            .rw(s.m[b2.0].iota[c.0], src.on_one(f))
            .map_err(|e| structural("kappa", e))?;
        cell_comp.push(cell);
    }
    Ok(OplaxTransformation {
        label: format!("kappa[{c}]({})", s.label),
        src,
        tgt,
        obj_comp,
        cell_comp,
    })
}

/// Compose two monads on a shared object along an interchange cell: builds
/// the one-point distributive law, validates it, and reads the composite
/// monad off the collated functor. Both inputs must be monads, that is lax
/// functors out of a one-object, one-cell, one-2-cell domain.
pub fn composite_monad(
    s_mon: &LaxFunctor,
    t_mon: &LaxFunctor,
    sigma: TwoCellId,
    params: &CheckParams,
) -> Result<LaxFunctor, CheckError> {
    let b = &s_mon.dom;
    if b.n_objects() != 1 || b.n_one_cells() != 1 || b.n_two_cells() != 1 {
        return Err(CheckError::Structural(format!(
            "functor {}: a monad's domain has exactly one cell per dimension",
            s_mon.label
        )));
    }
    if !cats_equal(b, &t_mon.dom) || !cats_equal(&s_mon.cod, &t_mon.cod) {
        return Err(CheckError::Structural(format!(
            "monads {} and {} do not share a frame",
            s_mon.label, t_mon.label
        )));
    }
    let law = DistributiveLaw {
        label: format!("law({} over {})", t_mon.label, s_mon.label),
        b: Arc::clone(b),
        c: Arc::clone(b),
        d: Arc::clone(&s_mon.cod),
        l: vec![s_mon.clone()],
        m: vec![t_mon.clone()],
        sigma: vec![sigma],
    };
    let bif = collate(&law, params)?;
    // The product of the one-point domain with itself is index-aligned with
    // the domain, so the tables carry over unchanged.
    Ok(LaxFunctor {
        label: format!("({}) . ({})", t_mon.label, s_mon.label),
        dom: Arc::clone(b),
        cod: Arc::clone(&s_mon.cod),
        obj_map: bif.p.obj_map.clone(),
        cell1_map: bif.p.cell1_map.clone(),
        cell2_map: bif.p.cell2_map.clone(),
        gamma: bif.p.gamma.clone(),
        iota: bif.p.iota.clone(),
    })
}

/// Collate a morphism of laws into an oplax transformation between the
/// collated functors. The component at `(f, g)` slides the `B`-side
/// component past `L(f)` and then the `M(g)` image over the `C`-side one.
pub fn collate_morphism(
    th: &DistMorphism,
    src_bif: &Bifunctor,
    tgt_bif: &Bifunctor,
) -> Result<OplaxTransformation, CheckError> {
    let frames_match = cats_equal(&src_bif.dom_left, &th.src.b)
        && cats_equal(&src_bif.dom_right, &th.src.c)
        && cats_equal(&tgt_bif.dom_left, &th.src.b)
        && cats_equal(&tgt_bif.dom_right, &th.src.c);
    if !frames_match {
        return Err(CheckError::Structural(format!(
            "morphism {}: bifunctor factors do not match the law frames",
            th.label
        )));
    }
    let label = format!("collate({})", th.label);
    let maps = &src_bif.maps;
    let d = &th.src.d;
    let nbo = th.src.b.n_objects();
    let nco = th.src.c.n_objects();

    let mut obj_comp = vec![OneCellId(0); src_bif.p.dom.n_objects()];
    for b in (0..nbo).map(ObjId) {
        for c in (0..nco).map(ObjId) {
            obj_comp[maps.obj(b, c).0] = th.grid_component(b, c);
        }
    }

    let mut cell_comp = vec![TwoCellId(0); src_bif.p.dom.n_one_cells()];
    for f in (0..th.src.b.n_one_cells()).map(OneCellId) {
        let b2 = th.src.b.tgt1(f);
        for g in (0..th.src.c.n_one_cells()).map(OneCellId) {
            let c1 = th.src.c.src1(g);
            let cell = (|| -> Result<TwoCellId, String> {
                let step1 = d.rw(th.theta_b[b2.0].cell_comp[g.0], th.src.l[c1.0].on_one(f))?;
                let step2 = d.lw(th.tgt.m[b2.0].on_one(g), th.theta_c[c1.0].cell_comp[f.0])?;
                d.vc(step2, step1)
            })()
            .map_err(|e| structural(&label, e))?;
            cell_comp[maps.one(f, g).0] = cell;
        }
    }

    Ok(OplaxTransformation {
        label,
        src: src_bif.p.clone(),
        tgt: tgt_bif.p.clone(),
        obj_comp,
        cell_comp,
    })
}

/// Collate a 2-morphism of laws into a modification between collated
/// morphisms. Grid agreement makes the `B`-side table the whole content.
pub fn collate_2morphism(
    w: &Dist2Morphism,
    src_coll: &OplaxTransformation,
    tgt_coll: &OplaxTransformation,
    maps: &ProductMaps,
) -> Result<Modification, CheckError> {
    let nbo = w.src.src.b.n_objects();
    let nco = w.src.src.c.n_objects();
    let mut comp = vec![TwoCellId(0); src_coll.src.dom.n_objects()];
    for b in (0..nbo).map(ObjId) {
        for c in (0..nco).map(ObjId) {
            comp[maps.obj(b, c).0] = w.beth_b[b.0].comp[c.0];
        }
    }
    Ok(Modification {
        label: format!("collate({})", w.label),
        src: src_coll.clone(),
        tgt: tgt_coll.clone(),
        comp,
    })
}

/// Restrict an oplax transformation between bifunctors along the left
/// argument fixed at `b`, landing between the two left restrictions.
pub fn restrict_left_oplax(
    t: &OplaxTransformation,
    src_bif: &Bifunctor,
    tgt_bif: &Bifunctor,
    b: ObjId,
) -> Result<OplaxTransformation, CheckError> {
    let src = restrict_left(src_bif, b)?;
    let tgt = restrict_left(tgt_bif, b)?;
    let maps = &src_bif.maps;
    let idb = src_bif.dom_left.id1(b);
    let nco = src_bif.dom_right.n_objects();
    let nc1 = src_bif.dom_right.n_one_cells();
    let obj_comp = (0..nco).map(|c| t.obj_comp[maps.obj(b, ObjId(c)).0]).collect();
    let cell_comp = (0..nc1)
        .map(|g| t.cell_comp[maps.one(idb, OneCellId(g)).0])
        .collect();
    Ok(OplaxTransformation {
        label: format!("{}({}, -)", t.label, b),
        src,
        tgt,
        obj_comp,
        cell_comp,
    })
}

/// Restrict an oplax transformation between bifunctors along the right
/// argument fixed at `c`.
pub fn restrict_right_oplax(
    t: &OplaxTransformation,
    src_bif: &Bifunctor,
    tgt_bif: &Bifunctor,
    c: ObjId,
) -> Result<OplaxTransformation, CheckError> {
    let src = restrict_right(src_bif, c)?;
    let tgt = restrict_right(tgt_bif, c)?;
    let maps = &src_bif.maps;
    let idc = src_bif.dom_right.id1(c);
    let nbo = src_bif.dom_left.n_objects();
    let nb1 = src_bif.dom_left.n_one_cells();
    let obj_comp = (0..nbo).map(|b| t.obj_comp[maps.obj(ObjId(b), c).0]).collect();
    let cell_comp = (0..nb1)
        .map(|f| t.cell_comp[maps.one(OneCellId(f), idc).0])
        .collect();
    Ok(OplaxTransformation {
        label: format!("{}(-, {})", t.label, c),
        src,
        tgt,
        obj_comp,
        cell_comp,
    })
}

/// Check that collation is a strict 2-functor on the sub-2-category of laws
/// spanned by the given list: identities and all three composites are
/// preserved on everything a bounded enumeration finds.
///
/// Work is budgeted per ordered pair of laws: the pair's budget covers the
/// morphism and 2-morphism searches between them and every preservation
/// check whose composite lands in that pair. Exceeding any pair's budget is
/// an error, not a silent truncation.
pub fn check_collation_functorial(
    laws: &[DistributiveLaw],
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    let mut report = ValidationReport::new("collation functoriality");
    if laws.is_empty() {
        for axiom in [
            "identity-1",
            "identity-2",
            "compose-1",
            "compose-2-vertical",
            "compose-2-horizontal",
        ] {
            report.push(
                axiom,
                AxiomStatus::Trivial {
                    reason: "no laws given".to_string(),
                },
            );
        }
        return Ok(report);
    }
    for s in laws {
        let same = cats_equal(&s.b, &laws[0].b)
            && cats_equal(&s.c, &laws[0].c)
            && cats_equal(&s.d, &laws[0].d);
        if !same {
            return Err(CheckError::Structural(format!(
                "laws {} and {} live on different 2-categories",
                laws[0].label, s.label
            )));
        }
    }

    let n = laws.len();
    let bifs = laws
        .iter()
        .map(|s| collate(s, params))
        .collect::<Result<Vec<_>, _>>()?;
    let maps = &bifs[0].maps;

    let mut budgets: Vec<Vec<EnumBudget>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| EnumBudget::new(&format!("collation pair ({i}, {j})"), params))
                .collect()
        })
        .collect();

    // Morphisms between every ordered pair, their collations, then all
    // 2-morphisms between parallel pairs of those, with their collations.
    let mut mor: Vec<Vec<Vec<DistMorphism>>> = vec![vec![Vec::new(); n]; n];
    let mut kmor: Vec<Vec<Vec<OplaxTransformation>>> = vec![vec![Vec::new(); n]; n];
    let mut tw: Vec<Vec<Vec<(usize, usize, Dist2Morphism, Modification)>>> =
        vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let found = enumerate_dist_morphisms(&laws[i], &laws[j], &budgets[i][j].remaining_params())?;
            budgets[i][j].spend(found.len() as u64)?;
            let collated = found
                .iter()
                .map(|m| collate_morphism(m, &bifs[i], &bifs[j]))
                .collect::<Result<Vec<_>, _>>()?;
            for a in 0..found.len() {
                for b in 0..found.len() {
                    let ws = enumerate_dist_2morphisms(
                        &found[a],
                        &found[b],
                        &budgets[i][j].remaining_params(),
                    )?;
                    budgets[i][j].spend(ws.len() as u64)?;
                    for w in ws {
                        let kw = collate_2morphism(&w, &collated[a], &collated[b], maps)?;
                        tw[i][j].push((a, b, w, kw));
                    }
                }
            }
            mor[i][j] = found;
            kmor[i][j] = collated;
        }
    }

    let mut id1_failure: Option<(Vec<CellRef>, String)> = None;
    let mut id1_count = 0u64;
    for i in 0..n {
        budgets[i][i].spend(1)?;
        id1_count += 1;
        let k_id = collate_morphism(&identity_dist_morphism(&laws[i]), &bifs[i], &bifs[i])?;
        if k_id != identity_oplax(&bifs[i].p) && id1_failure.is_none() {
            id1_failure = Some((
                vec![CellRef::Obj(ObjId(i))],
                format!("law {} collates its identity to a non-identity", laws[i].label),
            ));
        }
    }
    report.push(
        "identity-1",
        match id1_failure {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances: id1_count },
        },
    );

    let mut id2_failure: Option<(Vec<CellRef>, String)> = None;
    let mut id2_count = 0u64;
    for i in 0..n {
        for j in 0..n {
            for (idx, m) in mor[i][j].iter().enumerate() {
                budgets[i][j].spend(1)?;
                id2_count += 1;
                let k_id = collate_2morphism(
                    &identity_dist_2morphism(m),
                    &kmor[i][j][idx],
                    &kmor[i][j][idx],
                    maps,
                )?;
                if k_id != identity_modification(&kmor[i][j][idx]) && id2_failure.is_none() {
                    id2_failure = Some((
                        vec![CellRef::Obj(ObjId(i)), CellRef::Obj(ObjId(j))],
                        format!("morphism {} collates its identity to a non-identity", m.label),
                    ));
                }
            }
        }
    }
    report.push(
        "identity-2",
        match id2_failure {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances: id2_count },
        },
    );

    let mut c1_failure: Option<(Vec<CellRef>, String)> = None;
    let mut c1_count = 0u64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for (a, m1) in mor[i][j].iter().enumerate() {
                    for (b, m2) in mor[j][k].iter().enumerate() {
                        budgets[i][k].spend(1)?;
                        c1_count += 1;
                        let composite = compose_dist_morphisms(m2, m1)?;
                        let k_comp = collate_morphism(&composite, &bifs[i], &bifs[k])?;
                        let expected = compose_oplax(&kmor[j][k][b], &kmor[i][j][a])?;
                        if k_comp != expected && c1_failure.is_none() {
                            c1_failure = Some((
                                vec![
                                    CellRef::Obj(ObjId(i)),
                                    CellRef::Obj(ObjId(j)),
                                    CellRef::Obj(ObjId(k)),
                                ],
                                format!(
                                    "collation of ({}) . ({}) differs from the composite of collations",
                                    m2.label, m1.label
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
    report.push(
        "compose-1",
        match c1_failure {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances: c1_count },
        },
    );

    let mut cv_failure: Option<(Vec<CellRef>, String)> = None;
    let mut cv_count = 0u64;
    for i in 0..n {
        for j in 0..n {
            for (a1, b1, w1, kw1) in &tw[i][j] {
                for (a2, b2, w2, kw2) in &tw[i][j] {
                    if b1 != a2 {
                        continue;
                    }
                    budgets[i][j].spend(1)?;
                    cv_count += 1;
                    let composite = vcomp_dist_2morphisms(w2, w1)?;
                    let k_comp = collate_2morphism(
                        &composite,
                        &kmor[i][j][*a1],
                        &kmor[i][j][*b2],
                        maps,
                    )?;
                    let expected = vcomp_modification(kw2, kw1)?;
                    if k_comp != expected && cv_failure.is_none() {
                        cv_failure = Some((
                            vec![CellRef::Obj(ObjId(i)), CellRef::Obj(ObjId(j))],
                            format!(
                                "collation of ({}) . ({}) differs from the vertical composite of collations",
                                w2.label, w1.label
                            ),
                        ));
                    }
                }
            }
        }
    }
    report.push(
        "compose-2-vertical",
        match cv_failure {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances: cv_count },
        },
    );

    let mut ch_failure: Option<(Vec<CellRef>, String)> = None;
    let mut ch_count = 0u64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for (a1, b1, w1, kw1) in &tw[i][j] {
                    for (a2, b2, w2, kw2) in &tw[j][k] {
                        budgets[i][k].spend(1)?;
                        ch_count += 1;
                        let composite = hcomp_dist_2morphisms(w2, w1)?;
                        let src_coll = compose_oplax(&kmor[j][k][*a2], &kmor[i][j][*a1])?;
                        let tgt_coll = compose_oplax(&kmor[j][k][*b2], &kmor[i][j][*b1])?;
                        let k_comp = collate_2morphism(&composite, &src_coll, &tgt_coll, maps)?;
                        let expected = hcomp_modification(kw2, kw1)?;
                        if k_comp != expected && ch_failure.is_none() {
                            ch_failure = Some((
                                vec![
                                    CellRef::Obj(ObjId(i)),
                                    CellRef::Obj(ObjId(j)),
                                    CellRef::Obj(ObjId(k)),
                                ],
                                format!(
                                    "collation of ({}) * ({}) differs from the horizontal composite of collations",
                                    w2.label, w1.label
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
    report.push(
        "compose-2-horizontal",
        match ch_failure {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances: ch_count },
        },
    );

    report.charged = budgets
        .iter()
        .flatten()
        .map(|b| b.spent())
        .sum();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core2::{terminal_2category, validate_2category, CheckParams};
    use crate::distlaw::enumerate_laws;
    use crate::functors::{identity_lax_functor, validate_lax_functor, validate_oplax};
    use crate::instances::{monad_view, monads_of, rel_2category, rel_compose};

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
    fn trivial_law_collates_to_the_identity_on_the_product() {
        let s = terminal_identity_law();
        let bif = collate(&s, &params()).unwrap();
        assert!(validate_2category(&bif.p.dom, &params()).unwrap().ok);
        let report = validate_lax_functor(&bif.p, &params()).unwrap();
        assert!(report.ok, "{}", report.render_text());
        assert_eq!(bif.p.obj_map.len(), 1);
        assert_eq!(bif.p.cell1_map.len(), 1);

        let kb = kappa_b(&s, &bif, ObjId(0)).unwrap();
        assert!(kb.is_icon());
        assert!(validate_oplax(&kb, &params()).unwrap().ok);
        let kc = kappa_c(&s, &bif, ObjId(0)).unwrap();
        assert!(kc.is_icon());
        assert!(validate_oplax(&kc, &params()).unwrap().ok);
    }

    /// Two preorders on two points with a strict inclusion between the two
    /// relational composites: the discrete order and the full relation.
    fn rel2_pair() -> (Arc<TwoCategory>, LaxFunctor, LaxFunctor) {
        let rel = rel_2category(2).unwrap();
        let t = terminal_2category();
        let monads = monads_of(&rel, &params()).unwrap();
        let diag = 0b1001usize;
        let full = 0b1111usize;
        let s_mon = monads
            .iter()
            .find(|(f, _)| f.cell1_map[0].0 == diag)
            .unwrap()
            .0
            .clone();
        let t_mon = monads
            .iter()
            .find(|(f, _)| f.cell1_map[0].0 == full)
            .unwrap()
            .0
            .clone();
        assert!(cats_equal(&s_mon.dom, &t));
        (rel, s_mon, t_mon)
    }

    #[test]
    fn rel_collation_validates_and_kappas_are_icons() {
        let (rel, s_mon, t_mon) = rel2_pair();
        let laws = enumerate_laws(
            "rel2",
            &s_mon.dom,
            &t_mon.dom,
            &rel,
            &[s_mon.clone()],
            &[t_mon.clone()],
            &params(),
        )
        .unwrap();
        assert_eq!(laws.len(), 1);
        let bif = collate(&laws[0], &params()).unwrap();
        let report = validate_lax_functor(&bif.p, &params()).unwrap();
        assert!(report.ok, "{}", report.render_text());

        let kb = kappa_b(&laws[0], &bif, ObjId(0)).unwrap();
        assert!(kb.is_icon());
        let kb_report = validate_oplax(&kb, &params()).unwrap();
        assert!(kb_report.ok, "{}", kb_report.render_text());
        let kc = kappa_c(&laws[0], &bif, ObjId(0)).unwrap();
        assert!(kc.is_icon());
        let kc_report = validate_oplax(&kc, &params()).unwrap();
        assert!(kc_report.ok, "{}", kc_report.render_text());

        // Restrictions recover the two signatures up to unit padding: on
        // 1-cells the left restriction is M(-) after L(id) = M(-) here
        // because L is a constant family on a one-object B.
        let left = restrict_left(&bif, ObjId(0)).unwrap();
        assert!(validate_lax_functor(&left, &params()).unwrap().ok);
        let right = restrict_right(&bif, ObjId(0)).unwrap();
        assert!(validate_lax_functor(&right, &params()).unwrap().ok);
    }

    #[test]
    fn composite_monad_is_the_relational_composite() {
        let (rel, s_mon, t_mon) = rel2_pair();
        let s_rel = s_mon.cell1_map[0];
        let t_rel = t_mon.cell1_map[0];
        // sigma: T;S -> S;T as relations, with T;S meaning T after S.
        let src = rel.comp1(s_rel, t_rel).unwrap();
        let tgt = rel.comp1(t_rel, s_rel).unwrap();
        let sigma = rel.cells_between(src, tgt)[0];
        let comp = composite_monad(&s_mon, &t_mon, sigma, &params()).unwrap();
        let report = validate_lax_functor(&comp, &params()).unwrap();
        assert!(report.ok, "{}", report.render_text());

        // Independent expectation: the composite carrier is the boolean
        // matrix product, and posetality pins mu and eta by endpoints.
        let expected = rel_compose(2, s_rel.0, t_rel.0);
        assert_eq!(comp.cell1_map[0].0, expected);
        let view = monad_view(&comp).unwrap();
        let mu_src = rel.comp1(OneCellId(expected), OneCellId(expected)).unwrap();
        assert_eq!(rel.two_endpoints(view.mu), (mu_src, OneCellId(expected)));
        assert_eq!(
            rel.two_endpoints(view.eta),
            (rel.id1(ObjId(0)), OneCellId(expected))
        );
    }

    #[test]
    fn collation_refuses_a_broken_law() {
        let (rel, s_mon, t_mon) = rel2_pair();
        let b = Arc::clone(&s_mon.dom);
        let laws = enumerate_laws("rel2", &b, &b, &rel, &[s_mon], &[t_mon], &params()).unwrap();
        let mut bad = laws[0].clone();
        // Retype sigma to an unrelated endpoint pair.
        bad.sigma[0] = rel.id2(rel.id1(ObjId(0)));
        let err = collate(&bad, &params()).unwrap_err();
        assert!(matches!(err, CheckError::Structural(_)));
        assert!(err.to_string().contains("sigma-typing"));
    }

    #[test]
    fn functoriality_holds_on_the_trivial_law() {
        let s = terminal_identity_law();
        let report = check_collation_functorial(&[s], &params()).unwrap();
        assert!(report.ok, "{}", report.render_text());
        assert!(!report.axioms.iter().any(|c| matches!(
            c.status,
            AxiomStatus::Trivial { .. } | AxiomStatus::Skipped { .. }
        )));
    }
}
