//! Lax functors between finite strict 2-categories, oplax transformations,
//! and modifications, each with an exhaustive validator and a brute-force
//! enumerator.
//!
//! A lax functor carries a compositor `gamma[g, f]: F(g) . F(f) -> F(g . f)`
//! and a unitor `iota[x]: id_{F(x)} -> F(id_x)`; both point in the lax
//! direction and are not assumed invertible. An oplax transformation
//! `t: F1 -> F2` carries 1-cell components `t_x: F1(x) -> F2(x)` and 2-cell
//! components `t_g: t_y . F1(g) -> F2(g) . t_x`.
//!
//! Validators return a [`ValidationReport`] with one entry per named
//! constraint; enumeration visits candidates in lexicographic slot order so
//! results are stable across runs and thread counts.

use std::sync::Arc;

use crate::core2::{
    AxiomStatus, CellRef, CheckError, CheckParams, ObjId, OneCellId, Plan, TwoCategory, TwoCellId,
    ValidationReport,
};

/// A lax functor, stored as total maps plus the coherence tables.
///
/// `gamma` is dense over ordered 1-cell pairs of the domain, row `g`, column
/// `f`; an entry must be present exactly when `comp1(g, f)` is defined.
#[derive(Debug, Clone)]
pub struct LaxFunctor {
    pub label: String,
    pub dom: Arc<TwoCategory>,
    pub cod: Arc<TwoCategory>,
    pub obj_map: Vec<ObjId>,
    pub cell1_map: Vec<OneCellId>,
    pub cell2_map: Vec<TwoCellId>,
    pub gamma: Vec<Option<TwoCellId>>,
    pub iota: Vec<TwoCellId>,
}

impl PartialEq for LaxFunctor {
    /// Table equality; labels are presentation only and do not participate.
    fn eq(&self, other: &Self) -> bool {
        cats_equal(&self.dom, &other.dom)
            && cats_equal(&self.cod, &other.cod)
            && self.obj_map == other.obj_map
            && self.cell1_map == other.cell1_map
            && self.cell2_map == other.cell2_map
            && self.gamma == other.gamma
            && self.iota == other.iota
    }
}
impl Eq for LaxFunctor {}

/// Structural equality with a pointer fast path; shared instances are the
/// common case and their tables can be large.
pub(crate) fn cats_equal(x: &Arc<TwoCategory>, y: &Arc<TwoCategory>) -> bool {
    Arc::ptr_eq(x, y) || **x == **y
}

impl LaxFunctor {
    pub fn gamma_at(&self, g: OneCellId, f: OneCellId) -> Option<TwoCellId> {
        self.gamma[g.0 * self.dom.n_one_cells() + f.0]
    }

    pub fn on_obj(&self, x: ObjId) -> ObjId {
        self.obj_map[x.0]
    }
    pub fn on_one(&self, f: OneCellId) -> OneCellId {
        self.cell1_map[f.0]
    }
    pub fn on_two(&self, a: TwoCellId) -> TwoCellId {
        self.cell2_map[a.0]
    }
}

/// The identity functor on `cat`: strict, with identity coherence cells.
pub fn identity_lax_functor(cat: &Arc<TwoCategory>) -> LaxFunctor {
    let n1 = cat.n_one_cells();
    let mut gamma = vec![None; n1 * n1];
    for g in (0..n1).map(OneCellId) {
        for f in (0..n1).map(OneCellId) {
            if let Some(gf) = cat.comp1(g, f) {
                gamma[g.0 * n1 + f.0] = Some(cat.id2(gf));
            }
        }
    }
    LaxFunctor {
        label: format!("id[{}]", cat.label()),
        dom: Arc::clone(cat),
        cod: Arc::clone(cat),
        obj_map: (0..cat.n_objects()).map(ObjId).collect(),
        cell1_map: (0..n1).map(OneCellId).collect(),
        cell2_map: (0..cat.n_two_cells()).map(TwoCellId).collect(),
        gamma,
        iota: (0..cat.n_objects())
            .map(|o| cat.id2(cat.id1(ObjId(o))))
            .collect(),
    }
}

fn check_functor_lengths(f: &LaxFunctor) -> Result<(), CheckError> {
    let dom = &f.dom;
    let checks = [
        ("obj_map", f.obj_map.len(), dom.n_objects()),
        ("cell1_map", f.cell1_map.len(), dom.n_one_cells()),
        ("cell2_map", f.cell2_map.len(), dom.n_two_cells()),
        (
            "gamma",
            f.gamma.len(),
            dom.n_one_cells() * dom.n_one_cells(),
        ),
        ("iota", f.iota.len(), dom.n_objects()),
    ];
    for (name, got, want) in checks {
        if got != want {
            return Err(CheckError::Structural(format!(
                "functor {name} has length {got}, expected {want}"
            )));
        }
    }
    let cod = &f.cod;
    if f.obj_map.iter().any(|o| o.0 >= cod.n_objects())
        || f.cell1_map.iter().any(|c| c.0 >= cod.n_one_cells())
        || f.cell2_map.iter().any(|c| c.0 >= cod.n_two_cells())
        || f.iota.iter().any(|c| c.0 >= cod.n_two_cells())
        || f.gamma
            .iter()
            .flatten()
            .any(|c| c.0 >= cod.n_two_cells())
    {
        return Err(CheckError::Structural(
            "functor table entry out of range for the codomain".to_string(),
        ));
    }
    Ok(())
}

/// Count of horizontally composable 2-cell pairs, for budget planning.
fn hcomposable_pair_count(x: &TwoCategory) -> u64 {
    let n = x.n_objects();
    let mut cells_over = vec![0u64; n * n];
    for a in (0..x.n_two_cells()).map(TwoCellId) {
        let f = x.src2(a);
        cells_over[x.src1(f).0 * n + x.tgt1(f).0] += 1;
    }
    let mut total = 0u64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                total += cells_over[a * n + b] * cells_over[b * n + c];
            }
        }
    }
    total
}

fn composable_triple_count(x: &TwoCategory) -> u64 {
    let mut into = vec![0u64; x.n_objects()];
    let mut from = vec![0u64; x.n_objects()];
    for f in (0..x.n_one_cells()).map(OneCellId) {
        into[x.tgt1(f).0] += 1;
        from[x.src1(f).0] += 1;
    }
    (0..x.n_one_cells())
        .map(|g| into[x.src1(OneCellId(g)).0] * from[x.tgt1(OneCellId(g)).0])
        .sum()
}

fn vcomposable_pair_count(x: &TwoCategory) -> u64 {
    let mut into = vec![0u64; x.n_one_cells()];
    let mut from = vec![0u64; x.n_one_cells()];
    for a in (0..x.n_two_cells()).map(TwoCellId) {
        from[x.src2(a).0] += 1;
        into[x.tgt2(a).0] += 1;
    }
    (0..x.n_one_cells()).map(|f| into[f] * from[f]).sum()
}

pub(crate) fn composable_pair_count(x: &TwoCategory) -> u64 {
    let mut from = vec![0u64; x.n_objects()];
    for f in (0..x.n_one_cells()).map(OneCellId) {
        from[x.src1(f).0] += 1;
    }
    (0..x.n_one_cells())
        .map(|f| from[x.tgt1(OneCellId(f)).0])
        .sum()
}

/// Exact number of primitive checks [`validate_lax_functor`] will charge for
/// a functor out of `dom`. Only the domain shape matters.
pub(crate) fn planned_lax_functor_cost(dom: &TwoCategory) -> u64 {
    let n1 = dom.n_one_cells() as u64;
    let n2 = dom.n_two_cells() as u64;
    let nobj = dom.n_objects() as u64;
    let typing = n1 + n2 + n1 * n1 + nobj;
    typing
        + vcomposable_pair_count(dom)
        + n1
        + hcomposable_pair_count(dom)
        + composable_triple_count(dom)
        + n1 * 2
}

/// Exact charge of [`validate_oplax`] for a transformation over `dom`.
pub(crate) fn planned_oplax_cost(dom: &TwoCategory) -> u64 {
    let n1 = dom.n_one_cells() as u64;
    let n2 = dom.n_two_cells() as u64;
    let nobj = dom.n_objects() as u64;
    (nobj + n1) + composable_pair_count(dom) + nobj + n2
}

/// Exact charge of [`validate_modification`] for a modification over `dom`.
pub(crate) fn planned_modification_cost(dom: &TwoCategory) -> u64 {
    dom.n_objects() as u64 + dom.n_one_cells() as u64
}

/// Check a lax functor: endpoint typing of all five tables, functoriality on
/// hom-categories, then the three coherence constraints.
///
/// Check names, in report order: `functor-typing`, `hom-functorial`,
/// `lax-naturality` (compositor against 2-cells), `lax-associativity`,
/// `lax-unit`.
pub fn validate_lax_functor(
    f: &LaxFunctor,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    check_functor_lengths(f)?;
    let dom = &*f.dom;
    let cod = &*f.cod;
    let n1 = dom.n_one_cells() as u64;
    let n2 = dom.n_two_cells() as u64;
    let nobj = dom.n_objects() as u64;

    let mut report = ValidationReport::new(&f.label);
    let mut plan = Plan::new(&f.label, params);
    plan.charge(planned_lax_functor_cost(dom))?;
    report.charged = plan.total();
    let typing_instances = n1 + n2 + n1 * n1 + nobj;
    let vpairs = vcomposable_pair_count(dom);
    let hpairs = hcomposable_pair_count(dom);
    let triples = composable_triple_count(dom);

    // functor-typing.
    let mut typing: Option<(Vec<CellRef>, String)> = None;
    'typing: {
        for g in (0..dom.n_one_cells()).map(OneCellId) {
            let img = f.on_one(g);
            if cod.src1(img) != f.on_obj(dom.src1(g)) || cod.tgt1(img) != f.on_obj(dom.tgt1(g)) {
                typing = Some((
                    vec![CellRef::One(g)],
                    format!("image {img} has wrong endpoints"),
                ));
                break 'typing;
            }
        }
        for a in (0..dom.n_two_cells()).map(TwoCellId) {
            let img = f.on_two(a);
            if cod.src2(img) != f.on_one(dom.src2(a)) || cod.tgt2(img) != f.on_one(dom.tgt2(a)) {
                typing = Some((
                    vec![CellRef::Two(a)],
                    format!("image {img} has wrong endpoints"),
                ));
                break 'typing;
            }
        }
        for g in (0..dom.n_one_cells()).map(OneCellId) {
            for x in (0..dom.n_one_cells()).map(OneCellId) {
                let entry = f.gamma_at(g, x);
                let witness = vec![CellRef::One(g), CellRef::One(x)];
                match dom.comp1(g, x) {
                    None => {
                        if entry.is_some() {
                            typing = Some((witness, "compositor entry for a non-composable pair".to_string()));
                            break 'typing;
                        }
                    }
                    Some(gx) => {
                        let Some(cell) = entry else {
                            typing = Some((witness, "compositor entry missing".to_string()));
                            break 'typing;
                        };
                        let want_src = cod.comp1(f.on_one(g), f.on_one(x));
                        if want_src != Some(cod.src2(cell)) || cod.tgt2(cell) != f.on_one(gx) {
                            typing = Some((
                                witness,
                                format!("compositor {cell} has wrong endpoints"),
                            ));
                            break 'typing;
                        }
                    }
                }
            }
        }
        for x in (0..dom.n_objects()).map(ObjId) {
            let cell = f.iota[x.0];
            if cod.src2(cell) != cod.id1(f.on_obj(x)) || cod.tgt2(cell) != f.on_one(dom.id1(x)) {
                typing = Some((
                    vec![CellRef::Obj(x)],
                    format!("unitor {cell} has wrong endpoints"),
                ));
                break 'typing;
            }
        }
    }
    let typing_ok = typing.is_none();
    report.push(
        "functor-typing",
        match typing {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass {
                instances: typing_instances,
            },
        },
    );
    if !typing_ok {
        for axiom in [
            "hom-functorial",
            "lax-naturality",
            "lax-associativity",
            "lax-unit",
        ] {
            report.push(
                axiom,
                AxiomStatus::Skipped {
                    reason: "functor-typing failed".to_string(),
                },
            );
        }
        return Ok(report);
    }

    // hom-functorial: F preserves vertical composition and identity 2-cells.
    let mut hom: Option<(Vec<CellRef>, String)> = None;
    'hom: {
        for b in (0..dom.n_two_cells()).map(TwoCellId) {
            for a in (0..dom.n_two_cells()).map(TwoCellId) {
                if !dom.vcomposable(b, a) {
                    continue;
                }
                let lhs = dom.vc(b, a).map(|c| f.on_two(c));
                let rhs = cod.vc(f.on_two(b), f.on_two(a));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l == r => {}
                    (l, r) => {
                        hom = Some((
                            vec![CellRef::Two(b), CellRef::Two(a)],
                            describe_mismatch(l, r),
                        ));
                        break 'hom;
                    }
                }
            }
        }
        for g in (0..dom.n_one_cells()).map(OneCellId) {
            if f.on_two(dom.id2(g)) != cod.id2(f.on_one(g)) {
                hom = Some((
                    vec![CellRef::One(g)],
                    format!(
                        "image of id2({g}) is {}, expected id2({})",
                        f.on_two(dom.id2(g)),
                        f.on_one(g)
                    ),
                ));
                break 'hom;
            }
        }
    }
    push_equation(&mut report, "hom-functorial", hom, vpairs + n1);

    // lax-naturality: gamma commutes with images of horizontal composites.
    let mut nat: Option<(Vec<CellRef>, String)> = None;
    'nat: for b in (0..dom.n_two_cells()).map(TwoCellId) {
        for a in (0..dom.n_two_cells()).map(TwoCellId) {
            if !dom.hcomposable(b, a) {
                continue;
            }
            let (g1, g2) = dom.two_endpoints(b);
            let (f1, f2) = dom.two_endpoints(a);
            let eval = || -> Result<(TwoCellId, TwoCellId), String> {
                let top = f
                    .gamma_at(g2, f2)
                    .ok_or_else(|| format!("gamma({g2}, {f2}) missing"))?;
                let lhs = cod.vc(top, cod.hc(f.on_two(b), f.on_two(a))?)?;
                let bottom = f
                    .gamma_at(g1, f1)
                    .ok_or_else(|| format!("gamma({g1}, {f1}) missing"))?;
                let rhs = cod.vc(f.on_two(dom.hc(b, a)?), bottom)?;
                Ok((lhs, rhs))
            };
            match eval() {
                Ok((l, r)) if l == r => {}
                outcome => {
                    nat = Some((vec![CellRef::Two(b), CellRef::Two(a)], describe(outcome)));
                    break 'nat;
                }
            }
        }
    }
    push_equation(&mut report, "lax-naturality", nat, hpairs);

    // lax-associativity of the compositor.
    let mut assoc: Option<(Vec<CellRef>, String)> = None;
    'assoc: for h in (0..dom.n_one_cells()).map(OneCellId) {
        for g in (0..dom.n_one_cells()).map(OneCellId) {
            if !dom.composable1(h, g) {
                continue;
            }
            for x in (0..dom.n_one_cells()).map(OneCellId) {
                if !dom.composable1(g, x) {
                    continue;
                }
                let eval = || -> Result<(TwoCellId, TwoCellId), String> {
                    let gx = dom.c1(g, x)?;
                    let hg = dom.c1(h, g)?;
                    let inner = f
                        .gamma_at(g, x)
                        .ok_or_else(|| format!("gamma({g}, {x}) missing"))?;
                    let outer = f
                        .gamma_at(h, gx)
                        .ok_or_else(|| format!("gamma({h}, {gx}) missing"))?;
                    let lhs = cod.vc(outer, cod.lw(f.on_one(h), inner)?)?;
                    let inner2 = f
                        .gamma_at(h, g)
                        .ok_or_else(|| format!("gamma({h}, {g}) missing"))?;
                    let outer2 = f
                        .gamma_at(hg, x)
                        .ok_or_else(|| format!("gamma({hg}, {x}) missing"))?;
                    let rhs = cod.vc(outer2, cod.rw(inner2, f.on_one(x))?)?;
                    Ok((lhs, rhs))
                };
                match eval() {
                    Ok((l, r)) if l == r => {}
                    outcome => {
                        assoc = Some((
                            vec![CellRef::One(h), CellRef::One(g), CellRef::One(x)],
                            describe(outcome),
                        ));
                        break 'assoc;
                    }
                }
            }
        }
    }
    push_equation(&mut report, "lax-associativity", assoc, triples);

    // lax-unit: compositor against the unitor on both sides.
    let mut unit: Option<(Vec<CellRef>, String)> = None;
    'unit: for g in (0..dom.n_one_cells()).map(OneCellId) {
        let img = f.on_one(g);
        for right in [true, false] {
            let eval = || -> Result<(TwoCellId, TwoCellId), String> {
                let lhs = if right {
                    let x = dom.src1(g);
                    let gamma = f
                        .gamma_at(g, dom.id1(x))
                        .ok_or_else(|| "unit compositor missing".to_string())?;
                    cod.vc(gamma, cod.hc(cod.id2(img), f.iota[x.0])?)?
                } else {
                    let y = dom.tgt1(g);
                    let gamma = f
                        .gamma_at(dom.id1(y), g)
                        .ok_or_else(|| "unit compositor missing".to_string())?;
                    cod.vc(gamma, cod.hc(f.iota[y.0], cod.id2(img))?)?
                };
                Ok((lhs, cod.id2(img)))
            };
            match eval() {
                Ok((l, r)) if l == r => {}
                outcome => {
                    let side = if right { "right" } else { "left" };
                    unit = Some((
                        vec![CellRef::One(g)],
                        format!("{side} unit: {}", describe(outcome)),
                    ));
                    break 'unit;
                }
            }
        }
    }
    push_equation(&mut report, "lax-unit", unit, n1 * 2);

    Ok(report)
}

fn describe(outcome: Result<(TwoCellId, TwoCellId), String>) -> String {
    match outcome {
        Ok((l, r)) => format!("sides differ: {l} vs {r}"),
        Err(msg) => msg,
    }
}

fn describe_mismatch(l: Result<TwoCellId, String>, r: Result<TwoCellId, String>) -> String {
    match (l, r) {
        (Ok(l), Ok(r)) => format!("sides differ: {l} vs {r}"),
        (Err(msg), _) | (_, Err(msg)) => msg,
    }
}

fn push_equation(
    report: &mut ValidationReport,
    axiom: &str,
    found: Option<(Vec<CellRef>, String)>,
    instances: u64,
) {
    report.push(
        axiom,
        match found {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances },
        },
    );
}

/// True when every compositor and unitor cell has a two-sided inverse.
pub fn is_pseudofunctor(f: &LaxFunctor) -> bool {
    f.gamma
        .iter()
        .flatten()
        .all(|&c| f.cod.is_invertible2(c))
        && is_unitary(f)
}

/// True when every unitor cell has a two-sided inverse.
pub fn is_unitary(f: &LaxFunctor) -> bool {
    f.iota.iter().all(|&c| f.cod.is_invertible2(c))
}

/// An oplax transformation between parallel lax functors.
#[derive(Debug, Clone)]
pub struct OplaxTransformation {
    pub label: String,
    pub src: LaxFunctor,
    pub tgt: LaxFunctor,
    /// Per domain object `x`: the 1-cell `t_x: F1(x) -> F2(x)`.
    pub obj_comp: Vec<OneCellId>,
    /// Per domain 1-cell `g: x -> y`: the 2-cell
    /// `t_g: t_y . F1(g) -> F2(g) . t_x`.
    pub cell_comp: Vec<TwoCellId>,
}

impl PartialEq for OplaxTransformation {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && self.obj_comp == other.obj_comp
            && self.cell_comp == other.cell_comp
    }
}
impl Eq for OplaxTransformation {}

impl OplaxTransformation {
    /// True when every 1-cell component is an identity.
    pub fn is_icon(&self) -> bool {
        self.obj_comp
            .iter()
            .enumerate()
            .all(|(x, &c)| c == self.src.cod.id1(self.src.on_obj(ObjId(x))))
    }
}

pub fn identity_oplax(f: &LaxFunctor) -> OplaxTransformation {
    OplaxTransformation {
        label: format!("id[{}]", f.label),
        src: f.clone(),
        tgt: f.clone(),
        obj_comp: (0..f.dom.n_objects())
            .map(|x| f.cod.id1(f.on_obj(ObjId(x))))
            .collect(),
        cell_comp: (0..f.dom.n_one_cells())
            .map(|g| f.cod.id2(f.on_one(OneCellId(g))))
            .collect(),
    }
}

fn check_oplax_lengths(t: &OplaxTransformation) -> Result<(), CheckError> {
    if !cats_equal(&t.src.dom, &t.tgt.dom) || !cats_equal(&t.src.cod, &t.tgt.cod) {
        return Err(CheckError::Structural(
            "transformation endpoints have different (co)domains".to_string(),
        ));
    }
    let dom = &t.src.dom;
    if t.obj_comp.len() != dom.n_objects() || t.cell_comp.len() != dom.n_one_cells() {
        return Err(CheckError::Structural(
            "transformation component tables have wrong length".to_string(),
        ));
    }
    let cod = &t.src.cod;
    if t.obj_comp.iter().any(|c| c.0 >= cod.n_one_cells())
        || t.cell_comp.iter().any(|c| c.0 >= cod.n_two_cells())
    {
        return Err(CheckError::Structural(
            "transformation component out of range".to_string(),
        ));
    }
    Ok(())
}

/// Check an oplax transformation: component typing, then coherence with the
/// compositors, the unitors, and the 2-cells of the domain.
///
/// Check names, in report order: `transformation-typing`,
/// `oplax-composition`, `oplax-unit`, `oplax-naturality`.
pub fn validate_oplax(
    t: &OplaxTransformation,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    check_oplax_lengths(t)?;
    let dom = &*t.src.dom;
    let cod = &*t.src.cod;
    let f1 = &t.src;
    let f2 = &t.tgt;
    let nobj = dom.n_objects() as u64;
    let n1 = dom.n_one_cells() as u64;
    let n2 = dom.n_two_cells() as u64;

    let mut report = ValidationReport::new(&t.label);
    let mut plan = Plan::new(&t.label, params);
    plan.charge(planned_oplax_cost(dom))?;
    report.charged = plan.total();
    let pairs = composable_pair_count(dom);

    let mut typing: Option<(Vec<CellRef>, String)> = None;
    'typing: {
        for x in (0..dom.n_objects()).map(ObjId) {
            let c = t.obj_comp[x.0];
            if cod.src1(c) != f1.on_obj(x) || cod.tgt1(c) != f2.on_obj(x) {
                typing = Some((
                    vec![CellRef::Obj(x)],
                    format!("component {c} has wrong endpoints"),
                ));
                break 'typing;
            }
        }
        for g in (0..dom.n_one_cells()).map(OneCellId) {
            let c = t.cell_comp[g.0];
            let x = dom.src1(g);
            let y = dom.tgt1(g);
            let want_src = cod.comp1(t.obj_comp[y.0], f1.on_one(g));
            let want_tgt = cod.comp1(f2.on_one(g), t.obj_comp[x.0]);
            if want_src != Some(cod.src2(c)) || want_tgt != Some(cod.tgt2(c)) {
                typing = Some((
                    vec![CellRef::One(g)],
                    format!("component {c} has wrong endpoints"),
                ));
                break 'typing;
            }
        }
    }
    let typing_ok = typing.is_none();
    report.push(
        "transformation-typing",
        match typing {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances: nobj + n1 },
        },
    );
    if !typing_ok {
        for axiom in ["oplax-composition", "oplax-unit", "oplax-naturality"] {
            report.push(
                axiom,
                AxiomStatus::Skipped {
                    reason: "transformation-typing failed".to_string(),
                },
            );
        }
        return Ok(report);
    }

    // oplax-composition: components against the compositors of both ends.
    let mut comp: Option<(Vec<CellRef>, String)> = None;
    'comp: for g in (0..dom.n_one_cells()).map(OneCellId) {
        for x in (0..dom.n_one_cells()).map(OneCellId) {
            if !dom.composable1(g, x) {
                continue;
            }
            // g: Y -> Z after x: X -> Y.
            let eval = || -> Result<(TwoCellId, TwoCellId), String> {
                let gx = dom.c1(g, x)?;
                let z = dom.tgt1(g);
                let g1 = f1
                    .gamma_at(g, x)
                    .ok_or_else(|| format!("gamma1({g}, {x}) missing"))?;
                let lhs = cod.vc(t.cell_comp[gx.0], cod.lw(t.obj_comp[z.0], g1)?)?;
                let first = cod.rw(t.cell_comp[g.0], f1.on_one(x))?;
                let second = cod.lw(f2.on_one(g), t.cell_comp[x.0])?;
                let g2 = f2
                    .gamma_at(g, x)
                    .ok_or_else(|| format!("gamma2({g}, {x}) missing"))?;
                let third = cod.rw(g2, t.obj_comp[dom.src1(x).0])?;
                let rhs = cod.vc(third, cod.vc(second, first)?)?;
                Ok((lhs, rhs))
            };
            match eval() {
                Ok((l, r)) if l == r => {}
                outcome => {
                    comp = Some((vec![CellRef::One(g), CellRef::One(x)], describe(outcome)));
                    break 'comp;
                }
            }
        }
    }
    push_equation(&mut report, "oplax-composition", comp, pairs);

    // oplax-unit: components against the unitors.
    let mut unit: Option<(Vec<CellRef>, String)> = None;
    for x in (0..dom.n_objects()).map(ObjId) {
        let eval = || -> Result<(TwoCellId, TwoCellId), String> {
            let id = dom.id1(x);
            let lhs = cod.vc(t.cell_comp[id.0], cod.lw(t.obj_comp[x.0], f1.iota[x.0])?)?;
            let rhs = cod.rw(f2.iota[x.0], t.obj_comp[x.0])?;
            Ok((lhs, rhs))
        };
        match eval() {
            Ok((l, r)) if l == r => {}
            outcome => {
                unit = Some((vec![CellRef::Obj(x)], describe(outcome)));
                break;
            }
        }
    }
    push_equation(&mut report, "oplax-unit", unit, nobj);

    // oplax-naturality: components against every 2-cell of the domain.
    let mut nat: Option<(Vec<CellRef>, String)> = None;
    for a in (0..dom.n_two_cells()).map(TwoCellId) {
        let (g, g2) = dom.two_endpoints(a);
        let x = dom.src1(g);
        let y = dom.tgt1(g);
        let eval = || -> Result<(TwoCellId, TwoCellId), String> {
            let lhs = cod.vc(t.cell_comp[g2.0], cod.lw(t.obj_comp[y.0], f1.on_two(a))?)?;
            let rhs = cod.vc(cod.rw(f2.on_two(a), t.obj_comp[x.0])?, t.cell_comp[g.0])?;
            Ok((lhs, rhs))
        };
        match eval() {
            Ok((l, r)) if l == r => {}
            outcome => {
                nat = Some((vec![CellRef::Two(a)], describe(outcome)));
                break;
            }
        }
    }
    push_equation(&mut report, "oplax-naturality", nat, n2);

    Ok(report)
}

/// Composite transformation, `t2` after `t1`.
pub fn compose_oplax(t2: &OplaxTransformation, t1: &OplaxTransformation) -> Result<OplaxTransformation, CheckError> {
    if t1.tgt != t2.src {
        return Err(CheckError::Structural(
            "transformations are not composable".to_string(),
        ));
    }
    let dom = &t1.src.dom;
    let cod = &t1.src.cod;
    let mut obj_comp = Vec::with_capacity(dom.n_objects());
    for x in 0..dom.n_objects() {
        obj_comp.push(cod.c1(t2.obj_comp[x], t1.obj_comp[x]).map_err(CheckError::Structural)?);
    }
    let mut cell_comp = Vec::with_capacity(dom.n_one_cells());
    for g in (0..dom.n_one_cells()).map(OneCellId) {
        let x = dom.src1(g);
        let y = dom.tgt1(g);
        let cell = (|| -> Result<TwoCellId, String> {
            let lower = cod.lw(t2.obj_comp[y.0], t1.cell_comp[g.0])?;
            let upper = cod.rw(t2.cell_comp[g.0], t1.obj_comp[x.0])?;
            cod.vc(upper, lower)
        })()
        .map_err(CheckError::Structural)?;
        cell_comp.push(cell);
    }
    Ok(OplaxTransformation {
        label: format!("({}) . ({})", t2.label, t1.label),
        src: t1.src.clone(),
        tgt: t2.tgt.clone(),
        obj_comp,
        cell_comp,
    })
}

/// Two-sided inverse of an icon, if one exists: 1-cell components stay
/// identities and each 2-cell component is replaced by its vertical inverse,
/// then both composites are verified against the identity transformation.
pub fn inverse_icon(t: &OplaxTransformation) -> Option<OplaxTransformation> {
    if !t.is_icon() {
        return None;
    }
    let cod = &t.src.cod;
    let mut cell_comp = Vec::with_capacity(t.cell_comp.len());
    for &c in &t.cell_comp {
        cell_comp.push(cod.inverse2(c)?);
    }
    let candidate = OplaxTransformation {
        label: format!("inv[{}]", t.label),
        src: t.tgt.clone(),
        tgt: t.src.clone(),
        obj_comp: t.obj_comp.clone(),
        cell_comp,
    };
    let left = compose_oplax(&candidate, t).ok()?;
    let right = compose_oplax(t, &candidate).ok()?;
    (left == identity_oplax(&t.src) && right == identity_oplax(&t.tgt)).then_some(candidate)
}

/// A modification between parallel oplax transformations.
#[derive(Debug, Clone)]
pub struct Modification {
    pub label: String,
    pub src: OplaxTransformation,
    pub tgt: OplaxTransformation,
    /// Per domain object `x`: the 2-cell `m_x: s_x -> t_x`.
    pub comp: Vec<TwoCellId>,
}

impl PartialEq for Modification {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.comp == other.comp
    }
}
impl Eq for Modification {}

pub fn identity_modification(t: &OplaxTransformation) -> Modification {
    Modification {
        label: format!("id[{}]", t.label),
        src: t.clone(),
        tgt: t.clone(),
        comp: t
            .obj_comp
            .iter()
            .map(|&c| t.src.cod.id2(c))
            .collect(),
    }
}

/// Check a modification: component typing plus the single coherence axiom
/// against every 1-cell of the domain.
///
/// Check names, in report order: `modification-typing`, `modification-axiom`.
pub fn validate_modification(
    m: &Modification,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    if m.src.src != m.tgt.src || m.src.tgt != m.tgt.tgt {
        return Err(CheckError::Structural(
            "modification endpoints are not parallel transformations".to_string(),
        ));
    }
    let dom = &*m.src.src.dom;
    let cod = &*m.src.src.cod;
    if m.comp.len() != dom.n_objects() {
        return Err(CheckError::Structural(
            "modification component table has wrong length".to_string(),
        ));
    }
    if m.comp.iter().any(|c| c.0 >= cod.n_two_cells()) {
        return Err(CheckError::Structural(
            "modification component out of range".to_string(),
        ));
    }
    let nobj = dom.n_objects() as u64;
    let n1 = dom.n_one_cells() as u64;
    let mut report = ValidationReport::new(&m.label);
    let mut plan = Plan::new(&m.label, params);
    plan.charge(planned_modification_cost(dom))?;
    report.charged = plan.total();

    let mut typing: Option<(Vec<CellRef>, String)> = None;
    for x in (0..dom.n_objects()).map(ObjId) {
        let c = m.comp[x.0];
        if cod.src2(c) != m.src.obj_comp[x.0] || cod.tgt2(c) != m.tgt.obj_comp[x.0] {
            typing = Some((
                vec![CellRef::Obj(x)],
                format!("component {c} has wrong endpoints"),
            ));
            break;
        }
    }
    let typing_ok = typing.is_none();
    report.push(
        "modification-typing",
        match typing {
            Some((witness, detail)) => AxiomStatus::Fail { witness, detail },
            None => AxiomStatus::Pass { instances: nobj },
        },
    );
    if !typing_ok {
        report.push(
            "modification-axiom",
            AxiomStatus::Skipped {
                reason: "modification-typing failed".to_string(),
            },
        );
        return Ok(report);
    }

    let f1 = &m.src.src;
    let f2 = &m.src.tgt;
    let mut axiom: Option<(Vec<CellRef>, String)> = None;
    for g in (0..dom.n_one_cells()).map(OneCellId) {
        let x = dom.src1(g);
        let y = dom.tgt1(g);
        let eval = || -> Result<(TwoCellId, TwoCellId), String> {
            let lhs = cod.vc(m.tgt.cell_comp[g.0], cod.rw(m.comp[y.0], f1.on_one(g))?)?;
            let rhs = cod.vc(cod.lw(f2.on_one(g), m.comp[x.0])?, m.src.cell_comp[g.0])?;
            Ok((lhs, rhs))
        };
        match eval() {
            Ok((l, r)) if l == r => {}
            outcome => {
                axiom = Some((vec![CellRef::One(g)], describe(outcome)));
                break;
            }
        }
    }
    push_equation(&mut report, "modification-axiom", axiom, n1);

    Ok(report)
}

/// Vertical composite of modifications, `m2` after `m1`.
pub fn vcomp_modification(m2: &Modification, m1: &Modification) -> Result<Modification, CheckError> {
    if m1.tgt != m2.src {
        return Err(CheckError::Structural(
            "modifications are not vertically composable".to_string(),
        ));
    }
    let cod = &m1.src.src.cod;
    let comp = m1
        .comp
        .iter()
        .zip(&m2.comp)
        .map(|(&a, &b)| cod.vc(b, a).map_err(CheckError::Structural))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Modification {
        label: format!("({}) . ({})", m2.label, m1.label),
        src: m1.src.clone(),
        tgt: m2.tgt.clone(),
        comp,
    })
}

/// Horizontal composite: `m1` between transformations `F1 -> F2`, `m2`
/// between transformations `F2 -> F3`.
pub fn hcomp_modification(m2: &Modification, m1: &Modification) -> Result<Modification, CheckError> {
    if m1.src.tgt != m2.src.src {
        return Err(CheckError::Structural(
            "modifications are not horizontally composable".to_string(),
        ));
    }
    let cod = &m1.src.src.cod;
    let comp = m1
        .comp
        .iter()
        .zip(&m2.comp)
        .map(|(&a, &b)| cod.hc(b, a).map_err(CheckError::Structural))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Modification {
        label: format!("({}) * ({})", m2.label, m1.label),
        src: compose_oplax(&m2.src, &m1.src)?,
        tgt: compose_oplax(&m2.tgt, &m1.tgt)?,
        comp,
    })
}

/// Tracks total work done by an enumerator: one unit per candidate plus the
/// full validation cost of each, aborting deterministically on overrun.
pub(crate) struct EnumBudget {
    subject: String,
    budget: u64,
    spent: u64,
}

impl EnumBudget {
    pub fn new(subject: &str, params: &CheckParams) -> Self {
        EnumBudget {
            subject: subject.to_string(),
            budget: params.budget,
            spent: 0,
        }
    }

    pub fn spend(&mut self, amount: u64) -> Result<(), CheckError> {
        self.spent = self.spent.saturating_add(amount);
        if self.spent > self.budget {
            Err(CheckError::BudgetExceeded {
                subject: self.subject.clone(),
                needed: self.spent,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    pub fn remaining_params(&self) -> CheckParams {
        CheckParams {
            budget: self.budget - self.spent,
            threads: 1,
        }
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }
}

/// Visit every assignment of one candidate per slot, in lexicographic order
/// with the last slot varying fastest. Slots with no candidates yield no
/// assignments.
pub(crate) fn for_each_assignment<T: Copy, E>(
    slots: &[Vec<T>],
    visit: &mut impl FnMut(&[T]) -> Result<(), E>,
) -> Result<(), E> {
    if slots.iter().any(|s| s.is_empty()) {
        return Ok(());
    }
    let mut index = vec![0usize; slots.len()];
    let mut current: Vec<T> = slots.iter().map(|s| s[0]).collect();
    loop {
        visit(&current)?;
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < slots[pos].len() {
                current[pos] = slots[pos][index[pos]];
                break;
            }
            index[pos] = 0;
            current[pos] = slots[pos][0];
        }
    }
}

/// All lax functors `dom -> cod` that pass [`validate_lax_functor`], in a
/// deterministic lexicographic order over the candidate tables. Candidates
/// are pruned to well-typed tables before validation; images of identity
/// 2-cells are forced to identities up front.
pub fn enumerate_lax_functors(
    dom: &Arc<TwoCategory>,
    cod: &Arc<TwoCategory>,
    params: &CheckParams,
) -> Result<Vec<LaxFunctor>, CheckError> {
    let subject = format!("functors {} -> {}", dom.label(), cod.label());
    let mut budget = EnumBudget::new(&subject, params);
    let mut out: Vec<LaxFunctor> = Vec::new();

    let obj_slots: Vec<Vec<ObjId>> = (0..dom.n_objects())
        .map(|_| (0..cod.n_objects()).map(ObjId).collect())
        .collect();
    let mut err: Option<CheckError> = None;
    for_each_assignment(&obj_slots, &mut |obj_map: &[ObjId]| -> Result<(), ()> {
        let cell1_slots: Vec<Vec<OneCellId>> = (0..dom.n_one_cells())
            .map(|g| {
                let g = OneCellId(g);
                (0..cod.n_one_cells())
                    .map(OneCellId)
                    .filter(|&c| {
                        cod.src1(c) == obj_map[dom.src1(g).0]
                            && cod.tgt1(c) == obj_map[dom.tgt1(g).0]
                    })
                    .collect()
            })
            .collect();
        for_each_assignment(&cell1_slots, &mut |cell1_map: &[OneCellId]| {
            let mut slots: Vec<Vec<TwoCellId>> = Vec::new();
            for a in (0..dom.n_two_cells()).map(TwoCellId) {
                let (s, t) = dom.two_endpoints(a);
                if a == dom.id2(s) {
                    slots.push(vec![cod.id2(cell1_map[s.0])]);
                } else {
                    slots.push(cod.cells_between(cell1_map[s.0], cell1_map[t.0]).to_vec());
                }
            }
            let mut gamma_pairs = Vec::new();
            for g in (0..dom.n_one_cells()).map(OneCellId) {
                for x in (0..dom.n_one_cells()).map(OneCellId) {
                    if let Some(gx) = dom.comp1(g, x) {
                        gamma_pairs.push((g, x));
                        let src = cod.comp1(cell1_map[g.0], cell1_map[x.0]);
                        slots.push(match src {
                            Some(src) => cod.cells_between(src, cell1_map[gx.0]).to_vec(),
                            None => Vec::new(),
                        });
                    }
                }
            }
            for x in (0..dom.n_objects()).map(ObjId) {
                slots.push(
                    cod.cells_between(cod.id1(obj_map[x.0]), cell1_map[dom.id1(x).0])
                        .to_vec(),
                );
            }
            let n2 = dom.n_two_cells();
            for_each_assignment(&slots, &mut |cells: &[TwoCellId]| -> Result<(), ()> {
                if let Err(e) = budget.spend(1) {
                    err = Some(e);
                    return Err(());
                }
                let n1 = dom.n_one_cells();
                let mut gamma = vec![None; n1 * n1];
                for (i, &(g, x)) in gamma_pairs.iter().enumerate() {
                    gamma[g.0 * n1 + x.0] = Some(cells[n2 + i]);
                }
                let candidate = LaxFunctor {
                    label: format!("candidate {}", out.len()),
                    dom: Arc::clone(dom),
                    cod: Arc::clone(cod),
                    obj_map: obj_map.to_vec(),
                    cell1_map: cell1_map.to_vec(),
                    cell2_map: cells[..n2].to_vec(),
                    gamma,
                    iota: cells[n2 + gamma_pairs.len()..].to_vec(),
                };
                match validate_lax_functor(&candidate, &budget.remaining_params()) {
                    Err(e) => {
                        err = Some(e);
                        Err(())
                    }
                    Ok(report) => {
                        if let Err(e) = budget.spend(report.charged) {
                            err = Some(e);
                            return Err(());
                        }
                        if report.ok {
                            let mut f = candidate;
                            f.label = format!("{} -> {} #{}", dom.label(), cod.label(), out.len());
                            out.push(f);
                        }
                        Ok(())
                    }
                }
            })
        })
    })
    .ok();
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// All oplax transformations `f1 -> f2` that pass [`validate_oplax`], in
/// deterministic order.
pub fn enumerate_oplax(
    f1: &LaxFunctor,
    f2: &LaxFunctor,
    params: &CheckParams,
) -> Result<Vec<OplaxTransformation>, CheckError> {
    if !cats_equal(&f1.dom, &f2.dom) || !cats_equal(&f1.cod, &f2.cod) {
        return Err(CheckError::Structural(
            "functors are not parallel".to_string(),
        ));
    }
    let dom = &f1.dom;
    let cod = &f1.cod;
    let subject = format!("transformations {} -> {}", f1.label, f2.label);
    let mut budget = EnumBudget::new(&subject, params);
    let mut out: Vec<OplaxTransformation> = Vec::new();

    let obj_slots: Vec<Vec<OneCellId>> = (0..dom.n_objects())
        .map(|x| {
            let x = ObjId(x);
            (0..cod.n_one_cells())
                .map(OneCellId)
                .filter(|&c| cod.src1(c) == f1.on_obj(x) && cod.tgt1(c) == f2.on_obj(x))
                .collect()
        })
        .collect();
    let mut err: Option<CheckError> = None;
    for_each_assignment(&obj_slots, &mut |obj_comp: &[OneCellId]| -> Result<(), ()> {
        let cell_slots: Vec<Vec<TwoCellId>> = (0..dom.n_one_cells())
            .map(|g| {
                let g = OneCellId(g);
                let x = dom.src1(g);
                let y = dom.tgt1(g);
                match (
                    cod.comp1(obj_comp[y.0], f1.on_one(g)),
                    cod.comp1(f2.on_one(g), obj_comp[x.0]),
                ) {
                    (Some(s), Some(t)) => cod.cells_between(s, t).to_vec(),
                    _ => Vec::new(),
                }
            })
            .collect();
        for_each_assignment(&cell_slots, &mut |cell_comp: &[TwoCellId]| -> Result<(), ()> {
            if let Err(e) = budget.spend(1) {
                err = Some(e);
                return Err(());
            }
            let candidate = OplaxTransformation {
                label: format!("candidate {}", out.len()),
                src: f1.clone(),
                tgt: f2.clone(),
                obj_comp: obj_comp.to_vec(),
                cell_comp: cell_comp.to_vec(),
            };
            match validate_oplax(&candidate, &budget.remaining_params()) {
                Err(e) => {
                    err = Some(e);
                    Err(())
                }
                Ok(report) => {
                    if let Err(e) = budget.spend(report.charged) {
                        err = Some(e);
                        return Err(());
                    }
                    if report.ok {
                        let mut t = candidate;
                        t.label = format!("{} -> {} #{}", f1.label, f2.label, out.len());
                        out.push(t);
                    }
                    Ok(())
                }
            }
        })
    })
    .ok();
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// All modifications `t1 -> t2` that pass [`validate_modification`], in
/// deterministic order.
pub fn enumerate_modifications(
    t1: &OplaxTransformation,
    t2: &OplaxTransformation,
    params: &CheckParams,
) -> Result<Vec<Modification>, CheckError> {
    if t1.src != t2.src || t1.tgt != t2.tgt {
        return Err(CheckError::Structural(
            "transformations are not parallel".to_string(),
        ));
    }
    let cod = &t1.src.cod;
    let subject = format!("modifications {} -> {}", t1.label, t2.label);
    let mut budget = EnumBudget::new(&subject, params);
    let mut out: Vec<Modification> = Vec::new();
    let slots: Vec<Vec<TwoCellId>> = (0..t1.obj_comp.len())
        .map(|x| cod.cells_between(t1.obj_comp[x], t2.obj_comp[x]).to_vec())
        .collect();
    let mut err: Option<CheckError> = None;
    for_each_assignment(&slots, &mut |comp: &[TwoCellId]| -> Result<(), ()> {
        if let Err(e) = budget.spend(1) {
            err = Some(e);
            return Err(());
        }
        let candidate = Modification {
            label: format!("candidate {}", out.len()),
            src: t1.clone(),
            tgt: t2.clone(),
            comp: comp.to_vec(),
        };
        match validate_modification(&candidate, &budget.remaining_params()) {
            Err(e) => {
                err = Some(e);
                Err(())
            }
            Ok(report) => {
                if let Err(e) = budget.spend(report.charged) {
                    err = Some(e);
                    return Err(());
                }
                if report.ok {
                    let mut m = candidate;
                    m.label = format!("{} -> {} #{}", t1.label, t2.label, out.len());
                    out.push(m);
                }
                Ok(())
            }
        }
    })
    .ok();
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core2::terminal_2category;

    #[test]
    fn identity_functor_validates() {
        let t = terminal_2category();
        let id = identity_lax_functor(&t);
        let report = validate_lax_functor(&id, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());
        assert!(is_pseudofunctor(&id));
        assert!(is_unitary(&id));
    }

    #[test]
    fn identity_transformation_validates_and_inverts() {
        let t = terminal_2category();
        let id = identity_lax_functor(&t);
        let tr = identity_oplax(&id);
        let report = validate_oplax(&tr, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());
        assert!(tr.is_icon());
        let inv = inverse_icon(&tr).expect("identity is its own inverse");
        assert_eq!(inv, tr);
    }

    #[test]
    fn terminal_endofunctors_enumerate_to_one() {
        let t = terminal_2category();
        let all = enumerate_lax_functors(&t, &t, &CheckParams::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0], identity_lax_functor(&t));
    }

    #[test]
    fn modification_composition_is_defined() {
        let t = terminal_2category();
        let id = identity_lax_functor(&t);
        let tr = identity_oplax(&id);
        let m = identity_modification(&tr);
        let v = vcomp_modification(&m, &m).unwrap();
        assert_eq!(v.comp, m.comp);
        let h = hcomp_modification(&m, &m).unwrap();
        assert_eq!(h.comp, m.comp);
        let report = validate_modification(&m, &CheckParams::default()).unwrap();
        assert!(report.ok);
    }

    #[test]
    fn assignment_order_is_lexicographic() {
        let slots = vec![vec![0, 1], vec![10, 11, 12]];
        let mut seen = Vec::new();
        for_each_assignment::<i32, ()>(&slots, &mut |a| {
            seen.push((a[0], a[1]));
            Ok(())
        })
        .unwrap();
        assert_eq!(
            seen,
            vec![(0, 10), (0, 11), (0, 12), (1, 10), (1, 11), (1, 12)]
        );
    }
}
