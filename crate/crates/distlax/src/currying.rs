//! The equivalence between distributive laws and lax functors valued in a
//! 2-category of lax functors, plus the direct uncurrying functor and the
//! triangle tying both to collation.
//!
//! The value 2-category `Lax_op(C, D)` is never built whole: a law only ever
//! touches the finite fragment generated by its own image, so
//! [`LaxOpFragment::generate`] materializes exactly that fragment, closed
//! under the compositions the validators evaluate.

use std::sync::Arc;

use crate::collation::{collate, Bifunctor};
use crate::core2::{
    product, AxiomStatus, CellRef, CheckError, CheckParams, ObjId, OneCellId, Plan, ProductMaps,
    TwoCategory, TwoCategoryData, TwoCellId, ValidationReport,
};
use crate::distlaw::{
    validate_dist_2morphism, validate_dist_morphism, validate_law, Dist2Morphism, DistMorphism,
    DistributiveLaw,
};
use crate::functors::{
    cats_equal, compose_oplax, identity_modification, identity_oplax, hcomp_modification,
    validate_lax_functor, validate_modification, validate_oplax, vcomp_modification, EnumBudget,
    LaxFunctor, Modification, OplaxTransformation,
};

/// A finite sub-2-category of `Lax_op(C, D)`: objects are lax functors
/// `C -> D`, 1-cells oplax transformations, 2-cells modifications, all
/// stored explicitly and indexed by the companion [`TwoCategory`].
///
/// Cell identity is table equality of the underlying data; labels never
/// separate cells. The cell lists are closed under identities and all three
/// compositions, which is what makes `cat`'s tables total.
#[derive(Debug)]
pub struct LaxOpFragment {
    pub c: Arc<TwoCategory>,
    pub d: Arc<TwoCategory>,
    pub objects: Vec<LaxFunctor>,
    pub one_cells: Vec<OplaxTransformation>,
    pub two_cells: Vec<Modification>,
    pub cat: Arc<TwoCategory>,
}

impl LaxOpFragment {
    /// Close the seed cells under identities and composition, validate
    /// everything, and index the result as a [`TwoCategory`].
    ///
    /// Seeds may arrive in any dependency order; endpoints of a seeded cell
    /// are adopted as cells themselves. Everything in the final fragment is
    /// validated, and the fragment category itself must pass
    /// `validate_2category`; any failure is an error.
    pub fn generate(
        c: &Arc<TwoCategory>,
        d: &Arc<TwoCategory>,
        seed_objects: &[LaxFunctor],
        seed_ones: &[OplaxTransformation],
        seed_twos: &[Modification],
        params: &CheckParams,
    ) -> Result<Arc<Self>, CheckError> {
        let mut budget = EnumBudget::new("lax-op fragment", params);
        Self::generate_with_budget(c, d, seed_objects, seed_ones, seed_twos, &mut budget)
    }

    pub(crate) fn generate_with_budget(
        c: &Arc<TwoCategory>,
        d: &Arc<TwoCategory>,
        seed_objects: &[LaxFunctor],
        seed_ones: &[OplaxTransformation],
        seed_twos: &[Modification],
        budget: &mut EnumBudget,
    ) -> Result<Arc<Self>, CheckError> {
        let mut objects: Vec<LaxFunctor> = Vec::new();
        let mut one_cells: Vec<OplaxTransformation> = Vec::new();
        let mut two_cells: Vec<Modification> = Vec::new();

        let adopt_object = |objects: &mut Vec<LaxFunctor>,
                                f: &LaxFunctor,
                                budget: &mut EnumBudget|
         -> Result<(), CheckError> {
            budget.spend(1)?;
            if !cats_equal(&f.dom, c) || !cats_equal(&f.cod, d) {
                return Err(CheckError::Structural(format!(
                    "fragment object {}: wrong domain or codomain",
                    f.label
                )));
            }
            if !objects.iter().any(|x| x == f) {
                objects.push(f.clone());
            }
            Ok(())
        };
        for f in seed_objects {
            adopt_object(&mut objects, f, budget)?;
        }
        for t in seed_ones {
            adopt_object(&mut objects, &t.src, budget)?;
            adopt_object(&mut objects, &t.tgt, budget)?;
            budget.spend(1)?;
            if !one_cells.iter().any(|x| x == t) {
                one_cells.push(t.clone());
            }
        }
        for w in seed_twos {
            for t in [&w.src, &w.tgt] {
                adopt_object(&mut objects, &t.src, budget)?;
                adopt_object(&mut objects, &t.tgt, budget)?;
                budget.spend(1)?;
                if !one_cells.iter().any(|x| x == t) {
                    one_cells.push(t.clone());
                }
            }
            budget.spend(1)?;
            if !two_cells.iter().any(|x| x == w) {
                two_cells.push(w.clone());
            }
        }

        // Fixpoint closure. Each round snapshots the current lists, so
        // composites of this round's additions are picked up next round.
        loop {
            let n_obj = objects.len();
            let n_one = one_cells.len();
            let n_two = two_cells.len();

            for i in 0..n_obj {
                budget.spend(1)?;
                let id = identity_oplax(&objects[i]);
                if !one_cells.iter().any(|x| *x == id) {
                    one_cells.push(id);
                }
            }
            for j in 0..n_one {
                for i in 0..n_one {
                    if one_cells[i].tgt != one_cells[j].src {
                        continue;
                    }
                    budget.spend(1)?;
                    let comp = compose_oplax(&one_cells[j], &one_cells[i])?;
                    if !one_cells.iter().any(|x| *x == comp) {
                        one_cells.push(comp);
                    }
                }
            }
            for i in 0..n_one {
                budget.spend(1)?;
                let id = identity_modification(&one_cells[i]);
                if !two_cells.iter().any(|x| *x == id) {
                    two_cells.push(id);
                }
            }
            for j in 0..n_two {
                for i in 0..n_two {
                    if two_cells[i].tgt == two_cells[j].src {
                        budget.spend(1)?;
                        let comp = vcomp_modification(&two_cells[j], &two_cells[i])?;
                        if !two_cells.iter().any(|x| *x == comp) {
                            two_cells.push(comp);
                        }
                    }
                    if two_cells[i].src.tgt == two_cells[j].src.src {
                        budget.spend(1)?;
                        let comp = hcomp_modification(&two_cells[j], &two_cells[i])?;
                        if !two_cells.iter().any(|x| *x == comp) {
                            two_cells.push(comp);
                        }
                    }
                }
            }

            let grew =
                objects.len() > n_obj || one_cells.len() > n_one || two_cells.len() > n_two;
            if !grew {
                break;
            }
        }

        // Index the closed lists as a 2-category with total tables.
        let one_index = |t: &OplaxTransformation| -> OneCellId {
            OneCellId(one_cells.iter().position(|x| x == t).unwrap())
        };
        let two_index = |w: &Modification| -> TwoCellId {
            TwoCellId(two_cells.iter().position(|x| x == w).unwrap())
        };
        let obj_index = |f: &LaxFunctor| -> ObjId {
            ObjId(objects.iter().position(|x| x == f).unwrap())
        };

        let n1 = one_cells.len();
        let n2 = two_cells.len();
        let one_endpoints = one_cells
            .iter()
            .map(|t| (obj_index(&t.src), obj_index(&t.tgt)))
            .collect();
        let id1 = objects
            .iter()
            .map(|f| one_index(&identity_oplax(f)))
            .collect();
        let mut comp1 = vec![None; n1 * n1];
        for j in 0..n1 {
            for i in 0..n1 {
                if one_cells[i].tgt == one_cells[j].src {
                    budget.spend(1)?;
                    let comp = compose_oplax(&one_cells[j], &one_cells[i])?;
                    comp1[j * n1 + i] = Some(one_index(&comp));
                }
            }
        }
        let two_endpoints = two_cells
            .iter()
            .map(|w| (one_index(&w.src), one_index(&w.tgt)))
            .collect();
        let id2 = one_cells
            .iter()
            .map(|t| two_index(&identity_modification(t)))
            .collect();
        let mut vcomp = vec![None; n2 * n2];
        let mut hcomp = vec![None; n2 * n2];
        for j in 0..n2 {
            for i in 0..n2 {
                if two_cells[i].tgt == two_cells[j].src {
                    budget.spend(1)?;
                    let comp = vcomp_modification(&two_cells[j], &two_cells[i])?;
                    vcomp[j * n2 + i] = Some(two_index(&comp));
                }
                if two_cells[i].src.tgt == two_cells[j].src.src {
                    budget.spend(1)?;
                    let comp = hcomp_modification(&two_cells[j], &two_cells[i])?;
                    hcomp[j * n2 + i] = Some(two_index(&comp));
                }
            }
        }

        let cat = TwoCategory::from_tables(TwoCategoryData {
            label: format!("Lax_op({}, {})[fragment]", c.label(), d.label()),
            n_objects: objects.len(),
            one_cells: one_endpoints,
            id1,
            comp1,
            two_cells: two_endpoints,
            id2,
            vcomp,
            hcomp,
            locally_posetal: false,
        })?;

        let cat_report = crate::core2::validate_2category(&cat, &budget.remaining_params())?;
        budget.spend(cat_report.charged)?;
        if !cat_report.ok {
            return Err(CheckError::Structural(format!(
                "fragment category fails {}",
                cat_report.failed_axioms().join(", ")
            )));
        }
        for f in &objects {
            let report = validate_lax_functor(f, &budget.remaining_params())?;
            budget.spend(report.charged)?;
            if !report.ok {
                return Err(CheckError::Structural(format!(
                    "fragment object {} fails {}",
                    f.label,
                    report.failed_axioms().join(", ")
                )));
            }
        }
        for t in &one_cells {
            let report = validate_oplax(t, &budget.remaining_params())?;
            budget.spend(report.charged)?;
            if !report.ok {
                return Err(CheckError::Structural(format!(
                    "fragment 1-cell {} fails {}",
                    t.label,
                    report.failed_axioms().join(", ")
                )));
            }
        }
        for w in &two_cells {
            let report = validate_modification(w, &budget.remaining_params())?;
            budget.spend(report.charged)?;
            if !report.ok {
                return Err(CheckError::Structural(format!(
                    "fragment 2-cell {} fails {}",
                    w.label,
                    report.failed_axioms().join(", ")
                )));
            }
        }

        Ok(Arc::new(LaxOpFragment {
            c: Arc::clone(c),
            d: Arc::clone(d),
            objects,
            one_cells,
            two_cells,
            cat,
        }))
    }

    pub fn obj_index(&self, f: &LaxFunctor) -> Option<ObjId> {
        self.objects.iter().position(|x| x == f).map(ObjId)
    }

    pub fn one_index(&self, t: &OplaxTransformation) -> Option<OneCellId> {
        self.one_cells.iter().position(|x| x == t).map(OneCellId)
    }

    pub fn two_index(&self, w: &Modification) -> Option<TwoCellId> {
        self.two_cells.iter().position(|x| x == w).map(TwoCellId)
    }

    fn one_index_or_err(&self, t: &OplaxTransformation) -> Result<OneCellId, CheckError> {
        self.one_index(t).ok_or_else(|| {
            CheckError::Structural(format!("fragment has no 1-cell matching {}", t.label))
        })
    }

    fn two_index_or_err(&self, w: &Modification) -> Result<TwoCellId, CheckError> {
        self.two_index(w).ok_or_else(|| {
            CheckError::Structural(format!("fragment has no 2-cell matching {}", w.label))
        })
    }
}

/// A lax functor into a materialized fragment of `Lax_op(C, D)`.
#[derive(Debug, Clone)]
pub struct NestedLaxFunctor {
    pub fragment: Arc<LaxOpFragment>,
    pub outer: LaxFunctor,
}

impl PartialEq for NestedLaxFunctor {
    /// The outer tables carry the fragment category as their codomain, so
    /// comparing them compares the fragments too.
    fn eq(&self, other: &Self) -> bool {
        self.outer == other.outer
    }
}
impl Eq for NestedLaxFunctor {}

/// A morphism of curried laws: an oplax transformation between the outer
/// functors, valued in the shared fragment.
#[derive(Debug, Clone)]
pub struct CurriedMorphism {
    pub fragment: Arc<LaxOpFragment>,
    pub t: OplaxTransformation,
}

impl PartialEq for CurriedMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t
    }
}
impl Eq for CurriedMorphism {}

/// A 2-morphism of curried laws: a modification between curried morphisms.
#[derive(Debug, Clone)]
pub struct Curried2Morphism {
    pub fragment: Arc<LaxOpFragment>,
    pub w: Modification,
}

impl PartialEq for Curried2Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w
    }
}
impl Eq for Curried2Morphism {}

/// The image of a `B` 1-cell under currying: the oplax transformation
/// `M[src f] -> M[tgt f]` whose object component at `c` is `L[c](f)` and
/// whose 2-cell component at `g` is `sigma[f, g]`.
fn q_transformation(s: &DistributiveLaw, f: OneCellId) -> OplaxTransformation {
    let b1 = s.b.src1(f);
    let b2 = s.b.tgt1(f);
    let obj_comp = (0..s.c.n_objects())
        .map(|c| s.l[c].on_one(f))
        .collect();
    let cell_comp = (0..s.c.n_one_cells())
        .map(|g| s.sigma_at(f, OneCellId(g)))
        .collect();
    OplaxTransformation {
        label: format!("Q({f})"),
        src: s.m[b1.0].clone(),
        tgt: s.m[b2.0].clone(),
        obj_comp,
        cell_comp,
    }
}

/// The image of a `B` 2-cell: the modification `Q(src a) -> Q(tgt a)` with
/// component `L[c](a)`.
fn q_cell_modification(s: &DistributiveLaw, a: TwoCellId) -> Modification {
    let comp = (0..s.c.n_objects()).map(|c| s.l[c].on_two(a)).collect();
    Modification {
        label: format!("Q({a})"),
        src: q_transformation(s, s.b.src2(a)),
        tgt: q_transformation(s, s.b.tgt2(a)),
        comp,
    }
}

/// The compositor of the curried functor at a composable pair: the
/// modification `Q(f2) . Q(f1) -> Q(f2 f1)` with component `gamma^{L[c]}`.
fn q_gamma_modification(
    s: &DistributiveLaw,
    f2: OneCellId,
    f1: OneCellId,
) -> Result<Modification, CheckError> {
    let composite = s.b.comp1(f2, f1).ok_or_else(|| {
        CheckError::Structural(format!("1-cells {f2} and {f1} do not compose"))
    })?;
    let src = compose_oplax(&q_transformation(s, f2), &q_transformation(s, f1))?;
    let comp = (0..s.c.n_objects())
        .map(|c| {
            s.l[c].gamma_at(f2, f1).ok_or_else(|| {
                CheckError::Structural(format!("L[{c}] compositor missing at ({f2}, {f1})"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Modification {
        label: format!("gamma^Q({f2}, {f1})"),
        src,
        tgt: q_transformation(s, composite),
        comp,
    })
}

/// The unit of the curried functor at a `B` object: the modification
/// `id -> Q(id_b)` with component `iota^{L[c]}_b`.
fn q_iota_modification(s: &DistributiveLaw, b: ObjId) -> Modification {
    let comp = (0..s.c.n_objects()).map(|c| s.l[c].iota[b.0]).collect();
    Modification {
        label: format!("iota^Q({b})"),
        src: identity_oplax(&s.m[b.0]),
        tgt: q_transformation(s, s.b.id1(b)),
        comp,
    }
}

fn law_seeds(
    s: &DistributiveLaw,
) -> Result<(Vec<LaxFunctor>, Vec<OplaxTransformation>, Vec<Modification>), CheckError> {
    let objects = s.m.clone();
    let ones = (0..s.b.n_one_cells())
        .map(|f| q_transformation(s, OneCellId(f)))
        .collect();
    let mut twos = Vec::new();
    for a in 0..s.b.n_two_cells() {
        twos.push(q_cell_modification(s, TwoCellId(a)));
    }
    for f2 in (0..s.b.n_one_cells()).map(OneCellId) {
        for f1 in (0..s.b.n_one_cells()).map(OneCellId) {
            if s.b.composable1(f2, f1) {
                twos.push(q_gamma_modification(s, f2, f1)?);
            }
        }
    }
    for b in 0..s.b.n_objects() {
        twos.push(q_iota_modification(s, ObjId(b)));
    }
    Ok((objects, ones, twos))
}

/// Assemble the outer functor of a curried law against a fragment that
/// contains its image.
fn build_outer(s: &DistributiveLaw, fragment: &LaxOpFragment) -> Result<LaxFunctor, CheckError> {
    let nb1 = s.b.n_one_cells();
    let obj_map = s
        .m
        .iter()
        .map(|m| {
            fragment.obj_index(m).ok_or_else(|| {
                CheckError::Structural(format!("fragment has no object matching {}", m.label))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cell1_map = (0..nb1)
        .map(|f| fragment.one_index_or_err(&q_transformation(s, OneCellId(f))))
        .collect::<Result<Vec<_>, _>>()?;
    let cell2_map = (0..s.b.n_two_cells())
        .map(|a| fragment.two_index_or_err(&q_cell_modification(s, TwoCellId(a))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut gamma = vec![None; nb1 * nb1];
    for f2 in (0..nb1).map(OneCellId) {
        for f1 in (0..nb1).map(OneCellId) {
            if s.b.composable1(f2, f1) {
                let cell = fragment.two_index_or_err(&q_gamma_modification(s, f2, f1)?)?;
                gamma[f2.0 * nb1 + f1.0] = Some(cell);
            }
        }
    }
    let iota = (0..s.b.n_objects())
        .map(|b| fragment.two_index_or_err(&q_iota_modification(s, ObjId(b))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LaxFunctor {
        label: format!("curry({})", s.label),
        dom: Arc::clone(&s.b),
        cod: Arc::clone(&fragment.cat),
        obj_map,
        cell1_map,
        cell2_map,
        gamma,
        iota,
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

/// Curry a distributive law into a lax functor `B -> Lax_op(C, D)`. The law
/// is validated first; the result is validated against the generated
/// fragment before being returned.
pub fn curry_law(
    s: &DistributiveLaw,
    params: &CheckParams,
) -> Result<NestedLaxFunctor, CheckError> {
    let mut budget = EnumBudget::new(&format!("curry {}", s.label), params);
    let law_report = validate_law(s, &budget.remaining_params())?;
    budget.spend(law_report.charged)?;
    refuse_invalid(&law_report, &format!("law {}", s.label))?;

    let (objects, ones, twos) = law_seeds(s)?;
    let fragment =
        LaxOpFragment::generate_with_budget(&s.c, &s.d, &objects, &ones, &twos, &mut budget)?;
    let outer = build_outer(s, &fragment)?;
    let report = validate_lax_functor(&outer, &budget.remaining_params())?;
    budget.spend(report.charged)?;
    refuse_invalid(&report, &format!("curried functor for {}", s.label))?;
    Ok(NestedLaxFunctor { fragment, outer })
}

/// Read the distributive law back off a nested functor. Inverse to
/// [`curry_law`] on the nose: every table is extracted, none recomputed.
pub fn uncurry_nested(q: &NestedLaxFunctor) -> Result<DistributiveLaw, CheckError> {
    let outer = &q.outer;
    if !cats_equal(&outer.cod, &q.fragment.cat) {
        return Err(CheckError::Structural(format!(
            "functor {}: codomain is not the carried fragment",
            outer.label
        )));
    }
    let b = &outer.dom;
    let c = &q.fragment.c;
    let d = &q.fragment.d;
    let nb1 = b.n_one_cells();
    let nc1 = c.n_one_cells();

    let m: Vec<LaxFunctor> = outer
        .obj_map
        .iter()
        .map(|o| q.fragment.objects[o.0].clone())
        .collect();
    let q_at = |f: OneCellId| &q.fragment.one_cells[outer.on_one(f).0];

    let mut l = Vec::with_capacity(c.n_objects());
    for cobj in (0..c.n_objects()).map(ObjId) {
        let obj_map = (0..b.n_objects()).map(|bo| m[bo].on_obj(cobj)).collect();
        let cell1_map = (0..nb1)
            .map(|f| q_at(OneCellId(f)).obj_comp[cobj.0])
            .collect();
        let cell2_map = (0..b.n_two_cells())
            .map(|a| q.fragment.two_cells[outer.on_two(TwoCellId(a)).0].comp[cobj.0])
            .collect();
        let mut gamma = vec![None; nb1 * nb1];
        for f2 in (0..nb1).map(OneCellId) {
            for f1 in (0..nb1).map(OneCellId) {
                gamma[f2.0 * nb1 + f1.0] = outer
                    .gamma_at(f2, f1)
                    .map(|w| q.fragment.two_cells[w.0].comp[cobj.0]);
            }
        }
        let iota = (0..b.n_objects())
            .map(|bo| q.fragment.two_cells[outer.iota[bo].0].comp[cobj.0])
            .collect();
        l.push(LaxFunctor {
            label: format!("uncurry({})[{cobj}]", outer.label),
            dom: Arc::clone(b),
            cod: Arc::clone(d),
            obj_map,
            cell1_map,
            cell2_map,
            gamma,
            iota,
        });
    }

    let mut sigma = Vec::with_capacity(nb1 * nc1);
    for f in (0..nb1).map(OneCellId) {
        for g in 0..nc1 {
            sigma.push(q_at(f).cell_comp[g]);
        }
    }

    Ok(DistributiveLaw {
        label: format!("uncurry({})", outer.label),
        b: Arc::clone(b),
        c: Arc::clone(c),
        d: Arc::clone(d),
        l,
        m,
        sigma,
    })
}

/// The curried form of a law morphism at a `B` 1-cell: the modification
/// whose component at `c` is `theta^C[c]`'s component at `f`.
fn morphism_hat_modification(
    m: &DistMorphism,
    f: OneCellId,
    q_src: impl Fn(OneCellId) -> OplaxTransformation,
    q_tgt: impl Fn(OneCellId) -> OplaxTransformation,
) -> Result<Modification, CheckError> {
    let b1 = m.src.b.src1(f);
    let b2 = m.src.b.tgt1(f);
    let src = compose_oplax(&m.theta_b[b2.0].clone(), &q_src(f))?;
    let tgt = compose_oplax(&q_tgt(f), &m.theta_b[b1.0].clone())?;
    let comp = (0..m.src.c.n_objects())
        .map(|c| m.theta_c[c].cell_comp[f.0])
        .collect();
    Ok(Modification {
        label: format!("theta-hat({f})"),
        src,
        tgt,
        comp,
    })
}

fn morphism_seeds(
    m: &DistMorphism,
) -> Result<(Vec<LaxFunctor>, Vec<OplaxTransformation>, Vec<Modification>), CheckError> {
    let (mut objects, mut ones, mut twos) = law_seeds(&m.src)?;
    let (o2, t2, w2) = law_seeds(&m.tgt)?;
    objects.extend(o2);
    ones.extend(t2);
    twos.extend(w2);
    ones.extend(m.theta_b.iter().cloned());
    for f in (0..m.src.b.n_one_cells()).map(OneCellId) {
        twos.push(morphism_hat_modification(
            m,
            f,
            |f| q_transformation(&m.src, f),
            |f| q_transformation(&m.tgt, f),
        )?);
    }
    Ok((objects, ones, twos))
}

fn build_curried_transformation(
    m: &DistMorphism,
    fragment: &LaxOpFragment,
) -> Result<OplaxTransformation, CheckError> {
    let src = build_outer(&m.src, fragment)?;
    let tgt = build_outer(&m.tgt, fragment)?;
    let obj_comp = m
        .theta_b
        .iter()
        .map(|t| fragment.one_index_or_err(t))
        .collect::<Result<Vec<_>, _>>()?;
    let cell_comp = (0..m.src.b.n_one_cells())
        .map(|f| {
            let hat = morphism_hat_modification(
                m,
                OneCellId(f),
                |f| q_transformation(&m.src, f),
                |f| q_transformation(&m.tgt, f),
            )?;
            fragment.two_index_or_err(&hat)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OplaxTransformation {
        label: format!("curry({})", m.label),
        src,
        tgt,
        obj_comp,
        cell_comp,
    })
}

/// Curry a morphism of laws into an oplax transformation between the
/// curried functors, over a fragment generated from both laws and the
/// morphism's components.
pub fn curry_morphism(
    m: &DistMorphism,
    params: &CheckParams,
) -> Result<CurriedMorphism, CheckError> {
    let mut budget = EnumBudget::new(&format!("curry {}", m.label), params);
    let report = validate_dist_morphism(m, &budget.remaining_params())?;
    budget.spend(report.charged)?;
    refuse_invalid(&report, &format!("morphism {}", m.label))?;

    let (objects, ones, twos) = morphism_seeds(m)?;
    let fragment = LaxOpFragment::generate_with_budget(
        &m.src.c,
        &m.src.d,
        &objects,
        &ones,
        &twos,
        &mut budget,
    )?;
    let t = build_curried_transformation(m, &fragment)?;
    let t_report = validate_oplax(&t, &budget.remaining_params())?;
    budget.spend(t_report.charged)?;
    refuse_invalid(&t_report, &format!("curried morphism for {}", m.label))?;
    Ok(CurriedMorphism { fragment, t })
}

/// Read a law morphism back off a curried one.
pub fn uncurry_morphism(cm: &CurriedMorphism) -> Result<DistMorphism, CheckError> {
    let src_law = uncurry_nested(&NestedLaxFunctor {
        fragment: Arc::clone(&cm.fragment),
        outer: cm.t.src.clone(),
    })?;
    let tgt_law = uncurry_nested(&NestedLaxFunctor {
        fragment: Arc::clone(&cm.fragment),
        outer: cm.t.tgt.clone(),
    })?;
    let theta_b: Vec<OplaxTransformation> = cm
        .t
        .obj_comp
        .iter()
        .map(|o| cm.fragment.one_cells[o.0].clone())
        .collect();
    let nb1 = src_law.b.n_one_cells();
    let mut theta_c = Vec::with_capacity(src_law.c.n_objects());
    for c in 0..src_law.c.n_objects() {
        let obj_comp = theta_b.iter().map(|t| t.obj_comp[c]).collect();
        let cell_comp = (0..nb1)
            .map(|f| cm.fragment.two_cells[cm.t.cell_comp[f].0].comp[c])
            .collect();
        theta_c.push(OplaxTransformation {
            label: format!("uncurry({})[{c}]", cm.t.label),
            src: src_law.l[c].clone(),
            tgt: tgt_law.l[c].clone(),
            obj_comp,
            cell_comp,
        });
    }
    Ok(DistMorphism {
        label: format!("uncurry({})", cm.t.label),
        src: src_law,
        tgt: tgt_law,
        theta_c,
        theta_b,
    })
}

/// Curry a 2-morphism of laws into a modification between the curried
/// morphisms; its component at a `B` object is the `B`-side modification.
pub fn curry_2morphism(
    w: &Dist2Morphism,
    params: &CheckParams,
) -> Result<Curried2Morphism, CheckError> {
    let mut budget = EnumBudget::new(&format!("curry {}", w.label), params);
    let report = validate_dist_2morphism(w, &budget.remaining_params())?;
    budget.spend(report.charged)?;
    refuse_invalid(&report, &format!("2-morphism {}", w.label))?;

    let (mut objects, mut ones, mut twos) = morphism_seeds(&w.src)?;
    let (o2, t2, w2) = morphism_seeds(&w.tgt)?;
    objects.extend(o2);
    ones.extend(t2);
    twos.extend(w2);
    twos.extend(w.beth_b.iter().cloned());
    let fragment = LaxOpFragment::generate_with_budget(
        &w.src.src.c,
        &w.src.src.d,
        &objects,
        &ones,
        &twos,
        &mut budget,
    )?;
    let src = build_curried_transformation(&w.src, &fragment)?;
    let tgt = build_curried_transformation(&w.tgt, &fragment)?;
    let comp = w
        .beth_b
        .iter()
        .map(|bb| fragment.two_index_or_err(bb))
        .collect::<Result<Vec<_>, _>>()?;
    let hat = Modification {
        label: format!("curry({})", w.label),
        src,
        tgt,
        comp,
    };
    let w_report = validate_modification(&hat, &budget.remaining_params())?;
    budget.spend(w_report.charged)?;
    refuse_invalid(&w_report, &format!("curried 2-morphism for {}", w.label))?;
    Ok(Curried2Morphism { fragment, w: hat })
}

/// Read a law 2-morphism back off a curried one. The `C`-side tables are
/// recovered through the agreement that defines law 2-morphisms.
pub fn uncurry_2morphism(cw: &Curried2Morphism) -> Result<Dist2Morphism, CheckError> {
    let src_m = uncurry_morphism(&CurriedMorphism {
        fragment: Arc::clone(&cw.fragment),
        t: cw.w.src.clone(),
    })?;
    let tgt_m = uncurry_morphism(&CurriedMorphism {
        fragment: Arc::clone(&cw.fragment),
        t: cw.w.tgt.clone(),
    })?;
    let beth_b: Vec<Modification> = cw
        .w
        .comp
        .iter()
        .map(|i| cw.fragment.two_cells[i.0].clone())
        .collect();
    let mut beth_c = Vec::with_capacity(src_m.src.c.n_objects());
    for c in 0..src_m.src.c.n_objects() {
        let comp = beth_b.iter().map(|bb| bb.comp[c]).collect();
        beth_c.push(Modification {
            label: format!("uncurry({})[{c}]", cw.w.label),
            src: src_m.theta_c[c].clone(),
            tgt: tgt_m.theta_c[c].clone(),
            comp,
        });
    }
    Ok(Dist2Morphism {
        label: format!("uncurry({})", cw.w.label),
        src: src_m,
        tgt: tgt_m,
        beth_c,
        beth_b,
    })
}

/// The direct uncurrying functor: evaluate a nested functor into a lax
/// functor on the product, without passing through a distributive law.
pub fn uncurry_j(q: &NestedLaxFunctor, params: &CheckParams) -> Result<Bifunctor, CheckError> {
    let outer = &q.outer;
    if !cats_equal(&outer.cod, &q.fragment.cat) {
        return Err(CheckError::Structural(format!(
            "functor {}: codomain is not the carried fragment",
            outer.label
        )));
    }
    let report = validate_lax_functor(outer, params)?;
    refuse_invalid(&report, &format!("functor {}", outer.label))?;

    let b = &outer.dom;
    let c = &q.fragment.c;
    let d = &q.fragment.d;
    let label = format!("J({})", outer.label);
    let dom = product(b, c)?;
    let maps = ProductMaps::for_factors(c);

    let q_obj = |bo: ObjId| -> &LaxFunctor { &q.fragment.objects[outer.on_obj(bo).0] };
    let q_one = |f: OneCellId| -> &OplaxTransformation { &q.fragment.one_cells[outer.on_one(f).0] };
    let q_two = |a: TwoCellId| -> &Modification { &q.fragment.two_cells[outer.on_two(a).0] };

    let nb1 = b.n_one_cells();
    let nc1 = c.n_one_cells();
    let mut obj_map = vec![ObjId(0); dom.n_objects()];
    for bo in (0..b.n_objects()).map(ObjId) {
        for co in (0..c.n_objects()).map(ObjId) {
            obj_map[maps.obj(bo, co).0] = q_obj(bo).on_obj(co);
        }
    }
    let mut cell1_map = vec![OneCellId(0); dom.n_one_cells()];
    for f in (0..nb1).map(OneCellId) {
        let b2 = b.tgt1(f);
        for g in (0..nc1).map(OneCellId) {
            let c1 = c.src1(g);
            cell1_map[maps.one(f, g).0] = d
                .c1(q_obj(b2).on_one(g), q_one(f).obj_comp[c1.0])
                .map_err(|e| CheckError::Structural(format!("{label}: {e}")))?;
        }
    }
    let mut cell2_map = vec![TwoCellId(0); dom.n_two_cells()];
    for a in (0..b.n_two_cells()).map(TwoCellId) {
        let b2 = b.tgt1(b.src2(a));
        for be in (0..c.n_two_cells()).map(TwoCellId) {
            let c1 = c.src1(c.src2(be));
            cell2_map[maps.two(a, be).0] = d
                .hc(q_obj(b2).on_two(be), q_two(a).comp[c1.0])
                .map_err(|e| CheckError::Structural(format!("{label}: {e}")))?;
        }
    }
    let n1 = dom.n_one_cells();
    let mut gamma = vec![None; n1 * n1];
    for f2 in (0..nb1).map(OneCellId) {
        for f1 in (0..nb1).map(OneCellId) {
            if !b.composable1(f2, f1) {
                continue;
            }
            let b3 = b.tgt1(f2);
            let gq = outer.gamma_at(f2, f1).ok_or_else(|| {
                CheckError::Structural(format!("{label}: outer compositor missing at ({f2}, {f1})"))
            })?;
            let gq = &q.fragment.two_cells[gq.0];
            for g2 in (0..nc1).map(OneCellId) {
                for g1 in (0..nc1).map(OneCellId) {
                    if !c.composable1(g2, g1) {
                        continue;
                    }
                    let c1 = c.src1(g1);
                    let cell = (|| -> Result<TwoCellId, String> {
                        let mid = d.rw(
                            d.lw(q_obj(b3).on_one(g2), q_one(f2).cell_comp[g1.0])?,
                            q_one(f1).obj_comp[c1.0],
                        )?;
                        let top_m = q_obj(b3)
                            .gamma_at(g2, g1)
                            .ok_or_else(|| format!("value compositor missing at ({g2}, {g1})"))?;
                        d.vc(d.hc(top_m, gq.comp[c1.0])?, mid)
                    })()
                    .map_err(|e| CheckError::Structural(format!("{label}: {e}")))?;
                    gamma[maps.one(f2, g2).0 * n1 + maps.one(f1, g1).0] = Some(cell);
                }
            }
        }
    }
    let mut iota = vec![TwoCellId(0); dom.n_objects()];
    for bo in (0..b.n_objects()).map(ObjId) {
        let iq = &q.fragment.two_cells[outer.iota[bo.0].0];
        for co in (0..c.n_objects()).map(ObjId) {
            iota[maps.obj(bo, co).0] = d
                .hc(q_obj(bo).iota[co.0], iq.comp[co.0])
                .map_err(|e| CheckError::Structural(format!("{label}: {e}")))?;
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
        dom_left: Arc::clone(b),
        dom_right: Arc::clone(c),
    })
}

fn table_check<T: Eq>(
    report: &mut ValidationReport,
    axiom: &str,
    got: &[T],
    want: &[T],
    witness: impl Fn(usize) -> Vec<CellRef>,
) {
    if got.len() != want.len() {
        report.push(
            axiom,
            AxiomStatus::Fail {
                witness: Vec::new(),
                detail: format!("table sizes differ: {} vs {}", got.len(), want.len()),
            },
        );
        return;
    }
    match (0..got.len()).find(|&i| got[i] != want[i]) {
        None => report.push(
            axiom,
            AxiomStatus::Pass {
                instances: got.len() as u64,
            },
        ),
        Some(i) => report.push(
            axiom,
            AxiomStatus::Fail {
                witness: witness(i),
                detail: format!("tables differ at index {i}"),
            },
        ),
    }
}

/// Verify the triangle: uncurrying the curried law is table-identical to
/// collating it, at every level of the functor data.
pub fn check_triangle(
    s: &DistributiveLaw,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    let k = collate(s, params)?;
    let q = curry_law(s, params)?;
    let j = uncurry_j(&q, params)?;

    let mut report = ValidationReport::new(format!("triangle for {}", s.label));
    let mut plan = Plan::new("triangle", params);
    plan.charge(
        (k.p.obj_map.len() + k.p.cell1_map.len() + k.p.cell2_map.len() + k.p.gamma.len()
            + k.p.iota.len()) as u64,
    )?;
    let n1 = k.p.dom.n_one_cells();
    table_check(&mut report, "triangle-objects", &j.p.obj_map, &k.p.obj_map, |i| {
        vec![CellRef::Obj(ObjId(i))]
    });
    table_check(&mut report, "triangle-one-cells", &j.p.cell1_map, &k.p.cell1_map, |i| {
        vec![CellRef::One(OneCellId(i))]
    });
    table_check(&mut report, "triangle-two-cells", &j.p.cell2_map, &k.p.cell2_map, |i| {
        vec![CellRef::Two(TwoCellId(i))]
    });
    table_check(&mut report, "triangle-compositors", &j.p.gamma, &k.p.gamma, |i| {
        vec![CellRef::One(OneCellId(i / n1)), CellRef::One(OneCellId(i % n1))]
    });
    table_check(&mut report, "triangle-units", &j.p.iota, &k.p.iota, |i| {
        vec![CellRef::Obj(ObjId(i))]
    });
    report.charged = plan.total();
    Ok(report)
}

/// Round-trip a law through currying and back, checking table equality of
/// the functor families and the interchanger, then that re-currying gives
/// the identical nested functor.
pub fn check_roundtrip_law(
    s: &DistributiveLaw,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    let q = curry_law(s, params)?;
    let s2 = uncurry_nested(&q)?;
    let mut report = ValidationReport::new(format!("round trip for {}", s.label));

    let families = s2.l == s.l && s2.m == s.m;
    if families {
        report.push(
            "roundtrip-functors",
            AxiomStatus::Pass {
                instances: (s.l.len() + s.m.len()) as u64,
            },
        );
    } else {
        let witness = (0..s.l.len())
            .find(|&c| s2.l[c] != s.l[c])
            .map(|c| vec![CellRef::Obj(ObjId(c))])
            .or_else(|| {
                (0..s.m.len())
                    .find(|&b| s2.m[b] != s.m[b])
                    .map(|b| vec![CellRef::Obj(ObjId(b))])
            })
            .unwrap_or_default();
        report.push(
            "roundtrip-functors",
            AxiomStatus::Fail {
                witness,
                detail: "functor family tables changed across the round trip".to_string(),
            },
        );
    }

    let nc1 = s.c.n_one_cells();
    table_check(&mut report, "roundtrip-sigma", &s2.sigma, &s.sigma, |i| {
        vec![
            CellRef::One(OneCellId(i / nc1)),
            CellRef::One(OneCellId(i % nc1)),
        ]
    });

    let q2 = curry_law(&s2, params)?;
    report.push(
        "roundtrip-nested",
        if q2 == q {
            AxiomStatus::Pass { instances: 1 }
        } else {
            AxiomStatus::Fail {
                witness: Vec::new(),
                detail: "re-curried functor differs from the original".to_string(),
            }
        },
    );
    report.charged = (s.sigma.len() + s.l.len() + s.m.len() + 1) as u64;
    Ok(report)
}

/// Round-trip a law morphism through currying and back.
pub fn check_roundtrip_morphism(
    m: &DistMorphism,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    let cm = curry_morphism(m, params)?;
    let m2 = uncurry_morphism(&cm)?;
    let mut report = ValidationReport::new(format!("round trip for {}", m.label));

    report.push(
        "roundtrip-laws",
        if m2.src == m.src && m2.tgt == m.tgt {
            AxiomStatus::Pass { instances: 2 }
        } else {
            AxiomStatus::Fail {
                witness: Vec::new(),
                detail: "endpoint laws changed across the round trip".to_string(),
            }
        },
    );
    let components = m2.theta_b == m.theta_b && m2.theta_c == m.theta_c;
    report.push(
        "roundtrip-components",
        if components {
            AxiomStatus::Pass {
                instances: (m.theta_b.len() + m.theta_c.len()) as u64,
            }
        } else {
            AxiomStatus::Fail {
                witness: Vec::new(),
                detail: "component tables changed across the round trip".to_string(),
            }
        },
    );
    let cm2 = curry_morphism(&m2, params)?;
    report.push(
        "roundtrip-nested",
        if cm2 == cm {
            AxiomStatus::Pass { instances: 1 }
        } else {
            AxiomStatus::Fail {
                witness: Vec::new(),
                detail: "re-curried morphism differs from the original".to_string(),
            }
        },
    );
    report.charged = (m.theta_b.len() + m.theta_c.len() + 3) as u64;
    Ok(report)
}

/// Round-trip a law 2-morphism through currying and back.
pub fn check_roundtrip_2morphism(
    w: &Dist2Morphism,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    let cw = curry_2morphism(w, params)?;
    let w2 = uncurry_2morphism(&cw)?;
    let mut report = ValidationReport::new(format!("round trip for {}", w.label));

    report.push(
        "roundtrip-morphisms",
        if w2.src == w.src && w2.tgt == w.tgt {
            AxiomStatus::Pass { instances: 2 }
        } else {
            AxiomStatus::Fail {
                witness: Vec::new(),
                detail: "endpoint morphisms changed across the round trip".to_string(),
            }
        },
    );
    report.push(
        "roundtrip-components",
        if w2.beth_b == w.beth_b && w2.beth_c == w.beth_c {
            AxiomStatus::Pass {
                instances: (w.beth_b.len() + w.beth_c.len()) as u64,
            }
        } else {
            AxiomStatus::Fail {
                witness: Vec::new(),
                detail: "component tables changed across the round trip".to_string(),
            }
        },
    );
    let cw2 = curry_2morphism(&w2, params)?;
    report.push(
        "roundtrip-nested",
        if cw2 == cw {
            AxiomStatus::Pass { instances: 1 }
        } else {
            AxiomStatus::Fail {
                witness: Vec::new(),
                detail: "re-curried 2-morphism differs from the original".to_string(),
            }
        },
    );
    report.charged = (w.beth_b.len() + w.beth_c.len() + 3) as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core2::terminal_2category;
    use crate::distlaw::{enumerate_laws, identity_dist_2morphism, identity_dist_morphism};
    use crate::functors::identity_lax_functor;
    use crate::instances::{monads_of, rel_2category};

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

    fn rel2_law() -> DistributiveLaw {
        let rel = rel_2category(2).unwrap();
        let monads = monads_of(&rel, &params()).unwrap();
        let s_mon = monads
            .iter()
            .find(|(f, _)| f.cell1_map[0].0 == 0b1001)
            .unwrap()
            .0
            .clone();
        let t_mon = monads
            .iter()
            .find(|(f, _)| f.cell1_map[0].0 == 0b1111)
            .unwrap()
            .0
            .clone();
        let b = Arc::clone(&s_mon.dom);
        enumerate_laws("rel2", &b, &b, &rel, &[s_mon], &[t_mon], &params())
            .unwrap()
            .remove(0)
    }

    #[test]
    fn trivial_law_round_trips() {
        let s = terminal_identity_law();
        let q = curry_law(&s, &params()).unwrap();
        assert_eq!(q.fragment.objects.len(), 1);
        let report = check_roundtrip_law(&s, &params()).unwrap();
        assert!(report.ok, "{}", report.render_text());
        let triangle = check_triangle(&s, &params()).unwrap();
        assert!(triangle.ok, "{}", triangle.render_text());
    }

    #[test]
    fn rel_law_round_trips_and_triangle_commutes() {
        let s = rel2_law();
        let q = curry_law(&s, &params()).unwrap();
        let s2 = uncurry_nested(&q).unwrap();
        assert_eq!(s2, s);

        let report = check_roundtrip_law(&s, &params()).unwrap();
        assert!(report.ok, "{}", report.render_text());
        let triangle = check_triangle(&s, &params()).unwrap();
        assert!(triangle.ok, "{}", triangle.render_text());
    }

    #[test]
    fn fragment_stays_small_for_a_posetal_target() {
        let s = rel2_law();
        let q = curry_law(&s, &params()).unwrap();
        // One object (the single M), its identity, the sigma transformation
        // and their composites; posetal collapse keeps this tiny.
        assert_eq!(q.fragment.objects.len(), 1);
        assert!(q.fragment.one_cells.len() <= 4, "{}", q.fragment.one_cells.len());
        assert!(q.fragment.two_cells.len() <= 16, "{}", q.fragment.two_cells.len());
    }

    #[test]
    fn identity_morphism_round_trips() {
        let s = rel2_law();
        let m = identity_dist_morphism(&s);
        let cm = curry_morphism(&m, &params()).unwrap();
        let m2 = uncurry_morphism(&cm).unwrap();
        assert_eq!(m2, m);
        let report = check_roundtrip_morphism(&m, &params()).unwrap();
        assert!(report.ok, "{}", report.render_text());
    }

    #[test]
    fn identity_2morphism_round_trips() {
        let s = rel2_law();
        let w = identity_dist_2morphism(&identity_dist_morphism(&s));
        let report = check_roundtrip_2morphism(&w, &params()).unwrap();
        assert!(report.ok, "{}", report.render_text());
    }

    #[test]
    fn uncurrying_rejects_a_foreign_fragment() {
        let s = terminal_identity_law();
        let rel_law = rel2_law();
        let q = curry_law(&s, &params()).unwrap();
        let q_rel = curry_law(&rel_law, &params()).unwrap();
        let mixed = NestedLaxFunctor {
            fragment: Arc::clone(&q_rel.fragment),
            outer: q.outer.clone(),
        };
        assert!(uncurry_nested(&mixed).is_err());
    }
}
