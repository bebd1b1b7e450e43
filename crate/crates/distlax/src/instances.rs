//! Stock instances: the 2-category of relations on a small carrier,
//! deloopings of ordered and discrete monoids, and a reader for monads on a
//! one-object instance.
//!
//! All of these are locally posetal and are built with the derived 2-cell
//! backend, so only the 1-cell composition table is stored densely.

use std::sync::Arc;

use crate::core2::{
    terminal_2category, CheckError, CheckParams, ObjId, OneCellId, TwoCategory, TwoCellId,
};
use crate::functors::{enumerate_lax_functors, LaxFunctor};

/// Largest carrier for [`rel_2category`]. The 1-cell composition table is
/// dense over `2^(n*n)` relations, so `n = 4` would already need a
/// 2^32-entry table.
pub const REL_CARRIER_LIMIT: usize = 3;

/// Composite of two relations on `{0..n}`, the `first` one applied first.
/// Bit `a*n + b` of a mask means `a` is related to `b`.
pub fn rel_compose(n: usize, first: usize, then: usize) -> usize {
    let mut out = 0usize;
    for a in 0..n {
        for c in 0..n {
            if (0..n).any(|b| first & 1 << (a * n + b) != 0 && then & 1 << (b * n + c) != 0) {
                out |= 1 << (a * n + c);
            }
        }
    }
    out
}

/// The one-object 2-category of binary relations on an `n`-element set:
/// 1-cells are the `2^(n*n)` relations, with `comp1(g, f)` relating `a` to
/// `c` when some `b` has `f(a, b)` and `g(b, c)`; there is a unique 2-cell
/// `S -> T` exactly when `S` is a subrelation of `T`.
///
/// The index of a 1-cell is its adjacency bitmask (bit `a*n + b` set when
/// `a` is related to `b`), so callers can move between cells and masks
/// without a lookup table. 2-cells are ordered lexicographically by
/// (source mask, target mask).
pub fn rel_2category(n: usize) -> Result<Arc<TwoCategory>, CheckError> {
    if n > REL_CARRIER_LIMIT {
        return Err(CheckError::TooLarge {
            what: format!("rel({n}) carrier"),
            size: n as u64,
            limit: REL_CARRIER_LIMIT as u64,
        });
    }
    let n1 = 1usize << (n * n);
    let one_cells = vec![(ObjId(0), ObjId(0)); n1];
    let mut diagonal = 0usize;
    for i in 0..n {
        diagonal |= 1 << (i * n + i);
    }
    let mut comp1 = vec![None; n1 * n1];
    for g in 0..n1 {
        for f in 0..n1 {
            comp1[g * n1 + f] = Some(OneCellId(rel_compose(n, f, g)));
        }
    }
    let mut two_cells = Vec::new();
    let mut id2 = vec![TwoCellId(0); n1];
    for s in 0..n1 {
        for t in 0..n1 {
            if s & !t == 0 {
                if s == t {
                    id2[s] = TwoCellId(two_cells.len());
                }
                two_cells.push((OneCellId(s), OneCellId(t)));
            }
        }
    }
    TwoCategory::from_posetal(
        format!("rel({n})"),
        1,
        one_cells,
        vec![OneCellId(diagonal)],
        comp1,
        two_cells,
        id2,
    )
}

/// Delooping of a monoid that is ordered compatibly: one object, the monoid
/// elements as 1-cells composed by `op`, and a unique 2-cell `a -> b` exactly
/// when `leq[a*n + b]`.
///
/// `op[x*n + y]` is the product of `x` and `y`; `comp1(g, f) = op[g*n + f]`.
/// Element `0` must be the unit. The order must be a partial order and `op`
/// must be monotone in both arguments, otherwise whiskering would leave the
/// 2-cell table; both are rejected here rather than left to the validator.
pub fn ordered_monoid_delooping(
    label: impl Into<String>,
    n: usize,
    op: &[usize],
    leq: &[bool],
) -> Result<Arc<TwoCategory>, CheckError> {
    let label = label.into();
    let structural = |msg: String| Err(CheckError::Structural(msg));
    if n == 0 || op.len() != n * n || leq.len() != n * n {
        return structural(format!("{label}: op and leq must be {n}x{n} tables"));
    }
    if op.iter().any(|&v| v >= n) {
        return structural(format!("{label}: op entry out of range"));
    }
    let prod = |x: usize, y: usize| op[x * n + y];
    let le = |x: usize, y: usize| leq[x * n + y];
    for a in 0..n {
        if !le(a, a) {
            return structural(format!("{label}: order is not reflexive at {a}"));
        }
        if prod(0, a) != a || prod(a, 0) != a {
            return structural(format!("{label}: 0 is not a two-sided unit at {a}"));
        }
        for b in 0..n {
            if a != b && le(a, b) && le(b, a) {
                return structural(format!("{label}: order is not antisymmetric at {a}, {b}"));
            }
            for c in 0..n {
                if le(a, b) && le(b, c) && !le(a, c) {
                    return structural(format!("{label}: order is not transitive at {a}, {b}, {c}"));
                }
                if prod(prod(a, b), c) != prod(a, prod(b, c)) {
                    return structural(format!("{label}: op is not associative at {a}, {b}, {c}"));
                }
                if le(a, b) && (!le(prod(c, a), prod(c, b)) || !le(prod(a, c), prod(b, c))) {
                    return structural(format!(
                        "{label}: op is not monotone at {a} <= {b} against {c}"
                    ));
                }
            }
        }
    }

    let one_cells = vec![(ObjId(0), ObjId(0)); n];
    let mut comp1 = vec![None; n * n];
    for g in 0..n {
        for f in 0..n {
            comp1[g * n + f] = Some(OneCellId(prod(g, f)));
        }
    }
    let mut two_cells = Vec::new();
    let mut id2 = vec![TwoCellId(0); n];
    for s in 0..n {
        for t in 0..n {
            if le(s, t) {
                if s == t {
                    id2[s] = TwoCellId(two_cells.len());
                }
                two_cells.push((OneCellId(s), OneCellId(t)));
            }
        }
    }
    TwoCategory::from_posetal(label, 1, one_cells, vec![OneCellId(0)], comp1, two_cells, id2)
}

/// The chain `0 <= 1 <= ... <= top` under truncated addition.
pub fn truncated_addition_chain(top: usize) -> Result<Arc<TwoCategory>, CheckError> {
    let n = top + 1;
    let op: Vec<usize> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a + b).min(top)))
        .collect();
    let leq: Vec<bool> = (0..n).flat_map(|a| (0..n).map(move |b| a <= b)).collect();
    ordered_monoid_delooping(format!("chain({top})+trunc"), n, &op, &leq)
}

/// Delooping of a monoid with only identity 2-cells. Same table conventions
/// as [`ordered_monoid_delooping`]: `0` is the unit and `op` must be
/// associative.
pub fn discrete_monoid_delooping(
    label: impl Into<String>,
    n: usize,
    op: &[usize],
) -> Result<Arc<TwoCategory>, CheckError> {
    let leq: Vec<bool> = (0..n).flat_map(|a| (0..n).map(move |b| a == b)).collect();
    ordered_monoid_delooping(label, n, op, &leq)
}

/// One object, one 1-cell, and `Z/n` as 2-cells with both compositions
/// given by addition. The smallest family of targets whose parallel 2-cells
/// are not unique, which is what exercises the checks a posetal target
/// makes trivial.
pub fn cyclic_loop(n: usize) -> Result<Arc<TwoCategory>, CheckError> {
    if n == 0 {
        return Err(CheckError::Structural(
            "cyclic loop needs at least one 2-cell".to_string(),
        ));
    }
    let add: Vec<Option<TwoCellId>> = (0..n)
        .flat_map(|b| (0..n).map(move |a| Some(TwoCellId((b + a) % n))))
        .collect();
    TwoCategory::from_tables(crate::core2::TwoCategoryData {
        label: format!("cyclic-loop({n})"),
        n_objects: 1,
        one_cells: vec![(ObjId(0), ObjId(0))],
        id1: vec![OneCellId(0)],
        comp1: vec![Some(OneCellId(0))],
        two_cells: vec![(OneCellId(0), OneCellId(0)); n],
        id2: vec![TwoCellId(0)],
        vcomp: add.clone(),
        hcomp: add,
        locally_posetal: false,
    })
}

/// A monad on an object of `x`, read off a lax functor from the terminal
/// 2-category: underlying 1-cell `t`, multiplication `mu: t . t -> t`, and
/// unit `eta: id -> t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonadView {
    pub obj: ObjId,
    pub t: OneCellId,
    pub mu: TwoCellId,
    pub eta: TwoCellId,
}

/// Read the monad data off a functor whose domain is terminal-shaped.
pub fn monad_view(f: &LaxFunctor) -> Result<MonadView, CheckError> {
    let dom = &f.dom;
    if dom.n_objects() != 1 || dom.n_one_cells() != 1 || dom.n_two_cells() != 1 {
        return Err(CheckError::Structural(
            "monad views read functors out of the terminal 2-category".to_string(),
        ));
    }
    let mu = f
        .gamma_at(OneCellId(0), OneCellId(0))
        .ok_or_else(|| CheckError::Structural("compositor entry missing".to_string()))?;
    Ok(MonadView {
        obj: f.obj_map[0],
        t: f.cell1_map[0],
        mu,
        eta: f.iota[0],
    })
}

/// Monads in `x`: lax functors from the terminal 2-category, paired with
/// their monad reading, in enumeration order.
pub fn monads_of(
    x: &Arc<TwoCategory>,
    params: &CheckParams,
) -> Result<Vec<(LaxFunctor, MonadView)>, CheckError> {
    let terminal = terminal_2category();
    enumerate_lax_functors(&terminal, x, params)?
        .into_iter()
        .map(|f| monad_view(&f).map(|view| (f, view)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core2::validate_2category;

    /// Masks of reflexive transitive relations, enumerated directly.
    fn preorder_masks(n: usize) -> Vec<usize> {
        let related = |m: usize, a: usize, b: usize| m & 1 << (a * n + b) != 0;
        (0..1usize << (n * n))
            .filter(|&m| {
                (0..n).all(|i| related(m, i, i))
                    && (0..n).all(|a| {
                        (0..n).all(|b| {
                            (0..n).all(|c| !(related(m, a, b) && related(m, b, c)) || related(m, a, c))
                        })
                    })
            })
            .collect()
    }

    #[test]
    fn rel_2_is_a_valid_2category() {
        let rel = rel_2category(2).unwrap();
        assert_eq!(rel.n_one_cells(), 16);
        assert_eq!(rel.n_two_cells(), 81);
        let report = validate_2category(&rel, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());
    }

    #[test]
    fn rel_3_is_a_valid_2category() {
        let rel = rel_2category(3).unwrap();
        assert_eq!(rel.n_one_cells(), 512);
        assert_eq!(rel.n_two_cells(), 19683);
        // assoc1 alone is 512^3 instances, past the default budget
        let report = validate_2category(&rel, &CheckParams::with_budget(200_000_000)).unwrap();
        assert!(report.ok, "{}", report.render_text());
    }

    #[test]
    fn rel_4_is_refused() {
        assert!(matches!(
            rel_2category(4),
            Err(CheckError::TooLarge { .. })
        ));
    }

    #[test]
    fn rel_composition_matches_boolean_matrix_product() {
        let n = 2;
        let rel = rel_2category(n).unwrap();
        for g in 0..16usize {
            for f in 0..16usize {
                let got = rel.comp1(OneCellId(g), OneCellId(f)).unwrap();
                let mut want = 0usize;
                for a in 0..n {
                    for c in 0..n {
                        if (0..n).any(|b| f & 1 << (a * n + b) != 0 && g & 1 << (b * n + c) != 0) {
                            want |= 1 << (a * n + c);
                        }
                    }
                }
                assert_eq!(got, OneCellId(want), "comp1({g}, {f})");
            }
        }
    }

    #[test]
    fn rel_monads_are_exactly_the_preorders() {
        for (n, expected) in [(1usize, 1usize), (2, 4), (3, 29)] {
            let rel = rel_2category(n).unwrap();
            let monads = monads_of(&rel, &CheckParams::default()).unwrap();
            let masks: Vec<usize> = monads.iter().map(|(_, v)| v.t.0).collect();
            let oracle = preorder_masks(n);
            assert_eq!(oracle.len(), expected);
            assert_eq!(masks, oracle, "n = {n}");
            for (_, view) in &monads {
                let square = rel.comp1(view.t, view.t).unwrap();
                assert_eq!(rel.two_endpoints(view.mu), (square, view.t));
                assert_eq!(rel.two_endpoints(view.eta), (rel.id1(ObjId(0)), view.t));
            }
        }
    }

    #[test]
    fn truncated_chain_monads() {
        let chain = truncated_addition_chain(2).unwrap();
        let report = validate_2category(&chain, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());
        let monads = monads_of(&chain, &CheckParams::default()).unwrap();
        let ts: Vec<usize> = monads.iter().map(|(_, v)| v.t.0).collect();
        // t is a monad exactly when t + t (truncated) <= t and 0 <= t
        assert_eq!(ts, vec![0, 2]);
    }

    #[test]
    fn non_monotone_op_is_refused() {
        // xor on {0, 1} with 0 <= 1: whiskering 0 <= 1 by 1 would need 1 <= 0
        let op = [0, 1, 1, 0];
        let leq = [true, true, false, true];
        assert!(matches!(
            ordered_monoid_delooping("xor-ordered", 2, &op, &leq),
            Err(CheckError::Structural(_))
        ));
    }

    #[test]
    fn discrete_delooping_has_only_identity_monad() {
        let z2 = discrete_monoid_delooping("z2", 2, &[0, 1, 1, 0]).unwrap();
        let report = validate_2category(&z2, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());
        let monads = monads_of(&z2, &CheckParams::default()).unwrap();
        assert_eq!(monads.len(), 1);
        assert_eq!(monads[0].1.t, z2.id1(ObjId(0)));
    }
}
