//! Finite strict 2-categories as explicit composition tables.
//!
//! Everything is dense and index-based: objects, 1-cells and 2-cells are
//! opaque indices into a [`TwoCategory`], and equality of cells is equality
//! of indices. Partial composition tables are total arrays with a sentinel;
//! an entry must be present exactly when the pair is composable.
//!
//! Conventions, fixed crate-wide:
//! - `comp1(g, f)` is "g after f", defined iff `tgt1(f) == src1(g)`.
//! - `vcomp(b, a)` is "b after a" inside a hom-category, defined iff
//!   `src2(b) == tgt2(a)`.
//! - `hcomp(b, a)` composes side by side, with `a` over the first leg:
//!   for `a: f -> f'` (over `x -> y`) and `b: g -> g'` (over `y -> z`) the
//!   composite runs `comp1(g, f) -> comp1(g', f')`.
//!
//! Locally posetal categories (at most one 2-cell between parallel 1-cells)
//! may store no 2-cell tables at all: composites are resolved by endpoint
//! lookup. That keeps instances like the relation 2-category on a 3-element
//! set (19683 two-cells) representable without a quadratic vcomp table.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Index of an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

/// Index of a 1-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OneCellId(pub usize);

/// Index of a 2-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoCellId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "obj:{}", self.0)
    }
}
impl fmt::Display for OneCellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "one:{}", self.0)
    }
}
impl fmt::Display for TwoCellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "two:{}", self.0)
    }
}

/// A cell reference inside a violation witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CellRef {
    Obj(ObjId),
    One(OneCellId),
    Two(TwoCellId),
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellRef::Obj(x) => write!(f, "{x}"),
            CellRef::One(x) => write!(f, "{x}"),
            CellRef::Two(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for CellRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Errors that are not axiom violations: the input cannot be checked at all,
/// or checking it would exceed the configured work budget.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("structural: {0}")]
    Structural(String),
    #[error("budget exceeded: {subject} needs {needed} primitive checks, budget is {budget}")]
    BudgetExceeded {
        subject: String,
        needed: u64,
        budget: u64,
    },
    #[error("{what} has size {size}, over the hard limit {limit}")]
    TooLarge { what: String, size: u64, limit: u64 },
    #[error("not invertible: {0}")]
    NotInvertible(String),
}

/// Default ceiling on primitive checks per validation run.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Work limits shared by every validator and enumerator.
#[derive(Debug, Clone, Copy)]
pub struct CheckParams {
    /// Maximum number of primitive checks (equation instances plus table
    /// entries scanned) a single validation is allowed to plan.
    pub budget: u64,
    /// Number of worker threads for the large scans. The report is
    /// byte-identical for every value.
    pub threads: usize,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            budget: DEFAULT_BUDGET,
            threads: 1,
        }
    }
}

impl CheckParams {
    pub fn with_budget(budget: u64) -> Self {
        CheckParams {
            budget,
            ..Default::default()
        }
    }
}

/// Outcome of one named check inside a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AxiomStatus {
    /// Every instance of the axiom was checked and held.
    Pass { instances: u64 },
    /// The axiom holds for a structural reason; nothing was scanned.
    Trivial { reason: String },
    /// Not checked because an earlier failure makes it meaningless.
    Skipped { reason: String },
    /// First violating instance in lexicographic scan order.
    Fail { witness: Vec<CellRef>, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    #[serde(flatten)]
    pub status: AxiomStatus,
}

/// Result of validating one structure: a fixed, ordered list of named checks.
///
/// `charged` is the number of primitive checks planned up front for the run;
/// it is what the budget was compared against and is independent of early
/// exits and thread count, so serialized reports are stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub ok: bool,
    pub axioms: Vec<AxiomCheck>,
    pub charged: u64,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            ok: true,
            axioms: Vec::new(),
            charged: 0,
        }
    }

    pub fn push(&mut self, axiom: impl Into<String>, status: AxiomStatus) {
        if matches!(status, AxiomStatus::Fail { .. }) {
            self.ok = false;
        }
        self.axioms.push(AxiomCheck {
            axiom: axiom.into(),
            status,
        });
    }

    /// Merge a sub-report in, prefixing each axiom name with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, sub: ValidationReport) {
        for check in sub.axioms {
            self.push(format!("{prefix}/{}", check.axiom), check.status);
        }
        self.charged += sub.charged;
    }

    pub fn violations(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.axioms
            .iter()
            .filter(|c| matches!(c.status, AxiomStatus::Fail { .. }))
    }

    pub fn failed(&self, axiom: &str) -> bool {
        self.violations().any(|c| c.axiom == axiom)
    }

    /// Names of all failed checks, in report order.
    pub fn failed_axioms(&self) -> Vec<&str> {
        self.violations().map(|c| c.axiom.as_str()).collect()
    }

    pub fn render_text(&self) -> String {
        use fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "subject: {}", self.subject);
        let _ = writeln!(out, "ok: {}", self.ok);
        for check in &self.axioms {
            match &check.status {
                AxiomStatus::Pass { instances } => {
                    let _ = writeln!(out, "  {:<24} pass     {instances} instances", check.axiom);
                }
                AxiomStatus::Trivial { reason } => {
                    let _ = writeln!(out, "  {:<24} trivial  {reason}", check.axiom);
                }
                AxiomStatus::Skipped { reason } => {
                    let _ = writeln!(out, "  {:<24} skipped  {reason}", check.axiom);
                }
                AxiomStatus::Fail { witness, detail } => {
                    let ws: Vec<String> = witness.iter().map(|w| w.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "  {:<24} FAIL     [{}] {detail}",
                        check.axiom,
                        ws.join(", ")
                    );
                }
            }
        }
        let _ = writeln!(out, "charged: {}", self.charged);
        out
    }
}

/// Upfront work plan: every named scan registers its instance count before
/// anything runs, so budget refusal is deterministic and total.
pub(crate) struct Plan {
    subject: String,
    budget: u64,
    total: u64,
}

impl Plan {
    pub fn new(subject: &str, params: &CheckParams) -> Self {
        Plan {
            subject: subject.to_string(),
            budget: params.budget,
            total: 0,
        }
    }

    pub fn charge(&mut self, instances: u64) -> Result<(), CheckError> {
        self.total = self.total.saturating_add(instances);
        if self.total > self.budget {
            Err(CheckError::BudgetExceeded {
                subject: self.subject.clone(),
                needed: self.total,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// One violating instance, keyed by its flat scan index for merging.
type Found = (u64, Vec<CellRef>, String);

/// Scan `0..total`, returning the violation with the smallest index, if any.
///
/// With `threads > 1` the range is split into contiguous chunks; each worker
/// stops at its first hit and the merge takes the smallest index, so the
/// result is identical to the sequential scan.
pub(crate) fn par_scan<F>(total: u64, threads: usize, f: F) -> Option<Found>
where
    F: Fn(u64) -> Option<Found> + Sync,
{
    if total == 0 {
        return None;
    }
    let threads = threads.max(1).min(total as usize).min(64);
    if threads == 1 {
        return (0..total).find_map(&f);
    }
    let chunk = total.div_ceil(threads as u64);
    let mut hits: Vec<Option<Found>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads as u64 {
            let lo = t * chunk;
            let hi = (lo + chunk).min(total);
            let f = &f;
            handles.push(scope.spawn(move || (lo..hi).find_map(f)));
        }
        for h in handles {
            hits.push(h.join().expect("scan worker panicked"));
        }
    });
    hits.into_iter().flatten().min_by_key(|(idx, _, _)| *idx)
}

const NONE_U32: u32 = u32::MAX;

/// 2-cell composition backend.
#[derive(Debug, Clone, PartialEq, Eq)]
enum TwoCellOps {
    /// Dense `n2 x n2` tables, sentinel for non-composable pairs.
    Tables { vcomp: Vec<u32>, hcomp: Vec<u32> },
    /// No tables: composites are the unique 2-cell with the composite
    /// endpoints. Only sound together with `locally_posetal`.
    DerivedPosetal,
}

/// A finite strict 2-category, fully tabled.
#[derive(Debug, PartialEq, Eq)]
pub struct TwoCategory {
    label: String,
    n_objects: usize,
    one_cells: Vec<(ObjId, ObjId)>,
    id1: Vec<OneCellId>,
    comp1: Vec<u32>,
    two_cells: Vec<(OneCellId, OneCellId)>,
    id2: Vec<TwoCellId>,
    ops2: TwoCellOps,
    /// All 2-cells grouped by (src, tgt), each group ascending.
    by_endpoints: BTreeMap<(OneCellId, OneCellId), Vec<TwoCellId>>,
    locally_posetal: bool,
}

/// Raw tables accepted by the constructors. `comp1[g * n1 + f]` must be
/// `Some` exactly when `tgt1(f) == src1(g)`; likewise for the 2-cell tables
/// and their composability predicates (shape defects are reported by
/// [`validate_2category`], not rejected here; only out-of-range indices and
/// wrong lengths are).
pub struct TwoCategoryData {
    pub label: String,
    pub n_objects: usize,
    pub one_cells: Vec<(ObjId, ObjId)>,
    pub id1: Vec<OneCellId>,
    pub comp1: Vec<Option<OneCellId>>,
    pub two_cells: Vec<(OneCellId, OneCellId)>,
    pub id2: Vec<TwoCellId>,
    pub vcomp: Vec<Option<TwoCellId>>,
    pub hcomp: Vec<Option<TwoCellId>>,
    pub locally_posetal: bool,
}

impl TwoCategory {
    /// Build from dense tables. Rejects only wrong table lengths and
    /// out-of-range indices; every other defect is an axiom violation left
    /// for [`validate_2category`] to report.
    pub fn from_tables(data: TwoCategoryData) -> Result<Arc<Self>, CheckError> {
        let n1 = data.one_cells.len();
        let n2 = data.two_cells.len();
        check_len("comp1", data.comp1.len(), n1 * n1)?;
        check_len("vcomp", data.vcomp.len(), n2 * n2)?;
        check_len("hcomp", data.hcomp.len(), n2 * n2)?;
        let vcomp = pack_table("vcomp", &data.vcomp, n2)?;
        let hcomp = pack_table("hcomp", &data.hcomp, n2)?;
        Self::finish(
            data.label,
            data.n_objects,
            data.one_cells,
            data.id1,
            data.comp1,
            data.two_cells,
            data.id2,
            TwoCellOps::Tables { vcomp, hcomp },
            data.locally_posetal,
        )
    }

    /// Build a locally posetal category without 2-cell tables; vertical and
    /// horizontal composites are resolved by endpoint lookup.
    #[allow(clippy::too_many_arguments)]
    pub fn from_posetal(
        label: impl Into<String>,
        n_objects: usize,
        one_cells: Vec<(ObjId, ObjId)>,
        id1: Vec<OneCellId>,
        comp1: Vec<Option<OneCellId>>,
        two_cells: Vec<(OneCellId, OneCellId)>,
        id2: Vec<TwoCellId>,
    ) -> Result<Arc<Self>, CheckError> {
        let n1 = one_cells.len();
        check_len("comp1", comp1.len(), n1 * n1)?;
        Self::finish(
            label.into(),
            n_objects,
            one_cells,
            id1,
            comp1,
            two_cells,
            id2,
            TwoCellOps::DerivedPosetal,
            true,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        label: String,
        n_objects: usize,
        one_cells: Vec<(ObjId, ObjId)>,
        id1: Vec<OneCellId>,
        comp1: Vec<Option<OneCellId>>,
        two_cells: Vec<(OneCellId, OneCellId)>,
        id2: Vec<TwoCellId>,
        ops2: TwoCellOps,
        locally_posetal: bool,
    ) -> Result<Arc<Self>, CheckError> {
        let n1 = one_cells.len();
        let n2 = two_cells.len();
        check_len("id1", id1.len(), n_objects)?;
        check_len("id2", id2.len(), n1)?;
        for (i, (s, t)) in one_cells.iter().enumerate() {
            if s.0 >= n_objects || t.0 >= n_objects {
                return Err(CheckError::Structural(format!(
                    "one-cell {i} has endpoint out of range"
                )));
            }
        }
        for (o, f) in id1.iter().enumerate() {
            if f.0 >= n1 {
                return Err(CheckError::Structural(format!(
                    "id1[{o}] out of range"
                )));
            }
        }
        for (i, (s, t)) in two_cells.iter().enumerate() {
            if s.0 >= n1 || t.0 >= n1 {
                return Err(CheckError::Structural(format!(
                    "two-cell {i} has endpoint out of range"
                )));
            }
        }
        for (f, a) in id2.iter().enumerate() {
            if a.0 >= n2 {
                return Err(CheckError::Structural(format!(
                    "id2[{f}] out of range"
                )));
            }
        }
        let comp1 = pack_table("comp1", &comp1, n1)?;
        if let TwoCellOps::Tables { vcomp, hcomp } = &ops2 {
            for (name, table) in [("vcomp", vcomp), ("hcomp", hcomp)] {
                for &v in table {
                    if v != NONE_U32 && v as usize >= n2 {
                        return Err(CheckError::Structural(format!(
                            "{name} entry out of range"
                        )));
                    }
                }
            }
        }
        let mut by_endpoints: BTreeMap<(OneCellId, OneCellId), Vec<TwoCellId>> = BTreeMap::new();
        for (i, &(s, t)) in two_cells.iter().enumerate() {
            by_endpoints.entry((s, t)).or_default().push(TwoCellId(i));
        }
        Ok(Arc::new(TwoCategory {
            label,
            n_objects,
            one_cells,
            id1,
            comp1,
            two_cells,
            id2,
            ops2,
            by_endpoints,
            locally_posetal,
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn n_objects(&self) -> usize {
        self.n_objects
    }
    pub fn n_one_cells(&self) -> usize {
        self.one_cells.len()
    }
    pub fn n_two_cells(&self) -> usize {
        self.two_cells.len()
    }
    pub fn locally_posetal(&self) -> bool {
        self.locally_posetal
    }
    pub fn one_endpoints(&self, f: OneCellId) -> (ObjId, ObjId) {
        self.one_cells[f.0]
    }
    pub fn src1(&self, f: OneCellId) -> ObjId {
        self.one_cells[f.0].0
    }
    pub fn tgt1(&self, f: OneCellId) -> ObjId {
        self.one_cells[f.0].1
    }
    pub fn id1(&self, o: ObjId) -> OneCellId {
        self.id1[o.0]
    }
    pub fn two_endpoints(&self, a: TwoCellId) -> (OneCellId, OneCellId) {
        self.two_cells[a.0]
    }
    pub fn src2(&self, a: TwoCellId) -> OneCellId {
        self.two_cells[a.0].0
    }
    pub fn tgt2(&self, a: TwoCellId) -> OneCellId {
        self.two_cells[a.0].1
    }
    pub fn id2(&self, f: OneCellId) -> TwoCellId {
        self.id2[f.0]
    }

    pub fn composable1(&self, g: OneCellId, f: OneCellId) -> bool {
        self.tgt1(f) == self.src1(g)
    }

    pub fn comp1(&self, g: OneCellId, f: OneCellId) -> Option<OneCellId> {
        let v = self.comp1[g.0 * self.one_cells.len() + f.0];
        (v != NONE_U32).then(|| OneCellId(v as usize))
    }

    pub fn vcomposable(&self, b: TwoCellId, a: TwoCellId) -> bool {
        self.src2(b) == self.tgt2(a)
    }

    pub fn vcomp(&self, b: TwoCellId, a: TwoCellId) -> Option<TwoCellId> {
        match &self.ops2 {
            TwoCellOps::Tables { vcomp, .. } => {
                let v = vcomp[b.0 * self.two_cells.len() + a.0];
                (v != NONE_U32).then(|| TwoCellId(v as usize))
            }
            TwoCellOps::DerivedPosetal => {
                if !self.vcomposable(b, a) {
                    return None;
                }
                self.unique_cell(self.src2(a), self.tgt2(b))
            }
        }
    }

    pub fn hcomposable(&self, b: TwoCellId, a: TwoCellId) -> bool {
        self.tgt1(self.src2(a)) == self.src1(self.src2(b))
    }

    pub fn hcomp(&self, b: TwoCellId, a: TwoCellId) -> Option<TwoCellId> {
        match &self.ops2 {
            TwoCellOps::Tables { hcomp, .. } => {
                let v = hcomp[b.0 * self.two_cells.len() + a.0];
                (v != NONE_U32).then(|| TwoCellId(v as usize))
            }
            TwoCellOps::DerivedPosetal => {
                let src = self.comp1(self.src2(b), self.src2(a))?;
                let tgt = self.comp1(self.tgt2(b), self.tgt2(a))?;
                self.unique_cell(src, tgt)
            }
        }
    }

    /// Whisker a 2-cell on the left by a 1-cell: `h * a`.
    pub fn lwhisker(&self, h: OneCellId, a: TwoCellId) -> Option<TwoCellId> {
        self.hcomp(self.id2(h), a)
    }

    /// Whisker a 2-cell on the right by a 1-cell: `a * h`.
    pub fn rwhisker(&self, a: TwoCellId, h: OneCellId) -> Option<TwoCellId> {
        self.hcomp(a, self.id2(h))
    }

    /// All 2-cells `f -> g`, ascending.
    pub fn cells_between(&self, f: OneCellId, g: OneCellId) -> &[TwoCellId] {
        self.by_endpoints
            .get(&(f, g))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    fn unique_cell(&self, f: OneCellId, g: OneCellId) -> Option<TwoCellId> {
        self.cells_between(f, g).first().copied()
    }

    /// Two-sided inverse of a 2-cell under vertical composition, if any.
    pub fn inverse2(&self, a: TwoCellId) -> Option<TwoCellId> {
        let (f, g) = self.two_endpoints(a);
        self.cells_between(g, f)
            .iter()
            .copied()
            .find(|&w| self.vcomp(w, a) == Some(self.id2(f)) && self.vcomp(a, w) == Some(self.id2(g)))
    }

    pub fn is_invertible2(&self, a: TwoCellId) -> bool {
        self.inverse2(a).is_some()
    }

    /// Objects of the hom-category `a -> b` (the 1-cells), with its
    /// morphisms (the 2-cells between them). Composition is `vcomp`.
    pub fn hom_category(&self, a: ObjId, b: ObjId) -> HomCategory {
        let objects: Vec<OneCellId> = (0..self.n_one_cells())
            .map(OneCellId)
            .filter(|&f| self.src1(f) == a && self.tgt1(f) == b)
            .collect();
        let morphisms: Vec<TwoCellId> = (0..self.n_two_cells())
            .map(TwoCellId)
            .filter(|&c| self.src1(self.src2(c)) == a && self.tgt1(self.src2(c)) == b)
            .collect();
        HomCategory { objects, morphisms }
    }

    /// Composition helpers that name the offending pair when a pasting is
    /// undefined. Validators call these after their typing pass, where every
    /// composite must exist; a message here becomes a violation detail
    /// rather than a panic.
    pub(crate) fn c1(&self, g: OneCellId, f: OneCellId) -> Result<OneCellId, String> {
        self.comp1(g, f)
            .ok_or_else(|| format!("comp1({g}, {f}) undefined"))
    }
    pub(crate) fn vc(&self, b: TwoCellId, a: TwoCellId) -> Result<TwoCellId, String> {
        self.vcomp(b, a)
            .ok_or_else(|| format!("vcomp({b}, {a}) undefined"))
    }
    pub(crate) fn hc(&self, b: TwoCellId, a: TwoCellId) -> Result<TwoCellId, String> {
        self.hcomp(b, a)
            .ok_or_else(|| format!("hcomp({b}, {a}) undefined"))
    }
    pub(crate) fn lw(&self, h: OneCellId, a: TwoCellId) -> Result<TwoCellId, String> {
        self.lwhisker(h, a)
            .ok_or_else(|| format!("whisker {h} * {a} undefined"))
    }
    pub(crate) fn rw(&self, a: TwoCellId, h: OneCellId) -> Result<TwoCellId, String> {
        self.rwhisker(a, h)
            .ok_or_else(|| format!("whisker {a} * {h} undefined"))
    }

    /// In-degrees and out-degrees of 1-cells in the 2-cell graph, used for
    /// exact budget planning of the vertical-composition scans.
    fn degrees(&self) -> (Vec<u64>, Vec<u64>) {
        let mut indeg = vec![0u64; self.n_one_cells()];
        let mut outdeg = vec![0u64; self.n_one_cells()];
        for &(s, t) in &self.two_cells {
            outdeg[s.0] += 1;
            indeg[t.0] += 1;
        }
        (indeg, outdeg)
    }
}

/// A hom-category of a 2-category, by reference: objects are the 1-cells
/// `a -> b`, morphisms the 2-cells between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCategory {
    pub objects: Vec<OneCellId>,
    pub morphisms: Vec<TwoCellId>,
}

fn check_len(name: &str, got: usize, want: usize) -> Result<(), CheckError> {
    if got != want {
        return Err(CheckError::Structural(format!(
            "{name} has length {got}, expected {want}"
        )));
    }
    Ok(())
}

fn pack_table<T: Copy + Into<usize>>(
    name: &str,
    table: &[Option<T>],
    arity: usize,
) -> Result<Vec<u32>, CheckError> {
    let mut out = Vec::with_capacity(table.len());
    for v in table {
        match v {
            None => out.push(NONE_U32),
            Some(x) => {
                let x: usize = (*x).into();
                if x >= arity && arity > 0 {
                    return Err(CheckError::Structural(format!("{name} entry out of range")));
                }
                if x as u64 >= NONE_U32 as u64 {
                    return Err(CheckError::Structural(format!("{name} entry too large")));
                }
                out.push(x as u32);
            }
        }
    }
    Ok(out)
}

impl From<OneCellId> for usize {
    fn from(v: OneCellId) -> usize {
        v.0
    }
}
impl From<TwoCellId> for usize {
    fn from(v: TwoCellId) -> usize {
        v.0
    }
}

/// Check every 2-category axiom by enumeration and report the first
/// violation of each, in a fixed scan order (lexicographic on ids).
///
/// Check names, in report order: `comp1-shape`, `unit1`, `assoc1`,
/// `parallel-endpoints`, `posetal-uniqueness`, `vcomp-shape`, `hcomp-shape`,
/// `unit2`, `assoc2`, `hcomp-functorial`, `interchange`. The `-shape` checks
/// cover "defined iff composable" and endpoint typing of the composition
/// tables (for the derived posetal backend they are the closure of the
/// 2-cell order under composition and whiskering). `unit2` and `assoc2`
/// cover both compositions of 2-cells: the vertical laws in the
/// hom-categories and the horizontal laws against identity 1-cells and
/// triple whiskering, neither of which follows from functoriality plus
/// interchange. When the category is flagged locally posetal and uniqueness
/// holds, the four 2-cell equation axioms are reported as trivially
/// satisfied: both sides of each equation are parallel, and parallel
/// 2-cells are unique.
pub fn validate_2category(
    x: &TwoCategory,
    params: &CheckParams,
) -> Result<ValidationReport, CheckError> {
    let n1 = x.n_one_cells() as u64;
    let n2 = x.n_two_cells() as u64;
    let mut report = ValidationReport::new(x.label());
    let mut plan = Plan::new(x.label(), params);

    // Everything is planned before anything runs.
    plan.charge(n1 * n1)?; // comp1-shape
    plan.charge(n1 * 2)?; // unit1
    plan.charge(n1 * n1 * n1)?; // assoc1
    plan.charge(n2)?; // parallel-endpoints
    plan.charge(n2)?; // posetal-uniqueness
    let (indeg, outdeg) = x.degrees();
    let vpairs: u64 = (0..x.n_one_cells()).map(|f| indeg[f] * outdeg[f]).sum();
    let assoc2_triples: u64 = (0..x.n_two_cells())
        .map(|c| {
            let (s, t) = x.two_endpoints(TwoCellId(c));
            indeg[s.0] * outdeg[t.0]
        })
        .sum();
    let comp1_defined: u64 = x.comp1.iter().filter(|&&v| v != NONE_U32).count() as u64;
    match &x.ops2 {
        TwoCellOps::Tables { .. } => {
            plan.charge(n2 * n2)?; // vcomp-shape
            plan.charge(n2 * n2)?; // hcomp-shape
        }
        TwoCellOps::DerivedPosetal => {
            plan.charge(vpairs)?; // vcomp-shape: transitivity closure
            plan.charge(n2 * n1 * 2)?; // hcomp-shape: whisker closure
        }
    }
    // Horizontal analogue of the vertical degree counts: 2-cells grouped by
    // the objects under their endpoints.
    let (in2, out2) = {
        let mut i = vec![0u64; x.n_objects()];
        let mut o = vec![0u64; x.n_objects()];
        for &(s, _) in &x.two_cells {
            o[x.src1(s).0] += 1;
            i[x.tgt1(s).0] += 1;
        }
        (i, o)
    };
    let hassoc_triples: u64 = (0..x.n_two_cells())
        .map(|b| {
            let f = x.src2(TwoCellId(b));
            in2[x.src1(f).0] * out2[x.tgt1(f).0]
        })
        .sum();
    if x.locally_posetal() {
        // unit2/assoc2/hcomp-functorial/interchange are trivial, charge 0.
    } else {
        plan.charge(n2 * 4)?; // unit2, both compositions
        plan.charge(assoc2_triples + hassoc_triples)?; // assoc2, both compositions
        plan.charge(comp1_defined)?; // hcomp-functorial
        plan.charge(vpairs * vpairs)?; // interchange scan space
    }
    report.charged = plan.total();

    // comp1-shape: defined iff composable, with the right endpoints.
    let comp1_shape = par_scan(n1 * n1, params.threads, |idx| {
        let g = OneCellId((idx / n1) as usize);
        let f = OneCellId((idx % n1) as usize);
        let entry = x.comp1(g, f);
        if !x.composable1(g, f) {
            return entry.map(|h| {
                (
                    idx,
                    vec![CellRef::One(g), CellRef::One(f)],
                    format!("comp1 defined for non-composable pair, yields {h}"),
                )
            });
        }
        match entry {
            None => Some((
                idx,
                vec![CellRef::One(g), CellRef::One(f)],
                "comp1 undefined for a composable pair".to_string(),
            )),
            Some(h) => {
                if x.src1(h) != x.src1(f) || x.tgt1(h) != x.tgt1(g) {
                    Some((
                        idx,
                        vec![CellRef::One(g), CellRef::One(f)],
                        format!("comp1 result {h} has wrong endpoints"),
                    ))
                } else {
                    None
                }
            }
        }
    });
    let comp1_ok = comp1_shape.is_none();
    report.push("comp1-shape", fail_or_pass(comp1_shape, n1 * n1));

    if comp1_ok {
        let unit1 = par_scan(n1 * 2, params.threads, |idx| {
            let f = OneCellId((idx / 2) as usize);
            if idx % 2 == 0 {
                let id = x.id1(x.src1(f));
                let got = x.comp1(f, id)?;
                (got != f).then(|| {
                    (
                        idx,
                        vec![CellRef::One(f)],
                        format!("comp1({f}, {id}) = {got}, expected {f}"),
                    )
                })
            } else {
                let id = x.id1(x.tgt1(f));
                let got = x.comp1(id, f)?;
                (got != f).then(|| {
                    (
                        idx,
                        vec![CellRef::One(f)],
                        format!("comp1({id}, {f}) = {got}, expected {f}"),
                    )
                })
            }
        });
        report.push("unit1", fail_or_pass(unit1, n1 * 2));

        let assoc1 = par_scan(n1 * n1 * n1, params.threads, |idx| {
            let h = OneCellId((idx / (n1 * n1)) as usize);
            let g = OneCellId(((idx / n1) % n1) as usize);
            let f = OneCellId((idx % n1) as usize);
            if !x.composable1(g, f) || !x.composable1(h, g) {
                return None;
            }
            let gf = x.comp1(g, f)?;
            let hg = x.comp1(h, g)?;
            let left = x.comp1(h, gf)?;
            let right = x.comp1(hg, f)?;
            (left != right).then(|| {
                (
                    idx,
                    vec![CellRef::One(h), CellRef::One(g), CellRef::One(f)],
                    format!("comp1({h}, comp1({g}, {f})) = {left} but comp1(comp1({h}, {g}), {f}) = {right}"),
                )
            })
        });
        report.push("assoc1", fail_or_pass(assoc1, n1 * n1 * n1));
    } else {
        let reason = "comp1-shape failed".to_string();
        report.push("unit1", AxiomStatus::Skipped { reason: reason.clone() });
        report.push("assoc1", AxiomStatus::Skipped { reason });
    }

    let parallel = par_scan(n2, params.threads, |idx| {
        let a = TwoCellId(idx as usize);
        let (s, t) = x.two_endpoints(a);
        (x.one_endpoints(s) != x.one_endpoints(t)).then(|| {
            (
                idx,
                vec![CellRef::Two(a)],
                format!("endpoints {s} and {t} are not parallel"),
            )
        })
    });
    let parallel_ok = parallel.is_none();
    report.push("parallel-endpoints", fail_or_pass(parallel, n2));

    let posetal_status = if !x.locally_posetal() {
        AxiomStatus::Trivial {
            reason: "not flagged locally posetal".to_string(),
        }
    } else {
        let mut hit = None;
        for (&(s, t), cells) in &x.by_endpoints {
            if cells.len() > 1 {
                hit = Some(AxiomStatus::Fail {
                    witness: vec![CellRef::Two(cells[0]), CellRef::Two(cells[1])],
                    detail: format!("two distinct 2-cells {s} -> {t}"),
                });
                break;
            }
        }
        hit.unwrap_or(AxiomStatus::Pass { instances: n2 })
    };
    let posetal_ok = !matches!(posetal_status, AxiomStatus::Fail { .. });
    report.push("posetal-uniqueness", posetal_status);
    if !posetal_ok {
        report.ok = false;
    }

    if !parallel_ok || !posetal_ok || !comp1_ok {
        let reason = "2-cell structure checks failed".to_string();
        for axiom in [
            "vcomp-shape",
            "hcomp-shape",
            "unit2",
            "assoc2",
            "hcomp-functorial",
            "interchange",
        ] {
            report.push(axiom, AxiomStatus::Skipped { reason: reason.clone() });
        }
        return Ok(report);
    }

    // vcomp-shape / hcomp-shape.
    let (vshape, hshape) = match &x.ops2 {
        TwoCellOps::Tables { .. } => {
            let v = par_scan(n2 * n2, params.threads, |idx| {
                let b = TwoCellId((idx / n2) as usize);
                let a = TwoCellId((idx % n2) as usize);
                let entry = x.vcomp(b, a);
                if !x.vcomposable(b, a) {
                    return entry.map(|c| {
                        (
                            idx,
                            vec![CellRef::Two(b), CellRef::Two(a)],
                            format!("vcomp defined for non-composable pair, yields {c}"),
                        )
                    });
                }
                match entry {
                    None => Some((
                        idx,
                        vec![CellRef::Two(b), CellRef::Two(a)],
                        "vcomp undefined for a composable pair".to_string(),
                    )),
                    Some(c) => (x.src2(c) != x.src2(a) || x.tgt2(c) != x.tgt2(b)).then(|| {
                        (
                            idx,
                            vec![CellRef::Two(b), CellRef::Two(a)],
                            format!("vcomp result {c} has wrong endpoints"),
                        )
                    }),
                }
            });
            let h = par_scan(n2 * n2, params.threads, |idx| {
                let b = TwoCellId((idx / n2) as usize);
                let a = TwoCellId((idx % n2) as usize);
                let entry = x.hcomp(b, a);
                if !x.hcomposable(b, a) {
                    return entry.map(|c| {
                        (
                            idx,
                            vec![CellRef::Two(b), CellRef::Two(a)],
                            format!("hcomp defined for non-composable pair, yields {c}"),
                        )
                    });
                }
                let src = x.comp1(x.src2(b), x.src2(a));
                let tgt = x.comp1(x.tgt2(b), x.tgt2(a));
                match (entry, src, tgt) {
                    (None, _, _) => Some((
                        idx,
                        vec![CellRef::Two(b), CellRef::Two(a)],
                        "hcomp undefined for a composable pair".to_string(),
                    )),
                    (Some(c), Some(s), Some(t)) => {
                        (x.src2(c) != s || x.tgt2(c) != t).then(|| {
                            (
                                idx,
                                vec![CellRef::Two(b), CellRef::Two(a)],
                                format!("hcomp result {c} has wrong endpoints"),
                            )
                        })
                    }
                    _ => None,
                }
            });
            (v, h)
        }
        TwoCellOps::DerivedPosetal => {
            // Transitivity: every composable vertical pair has a composite.
            let v = par_scan(n2, params.threads, |idx| {
                let a = TwoCellId(idx as usize);
                let mid = x.tgt2(a);
                for (&(_, t), cells) in x
                    .by_endpoints
                    .range((mid, OneCellId(0))..=(mid, OneCellId(usize::MAX)))
                {
                    let b = cells[0];
                    if x.unique_cell(x.src2(a), t).is_none() {
                        return Some((
                            idx,
                            vec![CellRef::Two(b), CellRef::Two(a)],
                            format!(
                                "no 2-cell {} -> {t}: the order is not transitive",
                                x.src2(a)
                            ),
                        ));
                    }
                }
                None
            });
            // Whisker closure: composing either side with a 1-cell stays
            // inside the order.
            let h = par_scan(n2, params.threads, |idx| {
                let a = TwoCellId(idx as usize);
                let (f, f2) = x.two_endpoints(a);
                for h in (0..x.n_one_cells()).map(OneCellId) {
                    if x.composable1(f, h) {
                        let (s, t) = (x.comp1(f, h)?, x.comp1(f2, h)?);
                        if x.unique_cell(s, t).is_none() {
                            return Some((
                                idx,
                                vec![CellRef::Two(a), CellRef::One(h)],
                                format!("right whisker by {h} escapes the order: no 2-cell {s} -> {t}"),
                            ));
                        }
                    }
                    if x.composable1(h, f) {
                        let (s, t) = (x.comp1(h, f)?, x.comp1(h, f2)?);
                        if x.unique_cell(s, t).is_none() {
                            return Some((
                                idx,
                                vec![CellRef::Two(a), CellRef::One(h)],
                                format!("left whisker by {h} escapes the order: no 2-cell {s} -> {t}"),
                            ));
                        }
                    }
                }
                None
            });
            (v, h)
        }
    };
    let shape2_ok = vshape.is_none() && hshape.is_none();
    let (vn, hn) = match &x.ops2 {
        TwoCellOps::Tables { .. } => (n2 * n2, n2 * n2),
        TwoCellOps::DerivedPosetal => (vpairs, n2 * n1 * 2),
    };
    report.push("vcomp-shape", fail_or_pass(vshape, vn));
    report.push("hcomp-shape", fail_or_pass(hshape, hn));

    if !shape2_ok {
        let reason = "vcomp-shape or hcomp-shape failed".to_string();
        for axiom in ["unit2", "assoc2", "hcomp-functorial", "interchange"] {
            report.push(axiom, AxiomStatus::Skipped { reason: reason.clone() });
        }
        return Ok(report);
    }

    if x.locally_posetal() {
        let reason = "parallel 2-cells are unique".to_string();
        for axiom in ["unit2", "assoc2", "hcomp-functorial", "interchange"] {
            report.push(
                axiom,
                AxiomStatus::Trivial {
                    reason: reason.clone(),
                },
            );
        }
        return Ok(report);
    }

    // Units for both compositions: vertical against id2 of the endpoint
    // 1-cells, horizontal against id2 of the identity 1-cells (whiskering
    // with an identity 1-cell must be the identity operation).
    let unit2 = par_scan(n2 * 4, params.threads, |idx| {
        let a = TwoCellId((idx / 4) as usize);
        match idx % 4 {
            0 => {
                let id = x.id2(x.src2(a));
                let got = x.vcomp(a, id)?;
                (got != a).then(|| {
                    (
                        idx,
                        vec![CellRef::Two(a)],
                        format!("vcomp({a}, {id}) = {got}, expected {a}"),
                    )
                })
            }
            1 => {
                let id = x.id2(x.tgt2(a));
                let got = x.vcomp(id, a)?;
                (got != a).then(|| {
                    (
                        idx,
                        vec![CellRef::Two(a)],
                        format!("vcomp({id}, {a}) = {got}, expected {a}"),
                    )
                })
            }
            2 => {
                let id = x.id2(x.id1(x.src1(x.src2(a))));
                let got = x.hcomp(a, id)?;
                (got != a).then(|| {
                    (
                        idx,
                        vec![CellRef::Two(a)],
                        format!("hcomp({a}, {id}) = {got}, expected {a}"),
                    )
                })
            }
            _ => {
                let id = x.id2(x.id1(x.tgt1(x.src2(a))));
                let got = x.hcomp(id, a)?;
                (got != a).then(|| {
                    (
                        idx,
                        vec![CellRef::Two(a)],
                        format!("hcomp({id}, {a}) = {got}, expected {a}"),
                    )
                })
            }
        }
    });
    report.push("unit2", fail_or_pass(unit2, n2 * 4));

    // Middle-cell scan: triples (c, b, a) with b fixed by the flat index,
    // first vertically then horizontally composable.
    let assoc2 = par_scan(n2, params.threads, |idx| {
        let b = TwoCellId(idx as usize);
        for c in (0..x.n_two_cells()).map(TwoCellId) {
            if !x.vcomposable(c, b) {
                continue;
            }
            for a in (0..x.n_two_cells()).map(TwoCellId) {
                if !x.vcomposable(b, a) {
                    continue;
                }
                let left = x.vcomp(c, x.vcomp(b, a)?)?;
                let right = x.vcomp(x.vcomp(c, b)?, a)?;
                if left != right {
                    return Some((
                        idx,
                        vec![CellRef::Two(c), CellRef::Two(b), CellRef::Two(a)],
                        format!("vertical composition is not associative: {left} vs {right}"),
                    ));
                }
            }
        }
        for c in (0..x.n_two_cells()).map(TwoCellId) {
            if !x.hcomposable(c, b) {
                continue;
            }
            for a in (0..x.n_two_cells()).map(TwoCellId) {
                if !x.hcomposable(b, a) {
                    continue;
                }
                let left = x.hcomp(c, x.hcomp(b, a)?)?;
                let right = x.hcomp(x.hcomp(c, b)?, a)?;
                if left != right {
                    return Some((
                        idx,
                        vec![CellRef::Two(c), CellRef::Two(b), CellRef::Two(a)],
                        format!("horizontal composition is not associative: {left} vs {right}"),
                    ));
                }
            }
        }
        None
    });
    report.push("assoc2", fail_or_pass(assoc2, assoc2_triples + hassoc_triples));

    let hfun = par_scan(n1 * n1, params.threads, |idx| {
        let g = OneCellId((idx / n1) as usize);
        let f = OneCellId((idx % n1) as usize);
        if !x.composable1(g, f) {
            return None;
        }
        let gf = x.comp1(g, f)?;
        let got = x.hcomp(x.id2(g), x.id2(f))?;
        (got != x.id2(gf)).then(|| {
            (
                idx,
                vec![CellRef::One(g), CellRef::One(f)],
                format!("id2({g}) * id2({f}) = {got}, expected id2({gf})"),
            )
        })
    });
    report.push("hcomp-functorial", fail_or_pass(hfun, comp1_defined));

    // Interchange: (b2 . b1) * (a2 . a1) = (b2 * a2) . (b1 * a1), scanned
    // over vertically composable pairs on each side.
    let vc_pairs: Vec<(TwoCellId, TwoCellId)> = {
        let mut v = Vec::new();
        for b2 in (0..x.n_two_cells()).map(TwoCellId) {
            for b1 in (0..x.n_two_cells()).map(TwoCellId) {
                if x.vcomposable(b2, b1) {
                    v.push((b2, b1));
                }
            }
        }
        v
    };
    let np = vc_pairs.len() as u64;
    let interchange = par_scan(np * np, params.threads, |idx| {
        let (b2, b1) = vc_pairs[(idx / np) as usize];
        let (a2, a1) = vc_pairs[(idx % np) as usize];
        if !x.hcomposable(b1, a1) {
            return None;
        }
        let left = x.hcomp(x.vcomp(b2, b1)?, x.vcomp(a2, a1)?)?;
        let right = x.vcomp(x.hcomp(b2, a2)?, x.hcomp(b1, a1)?)?;
        (left != right).then(|| {
            (
                idx,
                vec![
                    CellRef::Two(b2),
                    CellRef::Two(b1),
                    CellRef::Two(a2),
                    CellRef::Two(a1),
                ],
                format!("interchange fails: {left} vs {right}"),
            )
        })
    });
    report.push("interchange", fail_or_pass(interchange, vpairs * vpairs));

    Ok(report)
}

fn fail_or_pass(found: Option<Found>, instances: u64) -> AxiomStatus {
    match found {
        Some((_, witness, detail)) => AxiomStatus::Fail { witness, detail },
        None => AxiomStatus::Pass { instances },
    }
}

/// The 2-category with one object, one 1-cell and one 2-cell.
pub fn terminal_2category() -> Arc<TwoCategory> {
    TwoCategory::from_tables(TwoCategoryData {
        label: "terminal".to_string(),
        n_objects: 1,
        one_cells: vec![(ObjId(0), ObjId(0))],
        id1: vec![OneCellId(0)],
        comp1: vec![Some(OneCellId(0))],
        two_cells: vec![(OneCellId(0), OneCellId(0))],
        id2: vec![TwoCellId(0)],
        vcomp: vec![Some(TwoCellId(0))],
        hcomp: vec![Some(TwoCellId(0))],
        locally_posetal: true,
    })
    .expect("terminal tables are well-formed")
}

/// Index arithmetic of a product 2-category: all cells are pairs, laid out
/// row-major with the second factor minor.
#[derive(Debug, Clone, Copy)]
pub struct ProductMaps {
    pub n_obj_right: usize,
    pub n_one_right: usize,
    pub n_two_right: usize,
}

impl ProductMaps {
    /// Only the right factor's sizes matter for the layout.
    pub fn for_factors(y: &TwoCategory) -> Self {
        ProductMaps {
            n_obj_right: y.n_objects(),
            n_one_right: y.n_one_cells(),
            n_two_right: y.n_two_cells(),
        }
    }
    pub fn obj(&self, b: ObjId, c: ObjId) -> ObjId {
        ObjId(b.0 * self.n_obj_right + c.0)
    }
    pub fn split_obj(&self, o: ObjId) -> (ObjId, ObjId) {
        (ObjId(o.0 / self.n_obj_right), ObjId(o.0 % self.n_obj_right))
    }
    pub fn one(&self, f: OneCellId, g: OneCellId) -> OneCellId {
        OneCellId(f.0 * self.n_one_right + g.0)
    }
    pub fn split_one(&self, h: OneCellId) -> (OneCellId, OneCellId) {
        (
            OneCellId(h.0 / self.n_one_right),
            OneCellId(h.0 % self.n_one_right),
        )
    }
    pub fn two(&self, a: TwoCellId, b: TwoCellId) -> TwoCellId {
        TwoCellId(a.0 * self.n_two_right + b.0)
    }
    pub fn split_two(&self, c: TwoCellId) -> (TwoCellId, TwoCellId) {
        (
            TwoCellId(c.0 / self.n_two_right),
            TwoCellId(c.0 % self.n_two_right),
        )
    }
}

/// Hard cap on dense 2-cell tables built by [`product`].
const PRODUCT_TABLE_LIMIT: u64 = 1 << 26;

/// Componentwise product of two 2-categories.
///
/// When both factors are locally posetal the product is too, and is built on
/// the derived backend (no dense 2-cell tables). Otherwise dense tables are
/// assembled, guarded by a size limit.
pub fn product(x: &Arc<TwoCategory>, y: &Arc<TwoCategory>) -> Result<Arc<TwoCategory>, CheckError> {
    let maps = ProductMaps::for_factors(y);
    let label = format!("product({}, {})", x.label(), y.label());
    let n_objects = x.n_objects() * y.n_objects();
    let mut one_cells = Vec::with_capacity(x.n_one_cells() * y.n_one_cells());
    for f in (0..x.n_one_cells()).map(OneCellId) {
        for g in (0..y.n_one_cells()).map(OneCellId) {
            one_cells.push((
                maps.obj(x.src1(f), y.src1(g)),
                maps.obj(x.tgt1(f), y.tgt1(g)),
            ));
        }
    }
    let mut id1 = Vec::with_capacity(n_objects);
    for b in (0..x.n_objects()).map(ObjId) {
        for c in (0..y.n_objects()).map(ObjId) {
            id1.push(maps.one(x.id1(b), y.id1(c)));
        }
    }
    let n1 = one_cells.len();
    let mut comp1 = vec![None; n1 * n1];
    for f2 in (0..x.n_one_cells()).map(OneCellId) {
        for g2 in (0..y.n_one_cells()).map(OneCellId) {
            for f1 in (0..x.n_one_cells()).map(OneCellId) {
                for g1 in (0..y.n_one_cells()).map(OneCellId) {
                    if let (Some(f), Some(g)) = (x.comp1(f2, f1), y.comp1(g2, g1)) {
                        let gidx = maps.one(f2, g2).0 * n1 + maps.one(f1, g1).0;
                        comp1[gidx] = Some(maps.one(f, g));
                    }
                }
            }
        }
    }
    let mut two_cells = Vec::with_capacity(x.n_two_cells() * y.n_two_cells());
    for a in (0..x.n_two_cells()).map(TwoCellId) {
        for b in (0..y.n_two_cells()).map(TwoCellId) {
            two_cells.push((
                maps.one(x.src2(a), y.src2(b)),
                maps.one(x.tgt2(a), y.tgt2(b)),
            ));
        }
    }
    let mut id2 = Vec::with_capacity(n1);
    for f in (0..x.n_one_cells()).map(OneCellId) {
        for g in (0..y.n_one_cells()).map(OneCellId) {
            id2.push(maps.two(x.id2(f), y.id2(g)));
        }
    }

    if x.locally_posetal() && y.locally_posetal() {
        return TwoCategory::from_posetal(label, n_objects, one_cells, id1, comp1, two_cells, id2);
    }

    let n2 = two_cells.len() as u64;
    if n2 * n2 > PRODUCT_TABLE_LIMIT {
        return Err(CheckError::TooLarge {
            what: format!("2-cell tables of {label}"),
            size: n2 * n2,
            limit: PRODUCT_TABLE_LIMIT,
        });
    }
    let n2 = two_cells.len();
    let mut vcomp = vec![None; n2 * n2];
    let mut hcomp = vec![None; n2 * n2];
    for a2 in (0..x.n_two_cells()).map(TwoCellId) {
        for b2 in (0..y.n_two_cells()).map(TwoCellId) {
            for a1 in (0..x.n_two_cells()).map(TwoCellId) {
                for b1 in (0..y.n_two_cells()).map(TwoCellId) {
                    let row = maps.two(a2, b2).0 * n2 + maps.two(a1, b1).0;
                    if let (Some(a), Some(b)) = (x.vcomp(a2, a1), y.vcomp(b2, b1)) {
                        vcomp[row] = Some(maps.two(a, b));
                    }
                    if let (Some(a), Some(b)) = (x.hcomp(a2, a1), y.hcomp(b2, b1)) {
                        hcomp[row] = Some(maps.two(a, b));
                    }
                }
            }
        }
    }
    TwoCategory::from_tables(TwoCategoryData {
        label,
        n_objects,
        one_cells,
        id1,
        comp1,
        two_cells,
        id2,
        vcomp,
        hcomp,
        locally_posetal: x.locally_posetal() && y.locally_posetal(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_is_valid() {
        let t = terminal_2category();
        assert_eq!(t.n_objects(), 1);
        assert_eq!(t.n_one_cells(), 1);
        assert_eq!(t.n_two_cells(), 1);
        let report = validate_2category(&t, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());
    }

    #[test]
    fn product_of_terminals_is_terminal_sized() {
        let t = terminal_2category();
        let p = product(&t, &t).unwrap();
        assert_eq!(p.n_objects(), 1);
        assert_eq!(p.n_one_cells(), 1);
        assert_eq!(p.n_two_cells(), 1);
        let report = validate_2category(&p, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());
    }

    #[test]
    fn budget_refusal_is_an_error() {
        let t = terminal_2category();
        let err = validate_2category(&t, &CheckParams::with_budget(3)).unwrap_err();
        assert!(matches!(err, CheckError::BudgetExceeded { .. }));
    }

    #[test]
    fn hom_category_of_terminal() {
        let t = terminal_2category();
        let hom = t.hom_category(ObjId(0), ObjId(0));
        assert_eq!(hom.objects.len(), 1);
        assert_eq!(hom.morphisms.len(), 1);
    }

    #[test]
    fn par_scan_matches_sequential() {
        let probe = |idx: u64| (idx % 37 == 19).then(|| (idx, Vec::new(), String::new()));
        let seq = par_scan(10_000, 1, probe);
        for threads in [2, 3, 7, 16] {
            assert_eq!(par_scan(10_000, threads, probe), seq);
        }
        assert_eq!(seq.unwrap().0, 19);
    }

    // One object, an idempotent 1-cell p, and hom(p, p) = Z/3 under vertical
    // composition. The hcomp rows for 2-cells over p are supplied by the caller,
    // which is where the interesting failures live: vertical structure, shapes,
    // functoriality, and interchange can all hold while a horizontal law breaks.
    fn idempotent_loop(label: &str, hcomp_rows: [[u32; 4]; 4]) -> Arc<TwoCategory> {
        let pack = |t: u32| Some(TwoCellId(t as usize));
        let mut vcomp = vec![None; 16];
        vcomp[0] = pack(0);
        for b in 1..4usize {
            for a in 1..4usize {
                vcomp[b * 4 + a] = pack(((b as u32 - 1 + a as u32 - 1) % 3) + 1);
            }
        }
        TwoCategory::from_tables(TwoCategoryData {
            label: label.to_string(),
            n_objects: 1,
            one_cells: vec![(ObjId(0), ObjId(0)), (ObjId(0), ObjId(0))],
            id1: vec![OneCellId(0)],
            comp1: [0u32, 1, 1, 1]
                .iter()
                .map(|&f| Some(OneCellId(f as usize)))
                .collect(),
            two_cells: vec![
                (OneCellId(0), OneCellId(0)),
                (OneCellId(1), OneCellId(1)),
                (OneCellId(1), OneCellId(1)),
                (OneCellId(1), OneCellId(1)),
            ],
            id2: vec![TwoCellId(0), TwoCellId(1)],
            vcomp,
            hcomp: hcomp_rows.iter().flatten().map(|&t| pack(t)).collect(),
            locally_posetal: false,
        })
        .unwrap()
    }

    #[test]
    fn horizontal_unit_and_associativity_are_independent_axioms() {
        // Projection hcomp: b after a forgets a entirely (except against the
        // identity 2-cell on the identity 1-cell). Absorbing hcomp: any pair of
        // 2-cells over p composes to the identity on p. Both satisfy every
        // vertical law, functoriality, and interchange.
        let projection = idempotent_loop(
            "proj",
            [[0, 1, 2, 3], [1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 3]],
        );
        let report = validate_2category(&projection, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());

        let absorbing = idempotent_loop(
            "kill",
            [[0, 1, 2, 3], [1, 1, 1, 1], [2, 1, 1, 1], [3, 1, 1, 1]],
        );
        let report = validate_2category(&absorbing, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());

        // Collapsing the left-unit row to the identity on p keeps interchange
        // and functoriality intact; only the horizontal unit law can see it.
        let unitless = idempotent_loop(
            "unitless",
            [[0, 1, 1, 1], [1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 3]],
        );
        let report = validate_2category(&unitless, &CheckParams::default()).unwrap();
        assert_eq!(report.failed_axioms(), vec!["unit2"], "{}", report.render_text());
    }

    #[test]
    fn out_of_range_is_structural() {
        let err = TwoCategory::from_tables(TwoCategoryData {
            label: "broken".to_string(),
            n_objects: 1,
            one_cells: vec![(ObjId(0), ObjId(7))],
            id1: vec![OneCellId(0)],
            comp1: vec![Some(OneCellId(0))],
            two_cells: vec![(OneCellId(0), OneCellId(0))],
            id2: vec![TwoCellId(0)],
            vcomp: vec![Some(TwoCellId(0))],
            hcomp: vec![Some(TwoCellId(0))],
            locally_posetal: false,
        })
        .unwrap_err();
        assert!(matches!(err, CheckError::Structural(_)));
    }
}
