//! The on-disk document format and the loader that resolves references
//! between documents.
//!
//! A document is a sequence of `key: value` lines. Blank lines and lines
//! whose first non-space character is `#` are ignored; a line that starts
//! with whitespace continues the previous value, which is how large tables
//! stay readable. Every document names its shape with a `kind:` field; the
//! remaining keys are fixed per kind and checked against an allowlist so
//! typos surface as parse errors instead of silently missing data.
//!
//! Cross-references are document names resolved against sibling `.dl` files
//! in the same directory. Categories can also be referenced by generator
//! expression: `terminal`, `rel(n)`,
//! `ordered_monoid(truncated-add, {0,1,...,k})`, `discrete_monoid(t00 t01
//! ...)`, and `product(a, b)` whose arguments are again references. The
//! loader caches every resolved category under the canonical form of its
//! reference, so each mention of `rel(2)` in a manifest is the same
//! allocation and pointer-equality shortcuts apply.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use distlax::core2::{
    product, terminal_2category, CheckError, CheckParams, ObjId, OneCellId, TwoCategory,
    TwoCategoryData, TwoCellId,
};
use distlax::currying::{LaxOpFragment, NestedLaxFunctor};
use distlax::distlaw::{Dist2Morphism, DistMorphism, DistributiveLaw};
use distlax::functors::{LaxFunctor, Modification, OplaxTransformation};
use distlax::instances::{discrete_monoid_delooping, rel_2category, truncated_addition_chain};

pub(crate) fn structural(msg: String) -> CheckError {
    CheckError::Structural(msg)
}

/// The keys a document of the given kind may carry, `kind` itself excluded.
/// `None` means the kind is unknown.
fn allowed_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "category" => &[
            "label",
            "generator",
            "objects",
            "one-cells",
            "id1",
            "comp1",
            "two-cells",
            "id2",
            "vcomp",
            "hcomp",
            "locally-posetal",
        ],
        "functor" => &[
            "label", "dom", "cod", "obj-map", "one-map", "two-map", "gamma", "iota",
        ],
        "oplax" => &["label", "src", "tgt", "obj-comp", "cell-comp"],
        "modification" => &["label", "src", "tgt", "comp"],
        "law" => &["label", "b", "c", "d", "l", "m", "sigma"],
        "dist-morphism" => &["label", "src", "tgt", "theta-c", "theta-b"],
        "dist-2morphism" => &["label", "src", "tgt", "beth-c", "beth-b"],
        "nested" => &[
            "label",
            "inner-dom",
            "inner-cod",
            "outer-dom",
            "objects",
            "one-cells",
            "two-cells",
            "outer-obj-map",
            "outer-one-map",
            "outer-two-map",
            "outer-gamma",
            "outer-iota",
        ],
        _ => return None,
    })
}

/// The integer-table fields the corrupt command may perturb, per kind.
/// Reference fields are excluded: corrupting a name changes which documents
/// are read, not what they say.
pub fn corruptible_fields(kind: &str) -> &'static [&'static str] {
    match kind {
        "category" => &[
            "one-cells",
            "id1",
            "comp1",
            "two-cells",
            "id2",
            "vcomp",
            "hcomp",
        ],
        "functor" => &["obj-map", "one-map", "two-map", "gamma", "iota"],
        "oplax" => &["obj-comp", "cell-comp"],
        "modification" => &["comp"],
        "law" => &["sigma"],
        "nested" => &[
            "outer-obj-map",
            "outer-one-map",
            "outer-two-map",
            "outer-gamma",
            "outer-iota",
        ],
        _ => &[],
    }
}

/// One parsed document: its kind plus the remaining fields in file order.
/// Values are whitespace-joined but otherwise uninterpreted; meaning is
/// assigned when a loader builds the semantic structure.
#[derive(Debug, Clone)]
pub struct RawDoc {
    pub name: String,
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl RawDoc {
    pub fn parse(name: &str, text: &str) -> Result<RawDoc, CheckError> {
        let mut fields: Vec<(String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            let trimmed = line.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if line.len() != trimmed.len() {
                let Some(last) = fields.last_mut() else {
                    return Err(structural(format!(
                        "document {name} line {}: continuation before any field",
                        idx + 1
                    )));
                };
                last.1.push(' ');
                last.1.push_str(trimmed);
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(structural(format!(
                    "document {name} line {}: expected `key: value`",
                    idx + 1
                )));
            };
            let key = key.trim();
            if fields.iter().any(|(k, _)| k == key) {
                return Err(structural(format!("document {name}: duplicate field {key}")));
            }
            fields.push((key.to_string(), value.trim().to_string()));
        }
        let kind_pos = fields
            .iter()
            .position(|(k, _)| k == "kind")
            .ok_or_else(|| structural(format!("document {name}: missing kind field")))?;
        let kind = fields.remove(kind_pos).1;
        let Some(allowed) = allowed_keys(&kind) else {
            return Err(structural(format!("document {name}: unknown kind {kind}")));
        };
        for (key, _) in &fields {
            if !allowed.contains(&key.as_str()) {
                return Err(structural(format!(
                    "document {name}: field {key} does not belong to kind {kind}"
                )));
            }
        }
        Ok(RawDoc {
            name: name.to_string(),
            kind,
            fields,
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, CheckError> {
        self.get(key)
            .ok_or_else(|| structural(format!("document {}: missing field {key}", self.name)))
    }

    /// Serialize back to document text. Field order is preserved and long
    /// values wrap with two-space continuation indents, so a rewritten
    /// document diffs cleanly against its source.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_field(&mut out, "kind", &self.kind);
        for (key, value) in &self.fields {
            render_field(&mut out, key, value);
        }
        out
    }
}

fn render_field(out: &mut String, key: &str, value: &str) {
    let mut line = format!("{key}:");
    let mut first = true;
    for tok in value.split_whitespace() {
        if !first && line.len() + 1 + tok.len() > 96 {
            out.push_str(&line);
            out.push('\n');
            line = " ".to_string();
        }
        line.push(' ');
        line.push_str(tok);
        first = false;
    }
    out.push_str(&line);
    out.push('\n');
}

fn parse_usize(doc: &str, key: &str, tok: &str) -> Result<usize, CheckError> {
    tok.parse()
        .map_err(|_| structural(format!("document {doc}: field {key}: bad number {tok}")))
}

fn parse_usize_list(doc: &str, key: &str, value: &str) -> Result<Vec<usize>, CheckError> {
    value
        .split_whitespace()
        .map(|t| parse_usize(doc, key, t))
        .collect()
}

fn parse_opt_list(doc: &str, key: &str, value: &str) -> Result<Vec<Option<usize>>, CheckError> {
    value
        .split_whitespace()
        .map(|t| {
            if t == "-" {
                Ok(None)
            } else {
                parse_usize(doc, key, t).map(Some)
            }
        })
        .collect()
}

fn parse_pair_list(doc: &str, key: &str, value: &str) -> Result<Vec<(usize, usize)>, CheckError> {
    value
        .split_whitespace()
        .map(|t| {
            let Some((a, b)) = t.split_once('>') else {
                return Err(structural(format!(
                    "document {doc}: field {key}: endpoint {t} is not src>tgt"
                )));
            };
            Ok((parse_usize(doc, key, a)?, parse_usize(doc, key, b)?))
        })
        .collect()
}

fn parse_bool(doc: &str, key: &str, value: &str) -> Result<bool, CheckError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(structural(format!(
            "document {doc}: field {key}: expected true or false, got {other}"
        ))),
    }
}

fn parse_names(value: &str) -> Vec<String> {
    value.split_whitespace().map(str::to_string).collect()
}

/// A list of exactly `want` indices, each below `range`.
fn ranged_list(
    doc: &str,
    key: &str,
    value: &str,
    want: usize,
    range: usize,
) -> Result<Vec<usize>, CheckError> {
    let list = parse_usize_list(doc, key, value)?;
    if list.len() != want {
        return Err(structural(format!(
            "document {doc}: field {key}: {} entries, expected {want}",
            list.len()
        )));
    }
    if let Some(v) = list.iter().find(|&&v| v >= range) {
        return Err(structural(format!(
            "document {doc}: field {key}: entry {v} out of range (< {range})"
        )));
    }
    Ok(list)
}

fn ranged_opt_list(
    doc: &str,
    key: &str,
    value: &str,
    want: usize,
    range: usize,
) -> Result<Vec<Option<usize>>, CheckError> {
    let list = parse_opt_list(doc, key, value)?;
    if list.len() != want {
        return Err(structural(format!(
            "document {doc}: field {key}: {} entries, expected {want}",
            list.len()
        )));
    }
    if let Some(v) = list.iter().flatten().find(|&&v| v >= range) {
        return Err(structural(format!(
            "document {doc}: field {key}: entry {v} out of range (< {range})"
        )));
    }
    Ok(list)
}

pub(crate) fn is_doc_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// Output names become `<name>.dl` in the manifest directory, so they use
/// the same alphabet as references.
pub fn check_out_name(name: &str) -> Result<(), CheckError> {
    if is_doc_name(name) {
        Ok(())
    } else {
        Err(structural(format!(
            "output name {name} may use only letters, digits, - and _"
        )))
    }
}

/// Split at top-level commas, respecting nesting in `()` and `{}`.
fn split_args(s: &str) -> Result<Vec<String>, String> {
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '{' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced parentheses".to_string());
                }
                cur.push(ch);
            }
            ',' if depth == 0 => {
                args.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".to_string());
    }
    args.push(cur.trim().to_string());
    if args.iter().any(|a| a.is_empty()) {
        return Err("empty argument".to_string());
    }
    Ok(args)
}

/// The carrier of an ordered monoid: `{0,1,...,k}` spelled out, or a bare
/// number naming the top element.
fn parse_carrier(s: &str) -> Result<usize, String> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        let elems: Vec<usize> = inner
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| format!("bad carrier element {t}")))
            .collect::<Result<_, _>>()?;
        if elems.is_empty() {
            return Err("empty carrier".to_string());
        }
        for (i, &e) in elems.iter().enumerate() {
            if e != i {
                return Err("carrier must be {0,1,...,k}".to_string());
            }
        }
        Ok(elems.len() - 1)
    } else {
        s.parse().map_err(|_| format!("bad carrier {s}"))
    }
}

/// A category reference: a sibling document name or a generator expression.
/// Generator names shadow document names, so a document cannot be called
/// `terminal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatRef {
    Doc(String),
    Terminal,
    Rel(usize),
    TruncatedChain(usize),
    DiscreteMonoid(Vec<usize>),
    Product(Box<CatRef>, Box<CatRef>),
}

impl CatRef {
    pub fn parse(s: &str) -> Result<CatRef, CheckError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(structural("empty category reference".to_string()));
        }
        let bad = |msg: String| structural(format!("category reference {s}: {msg}"));
        let Some(open) = s.find('(') else {
            if s == "terminal" {
                return Ok(CatRef::Terminal);
            }
            if !is_doc_name(s) {
                return Err(bad("not a document name".to_string()));
            }
            return Ok(CatRef::Doc(s.to_string()));
        };
        if !s.ends_with(')') {
            return Err(bad("unbalanced parentheses".to_string()));
        }
        let head = s[..open].trim();
        let args = split_args(&s[open + 1..s.len() - 1]).map_err(bad)?;
        match head {
            "rel" => {
                if args.len() != 1 {
                    return Err(bad("rel takes one argument".to_string()));
                }
                let n = args[0]
                    .parse()
                    .map_err(|_| bad(format!("bad carrier size {}", args[0])))?;
                Ok(CatRef::Rel(n))
            }
            "ordered_monoid" => {
                if args.len() != 2 {
                    return Err(bad("ordered_monoid takes an operation and a carrier".to_string()));
                }
                if args[0] != "truncated-add" {
                    return Err(bad(format!(
                        "unsupported operation {}; only truncated-add is built in",
                        args[0]
                    )));
                }
                let top = parse_carrier(&args[1]).map_err(bad)?;
                Ok(CatRef::TruncatedChain(top))
            }
            "discrete_monoid" => {
                let mut table = Vec::new();
                for arg in &args {
                    for tok in arg.split_whitespace() {
                        table.push(
                            tok.parse()
                                .map_err(|_| bad(format!("bad table entry {tok}")))?,
                        );
                    }
                }
                let n = (0..=table.len()).find(|n| n * n == table.len());
                if n.is_none() || table.is_empty() {
                    return Err(bad("operation table is not square".to_string()));
                }
                Ok(CatRef::DiscreteMonoid(table))
            }
            "product" => {
                if args.len() != 2 {
                    return Err(bad("product takes two arguments".to_string()));
                }
                Ok(CatRef::Product(
                    Box::new(CatRef::parse(&args[0])?),
                    Box::new(CatRef::parse(&args[1])?),
                ))
            }
            other => Err(bad(format!("unknown generator {other}"))),
        }
    }
}

impl fmt::Display for CatRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatRef::Doc(name) => write!(f, "{name}"),
            CatRef::Terminal => write!(f, "terminal"),
            CatRef::Rel(n) => write!(f, "rel({n})"),
            CatRef::TruncatedChain(top) => {
                let carrier: Vec<String> = (0..=*top).map(|i| i.to_string()).collect();
                write!(f, "ordered_monoid(truncated-add, {{{}}})", carrier.join(","))
            }
            CatRef::DiscreteMonoid(table) => {
                let toks: Vec<String> = table.iter().map(|v| v.to_string()).collect();
                write!(f, "discrete_monoid({})", toks.join(" "))
            }
            CatRef::Product(a, b) => write!(f, "product({a}, {b})"),
        }
    }
}

/// A law document with its reference strings kept, so commands that write
/// derived documents can name the same categories. `sigma` is absent for a
/// frame document that only fixes the families.
#[derive(Debug, Clone)]
pub struct LoadedLaw {
    pub label: String,
    pub b: Arc<TwoCategory>,
    pub c: Arc<TwoCategory>,
    pub d: Arc<TwoCategory>,
    pub l: Vec<LaxFunctor>,
    pub m: Vec<LaxFunctor>,
    pub sigma: Option<Vec<TwoCellId>>,
    pub b_ref: String,
    pub c_ref: String,
    pub d_ref: String,
}

impl LoadedLaw {
    /// The law itself; an error for a frame without a sigma table.
    pub fn law(&self) -> Result<DistributiveLaw, CheckError> {
        let Some(sigma) = &self.sigma else {
            return Err(structural(format!(
                "law {}: no sigma table; only enumerate-laws accepts a frame",
                self.label
            )));
        };
        Ok(DistributiveLaw {
            label: self.label.clone(),
            b: Arc::clone(&self.b),
            c: Arc::clone(&self.c),
            d: Arc::clone(&self.d),
            l: self.l.clone(),
            m: self.m.clone(),
            sigma: sigma.clone(),
        })
    }
}

/// Loads documents from one manifest directory, caching every resolved
/// structure by name. References never leave the directory.
pub struct Loader {
    dir: PathBuf,
    params: CheckParams,
    raw: HashMap<String, RawDoc>,
    cats: HashMap<String, Arc<TwoCategory>>,
    functors: HashMap<String, LaxFunctor>,
    oplaxes: HashMap<String, OplaxTransformation>,
    modifications: HashMap<String, Modification>,
    laws: HashMap<String, LoadedLaw>,
    dist_morphisms: HashMap<String, DistMorphism>,
    dist_2morphisms: HashMap<String, Dist2Morphism>,
    nesteds: HashMap<String, NestedLaxFunctor>,
    loading: HashSet<String>,
}

impl Loader {
    pub fn new(dir: PathBuf, params: CheckParams) -> Loader {
        Loader {
            dir,
            params,
            raw: HashMap::new(),
            cats: HashMap::new(),
            functors: HashMap::new(),
            oplaxes: HashMap::new(),
            modifications: HashMap::new(),
            laws: HashMap::new(),
            dist_morphisms: HashMap::new(),
            dist_2morphisms: HashMap::new(),
            nesteds: HashMap::new(),
            loading: HashSet::new(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn raw(&mut self, name: &str) -> Result<RawDoc, CheckError> {
        if let Some(doc) = self.raw.get(name) {
            return Ok(doc.clone());
        }
        if !is_doc_name(name) {
            return Err(structural(format!("bad document name {name}")));
        }
        let path = self.dir.join(format!("{name}.dl"));
        let text = fs::read_to_string(&path)
            .map_err(|e| structural(format!("cannot read {}: {e}", path.display())))?;
        let doc = RawDoc::parse(name, &text)?;
        self.raw.insert(name.to_string(), doc.clone());
        Ok(doc)
    }

    pub fn kind_of(&mut self, name: &str) -> Result<String, CheckError> {
        Ok(self.raw(name)?.kind)
    }

    fn doc_of_kind(&mut self, name: &str, kind: &str) -> Result<RawDoc, CheckError> {
        let doc = self.raw(name)?;
        if doc.kind != kind {
            return Err(structural(format!(
                "document {name} has kind {}, expected {kind}",
                doc.kind
            )));
        }
        Ok(doc)
    }

    fn enter(&mut self, name: &str) -> Result<(), CheckError> {
        if !self.loading.insert(name.to_string()) {
            return Err(structural(format!("document {name}: cyclic reference")));
        }
        Ok(())
    }

    pub fn canonical(&self, r: &str) -> Result<String, CheckError> {
        Ok(CatRef::parse(r)?.to_string())
    }

    pub fn category(&mut self, r: &str) -> Result<Arc<TwoCategory>, CheckError> {
        let parsed = CatRef::parse(r)?;
        self.category_ref(&parsed)
    }

    fn category_ref(&mut self, r: &CatRef) -> Result<Arc<TwoCategory>, CheckError> {
        let key = r.to_string();
        if let Some(cat) = self.cats.get(&key) {
            return Ok(Arc::clone(cat));
        }
        let cat = match r {
            CatRef::Terminal => terminal_2category(),
            CatRef::Rel(n) => rel_2category(*n)?,
            CatRef::TruncatedChain(top) => truncated_addition_chain(*top)?,
            CatRef::DiscreteMonoid(table) => {
                let n = (0..=table.len())
                    .find(|n| n * n == table.len())
                    .expect("parse checked the table is square");
                discrete_monoid_delooping(key.clone(), n, table)?
            }
            CatRef::Product(a, b) => {
                let left = self.category_ref(a)?;
                let right = self.category_ref(b)?;
                product(&left, &right)?
            }
            CatRef::Doc(name) => {
                let doc = self.doc_of_kind(name, "category")?;
                self.enter(name)?;
                let built = self.build_category(&doc);
                self.loading.remove(name.as_str());
                built?
            }
        };
        self.cats.insert(key, Arc::clone(&cat));
        Ok(cat)
    }

    fn build_category(&mut self, doc: &RawDoc) -> Result<Arc<TwoCategory>, CheckError> {
        if let Some(gen) = doc.get("generator") {
            for (key, _) in &doc.fields {
                if key != "generator" && key != "label" {
                    return Err(structural(format!(
                        "document {}: generator and tables are mutually exclusive",
                        doc.name
                    )));
                }
            }
            let gen = gen.to_string();
            return self.category(&gen);
        }
        let name = &doc.name;
        let n_objects = parse_usize(name, "objects", doc.require("objects")?)?;
        let one_cells = parse_pair_list(name, "one-cells", doc.require("one-cells")?)?
            .into_iter()
            .map(|(s, t)| (ObjId(s), ObjId(t)))
            .collect();
        let id1 = parse_usize_list(name, "id1", doc.require("id1")?)?
            .into_iter()
            .map(OneCellId)
            .collect();
        let comp1 = parse_opt_list(name, "comp1", doc.require("comp1")?)?
            .into_iter()
            .map(|v| v.map(OneCellId))
            .collect();
        let two_cells = parse_pair_list(name, "two-cells", doc.require("two-cells")?)?
            .into_iter()
            .map(|(s, t)| (OneCellId(s), OneCellId(t)))
            .collect();
        let id2 = parse_usize_list(name, "id2", doc.require("id2")?)?
            .into_iter()
            .map(TwoCellId)
            .collect();
        let vcomp = parse_opt_list(name, "vcomp", doc.require("vcomp")?)?
            .into_iter()
            .map(|v| v.map(TwoCellId))
            .collect();
        let hcomp = parse_opt_list(name, "hcomp", doc.require("hcomp")?)?
            .into_iter()
            .map(|v| v.map(TwoCellId))
            .collect();
        let locally_posetal = match doc.get("locally-posetal") {
            None => false,
            Some(v) => parse_bool(name, "locally-posetal", v)?,
        };
        let label = doc.get("label").unwrap_or(name).to_string();
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
            locally_posetal,
        })
    }

    pub fn functor(&mut self, name: &str) -> Result<LaxFunctor, CheckError> {
        if let Some(f) = self.functors.get(name) {
            return Ok(f.clone());
        }
        let doc = self.doc_of_kind(name, "functor")?;
        self.enter(name)?;
        let built = self.build_functor(&doc);
        self.loading.remove(name);
        let f = built?;
        self.functors.insert(name.to_string(), f.clone());
        Ok(f)
    }

    fn build_functor(&mut self, doc: &RawDoc) -> Result<LaxFunctor, CheckError> {
        let name = &doc.name;
        let dom = self.category(doc.require("dom")?)?;
        let cod = self.category(doc.require("cod")?)?;
        let n1 = dom.n_one_cells();
        let obj_map = ranged_list(
            name,
            "obj-map",
            doc.require("obj-map")?,
            dom.n_objects(),
            cod.n_objects(),
        )?
        .into_iter()
        .map(ObjId)
        .collect();
        let cell1_map = ranged_list(name, "one-map", doc.require("one-map")?, n1, cod.n_one_cells())?
            .into_iter()
            .map(OneCellId)
            .collect();
        let cell2_map = ranged_list(
            name,
            "two-map",
            doc.require("two-map")?,
            dom.n_two_cells(),
            cod.n_two_cells(),
        )?
        .into_iter()
        .map(TwoCellId)
        .collect();
        let gamma = ranged_opt_list(name, "gamma", doc.require("gamma")?, n1 * n1, cod.n_two_cells())?
            .into_iter()
            .map(|v| v.map(TwoCellId))
            .collect();
        let iota = ranged_list(
            name,
            "iota",
            doc.require("iota")?,
            dom.n_objects(),
            cod.n_two_cells(),
        )?
        .into_iter()
        .map(TwoCellId)
        .collect();
        Ok(LaxFunctor {
            label: doc.get("label").unwrap_or(name).to_string(),
            dom,
            cod,
            obj_map,
            cell1_map,
            cell2_map,
            gamma,
            iota,
        })
    }

    pub fn oplax(&mut self, name: &str) -> Result<OplaxTransformation, CheckError> {
        if let Some(t) = self.oplaxes.get(name) {
            return Ok(t.clone());
        }
        let doc = self.doc_of_kind(name, "oplax")?;
        self.enter(name)?;
        let built = self.build_oplax(&doc);
        self.loading.remove(name);
        let t = built?;
        self.oplaxes.insert(name.to_string(), t.clone());
        Ok(t)
    }

    fn build_oplax(&mut self, doc: &RawDoc) -> Result<OplaxTransformation, CheckError> {
        let name = &doc.name;
        let src = self.functor(doc.require("src")?)?;
        let tgt = self.functor(doc.require("tgt")?)?;
        // Components are ranged against the source's codomain; whether the
        // endpoints are even parallel is the validator's typing check.
        let obj_comp = ranged_list(
            name,
            "obj-comp",
            doc.require("obj-comp")?,
            src.dom.n_objects(),
            src.cod.n_one_cells(),
        )?
        .into_iter()
        .map(OneCellId)
        .collect();
        let cell_comp = ranged_list(
            name,
            "cell-comp",
            doc.require("cell-comp")?,
            src.dom.n_one_cells(),
            src.cod.n_two_cells(),
        )?
        .into_iter()
        .map(TwoCellId)
        .collect();
        Ok(OplaxTransformation {
            label: doc.get("label").unwrap_or(name).to_string(),
            src,
            tgt,
            obj_comp,
            cell_comp,
        })
    }

    pub fn modification(&mut self, name: &str) -> Result<Modification, CheckError> {
        if let Some(w) = self.modifications.get(name) {
            return Ok(w.clone());
        }
        let doc = self.doc_of_kind(name, "modification")?;
        self.enter(name)?;
        let built = self.build_modification(&doc);
        self.loading.remove(name);
        let w = built?;
        self.modifications.insert(name.to_string(), w.clone());
        Ok(w)
    }

    fn build_modification(&mut self, doc: &RawDoc) -> Result<Modification, CheckError> {
        let name = &doc.name;
        let src = self.oplax(doc.require("src")?)?;
        let tgt = self.oplax(doc.require("tgt")?)?;
        let comp = ranged_list(
            name,
            "comp",
            doc.require("comp")?,
            src.src.dom.n_objects(),
            src.src.cod.n_two_cells(),
        )?
        .into_iter()
        .map(TwoCellId)
        .collect();
        Ok(Modification {
            label: doc.get("label").unwrap_or(name).to_string(),
            src,
            tgt,
            comp,
        })
    }

    pub fn law(&mut self, name: &str) -> Result<LoadedLaw, CheckError> {
        if let Some(l) = self.laws.get(name) {
            return Ok(l.clone());
        }
        let doc = self.doc_of_kind(name, "law")?;
        self.enter(name)?;
        let built = self.build_law(&doc);
        self.loading.remove(name);
        let l = built?;
        self.laws.insert(name.to_string(), l.clone());
        Ok(l)
    }

    fn build_law(&mut self, doc: &RawDoc) -> Result<LoadedLaw, CheckError> {
        let name = &doc.name;
        let b_ref = self.canonical(doc.require("b")?)?;
        let c_ref = self.canonical(doc.require("c")?)?;
        let d_ref = self.canonical(doc.require("d")?)?;
        let b = self.category(&b_ref)?;
        let c = self.category(&c_ref)?;
        let d = self.category(&d_ref)?;
        let family = |loader: &mut Loader,
                      key: &str,
                      count: usize,
                      per: &str,
                      dom: &Arc<TwoCategory>|
         -> Result<Vec<LaxFunctor>, CheckError> {
            let names = parse_names(doc.require(key)?);
            if names.len() != count {
                return Err(structural(format!(
                    "document {name}: field {key}: {} functors, expected one per {per} ({count})",
                    names.len()
                )));
            }
            let fs: Vec<LaxFunctor> = names
                .iter()
                .map(|n| loader.functor(n))
                .collect::<Result<_, _>>()?;
            for f in &fs {
                if *f.dom != **dom || *f.cod != *d {
                    return Err(structural(format!(
                        "document {name}: family member {} does not map {} into {}",
                        f.label,
                        dom.label(),
                        d.label()
                    )));
                }
            }
            Ok(fs)
        };
        let l = family(self, "l", c.n_objects(), "object of c", &b)?;
        let m = family(self, "m", b.n_objects(), "object of b", &c)?;
        let sigma = match doc.get("sigma") {
            None => None,
            Some(v) => Some(
                ranged_list(
                    name,
                    "sigma",
                    v,
                    b.n_one_cells() * c.n_one_cells(),
                    d.n_two_cells(),
                )?
                .into_iter()
                .map(TwoCellId)
                .collect(),
            ),
        };
        Ok(LoadedLaw {
            label: doc.get("label").unwrap_or(name).to_string(),
            b,
            c,
            d,
            l,
            m,
            sigma,
            b_ref,
            c_ref,
            d_ref,
        })
    }

    pub fn dist_morphism(&mut self, name: &str) -> Result<DistMorphism, CheckError> {
        if let Some(m) = self.dist_morphisms.get(name) {
            return Ok(m.clone());
        }
        let doc = self.doc_of_kind(name, "dist-morphism")?;
        self.enter(name)?;
        let built = self.build_dist_morphism(&doc);
        self.loading.remove(name);
        let m = built?;
        self.dist_morphisms.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn build_dist_morphism(&mut self, doc: &RawDoc) -> Result<DistMorphism, CheckError> {
        let name = &doc.name;
        let src = self.law(doc.require("src")?)?.law()?;
        let tgt = self.law(doc.require("tgt")?)?.law()?;
        let components = |loader: &mut Loader,
                          key: &str,
                          count: usize,
                          per: &str|
         -> Result<Vec<OplaxTransformation>, CheckError> {
            let names = parse_names(doc.require(key)?);
            if names.len() != count {
                return Err(structural(format!(
                    "document {name}: field {key}: {} transformations, expected one per {per} ({count})",
                    names.len()
                )));
            }
            names.iter().map(|n| loader.oplax(n)).collect()
        };
        let theta_c = components(self, "theta-c", src.c.n_objects(), "object of c")?;
        let theta_b = components(self, "theta-b", src.b.n_objects(), "object of b")?;
        Ok(DistMorphism {
            label: doc.get("label").unwrap_or(name).to_string(),
            src,
            tgt,
            theta_c,
            theta_b,
        })
    }

    pub fn dist_2morphism(&mut self, name: &str) -> Result<Dist2Morphism, CheckError> {
        if let Some(w) = self.dist_2morphisms.get(name) {
            return Ok(w.clone());
        }
        let doc = self.doc_of_kind(name, "dist-2morphism")?;
        self.enter(name)?;
        let built = self.build_dist_2morphism(&doc);
        self.loading.remove(name);
        let w = built?;
        self.dist_2morphisms.insert(name.to_string(), w.clone());
        Ok(w)
    }

    fn build_dist_2morphism(&mut self, doc: &RawDoc) -> Result<Dist2Morphism, CheckError> {
        let name = &doc.name;
        let src = self.dist_morphism(doc.require("src")?)?;
        let tgt = self.dist_morphism(doc.require("tgt")?)?;
        let components = |loader: &mut Loader,
                          key: &str,
                          count: usize,
                          per: &str|
         -> Result<Vec<Modification>, CheckError> {
            let names = parse_names(doc.require(key)?);
            if names.len() != count {
                return Err(structural(format!(
                    "document {name}: field {key}: {} modifications, expected one per {per} ({count})",
                    names.len()
                )));
            }
            names.iter().map(|n| loader.modification(n)).collect()
        };
        let beth_c = components(self, "beth-c", src.src.c.n_objects(), "object of c")?;
        let beth_b = components(self, "beth-b", src.src.b.n_objects(), "object of b")?;
        Ok(Dist2Morphism {
            label: doc.get("label").unwrap_or(name).to_string(),
            src,
            tgt,
            beth_c,
            beth_b,
        })
    }

    pub fn nested(&mut self, name: &str) -> Result<NestedLaxFunctor, CheckError> {
        if let Some(q) = self.nesteds.get(name) {
            return Ok(q.clone());
        }
        let doc = self.doc_of_kind(name, "nested")?;
        self.enter(name)?;
        let built = self.build_nested(&doc);
        self.loading.remove(name);
        let q = built?;
        self.nesteds.insert(name.to_string(), q.clone());
        Ok(q)
    }

    fn build_nested(&mut self, doc: &RawDoc) -> Result<NestedLaxFunctor, CheckError> {
        let name = &doc.name;
        let c = self.category(doc.require("inner-dom")?)?;
        let d = self.category(doc.require("inner-cod")?)?;
        let b = self.category(doc.require("outer-dom")?)?;
        let objects: Vec<LaxFunctor> = parse_names(doc.require("objects")?)
            .iter()
            .map(|n| self.functor(n))
            .collect::<Result<_, _>>()?;
        let one_cells: Vec<OplaxTransformation> = parse_names(doc.require("one-cells")?)
            .iter()
            .map(|n| self.oplax(n))
            .collect::<Result<_, _>>()?;
        let two_cells: Vec<Modification> = parse_names(doc.require("two-cells")?)
            .iter()
            .map(|n| self.modification(n))
            .collect::<Result<_, _>>()?;
        let fragment = LaxOpFragment::generate(&c, &d, &objects, &one_cells, &two_cells, &self.params)?;
        // The listed cells must already be closed: regeneration adopts seeds
        // in order, so growth means the outer tables below would index a
        // different category than the one the document was written against.
        if fragment.objects.len() != objects.len()
            || fragment.one_cells.len() != one_cells.len()
            || fragment.two_cells.len() != two_cells.len()
        {
            return Err(structural(format!(
                "document {name}: listed cells are not closed under composition"
            )));
        }
        let n1 = fragment.cat.n_one_cells();
        let n2 = fragment.cat.n_two_cells();
        let b1 = b.n_one_cells();
        let obj_map = ranged_list(
            name,
            "outer-obj-map",
            doc.require("outer-obj-map")?,
            b.n_objects(),
            fragment.objects.len(),
        )?
        .into_iter()
        .map(ObjId)
        .collect();
        let cell1_map = ranged_list(name, "outer-one-map", doc.require("outer-one-map")?, b1, n1)?
            .into_iter()
            .map(OneCellId)
            .collect();
        let cell2_map = ranged_list(
            name,
            "outer-two-map",
            doc.require("outer-two-map")?,
            b.n_two_cells(),
            n2,
        )?
        .into_iter()
        .map(TwoCellId)
        .collect();
        let gamma = ranged_opt_list(name, "outer-gamma", doc.require("outer-gamma")?, b1 * b1, n2)?
            .into_iter()
            .map(|v| v.map(TwoCellId))
            .collect();
        let iota = ranged_list(
            name,
            "outer-iota",
            doc.require("outer-iota")?,
            b.n_objects(),
            n2,
        )?
        .into_iter()
        .map(TwoCellId)
        .collect();
        let outer = LaxFunctor {
            label: doc.get("label").unwrap_or(name).to_string(),
            dom: b,
            cod: Arc::clone(&fragment.cat),
            obj_map,
            cell1_map,
            cell2_map,
            gamma,
            iota,
        };
        Ok(NestedLaxFunctor { fragment, outer })
    }
}

fn fmt_ids(it: impl Iterator<Item = usize>) -> String {
    let toks: Vec<String> = it.map(|v| v.to_string()).collect();
    toks.join(" ")
}

fn fmt_opt_ids(it: impl Iterator<Item = Option<usize>>) -> String {
    let toks: Vec<String> = it
        .map(|v| v.map_or("-".to_string(), |x| x.to_string()))
        .collect();
    toks.join(" ")
}

pub fn functor_doc(name: &str, f: &LaxFunctor, dom_ref: &str, cod_ref: &str) -> RawDoc {
    RawDoc {
        name: name.to_string(),
        kind: "functor".to_string(),
        fields: vec![
            ("label".to_string(), f.label.clone()),
            ("dom".to_string(), dom_ref.to_string()),
            ("cod".to_string(), cod_ref.to_string()),
            ("obj-map".to_string(), fmt_ids(f.obj_map.iter().map(|x| x.0))),
            ("one-map".to_string(), fmt_ids(f.cell1_map.iter().map(|x| x.0))),
            ("two-map".to_string(), fmt_ids(f.cell2_map.iter().map(|x| x.0))),
            (
                "gamma".to_string(),
                fmt_opt_ids(f.gamma.iter().map(|v| v.map(|x| x.0))),
            ),
            ("iota".to_string(), fmt_ids(f.iota.iter().map(|x| x.0))),
        ],
    }
}

pub fn oplax_doc(name: &str, t: &OplaxTransformation, src_ref: &str, tgt_ref: &str) -> RawDoc {
    RawDoc {
        name: name.to_string(),
        kind: "oplax".to_string(),
        fields: vec![
            ("label".to_string(), t.label.clone()),
            ("src".to_string(), src_ref.to_string()),
            ("tgt".to_string(), tgt_ref.to_string()),
            ("obj-comp".to_string(), fmt_ids(t.obj_comp.iter().map(|x| x.0))),
            ("cell-comp".to_string(), fmt_ids(t.cell_comp.iter().map(|x| x.0))),
        ],
    }
}

pub fn modification_doc(name: &str, w: &Modification, src_ref: &str, tgt_ref: &str) -> RawDoc {
    RawDoc {
        name: name.to_string(),
        kind: "modification".to_string(),
        fields: vec![
            ("label".to_string(), w.label.clone()),
            ("src".to_string(), src_ref.to_string()),
            ("tgt".to_string(), tgt_ref.to_string()),
            ("comp".to_string(), fmt_ids(w.comp.iter().map(|x| x.0))),
        ],
    }
}

#[allow(clippy::too_many_arguments)]
pub fn law_doc(
    name: &str,
    label: &str,
    b_ref: &str,
    c_ref: &str,
    d_ref: &str,
    l_names: &[String],
    m_names: &[String],
    sigma: &[TwoCellId],
) -> RawDoc {
    RawDoc {
        name: name.to_string(),
        kind: "law".to_string(),
        fields: vec![
            ("label".to_string(), label.to_string()),
            ("b".to_string(), b_ref.to_string()),
            ("c".to_string(), c_ref.to_string()),
            ("d".to_string(), d_ref.to_string()),
            ("l".to_string(), l_names.join(" ")),
            ("m".to_string(), m_names.join(" ")),
            ("sigma".to_string(), fmt_ids(sigma.iter().map(|x| x.0))),
        ],
    }
}

#[allow(clippy::too_many_arguments)]
pub fn nested_doc(
    name: &str,
    q: &NestedLaxFunctor,
    inner_dom: &str,
    inner_cod: &str,
    outer_dom: &str,
    obj_names: &[String],
    one_names: &[String],
    two_names: &[String],
) -> RawDoc {
    let outer = &q.outer;
    RawDoc {
        name: name.to_string(),
        kind: "nested".to_string(),
        fields: vec![
            ("label".to_string(), outer.label.clone()),
            ("inner-dom".to_string(), inner_dom.to_string()),
            ("inner-cod".to_string(), inner_cod.to_string()),
            ("outer-dom".to_string(), outer_dom.to_string()),
            ("objects".to_string(), obj_names.join(" ")),
            ("one-cells".to_string(), one_names.join(" ")),
            ("two-cells".to_string(), two_names.join(" ")),
            (
                "outer-obj-map".to_string(),
                fmt_ids(outer.obj_map.iter().map(|x| x.0)),
            ),
            (
                "outer-one-map".to_string(),
                fmt_ids(outer.cell1_map.iter().map(|x| x.0)),
            ),
            (
                "outer-two-map".to_string(),
                fmt_ids(outer.cell2_map.iter().map(|x| x.0)),
            ),
            (
                "outer-gamma".to_string(),
                fmt_opt_ids(outer.gamma.iter().map(|v| v.map(|x| x.0))),
            ),
            ("outer-iota".to_string(), fmt_ids(outer.iota.iter().map(|x| x.0))),
        ],
    }
}

/// Write a document into a manifest directory as `<name>.dl`.
pub fn write_doc(dir: &Path, doc: &RawDoc) -> Result<PathBuf, CheckError> {
    let path = dir.join(format!("{}.dl", doc.name));
    fs::write(&path, doc.render())
        .map_err(|e| structural(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use distlax::core2::validate_2category;

    #[test]
    fn parse_and_render_round_trip() {
        let text = "# a small loop\nkind: category\nobjects: 1\none-cells: 0>0\nid1: 0\ncomp1: 0\n\
                    two-cells: 0>0 0>0\n  0>0\nid2: 0\nvcomp: 0 1 2 1 2 0 2 0 1\nhcomp: 0 1 2 1 2 0 2 0 1\n";
        let doc = RawDoc::parse("loop3", text).unwrap();
        assert_eq!(doc.kind, "category");
        assert_eq!(doc.get("two-cells"), Some("0>0 0>0 0>0"));
        let again = RawDoc::parse("loop3", &doc.render()).unwrap();
        assert_eq!(again.fields, doc.fields);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = RawDoc::parse("x", "kind: law\nsigmas: 0\n").unwrap_err();
        assert!(err.to_string().contains("sigmas"), "{err}");
        let err = RawDoc::parse("x", "kind: blob\n").unwrap_err();
        assert!(err.to_string().contains("unknown kind"), "{err}");
    }

    #[test]
    fn references_canonicalize() {
        let r = CatRef::parse(" product( rel(2) ,terminal )").unwrap();
        assert_eq!(r.to_string(), "product(rel(2), terminal)");
        assert_eq!(
            CatRef::parse("ordered_monoid(truncated-add,{0,1,2})").unwrap(),
            CatRef::TruncatedChain(2)
        );
        assert_eq!(
            CatRef::parse("discrete_monoid(0,1,1,1)").unwrap().to_string(),
            "discrete_monoid(0 1 1 1)"
        );
        assert!(CatRef::parse("rel(2").is_err());
        assert!(CatRef::parse("spiral(4)").is_err());
    }

    #[test]
    fn loader_shares_generated_categories() {
        let dir = tempfile::tempdir().unwrap();
        let mut loader = Loader::new(dir.path().to_path_buf(), CheckParams::default());
        let a = loader.category("rel(2)").unwrap();
        let b = loader.category(" rel(2) ").unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn tabled_document_loads_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("loop3.dl"),
            "kind: category\nobjects: 1\none-cells: 0>0\nid1: 0\ncomp1: 0\n\
             two-cells: 0>0 0>0 0>0\nid2: 0\nvcomp: 0 1 2 1 2 0 2 0 1\nhcomp: 0 1 2 1 2 0 2 0 1\n",
        )
        .unwrap();
        let mut loader = Loader::new(dir.path().to_path_buf(), CheckParams::default());
        let cat = loader.category("loop3").unwrap();
        assert_eq!(cat.n_two_cells(), 3);
        let report = validate_2category(&cat, &CheckParams::default()).unwrap();
        assert!(report.ok, "{}", report.render_text());
    }

    #[test]
    fn cyclic_references_are_an_error() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("snake.dl"),
            "kind: category\ngenerator: product(snake, terminal)\n",
        )
        .unwrap();
        let mut loader = Loader::new(dir.path().to_path_buf(), CheckParams::default());
        let err = loader.category("snake").unwrap_err();
        assert!(err.to_string().contains("cyclic"), "{err}");
    }
}
