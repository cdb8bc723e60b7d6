//! The stratum table and its TOML storage.
//!
//! The crate ships a data file listing every stratum of smooth plane
//! sextics with nontrivial automorphisms: a defining equation with free
//! coefficients, generators for the stabilized subgroup, the genericity
//! constraints, a sample point, and a frozen group fingerprint.  The same
//! file stores the degeneration edges between strata (see
//! [`super::poset`]).  Loading validates everything that can be checked
//! without running group closures; `regen` style recomputation and the
//! emitter used to refresh the file live here as well.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use serde::Deserialize;

use crate::expr::{parse_expr, parse_scalar, ParamMap};
use crate::pgl::{identify_in, parse_matrix, GroupFingerprint, GroupLabel, MatrixGroup, ProjMatrix};
use crate::poly::{parse_poly, HomogPoly};
use crate::smooth;

use super::poset::{EdgeKind, PosetEdge};
use super::wiman::{wiman_generators, WimanBranch};
use super::StrataError;

/// Embedded copy of the stratum table.
pub const DATA: &str = include_str!("../../data/catalogue.toml");

/// One stratum: a family of smooth sextics sharing an automorphism group.
#[derive(Clone, Debug)]
pub struct StratumRow {
    /// Stable identifier, `order_index` plus a disambiguating suffix when
    /// two strata share a group.
    pub key: String,
    pub label: GroupLabel,
    /// Whether the row appears in the headline table of the survey this
    /// data reproduces (two rows are recorded only in the running text).
    pub in_table1: bool,
    /// The `(m, a, b)` of the distinguished diagonal automorphism, when
    /// the family is presented in such a frame.
    pub type_triple: Option<(u64, u64, u64)>,
    /// Substitution carrying this row's printed frame onto the canonical
    /// frame of its type, when the two differ.
    pub frame: Option<String>,
    /// Defining equation with named free coefficients.
    pub equation: String,
    pub generator_sources: Vec<String>,
    /// Genericity constraints in the small `!=`/`==`/`||`/`&&` language.
    pub constraints: Vec<String>,
    /// A particular choice of coefficients satisfying the constraints.
    pub sample: BTreeMap<String, String>,
    /// Fingerprint of the closure of the generators, frozen by a
    /// recomputation run.
    pub fingerprint: Option<GroupFingerprint>,
    /// Free coefficient names appearing in the equation.
    pub params: Vec<String>,
}

/// The validated table: strata, degeneration edges, and the label lookup
/// used to name computed groups.
#[derive(Clone, Debug)]
pub struct Catalogue {
    pub version: String,
    rows: Vec<StratumRow>,
    edges: Vec<PosetEdge>,
    labels: Vec<(GroupLabel, GroupFingerprint)>,
    by_key: HashMap<String, usize>,
}

fn default_true() -> bool {
    true
}

#[derive(Deserialize)]
struct RawCatalogue {
    version: String,
    #[serde(default)]
    row: Vec<RawRow>,
    #[serde(default)]
    edge: Vec<RawEdge>,
}

#[derive(Deserialize)]
struct RawRow {
    key: String,
    order: u64,
    index: u64,
    #[serde(default)]
    tag: Option<String>,
    #[serde(default = "default_true")]
    in_table1: bool,
    #[serde(default, rename = "type")]
    type_triple: Option<[u64; 3]>,
    #[serde(default)]
    frame: Option<String>,
    equation: String,
    generators: Vec<String>,
    #[serde(default)]
    constraints: Vec<String>,
    #[serde(default)]
    sample: BTreeMap<String, String>,
    #[serde(default)]
    fingerprint: Option<String>,
}

#[derive(Deserialize)]
struct RawEdge {
    lower: String,
    upper: String,
    kind: String,
    #[serde(default)]
    params: BTreeMap<String, String>,
    #[serde(default)]
    generators: Vec<String>,
    #[serde(default)]
    lower_gens: Vec<String>,
    #[serde(default)]
    note: String,
}

fn corrupt(msg: impl Into<String>) -> StrataError {
    StrataError::Corrupt(msg.into())
}

/// Resolves a generator source: either a matrix expression or a
/// `wiman(k)` placeholder naming the k-th conjugated generator of the
/// order 360 group.
pub fn resolve_generator(src: &str) -> Result<ProjMatrix, StrataError> {
    if let Some(rest) = src.trim().strip_prefix("wiman(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| corrupt(format!("malformed generator placeholder {src:?}")))?;
        let k: usize = inner
            .trim()
            .parse()
            .map_err(|_| corrupt(format!("malformed generator placeholder {src:?}")))?;
        let gens = wiman_generators(WimanBranch::Plus)?;
        return gens
            .get(k.wrapping_sub(1))
            .cloned()
            .ok_or_else(|| corrupt(format!("generator placeholder index {k} out of range")));
    }
    Ok(parse_matrix(src, &ParamMap::new())?)
}

/// Evaluates one constraint string against a parameter assignment.
///
/// Grammar: atoms `lhs != rhs` or `lhs == rhs` over scalar expressions,
/// combined with `&&` (binds tighter) and `||`.
pub fn constraint_holds(src: &str, params: &ParamMap) -> Result<bool, StrataError> {
    for clause in src.split("||") {
        let mut all = true;
        for atom in clause.split("&&") {
            let atom = atom.trim();
            let (negated, lhs, rhs) = if let Some((l, r)) = atom.split_once("!=") {
                (true, l, r)
            } else if let Some((l, r)) = atom.split_once("==") {
                (false, l, r)
            } else {
                return Err(StrataError::ConstraintViolation(format!(
                    "cannot parse constraint atom {atom:?}"
                )));
            };
            let lv = parse_scalar(lhs, params)?;
            let rv = parse_scalar(rhs, params)?;
            let equal = lv == rv;
            if equal == negated {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of one check of [`Catalogue::verify_row`].
#[derive(Clone, Debug)]
pub struct RowCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Catalogue {
    /// Parses and validates a catalogue from TOML source.
    pub fn load(src: &str) -> Result<Catalogue, StrataError> {
        let raw: RawCatalogue =
            toml::from_str(src).map_err(|e| corrupt(format!("cannot parse catalogue: {e}")))?;
        let mut rows = Vec::with_capacity(raw.row.len());
        let mut by_key = HashMap::new();
        for r in raw.row {
            let label = match &r.tag {
                Some(t) => GroupLabel::tagged(r.order, r.index, t),
                None => GroupLabel::new(r.order, r.index),
            };
            let row = validate_row(r, label)?;
            if by_key.insert(row.key.clone(), rows.len()).is_some() {
                return Err(corrupt(format!("duplicate row key {}", row.key)));
            }
            rows.push(row);
        }
        let labels = collect_labels(&rows)?;
        let mut edges = Vec::with_capacity(raw.edge.len());
        for e in raw.edge {
            let kind = match e.kind.as_str() {
                "specialize" => EdgeKind::Specialize,
                "classify" => EdgeKind::Classify,
                "containment" => EdgeKind::Containment,
                "unverified" => EdgeKind::Unverified,
                other => return Err(corrupt(format!("unknown edge kind {other:?}"))),
            };
            for end in [&e.lower, &e.upper] {
                if !by_key.contains_key(end) {
                    return Err(corrupt(format!("edge endpoint {end:?} is not a row key")));
                }
            }
            if kind == EdgeKind::Unverified && e.note.is_empty() {
                return Err(corrupt(format!(
                    "unverified edge {}->{} must carry a note",
                    e.lower, e.upper
                )));
            }
            edges.push(PosetEdge {
                lower: e.lower,
                upper: e.upper,
                kind,
                params: e.params,
                generators: e.generators,
                lower_gens: e.lower_gens,
                note: e.note,
            });
        }
        Ok(Catalogue { version: raw.version, rows, edges, labels, by_key })
    }

    /// The embedded catalogue, parsed once.
    pub fn builtin() -> Result<&'static Catalogue, StrataError> {
        static CACHE: OnceLock<Result<Catalogue, String>> = OnceLock::new();
        CACHE
            .get_or_init(|| Catalogue::load(DATA).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|msg| corrupt(msg.clone()))
    }

    pub fn rows(&self) -> &[StratumRow] {
        &self.rows
    }

    pub fn edges(&self) -> &[PosetEdge] {
        &self.edges
    }

    pub fn row(&self, key: &str) -> Result<&StratumRow, StrataError> {
        self.by_key
            .get(key)
            .map(|&i| &self.rows[i])
            .ok_or_else(|| StrataError::UnknownRow(key.to_string()))
    }

    pub fn rows_with_label(&self, label: &GroupLabel) -> Vec<&StratumRow> {
        self.rows.iter().filter(|r| &r.label == label).collect()
    }

    /// Label/fingerprint pairs for every row with a frozen fingerprint,
    /// one entry per distinct label.
    pub fn label_table(&self) -> &[(GroupLabel, GroupFingerprint)] {
        &self.labels
    }

    /// Names a computed fingerprint using the frozen table.
    pub fn identify(&self, fp: &GroupFingerprint) -> Result<GroupLabel, StrataError> {
        Ok(identify_in(self.labels.iter(), fp)?)
    }

    /// Generators of a row, with `wiman(k)` placeholders resolved.
    pub fn generators(&self, row: &StratumRow) -> Result<Vec<ProjMatrix>, StrataError> {
        row.generator_sources.iter().map(|s| resolve_generator(s)).collect()
    }

    /// The row's sample coefficients as field elements.
    pub fn sample_map(&self, row: &StratumRow) -> Result<ParamMap, StrataError> {
        let empty = ParamMap::new();
        let mut out = ParamMap::new();
        for (name, value) in &row.sample {
            out.insert(name.clone(), parse_scalar(value, &empty)?);
        }
        Ok(out)
    }

    /// Instantiates the row's equation, rejecting assignments that violate
    /// a genericity constraint.
    pub fn instantiate(&self, row: &StratumRow, params: &ParamMap) -> Result<HomogPoly, StrataError> {
        for c in &row.constraints {
            if !constraint_holds(c, params)? {
                return Err(StrataError::ConstraintViolation(format!(
                    "row {} requires {c:?}",
                    row.key
                )));
            }
        }
        self.instantiate_unchecked(row, params)
    }

    /// Instantiates the row's equation without constraint checks; used for
    /// degeneration edges, which deliberately sit on the boundary.
    pub fn instantiate_unchecked(
        &self,
        row: &StratumRow,
        params: &ParamMap,
    ) -> Result<HomogPoly, StrataError> {
        for name in &row.params {
            if !params.contains_key(name) {
                return Err(StrataError::MissingParameter(format!(
                    "row {} needs a value for {name}",
                    row.key
                )));
            }
        }
        Ok(parse_poly(&row.equation, params)?)
    }

    /// Closure of the row generators together with its fingerprint.
    pub fn row_group(&self, row: &StratumRow) -> Result<(MatrixGroup, GroupFingerprint), StrataError> {
        let gens = self.generators(row)?;
        let grp = MatrixGroup::closure(&gens)?;
        let fp = grp.fingerprint()?;
        Ok((grp, fp))
    }

    /// Full verification of one row: the sample satisfies the constraints,
    /// the generators fix the sample curve, the closure has the advertised
    /// order and fingerprint, the fingerprint identifies back to the label,
    /// and the sample curve is smooth.
    pub fn verify_row(&self, row: &StratumRow) -> Vec<RowCheck> {
        let mut checks = Vec::new();
        let mut push = |name, passed, detail: String| checks.push(RowCheck { name, passed, detail });

        let sample = match self.sample_map(row) {
            Ok(s) => s,
            Err(e) => {
                push("sample", false, e.to_string());
                return checks;
            }
        };
        let constraints_ok = row
            .constraints
            .iter()
            .map(|c| constraint_holds(c, &sample))
            .collect::<Result<Vec<_>, _>>();
        match constraints_ok {
            Ok(flags) if flags.iter().all(|&b| b) => {
                push("sample", true, "sample satisfies the constraints".into())
            }
            Ok(_) => push("sample", false, "sample violates a constraint".into()),
            Err(e) => push("sample", false, e.to_string()),
        }
        let curve = match self.instantiate_unchecked(row, &sample) {
            Ok(f) => f,
            Err(e) => {
                push("equation", false, e.to_string());
                return checks;
            }
        };
        let gens = match self.generators(row) {
            Ok(g) => g,
            Err(e) => {
                push("automorphy", false, e.to_string());
                return checks;
            }
        };
        let fixed = gens.iter().all(|g| g.automorphy_factor(&curve).is_some());
        push(
            "automorphy",
            fixed,
            if fixed {
                format!("all {} generators fix the sample curve", gens.len())
            } else {
                "a generator does not fix the sample curve".into()
            },
        );
        if !fixed {
            return checks;
        }
        let (grp, fp) = match self.row_group(row) {
            Ok(pair) => pair,
            Err(e) => {
                push("closure", false, e.to_string());
                return checks;
            }
        };
        push(
            "closure",
            grp.order() == row.label.order,
            format!("closure has order {}", grp.order()),
        );
        match &row.fingerprint {
            Some(stored) => push(
                "fingerprint",
                *stored == fp,
                if *stored == fp {
                    "computed fingerprint matches the frozen one".into()
                } else {
                    format!("fingerprint drift: computed {fp}")
                },
            ),
            None => push("fingerprint", false, "no frozen fingerprint; rerun regen-catalogue".into()),
        }
        match identify_in(self.labels.iter(), &fp) {
            Ok(label) => push(
                "identify",
                label == row.label,
                format!("fingerprint identifies as {label}"),
            ),
            Err(e) => push("identify", false, e.to_string()),
        }
        match smooth::is_smooth(&curve, 3, false) {
            Ok(v) => push(
                "smooth",
                v.is_smooth(),
                format!("smoothness verdict: {v:?}"),
            ),
            Err(e) => push("smooth", false, e.to_string()),
        }
        checks
    }
}

fn validate_row(r: RawRow, label: GroupLabel) -> Result<StratumRow, StrataError> {
    let key = r.key;
    // The equation must parse; collect its parameters and make sure the
    // sample assigns each of them.
    let expr = parse_expr(&r.equation)
        .map_err(|e| corrupt(format!("row {key}: equation does not parse: {e}")))?;
    let mut params = Vec::new();
    expr.parameters(&mut params);
    params.sort();
    params.dedup();
    for p in &params {
        if !r.sample.contains_key(p) {
            return Err(corrupt(format!("row {key}: sample does not set {p}")));
        }
    }
    for s in r.sample.keys() {
        if !params.contains(s) {
            return Err(corrupt(format!("row {key}: sample sets unused name {s}")));
        }
    }
    let empty = ParamMap::new();
    let mut sample_map = ParamMap::new();
    for (name, value) in &r.sample {
        let v = parse_scalar(value, &empty)
            .map_err(|e| corrupt(format!("row {key}: sample {name}: {e}")))?;
        sample_map.insert(name.clone(), v);
    }
    for c in &r.constraints {
        let ok = constraint_holds(c, &sample_map)
            .map_err(|e| corrupt(format!("row {key}: constraint {c:?}: {e}")))?;
        if !ok {
            return Err(corrupt(format!("row {key}: sample violates constraint {c:?}")));
        }
    }
    if r.generators.is_empty() {
        return Err(corrupt(format!("row {key}: no generators")));
    }
    for g in &r.generators {
        resolve_generator_syntax(g).map_err(|e| corrupt(format!("row {key}: generator {g:?}: {e}")))?;
    }
    if let Some(frame) = &r.frame {
        parse_matrix(frame, &empty).map_err(|e| corrupt(format!("row {key}: frame: {e}")))?;
    }
    let type_triple = match r.type_triple {
        Some([m, a, b]) => {
            if super::types::types_for(m, a, b).is_empty() {
                return Err(corrupt(format!("row {key}: ({m}, {a}, {b}) is not a listed type")));
            }
            Some((m, a, b))
        }
        None => None,
    };
    let fingerprint = match r.fingerprint {
        Some(s) => Some(
            GroupFingerprint::parse(&s)
                .map_err(|e| corrupt(format!("row {key}: fingerprint: {e}")))?,
        ),
        None => None,
    };
    Ok(StratumRow {
        key,
        label,
        in_table1: r.in_table1,
        type_triple,
        frame: r.frame,
        equation: r.equation,
        generator_sources: r.generators,
        constraints: r.constraints,
        sample: r.sample,
        fingerprint,
        params,
    })
}

/// Syntax-only check of a generator source; `wiman(k)` is accepted without
/// computing the conjugated frame.
fn resolve_generator_syntax(src: &str) -> Result<(), StrataError> {
    if let Some(rest) = src.trim().strip_prefix("wiman(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| corrupt(format!("malformed placeholder {src:?}")))?;
        let k: usize = inner
            .trim()
            .parse()
            .map_err(|_| corrupt(format!("malformed placeholder {src:?}")))?;
        if !(1..=4).contains(&k) {
            return Err(corrupt(format!("placeholder index {k} out of range")));
        }
        return Ok(());
    }
    parse_matrix(src, &ParamMap::new())?;
    Ok(())
}

fn collect_labels(rows: &[StratumRow]) -> Result<Vec<(GroupLabel, GroupFingerprint)>, StrataError> {
    let mut out: Vec<(GroupLabel, GroupFingerprint)> = Vec::new();
    for row in rows {
        let Some(fp) = &row.fingerprint else { continue };
        if let Some((_, existing)) = out.iter().find(|(l, _)| *l == row.label) {
            if existing != fp {
                return Err(corrupt(format!(
                    "rows labelled {} store different fingerprints",
                    row.label
                )));
            }
            continue;
        }
        out.push((row.label.clone(), fp.clone()));
    }
    // Distinct labels must be distinguishable, otherwise identification is
    // ill posed.
    let mut seen = HashSet::new();
    for (label, fp) in &out {
        if !seen.insert(fp.to_string()) {
            return Err(corrupt(format!(
                "label {label} shares its fingerprint with another label"
            )));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Emission, used to refresh the data file after recomputation.

fn toml_str(s: &str) -> String {
    // The catalogue never stores quotes or backslashes; keep the emitter
    // honest about that assumption.
    assert!(
        !s.contains('"') && !s.contains('\\'),
        "catalogue string needs escaping: {s:?}"
    );
    format!("\"{s}\"")
}

fn push_string_list(out: &mut String, name: &str, items: &[String]) {
    if items.is_empty() {
        return;
    }
    out.push_str(name);
    out.push_str(" = [\n");
    for item in items {
        out.push_str("    ");
        out.push_str(&toml_str(item));
        out.push_str(",\n");
    }
    out.push_str("]\n");
}

/// Serializes a catalogue, substituting recomputed fingerprints (keyed by
/// row key) and discovered containment generators (keyed by edge index).
pub fn emit_toml(
    cat: &Catalogue,
    fingerprints: &BTreeMap<String, GroupFingerprint>,
    lower_gens: &BTreeMap<usize, Vec<String>>,
) -> String {
    let mut out = String::new();
    out.push_str("# Stratum table for smooth plane sextics with automorphisms.\n");
    out.push_str("# Fingerprints and searched containment generators are frozen by\n");
    out.push_str("# `sextica regen-catalogue --write`; edit the rest by hand.\n\n");
    out.push_str(&format!("version = {}\n", toml_str(&cat.version)));
    for row in cat.rows() {
        out.push_str("\n[[row]]\n");
        out.push_str(&format!("key = {}\n", toml_str(&row.key)));
        out.push_str(&format!("order = {}\n", row.label.order));
        out.push_str(&format!("index = {}\n", row.label.index));
        if let Some(tag) = &row.label.tag {
            out.push_str(&format!("tag = {}\n", toml_str(tag)));
        }
        if !row.in_table1 {
            out.push_str("in_table1 = false\n");
        }
        if let Some((m, a, b)) = row.type_triple {
            out.push_str(&format!("type = [{m}, {a}, {b}]\n"));
        }
        if let Some(frame) = &row.frame {
            out.push_str(&format!("frame = {}\n", toml_str(frame)));
        }
        out.push_str(&format!("equation = {}\n", toml_str(&row.equation)));
        push_string_list(&mut out, "generators", &row.generator_sources);
        push_string_list(&mut out, "constraints", &row.constraints);
        let fp = fingerprints
            .get(&row.key)
            .cloned()
            .or_else(|| row.fingerprint.clone());
        if let Some(fp) = fp {
            out.push_str(&format!("fingerprint = {}\n", toml_str(&fp.to_string())));
        }
        if !row.sample.is_empty() {
            out.push_str("\n[row.sample]\n");
            for (name, value) in &row.sample {
                out.push_str(&format!("{name} = {}\n", toml_str(value)));
            }
        }
    }
    for (i, edge) in cat.edges().iter().enumerate() {
        out.push_str("\n[[edge]]\n");
        out.push_str(&format!("lower = {}\n", toml_str(&edge.lower)));
        out.push_str(&format!("upper = {}\n", toml_str(&edge.upper)));
        let kind = match edge.kind {
            EdgeKind::Specialize => "specialize",
            EdgeKind::Classify => "classify",
            EdgeKind::Containment => "containment",
            EdgeKind::Unverified => "unverified",
        };
        out.push_str(&format!("kind = {}\n", toml_str(kind)));
        if !edge.note.is_empty() {
            out.push_str(&format!("note = {}\n", toml_str(&edge.note)));
        }
        push_string_list(&mut out, "generators", &edge.generators);
        let gens = lower_gens.get(&i).cloned().unwrap_or_else(|| edge.lower_gens.clone());
        push_string_list(&mut out, "lower_gens", &gens);
        if !edge.params.is_empty() {
            out.push_str("\n[edge.params]\n");
            for (name, value) in &edge.params {
                out.push_str(&format!("{name} = {}\n", toml_str(value)));
            }
        }
    }
    out
}
