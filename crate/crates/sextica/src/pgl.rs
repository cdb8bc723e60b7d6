//! Projective 3x3 matrices, finite matrix groups, and group invariants.
//!
//! Matrices act on plane curves by substitution on the right: the matrix row
//! `(a, b, c)` sends `X` to `a*X + b*Y + c*Z`.  Every matrix is stored in a
//! canonical projective scaling (first nonzero entry in row-major order equals
//! one), so scalar-equivalent matrices compare equal and can be hashed.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::cyclo::field::FieldElem;
use crate::expr::{self, ExprError, ParamMap, Parser};
use crate::poly::{self, HomogPoly, PolyError};

/// Cap on closure size and on projective order searches.
pub const DEFAULT_CAP: usize = 400;

#[derive(Debug, thiserror::Error)]
pub enum PglError {
    /// The matrix has determinant zero.
    #[error("matrix is singular")]
    Singular,
    /// A closure grew past the element cap without closing.
    #[error("group closure exceeded {0} elements")]
    CapExceeded(usize),
    /// Repeated powers never returned to the identity.
    #[error("projective order exceeds {0}")]
    NotFinite(usize),
    /// A conjugacy test was asked about matrices outside the ambient group.
    #[error("matrix lies outside the ambient group")]
    NotSubgroup,
    /// A fingerprint matched no catalogued group.
    #[error("group fingerprint matches no catalogue entry: {0}")]
    UnknownGroup(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

type Rows = [[FieldElem; 3]; 3];

fn zero_rows() -> Rows {
    std::array::from_fn(|_| std::array::from_fn(|_| FieldElem::zero()))
}

fn det3(m: &Rows) -> FieldElem {
    let mut acc = FieldElem::zero();
    for c0 in 0..3usize {
        let c1 = (c0 + 1) % 3;
        let c2 = (c0 + 2) % 3;
        let minor = &(&m[1][c1] * &m[2][c2]) - &(&m[1][c2] * &m[2][c1]);
        acc = &acc + &(&m[0][c0] * &minor);
    }
    acc
}

/// Transpose of the cofactor matrix; `m * adj(m) = det(m) * I`.
fn adjugate(m: &Rows) -> Rows {
    let mut out = zero_rows();
    for r in 0..3 {
        for c in 0..3 {
            let r1 = (c + 1) % 3;
            let r2 = (c + 2) % 3;
            let c1 = (r + 1) % 3;
            let c2 = (r + 2) % 3;
            out[r][c] = &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1]);
        }
    }
    out
}

/// An invertible 3x3 matrix over the coefficient field, up to scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjMatrix {
    rows: Rows,
}

impl ProjMatrix {
    /// Canonicalizes the scaling and rejects singular matrices.
    pub fn new(rows: Rows) -> Result<Self, PglError> {
        if det3(&rows).is_zero() {
            return Err(PglError::Singular);
        }
        Ok(Self::scale_free(rows))
    }

    /// Canonicalizes a matrix already known to be invertible.
    fn scale_free(rows: Rows) -> Self {
        let mut rows = rows;
        let lead = rows
            .iter()
            .flatten()
            .find(|e| !e.is_zero())
            .expect("invertible matrix has a nonzero entry")
            .clone();
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero field element inverts");
            for row in rows.iter_mut() {
                for e in row.iter_mut() {
                    *e = &*e * &inv;
                }
            }
        }
        ProjMatrix { rows }
    }

    pub fn identity() -> Self {
        let mut rows = zero_rows();
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = FieldElem::one();
        }
        ProjMatrix { rows }
    }

    pub fn diagonal(a: FieldElem, b: FieldElem, c: FieldElem) -> Result<Self, PglError> {
        let mut rows = zero_rows();
        rows[0][0] = a;
        rows[1][1] = b;
        rows[2][2] = c;
        Self::new(rows)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn rows(&self) -> &Rows {
        &self.rows
    }

    pub fn mul(&self, rhs: &ProjMatrix) -> ProjMatrix {
        let mut out = zero_rows();
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = FieldElem::zero();
                for k in 0..3 {
                    acc = &acc + &(&self.rows[r][k] * &rhs.rows[k][c]);
                }
                out[r][c] = acc;
            }
        }
        ProjMatrix::scale_free(out)
    }

    /// Projective inverse via the adjugate, so no division is needed.
    pub fn inverse(&self) -> ProjMatrix {
        ProjMatrix::scale_free(adjugate(&self.rows))
    }

    /// `phi^-1 * self * phi`.
    pub fn conjugate_by(&self, phi: &ProjMatrix) -> ProjMatrix {
        phi.inverse().mul(self).mul(phi)
    }

    /// Least `k >= 1` with `self^k` scalar, or `NotFinite` past the cap.
    pub fn projective_order(&self) -> Result<u64, PglError> {
        let mut pw = self.clone();
        for k in 1..=DEFAULT_CAP {
            if pw.is_identity() {
                return Ok(k as u64);
            }
            pw = pw.mul(self);
        }
        Err(PglError::NotFinite(DEFAULT_CAP))
    }

    /// Applies the substitution `X_i -> sum_j m[i][j] X_j` to a form.
    pub fn apply(&self, f: &HomogPoly) -> HomogPoly {
        f.substitute_rows(&self.rows)
    }

    /// If the matrix maps `f` to a scalar multiple of itself, returns that scalar.
    pub fn automorphy_factor(&self, f: &HomogPoly) -> Option<FieldElem> {
        let image = self.apply(f);
        let (mono, lead) = f.leading()?;
        let image_lead = image.coeff(mono.i, mono.j, mono.k);
        if image_lead.is_zero() {
            return None;
        }
        let lambda = image_lead.try_div(lead).ok()?;
        if image == f.scale(&lambda) {
            Some(lambda)
        } else {
            None
        }
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "[")?;
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                write!(out, ", ")?;
            }
            write!(out, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        write!(out, "]")
    }
}

impl fmt::Debug for ProjMatrix {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{self}")
    }
}

/// A fixed point structure of a non-scalar matrix with a repeated eigenvalue:
/// a pointwise-fixed line and an isolated fixed point off that line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub period: u64,
    /// The isolated fixed point, as projective coordinates.
    pub center: [FieldElem; 3],
    /// The fixed line, as coefficients of a linear form.
    pub axis: [FieldElem; 3],
}

fn normalize_triple(mut v: [FieldElem; 3]) -> [FieldElem; 3] {
    if let Some(lead) = v.iter().find(|e| !e.is_zero()).cloned() {
        let inv = lead.inv().expect("nonzero field element inverts");
        for e in v.iter_mut() {
            *e = &*e * &inv;
        }
    }
    v
}

impl ProjMatrix {
    /// Detects whether the matrix is a homology, i.e. conjugate to
    /// `diag(a, a, b)` with `a != b`, and if so returns its period, center,
    /// and axis.  Scalar matrices and matrices with three distinct
    /// eigenvalues return `None`.
    pub fn homology(&self) -> Result<Option<Homology>, PglError> {
        let m = &self.rows;
        let trace = &(&m[0][0] + &m[1][1]) + &m[2][2];
        let mut second = FieldElem::zero();
        for c0 in 0..3usize {
            let c1 = (c0 + 1) % 3;
            second = &second + &(&(&m[c0][c0] * &m[c1][c1]) - &(&m[c0][c1] * &m[c1][c0]));
        }
        let det = det3(m);

        // Char poly c(x) = x^3 - trace x^2 + second x - det; a repeated root is
        // a root of gcd(c, c'), read off from the linear remainder of c mod c'.
        // c'(x) = 3x^2 - 2 trace x + second, and
        // 9 c(x) = c'(x) (3x - trace) + r(x) with
        // r(x) = (6 second - 2 trace^2) x + (trace second - 9 det).
        let r1 = &(&second * &FieldElem::from(6)) - &(&(&trace * &trace) * &FieldElem::from(2));
        let r0 = &(&trace * &second) - &(&det * &FieldElem::from(9));
        if r1.is_zero() {
            // Either a triple root (scalar or unipotent, neither a homology)
            // or three distinct roots.
            return Ok(None);
        }
        let alpha = -r0.try_div(&r1).map_err(ExprError::from)?;
        if !eval_char(&alpha, &trace, &second, &det).is_zero() {
            return Ok(None);
        }
        let beta = &(&trace - &alpha) - &alpha;
        if beta == alpha {
            return Ok(None);
        }

        // The repeated eigenvalue must have a two-dimensional eigenspace:
        // m - alpha I of rank one, i.e. nonzero with all 2x2 minors zero.
        let shifted = shift_diag(m, &alpha);
        if shifted.iter().flatten().all(|e| e.is_zero()) {
            return Ok(None);
        }
        let adj = adjugate(&shifted);
        if adj.iter().flatten().any(|e| !e.is_zero()) {
            return Ok(None);
        }

        let axis_row = shifted
            .iter()
            .find(|row| row.iter().any(|e| !e.is_zero()))
            .expect("rank-one matrix has a nonzero row");
        let axis = normalize_triple(axis_row.clone());

        let adj_beta = adjugate(&shift_diag(m, &beta));
        let center_col = (0..3)
            .map(|c| [adj_beta[0][c].clone(), adj_beta[1][c].clone(), adj_beta[2][c].clone()])
            .find(|col| col.iter().any(|e| !e.is_zero()))
            .expect("rank-two shift has a rank-one adjugate");
        let center = normalize_triple(center_col);

        let period = self.projective_order()?;
        Ok(Some(Homology { period, center, axis }))
    }
}

fn eval_char(x: &FieldElem, trace: &FieldElem, second: &FieldElem, det: &FieldElem) -> FieldElem {
    let x2 = x * x;
    let x3 = &x2 * x;
    &(&(&x3 - &(trace * &x2)) + &(second * x)) - det
}

fn shift_diag(m: &Rows, lambda: &FieldElem) -> Rows {
    let mut out = m.clone();
    for i in 0..3 {
        out[i][i] = &out[i][i] - lambda;
    }
    out
}

/// Structural invariants that separate every pair of groups in the catalogue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFingerprint {
    pub order: u64,
    /// Projective order of each element, as order -> count.
    pub element_orders: BTreeMap<u64, u64>,
    pub center_order: u64,
    pub derived_order: u64,
    pub abelian: bool,
    /// Periods of the homologies among the elements, as period -> count.
    pub homologies: BTreeMap<u64, u64>,
}

impl fmt::Display for GroupFingerprint {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |m: &BTreeMap<u64, u64>| {
            m.iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            out,
            "order={};orders={};center={};derived={};abelian={};homologies={}",
            self.order,
            join(&self.element_orders),
            self.center_order,
            self.derived_order,
            self.abelian,
            join(&self.homologies),
        )
    }
}

impl GroupFingerprint {
    pub fn parse(src: &str) -> Result<Self, String> {
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for part in src.split(';') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("bad fingerprint field {part:?}"))?;
            fields.insert(key.trim(), value.trim());
        }
        let get = |k: &str| fields.get(k).copied().ok_or(format!("missing field {k:?}"));
        let int = |s: &str| s.parse::<u64>().map_err(|e| format!("bad integer {s:?}: {e}"));
        let map = |s: &str| -> Result<BTreeMap<u64, u64>, String> {
            let mut out = BTreeMap::new();
            for pair in s.split(',').filter(|p| !p.is_empty()) {
                let (k, v) = pair
                    .split_once(':')
                    .ok_or_else(|| format!("bad count {pair:?}"))?;
                out.insert(int(k)?, int(v)?);
            }
            Ok(out)
        };
        Ok(GroupFingerprint {
            order: int(get("order")?)?,
            element_orders: map(get("orders")?)?,
            center_order: int(get("center")?)?,
            derived_order: int(get("derived")?)?,
            abelian: match get("abelian")? {
                "true" => true,
                "false" => false,
                other => return Err(format!("bad abelian flag {other:?}")),
            },
            homologies: map(get("homologies")?)?,
        })
    }
}

/// A finite subgroup of PGL(3), held as its full element list.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    generators: Vec<ProjMatrix>,
    elements: Vec<ProjMatrix>,
    index: HashSet<ProjMatrix>,
}

impl MatrixGroup {
    /// Breadth-first closure of the generators under multiplication, starting
    /// from the identity.  Fails with `CapExceeded` if more than `cap`
    /// elements appear, which is how infinite groups are detected.
    pub fn closure_capped(generators: &[ProjMatrix], cap: usize) -> Result<Self, PglError> {
        let mut elements = vec![ProjMatrix::identity()];
        let mut index: HashSet<ProjMatrix> = elements.iter().cloned().collect();
        let mut queue: VecDeque<ProjMatrix> = elements.iter().cloned().collect();
        while let Some(m) = queue.pop_front() {
            for g in generators {
                let next = m.mul(g);
                if index.insert(next.clone()) {
                    if elements.len() >= cap {
                        return Err(PglError::CapExceeded(cap));
                    }
                    elements.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(MatrixGroup { generators: generators.to_vec(), elements, index })
    }

    pub fn closure(generators: &[ProjMatrix]) -> Result<Self, PglError> {
        Self::closure_capped(generators, DEFAULT_CAP)
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[ProjMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[ProjMatrix] {
        &self.generators
    }

    pub fn contains(&self, m: &ProjMatrix) -> bool {
        self.index.contains(m)
    }

    pub fn contains_group(&self, sub: &MatrixGroup) -> bool {
        sub.elements.iter().all(|m| self.contains(m))
    }

    pub fn same_elements(&self, other: &MatrixGroup) -> bool {
        self.order() == other.order() && self.contains_group(other)
    }

    /// The conjugate group `phi^-1 G phi`.
    pub fn conjugate(&self, phi: &ProjMatrix) -> MatrixGroup {
        let phi_inv = phi.inverse();
        let conj = |m: &ProjMatrix| phi_inv.mul(m).mul(phi);
        let elements: Vec<ProjMatrix> = self.elements.iter().map(conj).collect();
        let index = elements.iter().cloned().collect();
        MatrixGroup { generators: self.generators.iter().map(conj).collect(), elements, index }
    }

    /// Searches the ambient group for an element conjugating `first` onto
    /// `second`.  Both must be subgroups of the ambient group.
    pub fn conjugating_element(
        &self,
        first: &MatrixGroup,
        second: &MatrixGroup,
    ) -> Result<Option<ProjMatrix>, PglError> {
        if !self.contains_group(first) || !self.contains_group(second) {
            return Err(PglError::NotSubgroup);
        }
        if first.order() != second.order() {
            return Ok(None);
        }
        for phi in &self.elements {
            let phi_inv = phi.inverse();
            if first
                .elements
                .iter()
                .all(|m| second.contains(&phi_inv.mul(m).mul(phi)))
            {
                return Ok(Some(phi.clone()));
            }
        }
        Ok(None)
    }

    pub fn fingerprint(&self) -> Result<GroupFingerprint, PglError> {
        let mut element_orders = BTreeMap::new();
        let mut homologies = BTreeMap::new();
        for m in &self.elements {
            *element_orders.entry(m.projective_order()?).or_insert(0) += 1;
            if let Some(h) = m.homology()? {
                *homologies.entry(h.period).or_insert(0) += 1;
            }
        }
        let commutes_with_gens = |m: &ProjMatrix| self.generators.iter().all(|g| m.mul(g) == g.mul(m));
        let center_order = self.elements.iter().filter(|m| commutes_with_gens(m)).count() as u64;
        let abelian = center_order == self.order();

        let derived_order = if abelian {
            1
        } else {
            self.derived_subgroup()?.order()
        };

        Ok(GroupFingerprint {
            order: self.order(),
            element_orders,
            center_order,
            derived_order,
            abelian,
            homologies,
        })
    }

    /// The commutator subgroup, built as the normal closure of the pairwise
    /// generator commutators.
    pub fn derived_subgroup(&self) -> Result<MatrixGroup, PglError> {
        let mut seeds: Vec<ProjMatrix> = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let comm = a.inverse().mul(&b.inverse()).mul(a).mul(b);
                if !comm.is_identity() && !seeds.contains(&comm) {
                    seeds.push(comm);
                }
            }
        }
        let cap = self.elements.len().max(1);
        loop {
            let sub = MatrixGroup::closure_capped(&seeds, cap)?;
            let mut grew = false;
            'search: for g in &self.generators {
                let g_inv = g.inverse();
                for m in &sub.elements {
                    let conj = g_inv.mul(m).mul(g);
                    if !sub.contains(&conj) {
                        seeds.push(conj);
                        grew = true;
                        break 'search;
                    }
                }
            }
            if !grew {
                return Ok(sub);
            }
        }
    }
}

/// A group identity: the order and index of the GAP small-group label,
/// plus a tag separating inequivalent plane representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupLabel {
    pub order: u64,
    pub index: u64,
    pub tag: Option<String>,
}

impl GroupLabel {
    pub fn new(order: u64, index: u64) -> Self {
        GroupLabel { order, index, tag: None }
    }

    pub fn tagged(order: u64, index: u64, tag: &str) -> Self {
        GroupLabel { order, index, tag: Some(tag.to_string()) }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({}, {})", self.order, self.index)?;
        if let Some(tag) = &self.tag {
            write!(out, "[{tag}]")?;
        }
        Ok(())
    }
}

/// Looks a fingerprint up in a label table, requiring an exact match of all
/// invariants.
pub fn identify_in<'t>(
    table: impl IntoIterator<Item = &'t (GroupLabel, GroupFingerprint)>,
    fp: &GroupFingerprint,
) -> Result<GroupLabel, PglError> {
    for (label, known) in table {
        if known == fp {
            return Ok(label.clone());
        }
    }
    Err(PglError::UnknownGroup(fp.to_string()))
}

fn expect_scalar(parser: &mut Parser, params: &ParamMap) -> Result<FieldElem, PglError> {
    let e = parser.expr()?;
    Ok(expr::eval_scalar(&e, params)?)
}

fn parse_matrix_at(parser: &mut Parser, params: &ParamMap) -> Result<ProjMatrix, PglError> {
    if parser.eat_ident("diag") {
        parser.expect_sym('(')?;
        let a = expect_scalar(parser, params)?;
        parser.expect_sym(',')?;
        let b = expect_scalar(parser, params)?;
        parser.expect_sym(',')?;
        let c = expect_scalar(parser, params)?;
        parser.expect_sym(')')?;
        return ProjMatrix::diagonal(a, b, c);
    }
    parser.expect_sym('[')?;
    if parser.peek_sym('[') {
        let mut rows = zero_rows();
        for (r, row) in rows.iter_mut().enumerate() {
            if r > 0 {
                parser.expect_sym(',')?;
            }
            parser.expect_sym('[')?;
            for (c, slot) in row.iter_mut().enumerate() {
                if c > 0 {
                    parser.expect_sym(',')?;
                }
                *slot = expect_scalar(parser, params)?;
            }
            parser.expect_sym(']')?;
        }
        parser.expect_sym(']')?;
        return ProjMatrix::new(rows);
    }
    let mut rows = zero_rows();
    for (r, row) in rows.iter_mut().enumerate() {
        if r > 0 {
            parser.expect_sym(':')?;
        }
        let e = parser.expr()?;
        let bag = poly::eval_poly(&e, params)?;
        *row = bag.into_linear()?;
    }
    parser.expect_sym(']')?;
    ProjMatrix::new(rows)
}

/// Parses one matrix in any of the accepted shapes: `diag(a, b, c)`,
/// an image triple `[aX + bY : ... : ...]`, or explicit rows
/// `[[a, b, c], [d, e, f], [g, h, i]]`.
pub fn parse_matrix(src: &str, params: &ParamMap) -> Result<ProjMatrix, PglError> {
    let mut parser = Parser::new(src)?;
    let m = parse_matrix_at(&mut parser, params)?;
    parser.expect_end()?;
    Ok(m)
}

/// Parses a generator list: one matrix per line, `#` comments and blank
/// lines skipped.
pub fn parse_generators(text: &str, params: &ParamMap) -> Result<Vec<ProjMatrix>, PglError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_matrix(line, params)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloNum;

    fn m(src: &str) -> ProjMatrix {
        parse_matrix(src, &ParamMap::new()).unwrap()
    }

    fn zeta(n: u64, k: i64) -> FieldElem {
        FieldElem::from(CycloNum::root_of_unity(n, k))
    }

    #[test]
    fn canonical_scaling_and_equality() {
        let a = m("diag(2, 2, 2*E(3))");
        let b = m("diag(1, 1, E(3))");
        assert_eq!(a, b);
        let swap = m("[Y : X : Z]");
        assert_eq!(swap.rows()[0][1], FieldElem::one());
        assert_eq!(swap.mul(&swap), ProjMatrix::identity());
        assert!(ProjMatrix::diagonal(FieldElem::one(), FieldElem::zero(), FieldElem::one()).is_err());
    }

    #[test]
    fn inverse_and_parsing_shapes() {
        let g = m("[[1, 1, 0], [0, 1, 0], [2, 0, E(4)]]");
        assert_eq!(g.mul(&g.inverse()), ProjMatrix::identity());
        assert_eq!(g.inverse().mul(&g), ProjMatrix::identity());

        let round = m(&g.to_string());
        assert_eq!(round, g);

        let shear = m("[X + E(3)*Y : Y : Z]");
        assert_eq!(shear.rows()[0][1], zeta(3, 1));

        assert!(parse_matrix("[X : Y]", &ParamMap::new()).is_err());
        assert!(parse_matrix("[X*Y : Y : Z]", &ParamMap::new()).is_err());
    }

    #[test]
    fn projective_orders() {
        assert_eq!(ProjMatrix::identity().projective_order().unwrap(), 1);
        assert_eq!(m("[X : Z : Y]").projective_order().unwrap(), 2);
        assert_eq!(m("diag(1, E(30)^5, E(30)^6)").projective_order().unwrap(), 30);
        assert_eq!(m("[Y : Z : X]").projective_order().unwrap(), 3);
        let shear = m("[[1, 1, 0], [0, 1, 0], [0, 0, 1]]");
        assert!(matches!(shear.projective_order(), Err(PglError::NotFinite(_))));
    }

    #[test]
    fn closure_orders() {
        let diag = m("diag(1, E(6), E(6)^2)");
        let rev = m("[Z : Y : X]");
        let g = MatrixGroup::closure(&[diag, rev]).unwrap();
        assert_eq!(g.order(), 12);

        let klein_diag = m("diag(1, E(21), E(21)^17)");
        let cycle = m("[Z : X : Y]");
        let klein = MatrixGroup::closure(&[klein_diag, cycle]).unwrap();
        assert_eq!(klein.order(), 63);

        let shear = m("[[1, 1, 0], [0, 1, 0], [0, 0, 1]]");
        assert!(matches!(
            MatrixGroup::closure(&[shear]),
            Err(PglError::CapExceeded(_))
        ));
    }

    #[test]
    fn homology_detection() {
        let h = m("diag(1, 1, E(5))").homology().unwrap().unwrap();
        assert_eq!(h.period, 5);
        assert_eq!(h.center, [FieldElem::zero(), FieldElem::zero(), FieldElem::one()]);
        assert_eq!(h.axis, [FieldElem::zero(), FieldElem::zero(), FieldElem::one()]);

        let h = m("diag(E(6), 1, 1)").homology().unwrap().unwrap();
        assert_eq!(h.period, 6);
        assert_eq!(h.center, [FieldElem::one(), FieldElem::zero(), FieldElem::zero()]);
        assert_eq!(h.axis, [FieldElem::one(), FieldElem::zero(), FieldElem::zero()]);

        assert!(m("diag(1, E(3), E(3)^2)").homology().unwrap().is_none());
        assert!(ProjMatrix::identity().homology().unwrap().is_none());
        assert!(m("[Y : Z : X]").homology().unwrap().is_none());
        let shear = m("[[1, 1, 0], [0, 1, 0], [0, 0, 1]]");
        assert!(shear.homology().unwrap().is_none());

        // A non-diagonal homology: conjugate of diag(1, 1, E(3)).
        let phi = m("[[1, 1, 0], [0, 1, 1], [1, 0, 1]]");
        let h = m("diag(1, 1, E(3))").conjugate_by(&phi).homology().unwrap().unwrap();
        assert_eq!(h.period, 3);
    }

    #[test]
    fn elementary_abelian_vs_nonhomology_nine() {
        let with = MatrixGroup::closure(&[m("diag(1, E(3), E(3)^2)"), m("diag(1, 1, E(3))")]).unwrap();
        let without = MatrixGroup::closure(&[m("diag(1, E(3), E(3)^2)"), m("[Y : Z : X]")]).unwrap();
        let fp_with = with.fingerprint().unwrap();
        let fp_without = without.fingerprint().unwrap();
        assert_eq!(fp_with.order, 9);
        assert_eq!(fp_without.order, 9);
        // Both are elementary abelian: the commutator of the diagonal and the
        // cycle is scalar, so it vanishes projectively.  Only the homology
        // count tells the two plane representations apart.
        assert!(fp_with.abelian && fp_without.abelian);
        assert_eq!(fp_with.homologies, BTreeMap::from([(3, 6)]));
        assert!(fp_without.homologies.is_empty());
        assert_ne!(fp_with, fp_without);
    }

    #[test]
    fn semidihedral_sixteen() {
        let g = MatrixGroup::closure(&[m("diag(1, E(8), E(8)^3)"), m("[X : Z : Y]")]).unwrap();
        let fp = g.fingerprint().unwrap();
        assert_eq!(fp.order, 16);
        assert_eq!(fp.element_orders.get(&8), Some(&4));
        assert_eq!(fp.center_order, 2);
        assert_eq!(fp.derived_order, 4);
    }

    #[test]
    fn fingerprint_is_conjugation_invariant() {
        let g = MatrixGroup::closure(&[m("diag(1, E(6), E(6)^2)"), m("[Z : Y : X]")]).unwrap();
        let phi = m("[[1, 1, 0], [0, 1, 1], [1, 0, 1]]");
        let conj = g.conjugate(&phi);
        assert_eq!(g.fingerprint().unwrap(), conj.fingerprint().unwrap());
        assert_eq!(conj.order(), 12);
    }

    #[test]
    fn conjugacy_search_in_ambient_group() {
        let ambient = MatrixGroup::closure(&[m("diag(1, E(3), E(3)^2)"), m("[Y : Z : X]"), m("[X : Z : Y]")]).unwrap();
        assert_eq!(ambient.order(), 18);
        let a = MatrixGroup::closure(&[m("[X : Z : Y]")]).unwrap();
        let b = MatrixGroup::closure(&[m("[Z : Y : X]")]).unwrap();
        let phi = ambient.conjugating_element(&a, &b).unwrap().unwrap();
        assert!(ambient.contains(&phi));
        assert!(a.conjugate(&phi).same_elements(&b));

        let outside = MatrixGroup::closure(&[m("diag(1, 1, E(5))")]).unwrap();
        assert!(matches!(
            ambient.conjugating_element(&a, &outside),
            Err(PglError::NotSubgroup)
        ));
    }

    #[test]
    fn automorphy_factors() {
        let fermat = poly::parse_poly("X^6 + Y^6 + Z^6", &ParamMap::new()).unwrap();
        let rot = m("[Y : Z : X]");
        assert_eq!(rot.automorphy_factor(&fermat), Some(FieldElem::one()));
        let scale = m("diag(1, 1, E(6))");
        assert_eq!(scale.automorphy_factor(&fermat), Some(FieldElem::one()));
        let bad = m("[X + Y : Y : Z]");
        assert_eq!(bad.automorphy_factor(&fermat), None);

        let klein = poly::parse_poly("X^5*Y + Y^5*Z + Z^5*X", &ParamMap::new()).unwrap();
        let d = m("diag(1, E(21), E(21)^17)");
        let lambda = d.automorphy_factor(&klein).unwrap();
        assert_eq!(lambda, zeta(21, 1));
    }

    #[test]
    fn fingerprint_string_round_trip() {
        let g = MatrixGroup::closure(&[m("diag(1, E(8), E(8)^3)"), m("[X : Z : Y]")]).unwrap();
        let fp = g.fingerprint().unwrap();
        let parsed = GroupFingerprint::parse(&fp.to_string()).unwrap();
        assert_eq!(parsed, fp);
        assert!(GroupFingerprint::parse("order=3").is_err());
    }

    #[test]
    fn label_lookup() {
        let table = vec![
            (
                GroupLabel::tagged(9, 2, "homology"),
                MatrixGroup::closure(&[m("diag(1, E(3), E(3)^2)"), m("diag(1, 1, E(3))")])
                    .unwrap()
                    .fingerprint()
                    .unwrap(),
            ),
            (
                GroupLabel::tagged(9, 2, "free"),
                MatrixGroup::closure(&[m("diag(1, E(3), E(3)^2)"), m("[Y : Z : X]")])
                    .unwrap()
                    .fingerprint()
                    .unwrap(),
            ),
        ];
        let probe = MatrixGroup::closure(&[m("diag(1, E(3), 1)"), m("diag(1, 1, E(3))")])
            .unwrap()
            .fingerprint()
            .unwrap();
        let label = identify_in(&table, &probe).unwrap();
        assert_eq!(label.to_string(), "(9, 2)[homology]");
        let unknown = MatrixGroup::closure(&[m("diag(1, 1, E(4))")]).unwrap().fingerprint().unwrap();
        assert!(identify_in(&table, &unknown).is_err());
    }
}
