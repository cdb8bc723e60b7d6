//! Homogeneous ternary forms over field elements: construction from the
//! expression grammar, exact substitution by 3x3 matrices, partials,
//! canonical printing.

use crate::cyclo::FieldElem;
use crate::expr::{self, Expr, ExprError, ParamMap, Var};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("polynomial is not homogeneous; offending monomials: {0:?}")]
    Inhomogeneous(Vec<String>),
    #[error("expected degree {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("expression is not {0} (monomial {1} appears)")]
    WrongShape(&'static str, String),
    #[error("negative power of a non-scalar polynomial")]
    NegativePower,
}

/// X^i Y^j Z^k. Ordering is graded lexicographic with X > Y > Z (ascending;
/// canonical printing walks it in reverse).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

pub fn mono(i: u32, j: u32, k: u32) -> Monomial {
    Monomial { i, j, k }
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.i + self.j + self.k
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match v {
            Var::X => self.i,
            Var::Y => self.j,
            Var::Z => self.k,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.i, self.j).cmp(&(other.degree(), other.i, other.j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (name, e) in [("X", self.i), ("Y", self.j), ("Z", self.k)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Homogeneous polynomial; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    degree: u32,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl HomogPoly {
    pub fn zero(degree: u32) -> Self {
        HomogPoly { degree, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(degree: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FieldElem)>,
    {
        let mut map: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.degree(), degree, "monomial {m} breaks degree {degree}");
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(FieldElem::zero);
            *entry = &*entry + &c;
            if entry.is_zero() {
                map.remove(&m);
            }
        }
        HomogPoly { degree, terms: map }
    }

    pub fn monomial(degree: u32, m: Monomial, c: FieldElem) -> Self {
        Self::from_terms(degree, [(m, c)])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32, k: u32) -> FieldElem {
        self.terms.get(&mono(i, j, k)).cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().copied().collect()
    }

    /// Graded-lex leading term (X > Y > Z).
    pub fn leading(&self) -> Option<(Monomial, &FieldElem)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn uses_variable(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        HomogPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree, "degree mismatch in addition");
        Self::from_terms(
            self.degree,
            self.terms
                .iter()
                .map(|(m, c)| (*m, c.clone()))
                .chain(rhs.terms.iter().map(|(m, c)| (*m, c.clone()))),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&FieldElem::from(-1)))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let degree = self.degree + rhs.degree;
        let mut out: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = mono(ma.i + mb.i, ma.j + mb.j, ma.k + mb.k);
                let v = ca * cb;
                let entry = out.entry(m).or_insert_with(FieldElem::zero);
                *entry = &*entry + &v;
                if entry.is_zero() {
                    out.remove(&m);
                }
            }
        }
        HomogPoly { degree, terms: out }
    }

    /// Multiplication by a bare monomial (Macaulay rows).
    pub fn mul_monomial(&self, m: Monomial) -> Self {
        HomogPoly {
            degree: self.degree + m.degree(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (mono(t.i + m.i, t.j + m.j, t.k + m.k), c.clone()))
                .collect(),
        }
    }

    pub fn partials(&self) -> (Self, Self, Self) {
        let d = self.degree.saturating_sub(1);
        let mut px = Vec::new();
        let mut py = Vec::new();
        let mut pz = Vec::new();
        for (m, c) in &self.terms {
            if m.i > 0 {
                px.push((mono(m.i - 1, m.j, m.k), c * &FieldElem::from(m.i as i64)));
            }
            if m.j > 0 {
                py.push((mono(m.i, m.j - 1, m.k), c * &FieldElem::from(m.j as i64)));
            }
            if m.k > 0 {
                pz.push((mono(m.i, m.j, m.k - 1), c * &FieldElem::from(m.k as i64)));
            }
        }
        (
            Self::from_terms(d, px),
            Self::from_terms(d, py),
            Self::from_terms(d, pz),
        )
    }

    /// F(M (X,Y,Z)^T) for a row-major 3x3 matrix: each variable is replaced
    /// by the linear form of the corresponding matrix row.
    pub fn substitute_rows(&self, rows: &[[FieldElem; 3]; 3]) -> Self {
        let linear: Vec<HomogPoly> = rows
            .iter()
            .map(|r| {
                Self::from_terms(
                    1,
                    [
                        (mono(1, 0, 0), r[0].clone()),
                        (mono(0, 1, 0), r[1].clone()),
                        (mono(0, 0, 1), r[2].clone()),
                    ],
                )
            })
            .collect();
        // power ladders up to the degree actually used
        let one = Self::from_terms(0, [(mono(0, 0, 0), FieldElem::one())]);
        let ladder = |l: &HomogPoly, top: u32| -> Vec<HomogPoly> {
            let mut v = vec![one.clone()];
            for _ in 0..top {
                v.push(v.last().unwrap().mul(l));
            }
            v
        };
        let top_x = self.terms.keys().map(|m| m.i).max().unwrap_or(0);
        let top_y = self.terms.keys().map(|m| m.j).max().unwrap_or(0);
        let top_z = self.terms.keys().map(|m| m.k).max().unwrap_or(0);
        let lx = ladder(&linear[0], top_x);
        let ly = ladder(&linear[1], top_y);
        let lz = ladder(&linear[2], top_z);
        let mut acc = Self::zero(self.degree);
        for (m, c) in &self.terms {
            let term = lx[m.i as usize]
                .mul(&ly[m.j as usize])
                .mul(&lz[m.k as usize])
                .scale(c);
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for HomogPoly {
    /// Canonical form: graded-lex descending monomials, composite
    /// coefficients parenthesized; output re-parses to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let cs = c.to_string();
            let body = if m.degree() == 0 {
                wrap_composite(&cs)
            } else if cs == "1" {
                m.to_string()
            } else if cs == "-1" {
                format!("-{m}")
            } else {
                format!("{}*{m}", wrap_composite(&cs))
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parenthesize coefficient strings that contain top-level structure.
fn wrap_composite(s: &str) -> String {
    if s.contains(' ') || (s.contains('/') && s.contains('*')) {
        format!("({s})")
    } else {
        s.to_string()
    }
}

// ---------------------------------------------------------------------------
// Evaluation of parsed expressions into (possibly mixed-degree) term bags,
// then validation into the shapes callers need.

#[derive(Clone, Debug, Default)]
pub struct PolyBag {
    terms: BTreeMap<Monomial, FieldElem>,
}

impl PolyBag {
    fn scalar(c: FieldElem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono(0, 0, 0), c);
        }
        PolyBag { terms }
    }

    fn var(v: Var) -> Self {
        let m = match v {
            Var::X => mono(1, 0, 0),
            Var::Y => mono(0, 1, 0),
            Var::Z => mono(0, 0, 1),
        };
        PolyBag { terms: BTreeMap::from([(m, FieldElem::one())]) }
    }

    fn as_scalar(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(FieldElem::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.degree() == 0 {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn add(&self, rhs: &Self, sign: i64) -> Self {
        let mut out = self.terms.clone();
        for (m, c) in &rhs.terms {
            let signed = if sign < 0 { -c } else { c.clone() };
            let entry = out.entry(*m).or_insert_with(FieldElem::zero);
            *entry = &*entry + &signed;
            if entry.is_zero() {
                out.remove(m);
            }
        }
        PolyBag { terms: out }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = mono(ma.i + mb.i, ma.j + mb.j, ma.k + mb.k);
                let v = ca * cb;
                let entry = out.entry(m).or_insert_with(FieldElem::zero);
                *entry = &*entry + &v;
                if entry.is_zero() {
                    out.remove(&m);
                }
            }
        }
        PolyBag { terms: out }
    }

    /// Demand a single uniform degree; list offenders otherwise. The zero
    /// bag becomes the zero polynomial of the requested fallback degree.
    pub fn into_homog(self, fallback_degree: u32) -> Result<HomogPoly, PolyError> {
        let Some(d) = self.terms.keys().next_back().map(|m| m.degree()) else {
            return Ok(HomogPoly::zero(fallback_degree));
        };
        let off: Vec<String> = self
            .terms
            .keys()
            .filter(|m| m.degree() != d)
            .map(|m| m.to_string())
            .collect();
        if !off.is_empty() {
            return Err(PolyError::Inhomogeneous(off));
        }
        Ok(HomogPoly { degree: d, terms: self.terms })
    }

    pub fn into_scalar(self) -> Result<FieldElem, PolyError> {
        match self.as_scalar() {
            Some(c) => Ok(c),
            None => {
                let m = self.terms.keys().find(|m| m.degree() > 0).unwrap();
                Err(PolyError::WrongShape("a scalar", m.to_string()))
            }
        }
    }

    /// Coefficients (of X, Y, Z) of a linear form.
    pub fn into_linear(self) -> Result<[FieldElem; 3], PolyError> {
        if let Some(m) = self.terms.keys().find(|m| m.degree() != 1) {
            return Err(PolyError::WrongShape("a linear form", m.to_string()));
        }
        let mut out = [FieldElem::zero(), FieldElem::zero(), FieldElem::zero()];
        for (m, c) in self.terms {
            let slot = if m.i == 1 { 0 } else if m.j == 1 { 1 } else { 2 };
            out[slot] = c;
        }
        Ok(out)
    }
}

pub fn eval_poly(e: &Expr, params: &ParamMap) -> Result<PolyBag, PolyError> {
    Ok(match e {
        Expr::Var(v) => PolyBag::var(*v),
        Expr::Num(_) | Expr::Root(_, _) | Expr::Param(_) => {
            PolyBag::scalar(expr::eval_scalar(e, params)?)
        }
        Expr::Sqrt(inner) => {
            let arg = eval_poly(inner, params)?.into_scalar()?;
            PolyBag::scalar(FieldElem::sqrt(&arg).map_err(ExprError::from)?)
        }
        Expr::Neg(a) => PolyBag::default().add(&eval_poly(a, params)?, -1),
        Expr::Add(a, b) => eval_poly(a, params)?.add(&eval_poly(b, params)?, 1),
        Expr::Sub(a, b) => eval_poly(a, params)?.add(&eval_poly(b, params)?, -1),
        Expr::Mul(a, b) => eval_poly(a, params)?.mul(&eval_poly(b, params)?),
        Expr::Div(a, b) => {
            let den = eval_poly(b, params)?.into_scalar()?;
            let inv = den.inv().map_err(ExprError::from)?;
            eval_poly(a, params)?.mul(&PolyBag::scalar(inv))
        }
        Expr::Pow(a, k) => {
            let base = eval_poly(a, params)?;
            if *k < 0 {
                let s = base.into_scalar().map_err(|_| PolyError::NegativePower)?;
                PolyBag::scalar(s.pow(*k).map_err(ExprError::from)?)
            } else {
                let mut acc = PolyBag::scalar(FieldElem::one());
                for _ in 0..*k {
                    acc = acc.mul(&base);
                }
                acc
            }
        }
    })
}

/// Parse one polynomial expression (no file framing) with parameters bound.
pub fn parse_poly(src: &str, params: &ParamMap) -> Result<HomogPoly, PolyError> {
    let e = expr::parse_expr(src)?;
    eval_poly(&e, params)?.into_homog(0)
}

/// Curve file format: '#' comment lines, blank lines ignored, remaining
/// lines are terms joined additively unless they carry their own sign.
pub fn parse_curve_file(text: &str, params: &ParamMap) -> Result<HomogPoly, PolyError> {
    let mut joined = String::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !joined.is_empty() && !line.starts_with('+') && !line.starts_with('-') {
            joined.push_str(" + ");
        } else if !joined.is_empty() {
            joined.push(' ');
        }
        joined.push_str(line);
    }
    parse_poly(&joined, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloNum;

    fn p(src: &str) -> HomogPoly {
        parse_poly(src, &ParamMap::new()).unwrap()
    }

    fn fermat() -> HomogPoly {
        p("X^6 + Y^6 + Z^6")
    }

    fn root(n: u64, k: i64) -> FieldElem {
        FieldElem::root_of_unity(n, k)
    }

    fn diag(a: FieldElem, b: FieldElem, c: FieldElem) -> [[FieldElem; 3]; 3] {
        let z = FieldElem::zero;
        [
            [a, z(), z()],
            [z(), b, z()],
            [z(), z(), c],
        ]
    }

    #[test]
    fn parse_and_display() {
        let f = p("X^6 + Y^6 + X*Z^5");
        assert_eq!(f.degree(), 6);
        assert_eq!(f.len(), 3);
        assert_eq!(f.to_string(), "X^6 + X*Z^5 + Y^6");
        let wiman = p(
            "27*X^6 + 9*X*Z^5 + 9*X*Y^5 - 135*X^4*Y*Z - 45*X^2*Y^2*Z^2 + 10*Y^3*Z^3",
        );
        assert_eq!(wiman.coeff(4, 1, 1), FieldElem::from(-135));
        assert_eq!(wiman.coeff(0, 3, 3), FieldElem::from(10));
        // inhomogeneous input rejected with the offender listed
        match parse_poly("X^6 + Y^5", &ParamMap::new()) {
            Err(PolyError::Inhomogeneous(ms)) => assert_eq!(ms, vec!["Y^5"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn display_round_trip() {
        let polys = [
            fermat(),
            p("27*X^6 + 9*X*Z^5 + 9*X*Y^5 - 135*X^4*Y*Z - 45*X^2*Y^2*Z^2 + 10*Y^3*Z^3"),
            p("X^5*Y + Y^5*Z + X*Z^5 - 5*X^2*Y^2*Z^2"),
            p("(1 - 2*E(5)^2)/3*X^3*Y^3 + E(4)*Z^6"),
        ];
        for f in polys {
            let text = f.to_string();
            assert_eq!(parse_poly(&text, &ParamMap::new()).unwrap(), f, "round trip `{text}`");
        }
        // the zero polynomial prints as "0"; its declared degree is not
        // recoverable from text
        assert_eq!(HomogPoly::zero(6).to_string(), "0");
        assert!(parse_poly("0", &ParamMap::new()).unwrap().is_zero());
    }

    #[test]
    fn curve_file_framing() {
        let text = "# a comment\nX^6\nY^6\n- 2*X^3*Y^3\n+ Z^6\n";
        let f = parse_curve_file(text, &ParamMap::new()).unwrap();
        assert_eq!(f, p("X^6 + Y^6 - 2*X^3*Y^3 + Z^6"));
    }

    #[test]
    fn partials_and_euler() {
        let (fx, fy, fz) = fermat().partials();
        assert_eq!(fx, p("6*X^5"));
        assert_eq!(fy, p("6*Y^5"));
        assert_eq!(fz, p("6*Z^5"));
        let (gx, _, gz) = p("X^5*Y").partials();
        assert_eq!(gx, p("5*X^4*Y"));
        assert!(gz.is_zero());
        // Euler identity X F_X + Y F_Y + Z F_Z = deg * F
        let f = p("X^5*Y + Y^5*Z + X*Z^5 - 5*X^2*Y^2*Z^2");
        let (fx, fy, fz) = f.partials();
        let x = HomogPoly::monomial(1, mono(1, 0, 0), FieldElem::one());
        let y = HomogPoly::monomial(1, mono(0, 1, 0), FieldElem::one());
        let z = HomogPoly::monomial(1, mono(0, 0, 1), FieldElem::one());
        let euler = x.mul(&fx).add(&y.mul(&fy)).add(&z.mul(&fz));
        assert_eq!(euler, f.scale(&FieldElem::from(6)));
    }

    #[test]
    fn substitution() {
        // cyclic shift [Y:Z:X] fixes the Fermat sextic
        let z = FieldElem::zero;
        let o = FieldElem::one;
        let shift = [
            [z(), o(), z()],
            [z(), z(), o()],
            [o(), z(), z()],
        ];
        assert_eq!(fermat().substitute_rows(&shift), fermat());
        assert_eq!(
            fermat().substitute_rows(&diag(root(6, 1), o(), o())),
            fermat()
        );
        // Klein-style eigenvalue: diag(1, z21, z21^17) scales the curve by z21
        let klein = p("X^5*Y + Y^5*Z + X*Z^5");
        let m = diag(o(), root(21, 1), root(21, 17));
        assert_eq!(klein.substitute_rows(&m), klein.scale(&root(21, 1)));
    }

    #[test]
    fn substitution_is_right_action() {
        let f = p("X^6 + 2*X^3*Y^3 + Y^6 + X*Z^5");
        let m1 = [
            [FieldElem::from(1), FieldElem::from(2), FieldElem::zero()],
            [FieldElem::zero(), FieldElem::from(1), FieldElem::from(-1)],
            [FieldElem::from(3), FieldElem::zero(), FieldElem::from(1)],
        ];
        let m2 = [
            [FieldElem::from(1), FieldElem::zero(), FieldElem::from(1)],
            [FieldElem::from(-2), FieldElem::from(1), FieldElem::zero()],
            [FieldElem::zero(), FieldElem::from(5), FieldElem::from(1)],
        ];
        // matrix product m1*m2
        let mut prod: [[FieldElem; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| FieldElem::zero()));
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = FieldElem::zero();
                for t in 0..3 {
                    acc = &acc + &(&m1[r][t] * &m2[t][c]);
                }
                prod[r][c] = acc;
            }
        }
        assert_eq!(
            f.substitute_rows(&m1).substitute_rows(&m2),
            f.substitute_rows(&prod)
        );
    }

    #[test]
    fn scalar_coefficients_with_roots() {
        let f = p("E(3)*X^6 + (1+E(3))*Y^6");
        let zeta6 = CycloNum::root_of_unity(6, 1);
        assert_eq!(f.coeff(0, 6, 0), FieldElem::from(zeta6));
    }
}
