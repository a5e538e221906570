//! The skew-Laurent edge algebra of a triangulated surface and the triangle
//! algebras it embeds into.
//!
//! Generators `X_1, ..., X_n` (one per edge) obey `X_i X_j = q^{2 sigma_ij}
//! X_j X_i`.  Polynomials are kept in normal form: monomials are exponent
//! vectors with the variables ordered by edge index, and reordering phases
//! are accumulated into the coefficients.  All powers of `q` are computed
//! from an exact integer exponent modulo `2N`, so no phase drift accumulates
//! no matter how many reorderings a computation performs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::Triangulation;

/// Tolerance used when pruning exactly-cancelled coefficients.
const COEFF_EPS: f64 = 1e-14;

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The root-of-unity parameter set: an integer `N >= 2` and an odd integer
/// `c` coprime to `N`, defining `q = -exp(i pi c / N)`.
///
/// Then `q^N = (-1)^{N+1}` and `omega = q^2` is a primitive N-th root of
/// unity.  Powers of `q` are computed exactly: `q^k = exp(i pi ((k (c+N))
/// mod 2N) / N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QParams {
    n: usize,
    c: i64,
}

impl QParams {
    pub fn new(n: usize, c: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Params(format!("N must be at least 2, got {n}")));
        }
        if c.rem_euclid(2) != 1 {
            return Err(Error::Params(format!("c must be odd, got {c}")));
        }
        if gcd(c, n as i64) != 1 {
            return Err(Error::Params(format!("c = {c} must be coprime to N = {n}")));
        }
        let p = QParams { n, c };
        // Belt-and-braces numeric checks of the defining properties.
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        let qn = p.q_pow(n as i64);
        if (qn - Complex64::new(sign, 0.0)).norm() > 1e-12 {
            return Err(Error::Params(format!("q^N = {qn} differs from (-1)^(N+1)")));
        }
        for k in 1..n as i64 {
            if (p.q_pow(2 * k) - Complex64::new(1.0, 0.0)).norm() <= 1e-6 {
                return Err(Error::Params(format!(
                    "q^2 is not a primitive {n}-th root of unity (q^{} = 1)",
                    2 * k
                )));
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// `q^k`, exact in the exponent: the integer `k (c+N)` is reduced modulo
    /// `2N` before the single conversion to a complex number.
    pub fn q_pow(&self, k: i64) -> Complex64 {
        let two_n = 2 * self.n as i64;
        let kk = k
            .checked_mul(self.c + self.n as i64)
            .expect("q exponent overflow")
            .rem_euclid(two_n);
        Complex64::from_polar(1.0, PI * kk as f64 / self.n as f64)
    }

    pub fn q(&self) -> Complex64 {
        self.q_pow(1)
    }

    /// `omega = q^2`, a primitive N-th root of unity.
    pub fn omega_pow(&self, k: i64) -> Complex64 {
        self.q_pow(2 * k)
    }

    /// Principal N-th root: modulus `|z|^{1/N}`, argument `arg(z)/N` with
    /// `arg` in `(-pi, pi]`.
    pub fn principal_nth_root(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(z.norm().powf(1.0 / self.n as f64), z.arg() / self.n as f64)
    }

    /// Nearest exponent `g` with `omega^g` closest to `z`, and the distance.
    pub fn nearest_omega_exponent(&self, z: Complex64) -> (i64, f64) {
        let mut best = (0i64, f64::INFINITY);
        for g in 0..self.n as i64 {
            let d = (z - self.omega_pow(g)).norm();
            if d < best.1 {
                best = (g, d);
            }
        }
        best
    }
}

/// A skew-Laurent polynomial in normal form: exponent vector -> coefficient.
///
/// The exponent vector length is the number of edge variables; zero
/// coefficients are pruned, so the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewPoly {
    pub terms: BTreeMap<Vec<i64>, Complex64>,
}

impl SkewPoly {
    pub fn zero() -> Self {
        SkewPoly { terms: BTreeMap::new() }
    }

    pub fn monomial(exponents: Vec<i64>, coeff: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff.norm() > 0.0 {
            terms.insert(exponents, coeff);
        }
        SkewPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term of a one-term polynomial.
    pub fn single(&self) -> Option<(&Vec<i64>, Complex64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, &c)| (e, c))
        } else {
            None
        }
    }

    pub fn add(&self, other: &SkewPoly) -> SkewPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut p = SkewPoly { terms };
        p.prune();
        p
    }

    pub fn sub(&self, other: &SkewPoly) -> SkewPoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> SkewPoly {
        let mut p = SkewPoly {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        };
        p.prune();
        p
    }

    fn prune(&mut self) {
        let scale = self
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        self.terms.retain(|_, c| c.norm() > COEFF_EPS * scale);
    }

    /// Largest coefficient distance to `other`, for tolerant comparisons.
    pub fn distance(&self, other: &SkewPoly) -> f64 {
        self.sub(other)
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// The edge algebra: parameters plus the antisymmetric exponent matrix.
#[derive(Debug, Clone)]
pub struct EdgeAlgebra {
    params: QParams,
    sigma: Vec<Vec<i64>>,
}

impl EdgeAlgebra {
    pub fn new(params: QParams, sigma: Vec<Vec<i64>>) -> Result<Self> {
        let n = sigma.len();
        for (i, row) in sigma.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Params("sigma matrix must be square".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != -sigma[j][i] || v.abs() > 2 {
                    return Err(Error::Params(format!(
                        "sigma must be antisymmetric with entries in [-2,2]; offending ({i},{j})"
                    )));
                }
            }
        }
        Ok(EdgeAlgebra { params, sigma })
    }

    pub fn for_surface(params: QParams, t: &Triangulation) -> Self {
        EdgeAlgebra { params, sigma: t.sigma_matrix() }
    }

    pub fn n_vars(&self) -> usize {
        self.sigma.len()
    }

    pub fn params(&self) -> &QParams {
        &self.params
    }

    pub fn sigma(&self) -> &[Vec<i64>] {
        &self.sigma
    }

    pub fn scalar(&self, c: Complex64) -> SkewPoly {
        SkewPoly::monomial(vec![0; self.n_vars()], c)
    }

    pub fn one(&self) -> SkewPoly {
        self.scalar(Complex64::new(1.0, 0.0))
    }

    /// The generator `X_i^k` (a single normal-form monomial for any `k`).
    pub fn gen_pow(&self, i: usize, k: i64) -> SkewPoly {
        let mut e = vec![0i64; self.n_vars()];
        e[i] = k;
        SkewPoly::monomial(e, Complex64::new(1.0, 0.0))
    }

    pub fn gen(&self, i: usize) -> SkewPoly {
        self.gen_pow(i, 1)
    }

    /// Phase exponent accumulated when normal-ordering `X^a . X^b`: each
    /// factor `X_j` of `b` moves left past the factors `X_k` of `a` with
    /// `k > j`, each swap contributing `q^{2 sigma_kj}`.
    fn reorder_exponent(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut total = 0i64;
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(k) {
                if bj != 0 {
                    total += 2 * ak * bj * self.sigma[k][j];
                }
            }
        }
        total
    }

    pub fn mul(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let mut terms: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let phase = self.params.q_pow(self.reorder_exponent(ea, eb));
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert(Complex64::new(0.0, 0.0)) += ca * cb * phase;
            }
        }
        let mut p = SkewPoly { terms };
        p.prune();
        p
    }

    /// Weyl-ordered product of the listed generators: `q^{-sum_{a<b}
    /// sigma_{e_a e_b}}` times the product in the given order.  Independent
    /// of the input ordering.
    pub fn weyl(&self, indices: &[usize]) -> SkewPoly {
        let mut exponent = 0i64;
        for a in 0..indices.len() {
            for b in a + 1..indices.len() {
                exponent += self.sigma[indices[a]][indices[b]];
            }
        }
        let mut p = self.scalar(self.params.q_pow(-exponent));
        for &i in indices {
            p = self.mul(&p, &self.gen(i));
        }
        p
    }

    /// Inverse of a single-monomial polynomial.
    pub fn inv_monomial(&self, p: &SkewPoly) -> Result<SkewPoly> {
        let (e, c) = p
            .single()
            .ok_or_else(|| Error::Params("only single monomials are invertible here".into()))?;
        if c.norm() == 0.0 {
            return Err(Error::Params("cannot invert the zero monomial".into()));
        }
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        // Want B with B.A = 1 for A = c X^e: B = c^{-1} q^{-phase(-e, e)} X^{-e}.
        let phase = self.params.q_pow(-self.reorder_exponent(&neg, e));
        Ok(SkewPoly::monomial(neg, phase / c))
    }

    /// Format a polynomial in the literal syntax accepted by [`parse`].
    pub fn format(&self, p: &SkewPoly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in p.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format_complex(*c));
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if exp == 1 {
                    write!(out, " X{}", i + 1).unwrap();
                } else {
                    write!(out, " X{}^{}", i + 1, exp).unwrap();
                }
            }
        }
        out
    }

    /// Parse the polynomial literal syntax: terms joined by `+`/`-`, each a
    /// product (whitespace or `*`) of coefficient atoms (`2`, `1.5i`, `i`,
    /// `q`, `q^-3`, `(1+2i)`) and generator atoms (`X1`, `X2^-1`), with the
    /// factors multiplied left to right before normal ordering.
    pub fn parse(&self, src: &str) -> Result<SkewPoly> {
        let tokens = tokenize(src)?;
        let mut result = SkewPoly::zero();
        let mut idx = 0;
        let mut sign = Complex64::new(1.0, 0.0);
        // Leading sign.
        while idx < tokens.len() {
            match &tokens[idx] {
                Token::Plus => idx += 1,
                Token::Minus => {
                    sign = -sign;
                    idx += 1;
                }
                _ => break,
            }
        }
        if idx == tokens.len() {
            return Err(Error::Parse(format!("empty polynomial literal '{src}'")));
        }
        loop {
            // One term: sequence of atoms until +/-/end.
            let mut term = self.scalar(sign);
            let mut saw_atom = false;
            while idx < tokens.len() {
                match &tokens[idx] {
                    Token::Star => idx += 1,
                    Token::Atom(a) => {
                        term = self.mul(&term, &self.parse_atom(a)?);
                        saw_atom = true;
                        idx += 1;
                    }
                    Token::Plus | Token::Minus => break,
                }
            }
            if !saw_atom {
                return Err(Error::Parse(format!("empty term in polynomial literal '{src}'")));
            }
            result = result.add(&term);
            if idx == tokens.len() {
                break;
            }
            sign = Complex64::new(1.0, 0.0);
            match tokens[idx] {
                Token::Plus => {}
                Token::Minus => sign = -sign,
                _ => unreachable!(),
            }
            idx += 1;
        }
        Ok(result)
    }

    fn parse_atom(&self, atom: &str) -> Result<SkewPoly> {
        if let Some(rest) = atom.strip_prefix('X') {
            let (var, exp) = match rest.split_once('^') {
                Some((v, e)) => (v, e.parse::<i64>().map_err(|_| bad_atom(atom))?),
                None => (rest, 1),
            };
            let i: usize = var.parse().map_err(|_| bad_atom(atom))?;
            if i == 0 || i > self.n_vars() {
                return Err(Error::Parse(format!(
                    "generator X{i} out of range 1..={}",
                    self.n_vars()
                )));
            }
            return Ok(self.gen_pow(i - 1, exp));
        }
        if atom == "q" {
            return Ok(self.scalar(self.params.q()));
        }
        if let Some(rest) = atom.strip_prefix("q^") {
            let k: i64 = rest.parse().map_err(|_| bad_atom(atom))?;
            return Ok(self.scalar(self.params.q_pow(k)));
        }
        if atom == "i" {
            return Ok(self.scalar(Complex64::new(0.0, 1.0)));
        }
        if let Some(num) = atom.strip_suffix('i') {
            if let Ok(v) = num.parse::<f64>() {
                return Ok(self.scalar(Complex64::new(0.0, v)));
            }
        }
        if atom.starts_with('(') && atom.ends_with(')') {
            return Ok(self.scalar(parse_complex_pair(&atom[1..atom.len() - 1])?));
        }
        if let Ok(v) = atom.parse::<f64>() {
            return Ok(self.scalar(Complex64::new(v, 0.0)));
        }
        Err(bad_atom(atom))
    }
}

fn bad_atom(atom: &str) -> Error {
    Error::Parse(format!("unrecognized factor '{atom}' in polynomial literal"))
}

/// Format a complex coefficient in the literal syntax.
pub fn format_complex(c: Complex64) -> String {
    let scale = c.norm().max(1.0);
    if c.im.abs() <= 1e-12 * scale {
        format!("{}", c.re)
    } else if c.re.abs() <= 1e-12 * scale {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("({}-{}i)", c.re, -c.im)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

/// Parse "a+bi" / "a-bi" / "a" / "bi" (no internal whitespace).
fn parse_complex_pair(s: &str) -> Result<Complex64> {
    let err = || Error::Parse(format!("bad complex literal '({s})'"));
    // Find the split sign that is not a leading sign or exponent sign.
    let bytes = s.as_bytes();
    for pos in (1..s.len()).rev() {
        let b = bytes[pos];
        if (b == b'+' || b == b'-') && bytes[pos - 1] != b'e' && bytes[pos - 1] != b'E' {
            let re: f64 = s[..pos].parse().map_err(|_| err())?;
            let im_str = &s[pos..];
            let im_body = im_str.strip_suffix('i').ok_or_else(err)?;
            let im: f64 = if im_body == "+" || im_body == "-" {
                format!("{im_body}1").parse().map_err(|_| err())?
            } else {
                im_body.parse().map_err(|_| err())?
            };
            return Ok(Complex64::new(re, im));
        }
    }
    if let Some(body) = s.strip_suffix('i') {
        return Ok(Complex64::new(0.0, body.parse().map_err(|_| err())?));
    }
    Ok(Complex64::new(s.parse().map_err(|_| err())?, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Atom(String),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' {
            tokens.push(Token::Plus);
            i += 1;
        } else if c == '-' {
            tokens.push(Token::Minus);
            i += 1;
        } else if c == '*' {
            tokens.push(Token::Star);
            i += 1;
        } else if c == '(' {
            let start = i;
            while i < chars.len() && chars[i] != ')' {
                i += 1;
            }
            if i == chars.len() {
                return Err(Error::Parse(format!("unbalanced '(' in '{src}'")));
            }
            i += 1;
            tokens.push(Token::Atom(chars[start..i].iter().collect()));
        } else if c.is_alphanumeric() || c == '.' {
            let start = i;
            while i < chars.len() {
                let d = chars[i];
                if d.is_alphanumeric() || d == '.' || d == '^' {
                    i += 1;
                } else if d == '-' && i > start && chars[i - 1] == '^' {
                    // exponent sign, e.g. q^-1
                    i += 1;
                } else {
                    break;
                }
            }
            tokens.push(Token::Atom(chars[start..i].iter().collect()));
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in '{src}'")));
        }
    }
    Ok(tokens)
}

/// Commutation exponents of the three generators of one triangle algebra:
/// `X_s X_{s+1} = q^2 X_{s+1} X_s` cyclically.
const SIGMA_T: [[i64; 3]; 3] = [[0, 1, -1], [-1, 0, 1], [1, -1, 0]];

/// A polynomial in the tensor product of `m` triangle algebras, in normal
/// form.  The exponent key is flat: entries `3f`, `3f+1`, `3f+2` are the
/// slot exponents of face `f`.  Generators of distinct faces commute.
#[derive(Debug, Clone, PartialEq)]
pub struct TrianglePoly {
    pub m: usize,
    pub terms: BTreeMap<Vec<i64>, Complex64>,
}

impl TrianglePoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TrianglePoly) -> TrianglePoly {
        assert_eq!(self.m, other.m);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut p = TrianglePoly { m: self.m, terms };
        p.prune();
        p
    }

    pub fn sub(&self, other: &TrianglePoly) -> TrianglePoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> TrianglePoly {
        let mut p = TrianglePoly {
            m: self.m,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        };
        p.prune();
        p
    }

    fn prune(&mut self) {
        let scale = self
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        self.terms.retain(|_, c| c.norm() > COEFF_EPS * scale);
    }

    pub fn distance(&self, other: &TrianglePoly) -> f64 {
        self.sub(other)
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// The tensor product of `m` triangle algebras at fixed parameters.
#[derive(Debug, Clone)]
pub struct TriangleAlgebra {
    params: QParams,
    m: usize,
}

impl TriangleAlgebra {
    pub fn new(params: QParams, m: usize) -> Self {
        TriangleAlgebra { params, m }
    }

    pub fn params(&self) -> &QParams {
        &self.params
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn scalar(&self, c: Complex64) -> TrianglePoly {
        let mut terms = BTreeMap::new();
        if c.norm() > 0.0 {
            terms.insert(vec![0i64; 3 * self.m], c);
        }
        TrianglePoly { m: self.m, terms }
    }

    pub fn one(&self) -> TrianglePoly {
        self.scalar(Complex64::new(1.0, 0.0))
    }

    /// Generator power `X_{face,slot}^k` (single monomial for any `k`).
    pub fn gen_pow(&self, face: usize, slot: usize, k: i64) -> TrianglePoly {
        assert!(face < self.m && slot < 3);
        let mut e = vec![0i64; 3 * self.m];
        e[3 * face + slot] = k;
        let mut terms = BTreeMap::new();
        terms.insert(e, Complex64::new(1.0, 0.0));
        TrianglePoly { m: self.m, terms }
    }

    pub fn gen(&self, face: usize, slot: usize) -> TrianglePoly {
        self.gen_pow(face, slot, 1)
    }

    fn reorder_exponent(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut total = 0i64;
        for f in 0..self.m {
            for k in 0..3 {
                let ak = a[3 * f + k];
                if ak == 0 {
                    continue;
                }
                for j in 0..k {
                    let bj = b[3 * f + j];
                    if bj != 0 {
                        total += 2 * ak * bj * SIGMA_T[k][j];
                    }
                }
            }
        }
        total
    }

    pub fn mul(&self, a: &TrianglePoly, b: &TrianglePoly) -> TrianglePoly {
        assert_eq!(a.m, self.m);
        assert_eq!(b.m, self.m);
        let mut terms: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let phase = self.params.q_pow(self.reorder_exponent(ea, eb));
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert(Complex64::new(0.0, 0.0)) += ca * cb * phase;
            }
        }
        let mut p = TrianglePoly { m: self.m, terms };
        p.prune();
        p
    }

    pub fn inv_monomial(&self, p: &TrianglePoly) -> Result<TrianglePoly> {
        if p.terms.len() != 1 {
            return Err(Error::Params("only single monomials are invertible here".into()));
        }
        let (e, c) = p.terms.iter().next().map(|(e, &c)| (e.clone(), c)).unwrap();
        if c.norm() == 0.0 {
            return Err(Error::Params("cannot invert the zero monomial".into()));
        }
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        let phase = self.params.q_pow(-self.reorder_exponent(&neg, &e));
        let mut terms = BTreeMap::new();
        terms.insert(neg, phase / c);
        Ok(TrianglePoly { m: self.m, terms })
    }
}

/// The two sides of an interior edge in the order used by the embedding:
/// for a self-folded edge the first side is the one whose successor slot is
/// the other side (the corner order); other interior edges keep scan order.
pub fn embedding_side_order(t: &Triangulation, i: usize) -> Vec<(usize, usize)> {
    let occ = t.sides(i);
    if occ.len() == 2 && occ[0].0 == occ[1].0 {
        let (f, sa) = occ[0];
        let (_, sb) = occ[1];
        if sb == (sa + 1) % 3 {
            vec![(f, sa), (f, sb)]
        } else {
            vec![(f, sb), (f, sa)]
        }
    } else {
        occ.to_vec()
    }
}

/// Image of the generator `X_i` under the embedding into the tensor product
/// of triangle algebras: `X_{j,s}` for a boundary edge; `X_{j,s} X_{k,s'}`
/// for an edge between distinct faces (the factors commute); `q^{-1}
/// X_{j,s1} X_{j,s2}` in corner order for a self-folded edge.
pub fn embed_generator(t: &Triangulation, ta: &TriangleAlgebra, i: usize) -> TrianglePoly {
    let order = embedding_side_order(t, i);
    let mut p = if t.is_self_folded(i) {
        ta.scalar(ta.params().q_pow(-1))
    } else {
        ta.one()
    };
    for (f, s) in order {
        p = ta.mul(&p, &ta.gen(f, s));
    }
    p
}

/// Image of a generator power `X_i^k` (monomial inverse for negative `k`).
pub fn embed_generator_pow(
    t: &Triangulation,
    ta: &TriangleAlgebra,
    i: usize,
    k: i64,
) -> Result<TrianglePoly> {
    let g = embed_generator(t, ta, i);
    let base = if k < 0 { ta.inv_monomial(&g)? } else { g };
    let mut p = ta.one();
    for _ in 0..k.unsigned_abs() {
        p = ta.mul(&p, &base);
    }
    Ok(p)
}

/// Embed a full polynomial: each monomial maps to the ordered product of
/// generator images by ascending edge index.
pub fn embed(t: &Triangulation, params: &QParams, p: &SkewPoly) -> Result<TrianglePoly> {
    let ta = TriangleAlgebra::new(params.clone(), t.m());
    let mut result = ta.scalar(Complex64::new(0.0, 0.0));
    for (e, c) in &p.terms {
        if e.len() != t.n_edges() {
            return Err(Error::Params(format!(
                "polynomial has {} variables but the triangulation has {} edges",
                e.len(),
                t.n_edges()
            )));
        }
        let mut term = ta.scalar(*c);
        for (i, &k) in e.iter().enumerate() {
            if k != 0 {
                term = ta.mul(&term, &embed_generator_pow(t, &ta, i, k)?);
            }
        }
        result = result.add(&term);
    }
    Ok(result)
}
