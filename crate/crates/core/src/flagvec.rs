//! Flag f/h-vectors of graded posets, the ab-index, rewriting into the
//! cd-index, d-vectors, and the rank-5/6 coefficient extractors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::poset::GradedPoset;
use crate::simplicial::{binom, HVector};
use crate::simplicial::GammaVector;
use crate::{int, Int};

#[derive(Debug, Error)]
pub enum FlagError {
    #[error("polynomial is not expressible in c and d")]
    NotCdExpressible,
    #[error("expected a polynomial of degree {expected}, found degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("leading coefficient of the pure-c word must be 1")]
    LeadingCoeffNotOne,
    #[error("expected {expected} d-vector entries for degree {degree}, found {found}")]
    DimensionMismatch { degree: usize, expected: usize, found: usize },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Flag vector of a rank-`n+1` poset: one integer per subset of `{1,…,n}`,
/// subsets encoded as bitmasks with rank `i` at bit `i-1`. The same shape
/// stores the f-flavor and its h-flavor transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVector {
    n: usize,
    values: Vec<Int>,
}

impl FlagVector {
    pub fn new(n: usize, values: Vec<Int>) -> Self {
        assert!(n <= 20, "flag vectors hold 2^n entries");
        assert_eq!(values.len(), 1 << n);
        FlagVector { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, mask: u32) -> &Int {
        &self.values[mask as usize]
    }

    pub fn subsets(&self) -> impl Iterator<Item = u32> {
        0..1u32 << self.n
    }

    /// Human form of a subset mask, e.g. `{1,3}`; `{}` for the empty set.
    pub fn subset_label(mask: u32) -> String {
        let ranks: Vec<String> =
            (0..32).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", ranks.join(","))
    }
}

/// Flag f-vector: `f_S` counts the chains of interior elements whose rank
/// set is exactly `S`, via dynamic programming over rank layers.
pub fn flag_f(p: &GradedPoset) -> FlagVector {
    let n = p.n();
    assert!(n <= 20, "flag vectors hold 2^n entries");
    let ids: Vec<u64> = p.elements().map(|e| e.0).collect();
    let ranks: Vec<usize> =
        ids.iter().map(|&id| p.rank_of(crate::poset::ElementId(id)).expect("own id")).collect();
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
    for (i, &r) in ranks.iter().enumerate() {
        layers[r].push(i);
    }
    let above = p.strict_closure();

    let mut values = vec![Int::zero(); 1 << n];
    for mask in 0..1u32 << n {
        let sel: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        if sel.is_empty() {
            values[mask as usize] = Int::one();
            continue;
        }
        let mut counts: Vec<(usize, Int)> =
            layers[sel[0]].iter().map(|&i| (i, Int::one())).collect();
        for &r in &sel[1..] {
            let mut next: Vec<(usize, Int)> = Vec::with_capacity(layers[r].len());
            for &j in &layers[r] {
                let mut total = Int::zero();
                for (i, c) in &counts {
                    if above.get(*i, j) {
                        total += c;
                    }
                }
                next.push((j, total));
            }
            counts = next;
        }
        values[mask as usize] = counts.into_iter().map(|(_, c)| c).sum();
    }
    FlagVector { n, values }
}

/// Flag h-vector: `h_S = Σ_{T⊆S} (−1)^{|S∖T|} f_T`.
pub fn flag_h(f: &FlagVector) -> FlagVector {
    let mut values = vec![Int::zero(); f.values.len()];
    for s in f.subsets() {
        let mut acc = Int::zero();
        let mut t = s;
        loop {
            let sign = if (s ^ t).count_ones() % 2 == 0 { 1 } else { -1 };
            acc += f.value(t) * int(sign);
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        values[s as usize] = acc;
    }
    FlagVector { n: f.n, values }
}

/// Inverse of [`flag_h`]: `f_S = Σ_{T⊆S} h_T`.
pub fn flag_f_from_h(h: &FlagVector) -> FlagVector {
    let mut values = vec![Int::zero(); h.values.len()];
    for s in h.subsets() {
        let mut acc = Int::zero();
        let mut t = s;
        loop {
            acc += h.value(t);
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        values[s as usize] = acc;
    }
    FlagVector { n: h.n, values }
}

/// Letters of words in the noncommuting variables `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AbLetter {
    A,
    B,
}

pub type AbWord = Vec<AbLetter>;

/// Homogeneous polynomial in noncommuting `a`, `b`: finitely many words of
/// a fixed length `n` with integer coefficients; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbPolynomial {
    n: usize,
    terms: BTreeMap<AbWord, Int>,
}

impl AbPolynomial {
    pub fn zero(n: usize) -> Self {
        AbPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[AbLetter]) -> Int {
        self.terms.get(w).cloned().unwrap_or_else(Int::zero)
    }

    pub fn add_term(&mut self, w: AbWord, k: Int) {
        assert_eq!(w.len(), self.n, "ab-words have uniform length");
        let entry = self.terms.entry(w.clone()).or_insert_with(Int::zero);
        *entry += k;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AbWord, &Int)> {
        self.terms.iter()
    }
}

impl fmt::Display for AbPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(w, k)| {
                let word: String =
                    w.iter().map(|l| if *l == AbLetter::A { 'a' } else { 'b' }).collect();
                if word.is_empty() {
                    k.to_string()
                } else if k.is_one() {
                    word
                } else {
                    format!("{k}*{word}")
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// The ab-index `Ψ = Σ_S h_S u_S` where `u_i = a` for `i ∉ S` and `b` for
/// `i ∈ S`.
pub fn ab_index(h: &FlagVector) -> AbPolynomial {
    let mut psi = AbPolynomial::zero(h.n());
    for s in h.subsets() {
        let k = h.value(s).clone();
        if k.is_zero() {
            continue;
        }
        let word: AbWord = (0..h.n())
            .map(|i| if s >> i & 1 == 1 { AbLetter::B } else { AbLetter::A })
            .collect();
        psi.add_term(word, k);
    }
    psi
}

/// Letters of cd-words; `c` has degree 1 and `d` degree 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CdLetter {
    C,
    D,
}

pub type CdWord = Vec<CdLetter>;

pub fn word_degree(w: &[CdLetter]) -> usize {
    w.iter().map(|l| if *l == CdLetter::C { 1 } else { 2 }).sum()
}

/// Homogeneous polynomial in noncommuting `c`, `d` of a fixed weighted
/// degree; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdPolynomial {
    degree: usize,
    terms: BTreeMap<CdWord, Int>,
}

impl CdPolynomial {
    pub fn zero(degree: usize) -> Self {
        CdPolynomial { degree, terms: BTreeMap::new() }
    }

    /// The monomial `c^k`.
    pub fn c_power(k: usize) -> Self {
        let mut p = CdPolynomial::zero(k);
        p.add_term(vec![CdLetter::C; k], Int::one());
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[CdLetter]) -> Int {
        self.terms.get(w).cloned().unwrap_or_else(Int::zero)
    }

    pub fn add_term(&mut self, w: CdWord, k: Int) {
        assert_eq!(word_degree(&w), self.degree, "cd-polynomials are homogeneous");
        let entry = self.terms.entry(w.clone()).or_insert_with(Int::zero);
        *entry += k;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CdWord, &Int)> {
        self.terms.iter()
    }
}

impl std::ops::Add<&CdPolynomial> for CdPolynomial {
    type Output = CdPolynomial;
    fn add(mut self, rhs: &CdPolynomial) -> CdPolynomial {
        assert_eq!(self.degree, rhs.degree, "cd-polynomials are homogeneous");
        for (w, k) in &rhs.terms {
            self.add_term(w.clone(), k.clone());
        }
        self
    }
}

impl std::ops::Mul<&CdPolynomial> for &CdPolynomial {
    type Output = CdPolynomial;
    fn mul(self, rhs: &CdPolynomial) -> CdPolynomial {
        let mut out = CdPolynomial::zero(self.degree + rhs.degree);
        for (w1, k1) in &self.terms {
            for (w2, k2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, k1 * k2);
            }
        }
        out
    }
}

/// Parses a cd-word such as `c^2dc` into letters.
fn parse_word(s: &str) -> Result<CdWord, FlagError> {
    let bytes = s.as_bytes();
    let mut word = CdWord::new();
    let mut i = 0;
    while i < bytes.len() {
        let letter = match bytes[i] {
            b'c' => CdLetter::C,
            b'd' => CdLetter::D,
            other => {
                return Err(FlagError::Parse(format!("unexpected character '{}'", other as char)))
            }
        };
        i += 1;
        let mut exp = 1usize;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            exp = s[start..i]
                .parse()
                .map_err(|_| FlagError::Parse("exponent must be a number".into()))?;
            if exp == 0 {
                return Err(FlagError::Parse("exponent must be positive".into()));
            }
        }
        word.extend(std::iter::repeat_n(letter, exp));
    }
    Ok(word)
}

fn render_word(w: &[CdLetter]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        out.push(if w[i] == CdLetter::C { 'c' } else { 'd' });
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

impl fmt::Display for CdPolynomial {
    /// Canonical text form: terms in degree-lex word order joined by
    /// ` + `; the pure-c word with coefficient 1 prints bare (`c^4`),
    /// every other term prints as `k*word` (`2*cdc`), run-length encoded.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(w, k)| {
                if w.is_empty() {
                    k.to_string()
                } else if k.is_one() && w.iter().all(|l| *l == CdLetter::C) {
                    render_word(w)
                } else {
                    format!("{}*{}", k, render_word(w))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl FromStr for CdPolynomial {
    type Err = FlagError;

    fn from_str(s: &str) -> Result<Self, FlagError> {
        let mut terms: Vec<(CdWord, Int)> = Vec::new();
        for raw in s.split('+') {
            let part = raw.trim();
            if part.is_empty() {
                return Err(FlagError::Parse("empty term".into()));
            }
            let (coeff, word) = match part.split_once('*') {
                Some((k, w)) => {
                    let k = k
                        .trim()
                        .parse::<Int>()
                        .map_err(|_| FlagError::Parse(format!("bad coefficient '{k}'")))?;
                    (k, parse_word(w.trim())?)
                }
                None => {
                    if part.chars().next().is_some_and(|ch| ch.is_ascii_digit() || ch == '-') {
                        let k = part
                            .parse::<Int>()
                            .map_err(|_| FlagError::Parse(format!("bad coefficient '{part}'")))?;
                        (k, CdWord::new())
                    } else {
                        (Int::one(), parse_word(part)?)
                    }
                }
            };
            terms.push((word, coeff));
        }
        let degree = terms
            .iter()
            .filter(|(_, k)| !k.is_zero())
            .map(|(w, _)| word_degree(w))
            .max()
            .unwrap_or(0);
        let mut poly = CdPolynomial::zero(degree);
        for (w, k) in terms {
            if k.is_zero() {
                continue;
            }
            if word_degree(&w) != degree {
                return Err(FlagError::Parse("terms of mixed degree".into()));
            }
            poly.add_term(w, k);
        }
        Ok(poly)
    }
}

fn expand_word(w: &[CdLetter]) -> Vec<AbWord> {
    let mut words: Vec<AbWord> = vec![AbWord::new()];
    for letter in w {
        let mut next = Vec::with_capacity(words.len() * 2);
        for word in &words {
            match letter {
                CdLetter::C => {
                    for l in [AbLetter::A, AbLetter::B] {
                        let mut u = word.clone();
                        u.push(l);
                        next.push(u);
                    }
                }
                CdLetter::D => {
                    for pair in [[AbLetter::A, AbLetter::B], [AbLetter::B, AbLetter::A]] {
                        let mut u = word.clone();
                        u.extend_from_slice(&pair);
                        next.push(u);
                    }
                }
            }
        }
        words = next;
    }
    words
}

/// Substitutes `c → a+b`, `d → ab+ba` and expands.
pub fn cd_expand(phi: &CdPolynomial) -> AbPolynomial {
    let mut psi = AbPolynomial::zero(phi.degree());
    for (w, k) in phi.terms() {
        for u in expand_word(w) {
            psi.add_term(u, k.clone());
        }
    }
    psi
}

/// Greedy left-to-right decode of an ab-word into a cd-word: `ab → d`,
/// a lone `a → c`, anything else is not decodable.
fn decode_word(w: &[AbLetter]) -> Option<CdWord> {
    let mut out = CdWord::new();
    let mut i = 0;
    while i < w.len() {
        if w[i] != AbLetter::A {
            return None;
        }
        if i + 1 < w.len() && w[i + 1] == AbLetter::B {
            out.push(CdLetter::D);
            i += 2;
        } else {
            out.push(CdLetter::C);
            i += 1;
        }
    }
    Some(out)
}

/// Rewrites an ab-polynomial in `c = a+b`, `d = ab+ba`. At each step the
/// lex-least surviving ab-word (with `a < b`) is decoded greedily; the
/// decoded cd-word expands back to that ab-word plus strictly lex-greater
/// ones, so subtracting makes the least word strictly increase and the
/// loop terminate.
pub fn cd_rewrite(psi: &AbPolynomial) -> Result<CdPolynomial, FlagError> {
    let mut work = psi.clone();
    let mut out = CdPolynomial::zero(psi.n());
    while let Some((w, k)) = work.terms.iter().next().map(|(w, k)| (w.clone(), k.clone())) {
        let cdw = decode_word(&w).ok_or(FlagError::NotCdExpressible)?;
        for u in expand_word(&cdw) {
            work.add_term(u, -&k);
        }
        out.add_term(cdw, k);
    }
    Ok(out)
}

/// The cd-index of a graded poset: flag f → flag h → ab-index → cd.
pub fn cd_index(p: &GradedPoset) -> Result<CdPolynomial, FlagError> {
    cd_rewrite(&ab_index(&flag_h(&flag_f(p))))
}

/// d-vector `(δ_0, …, δ_{⌊n/2⌋})`: δ_i totals the coefficients of words
/// with exactly `i` letters `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DVector(pub Vec<Int>);

impl fmt::Display for DVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub fn d_vector(phi: &CdPolynomial) -> DVector {
    let mut d = vec![Int::zero(); phi.degree() / 2 + 1];
    for (w, k) in phi.terms() {
        let i = w.iter().filter(|l| **l == CdLetter::D).count();
        d[i] += k;
    }
    DVector(d)
}

/// h-vector of the order complex from the d-vector of a degree-`n`
/// cd-index: `Σ h_i x^i = Σ 2^i δ_i x^i (1+x)^{n−2i}`.
pub fn h_from_d(d: &DVector, n: usize) -> Result<HVector, FlagError> {
    let expected = n / 2 + 1;
    if d.0.len() != expected {
        return Err(FlagError::DimensionMismatch { degree: n, expected, found: d.0.len() });
    }
    let mut h = vec![Int::zero(); n + 1];
    for (i, delta) in d.0.iter().enumerate() {
        let scaled = delta * int(2).pow(i as u32);
        let m = n - 2 * i;
        for k in 0..=m {
            h[i + k] += &scaled * binom(m, k);
        }
    }
    Ok(HVector(h))
}

/// γ-vector of the order complex straight from the d-vector:
/// `γ_i = 2^i δ_i`.
pub fn gamma_from_d(d: &DVector) -> GammaVector {
    GammaVector(d.0.iter().enumerate().map(|(i, delta)| delta * int(2).pow(i as u32)).collect())
}

/// Named coefficients of a degree-4 cd-index
/// `c⁴ + α₁dc² + α₂cdc + α₃c²d + α₁₃d²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank5Coeffs {
    pub alpha1: Int,
    pub alpha2: Int,
    pub alpha3: Int,
    pub alpha13: Int,
}

impl Rank5Coeffs {
    pub fn new(alpha1: u64, alpha2: u64, alpha3: u64, alpha13: u64) -> Self {
        Rank5Coeffs {
            alpha1: Int::from(alpha1),
            alpha2: Int::from(alpha2),
            alpha3: Int::from(alpha3),
            alpha13: Int::from(alpha13),
        }
    }

    /// The cd-polynomial these coefficients name.
    pub fn to_polynomial(&self) -> CdPolynomial {
        use CdLetter::{C, D};
        let mut p = CdPolynomial::c_power(4);
        p.add_term(vec![D, C, C], self.alpha1.clone());
        p.add_term(vec![C, D, C], self.alpha2.clone());
        p.add_term(vec![C, C, D], self.alpha3.clone());
        p.add_term(vec![D, D], self.alpha13.clone());
        p
    }

    pub fn as_u64(&self) -> Option<(u64, u64, u64, u64)> {
        Some((
            self.alpha1.to_u64()?,
            self.alpha2.to_u64()?,
            self.alpha3.to_u64()?,
            self.alpha13.to_u64()?,
        ))
    }
}

impl fmt::Display for Rank5Coeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.alpha1, self.alpha2, self.alpha3, self.alpha13)
    }
}

/// Named coefficients of a degree-5 cd-index
/// `c⁵ + α₁dc³ + α₂cdc² + α₃c²dc + α₄c³d + α₁₃d²c + α₁₄dcd + α₂₄cd²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank6Coeffs {
    pub alpha1: Int,
    pub alpha2: Int,
    pub alpha3: Int,
    pub alpha4: Int,
    pub alpha13: Int,
    pub alpha14: Int,
    pub alpha24: Int,
}

fn check_leading(phi: &CdPolynomial, expected: usize) -> Result<(), FlagError> {
    if phi.degree() != expected {
        return Err(FlagError::WrongDegree { expected, found: phi.degree() });
    }
    if !phi.coeff(&vec![CdLetter::C; expected]).is_one() {
        return Err(FlagError::LeadingCoeffNotOne);
    }
    Ok(())
}

pub fn rank5_coeffs(phi: &CdPolynomial) -> Result<Rank5Coeffs, FlagError> {
    use CdLetter::{C, D};
    check_leading(phi, 4)?;
    Ok(Rank5Coeffs {
        alpha1: phi.coeff(&[D, C, C]),
        alpha2: phi.coeff(&[C, D, C]),
        alpha3: phi.coeff(&[C, C, D]),
        alpha13: phi.coeff(&[D, D]),
    })
}

pub fn rank6_coeffs(phi: &CdPolynomial) -> Result<Rank6Coeffs, FlagError> {
    use CdLetter::{C, D};
    check_leading(phi, 5)?;
    Ok(Rank6Coeffs {
        alpha1: phi.coeff(&[D, C, C, C]),
        alpha2: phi.coeff(&[C, D, C, C]),
        alpha3: phi.coeff(&[C, C, D, C]),
        alpha4: phi.coeff(&[C, C, C, D]),
        alpha13: phi.coeff(&[D, D, C]),
        alpha14: phi.coeff(&[D, C, D]),
        alpha24: phi.coeff(&[C, D, D]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{ElementEntry, GradedPoset, PosetData};
    use crate::realize::{build_boolean2, build_cycle_poset};
    use crate::simplicial::order_complex;

    fn chain_poset(rank: u64) -> GradedPoset {
        let elements = (0..=rank).map(|i| ElementEntry { id: i, rank: i }).collect();
        let covers = (0..rank).map(|i| [i, i + 1]).collect();
        GradedPoset::validate(&PosetData { elements, covers, bottom: 0, top: rank }).unwrap()
    }

    fn poly(s: &str) -> CdPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn square_flag_vectors() {
        let f = flag_f(&build_cycle_poset(4).unwrap());
        assert_eq!(f.value(0b00), &int(1));
        assert_eq!(f.value(0b01), &int(4));
        assert_eq!(f.value(0b10), &int(4));
        assert_eq!(f.value(0b11), &int(8));
        let h = flag_h(&f);
        assert_eq!(h.value(0b00), &int(1));
        assert_eq!(h.value(0b01), &int(3));
        assert_eq!(h.value(0b10), &int(3));
        assert_eq!(h.value(0b11), &int(1));
        assert_eq!(flag_f_from_h(&h), f);
    }

    #[test]
    fn chain_flag_vectors_are_trivial() {
        let f = flag_f(&chain_poset(3));
        for s in f.subsets() {
            assert_eq!(f.value(s), &int(1));
        }
        let h = flag_h(&f);
        assert_eq!(h.value(0), &int(1));
        for s in h.subsets().skip(1) {
            assert_eq!(h.value(s), &int(0));
        }
    }

    #[test]
    fn ab_index_examples() {
        use AbLetter::{A, B};
        let psi = ab_index(&flag_h(&flag_f(&build_boolean2())));
        assert_eq!(psi.coeff(&[A]), int(1));
        assert_eq!(psi.coeff(&[B]), int(1));
        let psi = ab_index(&flag_h(&flag_f(&build_cycle_poset(4).unwrap())));
        assert_eq!(psi.coeff(&[A, A]), int(1));
        assert_eq!(psi.coeff(&[A, B]), int(3));
        assert_eq!(psi.coeff(&[B, A]), int(3));
        assert_eq!(psi.coeff(&[B, B]), int(1));
    }

    #[test]
    fn rewriting_the_square_gives_c2_plus_2d() {
        let psi = ab_index(&flag_h(&flag_f(&build_cycle_poset(4).unwrap())));
        assert_eq!(cd_rewrite(&psi).unwrap(), poly("c^2 + 2*d"));
    }

    #[test]
    fn cycle_cd_indices() {
        for k in 3..=8u64 {
            let phi = cd_index(&build_cycle_poset(k).unwrap()).unwrap();
            let expected = format!("c^2 + {}*d", k - 2);
            assert_eq!(phi, poly(&expected));
        }
    }

    #[test]
    fn chain_is_not_cd_expressible() {
        let err = cd_index(&chain_poset(3)).unwrap_err();
        assert!(matches!(err, FlagError::NotCdExpressible));
    }

    #[test]
    fn join_blocks_have_the_advertised_cd_indices() {
        let b2 = build_boolean2();
        assert_eq!(cd_index(&b2).unwrap(), poly("c"));
        let q3 = b2.join(&build_cycle_poset(3).unwrap()).join(&b2);
        assert_eq!(cd_index(&q3).unwrap(), poly("c^4 + 1*cdc"));
        let q4 = b2.join(&build_cycle_poset(4).unwrap()).join(&b2);
        assert_eq!(cd_index(&q4).unwrap(), poly("c^4 + 2*cdc"));
    }

    #[test]
    fn flag_count_identity_on_a_seed() {
        let b2 = build_boolean2();
        let q = b2.join(&build_cycle_poset(3).unwrap()).join(&b2);
        let f = flag_f(&q);
        // f_{2,3} = α13 + 2(α1+α2+α3) + 4 with (α1,α2,α3,α13) = (0,1,0,0).
        assert_eq!(f.value(0b0110), &int(6));
    }

    #[test]
    fn expansion_round_trip() {
        let phi = poly("c^4 + 2*dc^2 + 1*cdc + 3*d^2");
        assert_eq!(cd_rewrite(&cd_expand(&phi)).unwrap(), phi);
        assert_eq!(cd_expand(&poly("d")).coeff(&[AbLetter::A, AbLetter::B]), int(1));
        assert_eq!(cd_expand(&poly("d")).coeff(&[AbLetter::B, AbLetter::A]), int(1));
    }

    #[test]
    fn d_vector_counts_d_letters() {
        let phi = Rank5Coeffs::new(2, 1, 3, 5).to_polynomial();
        assert_eq!(d_vector(&phi), DVector(vec![int(1), int(6), int(5)]));
        assert_eq!(d_vector(&poly("c^4")), DVector(vec![int(1), int(0), int(0)]));
    }

    #[test]
    fn h_from_d_expansion() {
        let d = DVector(vec![int(1), int(0)]);
        assert_eq!(h_from_d(&d, 2).unwrap().0, vec![int(1), int(2), int(1)]);
        let d = DVector(vec![int(1), int(2), int(0)]);
        assert_eq!(h_from_d(&d, 4).unwrap().0, vec![int(1), int(8), int(14), int(8), int(1)]);
        assert!(h_from_d(&d, 6).is_err());
    }

    #[test]
    fn h_from_d_matches_the_order_complex() {
        for p in [
            build_cycle_poset(3).unwrap().join(&build_cycle_poset(3).unwrap()),
            build_boolean2().join(&build_cycle_poset(4).unwrap()).join(&build_boolean2()),
        ] {
            let phi = cd_index(&p).unwrap();
            let h = h_from_d(&d_vector(&phi), p.n()).unwrap();
            assert_eq!(h, order_complex(&p).h_vector());
        }
    }

    #[test]
    fn gamma_from_d_doubles() {
        let d = DVector(vec![int(1), int(3), int(2)]);
        assert_eq!(gamma_from_d(&d).0, vec![int(1), int(6), int(8)]);
    }

    #[test]
    fn coefficient_extraction() {
        let phi = poly("c^4 + 1*cdc");
        let t = rank5_coeffs(&phi).unwrap();
        assert_eq!(t, Rank5Coeffs::new(0, 1, 0, 0));
        assert!(matches!(rank5_coeffs(&poly("c^5")), Err(FlagError::WrongDegree { .. })));
        assert!(matches!(rank5_coeffs(&poly("2*c^4")), Err(FlagError::LeadingCoeffNotOne)));
        let six = rank6_coeffs(&poly("c^5")).unwrap();
        assert!(six.alpha1.is_zero() && six.alpha24.is_zero());
        let joined = rank6_coeffs(&poly("c^5 + 2*dc^3 + 3*cd^2")).unwrap();
        assert_eq!(joined.alpha1, int(2));
        assert_eq!(joined.alpha24, int(3));
    }

    #[test]
    fn rank5_coeffs_of_a_cycle_join() {
        let p = build_cycle_poset(3).unwrap().join(&build_cycle_poset(3).unwrap());
        let t = rank5_coeffs(&cd_index(&p).unwrap()).unwrap();
        assert_eq!(t, Rank5Coeffs::new(1, 0, 1, 1));
    }

    #[test]
    fn text_format_round_trips() {
        for s in ["c^4 + 1*cdc", "c^2 + 2*d", "0", "c", "1", "c^4 + -2*cdc + 5*d^2"] {
            let p = poly(s);
            assert_eq!(p.to_string(), s);
            assert_eq!(poly(&p.to_string()), p);
        }
        assert!("c^2 + d^2".parse::<CdPolynomial>().is_err());
        assert!("c^0".parse::<CdPolynomial>().is_err());
        assert!("e".parse::<CdPolynomial>().is_err());
    }
}
