//! Sparse multivariate polynomials over the rationals.
//!
//! Text grammar: terms `c * v1^e1 * ... * vk^ek` joined by `+` or `-`, where
//! the coefficient `c` is an integer or `p/q`, the `*` between factors is
//! optional, and identifiers are ASCII letters, digits and `_` (starting
//! with a letter).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exponents are bounded by this value.
pub const MAX_EXPONENT: u32 = 1 << 31;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(vars: &[impl AsRef<str>]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[impl AsRef<str>], c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[impl AsRef<str>]) -> Self {
        Self::constant(vars, BigRational::one())
    }

    /// The variable with the given name.
    pub fn var(vars: &[impl AsRef<str>], name: &str) -> Result<Self> {
        let mut p = Self::zero(vars);
        let i = p.index_of(name)?;
        let mut e = vec![0; p.vars.len()];
        e[i] = 1;
        p.terms.insert(e, BigRational::one());
        Ok(p)
    }

    pub fn monomial(vars: &[impl AsRef<str>], coeff: BigRational, exponents: Vec<u32>) -> Result<Self> {
        let mut p = Self::zero(vars);
        if exponents.len() != p.vars.len() {
            return Err(Error::Poly(format!(
                "exponent tuple of length {} for {} variables",
                exponents.len(),
                p.vars.len()
            )));
        }
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Poly(format!("unknown variable {name}")))
    }

    fn check_arity(&self, other: &MultiPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::Poly(format!(
                "variable mismatch: [{}] vs [{}]",
                self.vars.join(", "),
                other.vars.join(", ")
            )));
        }
        Ok(())
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea
                    .iter()
                    .zip(eb)
                    .map(|(a, b)| {
                        let s = u64::from(*a) + u64::from(*b);
                        if s >= u64::from(MAX_EXPONENT) {
                            Err(Error::Poly("exponent overflow".into()))
                        } else {
                            Ok(s as u32)
                        }
                    })
                    .collect::<Result<Vec<u32>>>()?;
                *acc.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(MultiPoly {
            vars: self.vars.clone(),
            terms: acc,
        })
    }

    pub fn pow(&self, n: u32) -> Result<MultiPoly> {
        let mut out = MultiPoly::one(&self.vars);
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Single term with its coefficient, if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&Vec<u32>, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.vars.len() {
            return Err(Error::Poly(format!(
                "point of length {} for {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Replaces variable `i` by `images[i]` (any polynomials over a common
    /// target variable list).
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.vars.len() {
            return Err(Error::Poly(format!(
                "{} images for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        let target: Vec<String> = match images.first() {
            Some(p) => p.vars.clone(),
            None => Vec::new(),
        };
        for p in images {
            if p.vars != target {
                return Err(Error::Poly("images over different variable lists".into()));
            }
        }
        let mut out = MultiPoly::zero(&target);
        // cache powers per variable
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(&p.vars), p.clone()]).collect();
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("nonempty").mul(&images[i])?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k as usize])?;
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Substitution by a monomial map: every variable must be mapped, and
    /// every image must be a single term.
    pub fn substitute(&self, map: &MonomialMap) -> Result<MultiPoly> {
        let images = self
            .vars
            .iter()
            .map(|v| {
                map.images
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::Poly(format!("unmapped variable {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(p) = images.iter().find(|p| p.as_monomial().is_none()) {
            return Err(Error::Poly(format!("image {p} is not a monomial")));
        }
        self.compose(&images)
    }

    /// Same polynomial over a larger or reordered variable list.
    pub fn with_vars(&self, vars: &[impl AsRef<str>]) -> Result<MultiPoly> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut positions = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let i = vars
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::Poly(format!("variable {v} missing from the new list")))?;
            positions.push(i);
        }
        let mut out = MultiPoly::zero(&vars);
        for (e, c) in &self.terms {
            let mut f = vec![0; vars.len()];
            for (k, &i) in e.iter().zip(&positions) {
                f[i] = *k;
            }
            out.terms.insert(f, c.clone());
        }
        Ok(out)
    }

    /// Parses `text` over a fixed variable list.
    pub fn parse(text: &str, vars: &[impl AsRef<str>]) -> Result<MultiPoly> {
        let parsed = parse_terms(text)?;
        let mut p = MultiPoly::zero(vars);
        for (c, factors) in parsed {
            let mut e = vec![0u32; p.vars.len()];
            for (name, k) in factors {
                let i = p.index_of(&name)?;
                e[i] = e[i]
                    .checked_add(k)
                    .filter(|&x| x < MAX_EXPONENT)
                    .ok_or_else(|| Error::Poly("exponent overflow".into()))?;
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Parses `text`, taking variables in order of first appearance.
    pub fn parse_inferred(text: &str) -> Result<MultiPoly> {
        let parsed = parse_terms(text)?;
        let mut vars: Vec<String> = Vec::new();
        for (_, factors) in &parsed {
            for (name, _) in factors {
                if !vars.contains(name) {
                    vars.push(name.clone());
                }
            }
        }
        Self::parse(text, &vars)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (n, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

type ParsedTerm = (BigRational, Vec<(String, u32)>);

fn parse_terms(text: &str) -> Result<Vec<ParsedTerm>> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut terms = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| chars[start..*pos].iter().collect::<String>().parse().expect("digits"))
    };
    let err = |pos: usize, what: &str| Error::Parse(format!("{what} at position {pos} in {text:?}"));
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err(err(pos, "empty polynomial"));
    }
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        let mut sign = BigRational::one();
        if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        } else if !first {
            return Err(err(pos, "expected + or -"));
        }
        first = false;
        let mut coeff = sign;
        let mut factors: Vec<(String, u32)> = Vec::new();
        let mut expect_factor = true;
        loop {
            skip_ws(&mut pos);
            if pos == chars.len() || chars[pos] == '+' || chars[pos] == '-' {
                if expect_factor {
                    return Err(err(pos, "expected a factor"));
                }
                break;
            }
            if chars[pos] == '*' {
                if expect_factor {
                    return Err(err(pos, "unexpected *"));
                }
                pos += 1;
                expect_factor = true;
                continue;
            }
            if chars[pos].is_ascii_digit() {
                let num = read_int(&mut pos).expect("digit present");
                skip_ws(&mut pos);
                let value = if pos < chars.len() && chars[pos] == '/' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let den = read_int(&mut pos).ok_or_else(|| err(pos, "expected denominator"))?;
                    if den.is_zero() {
                        return Err(err(pos, "zero denominator"));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                coeff *= value;
            } else if chars[pos].is_ascii_alphabetic() {
                let start = pos;
                while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_') {
                    pos += 1;
                }
                let name: String = chars[start..pos].iter().collect();
                skip_ws(&mut pos);
                let mut k = 1u32;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let e = read_int(&mut pos).ok_or_else(|| err(pos, "expected exponent"))?;
                    k = u32::try_from(&e)
                        .ok()
                        .filter(|&x| x < MAX_EXPONENT)
                        .ok_or_else(|| err(pos, "exponent out of range"))?;
                }
                factors.push((name, k));
            } else {
                return Err(err(pos, &format!("unexpected character {:?}", chars[pos])));
            }
            expect_factor = false;
        }
        terms.push((coeff, factors));
        skip_ws(&mut pos);
        if pos == chars.len() {
            break;
        }
    }
    Ok(terms)
}

/// A substitution sending variables to monomials (or, via
/// [`MultiPoly::compose`], to arbitrary polynomials).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MonomialMap {
    pub images: BTreeMap<String, MultiPoly>,
}

impl MonomialMap {
    /// Builds a map from `name -> text` pairs parsed over `target_vars`.
    pub fn parse(pairs: &[(&str, &str)], target_vars: &[impl AsRef<str>]) -> Result<Self> {
        let mut images = BTreeMap::new();
        for (name, text) in pairs {
            images.insert(name.to_string(), MultiPoly::parse(text, target_vars)?);
        }
        Ok(MonomialMap { images })
    }

    pub fn identity(vars: &[impl AsRef<str>]) -> Self {
        let images = vars
            .iter()
            .map(|v| (v.as_ref().to_string(), MultiPoly::var(vars, v.as_ref()).expect("listed")))
            .collect();
        MonomialMap { images }
    }
}

/// Common weight of all terms, or `None` if the polynomial is zero or not
/// homogeneous.
pub fn grading_weight(p: &MultiPoly, weights: &[Vec<i64>]) -> Result<Option<Vec<i64>>> {
    if weights.len() != p.vars.len() {
        return Err(Error::Poly(format!(
            "{} weight vectors for {} variables",
            weights.len(),
            p.vars.len()
        )));
    }
    let dim = weights.first().map_or(0, Vec::len);
    if weights.iter().any(|w| w.len() != dim) {
        return Err(Error::Poly("weight vectors of different lengths".into()));
    }
    let mut common: Option<Vec<i64>> = None;
    for e in p.terms.keys() {
        let mut w = vec![0i64; dim];
        for (k, wv) in e.iter().zip(weights) {
            for (acc, x) in w.iter_mut().zip(wv) {
                *acc += i64::from(*k) * x;
            }
        }
        match &common {
            None => common = Some(w),
            Some(c) if *c != w => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(common)
}

/// Exact equality `lhs == rhs`, optionally after substituting both sides.
pub fn verify_identity(lhs: &MultiPoly, rhs: &MultiPoly, map: Option<&MonomialMap>) -> Result<bool> {
    let diff = lhs.sub(rhs)?;
    let diff = match map {
        Some(m) => diff.substitute(m)?,
        None => diff,
    };
    Ok(diff.is_zero())
}

/// Produces a chart point (values for every variable of the checked
/// polynomial), or `None` when the draw hits a forbidden locus.
pub type ChartSampler<'a> = &'a dyn Fn(&mut ChaCha8Rng) -> Option<Vec<BigRational>>;

/// Outcome of checking a polynomial on sampled chart points.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub samples: usize,
    pub vanished: usize,
    /// The first point where the polynomial did not vanish.
    pub witness: Option<Vec<BigRational>>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.vanished == self.samples && self.witness.is_none()
    }
}

pub const DEFAULT_SAMPLES: usize = 25;
const MAX_RESAMPLES: usize = 1000;

/// Evaluates `p` at `samples` seeded chart points.
pub fn verify_on_chart(p: &MultiPoly, sampler: ChartSampler<'_>, samples: usize, seed: u64) -> Result<SampleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SampleReport {
        samples,
        vanished: 0,
        witness: None,
    };
    let mut retries = 0;
    let mut done = 0;
    while done < samples {
        let Some(point) = sampler(&mut rng) else {
            retries += 1;
            if retries > MAX_RESAMPLES {
                return Err(Error::Poly("chart sampling kept hitting a division by zero".into()));
            }
            continue;
        };
        done += 1;
        if p.evaluate(&point)?.is_zero() {
            report.vanished += 1;
        } else if report.witness.is_none() {
            report.witness = Some(point);
        }
    }
    Ok(report)
}

/// A small random rational `a/b` with `|a| <= 20`, `1 <= b <= 9`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let a: i64 = rng.gen_range(-20..=20);
    let b: i64 = rng.gen_range(1..=9);
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Variables, torus weights, relations and named substitutions of a Cox
/// ring presentation.
#[derive(Clone, Debug)]
pub struct CoxSpec {
    pub variables: Vec<String>,
    /// One integer weight vector per variable.
    pub weights: Vec<Vec<i64>>,
    /// Relations, over `variables`.
    pub relations: Vec<MultiPoly>,
    /// Named monomial maps such as `X1 = lambda2*eta12`.
    pub substitutions: MonomialMap,
    /// Torus coordinates as Laurent monomials: exponent vectors over
    /// `variables`.
    pub torus_coordinates: Vec<Vec<i64>>,
}

impl CoxSpec {
    /// Validates sizes and homogeneity of every relation in every weight
    /// coordinate.
    pub fn new(
        variables: Vec<String>,
        weights: Vec<Vec<i64>>,
        relations: Vec<MultiPoly>,
        substitutions: MonomialMap,
        torus_coordinates: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if weights.len() != variables.len() {
            return Err(Error::Poly("one weight vector per variable required".into()));
        }
        let spec = CoxSpec {
            variables,
            weights,
            relations,
            substitutions,
            torus_coordinates,
        };
        for r in &spec.relations {
            if r.vars() != spec.variables.as_slice() {
                return Err(Error::Poly(format!("relation {r} is over other variables")));
            }
            if !r.is_zero() && grading_weight(r, &spec.weights)?.is_none() {
                return Err(Error::Poly(format!("relation {r} is not homogeneous")));
            }
        }
        if spec.torus_coordinates.iter().any(|c| c.len() != spec.variables.len()) {
            return Err(Error::Poly("torus coordinate of wrong length".into()));
        }
        Ok(spec)
    }

    pub fn torus_rank(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, vars: &[&str]) -> MultiPoly {
        MultiPoly::parse(text, vars).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let v = ["x", "y"];
        assert_eq!(p("x + y", &v).add(&p("x - y", &v)).unwrap(), p("2x", &v));
        assert_eq!(p("x - y", &v).mul(&p("x + y", &v)).unwrap(), p("x^2 - y^2", &v));
        assert!(p("x^3 y + 1/2", &v).mul(&MultiPoly::zero(&v)).unwrap().is_zero());
        assert!(p("x", &v).add(&p("x", &["x"])).is_err());
    }

    #[test]
    fn parse_and_display() {
        let v = ["a", "b"];
        let q = p("3/6 * a^2 b - 2 + b", &v);
        assert_eq!(q.to_string(), "1/2*a^2*b + b - 2");
        assert_eq!(MultiPoly::parse(&q.to_string(), &v).unwrap(), q);
        assert!(MultiPoly::parse("a +", &v).is_err());
        assert!(MultiPoly::parse("c", &v).is_err());
        assert!(MultiPoly::parse("1/0", &v).is_err());
        assert_eq!(MultiPoly::parse_inferred("y*x + x").unwrap().vars(), ["y", "x"]);
    }

    #[test]
    fn substitution_examples() {
        let v = ["x"];
        let neg = MonomialMap::parse(&[("x", "-x")], &v).unwrap();
        assert_eq!(p("x^2", &v).substitute(&neg).unwrap(), p("x^2", &v));
        let q = p("x^3 - 2x", &v);
        assert_eq!(q.substitute(&MonomialMap::identity(&v)).unwrap(), q);
        let not_mono = MonomialMap::parse(&[("x", "x + 1")], &v).unwrap();
        assert!(q.substitute(&not_mono).is_err());
        assert!(q.substitute(&MonomialMap::default()).is_err());
    }

    #[test]
    fn grading_examples() {
        let v = ["x", "y"];
        let w = vec![vec![1], vec![1]];
        assert_eq!(grading_weight(&p("x + y^2", &v), &w).unwrap(), None);
        assert_eq!(grading_weight(&p("x y + y^2", &v), &w).unwrap(), Some(vec![2]));
    }

    #[test]
    fn sampling_reports_witness() {
        let v = ["x"];
        let sampler = |rng: &mut ChaCha8Rng| Some(vec![random_rational(rng)]);
        let zero = p("x - x", &v);
        assert!(verify_on_chart(&zero, &sampler, 10, 7).unwrap().passed());
        let r = verify_on_chart(&p("x^2 + 1", &v), &sampler, 10, 7).unwrap();
        assert!(!r.passed());
        assert!(r.witness.is_some());
    }
}
