//! Exact arithmetic in cyclotomic fields `Q(zeta_m) = Q[x] / Phi_m(x)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest supported conductor.
pub const MAX_CONDUCTOR: u32 = 420;

/// The `m`-th cyclotomic polynomial, coefficients from low to high degree.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    cache.lock().expect("cache lock").insert(m, num.clone());
    num
}

// exact division by a monic integer polynomial
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

#[derive(Debug, PartialEq, Eq)]
struct Field {
    m: u32,
    modulus: Vec<BigInt>,
}

fn field(m: u32) -> Result<Arc<Field>> {
    if m == 0 || m > MAX_CONDUCTOR {
        return Err(Error::Invalid(format!("conductor {m} outside 1..={MAX_CONDUCTOR}")));
    }
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let fields = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = fields.lock().expect("field lock");
    Ok(guard
        .entry(m)
        .or_insert_with(|| {
            Arc::new(Field {
                m,
                modulus: cyclotomic_polynomial(m),
            })
        })
        .clone())
}

/// An element of `Q(zeta_m)` in the power basis `1, zeta, ..., zeta^(phi(m)-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    field: Arc<Field>,
    coeffs: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero(m: u32) -> Result<Self> {
        let f = field(m)?;
        let n = f.modulus.len() - 1;
        Ok(Cyclo {
            field: f,
            coeffs: vec![BigRational::zero(); n],
        })
    }

    pub fn from_rational(m: u32, c: BigRational) -> Result<Self> {
        let mut z = Self::zero(m)?;
        z.coeffs[0] = c;
        Ok(z)
    }

    pub fn from_int(m: u32, c: i64) -> Result<Self> {
        Self::from_rational(m, BigRational::from_integer(BigInt::from(c)))
    }

    /// `zeta_m^k`.
    pub fn zeta_pow(m: u32, k: i64) -> Result<Self> {
        let f = field(m)?;
        let e = k.rem_euclid(i64::from(m)) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        Ok(Cyclo {
            coeffs: reduce(&f, raw),
            field: f,
        })
    }

    /// Builds `sum_i c_i zeta^i` from arbitrary-length coefficients.
    pub fn from_coefficients(m: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        let f = field(m)?;
        Ok(Cyclo {
            coeffs: reduce(&f, coeffs),
            field: f,
        })
    }

    pub fn conductor(&self) -> u32 {
        self.field.m
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.first().is_some_and(One::is_one) && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Cyclo) -> Result<()> {
        if self.field.m != other.field.m {
            return Err(Error::Invalid(format!(
                "conductors {} and {} differ",
                self.field.m, other.field.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cyclo) -> Result<Cyclo> {
        self.check(other)?;
        Ok(Cyclo {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclo) -> Result<Cyclo> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclo) -> Result<Cyclo> {
        self.check(other)?;
        let n = self.coeffs.len();
        let mut raw = vec![BigRational::zero(); 2 * n.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Ok(Cyclo {
            field: self.field.clone(),
            coeffs: reduce(&self.field, raw),
        })
    }

    pub fn pow(&self, k: u64) -> Result<Cyclo> {
        let mut out = Cyclo::from_int(self.field.m, 1)?;
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[x]`.
    pub fn inverse(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::Invalid("zero has no inverse".into()));
        }
        let modulus: Vec<BigRational> = self
            .field
            .modulus
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        // invariant: s * self = r (mod Phi)
        let (mut r0, mut r1) = (modulus, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::new(), vec![BigRational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            if r1.is_empty() {
                return Err(Error::Invalid("element is not invertible".into()));
            }
        }
        let c = r1[0].clone();
        let inv: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        Ok(Cyclo {
            field: self.field.clone(),
            coeffs: reduce(&self.field, inv),
        })
    }

    /// The exponent `k` with `self = omega^k`, `omega` a primitive root of
    /// unity of order [`roots_of_unity_order`], if `self` is a root of unity.
    pub fn root_of_unity_log(&self) -> Option<u64> {
        let m = self.field.m;
        let order = roots_of_unity_order(m);
        let omega = primitive_root(m).ok()?;
        let mut power = Cyclo::from_int(m, 1).ok()?;
        for k in 0..order {
            if power == *self {
                return Some(k);
            }
            power = power.mul(&omega).ok()?;
        }
        None
    }
}

/// Number of roots of unity in `Q(zeta_m)`: `lcm(m, 2)`.
pub fn roots_of_unity_order(m: u32) -> u64 {
    u64::from(m).lcm(&2)
}

/// A primitive root of unity of order `lcm(m, 2)`: `zeta_m` or `-zeta_m`.
pub fn primitive_root(m: u32) -> Result<Cyclo> {
    let z = Cyclo::zeta_pow(m, 1)?;
    Ok(if m % 2 == 0 { z } else { z.neg() })
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim((0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect())
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") / &lead;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn reduce(f: &Field, mut raw: Vec<BigRational>) -> Vec<BigRational> {
    let n = f.modulus.len() - 1;
    for i in (n..raw.len()).rev() {
        let c = std::mem::replace(&mut raw[i], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        // x^i = x^(i-n) * (x^n) and x^n = -sum_{j<n} phi_j x^j
        for j in 0..n {
            let p = &f.modulus[j];
            if !p.is_zero() {
                raw[i - n + j] -= &c * BigRational::from_integer(p.clone());
            }
        }
    }
    raw.resize(n, BigRational::zero());
    raw
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A square matrix over `Q(zeta_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    m: u32,
    n: usize,
    entries: Vec<Cyclo>,
}

impl CycloMatrix {
    pub fn new(m: u32, n: usize, entries: Vec<Cyclo>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        if entries.iter().any(|e| e.conductor() != m) {
            return Err(Error::Invalid("entry with a different conductor".into()));
        }
        Ok(CycloMatrix { m, n, entries })
    }

    /// Matrix with rational integer entries.
    pub fn from_ints(m: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Dimension("matrix is not square".into()));
            }
            for &x in r {
                entries.push(Cyclo::from_int(m, x)?);
            }
        }
        Ok(CycloMatrix { m, n, entries })
    }

    pub fn identity(m: u32, n: usize) -> Result<Self> {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self::from_ints(m, &rows)
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &CycloMatrix) -> Result<CycloMatrix> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::Dimension("matrices of different size or conductor".into()));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Cyclo::zero(self.m)?;
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b)?)?;
                    }
                }
                entries.push(acc);
            }
        }
        Ok(CycloMatrix { m: self.m, n, entries })
    }

    pub fn scale(&self, c: &Cyclo) -> Result<CycloMatrix> {
        let entries = self.entries.iter().map(|e| e.mul(c)).collect::<Result<Vec<_>>>()?;
        Ok(CycloMatrix {
            m: self.m,
            n: self.n,
            entries,
        })
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn determinant(&self) -> Result<Cyclo> {
        let n = self.n;
        let mut a: Vec<Vec<Cyclo>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut det = Cyclo::from_int(self.m, 1)?;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Cyclo::zero(self.m);
            };
            if p != col {
                a.swap(p, col);
                det = det.neg();
            }
            let pivot = a[col][col].clone();
            det = det.mul(&pivot)?;
            let inv = pivot.inverse()?;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].mul(&inv)?;
                for c in col..n {
                    let v = a[r][c].sub(&factor.mul(&a[col][c])?)?;
                    a[r][c] = v;
                }
            }
        }
        Ok(det)
    }

    /// The scalar `c` with `self = c * other`, if any.
    pub fn scalar_ratio(&self, other: &CycloMatrix) -> Result<Option<Cyclo>> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::Dimension("matrices of different size or conductor".into()));
        }
        let Some(idx) = other.entries.iter().position(|e| !e.is_zero()) else {
            return Ok(None);
        };
        let c = self.entries[idx].mul(&other.entries[idx].inverse()?)?;
        Ok((other.scale(&c)? == *self).then_some(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |p: Vec<BigInt>| p.iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_and_inverses() {
        let z = Cyclo::zeta_pow(12, 1).unwrap();
        assert!(z.pow(12).unwrap().is_one());
        assert!(!z.pow(6).unwrap().is_one());
        assert_eq!(z.pow(6).unwrap(), Cyclo::from_int(12, -1).unwrap());
        let a = z.add(&Cyclo::from_int(12, 3).unwrap()).unwrap();
        assert!(a.mul(&a.inverse().unwrap()).unwrap().is_one());
        assert_eq!(Cyclo::zeta_pow(12, 5).unwrap().root_of_unity_log(), Some(5));
        assert_eq!(Cyclo::from_int(3, -1).unwrap().root_of_unity_log(), Some(3));
        assert_eq!(Cyclo::from_int(12, 2).unwrap().root_of_unity_log(), None);
    }

    #[test]
    fn matrix_ratio() {
        let a = CycloMatrix::from_ints(12, &[vec![0, 1], vec![1, 0]]).unwrap();
        let b = CycloMatrix::from_ints(12, &[vec![1, 0], vec![0, -1]]).unwrap();
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        let c = ab.scalar_ratio(&ba).unwrap().unwrap();
        assert_eq!(c, Cyclo::from_int(12, -1).unwrap());
        assert_eq!(a.determinant().unwrap(), Cyclo::from_int(12, -1).unwrap());
    }
}
