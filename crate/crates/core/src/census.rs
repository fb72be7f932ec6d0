//! Counting formulas for matrices with a prescribed characteristic
//! polynomial, and the brute-force census that checks them.
//!
//! For monic `g = f_1^{n_1} ⋯ f_r^{n_r}` of degree n over GF(q), with
//! `d_i = deg f_i` and `F(u, v) = Π_{i=1}^{v} (1 - u^{-i})`, the number of
//! n×n matrices with characteristic polynomial g is
//!
//! ```text
//! q^(n²-n) · F(q, n) / Π_i F(q^(d_i), n_i)
//! ```
//!
//! Evaluation uses the equivalent integer form
//! `|GL_n(q)| · q^(Σ d_i n_i² - n) / Π_i |GL_{n_i}(q^(d_i))|`; debug builds
//! also evaluate the rational form and compare. For irreducible g the count
//! is `Π_{i=1}^{n-1} (q^n - q^i)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::centralizer::{centralizer_unit_count, DEFAULT_UNIT_BUDGET};
use crate::error::{Error, Result};
use crate::factor::{factorize, is_irreducible, monic_polynomials};
use crate::field::{Elem, Field};
use crate::matrix::{berkowitz, Matrix};
use crate::poly::Poly;

/// Default cap on the number of matrices a census may enumerate.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 26;

/// Default cap on the number of monic polynomials a partition check visits.
pub const DEFAULT_POLYNOMIAL_BUDGET: u64 = 1 << 20;

/// Exact rational in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<ExactRational> {
        if denominator.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(ExactRational(BigRational::new(numerator, denominator)))
    }

    pub fn from_integer(n: BigInt) -> ExactRational {
        ExactRational(BigRational::from_integer(n))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_biguint(&self) -> Option<BigUint> {
        self.is_integer()
            .then(|| self.numerator().to_biguint())
            .flatten()
    }

    pub fn mul(&self, other: &ExactRational) -> ExactRational {
        ExactRational(&self.0 * &other.0)
    }

    pub fn div(&self, other: &ExactRational) -> Result<ExactRational> {
        if other.0.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        Ok(ExactRational(&self.0 / &other.0))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

/// `F(u, v) = Π_{i=1}^{v} (1 - u^{-i})`, with `F(u, 0) = 1`.
pub fn f_product(u: &BigUint, v: usize) -> Result<ExactRational> {
    if u < &BigUint::from(2u32) {
        return Err(Error::InvalidArgument(format!(
            "F(u, v) needs u >= 2, got {u}"
        )));
    }
    let u = BigInt::from(u.clone());
    let mut acc = BigRational::one();
    for i in 1..=v {
        let ui = u.pow(i as u32);
        acc *= BigRational::new(&ui - 1, ui);
    }
    Ok(ExactRational(acc))
}

fn check_q_n(q: &BigUint, n: usize) -> Result<()> {
    if q < &BigUint::from(2u32) {
        return Err(Error::InvalidArgument(format!(
            "q must be at least 2, got {q}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// `|GL_n(q)| = Π_{k=0}^{n-1} (q^n - q^k)`.
pub fn gl_order(q: &BigUint, n: usize) -> Result<BigUint> {
    check_q_n(q, n)?;
    let qn = q.pow(n as u32);
    let order = (0..n).fold(BigUint::one(), |acc, k| acc * (&qn - q.pow(k as u32)));
    debug_assert_eq!(
        f_product(q, n)?.mul(&ExactRational::from_integer(q.pow((n * n) as u32).into())),
        ExactRational::from_integer(order.clone().into()),
        "q^(n²)·F(q, n) must equal |GL_n(q)|"
    );
    Ok(order)
}

/// Matrices with a given irreducible characteristic polynomial of degree n:
/// `Π_{i=1}^{n-1} (q^n - q^i)`.
pub fn count_irreducible_case(q: &BigUint, n: usize) -> Result<BigUint> {
    check_q_n(q, n)?;
    let qn = q.pow(n as u32);
    let count = (1..n).fold(BigUint::one(), |acc, i| acc * (&qn - q.pow(i as u32)));
    debug_assert_eq!(gl_order(q, n)?, &count * (&qn - 1u32));
    Ok(count)
}

/// General count from the factor profile `(d_i, n_i)` in integer form.
pub fn count_from_profile(q: &BigUint, profile: &[(usize, usize)]) -> Result<BigUint> {
    let n: usize = profile.iter().map(|&(d, m)| d * m).sum();
    check_q_n(q, n)?;
    let exponent: usize = profile.iter().map(|&(d, m)| d * m * m).sum::<usize>() - n;
    let numerator = gl_order(q, n)? * q.pow(exponent as u32);
    let mut denominator = BigUint::one();
    for &(d, m) in profile {
        denominator *= gl_order(&q.pow(d as u32), m)?;
    }
    let (quot, rem) = numerator.div_rem(&denominator);
    if !rem.is_zero() {
        return Err(Error::NonIntegral(format!("{numerator}/{denominator}")));
    }
    Ok(quot)
}

/// Rational form of the general count, exactly as the product of
/// `q^(n²-n)`, `F(q, n)` and the reciprocals of `F(q^(d_i), n_i)`.
pub fn count_from_profile_rational(
    q: &BigUint,
    profile: &[(usize, usize)],
) -> Result<ExactRational> {
    let n: usize = profile.iter().map(|&(d, m)| d * m).sum();
    check_q_n(q, n)?;
    let mut acc =
        ExactRational::from_integer(q.pow((n * n - n) as u32).into()).mul(&f_product(q, n)?);
    for &(d, m) in profile {
        acc = acc.div(&f_product(&q.pow(d as u32), m)?)?;
    }
    Ok(acc)
}

fn require_monic(g: &Poly) -> Result<usize> {
    match g.degree() {
        None | Some(0) => Err(Error::ConstantPolynomial(g.to_string())),
        Some(_) if !g.is_monic() => Err(Error::NotMonic(g.to_string())),
        Some(n) => Ok(n),
    }
}

/// Number of n×n matrices over the field of `g` whose characteristic
/// polynomial is the monic polynomial `g`.
pub fn count_with_charpoly(g: &Poly) -> Result<BigUint> {
    let n = require_monic(g)?;
    let q = g.field().order_big();
    let factorization = factorize(g, 0)?;
    let profile = factorization.degree_profile();
    let count = count_from_profile(&q, &profile)?;
    debug_assert_eq!(
        count_from_profile_rational(&q, &profile)?.to_biguint(),
        Some(count.clone())
    );
    if factorization.is_irreducible() {
        debug_assert_eq!(count, count_irreducible_case(&q, n)?);
    }
    Ok(count)
}

/// Exact matrix counts keyed by characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub q: u64,
    pub n: usize,
    pub entries: BTreeMap<Poly, BigUint>,
    pub total: BigUint,
}

impl CensusReport {
    pub fn count(&self, g: &Poly) -> BigUint {
        self.entries.get(g).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub budget: u64,
    /// Worker threads; `None` uses the machine's parallelism.
    pub threads: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            budget: DEFAULT_ENUMERATION_BUDGET,
            threads: None,
        }
    }
}

fn matrix_space_size(field: &Field, n: usize) -> BigUint {
    field.order_big().pow((n * n) as u32)
}

fn enumeration_size(field: &Field, n: usize, budget: u64) -> Result<u64> {
    let size = matrix_space_size(field, n);
    match size.to_u64() {
        Some(s) if s <= budget => Ok(s),
        _ => Err(Error::BudgetExceeded {
            what: "matrices",
            required: size.to_string(),
            budget,
        }),
    }
}

/// Histogram of characteristic polynomials over matrix indices `[start, end)`.
/// Keys pack the non-leading coefficients as base-q digits.
fn census_chunk(field: &Field, n: usize, start: u64, end: u64) -> HashMap<u64, u64> {
    let q = field.order() as u64;
    let mut entries: Vec<Elem> = Vec::with_capacity(n * n);
    let mut rest = start;
    for _ in 0..n * n {
        entries.push(field.index_element(rest % q).expect("digit below q"));
        rest /= q;
    }
    let mut histogram = HashMap::new();
    for _ in start..end {
        let coeffs = berkowitz(field, n, &entries);
        // coeffs[0] is the leading 1; coeffs[n - i] is the coefficient of x^i.
        let key = (0..n)
            .rev()
            .fold(0u64, |acc, i| acc * q + coeffs[n - i].index() as u64);
        *histogram.entry(key).or_insert(0) += 1;
        for e in entries.iter_mut() {
            let next = e.index() as u64 + 1;
            if next < q {
                *e = field.index_element(next).expect("in range");
                break;
            }
            *e = Elem::ZERO;
        }
    }
    histogram
}

fn key_to_poly(field: &Field, n: usize, mut key: u64) -> Poly {
    let q = field.order() as u64;
    let mut coeffs = Vec::with_capacity(n + 1);
    for _ in 0..n {
        coeffs.push(field.index_element(key % q).expect("digit below q"));
        key /= q;
    }
    coeffs.push(Elem::ONE);
    Poly::from_elems(field, coeffs)
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
        {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        },
        None => job(),
    }
}

/// Enumerates every n×n matrix and tallies characteristic polynomials.
/// The index range is split into disjoint chunks whose histograms are
/// merged, so the report does not depend on the thread count.
pub fn census_bruteforce(field: &Field, n: usize, options: &CensusOptions) -> Result<CensusReport> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let size = enumeration_size(field, n, options.budget)?;
    let threads = options
        .threads
        .unwrap_or_else(rayon::current_num_threads)
        .max(1) as u64;
    let chunk = (size / (threads * 8)).max(1 << 12);
    let ranges: Vec<(u64, u64)> = (0..size.div_ceil(chunk))
        .map(|i| (i * chunk, ((i + 1) * chunk).min(size)))
        .collect();
    let merged = with_pool(options.threads, || {
        ranges
            .into_par_iter()
            .map(|(s, e)| census_chunk(field, n, s, e))
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            })
    });
    let entries: BTreeMap<Poly, BigUint> = merged
        .into_iter()
        .map(|(k, v)| (key_to_poly(field, n, k), BigUint::from(v)))
        .collect();
    let total = entries.values().sum();
    Ok(CensusReport {
        q: field.order() as u64,
        n,
        entries,
        total,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    pub polynomials: u64,
    pub sum: BigUint,
    pub expected: BigUint,
    pub equal: bool,
}

fn polynomial_count(field: &Field, n: usize, budget: u64) -> Result<u64> {
    let count = field.order_big().pow(n as u32);
    match count.to_u64() {
        Some(c) if c <= budget => Ok(c),
        _ => Err(Error::BudgetExceeded {
            what: "polynomials",
            required: count.to_string(),
            budget,
        }),
    }
}

/// Sums a count formula over every monic degree-n polynomial and compares
/// the sum with `q^(n²)`.
pub fn verify_partition_with(
    field: &Field,
    n: usize,
    budget: u64,
    formula: &(dyn Fn(&Poly) -> Result<BigUint> + Sync),
) -> Result<PartitionReport> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let polynomials = polynomial_count(field, n, budget)?;
    let counts = monic_polynomials(field, n)
        .par_bridge()
        .map(|g| formula(&g))
        .collect::<Result<Vec<BigUint>>>()?;
    let sum: BigUint = counts.into_iter().sum();
    let expected = matrix_space_size(field, n);
    Ok(PartitionReport {
        polynomials,
        equal: sum == expected,
        sum,
        expected,
    })
}

pub fn verify_partition(field: &Field, n: usize, budget: u64) -> Result<PartitionReport> {
    verify_partition_with(field, n, budget, &count_with_charpoly)
}

#[derive(Clone, Debug)]
pub struct OrbitStabilizerReport {
    pub matrix: Matrix,
    pub charpoly: Poly,
    pub gl_order: BigUint,
    pub stabilizer_order: BigUint,
    pub orbit_size: BigUint,
    pub formula_count: BigUint,
    pub consistent: bool,
}

/// Orbit of M under conjugation by GL_n: the stabilizer is the unit group
/// of the centralizer, and the orbit size is the index of the stabilizer.
pub fn orbit_stabilizer_report(m: &Matrix) -> Result<OrbitStabilizerReport> {
    let charpoly = m.charpoly();
    if !is_irreducible(&charpoly)? {
        return Err(Error::ReducibleCharpoly(charpoly.to_string()));
    }
    let q = m.field().order_big();
    let n = m.n();
    let gl = gl_order(&q, n)?;
    let stabilizer = centralizer_unit_count(m, DEFAULT_UNIT_BUDGET)?;
    let (orbit, rem) = gl.div_rem(&stabilizer);
    if !rem.is_zero() {
        return Err(Error::NonIntegral(format!("{gl}/{stabilizer}")));
    }
    let formula = count_irreducible_case(&q, n)?;
    let consistent = orbit == formula && stabilizer == q.pow(n as u32) - 1u32;
    Ok(OrbitStabilizerReport {
        matrix: m.clone(),
        charpoly,
        gl_order: gl,
        stabilizer_order: stabilizer,
        orbit_size: orbit,
        formula_count: formula,
        consistent,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Partition identity from the formulas alone.
    Formula,
    /// Census against the irreducible-case product.
    Bruteforce,
    /// Census against every formula, plus the partition identity.
    Both,
}

impl VerifyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            VerifyMode::Formula => "formula",
            VerifyMode::Bruteforce => "bruteforce",
            VerifyMode::Both => "both",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub check: &'static str,
    pub polynomial: Option<Poly>,
    pub observed: BigUint,
    pub expected: BigUint,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub mode: VerifyMode,
    pub pass: bool,
    pub mismatches: Vec<Mismatch>,
    pub total: BigUint,
    pub expected_total: BigUint,
    pub census: Option<CensusReport>,
    pub partition: Option<PartitionReport>,
}

pub fn verify(
    field: &Field,
    n: usize,
    mode: VerifyMode,
    options: &CensusOptions,
) -> Result<VerifyReport> {
    verify_with(field, n, mode, options, &count_with_charpoly)
}

/// [`verify`] with the general-count formula supplied by the caller.
pub fn verify_with(
    field: &Field,
    n: usize,
    mode: VerifyMode,
    options: &CensusOptions,
    formula: &(dyn Fn(&Poly) -> Result<BigUint> + Sync),
) -> Result<VerifyReport> {
    let expected_total = matrix_space_size(field, n);
    let q = field.order_big();
    let mut mismatches = Vec::new();

    let partition = match mode {
        VerifyMode::Formula | VerifyMode::Both => {
            let report = with_pool(options.threads, || {
                verify_partition_with(field, n, options.budget, formula)
            })?;
            if !report.equal {
                mismatches.push(Mismatch {
                    check: "partition",
                    polynomial: None,
                    observed: report.sum.clone(),
                    expected: report.expected.clone(),
                });
            }
            Some(report)
        }
        VerifyMode::Bruteforce => None,
    };

    let census = match mode {
        VerifyMode::Bruteforce | VerifyMode::Both => {
            let report = census_bruteforce(field, n, options)?;
            if report.total != expected_total {
                mismatches.push(Mismatch {
                    check: "total",
                    polynomial: None,
                    observed: report.total.clone(),
                    expected: expected_total.clone(),
                });
            }
            let theorem = count_irreducible_case(&q, n)?;
            for g in monic_polynomials(field, n) {
                let observed = report.count(&g);
                if is_irreducible(&g)? && observed != theorem {
                    mismatches.push(Mismatch {
                        check: "irreducible",
                        polynomial: Some(g.clone()),
                        observed: observed.clone(),
                        expected: theorem.clone(),
                    });
                }
                if mode == VerifyMode::Both {
                    let expected = formula(&g)?;
                    if observed != expected {
                        mismatches.push(Mismatch {
                            check: "general",
                            polynomial: Some(g),
                            observed,
                            expected,
                        });
                    }
                }
            }
            Some(report)
        }
        VerifyMode::Formula => None,
    };

    let total = match (&census, &partition) {
        (Some(c), _) => c.total.clone(),
        (None, Some(p)) => p.sum.clone(),
        (None, None) => BigUint::zero(),
    };
    Ok(VerifyReport {
        mode,
        pass: mismatches.is_empty(),
        mismatches,
        total,
        expected_total,
        census,
        partition,
    })
}
