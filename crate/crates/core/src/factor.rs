//! Irreducibility testing and factorization over GF(q).
//!
//! Factorization runs squarefree decomposition, then distinct-degree
//! factorization, then Cantor–Zassenhaus equal-degree splitting. The
//! equal-degree step is randomized by a seeded ChaCha stream; the output
//! is sorted canonically, so it does not depend on the seed.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{prime_divisors, Elem, Field};
use crate::poly::Poly;

/// `leading * Π factor^multiplicity`, factors monic, irreducible, pairwise
/// distinct and in canonical polynomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub leading: Elem,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn reconstruct(&self, field: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.leading), |acc, (f, m)| {
                &acc * &f.pow(*m as u64)
            })
    }

    /// True when the factored polynomial is itself irreducible.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// `(d_i, n_i)` pairs: degree and multiplicity of each factor.
    pub fn degree_profile(&self) -> Vec<(usize, usize)> {
        self.factors
            .iter()
            .map(|(f, m)| (f.degree().unwrap_or(0), *m))
            .collect()
    }
}

/// `x^(q^j) mod f` for j = 1..=count, computed by repeated q-th powers.
fn frobenius_orbit_of_x(f: &Poly, count: usize) -> Result<Vec<Poly>> {
    let field = f.field();
    let q = field.order_big();
    let mut h = Poly::x(field).rem(f)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        h = h.powmod(&q, f)?;
        out.push(h.clone());
    }
    Ok(out)
}

/// Rabin's test: monic `f` of degree n is irreducible iff `f | x^(q^n) - x`
/// and `gcd(f, x^(q^(n/l)) - x) = 1` for every prime `l | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let Some(n) = f.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    match n {
        0 => return Ok(false),
        1 => return Ok(true),
        _ => {}
    }
    let f = f.monic();
    let x = Poly::x(f.field());
    let powers = frobenius_orbit_of_x(&f, n)?;
    for l in prime_divisors(n as u64) {
        let h = &powers[n / l as usize - 1];
        if !f.gcd(&(h - &x))?.is_one() {
            return Ok(false);
        }
    }
    Ok((&powers[n - 1] - &x).rem(&f)?.is_zero())
}

/// Coefficientwise p-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| field.frobenius_inverse(c))
        .collect();
    Poly::from_elems(field, coeffs)
}

/// Squarefree decomposition of a monic polynomial into `(part, multiplicity)`.
/// Parts are squarefree and pairwise coprime within each recursion level.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let p = f.field().characteristic() as usize;
    let d = f.derivative();
    if d.is_zero() {
        return Ok(squarefree_decomposition(&pth_root(f))?
            .into_iter()
            .map(|(g, m)| (g, m * p))
            .collect());
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&d)?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let part = w.div_exact(&y)?;
        if !part.is_one() {
            out.push((part, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w)?;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&pth_root(&c))? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// Splits a squarefree monic polynomial into `(d, product of all degree-d factors)`.
pub fn distinct_degree_factorization(f: &Poly) -> Result<Vec<(usize, Poly)>> {
    let field = f.field();
    let q = field.order_big();
    let x = Poly::x(field);
    let mut rest = f.monic();
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&q, &rest)?;
        let g = rest.gcd(&(&h - &x))?;
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            h = h.rem(&rest)?;
            out.push((d, g));
        }
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((deg, rest));
    }
    Ok(out)
}

fn random_poly(field: &Field, below_degree: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = field.order();
    let coeffs = (0..below_degree)
        .map(|_| {
            field
                .index_element(rng.gen_range(0..q) as u64)
                .expect("in range")
        })
        .collect();
    Poly::from_elems(field, coeffs)
}

/// Cantor–Zassenhaus: splits a squarefree monic product of degree-d
/// irreducibles into its factors.
pub fn equal_degree_factorization(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == d {
        return Ok(vec![f.monic()]);
    }
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidArgument(format!(
            "degree {n} is not a multiple of {d}"
        )));
    }
    let field = f.field();
    let p = field.characteristic();
    let one = Poly::one(field);
    loop {
        let a = random_poly(field, n, rng);
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + a^4 + ... + a^(2^(kd-1))
            let steps = field.degree() as usize * d;
            let mut term = a.rem(f)?;
            let mut acc = term.clone();
            for _ in 1..steps {
                term = term.try_mul(&term)?.rem(f)?;
                acc = &acc + &term;
            }
            acc
        } else {
            let e = (field.order_big().pow(d as u32) - 1u32) / 2u32;
            &a.powmod(&e, f)? - &one
        };
        let g = f.gcd(&b)?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut left = equal_degree_factorization(&g, d, rng)?;
            left.extend(equal_degree_factorization(&f.div_exact(&g)?, d, rng)?);
            return Ok(left);
        }
    }
}

/// Complete factorization of a nonzero polynomial.
pub fn factorize(g: &Poly, seed: u64) -> Result<Factorization> {
    let leading = g.leading().ok_or(Error::ZeroPolynomial)?;
    let monic = g.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut merged: BTreeMap<Poly, usize> = BTreeMap::new();
    for (part, mult) in squarefree_decomposition(&monic)? {
        for (d, chunk) in distinct_degree_factorization(&part)? {
            for irreducible in equal_degree_factorization(&chunk, d, &mut rng)? {
                *merged.entry(irreducible).or_insert(0) += mult;
            }
        }
    }
    Ok(Factorization {
        leading,
        factors: merged.into_iter().collect(),
    })
}

fn moebius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducible polynomials of degree n over a field of
/// order q, by the necklace formula `(1/n) Σ_{d|n} μ(d) q^(n/d)`.
pub fn necklace_count(q: &BigUint, n: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let q = BigInt::from(q.clone());
    let mut sum = BigInt::from(0);
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mu = moebius(d as u64);
        if mu != 0 {
            sum += BigInt::from(mu) * q.pow((n / d) as u32);
        }
    }
    let count = sum / BigInt::from(n);
    debug_assert!(!count.is_negative());
    Ok(count.to_biguint().expect("nonnegative"))
}

pub fn count_monic_irreducibles(field: &Field, n: usize) -> Result<BigUint> {
    necklace_count(&field.order_big(), n)
}

/// Convenience for small fields where the count fits in a u64.
pub fn count_monic_irreducibles_u64(field: &Field, n: usize) -> Option<u64> {
    count_monic_irreducibles(field, n).ok()?.to_u64()
}

/// All monic polynomials of degree n in canonical order.
pub fn monic_polynomials(field: &Field, n: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.order() as u64;
    let total = (0..n).fold(BigUint::one(), |acc, _| acc * q);
    let total = total.to_u64().unwrap_or(u64::MAX);
    (0..total).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(n + 1);
        for _ in 0..n {
            coeffs.push(field.index_element(idx % q).expect("in range"));
            idx /= q;
        }
        coeffs.push(Elem::ONE);
        Poly::from_elems(field, coeffs)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::poly::parse_poly;

    fn gf(p: u64, k: u32) -> Field {
        make_field(p, k).unwrap()
    }

    fn poly(f: &Field, s: &str) -> Poly {
        parse_poly(s, f).unwrap()
    }

    #[test]
    fn irreducibility_examples() {
        let f = gf(2, 1);
        assert!(is_irreducible(&poly(&f, "x^2+x+1")).unwrap());
        assert!(!is_irreducible(&poly(&f, "x^2+1")).unwrap());
        let g9 = gf(3, 2);
        for c in g9.elements() {
            assert!(is_irreducible(&Poly::linear(&g9, c)).unwrap());
        }
        assert!(!is_irreducible(&Poly::one(&f)).unwrap());
        assert_eq!(
            is_irreducible(&Poly::zero(&f)).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn factorization_examples() {
        let f = gf(2, 1);
        let fx = factorize(&poly(&f, "x^2+x"), 0).unwrap();
        assert_eq!(fx.leading, Elem::ONE);
        assert_eq!(fx.factors, vec![(poly(&f, "x"), 1), (poly(&f, "x+1"), 1)]);
        let sq = factorize(&poly(&f, "x^4+x^2+1"), 0).unwrap();
        assert_eq!(sq.factors, vec![(poly(&f, "x^2+x+1"), 2)]);
        let irr = poly(&f, "x^5+x^2+1");
        assert_eq!(factorize(&irr, 0).unwrap().factors, vec![(irr, 1)]);
        assert_eq!(
            factorize(&Poly::zero(&f), 0).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn factorization_handles_pth_powers_and_leading_coefficient() {
        let f = gf(3, 1);
        // 2 * (x+1)^3 * (x^2+1)^2 * x
        let g = &(&Poly::constant(&f, Elem::ONE).scale(f.from_int(2)) * &poly(&f, "x+1").pow(3))
            * &(&poly(&f, "x^2+1").pow(2) * &poly(&f, "x"));
        let fx = factorize(&g, 7).unwrap();
        assert_eq!(fx.leading, f.from_int(2));
        assert_eq!(
            fx.factors,
            vec![
                (poly(&f, "x"), 1),
                (poly(&f, "x+1"), 3),
                (poly(&f, "x^2+1"), 2)
            ]
        );
        assert_eq!(fx.reconstruct(&f), g);
    }

    #[test]
    fn necklace_examples() {
        let f = gf(2, 1);
        assert_eq!(count_monic_irreducibles_u64(&f, 1), Some(2));
        assert_eq!(count_monic_irreducibles_u64(&f, 2), Some(1));
        assert_eq!(count_monic_irreducibles_u64(&f, 3), Some(2));
        assert!(count_monic_irreducibles(&f, 0).is_err());
    }

    #[test]
    fn necklace_matches_enumeration_for_gf2_cubics() {
        // Oracle: a cubic is reducible iff it has a root.
        let f = gf(2, 1);
        let by_roots = monic_polynomials(&f, 3)
            .filter(|p| f.elements().all(|c| !p.eval(c).is_zero()))
            .count();
        assert_eq!(by_roots, 2);
    }

    #[test]
    fn edf_in_characteristic_two_extension() {
        let f = gf(2, 2);
        // product of all four monic linear polynomials = x^4 - x
        let g = monic_polynomials(&f, 1).fold(Poly::one(&f), |acc, l| &acc * &l);
        assert_eq!(g, &Poly::monomial(&f, Elem::ONE, 4) - &Poly::x(&f));
        let fx = factorize(&g, 3).unwrap();
        assert_eq!(fx.factors.len(), 4);
        assert!(fx
            .factors
            .iter()
            .all(|(p, m)| *m == 1 && p.degree() == Some(1)));
    }

    #[test]
    fn seed_does_not_change_result() {
        let f = gf(5, 1);
        let g = monic_polynomials(&f, 2)
            .take(7)
            .fold(Poly::one(&f), |acc, l| &acc * &l);
        let base = factorize(&g, 0).unwrap();
        for seed in 1..10 {
            assert_eq!(factorize(&g, seed).unwrap(), base);
        }
    }
}
