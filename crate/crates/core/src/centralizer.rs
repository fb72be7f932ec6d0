//! Centralizers `C(M) = {X : MX = XM}`, their unit groups, the comparison
//! with the polynomial algebra `F[M]`, and a brute-force enumeration of
//! invariant subspaces.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::{Elem, Field};
use crate::matrix::{kernel_from_rref, rref_general, Matrix, Span, Vector};

/// Default cap on the number of centralizer elements enumerated when
/// counting units the slow way.
pub const DEFAULT_UNIT_BUDGET: u64 = 1 << 20;

/// Default cap on the number of subspaces visited by [`invariant_subspaces`].
pub const DEFAULT_SUBSPACE_BUDGET: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct CentralizerDescription {
    /// Basis of the solution space of `MX - XM = 0`.
    pub basis: Vec<Matrix>,
    pub dimension: usize,
    /// `q^dimension`
    pub order: BigUint,
}

/// Solves `MX - XM = 0` for the n² entries of X.
pub fn centralizer(m: &Matrix) -> CentralizerDescription {
    let (f, n) = (m.field(), m.n());
    let size = n * n;
    let mut system = vec![Elem::ZERO; size * size];
    for a in 0..n {
        for b in 0..n {
            let row = (a * n + b) * size;
            for k in 0..n {
                // (MX)_{ab} contributes M_{ak} X_{kb}
                let u = k * n + b;
                system[row + u] = f.add(system[row + u], m.get(a, k));
                // (XM)_{ab} contributes -X_{ak} M_{kb}
                let u = a * n + k;
                system[row + u] = f.sub(system[row + u], m.get(k, b));
            }
        }
    }
    let (reduced, pivots) = rref_general(f, size, size, system);
    let basis: Vec<Matrix> = kernel_from_rref(f, size, &reduced, &pivots)
        .into_iter()
        .map(|v| Matrix::from_vec(f, n, v).expect("n² entries"))
        .collect();
    let dimension = basis.len();
    CentralizerDescription {
        basis,
        dimension,
        order: BigUint::from(f.order()).pow(dimension as u32),
    }
}

fn combination(field: &Field, basis: &[Matrix], mut index: u64) -> Matrix {
    let q = field.order() as u64;
    let n = basis[0].n();
    let mut acc = Matrix::zero(field, n);
    for b in basis {
        let c = field.index_element(index % q).expect("digit below q");
        index /= q;
        if !c.is_zero() {
            acc = &acc + &b.scale(c);
        }
    }
    acc
}

/// Counts invertible matrices among all `q^dim` elements of the centralizer
/// by enumeration.
pub fn count_centralizer_units_exhaustive(m: &Matrix, budget: u64) -> Result<BigUint> {
    let desc = centralizer(m);
    let total = &desc.order;
    let within = total.to_u64().filter(|&t| t <= budget);
    let Some(total) = within else {
        return Err(Error::BudgetExceeded {
            what: "centralizer elements",
            required: desc.order.to_string(),
            budget,
        });
    };
    let field = m.field();
    let units = (0..total)
        .into_par_iter()
        .filter(|&i| combination(field, &desc.basis, i).is_invertible())
        .count();
    Ok(BigUint::from(units))
}

/// `|C_GL(M)|`. When the characteristic polynomial is irreducible every
/// nonzero element of the centralizer is invertible, so the count is
/// `|C(M)| - 1`; otherwise the centralizer is enumerated within `budget`.
pub fn centralizer_unit_count(m: &Matrix, budget: u64) -> Result<BigUint> {
    if is_irreducible(&m.charpoly())? {
        let fast = centralizer(m).order - 1u32;
        debug_assert!(
            fast.to_u64().is_none_or(|c| c >= 1 << 12)
                || count_centralizer_units_exhaustive(m, budget).ok() == Some(fast.clone()),
            "fast and exhaustive unit counts disagree"
        );
        return Ok(fast);
    }
    count_centralizer_units_exhaustive(m, budget)
}

/// The powers `I, M, …, M^(d-1)` flattened to n²-vectors in a span, where d
/// is the degree of the minimal polynomial.
fn polynomial_algebra(m: &Matrix) -> Span {
    let (f, n) = (m.field(), m.n());
    let degree = m.minpoly().degree().unwrap_or(0);
    let mut span = Span::new(f, n * n);
    let mut power = Matrix::identity(f, n);
    for _ in 0..degree {
        span.insert(power.entries());
        power = &power * m;
    }
    span
}

/// Whether `C(M) = F[M]`: the centralizer has dimension `deg minpoly(M)` and
/// each centralizer basis element is a polynomial in M.
pub fn is_polynomial_centralizer(m: &Matrix) -> bool {
    let desc = centralizer(m);
    let algebra = polynomial_algebra(m);
    desc.dimension == algebra.rank() && desc.basis.iter().all(|x| algebra.contains(x.entries()))
}

/// A subspace of F^n given by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub basis: Vec<Vector>,
}

impl Subspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Gaussian binomial coefficient: number of d-dimensional subspaces of F_q^n.
pub fn gaussian_binomial(q: u64, n: usize, d: usize) -> BigUint {
    if d > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// All reduced echelon d×n bases, in (pivot set, free entries) order.
fn echelon_bases(field: &Field, n: usize, d: usize) -> Vec<Vec<Vector>> {
    let q = field.order() as u64;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let count = q.pow(free.len() as u32);
        for mut idx in 0..count {
            let mut rows = vec![vec![Elem::ZERO; n]; d];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = Elem::ONE;
            }
            for &(r, c) in &free {
                rows[r][c] = field.index_element(idx % q).expect("digit below q");
                idx /= q;
            }
            out.push(rows);
        }
        // next combination of d pivot columns out of n
        let Some(i) = (0..d).rev().find(|&i| pivots[i] < n - d + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..d {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out
}

/// Nontrivial proper subspaces `V` with `M·V ⊆ V`, up to `dimension_cap`.
/// An empty result means `{M}` admits no invariant subspace besides the
/// trivial ones.
pub fn invariant_subspaces(m: &Matrix, dimension_cap: usize, budget: u64) -> Result<Vec<Subspace>> {
    let (f, n) = (m.field(), m.n());
    let top = dimension_cap.min(n.saturating_sub(1));
    let total: BigUint = (1..=top)
        .map(|d| gaussian_binomial(f.order() as u64, n, d))
        .sum();
    if total > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            what: "subspaces",
            required: total.to_string(),
            budget,
        });
    }
    let mut out = Vec::new();
    for d in 1..=top {
        for basis in echelon_bases(f, n, d) {
            let mut span = Span::new(f, n);
            for b in &basis {
                span.insert(b);
            }
            let invariant = basis
                .iter()
                .all(|b| span.contains(&m.mul_vec(b).expect("dimension")));
            if invariant {
                out.push(Subspace { basis });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::companion;
    use crate::field::make_field;
    use crate::poly::parse_poly;

    fn gf(p: u64, k: u32) -> Field {
        make_field(p, k).unwrap()
    }

    fn companion_of(f: &Field, s: &str) -> Matrix {
        companion(&parse_poly(s, f).unwrap()).unwrap()
    }

    #[test]
    fn centralizer_examples() {
        let f = gf(2, 1);
        assert_eq!(centralizer(&Matrix::identity(&f, 3)).dimension, 9);
        let f5 = gf(5, 1);
        assert_eq!(
            centralizer(&Matrix::scalar(&f5, 2, f5.from_int(3))).dimension,
            4
        );

        let m = companion_of(&f, "x^2+x+1");
        let desc = centralizer(&m);
        assert_eq!(desc.dimension, 2);
        assert_eq!(desc.order, BigUint::from(4u32));
        // Oracle: test all 16 matrices for commutation.
        let commuting: Vec<Matrix> = (0..16u32)
            .map(|i| Matrix::from_index(&f, 2, &BigUint::from(i)).unwrap())
            .filter(|x| &m * x == x * &m)
            .collect();
        let id = Matrix::identity(&f, 2);
        let expected = [Matrix::zero(&f, 2), id.clone(), m.clone(), &id + &m];
        assert_eq!(commuting.len(), 4);
        for e in &expected {
            assert!(commuting.contains(e));
        }
        for x in &desc.basis {
            assert_eq!(&m * x, x * &m);
        }
    }

    #[test]
    fn unit_count_examples() {
        let f = gf(2, 1);
        let budget = DEFAULT_UNIT_BUDGET;
        assert_eq!(
            centralizer_unit_count(&companion_of(&f, "x^2+x+1"), budget).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(
            centralizer_unit_count(&Matrix::identity(&f, 2), budget).unwrap(),
            BigUint::from(6u32)
        );
        assert_eq!(
            centralizer_unit_count(&companion_of(&f, "x^2"), budget).unwrap(),
            BigUint::from(2u32)
        );
        assert!(
            centralizer_unit_count(&Matrix::identity(&gf(3, 1), 4), 1000)
                .unwrap_err()
                .is_budget()
        );
    }

    #[test]
    fn unit_count_fast_and_slow_paths_agree() {
        let f = gf(3, 1);
        let m = companion_of(&f, "x^3+2*x+1");
        assert_eq!(
            centralizer_unit_count(&m, DEFAULT_UNIT_BUDGET).unwrap(),
            count_centralizer_units_exhaustive(&m, DEFAULT_UNIT_BUDGET).unwrap()
        );
    }

    #[test]
    fn polynomial_centralizer_examples() {
        let f = gf(2, 1);
        assert!(is_polynomial_centralizer(&companion_of(&f, "x^2+x+1")));
        assert!(!is_polynomial_centralizer(&Matrix::identity(&f, 2)));
        // Reducible characteristic polynomial, yet C(M) = F[M].
        assert!(is_polynomial_centralizer(&companion_of(&f, "x^2")));
    }

    #[test]
    fn invariant_subspace_examples() {
        let f = gf(2, 1);
        let budget = DEFAULT_SUBSPACE_BUDGET;
        assert!(invariant_subspaces(&companion_of(&f, "x^2+x+1"), 2, budget)
            .unwrap()
            .is_empty());
        let d = Matrix::diagonal(&f, &[Elem::ZERO, Elem::ONE]);
        let lines = invariant_subspaces(&d, 2, budget).unwrap();
        assert_eq!(
            lines,
            vec![
                Subspace {
                    basis: vec![vec![Elem::ONE, Elem::ZERO]]
                },
                Subspace {
                    basis: vec![vec![Elem::ZERO, Elem::ONE]]
                },
            ]
        );
        let all = invariant_subspaces(&Matrix::zero(&f, 3), 3, budget).unwrap();
        // 7 lines and 7 planes in GF(2)^3
        assert_eq!(all.len(), 14);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 3, 1), BigUint::from(7u32));
        assert_eq!(gaussian_binomial(2, 4, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(3, 2, 1), BigUint::from(4u32));
        for d in 1..4 {
            assert_eq!(
                echelon_bases(&gf(3, 1), 4, d).len() as u64,
                gaussian_binomial(3, 4, d).to_u64().unwrap()
            );
        }
    }
}
