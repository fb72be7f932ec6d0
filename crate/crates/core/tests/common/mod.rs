//! Helpers shared by the integration tests: random objects and brute-force
//! reference implementations that avoid the library's own algorithms.

#![allow(dead_code)]

use matrix_census::factor::is_irreducible;
use matrix_census::{companion, make_field, Elem, Field, Matrix, Poly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn gf(q: u64) -> Field {
    let (p, k) = matrix_census::field::prime_power_decompose(q).expect("prime power");
    make_field(p, k).unwrap()
}

pub fn random_elem(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    f.index_element(rng.gen_range(0..f.order() as u64)).unwrap()
}

pub fn random_matrix(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let data = (0..n * n).map(|_| random_elem(f, rng)).collect();
    Matrix::from_vec(f, n, data).unwrap()
}

pub fn random_invertible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m = random_matrix(f, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_poly(f: &Field, max_degree: usize, rng: &mut ChaCha8Rng) -> Poly {
    let len = rng.gen_range(0..=max_degree + 1);
    Poly::from_elems(f, (0..len).map(|_| random_elem(f, rng)).collect())
}

pub fn random_monic(f: &Field, degree: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut coeffs: Vec<Elem> = (0..degree).map(|_| random_elem(f, rng)).collect();
    coeffs.push(f.one());
    Poly::from_elems(f, coeffs)
}

pub fn random_irreducible(f: &Field, degree: usize, rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let g = random_monic(f, degree, rng);
        if is_irreducible(&g).unwrap() {
            return g;
        }
    }
}

/// A conjugate of a companion matrix of a random irreducible polynomial.
pub fn random_irreducible_matrix(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let c = companion(&random_irreducible(f, n, rng)).unwrap();
    let p = random_invertible(f, n, rng);
    &(&p.invert().unwrap() * &c) * &p
}

/// `det(xI - M)` by the Leibniz expansion over all permutations.
pub fn leibniz_charpoly(m: &Matrix) -> Poly {
    let f = m.field();
    let n = m.n();
    let entry = |i: usize, j: usize| {
        let c = Poly::constant(f, f.neg(m.get(i, j)));
        if i == j {
            &Poly::x(f) + &c
        } else {
            c
        }
    };
    let mut total = Poly::zero(f);
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut term = Poly::one(f);
        for (i, &j) in p.iter().enumerate() {
            term = &term * &entry(i, j);
        }
        if parity(p) {
            term = -&term;
        }
        total = &total + &term;
    });
    total
}

fn permutations(p: &mut Vec<usize>, start: usize, visit: &mut dyn FnMut(&[usize])) {
    if start == p.len() {
        visit(p);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permutations(p, start + 1, visit);
        p.swap(start, i);
    }
}

/// True for odd permutations.
fn parity(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Every n×n matrix over `f`, in index order.
pub fn all_matrices(f: &Field, n: usize) -> impl Iterator<Item = Matrix> + '_ {
    let q = f.order() as u64;
    let total = q.pow((n * n) as u32);
    (0..total).map(move |i| Matrix::from_index(f, n, &i.into()).unwrap())
}

/// Irreducibility by trial division with every monic polynomial of degree at
/// most half the degree.
pub fn irreducible_by_trial_division(g: &Poly) -> bool {
    let d = match g.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    for e in 1..=d / 2 {
        for h in matrix_census::factor::monic_polynomials(g.field(), e) {
            if h.divides(g).unwrap() {
                return false;
            }
        }
    }
    true
}
