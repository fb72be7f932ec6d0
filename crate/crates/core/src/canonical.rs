//! Rational canonical form: vector orders, primary cyclic decomposition and
//! the similarity test.
//!
//! The decomposition works one primary component at a time. For each
//! irreducible factor f of the characteristic polynomial with multiplicity
//! m, the component is `ker f(M)^m`. Inside it we repeatedly pick a vector
//! whose order modulo the already-built cyclic subspaces is maximal, then
//! correct it by a combination of earlier generators so that its true order
//! equals that relative order. The corrected vector spans a cyclic subspace
//! complementary to what is already there.

use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::field::{Elem, Field};
use crate::matrix::{Matrix, Span, Vector};
use crate::poly::Poly;

/// Companion matrix of a monic polynomial: ones on the subdiagonal, last
/// column the negated low coefficients.
pub fn companion(f: &Poly) -> Result<Matrix> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial(f.to_string())),
        Some(n) => n,
    };
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    let field = f.field();
    let mut m = Matrix::zero(field, n);
    for i in 1..n {
        m.set(i, i - 1, Elem::ONE);
    }
    for i in 0..n {
        m.set(i, n - 1, field.neg(f.coeff(i)));
    }
    Ok(m)
}

/// Block-diagonal matrix with the companion matrices of `polys` in order.
pub fn block_companion(field: &Field, polys: &[Poly]) -> Result<Matrix> {
    let n: usize = polys.iter().map(|p| p.degree().unwrap_or(0)).sum();
    let mut out = Matrix::zero(field, n.max(1));
    let mut offset = 0;
    for p in polys {
        let c = companion(p)?;
        for i in 0..c.n() {
            for j in 0..c.n() {
                out.set(offset + i, offset + j, c.get(i, j));
            }
        }
        offset += c.n();
    }
    Ok(out)
}

fn check_vector(m: &Matrix, v: &[Elem]) -> Result<()> {
    if v.len() != m.n() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a {n}x{n} matrix",
            v.len(),
            n = m.n()
        )));
    }
    if v.iter().any(|&e| !m.field().contains(e)) {
        return Err(Error::MixedFields);
    }
    Ok(())
}

/// Krylov sequence `u, Mu, M²u, …` added to `base` until it becomes
/// dependent. Returns the monic relation `g` (with `g(M)u ∈ base`), the
/// coordinates of `g(M)u` with respect to the vectors already in `base`, and
/// the Krylov vectors that were independent.
struct RelativeOrder {
    order: Poly,
    base_coords: Vector,
    krylov: Vec<Vector>,
}

fn relative_order(m: &Matrix, base: &Span, u: &[Elem]) -> RelativeOrder {
    let field = m.field();
    let already = base.rank();
    let mut span = base.clone();
    let mut krylov = Vec::new();
    let mut w = u.to_vec();
    loop {
        if !span.insert(&w) {
            let coords = span
                .coordinates(&w)
                .expect("dependent vector has coordinates");
            let (base_coords, own) = coords.split_at(already);
            let j = krylov.len();
            let mut g: Vec<Elem> = own.iter().map(|&c| field.neg(c)).collect();
            g.push(Elem::ONE);
            debug_assert_eq!(g.len(), j + 1);
            return RelativeOrder {
                order: Poly::from_elems(field, g),
                base_coords: base_coords.to_vec(),
                krylov,
            };
        }
        let next = m.mul_vec(&w).expect("dimension checked");
        krylov.push(w);
        w = next;
    }
}

/// Order of `v` under `M`: the monic `p` of least degree with `p(M)v = 0`.
/// The zero vector has order 1.
pub fn vector_order(m: &Matrix, v: &[Elem]) -> Result<Poly> {
    check_vector(m, v)?;
    Ok(relative_order(m, &Span::new(m.field(), m.n()), v).order)
}

/// One companion block `poly = prime^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub prime: Poly,
    pub exponent: usize,
    pub poly: Poly,
}

#[derive(Clone, Debug)]
pub struct RationalCanonicalForm {
    pub blocks: Vec<Block>,
    /// Invertible P with `P⁻¹·M·P` equal to [`block_matrix`](Self::block_matrix).
    pub transition: Matrix,
    pub n: usize,
}

impl RationalCanonicalForm {
    pub fn block_polys(&self) -> Vec<Poly> {
        self.blocks.iter().map(|b| b.poly.clone()).collect()
    }

    pub fn block_matrix(&self) -> Matrix {
        block_companion(self.transition.field(), &self.block_polys())
            .expect("blocks are monic and nonconstant")
    }

    /// Checks the transition by direct multiplication.
    pub fn verify(&self, m: &Matrix) -> bool {
        let Ok(inv) = self.transition.invert() else {
            return false;
        };
        let degrees: usize = self
            .blocks
            .iter()
            .map(|b| b.poly.degree().unwrap_or(0))
            .sum();
        degrees == self.n && &(&inv * m) * &self.transition == self.block_matrix()
    }

    /// Product of the blocks, which equals the characteristic polynomial.
    pub fn block_product(&self) -> Poly {
        self.blocks
            .iter()
            .fold(Poly::one(self.transition.field()), |acc, b| &acc * &b.poly)
    }
}

/// Cyclic decomposition of one primary component `ker f(M)^mult`.
fn decompose_component(m: &Matrix, prime: &Poly, mult: usize) -> Vec<(Block, Vec<Vector>)> {
    let field = m.field();
    let kernel_of = m
        .eval_poly(&prime.pow(mult as u64))
        .expect("same field")
        .rank_kernel()
        .1;
    let target = kernel_of.len();
    let mut span = Span::new(field, m.n());
    let mut blocks: Vec<(Block, Vec<Vector>)> = Vec::new();
    while span.rank() < target {
        let (u, rel) = kernel_of
            .iter()
            .map(|u| (u, relative_order(m, &span, u)))
            .fold(
                None::<(&Vector, RelativeOrder)>,
                |best, (u, rel)| match best {
                    Some((_, ref b)) if b.order.degree() >= rel.order.degree() => best,
                    _ => Some((u, rel)),
                },
            )
            .expect("component is nonempty while rank < target");
        let g = rel.order;
        // g(M)u = Σ_b h_b(M) v_b; subtract (h_b / g)(M) v_b from u.
        let mut v = u.clone();
        let mut offset = 0;
        for (_, basis) in &blocks {
            let len = basis.len();
            let h = Poly::from_elems(field, rel.base_coords[offset..offset + len].to_vec());
            offset += len;
            let quotient = h
                .div_exact(&g)
                .expect("relative order divides the conductor coefficients");
            let correction = m
                .eval_poly(&quotient)
                .expect("same field")
                .mul_vec(&basis[0])
                .expect("dimension");
            for (x, c) in v.iter_mut().zip(correction) {
                *x = field.sub(*x, c);
            }
        }
        let mut krylov = Vec::with_capacity(rel.krylov.len());
        let mut w = v;
        for _ in 0..g.degree().unwrap_or(0) {
            let inserted = span.insert(&w);
            debug_assert!(inserted, "corrected generator must be independent");
            let next = m.mul_vec(&w).expect("dimension");
            krylov.push(w);
            w = next;
        }
        debug_assert!(
            m.eval_poly(&g)
                .unwrap()
                .mul_vec(&krylov[0])
                .unwrap()
                .iter()
                .all(|e| e.is_zero()),
            "corrected generator has order g"
        );
        let exponent = g.degree().unwrap_or(0) / prime.degree().unwrap_or(1);
        blocks.push((
            Block {
                prime: prime.clone(),
                exponent,
                poly: g,
            },
            krylov,
        ));
    }
    blocks
}

/// Rational canonical form with prime-power blocks. Blocks are sorted by
/// irreducible factor (canonical polynomial order), then by descending
/// exponent.
pub fn rcf(m: &Matrix) -> RationalCanonicalForm {
    let field = m.field();
    let chi = m.charpoly();
    let factorization = factorize(&chi, 0).expect("characteristic polynomial is nonzero");
    let mut all: Vec<(Block, Vec<Vector>)> = Vec::new();
    for (prime, mult) in &factorization.factors {
        let mut part = decompose_component(m, prime, *mult);
        part.sort_by_key(|(block, _)| std::cmp::Reverse(block.exponent));
        all.extend(part);
    }
    let columns: Vec<Vector> = all.iter().flat_map(|(_, k)| k.iter().cloned()).collect();
    let transition = Matrix::from_columns(field, &columns).expect("bases fill the space");
    let form = RationalCanonicalForm {
        blocks: all.into_iter().map(|(b, _)| b).collect(),
        transition,
        n: m.n(),
    };
    debug_assert!(form.verify(m), "rcf transition check failed for {m:?}");
    form
}

/// Outcome of a similarity test. When similar, `witness` is Q with
/// `Q⁻¹·A·Q = B`.
#[derive(Clone, Debug)]
pub struct Similarity {
    pub similar: bool,
    pub witness: Option<Matrix>,
}

pub fn are_similar(a: &Matrix, b: &Matrix) -> Result<Similarity> {
    if a.field() != b.field() {
        return Err(Error::MixedFields);
    }
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.n(),
            a.n(),
            b.n(),
            b.n()
        )));
    }
    let ra = rcf(a);
    let rb = rcf(b);
    if ra.block_polys() != rb.block_polys() {
        return Ok(Similarity {
            similar: false,
            witness: None,
        });
    }
    let q = &ra.transition * &rb.transition.invert()?;
    Ok(Similarity {
        similar: true,
        witness: Some(q),
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

    fn strings(polys: &[Poly]) -> Vec<String> {
        polys.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn companion_examples() {
        let f3 = gf(3, 1);
        let c = companion(&poly(&f3, "x+1")).unwrap();
        assert_eq!(c, Matrix::from_indices(&f3, &[&[2]]).unwrap());
        let f2 = gf(2, 1);
        assert_eq!(
            companion(&poly(&f2, "x^2+x+1")).unwrap(),
            Matrix::from_indices(&f2, &[&[0, 1], &[1, 1]]).unwrap()
        );
        assert_eq!(
            companion(&poly(&f2, "x^3")).unwrap(),
            Matrix::from_indices(&f2, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]).unwrap()
        );
        assert!(matches!(
            companion(&poly(&f3, "2*x+1")),
            Err(Error::NotMonic(_))
        ));
        assert!(matches!(
            companion(&poly(&f3, "1")),
            Err(Error::ConstantPolynomial(_))
        ));
    }

    #[test]
    fn vector_order_examples() {
        let f = gf(2, 1);
        let m = companion(&poly(&f, "x^2+x+1")).unwrap();
        assert!(vector_order(&m, &[Elem::ZERO, Elem::ZERO])
            .unwrap()
            .is_one());
        assert_eq!(
            vector_order(&m, &[Elem::ONE, Elem::ZERO]).unwrap(),
            poly(&f, "x^2+x+1")
        );
        let f5 = gf(5, 1);
        let id = Matrix::identity(&f5, 3);
        let v = vec![f5.from_int(2), Elem::ZERO, f5.from_int(4)];
        assert_eq!(vector_order(&id, &v).unwrap(), poly(&f5, "x+4"));
        assert!(vector_order(&id, &v[..2]).is_err());
    }

    #[test]
    fn rcf_examples() {
        let f = gf(2, 1);
        let c = companion(&poly(&f, "x^3")).unwrap();
        let r = rcf(&c);
        assert_eq!(strings(&r.block_polys()), ["x^3"]);
        assert_eq!(r.transition, Matrix::identity(&f, 3));

        let d = Matrix::diagonal(&f, &[Elem::ZERO, Elem::ONE]);
        assert_eq!(strings(&rcf(&d).block_polys()), ["x", "x+1"]);

        let p0 = Matrix::from_indices(&f, &[&[1, 1], &[0, 1]]).unwrap();
        let m = &(&p0 * &companion(&poly(&f, "x^2+x+1")).unwrap()) * &p0.invert().unwrap();
        let r = rcf(&m);
        assert_eq!(strings(&r.block_polys()), ["x^2+x+1"]);
        assert!(r.verify(&m));
    }

    #[test]
    fn rcf_repeated_blocks() {
        let f = gf(3, 1);
        // diag(J_2(1), 1, 2): blocks (x+2)^2, x+2, x+1
        let m = Matrix::from_indices(
            &f,
            &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 2]],
        )
        .unwrap();
        let r = rcf(&m);
        assert!(r.verify(&m));
        assert_eq!(strings(&r.block_polys()), ["x+1", "x^2+x+1", "x+2"]);
        assert_eq!(r.blocks[1].exponent, 2);
        assert_eq!(r.blocks[1].prime, poly(&f, "x+2"));
    }

    #[test]
    fn similarity_examples() {
        let f = gf(2, 1);
        let c = companion(&poly(&f, "x^2+x+1")).unwrap();
        let s = are_similar(&c, &c).unwrap();
        assert!(s.similar);
        let q = s.witness.unwrap();
        assert_eq!(&(&q.invert().unwrap() * &c) * &q, c);

        let b = Matrix::from_indices(&f, &[&[1, 1], &[1, 0]]).unwrap();
        let s = are_similar(&c, &b).unwrap();
        assert!(s.similar);
        let q = s.witness.unwrap();
        assert_eq!(&(&q.invert().unwrap() * &c) * &q, b);

        let nil = companion(&poly(&f, "x^2")).unwrap();
        assert!(!are_similar(&nil, &Matrix::zero(&f, 2)).unwrap().similar);
        assert!(are_similar(&nil, &Matrix::zero(&f, 3)).is_err());
    }
}
