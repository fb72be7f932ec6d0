//! Exact counting of n×n matrices over a finite field by characteristic
//! polynomial.
//!
//! The crate provides finite field and polynomial arithmetic, factorization
//! over GF(q), matrices with characteristic and minimal polynomials,
//! rational canonical forms, centralizers, and the counting formulas
//! together with a brute-force census that checks them.
//!
//! ```
//! use matrix_census::{census::count_with_charpoly, field::make_field, poly::parse_poly};
//!
//! let gf2 = make_field(2, 1).unwrap();
//! let g = parse_poly("x^3+x+1", &gf2).unwrap();
//! assert_eq!(count_with_charpoly(&g).unwrap().to_string(), "24");
//! ```

pub mod canonical;
pub mod census;
pub mod centralizer;
pub mod error;
pub mod factor;
pub mod field;
pub mod matrix;
pub mod poly;

pub use canonical::{are_similar, companion, rcf, vector_order, RationalCanonicalForm};
pub use census::{
    census_bruteforce, count_irreducible_case, count_with_charpoly, f_product, gl_order,
    orbit_stabilizer_report, verify, verify_partition, CensusOptions, CensusReport, ExactRational,
    OrbitStabilizerReport, VerifyMode, VerifyReport,
};
pub use centralizer::{
    centralizer, centralizer_unit_count, invariant_subspaces, is_polynomial_centralizer,
    CentralizerDescription,
};
pub use error::{Error, Result};
pub use factor::{count_monic_irreducibles, factorize, is_irreducible, Factorization};
pub use field::{make_field, Elem, Field};
pub use matrix::{format_matrix, parse_matrix, Matrix};
pub use poly::{format_poly, parse_poly, Poly};
