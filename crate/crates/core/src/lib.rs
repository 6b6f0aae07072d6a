//! Exact Buchsbaum-Rim, mixed Buchsbaum-Rim and generalized Samuel
//! multiplicities of bigraded modules, computed from length tables over
//! `Q` or `F_p`.
//!
//! ```
//! use mixmult::{br_multiplicities, ModulePresentation, Field, Polynomial, PureQuery, RingSpec, SubmoduleSpec};
//!
//! let g = RingSpec::new(Field::Rational, ["x", "y"], ["u", "v"]).unwrap();
//! let gens = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]]
//!     .iter()
//!     .map(|e| Polynomial::from_terms(&g, &[(e, 1)]))
//!     .collect();
//! let h = SubmoduleSpec::new(&g, 1, gens).unwrap();
//! let report = br_multiplicities(&PureQuery::new(ModulePresentation::free_ring(&g), h)).unwrap();
//! assert_eq!(report.e(&[3, 0]), 3.into());
//! ```

pub mod error;
pub mod filtration;
pub mod graded_module;
pub mod linalg;
pub mod multiplicity;
pub mod polyfit;
pub mod ring;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use graded_module::{FreeModuleSpec, ModulePresentation, SliceLength};
pub use multiplicity::{
    br_multiplicities, generalized_samuel, has_maximal_analytic_spread, lambda_local, lambda_mixed,
    lambda_pure, mixed_br_multiplicities, samuel_function, LocalQuery, MixedQuery,
    MultiplicityReport, PureQuery, RSource, SamuelReport, Settings,
};
pub use polyfit::{LeadingForm, LengthTable};
pub use ring::{Bidegree, Monomial, Polynomial, Ring, RingSpec, SubmoduleSpec};
pub use scalar::{Field, Scalar};
pub use verify::{Value, VerificationReport, Witness};
