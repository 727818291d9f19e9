//! Exact symbolic models of affine Hecke algebra modules.

pub mod algebra;
pub mod error;
pub mod matrix;
pub mod metaplectic;
pub mod report;
pub mod rmatrix;
pub mod roots;
pub mod schema;
pub mod whittaker;

pub use algebra::{Coef, Ctx, GaussRules, LaurentPoly, Monomial, RationalFunction, Symbol};
pub use error::{Error, Result};
pub use algebra::{parse_poly, GaussOrientation};
pub use matrix::Matrix;
pub use metaplectic::{MetaplecticDatum, TauKind, WhittakerValue};
pub use report::{Check, Failure, Report, Status};
pub use rmatrix::{RMatrixSpec, TensorOperator, TensorSchemaOptions, Twist, WreathModule};
pub use roots::{CartanDatum, CartanType, Weight, WeylGroup};
pub use schema::SchemaInstance;
pub use whittaker::{DemazureKind, DemazureVariant};
