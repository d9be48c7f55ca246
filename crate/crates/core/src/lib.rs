//! Construction, verification and bounding of symmetric bilinear
//! multiplication formulas for finite field extensions, following the
//! interpolation-on-curves method on rational and elliptic function fields.

pub mod arith;
pub mod bounds;
pub mod ccma;
pub mod function_field;
pub mod gf;
