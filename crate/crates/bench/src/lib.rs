//! Shared fixtures for the `engine` benchmarks.

use strongreal_core::classdata::{ClassDatum, Partition};
use strongreal_core::oracle::group::HermitianForm;
use strongreal_core::oracle::matrix::Matrix;
use strongreal_core::oracle::realize::realize_class;
use strongreal_core::{Result, UnitaryCtx};

/// A unipotent element of the given type in U(n, q) for the identity form.
pub fn unipotent_element(q: u64, parts: &str) -> Result<(UnitaryCtx, HermitianForm, Matrix)> {
    let ctx = UnitaryCtx::from_q(q)?;
    let datum = ClassDatum::unipotent(&ctx, Partition::parse(parts)?)?;
    let form = HermitianForm::identity(datum.n());
    let g = realize_class(&ctx, &datum, &form, 0)?;
    Ok((ctx, form, g))
}
