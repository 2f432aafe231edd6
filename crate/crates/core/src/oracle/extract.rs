//! Reading the class datum off an explicit matrix.

use std::collections::BTreeMap;

use crate::classdata::{ClassDatum, Partition};
use crate::error::{Error, Result};
use crate::upoly::UnitaryCtx;

use super::linalg::{char_poly, nullity};
use super::matrix::Matrix;

/// The class datum of an invertible matrix whose characteristic polynomial
/// is a product of U-irreducibles (true for every unitary matrix).
///
/// For each factor f of degree d, dim ker f(g)^j = d·Σ_i min(λ_i, j), so
/// the multiplicity of part j is (2r_j − r_{j−1} − r_{j+1}) / d.
pub fn extract_class_datum(ctx: &UnitaryCtx, g: &Matrix) -> Result<ClassDatum> {
    if !g.is_square() {
        return Err(Error::Dimension);
    }
    let f = ctx.field();
    let cp = char_poly(f, g);
    let mut blocks = BTreeMap::new();
    for (u, e) in ctx.factor_into_u_irreducibles(&cp)? {
        let d = u.degree();
        let fg = g.eval_poly(f, u.poly().coeffs());
        let mut nullities = vec![0usize];
        let mut power = Matrix::identity(g.rows());
        for _ in 0..=e {
            power = power.mul(f, &fg);
            nullities.push(nullity(f, &power));
        }
        let mut mults = Vec::new();
        for j in 1..=e {
            let twice = 2 * nullities[j];
            let around = nullities[j - 1] + nullities[j + 1];
            let diff = twice.checked_sub(around).ok_or(Error::NotUFactorable)?;
            if diff % d != 0 {
                return Err(Error::NotUFactorable);
            }
            if diff > 0 {
                mults.push((j as u32, (diff / d) as u32));
            }
        }
        blocks.insert(u, Partition::from_multiplicities(mults)?);
    }
    ClassDatum::new(ctx.prime_power(), blocks)
}
