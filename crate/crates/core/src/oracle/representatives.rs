//! Explicit unipotent representatives in block Hermitian forms, with
//! parameters chosen as the first suitable field elements in index order.

use serde::{Deserialize, Serialize};

use crate::classdata::{ClassDatum, Partition};
use crate::error::{Error, Result};
use crate::field_tower::{Elem, Fq2};
use crate::upoly::UnitaryCtx;

use super::group::HermitianForm;
use super::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepresentativeKind {
    /// Type (2^r 1^m) under N_{2r} ⊕ I_m, q odd.
    EvenPart { r: usize, m: usize },
    /// Type (3,1) under N_3 ⊕ 1, q even.
    ThreeOne,
    /// Type (3,2) under N_3 ⊕ N_2, q even.
    ThreeTwo,
    /// Type (3^r) under N_{3r}, q even.
    ThreeR { r: usize },
}

#[derive(Debug, Clone)]
pub struct Representative {
    pub kind: RepresentativeKind,
    pub form: HermitianForm,
    pub g: Matrix,
    /// The unipotent type the construction is meant to have.
    pub partition: Partition,
}

impl Representative {
    pub fn datum(&self, ctx: &UnitaryCtx) -> Result<ClassDatum> {
        ClassDatum::unipotent(ctx, self.partition.clone())
    }
}

/// First a ≠ 0 with a + ā = 0.
pub fn trace_zero_unit(f: &Fq2) -> Option<Elem> {
    f.nonzero().find(|&a| f.add(a, f.conj(a)).is_zero())
}

/// First (a, b) with a ≠ 0 and b + b̄ = a·ā.
pub fn norm_trace_pair(f: &Fq2) -> Option<(Elem, Elem)> {
    f.nonzero().find_map(|a| {
        let n = f.mul(a, f.conj(a));
        f.elements()
            .find(|&b| f.add(b, f.conj(b)) == n)
            .map(|b| (a, b))
    })
}

/// First root of t² + t + 1.
pub fn cube_root_of_unity(f: &Fq2) -> Option<Elem> {
    f.elements()
        .find(|&b| f.add(f.add(f.mul(b, b), b), Elem::ONE).is_zero())
}

fn block_identity(r: usize, i: usize, j: usize, a: Elem, m: &mut Matrix) {
    for k in 0..r {
        m.set(i * r + k, j * r + k, a);
    }
}

pub fn known_representative(f: &Fq2, kind: RepresentativeKind) -> Result<Representative> {
    let odd = f.prime_power().is_odd();
    match kind {
        RepresentativeKind::EvenPart { r, m } => {
            if !odd {
                return Err(Error::RequiresOddQ);
            }
            if r == 0 {
                return Err(Error::Parameter("r must be positive".into()));
            }
            let a = trace_zero_unit(f)
                .ok_or_else(|| Error::Parameter("no a ≠ 0 with a + ā = 0".into()))?;
            let mut sizes = vec![2 * r];
            sizes.extend(std::iter::repeat_n(1, m));
            let form = HermitianForm::anti_diagonal_blocks(f, &sizes)?;
            let mut g = Matrix::identity(2 * r + m);
            block_identity(r, 0, 1, a, &mut g);
            let mut parts = vec![2; r];
            parts.extend(std::iter::repeat_n(1, m));
            Ok(Representative {
                kind,
                form,
                g,
                partition: Partition::new(parts)?,
            })
        }
        RepresentativeKind::ThreeOne
        | RepresentativeKind::ThreeTwo
        | RepresentativeKind::ThreeR { .. } => {
            if odd {
                return Err(Error::RequiresEvenQ);
            }
            let (a, b) = norm_trace_pair(f)
                .ok_or_else(|| Error::Parameter("no b with b + b̄ = a·ā".into()))?;
            let abar = f.conj(a);
            let (r, form_sizes, tail, parts): (usize, Vec<usize>, Option<Matrix>, Vec<u32>) =
                match kind {
                    RepresentativeKind::ThreeOne => {
                        (1, vec![3, 1], Some(Matrix::identity(1)), vec![3, 1])
                    }
                    RepresentativeKind::ThreeTwo => {
                        let j2 = Matrix::from_rows(vec![
                            vec![Elem::ONE, Elem::ONE],
                            vec![Elem::ZERO, Elem::ONE],
                        ])?;
                        (1, vec![3, 2], Some(j2), vec![3, 2])
                    }
                    RepresentativeKind::ThreeR { r } => {
                        if r == 0 {
                            return Err(Error::Parameter("r must be positive".into()));
                        }
                        (r, vec![3 * r], None, vec![3; r])
                    }
                    RepresentativeKind::EvenPart { .. } => unreachable!(),
                };
            let mut head = Matrix::identity(3 * r);
            block_identity(r, 0, 1, a, &mut head);
            block_identity(r, 0, 2, b, &mut head);
            block_identity(r, 1, 2, abar, &mut head);
            let g = match tail {
                Some(t) => Matrix::direct_sum(&[head, t]),
                None => head,
            };
            let form = HermitianForm::anti_diagonal_blocks(f, &form_sizes)?;
            Ok(Representative {
                kind,
                form,
                g,
                partition: Partition::new(parts)?,
            })
        }
    }
}

/// The explicit reversing involution for the (3,1) representative:
/// α = βa with β² + β + 1 = 0. It reverses g only when β̄ = β², that is
/// q ≡ 2 (mod 3); for q ≡ 1 (mod 3) the class is still strongly real but
/// needs a different involution.
pub fn three_one_witness(f: &Fq2) -> Result<Matrix> {
    if f.prime_power().is_odd() {
        return Err(Error::RequiresEvenQ);
    }
    let (a, _) =
        norm_trace_pair(f).ok_or_else(|| Error::Parameter("no b with b + b̄ = a·ā".into()))?;
    let beta =
        cube_root_of_unity(f).ok_or_else(|| Error::Parameter("t² + t + 1 has no root".into()))?;
    let alpha = f.mul(beta, a);
    let ab = f.conj(alpha);
    let (o, z) = (Elem::ONE, Elem::ZERO);
    Matrix::from_rows(vec![
        vec![o, alpha, z, alpha],
        vec![z, o, ab, z],
        vec![z, z, o, z],
        vec![z, z, ab, o],
    ])
}
