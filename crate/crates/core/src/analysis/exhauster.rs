//! A family read as a positively homogeneous function: min of max of linear
//! functions (upper) or max of min (lower).

use crate::error::{Error, Result};
use crate::exact::{Scalar, Vector};
use crate::family::Family;

fn check_point(f: &Family, x: &Vector) -> Result<()> {
    let n = f.ground().dimension();
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.dim(),
        });
    }
    Ok(())
}

/// `min over members of max over vertices ⟨v, x⟩`.
pub fn evaluate_upper(f: &Family, x: &Vector) -> Result<Scalar> {
    check_point(f, x)?;
    if x.is_zero() {
        return Ok(Scalar::zero());
    }
    let values = f.ground().values(x);
    Ok(f.members()
        .iter()
        .map(|p| p.indices().iter().map(|&i| &values[i]).max().expect("nonempty"))
        .min()
        .expect("nonempty")
        .clone())
}

/// `max over members of min over vertices ⟨v, x⟩`.
pub fn evaluate_lower(f: &Family, x: &Vector) -> Result<Scalar> {
    check_point(f, x)?;
    if x.is_zero() {
        return Ok(Scalar::zero());
    }
    let values = f.ground().values(x);
    Ok(f.members()
        .iter()
        .map(|p| p.indices().iter().map(|&i| &values[i]).min().expect("nonempty"))
        .max()
        .expect("nonempty")
        .clone())
}
