use crate::algebra::ExactPoly;
use crate::error::Result;

/// `[f, g] = f_x g_y - f_y g_x` in the first two variables.
/// Fails only when `f` and `g` live in different rings.
pub fn jacobian_bracket(f: &ExactPoly, g: &ExactPoly) -> Result<ExactPoly> {
    let a = f.derivative(0).checked_mul(&g.derivative(1))?;
    let b = f.derivative(1).checked_mul(&g.derivative(0))?;
    a.checked_sub(&b)
}
