use crate::error::{Error, Result};
use crate::scalar::Real;

/// First derivative on a non-uniform grid: three-point Lagrange stencil in
/// the interior, one-sided three-point stencils at both ends. Second order,
/// exact for quadratics.
pub fn derivative<T: Real>(nodes: &[T], f: &[T]) -> Result<Vec<T>> {
    let n = nodes.len();
    if f.len() != n {
        return Err(Error::invalid(format!(
            "derivative: {} samples on {n} nodes",
            f.len()
        )));
    }
    if n < 3 {
        return Err(Error::invalid("derivative needs at least 3 nodes"));
    }
    let mut d = vec![T::zero(); n];
    let two = T::two();
    for i in 1..n - 1 {
        let hm = nodes[i] - nodes[i - 1];
        let hp = nodes[i + 1] - nodes[i];
        d[i] = -hp / (hm * (hm + hp)) * f[i - 1]
            + (hp - hm) / (hm * hp) * f[i]
            + hm / (hp * (hm + hp)) * f[i + 1];
    }
    let (h1, h2) = (nodes[1] - nodes[0], nodes[2] - nodes[1]);
    d[0] = -(two * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1]
        - h1 / (h2 * (h1 + h2)) * f[2];
    let (h1, h2) = (nodes[n - 1] - nodes[n - 2], nodes[n - 2] - nodes[n - 3]);
    d[n - 1] = (two * h1 + h2) / (h1 * (h1 + h2)) * f[n - 1] - (h1 + h2) / (h1 * h2) * f[n - 2]
        + h1 / (h2 * (h1 + h2)) * f[n - 3];
    Ok(d)
}
