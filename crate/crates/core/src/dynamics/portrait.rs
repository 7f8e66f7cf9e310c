use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::{xi, Complex};

/// ξ sampled at one grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitNode {
    pub i: usize,
    pub j: usize,
    pub s: Complex,
    pub value: Complex,
    pub arg: f64,
    pub modulus: f64,
}

/// Evaluates ξ on an `nx × ny` grid spanning both ranges inclusively.
/// Nodes are returned row by row (`j` over the imaginary axis outermost).
pub fn phase_portrait_grid(
    re_range: (f64, f64),
    im_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<Vec<PortraitNode>> {
    if nx < 2 || ny < 2 {
        return Err(Error::Config(format!("grid needs at least 2x2 nodes, got {nx}x{ny}")));
    }
    let coord = |range: (f64, f64), k: usize, n: usize| range.0 + (range.1 - range.0) * k as f64 / (n - 1) as f64;
    Ok((0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (j, i) = (idx / nx, idx % nx);
            let s = Complex::new(coord(re_range, i, nx), coord(im_range, j, ny));
            let value = xi(s);
            PortraitNode { i, j, s, value, arg: value.arg(), modulus: value.norm() }
        })
        .collect())
}

pub fn portrait_to_csv(nodes: &[PortraitNode]) -> String {
    let mut out = String::from("i,j,re,im,xi_re,xi_im,arg,modulus\n");
    for n in nodes {
        let _ = writeln!(
            out,
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            n.i, n.j, n.s.re, n.s.im, n.value.re, n.value.im, n.arg, n.modulus
        );
    }
    out
}
