//! Exact linear algebra over prime fields and the rationals.

mod field;
mod matrix;

pub use field::{Field, Fp, Rationals};
pub use matrix::{Matrix, Rref, Solution, Solver};

/// `y += c * x` over F_p.
#[inline]
pub fn axpy(f: Fp, y: &mut [u32], c: u32, x: &[u32]) {
    if c == 0 {
        return;
    }
    for (a, b) in y.iter_mut().zip(x) {
        if *b != 0 {
            *a = f.addm(*a, f.mulm(c, *b));
        }
    }
}

pub fn is_zero_vec(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}
