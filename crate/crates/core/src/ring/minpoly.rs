//! Minimal polynomial of 2cos(π/k).
//!
//! The primitive 2k-th roots of unity z satisfy Φ_2k(z) = 0, and λ = z + 1/z for
//! z = exp(iπ/k). Φ_2k is palindromic of even degree 2m, so z^{-m}Φ_2k(z) is a
//! polynomial in x = z + 1/z obtained through the Chebyshev-type relation
//! C_{j+1}(x) = x·C_j(x) − C_{j−1}(x) with z^j + z^{−j} = C_j(x).

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients are stored lowest degree first.
pub(crate) type Poly = Vec<BigInt>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division by a monic polynomial; panics if the remainder is nonzero.
fn div_exact_monic(num: &Poly, den: &Poly) -> Poly {
    let mut r = num.clone();
    let dd = den.len() - 1;
    if r.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            r[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    assert!(r.iter().all(|c| c.is_zero()), "inexact cyclotomic division");
    q
}

/// The n-th cyclotomic polynomial.
pub(crate) fn cyclotomic(n: u32) -> Poly {
    let mut p: Poly = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = div_exact_monic(&p, &cyclotomic(d));
        }
    }
    trim(&mut p);
    p
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut r = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        r[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        r[i] -= c;
    }
    r
}

fn poly_shift_x(a: &Poly) -> Poly {
    let mut r = vec![BigInt::zero()];
    r.extend(a.iter().cloned());
    r
}

/// Monic integer minimal polynomial of 2cos(π/k), lowest degree first.
pub(crate) fn lambda_min_poly(k: u32) -> Poly {
    let phi = cyclotomic(2 * k);
    let deg = phi.len() - 1;
    debug_assert!(deg.is_multiple_of(2));
    let m = deg / 2;
    for i in 0..=deg {
        debug_assert_eq!(phi[i], phi[deg - i], "cyclotomic polynomial not palindromic");
    }
    let mut cheb: Vec<Poly> = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    while cheb.len() <= m {
        let n = cheb.len();
        let next = poly_sub(&poly_shift_x(&cheb[n - 1]), &cheb[n - 2]);
        cheb.push(next);
    }
    let mut out: Poly = vec![BigInt::zero(); m + 1];
    out[0] += &phi[m];
    for j in 1..=m {
        let c = &phi[m + j];
        for (i, cj) in cheb[j].iter().enumerate() {
            out[i] += c * cj;
        }
    }
    trim(&mut out);
    out
}
