#![allow(dead_code)]

use homnov_core::fixtures::truncated_polynomials;
use homnov_core::{Algebra, Field, LinearOperator, Scalar, Vector};

pub const Q: Field = Field::Rational;

pub fn q(v: i64) -> Scalar {
    Scalar::from_i64(Q, v)
}

/// Derivation of `F[t]/(t^n)` with `D(t) = sum_k a[k-1] t^k`, `k >= 1`.
pub fn polynomial_derivation(n: usize, a: &[i64]) -> LinearOperator {
    let t = truncated_polynomials(Q, n);
    let dt = poly(n, &[&[0][..], a].concat());
    // D(t^k) = k t^(k-1) D(t)
    let images: Vec<Vector> = (0..n)
        .map(|k| {
            if k == 0 {
                Vector::zero(Q, n)
            } else {
                t.multiply(&poly_power(&t, n, k - 1), &dt).unwrap().scale(&q(k as i64))
            }
        })
        .collect();
    LinearOperator::from_images(Q, &images)
}

/// Automorphism of `F[t]/(t^n)` with `t -> b[0] t + b[1] t^2 + ...`.
pub fn polynomial_automorphism(n: usize, b: &[i64]) -> LinearOperator {
    let t = truncated_polynomials(Q, n);
    let image_t = poly(n, &[&[0][..], b].concat());
    let mut images = Vec::with_capacity(n);
    let mut acc = Vector::basis(Q, n, 0);
    for _ in 0..n {
        images.push(acc.clone());
        acc = t.multiply(&acc, &image_t).unwrap();
    }
    LinearOperator::from_images(Q, &images)
}

pub fn poly(n: usize, coeffs: &[i64]) -> Vector {
    let mut v = vec![0i64; n];
    for (i, c) in coeffs.iter().enumerate().take(n) {
        v[i] = *c;
    }
    Vector::from_i64s(Q, &v)
}

fn poly_power(t: &Algebra, n: usize, k: usize) -> Vector {
    let mut acc = Vector::basis(Q, n, 0);
    for _ in 0..k {
        acc = t.multiply(&acc, &Vector::basis(Q, n, 1.min(n - 1))).unwrap();
    }
    acc
}

/// Every product tensor of dimension `n` over `GF(p)`, in lexicographic order.
pub fn all_tensors(field: Field, n: usize) -> impl Iterator<Item = Algebra> {
    let p = field.characteristic() as u64;
    let len = n * n * n;
    let total = p.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut digits = vec![0i64; len];
        for d in digits.iter_mut().rev() {
            *d = (code % p) as i64;
            code /= p;
        }
        Algebra::from_fn(field, n, |i, j, k| Scalar::from_i64(field, digits[(i * n + j) * n + k]))
    })
}
