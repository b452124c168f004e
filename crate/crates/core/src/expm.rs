//! Dense complex matrix exponential by scaling and squaring with Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005).

use ndarray::{Array2, Axis};

use crate::C64;

/// Largest dimension accepted by dense evaluation.
pub const MAX_DENSE_DIM: usize = 4096;

const THETA: [(usize, f64); 4] =
    [(3, 1.495585217958292e-2), (5, 2.53939833006323e-1), (7, 9.504178996162932e-1), (9, 2.097847961257068e0)];
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] =
    [17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn norm1(a: &Array2<C64>) -> f64 {
    a.axis_iter(Axis(1)).map(|col| col.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn identity(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, C64::new(1.0, 0.0))
}

fn scaled_sum(terms: &[(f64, &Array2<C64>)]) -> Array2<C64> {
    let mut out = Array2::zeros(terms[0].1.raw_dim());
    for &(c, m) in terms {
        out.scaled_add(C64::from(c), m);
    }
    out
}

/// `exp(a)` for a square complex matrix.
///
/// # Panics
/// If `a` is not square.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }
    let id = identity(n);
    let norm = norm1(a);

    for (m, theta) in THETA {
        if norm <= theta {
            let (u, v) = pade_low(a, &id, m);
            return solve_pade(&u, &v);
        }
    }

    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let scaled = a.mapv(|v| v * 0.5f64.powi(s));
    let (u, v) = pade13(&scaled, &id);
    let mut r = solve_pade(&u, &v);
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

fn pade_low(a: &Array2<C64>, id: &Array2<C64>, m: usize) -> (Array2<C64>, Array2<C64>) {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => unreachable!("unsupported Padé degree {m}"),
    };
    let a2 = a.dot(a);
    // powers[k] = A^(2k)
    let mut powers = vec![id.clone(), a2.clone()];
    for _ in 2..=m / 2 {
        let next = powers.last().expect("non-empty").dot(&a2);
        powers.push(next);
    }
    let odd: Vec<(f64, &Array2<C64>)> = (0..=m / 2).map(|k| (b[2 * k + 1], &powers[k])).collect();
    let even: Vec<(f64, &Array2<C64>)> = (0..=m / 2).map(|k| (b[2 * k], &powers[k])).collect();
    let u = a.dot(&scaled_sum(&odd));
    let v = scaled_sum(&even);
    (u, v)
}

fn pade13(a: &Array2<C64>, id: &Array2<C64>) -> (Array2<C64>, Array2<C64>) {
    let b = &B13;
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let inner_u = scaled_sum(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let tail_u = scaled_sum(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], id)]);
    let u = a.dot(&(a6.dot(&inner_u) + tail_u));
    let inner_v = scaled_sum(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let tail_v = scaled_sum(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], id)]);
    let v = a6.dot(&inner_v) + tail_v;
    (u, v)
}

/// Solves `(V − U) X = V + U`.
fn solve_pade(u: &Array2<C64>, v: &Array2<C64>) -> Array2<C64> {
    let lhs = v - u;
    let rhs = v + u;
    lu_solve(lhs, rhs)
}

/// Solves `A X = B` by LU factorization with partial pivoting.
pub fn lu_solve(mut a: Array2<C64>, mut b: Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.nrows());
    let m = b.ncols();
    let a_s = a.as_slice_mut().expect("standard layout");
    let b_s = b.as_slice_mut().expect("standard layout");

    for k in 0..n {
        let pivot =
            (k..n).max_by(|&i, &j| a_s[i * n + k].norm().total_cmp(&a_s[j * n + k].norm())).expect("non-empty range");
        if pivot != k {
            for c in 0..n {
                a_s.swap(k * n + c, pivot * n + c);
            }
            for c in 0..m {
                b_s.swap(k * m + c, pivot * m + c);
            }
        }
        let inv = a_s[k * n + k].inv();
        let (head, tail) = a_s.split_at_mut((k + 1) * n);
        let row_k = &head[k * n..];
        let (bhead, btail) = b_s.split_at_mut((k + 1) * m);
        let brow_k = &bhead[k * m..];
        for (row_i, brow_i) in tail.chunks_exact_mut(n).zip(btail.chunks_exact_mut(m)) {
            let l = row_i[k] * inv;
            if l == C64::new(0.0, 0.0) {
                continue;
            }
            row_i[k] = C64::new(0.0, 0.0);
            for (x, y) in row_i[k + 1..].iter_mut().zip(&row_k[k + 1..]) {
                *x -= l * y;
            }
            for (x, y) in brow_i.iter_mut().zip(brow_k) {
                *x -= l * y;
            }
        }
    }
    // back substitution
    for k in (0..n).rev() {
        let inv = a_s[k * n + k].inv();
        let (bhead, btail) = b_s.split_at_mut((k + 1) * m);
        let brow_k = &mut bhead[k * m..];
        for (j, brow_j) in btail.chunks_exact(m).enumerate() {
            let coeff = a_s[k * n + k + 1 + j];
            if coeff == C64::new(0.0, 0.0) {
                continue;
            }
            for (x, y) in brow_k.iter_mut().zip(brow_j) {
                *x -= coeff * y;
            }
        }
        for x in brow_k.iter_mut() {
            *x *= inv;
        }
    }
    b
}
