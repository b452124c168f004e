//! Matrix–vector kernels behind [`Generator::apply`](crate::Generator::apply).
//!
//! Every generator keeps its exact CSR entry list. When the entries have the
//! shape produced by assembly, a row kernel over contiguous memory is used.
//! It needs a per-entry diagonal, real inter-sector links at fixed `(z1, z2)`
//! and one imaginary flip constant per qubit and side. Anything else, such as
//! a fault-injected entry, falls back to the sparse kernel.

use crate::model::MAX_QUBITS;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Kernel {
    Sparse(SplitCsr),
    Structured(Structured),
}

impl Kernel {
    pub(crate) fn build(n_qubits: usize, row_ptr: &[usize], cols: &[u32], vals: &[C64]) -> Self {
        match Structured::detect(n_qubits, row_ptr, cols, vals) {
            Some(s) => Kernel::Structured(s),
            None => Kernel::Sparse(SplitCsr::new(row_ptr, cols, vals)),
        }
    }

    pub(crate) fn sparse(row_ptr: &[usize], cols: &[u32], vals: &[C64]) -> Self {
        Kernel::Sparse(SplitCsr::new(row_ptr, cols, vals))
    }

    pub(crate) fn is_structured(&self) -> bool {
        matches!(self, Kernel::Structured(_))
    }

    /// `out = L · v`; lengths are checked by the caller.
    #[inline]
    pub(crate) fn apply(&self, v: &[C64], out: &mut [C64]) {
        match self {
            Kernel::Sparse(k) => k.apply(v, out),
            Kernel::Structured(k) => k.apply(v, out),
        }
    }
}

/// The generator split as `L = R + iI` with real sparse `R` and `I`.
/// Rate terms are real and drive terms imaginary, so each stored complex
/// entry usually lands in only one half and costs half a complex product.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct SplitCsr {
    re: RealCsr,
    im: RealCsr,
    /// One past the largest column index.
    col_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
struct RealCsr {
    row_ptr: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SplitCsr {
    fn new(row_ptr: &[usize], cols: &[u32], vals: &[C64]) -> Self {
        let mut re = RealCsr { row_ptr: vec![0], ..Default::default() };
        let mut im = RealCsr { row_ptr: vec![0], ..Default::default() };
        for w in row_ptr.windows(2) {
            for k in w[0]..w[1] {
                if vals[k].re != 0.0 {
                    re.cols.push(cols[k]);
                    re.vals.push(vals[k].re);
                }
                if vals[k].im != 0.0 {
                    im.cols.push(cols[k]);
                    im.vals.push(vals[k].im);
                }
            }
            re.row_ptr.push(re.cols.len() as u32);
            im.row_ptr.push(im.cols.len() as u32);
        }
        let col_bound = cols.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        Self { re, im, col_bound }
    }

    #[inline]
    fn apply(&self, v: &[C64], out: &mut [C64]) {
        let SplitCsr { re, im, col_bound } = self;
        assert!(out.len() + 1 == re.row_ptr.len() && out.len() + 1 == im.row_ptr.len());
        assert!(v.len() == out.len() && *col_bound <= v.len());
        for (row, o) in out.iter_mut().enumerate() {
            let (mut acc_re, mut acc_im) = (0.0, 0.0);
            // SAFETY: row_ptr is monotone and bounded by cols.len(); every
            // column index is < col_bound <= v.len().
            unsafe {
                for k in *re.row_ptr.get_unchecked(row) as usize..*re.row_ptr.get_unchecked(row + 1) as usize {
                    let a = *re.vals.get_unchecked(k);
                    let x = *v.get_unchecked(*re.cols.get_unchecked(k) as usize);
                    acc_re += a * x.re;
                    acc_im += a * x.im;
                }
                for k in *im.row_ptr.get_unchecked(row) as usize..*im.row_ptr.get_unchecked(row + 1) as usize {
                    let b = *im.vals.get_unchecked(k);
                    let x = *v.get_unchecked(*im.cols.get_unchecked(k) as usize);
                    acc_re -= b * x.im;
                    acc_im += b * x.re;
                }
            }
            *o = C64::new(acc_re, acc_im);
        }
    }
}

/// `(Lv)[k,z1,z2] = D·v[k,z1,z2] + Σ_src g·v[src,z1,z2]
///                  − i Σ_j (a_j v[k, z1⊕2ʲ, z2] − b_j v[k, z1, z2⊕2ʲ])`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Structured {
    d: usize,
    n_sectors: usize,
    diag: Vec<C64>,
    /// `links[dst]`: `(src, coefficient per (z1, z2))`.
    links: Vec<Vec<(usize, Vec<f64>)>>,
    row_flip: Vec<f64>,
    col_flip: Vec<f64>,
}

impl Structured {
    /// Recovers the structured form, or `None` if any entry does not fit it
    /// exactly.
    fn detect(n_qubits: usize, row_ptr: &[usize], cols: &[u32], vals: &[C64]) -> Option<Self> {
        let d = 1usize << n_qubits;
        let block = d * d;
        let dim = row_ptr.len() - 1;
        if n_qubits > MAX_QUBITS || !dim.is_multiple_of(block) {
            return None;
        }
        let n_sectors = dim / block;
        let mut diag = vec![C64::new(0.0, 0.0); dim];
        let mut link_coef: Vec<Option<Vec<f64>>> = vec![None; n_sectors * n_sectors];
        let mut row_flip: Vec<Option<f64>> = vec![None; n_qubits];
        let mut col_flip: Vec<Option<f64>> = vec![None; n_qubits];
        let (mut row_count, mut col_count) = (vec![0usize; n_qubits], vec![0usize; n_qubits]);

        let set = |slot: &mut Option<f64>, x: f64| match *slot {
            None => {
                *slot = Some(x);
                true
            }
            Some(y) => y == x,
        };
        for r in 0..dim {
            let (k, z) = (r / block, r % block);
            for e in row_ptr[r]..row_ptr[r + 1] {
                let (c, v) = (cols[e] as usize, vals[e]);
                let (m, w) = (c / block, c % block);
                let (z1, z2, w1, w2) = (z / d, z % d, w / d, w % d);
                if c == r {
                    diag[r] = v;
                } else if w == z {
                    if v.im != 0.0 {
                        return None;
                    }
                    link_coef[k * n_sectors + m].get_or_insert_with(|| vec![0.0; block])[z] = v.re;
                } else if m == k && w2 == z2 && (w1 ^ z1).is_power_of_two() {
                    let j = (w1 ^ z1).trailing_zeros() as usize;
                    if v.re != 0.0 || !set(&mut row_flip[j], -v.im) {
                        return None;
                    }
                    row_count[j] += 1;
                } else if m == k && w1 == z1 && (w2 ^ z2).is_power_of_two() {
                    let j = (w2 ^ z2).trailing_zeros() as usize;
                    if v.re != 0.0 || !set(&mut col_flip[j], v.im) {
                        return None;
                    }
                    col_count[j] += 1;
                } else {
                    return None;
                }
            }
        }
        // a flip constant must be present on every row, otherwise it is not
        // a constant
        let complete = |f: &[Option<f64>], n: &[usize]| f.iter().zip(n).all(|(x, &n)| x.is_none() || n == dim);
        if !complete(&row_flip, &row_count) || !complete(&col_flip, &col_count) {
            return None;
        }
        let mut links = vec![Vec::new(); n_sectors];
        for (i, coef) in link_coef.into_iter().enumerate() {
            if let Some(coef) = coef {
                links[i / n_sectors].push((i % n_sectors, coef));
            }
        }
        Some(Self {
            d,
            n_sectors,
            diag,
            links,
            row_flip: row_flip.into_iter().map(|x| x.unwrap_or(0.0)).collect(),
            col_flip: col_flip.into_iter().map(|x| x.unwrap_or(0.0)).collect(),
        })
    }

    fn apply(&self, v: &[C64], out: &mut [C64]) {
        #[cfg(target_arch = "x86_64")]
        {
            if std::arch::is_x86_feature_detected!("avx512f") {
                // SAFETY: the required CPU feature was detected at runtime.
                return unsafe { self.apply_avx512(v, out) };
            }
            if std::arch::is_x86_feature_detected!("avx2") {
                // SAFETY: as above.
                return unsafe { self.apply_avx2(v, out) };
            }
        }
        self.apply_portable(v, out)
    }

    // Same body compiled for wider vectors. No fused multiply-add is
    // requested anywhere, so every variant rounds identically.
    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx512f")]
    unsafe fn apply_avx512(&self, v: &[C64], out: &mut [C64]) {
        self.apply_portable(v, out)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn apply_avx2(&self, v: &[C64], out: &mut [C64]) {
        self.apply_portable(v, out)
    }

    /// Works a whole sector block at a time. Flipping qubit `j` on the row
    /// (column) index swaps adjacent runs of `2ʲ` rows (`2ʲ` entries), so
    /// every flip term is a long contiguous axpy.
    #[inline(always)]
    fn apply_portable(&self, v: &[C64], out: &mut [C64]) {
        match self.d {
            4 => self.apply_rows::<2, 8>(v, out),
            8 => self.apply_rows::<3, 16>(v, out),
            16 => self.apply_rows::<4, 32>(v, out),
            _ => self.apply_blocks(v, out),
        }
    }

    /// One configuration row (`W = 2·2ᴺ` floats) at a time, all flip terms
    /// accumulated in registers; with `N` fixed the column flips become
    /// constant permutations.
    #[inline(always)]
    fn apply_rows<const N: usize, const W: usize>(&self, v: &[C64], out: &mut [C64]) {
        let d = 1usize << N;
        let n = d * d;
        assert!(self.d == d && W == 2 * d && self.row_flip.len() == N && self.col_flip.len() == N);
        assert!(v.len() == self.n_sectors * n && out.len() == v.len());
        let vf = as_f64(v);
        let row = |k: usize, z1: usize| -> &[f64; W] {
            let start = 2 * (k * n + z1 * d);
            vf[start..start + W].try_into().expect("row of W floats")
        };
        for k in 0..self.n_sectors {
            for z1 in 0..d {
                let mut acc = [0.0f64; W];
                for j in 0..N {
                    let (a, src) = (self.row_flip[j], row(k, z1 ^ (1 << j)));
                    for i in 0..W {
                        acc[i] += a * src[i];
                    }
                }
                let vr = row(k, z1);
                for j in 0..N {
                    let (b, r) = (self.col_flip[j], 2 << j);
                    for i in 0..W {
                        acc[i] -= b * vr[i ^ r];
                    }
                }
                let o0 = k * n + z1 * d;
                let orow = &mut out[o0..o0 + d];
                for (t, (o, g)) in orow.iter_mut().zip(&self.diag[o0..o0 + d]).enumerate() {
                    let (xr, xi) = (vr[2 * t], vr[2 * t + 1]);
                    *o = C64::new(g.re * xr - g.im * xi + acc[2 * t + 1], g.re * xi + g.im * xr - acc[2 * t]);
                }
                for (src, coef) in &self.links[k] {
                    let s0 = src * n + z1 * d;
                    for ((o, x), g) in orow.iter_mut().zip(&v[s0..s0 + d]).zip(&coef[z1 * d..(z1 + 1) * d]) {
                        *o += x * g;
                    }
                }
            }
        }
    }

    #[inline(always)]
    fn apply_blocks(&self, v: &[C64], out: &mut [C64]) {
        let (d, n) = (self.d, self.d * self.d);
        assert!(v.len() == self.n_sectors * n && out.len() == v.len());
        let mut scratch = vec![0.0f64; 2 * n];
        for k in 0..self.n_sectors {
            let range = k * n..(k + 1) * n;
            let vk = &v[range.clone()];
            let vf = as_f64(vk);
            let s = &mut scratch[..];
            s.fill(0.0);
            for (j, &a) in self.row_flip.iter().enumerate() {
                if a != 0.0 {
                    swap_axpy(s, vf, a, (2 * d) << j);
                }
            }
            for (j, &b) in self.col_flip.iter().enumerate() {
                if b != 0.0 {
                    swap_axpy(s, vf, -b, 2 << j);
                }
            }
            let ok = &mut out[range];
            // ok = D·v − i·s
            for (((o, x), g), s) in ok.iter_mut().zip(vk).zip(&self.diag[k * n..(k + 1) * n]).zip(s.chunks_exact(2)) {
                *o = C64::new(g.re * x.re - g.im * x.im + s[1], g.re * x.im + g.im * x.re - s[0]);
            }
            for (src, coef) in &self.links[k] {
                for ((o, x), g) in ok.iter_mut().zip(&v[src * n..(src + 1) * n]).zip(coef) {
                    *o += x * g;
                }
            }
        }
    }
}

/// `s[i] += a·v[i ⊕ run]` for a power-of-two `run`: consecutive runs swap.
#[inline(always)]
fn swap_axpy(s: &mut [f64], v: &[f64], a: f64, run: usize) {
    if s.len().is_multiple_of(16) {
        // short runs as fixed in-register permutations
        match run {
            2 => return swap_axpy_short::<2>(s, v, a),
            4 => return swap_axpy_short::<4>(s, v, a),
            8 => return swap_axpy_short::<8>(s, v, a),
            _ => {}
        }
    }
    for (sc, vc) in s.chunks_exact_mut(2 * run).zip(v.chunks_exact(2 * run)) {
        let (s_lo, s_hi) = sc.split_at_mut(run);
        let (v_lo, v_hi) = vc.split_at(run);
        for (s, x) in s_lo.iter_mut().zip(v_hi) {
            *s += a * x;
        }
        for (s, x) in s_hi.iter_mut().zip(v_lo) {
            *s += a * x;
        }
    }
}

#[inline(always)]
fn swap_axpy_short<const RUN: usize>(s: &mut [f64], v: &[f64], a: f64) {
    for (sc, vc) in s.chunks_exact_mut(16).zip(v.chunks_exact(16)) {
        let vc: &[f64; 16] = vc.try_into().expect("chunk of 16");
        for (i, s) in sc.iter_mut().enumerate() {
            *s += a * vc[i ^ RUN];
        }
    }
}

fn as_f64(x: &[C64]) -> &[f64] {
    // SAFETY: Complex<f64> is #[repr(C)] { re, im }, so a slice of n of them
    // is 2n contiguous f64.
    unsafe { std::slice::from_raw_parts(x.as_ptr().cast::<f64>(), 2 * x.len()) }
}
