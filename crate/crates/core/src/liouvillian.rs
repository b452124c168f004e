//! Sparse generator of the sector-resolved master equation.
//!
//! For every configuration pair `(z1, z2)` and detector sector the generator
//! encodes
//!
//! ```text
//! dρᵃ/dt  = (i[J₂−J₁] − [Γ_L¹+Γ_L²]) ρᵃ − iΣⱼ Ωⱼ(ρᵃ_{gⱼz1,z2} − ρᵃ_{z1,gⱼz2}) + √(Γ_R¹Γ_R²)(ρ^{b↑}+ρ^{b↓})
//! dρ^{bs}/dt = (i[J₂−J₁] − [Γ_L'¹+Γ_L'²+Γ_R¹+Γ_R²]/2) ρ^{bs} − iΣⱼ Ωⱼ(…) + √(Γ_L¹Γ_L²) ρᵃ + √(Γ_R'¹Γ_R'²) ρᶜ
//! dρᶜ/dt  = (i[J₂−J₁] − [Γ_R'¹+Γ_R'²]) ρᶜ − iΣⱼ Ωⱼ(…) + √(Γ_L'¹Γ_L'²)(ρ^{b↑}+ρ^{b↓})
//! ```
//!
//! where superscripts 1, 2 select the rates of `z1`, `z2` and `gⱼ` flips
//! qubit `j`. The flat index layout is the one documented in [`crate::sector`].

use std::fmt::Write as _;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::model::{config_energy, ModelParams, QubitConfig};
use crate::rates::RateTable;
use crate::sector::{SectorDm, SectorLayout};
use crate::C64;

/// Time-independent generator `L` with `d(vec ρ)/dt = L · vec ρ`, stored in
/// compressed sparse rows with columns sorted within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    n_qubits: usize,
    layout: SectorLayout,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<C64>,
    kernel: Kernel,
}

struct Triplets(Vec<(u32, u32, C64)>);

impl Triplets {
    fn push(&mut self, row: usize, col: usize, v: C64) {
        if v != C64::new(0.0, 0.0) {
            self.0.push((row as u32, col as u32, v));
        }
    }
}

impl Generator {
    /// Assembles the full four-sector generator (`a, b↑, b↓, c`).
    pub fn assemble(p: &ModelParams) -> Result<Generator> {
        let table = RateTable::new(p)?;
        let n = p.n_qubits;
        let d = p.dim();
        let energy: Vec<f64> = QubitConfig::all(n).map(|z| config_energy(z, p)).collect();
        let layout = SectorLayout::Full;
        let idx = |k: usize, z1: usize, z2: usize| (k * d + z1) * d + z2;
        let (sa, sbu, sbd, sc) = (0, 1, 2, 3);

        let mut t = Triplets(Vec::with_capacity(layout.dim(n) * (2 * n + 3)));
        for z1 in 0..d {
            let r1 = table.get(z1);
            for z2 in 0..d {
                let r2 = table.get(z2);
                let phase = C64::new(0.0, energy[z2] - energy[z1]);

                let loss_a = r1.gamma_l + r2.gamma_l;
                let loss_b = 0.5 * (r1.gamma_l_primed + r2.gamma_l_primed + r1.gamma_r + r2.gamma_r);
                let loss_c = r1.gamma_r_primed + r2.gamma_r_primed;
                let b_to_a = (r1.gamma_r * r2.gamma_r).sqrt();
                let a_to_b = (r1.gamma_l * r2.gamma_l).sqrt();
                let c_to_b = (r1.gamma_r_primed * r2.gamma_r_primed).sqrt();
                let b_to_c = (r1.gamma_l_primed * r2.gamma_l_primed).sqrt();

                t.push(idx(sa, z1, z2), idx(sa, z1, z2), phase - loss_a);
                t.push(idx(sa, z1, z2), idx(sbu, z1, z2), b_to_a.into());
                t.push(idx(sa, z1, z2), idx(sbd, z1, z2), b_to_a.into());
                for sb in [sbu, sbd] {
                    t.push(idx(sb, z1, z2), idx(sb, z1, z2), phase - loss_b);
                    t.push(idx(sb, z1, z2), idx(sa, z1, z2), a_to_b.into());
                    t.push(idx(sb, z1, z2), idx(sc, z1, z2), c_to_b.into());
                }
                t.push(idx(sc, z1, z2), idx(sc, z1, z2), phase - loss_c);
                t.push(idx(sc, z1, z2), idx(sbu, z1, z2), b_to_c.into());
                t.push(idx(sc, z1, z2), idx(sbd, z1, z2), b_to_c.into());

                for k in 0..layout.n_sectors() {
                    for (j, &omega) in p.omega.iter().enumerate() {
                        let flip = 1 << j;
                        t.push(idx(k, z1, z2), idx(k, z1 ^ flip, z2), C64::new(0.0, -omega));
                        t.push(idx(k, z1, z2), idx(k, z1, z2 ^ flip), C64::new(0.0, omega));
                    }
                }
            }
        }
        Ok(Self::from_triplets(n, layout, t))
    }

    /// Assembles the three-sector generator directly.
    pub fn assemble_reduced(p: &ModelParams) -> Result<Generator> {
        Ok(Self::assemble(p)?.reduce_spin_symmetric())
    }

    fn from_triplets(n_qubits: usize, layout: SectorLayout, mut t: Triplets) -> Generator {
        let dim = layout.dim(n_qubits);
        t.0.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols: Vec<u32> = Vec::with_capacity(t.0.len());
        let mut vals: Vec<C64> = Vec::with_capacity(t.0.len());
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in t.0 {
            if last == Some((r, c)) {
                *vals.last_mut().expect("merged entry") += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r as usize + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        let kernel = Kernel::build(n_qubits, &row_ptr, &cols, &vals);
        Generator { n_qubits, layout, row_ptr, cols, vals, kernel }
    }

    /// Projects onto `(a, b = b↑ + b↓, c)`.
    ///
    /// Computes `P·L·E` where `P` sums the two one-electron sectors and `E`
    /// splits `b` equally into them. The `a` and `c` rows only see
    /// `b↑ + b↓` and the `b↑`, `b↓` rows are identical, so `P·L = L_red·P`
    /// holds exactly and the reduced dynamics equals the projected one.
    /// A generator that is already reduced is returned unchanged.
    pub fn reduce_spin_symmetric(&self) -> Generator {
        if self.layout == SectorLayout::SpinReduced {
            return self.clone();
        }
        let block = 1usize << (2 * self.n_qubits);
        let sector_map = [0usize, 1, 1, 2];
        let weight = [1.0, 0.5, 0.5, 1.0];
        let mut t = Triplets(Vec::with_capacity(self.vals.len()));
        for (r, c, v) in self.entries() {
            let (rk, ro) = (r / block, r % block);
            let (ck, co) = (c / block, c % block);
            t.push(sector_map[rk] * block + ro, sector_map[ck] * block + co, v * weight[ck]);
        }
        Self::from_triplets(self.n_qubits, SectorLayout::SpinReduced, t)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layout(&self) -> SectorLayout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(row, col, value)` in row-major sorted order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim()).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k] as usize, self.vals[k]))
        })
    }

    /// Entry `(row, col)`, zero when not stored.
    pub fn get(&self, row: usize, col: usize) -> C64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&(col as u32)) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// `(sector, z1, z2)` of a flat index.
    pub fn unflatten(&self, index: usize) -> (usize, usize, usize) {
        let d = 1usize << self.n_qubits;
        (index / (d * d), index / d % d, index % d)
    }

    pub fn flatten(&self, sector: usize, z1: usize, z2: usize) -> usize {
        let d = 1usize << self.n_qubits;
        (sector * d + z1) * d + z2
    }

    /// `out = L · v`.
    pub fn apply(&self, v: &[C64], out: &mut [C64]) -> Result<()> {
        let dim = self.dim();
        if v.len() != dim {
            return Err(Error::Dimension { expected: dim, got: v.len() });
        }
        if out.len() != dim {
            return Err(Error::Dimension { expected: dim, got: out.len() });
        }
        self.apply_unchecked(v, out);
        Ok(())
    }

    /// `L · ρ` on a sector state.
    pub fn apply_dm(&self, rho: &SectorDm) -> Result<SectorDm> {
        self.check_state(rho)?;
        let mut out = SectorDm::zeros(self.n_qubits, self.layout);
        self.apply_unchecked(
            rho.flat().as_slice().expect("contiguous"),
            out.flat_mut().as_slice_mut().expect("contiguous"),
        );
        Ok(out)
    }

    pub(crate) fn check_state(&self, rho: &SectorDm) -> Result<()> {
        if rho.n_qubits() != self.n_qubits {
            return Err(Error::Dimension { expected: self.dim(), got: rho.flat().len() });
        }
        if rho.layout() != self.layout {
            return Err(Error::Layout);
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn apply_unchecked(&self, v: &[C64], out: &mut [C64]) {
        self.kernel.apply(v, out);
    }

    /// Whether `apply` runs the vectorized structured kernel (true for
    /// every assembled generator) rather than the generic sparse one.
    pub fn is_structured(&self) -> bool {
        self.kernel.is_structured()
    }

    /// Copy that always applies through the generic sparse kernel.
    pub fn with_sparse_kernel(&self) -> Generator {
        Generator { kernel: Kernel::sparse(&self.row_ptr, &self.cols, &self.vals), ..self.clone() }
    }

    pub fn to_dense(&self) -> Array2<C64> {
        let dim = self.dim();
        let mut m = Array2::zeros((dim, dim));
        for (r, c, v) in self.entries() {
            m[[r, c]] += v;
        }
        m
    }

    /// Weight of each sector in the trace functional `T(v)`. In the reduced
    /// layout `b` already holds `b↑ + b↓`, so every weight is one.
    fn trace_rows(&self) -> impl Iterator<Item = usize> + '_ {
        let d = 1usize << self.n_qubits;
        (0..self.layout.n_sectors()).flat_map(move |k| (0..d).map(move |z| self.flatten(k, z, z)))
    }

    /// `max_col |Σ_{trace rows} L[row, col]|`; zero for a trace-preserving
    /// generator.
    pub fn trace_defect(&self) -> f64 {
        let mut sums = vec![C64::new(0.0, 0.0); self.dim()];
        for r in self.trace_rows() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                sums[self.cols[k] as usize] += self.vals[k];
            }
        }
        sums.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// `max |L[(k,z1,z2),(m,w1,w2)] − conj L[(k,z2,z1),(m,w2,w1)]|`, the
    /// condition for mapping hermitian sector stacks to hermitian ones.
    pub fn conjugation_defect(&self) -> f64 {
        self.entries()
            .map(|(r, c, v)| {
                let (k, z1, z2) = self.unflatten(r);
                let (m, w1, w2) = self.unflatten(c);
                let mirror = self.get(self.flatten(k, z2, z1), self.flatten(m, w2, w1));
                (v - mirror.conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Copy with stored entry `k` (row-major order) shifted by `delta`.
    pub fn with_perturbed_entry(&self, k: usize, delta: C64) -> Generator {
        let mut g = self.clone();
        g.vals[k] += delta;
        g.kernel = Kernel::build(g.n_qubits, &g.row_ptr, &g.cols, &g.vals);
        g
    }

    /// Text dump, one line per stored entry:
    /// `sector,z1,z2 <- sector,w1,w2 : re,im`, sorted lexicographically.
    /// Configuration indices are zero-padded so the textual order matches
    /// the numeric one.
    pub fn dump(&self) -> String {
        let d = 1usize << self.n_qubits;
        let width = (d - 1).to_string().len();
        let names = self.layout.sectors();
        let mut lines: Vec<String> = self
            .entries()
            .map(|(r, c, v)| {
                let (k, z1, z2) = self.unflatten(r);
                let (m, w1, w2) = self.unflatten(c);
                format!(
                    "{},{z1:0width$},{z2:0width$} <- {},{w1:0width$},{w2:0width$} : {},{}",
                    names[k].name(),
                    names[m].name(),
                    fmt_float(v.re),
                    fmt_float(v.im),
                )
            })
            .collect();
        lines.sort();
        let mut out = String::with_capacity(lines.len() * 48);
        for line in lines {
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

fn fmt_float(x: f64) -> String {
    // 12 significant digits; normalize −0.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}
