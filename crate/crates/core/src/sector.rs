//! Flat storage for the sector-resolved density matrix.
//!
//! Layout: sector-major, then `z1`-major, `z2`-minor. The flat index of
//! element `(sector k, z1, z2)` is `k·D² + z1·D + z2` with `D = 2^N`.

use ndarray::{Array1, Array2, ArrayView2, ArrayViewMut2};

use crate::C64;

/// Island occupation sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    /// Empty island.
    A,
    /// One electron, spin up.
    BUp,
    /// One electron, spin down.
    BDown,
    /// One electron, spin-summed (`b↑ + b↓`).
    B,
    /// Doubly occupied island.
    C,
}

impl Sector {
    pub fn name(self) -> &'static str {
        match self {
            Sector::A => "a",
            Sector::BUp => "bu",
            Sector::BDown => "bd",
            Sector::B => "b",
            Sector::C => "c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectorLayout {
    /// Four sectors `a, b↑, b↓, c`.
    Full,
    /// Three sectors `a, b = b↑ + b↓, c`.
    SpinReduced,
}

impl SectorLayout {
    pub fn sectors(self) -> &'static [Sector] {
        match self {
            SectorLayout::Full => &[Sector::A, Sector::BUp, Sector::BDown, Sector::C],
            SectorLayout::SpinReduced => &[Sector::A, Sector::B, Sector::C],
        }
    }

    pub fn n_sectors(self) -> usize {
        self.sectors().len()
    }

    /// Flat dimension for `n_qubits`.
    pub fn dim(self, n_qubits: usize) -> usize {
        self.n_sectors() << (2 * n_qubits)
    }
}

/// Sector-resolved density matrix stored as one flat complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorDm {
    n_qubits: usize,
    layout: SectorLayout,
    data: Array1<C64>,
}

impl SectorDm {
    pub fn zeros(n_qubits: usize, layout: SectorLayout) -> Self {
        Self { n_qubits, layout, data: Array1::zeros(layout.dim(n_qubits)) }
    }

    /// Wraps a flat vector; returns `None` on a length mismatch.
    pub fn from_flat(n_qubits: usize, layout: SectorLayout, data: Array1<C64>) -> Option<Self> {
        (data.len() == layout.dim(n_qubits)).then_some(Self { n_qubits, layout, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layout(&self) -> SectorLayout {
        self.layout
    }

    /// Qubit Hilbert-space dimension `2^N`.
    pub fn qubit_dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn flat(&self) -> &Array1<C64> {
        &self.data
    }

    pub fn flat_mut(&mut self) -> &mut Array1<C64> {
        &mut self.data
    }

    pub fn into_flat(self) -> Array1<C64> {
        self.data
    }

    pub fn sector(&self, k: usize) -> ArrayView2<'_, C64> {
        let d = self.qubit_dim();
        let block = &self.data.as_slice().expect("contiguous")[k * d * d..(k + 1) * d * d];
        ArrayView2::from_shape((d, d), block).expect("square block")
    }

    pub fn sector_mut(&mut self, k: usize) -> ArrayViewMut2<'_, C64> {
        let d = self.qubit_dim();
        let block = &mut self.data.as_slice_mut().expect("contiguous")[k * d * d..(k + 1) * d * d];
        ArrayViewMut2::from_shape((d, d), block).expect("square block")
    }

    /// Trace of each sector.
    pub fn sector_traces(&self) -> Vec<C64> {
        (0..self.layout.n_sectors()).map(|k| self.sector(k).diag().sum()).collect()
    }

    /// Σ over sectors of Tr ρ^k.
    pub fn total_trace(&self) -> C64 {
        self.sector_traces().into_iter().sum()
    }

    /// Largest |ρ^k_{z1z2} − conj(ρ^k_{z2z1})| over all sectors.
    pub fn hermiticity_defect(&self) -> f64 {
        (0..self.layout.n_sectors())
            .map(|k| {
                let m = self.sector(k);
                m.indexed_iter().map(|((i, j), v)| (v - m[[j, i]].conj()).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Smallest real part on any sector diagonal.
    pub fn min_diagonal(&self) -> f64 {
        (0..self.layout.n_sectors())
            .flat_map(|k| self.sector(k).diag().iter().map(|v| v.re).collect::<Vec<_>>())
            .fold(f64::INFINITY, f64::min)
    }

    /// Projects a full four-sector state onto `(a, b↑ + b↓, c)`.
    /// Reduced states are returned unchanged.
    pub fn spin_reduced(&self) -> SectorDm {
        match self.layout {
            SectorLayout::SpinReduced => self.clone(),
            SectorLayout::Full => {
                let mut out = SectorDm::zeros(self.n_qubits, SectorLayout::SpinReduced);
                out.sector_mut(0).assign(&self.sector(0));
                out.sector_mut(1).assign(&(&self.sector(1) + &self.sector(2)));
                out.sector_mut(2).assign(&self.sector(3));
                out
            }
        }
    }

    /// Embeds a reduced state into the full layout with `b↑ = b↓ = b/2`.
    /// Full states are returned unchanged.
    pub fn spin_expanded(&self) -> SectorDm {
        match self.layout {
            SectorLayout::Full => self.clone(),
            SectorLayout::SpinReduced => {
                let mut out = SectorDm::zeros(self.n_qubits, SectorLayout::Full);
                let half: Array2<C64> = self.sector(1).mapv(|v| v * 0.5);
                out.sector_mut(0).assign(&self.sector(0));
                out.sector_mut(1).assign(&half);
                out.sector_mut(2).assign(&half);
                out.sector_mut(3).assign(&self.sector(2));
                out
            }
        }
    }
}
