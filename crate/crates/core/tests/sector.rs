use ndarray::Array1;
use qdf_core::sector::*;
use qdf_core::C64;

#[test]
fn dimensions() {
    assert_eq!(SectorLayout::Full.dim(4), 1024);
    assert_eq!(SectorLayout::SpinReduced.dim(4), 768);
    assert_eq!(SectorLayout::SpinReduced.dim(2), 48);
}

#[test]
fn flat_layout_is_sector_then_row_then_column() {
    let mut dm = SectorDm::zeros(2, SectorLayout::Full);
    dm.sector_mut(2)[[1, 3]] = C64::new(7.0, 0.0);
    assert_eq!(dm.flat()[2 * 16 + 4 + 3], C64::new(7.0, 0.0));
}

#[test]
fn reduce_and_expand() {
    let mut dm = SectorDm::zeros(2, SectorLayout::Full);
    dm.sector_mut(0)[[0, 0]] = C64::from(0.25);
    dm.sector_mut(1)[[1, 1]] = C64::from(0.25);
    dm.sector_mut(2)[[1, 1]] = C64::from(0.25);
    dm.sector_mut(3)[[3, 3]] = C64::from(0.25);
    let red = dm.spin_reduced();
    assert_eq!(red.sector(1)[[1, 1]], C64::from(0.5));
    assert_eq!(red.total_trace(), C64::from(1.0));
    assert_eq!(red.spin_expanded(), dm);
    assert!(SectorDm::from_flat(2, SectorLayout::Full, Array1::zeros(48)).is_none());
}
