//! AP grid and UE drop.

use rand::Rng;

use crate::error::{Result, SimError};
use crate::seeding::rng;

/// Height difference between AP and UE antennas in meters.
pub const HEIGHT_DIFF_M: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGeometry {
    pub aps: usize,
    pub antennas: usize,
    pub users: usize,
    pub area_side: f64,
    pub height_diff: f64,
    pub ap_positions: Vec<[f64; 2]>,
    pub ue_positions: Vec<[f64; 2]>,
}

impl NetworkGeometry {
    /// 3-D AP–UE distance in meters, height difference included.
    pub fn distance(&self, l: usize, k: usize) -> f64 {
        let [ax, ay] = self.ap_positions[l];
        let [ux, uy] = self.ue_positions[k];
        ((ax - ux).powi(2) + (ay - uy).powi(2) + self.height_diff.powi(2)).sqrt()
    }

    /// Horizontal distance between two UEs.
    pub fn ue_distance(&self, k: usize, i: usize) -> f64 {
        let [x1, y1] = self.ue_positions[k];
        let [x2, y2] = self.ue_positions[i];
        (x1 - x2).hypot(y1 - y2)
    }
}

/// APs at the cell centers of a `√L × √L` partition of the square, UEs
/// i.i.d. uniform over it. AP `l = row·√L + col` sits at
/// `((col + ½)·pitch, (row + ½)·pitch)`.
pub fn make_geometry(
    aps: usize,
    antennas: usize,
    users: usize,
    area_side: f64,
    seed: u64,
) -> Result<NetworkGeometry> {
    if aps == 0 || antennas == 0 || users == 0 {
        return Err(SimError::Parameter(format!(
            "counts must be positive (L = {aps}, M = {antennas}, K = {users})"
        )));
    }
    if !(area_side > 0.0 && area_side.is_finite()) {
        return Err(SimError::Parameter(format!("area side must be positive, got {area_side}")));
    }
    let side = (aps as f64).sqrt().round() as usize;
    if side * side != aps {
        return Err(SimError::NonSquareGrid(aps));
    }
    let pitch = area_side / side as f64;
    let ap_positions = (0..aps)
        .map(|l| {
            let (row, col) = (l / side, l % side);
            [(col as f64 + 0.5) * pitch, (row as f64 + 0.5) * pitch]
        })
        .collect();
    let mut rng = rng(seed);
    let ue_positions = (0..users)
        .map(|_| [rng.random_range(0.0..area_side), rng.random_range(0.0..area_side)])
        .collect();
    Ok(NetworkGeometry {
        aps,
        antennas,
        users,
        area_side,
        height_diff: HEIGHT_DIFF_M,
        ap_positions,
        ue_positions,
    })
}
