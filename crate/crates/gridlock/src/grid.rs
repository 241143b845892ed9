//! Spatio-temporal resource grid with proximity levels.
//!
//! Space is a regular lattice of square cells, time is a fixed horizon of
//! discrete steps, and every (cell, step) pair is replicated once per
//! proximity level. A trajectory occupies, at each step and level `h`, the
//! cells whose centers lie strictly inside the open ball of radius
//! `radii[h]` around its position, so the occupancy inflates with the
//! level while staying nested across levels. Loads are binary per player:
//! a resource's load is the number of distinct players whose footprint
//! contains it.
//!
//! Grid extents bound where trajectories may *be*; occupancy balls may
//! spill past the extents (their cells simply carry indices outside
//! `0..extent`), which keeps footprints translation-equivariant all the
//! way to the boundary.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::{Error, Result};

/// Planar position in meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Euclidean distance to another point.
    pub fn distance(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Lattice cell identified by its integer column/row indices.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }
}

/// One unit of the space x time x proximity-level resource set.
///
/// Resources at different levels are distinct identities even when they
/// share the same cell and time step. Field order gives the lexicographic
/// resource order `(t, level, x, y)` used by sorted footprints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResourceId {
    pub t: u16,
    pub level: u8,
    pub x: i32,
    pub y: i32,
}

/// Geometry of the discretized road: cell size, extents, horizon, and the
/// strictly increasing proximity radii.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "RawGridSpec", into = "RawGridSpec")]
pub struct GridSpec {
    cell_size: f64,
    x_extent: u32,
    y_extent: u32,
    horizon: u32,
    radii: Vec<f64>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct RawGridSpec {
    cell_size: f64,
    x_extent: u32,
    y_extent: u32,
    #[serde(rename = "horizon_T")]
    horizon: u32,
    radii: Vec<f64>,
}

impl TryFrom<RawGridSpec> for GridSpec {
    type Error = Error;

    fn try_from(raw: RawGridSpec) -> Result<Self> {
        GridSpec::new(
            raw.cell_size,
            raw.x_extent,
            raw.y_extent,
            raw.horizon,
            raw.radii,
        )
    }
}

impl From<GridSpec> for RawGridSpec {
    fn from(spec: GridSpec) -> Self {
        RawGridSpec {
            cell_size: spec.cell_size,
            x_extent: spec.x_extent,
            y_extent: spec.y_extent,
            horizon: spec.horizon,
            radii: spec.radii,
        }
    }
}

impl GridSpec {
    pub fn new(
        cell_size: f64,
        x_extent: u32,
        y_extent: u32,
        horizon: u32,
        radii: Vec<f64>,
    ) -> Result<Self> {
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "cell_size must be positive, got {cell_size}"
            )));
        }
        if x_extent == 0 || y_extent == 0 {
            return Err(Error::InvalidGrid(
                "extents must be at least one cell".into(),
            ));
        }
        if horizon == 0 {
            return Err(Error::InvalidGrid(
                "horizon must be at least one step".into(),
            ));
        }
        if radii.is_empty() {
            return Err(Error::InvalidGrid(
                "at least one proximity radius is required".into(),
            ));
        }
        if radii.len() > u8::MAX as usize {
            return Err(Error::InvalidGrid("too many proximity levels".into()));
        }
        if horizon > u16::MAX as u32 {
            return Err(Error::InvalidGrid("horizon too large".into()));
        }
        let mut previous = 0.0;
        for (h, &rho) in radii.iter().enumerate() {
            if !(rho.is_finite() && rho > previous) {
                return Err(Error::InvalidGrid(format!(
                    "radii must be positive and strictly increasing; level {h} has {rho}"
                )));
            }
            previous = rho;
        }
        Ok(GridSpec {
            cell_size,
            x_extent,
            y_extent,
            horizon,
            radii,
        })
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn x_extent(&self) -> u32 {
        self.x_extent
    }

    pub fn y_extent(&self) -> u32 {
        self.y_extent
    }

    /// Number of time steps in the game.
    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// Proximity radii in meters, strictly increasing.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Number of proximity levels H.
    pub fn levels(&self) -> usize {
        self.radii.len()
    }

    /// Center of a cell in meters. Cell (0, 0) is centered at the origin.
    pub fn cell_center(&self, cell: Cell) -> Point {
        Point::new(
            cell.x as f64 * self.cell_size,
            cell.y as f64 * self.cell_size,
        )
    }

    /// The cell holding a position (nearest cell center).
    pub fn cell_of(&self, position: Point) -> Cell {
        Cell::new(
            (position.x / self.cell_size).round() as i32,
            (position.y / self.cell_size).round() as i32,
        )
    }

    /// True if the cell indices lie within the extents.
    pub fn contains(&self, cell: Cell) -> bool {
        cell.x >= 0
            && (cell.x as u32) < self.x_extent
            && cell.y >= 0
            && (cell.y as u32) < self.y_extent
    }

    /// Fingerprint used to detect mixing footprints from different grids.
    pub(crate) fn key(&self) -> u64 {
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        self.cell_size.to_bits().hash(&mut hasher);
        self.x_extent.hash(&mut hasher);
        self.y_extent.hash(&mut hasher);
        self.horizon.hash(&mut hasher);
        for rho in &self.radii {
            rho.to_bits().hash(&mut hasher);
        }
        hasher.finish()
    }

    /// Cells whose centers lie strictly within `radii[level]` of `center`,
    /// in ascending (x, y) order.
    pub fn ball_cells(&self, center: Point, level: usize) -> Vec<Cell> {
        let rho = self.radii[level];
        let rho_sq = rho * rho;
        let c = self.cell_size;
        let x_lo = ((center.x - rho) / c).ceil() as i64;
        let x_hi = ((center.x + rho) / c).floor() as i64;
        let y_lo = ((center.y - rho) / c).ceil() as i64;
        let y_hi = ((center.y + rho) / c).floor() as i64;
        let mut cells = Vec::new();
        for x in x_lo..=x_hi {
            let dx = x as f64 * c - center.x;
            for y in y_lo..=y_hi {
                let dy = y as f64 * c - center.y;
                if dx * dx + dy * dy < rho_sq {
                    cells.push(Cell::new(x as i32, y as i32));
                }
            }
        }
        cells
    }
}

/// A time-indexed open-loop trajectory: one planar position per step.
///
/// Speeds and accelerations are always derived from the positions, never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    positions: Vec<Point>,
}

impl Trajectory {
    pub fn new(positions: Vec<Point>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidGrid(
                "a trajectory needs at least one position".into(),
            ));
        }
        Ok(Trajectory { positions })
    }

    /// Build a trajectory from lattice cells (positions at cell centers).
    pub fn from_cells(cells: &[Cell], grid: &GridSpec) -> Result<Self> {
        Trajectory::new(cells.iter().map(|&c| grid.cell_center(c)).collect())
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, t: usize) -> Result<Point> {
        self.positions.get(t).copied().ok_or(Error::TimeOutOfRange {
            t,
            horizon: self.positions.len(),
        })
    }

    /// Per-step displacement magnitudes, one per transition.
    pub fn speeds(&self) -> Vec<f64> {
        self.positions
            .windows(2)
            .map(|w| w[0].distance(&w[1]))
            .collect()
    }

    /// Per-step speed-change magnitudes, one per pair of transitions.
    pub fn accelerations(&self) -> Vec<f64> {
        self.speeds()
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .collect()
    }

    /// Rigidly translate by an integer number of cells.
    pub fn translated(&self, dx_cells: i32, dy_cells: i32, cell_size: f64) -> Trajectory {
        let dx = dx_cells as f64 * cell_size;
        let dy = dy_cells as f64 * cell_size;
        Trajectory {
            positions: self
                .positions
                .iter()
                .map(|p| Point::new(p.x + dx, p.y + dy))
                .collect(),
        }
    }

    /// If `self` is a rigid integer-cell translate of `other`, return the
    /// cell offset.
    pub fn cell_translate_of(&self, other: &Trajectory, cell_size: f64) -> Option<(i32, i32)> {
        if self.len() != other.len() {
            return None;
        }
        const TOL: f64 = 1e-9;
        let dx = self.positions[0].x - other.positions[0].x;
        let dy = self.positions[0].y - other.positions[0].y;
        for (a, b) in self.positions.iter().zip(&other.positions) {
            if ((a.x - b.x) - dx).abs() > TOL || ((a.y - b.y) - dy).abs() > TOL {
                return None;
            }
        }
        let kx = dx / cell_size;
        let ky = dy / cell_size;
        if (kx - kx.round()).abs() > TOL || (ky - ky.round()).abs() > TOL {
            return None;
        }
        Some((kx.round() as i32, ky.round() as i32))
    }
}

/// Euclidean distance between two trajectories at a time step.
pub fn distance_at(a: &Trajectory, b: &Trajectory, t: usize) -> Result<f64> {
    let horizon = a.len().min(b.len());
    if t >= horizon {
        return Err(Error::TimeOutOfRange { t, horizon });
    }
    Ok(a.positions()[t].distance(&b.positions()[t]))
}

/// The resources a trajectory occupies, sorted by `(t, level, x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Footprint {
    grid_key: u64,
    levels: u8,
    cells: Vec<ResourceId>,
}

impl Footprint {
    /// All occupied resources in sorted order.
    pub fn resources(&self) -> &[ResourceId] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn levels(&self) -> usize {
        self.levels as usize
    }

    pub(crate) fn grid_key(&self) -> u64 {
        self.grid_key
    }

    pub fn contains(&self, resource: ResourceId) -> bool {
        self.cells.binary_search(&resource).is_ok()
    }

    /// The level-`h` cell set at step `t`, as a sorted slice.
    pub fn at(&self, t: usize, level: usize) -> &[ResourceId] {
        let lo = ResourceId {
            t: t as u16,
            level: level as u8,
            x: i32::MIN,
            y: i32::MIN,
        };
        let hi = ResourceId {
            t: t as u16,
            level: level as u8,
            x: i32::MAX,
            y: i32::MAX,
        };
        let start = self.cells.partition_point(|r| *r < lo);
        let end = self.cells.partition_point(|r| *r <= hi);
        &self.cells[start..end]
    }

    /// Number of resources shared with another footprint.
    pub fn overlap(&self, other: &Footprint) -> usize {
        intersect_sorted(&self.cells, &other.cells).len()
    }

    /// Number of cells shared with another footprint at one (t, level).
    pub fn overlap_at(&self, other: &Footprint, t: usize, level: usize) -> usize {
        intersect_sorted(self.at(t, level), other.at(t, level)).len()
    }
}

/// Intersection of two sorted resource slices.
pub(crate) fn intersect_sorted(a: &[ResourceId], b: &[ResourceId]) -> Vec<ResourceId> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Map a trajectory to its resource occupancy on a grid.
///
/// At each step `t` and level `h` the footprint holds exactly the cells
/// whose centers lie strictly within `radii[h]` of the position. Errors if
/// the trajectory length does not match the grid horizon or if any
/// position's holding cell falls outside the extents (positions are never
/// clamped).
pub fn occupancy(trajectory: &Trajectory, grid: &GridSpec) -> Result<Footprint> {
    if trajectory.len() != grid.horizon() as usize {
        return Err(Error::HorizonMismatch {
            got: trajectory.len(),
            want: grid.horizon() as usize,
        });
    }
    for (t, p) in trajectory.positions().iter().enumerate() {
        if !grid.contains(grid.cell_of(*p)) {
            return Err(Error::OutOfGrid { t, x: p.x, y: p.y });
        }
    }
    let mut cells = Vec::new();
    for (t, p) in trajectory.positions().iter().enumerate() {
        for level in 0..grid.levels() {
            for cell in grid.ball_cells(*p, level) {
                cells.push(ResourceId {
                    t: t as u16,
                    level: level as u8,
                    x: cell.x,
                    y: cell.y,
                });
            }
        }
    }
    Ok(Footprint {
        grid_key: grid.key(),
        levels: grid.levels() as u8,
        cells,
    })
}

/// Per-resource occupant counts for a set of footprints.
///
/// Resources not occupied by anyone are absent from the map.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadMap {
    counts: HashMap<ResourceId, u32>,
}

impl LoadMap {
    /// The load on a resource (zero if unoccupied).
    pub fn load(&self, resource: ResourceId) -> u32 {
        self.counts.get(&resource).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sum of all loads (equals the summed footprint sizes).
    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| c as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ResourceId, &u32)> {
        self.counts.iter()
    }
}

/// Count, per resource, how many of the given footprints occupy it.
///
/// All footprints must have been built against the same grid.
pub fn load_map(footprints: &[&Footprint]) -> Result<LoadMap> {
    let mut counts = HashMap::new();
    if let Some(first) = footprints.first() {
        let key = first.grid_key();
        for fp in footprints {
            if fp.grid_key() != key {
                return Err(Error::GridMismatch);
            }
            for &r in fp.resources() {
                *counts.entry(r).or_insert(0) += 1;
            }
        }
    }
    Ok(LoadMap { counts })
}
