//! Rasterized fractal sets and relative drums.
//!
//! Each generator marks cells of a uniform grid by testing the cell
//! center against the exact construction: digit tests for the carpet and
//! the Cantor function, iterated affine contractions for the gasket.
//! Grids carry world coordinates so that margins around the unit figure
//! cost cells, not correctness.

use crate::distance::DistanceField;
use crate::{MeasureError, MAX_CELLS};

/// A binary raster: feature cells approximating a set `A`, plus an
/// optional domain mask when volumes are to be measured relative to a
/// region instead of the whole plane.
#[derive(Debug, Clone)]
pub struct Grid {
    nx: usize,
    ny: usize,
    cell: f64,
    x0: f64,
    y0: f64,
    set: Vec<bool>,
    domain: Option<Vec<bool>>,
}

impl Grid {
    fn blank(
        x0: f64,
        y0: f64,
        width: f64,
        height: f64,
        resolution: usize,
    ) -> Result<Grid, MeasureError> {
        if resolution < 16 {
            return Err(MeasureError::Invalid(format!(
                "resolution {resolution} too coarse; need at least 16 cells per unit"
            )));
        }
        let cell = 1.0 / resolution as f64;
        let nx = (width * resolution as f64).round() as usize;
        let ny = (height * resolution as f64).round() as usize;
        let cells = nx
            .checked_mul(ny)
            .ok_or(MeasureError::ResourceLimit { cells: usize::MAX, limit: MAX_CELLS })?;
        if cells > MAX_CELLS {
            return Err(MeasureError::ResourceLimit { cells, limit: MAX_CELLS });
        }
        Ok(Grid {
            nx,
            ny,
            cell,
            x0,
            y0,
            set: vec![false; cells],
            domain: None,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// World size of one cell.
    pub fn cell(&self) -> f64 {
        self.cell
    }

    /// World coordinates of the center of cell `(ix, iy)`.
    pub fn center(&self, ix: usize, iy: usize) -> (f64, f64) {
        (
            self.x0 + (ix as f64 + 0.5) * self.cell,
            self.y0 + (iy as f64 + 0.5) * self.cell,
        )
    }

    /// Area of the feature set, cell count times cell area.
    pub fn set_area(&self) -> f64 {
        let n = self.set.iter().filter(|&&b| b).count();
        n as f64 * self.cell * self.cell
    }

    /// Area of the domain mask; the whole grid when no mask is set.
    pub fn domain_area(&self) -> f64 {
        let n = match &self.domain {
            Some(mask) => mask.iter().filter(|&&b| b).count(),
            None => self.nx * self.ny,
        };
        n as f64 * self.cell * self.cell
    }

    /// Exact Euclidean distance field of the feature set, in world units.
    pub fn distance_field(&self) -> DistanceField {
        DistanceField::from_set(self.nx, self.ny, self.cell, &self.set, self.domain.clone())
    }

    fn fill<F>(&mut self, mut member: F)
    where
        F: FnMut(f64, f64) -> bool,
    {
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let (x, y) = self.center(ix, iy);
                self.set[iy * self.nx + ix] = member(x, y);
            }
        }
    }
}

/// The Sierpinski gasket at the given construction depth, with margin for
/// neighborhoods up to about a third of the side length.
///
/// Membership iterates the inverse contractions: a point survives one
/// level if doubling it about one of the three corners keeps it inside
/// the unit triangle, and it belongs to the depth-`d` prefractal if it
/// survives `d` levels.
pub fn sierpinski_gasket(depth: u32, resolution: usize) -> Result<Grid, MeasureError> {
    let h = 3.0f64.sqrt() / 2.0;
    let margin = 0.36;
    let mut grid = Grid::blank(
        -margin,
        -margin,
        1.0 + 2.0 * margin,
        h + 2.0 * margin,
        resolution,
    )?;
    grid.fill(|x, y| gasket_member(x, y, depth));
    Ok(grid)
}

fn gasket_member(mut x: f64, mut y: f64, depth: u32) -> bool {
    let s3 = 3.0f64.sqrt();
    let inside = |x: f64, y: f64| y >= 0.0 && y <= s3 * x && y <= s3 * (1.0 - x);
    if !inside(x, y) {
        return false;
    }
    for _ in 0..depth {
        x *= 2.0;
        y *= 2.0;
        if inside(x, y) {
            continue;
        } else if inside(x - 1.0, y) {
            x -= 1.0;
        } else if inside(x - 0.5, y - s3 / 2.0) {
            x -= 0.5;
            y -= s3 / 2.0;
        } else {
            return false;
        }
    }
    true
}

/// The Sierpinski carpet at the given depth.  A point survives while no
/// base-3 digit level puts both coordinates in the middle third.
pub fn sierpinski_carpet(depth: u32, resolution: usize) -> Result<Grid, MeasureError> {
    let margin = 0.2;
    let mut grid = Grid::blank(
        -margin,
        -margin,
        1.0 + 2.0 * margin,
        1.0 + 2.0 * margin,
        resolution,
    )?;
    grid.fill(|x, y| carpet_member(x, y, depth));
    Ok(grid)
}

fn carpet_member(mut x: f64, mut y: f64, depth: u32) -> bool {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return false;
    }
    for _ in 0..depth {
        x *= 3.0;
        y *= 3.0;
        let dx = x.floor().min(2.0);
        let dy = y.floor().min(2.0);
        if dx == 1.0 && dy == 1.0 {
            return false;
        }
        x -= dx;
        y -= dy;
    }
    true
}

/// The boundary drum of the unit square: feature cells are the
/// complement of the open square, the domain is its interior, so tube
/// volumes measure the inner collar `{x : dist(x, boundary) <= eps}`.
pub fn square_boundary(resolution: usize) -> Result<Grid, MeasureError> {
    let margin = 0.02;
    let mut grid = Grid::blank(
        -margin,
        -margin,
        1.0 + 2.0 * margin,
        1.0 + 2.0 * margin,
        resolution,
    )?;
    grid.fill(|x, y| !(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0));
    let domain = grid.set.iter().map(|&b| !b).collect();
    grid.domain = Some(domain);
    Ok(grid)
}

/// The boundary drum of the unit disk: feature cells lie outside the
/// disk, the domain is the open disk, so tube volumes measure the inner
/// annulus along the circle.
pub fn disk_drum(resolution: usize) -> Result<Grid, MeasureError> {
    let margin = 0.05;
    let half = 1.0 + margin;
    let mut grid = Grid::blank(-half, -half, 2.0 * half, 2.0 * half, resolution)?;
    grid.fill(|x, y| x * x + y * y >= 1.0);
    let domain = grid.set.iter().map(|&b| !b).collect();
    grid.domain = Some(domain);
    Ok(grid)
}

/// The Cantor function (devil's staircase), exact to f64 resolution.
///
/// Ternary digits of `x` map to binary digits of the value: digits equal
/// to 2 become ones, and the expansion stops at the first digit equal to
/// 1, which contributes a final one.  Constant on the complement of the
/// Cantor set, increasing, with `c(0) = 0` and `c(1) = 1`.
pub fn cantor_function(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let mut t = x;
    let mut scale = 0.5;
    let mut val = 0.0;
    for _ in 0..64 {
        t *= 3.0;
        let d = t.floor().min(2.0);
        t -= d;
        if d == 1.0 {
            val += scale;
            break;
        }
        if d == 2.0 {
            val += scale;
        }
        scale *= 0.5;
        if t <= 0.0 {
            break;
        }
    }
    val
}

/// The Cantor graph drum: right triangles above and below each plateau
/// of the devil's staircase, with the distance to the graph realized as
/// the vertical distance to the plateau.
///
/// A plateau of length `l` carries one triangle above and one below,
/// each with a vertical leg of length `l`, so a pair contributes
/// `2 l^s / (s (s-1))` to the distance zeta function and the whole drum
/// has area `1/7`.  Distances are stored analytically, which realizes
/// the sup-metric flavor of the drum exactly instead of approximating it
/// with a Euclidean transform to the full graph.
pub fn staircase_drum(depth: u32, resolution: usize) -> Result<DistanceField, MeasureError> {
    if depth == 0 || depth > 40 {
        return Err(MeasureError::Invalid(format!(
            "staircase depth {depth} outside 1..=40"
        )));
    }
    if resolution < 16 {
        return Err(MeasureError::Invalid(format!(
            "resolution {resolution} too coarse; need at least 16 cells per unit"
        )));
    }
    let n = resolution;
    let cells = n
        .checked_mul(n)
        .ok_or(MeasureError::ResourceLimit { cells: usize::MAX, limit: MAX_CELLS })?;
    if cells > MAX_CELLS {
        return Err(MeasureError::ResourceLimit { cells, limit: MAX_CELLS });
    }
    let cell = 1.0 / n as f64;
    let mut d = vec![f32::INFINITY; cells];
    let mut domain = vec![false; cells];

    // Depth-first walk over the staircase construction; each interval
    // splits into thirds with the middle third becoming a plateau.
    let mut stack = vec![(0.0f64, 1.0f64, 0.0f64, 1.0f64, 1u32)];
    while let Some((x_lo, x_hi, c_lo, c_hi, level)) = stack.pop() {
        let third = (x_hi - x_lo) / 3.0;
        let g_lo = x_lo + third;
        let g_hi = x_hi - third;
        let h = 0.5 * (c_lo + c_hi);
        mark_triangle_pair(&mut d, &mut domain, n, cell, g_lo, g_hi, h);
        if level < depth {
            stack.push((x_lo, g_lo, c_lo, h, level + 1));
            stack.push((g_hi, x_hi, h, c_hi, level + 1));
        }
    }
    Ok(DistanceField::from_values(n, n, cell, d, Some(domain)))
}

fn mark_triangle_pair(
    d: &mut [f32],
    domain: &mut [bool],
    n: usize,
    cell: f64,
    g_lo: f64,
    g_hi: f64,
    h: f64,
) {
    let ix_lo = (g_lo / cell).floor().max(0.0) as usize;
    let ix_hi = ((g_hi / cell).ceil() as usize).min(n);
    for ix in ix_lo..ix_hi {
        let x = (ix as f64 + 0.5) * cell;
        if x <= g_lo || x >= g_hi {
            continue;
        }
        let reach = g_hi - x;
        let iy_lo = ((h - reach) / cell).floor().max(0.0) as usize;
        let iy_hi = (((h + reach) / cell).ceil() as usize).min(n);
        for iy in iy_lo..iy_hi {
            let y = (iy as f64 + 0.5) * cell;
            let dist = (y - h).abs();
            if dist > 0.0 && dist < reach {
                let idx = iy * n + ix;
                domain[idx] = true;
                d[idx] = dist as f32;
            }
        }
    }
}
