//! Exact distance transforms and the measurements read off them.
//!
//! The transform is the two-pass parabolic envelope algorithm: each pass
//! computes, in linear time, the lower envelope of parabolas rooted at
//! the previous pass's values.  On a binary raster all arithmetic stays
//! in exactly representable integers, so squared cell distances are exact
//! and tests can demand equality with brute force, not closeness.

use crate::MeasureError;
use num_complex::Complex64;

const INF: f64 = 1e20;

/// Exact squared Euclidean distances, in cell units, from every cell to
/// the nearest feature cell.  Cells unreachable because the raster has no
/// feature at all come back as `u32::MAX`.
pub fn edt_squared(set: &[bool], nx: usize, ny: usize) -> Vec<u32> {
    assert_eq!(set.len(), nx * ny, "raster shape mismatch");
    let side = nx.max(ny);
    let mut f = vec![0.0f64; side];
    let mut d = vec![0.0f64; side];
    let mut v = vec![0usize; side];
    let mut z = vec![0.0f64; side + 1];
    let mut tmp = vec![0.0f64; nx * ny];
    for x in 0..nx {
        for y in 0..ny {
            f[y] = if set[y * nx + x] { 0.0 } else { INF };
        }
        envelope(&f[..ny], &mut d[..ny], &mut v[..ny], &mut z[..ny + 1]);
        for y in 0..ny {
            tmp[y * nx + x] = d[y];
        }
    }
    let mut out = vec![0u32; nx * ny];
    for y in 0..ny {
        f[..nx].copy_from_slice(&tmp[y * nx..(y + 1) * nx]);
        envelope(&f[..nx], &mut d[..nx], &mut v[..nx], &mut z[..nx + 1]);
        for x in 0..nx {
            out[y * nx + x] = if d[x] >= INF { u32::MAX } else { d[x] as u32 };
        }
    }
    out
}

/// One-dimensional squared distance transform: lower envelope of the
/// parabolas `(q - p)^2 + f(p)` over source positions `p` with finite
/// `f`.  Positions with `f >= INF` cannot be sources but are still
/// queried.
fn envelope(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    let mut started = false;
    for q in 0..n {
        if f[q] >= INF {
            continue;
        }
        if !started {
            started = true;
            v[0] = q;
            z[0] = -INF;
            z[1] = INF;
            continue;
        }
        loop {
            let p = v[k];
            let qf = q as f64;
            let pf = p as f64;
            let s = (f[q] + qf * qf - f[p] - pf * pf) / (2.0 * (qf - pf));
            if s <= z[k] {
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = INF;
                break;
            }
        }
    }
    if !started {
        d[..n].fill(INF);
        return;
    }
    let mut j = 0usize;
    for q in 0..n {
        while z[j + 1] < q as f64 {
            j += 1;
        }
        let p = v[j];
        let diff = q as f64 - p as f64;
        d[q] = diff * diff + f[p];
    }
}

/// A distance-to-feature field in world units, optionally restricted to
/// a domain mask.  Volumes below the three-cell floor are refused; there
/// the counts measure quantization, not geometry.
#[derive(Debug, Clone)]
pub struct DistanceField {
    nx: usize,
    ny: usize,
    cell: f64,
    d: Vec<f32>,
    domain: Option<Vec<bool>>,
}

impl DistanceField {
    /// Builds the field from a binary raster with the given world cell
    /// size, optionally masking measurements to a domain.
    pub fn from_set(
        nx: usize,
        ny: usize,
        cell: f64,
        set: &[bool],
        domain: Option<Vec<bool>>,
    ) -> DistanceField {
        let squared = edt_squared(set, nx, ny);
        let d = squared
            .iter()
            .map(|&q| {
                if q == u32::MAX {
                    f32::INFINITY
                } else {
                    (f64::from(q).sqrt() * cell) as f32
                }
            })
            .collect();
        DistanceField { nx, ny, cell, d, domain }
    }

    pub(crate) fn from_values(
        nx: usize,
        ny: usize,
        cell: f64,
        d: Vec<f32>,
        domain: Option<Vec<bool>>,
    ) -> DistanceField {
        assert_eq!(d.len(), nx * ny, "distance field shape mismatch");
        DistanceField { nx, ny, cell, d, domain }
    }

    /// World size of one cell.
    pub fn cell(&self) -> f64 {
        self.cell
    }

    /// Raster shape as `(nx, ny)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    /// The smallest width at which volumes are reported.
    pub fn floor_eps(&self) -> f64 {
        3.0 * self.cell
    }

    /// The volume of `{x : dist(x, A) <= eps}`, domain-masked when a mask
    /// is present.  Feature cells themselves count: the set lies inside
    /// each of its neighborhoods.
    pub fn tube_volume(&self, eps: f64) -> Result<f64, MeasureError> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(MeasureError::Invalid(format!("tube width {eps} not positive")));
        }
        if eps < self.floor_eps() {
            return Err(MeasureError::EpsilonTooSmall { eps, floor: self.floor_eps() });
        }
        let e = eps as f32;
        let count = match &self.domain {
            Some(mask) => self
                .d
                .iter()
                .zip(mask)
                .filter(|&(d, &m)| m && *d <= e)
                .count(),
            None => self.d.iter().filter(|&&d| d <= e).count(),
        };
        Ok(count as f64 * self.cell * self.cell)
    }

    /// Tube volumes at several widths.
    pub fn profile(&self, widths: &[f64]) -> Result<Vec<(f64, f64)>, MeasureError> {
        widths
            .iter()
            .map(|&eps| self.tube_volume(eps).map(|v| (eps, v)))
            .collect()
    }

    /// The distance zeta quadrature `sum d^(s-2) * cell_area` over cells
    /// with `0 < dist <= delta`, the raster counterpart of
    /// `int_{A_delta} dist(x, A)^(s-2) dx` in the plane.
    pub fn distance_zeta(&self, s: Complex64, delta: f64) -> Result<Complex64, MeasureError> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(MeasureError::Invalid(format!("cutoff {delta} not positive")));
        }
        let dmax = delta as f32;
        let cell_area = self.cell * self.cell;
        let mut acc = Complex64::new(0.0, 0.0);
        let p = s - 2.0;
        let real_only = s.im == 0.0;
        for (i, &d) in self.d.iter().enumerate() {
            if d <= 0.0 || d > dmax {
                continue;
            }
            if let Some(mask) = &self.domain {
                if !mask[i] {
                    continue;
                }
            }
            let dist = f64::from(d);
            if real_only {
                acc.re += dist.powf(p.re);
            } else {
                acc += (p * dist.ln()).exp();
            }
        }
        Ok(acc * cell_area)
    }

    /// The same zeta value through the tube route: with `V(t)` the volume
    /// of `{0 < dist <= t}`,
    /// `zeta(s) = delta^(s-2) V(delta) + (2-s) int_0^delta t^(s-3) V(t) dt`.
    ///
    /// The integral is a trapezoid rule in `log t` over `steps` points,
    /// with volumes looked up in a sorted copy of the positive distances;
    /// below the smallest positive distance the volume vanishes exactly
    /// and the integrand contributes nothing.  Agreement with
    /// [`DistanceField::distance_zeta`] checks the whole bookkeeping
    /// chain, since the two routes share only the raw distances.
    pub fn tube_zeta_integral(
        &self,
        s: Complex64,
        delta: f64,
        steps: usize,
    ) -> Result<Complex64, MeasureError> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(MeasureError::Invalid(format!("cutoff {delta} not positive")));
        }
        if steps < 16 {
            return Err(MeasureError::Invalid(format!("{steps} quadrature steps; need >= 16")));
        }
        let mut sorted: Vec<f32> = match &self.domain {
            Some(mask) => self
                .d
                .iter()
                .zip(mask)
                .filter(|&(d, &m)| m && *d > 0.0 && f64::from(*d) <= delta)
                .map(|(d, _)| *d)
                .collect(),
            None => self
                .d
                .iter()
                .filter(|&&d| d > 0.0 && f64::from(d) <= delta)
                .copied()
                .collect(),
        };
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cell_area = self.cell * self.cell;
        let volume_at = |t: f64| -> f64 {
            let hit = sorted.partition_point(|&d| f64::from(d) <= t);
            hit as f64 * cell_area
        };
        let total = sorted.len() as f64 * cell_area;
        let boundary = (s - 2.0) * delta.ln();
        let mut acc = boundary.exp() * total;
        if let Some(&first) = sorted.first() {
            let u_lo = f64::from(first).ln() * (1.0 + 1e-12) - 1e-12;
            let u_hi = delta.ln();
            if u_hi > u_lo {
                let h = (u_hi - u_lo) / (steps - 1) as f64;
                let mut integral = Complex64::new(0.0, 0.0);
                for i in 0..steps {
                    let u = u_lo + h * i as f64;
                    let weight = if i == 0 || i == steps - 1 { 0.5 } else { 1.0 };
                    let t = u.exp();
                    integral += weight * ((s - 2.0) * u).exp() * volume_at(t);
                }
                acc += (2.0 - s) * integral * h;
            }
        }
        Ok(acc)
    }

    /// The smallest strictly positive distance in the (masked) field.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let mut best = f32::INFINITY;
        for (i, &d) in self.d.iter().enumerate() {
            if d <= 0.0 || d >= best {
                continue;
            }
            if let Some(mask) = &self.domain {
                if !mask[i] {
                    continue;
                }
            }
            best = d;
        }
        best.is_finite().then(|| f64::from(best))
    }
}

/// First-order Richardson step for a quantity measured at a resolution
/// and at double that resolution: the leading cell-size bias cancels in
/// `2 * fine - coarse`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    2.0 * fine - coarse
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{disk_drum, sierpinski_gasket, square_boundary, staircase_drum};
    use crate::MeasureError;

    fn brute_force(set: &[bool], nx: usize, ny: usize) -> Vec<u32> {
        let mut out = vec![u32::MAX; nx * ny];
        let features: Vec<(i64, i64)> = (0..nx * ny)
            .filter(|&i| set[i])
            .map(|i| ((i % nx) as i64, (i / nx) as i64))
            .collect();
        for y in 0..ny as i64 {
            for x in 0..nx as i64 {
                let mut best = u64::MAX;
                for &(fx, fy) in &features {
                    let d = ((x - fx) * (x - fx) + (y - fy) * (y - fy)) as u64;
                    best = best.min(d);
                }
                if best < u64::MAX {
                    out[(y as usize) * nx + x as usize] = best as u32;
                }
            }
        }
        out
    }

    #[test]
    fn transform_matches_brute_force_on_a_fixed_pattern() {
        let (nx, ny) = (23, 17);
        let mut seed = 0x2545f4914f6cdd1du64;
        let mut set = vec![false; nx * ny];
        for b in set.iter_mut() {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *b = (seed >> 61) == 0;
        }
        assert_eq!(edt_squared(&set, nx, ny), brute_force(&set, nx, ny));
    }

    #[test]
    fn transform_handles_an_empty_raster() {
        let set = vec![false; 12 * 9];
        assert!(edt_squared(&set, 12, 9).iter().all(|&d| d == u32::MAX));
    }

    #[test]
    fn widths_below_the_cell_floor_are_refused() {
        let g = square_boundary(128).unwrap();
        let field = g.distance_field();
        match field.tube_volume(2.0 / 128.0) {
            Err(MeasureError::EpsilonTooSmall { .. }) => {}
            other => panic!("expected EpsilonTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn square_collar_matches_the_offset_area() {
        // Inner eps-collar of the unit square boundary: 1 - (1 - 2 eps)^2.
        let coarse = square_boundary(1024)
            .unwrap()
            .distance_field()
            .tube_volume(0.1)
            .unwrap();
        let fine = square_boundary(2048)
            .unwrap()
            .distance_field()
            .tube_volume(0.1)
            .unwrap();
        let v = richardson(coarse, fine);
        assert!((v / 0.36 - 1.0).abs() < 0.01, "collar {v}");
    }

    #[test]
    fn disk_collar_matches_the_annulus_area() {
        let coarse = disk_drum(1024)
            .unwrap()
            .distance_field()
            .tube_volume(0.2)
            .unwrap();
        let fine = disk_drum(2048)
            .unwrap()
            .distance_field()
            .tube_volume(0.2)
            .unwrap();
        let v = richardson(coarse, fine);
        let exact = std::f64::consts::PI * 0.36;
        assert!((v / exact - 1.0).abs() < 0.01, "annulus {v} vs {exact}");
    }

    #[test]
    fn gasket_neighborhood_at_the_inradius_is_convex() {
        // At delta = 1/(2 sqrt 3), the inradius of the unit triangle, all
        // holes are filled and the neighborhood is that of the convex
        // hull: area sqrt(3)/4 + 3 delta + pi delta^2.
        let delta = 0.5 / 3.0f64.sqrt();
        let field = sierpinski_gasket(6, 1024).unwrap().distance_field();
        let v = field.tube_volume(delta).unwrap();
        let exact = 3.0f64.sqrt() / 4.0 + 3.0 * delta + std::f64::consts::PI * delta * delta;
        assert!((v / exact - 1.0).abs() < 0.01, "neighborhood {v} vs {exact}");
    }

    #[test]
    fn staircase_volumes_match_the_triangle_bookkeeping() {
        // The resolution is a power of three on purpose.  Plateau gaps
        // have triadic endpoints, so columns align with them exactly,
        // while the dyadic plateau heights scatter the vertical rounding
        // phases across plateaus and the count stays unbiased.  On a
        // power-of-two grid every height shares one phase and the
        // rounding error turns coherent instead of averaging out.
        let exact = |eps: f64, depth: u32| -> f64 {
            let mut acc = 0.0;
            for k in 1..=depth {
                let l = 3.0f64.powi(-(k as i32));
                let m = eps.min(l);
                acc += 2.0f64.powi(k as i32 - 1) * (2.0 * l * m - m * m);
            }
            acc
        };
        let field = staircase_drum(14, 2187).unwrap();
        for eps in [0.02, 0.05] {
            let v = field.tube_volume(eps).unwrap();
            let want = exact(eps, 14);
            assert!((v / want - 1.0).abs() < 0.01, "V({eps}) = {v} vs {want}");
        }
    }

    #[test]
    fn staircase_zeta_at_two_is_the_drum_area() {
        // The drum has area sum_k 2^(k-1) 9^(-k) = 1/7, and the distance
        // zeta at s = 2 integrates dist^0 over the drum.
        let field = staircase_drum(14, 2048).unwrap();
        let z = field
            .distance_zeta(Complex64::new(2.0, 0.0), 1.0 / 3.0)
            .unwrap();
        assert!((z.re * 7.0 - 1.0).abs() < 0.01, "area {}", z.re);
        assert!(z.im.abs() < 1e-12);
    }

    #[test]
    fn the_two_zeta_routes_agree_on_the_gasket_raster() {
        let field = sierpinski_gasket(6, 1024).unwrap().distance_field();
        let delta = 0.5 / 3.0f64.sqrt();
        for s in [Complex64::new(2.0, 0.0), Complex64::new(1.8, 0.7)] {
            let direct = field.distance_zeta(s, delta).unwrap();
            let tubed = field.tube_zeta_integral(s, delta, 2048).unwrap();
            let rel = (direct - tubed).norm() / direct.norm();
            assert!(rel < 1e-2, "zeta mismatch {rel:.3e} at s = {s}");
        }
    }

    #[test]
    fn richardson_cancels_linear_bias() {
        // Exact value 1; coarse off by 2h, fine by h.
        assert!((richardson(1.0 + 0.02, 1.0 + 0.01) - 1.0).abs() < 1e-15);
    }
}
