//! Rectangle argument-principle root search.
//!
//! Winding numbers are computed by phase continuation: walk the boundary,
//! accumulate argument increments of `f`, and bisect any step whose phase
//! jump or magnitude swing is too large to trust. This stays exact (the
//! total is an integer to high accuracy) even when a root sits close to the
//! contour, where fixed-node quadrature of `f'/f` would silently lose count.

use num_complex::Complex64;

use crate::{DirichletPolynomial, MoranError};

/// A closed axis-aligned search rectangle in the `s` plane.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        assert!(
            re_min < re_max && im_min < im_max,
            "degenerate window [{re_min}, {re_max}] x [{im_min}, {im_max}]"
        );
        Window { re_min, re_max, im_min, im_max }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    fn expanded(&self, amount: f64) -> Window {
        Window {
            re_min: self.re_min - amount,
            re_max: self.re_max + amount,
            im_min: self.im_min - amount,
            im_max: self.im_max + amount,
        }
    }
}

/// A located root with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootInfo {
    pub location: Complex64,
    pub order: u32,
}

/// Boundary sampling density for phase continuation, segments per unit
/// length. Local bisection supplies all further resolution.
const SEGMENTS_PER_UNIT: f64 = 16.0;
const MIN_SEGMENTS_PER_EDGE: usize = 48;
/// Recursion budget for one boundary step; reaches feature scales of
/// about `edge length / 2^48`.
const PHASE_DEPTH: u32 = 48;
/// Largest deviation from an integer tolerated in a completed winding.
const WINDING_RESIDUAL: f64 = 1e-2;
/// Subdivision stops separating roots below this relative size and
/// declares a multiple root.
const CLUSTER_SIZE: f64 = 1e-8;

/// Value of `f` at a boundary node together with the magnitude of its
/// logarithmic derivative, which bounds how fast the phase can move.
#[derive(Clone, Copy)]
struct BoundaryNode {
    f: Complex64,
    log_slope: f64,
}

fn boundary_node(f: &DirichletPolynomial, z: Complex64) -> BoundaryNode {
    let fv = f.eval(z);
    let slope = if fv.norm() == 0.0 {
        f64::INFINITY
    } else {
        f.eval_deriv(z).norm() / fv.norm()
    };
    BoundaryNode { f: fv, log_slope: slope }
}

/// Largest admissible `|f'/f| * step` at a segment endpoint. The total
/// phase motion over a step is at most the integral of `|f'/f|`, so a full
/// 2 pi alias (which needs at least two nearby zeros) forces an endpoint
/// slope-length product of about 4; staying under this bound makes the
/// accepted principal-branch jump the true jump.
const SLOPE_TRUST: f64 = 2.2;

fn phase_step(
    f: &DirichletPolynomial,
    z0: Complex64,
    z1: Complex64,
    n0: BoundaryNode,
    n1: BoundaryNode,
    depth: u32,
) -> Result<f64, String> {
    if n0.f.norm() == 0.0 || n1.f.norm() == 0.0 {
        return Err(format!("f vanishes on the contour near {z0}"));
    }
    let len = (z1 - z0).norm();
    let ratio = n1.f / n0.f;
    let jump = ratio.arg();
    let swing = ratio.norm();
    if jump.abs() <= std::f64::consts::FRAC_PI_2
        && (0.25..4.0).contains(&swing)
        && n0.log_slope * len <= SLOPE_TRUST
        && n1.log_slope * len <= SLOPE_TRUST
    {
        return Ok(jump);
    }
    if depth == 0 {
        return Err(format!("phase continuation exhausted near {z0}"));
    }
    let zm = 0.5 * (z0 + z1);
    let nm = boundary_node(f, zm);
    Ok(phase_step(f, z0, zm, n0, nm, depth - 1)?
        + phase_step(f, zm, z1, nm, n1, depth - 1)?)
}

/// Number of zeros of `f` inside the rectangle, counted with multiplicity.
/// Fails when a zero sits on (or numerically on) the boundary.
fn rect_winding(f: &DirichletPolynomial, w: &Window) -> Result<i64, String> {
    let corners = w.corners();
    let mut total = 0.0f64;
    for i in 0..4 {
        let z0 = corners[i];
        let z1 = corners[(i + 1) % 4];
        let len = (z1 - z0).norm();
        let segs = ((len * SEGMENTS_PER_UNIT).ceil() as usize).max(MIN_SEGMENTS_PER_EDGE);
        let mut prev_z = z0;
        let mut prev_n = boundary_node(f, prev_z);
        for k in 1..=segs {
            let t = k as f64 / segs as f64;
            let z = z0 + (z1 - z0) * t;
            let n = boundary_node(f, z);
            total += phase_step(f, prev_z, z, prev_n, n, PHASE_DEPTH)?;
            prev_z = z;
            prev_n = n;
        }
    }
    let turns = total / (2.0 * std::f64::consts::PI);
    let n = turns.round();
    if (turns - n).abs() > WINDING_RESIDUAL {
        return Err(format!("winding {turns:.6} did not close to an integer"));
    }
    Ok(n as i64)
}

fn refine_single(f: &DirichletPolynomial, rect: &Window) -> Result<RootInfo, MoranError> {
    let slack = 1e-9 + 1e-7 * rect.width().max(rect.height());
    let starts = [
        rect.center(),
        Complex64::new(
            rect.re_min + 0.25 * rect.width(),
            rect.im_min + 0.25 * rect.height(),
        ),
        Complex64::new(
            rect.re_min + 0.75 * rect.width(),
            rect.im_min + 0.25 * rect.height(),
        ),
        Complex64::new(
            rect.re_min + 0.25 * rect.width(),
            rect.im_min + 0.75 * rect.height(),
        ),
        Complex64::new(
            rect.re_min + 0.75 * rect.width(),
            rect.im_min + 0.75 * rect.height(),
        ),
    ];
    for start in starts {
        let mut z = start;
        for _ in 0..80 {
            let fv = f.eval(z);
            let dv = f.eval_deriv(z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = fv / dv;
            z -= step;
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
        if f.eval(z).norm() <= 1e-10 && rect.contains(z, slack) {
            return Ok(RootInfo { location: z, order: 1 });
        }
    }
    Err(MoranError::Winding(format!(
        "Newton refinement failed in [{}, {}] x [{}, {}]",
        rect.re_min, rect.re_max, rect.im_min, rect.im_max
    )))
}

/// Multiplicity-accelerated Newton, keeping the best iterate seen.
///
/// Inside the rounding plateau of an m-fold zero the evaluation noise makes
/// `m f / f'` useless as a step (the numerator is noise while the true
/// value is far smaller), so iterates bounce in and out of the plateau; the
/// iterate of smallest `|f|` is the reliable answer.
fn polish_multiple(f: &DirichletPolynomial, start: Complex64, order: u32) -> Complex64 {
    let m = f64::from(order);
    let mut z = start;
    let mut best = z;
    let mut best_mag = f.eval(z).norm();
    for _ in 0..60 {
        let dv = f.eval_deriv(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = m * f.eval(z) / dv;
        z -= step;
        let mag = f.eval(z).norm();
        if mag < best_mag {
            best_mag = mag;
            best = z;
        }
        if step.norm() <= 1e-13 * (1.0 + z.norm()) {
            break;
        }
    }
    best
}

fn refine_clustered(
    f: &DirichletPolynomial,
    rect: &Window,
    count: i64,
) -> Result<RootInfo, MoranError> {
    // The rectangle is already tiny, so all `count` zeros coincide to
    // working precision.
    let z = polish_multiple(f, rect.center(), count as u32);
    if f.eval(z).norm() > 1e-8 {
        return Err(MoranError::Winding(format!(
            "multiple-root refinement stalled at {z} with |f| = {:.3e}",
            f.eval(z).norm()
        )));
    }
    Ok(RootInfo { location: z, order: count as u32 })
}

fn subdivide(
    f: &DirichletPolynomial,
    rect: &Window,
    count: i64,
    depth: u32,
    out: &mut Vec<RootInfo>,
) -> Result<(), MoranError> {
    if count == 0 {
        return Ok(());
    }
    if count == 1 {
        out.push(refine_single(f, rect)?);
        return Ok(());
    }
    let dim = rect.width().max(rect.height());
    if dim < CLUSTER_SIZE * (1.0 + rect.center().norm()) || depth >= 90 {
        out.push(refine_clustered(f, rect, count)?);
        return Ok(());
    }
    let mut last_split: Option<i64> = None;
    for offset_scale in [0.0, 1.0, -1.0, 0.5] {
        let offset = offset_scale * 1e-6 * (1.0 + dim);
        let (a, b) = if rect.width() >= rect.height() {
            let x = 0.5 * (rect.re_min + rect.re_max) + offset;
            (
                Window { re_max: x, ..*rect },
                Window { re_min: x, ..*rect },
            )
        } else {
            let y = 0.5 * (rect.im_min + rect.im_max) + offset;
            (
                Window { im_max: y, ..*rect },
                Window { im_min: y, ..*rect },
            )
        };
        let (ca, cb) = match (rect_winding(f, &a), rect_winding(f, &b)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => continue,
        };
        if ca + cb != count {
            last_split = Some(ca + cb);
            continue;
        }
        subdivide(f, &a, ca, depth + 1, out)?;
        subdivide(f, &b, cb, depth + 1, out)?;
        return Ok(());
    }
    match last_split {
        Some(found) => Err(MoranError::CountMismatch { expected: count, found }),
        None => Err(MoranError::Winding(
            "no admissible split line; zeros pin every candidate boundary".into(),
        )),
    }
}

/// Collapse roots closer together than the numerical splitting radius of a
/// multiple zero. Under f64 rounding an exact m-fold zero scatters into m
/// simple zeros a distance of order sqrt(machine epsilon) apart; reporting
/// those as one root of order m is the honest reading.
fn merge_clusters(mut roots: Vec<RootInfo>) -> Vec<RootInfo> {
    let mut merged: Vec<RootInfo> = Vec::with_capacity(roots.len());
    for r in roots.drain(..) {
        let radius = 2e-7 * (1.0 + r.location.norm());
        match merged
            .iter_mut()
            .find(|m| (m.location - r.location).norm() <= radius)
        {
            Some(m) => {
                let total = f64::from(m.order + r.order);
                m.location = (m.location * f64::from(m.order)
                    + r.location * f64::from(r.order))
                    / total;
                m.order += r.order;
            }
            None => merged.push(r),
        }
    }
    merged
}

/// Find every zero of `f` in the closed window, with multiplicities.
///
/// The boundary is nudged outward by a sub-1e-6 fraction of the window size
/// before counting, so zeros sitting exactly on the stated boundary
/// (vertical translates of the real root land on round-number boundaries
/// all the time) are captured deterministically; further nudges retry when
/// a zero still pins the contour. The sum of reported orders is checked
/// against the whole-window winding count and a discrepancy is an error.
pub fn find_roots(
    f: &DirichletPolynomial,
    window: &Window,
) -> Result<Vec<RootInfo>, MoranError> {
    let nudge = 1e-6 * (1.0 + window.width().max(window.height()));
    let mut chosen: Option<(Window, i64)> = None;
    let mut last_err = String::new();
    for scale in [0.5, 1.0, 0.71, 0.32] {
        let w = window.expanded(scale * nudge);
        match rect_winding(f, &w) {
            Ok(c) => {
                chosen = Some((w, c));
                break;
            }
            Err(e) => last_err = e,
        }
    }
    let (work, count) = chosen.ok_or(MoranError::Winding(last_err))?;
    if count < 0 {
        return Err(MoranError::Winding(format!(
            "negative winding {count} for an entire function"
        )));
    }
    let mut roots = Vec::new();
    subdivide(f, &work, count, 0, &mut roots)?;
    let mut roots = merge_clusters(roots);
    // Unaccelerated Newton wanders randomly once it reaches the rounding
    // plateau of a multiple zero; one multiplicity-accelerated polish pass
    // pulls the merged location back to the plateau's center.
    for r in &mut roots {
        if r.order > 1 {
            r.location = polish_multiple(f, r.location, r.order);
        }
    }
    roots.sort_by(|a, b| {
        (a.location.im, a.location.re)
            .partial_cmp(&(b.location.im, b.location.re))
            .expect("root coordinates are finite")
    });
    let found: i64 = roots.iter().map(|r| i64::from(r.order)).sum();
    if found != count {
        return Err(MoranError::CountMismatch { expected: count, found });
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fzeta_expr::Base;

    fn cantor() -> DirichletPolynomial {
        DirichletPolynomial::new(vec![(Base::rational(1, 3), 2.0)]).unwrap()
    }

    #[test]
    fn single_period_strip() {
        let f = cantor();
        let d = 2.0f64.ln() / 3.0f64.ln();
        let p = 2.0 * std::f64::consts::PI / 3.0f64.ln();
        let w = Window::new(0.0, 1.0, -0.5 * p, 0.5 * p);
        let roots = find_roots(&f, &w).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].order, 1);
        assert!((roots[0].location - Complex64::new(d, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn boundary_roots_are_captured() {
        // Window edges exactly on the outermost pair of roots.
        let f = cantor();
        let p = 2.0 * std::f64::consts::PI / 3.0f64.ln();
        let w = Window::new(0.0, 1.0, -2.0 * p, 2.0 * p);
        let roots = find_roots(&f, &w).unwrap();
        assert_eq!(roots.len(), 5);
        let d = 2.0f64.ln() / 3.0f64.ln();
        for (k, r) in (-2i32..=2).zip(&roots) {
            let expect = Complex64::new(d, f64::from(k) * p);
            assert!((r.location - expect).norm() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn double_root_multiplicity() {
        // 1 - 3 (1/4)^s - 2 (1/8)^s factors through z = 2^-s as
        // -(z + 1)^2 (2z - 1): a double zero where 2^-s = -1, that is at
        // s = i pi / ln 2 (mod vertical period), plus the real root at 1.
        let f = DirichletPolynomial::new(vec![
            (Base::rational(1, 4), 3.0),
            (Base::rational(1, 8), 2.0),
        ])
        .unwrap();
        assert!((f.real_dimension().unwrap() - 1.0).abs() < 1e-14);
        let target = std::f64::consts::PI / 2.0f64.ln();
        let w = Window::new(-0.5, 1.5, 3.0, 6.0);
        let roots = find_roots(&f, &w).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].order, 2);
        // An exact double zero is only determined up to the rounding
        // plateau radius sqrt(eval noise / |f''|), a few times 1e-8 here.
        assert!((roots[0].location - Complex64::new(0.0, target)).norm() < 1e-7);
    }

    #[test]
    fn empty_window() {
        let f = cantor();
        let w = Window::new(0.8, 1.4, 1.0, 2.0);
        assert!(find_roots(&f, &w).unwrap().is_empty());
    }
}
