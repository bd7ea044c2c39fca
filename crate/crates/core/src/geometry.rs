//! Geometric diagnostics: Jacobian, injectivity scans, boundary curves,
//! self-intersections, cusps and SVG rendering.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::HarmonicMap;

/// Collisions must close the image gap below this.
pub const IMAGE_GAP_THRESHOLD: f64 = 1e-10;
pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_RESOLUTION: usize = 400;
pub const DEFAULT_CUSP_TOLERANCE: f64 = 1e-6;
/// Outermost radius of the scan grid is `1 - SCAN_RADIUS_GAP`.
pub const SCAN_RADIUS_GAP: f64 = 1e-3;

const NEWTON_MAX_ITER: usize = 60;
const NEWTON_MAX_HALVINGS: usize = 40;
const LM_MAX_ITER: usize = 200;
const GOLDEN_ITER: usize = 120;

/// `|h'(z)|^2 - |g'(z)|^2`.
pub fn jacobian(f: &HarmonicMap, z: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("{z} is not in the open unit disk")));
    }
    let hp = f.analytic_derivative().value(z)?;
    let gp = f.coanalytic_derivative().value(z)?;
    Ok(hp.norm_sqr() - gp.norm_sqr())
}

/// Real partial derivatives `(f_x, f_y)` of `f` at `z`, as complex numbers.
fn real_partials(f: &HarmonicMap, z: Complex64) -> Result<(Complex64, Complex64)> {
    let hp = f.analytic_derivative().value(z)?;
    let gp = f.coanalytic_derivative().value(z)?.conj();
    Ok((hp + gp, Complex64::i() * (hp - gp)))
}

// ---------------------------------------------------------------------------
// Injectivity scan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectivityVerdict {
    /// No pair of distinct samples could be driven to a common image. Not a proof of injectivity.
    NoCollisionAtResolution,
    CollisionFound,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionWitness {
    pub z1: Complex64,
    pub z2: Complex64,
    pub image_gap: f64,
    pub preimage_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub verdict: InjectivityVerdict,
    pub witness: Option<CollisionWitness>,
    pub resolution: usize,
    pub delta: f64,
    pub samples: usize,
    pub failed_samples: usize,
    pub candidates: usize,
}

/// Checks a witness from scratch: both points in the disk, separated by at
/// least `delta`, with images closer than [`IMAGE_GAP_THRESHOLD`].
pub fn verify_witness(f: &HarmonicMap, z1: Complex64, z2: Complex64, delta: f64) -> Option<CollisionWitness> {
    if !(z1.norm() < 1.0 && z2.norm() < 1.0) {
        return None;
    }
    let image_gap = (f.eval(z1).ok()? - f.eval(z2).ok()?).norm();
    let preimage_gap = (z1 - z2).norm();
    (image_gap < IMAGE_GAP_THRESHOLD && preimage_gap >= delta).then_some(CollisionWitness {
        z1,
        z2,
        image_gap,
        preimage_gap,
    })
}

fn scan_points(resolution: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let r = (1.0 - SCAN_RADIUS_GAP) * (i + 1) as f64 / resolution as f64;
        for j in 0..resolution {
            pts.push(Complex64::from_polar(r, TAU * j as f64 / resolution as f64));
        }
    }
    pts
}

/// For each sample `i`, the sample `j > i` at least `delta` away whose image is
/// nearest among those in the same or a neighbouring hash cell. Ordered by `i`.
fn candidate_pairs(points: &[Complex64], images: &[Option<Complex64>], resolution: usize, delta: f64) -> Vec<(usize, usize)> {
    let valid: Vec<Complex64> = images.iter().flatten().copied().collect();
    if valid.is_empty() {
        return Vec::new();
    }
    let (mut lo, mut hi) = (valid[0], valid[0]);
    for w in &valid {
        lo = Complex64::new(lo.re.min(w.re), lo.im.min(w.im));
        hi = Complex64::new(hi.re.max(w.re), hi.im.max(w.im));
    }
    let diameter = (hi - lo).norm();
    if !(diameter > 0.0) {
        return Vec::new();
    }
    let side = diameter / resolution as f64;
    let cell = |w: Complex64| (((w.re - lo.re) / side).floor() as i64, ((w.im - lo.im) / side).floor() as i64);

    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, w) in images.iter().enumerate() {
        if let Some(w) = w {
            cells.entry(cell(*w)).or_default().push(i);
        }
    }
    let mut pairs = Vec::new();
    for (i, w) in images.iter().enumerate() {
        let Some(w) = w else { continue };
        let (cx, cy) = cell(*w);
        // keep only the partner with the closest image (smallest index on ties)
        let mut best: Option<(f64, usize)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(members) = cells.get(&(cx + dx, cy + dy)) else { continue };
                for &j in members {
                    if j > i && (points[i] - points[j]).norm() >= delta {
                        let gap = (images[j].unwrap_or(*w) - *w).norm();
                        if best.is_none_or(|(g, k)| gap < g || (gap == g && j < k)) {
                            best = Some((gap, j));
                        }
                    }
                }
            }
        }
        if let Some((_, j)) = best {
            pairs.push((i, j));
        }
    }
    pairs
}

fn solve2(m: [[f64; 2]; 2], b: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if !(det.abs() > 1e-14 * scale * scale) {
        return None;
    }
    Some([
        (b[0] * m[1][1] - b[1] * m[0][1]) / det,
        (m[0][0] * b[1] - m[1][0] * b[0]) / det,
    ])
}

enum NewtonOutcome {
    Converged(Complex64),
    Singular,
    Failed,
}

/// Damped Newton for `f(z2) = target` with the real 2x2 Jacobian.
fn newton_frozen(f: &HarmonicMap, target: Complex64, start: Complex64) -> NewtonOutcome {
    let mut z = start;
    let Ok(mut fz) = f.eval(z) else { return NewtonOutcome::Failed };
    let mut res = (fz - target).norm();
    for _ in 0..NEWTON_MAX_ITER {
        if res < 0.1 * IMAGE_GAP_THRESHOLD {
            break;
        }
        let Ok((fx, fy)) = real_partials(f, z) else { return NewtonOutcome::Failed };
        let r = fz - target;
        let Some(step) = solve2([[fx.re, fy.re], [fx.im, fy.im]], [-r.re, -r.im]) else {
            return NewtonOutcome::Singular;
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..NEWTON_MAX_HALVINGS {
            let trial = z + Complex64::new(step[0], step[1]) * t;
            if trial.norm() < 1.0 {
                if let Ok(ft) = f.eval(trial) {
                    let rt = (ft - target).norm();
                    if rt < res {
                        z = trial;
                        fz = ft;
                        res = rt;
                        accepted = true;
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if res < IMAGE_GAP_THRESHOLD {
        NewtonOutcome::Converged(z)
    } else {
        NewtonOutcome::Failed
    }
}

fn solve4(mut m: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&a, &c| m[a][col].abs().total_cmp(&m[c][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let k = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (entry, pivot) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= k * pivot;
            }
            b[row] -= k * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|c| m[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Levenberg–Marquardt on `|f(z1) - f(z2)|^2 + max(0, delta - |z1 - z2|)^2`, both points free.
fn joint_descent(f: &HarmonicMap, z1: Complex64, z2: Complex64, delta: f64) -> Option<(Complex64, Complex64)> {
    let residual = |a: Complex64, b: Complex64| -> Option<[f64; 3]> {
        if !(a.norm() < 1.0 && b.norm() < 1.0) {
            return None;
        }
        let d = f.eval(a).ok()? - f.eval(b).ok()?;
        Some([d.re, d.im, (delta - (a - b).norm()).max(0.0)])
    };
    let cost = |r: &[f64; 3]| r.iter().map(|v| v * v).sum::<f64>();
    let (mut a, mut b) = (z1, z2);
    let mut r = residual(a, b)?;
    let mut lambda = 1e-3;
    for _ in 0..LM_MAX_ITER {
        if r[0].hypot(r[1]) < 0.1 * IMAGE_GAP_THRESHOLD && r[2] == 0.0 {
            break;
        }
        let (ax, ay) = real_partials(f, a).ok()?;
        let (bx, by) = real_partials(f, b).ok()?;
        let diff = a - b;
        let dist = diff.norm();
        let pen = if r[2] > 0.0 && dist > 0.0 {
            let u = diff / dist;
            [-u.re, -u.im, u.re, u.im]
        } else {
            [0.0; 4]
        };
        let jac = [
            [ax.re, ay.re, -bx.re, -by.re],
            [ax.im, ay.im, -bx.im, -by.im],
            pen,
        ];
        let mut jtj = [[0.0; 4]; 4];
        let mut jtr = [0.0; 4];
        for p in 0..4 {
            for q in 0..4 {
                jtj[p][q] = (0..3).map(|k| jac[k][p] * jac[k][q]).sum();
            }
            jtr[p] = -(0..3).map(|k| jac[k][p] * r[k]).sum::<f64>();
        }
        let mut improved = false;
        for _ in 0..20 {
            let mut damped = jtj;
            for (p, row) in damped.iter_mut().enumerate() {
                row[p] += lambda * (1.0 + jtj[p][p]);
            }
            if let Some(s) = solve4(damped, jtr) {
                let na = a + Complex64::new(s[0], s[1]);
                let nb = b + Complex64::new(s[2], s[3]);
                if let Some(nr) = residual(na, nb) {
                    if cost(&nr) < cost(&r) {
                        a = na;
                        b = nb;
                        r = nr;
                        lambda = (lambda / 3.0).max(1e-12);
                        improved = true;
                        break;
                    }
                }
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    Some((a, b))
}

fn refine_candidate(f: &HarmonicMap, points: &[Complex64], images: &[Option<Complex64>], (i, j): (usize, usize), delta: f64) -> Option<CollisionWitness> {
    let (z1, z2) = (points[i], points[j]);
    let target = images[i]?;
    match newton_frozen(f, target, z2) {
        NewtonOutcome::Converged(w) => verify_witness(f, z1, w, delta),
        NewtonOutcome::Singular => {
            let (a, b) = joint_descent(f, z1, z2, delta)?;
            verify_witness(f, a, b, delta)
        }
        NewtonOutcome::Failed => None,
    }
}

/// Searches for two points at least `delta` apart with a common image.
pub fn injectivity_scan(f: &HarmonicMap, resolution: usize, delta: f64) -> Result<InjectivityReport> {
    if resolution < 32 {
        return Err(Error::domain(format!("resolution must be at least 32, got {resolution}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    let points = scan_points(resolution);
    let images: Vec<Option<Complex64>> = points
        .par_iter()
        .map(|&z| match f.eval(z) {
            Ok(w) if w.is_finite() => Some(w),
            Ok(w) => {
                log::warn!("non-finite image {w} at {z}");
                None
            }
            Err(e) => {
                log::warn!("evaluation failed at {z}: {e}");
                None
            }
        })
        .collect();
    let failed_samples = images.iter().filter(|w| w.is_none()).count();
    let pairs = candidate_pairs(&points, &images, resolution, delta);
    log::debug!("{} candidate pairs at resolution {resolution}", pairs.len());
    let witness = pairs
        .par_iter()
        .map(|&pair| refine_candidate(f, &points, &images, pair, delta))
        .find_first(Option::is_some)
        .flatten();
    let verdict = match (&witness, failed_samples) {
        (Some(_), _) => InjectivityVerdict::CollisionFound,
        (None, 0) => InjectivityVerdict::NoCollisionAtResolution,
        (None, _) => InjectivityVerdict::Inconclusive,
    };
    Ok(InjectivityReport {
        verdict,
        witness,
        resolution,
        delta,
        samples: points.len(),
        failed_samples,
        candidates: pairs.len(),
    })
}

// ---------------------------------------------------------------------------
// Boundary curves
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub theta: f64,
    pub point: Complex64,
}

/// Closed polyline through `f(e^{i theta})` at increasing `theta` in `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub samples: Vec<BoundarySample>,
    pub closed: bool,
}

impl BoundaryCurve {
    pub fn new(samples: Vec<BoundarySample>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::domain("a boundary curve needs at least 3 samples"));
        }
        if samples.windows(2).any(|w| !(w[0].theta < w[1].theta)) {
            return Err(Error::domain("boundary angles must be strictly increasing"));
        }
        if samples.iter().any(|s| !s.point.is_finite()) {
            return Err(Error::domain("boundary curve has non-finite points"));
        }
        Ok(BoundaryCurve { samples, closed: true })
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.samples.iter().map(|s| s.point)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn require_closed_disk(f: &HarmonicMap) -> Result<()> {
    if f.extends_to_closed_disk() {
        Ok(())
    } else {
        Err(Error::domain("map is not known to extend continuously to the closed disk"))
    }
}

fn circle_point(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// `f(e^{i theta})` at `n` equispaced angles.
pub fn boundary_curve(f: &HarmonicMap, n: usize) -> Result<BoundaryCurve> {
    require_closed_disk(f)?;
    if n < 64 {
        return Err(Error::domain(format!("need at least 64 boundary samples, got {n}")));
    }
    let samples = (0..n)
        .into_par_iter()
        .map(|k| {
            let theta = TAU * k as f64 / n as f64;
            Ok(BoundarySample {
                theta,
                point: f.eval(circle_point(theta))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BoundaryCurve::new(samples)
}

// ---------------------------------------------------------------------------
// Self-intersections
// ---------------------------------------------------------------------------

/// Transversal crossing of segments `i` and `j` (segment `k` joins samples `k` and `k + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    pub point: Complex64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Intersections {
    pub crossings: Vec<Crossing>,
    /// Collinear overlapping segment pairs; not counted as crossings.
    pub overlaps: Vec<(usize, usize)>,
}

fn coord(z: Complex64) -> Coord<f64> {
    Coord { x: z.re, y: z.im }
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    orient2d(coord(a), coord(b), coord(c))
}

fn collinear_overlap(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let dir = b - a;
    let proj = |p: Complex64| ((p - a) * dir.conj()).re;
    let (s0, s1) = (proj(c).min(proj(d)), proj(c).max(proj(d)));
    s1 > 0.0 && s0 < dir.norm_sqr()
}

/// Parameter `s` on `[a, b]` where the segment crosses the line through `c, d`,
/// by bisection on the sign of the exact orientation test.
fn bisect_crossing(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let side_a = orient(c, d, a).signum();
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if orient(c, d, a + (b - a) * mid).signum() == side_a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All transversal crossings between non-adjacent segments of the closed polyline.
pub fn self_intersections(curve: &BoundaryCurve) -> Intersections {
    let pts: Vec<Complex64> = curve.points().collect();
    let n = pts.len();
    let seg = |k: usize| (pts[k], pts[(k + 1) % n]);
    let side = (0..n)
        .map(|k| {
            let (a, b) = seg(k);
            (b - a).norm()
        })
        .fold(0.0, f64::max);
    if !(side > 0.0) {
        return Intersections::default();
    }
    let cell = |v: f64| (v / side).floor() as i64;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for k in 0..n {
        let (a, b) = seg(k);
        for cx in cell(a.re.min(b.re))..=cell(a.re.max(b.re)) {
            for cy in cell(a.im.min(b.im))..=cell(a.im.max(b.im)) {
                grid.entry((cx, cy)).or_default().push(k);
            }
        }
    }
    let mut pairs = Vec::new();
    for members in grid.values() {
        for (p, &u) in members.iter().enumerate() {
            for &v in &members[p + 1..] {
                let (i, j) = (u.min(v), u.max(v));
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if i != j && !adjacent {
                    pairs.push((i, j));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let mut out = Intersections::default();
    for (i, j) in pairs {
        let (a, b) = seg(i);
        let (c, d) = seg(j);
        let o1 = orient(a, b, c);
        let o2 = orient(a, b, d);
        let o3 = orient(c, d, a);
        let o4 = orient(c, d, b);
        if o1 == 0.0 && o2 == 0.0 {
            if collinear_overlap(a, b, c, d) {
                out.overlaps.push((i, j));
            }
            continue;
        }
        if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
            let s = bisect_crossing(a, b, c, d);
            out.crossings.push(Crossing {
                i,
                j,
                point: a + (b - a) * s,
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Cusps
// ---------------------------------------------------------------------------

/// `|d/dtheta f(e^{i theta})| = |z h'(z) - conj(z g'(z))|` at `z = e^{i theta}`.
pub fn boundary_speed(f: &HarmonicMap, theta: f64) -> Result<f64> {
    let z = circle_point(theta);
    let hp = f.analytic_derivative().value(z)?;
    let gp = f.coanalytic_derivative().value(z)?;
    Ok((z * hp - (z * gp).conj()).norm())
}

fn golden_section_min(f: &HarmonicMap, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = boundary_speed(f, x1)?;
    let mut f2 = boundary_speed(f, x2)?;
    for _ in 0..GOLDEN_ITER {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = boundary_speed(f, x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = boundary_speed(f, x2)?;
        }
        if !(x1 < x2) {
            break;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Angles where the boundary speed has a local minimum below `tol`, refined by golden section.
pub fn cusp_candidates(f: &HarmonicMap, n: usize, tol: f64) -> Result<Vec<f64>> {
    require_closed_disk(f)?;
    if n < 256 {
        return Err(Error::domain(format!("need at least 256 samples for cusp detection, got {n}")));
    }
    let step = TAU / n as f64;
    let speed: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| boundary_speed(f, step * k as f64))
        .collect::<Result<_>>()?;
    let minima: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = speed[(k + n - 1) % n];
            let next = speed[(k + 1) % n];
            speed[k] <= prev && speed[k] < next
        })
        .collect();
    let refined = minima
        .par_iter()
        .map(|&k| {
            let centre = step * k as f64;
            golden_section_min(f, centre - step, centre + step)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cusps: Vec<f64> = Vec::new();
    for (theta, value) in refined {
        if value < tol {
            let theta = theta.rem_euclid(TAU);
            // tiny negative angles wrap to exactly 2 pi
            let theta = if theta >= TAU { 0.0 } else { theta };
            if cusps.iter().all(|&c| circular_distance(c, theta) > 1e-9) {
                cusps.push(theta);
            }
        }
    }
    cusps.sort_by(f64::total_cmp);
    Ok(cusps)
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Annotations {
    pub crossings: Vec<Complex64>,
    pub cusps: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canvas {
    /// Width and height in pixels.
    pub size: u32,
}

impl Default for Canvas {
    fn default() -> Self {
        Canvas { size: 600 }
    }
}

const SVG_MARGIN: f64 = 0.05;

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Standalone SVG: equal-aspect viewBox around all curves with a 5% margin,
/// one path per curve, circles at crossings and crosses at cusps. The y axis
/// points up.
pub fn render_svg(curves: &[BoundaryCurve], annotations: &Annotations, canvas: Canvas) -> Result<String> {
    let all: Vec<Complex64> = curves.iter().flat_map(|c| c.points()).collect();
    if all.is_empty() {
        return Err(Error::domain("nothing to render"));
    }
    let (mut lo, mut hi) = (all[0], all[0]);
    for w in &all {
        lo = Complex64::new(lo.re.min(w.re), lo.im.min(w.im));
        hi = Complex64::new(hi.re.max(w.re), hi.im.max(w.im));
    }
    let centre = (lo + hi) * 0.5;
    let extent = (hi.re - lo.re).max(hi.im - lo.im);
    let half = if extent > 0.0 { 0.5 * extent * (1.0 + SVG_MARGIN) } else { 1.0 };
    let span = 2.0 * half;
    let stroke = span / canvas.size as f64 * 1.5;
    let marker = span * 0.012;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="{} {} {} {}">"#,
        num(centre.re - half),
        num(-centre.im - half),
        num(span),
        num(span),
        size = canvas.size
    );
    for curve in curves {
        let mut d = String::new();
        for (k, p) in curve.points().enumerate() {
            let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, num(p.re), num(-p.im));
        }
        d.push('Z');
        let _ = writeln!(
            out,
            r#"  <path d="{d}" fill="none" stroke="black" stroke-width="{}" stroke-linejoin="round"/>"#,
            num(stroke)
        );
    }
    for p in &annotations.crossings {
        let _ = writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="{}" fill="none" stroke="red" stroke-width="{}"/>"#,
            num(p.re),
            num(-p.im),
            num(marker),
            num(stroke)
        );
    }
    for p in &annotations.cusps {
        let (x, y) = (p.re, -p.im);
        let _ = writeln!(
            out,
            r#"  <path d="M{} {} L{} {} M{} {} L{} {}" fill="none" stroke="blue" stroke-width="{}"/>"#,
            num(x - marker),
            num(y - marker),
            num(x + marker),
            num(y + marker),
            num(x - marker),
            num(y + marker),
            num(x + marker),
            num(y - marker),
            num(stroke)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
