//! Grids, discretized PDMSE operators, eigensolvers and measure-weighted
//! quadrature: the independent numerical oracle the closed forms are checked
//! against.
//!
//! Hermitian families go through an exactly symmetric tridiagonal form
//! (Sturm bisection + inverse iteration); the PT families go through a dense
//! complex Hessenberg QR for discovery, with a determinant-Newton refinement
//! step on the tridiagonal form for acceptance-grade eigenvalues.

use crate::{Error, Result, C64};

pub const DEFAULT_NPOINTS: usize = 4001;
pub const COMPLEX_NPOINTS: usize = 1201;
const DENSE_LIMIT: usize = 1401;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    X,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub coordinate: Coordinate,
    pub lo: f64,
    pub hi: f64,
    pub npoints: usize,
}

impl Grid {
    pub fn new(coordinate: Coordinate, lo: f64, hi: f64, npoints: usize) -> Result<Self> {
        if npoints < 3 || !(hi > lo) {
            return Err(Error::GridTooCoarse(format!(
                "need npoints >= 3 and hi > lo, got [{lo}, {hi}] with {npoints}"
            )));
        }
        Ok(Grid { coordinate, lo, hi, npoints })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.npoints - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + self.spacing() * i as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.npoints).map(|i| self.point(i)).collect()
    }

    /// Same bounds, 2x resolution (for Richardson extrapolation).
    pub fn refined(&self) -> Grid {
        Grid { npoints: 2 * self.npoints - 1, ..self.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<C64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.npoints {
            return Err(Error::GridMismatch);
        }
        Ok(GridFunction { grid, values })
    }

    pub fn sample(grid: &Grid, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.points().iter().map(|&p| f(p)).collect();
        GridFunction { grid: grid.clone(), values }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

// Real symmetric tridiagonal realization of a Hermitian operator, together
// with the diagonal back-transform to physical psi samples.
#[derive(Debug, Clone)]
struct SymForm {
    diag: Vec<f64>,
    off: Vec<f64>,
    back: Vec<f64>,
}

/// Tridiagonal discretization over the interior points of a grid
/// (Dirichlet boundaries).
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub grid: Grid,
    pub lambda: f64,
    diag: Vec<C64>,
    sub: Vec<C64>,
    sup: Vec<C64>,
    sym: Option<SymForm>,
}

impl DiscreteOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.sym.is_some()
    }

    /// Apply to interior samples (length = dim).
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let m = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); m];
        for i in 0..m {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.sub[i] * v[i - 1];
            }
            if i + 1 < m {
                acc += self.sup[i] * v[i + 1];
            }
            out[i] = acc;
        }
        out
    }
}

/// -d^2/dz^2 + V(z) on the interior of a z grid.
pub fn build_operator_z(potential: impl Fn(f64) -> C64, grid: &Grid) -> DiscreteOperator {
    let h = grid.spacing();
    let m = grid.npoints - 2;
    let mut diag = Vec::with_capacity(m);
    for i in 1..=m {
        diag.push(2.0 / (h * h) + potential(grid.point(i)));
    }
    let off = C64::new(-1.0 / (h * h), 0.0);
    let sym = if diag.iter().all(|d| d.im == 0.0) {
        Some(SymForm {
            diag: diag.iter().map(|d| d.re).collect(),
            off: vec![off.re; m.saturating_sub(1)],
            back: vec![1.0; m],
        })
    } else {
        None
    };
    DiscreteOperator {
        grid: grid.clone(),
        lambda: 0.0,
        diag,
        sub: vec![off; m],
        sup: vec![off; m],
        sym,
    }
}

/// -(1+lambda x^2) psi'' - lambda x psi' + V psi on the interior of an x grid.
///
/// Written in flux form -sqrt(F) d/dx (sqrt(F) d/dx) + V with F = 1+lambda x^2
/// (exact identity, since (sqrt F)' sqrt F = lambda x), so the similarity
/// transform by F^{1/4} makes the real-potential case exactly symmetric.
pub fn build_operator_x(
    lambda: f64,
    potential: impl Fn(f64) -> C64,
    grid: &Grid,
) -> DiscreteOperator {
    let h = grid.spacing();
    let m = grid.npoints - 2;
    let f = |x: f64| 1.0 + lambda * x * x;
    let sqf_half = |i: usize| f(0.5 * (grid.point(i) + grid.point(i + 1))).sqrt();

    let mut diag = Vec::with_capacity(m);
    let mut sub = Vec::with_capacity(m);
    let mut sup = Vec::with_capacity(m);
    let mut k_diag = Vec::with_capacity(m);
    let mut k_off = Vec::with_capacity(m.saturating_sub(1));
    for i in 1..=m {
        let sfi = f(grid.point(i)).sqrt();
        let kd = (sqf_half(i - 1) + sqf_half(i)) / (h * h);
        k_diag.push(kd);
        diag.push(C64::new(sfi * kd, 0.0) + potential(grid.point(i)));
        sub.push(C64::new(-sfi * sqf_half(i - 1) / (h * h), 0.0));
        sup.push(C64::new(-sfi * sqf_half(i) / (h * h), 0.0));
        if i < m {
            k_off.push(-sqf_half(i) / (h * h));
        }
    }
    let sym = if diag.iter().all(|d| d.im == 0.0) {
        let back: Vec<f64> = (1..=m).map(|i| f(grid.point(i)).powf(0.25)).collect();
        let sdiag: Vec<f64> = (0..m)
            .map(|j| back[j] * k_diag[j] * back[j] + (diag[j].re - f(grid.point(j + 1)).sqrt() * k_diag[j]))
            .collect();
        let soff: Vec<f64> = (0..m.saturating_sub(1))
            .map(|j| back[j] * k_off[j] * back[j + 1])
            .collect();
        Some(SymForm { diag: sdiag, off: soff, back })
    } else {
        None
    };
    DiscreteOperator { grid: grid.clone(), lambda, diag, sub, sup, sym }
}

/// k eigenpairs of smallest real part, vectors normalized under the
/// d-mu measure (plain dz for z grids). Vector entries at the two boundary
/// points are zero.
pub fn eigensolve(op: &DiscreteOperator, k: usize) -> Result<Vec<(C64, GridFunction)>> {
    if k > op.dim() {
        return Err(Error::GridTooCoarse(format!(
            "requested {k} eigenpairs from a {}-point interior", op.dim()
        )));
    }
    let values: Vec<C64> = match &op.sym {
        Some(sym) => sturm_smallest(&sym.diag, &sym.off, k)?
            .into_iter()
            .map(|e| C64::new(e, 0.0))
            .collect(),
        None => {
            if op.dim() > DENSE_LIMIT {
                return Err(Error::GridTooCoarse(format!(
                    "dense complex solve capped at {DENSE_LIMIT} points, got {}", op.dim()
                )));
            }
            let mut all = hessenberg_qr_eigenvalues(op)?;
            all.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            all.truncate(k);
            all
        }
    };
    let mut out = Vec::with_capacity(k);
    for e in values {
        let v = inverse_iteration(op, e)?;
        out.push((e, embed_and_normalize(op, v)?));
    }
    Ok(out)
}

fn embed_and_normalize(op: &DiscreteOperator, mut v: Vec<C64>) -> Result<GridFunction> {
    if let Some(sym) = &op.sym {
        for (vi, b) in v.iter_mut().zip(&sym.back) {
            *vi *= *b;
        }
    }
    let mut values = vec![C64::new(0.0, 0.0); op.grid.npoints];
    values[1..op.grid.npoints - 1].copy_from_slice(&v);
    let f = GridFunction::new(op.grid.clone(), values)?;
    let lambda = match op.grid.coordinate {
        Coordinate::X => op.lambda,
        Coordinate::Z => 0.0,
    };
    let nrm = inner_product_mu(&f, &f, lambda)?.re.sqrt();
    if !(nrm > 0.0) || !nrm.is_finite() {
        return Err(Error::NonConvergence);
    }
    let mut values = f.values;
    // canonical phase: largest-magnitude entry rotated to the positive real axis
    let pivot = values
        .iter()
        .cloned()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .unwrap();
    let phase = if pivot.norm() > 0.0 { pivot / pivot.norm() } else { C64::new(1.0, 0.0) };
    for vi in values.iter_mut() {
        *vi = *vi / (nrm * phase);
    }
    GridFunction::new(op.grid.clone(), values)
}

// Sturm-sequence count of eigenvalues below x for a symmetric tridiagonal.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    let tiny = 1e-300;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - e2 / if q.abs() < tiny { tiny.copysign(q) } else { q };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn sturm_smallest(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i < off.len() {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = (hi - lo).max(1.0);
    let mut out = Vec::with_capacity(k);
    for idx in 0..k {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid) > idx {
                b = mid;
            } else {
                a = mid;
            }
            if b - a < 1e-14 * scale {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

// Tridiagonal solve of (T - shift I) w = rhs with partial pivoting
// (one fill-in superdiagonal). Returns None when exactly singular.
fn tridiag_solve_shifted(
    op: &DiscreteOperator,
    shift: C64,
    rhs: &[C64],
) -> Option<Vec<C64>> {
    let n = op.dim();
    let zero = C64::new(0.0, 0.0);
    let mut d: Vec<C64> = (0..n).map(|i| op.diag[i] - shift).collect();
    let mut du: Vec<C64> = (0..n.saturating_sub(1)).map(|i| op.sup[i]).collect();
    let mut du2 = vec![zero; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n - 1 {
        let dl = op.sub[i + 1];
        if d[i].norm() >= dl.norm() {
            if d[i].norm() == 0.0 {
                return None;
            }
            let fact = dl / d[i];
            d[i + 1] -= fact * du[i];
            let bi = b[i];
            b[i + 1] -= fact * bi;
        } else {
            let fact = d[i] / dl;
            d[i] = dl;
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            du[i] = temp;
            b.swap(i, i + 1);
            let bi = b[i];
            b[i + 1] -= fact * bi;
        }
    }
    if d[n - 1].norm() == 0.0 {
        return None;
    }
    let mut x = vec![zero; n];
    x[n - 1] = b[n - 1] / d[n - 1];
    if n >= 2 {
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    Some(x)
}

fn inverse_iteration(op: &DiscreteOperator, e: C64) -> Result<Vec<C64>> {
    let n = op.dim();
    let scale = op.diag.iter().map(|d| d.norm()).fold(0.0, f64::max).max(1.0);
    let mut shift = e;
    let mut v: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + ((i * 2654435761) % 97) as f64 / 97.0, 0.0))
        .collect();
    normalize_l2(&mut v);
    for it in 0..60 {
        let w = match tridiag_solve_shifted(op, shift, &v) {
            Some(w) => w,
            None => {
                shift += C64::new(1e-12 * scale, 0.0);
                continue;
            }
        };
        let growth = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut w = w;
        normalize_l2(&mut w);
        // residual of the eigen equation
        let r: f64 = op
            .apply(&w)
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - e * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        v = w;
        if r < 1e-9 * scale || growth > 1e14 {
            return Ok(v);
        }
        if it > 4 {
            shift += C64::new(1e-13 * scale * (it as f64), 0.0);
        }
    }
    Ok(v)
}

fn normalize_l2(v: &mut [C64]) {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for c in v.iter_mut() {
            *c /= n;
        }
    }
}

// All eigenvalues of the tridiagonal (treated as upper Hessenberg) via a
// single-shift complex QR iteration with Givens rotations and deflation.
fn hessenberg_qr_eigenvalues(op: &DiscreteOperator) -> Result<Vec<C64>> {
    let n = op.dim();
    let mut a = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        a[i * n + i] = op.diag[i];
        if i > 0 {
            a[i * n + i - 1] = op.sub[i];
        }
        if i + 1 < n {
            a[i * n + i + 1] = op.sup[i];
        }
    }
    let mut eig = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let mut iters_since_deflate = 0usize;
    let mut total = 0usize;
    let norm_scale: f64 = op.diag.iter().map(|d| d.norm()).fold(0.0, f64::max).max(1.0);
    while hi > 0 {
        if total > 60 * n {
            return Err(Error::NonConvergence);
        }
        if hi == 1 {
            eig.push(a[0]);
            hi = 0;
            continue;
        }
        // deflation scan from the bottom of the active block
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = a[lo * n + lo - 1].norm();
            if sub < 1e-14 * (a[lo * n + lo].norm() + a[(lo - 1) * n + lo - 1].norm() + norm_scale) {
                a[lo * n + lo - 1] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig.push(a[lo * n + lo]);
            hi -= 1;
            iters_since_deflate = 0;
            continue;
        }
        // Wilkinson shift from the trailing 2x2 of the active block
        let m = hi - 1;
        let (h00, h01) = (a[(m - 1) * n + m - 1], a[(m - 1) * n + m]);
        let (h10, h11) = (a[m * n + m - 1], a[m * n + m]);
        let tr = h00 + h11;
        let det = h00 * h11 - h01 * h10;
        let disc = (tr * tr - 4.0 * det).sqrt();
        let r1 = (tr + disc) / 2.0;
        let r2 = (tr - disc) / 2.0;
        let mut shift = if (r1 - h11).norm() < (r2 - h11).norm() { r1 } else { r2 };
        if iters_since_deflate > 0 && iters_since_deflate % 12 == 0 {
            // exceptional shift to break cycles
            shift += C64::new(a[m * n + m - 1].norm(), 0.0);
        }
        // explicit single-shift QR sweep on rows lo..hi
        for i in lo..hi {
            a[i * n + i] -= shift;
        }
        let mut givens = Vec::with_capacity(hi - lo - 1);
        let mut x = a[lo * n + lo];
        let mut y = a[(lo + 1) * n + lo];
        for k in lo..hi - 1 {
            let (c, s) = givens_coeffs(x, y);
            givens.push((c, s));
            // apply G_k from the left to rows k, k+1 (zeroes the subdiagonal)
            for j in k.saturating_sub(1)..hi {
                let t1 = a[k * n + j];
                let t2 = a[(k + 1) * n + j];
                a[k * n + j] = c * t1 + s * t2;
                a[(k + 1) * n + j] = -s.conj() * t1 + c * t2;
            }
            if k + 2 < hi {
                x = a[(k + 1) * n + k + 1];
                y = a[(k + 2) * n + k + 1];
            }
        }
        for (k, &(c, s)) in givens.iter().enumerate() {
            let k = lo + k;
            // apply G_k^H from the right to columns k, k+1
            let top = (k + 3).min(hi);
            for i in lo..top {
                let t1 = a[i * n + k];
                let t2 = a[i * n + k + 1];
                a[i * n + k] = c * t1 + s.conj() * t2;
                a[i * n + k + 1] = -s * t1 + c * t2;
            }
        }
        for i in lo..hi {
            a[i * n + i] += shift;
        }
        iters_since_deflate += 1;
        total += 1;
    }
    Ok(eig)
}

// unitary [[c, s], [-conj(s), c]] with c real zeroing the second component
// of (x, y)
fn givens_coeffs(x: C64, y: C64) -> (C64, C64) {
    let nx = x.norm();
    let ny = y.norm();
    if ny == 0.0 {
        return (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    }
    if nx == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    }
    let r = (nx * nx + ny * ny).sqrt();
    let c = C64::new(nx / r, 0.0);
    let s = (x / nx) * (y.conj() / r);
    (c, s)
}

/// Newton refinement of an eigenvalue via the tridiagonal characteristic
/// determinant recurrence (rescaled each step to stay finite).
pub fn refine_eigenvalue(op: &DiscreteOperator, e0: C64) -> Result<C64> {
    let n = op.dim();
    let scale = op.diag.iter().map(|d| d.norm()).fold(0.0, f64::max).max(1.0);
    let mut e = e0;
    for _ in 0..80 {
        // p_i = (d_i - e) p_{i-1} - sub_i sup_{i-1} p_{i-2}, dp = d/dE p
        let mut pm2 = C64::new(1.0, 0.0);
        let mut pm1 = op.diag[0] - e;
        let mut dm2 = C64::new(0.0, 0.0);
        let mut dm1 = C64::new(-1.0, 0.0);
        for i in 1..n {
            let w = op.sub[i] * op.sup[i - 1];
            let p = (op.diag[i] - e) * pm1 - w * pm2;
            let dp = -pm1 + (op.diag[i] - e) * dm1 - w * dm2;
            let m = p.norm().max(dp.norm());
            let (p, dp, pm1s, dm1s) = if m > 1e100 {
                (p / m, dp / m, pm1 / m, dm1 / m)
            } else {
                (p, dp, pm1, dm1)
            };
            pm2 = pm1s;
            dm2 = dm1s;
            pm1 = p;
            dm1 = dp;
        }
        if dm1.norm() == 0.0 {
            return Err(Error::NonConvergence);
        }
        let step = pm1 / dm1;
        e -= step;
        if step.norm() < 1e-13 * scale.max(e.norm()) {
            return Ok(e);
        }
    }
    Err(Error::NonConvergence)
}

/// Richardson extrapolation for a second-order-accurate eigenvalue computed
/// at spacing h and h/2.
pub fn richardson(e_h: C64, e_half: C64) -> C64 {
    (4.0 * e_half - e_h) / 3.0
}

/// Fourth-order first derivative on a uniform grid; 5-point central stencil
/// in the interior, one-sided 5-point stencils at the edges.
pub fn derivative(f: &GridFunction) -> Result<GridFunction> {
    let n = f.grid.npoints;
    if n < 5 {
        return Err(Error::GridTooCoarse(format!("derivative needs >= 5 points, got {n}")));
    }
    let h = f.grid.spacing();
    let v = &f.values;
    let mut out = vec![C64::new(0.0, 0.0); n];
    let d = 12.0 * h;
    out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / d;
    out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / d;
    for i in 2..n - 2 {
        out[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / d;
    }
    out[n - 2] =
        (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / d;
    out[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4]
        + 3.0 * v[n - 5])
        / d;
    GridFunction::new(f.grid.clone(), out)
}

/// Fourth-order second derivative (5-point central) in the interior; the two
/// points at each edge fall back to the second-order 3-point stencil, so
/// residual oracles should skip them.
pub fn second_derivative(f: &GridFunction) -> Result<GridFunction> {
    let n = f.grid.npoints;
    if n < 7 {
        return Err(Error::GridTooCoarse(format!(
            "second derivative needs >= 7 points, got {n}"
        )));
    }
    let h2 = f.grid.spacing().powi(2);
    let v = &f.values;
    let mut out = vec![C64::new(0.0, 0.0); n];
    for i in 2..n - 2 {
        out[i] = (-v[i + 2] + 16.0 * v[i + 1] - 30.0 * v[i] + 16.0 * v[i - 1] - v[i - 2])
            / (12.0 * h2);
    }
    out[0] = (v[0] - 2.0 * v[1] + v[2]) / h2;
    out[1] = (v[0] - 2.0 * v[1] + v[2]) / h2;
    out[n - 2] = (v[n - 3] - 2.0 * v[n - 2] + v[n - 1]) / h2;
    out[n - 1] = (v[n - 3] - 2.0 * v[n - 2] + v[n - 1]) / h2;
    GridFunction::new(f.grid.clone(), out)
}

/// Composite Simpson quadrature of conj(f) g dmu with
/// dmu = dx / sqrt(1 + lambda x^2) on x grids (plain dz on z grids —
/// pass lambda = 0).
pub fn inner_product_mu(f: &GridFunction, g: &GridFunction, lambda: f64) -> Result<C64> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    let grid = &f.grid;
    let n = grid.npoints;
    let h = grid.spacing();
    let weight = |i: usize| {
        let x = grid.point(i);
        match grid.coordinate {
            Coordinate::X => 1.0 / (1.0 + lambda * x * x).sqrt(),
            Coordinate::Z => 1.0,
        }
    };
    let term = |i: usize| f.values[i].conj() * g.values[i] * weight(i);
    let mut acc = C64::new(0.0, 0.0);
    let m = if n % 2 == 1 { n } else { n - 1 }; // Simpson needs odd point count
    acc += term(0) + term(m - 1);
    for i in 1..m - 1 {
        acc += term(i) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc *= h / 3.0;
    if n % 2 == 0 {
        acc += (term(n - 2) + term(n - 1)) * (h / 2.0);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn particle_in_a_box() {
        let grid = Grid::new(Coordinate::Z, 0.0, 1.0, 801).unwrap();
        let op = build_operator_z(|_| C64::new(0.0, 0.0), &grid);
        let eigs = eigensolve(&op, 3).unwrap();
        for (k, (e, _)) in eigs.iter().enumerate() {
            let exact = ((k + 1) as f64 * std::f64::consts::PI).powi(2);
            assert!((e.re - exact).abs() < 5e-3 * exact, "k = {k}: {} vs {exact}", e.re);
            assert!(e.im.abs() < 1e-12);
        }
    }

    #[test]
    fn harmonic_ground_state() {
        let grid = Grid::new(Coordinate::Z, -12.0, 12.0, 4001).unwrap();
        let op = build_operator_z(|z| C64::new(z * z, 0.0), &grid);
        let e0 = eigensolve(&op, 1).unwrap()[0].0.re;
        let fine = build_operator_z(|z| C64::new(z * z, 0.0), &grid.refined());
        let e0f = eigensolve(&fine, 1).unwrap()[0].0.re;
        let r = richardson(C64::new(e0, 0.0), C64::new(e0f, 0.0)).re;
        assert!((r - 1.0).abs() < 1e-6, "richardson E0 = {r}");
    }

    #[test]
    fn x_form_matches_z_form_free_mass() {
        // lambda = 0: x-form reduces to the constant-mass operator exactly
        let grid = Grid::new(Coordinate::X, -6.0, 6.0, 1001).unwrap();
        let op = build_operator_x(0.0, |x| C64::new(x * x, 0.0), &grid);
        let zgrid = Grid::new(Coordinate::Z, -6.0, 6.0, 1001).unwrap();
        let opz = build_operator_z(|z| C64::new(z * z, 0.0), &zgrid);
        let ex = eigensolve(&op, 2).unwrap();
        let ez = eigensolve(&opz, 2).unwrap();
        for (a, b) in ex.iter().zip(&ez) {
            assert!((a.0 - b.0).norm() < 1e-10);
        }
    }

    #[test]
    fn complex_path_agrees_with_symmetric_path() {
        let grid = Grid::new(Coordinate::Z, -8.0, 8.0, 301).unwrap();
        let op = build_operator_z(|z| C64::new(z * z, 0.0), &grid);
        // force the complex dense path by erasing the symmetric form
        let dense = DiscreteOperator { sym: None, ..op.clone() };
        let es = eigensolve(&op, 4).unwrap();
        let ec = eigensolve(&dense, 4).unwrap();
        for (a, b) in es.iter().zip(&ec) {
            assert!((a.0 - b.0).norm() < 1e-9, "{} vs {}", a.0, b.0);
        }
    }

    #[test]
    fn refine_hits_symmetric_eigenvalue() {
        let grid = Grid::new(Coordinate::Z, -10.0, 10.0, 801).unwrap();
        let op = build_operator_z(|z| C64::new(z * z, 0.0), &grid);
        let e = eigensolve(&op, 1).unwrap()[0].0;
        let r = refine_eigenvalue(&op, e + C64::new(1e-4, 0.0)).unwrap();
        assert!((r - e).norm() < 1e-9);
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let grid = Grid::new(Coordinate::Z, 0.0, 1.0, 101).unwrap();
        let f = GridFunction::sample(&grid, |z| C64::new(z * z * z, 0.0));
        let one = GridFunction::sample(&grid, |_| C64::new(1.0, 0.0));
        let v = inner_product_mu(&one, &f, 0.0).unwrap();
        assert!((v.re - 0.25).abs() < 1e-14);
    }

    #[test]
    fn grid_mismatch_detected() {
        let g1 = Grid::new(Coordinate::Z, 0.0, 1.0, 11).unwrap();
        let g2 = Grid::new(Coordinate::Z, 0.0, 1.0, 13).unwrap();
        let f = GridFunction::sample(&g1, |_| C64::new(1.0, 0.0));
        let g = GridFunction::sample(&g2, |_| C64::new(1.0, 0.0));
        assert!(matches!(inner_product_mu(&f, &g, 0.0), Err(Error::GridMismatch)));
    }
}
