//! Pointwise classification of curvature: Einstein and generalized Einstein
//! fits, special directions annihilating the Weyl tensor, and the scalar
//! summaries the report layer aggregates.

use nalgebra::{DMatrix, DVector};

use crate::curvature::{constant_curvature_riem04, PointCurvature};
use crate::error::{Error, Result};
use crate::tensor::{IndexIter, TensorValue};

/// Thresholds used across the crate, from strictest to loosest:
/// `structural` for exact identities, `derived` for quantities passed
/// through one layer of computation, `theorem` for statement-level
/// conclusions. All comparisons scale by `1 + ‖input‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub structural: f64,
    pub derived: f64,
    pub theorem: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { structural: 1e-9, derived: 1e-8, theorem: 1e-6 }
    }
}

/// Causal type of a vector in a semi-Riemannian chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causality {
    Spacelike,
    Timelike,
    Null,
}

pub fn causality_of(g: &TensorValue, v: &[f64], tol: f64) -> Causality {
    let n = g.dim();
    let mut q = 0.0;
    let mut norm = 0.0;
    for i in 0..n {
        norm += v[i] * v[i];
        for j in 0..n {
            q += g.get(&[i, j]) * v[i] * v[j];
        }
    }
    let scaled = tol * (1.0 + g.max_abs()) * norm.max(1e-300);
    if q.abs() <= scaled {
        Causality::Null
    } else if q > 0.0 {
        Causality::Spacelike
    } else {
        Causality::Timelike
    }
}

/// Result of fitting `Ric = a g + b u ⊗ u` with `u` the metric dual of a
/// distinguished vector `U`. When `U` is non-null it is normalized to
/// `g(U,U) = ±1`; for null `U` the scale is fixed by `b = ±1` instead.
#[derive(Debug, Clone)]
pub struct QuasiEinsteinFit {
    pub a: f64,
    pub b: f64,
    /// Max-abs of `Ric − a g − b u⊗u`.
    pub residual: f64,
    /// Largest and second-largest eigenvalue magnitudes of `Ric − a g`.
    pub sigma: (f64, f64),
    /// Rank of `Ric − a g` and of `Q − a I`; they must agree for a clean fit.
    pub rank_t: usize,
    pub rank_q: usize,
    pub is_einstein: bool,
    pub u_cov: Option<Vec<f64>>,
    pub u_vec: Option<Vec<f64>>,
    pub causality: Option<Causality>,
    pub holds: bool,
}

/// Iteration cap for the eigenvalue and singular-value routines. The
/// backing solvers can stall indefinitely on zero or noise-scale inputs,
/// so every decomposition here runs on a matrix normalized to unit max
/// entry and under a hard iteration bound.
const EIGEN_MAX_ITER: usize = 500;

/// Real spectrum of a matrix, robust against solver stalls. Falls back
/// to the diagonal when the bounded iteration does not converge.
fn robust_real_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let scale = m.amax();
    if scale == 0.0 || !scale.is_finite() {
        return vec![0.0; n];
    }
    match nalgebra::Schur::try_new(m / scale, f64::EPSILON, EIGEN_MAX_ITER) {
        Some(schur) => schur.complex_eigenvalues().iter().map(|e| e.re * scale).collect(),
        None => (0..n).map(|i| m[(i, i)]).collect(),
    }
}

/// Symmetric eigendecomposition with the same normalization guard.
/// Eigenvectors are scale-invariant, so only eigenvalues are rescaled.
fn robust_symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let scale = m.amax();
    if scale == 0.0 || !scale.is_finite() {
        return (DVector::zeros(n), DMatrix::identity(n, n));
    }
    match nalgebra::SymmetricEigen::try_new(m / scale, f64::EPSILON, EIGEN_MAX_ITER) {
        Some(eig) => (eig.eigenvalues * scale, eig.eigenvectors),
        None => (DVector::from_fn(n, |i, _| m[(i, i)]), DMatrix::identity(n, n)),
    }
}

fn robust_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let scale = m.amax();
    if scale == 0.0 || !scale.is_finite() {
        return vec![0.0; m.nrows().min(m.ncols())];
    }
    match (m / scale).try_svd(false, false, f64::EPSILON, EIGEN_MAX_ITER) {
        Some(svd) => svd.singular_values.iter().map(|s| s * scale).collect(),
        None => vec![f64::INFINITY; m.nrows().min(m.ncols())],
    }
}

fn matrix_rank_svd(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = robust_singular_values(m);
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let thresh = rel_tol * (1.0 + smax);
    sv.iter().filter(|s| **s > thresh).count()
}

/// Eigenvalue-cluster candidates for the Einstein constant, plus `r/n`.
fn einstein_candidates(q_op: &DMatrix<f64>, scalar: f64, n: usize) -> Vec<f64> {
    let eigs = robust_real_eigenvalues(q_op);
    let max_mod = eigs.iter().map(|c| c.abs()).fold(0.0f64, f64::max);
    let gap = 1e-7 * (1.0 + max_mod);
    let mut candidates: Vec<f64> = Vec::new();
    let mut used = vec![false; eigs.len()];
    for i in 0..eigs.len() {
        if used[i] {
            continue;
        }
        let mut sum = eigs[i];
        let mut count = 1.0;
        used[i] = true;
        for j in i + 1..eigs.len() {
            if !used[j] && (eigs[j] - eigs[i]).abs() < gap {
                sum += eigs[j];
                count += 1.0;
                used[j] = true;
            }
        }
        candidates.push(sum / count);
    }
    candidates.push(scalar / n as f64);
    candidates.dedup_by(|a, b| (*a - *b).abs() < gap);
    candidates
}

pub fn quasi_einstein_fit(c: &PointCurvature, tol: &Tolerances) -> QuasiEinsteinFit {
    let n = c.dim;
    let ric = c.ricci.to_matrix();
    let g = c.g.to_matrix();
    let g_inv = c.g_inv.to_matrix();
    let q_op = c.ricci_op.to_matrix().transpose();
    let ric_scale = 1.0 + c.ricci.max_abs();

    let mut best: Option<QuasiEinsteinFit> = None;
    for a in einstein_candidates(&q_op, c.scalar, n) {
        let t = &ric - a * &g;
        let (eigenvalues, eigenvectors) = robust_symmetric_eigen(&t);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            eigenvalues[j].abs().partial_cmp(&eigenvalues[i].abs()).unwrap()
        });
        let s1 = eigenvalues[order[0]].abs();
        let s2 = if n > 1 { eigenvalues[order[1]].abs() } else { 0.0 };
        let fit = if s1 <= tol.derived * ric_scale {
            QuasiEinsteinFit {
                a,
                b: 0.0,
                residual: t.amax(),
                sigma: (s1, s2),
                rank_t: 0,
                rank_q: matrix_rank_svd(&(&q_op - a * DMatrix::identity(n, n)), tol.derived),
                is_einstein: true,
                u_cov: None,
                u_vec: None,
                causality: None,
                holds: t.amax() <= tol.theorem * ric_scale,
            }
        } else {
            let s = eigenvalues[order[0]];
            let w = eigenvectors.column(order[0]).clone_owned();
            let q_val = (w.transpose() * &g_inv * &w)[(0, 0)];
            let (b, u_cov, u_vec, causality) = if q_val.abs()
                > tol.derived * (1.0 + g_inv.amax())
            {
                let lam = 1.0 / q_val.abs().sqrt();
                let u: DVector<f64> = &w * lam;
                let uvec = &g_inv * &u;
                let causality =
                    if q_val > 0.0 { Causality::Spacelike } else { Causality::Timelike };
                (s * q_val.abs(), u, uvec, causality)
            } else {
                let u: DVector<f64> = &w * s.abs().sqrt();
                let uvec = &g_inv * &u;
                (s.signum(), u, uvec, Causality::Null)
            };
            let recon = &g * a + &u_cov * b * u_cov.transpose();
            let residual = (&ric - recon).amax();
            QuasiEinsteinFit {
                a,
                b,
                residual,
                sigma: (s1, s2),
                rank_t: matrix_rank_svd(&t, tol.derived),
                rank_q: matrix_rank_svd(&(&q_op - a * DMatrix::identity(n, n)), tol.derived),
                is_einstein: false,
                u_cov: Some(u_cov.iter().cloned().collect()),
                u_vec: Some(u_vec.iter().cloned().collect()),
                causality: Some(causality),
                holds: residual <= tol.theorem * ric_scale,
            }
        };
        let better = match &best {
            None => true,
            Some(b) => fit.residual < b.residual,
        };
        if better {
            best = Some(fit);
        }
    }
    best.expect("candidate list is never empty")
}

/// True when the traceless Ricci tensor vanishes to tolerance.
pub fn is_einstein(c: &PointCurvature, tol: &Tolerances) -> bool {
    let n = c.dim as f64;
    let residual = c.ricci.sub(&c.g.scale(c.scalar / n)).max_abs();
    residual <= tol.theorem * (1.0 + c.ricci.max_abs())
}

/// Fit to constant sectional curvature `c = r/(n(n−1))`.
#[derive(Debug, Clone)]
pub struct ConstantCurvatureFit {
    pub sectional: f64,
    pub residual: f64,
    pub holds: bool,
}

pub fn constant_curvature_fit(pc: &PointCurvature, tol: &Tolerances) -> ConstantCurvatureFit {
    let n = pc.dim as f64;
    let sectional = pc.scalar / (n * (n - 1.0));
    let residual = pc.riem04.sub(&constant_curvature_riem04(&pc.g, sectional)).max_abs();
    ConstantCurvatureFit {
        sectional,
        residual,
        holds: residual <= tol.theorem * (1.0 + pc.riem04.max_abs()),
    }
}

/// A direction annihilating a (1,3) curvature-type tensor on its third slot.
#[derive(Debug, Clone)]
pub struct KernelDirection {
    /// Unit vector in the Euclidean sense of the chart.
    pub vector: Vec<f64>,
    pub causality: Causality,
}

/// Nullspace of `v ↦ T(·, ·, v)` for a tensor with variance `[D,D,D,U]`,
/// computed from the SVD of the flattened `n³ × n` matrix.
pub fn contraction_kernel(t13: &TensorValue, rel_tol: f64) -> Vec<Vec<f64>> {
    let n = t13.dim();
    assert_eq!(t13.rank(), 4);
    let mut a = DMatrix::zeros(n * n * n, n);
    for idx in IndexIter::new(n, 4) {
        let [i, j, k, l, ..] = idx;
        a[((i * n + j) * n + l, k)] = t13.get(&[i, j, k, l]);
    }
    let scale = a.amax();
    if scale == 0.0 {
        // Zero tensor: every direction annihilates it.
        return (0..n)
            .map(|k| (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect())
            .collect();
    }
    let Some(svd) = (a / scale).try_svd(false, true, f64::EPSILON, EIGEN_MAX_ITER) else {
        return Vec::new();
    };
    let smax = scale * svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let thresh = rel_tol * (1.0 + smax);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut kernel = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s * scale <= thresh {
            kernel.push(v_t.row(i).iter().cloned().collect());
        }
    }
    kernel
}

/// How far `v` is from annihilating the Weyl tensor: max-abs of the
/// contraction of the third lower slot with the normalized direction.
pub fn weyl_direction_residual(c: &PointCurvature, v: &[f64]) -> Result<f64> {
    let w13 = c.weyl13.as_ref().ok_or(Error::WeylDimension { dim: c.dim })?;
    let n = c.dim;
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale < 1e-300 {
        return Err(Error::invalid("annihilator candidate must be non-zero"));
    }
    let mut worst = 0.0f64;
    for idx in IndexIter::new(n, 3) {
        let [i, j, l, ..] = idx;
        let mut acc = 0.0;
        for (k, vk) in v.iter().enumerate() {
            acc += w13.get(&[i, j, k, l]) * vk / scale;
        }
        worst = worst.max(acc.abs());
    }
    Ok(worst)
}

/// Weyl annihilator report: the special directions, their causal types, and
/// a cross-check that assembles the same kernel from the fully lowered Weyl
/// tensor with the last slot raised independently.
#[derive(Debug, Clone)]
pub struct WeylKernel {
    pub directions: Vec<KernelDirection>,
    pub weyl_norm: f64,
    /// Worst projection mismatch between the two kernel assemblies.
    pub dual_consistency: f64,
}

pub fn weyl_kernel(c: &PointCurvature, tol: &Tolerances) -> Result<WeylKernel> {
    let w13 = c.weyl13.as_ref().ok_or(Error::WeylDimension { dim: c.dim })?;
    let w04 = c.weyl04.as_ref().expect("weyl04 accompanies weyl13");
    let n = c.dim;
    let kernel = contraction_kernel(w13, tol.derived);

    let w13_alt = w04
        .raise_index(3, &c.g_inv.to_matrix())
        .expect("last slot of the lowered Weyl tensor is down");
    let alt_kernel = contraction_kernel(&w13_alt, tol.derived);
    let dual_consistency = subspace_mismatch(&kernel, &alt_kernel, n);

    let directions = kernel
        .into_iter()
        .map(|v| {
            let causality = causality_of(&c.g, &v, tol.derived);
            KernelDirection { vector: v, causality }
        })
        .collect();
    Ok(WeylKernel { directions, weyl_norm: w04.max_abs(), dual_consistency })
}

fn subspace_mismatch(a: &[Vec<f64>], b: &[Vec<f64>], n: usize) -> f64 {
    if a.len() != b.len() {
        return 1.0;
    }
    if a.is_empty() {
        return 0.0;
    }
    let pa = projector(a, n);
    let pb = projector(b, n);
    (pa - pb).amax()
}

fn projector(basis: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, basis.len());
    for (j, v) in basis.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = v[i];
        }
    }
    // Basis vectors come from an SVD and are orthonormal already.
    &m * m.transpose()
}

/// In dimension 4 a non-null Weyl annihilator forces the Weyl tensor to
/// vanish. Returns the offending Weyl norm if a counterexample shows up.
pub fn nonnull_annihilator_violation(c: &PointCurvature, tol: &Tolerances) -> Result<Option<f64>> {
    if c.dim != 4 {
        return Ok(None);
    }
    let kernel = weyl_kernel(c, tol)?;
    let has_nonnull =
        kernel.directions.iter().any(|d| d.causality != Causality::Null);
    if has_nonnull && kernel.weyl_norm > tol.theorem * (1.0 + c.riem04.max_abs()) {
        Ok(Some(kernel.weyl_norm))
    } else {
        Ok(None)
    }
}

/// Max-abs of the Weyl divergence; `None` when it was not computed.
pub fn harmonic_weyl_residual(c: &PointCurvature) -> Option<f64> {
    c.weyl_div.as_ref().map(|d| d.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::Depth;
    use crate::expr::parse_expr;
    use crate::metric::{DomainBox, MetricField, Point};
    use crate::warped::WarpedProduct;

    fn coord_list(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn unit_sphere4() -> MetricField {
        let coords = coord_list(&["t1", "t2", "t3", "p"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        MetricField::diagonal(
            "sphere4",
            coords.clone(),
            vec![1, 1, 1, 1],
            DomainBox::new(vec![(0.3, 2.8), (0.3, 2.8), (0.3, 2.8), (0.1, 6.1)]).unwrap(),
            vec![
                e("1"),
                e("sin(t1)^2"),
                e("sin(t1)^2 * sin(t2)^2"),
                e("sin(t1)^2 * sin(t2)^2 * sin(t3)^2"),
            ],
        )
        .unwrap()
    }

    fn pp_wave() -> MetricField {
        let coords = coord_list(&["u", "v", "x", "y"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        let h = "0 - (1 + u^2) * (x^2 + y^2) + (1 + u/2) * (x^2 - y^2)";
        MetricField::new(
            "ppwave",
            coords.clone(),
            vec![-1, 1, 1, 1],
            DomainBox::new(vec![(-1.0, 1.0); 4]).unwrap(),
            vec![(0, 0, e(h)), (0, 1, e("1")), (2, 2, e("1")), (3, 3, e("1"))],
        )
        .unwrap()
    }

    fn s2xs2() -> MetricField {
        let coords = coord_list(&["a", "b", "c", "d"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        MetricField::diagonal(
            "s2xs2",
            coords.clone(),
            vec![1, 1, 1, 1],
            DomainBox::new(vec![(0.3, 2.8), (0.1, 6.1), (0.3, 2.8), (0.1, 6.1)]).unwrap(),
            vec![e("1"), e("sin(a)^2"), e("1"), e("sin(c)^2")],
        )
        .unwrap()
    }

    fn frw_s3() -> MetricField {
        let coords = coord_list(&["a", "b", "c"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        let fiber = MetricField::diagonal(
            "s3",
            coords.clone(),
            vec![1, 1, 1],
            DomainBox::new(vec![(0.3, 2.8), (0.3, 2.8), (0.1, 6.1)]).unwrap(),
            vec![e("1"), e("sin(a)^2"), e("sin(a)^2 * sin(b)^2")],
        )
        .unwrap();
        let warp = parse_expr("exp(t/2)", &coord_list(&["t"])).unwrap();
        WarpedProduct::new("frw_s3", -1.0, warp, (-1.0, 0.5), fiber)
            .unwrap()
            .metric()
            .unwrap()
    }

    #[test]
    fn sphere_is_einstein_and_constant_curvature() {
        let m = unit_sphere4();
        let p = Point(vec![0.7, 1.1, 0.9, 2.0]);
        let c = PointCurvature::compute(&m, &p, Depth::Curvature).unwrap();
        let tol = Tolerances::default();
        assert!(is_einstein(&c, &tol));
        let fit = quasi_einstein_fit(&c, &tol);
        assert!(fit.is_einstein);
        assert!((fit.a - 3.0).abs() < 1e-8);
        assert!(fit.b.abs() < 1e-12);
        assert!(fit.holds);
        let cc = constant_curvature_fit(&c, &tol);
        assert!((cc.sectional - 1.0).abs() < 1e-9);
        assert!(cc.holds);
        // Weyl vanishes, so every direction annihilates it.
        let k = weyl_kernel(&c, &tol).unwrap();
        assert_eq!(k.directions.len(), 4);
        assert!(k.weyl_norm < 1e-8);
        assert!(nonnull_annihilator_violation(&c, &tol).unwrap().is_none());
    }

    #[test]
    fn frw_universe_fits_with_timelike_direction() {
        let m = frw_s3();
        let t = 0.2f64;
        let p = Point(vec![t, 0.9, 1.4, 2.0]);
        let c = PointCurvature::compute(&m, &p, Depth::Curvature).unwrap();
        let tol = Tolerances::default();
        assert!(!is_einstein(&c, &tol));
        let fit = quasi_einstein_fit(&c, &tol);
        assert!(!fit.is_einstein);
        // For f = e^{t/2} over the unit 3-sphere: a = 2e^{−t} + 3/4, b = 2e^{−t}.
        let expect_b = 2.0 * (-t).exp();
        assert!((fit.a - (expect_b + 0.75)).abs() < 1e-8, "a = {}", fit.a);
        assert!((fit.b - expect_b).abs() < 1e-8, "b = {}", fit.b);
        assert!(fit.residual < 1e-9);
        assert!(fit.holds);
        assert_eq!(fit.causality, Some(Causality::Timelike));
        let u = fit.u_vec.unwrap();
        assert!((u[0].abs() - 1.0).abs() < 1e-9, "unit time component");
        for s in &u[1..] {
            assert!(s.abs() < 1e-9, "no spatial leakage");
        }
        assert_eq!(fit.rank_t, 1);
        assert_eq!(fit.rank_q, 1);
    }

    #[test]
    fn pp_wave_fits_with_null_direction() {
        let m = pp_wave();
        let u_coord = 0.3f64;
        let p = Point(vec![u_coord, 0.1, 0.45, -0.6]);
        let c = PointCurvature::compute(&m, &p, Depth::Curvature).unwrap();
        let tol = Tolerances::default();
        let fit = quasi_einstein_fit(&c, &tol);
        assert!(!fit.is_einstein);
        assert!((fit.a - 0.0).abs() < 1e-10);
        assert_eq!(fit.causality, Some(Causality::Null));
        assert!((fit.b - 1.0).abs() < 1e-12, "null scale pinned to b = ±1");
        assert!(fit.residual < 1e-9);
        // u⊗u must reproduce 2(1+u²) du⊗du.
        let ucov = fit.u_cov.unwrap();
        let want = 2.0 * (1.0 + u_coord * u_coord);
        assert!((ucov[0] * ucov[0] - want).abs() < 1e-9);
        for s in &ucov[1..] {
            assert!(s.abs() < 1e-9);
        }
        let uvec = fit.u_vec.unwrap();
        assert!(uvec[0].abs() < 1e-9, "dual vector points along the flat null coordinate");
        assert!(uvec[1].abs() > 0.5);
    }

    #[test]
    fn pp_wave_weyl_kernel_is_one_null_direction() {
        let m = pp_wave();
        let p = Point(vec![0.3, 0.1, 0.45, -0.6]);
        let c = PointCurvature::compute(&m, &p, Depth::Curvature).unwrap();
        let tol = Tolerances::default();
        let k = weyl_kernel(&c, &tol).unwrap();
        assert!(k.weyl_norm > 1e-3);
        assert_eq!(k.directions.len(), 1);
        let d = &k.directions[0];
        assert_eq!(d.causality, Causality::Null);
        assert!((d.vector[1].abs() - 1.0).abs() < 1e-9);
        assert!(k.dual_consistency < 1e-8);
        assert!(nonnull_annihilator_violation(&c, &tol).unwrap().is_none());
    }

    #[test]
    fn einstein_product_is_not_constant_curvature_and_has_no_kernel() {
        let m = s2xs2();
        let p = Point(vec![0.8, 1.7, 1.1, 2.4]);
        let c = PointCurvature::compute(&m, &p, Depth::Curvature).unwrap();
        let tol = Tolerances::default();
        assert!(is_einstein(&c, &tol));
        let fit = quasi_einstein_fit(&c, &tol);
        assert!(fit.is_einstein);
        assert!((fit.a - 1.0).abs() < 1e-9);
        let cc = constant_curvature_fit(&c, &tol);
        assert!(!cc.holds, "product of spheres is Einstein but not space-form");
        assert!(cc.residual > 1e-2);
        let k = weyl_kernel(&c, &tol).unwrap();
        assert!(k.directions.is_empty());
        assert!(nonnull_annihilator_violation(&c, &tol).unwrap().is_none());
    }

    #[test]
    fn harmonic_weyl_contrast() {
        let tol = Tolerances::default();
        let sphere = unit_sphere4();
        let p = Point(vec![0.7, 1.1, 0.9, 2.0]);
        let c = PointCurvature::compute(&sphere, &p, Depth::Divergence).unwrap();
        assert!(harmonic_weyl_residual(&c).unwrap() < tol.derived);

        let coords = coord_list(&["a", "b", "c"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        let fiber = MetricField::diagonal(
            "s2xr",
            coords.clone(),
            vec![1, 1, 1],
            DomainBox::new(vec![(0.3, 2.8), (0.1, 6.1), (-1.0, 1.0)]).unwrap(),
            vec![e("1"), e("sin(a)^2"), e("1")],
        )
        .unwrap();
        let warp = parse_expr("exp(t)", &coord_list(&["t"])).unwrap();
        let control = WarpedProduct::new("w_s2xr", -1.0, warp, (-0.5, 0.5), fiber)
            .unwrap()
            .metric()
            .unwrap();
        let p2 = Point(vec![0.1, 0.8, 1.7, 0.3]);
        let c2 = PointCurvature::compute(&control, &p2, Depth::Divergence).unwrap();
        assert!(harmonic_weyl_residual(&c2).unwrap() > 1e-4);
    }

    #[test]
    fn direction_residual_separates_kernel_from_generic_vectors() {
        let m = pp_wave();
        let p = Point(vec![0.3, 0.1, 0.45, -0.6]);
        let c = PointCurvature::compute(&m, &p, Depth::Curvature).unwrap();
        let tol = Tolerances::default();
        let k = weyl_kernel(&c, &tol).unwrap();
        assert_eq!(k.directions.len(), 1);
        let inside = weyl_direction_residual(&c, &k.directions[0].vector).unwrap();
        assert!(inside < tol.derived * (1.0 + k.weyl_norm), "inside = {inside}");
        let outside = weyl_direction_residual(&c, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(outside > 10.0 * tol.theorem, "outside = {outside}");
        assert!(weyl_direction_residual(&c, &[0.0; 4]).is_err());
        // Scale invariance: the residual is computed on the unit direction.
        let scaled: Vec<f64> =
            k.directions[0].vector.iter().map(|x| 3.75 * x).collect();
        let rescaled = weyl_direction_residual(&c, &scaled).unwrap();
        assert!((rescaled - inside).abs() < 1e-12);
    }
}
