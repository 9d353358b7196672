//! Contact metric structures `(η, ξ, φ, g)` on odd-dimensional charts:
//! structure-equation verification, the deformation tensor `h`, Reeb
//! curvature fits, and the classification reductions built on them.
//!
//! The exterior derivative convention is `dη(X,Y) = ½(X η(Y) − Y η(X))` in
//! coordinates, i.e. `dη_ij = ½(∂_i η_j − ∂_j η_i)`, and the compatibility
//! equation reads `dη(X,Y) = g(X, φY)`. All fixtures in the catalog follow
//! this normalization.

use nalgebra::{DMatrix, DVector};

use crate::classify::Tolerances;
use crate::curvature::{Depth, PointCurvature};
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::metric::{MetricField, Point};

/// Symbolic contact structure: covector `η_i`, Reeb field `ξ^i`, and the
/// endomorphism `φ^i_j` stored row-major with `i` the output index.
#[derive(Debug, Clone)]
pub struct ContactStructure {
    label: String,
    dim: usize,
    eta: Vec<ScalarExpr>,
    xi: Vec<ScalarExpr>,
    phi: Vec<ScalarExpr>,
}

impl ContactStructure {
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        eta: Vec<ScalarExpr>,
        xi: Vec<ScalarExpr>,
        phi: Vec<ScalarExpr>,
    ) -> Result<ContactStructure> {
        if dim % 2 == 0 {
            return Err(Error::ContactDimension { dim });
        }
        if eta.len() != dim || xi.len() != dim || phi.len() != dim * dim {
            return Err(Error::invalid("contact structure component counts must match the chart"));
        }
        for e in eta.iter().chain(xi.iter()).chain(phi.iter()) {
            if let Some(v) = e.max_var() {
                if v >= dim {
                    return Err(Error::invalid(format!(
                        "contact component references coordinate {v}, chart has {dim}"
                    )));
                }
            }
        }
        Ok(ContactStructure { label: label.into(), dim, eta, xi, phi })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eta(&self) -> &[ScalarExpr] {
        &self.eta
    }

    pub fn xi(&self) -> &[ScalarExpr] {
        &self.xi
    }

    pub fn phi(&self) -> &[ScalarExpr] {
        &self.phi
    }

    pub fn phi_entry(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.phi[i * self.dim + j]
    }

    /// The deformation `η → aη`, `ξ → ξ/a`, `φ → φ`. Pair it with
    /// [`d_homothety_metric`] to stay a contact metric structure.
    pub fn d_homothety(&self, a: f64, label: impl Into<String>) -> ContactStructure {
        ContactStructure {
            label: label.into(),
            dim: self.dim,
            eta: self.eta.iter().map(|e| e.clone().scaled(a)).collect(),
            xi: self.xi.iter().map(|e| e.clone().scaled(1.0 / a)).collect(),
            phi: self.phi.clone(),
        }
    }

    /// Pointwise values and first derivatives of all structure fields.
    pub fn frame(&self, p: &Point) -> Result<ContactFrame> {
        let n = self.dim;
        let mut eta = DVector::zeros(n);
        let mut deta_raw = DMatrix::zeros(n, n);
        for (j, e) in self.eta.iter().enumerate() {
            let jet = e.eval_jet(p, 1).map_err(Error::from)?;
            eta[j] = jet.value();
            for i in 0..n {
                deta_raw[(i, j)] = jet.derivative(i).value();
            }
        }
        let mut deta = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                deta[(i, j)] = 0.5 * (deta_raw[(i, j)] - deta_raw[(j, i)]);
            }
        }
        let mut xi = DVector::zeros(n);
        let mut dxi = DMatrix::zeros(n, n);
        for (i, e) in self.xi.iter().enumerate() {
            let jet = e.eval_jet(p, 1).map_err(Error::from)?;
            xi[i] = jet.value();
            for j in 0..n {
                dxi[(i, j)] = jet.derivative(j).value();
            }
        }
        let mut phi = DMatrix::zeros(n, n);
        let mut dphi = vec![DMatrix::zeros(n, n); n];
        for i in 0..n {
            for j in 0..n {
                let jet = self.phi_entry(i, j).eval_jet(p, 1).map_err(Error::from)?;
                phi[(i, j)] = jet.value();
                for k in 0..n {
                    dphi[k][(i, j)] = jet.derivative(k).value();
                }
            }
        }

        // h = ½ £_ξ φ.
        let mut h = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for m in 0..n {
                    acc += xi[m] * dphi[m][(i, j)];
                    acc -= phi[(m, j)] * dxi[(i, m)];
                    acc += phi[(i, m)] * dxi[(m, j)];
                }
                h[(i, j)] = 0.5 * acc;
            }
        }

        Ok(ContactFrame { eta, deta, xi, dxi, phi, dphi, h })
    }
}

/// Evaluated structure fields at one point.
#[derive(Debug, Clone)]
pub struct ContactFrame {
    pub eta: DVector<f64>,
    /// `dη_ij` in the ½ convention.
    pub deta: DMatrix<f64>,
    pub xi: DVector<f64>,
    /// `∂_j ξ^i` at `(i, j)`.
    pub dxi: DMatrix<f64>,
    pub phi: DMatrix<f64>,
    pub dphi: Vec<DMatrix<f64>>,
    /// `½ £_ξ φ`.
    pub h: DMatrix<f64>,
}

/// Builds `a g + a(a−1) η⊗η` symbolically from the metric and the covector.
pub fn d_homothety_metric(
    metric: &MetricField,
    eta: &[ScalarExpr],
    a: f64,
    label: impl Into<String>,
) -> Result<MetricField> {
    let n = metric.dim();
    if eta.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: eta.len() });
    }
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            let scaled = metric.component(i, j).clone().scaled(a);
            let cross =
                ScalarExpr::mul(eta[i].clone(), eta[j].clone()).scaled(a * (a - 1.0));
            entries.push((i, j, ScalarExpr::add(scaled, cross)));
        }
    }
    MetricField::new(
        label,
        metric.coords().to_vec(),
        metric.signature().to_vec(),
        metric.domain().clone(),
        entries,
    )
}

/// Residuals of the defining equations of a contact metric structure.
#[derive(Debug, Clone)]
pub struct StructureResiduals {
    /// `|η(ξ) − 1|`.
    pub reeb_pairing: f64,
    /// `‖φ² + I − ξ⊗η‖`.
    pub phi_square: f64,
    /// `‖φᵀ g φ − g + η⊗η‖`.
    pub phi_compatibility: f64,
    /// `‖η − g ξ‖`.
    pub eta_duality: f64,
    /// `‖dη − g φ‖`.
    pub deta_compatibility: f64,
    /// `‖ι_ξ dη‖`.
    pub reeb_in_kernel: f64,
    /// `‖φ ξ‖`.
    pub phi_reeb: f64,
    /// Total antisymmetrization of `η ∧ (dη)^m`; must be bounded away from 0.
    pub volume: f64,
    pub volume_ok: bool,
}

impl StructureResiduals {
    pub fn worst_equation(&self) -> f64 {
        self.reeb_pairing
            .max(self.phi_square)
            .max(self.phi_compatibility)
            .max(self.eta_duality)
            .max(self.deta_compatibility)
            .max(self.reeb_in_kernel)
            .max(self.phi_reeb)
    }
}

fn permutation_sum(n: usize, mut visit: impl FnMut(&[usize], f64)) {
    fn rec(arr: &mut Vec<usize>, k: usize, sign: f64, visit: &mut impl FnMut(&[usize], f64)) {
        let n = arr.len();
        if k == n {
            visit(arr, sign);
            return;
        }
        for i in k..n {
            arr.swap(k, i);
            let s = if i == k { sign } else { -sign };
            rec(arr, k + 1, s, visit);
            arr.swap(k, i);
        }
    }
    let mut arr: Vec<usize> = (0..n).collect();
    rec(&mut arr, 0, 1.0, &mut visit);
}

fn contact_volume(eta: &DVector<f64>, deta: &DMatrix<f64>) -> f64 {
    let n = eta.len();
    let mut total = 0.0;
    permutation_sum(n, |perm, sign| {
        let mut term = eta[perm[0]];
        let mut k = 1;
        while k + 1 < n {
            term *= deta[(perm[k], perm[k + 1])];
            k += 2;
        }
        total += sign * term;
    });
    total
}

const VOLUME_FLOOR: f64 = 1e-6;
const H_VANISHING: f64 = 1e-9;

pub fn structure_residuals(frame: &ContactFrame, g: &DMatrix<f64>) -> StructureResiduals {
    let n = g.nrows();
    let reeb_pairing = (frame.eta.dot(&frame.xi) - 1.0).abs();
    let phi_square = (&frame.phi * &frame.phi + DMatrix::<f64>::identity(n, n)
        - &frame.xi * frame.eta.transpose())
    .amax();
    let phi_compatibility =
        (frame.phi.transpose() * g * &frame.phi - g + &frame.eta * frame.eta.transpose()).amax();
    let eta_duality = (&frame.eta - g * &frame.xi).amax();
    let deta_compatibility = (&frame.deta - g * &frame.phi).amax();
    let reeb_in_kernel = (frame.deta.transpose() * &frame.xi).amax();
    let phi_reeb = (&frame.phi * &frame.xi).amax();
    let volume = contact_volume(&frame.eta, &frame.deta);
    StructureResiduals {
        reeb_pairing,
        phi_square,
        phi_compatibility,
        eta_duality,
        deta_compatibility,
        reeb_in_kernel,
        phi_reeb,
        volume,
        volume_ok: volume.abs() > VOLUME_FLOOR,
    }
}

/// Least-squares fit of `R(X,Y)ξ = k[η(Y)X − η(X)Y] + μ[η(Y)hX − η(X)hY]`.
#[derive(Debug, Clone)]
pub struct KMuFit {
    pub k: f64,
    /// `None` when `h` vanishes and the second basis tensor degenerates.
    pub mu: Option<f64>,
    pub residual: f64,
}

/// Fit of `Ric = a g + b η⊗η`.
#[derive(Debug, Clone)]
pub struct EtaEinsteinFit {
    pub a: f64,
    pub b: f64,
    pub residual: f64,
    pub holds: bool,
}

/// Comparison of the engine scalar curvature against the two normalization
/// candidates `2m−2+k−mμ` and `2m(2m−2+k−mμ)` seen for this family.
#[derive(Debug, Clone)]
pub struct ScalarNormalizationProbe {
    pub engine: f64,
    pub plain: f64,
    pub scaled: f64,
}

impl ScalarNormalizationProbe {
    pub fn plain_residual(&self) -> f64 {
        (self.engine - self.plain).abs()
    }

    pub fn scaled_residual(&self) -> f64 {
        (self.engine - self.scaled).abs()
    }

    pub fn preferred(&self) -> &'static str {
        if self.scaled_residual() <= self.plain_residual() {
            "scaled-by-2m"
        } else {
            "plain"
        }
    }
}

/// Outcome of the reduction for η-Einstein structures whose Weyl tensor
/// annihilates the Reeb field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOutcome {
    /// `k = 1`: the structure is Sasakian.
    SasakianBranch,
    /// `k = 0`: flat model.
    FlatModel,
    /// `0 < k < 1`: compact Lie group model with left-invariant metric.
    Su2Model,
    /// `k < 0`: noncompact Lie group model.
    Sl2Model,
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub eta_einstein_residual: f64,
    /// `‖W(·,·)ξ‖`; `None` in dimension 3 where the Weyl tensor vanishes
    /// identically and the hypothesis is vacuous.
    pub reeb_weyl_norm: Option<f64>,
    pub hypotheses_hold: bool,
    /// `(a+b)/2m`, the forced Reeb sectional curvature.
    pub k: Option<f64>,
    /// `‖R(X,Y)ξ − k[η(Y)X − η(X)Y]‖` under the hypotheses.
    pub reeb_curvature_residual: Option<f64>,
    pub outcome: Option<ReductionOutcome>,
    /// For `k < 1`, the residual of the forced Ricci form `2k η⊗η` (m = 1).
    pub model_residual: Option<f64>,
    /// For `k < 1`, `|a − 2(m−1)|`: the coefficient the reduction forces.
    pub forced_a_residual: Option<f64>,
    /// For `k < 1`, `(m−1)·‖h‖`: vacuous in dimension 3, binding above it.
    pub forced_h_residual: Option<f64>,
}

/// Everything the contact layer measures at a single point.
#[derive(Debug, Clone)]
pub struct ContactAnalysis {
    pub dim: usize,
    pub structure: StructureResiduals,
    /// `tr h²`.
    pub h_norm_sq: f64,
    pub h_xi: f64,
    pub h_traceless: f64,
    pub h_phi_anticommute: f64,
    pub h_symmetric: f64,
    /// `‖∇ξ + φ + φh‖`.
    pub nabla_xi_residual: f64,
    pub ricci_reeb: f64,
    /// `|Ric(ξ,ξ) − (2m − tr h²)|`.
    pub ricci_reeb_identity: f64,
    pub k_contact: bool,
    /// `‖R(X,ξ)ξ − (X − η(X)ξ)‖`.
    pub k_contact_curvature_residual: f64,
    /// `‖∇φ − (g⊗ξ − η⊗I)‖`.
    pub sasakian_residual: f64,
    /// `‖R(X,Y)ξ − (η(Y)X − η(X)Y)‖`.
    pub sasakian_curvature_residual: f64,
    pub sasakian: bool,
    pub k_mu: KMuFit,
    pub eta_einstein: EtaEinsteinFit,
    pub scalar: f64,
    /// `‖W(·,·)ξ‖; `None` below dimension 5.
    pub reeb_weyl_norm: Option<f64>,
    /// Residual of the closed-form expression for `W(X,ξ)ξ`; `None` below
    /// dimension 5.
    pub reeb_weyl_two_sided: Option<f64>,
    /// `‖Q − (r/2m − 1)I − (2m+1 − r/2m)ξ⊗η‖`, the Ricci operator forced
    /// by the η-Einstein form; meaningful when `eta_einstein.holds`.
    pub eta_einstein_q_residual: f64,
    /// Residual of the nullity-condition Ricci operator
    /// `[2(m−1) − mμ]I + [2(1−m) + m(2k+μ)]ξ⊗η + [2(m−1) + μ]h`;
    /// `None` when μ is undetermined.
    pub nullity_ricci_residual: Option<f64>,
    pub normalization: Option<ScalarNormalizationProbe>,
    pub reduction: ReductionReport,
}

pub fn contact_analysis(
    metric: &MetricField,
    structure: &ContactStructure,
    p: &Point,
    tol: &Tolerances,
) -> Result<ContactAnalysis> {
    let n = metric.dim();
    if n != structure.dim() {
        return Err(Error::DimensionMismatch { expected: n, got: structure.dim() });
    }
    if n % 2 == 0 || n < 3 {
        return Err(Error::ContactDimension { dim: n });
    }
    let m = (n - 1) / 2;
    let mf = m as f64;

    let engine = PointCurvature::compute(metric, p, Depth::Curvature)?;
    let frame = structure.frame(p)?;
    let g = engine.g.to_matrix();
    let residuals = structure_residuals(&frame, &g);

    let h = &frame.h;
    let h_norm_sq = (h * h).trace();
    let h_xi = (h * &frame.xi).amax();
    let h_traceless = h.trace().abs();
    let h_phi_anticommute = (h * &frame.phi + &frame.phi * h).amax();
    let h_symmetric = (&g * h - (&g * h).transpose()).amax();
    let h_max = h.amax();
    let k_contact_flag = h_max < H_VANISHING * (1.0 + frame.phi.amax());

    // ∇ξ = −φ − φh, using the engine connection.
    let mut nabla_xi_residual = 0.0f64;
    let target = -(&frame.phi + &frame.phi * h);
    for i in 0..n {
        for j in 0..n {
            let mut cov = frame.dxi[(i, j)];
            for mm in 0..n {
                cov += engine.gamma.get(&[j, mm, i]) * frame.xi[mm];
            }
            nabla_xi_residual = nabla_xi_residual.max((cov - target[(i, j)]).abs());
        }
    }

    let ric = engine.ricci.to_matrix();
    let ricci_reeb = (frame.xi.transpose() * &ric * &frame.xi)[(0, 0)];
    let ricci_reeb_identity = (ricci_reeb - (2.0 * mf - h_norm_sq)).abs();

    // R(X,ξ)ξ against X − η(X)ξ.
    let mut k_contact_curvature_residual = 0.0f64;
    for a in 0..n {
        for d in 0..n {
            let mut lhs = 0.0;
            for b in 0..n {
                for c in 0..n {
                    lhs += engine.riem13.get(&[a, b, c, d]) * frame.xi[b] * frame.xi[c];
                }
            }
            let rhs = if a == d { 1.0 } else { 0.0 } - frame.eta[a] * frame.xi[d];
            k_contact_curvature_residual = k_contact_curvature_residual.max((lhs - rhs).abs());
        }
    }

    // (∇_k φ)^i_j − (g_{kj} ξ^i − η_j δ^i_k).
    let mut sasakian_residual = 0.0f64;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut cov = frame.dphi[k][(i, j)];
                for mm in 0..n {
                    cov += engine.gamma.get(&[k, mm, i]) * frame.phi[(mm, j)];
                    cov -= engine.gamma.get(&[k, j, mm]) * frame.phi[(i, mm)];
                }
                let rhs = g[(k, j)] * frame.xi[i]
                    - frame.eta[j] * if i == k { 1.0 } else { 0.0 };
                sasakian_residual = sasakian_residual.max((cov - rhs).abs());
            }
        }
    }

    // R(X,Y)ξ, the shared ingredient of the remaining fits.
    let mut reeb_curv = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let mut acc = 0.0;
                for c in 0..n {
                    acc += engine.riem13.get(&[a, b, c, d]) * frame.xi[c];
                }
                reeb_curv[(a * n + b) * n + d] = acc;
            }
        }
    }
    let basis_a = |a: usize, b: usize, d: usize| {
        frame.eta[b] * if a == d { 1.0 } else { 0.0 }
            - frame.eta[a] * if b == d { 1.0 } else { 0.0 }
    };
    let basis_b = |a: usize, b: usize, d: usize| {
        frame.eta[b] * h[(d, a)] - frame.eta[a] * h[(d, b)]
    };
    let mut sasakian_curvature_residual = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let diff = reeb_curv[(a * n + b) * n + d] - basis_a(a, b, d);
                sasakian_curvature_residual = sasakian_curvature_residual.max(diff.abs());
            }
        }
    }

    // Normal equations for the (k, μ) fit.
    let (mut aa, mut ab, mut bb, mut at, mut bt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let va = basis_a(a, b, d);
                let vb = basis_b(a, b, d);
                let t = reeb_curv[(a * n + b) * n + d];
                aa += va * va;
                ab += va * vb;
                bb += vb * vb;
                at += va * t;
                bt += vb * t;
            }
        }
    }
    let k_mu = if h_max < H_VANISHING * (1.0 + frame.phi.amax()) || bb < 1e-18 {
        let k = at / aa;
        let mut res = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let diff = reeb_curv[(a * n + b) * n + d] - k * basis_a(a, b, d);
                    res = res.max(diff.abs());
                }
            }
        }
        KMuFit { k, mu: None, residual: res }
    } else {
        let det = aa * bb - ab * ab;
        let k = (at * bb - bt * ab) / det;
        let mu = (bt * aa - at * ab) / det;
        let mut res = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let diff = reeb_curv[(a * n + b) * n + d]
                        - k * basis_a(a, b, d)
                        - mu * basis_b(a, b, d);
                    res = res.max(diff.abs());
                }
            }
        }
        KMuFit { k, mu: Some(mu), residual: res }
    };

    // Ric = a g + b η⊗η.
    let ee_a = (engine.scalar - ricci_reeb) / (2.0 * mf);
    let ee_b = ricci_reeb - ee_a;
    let ee_recon = &g * ee_a + &frame.eta * frame.eta.transpose() * ee_b;
    let ee_residual = (&ric - ee_recon).amax();
    let eta_einstein = EtaEinsteinFit {
        a: ee_a,
        b: ee_b,
        residual: ee_residual,
        holds: ee_residual <= tol.theorem * (1.0 + ric.amax()),
    };

    // Weyl contractions with the Reeb field.
    let (reeb_weyl_norm, reeb_weyl_two_sided) = match &engine.weyl13 {
        Some(w13) => {
            let mut norm = 0.0f64;
            for a in 0..n {
                for b in 0..n {
                    for d in 0..n {
                        let mut acc = 0.0;
                        for c in 0..n {
                            acc += w13.get(&[a, b, c, d]) * frame.xi[c];
                        }
                        norm = norm.max(acc.abs());
                    }
                }
            }
            let q = engine.ricci_op.to_matrix().transpose();
            let r = engine.scalar;
            let two_m = 2.0 * mf;
            let mut two_sided = 0.0f64;
            for a in 0..n {
                for d in 0..n {
                    let mut lhs = 0.0;
                    for b in 0..n {
                        for c in 0..n {
                            lhs += w13.get(&[a, b, c, d]) * frame.xi[b] * frame.xi[c];
                        }
                    }
                    let delta = if a == d { 1.0 } else { 0.0 };
                    let rhs = (r - two_m) / (two_m * (two_m - 1.0))
                        * (delta - frame.eta[a] * frame.xi[d])
                        - 1.0 / (two_m - 1.0)
                            * (q[(d, a)] - two_m * frame.eta[a] * frame.xi[d]);
                    two_sided = two_sided.max((lhs - rhs).abs());
                }
            }
            (Some(norm), Some(two_sided))
        }
        None => (None, None),
    };

    let normalization = k_mu.mu.map(|mu| {
        let base = 2.0 * mf - 2.0 + k_mu.k - mf * mu;
        ScalarNormalizationProbe {
            engine: engine.scalar,
            plain: base,
            scaled: 2.0 * mf * base,
        }
    });

    let q_op = engine.ricci_op.to_matrix().transpose();
    let xi_eta = &frame.xi * frame.eta.transpose();
    let eta_einstein_q_residual = {
        let alpha = engine.scalar / (2.0 * mf) - 1.0;
        let beta = 2.0 * mf + 1.0 - engine.scalar / (2.0 * mf);
        (&q_op - DMatrix::<f64>::identity(n, n) * alpha - &xi_eta * beta).amax()
    };
    let nullity_ricci_residual = k_mu.mu.map(|mu| {
        let alpha = 2.0 * (mf - 1.0) - mf * mu;
        let beta = 2.0 * (1.0 - mf) + mf * (2.0 * k_mu.k + mu);
        let gamma = 2.0 * (mf - 1.0) + mu;
        (&q_op - DMatrix::<f64>::identity(n, n) * alpha - &xi_eta * beta - h * gamma).amax()
    });

    // Reduction: η-Einstein plus a Reeb-annihilating Weyl tensor pins the
    // Reeb sectional curvature to k = (a+b)/2m and sorts the structure into
    // the Sasakian branch or one of the model geometries.
    let weyl_ok = match reeb_weyl_norm {
        Some(norm) => norm <= tol.theorem * (1.0 + engine.riem04.max_abs()),
        None => true,
    };
    let hypotheses_hold = eta_einstein.holds && weyl_ok;
    let reduction = if hypotheses_hold {
        let k = (eta_einstein.a + eta_einstein.b) / (2.0 * mf);
        let mut res = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let diff = reeb_curv[(a * n + b) * n + d] - k * basis_a(a, b, d);
                    res = res.max(diff.abs());
                }
            }
        }
        let (outcome, model_residual, forced_a, forced_h) = if (k - 1.0).abs() <= tol.theorem {
            (ReductionOutcome::SasakianBranch, None, None, None)
        } else {
            let recon = &frame.eta * frame.eta.transpose() * (2.0 * k);
            let model_res = (&ric - recon).amax();
            let outcome = if k.abs() <= tol.theorem {
                ReductionOutcome::FlatModel
            } else if k > 0.0 {
                ReductionOutcome::Su2Model
            } else {
                ReductionOutcome::Sl2Model
            };
            (
                outcome,
                Some(model_res),
                Some((eta_einstein.a - 2.0 * (mf - 1.0)).abs()),
                Some((mf - 1.0) * h_max),
            )
        };
        ReductionReport {
            eta_einstein_residual: eta_einstein.residual,
            reeb_weyl_norm,
            hypotheses_hold: true,
            k: Some(k),
            reeb_curvature_residual: Some(res),
            outcome: Some(outcome),
            model_residual,
            forced_a_residual: forced_a,
            forced_h_residual: forced_h,
        }
    } else {
        ReductionReport {
            eta_einstein_residual: eta_einstein.residual,
            reeb_weyl_norm,
            hypotheses_hold: false,
            k: None,
            reeb_curvature_residual: None,
            outcome: None,
            model_residual: None,
            forced_a_residual: None,
            forced_h_residual: None,
        }
    };

    let sasakian = k_contact_flag
        && sasakian_residual <= tol.theorem * (1.0 + frame.phi.amax())
        && residuals.worst_equation() <= tol.theorem * 10.0;

    Ok(ContactAnalysis {
        dim: n,
        structure: residuals,
        h_norm_sq,
        h_xi,
        h_traceless,
        h_phi_anticommute,
        h_symmetric,
        nabla_xi_residual,
        ricci_reeb,
        ricci_reeb_identity,
        k_contact: k_contact_flag,
        k_contact_curvature_residual,
        sasakian_residual,
        sasakian_curvature_residual,
        sasakian,
        k_mu,
        eta_einstein,
        scalar: engine.scalar,
        reeb_weyl_norm,
        reeb_weyl_two_sided,
        eta_einstein_q_residual,
        nullity_ricci_residual,
        normalization,
        reduction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::metric::DomainBox;

    fn coord_list(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Heisenberg-type Sasakian structure on a 3-dimensional chart.
    fn sasaki3() -> (MetricField, ContactStructure) {
        let coords = coord_list(&["x", "y", "z"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        let metric = MetricField::new(
            "sasaki3",
            coords.clone(),
            vec![1, 1, 1],
            DomainBox::new(vec![(-2.0, 2.0); 3]).unwrap(),
            vec![
                (0, 0, e("y^2/4 + 1/4")),
                (0, 2, e("-y/4")),
                (1, 1, e("1/4")),
                (2, 2, e("1/4")),
            ],
        )
        .unwrap();
        let zero = e("0");
        let mut phi = vec![zero.clone(); 9];
        phi[0 * 3 + 1] = e("1");
        phi[1 * 3 + 0] = e("-1");
        phi[2 * 3 + 1] = e("y");
        let structure = ContactStructure::new(
            "sasaki3",
            3,
            vec![e("-y/2"), zero.clone(), e("1/2")],
            vec![zero.clone(), zero.clone(), e("2")],
            phi,
        )
        .unwrap();
        (metric, structure)
    }

    /// Same construction two complex dimensions up.
    fn sasaki5() -> (MetricField, ContactStructure) {
        let coords = coord_list(&["x1", "y1", "x2", "y2", "z"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        let eta = [e("-y1/2"), e("0"), e("-y2/2"), e("0"), e("1/2")];
        let mut entries = Vec::new();
        for i in 0..5 {
            for j in i..5 {
                let mut expr = ScalarExpr::mul(eta[i].clone(), eta[j].clone());
                if i == j && i < 4 {
                    expr = ScalarExpr::add(expr, e("1/4"));
                }
                if i == 4 && j == 4 {
                    expr = e("1/4");
                }
                entries.push((i, j, expr));
            }
        }
        let metric = MetricField::new(
            "sasaki5",
            coords.clone(),
            vec![1, 1, 1, 1, 1],
            DomainBox::new(vec![(-2.0, 2.0); 5]).unwrap(),
            entries,
        )
        .unwrap();
        let zero = e("0");
        let mut phi = vec![zero.clone(); 25];
        phi[0 * 5 + 1] = e("1");
        phi[1 * 5 + 0] = e("-1");
        phi[2 * 5 + 3] = e("1");
        phi[3 * 5 + 2] = e("-1");
        phi[4 * 5 + 1] = e("y1");
        phi[4 * 5 + 3] = e("y2");
        let structure = ContactStructure::new(
            "sasaki5",
            5,
            vec![e("-y1/2"), zero.clone(), e("-y2/2"), zero.clone(), e("1/2")],
            vec![zero.clone(), zero.clone(), zero.clone(), zero.clone(), e("2")],
            phi,
        )
        .unwrap();
        (metric, structure)
    }

    /// Flat chart with a rotating contact distribution.
    fn flat_contact3() -> (MetricField, ContactStructure) {
        let coords = coord_list(&["x", "y", "z"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        let metric = MetricField::diagonal(
            "flat_contact3",
            coords.clone(),
            vec![1, 1, 1],
            DomainBox::new(vec![(-2.0, 2.0); 3]).unwrap(),
            vec![e("1/4"), e("1/4"), e("1/4")],
        )
        .unwrap();
        let zero = e("0");
        let mut phi = vec![zero.clone(); 9];
        phi[0 * 3 + 2] = e("sin(z)");
        phi[1 * 3 + 2] = e("-cos(z)");
        phi[2 * 3 + 0] = e("-sin(z)");
        phi[2 * 3 + 1] = e("cos(z)");
        let structure = ContactStructure::new(
            "flat_contact3",
            3,
            vec![e("cos(z)/2"), e("sin(z)/2"), zero.clone()],
            vec![e("2*cos(z)"), e("2*sin(z)"), zero.clone()],
            phi,
        )
        .unwrap();
        (metric, structure)
    }

    #[test]
    fn heisenberg_three_is_sasakian_eta_einstein() {
        let (metric, structure) = sasaki3();
        let p = Point(vec![0.4, -0.7, 1.1]);
        let tol = Tolerances::default();
        let a = contact_analysis(&metric, &structure, &p, &tol).unwrap();
        assert!(a.structure.worst_equation() < 1e-10, "{:?}", a.structure);
        assert!(a.structure.volume_ok);
        assert!(a.h_norm_sq.abs() < 1e-12);
        assert!(a.k_contact);
        assert!(a.nabla_xi_residual < 1e-10);
        assert!((a.ricci_reeb - 2.0).abs() < 1e-9);
        assert!(a.ricci_reeb_identity < 1e-9);
        assert!((a.scalar - (-2.0)).abs() < 1e-9);
        assert!(a.sasakian_residual < 1e-9);
        assert!(a.sasakian_curvature_residual < 1e-9);
        assert!(a.sasakian);
        assert!(a.k_contact_curvature_residual < 1e-9);
        assert!((a.k_mu.k - 1.0).abs() < 1e-9);
        assert!(a.k_mu.mu.is_none());
        assert!((a.eta_einstein.a - (-2.0)).abs() < 1e-9);
        assert!((a.eta_einstein.b - 4.0).abs() < 1e-9);
        assert!(a.eta_einstein.holds);
        assert!(a.eta_einstein_q_residual < 1e-9);
        assert!(a.nullity_ricci_residual.is_none(), "no h, no nullity fit");
        assert!(a.reeb_weyl_norm.is_none(), "no Weyl tensor in dimension 3");
        assert!(a.reduction.hypotheses_hold);
        assert_eq!(a.reduction.outcome, Some(ReductionOutcome::SasakianBranch));
        assert!((a.reduction.k.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn heisenberg_five_keeps_weyl_away_from_the_reeb_field() {
        let (metric, structure) = sasaki5();
        let p = Point(vec![0.4, -0.7, 0.9, 0.3, 1.1]);
        let tol = Tolerances::default();
        let a = contact_analysis(&metric, &structure, &p, &tol).unwrap();
        assert!(a.structure.worst_equation() < 1e-10, "{:?}", a.structure);
        assert!(a.structure.volume_ok);
        assert!(a.k_contact);
        assert!((a.ricci_reeb - 4.0).abs() < 1e-9);
        assert!((a.scalar - (-4.0)).abs() < 1e-9);
        assert!(a.sasakian);
        assert!((a.eta_einstein.a - (-2.0)).abs() < 1e-9);
        assert!((a.eta_einstein.b - 6.0).abs() < 1e-9);
        assert!(a.eta_einstein.holds);
        let rw = a.reeb_weyl_norm.unwrap();
        assert!(rw < 1e-9, "η-Einstein Sasakian forces W(·,·)ξ = 0, got {rw}");
        assert!(a.reeb_weyl_two_sided.unwrap() < 1e-9);
        assert!(a.eta_einstein_q_residual < 1e-9);
        assert_eq!(a.reduction.outcome, Some(ReductionOutcome::SasakianBranch));
    }

    #[test]
    fn rotating_flat_structure_has_k_zero() {
        let (metric, structure) = flat_contact3();
        let p = Point(vec![0.4, -0.7, 1.1]);
        let tol = Tolerances::default();
        let a = contact_analysis(&metric, &structure, &p, &tol).unwrap();
        assert!(a.structure.worst_equation() < 1e-10, "{:?}", a.structure);
        assert!(a.structure.volume_ok);
        assert!((a.h_norm_sq - 2.0).abs() < 1e-10, "tr h² = 2");
        assert!(a.h_xi < 1e-10);
        assert!(a.h_traceless < 1e-10);
        assert!(a.h_phi_anticommute < 1e-10);
        assert!(a.h_symmetric < 1e-10);
        assert!(!a.k_contact);
        assert!(a.nabla_xi_residual < 1e-10);
        assert!(a.ricci_reeb.abs() < 1e-10, "flat metric");
        assert!(a.ricci_reeb_identity < 1e-10);
        assert!(a.k_mu.k.abs() < 1e-10);
        assert!(a.k_mu.mu.unwrap().abs() < 1e-10);
        assert!(a.k_mu.residual < 1e-10);
        // Trivially η-Einstein with a = b = 0, so the reduction runs and
        // lands in the flat model.
        assert!(a.eta_einstein.holds);
        assert_eq!(a.reduction.outcome, Some(ReductionOutcome::FlatModel));
        assert!(a.reduction.model_residual.unwrap() < 1e-10);
        assert!(a.nullity_ricci_residual.unwrap() < 1e-10);
        let probe = a.normalization.unwrap();
        assert!(probe.plain_residual() < 1e-10 && probe.scaled_residual() < 1e-10);
    }

    #[test]
    fn deformation_produces_the_three_quarters_structure() {
        let (metric, structure) = flat_contact3();
        let deformed_metric =
            d_homothety_metric(&metric, structure.eta(), 2.0, "kmu3").unwrap();
        let deformed = structure.d_homothety(2.0, "kmu3");
        let p = Point(vec![0.4, -0.7, 1.1]);
        let tol = Tolerances::default();
        let a = contact_analysis(&deformed_metric, &deformed, &p, &tol).unwrap();
        assert!(a.structure.worst_equation() < 1e-9, "{:?}", a.structure);
        assert!(a.structure.volume_ok);
        assert!(!a.k_contact);
        assert!((a.k_mu.k - 0.75).abs() < 1e-9, "k = {}", a.k_mu.k);
        assert!((a.k_mu.mu.unwrap() - 1.0).abs() < 1e-9, "mu = {:?}", a.k_mu.mu);
        assert!(a.k_mu.residual < 1e-9);
        assert!((a.h_norm_sq - 0.5).abs() < 1e-9, "h scales as 1/a");
        assert!((a.ricci_reeb - 1.5).abs() < 1e-9, "Ric(ξ,ξ) = 2mk");
        // Scalar curvature distinguishes the two normalizations.
        assert!((a.scalar - (-0.5)).abs() < 1e-9, "r = {}", a.scalar);
        let probe = a.normalization.unwrap();
        assert!(probe.scaled_residual() < 1e-9);
        assert!(probe.plain_residual() > 0.2);
        assert_eq!(probe.preferred(), "scaled-by-2m");
        // The nullity-condition Ricci formula holds exactly here, and its
        // trace is what fixes the scalar-curvature normalization.
        assert!(a.nullity_ricci_residual.unwrap() < 1e-8);
        // The Ricci tensor picks up an h-term, so this is not η-Einstein.
        assert!(a.eta_einstein.residual > 1e-2);
        assert!(!a.reduction.hypotheses_hold);
    }

    #[test]
    fn deformed_heisenberg_stays_sasakian() {
        let (metric, structure) = sasaki3();
        let deformed_metric = d_homothety_metric(&metric, structure.eta(), 2.0, "nil3").unwrap();
        let deformed = structure.d_homothety(2.0, "nil3");
        let p = Point(vec![0.4, -0.7, 1.1]);
        let tol = Tolerances::default();
        let a = contact_analysis(&deformed_metric, &deformed, &p, &tol).unwrap();
        assert!(a.structure.worst_equation() < 1e-10, "{:?}", a.structure);
        assert!(a.k_contact);
        assert!(a.sasakian);
        assert!((a.k_mu.k - 1.0).abs() < 1e-9);
        // This particular structure is a fixed point of the deformation
        // family as far as curvature constants go.
        assert!((a.scalar - (-2.0)).abs() < 1e-9);
        assert!((a.eta_einstein.a - (-2.0)).abs() < 1e-9);
        assert!((a.eta_einstein.b - 4.0).abs() < 1e-9);
    }

    #[test]
    fn broken_structure_is_reported_not_hidden() {
        let coords = coord_list(&["x", "y", "z"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        let metric = MetricField::diagonal(
            "broken",
            coords.clone(),
            vec![1, 1, 1],
            DomainBox::new(vec![(-2.0, 2.0); 3]).unwrap(),
            vec![e("1/4"), e("1/4"), e("1/4")],
        )
        .unwrap();
        let zero = e("0");
        let structure = ContactStructure::new(
            "broken",
            3,
            vec![zero.clone(), zero.clone(), e("1/2")],
            vec![zero.clone(), zero.clone(), e("2")],
            vec![zero.clone(); 9],
        )
        .unwrap();
        let p = Point(vec![0.4, -0.7, 1.1]);
        let tol = Tolerances::default();
        let a = contact_analysis(&metric, &structure, &p, &tol).unwrap();
        assert!(!a.structure.volume_ok, "dη = 0 kills the volume form");
        assert!(a.structure.phi_square > 0.9, "φ² misses −I + η⊗ξ");
        assert!(!a.sasakian);
    }

    #[test]
    fn even_dimension_is_rejected() {
        let coords = coord_list(&["x", "y"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        let err = ContactStructure::new(
            "even",
            2,
            vec![e("0"), e("1")],
            vec![e("0"), e("1")],
            vec![e("0"); 4],
        );
        assert!(matches!(err, Err(Error::ContactDimension { dim: 2 })));
    }
}
