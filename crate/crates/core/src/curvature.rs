//! Curvature engine: Christoffel symbols, Riemann/Ricci/Weyl tensors, the
//! Weyl divergence and the Bach tensor, all built from exact metric jets.
//!
//! Conventions, fixed crate-wide:
//!
//! * `R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_[X,Y] Z`;
//! * argument slots come first, the output (upper) slot last, so
//!   `riem13[a,b,c,d]` is the `d`-th component of `R(∂_a,∂_b)∂_c` and
//!   `riem04[a,b,c,d] = g(R(∂_a,∂_b)∂_c, ∂_d)`;
//! * `ricci[b,c] = Σ_a riem13[a,b,c,a]`, which makes the round unit sphere
//!   come out with positive Ricci curvature;
//! * covariant differentiation prepends its slot: `(∇T)[e, ...] = ∇_e T[...]`.
//!
//! Jet order book-keeping: metric jets of order 2 give curvature values,
//! order 3 adds the Weyl divergence, order 4 adds the Bach tensor.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::metric::{JetMatrix, MetricField, Point};
use crate::tensor::{IndexIter, JetTensor, TensorValue, Variance};

/// How far to push the derivative ladder when analyzing a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    /// Curvature tensors only (metric jets of order 2).
    Curvature,
    /// Also the divergence of the Weyl tensor (order 3).
    Divergence,
    /// Also the Bach tensor (order 4).
    Bach,
}

impl Depth {
    pub fn metric_order(self) -> usize {
        match self {
            Depth::Curvature => 2,
            Depth::Divergence => 3,
            Depth::Bach => 4,
        }
    }
}

/// Metric jets repackaged as a rank-2 jet tensor.
pub fn metric_tensor(g: &JetMatrix) -> JetTensor {
    let n = g.dim();
    let mut comps = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            comps.push(g.get(i, j).clone());
        }
    }
    JetTensor::from_components(n, vec![Variance::Down, Variance::Down], comps)
}

/// Christoffel symbols of the Levi-Civita connection, stored as
/// `gamma[b,c,d] = Γ^d_{bc}`.
pub fn christoffel(g: &JetMatrix, g_inv: &JetMatrix) -> JetTensor {
    let n = g.dim();
    let mut dg = Vec::with_capacity(n * n * n);
    for b in 0..n {
        for e in 0..n {
            for c in 0..n {
                dg.push(g.get(e, c).derivative(b));
            }
        }
    }
    let dg_at = |b: usize, e: usize, c: usize| &dg[(b * n + e) * n + c];
    let mut comps = Vec::with_capacity(n * n * n);
    for b in 0..n {
        for c in 0..n {
            for d in 0..n {
                let mut acc = dg_at(b, 0, c).scale(0.0);
                for e in 0..n {
                    let bracket = dg_at(b, e, c).add(dg_at(c, e, b)).sub(dg_at(e, b, c));
                    acc = acc.add(&g_inv.get(d, e).mul(&bracket));
                }
                comps.push(acc.scale(0.5));
            }
        }
    }
    JetTensor::from_components(n, vec![Variance::Down, Variance::Down, Variance::Up], comps)
}

/// Riemann tensor with the upper slot last:
/// `riem13[a,b,c,d] = ∂_a Γ^d_{bc} − ∂_b Γ^d_{ac} + Γ^d_{am} Γ^m_{bc} − Γ^d_{bm} Γ^m_{ac}`.
pub fn riemann13(gamma: &JetTensor) -> JetTensor {
    let n = gamma.dim();
    let mut comps = Vec::with_capacity(n * n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut acc = gamma
                        .get(&[b, c, d])
                        .derivative(a)
                        .sub(&gamma.get(&[a, c, d]).derivative(b));
                    for m in 0..n {
                        acc = acc.add(&gamma.get(&[a, m, d]).mul(gamma.get(&[b, c, m])));
                        acc = acc.sub(&gamma.get(&[b, m, d]).mul(gamma.get(&[a, c, m])));
                    }
                    comps.push(acc);
                }
            }
        }
    }
    JetTensor::from_components(
        n,
        vec![Variance::Down, Variance::Down, Variance::Down, Variance::Up],
        comps,
    )
}

/// Lowers the trailing upper slot of a jet tensor with the metric.
pub fn lower_last_slot(t: &JetTensor, g: &JetMatrix) -> JetTensor {
    let n = t.dim();
    let rank = t.rank();
    assert_eq!(t.variance()[rank - 1], Variance::Up, "last slot must be upper");
    let mut variance = t.variance().to_vec();
    variance[rank - 1] = Variance::Down;
    let mut comps = Vec::with_capacity(n.pow(rank as u32));
    for idx in IndexIter::new(n, rank) {
        let mut src = idx;
        let mut acc: Option<Jet> = None;
        for e in 0..n {
            src[rank - 1] = e;
            let term = t.get(&src[..rank]).mul(g.get(e, idx[rank - 1]));
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        comps.push(acc.unwrap());
    }
    JetTensor::from_components(n, variance, comps)
}

/// Ricci tensor `ricci[b,c] = Σ_a riem13[a,b,c,a]`.
pub fn ricci(riem13: &JetTensor) -> JetTensor {
    let n = riem13.dim();
    let mut comps = Vec::with_capacity(n * n);
    for b in 0..n {
        for c in 0..n {
            let mut acc = riem13.get(&[0, b, c, 0]).clone();
            for a in 1..n {
                acc = acc.add(riem13.get(&[a, b, c, a]));
            }
            comps.push(acc);
        }
    }
    JetTensor::from_components(n, vec![Variance::Down, Variance::Down], comps)
}

/// Scalar curvature `r = g^{bc} Ric_{bc}`.
pub fn scalar_curvature(ric: &JetTensor, g_inv: &JetMatrix) -> Jet {
    let n = ric.dim();
    let mut acc = ric.get(&[0, 0]).scale(0.0);
    for b in 0..n {
        for c in 0..n {
            acc = acc.add(&g_inv.get(b, c).mul(ric.get(&[b, c])));
        }
    }
    acc
}

/// Ricci operator `q[c,d] = (Q ∂_c)^d = g^{de} Ric_{ec}`.
pub fn ricci_operator(ric: &JetTensor, g_inv: &JetMatrix) -> JetTensor {
    let n = ric.dim();
    let mut comps = Vec::with_capacity(n * n);
    for c in 0..n {
        for d in 0..n {
            let mut acc = ric.get(&[0, 0]).scale(0.0);
            for e in 0..n {
                acc = acc.add(&g_inv.get(d, e).mul(ric.get(&[e, c])));
            }
            comps.push(acc);
        }
    }
    JetTensor::from_components(n, vec![Variance::Down, Variance::Up], comps)
}

/// Weyl tensor with the upper slot last. Defined for dimension at least 4;
/// dimension 3 is rejected because the conformal curvature lives in the
/// Cotton tensor there and every formula below would silently divide by
/// small integers that no longer mean anything.
pub fn weyl13(
    riem13: &JetTensor,
    ric: &JetTensor,
    q: &JetTensor,
    scalar: &Jet,
    g: &JetMatrix,
) -> Result<JetTensor> {
    let n = riem13.dim();
    if n < 4 {
        return Err(Error::WeylDimension { dim: n });
    }
    let nf = n as f64;
    let c1 = 1.0 / (nf - 2.0);
    let c2 = 1.0 / ((nf - 1.0) * (nf - 2.0));
    let mut comps = Vec::with_capacity(n * n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut acc = riem13.get(&[a, b, c, d]).clone();
                    if b == d {
                        acc = acc.add(&ric.get(&[a, c]).scale(c1));
                        acc = acc.sub(&g.get(a, c).mul(scalar).scale(c2));
                    }
                    if a == d {
                        acc = acc.sub(&ric.get(&[b, c]).scale(c1));
                        acc = acc.add(&g.get(b, c).mul(scalar).scale(c2));
                    }
                    acc = acc.add(&g.get(a, c).mul(q.get(&[b, d])).scale(c1));
                    acc = acc.sub(&g.get(b, c).mul(q.get(&[a, d])).scale(c1));
                    comps.push(acc);
                }
            }
        }
    }
    Ok(JetTensor::from_components(
        n,
        vec![Variance::Down, Variance::Down, Variance::Down, Variance::Up],
        comps,
    ))
}

/// Covariant derivative; the new lower slot is prepended, so
/// `(∇T)[e, i_1, ..., i_k] = (∇_{∂_e} T)(∂_{i_1}, ..., ∂_{i_k})`.
pub fn covariant_derivative(t: &JetTensor, gamma: &JetTensor) -> JetTensor {
    let n = t.dim();
    let rank = t.rank();
    let mut variance = Vec::with_capacity(rank + 1);
    variance.push(Variance::Down);
    variance.extend_from_slice(t.variance());
    let mut comps = Vec::with_capacity(n.pow(rank as u32 + 1));
    for e in 0..n {
        for idx in IndexIter::new(n, rank) {
            let mut acc = t.get(&idx[..rank]).derivative(e);
            for s in 0..rank {
                let held = idx[s];
                let mut src = idx;
                for m in 0..n {
                    src[s] = m;
                    let term = match t.variance()[s] {
                        Variance::Up => gamma.get(&[e, m, held]).mul(t.get(&src[..rank])),
                        Variance::Down => {
                            gamma.get(&[e, held, m]).mul(t.get(&src[..rank])).neg()
                        }
                    };
                    acc = acc.add(&term);
                }
            }
            comps.push(acc);
        }
    }
    JetTensor::from_components(n, variance, comps)
}

/// Divergence of the fully lowered Weyl tensor on its first slot:
/// `(div W)[a,b,d] = g^{ce} (∇W)[e, c, a, b, d]`.
pub fn weyl_divergence(weyl04: &JetTensor, gamma: &JetTensor, g_inv: &JetMatrix) -> JetTensor {
    let n = weyl04.dim();
    let grad = covariant_derivative(weyl04, gamma);
    let mut comps = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let mut acc = grad.get(&[0, 0, a, b, d]).scale(0.0);
                for c in 0..n {
                    for e in 0..n {
                        acc = acc.add(&g_inv.get(c, e).mul(grad.get(&[e, c, a, b, d])));
                    }
                }
                comps.push(acc);
            }
        }
    }
    JetTensor::from_components(n, vec![Variance::Down, Variance::Down, Variance::Down], comps)
}

/// Bach tensor
/// `B_{ab} = 1/(n−1) g^{ce} g^{df} (∇∇W)[e,f,c,a,b,d] + 1/(n−2) Ric^{cd} W[c,a,b,d]`,
/// where `(∇∇W)[e,f,...] = ∇_e ∇_f W[...]`. Needs metric jets of order 4.
pub fn bach(
    weyl04: &JetTensor,
    ric: &JetTensor,
    gamma: &JetTensor,
    g_inv: &JetMatrix,
) -> TensorValue {
    let n = weyl04.dim();
    let nf = n as f64;
    let ddw = covariant_derivative(&covariant_derivative(weyl04, gamma), gamma).values();
    let w = weyl04.values();
    let ginv = g_inv.values();
    let ric_v = ric.values();
    let mut ric_up = vec![0.0; n * n];
    for c in 0..n {
        for d in 0..n {
            let mut acc = 0.0;
            for e in 0..n {
                for f in 0..n {
                    acc += ginv[(c, e)] * ginv[(d, f)] * ric_v.get(&[e, f]);
                }
            }
            ric_up[c * n + d] = acc;
        }
    }
    let mut out = TensorValue::zeros(n, vec![Variance::Down, Variance::Down]);
    for a in 0..n {
        for b in 0..n {
            let mut second = 0.0;
            let mut zero_order = 0.0;
            for c in 0..n {
                for d in 0..n {
                    zero_order += ric_up[c * n + d] * w.get(&[c, a, b, d]);
                    for e in 0..n {
                        for f in 0..n {
                            second += ginv[(c, e)] * ginv[(d, f)] * ddw.get(&[e, f, c, a, b, d]);
                        }
                    }
                }
            }
            out.set(&[a, b], second / (nf - 1.0) + zero_order / (nf - 2.0));
        }
    }
    out
}

/// Every curvature quantity the rest of the crate consumes, evaluated at one
/// point. Weyl-derived fields are `None` below dimension 4, and the deeper
/// fields are `None` unless the requested depth covers them.
#[derive(Debug, Clone)]
pub struct PointCurvature {
    pub dim: usize,
    pub point: Point,
    pub g: TensorValue,
    pub g_inv: TensorValue,
    pub gamma: TensorValue,
    pub riem13: TensorValue,
    pub riem04: TensorValue,
    pub ricci: TensorValue,
    pub ricci_op: TensorValue,
    pub scalar: f64,
    pub weyl13: Option<TensorValue>,
    pub weyl04: Option<TensorValue>,
    pub weyl_div: Option<TensorValue>,
    pub bach: Option<TensorValue>,
}

impl PointCurvature {
    pub fn compute(metric: &MetricField, p: &Point, depth: Depth) -> Result<PointCurvature> {
        let n = metric.dim();
        let g = metric.jets(p, depth.metric_order())?;
        let g_inv = g.inverse()?;
        let gamma = christoffel(&g, &g_inv);
        let riem13 = riemann13(&gamma);
        let riem04 = lower_last_slot(&riem13, &g);
        let ric = ricci(&riem13);
        let q = ricci_operator(&ric, &g_inv);
        let scalar = scalar_curvature(&ric, &g_inv);

        let mut weyl13_v = None;
        let mut weyl04_v = None;
        let mut weyl_div_v = None;
        let mut bach_v = None;
        if n >= 4 {
            let w13 = weyl13(&riem13, &ric, &q, &scalar, &g)?;
            let w04 = lower_last_slot(&w13, &g);
            if depth != Depth::Curvature {
                weyl_div_v = Some(weyl_divergence(&w04, &gamma, &g_inv).values());
            }
            if depth == Depth::Bach {
                bach_v = Some(bach(&w04, &ric, &gamma, &g_inv));
            }
            weyl13_v = Some(w13.values());
            weyl04_v = Some(w04.values());
        }

        let mut g_inv_t = TensorValue::zeros(n, vec![Variance::Up, Variance::Up]);
        let ginv_m = g_inv.values();
        for i in 0..n {
            for j in 0..n {
                g_inv_t.set(&[i, j], ginv_m[(i, j)]);
            }
        }

        Ok(PointCurvature {
            dim: n,
            point: p.clone(),
            g: metric_tensor(&g).values(),
            g_inv: g_inv_t,
            gamma: gamma.values(),
            riem13: riem13.values(),
            riem04: riem04.values(),
            ricci: ric.values(),
            ricci_op: q.values(),
            scalar: scalar.value(),
            weyl13: weyl13_v,
            weyl04: weyl04_v,
            weyl_div: weyl_div_v,
            bach: bach_v,
        })
    }
}

/// Residuals of identities every Levi-Civita curvature tensor must satisfy.
/// All entries are max-abs component residuals in the chart.
#[derive(Debug, Clone)]
pub struct StructuralReport {
    /// `|g·g⁻¹ − I|` through the full jet order.
    pub metric_inverse: f64,
    /// `|∇g|`.
    pub metric_compatibility: f64,
    /// `|R04[a,b,c,d] + R04[b,a,c,d]|`.
    pub antisym_first_pair: f64,
    /// `|R04[a,b,c,d] + R04[a,b,d,c]|`.
    pub antisym_last_pair: f64,
    /// `|R04[a,b,c,d] − R04[c,d,a,b]|`.
    pub pair_interchange: f64,
    /// Cyclic sum over the three argument slots.
    pub first_bianchi: f64,
    /// `|Ric − Ricᵀ|`.
    pub ricci_symmetry: f64,
    /// `|div Ric − ½ dr|`.
    pub contracted_bianchi: f64,
    /// Largest single g-trace of the Weyl tensor; `None` below dimension 4.
    pub weyl_traces: Option<f64>,
}

impl StructuralReport {
    pub fn worst(&self) -> f64 {
        let mut m = self
            .metric_inverse
            .max(self.metric_compatibility)
            .max(self.antisym_first_pair)
            .max(self.antisym_last_pair)
            .max(self.pair_interchange)
            .max(self.first_bianchi)
            .max(self.ricci_symmetry)
            .max(self.contracted_bianchi);
        if let Some(w) = self.weyl_traces {
            m = m.max(w);
        }
        m
    }
}

/// Runs the identity suite at one point. Uses metric jets of order 3 (the
/// contracted Bianchi residual needs one derivative of the Ricci tensor).
pub fn structural_report(metric: &MetricField, p: &Point) -> Result<StructuralReport> {
    let n = metric.dim();
    let g = metric.jets(p, 3)?;
    let g_inv = g.inverse()?;
    let gamma = christoffel(&g, &g_inv);
    let riem13 = riemann13(&gamma);
    let riem04_j = lower_last_slot(&riem13, &g);
    let riem04 = riem04_j.values();
    let ric = ricci(&riem13);
    let q = ricci_operator(&ric, &g_inv);
    let scalar = scalar_curvature(&ric, &g_inv);
    let ric_v = ric.values();
    let ginv = g_inv.values();

    let mut antisym_first = 0.0f64;
    let mut antisym_last = 0.0f64;
    let mut pair = 0.0f64;
    let mut bianchi = 0.0f64;
    for idx in IndexIter::new(n, 4) {
        let [a, b, c, d, ..] = idx;
        let v = riem04.get(&[a, b, c, d]);
        antisym_first = antisym_first.max((v + riem04.get(&[b, a, c, d])).abs());
        antisym_last = antisym_last.max((v + riem04.get(&[a, b, d, c])).abs());
        pair = pair.max((v - riem04.get(&[c, d, a, b])).abs());
        let cyc = v + riem04.get(&[b, c, a, d]) + riem04.get(&[c, a, b, d]);
        bianchi = bianchi.max(cyc.abs());
    }

    let mut ric_sym = 0.0f64;
    for b in 0..n {
        for c in 0..n {
            ric_sym = ric_sym.max((ric_v.get(&[b, c]) - ric_v.get(&[c, b])).abs());
        }
    }

    let grad_g = covariant_derivative(&metric_tensor(&g), &gamma).values();
    let compat = grad_g.max_abs();

    let grad_ric = covariant_derivative(&ric, &gamma);
    let mut contracted = 0.0f64;
    for b in 0..n {
        let mut div = 0.0;
        for a in 0..n {
            for e in 0..n {
                div += ginv[(a, e)] * grad_ric.get(&[e, a, b]).value();
            }
        }
        let dr = scalar.derivative(b).value();
        contracted = contracted.max((div - 0.5 * dr).abs());
    }

    let weyl_traces = if n >= 4 {
        let w04 = lower_last_slot(&weyl13(&riem13, &ric, &q, &scalar, &g)?, &g).values();
        let mut worst = 0.0f64;
        for (s, t) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            for idx in IndexIter::new(n, 2) {
                let mut acc = 0.0;
                for u in 0..n {
                    for v in 0..n {
                        let mut full = [0usize; 4];
                        let mut free = idx.iter();
                        for (slot, dst) in full.iter_mut().enumerate() {
                            *dst = if slot == s {
                                u
                            } else if slot == t {
                                v
                            } else {
                                *free.next().unwrap()
                            };
                        }
                        acc += ginv[(u, v)] * w04.get(&full);
                    }
                }
                worst = worst.max(acc.abs());
            }
        }
        Some(worst)
    } else {
        None
    };

    Ok(StructuralReport {
        metric_inverse: g.product_identity_residual(&g_inv),
        metric_compatibility: compat,
        antisym_first_pair: antisym_first,
        antisym_last_pair: antisym_last,
        pair_interchange: pair,
        first_bianchi: bianchi,
        ricci_symmetry: ric_sym,
        contracted_bianchi: contracted,
        weyl_traces,
    })
}

/// Helper used by tests and fixtures: the curvature tensor a space of
/// constant sectional curvature `c` must have, assembled from the metric.
pub fn constant_curvature_riem04(g: &TensorValue, c: f64) -> TensorValue {
    let n = g.dim();
    let mut out = TensorValue::zeros(
        n,
        vec![Variance::Down, Variance::Down, Variance::Down, Variance::Down],
    );
    for idx in IndexIter::new(n, 4) {
        let [i, j, k, l, ..] = idx;
        let v = c * (g.get(&[j, k]) * g.get(&[i, l]) - g.get(&[i, k]) * g.get(&[j, l]));
        out.set(&[i, j, k, l], v);
    }
    out
}
