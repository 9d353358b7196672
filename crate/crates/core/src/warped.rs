//! Warped products over an interval: metrics `ε dt² + f(t)² g_F` on
//! `I × F`, with `U = ∂_t` the distinguished unit direction.
//!
//! Everything curvature-related here is predicted in closed form from the
//! warp function and the fiber's own curvature, so it can be held against
//! the generic engine without sharing any code path with it. The fiber
//! quantities are obtained by running the engine on the fiber metric, one
//! dimension down.

use crate::curvature::{Depth, PointCurvature};
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::metric::{DomainBox, MetricField, Point};
use crate::tensor::{IndexIter, TensorValue, Variance};

/// A warped product description. The warp expression may reference only
/// variable 0 (the interval coordinate).
#[derive(Debug, Clone)]
pub struct WarpedProduct {
    label: String,
    epsilon: f64,
    warp: ScalarExpr,
    t_domain: (f64, f64),
    fiber: MetricField,
}

impl WarpedProduct {
    pub fn new(
        label: impl Into<String>,
        epsilon: f64,
        warp: ScalarExpr,
        t_domain: (f64, f64),
        fiber: MetricField,
    ) -> Result<WarpedProduct> {
        if epsilon != 1.0 && epsilon != -1.0 {
            return Err(Error::invalid("warped product sign must be +1 or -1"));
        }
        if let Some(v) = warp.max_var() {
            if v > 0 {
                return Err(Error::invalid(
                    "warp function may depend only on the interval coordinate",
                ));
            }
        }
        if !(t_domain.0.is_finite() && t_domain.1.is_finite() && t_domain.0 < t_domain.1) {
            return Err(Error::invalid("interval must be finite and non-empty"));
        }
        Ok(WarpedProduct { label: label.into(), epsilon, warp, t_domain, fiber })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn warp(&self) -> &ScalarExpr {
        &self.warp
    }

    pub fn t_domain(&self) -> (f64, f64) {
        self.t_domain
    }

    pub fn fiber(&self) -> &MetricField {
        &self.fiber
    }

    pub fn dim(&self) -> usize {
        self.fiber.dim() + 1
    }

    /// Warp value and its first two derivatives at `t`; rejects `f ≤ 0`.
    pub fn warp_values(&self, t: f64) -> Result<(f64, f64, f64)> {
        let jet = self.warp.eval_jet(&[t], 3).map_err(Error::from)?;
        let f = jet.value();
        if f <= 0.0 {
            return Err(Error::NonPositiveWarp { t, value: f });
        }
        Ok((f, jet.partial(&[1]), jet.partial(&[2]) ))
    }

    /// The product metric on `I × F` as an ordinary metric field, with the
    /// interval coordinate first.
    pub fn metric(&self) -> Result<MetricField> {
        let m = self.fiber.dim();
        let n = m + 1;
        let mut coords = Vec::with_capacity(n);
        coords.push("t".to_string());
        for c in self.fiber.coords() {
            let name = if c == "t" { format!("{c}_f") } else { c.clone() };
            coords.push(name);
        }
        let mut signature = Vec::with_capacity(n);
        signature.push(self.epsilon as i8);
        signature.extend_from_slice(self.fiber.signature());
        let domain =
            DomainBox::new(vec![self.t_domain])?.product(self.fiber.domain());
        let f_sq = ScalarExpr::mul(self.warp.clone(), self.warp.clone());
        let mut entries = vec![(0, 0, ScalarExpr::constant(self.epsilon))];
        for i in 0..m {
            for j in i..m {
                let comp = self.fiber.component(i, j);
                if *comp == ScalarExpr::constant(0.0) {
                    continue;
                }
                entries.push((
                    i + 1,
                    j + 1,
                    ScalarExpr::mul(f_sq.clone(), comp.shift_vars(1)),
                ));
            }
        }
        MetricField::new(self.label.clone(), coords, signature, domain, entries)
    }

    /// Splits a product point into `t` and the fiber point.
    pub fn split_point(&self, p: &Point) -> (f64, Point) {
        (p[0], Point(p[1..].to_vec()))
    }

    /// Closed-form curvature at a product point, assembled from the warp
    /// derivatives and the fiber curvature.
    pub fn closed_form(&self, p: &Point) -> Result<WarpedOracle> {
        let n = self.dim();
        let m = self.fiber.dim();
        let (t, fp) = self.split_point(p);
        let (f, fd, fdd) = self.warp_values(t)?;
        let fiber = PointCurvature::compute(&self.fiber, &fp, Depth::Curvature)?;
        let gf = &fiber.g;
        let nf = n as f64;

        let down2 = vec![Variance::Down; 2];
        let down4 = vec![Variance::Down; 4];

        // Full metric at the point: ε on the interval slot, f² g_F on the rest.
        let mut g = TensorValue::zeros(n, down2.clone());
        g.set(&[0, 0], self.epsilon);
        for i in 0..m {
            for j in 0..m {
                g.set(&[i + 1, j + 1], f * f * gf.get(&[i, j]));
            }
        }

        // Curvature tensor, block by block.
        let mut riem04 = TensorValue::zeros(n, down4.clone());
        let hf = fdd / f;
        for i in 0..m {
            for j in 0..m {
                let e = -hf * g.get(&[i + 1, j + 1]);
                riem04.set(&[i + 1, 0, 0, j + 1], e);
                riem04.set(&[0, i + 1, 0, j + 1], -e);
                riem04.set(&[0, i + 1, j + 1, 0], e);
                riem04.set(&[i + 1, 0, j + 1, 0], -e);
                for k in 0..m {
                    for l in 0..m {
                        let fib = f * f * fiber.riem04.get(&[i, j, k, l])
                            - self.epsilon
                                * fd
                                * fd
                                * f
                                * f
                                * (gf.get(&[j, k]) * gf.get(&[i, l])
                                    - gf.get(&[i, k]) * gf.get(&[j, l]));
                        riem04.set(&[i + 1, j + 1, k + 1, l + 1], fib);
                    }
                }
            }
        }

        // Ricci and scalar curvature.
        let c1 = hf + (nf - 2.0) * (fd / f) * (fd / f);
        let mut ricci = TensorValue::zeros(n, down2.clone());
        ricci.set(&[0, 0], -(nf - 1.0) * hf);
        for i in 0..m {
            for j in 0..m {
                ricci.set(
                    &[i + 1, j + 1],
                    fiber.ricci.get(&[i, j]) - self.epsilon * c1 * g.get(&[i + 1, j + 1]),
                );
            }
        }
        let scalar = fiber.scalar / (f * f)
            - self.epsilon * (nf - 1.0) * (2.0 * hf + (nf - 2.0) * (fd / f) * (fd / f));

        // Traceless fiber Ricci, measured against the fiber metric.
        let mut fiber_ric0 = TensorValue::zeros(m, down2.clone());
        let kappa = fiber.scalar / (m as f64);
        for i in 0..m {
            for j in 0..m {
                fiber_ric0.set(&[i, j], fiber.ricci.get(&[i, j]) - kappa * gf.get(&[i, j]));
            }
        }

        // Weyl tensor: the mixed components vanish, the electric part sees
        // only the traceless fiber Ricci, and the fiber block combines the
        // fiber Weyl tensor with a Kulkarni-Nomizu correction.
        let weyl04 = if n >= 4 {
            let mut w = TensorValue::zeros(n, down4);
            for i in 0..m {
                for j in 0..m {
                    let e = -self.epsilon / (nf - 2.0) * fiber_ric0.get(&[i, j]);
                    w.set(&[i + 1, 0, 0, j + 1], e);
                    w.set(&[0, i + 1, 0, j + 1], -e);
                    w.set(&[0, i + 1, j + 1, 0], e);
                    w.set(&[i + 1, 0, j + 1, 0], -e);
                }
            }
            let kn = 1.0 / ((nf - 2.0) * (nf - 3.0));
            for idx in IndexIter::new(m, 4) {
                let [i, j, k, l, ..] = idx;
                let fw = match &fiber.weyl04 {
                    Some(w) => w.get(&[i, j, k, l]),
                    None => 0.0,
                };
                let knt = fiber_ric0.get(&[j, k]) * gf.get(&[i, l])
                    - fiber_ric0.get(&[i, k]) * gf.get(&[j, l])
                    + gf.get(&[j, k]) * fiber_ric0.get(&[i, l])
                    - gf.get(&[i, k]) * fiber_ric0.get(&[j, l]);
                w.set(&[i + 1, j + 1, k + 1, l + 1], f * f * (fw + kn * knt));
            }
            Some(w)
        } else {
            None
        };

        Ok(WarpedOracle {
            g,
            riem04,
            ricci,
            scalar,
            weyl04,
            fiber_ric0,
            fiber_scalar: fiber.scalar,
        })
    }
}

/// Closed-form curvature of a warped product at one point.
#[derive(Debug, Clone)]
pub struct WarpedOracle {
    pub g: TensorValue,
    pub riem04: TensorValue,
    pub ricci: TensorValue,
    pub scalar: f64,
    /// Full Weyl prediction; `None` when the product has dimension < 4.
    pub weyl04: Option<TensorValue>,
    /// Traceless Ricci of the fiber (fiber indices, lowered with `g_F`).
    pub fiber_ric0: TensorValue,
    pub fiber_scalar: f64,
}

/// Residuals between the closed forms and the generic engine, plus the norms
/// the theorem statements turn on.
#[derive(Debug, Clone)]
pub struct WarpedChecks {
    pub metric_residual: f64,
    pub riem_residual: f64,
    pub ricci_residual: f64,
    pub scalar_residual: f64,
    pub weyl_residual: f64,
    /// Engine Weyl components with exactly one interval index.
    pub mixed_norm: f64,
    /// Engine electric block `W[i,0,0,j]`.
    pub electric_norm: f64,
    /// Difference between the electric block and `−ε/(n−2)` times the
    /// traceless fiber Ricci.
    pub electric_residual: f64,
    /// Max-abs of the traceless fiber Ricci: zero iff the fiber is Einstein.
    pub fiber_einstein_residual: f64,
    pub div_weyl_norm: f64,
    pub bach_norm: f64,
    pub weyl_norm: f64,
}

/// Runs the engine on the assembled metric and compares against closed
/// forms. Requires total dimension at least 4.
pub fn warped_checks(wp: &WarpedProduct, p: &Point) -> Result<WarpedChecks> {
    let n = wp.dim();
    if n < 4 {
        return Err(Error::WeylDimension { dim: n });
    }
    let metric = wp.metric()?;
    let oracle = wp.closed_form(p)?;
    let engine = PointCurvature::compute(&metric, p, Depth::Bach)?;
    let m = n - 1;

    let weyl = engine.weyl04.as_ref().expect("dimension checked above");
    let mut mixed = 0.0f64;
    for idx in IndexIter::new(n, 4) {
        let zeros = idx[..4].iter().filter(|&&v| v == 0).count();
        if zeros == 1 {
            mixed = mixed.max(weyl.get(&idx[..4]).abs());
        }
    }
    let mut electric = 0.0f64;
    let mut electric_res = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let w = weyl.get(&[i + 1, 0, 0, j + 1]);
            electric = electric.max(w.abs());
            let predicted = -wp.epsilon() / (n as f64 - 2.0) * oracle.fiber_ric0.get(&[i, j]);
            electric_res = electric_res.max((w - predicted).abs());
        }
    }

    Ok(WarpedChecks {
        metric_residual: engine.g.sub(&oracle.g).max_abs(),
        riem_residual: engine.riem04.sub(&oracle.riem04).max_abs(),
        ricci_residual: engine.ricci.sub(&oracle.ricci).max_abs(),
        scalar_residual: (engine.scalar - oracle.scalar).abs(),
        weyl_residual: weyl.sub(oracle.weyl04.as_ref().expect("dim >= 4")).max_abs(),
        mixed_norm: mixed,
        electric_norm: electric,
        electric_residual: electric_res,
        fiber_einstein_residual: oracle.fiber_ric0.max_abs(),
        div_weyl_norm: engine.weyl_div.as_ref().expect("dim >= 4").max_abs(),
        bach_norm: engine.bach.as_ref().expect("depth includes bach").max_abs(),
        weyl_norm: weyl.max_abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn coord_list(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn flat3() -> MetricField {
        let coords = coord_list(&["x", "y", "z"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        MetricField::diagonal(
            "flat3",
            coords.clone(),
            vec![1, 1, 1],
            DomainBox::new(vec![(-1.0, 1.0); 3]).unwrap(),
            vec![e("1"), e("1"), e("1")],
        )
        .unwrap()
    }

    fn unit_s3() -> MetricField {
        let coords = coord_list(&["a", "b", "c"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        MetricField::diagonal(
            "s3",
            coords.clone(),
            vec![1, 1, 1],
            DomainBox::new(vec![(0.3, 2.8), (0.3, 2.8), (0.1, 6.1)]).unwrap(),
            vec![e("1"), e("sin(a)^2"), e("sin(a)^2 * sin(b)^2")],
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

    fn s2xr() -> MetricField {
        let coords = coord_list(&["a", "b", "c"]);
        let e = |s: &str| parse_expr(s, &coords).unwrap();
        MetricField::diagonal(
            "s2xr",
            coords.clone(),
            vec![1, 1, 1],
            DomainBox::new(vec![(0.3, 2.8), (0.1, 6.1), (-1.0, 1.0)]).unwrap(),
            vec![e("1"), e("sin(a)^2"), e("1")],
        )
        .unwrap()
    }

    fn one_var_expr(s: &str) -> ScalarExpr {
        parse_expr(s, &coord_list(&["t"])).unwrap()
    }

    #[test]
    fn trivial_warp_reproduces_the_product() {
        let wp =
            WarpedProduct::new("trivial", 1.0, one_var_expr("1"), (-1.0, 1.0), flat3()).unwrap();
        let p = Point(vec![0.2, 0.1, -0.3, 0.4]);
        let checks = warped_checks(&wp, &p).unwrap();
        assert!(checks.metric_residual < 1e-14);
        assert!(checks.riem_residual < 1e-14);
        assert!(checks.weyl_norm < 1e-14);
        assert!(checks.div_weyl_norm < 1e-14);
        assert!(checks.bach_norm < 1e-14);
    }

    #[test]
    fn expanding_flat_sections_match_closed_forms() {
        let wp =
            WarpedProduct::new("lin", -1.0, one_var_expr("t"), (0.5, 2.5), flat3()).unwrap();
        let p = Point(vec![1.3, 0.2, -0.4, 0.8]);
        let oracle = wp.closed_form(&p).unwrap();
        // Independent hand values for f(t) = t over a flat fiber.
        assert!((oracle.ricci.get(&[1, 1]) - 2.0).abs() < 1e-12);
        assert!((oracle.ricci.get(&[0, 0]) - 0.0).abs() < 1e-12);
        assert!((oracle.scalar - 6.0 / (1.3 * 1.3)).abs() < 1e-12);
        let checks = warped_checks(&wp, &p).unwrap();
        assert!(checks.riem_residual < 1e-9, "riem {}", checks.riem_residual);
        assert!(checks.ricci_residual < 1e-9);
        assert!(checks.scalar_residual < 1e-9);
        assert!(checks.weyl_residual < 1e-9);
        assert!(checks.weyl_norm < 1e-9, "conformally flat");
        assert!(checks.fiber_einstein_residual < 1e-12, "flat fiber is Einstein");
        assert!(checks.div_weyl_norm < 1e-8);
        assert!(checks.bach_norm < 1e-8);
    }

    #[test]
    fn round_spatial_sections_give_vanishing_weyl() {
        let wp = WarpedProduct::new(
            "frw_s3",
            -1.0,
            one_var_expr("exp(t/2)"),
            (-1.0, 0.5),
            unit_s3(),
        )
        .unwrap();
        let p = Point(vec![0.2, 0.9, 1.4, 2.0]);
        let checks = warped_checks(&wp, &p).unwrap();
        assert!(checks.riem_residual < 1e-9, "riem {}", checks.riem_residual);
        assert!(checks.ricci_residual < 1e-9);
        assert!(checks.scalar_residual < 1e-9);
        // r = 6 e^{-t} + 3 for this scale factor.
        let oracle = wp.closed_form(&p).unwrap();
        assert!((oracle.scalar - (6.0 * (-0.2f64).exp() + 3.0)).abs() < 1e-10);
        assert!(checks.weyl_norm < 1e-9);
        assert!(checks.electric_norm < 1e-10);
        assert!(checks.fiber_einstein_residual < 1e-9);
    }

    #[test]
    fn einstein_product_fiber_kills_electric_and_divergence() {
        let wp =
            WarpedProduct::new("w_s2xs2", -1.0, one_var_expr("exp(t)"), (-0.5, 0.5), s2xs2())
                .unwrap();
        let p = Point(vec![0.2, 0.8, 1.7, 1.1, 2.4]);
        let checks = warped_checks(&wp, &p).unwrap();
        assert!(checks.riem_residual < 1e-8, "riem {}", checks.riem_residual);
        assert!(checks.ricci_residual < 1e-8);
        assert!(checks.scalar_residual < 1e-8);
        assert!(checks.weyl_residual < 1e-8, "weyl {}", checks.weyl_residual);
        assert!(checks.fiber_einstein_residual < 1e-10);
        assert!(checks.electric_norm < 1e-9);
        assert!(checks.mixed_norm < 1e-9);
        assert!(checks.div_weyl_norm < 1e-7, "divW {}", checks.div_weyl_norm);
        assert!(checks.bach_norm < 1e-7, "bach {}", checks.bach_norm);
        assert!(checks.weyl_norm > 1e-3, "fiber Weyl survives");
    }

    #[test]
    fn non_einstein_fiber_lights_up_the_electric_part() {
        let wp = WarpedProduct::new("w_s2xr", -1.0, one_var_expr("exp(t)"), (-0.5, 0.5), s2xr())
            .unwrap();
        let p = Point(vec![0.1, 0.8, 1.7, 0.3]);
        let checks = warped_checks(&wp, &p).unwrap();
        assert!(checks.riem_residual < 1e-8);
        assert!(checks.ricci_residual < 1e-8);
        assert!(checks.weyl_residual < 1e-8, "weyl relation holds regardless");
        assert!(checks.electric_residual < 1e-8, "electric formula holds regardless");
        // Traceless fiber Ricci has eigenvalues (1/3, 1/3, −2/3).
        assert!((checks.fiber_einstein_residual - 2.0 / 3.0).abs() < 1e-9);
        assert!(checks.electric_norm > 1e-4);
        assert!(checks.div_weyl_norm > 1e-4, "divW {}", checks.div_weyl_norm);
        assert!(checks.mixed_norm < 1e-9, "mixed stays zero even here");
    }

    #[test]
    fn warp_must_stay_positive() {
        let wp = WarpedProduct::new("bad", 1.0, one_var_expr("1 - t"), (0.5, 2.5), flat3())
            .unwrap();
        match wp.warp_values(1.5) {
            Err(Error::NonPositiveWarp { .. }) => {}
            other => panic!("expected positivity guard, got {other:?}"),
        }
    }

    #[test]
    fn warp_may_only_use_the_interval_coordinate() {
        let coords = coord_list(&["t", "w"]);
        let bad = parse_expr("t + w", &coords).unwrap();
        assert!(WarpedProduct::new("bad", 1.0, bad, (0.0, 1.0), flat3()).is_err());
    }
}
