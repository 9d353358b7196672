//! Built-in library of chart metrics with known geometry: model spaces,
//! warped-interval cosmologies, a plane-fronted wave, and a family of
//! contact metric structures. Each entry carries the structures needed to
//! cross-check the numerical engine (warped-product data, contact data) and
//! a set of expectation tags that the analysis layer verifies.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::contact::{d_homothety_metric, ContactStructure};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, ScalarExpr};
use crate::metric::{DomainBox, MetricField, Point};
use crate::warped::WarpedProduct;

/// One checked claim about an entry: a predicate name, the verdict the
/// analysis must reach, any constants pinning it down, and a note on where
/// the ground truth comes from. Verdict-false rows document the controls.
#[derive(Debug, Clone)]
pub struct Expectation {
    pub predicate: &'static str,
    pub verdict: bool,
    pub constants: &'static [(&'static str, f64)],
    pub provenance: &'static str,
}

/// One catalog fixture.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// How the entry itself was obtained: `closed_form` for analytic
    /// charts, `construction` for structure-preserving recipes whose
    /// output is then measured once and frozen.
    pub provenance: &'static str,
    pub metric: MetricField,
    pub warped: Option<WarpedProduct>,
    pub contact: Option<ContactStructure>,
    pub expected: Vec<Expectation>,
    /// The predicates expected to hold, for quick membership queries.
    pub tags: BTreeSet<String>,
}

impl CatalogEntry {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    /// Deterministic sample points: the stream depends only on the entry
    /// name and the seed.
    pub fn sample_points(&self, seed: u64, count: usize) -> Vec<Point> {
        seeded_points(self.name, self.metric.domain(), seed, count)
    }
}

/// Deterministic pseudo-random points in a labeled domain: the stream
/// depends only on the label and the seed, never on global state.
pub fn seeded_points(label: &str, domain: &DomainBox, seed: u64, count: usize) -> Vec<Point> {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut eight = [0u8; 8];
    eight.copy_from_slice(&digest[..8]);
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from_le_bytes(eight));
    (0..count).map(|_| domain.sample(&mut rng)).collect()
}

fn coord_list(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn exp(
    predicate: &'static str,
    verdict: bool,
    constants: &'static [(&'static str, f64)],
    provenance: &'static str,
) -> Expectation {
    Expectation { predicate, verdict, constants, provenance }
}

fn tags_of(expected: &[Expectation]) -> BTreeSet<String> {
    expected.iter().filter(|e| e.verdict).map(|e| e.predicate.to_string()).collect()
}

fn parse_in(src: &str, coords: &[String]) -> ScalarExpr {
    parse_expr(src, coords).expect("catalog expression must parse")
}

fn plain(
    name: &'static str,
    description: &'static str,
    provenance: &'static str,
    metric: MetricField,
    expected: Vec<Expectation>,
) -> CatalogEntry {
    let tags = tags_of(&expected);
    CatalogEntry {
        name,
        description,
        provenance,
        metric,
        warped: None,
        contact: None,
        expected,
        tags,
    }
}

fn warped_entry(
    name: &'static str,
    description: &'static str,
    wp: WarpedProduct,
    expected: Vec<Expectation>,
) -> CatalogEntry {
    let metric = wp.metric().expect("catalog warped product must assemble");
    let tags = tags_of(&expected);
    CatalogEntry {
        name,
        description,
        provenance: "closed_form",
        metric,
        warped: Some(wp),
        contact: None,
        expected,
        tags,
    }
}

fn contact_entry(
    name: &'static str,
    description: &'static str,
    provenance: &'static str,
    metric: MetricField,
    structure: ContactStructure,
    expected: Vec<Expectation>,
) -> CatalogEntry {
    let tags = tags_of(&expected);
    CatalogEntry {
        name,
        description,
        provenance,
        metric,
        warped: None,
        contact: Some(structure),
        expected,
        tags,
    }
}

fn flat_space(label: &str, names: &[&str], span: (f64, f64)) -> MetricField {
    let coords = coord_list(names);
    let one = parse_in("1", &coords);
    MetricField::diagonal(
        label,
        coords.clone(),
        vec![1; names.len()],
        DomainBox::new(vec![span; names.len()]).unwrap(),
        vec![one; names.len()],
    )
    .unwrap()
}

fn sphere_polar(label: &str, dim: usize) -> MetricField {
    let all = ["a", "b", "c", "p"];
    let names: Vec<&str> = all[4 - dim..].to_vec();
    let coords = coord_list(&names);
    let mut diag = Vec::new();
    let mut factor = String::new();
    for i in 0..dim {
        if factor.is_empty() {
            diag.push(parse_in("1", &coords));
        } else {
            diag.push(parse_in(&factor, &coords));
        }
        if i + 1 < dim {
            let next = format!("sin({})^2", names[i]);
            if factor.is_empty() {
                factor = next;
            } else {
                factor = format!("{factor} * {next}");
            }
        }
    }
    let mut intervals = vec![(0.3, 2.8); dim - 1];
    intervals.push((0.1, 6.1));
    MetricField::diagonal(
        label,
        coords.clone(),
        vec![1; dim],
        DomainBox::new(intervals).unwrap(),
        diag,
    )
    .unwrap()
}

fn hyperbolic_space(label: &str, names: &[&str]) -> MetricField {
    let coords = coord_list(names);
    let last = *names.last().unwrap();
    let comp = parse_in(&format!("1/{last}^2"), &coords);
    let mut intervals = vec![(-3.0, 3.0); names.len() - 1];
    intervals.push((0.5, 3.0));
    MetricField::diagonal(
        label,
        coords.clone(),
        vec![1; names.len()],
        DomainBox::new(intervals).unwrap(),
        vec![comp; names.len()],
    )
    .unwrap()
}

fn sphere_product() -> MetricField {
    let coords = coord_list(&["u1", "v1", "u2", "v2"]);
    MetricField::diagonal(
        "s2xs2",
        coords.clone(),
        vec![1, 1, 1, 1],
        DomainBox::new(vec![(0.3, 2.8), (0.1, 6.1), (0.3, 2.8), (0.1, 6.1)]).unwrap(),
        vec![
            parse_in("1", &coords),
            parse_in("sin(u1)^2", &coords),
            parse_in("1", &coords),
            parse_in("sin(u2)^2", &coords),
        ],
    )
    .unwrap()
}

fn sphere_line_product() -> MetricField {
    let coords = coord_list(&["u", "v", "w"]);
    MetricField::diagonal(
        "s2xr",
        coords.clone(),
        vec![1, 1, 1],
        DomainBox::new(vec![(0.3, 2.8), (0.1, 6.1), (-3.0, 3.0)]).unwrap(),
        vec![
            parse_in("1", &coords),
            parse_in("sin(u)^2", &coords),
            parse_in("1", &coords),
        ],
    )
    .unwrap()
}

fn pp_wave() -> MetricField {
    let coords = coord_list(&["u", "v", "x", "y"]);
    let h = "0 - (1 + u^2) * (x^2 + y^2) + (1 + u/2) * (x^2 - y^2)";
    MetricField::new(
        "pp_wave_4",
        coords.clone(),
        vec![-1, 1, 1, 1],
        DomainBox::new(vec![(-1.0, 1.0); 4]).unwrap(),
        vec![
            (0, 0, parse_in(h, &coords)),
            (0, 1, parse_in("1", &coords)),
            (2, 2, parse_in("1", &coords)),
            (3, 3, parse_in("1", &coords)),
        ],
    )
    .unwrap()
}

fn minkowski() -> MetricField {
    let coords = coord_list(&["t", "x", "y", "z"]);
    MetricField::diagonal(
        "minkowski_4",
        coords.clone(),
        vec![-1, 1, 1, 1],
        DomainBox::new(vec![(-3.0, 3.0); 4]).unwrap(),
        vec![
            parse_in("-1", &coords),
            parse_in("1", &coords),
            parse_in("1", &coords),
            parse_in("1", &coords),
        ],
    )
    .unwrap()
}

fn warp(src: &str) -> ScalarExpr {
    parse_in(src, &coord_list(&["t"]))
}

/// Heisenberg-type Sasakian structure on a 3-dimensional chart.
fn heisenberg3() -> (MetricField, ContactStructure) {
    let coords = coord_list(&["x", "y", "z"]);
    let e = |s: &str| parse_in(s, &coords);
    let metric = MetricField::new(
        "sasakian_r3",
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
    phi[1] = e("1");
    phi[3] = e("-1");
    phi[7] = e("y");
    let structure = ContactStructure::new(
        "sasakian_r3",
        3,
        vec![e("-y/2"), zero.clone(), e("1/2")],
        vec![zero.clone(), zero.clone(), e("2")],
        phi,
    )
    .unwrap();
    (metric, structure)
}

fn heisenberg5() -> (MetricField, ContactStructure) {
    let coords = coord_list(&["x1", "y1", "x2", "y2", "z"]);
    let e = |s: &str| parse_in(s, &coords);
    let eta = [e("-y1/2"), e("0"), e("-y2/2"), e("0"), e("1/2")];
    let mut entries = Vec::new();
    for i in 0..5 {
        for j in i..5 {
            let mut expr = ScalarExpr::mul(eta[i].clone(), eta[j].clone());
            if i == j && i < 4 {
                expr = ScalarExpr::add(expr, e("1/4"));
            }
            entries.push((i, j, expr));
        }
    }
    let metric = MetricField::new(
        "sasakian_r5",
        coords.clone(),
        vec![1; 5],
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
        "sasakian_r5",
        5,
        vec![e("-y1/2"), zero.clone(), e("-y2/2"), zero.clone(), e("1/2")],
        vec![zero.clone(), zero.clone(), zero.clone(), zero.clone(), e("2")],
        phi,
    )
    .unwrap();
    (metric, structure)
}

fn rotating_flat_contact() -> (MetricField, ContactStructure) {
    let coords = coord_list(&["x", "y", "z"]);
    let e = |s: &str| parse_in(s, &coords);
    let metric = MetricField::diagonal(
        "flat_contact_r3",
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
        "flat_contact_r3",
        3,
        vec![e("cos(z)/2"), e("sin(z)/2"), zero.clone()],
        vec![e("2*cos(z)"), e("2*sin(z)"), zero.clone()],
        phi,
    )
    .unwrap();
    (metric, structure)
}

/// Circle bundle over a product of two round spheres with different radii,
/// with the connection whose curvature is the base symplectic form. The
/// unequal radii break the fiberwise Einstein condition upstairs while the
/// bundle construction keeps the structure Sasakian.
fn circle_bundle_unequal_spheres() -> (MetricField, ContactStructure) {
    let coords = coord_list(&["x1", "y1", "x2", "y2", "z"]);
    let e = |s: &str| parse_in(s, &coords);
    let eta = [
        e("-4*y1/(1 + x1^2 + y1^2)"),
        e("4*x1/(1 + x1^2 + y1^2)"),
        e("-2*y2/(1 + x2^2 + y2^2)"),
        e("2*x2/(1 + x2^2 + y2^2)"),
        e("1/2"),
    ];
    let base = [
        e("4/(1 + x1^2 + y1^2)^2"),
        e("4/(1 + x1^2 + y1^2)^2"),
        e("2/(1 + x2^2 + y2^2)^2"),
        e("2/(1 + x2^2 + y2^2)^2"),
        e("0"),
    ];
    let mut entries = Vec::new();
    for i in 0..5 {
        for j in i..5 {
            let mut expr = ScalarExpr::mul(eta[i].clone(), eta[j].clone());
            if i == j {
                expr = ScalarExpr::add(expr, base[i].clone());
            }
            entries.push((i, j, expr));
        }
    }
    let metric = MetricField::new(
        "bw_s2s2",
        coords.clone(),
        vec![1; 5],
        DomainBox::new(vec![
            (-1.5, 1.5),
            (-1.5, 1.5),
            (-1.5, 1.5),
            (-1.5, 1.5),
            (-3.0, 3.0),
        ])
        .unwrap(),
        entries,
    )
    .unwrap();
    let zero = e("0");
    let mut phi = vec![zero.clone(); 25];
    phi[0 * 5 + 1] = e("1");
    phi[1 * 5 + 0] = e("-1");
    phi[2 * 5 + 3] = e("1");
    phi[3 * 5 + 2] = e("-1");
    // z-row entries keep the images horizontal: φ^z_x = 2η_y, φ^z_y = −2η_x.
    phi[4 * 5 + 0] = e("8*x1/(1 + x1^2 + y1^2)");
    phi[4 * 5 + 1] = e("8*y1/(1 + x1^2 + y1^2)");
    phi[4 * 5 + 2] = e("4*x2/(1 + x2^2 + y2^2)");
    phi[4 * 5 + 3] = e("4*y2/(1 + x2^2 + y2^2)");
    let structure = ContactStructure::new(
        "bw_s2s2",
        5,
        eta.to_vec(),
        vec![zero.clone(), zero.clone(), zero.clone(), zero.clone(), e("2")],
        phi,
    )
    .unwrap();
    (metric, structure)
}

/// The full fixture library in stable listing order.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut entries = Vec::new();

    let zero_curv = "zero-curvature closed form";
    let cc_form = "constant-curvature closed form";
    let frozen = "direct evaluation, frozen";
    let warp_form = "warped-product closed form";

    entries.push(plain(
        "euclidean_4",
        "Flat Euclidean chart in four dimensions",
        "closed_form",
        flat_space("euclidean_4", &["x", "y", "z", "w"], (-3.0, 3.0)),
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("flat", true, &[], zero_curv),
            exp("einstein", true, &[("a", 0.0)], zero_curv),
            exp("constant_curvature", true, &[("sectional", 0.0)], zero_curv),
            exp("conformally_flat", true, &[], zero_curv),
            exp("harmonic_weyl", true, &[], zero_curv),
            exp("bach_flat", true, &[], zero_curv),
        ],
    ));

    entries.push(plain(
        "minkowski_4",
        "Flat Lorentzian chart in four dimensions",
        "closed_form",
        minkowski(),
        vec![
            exp("lorentzian", true, &[], "chart signature"),
            exp("flat", true, &[], zero_curv),
            exp("einstein", true, &[("a", 0.0)], zero_curv),
            exp("constant_curvature", true, &[("sectional", 0.0)], zero_curv),
            exp("conformally_flat", true, &[], zero_curv),
            exp("harmonic_weyl", true, &[], zero_curv),
            exp("bach_flat", true, &[], zero_curv),
        ],
    ));

    entries.push(plain(
        "sphere_4",
        "Unit round sphere in polar coordinates",
        "closed_form",
        sphere_polar("sphere_4", 4),
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("flat", false, &[], cc_form),
            exp("einstein", true, &[("a", 3.0)], cc_form),
            exp("constant_curvature", true, &[("sectional", 1.0)], cc_form),
            exp("conformally_flat", true, &[], cc_form),
            exp("harmonic_weyl", true, &[], cc_form),
            exp("bach_flat", true, &[], cc_form),
        ],
    ));

    entries.push(plain(
        "hyperbolic_4",
        "Upper half-space model of constant curvature -1",
        "closed_form",
        hyperbolic_space("hyperbolic_4", &["x", "y", "z", "w"]),
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("einstein", true, &[("a", -3.0)], cc_form),
            exp("constant_curvature", true, &[("sectional", -1.0)], cc_form),
            exp("conformally_flat", true, &[], cc_form),
            exp("harmonic_weyl", true, &[], cc_form),
            exp("bach_flat", true, &[], cc_form),
        ],
    ));

    entries.push(warped_entry(
        "milne",
        "Lorentzian cone over hyperbolic 3-space; flat in disguise",
        WarpedProduct::new(
            "milne",
            -1.0,
            warp("t"),
            (0.5, 2.5),
            hyperbolic_space("hyperbolic_3", &["x", "y", "z"]),
        )
        .unwrap(),
        vec![
            exp("lorentzian", true, &[], "chart signature"),
            exp("flat", true, &[], "change of variables to a flat wedge"),
            exp("einstein", true, &[("a", 0.0)], zero_curv),
            exp("constant_curvature", true, &[("sectional", 0.0)], zero_curv),
            exp("conformally_flat", true, &[], zero_curv),
            exp("harmonic_weyl", true, &[], zero_curv),
            exp("bach_flat", true, &[], zero_curv),
            exp("warped_product", true, &[], "construction"),
            exp("einstein_fiber", true, &[("fiber_a", -2.0)], cc_form),
        ],
    ));

    entries.push(warped_entry(
        "frw_s3",
        "Exponentially expanding cosmology over the round 3-sphere",
        WarpedProduct::new(
            "frw_s3",
            -1.0,
            warp("exp(t/2)"),
            (-1.0, 0.5),
            sphere_polar("s3_unit", 3),
        )
        .unwrap(),
        vec![
            exp("lorentzian", true, &[], "chart signature"),
            exp("flat", false, &[], warp_form),
            exp("einstein", false, &[], warp_form),
            exp("constant_curvature", false, &[], warp_form),
            exp("conformally_flat", true, &[], warp_form),
            exp("harmonic_weyl", true, &[], warp_form),
            exp("bach_flat", true, &[], warp_form),
            exp("warped_product", true, &[], "construction"),
            exp("einstein_fiber", true, &[("fiber_a", 2.0)], cc_form),
            exp("quasi_einstein", true, &[], warp_form),
            exp("quasi_einstein_timelike", true, &[], warp_form),
        ],
    ));

    entries.push(warped_entry(
        "frw_flat",
        "Linearly expanding cosmology over flat 3-space",
        WarpedProduct::new(
            "frw_flat",
            -1.0,
            warp("t"),
            (0.5, 2.5),
            flat_space("r3_flat", &["x", "y", "z"], (-3.0, 3.0)),
        )
        .unwrap(),
        vec![
            exp("lorentzian", true, &[], "chart signature"),
            exp("flat", false, &[], frozen),
            exp("einstein", false, &[], warp_form),
            exp("conformally_flat", true, &[], warp_form),
            exp("harmonic_weyl", true, &[], warp_form),
            exp("bach_flat", true, &[], warp_form),
            exp("warped_product", true, &[], "construction"),
            exp("einstein_fiber", true, &[("fiber_a", 0.0)], zero_curv),
            exp("quasi_einstein", true, &[], warp_form),
            exp("quasi_einstein_timelike", true, &[], warp_form),
        ],
    ));

    entries.push(warped_entry(
        "warped_s2xs2",
        "Expanding interval over a product of two unit spheres",
        WarpedProduct::new("warped_s2xs2", -1.0, warp("exp(t)"), (-0.5, 0.5), sphere_product())
            .unwrap(),
        vec![
            exp("lorentzian", true, &[], "chart signature"),
            exp("einstein", false, &[], warp_form),
            exp("conformally_flat", false, &[], frozen),
            exp("harmonic_weyl", true, &[], frozen),
            exp("bach_flat", true, &[], frozen),
            exp("warped_product", true, &[], "construction"),
            exp("einstein_fiber", true, &[("fiber_a", 1.0)], "product-metric closed form"),
            exp("quasi_einstein", true, &[], warp_form),
            exp("quasi_einstein_timelike", true, &[], warp_form),
        ],
    ));

    entries.push(warped_entry(
        "warped_s2xr",
        "Expanding interval over a sphere-line product; control fixture",
        WarpedProduct::new(
            "warped_s2xr",
            -1.0,
            warp("exp(t)"),
            (-0.5, 0.5),
            sphere_line_product(),
        )
        .unwrap(),
        vec![
            exp("lorentzian", true, &[], "chart signature"),
            exp("einstein", false, &[], warp_form),
            exp("einstein_fiber", false, &[], "product-metric closed form"),
            exp("conformally_flat", false, &[], frozen),
            exp("harmonic_weyl", false, &[], frozen),
            exp("bach_flat", false, &[], frozen),
            exp("quasi_einstein", false, &[], warp_form),
            exp("warped_product", true, &[], "construction"),
        ],
    ));

    entries.push(plain(
        "pp_wave_4",
        "Plane-fronted wave with polarized and rotating profile",
        "closed_form",
        pp_wave(),
        vec![
            exp("lorentzian", true, &[], "chart signature"),
            exp("flat", false, &[], frozen),
            exp("einstein", false, &[], frozen),
            exp("conformally_flat", false, &[], frozen),
            exp("quasi_einstein", true, &[("a", 0.0), ("b", 1.0)], frozen),
            exp("quasi_einstein_null", true, &[], frozen),
            exp("harmonic_weyl", true, &[], frozen),
            exp("bach_flat", true, &[], frozen),
        ],
    ));

    let nil_form = "nilpotent model closed form";
    let rescale = "rescaling transformation law";
    let bundle = "bundle construction, measured once and frozen";

    let (m, s) = heisenberg3();
    entries.push(contact_entry(
        "sasakian_r3",
        "Heisenberg-type Sasakian structure in three dimensions",
        "closed_form",
        m,
        s,
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("contact", true, &[("ricci_reeb", 2.0), ("scalar", -2.0)], nil_form),
            exp("k_contact", true, &[("k", 1.0)], nil_form),
            exp("sasakian", true, &[], nil_form),
            exp("eta_einstein", true, &[("a", -2.0), ("b", 4.0)], nil_form),
            exp("quasi_einstein", true, &[], "eta-Einstein split along the Reeb field"),
            exp("nullity", true, &[("k", 1.0)], nil_form),
        ],
    ));

    let (m, s) = heisenberg5();
    entries.push(contact_entry(
        "sasakian_r5",
        "Heisenberg-type Sasakian structure in five dimensions",
        "closed_form",
        m,
        s,
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("contact", true, &[("ricci_reeb", 4.0), ("scalar", -4.0)], nil_form),
            exp("k_contact", true, &[("k", 1.0)], nil_form),
            exp("sasakian", true, &[], nil_form),
            exp("eta_einstein", true, &[("a", -2.0), ("b", 6.0)], nil_form),
            exp("quasi_einstein", true, &[], "eta-Einstein split along the Reeb field"),
            exp("nullity", true, &[("k", 1.0)], nil_form),
            exp("conformally_flat", false, &[], frozen),
            exp("harmonic_weyl", false, &[], frozen),
            exp("bach_flat", false, &[], frozen),
        ],
    ));

    let (m, s) = heisenberg3();
    let deformed_metric = d_homothety_metric(&m, s.eta(), 2.0, "nil3")
        .expect("deformation of a catalog metric must build");
    let deformed = s.d_homothety(2.0, "nil3");
    entries.push(contact_entry(
        "nil3",
        "Transverse rescaling of the three-dimensional Sasakian structure",
        "construction",
        deformed_metric,
        deformed,
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("contact", true, &[("ricci_reeb", 2.0), ("scalar", -2.0)], rescale),
            exp("k_contact", true, &[("k", 1.0)], rescale),
            exp("sasakian", true, &[], rescale),
            exp("eta_einstein", true, &[("a", -2.0), ("b", 4.0)], rescale),
            exp("quasi_einstein", true, &[], "eta-Einstein split along the Reeb field"),
            exp("nullity", true, &[("k", 1.0)], rescale),
        ],
    ));

    let (m, s) = rotating_flat_contact();
    entries.push(contact_entry(
        "flat_contact_r3",
        "Flat metric whose contact distribution rotates along the Reeb flow",
        "closed_form",
        m,
        s,
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("flat", true, &[], zero_curv),
            exp("einstein", true, &[("a", 0.0)], zero_curv),
            exp("constant_curvature", true, &[("sectional", 0.0)], zero_curv),
            exp("contact", true, &[("ricci_reeb", 0.0), ("scalar", 0.0)], zero_curv),
            exp("k_contact", false, &[], "the Reeb flow shears the distribution"),
            exp("sasakian", false, &[], "the Reeb flow shears the distribution"),
            exp("eta_einstein", true, &[("a", 0.0), ("b", 0.0)], zero_curv),
            exp("nullity", true, &[("k", 0.0), ("mu", 0.0)], zero_curv),
        ],
    ));

    let (m, s) = rotating_flat_contact();
    let deformed_metric = d_homothety_metric(&m, s.eta(), 2.0, "kmu_r3")
        .expect("deformation of a catalog metric must build");
    let deformed = s.d_homothety(2.0, "kmu_r3");
    entries.push(contact_entry(
        "kmu_r3",
        "Transverse rescaling of the flat contact structure; control fixture",
        "construction",
        deformed_metric,
        deformed,
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("flat", false, &[], rescale),
            exp("einstein", false, &[], rescale),
            exp("contact", true, &[("ricci_reeb", 1.5), ("scalar", -0.5)], rescale),
            exp("k_contact", false, &[], rescale),
            exp("sasakian", false, &[], rescale),
            exp("eta_einstein", false, &[], rescale),
            exp("nullity", true, &[("k", 0.75), ("mu", 1.0)], rescale),
        ],
    ));

    let (m, s) = circle_bundle_unequal_spheres();
    entries.push(contact_entry(
        "bw_s2s2",
        "Circle bundle over unequal spheres; Sasakian control fixture",
        "construction",
        m,
        s,
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("contact", true, &[("ricci_reeb", 4.0)], bundle),
            exp("k_contact", true, &[("k", 1.0)], bundle),
            exp("sasakian", true, &[], bundle),
            exp("nullity", true, &[("k", 1.0)], bundle),
            exp("eta_einstein", false, &[], "unequal factor curvatures"),
            exp("conformally_flat", false, &[], frozen),
            exp("harmonic_weyl", false, &[], frozen),
            exp("bach_flat", false, &[], frozen),
        ],
    ));

    entries.push(plain(
        "s3_unit",
        "Unit round 3-sphere in polar coordinates",
        "closed_form",
        sphere_polar("s3_unit", 3),
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("einstein", true, &[("a", 2.0)], cc_form),
            exp("constant_curvature", true, &[("sectional", 1.0)], cc_form),
        ],
    ));

    entries.push(plain(
        "s2xs2",
        "Product of two unit spheres",
        "closed_form",
        sphere_product(),
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("einstein", true, &[("a", 1.0)], "product-metric closed form"),
            exp("constant_curvature", false, &[], "product-metric closed form"),
            exp("conformally_flat", false, &[], frozen),
            exp("harmonic_weyl", true, &[], "parallel curvature"),
            exp("bach_flat", true, &[], "parallel curvature"),
        ],
    ));

    entries.push(plain(
        "s2xr",
        "Product of a unit sphere and a line",
        "closed_form",
        sphere_line_product(),
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("einstein", false, &[], "product-metric closed form"),
            exp(
                "quasi_einstein",
                true,
                &[("a", 1.0), ("b", -1.0)],
                "product Ricci splits along the flat factor",
            ),
        ],
    ));

    entries.push(plain(
        "r3_flat",
        "Flat Euclidean chart in three dimensions",
        "closed_form",
        flat_space("r3_flat", &["x", "y", "z"], (-3.0, 3.0)),
        vec![
            exp("riemannian", true, &[], "chart signature"),
            exp("flat", true, &[], zero_curv),
            exp("einstein", true, &[("a", 0.0)], zero_curv),
            exp("constant_curvature", true, &[("sectional", 0.0)], zero_curv),
        ],
    ));

    entries
}

pub fn names() -> Vec<&'static str> {
    catalog().iter().map(|e| e.name).collect()
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Tolerances;
    use crate::contact::contact_analysis;
    use crate::curvature::{Depth, PointCurvature};

    #[test]
    fn listing_is_stable_and_names_are_unique() {
        let all = catalog();
        assert_eq!(all.len(), 20);
        let mut names: Vec<_> = all.iter().map(|e| e.name).collect();
        let listing = names.clone();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), all.len(), "duplicate catalog names");
        assert_eq!(listing, super::names());
        assert!(entry("sphere_4").is_ok());
        assert!(matches!(entry("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn expectations_are_well_formed() {
        for e in catalog() {
            assert!(!e.expected.is_empty(), "{} lists no expectations", e.name);
            let mut preds: Vec<_> = e.expected.iter().map(|x| x.predicate).collect();
            let total = preds.len();
            preds.sort_unstable();
            preds.dedup();
            assert_eq!(preds.len(), total, "{} repeats a predicate", e.name);
            for x in &e.expected {
                assert!(!x.provenance.is_empty(), "{}/{}", e.name, x.predicate);
                assert_eq!(x.verdict, e.has_tag(x.predicate), "{}/{}", e.name, x.predicate);
                if !x.verdict {
                    assert!(
                        x.constants.is_empty(),
                        "{}/{} pins constants on a negative verdict",
                        e.name,
                        x.predicate
                    );
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_stays_in_domain() {
        for e in catalog() {
            let a = e.sample_points(7, 4);
            let b = e.sample_points(7, 4);
            assert_eq!(a.len(), 4);
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.0, y.0, "{} resampled differently", e.name);
            }
            for p in &a {
                assert!(e.metric.domain().contains(p), "{} sampled outside", e.name);
            }
            let other = e.sample_points(8, 4);
            assert_ne!(a[0].0, other[0].0, "{} ignores the seed", e.name);
        }
    }

    #[test]
    fn every_entry_has_an_invertible_metric_on_samples() {
        for e in catalog() {
            for p in e.sample_points(3, 3) {
                let jets = e.metric.jets(&p, 0).unwrap();
                let inv = jets.inverse().unwrap();
                assert!(
                    jets.product_identity_residual(&inv) < 1e-9,
                    "{} metric not cleanly invertible at {:?}",
                    e.name,
                    p.0
                );
            }
        }
    }

    #[test]
    fn structured_entries_carry_consistent_charts() {
        for e in catalog() {
            if let Some(wp) = &e.warped {
                let assembled = wp.metric().unwrap();
                assert_eq!(assembled.dim(), e.metric.dim(), "{}", e.name);
                assert_eq!(assembled.coords(), e.metric.coords(), "{}", e.name);
            }
            if let Some(cs) = &e.contact {
                assert_eq!(cs.dim(), e.metric.dim(), "{}", e.name);
            }
        }
    }

    #[test]
    fn circle_bundle_is_sasakian_but_not_transversely_einstein() {
        let e = entry("bw_s2s2").unwrap();
        let cs = e.contact.as_ref().unwrap();
        let tol = Tolerances::default();
        for p in e.sample_points(11, 2) {
            let a = contact_analysis(&e.metric, cs, &p, &tol).unwrap();
            assert!(a.structure.worst_equation() < 1e-8, "{:?}", a.structure);
            assert!(a.structure.volume_ok);
            assert!(a.k_contact, "vertical flow must be isometric");
            assert!(a.sasakian, "residual {}", a.sasakian_residual);
            assert!((a.ricci_reeb - 4.0).abs() < 1e-7);
            assert!((a.k_mu.k - 1.0).abs() < 1e-7);
            assert!(
                a.eta_einstein.residual > 1e-3,
                "unequal radii must break the transverse Einstein condition: {}",
                a.eta_einstein.residual
            );
            let rw = a.reeb_weyl_norm.unwrap();
            assert!(rw > 1e-4, "Weyl must see the broken symmetry, got {rw}");
            assert!(a.reeb_weyl_two_sided.unwrap() < 1e-7);
            assert!(!a.reduction.hypotheses_hold);
        }
    }

    #[test]
    fn deformed_entries_match_their_transformation_laws() {
        let tol = Tolerances::default();
        let e = entry("kmu_r3").unwrap();
        let cs = e.contact.as_ref().unwrap();
        let p = e.sample_points(5, 1).remove(0);
        let a = contact_analysis(&e.metric, cs, &p, &tol).unwrap();
        assert!((a.k_mu.k - 0.75).abs() < 1e-8);
        assert!((a.k_mu.mu.unwrap() - 1.0).abs() < 1e-8);
        assert!((a.scalar - (-0.5)).abs() < 1e-8);

        let e = entry("nil3").unwrap();
        let cs = e.contact.as_ref().unwrap();
        let p = e.sample_points(5, 1).remove(0);
        let a = contact_analysis(&e.metric, cs, &p, &tol).unwrap();
        assert!(a.sasakian);
        assert!((a.scalar - (-2.0)).abs() < 1e-8);
    }

    #[test]
    fn flat_entries_really_are_flat() {
        for name in ["euclidean_4", "minkowski_4", "milne", "flat_contact_r3", "r3_flat"] {
            let e = entry(name).unwrap();
            let p = e.sample_points(2, 1).remove(0);
            let c = PointCurvature::compute(&e.metric, &p, Depth::Curvature).unwrap();
            assert!(c.riem04.max_abs() < 1e-9, "{name} is not flat");
        }
    }
}

