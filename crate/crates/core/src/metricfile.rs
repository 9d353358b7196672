//! Structured text format for chart metrics.
//!
//! A definition is a sequence of stanzas:
//!
//! ```text
//! [metric]
//! version = 1
//! name = cone
//! kind = warped            # plain | warped | contact
//! coords = t, x, y, z      # optional for warped (derived from the fiber)
//! signature = -+++
//!
//! [components]             # plain and contact kinds
//! g_0_0 = -1
//! g_1_1 = t^2
//!
//! [domain]                 # plain and contact kinds
//! t = 0.5 .. 2.5
//! x = -3 .. 3
//!
//! [warped]                 # warped kind; the interval coordinate is `t`
//! epsilon = -1
//! f = exp(t)
//! t_domain = -0.5 .. 0.5
//! fiber = catalog:s2xs2    # or `inline` with the stanzas below
//! fiber_coords = a, b      # inline fiber only
//! fiber_signature = ++
//!
//! [fiber_components]       # inline fiber only
//! g_0_0 = 1
//!
//! [fiber_domain]           # inline fiber only
//! a = 0.3 .. 2.8
//!
//! [contact]                # contact kind
//! eta_2 = 1/2
//! xi_2 = 2
//! phi_0_1 = 1
//!
//! [analysis]               # optional run defaults
//! seed = 0
//! points = 50
//! tol_theorem = 1e-6
//! ```
//!
//! Component keys are `g_i_j` with `i ≤ j` or `j ≤ i`; the symmetric
//! partner is filled in automatically. Unlisted components are zero. All
//! parse failures carry the 1-based line number they occurred on.

use std::collections::BTreeMap;

use crate::catalog::{self, CatalogEntry};
use crate::contact::ContactStructure;
use crate::error::{Error, Result};
use crate::expr::{parse_expr, ExprKind, ScalarExpr};
use crate::metric::{DomainBox, MetricField};
use crate::warped::WarpedProduct;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Plain,
    Warped,
    Contact,
}

impl FileKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FileKind::Plain => "plain",
            FileKind::Warped => "warped",
            FileKind::Contact => "contact",
        }
    }
}

/// Optional run defaults carried by the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnalysisDefaults {
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub tol_structural: Option<f64>,
    pub tol_derived: Option<f64>,
    pub tol_theorem: Option<f64>,
}

/// A fully assembled metric definition.
#[derive(Debug, Clone)]
pub struct MetricFile {
    pub version: u32,
    pub name: String,
    pub kind: FileKind,
    pub metric: MetricField,
    pub warped: Option<WarpedProduct>,
    pub contact: Option<ContactStructure>,
    pub analysis: AnalysisDefaults,
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

type Section = Vec<Entry>;

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::MetricFile { line, message: message.into() }
}

fn split_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    const KNOWN: [&str; 8] = [
        "metric",
        "components",
        "domain",
        "warped",
        "fiber_components",
        "fiber_domain",
        "contact",
        "analysis",
    ];
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = match raw.find('#') {
            Some(pos) => raw[..pos].trim(),
            None => raw.trim(),
        };
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, "unterminated section header"))?
                .trim()
                .to_string();
            if !KNOWN.contains(&name.as_str()) {
                return Err(err(line, format!("unknown section [{name}]")));
            }
            if sections.contains_key(&name) {
                return Err(err(line, format!("duplicate section [{name}]")));
            }
            sections.insert(name.clone(), Vec::new());
            current = Some(name);
            continue;
        }
        let section = current
            .as_ref()
            .ok_or_else(|| err(line, "content before the first section header"))?;
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| err(line, "expected `key = value`"))?;
        sections.get_mut(section).unwrap().push(Entry {
            line,
            key: key.trim().to_string(),
            value: value.trim().to_string(),
        });
    }
    if !sections.contains_key("metric") {
        return Err(err(1, "missing required [metric] section"));
    }
    Ok(sections)
}

fn take<'a>(section: &'a Section, key: &str) -> Option<&'a Entry> {
    section.iter().find(|e| e.key == key)
}

fn require<'a>(section: &'a Section, key: &str, header_line: usize) -> Result<&'a Entry> {
    take(section, key).ok_or_else(|| err(header_line, format!("missing required key `{key}`")))
}

fn reject_unknown(section: &Section, allowed: &[&str]) -> Result<()> {
    for e in section {
        if !allowed.contains(&e.key.as_str()) {
            return Err(err(e.line, format!("unknown key `{}`", e.key)));
        }
    }
    Ok(())
}

fn parse_coords(e: &Entry) -> Result<Vec<String>> {
    let coords: Vec<String> = e
        .value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if coords.is_empty() {
        return Err(err(e.line, "empty coordinate list"));
    }
    for c in &coords {
        let mut chars = c.chars();
        let head_ok = chars.next().map(|ch| ch.is_ascii_alphabetic() || ch == '_');
        if head_ok != Some(true) || !c.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
            return Err(err(e.line, format!("invalid coordinate name `{c}`")));
        }
    }
    let mut dedup = coords.clone();
    dedup.sort_unstable();
    dedup.dedup();
    if dedup.len() != coords.len() {
        return Err(err(e.line, "repeated coordinate name"));
    }
    Ok(coords)
}

fn parse_signature(e: &Entry, dim: usize) -> Result<Vec<i8>> {
    let v = e.value.trim();
    let signs: Vec<i8> = if v.contains(',') {
        let mut out = Vec::new();
        for part in v.split(',') {
            match part.trim() {
                "1" | "+1" => out.push(1),
                "-1" => out.push(-1),
                other => return Err(err(e.line, format!("invalid signature entry `{other}`"))),
            }
        }
        out
    } else {
        v.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(err(e.line, format!("invalid signature symbol `{other}`"))),
            })
            .collect::<Result<Vec<i8>>>()?
    };
    if signs.len() != dim {
        return Err(err(
            e.line,
            format!("signature has {} entries for a {dim}-dimensional chart", signs.len()),
        ));
    }
    Ok(signs)
}

fn parse_number(e: &Entry) -> Result<f64> {
    e.value
        .trim()
        .parse::<f64>()
        .map_err(|_| err(e.line, format!("invalid number `{}`", e.value)))
}

fn parse_interval(e: &Entry) -> Result<(f64, f64)> {
    let (lo, hi) = e
        .value
        .split_once("..")
        .ok_or_else(|| err(e.line, "expected `lo .. hi`"))?;
    let lo: f64 =
        lo.trim().parse().map_err(|_| err(e.line, format!("invalid number `{}`", lo.trim())))?;
    let hi: f64 =
        hi.trim().parse().map_err(|_| err(e.line, format!("invalid number `{}`", hi.trim())))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(err(e.line, "interval must be finite with lo < hi"));
    }
    Ok((lo, hi))
}

fn parse_expression(e: &Entry, coords: &[String]) -> Result<ScalarExpr> {
    parse_expr(&e.value, coords)
        .map_err(|pe| err(e.line, format!("in expression for `{}`: {pe}", e.key)))
}

fn parse_indices(e: &Entry, prefix: &str, count: usize, dim: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = e.key.split('_').collect();
    if parts.len() != count + 1 || parts[0] != prefix {
        return Err(err(
            e.line,
            format!("key `{}` should look like `{prefix}{}`", e.key, "_i".repeat(count)),
        ));
    }
    let mut out = Vec::new();
    for part in &parts[1..] {
        let i: usize = part
            .parse()
            .map_err(|_| err(e.line, format!("invalid index `{part}` in `{}`", e.key)))?;
        if i >= dim {
            return Err(err(
                e.line,
                format!("index {i} out of range for a {dim}-dimensional chart"),
            ));
        }
        out.push(i);
    }
    Ok(out)
}

fn parse_components(
    section: &Section,
    coords: &[String],
) -> Result<Vec<(usize, usize, ScalarExpr)>> {
    let dim = coords.len();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for e in section {
        let idx = parse_indices(e, "g", 2, dim)?;
        let (i, j) = (idx[0].min(idx[1]), idx[0].max(idx[1]));
        if let Some(prev) = seen.insert((i, j), e.line) {
            return Err(err(
                e.line,
                format!("component g_{i}_{j} already given on line {prev}"),
            ));
        }
        entries.push((i, j, parse_expression(e, coords)?));
    }
    Ok(entries)
}

fn parse_domain(section: &Section, coords: &[String], header_line: usize) -> Result<DomainBox> {
    let mut intervals: Vec<Option<(f64, f64)>> = vec![None; coords.len()];
    for e in section {
        let slot = coords
            .iter()
            .position(|c| *c == e.key)
            .ok_or_else(|| err(e.line, format!("`{}` is not a chart coordinate", e.key)))?;
        if intervals[slot].is_some() {
            return Err(err(e.line, format!("duplicate interval for `{}`", e.key)));
        }
        intervals[slot] = Some(parse_interval(e)?);
    }
    let mut out = Vec::new();
    for (c, iv) in coords.iter().zip(&intervals) {
        out.push(iv.ok_or_else(|| err(header_line, format!("no interval for coordinate `{c}`")))?);
    }
    DomainBox::new(out)
}

fn section_header_line(text: &str, name: &str) -> usize {
    for (idx, raw) in text.lines().enumerate() {
        if raw.trim().trim_start_matches('#').trim() == format!("[{name}]") || raw.trim() == format!("[{name}]") {
            return idx + 1;
        }
    }
    1
}

impl MetricFile {
    pub fn parse(text: &str) -> Result<MetricFile> {
        let sections = split_sections(text)?;
        let metric_line = section_header_line(text, "metric");
        let metric_sec = &sections["metric"];
        reject_unknown(
            metric_sec,
            &["version", "name", "kind", "coords", "signature", "dimension"],
        )?;

        let version = match take(metric_sec, "version") {
            Some(e) => {
                let v = e
                    .value
                    .parse::<u32>()
                    .map_err(|_| err(e.line, format!("invalid version `{}`", e.value)))?;
                if v != FORMAT_VERSION {
                    return Err(err(e.line, format!("unsupported format version {v}")));
                }
                v
            }
            None => FORMAT_VERSION,
        };
        let name = require(metric_sec, "name", metric_line)?.value.clone();
        if name.is_empty() {
            return Err(err(metric_line, "metric name must be non-empty"));
        }
        let kind_entry = require(metric_sec, "kind", metric_line)?;
        let kind = match kind_entry.value.as_str() {
            "plain" => FileKind::Plain,
            "warped" => FileKind::Warped,
            "contact" => FileKind::Contact,
            other => {
                return Err(err(
                    kind_entry.line,
                    format!("unknown kind `{other}` (expected plain, warped, or contact)"),
                ))
            }
        };

        let has = |s: &str| sections.contains_key(s);
        let forbid = |s: &str, why: &str| -> Result<()> {
            if has(s) {
                Err(err(section_header_line(text, s), format!("[{s}] not allowed: {why}")))
            } else {
                Ok(())
            }
        };
        match kind {
            FileKind::Plain => {
                forbid("warped", "kind is plain")?;
                forbid("fiber_components", "kind is plain")?;
                forbid("fiber_domain", "kind is plain")?;
                forbid("contact", "kind is plain")?;
            }
            FileKind::Warped => {
                forbid("components", "warped charts assemble their components")?;
                forbid("domain", "warped charts take the interval and fiber domains")?;
                forbid("contact", "kind is warped")?;
                if !has("warped") {
                    return Err(err(metric_line, "kind is warped but [warped] is missing"));
                }
            }
            FileKind::Contact => {
                forbid("warped", "kind is contact")?;
                forbid("fiber_components", "kind is contact")?;
                forbid("fiber_domain", "kind is contact")?;
                if !has("contact") {
                    return Err(err(metric_line, "kind is contact but [contact] is missing"));
                }
            }
        }

        let analysis = match sections.get("analysis") {
            Some(sec) => {
                reject_unknown(
                    sec,
                    &["seed", "points", "tol_structural", "tol_derived", "tol_theorem"],
                )?;
                let mut a = AnalysisDefaults::default();
                if let Some(e) = take(sec, "seed") {
                    a.seed = Some(
                        e.value
                            .parse::<u64>()
                            .map_err(|_| err(e.line, format!("invalid seed `{}`", e.value)))?,
                    );
                }
                if let Some(e) = take(sec, "points") {
                    let p = e
                        .value
                        .parse::<usize>()
                        .map_err(|_| err(e.line, format!("invalid point count `{}`", e.value)))?;
                    if p == 0 {
                        return Err(err(e.line, "point count must be at least 1"));
                    }
                    a.points = Some(p);
                }
                for (key, slot) in [
                    ("tol_structural", 0usize),
                    ("tol_derived", 1),
                    ("tol_theorem", 2),
                ] {
                    if let Some(e) = take(sec, key) {
                        let v = parse_number(e)?;
                        if !(v.is_finite() && v > 0.0) {
                            return Err(err(e.line, "tolerance must be positive"));
                        }
                        match slot {
                            0 => a.tol_structural = Some(v),
                            1 => a.tol_derived = Some(v),
                            _ => a.tol_theorem = Some(v),
                        }
                    }
                }
                a
            }
            None => AnalysisDefaults::default(),
        };

        let declared_coords = match take(metric_sec, "coords") {
            Some(e) => Some((e.line, parse_coords(e)?)),
            None => None,
        };
        let declared_dim = match take(metric_sec, "dimension") {
            Some(e) => Some((
                e.line,
                e.value
                    .parse::<usize>()
                    .map_err(|_| err(e.line, format!("invalid dimension `{}`", e.value)))?,
            )),
            None => None,
        };

        let (metric, warped, contact) = match kind {
            FileKind::Plain | FileKind::Contact => {
                let (coords_line, coords) = declared_coords
                    .ok_or_else(|| err(metric_line, "missing required key `coords`"))?;
                if let Some((dline, d)) = declared_dim {
                    if d != coords.len() {
                        return Err(err(
                            dline,
                            format!("dimension {d} disagrees with {} coordinates", coords.len()),
                        ));
                    }
                }
                let sig_entry = require(metric_sec, "signature", metric_line)?;
                let signature = parse_signature(sig_entry, coords.len())?;
                let comp_sec = sections
                    .get("components")
                    .ok_or_else(|| err(metric_line, "missing required [components] section"))?;
                let entries = parse_components(comp_sec, &coords)?;
                let domain_sec = sections
                    .get("domain")
                    .ok_or_else(|| err(metric_line, "missing required [domain] section"))?;
                let domain =
                    parse_domain(domain_sec, &coords, section_header_line(text, "domain"))?;
                let metric = MetricField::new(&name, coords.clone(), signature, domain, entries)
                    .map_err(|e| err(coords_line, e.to_string()))?;
                let contact = if kind == FileKind::Contact {
                    let sec = &sections["contact"];
                    let dim = coords.len();
                    let zero = ScalarExpr::constant(0.0);
                    let mut eta = vec![zero.clone(); dim];
                    let mut xi = vec![zero.clone(); dim];
                    let mut phi = vec![zero; dim * dim];
                    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
                    for e in sec {
                        if let Some(prev) = seen.insert(e.key.clone(), e.line) {
                            return Err(err(
                                e.line,
                                format!("`{}` already given on line {prev}", e.key),
                            ));
                        }
                        if e.key.starts_with("eta_") {
                            let idx = parse_indices(e, "eta", 1, dim)?;
                            eta[idx[0]] = parse_expression(e, &coords)?;
                        } else if e.key.starts_with("xi_") {
                            let idx = parse_indices(e, "xi", 1, dim)?;
                            xi[idx[0]] = parse_expression(e, &coords)?;
                        } else if e.key.starts_with("phi_") {
                            let idx = parse_indices(e, "phi", 2, dim)?;
                            phi[idx[0] * dim + idx[1]] = parse_expression(e, &coords)?;
                        } else {
                            return Err(err(
                                e.line,
                                format!("unknown key `{}` (expected eta_i, xi_i, phi_i_j)", e.key),
                            ));
                        }
                    }
                    let structure = ContactStructure::new(&name, dim, eta, xi, phi)
                        .map_err(|er| err(section_header_line(text, "contact"), er.to_string()))?;
                    Some(structure)
                } else {
                    None
                };
                (metric, None, contact)
            }
            FileKind::Warped => {
                let sec = &sections["warped"];
                let header = section_header_line(text, "warped");
                reject_unknown(
                    sec,
                    &["epsilon", "f", "t_domain", "fiber", "fiber_coords", "fiber_signature"],
                )?;
                let eps_entry = require(sec, "epsilon", header)?;
                let epsilon = parse_number(eps_entry)?;
                if epsilon != 1.0 && epsilon != -1.0 {
                    return Err(err(eps_entry.line, "epsilon must be +1 or -1"));
                }
                let t_coords = vec!["t".to_string()];
                let f_entry = require(sec, "f", header)?;
                let f = parse_expression(f_entry, &t_coords)?;
                let t_domain = parse_interval(require(sec, "t_domain", header)?)?;
                let fiber_entry = require(sec, "fiber", header)?;
                let fiber = match fiber_entry.value.as_str() {
                    "inline" => {
                        let fc_entry = require(sec, "fiber_coords", header)?;
                        let fcoords = parse_coords(fc_entry)?;
                        let fsig = parse_signature(
                            require(sec, "fiber_signature", header)?,
                            fcoords.len(),
                        )?;
                        let comp_sec = sections.get("fiber_components").ok_or_else(|| {
                            err(header, "inline fiber needs a [fiber_components] section")
                        })?;
                        let entries = parse_components(comp_sec, &fcoords)?;
                        let dom_sec = sections.get("fiber_domain").ok_or_else(|| {
                            err(header, "inline fiber needs a [fiber_domain] section")
                        })?;
                        let fdomain = parse_domain(
                            dom_sec,
                            &fcoords,
                            section_header_line(text, "fiber_domain"),
                        )?;
                        MetricField::new(
                            format!("{name}_fiber"),
                            fcoords,
                            fsig,
                            fdomain,
                            entries,
                        )
                        .map_err(|e| err(fc_entry.line, e.to_string()))?
                    }
                    other => match other.strip_prefix("catalog:") {
                        Some(cname) => catalog::entry(cname)
                            .map_err(|e| err(fiber_entry.line, e.to_string()))?
                            .metric,
                        None => {
                            return Err(err(
                                fiber_entry.line,
                                "fiber must be `inline` or `catalog:<name>`",
                            ))
                        }
                    },
                };
                let wp = WarpedProduct::new(&name, epsilon, f, t_domain, fiber)
                    .map_err(|e| err(header, e.to_string()))?;
                let metric = wp.metric().map_err(|e| err(header, e.to_string()))?;
                if let Some((cline, coords)) = &declared_coords {
                    if coords != metric.coords() {
                        return Err(err(
                            *cline,
                            format!(
                                "declared coordinates {:?} disagree with assembled {:?}",
                                coords,
                                metric.coords()
                            ),
                        ));
                    }
                }
                if let Some(e) = take(metric_sec, "signature") {
                    let sig = parse_signature(e, metric.dim())?;
                    if sig != metric.signature() {
                        return Err(err(e.line, "declared signature disagrees with assembly"));
                    }
                }
                if let Some((dline, d)) = declared_dim {
                    if d != metric.dim() {
                        return Err(err(
                            dline,
                            format!("dimension {d} disagrees with assembled {}", metric.dim()),
                        ));
                    }
                }
                (metric, Some(wp), None)
            }
        };

        Ok(MetricFile { version, name, kind, metric, warped, contact, analysis })
    }

    /// Renders the definition; the output parses back to an equivalent file.
    /// Warped fibers are always written inline so the result is
    /// self-contained.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("[metric]\n");
        out.push_str(&format!("version = {}\n", self.version));
        out.push_str(&format!("name = {}\n", self.name));
        out.push_str(&format!("kind = {}\n", self.kind.as_str()));
        out.push_str(&format!("coords = {}\n", self.metric.coords().join(", ")));
        out.push_str(&format!("signature = {}\n", render_signature(self.metric.signature())));

        match self.kind {
            FileKind::Warped => {
                let wp = self.warped.as_ref().expect("warped kind carries warped data");
                out.push('\n');
                out.push_str("[warped]\n");
                out.push_str(&format!("epsilon = {}\n", render_number(wp.epsilon())));
                let t_coords = vec!["t".to_string()];
                out.push_str(&format!("f = {}\n", wp.warp().to_text(&t_coords)));
                let (lo, hi) = wp.t_domain();
                out.push_str(&format!(
                    "t_domain = {} .. {}\n",
                    render_number(lo),
                    render_number(hi)
                ));
                out.push_str("fiber = inline\n");
                let fiber = wp.fiber();
                out.push_str(&format!("fiber_coords = {}\n", fiber.coords().join(", ")));
                out.push_str(&format!(
                    "fiber_signature = {}\n",
                    render_signature(fiber.signature())
                ));
                out.push('\n');
                out.push_str("[fiber_components]\n");
                render_components(&mut out, fiber);
                out.push('\n');
                out.push_str("[fiber_domain]\n");
                render_domain(&mut out, fiber);
            }
            FileKind::Plain | FileKind::Contact => {
                out.push('\n');
                out.push_str("[components]\n");
                render_components(&mut out, &self.metric);
                out.push('\n');
                out.push_str("[domain]\n");
                render_domain(&mut out, &self.metric);
                if let Some(cs) = &self.contact {
                    let coords = self.metric.coords();
                    out.push('\n');
                    out.push_str("[contact]\n");
                    for (i, e) in cs.eta().iter().enumerate() {
                        if !is_zero(e) {
                            out.push_str(&format!("eta_{i} = {}\n", e.to_text(coords)));
                        }
                    }
                    for (i, e) in cs.xi().iter().enumerate() {
                        if !is_zero(e) {
                            out.push_str(&format!("xi_{i} = {}\n", e.to_text(coords)));
                        }
                    }
                    let n = cs.dim();
                    for i in 0..n {
                        for j in 0..n {
                            let e = cs.phi_entry(i, j);
                            if !is_zero(e) {
                                out.push_str(&format!("phi_{i}_{j} = {}\n", e.to_text(coords)));
                            }
                        }
                    }
                }
            }
        }

        if self.analysis != AnalysisDefaults::default() {
            out.push('\n');
            out.push_str("[analysis]\n");
            if let Some(s) = self.analysis.seed {
                out.push_str(&format!("seed = {s}\n"));
            }
            if let Some(p) = self.analysis.points {
                out.push_str(&format!("points = {p}\n"));
            }
            if let Some(t) = self.analysis.tol_structural {
                out.push_str(&format!("tol_structural = {}\n", render_number(t)));
            }
            if let Some(t) = self.analysis.tol_derived {
                out.push_str(&format!("tol_derived = {}\n", render_number(t)));
            }
            if let Some(t) = self.analysis.tol_theorem {
                out.push_str(&format!("tol_theorem = {}\n", render_number(t)));
            }
        }
        out
    }

    pub fn from_catalog(entry: &CatalogEntry) -> MetricFile {
        let kind = if entry.contact.is_some() {
            FileKind::Contact
        } else if entry.warped.is_some() {
            FileKind::Warped
        } else {
            FileKind::Plain
        };
        MetricFile {
            version: FORMAT_VERSION,
            name: entry.name.to_string(),
            kind,
            metric: entry.metric.clone(),
            warped: entry.warped.clone(),
            contact: entry.contact.clone(),
            analysis: AnalysisDefaults::default(),
        }
    }
}

fn is_zero(e: &ScalarExpr) -> bool {
    matches!(e.kind, ExprKind::Const(c) if c == 0.0)
}

fn render_signature(signs: &[i8]) -> String {
    signs.iter().map(|s| if *s > 0 { '+' } else { '-' }).collect()
}

fn render_number(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn render_components(out: &mut String, metric: &MetricField) {
    let n = metric.dim();
    let coords = metric.coords();
    for i in 0..n {
        for j in i..n {
            let e = metric.component(i, j);
            if !is_zero(e) {
                out.push_str(&format!("g_{i}_{j} = {}\n", e.to_text(coords)));
            }
        }
    }
}

fn render_domain(out: &mut String, metric: &MetricField) {
    for (c, (lo, hi)) in metric.coords().iter().zip(metric.domain().intervals()) {
        out.push_str(&format!("{c} = {} .. {}\n", render_number(*lo), render_number(*hi)));
    }
}
