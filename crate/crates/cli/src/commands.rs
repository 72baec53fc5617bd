use crate::args::*;
use homtrop::blowup::{
    build_blowup_graph, limit_ray, max_weight_vector, realize_graph, realize_ray, weight_function, weighted_hom_sum,
    BlowUpSpec, BlowupError, Realizer,
};
use homtrop::catalog::{
    check_binomial_in_family, profile_cone, realizer_log_vector, verify_family, verify_family_certificate,
    CatalogError, FamilyReport, FamilyVerdict, HullKind, ProfileFamily,
};
use homtrop::cones::ConeRow;
use homtrop::exactlp::rat::{fmt_vec, parse_rat, serde_rat_vec, Rat};
use homtrop::graphs::{
    canonical_form, disjoint_union, graphs_up_to, hom_count, make_named, path_hom_vector, random_graph, tensor_product,
    Graph, GraphError, Named,
};
use homtrop::hde::{hde_lp_with, hde_paths_closed_form, parse_target, HdeError, HdeOptions, HdeValue, SourceSpec};
use homtrop::pathprofile::cone::{build_cone_c, row_as_inequality, verify_certificate};
use homtrop::pathprofile::rays::recombine;
use homtrop::pathprofile::witness::evaluate_scaled;
use homtrop::pathprofile::{
    check_path_inequality, decompose_ray, find_witness, rfamily_check, BinomialInequality, Certificate, PathError,
    PathVerdict, RayPart, WitnessOptions, WitnessSource,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Hde(#[from] HdeError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

/// A command result: JSON payload, text rendering and exit code.
pub trait Report: Serialize {
    fn text(&self) -> String;

    /// 1 marks a negative verdict (invalid inequality, failed verification, disagreement).
    fn exit_code(&self) -> u8 {
        0
    }
}

pub struct Output {
    pub payload: String,
    pub code: u8,
}

fn emit<R: Report>(r: &R, json: bool) -> Output {
    let payload = if json { serde_json::to_string_pretty(r).expect("reports serialize") + "\n" } else { r.text() };
    Output { payload, code: r.exit_code() }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Hom(a) => Ok(emit(&hom(a)?, json)),
        Command::Pathvec(a) => Ok(emit(&pathvec(a)?, json)),
        Command::Check(a) => Ok(emit(&check(a)?, json)),
        Command::Hde(a) => Ok(emit(&hde(a)?, json)),
        Command::Trop(a) => Ok(emit(&trop(a)?, json)),
        Command::Blowup(a) => Ok(emit(&blowup(a)?, json)),
        Command::Decompose(a) => Ok(emit(&decompose(a)?, json)),
        Command::Realize(a) => Ok(emit(&realize(a)?, json)),
        Command::Sweep(a) => Ok(emit(&sweep(a)?, json)),
    }
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(Graph::parse(&text)?)
}

fn parse_ray(text: &str) -> Result<Vec<Rat>, CliError> {
    text.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|t| parse_rat(t.trim()).map_err(|_| CliError::Usage(format!("bad rational {:?} in ray", t.trim()))))
        .collect()
}

fn parse_family(sel: &str) -> Result<ProfileFamily, CliError> {
    sel.parse::<ProfileFamily>().map_err(|e| CliError::Usage(e.to_string()))
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

#[derive(Serialize)]
pub struct HomReport {
    pattern: String,
    pattern_graph: Graph,
    target_vertices: usize,
    target_edges: usize,
    count: String,
}

impl Report for HomReport {
    fn text(&self) -> String {
        format!("hom({}; G) = {}\n", self.pattern, self.count)
    }
}

fn hom(a: &HomArgs) -> Result<HomReport, CliError> {
    let target = read_graph(&a.graph)?;
    let (name, pattern) = match (&a.pattern, &a.pattern_graph) {
        (Some(t), _) => (t.clone(), parse_target(t)?),
        (None, Some(p)) => (p.display().to_string(), read_graph(p)?),
        (None, None) => return Err(CliError::Usage("a pattern term or --pattern-graph is required".into())),
    };
    let count = hom_count(&pattern, &target)?;
    Ok(HomReport {
        pattern: name,
        pattern_graph: pattern,
        target_vertices: target.vertex_count(),
        target_edges: target.edge_count(),
        count: count.to_string(),
    })
}

#[derive(Serialize)]
pub struct PathvecReport {
    vertices: usize,
    edges: usize,
    counts: Vec<String>,
}

impl Report for PathvecReport {
    fn text(&self) -> String {
        self.counts.iter().enumerate().map(|(k, c)| format!("P{k} = {c}\n")).collect()
    }
}

fn pathvec(a: &PathvecArgs) -> Result<PathvecReport, CliError> {
    let g = read_graph(&a.graph)?;
    let counts = path_hom_vector(&g, a.max_len).counts;
    Ok(PathvecReport { vertices: g.vertex_count(), edges: g.edge_count(), counts: strings(&counts) })
}

#[derive(Serialize)]
struct WitnessCounts {
    scale: u64,
    lhs: String,
    rhs: String,
    source: WitnessSource,
}

#[derive(Serialize)]
pub struct CheckReport {
    inequality: String,
    family: String,
    status: &'static str,
    lift: Option<usize>,
    certificate: Option<Certificate>,
    certificate_verified: Option<bool>,
    #[serde(serialize_with = "ser_opt_rats")]
    ray: Option<Vec<Rat>>,
    witness_graph: Option<Graph>,
    witness: Option<WitnessCounts>,
    semantics: &'static str,
}

fn ser_opt_rats<S: serde::Serializer>(v: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(|r| strings(r)).serialize(s)
}

fn source_name(s: WitnessSource) -> &'static str {
    match s {
        WitnessSource::CliqueUnion => "clique union",
        WitnessSource::Enumeration => "enumeration",
        WitnessSource::BlowUp => "blow-up",
    }
}

impl Report for CheckReport {
    fn text(&self) -> String {
        let mut out = format!("{}: {} ({})\n", self.inequality, self.status, self.family);
        if let Some(c) = &self.certificate {
            out.push_str("certificate:\n");
            for t in &c.terms {
                let _ = writeln!(out, "  {} * {}", t.coeff, t.generator);
            }
            if let Some(v) = self.certificate_verified {
                let _ = writeln!(out, "certificate verified: {}", if v { "yes" } else { "no" });
            }
        }
        if let Some(r) = &self.ray {
            let _ = writeln!(out, "violating ray: {}", fmt_vec(r));
        }
        match (&self.witness_graph, &self.witness) {
            (Some(g), Some(w)) => {
                let _ = writeln!(
                    out,
                    "witness ({}, {} vertices, {} edges, exponents scaled by {}): {} < {}",
                    source_name(w.source),
                    g.vertex_count(),
                    g.edge_count(),
                    w.scale,
                    w.lhs,
                    w.rhs
                );
                out.push_str(&g.to_text());
            }
            _ if self.status == "invalid" => out.push_str("no witness graph found within the search limits\n"),
            _ => {}
        }
        out
    }

    fn exit_code(&self) -> u8 {
        u8::from(self.status == "invalid")
    }
}

fn check(a: &CheckArgs) -> Result<CheckReport, CliError> {
    let ineq = BinomialInequality::parse(&a.inequality).map_err(PathError::from)?;
    let mut report = CheckReport {
        inequality: ineq.to_string(),
        family: "paths".into(),
        status: "valid",
        lift: None,
        certificate: None,
        certificate_verified: None,
        ray: None,
        witness_graph: None,
        witness: None,
        semantics: "positive-part",
    };
    if let Some(sel) = &a.family {
        let fam = parse_family(sel)?;
        report.family = fam.to_string();
        match check_binomial_in_family(fam, &ineq)? {
            FamilyVerdict::Valid { certificate } => {
                report.certificate_verified = Some(verify_family_certificate(fam, &ineq, &certificate)?);
                report.certificate = Some(certificate);
            }
            FamilyVerdict::Invalid { ray } => {
                report.status = "invalid";
                report.ray = Some(ray);
            }
        }
        return Ok(report);
    }
    match check_path_inequality(&ineq)? {
        PathVerdict::Valid { n, certificate } => {
            report.lift = Some(n);
            report.certificate_verified = Some(verify_certificate(&ineq, &certificate)?);
            report.certificate = Some(certificate);
        }
        PathVerdict::Invalid { n, ray, .. } => {
            report.status = "invalid";
            report.lift = Some(n);
            if !a.no_witness {
                let opts = WitnessOptions { max_vertices: a.max_vertices as usize, ..WitnessOptions::default() };
                if let Some(w) = find_witness(&ineq, Some(&ray), &opts)? {
                    report.witness = Some(WitnessCounts {
                        scale: w.scale,
                        lhs: w.lhs.to_string(),
                        rhs: w.rhs.to_string(),
                        source: w.source,
                    });
                    report.witness_graph = Some(w.graph);
                }
            }
            report.ray = Some(ray);
        }
    }
    Ok(report)
}

#[derive(Serialize)]
pub struct HdeReport {
    source: String,
    target: String,
    method: &'static str,
    lp: Option<HdeValue>,
    series_parallel: Option<bool>,
    closed_form: Option<String>,
    agree: Option<bool>,
}

impl Report for HdeReport {
    fn text(&self) -> String {
        let mut out = String::new();
        if let Some(v) = &self.lp {
            let _ = writeln!(out, "lp: {v}");
        }
        if let Some(v) = &self.closed_form {
            let _ = writeln!(out, "closed-form: {v}");
        }
        match self.agree {
            Some(true) => out.push_str("methods agree\n"),
            Some(false) => out.push_str("methods disagree\n"),
            None => {}
        }
        if self.series_parallel == Some(false) {
            out.push_str("note: the target has a K4 minor; the LP value is an upper bound\n");
        }
        out
    }

    fn exit_code(&self) -> u8 {
        u8::from(self.agree == Some(false))
    }
}

/// Edge count of `g` if it is a path.
fn path_length(g: &Graph) -> Option<u64> {
    let p = make_named(Named::Path(g.edge_count())).ok()?;
    (p.vertex_count() == g.vertex_count() && canonical_form(&p) == canonical_form(g)).then_some(g.edge_count() as u64)
}

fn hde(a: &HdeArgs) -> Result<HdeReport, CliError> {
    let source = SourceSpec::parse(&a.source)?;
    let (target_name, target) = match (&a.target, &a.graph) {
        (Some(t), _) => (t.clone(), parse_target(t)?),
        (None, Some(p)) => (p.display().to_string(), read_graph(p)?),
        (None, None) => return Err(CliError::Usage("--target or --graph is required".into())),
    };
    let mut report = HdeReport {
        source: a.source.clone(),
        target: target_name,
        method: match a.method {
            HdeMethod::Lp => "lp",
            HdeMethod::Closed => "closed",
            HdeMethod::Both => "both",
        },
        lp: None,
        series_parallel: None,
        closed_form: None,
        agree: None,
    };
    if a.method != HdeMethod::Lp {
        let single_path = match &source.components[..] {
            [(g, mult)] if *mult == Rat::from_integer(1.into()) => path_length(g),
            _ => None,
        };
        let (Some(v), Some(w)) = (single_path, path_length(&target)) else {
            return Err(CliError::Usage("the closed form needs a single path source and a path target".into()));
        };
        report.closed_form = Some(hde_paths_closed_form(v, w).to_string());
    }
    if a.method != HdeMethod::Closed {
        let opts = HdeOptions { max_target_vertices: a.max_vertices, ..HdeOptions::default() };
        let res = hde_lp_with(&source, &target, &opts)?;
        report.series_parallel = Some(res.series_parallel);
        report.lp = Some(res.value);
    }
    if let (Some(lp), Some(cf)) = (&report.lp, &report.closed_form) {
        report.agree = Some(lp.to_string() == *cf);
    }
    Ok(report)
}

#[derive(Serialize)]
pub struct TropReport {
    family: String,
    dim: usize,
    hull: HullKind,
    rows: Vec<ConeRow>,
    #[serde(with = "homtrop::exactlp::rat::serde_rat_vecs")]
    stated_rays: Vec<Vec<Rat>>,
    verification: Option<FamilyReport>,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report for TropReport {
    fn text(&self) -> String {
        let hull = match self.hull {
            HullKind::Double => "max-closed convex hull",
            HullKind::Conic => "conic hull",
        };
        let mut out = format!("family {} (dimension {}, generated as {})\nrows (>= 0):\n", self.family, self.dim, hull);
        for r in &self.rows {
            let _ = writeln!(out, "  {}: {}", r.label, fmt_vec(&r.coeffs));
        }
        out.push_str("rays:\n");
        for r in &self.stated_rays {
            let _ = writeln!(out, "  {}", fmt_vec(r));
        }
        if let Some(v) = &self.verification {
            let ext = v.extreme_rays_match.map_or("n/a", yes_no);
            let _ = writeln!(
                out,
                "verification: rays in cone {}, hull matches {}, extreme rays match {}: {}",
                yes_no(v.rays_in_cone),
                yes_no(v.hull_matches),
                ext,
                if v.passed { "PASS" } else { "FAIL" }
            );
        }
        out
    }

    fn exit_code(&self) -> u8 {
        u8::from(self.verification.as_ref().is_some_and(|v| !v.passed))
    }
}

fn trop(a: &TropArgs) -> Result<TropReport, CliError> {
    let fam = parse_family(&a.family)?;
    let pc = profile_cone(fam)?;
    let verification = if a.verify { Some(verify_family(fam)?) } else { None };
    Ok(TropReport {
        family: fam.to_string(),
        dim: fam.dim(),
        hull: pc.hull,
        rows: pc.cone.rows,
        stated_rays: pc.stated_rays,
        verification,
    })
}

#[derive(Serialize)]
pub struct BlowupReport {
    spec: BlowUpSpec,
    #[serde(with = "serde_rat_vec")]
    vertex_weights: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    edge_weights: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    limit_ray: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    max_weight_ray: Vec<Rat>,
    rays_agree: bool,
    blowup: Option<BlownUp>,
}

#[derive(Serialize)]
struct BlownUp {
    m: u64,
    vertices: usize,
    edges: usize,
    path_counts: Vec<String>,
    closed_form_counts: Vec<String>,
    counts_agree: bool,
}

impl Report for BlowupReport {
    fn text(&self) -> String {
        let mut out = format!("spec: {}\n", self.spec.to_text());
        let _ = writeln!(out, "vertex weights: {}", fmt_vec(&self.vertex_weights));
        let _ = writeln!(out, "edge weights: {}", fmt_vec(&self.edge_weights));
        let _ = writeln!(out, "limit ray: {}", fmt_vec(&self.limit_ray));
        let _ = writeln!(out, "max-weight ray: {}", fmt_vec(&self.max_weight_ray));
        let _ = writeln!(out, "rays agree: {}", yes_no(self.rays_agree));
        if let Some(b) = &self.blowup {
            let _ = writeln!(out, "blow-up at m = {}: {} vertices, {} edges", b.m, b.vertices, b.edges);
            let _ = writeln!(out, "path counts: {}", b.path_counts.join(","));
            let _ = writeln!(out, "counts agree with the weighted sum: {}", yes_no(b.counts_agree));
        }
        out
    }

    fn exit_code(&self) -> u8 {
        u8::from(!self.rays_agree || self.blowup.as_ref().is_some_and(|b| !b.counts_agree))
    }
}

fn blowup(a: &BlowupArgs) -> Result<BlowupReport, CliError> {
    let spec = BlowUpSpec::parse(&a.spec)?;
    let n = a.n.unwrap_or(spec.f.max(1));
    let p = weight_function(&spec)?;
    let ray = limit_ray(&spec, n)?;
    let dp = max_weight_vector(&p, 2 * n + 1);
    let blowup = match a.m {
        Some(m) => {
            let g = build_blowup_graph(&p, m, a.budget)?;
            let counts = path_hom_vector(&g, 2 * n + 1).counts;
            let closed = weighted_hom_sum(&p, m, 2 * n + 1)
                .ok_or_else(|| CliError::Usage("weights are not integral at this scale".into()))?;
            Some(BlownUp {
                m,
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                counts_agree: counts == closed,
                path_counts: strings(&counts),
                closed_form_counts: strings(&closed),
            })
        }
        None => None,
    };
    Ok(BlowupReport {
        rays_agree: ray == dp,
        vertex_weights: p.vertex_weights,
        edge_weights: p.edge_weights,
        limit_ray: ray,
        max_weight_ray: dp,
        spec,
        blowup,
    })
}

#[derive(Serialize)]
pub struct DecomposeReport {
    #[serde(with = "serde_rat_vec")]
    ray: Vec<Rat>,
    parts: Vec<RayPart>,
    parts_valid: bool,
    recombines: bool,
}

impl Report for DecomposeReport {
    fn text(&self) -> String {
        let mut out = format!("ray: {}\n", fmt_vec(&self.ray));
        for p in &self.parts {
            match p {
                RayPart::Family { l, slope, anchor, spec, ray } => {
                    let _ = writeln!(
                        out,
                        "part l={l}: s={} b={} anchor={anchor} slope={slope} d={} -> {}",
                        spec.s,
                        spec.b,
                        fmt_vec(&spec.d),
                        fmt_vec(ray)
                    );
                }
                RayPart::Special { first, ones, ray } => {
                    let _ = writeln!(out, "part special: first={first} ones={ones} -> {}", fmt_vec(ray));
                }
            }
        }
        let _ = writeln!(out, "parts valid: {}", yes_no(self.parts_valid));
        let _ = writeln!(out, "tropical sum reproduces the ray: {}", yes_no(self.recombines));
        out
    }

    fn exit_code(&self) -> u8 {
        u8::from(!(self.parts_valid && self.recombines))
    }
}

fn decompose(a: &DecomposeArgs) -> Result<DecomposeReport, CliError> {
    let ray = parse_ray(&a.ray)?;
    let parts = decompose_ray(&ray)?;
    let parts_valid = parts.iter().all(|p| match p {
        RayPart::Family { spec, .. } => rfamily_check(spec),
        RayPart::Special { .. } => true,
    });
    let recombines = recombine(&parts).as_deref() == Some(&ray[..]);
    Ok(DecomposeReport { ray, parts, parts_valid, recombines })
}

#[derive(Serialize)]
pub struct RealizeReport {
    #[serde(with = "serde_rat_vec")]
    ray: Vec<Rat>,
    scale: u64,
    plan: Option<Realizer>,
    vertices: Option<usize>,
    edges: Option<usize>,
    counts: Vec<String>,
    log_ratios: Vec<f64>,
    #[serde(skip)]
    graph_text: Option<String>,
}

impl Report for RealizeReport {
    fn text(&self) -> String {
        let mut out = format!("target ray: {}\nscale: {}\n", fmt_vec(&self.ray), self.scale);
        if let (Some(v), Some(e)) = (self.vertices, self.edges) {
            let _ = writeln!(out, "graph: {v} vertices, {e} edges");
        }
        let _ = writeln!(out, "counts: {}", self.counts.join(","));
        let ratios: Vec<String> = self.log_ratios.iter().map(|x| format!("{x:.6}")).collect();
        let _ = writeln!(out, "log ratios: {}", ratios.join(","));
        if let Some(t) = &self.graph_text {
            out.push_str(t);
        }
        out
    }
}

fn log_ratio(count: &BigUint, base: u64) -> f64 {
    homtrop::catalog::ln_big(count) / (base as f64).ln()
}

fn realize(a: &RealizeArgs) -> Result<RealizeReport, CliError> {
    if let (Some(sel), Some(index)) = (&a.family, a.index) {
        let fam = parse_family(sel)?;
        let pc = profile_cone(fam)?;
        let ray = pc
            .stated_rays
            .get(index)
            .cloned()
            .ok_or(CatalogError::UnknownRay { index, count: pc.stated_rays.len() })?;
        let eval = realizer_log_vector(fam, index, a.m)?;
        return Ok(RealizeReport {
            ray,
            scale: eval.n,
            plan: None,
            vertices: None,
            edges: None,
            counts: strings(&eval.counts),
            log_ratios: eval.log_ratios,
            graph_text: None,
        });
    }
    let ray = parse_ray(a.ray.as_deref().unwrap_or_default())?;
    if a.m < 2 {
        return Err(CliError::Usage("--m must be at least 2".into()));
    }
    let r0 = ray.first().cloned().unwrap_or_default();
    let plan = if r0 > Rat::default() {
        realize_ray(&ray.iter().map(|x| x / &r0).collect::<Vec<_>>())?
    } else {
        return Err(CliError::Usage("the first coordinate must be positive".into()));
    };
    let g = realize_graph(&ray, a.m, a.budget)?;
    let counts = path_hom_vector(&g, ray.len() - 1).counts;
    let log_ratios = counts.iter().map(|c| log_ratio(c, a.m)).collect();
    Ok(RealizeReport {
        ray,
        scale: a.m,
        plan: Some(plan),
        vertices: Some(g.vertex_count()),
        edges: Some(g.edge_count()),
        counts: strings(&counts),
        log_ratios,
        graph_text: a.emit_graph.then(|| g.to_text()),
    })
}

#[derive(Serialize, Clone)]
struct Violation {
    row: String,
    graph: Graph,
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
pub struct SweepReport {
    rows: usize,
    enumerated_graphs: usize,
    random_graphs: usize,
    seed: u64,
    checks: u64,
    skipped_zero_counts: u64,
    violation_count: usize,
    violations: Vec<Violation>,
}

const SHOWN_VIOLATIONS: usize = 10;

impl Report for SweepReport {
    fn text(&self) -> String {
        let mut out = format!(
            "{} rows on {} enumerated and {} random graphs (seed {}): {} checks, {} skipped for zero counts\n",
            self.rows, self.enumerated_graphs, self.random_graphs, self.seed, self.checks, self.skipped_zero_counts
        );
        let _ = writeln!(out, "violations: {}", self.violation_count);
        for v in &self.violations {
            let _ = writeln!(out, "  {} fails: {} < {} on", v.row, v.lhs, v.rhs);
            out.push_str(&v.graph.to_text());
        }
        out
    }

    fn exit_code(&self) -> u8 {
        u8::from(self.violation_count > 0)
    }
}

/// Random graphs of three shapes: plain `G(n, p)`, tensor products and disjoint unions of small ones.
pub fn random_corpus(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| {
        let n = rng.gen_range(lo..=hi);
        let p = rng.gen_range(0.2..0.9);
        random_graph(rng, n, p)
    };
    (0..count)
        .map(|i| match i % 3 {
            0 => small(&mut rng, 1, 10),
            1 => {
                let (a, b) = (small(&mut rng, 2, 5), small(&mut rng, 2, 5));
                tensor_product(&a, &b).expect("at most 25 vertices")
            }
            _ => {
                let (a, b) = (small(&mut rng, 1, 5), small(&mut rng, 1, 5));
                disjoint_union(&a, &b)
            }
        })
        .collect()
}

struct ChunkResult {
    checks: u64,
    skipped: u64,
    violations: Vec<Violation>,
}

fn sweep_chunk(graphs: &[Graph], rows: &[(String, BinomialInequality)], max_len: usize) -> ChunkResult {
    let mut res = ChunkResult { checks: 0, skipped: 0, violations: Vec::new() };
    for g in graphs {
        let counts = path_hom_vector(g, max_len).counts;
        for (label, ineq) in rows {
            match evaluate_scaled(ineq, &counts) {
                None => res.skipped += 1,
                Some((l, r)) => {
                    res.checks += 1;
                    if l < r {
                        res.violations.push(Violation {
                            row: label.clone(),
                            graph: g.clone(),
                            lhs: l.to_string(),
                            rhs: r.to_string(),
                        });
                    }
                }
            }
        }
    }
    res
}

fn sweep(a: &SweepArgs) -> Result<SweepReport, CliError> {
    let rows: Vec<(String, BinomialInequality)> = match &a.ineq {
        Some(text) => vec![(text.clone(), BinomialInequality::parse(text).map_err(PathError::from)?)],
        None => build_cone_c(a.n).cone.rows.iter().map(|r| (r.label.clone(), row_as_inequality(&r.coeffs))).collect(),
    };
    let max_len = rows.iter().filter_map(|(_, i)| i.max_index()).max().unwrap_or(0);
    let enumerated = if a.max_vertices == 0 { Vec::new() } else { graphs_up_to(a.max_vertices as usize, true)? };
    let n_enum = enumerated.len();
    let mut graphs = enumerated;
    graphs.extend(random_corpus(a.random, a.seed));
    let jobs = (a.jobs as usize).min(graphs.len().max(1));
    let chunk = graphs.len().div_ceil(jobs).max(1);
    let results: Vec<ChunkResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = graphs.chunks(chunk).map(|c| scope.spawn(|| sweep_chunk(c, &rows, max_len))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut report = SweepReport {
        rows: rows.len(),
        enumerated_graphs: n_enum,
        random_graphs: a.random,
        seed: a.seed,
        checks: 0,
        skipped_zero_counts: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    for r in results {
        report.checks += r.checks;
        report.skipped_zero_counts += r.skipped;
        report.violation_count += r.violations.len();
        report.violations.extend(r.violations);
    }
    report.violations.truncate(SHOWN_VIOLATIONS);
    Ok(report)
}
