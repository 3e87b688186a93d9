//! Command implementations behind the `spherindex` binary.

use std::path::Path;

use crate::degeneration::{build_degeneration, degeneration_fiber_data, DegenerationError};
use crate::fan::{fan_validate, is_complete_for, is_smooth, standard_fan, strata, Fan, FanError, StrataPoset};
use crate::io::{DatumFile, FanFile, Rational};
use crate::linalg::{IntLattice, Q};
use crate::report::{
    vi, vi64, vq, AnalysisReport, CheckReport, ConeReport, DegenerationReport, FanReport, FiberReport, IndexReport,
    LocalizationReport, Report, RootWithMultiplicity, SigmaReport, SimpleRestriction, Status, StratumReport,
};
use crate::restriction::{
    aut_roots, chamber_containment_check, coweight_identity_check, facet_inheritance_check, localize, phi_k_res,
    restrict_datum, valuation_cone, RestrictedDatum, RestrictionError,
};
use crate::roots::type_name;
use crate::spherical::SphericalDatumK;
use crate::tits::TitsError;
use crate::validation::has_errors;

pub const ORBIT_CAP_VAR: &str = "SPHERINDEX_ORBIT_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanCheck {
    Smooth,
    Complete,
    Support,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    /// Overrides reflection and orbit budgets.
    pub cap: Option<usize>,
}

impl Options {
    /// Reads the budget override from the environment.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(ORBIT_CAP_VAR) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .map(|c| Self { cap: Some(c) })
                .map_err(|_| format!("{ORBIT_CAP_VAR} must be a positive integer, got {v:?}")),
            Err(_) => Ok(Self::default()),
        }
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

/// Command input: a file on disk or text already in memory.
#[derive(Debug, Clone)]
pub struct Input {
    name: String,
    text: Result<String, String>,
}

impl Input {
    pub fn file(path: &Path) -> Self {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()));
        Self { name: path.display().to_string(), text }
    }

    pub fn text(name: &str, text: &str) -> Self {
        Self { name: name.into(), text: Ok(text.into()) }
    }
}

fn restriction_status(e: &RestrictionError) -> Status {
    if e.is_theorem_violation() {
        Status::TheoremViolation
    } else {
        Status::ValidationFailed
    }
}

/// Parsed and validated datum, or the report to emit instead.
fn load_datum(report: Report, text: &str, opts: Options) -> Result<(Report, DatumFile, SphericalDatumK), Report> {
    let file = DatumFile::parse(text).map_err(|e| report.clone().fail(Status::ParseError, e))?;
    let mut d = file.to_datum().map_err(|e| report.clone().fail(Status::ParseError, e))?;
    if let Some(cap) = opts.cap {
        d = d.with_budget(cap);
    }
    let mut report = report;
    report.violations = d.validate();
    if has_errors(&report.violations) {
        return Err(report.fail(Status::ValidationFailed, "datum failed validation"));
    }
    Ok((report, file, d))
}

fn load_restricted(
    command: &str,
    input: &Input,
    opts: Options,
) -> Result<(Report, DatumFile, SphericalDatumK, RestrictedDatum), Report> {
    let report = Report::new(command, &input.name);
    let text = input.text.clone().map_err(|e| report.clone().fail(Status::ParseError, e))?;
    let (report, file, d) = load_datum(report, &text, opts)?;
    let rd = restrict_datum(&d).map_err(|e| report.clone().fail(restriction_status(&e), e))?;
    Ok((report, file, d, rd))
}

fn names(rd: &RestrictedDatum, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&k| rd.k_roots[k].name.clone()).collect()
}

fn sigma_names(rd: &RestrictedDatum, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| rd.sigma[i].name.clone()).collect()
}

fn sigma_reports(rd: &RestrictedDatum) -> Vec<SigmaReport> {
    rd.sigma
        .iter()
        .map(|s| SigmaReport {
            name: s.name.clone(),
            fiber: names(rd, &s.fiber),
            coords: vi(&s.coords),
            primitive: vi(&s.primitive),
            multiplier: Rational(Q::from_integer(s.multiplier.clone())),
            beta: s.beta.as_ref().map(|b| vq(b)),
        })
        .collect()
}

fn check<T, E: ToString>(name: &str, r: &Result<T, E>, ok_detail: impl Fn(&T) -> String) -> CheckReport {
    match r {
        Ok(v) => CheckReport { name: name.into(), passed: true, detail: ok_detail(v) },
        Err(e) => CheckReport { name: name.into(), passed: false, detail: e.to_string() },
    }
}

pub fn analyze(input: &Input, opts: Options) -> Report {
    let (mut report, _, d, rd) = match load_restricted("analyze", input, opts) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let phi = phi_k_res(&rd);
    let coweight = coweight_identity_check(&rd);
    let facet = facet_inheritance_check(&rd);
    let chamber = chamber_containment_check(&d, &rd);
    let checks = vec![
        check("phi-indivisible", &phi, |p| format!("{} indivisible restrictions", p.indivisible.len())),
        check("coweight-identity", &coweight, |c| format!("{} roots", c.len())),
        check("facet-inheritance", &facet, |f| format!("{} roots", f.len())),
        check("chamber-containment", &chamber, |c| format!("{} generators", c.len())),
    ];
    let errors: Vec<RestrictionError> = [
        phi.as_ref().err(),
        coweight.as_ref().err(),
        facet.as_ref().err(),
        chamber.as_ref().err(),
    ]
    .into_iter()
    .flatten()
    .cloned()
    .collect();
    let compact_sigma = d
        .compact_split()
        .map(|s| s.sigma0.iter().map(|&i| d.names()[i].clone()).collect())
        .unwrap_or_default();
    let zk = valuation_cone(&rd);
    let positive = rd.phi.len() / 2;
    report.analysis = Some(AnalysisReport {
        mode: if d.is_ambient() { "ambient" } else { "abstract" }.into(),
        compact_sigma,
        rank: rd.rank(),
        xi_basis: rd.xi_basis.iter().map(|b| vq(b)).collect(),
        sigma: sigma_reports(&rd),
        phi_type: type_name(&rd.types),
        weyl_order: rd.weyl_order.to_string(),
        phi_positive: rd.phi[..positive].iter().map(|r| vi(r)).collect(),
        phi_res_positive: phi
            .as_ref()
            .map(|p| {
                p.positive()
                    .iter()
                    .map(|(c, m)| RootWithMultiplicity { coords: vi(c), multiplicity: *m })
                    .collect()
            })
            .unwrap_or_default(),
        coweights: rd.coweights.iter().map(|w| vq(w)).collect(),
        valuation_cone: ConeReport {
            inequalities: zk.inequalities.iter().map(|v| vi(v)).collect(),
            rays: zk.rays.iter().map(|v| vi(v)).collect(),
            lineality: zk.lineality.iter().map(|v| vi(v)).collect(),
        },
        predicates: rd.predicates(),
        checks,
    });
    if let Some(e) = errors.first() {
        return report.fail(restriction_status(e), e);
    }
    report
}

fn tits_status(e: &TitsError) -> Status {
    match e {
        TitsError::DependentRestriction | TitsError::MixedSigns => Status::TheoremViolation,
        _ => Status::ValidationFailed,
    }
}

pub fn restrict_index(input: &Input, opts: Options) -> Report {
    let report = Report::new("restrict-index", &input.name);
    let text = match input.text.clone() {
        Ok(t) => t,
        Err(e) => return report.fail(Status::ParseError, e),
    };
    let ix = match DatumFile::parse(&text).and_then(|f| f.to_index()) {
        Ok(ix) => ix,
        Err(e) => return report.fail(Status::ParseError, e),
    };
    let ix = match opts.cap {
        Some(c) => ix.with_budget(c),
        None => ix,
    };
    let mut report = report;
    report.violations = ix.validate();
    if has_errors(&report.violations) {
        return report.fail(Status::ValidationFailed, "index failed validation");
    }
    let sys = match ix.restricted_root_system() {
        Ok(s) => s,
        Err(e) => return report.fail(tits_status(&e), e),
    };
    let amb = ix.ambient();
    let ambient_type = amb
        .components()
        .iter()
        .map(|c| format!("{}{}", c.family.letter(), c.rank))
        .collect::<Vec<_>>()
        .join("x");
    let positive = sys.roots.len() / 2;
    report.index = Some(IndexReport {
        ambient_type,
        compact: ix.compact().iter().map(|&i| amb.root_name(i)).collect(),
        k_rank: ix.k_rank(),
        restricted_simple: sys
            .simple
            .roots
            .iter()
            .zip(&sys.simple.fibers)
            .enumerate()
            .map(|(i, (v, f))| SimpleRestriction {
                name: format!("b{}", i + 1),
                fiber: f.iter().map(|&j| amb.root_name(j)).collect(),
                vector: vq(v),
            })
            .collect(),
        restricted_type: restricted_type_name(&sys),
        reduced: sys.reduced,
        indivisible_type: if sys.reduced {
            type_name(&sys.simple.types)
        } else {
            type_name(&sys.indivisible_types)
        },
        positive_roots: sys.roots[..positive]
            .iter()
            .map(|r| RootWithMultiplicity { coords: vi64(&r.coords), multiplicity: r.multiplicity })
            .collect(),
    });
    report
}

/// Type of the restricted system, writing `BC_n` for a non-reduced
/// component of type `B_n` or `C_n`.
fn restricted_type_name(sys: &crate::tits::RestrictedRootSystem) -> String {
    if sys.reduced {
        return type_name(&sys.simple.types);
    }
    let indiv = sys.indivisible();
    let all: Vec<&Vec<i64>> = sys.roots.iter().map(|r| &r.coords).collect();
    let parts: Vec<String> = sys
        .simple
        .types
        .iter()
        .map(|t| {
            let doubled = indiv.iter().any(|r| {
                let twice: Vec<i64> = r.coords.iter().map(|x| 2 * x).collect();
                t.order.iter().any(|&i| r.coords[i] != 0) && all.contains(&&twice)
            });
            if doubled {
                format!("BC{}", t.rank)
            } else {
                t.to_string()
            }
        })
        .collect();
    parts.join("x")
}

fn fan_report(f: &Fan) -> FanReport {
    let max = f.maximal_cones();
    FanReport {
        dim: f.dim(),
        cone_count: f.cones().len(),
        maximal_cones: max.iter().map(|c| c.generators().iter().map(|g| vi(g)).collect()).collect(),
        support: None,
        complete: None,
        smooth: None,
        strata: None,
        strata_edges: None,
    }
}

fn smooth_maximal(f: &Fan, lat: &IntLattice) -> Vec<bool> {
    let all = is_smooth(f, lat);
    f.maximal_cones().iter().map(|c| all[f.index_of(c).expect("own cone")]).collect()
}

fn strata_report(p: &StrataPoset, rd: &RestrictedDatum) -> (Vec<StratumReport>, Vec<(usize, usize)>) {
    let nodes = p
        .nodes
        .iter()
        .map(|n| StratumReport {
            cone: n.cone.generators().iter().map(|g| vi(g)).collect(),
            codim: n.codim,
            rank: n.rank,
            lattice: n.lattice.iter().map(|v| vi(v)).collect(),
            sigma: sigma_names(rd, &n.sigma),
            horospherical: n.horospherical,
            j_label: n.j_label.as_ref().map(|j| sigma_names(rd, j)),
        })
        .collect();
    (nodes, p.edges.clone())
}

fn fan_error_status(e: &FanError) -> Status {
    match e {
        FanError::Dimension { .. } => Status::ParseError,
        _ => Status::ValidationFailed,
    }
}

pub fn fan(input: &Input, fan_input: &Input, checks: &[FanCheck], with_strata: bool, opts: Options) -> Report {
    let (mut report, _, _, rd) = match load_restricted("fan", input, opts) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let text = match fan_input.text.clone() {
        Ok(t) => t,
        Err(e) => return report.fail(Status::ParseError, e),
    };
    let f = match FanFile::parse(&text) {
        Ok(f) => f,
        Err(e) => return report.fail(Status::ParseError, format!("fan file: {e}")),
    };
    let f = match Fan::from_generators(rd.rank(), &f.cones) {
        Ok(f) => f,
        Err(e) => return report.fail(fan_error_status(&e), e),
    };
    let zk = valuation_cone(&rd);
    let violations = fan_validate(&f, &zk);
    let support_ok = !violations.iter().any(|v| v.check == "fan-support");
    let valid = !has_errors(&violations);
    report.violations.extend(violations);
    let checks: Vec<FanCheck> =
        if checks.is_empty() { vec![FanCheck::Support, FanCheck::Complete, FanCheck::Smooth] } else { checks.to_vec() };
    let mut fr = fan_report(&f);
    for c in checks {
        match c {
            FanCheck::Support => fr.support = Some(support_ok),
            FanCheck::Complete if valid => fr.complete = is_complete_for(&f, &zk).ok(),
            FanCheck::Complete => {}
            FanCheck::Smooth => fr.smooth = Some(smooth_maximal(&f, &rd.lattice())),
        }
    }
    if with_strata && valid {
        let (nodes, edges) = strata_report(&strata(&f, &rd), &rd);
        fr.strata = Some(nodes);
        fr.strata_edges = Some(edges);
    }
    report.fan = Some(fr);
    if !valid {
        return report.fail(Status::ValidationFailed, "fan failed validation");
    }
    report
}

pub fn standard(input: &Input, opts: Options) -> Report {
    let (mut report, _, _, rd) = match load_restricted("standard-fan", input, opts) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let f = match standard_fan(&rd) {
        Ok(f) => f,
        Err(e) => return report.fail(Status::ValidationFailed, e),
    };
    let zk = valuation_cone(&rd);
    let mut fr = fan_report(&f);
    fr.support = Some(!fan_validate(&f, &zk).iter().any(|v| v.check == "fan-support"));
    fr.complete = is_complete_for(&f, &zk).ok();
    fr.smooth = Some(smooth_maximal(&f, &rd.lattice()));
    let (nodes, edges) = strata_report(&strata(&f, &rd), &rd);
    fr.strata = Some(nodes);
    fr.strata_edges = Some(edges);
    report.fan = Some(fr);
    report
}

pub fn localize_cmd(input: &Input, roots: &[String], opts: Options) -> Report {
    let (mut report, _, _, rd) = match load_restricted("localize", input, opts) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let mut j = Vec::new();
    for name in roots {
        match rd.root_index(name) {
            Some(i) => j.push(i),
            None => return report.fail(Status::ParseError, format!("unknown spherical root {name:?}")),
        }
    }
    let loc = match localize(&rd, &j) {
        Ok(l) => l,
        Err(e) => return report.fail(restriction_status(&e), e),
    };
    report.localization = Some(LocalizationReport {
        kept: sigma_names(&rd, &loc.kept),
        face: sigma_names(&rd, &loc.face),
        k_side: names(&rd, &loc.k_side),
        embedding: loc.embedding.iter().map(|v| vi(v)).collect(),
        sigma: sigma_reports(&loc.datum),
        phi_type: type_name(&loc.datum.types),
        predicates: loc.datum.predicates(),
    });
    report
}

fn degeneration_status(e: &DegenerationError) -> Status {
    match e {
        DegenerationError::NotAFace => Status::ValidationFailed,
        _ => Status::TheoremViolation,
    }
}

pub fn degenerate(input: &Input, opts: Options) -> Report {
    let (mut report, file, _, rd) = match load_restricted("degenerate", input, opts) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let gamma = match file.gamma(rd.rank()) {
        Ok(g) => g,
        Err(e) => return report.fail(Status::ParseError, e),
    };
    let (gamma_basis, sigma_aut, multipliers) = if rd.sigma.is_empty() {
        (Vec::new(), Vec::new(), Vec::new())
    } else {
        match aut_roots(&rd, gamma.as_ref()) {
            Ok(a) => (a.gamma.basis_rows(), a.roots, a.multipliers),
            Err(e) => return report.fail(restriction_status(&e), e),
        }
    };
    let xi = rd.lattice();
    let dd = match build_degeneration(&xi, &sigma_aut) {
        Ok(dd) => dd,
        Err(e) => return report.fail(degeneration_status(&e), e),
    };
    let mut faces = Vec::new();
    for idx in dd.faces() {
        let fd = match dd.face_cone(&idx).and_then(|c| degeneration_fiber_data(&dd, &c)) {
            Ok(fd) => fd,
            Err(e) => return report.fail(degeneration_status(&e), e),
        };
        faces.push(FiberReport {
            face: sigma_names(&rd, &fd.face),
            sigma_fiber: sigma_names(&rd, &fd.sigma_fiber),
            k_form: fd.k_form,
            horospherical: fd.horospherical,
            torus_dim: fd.torus_dim,
        });
    }
    let product = IntLattice::standard(2 * rd.rank());
    let index = dd.xi_z.index_in(&product).map(|i| Rational(Q::from_integer(i)));
    let exact = dd.exactness.holds();
    report.degeneration = Some(DegenerationReport {
        gamma: gamma_basis.iter().map(|v| vi(v)).collect(),
        sigma_aut: sigma_aut.iter().map(|v| vi(v)).collect(),
        multipliers: multipliers.iter().map(|m| Rational(Q::from_integer(m.clone()))).collect(),
        xi_z: dd.xi_z.basis_rows().iter().map(|v| vi(v)).collect(),
        xi_z_index: index,
        exact,
        bd_in_valuation_cone: dd.bd_in_valuation_cone,
        bd_rays: dd.bd_rays.iter().map(|v| vi(v)).collect(),
        faces,
    });
    if !exact || !dd.bd_in_valuation_cone {
        return report.fail(Status::TheoremViolation, "degeneration sequence is not exact");
    }
    report
}
