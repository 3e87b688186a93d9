//! Structured command output with JSON and text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::io::Rational;
use crate::linalg::{fmt_q, Int, Q};
use crate::restriction::Predicates;
use crate::validation::Violation;

pub type Vector = Vec<Rational>;

pub fn vq(v: &[Q]) -> Vector {
    v.iter().cloned().map(Rational).collect()
}

pub fn vi(v: &[Int]) -> Vector {
    v.iter().map(|x| Rational(Q::from_integer(x.clone()))).collect()
}

pub fn vi64(v: &[i64]) -> Vector {
    v.iter().map(|&x| Rational(Q::from_integer(x.into()))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationFailed,
    ParseError,
    TheoremViolation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailed => 1,
            Status::ParseError => 2,
            Status::TheoremViolation => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub file: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<IndexReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localization: Option<LocalizationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneration: Option<DegenerationReport>,
}

impl Report {
    pub fn new(command: &str, file: &str) -> Self {
        Self {
            command: command.into(),
            file: file.into(),
            status: Status::Ok,
            error: None,
            violations: Vec::new(),
            index: None,
            analysis: None,
            fan: None,
            localization: None,
            degeneration: None,
        }
    }

    pub fn fail(mut self, status: Status, error: impl ToString) -> Self {
        self.status = status;
        self.error = Some(error.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleRestriction {
    pub name: String,
    pub fiber: Vec<String>,
    /// Projection in simple-root coordinates.
    pub vector: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootWithMultiplicity {
    pub coords: Vector,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub ambient_type: String,
    pub compact: Vec<String>,
    pub k_rank: usize,
    pub restricted_simple: Vec<SimpleRestriction>,
    pub restricted_type: String,
    pub reduced: bool,
    pub indivisible_type: String,
    /// Positive restricted roots in the restricted simple roots.
    pub positive_roots: Vec<RootWithMultiplicity>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub name: String,
    pub fiber: Vec<String>,
    /// Coordinates in the basis of `Ξ_k`.
    pub coords: Vector,
    pub primitive: Vector,
    pub multiplier: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    /// Inequalities `σ ≤ 0`, in `Ξ_k` coordinates.
    pub inequalities: Vec<Vector>,
    /// Generators `−ω^∨_σ`, primitive, in `N_k` coordinates.
    pub rays: Vec<Vector>,
    pub lineality: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub mode: String,
    pub compact_sigma: Vec<String>,
    pub rank: usize,
    /// Basis of `Ξ_k` in source coordinates.
    pub xi_basis: Vec<Vector>,
    pub sigma: Vec<SigmaReport>,
    pub phi_type: String,
    pub weyl_order: String,
    /// Positive roots of `Φ_k` in `Ξ_k` coordinates.
    pub phi_positive: Vec<Vector>,
    /// Positive part of the restricted `Φ_K`, with multiplicities.
    pub phi_res_positive: Vec<RootWithMultiplicity>,
    /// `ω^∨` for each element of `Σ_k`, in `N_k` coordinates.
    pub coweights: Vec<Vector>,
    pub valuation_cone: ConeReport,
    pub predicates: Predicates,
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub cone: Vec<Vector>,
    pub codim: usize,
    pub rank: usize,
    pub lattice: Vec<Vector>,
    pub sigma: Vec<String>,
    pub horospherical: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_label: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    pub dim: usize,
    pub cone_count: usize,
    pub maximal_cones: Vec<Vec<Vector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    /// Smoothness of each maximal cone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth: Option<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Vec<StratumReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata_edges: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub kept: Vec<String>,
    pub face: Vec<String>,
    pub k_side: Vec<String>,
    /// Basis of the new lattice in the parent's `Ξ_k` coordinates.
    pub embedding: Vec<Vector>,
    pub sigma: Vec<SigmaReport>,
    pub phi_type: String,
    pub predicates: Predicates,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub face: Vec<String>,
    pub sigma_fiber: Vec<String>,
    pub k_form: bool,
    pub horospherical: bool,
    pub torus_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub gamma: Vec<Vector>,
    pub sigma_aut: Vec<Vector>,
    pub multipliers: Vector,
    pub xi_z: Vec<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_z_index: Option<Rational>,
    pub exact: bool,
    pub bd_in_valuation_cone: bool,
    pub bd_rays: Vec<Vector>,
    pub faces: Vec<FiberReport>,
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_q(&x.0)).collect();
    format!("({})", parts.join(", "))
}

fn fmt_beta(v: &[Rational]) -> String {
    let mut terms = Vec::new();
    for (i, c) in v.iter().enumerate() {
        let c = &c.0;
        if *c == Q::from_integer(0.into()) {
            continue;
        }
        let b = format!("b{}", i + 1);
        if *c == Q::from_integer(1.into()) {
            terms.push(b);
        } else {
            terms.push(format!("{}{b}", fmt_q(c)));
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn list(v: &[String]) -> String {
    if v.is_empty() {
        "{}".into()
    } else {
        format!("{{{}}}", v.join(", "))
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn sigma_lines(out: &mut String, sigma: &[SigmaReport]) {
    for s in sigma {
        let _ = write!(out, "  {} = {}", s.name, fmt_vec(&s.coords));
        if let Some(b) = &s.beta {
            let _ = write!(out, " = {}", fmt_beta(b));
        }
        let _ = writeln!(out, "  [n = {}, fiber {}]", fmt_q(&s.multiplier.0), list(&s.fiber));
    }
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let status = match self.status {
            Status::Ok => "ok",
            Status::ValidationFailed => "validation failed",
            Status::ParseError => "parse error",
            Status::TheoremViolation => "theorem violation",
        };
        let _ = writeln!(o, "{} {}: {status}", self.command, self.file);
        if let Some(e) = &self.error {
            let _ = writeln!(o, "error: {e}");
        }
        for v in &self.violations {
            let _ = writeln!(o, "{v}");
        }
        if let Some(ix) = &self.index {
            let _ = writeln!(o, "ambient type: {}", ix.ambient_type);
            let _ = writeln!(o, "compact roots: {}", list(&ix.compact));
            let _ = writeln!(o, "k-rank: {}", ix.k_rank);
            for s in &ix.restricted_simple {
                let _ = writeln!(o, "  {} <- {}", s.name, list(&s.fiber));
            }
            let _ = writeln!(o, "restricted type: {} ({})", ix.restricted_type, if ix.reduced { "reduced" } else { "non-reduced" });
            let _ = writeln!(o, "indivisible type: {}", ix.indivisible_type);
            let _ = writeln!(o, "positive restricted roots: {}", ix.positive_roots.len());
            for r in &ix.positive_roots {
                let _ = writeln!(o, "  {}  x{}", fmt_beta(&r.coords), r.multiplicity);
            }
        }
        if let Some(a) = &self.analysis {
            let _ = writeln!(o, "mode: {}", a.mode);
            let _ = writeln!(o, "compact spherical roots: {}", list(&a.compact_sigma));
            let _ = writeln!(o, "rank of the lattice: {}", a.rank);
            let _ = writeln!(o, "restricted spherical roots:");
            sigma_lines(&mut o, &a.sigma);
            let _ = writeln!(o, "little root system: {} (|W| = {})", a.phi_type, a.weyl_order);
            let roots: Vec<String> = a.phi_positive.iter().map(|r| fmt_vec(r)).collect();
            let _ = writeln!(o, "  positive roots: {}", list(&roots));
            let res: Vec<String> =
                a.phi_res_positive.iter().map(|r| format!("{} x{}", fmt_vec(&r.coords), r.multiplicity)).collect();
            let _ = writeln!(o, "  restricted positive roots: {}", list(&res));
            let _ = writeln!(o, "valuation cone:");
            for (s, r) in a.sigma.iter().zip(&a.valuation_cone.rays) {
                let _ = writeln!(o, "  {} <= 0, ray {}", s.name, fmt_vec(r));
            }
            for l in &a.valuation_cone.lineality {
                let _ = writeln!(o, "  lineality {}", fmt_vec(l));
            }
            let p = &a.predicates;
            let _ = writeln!(
                o,
                "convex: {}  wonderful: {}  horospherical: {}  rank0: {}  satake-open: {}",
                yes(p.k_convex),
                yes(p.k_wonderful),
                yes(p.k_horospherical),
                yes(p.rank0),
                yes(p.satake_open_embedding)
            );
            for c in &a.checks {
                let _ = write!(o, "check {}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
                if !c.detail.is_empty() {
                    let _ = write!(o, " ({})", c.detail);
                }
                o.push('\n');
            }
        }
        if let Some(f) = &self.fan {
            let _ = writeln!(o, "fan: {} cones, {} maximal", f.cone_count, f.maximal_cones.len());
            for (i, c) in f.maximal_cones.iter().enumerate() {
                let gens: Vec<String> = c.iter().map(|g| fmt_vec(g)).collect();
                let _ = write!(o, "  cone {}", list(&gens));
                if let Some(s) = &f.smooth {
                    let _ = write!(o, "  smooth: {}", yes(s[i]));
                }
                o.push('\n');
            }
            if let Some(s) = f.support {
                let _ = writeln!(o, "support: {}", yes(s));
            }
            if let Some(c) = f.complete {
                let _ = writeln!(o, "complete: {}", yes(c));
            }
            if let Some(strata) = &f.strata {
                let _ = writeln!(o, "strata: {}", strata.len());
                for (i, s) in strata.iter().enumerate() {
                    let gens: Vec<String> = s.cone.iter().map(|g| fmt_vec(g)).collect();
                    let _ = write!(
                        o,
                        "  [{i}] cone {} codim {} rank {} sigma {}",
                        list(&gens),
                        s.codim,
                        s.rank,
                        list(&s.sigma)
                    );
                    if s.horospherical {
                        o.push_str(" horospherical");
                    }
                    if let Some(j) = &s.j_label {
                        let _ = write!(o, " J = {}", list(j));
                    }
                    o.push('\n');
                }
                if let Some(edges) = &f.strata_edges {
                    let e: Vec<String> = edges.iter().map(|(a, b)| format!("{a}<{b}")).collect();
                    let _ = writeln!(o, "  closure edges: {}", e.join(" "));
                }
            }
        }
        if let Some(l) = &self.localization {
            let _ = writeln!(o, "localization at {}", list(&l.kept));
            let _ = writeln!(o, "face: {}", list(&l.face));
            let _ = writeln!(o, "K-side roots: {}", list(&l.k_side));
            let emb: Vec<String> = l.embedding.iter().map(|r| fmt_vec(r)).collect();
            let _ = writeln!(o, "lattice basis: {}", list(&emb));
            sigma_lines(&mut o, &l.sigma);
            let _ = writeln!(o, "little root system: {}", l.phi_type);
            let _ = writeln!(o, "wonderful: {}", yes(l.predicates.k_wonderful));
        }
        if let Some(d) = &self.degeneration {
            let g: Vec<String> = d.gamma.iter().map(|r| fmt_vec(r)).collect();
            let _ = writeln!(o, "gamma basis: {}", list(&g));
            let s: Vec<String> = d.sigma_aut.iter().map(|r| fmt_vec(r)).collect();
            let _ = writeln!(o, "automorphic roots: {}  multipliers {}", list(&s), fmt_vec(&d.multipliers));
            let z: Vec<String> = d.xi_z.iter().map(|r| fmt_vec(r)).collect();
            let _ = writeln!(o, "lattice of Z: {}", list(&z));
            if let Some(i) = &d.xi_z_index {
                let _ = writeln!(o, "  index in the product: {}", fmt_q(&i.0));
            }
            let _ = writeln!(o, "exact sequence: {}", yes(d.exact));
            let _ = writeln!(o, "boundary cone inside the valuation cone: {}", yes(d.bd_in_valuation_cone));
            for f in &d.faces {
                let _ = write!(o, "  face {} -> fiber roots {} torus dim {}", list(&f.face), list(&f.sigma_fiber), f.torus_dim);
                if f.k_form {
                    o.push_str(" k-form");
                }
                if f.horospherical {
                    o.push_str(" horospherical");
                }
                o.push('\n');
            }
        }
        o
    }
}
