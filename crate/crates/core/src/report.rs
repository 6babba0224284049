//! Problem parsing, pipeline orchestration and report emission.
//!
//! One canonical JSON document format serves both input and output;
//! rationals travel as strings so exactness survives serialization.

use serde::{Deserialize, Serialize};

use crate::construct::{build_kbar, KbarResult};
use crate::diffop::{AiryVacuum, DiffOp};
use crate::divisor::{Cusp, CuspDivisor};
use crate::error::Error;
use crate::involution::{
    eigenfunction_symmetry_check, verify_involution, IdentityCheck, InvolutionReport,
    InvolutionStatus,
};
use crate::poly::Poly;
use crate::rational::{format_rational, parse_rational};
use crate::series::kbar_series_oracle;
use crate::stabilizer::{
    build_ring_from, stabilizer_closed, stabilizer_generic, truerank_witness, BispectralRing,
    StabilizerBasis,
};
use crate::weyl::WeylOp;

/// One cusp as it appears on the wire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspSpec {
    pub lambda: String,
    pub gamma: String,
}

/// Input document: the vacuum, the divisor and optional tuning knobs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub r: u32,
    #[serde(default)]
    pub a: Vec<String>,
    pub cusps: Vec<CuspSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_truncation: Option<usize>,
}

/// Validated problem with defaults resolved.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub vacuum: AiryVacuum,
    pub divisor: CuspDivisor,
    pub degree_bound: usize,
    pub series_truncation: usize,
}

/// Parses and validates the canonical input document.
pub fn parse_problem(text: &str) -> Result<Problem, Error> {
    let spec: ProblemSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    resolve_problem(spec)
}

/// Validates a spec: exact rationals, r ≥ 2, a-length, distinct supports.
pub fn resolve_problem(spec: ProblemSpec) -> Result<Problem, Error> {
    let constants = spec
        .a
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()?;
    let vacuum = AiryVacuum::new(spec.r, constants)?;
    let mut cusps = Vec::with_capacity(spec.cusps.len());
    for c in &spec.cusps {
        cusps.push(Cusp {
            lambda: parse_rational(&c.lambda)?,
            gamma: parse_rational(&c.gamma)?,
        });
    }
    let divisor = CuspDivisor::new(cusps)?;
    let n = divisor.len();
    let degree_bound = spec.degree_bound.unwrap_or(2 * n + 2);
    let series_truncation = spec
        .series_truncation
        .unwrap_or(spec.r as usize * n + 10);
    Ok(Problem {
        spec,
        vacuum,
        divisor,
        degree_bound,
        series_truncation,
    })
}

/// Pipeline stages, cumulative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Construct,
    Ring,
    Involute,
    VerifyAll,
}

// --- wire form of the algebraic objects ---

fn poly_doc(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

fn poly_from_doc(doc: &[String]) -> Result<Poly, Error> {
    Ok(Poly::new(
        doc.iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?,
    ))
}

/// One operator coefficient: {power, numerator, denominator} arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffDoc {
    pub power: usize,
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
}

pub fn operator_doc(op: &DiffOp) -> Vec<CoeffDoc> {
    op.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(power, c)| CoeffDoc {
            power,
            numerator: poly_doc(c.numerator()),
            denominator: poly_doc(c.denominator()),
        })
        .collect()
}

pub fn operator_from_doc(doc: &[CoeffDoc]) -> Result<DiffOp, Error> {
    let top = doc.iter().map(|c| c.power).max().map_or(0, |p| p + 1);
    let mut coeffs = vec![crate::ratfunc::RatFunc::zero(); top];
    for c in doc {
        coeffs[c.power] = crate::ratfunc::RatFunc::new(
            poly_from_doc(&c.numerator)?,
            poly_from_doc(&c.denominator)?,
        );
    }
    Ok(DiffOp::new(coeffs))
}

/// One Weyl-algebra term: {i, j, coeff}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylTermDoc {
    pub i: u32,
    pub j: u32,
    pub coeff: String,
}

pub fn weyl_doc(w: &WeylOp) -> Vec<WeylTermDoc> {
    w.terms()
        .map(|(&(i, j), c)| WeylTermDoc {
            i,
            j,
            coeff: format_rational(c),
        })
        .collect()
}

pub fn weyl_from_doc(doc: &[WeylTermDoc]) -> Result<WeylOp, Error> {
    let mut w = WeylOp::zero();
    for t in doc {
        w.add_term(t.i, t.j, parse_rational(&t.coeff)?);
    }
    Ok(w)
}

/// One raw determinant term: exponents of x, z, ξ and the coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriTermDoc {
    pub x: u32,
    pub z: u32,
    pub xi: u32,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KbarDoc {
    pub kbar: Vec<CoeffDoc>,
    pub flat_kbar: Vec<CoeffDoc>,
    pub tau: Vec<String>,
    pub q: Vec<String>,
    pub sign: i8,
    pub scale: String,
    pub determinant: Vec<TriTermDoc>,
}

fn kbar_doc(result: &KbarResult) -> KbarDoc {
    KbarDoc {
        kbar: operator_doc(&result.kbar),
        flat_kbar: operator_doc(&result.flat_kbar),
        tau: poly_doc(&result.tau),
        q: poly_doc(&result.q),
        sign: result.sign,
        scale: format_rational(&result.scale),
        determinant: result
            .tripoly
            .terms()
            .map(|(&(x, z, xi), c)| TriTermDoc {
                x,
                z,
                xi,
                coeff: format_rational(c),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerDoc {
    pub degree_bound: usize,
    pub basis: Vec<Vec<String>>,
}

fn stabilizer_doc(s: &StabilizerBasis) -> StabilizerDoc {
    StabilizerDoc {
        degree_bound: s.degree_bound,
        basis: s.basis.iter().map(poly_doc).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub p: Vec<String>,
    pub order: usize,
    pub op: Vec<CoeffDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDoc {
    pub generators: Vec<GeneratorDoc>,
    pub rank: Option<usize>,
    pub commutators_vanish: bool,
}

fn ring_doc(ring: &BispectralRing) -> RingDoc {
    RingDoc {
        generators: ring
            .generators
            .iter()
            .map(|g| GeneratorDoc {
                p: poly_doc(&g.p),
                order: g.op.order().unwrap_or(0),
                op: operator_doc(&g.op),
            })
            .collect(),
        rank: ring.rank(),
        commutators_vanish: ring.commutators_vanish(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionDoc {
    pub status: String,
    pub target: Option<Vec<CuspSpec>>,
    pub tau: Vec<String>,
    pub q: Vec<String>,
}

fn involution_doc(report: &InvolutionReport) -> InvolutionDoc {
    InvolutionDoc {
        status: match report.status {
            InvolutionStatus::Verified => "verified".to_string(),
            InvolutionStatus::IrrationalRoots => "irrational-roots".to_string(),
            InvolutionStatus::NotSquarefree => "not-squarefree".to_string(),
        },
        target: report.target.as_ref().map(|t| {
            t.cusps()
                .iter()
                .map(|c| CuspSpec {
                    lambda: format_rational(&c.lambda),
                    gamma: format_rational(&c.gamma),
                })
                .collect()
        }),
        tau: poly_doc(&report.tau),
        q: poly_doc(&report.q),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub residual: String,
}

impl From<IdentityCheck> for CheckDoc {
    fn from(c: IdentityCheck) -> Self {
        CheckDoc {
            name: c.name,
            pass: c.pass,
            residual: c.residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageErrorDoc {
    pub stage: String,
    pub message: String,
}

/// The full pipeline output document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: ProblemSpec,
    pub n: usize,
    pub operator_order: usize,
    pub degree_bound: usize,
    pub series_truncation: usize,
    pub kbar: Option<KbarDoc>,
    pub stabilizer: Option<StabilizerDoc>,
    pub ring: Option<RingDoc>,
    pub involution: Option<InvolutionDoc>,
    pub checks: Vec<CheckDoc>,
    pub errors: Vec<StageErrorDoc>,
}

impl RunReport {
    /// True when no stage failed and every recorded check passed.
    pub fn all_pass(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

fn op_check(name: &str, lhs: &DiffOp, rhs: &DiffOp) -> CheckDoc {
    let diff = lhs - rhs;
    CheckDoc {
        name: name.to_string(),
        pass: diff.is_zero(),
        residual: if diff.is_zero() {
            String::new()
        } else {
            diff.to_string()
        },
    }
}

fn bool_check(name: &str, pass: bool, detail: String) -> CheckDoc {
    CheckDoc {
        name: name.to_string(),
        pass,
        residual: if pass { String::new() } else { detail },
    }
}

/// Runs the requested stages, collecting per-stage errors without
/// aborting later independent stages.
pub fn run_pipeline(problem: &Problem, mode: Mode) -> RunReport {
    let n = problem.divisor.len();
    let big_n = problem.divisor.operator_order(problem.vacuum.order());
    let mut report = RunReport {
        problem: problem.spec.clone(),
        n,
        operator_order: big_n,
        degree_bound: problem.degree_bound,
        series_truncation: problem.series_truncation,
        kbar: None,
        stabilizer: None,
        ring: None,
        involution: None,
        checks: Vec::new(),
        errors: Vec::new(),
    };

    let result = match build_kbar(&problem.vacuum, &problem.divisor) {
        Ok(r) => r,
        Err(e) => {
            report.errors.push(StageErrorDoc {
                stage: "construct".to_string(),
                message: e.to_string(),
            });
            return report;
        }
    };
    report.kbar = Some(kbar_doc(&result));

    if matches!(mode, Mode::Ring | Mode::VerifyAll) {
        let stab = stabilizer_closed(&problem.divisor, problem.degree_bound);
        report.stabilizer = Some(stabilizer_doc(&stab));
        match build_ring_from(&problem.vacuum, &problem.divisor, &result, problem.degree_bound)
        {
            Ok(ring) => report.ring = Some(ring_doc(&ring)),
            Err(e) => report.errors.push(StageErrorDoc {
                stage: "ring".to_string(),
                message: e.to_string(),
            }),
        }
    }

    if matches!(mode, Mode::Involute | Mode::VerifyAll) {
        match verify_involution(&problem.vacuum, &problem.divisor) {
            Ok(inv) => {
                report
                    .checks
                    .extend(inv.checks.iter().cloned().map(CheckDoc::from));
                report.involution = Some(involution_doc(&inv));
            }
            Err(e) => report.errors.push(StageErrorDoc {
                stage: "involute".to_string(),
                message: e.to_string(),
            }),
        }
    }

    if mode == Mode::VerifyAll {
        verify_all_checks(problem, &result, &mut report);
    }
    report
}

/// The per-instance invariant suite behind the verify-all mode.
fn verify_all_checks(problem: &Problem, result: &KbarResult, report: &mut RunReport) {
    let l0 = &problem.vacuum;
    let divisor = &problem.divisor;
    let n = divisor.len();
    let big_n = divisor.operator_order(l0.order());

    // structure of K̄
    report.checks.push(bool_check(
        "kbar has order r*n",
        result.kbar.order() == Some(big_n),
        format!("order {:?}", result.kbar.order()),
    ));
    report.checks.push(bool_check(
        "kbar has polynomial coefficients",
        result.kbar.has_polynomial_coeffs(),
        "rational-function coefficient".to_string(),
    ));
    report.checks.push(bool_check(
        "tau is monic of degree n",
        result.tau.is_monic() && result.tau.degree() == Some(n),
        format!("tau = {}", result.tau),
    ));
    let tau_from_op = result
        .kbar
        .poly_coeff(big_n)
        .unwrap_or_else(|_| Poly::zero());
    report.checks.push(bool_check(
        "tau equals the leading coefficient of kbar",
        tau_from_op == result.tau,
        format!("leading = {tau_from_op}"),
    ));
    if big_n > 0 {
        let sub = result
            .kbar
            .poly_coeff(big_n - 1)
            .unwrap_or_else(|_| Poly::zero());
        report.checks.push(bool_check(
            "subleading coefficient of kbar equals -tau'",
            sub == -&result.tau.derivative(),
            format!("subleading = {sub}"),
        ));
    }
    report.checks.push(bool_check(
        "flat(kbar) has order r*n",
        result.flat_kbar.order() == Some(big_n),
        format!("order {:?}", result.flat_kbar.order()),
    ));
    report.checks.push(bool_check(
        "determinant coefficients have x-degree at most n",
        result.tripoly.max_degrees().0 as usize <= n,
        format!("degrees {:?}", result.tripoly.max_degrees()),
    ));

    // dual routes for ♭
    match WeylOp::from_diffop(&result.kbar) {
        Ok(w) => report.checks.push(op_check(
            "flat via substitution equals flat via the Weyl algebra",
            &result.flat_kbar,
            &w.flat(l0).to_diffop(),
        )),
        Err(e) => report.errors.push(StageErrorDoc {
            stage: "verify-flat".to_string(),
            message: e.to_string(),
        }),
    }

    // series oracle
    match kbar_series_oracle(l0, divisor, problem.series_truncation) {
        Ok(oracle) => report_push_oracle(report, result, &oracle),
        Err(e) => report.errors.push(StageErrorDoc {
            stage: "verify-series".to_string(),
            message: e.to_string(),
        }),
    }

    // stabilizer agreement
    match stabilizer_generic(&result.kbar, &l0.operator(), problem.degree_bound) {
        Ok(generic) => {
            let closed = stabilizer_closed(divisor, problem.degree_bound);
            report.checks.push(bool_check(
                "generic stabilizer of kbar equals the closed form",
                generic.same_subspace(&closed),
                format!(
                    "generic dimension {}, closed dimension {}",
                    generic.dimension(),
                    closed.dimension()
                ),
            ));
        }
        Err(e) => report.errors.push(StageErrorDoc {
            stage: "verify-stabilizer".to_string(),
            message: e.to_string(),
        }),
    }

    // nontriviality of the flat stabilizer
    if problem.degree_bound >= 2 * n {
        match stabilizer_generic(&result.flat_kbar, &l0.operator(), problem.degree_bound) {
            Ok(flat_stab) => report.checks.push(bool_check(
                "stabilizer of flat(kbar) is nontrivial",
                flat_stab.dimension() >= 2,
                format!("dimension {}", flat_stab.dimension()),
            )),
            Err(e) => report.errors.push(StageErrorDoc {
                stage: "verify-flat-stabilizer".to_string(),
                message: e.to_string(),
            }),
        }
    }

    // ring laws
    if let Some(ring) = &report.ring {
        report.checks.push(bool_check(
            "ring generators commute exactly",
            ring.commutators_vanish,
            String::new(),
        ));
        let r = l0.order() as usize;
        if !ring.generators.is_empty() {
            report.checks.push(bool_check(
                "ring rank equals the vacuum order",
                ring.rank == Some(r),
                format!("rank {:?}", ring.rank),
            ));
        }
        let orders_ok = ring.generators.iter().all(|g| {
            poly_from_doc(&g.p)
                .ok()
                .and_then(|p| p.degree())
                .map(|d| g.order == r * d)
                .unwrap_or(false)
        });
        report.checks.push(bool_check(
            "generator orders equal r times the polynomial degree",
            orders_ok,
            String::new(),
        ));
        // intertwining for each generator
        let k = result.monic();
        for g in &ring.generators {
            let (Ok(p), Ok(op)) = (poly_from_doc(&g.p), operator_from_doc(&g.op)) else {
                continue;
            };
            let lhs = &op * &k;
            let rhs = &k * &DiffOp::eval_poly(&p, &l0.operator());
            report.checks.push(op_check(
                &format!("intertwining holds for the order-{} generator", g.order),
                &lhs,
                &rhs,
            ));
        }
    }

    // true-rank witness
    match truerank_witness(result, l0) {
        Ok(witness) => {
            let q2 = &result.q * &result.q;
            match crate::stabilizer::darboux_conjugate(&result.kbar, l0, &q2) {
                Ok(l_q2) => {
                    let k = result.monic();
                    report.checks.push(op_check(
                        "witness satisfies K*Q = L_{q^2}",
                        &(&k * &witness),
                        &l_q2,
                    ));
                }
                Err(e) => report.errors.push(StageErrorDoc {
                    stage: "verify-witness".to_string(),
                    message: e.to_string(),
                }),
            }
        }
        Err(e) => report.errors.push(StageErrorDoc {
            stage: "verify-witness".to_string(),
            message: e.to_string(),
        }),
    }

    // eigenfunction symmetry reduction
    match eigenfunction_symmetry_check(l0, divisor) {
        Ok(sym) => {
            if let Some(inv) = &report.involution {
                if inv.status == "verified" {
                    report.checks.push(bool_check(
                        "eigenfunction symmetry reduces to verified identities",
                        sym.symmetry_established,
                        String::new(),
                    ));
                }
            }
        }
        Err(e) => report.errors.push(StageErrorDoc {
            stage: "verify-symmetry".to_string(),
            message: e.to_string(),
        }),
    }
}

fn report_push_oracle(report: &mut RunReport, result: &KbarResult, oracle: &DiffOp) {
    report.checks.push(op_check(
        "determinant construction equals the series oracle",
        &result.kbar,
        oracle,
    ));
}

/// Output format of the emitted document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// Renders a report; the structured form is loss-free JSON.
pub fn emit_report(report: &RunReport, format: Format) -> String {
    match format {
        Format::Structured => {
            serde_json::to_string_pretty(report).expect("report serializes") + "\n"
        }
        Format::Text => render_text(report),
    }
}

/// Parses a structured report back; inverse of the structured emission.
pub fn parse_report(text: &str) -> Result<RunReport, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn render_operator(doc: &[CoeffDoc]) -> String {
    match operator_from_doc(doc) {
        Ok(op) => op.to_string(),
        Err(_) => "<unprintable>".to_string(),
    }
}

fn render_poly(doc: &[String], var: &str) -> String {
    match poly_from_doc(doc) {
        Ok(p) => p.to_string_in(var),
        Err(_) => "<unprintable>".to_string(),
    }
}

fn render_text(report: &RunReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        "vacuum order r = {}, cusps n = {}, operator order N = {}",
        report.problem.r, report.n, report.operator_order
    );
    if let Some(k) = &report.kbar {
        let _ = writeln!(w, "kbar      = {}", render_operator(&k.kbar));
        let _ = writeln!(w, "flat kbar = {}", render_operator(&k.flat_kbar));
        let _ = writeln!(w, "tau       = {}", render_poly(&k.tau, "x"));
        let _ = writeln!(w, "q         = {}", render_poly(&k.q, "z"));
    }
    if let Some(s) = &report.stabilizer {
        let basis: Vec<String> = s.basis.iter().map(|p| render_poly(p, "z")).collect();
        let _ = writeln!(
            w,
            "stabilizer (degree <= {}): {{{}}}",
            s.degree_bound,
            basis.join(", ")
        );
    }
    if let Some(ring) = &report.ring {
        for g in &ring.generators {
            let _ = writeln!(
                w,
                "generator p = {}: order {} operator {}",
                render_poly(&g.p, "z"),
                g.order,
                render_operator(&g.op)
            );
        }
        let _ = writeln!(
            w,
            "ring rank = {:?}, commutators vanish = {}",
            ring.rank, ring.commutators_vanish
        );
    }
    if let Some(inv) = &report.involution {
        let _ = writeln!(w, "involution status: {}", inv.status);
        if let Some(target) = &inv.target {
            let cusps: Vec<String> = target
                .iter()
                .map(|c| format!("({}, {})", c.lambda, c.gamma))
                .collect();
            let _ = writeln!(w, "image divisor: {{{}}}", cusps.join(", "));
        }
    }
    for c in &report.checks {
        let _ = writeln!(
            w,
            "[{}] {}{}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            if c.residual.is_empty() {
                String::new()
            } else {
                format!("  residual: {}", c.residual)
            }
        );
    }
    for e in &report.errors {
        let _ = writeln!(w, "[error] {}: {}", e.stage, e.message);
    }
    out
}
