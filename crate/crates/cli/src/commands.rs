use std::fmt::Write as _;

use clap::ValueEnum;
use emlattice::ehrhart::ehrhart_quasipoly;
use emlattice::euler_maclaurin::{em_sum, ContributionReport, Polynomial};
use emlattice::exactlin::ScalarProduct;
use emlattice::genfun::{brion_sum_i, brion_sum_s, i_cone, s_cone, SStrategy};
use emlattice::mu::mu_cone;
use emlattice::polycone::Polytope;
use emlattice::{QVector, Rational};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::input;
use crate::poly::parse_polynomial;
use crate::selftest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Count,
    Sum,
    Contributions,
    Mu,
    Ehrhart,
    Genfun,
    Selftest,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<String>,
    pub poly: Option<String>,
    pub order: Option<usize>,
    pub q: Option<String>,
    pub json: bool,
}

/// The result of one job in both output formats.
pub struct Report {
    pub text: String,
    pub json: Value,
    /// Exit status for a job that ran but found a failure (selftest).
    pub status: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, status: 0 }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).unwrap();
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn point(v: &QVector) -> String {
    let xs: Vec<String> = v.0.iter().map(Rational::to_string).collect();
    format!("({})", xs.join(","))
}

fn point_json(v: &QVector) -> Value {
    Value::Array(v.0.iter().map(|x| Value::String(x.to_string())).collect())
}

fn rationals_json(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn vertices_of(p: &Polytope, members: &[usize]) -> (String, Value) {
    let text: Vec<String> = members.iter().map(|&m| point(&p.vertices[m])).collect();
    let json: Vec<Value> = members.iter().map(|&m| point_json(&p.vertices[m])).collect();
    (text.join(" "), Value::Array(json))
}

fn required_input(job: &JobSpec) -> CliResult<Value> {
    let arg = job.input.as_deref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
    input::load_json(arg)
}

fn q_override(job: &JobSpec) -> CliResult<Option<ScalarProduct>> {
    job.q.as_deref().map(|f| input::load_json(f).and_then(|v| input::scalar_product(&v))).transpose()
}

fn load_polytope(job: &JobSpec) -> CliResult<Polytope> {
    let v = required_input(job)?;
    input::polytope(&v, q_override(job)?.as_ref())
}

fn polynomial(job: &JobSpec, dim: usize, required: bool) -> CliResult<Polynomial> {
    let h = match &job.poly {
        Some(s) => parse_polynomial(s, dim)?,
        None if required => return Err(CliError::Usage("--poly is required".into())),
        None => Polynomial::one(dim),
    };
    if let Some(m) = job.order {
        if m < h.degree() {
            return Err(CliError::Usage(format!("--order {m} is below the degree {} of the polynomial", h.degree())));
        }
    }
    Ok(h)
}

pub fn run(job: &JobSpec) -> CliResult<Report> {
    match job.command {
        Command::Count => count(job),
        Command::Sum => sum(job, false),
        Command::Contributions => sum(job, true),
        Command::Mu => mu(job),
        Command::Ehrhart => ehrhart(job),
        Command::Genfun => genfun(job),
        Command::Selftest => Ok(selftest::run()),
    }
}

fn count(job: &JobSpec) -> CliResult<Report> {
    let p = load_polytope(job)?;
    let r = em_sum(&p, &Polynomial::one(p.ambient_dim())).map_err(CliError::compute)?;
    if !r.total.is_integer() {
        return Err(CliError::Internal(format!("non-integral count {}", r.total)));
    }
    Ok(Report::ok(format!("{}\n", r.total), json!({ "count": r.total.to_string() })))
}

fn table(p: &Polytope, r: &ContributionReport, with_nu: bool) -> (String, Vec<Value>) {
    let mut text = String::new();
    let mut rows = Vec::new();
    for f in &r.faces {
        let (vt, vj) = vertices_of(p, &f.members);
        let mut row = json!({ "index": f.face, "dim": f.dim, "vertices": vj, "value": f.value.to_string() });
        if with_nu {
            row["nu"] = Value::String(f.nu.to_string());
            writeln!(text, "dim {}  {}  nu {}  value {}", f.dim, vt, f.nu, f.value).unwrap();
        } else {
            writeln!(text, "dim {}  {}  {}", f.dim, vt, f.value).unwrap();
        }
        rows.push(row);
    }
    (text, rows)
}

fn sum(job: &JobSpec, detailed: bool) -> CliResult<Report> {
    let p = load_polytope(job)?;
    let h = polynomial(job, p.ambient_dim(), !detailed)?;
    let r = em_sum(&p, &h).map_err(CliError::compute)?;
    let (rows, faces) = table(&p, &r, detailed);
    let text = if detailed { format!("{rows}total {}\n", r.total) } else { format!("{}\n{rows}", r.total) };
    Ok(Report::ok(text, json!({ "total": r.total.to_string(), "faces": faces })))
}

fn mu(job: &JobSpec) -> CliResult<Report> {
    let v = required_input(job)?;
    let c = input::cone(&v, q_override(job)?.as_ref())?;
    let order = job.order.unwrap_or(4);
    let s = mu_cone(&c, order).map_err(CliError::compute)?.series;
    let coeffs: Vec<Value> = s
        .sorted_terms()
        .iter()
        .map(|(a, x)| {
            let e: Vec<usize> = (0..s.nvars()).map(|i| a.get(i)).collect();
            json!({ "exponent": e, "value": x.to_string() })
        })
        .collect();
    Ok(Report::ok(format!("{s}\n"), json!({ "order": order, "series": s.to_string(), "coefficients": coeffs })))
}

fn residues_json(rs: &[Vec<Rational>]) -> Value {
    let m: serde_json::Map<String, Value> =
        rs.iter().enumerate().map(|(r, c)| (r.to_string(), rationals_json(c))).collect();
    Value::Object(m)
}

fn ehrhart(job: &JobSpec) -> CliResult<Report> {
    let p = load_polytope(job)?;
    let h = polynomial(job, p.ambient_dim(), false)?;
    let (qp, faces) = ehrhart_quasipoly(&p, &h).map_err(CliError::compute)?;
    let mut text = format!("period {}\ndegree {}\n", qp.period, qp.degree);
    for (r, c) in qp.residues.iter().enumerate() {
        let c: Vec<String> = c.iter().map(Rational::to_string).collect();
        writeln!(text, "t = {r} mod {}: {}", qp.period, c.join(", ")).unwrap();
    }
    let mut fj = Vec::new();
    for f in &faces {
        let (vt, vj) = vertices_of(&p, &f.members);
        writeln!(text, "face dim {}  {}  period {}", f.dim, vt, f.period).unwrap();
        fj.push(json!({
            "index": f.face,
            "dim": f.dim,
            "vertices": vj,
            "period": f.period,
            "residues": residues_json(&f.residues),
        }));
    }
    let json = json!({
        "period": qp.period,
        "degree": qp.degree,
        "residues": residues_json(&qp.residues),
        "faces": fj,
    });
    Ok(Report::ok(text, json))
}

fn genfun(job: &JobSpec) -> CliResult<Report> {
    let v = required_input(job)?;
    let q = q_override(job)?;
    let order = job.order.unwrap_or(4);
    let (s, i) = if input::is_cone(&v) {
        let c = input::cone(&v, q.as_ref())?;
        let s = s_cone(&c, order, SStrategy::Auto).map_err(CliError::compute)?;
        let i = i_cone(&c, order).map_err(CliError::compute)?;
        (s.to_string(), i.to_string())
    } else {
        let p = input::polytope(&v, q.as_ref())?;
        let s = brion_sum_s(&p, order, SStrategy::Auto).and_then(|g| g.to_analytic_order(order));
        let i = brion_sum_i(&p, order).and_then(|g| g.to_analytic_order(order));
        (s.map_err(CliError::compute)?.to_string(), i.map_err(CliError::compute)?.to_string())
    };
    Ok(Report::ok(format!("S = {s}\nI = {i}\n"), json!({ "order": order, "S": s, "I": i })))
}
