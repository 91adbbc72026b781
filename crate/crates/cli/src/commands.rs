use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use dlcusp::dlchar::{self, ClassTable};
use dlcusp::gf::TorusCharacter;
use dlcusp::groups::{Bounds, GroupKind, GroupSpec, Involution, Seed};
use dlcusp::multiplicity::{self, MultError, OrbitReport, TheoremRow, TheoremSetup};
use dlcusp::rootdata::{library, TwistedRootDatum};
use dlcusp::{suites, Exec};

use crate::report::{CsvTable, Report, RunConfig};
use crate::{
    bounds, parse_lambdas, validate_q, CliError, Command, DataArgs, ExportArgs, GroupArgs, LambdaFilter, OutputArgs,
    Suite, TorusGridArgs,
};

pub(crate) fn dispatch(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Verify(Suite::Sigma(a)) => sigma(a),
        Command::Verify(Suite::NoFixedRoot(a)) => no_fixed_root(a),
        Command::Verify(Suite::Epsilon(a)) => epsilon(a),
        Command::Verify(Suite::PhiTheta(a)) => phi_theta(a),
        Command::Verify(Suite::Theorem(a)) => theorem("verify theorem", &a.group, &a.lambda, &a.output),
        Command::Table(a) => theorem("table", &a.group, &a.lambda, &a.output),
        Command::ExportCharacter(a) => export_character(a),
    }
}

fn data_config(command: &str, a: &DataArgs, bounds: &Bounds) -> RunConfig {
    let mut c = RunConfig::new(command, &a.output, bounds);
    c.data = Some(a.data.clone());
    c.random = Some(a.random);
    c.seed = Some(a.seed);
    c
}

fn load_data(a: &DataArgs) -> Result<Vec<TwistedRootDatum>, CliError> {
    let mut data = if a.data == "all" { library::all() } else { vec![library::resolve(&a.data)?] };
    data.extend(suites::random_twists(a.random, a.seed)?);
    Ok(data)
}

fn sigma(a: &DataArgs) -> Result<Report, CliError> {
    let b = bounds()?;
    let mut report = Report::new(data_config("verify sigma", a, &b));
    let data = load_data(a)?;
    let mut csv = CsvTable {
        header: vec!["datum", "rank", "roots", "unipotent", "sign_changes", "orbit_count", "symmetric_count", "agree"],
        rows: Vec::new(),
    };
    for r in suites::sigma_suite(&data, a.output.exec()) {
        let m = r.methods;
        csv.rows.push(vec![
            r.datum.clone(),
            r.rank.to_string(),
            r.roots.to_string(),
            m.unipotent.to_i32().to_string(),
            m.sign_changes.to_i32().to_string(),
            m.orbit_count.to_i32().to_string(),
            m.symmetric_count.to_i32().to_string(),
            r.agree.to_string(),
        ]);
        if !r.agree {
            report.fail(&r)?;
        }
        report.push(&r)?;
    }
    report.csv = Some(csv);
    Ok(report)
}

fn no_fixed_root(a: &DataArgs) -> Result<Report, CliError> {
    let b = bounds()?;
    let mut report = Report::new(data_config("verify no-fixed-root", a, &b));
    let data = load_data(a)?;
    let mut csv = CsvTable {
        header: vec!["datum", "theta", "centralizer_roots", "sigma_group", "sigma_centralizer", "four_roots_even", "agree"],
        rows: Vec::new(),
    };
    for r in suites::no_fixed_root_suite(&data)? {
        csv.rows.push(vec![
            r.datum.clone(),
            serde_json::to_string(&r.theta).unwrap_or_default(),
            r.centralizer_roots.to_string(),
            r.sigma_group.to_i32().to_string(),
            r.sigma_centralizer.to_i32().to_string(),
            r.four_roots_even.to_string(),
            r.agree.to_string(),
        ]);
        if !r.agree || !r.four_roots_even {
            report.fail(&r)?;
        }
        report.push(&r)?;
    }
    report.csv = Some(csv);
    Ok(report)
}

struct Grid {
    kind: GroupKind,
    qs: Vec<u64>,
    seeds: Vec<Seed>,
    bounds: Bounds,
}

fn grid(command: &str, g: &GroupArgs, output: &OutputArgs) -> Result<(Grid, RunConfig), CliError> {
    let bounds = bounds()?;
    let grid = Grid { kind: g.kind()?, qs: g.qs()?, seeds: g.seeds()?, bounds };
    let mut c = RunConfig::new(command, output, &grid.bounds);
    c.group = Some(grid.kind.name().to_string());
    c.q = grid.qs.clone();
    c.involutions = grid.seeds.iter().map(|s| s.name()).collect();
    Ok((grid, c))
}

fn epsilon(a: &TorusGridArgs) -> Result<Report, CliError> {
    let (g, mut config) = grid("verify epsilon", &a.group, &a.output)?;
    config.torus = Some(a.torus);
    let mut report = Report::new(config);
    let mut csv = CsvTable {
        header: vec!["group", "q", "torus", "involution_seed", "theta", "domain", "disagreements"],
        rows: Vec::new(),
    };
    for &q in &g.qs {
        for torus in a.torus.kinds() {
            for seed in &g.seeds {
                for r in suites::epsilon_suite(g.kind, q, torus, seed, &g.bounds, a.output.exec())? {
                    csv.rows.push(vec![
                        r.group.clone(),
                        q.to_string(),
                        r.torus.clone(),
                        r.seed.clone(),
                        r.theta.clone(),
                        r.domain.to_string(),
                        r.disagreements.to_string(),
                    ]);
                    if !r.agree() {
                        report.fail(&r)?;
                    }
                    report.push(&r)?;
                }
            }
        }
    }
    report.csv = Some(csv);
    Ok(report)
}

fn phi_theta(a: &TorusGridArgs) -> Result<Report, CliError> {
    let (g, mut config) = grid("verify phi-theta", &a.group, &a.output)?;
    config.torus = Some(a.torus);
    let mut report = Report::new(config);
    let mut csv = CsvTable {
        header: vec!["group", "q", "torus", "involution_seed", "theta", "phi_theta", "t_plus_size", "agree"],
        rows: Vec::new(),
    };
    for &q in &g.qs {
        for torus in a.torus.kinds() {
            for seed in &g.seeds {
                for r in suites::phi_theta_suite(g.kind, q, torus, seed, &g.bounds, a.output.exec())? {
                    csv.rows.push(vec![
                        r.group.clone(),
                        q.to_string(),
                        r.torus.clone(),
                        r.seed.clone(),
                        r.theta.clone(),
                        serde_json::to_string(&r.phi_theta).unwrap_or_default(),
                        r.t_plus_size.to_string(),
                        r.agree.to_string(),
                    ]);
                    if !r.agree {
                        report.fail(&r)?;
                    }
                    report.push(&r)?;
                }
            }
        }
    }
    report.csv = Some(csv);
    Ok(report)
}

/// One row of the multiplicity table. The leading fields are the CSV columns.
#[derive(Clone, Debug, Serialize)]
struct TableRow {
    group: String,
    q: u64,
    involution_seed: String,
    lambda_exponent: String,
    lhs: u64,
    rhs: u64,
    n_matching_orbits: usize,
    m_values: Vec<u64>,
    wall_ms: u64,
    lambda_pairs: Vec<[u64; 2]>,
    theta_size: usize,
    lhs_samples: Vec<(usize, f64)>,
    frobenius_rhs: u64,
    orbits: Vec<OrbitReport>,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

impl TableRow {
    fn new(kind: GroupKind, q: u64, seed: &Seed, theta_size: usize, r: TheoremRow, timing: bool) -> Self {
        TableRow {
            group: kind.name().to_string(),
            q,
            involution_seed: seed.name(),
            lambda_exponent: join(&r.lambda_exponents),
            lhs: r.lhs,
            rhs: r.rhs,
            n_matching_orbits: r.n_matching_orbits,
            m_values: r.m_values,
            wall_ms: if timing { r.wall_ms } else { 0 },
            lambda_pairs: r.pairs,
            theta_size,
            lhs_samples: r.lhs_samples,
            frobenius_rhs: r.frobenius_rhs,
            orbits: r.orbits,
        }
    }

    fn csv(&self) -> Vec<String> {
        vec![
            self.group.clone(),
            self.q.to_string(),
            self.involution_seed.clone(),
            self.lambda_exponent.clone(),
            self.lhs.to_string(),
            self.rhs.to_string(),
            self.n_matching_orbits.to_string(),
            join(&self.m_values),
            self.wall_ms.to_string(),
        ]
    }
}

fn theorem(command: &str, g: &GroupArgs, lambda: &[String], output: &OutputArgs) -> Result<Report, CliError> {
    let (grid, mut config) = grid(command, g, output)?;
    config.lambda = lambda.to_vec();
    let filters = parse_lambdas(lambda)?;
    let exec = output.exec();
    let mut report = Report::new(config);
    let mut csv = CsvTable {
        header: vec![
            "group",
            "q",
            "involution_seed",
            "lambda_exponent",
            "lhs",
            "rhs",
            "n_matching_orbits",
            "m_values",
            "wall_ms",
        ],
        rows: Vec::new(),
    };
    for &q in &grid.qs {
        let group = Arc::new(GroupSpec::new(grid.kind, q, &grid.bounds)?.with_exec(exec));
        let table = Arc::new(ClassTable::new(group.tower().clone())?);
        let reps: Vec<_> = multiplicity::cuspidal_grid(&table, grid.kind, exec)?
            .into_iter()
            .filter(|r| filters.is_empty() || filters.iter().any(|f: &LambdaFilter| f.matches(&r.pairs)))
            .collect();
        if reps.is_empty() {
            return Err(CliError::Config(format!("--lambda {lambda:?} selects no general-position pair at q = {q}")));
        }
        for seed in &grid.seeds {
            let theta = Involution::from_seed(&group, *seed)?;
            let setup = TheoremSetup::with_table(group.clone(), theta, &grid.bounds, table.clone())?;
            let theta_size = setup.census().len();
            for r in multiplicity::verify_theorem(&setup, &reps, exec) {
                match r {
                    Ok(r) => {
                        let row = TableRow::new(grid.kind, q, seed, theta_size, r, !output.no_timing);
                        csv.rows.push(row.csv());
                        report.push(&row)?;
                    }
                    Err(MultError::TheoremViolation(r)) => {
                        let row = TableRow::new(grid.kind, q, seed, theta_size, *r, !output.no_timing);
                        report.fail(&json!({ "error": "lhs differs from rhs", "row": &row }))?;
                        csv.rows.push(row.csv());
                        report.push(&row)?;
                    }
                    Err(e) => {
                        let e = CliError::from(e);
                        if !matches!(e, CliError::Internal(_)) {
                            return Err(e);
                        }
                        report.fail(&json!({
                            "group": grid.kind.name(),
                            "q": q,
                            "involution_seed": seed.name(),
                            "error": e.to_string(),
                        }))?;
                    }
                }
            }
        }
    }
    report.csv = Some(csv);
    Ok(report)
}

fn export_character(a: &ExportArgs) -> Result<Report, CliError> {
    let b = bounds()?;
    let q = validate_q(a.q)?;
    let mut config = RunConfig::new("export-character", &a.output, &b);
    config.group = Some(GroupKind::Gl2.name().to_string());
    config.q = vec![q];
    config.lambda = vec![a.lambda.to_string()];
    let mut report = Report::new(config);
    let group = GroupSpec::new(GroupKind::Gl2, q, &b)?;
    let table = Arc::new(ClassTable::new(group.tower().clone())?);
    let lambda = TorusCharacter::new(group.tower(), 2, a.lambda as i64)?;
    let export = dlchar::cuspidal_character(&table, &lambda, Exec::default())?.export();
    report.csv = Some(CsvTable {
        header: vec!["rep", "size", "value_re", "value_im"],
        rows: export
            .classes
            .iter()
            .map(|c| {
                vec![
                    serde_json::to_string(&c.rep).unwrap_or_default(),
                    c.size.to_string(),
                    c.value_re.to_string(),
                    c.value_im.to_string(),
                ]
            })
            .collect(),
    });
    report.push(&export)?;
    Ok(report)
}
