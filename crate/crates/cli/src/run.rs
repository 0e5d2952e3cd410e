//! The five modes. Each returns a table; `verify` also reports whether every
//! check passed.

use lzwalk::edge::EdgeReport;
use lzwalk::fit::{lin_space, log_space};
use lzwalk::genfun::BoundedWalkSeries;
use lzwalk::walk::{evolve_observe, MAX_STEPS};
use lzwalk::EdgeStatus;

use crate::config::{Mode, RunConfig, Spacing};
use crate::error::CliError;
use crate::output::{Table, Value};
use crate::verify;

pub struct Outcome {
    pub table: Table,
    /// False only when a `verify` check failed.
    pub passed: bool,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let table = match cfg.mode {
        Mode::Evolve => run_evolve(cfg)?,
        Mode::Series => run_series(cfg)?,
        Mode::Edge => run_edge(cfg)?,
        Mode::Sweep => run_sweep(cfg)?,
        Mode::Verify => {
            let checks = verify::run_all(cfg)?;
            let passed = checks.iter().all(|c| c.passed);
            return Ok(Outcome { table: verify::to_table(&checks), passed });
        }
    };
    Ok(Outcome { table, passed: true })
}

/// `0, τ/4, τ/2, 3τ/4, τ`, each rounded to the nearest even time and kept
/// within `[0, τ]`.
pub fn default_snapshots(steps: usize) -> Vec<usize> {
    let last_even = steps - steps % 2;
    let mut out: Vec<usize> = (0..=4)
        .map(|k| {
            let half = (k * steps) as f64 / 8.0;
            (2 * half.round() as usize).min(last_even)
        })
        .collect();
    out.dedup();
    out
}

/// Rows `tau,n,prob_L,prob_R` on the sites of matching parity.
pub fn run_evolve(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.model()?;
    let (bulk, boundary) = (params.bulk_coin()?, params.boundary_coin()?);
    let mut times = cfg.snapshots.clone().unwrap_or_else(|| default_snapshots(cfg.steps));
    times.sort_unstable();
    times.dedup();
    let last = *times.last().expect("validated non-empty");
    let mut table = Table::new(&["tau", "n", "prob_L", "prob_R"]);
    let mut next = 0;
    evolve_observe(&bulk, &boundary, last, MAX_STEPS, |s| {
        if next < times.len() && s.tau() == times[next] {
            for site in s.distribution() {
                table.push(vec![s.tau().into(), site.n.into(), site.prob_l.into(), site.prob_r.into()]);
            }
            next += 1;
        }
    })?;
    Ok(table)
}

/// Rows `tau,n,re_L,im_L,re_R,im_R`: coefficients of `z^τ` in the
/// generating functions, `τ <= order`, `n <= min(τ, sites)`, matching parity.
pub fn run_series(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.model()?;
    let gf = BoundedWalkSeries::new(&params.bulk_coin()?, &params.boundary_coin()?, cfg.order + 1)?;
    let sites = gf.sites(cfg.sites);
    let mut table = Table::new(&["tau", "n", "re_L", "im_L", "re_R", "im_R"]);
    for tau in 0..=cfg.order {
        for (n, (l, r)) in sites.iter().enumerate().take(tau + 1).skip(tau % 2).step_by(2) {
            let (cl, cr) = (l.coeff(tau), r.coeff(tau));
            table.push(vec![tau.into(), n.into(), cl.re.into(), cl.im.into(), cr.re.into(), cr.im.into()]);
        }
    }
    Ok(table)
}

fn status_name(status: EdgeStatus) -> &'static str {
    match status {
        EdgeStatus::Localized => "localized",
        EdgeStatus::Critical => "critical",
        EdgeStatus::Delocalized => "delocalized",
    }
}

/// One row summarizing the edge state at the configured drive.
pub fn run_edge(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.model()?;
    let rep = EdgeReport::analyze(&params)?;
    let obs = rep.observables;
    let mut table = Table::new(&[
        "F", "p", "theta", "r", "status", "xi", "weight", "z_pole_sq_re", "z_pole_sq_im", "quasi_energy", "p_c",
        "F_c", "J_direct", "J_paper_form", "E_direct",
    ]);
    table.push(vec![
        params.field.into(),
        rep.p.into(),
        rep.theta.into(),
        rep.r.into(),
        status_name(rep.status).into(),
        Value::opt(rep.xi),
        rep.weight.into(),
        rep.z_pole_sq.re.into(),
        rep.z_pole_sq.im.into(),
        Value::opt(rep.quasi_energy),
        rep.thresholds.p_c.into(),
        rep.thresholds.f_c.into(),
        Value::opt(obs.map(|o| o.j_direct)),
        Value::opt(obs.map(|o| o.j_paper_form)),
        Value::opt(obs.map(|o| o.e_direct)),
    ]);
    Ok(table)
}

pub fn sweep_grid(cfg: &RunConfig) -> Vec<f64> {
    match cfg.spacing {
        Spacing::Linear => lin_space(cfg.fmin, cfg.fmax, cfg.points),
        Spacing::Log => log_space(cfg.fmin, cfg.fmax, cfg.points),
    }
}

/// Rows `F,p,r,xi,weight,J_direct,J_paper_form,E_direct,localized` in grid
/// order. Edge quantities are empty and the weight is 0 away from localization.
pub fn run_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut table = Table::new(&["F", "p", "r", "xi", "weight", "J_direct", "J_paper_form", "E_direct", "localized"]);
    for field in sweep_grid(cfg) {
        let rep = EdgeReport::analyze(&cfg.model_at(field)?)?;
        let obs = rep.observables;
        table.push(vec![
            field.into(),
            rep.p.into(),
            rep.r.into(),
            Value::opt(rep.xi),
            rep.weight.into(),
            Value::opt(obs.map(|o| o.j_direct)),
            Value::opt(obs.map(|o| o.j_paper_form)),
            Value::opt(obs.map(|o| o.e_direct)),
            rep.localized().into(),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::parse_str(text).unwrap()
    }

    #[test]
    fn snapshot_defaults() {
        assert_eq!(default_snapshots(200), vec![0, 50, 100, 150, 200]);
        assert_eq!(default_snapshots(10), vec![0, 2, 6, 8, 10]);
        assert_eq!(default_snapshots(7), vec![0, 2, 4, 6]);
        assert_eq!(default_snapshots(0), vec![0]);
        assert_eq!(default_snapshots(1), vec![0]);
    }

    #[test]
    fn evolve_at_zero_steps() {
        let t = run_evolve(&cfg("mode = evolve\np = 0.2\nsteps = 0\n")).unwrap();
        assert_eq!(t.to_csv(), "tau,n,prob_L,prob_R\n0,0,1.0000000000000000,0.0000000000000000\n");
    }

    #[test]
    fn evolve_ballistic() {
        let t = run_evolve(&cfg("mode = evolve\np = 1\nsteps = 50\nsnapshots = 50\n")).unwrap();
        let nonzero: Vec<_> = t
            .rows
            .iter()
            .filter(|r| matches!((&r[2], &r[3]), (Value::Float(l), Value::Float(r)) if l + r > 0.0))
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0][1], Value::Int(50));
        match nonzero[0][3] {
            Value::Float(x) => assert!((x - 1.0).abs() < 1e-14),
            _ => panic!(),
        }
    }

    #[test]
    fn evolve_snapshots_are_normalized() {
        let t = run_evolve(&cfg("mode = evolve\np = 0.2\nsteps = 120\n")).unwrap();
        for tau in default_snapshots(120) {
            let total: f64 = t
                .rows
                .iter()
                .filter(|r| r[0] == Value::Int(tau as u64))
                .map(|r| match (&r[2], &r[3]) {
                    (Value::Float(a), Value::Float(b)) => a + b,
                    _ => panic!(),
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn series_rows_match_light_cone() {
        let t = run_series(&cfg("mode = series\np = 0.3\norder = 6\nsites = 3\n")).unwrap();
        let keys: Vec<(u64, u64)> = t
            .rows
            .iter()
            .map(|r| match (&r[0], &r[1]) {
                (Value::Int(a), Value::Int(b)) => (*a, *b),
                _ => panic!(),
            })
            .collect();
        assert_eq!(keys, vec![(0, 0), (1, 1), (2, 0), (2, 2), (3, 1), (3, 3), (4, 0), (4, 2), (5, 1), (5, 3), (6, 0), (6, 2)]);
    }

    #[test]
    fn sweep_row_count_and_blanks() {
        let t = run_sweep(&cfg("mode = sweep\nfmin = 1\nfmax = 8\npoints = 15\n")).unwrap();
        assert_eq!(t.rows.len(), 15);
        for row in &t.rows {
            if row[8] == Value::Bool(false) {
                assert_eq!(row[3], Value::Null);
                assert_eq!(row[4], Value::Float(0.0));
                assert_eq!(row[7], Value::Null);
            }
        }
    }

    #[test]
    fn edge_reference_row() {
        let t = run_edge(&cfg("mode = edge\np = 0.2\n")).unwrap();
        assert_eq!(t.rows[0][4], Value::from("localized"));
        match t.rows[0][3] {
            Value::Float(r) => assert!((r - 0.37377).abs() < 1e-5),
            _ => panic!(),
        }
    }
}
