use std::error::Error as StdError;
use std::fmt::Write as _;

use serde_json::{json, Value};

use quadrat::construct::{check_one_variable, quadratize, ConstructError, QuadratizeOptions, StrategyChoice};
use quadrat::groebner::workbench::{eliminant_ring, WorkbenchError};
use quadrat::groebner::{build_single_var_matrices, single_var_feasibility_conditions};
use quadrat::linalg::SolveError;
use quadrat::monosearch::{search_monomial, SearchConfig, SearchError};
use quadrat::quadsys::verify_quadratization_with;
use quadrat::scalars::Rational;
use quadrat::simulate::{integrate_pair, SimError, BLOW_UP_THRESHOLD};
use quadrat::{reduce_new_vars, AnyPoly, Field, Mode, NewVarSet, QuadError, UniPoly};

use crate::parse::{parse_exact, Parsed};
use crate::render;
use crate::{Cli, Command, Failure, ModeFlag, Outcome, EXIT_INFEASIBLE};

fn is_indeterminate(e: &ConstructError) -> bool {
    let quad = match e {
        ConstructError::Quad(q) | ConstructError::Search(SearchError::Quad(q)) => Some(q),
        _ => None,
    };
    matches!(quad, Some(QuadError::Solve(SolveError::Indeterminate { .. }))) || indeterminate_in_chain(e)
}

fn indeterminate_in_chain(e: &(dyn StdError + 'static)) -> bool {
    let mut cur = Some(e);
    while let Some(c) = cur {
        if matches!(c.downcast_ref::<SolveError>(), Some(SolveError::Indeterminate { .. })) {
            return true;
        }
        cur = c.source();
    }
    false
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        if is_indeterminate(&e) {
            return Failure::Indeterminate(e.to_string());
        }
        match e {
            ConstructError::ZeroPolynomial
            | ConstructError::ConstantPolynomial
            | ConstructError::DegreeOutOfRange { .. }
            | ConstructError::Search(SearchError::DegreeTooLow(_) | SearchError::BoundTooSmall { .. }) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Infeasible(other.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        ConstructError::Search(e).into()
    }
}

impl From<QuadError> for Failure {
    fn from(e: QuadError) -> Self {
        ConstructError::Quad(e).into()
    }
}

impl From<WorkbenchError> for Failure {
    fn from(e: WorkbenchError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// `piped` is the stdin text, read when the polynomial argument is `-`.
pub fn execute(cli: &Cli, piped: Option<&str>) -> Result<Outcome, Failure> {
    let g = &cli.global;
    if !(g.tolerance.is_finite() && g.tolerance >= 0.0) {
        return Err(Failure::Usage(format!("invalid tolerance {}", g.tolerance)));
    }
    let read = |text: &str| -> Result<(String, Parsed), Failure> {
        let source = match (text, piped) {
            ("-", Some(s)) => s.to_string(),
            _ => text.to_string(),
        };
        let parsed = parse_exact(&source).map_err(|e| Failure::Usage(format!("cannot parse `{source}`: {e}")))?;
        Ok((source, parsed))
    };
    match &cli.command {
        Command::Quadratize { poly, strategy } => {
            let (text, parsed) = read(poly)?;
            cmd_quadratize(cli, &text, parsed, *strategy)
        }
        Command::CheckOneVar { poly } => {
            let (text, parsed) = read(poly)?;
            let p = with_mode(parsed, g.mode);
            let input = poly_input(&text, &p);
            match &p {
                AnyPoly::Exact(q) => cmd_check_one_var(q, g.tolerance, input),
                AnyPoly::Float(q) => cmd_check_one_var(q, g.tolerance, input),
            }
        }
        Command::Search { poly, max_degree, max_order, no_pruning } => {
            let (text, parsed) = read(poly)?;
            let p = with_mode(parsed, g.mode);
            let input = poly_input(&text, &p);
            let cfg = SearchConfig {
                max_degree: *max_degree,
                max_order: *max_order,
                pruning: !no_pruning,
                ..SearchConfig::default()
            };
            match &p {
                AnyPoly::Exact(q) => cmd_search(q, &cfg, g.tolerance, input),
                AnyPoly::Float(q) => cmd_search(q, &cfg, g.tolerance, input),
            }
        }
        Command::Verify { poly, vars } => {
            let (text, parsed) = read(poly)?;
            let var_polys: Vec<Parsed> = vars
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| read(s).map(|(_, v)| v))
                .collect::<Result<_, _>>()?;
            cmd_verify(cli, &text, parsed, var_polys)
        }
        Command::Simulate { poly, x0, t_end, h, csv } => {
            let (text, parsed) = read(poly)?;
            cmd_simulate(cli, &text, parsed, *x0, *t_end, *h, csv.as_deref())
        }
        Command::Eliminate { n, allow_large } => cmd_eliminate(*n, *allow_large),
        Command::Matrices { n } => cmd_matrices(*n),
    }
}

fn float_requested(parsed: &Parsed, mode: ModeFlag) -> bool {
    match mode {
        ModeFlag::Exact => false,
        ModeFlag::Float => true,
        ModeFlag::Auto => parsed.has_decimal,
    }
}

/// Exact mode keeps decimal literals as exact fractions.
fn with_mode(parsed: Parsed, mode: ModeFlag) -> AnyPoly {
    if float_requested(&parsed, mode) {
        AnyPoly::Float(parsed.poly.to_float())
    } else {
        AnyPoly::Exact(parsed.poly)
    }
}

fn poly_input(text: &str, p: &AnyPoly) -> Value {
    json!({ "text": text, "poly": p.to_string() })
}

fn cmd_quadratize(cli: &Cli, text: &str, parsed: Parsed, strategy: StrategyChoice) -> Result<Outcome, Failure> {
    let p = with_mode(parsed, cli.global.mode);
    let opts = QuadratizeOptions {
        strategy,
        tolerance: cli.global.tolerance,
        allow_mode_switch: cli.global.mode == ModeFlag::Auto,
        ..QuadratizeOptions::default()
    };
    let c = quadratize(&p, &opts)?;
    let mut result = render::any_quadratization(&c.quadratization);
    result["strategy"] = json!(c.strategy);
    result["mode_switched"] = json!(c.mode_switched);
    let text_out = format!("strategy: {}\norder: {}\n{}", c.strategy, c.quadratization.order(), c.quadratization);
    let mut o = Outcome::new(Some(c.quadratization.mode()), poly_input(text, &p), result, text_out);
    if c.mode_switched {
        o.diagnostics.push("switched to float mode: an exact radical needed by the construction is irrational".into());
    }
    Ok(o)
}

fn shift_text<F: Field>(lambda: &F) -> String {
    if lambda.is_zero() {
        return "x = y".into();
    }
    let (negative, abs) = lambda.split_sign();
    format!("x = y {} {}", if negative { '-' } else { '+' }, abs.render())
}

fn cmd_check_one_var<F: Field>(p: &UniPoly<F>, tol: f64, input: Value) -> Result<Outcome, Failure> {
    let deg = p.deg().unwrap_or(0);
    if deg < 5 {
        return Err(Failure::Usage(format!("the one-variable test needs degree at least 5, got {deg}")));
    }
    let v = check_one_variable(p, tol)?;
    let nf = &v.normal_form;
    let mut text = format!("shift: {}\nshifted form: {}\n", shift_text(&nf.lambda), nf.shifted);
    let result = json!({
        "accepted": v.accepted(),
        "lambda": nf.lambda.render(),
        "shifted": nf.shifted.to_string(),
        "offending_degrees": v.offending,
        "reason": v.reason(),
        "quadratization": v.quadratization.as_ref().map(render::quadratization),
    });
    let exit = match &v.quadratization {
        Some(q) => {
            text.push_str("accepted: order 1\n");
            text.push_str(&q.to_string());
            crate::EXIT_OK
        }
        None => {
            let _ = writeln!(text, "rejected: {}", v.reason().unwrap_or_default());
            EXIT_INFEASIBLE
        }
    };
    let mut o = Outcome::new(Some(F::MODE), input, result, text);
    o.exit = exit;
    Ok(o)
}

fn cmd_search<F: Field>(p: &UniPoly<F>, cfg: &SearchConfig, tol: f64, input: Value) -> Result<Outcome, Failure> {
    let r = search_monomial(p, cfg, tol)?;
    let mut text = format!("{}\ncertificate (tested/pruned/total):\n", r.label());
    for s in &r.certificate {
        let _ = writeln!(text, "  {s}");
    }
    if let Some(f) = &r.found {
        text.push_str(&f.quadratization.to_string());
    }
    let result = json!({
        "found": r.found.is_some(),
        "degrees": r.found.as_ref().map(|f| f.degrees.clone()),
        "max_degree": r.max_degree,
        "max_order": r.max_order,
        "certificate": r.certificate,
        "quadratization": r.found.as_ref().map(|f| render::quadratization(&f.quadratization)),
    });
    let mut o = Outcome::new(Some(F::MODE), input, result, text);
    if r.found.is_none() {
        o.exit = EXIT_INFEASIBLE;
    }
    if p.deg().unwrap_or(0) >= 5 && r.order() != Some(1) {
        if let Ok(v) = check_one_variable(p, tol) {
            if let Some(q) = &v.quadratization {
                o.diagnostics.push(format!(
                    "check-one-var finds order 1 with the non-monomial variable z1 = {} (shift {})",
                    q.new_vars().vars()[0],
                    shift_text(&v.normal_form.lambda)
                ));
            }
        }
    }
    Ok(o)
}

fn verify_in<F: Field>(p: &UniPoly<F>, vars: Vec<UniPoly<F>>, tol: f64, input: Value) -> Result<Outcome, Failure> {
    let given = NewVarSet::new(vars);
    let reduced = reduce_new_vars(&given);
    let names = |s: &NewVarSet<F>| s.vars().iter().map(|v| v.to_string()).collect::<Vec<_>>();
    let q = verify_quadratization_with(p, &reduced, tol)?;
    let mut text = String::new();
    let result = json!({
        "quadratizes": q.is_some(),
        "given_vars": names(&given),
        "reduced_vars": names(&reduced),
        "quadratization": q.as_ref().map(render::quadratization),
    });
    let exit = match &q {
        Some(q) => {
            text.push_str("quadratizes: yes\n");
            text.push_str(&q.to_string());
            crate::EXIT_OK
        }
        None => {
            text.push_str("quadratizes: no\n");
            EXIT_INFEASIBLE
        }
    };
    let mut o = Outcome::new(Some(F::MODE), input, result, text);
    if names(&reduced) != names(&given) {
        o.diagnostics.push(format!(
            "variables reduced (affine parts dropped, duplicates and constants removed) to: {}",
            names(&reduced).join("; ")
        ));
    }
    o.exit = exit;
    Ok(o)
}

fn cmd_verify(cli: &Cli, text: &str, parsed: Parsed, vars: Vec<Parsed>) -> Result<Outcome, Failure> {
    let mode = cli.global.mode;
    let float = float_requested(&parsed, mode) || vars.iter().any(|v| float_requested(v, mode));
    let p = if float { AnyPoly::Float(parsed.poly.to_float()) } else { AnyPoly::Exact(parsed.poly) };
    let input = poly_input(text, &p);
    let exact_vars: Vec<UniPoly<Rational>> = vars.into_iter().map(|v| v.poly).collect();
    match &p {
        AnyPoly::Exact(q) => verify_in(q, exact_vars, cli.global.tolerance, input),
        AnyPoly::Float(q) => {
            let fv = exact_vars.iter().map(UniPoly::to_float).collect();
            verify_in(q, fv, cli.global.tolerance, input)
        }
    }
}

fn cmd_simulate(
    cli: &Cli,
    text: &str,
    parsed: Parsed,
    x0: f64,
    t_end: f64,
    h: f64,
    csv_path: Option<&std::path::Path>,
) -> Result<Outcome, Failure> {
    let p = with_mode(parsed, cli.global.mode);
    let opts = QuadratizeOptions {
        tolerance: cli.global.tolerance,
        allow_mode_switch: cli.global.mode != ModeFlag::Exact,
        ..QuadratizeOptions::default()
    };
    let c = quadratize(&p, &opts)?;
    let quad = c.quadratization.to_float();
    let report = integrate_pair(&p.to_float(), &quad, x0, t_end, h)?;
    if let Some(path) = csv_path {
        write_csv(path, &report).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let steps = report.t_grid.len().saturating_sub(1);
    let mut out = format!(
        "strategy: {}\norder: {}\nsteps: {steps}\nmax |x - x_quad|: {:e}\nmax invariant drift: {:e}\n",
        c.strategy,
        quad.order(),
        report.max_x_deviation,
        report.max_invariant_drift
    );
    if let Some(t) = report.blow_up_time {
        let _ = writeln!(out, "blow-up at t = {t}");
    }
    let result = json!({
        "strategy": c.strategy,
        "quadratization": render::any_quadratization(&c.quadratization),
        "x0": x0,
        "t_end": t_end,
        "h": h,
        "steps": steps,
        "max_x_deviation": report.max_x_deviation,
        "max_invariant_drift": report.max_invariant_drift,
        "blew_up": report.blew_up,
        "blow_up_time": report.blow_up_time,
        "final_x": report.x_original.last(),
    });
    let mut o = Outcome::new(Some(Mode::Float), poly_input(text, &p), result, out);
    if report.blew_up {
        o.diagnostics.push(format!("the state left |w| <= {BLOW_UP_THRESHOLD:e}; the grid stops there"));
    }
    if c.mode_switched {
        o.diagnostics.push("the construction switched to float mode".into());
    }
    Ok(o)
}

fn write_csv(path: &std::path::Path, r: &quadrat::simulate::SimReport) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "x_re", "x_im", "x_quad_re", "x_quad_im"])?;
    for ((t, a), b) in r.t_grid.iter().zip(&r.x_original).zip(&r.x_quadratized) {
        w.serialize((t, a[0], a[1], b[0], b[1]))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_eliminate(n: usize, allow_large: bool) -> Result<Outcome, Failure> {
    let gens = single_var_feasibility_conditions(n, allow_large)?;
    let ring = eliminant_ring(n);
    let strings: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    let mut text = format!("eliminants in {} for n = {n}:\n", ring.names().join(", "));
    for s in &strings {
        let _ = writeln!(text, "  {s} = 0");
    }
    let result = json!({ "n": n, "ring": ring.names(), "eliminants": strings });
    Ok(Outcome::new(Some(Mode::Exact), json!({ "n": n }), result, text))
}

fn cmd_matrices(n: usize) -> Result<Outcome, Failure> {
    let (xm, zm) = build_single_var_matrices(n)?;
    let text = format!("xdot matrix\n{xm}\nzdot matrix\n{zm}");
    let result = json!({ "xdot": xm.render(), "zdot": zm.render() });
    Ok(Outcome::new(Some(Mode::Exact), json!({ "n": n }), result, text))
}
