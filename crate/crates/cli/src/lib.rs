//! Command-line front end. [`run`] does all the work and returns what should
//! be printed, so the binary is a thin wrapper and tests can call it directly.

use std::fmt::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fibergraph::curves::{resolve_all, twist as curve_twist, well_positioned_and_mu};
use fibergraph::dot::export_dot;
use fibergraph::format::{parse_curves, parse_graph, print_graph};
use fibergraph::harmonic::{
    all_trees, check_tree_hypotheses, is_calabi, loop_integral, marked_points, positive_kernel_witness,
    tree_cover_check, Direction, Part,
};
use fibergraph::moves::{attach_handle, twister as twister_report};
use fibergraph::tangency::{euler_and_pairing, region_check, TangencyData};
use fibergraph::vertical::{
    bound_suite, chi_minus_of, cycle_basis, fiber_class, thurston_lower_bound, var_capital, vertical_norm_with,
    TwistData,
};
use fibergraph::{Angle, CurveSystem, Error, MarkKind, MorseGraph, VerticalClass};

/// Box used by `harmonic` when searching for a positive kernel vector.
const KERNEL_BOX: i64 = 4;

#[derive(Parser, Debug)]
#[command(name = "fibergraph", version, about = "Invariants of fiber graphs of circle-valued Morse maps")]
struct Cli {
    /// Print a JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ClassArgs {
    /// Vertical class as edge=coefficient pairs, e.g. `e3=1,e1=-2`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "fiber", required_unless_present = "fiber")]
    class: Option<String>,
    /// Use the fiber over this angle as the class.
    #[arg(long)]
    fiber: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the local rules of a graph file.
    Validate { file: String },
    /// var, osc, Var and the marked-point counts.
    Invariants { file: String },
    /// Calabi property, marked points and the positive kernel test.
    Harmonic { file: String },
    /// Repeller trees and the segment cover.
    Trees { file: String },
    /// Attractor and repeller integrals over basis cycles or a given cycle.
    Integral {
        file: String,
        /// Signed edge list such as `+e2,-e1`.
        #[arg(long, allow_hyphen_values = true)]
        cycle: Option<String>,
    },
    /// Vertical norm of a class with a minimizing attractor vector.
    Norm {
        file: String,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Thurston-norm lower bounds for a class.
    Bound {
        file: String,
        #[command(flatten)]
        class: ClassArgs,
        /// Twist at every repeller.
        #[arg(long)]
        rho: i64,
        #[arg(long, default_value_t = 0)]
        mu: i64,
        #[arg(long)]
        breadth: Option<i64>,
        #[arg(long)]
        height: Option<i64>,
    },
    /// Twist of a curve system.
    Twist { curves: String },
    /// Resolve a curve system down to no intersection.
    Resolve {
        curves: String,
        /// Print every pass.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        chi_sigma: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        chi_f: i64,
    },
    /// Twister loop T(n) after k applications of move A.
    Twister {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Thurston norm of the fiber class, for the twist lower bound.
        #[arg(long)]
        thurston: Option<i64>,
    },
    /// Attach a 1-handle between two edge positions.
    Surgery1 {
        file: String,
        /// `<edge>@<angle>`
        #[arg(long)]
        src: String,
        /// `<edge>@<angle>`
        #[arg(long)]
        dst: String,
    },
    /// Tangency indices and the feasible-region checks.
    Tangency {
        /// `e+,h+,e-,h-`
        #[arg(long)]
        counts: String,
        #[arg(long)]
        var: i64,
        #[arg(long)]
        rho: i64,
    },
    /// Graphviz rendering of a graph file.
    ExportDot { file: String },
}

/// Text for stdout and stderr plus the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: &'static str,
    msg: String,
    exit: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = if e.is_parse() { 2 } else { 1 };
        Failure { code: e.code(), msg: e.to_string(), exit }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: "parse-error", msg: msg.into(), exit: 2 }
}

type Report = (String, Value);

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok((text, value)) => {
            let stdout = if cli.json { format!("{}\n", serde_json::to_string_pretty(&value).unwrap()) } else { text };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(f) => {
            let stdout = if cli.json {
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({"error": {"code": f.code, "message": f.msg}})).unwrap()
                )
            } else {
                String::new()
            };
            Outcome { code: f.exit, stdout, stderr: format!("error: {}: {}\n", f.code, f.msg) }
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Validate { file } => validate(&load_graph(file)?),
        Command::Invariants { file } => invariants(&load_valid(file)?),
        Command::Harmonic { file } => harmonic(&load_valid(file)?),
        Command::Trees { file } => trees(&load_valid(file)?),
        Command::Integral { file, cycle } => integral(&load_valid(file)?, cycle.as_deref()),
        Command::Norm { file, class } => {
            let g = load_valid(file)?;
            let c = class_of(&g, class)?;
            norm(&g, &c)
        }
        Command::Bound { file, class, rho, mu, breadth, height } => {
            let g = load_valid(file)?;
            let c = class_of(&g, class)?;
            if *rho < 0 || *mu < 0 {
                return Err(usage("--rho and --mu must be nonnegative"));
            }
            let mut data = TwistData::uniform(&g, *rho, *mu);
            data.breadth = *breadth;
            data.height = *height;
            bound(&g, &c, &data)
        }
        Command::Twist { curves } => twist(&load_curves(curves)?),
        Command::Resolve { curves, trace, chi_sigma, chi_f } => {
            resolve(&load_curves(curves)?, *trace, *chi_sigma, *chi_f)
        }
        Command::Twister { n, k, thurston } => twister(*n, *k, *thurston),
        Command::Surgery1 { file, src, dst } => {
            let g = load_valid(file)?;
            let src = position(&g, src)?;
            let dst = position(&g, dst)?;
            surgery1(&g, src, dst)
        }
        Command::Tangency { counts, var, rho } => tangency(counts, *var, *rho),
        Command::ExportDot { file } => {
            let dot = export_dot(&load_valid(file)?);
            Ok((dot.clone(), json!({ "dot": dot })))
        }
    }
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure { code: "io-error", msg: format!("{path}: {e}"), exit: 1 })
}

fn load_graph(path: &str) -> Result<MorseGraph, Failure> {
    Ok(parse_graph(&read(path)?)?)
}

fn load_valid(path: &str) -> Result<MorseGraph, Failure> {
    let g = load_graph(path)?;
    match g.validate().issues.first() {
        Some(issue) => Err(Error::InvalidGraph(issue.to_string()).into()),
        None => Ok(g),
    }
}

fn load_curves(path: &str) -> Result<CurveSystem, Failure> {
    Ok(parse_curves(&read(path)?)?)
}

fn angle(s: &str) -> Result<Angle, Failure> {
    s.parse().map_err(|e: String| usage(format!("bad angle {s:?}: {e}")))
}

fn class_of(g: &MorseGraph, a: &ClassArgs) -> Result<VerticalClass, Failure> {
    match (&a.class, &a.fiber) {
        (Some(spec), _) => Ok(VerticalClass::parse(g, spec)?),
        (None, Some(t)) => Ok(fiber_class(g, angle(t)?)?),
        (None, None) => Err(usage("one of --class or --fiber is required")),
    }
}

fn position(g: &MorseGraph, s: &str) -> Result<(usize, Angle), Failure> {
    let (e, a) = s.split_once('@').ok_or_else(|| usage(format!("expected <edge>@<angle>, found {s:?}")))?;
    Ok((g.find_edge(e)?, angle(a)?))
}

fn names(g: &MorseGraph, edges: &[usize]) -> Vec<String> {
    edges.iter().map(|&e| g.edge(e).name.clone()).collect()
}

fn join(v: &[String]) -> String {
    if v.is_empty() {
        "-".to_string()
    } else {
        v.join(",")
    }
}

fn validate(g: &MorseGraph) -> Result<Report, Failure> {
    let r = g.validate();
    let issues: Vec<String> = r.issues.iter().map(|i| i.to_string()).collect();
    let warnings: Vec<String> = r.warnings.iter().map(|w| w.to_string()).collect();
    if !issues.is_empty() {
        return Err(Error::InvalidGraph(issues.join("; ")).into());
    }
    let mut s = String::new();
    for w in &warnings {
        writeln!(s, "warning: {w}").unwrap();
    }
    s.push_str("OK\n");
    Ok((s, json!({ "valid": true, "warnings": warnings })))
}

fn invariants(g: &MorseGraph) -> Result<Report, Failure> {
    let v = g.variations();
    let m = marked_points(g);
    let fr = chi_minus_of(g, &m.repellers);
    let fa = chi_minus_of(g, &m.attractors);
    let big = var_capital(g)?;
    let s = format!(
        "var={} osc={} Var={} chi_minus_FR={} chi_minus_FA={} attractors={} repellers={} nonbubbling={}\n",
        v.var,
        v.osc,
        big,
        fr,
        fa,
        m.attractors.len(),
        m.repellers.len(),
        v.nonbubbling
    );
    let j = json!({
        "var": v.var, "osc": v.osc, "Var": big, "chi_minus_FR": fr, "chi_minus_FA": fa,
        "attractors": m.attractors.len(), "repellers": m.repellers.len(), "nonbubbling": v.nonbubbling,
    });
    Ok((s, j))
}

fn harmonic(g: &MorseGraph) -> Result<Report, Failure> {
    let (calabi, witness) = is_calabi(g);
    let m = marked_points(g);
    let kernel = positive_kernel_witness(g, KERNEL_BOX);
    let kernel_text: Vec<String> = kernel.iter().flatten().map(|&(e, k)| format!("{}={k}", g.edge(e).name)).collect();
    let mut s = format!("calabi={calabi}");
    if let Some(e) = witness {
        write!(s, " witness={}", g.edge(e).name).unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "attractors={}", join(&names(g, &m.attractors))).unwrap();
    writeln!(s, "repellers={}", join(&names(g, &m.repellers))).unwrap();
    match &kernel {
        Some(_) => writeln!(s, "positive_kernel={}", kernel_text.join(",")).unwrap(),
        None => writeln!(s, "positive_kernel=none box={KERNEL_BOX}").unwrap(),
    }
    let j = json!({
        "calabi": calabi,
        "witness": witness.map(|e| g.edge(e).name.clone()),
        "attractors": names(g, &m.attractors),
        "repellers": names(g, &m.repellers),
        "positive_kernel": kernel.map(|k| k.iter().map(|&(e, c)| json!({"edge": g.edge(e).name, "coeff": c})).collect::<Vec<_>>()),
        "kernel_box": KERNEL_BOX,
    });
    Ok((s, j))
}

fn part_str(p: Part) -> &'static str {
    match p {
        Part::Whole => "whole",
        Part::BeforeMark => "before",
        Part::AfterMark => "after",
    }
}

fn trees(g: &MorseGraph) -> Result<Report, Failure> {
    check_tree_hypotheses(g)?;
    let trees = all_trees(g)?;
    let mut s = String::new();
    let mut list = Vec::new();
    for t in &trees {
        let dir = match t.direction {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        };
        let segs: Vec<String> =
            t.segments.iter().map(|x| format!("{}:{}", g.edge(x.edge).name, part_str(x.part))).collect();
        let verts: Vec<String> = t.vertices.iter().map(|&v| g.vertex(v).name.clone()).collect();
        writeln!(
            s,
            "tree root={} direction={dir} vertices={} leaves={} segments={}",
            g.edge(t.root).name,
            join(&verts),
            join(&names(g, &t.leaves)),
            join(&segs)
        )
        .unwrap();
        list.push(json!({
            "root": g.edge(t.root).name, "direction": dir, "vertices": verts,
            "leaves": names(g, &t.leaves), "segments": segs,
        }));
    }
    let cover = tree_cover_check(g)?;
    writeln!(s, "cover={cover}").unwrap();
    if !cover {
        return Err(Error::TreePropertyViolation("trees leave a segment uncovered".into()).into());
    }
    Ok((s, json!({ "trees": list, "cover": cover })))
}

fn parse_cycle(g: &MorseGraph, spec: &str) -> Result<Vec<(usize, i8)>, Failure> {
    spec.split(',')
        .map(|t| {
            let t = t.trim();
            let (sign, name) = match t.as_bytes().first() {
                Some(b'+') => (1, &t[1..]),
                Some(b'-') => (-1, &t[1..]),
                _ => return Err(usage(format!("cycle entries look like +e or -e, found {t:?}"))),
            };
            Ok((g.find_edge(name)?, sign))
        })
        .collect()
}

fn format_cycle(g: &MorseGraph, c: &[(usize, i8)]) -> String {
    c.iter().map(|&(e, s)| format!("{}{}", if s > 0 { '+' } else { '-' }, g.edge(e).name)).collect::<Vec<_>>().join(",")
}

fn integral(g: &MorseGraph, cycle: Option<&str>) -> Result<Report, Failure> {
    let cycles: Vec<Vec<(usize, i8)>> = match cycle {
        Some(spec) => vec![parse_cycle(g, spec)?],
        None => cycle_basis(g).cycles.into_iter().map(|c| c.0).collect(),
    };
    let mut s = String::new();
    let mut list = Vec::new();
    for (i, c) in cycles.iter().enumerate() {
        let a = loop_integral(g, c, MarkKind::Attractor)?;
        let r = loop_integral(g, c, MarkKind::Repeller)?;
        let text = format_cycle(g, c);
        writeln!(s, "cycle {i} {text} A={a} R={r}").unwrap();
        list.push(json!({ "cycle": text, "A": a, "R": r }));
    }
    if cycles.is_empty() {
        s.push_str("no cycles\n");
    }
    Ok((s, json!({ "cycles": list })))
}

fn norm(g: &MorseGraph, c: &VerticalClass) -> Result<Report, Failure> {
    let r = vertical_norm_with(g, c, Default::default())?;
    let mut s = format!("class={}\nnorm={}\n", c.format(g), r.value);
    let mut kappa = serde_json::Map::new();
    for (&e, &k) in r.kappa.attractors.iter().zip(&r.kappa.kappa) {
        writeln!(s, "a_{}={k}", g.edge(e).name).unwrap();
        kappa.insert(format!("a_{}", g.edge(e).name), json!(k));
    }
    if r.box_too_small {
        writeln!(s, "warning: box-too-small box={}", r.box_used).unwrap();
    }
    let j = json!({
        "class": c.format(g), "norm": r.value, "kappa": kappa,
        "box": r.box_used, "box_too_small": r.box_too_small,
    });
    Ok((s, j))
}

fn bound(g: &MorseGraph, c: &VerticalClass, data: &TwistData) -> Result<Report, Failure> {
    let t = thurston_lower_bound(g, c, data.rho(), data.mu)?;
    let suite = bound_suite(g, c, data)?;
    let mut s = format!(
        "class={} rho={} mu={}\nthurston_bound={} balanced={} fallback={}\n",
        c.format(g),
        data.rho(),
        data.mu,
        t.value,
        t.balanced,
        t.fallback
    );
    let mut lines = Vec::new();
    for b in &suite {
        write!(s, "{}={}", b.name, b.value).unwrap();
        if !b.unmet.is_empty() {
            write!(s, " unmet: {}", b.unmet.join("; ")).unwrap();
        }
        writeln!(s).unwrap();
        lines.push(json!({ "name": b.name, "value": b.value, "unmet": b.unmet }));
    }
    let j = json!({
        "class": c.format(g), "rho": data.rho(), "mu": data.mu,
        "thurston_bound": t.value, "balanced": t.balanced, "fallback": t.fallback, "suite": lines,
    });
    Ok((s, j))
}

fn twist(cs: &CurveSystem) -> Result<Report, Failure> {
    let (rho, rho_circ) = curve_twist(cs)?;
    let mu = well_positioned_and_mu(cs);
    let exact = mu.mu_exact.map_or("unknown".to_string(), |m| m.to_string());
    let s = format!(
        "rho={rho} rho_circ={rho_circ} well_positioned={} nu={} mu_bound={} mu_exact={exact}\n",
        mu.well_positioned, mu.nu, mu.mu_bound
    );
    let j = json!({
        "rho": rho, "rho_circ": rho_circ, "well_positioned": mu.well_positioned,
        "nu": mu.nu, "mu_bound": mu.mu_bound, "mu_exact": mu.mu_exact,
    });
    Ok((s, j))
}

fn resolve(cs: &CurveSystem, trace: bool, chi_sigma: i64, chi_f: i64) -> Result<Report, Failure> {
    let t = resolve_all(cs, chi_sigma, chi_f)?;
    let mut s = String::new();
    let mut steps = Vec::new();
    for st in &t.steps {
        if trace {
            writeln!(s, "step {} rho_circ={} budget={} f_euler={}", st.iteration, st.rho_circ, st.budget, st.f_euler)
                .unwrap();
        }
        steps.push(
            json!({ "iteration": st.iteration, "rho_circ": st.rho_circ, "budget": st.budget, "f_euler": st.f_euler }),
        );
    }
    writeln!(
        s,
        "initial_rho_circ={} steps={} mu_term={} remaining_curves={}",
        t.initial_rho_circ,
        t.steps.len(),
        t.mu_term,
        t.last.curves.len()
    )
    .unwrap();
    let j = json!({
        "initial_rho_circ": t.initial_rho_circ, "mu_term": t.mu_term,
        "steps": steps, "remaining_curves": t.last.curves.len(),
    });
    Ok((s, j))
}

fn twister(n: u32, k: u32, thurston: Option<i64>) -> Result<Report, Failure> {
    let (_, r) = twister_report(n, k, thurston)?;
    let mut s = format!(
        "n={} k={} genus_arc_ba={} genus_arc_ab={} Var={} var={} chi_best={} is_calabi={}\n",
        r.n, r.k, r.genus_arc_ba, r.genus_arc_ab, r.var_capital, r.var, r.chi_best, r.is_calabi
    );
    writeln!(
        s,
        "one_boundary chi_best={} quoted={} Var={}",
        r.chi_best_one_boundary, r.chi_best_one_boundary_quoted, r.var_capital_one_boundary
    )
    .unwrap();
    if let Some(b) = r.rho_lower_bound {
        writeln!(s, "rho_lower_bound={}", fibergraph::angle::format_rational(b)).unwrap();
    }
    let j = json!({
        "n": r.n, "k": r.k, "genus_arc_ba": r.genus_arc_ba, "genus_arc_ab": r.genus_arc_ab,
        "Var": r.var_capital, "var": r.var, "chi_best": r.chi_best, "is_calabi": r.is_calabi,
        "one_boundary": {
            "chi_best": r.chi_best_one_boundary, "quoted": r.chi_best_one_boundary_quoted,
            "Var": r.var_capital_one_boundary,
        },
        "rho_lower_bound": r.rho_lower_bound.map(fibergraph::angle::format_rational),
    });
    Ok((s, j))
}

fn surgery1(g: &MorseGraph, src: (usize, Angle), dst: (usize, Angle)) -> Result<Report, Failure> {
    let moved = attach_handle(g, src, dst)?;
    let r = &moved.record;
    let pairs = |v: &[(String, i64)]| v.iter().map(|(n, d)| format!("{n}:{d:+}")).collect::<Vec<_>>();
    let mut s = String::new();
    writeln!(s, "new_vertices={}", join(&r.vertices)).unwrap();
    writeln!(s, "changed_edges={}", join(&r.edges)).unwrap();
    writeln!(s, "delta_genus={}", join(&pairs(&r.delta_genus))).unwrap();
    writeln!(s, "delta_chi_minus={}", join(&pairs(&r.delta_chi_minus))).unwrap();
    writeln!(s, "repeller_delta={}", r.repeller_delta).unwrap();
    let text = print_graph(&moved.graph);
    s.push_str(&text);
    let j = json!({
        "new_vertices": r.vertices, "changed_edges": r.edges,
        "delta_genus": pairs(&r.delta_genus), "delta_chi_minus": pairs(&r.delta_chi_minus),
        "repeller_delta": r.repeller_delta, "graph": text,
    });
    Ok((s, j))
}

fn tangency(counts: &str, var: i64, rho: i64) -> Result<Report, Failure> {
    let v: Vec<i64> = counts
        .split(',')
        .map(|x| x.trim().parse::<i64>().ok().filter(|&n| n >= 0))
        .collect::<Option<_>>()
        .filter(|v: &Vec<i64>| v.len() == 4)
        .ok_or_else(|| usage(format!("--counts takes four nonnegative integers e+,h+,e-,h-, found {counts:?}")))?;
    if var < 0 || rho < 0 {
        return Err(usage("--var and --rho must be nonnegative"));
    }
    let t = TangencyData::new(v[0], v[1], v[2], v[3]);
    let r = region_check(var, rho, &t);
    let (chi, pairing, chi_minus) = euler_and_pairing(r.i_plus, r.i_minus);
    let s = format!(
        "I_plus={} I_minus={} chi={chi} pairing={pairing} chi_minus={chi_minus}\nfirst={} second={} third={} feasible={} signs_agree={}\n",
        r.i_plus, r.i_minus, r.first, r.second, r.third, r.feasible, r.signs_agree
    );
    let j = json!({
        "I_plus": r.i_plus, "I_minus": r.i_minus, "chi": chi, "pairing": pairing, "chi_minus": chi_minus,
        "first": r.first, "second": r.second, "third": r.third, "feasible": r.feasible, "signs_agree": r.signs_agree,
    });
    Ok((s, j))
}
