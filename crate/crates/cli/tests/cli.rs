use std::process::Command;

use fibergraph::format::{parse_graph, print_graph};
use fibergraph::random::{sweep_graph, SweepParams};
use fibergraph_cli::{run, Outcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("fibergraph").chain(args.iter().copied()))
}

#[test]
fn validate_twister() {
    let out = cli(&["validate", &fixture("t2.graph")]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "OK\n"));
}

#[test]
fn invalid_graph_is_a_domain_error() {
    let out = cli(&["validate", &fixture("bad_degree.graph")]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error: invalid-graph: degree-signature a"));
}

#[test]
fn extremum_is_a_parse_error() {
    let out = cli(&["validate", &fixture("extremum.graph")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error: parse-error: line 2:"));
}

#[test]
fn twister_report() {
    let out = cli(&["twister", "--n", "1", "--k", "3"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("genus_arc_ba=4 genus_arc_ab=5 Var=2"), "{}", out.stdout);
    assert!(out.stdout.contains("is_calabi=true"));
    assert!(out.stdout.contains("one_boundary chi_best=7 quoted=8"));
}

#[test]
fn coherent_meridians_fail_the_cocycle_check() {
    let out = cli(&["twist", &fixture("meridians.curves")]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error: cocycle-violation"));
}

#[test]
fn ladder_twist_and_resolution() {
    let out = cli(&["twist", &fixture("ladder.curves")]);
    assert_eq!(out.stdout, "rho=3 rho_circ=2 well_positioned=true nu=0 mu_bound=0 mu_exact=0\n");
    let out = cli(&["resolve", &fixture("ladder.curves"), "--trace", "--chi-sigma", "4", "--chi-f", "-2"]);
    assert_eq!(
        out.stdout,
        "step 1 rho_circ=1 budget=2 f_euler=-2\nstep 2 rho_circ=0 budget=0 f_euler=-2\n\
         initial_rho_circ=2 steps=2 mu_term=0 remaining_curves=0\n"
    );
}

#[test]
fn theta_norm_and_bounds() {
    let out = cli(&["norm", &fixture("theta22.graph"), "--fiber", "1/2"]);
    assert_eq!(out.stdout, "class=e3=1\nnorm=4\na_e1=1\na_e2=1\n");
    let out = cli(&["norm", &fixture("theta22.graph"), "--class", "e3=1,e1=-2"]);
    assert!(out.stdout.contains("norm=4\n"));
    let out = cli(&["bound", &fixture("theta22.graph"), "--fiber", "1/2", "--rho", "1"]);
    assert!(out.stdout.contains("thurston_bound=2 balanced=true fallback=false\n"));
    assert!(out.stdout.contains("per_repeller=2\n"));
    let out = cli(&["bound", &fixture("theta22.graph"), "--fiber", "1/2", "--rho", "0"]);
    assert!(out.stdout.contains("thurston_bound=4 "), "{}", out.stdout);
}

#[test]
fn harmonic_trees_integral() {
    let out = cli(&["harmonic", &fixture("t2.graph")]);
    assert_eq!(out.stdout, "calabi=true\nattractors=e_ba\nrepellers=e_ab\npositive_kernel=none box=4\n");
    let out = cli(&["trees", &fixture("theta22.graph")]);
    assert!(out.stdout.ends_with("cover=true\n"));
    assert_eq!(out.stdout.matches("tree root=e3").count(), 2);
    let out = cli(&["integral", &fixture("theta22.graph")]);
    assert_eq!(out.stdout, "cycle 0 +e2,-e1 A=0 R=0\ncycle 1 +e3,+e1 A=1 R=1\n");
    let out = cli(&["integral", &fixture("theta22.graph"), "--cycle", "+e3,-e1"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error: cycle-not-closed"));
}

#[test]
fn invariants_line() {
    let out = cli(&["invariants", &fixture("theta22.graph")]);
    assert_eq!(out.stdout, "var=2 osc=2 Var=2 chi_minus_FR=6 chi_minus_FA=4 attractors=2 repellers=1 nonbubbling=2\n");
}

#[test]
fn surgery_keeps_repellers() {
    let out = cli(&["surgery1", &fixture("twin.graph"), "--src", "e_ab@1/2", "--dst", "e_ab'@5/8"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("repeller_delta=0\n"));
    assert!(out.stdout.contains("edge handle tail=hq head=hp genus=0 boundary=0\n"));
    let out = cli(&["surgery1", &fixture("t2.graph"), "--src", "e_ab@3/8", "--dst", "e_ab@5/8"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error: repeller-created"));
    let out = cli(&["surgery1", &fixture("twin.graph"), "--src", "e_ab@5/8", "--dst", "e_ab'@1/2"]);
    assert!(out.stderr.starts_with("error: non-positive-handle"));
    let out = cli(&["surgery1", &fixture("twin.graph"), "--src", "e_ab@1/2", "--dst", "e_ab'"]);
    assert_eq!(out.code, 2);
}

#[test]
fn tangency_flags() {
    let out = cli(&["tangency", "--counts", "0,2,3,1", "--var", "2", "--rho", "1"]);
    assert_eq!(
        out.stdout,
        "I_plus=-2 I_minus=2 chi=0 pairing=-4 chi_minus=0\n\
         first=false second=false third=true feasible=false signs_agree=false\n"
    );
    assert_eq!(cli(&["tangency", "--counts", "0,-2,3,1", "--var", "2", "--rho", "1"]).code, 2);
    assert_eq!(cli(&["tangency", "--counts", "0,2,3", "--var", "2", "--rho", "1"]).code, 2);
}

#[test]
fn dot_export() {
    let out = cli(&["export-dot", &fixture("t2.graph")]);
    assert!(out.stdout.starts_with("digraph \"T2\" {\n"));
    assert_eq!(out.stdout.matches("shape=diamond").count(), 2);
    assert!(out.stdout.contains("\"a\" -> \"e_ab:R\" [label=\"g=3,b=0,chi-=4\"];"));
}

#[test]
fn error_codes() {
    let out = cli(&["norm", &fixture("t2.graph"), "--class", "zz=1"]);
    assert_eq!((out.code, out.stderr.as_str()), (1, "error: unknown-edge: unknown edge zz\n"));
    assert_eq!(cli(&["validate", &fixture("missing.graph")]).code, 1);
    assert_eq!(cli(&["bogus"]).code, 2);
    assert_eq!(cli(&["norm", &fixture("t2.graph")]).code, 2);
    assert_eq!(cli(&["twister", "--n", "1"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn json_mirror() {
    let out = cli(&["--json", "twister", "--n", "1", "--k", "3", "--thurston", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["genus_arc_ba"], 4);
    assert_eq!(v["genus_arc_ab"], 5);
    assert_eq!(v["Var"], 2);
    assert_eq!(v["rho_lower_bound"], "2");
    let out = cli(&["twist", &fixture("meridians.curves"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["code"], "cocycle-violation");
    for args in [
        vec!["validate", "t2.graph"],
        vec!["invariants", "theta22.graph"],
        vec!["harmonic", "t2.graph"],
        vec!["trees", "theta22.graph"],
        vec!["integral", "theta22.graph"],
        vec!["export-dot", "t2.graph"],
    ] {
        let out = cli(&["--json", args[0], &fixture(args[1])]);
        assert_eq!(out.code, 0);
        serde_json::from_str::<serde_json::Value>(&out.stdout).unwrap();
    }
}

#[test]
fn reports_are_deterministic() {
    let runs = [
        vec!["bound".to_string(), fixture("theta22.graph"), "--fiber".into(), "1/2".into(), "--rho".into(), "2".into()],
        vec!["trees".to_string(), fixture("theta22.graph")],
        vec!["resolve".to_string(), fixture("ladder.curves"), "--trace".into()],
    ];
    for args in runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(cli(&a), cli(&a));
    }
}

#[test]
fn random_graphs_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let g = sweep_graph(&mut rng, &SweepParams::default());
        assert_eq!(parse_graph(&print_graph(&g)).unwrap(), g);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fibergraph");
    let out = Command::new(bin).args(["validate", &fixture("t2.graph")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "OK\n");
    let out = Command::new(bin).args(["twist", &fixture("meridians.curves")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: cocycle-violation"));
    let out = Command::new(bin).args(["validate", &fixture("extremum.graph")]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
