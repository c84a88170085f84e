use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn reqont(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reqont"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs with `--report` into a temporary file and returns the parsed report.
fn with_report(args: &[&str]) -> (Output, serde_json::Value, String) {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--report", report.to_str().unwrap()]);
    let out = reqont(&all);
    let text = fs::read_to_string(&report).expect("report written");
    (out, serde_json::from_str(&text).unwrap(), text)
}

#[test]
fn check_valid_fixture() {
    let (out, report, _) = with_report(&["check", path(&fixture("flight_booking.req"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(report["version"], "1");
    assert_eq!(report["command"], "check");
    assert_eq!(report["diagnostics"].as_array().unwrap().len(), 0);
}

#[test]
fn check_syntax_error_has_span() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.req");
    fs::write(&file, "goal g1 { holds: a }\nrule r1 a -> b\n").unwrap();
    let (out, report, _) = with_report(&["check", file.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let d = &report["diagnostics"][0];
    assert_eq!(d["severity"], "error");
    assert_eq!(d["span"]["line"], 2);
    assert!(stderr(&out).contains("bad.req:2:"));
}

#[test]
fn missing_file_is_an_io_failure() {
    let (out, report, _) = with_report(&["check", "/definitely/not/here.req"]);
    assert_eq!(code(&out), 2);
    assert_eq!(report["diagnostics"][0]["code"], "io.read");
    for cmd in [
        vec!["solve", "/nope.req"],
        vec!["classify", "/nope.utt"],
        vec!["explain", "/nope.req", "--query", "a"],
    ] {
        assert_eq!(code(&reqont(&cmd)), 2, "{cmd:?}");
    }
}

#[test]
fn approx_threshold_flag_is_applied() {
    let file = fixture("flight_booking.req");
    assert_eq!(code(&reqont(&["check", path(&file)])), 0);
    let out = reqont(&["--approx-threshold", "0.9", "check", path(&file)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("approx.insufficient_correlation"));
}

#[test]
fn classify_flight_booking_utterances() {
    let (out, report, _) = with_report(&[
        "classify",
        path(&fixture("flight_booking.utt")),
        "--registry",
        path(&fixture("flight_booking_registry.req")),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let kinds: Vec<(String, String)> = report["classifications"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["utterance"].as_str().unwrap().to_string(),
                c["instance"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let want = [
        ("ex1", "assumption"),
        ("ex2", "goal"),
        ("ex3", "plan"),
        ("ex4", "evaluation"),
        ("ex5", "assumption"),
        ("ex6", "goal"),
        ("ex7", "qc"),
        ("ex8", "softgoal"),
        ("ex9", "evaluation"),
        ("ex10", "preference"),
        ("ex11", "evaluation"),
        ("ex12", "preference"),
        ("ex13", "preference"),
        ("ex14", "preference"),
        ("ex15", "preference"),
    ];
    let want: Vec<(String, String)> = want.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    assert_eq!(kinds, want);
    let skeleton = stdout(&out);
    assert!(skeleton.starts_with("// reqont model v1"));
    assert!(skeleton.contains("softgoal ex8 "));

    // the skeleton is itself a checkable model
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("skeleton.req");
    fs::write(&file, skeleton).unwrap();
    assert_eq!(code(&reqont(&["check", file.to_str().unwrap()])), 0);
}

#[test]
fn classify_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.utt");
    fs::write(&file, "").unwrap();
    let out = reqont(&["classify", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "// reqont model v1\n");
}

#[test]
fn classify_mixed_order_fails() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("mixed.utt");
    fs::write(
        &file,
        "utterance u1 force directive { holds: booked }\n\
         utterance u2 force commissive { holds: confirmed }\n\
         utterance u3 force expressive { prefer: u1 > u2 }\n",
    )
    .unwrap();
    let (out, report, _) = with_report(&["classify", file.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let d = &report["diagnostics"][0];
    assert_eq!(d["code"], "attitude.mixed_order");
    assert_eq!(d["subject"], "u3");
    assert_eq!(d["span"]["line"], 3);
}

#[test]
fn solve_flight_booking() {
    let (out, report, _) = with_report(&["solve", path(&fixture("flight_booking.req")), "--all-solutions"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let solutions = report["solutions"].as_array().unwrap();
    assert_eq!(solutions.len(), 1);
    let plans = solutions[0]["plans"].as_array().unwrap();
    assert!(plans.contains(&"p_ticket_mailed".into()));
    assert!(solutions[0]["goals"].as_array().unwrap().contains(&"g_paper".into()));
    assert_eq!(solutions[0]["verdicts"].as_array().unwrap().len(), 5);
    assert_eq!(report["exhaustive"], true);
    assert_eq!(report["stats"]["examined"], 64);
    assert!(report["stats"]["dominated"].as_u64().unwrap() > 0);
    assert!(!report["effective_preferences"]
        .as_array()
        .unwrap()
        .contains(&"ex14".into()));
}

#[test]
fn report_is_byte_stable_and_does_not_change_verdicts() {
    let args = ["solve", "--all-solutions"];
    let file = fixture("flight_booking.req");
    let mut all = args.to_vec();
    all.push(path(&file));
    let (a, _, ta) = with_report(&all);
    let (b, _, tb) = with_report(&all);
    assert_eq!(ta, tb);
    let plain = reqont(&all);
    assert_eq!(code(&plain), code(&a));
    assert_eq!(stdout(&plain), stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn solve_uncovered_softgoal() {
    let (out, report, _) = with_report(&["solve", path(&fixture("uncovered_softgoal.req"))]);
    assert_eq!(code(&out), 1);
    let codes: Vec<&str> = report["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["code"].as_str().unwrap())
        .collect();
    assert!(codes.contains(&"cond4.uncovered_softgoal"), "{codes:?}");
    assert!(stderr(&out).contains("s_convenient"));
}

#[test]
fn solve_invalid_model() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.req");
    fs::write(&file, "evaluate e1: favor ghost\n").unwrap();
    assert_eq!(code(&reqont(&["solve", file.to_str().unwrap()])), 1);
}

#[test]
fn solve_budget_exceeded_without_solution() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("budget.req");
    // the one feasible candidate has the fewest optional elements, so it
    // comes last
    fs::write(
        &file,
        "plan p { holds: a }\nassumption k1 optional { holds: b }\nassumption k2 optional { holds: c }\n\
         rule r1: a -> ~b\nrule r2: a -> ~c\n",
    )
    .unwrap();
    let f = file.to_str().unwrap();
    let (out, report, _) = with_report(&["solve", f, "--max-candidates", "2"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert_eq!(report["exhaustive"], false);
    assert_eq!(code(&reqont(&["solve", f])), 0);
}

#[test]
fn solve_classical_mode() {
    let (out, report, _) = with_report(&["solve", "--zj", path(&fixture("classical.req"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(report["classical_entailment"], true);
    let out = reqont(&["solve", "--zj", path(&fixture("flight_booking.req"))]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("zj.not_applicable"));
}

#[test]
fn explain_fact() {
    let out = reqont(&["explain", path(&fixture("blocked.req")), "--query", "promotion_active"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("argument <{}, promotion_active> [U]"), "{text}");
    assert!(!text.contains("defeated by"));
    assert!(text.trim_end().ends_with("promotion_active: warranted"));
}

#[test]
fn explain_blocked_literal() {
    let (out, report, _) = with_report(&["explain", path(&fixture("blocked.req")), "--query", "business_cheaper"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("defeated by <{r_not_cheap}, ~business_cheaper>"), "{text}");
    assert!(text.trim_end().ends_with("business_cheaper: not_warranted"));
    assert_eq!(report["explanation"]["verdict"], "not_warranted");
    // the defeat is symmetric
    let out = reqont(&["explain", path(&fixture("blocked.req")), "--query", "~business_cheaper"]);
    assert!(stdout(&out).contains("defeated by <{r_cheap}, business_cheaper>"));
}

#[test]
fn explain_under_a_given_candidate() {
    let sig = "k:ex5;g:ex2,ex6,g_paper;q:ex7,q_single_screen,q_split_form;s:ex8,s_speed;\
               p:ex3,p_person_confirms,p_ticket_mailed,p_wizard";
    let out = reqont(&[
        "explain",
        path(&fixture("flight_booking.req")),
        "--query",
        "confirmation_sent_quickly",
        "--candidate",
        sig,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("no argument for `confirmation_sent_quickly`"));
    assert!(stdout(&out).contains("not_warranted"));
}

#[test]
fn explain_unknown_atom() {
    let out = reqont(&["explain", path(&fixture("blocked.req")), "--query", "unicorns"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("query.unknown_atom"));
}
