use super::*;

const EXAMPLE1: &str = include_str!("../../fixtures/example1.cfg");
const EXAMPLE2: &str = include_str!("../../fixtures/example2.cfg");
const DIRICHLET: &str = include_str!("../../fixtures/dirichlet.cfg");

fn report(text: &str, cmd: Command, threads: usize) -> Report {
    let (doc, resolved) = ConfigDocument::load(text).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| run(cmd, &doc, &resolved))
}

#[test]
fn json_is_identical_across_thread_counts() {
    for cmd in [Command::Spectrum, Command::Classify, Command::Condition, Command::Verdict, Command::Asymptotics] {
        let one = report(EXAMPLE2, cmd, 1).to_json();
        let three = report(EXAMPLE2, cmd, 3).to_json();
        assert_eq!(one, three, "{cmd:?}");
    }
}

#[test]
fn verdict_rows_of_the_fixtures() {
    let r = report(EXAMPLE1, Command::Verdict, 1);
    let Section::Verdict(rows) = &r.section else { panic!() };
    let outcomes: Vec<_> = rows
        .iter()
        .map(|e| match &e.result {
            Entry::Ok(v) => (e.operator, v.outcome),
            Entry::Error(m) => panic!("{m}"),
        })
        .collect();
    assert_eq!(outcomes, vec![(OperatorTag::L, Outcome::Fredholm), (OperatorTag::LB, Outcome::Fredholm)]);
    assert_eq!(r.exit_code(), 0);

    let r = report(EXAMPLE2, Command::Verdict, 1);
    let Section::Verdict(rows) = &r.section else { panic!() };
    let Entry::Ok(lb) = &rows.last().unwrap().result else { panic!() };
    assert_eq!((lb.operator, lb.outcome), (OperatorTag::LB, Outcome::NotFredholm));
}

#[test]
fn missing_assumption_is_an_error_exit() {
    // b1 + b2 = 0 puts the proper eigenvalue -i on the line for l = 0
    let text = EXAMPLE1
        .replacen("coefficient = \"1\"", "coefficient = \"-1\"", 2)
        .replacen("coefficient = \"-1\"", "coefficient = \"1\"", 1)
        .replace("consistency = true", "consistency = false");
    let r = report(&text, Command::Verdict, 1);
    let Section::Verdict(rows) = &r.section else { panic!() };
    assert!(matches!(&rows.last().unwrap().result, Entry::Error(m) if m.contains("consistency")));
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn indeterminate_exit_code() {
    let text = EXAMPLE1.replacen("omega_shift = \"-pi/2\", op = { \"0,0\" = \"1\" }, coefficient = \"1\"",
        "omega_shift = \"-pi/2\", op = { \"0,0\" = \"1\" }, coefficient = \"-999999999/1000000000\"", 1);
    let text = format!("{text}\n[analysis.tolerances]\ndelta_line = 1e-10\n");
    let r = report(&text, Command::Verdict, 1);
    let Section::Verdict(rows) = &r.section else { panic!() };
    let Entry::Ok(l) = &rows[0].result else { panic!() };
    assert_eq!(l.outcome, Outcome::Indeterminate);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn condition_cross_check_is_consistent() {
    for text in [EXAMPLE1, EXAMPLE2] {
        let r = report(text, Command::Condition, 1);
        let Section::Condition(rows) = &r.section else { panic!() };
        for row in rows {
            let Entry::Ok(c) = row else { panic!() };
            assert!(c.consistent);
        }
    }
}

#[test]
fn asymptotics_text_and_errors() {
    let r = report(EXAMPLE1, Command::Asymptotics, 1);
    let text = render_text(&r);
    assert!(text.contains("s = 0..=1"), "{text}");
    assert_eq!(r.exit_code(), 0);

    let r = report(DIRICHLET, Command::Asymptotics, 1);
    assert_eq!(r.exit_code(), 1);
    assert!(render_text(&r).contains("bottom line"));

    let smooth = DIRICHLET.replace("half_opening = \"pi/2\"", "half_opening = \"pi/5\"").replace("l1 = 2", "l1 = 1");
    let r = report(&smooth, Command::Asymptotics, 1);
    assert!(render_text(&r).contains("no singular terms"));
}

#[test]
fn json_carries_provenance() {
    let r = report(EXAMPLE2, Command::Classify, 1);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["report_schema_version"], 1);
    assert_eq!(v["config_schema_version"], 1);
    assert_eq!(v["tolerances"]["tol_chain"], 1e-8);
    assert!(v["tolerances_used"].as_array().unwrap().iter().any(|t| t == "tol_chain"));
    assert_eq!(v["section"]["command"], "classify");
    let orbit = &v["section"]["orbits"][0]["ok"];
    assert_eq!(orbit["critical_is_eigenvalue"], true);
    // -2i is double with two eigenvectors and no associates
    assert_eq!(orbit["classifications"][0]["classification"]["kind"], "Proper");
}
