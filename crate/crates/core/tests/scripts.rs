mod common;

use common::*;
use proptest::prelude::*;
use splitlp::interp::{parse, run_script, Interpreter};
use splitlp::rules::FactDatabase;

const SCRIPTS: [&str; 4] = ["no_31_13_10.proof", "no_29_11_10.proof", "classify_21_5_10.proof", "codes_24_7_10.proof"];

#[test]
fn data_scripts_round_trip() {
    for name in SCRIPTS {
        let script = parse(&read_data(name)).unwrap();
        let printed = script.to_string();
        assert_eq!(parse(&printed).unwrap(), script, "{name}");
        assert_eq!(parse(&printed).unwrap().to_string(), printed, "{name}");
    }
}

fn outcomes(report: &splitlp::interp::ProofReport) -> Vec<String> {
    report.outcomes.iter().map(ToString::to_string).collect()
}

#[test]
fn nonexistence_of_31_13_10() {
    let report = run_data_script("no_31_13_10.proof");
    assert!(report.success(), "{report}");
    assert!(outcomes(&report).contains(&"no [31,13,10]".to_string()), "{report}");
    assert_eq!(report.axiom_census(), 1, "{report}");
    assert!(report.certificates.len() >= lp_steps("no_31_13_10.proof"));
    assert!(recheck_certificates(&report));
}

#[test]
fn nonexistence_of_29_11_10_with_mu5_zero() {
    let report = run_data_script("no_29_11_10.proof");
    assert!(report.success(), "{report}");
    assert!(outcomes(&report).contains(&"no [29,11,10_2]{mu5 = 0}".to_string()), "{report}");
    assert_eq!(report.axiom_census(), 1, "{report}");
    assert!(report.certificates.len() >= lp_steps("no_29_11_10.proof"));
    assert!(recheck_certificates(&report));
    assert!(report.database.to_text().contains("no [29,11,10_2]{mu5 = 0}"));
}

fn run(text: &str) -> splitlp::interp::ProofReport {
    run_script(text, FactDatabase::new(), Default::default(), true).unwrap()
}

#[test]
fn empty_script_succeeds() {
    let report = run("");
    assert!(report.success());
    assert!(report.outcomes.is_empty());
}

#[test]
fn griesmer_violation_closes_the_base() {
    let report = run("type [8,2,6];");
    assert!(report.success(), "{report}");
    assert_eq!(outcomes(&report), vec!["no [8,2,6]".to_string()]);
}

#[test]
fn lp_alone_refutes_a_small_type() {
    let report = run("type [8,2,5]{y5 = 0}; via lp [base] = ;");
    assert!(report.success(), "{report}");
    assert_eq!(outcomes(&report), vec!["no [8,2,5]{y5 = 0}".to_string()]);
    assert_eq!(report.certificates.len(), 1);
    assert!(recheck_certificates(&report));
}

#[test]
fn commands_need_a_type() {
    let report = run("show y10 != 0;");
    assert_eq!(report.failures.len(), 1);
}

#[test]
fn unknown_labels_are_reported() {
    let report = run("type [12,3,6]; via lp [nowhere] = ;");
    assert_eq!(report.failures.len(), 1, "{report}");
}

#[test]
fn a_feasible_type_is_not_refuted() {
    // The [7,4,3] Hamming code exists.
    let report = run("type [7,4,3]; via lp [base] = ;");
    assert!(!report.success());
    assert!(report.outcomes.is_empty());
}

#[test]
fn bad_automorphisms_are_rejected() {
    let text =
        "type [4,2,2]; [c] config 1,1,1,1 : {1100,0011}; automorphism 2,1,4,3; automorphism 1,3,2,4; group size = 2;";
    let report = run(text);
    assert_eq!(report.failures.len(), 1, "{report}");
    assert!(report.failures[0].command.contains("1,3,2,4"));
}

#[test]
fn stepping_stops_at_the_first_error() {
    let script = parse("show y2 != 0; type [8,2,6];").unwrap();
    let mut interp = Interpreter::new(FactDatabase::new(), Default::default());
    interp.run(&script, false);
    let report = interp.report();
    assert_eq!(report.failures.len(), 1);
    assert_eq!(report.executed, 1);
}

fn claim() -> impl Strategy<Value = String> {
    let var = prop_oneof![
        (0usize..40).prop_map(|w| format!("y{w}")),
        (0usize..40).prop_map(|w| format!("mu{w}")),
        prop::collection::vec(0usize..12, 1..5).prop_map(|a| {
            let parts: Vec<String> = a.iter().map(ToString::to_string).collect();
            format!("x_{}", parts.join("_"))
        }),
    ];
    (var, prop_oneof![Just("="), Just("!="), Just(">=")], 0u64..9).prop_map(|(v, r, c)| format!("{v} {r} {c}"))
}

fn command() -> impl Strategy<Value = String> {
    let pattern = |r: usize| {
        prop::collection::vec(any::<bool>(), r)
            .prop_map(|b| b.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>())
    };
    let config = (prop::collection::vec(1usize..6, 1..5), prop::option::of("[a-z][a-z0-9]{0,3}")).prop_flat_map(
        move |(parts, label)| {
            let r = parts.len();
            (
                Just(parts),
                Just(label),
                prop::collection::vec(pattern(r), 0..3),
                prop::collection::vec(pattern(r), 0..2),
                prop::collection::vec(claim(), 0..3),
            )
                .prop_map(|(parts, label, rows, dual, claims)| {
                    let p: Vec<String> = parts.iter().map(ToString::to_string).collect();
                    let prefix = label.map(|l| format!("[{l}] ")).unwrap_or_default();
                    format!(
                        "{prefix}config {} : {{{}}} : {{{}}} : {{{}}};",
                        p.join(","),
                        rows.join(","),
                        dual.join(","),
                        claims.join(",")
                    )
                })
        },
    );
    prop_oneof![
        (12usize..40, 1usize..10, 1usize..12, any::<bool>())
            .prop_map(|(n, k, d, e)| format!("type [{n},{k},{d}{}];", if e { "_2" } else { "" })),
        (1usize..9).prop_map(|m| format!("infer dual min >= {m};")),
        claim().prop_map(|c| format!("infer {c};")),
        claim().prop_map(|c| format!("show {c};")),
        config,
        prop::collection::vec(1usize..30, 1..4).prop_map(|w| {
            let s: Vec<String> = w.iter().map(ToString::to_string).collect();
            format!("kill weights {};", s.join(","))
        }),
        (12usize..30, 1usize..10, 1usize..12).prop_map(|(n, k, d)| format!("no [{n},{k},{d}];")),
        Just("via lp [current] = ;".to_string()),
        Just("via variable split [base] = [a] or [b];".to_string()),
        Just("via nothing [x] = [a];".to_string()),
        (1u128..5000).prop_map(|s| format!("group size = {s};")),
        "[a-z ]{0,12}".prop_map(|t| format!("(*{t}*);")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printed_scripts_parse_back(cmds in prop::collection::vec(command(), 0..8)) {
        let text = cmds.join("\n");
        let script = parse(&text).unwrap();
        let printed = script.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), script);
    }
}
