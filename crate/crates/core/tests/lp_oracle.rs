mod common;

use common::*;
use proptest::prelude::*;
use splitlp::lpcert::{
    certificate_to_text, parse_certificate, parse_system, prove_infeasible, system_to_text, verify_farkas,
    ConstraintSystem, RetryPolicy, RowTag, Sense,
};

fn audit(cs: &ConstraintSystem) -> bool {
    audit_system(cs).unwrap()
}

fn system_strategy() -> impl Strategy<Value = ConstraintSystem> {
    (1usize..=4, 1usize..=7, any::<bool>()).prop_flat_map(|(nv, nr, nonneg)| {
        let row = (prop::collection::vec(-3i64..=3, nv), any::<bool>(), -4i64..=4);
        prop::collection::vec(row, nr).prop_map(move |rows| {
            let mut cs = ConstraintSystem::new((0..nv).map(|j| format!("v{j}")).collect());
            for (i, (coeffs, eq, rhs)) in rows.into_iter().enumerate() {
                let sense = if eq { Sense::Eq } else { Sense::Ge };
                cs.push(coeffs, sense, rhs, RowTag::new(format!("r{i}")).unwrap()).unwrap();
            }
            if nonneg {
                cs.push_nonnegativity();
            }
            cs
        })
    })
}

#[test]
fn split_systems_agree_with_elimination() {
    let systems = small_split_systems();
    assert!(systems.len() > 50);
    let infeasible = systems.iter().filter(|(_, cs)| audit(cs)).count();
    assert!(infeasible > 0 && infeasible < systems.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn random_systems_agree_with_elimination(cs in system_strategy()) {
        audit(&cs);
    }

    #[test]
    fn system_text_round_trips(cs in system_strategy()) {
        prop_assert_eq!(parse_system(&system_to_text(&cs)).unwrap(), cs);
    }
}

#[test]
fn certificate_text_round_trips() {
    for (_, cs) in small_split_systems() {
        let Ok(c) = prove_infeasible(&cs, &RetryPolicy::default()) else { continue };
        let (id, back) = parse_certificate(&certificate_to_text("c7", &c.certificate)).unwrap();
        assert_eq!(id, "c7");
        assert_eq!(back, c.certificate);
        assert!(verify_farkas(&cs, &back).unwrap());
    }
}
