mod support;

use proptest::prelude::*;
use support::props;

fn run(check: props::Check) -> Result<(), TestCaseError> {
    check.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        run(props::ring_axioms(seed))?;
    }

    #[test]
    fn divisions(seed in any::<u64>()) {
        run(props::divisions_match_brute_force(seed))?;
    }

    #[test]
    fn leading_monomial(seed in any::<u64>()) {
        run(props::leading_monomial_multiplicative(seed))?;
    }

    #[test]
    fn signatures_agree_with_enumeration(seed in any::<u64>()) {
        run(props::signature_matches_path_enumeration(seed))?;
    }

    #[test]
    fn sum_law(seed in any::<u64>()) {
        run(props::sum_law(seed))?;
    }

    #[test]
    fn product_law(seed in any::<u64>()) {
        run(props::product_law(seed))?;
    }

    #[test]
    fn rewriting_step(seed in any::<u64>()) {
        run(props::rewriting_step_closure(seed))?;
    }

    #[test]
    fn reduction(seed in any::<u64>()) {
        run(props::reduction_laws(seed))?;
    }

    #[test]
    fn product_realization(seed in any::<u64>()) {
        run(props::product_realization_law(seed))?;
    }

    #[test]
    fn realization_is_linear(seed in any::<u64>()) {
        run(props::realization_linearity(seed))?;
    }

    #[test]
    fn certificate_round_trip(seed in any::<u64>()) {
        run(props::certificate_round_trip(seed))?;
    }

    #[test]
    fn q_consequence(seed in any::<u64>()) {
        run(props::q_consequence_verifies(seed))?;
    }

    #[test]
    fn display_round_trip(seed in any::<u64>()) {
        run(props::display_parse_round_trip(seed))?;
    }

    #[test]
    fn parser_total(seed in any::<u64>()) {
        run(props::parser_never_panics(seed))?;
    }

    #[test]
    fn inner_inverse_instantiation(seed in any::<u64>()) {
        run(props::inner_inverse_instantiation(seed))?;
    }

    #[test]
    fn oracle_soundness(seed in any::<u64>()) {
        run(props::oracle_soundness(seed))?;
    }
}

#[test]
fn oracle_agreement_sample() {
    for seed in 0..40 {
        props::oracle_instance(seed).unwrap();
    }
}

