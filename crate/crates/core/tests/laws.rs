use fbetti::asymptotics::{beta_sequence, verify_laws, LawOptions};
use fbetti::fixtures::{quotient, r1, r3, residue_field};
use fbetti::frobenius::{twist_complex, BracketLevel};
use fbetti::homology::{default_degree_bound, degreewise_homology_oracle, homology_length, homology_length_by_series};
use fbetti::onedim::{
    decide_beta_vanishing, random_instance, ring_minimal_primes, syzygy_length_survey, tor_vanishing_vs_minimal_primes,
};
use fbetti::resolution::resolve;

#[test]
fn homology_matches_degreewise_oracle_on_random_instances() {
    for seed in 0..6 {
        let inst = random_instance(seed, 3, 2, 1).unwrap();
        let res = resolve(&inst.module, 3, true).unwrap();
        for e in 0..=1 {
            let c = twist_complex(&res.complex, BracketLevel::new(3, e).unwrap()).unwrap();
            for i in 0..=2 {
                let exact = homology_length(&c, i).unwrap().expect("finite length Tor");
                let oracle = degreewise_homology_oracle(&c, i, default_degree_bound(&c));
                assert!(oracle.stabilized, "seed {seed}");
                assert_eq!(exact, oracle.value, "seed {seed} e {e} i {i}");
                assert_eq!(homology_length_by_series(&c, i).unwrap(), Some(exact));
            }
        }
    }
}

#[test]
fn surveys_of_random_instances_have_no_violations() {
    for seed in 100..110 {
        let inst = random_instance(seed, 5, 2, 1).unwrap();
        let s = syzygy_length_survey(&inst.module, 3).unwrap();
        assert!(s.violations().is_empty(), "seed {seed}: {:?}", s.violations());
    }
}

#[test]
fn exact_vanishing_agrees_with_sampled_tor_and_the_estimator() {
    let r = r3(2).unwrap();
    let cases = [(residue_field(&r1(2).unwrap()), 1usize), (quotient(&r, &["x+y"]).unwrap(), 1), (residue_field(&r), 1)];
    for (m, i) in cases {
        let decided = decide_beta_vanishing(&m, i).unwrap();
        let primes = ring_minimal_primes(m.ring()).unwrap();
        let tor = tor_vanishing_vs_minimal_primes(&m, i, &primes, 0..=3).unwrap();
        let est = beta_sequence(&m, i, 1..=4).unwrap();
        assert_eq!(decided, tor.iter().all(|t| t.all_zero()));
        if decided {
            assert!(est.levels.last().unwrap().normalized < fbetti::asymptotics::Rational::new(1, 20));
        } else {
            assert!(est.estimate_f64().unwrap() > 0.1);
        }
    }
}

#[test]
fn duality_holds_on_r3() {
    let r = r3(2).unwrap();
    let opts = LawOptions { indices: vec![0, 1], range: 1..=4, ..LawOptions::default() };
    let report = verify_laws(&residue_field(&r), &opts).unwrap();
    assert!(report.all_passed(), "{report:?}");
}
