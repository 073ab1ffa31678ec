use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;

use denotational_contracts::lang::{parse_program, DomainConfig, State, StateSpace, Stmt};
use denotational_contracts::metacheck::gen::{
    gen_env, gen_program_in, gen_space, CaseGenConfig, CaseRng, ProgramShape,
};
use denotational_contracts::oracle::{run_operational, RunResult};
use denotational_contracts::semantics::{
    denote_stmt, standard_denotation, xi_step, Denotation, ProcEnv,
};

fn relation(n: usize) -> impl Strategy<Value = Denotation> {
    prop::collection::vec((0..n as u32, 0..n as u32), 0..3 * n)
        .prop_map(move |pairs| Denotation::from_pairs(n, pairs))
}

fn three_relations() -> impl Strategy<Value = (Denotation, Denotation, Denotation)> {
    (1usize..7).prop_flat_map(|n| (relation(n), relation(n), relation(n)))
}

fn space(lo: i64, width: i64, vars: usize) -> Arc<StateSpace> {
    let names = ["x", "y", "z"];
    StateSpace::new(DomainConfig::new(lo, lo + width - 1, names[..vars].iter().copied()).unwrap())
        .unwrap()
}

fn closed_program(seed: u64) -> (Arc<StateSpace>, denotational_contracts::lang::Program) {
    let cfg = CaseGenConfig::default();
    let mut rng = CaseRng::seed_from_u64(seed);
    let sp = gen_space(&mut rng, cfg.max_domain_size, cfg.max_vars);
    let p = gen_program_in(
        &mut rng,
        &cfg,
        &sp,
        ProgramShape {
            procs: 2,
            externals: 0,
            self_calls: true,
        },
    );
    (sp, p)
}

proptest! {
    #[test]
    fn relational_composition_is_associative_with_identity((a, b, c) in three_relations()) {
        let n = a.states();
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert_eq!(Denotation::identity(n).then(&a), a.clone());
        prop_assert_eq!(a.then(&Denotation::identity(n)), a.clone());
        prop_assert!(Denotation::empty(n).then(&a).is_empty());
    }

    #[test]
    fn composition_distributes_over_union((a, b, c) in three_relations()) {
        prop_assert_eq!(a.then(&b.union(&c)), a.then(&b).union(&a.then(&c)));
        prop_assert_eq!(b.union(&c).then(&a), b.then(&a).union(&c.then(&a)));
    }

    #[test]
    fn subset_agrees_with_union_and_intersection((a, b, _c) in three_relations()) {
        prop_assert_eq!(a.is_subset(&b), a.union(&b) == b);
        prop_assert_eq!(a.is_subset(&b), a.intersection(&b) == a);
        prop_assert!(a.difference(&b).intersection(&b).is_empty());
        prop_assert_eq!(a.difference(&b).union(&a.intersection(&b)), a.clone());
    }

    #[test]
    fn state_ids_round_trip(lo in -3i64..3, width in 1i64..5, vars in 1usize..4) {
        let sp = space(lo, width, vars);
        prop_assert_eq!(sp.len() as i64, width.pow(vars as u32));
        for id in sp.ids() {
            let s = sp.decode(id);
            prop_assert_eq!(sp.encode(&s), Some(id));
            let json = sp.state_to_json(id);
            prop_assert_eq!(sp.state_from_json(&json).unwrap(), id);
        }
        prop_assert_eq!(sp.encode(&State { values: vec![lo + width; vars] }), None);
    }

    #[test]
    fn environments_form_a_lattice(seed in any::<u64>()) {
        let mut rng = CaseRng::seed_from_u64(seed);
        let sp = gen_space(&mut rng, 3, 2);
        let names: Vec<String> = vec!["a".into(), "b".into()];
        let (x, y) = (gen_env(&mut rng, &sp, &names), gen_env(&mut rng, &sp, &names));
        let (j, m) = (x.lub(&y).unwrap(), x.glb(&y).unwrap());
        prop_assert!(x.leq(&j).unwrap() && y.leq(&j).unwrap());
        prop_assert!(m.leq(&x).unwrap() && m.leq(&y).unwrap());
        prop_assert_eq!(x.lub(&m).unwrap(), x.clone());
        prop_assert_eq!(x.glb(&j).unwrap(), x.clone());
        prop_assert!(x.leq(&ProcEnv::top(&sp, names.iter().cloned())).unwrap());
    }

    #[test]
    fn printed_programs_parse_back(seed in any::<u64>()) {
        let (_, p) = closed_program(seed);
        prop_assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn standard_denotation_is_a_fixed_point(seed in any::<u64>()) {
        let (sp, p) = closed_program(seed);
        let empty = ProcEnv::empty(&sp);
        let rho = standard_denotation(&p, &empty).unwrap();
        prop_assert_eq!(xi_step(&p.decls, &empty, &rho).unwrap(), rho);
    }

    #[test]
    fn programs_are_deterministic_and_match_single_runs(seed in any::<u64>()) {
        let (sp, p) = closed_program(seed);
        let rho = standard_denotation(&p, &ProcEnv::empty(&sp)).unwrap();
        let d = rho.get("p0").unwrap();
        prop_assert!(d.is_functional());
        for s in sp.ids() {
            let run = run_operational(&p, "p0", sp.config(), &sp.decode(s)).unwrap();
            let successors: Vec<u32> = d.successors(s).collect();
            match run {
                RunResult::Terminated(t) => prop_assert_eq!(successors, vec![sp.encode(&t).unwrap()]),
                RunResult::Diverges => prop_assert!(successors.is_empty()),
            }
        }
    }

    #[test]
    fn sequencing_and_branching_identities(seed in any::<u64>()) {
        let (sp, p) = closed_program(seed);
        let (a, b) = (p.decls[0].body.clone(), p.decls[1].body.clone());
        let empty = ProcEnv::empty(&sp);
        let rho = standard_denotation(&p, &empty).unwrap();
        let den = |s: &Stmt| denote_stmt(s, &empty, &rho).unwrap();
        prop_assert_eq!(den(&Stmt::seq(a.clone(), Stmt::Skip)), den(&a));
        prop_assert_eq!(den(&Stmt::seq(a.clone(), b.clone())), den(&a).then(&den(&b)));
        let t = denotational_contracts::lang::BExp::True;
        prop_assert_eq!(den(&Stmt::if_(t, a.clone(), b.clone())), den(&a));
        prop_assert_eq!(den(&Stmt::Call("p0".into())), rho.get("p0").unwrap().clone());
    }
}
