//! Compares the fixed-point semantics with a step-by-step interpreter on
//! randomly generated closed programs.

use rand::Rng;

use denotational_contracts::metacheck::gen::{gen_program_in, gen_space, ProgramShape};
use denotational_contracts::metacheck::CaseGenConfig;
use denotational_contracts::oracle::{oracle_denotation, run_operational, RunResult};
use denotational_contracts::semantics::{standard_denotation, ProcEnv};

fn main() -> denotational_contracts::Result<()> {
    let cfg = CaseGenConfig::default();
    let mut divergent = 0;
    for i in 0..200 {
        let (_, mut rng) = cfg.rng_for("oracle-example", i);
        let space = gen_space(&mut rng, cfg.max_domain_size, cfg.max_vars);
        let procs = rng.gen_range(1..=cfg.max_procs);
        let shape = ProgramShape {
            procs,
            externals: 0,
            self_calls: true,
        };
        let program = gen_program_in(&mut rng, &cfg, &space, shape);
        let rho = standard_denotation(&program, &ProcEnv::empty(&space))?;
        for d in &program.decls {
            assert_eq!(
                rho.get(&d.name),
                Some(&oracle_denotation(&program, &d.name, &space)?)
            );
        }
        if i == 0 {
            println!("first program:\n{program}");
            for s in space.ids() {
                let run = run_operational(&program, "p0", space.config(), &space.decode(s))?;
                let shown = match run {
                    RunResult::Terminated(t) => format!("{:?}", t.values),
                    RunResult::Diverges => "diverges".into(),
                };
                println!("  {} => {shown}", space.format_state(s));
            }
        }
        divergent += space
            .ids()
            .filter(|&s| rho.get("p0").unwrap().successors(s).next().is_none())
            .count();
    }
    println!("200 programs agree; {divergent} start states of p0 diverge or leave the domain");
    Ok(())
}
