//! Assume/guarantee contracts over procedure environments: implementation,
//! environments, refinement, conjunction and composition.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::components::{compose, Component, Interface};
use crate::error::{Error, Result};
use crate::lang::{ContractTable, StateSpace};
use crate::semantics::ProcEnv;

use super::hoare::hoare_denotation;

/// A pair `(assume, guarantee)` of environments over the required and the
/// provided names of its interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenotContract {
    interface: Interface,
    assume: ProcEnv,
    guarantee: ProcEnv,
}

impl DenotContract {
    pub fn new(assume: ProcEnv, guarantee: ProcEnv) -> Result<Self> {
        if !assume.same_space(&guarantee) {
            return Err(Error::DomainMismatch);
        }
        let interface = Interface::new(assume.scope(), guarantee.scope())?;
        Ok(DenotContract {
            interface,
            assume,
            guarantee,
        })
    }

    pub fn interface(&self) -> &Interface {
        &self.interface
    }

    pub fn required(&self) -> &BTreeSet<String> {
        &self.interface.required
    }

    pub fn provided(&self) -> &BTreeSet<String> {
        &self.interface.provided
    }

    pub fn assume(&self) -> &ProcEnv {
        &self.assume
    }

    pub fn guarantee(&self) -> &ProcEnv {
        &self.guarantee
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        self.guarantee.space()
    }

    /// Assumes everything, guarantees nothing.
    pub fn vacuous<I, J, S, T>(space: &Arc<StateSpace>, required: I, provided: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        Self::new(
            ProcEnv::bottom(space, required),
            ProcEnv::top(space, provided),
        )
    }
}

/// The contract of the procedures `provided` abstracted from `table`:
/// each provided name guarantees its Hoare contract and each name in
/// `called` is assumed to satisfy its own.
pub fn abstract_contract_set(
    provided: &BTreeSet<String>,
    called: &BTreeSet<String>,
    table: &ContractTable,
    space: &Arc<StateSpace>,
) -> Result<DenotContract> {
    let lookup = |names: &BTreeSet<String>| -> Result<ProcEnv> {
        let mut env = ProcEnv::empty(space);
        for p in names {
            let c = table
                .get(p)
                .ok_or_else(|| Error::MissingContract(p.clone()))?;
            env.insert(p.clone(), hoare_denotation(c, space)?);
        }
        Ok(env)
    };
    DenotContract::new(lookup(called)?, lookup(provided)?)
}

/// `c_p` with interface `(called, {p})`.
pub fn abstract_contract(
    p: &str,
    table: &ContractTable,
    called: &BTreeSet<String>,
    space: &Arc<StateSpace>,
) -> Result<DenotContract> {
    abstract_contract_set(&[p.to_string()].into(), called, table, space)
}

/// `m ⊨ c`: `P−_c ⊆ P−_m`, `P+_m ⊆ P+_c` and
/// `m(ρ_c− ⊔ ρ⊤ on the extra required names) ⊑ ρ_c+`.
pub fn implements(m: &Component, c: &DenotContract) -> Result<bool> {
    if !c.required().is_subset(m.required()) || !m.provided().is_subset(c.provided()) {
        return Ok(false);
    }
    if m.space().as_ref() != c.space().as_ref() {
        return Err(Error::DomainMismatch);
    }
    let extra = m.required().difference(c.required());
    let input = c.assume.lub(&ProcEnv::top(c.space(), extra.cloned()))?;
    m.apply(&input)?.leq(&c.guarantee)
}

/// The constant map to `ρ_c+`.
pub fn max_implementation(c: &DenotContract) -> Component {
    Component::constant(c.required().iter().cloned(), c.guarantee.clone())
        .expect("contract interfaces are disjoint")
}

/// The implementation returning `ρ_c+` on inputs below `ρ_c−` and the top
/// environment otherwise. Every monotone implementation that provides all
/// of `P+_c` is pointwise below it.
pub fn guarded_top_implementation(c: &DenotContract) -> Component {
    Component::guarded(
        c.assume.clone(),
        c.guarantee.clone(),
        ProcEnv::top(c.space(), c.provided().iter().cloned()),
    )
    .expect("contract interfaces are disjoint")
}

/// Whether the monotone component `m` is an environment for `c`.
///
/// Implementations are taken to provide all of `P+_c`. Composition is
/// monotone in both operands and in the outer environment, so the binding
/// case is [`guarded_top_implementation`] under the top environment.
pub fn is_environment(m: &Component, c: &DenotContract) -> Result<bool> {
    if !m.provided().is_disjoint(c.provided()) {
        return Ok(false);
    }
    let composite = compose(m, &guarded_top_implementation(c))?;
    let top = ProcEnv::top(c.space(), composite.required().iter().cloned());
    composite
        .apply(&top)?
        .restrict(c.provided())
        .leq(&c.guarantee)
}

/// `c1 ⪯ c2`.
pub fn refines(c1: &DenotContract, c2: &DenotContract) -> Result<bool> {
    Ok(c2.assume.leq(&c1.assume)? && c1.guarantee.leq(&c2.guarantee)?)
}

/// `c1 ∧ c2`: assumptions joined, guarantees met.
pub fn conjoin(c1: &DenotContract, c2: &DenotContract) -> Result<DenotContract> {
    DenotContract::new(c1.assume.lub(&c2.assume)?, c1.guarantee.glb(&c2.guarantee)?)
}

/// Disjoint provided sets and each guarantee within the partner's
/// assumption on shared names.
pub fn contracts_composable(c1: &DenotContract, c2: &DenotContract) -> Result<bool> {
    if !c1.provided().is_disjoint(c2.provided()) {
        return Ok(false);
    }
    cross_conditions_hold(c1, c2)
}

fn cross_conditions_hold(c1: &DenotContract, c2: &DenotContract) -> Result<bool> {
    if !c1.assume.same_space(&c2.assume) {
        return Err(Error::DomainMismatch);
    }
    let within = |a: &DenotContract, b: &DenotContract| {
        a.required().intersection(b.provided()).all(|p| {
            b.guarantee
                .get(p)
                .unwrap()
                .is_subset(a.assume.get(p).unwrap())
        })
    };
    Ok(within(c1, c2) && within(c2, c1))
}

/// `c1 ⊗ c2`.
///
/// The assumption meets both assumptions pointwise, a name assumed by one
/// side only keeping that side's relation, and keeps the names neither side
/// provides.
pub fn compose_contracts(c1: &DenotContract, c2: &DenotContract) -> Result<DenotContract> {
    if !contracts_composable(c1, c2)? {
        return Err(Error::NotComposable(
            "provided names overlap or a guarantee exceeds the partner's assumption".into(),
        ));
    }
    compose_unchecked(c1, c2)
}

pub(crate) fn compose_unchecked(c1: &DenotContract, c2: &DenotContract) -> Result<DenotContract> {
    let guarantee = c1.guarantee.lub(&c2.guarantee)?;
    let provided = guarantee.scope();
    let required: BTreeSet<String> = c1
        .required()
        .union(c2.required())
        .filter(|p| !provided.contains(*p))
        .cloned()
        .collect();
    let assume = c1.assume.meet_open(&c2.assume)?.restrict(&required);
    DenotContract::new(assume, guarantee)
}

/// `c1 ⊗ … ⊗ cn`, defined when the contracts are pairwise composable.
pub fn compose_all(contracts: &[DenotContract]) -> Result<DenotContract> {
    let (first, rest) = contracts
        .split_first()
        .ok_or_else(|| Error::Invalid("nothing to compose".into()))?;
    for (i, a) in contracts.iter().enumerate() {
        for b in &contracts[i + 1..] {
            if !contracts_composable(a, b)? {
                return Err(Error::NotComposable(
                    "a pair of the given contracts is not composable".into(),
                ));
            }
        }
    }
    rest.iter()
        .try_fold(first.clone(), |acc, c| compose_unchecked(&acc, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::base_component;
    use crate::contracts::contract_environment;
    use crate::lang::{parse_contract_file, parse_program, DomainConfig, Program};
    use crate::semantics::Denotation;

    const LISTING: &str = "proc even is if n = 0 then r := 1 else (n := n - 1; call odd);\n\
                           proc odd is if n = 0 then r := 0 else (n := n - 1; call even)";
    const CONTRACTS: &str = "contract even logical n0 requires n >= 0 and n = n0 \
                               ensures (n0 mod 2 = 0 => r = 1) and (n0 mod 2 = 1 => r = 0)\n\
                             contract odd logical n0 requires n >= 0 and n = n0 \
                               ensures (n0 mod 2 = 0 => r = 0) and (n0 mod 2 = 1 => r = 1)";

    struct Fixture {
        sp: Arc<StateSpace>,
        prog: Program,
        table: ContractTable,
    }

    fn fixture() -> Fixture {
        Fixture {
            sp: StateSpace::new(DomainConfig::new(0, 7, ["n", "r"]).unwrap()).unwrap(),
            prog: parse_program(LISTING).unwrap(),
            table: parse_contract_file(CONTRACTS).unwrap(),
        }
    }

    fn names(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn c_even(f: &Fixture) -> DenotContract {
        abstract_contract("even", &f.table, &names(&["odd"]), &f.sp).unwrap()
    }

    fn c_odd(f: &Fixture) -> DenotContract {
        abstract_contract("odd", &f.table, &names(&["even"]), &f.sp).unwrap()
    }

    #[test]
    fn abstraction_of_even() {
        let f = fixture();
        let c = c_even(&f);
        assert_eq!(c.required(), &names(&["odd"]));
        assert_eq!(c.provided(), &names(&["even"]));
        let rc = contract_environment(&f.table, &f.sp).unwrap();
        assert_eq!(c.assume().get("odd"), rc.get("odd"));
        assert_eq!(c.guarantee().get("even"), rc.get("even"));
        let leaf = abstract_contract("even", &f.table, &BTreeSet::new(), &f.sp).unwrap();
        assert!(leaf.assume().is_empty());
    }

    #[test]
    fn base_components_implement_their_abstractions() {
        let f = fixture();
        let m_even = base_component(&f.prog.decls[..1], &f.sp).unwrap();
        let m_odd = base_component(&f.prog.decls[1..], &f.sp).unwrap();
        assert!(implements(&m_even, &c_even(&f)).unwrap());
        assert!(implements(&m_odd, &c_odd(&f)).unwrap());
        let c = c_even(&f);
        assert!(implements(&max_implementation(&c), &c).unwrap());
        assert!(implements(&guarded_top_implementation(&c), &c).unwrap());
    }

    #[test]
    fn full_guarantee_does_not_implement_strict_one() {
        let f = fixture();
        let c = c_even(&f);
        let loose = Component::constant(["odd"], ProcEnv::top(&f.sp, ["even"])).unwrap();
        assert!(!implements(&loose, &c).unwrap());
    }

    #[test]
    fn decomposition_of_the_top_level_contract() {
        let f = fixture();
        let (ce, co) = (c_even(&f), c_odd(&f));
        assert!(contracts_composable(&ce, &co).unwrap());
        let both = compose_contracts(&ce, &co).unwrap();
        assert!(both.required().is_empty());
        assert_eq!(
            both.guarantee(),
            &contract_environment(&f.table, &f.sp).unwrap()
        );
        let top =
            abstract_contract_set(&names(&["even", "odd"]), &BTreeSet::new(), &f.table, &f.sp)
                .unwrap();
        assert!(refines(&both, &top).unwrap());
        let m = compose(
            &base_component(&f.prog.decls[..1], &f.sp).unwrap(),
            &base_component(&f.prog.decls[1..], &f.sp).unwrap(),
        )
        .unwrap();
        assert!(implements(&m, &both).unwrap());
    }

    #[test]
    fn weakened_guarantee_breaks_composability() {
        let f = fixture();
        let ce = c_even(&f);
        let co = c_odd(&f);
        let assumed = ce.assume().get("odd").unwrap();
        let (s, t) = Denotation::full(f.sp.len())
            .difference(assumed)
            .pairs()
            .next()
            .unwrap();
        let mut g = co.guarantee().clone();
        g.get_mut("odd").unwrap().insert(s, t);
        let weak = DenotContract::new(co.assume().clone(), g).unwrap();
        assert!(!contracts_composable(&ce, &weak).unwrap());
        assert!(matches!(
            compose_contracts(&ce, &weak),
            Err(Error::NotComposable(_))
        ));
        assert!(!contracts_composable(&ce, &ce).unwrap());
    }

    #[test]
    fn refinement_examples() {
        let f = fixture();
        let c = c_even(&f);
        assert!(refines(&c, &c).unwrap());
        let mut g = c.guarantee().clone();
        let (s, t) = g.get("even").unwrap().pairs().next().unwrap();
        g.get_mut("even").unwrap().remove(s, t);
        let tighter = DenotContract::new(c.assume().clone(), g).unwrap();
        assert!(refines(&tighter, &c).unwrap());
        assert!(!refines(&c, &tighter).unwrap());
    }

    #[test]
    fn conjunction_examples() {
        let f = fixture();
        let c = c_even(&f);
        assert_eq!(conjoin(&c, &c).unwrap(), c);
        let vac = DenotContract::vacuous(&f.sp, ["odd"], ["even"]).unwrap();
        let both = conjoin(&c, &vac).unwrap();
        assert!(refines(&both, &c).unwrap());
        assert!(refines(&both, &vac).unwrap());
        let disjoint = conjoin(&c, &c_odd(&f)).unwrap();
        assert!(disjoint.guarantee().is_empty());
        assert_eq!(disjoint.required(), &names(&["even", "odd"]));
    }

    #[test]
    fn closed_fresh_contract_composes_transparently() {
        let f = fixture();
        let c = c_even(&f);
        let fresh = DenotContract::new(ProcEnv::empty(&f.sp), ProcEnv::top(&f.sp, ["k"])).unwrap();
        let both = compose_contracts(&c, &fresh).unwrap();
        assert_eq!(both.assume(), c.assume());
        assert_eq!(
            both.guarantee(),
            &c.guarantee().lub(fresh.guarantee()).unwrap()
        );
    }

    #[test]
    fn environment_examples() {
        let f = fixture();
        let ce = c_even(&f);
        let m_odd = base_component(&f.prog.decls[1..], &f.sp).unwrap();
        assert!(is_environment(&m_odd, &ce).unwrap());

        let skip = base_component(&parse_program("proc k is skip").unwrap().decls, &f.sp).unwrap();
        let tolerant = DenotContract::vacuous(&f.sp, Vec::<String>::new(), ["even"]).unwrap();
        assert!(is_environment(&skip, &tolerant).unwrap());

        let clash = base_component(&f.prog.decls[..1], &f.sp).unwrap();
        assert!(!is_environment(&clash, &ce).unwrap());

        // an odd that always answers r = 0 drives even outside its guarantee
        let wrong =
            base_component(&parse_program("proc odd is r := 0").unwrap().decls, &f.sp).unwrap();
        assert!(!is_environment(&wrong, &ce).unwrap());
    }

    #[test]
    fn constant_implementation_does_not_decide_environments() {
        let sp = StateSpace::new(DomainConfig::new(0, 1, ["x"]).unwrap()).unwrap();
        let mut assume = ProcEnv::bottom(&sp, ["q"]);
        assume.get_mut("q").unwrap().insert(0, 0);
        let guarantee = ProcEnv::from_map(
            &sp,
            [("p".to_string(), Denotation::identity(sp.len()))].into(),
        )
        .unwrap();
        let c = DenotContract::new(assume, guarantee).unwrap();
        // q breaks the assumption, so some implementation may misbehave
        let m = Component::constant(Vec::<String>::new(), ProcEnv::top(&sp, ["q"])).unwrap();
        let with_max = compose(&m, &max_implementation(&c)).unwrap();
        let out = with_max.apply(&ProcEnv::empty(&sp)).unwrap();
        assert!(out.restrict(c.provided()).leq(c.guarantee()).unwrap());
        assert!(!is_environment(&m, &c).unwrap());
        let good = Component::constant(Vec::<String>::new(), c.assume().clone()).unwrap();
        assert!(is_environment(&good, &c).unwrap());
    }

    #[test]
    fn n_ary_composition_needs_pairwise_composability() {
        let f = fixture();
        let (ce, co) = (c_even(&f), c_odd(&f));
        let fresh = DenotContract::new(ProcEnv::empty(&f.sp), ProcEnv::top(&f.sp, ["k"])).unwrap();
        let all = compose_all(&[ce.clone(), co.clone(), fresh.clone()]).unwrap();
        let nested = compose_contracts(&compose_contracts(&ce, &co).unwrap(), &fresh).unwrap();
        assert_eq!(all, nested);
        assert!(compose_all(&[ce.clone(), ce]).is_err());
    }
}
