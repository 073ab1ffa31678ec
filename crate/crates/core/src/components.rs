//! Components as environment transformers, their composition and its inner
//! least fixed point.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lang::{required_of, ProcDecl, StateSpace};
use crate::semantics::{lfp, standard_env_with, ProcEnv, SemanticsOptions};

/// Required names `P−` and provided names `P+`, always disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interface {
    pub required: BTreeSet<String>,
    pub provided: BTreeSet<String>,
}

impl Interface {
    pub fn new<I, J, S, T>(required: I, provided: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let iface = Interface {
            required: required.into_iter().map(Into::into).collect(),
            provided: provided.into_iter().map(Into::into).collect(),
        };
        if let Some(p) = iface.required.intersection(&iface.provided).next() {
            return Err(Error::Invalid(format!(
                "`{p}` is both required and provided"
            )));
        }
        Ok(iface)
    }

    pub fn closed(&self) -> bool {
        self.required.is_empty()
    }

    /// Interface of a composition: provided sets united, required names
    /// satisfied by either side dropped.
    pub fn compose(&self, other: &Interface) -> Interface {
        let provided: BTreeSet<String> = self.provided.union(&other.provided).cloned().collect();
        let required = self
            .required
            .union(&other.required)
            .filter(|p| !provided.contains(*p))
            .cloned()
            .collect();
        Interface { required, provided }
    }
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(", ");
        write!(
            f,
            "({{{}}}, {{{}}})",
            join(&self.required),
            join(&self.provided)
        )
    }
}

pub type TransformFn = dyn Fn(&ProcEnv) -> Result<ProcEnv> + Send + Sync;

#[derive(Clone)]
pub enum ComponentKind {
    /// Procedure declarations, applied through their standard denotation.
    Base {
        decls: Vec<ProcDecl>,
        options: SemanticsOptions,
    },
    Composite(Component, Component),
    /// Ignores its input.
    Constant(ProcEnv),
    /// `within` on inputs below `threshold`, `beyond` on every other input.
    /// Monotone whenever `within ⊑ beyond`.
    Guarded {
        threshold: ProcEnv,
        within: ProcEnv,
        beyond: ProcEnv,
    },
    /// An arbitrary transformer, for test doubles.
    Custom {
        label: String,
        apply: Arc<TransformFn>,
    },
}

/// A mapping from environments over `required` to environments over
/// `provided`, applied on demand.
#[derive(Clone)]
pub struct Component {
    interface: Arc<Interface>,
    space: Arc<StateSpace>,
    kind: Arc<ComponentKind>,
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Component{} {}", self.interface, self.describe())
    }
}

/// The component abstracting `decls`: provides the declared names and
/// requires every other call target.
pub fn base_component(decls: &[ProcDecl], space: &Arc<StateSpace>) -> Result<Component> {
    Component::base_with(decls, space, SemanticsOptions::default())
}

impl Component {
    pub fn base_with(
        decls: &[ProcDecl],
        space: &Arc<StateSpace>,
        options: SemanticsOptions,
    ) -> Result<Self> {
        let mut provided = BTreeSet::new();
        for d in decls {
            if !provided.insert(d.name.clone()) {
                return Err(Error::DuplicateProcedure(d.name.clone()));
            }
        }
        let interface = Interface {
            required: required_of(decls),
            provided,
        };
        Ok(Component {
            interface: Arc::new(interface),
            space: space.clone(),
            kind: Arc::new(ComponentKind::Base {
                decls: decls.to_vec(),
                options,
            }),
        })
    }

    /// The component that always returns `env`.
    pub fn constant<I, S>(required: I, env: ProcEnv) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let interface = Interface::new(required, env.scope())?;
        Ok(Component {
            interface: Arc::new(interface),
            space: env.space().clone(),
            kind: Arc::new(ComponentKind::Constant(env)),
        })
    }

    pub fn guarded(threshold: ProcEnv, within: ProcEnv, beyond: ProcEnv) -> Result<Self> {
        if within.scope() != beyond.scope() {
            return Err(Error::ScopeMismatch {
                expected: within.scope().into_iter().collect(),
                actual: beyond.scope().into_iter().collect(),
            });
        }
        if !threshold.same_space(&within) || !within.same_space(&beyond) {
            return Err(Error::DomainMismatch);
        }
        let interface = Interface::new(threshold.scope(), within.scope())?;
        Ok(Component {
            interface: Arc::new(interface),
            space: within.space().clone(),
            kind: Arc::new(ComponentKind::Guarded {
                threshold,
                within,
                beyond,
            }),
        })
    }

    pub fn custom<F>(
        label: impl Into<String>,
        interface: Interface,
        space: &Arc<StateSpace>,
        f: F,
    ) -> Self
    where
        F: Fn(&ProcEnv) -> Result<ProcEnv> + Send + Sync + 'static,
    {
        Component {
            interface: Arc::new(interface),
            space: space.clone(),
            kind: Arc::new(ComponentKind::Custom {
                label: label.into(),
                apply: Arc::new(f),
            }),
        }
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

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn kind(&self) -> &ComponentKind {
        &self.kind
    }

    /// `m(ρ−)`.
    pub fn apply(&self, r_minus: &ProcEnv) -> Result<ProcEnv> {
        if r_minus.space().as_ref() != self.space.as_ref() {
            return Err(Error::DomainMismatch);
        }
        r_minus.expect_scope(&self.interface.required)?;
        let out = match self.kind.as_ref() {
            ComponentKind::Base { decls, options } => standard_env_with(decls, r_minus, *options)?,
            ComponentKind::Composite(m1, m2) => self.apply_composite(m1, m2, r_minus)?,
            ComponentKind::Constant(env) => env.clone(),
            ComponentKind::Guarded {
                threshold,
                within,
                beyond,
            } => {
                if r_minus.leq(threshold)? {
                    within.clone()
                } else {
                    beyond.clone()
                }
            }
            ComponentKind::Custom { apply, .. } => apply(r_minus)?,
        };
        out.expect_scope(&self.interface.provided)?;
        Ok(out)
    }

    fn apply_composite(
        &self,
        m1: &Component,
        m2: &Component,
        r_minus: &ProcEnv,
    ) -> Result<ProcEnv> {
        let provided = &self.interface.provided;
        // Each side reads a partner-provided name from the iterate and every
        // other required name from the outer environment.
        let route = |m: &Component, partner: &Component, inner: &ProcEnv| {
            let mut input = ProcEnv::empty(&self.space);
            for p in m.required() {
                let src = if partner.provided().contains(p) {
                    inner
                } else {
                    r_minus
                };
                input.insert(p.clone(), src.get(p).expect("routed name is bound").clone());
            }
            input
        };
        lfp(provided, &self.space, |inner| {
            let out1 = m1.apply(&route(m1, m2, inner))?;
            let out2 = m2.apply(&route(m2, m1, inner))?;
            out1.lub(&out2)
        })
    }

    /// Serializable description of the component tree.
    pub fn describe(&self) -> Value {
        match self.kind.as_ref() {
            ComponentKind::Base { decls, .. } => json!({
                "kind": "base",
                "decls": decls.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
            ComponentKind::Composite(a, b) => json!({
                "kind": "composite",
                "left": a.describe(),
                "right": b.describe(),
            }),
            ComponentKind::Constant(env) => json!({
                "kind": "constant",
                "required": self.interface.required,
                "weights": env.iter().map(|(p, d)| (p.to_string(), d.len())).collect::<std::collections::BTreeMap<_, _>>(),
            }),
            ComponentKind::Guarded { .. } => json!({
                "kind": "guarded",
                "required": self.interface.required,
                "provided": self.interface.provided,
            }),
            ComponentKind::Custom { label, .. } => json!({ "kind": "custom", "label": label }),
        }
    }
}

/// `P+_{m1} ∩ P+_{m2} = ∅`.
pub fn composable(m1: &Component, m2: &Component) -> bool {
    m1.provided().is_disjoint(m2.provided())
}

/// `m1 × m2`.
pub fn compose(m1: &Component, m2: &Component) -> Result<Component> {
    if !composable(m1, m2) {
        let shared: Vec<_> = m1.provided().intersection(m2.provided()).cloned().collect();
        return Err(Error::NotComposable(format!(
            "both components provide {}",
            shared.join(", ")
        )));
    }
    if m1.space.as_ref() != m2.space.as_ref() {
        return Err(Error::DomainMismatch);
    }
    Ok(Component {
        interface: Arc::new(m1.interface.compose(&m2.interface)),
        space: m1.space.clone(),
        kind: Arc::new(ComponentKind::Composite(m1.clone(), m2.clone())),
    })
}

pub fn apply_component(m: &Component, r_minus: &ProcEnv) -> Result<ProcEnv> {
    m.apply(r_minus)
}

/// Refutes monotonicity on sampled pairs `r1 ⊑ r2`.
pub fn check_monotone(m: &Component, samples: &[(ProcEnv, ProcEnv)]) -> Result<bool> {
    for (r1, r2) in samples {
        if !r1.leq(r2)? {
            return Err(Error::Invalid("monotonicity sample is not ordered".into()));
        }
        if !m.apply(r1)?.leq(&m.apply(r2)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Applies both components to every sample and compares the results.
pub fn agree_on(m1: &Component, m2: &Component, samples: &[ProcEnv]) -> Result<bool> {
    if m1.interface() != m2.interface() {
        return Ok(false);
    }
    for r in samples {
        if m1.apply(r)? != m2.apply(r)? {
            return Ok(false);
        }
    }
    Ok(true)
}
