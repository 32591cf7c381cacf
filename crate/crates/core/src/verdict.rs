//! Decision outcomes with mandatory evidence.
//!
//! Every decision procedure in the engine answers with a [`Verdict`]. A
//! failing verdict always carries a counterexample; a passing verdict carries
//! a witness whenever the property decided is existential (a factorization, a
//! mediating morphism). Morphism and object indices inside [`Evidence`] refer
//! to the underlying category of the structure that was queried, except where
//! a [`Realm::Base`] tag says they index the enriching base category instead.

use serde::Serialize;

use crate::fincat::{Cone, Diagram, MorId, ObjId};

/// Machine-readable reason attached to a verdict.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    Holds,
    NoMediator,
    MultipleMediators,
    NoFiller,
    MultipleFillers,
    NotLimit,
    NotPreserved,
    NotIso,
    NotNatural,
    NotIsoClosed,
    NotOrthogonal,
    NoFactorization,
    ClassMismatch,
}

/// Which category the indices of a piece of evidence live in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Realm {
    /// The underlying ordinary category of the structure queried.
    Underlying,
    /// The base category `V` of a table-backed enriched category.
    Base,
}

/// Left or right member of a pair of classes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A solved lifting problem: `v ∘ e = m ∘ u` with diagonal `w`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Lift {
    pub u: MorId,
    pub v: MorId,
    pub w: MorId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    Morphism {
        morphism: MorId,
    },
    Pair {
        first: MorId,
        second: MorId,
    },
    Cone {
        cone: Cone,
    },
    Diagram {
        diagram: Diagram,
    },
    /// A cone (`apex`, `legs`) together with every mediator into the claimed
    /// limit; a counterexample has zero or at least two. When `apex` is
    /// absent the legs are elements of hom-sets (set-level cones).
    Mediators {
        realm: Realm,
        apex: Option<ObjId>,
        legs: Vec<MorId>,
        mediators: Vec<MorId>,
    },
    /// A commuting square `v ∘ e = m ∘ u` and all of its diagonal fillers.
    Lifting {
        u: MorId,
        v: MorId,
        fillers: Vec<MorId>,
    },
    Lifts {
        lifts: Vec<Lift>,
    },
    Factorization {
        e: MorId,
        m: MorId,
    },
    Factorizer {
        entries: Vec<(MorId, MorId, MorId)>,
    },
    /// `morphism` should (`expected = true`) or should not belong to `side`.
    Misplaced {
        morphism: MorId,
        side: Side,
        expected: bool,
    },
    /// `member ∘ iso` or `iso ∘ member` left the class.
    IsoComposite {
        side: Side,
        member: MorId,
        iso: MorId,
        composite: MorId,
    },
    AtObject {
        object: ObjId,
        detail: Box<Evidence>,
    },
    ForPair {
        e: MorId,
        m: MorId,
        detail: Box<Evidence>,
    },
    Note {
        text: String,
    },
}

/// Outcome of a decision procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub reason: Reason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Evidence>,
}

impl Verdict {
    pub fn pass(witness: Option<Evidence>) -> Self {
        Verdict {
            holds: true,
            reason: Reason::Holds,
            witness,
            counterexample: None,
        }
    }

    pub fn fail(reason: Reason, counterexample: Evidence) -> Self {
        debug_assert!(reason != Reason::Holds);
        Verdict {
            holds: false,
            reason,
            witness: None,
            counterexample: Some(counterexample),
        }
    }

    /// Checks the structural contract: failures carry a counterexample.
    pub fn is_well_formed(&self) -> bool {
        if self.holds {
            self.reason == Reason::Holds && self.counterexample.is_none()
        } else {
            self.reason != Reason::Holds && self.counterexample.is_some() && self.witness.is_none()
        }
    }
}
