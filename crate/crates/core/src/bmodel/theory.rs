use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{CoefficientRing, Domain};
use crate::fgl::{law_by_name, FormalGroupLaw};

/// An oriented theory of geometric type, described by its formal group law.
#[derive(Clone, Debug)]
pub struct OrientedTheory {
    fgl: FormalGroupLaw,
}

impl PartialEq for OrientedTheory {
    fn eq(&self, other: &Self) -> bool {
        self.fgl.ring() == other.fgl.ring() && self.fgl.series() == other.fgl.series()
    }
}

impl OrientedTheory {
    /// Fails unless the law has passed validation.
    pub fn new(fgl: FormalGroupLaw) -> Result<Arc<Self>> {
        if !fgl.is_validated() {
            return Err(Error::InvalidFgl(format!("{} has not passed validation", fgl.name())));
        }
        Ok(Arc::new(OrientedTheory { fgl }))
    }

    /// Theory for a named law (see [`law_by_name`]).
    pub fn named(law: &str, order: usize, domain: Domain) -> Result<Arc<Self>> {
        Self::new(law_by_name(law, order, domain)?)
    }

    pub fn fgl(&self) -> &FormalGroupLaw {
        &self.fgl
    }

    pub fn name(&self) -> &str {
        self.fgl.name()
    }

    pub fn ring(&self) -> &CoefficientRing {
        self.fgl.ring()
    }

    /// Formal order of the law; spaces up to this dimension are supported.
    pub fn order(&self) -> usize {
        self.fgl.order()
    }

    /// Push-forward to a point is available only over ℚ-algebras.
    pub fn is_rational(&self) -> bool {
        self.ring().is_rational()
    }
}
