//! Closed-form factors of the order-2 Zassenhaus propagator
//! `ρ̂(t) ≈ e^{−i(t²/2)[X,Y]} e^{tY} e^{−itX} ρ̂(0)` and their composition.

mod commutator;
mod dissipative;
mod efg;
mod operator_form;
mod unitary;
mod zassenhaus;

pub use commutator::{
    commutator_xy, dissipation_mixed_ops, exp_commutator_closed_form, CommutatorFactor,
    DissipationMixedOps, SERIES_BOUND_LIMIT, SERIES_TOLERANCE,
};
pub use dissipative::{exp_ty_closed_form, nilpotent_exp, DissipativeFactor};
pub use efg::{efg, EfgValues};
pub use operator_form::{rho_tilde_1, rho_tilde_operator_series};
pub use unitary::{exp_itx_closed_form, NumberFunctions, UnitaryFactor};
pub use zassenhaus::{
    nested_commutator, zassenhaus_propagate, NestedCommutatorFactor, ZassenhausOrder,
    ZassenhausPropagator,
};

use crate::error::Result;
use crate::fock::VectorizedState;
use crate::linalg::DenseComplexMatrix;

/// A linear map on vectorized block states.
#[derive(Clone, Debug)]
pub enum PropagatorFactor {
    Unitary(UnitaryFactor),
    Dissipative(DissipativeFactor),
    Commutator(CommutatorFactor),
    NestedCommutator(NestedCommutatorFactor),
}

impl PropagatorFactor {
    pub fn block_dim(&self) -> usize {
        match self {
            Self::Unitary(f) => f.block_dim(),
            Self::Dissipative(f) => f.block_dim(),
            Self::Commutator(f) => f.block_dim(),
            Self::NestedCommutator(f) => f.block_dim(),
        }
    }

    pub fn apply(&self, state: &VectorizedState) -> Result<VectorizedState> {
        match self {
            Self::Unitary(f) => f.apply(state),
            Self::Dissipative(f) => f.apply(state),
            Self::Commutator(f) => f.apply(state),
            Self::NestedCommutator(f) => f.apply(state),
        }
    }

    /// The `4D² × 4D²` matrix of the map.
    pub fn to_dense(&self) -> DenseComplexMatrix {
        match self {
            Self::Unitary(f) => f.to_dense(),
            Self::Dissipative(f) => f.to_dense(),
            Self::Commutator(f) => f.to_dense(),
            Self::NestedCommutator(f) => f.to_dense(),
        }
    }
}

impl From<UnitaryFactor> for PropagatorFactor {
    fn from(f: UnitaryFactor) -> Self {
        Self::Unitary(f)
    }
}

impl From<DissipativeFactor> for PropagatorFactor {
    fn from(f: DissipativeFactor) -> Self {
        Self::Dissipative(f)
    }
}

impl From<CommutatorFactor> for PropagatorFactor {
    fn from(f: CommutatorFactor) -> Self {
        Self::Commutator(f)
    }
}

impl From<NestedCommutatorFactor> for PropagatorFactor {
    fn from(f: NestedCommutatorFactor) -> Self {
        Self::NestedCommutator(f)
    }
}
