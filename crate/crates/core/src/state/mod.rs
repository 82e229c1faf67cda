//! Multi-qudit pure and mixed states.

pub mod catalog;
mod density;
pub mod exact;
pub mod ket;
mod pure;

pub use density::{DensityMatrix, DensityMatrixFile};
pub use ket::{parse_ket_expression, render, KetExpression};
pub use pure::PureState;

use crate::error::Result;
use crate::register::QuditRegister;

/// Either kind of state; everything that evaluates expectations accepts it.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn register(&self) -> &QuditRegister {
        match self {
            State::Pure(s) => s.register(),
            State::Mixed(r) => r.register(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(s) => s.to_density(),
            State::Mixed(r) => r.clone(),
        }
    }

    pub fn tensor_product(&self, other: &State) -> Result<State> {
        match (self, other) {
            (State::Pure(a), State::Pure(b)) => a.tensor_product(b).map(State::Pure),
            _ => self
                .to_density()
                .tensor_product(&other.to_density())
                .map(State::Mixed),
        }
    }
}

impl From<PureState> for State {
    fn from(s: PureState) -> Self {
        State::Pure(s)
    }
}

impl From<DensityMatrix> for State {
    fn from(r: DensityMatrix) -> Self {
        State::Mixed(r)
    }
}
