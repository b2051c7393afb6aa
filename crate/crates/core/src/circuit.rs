//! Gate lists on qubit registers and their full-register unitaries.

use crate::error::{argument, Result};
use crate::linalg::{CMatrix, TOL};
use crate::operator::{check_distinct, Operator};
use crate::state::DensityMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Hadamard(usize),
    /// Any operator on the listed qubits (first target most significant).
    Unitary {
        targets: Vec<usize>,
        u: Operator,
    },
    /// `U` on `targets` when `control` is `|1⟩`.
    ControlledU {
        control: usize,
        targets: Vec<usize>,
        u: Operator,
    },
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Hadamard(q) => vec![*q],
            Gate::Unitary { targets, .. } => targets.clone(),
            Gate::ControlledU {
                control, targets, ..
            } => std::iter::once(*control)
                .chain(targets.iter().copied())
                .collect(),
        }
    }

    fn local_operator(&self) -> Result<Operator> {
        match self {
            Gate::Hadamard(_) => Ok(Operator::hadamard()),
            Gate::Unitary { u, .. } => Ok(u.clone()),
            Gate::ControlledU { u, .. } => controlled(u),
        }
    }
}

/// An ordered gate list on `n_total` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_total: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_total: usize) -> Self {
        Self {
            n_total,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        let qubits = gate.qubits();
        check_distinct(&qubits, self.n_total)?;
        let width = match &gate {
            Gate::Hadamard(_) => 1,
            Gate::Unitary { u, .. } | Gate::ControlledU { u, .. } => u.n_qubits(),
        };
        let expected = if matches!(gate, Gate::ControlledU { .. }) {
            width + 1
        } else {
            width
        };
        if qubits.len() != expected {
            return argument(format!(
                "gate acts on {width} qubits but {} indices were given",
                qubits.len()
            ));
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// The trace-estimation circuit for an `n`-qubit `U`: Hadamard on qubit 0,
    /// then `U` on qubits `1..=n` controlled by qubit 0.
    pub fn trace_estimation(u: &Operator) -> Result<Self> {
        let n = u.n_qubits();
        let mut c = Self::new(n + 1);
        c.push(Gate::Hadamard(0))?;
        c.push(Gate::ControlledU {
            control: 0,
            targets: (1..=n).collect(),
            u: u.clone(),
        })?;
        Ok(c)
    }

    /// The full-register unitary (later gates on the left).
    pub fn unitary(&self) -> Result<Operator> {
        let mut acc = Operator::identity(self.n_total);
        for g in &self.gates {
            let full = g.local_operator()?.embed(&g.qubits(), self.n_total)?;
            acc = &full * &acc;
        }
        Ok(acc)
    }

    pub fn run(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n_qubits() != self.n_total {
            return argument(format!(
                "circuit has {} qubits but state has {}",
                self.n_total,
                rho.n_qubits()
            ));
        }
        rho.apply_unitary(&self.unitary()?)
    }
}

/// `diag(I, U)`: `U` applied when the (more significant) control is `|1⟩`.
pub fn controlled(u: &Operator) -> Result<Operator> {
    let defect = u.unitarity_defect();
    if defect > TOL {
        return argument(format!(
            "controlled gate needs a unitary (defect {defect:e})"
        ));
    }
    let d = u.dim();
    let mut m = CMatrix::identity(2 * d, 2 * d);
    m.view_mut((d, d), (d, d)).copy_from(u.matrix());
    Operator::new(m)
}
