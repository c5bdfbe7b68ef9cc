//! Python bindings: a single `Basis` class wrapping the operator-basis
//! toolkit, with methods for thresholds, distributions, geometry,
//! characteristic functions, and sampling.

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use unsharp::states::{
    bloch_from_density, density_from_bloch, random_state, BlochVector, DensityMatrix, StateKind,
};
use unsharp::{charfun, geometry, mub, opbasis, povm, sampler, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotPrimePower(_)
        | Error::EtaOutOfRange(_)
        | Error::DimensionMismatch(_)
        | Error::InvalidState(_)
        | Error::InvalidDistribution(_)
        | Error::BadSpectra(_) => PyValueError::new_err(e.to_string()),
        Error::Io(_) | Error::Json(_) | Error::Format(_) => PyIOError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn bloch(theta: Vec<f64>) -> BlochVector {
    BlochVector { theta }
}

/// Operator basis for one dimension, with every downstream operation as a
/// method. Construction is cheap; polytope data is computed on demand.
#[pyclass(frozen)]
struct Basis {
    inner: opbasis::OperatorBasis,
}

#[pymethods]
impl Basis {
    /// Pauli basis for qubits, three families of one.
    #[staticmethod]
    fn pauli() -> Basis {
        Basis {
            inner: opbasis::pauli_basis(),
        }
    }

    /// Built-in qutrit basis, four families of two.
    #[staticmethod]
    fn qutrit() -> Basis {
        Basis {
            inner: opbasis::qutrit_builtin(),
        }
    }

    /// Gell-Mann negative control: one family of all eight generators.
    #[staticmethod]
    fn gellmann() -> Basis {
        Basis {
            inner: opbasis::gell_mann_basis(),
        }
    }

    /// MUB construction for a prime-power dimension.
    #[staticmethod]
    fn for_dimension(n: u64) -> PyResult<Basis> {
        let mubs = mub::build(n).map_err(to_py)?;
        let spectra = opbasis::SpectraSet::default_for(n as usize);
        let inner = opbasis::from_mubs(&mubs, &spectra).map_err(to_py)?;
        Ok(Basis { inner })
    }

    /// Round-trip through the JSON basis format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Basis> {
        Ok(Basis {
            inner: opbasis::OperatorBasis::from_json(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn operators(&self) -> usize {
        self.inner.ops.len()
    }

    #[getter]
    fn families(&self) -> usize {
        self.inner.families.len()
    }

    /// Deviation report as a dict; `pass` gates everything at 1e-8.
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rep = self.inner.validate().map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("pass", rep.pass)?;
        d.set_item("hermiticity", rep.herm_dev)?;
        d.set_item("trace", rep.trace_dev)?;
        d.set_item("orthogonality", rep.ortho_dev)?;
        d.set_item("commutation", rep.commute_dev)?;
        d.set_item("unbiasedness", rep.unbiased_dev)?;
        d.set_item("eigentable", rep.eigentable_dev)?;
        Ok(d)
    }

    /// Joint-measurability threshold: `(analytic, bisection)`, the second
    /// entry None when the tuple count makes bisection too slow.
    fn critical_eta(&self) -> PyResult<(f64, Option<f64>)> {
        let rep = povm::critical_eta(&self.inner).map_err(to_py)?;
        Ok((rep.analytic, rep.bisection))
    }

    /// Smallest eigenvalue over all global POVM elements at one eta.
    fn min_eigenvalue_at(&self, eta: f64) -> PyResult<f64> {
        Ok(povm::global_povm(&self.inner, eta).map_err(to_py)?.min_eigenvalue)
    }

    fn insphere_radius(&self) -> PyResult<f64> {
        Ok(geometry::insphere_radius(
            &geometry::h_polytope(&self.inner).map_err(to_py)?,
        ))
    }

    fn polytope_faces(&self) -> PyResult<usize> {
        Ok(geometry::h_polytope(&self.inner).map_err(to_py)?.faces())
    }

    /// Bloch vectors of all MUB projectors; the polytope vertices.
    fn mub_vertices(&self) -> Vec<Vec<f64>> {
        geometry::mub_vertices(&self.inner).vertices
    }

    /// Membership margin of a Bloch vector: nonnegative inside the
    /// classicality polytope, negative outside.
    fn membership(&self, theta: Vec<f64>) -> PyResult<f64> {
        let h = geometry::h_polytope(&self.inner).map_err(to_py)?;
        Ok(geometry::membership(&bloch(theta), &h))
    }

    /// Joint outcome (quasi-)distribution: `(p, valid)`.
    fn joint_distribution(&self, theta: Vec<f64>, eta: f64) -> PyResult<(Vec<f64>, bool)> {
        let p = povm::joint_distribution(&bloch(theta), &self.inner, eta).map_err(to_py)?;
        Ok((p.p, p.valid))
    }

    /// Bloch vector of a seeded random state, kind "mixed" or "pure".
    fn random_bloch(&self, kind: &str, seed: u64) -> PyResult<Vec<f64>> {
        let kind = match kind {
            "mixed" => StateKind::Mixed,
            "pure" => StateKind::Pure,
            other => {
                return Err(PyValueError::new_err(format!(
                    "kind must be \"mixed\" or \"pure\", got {other:?}"
                )))
            }
        };
        let rho = random_state(self.inner.n, kind, seed);
        Ok(bloch_from_density(&rho, &self.inner).map_err(to_py)?.theta)
    }

    /// Margenau-Hill characteristic function at one t, as `(re, im)`.
    /// The state must be physical.
    fn mh_charfun(&self, theta: Vec<f64>, t: Vec<f64>) -> PyResult<(f64, f64)> {
        let state = density_from_bloch(&bloch(theta), &self.inner).map_err(to_py)?;
        if !state.physical {
            return Err(PyValueError::new_err(
                "theta does not describe a physical state",
            ));
        }
        let rho = DensityMatrix::new(state.rho).map_err(to_py)?;
        let tv = charfun::TVector::from_flat(&self.inner, &t).map_err(to_py)?;
        let phi = charfun::mh_charfun(&rho, &self.inner, &tv).map_err(to_py)?;
        Ok((phi.re, phi.im))
    }

    /// Characteristic function of the eta = 1 joint distribution at one t,
    /// as `(re, im)`.
    fn classical_charfun(&self, theta: Vec<f64>, t: Vec<f64>) -> PyResult<(f64, f64)> {
        let p = povm::joint_distribution(&bloch(theta), &self.inner, 1.0).map_err(to_py)?;
        let tv = charfun::TVector::from_flat(&self.inner, &t).map_err(to_py)?;
        let phi = charfun::classical_charfun(&p, &self.inner.eigentable, &tv).map_err(to_py)?;
        Ok((phi.re, phi.im))
    }

    /// Seeded multinomial sampling of the joint distribution; outcome
    /// counts indexed like `joint_distribution`.
    fn sample(&self, theta: Vec<f64>, eta: f64, shots: u64, seed: u64) -> PyResult<Vec<u64>> {
        let p = povm::joint_distribution(&bloch(theta), &self.inner, eta).map_err(to_py)?;
        let counts = sampler::sample(&p, shots, seed).map_err(to_py)?;
        Ok(counts.counts)
    }
}

#[pymodule]
fn unsharp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Basis>()?;
    Ok(())
}
