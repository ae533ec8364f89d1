//! Python bindings for the core toolkit.

use pyo3::prelude::*;

#[pymodule]
fn regdyn_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
