use pyo3::prelude::*;

#[pymodule]
fn dgalg(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
