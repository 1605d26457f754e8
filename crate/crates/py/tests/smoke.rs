//! Runs python/smoke_test.py against the module in an embedded interpreter.

use std::ffi::CString;

use pyhyperop::pyhyperop;
use pyo3::prelude::*;
use pyo3::types::PyDict;

#[test]
fn smoke_script_passes() {
    pyo3::append_to_inittab!(pyhyperop);
    Python::initialize();
    Python::attach(|py| {
        let script = CString::new(include_str!("../python/smoke_test.py")).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("__name__", "__main__").unwrap();
        if let Err(e) = py.run(&script, Some(&globals), None) {
            e.print(py);
            panic!("smoke test failed: {e}");
        }
    });
}
