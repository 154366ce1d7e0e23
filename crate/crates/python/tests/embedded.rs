use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    Python::attach(|py| {
        let m = PyModule::new(py, "alcove").unwrap();
        alcove::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("alcove", m).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn root_system_and_fusion() {
    run(r#"
a2 = alcove.RootSystem("A2")
assert a2.h_dual == 3
assert a2.fusion([1, 0], [0, 1], 1).coeffs == {(0, 0): 1}
assert alcove.RootSystem("A1").fold([3], 3) == ((1,), -1)
try:
    alcove.RootSystem("X9")
    raise AssertionError("accepted X9")
except ValueError:
    pass
"#);
}

#[test]
fn s_matrix_and_theta() {
    run(r#"
b2 = alcove.RootSystem("B2")
s = b2.s_matrix(1)
assert len(s) == 3 and s.max_asymmetry() < 1e-12
th = b2.theta_element(3, [((1, 0), (0, 0), 2)])
assert (th.star() * th).terms == [((0, 0), (0, 0), 4)]
"#);
}
