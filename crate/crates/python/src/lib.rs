//! Python module `ablation`: orbital elements, spacecraft sizing,
//! sublimation rates, formation objectives and the scenario-driven
//! experiments.

use std::collections::BTreeMap;
use std::path::PathBuf;

use ablation_core::astro::{
    apophis_elements, earth_elements, elements_to_state, kepler_propagate, Anomaly, ElementDeltas,
    OrbitalElements,
};
use ablation_core::constants::{AU, MU_SUN};
use ablation_core::experiments::{
    run_deflection_map, run_eccentricity_sweep, run_fleet_design, run_formation_design, run_shaped_design,
    run_validation, ResultTable, Scenario, Value,
};
use ablation_core::formation::natural_orbit_objectives;
use ablation_core::sizing::{mass_budget, EfficiencyOption, SpacecraftDesign};
use ablation_core::sublimation::{exhaust_velocity, mass_flow_rate, AsteroidModel};
use ablation_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::NotElliptic { .. } => PyValueError::new_err(e.to_string()),
        e if e.is_input_error() => PyValueError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

fn efficiency(label: &str) -> PyResult<EfficiencyOption> {
    match label {
        "high" => Ok(EfficiencyOption::HIGH),
        "low" => Ok(EfficiencyOption::LOW),
        other => Err(PyValueError::new_err(format!("efficiency must be 'high' or 'low', got '{other}'"))),
    }
}

/// Keplerian elements with a mean anomaly. SI units, angles in radians.
#[pyclass(name = "OrbitalElements", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyElements {
    inner: OrbitalElements,
}

#[pymethods]
impl PyElements {
    #[new]
    #[pyo3(signature = (a, e, i, raan, argp, mean_anomaly, epoch = 0.0))]
    fn new(a: f64, e: f64, i: f64, raan: f64, argp: f64, mean_anomaly: f64, epoch: f64) -> PyResult<Self> {
        let inner = OrbitalElements::new(a, e, i, raan, argp, Anomaly::Mean(mean_anomaly), epoch).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    /// Apophis with the given mean anomaly.
    #[staticmethod]
    #[pyo3(signature = (mean_anomaly = 0.0, epoch = 0.0))]
    fn apophis(mean_anomaly: f64, epoch: f64) -> Self {
        Self { inner: apophis_elements(mean_anomaly, epoch) }
    }

    /// Mean Earth orbit.
    #[staticmethod]
    #[pyo3(signature = (epoch = 0.0))]
    fn earth(epoch: f64) -> Self {
        Self { inner: earth_elements(epoch) }
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }
    #[getter]
    fn e(&self) -> f64 {
        self.inner.e
    }
    #[getter]
    fn i(&self) -> f64 {
        self.inner.i
    }
    #[getter]
    fn raan(&self) -> f64 {
        self.inner.raan
    }
    #[getter]
    fn argp(&self) -> f64 {
        self.inner.argp
    }
    #[getter]
    fn mean_anomaly(&self) -> f64 {
        self.inner.mean_anomaly()
    }
    #[getter]
    fn true_anomaly(&self) -> f64 {
        self.inner.true_anomaly()
    }
    #[getter]
    fn epoch(&self) -> f64 {
        self.inner.epoch
    }
    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius()
    }

    /// Orbital period about the Sun (s).
    fn period(&self) -> f64 {
        self.inner.period(MU_SUN)
    }

    /// Heliocentric position (m) and velocity (m/s).
    fn state(&self) -> PyResult<([f64; 3], [f64; 3])> {
        let s = elements_to_state(&self.inner, MU_SUN).map_err(to_py_err)?;
        Ok((s.position.into(), s.velocity.into()))
    }

    /// Two-body propagation by `dt` seconds.
    fn propagate(&self, dt: f64) -> Self {
        Self { inner: kepler_propagate(&self.inner, dt, MU_SUN) }
    }

    fn __repr__(&self) -> String {
        let k = &self.inner;
        format!(
            "OrbitalElements(a={:.6} AU, e={:.6}, i={:.6}, raan={:.6}, argp={:.6}, M={:.6}, epoch={})",
            k.a / AU,
            k.e,
            k.i,
            k.raan,
            k.argp,
            k.mean_anomaly(),
            k.epoch
        )
    }
}

/// One spacecraft configuration of the formation.
#[pyclass(name = "SpacecraftDesign", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDesign {
    inner: SpacecraftDesign,
}

#[pymethods]
impl PyDesign {
    #[new]
    #[pyo3(signature = (aperture_diameter, n_spacecraft, concentration_ratio, efficiency = "low"))]
    fn new(aperture_diameter: f64, n_spacecraft: u32, concentration_ratio: f64, efficiency: &str) -> PyResult<Self> {
        let inner = SpacecraftDesign::new(aperture_diameter, n_spacecraft, concentration_ratio, self::efficiency(efficiency)?);
        inner.validate().map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn aperture_diameter(&self) -> f64 {
        self.inner.aperture_diameter
    }
    #[getter]
    fn n_spacecraft(&self) -> u32 {
        self.inner.n_spacecraft
    }
    #[getter]
    fn concentration_ratio(&self) -> f64 {
        self.inner.concentration_ratio
    }

    /// Mass breakdown of one spacecraft sized at heliocentric distance `r` (m).
    fn mass_budget(&self, r: f64) -> PyResult<BTreeMap<&'static str, f64>> {
        let b = mass_budget(&self.inner, r).map_err(to_py_err)?;
        Ok(BTreeMap::from([
            ("laser", b.laser),
            ("solar_array", b.solar_array),
            ("mirrors", b.mirrors),
            ("radiators", b.radiators),
            ("harness", b.harness),
            ("bus", b.bus),
            ("dry", b.dry),
            ("propellant", b.propellant),
            ("total", b.total),
            ("solar_array_area", b.solar_array_area),
            ("laser_power", b.laser_power),
        ]))
    }
}

fn apophis_model(enthalpy: f64) -> PyResult<AsteroidModel> {
    let ast = AsteroidModel::apophis(apophis_elements(0.0, 0.0), enthalpy);
    ast.validate().map_err(to_py_err)?;
    Ok(ast)
}

/// Mean speed of the sublimated vapour (m/s) for the Apophis material.
#[pyfunction]
fn apophis_exhaust_velocity(enthalpy: f64) -> PyResult<f64> {
    Ok(exhaust_velocity(&apophis_model(enthalpy)?))
}

/// Sublimated mass flow (kg/s) from the whole formation at heliocentric
/// distance `r`. The surface speed defaults to the equatorial spin speed.
#[pyfunction]
#[pyo3(signature = (design, enthalpy, r, degradation = 1.0, surface_speed = None))]
fn apophis_mass_flow_rate(
    design: &PyDesign,
    enthalpy: f64,
    r: f64,
    degradation: f64,
    surface_speed: Option<f64>,
) -> PyResult<f64> {
    let ast = apophis_model(enthalpy)?;
    let speed = surface_speed.unwrap_or(ast.spin_rate * ast.semi_axes[0]);
    Ok(mass_flow_rate(&design.inner, &ast, r, degradation, speed))
}

/// Objectives of a natural formation orbit around Apophis, deltas given as
/// `(de, di, draan, dargp, dmean)`.
#[pyfunction]
#[pyo3(signature = (deltas, y_limit, mean_anomaly = 0.0))]
fn natural_objectives(deltas: [f64; 5], y_limit: f64, mean_anomaly: f64) -> BTreeMap<&'static str, PyValueLike> {
    let dk = ElementDeltas::from_array(&deltas);
    let o = natural_orbit_objectives(&dk, &apophis_elements(mean_anomaly, 0.0), y_limit);
    BTreeMap::from([
        ("max_distance", PyValueLike::Real(o.max_distance)),
        ("plume_angle", PyValueLike::Real(o.plume_angle)),
        ("constraint", PyValueLike::Real(o.constraint)),
        ("min_abs_y", PyValueLike::Real(o.min_abs_y)),
        ("family", PyValueLike::Text(o.family.label().into())),
    ])
}

#[derive(IntoPyObject)]
enum PyValueLike {
    Real(f64),
    Text(String),
}

/// Hypervolume dominated by `points` (minimisation) up to `reference`.
#[pyfunction]
fn hypervolume(points: Vec<Vec<f64>>, reference: Vec<f64>) -> PyResult<f64> {
    if points.iter().any(|p| p.len() != reference.len()) {
        return Err(PyValueError::new_err("every point needs as many objectives as the reference"));
    }
    Ok(ablation_core::moo::hypervolume(&points, &reference))
}

/// A result table with typed columns and a metadata sidecar.
#[pyclass(name = "ResultTable", frozen)]
struct PyTable {
    inner: ResultTable,
}

#[pymethods]
impl PyTable {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn columns(&self) -> Vec<String> {
        self.inner.columns.iter().map(|c| c.name.clone()).collect()
    }

    #[getter]
    fn units(&self) -> Vec<String> {
        self.inner.columns.iter().map(|c| c.unit.clone()).collect()
    }

    /// Rows as lists of float, int, str or None.
    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let out = PyList::empty(py);
        for row in &self.inner.rows {
            let cells = PyList::empty(py);
            for v in row {
                match v {
                    Value::Real(x) => cells.append(*x)?,
                    Value::Integer(n) => cells.append(*n)?,
                    Value::Text(s) => cells.append(s)?,
                    Value::Missing => cells.append(py.None())?,
                }
            }
            out.append(cells)?;
        }
        Ok(out)
    }

    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }

    fn to_csv(&self) -> PyResult<String> {
        self.inner.to_csv().map_err(to_py_err)
    }

    fn metadata_json(&self) -> PyResult<String> {
        self.inner.sidecar_json().map_err(to_py_err)
    }

    /// Write the CSV and its sidecar into `directory`; returns both paths.
    fn write(&self, directory: PathBuf) -> PyResult<(PathBuf, PathBuf)> {
        self.inner.write(&directory).map_err(to_py_err)
    }
}

/// A validated experiment scenario.
#[pyclass(name = "Scenario", frozen)]
struct PyScenario {
    inner: Scenario,
}

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: Scenario::from_json(text.as_bytes()).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn from_path(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: Scenario::from_path(&path).map_err(to_py_err)? })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py_err)
    }

    /// Run one experiment by its command name, for example
    /// `"deflection-map"`. The GIL is released while it runs.
    #[pyo3(signature = (experiment, seed = None))]
    fn run(&self, py: Python<'_>, experiment: &str, seed: Option<u64>) -> PyResult<PyTable> {
        let runner: fn(&Scenario) -> ablation_core::Result<ResultTable> = match experiment {
            "formation-design" => run_formation_design,
            "shaped-design" => run_shaped_design,
            "fleet-design" => run_fleet_design,
            "deflection-map" => run_deflection_map,
            "eccentricity-sweep" => run_eccentricity_sweep,
            other => return Err(PyValueError::new_err(format!("unknown experiment '{other}'"))),
        };
        let mut sc = self.inner.clone();
        if let Some(s) = seed {
            sc.seed = s;
        }
        let table = py.detach(|| runner(&sc)).map_err(to_py_err)?;
        Ok(PyTable { inner: table })
    }
}

/// Run the built-in oracle checks; returns `(name, passed, value, tolerance, detail)` tuples.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn validate(py: Python<'_>, seed: u64) -> PyResult<Vec<(String, bool, f64, f64, String)>> {
    let report = py.detach(|| run_validation(seed)).map_err(to_py_err)?;
    Ok(report
        .checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.passed, c.value, c.tolerance, c.detail))
        .collect())
}

#[pymodule]
fn ablation(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AU", AU)?;
    m.add("MU_SUN", MU_SUN)?;
    m.add_class::<PyElements>()?;
    m.add_class::<PyDesign>()?;
    m.add_class::<PyTable>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(apophis_exhaust_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(apophis_mass_flow_rate, m)?)?;
    m.add_function(wrap_pyfunction!(natural_objectives, m)?)?;
    m.add_function(wrap_pyfunction!(hypervolume, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
