//! The experiments: formation design, shaped design, fleet design,
//! deflection maps and the eccentricity sweep.

use log::{info, warn};
use rayon::prelude::*;

use super::scenario::{EfficiencyChoice, Scenario};
use super::table::{Column, Metadata, OpenParameters, ResultTable, Value};
use crate::astro::{circular_earth_elements, Anomaly, ElementDeltas, OrbitalElements};
use crate::constants::{AU, MU_SUN, SECONDS_PER_YEAR};
use crate::deflection::{deflect, next_passage, outbound_crossing, DeflectionSetup, Encounter, FormationMode};
use crate::error::{Error, Result};
use crate::formation::{
    natural_orbit_objectives, shaped_objectives, ForceModel, ForceSwitches, ShapedControlSetup, ShapedOrbit,
    SHAPED_LOWER, SHAPED_UPPER,
};
use crate::moo::{optimize, Evaluation, Member, ProblemSpec};
use crate::plume::PlumeConstants;
use crate::sizing::{mass_budget, SpacecraftDesign};
use crate::sublimation::AsteroidModel;

/// Objective value given to designs whose evaluation fails.
const FAILED_OBJECTIVE: f64 = 1e30;

fn metadata(sc: &Scenario, experiment: &str) -> Result<Metadata> {
    let open = OpenParameters {
        enthalpy_sublimation_j_per_kg: sc.enthalpy()?,
        specific_impulse_s: sc.specific_impulse()?,
        emissivity: sc.asteroid.emissivity,
        array_concentration: sc.array_concentration(),
    };
    let mut meta = Metadata::with_digest(experiment, &sc.name, &sc.fingerprint()?, sc.seed, open);
    meta.detail("schema_version", sc.schema_version);
    Ok(meta)
}

fn perihelion(k: &OrbitalElements) -> f64 {
    k.a * (1.0 - k.e)
}

fn sorted_members(members: &[Member]) -> Vec<&Member> {
    let mut v: Vec<&Member> = members.iter().filter(|m| m.is_feasible()).collect();
    v.sort_by(|a, b| {
        a.objectives
            .iter()
            .zip(&b.objectives)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    v
}

/// Pareto fronts of natural formation orbits (maximum distance against
/// plume angle) for each minimum along-track distance.
pub fn run_formation_design(sc: &Scenario) -> Result<ResultTable> {
    let nat = sc.natural()?;
    let k = sc.asteroid()?.elements;
    let mut meta = metadata(sc, "formation-design")?;
    meta.detail("optimizer", &sc.optimizer);
    meta.detail("lower_bounds", &nat.lower);
    meta.detail("upper_bounds", &nat.upper);
    let mut table = ResultTable::new(
        "formation_design",
        vec![
            Column::new("y_limit_m", "m"),
            Column::new("family", "-"),
            Column::new("max_distance_m", "m"),
            Column::new("plume_angle_rad", "rad"),
            Column::new("min_abs_y_m", "m"),
            Column::new("de", "1"),
            Column::new("di_rad", "rad"),
            Column::new("draan_rad", "rad"),
            Column::new("dargp_rad", "rad"),
            Column::new("dmean_rad", "rad"),
        ],
        meta,
    );
    let mut feasible_counts = Vec::new();
    for (j, &y_lim) in nat.y_limits.iter().enumerate() {
        let spec = ProblemSpec::new(nat.lower.clone(), nat.upper.clone(), 2, 1, |x: &[f64]| {
            let o = natural_orbit_objectives(&ElementDeltas::from_array(x), &k, y_lim);
            Evaluation::new(vec![o.max_distance, o.plume_angle], vec![o.constraint])
        })?;
        let res = optimize(&spec, &sc.optimizer, sc.seed.wrapping_add(j as u64))?;
        let members = sorted_members(res.archive.members());
        if members.is_empty() {
            warn!("formation design with y_lim = {y_lim} m: no feasible orbit inside the bounds");
        }
        info!("y_lim = {y_lim} m: {} feasible archive members", members.len());
        feasible_counts.push(members.len());
        for m in members {
            let dk = ElementDeltas::from_array(&m.decision);
            let o = natural_orbit_objectives(&dk, &k, y_lim);
            table.push(vec![
                y_lim.into(),
                o.family.label().into(),
                o.max_distance.into(),
                o.plume_angle.into(),
                o.min_abs_y.into(),
                dk.de.into(),
                dk.di.into(),
                dk.draan.into(),
                dk.dargp.into(),
                dk.dmean.into(),
            ])?;
        }
    }
    table.metadata.detail("feasible_members", &feasible_counts);
    Ok(table)
}

/// Environment of one spacecraft of `design` near `asteroid`, with its mass
/// sized at perihelion.
pub fn spacecraft_mass(design: &SpacecraftDesign, asteroid: &AsteroidModel) -> Result<f64> {
    Ok(mass_budget(design, perihelion(&asteroid.elements))?.total)
}

/// Pareto archive of shaped formation orbits: propellant fraction, maximum
/// distance and maximum control acceleration.
pub fn run_shaped_design(sc: &Scenario) -> Result<ResultTable> {
    let shaped = sc.shaped()?;
    let eff = sc.efficiencies()[0];
    let design = sc.design(eff)?;
    let asteroid = sc.asteroid()?;
    let m_sc = spacecraft_mass(&design, &asteroid)?;
    let isp = sc.specific_impulse()?;
    let forces = ForceModel {
        asteroid: &asteroid,
        design: &design,
        spacecraft_mass: m_sc,
        plume: PlumeConstants::default(),
        switches: ForceSwitches::default(),
        mu_sun: MU_SUN,
    };
    let setup = ShapedControlSetup {
        forces,
        asteroid_elements: asteroid.elements,
        duration: shaped.control_duration,
        samples: shaped.control_samples,
        specific_impulse: isp,
    };
    let spec = ProblemSpec::new(SHAPED_LOWER.to_vec(), SHAPED_UPPER.to_vec(), 3, 2, |x: &[f64]| {
        let mut c = [0.0; 8];
        c.copy_from_slice(x);
        let orbit = ShapedOrbit::new(c);
        match shaped_objectives(&orbit, &setup) {
            Ok(o) => Evaluation::new(vec![o.mass_fraction, o.max_distance, o.max_control], vec![o.c1, o.c2]),
            // A path through the body or otherwise unusable counts as infeasible.
            Err(_) => Evaluation::new(vec![FAILED_OBJECTIVE; 3], vec![FAILED_OBJECTIVE; 2]),
        }
    })?;
    let res = optimize(&spec, &sc.optimizer, sc.seed)?;

    let mut meta = metadata(sc, "shaped-design")?;
    meta.detail("optimizer", &sc.optimizer);
    meta.detail("efficiency", eff.label());
    meta.detail("aperture_diameter_m", design.aperture_diameter);
    meta.detail("n_spacecraft", design.n_spacecraft);
    meta.detail("concentration_ratio", design.concentration_ratio);
    meta.detail("spacecraft_mass_kg", m_sc);
    meta.detail("control_duration_s", shaped.control_duration);
    meta.detail("control_samples", shaped.control_samples);
    meta.detail("evaluations", res.evaluations);
    let mut columns = vec![
        Column::new("mass_fraction", "1"),
        Column::new("max_distance_m", "m"),
        Column::new("max_control_m_s2", "m/s^2"),
        Column::new("max_thrust_n", "N"),
        Column::new("max_x_m", "m"),
        Column::new("max_y_m", "m"),
    ];
    for name in ["x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2"] {
        columns.push(Column::new(&format!("{name}_m"), "m"));
    }
    let mut table = ResultTable::new("shaped_design", columns, meta);
    let members = sorted_members(res.archive.members());
    if members.is_empty() {
        warn!("shaped design: no feasible orbit found");
    }
    for m in members {
        let mut c = [0.0; 8];
        c.copy_from_slice(&m.decision);
        let o = shaped_objectives(&ShapedOrbit::new(c), &setup)?;
        let mut row: Vec<Value> = vec![
            o.mass_fraction.into(),
            o.max_distance.into(),
            o.max_control.into(),
            o.max_thrust.into(),
            o.c1.into(),
            o.c2.into(),
        ];
        row.extend(c.iter().map(|&v| Value::from(v)));
        table.push(row)?;
    }
    Ok(table)
}

/// Deflection setup for one design flown in the scenario's formation.
fn deflection_setup(sc: &Scenario, asteroid: AsteroidModel, design: SpacecraftDesign, mode: FormationMode) -> DeflectionSetup {
    let mut s = DeflectionSetup::new(asteroid, design, mode);
    s.step_fraction = sc.deflection.step_fraction;
    s.include_tug = sc.deflection.include_tug;
    s
}

fn apophis_encounter(sc: &Scenario, k: &OrbitalElements, warning: f64) -> Result<Encounter> {
    Encounter::virtual_impact(k, &sc.earth.elements(), 0.0, warning, MU_SUN)
}

/// Design with the spacecraft count and efficiency replaced.
fn variant(base: &SpacecraftDesign, d: f64, n: u32, cr: f64, eff: EfficiencyChoice) -> SpacecraftDesign {
    let mut design = SpacecraftDesign::new(d, n, cr, eff.option());
    design.array_concentration = base.array_concentration;
    design
}

/// Pareto archive of impact parameter against launched mass over aperture,
/// spacecraft count and concentration ratio.
pub fn run_fleet_design(sc: &Scenario) -> Result<ResultTable> {
    let space = sc.design_space()?;
    let mode = sc.formation_mode()?;
    let asteroid = sc.asteroid()?;
    let warnings = sc.warning_times()?;
    if warnings.is_empty() {
        return Err(Error::Scenario("fleet design needs at least one warning time".into()));
    }
    let mut meta = metadata(sc, "fleet-design")?;
    meta.detail("optimizer", &sc.optimizer);
    meta.detail("formation_mode", mode.label());
    meta.detail("step_fraction", sc.deflection.step_fraction);
    meta.detail("include_tug", sc.deflection.include_tug);
    meta.detail("design_lower", space.lower);
    meta.detail("design_upper", space.upper);
    let mut table = ResultTable::new(
        "fleet_design",
        vec![
            Column::new("mode", "-"),
            Column::new("efficiency", "-"),
            Column::new("warning_years", "year"),
            Column::new("aperture_m", "m"),
            Column::new("n_spacecraft", "1"),
            Column::new("concentration_ratio", "1"),
            Column::new("impact_parameter_km", "km"),
            Column::new("total_mass_kg", "kg"),
            Column::new("spacecraft_mass_kg", "kg"),
        ],
        meta,
    );
    let base = SpacecraftDesign {
        array_concentration: space.array_concentration,
        ..SpacecraftDesign::new(1.0, 1, 1.0, EfficiencyChoice::Low.option())
    };
    let mut run = 0u64;
    for eff in sc.efficiencies() {
        for &warning in &warnings {
            let encounter = apophis_encounter(sc, &asteroid.elements, warning)?;
            let evaluate = |x: &[f64]| -> Result<(f64, f64, f64)> {
                let design = variant(&base, x[0], x[1] as u32, x[2], eff);
                let m_sc = spacecraft_mass(&design, &asteroid)?;
                let setup = deflection_setup(sc, asteroid, design, mode);
                let out = deflect(&setup, &encounter, warning)?;
                Ok((out.impact_parameter, design.n_spacecraft as f64 * m_sc, m_sc))
            };
            let spec = ProblemSpec::new(space.lower.to_vec(), space.upper.to_vec(), 2, 1, |x: &[f64]| {
                match evaluate(x) {
                    Ok((b, mass, _)) => Evaluation::new(vec![-b, mass], vec![0.0]),
                    Err(_) => Evaluation::new(vec![FAILED_OBJECTIVE; 2], vec![1.0]),
                }
            })?
            .with_integer(vec![false, true, false])?;
            let res = optimize(&spec, &sc.optimizer, sc.seed.wrapping_add(run))?;
            run += 1;
            let members = sorted_members(res.archive.members());
            info!(
                "fleet design ({}, {:.1} years): {} archive members",
                eff.label(),
                warning / SECONDS_PER_YEAR,
                members.len()
            );
            for m in members {
                let (b, mass, m_sc) = evaluate(&m.decision)?;
                table.push(vec![
                    mode.label().into(),
                    eff.label().into(),
                    (warning / SECONDS_PER_YEAR).into(),
                    m.decision[0].into(),
                    (m.decision[1] as u32).into(),
                    m.decision[2].into(),
                    (b / 1e3).into(),
                    mass.into(),
                    m_sc.into(),
                ])?;
            }
        }
    }
    Ok(table)
}

/// One cell of a deflection map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapCell {
    pub aperture: f64,
    pub n_spacecraft: u32,
    pub warning: f64,
    pub warning_index: usize,
    pub efficiency: EfficiencyChoice,
}

/// Impact parameter over spacecraft count and warning time for each
/// aperture and efficiency option, flown in the scenario's formation.
pub fn run_deflection_map(sc: &Scenario) -> Result<ResultTable> {
    let spec = sc
        .deflection_map
        .as_ref()
        .ok_or_else(|| Error::Scenario("this experiment needs a 'deflection_map' section".into()))?;
    let apertures = sc.map_apertures(spec)?;
    let mode = sc.formation_mode()?;
    let asteroid = sc.asteroid()?;
    let warnings = sc.warning_times()?;
    if warnings.is_empty() {
        return Err(Error::Scenario("deflection map needs at least one warning time".into()));
    }
    let base = SpacecraftDesign {
        array_concentration: sc.array_concentration(),
        ..SpacecraftDesign::new(1.0, 1, 1.0, EfficiencyChoice::Low.option())
    };
    let mut cells = Vec::new();
    for eff in sc.efficiencies() {
        for &aperture in &apertures {
            for &n_spacecraft in &spec.n_spacecraft {
                for (warning_index, &warning) in warnings.iter().enumerate() {
                    cells.push(MapCell {
                        aperture,
                        n_spacecraft,
                        warning,
                        warning_index,
                        efficiency: eff,
                    });
                }
            }
        }
    }
    let encounters = warnings
        .iter()
        .map(|&w| apophis_encounter(sc, &asteroid.elements, w))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Result<Vec<Value>>> = cells
        .par_iter()
        .map(|cell| {
            let design = variant(&base, cell.aperture, cell.n_spacecraft, spec.concentration_ratio, cell.efficiency);
            design.validate()?;
            let setup = deflection_setup(sc, asteroid, design, mode);
            let out = deflect(&setup, &encounters[cell.warning_index], cell.warning)?;
            Ok(vec![
                mode.label().into(),
                cell.efficiency.label().into(),
                cell.aperture.into(),
                spec.concentration_ratio.into(),
                cell.n_spacecraft.into(),
                (cell.warning / SECONDS_PER_YEAR).into(),
                (out.impact_parameter / 1e3).into(),
                out.arc.halted_at.map(|t| t / SECONDS_PER_YEAR).into(),
                out.arc.contamination.into(),
                out.arc.spacecraft_mass.into(),
                (asteroid.mass - out.arc.asteroid_mass).into(),
            ])
        })
        .collect();

    let mut meta = metadata(sc, "deflection-map")?;
    meta.detail("formation_mode", mode.label());
    meta.detail("formation", mode);
    meta.detail("step_fraction", sc.deflection.step_fraction);
    meta.detail("include_tug", sc.deflection.include_tug);
    let mut table = ResultTable::new(
        "deflection_map",
        vec![
            Column::new("mode", "-"),
            Column::new("efficiency", "-"),
            Column::new("aperture_m", "m"),
            Column::new("concentration_ratio", "1"),
            Column::new("n_spacecraft", "1"),
            Column::new("warning_years", "year"),
            Column::new("impact_parameter_km", "km"),
            Column::new("halt_years", "year"),
            Column::new("contamination_m", "m"),
            Column::new("spacecraft_mass_kg", "kg"),
            Column::new("sublimated_mass_kg", "kg"),
        ],
        meta,
    );
    for row in results {
        table.push(row?)?;
    }
    Ok(table)
}

/// Planar asteroid orbit with the given apsides, at perihelion at t = 0.
pub fn planar_orbit(aphelion: f64, perihelion: f64) -> OrbitalElements {
    let a = 0.5 * (aphelion + perihelion);
    let e = (aphelion - perihelion) / (aphelion + perihelion);
    OrbitalElements {
        a,
        e,
        i: 0.0,
        raan: 0.0,
        argp: 0.0,
        anomaly: Anomaly::Mean(0.0),
        epoch: 0.0,
    }
}

/// Encounter with a circular Earth at the first outbound crossing of 1 AU
/// at least `warning` seconds after the perihelion start. `None` when the
/// orbit does not reach 1 AU.
pub fn sweep_encounter(k: &OrbitalElements, warning: f64) -> Result<Option<Encounter>> {
    if k.e < 1e-8 {
        return Ok(None);
    }
    let Some(nu_x) = outbound_crossing(k, AU) else {
        return Ok(None);
    };
    let t_moid = next_passage(k, nu_x, warning, MU_SUN);
    let earth = circular_earth_elements(0.0, 0.0);
    Encounter::at_anomalies(k, nu_x, &earth, nu_x, 0.0, t_moid, MU_SUN).map(Some)
}

/// Impact parameter over a grid of aphelion and perihelion radii. The
/// deflection starts at perihelion and runs until the encounter at the
/// first outbound crossing of the Earth's orbit after the warning time.
pub fn run_eccentricity_sweep(sc: &Scenario) -> Result<ResultTable> {
    let grid = sc.sweep_grid()?;
    let eff = sc.efficiencies()[0];
    let design = sc.design(eff)?;
    let mode = sc.formation_mode()?;
    let base = sc.asteroid()?;
    let mut cells = Vec::new();
    for &rp in &grid.perihelion {
        for &ra in &grid.aphelion {
            cells.push((ra, rp));
        }
    }
    let results: Vec<Result<Vec<Value>>> = cells
        .par_iter()
        .map(|&(ra, rp)| {
            let ecc = (ra - rp) / (ra + rp);
            let mut row: Vec<Value> = vec![(ra / AU).into(), (rp / AU).into(), ecc.into()];
            if ra < rp {
                row.extend([Value::Missing, Value::Missing, Value::Missing, false.into()]);
                return Ok(row);
            }
            let k = planar_orbit(ra, rp);
            match sweep_encounter(&k, grid.warning_time)? {
                None => row.extend([Value::Missing, Value::Missing, Value::Missing, false.into()]),
                Some(enc) => {
                    let asteroid = AsteroidModel { elements: k, ..base };
                    let mut setup = deflection_setup(sc, asteroid, design, mode);
                    // The orbit is planar, so no out-of-plane forcing.
                    setup.include_tug = false;
                    let out = deflect(&setup, &enc, enc.warning_time())?;
                    let nu_x = outbound_crossing(&k, AU).unwrap_or(0.0);
                    row.extend([
                        nu_x.to_degrees().into(),
                        (enc.warning_time() / SECONDS_PER_YEAR).into(),
                        (out.impact_parameter / 1e3).into(),
                        true.into(),
                    ]);
                }
            }
            Ok(row)
        })
        .collect();

    let mut meta = metadata(sc, "eccentricity-sweep")?;
    meta.detail("formation_mode", mode.label());
    meta.detail("formation", mode);
    meta.detail("efficiency", eff.label());
    meta.detail("aperture_diameter_m", design.aperture_diameter);
    meta.detail("n_spacecraft", design.n_spacecraft);
    meta.detail("concentration_ratio", design.concentration_ratio);
    meta.detail("minimum_warning_years", grid.warning_time / SECONDS_PER_YEAR);
    meta.detail("step_fraction", sc.deflection.step_fraction);
    meta.detail("include_tug", false);
    let mut table = ResultTable::new(
        "eccentricity_sweep",
        vec![
            Column::new("aphelion_au", "AU"),
            Column::new("perihelion_au", "AU"),
            Column::new("eccentricity", "1"),
            Column::new("crossing_anomaly_deg", "deg"),
            Column::new("warning_years", "year"),
            Column::new("impact_parameter_km", "km"),
            Column::new("present", "-"),
        ],
        meta,
    );
    for row in results {
        table.push(row?)?;
    }
    Ok(table)
}
