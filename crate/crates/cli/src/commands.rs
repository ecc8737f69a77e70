use std::io::Write;

use dkp_qes::oracles::log_grid;
use dkp_qes::scan::{self as scanning, write_csv, ScanSpec};
use dkp_qes::verify::{run_verification, VerifyCase, VerifyOptions};
use dkp_qes::{
    classify as heun_class, eigenpair, energy_levels, sector_coefficients,
    solve_determinant_constraint, DkpError, DoubleDouble, EnergyPair, PotentialParams,
    RadialSolution, RationalPotential,
};

use crate::config::RunConfig;
use crate::Failure;

type D = DoubleDouble;

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    num(v.unwrap_or(f64::NAN))
}

fn csv_safe(s: impl ToString) -> String {
    s.to_string().replace(',', ";")
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn spectrum(cfg: &RunConfig, out: &mut impl Write) -> Result<(), Failure> {
    let sectors = cfg.sectors()?;
    if sectors.is_empty() {
        return Err(usage("`sector` is required"));
    }
    let p = cfg.params()?;
    let mass = cfg.mass()?;
    let j = cfg.j();
    let levels = cfg.levels()?;
    writeln!(
        out,
        "sector,n,epsilon2,E_plus,E_minus,spectrum,admissible,reasons"
    )?;
    let mut admissible = 0;
    for sector in sectors {
        for n in levels.clone() {
            match energy_levels(&p, mass, j, sector, n) {
                Ok(pt) => {
                    let kind = match pt.energy {
                        EnergyPair::Real { .. } => "real",
                        EnergyPair::Complex { .. } => "complex",
                        EnergyPair::NoRealSpectrum => "NoRealSpectrum",
                    };
                    if pt.is_admissible() {
                        admissible += 1;
                    }
                    writeln!(
                        out,
                        "{sector},{n},{},{},{},{kind},{},{}",
                        opt(pt.epsilon_squared),
                        opt(pt.energy.plus()),
                        opt(pt.energy.minus()),
                        pt.is_admissible(),
                        pt.admissibility.reasons()
                    )?;
                }
                Err(e) => writeln!(out, "{sector},{n},nan,nan,nan,none,false,{}", csv_safe(e))?,
            }
        }
    }
    if admissible == 0 {
        return Err(Failure::Inadmissible("no admissible level".into()));
    }
    Ok(())
}

fn write_solution(
    out: &mut impl Write,
    sol: &RadialSolution<D>,
    param: f64,
    radii: &[f64],
) -> Result<(), Failure> {
    for &r in radii {
        let w = sol.evaluate(D::from(r)).map_err(usage)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            sol.n,
            num(param),
            num(sol.energy.as_f64()),
            num(r),
            num(w.psi.as_f64()),
            num(w.dpsi.as_f64()),
            num(w.d2psi.as_f64())
        )?;
    }
    Ok(())
}

/// Distinguishes "nothing admissible" from "admissible but no root".
#[derive(Default)]
struct Tally {
    found: usize,
    inadmissible: usize,
    other: Vec<String>,
}

impl Tally {
    fn record(&mut self, n: usize, e: DkpError) -> Result<(), Failure> {
        match e {
            DkpError::InvalidInterval { .. } => Err(usage(e)),
            DkpError::InadmissibleThroughoutInterval
            | DkpError::NonAlgebraizable { .. }
            | DkpError::SectorConstraintViolated { .. }
            | DkpError::Qes(_) => {
                self.inadmissible += 1;
                self.other.push(format!("n={n}: {e}"));
                Ok(())
            }
            _ => {
                self.other.push(format!("n={n}: {e}"));
                Ok(())
            }
        }
    }

    fn finish(self, levels: usize) -> Result<(), Failure> {
        if self.found > 0 {
            Ok(())
        } else if self.inadmissible == levels {
            Err(Failure::Inadmissible(self.other.join("; ")))
        } else {
            Err(Failure::NoRoot(if self.other.is_empty() {
                "no root".to_string()
            } else {
                self.other.join("; ")
            }))
        }
    }
}

fn lifted(p: &PotentialParams<f64>) -> PotentialParams<D> {
    p.map(D::from)
}

pub fn wavefunction(cfg: &RunConfig, out: &mut impl Write) -> Result<(), Failure> {
    let sector = cfg.single_sector()?;
    let p = lifted(&cfg.params()?);
    let mass = D::from(cfg.mass()?);
    let j = cfg.j();
    let levels = cfg.levels()?;
    let free = cfg.free()?;
    let ([lo, hi], points) = cfg.radial_grid()?;
    let radii = log_grid(lo, hi, points);
    writeln!(out, "n,param,E,r,psi,dpsi,d2psi")?;
    let mut tally = Tally::default();
    for n in levels.clone() {
        match free {
            Some((param, (a, b))) => {
                match solve_determinant_constraint(
                    &p,
                    mass,
                    j,
                    sector,
                    n,
                    param,
                    (D::from(a), D::from(b)),
                ) {
                    Ok(roots) => {
                        for root in roots {
                            let q = p.with(param, root.value);
                            match eigenpair(&q, mass, j, sector, n) {
                                Ok(sol) => {
                                    tally.found += 1;
                                    write_solution(out, &sol, root.value.as_f64(), &radii)?;
                                }
                                Err(e) => tally.record(n, e)?,
                            }
                        }
                    }
                    Err(e) => tally.record(n, e)?,
                }
            }
            None => match eigenpair(&p, mass, j, sector, n) {
                Ok(sol) => {
                    tally.found += 1;
                    write_solution(out, &sol, f64::NAN, &radii)?;
                }
                Err(e) => tally.record(n, e)?,
            },
        }
    }
    tally.finish(levels.count())
}

pub fn constraint(cfg: &RunConfig, out: &mut impl Write) -> Result<(), Failure> {
    let sector = cfg.single_sector()?;
    let (param, (a, b)) = cfg
        .free()?
        .ok_or_else(|| usage("`free_param` and `interval` are required"))?;
    let p = lifted(&cfg.params()?);
    let mass = D::from(cfg.mass()?);
    let j = cfg.j();
    let levels = cfg.levels()?;
    writeln!(
        out,
        "n,{},E_plus,E_minus,det_normalized,relative_tail,admissible",
        param.as_str()
    )?;
    let mut tally = Tally::default();
    for n in levels.clone() {
        match solve_determinant_constraint(&p, mass, j, sector, n, param, (D::from(a), D::from(b)))
        {
            Ok(roots) => {
                for root in roots {
                    tally.found += 1;
                    writeln!(
                        out,
                        "{n},{},{},{},{},{},{}",
                        num(root.value.as_f64()),
                        opt(root.spectrum.energy.plus().map(D::as_f64)),
                        opt(root.spectrum.energy.minus().map(D::as_f64)),
                        num(root.normalized_determinant.as_f64()),
                        num(root.relative_tail.as_f64()),
                        root.spectrum.is_admissible()
                    )?;
                }
            }
            Err(e) => tally.record(n, e)?,
        }
    }
    tally.finish(levels.count())
}

pub fn scan(cfg: &RunConfig, out: &mut impl Write) -> Result<(), Failure> {
    let (parameter, range, points) = cfg.scan()?;
    let spec = ScanSpec {
        sector: cfg.single_sector()?,
        params: cfg.params()?,
        mass: cfg.mass()?,
        j: cfg.j(),
        levels: cfg.levels()?,
        parameter,
        range,
        points,
    };
    write_csv(&scanning::scan(&spec), out)?;
    Ok(())
}

pub fn verify(cfg: &RunConfig, seed: u64, out: &mut impl Write) -> Result<(), Failure> {
    let opts = VerifyOptions {
        seed,
        quantization_offset: cfg.quantization_offset.unwrap_or(0.0),
        ..VerifyOptions::default()
    };
    let sectors = cfg.sectors()?;
    if sectors.is_empty() {
        return Err(Failure::NoRoot("no verification case in config".into()));
    }
    let params = cfg.params()?;
    let levels = cfg.levels()?;
    let levels = *levels.start()..=(*levels.end()).min(opts.max_residual_n);
    let cases: Vec<VerifyCase> = sectors
        .into_iter()
        .map(|sector| -> Result<VerifyCase, Failure> {
            Ok(VerifyCase {
                sector,
                params,
                mass: cfg.mass()?,
                j: cfg.j(),
                levels: levels.clone(),
                free: cfg.free()?,
            })
        })
        .collect::<Result<_, _>>()?;
    let report = run_verification(&cases, &opts);
    for c in &report.checks {
        writeln!(
            out,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )?;
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    writeln!(
        out,
        "summary: {passed}/{} checks passed, {} eigenpairs checked, seed {seed}",
        report.checks.len(),
        report.eigenpairs_checked
    )?;
    if !report.all_passed() {
        return Err(Failure::Verification(format!(
            "{} checks failed",
            report.checks.len() - passed
        )));
    }
    if report.eigenpairs_checked == 0 {
        return Err(Failure::NoRoot("no admissible eigenpair to check".into()));
    }
    Ok(())
}

pub fn classify(cfg: &RunConfig, out: &mut impl Write) -> Result<(), Failure> {
    if let Some(pc) = &cfg.potential {
        let class = heun_class(&pc.to_potential()?).map_err(usage)?;
        writeln!(out, "potential,{class}")?;
        return Ok(());
    }
    let sectors = cfg.sectors()?;
    if sectors.is_empty() {
        return Err(usage("give `potential` or at least one `sector`"));
    }
    let p = cfg.params()?;
    let mass = cfg.mass()?;
    for sector in sectors {
        let coeffs = sector_coefficients(&p, mass, mass * mass, cfg.j(), sector).map_err(usage)?;
        let class = heun_class(&RationalPotential::from_inverse_quartic(&coeffs)).map_err(usage)?;
        writeln!(out, "{sector},{class}")?;
    }
    Ok(())
}
