//! The default verification matrix run by `dunkl-kg verify`.

use std::collections::BTreeMap;

use dunkl_kg::cartesian::{enumerate_cartesian_levels, OscillatorConfig};
use dunkl_kg::coulomb::{CoulombConfig, CoulombState};
use dunkl_kg::dunkl::{Parity, ParitySector, WignerParams};
use dunkl_kg::oracle::{
    verify_degeneracy_match, verify_fine_structure_order, verify_fine_structure_vanishing, verify_ode_residual,
    verify_orthonormality, verify_spectrum_1d, ErrorSummary, GridSpec, OrthonormalitySuite, ResidualTarget,
    VerificationReport, VerifyOptions,
};
use dunkl_kg::spherical::{sector_states, SphericalQuantum};
use serde::Serialize;

use crate::error::{invalid, CliError};

pub const GROUPS: [&str; 5] = ["spectrum-1d", "orthonormality", "ode-residual", "degeneracy", "finestructure"];

/// Energy perturbation applied in negative-control mode.
pub const NEGATIVE_CONTROL_SHIFT: f64 = 1e-2;

const RESIDUAL_POINTS: usize = 60;
const FINE_COUPLINGS: [f64; 3] = [0.1, 0.05, 0.025];

#[derive(Debug, Clone, Serialize)]
pub struct GroupedReport {
    pub group: &'static str,
    #[serde(flatten)]
    pub report: VerificationReport,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct GroupSummary {
    pub total: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub negative_control: bool,
    pub groups: BTreeMap<&'static str, GroupSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixOutcome {
    pub summary: Summary,
    pub reports: Vec<GroupedReport>,
}

impl MatrixOutcome {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Checks which groups to run; an empty list means all of them.
pub fn select_groups(only: &[String]) -> Result<Vec<&'static str>, CliError> {
    if only.is_empty() {
        return Ok(GROUPS.to_vec());
    }
    let mut out = Vec::new();
    for name in only {
        let g = GROUPS
            .iter()
            .find(|g| **g == name.as_str())
            .ok_or_else(|| invalid(format!("unknown verification group {name:?}; expected one of {}", GROUPS.join(", "))))?;
        if !out.contains(g) {
            out.push(*g);
        }
    }
    Ok(out)
}

fn mu(a: f64, b: f64, c: f64) -> WignerParams {
    WignerParams::new(a, b, c).expect("matrix parameters are valid")
}

fn osc(m: f64, omega: f64) -> OscillatorConfig {
    OscillatorConfig::new(m, omega).expect("matrix parameters are valid")
}

fn coul(m: f64, g: f64) -> CoulombConfig {
    CoulombConfig::new(m, g).expect("matrix parameters are valid")
}

fn sector(label: &str) -> ParitySector {
    ParitySector::parse(label).expect("valid label")
}

pub fn spectrum_1d(options: &VerifyOptions) -> Result<Vec<VerificationReport>, CliError> {
    let c = osc(0.5, 1.0);
    let mut out = Vec::new();
    for m in [0.0, 0.25, 0.5, 1.5] {
        for s in [Parity::Even, Parity::Odd] {
            out.extend(verify_spectrum_1d(m, s, &c, 5, options)?);
        }
    }
    Ok(out)
}

pub fn orthonormality_suites() -> Vec<OrthonormalitySuite> {
    let mut suites = Vec::new();
    for m in [0.0, 0.25, 0.5, 1.5] {
        suites.push(OrthonormalitySuite::Cartesian1d { mu: m, config: osc(0.5, 1.0), n_max: 8 });
    }
    for p in [mu(0.0, 0.0, 0.0), mu(0.5, 0.5, 0.5), mu(0.3, 0.7, 0.2), mu(1.2, 0.1, 0.9)] {
        suites.push(OrthonormalitySuite::SphericalAngular { params: p, ang_max: 4 });
    }
    suites.push(OrthonormalitySuite::SphericalFull { params: mu(0.5, 0.5, 0.5), config: osc(0.5, 1.0), max_degree: 2 });
    suites.push(OrthonormalitySuite::SphericalFull { params: mu(0.3, 0.7, 0.2), config: osc(1.0, 0.8), max_degree: 2 });
    suites.push(OrthonormalitySuite::CoulombRadial {
        params: mu(0.3, 0.7, 0.2),
        config: coul(1.0, 0.9),
        n_max: 4,
        ang_max: 2,
    });
    suites
}

pub fn orthonormality() -> Result<Vec<VerificationReport>, CliError> {
    orthonormality_suites().iter().map(|s| verify_orthonormality(s).map_err(CliError::from)).collect()
}

pub fn residual_targets() -> Vec<ResidualTarget> {
    let c = osc(0.5, 1.0);
    let mut targets = Vec::new();
    for m in [0.0, 0.5, 1.5] {
        for n in 0..4 {
            for parity in [Parity::Even, Parity::Odd] {
                targets.push(ResidualTarget::B { n, parity, mu: m, config: c });
            }
        }
    }
    let p = mu(0.3, 0.7, 0.2);
    let picks: Vec<SphericalQuantum> = ["+++", "-+-", "---"]
        .iter()
        .flat_map(|l| sector_states(sector(l), 3))
        .filter(|q| q.n <= 1)
        .collect();
    for q in picks.iter().step_by(2).take(8) {
        targets.push(ResidualTarget::S1 { q: *q, params: p });
        targets.push(ResidualTarget::S2 { q: *q, params: p });
        targets.push(ResidualTarget::R { q: *q, params: p, config: c });
    }
    for (params, g) in [(WignerParams::undeformed(), 0.3), (p, 0.9)] {
        for (n, two_nu, two_ell, label) in [(0, 0, 0, "+++"), (2, 0, 1, "++-"), (1, 2, 2, "--+")] {
            let state = CoulombState::new(n, two_nu, two_ell, sector(label)).expect("admissible");
            targets.push(ResidualTarget::AA { state, params, config: coul(1.0, g) });
        }
    }
    targets
}

pub fn ode_residual(options: &VerifyOptions) -> Result<Vec<VerificationReport>, CliError> {
    residual_targets()
        .iter()
        .map(|t| verify_ode_residual(t, RESIDUAL_POINTS, options).map_err(CliError::from))
        .collect()
}

/// Level counts `(k+1)(k+2)/2` of the undeformed oscillator for `k ≤ 4`.
pub fn undeformed_degeneracies(options: &VerifyOptions) -> Result<VerificationReport, CliError> {
    let c = osc(0.5, 1.0);
    let cutoff = c.m * c.m + 2.0 * c.m_omega() * 4.0;
    let levels = enumerate_cartesian_levels(&WignerParams::undeformed(), &c, cutoff)?;
    let got: Vec<f64> = levels.levels.iter().map(|l| l.degeneracy as f64).collect();
    let expected: Vec<f64> = (0..=4u32).map(|k| ((k + 1) * (k + 2) / 2) as f64).collect();
    let mut worst = 0.0f64;
    for (k, l) in levels.levels.iter().enumerate() {
        let e2 = c.m * c.m + 2.0 * c.m_omega() * k as f64;
        worst = worst.max((l.e_squared - (e2 + options.energy_shift)).abs() / e2);
    }
    let pass = got == expected && worst < 1e-12;
    Ok(VerificationReport {
        quantity: "degeneracy-undeformed k<=4".into(),
        closed_form: expected.iter().sum(),
        oracle: got.iter().sum(),
        errors: ErrorSummary { abs: worst, rel: worst, tolerance: 1e-12 },
        history: got,
        pass,
        detail: Some("expected level sizes 1, 3, 6, 10, 15".into()),
    })
}

pub fn degeneracy(options: &VerifyOptions) -> Result<Vec<VerificationReport>, CliError> {
    let c = osc(0.5, 1.0);
    Ok(vec![
        verify_degeneracy_match(&mu(0.5, 0.5, 0.5), &c, 12.25, options)?,
        verify_degeneracy_match(&mu(0.3, 0.7, 0.2), &osc(1.0, 0.8), 9.0, options)?,
        undeformed_degeneracies(options)?,
    ])
}

/// The three `(μ, state)` choices for the order check.
pub fn fine_structure_cases() -> Vec<(WignerParams, CoulombState)> {
    vec![
        (WignerParams::undeformed(), CoulombState::new(0, 0, 0, sector("+++")).expect("admissible")),
        (mu(0.3, 0.7, 0.2), CoulombState::new(1, 1, 0, sector("-++")).expect("admissible")),
        (mu(0.5, 1.0 / 3.0, 0.0), CoulombState::new(2, 2, 1, sector("---")).expect("admissible")),
    ]
}

/// The state on the `X = 5/6` surface.
pub fn vanishing_case() -> (WignerParams, CoulombState, CoulombConfig) {
    (mu(0.5, 1.0 / 3.0, 0.0), CoulombState::new(0, 0, 0, sector("+++")).expect("admissible"), coul(1.0, 0.1))
}

pub fn finestructure(options: &VerifyOptions) -> Result<Vec<VerificationReport>, CliError> {
    let mut out = Vec::new();
    for (params, state) in fine_structure_cases() {
        out.push(verify_fine_structure_order(&state, &params, 1.0, &FINE_COUPLINGS, options)?);
    }
    let (params, state, config) = vanishing_case();
    out.push(verify_fine_structure_vanishing(&state, &params, &config)?);
    Ok(out)
}

/// Runs the selected groups. `grid` overrides the finite-difference grid of
/// the spectrum group.
pub fn run_matrix(groups: &[&'static str], negative_control: bool, grid: Option<GridSpec>) -> Result<MatrixOutcome, CliError> {
    let options = VerifyOptions { energy_shift: if negative_control { NEGATIVE_CONTROL_SHIFT } else { 0.0 }, grid };
    let mut reports = Vec::new();
    for &group in groups {
        let batch = match group {
            "spectrum-1d" => spectrum_1d(&options)?,
            "orthonormality" => orthonormality()?,
            "ode-residual" => ode_residual(&options)?,
            "degeneracy" => degeneracy(&options)?,
            "finestructure" => finestructure(&options)?,
            other => return Err(invalid(format!("unknown verification group {other:?}"))),
        };
        reports.extend(batch.into_iter().map(|report| GroupedReport { group, report }));
    }
    let mut groups_summary: BTreeMap<&'static str, GroupSummary> = BTreeMap::new();
    for r in &reports {
        let g = groups_summary.entry(r.group).or_default();
        g.total += 1;
        g.passed += usize::from(r.report.pass);
    }
    let passed = reports.iter().filter(|r| r.report.pass).count();
    Ok(MatrixOutcome {
        summary: Summary { total: reports.len(), passed, failed: reports.len() - passed, negative_control, groups: groups_summary },
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_selection() {
        assert_eq!(select_groups(&[]).unwrap().len(), 5);
        assert_eq!(select_groups(&["degeneracy".into(), "degeneracy".into()]).unwrap(), vec!["degeneracy"]);
        assert!(select_groups(&["nope".into()]).is_err());
    }

    #[test]
    fn residual_matrix_is_large_enough() {
        let t = residual_targets();
        assert!(t.len() >= 40, "{}", t.len());
        for id in ["B", "S1", "S2", "r", "AA"] {
            assert!(t.iter().any(|x| x.id() == id), "{id}");
        }
    }

    #[test]
    fn fixed_cases_are_admissible() {
        assert_eq!(fine_structure_cases().len(), 3);
        let (params, state, _) = vanishing_case();
        assert!(dunkl_kg::coulomb::fine_structure_vanishing(&params, state.two_nu, state.two_ell, 1e-12));
        assert!(orthonormality_suites().len() >= 3);
    }

    #[test]
    fn degeneracy_group_passes() {
        let out = run_matrix(&["degeneracy"], false, None).unwrap();
        assert!(out.all_pass(), "{:#?}", out.reports);
        let bad = run_matrix(&["degeneracy"], true, None).unwrap();
        assert_eq!(bad.summary.passed, 0);
    }
}
