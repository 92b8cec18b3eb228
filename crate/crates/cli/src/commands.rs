use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use dunkl_kg::cartesian::{
    cartesian_states, density_profile, enumerate_cartesian_levels, total_energy_cartesian, uniform_grid, Branch,
    OscillatorConfig,
};
use dunkl_kg::coulomb::{coulomb_energy, fine_structure_expansion, fine_structure_vanishing, CoulombConfig, CoulombState};
use dunkl_kg::dunkl::{ParitySector, WignerParams};
use dunkl_kg::levels::{exact_bracket, ExactBracket};
use dunkl_kg::oracle::GridSpec;
use dunkl_kg::spherical::{spectrum_spherical, spherical_states, SphericalQuantum};

use crate::config::{Format, Problem, RunConfig};
use crate::error::{invalid, CliError};
use crate::matrix::{run_matrix, select_groups};
use crate::table::{Cell, Table};

const DENSITY_XMAX: f64 = 5.0;
const DENSITY_NPTS: usize = 1001;

fn sector_cells(s: &ParitySector) -> [Cell; 3] {
    s.signs().map(Cell::from)
}

fn within_cutoff(cfg: &RunConfig, e2: f64) -> bool {
    cfg.cutoff.is_none_or(|c| e2 <= c * (1.0 + 1e-12))
}

fn oscillator(cfg: &RunConfig) -> Result<OscillatorConfig, CliError> {
    Ok(OscillatorConfig::new(cfg.mass, cfg.omega)?)
}

/// Full Cartesian level sizes for every exact key up to `max_e2`.
fn level_sizes(params: &WignerParams, osc: &OscillatorConfig, max_e2: f64) -> Result<HashMap<ExactBracket, usize>, CliError> {
    let levels = enumerate_cartesian_levels(params, osc, max_e2 * (1.0 + 1e-9))?;
    Ok(levels.levels.into_iter().map(|l| (l.bracket, l.degeneracy)).collect())
}

pub fn spectrum_table(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.problem {
        Problem::Cartesian => cartesian_table(cfg),
        Problem::Spherical => spherical_table(cfg),
        Problem::Coulomb => coulomb_table(cfg),
    }
}

fn cartesian_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let osc = oscillator(cfg)?;
    let rows: Vec<_> = cartesian_states(&cfg.params, &osc, cfg.nmax, &cfg.sectors)
        .into_iter()
        .map(|st| {
            let e = total_energy_cartesian(&st, Branch::Positive);
            (st, e, e * e)
        })
        .filter(|(_, _, e2)| within_cutoff(cfg, *e2))
        .collect();
    let max_e2 = rows.iter().map(|r| r.2).fold(osc.m * osc.m, f64::max);
    let sizes = level_sizes(&cfg.params, &osc, max_e2)?;
    let mut table = Table::new(["n1", "n2", "n3", "s1", "s2", "s3", "E", "E2", "degeneracy"]);
    for (st, e, e2) in rows {
        let key = exact_bracket((2 * st.total_n() + st.sector.odd_count()) as u64, &st.sector, &cfg.params);
        let [s1, s2, s3] = sector_cells(&st.sector);
        table.push(vec![
            st.n[0].into(),
            st.n[1].into(),
            st.n[2].into(),
            s1,
            s2,
            s3,
            e.into(),
            e2.into(),
            sizes.get(&key).copied().unwrap_or(0).into(),
        ]);
    }
    Ok(table)
}

fn spherical_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let osc = oscillator(cfg)?;
    let mut states: Vec<SphericalQuantum> = spherical_states(cfg.nmax, &cfg.sectors);
    states.sort_by_key(|q| (q.n, q.two_nu, q.two_ell, q.sector));
    let mut rows = Vec::new();
    for q in states {
        let e = spectrum_spherical(&q, &cfg.params, &osc, Branch::Positive)?;
        if within_cutoff(cfg, e * e) {
            rows.push((q, e, e * e));
        }
    }
    let max_e2 = rows.iter().map(|r| r.2).fold(osc.m * osc.m, f64::max);
    let sizes = level_sizes(&cfg.params, &osc, max_e2)?;
    let mut table = Table::new(["N", "2nu", "2ell", "s1", "s2", "s3", "E", "E2", "degeneracy"]);
    for (q, e, e2) in rows {
        let key = exact_bracket((2 * q.n + q.two_nu + q.two_ell) as u64, &q.sector, &cfg.params);
        let [s1, s2, s3] = sector_cells(&q.sector);
        table.push(vec![
            q.n.into(),
            q.two_nu.into(),
            q.two_ell.into(),
            s1,
            s2,
            s3,
            e.into(),
            e2.into(),
            sizes.get(&key).copied().unwrap_or(0).into(),
        ]);
    }
    Ok(table)
}

/// Admissible Coulomb labels in row order. A state that violates the bound
/// constraint is an error, not a skipped row.
fn coulomb_rows(cfg: &RunConfig) -> Vec<CoulombState> {
    let mut out = Vec::new();
    for n in 0..=cfg.nmax {
        for two_nu in 0..=cfg.angmax {
            for two_ell in 0..=cfg.angmax - two_nu {
                for &sector in &cfg.sectors {
                    if let Ok(st) = CoulombState::new(n, two_nu, two_ell, sector) {
                        out.push(st);
                    }
                }
            }
        }
    }
    out
}

fn coulomb_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let cc = CoulombConfig::new(cfg.mass, cfg.coupling)?;
    let mut table =
        Table::new(["n", "2nu", "2ell", "s1", "s2", "s3", "g", "E", "E_rest", "E_nonrel", "E_fine"]);
    for st in coulomb_rows(cfg) {
        let e = coulomb_energy(&st, &cc, &cfg.params)?;
        if !within_cutoff(cfg, e * e) {
            continue;
        }
        let fs = fine_structure_expansion(&st, &cc, &cfg.params)?;
        let [s1, s2, s3] = sector_cells(&st.sector);
        table.push(vec![
            st.n.into(),
            st.two_nu.into(),
            st.two_ell.into(),
            s1,
            s2,
            s3,
            cc.g.into(),
            e.into(),
            fs.e_rest.into(),
            fs.e_nonrel.into(),
            fs.e_fine.into(),
        ]);
    }
    Ok(table)
}

pub fn finestructure_table(cfg: &RunConfig, warn: &mut dyn Write) -> Result<Table, CliError> {
    let cc = CoulombConfig::new(cfg.mass, cfg.coupling)?;
    let mut table = Table::new([
        "n", "2nu", "2ell", "s1", "s2", "s3", "X", "g", "E_exact", "E_rest", "E_nonrel", "E_fine", "residual", "vanishing",
    ]);
    for st in coulomb_rows(cfg) {
        let e = coulomb_energy(&st, &cc, &cfg.params)?;
        if !within_cutoff(cfg, e * e) {
            continue;
        }
        let fs = fine_structure_expansion(&st, &cc, &cfg.params)?;
        let x = cfg.params.sum() + (st.two_nu + st.two_ell) as f64;
        let vanishing =
            fine_structure_vanishing(&cfg.params, st.two_nu, st.two_ell, dunkl_kg::coulomb::FINE_STRUCTURE_TOL);
        if vanishing {
            let _ = writeln!(
                warn,
                "note: state n={} 2nu={} 2ell={} {} has X = 5/6; E_fine = {:e}",
                st.n,
                st.two_nu,
                st.two_ell,
                st.sector.label(),
                fs.e_fine
            );
        }
        let [s1, s2, s3] = sector_cells(&st.sector);
        table.push(vec![
            st.n.into(),
            st.two_nu.into(),
            st.two_ell.into(),
            s1,
            s2,
            s3,
            x.into(),
            cc.g.into(),
            e.into(),
            fs.e_rest.into(),
            fs.e_nonrel.into(),
            fs.e_fine.into(),
            (e - fs.total()).into(),
            vanishing.into(),
        ]);
    }
    Ok(table)
}

/// One `(n, parity)` profile per table, with `n ≤ nmax` and the selected
/// parities, in order of `n` then parity.
pub fn density_tables(cfg: &RunConfig) -> Result<Vec<(String, Table)>, CliError> {
    let osc = oscillator(cfg)?;
    let xmax = cfg.grid_xmax.unwrap_or(DENSITY_XMAX);
    let npts = cfg.grid_npts.unwrap_or(DENSITY_NPTS);
    let grid = uniform_grid(-xmax, xmax, npts);
    let mu = cfg.params.mu1;
    let mut out = Vec::new();
    for n in 0..=cfg.nmax {
        for &parity in &cfg.parities {
            let prof = density_profile(n, parity, mu, &osc, &grid)?;
            let mut table = Table::new(["x", "psi", "density_bare", "density_weighted"]);
            for i in 0..grid.len() {
                table.push(vec![
                    prof.grid[i].into(),
                    prof.psi[i].into(),
                    prof.density_bare[i].into(),
                    prof.density_weighted[i].into(),
                ]);
            }
            let mut meta = cfg.describe("density");
            meta.insert("n".into(), n.to_string());
            meta.insert("s".into(), parity.sign().to_string());
            meta.insert("sectors".into(), cfg.parities.iter().map(|p| p.symbol().to_string()).collect::<Vec<_>>().join(","));
            meta.insert("mu".into(), mu.to_string());
            meta.insert("grid-xmax".into(), xmax.to_string());
            meta.insert("grid-npts".into(), npts.to_string());
            let name = format!("density_n{n}_{}", if parity.sign() > 0 { "even" } else { "odd" });
            out.push((name, table.with_meta(&meta)));
        }
    }
    Ok(out)
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn write_table_to<W: Write>(table: &Table, format: Format, w: W) -> io::Result<()> {
    match format {
        Format::Csv => table.write_csv(w),
        Format::Json => table.write_json(w),
    }
}

fn emit(table: &Table, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(io_err(path))?;
            let mut w = BufWriter::new(file);
            write_table_to(table, format, &mut w).map_err(io_err(path))?;
            w.flush().map_err(io_err(path))
        }
        None => {
            let stdout = io::stdout();
            write_table_to(table, format, stdout.lock()).map_err(io_err(Path::new("<stdout>")))
        }
    }
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let table = spectrum_table(cfg)?.with_meta(&cfg.describe("spectrum"));
    emit(&table, cfg.format, cfg.out.as_deref())
}

pub fn cmd_finestructure(cfg: &RunConfig) -> Result<(), CliError> {
    let mut meta = cfg.describe("finestructure");
    meta.insert("problem".into(), "coulomb".into());
    let table = finestructure_table(cfg, &mut io::stderr())?.with_meta(&meta);
    emit(&table, cfg.format, cfg.out.as_deref())
}

/// A single profile goes to `--out` as a file; several go into `--out` as a
/// directory. Without `--out` everything is written to stdout.
pub fn cmd_density(cfg: &RunConfig) -> Result<(), CliError> {
    let tables = density_tables(cfg)?;
    let ext = match cfg.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    match (&cfg.out, tables.len()) {
        (Some(path), 1) if !path.is_dir() => emit(&tables[0].1, cfg.format, Some(path)),
        (Some(dir), _) => {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            for (name, table) in &tables {
                emit(table, cfg.format, Some(&dir.join(format!("{name}.{ext}"))))?;
            }
            Ok(())
        }
        (None, _) => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            let stdout_err = io_err(Path::new("<stdout>"));
            let res: io::Result<()> = (|| {
                if cfg.format == Format::Json && tables.len() > 1 {
                    let all: Vec<&Table> = tables.iter().map(|t| &t.1).collect();
                    serde_json::to_writer_pretty(&mut w, &all)?;
                    return writeln!(w);
                }
                for (i, (_, table)) in tables.iter().enumerate() {
                    if i > 0 {
                        writeln!(w)?;
                    }
                    write_table_to(table, cfg.format, &mut w)?;
                }
                Ok(())
            })();
            res.map_err(stdout_err)
        }
    }
}

/// Runs the matrix, writes the JSON report and fails with exit code 2 when
/// any check fails.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let groups = select_groups(&cfg.only)?;
    let grid = match (cfg.grid_xmax, cfg.grid_npts) {
        (None, None) => None,
        (x, n) => Some(GridSpec::new(x.unwrap_or(12.0), n.unwrap_or(3200), 3)?),
    };
    let outcome = run_matrix(&groups, cfg.negative_control, grid)?;
    let mut doc = serde_json::to_value(&outcome).map_err(|e| invalid(e.to_string()))?;
    let meta: BTreeMap<String, String> = cfg.describe("verify");
    doc["meta"] = serde_json::to_value(meta).map_err(|e| invalid(e.to_string()))?;
    let text = serde_json::to_string_pretty(&doc).map_err(|e| invalid(e.to_string()))? + "\n";
    match &cfg.out {
        Some(path) => fs::write(path, text).map_err(io_err(path))?,
        None => io::stdout().write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))?,
    }
    for r in outcome.reports.iter().filter(|r| !r.report.pass) {
        eprintln!("FAIL [{}] {}", r.group, r.report.quantity);
    }
    if outcome.all_pass() {
        Ok(())
    } else {
        Err(CliError::Verification { failed: outcome.summary.failed, total: outcome.summary.total })
    }
}
