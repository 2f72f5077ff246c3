//! One function per subcommand. Each builds a [`RunReport`] from core
//! results; negative verdicts are recorded in the report, input and
//! numerical failures are returned as [`CliError`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rdmlab_core::constructions::{
    bacon_shor_code, choose_coupling, dicke_parent, ghz3_hamiltonian, ghz3_splitting_term, ghz3_unsplit,
    ghz_n_hamiltonian, ghz_n_splitting_term, hermitian_parent_search, split_logical, zz_chain_hamiltonian,
    BaconShorLattice, CouplingChoice, DiagonalConvention, WeightedGhzOperator,
};
use rdmlab_core::determinacy::{dicke_uda, squared_parent, uda_via_parent, verify_counterexample, Tolerances};
use rdmlab_core::fermion::{default_penalty_weight, encode, full_map, sector_spectrum_match, two_matrix};
use rdmlab_core::hilbert::{dicke, ghz, ghz_balanced, k_rdms, rdm_max_deviation};
use rdmlab_core::spectra::certify_nondegenerate_eigenstate;
use rdmlab_core::{CertMode, Error, PauliSum, StateVector};
use serde::{Serialize, Serializer};

use crate::error::{is_verdict, CliError};
use crate::report::RunReport;

/// A fixed coupling or `auto` for a scan over the default grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coupling {
    Auto,
    Value(f64),
}

impl FromStr for Coupling {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Coupling::Auto);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Coupling::Value)
            .ok_or_else(|| format!("expected a number or `auto`, got `{s}`"))
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Auto => write!(f, "auto"),
            Coupling::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Coupling {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Coupling::Auto => s.serialize_str("auto"),
            Coupling::Value(v) => s.serialize_f64(*v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    All,
    One(usize),
}

impl FromStr for Weight {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(Weight::All);
        }
        s.parse().map(Weight::One).map_err(|_| format!("expected an integer or `all`, got `{s}`"))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Weight::All => s.serialize_str("all"),
            Weight::One(i) => s.serialize_u64(*i as u64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FermionExample {
    Ghz3,
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateFamily {
    Ghz,
    Dicke,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamiltonianFamily {
    Ghz3,
    GhzN,
    BaconShor,
    DickeParent,
}

/// Runs `body`, turning verdict-class core errors into a failed report.
fn run<F>(mut report: RunReport, body: F) -> Result<RunReport, CliError>
where
    F: FnOnce(&mut RunReport) -> Result<(), Error>,
{
    match body(&mut report) {
        Ok(()) => {}
        Err(e) if is_verdict(&e) => report.error = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }
    report.finish();
    Ok(report)
}

fn record_scan(r: &mut RunReport, choice: &CouplingChoice) {
    r.artifact("chosen_c", choice.c).artifact("scan", &choice.scanned);
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn read_state(path: &Path) -> Result<StateVector, CliError> {
    Ok(StateVector::from_json(&read_file(path)?)?)
}

/// Reads a Pauli-sum file on `n` qubits.
pub fn read_hamiltonian(path: &Path, n: usize) -> Result<PauliSum, CliError> {
    Ok(PauliSum::parse(&read_file(path)?, n)?)
}

fn tolerances(tol: f64, rdm_tol: f64) -> Tolerances {
    Tolerances { cert: tol, rdm: rdm_tol, ..Tolerances::default() }
}

pub fn ghz3(c: Coupling, tol: f64, rdm_tol: f64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("ghz3");
    r.param("c", c).param("tol", tol).param("rdm_tol", rdm_tol);
    run(r, |r| {
        let psi = ghz_balanced(3, 0.0);
        let c = match c {
            Coupling::Value(v) => v,
            Coupling::Auto => {
                let choice = choose_coupling(&ghz3_unsplit(), &ghz3_splitting_term(), &psi, CertMode::Eigenstate)?;
                record_scan(r, &choice);
                choice.c
            }
        };
        let h = ghz3_hamiltonian(c);
        r.artifact("hamiltonian", h.to_text());
        let cert = certify_nondegenerate_eigenstate(&h, &psi, tol)?;
        r.artifact("eigenvalue", cert.eigenvalue)
            .artifact("index_below", cert.index_below)
            .artifact("certificate", &cert)
            .check("nondegenerate_eigenstate", cert.passed());
        let partner = ghz_balanced(3, std::f64::consts::PI);
        let report = verify_counterexample(&psi, &partner, &h, 2, tolerances(tol, rdm_tol))?;
        r.artifact("counterexample", &report).check("counterexample", report.passed);
        Ok(())
    })
}

pub fn bacon_shor(jx: f64, jz: f64, c: Coupling, tol: f64, rdm_tol: f64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("bacon-shor");
    r.param("jx", jx).param("jz", jz).param("c", c).param("tol", tol).param("rdm_tol", rdm_tol);
    run(r, |r| {
        let code = bacon_shor_code(jx, jz)?;
        r.artifact("ground_energy", code.ground_energy)
            .artifact("ground_dimension", code.ground_dimension)
            .artifact("gap_above_ground", code.gap_above)
            .check("ground_space_two_dimensional", code.ground_dimension == 2);
        let split = split_logical(&BaconShorLattice::square3().logical_z(), &code.c0, 1)?;
        r.artifact("splitting_term", split.splitting_term.to_text());
        let c = match c {
            Coupling::Value(v) => v,
            Coupling::Auto => {
                let choice = choose_coupling(&code.h0, &split.splitting_term, &code.c0, CertMode::Eigenstate)?;
                record_scan(r, &choice);
                choice.c
            }
        };
        let h = &code.h0 + &split.splitting_term.scaled(c);
        r.artifact("hamiltonian", h.to_text());
        let report = verify_counterexample(&code.c0, &code.c1, &h, 2, tolerances(tol, rdm_tol))?;
        r.artifact("counterexample", &report).check("counterexample", report.passed);
        Ok(())
    })
}

pub fn dicke_cmd(n: usize, weight: Weight, c: Coupling, tol: f64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("dicke");
    r.param("n", n).param("i", weight).param("c", c).param("tol", tol);
    let weights: Vec<usize> = match weight {
        Weight::All => (0..=n).collect(),
        Weight::One(i) => vec![i],
    };
    run(r, |r| {
        let tol = tolerances(tol, Tolerances::default().rdm);
        let mut states = Vec::new();
        for i in weights {
            let report = match c {
                Coupling::Auto => dicke_uda(n, i, tol)?,
                Coupling::Value(v) => {
                    let mut rep = uda_via_parent(&dicke(n, i)?, &dicke_parent(n, i, v)?, tol)?;
                    rep.evidence.coupling = Some(v);
                    rep
                }
            };
            r.check(&format!("unique_ground_state_i={i:02}"), report.passed);
            states.push(serde_json::json!({ "i": i, "report": report }));
        }
        r.artifact("states", states);
        Ok(())
    })
}

pub fn ghz_n(n: usize, c: Coupling, tol: f64, rdm_tol: f64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("ghz-n");
    r.param("n", n).param("c", c).param("tol", tol).param("rdm_tol", rdm_tol);
    run(r, |r| {
        let psi = ghz_balanced(n, 0.0);
        let h0 = zz_chain_hamiltonian(n)?;
        let h1 = ghz_n_splitting_term(n)?;
        let c = match c {
            Coupling::Value(v) => v,
            Coupling::Auto => {
                let choice = choose_coupling(&h0, &h1, &psi, CertMode::Eigenstate)?;
                record_scan(r, &choice);
                choice.c
            }
        };
        let h = ghz_n_hamiltonian(n, c)?;
        r.artifact("hamiltonian", h.to_text()).artifact("locality", h.locality());
        let partner = ghz_balanced(n, std::f64::consts::PI);
        let report = verify_counterexample(&psi, &partner, &h, n - 1, tolerances(tol, rdm_tol))?;
        let cert = report.evidence.certificate.clone();
        r.check("nondegenerate_eigenstate", cert.as_ref().is_some_and(|c| c.passed()))
            .artifact("index_below", cert.map(|c| c.index_below))
            .artifact("tightness", &report)
            .check("tightness", report.passed);
        // informational: whether any grid point makes GHZ the unique ground state
        let ground = match choose_coupling(&h0, &h1, &psi, CertMode::Ground) {
            Ok(_) => true,
            Err(Error::NoValidCoupling) => false,
            Err(e) => return Err(e),
        };
        r.artifact("unique_ground_state_on_grid", ground);
        Ok(())
    })
}

#[allow(clippy::too_many_arguments)]
pub fn fermion(
    example: FermionExample,
    penalty: Coupling,
    alpha: f64,
    trials: usize,
    seed: u64,
    tol: f64,
    rdm_tol: f64,
) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("fermion");
    r.param("example", example).param("penalty", penalty).param("tol", tol).param("rdm_tol", rdm_tol);
    if example == FermionExample::Weighted {
        r.param("alpha", alpha).param("trials", trials).param("seed", seed);
    }
    let (psi, partner) = match example {
        FermionExample::Ghz3 => (ghz_balanced(3, 0.0), ghz_balanced(3, std::f64::consts::PI)),
        FermionExample::Weighted => {
            let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
            (ghz(3, alpha, beta, 0.0)?, ghz(3, alpha, beta, std::f64::consts::PI)?)
        }
    };
    run(r, |r| {
        let h = match example {
            FermionExample::Ghz3 => ghz3_hamiltonian(-1.0),
            FermionExample::Weighted => {
                let search = hermitian_parent_search(&psi, 2, trials, &mut ChaCha8Rng::seed_from_u64(seed))?;
                r.artifact("parent_trials_used", search.trials_used);
                match search.hamiltonian {
                    Some(h) => h,
                    None => {
                        r.check("hermitian_parent_found", false);
                        return Ok(());
                    }
                }
            }
        };
        r.artifact("spin_hamiltonian", h.to_text());
        let weight = match penalty {
            Coupling::Auto => default_penalty_weight(&h),
            Coupling::Value(v) => v,
        };
        let sector = sector_spectrum_match(&h, weight)?;
        r.artifact("penalty_weight", weight)
            .artifact("penalty_convention", "P_i = -1 on singly occupied sites; penalty term is weight*(I + P_i)/2")
            .artifact("sector_spectrum_deviation", sector.max_deviation)
            .artifact("penalty_margin", sector.penalty_margin)
            .artifact("fermion_degree", sector.fermion_degree)
            .check("sector_spectrum_matches", sector.max_deviation <= 1e-10)
            .check("penalty_dominates", sector.penalty_margin > 0.0)
            .check("two_body", sector.fermion_degree <= 4);

        let hf = full_map(&h, weight)?;
        let (ea, eb) = (encode(&psi)?, encode(&partner)?);
        let cert = certify_nondegenerate_eigenstate(&hf.qubit_form, &ea, tol)?;
        r.artifact("fermion_certificate", &cert).check("fermionic_nondegenerate_eigenstate", cert.passed());

        let modes = 2 * h.num_qubits();
        let (ta, tb) = (two_matrix(&ea, modes)?, two_matrix(&eb, modes)?);
        let dev = ta.max_deviation(&tb)?;
        let overlap = ea.overlap(&eb)?;
        r.artifact("two_matrix_deviation", dev)
            .artifact("two_matrix_trace", ta.trace())
            .artifact("overlap", overlap)
            .artifact("two_matrix", serde_json::from_str::<serde_json::Value>(&ta.to_json()).expect("valid json"))
            .check("two_matrices_equal", dev <= rdm_tol)
            .check("partners_distinct", overlap <= 1.0 - Tolerances::default().distinctness);
        Ok(())
    })
}

pub fn square(hamiltonian: &Path, state: &Path, tol: f64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("square");
    r.param("hamiltonian", hamiltonian.display().to_string())
        .param("state", state.display().to_string())
        .param("tol", tol);
    let psi = read_state(state)?;
    let h = read_hamiltonian(hamiltonian, psi.num_qubits())?;
    run(r, |r| {
        r.artifact("source_locality", h.locality());
        match squared_parent(&h, &psi, tolerances(tol, Tolerances::default().rdm)) {
            Ok((parent, report)) => {
                r.artifact("parent_locality", parent.locality())
                    .artifact("parent", parent.to_text())
                    .artifact("report", &report)
                    .check("parent_locality_bound", parent.locality() <= 2 * h.locality())
                    .check("unique_ground_state", report.passed);
                Ok(())
            }
            Err(Error::DegenerateLevel { multiplicity, parent_ground_dimension }) => {
                r.artifact("level_multiplicity", multiplicity)
                    .artifact("parent_ground_dimension", parent_ground_dimension);
                Err(Error::DegenerateLevel { multiplicity, parent_ground_dimension })
            }
            Err(e) => Err(e),
        }
    })
}

pub fn parent_search(state: &Path, k: usize, trials: usize, seed: u64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("parent-search");
    r.param("state", state.display().to_string()).param("k", k).param("trials", trials).param("seed", seed);
    let psi = read_state(state)?;
    run(r, |r| {
        let search = hermitian_parent_search(&psi, k, trials, &mut ChaCha8Rng::seed_from_u64(seed))?;
        r.artifact("basis_size", search.basis_size)
            .artifact("solution_dimension", search.solution_dimension)
            .artifact("trials_used", search.trials_used)
            .artifact("hamiltonian", search.hamiltonian.as_ref().map(|h| h.to_text()))
            .artifact("certificate", &search.certificate)
            .check("parent_found", search.hamiltonian.is_some());
        Ok(())
    })
}

pub fn rdm_compare(a: &Path, b: &Path, k: usize, rdm_tol: f64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("rdm-compare");
    r.param("a", a.display().to_string()).param("b", b.display().to_string()).param("k", k).param("rdm_tol", rdm_tol);
    let (sa, sb) = (read_state(a)?, read_state(b)?);
    run(r, |r| {
        let dev = rdm_max_deviation(&k_rdms(&sa, k)?, &k_rdms(&sb, k)?)?;
        let overlap = sa.overlap(&sb)?;
        r.artifact("rdm_deviation", dev).artifact("overlap", overlap).check("rdms_equal", dev <= rdm_tol);
        Ok(())
    })
}

pub fn weighted_ghz(alpha: f64, a: f64, b: f64, c: f64, theta: f64, rdm_tol: f64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("weighted-ghz");
    r.param("alpha", alpha).param("a", a).param("b", b).param("c", c).param("theta", theta).param("rdm_tol", rdm_tol);
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    run(r, |r| {
        let corrected = WeightedGhzOperator::new(alpha, beta, a, b, c, DiagonalConvention::Corrected)?.analyze();
        let printed = WeightedGhzOperator::new(alpha, beta, a, b, c, DiagonalConvention::Swapped)?.analyze();
        r.artifact("beta", beta)
            .artifact("fixing_residual", corrected.fixing_residual)
            .artifact("printed_diagonal_fixing_residual", printed.fixing_residual)
            .artifact("eigenvalue", corrected.eigenvalue)
            .artifact("nondegenerate", corrected.nondegenerate_eigenvector)
            .artifact("corrected", &corrected)
            .artifact("printed", &printed)
            .check("fixing_identity", corrected.fixing_residual <= 1e-12)
            .check("eigenvector", corrected.eigen_residual <= 1e-12);
        let dev = rdm_max_deviation(&k_rdms(&ghz(3, alpha, beta, 0.0)?, 2)?, &k_rdms(&ghz(3, alpha, beta, theta)?, 2)?)?;
        r.artifact("partner_rdm_deviation", dev).check("partner_rdms_equal", dev <= rdm_tol);
        Ok(())
    })
}

#[allow(clippy::too_many_arguments)]
pub fn write_state(
    family: StateFamily,
    n: usize,
    i: usize,
    alpha: f64,
    theta: f64,
    out: &PathBuf,
) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("state");
    r.param("family", family).param("n", n).param("out", out.display().to_string());
    let psi = match family {
        StateFamily::Ghz => {
            r.param("alpha", alpha).param("theta", theta);
            ghz(n, alpha, (1.0 - alpha * alpha).max(0.0).sqrt(), theta)?
        }
        StateFamily::Dicke => {
            r.param("i", i);
            dicke(n, i)?
        }
    };
    write_file(out, &psi.to_json())?;
    r.check("written", true).finish();
    Ok(r)
}

pub fn write_hamiltonian(family: HamiltonianFamily, n: usize, i: usize, c: f64, out: &PathBuf) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("hamiltonian");
    r.param("family", family).param("c", c).param("out", out.display().to_string());
    let h = match family {
        HamiltonianFamily::Ghz3 => ghz3_hamiltonian(c),
        HamiltonianFamily::GhzN => {
            r.param("n", n);
            ghz_n_hamiltonian(n, c)?
        }
        HamiltonianFamily::BaconShor => {
            let code = bacon_shor_code(1.0, 1.0)?;
            let split = split_logical(&BaconShorLattice::square3().logical_z(), &code.c0, 1)?;
            &code.h0 + &split.splitting_term.scaled(c)
        }
        HamiltonianFamily::DickeParent => {
            r.param("n", n).param("i", i);
            dicke_parent(n, i, c)?
        }
    };
    write_file(out, &h.to_text())?;
    r.artifact("terms", h.len()).artifact("locality", h.locality()).check("written", true).finish();
    Ok(r)
}
