use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use wbroadcast::state::labels;
use wbroadcast::{
    bipartite_cuts, branch_reduced, density_of, enumerate_outcomes, fidelity_pure, peres_horodecki, ppt, run_protocol,
    w_state, w_structure, Bipartition, BranchF64, CMatrix, CMatrixF64, CloningMachine, DensityMatrixF64,
    LabeledPureState, Outcome, QubitLabel, WParams, WParamsF64,
};

use crate::config::{ProtocolConfig, SweepSpec, Validated};
use crate::error::{CliError, Result};
use crate::fixtures::{self, Fixture};
use crate::json::{clean, label_string, LocalPairJson, MatrixJson, PptJson, WStructureJson};

pub const RUN_SCHEMA: &str = "wbroadcast.run-report/v1";
pub const CLAIM_SCHEMA: &str = "wbroadcast.claim-report/v1";
pub const FIXTURE_SCHEMA: &str = "wbroadcast.fixtures/v1";
pub const CLASSICAL_EXCHANGE: &str = "modeled-as-secret";
pub const BIT_ORDER: &str = "big-endian: the first label is the most significant bit";

/// Tolerance on the sum of the eight branch probabilities.
const PROBABILITY_SUM_TOL: f64 = 1e-12;

struct Simulation<'a> {
    config: &'a Validated,
    branches: Vec<BranchF64>,
}

fn simulate(config: &Validated) -> Result<Simulation<'_>> {
    let s9 = run_protocol(&config.params, &config.machine)?;
    let branches = enumerate_outcomes(&s9)?;
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(CliError::Invariant(format!("branch probabilities sum to {total}")));
    }
    Ok(Simulation { config, branches })
}

/// Reduced branch state with labels in the listed order.
fn reduced(b: &BranchF64, order: &str, weighted: bool) -> Result<DensityMatrixF64> {
    let keep = labels(order);
    Ok(branch_reduced(b, &keep, weighted)?.relabel(&keep)?)
}

/// Weighted reduced operator, the zero operator for negligible branches.
fn weighted_or_zero(b: &BranchF64, order: &str) -> Result<(Vec<QubitLabel>, CMatrixF64)> {
    let keep = labels(order);
    if b.is_negligible() {
        let d = 1 << keep.len();
        return Ok((keep, CMatrix::zeros(d, d)));
    }
    let rho = reduced(b, order, true)?;
    Ok((keep, rho.matrix().clone()))
}

fn local_pair(rho: &DensityMatrixF64, tol: f64) -> Result<LocalPairJson> {
    let ph = peres_horodecki(rho, tol)?;
    let l = rho.labels();
    let cut = Bipartition::new(vec![l[0]], vec![l[1]])?;
    let r = ppt(rho, &cut, tol)?;
    Ok(LocalPairJson {
        pair: label_string(l),
        w3: clean(ph.w3),
        w4: clean(ph.w4),
        peres_horodecki_inseparable: ph.inseparable,
        ppt: PptJson::new(&cut.left, &cut.right, &r),
    })
}

fn cuts_json(rho: &DensityMatrixF64, tol: f64) -> Result<Vec<PptJson>> {
    let l = rho.labels();
    Ok(bipartite_cuts(rho, tol)?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let right: Vec<QubitLabel> = l.iter().copied().filter(|&x| x != l[i]).collect();
            PptJson::new(&[l[i]], &right, r)
        })
        .collect())
}

/// Fidelity of a normalized three-qubit operator with the input W ket
/// carried by the same qubit positions.
fn fidelity_with_input(rho: &DensityMatrixF64, p: &WParamsF64) -> Result<f64> {
    let target = LabeledPureState::new(rho.labels().to_vec(), w_state(p).amplitudes().to_vec())?;
    Ok(fidelity_pure(rho, &target)?)
}

// ---------------------------------------------------------------- run

#[derive(Debug, Serialize)]
pub struct BranchSummary {
    pub serial: usize,
    pub outcome: String,
    pub probability: f64,
    pub negligible: bool,
}

#[derive(Debug, Serialize)]
pub struct ReducedStates {
    pub rho156: MatrixJson,
    pub rho234: MatrixJson,
    pub rho14: MatrixJson,
    pub rho25: MatrixJson,
    pub rho36: MatrixJson,
}

#[derive(Debug, Serialize)]
pub struct TripleMetrics<T> {
    pub rho156: T,
    pub rho234: T,
}

#[derive(Debug, Serialize)]
pub struct BranchAnalysis {
    pub outcome: String,
    pub probability: f64,
    /// Weighted by the branch probability.
    pub reduced: ReducedStates,
    pub w_structure: TripleMetrics<WStructureJson>,
    pub ppt_cuts: TripleMetrics<Vec<PptJson>>,
    pub local_pairs: Vec<LocalPairJson>,
    pub fidelity_rho156_w: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub config: ProtocolConfig,
    pub classical_exchange: &'static str,
    pub bit_order: &'static str,
    pub branches: Vec<BranchSummary>,
    pub probability_sum: f64,
    pub analyses: Vec<BranchAnalysis>,
}

fn analyse(b: &BranchF64, p: &WParamsF64, tol: f64) -> Result<BranchAnalysis> {
    let weighted = |order: &str| -> Result<MatrixJson> {
        let rho = reduced(b, order, true)?;
        Ok(MatrixJson::new(rho.labels(), rho.matrix()))
    };
    let rho156 = reduced(b, "156", false)?;
    let rho234 = reduced(b, "234", false)?;
    let local_pairs = ["14", "25", "36"]
        .iter()
        .map(|o| local_pair(&reduced(b, o, false)?, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(BranchAnalysis {
        outcome: b.outcome.to_string(),
        probability: clean(b.probability),
        reduced: ReducedStates {
            rho156: weighted("156")?,
            rho234: weighted("234")?,
            rho14: weighted("14")?,
            rho25: weighted("25")?,
            rho36: weighted("36")?,
        },
        w_structure: TripleMetrics {
            rho156: (&w_structure(&rho156, tol)?).into(),
            rho234: (&w_structure(&rho234, tol)?).into(),
        },
        ppt_cuts: TripleMetrics {
            rho156: cuts_json(&rho156, tol)?,
            rho234: cuts_json(&rho234, tol)?,
        },
        local_pairs,
        fidelity_rho156_w: clean(fidelity_with_input(&rho156, p)?),
    })
}

pub fn cmd_run(config: &Validated) -> Result<RunReport> {
    let sim = simulate(config)?;
    let tol = config.raw.tol;
    let branches = sim
        .branches
        .iter()
        .map(|b| BranchSummary {
            serial: b.outcome.serial(),
            outcome: b.outcome.to_string(),
            probability: clean(b.probability),
            negligible: b.is_negligible(),
        })
        .collect();
    let analyses = sim
        .branches
        .iter()
        .filter(|b| !b.is_negligible())
        .filter(|b| config.outcome.is_none_or(|o| o == b.outcome))
        .map(|b| analyse(b, &config.params, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunReport {
        schema: RUN_SCHEMA,
        config: config.raw.clone(),
        classical_exchange: CLASSICAL_EXCHANGE,
        bit_order: BIT_ORDER,
        branches,
        probability_sum: sim.branches.iter().map(|b| b.probability).sum(),
        analyses,
    })
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Serialize)]
pub struct ClaimRecord {
    pub claim: &'static str,
    pub outcome: Option<String>,
    /// `weighted`: operators carry their branch probability.
    pub form: &'static str,
    pub fixture: Option<MatrixJson>,
    pub oracle: Option<MatrixJson>,
    pub frobenius_distance: Option<f64>,
    /// Distance after reading every ket string right to left instead.
    pub little_endian_distance: Option<f64>,
    pub matches: bool,
    pub convention_note: Option<String>,
    pub aux: Value,
}

#[derive(Debug, Serialize)]
pub struct ClaimReport {
    pub schema: &'static str,
    pub config: ProtocolConfig,
    pub classical_exchange: &'static str,
    pub bit_order: &'static str,
    pub records: Vec<ClaimRecord>,
}

fn reversed(labels: &[QubitLabel]) -> Vec<QubitLabel> {
    labels.iter().rev().copied().collect()
}

/// Oracle operator re-read with the opposite bit order, as a raw matrix.
fn little_endian_operator(labels: &[QubitLabel], m: &CMatrixF64) -> Result<CMatrixF64> {
    let rho = DensityMatrixF64::from_matrix(labels.to_vec(), m.clone());
    match rho {
        Ok(rho) => Ok(rho.relabel(&reversed(labels))?.matrix().clone()),
        // The zero operator reads the same either way.
        Err(_) => Ok(m.clone()),
    }
}

/// Oracle side of a comparison: label order, weighted operator (or ket
/// column) and the same data re-read little-endian.
struct OracleData<'a> {
    labels: &'a [QubitLabel],
    matrix: &'a CMatrixF64,
    little_endian: &'a CMatrixF64,
}

fn compare(
    claim: &'static str,
    outcome: Option<Outcome>,
    fixture: &Fixture,
    oracle: OracleData,
    tol: f64,
    aux: Value,
) -> Result<ClaimRecord> {
    let d = fixture.matrix.frobenius_distance(oracle.matrix)?;
    let d_le = fixture.matrix.frobenius_distance(oracle.little_endian)?;
    let matches = d <= tol;
    let convention_note =
        (!matches && d_le <= tol).then(|| "fixture matches only if ket strings are read little-endian".to_string());
    Ok(ClaimRecord {
        claim,
        outcome: outcome.map(|o| o.to_string()),
        form: "weighted",
        fixture: Some(MatrixJson::new(&fixture.labels, &fixture.matrix)),
        oracle: Some(MatrixJson::new(oracle.labels, oracle.matrix)),
        frobenius_distance: Some(clean(d)),
        little_endian_distance: Some(clean(d_le)),
        matches,
        convention_note,
        aux,
    })
}

fn eq6_record(sim: &Simulation, tol: f64) -> Result<ClaimRecord> {
    let (p, m) = (&sim.config.params, &sim.config.machine);
    let fixture = fixtures::eq6(p, m);
    let up = &sim.branches[0];
    let order = labels("142536");
    let (oracle, oracle_le, fidelity) = match &up.state {
        Some(s) => {
            let s = s.relabel(&order)?;
            let scale = up.probability.sqrt();
            let col = CMatrix::column(s.amplitudes())?.scale(scale);
            let le = CMatrix::column(s.relabel(&reversed(&order))?.amplitudes())?.scale(scale);
            let normalized_fixture =
                LabeledPureState::new(order.clone(), (0..64).map(|i| fixture.matrix.get(i, 0)).collect())?.normalized();
            let f = fidelity_pure(&density_of(&s), &normalized_fixture)?;
            (col, le, Some(clean(f)))
        }
        None => (CMatrix::zeros(64, 1), CMatrix::zeros(64, 1), None),
    };
    let aux = json!({
        "branch_probability": clean(up.probability),
        "expected_probability": clean(fixtures::all_up_prefactor(m)),
        "fidelity_with_normalized_fixture": fidelity,
    });
    let data = OracleData {
        labels: &order,
        matrix: &oracle,
        little_endian: &oracle_le,
    };
    compare("EQ6", Some(Outcome::ALL_UP), &fixture, data, tol, aux)
}

fn eq7_records(sim: &Simulation, tol: f64) -> Result<Vec<ClaimRecord>> {
    let (p, m) = (&sim.config.params, &sim.config.machine);
    let mut out = Vec::new();
    for (claim, fixture, order) in [
        ("EQ7_RHO156", fixtures::eq7_rho156(p, m), "156"),
        ("EQ7_RHO234", fixtures::eq7_rho234(p, m), "234"),
    ] {
        // Normalized claim: the pure W-type projector.
        let projector = if fixture.prefactor > 0.0 {
            Some(fixture.matrix.scale(1.0 / fixture.prefactor))
        } else {
            None
        };
        for b in &sim.branches {
            let (keep, oracle) = weighted_or_zero(b, order)?;
            let oracle_le = little_endian_operator(&keep, &oracle)?;
            let mut aux = json!({
                "branch_probability": clean(b.probability),
                "fixture_prefactor": clean(fixture.prefactor),
                "normalized_distance": null,
                "w_structure": null,
                "ppt_cuts": null,
                "fidelity_w": null,
            });
            if !b.is_negligible() {
                let normed = reduced(b, order, false)?;
                aux["normalized_distance"] = match &projector {
                    Some(proj) => json!(clean(normed.matrix().frobenius_distance(proj)?)),
                    None => Value::Null,
                };
                aux["w_structure"] =
                    serde_json::to_value(WStructureJson::from(&w_structure(&normed, tol)?)).expect("serializable");
                aux["ppt_cuts"] = serde_json::to_value(cuts_json(&normed, tol)?).expect("serializable");
                aux["fidelity_w"] = json!(clean(fidelity_with_input(&normed, p)?));
                if claim == "EQ7_RHO234" {
                    aux["rho156_alignment"] = alignment(b)?;
                }
            }
            let data = OracleData {
                labels: &keep,
                matrix: &oracle,
                little_endian: &oracle_le,
            };
            out.push(compare(claim, Some(b.outcome), &fixture, data, tol, aux)?);
        }
    }
    Ok(out)
}

/// Smallest distance between normalized rho_234 under each of the six
/// qubit orders and normalized rho_156.
fn alignment(b: &BranchF64) -> Result<Value> {
    let r156 = reduced(b, "156", false)?;
    let r234 = reduced(b, "234", false)?;
    let mut best: Option<(f64, String)> = None;
    for order in ["234", "243", "324", "342", "423", "432"] {
        let d = r234
            .relabel(&labels(order))?
            .matrix()
            .frobenius_distance(r156.matrix())?;
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, order.to_string()));
        }
    }
    let (d, order) = best.expect("six orders");
    Ok(json!({ "min_distance": clean(d), "order": order }))
}

fn eq8_records(sim: &Simulation, tol: f64) -> Result<(Vec<ClaimRecord>, Vec<LocalPairJson>)> {
    let (p, m) = (&sim.config.params, &sim.config.machine);
    let up = &sim.branches[0];
    let mut records = Vec::new();
    let mut pairs = Vec::new();
    for (claim, fixture, order) in [
        ("EQ8_RHO14", fixtures::eq8_rho14(p, m), "14"),
        ("EQ8_RHO25", fixtures::eq8_rho25(p, m), "25"),
        ("EQ8_RHO36", fixtures::eq8_rho36(p, m), "36"),
    ] {
        let (keep, oracle) = weighted_or_zero(up, order)?;
        let oracle_le = little_endian_operator(&keep, &oracle)?;
        let aux = if up.is_negligible() {
            json!({ "local_pair": null })
        } else {
            let pair = local_pair(&reduced(up, order, false)?, tol)?;
            let v = json!({ "local_pair": serde_json::to_value(&pair).expect("serializable") });
            pairs.push(pair);
            v
        };
        let data = OracleData {
            labels: &keep,
            matrix: &oracle,
            little_endian: &oracle_le,
        };
        records.push(compare(claim, Some(Outcome::ALL_UP), &fixture, data, tol, aux)?);
    }
    Ok((records, pairs))
}

fn step4_record(pairs: &[LocalPairJson], tol: f64) -> ClaimRecord {
    // Distance field carries the largest criterion residual over the pairs.
    let residual = (pairs.len() == 3).then(|| {
        pairs
            .iter()
            .map(|p| p.w3.abs().max(p.w4.abs()).max((-p.ppt.min_eigenvalue).max(0.0)))
            .fold(0.0, f64::max)
    });
    ClaimRecord {
        claim: "STEP4_LOCAL_SEPARABLE",
        outcome: Some(Outcome::ALL_UP.to_string()),
        form: "normalized",
        fixture: None,
        oracle: None,
        frobenius_distance: residual.map(clean),
        little_endian_distance: None,
        matches: residual.is_some_and(|r| r <= tol),
        convention_note: None,
        aux: json!({
            "pairs": serde_json::to_value(pairs).expect("serializable"),
            "expected": "W3 = W4 = 0 and a non-negative partial-transpose spectrum for every local pair",
        }),
    }
}

pub fn cmd_verify(config: &Validated) -> Result<ClaimReport> {
    let sim = simulate(config)?;
    let tol = config.raw.tol;
    let mut records = vec![eq6_record(&sim, tol)?];
    records.extend(eq7_records(&sim, tol)?);
    let (eq8, pairs) = eq8_records(&sim, tol)?;
    records.extend(eq8);
    records.push(step4_record(&pairs, tol));
    Ok(ClaimReport {
        schema: CLAIM_SCHEMA,
        config: config.raw.clone(),
        classical_exchange: CLASSICAL_EXCHANGE,
        bit_order: BIT_ORDER,
        records,
    })
}

// ---------------------------------------------------------------- fixtures

#[derive(Debug, Serialize)]
pub struct FixtureJson {
    pub id: &'static str,
    pub provenance: &'static str,
    pub prefactor: f64,
    pub matrix: MatrixJson,
}

#[derive(Debug, Serialize)]
pub struct FixtureDump {
    pub schema: &'static str,
    pub named_config: &'static str,
    pub config: ProtocolConfig,
    pub bit_order: &'static str,
    pub fixtures: Vec<FixtureJson>,
}

/// Printed-formula fixtures; without a config, at the uniform W input with
/// a symmetric machine.
pub fn cmd_fixtures(config: Option<&Validated>) -> Result<FixtureDump> {
    let (name, validated) = match config {
        Some(v) => ("custom", v.clone()),
        None => ("uniform-symmetric", ProtocolConfig::uniform_symmetric().validate()?),
    };
    let fixtures = fixtures::all(&validated.params, &validated.machine)
        .into_iter()
        .map(|f| FixtureJson {
            id: f.id,
            provenance: f.provenance,
            prefactor: clean(f.prefactor),
            matrix: MatrixJson::new(&f.labels, &f.matrix),
        })
        .collect();
    Ok(FixtureDump {
        schema: FIXTURE_SCHEMA,
        named_config: name,
        config: validated.raw,
        bit_order: BIT_ORDER,
        fixtures,
    })
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub rows: usize,
    pub skipped: usize,
}

pub const SWEEP_PARAMETER_COLUMNS: [&str; 5] = ["alpha", "beta", "gamma", "x", "y"];

struct SweepPoint {
    alpha: f64,
    beta: f64,
    x: f64,
    y: f64,
}

fn sweep_metrics(pt: &SweepPoint, tol: f64) -> Result<(WParamsF64, [f64; 8])> {
    let p = WParams::from_alpha_beta(pt.alpha, pt.beta)?;
    let m = CloningMachine::new(pt.x, pt.y)?;
    let branches = enumerate_outcomes(&run_protocol(&p, &m)?)?;
    let up = &branches[0];
    if up.is_negligible() {
        let nan = f64::NAN;
        return Ok((p, [clean(up.probability), nan, nan, nan, nan, nan, nan, nan]));
    }
    let r156 = reduced(up, "156", false)?;
    let cuts = bipartite_cuts(&r156, tol)?;
    let ph = peres_horodecki(&reduced(up, "14", false)?, tol)?;
    let ws = w_structure(&r156, tol)?;
    Ok((
        p,
        [
            up.probability,
            fidelity_with_input(&r156, &p)?,
            cuts[0].min_eigenvalue,
            cuts[1].min_eigenvalue,
            cuts[2].min_eigenvalue,
            ph.w3,
            ph.w4,
            ws.subspace_weight,
        ]
        .map(clean),
    ))
}

fn fmt_value(v: f64) -> String {
    format!("{v:?}")
}

/// Writes one CSV row per valid grid point, in grid order
/// (alpha slowest, then beta, x, y).
pub fn cmd_sweep<W: Write>(spec: &SweepSpec, out: W) -> Result<SweepSummary> {
    if !(spec.tol.is_finite() && spec.tol > 0.0) {
        return Err(CliError::Config(format!(
            "tol must be a positive number, got {}",
            spec.tol
        )));
    }
    let columns = spec.metric_columns()?;
    let (alphas, betas, xs, ys) = (
        spec.alpha.points(),
        spec.beta.points(),
        spec.x.points(),
        spec.y.points(),
    );
    let total = alphas.len() * betas.len() * xs.len() * ys.len();
    if total == 0 {
        return Err(CliError::Config("sweep grid is empty".into()));
    }
    let mut points = Vec::with_capacity(total);
    for &alpha in &alphas {
        for &beta in &betas {
            for &x in &xs {
                for &y in &ys {
                    let finite = [alpha, beta, x, y].iter().all(|v| v.is_finite());
                    let valid =
                        finite && WParams::from_alpha_beta(alpha, beta).is_ok() && CloningMachine::new(x, y).is_ok();
                    if valid {
                        points.push(SweepPoint { alpha, beta, x, y });
                    }
                }
            }
        }
    }
    let skipped = total - points.len();
    if points.is_empty() {
        return Err(CliError::Config(format!("none of the {total} grid points is valid")));
    }
    let rows: Vec<(WParamsF64, [f64; 8])> = points
        .par_iter()
        .map(|pt| sweep_metrics(pt, spec.tol))
        .collect::<Result<_>>()?;

    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = SWEEP_PARAMETER_COLUMNS
        .iter()
        .copied()
        .chain(columns.iter().copied())
        .collect();
    w.write_record(&header).map_err(csv_err)?;
    let selected: Vec<usize> = columns
        .iter()
        .map(|c| {
            crate::config::SWEEP_METRICS
                .iter()
                .position(|m| m == c)
                .expect("validated metric")
        })
        .collect();
    for (pt, (p, metrics)) in points.iter().zip(&rows) {
        let mut record = vec![
            fmt_value(p.alpha()),
            fmt_value(p.beta()),
            fmt_value(p.gamma()),
            fmt_value(pt.x),
            fmt_value(pt.y),
        ];
        record.extend(selected.iter().map(|&i| fmt_value(metrics[i])));
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(SweepSummary {
        rows: rows.len(),
        skipped,
    })
}

fn csv_err(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::Io(io),
        other => CliError::Invariant(format!("csv: {other:?}")),
    }
}
