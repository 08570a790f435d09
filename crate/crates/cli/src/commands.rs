use std::path::Path;

use gcirc::blockcirc::{
    assemble, block_spectrum, m_matrix_condition, realize_block, BlockGCirculant, BlockTargets,
};
use gcirc::niep::{realize, TargetList};
use gcirc::numtheory::{is_cyclic_generator, list_generators};
use gcirc::oracle::dense_eigen_oracle;
use gcirc::reconstruct::{
    complete_with_perron, diagonal_of, first_row_from_diagonal, DiagonalVector,
};
use gcirc::spectra::{circulant_eigenvalues, g_circulant_spectrum, spectra_match};
use gcirc::{Complex64, DenseMatrix, GCirculant, Spectrum};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{BlockRealizeArgs, Cli, Command, EigArgs, ReconstructArgs, Suite, VerifyArgs};
use crate::{golden, property, to_value, CliError, Outcome};

pub(crate) fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(CliError::Malformed(format!(
            "--tol must be a nonnegative number, got {}",
            cli.tol
        )));
    }
    match &cli.command {
        Command::Generators { p } => generators(*p),
        Command::Eig(a) => eig(a, cli.tol),
        Command::Realize { beta1, beta2, p, g } => cmd_realize(*beta1, *beta2, *p, *g, cli.tol),
        Command::Reconstruct(a) => reconstruct(a, cli.tol),
        Command::BlockRealize(a) => block_realize(a, cli.tol),
        Command::Verify(a) => verify(a, cli.seed, cli.tol),
    }
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

pub(crate) fn parse_reals(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| malformed(format!("{what}: cannot read {s:?} as a finite number")))
        })
        .collect()
}

fn parse_diagonal(text: &str) -> Result<Vec<Option<Complex64>>, CliError> {
    text.split(',')
        .map(|s| match s.trim() {
            "?" => Ok(None),
            s => s
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(|x| Some(Complex64::new(x, 0.0)))
                .ok_or_else(|| {
                    malformed(format!("--diagonal: cannot read {s:?} as a number or ?"))
                }),
        })
        .collect()
}

fn complex_row(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn generators(p: u64) -> Result<Outcome, CliError> {
    let gens = list_generators(p)?;
    let certificates = gens
        .iter()
        .map(|&g| is_cyclic_generator(g as i64, p).map(|c| to_value(&c)))
        .collect::<gcirc::Result<Vec<_>>>()?;
    Ok(Outcome::ok(json!({
        "p": p,
        "generators": gens,
        "certificates": certificates,
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockInput {
    p: usize,
    g: i64,
    n: usize,
    #[serde(with = "gcirc::json::complex_vec_vec")]
    blocks: Vec<Vec<Complex64>>,
}

fn load_block(path: &Path) -> Result<BlockGCirculant, CliError> {
    let raw: BlockInput = read_json(path)?;
    if raw.blocks.len() != raw.p || raw.blocks.iter().any(|b| b.len() != raw.n) {
        return Err(malformed(format!(
            "{}: expected {} blocks of length {}",
            path.display(),
            raw.p,
            raw.n
        )));
    }
    Ok(BlockGCirculant::new(raw.blocks, raw.g)?)
}

fn with_oracle(
    mut payload: Value,
    closed: &Spectrum,
    dense: &DenseMatrix,
    tol: f64,
) -> Result<Outcome, CliError> {
    let oracle = dense_eigen_oracle(dense)?;
    let report = spectra_match(closed, &oracle, tol)?;
    payload["oracle"] = to_value(&oracle.with_tol(tol));
    payload["residual"] = json!(report.max_distance);
    let out = Outcome::ok(payload);
    Ok(if report.matched {
        out
    } else {
        out.fail(format!(
            "closed form and oracle differ by {:.3e} > tol {tol:e}",
            report.max_distance
        ))
    })
}

fn eig(a: &EigArgs, tol: f64) -> Result<Outcome, CliError> {
    if let Some(path) = &a.block {
        let b = load_block(path)?;
        let spectrum = block_spectrum(&b)?.with_tol(tol);
        let payload = json!({
            "kind": "block",
            "p": b.p(),
            "g": b.g(),
            "n": b.n(),
            "spectrum": to_value(&spectrum),
        });
        return if a.oracle {
            with_oracle(payload, &spectrum, &assemble(&b), tol)
        } else {
            Ok(Outcome::ok(payload))
        };
    }

    let row = a
        .row
        .as_deref()
        .ok_or_else(|| malformed("--row is required with --circ and --gcirc"))?;
    let row = complex_row(&parse_reals(row, "--row")?);
    let (matrix, spectrum, kind) = if a.circ {
        let m = GCirculant::circulant(row)?;
        let eig = circulant_eigenvalues(m.row())?;
        (m, Spectrum::new(eig, tol), "circulant")
    } else {
        let g =
            a.g.ok_or_else(|| malformed("--g is required with --gcirc"))?;
        let m = GCirculant::new(row, g)?;
        let eig = circulant_eigenvalues(m.row())?;
        let s = g_circulant_spectrum(&eig, m.n() as u64, g)?;
        (m, s.with_tol(tol), "g-circulant")
    };
    let payload = json!({
        "kind": kind,
        "n": matrix.n(),
        "g": matrix.g(),
        "spectrum": to_value(&spectrum),
    });
    if a.oracle {
        with_oracle(payload, &spectrum, &matrix.to_dense(), tol)
    } else {
        Ok(Outcome::ok(payload))
    }
}

fn cmd_realize(beta1: f64, beta2: f64, p: u64, g: i64, tol: f64) -> Result<Outcome, CliError> {
    let t = TargetList::new(beta1, beta2, p, g)?;
    let rep = realize(&t)?;
    let mut out = Outcome::ok(to_value(&rep));
    if let Some(w) = rep.negative_witness {
        out = out.note(format!(
            "not nonnegative: entry ({}, {}) = {}",
            w.row, w.col, w.value
        ));
    }
    if !rep.spectrum_matches(tol) {
        out = out.fail(format!(
            "oracle spectrum differs from the targets by {:.3e} > tol {tol:e}",
            rep.spectrum_residual
        ));
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagonalInput {
    n: usize,
    g: i64,
    #[serde(with = "gcirc::json::option_complex_vec")]
    diagonal: Vec<Option<Complex64>>,
    #[serde(default)]
    beta1: Option<f64>,
}

fn reconstruct(a: &ReconstructArgs, tol: f64) -> Result<Outcome, CliError> {
    let input = match &a.file {
        Some(path) => read_json::<DiagonalInput>(path)?,
        None => {
            let diagonal = parse_diagonal(
                a.diagonal
                    .as_deref()
                    .ok_or_else(|| malformed("give a JSON file or --diagonal"))?,
            )?;
            DiagonalInput {
                n: a.n.unwrap_or(diagonal.len()),
                g: a.g
                    .ok_or_else(|| malformed("--g is required with --diagonal"))?,
                diagonal,
                beta1: None,
            }
        }
    };
    let beta1 = a.beta1.or(input.beta1);
    if input.n != input.diagonal.len() {
        return Err(malformed(format!(
            "n = {} but the diagonal has {} entries",
            input.n,
            input.diagonal.len()
        )));
    }
    let d = DiagonalVector::new(input.diagonal, input.g)?;
    let unknown = d.unknown_index();
    let matrix = match (unknown, beta1) {
        (Some(_), Some(b)) => complete_with_perron(&d, b)?,
        (Some(i), None) => {
            return Err(CliError::Domain(format!(
                "diagonal entry {i} is unknown; pass beta1 to fill it from the trace"
            )))
        }
        (None, _) => first_row_from_diagonal(&d)?,
    };
    let diagonal = diagonal_of(&matrix);
    let mut payload = json!({
        "matrix": to_value(&matrix),
        "diagonal": diagonal.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    });
    if let Some(i) = unknown {
        payload["filled"] = json!({ "index": i, "value": [diagonal[i].re, diagonal[i].im] });
    }
    let mut out = Outcome::ok(payload);
    if let (None, Some(b)) = (unknown, beta1) {
        let trace: Complex64 = diagonal.iter().sum();
        if (trace - Complex64::new(b, 0.0)).norm() > tol {
            out = out.fail(format!("trace {trace} differs from beta1 = {b}"));
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockTargetsInput {
    p: u64,
    g: i64,
    beta1: Vec<f64>,
    beta2: Vec<f64>,
}

fn block_realize(a: &BlockRealizeArgs, tol: f64) -> Result<Outcome, CliError> {
    let input = match &a.file {
        Some(path) => read_json::<BlockTargetsInput>(path)?,
        None => BlockTargetsInput {
            p: a.p
                .ok_or_else(|| malformed("give a JSON file or --p, --g, --beta1, --beta2"))?,
            g: a.g.ok_or_else(|| malformed("--g is required"))?,
            beta1: parse_reals(
                a.beta1
                    .as_deref()
                    .ok_or_else(|| malformed("--beta1 is required"))?,
                "--beta1",
            )?,
            beta2: parse_reals(
                a.beta2
                    .as_deref()
                    .ok_or_else(|| malformed("--beta2 is required"))?,
                "--beta2",
            )?,
        },
    };
    let t = BlockTargets::new(input.beta1, input.beta2, input.p, input.g)?;
    let rep = realize_block(&t)?;
    let mc = m_matrix_condition(&t)?;
    let mut payload = to_value(&rep);
    payload["m_condition"] = to_value(&mc);
    let mut out = Outcome::ok(payload);
    if let Some(w) = rep.witness {
        out = out.note(format!(
            "not nonnegative: L_{} entry ({}, {}) = {}",
            w.k + 1,
            w.u,
            w.v,
            w.value
        ));
    }
    if rep.nonnegative != mc.nonnegative {
        out = out.fail(format!(
            "L certificate says {} but the M condition says {}",
            rep.nonnegative, mc.nonnegative
        ));
    }
    if rep.nonnegative && !rep.spectrum_matches(tol) {
        out = out.fail(format!(
            "oracle spectrum differs from the targets by {:.3e} > tol {tol:e}",
            rep.spectrum_residual
        ));
    }
    Ok(out)
}

fn verify(a: &VerifyArgs, seed: u64, tol: f64) -> Result<Outcome, CliError> {
    match a.suite {
        Suite::Golden => {
            let file = match &a.golden_file {
                Some(path) => read_json(path)?,
                None => golden::builtin(),
            };
            Ok(golden::replay(&file))
        }
        Suite::Property => Ok(property::run(seed, tol)),
    }
}
