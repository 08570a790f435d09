//! Replay of the worked examples stored in `golden/worked_examples.json`.

use gcirc::matcore::{root_of_unity, GCirculant};
use gcirc::niep::{realize, TargetList};
use gcirc::numtheory::{is_cyclic_generator, multiplicative_order, power_table};
use gcirc::oracle::dense_eigen_oracle;
use gcirc::perm::w_submatrix;
use gcirc::reconstruct::{
    complete_with_perron, diagonal_of, first_row_from_diagonal, DiagonalVector,
};
use gcirc::spectra::{circulant_eigenvalues, g_circulant_spectrum, spectra_match};
use gcirc::{Complex64, DenseMatrix, Spectrum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{to_value, Outcome};

const BUILTIN: &str = include_str!("../golden/worked_examples.json");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenFile {
    pub examples: Vec<Example>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Example {
    GcircSpectrum {
        name: String,
        row: Vec<f64>,
        g: i64,
        #[serde(with = "gcirc::json::complex_vec")]
        circulant: Vec<Complex64>,
        #[serde(with = "gcirc::json::complex_vec")]
        spectrum: Vec<Complex64>,
        tol: f64,
    },
    PrimitiveRootExample {
        name: String,
        n: u64,
        g: i64,
        powers: Vec<u64>,
        /// 1-based column of the 1 in each row of `W`.
        w_columns: Vec<usize>,
        non_generator: i64,
        non_generator_order: u64,
        tol: f64,
    },
    DiagonalReconstruction {
        name: String,
        row: Vec<f64>,
        g: i64,
        diagonal: Vec<f64>,
        beta1: f64,
        tol: f64,
    },
    NiepRealization {
        name: String,
        beta1: f64,
        beta2: f64,
        p: u64,
        g: i64,
        a: f64,
        b: f64,
        row_tol: f64,
        /// 1-based column of `b` in each row.
        hot_columns: Vec<usize>,
        #[serde(with = "gcirc::json::complex_vec")]
        spectrum: Vec<Complex64>,
        spectrum_tol: f64,
    },
}

pub fn builtin() -> GoldenFile {
    serde_json::from_str(BUILTIN).expect("built-in golden file parses")
}

#[derive(Debug, Clone, Serialize)]
struct CheckLine {
    check: String,
    passed: bool,
    detail: String,
}

#[derive(Debug, Clone, Serialize)]
struct ExampleReport {
    name: String,
    kind: &'static str,
    passed: bool,
    checks: Vec<CheckLine>,
}

#[derive(Default)]
struct Checks(Vec<CheckLine>);

impl Checks {
    fn push(&mut self, check: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(CheckLine {
            check: check.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn spectra(&mut self, check: &str, a: gcirc::Result<Spectrum>, b: &Spectrum, tol: f64) {
        match a.and_then(|a| spectra_match(&a, b, tol)) {
            Ok(r) => self.push(
                check,
                r.matched,
                format!("max distance {:.3e}, tol {tol:e}", r.max_distance),
            ),
            Err(e) => self.push(check, false, e.to_string()),
        }
    }

    fn equal<T: PartialEq + std::fmt::Debug>(
        &mut self,
        check: &str,
        got: gcirc::Result<T>,
        want: &T,
    ) {
        match got {
            Ok(v) if &v == want => self.push(check, true, format!("{v:?}")),
            Ok(v) => self.push(check, false, format!("got {v:?}, expected {want:?}")),
            Err(e) => self.push(check, false, e.to_string()),
        }
    }
}

fn reals(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn replay_one(ex: &Example) -> ExampleReport {
    let mut c = Checks::default();
    let (name, kind) = match ex {
        Example::GcircSpectrum {
            name,
            row,
            g,
            circulant,
            spectrum,
            tol,
        } => {
            let printed_circ = Spectrum::new(circulant.clone(), 0.0);
            let printed = Spectrum::new(spectrum.clone(), 0.0);
            let eig = circulant_eigenvalues(&reals(row));
            c.spectra(
                "circulant closed form",
                eig.clone().map(|e| Spectrum::new(e, 0.0)),
                &printed_circ,
                *tol,
            );
            match (
                GCirculant::circulant(reals(row)),
                GCirculant::new(reals(row), *g),
            ) {
                (Ok(circ), Ok(gc)) => {
                    c.spectra(
                        "circulant oracle",
                        dense_eigen_oracle(&circ.to_dense()),
                        &printed_circ,
                        *tol,
                    );
                    let closed = eig.and_then(|e| g_circulant_spectrum(&e, row.len() as u64, *g));
                    c.spectra("g-circulant closed form", closed, &printed, *tol);
                    c.spectra(
                        "g-circulant oracle",
                        dense_eigen_oracle(&gc.to_dense()),
                        &printed,
                        *tol,
                    );
                }
                (Err(e), _) | (_, Err(e)) => c.push("build", false, e.to_string()),
            }
            (name, "gcirc_spectrum")
        }
        Example::PrimitiveRootExample {
            name,
            n,
            g,
            powers,
            w_columns,
            non_generator,
            non_generator_order,
            tol,
        } => {
            c.equal("power table", power_table(*g, *n, powers.len()), powers);
            c.equal(
                "is generator",
                is_cyclic_generator(*g, *n).map(|r| r.is_generator),
                &true,
            );
            match w_submatrix(*n as usize, *g) {
                Ok(w) => {
                    let cols = w_columns.clone();
                    let printed = (cols.len() == w.n()).then(|| {
                        DenseMatrix::from_fn(cols.len(), cols.len(), |i, j| {
                            Complex64::new(if j + 1 == cols[i] { 1.0 } else { 0.0 }, 0.0)
                        })
                    });
                    c.push(
                        "W is primary",
                        w.is_primary(),
                        format!("cycle lengths {:?}", w.cycle_lengths()),
                    );
                    match printed {
                        Some(m) => {
                            c.push("W matches printed columns", m == w.to_matrix(), "");
                            let m_ord = m.rows();
                            let roots = Spectrum::new(
                                (0..m_ord as i64).map(|k| root_of_unity(k, m_ord)).collect(),
                                0.0,
                            );
                            c.spectra(
                                "W spectrum is the roots of unity",
                                dense_eigen_oracle(&m),
                                &roots,
                                *tol,
                            );
                        }
                        None => c.push(
                            "W matches printed columns",
                            false,
                            "wrong number of columns",
                        ),
                    }
                }
                Err(e) => c.push("W", false, e.to_string()),
            }
            c.equal(
                "order of the non-generator",
                multiplicative_order(*non_generator, *n),
                non_generator_order,
            );
            c.equal(
                "non-generator rejected",
                is_cyclic_generator(*non_generator, *n).map(|r| r.is_generator),
                &false,
            );
            (name, "primitive_root_example")
        }
        Example::DiagonalReconstruction {
            name,
            row,
            g,
            diagonal,
            beta1,
            tol,
        } => {
            match GCirculant::from_real(row, *g) {
                Ok(a) => {
                    c.equal("diagonal", Ok(diagonal_of(&a)), &reals(diagonal));
                    let back = DiagonalVector::from_real(diagonal, *g)
                        .and_then(|d| first_row_from_diagonal(&d));
                    c.equal(
                        "first row from diagonal",
                        back.map(|m| m.row().to_vec()),
                        &reals(row),
                    );
                    let mut known: Vec<Option<Complex64>> =
                        reals(diagonal).into_iter().map(Some).collect();
                    for hide in 0..known.len() {
                        let keep = known[hide].take();
                        let filled = DiagonalVector::new(known.clone(), *g)
                            .and_then(|d| complete_with_perron(&d, *beta1))
                            .map(|m| {
                                m.row()
                                    .iter()
                                    .zip(a.row())
                                    .map(|(x, y)| (x - y).norm())
                                    .fold(0.0, f64::max)
                            });
                        match filled {
                            Ok(err) => c.push(
                                &format!("hidden entry {hide} from trace"),
                                err <= *tol,
                                format!("error {err:.3e}"),
                            ),
                            Err(e) => c.push(
                                &format!("hidden entry {hide} from trace"),
                                false,
                                e.to_string(),
                            ),
                        }
                        known[hide] = keep;
                    }
                }
                Err(e) => c.push("build", false, e.to_string()),
            }
            (name, "diagonal_reconstruction")
        }
        Example::NiepRealization {
            name,
            beta1,
            beta2,
            p,
            g,
            a,
            b,
            row_tol,
            hot_columns,
            spectrum,
            spectrum_tol,
        } => {
            match TargetList::new(*beta1, *beta2, *p, *g).and_then(|t| realize(&t)) {
                Ok(rep) => {
                    c.push(
                        "nonnegative",
                        rep.nonnegative,
                        format!("min entry {:e}", rep.min_entry),
                    );
                    let dense = rep.matrix.to_dense();
                    let mut worst = 0.0f64;
                    let mut layout_ok = hot_columns.len() == dense.rows();
                    for (i, &h) in hot_columns.iter().enumerate().take(dense.rows()) {
                        for j in 0..dense.cols() {
                            let want = if j + 1 == h { *b } else { *a };
                            worst = worst.max((dense[(i, j)] - Complex64::new(want, 0.0)).norm());
                        }
                    }
                    layout_ok &= worst <= *row_tol;
                    c.push(
                        "displayed matrix",
                        layout_ok,
                        format!("max entry error {worst:.3e}, tol {row_tol:e}"),
                    );
                    let printed = Spectrum::new(spectrum.clone(), 0.0);
                    c.spectra(
                        "oracle spectrum",
                        dense_eigen_oracle(&dense),
                        &printed,
                        *spectrum_tol,
                    );
                }
                Err(e) => c.push("realize", false, e.to_string()),
            }
            (name, "niep_realization")
        }
    };
    ExampleReport {
        name: name.clone(),
        kind,
        passed: !c.0.is_empty() && c.0.iter().all(|l| l.passed),
        checks: c.0,
    }
}

pub fn replay(file: &GoldenFile) -> Outcome {
    let reports: Vec<ExampleReport> = file.examples.iter().map(replay_one).collect();
    let passed = reports.iter().filter(|r| r.passed).count();
    let total = reports.len();
    let out = Outcome::ok(json!({
        "suite": "golden",
        "passed": passed,
        "total": total,
        "examples": to_value(&reports),
    }));
    if total == 0 {
        out.fail("golden file has no examples")
    } else if passed < total {
        let failing: Vec<&str> = reports
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.name.as_str())
            .collect();
        out.fail(format!(
            "{}/{total} examples failed: {}",
            total - passed,
            failing.join("; ")
        ))
    } else {
        out.note(format!("{passed}/{total} examples passed"))
    }
}
