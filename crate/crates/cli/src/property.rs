//! Randomized invariant suite driven by `--seed`.

use gcirc::blockcirc::{
    assemble, l_matrices, m_matrix_condition, realize_block, s_matrices, BlockGCirculant,
    BlockTargets,
};
use gcirc::matcore::GCirculant;
use gcirc::niep::{realize, TargetList, NONNEG_TOL};
use gcirc::numtheory::list_generators;
use gcirc::oracle::dense_eigen_oracle;
use gcirc::reconstruct::{diagonal_of, first_row_from_diagonal, DiagonalVector};
use gcirc::spectra::{
    circulant_eigenvalues, circulant_from_eigenvalues, g_circulant_spectrum, spectra_match,
};
use gcirc::{DenseMatrix, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::{to_value, Outcome};

const TRIALS: usize = 5;

#[derive(Debug, Clone, Serialize)]
struct PropertyReport {
    name: &'static str,
    trials: usize,
    failures: usize,
    /// Largest observed error (0 for exact checks).
    worst: f64,
    tol: f64,
    first_failure: Option<String>,
}

struct Tally {
    report: PropertyReport,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Tally {
            report: PropertyReport {
                name,
                trials: 0,
                failures: 0,
                worst: 0.0,
                tol,
                first_failure: None,
            },
        }
    }

    fn record(&mut self, err: gcirc::Result<f64>, context: impl FnOnce() -> String) {
        let r = &mut self.report;
        r.trials += 1;
        match err {
            Ok(e) if e <= r.tol => r.worst = r.worst.max(e),
            Ok(e) => {
                r.worst = r.worst.max(e);
                r.failures += 1;
                r.first_failure
                    .get_or_insert_with(|| format!("{}: error {e:.3e}", context()));
            }
            Err(e) => {
                r.failures += 1;
                r.first_failure
                    .get_or_insert_with(|| format!("{}: {e}", context()));
            }
        }
    }
}

fn distance(a: &Spectrum, b: &Spectrum) -> gcirc::Result<f64> {
    Ok(spectra_match(a, b, f64::INFINITY)?.max_distance)
}

fn random_row(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect()
}

pub fn run(seed: u64, tol: f64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut closed_vs_oracle = Tally::new("g-circulant closed form vs oracle", tol);
    let mut insensitivity = Tally::new("spectrum independent of the generator", 1e-10);
    let mut dft = Tally::new("circulant eigenvalue round trip", 1e-10);
    let mut diagonal = Tally::new("diagonal round trip", 0.0);

    for p in [5u64, 7, 11, 13] {
        let gens = list_generators(p).expect("p is prime");
        for &g in &gens {
            for _ in 0..TRIALS {
                let row = random_row(&mut rng, p as usize);
                let a = GCirculant::from_real(&row, g as i64).expect("nonempty row");
                let ctx = || format!("p = {p}, g = {g}, row {row:?}");
                let eig = circulant_eigenvalues(a.row()).expect("nonempty row");
                let closed = g_circulant_spectrum(&eig, p, g as i64);
                closed_vs_oracle.record(
                    closed
                        .clone()
                        .and_then(|s| distance(&s, &dense_eigen_oracle(&a.to_dense())?)),
                    ctx,
                );
                for &h in &gens {
                    let other = g_circulant_spectrum(&eig, p, h as i64);
                    insensitivity
                        .record(closed.clone().and_then(|s| distance(&s, &other?)), || {
                            format!("p = {p}, generators {g} and {h}")
                        });
                }
                dft.record(
                    circulant_from_eigenvalues(&eig).map(|back| {
                        back.iter()
                            .zip(a.row())
                            .map(|(x, y)| (x - y).norm())
                            .fold(0.0, f64::max)
                    }),
                    ctx,
                );
                diagonal.record(
                    DiagonalVector::known(&diagonal_of(&a), g as i64)
                        .and_then(|d| first_row_from_diagonal(&d))
                        .map(|b| if b == a { 0.0 } else { f64::INFINITY }),
                    ctx,
                );
            }
        }
    }

    let mut realized = Tally::new("scalar realization spectrum", tol);
    for _ in 0..4 * TRIALS {
        let p = [5u64, 7, 11, 13][rng.gen_range(0..4)];
        let gens = list_generators(p).expect("p is prime");
        let g = gens[rng.gen_range(0..gens.len())];
        let b1: f64 = rng.gen_range(0.0..10.0);
        let b2: f64 = rng.gen_range(0.5..10.0);
        realized.record(
            TargetList::new(b1, b2, p, g as i64)
                .and_then(|t| realize(&t))
                .map(|r| {
                    let sign_ok = r.nonnegative == (b1 >= b2);
                    if sign_ok {
                        r.spectrum_residual
                    } else {
                        f64::INFINITY
                    }
                }),
            || format!("beta = ({b1}, {b2}), p = {p}, g = {g}"),
        );
    }

    let mut reduction = Tally::new("block spectrum is the union of the S_k spectra", tol);
    let mut inverse_dft = Tally::new("L_k recover the block coefficients", 1e-10);
    for (p, g) in [(3usize, 2i64), (5, 2)] {
        for n in [2usize, 3] {
            for _ in 0..TRIALS {
                let blocks: Vec<Vec<f64>> = (0..p).map(|_| random_row(&mut rng, n)).collect();
                let b = BlockGCirculant::from_real(&blocks, g).expect("valid block input");
                let ctx = || format!("p = {p}, n = {n}, blocks {blocks:?}");
                let s = s_matrices(&b);
                let parts: gcirc::Result<Vec<Spectrum>> = s
                    .iter()
                    .map(|sk| dense_eigen_oracle(&sk.to_dense()))
                    .collect();
                reduction.record(
                    parts.and_then(|parts| {
                        distance(
                            &dense_eigen_oracle(&assemble(&b))?,
                            &Spectrum::union(&parts, 0.0),
                        )
                    }),
                    ctx,
                );
                let dense: Vec<DenseMatrix> = s.iter().map(GCirculant::to_dense).collect();
                inverse_dft.record(
                    l_matrices(&dense).map(|l| {
                        let mut worst = 0.0f64;
                        for (k, lk) in l.iter().enumerate() {
                            for u in 0..p {
                                for v in 0..p {
                                    worst = worst.max((lk[(u, v)] - b.block_row(u, v)[k]).norm());
                                }
                            }
                        }
                        worst
                    }),
                    ctx,
                );
            }
        }
    }

    let mut certificate = Tally::new("L certificate agrees with the M condition", tol);
    for _ in 0..10 * TRIALS {
        let (p, g) = [(3u64, 2i64), (5, 2), (5, 3)][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=4usize);
        let mut beta1 = vec![0.0; n];
        let mut beta2 = vec![0.0; n];
        beta1[0] = rng.gen_range(4.0..12.0);
        beta2[0] = rng.gen_range(0.5..beta1[0]);
        for k in 1..=n / 2 {
            beta1[k] = rng.gen_range(-3.0..3.0);
            beta2[k] = rng.gen_range(0.5..3.0);
            beta1[n - k] = beta1[k];
            beta2[n - k] = beta2[k];
        }
        let ctx = || format!("p = {p}, beta1 {beta1:?}, beta2 {beta2:?}");
        let result = BlockTargets::new(beta1.clone(), beta2.clone(), p, g).and_then(|t| {
            let rep = realize_block(&t)?;
            let mc = m_matrix_condition(&t)?;
            Ok(if rep.nonnegative != mc.nonnegative {
                f64::INFINITY
            } else if rep.nonnegative {
                if rep.min_entry < -NONNEG_TOL {
                    f64::INFINITY
                } else {
                    rep.spectrum_residual
                }
            } else {
                0.0
            })
        });
        certificate.record(result, ctx);
    }

    let reports: Vec<PropertyReport> = [
        closed_vs_oracle,
        insensitivity,
        dft,
        diagonal,
        realized,
        reduction,
        inverse_dft,
        certificate,
    ]
    .into_iter()
    .map(|t| t.report)
    .collect();
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r.failures > 0)
        .map(|r| r.name)
        .collect();
    let out = Outcome::ok(json!({
        "suite": "property",
        "seed": seed,
        "passed": reports.len() - failed.len(),
        "total": reports.len(),
        "properties": to_value(&reports),
    }));
    if failed.is_empty() {
        out.note(format!(
            "{}/{} properties hold",
            reports.len(),
            reports.len()
        ))
    } else {
        out.fail(format!("failing properties: {}", failed.join("; ")))
    }
}
