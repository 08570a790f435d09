//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;

use gcirc::blockcirc::{
    assemble, block_spectrum, l_matrices, m_matrix_condition, realize_block, s_matrices,
    BlockGCirculant, BlockTargets,
};
use gcirc::matcore::{build_qg, root_of_unity, GCirculant};
use gcirc::niep::{realize, TargetList, NONNEG_TOL};
use gcirc::numtheory::{
    is_cyclic_generator, is_prime, list_generators, multiplicative_order, power_table,
};
use gcirc::oracle::dense_eigen_oracle;
use gcirc::perm::{cycle_decomposition, w_submatrix, PDMatrix};
use gcirc::reconstruct::{
    complete_with_perron, diagonal_of, first_row_from_diagonal, DiagonalVector,
};
use gcirc::spectra::{
    circulant_eigenvalues, circulant_from_eigenvalues, g_circulant_spectrum, pd_spectrum,
    spectra_match,
};
use gcirc::{Complex64, DenseMatrix, GcircError, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(a: &Spectrum, b: &Spectrum, tol: f64, what: &str) -> Check {
    let rep = spectra_match(a, b, tol).map_err(|e| format!("{what}: {e}"))?;
    ensure(rep.matched, || {
        format!("{what}: max distance {:.3e} > {tol:.0e}", rep.max_distance)
    })
}

fn oracle(m: &DenseMatrix, what: &str) -> std::result::Result<Spectrum, String> {
    dense_eigen_oracle(m).map_err(|e| format!("{what}: {e}"))
}

fn printed_circ() -> Vec<Complex64> {
    vec![
        c(15.0, 0.0),
        c(-2.5, 3.441),
        c(-2.5, 0.8123),
        c(-2.5, -0.8123),
        c(-2.5, -3.441),
    ]
}

fn printed_gcirc() -> Spectrum {
    Spectrum::new(
        vec![
            c(15.0, 0.0),
            c(3.3437, 0.0),
            c(-3.3437, 0.0),
            c(0.0, 3.3437),
            c(0.0, -3.3437),
        ],
        0.0,
    )
}

fn row12345() -> Vec<Complex64> {
    (1..=5).map(|x| c(x as f64, 0.0)).collect()
}

fn random_row(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect()
}

fn criterion_1() -> Check {
    let circ = GCirculant::circulant(row12345()).unwrap();
    let eig = circulant_eigenvalues(circ.row()).map_err(|e| e.to_string())?;
    let printed = Spectrum::new(printed_circ(), 0.0);
    within(
        &Spectrum::new(eig.clone(), 0.0),
        &printed,
        5e-4,
        "circ closed form",
    )?;
    within(
        &oracle(&circ.to_dense(), "circ oracle")?,
        &printed,
        5e-4,
        "circ oracle",
    )?;

    let two = GCirculant::new(row12345(), 2).unwrap();
    let closed = g_circulant_spectrum(&eig, 5, 2).map_err(|e| e.to_string())?;
    within(&closed, &printed_gcirc(), 5e-4, "2-circ closed form")?;
    within(
        &oracle(&two.to_dense(), "2-circ oracle")?,
        &printed_gcirc(),
        5e-4,
        "2-circ oracle",
    )
}

fn criterion_2() -> Check {
    let q3 = cycle_decomposition(&(0..5).map(|i| i * 3 % 5).collect::<Vec<_>>()).unwrap();
    ensure(q3.to_matrix() == build_qg(5, 3).unwrap(), || {
        "Q_3 mismatch".into()
    })?;
    let pd = PDMatrix::new(q3, printed_circ()).unwrap();
    let two = GCirculant::new(row12345(), 2).unwrap();
    let want = oracle(&two.to_dense(), "2-circ oracle")?;
    within(&pd_spectrum(&pd), &want, 5e-4, "PD spectrum vs 2-circ")?;
    within(
        &oracle(&pd.to_dense(), "PD oracle")?,
        &want,
        5e-4,
        "PD oracle vs 2-circ",
    )
}

fn criterion_3() -> Check {
    let table = power_table(7, 11, 9).map_err(|e| e.to_string())?;
    ensure(table == vec![7, 5, 2, 3, 10, 4, 6, 9, 8], || {
        format!("power table {table:?}")
    })?;

    let w = w_submatrix(11, 7).map_err(|e| e.to_string())?;
    ensure(w.is_primary(), || "W(11,7) is not primary".into())?;
    // the printed W, by 1-based column of the 1 in each row
    let cols = [7usize, 3, 10, 6, 2, 9, 5, 1, 8, 4];
    let printed = DenseMatrix::from_fn(10, 10, |i, j| {
        if j + 1 == cols[i] {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    ensure(printed == w.to_matrix(), || {
        "printed W differs from w_submatrix".into()
    })?;
    let roots = Spectrum::new((0..10).map(|k| root_of_unity(k, 10)).collect(), 0.0);
    within(&oracle(&printed, "W oracle")?, &roots, 5e-4, "W spectrum")?;

    let ord = multiplicative_order(3, 11).map_err(|e| e.to_string())?;
    ensure(ord == 5, || format!("ord(3) mod 11 = {ord}"))?;
    let cert = is_cyclic_generator(3, 11).map_err(|e| e.to_string())?;
    ensure(!cert.is_generator, || {
        "3 accepted as generator mod 11".into()
    })
}

fn criterion_4() -> Check {
    let a = GCirculant::from_real(&[1., 2., 3., 4., 5., 6., 7.], 3).unwrap();
    let want: Vec<Complex64> = [1., 6., 4., 2., 7., 5., 3.]
        .iter()
        .map(|&x| c(x, 0.0))
        .collect();
    let diag = diagonal_of(&a);
    ensure(diag == want, || format!("diagonal {diag:?}"))?;
    let d = DiagonalVector::known(&diag, 3).map_err(|e| e.to_string())?;
    let back = first_row_from_diagonal(&d).map_err(|e| e.to_string())?;
    ensure(back == a, || "row not recovered exactly".into())?;

    let mut partial: Vec<Option<Complex64>> = diag.iter().copied().map(Some).collect();
    partial[6] = None;
    let d = DiagonalVector::new(partial, 3).map_err(|e| e.to_string())?;
    let filled = complete_with_perron(&d, 28.0).map_err(|e| e.to_string())?;
    let err = (diagonal_of(&filled)[6] - c(3.0, 0.0)).norm();
    ensure(err <= 1e-10, || format!("hidden entry off by {err:.3e}"))?;
    let worst = filled.to_dense().max_abs_diff(&a.to_dense()).unwrap();
    ensure(worst <= 1e-10, || {
        format!("completed matrix off by {worst:.3e}")
    })
}

fn criterion_5() -> Check {
    let rep = realize(&TargetList::new(6.0, 5.0, 7, 3).unwrap()).map_err(|e| e.to_string())?;
    let (a, b) = (1.0 / 7.0, 36.0 / 7.0);
    for (j, &v) in rep.circulant_row.iter().enumerate() {
        let want = if j == 1 { b } else { a };
        ensure((v - want).abs() <= 1e-15, || format!("row[{j}] = {v}"))?;
    }
    ensure(
        (a - 0.1429).abs() <= 5e-5 && (b - 5.1429).abs() <= 5e-5,
        || "row constants differ from 0.1429 / 5.1429".into(),
    )?;
    ensure(rep.nonnegative, || "realization flagged negative".into())?;

    // 1-based column of b in each displayed row
    let hot = [2usize, 5, 1, 4, 7, 3, 6];
    let dense = rep.matrix.to_dense();
    for (i, &h) in hot.iter().enumerate() {
        for j in 0..7 {
            let want = if j + 1 == h { 5.1429 } else { 0.1429 };
            ensure(
                (dense[(i, j)].re - want).abs() <= 5e-5 && dense[(i, j)].im == 0.0,
                || format!("entry ({i}, {j}) = {}", dense[(i, j)]),
            )?;
        }
    }

    let printed = Spectrum::new(
        vec![
            c(6.0, 0.0),
            c(5.0, 0.0),
            c(-5.0, 0.0),
            c(2.5, 4.33),
            c(2.5, -4.33),
            c(-2.5, 4.33),
            c(-2.5, -4.33),
        ],
        0.0,
    );
    within(
        &oracle(&dense, "realized oracle")?,
        &printed,
        5e-3,
        "realized spectrum",
    )
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in [5u64, 7, 11, 13] {
        let gens = list_generators(p).map_err(|e| e.to_string())?;
        for &g in &gens {
            for trial in 0..20 {
                let row = random_row(&mut rng, p as usize);
                let a = GCirculant::from_real(&row, g as i64).unwrap();
                let eig = circulant_eigenvalues(a.row()).unwrap();
                let tag = format!("p = {p}, g = {g}, trial {trial}");

                let closed =
                    g_circulant_spectrum(&eig, p, g as i64).map_err(|e| format!("{tag}: {e}"))?;
                within(&closed, &oracle(&a.to_dense(), &tag)?, 1e-6, &tag)?;

                for &h in &gens {
                    let other = g_circulant_spectrum(&eig, p, h as i64).unwrap();
                    within(&closed, &other, 1e-10, &format!("{tag}, generator {h}"))?;
                }

                let back = circulant_from_eigenvalues(&eig).unwrap();
                let err = back
                    .iter()
                    .zip(a.row())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                ensure(err <= 1e-10, || {
                    format!("{tag}: round trip off by {err:.3e}")
                })?;
            }
        }
    }
    Ok(())
}

fn random_targets(rng: &mut ChaCha8Rng, p: u64, g: i64, n: usize) -> BlockTargets {
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
    BlockTargets::new(beta1, beta2, p, g).unwrap()
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, g) in [(3u64, 2i64), (5, 2)] {
        for n in [2usize, 3] {
            for trial in 0..20 {
                let tag = format!("p = {p}, n = {n}, trial {trial}");
                let blocks: Vec<Vec<f64>> = (0..p).map(|_| random_row(&mut rng, n)).collect();
                let b = BlockGCirculant::from_real(&blocks, g).unwrap();
                let full = oracle(&assemble(&b), &tag)?;
                let s = s_matrices(&b);
                let parts: Vec<Spectrum> = s
                    .iter()
                    .map(|sk| oracle(&sk.to_dense(), &tag))
                    .collect::<std::result::Result<_, _>>()?;
                within(&full, &Spectrum::union(&parts, 0.0), 1e-6, &tag)?;
                within(
                    &full,
                    &block_spectrum(&b).map_err(|e| e.to_string())?,
                    1e-6,
                    &tag,
                )?;

                let dense_s: Vec<DenseMatrix> = s.iter().map(GCirculant::to_dense).collect();
                let l = l_matrices(&dense_s).unwrap();
                for (k, lk) in l.iter().enumerate() {
                    for u in 0..p as usize {
                        for v in 0..p as usize {
                            let err = (lk[(u, v)] - b.block_row(u, v)[k]).norm();
                            ensure(err <= 1e-10, || {
                                format!("{tag}: L_{k}({u}, {v}) off by {err:.3e}")
                            })?;
                        }
                    }
                }
            }
        }
    }

    let mut verdicts = [0usize; 2];
    for trial in 0..50 {
        let (p, g) = [(3u64, 2i64), (5, 2), (5, 3)][trial % 3];
        let n = 2 + trial % 3;
        let t = random_targets(&mut rng, p, g, n);
        let tag = format!("targets trial {trial}");
        let rep = realize_block(&t).map_err(|e| format!("{tag}: {e}"))?;
        let mc = m_matrix_condition(&t).map_err(|e| format!("{tag}: {e}"))?;
        ensure(rep.nonnegative == mc.nonnegative, || {
            format!(
                "{tag}: L verdict {} vs M verdict {}",
                rep.nonnegative, mc.nonnegative
            )
        })?;
        if rep.nonnegative {
            ensure(rep.min_entry >= -NONNEG_TOL, || {
                format!("{tag}: min entry {}", rep.min_entry)
            })?;
            ensure(rep.spectrum_matches(1e-6), || {
                format!("{tag}: spectrum residual {:.3e}", rep.spectrum_residual)
            })?;
        }
        verdicts[rep.nonnegative as usize] += 1;
    }
    ensure(verdicts[0] > 0 && verdicts[1] > 0, || {
        format!("targets never exercised both verdicts: {verdicts:?}")
    })
}

fn criterion_8() -> Check {
    let rep = realize(&TargetList::new(1.0, 2.0, 7, 3).unwrap()).map_err(|e| e.to_string())?;
    ensure(!rep.nonnegative, || {
        "realize(1, 2, 7, 3) reported nonnegative".into()
    })?;
    let w = rep.negative_witness.ok_or("no witness")?;
    ensure(
        w.value < 0.0 && rep.matrix.to_dense()[(w.row, w.col)].re == w.value,
        || format!("bad witness {w:?}"),
    )?;

    for p in (2u64..=13).filter(|&p| is_prime(p)) {
        for g in 1..p {
            let brute = (1..p)
                .position(|e| (1..=e).fold(1, |acc, _| acc * g % p) == 1)
                .unwrap() as u64
                + 1;
            let cert = is_cyclic_generator(g as i64, p).map_err(|e| e.to_string())?;
            ensure(cert.is_generator == (brute == p - 1), || {
                format!(
                    "g = {g}, p = {p}: verdict {} but order {brute}",
                    cert.is_generator
                )
            })?;
        }
    }

    let eig = circulant_eigenvalues(&(0..6).map(|x| c(x as f64, 0.0)).collect::<Vec<_>>()).unwrap();
    let err = g_circulant_spectrum(&eig, 6, 5).unwrap_err();
    ensure(
        err == GcircError::NotPrime(6) && !err.to_string().is_empty(),
        || format!("n = 6: {err:?}"),
    )?;
    let eig =
        circulant_eigenvalues(&(0..11).map(|x| c(x as f64, 0.0)).collect::<Vec<_>>()).unwrap();
    let err = g_circulant_spectrum(&eig, 11, 3).unwrap_err();
    ensure(
        err == GcircError::NotGenerator { g: 3, p: 11 } && !err.to_string().is_empty(),
        || format!("g = 3 mod 11: {err:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 circulant and 2-circulant spectra of (1..5)", criterion_1),
        ("2 monomial spectrum of Q_3 * diag", criterion_2),
        ("3 powers of 7 mod 11 and the W block", criterion_3),
        ("4 diagonal of 3-circ(1..7) and reconstruction", criterion_4),
        ("5 realization of (6, 5) at order 7", criterion_5),
        ("6 random g-circulants vs oracle", criterion_6),
        ("7 block reduction, round trip, realization", criterion_7),
        ("8 negative controls", criterion_8),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS criterion {name}"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name}: {e}");
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
