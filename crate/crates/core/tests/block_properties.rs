use gcirc::blockcirc::{
    assemble, l_matrices, m_matrix_condition, realize_block, s_matrices, BlockGCirculant,
    BlockTargets, REAL_TOL,
};
use gcirc::niep::NONNEG_TOL;
use gcirc::oracle::dense_eigen_oracle;
use gcirc::spectra::spectra_match;
use gcirc::{DenseMatrix, GCirculant, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_block(rng: &mut ChaCha8Rng, p: usize, g: i64, n: usize) -> BlockGCirculant {
    let blocks: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())
        .collect();
    BlockGCirculant::from_real(&blocks, g).unwrap()
}

#[test]
fn spectrum_reduction_up_to_block_order_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (p, g) in [(3usize, 2i64), (5, 2), (5, 3)] {
        for n in 2..=4 {
            for _ in 0..5 {
                let b = random_block(&mut rng, p, g, n);
                let full = dense_eigen_oracle(&assemble(&b)).unwrap();
                let parts: Vec<Spectrum> = s_matrices(&b)
                    .iter()
                    .map(|s| dense_eigen_oracle(&s.to_dense()).unwrap())
                    .collect();
                let rep = spectra_match(&full, &Spectrum::union(&parts, 0.0), 1e-6).unwrap();
                assert!(rep.matched, "p = {p}, n = {n}: {}", rep.max_distance);
            }
        }
    }
}

#[test]
fn real_blocks_give_real_l() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for n in 1..=6 {
        let b = random_block(&mut rng, 5, 2, n);
        let s: Vec<DenseMatrix> = s_matrices(&b).iter().map(GCirculant::to_dense).collect();
        for k in 1..n {
            let paired = s[n - k].max_abs_diff(&s[k].adjoint().transpose()).unwrap();
            assert!(paired < 1e-10);
        }
        for lk in l_matrices(&s).unwrap() {
            assert!(lk.max_imag_abs() < REAL_TOL);
        }
    }
}

#[test]
fn certificate_and_m_condition_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut seen = [0usize; 2];
    for trial in 0..200 {
        let (p, g) = [(3u64, 2i64), (5, 2), (5, 3), (7, 3)][trial % 4];
        let n = 1 + trial % 4;
        let mut beta1 = vec![0.0; n];
        let mut beta2 = vec![0.0; n];
        beta1[0] = rng.gen_range(2.0..10.0);
        beta2[0] = rng.gen_range(0.5..beta1[0]);
        for k in 1..=n / 2 {
            beta1[k] = rng.gen_range(-4.0..4.0);
            beta2[k] = rng.gen_range(0.5..4.0);
            beta1[n - k] = beta1[k];
            beta2[n - k] = beta2[k];
        }
        let t = BlockTargets::new(beta1, beta2, p, g).unwrap();
        let rep = realize_block(&t).unwrap();
        let mc = m_matrix_condition(&t).unwrap();
        assert_eq!(rep.nonnegative, mc.nonnegative, "trial {trial}");
        if rep.nonnegative {
            assert!(rep.min_entry >= -NONNEG_TOL);
            assert!(
                rep.spectrum_matches(1e-6),
                "trial {trial}: {}",
                rep.spectrum_residual
            );
        } else {
            assert!(rep.witness.is_some());
        }
        seen[rep.nonnegative as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}
