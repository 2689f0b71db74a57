//! Batch diversity on a 2-D probit pool made of three tight clusters: ACS-FW
//! spreads its batch across clusters while top-b BALD piles into one.

use acsfw::acquisition::{bald_scores, select_top_b, BaldSettings};
use acsfw::kernels::fisher_kernel;
use acsfw::{binarize, fw_construct, ProbitModel};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const CENTERS: [[f64; 2]; 3] = [[1.5, 0.3], [-0.4, 1.6], [-1.2, -1.2]];
const PER_CLUSTER: usize = 100;

fn main() {
    let b = 10;
    let mut acs_all = 0;
    let mut bald_narrow = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = |s: f64, r: &mut ChaCha8Rng| -> f64 {
            let z: f64 = StandardNormal.sample(r);
            s * z
        };
        let truth = [1.0, -0.6];
        let n0 = 12;
        let lx = DMatrix::from_fn(n0, 2, |_, _| rng.random_range(-2.5..2.5));
        let ly: Vec<f64> = (0..n0)
            .map(|i| f64::from((lx[(i, 0)] * truth[0] + lx[(i, 1)] * truth[1] + normal(0.3, &mut rng) > 0.0) as u8))
            .collect();
        let model = ProbitModel::fit(&lx, &ly, 1.0).unwrap().into();
        let mut rows = Vec::new();
        for c in CENTERS {
            for _ in 0..PER_CLUSTER {
                rows.push(c[0] + normal(0.08, &mut rng));
                rows.push(c[1] + normal(0.08, &mut rng));
            }
        }
        let pool = DMatrix::from_row_slice(3 * PER_CLUSTER, 2, &rows);
        let cluster = |i: usize| i / PER_CLUSTER;
        let kernel = fisher_kernel(&model, &pool).unwrap();
        let acs = binarize(&fw_construct(&kernel, b).unwrap()).indices;
        let bald = select_top_b(&bald_scores(&model, &pool, BaldSettings { samples: 1000, seed }).unwrap(), b);
        let touched = |idx: &[usize]| {
            let mut seen = [false; 3];
            for &i in idx {
                seen[cluster(i)] = true;
            }
            seen.iter().filter(|s| **s).count()
        };
        let (ta, tb) = (touched(&acs), touched(&bald));
        acs_all += usize::from(ta == 3);
        bald_narrow += usize::from(tb <= 2);
        println!("seed {seed:2}: acs-fw {} points over {ta} clusters, bald over {tb} clusters", acs.len());
    }
    println!("acs-fw touched all clusters in {acs_all}/20 seeds; bald used at most two in {bald_narrow}/20");
}
