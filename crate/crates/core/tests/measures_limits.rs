use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use qbrion_core::lattice::{dilate, Polytope};
use qbrion_core::measures::{self, DEFAULT_TOL};

fn hexagon() -> Polytope {
    Polytope::from_normals(&[&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1], &[1, -1]], &[0, 0, 1, 2, 2, 1]).unwrap()
}

#[test]
fn scaled_binomial_characteristic_function() {
    for k in [5i64, 50] {
        let mu = measures::mu_measure(&Polytope::segment(k)).unwrap();
        for x in [0.1, 1.0, PI] {
            let got = measures::characteristic_function_scaled(&mu, &[x], k as f64);
            let want = Complex64::from_polar(1.0, x / 2.0) * (x / (2.0 * k as f64)).cos().powi(k as i32);
            assert!((got - want).norm() < 1e-12, "k={k} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn multinomial_covariance_is_linear_in_k() {
    for p in [Polytope::segment(1), Polytope::projective_simplex(2, 2)] {
        let model = measures::gaussian_model(&p, DEFAULT_TOL).unwrap();
        let limit = model.covariance();
        let mut first = None;
        for k in 1..=8 {
            let mom = measures::mu_moments(&dilate(&p, k).unwrap()).unwrap();
            let kr = BigRational::from_integer(k.into());
            let scaled: Vec<Vec<BigRational>> = mom.covariance.iter().map(|r| r.iter().map(|x| x / &kr).collect()).collect();
            let first = first.get_or_insert_with(|| scaled.clone());
            assert_eq!(&scaled, first);
            for (a, b) in scaled.iter().flatten().zip(limit.iter().flatten()) {
                assert!((num_traits::ToPrimitive::to_f64(a).unwrap() - b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn hexagon_convergence() {
    let t = Instant::now();
    let rep = measures::convergence_report(&hexagon(), &[25, 100, 400], DEFAULT_TOL).unwrap();
    eprintln!("{:?}\n{}", t.elapsed(), rep.to_tsv());
    let devs: Vec<f64> = rep.rows.iter().map(|r| r.relative_covariance_deviation).collect();
    assert!(devs.windows(2).all(|w| w[1] < w[0]));
    assert!(devs[2] <= 0.03);
    for row in &rep.rows {
        assert_eq!(row.mean_over_k, vec!["1".to_string(), "1".to_string()]);
    }
}

#[test]
fn convolution_semigroup() {
    for p in [Polytope::segment(1), Polytope::projective_simplex(2, 1)] {
        for k in 1..=4 {
            for l in 1..=4 {
                let a = measures::mu_measure(&dilate(&p, k).unwrap()).unwrap();
                let b = measures::mu_measure(&dilate(&p, l).unwrap()).unwrap();
                let c = measures::mu_measure(&dilate(&p, k + l).unwrap()).unwrap();
                assert_eq!(measures::convolve(&a, &b).unwrap(), c);
            }
        }
    }
}

#[test]
fn figure_heatmaps() {
    let p = dilate(&hexagon(), 30).unwrap();
    let mut peaks = Vec::new();
    for q in [0.2, 0.6, 0.9] {
        let w = measures::heatmap_weights(&p, q).unwrap();
        let total: f64 = w.iter().map(|(_, x)| x).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let map: std::collections::HashMap<Vec<i64>, f64> = w.iter().cloned().collect();
        for (u, x) in &w {
            assert_eq!(map[&vec![60 - u[0], 60 - u[1]]].to_bits(), x.to_bits());
        }
        peaks.push(w.iter().map(|(_, x)| *x).fold(0.0, f64::max));
    }
    // normalized tables concentrate toward the center as q grows
    assert!(peaks[0] < peaks[1] && peaks[1] < peaks[2]);
}
