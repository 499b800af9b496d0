use std::collections::HashSet;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wh_core::symbol::default_grid_step;
use wh_core::wiener_hopf::{adjoint_coeffs, apply, truncation_matrix, Window};
use wh_core::{GroupElement, Matrix, OrderedGroup, TrigPoly, Vector};

fn rand_c(rng: &mut ChaCha8Rng) -> C {
    C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn random_symbol(rng: &mut ChaCha8Rng, g: &Arc<OrderedGroup>, terms: usize, lo: i64, hi: i64) -> TrigPoly {
    let mut map = std::collections::BTreeMap::new();
    for _ in 0..terms {
        let e = GroupElement::new((0..g.rank()).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>());
        map.insert(e, rand_c(rng));
    }
    TrigPoly::from_terms(g.clone(), map).unwrap()
}

/// Symbol supported in `X_+ ∩ [0, reach]^r`.
fn analytic_symbol(rng: &mut ChaCha8Rng, g: &Arc<OrderedGroup>, terms: usize, reach: i64) -> TrigPoly {
    let k = random_symbol(rng, g, terms, 0, reach);
    let positive = k.terms().filter(|(e, _)| g.is_positive(e).unwrap()).map(|(e, c)| (e.clone(), *c));
    TrigPoly::from_terms(g.clone(), positive.collect::<Vec<_>>()).unwrap()
}

fn random_vector(rng: &mut ChaCha8Rng, g: &Arc<OrderedGroup>, window: &Window) -> Vector {
    let mut entries = Vec::new();
    for e in window.elements() {
        if rng.gen_bool(0.6) {
            entries.push((e.clone(), rand_c(rng)));
        }
    }
    Vector::new(g.clone(), entries).unwrap()
}

/// Z with a prefix window, or lex Z² with a box window.
fn setting(which: usize) -> (Arc<OrderedGroup>, Window) {
    if which == 0 {
        let g = Arc::new(OrderedGroup::integers());
        let w = Window::omega(&g, 24).unwrap();
        (g, w)
    } else {
        let g = Arc::new(OrderedGroup::lex(2).unwrap());
        let w = Window::boxed(&g, vec![-2, -3], vec![3, 3]).unwrap();
        (g, w)
    }
}

fn vdist(a: &Vector, b: &Vector) -> f64 {
    a.add(&b.scale(C::new(-1.0, 0.0))).unwrap().norm2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn apply_is_linear_and_bounded_by_l1(seed in any::<u64>(), which in 0usize..2) {
        let (g, window) = setting(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_symbol(&mut rng, &g, 5, -3, 3);
        let (u, v) = (random_vector(&mut rng, &g, &window), random_vector(&mut rng, &g, &window));
        let a = rand_c(&mut rng);
        let lhs = apply(&k, &u.scale(a).add(&v).unwrap()).unwrap();
        let rhs = apply(&k, &u).unwrap().scale(a).add(&apply(&k, &v).unwrap()).unwrap();
        prop_assert!(vdist(&lhs, &rhs) <= 1e-12 * (1.0 + lhs.norm2()));
        let ku = apply(&k, &u).unwrap();
        prop_assert!(ku.norm2() <= k.l1_norm() * u.norm2() * (1.0 + 1e-12));
    }

    #[test]
    fn truncation_structure(seed in any::<u64>(), which in 0usize..2) {
        let (g, window) = setting(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_symbol(&mut rng, &g, 6, -4, 4);
        let m = truncation_matrix(&k, &window).unwrap().matrix;
        let adj = truncation_matrix(&adjoint_coeffs(&k), &window).unwrap().matrix;
        prop_assert_eq!(adj, m.conj_transpose());
        // entries depend only on the difference of the indices
        let el = window.elements();
        let mut seen = std::collections::HashMap::new();
        for (i, chi) in el.iter().enumerate() {
            for (j, xi) in el.iter().enumerate() {
                let d = chi - xi;
                prop_assert_eq!(m.row(i)[j], k.coeff(&d));
                let first = *seen.entry(d).or_insert(m.row(i)[j]);
                prop_assert_eq!(first, m.row(i)[j]);
            }
        }
    }

    #[test]
    fn product_identity_on_interior_entries(seed in any::<u64>(), which in 0usize..2) {
        let (g, window) = setting(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_symbol(&mut rng, &g, 5, -3, 3);
        let psi = analytic_symbol(&mut rng, &g, 4, 2);
        let prod = truncation_matrix(&k, &window).unwrap().matrix.matmul(&truncation_matrix(&psi, &window).unwrap().matrix);
        let whole = truncation_matrix(&k.mul(&psi).unwrap(), &window).unwrap().matrix;
        let inside: HashSet<&GroupElement> = window.elements().iter().collect();
        let mut interior = 0;
        for (j, xi) in window.elements().iter().enumerate() {
            // Σ_η k(χ − η) ψ(η − ξ) only involves η ∈ ξ + supp ψ
            if !psi.terms().all(|(s, _)| inside.contains(&(xi + s))) {
                continue;
            }
            for i in 0..window.len() {
                interior += 1;
                let (a, b) = (prod.row(i)[j], whole.row(i)[j]);
                prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()), "entry ({}, {}): {} vs {}", i, j, a, b);
            }
        }
        prop_assert!(interior > 0);
    }

    #[test]
    fn finite_section_inequality(seed in any::<u64>(), n in 8usize..=96) {
        let g = Arc::new(OrderedGroup::integers());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_symbol(&mut rng, &g, 5, -4, 2);
        let psi = analytic_symbol(&mut rng, &g, 3, 3);
        let kpsi = k.mul(&psi).unwrap();
        let t = truncation_matrix(&kpsi, &Window::omega(&g, n).unwrap()).unwrap().matrix;
        let lhs = Matrix::identity(n).sub(&t).spectral_norm();
        let (_, hi) = kpsi.scale(C::new(-1.0, 0.0)).sub_scalar(C::new(-1.0, 0.0)).certified_sup_norm(default_grid_step());
        prop_assert!(lhs <= hi * (1.0 + 1e-12), "{} > {}", lhs, hi);
    }

    #[test]
    fn singular_values_match_nalgebra(seed in any::<u64>(), rows in 1usize..=24, cols in 1usize..=24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<C> = (0..rows * cols).map(|_| rand_c(&mut rng)).collect();
        let ours = Matrix::from_fn(rows, cols, |i, j| data[i * cols + j]);
        let reference = DMatrix::from_fn(rows, cols, |i, j| data[i * cols + j]);
        let mut theirs: Vec<f64> = reference.singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        let mut mine = ours.singular_values();
        mine.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(mine.len(), theirs.len());
        let top = theirs[0];
        for (a, b) in mine.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-9 * top, "{:?} vs {:?}", mine, theirs);
        }
    }
}

#[test]
fn section_norms_are_nondecreasing_and_bounded() {
    let g = Arc::new(OrderedGroup::integers());
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let k = random_symbol(&mut rng, &g, 5, -3, 3);
        let norms = wh_core::wiener_hopf::operator_norm_lower_omega(&k, &[4, 8, 16, 32, 64]).unwrap();
        let (_, hi) = k.certified_sup_norm(default_grid_step());
        assert!(norms.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12)), "{norms:?}");
        assert!(norms.iter().all(|&n| n <= hi), "{norms:?} vs {hi}");
    }
}
