//! Fast invariant checks behind `wh selftest`.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wh_core::classifier::{hull_and_inclusion_report, is_fredholm, spectrum_grid, CellLabel, GridOptions, SpectrumBox};
use wh_core::oracle::{blaschke, kernel_cokernel, nehari_distance, ZWinding};
use wh_core::wiener_hopf::operator_norm_lower_omega;
use wh_core::{GroupElement, Laurent, OrderedGroup, TrigPoly};

type Outcome = Result<(), String>;
type Suite = (&'static str, fn() -> Outcome);

const SEED: u64 = 20_240_601;

pub fn run_all() -> Vec<(&'static str, Outcome)> {
    let suites: [Suite; 6] = [
        ("canonical verdicts", canonical_verdicts),
        ("index equals minus winding on Z", index_vs_winding),
        ("kernel vectors", kernel_vectors),
        ("nehari distances", nehari),
        ("shift spectrum", shift_spectrum),
        ("norm identity", norm_identity),
    ];
    suites.iter().map(|(name, f)| (*name, f())).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(g: &Arc<OrderedGroup>, terms: &[(&[i64], f64)]) -> Result<TrigPoly, String> {
    TrigPoly::from_terms(g.clone(), terms.iter().map(|(e, v)| (GroupElement::new(e.to_vec()), Complex64::new(*v, 0.0))))
        .map_err(|e| e.to_string())
}

fn canonical_verdicts() -> Outcome {
    let z = Arc::new(OrderedGroup::integers());
    let v = is_fredholm(&poly(&z, &[(&[1], 1.0)])?, &z).map_err(|e| e.to_string())?;
    check(v.index() == Some(-1), || format!("shift: {v:?}"))?;
    let lex = Arc::new(OrderedGroup::lex(2).map_err(|e| e.to_string())?);
    let v = is_fredholm(&poly(&lex, &[(&[1, 0], 1.0)])?, &lex).map_err(|e| e.to_string())?;
    check(!v.is_fredholm(), || format!("lex character: {v:?}"))?;
    let emb = Arc::new(OrderedGroup::sqrt2_plane());
    let v = is_fredholm(&poly(&emb, &[(&[0, 0], 2.0), (&[0, 1], 1.0)])?, &emb).map_err(|e| e.to_string())?;
    check(v.index() == Some(0), || format!("embedding: {v:?}"))
}

fn random_laurent(rng: &mut ChaCha8Rng) -> Laurent {
    let n_min = rng.gen_range(-4..=0);
    let len = rng.gen_range(1..=7);
    let coeffs = (0..len).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
    Laurent::new(n_min, coeffs)
}

fn index_vs_winding() -> Outcome {
    let z = Arc::new(OrderedGroup::integers());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    while checked < 40 {
        let p = random_laurent(&mut rng);
        let k = p.to_trig(z.clone()).map_err(|e| e.to_string())?;
        if k.certified_min_modulus(wh_core::symbol::default_grid_step()).0 <= 0.1 {
            continue;
        }
        let ZWinding::Winding(w) = p.exact_winding().map_err(|e| e.to_string())? else {
            return Err(format!("{p:?}: root on the circle despite a certified gap"));
        };
        let v = is_fredholm(&k, &z).map_err(|e| e.to_string())?;
        check(v.index() == Some(-w), || format!("{p:?}: verdict {v:?}, winding {w}"))?;
        checked += 1;
    }
    Ok(())
}

fn kernel_vectors() -> Outcome {
    // z^{-2}(z − 0.3)(z − 3)
    let p = Laurent::from_roots(Complex64::new(1.0, 0.0), &[Complex64::new(0.3, 0.0), Complex64::new(3.0, 0.0)])
        .mul(&Laurent::monomial(-3, Complex64::new(1.0, 0.0)));
    let k = kernel_cokernel(&p).map_err(|e| e.to_string())?;
    check(k.dim_ker == 2 && k.residuals.iter().all(|&r| r <= 1e-8), || format!("{k:?}"))
}

fn nehari() -> Outcome {
    let b = blaschke(&[Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.3)]).map_err(|e| e.to_string())?;
    let d = nehari_distance(&b).map_err(|e| e.to_string())?;
    let dc = nehari_distance(&b.conjugate().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    check(d <= 1e-9 && (dc - 1.0).abs() <= 1e-6, || format!("distances {d}, {dc}"))
}

fn shift_spectrum() -> Outcome {
    let z = Arc::new(OrderedGroup::integers());
    let k = poly(&z, &[(&[1], 1.0)])?;
    let bbox = SpectrumBox::new(-1.5, 1.5, -1.5, 1.5).map_err(|e| e.to_string())?;
    let grid = spectrum_grid(&k, &z, &GridOptions::new(64, 64).with_box(bbox)).map_err(|e| e.to_string())?;
    let holes: Vec<_> = grid.holes.iter().map(|h| (h.label, h.index)).collect();
    check(holes == [(CellLabel::FredholmHole, Some(-1))], || format!("holes {holes:?}"))?;
    let report = hull_and_inclusion_report(&k, &z, &grid).map_err(|e| e.to_string())?;
    check(report.passes(), || format!("{report:?}"))
}

fn norm_identity() -> Outcome {
    let z = Arc::new(OrderedGroup::integers());
    let k = poly(&z, &[(&[0], 1.0), (&[1], 0.5)])?;
    let norms = operator_norm_lower_omega(&k, &[16, 64, 128]).map_err(|e| e.to_string())?;
    check(norms.windows(2).all(|w| w[0] <= w[1] + 1e-12) && (norms[2] - 1.5).abs() < 1e-2, || format!("{norms:?}"))
}
