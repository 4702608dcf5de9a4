//! Acceptance suite: one line per criterion, then a single assertion that
//! every criterion passed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use stabtherm::oracle::{dense_log_trace, ising_chain_closed};
use stabtherm::parallel::{benchmark_basis, span_histogram};
use stabtherm_core::duality::{
    bond_algebra_isomorphic, build_2dtc_bath_mapping, check_homology_identity, check_series_duality_4dtc,
    coefficient_bound_holds, compare_series, gsd, ising_low_t_coeffs, logical_operators_4dtc, logical_operators_haah,
    same_subspace, Bath,
};
use stabtherm_core::enumerate::{constraint_kernel, weight_enumerator_full, Side};
use stabtherm_core::models::{build_haah, build_ising, build_toric_2d, build_toric_4d};
use stabtherm_core::thermo::{linear_grid, log_partition, sweep, PartitionFunction, SweepOptions};
use stabtherm_core::{BitMatrix, CssModel, HypercubicComplex};

/// Relative agreement required between pipeline and dense oracle.
const ORACLE_TOL: f64 = 1e-9;
/// Relative agreement required between Haah's code and the chain form.
const CHAIN_TOL: f64 = 1e-12;
/// Largest allowed spread of per-site specific-heat peaks for L ≥ 5.
const PEAK_SPREAD: f64 = 0.01;
/// Relative agreement between stencil and closed-form specific heat.
const HEAT_TOL: f64 = 1e-5;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t <= limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn both_enumerators(m: &CssModel) -> (stabtherm_core::WeightEnumerator, stabtherm_core::WeightEnumerator) {
    (
        weight_enumerator_full(&constraint_kernel(m, Side::A)).unwrap(),
        weight_enumerator_full(&constraint_kernel(m, Side::B)).unwrap(),
    )
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let toys = vec![
        build_toric_2d(2).unwrap(),
        CssModel::new("x field", 1, BitMatrix::from_dense(&[&[1]]), BitMatrix::zeros(0, 1))
            .unwrap()
            .with_couplings(0.7, 1.0)
            .unwrap(),
        CssModel::new(
            "x1 z2",
            2,
            BitMatrix::from_dense(&[&[1, 0]]),
            BitMatrix::from_dense(&[&[0, 1]]),
        )
        .unwrap(),
        CssModel::new(
            "ring of four",
            4,
            BitMatrix::from_dense(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]),
            BitMatrix::from_dense(&[&[1, 1, 1, 1]]),
        )
        .unwrap()
        .with_couplings(1.0, 0.3)
        .unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for m in &toys {
        let (wa, wb) = both_enumerators(m);
        for beta in [0.25, 0.5, 1.0] {
            let err = rel(log_partition(m, &wa, &wb, beta).unwrap(), dense_log_trace(m, beta).unwrap());
            ensure(err <= ORACLE_TOL, || format!("{} at beta={beta}: rel err {err:e}", m.label()))?;
            worst = worst.max(err);
        }
    }
    within(Duration::from_secs(60), started, "oracle comparison")?;
    Ok(format!("4 models x 3 betas, max rel err {worst:.1e} <= {ORACLE_TOL:e}"))
}

fn haah_closed_form() -> Outcome {
    let started = Instant::now();
    let betas = linear_grid(0.05, 3.0, 50);
    let (a, b) = (1.0, 0.7);
    let mut worst: f64 = 0.0;
    for l in [3, 5, 7, 9] {
        let m = build_haah(l).unwrap().with_couplings(a, b).unwrap();
        let ka = constraint_kernel(&m, Side::A);
        let kb = constraint_kernel(&m, Side::B);
        ensure(ka.dim() == 1 && kb.dim() == 1, || {
            format!("L={l}: kernel dims ({}, {})", ka.dim(), kb.dim())
        })?;
        let (wa, wb) = both_enumerators(&m);
        let n = l * l * l;
        for &beta in &betas {
            let got = log_partition(&m, &wa, &wb, beta).unwrap();
            let want = ising_chain_closed(n, a, beta).unwrap() + ising_chain_closed(n, b, beta).unwrap();
            let err = rel(got, want);
            ensure(err <= CHAIN_TOL, || format!("L={l} beta={beta}: rel err {err:e}"))?;
            worst = worst.max(err);
        }
    }
    within(Duration::from_secs(60), started, "Haah closed form")?;
    Ok(format!("L in {{3,5,7,9}}, kernels (1,1), 50 betas, max rel err {worst:.1e} <= {CHAIN_TOL:e}"))
}

fn gsd_claims() -> Outcome {
    let four = BigUint::from(4u32);
    for l in 2..=4 {
        let g = gsd(&build_toric_2d(l).unwrap());
        ensure(g == four, || format!("2D toric code L={l}: GSD {g}"))?;
    }
    let g4 = gsd(&build_toric_4d(2).unwrap());
    ensure(g4 == BigUint::from(64u32), || format!("4D toric code L=2: GSD {g4}"))?;
    for l in [3, 5, 7, 9] {
        let g = gsd(&build_haah(l).unwrap());
        ensure(g == four, || format!("Haah L={l}: GSD {g}"))?;
    }
    let started = Instant::now();
    let g15 = gsd(&build_haah(15).unwrap());
    within(Duration::from_secs(300), started, "Haah L=15 ranks")?;
    ensure(g15 != four, || "Haah L=15: GSD is 4".into())?;
    Ok(format!("2DTC 4, 4DTC 64, Haah odd L 4, Haah L=15 GSD = {g15} in {:?}", started.elapsed()))
}

fn duality_coefficients() -> Outcome {
    let started = Instant::now();
    let m = build_toric_4d(2).unwrap();
    let wb = weight_enumerator_full(&constraint_kernel(&m, Side::B)).unwrap();
    let h = check_homology_identity(2).unwrap();
    let ising = build_ising(4, 2).unwrap();
    let classes = ising_low_t_coeffs(&ising, ising.bonds().len()).unwrap();

    // Independent count over all 2^16 configurations, each class seen twice.
    let n_bonds = ising.bonds().len();
    let mut all = vec![0u64; n_bonds + 1];
    for c in 0u64..(1 << ising.n_spins()) {
        let broken = ising.bonds().iter().filter(|&&(i, j)| ((c >> i) ^ (c >> j)) & 1 == 1).count();
        all[broken] += 1;
    }
    let halved: Vec<BigUint> = all.iter().map(|&c| BigUint::from(c / 2)).collect();
    ensure(halved == classes, || "class counts disagree with the full configuration sum".into())?;

    for (name, series) in [("cycle space", h.cycles.coeffs()), ("4D Ising", &classes[..])] {
        let c = compare_series(name, wb.coeffs(), series, 8);
        ensure(c.matched, || format!("B side vs {name}: first mismatch {:?}", c.first_mismatch))?;
    }
    ensure(h.comparison.matched, || format!("cycles vs boundaries: {:?}", h.comparison.first_mismatch))?;
    ensure(wb.total() == BigUint::from(1u64 << 19), || format!("sum b_n = {}", wb.total()))?;
    ensure(h.cycles.total() == BigUint::from(1u64 << 19), || format!("sum cycles = {}", h.cycles.total()))?;
    ensure(h.boundaries.total() == BigUint::from(1u64 << 15), || {
        format!("sum b*_n = {}", h.boundaries.total())
    })?;
    ensure(coefficient_bound_holds(&h), || "b_n >= b*_n fails for some n".into())?;
    let series = check_series_duality_4dtc(2).unwrap();
    ensure(series.matched && series.cutoff == 8, || "A-side series check failed".into())?;
    within(Duration::from_secs(120), started, "duality coefficients")?;
    Ok(format!(
        "n < 8 agree across B side, cycles, Ising; sums 2^19 / 2^15; at n = 8: B side {}, Ising {}",
        wb.coeff(8),
        classes[8]
    ))
}

fn ab_identity() -> Outcome {
    let m = build_toric_4d(2).unwrap();
    let (wa, wb) = both_enumerators(&m);
    ensure(wa == wb, || "A-side and B-side distributions differ".into())?;
    let cx = HypercubicComplex::new(4, 2).unwrap();
    let kb = constraint_kernel(&m, Side::B);
    ensure(same_subspace(kb.basis(), &cx.cycle_space(3).unwrap(), 64), || {
        "B-side kernel is not the 3-cycle space".into()
    })?;
    Ok(format!("identical distributions, {} nonzero weights", wa.nonzero().count()))
}

fn bond_algebras() -> Outcome {
    for l in [2, 3, 4] {
        for bath in [Bath::Vx, Bath::Vy] {
            let bm = build_2dtc_bath_mapping(l, bath).unwrap();
            ensure(bond_algebra_isomorphic(&bm.map), || {
                format!("L={l} {bath:?}: violation {:?}", bm.map.first_violation())
            })?;
            let mutated = bm.map.with_targets_swapped(bm.plaquettes().start, bm.fields().start);
            ensure(!bond_algebra_isomorphic(&mutated), || format!("L={l} {bath:?}: mutation undetected"))?;
        }
    }
    Ok("Vx and Vy at L in {2,3,4} isomorphic; swapped targets rejected".into())
}

fn logical_operators() -> Outcome {
    let r4 = logical_operators_4dtc(2).unwrap();
    ensure(r4.all_hold(), || format!("4DTC: {r4:?}"))?;
    ensure(r4.independent == [6, 6], || format!("4DTC independent {:?}", r4.independent))?;
    let rh = logical_operators_haah(3).unwrap();
    ensure(rh.all_hold(), || format!("Haah: {rh:?}"))?;
    Ok(format!(
        "4DTC L=2 {} operators, Haah L=3 {} operators; patterns hold, none are stabilizers",
        r4.logicals.len(),
        rh.logicals.len()
    ))
}

fn homology() -> Outcome {
    for d in 1..=4 {
        for l in 2..=3 {
            let cx = HypercubicComplex::new(d, l).unwrap();
            for k in 2..=d {
                let prod = cx.boundary_matrix(k - 1).unwrap().mul(&cx.boundary_matrix(k).unwrap()).unwrap();
                ensure(prod.is_zero(), || format!("D={d} L={l} k={k}: boundary of boundary nonzero"))?;
            }
        }
    }
    for l in [2, 3] {
        let h3 = HypercubicComplex::new(4, l).unwrap().homology_rank(3);
        ensure(h3 == 4, || format!("H3 of the 4-torus at L={l} has rank {h3}"))?;
    }
    Ok("boundary squares to zero for D <= 4, L <= 3; rank H3 = 4 at L in {2,3}".into())
}

fn analyticity_proxy() -> Outcome {
    let betas = linear_grid(0.2, 3.0, 141);
    let mut peaks = Vec::new();
    for l in [3, 5, 7] {
        let m = build_haah(l).unwrap();
        let (wa, wb) = both_enumerators(&m);
        let z = PartitionFunction::new(&m, &wa, &wb).unwrap();
        let sites = (l * l * l) as f64;
        let points = sweep(&z, &betas, &SweepOptions::per_volume(sites)).unwrap();
        for p in &points {
            // Closed form: c = β² ∂²_β ln Z_chain, twice, per site.
            let h = 1e-3 * p.beta;
            let f = |b: f64| 2.0 * ising_chain_closed(l * l * l, 1.0, b).unwrap();
            let d2 = (f(p.beta + h) - 2.0 * f(p.beta) + f(p.beta - h)) / (h * h);
            let closed = p.beta * p.beta * d2 / sites;
            let c = p.c_density.unwrap();
            ensure(rel(c, closed) <= HEAT_TOL, || format!("L={l} beta={}: c {c} vs {closed}", p.beta))?;
        }
        let peak = points.iter().map(|p| p.c_density.unwrap()).fold(f64::MIN, f64::max);
        peaks.push((l, peak));
    }
    let (p5, p7) = (peaks[1].1, peaks[2].1);
    let spread = (p5 - p7).abs() / p5;
    ensure(spread < PEAK_SPREAD, || format!("peaks {peaks:?} spread {spread:.3e}"))?;
    Ok(format!(
        "per-site c peaks L=3 {:.6}, L=5 {:.6}, L=7 {:.6}; L>=5 spread {spread:.1e} < {PEAK_SPREAD}",
        peaks[0].1, p5, p7
    ))
}

fn performance() -> Outcome {
    let basis = benchmark_basis(24, 96, 2024);
    let mut hists = Vec::new();
    let mut times = Vec::new();
    for threads in [1, 2, 4] {
        let started = Instant::now();
        hists.push(span_histogram(&basis, 96, threads));
        times.push(started.elapsed());
    }
    ensure(hists[0] == hists[1] && hists[0] == hists[2], || "histograms differ across thread counts".into())?;
    ensure(hists[0].iter().sum::<u64>() == 1 << 24, || "histogram does not count 2^24 elements".into())?;
    ensure(times[2] <= Duration::from_secs(10), || format!("4-thread walk took {:?}", times[2]))?;
    Ok(format!(
        "2^24 walk: 1 thread {:?}, 2 threads {:?}, 4 threads {:?}; identical histograms",
        times[0], times[1], times[2]
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("Haah closed form", haah_closed_form),
        ("ground-state degeneracy", gsd_claims),
        ("duality coefficient match", duality_coefficients),
        ("A/B algebra identity", ab_identity),
        ("bond-algebra isomorphisms", bond_algebras),
        ("logical operators", logical_operators),
        ("homology infrastructure", homology),
        ("analyticity proxy", analyticity_proxy),
        ("performance", performance),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL [{}] {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
