use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::{q, QMatrix, Rational};
use crate::signs::parity_sign;

fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| q(rng.gen_range(-2..=2))).collect()
}

fn random_cochain(rng: &mut ChaCha8Rng, dim: usize, level: usize) -> HochCochain {
    HochCochain::new(dim, level, random_vec(rng, dim.pow(level as u32 + 1))).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> QMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..d).map(|_| random_vec(rng, d)).collect();
        let m = QMatrix::from_rows(&rows);
        if m.rank() == d {
            return m;
        }
    }
}

/// Upper triangular 2x2 matrices, basis E00, E01, E11.
fn upper_triangular() -> Algebra {
    let d = 3;
    let mut mult = vec![q(0); 27];
    let mut set = |i: usize, j: usize, k: usize| mult[(i * d + j) * d + k] = q(1);
    set(0, 0, 0);
    set(0, 1, 1);
    set(1, 2, 1);
    set(2, 2, 2);
    Algebra::new(3, mult, vec![q(1), q(0), q(1)], None).unwrap()
}

fn three_dim_algebras(rng: &mut ChaCha8Rng) -> Vec<Algebra> {
    let base = [Algebra::truncated_polynomial(3), Algebra::cyclic_group(3), upper_triangular()];
    base.iter().map(|a| a.change_basis(&random_invertible(rng, 3)).unwrap()).collect()
}

fn traced_dual_numbers() -> TracedAlgebra {
    TracedAlgebra::new(Algebra::dual_numbers(), vec![q(0), q(1)]).unwrap()
}

/// Unnormalized Hochschild cohomology assembled column by column from the pointwise
/// differential applied to basis cochains.
fn hh_oracle(alg: &Algebra, n_max: usize) -> Vec<usize> {
    let d = alg.dim();
    let b_matrix = |n: usize| {
        let cols: Vec<Vec<Rational>> = (0..d.pow(n as u32 + 1))
            .map(|i| {
                let mut v = vec![q(0); d.pow(n as u32 + 1)];
                v[i] = q(1);
                hochschild_differential(alg, &HochCochain::new(d, n, v).unwrap()).values().to_vec()
            })
            .collect();
        QMatrix::from_columns(d.pow(n as u32 + 2), &cols)
    };
    let ranks: Vec<usize> = (0..=n_max).map(|n| b_matrix(n).rank()).collect();
    (0..=n_max).map(|n| d.pow(n as u32 + 1) - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect()
}

#[test]
fn algebra_axioms_are_checked() {
    let bad_unit = Algebra::new(1, vec![q(1)], vec![q(2)], None);
    assert!(matches!(bad_unit, Err(crate::Error::Algebra(_))));
    let mut non_assoc = upper_triangular().structure_constants().to_vec();
    non_assoc[(1 * 3 + 2) * 3] = q(1);
    assert!(matches!(Algebra::new(3, non_assoc, vec![q(1), q(0), q(1)], None), Err(crate::Error::Algebra(_))));
    assert!(matches!(Algebra::new(2, vec![q(1); 7], vec![q(1), q(0)], None), Err(crate::Error::Dimension(_))));
}

#[test]
fn trace_must_be_cyclic() {
    let m2 = Algebra::matrix_algebra(2);
    assert!(TracedAlgebra::new(m2.clone(), vec![q(1), q(0), q(0), q(1)]).is_ok());
    assert!(TracedAlgebra::new(m2, vec![q(1), q(0), q(0), q(0)]).is_err());
}

#[test]
fn unit_first_moves_the_unit() {
    let (a, _) = upper_triangular().unit_first().unwrap();
    assert!(a.is_unit_first());
    assert_eq!(hochschild_cohomology(&a, 2).unwrap(), hochschild_cohomology(&upper_triangular(), 2).unwrap());
}

#[test]
fn hochschild_on_elements_is_a_commutator() {
    let alg = Algebra::matrix_algebra(2);
    let a = HochCochain::element(&[q(1), q(2), q(0), q(-1)]);
    let ba = hochschild_differential(&alg, &a);
    for i in 0..4 {
        let x = alg.basis_vector(i);
        let expected: Vec<Rational> =
            alg.mul(&x, a.values()).iter().zip(alg.mul(a.values(), &x)).map(|(l, r)| l - r).collect();
        assert_eq!(ba.on_basis(&[i]), expected.as_slice());
    }
}

#[test]
fn derivations_are_cocycles() {
    let alg = Algebra::dual_numbers();
    // x d/dx: 1 -> 0, x -> x
    let euler = HochCochain::new(2, 1, vec![q(0), q(0), q(0), q(1)]).unwrap();
    assert!(hochschild_differential(&alg, &euler).is_zero());
    // d/dx is not a derivation here: it would send x^2 = 0 to 2x.
    let ddx = HochCochain::new(2, 1, vec![q(0), q(0), q(1), q(0)]).unwrap();
    assert_eq!(hochschild_differential(&alg, &ddx).on_basis(&[1, 1]), &[q(0), q(2)]);
}

#[test]
fn b_squares_to_zero_on_random_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for alg in three_dim_algebras(&mut rng) {
        for n in 0..3 {
            let f = random_cochain(&mut rng, 3, n);
            let bbf = hochschild_differential(&alg, &hochschild_differential(&alg, &f));
            assert!(bbf.is_zero());
        }
        let m0 = hochschild_matrix(&alg, 0, false).unwrap();
        let m1 = hochschild_matrix(&alg, 1, false).unwrap();
        assert!(m1.mul(&m0).unwrap().is_zero());
    }
}

#[test]
fn matrix_agrees_with_pointwise_differential() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alg = upper_triangular();
    for n in 0..3 {
        let f = random_cochain(&mut rng, 3, n);
        let via_matrix = hochschild_matrix(&alg, n, false).unwrap().mul_vec(f.values()).unwrap();
        assert_eq!(via_matrix, hochschild_differential(&alg, &f).values());
    }
}

#[test]
fn b_is_the_bracket_with_the_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for alg in three_dim_algebras(&mut rng) {
        let m = HochCochain::multiplication(&alg);
        for p in 0..3 {
            let f = random_cochain(&mut rng, 3, p);
            let bracket = m.gerstenhaber_bracket(&f).scale(&q(parity_sign(p as i64 - 1)));
            assert_eq!(hochschild_differential(&alg, &f), bracket);
        }
    }
}

#[test]
fn brace_with_product() {
    let alg = upper_triangular();
    let m = HochCochain::multiplication(&alg);
    assert!(m.brace(std::slice::from_ref(&m)).is_zero());
    assert!(m.gerstenhaber_bracket(&m).is_zero());
    let a = [q(2), q(-1), q(3)];
    let ma = m.brace(&[HochCochain::element(&a)]);
    for i in 0..3 {
        let x = alg.basis_vector(i);
        let expected: Vec<Rational> = alg.mul(&a, &x).iter().zip(alg.mul(&x, &a)).map(|(l, r)| l - r).collect();
        assert_eq!(ma.on_basis(&[i]), expected.as_slice());
    }
}

#[test]
fn pre_lie_and_brace_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let (pf, pg, ph) = (rng.gen_range(1..=3), rng.gen_range(0..=2), rng.gen_range(0..=2));
        // g{h} with two constants would land below level zero
        if pf + pg + ph < 2 || pg + ph == 0 {
            continue;
        }
        let f = random_cochain(&mut rng, 2, pf);
        let g = random_cochain(&mut rng, 2, pg);
        let h = random_cochain(&mut rng, 2, ph);
        let lhs = f.brace(std::slice::from_ref(&g)).brace(std::slice::from_ref(&h));
        let ghs = g.brace(std::slice::from_ref(&h));
        let swap = q(parity_sign((pg as i64 - 1) * (ph as i64 - 1)));
        let rhs = f
            .brace(std::slice::from_ref(&ghs))
            .add(&f.brace(&[g.clone(), h.clone()]))
            .add(&f.brace(&[h.clone(), g.clone()]).scale(&swap));
        assert_eq!(lhs, rhs, "levels {pf} {pg} {ph}");
        // associator symmetry in g, h
        let assoc_gh = lhs.sub(&f.brace(std::slice::from_ref(&ghs)));
        let hgs = h.brace(std::slice::from_ref(&g));
        let assoc_hg = f.brace(std::slice::from_ref(&h)).brace(std::slice::from_ref(&g)).sub(&f.brace(&[hgs]));
        assert_eq!(assoc_gh, assoc_hg.scale(&swap));
    }
}

#[test]
fn gerstenhaber_antisymmetry_and_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let (pf, pg, ph) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
        // brackets landing below level zero are not represented
        if pf + pg + ph < 2 || pf + pg == 0 || pg + ph == 0 || pf + ph == 0 {
            continue;
        }
        let f = random_cochain(&mut rng, 2, pf);
        let g = random_cochain(&mut rng, 2, pg);
        let h = random_cochain(&mut rng, 2, ph);
        let (df, dg) = (pf as i64 - 1, pg as i64 - 1);
        let fg = f.gerstenhaber_bracket(&g);
        let gf = g.gerstenhaber_bracket(&f);
        assert_eq!(fg, gf.scale(&q(-parity_sign(df * dg))));
        let lhs = f.gerstenhaber_bracket(&g.gerstenhaber_bracket(&h));
        let rhs = fg
            .gerstenhaber_bracket(&h)
            .add(&g.gerstenhaber_bracket(&f.gerstenhaber_bracket(&h)).scale(&q(parity_sign(df * dg))));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn cup_is_compatible_with_b() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let alg = upper_triangular();
    for _ in 0..10 {
        let (p, r) = (rng.gen_range(0..=2), rng.gen_range(0..=1));
        let f = random_cochain(&mut rng, 3, p);
        let g = random_cochain(&mut rng, 3, r);
        let lhs = hochschild_differential(&alg, &f.cup(&g, &alg));
        let rhs = hochschild_differential(&alg, &f)
            .cup(&g, &alg)
            .add(&f.cup(&hochschild_differential(&alg, &g), &alg).scale(&q(parity_sign(p as i64))));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn hochschild_cohomology_golden_values() {
    assert_eq!(hochschild_cohomology(&Algebra::ground_field(), 4).unwrap(), vec![1, 0, 0, 0, 0]);
    let dual = Algebra::dual_numbers();
    assert_eq!(hh_oracle(&dual, 4), vec![2, 1, 1, 1, 1]);
    assert_eq!(hochschild_cohomology(&dual, 4).unwrap(), vec![2, 1, 1, 1, 1]);
    let m2 = Algebra::matrix_algebra(2);
    assert_eq!(hh_oracle(&m2, 2), vec![1, 0, 0]);
    assert_eq!(hochschild_cohomology(&m2, 2).unwrap(), vec![1, 0, 0]);
}

#[test]
fn hochschild_complex_matches_dimensions() {
    let c = hochschild_complex(&Algebra::dual_numbers(), 4, true).unwrap();
    assert_eq!((0..4).map(|n| c.homology_dim(n)).collect::<Vec<_>>(), vec![2, 1, 1, 1]);
}

#[test]
fn cohomology_is_basis_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let dual = Algebra::truncated_polynomial(3);
    let expected_hh = hochschild_cohomology(&dual, 3).unwrap();
    let expected_hc = cyclic_cohomology(&dual, 3).unwrap();
    for _ in 0..3 {
        let twisted = dual.change_basis(&random_invertible(&mut rng, 3)).unwrap();
        assert_eq!(hochschild_cohomology(&twisted, 3).unwrap(), expected_hh);
        assert_eq!(cyclic_cohomology(&twisted, 3).unwrap(), expected_hc);
    }
}

#[test]
fn map_i_examples_and_chain_property() {
    let tr = traced_dual_numbers();
    let alg = &tr.algebra;
    let id = HochCochain::identity(2);
    let i_id = map_i(&id, &tr);
    for a0 in 0..2 {
        for a1 in 0..2 {
            assert_eq!(*i_id.on_basis(&[a0, a1]), tr.tr(alg.mul_basis(a0, a1)));
        }
    }
    assert!(map_i(&HochCochain::multiplication(alg), &tr).is_cyclic());
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for n in 0..4 {
        let f = random_cochain(&mut rng, 2, n);
        let lhs = cyclic_differential(alg, &map_i(&f, &tr));
        let rhs = map_i(&hochschild_differential(alg, &f), &tr);
        assert_eq!(lhs, rhs, "level {n}");
    }
}

#[test]
fn cyclic_differential_matches_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let alg = upper_triangular();
    let module = CocyclicModule::of_algebra(&alg, 3).unwrap();
    for n in 0..3 {
        let phi = CyclicCochain::new(3, n, random_vec(&mut rng, 3usize.pow(n as u32 + 1))).unwrap();
        let direct = CyclicCochain::from_fn(3, n + 1, |a| {
            let mut acc = Rational::zero();
            for i in 0..=n {
                for (m, c) in alg.mul_basis(a[i], a[i + 1]).iter().enumerate() {
                    let mut args: Vec<usize> = a[..i].to_vec();
                    args.push(m);
                    args.extend_from_slice(&a[i + 2..]);
                    acc += q(parity_sign(i as i64)) * c * phi.on_basis(&args);
                }
            }
            for (m, c) in alg.mul_basis(a[n + 1], a[0]).iter().enumerate() {
                let mut args = vec![m];
                args.extend_from_slice(&a[1..=n]);
                acc += q(parity_sign(n as i64 + 1)) * c * phi.on_basis(&args);
            }
            acc
        });
        assert_eq!(cyclic_differential(&alg, &phi), direct);
        assert_eq!(module.b(n).mul_vec(phi.values()).unwrap(), direct.values());
        assert_eq!(module.lambda(n).mul_vec(phi.values()).unwrap(), phi.lambda().values());
    }
}

#[test]
fn trace_is_killed_by_b() {
    let tr = traced_dual_numbers();
    assert!(cyclic_differential(&tr.algebra, &CyclicCochain::trace(&tr)).is_zero());
}

fn check_connes_identities(module: &CocyclicModule) {
    let top = module.top();
    for n in 0..=top {
        let l = module.lambda(n);
        let mut p = QMatrix::identity(module.dim(n));
        for _ in 0..=n {
            p = l.mul(&p).unwrap();
        }
        assert_eq!(p, QMatrix::identity(module.dim(n)), "λ order at {n}");
    }
    for n in 0..top.saturating_sub(1) {
        assert!(module.b(n + 1).mul(&module.b(n)).unwrap().is_zero(), "b² at {n}");
        assert!(module.connes_b(n).mul(&module.connes_b(n + 1)).unwrap().is_zero(), "B² at {n}");
    }
    module.mixed().expect("bB + Bb = 0");
}

#[test]
fn connes_identities() {
    check_connes_identities(&CocyclicModule::of_algebra(&Algebra::ground_field(), 8).unwrap());
    check_connes_identities(&CocyclicModule::of_algebra(&Algebra::dual_numbers(), 5).unwrap());
    check_connes_identities(&CocyclicModule::of_algebra(&upper_triangular(), 3).unwrap());
    check_connes_identities(&CocyclicModule::of_algebra(&Algebra::matrix_algebra(2), 3).unwrap());
    check_connes_identities(&CocyclicModule::constant(6));
}

#[test]
fn connes_b_at_level_zero() {
    // B: C^1 -> C^0 is φ ↦ φ(1, a) - φ(a, 1) up to the level-zero norm, which is the identity.
    let module = CocyclicModule::of_algebra(&Algebra::dual_numbers(), 2).unwrap();
    assert_eq!(module.lambda(0), QMatrix::identity(2));
    assert_eq!(module.norm(0), QMatrix::identity(2));
    let phi: Vec<Rational> = vec![q(1), q(2), q(3), q(5)];
    let bphi = module.connes_b(0).mul_vec(&phi).unwrap();
    // φ(1, a) + φ(a, 1) for (1 - λ) with λ = -τ at level one
    assert_eq!(bphi, vec![q(2), q(2) + q(3)]);
}

/// Cyclic cohomology from the functional operators: λ-invariants and their images under b.
fn hc_oracle(alg: &Algebra, n_max: usize) -> Vec<usize> {
    let d = alg.dim();
    let invariants = |n: usize| -> Vec<CyclicCochain> {
        let mut sym = Vec::new();
        for i in 0..d.pow(n as u32 + 1) {
            let mut v = vec![q(0); d.pow(n as u32 + 1)];
            v[i] = q(1);
            sym.push(CyclicCochain::new(d, n, v).unwrap().norm().values().to_vec());
        }
        let m = QMatrix::from_columns(d.pow(n as u32 + 1), &sym);
        let rank = m.rank();
        // columns of N span the invariants in characteristic zero
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        for c in sym {
            let mut trial = basis.clone();
            trial.push(c.clone());
            if QMatrix::from_columns(d.pow(n as u32 + 1), &trial).rank() > basis.len() {
                basis.push(c);
            }
        }
        assert_eq!(basis.len(), rank);
        basis.into_iter().map(|v| CyclicCochain::new(d, n, v).unwrap()).collect()
    };
    let image_rank = |n: usize| {
        let inv = invariants(n);
        let cols: Vec<Vec<Rational>> = inv.iter().map(|phi| cyclic_differential(alg, phi).values().to_vec()).collect();
        if cols.is_empty() {
            0
        } else {
            QMatrix::from_columns(d.pow(n as u32 + 2), &cols).rank()
        }
    };
    (0..=n_max)
        .map(|n| invariants(n).len() - image_rank(n) - if n > 0 { image_rank(n - 1) } else { 0 })
        .collect()
}

#[test]
fn cyclic_cohomology_golden_values() {
    let k = Algebra::ground_field();
    assert_eq!(hc_oracle(&k, 4), vec![1, 0, 1, 0, 1]);
    assert_eq!(cyclic_cohomology(&k, 4).unwrap(), vec![1, 0, 1, 0, 1]);
    assert_eq!(cyclic_cohomology_mixed(&k, 4).unwrap(), vec![1, 0, 1, 0, 1]);
    let dual = Algebra::dual_numbers();
    let golden = vec![2, 0, 2, 0, 2];
    assert_eq!(hc_oracle(&dual, 4), golden);
    assert_eq!(cyclic_cohomology(&dual, 4).unwrap(), golden);
    assert_eq!(cyclic_cohomology_mixed(&dual, 4).unwrap(), golden);
}

#[test]
fn periodicity_on_the_ground_field() {
    let mixed = CocyclicModule::of_algebra(&Algebra::ground_field(), 8).unwrap().mixed().unwrap();
    for n in [0, 2, 4] {
        assert_eq!(mixed.periodicity_rank(n).unwrap(), 1);
    }
    for n in [1, 3] {
        assert_eq!(mixed.periodicity_rank(n).unwrap(), 0);
    }
    let loc = localize_c1(&mixed, 0..=7).unwrap();
    assert_eq!(loc.dims, [1, 0]);
    assert_eq!(loc.certificate, [0, 1]);
}

#[test]
fn localization_kills_nilpotent_periodicity() {
    let top = 8;
    let mut dims = vec![0; top + 1];
    dims[0] = 1;
    dims[1] = 1;
    let b: Vec<QMatrix> = (0..top).map(|n| QMatrix::zeros(dims[n + 1], dims[n])).collect();
    let mut big_b: Vec<QMatrix> = (0..top).map(|n| QMatrix::zeros(dims[n], dims[n + 1])).collect();
    big_b[0] = QMatrix::identity(1);
    let mixed = MixedComplex::new(dims, b, big_b).unwrap();
    assert_eq!(mixed.cohomology(5).unwrap(), vec![1, 0, 0, 0, 0, 0]);
    assert_eq!(mixed.periodicity_rank(0).unwrap(), 0);
    let loc = localize_c1(&mixed, 0..=7).unwrap();
    assert_eq!(loc.dims, [0, 0]);
    assert_eq!(loc.certificate, [2, 1]);
}

#[test]
fn localization_of_empty_module() {
    let mixed = MixedComplex::new(vec![0; 7], vec![QMatrix::zeros(0, 0); 6], vec![QMatrix::zeros(0, 0); 6]).unwrap();
    let loc = localize_c1(&mixed, 0..=5).unwrap();
    assert_eq!(loc.dims, [0, 0]);
}

#[test]
fn localization_reports_growth() {
    let top = 8;
    let dims = vec![1; top + 1];
    let mixed = MixedComplex::new(dims, vec![QMatrix::zeros(1, 1); top], vec![QMatrix::zeros(1, 1); top]).unwrap();
    match localize_c1(&mixed, 0..=7) {
        Err(crate::Error::NotStabilized { trace }) => assert_eq!(trace[0], vec![1, 1, 2, 2, 3, 3, 4, 4]),
        other => panic!("expected a stabilization failure, got {other:?}"),
    }
    assert!(matches!(localize_c1(&mixed, 0..=8), Err(crate::Error::Dimension(_))));
}

#[test]
fn omega_examples() {
    let k = TracedAlgebra::new(Algebra::ground_field(), vec![q(1)]).unwrap();
    for n in 1..6 {
        let expected = if n % 2 == 1 { q(n as i64) } else { q(0) };
        assert_eq!(omega_matrix(&k, n).get(0, 0), expected);
    }
    let tr = traced_dual_numbers();
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for n in 1..4 {
        let f = random_cochain(&mut rng, 2, n);
        let w = omega(&f, &tr);
        assert_eq!(omega_matrix(&tr, n).mul_vec(f.values()).unwrap(), w.values());
        assert!(w.is_cyclic());
        let lhs = omega(&hochschild_differential(&tr.algebra, &f), &tr);
        let rhs = cyclic_differential(&tr.algebra, &w).scale(&q(-1));
        assert_eq!(lhs, rhs, "ω intertwines b with -b at level {n}");
    }
}

#[test]
fn deformation_complex_of_ground_field() {
    // Over Q every cochain space is one-dimensional: b = 1 on odd Hochschild levels, the
    // shifted cyclic differential is -1 out of even degrees >= 2, and ω_n = n on odd n.
    let top = 6i64;
    let hoch_b = |n: i64| q((n % 2 == 1) as i64);
    let cyc_d = |n: i64| q(-((n >= 2 && n % 2 == 0) as i64));
    let omega_n = |n: i64| q(if n % 2 == 1 { n } else { 0 });
    // Cone^n = X^{n+1} ⊕ Y^n with Y^n = 0 for n < 1.
    let cone_dim = |n: i64| (n >= -1) as usize + (n >= 1) as usize;
    let cone_rank = |n: i64| -> usize {
        if n < -1 {
            return 0;
        }
        let x_col = vec![-hoch_b(n + 1), omega_n(n + 1)];
        let mut cols = vec![x_col];
        if n >= 1 {
            cols.push(vec![q(0), cyc_d(n)]);
        }
        QMatrix::from_columns(2, &cols).rank()
    };
    let oracle: Vec<usize> = (-1..top - 1).map(|n| cone_dim(n) - cone_rank(n) - cone_rank(n - 1)).collect();
    assert_eq!(oracle, vec![1, 0, 1, 0, 0, 0]);
    let k = TracedAlgebra::new(Algebra::ground_field(), vec![q(1)]).unwrap();
    let d = deformation_complex(&k, top as usize).unwrap();
    let h: Vec<usize> = (-1..top - 1).map(|n| d.homology_dim(n)).collect();
    assert_eq!(h, oracle);
}

#[test]
fn deformation_complex_with_zero_trace() {
    // ω = 0, so the cone splits as Hoch[1] ⊕ (cyclic side).
    let zero = TracedAlgebra::new(Algebra::dual_numbers(), vec![q(0), q(0)]).unwrap();
    let top = 5;
    let d = deformation_complex(&zero, top).unwrap();
    let hoch = hochschild_complex(&zero.algebra, top, false).unwrap();
    let cyc = CocyclicModule::of_algebra(&zero.algebra, top - 1).unwrap();
    let dims: Vec<usize> = (1..=top).map(|n| 2usize.pow(n as u32)).collect();
    let diffs: Vec<QMatrix> = (1..top).map(|n| cyc.b(n - 1).neg()).collect();
    let y = crate::dg::DGModule::from_differentials(1, &dims, &diffs).unwrap();
    for n in 0..3i64 {
        assert_eq!(d.homology_dim(n), hoch.homology_dim(n + 1) + y.homology_dim(n), "degree {n}");
    }
    assert_eq!(d.homology_dim(0), 1);
    assert_eq!(d.homology_dim(1), 3);
}

#[test]
fn diamond_with_constant_is_identity() {
    let x = CocyclicModule::of_algebra(&Algebra::dual_numbers(), 3).unwrap();
    let y = x.diamond(&CocyclicModule::constant(3)).unwrap();
    assert_eq!(x, y);
    let z = x.diamond(&x).unwrap();
    assert_eq!(z.dims(), &[4, 16, 64, 256]);
    check_connes_identities(&z);
    let k = CocyclicModule::of_algebra(&Algebra::ground_field(), 8).unwrap();
    let kk = k.diamond(&CocyclicModule::constant(8)).unwrap();
    let (m1, m2) = (k.mixed().unwrap(), kk.mixed().unwrap());
    for n in 0..5 {
        assert_eq!(m1.periodicity(n), m2.periodicity(n));
        assert_eq!(m1.periodicity_rank(n).unwrap(), m2.periodicity_rank(n).unwrap());
    }
}

#[test]
fn curved_mc_checks() {
    let alg = upper_triangular();
    assert!(check_curved_mc(&CurvedMC::from_algebra(&alg), 5, 3).passed());

    // Q[x]/(x^2 - t): weight-one correction x·x = 1
    let dual = Algebra::dual_numbers();
    let m1 = HochCochain::from_fn(2, 2, |a| if a == [1, 1] { vec![q(1), q(0)] } else { vec![q(0), q(0)] });
    let family = CurvedMC::from_algebra(&dual).with_component(2, 1, m1.clone()).unwrap();
    assert!(check_curved_mc(&family, 5, 3).passed());

    // A weight-one term that is not a cocycle breaks the equation at (3, 1).
    let bad = HochCochain::from_fn(2, 2, |a| if a == [0, 1] { vec![q(1), q(0)] } else { vec![q(0), q(0)] });
    let broken = CurvedMC::from_algebra(&dual).with_component(2, 1, bad).unwrap();
    assert_eq!(check_curved_mc(&broken, 5, 3).first_failure(), Some((3, 1)));

    let mut mult = alg.structure_constants().to_vec();
    mult[(1 * 3 + 2) * 3] = q(1);
    let non_assoc = Algebra::new_unchecked(3, mult, vec![q(1), q(0), q(1)]);
    let report = check_curved_mc(&CurvedMC::from_algebra(&non_assoc), 5, 2);
    assert_eq!(report.first_failure(), Some((3, 0)));

    assert!(CurvedMC::from_algebra(&dual).with_component(3, 1, random_cochain(&mut ChaCha8Rng::seed_from_u64(1), 2, 3)).is_err());
    assert!(CurvedMC::from_algebra(&dual).with_component(4, 0, HochCochain::zero(2, 4)).is_err());
}

