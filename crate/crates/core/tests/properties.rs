use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use proptest::prelude::*;

use renyi_core::linalg::{apply_local_unitary, partial_trace, pure_trace_distance, trace_power};
use renyi_core::measures::{reduced_spectrum, renyi_entropy, renyi_of_spectrum, residual_report};
use renyi_core::{Alpha, DensityMatrix, PairingLayout, PureState, SubsystemMask};

fn state(n_qubits: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec(-1.0f64..1.0, 2 << n_qubits)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| PureState::normalized(v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()).unwrap())
}

/// Any element of U(2) from a global phase and three Euler angles.
fn unitary() -> impl Strategy<Value = Matrix2<Complex64>> {
    let angle = -std::f64::consts::PI..std::f64::consts::PI;
    (angle.clone(), angle.clone(), angle.clone(), angle).prop_map(|(phase, theta, a, b)| {
        let g = Complex64::from_polar(1.0, phase);
        let (c, s) = (theta.cos(), theta.sin());
        Matrix2::new(
            g * Complex64::from_polar(c, a),
            g * Complex64::from_polar(s, b),
            -g * Complex64::from_polar(s, -b),
            g * Complex64::from_polar(c, -a),
        )
    })
}

fn alpha() -> impl Strategy<Value = Alpha> {
    prop_oneof![Just(1.0), 1.0f64..4.0].prop_map(|a| Alpha::new(a).unwrap())
}

/// `G G† / tr(G G†)` for a random complex `dim × dim` matrix `G`.
fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let g = DMatrix::from_iterator(dim, dim, v.chunks(2).map(|p| Complex64::new(p[0], p[1])));
            let m = &g * g.adjoint();
            let tr = m.trace().re;
            DensityMatrix::new(m / Complex64::new(tr, 0.0)).unwrap()
        })
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn fields(r: &renyi_core::ResidualReport) -> [f64; 7] {
    [
        r.e_bipartite,
        r.e_a1b1,
        r.e_a2b2,
        r.e_a1b2,
        r.e_a2b1,
        r.ss_residual,
        r.monogamy_residual,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn residuals_invariant_under_local_unitaries(
        psi in state(4),
        us in prop::collection::vec(unitary(), 4),
        alpha in alpha(),
    ) {
        let layout = PairingLayout::canonical();
        let before = residual_report(&psi, &layout, alpha).unwrap();
        let mut moved = psi;
        for (q, u) in us.iter().enumerate() {
            moved = apply_local_unitary(&moved, q, u).unwrap();
        }
        let after = residual_report(&moved, &layout, alpha).unwrap();
        for (x, y) in fields(&before).iter().zip(fields(&after)) {
            prop_assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn exchange_symmetry(psi in state(4), alpha in alpha()) {
        let layout = PairingLayout::canonical();
        let a = residual_report(&psi, &layout, alpha).unwrap();
        let b = residual_report(&psi, &layout.swapped(), alpha).unwrap();
        prop_assert!((a.ss_residual - b.ss_residual).abs() < 1e-12);
        prop_assert!((a.monogamy_residual - b.monogamy_residual).abs() < 1e-12);
    }

    #[test]
    fn monogamy_residual_never_exceeds_superadditivity(psi in state(4), alpha in alpha()) {
        let r = residual_report(&psi, &PairingLayout::canonical(), alpha).unwrap();
        prop_assert!(r.monogamy_residual <= r.ss_residual + 1e-12);
        let cross = r.e_a1b2 + r.e_a2b1;
        prop_assert!((r.ss_residual - r.monogamy_residual - cross).abs() < 1e-12);
    }

    #[test]
    fn both_sides_of_a_cut_share_the_spectrum(
        (n, psi) in (2usize..=6).prop_flat_map(|n| (Just(n), state(n))),
        bits in any::<u8>(),
        alpha in alpha(),
    ) {
        let side: Vec<usize> = (0..n).filter(|q| bits >> q & 1 == 1).collect();
        prop_assume!(!side.is_empty() && side.len() < n);
        let mask = SubsystemMask::new(side).unwrap();
        let other = SubsystemMask::new(mask.complement(n)).unwrap();
        let (a, b) = (reduced_spectrum(&psi, &mask).unwrap(), reduced_spectrum(&psi, &other).unwrap());
        prop_assert!((renyi_of_spectrum(&a, alpha) - renyi_of_spectrum(&b, alpha)).abs() < 1e-9);
    }

    #[test]
    fn unit_trace(rho in density(4)) {
        prop_assert!((trace_power(&rho, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_triangle(a in state(3), b in state(3), c in state(3)) {
        let d = |x: &PureState, y: &PureState| pure_trace_distance(x, y).unwrap();
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() < 1e-12);
    }

    #[test]
    fn local_unitary_commutes_with_partial_trace(psi in state(4), u in unitary(), q in 0usize..4) {
        let moved = apply_local_unitary(&psi, q, &u).unwrap();
        let keep = SubsystemMask::from_unsorted(vec![q, (q + 1) % 4]).unwrap();
        let traced_out = SubsystemMask::new((0..4).filter(|&k| k != q).collect()).unwrap();

        // acting on a discarded qubit leaves the reduction alone
        let before = partial_trace(&psi, &traced_out).unwrap();
        let after = partial_trace(&moved, &traced_out).unwrap();
        prop_assert!(max_abs(&(after.entries() - before.entries())) < 1e-12);

        // acting on a kept qubit conjugates the reduction by U at that position
        let pos = keep.qubits().iter().position(|&k| k == q).unwrap();
        let op = if pos == 0 { u.kronecker(&Matrix2::identity()) } else { Matrix2::identity().kronecker(&u) };
        let op = DMatrix::from_iterator(4, 4, op.iter().copied());
        let rho = partial_trace(&psi, &keep).unwrap();
        let expected = &op * rho.entries() * op.adjoint();
        prop_assert!(max_abs(&(partial_trace(&moved, &keep).unwrap().entries() - expected)) < 1e-12);
    }

    #[test]
    fn renyi_entropy_non_increasing_in_alpha(rho in density(4)) {
        let values: Vec<f64> = [1.0, 1.5, 2.0, 3.0, 10.0]
            .iter()
            .map(|&a| renyi_entropy(&rho, Alpha::new(a).unwrap()).unwrap())
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "{values:?}");
        }
    }
}
