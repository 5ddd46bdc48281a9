//! Cross-route checks: every family's closed form for the dual polynomials
//! q_n^i must equal the generic convolution over the moment table, and the
//! inverse sequences of the lowered family bases must match their closed
//! forms.

use opdet_core::arith::{q, qi, qu};
use opdet_core::detcore::{master_context, OpKind};
use opdet_core::families::{
    chebyshev_t, chebyshev_u, laguerre_standard, meixner_gf, ultraspherical, FamilySpec,
};
use opdet_core::operators::{
    build_adapted_basis, build_inverse_sequence, inverse_sequence_from_rs, LoweringOperator,
};
use opdet_core::poly::Poly;

#[test]
fn closed_form_q_equals_definition_everywhere() {
    let combos = [
        ("charlier:a=2", OpKind::Delta),
        ("charlier:a=-1/3", OpKind::Delta),
        ("meixner:a=1/3,c=2", OpKind::Delta),
        ("krawtchouk:a=3/4,N=17/2", OpKind::Delta),
        ("hahn:alpha=9/2,c=5/3,N=13/7", OpKind::Delta),
        ("jacobi:alpha=1/2,beta=-1/3", OpKind::Ddx),
        ("laguerre:alpha=7/5", OpKind::Ddx),
        ("ultraspherical:lambda=3/2", OpKind::Tmu),
        ("meixner:a=1/2,c=1", OpKind::Tmu),
        ("laguerre:alpha=2/3", OpKind::Tmu),
    ];
    for (fam, op) in combos {
        let spec = FamilySpec::parse(fam).unwrap();
        let ctx = master_context(&spec, op, 10).unwrap();
        for n in 0..=5usize {
            for i in 0..=5usize {
                let closed = spec.q_closed_form(op, n, i).unwrap();
                assert_eq!(
                    ctx.q_poly(n, i),
                    closed,
                    "q closed form differs from definition for {fam} under {op:?} at n={n}, i={i}"
                );
            }
        }
    }
}

#[test]
fn charlier_q_example() {
    // q_1^0 = s_1 + mu_1^0 = -x + 1 at a = 1, both routes
    let spec = FamilySpec::parse("charlier:a=1").unwrap();
    let ctx = master_context(&spec, OpKind::Delta, 3).unwrap();
    let expect = Poly::from_coeffs(vec![qi(1), qi(-1)]);
    assert_eq!(ctx.q_poly(1, 0), expect);
    assert_eq!(spec.q_closed_form(OpKind::Delta, 1, 0).unwrap(), expect);
    // q_0^0 = mu_0^0
    assert_eq!(ctx.q_poly(0, 0), Poly::one());
}

#[test]
fn tmu_q_is_norm_times_inverse() {
    // ultraspherical lambda = 1: q_3^1 = ||C_1||^2 C_2^{-1}
    let spec = FamilySpec::parse("ultraspherical:lambda=1").unwrap();
    let norm = spec.natural_norm_squared(1).unwrap();
    let expect = ultraspherical(&qi(-1), 2).scale(&norm);
    assert_eq!(spec.q_closed_form(OpKind::Tmu, 3, 1).unwrap(), expect);
    let ctx = master_context(&spec, OpKind::Tmu, 5).unwrap();
    assert_eq!(ctx.q_poly(3, 1), expect);
}

#[test]
fn inverse_sequences_of_lowered_families() {
    // ultraspherical: s_n = C_n^{-lambda}
    for lam in [q(3, 2), q(5, 3), qi(2)] {
        let rs: Vec<Poly> = (0..=8).map(|n| ultraspherical(&lam, n)).collect();
        let ss = inverse_sequence_from_rs(&rs);
        for (n, s) in ss.iter().enumerate() {
            assert_eq!(s, &ultraspherical(&-lam.clone(), n), "lambda={lam}, n={n}");
        }
    }
    // integer lambda = k: s_n = 0 for n >= 2k+1
    for k in 1..=3usize {
        let lam = qu(k);
        let rs: Vec<Poly> = (0..=(2 * k + 4)).map(|n| ultraspherical(&lam, n)).collect();
        let ss = inverse_sequence_from_rs(&rs);
        for (n, s) in ss.iter().enumerate() {
            if n >= 2 * k + 1 {
                assert!(s.is_zero(), "s_{n} must vanish for lambda = {k}");
            }
        }
    }
    // Meixner generating-function family: s_n(x) = m_n^{a,-c}(-x)
    let (a, c) = (q(1, 3), q(7, 5));
    let rs: Vec<Poly> = (0..=6).map(|n| meixner_gf(&a, &c, n).unwrap()).collect();
    let ss = inverse_sequence_from_rs(&rs);
    for (n, s) in ss.iter().enumerate() {
        let expect = meixner_gf(&a, &-c.clone(), n).unwrap().compose(&-&Poly::var());
        assert_eq!(s, &expect, "Meixner inverse fails at n={n}");
    }
    // Laguerre: s_n(x) = L_n^{-alpha-2}(-x)
    let alpha = q(7, 5);
    let rs: Vec<Poly> = (0..=6).map(|n| laguerre_standard(&alpha, n)).collect();
    let ss = inverse_sequence_from_rs(&rs);
    for (n, s) in ss.iter().enumerate() {
        let expect =
            laguerre_standard(&(-alpha.clone() - qi(2)), n).compose(&-&Poly::var());
        assert_eq!(s, &expect, "Laguerre inverse fails at n={n}");
    }
    // Chebyshev first kind: s_0 = 1, s_1 = -x, s_n = x^{n-2}(1 - x^2)
    let rs: Vec<Poly> = (0..=6).map(chebyshev_t).collect();
    let ss = inverse_sequence_from_rs(&rs);
    assert_eq!(ss[0], Poly::one());
    assert_eq!(ss[1], Poly::from_coeffs(vec![qi(0), qi(-1)]));
    for (n, s) in ss.iter().enumerate().skip(2) {
        let expect = &Poly::monomial(qi(1), n - 2) - &Poly::monomial(qi(1), n);
        assert_eq!(s, &expect, "Chebyshev T inverse fails at n={n}");
    }
    // second kind: 1, -2x, 1, then zero
    let rs: Vec<Poly> = (0..=6).map(chebyshev_u).collect();
    let ss = inverse_sequence_from_rs(&rs);
    assert_eq!(ss[0], Poly::one());
    assert_eq!(ss[1], Poly::from_coeffs(vec![qi(0), qi(-2)]));
    assert_eq!(ss[2], Poly::one());
    for s in ss.iter().skip(3) {
        assert!(s.is_zero());
    }
}

#[test]
fn basis_lowering_reconstructs_its_own_basis() {
    // anchors matching the basis's own values force r_n = p_n
    let spec = FamilySpec::parse("charlier:a=1").unwrap();
    let basis: Vec<Poly> = (0..=5).map(|n| spec.monic(n).unwrap()).collect();
    let anchors: Vec<_> = (1..=5).map(|n| basis[n].eval(&qi(0))).collect();
    let op = LoweringOperator::BasisLowering(basis.clone());
    let built = build_adapted_basis(&op, &qi(0), &anchors, 5).unwrap();
    for n in 0..=5 {
        assert_eq!(built.rs[n], basis[n]);
    }
    let inv = build_inverse_sequence(&built);
    // convolution inverse property holds
    for n in 1..=5usize {
        let mut acc = Poly::zero();
        for j in 0..=n {
            acc = &acc + &(&inv.ss[j] * &built.rs[n - j]);
        }
        assert!(acc.is_zero());
    }
}

#[test]
fn delta_q_direct_expansion_from_base_moments() {
    // q_n^i = sum_g mu^0_{g+i} binom(g+i, i) binom(-x+i, n-g) for the
    // difference specialization, straight from the base moments
    for fam in [
        "charlier:a=2",
        "meixner:a=1/3,c=2",
        "krawtchouk:a=3/4,N=17/2",
        "hahn:alpha=9/2,c=5/3,N=13/7",
    ] {
        let spec = FamilySpec::parse(fam).unwrap();
        let ctx = master_context(&spec, OpKind::Delta, 10).unwrap();
        for n in 0..=5usize {
            for i in 0..=5usize {
                let mut direct = Poly::zero();
                for g in 0..=n {
                    let c = spec.binomial_moment(g + i).unwrap()
                        * opdet_core::arith::binom_int(g + i, i);
                    let b = (&Poly::constant(qu(i)) - &Poly::var()).binom(n - g);
                    direct = &direct + &b.scale(&c);
                }
                assert_eq!(ctx.q_poly(n, i), direct, "{fam} n={n} i={i}");
            }
        }
    }
}

#[test]
fn q_recurrences_of_the_two_specializations() {
    // derivative case at the natural anchor x0:
    //   q_n^{i+1} - (x - x0) q_n^i = (n+1) q_{n+1}^i
    for fam in ["jacobi:alpha=1/2,beta=-1/3", "laguerre:alpha=7/5"] {
        let spec = FamilySpec::parse(fam).unwrap();
        let ctx = master_context(&spec, OpKind::Ddx, 10).unwrap();
        let shifted = &Poly::var() - &Poly::constant(spec.natural_x0());
        for n in 0..=4usize {
            for i in 0..=4usize {
                let lhs = &ctx.q_poly(n, i + 1) - &(&shifted * &ctx.q_poly(n, i));
                let rhs = ctx.q_poly(n + 1, i).scale(&qu(n + 1));
                assert_eq!(lhs, rhs, "{fam} derivative q-recurrence fails at n={n}, i={i}");
            }
        }
    }
    // difference case:
    //   q_n^{i+1}(x) + ((-x+i+1)/(i+1)) q_n^i(x) = ((n+1)/(i+1)) q_{n+1}^i(x-1)
    for fam in ["charlier:a=2", "hahn:alpha=9/2,c=5/3,N=13/7"] {
        let spec = FamilySpec::parse(fam).unwrap();
        let ctx = master_context(&spec, OpKind::Delta, 10).unwrap();
        for n in 0..=4usize {
            for i in 0..=4usize {
                let factor = (&Poly::constant(qu(i) + qi(1)) - &Poly::var())
                    .scale(&qu(i + 1).recip());
                let lhs = &ctx.q_poly(n, i + 1) + &(&factor * &ctx.q_poly(n, i));
                let rhs = ctx
                    .q_poly(n + 1, i)
                    .shift(&qi(-1))
                    .scale(&(qu(n + 1) / qu(i + 1)));
                assert_eq!(lhs, rhs, "{fam} difference q-recurrence fails at n={n}, i={i}");
            }
        }
    }
}
