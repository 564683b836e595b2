use extremal::crystal::{ExtremalVerdict, Window};
use extremal::lattice::RootSystem;
use extremal::monomial::{parse_exps, phi_exps, Exponents};
use extremal::qcoeff::{Direction, LaurentPoly, RationalQ};
use extremal::torep::{
    basis_vector, build_section5, build_thin, check_module, compare_with_fr, section5_smax, verify_extremal_vector,
    LoopModule, Relation, RelationRanges, Vector,
};
use extremal::Error;

fn rs3() -> RootSystem {
    RootSystem::new(3).unwrap()
}

fn s5() -> LoopModule {
    build_section5(7, Window::new(-16, 16).unwrap()).unwrap()
}

fn node(module: &LoopModule, s: &str) -> usize {
    node_exps(module, &parse_exps(s).unwrap())
}

fn node_exps(module: &LoopModule, e: &Exponents) -> usize {
    module.graph().find_exps(e).unwrap_or_else(|| panic!("{e:?} not in the module"))
}

fn q(e: i64) -> RationalQ {
    RationalQ::q_pow(e)
}

fn ratio(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalQ {
    RationalQ::new(LaurentPoly::from_terms(num.iter().copied()), LaurentPoly::from_terms(den.iter().copied())).unwrap()
}

#[test]
fn divided_square_follows_the_rotation() {
    let module = s5();
    let rs = rs3();
    for m in ["Y_{1,1}Y_{1,-1}Y_{0,2}^{-1}Y_{0,0}^{-1}", "Y_{1,1}Y_{1,-5}Y_{0,2}^{-1}Y_{0,-4}^{-1}"] {
        let mut e = parse_exps(m).unwrap();
        for i in 1..=3 {
            let k = node_exps(&module, &e);
            let next = phi_exps(&rs, &e);
            let w = module.divided_power_x(Direction::Minus, i, 2, &basis_vector(k)).unwrap();
            assert_eq!(w, basis_vector(node_exps(&module, &next)), "{m} step {i}");
            e = next;
        }
    }
}

#[test]
fn exprod_raising_from_a_branch() {
    let module = s5();
    // a = -5, b = 1: x^+_r v_{Y_{1,-3}^{-1}Y_{1,1}} = q^{-4r} v_{Y_{1,-5}Y_{1,1}}
    let top = node(&module, "Y_{1,1}Y_{1,-5}Y_{0,2}^{-1}Y_{0,-4}^{-1}");
    let a_branch = node(&module, "Y_{1,1}Y_{1,-3}^{-1}Y_{2,-4}Y_{0,2}^{-1}");
    for r in -3..=3 {
        let v = module.act_x(Direction::Plus, 1, r, &basis_vector(a_branch)).unwrap();
        assert_eq!(v, Vector::from([(top, q(-4 * r))]));
    }
}

/// Independent 4x4 matrices of the tensor block with parameters (a, b), on
/// the basis Y_aY_b, Y_{a+2}^{-1}Y_b, Y_aY_{b+2}^{-1}, Y_{a+2}^{-1}Y_{b+2}^{-1}.
fn oracle(a: i64, b: i64, sign: Direction, r: i64) -> [[RationalQ; 4]; 4] {
    let c1 = ratio(&[(b - 1, 1), (a + 1, -1)], &[(b, 1), (a, -1)]);
    let c2 = ratio(&[(b + 1, 1), (a - 1, -1)], &[(b, 1), (a, -1)]);
    let qa = q(r * (a + 1));
    let qb = q(r * (b + 1));
    let mut m: [[RationalQ; 4]; 4] = Default::default();
    match sign {
        Direction::Minus => {
            m[1][0] = &c1 * &qa;
            m[2][0] = &c2 * &qb;
            m[3][1] = qb;
            m[3][2] = qa;
        }
        Direction::Plus => {
            m[0][1] = qa.clone();
            m[0][2] = qb.clone();
            m[1][3] = &c1 * &qb;
            m[2][3] = &c2 * &qa;
        }
    }
    m
}

fn matmul(x: &[[RationalQ; 4]; 4], y: &[[RationalQ; 4]; 4]) -> [[RationalQ; 4]; 4] {
    let mut out: [[RationalQ; 4]; 4] = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            let mut s = RationalQ::zero();
            for k in 0..4 {
                s = &s + &(&x[i][k] * &y[k][j]);
            }
            out[i][j] = s;
        }
    }
    out
}

fn lin(terms: &[(RationalQ, &[[RationalQ; 4]; 4])]) -> [[RationalQ; 4]; 4] {
    let mut out: [[RationalQ; 4]; 4] = Default::default();
    for (c, m) in terms {
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = &out[i][j] + &(c * &m[i][j]);
            }
        }
    }
    out
}

fn is_zero(m: &[[RationalQ; 4]; 4]) -> bool {
    m.iter().flatten().all(RationalQ::is_zero)
}

#[test]
fn tensor_block_matches_matrix_oracle() {
    let module = s5();
    let names = [
        "Y_{1,1}Y_{1,-5}Y_{0,2}^{-1}Y_{0,-4}^{-1}",
        "Y_{1,1}Y_{1,-3}^{-1}Y_{2,-4}Y_{0,2}^{-1}",
        "Y_{1,3}^{-1}Y_{1,-5}Y_{2,2}Y_{0,-4}^{-1}",
        "Y_{1,3}^{-1}Y_{1,-3}^{-1}Y_{2,2}Y_{2,-4}",
    ];
    let idx: Vec<usize> = names.iter().map(|s| node(&module, s)).collect();
    for sign in [Direction::Plus, Direction::Minus] {
        for r in -2..=2 {
            let m = oracle(-5, 1, sign, r);
            for (col, &k) in idx.iter().enumerate() {
                let v = module.act_x(sign, 1, r, &basis_vector(k)).unwrap();
                let expect: Vector = (0..4).filter(|&row| !m[row][col].is_zero()).map(|row| (idx[row], m[row][col].clone())).collect();
                assert_eq!(v, expect, "{sign:?} r={r} column {col}");
            }
        }
    }
}

#[test]
fn matrix_oracle_satisfies_the_rank_one_relations() {
    for (a, b) in [(-5, 1), (-1, 1), (-9, 1), (0, 6)] {
        let x = |s, r| oracle(a, b, s, r);
        for r in -2..=2 {
            for rp in -2..=2 {
                // [x^+_r, x^-_{r'}] is diagonal and depends on r + r' only
                let c = lin(&[(RationalQ::one(), &matmul(&x(Direction::Plus, r), &x(Direction::Minus, rp))), (-RationalQ::one(), &matmul(&x(Direction::Minus, rp), &x(Direction::Plus, r)))]);
                for i in 0..4 {
                    for j in 0..4 {
                        assert!(i == j || c[i][j].is_zero());
                    }
                }
                let d = lin(&[(RationalQ::one(), &matmul(&x(Direction::Plus, r + rp), &x(Direction::Minus, 0))), (-RationalQ::one(), &matmul(&x(Direction::Minus, 0), &x(Direction::Plus, r + rp)))]);
                assert!(is_zero(&lin(&[(RationalQ::one(), &c), (-RationalQ::one(), &d)])));
                // x_{r+1} x_{r'} - q^{±2} x_{r'} x_{r+1} = q^{±2} x_r x_{r'+1} - x_{r'+1} x_r
                for sign in [Direction::Plus, Direction::Minus] {
                    let q2 = q(2 * sign.sign());
                    let res = lin(&[
                        (RationalQ::one(), &matmul(&x(sign, r + 1), &x(sign, rp))),
                        (-&q2, &matmul(&x(sign, rp), &x(sign, r + 1))),
                        (-&q2, &matmul(&x(sign, r), &x(sign, rp + 1))),
                        (RationalQ::one(), &matmul(&x(sign, rp + 1), &x(sign, r))),
                    ]);
                    assert!(is_zero(&res), "a={a} b={b} r={r} r'={rp}");
                }
            }
        }
    }
}

#[test]
fn hand_computed_commutator() {
    let module = build_thin(&rs3(), 1, Window::new(-12, 12).unwrap()).unwrap();
    let m0 = node(&module, "Y_{1,0}Y_{0,1}^{-1}");
    let v = basis_vector(m0);
    let xm = module.act_x(Direction::Minus, 1, 0, &v).unwrap();
    let lhs = module.act_x(Direction::Plus, 1, 1, &xm).unwrap();
    assert!(module.act_x(Direction::Plus, 1, 0, &v).unwrap().is_empty());
    assert_eq!(lhs, Vector::from([(m0, q(1))]));
    let phi = module.phi_series(m0, 1, Direction::Plus, 1).unwrap().coeff(1);
    assert_eq!(&phi / &ratio(&[(1, 1), (-1, -1)], &[(0, 1)]), q(1));
}

#[test]
fn non_adjacent_directions_commute() {
    let module = build_thin(&rs3(), 2, Window::new(-12, 12).unwrap()).unwrap();
    for k in module.test_vectors(4) {
        let v = basis_vector(k);
        for (r, rp) in [(0, 0), (1, -1), (2, 3)] {
            let a = module.act_x(Direction::Minus, 3, rp, &module.act_x(Direction::Plus, 1, r, &v).unwrap()).unwrap();
            let b = module.act_x(Direction::Plus, 1, r, &module.act_x(Direction::Minus, 3, rp, &v).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn relation_suite_on_small_windows() {
    let ranges = RelationRanges { r_max: 2, m_values: vec![-1, 1, 2] };
    for ell in 1..=3 {
        let module = build_thin(&rs3(), ell, Window::new(-12, 12).unwrap()).unwrap();
        let rep = check_module(&module, 4, &ranges, &Relation::ALL).unwrap();
        assert!(rep.all_zero(), "ell={ell}: {} nonzero, {} inconclusive", rep.nonzero(), rep.inconclusive());
    }
    let rep = check_module(&s5(), 4, &ranges, &[Relation::Xx, Relation::Serre, Relation::Quadratic]).unwrap();
    assert!(rep.all_zero(), "section5: {} nonzero, {} inconclusive", rep.nonzero(), rep.inconclusive());
    assert!(rep.vectors > 20);
}

#[test]
fn statistics_phi_agrees_with_fr() {
    for ell in 1..=3 {
        let module = build_thin(&rs3(), ell, Window::new(-12, 12).unwrap()).unwrap();
        let rep = compare_with_fr(&module, 6).unwrap();
        assert!(rep.compared > 0);
        assert!(rep.mismatches.is_empty(), "ell={ell}: {:?}", rep.mismatches.first());
    }
}

#[test]
fn extremal_and_non_extremal_vectors() {
    let module = build_section5(11, Window::new(-24, 24).unwrap()).unwrap();
    for m in ["Y_{1,1}Y_{1,-1}Y_{0,2}^{-1}Y_{0,0}^{-1}", "Y_{1,1}Y_{1,-5}Y_{0,2}^{-1}Y_{0,-4}^{-1}"] {
        let rep = verify_extremal_vector(&module, node(&module, m), 3).unwrap();
        assert_eq!(rep.verdict, ExtremalVerdict::Extremal, "{m}: {:?}", rep.failure);
        assert!(rep.orbit > 1);
    }
    let k = node(&module, "Y_{1,3}^{-1}Y_{1,-1}Y_{2,2}Y_{0,0}^{-1}");
    let rep = verify_extremal_vector(&module, k, 3).unwrap();
    assert_eq!(rep.verdict, ExtremalVerdict::NotExtremal);
    assert!(rep.failure.unwrap().contains("x^+_{1,0}"));

    let thin = build_thin(&rs3(), 1, Window::new(-16, 16).unwrap()).unwrap();
    let rep = verify_extremal_vector(&thin, node(&thin, "Y_{1,0}Y_{0,1}^{-1}"), 4).unwrap();
    assert_eq!(rep.verdict, ExtremalVerdict::Extremal);
    assert!(rep.orbit > 4);
}

#[test]
fn section5_window_must_cover_its_components() {
    let w = Window::new(-16, 16).unwrap();
    assert_eq!(section5_smax(w), Some(7));
    assert!(build_section5(2, w).is_err());
    let module = s5();
    let chi = module.qcharacter(None);
    assert_eq!(chi.len(), module.len());
    assert!(chi.values().all(|&c| c == 1));
}

#[test]
fn spectral_twist_scales_actions() {
    let module = build_thin(&rs3(), 1, Window::new(-12, 12).unwrap()).unwrap();
    let twisted = module.spectral_twist(2);
    let k = node(&module, "Y_{1,0}Y_{0,1}^{-1}");
    for r in -2..=2 {
        let a = module.act_x(Direction::Minus, 1, r, &basis_vector(k)).unwrap();
        let b = twisted.act_x(Direction::Minus, 1, r, &basis_vector(k)).unwrap();
        let scaled: Vector = a.into_iter().map(|(x, c)| (x, &c * &q(2 * r))).collect();
        assert_eq!(b, scaled);
    }
}

#[test]
fn usable_nodes_only() {
    let module = build_thin(&rs3(), 1, Window::new(-8, 8).unwrap()).unwrap();
    let k = (0..module.len()).find(|&k| !module.is_usable(k)).unwrap();
    assert!(matches!(module.act_x(Direction::Plus, 0, 0, &basis_vector(k)), Err(Error::Window(_))));
}
