use extremal::closedness::{closed_report, default_margin, kashiwara_closed, subcrystal_closed, Verdict};
use extremal::crystal::{generate, Window};
use extremal::lattice::RootSystem;
use extremal::monomial::{fundamental_monomial, normalize_exps, Exponents, Monomial};

fn window(rs: &RootSystem) -> Window {
    let w = 6 * rs.size() as i64;
    Window::new(-w, w).unwrap()
}

fn closed_pattern(n: usize) -> Vec<bool> {
    let rs = RootSystem::new(n).unwrap();
    (1..=n)
        .map(|ell| {
            let rep = closed_report(&rs, ell, window(&rs), default_margin(&rs)).unwrap();
            assert_ne!(rep.verdict, Verdict::Inconclusive, "n={n} ell={ell}");
            assert!(rep.kashiwara.closed);
            rep.verdict == Verdict::Closed
        })
        .collect()
}

#[test]
fn closed_exactly_for_one_middle_and_last() {
    for n in [3usize, 5, 7] {
        let r = (n - 1) / 2;
        let expect: Vec<bool> = (1..=n).map(|l| l == 1 || l == r + 1 || l == n).collect();
        assert_eq!(closed_pattern(n), expect, "n = {n}");
    }
}

fn shifted(e: &[((usize, i64), i64)], s: i64) -> Exponents {
    normalize_exps(e.iter().map(|&((i, l), u)| ((i, l + s), u)))
}

#[test]
fn witness_has_the_predicted_form() {
    for (n, ell) in [(5usize, 2usize), (7, 2), (7, 3)] {
        check_witness(n, ell);
    }
}

// M_j for 1 <= j < ell; at j = ell the monomial degenerates to Y_{0,*}^{-1}Y_{ell,*}
fn check_witness(n: usize, ell: usize) {
    let rs = RootSystem::new(n).unwrap();
    let rep = closed_report(&rs, ell, window(&rs), default_margin(&rs)).unwrap();
    let (n, l) = (n as i64, ell as i64);
    for j in 1..ell {
        let jj = j as i64;
        let mj = Monomial::from_exps(
            &rs,
            normalize_exps([
                ((ell, 2 * jj), 1),
                ((0, n - l + 1 + 2 * jj), -1),
                ((j, l + jj), -1),
                ((j, n - l + 1 + jj), 1),
            ]),
            0.into(),
        )
        .unwrap();
        let target = mj.mul_a(&rs, j, l + jj - 1, 1);
        let d = &rep.directions[j];
        assert_eq!(d.verdict, Verdict::NotClosed);
        let found = d.witnesses.iter().any(|w| {
            (-12..=12).any(|k| shifted(target.exps(), k * (n + 1)) == w.missing.exps())
                && w.missing.weight().h == target.weight().h
        });
        assert!(found, "n={n} ell={ell} direction {j}: no witness of the form M_j A_(j,l+j-1)");
    }
}

#[test]
fn subcrystals_are_closed() {
    for n in [3usize, 5] {
        let rs = RootSystem::new(n).unwrap();
        let r = (n - 1) / 2;
        for ell in [1, r + 1, n] {
            let g = generate(&rs, &[fundamental_monomial(&rs, ell).unwrap()], window(&rs)).unwrap();
            let k = g.find(&fundamental_monomial(&rs, ell).unwrap()).unwrap();
            for j in rs.nodes() {
                for d in subcrystal_closed(&g, k, j).unwrap() {
                    assert_eq!(d.verdict, Verdict::Closed, "n={n} ell={ell} j={j} i={}", d.direction);
                }
            }
        }
    }
}

#[test]
fn removing_an_interior_node_breaks_stability() {
    let rs = RootSystem::new(3).unwrap();
    let g = generate(&rs, &[fundamental_monomial(&rs, 1).unwrap()], window(&rs)).unwrap();
    let interior: Vec<Monomial> = (0..g.len()).filter(|&k| g.is_interior(k)).map(|k| g.node(k).clone()).collect();
    assert!(kashiwara_closed(&rs, g.nodes(), &[0, 1, 2, 3], |m| interior.contains(m)).closed);
    let victim = interior[interior.len() / 2].clone();
    let set: Vec<Monomial> = g.nodes().iter().filter(|m| **m != victim).cloned().collect();
    let rep = kashiwara_closed(&rs, &set, &[0, 1, 2, 3], |m| interior.contains(m));
    assert!(!rep.closed);
    assert_eq!(rep.witness.unwrap().2, victim);
}
