use std::collections::VecDeque;

use gpwalls::divergence::{
    default_t_samples, divergence_profile, ldiv_at, quadratic_bound_check, validate_detour, ClassifyConfig,
    Growth, SearchBound,
};
use gpwalls::rays::RaySpec;
use gpwalls::{catalog, Group};
use gpwalls_testkit::WordBall;

// Plain BFS over the word ball, with the ball center moved to the identity.
fn oracle_ldiv(g: &Group, wb: &WordBall, ray: &RaySpec, r: usize, t: usize, r_max: usize) -> Option<usize> {
    let w = ray.unroll(t + r);
    let back: Vec<_> = w[t - r..t].iter().rev().map(|&l| wb.inverse_letter(l)).collect();
    let source = wb.class(&back).unwrap();
    let target = wb.class(&w[t..t + r]).unwrap();
    let ok = |c: usize| (r..=r_max).contains(&wb.class_length(c));
    let mut dist = vec![usize::MAX; wb.class_count()];
    dist[source] = 0;
    let mut q = VecDeque::from([source]);
    while let Some(c) = q.pop_front() {
        if c == target {
            return Some(dist[c]);
        }
        for l in g.letters() {
            let Some(d) = wb.step(c, l) else { continue };
            if ok(d) && dist[d] == usize::MAX {
                dist[d] = dist[c] + 1;
                q.push_back(d);
            }
        }
    }
    None
}

fn check_against_oracle(name: &str, period: &str, offset: usize, rs: &[usize], frozen: &[usize]) {
    let g = catalog::group(name).unwrap();
    let ray = RaySpec::parse(&g, "", period, 30).unwrap();
    let wb = WordBall::new(&g, rs.iter().max().unwrap() + offset + 1);
    for (&r, &expect) in rs.iter().zip(frozen) {
        for t in default_t_samples(&ray, r) {
            let s = ldiv_at(&g, &ray, r, t, r + offset).unwrap();
            assert!(validate_detour(&g, &ray, &s));
            let oracle = oracle_ldiv(&g, &wb, &ray, r, t, r + offset);
            assert_eq!(s.result.value(), oracle, "{name} r={r} t={t}");
            assert_eq!(oracle, Some(expect), "{name} r={r} t={t}");
        }
    }
}

#[test]
fn hexagon_detours_match_oracle() {
    check_against_oracle("hexagon", "h1 h3", 1, &[1, 2, 3, 4], &[4, 12, 40, 144]);
}

#[test]
fn k33_detours_match_oracle() {
    check_against_oracle("k33", "x1 y1 x2 y2", 2, &[1, 2, 3, 4], &[2, 8, 10, 16]);
}

#[test]
fn tree_has_no_detour() {
    let g = catalog::group("tree3").unwrap();
    let ray = RaySpec::parse(&g, "", "t1 t2 t3", 30).unwrap();
    let wb = WordBall::new(&g, 6);
    for r in 1..=3 {
        assert_eq!(oracle_ldiv(&g, &wb, &ray, r, r + 1, 5), None);
    }
    let p = divergence_profile(&g, &ray, &[1, 2, 3], None, SearchBound::Offset(2), ClassifyConfig::default())
        .unwrap();
    assert_eq!(p.classification, Growth::NoDetour);
    assert!(p.ldiv_values.iter().all(Option::is_none));
}

#[test]
fn k33_profile_is_linear() {
    let g = catalog::group("k33").unwrap();
    let ray = RaySpec::parse(&g, "", "x1 y1 x2 y2", 30).unwrap();
    let rs: Vec<usize> = (2..=10).collect();
    let p = divergence_profile(&g, &ray, &rs, None, SearchBound::Offset(1), ClassifyConfig::default()).unwrap();
    let values: Vec<usize> = p.ldiv_values.iter().map(|v| v.unwrap()).collect();
    assert_eq!(values, [8, 10, 16, 18, 24, 26, 32, 34, 40]);
    assert!(values.iter().zip(&rs).all(|(&v, &r)| v <= 4 * r + 2));
    assert_eq!(p.classification, Growth::Linear);
    assert!((0.8..=1.2).contains(&p.slope), "{}", p.slope);
    assert!(p.witnesses.iter().all(|s| validate_detour(&g, &ray, s)));
}

#[test]
fn k33_fails_the_quadratic_bound_far_out() {
    let g = catalog::group("k33").unwrap();
    let ray = RaySpec::parse(&g, "", "x1 y1 x2 y2", 50).unwrap();
    let rs = [17, 18, 20];
    let p = divergence_profile(&g, &ray, &rs, None, SearchBound::Offset(1), ClassifyConfig::default()).unwrap();
    assert_eq!(p.ldiv_values, [Some(66), Some(72), Some(80)]);
    let (rows, frac) = quadratic_bound_check(&p.r_values, &p.ldiv_values, 1, 2.0).unwrap();
    assert!(rows.iter().all(|b| !b.pass), "{rows:?}");
    assert_eq!(frac, 0.0);
}

#[test]
fn more_t_samples_never_raise_ldiv() {
    let g = catalog::group("hexagon").unwrap();
    let ray = RaySpec::parse(&g, "h2", "h1 h3 h5", 30).unwrap();
    let cfg = ClassifyConfig::default();
    for r in 2..=3 {
        let few =
            divergence_profile(&g, &ray, &[r], Some(&[r + 1]), SearchBound::Offset(1), cfg).unwrap();
        let all: Vec<usize> = (r + 1..=r + 5).collect();
        let many =
            divergence_profile(&g, &ray, &[r], Some(&all), SearchBound::Offset(1), cfg).unwrap();
        assert!(many.ldiv_values[0] <= few.ldiv_values[0]);
    }
}
