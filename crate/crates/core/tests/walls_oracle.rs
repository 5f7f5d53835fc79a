use std::collections::{HashMap, HashSet};

use gpwalls::cayley::{spheres, GeodesicPath};
use gpwalls::walls::{
    crosses_by_carrier, crosses_by_heap, product_membership, separates, separation, wall_of_edge,
    walls_of_path, Relation, Wall,
};
use gpwalls::{catalog, Group, Word};
use gpwalls_testkit::{all_words, shuffles, EdgeClasses, WordBall};

fn geodesic_words(g: &Group, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::new()];
    let mut layer = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in g.letters() {
                let mut v = w.clone();
                v.push(l);
                if g.is_geodesic(&v).unwrap() {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn wall_equality_matches_square_equivalence() {
    for (name, depth) in [("hexagon", 6), ("croke-kleiner", 5), ("gamma1", 5), ("k33", 5)] {
        let g = catalog::group(name).unwrap();
        let ball = WordBall::new(&g, depth);
        let edges = EdgeClasses::new(&g, &ball);
        let mut by_wall: HashMap<Wall, usize> = HashMap::new();
        let mut by_class: HashMap<usize, Wall> = HashMap::new();
        let mut checked = 0;
        for c in 0..ball.class_count() {
            if ball.class_length(c) + 2 > depth {
                continue;
            }
            let tail = g.normal_form(&ball.class_word(c)).unwrap();
            for l in g.letters() {
                let wall = wall_of_edge(&g, &tail, l).unwrap();
                let class = edges.class(&g, &ball, c, l).unwrap();
                assert_eq!(*by_wall.entry(wall.clone()).or_insert(class), class, "{name}");
                assert_eq!(by_class.entry(class).or_insert(wall.clone()), &wall, "{name}");
                checked += 1;
            }
        }
        assert!(checked > 100);
    }
}

#[test]
fn wall_examples_against_oracle() {
    let g = catalog::group("hexagon").unwrap();
    let ball = WordBall::new(&g, 4);
    let edges = EdgeClasses::new(&g, &ball);
    let w = |s: &str| g.graph().parse_word(s).unwrap();
    let h1 = w("h1")[0];
    let class = |t: &str| edges.class(&g, &ball, ball.class(&w(t)).unwrap(), h1).unwrap();
    assert_eq!(class("ε"), class("h2"));
    assert_ne!(class("ε"), class("h3"));
    let e = |s: &str| g.parse_element(s).unwrap();
    assert_eq!(wall_of_edge(&g, &e("h2"), h1).unwrap(), wall_of_edge(&g, &e("ε"), h1).unwrap());
    assert_eq!(wall_of_edge(&g, &e("h3"), h1).unwrap().key, w("h3"));
}

#[test]
fn geodesics_cross_distinct_walls() {
    for name in catalog::BUILTIN_NAMES {
        let g = catalog::group(name).unwrap();
        let max = if g.graph().valence() > 8 { 5 } else { 6 };
        for w in geodesic_words(&g, max) {
            let p = GeodesicPath::from_identity(&g, &w).unwrap();
            let walls = walls_of_path(&g, &p).unwrap();
            let set: HashSet<&Wall> = walls.iter().collect();
            assert_eq!(set.len(), w.len(), "{name} {w:?}");
        }
    }
}

fn check_crossing(g: &Group, ball: &WordBall, edges: &EdgeClasses, pairs: &[(Wall, Wall)]) {
    let class_of = |w: &Wall| {
        let (tail, l) = w.source.clone().unwrap();
        edges.class(g, ball, ball.class(&tail).unwrap(), l).unwrap()
    };
    for (a, b) in pairs {
        let carrier = crosses_by_carrier(g, a, b);
        let heap = crosses_by_heap(g, a, b);
        let brute = a != b && edges.cross(class_of(a), class_of(b));
        assert_eq!(carrier, heap, "{a:?} {b:?}");
        assert_eq!(carrier, brute, "{a:?} {b:?}");
        assert_eq!(carrier, crosses_by_carrier(g, b, a));
    }
}

#[test]
fn crossing_algorithms_agree_on_path_pairs() {
    for name in ["hexagon", "croke-kleiner"] {
        let g = catalog::group(name).unwrap();
        let ball = WordBall::new(&g, 6);
        let edges = EdgeClasses::new(&g, &ball);
        let mut pairs = Vec::new();
        for w in geodesic_words(&g, 5) {
            let walls = walls_of_path(&g, &GeodesicPath::from_identity(&g, &w).unwrap()).unwrap();
            for i in 0..walls.len() {
                for j in i + 1..walls.len() {
                    pairs.push((walls[i].clone(), walls[j].clone()));
                }
            }
        }
        check_crossing(&g, &ball, &edges, &pairs);
    }
}

#[test]
fn crossing_algorithms_agree_near_identity() {
    // dual edges inside the ball of radius 3: any crossing square lies within radius 6
    for name in ["hexagon", "croke-kleiner"] {
        let g = catalog::group(name).unwrap();
        let ball = WordBall::new(&g, 6);
        let edges = EdgeClasses::new(&g, &ball);
        let mut walls: Vec<Wall> = Vec::new();
        let mut seen = HashSet::new();
        for u in spheres(&g, 2).unwrap().into_iter().flatten() {
            for l in g.letters() {
                let tail = g.normal_form(&u).unwrap();
                let w = wall_of_edge(&g, &tail, l).unwrap();
                if seen.insert(w.clone()) {
                    walls.push(w);
                }
            }
        }
        let pairs: Vec<(Wall, Wall)> = walls
            .iter()
            .enumerate()
            .flat_map(|(i, a)| walls[i..].iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        check_crossing(&g, &ball, &edges, &pairs);
    }
}

#[test]
fn carrier_crossing_example() {
    let g = catalog::group("hexagon").unwrap();
    let e = |s: &str| g.parse_element(s).unwrap();
    let l = |s: &str| g.graph().parse_word(s).unwrap()[0];
    let a = wall_of_edge(&g, &e("ε"), l("h2")).unwrap();
    let b = wall_of_edge(&g, &e("h1"), l("h3")).unwrap();
    assert!(crosses_by_carrier(&g, &a, &b));
    assert!(crosses_by_heap(&g, &a, &b));
}

#[test]
fn product_membership_against_enumeration() {
    let g = catalog::group("hexagon").unwrap();
    let ball = WordBall::new(&g, 4);
    let names = |v: &[&str]| g.mask_of(v).unwrap();
    let subsets: Vec<u64> = (1u64..64).collect();
    for &a in subsets.iter().step_by(5) {
        for &b in subsets.iter().step_by(7) {
            // ⟨A⟩⟨B⟩ ∩ ball(4): reduced factorizations suffice
            let mut members = HashSet::new();
            for la in 0..=4 {
                for x in all_words(&g, la).into_iter().filter(|x| x.iter().all(|l| a >> l.gen() & 1 == 1)) {
                    for lb in 0..=4 - la {
                        for y in all_words(&g, lb)
                            .into_iter()
                            .filter(|y| y.iter().all(|l| b >> l.gen() & 1 == 1))
                        {
                            members.insert(ball.class(&x.concat(&y)).unwrap());
                        }
                    }
                }
            }
            for c in 0..ball.class_count() {
                let w = g.normal_form(&ball.class_word(c)).unwrap();
                assert_eq!(product_membership(&g, &w, a, b), members.contains(&c), "{a:b} {b:b} {w:?}");
            }
        }
    }
    let a = names(&["h2", "h6"]);
    let b = names(&["h1", "h3"]);
    assert!(product_membership(&g, &g.parse_element("h2 h1").unwrap(), a, b));
    assert!(!product_membership(&g, &g.parse_element("h1 h4").unwrap(), a, b));
}

#[test]
fn separation_does_not_depend_on_geodesic() {
    for (name, radius) in [("hexagon", 5), ("croke-kleiner", 4)] {
        let g = catalog::group(name).unwrap();
        for base in ["ε", "h1 h3", "a c^-1"] {
            let Ok(x) = g.parse_element(base) else { continue };
            for u in spheres(&g, radius).unwrap().into_iter().flatten() {
                let y = g.mul_element_word(&x, &u);
                let mut reference: Option<HashSet<Wall>> = None;
                for order in shuffles(&g, &u) {
                    let w: Word = order.iter().map(|&i| u[i]).collect();
                    let path = GeodesicPath::new(&g, &x, &w).unwrap();
                    let walls: HashSet<Wall> = walls_of_path(&g, &path).unwrap().into_iter().collect();
                    for wall in &walls {
                        assert!(separates(&g, wall, &x, &y).unwrap());
                    }
                    match &reference {
                        Some(r) => assert_eq!(r, &walls),
                        None => reference = Some(walls),
                    }
                }
            }
        }
    }
}

#[test]
fn hexagon_separation_count_against_oracle() {
    let g = catalog::group("hexagon").unwrap();
    let ball = WordBall::new(&g, 7);
    let edges = EdgeClasses::new(&g, &ball);
    let w = g.graph().parse_word("h1 h3").unwrap();
    let walls = walls_of_path(&g, &GeodesicPath::from_identity(&g, &w).unwrap()).unwrap();
    let class_of = |wall: &Wall| {
        let (tail, l) = wall.source.clone().unwrap();
        edges.class(&g, &ball, ball.class(&tail).unwrap(), l).unwrap()
    };
    let (c1, c2) = (class_of(&walls[0]), class_of(&walls[1]));
    let both: HashSet<usize> = edges
        .crossing_pairs()
        .filter(|&(a, _)| a == c1)
        .map(|(_, b)| b)
        .filter(|&b| edges.cross(b, c2))
        .collect();
    assert_eq!(both.len(), 1);
    let v = separation(&g, &walls[0], &walls[1], 8, None).unwrap();
    assert_eq!(v.relation, Relation::Disjoint);
    assert_eq!(v.crossing_both_count, both.len());
}

#[test]
fn croke_kleiner_b_walls_are_far_from_separated() {
    let g = catalog::group("croke-kleiner").unwrap();
    let b = g.graph().parse_word("b").unwrap()[0];
    let w1 = wall_of_edge(&g, &g.identity(), b).unwrap();
    let w2 = wall_of_edge(&g, &g.parse_element("b").unwrap(), b).unwrap();
    let counts: Vec<usize> = (1..=5)
        .map(|r| separation(&g, &w1, &w2, r, None).unwrap().crossing_both_count)
        .collect();
    assert!(counts[2] >= 4, "{counts:?}");
    assert!(counts.windows(2).all(|p| p[0] < p[1]), "{counts:?}");

    // witnesses at radius 3 cross both walls by the square oracle
    let ball = WordBall::new(&g, 6);
    let edges = EdgeClasses::new(&g, &ball);
    let class_of = |wall: &Wall| {
        let (tail, l) = wall.source.clone().unwrap();
        edges.class(&g, &ball, ball.class(&tail).unwrap(), l).unwrap()
    };
    let v = separation(&g, &w1, &w2, 3, None).unwrap();
    for wit in &v.witnesses {
        assert!(edges.cross(class_of(wit), class_of(&w1)));
        assert!(edges.cross(class_of(wit), class_of(&w2)));
    }
}
